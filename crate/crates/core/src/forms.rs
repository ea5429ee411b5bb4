//! Symplectic and Hermitian forms on `F^{2n}`.
//!
//! The standard basis is the designated hyperbolic basis: `e_i` and
//! `e_{n+i}` (0-based `i < n`) form the `i`-th hyperbolic pair and every
//! other pair of basis vectors is orthogonal. Hermitian forms are linear in
//! the first argument and conjugate-linear in the second.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field, FieldSpec};
use crate::linalg::{self, null_space, unit_vector, Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FormKind {
    #[serde(rename = "s")]
    Symplectic,
    #[serde(rename = "h")]
    Hermitian,
}

impl FormKind {
    pub fn short(self) -> &'static str {
        match self {
            FormKind::Symplectic => "sp",
            FormKind::Hermitian => "her",
        }
    }
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

impl std::str::FromStr for FormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<FormKind> {
        match s {
            "sp" | "s" | "symplectic" => Ok(FormKind::Symplectic),
            "her" | "h" | "hermitian" => Ok(FormKind::Hermitian),
            _ => Err(Error::InvalidArgument(format!("unknown form kind '{s}'"))),
        }
    }
}

/// Serialized form of a [`FormSpace`]; the Gram matrix is implied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormSpec {
    pub field: FieldSpec,
    pub n: usize,
    pub kind: FormKind,
}

/// `V = F^{2n}` with a non-degenerate form of Witt index `n`.
#[derive(Clone, Debug)]
pub struct FormSpace {
    field: Arc<Field>,
    n: usize,
    kind: FormKind,
    delta: Elem,
}

impl PartialEq for FormSpace {
    fn eq(&self, other: &FormSpace) -> bool {
        self.n == other.n && self.kind == other.kind && *self.field == *other.field
    }
}

impl FormSpace {
    pub fn new(field: Arc<Field>, n: usize, kind: FormKind) -> Result<FormSpace> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        let delta = match kind {
            FormKind::Symplectic => Elem::ONE,
            FormKind::Hermitian => field.trace_zero_generator()?,
        };
        Ok(FormSpace { field, n, kind, delta })
    }

    /// `Sp_{2n}(q)` for `--form sp`, or `SU_{2n}(q^2)` for `--form her`:
    /// the Hermitian field is the quadratic extension of GF(q).
    pub fn standard(kind: FormKind, q: u32, n: usize) -> Result<FormSpace> {
        let (p, e) = prime_power(q)?;
        let m = match kind {
            FormKind::Symplectic => e,
            FormKind::Hermitian => 2 * e,
        };
        FormSpace::new(Arc::new(crate::gf::make_field(p, m)?), n, kind)
    }

    pub fn from_spec(spec: &FormSpec) -> Result<FormSpace> {
        FormSpace::new(Arc::new(Field::from_spec(&spec.field)?), spec.n, spec.kind)
    }

    pub fn spec(&self) -> FormSpec {
        FormSpec { field: self.field.spec(), n: self.n, kind: self.kind }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn delta(&self) -> Elem {
        self.delta
    }

    /// The order `q` of GF(q) for symplectic spaces, of the fixed subfield
    /// for Hermitian ones.
    pub fn q(&self) -> u32 {
        match self.kind {
            FormKind::Symplectic => self.field.order(),
            FormKind::Hermitian => self.field.subfield_order().unwrap(),
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            FormKind::Symplectic => format!("Sp_{}({})", self.dim(), self.q()),
            FormKind::Hermitian => format!("SU_{}({})", self.dim(), self.field.order()),
        }
    }

    /// The involution attached to the form: conjugation for Hermitian
    /// forms, the identity otherwise.
    #[inline]
    pub fn bar(&self, x: Elem) -> Elem {
        match self.kind {
            FormKind::Symplectic => x,
            FormKind::Hermitian => self.field.conj(x),
        }
    }

    /// Form value of the standard basis vectors `e_i`, `e_j`.
    pub fn gram_entry(&self, i: usize, j: usize) -> Elem {
        let n = self.n;
        if i < n && j == i + n {
            Elem::ONE
        } else if i >= n && j + n == i {
            match self.kind {
                FormKind::Symplectic => self.field.neg(Elem::ONE),
                FormKind::Hermitian => Elem::ONE,
            }
        } else {
            Elem::ZERO
        }
    }

    pub fn gram(&self) -> Vec<Vector> {
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.gram_entry(i, j)).collect()).collect()
    }

    /// `f(u, v)` without dimension checks.
    #[inline]
    pub fn pair(&self, u: &[Elem], v: &[Elem]) -> Elem {
        let f = &*self.field;
        let n = self.n;
        let mut acc = Elem::ZERO;
        for i in 0..n {
            let a = f.mul(u[i], self.bar(v[n + i]));
            let b = f.mul(u[n + i], self.bar(v[i]));
            acc = match self.kind {
                FormKind::Symplectic => f.add(acc, f.sub(a, b)),
                FormKind::Hermitian => f.add(acc, f.add(a, b)),
            };
        }
        acc
    }

    pub fn eval_form(&self, u: &[Elem], v: &[Elem]) -> Result<Elem> {
        for w in [u, v] {
            if w.len() != self.dim() {
                return Err(Error::DimensionMismatch { expected: self.dim(), found: w.len() });
            }
        }
        Ok(self.pair(u, v))
    }

    pub fn is_isotropic(&self, v: &[Elem]) -> bool {
        self.pair(v, v).is_zero()
    }

    /// Coefficients `c` with `f(v, u) = Σ c_j v_j` for every `v`.
    pub fn dual_row(&self, u: &[Elem]) -> Vector {
        let n = self.n;
        let f = &*self.field;
        let mut c = vec![Elem::ZERO; 2 * n];
        for i in 0..n {
            c[i] = self.bar(u[n + i]);
            c[n + i] = match self.kind {
                FormKind::Symplectic => f.neg(u[i]),
                FormKind::Hermitian => f.conj(u[i]),
            };
        }
        c
    }

    fn check(&self, u: &Subspace) -> Result<()> {
        if u.ambient() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.ambient() });
        }
        Ok(())
    }

    pub fn perp(&self, u: &Subspace) -> Result<Subspace> {
        self.check(u)?;
        let rows: Vec<Vector> = u.rows().map(|r| self.dual_row(r)).collect();
        Ok(null_space(&self.field, &rows, self.dim()))
    }

    pub fn radical(&self, u: &Subspace) -> Result<Subspace> {
        u.intersect(&self.field, &self.perp(u)?)
    }

    pub fn is_totally_isotropic(&self, u: &Subspace) -> bool {
        let rows: Vec<&[Elem]> = u.rows().collect();
        rows.iter().enumerate().all(|(i, a)| rows[i..].iter().all(|b| self.pair(a, b).is_zero()))
    }

    /// A hyperbolic basis `[e'_1..e'_m, e'_{m+1}..e'_{2m}]` of `w`, built by
    /// repeatedly splitting off a hyperbolic pair. On `V` itself this returns
    /// the standard basis.
    pub fn hyperbolic_basis(&self, w: &Subspace) -> Result<Vec<Vector>> {
        self.check(w)?;
        if self.radical(w)?.dim() != 0 {
            return Err(Error::Precondition("form restricted to W is degenerate".into()));
        }
        let f = &*self.field;
        let mut es = Vec::new();
        let mut fs = Vec::new();
        let mut cur = w.clone();
        while cur.dim() > 0 {
            let basis = cur.basis();
            let x = self.find_isotropic(&basis)?;
            let b = basis
                .iter()
                .find(|b| !self.pair(&x, b).is_zero())
                .ok_or_else(|| Error::Invariant("isotropic vector in radical".into()))?;
            let s = self.bar(f.inv(self.pair(&x, b)));
            let mut y = linalg::scale(f, s, b);
            let hyy = self.pair(&y, &y);
            if !hyy.is_zero() {
                let t = f.solve_trace(f.neg(hyy))?;
                linalg::axpy(f, t, &x, &mut y);
            }
            debug_assert!(self.is_isotropic(&y) && self.pair(&x, &y) == Elem::ONE);
            let plane = Subspace::from_rows(f, self.dim(), &[x.clone(), y.clone()])?;
            cur = cur.intersect(f, &self.perp(&plane)?)?;
            es.push(x);
            fs.push(y);
        }
        es.extend(fs);
        Ok(es)
    }

    /// First isotropic vector among `basis`, or for Hermitian forms an
    /// isotropic combination of the first two.
    fn find_isotropic(&self, basis: &[Vector]) -> Result<Vector> {
        if let Some(x) = basis.iter().find(|b| self.is_isotropic(b)) {
            return Ok(x.clone());
        }
        if self.kind == FormKind::Symplectic || basis.len() < 2 {
            return Err(Error::Precondition("no isotropic vector: W is anisotropic".into()));
        }
        let f = &*self.field;
        let w1 = &basis[0];
        let alpha = self.pair(w1, w1);
        let mut w2 = basis[1].clone();
        let c = f.neg(f.div(self.pair(&w2, w1), alpha)?);
        linalg::axpy(f, c, w1, &mut w2);
        let beta = self.pair(&w2, &w2);
        if beta.is_zero() {
            return Ok(w2);
        }
        let c = f.solve_norm(f.neg(f.div(alpha, beta)?))?;
        let mut x = w1.clone();
        linalg::axpy(f, c, &w2, &mut x);
        debug_assert!(self.is_isotropic(&x));
        Ok(x)
    }

    /// Completes a partial hyperbolic basis. `partial` assigns vectors to
    /// basis slots `0..2n` (slot `i` pairs with slot `i+n`); the assigned
    /// vectors must already satisfy the hyperbolic relations among
    /// themselves. Missing partners are solved for first, the rest of the
    /// basis comes from the orthogonal complement.
    pub fn extend_hyperbolic(&self, partial: &[(usize, Vector)]) -> Result<Vec<Vector>> {
        let f = &*self.field;
        let dim = self.dim();
        let n = self.n;
        let mut slots: Vec<Option<Vector>> = vec![None; dim];
        for (s, v) in partial {
            if *s >= dim || v.len() != dim {
                return Err(Error::InvalidArgument("bad slot or vector length".into()));
            }
            slots[*s] = Some(v.clone());
        }
        let partner = |s: usize| if s < n { s + n } else { s - n };
        for (i, a) in slots.iter().enumerate() {
            for (j, b) in slots.iter().enumerate() {
                if let (Some(a), Some(b)) = (a, b) {
                    if self.pair(a, b) != self.gram_entry(i, j) {
                        return Err(Error::Precondition("partial basis violates hyperbolic relations".into()));
                    }
                }
            }
        }
        for s in 0..dim {
            if slots[s].is_some() || slots[partner(s)].is_none() {
                continue;
            }
            let assigned: Vec<(usize, Vector)> =
                slots.iter().enumerate().filter_map(|(j, v)| v.clone().map(|v| (j, v))).collect();
            let rows: Vec<Vector> = assigned.iter().map(|(_, v)| self.dual_row(v)).collect();
            let rhs: Vec<Elem> = assigned.iter().map(|&(j, _)| self.gram_entry(s, j)).collect();
            let mut g = linalg::solve(f, &rows, &rhs, dim)
                .ok_or_else(|| Error::Precondition("partial basis is linearly dependent".into()))?;
            let hgg = self.pair(&g, &g);
            if !hgg.is_zero() {
                // shift along the isotropic partner: h(g + t a, g + t a) = h(g,g) + Tr(t)
                let t = f.solve_trace(f.neg(hgg))?;
                linalg::axpy(f, t, slots[partner(s)].as_ref().unwrap(), &mut g);
            }
            slots[s] = Some(g);
        }
        let assigned: Vec<Vector> = slots.iter().flatten().cloned().collect();
        let span = Subspace::from_rows(f, dim, &assigned)?;
        if span.dim() != assigned.len() {
            return Err(Error::Invariant("extended partial basis is dependent".into()));
        }
        let rest = self.hyperbolic_basis(&self.perp(&span)?)?;
        let half = rest.len() / 2;
        let free: Vec<usize> = (0..n).filter(|&i| slots[i].is_none()).collect();
        for (t, &i) in free.iter().enumerate() {
            slots[i] = Some(rest[t].clone());
            slots[i + n] = Some(rest[half + t].clone());
        }
        let out: Vec<Vector> = slots.into_iter().map(|v| v.unwrap()).collect();
        if !self.is_hyperbolic_basis(&out) {
            return Err(Error::Invariant("extension is not hyperbolic".into()));
        }
        Ok(out)
    }

    /// Whether `basis` has `2n` vectors satisfying the hyperbolic relations.
    pub fn is_hyperbolic_basis(&self, basis: &[Vector]) -> bool {
        basis.len() == self.dim()
            && basis.iter().all(|v| v.len() == self.dim())
            && (0..basis.len())
                .all(|i| (0..basis.len()).all(|j| self.pair(&basis[i], &basis[j]) == self.gram_entry(i, j)))
    }

    pub fn transvection(&self, u: Vector, lambda: Elem) -> Result<Transvection> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.len() });
        }
        if !self.is_isotropic(&u) {
            return Err(Error::Precondition("transvection center is not isotropic".into()));
        }
        Ok(Transvection { space: self.clone(), u, lambda })
    }

    /// The decomposition `V = W ⊥ ⟨P, Q⟩` with `P = ⟨e_n⟩`, `Q = ⟨e_{2n}⟩`.
    pub fn witt_complement(&self) -> Result<WittComplement> {
        if self.n < 2 {
            return Err(Error::Precondition("witt complement needs n >= 2".into()));
        }
        let f = &*self.field;
        let n = self.n;
        let dim = self.dim();
        let w_coords: Vec<usize> = (0..n - 1).chain(n..2 * n - 1).collect();
        let w_rows: Vec<Vector> = w_coords.iter().map(|&c| unit_vector(dim, c)).collect();
        Ok(WittComplement {
            w: Subspace::from_rows(f, dim, &w_rows)?,
            p: Subspace::from_rows(f, dim, &[unit_vector(dim, n - 1)])?,
            q: Subspace::from_rows(f, dim, &[unit_vector(dim, dim - 1)])?,
            lower: FormSpace { field: self.field.clone(), n: n - 1, kind: self.kind, delta: self.delta },
            w_coords,
        })
    }
}

/// `W`, `P`, `Q` together with the identification of `W` with the standard
/// space of dimension `2(n-1)`.
#[derive(Clone, Debug)]
pub struct WittComplement {
    pub w: Subspace,
    pub p: Subspace,
    pub q: Subspace,
    /// The form restricted to `W`, in the coordinates of `W`.
    pub lower: FormSpace,
    w_coords: Vec<usize>,
}

impl WittComplement {
    pub fn p_vector(&self) -> &[Elem] {
        self.p.row(0)
    }

    pub fn q_vector(&self) -> &[Elem] {
        self.q.row(0)
    }

    /// Coordinates of `W`'s standard basis inside `V`.
    pub fn w_coords(&self) -> &[usize] {
        &self.w_coords
    }

    pub fn lift_vector(&self, v: &[Elem]) -> Vector {
        let mut out = vec![Elem::ZERO; self.w_coords.len() + 2];
        for (&c, &x) in self.w_coords.iter().zip(v) {
            out[c] = x;
        }
        out
    }

    pub fn restrict_vector(&self, v: &[Elem]) -> Vector {
        self.w_coords.iter().map(|&c| v[c]).collect()
    }

    /// Image of a subspace of the lower space in `V`. Coordinate injection
    /// preserves the RREF shape, so no re-reduction is needed beyond the
    /// canonicalizing constructor.
    pub fn lift(&self, f: &Field, u: &Subspace) -> Subspace {
        let data: Vec<Elem> = u.rows().flat_map(|r| self.lift_vector(r)).collect();
        Subspace::from_flat(f, self.w_coords.len() + 2, data)
    }

    /// The subspace of the lower space corresponding to `u ⊆ W`.
    pub fn restrict(&self, f: &Field, u: &Subspace) -> Result<Subspace> {
        if !self.w.contains(f, u) {
            return Err(Error::Precondition("subspace is not contained in W".into()));
        }
        let data: Vec<Elem> = u.rows().flat_map(|r| self.restrict_vector(r)).collect();
        Ok(Subspace::from_flat(f, self.w_coords.len(), data))
    }
}

/// `t_{u,λ}(v) = v + λ δ f(v,u) u`, with `δ = 1` for symplectic forms.
#[derive(Clone, Debug)]
pub struct Transvection {
    space: FormSpace,
    u: Vector,
    lambda: Elem,
}

impl Transvection {
    pub fn center(&self) -> &[Elem] {
        &self.u
    }

    pub fn lambda(&self) -> Elem {
        self.lambda
    }

    pub fn apply(&self, v: &[Elem]) -> Vector {
        let f = self.space.field();
        let c = f.mul(f.mul(self.lambda, self.space.delta), self.space.pair(v, &self.u));
        let mut out = v.to_vec();
        linalg::axpy(f, c, &self.u, &mut out);
        out
    }

    /// Matrix acting on row vectors: `v -> v * M`.
    pub fn matrix(&self) -> Vec<Vector> {
        let dim = self.space.dim();
        (0..dim).map(|i| self.apply(&unit_vector(dim, i))).collect()
    }
}

/// Splits a prime power `q = p^e`.
pub fn prime_power(q: u32) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("{q} is not a prime power")));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let (mut r, mut e) = (q, 0);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    if r != 1 {
        return Err(Error::InvalidArgument(format!("{q} is not a prime power")));
    }
    Ok((p, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{all_subspaces, rref};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sp(q: u32, n: usize) -> FormSpace {
        FormSpace::standard(FormKind::Symplectic, q, n).unwrap()
    }

    fn her(q: u32, n: usize) -> FormSpace {
        FormSpace::standard(FormKind::Hermitian, q, n).unwrap()
    }

    fn rand_vec(v: &FormSpace, rng: &mut impl Rng) -> Vector {
        (0..v.dim()).map(|_| Elem(rng.gen_range(0..v.field().order()) as u16)).collect()
    }

    fn span(v: &FormSpace, rows: &[Vector]) -> Subspace {
        rref(v.field(), v.dim(), rows).unwrap()
    }

    fn e(v: &FormSpace, i: usize) -> Vector {
        unit_vector(v.dim(), i)
    }

    #[test]
    fn hyperbolic_pair_values() {
        for v in [sp(3, 2), her(3, 2), sp(3, 3)] {
            let n = v.n();
            assert_eq!(v.eval_form(&e(&v, 0), &e(&v, n)).unwrap(), Elem::ONE);
            for i in 0..v.dim() {
                for j in 0..v.dim() {
                    assert_eq!(v.pair(&e(&v, i), &e(&v, j)), v.gram_entry(i, j));
                }
            }
            assert!(v.is_hyperbolic_basis(&(0..v.dim()).map(|i| e(&v, i)).collect::<Vec<_>>()));
        }
        assert!(sp(3, 2).eval_form(&[Elem::ONE], &[Elem::ONE]).is_err());
    }

    #[test]
    fn symplectic_alternating_and_hermitian_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = sp(3, 2);
        for _ in 0..100 {
            let x = rand_vec(&s, &mut rng);
            assert!(s.pair(&x, &x).is_zero());
        }
        let h = her(3, 2);
        let f = h.field();
        for _ in 0..100 {
            let x = rand_vec(&h, &mut rng);
            let y = rand_vec(&h, &mut rng);
            assert_eq!(h.pair(&x, &y), f.conj(h.pair(&y, &x)));
            assert!(f.in_subfield(h.pair(&x, &x)));
        }
    }

    #[test]
    fn delta_has_trace_zero() {
        let h = her(3, 2);
        assert!(h.field().trace(h.delta()).is_zero() && !h.delta().is_zero());
        assert_eq!(her(2, 2).delta(), Elem::ONE);
        assert!(FormSpace::new(Arc::new(crate::gf::make_field(3, 1).unwrap()), 2, FormKind::Hermitian).is_err());
    }

    #[test]
    fn perp_examples() {
        let v = sp(3, 2);
        assert_eq!(v.perp(&Subspace::full(4)).unwrap().dim(), 0);
        let p = v.perp(&span(&v, &[e(&v, 0)])).unwrap();
        assert_eq!(p, span(&v, &[e(&v, 0), e(&v, 1), e(&v, 3)]));
    }

    #[test]
    fn perp_dimension_and_double_perp() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for v in [sp(3, 3), her(3, 2)] {
            for _ in 0..100 {
                let k = rng.gen_range(0..=v.dim());
                let rows: Vec<Vector> = (0..k).map(|_| rand_vec(&v, &mut rng)).collect();
                let u = span(&v, &rows);
                let p = v.perp(&u).unwrap();
                assert_eq!(u.dim() + p.dim(), v.dim());
                assert_eq!(v.perp(&p).unwrap(), u);
            }
        }
    }

    #[test]
    fn radical_examples() {
        let v = sp(3, 3);
        assert_eq!(v.radical(&Subspace::full(6)).unwrap().dim(), 0);
        let u = span(&v, &[e(&v, 0), e(&v, 1), e(&v, 3)]);
        assert_eq!(v.radical(&u).unwrap(), span(&v, &[e(&v, 1)]));
        let ti = span(&v, &[e(&v, 0), e(&v, 1)]);
        assert_eq!(v.radical(&ti).unwrap(), ti);
    }

    #[test]
    fn totally_isotropic_examples_and_cross_check() {
        for v in [sp(3, 2), her(3, 2)] {
            let n = v.n();
            let lagr: Vec<Vector> = (0..n).map(|i| e(&v, i)).collect();
            assert!(v.is_totally_isotropic(&span(&v, &lagr)));
            assert!(!v.is_totally_isotropic(&span(&v, &[e(&v, 0), e(&v, n)])));
        }
        let v = sp(3, 2);
        let mut ti = 0;
        for u in all_subspaces(v.field(), 4, 2) {
            let by_perp = v.perp(&u).unwrap().contains(v.field(), &u);
            assert_eq!(v.is_totally_isotropic(&u), by_perp);
            ti += by_perp as usize;
        }
        assert_eq!(ti, 40);
    }

    #[test]
    fn hyperbolic_basis_is_standard_on_v() {
        for v in [sp(3, 2), her(3, 2), sp(3, 3)] {
            let b = v.hyperbolic_basis(&Subspace::full(v.dim())).unwrap();
            let std: Vec<Vector> = (0..v.dim()).map(|i| e(&v, i)).collect();
            assert_eq!(b, std);
        }
    }

    #[test]
    fn hyperbolic_basis_of_random_nondegenerate_subspaces() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for v in [sp(3, 3), her(3, 3), her(2, 2)] {
            let mut done = 0;
            while done < 30 {
                let k = 2 * rng.gen_range(1..=v.n());
                let rows: Vec<Vector> = (0..k).map(|_| rand_vec(&v, &mut rng)).collect();
                let w = span(&v, &rows);
                if v.radical(&w).unwrap().dim() != 0 {
                    assert!(v.hyperbolic_basis(&w).is_err());
                    continue;
                }
                if w.dim() != k {
                    continue;
                }
                let b = v.hyperbolic_basis(&w).unwrap();
                let m = k / 2;
                assert_eq!(span(&v, &b), w);
                for i in 0..k {
                    for j in 0..k {
                        let want = if j == i + m {
                            Elem::ONE
                        } else if i == j + m {
                            v.gram_entry(v.n(), 0)
                        } else {
                            Elem::ZERO
                        };
                        assert_eq!(v.pair(&b[i], &b[j]), want);
                    }
                }
                done += 1;
            }
        }
    }

    #[test]
    fn hermitian_plane_with_anisotropic_basis() {
        let v = her(3, 2);
        let f = v.field();
        // e1 + f1 and e1 - f1 are both anisotropic and span the first hyperbolic plane
        let a: Vector = vec![Elem::ONE, Elem::ZERO, Elem::ONE, Elem::ZERO];
        let b: Vector = vec![Elem::ONE, Elem::ZERO, f.neg(Elem::ONE), Elem::ZERO];
        assert!(!v.is_isotropic(&a) && !v.is_isotropic(&b));
        let w = span(&v, &[a, b]);
        let pair = v.hyperbolic_basis(&w).unwrap();
        assert!(v.is_isotropic(&pair[0]) && v.is_isotropic(&pair[1]));
        assert_eq!(v.pair(&pair[0], &pair[1]), Elem::ONE);
        assert!(v.hyperbolic_basis(&span(&v, &[e(&v, 0)])).is_err());
    }

    #[test]
    fn extension_of_partial_bases() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for v in [sp(3, 3), her(3, 3)] {
            let full = v.extend_hyperbolic(&[]).unwrap();
            assert!(v.is_hyperbolic_basis(&full));
            for _ in 0..20 {
                // a random isotropic vector placed in slot 1
                let x = loop {
                    let x = rand_vec(&v, &mut rng);
                    if x.iter().any(|c| !c.is_zero()) && v.is_isotropic(&x) {
                        break x;
                    }
                };
                let b = v.extend_hyperbolic(&[(1, x.clone())]).unwrap();
                assert_eq!(b[1], x);
                let b2 = v.extend_hyperbolic(&[(v.n() + 2, x.clone())]).unwrap();
                assert_eq!(b2[v.n() + 2], x);
            }
        }
        let v = sp(3, 2);
        assert!(v.extend_hyperbolic(&[(0, e(&v, 0)), (2, e(&v, 1))]).is_err());
    }

    #[test]
    fn isotropy_along_hyperbolic_pair_iff_trace_zero() {
        let v = her(3, 2);
        let f = v.field();
        let (x, y) = (e(&v, 0), e(&v, 2));
        for a in f.elements() {
            let mut w = x.clone();
            linalg::axpy(f, a, &y, &mut w);
            assert_eq!(v.is_isotropic(&w), f.trace(a).is_zero());
        }
    }

    #[test]
    fn transvection_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = her(3, 2);
        let f = v.field();
        let u = e(&v, 0);
        assert!(v.transvection(vec![Elem::ONE, Elem::ZERO, Elem::ONE, Elem::ZERO], Elem::ONE).is_err());
        for lambda in f.subfield_elements() {
            let t = v.transvection(u.clone(), lambda).unwrap();
            assert_eq!(t.apply(&u), u);
            let up = v.perp(&span(&v, std::slice::from_ref(&u))).unwrap();
            for r in up.rows() {
                assert_eq!(t.apply(r), r.to_vec());
            }
            for _ in 0..50 {
                let a = rand_vec(&v, &mut rng);
                let b = rand_vec(&v, &mut rng);
                assert_eq!(v.pair(&t.apply(&a), &t.apply(&b)), v.pair(&a, &b));
            }
            let det = linalg::determinant(f, &t.matrix());
            assert_eq!(det, Elem::ONE);
        }
        // a scalar outside the subfield breaks the isometry
        let w = f.subfield_complement().unwrap();
        let t = v.transvection(u, w).unwrap();
        let b = e(&v, 2);
        assert_ne!(v.pair(&t.apply(&b), &t.apply(&b)), v.pair(&b, &b));
    }

    #[test]
    fn witt_complement_examples() {
        let v = sp(3, 2);
        let wc = v.witt_complement().unwrap();
        assert_eq!(wc.w, span(&v, &[e(&v, 0), e(&v, 2)]));
        assert_eq!(wc.p, span(&v, &[e(&v, 1)]));
        assert_eq!(wc.q, span(&v, &[e(&v, 3)]));
        assert!(sp(3, 1).witt_complement().is_err());
        for v in [sp(3, 3), her(3, 3), her(3, 2)] {
            let f = v.field();
            let wc = v.witt_complement().unwrap();
            assert_eq!(wc.w.dim() + 2, v.dim());
            assert_eq!(v.radical(&wc.w).unwrap().dim(), 0);
            let pq = wc.p.sum(f, &wc.q).unwrap();
            assert_eq!(v.perp(&wc.w).unwrap(), pq);
            assert_eq!(v.radical(&pq).unwrap().dim(), 0);
            // a hyperbolic line has q+1 isotropic points (sp) or q+1 over the subfield order (her)
            let iso = all_subspaces(f, v.dim(), 1)
                .into_iter()
                .filter(|x| pq.contains(f, x) && v.is_totally_isotropic(x))
                .count();
            assert_eq!(iso, v.q() as usize + 1);
            // the identification with the lower space respects the form
            let lw = &wc.lower;
            for i in 0..lw.dim() {
                for j in 0..lw.dim() {
                    let a = wc.lift_vector(&unit_vector(lw.dim(), i));
                    let b = wc.lift_vector(&unit_vector(lw.dim(), j));
                    assert_eq!(v.pair(&a, &b), lw.pair(&unit_vector(lw.dim(), i), &unit_vector(lw.dim(), j)));
                }
            }
        }
    }

    #[test]
    fn prime_power_parsing() {
        assert_eq!(prime_power(9).unwrap(), (3, 2));
        assert_eq!(prime_power(7).unwrap(), (7, 1));
        assert!(prime_power(6).is_err());
        assert!(prime_power(1).is_err());
    }
}
