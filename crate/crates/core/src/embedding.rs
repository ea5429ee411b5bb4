//! Grassmann embeddings `U -> ⋀^k U`, their dimensions, the Baer
//! structure of the Hermitian dual polar image, and submodule closure under
//! unitary transvections.
//!
//! For a Hermitian dual polar space the Plücker vectors of generators are
//! not coordinatewise fixed by conjugation in a hyperbolic basis (already
//! for `n = 1` the points `⟨(1, a)⟩` with `Tr(a) = 0` have `a ∉ K`). The
//! relevant involution is the polarity-induced semilinear map
//! `τ(x) = c · ⋆(⋀^n Gᵀ · x̄)`, where `⋆` sends `e_I` to `sgn(I, I^c) e_{I^c}`.
//! It maps `⋀^n U` to `⋀^n U^⊥`, so it fixes the image of every t.i.
//! `n`-space up to a scalar of norm one; rescaling by Hilbert 90 puts each
//! image into the fixed `K`-subspace.

use std::collections::HashMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{FormKind, FormSpace};
use crate::geometry::Geometry;
use crate::gf::{Elem, Field};
use crate::linalg::{
    self, binomial, determinant, plucker, rank_over, unit_vector, Echelon, PluckerVector, Subspace, Vector,
};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmbeddedGeometry {
    pub k: usize,
    /// `C(2n, k)`.
    pub ambient_dim: usize,
    pub vectors: Vec<PluckerVector>,
    /// Dimension of the span over the field.
    pub rank: usize,
    /// Dimension over the fixed subfield after Baer normalization
    /// (Hermitian, `k = n`).
    pub subfield_rank: Option<usize>,
}

pub fn plucker_vectors(g: &Geometry) -> Result<Vec<PluckerVector>> {
    let f = g.field();
    g.points().par_iter().map(|p| plucker(f, p)).collect()
}

/// Plücker vectors of all points, checked to be injective and to send
/// every line onto a projective line, with the span dimensions.
pub fn embed(g: &Geometry) -> Result<EmbeddedGeometry> {
    let f = g.field();
    let vectors = plucker_vectors(g)?;
    let mut sorted: Vec<&PluckerVector> = vectors.iter().collect();
    sorted.par_sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Invariant("Grassmann map is not injective".into()));
    }
    let bad_line = (0..g.num_lines() as u32).into_par_iter().find_any(|&l| {
        let mut e = Echelon::new();
        for &p in g.line(l) {
            e.insert(f, &vectors[p as usize].coords);
            if e.rank() > 2 {
                return true;
            }
        }
        e.rank() != 2
    });
    if let Some(l) = bad_line {
        return Err(Error::Invariant(format!("line {l} does not map onto a projective line")));
    }
    let dims = dimensions_of(g, &vectors)?;
    Ok(EmbeddedGeometry {
        k: g.k(),
        ambient_dim: binomial(g.space().dim(), g.k()),
        vectors,
        rank: dims.rank,
        subfield_rank: dims.subfield_rank,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingDims {
    pub rank: usize,
    pub subfield_rank: Option<usize>,
}

fn dimensions_of(g: &Geometry, vectors: &[PluckerVector]) -> Result<EmbeddingDims> {
    let v = g.space();
    let rank = rank_over(v.field(), vectors, false)?;
    let subfield_rank = if v.kind() == FormKind::Hermitian && g.k() == v.n() {
        let baer = BaerInvolution::new(v)?;
        let coords: Vec<PluckerVector> = vectors
            .iter()
            .map(|x| baer.normalize(x).map(|b| PluckerVector { k: x.k, coords: b.subfield_coords }))
            .collect::<Result<_>>()?;
        Some(rank_over(v.field(), &coords, true)?)
    } else {
        None
    };
    Ok(EmbeddingDims { rank, subfield_rank })
}

/// Span dimension of the embedded point set, over the field and, for the
/// Hermitian dual polar case, over the fixed subfield.
pub fn embedding_dimension(g: &Geometry) -> Result<EmbeddingDims> {
    dimensions_of(g, &plucker_vectors(g)?)
}

/// Span dimensions of the images of the points `set` alone.
pub fn subset_dimension(g: &Geometry, set: &[u32]) -> Result<EmbeddingDims> {
    let f = g.field();
    let vectors: Vec<PluckerVector> = set.iter().map(|&p| plucker(f, g.point(p))).collect::<Result<_>>()?;
    dimensions_of(g, &vectors)
}

/// Sign of the permutation listing `a` then `b`.
fn shuffle_sign(a: &[usize], b: &[usize]) -> bool {
    let inversions: usize = a.iter().map(|&x| b.iter().filter(|&&y| y < x).count()).sum();
    inversions % 2 == 1
}

/// The polarity-induced Baer involution on `⋀^n V`, normalized so that it
/// squares to the identity.
#[derive(Clone, Debug)]
pub struct BaerInvolution {
    space: FormSpace,
    /// `τ(x)_J = scale_J · conj(x_{source_J})`.
    source: Vec<usize>,
    scale: Vec<Elem>,
    /// Per coordinate: `Some(β)` spanning the fixed line `{y : y = scale · ȳ}`
    /// for self-paired indices, `None` for swapped pairs.
    fixed_basis: Vec<Option<Elem>>,
    omega: Elem,
}

/// A τ-fixed multiple of a Plücker vector and its coordinates over `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaerVector {
    pub lambda: Elem,
    pub fixed: Vec<Elem>,
    pub subfield_coords: Vec<Elem>,
}

impl BaerInvolution {
    pub fn new(space: &FormSpace) -> Result<BaerInvolution> {
        if space.kind() != FormKind::Hermitian {
            return Err(Error::Precondition("Baer involution needs a Hermitian form".into()));
        }
        let f = space.field();
        let n = space.n();
        let dim = space.dim();
        let subsets = linalg::k_subsets(dim, n);
        let pos: HashMap<&Vec<usize>, usize> = subsets.iter().enumerate().map(|(i, s)| (s, i)).collect();
        // ⋀^n Gᵀ on e_I, then ⋆; the Gram matrix is a signed permutation
        let gram = space.gram();
        let image_of = |i: usize| -> (usize, Elem) {
            let j = (0..dim).find(|&j| !gram[j][i].is_zero()).unwrap();
            (j, gram[j][i])
        };
        let mut source = vec![usize::MAX; subsets.len()];
        let mut raw = vec![Elem::ZERO; subsets.len()];
        for (si, s) in subsets.iter().enumerate() {
            let mut imgs: Vec<(usize, Elem)> = s.iter().map(|&i| image_of(i)).collect();
            let mut c = imgs.iter().fold(Elem::ONE, |a, x| f.mul(a, x.1));
            // sort the wedge factors, tracking the sign
            let before: Vec<usize> = imgs.iter().map(|x| x.0).collect();
            let inv =
                (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| before[a] > before[b]).count();
            if inv % 2 == 1 {
                c = f.neg(c);
            }
            imgs.sort();
            let t: Vec<usize> = imgs.iter().map(|x| x.0).collect();
            let comp: Vec<usize> = (0..dim).filter(|i| !t.contains(i)).collect();
            if shuffle_sign(&t, &comp) {
                c = f.neg(c);
            }
            let target = pos[&comp];
            source[target] = si;
            raw[target] = c;
        }
        // τ² = ε · id with ε in K; rescale by c with N(c) = 1/ε
        let tau_raw = |x: &[Elem]| -> Vector { (0..x.len()).map(|j| f.mul(raw[j], f.conj(x[source[j]]))).collect() };
        let e0 = unit_vector(subsets.len(), 0);
        let eps = tau_raw(&tau_raw(&e0))[0];
        for i in 0..subsets.len() {
            let e = unit_vector(subsets.len(), i);
            if tau_raw(&tau_raw(&e)) != linalg::scale(f, eps, &e) {
                return Err(Error::Invariant("Baer map does not square to a scalar".into()));
            }
        }
        let c = f.solve_norm(f.inv(eps))?;
        let scale: Vec<Elem> = raw.iter().map(|&r| f.mul(c, r)).collect();
        let fixed_basis = (0..subsets.len())
            .map(|j| {
                (source[j] == j).then(|| {
                    f.elements()
                        .find(|&b| !b.is_zero() && b == f.mul(scale[j], f.conj(b)))
                        .expect("a norm-one scalar has a Hilbert 90 solution")
                })
            })
            .collect();
        Ok(BaerInvolution { space: space.clone(), source, scale, fixed_basis, omega: f.subfield_complement()? })
    }

    fn field(&self) -> &Field {
        self.space.field()
    }

    pub fn apply(&self, x: &[Elem]) -> Vector {
        let f = self.field();
        (0..x.len()).map(|j| f.mul(self.scale[j], f.conj(x[self.source[j]]))).collect()
    }

    /// Rescales `x` into the fixed subspace and reads off `K`-coordinates.
    pub fn normalize(&self, x: &PluckerVector) -> Result<BaerVector> {
        let f = self.field();
        if x.coords.len() != self.source.len() {
            return Err(Error::DimensionMismatch { expected: self.source.len(), found: x.coords.len() });
        }
        let tx = self.apply(&x.coords);
        let lead =
            x.coords.iter().position(|c| !c.is_zero()).ok_or_else(|| Error::InvalidArgument("zero vector".into()))?;
        let mu = f.div(tx[lead], x.coords[lead])?;
        if linalg::scale(f, mu, &x.coords) != tx {
            return Err(Error::Precondition("vector is not fixed projectively by the Baer involution".into()));
        }
        if f.norm(mu) != Elem::ONE {
            return Err(Error::Invariant("Baer ratio does not have norm one".into()));
        }
        // τ(λx) = λ̄ μ x, so λ must satisfy λ̄ μ = λ
        let lambda = f
            .elements()
            .find(|&l| !l.is_zero() && f.mul(f.conj(l), mu) == l)
            .ok_or_else(|| Error::Invariant("no normalizing scalar".into()))?;
        let fixed = linalg::scale(f, lambda, &x.coords);
        debug_assert_eq!(self.apply(&fixed), fixed);
        let w = self.omega;
        let w_gap = f.sub(w, f.conj(w));
        let mut subfield_coords = Vec::with_capacity(fixed.len());
        for (j, &y) in fixed.iter().enumerate() {
            match self.fixed_basis[j] {
                Some(beta) => subfield_coords.push(f.div(y, beta)?),
                None if self.source[j] > j => {
                    // y = a + bω with a, b in K
                    let b = f.div(f.sub(y, f.conj(y)), w_gap)?;
                    subfield_coords.push(f.sub(y, f.mul(b, w)));
                    subfield_coords.push(b);
                }
                None => {}
            }
        }
        Ok(BaerVector { lambda, fixed, subfield_coords })
    }
}

/// Scales the Plücker vector of a generator of a Hermitian space into the
/// fixed subspace of the Baer involution.
pub fn sigma_normalize(space: &FormSpace, x: &PluckerVector) -> Result<BaerVector> {
    if x.k != space.n() {
        return Err(Error::Precondition("Baer normalization needs k = n".into()));
    }
    BaerInvolution::new(space)?.normalize(x)
}

/// Matrix of `⋀^k t` on row vectors, for `t` given by the images of the
/// standard basis vectors.
pub fn exterior_power_matrix(f: &Field, t: &[Vector], k: usize) -> Vec<Vector> {
    let subsets = linalg::k_subsets(t.len(), k);
    subsets
        .iter()
        .map(|rows| {
            subsets
                .iter()
                .map(|cols| {
                    let m: Vec<Vector> = rows.iter().map(|&r| cols.iter().map(|&c| t[r][c]).collect()).collect();
                    determinant(f, &m)
                })
                .collect()
        })
        .collect()
}

/// A basis of `K` over its prime field: powers of the least element
/// generating `K`.
fn subfield_prime_basis(f: &Field) -> Vec<Elem> {
    let q = f.subfield_order().unwrap();
    let e = (q as f64).log(f.characteristic() as f64).round() as u32;
    if e == 1 {
        return vec![Elem::ONE];
    }
    let zeta = f
        .subfield_elements()
        .into_iter()
        .find(|&z| !z.is_zero() && (1..q - 1).all(|i| f.pow(z, i as u64) != Elem::ONE))
        .unwrap();
    (0..e).map(|i| f.pow(zeta, i as u64)).collect()
}

/// Isotropic vectors from the hyperbolic basis: every `e_i`, `e_i + e_j`
/// for non-paired `i < j`, and `e_i + δ f_i` in each hyperbolic plane.
fn apartment_isotropic_vectors(space: &FormSpace) -> Vec<Vector> {
    let n = space.n();
    let dim = space.dim();
    let mut out: Vec<Vector> = (0..dim).map(|i| unit_vector(dim, i)).collect();
    for (i, j) in (0..dim).tuple_combinations() {
        if j != i + n {
            let mut v = unit_vector(dim, i);
            v[j] = Elem::ONE;
            out.push(v);
        }
    }
    for i in 0..n {
        let mut v = unit_vector(dim, i);
        v[n + i] = space.delta();
        out.push(v);
    }
    out
}

fn all_isotropic_points(space: &FormSpace) -> Vec<Vector> {
    crate::geometry::ti_levels(space, 1).pop().unwrap().iter().map(|s| s.row(0).to_vec()).collect()
}

fn closure_under(f: &Field, gens: &[Vec<Vector>], seed: &[Elem]) -> usize {
    let mut ech = Echelon::new();
    if !ech.insert(f, seed) {
        return 0;
    }
    let mut queue = vec![seed.to_vec()];
    let full = seed.len();
    while let Some(b) = queue.pop() {
        for m in gens {
            let w = linalg::vec_mat(f, &b, m);
            if ech.insert(f, &w) {
                if ech.rank() == full {
                    return full;
                }
                queue.push(w);
            }
        }
    }
    ech.rank()
}

fn transvection_generators(space: &FormSpace, k: usize, centers: &[Vector]) -> Result<Vec<Vec<Vector>>> {
    let f = space.field();
    let lambdas = subfield_prime_basis(f);
    let mut gens = Vec::new();
    for u in centers {
        for &l in &lambdas {
            let t = space.transvection(u.clone(), l)?;
            gens.push(exterior_power_matrix(f, &t.matrix(), k));
        }
    }
    Ok(gens)
}

/// Dimension of the smallest submodule of `⋀^k V` containing `seed` that
/// is invariant under the unitary transvections. Starts from a finite
/// generator list built from the hyperbolic basis; if that falls short of
/// the full space it retries with every isotropic point as a center.
pub fn su_submodule_closure(space: &FormSpace, k: usize, seed: &[Elem]) -> Result<usize> {
    if space.kind() != FormKind::Hermitian {
        return Err(Error::Precondition("unitary closure needs a Hermitian form".into()));
    }
    let dim = binomial(space.dim(), k);
    if k == 0 || k >= space.dim() || seed.len() != dim {
        return Err(Error::InvalidArgument(format!("seed must be a vector of ⋀^{k} V of length {dim}")));
    }
    if seed.iter().all(|x| x.is_zero()) {
        return Err(Error::InvalidArgument("seed is zero".into()));
    }
    let f = space.field();
    let gens = transvection_generators(space, k, &apartment_isotropic_vectors(space))?;
    let d = closure_under(f, &gens, seed);
    if d == dim {
        return Ok(d);
    }
    let gens = transvection_generators(space, k, &all_isotropic_points(space))?;
    Ok(closure_under(f, &gens, seed))
}

/// `[A, T] = span{(⋀^k t_{u,λ} − id) a}` over `λ ∈ F`, or over `λ ∈ K`
/// with `subfield_only`.
pub fn bracket(space: &FormSpace, k: usize, a: &[Elem], u: &[Elem], subfield_only: bool) -> Result<Subspace> {
    let f = space.field();
    let dim = binomial(space.dim(), k);
    if a.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: a.len() });
    }
    let lambdas: Vec<Elem> = if subfield_only { f.subfield_elements() } else { f.elements().collect() };
    let mut rows = Vec::new();
    for l in lambdas {
        let t = space.transvection(u.to_vec(), l)?;
        let m = exterior_power_matrix(f, &t.matrix(), k);
        let mut w = linalg::vec_mat(f, a, &m);
        for (x, &y) in w.iter_mut().zip(a) {
            *x = f.sub(*x, y);
        }
        rows.push(w);
    }
    Subspace::from_rows(f, dim, &rows)
}

/// Whether `[A, T_u] = [A, T_u^σ]` for the 1-space `A = ⟨a⟩`.
pub fn bracket_equality_check(space: &FormSpace, k: usize, a: &[Elem], u: &[Elem]) -> Result<bool> {
    if space.kind() != FormKind::Hermitian {
        return Err(Error::Precondition("bracket check needs a Hermitian form".into()));
    }
    if a.iter().all(|x| x.is_zero()) {
        return Err(Error::InvalidArgument("A must be nonzero".into()));
    }
    Ok(bracket(space, k, a, u, false)? == bracket(space, k, a, u, true)?)
}

/// For each Plücker index, the block of the decomposition
/// `⋀^k W ⊕ ⋀^{k-1}W ∧ P ⊕ ⋀^{k-1}W ∧ Q ⊕ ⋀^{k-2}W ∧ P ∧ Q`
/// (0 to 3), determined by membership of the coordinates of `P` and `Q`.
pub fn decomposition_blocks(n: usize, k: usize) -> Vec<u8> {
    let (p, q) = (n - 1, 2 * n - 1);
    linalg::k_subsets(2 * n, k)
        .iter()
        .map(|s| match (s.contains(&p), s.contains(&q)) {
            (false, false) => 0,
            (true, false) => 1,
            (false, true) => 2,
            (true, true) => 3,
        })
        .collect()
}
