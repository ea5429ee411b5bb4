//! Arithmetic in small finite fields GF(p^m).
//!
//! Elements are encoded as integers in `[0, p^m)` whose base-`p` digits are
//! the coefficients of the residue polynomial, constant term least
//! significant. Multiplication goes through log/antilog tables; addition
//! uses full tables for tiny fields and Zech logarithms otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Fields up to this order get full addition and multiplication tables.
const FULL_TABLE_LIMIT: u32 = 256;

/// Conway polynomials for the non-prime fields we care about, monic,
/// coefficients from the constant term up.
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 2, &[3, 6, 1]),
];

/// A field element, stored as its canonical integer encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Serializable description of a field: characteristic, degree and the
/// defining polynomial (monic, constant term first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    pub poly: Vec<u32>,
}

/// GF(p^m) with precomputed tables. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    m: u32,
    order: u32,
    poly: Vec<u32>,
    generator: Elem,
    /// `exp[i] = g^i`, doubled in length so log sums need no reduction.
    exp: Vec<u16>,
    log: Vec<u32>,
    /// `zech[d] = log(1 + g^d)`, or `NO_LOG` when `1 + g^d = 0`.
    zech: Vec<u32>,
    add_table: Option<Vec<u16>>,
    mul_table: Option<Vec<u16>>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    /// x -> x^q when the field is GF(q^2).
    conj: Option<Vec<u16>>,
}

const NO_LOG: u32 = u32::MAX;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomials over GF(p), coefficients from the constant term up.
mod poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
    }

    pub fn is_zero(a: &[u32]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64 % p as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let mut b = b.to_vec();
        trim(&mut b);
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p);
        while r.len() > db && !is_zero(&r) {
            let dr = r.len() - 1;
            let c = (r[dr] as u64 * lead_inv as u64 % p as u64) as u32;
            for i in 0..=db {
                let t = (c as u64 * b[i] as u64 % p as u64) as u32;
                r[dr - db + i] = (r[dr - db + i] + p - t) % p;
            }
            trim(&mut r);
            if r.len() - 1 < db {
                break;
            }
        }
        r
    }

    pub fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
            }
        }
        rem(&out, f, p)
    }

    pub fn pow_mod(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
        let mut result = vec![1u32];
        let mut b = rem(base, f, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mul_mod(&result, &b, f, p);
            }
            b = mul_mod(&b, &b, f, p);
            e >>= 1;
        }
        result
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let len = a.len().max(b.len());
        let mut out: Vec<u32> = (0..len)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !is_zero(&y) {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }
}

/// Rabin's irreducibility test for a monic polynomial of degree `m` over GF(p).
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() as u32 - 1;
    if m == 0 || *f.last().unwrap() != 1 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    let q = p as u64;
    // x^(p^m) == x mod f
    let mut xp = x.clone();
    for _ in 0..m {
        xp = poly::pow_mod(&xp, q, f, p);
    }
    if !poly::is_zero(&poly::sub(&xp, &x, p)) {
        return false;
    }
    for r in prime_factors(m) {
        let mut xp = x.clone();
        for _ in 0..(m / r) {
            xp = poly::pow_mod(&xp, q, f, p);
        }
        let g = poly::gcd(f, &poly::sub(&xp, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn digits(mut x: u32, p: u32, m: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(m as usize);
    for _ in 0..m {
        d.push(x % p);
        x /= p;
    }
    d
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn least_primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| {
            factors.iter().all(|&r| {
                let mut acc = 1u64;
                for _ in 0..(p - 1) / r {
                    acc = acc * g as u64 % p as u64;
                }
                acc != 1
            })
        })
        .expect("every prime field has a primitive root")
}

/// Fixed defining polynomial: Conway where tabulated, `x - g` for prime
/// fields (`g` the least primitive root), otherwise the lexicographically
/// least monic irreducible polynomial.
fn default_polynomial(p: u32, m: u32) -> Vec<u32> {
    if let Some(&(_, _, c)) = CONWAY.iter().find(|&&(cp, cm, _)| cp == p && cm == m) {
        return c.to_vec();
    }
    if m == 1 {
        let g = least_primitive_root(p);
        return vec![(p - g) % p, 1];
    }
    let count = (p as u64).pow(m);
    for idx in 0..count {
        let mut f = digits(idx as u32, p, m);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Builds GF(p^m) with its deterministic defining polynomial.
pub fn make_field(p: u32, m: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("field degree must be at least 1".into()));
    }
    let order = (p as u64).checked_pow(m).filter(|&o| o <= MAX_ORDER as u64);
    if order.is_none() {
        return Err(Error::FieldTooLarge { p, m });
    }
    Field::with_polynomial(p, m, default_polynomial(p, m))
}

impl Field {
    /// Builds the field from an explicit defining polynomial.
    pub fn with_polynomial(p: u32, m: u32, poly: Vec<u32>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let order64 = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if m == 0 || order64 > MAX_ORDER as u64 {
            return Err(Error::FieldTooLarge { p, m });
        }
        if poly.len() != m as usize + 1 || poly.iter().any(|&c| c >= p) || !is_irreducible(&poly, p) {
            return Err(Error::InvalidArgument(format!(
                "{poly:?} is not a monic irreducible polynomial of degree {m} over GF({p})"
            )));
        }
        let order = order64 as u32;
        let mul_raw = |a: u32, b: u32| -> u32 {
            if m == 1 {
                return (a as u64 * b as u64 % p as u64) as u32;
            }
            let r = poly::mul_mod(&digits(a, p, m), &digits(b, p, m), &poly, p);
            undigits(&r, p)
        };
        let add_raw = |a: u32, b: u32| -> u32 {
            let (da, db) = (digits(a, p, m), digits(b, p, m));
            let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            undigits(&s, p)
        };

        // least element of full multiplicative order
        let n = order - 1;
        let mut generator = None;
        for g in 1..order {
            let mut acc = g;
            let mut len = 1u32;
            while acc != 1 {
                acc = mul_raw(acc, g);
                len += 1;
                if len > n {
                    break;
                }
            }
            if len == n {
                generator = Some(g);
                break;
            }
        }
        let g = generator.expect("multiplicative group of a field is cyclic");

        let mut exp = vec![0u16; 2 * n as usize];
        let mut log = vec![NO_LOG; order as usize];
        let mut acc = 1u32;
        for i in 0..n {
            exp[i as usize] = acc as u16;
            exp[(i + n) as usize] = acc as u16;
            log[acc as usize] = i;
            acc = mul_raw(acc, g);
        }
        let zech: Vec<u32> = (0..n)
            .map(|d| {
                let s = add_raw(1, exp[d as usize] as u32);
                if s == 0 {
                    NO_LOG
                } else {
                    log[s as usize]
                }
            })
            .collect();
        let neg: Vec<u16> = (0..order)
            .map(|a| {
                let d: Vec<u32> = digits(a, p, m).iter().map(|&c| (p - c) % p).collect();
                undigits(&d, p) as u16
            })
            .collect();
        let inv: Vec<u16> =
            (0..order).map(|a| if a == 0 { 0 } else { exp[((n - log[a as usize]) % n) as usize] }).collect();

        let mut field = Field {
            p,
            m,
            order,
            poly,
            generator: Elem(g as u16),
            exp,
            log,
            zech,
            add_table: None,
            mul_table: None,
            neg,
            inv,
            conj: None,
        };
        if order <= FULL_TABLE_LIMIT {
            let q = order as usize;
            let mut at = vec![0u16; q * q];
            let mut mt = vec![0u16; q * q];
            for a in 0..q {
                for b in 0..q {
                    at[a * q + b] = add_raw(a as u32, b as u32) as u16;
                    mt[a * q + b] = field.mul_log(Elem(a as u16), Elem(b as u16)).0;
                }
            }
            field.add_table = Some(at);
            field.mul_table = Some(mt);
        }
        if m.is_multiple_of(2) {
            let q = (p as u64).pow(m / 2);
            let table: Vec<u16> = (0..order).map(|a| field.pow(Elem(a as u16), q).0).collect();
            field.conj = Some(table);
        }
        Ok(field)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Field> {
        Field::with_polynomial(spec.p, spec.m, spec.poly.clone())
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.p, m: self.m, poly: self.poly.clone() }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn polynomial(&self) -> &[u32] {
        &self.poly
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(|a| Elem(a as u16))
    }

    /// Element from an integer encoding.
    pub fn elem(&self, x: u32) -> Result<Elem> {
        if x < self.order {
            Ok(Elem(x as u16))
        } else {
            Err(Error::InvalidArgument(format!("{x} is not an element of GF({})", self.order)))
        }
    }

    /// Image of an integer under the prime-field embedding.
    pub fn from_int(&self, x: i64) -> Elem {
        Elem(x.rem_euclid(self.p as i64) as u16)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if let Some(t) = &self.add_table {
            return Elem(t[a.index() * self.order as usize + b.index()]);
        }
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let n = self.order - 1;
        let la = self.log[a.index()];
        let lb = self.log[b.index()];
        let d = (lb + n - la) % n;
        let z = self.zech[d as usize];
        if z == NO_LOG {
            Elem::ZERO
        } else {
            Elem(self.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    fn mul_log(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        Elem(self.exp[(self.log[a.index()] + self.log[b.index()]) as usize])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if let Some(t) = &self.mul_table {
            return Elem(t[a.index() * self.order as usize + b.index()]);
        }
        self.mul_log(a, b)
    }

    /// Multiplicative inverse; zero maps to zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        Elem(self.inv[a.index()])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.mul(a, self.inv(b)))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let n = (self.order - 1) as u64;
        let l = self.log[a.index()] as u64 * (e % n) % n;
        Elem(self.exp[l as usize])
    }

    /// Discrete logarithm to the base of the fixed generator.
    pub fn log(&self, a: Elem) -> Option<u32> {
        if a.is_zero() {
            None
        } else {
            Some(self.log[a.index()])
        }
    }

    /// Order of the subfield fixed by the involution, if the field is a
    /// quadratic extension.
    pub fn subfield_order(&self) -> Option<u32> {
        self.conj.as_ref().map(|_| (self.p as u64).pow(self.m / 2) as u32)
    }

    pub fn is_quadratic(&self) -> bool {
        self.conj.is_some()
    }

    /// `x^q` for GF(q^2). Identity on fields without that structure, which
    /// keeps form code uniform; callers that need the involution validate
    /// with [`Field::is_quadratic`].
    #[inline]
    pub fn conj(&self, x: Elem) -> Elem {
        match &self.conj {
            Some(t) => Elem(t[x.index()]),
            None => x,
        }
    }

    /// `x^q`, requiring this field to be GF(q^2).
    pub fn frobenius(&self, x: Elem, q: u32) -> Result<Elem> {
        match self.subfield_order() {
            Some(s) if s == q => Ok(self.conj(x)),
            _ => Err(Error::NotQuadratic { order: self.order }),
        }
    }

    fn require_quadratic(&self) -> Result<()> {
        if self.is_quadratic() {
            Ok(())
        } else {
            Err(Error::NotQuadratic { order: self.order })
        }
    }

    /// Whether `x` is fixed by the involution.
    pub fn in_subfield(&self, x: Elem) -> bool {
        self.conj(x) == x
    }

    /// `(x + x^q, x^(q+1))`.
    pub fn trace_norm(&self, x: Elem) -> Result<(Elem, Elem)> {
        self.require_quadratic()?;
        let c = self.conj(x);
        Ok((self.add(x, c), self.mul(x, c)))
    }

    pub fn trace(&self, x: Elem) -> Elem {
        self.add(x, self.conj(x))
    }

    pub fn norm(&self, x: Elem) -> Elem {
        self.mul(x, self.conj(x))
    }

    /// Least-encoding `x` with `N(x) = a`.
    pub fn solve_norm(&self, a: Elem) -> Result<Elem> {
        self.require_quadratic()?;
        if !self.in_subfield(a) {
            return Err(Error::NotInSubfield(a.0 as u32));
        }
        Ok(self.elements().find(|&x| self.norm(x) == a).expect("norm is surjective onto the subfield"))
    }

    /// Least-encoding `x` with `Tr(x) = a`.
    pub fn solve_trace(&self, a: Elem) -> Result<Elem> {
        self.require_quadratic()?;
        if !self.in_subfield(a) {
            return Err(Error::NotInSubfield(a.0 as u32));
        }
        Ok(self.elements().find(|&x| self.trace(x) == a).expect("trace is surjective onto the subfield"))
    }

    /// Least nonzero element of trace zero (characteristic not 2), or one
    /// in characteristic 2.
    pub fn trace_zero_generator(&self) -> Result<Elem> {
        self.require_quadratic()?;
        if self.p == 2 {
            return Ok(Elem::ONE);
        }
        Ok(self.elements().find(|&x| !x.is_zero() && self.trace(x).is_zero()).expect("trace kernel is nontrivial"))
    }

    /// Least element outside the fixed subfield; together with 1 it is a
    /// basis of the field over the subfield.
    pub fn subfield_complement(&self) -> Result<Elem> {
        self.require_quadratic()?;
        Ok(self.elements().find(|&x| !self.in_subfield(x)).expect("proper subfield"))
    }

    pub fn subfield_elements(&self) -> Vec<Elem> {
        self.elements().filter(|&x| self.in_subfield(x)).collect()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        self.p == other.p && self.m == other.m && self.poly == other.poly
    }
}

impl Eq for Field {}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, m: u32) -> Field {
        make_field(p, m).unwrap()
    }

    #[test]
    fn prime_field_gf3() {
        let f = gf(3, 1);
        assert_eq!(f.order(), 3);
        assert_eq!(f.add(Elem(2), Elem(2)), Elem(1));
        assert_eq!(f.mul(Elem(2), Elem(2)), Elem(1));
        assert_eq!(f.neg(Elem(1)), Elem(2));
    }

    #[test]
    fn gf9_uses_conway_polynomial() {
        let f = gf(3, 2);
        assert_eq!(f.polynomial(), &[2, 2, 1]);
        // no roots over GF(3) means irreducible for a quadratic
        for x in 0..3u32 {
            assert_ne!((x * x + 2 * x + 2) % 3, 0);
        }
        // Conway polynomials are primitive: x (encoding 3) generates
        assert_eq!(f.generator(), Elem(3));
    }

    #[test]
    fn gf4_smallest_extension() {
        let f = gf(2, 2);
        assert_eq!(f.order(), 4);
        assert!(f.is_quadratic());
        assert_eq!(f.subfield_order(), Some(2));
    }

    #[test]
    fn tabulated_polynomials_are_primitive() {
        for &(p, m, c) in CONWAY {
            let f = gf(p, m);
            assert!(is_irreducible(c, p));
            // x has encoding p, and must generate the multiplicative group
            assert_eq!(f.generator(), Elem(p as u16), "GF({p}^{m})");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(make_field(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(make_field(2, 17), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(make_field(257, 2), Err(Error::FieldTooLarge { .. })));
        assert!(make_field(2, 16).is_ok());
    }

    fn check_axioms(f: &Field) {
        let els: Vec<Elem> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, Elem::ZERO), a);
            assert_eq!(f.mul(a, Elem::ONE), a);
            assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a)), Elem::ONE);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
            }
        }
        // associativity and distributivity on a strided sample
        let step = (els.len() / 11).max(1);
        for a in els.iter().step_by(step) {
            for b in els.iter().step_by(step) {
                for c in els.iter().step_by(step) {
                    assert_eq!(f.add(f.add(*a, *b), *c), f.add(*a, f.add(*b, *c)));
                    assert_eq!(f.mul(f.mul(*a, *b), *c), f.mul(*a, f.mul(*b, *c)));
                    assert_eq!(f.mul(*a, f.add(*b, *c)), f.add(f.mul(*a, *b), f.mul(*a, *c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_small_fields() {
        for (p, m) in [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (2, 3), (5, 2), (7, 2)] {
            check_axioms(&gf(p, m));
        }
    }

    #[test]
    fn zech_addition_matches_digits() {
        // GF(3^6) is above the full-table limit
        let f = gf(3, 6);
        assert!(f.add_table.is_none());
        let (p, m) = (3, 6);
        for a in (0..f.order()).step_by(37) {
            for b in (0..f.order()).step_by(41) {
                let s: Vec<u32> = digits(a, p, m).iter().zip(digits(b, p, m)).map(|(x, y)| (x + y) % p).collect();
                assert_eq!(f.add(Elem(a as u16), Elem(b as u16)), Elem(undigits(&s, p) as u16));
            }
        }
        check_axioms(&gf(2, 9));
    }

    #[test]
    fn frobenius_is_involution_with_three_fixed_points() {
        let f = gf(3, 2);
        assert_eq!(f.frobenius(Elem::ZERO, 3).unwrap(), Elem::ZERO);
        for x in f.elements() {
            assert_eq!(f.conj(f.conj(x)), x);
            assert_eq!(f.frobenius(x, 3).unwrap(), f.pow(x, 3));
        }
        assert_eq!(f.subfield_elements().len(), 3);
        assert!(f.frobenius(Elem::ONE, 2).is_err());
        assert!(gf(3, 1).frobenius(Elem::ONE, 3).is_err());
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative() {
        let f = gf(5, 2);
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.conj(f.add(a, b)), f.add(f.conj(a), f.conj(b)));
                assert_eq!(f.conj(f.mul(a, b)), f.mul(f.conj(a), f.conj(b)));
            }
        }
    }

    #[test]
    fn trace_and_norm_over_gf9() {
        let f = gf(3, 2);
        assert_eq!(f.trace_norm(Elem::ZERO).unwrap(), (Elem::ZERO, Elem::ZERO));
        let mut norms = std::collections::BTreeSet::new();
        let mut kernel = 0;
        for x in f.elements() {
            let (t, n) = f.trace_norm(x).unwrap();
            assert!(f.in_subfield(t) && f.in_subfield(n));
            norms.insert(n);
            if t.is_zero() {
                kernel += 1;
            }
        }
        assert_eq!(norms.len(), 3);
        assert_eq!(kernel, 3);
        assert!(gf(3, 1).trace_norm(Elem::ONE).is_err());
    }

    #[test]
    fn solve_norm_least_solution() {
        let f = gf(3, 2);
        assert_eq!(f.solve_norm(Elem::ZERO).unwrap(), Elem::ZERO);
        // brute force: least x with x^4 = 1
        let expected = f.elements().find(|&x| f.pow(x, 4) == Elem::ONE).unwrap();
        assert_eq!(f.solve_norm(Elem::ONE).unwrap(), expected);
        for a in f.subfield_elements() {
            let x = f.solve_norm(a).unwrap();
            assert_eq!(f.norm(x), a);
        }
        let outside = f.subfield_complement().unwrap();
        assert!(matches!(f.solve_norm(outside), Err(Error::NotInSubfield(_))));
    }

    #[test]
    fn trace_zero_generator_properties() {
        let f = gf(3, 2);
        let d = f.trace_zero_generator().unwrap();
        assert!(!d.is_zero());
        assert_eq!(f.add(d, f.conj(d)), Elem::ZERO);
        assert!(!f.in_subfield(d));
        assert_eq!(gf(2, 2).trace_zero_generator().unwrap(), Elem::ONE);
    }

    #[test]
    fn spec_round_trip() {
        let f = gf(3, 2);
        let json = serde_json::to_string(&f.spec()).unwrap();
        assert_eq!(json, r#"{"p":3,"m":2,"poly":[2,2,1]}"#);
        let g = Field::from_spec(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(f, g);
        // x^2 + 1 is irreducible over GF(3); x^2 - 1 splits
        assert!(Field::with_polynomial(3, 2, vec![1, 0, 1]).is_ok());
        assert!(Field::with_polynomial(3, 2, vec![2, 0, 1]).is_err());
    }
}
