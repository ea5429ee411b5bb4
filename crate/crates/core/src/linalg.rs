//! Exact linear algebra over a [`Field`]: canonical subspaces in reduced row
//! echelon form, null spaces, incremental echelon bases, and Plücker
//! coordinates.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

pub type Vector = Vec<Elem>;

/// Row-reduces a flat `rows x cols` matrix in place, drops zero rows and
/// returns the pivot columns. The result is the unique RREF of the row span.
pub fn rref_flat(f: &Field, data: &mut Vec<Elem>, rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !data[i * cols + c].is_zero()) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(data[r * cols + c]);
        if inv != Elem::ONE {
            for j in c..cols {
                data[r * cols + j] = f.mul(data[r * cols + j], inv);
            }
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let x = data[i * cols + c];
            if x.is_zero() {
                continue;
            }
            let nx = f.neg(x);
            for j in c..cols {
                let v = data[r * cols + j];
                if !v.is_zero() {
                    data[i * cols + j] = f.add(data[i * cols + j], f.mul(nx, v));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    data.truncate(r * cols);
    pivots
}

/// A linear subspace of `F^ambient`, stored as its RREF basis. Two values
/// are equal exactly when they describe the same subspace.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    rank: usize,
    data: Vec<Elem>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Subspace {
        Subspace { ambient, rank: 0, data: Vec::new() }
    }

    pub fn full(ambient: usize) -> Subspace {
        let mut data = vec![Elem::ZERO; ambient * ambient];
        for i in 0..ambient {
            data[i * ambient + i] = Elem::ONE;
        }
        Subspace { ambient, rank: ambient, data }
    }

    /// Canonical span of the given rows.
    pub fn from_rows(f: &Field, ambient: usize, rows: &[Vector]) -> Result<Subspace> {
        let mut data = Vec::with_capacity(rows.len() * ambient);
        for r in rows {
            if r.len() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Subspace::from_flat(f, ambient, data))
    }

    /// Canonical span of a flat row-major matrix with `ambient` columns.
    pub fn from_flat(f: &Field, ambient: usize, mut data: Vec<Elem>) -> Subspace {
        debug_assert!(ambient == 0 || data.len().is_multiple_of(ambient));
        let rows = data.len().checked_div(ambient).unwrap_or(0);
        let pivots = rref_flat(f, &mut data, rows, ambient);
        Subspace { ambient, rank: pivots.len(), data }
    }

    /// Wraps a matrix the caller guarantees to be in RREF without zero rows.
    pub(crate) fn from_rref_unchecked(ambient: usize, data: Vec<Elem>) -> Subspace {
        let rank = data.len().checked_div(ambient).unwrap_or(0);
        Subspace { ambient, rank, data }
    }

    /// Wraps a matrix that is already in RREF; `None` if it is not.
    pub fn from_canonical(f: &Field, ambient: usize, data: Vec<Elem>) -> Option<Subspace> {
        let s = Subspace::from_flat(f, ambient, data.clone());
        (s.data == data).then_some(s)
    }

    pub fn dim(&self) -> usize {
        self.rank
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.ambient..(i + 1) * self.ambient]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Elem]> + '_ {
        (0..self.rank).map(move |i| self.row(i))
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn as_flat(&self) -> &[Elem] {
        &self.data
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows().map(|r| r.iter().position(|x| !x.is_zero()).unwrap()).collect()
    }

    fn check_ambient(&self, other: usize) -> Result<()> {
        if self.ambient != other {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other });
        }
        Ok(())
    }

    /// Residue of `v` after reduction by this basis; zero iff `v` lies in the space.
    pub fn reduce(&self, f: &Field, v: &[Elem]) -> Vector {
        let mut v = v.to_vec();
        for r in self.rows() {
            let p = r.iter().position(|x| !x.is_zero()).unwrap();
            let c = v[p];
            if c.is_zero() {
                continue;
            }
            let nc = f.neg(c);
            for (x, &y) in v.iter_mut().zip(r) {
                *x = f.add(*x, f.mul(nc, y));
            }
        }
        v
    }

    pub fn contains_vector(&self, f: &Field, v: &[Elem]) -> bool {
        v.len() == self.ambient && self.reduce(f, v).iter().all(|x| x.is_zero())
    }

    pub fn contains(&self, f: &Field, other: &Subspace) -> bool {
        other.ambient == self.ambient && other.rows().all(|r| self.contains_vector(f, r))
    }

    pub fn sum(&self, f: &Field, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient)?;
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Subspace::from_flat(f, self.ambient, data))
    }

    /// Intersection by the Zassenhaus algorithm.
    pub fn intersect(&self, f: &Field, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient)?;
        let n = self.ambient;
        let width = 2 * n;
        let mut data = Vec::with_capacity((self.rank + other.rank) * width);
        for r in self.rows() {
            data.extend_from_slice(r);
            data.extend_from_slice(r);
        }
        for r in other.rows() {
            data.extend_from_slice(r);
            data.extend(std::iter::repeat_n(Elem::ZERO, n));
        }
        let rows = self.rank + other.rank;
        rref_flat(f, &mut data, rows, width);
        let mut out = Vec::new();
        for row in data.chunks(width) {
            if row[..n].iter().all(|x| x.is_zero()) {
                out.extend_from_slice(&row[n..]);
            }
        }
        Ok(Subspace::from_flat(f, n, out))
    }

    /// Image under `v -> v * m`, where `m` has `self.ambient` rows.
    pub fn map(&self, f: &Field, m: &[Vector]) -> Result<Subspace> {
        self.check_ambient(m.len())?;
        let out_dim = m.first().map_or(0, |r| r.len());
        let rows: Vec<Vector> = self.rows().map(|r| vec_mat(f, r, m)).collect();
        Subspace::from_rows(f, out_dim, &rows)
    }

    /// Extends `self` (a subspace of `outer`) by rows of `outer`'s RREF
    /// basis to a basis of `outer`; returns the added rows.
    pub fn complement_in(&self, f: &Field, outer: &Subspace) -> Vec<Vector> {
        let mut ech = Echelon::from_subspace(self);
        outer.rows().filter(|r| ech.insert(f, r)).map(|r| r.to_vec()).collect()
    }

    /// Rows as canonical integers.
    pub fn to_serial(&self) -> Vec<Vec<u32>> {
        self.rows().map(|r| r.iter().map(|x| x.0 as u32).collect()).collect()
    }

    /// Parses a serialized canonical matrix, rejecting non-canonical input.
    pub fn from_serial(f: &Field, ambient: usize, rows: &[Vec<u32>]) -> Result<Subspace> {
        let mut data = Vec::with_capacity(rows.len() * ambient);
        for r in rows {
            if r.len() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: r.len() });
            }
            for &x in r {
                data.push(f.elem(x)?);
            }
        }
        Subspace::from_canonical(f, ambient, data)
            .ok_or_else(|| Error::InvalidArgument("subspace matrix is not in canonical RREF".into()))
    }
}

/// Canonical RREF span of a list of rows.
pub fn rref(f: &Field, ambient: usize, rows: &[Vector]) -> Result<Subspace> {
    Subspace::from_rows(f, ambient, rows)
}

pub fn vec_mat(f: &Field, v: &[Elem], m: &[Vector]) -> Vector {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![Elem::ZERO; cols];
    for (&c, row) in v.iter().zip(m) {
        if c.is_zero() {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(row) {
            *o = f.add(*o, f.mul(c, x));
        }
    }
    out
}

pub fn axpy(f: &Field, a: Elem, x: &[Elem], y: &mut [Elem]) {
    if a.is_zero() {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = f.add(*yi, f.mul(a, xi));
    }
}

pub fn scale(f: &Field, a: Elem, x: &[Elem]) -> Vector {
    x.iter().map(|&v| f.mul(a, v)).collect()
}

pub fn unit_vector(dim: usize, i: usize) -> Vector {
    let mut v = vec![Elem::ZERO; dim];
    v[i] = Elem::ONE;
    v
}

/// Solutions of `rows * x = 0` (each row is one linear equation in `cols`
/// unknowns).
pub fn null_space(f: &Field, rows: &[Vector], cols: usize) -> Subspace {
    let mut data: Vec<Elem> = rows.iter().flat_map(|r| r.iter().copied()).collect();
    let pivots = rref_flat(f, &mut data, rows.len(), cols);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Elem::ZERO; cols];
        v[free] = Elem::ONE;
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(data[i * cols + free]);
        }
        basis.extend(v);
    }
    Subspace::from_flat(f, cols, basis)
}

/// One solution of `a * x = b`, free variables set to zero; `None` if the
/// system is inconsistent.
pub fn solve(f: &Field, a: &[Vector], b: &[Elem], cols: usize) -> Option<Vector> {
    let width = cols + 1;
    let mut data = Vec::with_capacity(a.len() * width);
    for (row, &rhs) in a.iter().zip(b) {
        data.extend_from_slice(row);
        data.push(rhs);
    }
    let pivots = rref_flat(f, &mut data, a.len(), width);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Elem::ZERO; cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = data[i * width + cols];
    }
    Some(x)
}

pub fn determinant(f: &Field, m: &[Vector]) -> Elem {
    let n = m.len();
    let mut a: Vec<Vector> = m.to_vec();
    let mut det = Elem::ONE;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Elem::ZERO;
        };
        if p != c {
            a.swap(p, c);
            det = f.neg(det);
        }
        let pivot = a[c][c];
        det = f.mul(det, pivot);
        let inv = f.inv(pivot);
        for i in c + 1..n {
            let factor = f.neg(f.mul(a[i][c], inv));
            if factor.is_zero() {
                continue;
            }
            let (top, bottom) = a.split_at_mut(i);
            axpy(f, factor, &top[c], &mut bottom[0]);
        }
    }
    det
}

pub fn rank_of(f: &Field, rows: &[Vector]) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut data: Vec<Elem> = rows.iter().flat_map(|r| r.iter().copied()).collect();
    rref_flat(f, &mut data, rows.len(), cols).len()
}

/// An incrementally grown basis kept in reduced row echelon form.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn from_subspace(s: &Subspace) -> Echelon {
        Echelon { rows: s.basis(), pivots: s.pivots() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn reduce(&self, f: &Field, v: &[Elem]) -> Vector {
        let mut v = v.to_vec();
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if !c.is_zero() {
                axpy(f, f.neg(c), r, &mut v);
            }
        }
        v
    }

    pub fn contains(&self, f: &Field, v: &[Elem]) -> bool {
        self.reduce(f, v).iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns whether it was independent of the current rows.
    pub fn insert(&mut self, f: &Field, v: &[Elem]) -> bool {
        let mut v = self.reduce(f, v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv(v[p]);
        v = scale(f, inv, &v);
        for r in &mut self.rows {
            let c = r[p];
            if !c.is_zero() {
                axpy(f, f.neg(c), &v, r);
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn to_subspace(&self, f: &Field, ambient: usize) -> Subspace {
        Subspace::from_flat(f, ambient, self.rows.iter().flatten().copied().collect())
    }
}

/// All `k`-subsets of `0..m` in lexicographic order; the index order of
/// Plücker coordinates.
pub fn k_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    (0..m).combinations(k).collect()
}

pub fn binomial(m: usize, k: usize) -> usize {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    (0..k).fold(1usize, |acc, i| acc * (m - i) / (i + 1))
}

/// Coordinates of a vector of `⋀^k F^m` in the basis `e_K` (sorted `K`,
/// lexicographic order), kept in canonical scaling: first nonzero entry 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PluckerVector {
    pub k: usize,
    pub coords: Vec<Elem>,
}

impl PluckerVector {
    /// Canonically scaled vector; `None` for the zero vector.
    pub fn normalized(f: &Field, k: usize, mut coords: Vec<Elem>) -> Option<PluckerVector> {
        let lead = *coords.iter().find(|x| !x.is_zero())?;
        let inv = f.inv(lead);
        for c in coords.iter_mut() {
            *c = f.mul(*c, inv);
        }
        Some(PluckerVector { k, coords })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// All `k x k` minors of the `k x m` matrix `rows`, over sorted column
/// subsets in lexicographic order (unscaled).
pub fn plucker_raw(f: &Field, rows: &[&[Elem]]) -> Vector {
    let k = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    (0..m)
        .combinations(k)
        .map(|cols| {
            let sub: Vec<Vector> = rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
            determinant(f, &sub)
        })
        .collect()
}

/// Canonical Plücker vector of a nonzero subspace.
pub fn plucker(f: &Field, u: &Subspace) -> Result<PluckerVector> {
    if u.dim() == 0 {
        return Err(Error::InvalidArgument("zero subspace has no Plücker vector".into()));
    }
    let rows: Vec<&[Elem]> = u.rows().collect();
    let raw = plucker_raw(f, &rows);
    PluckerVector::normalized(f, u.dim(), raw).ok_or_else(|| Error::Invariant("vanishing Plücker vector".into()))
}

/// Rank of the coordinate matrix, over the field or (with `subfield_only`)
/// over the subfield fixed by the involution. Elimination on a matrix with
/// subfield entries stays inside the subfield, so the same routine serves
/// both; the flag adds the entry check.
pub fn rank_over(f: &Field, vectors: &[PluckerVector], subfield_only: bool) -> Result<usize> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    let len = first.len();
    let mut ech = Echelon::new();
    for v in vectors {
        if v.len() != len {
            return Err(Error::DimensionMismatch { expected: len, found: v.len() });
        }
        if subfield_only {
            if !f.is_quadratic() {
                return Err(Error::NotQuadratic { order: f.order() });
            }
            if let Some(x) = v.coords.iter().find(|&&x| !f.in_subfield(x)) {
                return Err(Error::NotInSubfield(x.0 as u32));
            }
        }
        ech.insert(f, &v.coords);
        if ech.rank() == len {
            break;
        }
    }
    if subfield_only {
        debug_assert!(ech.rows().iter().flatten().all(|&x| f.in_subfield(x)));
    }
    Ok(ech.rank())
}

/// All `j`-dimensional subspaces of `F^m`, enumerated by RREF shape.
pub fn all_subspaces(f: &Field, m: usize, j: usize) -> Vec<Subspace> {
    let q = f.order() as usize;
    let mut out = Vec::new();
    for pivots in (0..m).combinations(j) {
        // free positions: (row, col) with col > pivot[row], col not a pivot
        let free: Vec<(usize, usize)> =
            (0..j).flat_map(|r| ((pivots[r] + 1)..m).filter(|c| !pivots.contains(c)).map(move |c| (r, c))).collect();
        let total = q.pow(free.len() as u32);
        for mut idx in 0..total {
            let mut data = vec![Elem::ZERO; j * m];
            for (r, &p) in pivots.iter().enumerate() {
                data[r * m + p] = Elem::ONE;
            }
            for &(r, c) in &free {
                data[r * m + c] = Elem((idx % q) as u16);
                idx /= q;
            }
            out.push(Subspace { ambient: m, rank: j, data });
        }
    }
    out.sort();
    out
}
