//! The polar `k`-Grassmannian as an explicit point-line geometry.
//!
//! Points are the totally isotropic `k`-spaces, sorted by their canonical
//! matrices and addressed by index. For `k < n` a line is the pencil of
//! points between a t.i. `(k-1)`-space `D` and a t.i. `(k+1)`-space `U`;
//! for `k = n` it is the set of generators on a t.i. `(n-1)`-space `D`.

pub mod closure;
pub mod export;
pub mod relation;
pub mod structure;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::FormSpace;
use crate::gf::{Elem, Field};
use crate::linalg::{all_subspaces, null_space, unit_vector, vec_mat, Subspace, Vector};

pub use closure::{closure, ClosureReport, ClosureState};
pub use relation::{classify_relation, parallel_lines, project_to_line, ParallelPair, RelationCode};
pub use structure::{
    apartment, collinearity_distances, complement_connected, hyperplane_w, residue, residue_span_check,
    HyperplaneReport,
};

/// The flag `(D, U)` defining a line, as indices into the geometry's
/// lower and upper object tables. `upper` is absent for `k = n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineDesc {
    pub lower: u32,
    pub upper: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct Geometry {
    space: FormSpace,
    k: usize,
    points: Vec<Subspace>,
    line_size: usize,
    line_points: Vec<u32>,
    line_desc: Vec<LineDesc>,
    lower: Vec<Subspace>,
    upper: Vec<Subspace>,
    adj_start: Vec<u32>,
    adj: Vec<u32>,
}

impl Geometry {
    /// Assembles a geometry from its parts and builds the point-line
    /// adjacency. Every line must have `line_size` sorted point indices.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        space: FormSpace,
        k: usize,
        points: Vec<Subspace>,
        line_size: usize,
        line_points: Vec<u32>,
        line_desc: Vec<LineDesc>,
        lower: Vec<Subspace>,
        upper: Vec<Subspace>,
    ) -> Geometry {
        let np = points.len();
        let mut deg = vec![0u32; np + 1];
        for &p in &line_points {
            deg[p as usize + 1] += 1;
        }
        for i in 0..np {
            deg[i + 1] += deg[i];
        }
        let mut fill = deg.clone();
        let mut adj = vec![0u32; line_points.len()];
        for (idx, &p) in line_points.iter().enumerate() {
            let l = (idx / line_size.max(1)) as u32;
            adj[fill[p as usize] as usize] = l;
            fill[p as usize] += 1;
        }
        Geometry { space, k, points, line_size, line_points, line_desc, lower, upper, adj_start: deg, adj }
    }

    pub fn space(&self) -> &FormSpace {
        &self.space
    }

    pub fn field(&self) -> &Field {
        self.space.field()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_lines(&self) -> usize {
        self.line_desc.len()
    }

    pub fn line_size(&self) -> usize {
        self.line_size
    }

    pub fn points(&self) -> &[Subspace] {
        &self.points
    }

    pub fn point(&self, i: u32) -> &Subspace {
        &self.points[i as usize]
    }

    pub fn index_of(&self, s: &Subspace) -> Option<u32> {
        self.points.binary_search(s).ok().map(|i| i as u32)
    }

    pub fn line(&self, l: u32) -> &[u32] {
        let s = l as usize * self.line_size;
        &self.line_points[s..s + self.line_size]
    }

    pub fn lines(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.line_points.chunks(self.line_size.max(1)).take(self.num_lines())
    }

    pub fn lines_on(&self, p: u32) -> &[u32] {
        let p = p as usize;
        &self.adj[self.adj_start[p] as usize..self.adj_start[p + 1] as usize]
    }

    pub fn line_desc(&self, l: u32) -> LineDesc {
        self.line_desc[l as usize]
    }

    /// `(D, U)` of line `l`.
    pub fn line_flag(&self, l: u32) -> (&Subspace, Option<&Subspace>) {
        let d = self.line_desc[l as usize];
        (&self.lower[d.lower as usize], d.upper.map(|u| &self.upper[u as usize]))
    }

    pub fn on_line(&self, p: u32, l: u32) -> bool {
        self.line(l).binary_search(&p).is_ok()
    }

    /// The unique line through two distinct collinear points.
    pub fn line_through(&self, a: u32, b: u32) -> Option<u32> {
        if a == b {
            return None;
        }
        let (la, lb) = (self.lines_on(a), self.lines_on(b));
        la.iter().copied().find(|l| lb.contains(l))
    }

    pub fn collinear(&self, a: u32, b: u32) -> bool {
        self.line_through(a, b).is_some()
    }

    pub fn label(&self) -> String {
        format!("{} Γ{}", self.space.label(), self.k)
    }
}

/// All t.i. subspaces of dimensions `0..=top`, each level sorted.
///
/// A t.i. `j`-space `U` in RREF is produced exactly once, from its first
/// `j-1` rows `R`: the last row `v` lies in `R^⊥`, vanishes at the pivots
/// of `R`, has a pivot beyond them, and the rows of `R` vanish there. We
/// enumerate exactly those `v`.
pub fn ti_levels(space: &FormSpace, top: usize) -> Vec<Vec<Subspace>> {
    let dim = space.dim();
    let mut levels = vec![vec![Subspace::zero(dim)]];
    for _ in 1..=top {
        let prev = levels.last().unwrap();
        let mut next: Vec<Subspace> = prev.par_iter().flat_map_iter(|r| ti_extensions(space, r)).collect();
        next.par_sort_unstable();
        debug_assert!(next.windows(2).all(|w| w[0] != w[1]));
        levels.push(next);
    }
    levels
}

fn ti_extensions(space: &FormSpace, r: &Subspace) -> Vec<Subspace> {
    let f = space.field();
    let dim = space.dim();
    let q = f.order() as usize;
    let piv = r.pivots();
    let start = piv.last().map_or(0, |&p| p + 1);
    let mut eqs: Vec<Vector> = r.rows().map(|row| space.dual_row(row)).collect();
    eqs.extend(piv.iter().map(|&p| unit_vector(dim, p)));
    let z = null_space(f, &eqs, dim);
    let zp = z.pivots();
    let mut out = Vec::new();
    for (i, &c) in zp.iter().enumerate() {
        if c < start || r.rows().any(|row| !row[c].is_zero()) {
            continue;
        }
        let tail: Vec<&[Elem]> = (i + 1..z.dim()).map(|t| z.row(t)).collect();
        let mut coeffs = vec![0usize; tail.len()];
        loop {
            let mut v = z.row(i).to_vec();
            for (&a, row) in coeffs.iter().zip(&tail) {
                if a != 0 {
                    crate::linalg::axpy(f, Elem(a as u16), row, &mut v);
                }
            }
            if space.is_isotropic(&v) {
                let mut data = r.as_flat().to_vec();
                data.extend_from_slice(&v);
                out.push(Subspace::from_rref_unchecked(dim, data));
            }
            // odometer over F^{tail}
            let mut t = 0;
            while t < coeffs.len() {
                coeffs[t] += 1;
                if coeffs[t] < q {
                    break;
                }
                coeffs[t] = 0;
                t += 1;
            }
            if t == coeffs.len() {
                break;
            }
        }
    }
    out
}

/// Subspaces of a small coordinate space `F^m` of dimensions `m-1` and
/// `m-2`, with containment.
struct LocalLattice {
    hyper: Vec<Subspace>,
    sub2: Vec<Subspace>,
    /// For each `sub2[b]`, the hyperplanes containing it.
    above: Vec<Vec<usize>>,
}

impl LocalLattice {
    fn new(f: &Field, m: usize) -> LocalLattice {
        let hyper = all_subspaces(f, m, m - 1);
        let sub2 = if m >= 2 { all_subspaces(f, m, m - 2) } else { Vec::new() };
        let above = sub2.iter().map(|d| (0..hyper.len()).filter(|&a| hyper[a].contains(f, d)).collect()).collect();
        LocalLattice { hyper, sub2, above }
    }
}

/// Image of a coefficient subspace under the basis of `u`.
fn image(f: &Field, coef: &Subspace, u: &Subspace) -> Subspace {
    let basis = u.basis();
    let data: Vec<Elem> = coef.rows().flat_map(|c| vec_mat(f, c, &basis)).collect();
    Subspace::from_flat(f, u.ambient(), data)
}

fn lookup(table: &[Subspace], s: &Subspace) -> Result<u32> {
    table.binary_search(s).map(|i| i as u32).map_err(|_| Error::Invariant("subspace missing from enumeration".into()))
}

/// Enumerates `Γ_k` of `space`.
pub fn enumerate(space: &FormSpace, k: usize) -> Result<Geometry> {
    let n = space.n();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} outside 1..={n}")));
    }
    let f = space.field();
    let top = if k < n { k + 1 } else { n };
    let mut levels = ti_levels(space, top);
    if k < n {
        let upper = levels.pop().unwrap();
        let points = levels.pop().unwrap();
        let lower = levels.pop().unwrap();
        let lat = LocalLattice::new(f, k + 1);
        let line_size = lat.above.first().map_or(0, |a| a.len());
        let per_u: Vec<Result<(Vec<u32>, Vec<u32>)>> = upper
            .par_iter()
            .map(|u| {
                let idx: Vec<u32> =
                    lat.hyper.iter().map(|h| lookup(&points, &image(f, h, u))).collect::<Result<_>>()?;
                let mut pts = Vec::with_capacity(lat.sub2.len() * line_size);
                let mut lows = Vec::with_capacity(lat.sub2.len());
                for (d, above) in lat.sub2.iter().zip(&lat.above) {
                    lows.push(lookup(&lower, &image(f, d, u))?);
                    let mut line: Vec<u32> = above.iter().map(|&a| idx[a]).collect();
                    line.sort_unstable();
                    pts.extend(line);
                }
                Ok((pts, lows))
            })
            .collect();
        let mut line_points = Vec::new();
        let mut line_desc = Vec::new();
        for (ui, r) in per_u.into_iter().enumerate() {
            let (pts, lows) = r?;
            line_points.extend(pts);
            line_desc.extend(lows.into_iter().map(|d| LineDesc { lower: d, upper: Some(ui as u32) }));
        }
        Ok(Geometry::from_parts(space.clone(), k, points, line_size, line_points, line_desc, lower, upper))
    } else {
        let points = levels.pop().unwrap();
        let lower = levels.pop().unwrap();
        let hyper = all_subspaces(f, n, n - 1);
        let per_point: Vec<Result<Vec<u32>>> =
            points.par_iter().map(|p| hyper.iter().map(|h| lookup(&lower, &image(f, h, p))).collect()).collect();
        let mut members: Vec<Vec<u32>> = vec![Vec::new(); lower.len()];
        for (pi, r) in per_point.into_iter().enumerate() {
            for d in r? {
                members[d as usize].push(pi as u32);
            }
        }
        let line_size = members.first().map_or(0, |m| m.len());
        if members.iter().any(|m| m.len() != line_size) {
            return Err(Error::Invariant("dual polar lines of unequal size".into()));
        }
        let line_points: Vec<u32> = members.into_iter().flatten().collect();
        let line_desc = (0..lower.len() as u32).map(|d| LineDesc { lower: d, upper: None }).collect();
        Ok(Geometry::from_parts(space.clone(), k, points, line_size, line_points, line_desc, lower, Vec::new()))
    }
}
