//! Apartments, residues, the hyperplane of points meeting `W`, and
//! connectivity of subspace complements.

use std::collections::VecDeque;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{closure, Geometry};
use crate::error::{Error, Result};
use crate::forms::WittComplement;
use crate::gf::Elem;
use crate::linalg::{rank_of, Subspace, Vector};

/// Indices of the apartment points `E_{J,K} = ⟨e_j, f_k : j ∈ J, k ∈ K⟩`
/// with `J ∩ K = ∅`, `|J| + |K| = k`, sorted.
pub fn apartment(g: &Geometry, basis: &[Vector]) -> Result<Vec<u32>> {
    let v = g.space();
    if !v.is_hyperbolic_basis(basis) {
        return Err(Error::Precondition("apartment needs a hyperbolic basis".into()));
    }
    let n = v.n();
    let k = g.k();
    let mut out = Vec::new();
    // each of the k chosen pairs contributes e_i or f_i
    for pairs in (0..n).combinations(k) {
        for mask in 0..(1u32 << k) {
            let rows: Vec<Vector> = pairs
                .iter()
                .enumerate()
                .map(|(t, &i)| basis[if mask >> t & 1 == 0 { i } else { n + i }].clone())
                .collect();
            let s = Subspace::from_rows(v.field(), v.dim(), &rows)?;
            out.push(g.index_of(&s).ok_or_else(|| Error::Invariant("apartment object is not a point".into()))?);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Points incident with the t.i. subspace `x`: containing it when
/// `dim x < k`, contained in it when `dim x > k`.
pub fn residue(g: &Geometry, x: &Subspace) -> Result<Vec<u32>> {
    let v = g.space();
    let f = v.field();
    if x.ambient() != v.dim() {
        return Err(Error::DimensionMismatch { expected: v.dim(), found: x.ambient() });
    }
    if !v.is_totally_isotropic(x) {
        return Err(Error::Precondition("residue object is not totally isotropic".into()));
    }
    if x.dim() == g.k() {
        return Err(Error::Precondition("residue object has the dimension of a point".into()));
    }
    let below = x.dim() < g.k();
    Ok((0..g.num_points() as u32)
        .filter(|&p| {
            let pt = g.point(p);
            if below {
                pt.contains(f, x)
            } else {
                x.contains(f, pt)
            }
        })
        .collect())
}

/// BFS distances in the collinearity graph from `src`; `u32::MAX` marks
/// unreachable points. `allowed` restricts the walk to a point subset.
pub fn collinearity_distances(g: &Geometry, src: u32, allowed: Option<&[bool]>) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.num_points()];
    let ok = |p: u32| allowed.is_none_or(|a| a[p as usize]);
    if !ok(src) {
        return dist;
    }
    dist[src as usize] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(p) = queue.pop_front() {
        let d = dist[p as usize] + 1;
        for &l in g.lines_on(p) {
            for &x in g.line(l) {
                if dist[x as usize] == u32::MAX && ok(x) {
                    dist[x as usize] = d;
                    queue.push_back(x);
                }
            }
        }
    }
    dist
}

fn membership(g: &Geometry, s: &[u32]) -> Result<Vec<bool>> {
    let mut m = vec![false; g.num_points()];
    for &p in s {
        if p as usize >= g.num_points() {
            return Err(Error::InvalidArgument(format!("point index {p} out of range")));
        }
        m[p as usize] = true;
    }
    Ok(m)
}

/// Whether a line meets the set in 0, 1 or all of its points, for every line.
fn is_subspace(g: &Geometry, member: &[bool]) -> bool {
    g.lines().all(|line| {
        let c = line.iter().filter(|&&p| member[p as usize]).count();
        c <= 1 || c == line.len()
    })
}

/// Whether the points outside the proper subspace `s` form one connected
/// component of the collinearity graph.
pub fn complement_connected(g: &Geometry, s: &[u32]) -> Result<bool> {
    let member = membership(g, s)?;
    if !is_subspace(g, &member) {
        return Err(Error::Precondition("point set is not a subspace".into()));
    }
    let allowed: Vec<bool> = member.iter().map(|m| !m).collect();
    let Some(start) = (0..g.num_points() as u32).find(|&p| allowed[p as usize]) else {
        return Err(Error::Precondition("the subspace is the whole point set".into()));
    };
    let dist = collinearity_distances(g, start, Some(&allowed));
    Ok((0..g.num_points()).all(|p| !allowed[p] || dist[p] != u32::MAX))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneReport {
    /// Sorted indices of the points meeting `W` nontrivially.
    pub points: Vec<u32>,
    pub proper: bool,
    /// Every line meets the set in exactly one or in all of its points.
    pub meets_every_line: bool,
    /// Sampled points outside the set whose addition spans everything.
    pub extensions: Vec<(u32, bool)>,
}

impl HyperplaneReport {
    pub fn is_maximal_hyperplane(&self) -> bool {
        self.proper && self.meets_every_line && self.extensions.iter().all(|e| e.1)
    }
}

/// `H = {K : K ∩ W ≠ 0}` for a non-degenerate `W` of codimension 2, with
/// the hyperplane and maximality checks; `samples` points outside `H`
/// (chosen with `seed`) are tested for spanning with `H`.
pub fn hyperplane_w(g: &Geometry, w: &Subspace, samples: usize, seed: u64) -> Result<HyperplaneReport> {
    let v = g.space();
    let f = v.field();
    if g.k() != 2 || v.n() < 3 {
        return Err(Error::Precondition("hyperplane of W needs k = 2 and n >= 3".into()));
    }
    if w.ambient() != v.dim() || w.dim() + 2 != v.dim() || v.radical(w)?.dim() != 0 {
        return Err(Error::Precondition("W must be a non-degenerate subspace of codimension 2".into()));
    }
    // K ∩ W = 0 iff the pairings of K against W^⊥ have full rank
    let wp = v.perp(w)?;
    let funcs: Vec<Vector> = wp.rows().map(|r| v.dual_row(r)).collect();
    let meets = |k: &Subspace| -> bool {
        let m: Vec<Vector> = k
            .rows()
            .map(|row| {
                funcs.iter().map(|c| c.iter().zip(row).fold(Elem::ZERO, |a, (&x, &y)| f.add(a, f.mul(x, y)))).collect()
            })
            .collect();
        rank_of(f, &m) < k.dim()
    };
    let member: Vec<bool> = g.points().iter().map(meets).collect();
    let points: Vec<u32> = (0..g.num_points() as u32).filter(|&p| member[p as usize]).collect();
    let proper = points.len() < g.num_points();
    let meets_every_line = g.lines().all(|line| {
        let c = line.iter().filter(|&&p| member[p as usize]).count();
        c == 1 || c == line.len()
    });
    let mut outside: Vec<u32> = (0..g.num_points() as u32).filter(|&p| !member[p as usize]).collect();
    outside.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut extensions = Vec::new();
    for &x in outside.iter().take(samples) {
        let mut seed_set = points.clone();
        seed_set.push(x);
        extensions.push((x, closure(g, &seed_set)?.is_full(g)));
    }
    Ok(HyperplaneReport { points, proper, meets_every_line, extensions })
}

/// Checks `⟨S⟩_{Γ_k(W)} ⊆ ⟨S, Res_k(P), Res_k(Q)⟩_{Γ_k(V)}` for points `s`
/// of the lower geometry `gw`.
pub fn residue_span_check(gv: &Geometry, gw: &Geometry, wc: &WittComplement, s: &[u32]) -> Result<bool> {
    let v = gv.space();
    let f = v.field();
    if v.dim() < 6 {
        return Err(Error::Precondition("residue span check needs dim V >= 6".into()));
    }
    if gw.k() != gv.k() || gw.space() != &wc.lower {
        return Err(Error::Precondition("geometries do not match the decomposition".into()));
    }
    let lift = |p: u32| -> Result<u32> {
        gv.index_of(&wc.lift(f, gw.point(p))).ok_or_else(|| Error::Invariant("lifted point missing".into()))
    };
    let inner = closure(gw, s)?;
    let mut seed: Vec<u32> = s.iter().map(|&p| lift(p)).collect::<Result<_>>()?;
    seed.extend(residue(gv, &wc.p)?);
    seed.extend(residue(gv, &wc.q)?);
    let outer = closure(gv, &seed)?;
    for &p in &inner.closed {
        if outer.closed.binary_search(&lift(p)?).is_err() {
            return Ok(false);
        }
    }
    Ok(true)
}
