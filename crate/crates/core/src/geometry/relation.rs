//! Two-point relations in `Γ_2`, projections onto lines, and parallel
//! line pairs.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::Geometry;
use crate::error::{Error, Result};
use crate::gf::Elem;
use crate::linalg::{self, rank_of, Subspace, Vector};

/// Relation between two points of `Γ_2`, ordered as
/// `0 < 1 < {2p, 2q} < 2s < 3` with `2p` and `2q` incomparable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationCode {
    #[serde(rename = "0")]
    Equal,
    #[serde(rename = "1")]
    Collinear,
    #[serde(rename = "2p")]
    TwoP,
    #[serde(rename = "2q")]
    TwoQ,
    #[serde(rename = "2s")]
    TwoS,
    #[serde(rename = "3")]
    Opposite,
}

impl RelationCode {
    pub const ALL: [RelationCode; 6] = [
        RelationCode::Equal,
        RelationCode::Collinear,
        RelationCode::TwoP,
        RelationCode::TwoQ,
        RelationCode::TwoS,
        RelationCode::Opposite,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationCode::Equal => "0",
            RelationCode::Collinear => "1",
            RelationCode::TwoP => "2p",
            RelationCode::TwoQ => "2q",
            RelationCode::TwoS => "2s",
            RelationCode::Opposite => "3",
        }
    }

    /// Collinearity distance realizing this relation.
    pub fn mu(self) -> u32 {
        match self {
            RelationCode::Equal => 0,
            RelationCode::Collinear => 1,
            RelationCode::TwoP | RelationCode::TwoQ | RelationCode::TwoS => 2,
            RelationCode::Opposite => 3,
        }
    }

    fn level(self) -> u8 {
        match self {
            RelationCode::Equal => 0,
            RelationCode::Collinear => 1,
            RelationCode::TwoP | RelationCode::TwoQ => 2,
            RelationCode::TwoS => 3,
            RelationCode::Opposite => 4,
        }
    }

    /// Strict order of the Hasse diagram.
    pub fn precedes(self, other: RelationCode) -> bool {
        self.level() < other.level()
    }

    pub fn comparable(self, other: RelationCode) -> bool {
        self == other || self.precedes(other) || other.precedes(self)
    }
}

impl fmt::Display for RelationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for RelationCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<RelationCode> {
        RelationCode::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown relation code '{s}'")))
    }
}

/// Relation between two t.i. 2-spaces, from `d = dim⟨x,y⟩` and the
/// dimension `r` of its radical.
pub fn relation_of(g: &Geometry, x: &Subspace, y: &Subspace) -> Result<RelationCode> {
    if x == y {
        return Ok(RelationCode::Equal);
    }
    let v = g.space();
    let f = v.field();
    let s = x.sum(f, y)?;
    let basis: Vec<&[Elem]> = s.rows().collect();
    let gram: Vec<Vector> = basis.iter().map(|a| basis.iter().map(|b| v.pair(a, b)).collect()).collect();
    let d = s.dim();
    let r = d - rank_of(f, &gram);
    match (d, r) {
        (3, 3) => Ok(RelationCode::Collinear),
        (3, 1) => Ok(RelationCode::TwoQ),
        (4, 4) => Ok(RelationCode::TwoP),
        (4, 2) => Ok(RelationCode::TwoS),
        (4, 0) => Ok(RelationCode::Opposite),
        _ => Err(Error::Invariant(format!("impossible span/radical dimensions ({d}, {r})"))),
    }
}

fn require_k2(g: &Geometry) -> Result<()> {
    if g.k() != 2 {
        return Err(Error::Precondition(format!("relations are defined for k = 2, not k = {}", g.k())));
    }
    Ok(())
}

fn check_point(g: &Geometry, p: u32) -> Result<()> {
    if p as usize >= g.num_points() {
        return Err(Error::InvalidArgument(format!("point index {p} out of range")));
    }
    Ok(())
}

pub fn classify_relation(g: &Geometry, x: u32, y: u32) -> Result<RelationCode> {
    require_k2(g)?;
    check_point(g, x)?;
    check_point(g, y)?;
    relation_of(g, g.point(x), g.point(y))
}

/// The gate of `p` on line `l`: the unique point of `l` whose relation to
/// `p` is minimal, when the points of `l` realize two relations. With one
/// relation there is no gate and the result is `None`. A point on `l` is
/// its own gate.
pub fn project_to_line(g: &Geometry, p: u32, l: u32) -> Result<Option<u32>> {
    require_k2(g)?;
    check_point(g, p)?;
    if l as usize >= g.num_lines() {
        return Err(Error::InvalidArgument(format!("line index {l} out of range")));
    }
    if g.on_line(p, l) {
        return Ok(Some(p));
    }
    let codes: Vec<(u32, RelationCode)> =
        g.line(l).iter().map(|&x| Ok((x, classify_relation(g, p, x)?))).collect::<Result<_>>()?;
    let mut distinct: Vec<RelationCode> = codes.iter().map(|c| c.1).collect();
    distinct.sort();
    distinct.dedup();
    match distinct.as_slice() {
        [_] => Ok(None),
        [a, b] => {
            if !a.comparable(*b) {
                return Err(Error::Invariant(format!("incomparable relations {a} and {b} on one line")));
            }
            let min = if a.precedes(*b) { *a } else { *b };
            let hits: Vec<u32> = codes.iter().filter(|c| c.1 == min).map(|c| c.0).collect();
            if hits.len() != 1 {
                return Err(Error::Invariant(format!("minimal relation {min} attained {} times", hits.len())));
            }
            Ok(Some(hits[0]))
        }
        _ => Err(Error::Invariant(format!("{} relations from a point to a line", distinct.len()))),
    }
}

/// A pair of parallel lines through `p` and `q`, with the auxiliary
/// points `p'` on `l` and `q'` on `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelPair {
    pub relation: RelationCode,
    pub cross: RelationCode,
    pub l: u32,
    pub m: u32,
    pub p_prime: u32,
    pub q_prime: u32,
    /// Adapted hyperbolic basis, `e_1..e_n, f_1..f_n`.
    pub basis: Vec<Vector>,
}

/// A vector `b ∈ s` with `f(b, a) = t` for each constraint `(a, t)`.
fn find_in(g: &Geometry, s: &Subspace, constraints: &[(&[Elem], Elem)]) -> Result<Vector> {
    let v = g.space();
    let f = v.field();
    let rows: Vec<Vector> = constraints.iter().map(|(a, _)| s.rows().map(|r| v.pair(r, a)).collect()).collect();
    let rhs: Vec<Elem> = constraints.iter().map(|c| c.1).collect();
    let c = linalg::solve(f, &rows, &rhs, s.dim())
        .ok_or_else(|| Error::Invariant("no vector with the required pairings".into()))?;
    let mut b = vec![Elem::ZERO; s.ambient()];
    for (ci, r) in c.iter().zip(s.rows()) {
        linalg::axpy(f, *ci, r, &mut b);
    }
    Ok(b)
}

/// Any vector of `outer` outside `inner`, least in RREF order.
fn outside(g: &Geometry, outer: &Subspace, inner: &Subspace) -> Vector {
    inner.complement_in(g.field(), outer).into_iter().next().expect("proper subspace")
}

fn single(s: &Subspace) -> Vector {
    s.row(0).to_vec()
}

/// Builds a hyperbolic basis with `p = ⟨e_1, e_2⟩` and `q` in the standard
/// position for its relation, then returns the lines `l = pp'`, `m = qq'`.
pub fn parallel_lines(g: &Geometry, p: u32, q: u32) -> Result<ParallelPair> {
    let rel = classify_relation(g, p, q)?;
    let v = g.space();
    let f = v.field();
    let n = v.n();
    let need = if rel == RelationCode::TwoP { 4 } else { 3 };
    if matches!(rel, RelationCode::Equal | RelationCode::Collinear) {
        return Err(Error::Precondition(format!("points are in relation {rel}, not far apart")));
    }
    if n < need {
        return Err(Error::Precondition(format!("relation {rel} needs n >= {need}")));
    }
    let (ps, qs) = (g.point(p), g.point(q));
    let fe = v.gram_entry(n, 0); // f(f_i, e_i)
                                 // slots: e_i -> i - 1, f_i -> n + i - 1
    let (e, fi) = (|i: usize| i - 1, |i: usize| n + i - 1);
    let partial: Vec<(usize, Vector)> = match rel {
        RelationCode::Opposite => {
            let (a1, a2) = (ps.row(0).to_vec(), ps.row(1).to_vec());
            let b1 = find_in(g, qs, &[(&a1, fe), (&a2, Elem::ZERO)])?;
            let b2 = find_in(g, qs, &[(&a1, Elem::ZERO), (&a2, fe)])?;
            vec![(e(1), a1), (e(2), a2), (fi(1), b1), (fi(2), b2)]
        }
        RelationCode::TwoS => {
            let a2 = single(&ps.intersect(f, &v.perp(qs)?)?);
            let a1 = outside(g, ps, &Subspace::from_rows(f, v.dim(), std::slice::from_ref(&a2))?);
            let b3 = single(&qs.intersect(f, &v.perp(ps)?)?);
            let b1 = find_in(g, qs, &[(&a1, fe)])?;
            vec![(e(1), a1), (e(2), a2), (fi(1), b1), (fi(3), b3)]
        }
        RelationCode::TwoQ => {
            let a2 = single(&ps.intersect(f, qs)?);
            let line = Subspace::from_rows(f, v.dim(), std::slice::from_ref(&a2))?;
            let a1 = outside(g, ps, &line);
            let b1 = find_in(g, qs, &[(&a1, fe)])?;
            vec![(e(1), a1), (e(2), a2), (fi(1), b1)]
        }
        RelationCode::TwoP => {
            vec![
                (e(1), ps.row(0).to_vec()),
                (e(2), ps.row(1).to_vec()),
                (e(3), qs.row(0).to_vec()),
                (e(4), qs.row(1).to_vec()),
            ]
        }
        _ => unreachable!(),
    };
    let basis = v.extend_hyperbolic(&partial)?;
    let bv = |s: usize| basis[s].clone();
    let span = |a: usize, b: usize| -> Result<u32> {
        let s = Subspace::from_rows(f, v.dim(), &[bv(a), bv(b)])?;
        g.index_of(&s).ok_or_else(|| Error::Invariant("table point is not a point".into()))
    };
    let (pp, qq, cross) = match rel {
        RelationCode::Opposite => (span(e(1), e(3))?, span(fi(1), fi(3))?, RelationCode::TwoS),
        RelationCode::TwoS => (span(e(1), fi(3))?, span(fi(1), e(2))?, RelationCode::TwoQ),
        RelationCode::TwoQ => (span(e(2), fi(3))?, span(e(2), e(3))?, RelationCode::Collinear),
        RelationCode::TwoP => (span(e(1), e(3))?, span(e(2), e(4))?, RelationCode::Collinear),
        _ => unreachable!(),
    };
    let l = g.line_through(p, pp).ok_or_else(|| Error::Invariant("p and p' are not collinear".into()))?;
    let m = g.line_through(q, qq).ok_or_else(|| Error::Invariant("q and q' are not collinear".into()))?;
    let out = ParallelPair { relation: rel, cross, l, m, p_prime: pp, q_prime: qq, basis };
    verify_parallel(g, &out, p, q)?;
    Ok(out)
}

/// Checks the table relations, that `δ(l, m)` has exactly two elements,
/// that the projections between `l` and `m` are mutually inverse
/// bijections, and that `proj_m(p) ≠ q`.
fn verify_parallel(g: &Geometry, pair: &ParallelPair, p: u32, q: u32) -> Result<()> {
    let fail = |what: &str| Err(Error::Invariant(format!("parallel lines: {what}")));
    if classify_relation(g, pair.p_prime, pair.q_prime)? != pair.relation
        || classify_relation(g, p, pair.q_prime)? != pair.cross
        || classify_relation(g, pair.p_prime, q)? != pair.cross
    {
        return fail("table relations");
    }
    let mut rels = Vec::new();
    for &x in g.line(pair.l) {
        for &y in g.line(pair.m) {
            rels.push(classify_relation(g, x, y)?);
        }
    }
    rels.sort();
    rels.dedup();
    if rels.len() != 2 {
        return fail("relation set does not have two elements");
    }
    for &x in g.line(pair.l) {
        let Some(y) = project_to_line(g, x, pair.m)? else {
            return fail("missing projection onto m");
        };
        if project_to_line(g, y, pair.l)? != Some(x) {
            return fail("projections are not mutually inverse");
        }
    }
    if project_to_line(g, p, pair.m)? == Some(q) {
        return fail("p projects onto q");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{FormKind, FormSpace};
    use crate::geometry::enumerate;
    use crate::linalg::unit_vector;
    use std::sync::OnceLock;

    fn sp63() -> &'static Geometry {
        static G: OnceLock<Geometry> = OnceLock::new();
        G.get_or_init(|| enumerate(&FormSpace::standard(FormKind::Symplectic, 3, 3).unwrap(), 2).unwrap())
    }

    fn pt(g: &Geometry, a: usize, b: usize) -> u32 {
        let d = g.space().dim();
        let s = Subspace::from_rows(g.field(), d, &[unit_vector(d, a), unit_vector(d, b)]).unwrap();
        g.index_of(&s).unwrap()
    }

    #[test]
    fn hasse_order() {
        use RelationCode::*;
        assert!(
            Equal.precedes(Collinear) && Collinear.precedes(TwoP) && TwoQ.precedes(TwoS) && TwoS.precedes(Opposite)
        );
        assert!(!TwoP.comparable(TwoQ));
        for a in RelationCode::ALL {
            for b in RelationCode::ALL {
                if a.precedes(b) {
                    assert!(a.mu() <= b.mu());
                }
            }
            assert_eq!(a.as_str().parse::<RelationCode>().unwrap(), a);
        }
        assert_eq!(serde_json::to_string(&TwoS).unwrap(), "\"2s\"");
    }

    #[test]
    fn table_examples() {
        let g = sp63();
        // 0-based: e1=0, e2=1, e3=2, f1=3, f2=4, f3=5
        let p = pt(g, 0, 1);
        assert_eq!(classify_relation(g, p, p).unwrap(), RelationCode::Equal);
        assert_eq!(classify_relation(g, p, pt(g, 3, 4)).unwrap(), RelationCode::Opposite);
        assert_eq!(classify_relation(g, p, pt(g, 1, 3)).unwrap(), RelationCode::TwoQ);
        assert_eq!(classify_relation(g, p, pt(g, 3, 5)).unwrap(), RelationCode::TwoS);
        assert_eq!(classify_relation(g, p, pt(g, 0, 2)).unwrap(), RelationCode::Collinear);
        let v4 = FormSpace::standard(FormKind::Symplectic, 3, 4).unwrap();
        let f = v4.field();
        let x = Subspace::from_rows(f, 8, &[unit_vector(8, 0), unit_vector(8, 1)]).unwrap();
        let y = Subspace::from_rows(f, 8, &[unit_vector(8, 2), unit_vector(8, 3)]).unwrap();
        let tiny = enumerate(&FormSpace::standard(FormKind::Symplectic, 2, 4).unwrap(), 1).unwrap();
        assert!(classify_relation(&tiny, 0, 1).is_err());
        // relation_of only needs the form
        let g4 = Geometry::from_parts(v4, 2, Vec::new(), 0, Vec::new(), Vec::new(), Vec::new(), Vec::new());
        assert_eq!(relation_of(&g4, &x, &y).unwrap(), RelationCode::TwoP);
    }

    #[test]
    fn projection_cases() {
        let g = sp63();
        let p = pt(g, 0, 1);
        // D = ⟨e3⟩, U = ⟨e1, e2, e3⟩: every point of the line is collinear with p
        let l = g.line_through(pt(g, 0, 2), pt(g, 1, 2)).unwrap();
        assert!(!g.on_line(p, l));
        for &x in g.line(l) {
            assert_eq!(classify_relation(g, p, x).unwrap(), RelationCode::Collinear);
        }
        assert_eq!(project_to_line(g, p, l).unwrap(), None);
        // U = ⟨e1, e3, f2⟩: U ∩ p = ⟨e1⟩ and U ∩ p^⊥ = ⟨e1, e3⟩ = r is the gate
        let r = pt(g, 0, 2);
        let l = g.line_through(r, pt(g, 0, 4)).unwrap();
        assert_eq!(project_to_line(g, p, l).unwrap(), Some(r));
        for &x in g.line(l) {
            let c = classify_relation(g, p, x).unwrap();
            assert_eq!(c, if x == r { RelationCode::Collinear } else { RelationCode::TwoQ });
        }
        assert_eq!(project_to_line(g, p, g.lines_on(p)[0]).unwrap(), Some(p));
    }

    #[test]
    fn parallel_lines_table_rows() {
        let g = sp63();
        let p = pt(g, 0, 1);
        for (q, cross) in [
            (pt(g, 3, 4), RelationCode::TwoS),
            (pt(g, 3, 5), RelationCode::TwoQ),
            (pt(g, 1, 3), RelationCode::Collinear),
        ] {
            let pair = parallel_lines(g, p, q).unwrap();
            assert_eq!(pair.cross, cross);
            assert!(g.on_line(p, pair.l) && g.on_line(q, pair.m));
            assert!(g.space().is_hyperbolic_basis(&pair.basis));
        }
        assert!(parallel_lines(g, p, pt(g, 0, 2)).is_err());
        assert!(parallel_lines(g, p, p).is_err());
    }

    #[test]
    fn parallel_lines_for_non_coordinate_pairs() {
        let g = sp63();
        let mut done = [0usize; 6];
        for p in (0..g.num_points() as u32).step_by(97) {
            for q in (0..g.num_points() as u32).step_by(89) {
                let rel = classify_relation(g, p, q).unwrap();
                if rel.mu() >= 2 {
                    let pair = parallel_lines(g, p, q).unwrap();
                    assert_eq!(pair.relation, rel);
                    done[rel as usize] += 1;
                }
            }
        }
        assert!(done[RelationCode::TwoQ as usize] > 0 && done[RelationCode::TwoS as usize] > 0);
        assert!(done[RelationCode::Opposite as usize] > 0);
    }

    #[test]
    fn relation_is_symmetric_and_2p_absent_for_n3() {
        let g = sp63();
        for x in (0..g.num_points() as u32).step_by(13) {
            for y in (0..g.num_points() as u32).step_by(17) {
                let a = classify_relation(g, x, y).unwrap();
                assert_eq!(a, classify_relation(g, y, x).unwrap());
                assert_ne!(a, RelationCode::TwoP);
            }
        }
    }

    #[test]
    fn gatedness_on_sampled_lines_of_sp6() {
        let g = sp63();
        for p in (0..g.num_points() as u32).step_by(61) {
            for l in (0..g.num_lines() as u32).step_by(37) {
                project_to_line(g, p, l).unwrap();
            }
        }
    }
}
