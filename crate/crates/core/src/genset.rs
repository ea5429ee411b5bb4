//! Inductive generating sets `S_{n,k}` and rank certificates.
//!
//! `S_{n,k}(V) = S_{n-1,k}(W) ⊎ {⟨L,P⟩, ⟨L,Q⟩ : L ∈ S_{n-1,k-1}(W)} ⊎ {M̂ : M ∈ S_{n-1,k-2}(W)}`
//! with `V = W ⊥ ⟨P, Q⟩`. The recursion bottoms out at `k = 1` (the points
//! of the standard apartment), at `k = n` (a rank-guided greedy search on
//! the dual polar space) and at `k = 0` (the zero space).

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::embedding::{embedding_dimension, plucker_vectors, subset_dimension};
use crate::error::{Error, Result};
use crate::forms::{FormKind, FormSpace, FormSpec, WittComplement};
use crate::geometry::{closure, enumerate, ClosureState, Geometry};
use crate::linalg::{unit_vector, Echelon, PluckerVector, Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "base-apartment")]
    BaseApartment,
    #[serde(rename = "base-dual")]
    BaseDual,
    #[serde(rename = "carried-from-W")]
    CarriedFromW,
    #[serde(rename = "hat-(k-1)-P")]
    HatP,
    #[serde(rename = "hat-(k-1)-Q")]
    HatQ,
    #[serde(rename = "hat-(k-2)")]
    HatM,
}

/// One node of the recursion over `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceNode {
    pub n: usize,
    pub k: usize,
    pub rule: String,
    pub size: usize,
    pub children: Vec<TraceNode>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyOptions {
    pub seed: u64,
    /// Total number of orderings tried, the first being index order.
    pub restarts: usize,
    /// Candidates compared by span size at each step.
    pub lookahead: usize,
}

impl Default for GreedyOptions {
    fn default() -> GreedyOptions {
        GreedyOptions { seed: 0, restarts: 32, lookahead: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyStats {
    pub n: usize,
    pub attempts: usize,
    pub best_size: usize,
    pub target: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSet {
    pub form: FormSpec,
    pub k: usize,
    pub members: Vec<Subspace>,
    pub tags: Vec<Provenance>,
    pub trace: TraceNode,
    pub greedy: Vec<GreedyStats>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GenSetFile {
    schema: u32,
    form: FormSpec,
    k: usize,
    points: Vec<Vec<Vec<u32>>>,
    tags: Vec<Provenance>,
    trace: TraceNode,
    greedy: Vec<GreedyStats>,
}

impl GenSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn indices_in(&self, g: &Geometry) -> Result<Vec<u32>> {
        if g.space().spec() != self.form || g.k() != self.k {
            return Err(Error::Precondition("generating set belongs to a different geometry".into()));
        }
        self.members
            .iter()
            .map(|m| {
                g.index_of(m).ok_or_else(|| Error::InvalidArgument("member is not a point of the geometry".into()))
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let file = GenSetFile {
            schema: crate::geometry::export::SCHEMA,
            form: self.form.clone(),
            k: self.k,
            points: self.members.iter().map(|m| m.to_serial()).collect(),
            tags: self.tags.clone(),
            trace: self.trace.clone(),
            greedy: self.greedy.clone(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(s: &str) -> Result<GenSet> {
        let file: GenSetFile = serde_json::from_str(s)?;
        if file.schema != crate::geometry::export::SCHEMA {
            return Err(Error::InvalidArgument(format!("unsupported schema {}", file.schema)));
        }
        let space = FormSpace::from_spec(&file.form)?;
        let members = file
            .points
            .iter()
            .map(|rows| Subspace::from_serial(space.field(), space.dim(), rows))
            .collect::<Result<Vec<_>>>()?;
        if members.len() != file.tags.len() {
            return Err(Error::InvalidArgument("tags and points differ in length".into()));
        }
        Ok(GenSet { form: file.form, k: file.k, members, tags: file.tags, trace: file.trace, greedy: file.greedy })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<GenSet> {
        GenSet::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Generalized binomial coefficient: `m` may be negative, `C(m, k) = 0`
/// for `k < 0`.
pub fn gbinom(m: i64, k: i64) -> i128 {
    if k < 0 {
        return 0;
    }
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..k {
        num *= (m - i) as i128;
        den *= (i + 1) as i128;
    }
    num / den
}

/// Both sides of `C(m,k) = C(m-2,k) + 2C(m-2,k-1) + C(m-2,k-2)`.
pub fn binomial_identity_check(m: i64, k: i64) -> bool {
    gbinom(m, k) == gbinom(m - 2, k) + 2 * gbinom(m - 2, k - 1) + gbinom(m - 2, k - 2)
}

/// The symplectic form of the recursion:
/// `C(2n,k) - C(2n,k-2) = C(2n-2,k) + 2C(2n-2,k-1) - 2C(2n-2,k-3) - C(2n-2,k-4)`,
/// together with the Hermitian one (the case `m = 2n` of the first identity).
pub fn binomial_identity_check_b(n: i64, k: i64) -> bool {
    let m = 2 * n - 2;
    let first = gbinom(2 * n, k) == gbinom(m, k) + 2 * gbinom(m, k - 1) + gbinom(m, k - 2);
    let second = gbinom(2 * n, k) - gbinom(2 * n, k - 2)
        == gbinom(m, k) + 2 * gbinom(m, k - 1) - 2 * gbinom(m, k - 3) - gbinom(m, k - 4);
    first && second
}

/// `C(2n,k)` for Hermitian forms, `C(2n,k) - C(2n,k-2)` for symplectic ones.
pub fn expected_rank(kind: FormKind, n: usize, k: usize) -> usize {
    let (m, k) = (2 * n as i64, k as i64);
    let r = match kind {
        FormKind::Hermitian => gbinom(m, k),
        FormKind::Symplectic => gbinom(m, k) - gbinom(m, k - 2),
    };
    r as usize
}

/// Whether the generating rank is known to equal the embedding dimension:
/// Hermitian over a field other than GF(4) (or `k = 1`), symplectic in
/// odd characteristic.
pub fn certification_eligible(space: &FormSpace, k: usize) -> bool {
    match space.kind() {
        FormKind::Hermitian => space.field().order() != 4 || k == 1,
        FormKind::Symplectic => space.field().characteristic() != 2,
    }
}

/// Lower bound `(4^n + 2) / 3` for the Hermitian dual polar space over GF(4).
#[allow(clippy::manual_div_ceil)]
pub fn gf4_bound(n: usize) -> u64 {
    (4u64.pow(n as u32) + 2) / 3
}

fn point_of(g: &Geometry, s: &Subspace) -> Result<u32> {
    g.index_of(s).ok_or_else(|| Error::Invariant("constructed subspace is not a point".into()))
}

/// The `2n` points of the standard apartment of `Γ_1`, checked to generate.
pub fn base_k1(g: &Geometry) -> Result<GenSet> {
    if g.k() != 1 {
        return Err(Error::Precondition("base_k1 needs k = 1".into()));
    }
    let v = g.space();
    let members = apartment_points(v);
    let idx: Vec<u32> = members.iter().map(|m| point_of(g, m)).collect::<Result<_>>()?;
    if !closure(g, &idx)?.is_full(g) {
        return Err(Error::Invariant("the apartment does not generate the polar space".into()));
    }
    Ok(GenSet {
        form: v.spec(),
        k: 1,
        tags: vec![Provenance::BaseApartment; members.len()],
        trace: TraceNode { n: v.n(), k: 1, rule: "base-apartment".into(), size: members.len(), children: vec![] },
        members,
        greedy: vec![],
    })
}

fn apartment_points(v: &FormSpace) -> Vec<Subspace> {
    (0..v.dim()).map(|i| Subspace::from_flat(v.field(), v.dim(), unit_vector(v.dim(), i))).collect()
}

/// One greedy pass over `order`. Each step looks at the first `width`
/// points outside the current span whose Plücker vectors are independent
/// of those chosen, and adds the one whose span is largest. Once no such
/// point is left it falls back to the first point outside the span.
fn greedy_pass(g: &Geometry, vectors: &[PluckerVector], order: &[u32], width: usize, cap: usize) -> Vec<u32> {
    let f = g.field();
    let mut st = ClosureState::new(g);
    let mut ech = Echelon::new();
    let mut chosen = Vec::new();
    let mut cursor = 0;
    while !st.is_full() && chosen.len() < cap {
        // points skipped here are in the span or dependent, and stay so
        while cursor < order.len() {
            let p = order[cursor];
            if !st.contains(p) && !ech.contains(f, &vectors[p as usize].coords) {
                break;
            }
            cursor += 1;
        }
        let cands: Vec<u32> = order[cursor..]
            .iter()
            .copied()
            .filter(|&p| !st.contains(p) && !ech.contains(f, &vectors[p as usize].coords))
            .take(width.max(1))
            .collect();
        let pick = if cands.len() == 1 {
            cands[0]
        } else if let Some(&first) = cands.first() {
            let mut best = (0, first);
            for &p in &cands {
                let mut trial = st.clone();
                trial.add_point(p).unwrap();
                if trial.size() > best.0 {
                    best = (trial.size(), p);
                }
            }
            best.1
        } else {
            *order.iter().find(|&&p| !st.contains(p)).unwrap()
        };
        ech.insert(f, &vectors[pick as usize].coords);
        st.add_point(pick).unwrap();
        chosen.push(pick);
    }
    chosen
}

/// Rank-guided greedy generating set of a dual polar space. The first
/// attempt scans points in index order, later ones in seeded random
/// orders; the search stops at the first set of the expected size.
pub fn base_kn_greedy(g: &Geometry, opts: &GreedyOptions) -> Result<(Vec<u32>, GreedyStats)> {
    let v = g.space();
    if g.k() != v.n() {
        return Err(Error::Precondition("greedy base needs k = n".into()));
    }
    let vectors = plucker_vectors(g)?;
    let target = certification_eligible(v, g.k()).then(|| expected_rank(v.kind(), v.n(), g.k()));
    let mut order: Vec<u32> = (0..g.num_points() as u32).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<Vec<u32>> = None;
    let mut attempts = 0;
    for attempt in 0..opts.restarts.max(1) {
        if attempt > 0 {
            order.shuffle(&mut rng);
        }
        attempts += 1;
        let cap = best.as_ref().map_or(usize::MAX, |b| b.len());
        let s = greedy_pass(g, &vectors, &order, opts.lookahead, cap);
        let mut st = ClosureState::new(g);
        st.add_points(&s)?;
        if st.is_full() && best.as_ref().is_none_or(|b| s.len() < b.len()) {
            best = Some(s);
        }
        if let (Some(b), Some(t)) = (&best, target) {
            if b.len() <= t {
                break;
            }
        }
    }
    let best = best.ok_or_else(|| Error::Invariant("greedy search found no generating set".into()))?;
    let stats = GreedyStats { n: v.n(), attempts, best_size: best.len(), target };
    Ok((best, stats))
}

/// `⟨L, P⟩` and `⟨L, Q⟩` for a t.i. `L ⊆ W`.
pub fn hat_lift_k1(v: &FormSpace, l: &Subspace, wc: &WittComplement) -> Result<(Subspace, Subspace)> {
    let f = v.field();
    let lp = l.sum(f, &wc.p)?;
    let lq = l.sum(f, &wc.q)?;
    for x in [&lp, &lq] {
        if x.dim() != l.dim() + 1 || !v.is_totally_isotropic(x) || x.intersect(f, &wc.w)? != *l {
            return Err(Error::Invariant("lift through P or Q is not a t.i. extension of L".into()));
        }
    }
    Ok((lp, lq))
}

/// `M̂ = ⟨M, P + u, Q - v⟩` where `(u, v)` is the first hyperbolic pair of a
/// complement of `M` in `M^⊥ ∩ W`; `M̂ ∩ W = M`.
pub fn hat_lift_k2(v: &FormSpace, m: &Subspace, wc: &WittComplement) -> Result<Subspace> {
    let f = v.field();
    let x = v.perp(m)?.intersect(f, &wc.w)?;
    let comp = m.complement_in(f, &x);
    let n_space = Subspace::from_rows(f, v.dim(), &comp)?;
    if n_space.dim() < 2 {
        return Err(Error::Precondition("M^⊥ ∩ W has no hyperbolic pair outside M".into()));
    }
    let hb = v.hyperbolic_basis(&n_space)?;
    let (u, w) = (&hb[0], &hb[hb.len() / 2]);
    let mut a: Vector = wc.p_vector().to_vec();
    crate::linalg::axpy(f, crate::gf::Elem::ONE, u, &mut a);
    let mut b: Vector = wc.q_vector().to_vec();
    crate::linalg::axpy(f, f.neg(crate::gf::Elem::ONE), w, &mut b);
    let mut rows = m.basis();
    rows.push(a);
    rows.push(b);
    let hat = Subspace::from_rows(f, v.dim(), &rows)?;
    if hat.dim() != m.dim() + 2 || !v.is_totally_isotropic(&hat) || hat.intersect(f, &wc.w)? != *m {
        return Err(Error::Invariant("M̂ is not a t.i. extension meeting W in M".into()));
    }
    Ok(hat)
}

struct Parts {
    members: Vec<Subspace>,
    tags: Vec<Provenance>,
    trace: TraceNode,
    greedy: Vec<GreedyStats>,
}

fn build_rec(v: &FormSpace, k: usize, top: Option<&Geometry>, opts: &GreedyOptions) -> Result<Parts> {
    let n = v.n();
    let f = v.field();
    if k == 0 {
        let z = Subspace::zero(v.dim());
        let trace = TraceNode { n, k, rule: "zero".into(), size: 1, children: vec![] };
        return Ok(Parts { members: vec![z], tags: vec![Provenance::BaseApartment], trace, greedy: vec![] });
    }
    if k == 1 {
        let members = apartment_points(v);
        let trace = TraceNode { n, k, rule: "base-apartment".into(), size: members.len(), children: vec![] };
        return Ok(Parts { tags: vec![Provenance::BaseApartment; members.len()], members, trace, greedy: vec![] });
    }
    if k == n {
        let owned;
        let g = match top {
            Some(g) => g,
            None => {
                owned = enumerate(v, n)?;
                &owned
            }
        };
        let (idx, stats) = base_kn_greedy(g, opts)?;
        let members: Vec<Subspace> = idx.iter().map(|&i| g.point(i).clone()).collect();
        let trace = TraceNode { n, k, rule: "base-dual".into(), size: members.len(), children: vec![] };
        return Ok(Parts { tags: vec![Provenance::BaseDual; members.len()], members, trace, greedy: vec![stats] });
    }
    let wc = v.witt_complement()?;
    let lower = &wc.lower;
    let carried = build_rec(lower, k, None, opts)?;
    let ones = build_rec(lower, k - 1, None, opts)?;
    let twos = build_rec(lower, k - 2, None, opts)?;
    let mut members = Vec::new();
    let mut tags = Vec::new();
    for m in &carried.members {
        members.push(wc.lift(f, m));
        tags.push(Provenance::CarriedFromW);
    }
    for l in &ones.members {
        let (lp, lq) = hat_lift_k1(v, &wc.lift(f, l), &wc)?;
        members.push(lp);
        tags.push(Provenance::HatP);
        members.push(lq);
        tags.push(Provenance::HatQ);
    }
    for m in &twos.members {
        members.push(hat_lift_k2(v, &wc.lift(f, m), &wc)?);
        tags.push(Provenance::HatM);
    }
    let mut seen = HashSet::new();
    for m in &members {
        if !seen.insert(m) {
            return Err(Error::Invariant("the three parts of the generating set overlap".into()));
        }
    }
    // parts are told apart by how much of each member lies in W
    for (m, t) in members.iter().zip(&tags) {
        let meet = m.intersect(f, &wc.w)?.dim();
        let want = match t {
            Provenance::CarriedFromW => k,
            Provenance::HatP | Provenance::HatQ => k - 1,
            _ => k - 2,
        };
        if meet != want {
            return Err(Error::Invariant("a member meets W in the wrong dimension".into()));
        }
    }
    let mut greedy = carried.greedy;
    greedy.extend(ones.greedy);
    greedy.extend(twos.greedy);
    let trace = TraceNode {
        n,
        k,
        rule: "split".into(),
        size: members.len(),
        children: vec![carried.trace, ones.trace, twos.trace],
    };
    Ok(Parts { members, tags, trace, greedy })
}

/// Builds `S_{n,k}` for the geometry `g` (whose points are used directly
/// when the recursion needs the dual polar base at the top level).
pub fn build_genset(g: &Geometry, opts: &GreedyOptions) -> Result<GenSet> {
    let v = g.space();
    let parts = build_rec(v, g.k(), Some(g), opts)?;
    Ok(GenSet {
        form: v.spec(),
        k: g.k(),
        members: parts.members,
        tags: parts.tags,
        trace: parts.trace,
        greedy: parts.greedy,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedMinimal,
    GeneratesButUnverifiedMinimal,
    FailsToGenerate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedMinimal => "certified-minimal",
            Verdict::GeneratesButUnverifiedMinimal => "generates-but-unverified-minimal",
            Verdict::FailsToGenerate => "fails-to-generate",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub geometry: String,
    pub form: FormKind,
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub points: usize,
    pub lines: usize,
    pub set_size: usize,
    /// Dimension of the span of the embedded set (over the fixed subfield
    /// in the Hermitian dual polar case).
    pub set_rank: usize,
    /// Dimension of the embedding, a lower bound for any generating set.
    pub lower_bound: usize,
    /// Subfield dimension of the Baer image (Hermitian dual polar case).
    pub subfield_bound: Option<usize>,
    pub expected_rank: usize,
    pub closure_size: usize,
    pub closure_full: bool,
    pub eligible: bool,
    pub verdict: Verdict,
    /// Known lower bound for the Hermitian dual polar space over GF(4).
    pub gf4_bound: Option<u64>,
    pub note: Option<String>,
}

/// Runs closure and the embedding rank for the point indices `set`.
pub fn certify(g: &Geometry, set: &[u32]) -> Result<RankCertificate> {
    let v = g.space();
    let (k, n) = (g.k(), v.n());
    let (cl, dims) = rayon::join(|| closure(g, set), || embedding_dimension(g));
    let (cl, dims) = (cl?, dims?);
    let mut uniq = set.to_vec();
    uniq.sort_unstable();
    uniq.dedup();
    if uniq.last().is_some_and(|&p| p as usize >= g.num_points()) {
        return Err(Error::InvalidArgument("point index out of range".into()));
    }
    let sd = subset_dimension(g, &uniq)?;
    let set_rank = sd.subfield_rank.unwrap_or(sd.rank);
    let eligible = certification_eligible(v, k);
    let full = cl.is_full(g);
    let verdict = if !full {
        Verdict::FailsToGenerate
    } else if eligible && uniq.len() == dims.rank {
        Verdict::CertifiedMinimal
    } else {
        Verdict::GeneratesButUnverifiedMinimal
    };
    let gf4_dual = v.kind() == FormKind::Hermitian && v.field().order() == 4 && k == n;
    let note = (!eligible).then(|| match v.kind() {
        FormKind::Hermitian => {
            "exploratory: Hermitian over GF(4) with k >= 2 is outside the certified range".to_string()
        }
        FormKind::Symplectic => {
            "exploratory: symplectic in characteristic 2 is outside the certified range".to_string()
        }
    });
    Ok(RankCertificate {
        geometry: g.label(),
        form: v.kind(),
        q: v.q(),
        n,
        k,
        points: g.num_points(),
        lines: g.num_lines(),
        set_size: uniq.len(),
        set_rank,
        lower_bound: dims.rank,
        subfield_bound: dims.subfield_rank,
        expected_rank: expected_rank(v.kind(), n, k),
        closure_size: cl.size(),
        closure_full: full,
        eligible,
        verdict,
        gf4_bound: gf4_dual.then(|| gf4_bound(n)),
        note,
    })
}
