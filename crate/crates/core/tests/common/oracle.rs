//! Exhaustive-search reference model: subspaces are explicit sets of
//! vectors, forms are evaluated from their coordinate formulas and ranks
//! come from Leibniz-expanded minors.

use std::collections::HashSet;

use itertools::Itertools;
use polargen::{Elem, Field, FormKind, FormSpace, Subspace};

pub struct Oracle<'a> {
    pub f: &'a Field,
    pub kind: FormKind,
    pub n: usize,
    q: u32,
    root: u32,
}

impl<'a> Oracle<'a> {
    pub fn new(space: &'a FormSpace) -> Oracle<'a> {
        let f = space.field();
        let q = f.order();
        let root = match space.kind() {
            FormKind::Symplectic => q,
            FormKind::Hermitian => (1..q).find(|r| r * r == q).unwrap(),
        };
        Oracle { f, kind: space.kind(), n: space.n(), q, root }
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn encode(&self, v: &[Elem]) -> u32 {
        v.iter().rev().fold(0, |acc, x| acc * self.q + x.0 as u32)
    }

    pub fn decode(&self, mut c: u32) -> Vec<Elem> {
        (0..self.dim())
            .map(|_| {
                let x = Elem((c % self.q) as u16);
                c /= self.q;
                x
            })
            .collect()
    }

    pub fn all_vectors(&self) -> Vec<Vec<Elem>> {
        (0..self.q.pow(self.dim() as u32)).map(|c| self.decode(c)).collect()
    }

    fn conj(&self, x: Elem) -> Elem {
        if self.kind == FormKind::Symplectic {
            return x;
        }
        (1..self.root).fold(x, |acc, _| self.f.mul(acc, x))
    }

    pub fn form(&self, x: &[Elem], y: &[Elem]) -> Elem {
        let f = self.f;
        let n = self.n;
        let mut acc = Elem::ZERO;
        for i in 0..n {
            let a = f.mul(x[i], self.conj(y[i + n]));
            let b = f.mul(x[i + n], self.conj(y[i]));
            acc = match self.kind {
                FormKind::Symplectic => f.add(acc, f.sub(a, b)),
                FormKind::Hermitian => f.add(acc, f.add(a, b)),
            };
        }
        acc
    }

    /// Every linear combination of `gens`, as sorted codes.
    pub fn span(&self, gens: &[Vec<Elem>]) -> Vec<u32> {
        let f = self.f;
        let mut set: Vec<Vec<Elem>> = vec![vec![Elem::ZERO; self.dim()]];
        for g in gens {
            let mut next = Vec::new();
            for s in &set {
                for a in f.elements() {
                    next.push(s.iter().zip(g).map(|(&x, &y)| f.add(x, f.mul(a, y))).collect::<Vec<_>>());
                }
            }
            set = next;
        }
        let mut codes: Vec<u32> = set.iter().map(|v| self.encode(v)).collect();
        codes.sort_unstable();
        codes.dedup();
        codes
    }

    pub fn span_of(&self, s: &Subspace) -> Vec<u32> {
        self.span(&s.basis())
    }

    pub fn is_ti(&self, set: &[u32]) -> bool {
        let vs: Vec<Vec<Elem>> = set.iter().map(|&c| self.decode(c)).collect();
        vs.iter().all(|x| vs.iter().all(|y| self.form(x, y).is_zero()))
    }

    fn log_q(&self, size: usize) -> usize {
        let mut d = 0;
        let mut s = 1;
        while s < size {
            s *= self.q as usize;
            d += 1;
        }
        d
    }

    /// All t.i. `k`-spaces for `k` in {1, 2}, found from isotropic vectors.
    pub fn ti_spaces(&self, k: usize) -> HashSet<Vec<u32>> {
        let vs = self.all_vectors();
        let iso: Vec<&Vec<Elem>> =
            vs.iter().filter(|v| v.iter().any(|x| !x.is_zero()) && self.form(v, v).is_zero()).collect();
        let mut out = HashSet::new();
        match k {
            1 => {
                for v in &iso {
                    out.insert(self.span(&[v.to_vec()]));
                }
            }
            2 => {
                for x in &iso {
                    for y in &iso {
                        if !self.form(x, y).is_zero() {
                            continue;
                        }
                        let s = self.span(&[x.to_vec(), y.to_vec()]);
                        if s.len() == (self.q * self.q) as usize {
                            out.insert(s);
                        }
                    }
                }
            }
            _ => panic!("oracle handles k = 1, 2"),
        }
        out
    }

    fn det(&self, m: &[Vec<Elem>]) -> Elem {
        let f = self.f;
        let r = m.len();
        let mut acc = Elem::ZERO;
        for perm in (0..r).permutations(r) {
            let inversions =
                (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
            let term = (0..r).fold(Elem::ONE, |a, i| f.mul(a, m[i][perm[i]]));
            acc = if inversions % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) };
        }
        acc
    }

    fn rank_by_minors(&self, m: &[Vec<Elem>]) -> usize {
        let d = m.len();
        for r in (1..=d).rev() {
            for rows in (0..d).combinations(r) {
                for cols in (0..d).combinations(r) {
                    let sub: Vec<Vec<Elem>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
                    if !self.det(&sub).is_zero() {
                        return r;
                    }
                }
            }
        }
        0
    }

    /// Relation code of two t.i. 2-spaces given as vector sets.
    pub fn relation(&self, x: &[u32], y: &[u32]) -> &'static str {
        let f = self.f;
        let mut sum: Vec<u32> = x
            .iter()
            .flat_map(|&a| {
                let a = self.decode(a);
                y.iter().map(move |&b| {
                    let b = self.decode(b);
                    a.iter().zip(&b).map(|(&s, &t)| f.add(s, t)).collect::<Vec<_>>()
                })
            })
            .map(|v| self.encode(&v))
            .collect();
        sum.sort_unstable();
        sum.dedup();
        let d = self.log_q(sum.len());
        let mut basis: Vec<Vec<Elem>> = Vec::new();
        let mut spanned: HashSet<u32> = [0].into_iter().collect();
        for &c in &sum {
            if !spanned.contains(&c) {
                basis.push(self.decode(c));
                spanned = self.span(&basis).into_iter().collect();
            }
        }
        assert_eq!(basis.len(), d);
        let gram: Vec<Vec<Elem>> = basis.iter().map(|a| basis.iter().map(|b| self.form(a, b)).collect()).collect();
        let r = d - self.rank_by_minors(&gram);
        match (d, r) {
            (2, _) => "0",
            (3, 3) => "1",
            (3, 1) => "2q",
            (4, 4) => "2p",
            (4, 2) => "2s",
            (4, 0) => "3",
            other => panic!("impossible pair {other:?}"),
        }
    }
}
