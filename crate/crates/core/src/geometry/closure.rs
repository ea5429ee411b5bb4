//! Span closure: the smallest subspace containing a point set.

use serde::{Deserialize, Serialize};

use super::Geometry;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub seed: Vec<u32>,
    /// Sorted indices of the closed set.
    pub closed: Vec<u32>,
    /// Number of absorption waves after the seed.
    pub rounds: usize,
    pub lines_triggered: usize,
}

impl ClosureReport {
    pub fn size(&self) -> usize {
        self.closed.len()
    }

    pub fn is_full(&self, g: &Geometry) -> bool {
        self.closed.len() == g.num_points()
    }
}

/// Incremental closure: points can be added one at a time and the set is
/// kept closed. Each line keeps a count of its points in the set and is
/// absorbed when the count reaches two.
#[derive(Clone, Debug)]
pub struct ClosureState<'a> {
    g: &'a Geometry,
    member: Vec<bool>,
    count: Vec<u16>,
    size: usize,
    rounds: usize,
    lines_triggered: usize,
    frontier: Vec<u32>,
}

impl<'a> ClosureState<'a> {
    pub fn new(g: &'a Geometry) -> ClosureState<'a> {
        ClosureState {
            g,
            member: vec![false; g.num_points()],
            count: vec![0; g.num_lines()],
            size: 0,
            rounds: 0,
            lines_triggered: 0,
            frontier: Vec::new(),
        }
    }

    pub fn contains(&self, p: u32) -> bool {
        self.member[p as usize]
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_full(&self) -> bool {
        self.size == self.g.num_points()
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn lines_triggered(&self) -> usize {
        self.lines_triggered
    }

    fn mark(&mut self, p: u32) -> bool {
        let m = &mut self.member[p as usize];
        if *m {
            return false;
        }
        *m = true;
        self.size += 1;
        self.frontier.push(p);
        true
    }

    /// Adds the points without propagating.
    fn seed(&mut self, pts: &[u32]) -> Result<()> {
        for &p in pts {
            if p as usize >= self.g.num_points() {
                return Err(Error::InvalidArgument(format!("point index {p} out of range")));
            }
            self.mark(p);
        }
        Ok(())
    }

    fn propagate(&mut self) {
        let g = self.g;
        let mut wave = 0;
        while !self.frontier.is_empty() {
            let current = std::mem::take(&mut self.frontier);
            for p in current {
                for &l in g.lines_on(p) {
                    let c = &mut self.count[l as usize];
                    *c += 1;
                    if *c == 2 {
                        self.lines_triggered += 1;
                        for &x in g.line(l) {
                            self.mark(x);
                        }
                    }
                }
            }
            if !self.frontier.is_empty() {
                wave += 1;
            }
        }
        self.rounds += wave;
    }

    /// Adds `p` and closes; returns whether `p` was new.
    pub fn add_point(&mut self, p: u32) -> Result<bool> {
        if p as usize >= self.g.num_points() {
            return Err(Error::InvalidArgument(format!("point index {p} out of range")));
        }
        let fresh = self.mark(p);
        self.propagate();
        Ok(fresh)
    }

    pub fn add_points(&mut self, pts: &[u32]) -> Result<()> {
        self.seed(pts)?;
        self.propagate();
        Ok(())
    }

    pub fn members(&self) -> Vec<u32> {
        (0..self.g.num_points() as u32).filter(|&p| self.member[p as usize]).collect()
    }

    pub fn membership(&self) -> &[bool] {
        &self.member
    }
}

pub fn closure(g: &Geometry, seed: &[u32]) -> Result<ClosureReport> {
    let mut st = ClosureState::new(g);
    st.add_points(seed)?;
    let mut s = seed.to_vec();
    s.sort_unstable();
    s.dedup();
    Ok(ClosureReport { seed: s, closed: st.members(), rounds: st.rounds(), lines_triggered: st.lines_triggered() })
}
