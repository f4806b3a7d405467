//! Depth-first search for large configurations at small q.
//!
//! Groups are added in canonical order (strictly increasing smallest point
//! index), so every configuration is visited once up to reordering of its
//! groups. No other symmetry is quotiented out. Budgets count search nodes
//! (one node per tentatively placed point or line).

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{d6r3_basic_bound, d6r3_johnson_bound, d7r2_equivalence_bound, Family};
use crate::constructions::{verify_config_d6r3, verify_config_d7r2, ConstructionError, D6R3Config, D7R2Config};
use crate::galois::Field;
use crate::linalg::det3;
use crate::projgeom::{GeomError, ProjSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("search produced an invalid certificate: {0}")]
    Certificate(#[from] ConstructionError),
}

/// A certificate from either family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Config {
    D6R3(D6R3Config),
    D7R2(D7R2Config),
}

impl Config {
    pub fn family(&self) -> Family {
        match self {
            Config::D6R3(_) => Family::D6R3,
            Config::D7R2(_) => Family::D7R2,
        }
    }

    pub fn ell(&self) -> usize {
        match self {
            Config::D6R3(c) => c.ell(),
            Config::D7R2(c) => c.ell(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SearchSummary {
    pub family: Family,
    pub q: u32,
    pub best_ell: usize,
    pub exhausted: bool,
    pub nodes: u64,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub family: Family,
    pub q: u32,
    pub best_ell: usize,
    pub certificate: Config,
    /// True iff the canonical tree was fully traversed, or the best found
    /// configuration already meets the closed-form upper bound.
    pub exhausted: bool,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl SearchResult {
    pub fn summary(&self) -> SearchSummary {
        SearchSummary {
            family: self.family,
            q: self.q,
            best_ell: self.best_ell,
            exhausted: self.exhausted,
            nodes: self.nodes,
        }
    }
}

/// Equality ignores wall-clock time.
impl PartialEq for SearchResult {
    fn eq(&self, other: &Self) -> bool {
        self.summary() == other.summary() && self.certificate == other.certificate
    }
}

/// Largest ℓ allowed by the closed-form bounds.
pub fn ell_upper_bound(family: Family, q: u64) -> usize {
    match family {
        Family::D6R3 => (d6r3_basic_bound(q).min(d6r3_johnson_bound(q)) / 4) as usize,
        Family::D7R2 => (d7r2_equivalence_bound(q) / 3) as usize,
    }
}

struct D6R3Search<'a> {
    plane: &'a ProjSpace,
    target: usize,
    budget: u64,
    nodes: u64,
    out_of_budget: bool,
    groups: Vec<[usize; 4]>,
    current: Vec<usize>,
    used: Vec<bool>,
    // points on a line through two points of one closed group
    blocked: Vec<u32>,
    best: Vec<[usize; 4]>,
}

impl D6R3Search<'_> {
    fn coords(&self, i: usize) -> &[u32] {
        self.plane.point(i).coords()
    }

    fn collinear(&self, a: usize, b: usize, c: usize) -> bool {
        det3(self.plane.field(), self.coords(a), self.coords(b), self.coords(c)) == 0
    }

    fn admissible(&self, x: usize) -> bool {
        if self.used[x] || self.blocked[x] > 0 {
            return false;
        }
        for (i, &a) in self.current.iter().enumerate() {
            if self.current[i + 1..].iter().any(|&b| self.collinear(a, b, x)) {
                return false;
            }
            if self.groups.iter().flatten().any(|&b| self.collinear(a, b, x)) {
                return false;
            }
        }
        true
    }

    fn mark_group(&mut self, g: &[usize; 4], delta: i32) {
        for i in 0..4 {
            for j in i + 1..4 {
                let l = self.plane.line_through(self.plane.point(g[i]), self.plane.point(g[j])).expect("distinct");
                for p in self.plane.line_point_indices(&l) {
                    self.blocked[p] = (self.blocked[p] as i32 + delta) as u32;
                }
            }
        }
    }

    /// Returns true when the search should stop (target reached or budget spent).
    fn dfs(&mut self) -> bool {
        if self.current.len() == 4 {
            let g = [self.current[0], self.current[1], self.current[2], self.current[3]];
            self.groups.push(g);
            self.mark_group(&g, 1);
            let saved = std::mem::take(&mut self.current);
            if self.groups.len() > self.best.len() {
                self.best = self.groups.clone();
            }
            let stop = self.best.len() >= self.target || self.dfs();
            self.current = saved;
            self.mark_group(&g, -1);
            self.groups.pop();
            return stop;
        }
        let start = match (self.current.last(), self.groups.last()) {
            (Some(&p), _) => p + 1,
            (None, Some(g)) => g[0] + 1,
            (None, None) => 0,
        };
        let n = self.plane.num_points();
        // not enough points left above `start` to finish this group
        let needed = 4 - self.current.len();
        for x in start..n.saturating_sub(needed - 1) {
            if !self.admissible(x) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                self.out_of_budget = true;
                return true;
            }
            self.used[x] = true;
            self.current.push(x);
            let stop = self.dfs();
            self.current.pop();
            self.used[x] = false;
            if stop {
                return true;
            }
        }
        false
    }
}

fn d6r3_config(plane: &ProjSpace, groups: &[[usize; 4]]) -> D6R3Config {
    D6R3Config::new(plane.field(), groups.iter().map(|g| g.map(|i| plane.point(i).clone())).collect())
}

/// First (6, 3) configuration with `target` groups in canonical DFS order,
/// or `None` if the tree is exhausted or the node budget runs out first.
pub fn find_d6r3(plane: &ProjSpace, target: usize, budget: u64) -> Option<D6R3Config> {
    let (best, _, _) = run_d6r3(plane, target, budget);
    (best.len() >= target).then(|| d6r3_config(plane, &best))
}

fn run_d6r3(plane: &ProjSpace, target: usize, budget: u64) -> (Vec<[usize; 4]>, u64, bool) {
    let n = plane.num_points();
    let mut s = D6R3Search {
        plane,
        target,
        budget,
        nodes: 0,
        out_of_budget: false,
        groups: Vec::new(),
        current: Vec::new(),
        used: vec![false; n],
        blocked: vec![0; n],
        best: Vec::new(),
    };
    s.dfs();
    (s.best, s.nodes, s.out_of_budget)
}

struct D7R2Search {
    lines: Vec<Vec<usize>>,
    line_of: Vec<u32>,
    npts: usize,
    target: usize,
    budget: u64,
    nodes: u64,
    out_of_budget: bool,
    chosen: Vec<(usize, [usize; 3])>,
    occupied: Vec<bool>,
    forbidden: Vec<u32>,
    best: Vec<(usize, [usize; 3])>,
}

impl D7R2Search {
    fn cross(&mut self, marks: &[usize; 3], delta: i32) {
        for k in 0..self.chosen.len() {
            let old = self.chosen[k].1;
            for &p in marks {
                for &o in &old {
                    let l = self.line_of[p * self.npts + o] as usize;
                    for &x in &self.lines[l] {
                        self.forbidden[x] = (self.forbidden[x] as i32 + delta) as u32;
                    }
                }
            }
        }
    }

    fn dfs(&mut self, from: usize) -> bool {
        for li in from..self.lines.len() {
            if self.lines[li].iter().any(|&p| self.occupied[p]) {
                continue;
            }
            let free: Vec<usize> = self.lines[li].iter().copied().filter(|&p| self.forbidden[p] == 0).take(3).collect();
            if free.len() < 3 {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                self.out_of_budget = true;
                return true;
            }
            let marks = [free[0], free[1], free[2]];
            self.cross(&marks, 1);
            self.chosen.push((li, marks));
            for &p in &self.lines[li] {
                self.occupied[p] = true;
            }
            if self.chosen.len() > self.best.len() {
                self.best = self.chosen.clone();
            }
            let stop = self.best.len() >= self.target || self.dfs(li + 1);
            for &p in &self.lines[li] {
                self.occupied[p] = false;
            }
            self.chosen.pop();
            self.cross(&marks, -1);
            if stop {
                return true;
            }
        }
        false
    }
}

/// Exhaustive canonical-order search for the largest configuration.
pub fn exhaustive_max(family: Family, field: &Field, budget: u64) -> Result<SearchResult, SearchError> {
    let started = Instant::now();
    let q = field.order();
    let bound = ell_upper_bound(family, q as u64);
    let (certificate, nodes, out_of_budget) = match family {
        Family::D6R3 => {
            let plane = ProjSpace::new(field, 2)?;
            let (best, nodes, oob) = run_d6r3(&plane, bound, budget);
            let cfg = d6r3_config(&plane, &best);
            verify_config_d6r3(&cfg).map_err(ConstructionError::InvalidD6R3)?;
            (Config::D6R3(cfg), nodes, oob)
        }
        Family::D7R2 => {
            let space = ProjSpace::new(field, 3)?;
            let npts = space.num_points();
            let lines: Vec<Vec<usize>> = space.lines().iter().map(|l| space.line_point_indices(l)).collect();
            let mut line_of = vec![u32::MAX; npts * npts];
            for (i, pts) in lines.iter().enumerate() {
                for &a in pts {
                    for &b in pts {
                        line_of[a * npts + b] = i as u32;
                    }
                }
            }
            let mut s = D7R2Search {
                lines,
                line_of,
                npts,
                target: bound,
                budget,
                nodes: 0,
                out_of_budget: false,
                chosen: Vec::new(),
                occupied: vec![false; npts],
                forbidden: vec![0; npts],
                best: Vec::new(),
            };
            s.dfs(0);
            let all_lines = space.lines();
            let cfg = D7R2Config::new(
                field,
                s.best.iter().map(|(l, _)| all_lines[*l].clone()).collect(),
                s.best.iter().map(|(_, m)| m.map(|i| space.point(i).clone())).collect(),
            );
            verify_config_d7r2(&cfg, u64::MAX)?;
            (Config::D7R2(cfg), s.nodes, s.out_of_budget)
        }
    };
    let best_ell = certificate.ell();
    Ok(SearchResult {
        family,
        q,
        best_ell,
        certificate,
        exhausted: !out_of_budget || best_ell >= bound,
        nodes,
        elapsed: started.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d6r3_q2_single_frame() {
        let f = Field::with_order(2).unwrap();
        let r = exhaustive_max(Family::D6R3, &f, 1_000_000).unwrap();
        assert_eq!(r.best_ell, 1);
        assert!(r.exhausted);
    }

    #[test]
    fn d7r2_q2_within_bound() {
        let f = Field::with_order(2).unwrap();
        let r = exhaustive_max(Family::D7R2, &f, 10_000_000).unwrap();
        assert!(r.exhausted);
        assert!(r.best_ell >= 2 && r.best_ell <= 3);
        assert_eq!(r, exhaustive_max(Family::D7R2, &f, 10_000_000).unwrap());
    }

    #[test]
    fn budget_exhaustion_keeps_partial_result() {
        let f = Field::with_order(4).unwrap();
        let r = exhaustive_max(Family::D7R2, &f, 3).unwrap();
        assert!(!r.exhausted);
        assert!(r.best_ell >= 1);
    }

    #[test]
    fn find_target_in_pg2_8() {
        let plane = ProjSpace::new(&Field::with_order(8).unwrap(), 2).unwrap();
        let cfg = find_d6r3(&plane, 3, 1_000_000).unwrap();
        assert!(cfg.verify().is_ok());
    }
}
