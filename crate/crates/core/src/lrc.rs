//! Locally repairable codes with disjoint repair groups, given by a
//! parity-check matrix whose first ℓ rows are the repair-group indicators.
//!
//! Minimum distance is established on the parity-check side: `d ≥ δ` iff every
//! `δ-1` columns of H are independent. Column subsets are enumerated in
//! colexicographic order with prefix pruning, so a failure certificate is
//! always the colex-smallest dependent subset.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::galois::Field;
use crate::linalg::{det3, EchelonBasis, LinalgError, Matrix, Solution};

/// Default cap on the number of column subsets a distance check may visit.
pub const DEFAULT_SUBSET_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LrcError {
    #[error("no repair groups given")]
    EmptyGroups,
    #[error("group {group}: vector of length {found}, expected {expected}")]
    VectorLength { group: usize, expected: usize, found: usize },
    #[error("group {group}: lower-part vectors are linearly dependent")]
    DependentGroup { group: usize },
    #[error("malformed repair groups: {0}")]
    MalformedGroups(String),
    #[error("repair group {group} has {size} members, locality {r} needs {}", r + 1)]
    LocalityMismatch { group: usize, size: usize, r: usize },
    #[error("row {group} of H is not the indicator of repair group {group}")]
    IndicatorRow { group: usize },
    #[error("{subsets} column subsets exceed the budget of {budget}")]
    BudgetExceeded { subsets: u128, budget: u64 },
    #[error("(r+1) = {} does not divide n = {n}", r + 1)]
    Divisibility { n: usize, r: usize },
    #[error("message has length {found}, code dimension is {expected}")]
    MessageLength { expected: usize, found: usize },
    #[error("word has length {found}, code length is {expected}")]
    WordLength { expected: usize, found: usize },
    #[error("position {pos} is not erased")]
    NotErased { pos: usize },
    #[error("position {pos} cannot be repaired locally: position {other} of its group is also erased")]
    UnrepairableLocally { pos: usize, other: usize },
    #[error("erased columns {0:?} of H are dependent")]
    Undecodable(Vec<usize>),
    #[error("the surviving symbols are not consistent with any codeword")]
    InconsistentWord,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Outcome of a `d ≥ δ` check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DistanceVerdict {
    /// Every (δ-1)-subset of columns is independent.
    AtLeast { delta: usize, subsets_checked: u64 },
    /// Colex-smallest dependent (δ-1)-subset.
    Dependent { witness: Vec<usize> },
}

/// Exact minimum distance with its witness (a dependent column set of that size).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceCertificate {
    /// `None` when the code is {0} (all columns independent).
    pub d: Option<usize>,
    pub witness: Vec<usize>,
    pub subsets_checked: u64,
}

/// Singleton-type verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Optimality {
    Optimal,
    NotOptimal,
    /// d-2 ≡ r (mod r+1), so the bound cannot be met with equality, and the
    /// balance equation that replaces it fails too.
    ExcludedByRemark,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingletonReport {
    pub verdict: Optimality,
    /// n - k - ⌈k/r⌉ + 2
    pub singleton_rhs: i64,
    /// n - k = ℓ + d - 2 - ⌊(d-2)/(r+1)⌋
    pub balance_holds: bool,
    /// d - 2 ≡ r (mod r+1): equality in the bound is impossible and the
    /// balance equation takes its place.
    pub remark_case: bool,
}

/// Verdict against `d ≤ n - k - ⌈k/r⌉ + 2`.
///
/// Outside the remark case the code is optimal iff the bound is met. In the
/// remark case (d-2 ≡ r mod r+1) equality is arithmetically impossible and the
/// balance equation is the operative bound: optimal iff it holds.
pub fn check_singleton_optimal(n: usize, k: usize, d: usize, r: usize) -> Result<SingletonReport, LrcError> {
    if r == 0 || n % (r + 1) != 0 {
        return Err(LrcError::Divisibility { n, r });
    }
    let (n, k, d, r) = (n as i64, k as i64, d as i64, r as i64);
    let ell = n / (r + 1);
    let rhs = n - k - (k + r - 1) / r + 2;
    let balance = d >= 2 && n - k == ell + d - 2 - (d - 2) / (r + 1);
    let remark_case = d >= 2 && (d - 2) % (r + 1) == r;
    let verdict = if remark_case {
        if balance {
            Optimality::Optimal
        } else {
            Optimality::ExcludedByRemark
        }
    } else if d == rhs {
        Optimality::Optimal
    } else {
        Optimality::NotOptimal
    };
    Ok(SingletonReport { verdict, singleton_rhs: rhs, balance_holds: balance, remark_case })
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

struct SubsetSearch<'a> {
    cols: Vec<Vec<u32>>,
    basis: EchelonBasis,
    chosen: Vec<usize>,
    visited: u64,
    limit: u64,
    _h: &'a Matrix,
}

impl SubsetSearch<'_> {
    /// Chooses `remaining` more columns below `upper`, largest first.
    fn run(&mut self, remaining: usize, upper: usize) -> Option<Vec<usize>> {
        if remaining == 0 {
            return None;
        }
        for c in remaining - 1..upper {
            self.visited += 1;
            if self.visited > self.limit {
                return None;
            }
            if !self.basis.push(&self.cols[c]) {
                let mut witness: Vec<usize> = (0..remaining - 1).collect();
                witness.push(c);
                witness.extend(self.chosen.iter().rev());
                return Some(witness);
            }
            self.chosen.push(c);
            let found = self.run(remaining - 1, c);
            self.chosen.pop();
            self.basis.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

fn search_level(h: &Matrix, t: usize, limit: u64) -> (Option<Vec<usize>>, u64) {
    let n = h.cols();
    let mut s = SubsetSearch {
        cols: (0..n).map(|c| h.column(c)).collect(),
        basis: EchelonBasis::new(h.field(), h.rows()),
        chosen: Vec::new(),
        visited: 0,
        limit,
        _h: h,
    };
    let found = s.run(t, n);
    (found, s.visited)
}

/// Colex-smallest dependent `t`-subset of the columns of `h`, if any.
/// Returns the witness (ascending) and the number of search nodes visited.
/// Refuses up front when C(n, t) exceeds the budget.
pub fn first_dependent_subset(h: &Matrix, t: usize, budget: u64) -> Result<(Option<Vec<usize>>, u64), LrcError> {
    let n = h.cols();
    if t > n {
        return Ok((None, 0));
    }
    let subsets = binomial(n, t);
    if subsets > budget as u128 {
        return Err(LrcError::BudgetExceeded { subsets, budget });
    }
    Ok(search_level(h, t, u64::MAX))
}

/// `d ≥ δ` iff every (δ-1)-subset of columns of H is independent.
pub fn verify_distance_at_least(h: &Matrix, delta: usize, budget: u64) -> Result<DistanceVerdict, LrcError> {
    if delta <= 1 {
        return Ok(DistanceVerdict::AtLeast { delta, subsets_checked: 0 });
    }
    let (found, visited) = first_dependent_subset(h, delta - 1, budget)?;
    Ok(match found {
        Some(witness) => DistanceVerdict::Dependent { witness },
        None => DistanceVerdict::AtLeast { delta, subsets_checked: visited },
    })
}

/// Smallest `t` such that some `t` columns of H are dependent.
///
/// Levels t = 1, 2, … are searched in turn; `budget` caps the total number of
/// search nodes over all levels, so the last level (which stops at its first
/// dependent subset) is not charged for subsets it never visits.
pub fn min_distance_exact(h: &Matrix, budget: u64) -> Result<DistanceCertificate, LrcError> {
    let mut total = 0;
    let rank = h.rank();
    for t in 1..=(rank + 1).min(h.cols()) {
        let (found, visited) = search_level(h, t, budget - total);
        total += visited;
        if total > budget {
            return Err(LrcError::BudgetExceeded { subsets: total as u128, budget });
        }
        if let Some(witness) = found {
            return Ok(DistanceCertificate { d: Some(t), witness, subsets_checked: total });
        }
    }
    Ok(DistanceCertificate { d: None, witness: Vec::new(), subsets_checked: total })
}

/// Checks that `groups` partition the columns, every group has `r+1`
/// members, and row `i` of H is the indicator of `groups[i]`. Returns `r`.
pub fn verify_locality(h: &Matrix, groups: &[Vec<usize>], r: usize) -> Result<usize, LrcError> {
    let n = h.cols();
    if groups.is_empty() {
        return Err(LrcError::EmptyGroups);
    }
    if groups.len() > h.rows() {
        return Err(LrcError::MalformedGroups(format!("{} groups but H has {} rows", groups.len(), h.rows())));
    }
    let mut owner = vec![None; n];
    for (g, members) in groups.iter().enumerate() {
        for &c in members {
            if c >= n {
                return Err(LrcError::MalformedGroups(format!("column {c} out of range")));
            }
            if let Some(prev) = owner[c] {
                return Err(LrcError::MalformedGroups(format!("column {c} in groups {prev} and {g}")));
            }
            owner[c] = Some(g);
        }
    }
    if let Some(c) = owner.iter().position(Option::is_none) {
        return Err(LrcError::MalformedGroups(format!("column {c} is in no group")));
    }
    for (g, members) in groups.iter().enumerate() {
        if members.len() != r + 1 {
            return Err(LrcError::LocalityMismatch { group: g, size: members.len(), r });
        }
        let ok = (0..n).all(|c| h.get(g, c) == u32::from(owner[c] == Some(g)));
        if !ok {
            return Err(LrcError::IndicatorRow { group: g });
        }
    }
    Ok(r)
}

/// Result of a local repair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repair {
    pub value: u32,
    pub reads: Vec<usize>,
}

/// A linear code with disjoint repair groups and the parity-check layout
/// `[locality rows; lower rows]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LrcCode {
    field: Field,
    n: usize,
    k: usize,
    r: usize,
    h: Matrix,
    groups: Vec<Vec<usize>>,
    generator: Matrix,
    verified_d: Option<DistanceCertificate>,
}

impl LrcCode {
    /// Validates the locality structure and computes `k = n - rank(H)`.
    pub fn from_parts(h: Matrix, groups: Vec<Vec<usize>>, r: usize) -> Result<LrcCode, LrcError> {
        verify_locality(&h, &groups, r)?;
        let generator = h.kernel_basis();
        Ok(LrcCode {
            field: h.field().clone(),
            n: h.cols(),
            k: generator.rows(),
            r,
            h,
            groups,
            generator,
            verified_d: None,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn r(&self) -> usize {
        self.r
    }
    /// Number of repair groups ℓ.
    pub fn ell(&self) -> usize {
        self.groups.len()
    }
    /// Number of lower rows u = n - k - ℓ (for full-rank H).
    pub fn u(&self) -> usize {
        self.h.rows() - self.groups.len()
    }
    pub fn parity_check(&self) -> &Matrix {
        &self.h
    }
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }
    pub fn repair_groups(&self) -> &[Vec<usize>] {
        &self.groups
    }
    pub fn verified_d(&self) -> Option<&DistanceCertificate> {
        self.verified_d.as_ref()
    }

    /// Lower-part column (rows ℓ..) of column `c`.
    pub fn lower_column(&self, c: usize) -> Vec<u32> {
        (self.groups.len()..self.h.rows()).map(|r| self.h.get(r, c)).collect()
    }

    /// Computes the exact distance and records it.
    pub fn verify_min_distance(&mut self, budget: u64) -> Result<&DistanceCertificate, LrcError> {
        let cert = min_distance_exact(&self.h, budget)?;
        Ok(self.verified_d.insert(cert))
    }

    pub fn singleton_report(&self) -> Option<SingletonReport> {
        let d = self.verified_d.as_ref()?.d?;
        check_singleton_optimal(self.n, self.k, d, self.r).ok()
    }

    pub fn group_of(&self, pos: usize) -> Option<usize> {
        self.groups.iter().position(|g| g.contains(&pos))
    }

    /// `message · G` with G the kernel basis of H.
    pub fn encode(&self, message: &[u32]) -> Result<Vec<u32>, LrcError> {
        if message.len() != self.k {
            return Err(LrcError::MessageLength { expected: self.k, found: message.len() });
        }
        if self.k == 0 {
            return Ok(vec![0; self.n]);
        }
        Ok(self.generator.vec_mul(message)?)
    }

    pub fn is_codeword(&self, word: &[u32]) -> bool {
        word.len() == self.n && self.h.mul_vec(word).map(|s| s.iter().all(|&x| x == 0)).unwrap_or(false)
    }

    /// Restores `word[pos]` from the other r members of its group.
    pub fn local_repair(&self, word: &[Option<u32>], pos: usize) -> Result<Repair, LrcError> {
        if word.len() != self.n {
            return Err(LrcError::WordLength { expected: self.n, found: word.len() });
        }
        if word[pos].is_some() {
            return Err(LrcError::NotErased { pos });
        }
        let g = self.group_of(pos).ok_or_else(|| LrcError::MalformedGroups(format!("{pos} in no group")))?;
        let f = &self.field;
        let mut acc = 0;
        let mut reads = Vec::with_capacity(self.r);
        for &c in &self.groups[g] {
            if c == pos {
                continue;
            }
            let v = word[c].ok_or(LrcError::UnrepairableLocally { pos, other: c })?;
            reads.push(c);
            acc = f.add(acc, v);
        }
        Ok(Repair { value: f.neg(acc), reads })
    }

    /// Solves `H_E·x_E = -H_{E^c}·x_{E^c}` for the erased positions E.
    pub fn erasure_decode(&self, word: &[Option<u32>]) -> Result<Vec<u32>, LrcError> {
        if word.len() != self.n {
            return Err(LrcError::WordLength { expected: self.n, found: word.len() });
        }
        let f = &self.field;
        let erased: Vec<usize> = (0..self.n).filter(|&i| word[i].is_none()).collect();
        let mut out: Vec<u32> = word.iter().map(|x| x.unwrap_or(0)).collect();
        if erased.is_empty() {
            return if self.is_codeword(&out) { Ok(out) } else { Err(LrcError::InconsistentWord) };
        }
        let he = self.h.select_columns(&erased)?;
        if he.rank() < erased.len() {
            return Err(LrcError::Undecodable(erased));
        }
        let rhs: Vec<u32> = self.h.mul_vec(&out)?.into_iter().map(|x| f.neg(x)).collect();
        match he.solve(&rhs)? {
            Solution::Consistent { particular, .. } => {
                for (&pos, &v) in erased.iter().zip(&particular) {
                    out[pos] = v;
                }
                Ok(out)
            }
            Solution::Inconsistent => Err(LrcError::InconsistentWord),
        }
    }
}

/// Builds H = [indicator rows; lower rows] where group j contributes the
/// columns (0 | vecs[j][0] | … | vecs[j][r-1]).
fn assemble(field: &Field, groups: &[Vec<Vec<u32>>], u: usize) -> Result<LrcCode, LrcError> {
    if groups.is_empty() {
        return Err(LrcError::EmptyGroups);
    }
    let r = groups[0].len();
    let ell = groups.len();
    let n = ell * (r + 1);
    let mut h = Matrix::zeros(field, ell + u, n);
    let mut parts = Vec::with_capacity(ell);
    for (j, vecs) in groups.iter().enumerate() {
        let base = j * (r + 1);
        for c in base..base + r + 1 {
            h.set(j, c, 1);
        }
        for (i, v) in vecs.iter().enumerate() {
            for (row, &x) in v.iter().enumerate() {
                h.set(ell + row, base + 1 + i, x);
            }
        }
        parts.push((base..base + r + 1).collect());
    }
    LrcCode::from_parts(h, parts, r)
}

fn check_vectors(field: &Field, groups: &[Vec<Vec<u32>>], u: usize) -> Result<(), LrcError> {
    if groups.is_empty() {
        return Err(LrcError::EmptyGroups);
    }
    for (g, vecs) in groups.iter().enumerate() {
        for v in vecs {
            if v.len() != u {
                return Err(LrcError::VectorLength { group: g, expected: u, found: v.len() });
            }
            if let Some(&bad) = v.iter().find(|&&x| !field.contains(x)) {
                return Err(LinalgError::BadEntry(bad).into());
            }
        }
    }
    Ok(())
}

/// H for d = 6, r = 3: lower columns (0, u_i, v_i, w_i) with u_i, v_i, w_i ∈ F_q³ independent.
pub fn assemble_h_d6r3(field: &Field, groups: &[[Vec<u32>; 3]]) -> Result<LrcCode, LrcError> {
    let groups: Vec<Vec<Vec<u32>>> = groups.iter().map(|g| g.to_vec()).collect();
    check_vectors(field, &groups, 3)?;
    for (g, t) in groups.iter().enumerate() {
        if det3(field, &t[0], &t[1], &t[2]) == 0 {
            return Err(LrcError::DependentGroup { group: g });
        }
    }
    assemble(field, &groups, 3)
}

/// H for d = 7, r = 2: lower columns (0, u_i, v_i) with u_i, v_i ∈ F_q⁴ independent.
pub fn assemble_h_d7r2(field: &Field, groups: &[[Vec<u32>; 2]]) -> Result<LrcCode, LrcError> {
    let groups: Vec<Vec<Vec<u32>>> = groups.iter().map(|g| g.to_vec()).collect();
    check_vectors(field, &groups, 4)?;
    for (g, pair) in groups.iter().enumerate() {
        let m = Matrix::from_rows(field, pair)?;
        if m.rank() < 2 {
            return Err(LrcError::DependentGroup { group: g });
        }
    }
    assemble(field, &groups, 4)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn singleton_examples() {
        let r = check_singleton_optimal(12, 6, 6, 3).unwrap();
        assert_eq!(r.verdict, Optimality::Optimal);
        assert!(r.balance_holds && !r.remark_case);
        let r = check_singleton_optimal(9, 2, 7, 2).unwrap();
        assert_eq!(r.verdict, Optimality::Optimal);
        assert!(r.balance_holds && r.remark_case);
        assert_eq!(r.singleton_rhs, 8);
        assert_eq!(check_singleton_optimal(8, 4, 4, 3).unwrap().verdict, Optimality::Optimal);
        assert_eq!(check_singleton_optimal(9, 2, 8, 2).unwrap().verdict, Optimality::Optimal);
        assert_eq!(check_singleton_optimal(9, 3, 7, 2).unwrap().verdict, Optimality::ExcludedByRemark);
        assert_eq!(check_singleton_optimal(12, 6, 4, 3).unwrap().verdict, Optimality::NotOptimal);
        assert_eq!(check_singleton_optimal(10, 2, 7, 2), Err(LrcError::Divisibility { n: 10, r: 2 }));
    }

    #[test]
    fn single_group_frame() {
        let f = gf(4);
        let code = assemble_h_d6r3(&f, &[[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]]).unwrap();
        assert_eq!(code.parity_check().rows(), 4);
        assert_eq!(code.parity_check().rank(), 4);
        assert_eq!(code.k(), 0);
        assert_eq!(code.encode(&[]).unwrap(), vec![0; 4]);
    }

    #[test]
    fn dependent_triple_rejected() {
        let f = gf(4);
        let err = assemble_h_d6r3(&f, &[[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]]]).unwrap_err();
        assert_eq!(err, LrcError::DependentGroup { group: 0 });
        assert_eq!(assemble_h_d6r3(&f, &[]).unwrap_err(), LrcError::EmptyGroups);
    }

    #[test]
    fn d7r2_shapes() {
        let f = gf(4);
        let code =
            assemble_h_d7r2(&f, &[[vec![1, 0, 0, 0], vec![0, 1, 0, 0]], [vec![0, 0, 1, 0], vec![0, 0, 0, 1]]]).unwrap();
        assert_eq!((code.parity_check().rows(), code.n()), (6, 6));
        assert_eq!(code.k(), 0);
        let v = vec![1, 2, 3, 1];
        let v3: Vec<u32> = v.iter().map(|&x| f.mul(3, x)).collect();
        assert_eq!(assemble_h_d7r2(&f, &[[v, v3]]).unwrap_err(), LrcError::DependentGroup { group: 0 });
    }

    #[test]
    fn repetition_code_distance() {
        let f = gf(2);
        let h = Matrix::from_rows(&f, &[vec![1, 1]]).unwrap();
        let cert = min_distance_exact(&h, DEFAULT_SUBSET_BUDGET).unwrap();
        assert_eq!(cert.d, Some(2));
        assert_eq!(cert.witness, vec![0, 1]);
    }

    #[test]
    fn locality_checks() {
        let f = gf(2);
        let h = Matrix::from_rows(&f, &[vec![1, 1, 1, 1, 1]]).unwrap();
        assert_eq!(
            verify_locality(&h, &[vec![0, 1, 2, 3, 4]], 3),
            Err(LrcError::LocalityMismatch { group: 0, size: 5, r: 3 })
        );
        assert_eq!(verify_locality(&h, &[vec![0, 1, 2, 3, 4]], 4), Ok(4));
        let h2 = Matrix::from_rows(&f, &[vec![1, 1, 0, 1]]).unwrap();
        assert_eq!(verify_locality(&h2, &[vec![0, 1, 2, 3]], 3), Err(LrcError::IndicatorRow { group: 0 }));
        assert!(matches!(verify_locality(&h2, &[vec![0, 1, 2]], 2), Err(LrcError::MalformedGroups(_))));
    }

    #[test]
    fn colex_witness_is_smallest() {
        // columns: e1, e2, e1+e2, e3 over GF(2): the only dependent 3-set is {0,1,2}
        let f = gf(2);
        let h = Matrix::from_columns(&f, &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 1], vec![0, 0, 1]])
            .unwrap();
        let (w, _) = first_dependent_subset(&h, 3, 100).unwrap();
        assert_eq!(w, Some(vec![0, 1, 2]));
        let (w2, _) = first_dependent_subset(&h, 2, 100).unwrap();
        assert_eq!(w2, Some(vec![3, 4]));
        assert!(matches!(first_dependent_subset(&h, 2, 5), Err(LrcError::BudgetExceeded { subsets: 10, budget: 5 })));
    }
}
