//! Length bounds and existence guarantees for the two code families.
//!
//! Every radical is evaluated with an exact integer square root: for a
//! non-square radicand X, ⌊(A+√X)/D⌋ = ⌊(A+⌊√X⌋)/D⌋ and ⌈(A+√X)/D⌉ is one
//! more than that; for a square radicand both reduce to rational rounding.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::D6R3Config;
use crate::galois::prime_power;
use crate::projgeom::{Meet, ProjSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("unknown family {0:?} (expected d6r3 or d7r2)")]
    UnknownFamily(String),
    #[error("configuration is invalid: {0}")]
    InvalidConfig(String),
    #[error("configuration is empty")]
    EmptyConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    D6R3,
    D7R2,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::D6R3 => "d6r3",
            Family::D7R2 => "d7r2",
        })
    }
}

impl FromStr for Family {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "d6r3" => Ok(Family::D6R3),
            "d7r2" => Ok(Family::D7R2),
            _ => Err(BoundsError::UnknownFamily(s.into())),
        }
    }
}

/// ⌊√x⌋
pub fn isqrt(x: u128) -> u128 {
    if x < 2 {
        return x;
    }
    let mut s = (x as f64).sqrt() as u128;
    while s * s > x {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= x {
        s += 1;
    }
    s
}

/// ⌊(a + √x)/d⌋ for d > 0; `None` if x < 0.
pub fn floor_radical(a: i128, x: i128, d: i128) -> Option<i128> {
    if x < 0 {
        return None;
    }
    let s = isqrt(x as u128) as i128;
    Some((a + s).div_euclid(d))
}

/// ⌈(a + √x)/d⌉ for d > 0; `None` if x < 0.
pub fn ceil_radical(a: i128, x: i128, d: i128) -> Option<i128> {
    if x < 0 {
        return None;
    }
    let s = isqrt(x as u128) as i128;
    if s * s == x {
        Some(-(-(a + s)).div_euclid(d))
    } else {
        Some((a + s).div_euclid(d) + 1)
    }
}

/// n ≤ 4·⌊(q² - 3q + 9)/6⌋ for (d, r) = (6, 3).
pub fn d6r3_basic_bound(q: u64) -> u64 {
    let q = q as i128;
    (4 * (q * q - 3 * q + 9).div_euclid(6)) as u64
}

/// n ≤ 4·⌊(7q + 3 + √(24q³ + q² - 6q - 63))/24⌋ for (d, r) = (6, 3).
pub fn d6r3_johnson_bound(q: u64) -> u64 {
    let q = q as i128;
    let x = 24 * q * q * q + q * q - 6 * q - 63;
    (4 * floor_radical(7 * q + 3, x, 24).expect("radicand positive for q ≥ 2")) as u64
}

/// n ≤ 3·⌊(q² + q + 3)/3⌋ for (d, r) = (7, 2).
pub fn d7r2_equivalence_bound(q: u64) -> u64 {
    let q = q as i128;
    (3 * (q * q + q + 3).div_euclid(3)) as u64
}

/// Guaranteed number of lines from the greedy spread procedure:
/// ⌈(7 + √(72q² + 121))/18⌉.
pub fn spread_guarantee_lines(q: u64) -> Option<u64> {
    let q = q as i128;
    ceil_radical(7, 72 * q * q + 121, 18).map(|m| m as u64)
}

/// Guaranteed number of lines from the greedy sunflower procedure:
/// ⌈(7 + √(8q² - 16q - 7))/6⌉ (undefined when the radicand is negative).
pub fn sunflower_guarantee_lines(q: u64) -> Option<u64> {
    let q = q as i128;
    ceil_radical(7, 8 * q * q - 16 * q - 7, 6).map(|m| m as u64)
}

/// Bound table row for one q.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub q: u64,
    pub family: Family,
    pub basic_bound: Option<u64>,
    pub johnson_bound: Option<u64>,
    pub equivalence_bound: Option<u64>,
    pub spread_guarantee: Option<u64>,
    pub sunflower_guarantee: Option<u64>,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "q,family,basic,johnson,equivalence,spread_guarantee,sunflower_guarantee";

    pub fn csv_row(&self) -> String {
        let cell = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.q,
            self.family,
            cell(self.basic_bound),
            cell(self.johnson_bound),
            cell(self.equivalence_bound),
            cell(self.spread_guarantee),
            cell(self.sunflower_guarantee)
        )
    }
}

/// All bounds for one family at one q; lengths (not line counts) throughout.
pub fn bound_suite(q: u64, family: Family) -> Result<BoundReport, BoundsError> {
    if prime_power(q).is_none() {
        return Err(BoundsError::NotPrimePower(q));
    }
    let mut rep = BoundReport {
        q,
        family,
        basic_bound: None,
        johnson_bound: None,
        equivalence_bound: None,
        spread_guarantee: None,
        sunflower_guarantee: None,
    };
    match family {
        Family::D6R3 => {
            rep.basic_bound = Some(d6r3_basic_bound(q));
            rep.johnson_bound = Some(d6r3_johnson_bound(q));
        }
        Family::D7R2 => {
            rep.equivalence_bound = Some(d7r2_equivalence_bound(q));
            rep.spread_guarantee = spread_guarantee_lines(q).map(|m| 3 * m);
            rep.sunflower_guarantee = sunflower_guarantee_lines(q).map(|m| 3 * m);
        }
    }
    Ok(rep)
}

/// Restricted Johnson bound for a binary (n, M, 2δ; w) constant weight code:
/// M·(w² - w·n + δ·n) ≤ δ·n.
pub fn johnson_check(n: i64, m: i64, delta: i64, w: i64) -> bool {
    let (n, m, delta, w) = (n as i128, m as i128, delta as i128, w as i128);
    m * (w * w - w * n + delta * n) <= delta * n
}

/// The binary code obtained from the line–point incidence matrix of a
/// (6, 3) configuration by deleting the columns of the 6ℓ intersection points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantWeightCode {
    /// 4ℓ rows over the kept points.
    pub rows: Vec<Vec<bool>>,
    /// Point indices of PG(2,q) kept as columns.
    pub kept_points: Vec<usize>,
    /// The 6ℓ deleted intersection points.
    pub intersection_points: Vec<usize>,
    pub length: usize,
    pub size: usize,
    pub weight: usize,
    pub min_distance: usize,
    pub max_overlap: usize,
    /// δ in the Johnson inequality (q - 3).
    pub delta: i64,
    pub johnson_holds: bool,
}

/// Builds the incidence code and certifies constant weight q-2, pairwise
/// distance ≥ 2q-6, overlap ≤ 1 and the restricted Johnson inequality.
pub fn extract_constant_weight(plane: &ProjSpace, cfg: &D6R3Config) -> Result<ConstantWeightCode, BoundsError> {
    if cfg.groups().is_empty() {
        return Err(BoundsError::EmptyConfig);
    }
    cfg.verify().map_err(|v| BoundsError::InvalidConfig(v.to_string()))?;
    let q = plane.field().order() as usize;
    let lines = cfg.line_form(plane).map_err(|e| BoundsError::InvalidConfig(e.to_string()))?;
    let npts = plane.num_points();
    let mut intersections = Vec::new();
    for group in &lines {
        for i in 0..4 {
            for j in i + 1..4 {
                match plane.meet(&group[i], &group[j]) {
                    Meet::Point(p) => intersections.push(plane.index_of(&p)),
                    _ => return Err(BoundsError::InvalidConfig("lines of a group coincide".into())),
                }
            }
        }
    }
    let mut deleted = vec![false; npts];
    for &p in &intersections {
        deleted[p] = true;
    }
    let kept: Vec<usize> = (0..npts).filter(|&p| !deleted[p]).collect();
    let rows: Vec<Vec<bool>> = lines
        .iter()
        .flatten()
        .map(|l| {
            let on = plane.line_point_indices(l);
            kept.iter().map(|p| on.binary_search(p).is_ok()).collect()
        })
        .collect();
    let weights: Vec<usize> = rows.iter().map(|r| r.iter().filter(|&&b| b).count()).collect();
    let weight = weights[0];
    if weights.iter().any(|&w| w != weight) || weight + 2 != q {
        return Err(BoundsError::InvalidConfig(format!("row weights {weights:?}, expected {}", q as i64 - 2)));
    }
    let mut min_distance = usize::MAX;
    let mut max_overlap = 0;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let overlap = rows[i].iter().zip(&rows[j]).filter(|(a, b)| **a && **b).count();
            max_overlap = max_overlap.max(overlap);
            min_distance = min_distance.min(2 * weight - 2 * overlap);
        }
    }
    if rows.len() == 1 {
        min_distance = kept.len();
    }
    let delta = q as i64 - 3;
    let length = kept.len();
    let size = rows.len();
    let johnson_holds = johnson_check(length as i64, size as i64, delta, weight as i64);
    Ok(ConstantWeightCode {
        rows,
        kept_points: kept,
        intersection_points: intersections,
        length,
        size,
        weight,
        min_distance,
        max_overlap,
        delta,
        johnson_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q8_values() {
        let r = bound_suite(8, Family::D6R3).unwrap();
        assert_eq!((r.basic_bound, r.johnson_bound), (Some(32), Some(28)));
        let r = bound_suite(8, Family::D7R2).unwrap();
        assert_eq!(r.equivalence_bound, Some(75));
        assert_eq!(r.sunflower_guarantee, Some(15));
        assert_eq!(r.csv_row(), "8,d7r2,,,75,15,15");
        assert_eq!(bound_suite(4, Family::D7R2).unwrap().spread_guarantee, Some(9));
        assert_eq!(bound_suite(6, Family::D7R2), Err(BoundsError::NotPrimePower(6)));
    }

    #[test]
    fn guarantee_line_counts() {
        assert_eq!(spread_guarantee_lines(4), Some(3));
        assert_eq!(spread_guarantee_lines(5), Some(3));
        assert_eq!(sunflower_guarantee_lines(5), Some(3));
        assert_eq!(sunflower_guarantee_lines(8), Some(5));
        assert_eq!(sunflower_guarantee_lines(2), None);
    }

    #[test]
    fn radical_rounding() {
        assert_eq!(isqrt(12241), 110);
        assert_eq!(isqrt(121), 11);
        // (1 + √9)/2 = 2 exactly
        assert_eq!(floor_radical(1, 9, 2), Some(2));
        assert_eq!(ceil_radical(1, 9, 2), Some(2));
        assert_eq!(ceil_radical(1, 10, 2), Some(3));
        assert_eq!(floor_radical(0, -1, 2), None);
    }

    #[test]
    fn johnson_examples() {
        for n in 1..20 {
            assert!(johnson_check(n, 1, n, n));
        }
        // negative coefficient: no constraint on M
        assert!(johnson_check(10, 1000, 2, 5));
        // Two disjoint weight-2 words of length 4 meet the bound with equality; three cannot exist.
        assert!(johnson_check(4, 2, 2, 2));
        assert!(!johnson_check(4, 3, 2, 2));
    }

    #[test]
    fn family_parse() {
        assert_eq!("d6r3".parse::<Family>().unwrap(), Family::D6R3);
        assert!("d8".parse::<Family>().is_err());
    }
}
