//! Geometric configurations for the two code families, their verifiers, and
//! the constructions that produce them.
//!
//! A (6, 3) configuration is a list of 4-point sets in PG(2,q), pairwise
//! disjoint, with no three collinear points inside the union of any two sets.
//! A (7, 2) configuration is a list of pairwise disjoint lines of PG(3,q),
//! each carrying three marked points, with no collinear transversal triple.
//! Both are equivalent to Singleton-optimal codes; the `config_to_code_*`
//! functions perform the normalisation that turns one into the other.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{spread_guarantee_lines, sunflower_guarantee_lines};
use crate::galois::{Field, FieldError};
use crate::linalg::{det3, Matrix, Solution};
use crate::lrc::{assemble_h_d6r3, assemble_h_d7r2, verify_distance_at_least, DistanceVerdict, LrcCode, LrcError};
use crate::projgeom::{GeomError, Meet, ProjLine, ProjPoint, ProjSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("the field has characteristic {0}, expected 2")]
    NotCharacteristicTwo(u32),
    #[error("{0} is not a valid orbit seed (0, 1 and primitive cube roots of unity are excluded)")]
    InvalidSeed(u32),
    #[error("the two moment parameters must differ")]
    EqualParameters,
    #[error("vector has length {0}, expected 3")]
    VectorLength(usize),
    #[error("the construction needs m >= 3, got m = {0}")]
    DegreeTooSmall(u32),
    #[error("the greedy procedures need q >= 4, got q = {0}")]
    FieldTooSmall(u32),
    #[error("invalid (6,3) configuration: {0}")]
    InvalidD6R3(D6R3Violation),
    #[error("invalid (7,2) configuration: {0}")]
    InvalidD7R2(D7R2Violation),
    #[error("{triples} transversal triples exceed the budget of {budget}")]
    BudgetExceeded { triples: u128, budget: u64 },
    #[error("columns {witness:?} of H are dependent, so d < {expected}")]
    DistanceTooSmall { expected: usize, witness: Vec<usize> },
    #[error("greedy procedure produced {got} lines, the guarantee is {need}")]
    GuaranteeMissed { got: usize, need: usize },
    #[error("no admissible parameter choice passes verification (last failure: {0})")]
    NoValidChoice(D6R3Violation),
    #[error(
        "no {target}-group configuration found within the search budget (closed-form layout failed: {closed_form})"
    )]
    SearchFailed { target: usize, closed_form: D6R3Violation },
    #[error("group {0} of the code does not have the expected (0 | u | v | w) layout")]
    CodeLayout(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Lrc(#[from] LrcError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The moment vector v(α) = (1, α, α²).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MomentVector {
    pub alpha: u32,
}

impl MomentVector {
    pub fn new(alpha: u32) -> MomentVector {
        MomentVector { alpha }
    }

    pub fn to_vec(self, f: &Field) -> Vec<u32> {
        vec![1, self.alpha, f.mul(self.alpha, self.alpha)]
    }
}

fn moment(f: &Field, a: u32) -> Vec<u32> {
    MomentVector::new(a).to_vec(f)
}

fn require_char2(f: &Field) -> Result<(), ConstructionError> {
    match f.characteristic() {
        2 => Ok(()),
        p => Err(ConstructionError::NotCharacteristicTwo(p)),
    }
}

fn is_orbit_seed(f: &Field, a: u32) -> bool {
    a > 1 && f.add(f.add(f.mul(a, a), a), 1) != 0
}

/// A(α) = {α, 1+α, 1/(1+α), α/(1+α), (1+α)/α, 1/α}, in that order.
pub fn a_orbit(f: &Field, alpha: u32) -> Result<[u32; 6], ConstructionError> {
    require_char2(f)?;
    if !f.contains(alpha) || !is_orbit_seed(f, alpha) {
        return Err(ConstructionError::InvalidSeed(alpha));
    }
    let a1 = f.add(alpha, 1);
    let inv = |x: u32| f.inv(x).expect("nonzero");
    Ok([alpha, a1, inv(a1), f.mul(alpha, inv(a1)), f.mul(a1, inv(alpha)), inv(alpha)])
}

/// Whether {v(α), v(β), c} is linearly dependent, decided by the determinant
/// (β-α)·(c₁αβ - c₂(α+β) + c₃).
pub fn dependency_predicate(f: &Field, c: &[u32], alpha: u32, beta: u32) -> Result<bool, ConstructionError> {
    require_char2(f)?;
    if c.len() != 3 {
        return Err(ConstructionError::VectorLength(c.len()));
    }
    if alpha == beta {
        return Err(ConstructionError::EqualParameters);
    }
    Ok(det3(f, &moment(f, alpha), &moment(f, beta), c) == 0)
}

/// Why a (6, 3) configuration fails. Slots are `(group, position)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum D6R3Violation {
    /// The same point occurs twice (in two groups, or twice in one group).
    SharedPoint { first: (usize, usize), second: (usize, usize) },
    /// Three collinear points inside the union of at most two groups.
    Collinear { triple: [(usize, usize); 3] },
    /// A group does not have exactly four points.
    GroupSize { group: usize, size: usize },
}

impl fmt::Display for D6R3Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            D6R3Violation::SharedPoint { first, second } => {
                write!(f, "point {} of group {} equals point {} of group {}", first.1, first.0, second.1, second.0)
            }
            D6R3Violation::Collinear { triple } => {
                write!(f, "collinear points")?;
                for (g, s) in triple {
                    write!(f, " (group {g}, point {s})")?;
                }
                Ok(())
            }
            D6R3Violation::GroupSize { group, size } => write!(f, "group {group} has {size} points, expected 4"),
        }
    }
}

/// Point form of a (6, 3) configuration: ℓ groups of four points of PG(2,q).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D6R3Config {
    field: Field,
    groups: Vec<[ProjPoint; 4]>,
}

impl D6R3Config {
    pub fn new(field: &Field, groups: Vec<[ProjPoint; 4]>) -> D6R3Config {
        D6R3Config { field: field.clone(), groups }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn groups(&self) -> &[[ProjPoint; 4]] {
        &self.groups
    }

    pub fn ell(&self) -> usize {
        self.groups.len()
    }

    pub fn verify(&self) -> Result<(), D6R3Violation> {
        verify_config_d6r3(self)
    }

    /// The dual lines B_i of every group, in the same order.
    pub fn line_form(&self, plane: &ProjSpace) -> Result<Vec<[ProjLine; 4]>, GeomError> {
        self.groups
            .iter()
            .map(|g| {
                Ok([plane.dual_line(&g[0])?, plane.dual_line(&g[1])?, plane.dual_line(&g[2])?, plane.dual_line(&g[3])?])
            })
            .collect()
    }

    /// Inverse of [`Self::line_form`].
    pub fn from_lines(plane: &ProjSpace, lines: &[[ProjLine; 4]]) -> Result<D6R3Config, GeomError> {
        let groups = lines
            .iter()
            .map(|g| {
                Ok([
                    plane.dual_point(&g[0])?,
                    plane.dual_point(&g[1])?,
                    plane.dual_point(&g[2])?,
                    plane.dual_point(&g[3])?,
                ])
            })
            .collect::<Result<Vec<_>, GeomError>>()?;
        Ok(D6R3Config::new(plane.field(), groups))
    }
}

/// Checks disjointness and that no three points of `S_i ∪ S_j` (i ≤ j) are
/// collinear. Pairs are scanned as (i, j) with j ascending, i ≤ j.
pub fn verify_config_d6r3(cfg: &D6R3Config) -> Result<(), D6R3Violation> {
    let f = &cfg.field;
    for j in 0..cfg.groups.len() {
        for i in 0..=j {
            let mut slots: Vec<(usize, usize)> = (0..4).map(|s| (i, s)).collect();
            if i != j {
                slots.extend((0..4).map(|s| (j, s)));
            }
            let pt = |(gi, s): (usize, usize)| cfg.groups[gi][s].coords();
            for a in 0..slots.len() {
                for b in a + 1..slots.len() {
                    if pt(slots[a]) == pt(slots[b]) {
                        return Err(D6R3Violation::SharedPoint { first: slots[a], second: slots[b] });
                    }
                }
            }
            for a in 0..slots.len() {
                for b in a + 1..slots.len() {
                    for c in b + 1..slots.len() {
                        if det3(f, pt(slots[a]), pt(slots[b]), pt(slots[c])) == 0 {
                            return Err(D6R3Violation::Collinear { triple: [slots[a], slots[b], slots[c]] });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn scale(f: &Field, c: u32, v: &[u32]) -> Vec<u32> {
    v.iter().map(|&x| f.mul(c, x)).collect()
}

fn sub(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

/// Coefficients (x, y) with `target = x·a + y·b`.
fn coords_in(f: &Field, a: &[u32], b: &[u32], target: &[u32]) -> Option<(u32, u32)> {
    let m = Matrix::from_columns(f, &[a.to_vec(), b.to_vec()]).ok()?;
    match m.solve(target).ok()? {
        Solution::Consistent { particular, kernel } if kernel.is_empty() => Some((particular[0], particular[1])),
        _ => None,
    }
}

fn meet_point(plane: &ProjSpace, a: &ProjLine, b: &ProjLine) -> Option<Vec<u32>> {
    match plane.meet(a, b) {
        Meet::Point(p) => Some(p.coords().to_vec()),
        _ => None,
    }
}

/// Lower-part triples (u', v', w') of every group, normalised so that
/// L₁∩L₄ = u'-v' and L₂∩L₄ = v'-w'.
pub fn normalize_d6r3(plane: &ProjSpace, cfg: &D6R3Config) -> Result<Vec<[Vec<u32>; 3]>, ConstructionError> {
    verify_config_d6r3(cfg).map_err(ConstructionError::InvalidD6R3)?;
    let f = plane.field();
    let mut out = Vec::with_capacity(cfg.ell());
    for (g, lines) in cfg.line_form(plane)?.iter().enumerate() {
        let [l1, l2, l3, l4] = lines;
        let layout = || ConstructionError::CodeLayout(g);
        let u = meet_point(plane, l1, l3).ok_or_else(layout)?;
        let v = meet_point(plane, l1, l2).ok_or_else(layout)?;
        let w = meet_point(plane, l2, l3).ok_or_else(layout)?;
        let p14 = meet_point(plane, l1, l4).ok_or_else(layout)?;
        let p24 = meet_point(plane, l2, l4).ok_or_else(layout)?;
        // p14 = α·u - β·v and p24 = γ·v - δ·w
        let (alpha, mbeta) = coords_in(f, &u, &v, &p14).ok_or_else(layout)?;
        let (gamma, mdelta) = coords_in(f, &v, &w, &p24).ok_or_else(layout)?;
        let (beta, delta) = (f.neg(mbeta), f.neg(mdelta));
        if [alpha, beta, gamma, delta].contains(&0) {
            return Err(layout());
        }
        let u2 = scale(f, f.div(alpha, beta).expect("nonzero"), &u);
        let w2 = scale(f, f.div(delta, gamma).expect("nonzero"), &w);
        for x in [sub(f, &u2, &v), sub(f, &v, &w2)] {
            debug_assert!(plane.line_contains(l4, &plane.canonical(&x)?));
        }
        out.push([u2, v, w2]);
    }
    Ok(out)
}

/// Normalises the configuration into H and certifies every 5 columns are
/// independent (so d = 6 by the Singleton-type bound).
pub fn config_to_code_d6r3(plane: &ProjSpace, cfg: &D6R3Config, budget: u64) -> Result<LrcCode, ConstructionError> {
    let triples = normalize_d6r3(plane, cfg)?;
    let code = assemble_h_d6r3(plane.field(), &triples)?;
    match verify_distance_at_least(code.parity_check(), 6, budget)? {
        DistanceVerdict::AtLeast { .. } => Ok(code),
        DistanceVerdict::Dependent { witness } => Err(ConstructionError::DistanceTooSmall { expected: 6, witness }),
    }
}

/// Reads (u, v, w) back out of each group and rebuilds the four dual points.
pub fn code_to_config_d6r3(plane: &ProjSpace, code: &LrcCode) -> Result<D6R3Config, ConstructionError> {
    let f = plane.field();
    let mut lines = Vec::new();
    for (g, cols) in code.repair_groups().iter().enumerate() {
        let lower: Vec<Vec<u32>> = cols.iter().map(|&c| code.lower_column(c)).collect();
        if lower.len() != 4 || lower[0].len() != 3 {
            return Err(ConstructionError::CodeLayout(g));
        }
        let Some(zero) = lower.iter().position(|v| v.iter().all(|&x| x == 0)) else {
            return Err(ConstructionError::CodeLayout(g));
        };
        let rest: Vec<&Vec<u32>> = lower.iter().enumerate().filter(|(i, _)| *i != zero).map(|(_, v)| v).collect();
        let (u, v, w) = (rest[0], rest[1], rest[2]);
        lines.push([
            plane.line_from_vectors(u, v)?,
            plane.line_from_vectors(v, w)?,
            plane.line_from_vectors(w, u)?,
            plane.line_from_vectors(&sub(f, u, v), &sub(f, v, w))?,
        ]);
    }
    Ok(D6R3Config::from_lines(plane, &lines)?)
}

/// Splits whole A-orbits of `rest` into groups of four points whose members
/// come from four distinct orbits (group g takes element g of each orbit).
fn orbit_groups(f: &Field, order: &[u32], rest: &BTreeSet<u32>) -> (Vec<[u32; 4]>, Vec<u32>) {
    let pos = |x: u32| order.iter().position(|&y| y == x).expect("nonzero element");
    let mut seen = BTreeSet::new();
    let mut orbits: Vec<Vec<u32>> = Vec::new();
    for &x in order {
        if !rest.contains(&x) || seen.contains(&x) {
            continue;
        }
        let mut orb: Vec<u32> = a_orbit(f, x).expect("valid seed").to_vec();
        orb.sort_by_key(|&y| pos(y));
        seen.extend(orb.iter().copied());
        orbits.push(orb);
    }
    let full = orbits.len() / 4 * 4;
    let mut groups = Vec::new();
    for chunk in orbits[..full].chunks(4) {
        for g in 0..6 {
            groups.push([chunk[0][g], chunk[1][g], chunk[2][g], chunk[3][g]]);
        }
    }
    let leftover = orbits[full..].concat();
    (groups, leftover)
}

/// Backtracking grouping of leftover moment points, keeping the
/// configuration valid after every added group.
fn fallback_groups(cfg: &mut D6R3Config, plane: &ProjSpace, rest: &[u32]) -> bool {
    if rest.is_empty() {
        return true;
    }
    let f = plane.field().clone();
    let pt = |a: u32| plane.canonical(&moment(&f, a)).expect("nonzero");
    let first = rest[0];
    let others = &rest[1..];
    for a in 0..others.len() {
        for b in a + 1..others.len() {
            for c in b + 1..others.len() {
                cfg.groups.push([pt(first), pt(others[a]), pt(others[b]), pt(others[c])]);
                if verify_config_d6r3(cfg).is_ok() {
                    let left: Vec<u32> =
                        others.iter().enumerate().filter(|(i, _)| ![a, b, c].contains(i)).map(|(_, &x)| x).collect();
                    if fallback_groups(cfg, plane, &left) {
                        return true;
                    }
                }
                cfg.groups.pop();
            }
        }
    }
    false
}

enum Point3 {
    E(usize),
    Fixed([u32; 3]),
    V(u32),
}

fn build_d6r3(
    plane: &ProjSpace,
    order: &[u32],
    special: Vec<[Point3; 4]>,
    used: &BTreeSet<u32>,
) -> Result<D6R3Config, D6R3Violation> {
    let f = plane.field();
    let to_point = |p: &Point3| {
        let v = match p {
            Point3::E(i) => {
                let mut e = vec![0; 3];
                e[*i] = 1;
                e
            }
            Point3::Fixed(c) => c.to_vec(),
            Point3::V(a) => moment(f, *a),
        };
        plane.canonical(&v).expect("nonzero")
    };
    let mut groups: Vec<[ProjPoint; 4]> =
        special.iter().map(|g| [to_point(&g[0]), to_point(&g[1]), to_point(&g[2]), to_point(&g[3])]).collect();
    let rest: BTreeSet<u32> = order.iter().copied().filter(|x| !used.contains(x)).collect();
    let (chunked, leftover) = orbit_groups(f, order, &rest);
    for g in chunked {
        groups.push(g.map(|a| to_point(&Point3::V(a))));
    }
    let mut cfg = D6R3Config::new(f, groups);
    verify_config_d6r3(&cfg)?;
    if !leftover.is_empty() && !fallback_groups(&mut cfg, plane, &leftover) {
        return Err(D6R3Violation::GroupSize { group: cfg.ell(), size: leftover.len() % 4 });
    }
    Ok(cfg)
}

/// The closed-form q+4 layout: three special groups (odd m) or five (even m)
/// followed by whole A-orbits dealt four at a time. Each admissible choice of
/// ξ, or of (α, β), is tried in generator-power order; the error carries the
/// certificate of the last rejected choice.
pub fn closed_form_layout_d6r3(plane: &ProjSpace) -> Result<D6R3Config, ConstructionError> {
    let f = plane.field();
    require_char2(f)?;
    let m = f.degree();
    if m < 3 {
        return Err(ConstructionError::DegreeTooSmall(m));
    }
    let order = f.nonzero_elements();
    let q = f.order();
    let inv = |x: u32| f.inv(x).expect("nonzero");
    let seeds: Vec<u32> = order.iter().copied().filter(|&x| is_orbit_seed(f, x)).collect();
    let mut last = D6R3Violation::GroupSize { group: 0, size: 0 };

    if m % 2 == 1 {
        for &xi in &seeds {
            let x1 = f.add(xi, 1);
            let special = vec![
                [Point3::E(0), Point3::E(1), Point3::V(xi), Point3::V(f.mul(xi, inv(x1)))],
                [Point3::E(2), Point3::V(1), Point3::V(x1), Point3::V(f.mul(x1, inv(xi)))],
                [Point3::Fixed([1, 0, 1]), Point3::Fixed([0, 1, 1]), Point3::V(inv(x1)), Point3::V(inv(xi))],
            ];
            let mut used: BTreeSet<u32> = a_orbit(f, xi)?.into_iter().collect();
            used.insert(1);
            match build_d6r3(plane, &order, special, &used) {
                Ok(cfg) => return Ok(cfg),
                Err(v) => last = v,
            }
        }
    } else {
        let omega = order[((q - 1) / 3) as usize];
        let omega2 = f.mul(omega, omega);
        for &a in &seeds {
            let orbit_a = a_orbit(f, a)?;
            for &b in &seeds {
                if orbit_a.contains(&b) {
                    continue;
                }
                let (a1, b1) = (f.add(a, 1), f.add(b, 1));
                let special = vec![
                    [Point3::E(2), Point3::Fixed([1, 1, 1]), Point3::V(omega), Point3::V(a)],
                    [Point3::E(0), Point3::V(omega2), Point3::V(a1), Point3::V(inv(a))],
                    [Point3::E(1), Point3::V(inv(a1)), Point3::V(b), Point3::V(f.mul(b, inv(b1)))],
                    [
                        Point3::Fixed([1, 0, 1]),
                        Point3::V(f.mul(a, inv(a1))),
                        Point3::V(b1),
                        Point3::V(f.mul(b1, inv(b))),
                    ],
                    [Point3::Fixed([0, 1, 1]), Point3::V(f.mul(a1, inv(a))), Point3::V(inv(b1)), Point3::V(inv(b))],
                ];
                let mut used: BTreeSet<u32> = orbit_a.into_iter().chain(a_orbit(f, b)?).collect();
                used.extend([1, omega, omega2]);
                match build_d6r3(plane, &order, special, &used) {
                    Ok(cfg) => return Ok(cfg),
                    Err(v) => last = v,
                }
            }
        }
    }
    Err(ConstructionError::NoValidChoice(last))
}

/// Output of [`construct_d6r3_char2`].
#[derive(Debug, Clone)]
pub struct D6R3Construction {
    pub config: D6R3Config,
    pub code: LrcCode,
    /// Set when the closed-form layout was rejected and the configuration came
    /// from the canonical search instead; holds the rejected triple.
    pub closed_form_failure: Option<D6R3Violation>,
}

/// A length q+4 code over GF(2^m), m ≥ 3, with exactly verified minimum
/// distance 6.
///
/// The closed-form layout always contains the points (1,0,1) and (0,1,1) next to
/// the full hyperoval {v(t)} ∪ {e₂, e₃}; every hyperoval point h in the group
/// of (1,0,1) has its secant partner in some group, so the verifier rejects
/// it. In that case the (q+4)/4 groups are taken from the first solution of
/// the canonical depth-first search in PG(2,q), which is then verified the
/// same way. `budget` bounds both the search nodes and the distance check.
pub fn construct_d6r3_char2(m: u32, budget: u64) -> Result<D6R3Construction, ConstructionError> {
    if m < 3 {
        return Err(ConstructionError::DegreeTooSmall(m));
    }
    let f = Field::new(2, m, None)?;
    let plane = ProjSpace::new(&f, 2)?;
    let (config, closed_form_failure) = match closed_form_layout_d6r3(&plane) {
        Ok(cfg) => (cfg, None),
        Err(ConstructionError::NoValidChoice(v)) => {
            let target = (f.order() as usize + 4) / 4;
            let cfg = crate::search::find_d6r3(&plane, target, budget)
                .ok_or(ConstructionError::SearchFailed { target, closed_form: v.clone() })?;
            (cfg, Some(v))
        }
        Err(e) => return Err(e),
    };
    let triples = normalize_d6r3(&plane, &config)?;
    let mut code = assemble_h_d6r3(&f, &triples)?;
    let cert = code.verify_min_distance(budget)?;
    if cert.d != Some(6) {
        return Err(ConstructionError::DistanceTooSmall { expected: 6, witness: cert.witness.clone() });
    }
    Ok(D6R3Construction { config, code, closed_form_failure })
}

/// Why a (7, 2) configuration fails. Marks are `(line, slot)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum D7R2Violation {
    MarkOffLine { mark: (usize, usize) },
    RepeatedMark { line: usize },
    LinesMeet { lines: (usize, usize) },
    Collinear { triple: [(usize, usize); 3] },
    CountMismatch { lines: usize, marks: usize },
}

impl fmt::Display for D7R2Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            D7R2Violation::MarkOffLine { mark } => write!(f, "marked point {} is not on line {}", mark.1, mark.0),
            D7R2Violation::RepeatedMark { line } => write!(f, "line {line} repeats a marked point"),
            D7R2Violation::LinesMeet { lines } => write!(f, "lines {} and {} intersect", lines.0, lines.1),
            D7R2Violation::Collinear { triple } => {
                write!(f, "collinear transversal triple")?;
                for (l, s) in triple {
                    write!(f, " (line {l}, mark {s})")?;
                }
                Ok(())
            }
            D7R2Violation::CountMismatch { lines, marks } => write!(f, "{lines} lines but {marks} marked triples"),
        }
    }
}

/// ℓ lines of PG(3,q), each with three marked points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D7R2Config {
    field: Field,
    lines: Vec<ProjLine>,
    marks: Vec<[ProjPoint; 3]>,
}

impl D7R2Config {
    pub fn new(field: &Field, lines: Vec<ProjLine>, marks: Vec<[ProjPoint; 3]>) -> D7R2Config {
        D7R2Config { field: field.clone(), lines, marks }
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }
    pub fn marks(&self) -> &[[ProjPoint; 3]] {
        &self.marks
    }
    pub fn ell(&self) -> usize {
        self.lines.len()
    }
    pub fn verify(&self, budget: u64) -> Result<(), ConstructionError> {
        verify_config_d7r2(self, budget)
    }
}

fn rank_of(f: &Field, vecs: &[&[u32]]) -> usize {
    let rows: Vec<Vec<u32>> = vecs.iter().map(|v| v.to_vec()).collect();
    Matrix::from_rows(f, &rows).map(|m| m.rank()).unwrap_or(0)
}

/// Checks marks, pairwise disjointness and all 27·C(ℓ,3) transversal
/// triples. Triples of lines are scanned colexicographically.
pub fn verify_config_d7r2(cfg: &D7R2Config, budget: u64) -> Result<(), ConstructionError> {
    let f = &cfg.field;
    let ell = cfg.lines.len();
    let bad = |v| Err(ConstructionError::InvalidD7R2(v));
    if cfg.marks.len() != ell {
        return bad(D7R2Violation::CountMismatch { lines: ell, marks: cfg.marks.len() });
    }
    let l = ell as u128;
    let triples = l * l.saturating_sub(1) * l.saturating_sub(2) / 6 * 27;
    if triples > budget as u128 {
        return Err(ConstructionError::BudgetExceeded { triples, budget });
    }
    for (i, (line, marks)) in cfg.lines.iter().zip(&cfg.marks).enumerate() {
        let [b1, b2] = line.basis();
        for (s, p) in marks.iter().enumerate() {
            if rank_of(f, &[b1, b2, p.coords()]) != 2 {
                return bad(D7R2Violation::MarkOffLine { mark: (i, s) });
            }
        }
        if marks[0] == marks[1] || marks[0] == marks[2] || marks[1] == marks[2] {
            return bad(D7R2Violation::RepeatedMark { line: i });
        }
    }
    for j in 0..ell {
        for i in 0..j {
            let [a1, a2] = cfg.lines[i].basis();
            let [b1, b2] = cfg.lines[j].basis();
            if rank_of(f, &[a1, a2, b1, b2]) < 4 {
                return bad(D7R2Violation::LinesMeet { lines: (i, j) });
            }
        }
    }
    for m in 0..ell {
        for t in 0..m {
            for s in 0..t {
                for mu in 0..3 {
                    for nu in 0..3 {
                        for om in 0..3 {
                            let pts = [cfg.marks[s][mu].coords(), cfg.marks[t][nu].coords(), cfg.marks[m][om].coords()];
                            if rank_of(f, &pts) < 3 {
                                return bad(D7R2Violation::Collinear { triple: [(s, mu), (t, nu), (m, om)] });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Representatives (u_i, v_i) with the third marked point equal to u_i - v_i.
pub fn normalize_d7r2(cfg: &D7R2Config, budget: u64) -> Result<Vec<[Vec<u32>; 2]>, ConstructionError> {
    verify_config_d7r2(cfg, budget)?;
    let f = &cfg.field;
    cfg.marks
        .iter()
        .enumerate()
        .map(|(i, [p1, p2, p3])| {
            let (u, v) = (p1.coords(), p2.coords());
            let neg_v: Vec<u32> = v.iter().map(|&x| f.neg(x)).collect();
            // p3 = a·u - b·v
            let (a, b) = coords_in(f, u, &neg_v, p3.coords()).ok_or(ConstructionError::CodeLayout(i))?;
            if a == 0 || b == 0 {
                return Err(ConstructionError::CodeLayout(i));
            }
            Ok([scale(f, a, u), scale(f, b, v)])
        })
        .collect()
}

/// Normalises the configuration into H and certifies every 6 columns are
/// independent, within the subset budget.
pub fn config_to_code_d7r2(cfg: &D7R2Config, budget: u64) -> Result<LrcCode, ConstructionError> {
    let pairs = normalize_d7r2(cfg, budget)?;
    let code = assemble_h_d7r2(&cfg.field, &pairs)?;
    match verify_distance_at_least(code.parity_check(), 7, budget)? {
        DistanceVerdict::AtLeast { .. } => Ok(code),
        DistanceVerdict::Dependent { witness } => Err(ConstructionError::DistanceTooSmall { expected: 7, witness }),
    }
}

/// Rebuilds lines span(u, v) with marks u, v, u - v from the lower rows.
pub fn code_to_config_d7r2(space: &ProjSpace, code: &LrcCode) -> Result<D7R2Config, ConstructionError> {
    let f = space.field();
    let mut lines = Vec::new();
    let mut marks = Vec::new();
    for (g, cols) in code.repair_groups().iter().enumerate() {
        let lower: Vec<Vec<u32>> = cols.iter().map(|&c| code.lower_column(c)).collect();
        if lower.len() != 3 || lower[0].len() != 4 {
            return Err(ConstructionError::CodeLayout(g));
        }
        let Some(zero) = lower.iter().position(|v| v.iter().all(|&x| x == 0)) else {
            return Err(ConstructionError::CodeLayout(g));
        };
        let rest: Vec<&Vec<u32>> = lower.iter().enumerate().filter(|(i, _)| *i != zero).map(|(_, v)| v).collect();
        let (u, v) = (rest[0], rest[1]);
        lines.push(space.line_from_vectors(u, v)?);
        marks.push([space.canonical(u)?, space.canonical(v)?, space.canonical(&sub(f, u, v))?]);
    }
    Ok(D7R2Config::new(f, lines, marks))
}

/// Incremental bookkeeping shared by both greedy procedures: points lying on a
/// line through two marked points of distinct accepted lines.
struct CrossLines<'a> {
    space: &'a ProjSpace,
    forbidden: Vec<bool>,
    accepted: Vec<[usize; 3]>,
}

impl<'a> CrossLines<'a> {
    fn new(space: &'a ProjSpace) -> Self {
        CrossLines { space, forbidden: vec![false; space.num_points()], accepted: Vec::new() }
    }

    fn free<'b>(&'b self, pts: impl IntoIterator<Item = usize> + 'b) -> impl Iterator<Item = usize> + 'b {
        pts.into_iter().filter(|&p| !self.forbidden[p])
    }

    fn accept(&mut self, marks: [usize; 3]) {
        for old in &self.accepted {
            for &p in &marks {
                for &o in old {
                    let l = self.space.line_through(self.space.point(p), self.space.point(o)).expect("distinct lines");
                    for x in self.space.line_point_indices(&l) {
                        self.forbidden[x] = true;
                    }
                }
            }
        }
        self.accepted.push(marks);
    }
}

fn finish_greedy(
    space: &ProjSpace,
    lines: Vec<ProjLine>,
    marks: Vec<[usize; 3]>,
    need: Option<u64>,
) -> Result<(D7R2Config, LrcCode), ConstructionError> {
    let need = need.unwrap_or(0) as usize;
    if lines.len() < need {
        return Err(ConstructionError::GuaranteeMissed { got: lines.len(), need });
    }
    let marks = marks.iter().map(|m| m.map(|i| space.point(i).clone())).collect();
    let cfg = D7R2Config::new(space.field(), lines, marks);
    let pairs = normalize_d7r2(&cfg, u64::MAX)?;
    let code = assemble_h_d7r2(space.field(), &pairs)?;
    Ok((cfg, code))
}

fn greedy_space(field: &Field) -> Result<ProjSpace, ConstructionError> {
    if field.order() < 4 {
        return Err(ConstructionError::FieldTooSmall(field.order()));
    }
    Ok(ProjSpace::new(field, 3)?)
}

/// Greedy selection of lines from the regular spread. The configuration is
/// verified exhaustively; the returned code carries no distance certificate
/// yet (call [`LrcCode::verify_min_distance`] when the budget allows).
pub fn greedy_spread_d7r2(field: &Field) -> Result<(D7R2Config, LrcCode), ConstructionError> {
    let space = greedy_space(field)?;
    let mut cross = CrossLines::new(&space);
    let mut lines = Vec::new();
    for line in space.regular_spread()? {
        let pts = space.line_point_indices(&line);
        let chosen: Vec<usize> =
            if lines.len() < 2 { pts[..3].to_vec() } else { cross.free(pts.iter().copied()).take(3).collect() };
        if chosen.len() == 3 {
            cross.accept([chosen[0], chosen[1], chosen[2]]);
            lines.push(line);
        }
    }
    let marks = cross.accepted.clone();
    finish_greedy(&space, lines, marks, spread_guarantee_lines(field.order() as u64))
}

/// Greedy selection of one line per petal of the sunflower of planes
/// through a fixed line L, the j-th line passing through the j-th point of L.
pub fn greedy_sunflower_d7r2(field: &Field) -> Result<(D7R2Config, LrcCode), ConstructionError> {
    let space = greedy_space(field)?;
    // points 0 and 1 span the first line in canonical order
    let center = space.line_through(space.point(0), space.point(1))?;
    let anchors = space.line_point_indices(&center);
    let petals = space.planes_through_line(&center)?;
    let mut cross = CrossLines::new(&space);
    let mut lines = Vec::new();
    for (j, (petal, &a)) in petals.iter().zip(&anchors).enumerate() {
        let mut candidates: Vec<(Vec<usize>, ProjLine)> = space
            .lines_in_plane_through(petal, space.point(a))
            .into_iter()
            .filter(|l| *l != center)
            .map(|l| (space.line_point_indices(&l), l))
            .collect();
        candidates.sort();
        for (pts, line) in candidates {
            let others = pts.iter().copied().filter(|&p| p != a);
            let chosen: Vec<usize> = if j < 2 {
                std::iter::once(a).chain(others.take(2)).collect()
            } else {
                cross.free(others).take(3).collect()
            };
            if chosen.len() == 3 {
                cross.accept([chosen[0], chosen[1], chosen[2]]);
                lines.push(line);
                break;
            }
        }
    }
    let marks = cross.accepted.clone();
    finish_greedy(&space, lines, marks, sunflower_guarantee_lines(field.order() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lrc::DEFAULT_SUBSET_BUDGET;

    fn gf(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn gf8_orbit_is_everything_but_one() {
        let f = gf(8);
        let mut a = a_orbit(&f, 2).unwrap().to_vec();
        a.sort();
        assert_eq!(a, vec![2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn orbit_rejects_cube_roots_and_odd_characteristic() {
        let f = gf(16);
        let w = f.nonzero_elements()[5];
        assert_eq!(a_orbit(&f, w), Err(ConstructionError::InvalidSeed(w)));
        assert_eq!(a_orbit(&f, 1), Err(ConstructionError::InvalidSeed(1)));
        assert_eq!(a_orbit(&gf(9), 2), Err(ConstructionError::NotCharacteristicTwo(3)));
    }

    #[test]
    fn special_vectors() {
        let f = gf(16);
        for a in 1..16 {
            for b in 1..16 {
                if a == b {
                    continue;
                }
                assert_eq!(dependency_predicate(&f, &[0, 1, 1], a, b).unwrap(), f.add(a, b) == 1);
                assert_eq!(dependency_predicate(&f, &[1, 0, 1], a, b).unwrap(), f.mul(a, b) == 1);
                assert!(!dependency_predicate(&f, &[1, 0, 0], a, b).unwrap());
            }
        }
        assert_eq!(dependency_predicate(&f, &[1, 0, 0], 3, 3), Err(ConstructionError::EqualParameters));
    }

    fn pts(plane: &ProjSpace, vs: [[u32; 3]; 4]) -> [ProjPoint; 4] {
        vs.map(|v| plane.canonical(&v).unwrap())
    }

    #[test]
    fn d6r3_verifier_examples() {
        let f = gf(2);
        let plane = ProjSpace::new(&f, 2).unwrap();
        let frame = pts(&plane, [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]);
        assert!(D6R3Config::new(&f, vec![frame.clone()]).verify().is_ok());
        let bad = pts(&plane, [[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]]);
        assert!(matches!(D6R3Config::new(&f, vec![bad]).verify(), Err(D6R3Violation::Collinear { .. })));
        let f4 = gf(4);
        let plane4 = ProjSpace::new(&f4, 2).unwrap();
        let g1 = pts(&plane4, [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]);
        let g2 = pts(&plane4, [[1, 0, 0], [1, 2, 3], [1, 3, 2], [1, 2, 2]]);
        assert_eq!(
            D6R3Config::new(&f4, vec![g1, g2]).verify(),
            Err(D6R3Violation::SharedPoint { first: (0, 0), second: (1, 0) })
        );
    }

    #[test]
    fn q8_construction() {
        let D6R3Construction { config: cfg, code, closed_form_failure } =
            construct_d6r3_char2(3, DEFAULT_SUBSET_BUDGET).unwrap();
        assert!(closed_form_failure.is_some());
        assert_eq!(cfg.ell(), 3);
        assert_eq!((code.n(), code.k(), code.r()), (12, 6, 3));
        assert_eq!(code.verified_d().unwrap().d, Some(6));
        let plane = ProjSpace::new(cfg.field(), 2).unwrap();
        assert_eq!(code_to_config_d6r3(&plane, &code).unwrap(), cfg);
    }

    #[test]
    fn q16_construction_has_five_groups() {
        let c = construct_d6r3_char2(4, DEFAULT_SUBSET_BUDGET).unwrap();
        let (cfg, code) = (c.config, c.code);
        assert_eq!(cfg.ell(), 5);
        assert_eq!((code.n(), code.k()), (20, 12));
    }

    #[test]
    fn closed_form_layout_rejected_with_certificate() {
        for m in 3..=5 {
            let plane = ProjSpace::new(&Field::new(2, m, None).unwrap(), 2).unwrap();
            match closed_form_layout_d6r3(&plane) {
                Err(ConstructionError::NoValidChoice(D6R3Violation::Collinear { triple })) => {
                    assert!(triple.iter().map(|t| t.0).collect::<BTreeSet<_>>().len() <= 2);
                }
                other => panic!("m={m}: {other:?}"),
            }
        }
    }

    #[test]
    fn construction_needs_m3() {
        assert_eq!(construct_d6r3_char2(2, 1000).unwrap_err(), ConstructionError::DegreeTooSmall(2));
    }

    #[test]
    fn concurrent_lines_rejected() {
        // three collinear points dualize to three concurrent lines
        let f = gf(4);
        let plane = ProjSpace::new(&f, 2).unwrap();
        let g = pts(&plane, [[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]]);
        let cfg = D6R3Config::new(&f, vec![g]);
        assert!(matches!(config_to_code_d6r3(&plane, &cfg, 1000), Err(ConstructionError::InvalidD6R3(_))));
    }

    #[test]
    fn greedy_q4() {
        let f = gf(4);
        let (cfg, code) = greedy_spread_d7r2(&f).unwrap();
        assert!(cfg.ell() >= 3);
        assert_eq!(code.k(), 2 * cfg.ell() - 4);
        let space = ProjSpace::new(&f, 3).unwrap();
        assert_eq!(code_to_config_d7r2(&space, &code).unwrap(), cfg);
        let (cfg, _) = greedy_sunflower_d7r2(&f).unwrap();
        assert!(cfg.verify(u64::MAX).is_ok());
        assert_eq!(greedy_spread_d7r2(&gf(3)).unwrap_err(), ConstructionError::FieldTooSmall(3));
    }

    #[test]
    fn d7r2_violations() {
        let f = gf(4);
        let space = ProjSpace::new(&f, 3).unwrap();
        let p = |v: [u32; 4]| space.canonical(&v).unwrap();
        let l1 = space.line_from_vectors(&[1, 0, 0, 0], &[0, 1, 0, 0]).unwrap();
        let l2 = space.line_from_vectors(&[1, 0, 0, 0], &[0, 0, 1, 0]).unwrap();
        let m1 = [p([1, 0, 0, 0]), p([0, 1, 0, 0]), p([1, 1, 0, 0])];
        let m2 = [p([1, 0, 0, 0]), p([0, 0, 1, 0]), p([1, 0, 1, 0])];
        let cfg = D7R2Config::new(&f, vec![l1.clone(), l2], vec![m1.clone(), m2]);
        assert_eq!(cfg.verify(1000), Err(ConstructionError::InvalidD7R2(D7R2Violation::LinesMeet { lines: (0, 1) })));
        // three disjoint lines with a transversal through marks
        let l2 = space.line_from_vectors(&[0, 0, 1, 0], &[0, 0, 0, 1]).unwrap();
        let l3 = space.line_from_vectors(&[1, 0, 1, 0], &[0, 1, 0, 2]).unwrap();
        let m2 = [p([0, 0, 1, 0]), p([0, 0, 0, 1]), p([0, 0, 1, 1])];
        let m3 = [p([1, 0, 1, 0]), p([0, 1, 0, 2]), p([1, 1, 1, 2])];
        let cfg = D7R2Config::new(&f, vec![l1, l2, l3], vec![m1, m2, m3]);
        assert_eq!(
            cfg.verify(1000),
            Err(ConstructionError::InvalidD7R2(D7R2Violation::Collinear { triple: [(0, 0), (1, 0), (2, 0)] }))
        );
    }
}
