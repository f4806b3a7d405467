//! Points, lines and planes of PG(2,q) and PG(3,q).
//!
//! Points are stored with their first nonzero coordinate scaled to 1, and
//! subspaces by their reduced row echelon basis, so equality is structural.
//! The position of a point in the lexicographic enumeration of canonical
//! vectors is its *point index*; every deterministic choice downstream
//! (tie-breaking, "first" points and lines) goes through it.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::galois::Field;
use crate::linalg::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("only PG(2,q) and PG(3,q) are supported, got N={0}")]
    UnsupportedDimension(usize),
    #[error("operation requires PG({required},q), space is PG({actual},q)")]
    WrongDimension { required: usize, actual: usize },
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("vector of length {found}, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("a line needs two distinct points")]
    SamePoint,
    #[error("coordinate {0} is not a field element")]
    BadCoordinate(u32),
}

/// A point of PG(N,q) in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint(Vec<u32>);

impl ProjPoint {
    pub fn coords(&self) -> &[u32] {
        &self.0
    }
}

/// A line, stored as a 2×(N+1) RREF basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjLine([Vec<u32>; 2]);

impl ProjLine {
    pub fn basis(&self) -> &[Vec<u32>; 2] {
        &self.0
    }
}

/// A plane of PG(3,q), stored as a 3×4 RREF basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPlane([Vec<u32>; 3]);

impl ProjPlane {
    pub fn basis(&self) -> &[Vec<u32>; 3] {
        &self.0
    }
}

/// Intersection of two lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Meet {
    Point(ProjPoint),
    Empty,
    Equal,
}

/// A point or a line of the projective plane, for duality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaneObject {
    Point(ProjPoint),
    Line(ProjLine),
}

/// Number of points of PG(n,q): (q^(n+1) - 1)/(q - 1).
pub fn point_count(n: usize, q: u64) -> u64 {
    (0..=n as u32).map(|i| q.pow(i)).sum()
}

/// Size of a maximal sunflower of (t+1)-subspaces through a t-subspace of PG(n,q).
pub fn max_sunflower_size(q: u64, t: u32, n: u32) -> u64 {
    (0..n - t).map(|i| q.pow(i)).sum()
}

/// RREF rows of the span of `vecs` (zero rows dropped).
fn span_rref(field: &Field, vecs: &[&[u32]]) -> Vec<Vec<u32>> {
    let rows: Vec<Vec<u32>> = vecs.iter().map(|v| v.to_vec()).collect();
    let m = Matrix::from_rows(field, &rows).expect("well-formed rows");
    let (rank, r, _) = m.rref();
    (0..rank).map(|i| r.row(i).to_vec()).collect()
}

/// Residual of `v` after eliminating the pivots of an RREF basis.
fn residual(field: &Field, basis: &[Vec<u32>], v: &[u32]) -> Vec<u32> {
    let mut w = v.to_vec();
    for row in basis {
        let piv = row.iter().position(|&x| x != 0).expect("RREF row is nonzero");
        let c = w[piv];
        if c != 0 {
            for (x, &y) in w.iter_mut().zip(row) {
                *x = field.sub(*x, field.mul(c, y));
            }
        }
    }
    w
}

/// PG(N,q) for N ∈ {2, 3} with its points enumerated once.
#[derive(Debug, Clone)]
pub struct ProjSpace {
    field: Field,
    dim: usize,
    points: Vec<ProjPoint>,
}

impl ProjSpace {
    pub fn new(field: &Field, dim: usize) -> Result<ProjSpace, GeomError> {
        if !(2..=3).contains(&dim) {
            return Err(GeomError::UnsupportedDimension(dim));
        }
        let q = field.order();
        let len = dim + 1;
        let mut points = Vec::with_capacity(point_count(dim, q as u64) as usize);
        // Lexicographic order: longer zero prefix first.
        for lead in (0..len).rev() {
            let tail = len - lead - 1;
            let count = (q as u64).pow(tail as u32);
            for t in 0..count {
                let mut v = vec![0; len];
                v[lead] = 1;
                let mut x = t;
                for i in (lead + 1..len).rev() {
                    v[i] = (x % q as u64) as u32;
                    x /= q as u64;
                }
                points.push(ProjPoint(v));
            }
        }
        Ok(ProjSpace { field: field.clone(), dim, points })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, idx: usize) -> &ProjPoint {
        &self.points[idx]
    }

    fn require(&self, n: usize) -> Result<(), GeomError> {
        if self.dim == n {
            Ok(())
        } else {
            Err(GeomError::WrongDimension { required: n, actual: self.dim })
        }
    }

    /// Canonical point spanned by `v`.
    pub fn canonical(&self, v: &[u32]) -> Result<ProjPoint, GeomError> {
        if v.len() != self.dim + 1 {
            return Err(GeomError::WrongLength { expected: self.dim + 1, found: v.len() });
        }
        if let Some(&bad) = v.iter().find(|&&x| !self.field.contains(x)) {
            return Err(GeomError::BadCoordinate(bad));
        }
        let lead = v.iter().find(|&&x| x != 0).ok_or(GeomError::ZeroVector)?;
        let inv = self.field.inv(*lead).expect("nonzero");
        Ok(ProjPoint(v.iter().map(|&x| self.field.mul(x, inv)).collect()))
    }

    /// Point index of a canonical point (its position in [`Self::points`]).
    pub fn index_of(&self, p: &ProjPoint) -> usize {
        let q = self.field.order() as usize;
        let len = self.dim + 1;
        let lead = p.0.iter().position(|&x| x != 0).expect("canonical point");
        let before: usize = (lead + 1..len).map(|j| q.pow((len - 1 - j) as u32)).sum();
        let offset = p.0[lead + 1..].iter().fold(0usize, |acc, &c| acc * q + c as usize);
        before + offset
    }

    pub fn index_of_vector(&self, v: &[u32]) -> Result<usize, GeomError> {
        Ok(self.index_of(&self.canonical(v)?))
    }

    pub fn line_through(&self, a: &ProjPoint, b: &ProjPoint) -> Result<ProjLine, GeomError> {
        let rows = span_rref(&self.field, &[&a.0, &b.0]);
        if rows.len() < 2 {
            return Err(GeomError::SamePoint);
        }
        Ok(ProjLine([rows[0].clone(), rows[1].clone()]))
    }

    /// Line spanned by two vectors, if they are independent.
    pub fn line_from_vectors(&self, a: &[u32], b: &[u32]) -> Result<ProjLine, GeomError> {
        self.line_through(&self.canonical(a)?, &self.canonical(b)?)
    }

    /// Point indices on a line, ascending.
    pub fn line_point_indices(&self, l: &ProjLine) -> Vec<usize> {
        let f = &self.field;
        let [b1, b2] = &l.0;
        let mut out: Vec<usize> = f
            .elements()
            .map(|lam| {
                let v: Vec<u32> = b1.iter().zip(b2).map(|(&x, &y)| f.add(x, f.mul(lam, y))).collect();
                self.index_of_vector(&v).expect("nonzero")
            })
            .collect();
        out.push(self.index_of_vector(b2).expect("nonzero"));
        out.sort_unstable();
        out
    }

    pub fn points_on_line(&self, l: &ProjLine) -> Vec<ProjPoint> {
        self.line_point_indices(l).into_iter().map(|i| self.points[i].clone()).collect()
    }

    pub fn line_contains(&self, l: &ProjLine, p: &ProjPoint) -> bool {
        residual(&self.field, &l.0, &p.0).iter().all(|&x| x == 0)
    }

    pub fn plane_contains(&self, pi: &ProjPlane, p: &ProjPoint) -> bool {
        residual(&self.field, &pi.0, &p.0).iter().all(|&x| x == 0)
    }

    pub fn meet(&self, l1: &ProjLine, l2: &ProjLine) -> Meet {
        if l1 == l2 {
            return Meet::Equal;
        }
        let f = &self.field;
        // a·b1 + b·b2 = c·c1 + d·c2, solved through the kernel of [b1 b2 -c1 -c2].
        let neg = |v: &Vec<u32>| v.iter().map(|&x| f.neg(x)).collect::<Vec<u32>>();
        let cols = vec![l1.0[0].clone(), l1.0[1].clone(), neg(&l2.0[0]), neg(&l2.0[1])];
        let m = Matrix::from_columns(f, &cols).expect("well-formed");
        let k = m.kernel_basis();
        match k.rows() {
            0 => Meet::Empty,
            1 => {
                let (a, b) = (k.get(0, 0), k.get(0, 1));
                let v: Vec<u32> =
                    l1.0[0].iter().zip(&l1.0[1]).map(|(&x, &y)| f.add(f.mul(a, x), f.mul(b, y))).collect();
                Meet::Point(self.canonical(&v).expect("nonzero intersection"))
            }
            _ => Meet::Equal,
        }
    }

    pub fn collinear(&self, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> bool {
        span_rref(&self.field, &[&a.0, &b.0, &c.0]).len() <= 2
    }

    /// All lines, ordered by their ascending point-index lists.
    pub fn lines(&self) -> Vec<ProjLine> {
        let n = self.points.len();
        let mut covered = vec![false; n * n];
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if covered[i * n + j] {
                    continue;
                }
                let l = self.line_through(&self.points[i], &self.points[j]).expect("distinct");
                let pts = self.line_point_indices(&l);
                for &a in &pts {
                    for &b in &pts {
                        covered[a * n + b] = true;
                    }
                }
                out.push(l);
            }
        }
        out
    }

    pub fn lines_through_point(&self, p: &ProjPoint) -> Vec<ProjLine> {
        let pi = self.index_of(p);
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (j, other) in self.points.iter().enumerate() {
            if j == pi || seen.contains(&j) {
                continue;
            }
            let l = self.line_through(p, other).expect("distinct");
            seen.extend(self.line_point_indices(&l));
            out.push(l);
        }
        out
    }

    /// Line of PG(2,q) dual to a point: {x : a·x = 0}.
    pub fn dual_line(&self, p: &ProjPoint) -> Result<ProjLine, GeomError> {
        self.require(2)?;
        let m = Matrix::from_rows(&self.field, std::slice::from_ref(&p.0)).expect("well-formed");
        let k = m.kernel_basis();
        let rows = span_rref(&self.field, &[k.row(0), k.row(1)]);
        Ok(ProjLine([rows[0].clone(), rows[1].clone()]))
    }

    /// Point of PG(2,q) dual to a line.
    pub fn dual_point(&self, l: &ProjLine) -> Result<ProjPoint, GeomError> {
        self.require(2)?;
        let m = Matrix::from_rows(&self.field, &l.0).expect("well-formed");
        let k = m.kernel_basis();
        self.canonical(k.row(0))
    }

    pub fn dualize(&self, obj: &PlaneObject) -> Result<PlaneObject, GeomError> {
        Ok(match obj {
            PlaneObject::Point(p) => PlaneObject::Line(self.dual_line(p)?),
            PlaneObject::Line(l) => PlaneObject::Point(self.dual_point(l)?),
        })
    }

    /// Coefficients (a, b) of the first monic irreducible x² + a·x + b over
    /// the base field, in (a, b) code order.
    pub fn spread_extension(&self) -> (u32, u32) {
        let f = &self.field;
        for a in f.elements() {
            for b in 1..f.order() {
                let has_root = f.elements().any(|t| f.add(f.add(f.mul(t, t), f.mul(a, t)), b) == 0);
                if !has_root {
                    return (a, b);
                }
            }
        }
        unreachable!("an irreducible quadratic always exists")
    }

    /// The regular spread of PG(3,q): the GF(q²)-scalar classes of GF(q²)²,
    /// read as 2-dimensional GF(q)-subspaces of GF(q)⁴. Sorted by smallest point index.
    pub fn regular_spread(&self) -> Result<Vec<ProjLine>, GeomError> {
        self.require(3)?;
        let f = &self.field;
        let (a, b) = self.spread_extension();
        // (c0 + c1·t)·t with t² = -a·t - b
        let times_t = |c0: u32, c1: u32| (f.neg(f.mul(b, c1)), f.sub(c0, f.mul(a, c1)));
        let mut reps: Vec<[u32; 4]> = Vec::new();
        for z0 in f.elements() {
            for z1 in f.elements() {
                reps.push([1, 0, z0, z1]);
            }
        }
        reps.push([0, 0, 1, 0]);
        let mut lines: Vec<(usize, ProjLine)> = reps
            .iter()
            .map(|v| {
                let (x0, x1) = times_t(v[0], v[1]);
                let (y0, y1) = times_t(v[2], v[3]);
                let l = self.line_from_vectors(v, &[x0, x1, y0, y1]).expect("independent over GF(q)");
                (self.line_point_indices(&l)[0], l)
            })
            .collect();
        lines.sort();
        Ok(lines.into_iter().map(|(_, l)| l).collect())
    }

    /// The q+1 planes through a line of PG(3,q), ordered by the smallest
    /// point index outside the line.
    pub fn planes_through_line(&self, l: &ProjLine) -> Result<Vec<ProjPlane>, GeomError> {
        self.require(3)?;
        let mut out: Vec<ProjPlane> = Vec::new();
        for p in &self.points {
            if self.line_contains(l, p) || out.iter().any(|pi| self.plane_contains(pi, p)) {
                continue;
            }
            let rows = span_rref(&self.field, &[&l.0[0], &l.0[1], &p.0]);
            out.push(ProjPlane([rows[0].clone(), rows[1].clone(), rows[2].clone()]));
        }
        Ok(out)
    }

    /// Dimension (as a vector space) of the sum of two planes.
    pub fn plane_join_rank(&self, a: &ProjPlane, b: &ProjPlane) -> usize {
        let vecs: Vec<&[u32]> = a.0.iter().chain(b.0.iter()).map(Vec::as_slice).collect();
        span_rref(&self.field, &vecs).len()
    }

    /// Lines of a plane through one of its points.
    pub fn lines_in_plane_through(&self, pi: &ProjPlane, p: &ProjPoint) -> Vec<ProjLine> {
        let mut seen: HashSet<usize> = HashSet::new();
        let pidx = self.index_of(p);
        let mut out = Vec::new();
        for (j, other) in self.points.iter().enumerate() {
            if j == pidx || seen.contains(&j) || !self.plane_contains(pi, other) {
                continue;
            }
            let l = self.line_through(p, other).expect("distinct");
            seen.extend(self.line_point_indices(&l));
            out.push(l);
        }
        out
    }
}
