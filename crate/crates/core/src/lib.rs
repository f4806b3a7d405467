//! Singleton-optimal locally repairable codes with (d, r) = (6, 3) and (7, 2),
//! built from configurations of points and lines in PG(2,q) and PG(3,q).
//!
//! The crate is layered bottom-up:
//!
//! - [`galois`]: exact GF(p^m) arithmetic with reproducible element codes
//! - [`linalg`]: rank, RREF, kernels and solving over GF(q)
//! - [`projgeom`]: points, lines, duality, spreads and sunflowers
//! - [`lrc`]: parity-check assembly, distance and locality verification, repair
//! - [`constructions`]: geometric certificates and the explicit/greedy constructions
//! - [`bounds`]: closed-form length bounds with exact integer radicals
//! - [`search`]: exhaustive backtracking for maximal configurations at small q
//! - [`formats`]: the text file formats shared by the command-line tool

pub mod bounds;
pub mod constructions;
pub mod formats;
pub mod galois;
pub mod linalg;
pub mod lrc;
pub mod projgeom;
pub mod search;

pub use galois::{Field, FieldElement, FieldError};
pub use linalg::{Matrix, Solution};
pub use lrc::LrcCode;
pub use projgeom::{ProjLine, ProjPlane, ProjPoint, ProjSpace};
