//! Frobenius matrices and zeta functions of hyperelliptic curves
//! `y^2 = Q(x)` over prime fields, computed with a baby-step/giant-step
//! reduction whose cost grows like `sqrt(p)`.

pub mod cli;
pub mod count;
pub mod curve;
pub mod error;
pub mod frobenius;
pub mod recurrence;
pub mod reduction;
pub mod report;
pub mod ring;
pub mod zeta;

pub use count::point_count_naive;
pub use curve::{compute_b_table, compute_bezout, validate, BCoeffTable, BezoutPair, CurveData};
pub use error::{Error, Result};
pub use frobenius::{frobenius_matrix, frobenius_matrix_with, FrobeniusOptions};
pub use recurrence::{interval_products, naive_interval_products, shift_evaluations, EngineKind, IntervalRequest};
pub use ring::{RingCtx, RingElem, RingMatrix, RingPoly};
pub use zeta::{charpoly_frobenius, recover_zeta, CharPolyModP, ZetaNumerator};
