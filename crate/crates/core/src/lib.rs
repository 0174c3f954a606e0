//! Exact verification toolkit for the Artin-Schreier-Mumford curves
//! `(y^q - y)(x^q - x) = c` over `F_q`, `q = p^t`, their automorphism groups
//! `Z_p^{2t} x| D_{q-1}`, and the Schottky groups uniformizing them over
//! `F_q((T))`.
//!
//! Everything is computed with exact integer or finite-field arithmetic; the
//! only floating point lives in tests.

pub mod autgrp;
pub mod bounds;
pub mod curve;
pub mod error;
pub mod ff;
pub mod grouplab;
pub mod laurent;
pub mod moebius;
pub mod report;
pub mod schottky;

pub use autgrp::{AutElem, AutGroup, StabilizerTag};
pub use bounds::{BoundReport, Comparison, ExactValue};
pub use curve::{CurveParams, CurvePoint, LPolynomial, MumfordParams};
pub use error::{Error, Result};
pub use ff::{FieldCtx, FieldElem};
pub use grouplab::{Perm, PermGroup};
pub use laurent::{LaurentPoly, ProjPoint, Valuation};
pub use moebius::{Mobius, MobiusClass};
pub use report::Check;
pub use schottky::SchottkyData;
