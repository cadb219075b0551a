//! Exact-arithmetic toolkit for Cantor-series numeral systems (positive,
//! alternating, and nega-q), the digit map between the alternating and
//! nega-q systems, Salem-type function families driven by a probability-like
//! matrix, and a run-structured fractal map with dimension solvers.
//!
//! All core computation is exact rational arithmetic; real values are
//! returned as [`numerics::Enclosure`]s that certify `lo <= value <= hi`,
//! with width zero whenever a closed form exists.

pub mod basis;
pub mod cells;
pub mod codec;
pub mod error;
pub mod fractalh;
pub mod mapf;
pub mod numerics;
pub mod salem;

pub use basis::{Alphabet, BaseSpec};
pub use codec::{Cylinder, DualStatus, Polarity, Representation, Tail};
pub use error::{Error, Result};
pub use numerics::{Enclosure, Rational};
