//! Exact rectangles used as plot/cover data: one cell per cylinder, with the
//! exact x-interval and an exact enclosure of the image over that cylinder.

use crate::numerics::Rational;

/// One rank-`m` cylinder row for graph emission: exact x-interval and exact
/// image enclosure, suitable for external plotting or cover counting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphCell {
    pub x_lo: Rational,
    pub x_hi: Rational,
    pub y_lo: Rational,
    pub y_hi: Rational,
}

impl GraphCell {
    pub fn new(x_lo: Rational, x_hi: Rational, y_lo: Rational, y_hi: Rational) -> Self {
        debug_assert!(x_lo <= x_hi && y_lo <= y_hi);
        Self { x_lo, x_hi, y_lo, y_hi }
    }
}

/// Sorts rows by `x_lo` (then `y_lo` for determinism).
pub fn sort_cells(cells: &mut [GraphCell]) {
    cells.sort_by(|a, b| a.x_lo.cmp(&b.x_lo).then_with(|| a.y_lo.cmp(&b.y_lo)));
}
