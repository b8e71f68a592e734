// Negated comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eigen;
pub mod geometry;
pub mod numerics;
pub mod report;
pub mod warp;
pub mod weyl;
