//! Rigorous bounds on the constant κ from truncated face-product series.
//!
//! All series terms are nonnegative, so truncating the ranges of the gap
//! variables (and the half-size of the shapes) can only decrease a sum.
//! The lower bound adds such sums; the upper bound subtracts them.

pub mod dyadic;
mod fixed;
mod series;

pub use dyadic::DyadicRational;
pub use series::{
    catalan, central_binomial, face_product_sum, kappa_bounds, kappa_lower, kappa_lower_terms,
    kappa_upper, kappa_upper_terms, prob_shape_lower, prob_shape_upper_term, Arithmetic,
    BoundsReport, KContribution, TruncationSpec,
};
