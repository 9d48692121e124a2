//! Special functions and the Hölder moment coefficients.
//!
//! `gauss2f1` is evaluated twice, by its power series and by the Euler
//! integral, and refuses to answer when the two disagree. The moment
//! coefficients likewise come in a cubature form (the reference) and a
//! hypergeometric closed form (the cross-check), plus the coefficients as
//! printed in the bound's statement, which are reported for comparison only.

mod gamma;
mod hyp2f1;
mod moments;

pub use gamma::{beta, beta_by_quadrature, ln_gamma};
pub use hyp2f1::{
    gauss2f1, gauss2f1_checked, hyp2f1_euler, hyp2f1_series, Hyp2f1Evaluation, AGREEMENT,
};
pub use moments::{
    axis_factors, compare_paper_coefficients, holder_moments_direct,
    holder_moments_hypergeometric, moment_total_direct, paper_coefficients, BoundParams,
    CoefficientComparison, HolderMoments, PaperCoefficients,
};
