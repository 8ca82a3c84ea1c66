//! Lᵖ norms of radial Hermite functions, log-log rate fits, the critical
//! convergence exponent and the square-function criterion.

mod alpha;
mod estrad;
mod fit;
mod norms;
mod square;

pub use alpha::{alpha_star, power_law_critical_p, AlphaStar, BOUNDED_SLOPE};
pub use estrad::{critical_p, estrad_prediction, lp_rate_sweep, EstradPrediction, EstradRegime, LpRateReport};
pub use fit::{fit_all, fit_rate, RateFit};
pub use norms::{
    hermite_sup_norm, lower_bound_certificate, lp_norm_radial, lp_norm_radial_detailed, normalization_sweep,
    tail_bound, LowerBound, LpNorm, NormalizationSweep, TAIL_SAFETY,
};
pub use square::{square_function_lp, square_function_sweep, SquareFunctionSweep, Verdict};
