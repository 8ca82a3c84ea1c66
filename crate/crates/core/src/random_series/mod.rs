//! Random partial sums u_λ^ω = Σ_{λₙ≤λ} cₙXₙφₙ: counter-based noise,
//! sampling on grids, sup norms, moduli of continuity, the Bernstein
//! exponent probe, the Salem–Zygmund sup-norm experiment, dyadic-block
//! continuity checks and modulus-of-continuity sweeps.

mod bernstein;
mod continuity;
mod noise;
mod salem;
pub(crate) mod sample;
mod sup;

pub use bernstein::{bernstein_probe, bernstein_single_mode, single_mode_sups};
pub use continuity::{
    dyadic_block_ranges, dyadic_block_sups, modulus_rule, modulus_sweep, modulus_theta, DyadicBlocks, ModulusFit,
};
pub use noise::{draw_noise, RandomLaw};
pub use salem::{rho, salem_zygmund_experiment, SalemZygmundReport, QUANTILES};
pub use sample::{
    amplitudes, sample_partial_sum, sample_partial_sum_with_budget, FieldSample, Grid, SampleMode,
    DEFAULT_MODE_BUDGET,
};
pub use sup::{modulus_of_continuity, sup_norm, window_oscillation};
