//! Eigenvalue buckets I(j), coefficient rules, coefficient-space norms and
//! conditions, and the spectral function Σ_{n∈I(j)} |φₙ(x)|².

mod coefficients;
pub(crate) mod function;
mod layout;
mod norms;

pub use coefficients::{BucketLaw, CoefficientRule, Layout};
pub use function::{
    karadzhov_ratio, karadzhov_sup, spectral_function, GridDensity, KaradzhovSup,
    RaySpectralFunction, MAX_BUCKET,
};
pub use layout::{binomial, bucket_members, bucket_of, level_members, SpectralLayout};
pub use norms::{check_condition, hs_norm, zs_norm, Condition, ConditionReport, SLOPE_MARGIN};
