//! Overflow-safe one-dimensional Hermite functions, tensor Hermite
//! functions, normalized Laguerre functions, radial Hermite eigenfunctions
//! and the Erdélyi envelope.
//!
//! Every recurrence carries a mantissa together with a binary exponent and
//! folds the Gaussian weight in only at the end, so orders up to 10⁵ and
//! arguments deep in the classically forbidden region stay finite.

mod envelope;
mod hermite;
mod laguerre;
mod radial;
mod scaled;

pub use envelope::{
    erdelyi_envelope, erdelyi_envelope_with, szeg_lower_region, Envelope, Regime,
    DEFAULT_TAIL_GAMMA,
};
pub use hermite::{
    hermite_batch, hermite_derivative, hermite_tensor, hermite_value, HermiteBatch, HermiteTable,
};
pub use laguerre::{
    laguerre_batch, laguerre_derivative_identity_check, laguerre_ode_residual, laguerre_poly,
    LaguerreBatch, LaguerreTable, SignedLog,
};
pub use radial::{radial_hermite, sphere_volume, RadialBasis};
