//! Group cohomology with coefficients in `Z/m` and `Q/Z`, the unramified
//! part of the Schur multiplier, and structural checks built on them.

mod b0;
mod cochain;
mod model;
mod verify;

pub use b0::{b0, b0_from, b0_with_modulus, fixed_classes, restriction_kernel, B0Options, B0Result, RestrictionTarget};
pub use cochain::Cochain;
pub use model::{h1, is_coboundary, GaugeModel, H2Data, DEFAULT_ENGINE_CAP};
pub use verify::{
    corestriction_check, verify_coprime_injectivity, verify_coprime_semidirect, verify_frobenius, verify_product,
    verify_sylow_injectivity, Report, Status,
};
