//! Hermite polynomials, Wick renormalization of the radial odd basis, and the
//! constants that absorb the divergent self-contractions.

pub mod coeffs;
pub mod constants;
pub mod hermite;
pub mod poly;

pub use coeffs::{
    beta_gamma, coeff_transform, limit_coeffs, radial_laplacian_factor, radial_monomial_terms, shifted_coeffs,
    CoefficientVector, Direction, LimitCoefficients, Scalar, ShiftConvention,
};
pub use constants::{c_gamma, c_gamma_t, c_gamma_ts, shift_a, RenormConstants};
pub use hermite::{binomial, hermite_1d, hermite_cov, hermite_multi, hermite_shift, hermite_table, sub_indices};
pub use poly::Poly;
