#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evolution;
pub mod grid;
pub mod moments;
pub mod quad;
pub mod riesz;
pub mod special;
pub mod spectral;
pub mod stable;
pub mod symbol;
pub mod voigt;

pub use error::{Error, Result};
pub use evolution::{
    auto_grid, grid_for_symbol, residual_check, solve_exact_spectral, solve_stepping, EvolutionProblem,
    InitialCondition,
};
pub use grid::{Grid1D, InvariantReport, InvariantTolerances, ProfileSamples};
pub use moments::{
    fit_scaling_exponent, moment, moment_quadrature, moment_series_large_tau, moment_series_small_tau, MomentMethod,
    MomentQuery, MomentResult,
};
pub use quad::Tolerance;
pub use riesz::{riesz_apply_integral, riesz_apply_spectral, riesz_apply_spectral_with, RieszOrder};
pub use spectral::SpectralOptions;
pub use stable::{stable_cf, stable_pdf, stable_pdf_inversion, stable_pdf_rescale, StableParams};
pub use symbol::{Estimate, PowerTerm, Symbol, TailExpansion};
pub use voigt::{
    classic_voigt_pdf, generalized_voigt_convolution_oracle, generalized_voigt_pdf, profile_on_grid, ClassicVoigtSpec,
    ProfileSpec, VoigtSpec,
};
