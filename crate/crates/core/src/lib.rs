//! Impulse-response-invariant rational approximation of the complex
//! fractional order integrator (CFOI)
//!
//! ```text
//! G(s) = (ω_gc / s)^λ · cos(μ · ln(ω_gc / s)),   0 < λ < 2,  −1 < μ ≤ 0
//! ```
//!
//! The pipeline inverts `G` numerically ([`nilt`]), fits discrete and
//! continuous rational models to the impulse response ([`sysid`]) and
//! compares all three in time and frequency ([`pipeline`]).
//!
//! Polynomial coefficients are in descending powers throughout.

pub mod cfoi;
pub mod cli;
pub mod error;
pub mod lti;
pub mod nilt;
pub mod output;
pub mod pipeline;
pub mod special;
pub mod sysid;

pub use cfoi::{cfoi_analytic_impulse, cfoi_freq_grid, cfoi_freq_response, cfoi_transfer, CfoiParams};
pub use error::{IridError, Result, Stage};
pub use lti::{
    continuous_freq_response, discrete_freq_response, discrete_impulse, is_stable_discrete,
    poly_eval, poly_roots, ContinuousTransferFunction, DiscreteTransferFunction, FrequencyGrid,
    FrequencyResponseSeries, Polynomial, TimeSeries,
};
pub use nilt::{nilt, NiltConfig};
pub use output::{write_outputs, CoeffsFile};
pub use pipeline::{
    compare_frequency, compare_impulse, irid_fcoi, ComparisonMetrics, ErrorSummary, IridRequest,
    IridResult,
};
pub use sysid::{bilinear_d2c, prony_init, stmcb_fit, FitConfig};
