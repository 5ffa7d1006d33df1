//! Special functions: gamma family and the two-parameter Mittag-Leffler function.

pub mod dd;
mod gamma;
mod mittag_leffler;

pub use gamma::{cos_pi, gamma, gamma_sign, ln_gamma, recip_gamma, sin_pi};
pub use mittag_leffler::{ml, ml_at_zero, ml_value, MittagLeffler, MlMethod, MlQuery, MlResult};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecialError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("E_{{{alpha},{beta}}}({z}) overflows f64")]
    Overflow { alpha: f64, beta: f64, z: f64 },
}
