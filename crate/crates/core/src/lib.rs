//! Entanglement between a harmonic oscillator and a massless scalar field,
//! in free space and in front of a perfect mirror.
//!
//! The field is integrated out analytically; what remains are the
//! oscillator's reduced kernels (local damping `gamma`, the mirror echo
//! `2 gamma / L` delayed by `L`, and the spectral weight of the field modes).
//! Natural units `hbar = c = 1` are used throughout.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod early;
pub mod error;
pub mod late;
pub mod quad;
pub mod specfun;
pub mod state;
pub mod twin;

pub use error::{Error, Result};
pub use late::{FrequencyResponse, Geometry};
pub use state::{linear_entropy, purity, von_neumann_entropy, CovarianceMatrix, EntropyReport, SystemParams};
