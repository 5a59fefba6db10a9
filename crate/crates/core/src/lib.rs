//! Entanglement potential of single-mode light.
//!
//! A single-mode state is mixed with vacuum on a beamsplitter and the
//! entanglement of the two output arms is measured: the log-negativity gives
//! the entanglement potential (EP), and for pure inputs the entropy of one arm
//! gives the entropic entanglement potential (EEP). States live in a truncated
//! photon-number basis; Gaussian states additionally have an exact
//! covariance-matrix pipeline that serves as a cross-check.

pub mod analytic;
pub mod channels;
pub mod cli;
pub mod error;
pub mod gaussian;
pub mod measures;
pub mod operator_algebra;
pub mod splitter;
pub mod states;

pub use error::{Error, Result};
pub use measures::{entanglement_potential, EpResult, TwoModeDensity};
pub use operator_algebra::{ComplexMatrix, ModeIndexing, C64};
pub use states::{CatSpec, FockDensity, FockVector, GaussianParams, Truncation};
