//! Spectra and Brown spectral measures of products `AB` and sums `A + B`,
//! where `A` and `B` are 2x2 matrices sitting in two free copies of the
//! matrix algebra inside a tracial von Neumann algebra.
//!
//! The crate has three layers:
//!
//! * exact/analytic: [`measures`], [`transforms`], [`brown`], [`spectra`],
//!   [`freeprod`] and [`moments`] compute spectra, radial Brown laws,
//!   S-transforms, symbolic word traces and mixed moments in closed or
//!   numerically-inverted form;
//! * stochastic: [`matrixmodel`] realizes the two free copies by
//!   Haar-conjugated block embeddings of large random matrices and measures
//!   eigenvalue clouds, singular values and log-determinants, serving as an
//!   independent cross-check of every analytic result;
//! * orchestration: [`verify`] bundles the cross-check suite, and [`cli`]
//!   exposes everything as `freespec <subcommand>`.
//!
//! Start with the runnable programs under `examples/`; each one exercises a
//! single capability end to end.

pub mod brown;
pub mod cli;
pub mod error;
pub mod freeprod;
pub mod mat2;
pub mod matrixmodel;
pub mod measures;
pub mod moments;
pub mod spectra;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use mat2::Mat2;
pub use measures::{MeasureR, RadialMeasure};
