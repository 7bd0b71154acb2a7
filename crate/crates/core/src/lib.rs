//! Planning and analysis of percentile-based citation-impact studies.
//!
//! The crate covers three jobs:
//!
//! * solving for sample size, power, or the minimum detectable (target) mean
//!   of one-sample, two-sample and one-proportion designs ([`power`]), backed
//!   by exact noncentral t probabilities ([`distributions`]);
//! * turning raw citation counts into inverted percentiles against
//!   subject/year reference sets ([`percentile`]);
//! * checking analytic answers with classical tests ([`inference`]),
//!   bootstrap intervals and Monte Carlo power ([`resampling`]).
//!
//! The [`cli`] module implements the `bibliopower` command-line tool.

pub mod cli;
pub mod distributions;
pub mod error;
pub mod inference;
pub mod percentile;
pub mod power;
pub mod resampling;
pub mod roots;
pub mod special;

pub use error::{Error, Result};
