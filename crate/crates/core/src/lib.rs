//! Adaptive FIR filters for two-microphone noise cancellation.
//!
//! Four filters share the [`AdaptiveFilter`] interface: [`Lms`], [`Nlms`],
//! [`Rls`] and [`Fap`], a fast affine projection filter that updates one
//! coefficient at a time by matching pursuit over a sliding window of data
//! columns. The [`anc`] module wires any of them into a primary/reference
//! noise canceller and measures learning curves and SNR improvement.
//!
//! ```
//! use fapanc::{AdaptiveFilter, Fap, FapConfig};
//!
//! let mut filter = Fap::new(FapConfig::new(8)).unwrap();
//! let step = filter.step(0.25, 0.1).unwrap();
//! assert_eq!(step.y, 0.0);
//! ```

pub mod anc;
pub mod cache;
pub mod classic;
pub mod delay;
mod error;
pub mod fap;
mod filter;
pub mod oracle;
mod settings;
pub mod suite;

pub use cache::{cache_oracle, InnerProductCache};
pub use classic::{Lms, Nlms, Rls};
pub use delay::DelayLine;
pub use error::{Error, Result};
pub use fap::{Fap, FapConfig, SelectionNorm, UpdateRecord};
pub use filter::{AdaptiveFilter, Step};
pub use settings::{Algorithm, FilterSettings};
