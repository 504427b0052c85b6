//! Stochastic-gradient and least-squares baselines: LMS, NLMS and RLS.

mod lms;
mod nlms;
mod rls;

pub use lms::Lms;
pub use nlms::{Nlms, DEFAULT_EPSILON};
pub use rls::{Rls, DEFAULT_DELTA, DEFAULT_LAMBDA};

use crate::error::{Error, Result};

fn check_order(order: usize) -> Result<()> {
    if order == 0 {
        return Err(Error::config("filter order must be at least 1"));
    }
    Ok(())
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::config(format!(
            "step size mu out of range: {mu} (need mu > 0)"
        )));
    }
    Ok(())
}
