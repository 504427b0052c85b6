use crate::error::Result;
use crate::fap::UpdateRecord;

/// Output of one filter step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    /// A priori error `d(n) - y(n)`.
    pub e: f64,
    /// Filter output computed with the coefficients from before this sample's update.
    pub y: f64,
}

/// Per-sample adaptive FIR filter driven by an input `x(n)` and desired `d(n)`.
pub trait AdaptiveFilter {
    fn step(&mut self, x_new: f64, d_new: f64) -> Result<Step>;

    /// Current coefficient vector `h(n)`, `h[k]` weighting `x(n - k)`.
    fn taps(&self) -> &[f64];

    fn order(&self) -> usize {
        self.taps().len()
    }

    fn name(&self) -> &'static str;

    /// Coefficient updates performed by the most recent step, for filters that
    /// update coefficients selectively.
    fn last_updates(&self) -> &[UpdateRecord] {
        &[]
    }
}

impl<F: AdaptiveFilter + ?Sized> AdaptiveFilter for Box<F> {
    fn step(&mut self, x_new: f64, d_new: f64) -> Result<Step> {
        (**self).step(x_new, d_new)
    }

    fn taps(&self) -> &[f64] {
        (**self).taps()
    }

    fn order(&self) -> usize {
        (**self).order()
    }

    fn name(&self) -> &'static str {
        (**self).name()
    }

    fn last_updates(&self) -> &[UpdateRecord] {
        (**self).last_updates()
    }
}

pub(crate) fn all_finite(values: &[f64]) -> bool {
    values.iter().all(|v| v.is_finite())
}
