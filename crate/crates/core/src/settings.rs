use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::classic::{Lms, Nlms, Rls, DEFAULT_DELTA, DEFAULT_EPSILON, DEFAULT_LAMBDA};
use crate::error::{Error, Result};
use crate::fap::{self, Fap, FapConfig, SelectionNorm};
use crate::filter::AdaptiveFilter;

pub const DEFAULT_ORDER: usize = 8;
pub const DEFAULT_LMS_MU: f64 = 0.002;
pub const DEFAULT_NLMS_MU: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Lms,
    Nlms,
    Rls,
    Fap,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Lms,
        Algorithm::Nlms,
        Algorithm::Rls,
        Algorithm::Fap,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Lms => "lms",
            Algorithm::Nlms => "nlms",
            Algorithm::Rls => "rls",
            Algorithm::Fap => "fap",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lms" => Ok(Algorithm::Lms),
            "nlms" => Ok(Algorithm::Nlms),
            "rls" => Ok(Algorithm::Rls),
            "fap" | "fapa" => Ok(Algorithm::Fap),
            other => Err(Error::config(format!(
                "unknown algorithm '{other}' (expected lms, nlms, rls or fap)"
            ))),
        }
    }
}

/// Everything needed to build any of the four filters.
///
/// Fields that an algorithm does not use are carried along but ignored, so a
/// single value can be echoed verbatim into run summaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FilterSettings {
    pub algorithm: Algorithm,
    pub order: usize,
    pub mu: f64,
    pub epsilon: f64,
    pub lambda: f64,
    pub delta: f64,
    pub window: usize,
    pub iterations: usize,
    pub selection_norm: SelectionNorm,
    pub norm_floor: f64,
}

impl FilterSettings {
    /// Defaults from the reference experiment: `M = 8`, `mu = 0.002` (LMS),
    /// `0.005` (NLMS), `0.002` (FAP), `lambda = 0.99`, `L = 25`, `P = 8`.
    pub fn defaults(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            order: DEFAULT_ORDER,
            mu: Self::default_mu(algorithm),
            epsilon: DEFAULT_EPSILON,
            lambda: DEFAULT_LAMBDA,
            delta: DEFAULT_DELTA,
            window: fap::DEFAULT_WINDOW,
            iterations: fap::DEFAULT_ITERATIONS,
            selection_norm: SelectionNorm::default(),
            norm_floor: fap::DEFAULT_NORM_FLOOR,
        }
    }

    pub fn default_mu(algorithm: Algorithm) -> f64 {
        match algorithm {
            Algorithm::Lms => DEFAULT_LMS_MU,
            Algorithm::Nlms => DEFAULT_NLMS_MU,
            // Unused by RLS; echoed as the FAP value for a uniform summary.
            Algorithm::Rls | Algorithm::Fap => fap::DEFAULT_MU,
        }
    }

    pub fn fap_config(&self) -> FapConfig {
        FapConfig {
            order: self.order,
            window: self.window,
            iterations: self.iterations,
            mu: self.mu,
            selection_norm: self.selection_norm,
            norm_floor: self.norm_floor,
            rebuild_every: 0,
        }
    }

    /// Checks the fields the selected algorithm uses.
    pub fn validate(&self) -> Result<()> {
        self.build().map(|_| ())
    }

    pub fn build(&self) -> Result<Box<dyn AdaptiveFilter + Send>> {
        Ok(match self.algorithm {
            Algorithm::Lms => Box::new(Lms::new(self.order, self.mu)?),
            Algorithm::Nlms => Box::new(Nlms::new(self.order, self.mu, self.epsilon)?),
            Algorithm::Rls => Box::new(Rls::new(self.order, self.lambda, self.delta)?),
            Algorithm::Fap => Box::new(Fap::new(self.fap_config())?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn per_algorithm_defaults() {
        assert_eq!(FilterSettings::defaults(Algorithm::Lms).mu, 0.002);
        assert_eq!(FilterSettings::defaults(Algorithm::Nlms).mu, 0.005);
        let f = FilterSettings::defaults(Algorithm::Fap);
        assert_eq!((f.order, f.window, f.iterations, f.mu), (8, 25, 8, 0.002));
        assert_eq!(FilterSettings::defaults(Algorithm::Rls).lambda, 0.99);
    }

    #[test]
    fn builds_each_algorithm() {
        for algo in Algorithm::ALL {
            let f = FilterSettings::defaults(algo).build().unwrap();
            assert_eq!(f.name(), algo.as_str());
            assert_eq!(f.order(), 8);
        }
    }

    #[test]
    fn validation_is_per_algorithm() {
        let mut s = FilterSettings::defaults(Algorithm::Rls);
        s.lambda = 1.5;
        assert!(s
            .validate()
            .unwrap_err()
            .to_string()
            .contains("lambda out of range"));
        // LMS ignores lambda.
        s.algorithm = Algorithm::Lms;
        assert!(s.validate().is_ok());
        s.algorithm = Algorithm::Fap;
        s.window = 8;
        assert!(s.validate().is_err());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for algo in Algorithm::ALL {
            assert_eq!(algo.to_string().parse::<Algorithm>().unwrap(), algo);
        }
        assert!("kalman".parse::<Algorithm>().is_err());
    }
}
