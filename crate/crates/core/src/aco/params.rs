use serde::{Deserialize, Serialize};

use super::AcoError;

/// Which term a candidate's data list must contain for the candidate to be
/// feasible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetGate {
    /// The query term stays the target for the whole tour.
    #[default]
    Query,
    /// The target moves to each newly chosen term.
    CurrentNode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AcoParams {
    /// Pheromone exponent.
    pub alpha: f64,
    /// Heuristic (edge frequency) exponent.
    pub beta: f64,
    /// Fraction of the trail kept between iterations; 1 disables evaporation.
    pub rho: f64,
    /// Deposit per association on a tour.
    pub q_factor: f64,
    pub tau0: f64,
    pub n_ants: usize,
    pub max_iterations: usize,
    pub stagnation_window: usize,
    pub seed: u64,
    pub gate: TargetGate,
}

impl Default for AcoParams {
    fn default() -> Self {
        AcoParams {
            alpha: 1.0,
            beta: 1.0,
            rho: 1.0,
            q_factor: 1.0,
            tau0: 1.0,
            n_ants: 20,
            max_iterations: 50,
            stagnation_window: 10,
            seed: 0,
            gate: TargetGate::Query,
        }
    }
}

impl AcoParams {
    pub fn validate(&self) -> Result<(), AcoError> {
        let bad = |msg: String| Err(AcoError::InvalidParameter(msg));
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return bad(format!(
                "alpha must be a finite non-negative number, got {}",
                self.alpha
            ));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return bad(format!(
                "beta must be a finite non-negative number, got {}",
                self.beta
            ));
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return bad(format!("rho must lie in (0, 1], got {}", self.rho));
        }
        if !(self.q_factor > 0.0 && self.q_factor.is_finite()) {
            return bad(format!("q_factor must be positive, got {}", self.q_factor));
        }
        if !(self.tau0 > 0.0 && self.tau0.is_finite()) {
            return bad(format!("tau0 must be positive, got {}", self.tau0));
        }
        if self.n_ants == 0 {
            return bad("n_ants must be at least 1".into());
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be at least 1".into());
        }
        if self.stagnation_window == 0 {
            return bad("stagnation_window must be at least 1".into());
        }
        Ok(())
    }
}

/// Partial parameter set; unset fields fall back to a base [`AcoParams`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub rho: Option<f64>,
    pub q_factor: Option<f64>,
    pub tau0: Option<f64>,
    pub n_ants: Option<usize>,
    pub max_iterations: Option<usize>,
    pub stagnation_window: Option<usize>,
    pub seed: Option<u64>,
    pub gate: Option<TargetGate>,
}

impl ParamOverrides {
    pub fn apply(&self, base: &AcoParams) -> AcoParams {
        AcoParams {
            alpha: self.alpha.unwrap_or(base.alpha),
            beta: self.beta.unwrap_or(base.beta),
            rho: self.rho.unwrap_or(base.rho),
            q_factor: self.q_factor.unwrap_or(base.q_factor),
            tau0: self.tau0.unwrap_or(base.tau0),
            n_ants: self.n_ants.unwrap_or(base.n_ants),
            max_iterations: self.max_iterations.unwrap_or(base.max_iterations),
            stagnation_window: self.stagnation_window.unwrap_or(base.stagnation_window),
            seed: self.seed.unwrap_or(base.seed),
            gate: self.gate.unwrap_or(base.gate),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let p = AcoParams::default();
        assert!(p.validate().is_ok());
        assert_eq!(
            (p.alpha, p.beta, p.rho, p.q_factor, p.tau0),
            (1.0, 1.0, 1.0, 1.0, 1.0)
        );
    }

    #[test]
    fn rejects_out_of_range() {
        for p in [
            AcoParams {
                rho: 0.0,
                ..Default::default()
            },
            AcoParams {
                rho: 1.5,
                ..Default::default()
            },
            AcoParams {
                alpha: -1.0,
                ..Default::default()
            },
            AcoParams {
                n_ants: 0,
                ..Default::default()
            },
            AcoParams {
                max_iterations: 0,
                ..Default::default()
            },
            AcoParams {
                tau0: 0.0,
                ..Default::default()
            },
        ] {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }

    #[test]
    fn overrides_merge() {
        let o = ParamOverrides {
            beta: Some(2.0),
            seed: Some(9),
            ..Default::default()
        };
        let p = o.apply(&AcoParams::default());
        assert_eq!(p.beta, 2.0);
        assert_eq!(p.seed, 9);
        assert_eq!(p.alpha, 1.0);
    }
}
