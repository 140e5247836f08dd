//! Edge-probability functions and random graph samplers.

mod bernoulli;
mod fk;

pub use bernoulli::{
    sample_bernoulli, sample_coupled, sample_site_bond, sprinkle, CoupledSample, SiteBondSample,
};
pub(crate) use fk::enumerate_weights as fk_weights_filtered;
pub use fk::{
    fk_exact_distribution, fk_log_weight, fk_sample_mcmc, fk_weight, heat_bath_open_prob, FkChain,
    ENUMERATION_PAIR_LIMIT,
};

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::Interval;

/// Parameters shared by every sampler: interaction exponent α, inverse
/// temperature β, cluster weight q and sprinkling strength δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    pub q: f64,
    pub delta: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, beta: f64, q: f64, delta: f64) -> Result<Self> {
        let p = Self {
            alpha,
            beta,
            q,
            delta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 1.0) || !self.alpha.is_finite() {
            return invalid(format!("alpha > 1 violated (alpha = {})", self.alpha));
        }
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return invalid(format!("beta >= 0 violated (beta = {})", self.beta));
        }
        if !(self.q >= 1.0) || !self.q.is_finite() {
            return invalid(format!("q >= 1 violated (q = {})", self.q));
        }
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return invalid(format!("delta >= 0 violated (delta = {})", self.delta));
        }
        Ok(())
    }

    /// Dyson edge probabilities at this β.
    pub fn edge_fn(&self) -> EdgeProbFn {
        EdgeProbFn::Dyson {
            beta: self.beta,
            alpha: self.alpha,
        }
    }

    pub fn with_beta(self, beta: f64) -> Self {
        Self { beta, ..self }
    }
}

/// `J(d) = d^{−α}`.
pub fn dyson_coupling(d: u64, alpha: f64) -> f64 {
    (d as f64).powf(-alpha)
}

/// `1 − exp(−x)` without cancellation for small `x`.
pub fn one_minus_exp_neg(x: f64) -> f64 {
    -(-x).exp_m1()
}

/// An edge-probability function `p(ij)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum EdgeProbFn {
    /// `1 − exp(−β |i−j|^{−α})`.
    Dyson { beta: f64, alpha: f64 },
    /// The same probability for every pair.
    Constant(f64),
    /// `p(ij)·1{i,j ∈ V}`.
    Restricted(Box<EdgeProbFn>, Interval),
}

impl EdgeProbFn {
    pub fn dyson(beta: f64, alpha: f64) -> Result<Self> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return invalid(format!("beta >= 0 violated (beta = {beta})"));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return invalid(format!("alpha > 0 violated (alpha = {alpha})"));
        }
        Ok(Self::Dyson { beta, alpha })
    }

    pub fn constant(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return invalid(format!("probability in [0, 1] violated (p = {p})"));
        }
        Ok(Self::Constant(p))
    }

    pub fn restricted(self, v: Interval) -> Self {
        Self::Restricted(Box::new(self), v)
    }

    pub fn prob(&self, i: i64, j: i64) -> Result<f64> {
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        Ok(self.prob_unchecked(i, j))
    }

    pub(crate) fn prob_unchecked(&self, i: i64, j: i64) -> f64 {
        match self {
            Self::Restricted(inner, v) => {
                if v.contains(i) && v.contains(j) {
                    inner.prob_unchecked(i, j)
                } else {
                    0.0
                }
            }
            _ => self.translation_law().prob(i.abs_diff(j)),
        }
    }

    fn translation_law(&self) -> DistanceLaw {
        match *self {
            Self::Dyson { beta, alpha } => DistanceLaw::Dyson { beta, alpha },
            Self::Constant(p) => DistanceLaw::Constant(p),
            Self::Restricted(ref inner, _) => inner.translation_law(),
        }
    }

    /// Splits into a translation-invariant law and the interval it acts on
    /// inside `v`.
    pub(crate) fn resolve(&self, v: Interval) -> (DistanceLaw, Interval) {
        match self {
            Self::Restricted(inner, r) => inner.resolve(v.intersect(r)),
            _ => (self.translation_law(), v),
        }
    }
}

/// `p(i, j)` for `i ≠ j`.
pub fn edge_prob(f: &EdgeProbFn, i: i64, j: i64) -> Result<f64> {
    f.prob(i, j)
}

/// A probability depending only on the distance `|i − j|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum DistanceLaw {
    Dyson { beta: f64, alpha: f64 },
    Constant(f64),
}

impl DistanceLaw {
    pub(crate) fn prob(&self, d: u64) -> f64 {
        match *self {
            Self::Dyson { beta, alpha } => one_minus_exp_neg(beta * dyson_coupling(d, alpha)),
            Self::Constant(p) => p,
        }
    }

    /// `ln(1 − p(d))`, exact for the Dyson form.
    pub(crate) fn log_not(&self, d: u64) -> f64 {
        match *self {
            Self::Dyson { beta, alpha } => -beta * dyson_coupling(d, alpha),
            Self::Constant(p) => (-p).ln_1p(),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        match *self {
            Self::Dyson { beta, .. } => beta == 0.0,
            Self::Constant(p) => p == 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyson_values() {
        let f = EdgeProbFn::dyson(0.0, 1.5).unwrap();
        assert_eq!(edge_prob(&f, 3, 9).unwrap(), 0.0);

        let f = EdgeProbFn::dyson(2f64.ln(), 3.7).unwrap();
        assert!((edge_prob(&f, 5, 4).unwrap() - 0.5).abs() < 1e-15);

        let f = EdgeProbFn::dyson(1.0, 1.5).unwrap();
        let p = edge_prob(&f, 0, 4).unwrap();
        assert!((p - (1.0 - (-0.125f64).exp())).abs() < 1e-15);
        assert!((p - 0.117503).abs() < 1e-6);
        assert_eq!(edge_prob(&f, 2, 2), Err(Error::SelfLoop(2)));
    }

    #[test]
    fn far_pairs_do_not_underflow() {
        let f = EdgeProbFn::dyson(1.0, 1.5).unwrap();
        let p = edge_prob(&f, 0, 1 << 40).unwrap();
        assert!(p > 0.0);
        assert!((p / 2f64.powf(-60.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn restriction_zeroes_outside() {
        let v = Interval::new(2, 5).unwrap();
        let f = EdgeProbFn::constant(0.3).unwrap().restricted(v);
        assert_eq!(f.prob(2, 4).unwrap(), 0.3);
        assert_eq!(f.prob(1, 4).unwrap(), 0.0);
        assert_eq!(f.prob(4, 5).unwrap(), 0.0);
    }

    #[test]
    fn params_validation_names_constraint() {
        let e = ModelParams::new(1.0, 1.0, 1.0, 0.0).unwrap_err();
        assert!(e.to_string().contains("alpha > 1"));
        let e = ModelParams::new(1.5, 1.0, 0.5, 0.0).unwrap_err();
        assert!(e.to_string().contains("q >= 1"));
        let e = ModelParams::new(1.5, -1.0, 1.0, 0.0).unwrap_err();
        assert!(e.to_string().contains("beta >= 0"));
        assert!(ModelParams::new(1.5, 1.0, 2.0, 0.1).is_ok());
    }
}
