use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// A probability table over all subsets of a small ordered pair universe.
/// Bit `k` of a state index is the indicator of `pairs[k]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteGraphLaw {
    pairs: Vec<(i64, i64)>,
    probs: Vec<f64>,
}

const NORMALIZATION_TOL: f64 = 1e-12;

impl DiscreteGraphLaw {
    pub fn new(pairs: Vec<(i64, i64)>, probs: Vec<f64>) -> Result<Self> {
        if pairs.len() >= usize::BITS as usize || probs.len() != 1usize << pairs.len() {
            return Err(Error::LengthMismatch {
                expected: 1usize.checked_shl(pairs.len() as u32).unwrap_or(0),
                got: probs.len(),
            });
        }
        if probs.iter().any(|&p| !(p >= 0.0)) {
            return invalid("law entries must be nonnegative");
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return invalid(format!("law sums to {total}, not 1"));
        }
        Ok(Self { pairs, probs })
    }

    pub(crate) fn from_weights(pairs: Vec<(i64, i64)>, mut weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::ZeroProbabilityCondition);
        }
        weights.iter_mut().for_each(|w| *w /= total);
        Ok(Self {
            pairs,
            probs: weights,
        })
    }

    /// Independent pairs with the given open probabilities.
    pub fn product(pairs: Vec<(i64, i64)>, marginals: &[f64]) -> Result<Self> {
        if marginals.len() != pairs.len() {
            return Err(Error::LengthMismatch {
                expected: pairs.len(),
                got: marginals.len(),
            });
        }
        let probs = (0..1usize << pairs.len())
            .map(|s| {
                marginals
                    .iter()
                    .enumerate()
                    .map(|(k, &p)| if s >> k & 1 == 1 { p } else { 1.0 - p })
                    .product()
            })
            .collect();
        Ok(Self { pairs, probs })
    }

    pub fn pairs(&self) -> &[(i64, i64)] {
        &self.pairs
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn state_count(&self) -> usize {
        self.probs.len()
    }

    /// P(pair `k` open).
    pub fn marginal(&self, k: usize) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .filter(|(s, _)| s >> k & 1 == 1)
            .map(|(_, p)| p)
            .sum()
    }

    /// Mass of the up-closure of `generators`.
    pub fn upset_mass(&self, generators: &[usize]) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .filter(|(s, _)| generators.iter().any(|&g| g & s == g))
            .map(|(_, p)| p)
            .sum()
    }

    pub fn tv_distance(&self, other: &Self) -> Result<f64> {
        self.same_universe(other)?;
        Ok(0.5
            * self
                .probs
                .iter()
                .zip(&other.probs)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>())
    }

    /// Law of `G ∪ H` for independent `G ~ self`, `H ~ other`.
    pub fn union_independent(&self, other: &Self) -> Result<Self> {
        self.same_universe(other)?;
        let mut probs = vec![0.0; self.probs.len()];
        for (a, &pa) in self.probs.iter().enumerate() {
            if pa == 0.0 {
                continue;
            }
            for (b, &pb) in other.probs.iter().enumerate() {
                probs[a | b] += pa * pb;
            }
        }
        Ok(Self {
            pairs: self.pairs.clone(),
            probs,
        })
    }

    pub(crate) fn same_universe(&self, other: &Self) -> Result<()> {
        if self.pairs == other.pairs {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_marginals_and_union() {
        let pairs = vec![(0, 1), (0, 2)];
        let a = DiscreteGraphLaw::product(pairs.clone(), &[0.2, 0.5]).unwrap();
        let b = DiscreteGraphLaw::product(pairs.clone(), &[0.5, 0.1]).unwrap();
        assert!((a.marginal(0) - 0.2).abs() < 1e-15);
        let u = a.union_independent(&b).unwrap();
        assert!((u.marginal(0) - 0.6).abs() < 1e-15);
        assert!((u.marginal(1) - 0.55).abs() < 1e-15);
        assert!((u.upset_mass(&[0b01, 0b10]) - (1.0 - 0.4 * 0.45)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(DiscreteGraphLaw::new(vec![(0, 1)], vec![0.5]).is_err());
        assert!(DiscreteGraphLaw::new(vec![(0, 1)], vec![0.5, 0.6]).is_err());
        assert!(DiscreteGraphLaw::new(vec![(0, 1)], vec![1.5, -0.5]).is_err());
        let a = DiscreteGraphLaw::new(vec![(0, 1)], vec![0.5, 0.5]).unwrap();
        let b = DiscreteGraphLaw::new(vec![(0, 2)], vec![0.5, 0.5]).unwrap();
        assert_eq!(a.tv_distance(&b), Err(Error::UniverseMismatch));
    }
}
