//! Binary-outcome likelihood families: logistic-linked polynomial
//! classification and EUT/CPT preference models over two-outcome gambles.
//!
//! A gamble `<[p, G, 1-p, L], 0>` offers gain `G > 0` with probability `p`
//! and loss `L < 0` otherwise, against a certain outcome of nothing. Both
//! preference families map a gamble to a scalar valuation `V` and link it to
//! the probability of choosing the gamble with
//! `P = 1 / (1 + exp(-epsilon * V))`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::sigmoid;
use crate::types::Design;

/// A two-outcome gamble: gain `G > 0` with probability `p`, loss `L < 0`
/// with probability `1 - p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gamble {
    pub p: f64,
    pub gain: f64,
    pub loss: f64,
}

impl Gamble {
    pub fn new(p: f64, gain: f64, loss: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) || !(gain > 0.0) || !(loss < 0.0) {
            return Err(Error::Invalid {
                name: "gamble",
                message: format!("need p in (0,1), gain > 0, loss < 0; got ({p}, {gain}, {loss})"),
            });
        }
        Ok(Gamble { p, gain, loss })
    }

    /// Parse a `[p, G, L]` design vector.
    pub fn from_design(design: &Design) -> Result<Self> {
        let s = design.as_slice();
        if s.len() != 3 {
            return Err(Error::DimensionMismatch {
                context: "gamble design",
                expected: 3,
                got: s.len(),
            });
        }
        Gamble::new(s[0], s[1], s[2])
    }

    pub fn to_design(self) -> Design {
        Design::new(vec![self.p, self.gain, self.loss]).expect("gamble fields are finite")
    }
}

/// Number of gambles in a generated design space.
pub const GAMBLE_SPACE_SIZE: usize = 200;

/// A randomly generated discrete design space of gambles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GambleDesignSpace {
    pub gambles: Vec<Gamble>,
    pub seed: u64,
}

impl GambleDesignSpace {
    pub fn designs(&self) -> Vec<Design> {
        self.gambles.iter().map(|g| g.to_design()).collect()
    }
}

/// Attribute ranges for generated gambles: `p ~ U(0.05, 0.95)`,
/// `G ~ U(1, 100)`, `L ~ U(-100, -1)`.
pub fn generate_gamble_space(seed: u64) -> GambleDesignSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gambles = (0..GAMBLE_SPACE_SIZE)
        .map(|_| {
            let p = rng.random_range(0.05..0.95);
            let gain = rng.random_range(1.0..100.0);
            let loss = rng.random_range(-100.0..-1.0);
            Gamble::new(p, gain, loss).expect("ranges satisfy gamble invariants")
        })
        .collect();
    GambleDesignSpace { gambles, seed }
}

/// EUT parameters: risk-attitude exponent `alpha` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EutParams {
    pub alpha: f64,
}

/// CPT parameters: EUT's `alpha` plus the Prelec weighting exponent `gamma`
/// in `[0, 1]` and a loss-aversion multiplier `lambda` in `[1, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CptParams {
    pub alpha: f64,
    pub gamma: f64,
    pub lambda: f64,
}

/// Logistic choice function `P = 1 / (1 + exp(-epsilon * V))`.
pub fn logistic_choice_prob(epsilon: f64, valuation: f64) -> f64 {
    sigmoid(epsilon * valuation)
}

/// EUT valuation `V = p G^alpha - (1 - p) (-L)^alpha`.
pub fn eut_value(params: EutParams, g: &Gamble) -> f64 {
    g.p * g.gain.powf(params.alpha) - (1.0 - g.p) * (-g.loss).powf(params.alpha)
}

/// Prelec probability weighting `w(p) = exp(-(-ln p)^gamma)`.
///
/// Defined for `p in (0, 1]`; `p = 0` is an error since `-ln 0` diverges.
pub fn prelec_weight(gamma: f64, p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Invalid {
            name: "prelec weight",
            message: format!("p must be in (0, 1], got {p}"),
        });
    }
    Ok((-(-p.ln()).powf(gamma)).exp())
}

/// CPT valuation `V = w(p) G^alpha - w(1 - p) lambda (-L)^alpha`.
pub fn cpt_value(params: CptParams, g: &Gamble) -> Result<f64> {
    let w_gain = prelec_weight(params.gamma, g.p)?;
    let w_loss = prelec_weight(params.gamma, 1.0 - g.p)?;
    Ok(w_gain * g.gain.powf(params.alpha)
        - w_loss * params.lambda * (-g.loss).powf(params.alpha))
}

/// Probability of `y = 1` under a logistic-linked degree-`k` polynomial:
/// `sigmoid(epsilon * sum_j beta_j x^j)`.
pub fn classify_prob(beta: &[f64], epsilon: f64, x: f64) -> f64 {
    let mut logit = 0.0;
    let mut p = 1.0;
    for b in beta {
        logit += b * p;
        p *= x;
    }
    sigmoid(epsilon * logit)
}

/// KL divergence between Bernoulli distributions,
/// `KL(Bern(p_true) || Bern(p_model))`, with `0 ln 0 = 0`.
///
/// A degenerate model probability (exactly 0 or 1) that disagrees with
/// `p_true` has infinite divergence and is reported as an error.
pub fn bernoulli_kl(p_true: f64, p_model: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_true) || !(0.0..=1.0).contains(&p_model) {
        return Err(Error::Invalid {
            name: "bernoulli kl",
            message: format!("probabilities out of range: ({p_true}, {p_model})"),
        });
    }
    let term = |p: f64, q: f64| -> Result<f64> {
        if p == 0.0 {
            Ok(0.0)
        } else if q == 0.0 {
            Err(Error::InfiniteDivergence { p_true, p_model })
        } else {
            Ok(p * (p / q).ln())
        }
    };
    Ok((term(p_true, p_model)? + term(1.0 - p_true, 1.0 - p_model)?).max(0.0))
}
