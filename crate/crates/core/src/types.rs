//! Shared domain types: designs, outcomes, parameter vectors and spaces,
//! model families, priors, and target distributions.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An experimental input. Scalar `x` for regression and classification, a
/// `[p, G, L]` gamble attribute vector for preference learning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Design(Vec<f64>);

impl Design {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "design vector".to_string(),
            });
        }
        Ok(Design(values))
    }

    pub fn scalar(x: f64) -> Result<Self> {
        Design::new(vec![x])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// The single coordinate of a one-dimensional design.
    pub fn as_scalar(&self) -> Result<f64> {
        if self.0.len() != 1 {
            return Err(Error::DimensionMismatch {
                context: "scalar design",
                expected: 1,
                got: self.0.len(),
            });
        }
        Ok(self.0[0])
    }
}

/// A single observed response. Real-valued for regression, `{0, 1}` for the
/// binary-outcome families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outcome(f64);

impl Outcome {
    pub fn continuous(y: f64) -> Result<Self> {
        if !y.is_finite() {
            return Err(Error::NonFinite {
                context: "outcome".to_string(),
            });
        }
        Ok(Outcome(y))
    }

    pub fn binary(choice: bool) -> Self {
        Outcome(if choice { 1.0 } else { 0.0 })
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// `true` when the outcome is a valid binary observation.
    pub fn is_binary(&self) -> bool {
        self.0 == 0.0 || self.0 == 1.0
    }
}

/// A point in a model class's parameter space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamVector(Vec<f64>);

impl ParamVector {
    pub fn new(values: Vec<f64>) -> Self {
        ParamVector(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }
}

impl From<Vec<f64>> for ParamVector {
    fn from(values: Vec<f64>) -> Self {
        ParamVector(values)
    }
}

/// Per-coordinate box bounds. Coordinates may be unbounded
/// (`-inf`/`+inf`), as for regression coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSpace {
    bounds: Vec<(f64, f64)>,
}

impl ParamSpace {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        for (lo, hi) in &bounds {
            if lo > hi || lo.is_nan() || hi.is_nan() {
                return Err(Error::Invalid {
                    name: "param space",
                    message: format!("bad bound ({lo}, {hi})"),
                });
            }
        }
        Ok(ParamSpace { bounds })
    }

    /// Fully unbounded space of the given dimension.
    pub fn unbounded(dim: usize) -> Self {
        ParamSpace {
            bounds: vec![(f64::NEG_INFINITY, f64::INFINITY); dim],
        }
    }

    /// `[0, 1]^dim` box.
    pub fn unit_box(dim: usize) -> Self {
        ParamSpace {
            bounds: vec![(0.0, 1.0); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn contains(&self, theta: &ParamVector) -> bool {
        theta.len() == self.bounds.len()
            && theta
                .as_slice()
                .iter()
                .zip(&self.bounds)
                .all(|(v, (lo, hi))| v >= lo && v <= hi)
    }

    /// Clamp a point coordinate-wise into the box.
    pub fn clamp(&self, values: &mut [f64]) {
        for (v, (lo, hi)) in values.iter_mut().zip(&self.bounds) {
            *v = v.clamp(*lo, *hi);
        }
    }
}

/// The likelihood family of a hypothesized (or generating) model class.
///
/// Fixed hyperparameters live here: polynomial degree `k`, the regression
/// noise standard deviation `sigma`, and the choice sensitivity `epsilon`
/// linking valuations or logits to binary outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelFamily {
    /// `y | x ~ Normal(theta . phi_k(x), sigma^2)`.
    GaussianLinear { degree: usize, sigma: f64 },
    /// `y | x ~ Bernoulli(sigmoid(epsilon * theta . phi_k(x)))`.
    LogisticPoly { degree: usize, epsilon: f64 },
    /// Expected-utility gamble valuation with power utility, a single
    /// risk-attitude parameter `alpha`.
    Eut { epsilon: f64 },
    /// Two-outcome cumulative prospect theory: Prelec probability weighting
    /// (`gamma`) and loss aversion (`lambda`) on top of power utility.
    Cpt { epsilon: f64 },
}

impl ModelFamily {
    /// Number of free parameters of the class.
    pub fn param_len(&self) -> usize {
        match self {
            ModelFamily::GaussianLinear { degree, .. }
            | ModelFamily::LogisticPoly { degree, .. } => degree + 1,
            ModelFamily::Eut { .. } => 1,
            ModelFamily::Cpt { .. } => 3,
        }
    }

    /// Whether outcomes are `{0, 1}` choices.
    pub fn is_binary(&self) -> bool {
        !matches!(self, ModelFamily::GaussianLinear { .. })
    }

    /// Validate the fixed hyperparameters.
    pub fn validate(&self) -> Result<()> {
        let check = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Invalid {
                    name,
                    message: format!("must be positive and finite, got {v}"),
                })
            }
        };
        match self {
            ModelFamily::GaussianLinear { sigma, .. } => check("sigma", *sigma),
            ModelFamily::LogisticPoly { epsilon, .. }
            | ModelFamily::Eut { epsilon }
            | ModelFamily::Cpt { epsilon } => check("epsilon", *epsilon),
        }
    }
}

/// Prior distribution over a model class's parameters. Only the two forms
/// actually used are supported: multivariate normal for regression-style
/// coefficients and uniform over the parameter-space box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PriorSpec {
    Normal {
        mean: Vec<f64>,
        #[serde(flatten)]
        cov: CovarianceSpec,
    },
    UniformBox,
}

/// Diagonal or full covariance for a normal prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CovarianceSpec {
    #[serde(rename = "var")]
    Diagonal(Vec<f64>),
    #[serde(rename = "cov")]
    Full(Vec<Vec<f64>>),
}

impl CovarianceSpec {
    pub fn dim(&self) -> usize {
        match self {
            CovarianceSpec::Diagonal(v) => v.len(),
            CovarianceSpec::Full(rows) => rows.len(),
        }
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        match self {
            CovarianceSpec::Diagonal(v) => {
                DMatrix::from_diagonal(&DVector::from_vec(v.clone()))
            }
            CovarianceSpec::Full(rows) => {
                let n = rows.len();
                DMatrix::from_fn(n, n, |i, j| rows[i][j])
            }
        }
    }
}

impl PriorSpec {
    pub fn validate(&self, space: &ParamSpace) -> Result<()> {
        match self {
            PriorSpec::Normal { mean, cov } => {
                if mean.len() != cov.dim() {
                    return Err(Error::DimensionMismatch {
                        context: "normal prior",
                        expected: mean.len(),
                        got: cov.dim(),
                    });
                }
                if mean.len() != space.dim() {
                    return Err(Error::DimensionMismatch {
                        context: "prior vs param space",
                        expected: space.dim(),
                        got: mean.len(),
                    });
                }
                if nalgebra::Cholesky::new(cov.to_matrix()).is_none() {
                    return Err(Error::NotPositiveDefinite {
                        context: "normal prior covariance",
                    });
                }
                Ok(())
            }
            PriorSpec::UniformBox => {
                let proper = space
                    .bounds()
                    .iter()
                    .all(|(lo, hi)| lo.is_finite() && hi.is_finite() && lo < hi);
                if proper {
                    Ok(())
                } else {
                    Err(Error::Invalid {
                        name: "uniform prior",
                        message: "requires a bounded parameter space".to_string(),
                    })
                }
            }
        }
    }
}

/// A hypothesized model class: likelihood family, parameter space, and prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub family: ModelFamily,
    pub param_space: ParamSpace,
    pub prior: PriorSpec,
}

impl ModelSpec {
    pub fn new(family: ModelFamily, param_space: ParamSpace, prior: PriorSpec) -> Result<Self> {
        family.validate()?;
        if param_space.dim() != family.param_len() {
            return Err(Error::DimensionMismatch {
                context: "model spec param space",
                expected: family.param_len(),
                got: param_space.dim(),
            });
        }
        prior.validate(&param_space)?;
        Ok(ModelSpec {
            family,
            param_space,
            prior,
        })
    }
}

/// The generating conditional distribution: a fully determined model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrueModel {
    pub family: ModelFamily,
    pub theta: ParamVector,
}

impl TrueModel {
    pub fn new(family: ModelFamily, theta: ParamVector) -> Result<Self> {
        family.validate()?;
        if theta.len() != family.param_len() {
            return Err(Error::DimensionMismatch {
                context: "true model parameters",
                expected: family.param_len(),
                got: theta.len(),
            });
        }
        Ok(TrueModel { family, theta })
    }
}

/// The target distribution `g` of inputs the modeler ultimately cares about.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TargetDistribution {
    UniformContinuous { lo: f64, hi: f64 },
    UniformDiscrete { designs: Vec<Design> },
}

impl TargetDistribution {
    pub fn validate(&self) -> Result<()> {
        match self {
            TargetDistribution::UniformContinuous { lo, hi } => {
                if lo.is_finite() && hi.is_finite() && lo < hi {
                    Ok(())
                } else {
                    Err(Error::Invalid {
                        name: "target distribution",
                        message: format!("need finite lo < hi, got ({lo}, {hi})"),
                    })
                }
            }
            TargetDistribution::UniformDiscrete { designs } => {
                if designs.is_empty() {
                    Err(Error::Invalid {
                        name: "target distribution",
                        message: "discrete design list is empty".to_string(),
                    })
                } else {
                    Ok(())
                }
            }
        }
    }
}
