//! Conjugate Bayesian polynomial regression.
//!
//! Observations are modeled as `y ~ Normal(beta . phi_k(x), sigma^2)` with a
//! Gaussian prior `beta ~ Normal(M0, S0)`. After each observation the
//! posterior stays Gaussian with
//!
//! ```text
//! S_t = (S_{t-1}^-1 + phi phi^T / sigma^2)^-1
//! M_t = S_t (S_{t-1}^-1 M_{t-1} + phi y / sigma^2)
//! ```
//!
//! The one-step expected information gain has the closed form
//! `0.5 ln(sigma^2 + phi^T S_t phi) - ln(sigma)`, so maximizing it over
//! candidate designs reduces to maximizing the predictive quadratic form
//! `phi^T S_t phi` (Bayesian D-optimality). Because `S_t` never depends on
//! observed outcomes, the whole adaptive design sequence is determined by the
//! prior, `k`, `sigma`, and the candidate grid alone.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numeric::{linspace, ln_normal_pdf};
use crate::types::{ModelFamily, ParamVector, PriorSpec, TargetDistribution, TrueModel};

/// Degree-`k` polynomial feature expansion `[1, x, x^2, ..., x^k]`.
pub fn poly_features(degree: usize, x: f64) -> DVector<f64> {
    let mut phi = DVector::zeros(degree + 1);
    let mut p = 1.0;
    for j in 0..=degree {
        phi[j] = p;
        p *= x;
    }
    phi
}

/// Gaussian posterior over regression coefficients, parameterized by its mean
/// vector and covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPosterior {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianPosterior {
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        if cov.nrows() != cov.ncols() || cov.nrows() != mean.len() {
            return Err(Error::DimensionMismatch {
                context: "gaussian posterior",
                expected: mean.len(),
                got: cov.nrows(),
            });
        }
        if mean.iter().any(|v| !v.is_finite()) || cov.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "gaussian posterior state".to_string(),
            });
        }
        Ok(GaussianPosterior { mean, cov })
    }

    /// Build the initial state from a normal prior spec.
    pub fn from_prior(prior: &PriorSpec) -> Result<Self> {
        match prior {
            PriorSpec::Normal { mean, cov } => GaussianPosterior::new(
                DVector::from_vec(mean.clone()),
                cov.to_matrix(),
            ),
            PriorSpec::UniformBox => Err(Error::Invalid {
                name: "prior",
                message: "conjugate regression requires a normal prior".to_string(),
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn mean_param(&self) -> ParamVector {
        ParamVector::new(self.mean.iter().copied().collect())
    }
}

fn quadratic_form(cov: &DMatrix<f64>, phi: &DVector<f64>) -> f64 {
    // phi^T S phi; clamp round-off negatives since S is PSD.
    (cov * phi).dot(phi).max(0.0)
}

/// One conjugate Bayes update with a single `(phi, y)` observation.
///
/// Returns a new posterior; the input state is unchanged. Errors when the
/// current covariance is singular (the prior must be proper).
pub fn conjugate_update(
    post: &GaussianPosterior,
    sigma: f64,
    phi: &DVector<f64>,
    y: f64,
) -> Result<GaussianPosterior> {
    if phi.len() != post.dim() {
        return Err(Error::DimensionMismatch {
            context: "conjugate update features",
            expected: post.dim(),
            got: phi.len(),
        });
    }
    let chol_prev = Cholesky::new(post.cov.clone()).ok_or(Error::NotPositiveDefinite {
        context: "posterior covariance",
    })?;
    let precision_prev = chol_prev.inverse();
    let noise_precision = 1.0 / (sigma * sigma);

    let precision = &precision_prev + phi * phi.transpose() * noise_precision;
    let chol_new = Cholesky::new(precision).ok_or(Error::NotPositiveDefinite {
        context: "updated precision",
    })?;
    let mut cov = chol_new.inverse();
    // Symmetrize to suppress round-off drift across long update chains.
    cov = (&cov + cov.transpose()) * 0.5;

    let info = &precision_prev * &post.mean + phi * (y * noise_precision);
    let mean = &cov * info;
    GaussianPosterior::new(mean, cov)
}

/// Closed-form expected information gain of sampling at feature vector `phi`:
/// `0.5 ln(sigma^2 + phi^T S phi) - ln(sigma)`. Always non-negative.
pub fn eig_linear(post: &GaussianPosterior, sigma: f64, phi: &DVector<f64>) -> f64 {
    let q = quadratic_form(&post.cov, phi);
    0.5 * (sigma * sigma + q).ln() - sigma.ln()
}

/// Posterior predictive mean and variance of `y` at `phi`:
/// `Normal(M . phi, sigma^2 + phi^T S phi)`.
pub fn posterior_predictive(post: &GaussianPosterior, sigma: f64, phi: &DVector<f64>) -> (f64, f64) {
    let mean = post.mean.dot(phi);
    let var = sigma * sigma + quadratic_form(&post.cov, phi);
    (mean, var)
}

/// Log density of the posterior predictive at an observed `y`.
pub fn predictive_log_density(
    post: &GaussianPosterior,
    sigma: f64,
    phi: &DVector<f64>,
    y: f64,
) -> f64 {
    let (mean, var) = posterior_predictive(post, sigma, phi);
    ln_normal_pdf(y, mean, var.sqrt())
}

/// Number of fitting points for the least-squares risk minimizer.
pub const THETA_STAR_GRID: usize = 1001;

/// Best-fitting degree-`k` coefficients under the target distribution:
/// the least-squares fit of the true model's conditional mean on 1,001
/// evenly spaced points across the domain.
pub fn theta_star_ols(
    true_model: &TrueModel,
    degree: usize,
    domain: &TargetDistribution,
) -> Result<ParamVector> {
    let (lo, hi) = match domain {
        TargetDistribution::UniformContinuous { lo, hi } => (*lo, *hi),
        TargetDistribution::UniformDiscrete { .. } => {
            return Err(Error::Invalid {
                name: "theta_star_ols domain",
                message: "requires a continuous target distribution".to_string(),
            })
        }
    };
    let xs = linspace(lo, hi, THETA_STAR_GRID);

    // Fit on x/scale to keep the Vandermonde system well conditioned, then
    // rescale coefficients back: beta_j = beta'_j / scale^j.
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let mut design = DMatrix::zeros(xs.len(), degree + 1);
    let mut target = DVector::zeros(xs.len());
    for (i, &x) in xs.iter().enumerate() {
        let z = x / scale;
        let mut p = 1.0;
        for j in 0..=degree {
            design[(i, j)] = p;
            p *= z;
        }
        target[i] = true_mean(true_model, x)?;
    }

    let svd = design.svd(true, true);
    let max_sv = svd.singular_values.max();
    if svd.singular_values.iter().any(|s| *s <= max_sv * 1e-12) {
        return Err(Error::RankDeficient { degree });
    }
    let scaled = svd
        .solve(&target, max_sv * 1e-12)
        .map_err(|_| Error::RankDeficient { degree })?;

    let mut coeffs = Vec::with_capacity(degree + 1);
    let mut s = 1.0;
    for j in 0..=degree {
        coeffs.push(scaled[j] / s);
        s *= scale;
    }
    Ok(ParamVector::new(coeffs))
}

fn true_mean(true_model: &TrueModel, x: f64) -> Result<f64> {
    match &true_model.family {
        ModelFamily::GaussianLinear { degree, .. } => {
            let phi = poly_features(*degree, x);
            Ok(phi.dot(&DVector::from_vec(true_model.theta.as_slice().to_vec())))
        }
        _ => Err(Error::Invalid {
            name: "theta_star_ols true model",
            message: "requires a gaussian-linear generating model".to_string(),
        }),
    }
}

/// KL divergence between two univariate normals,
/// `KL(Normal(mu_f, sd_f^2) || Normal(mu_m, sd_m^2))`.
pub fn gaussian_kl(mu_f: f64, sd_f: f64, mu_m: f64, sd_m: f64) -> f64 {
    let ratio = sd_f / sd_m;
    let shift = (mu_f - mu_m) / sd_m;
    (sd_m / sd_f).ln() + 0.5 * (ratio * ratio + shift * shift) - 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::CovarianceSpec;
    use approx::assert_relative_eq;

    fn scalar_posterior(mean: f64, var: f64) -> GaussianPosterior {
        GaussianPosterior::new(
            DVector::from_vec(vec![mean]),
            DMatrix::from_vec(1, 1, vec![var]),
        )
        .unwrap()
    }

    #[test]
    fn poly_features_examples() {
        assert_eq!(poly_features(2, 3.0).as_slice(), &[1.0, 3.0, 9.0]);
        assert_eq!(poly_features(0, 7.0).as_slice(), &[1.0]);
        assert_eq!(poly_features(3, -2.0).as_slice(), &[1.0, -2.0, 4.0, -8.0]);
    }

    #[test]
    fn conjugate_update_scalar_case() {
        let post = scalar_posterior(0.0, 1.0);
        let phi = DVector::from_vec(vec![1.0]);
        let updated = conjugate_update(&post, 1.0, &phi, 2.0).unwrap();
        assert_relative_eq!(updated.cov()[(0, 0)], 0.5, epsilon = 1e-12);
        assert_relative_eq!(updated.mean()[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn conjugate_update_uninformative_at_huge_sigma() {
        let prior = GaussianPosterior::new(
            DVector::from_vec(vec![1.0, -2.0]),
            DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 9.0])),
        )
        .unwrap();
        let phi = poly_features(1, 3.0);
        let updated = conjugate_update(&prior, 1e6, &phi, 5.0).unwrap();
        for i in 0..2 {
            assert_relative_eq!(updated.mean()[i], prior.mean()[i], max_relative = 1e-6);
            for j in 0..2 {
                let a = updated.cov()[(i, j)];
                let b = prior.cov()[(i, j)];
                assert!((a - b).abs() <= 1e-6 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn conjugate_update_rejects_singular_prior() {
        let post = scalar_posterior(0.0, 0.0);
        let phi = DVector::from_vec(vec![1.0]);
        assert!(matches!(
            conjugate_update(&post, 1.0, &phi, 0.0),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn eig_zero_when_no_parameter_uncertainty() {
        let post = scalar_posterior(2.0, 0.0);
        let phi = DVector::from_vec(vec![1.0]);
        assert_relative_eq!(eig_linear(&post, 1.0, &phi), 0.0, epsilon = 1e-12);
        assert_relative_eq!(eig_linear(&post, 7.5, &phi), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn eig_direct_substitution() {
        let post = scalar_posterior(0.0, 3.0);
        let phi = DVector::from_vec(vec![1.0]);
        assert_relative_eq!(
            eig_linear(&post, 1.0, &phi),
            0.5 * 4.0_f64.ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn eig_monotone_in_quadratic_form() {
        let phi = DVector::from_vec(vec![1.0]);
        let mut last = f64::NEG_INFINITY;
        for var in [0.0, 0.5, 1.0, 4.0, 25.0] {
            let eig = eig_linear(&scalar_posterior(0.0, var), 2.0, &phi);
            assert!(eig > last || (eig == 0.0 && last == f64::NEG_INFINITY));
            assert!(eig >= 0.0);
            last = eig;
        }
    }

    #[test]
    fn predictive_examples() {
        let (m, v) = posterior_predictive(&scalar_posterior(2.0, 0.0), 1.0, &DVector::from_vec(vec![1.0]));
        assert_relative_eq!(m, 2.0);
        assert_relative_eq!(v, 1.0);

        let post = GaussianPosterior::new(
            DVector::from_vec(vec![0.0, 1.0]),
            DMatrix::from_diagonal(&DVector::from_vec(vec![0.0, 1.0])),
        )
        .unwrap();
        let (m, v) = posterior_predictive(&post, 0.5, &DVector::from_vec(vec![1.0, 2.0]));
        assert_relative_eq!(m, 2.0);
        assert_relative_eq!(v, 4.25);
    }

    #[test]
    fn predictive_variance_shrinks_at_observed_design() {
        let prior = GaussianPosterior::new(
            DVector::from_vec(vec![0.0, 0.0]),
            DMatrix::from_diagonal(&DVector::from_vec(vec![100.0, 10.0])),
        )
        .unwrap();
        let phi = poly_features(1, 4.0);
        let (_, before) = posterior_predictive(&prior, 2.0, &phi);
        let updated = conjugate_update(&prior, 2.0, &phi, 1.0).unwrap();
        let (_, after) = posterior_predictive(&updated, 2.0, &phi);
        assert!(after < before);
    }

    #[test]
    fn covariance_stays_positive_definite_under_updates() {
        let mut post = GaussianPosterior::new(
            DVector::from_vec(vec![0.0, 0.0, 0.0]),
            DMatrix::from_diagonal(&DVector::from_vec(vec![100.0, 10.0, 0.1])),
        )
        .unwrap();
        for i in 0..50 {
            let x = (i % 11) as f64 * 10.0;
            let phi = poly_features(2, x);
            post = conjugate_update(&post, 100.0, &phi, x * x * 0.1).unwrap();
            assert!(
                Cholesky::new(post.cov().clone()).is_some(),
                "covariance lost positive definiteness at step {i}"
            );
        }
    }

    fn quadratic_truth() -> TrueModel {
        TrueModel::new(
            ModelFamily::GaussianLinear {
                degree: 2,
                sigma: 100.0,
            },
            ParamVector::new(vec![0.0, 0.0, 1.0]),
        )
        .unwrap()
    }

    #[test]
    fn theta_star_recovers_well_specified_quadratic() {
        let domain = TargetDistribution::UniformContinuous { lo: 0.0, hi: 100.0 };
        let star = theta_star_ols(&quadratic_truth(), 2, &domain).unwrap();
        for (got, want) in star.as_slice().iter().zip([0.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-8, "got {got}, want {want}");
        }
    }

    #[test]
    fn theta_star_recovers_cubic_coefficients() {
        let truth = TrueModel::new(
            ModelFamily::GaussianLinear {
                degree: 3,
                sigma: 100.0,
            },
            ParamVector::new(vec![2.0, -1.5, 0.3, 0.04]),
        )
        .unwrap();
        let domain = TargetDistribution::UniformContinuous { lo: 0.0, hi: 100.0 };
        let star = theta_star_ols(&truth, 3, &domain).unwrap();
        for (got, want) in star.as_slice().iter().zip([2.0, -1.5, 0.3, 0.04]) {
            assert!((got - want).abs() < 1e-8, "got {got}, want {want}");
        }
    }

    #[test]
    fn theta_star_underparameterized_fit_of_quadratic() {
        // Linear fit of E[y|x] = x^2 on the 1,001-point grid over [0, 100].
        // The grid moments give slope exactly 100 and intercept -1665.
        let domain = TargetDistribution::UniformContinuous { lo: 0.0, hi: 100.0 };
        let star = theta_star_ols(&quadratic_truth(), 1, &domain).unwrap();
        assert_relative_eq!(star.get(1), 100.0, max_relative = 1e-9);
        assert_relative_eq!(star.get(0), -1665.0, max_relative = 1e-9);
    }

    #[test]
    fn theta_star_nested_bases_do_not_increase_grid_mse() {
        let truth = quadratic_truth();
        let domain = TargetDistribution::UniformContinuous { lo: 0.0, hi: 100.0 };
        let xs = linspace(0.0, 100.0, THETA_STAR_GRID);
        let mse = |theta: &ParamVector, k: usize| -> f64 {
            xs.iter()
                .map(|&x| {
                    let fit = poly_features(k, x)
                        .dot(&DVector::from_vec(theta.as_slice().to_vec()));
                    let e = fit - x * x;
                    e * e
                })
                .sum::<f64>()
                / xs.len() as f64
        };
        let mut last = f64::INFINITY;
        for k in 0..=3 {
            let star = theta_star_ols(&truth, k, &domain).unwrap();
            let err = mse(&star, k);
            assert!(err <= last + 1e-6, "degree {k} worsened grid MSE");
            last = err;
        }
    }

    #[test]
    fn theta_star_rejects_discrete_domain() {
        let domain = TargetDistribution::UniformDiscrete {
            designs: vec![crate::types::Design::scalar(1.0).unwrap()],
        };
        assert!(theta_star_ols(&quadratic_truth(), 1, &domain).is_err());
    }

    #[test]
    fn gaussian_kl_examples() {
        assert_relative_eq!(gaussian_kl(1.0, 2.0, 1.0, 2.0), 0.0, epsilon = 1e-15);
        assert_relative_eq!(gaussian_kl(1.0, 1.0, 0.0, 1.0), 0.5, epsilon = 1e-12);
        assert_relative_eq!(
            gaussian_kl(0.0, 100.0, 0.0, 1000.0),
            10.0_f64.ln() + 0.005 - 0.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn gaussian_kl_nonnegative_with_equality_iff_equal() {
        let params = [
            (0.0, 1.0, 0.0, 1.0),
            (1.0, 2.0, -1.0, 0.5),
            (3.0, 0.1, 3.0, 0.2),
            (-5.0, 10.0, -5.0, 10.0),
        ];
        for (mf, sf, mm, sm) in params {
            let kl = gaussian_kl(mf, sf, mm, sm);
            assert!(kl >= -1e-12);
            if mf == mm && sf == sm {
                assert!(kl.abs() < 1e-12);
            } else {
                assert!(kl > 1e-12);
            }
        }
    }

    #[test]
    fn prior_construction_from_spec() {
        let prior = PriorSpec::Normal {
            mean: vec![0.0, 0.0],
            cov: CovarianceSpec::Diagonal(vec![100.0, 10.0]),
        };
        let post = GaussianPosterior::from_prior(&prior).unwrap();
        assert_eq!(post.dim(), 2);
        assert_eq!(post.cov()[(0, 0)], 100.0);
        assert!(GaussianPosterior::from_prior(&PriorSpec::UniformBox).is_err());
    }
}
