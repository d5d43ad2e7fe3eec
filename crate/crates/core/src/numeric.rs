//! Small numeric helpers used throughout: stable log-sum-exp, logistic
//! functions, binary entropy, and weighted moments.

/// Floor applied to log-probabilities before exponentiation so that saturated
/// likelihoods never silently zero out a whole weight vector. The value sits
/// just above `ln(f64::MIN_POSITIVE subnormal)`.
pub const LOG_WEIGHT_FLOOR: f64 = -745.0;

pub const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// `log(sum(exp(x)))` with the usual max shift. Returns `-inf` for an empty
/// slice or when every entry is `-inf`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let s: f64 = xs.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}

/// Numerically stable logistic function `1 / (1 + exp(-z))`.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(sigmoid(z))`, stable for large `|z|`.
pub fn log_sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        -(-z).exp().ln_1p()
    } else {
        z - z.exp().ln_1p()
    }
}

/// Entropy of a Bernoulli(p) in nats, with `0 ln 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |q: f64| if q > 0.0 { -q * q.ln() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Log density of a normal distribution with standard deviation `sd`.
pub fn ln_normal_pdf(y: f64, mean: f64, sd: f64) -> f64 {
    let z = (y - mean) / sd;
    -0.5 * z * z - sd.ln() - 0.5 * LN_2PI
}

/// `n` evenly spaced points covering `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two points");
    let span = hi - lo;
    (0..n)
        .map(|i| lo + span * (i as f64) / ((n - 1) as f64))
        .collect()
}

/// Mean and (population) variance under normalized weights.
pub fn weighted_mean_var(values: impl Iterator<Item = (f64, f64)> + Clone) -> (f64, f64) {
    let mean: f64 = values.clone().map(|(w, v)| w * v).sum();
    let var: f64 = values.map(|(w, v)| w * (v - mean) * (v - mean)).sum();
    (mean, var.max(0.0))
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
