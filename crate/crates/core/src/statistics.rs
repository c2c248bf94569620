//! Exponent estimation: tail fits of the excitation-size distribution,
//! finite-size scaling fits with an exponential correction, winding-angle
//! slopes, epsilon-coupling exponents and the relations between them.

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use rand::Rng;
use statrs::distribution::{ContinuousCDF, FisherSnedecor};

use crate::error::StatsError;
use crate::rng::{mix_seed, SplitMix64};

/// Minimum number of samples for a CCDF.
pub const MIN_CCDF_SAMPLES: usize = 100;
/// Minimum number of distinct CCDF points inside a tail window.
pub const MIN_WINDOW_POINTS: usize = 8;
pub const DEFAULT_RESAMPLES: usize = 200;
/// Upper end of the small-epsilon regime used for beta and tau.
pub const DEFAULT_EPSILON_CUT: f64 = 0.3;
/// Significance level for keeping the finite-size correction term.
pub const CORRECTION_SIGNIFICANCE: f64 = 0.05;

/// Stream tag of the tail-fit bootstrap.
const TAIL_BOOTSTRAP_STREAM: u64 = 0x7a11;

const EFFECTIVE_VARIANCE_ROUNDS: usize = 4;

const LM_TOLERANCE: f64 = 1e-8;
const LM_MAX_ITERATIONS: usize = 500;

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub exponent: f64,
    pub std_error: f64,
    pub intercept: f64,
    /// Amplitude and rate of the `c * exp(-d x)` term, when it was kept.
    pub correction: Option<(f64, f64)>,
    pub window: (f64, f64),
    pub residual_rms: f64,
    pub n_points: usize,
}

impl FitResult {
    /// Machine-readable `key=value` lines.
    pub fn to_kv(&self, name: &str) -> String {
        let mut s = format!(
            "{name}.exponent={:.10}\n{name}.std_error={:.10}\n{name}.window_lo={}\n{name}.window_hi={}\n{name}.n_points={}\n{name}.residual_rms={:.6e}\n",
            self.exponent, self.std_error, self.window.0, self.window.1, self.n_points, self.residual_rms
        );
        if let Some((c, d)) = self.correction {
            s.push_str(&format!(
                "{name}.correction_amplitude={c:.6e}\n{name}.correction_rate={d:.6e}\n"
            ));
        }
        s
    }
}

/// Floor for reported errors so that exact data still yield a positive one.
fn floor_error(se: f64, scale: f64) -> f64 {
    let floor = f64::EPSILON * scale.abs().max(1.0);
    if se.is_finite() {
        se.max(floor)
    } else {
        se
    }
}

// ------------------------------------------------------------------ linear

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub intercept_se: f64,
    /// Weighted sum of squared residuals.
    pub chi2: f64,
    pub residual_rms: f64,
}

/// Weighted least squares `y = a + b x`. With `sigma` the parameter
/// covariance uses the given absolute errors; without it the residual
/// variance sets the scale.
pub fn linear_fit(x: &[f64], y: &[f64], sigma: Option<&[f64]>) -> Result<LinearFit, StatsError> {
    let n = x.len();
    if n < 2 || y.len() != n || sigma.is_some_and(|s| s.len() != n) {
        return Err(StatsError::InsufficientData(format!(
            "linear fit needs at least 2 matching points, got {n}"
        )));
    }
    let w: Vec<f64> = match sigma {
        Some(s) => s
            .iter()
            .map(|&e| {
                if e > 0.0 && e.is_finite() {
                    1.0 / (e * e)
                } else {
                    0.0
                }
            })
            .collect(),
        None => vec![1.0; n],
    };
    if w.iter().filter(|&&v| v > 0.0).count() < 2 {
        return Err(StatsError::InsufficientData(
            "fewer than 2 points with usable errors".into(),
        ));
    }
    let sw: f64 = w.iter().sum();
    let mx = w.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() / sw;
    let my = w.iter().zip(y).map(|(w, y)| w * y).sum::<f64>() / sw;
    let sxx: f64 = w.iter().zip(x).map(|(w, x)| w * (x - mx).powi(2)).sum();
    if sxx <= 0.0 || !sxx.is_finite() {
        return Err(StatsError::DegenerateWindow(
            "all abscissae are equal".into(),
        ));
    }
    let sxy: f64 = (0..n).map(|i| w[i] * (x[i] - mx) * (y[i] - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let chi2: f64 = (0..n)
        .map(|i| w[i] * (y[i] - intercept - slope * x[i]).powi(2))
        .sum();
    let raw_rms = ((0..n)
        .map(|i| (y[i] - intercept - slope * x[i]).powi(2))
        .sum::<f64>()
        / n as f64)
        .sqrt();
    let scale = if sigma.is_some() {
        1.0
    } else if n > 2 {
        chi2 / (n - 2) as f64
    } else {
        0.0
    };
    let slope_se = (scale / sxx).sqrt();
    let intercept_se = (scale * (1.0 / sw + mx * mx / sxx)).sqrt();
    Ok(LinearFit {
        slope,
        intercept,
        slope_se: floor_error(slope_se, slope),
        intercept_se: floor_error(intercept_se, intercept),
        chi2,
        residual_rms: raw_rms,
    })
}

// -------------------------------------------------------------------- CCDF

/// Empirical complementary CDF on the sorted distinct sample values.
#[derive(Debug, Clone, PartialEq)]
pub struct Ccdf {
    /// `(s, P[S > s])` for every distinct value `s`.
    pub points: Vec<(f64, f64)>,
    pub samples: usize,
    /// The sorted samples, kept for bootstrap errors. Empty when the CCDF
    /// was given directly as points.
    pub values: Vec<f64>,
}

/// CCDF without a minimum sample count.
pub fn ccdf_points(samples: &[f64]) -> Ccdf {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut points = Vec::new();
    let mut i = 0;
    while i < n {
        let s = sorted[i];
        let mut j = i;
        while j < n && sorted[j] == s {
            j += 1;
        }
        points.push((s, (n - j) as f64 / n as f64));
        i = j;
    }
    Ccdf {
        points,
        samples: n,
        values: sorted,
    }
}

pub fn empirical_ccdf(samples: &[f64]) -> Result<Ccdf, StatsError> {
    if samples.len() < MIN_CCDF_SAMPLES {
        return Err(StatsError::InsufficientData(format!(
            "CCDF needs at least {MIN_CCDF_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    Ok(ccdf_points(samples))
}

fn tail_least_squares(
    points: &[(f64, f64)],
    samples: usize,
    window: (f64, f64),
) -> Result<FitResult, StatsError> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(s, p)| s >= window.0 && s <= window.1 && p > 0.0)
        .collect();
    if pts.len() < MIN_WINDOW_POINTS {
        if pts.len() > 1 && pts.iter().all(|p| p.0 == pts[0].0) {
            return Err(StatsError::DegenerateWindow("all s equal".into()));
        }
        return Err(StatsError::InsufficientData(format!(
            "tail window [{}, {}] holds {} points, need {MIN_WINDOW_POINTS}",
            window.0,
            window.1,
            pts.len()
        )));
    }
    let n = samples.max(1) as f64;
    let x: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let sigma: Vec<f64> = pts
        .iter()
        .map(|&(_, p)| ((1.0 - p) / (n * p)).sqrt().max(1.0 / n))
        .collect();
    let fit = linear_fit(&x, &y, Some(&sigma))?;
    Ok(FitResult {
        exponent: -fit.slope,
        std_error: fit.slope_se,
        intercept: fit.intercept,
        correction: None,
        window,
        residual_rms: fit.residual_rms,
        n_points: pts.len(),
    })
}

/// Power-law tail `P ~ s^-zeta` on `window`, by weighted least squares of
/// `ln P` against `ln s` with binomial weights. CCDF points are strongly
/// correlated, so the error is a bootstrap over the samples whenever they
/// are available.
pub fn fit_tail_exponent(ccdf: &Ccdf, window: (f64, f64)) -> Result<FitResult, StatsError> {
    let mut fit = tail_least_squares(&ccdf.points, ccdf.samples, window)?;
    let values = &ccdf.values;
    if values.len() >= 2 {
        let seed = mix_seed(&[TAIL_BOOTSTRAP_STREAM, values.len() as u64]);
        let mut resampled = vec![0.0; values.len()];
        let se = bootstrap_std(values.len(), DEFAULT_RESAMPLES, seed, |idx| {
            for (slot, &i) in resampled.iter_mut().zip(idx) {
                *slot = values[i];
            }
            let c = ccdf_points(&resampled);
            tail_least_squares(&c.points, c.samples, window)
                .ok()
                .map(|f| f.exponent)
        });
        if let Some(se) = se {
            fit.std_error = floor_error(se, fit.exponent);
        }
    }
    Ok(fit)
}

// ------------------------------------------------------- scaling with a correction

fn model(p: &Vector4<f64>, x: f64) -> f64 {
    p[0] + p[1] * x + p[2] * (-p[3] * x).exp()
}

fn chi2_of(p: &Vector4<f64>, x: &[f64], y: &[f64], w: &[f64]) -> f64 {
    (0..x.len())
        .map(|i| w[i] * (y[i] - model(p, x[i])).powi(2))
        .sum()
}

/// For a fixed rate `d` the model is linear in the other three parameters.
fn solve_fixed_rate(d: f64, x: &[f64], y: &[f64], w: &[f64]) -> Option<Vector4<f64>> {
    let mut a = Matrix3::zeros();
    let mut b = Vector3::zeros();
    for i in 0..x.len() {
        let phi = Vector3::new(1.0, x[i], (-d * x[i]).exp());
        a += w[i] * phi * phi.transpose();
        b += w[i] * y[i] * phi;
    }
    let sol = a.try_inverse()? * b;
    Some(Vector4::new(sol[0], sol[1], sol[2], d))
}

struct LmOutcome {
    params: Vector4<f64>,
    chi2: f64,
    covariance: Matrix4<f64>,
}

fn jacobian_row(p: &Vector4<f64>, x: f64) -> Vector4<f64> {
    let e = (-p[3] * x).exp();
    Vector4::new(1.0, x, e, -p[2] * x * e)
}

/// Damped Gauss-Newton iteration. Only steps that lower chi^2 are taken.
fn levenberg_marquardt(start: Vector4<f64>, x: &[f64], y: &[f64], w: &[f64]) -> Option<LmOutcome> {
    let mut p = start;
    let mut chi2 = chi2_of(&p, x, y, w);
    let mut lambda = 1e-3;
    let normal = |p: &Vector4<f64>| {
        let mut jtj = Matrix4::zeros();
        let mut jtr = Vector4::zeros();
        for i in 0..x.len() {
            let j = jacobian_row(p, x[i]);
            jtj += w[i] * j * j.transpose();
            jtr += w[i] * (y[i] - model(p, x[i])) * j;
        }
        (jtj, jtr)
    };
    for _ in 0..LM_MAX_ITERATIONS {
        let (jtj, jtr) = normal(&p);
        let mut improved = false;
        while lambda < 1e20 {
            let mut damped = jtj;
            for k in 0..4 {
                damped[(k, k)] += lambda * jtj[(k, k)].max(1e-300);
            }
            let Some(inv) = damped.try_inverse() else {
                lambda *= 10.0;
                continue;
            };
            let step = inv * jtr;
            let trial = p + step;
            let c = chi2_of(&trial, x, y, w);
            if c.is_finite() && c <= chi2 {
                let small =
                    (0..4).all(|k| step[k].abs() <= LM_TOLERANCE * (p[k].abs() + LM_TOLERANCE));
                p = trial;
                chi2 = c;
                lambda = (lambda / 3.0).max(1e-12);
                improved = true;
                if small {
                    return finish_lm(p, chi2, x, w);
                }
                break;
            }
            lambda *= 3.0;
        }
        if !improved {
            // no descent direction left: a stationary point
            return finish_lm(p, chi2, x, w);
        }
    }
    None
}

fn finish_lm(p: Vector4<f64>, chi2: f64, x: &[f64], w: &[f64]) -> Option<LmOutcome> {
    let mut jtj = Matrix4::zeros();
    for i in 0..x.len() {
        let j = jacobian_row(&p, x[i]);
        jtj += w[i] * j * j.transpose();
    }
    let covariance = jtj.try_inverse()?;
    if !p.iter().all(|v| v.is_finite()) {
        return None;
    }
    Some(LmOutcome {
        params: p,
        chi2,
        covariance,
    })
}

/// Fit `ln y = a + b ln L + c L^-d` and report `b`. The correction is kept
/// only when an F-test prefers it at the 5% level and the nonlinear fit
/// converges; otherwise the plain power law is reported.
pub fn fit_scaling_with_correction(
    l_values: &[f64],
    means: &[f64],
    std_errors: &[f64],
) -> Result<FitResult, StatsError> {
    let n = l_values.len();
    let mut distinct = l_values.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 5 || means.len() != n || std_errors.len() != n {
        return Err(StatsError::InsufficientData(format!(
            "scaling fit needs at least 5 distinct sizes, got {}",
            distinct.len()
        )));
    }
    if means.iter().any(|&m| !(m > 0.0)) {
        return Err(StatsError::InsufficientData(
            "means must be positive".into(),
        ));
    }
    let x: Vec<f64> = l_values.iter().map(|l| l.ln()).collect();
    let y: Vec<f64> = means.iter().map(|m| m.ln()).collect();
    let use_sigma = std_errors.iter().all(|&s| s > 0.0 && s.is_finite());
    let sigma: Vec<f64> = (0..n).map(|i| std_errors[i] / means[i]).collect();
    let lin = linear_fit(&x, &y, use_sigma.then_some(sigma.as_slice()))
        .map_err(|e| StatsError::NonConvergence(format!("linear fallback failed: {e}")))?;
    let window = (distinct[0], distinct[distinct.len() - 1]);
    let linear = FitResult {
        exponent: lin.slope,
        std_error: lin.slope_se,
        intercept: lin.intercept,
        correction: None,
        window,
        residual_rms: lin.residual_rms,
        n_points: n,
    };
    if n <= 4 {
        return Ok(linear);
    }
    let w: Vec<f64> = if use_sigma {
        sigma.iter().map(|s| 1.0 / (s * s)).collect()
    } else {
        vec![1.0; n]
    };

    let mut best: Option<(f64, Vector4<f64>)> = None;
    for d in [0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0] {
        if let Some(p) = solve_fixed_rate(d, &x, &y, &w) {
            let c = chi2_of(&p, &x, &y, &w);
            if c.is_finite() && best.as_ref().is_none_or(|b| c < b.0) {
                best = Some((c, p));
            }
        }
    }
    let Some((_, start)) = best else {
        return Ok(linear);
    };
    let Some(lm) = levenberg_marquardt(start, &x, &y, &w) else {
        return Ok(linear);
    };
    if !(lm.chi2 < lin.chi2) || lm.params[3] <= 0.0 {
        return Ok(linear);
    }
    let dof = (n - 4) as f64;
    let f = ((lin.chi2 - lm.chi2) / 2.0) / (lm.chi2 / dof).max(f64::MIN_POSITIVE);
    let p_value = match FisherSnedecor::new(2.0, dof) {
        Ok(dist) => 1.0 - dist.cdf(f),
        Err(_) => 1.0,
    };
    if !(p_value < CORRECTION_SIGNIFICANCE) {
        return Ok(linear);
    }
    let scale = if use_sigma { 1.0 } else { lm.chi2 / dof };
    let var = lm.covariance[(1, 1)] * scale;
    if !(var >= 0.0) {
        return Ok(linear);
    }
    let residual_rms = ((0..n)
        .map(|i| (y[i] - model(&lm.params, x[i])).powi(2))
        .sum::<f64>()
        / n as f64)
        .sqrt();
    Ok(FitResult {
        exponent: lm.params[1],
        std_error: floor_error(var.sqrt(), lm.params[1]),
        intercept: lm.params[0],
        correction: Some((lm.params[2], lm.params[3])),
        window,
        residual_rms,
        n_points: n,
    })
}

/// `<theta^2> = a + (kappa / 4) ln L`.
pub fn fit_winding_kappa(
    l_values: &[f64],
    theta_sq_means: &[f64],
    std_errors: &[f64],
) -> Result<FitResult, StatsError> {
    let mut distinct = l_values.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 4 {
        return Err(StatsError::InsufficientData(format!(
            "kappa fit needs at least 4 distinct sizes, got {}",
            distinct.len()
        )));
    }
    let x: Vec<f64> = l_values.iter().map(|l| l.ln()).collect();
    let use_sigma = std_errors.iter().all(|&s| s > 0.0 && s.is_finite());
    let fit = linear_fit(&x, theta_sq_means, use_sigma.then_some(std_errors))?;
    Ok(FitResult {
        exponent: 4.0 * fit.slope,
        std_error: 4.0 * fit.slope_se,
        intercept: fit.intercept,
        correction: None,
        window: (distinct[0], distinct[distinct.len() - 1]),
        residual_rms: fit.residual_rms,
        n_points: l_values.len(),
    })
}

/// Per-epsilon averages for one lattice and size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonPoint {
    pub epsilon: f64,
    pub distance: f64,
    pub distance_se: f64,
    /// Mean energy change divided by the matching size.
    pub energy: f64,
    pub energy_se: f64,
}

/// `d ~ eps^beta` and `<dE>/N ~ d^tau` on `eps <= cut`.
pub fn fit_epsilon_exponents(
    points: &[EpsilonPoint],
    cut: f64,
) -> Result<(FitResult, FitResult), StatsError> {
    if points.len() < 8 {
        return Err(StatsError::InsufficientData(format!(
            "epsilon fits need at least 8 epsilon values, got {}",
            points.len()
        )));
    }
    let used: Vec<&EpsilonPoint> = points
        .iter()
        .filter(|p| p.epsilon > 0.0 && p.epsilon <= cut && p.distance > 0.0 && p.energy > 0.0)
        .collect();
    if used.len() < 3 {
        return Err(StatsError::DegenerateWindow(format!(
            "only {} epsilon values with positive distance below {cut}",
            used.len()
        )));
    }
    let lo = used.iter().map(|p| p.epsilon).fold(f64::INFINITY, f64::min);
    let hi = used.iter().map(|p| p.epsilon).fold(0.0, f64::max);
    let ln_eps: Vec<f64> = used.iter().map(|p| p.epsilon.ln()).collect();
    let ln_d: Vec<f64> = used.iter().map(|p| p.distance.ln()).collect();
    let ln_e: Vec<f64> = used.iter().map(|p| p.energy.ln()).collect();
    let sd: Vec<f64> = used.iter().map(|p| p.distance_se / p.distance).collect();
    let se: Vec<f64> = used.iter().map(|p| p.energy_se / p.energy).collect();
    let usable = |s: &[f64]| s.iter().all(|&v| v > 0.0 && v.is_finite());
    let beta = linear_fit(&ln_eps, &ln_d, usable(&sd).then_some(sd.as_slice()))?;
    let mut tau = linear_fit(&ln_d, &ln_e, usable(&se).then_some(se.as_slice()))?;
    if usable(&se) && usable(&sd) {
        // the abscissa is noisy too: effective variance sigma_y^2 + (b sigma_x)^2
        for _ in 0..EFFECTIVE_VARIANCE_ROUNDS {
            let eff: Vec<f64> = se
                .iter()
                .zip(&sd)
                .map(|(y, x)| (y * y + (tau.slope * x).powi(2)).sqrt())
                .collect();
            tau = linear_fit(&ln_d, &ln_e, Some(&eff))?;
        }
    }
    let wrap = |f: LinearFit| FitResult {
        exponent: f.slope,
        std_error: f.slope_se,
        intercept: f.intercept,
        correction: None,
        window: (lo, hi),
        residual_rms: f.residual_rms,
        n_points: used.len(),
    };
    Ok((wrap(beta), wrap(tau)))
}

// --------------------------------------------------------------- bootstrap

/// Standard deviation of `estimate` over `resamples` bootstrap resamples of
/// `n` instances, drawn with replacement from a seeded stream. Resamples on
/// which the estimate fails are skipped.
pub fn bootstrap_std<F>(n: usize, resamples: usize, seed: u64, mut estimate: F) -> Option<f64>
where
    F: FnMut(&[usize]) -> Option<f64>,
{
    if n == 0 {
        return None;
    }
    let mut rng = SplitMix64::new(seed);
    let mut idx = vec![0usize; n];
    let mut values = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        for slot in idx.iter_mut() {
            *slot = rng.random_range(0..n);
        }
        if let Some(v) = estimate(&idx) {
            if v.is_finite() {
                values.push(v);
            }
        }
    }
    if values.len() < 2 {
        return None;
    }
    let m = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    Some(var.sqrt())
}

/// Mean and standard error of the mean.
pub fn mean_and_error(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let m = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (m, f64::NAN);
    }
    let var = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    (m, (var / n as f64).sqrt())
}

// --------------------------------------------------------------- relations

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: f64, error: f64) -> Self {
        Self { value, error }
    }
}

impl From<&FitResult> for Estimate {
    fn from(f: &FitResult) -> Self {
        Self::new(f.exponent, f.std_error)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ExponentSet {
    pub alpha: Option<FitResult>,
    pub gamma: Option<FitResult>,
    pub zeta_fit: Option<FitResult>,
    pub kappa: Option<FitResult>,
    pub beta: Option<FitResult>,
    pub tau: Option<FitResult>,
}

#[derive(Debug, Clone, Default)]
pub struct Relations {
    pub d_f: Option<Estimate>,
    pub zeta_derived: Option<Estimate>,
    pub d_f_from_kappa: Option<Estimate>,
    pub tau_from_beta: Option<Estimate>,
    /// `|zeta_fit - zeta_derived|` in combined standard errors.
    pub zeta_tension: Option<f64>,
    /// `|tau - tau_from_beta|` in combined standard errors.
    pub tau_tension: Option<f64>,
}

/// `D_f = 2 - gamma + alpha`, errors added in quadrature.
pub fn fractal_dimension(alpha: Estimate, gamma: Estimate) -> Estimate {
    Estimate::new(
        2.0 - gamma.value + alpha.value,
        alpha.error.hypot(gamma.error),
    )
}

/// `zeta = (2 - gamma) / D_f` with first-order propagation in alpha, gamma.
pub fn zeta_from(alpha: Estimate, gamma: Estimate) -> Estimate {
    let u = 2.0 - gamma.value;
    let d = u + alpha.value;
    let dz_da = -u / (d * d);
    let dz_dg = -alpha.value / (d * d);
    Estimate::new(u / d, (dz_da * alpha.error).hypot(dz_dg * gamma.error))
}

/// `D_f = min(1 + kappa / 8, 2)`.
pub fn dimension_from_kappa(kappa: Estimate) -> Estimate {
    let v = 1.0 + kappa.value / 8.0;
    if v >= 2.0 {
        Estimate::new(2.0, 0.0)
    } else {
        Estimate::new(v, kappa.error / 8.0)
    }
}

/// `tau = (beta + 1) / beta`.
pub fn tau_from_beta(beta: Estimate) -> Estimate {
    Estimate::new(
        (beta.value + 1.0) / beta.value,
        beta.error / (beta.value * beta.value),
    )
}

fn tension(a: Estimate, b: Estimate) -> f64 {
    let s = a.error.hypot(b.error);
    (a.value - b.value).abs() / s
}

pub fn derive_exponent_relations(set: &ExponentSet) -> Relations {
    let mut r = Relations::default();
    if let (Some(a), Some(g)) = (&set.alpha, &set.gamma) {
        r.d_f = Some(fractal_dimension(a.into(), g.into()));
        let z = zeta_from(a.into(), g.into());
        r.zeta_derived = Some(z);
        if let Some(zf) = &set.zeta_fit {
            r.zeta_tension = Some(tension(zf.into(), z));
        }
    }
    if let Some(k) = &set.kappa {
        r.d_f_from_kappa = Some(dimension_from_kappa(k.into()));
    }
    if let Some(b) = &set.beta {
        let t = tau_from_beta(b.into());
        r.tau_from_beta = Some(t);
        if let Some(tf) = &set.tau {
            r.tau_tension = Some(tension(tf.into(), t));
        }
    }
    r
}
