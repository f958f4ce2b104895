use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::binning::{linear_binning, BinSeries};
use super::rank::{rank_by_frequency, RankedLexicon};
use crate::error::{Error, Result};
use crate::model::{Dataset, FreqSource, Role};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FitMethod {
    /// Least squares on y = A x^b in the original scale.
    NlsNormal,
    /// Ordinary least squares of log10 y on log10 x.
    OlsLoglog,
    /// Gaussian likelihood of log10 y; same estimates as `OlsLoglog`.
    MlLognormal,
}

impl FitMethod {
    pub const ALL: [FitMethod; 3] = [FitMethod::NlsNormal, FitMethod::OlsLoglog, FitMethod::MlLognormal];

    pub fn as_str(self) -> &'static str {
        match self {
            FitMethod::NlsNormal => "NLS_NORMAL",
            FitMethod::OlsLoglog => "OLS_LOGLOG",
            FitMethod::MlLognormal => "ML_LOGNORMAL",
        }
    }

    /// Short table label: least squares or maximum likelihood.
    pub fn label(self) -> &'static str {
        match self {
            FitMethod::NlsNormal => "LS",
            FitMethod::OlsLoglog => "OLS",
            FitMethod::MlLognormal => "ML",
        }
    }
}

impl fmt::Display for FitMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FitMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nls_normal" | "nls" | "ls" => Ok(FitMethod::NlsNormal),
            "ols_loglog" | "ols" => Ok(FitMethod::OlsLoglog),
            "ml_lognormal" | "ml" => Ok(FitMethod::MlLognormal),
            other => Err(Error::Config(format!("unknown fit method {other:?}"))),
        }
    }
}

/// A fitted power law y = prefactor * x^exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub method: FitMethod,
    /// Log-log slope.
    pub exponent: f64,
    /// log10 of the prefactor.
    pub intercept_log: f64,
    pub prefactor: f64,
    /// R^2 of the fitted line against log10 y, in [0, 1].
    pub r_squared_loglog: f64,
    pub n_points: usize,
}

/// NLS fit together with the objective after the start and each accepted step.
#[derive(Debug, Clone, PartialEq)]
pub struct NlsOutcome {
    pub fit: FitResult,
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
}

const MAX_ITERATIONS: usize = 500;
const MAX_DAMPING: f64 = 1e12;

fn logs(x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::TooFew { need: 3, got: x.len() });
    }
    for (index, &value) in x.iter().chain(y).enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite(index % x.len()));
        }
        if value <= 0.0 {
            return Err(Error::NonPositive {
                index: index % x.len(),
                value,
            });
        }
    }
    Ok((x.iter().map(|v| v.log10()).collect(), y.iter().map(|v| v.log10()).collect()))
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// (intercept, slope) of the least-squares line.
fn ols(lx: &[f64], ly: &[f64]) -> Result<(f64, f64)> {
    let (mx, my) = (mean(lx), mean(ly));
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (&a, &b) in lx.iter().zip(ly) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let slope = sxy / sxx;
    Ok((my - slope * mx, slope))
}

fn r_squared(lx: &[f64], ly: &[f64], intercept: f64, slope: f64) -> f64 {
    let my = mean(ly);
    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for (&a, &b) in lx.iter().zip(ly) {
        let e = b - (intercept + slope * a);
        ss_res += e * e;
        ss_tot += (b - my) * (b - my);
    }
    // Constant y: the flat line fits perfectly up to rounding.
    if ss_tot <= f64::EPSILON * my.abs().max(1.0) * ly.len() as f64 {
        return if ss_res <= ss_tot.max(f64::MIN_POSITIVE) { 1.0 } else { 0.0 };
    }
    (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
}

fn result(method: FitMethod, lx: &[f64], ly: &[f64], intercept: f64, slope: f64) -> FitResult {
    FitResult {
        method,
        exponent: slope,
        intercept_log: intercept,
        prefactor: 10f64.powf(intercept),
        r_squared_loglog: r_squared(lx, ly, intercept, slope),
        n_points: lx.len(),
    }
}

fn sse(x: &[f64], y: &[f64], a: f64, b: f64) -> f64 {
    x.iter().zip(y).map(|(&xi, &yi)| (yi - a * xi.powf(b)).powi(2)).sum()
}

/// Levenberg-Marquardt damped Gauss-Newton for y = a x^b, started from the
/// log-log OLS solution. Only steps that lower the objective are accepted.
pub fn nls_power_law(x: &[f64], y: &[f64]) -> Result<NlsOutcome> {
    let (lx, ly) = logs(x, y)?;
    let (c0, b0) = ols(&lx, &ly)?;
    let (mut a, mut b) = (10f64.powf(c0), b0);
    let mut obj = sse(x, y, a, b);
    let mut trace = vec![obj];
    let mut mu = 1e-3;
    let mut converged = obj == 0.0;
    let mut iterations = 0;
    while !converged && iterations < MAX_ITERATIONS {
        iterations += 1;
        let (mut h00, mut h01, mut h11, mut g0, mut g1) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (&xi, &yi) in x.iter().zip(y) {
            let p = xi.powf(b);
            let r = yi - a * p;
            let j0 = p;
            let j1 = a * p * xi.ln();
            h00 += j0 * j0;
            h01 += j0 * j1;
            h11 += j1 * j1;
            g0 += j0 * r;
            g1 += j1 * r;
        }
        let d00 = h00 * (1.0 + mu);
        let d11 = h11 * (1.0 + mu);
        let det = d00 * d11 - h01 * h01;
        let step = if det > 0.0 && det.is_finite() {
            Some(((d11 * g0 - h01 * g1) / det, (d00 * g1 - h01 * g0) / det))
        } else {
            None
        };
        let accepted = step.and_then(|(da, db)| {
            let (na, nb) = (a + da, b + db);
            let new_obj = sse(x, y, na, nb);
            (new_obj.is_finite() && new_obj < obj).then_some((na, nb, new_obj))
        });
        match accepted {
            Some((na, nb, new_obj)) => {
                let rel = (obj - new_obj) / obj;
                a = na;
                b = nb;
                obj = new_obj;
                trace.push(obj);
                mu = (mu / 10.0).max(1e-12);
                if rel < 1e-12 {
                    converged = true;
                }
            }
            None => {
                mu *= 10.0;
                // No descent direction left at any damping: a stationary point.
                if mu > MAX_DAMPING {
                    converged = true;
                }
            }
        }
    }
    if !converged || a <= 0.0 {
        return Err(Error::NoConvergence {
            iterations,
            prefactor: a,
            exponent: b,
        });
    }
    Ok(NlsOutcome {
        fit: result(FitMethod::NlsNormal, &lx, &ly, a.log10(), b),
        objective_trace: trace,
        iterations,
    })
}

/// Fits y = A x^b. The R^2 is always computed from log-log residuals.
pub fn fit_power_law(x: &[f64], y: &[f64], method: FitMethod) -> Result<FitResult> {
    match method {
        FitMethod::NlsNormal => Ok(nls_power_law(x, y)?.fit),
        FitMethod::OlsLoglog | FitMethod::MlLognormal => {
            let (lx, ly) = logs(x, y)?;
            let (c, b) = ols(&lx, &ly)?;
            Ok(result(method, &lx, &ly, c, b))
        }
    }
}

/// Polysemy values of one role ordered by descending frequency, binned.
pub fn meaning_distribution_series(
    dataset: &Dataset,
    role: Role,
    source: FreqSource,
    lambda: usize,
) -> Result<BinSeries> {
    let mut pairs: Vec<(&str, u64, f64)> = Vec::new();
    for r in dataset.role_records(role) {
        if let (Some(f), Some(m)) = (r.frequency(source), r.polysemy()) {
            pairs.push((r.form(), f, f64::from(m)));
        }
    }
    let ranked = rank_by_frequency(pairs.iter().map(|&(form, f, _)| (form, f)))?;
    let meanings: std::collections::HashMap<&str, f64> = pairs.iter().map(|&(form, _, m)| (form, m)).collect();
    let values: Vec<f64> = ranked.entries.iter().map(|e| meanings[e.form.as_str()]).collect();
    linear_binning(&values, lambda)
}

/// Mean number of meanings per frequency-rank bin against bin index.
pub fn fit_meaning_distribution(
    dataset: &Dataset,
    role: Role,
    source: FreqSource,
    lambda: usize,
    method: FitMethod,
) -> Result<FitResult> {
    let (x, y) = meaning_distribution_series(dataset, role, source, lambda)?.xy();
    fit_power_law(&x, &y, method)
}

/// Log-log OLS of meanings on frequency over the role's records.
pub fn fit_meaning_frequency(dataset: &Dataset, role: Role, source: FreqSource) -> Result<FitResult> {
    let (f, m): (Vec<f64>, Vec<f64>) = dataset
        .role_records(role)
        .filter_map(|r| Some((r.frequency(source)? as f64, f64::from(r.polysemy()?))))
        .unzip();
    fit_power_law(&f, &m, FitMethod::OlsLoglog)
}

/// Log-log OLS of frequency on rank.
pub fn fit_zipf_rank_frequency(ranked: &RankedLexicon) -> Result<FitResult> {
    let (i, f): (Vec<f64>, Vec<f64>) = ranked
        .entries
        .iter()
        .map(|e| (e.rank as f64, e.frequency as f64))
        .unzip();
    fit_power_law(&i, &f, FitMethod::OlsLoglog)
}
