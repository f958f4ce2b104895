use serde::{Deserialize, Serialize};

use super::dist::{normal_two_sided, student_t_two_sided};
use super::pairs::{choose2, count_pairs, tie_groups, PairCounts};
use super::{check_pair, midranks};
use crate::error::{Error, Result};
use crate::model::{CorrelationResult, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KendallVariant {
    /// (Nc - Nd) / C(n, 2).
    A,
    /// (Nc - Nd) / sqrt((P - Tx)(P - Ty)), the tie-corrected form.
    B,
}

impl KendallVariant {
    pub fn method(self) -> Method {
        match self {
            KendallVariant::A => Method::KendallA,
            KendallVariant::B => Method::KendallB,
        }
    }
}

fn is_constant(v: &[f64]) -> bool {
    v.iter().all(|&a| a == v[0])
}

fn pearson_coefficient(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

fn t_test(method: Method, r: f64, n: usize) -> CorrelationResult {
    let df = (n - 2) as f64;
    let t = if r.abs() >= 1.0 {
        r.signum() * f64::INFINITY
    } else {
        r * (df / (1.0 - r * r)).sqrt()
    };
    CorrelationResult::new(method, r, t, student_t_two_sided(t, df), n)
}

/// Pearson's r with the t test on n - 2 degrees of freedom.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    check_pair(x, y, 3)?;
    if is_constant(x) || is_constant(y) {
        return Err(Error::ZeroVariance);
    }
    Ok(t_test(Method::Pearson, pearson_coefficient(x, y), x.len()))
}

/// Spearman's rho: Pearson's r of the mid-ranks, tested with the same t
/// approximation.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    check_pair(x, y, 3)?;
    if is_constant(x) || is_constant(y) {
        return Err(Error::ZeroVariance);
    }
    let r = pearson_coefficient(&midranks(x), &midranks(y));
    Ok(t_test(Method::Spearman, r, x.len()))
}

/// Tie-corrected variance of S = Nc - Nd under independence.
fn variance_of_s(n: usize, x: &[f64], y: &[f64]) -> f64 {
    let n = n as f64;
    let gx: Vec<f64> = tie_groups(x).into_iter().map(|t| t as f64).collect();
    let gy: Vec<f64> = tie_groups(y).into_iter().map(|t| t as f64).collect();
    let v0 = n * (n - 1.0) * (2.0 * n + 5.0);
    let vt: f64 = gx.iter().map(|t| t * (t - 1.0) * (2.0 * t + 5.0)).sum();
    let vu: f64 = gy.iter().map(|u| u * (u - 1.0) * (2.0 * u + 5.0)).sum();
    let v1 = gx.iter().map(|t| t * (t - 1.0)).sum::<f64>() * gy.iter().map(|u| u * (u - 1.0)).sum::<f64>();
    let v2 = gx.iter().map(|t| t * (t - 1.0) * (t - 2.0)).sum::<f64>()
        * gy.iter().map(|u| u * (u - 1.0) * (u - 2.0)).sum::<f64>();
    (v0 - vt - vu) / 18.0 + v1 / (2.0 * n * (n - 1.0)) + v2 / (9.0 * n * (n - 1.0) * (n - 2.0))
}

/// Kendall's tau with a two-sided normal-approximation test.
///
/// Both variants share the statistic z = S / sqrt(Var S), with the
/// tie-corrected variance; Kendall-A results carry
/// `p_from_tie_corrected_s = true` to make that explicit.
pub fn kendall(x: &[f64], y: &[f64], variant: KendallVariant) -> Result<CorrelationResult> {
    check_pair(x, y, 3)?;
    let counts = count_pairs(x, y)?;
    kendall_from_counts(&counts, x, y, variant)
}

fn kendall_from_counts(
    counts: &PairCounts,
    x: &[f64],
    y: &[f64],
    variant: KendallVariant,
) -> Result<CorrelationResult> {
    let n = counts.n;
    let total = choose2(n as u64) as f64;
    let s = counts.concordant as f64 - counts.discordant as f64;
    let tau = match variant {
        KendallVariant::A => s / total,
        KendallVariant::B => {
            let dx = total - counts.tied_x as f64;
            let dy = total - counts.tied_y as f64;
            if dx == 0.0 || dy == 0.0 {
                return Err(Error::DegenerateTies);
            }
            s / (dx * dy).sqrt()
        }
    };
    let var = variance_of_s(n, x, y);
    let (z, p) = if var > 0.0 {
        let z = s / var.sqrt();
        (z, normal_two_sided(z))
    } else {
        (0.0, 1.0)
    };
    let mut result = CorrelationResult::new(variant.method(), tau, z, p, n);
    result.p_from_tie_corrected_s = variant == KendallVariant::A;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pearson_examples() {
        assert_abs_diff_eq!(pearson(&[1., 2., 3.], &[2., 4., 6.]).unwrap().coefficient, 1.0);
        assert_abs_diff_eq!(pearson(&[1., 2., 3.], &[3., 2., 1.]).unwrap().coefficient, -1.0);
        // sxy = 8, sxx = syy = 10
        let r = pearson(&[1., 2., 3., 4., 5.], &[1., 3., 2., 5., 4.]).unwrap();
        assert_abs_diff_eq!(r.coefficient, 0.8, epsilon = 1e-15);
        assert_eq!(r.n, 5);
    }

    #[test]
    fn perfect_correlation_has_zero_p() {
        let r = pearson(&[1., 2., 3., 4.], &[2., 4., 6., 8.]).unwrap();
        assert_eq!(r.p_value, 0.0);
        assert!(r.statistic.is_infinite());
    }

    #[test]
    fn pearson_errors() {
        assert!(matches!(pearson(&[1., 1., 1.], &[1., 2., 3.]), Err(Error::ZeroVariance)));
        assert!(matches!(pearson(&[1., 2.], &[1., 2.]), Err(Error::TooFew { .. })));
        assert!(matches!(spearman(&[1., 2., 3.], &[4., 4., 4.]), Err(Error::ZeroVariance)));
    }

    // scipy.stats.pearsonr: r = 0.8, p = 0.10408803866182799
    #[test]
    fn pearson_p_value() {
        let r = pearson(&[1., 2., 3., 4., 5.], &[2., 1., 4., 3., 5.]).unwrap();
        assert_abs_diff_eq!(r.statistic, 2.3094010767585034, epsilon = 1e-12);
        assert_abs_diff_eq!(r.p_value, 0.10408803866182799, epsilon = 1e-12);
    }

    #[test]
    fn spearman_examples() {
        assert_abs_diff_eq!(spearman(&[1., 2., 3., 4.], &[1., 5., 9., 20.]).unwrap().coefficient, 1.0);
        assert_abs_diff_eq!(spearman(&[1., 2., 3., 4.], &[4., 3., 2., 1.]).unwrap().coefficient, -1.0);
        // mid-ranks x = [1.5, 1.5, 3, 4]; sxy = -4.5, sxx = 4.5, syy = 5
        let rho = spearman(&[1., 1., 2., 3.], &[4., 3., 2., 1.]).unwrap().coefficient;
        assert_abs_diff_eq!(rho, -4.5 / 22.5f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn kendall_examples() {
        let t = kendall(&[1., 2., 3.], &[1., 2., 3.], KendallVariant::A).unwrap();
        assert_eq!(t.coefficient, 1.0);
        let t = kendall(&[1., 1., 2., 3.], &[1., 2., 3., 4.], KendallVariant::A).unwrap();
        assert_abs_diff_eq!(t.coefficient, 5.0 / 6.0, epsilon = 1e-15);
        assert!(t.p_from_tie_corrected_s);
        // tau_b = 5 / sqrt(5 * 6)
        let t = kendall(&[1., 1., 2., 3.], &[1., 2., 3., 4.], KendallVariant::B).unwrap();
        assert_abs_diff_eq!(t.coefficient, 5.0 / 30f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn kendall_all_tied() {
        let x = [2., 2., 2., 2.];
        let y = [1., 2., 3., 4.];
        assert!(matches!(kendall(&x, &y, KendallVariant::B), Err(Error::DegenerateTies)));
        let a = kendall(&x, &y, KendallVariant::A).unwrap();
        assert_eq!(a.coefficient, 0.0);
        assert_eq!(a.p_value, 1.0);
    }

    // No concordant pairs: tau_a = upsilon - 1.
    #[test]
    fn kendall_no_concordant_hits_bound() {
        let x = [0., 0., 1., 1., 2.];
        let y = [2., 2., 1., 1., 0.];
        let c = count_pairs(&x, &y).unwrap();
        assert_eq!(c.concordant, 0);
        let t = kendall(&x, &y, KendallVariant::A).unwrap();
        assert_eq!(t.coefficient, c.upsilon() - 1.0);
    }

    // scipy.stats.kendalltau(method="asymptotic"), same tie-corrected variance.
    #[test]
    fn kendall_b_matches_reference_with_ties() {
        let x = [1., 2., 2., 3., 4., 5., 5., 6.];
        let y = [2., 1., 3., 3., 5., 4., 6., 6.];
        let t = kendall(&x, &y, KendallVariant::B).unwrap();
        assert_abs_diff_eq!(t.coefficient, 0.7692307692307694, epsilon = 1e-14);
        assert_abs_diff_eq!(t.statistic, 2.5508006671194887, epsilon = 1e-9);
        assert_abs_diff_eq!(t.p_value, 0.010747577580460075, epsilon = 1e-12);
    }
}
