use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const GRID_POINTS: usize = 401;
const DEFAULT_BANDWIDTH_FRACTION: f64 = 0.2;
const DENSITY_GRID_CUT: f64 = 3.0;

/// A curve sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub bandwidth: f64,
}

impl Curve {
    /// The curve with y mapped linearly so that its maximum equals `top`.
    pub fn scaled_to_max(&self, top: f64) -> Curve {
        let max = self.y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let k = if max > 0.0 { top / max } else { 0.0 };
        Curve {
            x: self.x.clone(),
            y: self.y.iter().map(|v| v * k).collect(),
            bandwidth: self.bandwidth,
        }
    }
}

fn grid(lo: f64, hi: f64) -> Vec<f64> {
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    (0..GRID_POINTS)
        .map(|i| if i == GRID_POINTS - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

fn range(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &a| (lo.min(a), hi.max(a)))
}

fn check_finite(v: &[f64]) -> Result<()> {
    match v.iter().position(|a| !a.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

/// Solves the square system `a * beta = b` by Gaussian elimination with
/// partial pivoting; `None` when singular.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let k = a[row][col] / a[col][col];
            let (upper, lower) = a.split_at_mut(row);
            for (x, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= k * p;
            }
            b[row] -= k * b[col];
        }
    }
    let mut beta = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * beta[c]).sum();
        beta[row] = (b[row] - s) / a[row][row];
    }
    Some(beta)
}

/// Gaussian-kernel local polynomial estimate at one point.
fn local_fit(x: &[f64], y: &[f64], at: f64, h: f64, degree: usize) -> f64 {
    let p = degree + 1;
    let mut xtwx = vec![vec![0.0; p]; p];
    let mut xtwy = vec![0.0; p];
    let mut powers = vec![0.0; 2 * p - 1];
    for (&xi, &yi) in x.iter().zip(y) {
        let u = (xi - at) / h;
        let w = (-0.5 * u * u).exp();
        if w == 0.0 {
            continue;
        }
        let mut up = 1.0;
        for slot in powers.iter_mut() {
            *slot = up;
            up *= u;
        }
        for j in 0..p {
            xtwy[j] += w * powers[j] * yi;
            for k in 0..p {
                xtwx[j][k] += w * powers[j + k];
            }
        }
    }
    solve(xtwx, xtwy).map_or(f64::NAN, |beta| beta[0])
}

/// Local polynomial regression on a 401-point grid over [min x, max x].
/// The default bandwidth is 0.2 times the range of x. Grid points where the
/// local system is singular (too little kernel mass) are NaN.
pub fn locpoly_smooth(x: &[f64], y: &[f64], bandwidth: Option<f64>, degree: usize) -> Result<Curve> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < degree + 2 {
        return Err(Error::TooFew {
            need: degree + 2,
            got: x.len(),
        });
    }
    check_finite(x)?;
    check_finite(y)?;
    let (lo, hi) = range(x);
    if lo == hi {
        return Err(Error::ZeroVariance);
    }
    let h = bandwidth.unwrap_or(DEFAULT_BANDWIDTH_FRACTION * (hi - lo));
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Config(format!("bandwidth must be positive, got {h}")));
    }
    let gx = grid(lo, hi);
    let gy = gx.iter().map(|&g| local_fit(x, y, g, h, degree)).collect();
    Ok(Curve { x: gx, y: gy, bandwidth: h })
}

/// Sample quantile with linear interpolation between order statistics.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

/// Silverman's rule of thumb: 0.9 min(sd, IQR / 1.34) n^(-1/5), falling
/// back to sd when the IQR is zero.
pub fn silverman_bandwidth(x: &[f64]) -> Result<f64> {
    if x.len() < 2 {
        return Err(Error::TooFew { need: 2, got: x.len() });
    }
    check_finite(x)?;
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let sd = (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    if sd == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let mut s = x.to_vec();
    s.sort_unstable_by(f64::total_cmp);
    let iqr = (quantile(&s, 0.75) - quantile(&s, 0.25)) / 1.34;
    let spread = if iqr > 0.0 { sd.min(iqr) } else { sd };
    Ok(0.9 * spread * n.powf(-0.2))
}

/// Gaussian kernel density estimate on a 401-point grid spanning three
/// bandwidths beyond the data on each side. Values are unscaled densities.
pub fn density_curve(x: &[f64], bandwidth: Option<f64>) -> Result<Curve> {
    let default = silverman_bandwidth(x)?;
    let h = bandwidth.unwrap_or(default);
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Config(format!("bandwidth must be positive, got {h}")));
    }
    let (lo, hi) = range(x);
    let gx = grid(lo - DENSITY_GRID_CUT * h, hi + DENSITY_GRID_CUT * h);
    let norm = 1.0 / (x.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    let gy = gx
        .iter()
        .map(|&g| norm * x.iter().map(|&xi| (-0.5 * ((g - xi) / h).powi(2)).exp()).sum::<f64>())
        .collect();
    Ok(Curve { x: gx, y: gy, bandwidth: h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample(seed: u64, n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let x: f64 = rng.random_range(0.0..5.0);
                (x, x.sin() + rng.random_range(-0.3..0.3))
            })
            .unzip()
    }

    #[test]
    fn grid_shape() {
        let c = locpoly_smooth(&[1., 2., 3., 4.], &[1., 1., 1., 1.], None, 1).unwrap();
        assert_eq!(c.x.len(), GRID_POINTS);
        assert_eq!((c.x[0], c.x[400]), (1.0, 4.0));
        assert_abs_diff_eq!(c.bandwidth, 0.6, epsilon = 1e-15);
    }

    #[test]
    fn constant_and_linear_reproduced() {
        let (x, _) = sample(1, 200);
        let c = locpoly_smooth(&x, &vec![2.5; 200], None, 1).unwrap();
        assert!(c.y.iter().all(|v| (v - 2.5).abs() < 1e-10));
        let y: Vec<f64> = x.iter().map(|v| 3.0 - 0.7 * v).collect();
        let c = locpoly_smooth(&x, &y, Some(0.3), 1).unwrap();
        for (g, v) in c.x.iter().zip(&c.y) {
            assert_abs_diff_eq!(*v, 3.0 - 0.7 * g, epsilon = 1e-9);
        }
    }

    #[test]
    fn smoothing_errors() {
        assert!(locpoly_smooth(&[1., 1., 1.], &[1., 2., 3.], None, 1).is_err());
        assert!(locpoly_smooth(&[1., 2.], &[1., 2.], None, 1).is_err());
        assert!(locpoly_smooth(&[1., 2., 3.], &[1., 2., 3.], Some(0.0), 1).is_err());
    }

    // Weighted least squares in raw (x - g) coordinates, solved by SVD.
    fn wls_oracle(x: &[f64], y: &[f64], g: f64, h: f64, degree: usize) -> f64 {
        let n = x.len();
        let design = DMatrix::from_fn(n, degree + 1, |i, j| {
            let w = (-0.5 * ((x[i] - g) / h).powi(2)).exp().sqrt();
            w * (x[i] - g).powi(j as i32)
        });
        let rhs = DVector::from_fn(n, |i, _| (-0.5 * ((x[i] - g) / h).powi(2)).exp().sqrt() * y[i]);
        design.svd(true, true).solve(&rhs, 1e-14).unwrap()[0]
    }

    #[test]
    fn grid_point_matches_wls_oracle() {
        let (x, y) = sample(2, 300);
        for degree in [1, 2] {
            let c = locpoly_smooth(&x, &y, Some(0.5), degree).unwrap();
            for idx in [0, 137, 200, 400] {
                let want = wls_oracle(&x, &y, c.x[idx], 0.5, degree);
                assert_abs_diff_eq!(c.y[idx], want, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn density_integrates_to_one() {
        let (x, _) = sample(3, 500);
        let d = density_curve(&x, None).unwrap();
        let area: f64 = d.x.windows(2).zip(d.y.windows(2)).map(|(gx, gy)| 0.5 * (gx[1] - gx[0]) * (gy[0] + gy[1])).sum();
        assert!((area - 1.0).abs() < 0.01, "{area}");
    }

    #[test]
    fn density_symmetric_sample() {
        let half = [0.3, 1.1, 1.7, 2.0, 4.5];
        let x: Vec<f64> = half.iter().flat_map(|v| [*v, -*v]).collect();
        let d = density_curve(&x, None).unwrap();
        for i in 0..GRID_POINTS {
            assert_abs_diff_eq!(d.y[i], d.y[GRID_POINTS - 1 - i], epsilon = 1e-10);
        }
    }

    #[test]
    fn density_matches_direct_sum() {
        let (x, _) = sample(4, 100);
        let h = 0.37;
        let d = density_curve(&x, Some(h)).unwrap();
        let g = d.x[123];
        let direct: f64 = x
            .iter()
            .map(|xi| (-(g - xi) * (g - xi) / (2.0 * h * h)).exp() / (h * (2.0 * std::f64::consts::PI).sqrt()))
            .sum::<f64>()
            / x.len() as f64;
        assert_abs_diff_eq!(d.y[123], direct, epsilon = 1e-12);
    }

    #[test]
    fn density_errors_and_bandwidth() {
        assert!(matches!(density_curve(&[2., 2., 2.], None), Err(Error::ZeroVariance)));
        assert!(density_curve(&[1.0], None).is_err());
        // R: bw.nrd0(c(1, 2, 3, 4, 10)) = 0.9 * min(sd, IQR/1.34) * 5^-0.2
        let bw = silverman_bandwidth(&[1., 2., 3., 4., 10.]).unwrap();
        assert_abs_diff_eq!(bw, 0.9 * (2.0 / 1.34) * 5f64.powf(-0.2), epsilon = 1e-12);
    }

    #[test]
    fn scaling() {
        let c = Curve { x: vec![0., 1.], y: vec![0.5, 2.0], bandwidth: 1.0 };
        assert_eq!(c.scaled_to_max(4.0).y, vec![1.0, 4.0]);
    }
}
