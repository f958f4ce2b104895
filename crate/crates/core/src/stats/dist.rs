//! Two-sided tail probabilities.

use statrs::function::beta::beta_reg;
use libm::erfc;

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
///
/// Evaluated as the regularized incomplete beta `I_{df/(df+t^2)}(df/2, 1/2)`,
/// which keeps full relative precision deep in the tail.
pub fn student_t_two_sided(t: f64, df: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t.is_infinite() {
        return 0.0;
    }
    let x = df / (df + t * t);
    beta_reg(df / 2.0, 0.5, x.clamp(0.0, 1.0)).clamp(0.0, 1.0)
}

/// P(|Z| >= |z|) for a standard normal.
pub fn normal_two_sided(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    erfc(z.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0)
}
