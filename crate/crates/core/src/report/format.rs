/// Renders a p-value for tables: three decimals from 0.001 up, otherwise
/// `<1e-k` with the largest k such that p < 10^-k, capped at 323.
pub fn format_p(p: f64) -> String {
    if p.is_nan() {
        return "NA".to_string();
    }
    let p = p.clamp(0.0, 1.0);
    if p >= 0.001 {
        return format!("{p:.3}");
    }
    let below = |k: i32| p < format!("1e-{k}").parse::<f64>().unwrap_or(0.0);
    let mut k = 3;
    while k < 323 && below(k + 1) {
        k += 1;
    }
    format!("<1e-{k}")
}

/// Fixed-precision number, or `NA` for missing and non-finite values.
pub fn format_num(v: Option<f64>, decimals: usize) -> String {
    match v {
        Some(v) if v.is_finite() => {
            let s = format!("{v:.decimals$}");
            // Avoid "-0.000".
            if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
                s.trim_start_matches('-').to_string()
            } else {
                s
            }
        }
        Some(v) if v.is_infinite() => if v > 0.0 { "Inf" } else { "-Inf" }.to_string(),
        _ => "NA".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_value_examples() {
        assert_eq!(format_p(0.376), "0.376");
        assert_eq!(format_p(0.001), "0.001");
        assert_eq!(format_p(1.0), "1.000");
        assert_eq!(format_p(1e-9), "<1e-8");
        assert_eq!(format_p(2e-9), "<1e-8");
        assert_eq!(format_p(9e-10), "<1e-9");
        assert_eq!(format_p(0.0009), "<1e-3");
        assert_eq!(format_p(0.0), "<1e-323");
        assert_eq!(format_p(5e-324), "<1e-323");
        assert_eq!(format_p(f64::NAN), "NA");
    }

    #[test]
    fn largest_k_rule_matches_brute_force() {
        for e in 4..320 {
            for m in [1.0, 1.5, 9.99] {
                let p: f64 = format!("{m}e-{e}").parse().unwrap();
                let k = (3..=323).filter(|&k| p < format!("1e-{k}").parse::<f64>().unwrap()).max().unwrap();
                assert_eq!(format_p(p), format!("<1e-{k}"));
            }
        }
    }

    #[test]
    fn numbers() {
        assert_eq!(format_num(Some(-0.0001), 3), "0.000");
        assert_eq!(format_num(Some(-0.25), 2), "-0.25");
        assert_eq!(format_num(None, 2), "NA");
        assert_eq!(format_num(Some(f64::NEG_INFINITY), 2), "-Inf");
    }
}
