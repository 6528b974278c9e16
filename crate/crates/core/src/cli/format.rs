//! Numeric formatting shared by all text and CSV output.

/// Six significant digits. Fixed notation for magnitudes in `[1e-4, 1e9)`,
/// scientific otherwise; trailing zeros are trimmed but a fixed-notation
/// number always keeps one decimal.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // Round first so the exponent reflects the printed mantissa (9.999996 → 10).
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (5 - exp).max(1) as usize;
        let fixed = format!("{:.*}", decimals, mantissa.parse::<f64>().unwrap() * 10f64.powi(exp));
        trim(&fixed)
    } else {
        format!("{}e{}", trim(mantissa).trim_end_matches(".0"), exp)
    }
}

fn trim(s: &str) -> String {
    if !s.contains('.') {
        return format!("{s}.0");
    }
    let t = s.trim_end_matches('0');
    if t.ends_with('.') {
        format!("{t}0")
    } else {
        t.to_string()
    }
}
