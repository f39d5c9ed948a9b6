//! Numeric output formatting: 9 significant digits, printf `%g` style
//! (trailing zeros trimmed, scientific notation outside a sane range).

pub fn fmt_g9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_decimal(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.8e}");
        let (mantissa, exponent) = s.split_once('e').expect("e-format");
        format!("{}e{}", trim_decimal(mantissa.to_string()), exponent)
    }
}

fn trim_decimal(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}
