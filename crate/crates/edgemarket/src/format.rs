/// Significant digits written to CSV output.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Decimal rendering of `v` rounded to 12 significant digits, without
/// trailing zeros or exponent. `-0` prints as `0`.
pub fn sig(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v)
        .parse()
        .expect("round trip");
    if rounded == 0.0 {
        "0".to_owned()
    } else {
        rounded.to_string()
    }
}

pub fn flag(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// `true`/`false`, or an empty field when the value is not applicable.
pub fn opt_flag(b: Option<bool>) -> &'static str {
    b.map_or("", flag)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig(65.42268221446146), "65.4226822145");
        assert_eq!(sig(0.6585638860649037), "0.658563886065");
        assert_eq!(sig(100.0), "100");
        assert_eq!(sig(-0.0), "0");
        assert_eq!(sig(1e-3), "0.001");
        assert_eq!(sig(-517.4658632199), "-517.46586322");
        assert_eq!(sig(f64::NAN), "NaN");
    }
}
