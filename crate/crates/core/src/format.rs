//! Number formatting for the CSV outputs (12 significant digits).

/// `x` rounded to `digits` significant digits, printed in its shortest
/// round-trip form (`1.0`, `-0.577350269190`, `1e-13`).
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.0".to_string();
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x);
    format!("{rounded:?}")
}

pub fn csv(x: f64) -> String {
    sig(x, 12)
}
