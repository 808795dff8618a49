//! Shared plain-text formatting for CSV artifacts.

/// 17 significant digits; round-trips every f64 and keeps output byte-stable.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
