//! Exact rational arithmetic for similarities, supports and thresholds.
//!
//! All similarity values, supports and thresholds are kept as exact ratios so
//! that threshold comparisons are reproducible; decimal rendering happens only
//! at output boundaries.

use num_rational::Ratio;
use thiserror::Error;

pub type Rational = Ratio<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`: expected a decimal like 0.7 or a fraction like 7/10")]
pub struct ParseRationalError(pub String);

/// Parses `"1"`, `"0.7"`, `".25"` or `"7/10"` into an exact ratio.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    let err = || ParseRationalError(text.to_string());

    if let Some((num, den)) = s.split_once('/') {
        let n: u64 = num.trim().parse().map_err(|_| err())?;
        let d: u64 = den.trim().parse().map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }

    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    // 10^19 overflows u64; refuse pathological precision instead of rounding.
    if frac_part.len() > 18 {
        return Err(err());
    }
    let int: u64 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| err())? };
    let scale = 10u64.pow(frac_part.len() as u32);
    let frac: u64 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| err())? };
    let numer = int.checked_mul(scale).and_then(|v| v.checked_add(frac)).ok_or_else(err)?;
    Ok(Rational::new(numer, scale))
}

/// Renders a ratio as a decimal with `places` digits, rounding half away
/// from zero: `format_decimal(1/3, 2) == "0.33"`.
pub fn format_decimal(value: Rational, places: usize) -> String {
    let scale = 10u128.pow(places as u32);
    let numer = *value.numer() as u128;
    let denom = *value.denom() as u128;
    let scaled = (numer * scale + denom / 2) / denom;
    let int = scaled / scale;
    if places == 0 {
        return int.to_string();
    }
    let frac = scaled % scale;
    format!("{int}.{frac:0places$}", places = places)
}

/// Renders a ratio exactly: integers as-is, everything else as `n/d`.
pub fn format_exact(value: Rational) -> String {
    if *value.denom() == 1 {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}
