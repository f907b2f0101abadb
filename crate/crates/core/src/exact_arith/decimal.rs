use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Reads a literal of the form `\d+(\.\d+)?` as the exact rational it denotes.
pub fn parse_decimal_upper(text: &str) -> Result<Rational> {
    let bad = |reason| Error::MalformedDecimal {
        text: text.to_string(),
        reason,
    };
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (text, None),
    };
    if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad("integer part must be one or more digits"));
    }
    let frac = frac_part.unwrap_or("");
    if frac_part.is_some() && frac.is_empty() {
        return Err(bad("missing digits after '.'"));
    }
    if !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad("fractional part must be digits"));
    }
    let digits: BigInt = format!("{int_part}{frac}")
        .parse()
        .map_err(|_| bad("unparseable digits"))?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    Rational::new(digits, scale)
}

/// Renders `q` with exactly `frac_digits` digits after the point, or `None`
/// when that is not an exact representation.
pub fn format_decimal_exact(q: &Rational, frac_digits: usize) -> Option<String> {
    let scale = num_traits::pow(BigInt::from(10), frac_digits);
    let scaled = q.numer() * &scale;
    let (quot, rem) = scaled.div_rem(q.denom());
    if !rem.is_zero() {
        return None;
    }
    Some(render_scaled(&quot, frac_digits))
}

/// Renders the smallest decimal with `frac_digits` digits that is `>= q`.
pub fn format_decimal_upper(q: &Rational, frac_digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), frac_digits);
    let scaled = q.numer() * &scale;
    let quot = Integer::div_ceil(&scaled, q.denom());
    render_scaled(&quot, frac_digits)
}

fn render_scaled(scaled: &BigInt, frac_digits: usize) -> String {
    let sign = if scaled.is_negative() { "-" } else { "" };
    let digits = scaled.abs().to_string();
    if frac_digits == 0 {
        return format!("{sign}{digits}");
    }
    let padded = format!("{digits:0>width$}", width = frac_digits + 1);
    let (i, f) = padded.split_at(padded.len() - frac_digits);
    format!("{sign}{i}.{f}")
}
