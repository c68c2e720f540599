//! Exact rational arithmetic helpers.
//!
//! Scores, weights and percentages are kept as exact fractions so that
//! threshold comparisons and optimality checks never depend on rounding.
//! Values are rounded only when rendered.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

/// Exact rational number used throughout the crate.
pub type Rational = num_rational::Ratio<i64>;

/// Largest number of fractional digits accepted by [`parse_decimal`].
const MAX_FRACTION_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid decimal number {input:?}: {reason}")]
pub struct ParseDecimalError {
    pub input: String,
    pub reason: &'static str,
}

/// Parses a plain decimal literal (`"0.95"`, `"-2"`, `"41.30"`, `"1e-3"`) into an
/// exact rational.
pub fn parse_decimal(input: &str) -> Result<Rational, ParseDecimalError> {
    let err = |reason| ParseDecimalError {
        input: input.to_string(),
        reason,
    };
    let text = input.trim();
    if text.is_empty() {
        return Err(err("empty"));
    }

    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = text[pos + 1..].parse().map_err(|_| err("bad exponent"))?;
            (&text[..pos], exp)
        }
        None => (text, 0),
    };

    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err("no digits"));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err("not a number"));
    }
    let frac_part = frac_part.trim_end_matches('0');
    if frac_part.len() > MAX_FRACTION_DIGITS {
        return Err(err("too many fractional digits"));
    }

    let all_digits = format!("{int_part}{frac_part}");
    let numer: i64 = if all_digits.trim_start_matches('0').is_empty() {
        0
    } else {
        all_digits
            .trim_start_matches('0')
            .parse()
            .map_err(|_| err("out of range"))?
    };
    let scale = exponent - frac_part.len() as i32;
    if scale.unsigned_abs() > 18 {
        return Err(err("exponent out of range"));
    }
    let power = 10i64.pow(scale.unsigned_abs());
    let value = if scale >= 0 {
        Rational::from_integer(numer.checked_mul(power).ok_or_else(|| err("out of range"))?)
    } else {
        Rational::new(numer, power)
    };
    Ok(if negative { -value } else { value })
}

/// Accepts everything [`parse_decimal`] does plus `numer/denom` fractions,
/// the form [`format_rational`] emits for non-terminating values.
pub fn parse_rational(input: &str) -> Result<Rational, ParseDecimalError> {
    let Some((n, d)) = input.split_once('/') else {
        return parse_decimal(input);
    };
    let err = |reason| ParseDecimalError {
        input: input.to_string(),
        reason,
    };
    let numer: i64 = n.trim().parse().map_err(|_| err("bad numerator"))?;
    let denom: i64 = d.trim().parse().map_err(|_| err("bad denominator"))?;
    if denom == 0 {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}

/// True when `0 <= value <= 1`.
pub fn is_unit_interval(value: &Rational) -> bool {
    !value.is_negative() && *value <= Rational::one()
}

/// `100 * part / whole`, exactly. `whole` must be non-zero.
pub fn percent(part: usize, whole: usize) -> Rational {
    assert!(whole > 0, "percentage of an empty population");
    Rational::new(100 * part as i64, whole as i64)
}

/// Rounds half-up to `decimals` places and renders with exactly that many
/// fractional digits. Only non-negative values occur in practice; negative
/// values round half away from zero.
pub fn format_fixed(value: &Rational, decimals: u32) -> String {
    let scale = 10i64.pow(decimals);
    let scaled = value.abs() * Rational::from_integer(scale);
    let half = Rational::new(1, 2);
    let rounded = (scaled + half).floor().to_integer();
    let (int, frac) = rounded.div_rem(&scale);
    let sign = if value.is_negative() && rounded != 0 { "-" } else { "" };
    if decimals == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0width$}", width = decimals as usize)
    }
}

/// Percentage rendering used by every table: one decimal, half-up.
pub fn format_percent(value: &Rational) -> String {
    format_fixed(value, 1)
}

/// Renders a rational as a short decimal when it has a finite expansion
/// (`"0.95"`, `"2"`), otherwise as `numer/denom`.
pub fn format_rational(value: &Rational) -> String {
    DisplayRational(value).to_string()
}

struct DisplayRational<'a>(&'a Rational);

impl fmt::Display for DisplayRational<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let value = self.0;
        if value.is_integer() {
            return write!(f, "{}", value.to_integer());
        }
        let mut denom = *value.denom();
        let mut digits = 0u32;
        while denom % 10 == 0 {
            denom /= 10;
            digits += 1;
        }
        let mut twos = 0u32;
        while denom % 2 == 0 {
            denom /= 2;
            twos += 1;
        }
        let mut fives = 0u32;
        while denom % 5 == 0 {
            denom /= 5;
            fives += 1;
        }
        if denom != 1 {
            return write!(f, "{}/{}", value.numer(), value.denom());
        }
        f.write_str(&format_fixed(value, digits + twos.max(fives)))
    }
}

/// Lossy conversion for logging and benchmarks only.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn parses_plain_decimals() {
        assert_eq!(parse_decimal("0.95").unwrap(), Rational::new(19, 20));
        assert_eq!(parse_decimal("1").unwrap(), Rational::one());
        assert_eq!(parse_decimal("1.0").unwrap(), Rational::one());
        assert_eq!(parse_decimal(".5").unwrap(), Rational::new(1, 2));
        assert_eq!(parse_decimal("-2.50").unwrap(), Rational::new(-5, 2));
        assert_eq!(parse_decimal("41.3").unwrap(), Rational::new(413, 10));
        assert_eq!(parse_decimal(" 0 ").unwrap(), Rational::zero());
        assert_eq!(parse_decimal("1e-3").unwrap(), Rational::new(1, 1000));
        assert_eq!(parse_decimal("2.5E2").unwrap(), Rational::from_integer(250));
    }

    #[test]
    fn parses_fractions() {
        assert_eq!(parse_rational("7/3").unwrap(), Rational::new(7, 3));
        assert_eq!(parse_rational("0.25").unwrap(), Rational::new(1, 4));
        assert_eq!(parse_rational(&format_rational(&Rational::new(2, 3))).unwrap(), Rational::new(2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/2").is_err());
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1.2.3", "--1", ".", "1e", "0x10", "NaN", "1,5"] {
            assert!(parse_decimal(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn rounds_half_up_at_one_decimal() {
        assert_eq!(format_percent(&Rational::new(200, 3)), "66.7");
        assert_eq!(format_percent(&Rational::new(125, 10)), "12.5");
        assert_eq!(format_percent(&Rational::new(1225, 100)), "12.3");
        assert_eq!(format_percent(&Rational::new(1224, 100)), "12.2");
        assert_eq!(format_percent(&Rational::from_integer(100)), "100.0");
        assert_eq!(format_percent(&Rational::zero()), "0.0");
    }

    #[test]
    fn renders_finite_expansions_compactly() {
        assert_eq!(format_rational(&Rational::new(19, 20)), "0.95");
        assert_eq!(format_rational(&Rational::from_integer(3)), "3");
        assert_eq!(format_rational(&Rational::new(1, 8)), "0.125");
        assert_eq!(format_rational(&Rational::new(2, 3)), "2/3");
    }
}
