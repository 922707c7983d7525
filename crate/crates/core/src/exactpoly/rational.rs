//! Exact rational scalars.
//!
//! Coefficients are GMP-backed [`rug::Rational`] values, which are always
//! stored in lowest terms with a positive denominator.

use std::str::FromStr;

pub use rug::{Integer, Rational};

use super::PolyError;

/// Parses a decimal or fraction literal into an exact rational.
///
/// Accepts an optional sign (ASCII `-`/`+` or the Unicode minus sign),
/// digits with an optional fractional part, an optional exponent
/// (`1.5e-3`), or a fraction `p/q`.
pub fn parse_rational(text: &str) -> Result<Rational, PolyError> {
    let s = text.trim().replace('\u{2212}', "-");
    let bad = || PolyError::Parse(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if s.contains('/') {
        let (num, den) = s.split_once('/').ok_or_else(bad)?;
        let num = Integer::from_str(num.trim()).map_err(|_| bad())?;
        let den = Integer::from_str(den.trim()).map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational::from((num, den)));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (&s[..], 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut num = Integer::from_str(&all_digits).map_err(|_| bad())?;
    if negative {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i64;
    let scale_u32 = u32::try_from(scale.unsigned_abs()).map_err(|_| bad())?;
    let power = Integer::from(Integer::u_pow_u(10, scale_u32));
    Ok(if scale >= 0 {
        Rational::from(num * power)
    } else {
        Rational::from((num, power))
    })
}

/// Exact conversion of a finite double.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_f64(x)
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Integer {
    let mut lcm = Integer::from(1);
    for v in values {
        lcm.lcm_mut(v.denom());
    }
    lcm
}

/// Rounds to the nearest double, saturating to ±inf on overflow.
pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(parse_rational("-0.65").unwrap(), Rational::from((-13, 20)));
        assert_eq!(parse_rational("\u{2212}0.65").unwrap(), Rational::from((-13, 20)));
        assert_eq!(parse_rational("188").unwrap(), Rational::from(188));
        assert_eq!(parse_rational("+.5").unwrap(), Rational::from((1, 2)));
        assert_eq!(parse_rational("1.5e2").unwrap(), Rational::from(150));
        assert_eq!(parse_rational("25e-2").unwrap(), Rational::from((1, 4)));
        assert_eq!(parse_rational("6/-4").unwrap(), Rational::from((-3, 2)));
        assert_eq!(parse_rational("0.0").unwrap(), Rational::new());
    }

    #[test]
    fn malformed_literals_are_rejected() {
        for s in ["", "-", ".", "1.2.3", "abc", "1/0", "1e", "--1", "0x10"] {
            assert!(parse_rational(s).is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn lowest_terms_and_canonical_zero() {
        let r = parse_rational("-0.50").unwrap();
        assert_eq!(*r.numer(), -1);
        assert_eq!(*r.denom(), 2);
        let z = parse_rational("-0.000").unwrap();
        assert_eq!(*z.numer(), 0);
        assert_eq!(*z.denom(), 1);
    }

    #[test]
    fn doubles_convert_exactly() {
        assert_eq!(rational_from_f64(0.25).unwrap(), Rational::from((1, 4)));
        assert!(rational_from_f64(f64::NAN).is_none());
    }
}
