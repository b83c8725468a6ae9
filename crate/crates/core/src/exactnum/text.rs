//! Text syntax: `p/q` (or a bare integer) for rationals and `p/q+r/s*sqrt5`
//! for elements of Q(√5). No whitespace; `-` may appear in numerators.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{quad_cmp, QuadRational, Rational};
use crate::error::{Error, Result};

pub fn rational_text(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn quad_text(x: &QuadRational) -> String {
    match x.as_rational() {
        Some(p) => rational_text(p),
        None => format!(
            "{}+{}*sqrt5",
            rational_text(x.rational_part()),
            rational_text(x.surd_part())
        ),
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::Parse(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let valid = |t: &str, allow_sign: bool| {
        let digits = if allow_sign { t.strip_prefix('-').unwrap_or(t) } else { t };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(n, true) || !valid(d, false) {
        return Err(err());
    }
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

/// Accepts a plain rational or `A+B*sqrt5`, `A-B*sqrt5`, `A+-B*sqrt5`,
/// `B*sqrt5`, `A+sqrt5`, `sqrt5`, `-sqrt5`.
pub fn parse_quad(s: &str) -> Result<QuadRational> {
    let err = || Error::Parse(s.to_string());
    let Some(head) = s.strip_suffix("sqrt5") else {
        return parse_rational(s).map(QuadRational::from);
    };
    let head = match head.strip_suffix('*') {
        Some(h) if !h.is_empty() && !h.ends_with(['+', '-']) => h,
        Some(_) => return Err(err()),
        None => head,
    };
    // Split at the first sign that is not a leading sign and does not follow
    // another sign ("7/2+-3/2" splits at '+').
    let bytes = head.as_bytes();
    let split = (1..bytes.len()).find(|&i| {
        matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'+' | b'-')
    });
    let (p, q) = match split {
        Some(i) => (&head[..i], &head[i..]),
        None => ("0", head),
    };
    let q = q.strip_prefix('+').unwrap_or(q);
    let p = parse_rational(p).map_err(|_| err())?;
    let q = match q {
        "" => Rational::one(),
        "-" => -Rational::one(),
        _ => parse_rational(q).map_err(|_| err())?,
    };
    Ok(QuadRational::new(p, q))
}

fn pow10(digits: usize) -> BigInt {
    num_traits::pow(BigInt::from(10), digits)
}

fn render_scaled(n: &BigInt, digits: usize) -> String {
    let neg = n.sign() == Sign::Minus;
    let mut s = n.abs().to_string();
    if digits > 0 {
        if s.len() <= digits {
            s = "0".repeat(digits + 1 - s.len()) + &s;
        }
        s.insert(s.len() - digits, '.');
    }
    if neg && s.bytes().any(|b| b.is_ascii_digit() && b != b'0') {
        s.insert(0, '-');
    }
    s
}

/// Decimal rendering rounded half-up at `digits` places. Presentation only.
pub fn decimal_rational(x: &Rational, digits: usize) -> String {
    let scaled = x * Rational::from_integer(pow10(digits)) + Rational::new(1.into(), 2.into());
    render_scaled(&scaled.floor().to_integer(), digits)
}

/// floor(q·√5) for rational q, by integer square roots.
fn floor_surd(q: &Rational) -> BigInt {
    if q.is_zero() {
        return BigInt::zero();
    }
    // |q|·√5 = √(5 n²) / d
    let n = q.numer().abs();
    let d = q.denom();
    let root = (BigInt::from(5) * &n * &n).sqrt();
    let fl = root.div_floor(d);
    if q.is_positive() {
        fl
    } else {
        // irrational, so ceil = floor + 1
        -(fl + BigInt::one())
    }
}

pub fn decimal_quad(x: &QuadRational, digits: usize) -> String {
    if let Some(r) = x.as_rational() {
        return decimal_rational(r, digits);
    }
    let scale = Rational::from_integer(pow10(digits));
    let y = &(x * &scale) + &Rational::new(1.into(), 2.into());
    // floor(p + q√5) is floor(p) + floor(q√5) or one more.
    let mut k = y.rational_part().floor().to_integer() + floor_surd(y.surd_part());
    let next = QuadRational::from(Rational::from_integer(&k + BigInt::one()));
    if quad_cmp(&y, &next) != Ordering::Less {
        k += BigInt::one();
    }
    render_scaled(&k, digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    #[test]
    fn rational_roundtrip() {
        for x in [rat(7, 2), rat(-3, 8), int(0), int(-12), rat(127, 24)] {
            assert_eq!(parse_rational(&rational_text(&x)).unwrap(), x);
        }
        assert_eq!(rational_text(&rat(4, 2)), "2");
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
    }

    #[test]
    fn rational_rejects() {
        for s in ["", "1/0", "1/-2", "a", "1 /2", "--1", "1/2/3", "+1"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn quad_forms() {
        let lo = QuadRational::new(rat(7, 2), rat(-3, 2));
        assert_eq!(quad_text(&lo), "7/2+-3/2*sqrt5");
        assert_eq!(parse_quad("7/2+-3/2*sqrt5").unwrap(), lo);
        assert_eq!(parse_quad("7/2-3/2*sqrt5").unwrap(), lo);
        assert_eq!(parse_quad("sqrt5").unwrap(), QuadRational::sqrt5());
        assert_eq!(parse_quad("-sqrt5").unwrap(), -QuadRational::sqrt5());
        assert_eq!(parse_quad("4+sqrt5").unwrap(), QuadRational::new(int(4), int(1)));
        assert_eq!(parse_quad("-7/2+3*sqrt5").unwrap(), QuadRational::new(rat(-7, 2), int(3)));
        assert_eq!(parse_quad("2*sqrt5").unwrap(), QuadRational::new(int(0), int(2)));
        assert_eq!(parse_quad("22/3").unwrap(), QuadRational::from(rat(22, 3)));
        for s in ["*sqrt5", "1+*sqrt5", "sqrt", "1+2*sqrt7"] {
            assert!(parse_quad(s).is_err(), "{s}");
        }
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal_rational(&rat(1, 3), 12), "0.333333333333");
        assert_eq!(decimal_rational(&rat(2, 3), 12), "0.666666666667");
        assert_eq!(decimal_rational(&rat(-127, 24), 4), "-5.2917");
        assert_eq!(decimal_rational(&int(5), 2), "5.00");
        assert_eq!(decimal_quad(&QuadRational::sqrt5(), 12), "2.236067977500");
        let hi = QuadRational::new(rat(7, 2), rat(3, 2));
        assert_eq!(decimal_quad(&hi, 12), "6.854101966250");
        let lo = QuadRational::new(rat(7, 2), rat(-3, 2));
        assert_eq!(decimal_quad(&lo, 12), "0.145898033750");
        assert_eq!(decimal_quad(&-QuadRational::sqrt5(), 3), "-2.236");
    }
}
