//! Exact number systems: big rationals, the real quadratic field Q(√5), and
//! truncated univariate power series over Q.
//!
//! No floating point enters any comparison made in this crate. Decimal
//! renderings produced here are for display only.

mod quad;
mod series;
mod text;

pub use quad::{quad_cmp, QuadRational};
pub use series::{binomial_series, invert_series, UniSeries};
pub use text::{
    decimal_quad, decimal_rational, parse_quad, parse_rational, quad_text, rational_text,
};

use num_bigint::BigInt;
use num_rational::BigRational;

pub type Rational = BigRational;

/// `n/d` as a reduced rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Serde adapters writing exact values in the text syntax (`p/q`, `p/q+r/s*sqrt5`).
pub mod serde_text {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use super::{parse_quad, parse_rational, quad_text, rational_text, QuadRational, Rational};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_text(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(x) => s.serialize_some(&rational_text(x)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| parse_rational(&s).map_err(D::Error::custom))
                .transpose()
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&rational_text(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse_rational(s).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod quad {
        use super::*;

        pub fn serialize<S: Serializer>(x: &QuadRational, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&quad_text(x))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<QuadRational, D::Error> {
            let s = String::deserialize(d)?;
            parse_quad(&s).map_err(D::Error::custom)
        }
    }
}
