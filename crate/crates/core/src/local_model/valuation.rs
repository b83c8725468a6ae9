use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::exactnum::Rational;

/// Monomial valuation with coprime weights `a` on `z` and `b` on `w`.
///
/// As a function on forms this is the integer weighted order
/// `min{a·i + b·j}` over the `(z, w)`-support; the normalized valuation of
/// slope `t = b/a` is that order divided by `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonomialValuation {
    a: u64,
    b: u64,
}

impl MonomialValuation {
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(precondition(format!("weights must be positive, got ({a},{b})")));
        }
        if a.gcd(&b) != 1 {
            return Err(precondition(format!("weights must be coprime, got ({a},{b})")));
        }
        Ok(Self { a, b })
    }

    /// The valuation whose normalization is `v_t`, `t = b/a` in lowest terms.
    pub fn from_slope(t: &Rational) -> Result<Self> {
        use num_traits::{Signed, ToPrimitive};
        if !t.is_positive() {
            return Err(precondition("slope must be positive"));
        }
        let (b, a) = (t.numer().to_u64(), t.denom().to_u64());
        match (a, b) {
            (Some(a), Some(b)) => Self::new(a, b),
            _ => Err(precondition("slope numerator/denominator exceed 64 bits")),
        }
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn slope(&self) -> Rational {
        Rational::new(self.b.into(), self.a.into())
    }

    /// The valuation with the branch roles exchanged.
    pub fn swapped(&self) -> Self {
        Self { a: self.b, b: self.a }
    }

    pub fn weight(&self, (i, j): (u32, u32)) -> u64 {
        self.a * u64::from(i) + self.b * u64::from(j)
    }

    /// Normalized value `ord / a`.
    pub fn normalize(&self, ord: u64) -> Rational {
        Rational::new(ord.into(), self.a.into())
    }

    /// Log discrepancy of the exceptional divisor of the weighted blowup: `a + b`.
    pub fn log_discrepancy(&self) -> u64 {
        self.a + self.b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn construction() {
        assert!(MonomialValuation::new(2, 4).is_err());
        assert!(MonomialValuation::new(0, 1).is_err());
        let v = MonomialValuation::from_slope(&rat(26, 4)).unwrap();
        assert_eq!((v.a(), v.b()), (2, 13));
        assert_eq!(v.slope(), rat(13, 2));
        assert_eq!(v.normalize(26), rat(13, 1));
        assert!(MonomialValuation::from_slope(&rat(-1, 2)).is_err());
    }
}
