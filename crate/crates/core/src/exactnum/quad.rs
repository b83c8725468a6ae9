use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Rational;

/// An element `p + q·√5` of Q(√5), embedded in R with √5 > 0.
///
/// The pair `(p, q)` is unique for each element, so derived equality and
/// hashing are structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadRational {
    p: Rational,
    q: Rational,
}

impl QuadRational {
    pub fn new(p: Rational, q: Rational) -> Self {
        Self { p, q }
    }

    pub fn sqrt5() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn rational_part(&self) -> &Rational {
        &self.p
    }

    pub fn surd_part(&self) -> &Rational {
        &self.q
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.p)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Galois conjugate `p − q·√5`.
    pub fn conjugate(&self) -> Self {
        Self::new(self.p.clone(), -self.q.clone())
    }

    /// Field norm `p² − 5q²`.
    pub fn norm(&self) -> Rational {
        &self.p * &self.p - Rational::from_integer(5.into()) * &self.q * &self.q
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conjugate();
        Some(Self::new(c.p / &n, c.q / n))
    }

    /// Sign of the real number `p + q·√5`.
    pub fn signum(&self) -> Ordering {
        let zero = Rational::zero();
        let sp = self.p.cmp(&zero);
        let sq = self.q.cmp(&zero);
        match (sp, sq) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (a, b) if a == b => a,
            // Opposite signs: whichever of |p| and |q|·√5 is larger wins.
            // Squaring compares p² with 5q²; equality is impossible for q ≠ 0.
            (sp, _) => {
                let p2 = &self.p * &self.p;
                let q2 = Rational::from_integer(5.into()) * &self.q * &self.q;
                if p2 > q2 {
                    sp
                } else {
                    sp.reverse()
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.p.to_f64().unwrap_or(f64::NAN) + self.q.to_f64().unwrap_or(f64::NAN) * 5f64.sqrt()
    }
}

/// Exact ordering in the real embedding.
pub fn quad_cmp(x: &QuadRational, y: &QuadRational) -> Ordering {
    (x - y).signum()
}

impl From<Rational> for QuadRational {
    fn from(p: Rational) -> Self {
        Self::new(p, Rational::zero())
    }
}

impl From<&Rational> for QuadRational {
    fn from(p: &Rational) -> Self {
        Self::new(p.clone(), Rational::zero())
    }
}

impl From<i64> for QuadRational {
    fn from(n: i64) -> Self {
        Self::from(super::int(n))
    }
}

impl Ord for QuadRational {
    fn cmp(&self, other: &Self) -> Ordering {
        quad_cmp(self, other)
    }
}

impl PartialOrd for QuadRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QuadRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::quad_text(self))
    }
}

impl Neg for QuadRational {
    type Output = QuadRational;
    fn neg(self) -> QuadRational {
        QuadRational::new(-self.p, -self.q)
    }
}

impl Neg for &QuadRational {
    type Output = QuadRational;
    fn neg(self) -> QuadRational {
        -self.clone()
    }
}

impl<'a> Add<&'a QuadRational> for &'a QuadRational {
    type Output = QuadRational;
    fn add(self, rhs: &QuadRational) -> QuadRational {
        QuadRational::new(&self.p + &rhs.p, &self.q + &rhs.q)
    }
}

impl<'a> Sub<&'a QuadRational> for &'a QuadRational {
    type Output = QuadRational;
    fn sub(self, rhs: &QuadRational) -> QuadRational {
        QuadRational::new(&self.p - &rhs.p, &self.q - &rhs.q)
    }
}

impl<'a> Mul<&'a QuadRational> for &'a QuadRational {
    type Output = QuadRational;
    fn mul(self, rhs: &QuadRational) -> QuadRational {
        let five = Rational::from_integer(5.into());
        QuadRational::new(
            &self.p * &rhs.p + five * &self.q * &rhs.q,
            &self.p * &rhs.q + &self.q * &rhs.p,
        )
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<'a> Div<&'a QuadRational> for &'a QuadRational {
    type Output = QuadRational;
    /// Panics on division by zero, like `Rational`.
    fn div(self, rhs: &QuadRational) -> QuadRational {
        let inv = rhs.recip().expect("division by zero in Q(sqrt5)");
        self * &inv
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<QuadRational> for QuadRational {
            type Output = QuadRational;
            fn $m(self, rhs: QuadRational) -> QuadRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a QuadRational> for QuadRational {
            type Output = QuadRational;
            fn $m(self, rhs: &QuadRational) -> QuadRational {
                (&self).$m(rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Add<&Rational> for &QuadRational {
    type Output = QuadRational;
    fn add(self, rhs: &Rational) -> QuadRational {
        QuadRational::new(&self.p + rhs, self.q.clone())
    }
}

impl Mul<&Rational> for &QuadRational {
    type Output = QuadRational;
    fn mul(self, rhs: &Rational) -> QuadRational {
        QuadRational::new(&self.p * rhs, &self.q * rhs)
    }
}
