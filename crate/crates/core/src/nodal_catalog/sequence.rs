use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{precondition, Error, Result};
use crate::exactnum::{QuadRational, Rational};

/// `d_0 = d_1 = 1`, `d_(n+1) = 3·d_n − d_(n−1)`: 1, 1, 2, 5, 13, 34, 89, …
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSequence {
    values: Vec<BigInt>,
}

impl DSequence {
    /// `d_0..=d_n`, with the sequence identities checked.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(precondition("need at least d_0, d_1, d_2"));
        }
        let s = Self::unchecked(n);
        s.verify()?;
        Ok(s)
    }

    pub(crate) fn unchecked(n: usize) -> Self {
        let mut values = vec![BigInt::one(), BigInt::one()];
        while values.len() <= n {
            let k = values.len();
            values.push(BigInt::from(3) * &values[k - 1] - &values[k - 2]);
        }
        values.truncate(n + 1);
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn get(&self, n: usize) -> &BigInt {
        &self.values[n]
    }

    /// Markov relation, `d_n² + 1 = d_(n−1)·d_(n+1)`, `d_n = F_(2n−1)` and
    /// `3 ∤ d_n`, for every index where they make sense.
    pub fn verify(&self) -> Result<()> {
        let d = &self.values;
        let fail = |what: &str, n: usize| Err(Error::Verification(format!("{what} fails at n = {n}")));
        // F_0 = 0, F_1 = 1, …; d_0 stands for F_(−1) = 1
        let mut fib = vec![BigInt::zero(), BigInt::one()];
        while fib.len() < 2 * d.len() {
            let k = fib.len();
            fib.push(&fib[k - 1] + &fib[k - 2]);
        }
        if !d[0].is_one() {
            return fail("d_0 = F_(-1)", 0);
        }
        for n in 1..d.len() {
            if d[n] != fib[2 * n - 1] {
                return fail("d_n = F_(2n-1)", n);
            }
        }
        for n in 0..d.len() {
            if d[n].is_multiple_of(&BigInt::from(3)) {
                return fail("3 does not divide d_n", n);
            }
            if n + 1 < d.len() {
                let lhs = BigInt::one() + &d[n] * &d[n] + &d[n + 1] * &d[n + 1];
                if lhs != BigInt::from(3) * &d[n] * &d[n + 1] {
                    return fail("Markov relation", n);
                }
            }
            if n >= 1 && n + 1 < d.len() {
                if &d[n] * &d[n] + BigInt::one() != &d[n - 1] * &d[n + 1] {
                    return fail("d_n^2 + 1 = d_(n-1) d_(n+1)", n);
                }
                if BigInt::from(3) * &d[n] - &d[n - 1] != d[n + 1] {
                    return fail("recurrence", n);
                }
            }
        }
        Ok(())
    }
}

/// `d_n` as a machine integer (panics past `u64`).
pub fn d(n: usize) -> u64 {
    let (mut x, mut y) = (1u64, 1u64);
    for _ in 0..n {
        let z = 3 * y - x;
        x = y;
        y = z;
    }
    x
}

/// `τ = (7 + 3√5)/2`, the limit of the breakpoints.
pub fn tau() -> QuadRational {
    QuadRational::new(Rational::new(7.into(), 2.into()), Rational::new(3.into(), 2.into()))
}

/// `τ' = (7 − 3√5)/2 = 1/τ`.
pub fn tau_conjugate() -> QuadRational {
    tau().conjugate()
}

/// Breakpoints `t_n = d_(n+1)/d_(n−1)` (`t_0 = 1`) and `t'_n = d_(n+1)²/d_n²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Breakpoints {
    seq: DSequence,
}

impl Breakpoints {
    /// Breakpoints up to index `n`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(precondition("need at least t_1"));
        }
        Ok(Self { seq: DSequence::unchecked(n + 1) })
    }

    pub fn max_index(&self) -> usize {
        self.seq.len() - 2
    }

    pub fn t(&self, n: usize) -> Rational {
        if n == 0 {
            return Rational::one();
        }
        Rational::new(self.seq.get(n + 1).clone(), self.seq.get(n - 1).clone())
    }

    /// Defined for `n >= 0`; `t'_0 = 1`.
    pub fn t_prime(&self, n: usize) -> Rational {
        let (x, y) = (self.seq.get(n + 1), self.seq.get(n));
        Rational::new(x * x, y * y)
    }

    pub fn ts(&self) -> Vec<Rational> {
        (0..=self.max_index()).map(|n| self.t(n)).collect()
    }
}

/// Index `n` with `t_n <= t <= t_(n+1)` for `1 <= t < τ` (the least one).
pub fn piece_index(t: &QuadRational) -> Option<usize> {
    if t < &QuadRational::from(1) || t >= &tau() {
        return None;
    }
    // cur = d_n, next = d_(n+1)
    let (mut cur, mut next) = (BigInt::one(), BigInt::one());
    let mut n = 0usize;
    loop {
        // t_(n+1) = d_(n+2)/d_n
        let after = BigInt::from(3) * &next - &cur;
        let t_next = QuadRational::from(Rational::new(after.clone(), cur.clone()));
        if t <= &t_next {
            return Some(n);
        }
        cur = next;
        next = after;
        n += 1;
    }
}

/// `d_n` exactly, for unbounded `n`.
pub fn d_big(n: usize) -> BigInt {
    DSequence::unchecked(n.max(1)).get(n).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{quad_cmp, rat};
    use std::cmp::Ordering;

    #[test]
    fn first_terms() {
        let s = DSequence::new(6).unwrap();
        let v: Vec<i64> = s.values().iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(v, vec![1, 1, 2, 5, 13, 34, 89]);
        assert_eq!(d(4), 13);
        assert!(DSequence::new(1).is_err());
    }

    #[test]
    fn identities_to_twenty() {
        DSequence::new(21).unwrap();
    }

    #[test]
    fn breakpoint_values() {
        let b = Breakpoints::new(10).unwrap();
        assert_eq!(b.t(0), rat(1, 1));
        assert_eq!(b.t(1), rat(2, 1));
        assert_eq!(b.t(2), rat(5, 1));
        assert_eq!(b.t(3), rat(13, 2));
        assert_eq!(b.t_prime(1), rat(4, 1));
        for n in 1..10 {
            assert!(b.t(n) < b.t_prime(n) && b.t_prime(n) < b.t(n + 1));
        }
        let t10 = QuadRational::from(b.t(10));
        assert_eq!(quad_cmp(&t10, &tau()), Ordering::Less);
        assert!(&tau() - &t10 < QuadRational::from(rat(1, 1_000_000)));
    }

    #[test]
    fn pieces() {
        assert_eq!(piece_index(&QuadRational::from(1)), Some(0));
        assert_eq!(piece_index(&QuadRational::from(2)), Some(0));
        assert_eq!(piece_index(&QuadRational::from(3)), Some(1));
        assert_eq!(piece_index(&QuadRational::from(rat(13, 2))), Some(2));
        assert_eq!(piece_index(&QuadRational::from(7)), None);
        assert_eq!(piece_index(&tau()), None);
        let just_below = &tau() - &QuadRational::from(rat(1, 10_000_000));
        assert!(piece_index(&just_below).unwrap() > 8);
    }
}
