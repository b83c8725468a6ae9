use num_traits::One;

use super::sequence::{d_big, piece_index, tau};
use crate::error::{precondition, Result};
use crate::exactnum::{QuadRational, Rational};

fn check_positive(t: &QuadRational) -> Result<()> {
    if !t.is_positive() {
        return Err(precondition(format!("t must be positive, got {t}")));
    }
    Ok(())
}

/// `d_(n+1)/d_n + (d_n/d_(n+1))·t`, the value on `[t_n, t_(n+1)]`.
pub fn piece_formula(n: usize, t: &QuadRational) -> QuadRational {
    let (dn, dn1) = (d_big(n), d_big(n + 1));
    let c = Rational::new(dn1.clone(), dn.clone());
    let slope = Rational::new(dn, dn1);
    &(t * &slope) + &c
}

/// `(t² + 11t + 1)/(3(t + 1))`, the value for `t >= τ`.
pub fn tail_formula(t: &QuadRational) -> QuadRational {
    let one = QuadRational::from(1);
    let num = &(&(t * t) + &(t * &Rational::from_integer(11.into()))) + &one;
    let den = &(t + &one) * &Rational::from_integer(3.into());
    &num / &den
}

/// `S(v_t)` for real quadratic `t > 0`.
pub fn s_exact(t: &QuadRational) -> Result<QuadRational> {
    check_positive(t)?;
    if t < &QuadRational::from(1) {
        let inv = t.recip().expect("t is positive");
        return Ok(t * &s_exact(&inv)?);
    }
    Ok(match piece_index(t) {
        Some(n) => piece_formula(n, t),
        None => {
            debug_assert!(t >= &tau());
            tail_formula(t)
        }
    })
}

pub fn s_exact_rational(t: &Rational) -> Result<Rational> {
    let s = s_exact(&QuadRational::from(t))?;
    Ok(s.as_rational().expect("rational input stays rational").clone())
}

/// `A(v_t) = 1 + t`.
pub fn a_invariant(t: &QuadRational) -> Result<QuadRational> {
    check_positive(t)?;
    Ok(t + &Rational::one())
}

pub fn a_invariant_rational(t: &Rational) -> Result<Rational> {
    Ok(a_invariant(&QuadRational::from(t))?.as_rational().cloned().expect("rational"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::nodal_catalog::Breakpoints;

    fn q(x: Rational) -> QuadRational {
        QuadRational::from(x)
    }

    #[test]
    fn examples() {
        assert_eq!(s_exact_rational(&int(1)).unwrap(), int(2));
        assert_eq!(s_exact_rational(&int(5)).unwrap(), rat(9, 2));
        assert_eq!(s_exact_rational(&int(7)).unwrap(), rat(127, 24));
        assert_eq!(s_exact_rational(&rat(1, 2)).unwrap(), rat(3, 2));
        assert_eq!(a_invariant_rational(&int(7)).unwrap(), int(8));
        assert!(s_exact_rational(&int(0)).is_err());
        assert!(a_invariant_rational(&int(-1)).is_err());
    }

    #[test]
    fn continuity_at_breakpoints() {
        let b = Breakpoints::new(8).unwrap();
        for n in 1..=6 {
            let t = q(b.t(n));
            assert_eq!(piece_formula(n - 1, &t), piece_formula(n, &t), "n = {n}");
        }
    }

    #[test]
    fn limit_at_tau() {
        // the piece formulas tend to 3 + √5 = tail(τ)
        let target = QuadRational::new(int(3), int(1));
        assert_eq!(tail_formula(&tau()), target);
        let b = Breakpoints::new(30).unwrap();
        let mut prev_gap: Option<QuadRational> = None;
        for n in 1..=30 {
            let gap = &target - &piece_formula(n, &q(b.t(n)));
            assert!(gap.is_positive());
            if let Some(p) = prev_gap {
                assert!(gap < p);
            }
            prev_gap = Some(gap);
        }
        assert!(prev_gap.unwrap() < q(rat(1, 1_000_000_000)));
    }

    #[test]
    fn reflection_identity() {
        for t in [rat(1, 3), rat(2, 7), rat(1, 9)] {
            let lhs = s_exact_rational(&t).unwrap();
            assert_eq!(lhs, &t * s_exact_rational(&t.recip()).unwrap());
        }
    }

    #[test]
    fn irrational_inputs() {
        let t = QuadRational::new(int(7), int(1));
        let s = s_exact(&t).unwrap();
        assert!(!s.is_rational());
        assert_eq!(s, tail_formula(&t));
        let t = QuadRational::new(int(4), int(1)); // ≈ 6.236 ∈ (t_2, t_3)
        assert_eq!(piece_index(&t), Some(2));
        assert_eq!(s_exact(&t).unwrap(), piece_formula(2, &t));
    }
}
