use num_traits::{One, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// A power series in one variable, known exactly modulo `x^(order+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniSeries {
    coeffs: Vec<Rational>,
}

impl UniSeries {
    /// Pads with zeros or drops coefficients so that exactly `order + 1` remain.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![Rational::one()], order)
    }

    /// The series `x`.
    pub fn x(order: usize) -> Self {
        Self::new(vec![Rational::zero(), Rational::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self {
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }

    /// `self ∘ inner`; requires `inner(0) = 0`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(crate::error::precondition(
                "inner series of a composition must vanish at 0",
            ));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        // Horner: (((f_n)·g + f_{n-1})·g + ...) + f_0
        let mut acc = Self::zero(n);
        for k in (0..=n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(k, c)| if k == 1 { c.is_one() } else { c.is_zero() })
    }
}

/// `(1 + x)^alpha` modulo `x^(order+1)`, coefficients `C(alpha, k)`.
pub fn binomial_series(alpha: &Rational, order: usize) -> UniSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c = Rational::one();
    coeffs.push(c.clone());
    for k in 1..=order {
        let k = Rational::from_integer(k.into());
        c = c * (alpha - &k + Rational::one()) / k;
        coeffs.push(c.clone());
    }
    UniSeries { coeffs }
}

/// Compositional inverse `g` of `f` with `f ∘ g = x` modulo `x^(order+1)`.
///
/// Coefficients are solved one degree at a time against a table of the
/// powers of the partial inverse; the result is checked by composing back.
pub fn invert_series(f: &UniSeries, order: usize) -> Result<UniSeries> {
    let f = f.truncate(order.max(1));
    if !f.coeff(0).is_zero() || f.coeff(1).is_zero() {
        return Err(Error::NotInvertible);
    }
    let f1 = f.coeff(1);
    let n = order;
    let mut g = vec![Rational::zero(); n + 1];
    if n >= 1 {
        g[1] = f1.recip();
    }
    // pow[j][k] = [x^k] g^j; only j <= k is ever nonzero.
    let mut pow: Vec<Vec<Rational>> = vec![vec![Rational::zero(); n + 1]; n + 1];
    if n >= 1 {
        pow[1][1] = g[1].clone();
    }
    for k in 2..=n {
        // [x^k] g^j for j >= 2 involves only g_1 .. g_{k-1}.
        for j in 2..=k {
            let mut s = Rational::zero();
            for l in 1..=(k - j + 1) {
                let p = &pow[j - 1][k - l];
                if !g[l].is_zero() && !p.is_zero() {
                    s += &g[l] * p;
                }
            }
            pow[j][k] = s;
        }
        let mut rhs = Rational::zero();
        for j in 2..=k {
            let fj = f.coeff(j);
            if !fj.is_zero() && !pow[j][k].is_zero() {
                rhs += fj * &pow[j][k];
            }
        }
        g[k] = -rhs / &f1;
        pow[1][k] = g[k].clone();
    }
    let g = UniSeries::new(g, n);
    let check = f.truncate(n).compose(&g)?;
    if !check.truncate(n).is_identity() && n >= 1 {
        return Err(Error::Verification(format!(
            "series inverse failed f∘g = x at order {n}"
        )));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn series(cs: &[Rational], n: usize) -> UniSeries {
        UniSeries::new(cs.to_vec(), n)
    }

    /// Lagrange inversion: [x^k] g = (1/k) [x^(k-1)] (x/f(x))^k.
    fn lagrange_inverse(f: &UniSeries, n: usize) -> Vec<Rational> {
        // h = f(x)/x, then x/f = 1/h
        let h: Vec<Rational> = (0..=n).map(|k| f.coeff(k + 1)).collect();
        let h = UniSeries::new(h, n);
        // series reciprocal of h by the schoolbook recurrence
        let mut inv = vec![Rational::zero(); n + 1];
        inv[0] = h.coeff(0).recip();
        for k in 1..=n {
            let mut s = Rational::zero();
            for i in 1..=k {
                s += h.coeff(i) * &inv[k - i];
            }
            inv[k] = -s * &inv[0];
        }
        let inv = UniSeries::new(inv, n);
        let mut out = vec![Rational::zero(); n + 1];
        let mut p = UniSeries::one(n);
        for k in 1..=n {
            p = p.mul(&inv);
            out[k] = p.coeff(k - 1) / Rational::from_integer(k.into());
        }
        out
    }

    #[test]
    fn binomial_half() {
        let s = binomial_series(&rat(1, 2), 3);
        assert_eq!(s.coeffs(), &[int(1), rat(1, 2), rat(-1, 8), rat(1, 16)]);
    }

    #[test]
    fn binomial_polynomial_and_geometric() {
        assert_eq!(binomial_series(&int(1), 3).coeffs(), &[int(1), int(1), int(0), int(0)]);
        assert_eq!(
            binomial_series(&int(-1), 3).coeffs(),
            &[int(1), int(-1), int(1), int(-1)]
        );
    }

    #[test]
    fn sqrt_squares_to_one_plus_x() {
        for n in 0..=32 {
            let s = binomial_series(&rat(1, 2), n);
            let sq = s.mul(&s);
            let expect = series(&[int(1), int(1)], n);
            assert_eq!(sq, expect, "order {n}");
        }
    }

    #[test]
    fn invert_identity() {
        let g = invert_series(&UniSeries::x(6), 6).unwrap();
        assert!(g.is_identity());
    }

    #[test]
    fn invert_x_plus_x2_matches_lagrange() {
        let f = series(&[int(0), int(1), int(1)], 10);
        let g = invert_series(&f, 10).unwrap();
        // Catalan numbers with alternating sign: x − x² + 2x³ − 5x⁴ + 14x⁵ ...
        assert_eq!(&g.coeffs()[..6], &[int(0), int(1), int(-1), int(2), int(-5), int(14)]);
        assert_eq!(g.coeffs(), lagrange_inverse(&f, 10).as_slice());
    }

    #[test]
    fn invert_truncated_branch_function() {
        let f = series(&[int(0), int(1), rat(1, 2), rat(-1, 8)], 3);
        let g = invert_series(&f, 3).unwrap();
        assert!(f.compose(&g).unwrap().is_identity());
        assert_eq!(g.coeffs(), lagrange_inverse(&f, 3).as_slice());
    }

    #[test]
    fn invert_both_sides() {
        let f = binomial_series(&rat(1, 2), 20);
        // x·(1+x)^(1/2)
        let mut c = vec![int(0)];
        c.extend_from_slice(&f.coeffs()[..20]);
        let phi = UniSeries::new(c, 20);
        let psi = invert_series(&phi, 20).unwrap();
        assert!(phi.compose(&psi).unwrap().is_identity());
        assert!(psi.compose(&phi).unwrap().is_identity());
        assert_eq!(psi.coeffs(), lagrange_inverse(&phi, 20).as_slice());
    }

    #[test]
    fn reject_zero_linear_term() {
        let f = series(&[int(0), int(0), int(1)], 4);
        assert!(matches!(invert_series(&f, 4), Err(Error::NotInvertible)));
        let f = series(&[int(1), int(1)], 4);
        assert!(matches!(invert_series(&f, 4), Err(Error::NotInvertible)));
    }
}
