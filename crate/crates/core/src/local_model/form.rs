use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exactnum::{rational_text, Rational};

/// Exponents `(e1, e2)` of `x1^e1 · x2^e2`; the `x0` exponent is implied by
/// the degree of the form the key belongs to.
pub type Exps = (u32, u32);

/// A homogeneous form in `x0, x1, x2` with rational coefficients.
///
/// Coefficients are keyed by the `(x1, x2)` exponents, so the key map doubles
/// as the dehomogenization in the affine chart `x = x1/x0, y = x2/x0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    degree: u32,
    terms: BTreeMap<Exps, Rational>,
}

/// Degree-`degree` monomials in a fixed order: by `x1,x2`-degree, then `x2`-exponent.
pub fn monomial_basis(degree: u32) -> Vec<Exps> {
    (0..=degree)
        .flat_map(|s| (0..=s).map(move |e2| (s - e2, e2)))
        .collect()
}

impl Form {
    pub fn zero(degree: u32) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    pub fn monomial(e0: u32, e1: u32, e2: u32) -> Self {
        let mut f = Self::zero(e0 + e1 + e2);
        f.terms.insert((e1, e2), Rational::one());
        f
    }

    pub fn x0() -> Self {
        Self::monomial(1, 0, 0)
    }

    pub fn x1() -> Self {
        Self::monomial(0, 1, 0)
    }

    pub fn x2() -> Self {
        Self::monomial(0, 0, 1)
    }

    /// `x0·x2² − x1³ − x0·x1²`, vanishing on the nodal cubic with node `[1:0:0]`.
    pub fn nodal_cubic() -> Self {
        Self::from_terms(
            3,
            [
                ((0, 2), Rational::one()),
                ((3, 0), -Rational::one()),
                ((2, 0), -Rational::one()),
            ],
        )
    }

    /// Panics if a key exceeds the degree.
    pub fn from_terms(degree: u32, terms: impl IntoIterator<Item = (Exps, Rational)>) -> Self {
        let mut f = Self::zero(degree);
        for (e, c) in terms {
            assert!(e.0 + e.1 <= degree, "monomial {e:?} exceeds degree {degree}");
            f.add_term(e, c);
        }
        f
    }

    /// Form with coordinates `coords` in the monomial basis `basis`.
    pub fn from_coords(degree: u32, basis: &[Exps], coords: &[Rational]) -> Self {
        Self::from_terms(degree, basis.iter().copied().zip(coords.iter().cloned()))
    }

    pub fn coords(&self, basis: &[Exps]) -> Vec<Rational> {
        basis.iter().map(|e| self.coeff(*e)).collect()
    }

    fn add_term(&mut self, e: Exps, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: Exps) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exps, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Panics on degree mismatch: forms of different degrees live in different spaces.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "adding forms of different degrees");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                out.add_term((e.0 + f.0, e.1 + f.1), c * d);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::monomial(0, 0, 0);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Image under `x2 ↦ −x2`, the involution swapping the two branches at the node.
    pub fn reflect(&self) -> Self {
        Self {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, if e.1 % 2 == 1 { -c.clone() } else { c.clone() }))
                .collect(),
        }
    }

    /// Exact quotient `self / g`, or `None` if `g` does not divide `self`.
    ///
    /// Division by a single polynomial under lex order (`x1 > x2 > x0`): the
    /// remainder vanishes iff `g` divides, so the first leading term of the
    /// running remainder not divisible by `lt(g)` proves non-divisibility.
    pub fn div_exact(&self, g: &Self) -> Option<Self> {
        if g.is_zero() || g.degree > self.degree {
            return if self.is_zero() && !g.is_zero() {
                Some(Self::zero(self.degree.saturating_sub(g.degree)))
            } else {
                None
            };
        }
        let qdeg = self.degree - g.degree;
        let (&glt, gc) = g.terms.iter().next_back()?;
        let g0 = g.degree - glt.0 - glt.1;
        let mut r = self.clone();
        let mut q = Self::zero(qdeg);
        while let Some((&lt, c)) = r.terms.iter().next_back() {
            let r0 = r.degree - lt.0 - lt.1;
            if lt.0 < glt.0 || lt.1 < glt.1 || r0 < g0 {
                return None;
            }
            let mono = (lt.0 - glt.0, lt.1 - glt.1);
            let coef = c / gc;
            let step = Self::from_terms(qdeg, [(mono, coef.clone())]);
            r = r.sub(&step.mul(g));
            q.add_term(mono, coef);
        }
        Some(q)
    }

    /// Largest `k` with `g^k | self`. `self` must be nonzero and `g` nonconstant.
    pub fn multiplicity_of(&self, g: &Self) -> u32 {
        assert!(!self.is_zero() && g.degree > 0, "multiplicity needs nonzero f and nonconstant g");
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.div_exact(g) {
            cur = q;
            k += 1;
        }
        k
    }

    /// Lowest total degree of the dehomogenized polynomial in `(x, y)`: the
    /// multiplicity of the curve `self = 0` at `[1:0:0]`.
    pub fn multiplicity_at_node(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0 + e.1).min()
    }

    /// Divide by a coefficient so the form has content 1 when all
    /// coefficients are integers up to a common factor and the last term
    /// positive. Used only for presentation.
    pub fn primitive(&self) -> Self {
        use num_integer::Integer;
        let Some((_, last)) = self.terms.iter().next_back() else {
            return self.clone();
        };
        let den_lcm = self
            .terms
            .values()
            .fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled = self.scale(&Rational::from_integer(den_lcm));
        let g = scaled
            .terms
            .values()
            .fold(num_bigint::BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        let mut s = Rational::from_integer(g).recip();
        if last.is_negative() {
            s = -s;
        }
        scaled.scale(&s)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&(e1, e2), c) in self.terms.iter().rev() {
            let e0 = self.degree - e1 - e2;
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut factors = Vec::new();
            for (name, e) in [("x0", e0), ("x1", e1), ("x2", e2)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if !mag.is_one() || factors.is_empty() {
                factors.insert(0, rational_text(&mag));
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}
