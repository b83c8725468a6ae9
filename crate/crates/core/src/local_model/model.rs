use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{BivariateSeries, Form, MonomialValuation};
use crate::error::{Error, Result};
use crate::exactnum::{binomial_series, invert_series, rat, Rational, UniSeries};

pub const DEFAULT_TRUNCATION_CAP: u32 = 512;

/// Analytic local model of the nodal cubic at its node `o = [1:0:0]`.
///
/// In the chart `x = x1/x0, y = x2/x0` the cubic reads `y² = x²(1 + x)`, and
/// with `φ(x) = x·(1+x)^(1/2)` the branch coordinates
///
/// ```text
/// z = y − φ(x),   w = y + φ(x)
/// ```
///
/// make the local equation exactly `z·w`. The inverse substitution is
/// `y = (z + w)/2`, `x = ψ((w − z)/2)` with `ψ` the compositional inverse of
/// `φ`. Swapping `x2 ↦ −x2` maps `z ↦ −w`, `w ↦ −z`.
///
/// Localizations of monomials are memoized; the caches only ever grow and a
/// lost race just recomputes the same value.
pub struct NodalCubicModel {
    cap: u32,
    psi: RwLock<Option<Arc<UniSeries>>>,
    psi_pow: RwLock<HashMap<u32, Arc<UniSeries>>>,
    mono: RwLock<HashMap<(u32, u32, u32), Arc<BivariateSeries>>>,
}

/// Certified weighted order of a form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedOrder {
    /// `min{a·i + b·j}` over the `(z, w)`-support.
    pub ord: u64,
    /// `ord / a`.
    pub value: Rational,
    /// Initial exponent, ties to the larger `z`-exponent.
    pub initial: (u32, u32),
    /// Truncation at which the answer was certified.
    pub truncation: u32,
}

impl Default for NodalCubicModel {
    fn default() -> Self {
        Self::with_cap(DEFAULT_TRUNCATION_CAP)
    }
}

impl NodalCubicModel {
    pub fn with_cap(cap: u32) -> Self {
        Self {
            cap,
            psi: RwLock::new(None),
            psi_pow: RwLock::new(HashMap::new()),
            mono: RwLock::new(HashMap::new()),
        }
    }

    /// Process-wide model with the default cap.
    pub fn shared() -> &'static NodalCubicModel {
        static MODEL: OnceLock<NodalCubicModel> = OnceLock::new();
        MODEL.get_or_init(NodalCubicModel::default)
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// First truncation tried for a degree-`degree` form; doubled until certified.
    pub fn initial_truncation(&self, degree: u32) -> u32 {
        degree.max(2).min(self.cap)
    }

    /// `φ(x) = x·(1+x)^(1/2)` modulo `x^(order+1)`.
    pub fn branch_function(order: usize) -> UniSeries {
        let root = binomial_series(&rat(1, 2), order.saturating_sub(1));
        let mut c = vec![Rational::zero()];
        c.extend_from_slice(root.coeffs());
        UniSeries::new(c, order)
    }

    /// `ψ = φ^{-1}` modulo `x^(order+1)`.
    pub fn psi(&self, order: u32) -> Result<UniSeries> {
        if let Some(p) = self.psi.read().unwrap().as_ref() {
            if p.order() >= order as usize {
                return Ok(p.truncate(order as usize));
            }
        }
        let n = (order as usize).max(16);
        let p = invert_series(&Self::branch_function(n), n)?;
        let out = p.truncate(order as usize);
        let mut slot = self.psi.write().unwrap();
        if slot.as_ref().is_none_or(|s| s.order() < n) {
            *slot = Some(Arc::new(p));
        }
        Ok(out)
    }

    fn psi_power(&self, k: u32, order: u32) -> Result<UniSeries> {
        if let Some(p) = self.psi_pow.read().unwrap().get(&k) {
            if p.order() >= order as usize {
                return Ok(p.truncate(order as usize));
            }
        }
        let psi = self.psi(order)?;
        let mut acc = UniSeries::one(order as usize);
        for _ in 0..k {
            acc = acc.mul(&psi);
        }
        self.psi_pow.write().unwrap().insert(k, Arc::new(acc.clone()));
        Ok(acc)
    }

    /// Expansion of `x^e1 · y^e2` in `(z, w)` modulo total degree `order + 1`.
    pub fn localize_monomial(&self, e1: u32, e2: u32, order: u32) -> Result<Arc<BivariateSeries>> {
        if let Some(s) = self.mono.read().unwrap().get(&(e1, e2, order)) {
            return Ok(Arc::clone(s));
        }
        let mut out = BivariateSeries::zero(order);
        if e1 + e2 <= order {
            let psi_k = self.psi_power(e1, order)?;
            // x^e1 y^e2 = Σ_k [u^k]ψ^e1 · u^k y^e2 with u = (w−z)/2, y = (z+w)/2,
            // so u^k y^e2 = 2^-(k+e2) (w−z)^k (z+w)^e2.
            // cur[i] holds the z^i coefficient of (w−z)^k (z+w)^e2.
            let mut cur: Vec<BigInt> = binomial_row(e2);
            for _ in 0..e1 {
                cur = times_w_minus_z(&cur);
            }
            for k in e1..=(order - e2) {
                if k > e1 {
                    cur = times_w_minus_z(&cur);
                }
                let c = psi_k.coeff(k as usize);
                if c.is_zero() {
                    continue;
                }
                let d = k + e2;
                let c = c / Rational::from_integer(BigInt::one() << d);
                let block = out.block_mut(d);
                for (slot, n) in block.iter_mut().zip(&cur) {
                    if !n.is_zero() {
                        *slot += &c * Rational::from_integer(n.clone());
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.mono
            .write()
            .unwrap()
            .insert((e1, e2, order), Arc::clone(&out));
        Ok(out)
    }

    /// Expansion of `s / x0^deg(s)` at the node in `(z, w)`, exact modulo
    /// total degree `order + 1`.
    pub fn localize(&self, s: &Form, order: u32) -> Result<BivariateSeries> {
        if s.is_zero() {
            return Err(Error::ZeroForm);
        }
        let mut out = BivariateSeries::zero(order);
        for ((e1, e2), c) in s.terms() {
            let m = self.localize_monomial(e1, e2, order)?;
            out.add_scaled(c, &m);
        }
        Ok(out)
    }

    /// Weighted order at a fixed truncation, `None` if not certifiable there.
    pub fn vweight_at(
        &self,
        v: &MonomialValuation,
        s: &Form,
        order: u32,
    ) -> Result<Option<WeightedOrder>> {
        let series = self.localize(s, order)?;
        Ok(series.weighted_initial(v).map(|t| WeightedOrder {
            ord: t.weight,
            value: v.normalize(t.weight),
            initial: t.exps,
            truncation: order,
        }))
    }

    /// Weighted order of `s` under `v`, deepening the truncation until a
    /// support point of certified weight appears.
    pub fn vweight(&self, v: &MonomialValuation, s: &Form) -> Result<WeightedOrder> {
        if s.is_zero() {
            return Err(Error::ZeroForm);
        }
        let mut n = self.initial_truncation(s.degree());
        loop {
            if let Some(w) = self.vweight_at(v, s, n)? {
                return Ok(w);
            }
            if n >= self.cap {
                return Err(Error::TruncationExhausted { cap: self.cap });
            }
            n = (2 * n).min(self.cap);
        }
    }
}

/// Coefficients of `(z + w)^n` indexed by the `z`-exponent.
fn binomial_row(n: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = vec![BigInt::zero(); row.len() + 1];
        for (i, c) in row.iter().enumerate() {
            next[i] += c;
            next[i + 1] += c;
        }
        row = next;
    }
    row
}

/// Multiply a `z`-indexed homogeneous polynomial by `(w − z)`.
fn times_w_minus_z(p: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i] += c;
        out[i + 1] -= c;
    }
    out
}
