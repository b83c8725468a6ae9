use std::collections::BTreeMap;

use num_traits::Zero;

use super::MonomialValuation;
use crate::exactnum::{rational_text, Rational};

/// A power series in `(z, w)` known exactly in total degree `<= truncation`.
///
/// Stored densely by homogeneous degree: `blocks[d][i]` is the coefficient of
/// `z^i · w^(d−i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateSeries {
    truncation: u32,
    blocks: Vec<Vec<Rational>>,
}

/// Lowest-weight certified term of a series under a monomial valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightedInitial {
    pub weight: u64,
    pub exps: (u32, u32),
}

impl BivariateSeries {
    pub fn zero(truncation: u32) -> Self {
        let blocks = (0..=truncation)
            .map(|d| vec![Rational::zero(); d as usize + 1])
            .collect();
        Self { truncation, blocks }
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Coefficient of `z^i w^j`, or `None` when `i + j` is beyond the truncation.
    pub fn coeff(&self, i: u32, j: u32) -> Option<&Rational> {
        self.blocks.get((i + j) as usize).map(|b| &b[i as usize])
    }

    #[cfg(test)]
    pub(crate) fn coeff_mut(&mut self, i: u32, j: u32) -> &mut Rational {
        &mut self.blocks[(i + j) as usize][i as usize]
    }

    pub(crate) fn block_mut(&mut self, d: u32) -> &mut [Rational] {
        &mut self.blocks[d as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().all(Zero::is_zero)
    }

    /// Nonzero terms as `((i, j), coeff)` in order of total degree, then `i`.
    pub fn support(&self) -> impl Iterator<Item = ((u32, u32), &Rational)> {
        self.blocks.iter().enumerate().flat_map(|(d, b)| {
            b.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(i, c)| ((i as u32, (d - i) as u32), c))
        })
    }

    /// `self += c · other` (truncations must agree).
    pub fn add_scaled(&mut self, c: &Rational, other: &Self) {
        assert_eq!(self.truncation, other.truncation, "truncation mismatch");
        if c.is_zero() {
            return;
        }
        for (b, o) in self.blocks.iter_mut().zip(&other.blocks) {
            for (x, y) in b.iter_mut().zip(o) {
                if !y.is_zero() {
                    *x += c * y;
                }
            }
        }
    }

    /// Weights `< min(a,b)·(N+1)` are unaffected by discarded terms, which all
    /// have total degree `> N`.
    pub fn certified_weight_bound(&self, v: &MonomialValuation) -> u64 {
        v.a().min(v.b()) * (u64::from(self.truncation) + 1)
    }

    /// The term of least `v`-weight, ties going to the larger `z`-exponent;
    /// `None` if no nonzero term has certified weight.
    pub fn weighted_initial(&self, v: &MonomialValuation) -> Option<WeightedInitial> {
        let bound = self.certified_weight_bound(v);
        self.support()
            .map(|(e, _)| WeightedInitial { weight: v.weight(e), exps: e })
            .filter(|t| t.weight < bound)
            .min_by(|x, y| x.weight.cmp(&y.weight).then(y.exps.0.cmp(&x.exps.0)))
    }

    /// Debug dump: `"i,j" → "p/q"` for every nonzero coefficient.
    pub fn to_json_map(&self) -> BTreeMap<String, String> {
        self.support()
            .map(|((i, j), c)| (format!("{i},{j}"), rational_text(c)))
            .collect()
    }
}

/// Vertices of the Newton polygon (compact faces of the lower-left convex
/// hull of `points + R²_{≥0}`), from the end nearest the `z`-axis to the end
/// nearest the `w`-axis, i.e. by decreasing `z`-exponent.
pub fn newton_vertices(points: impl IntoIterator<Item = (u32, u32)>) -> Vec<(u32, u32)> {
    // least w-exponent for each z-exponent
    let mut lowest: BTreeMap<u32, u32> = BTreeMap::new();
    for (i, j) in points {
        lowest.entry(i).and_modify(|m| *m = (*m).min(j)).or_insert(j);
    }
    // staircase: strictly decreasing j as i grows
    let mut stair: Vec<(i64, i64)> = Vec::new();
    for (i, j) in lowest {
        if stair.last().is_none_or(|&(_, pj)| (j as i64) < pj) {
            stair.push((i as i64, j as i64));
        }
    }
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for p in stair {
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.reverse();
    hull.into_iter().map(|(i, j)| (i as u32, j as u32)).collect()
}
