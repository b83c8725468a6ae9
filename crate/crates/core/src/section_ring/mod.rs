//! Section spaces `R_m = H⁰(P², O(3m))`, their filtrations, compatible bases
//! and the finite-level invariants `S_m`, `T_m`.

mod basis;
mod invariants;

pub use basis::{
    divisor_basis, initial_basis, initial_basis_in_order, joint_compatible_basis, CompatibleBasis,
    JointCompatibleBasis,
};
pub use invariants::{basis_type_divisor, s_m, s_m_valuation, t_m, t_m_raw, BasisTypeDivisor};

use crate::error::Result;
use crate::exactnum::Rational;
use crate::linalg::{self, Vector};
use crate::local_model::{monomial_basis, Exps, Form, MonomialValuation, NodalCubicModel};

/// `N_m = (3m+1)(3m+2)/2`.
pub fn dim_space(m: u32) -> u64 {
    let m = u64::from(m);
    (3 * m + 1) * (3 * m + 2) / 2
}

/// Degree-`3m` forms with their monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionSpace {
    m: u32,
    monomials: Vec<Exps>,
}

impl SectionSpace {
    pub fn new(m: u32) -> Self {
        Self { m, monomials: monomial_basis(3 * m) }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn degree(&self) -> u32 {
        3 * self.m
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Exps] {
        &self.monomials
    }

    pub fn coords(&self, s: &Form) -> Vector {
        assert_eq!(s.degree(), self.degree(), "form of the wrong degree");
        s.coords(&self.monomials)
    }

    pub fn form(&self, coords: &[Rational]) -> Form {
        Form::from_coords(self.degree(), &self.monomials, coords)
    }
}

/// A decreasing filtration of `R_m`, given by its value oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Filtration {
    /// `F^λ = {s : v_t(s) >= λ}` with `v_t = ord_(a,b) / a`.
    Valuation(MonomialValuation),
    /// `F^λ = {s : (s = 0) >= λ·G}` for the curve `G = {g = 0}`.
    Divisor(Form),
}

impl Filtration {
    pub fn line() -> Self {
        Filtration::Divisor(Form::x1())
    }

    pub fn value(&self, model: &NodalCubicModel, s: &Form) -> Result<Rational> {
        match self {
            Filtration::Valuation(v) => Ok(model.vweight(v, s)?.value),
            Filtration::Divisor(g) => Ok(Rational::from_integer(s.multiplicity_of(g).into())),
        }
    }

    /// Some basis of `R_m` compatible with this filtration.
    pub fn compatible_basis(&self, model: &NodalCubicModel, m: u32) -> Result<CompatibleBasis> {
        match self {
            Filtration::Valuation(v) => initial_basis(model, v, m),
            Filtration::Divisor(g) => divisor_basis(g, m),
        }
    }

    pub fn flag(&self, model: &NodalCubicModel, m: u32) -> Result<Flag> {
        Ok(self.compatible_basis(model, m)?.flag())
    }
}

/// The distinct steps `F^λ R_m` of a filtration, by decreasing `λ`
/// (so by increasing subspace). Each subspace is stored as a reduced basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    ambient: usize,
    levels: Vec<(Rational, Vec<Vector>)>,
}

impl Flag {
    pub fn from_valued(coords: &[Vector], values: &[Rational], ambient: usize) -> Self {
        let mut jumps: Vec<Rational> = values.to_vec();
        jumps.sort_by(|x, y| y.cmp(x));
        jumps.dedup();
        let levels = jumps
            .into_iter()
            .map(|lambda| {
                let mut rows: Vec<Vector> = coords
                    .iter()
                    .zip(values)
                    .filter(|(_, v)| **v >= lambda)
                    .map(|(c, _)| c.clone())
                    .collect();
                linalg::rref(&mut rows);
                (lambda, rows)
            })
            .collect();
        Self { ambient, levels }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn levels(&self) -> &[(Rational, Vec<Vector>)] {
        &self.levels
    }

    /// `dim F^λ`.
    pub fn dim_at(&self, lambda: &Rational) -> usize {
        self.levels
            .iter()
            .rev()
            .find(|(l, _)| l >= lambda)
            .map_or(0, |(_, s)| s.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    #[test]
    fn dims() {
        assert_eq!(dim_space(0), 1);
        assert_eq!(dim_space(1), 10);
        assert_eq!(dim_space(2), 28);
        for m in 0..8 {
            assert_eq!(SectionSpace::new(m).dim() as u64, dim_space(m));
        }
    }

    #[test]
    fn flag_dims_at_slope_one() {
        // multiplicity >= λ at a point costs λ(λ+1)/2 conditions on cubics
        let model = NodalCubicModel::default();
        let f = Filtration::Valuation(MonomialValuation::new(1, 1).unwrap());
        let flag = f.flag(&model, 1).unwrap();
        for lambda in 0..=4i64 {
            let expect = 10usize.saturating_sub((lambda * (lambda + 1) / 2) as usize);
            assert_eq!(flag.dim_at(&int(lambda)), expect, "λ = {lambda}");
        }
    }

    #[test]
    fn line_filtration_values() {
        let model = NodalCubicModel::default();
        let f = Filtration::line();
        let s = Form::x1().pow(2).mul(&Form::x0());
        assert_eq!(f.value(&model, &s).unwrap(), int(2));
    }
}
