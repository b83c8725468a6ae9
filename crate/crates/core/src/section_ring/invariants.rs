use super::{dim_space, CompatibleBasis, Filtration};
use crate::error::{precondition, Error, Result};
use crate::exactnum::Rational;
use crate::local_model::{Form, MonomialValuation, NodalCubicModel};

fn require_level(m: u32) -> Result<()> {
    if m == 0 {
        return Err(precondition("level m must be at least 1"));
    }
    Ok(())
}

fn level_norm(m: u32) -> Rational {
    Rational::from_integer((u64::from(m) * dim_space(m)).into())
}

/// `S_m(F) = (1/(m·N_m)) Σ F(s_i)` over a compatible basis.
pub fn s_m(model: &NodalCubicModel, f: &Filtration, m: u32) -> Result<Rational> {
    require_level(m)?;
    let b = f.compatible_basis(model, m)?;
    Ok(b.value_sum() / level_norm(m))
}

pub fn s_m_valuation(model: &NodalCubicModel, v: &MonomialValuation, m: u32) -> Result<Rational> {
    s_m(model, &Filtration::Valuation(*v), m)
}

/// Largest `v_t`-value on `R_m ∖ 0`.
pub fn t_m_raw(model: &NodalCubicModel, v: &MonomialValuation, m: u32) -> Result<Rational> {
    require_level(m)?;
    let b = super::initial_basis(model, v, m)?;
    b.values
        .into_iter()
        .max()
        .ok_or_else(|| Error::Verification("empty basis".into()))
}

/// `T_m(v) = max{v(s)/m : s ∈ R_m ∖ 0}`.
pub fn t_m(model: &NodalCubicModel, v: &MonomialValuation, m: u32) -> Result<Rational> {
    Ok(t_m_raw(model, v, m)? / Rational::from_integer(m.into()))
}

/// The `m`-basis type divisor `(1/(m·N_m)) Σ (s_i = 0)` of a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisTypeDivisor {
    m: u32,
    sections: Vec<Form>,
}

pub fn basis_type_divisor(b: &CompatibleBasis) -> Result<BasisTypeDivisor> {
    require_level(b.m)?;
    if b.len() as u64 != dim_space(b.m) {
        return Err(precondition(format!(
            "{} sections do not form a basis of R_{}",
            b.len(),
            b.m
        )));
    }
    Ok(BasisTypeDivisor { m: b.m, sections: b.sections.clone() })
}

impl BasisTypeDivisor {
    pub fn m(&self) -> u32 {
        self.m
    }

    /// `v(D)` for the normalized valuation `v_t`.
    pub fn valuation(&self, model: &NodalCubicModel, v: &MonomialValuation) -> Result<Rational> {
        let mut total = Rational::from_integer(0.into());
        for s in &self.sections {
            total += model.vweight(v, s)?.value;
        }
        Ok(total / level_norm(self.m))
    }

    /// Coefficient of the curve `{g = 0}` in `D`, for `g` irreducible.
    pub fn coefficient_along(&self, g: &Form) -> Rational {
        let total: u64 = self.sections.iter().map(|s| u64::from(s.multiplicity_of(g))).sum();
        Rational::from_integer(total.into()) / level_norm(self.m)
    }

    /// Degree of `D` as a plane curve; always 3.
    pub fn degree(&self) -> Rational {
        let total: u64 = self.sections.iter().map(|s| u64::from(s.degree())).sum();
        Rational::from_integer(total.into()) / level_norm(self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::section_ring::{divisor_basis, initial_basis, initial_basis_in_order};
    use rand::seq::SliceRandom;
    use rand::{rngs::StdRng, SeedableRng};

    fn v(a: u64, b: u64) -> MonomialValuation {
        MonomialValuation::new(a, b).unwrap()
    }

    /// `Σ_{λ=1}^{3m} (N_m − λ(λ+1)/2)`: the flag of multiplicity at a point.
    fn point_flag_sum(m: u32) -> u64 {
        let n = dim_space(m);
        (1..=u64::from(3 * m)).map(|l| n - l * (l + 1) / 2).sum()
    }

    #[test]
    fn slope_one_is_two() {
        let model = NodalCubicModel::default();
        for m in 1..=3 {
            let s = s_m_valuation(&model, &v(1, 1), m).unwrap();
            assert_eq!(point_flag_sum(m), 2 * u64::from(m) * dim_space(m));
            assert_eq!(s, int(2));
        }
    }

    #[test]
    fn line_is_one() {
        let model = NodalCubicModel::default();
        for m in 1..=3 {
            // Σ_{j=1}^{3m} h⁰(O(3m − j))
            let oracle: u64 = (0..u64::from(3 * m)).map(|d| (d + 1) * (d + 2) / 2).sum();
            assert_eq!(oracle, u64::from(m) * dim_space(m));
            assert_eq!(s_m(&model, &Filtration::line(), m).unwrap(), int(1));
        }
    }

    #[test]
    fn t_examples() {
        let model = NodalCubicModel::default();
        assert_eq!(t_m(&model, &v(1, 1), 1).unwrap(), int(3));
        assert_eq!(t_m(&model, &v(1, 2), 1).unwrap(), int(6));
        assert_eq!(t_m_raw(&model, &v(1, 1), 2).unwrap(), int(6));
        assert_eq!(t_m(&model, &v(1, 1), 2).unwrap(), int(3));
    }

    #[test]
    fn level_zero_rejected() {
        let model = NodalCubicModel::default();
        assert!(s_m_valuation(&model, &v(1, 1), 0).is_err());
        assert!(t_m(&model, &v(1, 1), 0).is_err());
        let b = initial_basis(&model, &v(1, 1), 0).unwrap();
        assert!(basis_type_divisor(&b).is_err());
    }

    #[test]
    fn basis_type_divisor_evaluates_to_s_m() {
        let model = NodalCubicModel::default();
        for val in [v(1, 1), v(1, 2), v(3, 2)] {
            let b = initial_basis(&model, &val, 2).unwrap();
            let d = basis_type_divisor(&b).unwrap();
            assert_eq!(d.degree(), int(3));
            assert_eq!(d.valuation(&model, &val).unwrap(), s_m_valuation(&model, &val, 2).unwrap());
        }
    }

    #[test]
    fn divisor_compatible_bound() {
        let model = NodalCubicModel::default();
        for g in [Form::x1(), Form::nodal_cubic()] {
            let f = Filtration::Divisor(g.clone());
            let b = divisor_basis(&g, 2).unwrap();
            let d = basis_type_divisor(&b).unwrap();
            let s = s_m(&model, &f, 2).unwrap();
            assert!(d.coefficient_along(&g) >= s);
        }
    }

    #[test]
    fn independent_of_elimination_order() {
        let model = NodalCubicModel::default();
        let mut rng = StdRng::seed_from_u64(7);
        for (val, m) in [(v(1, 1), 2), (v(2, 3), 2), (v(1, 3), 1)] {
            let reference = s_m_valuation(&model, &val, m).unwrap();
            let n = dim_space(m) as usize;
            for _ in 0..5 {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut rng);
                let b = initial_basis_in_order(&model, &val, m, &order).unwrap();
                assert_eq!(b.value_sum() / level_norm(m), reference);
            }
        }
    }

    #[test]
    fn swap_symmetry() {
        let model = NodalCubicModel::default();
        for (a, b) in [(1, 2), (2, 3), (1, 5)] {
            for m in 1..=2 {
                let x = s_m_valuation(&model, &v(a, b), m).unwrap();
                let y = s_m_valuation(&model, &v(b, a), m).unwrap();
                assert_eq!(x * int(a as i64), y * int(b as i64));
            }
        }
    }

    #[test]
    fn concavity_between_slopes() {
        let model = NodalCubicModel::default();
        let (t0, t1) = (rat(1, 1), rat(2, 1));
        for m in 1..=2 {
            let s0 = s_m_valuation(&model, &MonomialValuation::from_slope(&t0).unwrap(), m).unwrap();
            let s1 = s_m_valuation(&model, &MonomialValuation::from_slope(&t1).unwrap(), m).unwrap();
            for u in [rat(1, 4), rat(1, 2), rat(3, 4)] {
                let ts = (int(1) - &u) * &t0 + &u * &t1;
                let vs = MonomialValuation::from_slope(&ts).unwrap();
                let ss = s_m_valuation(&model, &vs, m).unwrap();
                assert!(ss >= (int(1) - &u) * &s0 + &u * &s1, "m={m} u={u}");
            }
        }
    }
}
