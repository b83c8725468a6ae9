use std::collections::HashMap;

use num_traits::{One, Zero};

use super::{dim_space, Filtration, Flag};
use crate::error::{precondition, Error, Result};
use crate::exactnum::Rational;
use crate::linalg::{self, Span, Vector};
use crate::local_model::{monomial_basis, Exps, Form, MonomialValuation, NodalCubicModel};

/// A basis of `R_m` together with the filtration value of each element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibleBasis {
    pub m: u32,
    pub sections: Vec<Form>,
    pub values: Vec<Rational>,
    /// Pairwise distinct initial `(z, w)`-exponents (valuation filtrations only).
    pub initial: Option<Vec<Exps>>,
}

impl CompatibleBasis {
    pub fn len(&self) -> usize {
        self.sections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sections.is_empty()
    }

    pub fn coords(&self) -> Vec<Vector> {
        let basis = monomial_basis(3 * self.m);
        self.sections.iter().map(|s| s.coords(&basis)).collect()
    }

    pub fn value_sum(&self) -> Rational {
        self.values.iter().sum()
    }

    /// The flag `λ ↦ span{s_i : value_i >= λ}` read off this basis.
    pub fn flag(&self) -> Flag {
        Flag::from_valued(&self.coords(), &self.values, dim_space(self.m) as usize)
    }

    /// Whether, for every jump `λ` of `flag`, the elements of value `>= λ`
    /// lie in and span `F^λ`.
    pub fn is_compatible_with(&self, flag: &Flag) -> bool {
        is_compatible(&self.coords(), &self.values, flag)
    }
}

pub(crate) fn is_compatible(coords: &[Vector], values: &[Rational], flag: &Flag) -> bool {
    flag.levels().iter().all(|(lambda, space)| {
        let chosen: Vec<Vector> = coords
            .iter()
            .zip(values)
            .filter(|(_, v)| *v >= lambda)
            .map(|(c, _)| c.clone())
            .collect();
        let target = Span::from_vectors(flag.ambient_dim(), space);
        linalg::rank(&chosen) == target.dim() && chosen.iter().all(|c| target.contains(c))
    })
}

/// A basis compatible with two filtrations at once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointCompatibleBasis {
    pub m: u32,
    pub sections: Vec<Form>,
    pub values_f: Vec<Rational>,
    pub values_g: Vec<Rational>,
}

impl JointCompatibleBasis {
    pub fn coords(&self) -> Vec<Vector> {
        let basis = monomial_basis(3 * self.m);
        self.sections.iter().map(|s| s.coords(&basis)).collect()
    }

    pub fn for_first(&self) -> CompatibleBasis {
        CompatibleBasis {
            m: self.m,
            sections: self.sections.clone(),
            values: self.values_f.clone(),
            initial: None,
        }
    }

    pub fn for_second(&self) -> CompatibleBasis {
        CompatibleBasis {
            m: self.m,
            sections: self.sections.clone(),
            values: self.values_g.clone(),
            initial: None,
        }
    }
}

/// Basis of `R_m` compatible with the valuation `v`, by Gaussian elimination
/// on initial `(z, w)`-terms in the order (weight, larger `z`-exponent first).
/// Input rows are the monomial basis in its fixed order.
pub fn initial_basis(model: &NodalCubicModel, v: &MonomialValuation, m: u32) -> Result<CompatibleBasis> {
    let n = dim_space(m) as usize;
    let order: Vec<usize> = (0..n).collect();
    initial_basis_in_order(model, v, m, &order)
}

/// As [`initial_basis`], feeding the monomials to the elimination in the
/// given permutation of the monomial basis.
pub fn initial_basis_in_order(
    model: &NodalCubicModel,
    v: &MonomialValuation,
    m: u32,
    order: &[usize],
) -> Result<CompatibleBasis> {
    let degree = 3 * m;
    let monos = monomial_basis(degree);
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..monos.len()).collect::<Vec<_>>() {
        return Err(precondition("elimination order must permute the monomial basis"));
    }
    let mut trunc = model.initial_truncation(degree);
    loop {
        if let Some(b) = eliminate(model, v, m, &monos, order, trunc)? {
            return Ok(b);
        }
        if trunc >= model.cap() {
            return Err(Error::TruncationExhausted { cap: model.cap() });
        }
        trunc = (2 * trunc).min(model.cap());
    }
}

struct PivotRow {
    lead: usize,
    series: Vec<Rational>,
    form: Vec<Rational>,
}

/// One elimination pass at truncation `trunc`; `None` if some row has no
/// nonzero entry of certified weight (deepen and retry).
fn eliminate(
    model: &NodalCubicModel,
    v: &MonomialValuation,
    m: u32,
    monos: &[Exps],
    order: &[usize],
    trunc: u32,
) -> Result<Option<CompatibleBasis>> {
    let bound = v.a().min(v.b()) * (u64::from(trunc) + 1);
    // columns: exponents of certified weight, in the initial-term order
    let mut cols: Vec<Exps> = Vec::new();
    for j in 0.. {
        if v.b() * j as u64 >= bound {
            break;
        }
        for i in 0.. {
            if v.weight((i, j)) >= bound {
                break;
            }
            cols.push((i, j));
        }
    }
    cols.sort_by(|x, y| v.weight(*x).cmp(&v.weight(*y)).then(y.0.cmp(&x.0)));
    let width = cols.len();
    let n = monos.len();

    let mut pivots: HashMap<usize, usize> = HashMap::new();
    let mut accepted: Vec<PivotRow> = Vec::with_capacity(n);
    for &idx in order {
        let (e1, e2) = monos[idx];
        let loc = model.localize_monomial(e1, e2, trunc)?;
        let mut series: Vec<Rational> = cols
            .iter()
            .map(|&(i, j)| loc.coeff(i, j).cloned().unwrap_or_else(Rational::zero))
            .collect();
        let mut form = vec![Rational::zero(); n];
        form[idx] = Rational::one();
        loop {
            let Some(lead) = series.iter().position(|c| !c.is_zero()) else {
                return Ok(None);
            };
            match pivots.get(&lead) {
                Some(&p) => {
                    let f = series[lead].clone();
                    let piv = &accepted[p];
                    for k in lead..width {
                        if !piv.series[k].is_zero() {
                            series[k] -= &f * &piv.series[k];
                        }
                    }
                    for (x, y) in form.iter_mut().zip(&piv.form) {
                        if !y.is_zero() {
                            *x -= &f * y;
                        }
                    }
                }
                None => {
                    let inv = series[lead].recip();
                    for x in series.iter_mut().skip(lead) {
                        *x *= &inv;
                    }
                    for x in form.iter_mut() {
                        *x *= &inv;
                    }
                    pivots.insert(lead, accepted.len());
                    accepted.push(PivotRow { lead, series, form });
                    break;
                }
            }
        }
    }
    accepted.sort_by_key(|r| r.lead);
    let degree = 3 * m;
    let sections = accepted
        .iter()
        .map(|r| Form::from_coords(degree, monos, &r.form))
        .collect();
    let values = accepted
        .iter()
        .map(|r| v.normalize(v.weight(cols[r.lead])))
        .collect();
    let initial = accepted.iter().map(|r| cols[r.lead]).collect();
    Ok(Some(CompatibleBasis { m, sections, values, initial: Some(initial) }))
}

/// Basis compatible with the divisor filtration `F^k R_m = g^k · R_{3m − k·deg g}`,
/// built top-down by extending a basis of `F^(k+1)` to one of `F^k`.
pub fn divisor_basis(g: &Form, m: u32) -> Result<CompatibleBasis> {
    if g.degree() == 0 || g.is_zero() {
        return Err(precondition("divisor filtration needs a nonconstant form"));
    }
    let degree = 3 * m;
    let monos = monomial_basis(degree);
    let mut span = Span::new(monos.len());
    let mut sections = Vec::new();
    let mut values = Vec::new();
    let kmax = degree / g.degree();
    for k in (0..=kmax).rev() {
        let gk = g.pow(k);
        for (e1, e2) in monomial_basis(degree - k * g.degree()) {
            let rest = degree - k * g.degree() - e1 - e2;
            let s = gk.mul(&Form::monomial(rest, e1, e2));
            if span.insert(&s.coords(&monos)) {
                sections.push(s);
                values.push(Rational::from_integer(k.into()));
            }
        }
    }
    Ok(CompatibleBasis { m, sections, values, initial: None })
}

/// A basis of `R_m` compatible with both `f` and `g`.
///
/// With `F_i`, `G_j` the increasing flag subspaces, each cell `(i, j)`
/// contributes vectors of `F_i ∩ G_j` completing a basis of
/// `F_(i−1) ∩ G_j + F_i ∩ G_(j−1)`; the result is checked against both flags.
pub fn joint_compatible_basis(
    model: &NodalCubicModel,
    f: &Filtration,
    g: &Filtration,
    m: u32,
) -> Result<JointCompatibleBasis> {
    let ff = f.flag(model, m)?;
    let gf = g.flag(model, m)?;
    let dim = dim_space(m) as usize;
    let mut chosen: Vec<(usize, usize, Vector)> = Vec::new();
    for (i, (_, fi)) in ff.levels().iter().enumerate() {
        for (j, (_, gj)) in gf.levels().iter().enumerate() {
            let cell = linalg::intersection(fi, gj, dim);
            let mut span = Span::new(dim);
            for (_, _, c) in chosen.iter().filter(|(a, b, _)| *a <= i && *b <= j) {
                span.insert(c);
            }
            for w in cell {
                if span.insert(&w) {
                    chosen.push((i, j, w));
                }
            }
        }
    }
    if chosen.len() != dim {
        return Err(Error::Verification(format!(
            "joint basis has {} elements, expected {dim}",
            chosen.len()
        )));
    }
    let monos = monomial_basis(3 * m);
    let coords: Vec<Vector> = chosen.iter().map(|(_, _, c)| c.clone()).collect();
    let values_f: Vec<Rational> = chosen.iter().map(|(i, _, _)| ff.levels()[*i].0.clone()).collect();
    let values_g: Vec<Rational> = chosen.iter().map(|(_, j, _)| gf.levels()[*j].0.clone()).collect();
    if !is_compatible(&coords, &values_f, &ff) || !is_compatible(&coords, &values_g, &gf) {
        return Err(Error::Verification("joint basis fails a flag rank check".into()));
    }
    Ok(JointCompatibleBasis {
        m,
        sections: coords.iter().map(|c| Form::from_coords(3 * m, &monos, c)).collect(),
        values_f,
        values_g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    fn v(a: u64, b: u64) -> MonomialValuation {
        MonomialValuation::new(a, b).unwrap()
    }

    fn sorted_values(b: &CompatibleBasis) -> Vec<Rational> {
        let mut vs = b.values.clone();
        vs.sort();
        vs
    }

    #[test]
    fn level_one_values_at_slope_one() {
        let model = NodalCubicModel::default();
        let b = initial_basis(&model, &v(1, 1), 1).unwrap();
        let expect: Vec<Rational> = [0, 1, 1, 2, 2, 2, 3, 3, 3, 3].iter().map(|&x| int(x)).collect();
        assert_eq!(sorted_values(&b), expect);
        // flag dimensions 10, 9, 7, 4
        let flag = b.flag();
        let dims: Vec<usize> = flag.levels().iter().map(|(_, s)| s.len()).collect();
        assert_eq!(dims, vec![4, 7, 9, 10]);
        let inits = b.initial.as_ref().unwrap();
        let mut dedup = inits.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), inits.len());
    }

    #[test]
    fn each_value_matches_vweight() {
        let model = NodalCubicModel::default();
        for val in [v(1, 2), v(2, 3), v(3, 1)] {
            let b = initial_basis(&model, &val, 1).unwrap();
            for (s, x) in b.sections.iter().zip(&b.values) {
                assert_eq!(&model.vweight(&val, s).unwrap().value, x);
            }
        }
    }

    #[test]
    fn level_zero_is_the_constant() {
        let model = NodalCubicModel::default();
        let b = initial_basis(&model, &v(2, 5), 0).unwrap();
        assert_eq!(b.values, vec![int(0)]);
    }

    #[test]
    fn max_at_slope_two_is_cube_of_line() {
        let model = NodalCubicModel::default();
        let b = initial_basis(&model, &v(1, 2), 1).unwrap();
        assert_eq!(b.values.iter().max().unwrap(), &int(6));
        let cube = Form::x1().add(&Form::x2()).pow(3);
        assert_eq!(model.vweight(&v(1, 2), &cube).unwrap().ord, 6);
    }

    #[test]
    fn divisor_basis_of_a_line() {
        let b = divisor_basis(&Form::x1(), 1).unwrap();
        assert_eq!(b.len(), 10);
        assert_eq!(b.value_sum(), int(10));
        for (s, k) in b.sections.iter().zip(&b.values) {
            assert_eq!(int(s.multiplicity_of(&Form::x1()) as i64), *k);
        }
    }

    #[test]
    fn joint_with_itself_matches_single() {
        let model = NodalCubicModel::default();
        let f = Filtration::Valuation(v(1, 1));
        let j = joint_compatible_basis(&model, &f, &f, 1).unwrap();
        let single = initial_basis(&model, &v(1, 1), 1).unwrap();
        let mut a = j.values_f.clone();
        a.sort();
        assert_eq!(a, sorted_values(&single));
        assert_eq!(j.values_f, j.values_g);
    }

    #[test]
    fn joint_valuation_and_line() {
        let model = NodalCubicModel::default();
        let f = Filtration::Valuation(v(1, 1));
        let g = Filtration::Divisor(Form::x1());
        let j = joint_compatible_basis(&model, &f, &g, 1).unwrap();
        assert!(j.for_first().is_compatible_with(&f.flag(&model, 1).unwrap()));
        assert!(j.for_second().is_compatible_with(&g.flag(&model, 1).unwrap()));
        for (s, x) in j.sections.iter().zip(&j.values_f) {
            assert_eq!(&f.value(&model, s).unwrap(), x);
        }
        for (s, x) in j.sections.iter().zip(&j.values_g) {
            assert_eq!(&g.value(&model, s).unwrap(), x);
        }
    }

    #[test]
    fn rejects_bad_order() {
        let model = NodalCubicModel::default();
        assert!(initial_basis_in_order(&model, &v(1, 1), 1, &[0, 0, 1]).is_err());
    }
}
