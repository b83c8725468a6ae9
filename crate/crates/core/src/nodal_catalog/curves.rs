use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::sequence::d;
use crate::error::{precondition, Error, Result};
use crate::exactnum::{rational_text, Rational};
use crate::linalg;
use crate::local_model::{monomial_basis, newton_vertices, BivariateSeries, Exps, Form, MonomialValuation, NodalCubicModel};

/// Largest `n` for which `D_n` is built by default.
pub const DEFAULT_MAX_CONSTRUCTED: usize = 4;

/// How integrality of a witness curve is known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Irreducibility {
    /// Single primitive Newton edge `(p,0)–(0,q)` with `p + q = 3·deg`, and
    /// `C` not a component: the germ at `o` is one reduced branch, and any
    /// component carrying it meets `C` at `o` with multiplicity `3·deg`, so
    /// by Bezout it is the whole curve.
    NewtonBezout,
    /// Assumed for the unconstructed curves `D_n`, n >= 5.
    Lemma,
}

/// The curve `D_n`: degree `d_n`, weighted order `d_(n−1)·d_(n+1)` under
/// `v_(d_(n−1), d_(n+1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularCurve {
    pub n: usize,
    pub form: Form,
    pub valuation: MonomialValuation,
    pub ord: u64,
    pub newton: Vec<Exps>,
    /// Dimension of the space of degree-`d_n` forms with `ord >= d_(n−1)·d_(n+1)`.
    pub solution_dim: usize,
    pub irreducibility: Irreducibility,
}

impl SingularCurve {
    pub fn degree(&self) -> u32 {
        self.form.degree()
    }

    /// Coefficients as CSV rows `e0,e1,e2,coeff`.
    pub fn to_csv(&self) -> String {
        let deg = self.degree();
        let mut out = String::from("e0,e1,e2,coeff\n");
        for ((e1, e2), c) in self.form.terms() {
            let _ = writeln!(out, "{},{e1},{e2},{}", deg - e1 - e2, rational_text(c));
        }
        out
    }
}

/// Newton polygon vertices of the truncated localization (uncertified).
pub fn newton_polygon(model: &NodalCubicModel, s: &Form, truncation: u32) -> Result<Vec<Exps>> {
    let series = model.localize(s, truncation)?;
    Ok(newton_vertices(series.support().map(|(e, _)| e)))
}

/// Vertices of a series whose support meets both axes; then no omitted
/// term can lie below the hull.
fn axis_polygon(series: &BivariateSeries) -> Option<Vec<Exps>> {
    let on_z = series.support().any(|((_, j), _)| j == 0);
    let on_w = series.support().any(|((i, _), _)| i == 0);
    (on_z && on_w).then(|| newton_vertices(series.support().map(|e| e.0)))
}

/// One primitive edge `(p,0)–(0,q)` with `p + q = 3·degree`.
fn edge_is_bezout_tight(verts: &[Exps], degree: u32) -> bool {
    matches!(verts, [(p, 0), (0, q)] if p.gcd(q) == 1 && p + q == 3 * degree)
}

/// Newton polygon certified exact: factors of `C` are split off (each
/// contributes exactly `z·w`), then the truncation is deepened until both
/// axis points are present, which bounds every omitted term above the hull.
pub fn certified_newton_polygon(model: &NodalCubicModel, s: &Form) -> Result<Vec<Exps>> {
    if s.is_zero() {
        return Err(Error::ZeroForm);
    }
    let cubic = Form::nodal_cubic();
    let k = s.multiplicity_of(&cubic);
    let mut rest = s.clone();
    for _ in 0..k {
        rest = rest.div_exact(&cubic).expect("multiplicity_of counted this factor");
    }
    let mut n = model.initial_truncation(rest.degree());
    loop {
        let series = model.localize(&rest, n)?;
        if let Some(verts) = axis_polygon(&series) {
            return Ok(verts.into_iter().map(|(i, j)| (i + k, j + k)).collect());
        }
        if n >= model.cap() {
            return Err(Error::TruncationExhausted { cap: model.cap() });
        }
        n = (2 * n).min(model.cap());
    }
}

/// Certificate that `s` is integral, from its Newton polygon at the node.
pub fn newton_bezout_certificate(model: &NodalCubicModel, s: &Form) -> Result<bool> {
    if s.multiplicity_of(&Form::nodal_cubic()) > 0 {
        return Ok(false);
    }
    let verts = certified_newton_polygon(model, s)?;
    Ok(edge_is_bezout_tight(&verts, s.degree()))
}

/// Solve for `D_n` in degree `d_n` and certify it.
pub fn construct_dn(model: &NodalCubicModel, n: usize) -> Result<SingularCurve> {
    construct_dn_up_to(model, n, DEFAULT_MAX_CONSTRUCTED)
}

pub fn construct_dn_up_to(model: &NodalCubicModel, n: usize, max_n: usize) -> Result<SingularCurve> {
    if n == 0 || n > max_n {
        return Err(precondition(format!("D_n is built for 1 <= n <= {max_n}, got {n}")));
    }
    let (a, b, deg) = (d(n - 1), d(n + 1), d(n) as u32);
    let v = MonomialValuation::new(a, b)?;
    let target = a * b;
    // every exponent of weight < target is exact at this truncation
    let trunc = u32::try_from(target / a.min(b)).map_err(|_| precondition("weights too large"))?;
    if trunc > model.cap() {
        return Err(Error::TruncationExhausted { cap: model.cap() });
    }
    let monos = monomial_basis(deg);
    let conditions: Vec<Exps> = (0..=trunc)
        .flat_map(|s| (0..=s).map(move |i| (i, s - i)))
        .filter(|&e| v.weight(e) < target)
        .collect();
    let mut columns = Vec::with_capacity(monos.len());
    for &(e1, e2) in &monos {
        let loc = model.localize_monomial(e1, e2, trunc)?;
        columns.push(
            conditions
                .iter()
                .map(|&(i, j)| loc.coeff(i, j).cloned().unwrap_or_else(Rational::zero))
                .collect::<Vec<_>>(),
        );
    }
    let rows: Vec<Vec<Rational>> = (0..conditions.len())
        .map(|r| columns.iter().map(|c| c[r].clone()).collect())
        .collect();
    let kernel = linalg::nullspace(&rows, monos.len());
    if kernel.is_empty() {
        return Err(Error::Verification(format!("no degree-{deg} curve reaches order {target}")));
    }
    let solution_dim = kernel.len();
    let raw = Form::from_coords(deg, &monos, &kernel[0]);

    if raw.multiplicity_of(&Form::nodal_cubic()) > 0 {
        return Err(Error::Verification(format!("C divides the solution for D_{n}")));
    }
    // one expansion certifies the order (weight bound min(a,b)·(N+1) > ab)
    // and the polygon (both axis points within total degree N)
    let series = model.localize(&raw, trunc.max(b as u32))?;
    let ord = series.weighted_initial(&v).map(|t| t.weight);
    if ord != Some(target) {
        return Err(Error::Verification(format!("D_{n} has order {ord:?}, expected {target}")));
    }
    let newton = axis_polygon(&series).ok_or_else(|| Error::Verification(format!("D_{n} misses an axis")))?;
    if newton != [(b as u32, 0), (0, a as u32)] {
        return Err(Error::Verification(format!("D_{n} Newton polygon {newton:?}")));
    }
    if !edge_is_bezout_tight(&newton, deg) {
        return Err(Error::Verification(format!("D_{n} failed the integrality certificate")));
    }
    // scale so the w-axis vertex has coefficient 1
    let c = series.coeff(0, a as u32).cloned().unwrap_or_else(Rational::zero);
    let form = raw.scale(&c.recip());
    Ok(SingularCurve {
        n,
        form,
        valuation: v,
        ord: target,
        newton,
        solution_dim,
        irreducibility: Irreducibility::NewtonBezout,
    })
}

/// `D_n` from the shared model, built once per process.
pub fn catalog_curve(n: usize) -> Result<Arc<SingularCurve>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<SingularCurve>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.read().expect("curve cache poisoned").get(&n) {
        return Ok(c.clone());
    }
    let c = Arc::new(construct_dn(NodalCubicModel::shared(), n)?);
    cache.write().expect("curve cache poisoned").insert(n, c.clone());
    Ok(c)
}

/// `ord_(a,b)(D_n)` read off the Newton segment `(d_(n+1),0)–(0,d_(n−1))`.
pub fn dn_order(n: usize, v: &MonomialValuation) -> u64 {
    (v.a() * d(n + 1)).min(v.b() * d(n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d1_is_the_line() {
        let model = NodalCubicModel::default();
        let c = construct_dn(&model, 1).unwrap();
        assert_eq!(c.degree(), 1);
        assert_eq!(c.ord, 2);
        assert_eq!(c.solution_dim, 1);
        assert_eq!(c.newton, vec![(2, 0), (0, 1)]);
        // proportional to x1 + x2
        let line = Form::x1().add(&Form::x2());
        assert_eq!(c.form.primitive(), line.primitive());
        assert_eq!(c.form.coeff((1, 0)), c.form.coeff((0, 1)));
        assert!(c.to_csv().starts_with("e0,e1,e2,coeff\n"));
    }

    #[test]
    fn d2_and_d3() {
        let model = NodalCubicModel::default();
        let c = construct_dn(&model, 2).unwrap();
        assert_eq!((c.degree(), c.ord, c.solution_dim), (2, 5, 1));
        assert_eq!(c.newton, vec![(5, 0), (0, 1)]);
        let c = construct_dn(&model, 3).unwrap();
        assert_eq!((c.degree(), c.ord, c.solution_dim), (5, 26, 1));
        assert_eq!(c.newton, vec![(13, 0), (0, 2)]);
        assert_eq!(c.irreducibility, Irreducibility::NewtonBezout);
    }

    #[test]
    fn polygons() {
        let model = NodalCubicModel::default();
        assert_eq!(certified_newton_polygon(&model, &Form::nodal_cubic()).unwrap(), vec![(1, 1)]);
        let c2 = Form::nodal_cubic().pow(2).mul(&Form::x1());
        assert_eq!(certified_newton_polygon(&model, &c2).unwrap(), vec![(3, 2), (2, 3)]);
        let line = Form::x1().add(&Form::x2());
        assert_eq!(newton_polygon(&model, &line, 4).unwrap(), vec![(2, 0), (0, 1)]);
    }

    #[test]
    fn certificate_rejects_reducible() {
        let model = NodalCubicModel::default();
        let line = Form::x1().add(&Form::x2());
        assert!(newton_bezout_certificate(&model, &line).unwrap());
        assert!(!newton_bezout_certificate(&model, &line.mul(&Form::x0())).unwrap());
        assert!(!newton_bezout_certificate(&model, &line.pow(2)).unwrap());
        assert!(!newton_bezout_certificate(&model, &Form::nodal_cubic()).unwrap());
    }

    #[test]
    fn out_of_range() {
        let model = NodalCubicModel::default();
        assert!(construct_dn(&model, 0).is_err());
        assert!(construct_dn(&model, 5).is_err());
    }

    #[test]
    fn order_from_segment() {
        let v = MonomialValuation::new(1, 2).unwrap();
        assert_eq!(dn_order(1, &v), 2);
        let v = MonomialValuation::new(4, 25).unwrap();
        assert_eq!(dn_order(2, &v), 20);
    }
}
