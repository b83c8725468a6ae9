//! Intersection theory on the `(a,b)`-weighted blowup of the plane at the node.
//!
//! Classes are written `d·L − m·E` with `L² = 1`, `L·E = 0`, `E² = −1/(ab)`.
//! All invariants here are in units of `ord_E`; divide by `a` for `v_t`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::exactnum::{serde_text, Rational};
use crate::local_model::{Form, MonomialValuation, NodalCubicModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupModel {
    v: MonomialValuation,
}

impl BlowupModel {
    pub fn new(v: MonomialValuation) -> Self {
        Self { v }
    }

    pub fn valuation(&self) -> MonomialValuation {
        self.v
    }

    fn ab(&self) -> Rational {
        Rational::from_integer((self.v.a() * self.v.b()).into())
    }

    pub fn e_squared(&self) -> Rational {
        -self.ab().recip()
    }

    /// `A(E) = a + b`.
    pub fn log_discrepancy(&self) -> Rational {
        Rational::from_integer(self.v.log_discrepancy().into())
    }

    /// `(d1·L − m1·E)·(d2·L − m2·E)`.
    pub fn intersect(&self, d1: &Rational, m1: &Rational, d2: &Rational, m2: &Rational) -> Rational {
        d1 * d2 + m1 * m2 * self.e_squared()
    }

    pub fn curve_class(&self, degree: u32, ord: u64) -> CurveClass {
        let d = Rational::from_integer(degree.into());
        let m = Rational::from_integer(ord.into());
        CurveClass { degree, ord, self_intersection: self.intersect(&d, &m, &d, &m) }
    }

    /// `λ` with `(3L − λE)·(dL − m̂E) = 0`, i.e. `3d·ab/m̂`.
    pub fn orthogonal_threshold(&self, w: &CurveClass) -> Option<Rational> {
        (w.ord > 0).then(|| {
            Rational::from_integer((3 * u64::from(w.degree)).into()) * self.ab()
                / Rational::from_integer(w.ord.into())
        })
    }
}

/// Class `d·L − ord·E` of a strict transform.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveClass {
    pub degree: u32,
    pub ord: u64,
    #[serde(rename = "self_int", with = "serde_text")]
    pub self_intersection: Rational,
}

pub fn strict_transform_class(
    model: &NodalCubicModel,
    curve: &Form,
    v: &MonomialValuation,
) -> Result<CurveClass> {
    let ord = model.vweight(v, curve)?.ord;
    Ok(BlowupModel::new(*v).curve_class(curve.degree(), ord))
}

/// Pseudoeffective threshold `T(E)` read off an irreducible witness curve of
/// nonpositive self-intersection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TCertificate {
    pub t: Rational,
    /// Self-intersection zero: the witness is nef too, so `ε = T`.
    pub nef_boundary: bool,
}

impl TCertificate {
    pub fn epsilon(&self) -> Option<&Rational> {
        self.nef_boundary.then_some(&self.t)
    }
}

/// `T = 3·ord/d` when the (caller-asserted irreducible) witness has
/// self-intersection `<= 0`; `None` otherwise.
pub fn t_certificate(w: &CurveClass) -> Option<TCertificate> {
    if w.self_intersection.is_positive() || w.degree == 0 {
        return None;
    }
    let t = Rational::from_integer((3 * w.ord).into()) / Rational::from_integer(w.degree.into());
    Some(TCertificate { t, nef_boundary: w.self_intersection.is_zero() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FujitaTriple {
    #[serde(rename = "T", with = "serde_text")]
    pub t: Rational,
    #[serde(with = "serde_text")]
    pub epsilon: Rational,
    #[serde(rename = "S", with = "serde_text")]
    pub s: Rational,
}

/// `ε = 9ab/T`, `S = (T + ε)/3`.
pub fn fujita_complete(t: &Rational, v: &MonomialValuation) -> Result<FujitaTriple> {
    if !t.is_positive() {
        return Err(precondition("T must be positive"));
    }
    let nine_ab = Rational::from_integer((9 * v.a() * v.b()).into());
    let epsilon = &nine_ab / t;
    let s = (t + &epsilon) / Rational::from_integer(3.into());
    Ok(FujitaTriple { t: t.clone(), epsilon, s })
}

impl FujitaTriple {
    pub fn holds(&self, v: &MonomialValuation) -> bool {
        let nine_ab = Rational::from_integer((9 * v.a() * v.b()).into());
        &self.t * &self.epsilon == nine_ab
            && &self.s * Rational::from_integer(3.into()) == &self.t + &self.epsilon
    }

    /// The same triple for `v_t = ord_E / a`.
    pub fn normalized(&self, v: &MonomialValuation) -> FujitaTriple {
        let a = Rational::from_integer(v.a().into());
        FujitaTriple { t: &self.t / &a, epsilon: &self.epsilon / &a, s: &self.s / &a }
    }
}

/// Invariants of `v_(a,b)`, normalized to `v_t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub a: u64,
    pub b: u64,
    #[serde(with = "serde_text")]
    pub t: Rational,
    #[serde(rename = "A", with = "serde_text")]
    pub a_inv: Rational,
    #[serde(rename = "T", with = "serde_text")]
    pub t_inv: Rational,
    #[serde(with = "serde_text")]
    pub epsilon: Rational,
    #[serde(rename = "S", with = "serde_text")]
    pub s: Rational,
    pub witness: CurveClass,
    pub provenance: String,
}

impl InvariantRecord {
    /// Assemble from a certified witness (a class for `v` itself).
    pub fn from_witness(v: &MonomialValuation, witness: CurveClass, provenance: String) -> Result<Self> {
        let model = BlowupModel::new(*v);
        let cert = t_certificate(&witness)
            .ok_or_else(|| precondition("witness has positive self-intersection"))?;
        let triple = fujita_complete(&cert.t, v)?;
        if let Some(eps) = cert.epsilon() {
            if eps != &triple.epsilon {
                return Err(crate::Error::Verification(format!(
                    "nef witness gives ε = {eps}, Fujita gives {}",
                    triple.epsilon
                )));
            }
        }
        let lambda = model
            .orthogonal_threshold(&witness)
            .ok_or_else(|| precondition("witness does not pass through the node"))?;
        if &lambda * &triple.t != Rational::from_integer((9 * v.a() * v.b()).into()) {
            return Err(crate::Error::Verification("λ·T ≠ 9ab".into()));
        }
        let a = Rational::from_integer(v.a().into());
        let norm = triple.normalized(v);
        Ok(Self {
            a: v.a(),
            b: v.b(),
            t: v.slope(),
            a_inv: model.log_discrepancy() / a,
            t_inv: norm.t,
            epsilon: norm.epsilon,
            s: norm.s,
            witness,
            provenance,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn v(a: u64, b: u64) -> MonomialValuation {
        MonomialValuation::new(a, b).unwrap()
    }

    #[test]
    fn cubic_classes() {
        let model = NodalCubicModel::default();
        let c = Form::nodal_cubic();
        let k = strict_transform_class(&model, &c, &v(1, 7)).unwrap();
        assert_eq!((k.degree, k.ord), (3, 8));
        assert_eq!(k.self_intersection, rat(-1, 7));
        assert_eq!(t_certificate(&k).unwrap().t, int(8));
        let k = strict_transform_class(&model, &c, &v(1, 1)).unwrap();
        assert_eq!((k.degree, k.ord, k.self_intersection.clone()), (3, 2, int(5)));
        assert!(t_certificate(&k).is_none());
    }

    #[test]
    fn line_class() {
        let model = NodalCubicModel::default();
        let d1 = Form::x1().add(&Form::x2());
        let k = strict_transform_class(&model, &d1, &v(1, 2)).unwrap();
        assert_eq!((k.degree, k.ord, k.self_intersection.clone()), (1, 2, int(-1)));
        assert_eq!(t_certificate(&k).unwrap().t, int(6));
    }

    #[test]
    fn fujita_examples() {
        let f = fujita_complete(&int(8), &v(1, 7)).unwrap();
        assert_eq!((f.epsilon.clone(), f.s.clone()), (rat(63, 8), rat(127, 24)));
        assert!(f.holds(&v(1, 7)));
        let f = fujita_complete(&int(3), &v(1, 1)).unwrap();
        assert_eq!((f.epsilon.clone(), f.s.clone()), (int(3), int(2)));
        let f = fujita_complete(&int(6), &v(1, 2)).unwrap();
        assert_eq!((f.epsilon.clone(), f.s.clone()), (int(3), int(3)));
        assert!(fujita_complete(&int(0), &v(1, 2)).is_err());
    }

    #[test]
    fn record_normalizes() {
        let w = BlowupModel::new(v(2, 15)).curve_class(3, 17);
        let r = InvariantRecord::from_witness(&v(2, 15), w, "cubic".into()).unwrap();
        assert_eq!(r.a_inv, rat(17, 2));
        assert_eq!(r.s, rat(559, 102));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["S"], "559/102");
        assert_eq!(json["witness"]["self_int"], "-19/30");
    }

    #[test]
    fn nef_witness_agrees_with_fujita() {
        // the conic class at (4, 25): 2² − 10²/100 = 0
        let w = BlowupModel::new(v(4, 25)).curve_class(2, 20);
        let cert = t_certificate(&w).unwrap();
        assert!(cert.nef_boundary);
        assert_eq!(cert.t, int(30));
        assert!(InvariantRecord::from_witness(&v(4, 25), w, "x".into()).is_ok());
    }
}
