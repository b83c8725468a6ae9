use num_traits::Signed;

use super::curves::{catalog_curve, dn_order, DEFAULT_MAX_CONSTRUCTED};
use super::sequence::{d, tau};
use crate::blowup_geom::{strict_transform_class, t_certificate, BlowupModel, CurveClass, InvariantRecord};
use crate::error::{Error, Result};
use crate::exactnum::{QuadRational, Rational};
use crate::local_model::{Form, MonomialValuation, NodalCubicModel};

/// A curve whose strict transform may bound the pseudoeffective cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub label: String,
    pub class: CurveClass,
    pub constructed: bool,
}

/// Candidate witnesses for `v` with `a <= b`: the cubic, every constructed
/// `D_n`, and the one `D_n` past the constructed range whose interval
/// `[t'_(n−1), t'_n]` contains `t`.
pub fn candidate_witnesses(model: &NodalCubicModel, v: &MonomialValuation) -> Result<Vec<Witness>> {
    debug_assert!(v.a() <= v.b());
    let mut out = vec![Witness {
        label: "C".into(),
        class: strict_transform_class(model, &Form::nodal_cubic(), v)?,
        constructed: true,
    }];
    for n in 1..=DEFAULT_MAX_CONSTRUCTED {
        let curve = catalog_curve(n)?;
        out.push(Witness {
            label: format!("D_{n}"),
            class: strict_transform_class(model, &curve.form, v)?,
            constructed: true,
        });
    }
    let t = v.slope();
    if QuadRational::from(&t) < tau() {
        let bm = BlowupModel::new(*v);
        let mut n = DEFAULT_MAX_CONSTRUCTED + 1;
        loop {
            let (lo, hi) = (d(n - 1), d(n));
            if Rational::new((hi * hi).into(), (lo * lo).into()) > t {
                break;
            }
            let class = bm.curve_class(d(n) as u32, dn_order(n, v));
            if !class.self_intersection.is_positive() {
                out.push(Witness { label: format!("D_{n}"), class, constructed: false });
                break;
            }
            n += 1;
        }
    }
    Ok(out)
}

/// Exact `A, T, ε, S` for `v_(a,b)`, normalized to `v_t` with `t = b/a`.
///
/// Every certifying witness must give the same `T`; the recorded one is the
/// most negative, ties going to the first listed.
pub fn invariants(model: &NodalCubicModel, a: u64, b: u64) -> Result<InvariantRecord> {
    let v = MonomialValuation::new(a, b)?;
    let reflected = a > b;
    let u = if reflected { v.swapped() } else { v };
    let certifying: Vec<(Witness, Rational)> = candidate_witnesses(model, &u)?
        .into_iter()
        .filter_map(|w| t_certificate(&w.class).map(|c| (w, c.t)))
        .collect();
    let Some((best, t_val)) = certifying
        .iter()
        .min_by(|x, y| x.0.class.self_intersection.cmp(&y.0.class.self_intersection))
        .cloned()
    else {
        return Err(Error::Verification(format!("no witness certifies T for ({a},{b})")));
    };
    for (w, t) in &certifying {
        if t != &t_val {
            return Err(Error::Verification(format!(
                "witnesses {} and {} disagree on T: {t_val} vs {t}",
                best.label, w.label
            )));
        }
    }
    let mut prov = format!("witness {}", best.label);
    if best.label.starts_with('D') {
        prov.push_str(if best.constructed {
            " (constructed; integral by the Newton-Bezout certificate)"
        } else {
            " (order from its Newton segment; integrality assumed, not constructed)"
        });
    }
    if reflected {
        prov.push_str("; applied through σ: x2 -> -x2, which swaps the weights");
    }
    let others: Vec<&str> = certifying
        .iter()
        .map(|(w, _)| w.label.as_str())
        .filter(|l| *l != best.label)
        .collect();
    if !others.is_empty() {
        prov.push_str(&format!("; T cross-checked against {}", others.join(", ")));
    }
    InvariantRecord::from_witness(&v, best.class, prov)
}
