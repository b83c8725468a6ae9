use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use super::sequence::{d_big, piece_index, tau, Breakpoints};
use crate::error::{precondition, Result};
use crate::exactnum::{quad_text, QuadRational};

/// The special fibre `Proj gr_(v_t) R` on the Fano range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegenerationDescriptor {
    /// `P(1, d_n², d_(n+1)²)`.
    WeightedPlane { weights: [BigInt; 3] },
    /// `x0·x3 = x1^(d_(n+1)) + x2^(d_(n−1))` in `P(1, d_(n−1), d_(n+1), d_n²)`.
    Hypersurface { weights: [BigInt; 4], exponents: [BigInt; 2] },
}

impl DegenerationDescriptor {
    pub fn open_piece(n: usize) -> Self {
        let (x, y) = (d_big(n), d_big(n + 1));
        Self::WeightedPlane { weights: [BigInt::from(1), &x * &x, &y * &y] }
    }

    pub fn at_breakpoint(n: usize) -> Self {
        assert!(n >= 1);
        let (lo, mid, hi) = (d_big(n - 1), d_big(n), d_big(n + 1));
        Self::Hypersurface {
            weights: [BigInt::from(1), lo.clone(), hi.clone(), &mid * &mid],
            exponents: [hi, lo],
        }
    }

    /// Both sides of `x0·x3 = x1^p + x2^q` have the same weighted degree.
    pub fn is_quasi_homogeneous(&self) -> bool {
        match self {
            Self::WeightedPlane { .. } => true,
            Self::Hypersurface { weights: w, exponents: [p, q] } => {
                let lhs = &w[0] + &w[3];
                lhs == p * &w[1] && lhs == q * &w[2]
            }
        }
    }
}

impl fmt::Display for DegenerationDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |ws: &[BigInt]| ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",");
        let power = |var: &str, e: &BigInt| {
            if *e == BigInt::from(1) {
                var.to_string()
            } else {
                format!("{var}^{e}")
            }
        };
        match self {
            Self::WeightedPlane { weights } => write!(f, "P({})", list(weights)),
            Self::Hypersurface { weights, exponents: [p, q] } => write!(
                f,
                "x0*x3 = {} + {} in P({})",
                power("x1", p),
                power("x2", q),
                list(weights)
            ),
        }
    }
}

impl Serialize for DegenerationDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(3))?;
        let strings = |ws: &[BigInt]| ws.iter().map(|w| w.to_string()).collect::<Vec<_>>();
        match self {
            Self::WeightedPlane { weights } => {
                m.serialize_entry("kind", "weighted_plane")?;
                m.serialize_entry("weights", &strings(weights))?;
            }
            Self::Hypersurface { weights, .. } => {
                m.serialize_entry("kind", "hypersurface")?;
                m.serialize_entry("weights", &strings(weights))?;
            }
        }
        m.serialize_entry("text", &self.to_string())?;
        m.end()
    }
}

/// Finite generation and Fano verdict for `v_t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    #[serde(serialize_with = "crate::exactnum::serde_text::quad::serialize")]
    pub t: QuadRational,
    pub fg: bool,
    pub fano: bool,
    pub piece: Option<usize>,
    pub degeneration: Option<DegenerationDescriptor>,
    pub reason: String,
    pub provenance: String,
}

/// Classify `v_t`: `gr_(v_t) R` is finitely generated iff `t` is rational or
/// lies in `(τ', τ)`, and its Proj is Fano iff `t ∈ (τ', τ)`.
pub fn classify(t: &QuadRational) -> Result<Verdict> {
    if !t.is_positive() {
        return Err(precondition(format!("t must be positive, got {t}")));
    }
    let one = QuadRational::from(1);
    if t < &one {
        let mut v = classify(&t.recip().expect("positive"))?;
        v.t = t.clone();
        v.reason = format!("σ-reflection of 1/t = {}: {}", quad_text(&v.t.recip().unwrap()), v.reason);
        return Ok(v);
    }
    let rational = t.is_rational();
    let provenance = "closed-form classification with exact quadratic comparisons".to_string();
    let Some(mut n) = piece_index(t) else {
        let reason = if rational {
            "rational slope at or beyond τ: finitely generated, Proj not klt since A = T".to_string()
        } else {
            "irrational slope at or beyond τ: S is strictly concave there".to_string()
        };
        return Ok(Verdict {
            t: t.clone(),
            fg: rational,
            fano: false,
            piece: None,
            degeneration: None,
            reason,
            provenance,
        });
    };
    let bp = Breakpoints::new(n + 1)?;
    if t == &QuadRational::from(bp.t(n + 1)) {
        n += 1;
    }
    let at_left = t == &QuadRational::from(bp.t(n));
    let degeneration = if n == 0 && t == &one {
        DegenerationDescriptor::WeightedPlane { weights: [1.into(), 1.into(), 1.into()] }
    } else if at_left && n >= 1 {
        DegenerationDescriptor::at_breakpoint(n)
    } else {
        DegenerationDescriptor::open_piece(n)
    };
    let reason = if at_left {
        format!("t = t_{n}: S is linear on the adjacent pieces, Fano range (τ', τ)")
    } else {
        format!("t in the open piece (t_{n}, t_{}): S linear near t, Fano range (τ', τ)", n + 1)
    };
    Ok(Verdict {
        t: t.clone(),
        fg: true,
        fano: true,
        piece: Some(n),
        degeneration: Some(degeneration),
        reason,
        provenance,
    })
}

/// `τ` and its conjugate, as text.
pub fn thresholds() -> (String, String) {
    (quad_text(&tau().conjugate()), quad_text(&tau()))
}
