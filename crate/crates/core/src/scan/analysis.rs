use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{ScanRow, ScanSpec, SCHEMA_VERSION};
use crate::exactnum::{serde_text, Rational};
use super::ScanReport;

/// A change of slope located by exact second differences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Breakpoint {
    /// The only nonzero second difference in its neighbourhood sits at `t`.
    At {
        #[serde(with = "serde_text")]
        t: Rational,
    },
    /// Two adjacent nonzero second differences: a kink inside `(lo, hi)`, or
    /// one that cannot be pinned to a grid point at the edge of the grid.
    Within {
        #[serde(with = "serde_text")]
        lo: Rational,
        #[serde(with = "serde_text")]
        hi: Rational,
    },
    /// Three or more consecutive nonzero second differences.
    Region {
        #[serde(with = "serde_text")]
        lo: Rational,
        #[serde(with = "serde_text")]
        hi: Rational,
    },
}

/// A maximal run of at least three grid points on one line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearPiece {
    #[serde(with = "serde_text")]
    pub lo: Rational,
    #[serde(with = "serde_text")]
    pub hi: Rational,
    #[serde(with = "serde_text")]
    pub slope: Rational,
}

fn flag(row: &mut ScanRow, f: &str) {
    if !row.flags.iter().any(|x| x == f) {
        row.flags.push(f.to_string());
    }
}

/// Fill second differences, flags and verdicts, and extract breakpoints,
/// linear pieces and concavity violations. The grid must be uniform.
pub fn analyze(spec: ScanSpec, mut rows: Vec<ScanRow>) -> ScanReport {
    let n = rows.len();
    let d2: Vec<Option<Rational>> = (0..n)
        .map(|i| {
            if i == 0 || i + 1 == n {
                return None;
            }
            let (a, b, c) = (rows[i - 1].s.as_ref()?, rows[i].s.as_ref()?, rows[i + 1].s.as_ref()?);
            Some(a - b - b + c)
        })
        .collect();
    let kink = |i: usize| d2[i].as_ref().is_some_and(|x| !x.is_zero());
    let flat = |i: usize| d2[i].as_ref().is_some_and(Zero::is_zero);

    let mut breakpoints = Vec::new();
    let mut i = 0;
    while i < n {
        if !kink(i) {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < n && kink(i + 1) {
            i += 1;
        }
        let end = i;
        let bp = match end - start {
            0 if flat(start - 1) && flat(start + 1) => Breakpoint::At { t: rows[start].t.clone() },
            0 => Breakpoint::Within { lo: rows[start - 1].t.clone(), hi: rows[start + 1].t.clone() },
            1 => Breakpoint::Within { lo: rows[start].t.clone(), hi: rows[end].t.clone() },
            _ => Breakpoint::Region { lo: rows[start - 1].t.clone(), hi: rows[end + 1].t.clone() },
        };
        if let Breakpoint::At { .. } = bp {
            flag(&mut rows[start], "breakpoint");
        }
        breakpoints.push(bp);
        i += 1;
    }

    let mut pieces = Vec::new();
    let mut j = 0;
    while j + 1 < n {
        if rows[j].s.is_none() || rows[j + 1].s.is_none() {
            j += 1;
            continue;
        }
        let mut k = j + 1;
        while k + 1 < n && flat(k) {
            k += 1;
        }
        if k - j >= 2 {
            let (sj, sk) = (rows[j].s.as_ref().unwrap(), rows[k].s.as_ref().unwrap());
            let slope = (sk - sj) / (&rows[k].t - &rows[j].t);
            pieces.push(LinearPiece { lo: rows[j].t.clone(), hi: rows[k].t.clone(), slope });
        }
        j = k;
    }

    let mut concavity_violations = Vec::new();
    for (i, d) in d2.iter().enumerate() {
        let row = &mut rows[i];
        row.second_difference = d.clone();
        match d {
            Some(x) if x.is_positive() => {
                flag(row, "kink");
                flag(row, "concavity_violation");
                concavity_violations.push(row.t.clone());
            }
            Some(x) if !x.is_zero() => flag(row, "kink"),
            Some(_) => flag(row, "linear"),
            None => {}
        }
        // rational weights: the minimal rational subspace through v_t is its
        // own ray, where S is trivially linear
        row.fg_scan = row.s.as_ref().map(|_| true);
    }

    ScanReport {
        schema_version: SCHEMA_VERSION,
        config: spec,
        rows,
        breakpoints,
        pieces,
        concavity_violations,
        note: "'linear' rows are consistent with linearity at the grid resolution, not a proof; \
               breakpoints are located up to one grid step"
            .into(),
    }
}
