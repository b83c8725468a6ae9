//! Grid scans of `S(v_t)` with exact breakpoint, linearity and concavity
//! detection, `δ` upper bounds, report emission and a content-addressed cache.

mod analysis;
mod cache;
mod emit;

pub use analysis::{analyze, Breakpoint, LinearPiece};
pub use cache::{cache_key, cached_scan, default_cache_dir, load_cached, store_cached, CACHE_ENV};
pub use emit::{to_csv, to_json, to_svg, write_output};

use std::path::PathBuf;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::exactnum::{serde_text, Rational};
use crate::local_model::{MonomialValuation, NodalCubicModel, DEFAULT_TRUNCATION_CAP};
use crate::nodal_catalog::{a_invariant_rational, classify, s_exact_rational};
use crate::par::{self, Execution};
use crate::section_ring::s_m_valuation;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    /// Closed-form `S(v_t)`.
    Exact,
    /// Finite-level `S_m(v_t)` from compatible bases.
    Sample,
}

/// The parameters that determine a scan's result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSpec {
    #[serde(with = "serde_text")]
    pub t_min: Rational,
    #[serde(with = "serde_text")]
    pub t_max: Rational,
    #[serde(with = "serde_text")]
    pub step: Rational,
    pub mode: ScanMode,
    /// Level `m` (sample mode only).
    pub m: Option<u32>,
    /// Truncation cap (sample mode only).
    pub cap: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub t_min: Rational,
    pub t_max: Rational,
    pub step: Rational,
    pub mode: ScanMode,
    pub m: u32,
    pub cap: u32,
    pub cache_dir: Option<PathBuf>,
}

impl ScanConfig {
    pub fn exact(t_min: Rational, t_max: Rational, step: Rational) -> Self {
        Self { t_min, t_max, step, mode: ScanMode::Exact, m: 1, cap: DEFAULT_TRUNCATION_CAP, cache_dir: None }
    }

    pub fn sample(t_min: Rational, t_max: Rational, step: Rational, m: u32) -> Self {
        Self { mode: ScanMode::Sample, m, ..Self::exact(t_min, t_max, step) }
    }

    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }

    /// A single-point grid (`t_min == t_max`) is allowed.
    pub fn validate(&self) -> Result<()> {
        if !self.t_min.is_positive() {
            return Err(precondition("t_min must be positive"));
        }
        if self.t_min > self.t_max {
            return Err(precondition("t_min must not exceed t_max"));
        }
        if !self.step.is_positive() {
            return Err(precondition("step must be positive"));
        }
        if self.mode == ScanMode::Sample && self.m == 0 {
            return Err(precondition("sample mode needs m >= 1"));
        }
        Ok(())
    }

    pub fn spec(&self) -> ScanSpec {
        let sample = self.mode == ScanMode::Sample;
        ScanSpec {
            t_min: self.t_min.clone(),
            t_max: self.t_max.clone(),
            step: self.step.clone(),
            mode: self.mode,
            m: sample.then_some(self.m),
            cap: sample.then_some(self.cap),
        }
    }

    /// `t_min, t_min + h, …` up to and including `t_max` when on the grid.
    pub fn grid(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        let mut t = self.t_min.clone();
        while t <= self.t_max {
            out.push(t.clone());
            t += &self.step;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    #[serde(with = "serde_text")]
    pub t: Rational,
    #[serde(rename = "A", with = "serde_text")]
    pub a: Rational,
    #[serde(rename = "S", with = "serde_text::option")]
    pub s: Option<Rational>,
    #[serde(with = "serde_text::option")]
    pub ratio: Option<Rational>,
    /// `S(t_(i+1)) − 2S(t_i) + S(t_(i−1))` at interior rows.
    #[serde(with = "serde_text::option")]
    pub second_difference: Option<Rational>,
    pub flags: Vec<String>,
    /// Local linearity verdict; `None` where it cannot be decided.
    pub fg_scan: Option<bool>,
    pub fg_classify: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub schema_version: u32,
    pub config: ScanSpec,
    pub rows: Vec<ScanRow>,
    pub breakpoints: Vec<Breakpoint>,
    pub pieces: Vec<LinearPiece>,
    #[serde(with = "serde_text::vec")]
    pub concavity_violations: Vec<Rational>,
    pub note: String,
}

impl ScanReport {
    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    /// Breakpoints located exactly at grid points.
    pub fn breakpoints_at(&self) -> Vec<Rational> {
        self.breakpoints
            .iter()
            .filter_map(|b| match b {
                Breakpoint::At { t } => Some(t.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn slopes(&self) -> Vec<Rational> {
        self.pieces.iter().map(|p| p.slope.clone()).collect()
    }
}

fn evaluate(config: &ScanConfig, model: &NodalCubicModel, t: &Rational) -> Result<Rational> {
    match config.mode {
        ScanMode::Exact => s_exact_rational(t),
        ScanMode::Sample => s_m_valuation(model, &MonomialValuation::from_slope(t)?, config.m),
    }
}

/// Run a scan (no cache) with the given execution strategy.
pub fn scan_with(config: &ScanConfig, exec: Execution) -> Result<ScanReport> {
    config.validate()?;
    let owned;
    let model = if config.cap == DEFAULT_TRUNCATION_CAP {
        NodalCubicModel::shared()
    } else {
        owned = NodalCubicModel::with_cap(config.cap);
        &owned
    };
    let grid = config.grid();
    let values = par::map(exec, &grid, |t| evaluate(config, model, t));
    let mut rows = Vec::with_capacity(grid.len());
    for (t, v) in grid.into_iter().zip(values) {
        let a = a_invariant_rational(&t)?;
        let fg_classify = classify(&t.clone().into())?.fg;
        let (s, error) = match v {
            Ok(s) => (Some(s), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let ratio = s.as_ref().filter(|s| !s.is_zero()).map(|s| &a / s);
        let mut flags = Vec::new();
        if error.is_some() {
            flags.push("error".to_string());
        }
        rows.push(ScanRow {
            t,
            a,
            s,
            ratio,
            second_difference: None,
            flags,
            fg_scan: None,
            fg_classify,
            error,
        });
    }
    Ok(analyze(config.spec(), rows))
}

/// Run a scan, reading and writing the cache when a directory is configured.
pub fn scan(config: &ScanConfig) -> Result<ScanReport> {
    match &config.cache_dir {
        Some(dir) => cached_scan(config, dir, Execution::default()),
        None => scan_with(config, Execution::default()),
    }
}

/// Minimum of `A/S` over an exact-mode grid; every value bounds `δ` above.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaReport {
    #[serde(with = "serde_text")]
    pub min: Rational,
    #[serde(with = "serde_text::vec")]
    pub argmin: Vec<Rational>,
    pub all_at_least_one: bool,
    pub note: String,
}

pub fn delta_upper_bound(config: &ScanConfig) -> Result<DeltaReport> {
    if config.mode != ScanMode::Exact {
        return Err(precondition("delta bound uses exact mode"));
    }
    config.validate()?;
    let ratios: Vec<(Rational, Rational)> = config
        .grid()
        .into_iter()
        .map(|t| {
            let r = a_invariant_rational(&t)? / s_exact_rational(&t)?;
            Ok((t, r))
        })
        .collect::<Result<_>>()?;
    let min = ratios.iter().map(|(_, r)| r).min().cloned().expect("grid is nonempty");
    let argmin = ratios.iter().filter(|(_, r)| *r == min).map(|(t, _)| t.clone()).collect();
    let all_at_least_one = ratios.iter().all(|(_, r)| r >= &Rational::one());
    Ok(DeltaReport {
        min,
        argmin,
        all_at_least_one,
        note: "each A/S is an upper bound for the stability threshold of the plane".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    #[test]
    fn grid_endpoints() {
        let c = ScanConfig::exact(int(1), rat(13, 2), rat(1, 4));
        let g = c.grid();
        assert_eq!(g.len(), 23);
        assert_eq!(g.last().unwrap(), &rat(13, 2));
        let single = ScanConfig::exact(int(1), int(1), rat(1, 4));
        assert_eq!(single.grid(), vec![int(1)]);
        assert!(ScanConfig::exact(int(2), int(1), rat(1, 4)).validate().is_err());
        assert!(ScanConfig::exact(int(1), int(2), int(0)).validate().is_err());
    }

    #[test]
    fn exact_scan_pieces() {
        let r = scan_with(&ScanConfig::exact(int(1), rat(13, 2), rat(1, 4)), Execution::Serial).unwrap();
        assert_eq!(r.breakpoints_at(), vec![int(2), int(5)]);
        assert_eq!(r.slopes(), vec![int(1), rat(1, 2), rat(2, 5)]);
        assert!(r.concavity_violations.is_empty());
        assert!(r.rows.iter().all(|row| row.fg_scan == Some(row.fg_classify)));

        let r = scan_with(&ScanConfig::exact(int(1), int(2), rat(1, 4)), Execution::Serial).unwrap();
        assert_eq!(r.pieces.len(), 1);
        assert!(r.breakpoints.is_empty() && r.concavity_violations.is_empty());
    }

    #[test]
    fn sample_scan_concave() {
        let r = scan_with(&ScanConfig::sample(int(1), int(2), rat(1, 2), 1), Execution::Serial).unwrap();
        assert_eq!(r.rows.len(), 3);
        assert!(r.concavity_violations.is_empty());
        assert!(!r.rows[1].second_difference.as_ref().unwrap().is_positive());
    }

    #[test]
    fn delta_examples() {
        let d = delta_upper_bound(&ScanConfig::exact(rat(1, 2), rat(13, 2), rat(1, 4))).unwrap();
        assert_eq!(d.min, int(1));
        assert_eq!(d.argmin, (0..=6).map(|k| rat(2 + k, 4)).collect::<Vec<_>>());
        assert!(d.all_at_least_one);
        let d = delta_upper_bound(&ScanConfig::exact(int(7), int(10), int(1))).unwrap();
        assert_eq!(d.min, rat(192, 127));
        assert_eq!(d.argmin, vec![int(7)]);
        let d = delta_upper_bound(&ScanConfig::exact(int(1), int(1), int(1))).unwrap();
        assert_eq!(d.min, int(1));
    }

    #[test]
    fn serial_matches_parallel() {
        let c = ScanConfig::exact(rat(1, 3), int(9), rat(1, 6));
        let a = scan_with(&c, Execution::Serial).unwrap();
        let b = scan_with(&c, Execution::Parallel).unwrap();
        assert_eq!(to_csv(&a), to_csv(&b));
    }
}
