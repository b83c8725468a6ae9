//! Self-contained checks of the quantitative claims the library implements,
//! run by `nodal-kstab verify-all`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{int, rat, QuadRational, Rational};
use crate::local_model::{colength, monomial_basis, Form, MonomialValuation, NodalCubicModel};
use crate::nodal_catalog::{
    classify, construct_dn, d, invariants, piece_formula, s_exact, s_exact_rational, tail_formula, tau,
    Breakpoints, DSequence,
};
use crate::par::{self, Execution};
use crate::scan::{cached_scan, delta_upper_bound, scan_with, to_csv, ScanConfig};
use crate::section_ring::{
    dim_space, initial_basis_in_order, joint_compatible_basis, s_m, s_m_valuation, t_m, Filtration,
};

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {} ({} ms): {}", self.id, self.title, self.millis, self.detail)
    }
}

type Check = fn(Execution) -> Result<String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Verification(msg()))
    }
}

const CHECKS: [(u32, &str, Check); 11] = [
    (1, "d-sequence identities, n <= 20", check_sequence),
    (2, "colength at the D_n weights", check_colength),
    (3, "S_m(v_(1,1)) = 2 for m = 1..6", check_point_flag),
    (4, "S_m(line) = 1 for m = 1..6", check_line),
    (5, "D_n construction, n = 1..3", check_curves),
    (6, "Fujita pipeline reproduces S", check_fujita),
    (7, "piecewise continuity and breakpoint recovery", check_pieces),
    (8, "classifier table", check_classifier),
    (9, "property suites", check_properties),
    (10, "delta upper bound scan", check_delta),
    (11, "determinism and cache", check_determinism),
];

pub fn criteria() -> Vec<(u32, &'static str)> {
    CHECKS.iter().map(|(i, t, _)| (*i, *t)).collect()
}

/// Run every check, or only those whose ids are listed.
pub fn run(only: &[u32], exec: Execution) -> Vec<Outcome> {
    CHECKS
        .iter()
        .filter(|(id, _, _)| only.is_empty() || only.contains(id))
        .map(|(id, title, check)| {
            let start = Instant::now();
            let res = check(exec);
            let millis = start.elapsed().as_millis();
            let (passed, detail) = match res {
                Ok(d) => (true, d),
                Err(e) => (false, e.to_string()),
            };
            Outcome { id: *id, title, passed, detail, millis }
        })
        .collect()
}

fn check_sequence(_: Execution) -> Result<String> {
    let s = DSequence::new(21)?;
    let v = s.values();
    let three = BigInt::from(3);
    // F_(-1) = 1, F_0 = 0, F_1 = 1, ...
    let mut fib = vec![BigInt::one(), BigInt::zero()];
    while fib.len() < 44 {
        let k = fib.len();
        fib.push(&fib[k - 1] + &fib[k - 2]);
    }
    for n in 0..=20 {
        ensure(v[n] == fib[2 * n], || format!("d_{n} != F_(2n-1)"))?;
        ensure(&v[n] % &three != BigInt::zero(), || format!("3 | d_{n}"))?;
        ensure(
            BigInt::one() + &v[n] * &v[n] + &v[n + 1] * &v[n + 1] == &three * &v[n] * &v[n + 1],
            || format!("Markov at {n}"),
        )?;
        if n >= 1 {
            ensure(&v[n] * &v[n] + BigInt::one() == &v[n - 1] * &v[n + 1], || format!("d_n^2+1 at {n}"))?;
            ensure(&three * &v[n] - &v[n - 1] == v[n + 1], || format!("recurrence at {n}"))?;
        }
    }
    Ok(format!("d_20 = {}", v[20]))
}

fn check_colength(_: Execution) -> Result<String> {
    let mut parts = Vec::new();
    for n in 1..=5 {
        let (a, b, dn) = (d(n - 1), d(n + 1), d(n));
        let p = a * b;
        let mut brute = 0u64;
        for i in 0..=p {
            for j in 0..=p {
                if a * i + b * j < p {
                    brute += 1;
                }
            }
        }
        let v = MonomialValuation::new(a, b)?;
        ensure(brute == (dn * dn + 3 * dn) / 2, || format!("n={n}: {brute} lattice points"))?;
        ensure(colength(&v, p) == brute, || format!("n={n}: row formula disagrees"))?;
        parts.push(brute.to_string());
    }
    Ok(format!("colengths {}", parts.join(", ")))
}

fn check_point_flag(_: Execution) -> Result<String> {
    let model = NodalCubicModel::shared();
    let v = MonomialValuation::new(1, 1)?;
    let start = Instant::now();
    for m in 1..=6u32 {
        let n = dim_space(m);
        // multiplicity >= λ at a smooth point costs λ(λ+1)/2 conditions
        let flag_sum: u64 = (1..=3 * u64::from(m)).map(|l| n - l * (l + 1) / 2).sum();
        let oracle = Rational::new(flag_sum.into(), (u64::from(m) * n).into());
        let s = s_m_valuation(model, &v, m)?;
        ensure(s == oracle && s == int(2), || format!("m={m}: S_m = {s}, oracle {oracle}"))?;
    }
    ensure(s_exact_rational(&int(1))? == int(2), || "S(1) != 2".into())?;
    let el = start.elapsed();
    ensure(el < Duration::from_secs(30), || format!("took {el:?}"))?;
    Ok(format!("all equal 2 in {el:.2?}"))
}

fn check_line(_: Execution) -> Result<String> {
    let model = NodalCubicModel::shared();
    for m in 1..=6u32 {
        let tele: u64 = (0..3 * u64::from(m)).map(|k| (k + 1) * (k + 2) / 2).sum();
        let oracle = Rational::new(tele.into(), (u64::from(m) * dim_space(m)).into());
        let s = s_m(model, &Filtration::line(), m)?;
        ensure(s == oracle && s == int(1), || format!("m={m}: {s}"))?;
    }
    // S(ord_H) = 1/(dim+1) in units of -K, and H = (1/3)(-K)
    ensure(rat(1, 3) / rat(1, 3) == int(1), || unreachable!())?;
    Ok("all equal 1".into())
}

fn check_curves(_: Execution) -> Result<String> {
    let model = NodalCubicModel::shared();
    let mut degs = Vec::new();
    for n in 1..=3 {
        let c = construct_dn(model, n)?;
        let (a, b) = (d(n - 1) as u32, d(n + 1) as u32);
        ensure(c.solution_dim == 1, || format!("D_{n}: solution space {}", c.solution_dim))?;
        ensure(model.vweight(&c.valuation, &c.form)?.ord == u64::from(a * b), || format!("D_{n}: ord"))?;
        ensure(c.newton == [(b, 0), (0, a)], || format!("D_{n}: polygon {:?}", c.newton))?;
        degs.push(c.degree());
    }
    ensure(degs == [1, 2, 5], || format!("degrees {degs:?}"))?;
    Ok("degrees 1, 2, 5".into())
}

fn check_fujita(_: Execution) -> Result<String> {
    let model = NodalCubicModel::shared();
    for (a, b) in [(1, 1), (1, 2), (1, 7), (1, 8), (2, 15)] {
        let r = invariants(model, a, b)?;
        let t = rat(b as i64, a as i64);
        let ab9 = Rational::from_integer((9 * a * b).into());
        let aa = Rational::from_integer(a.into());
        // normalized: (aT)(aε) = 9ab, S = (T + ε)/3
        ensure(&r.t_inv * &aa * &r.epsilon * &aa == ab9, || format!("({a},{b}): Tε"))?;
        ensure(&r.s * int(3) == &r.t_inv + &r.epsilon, || format!("({a},{b}): S"))?;
        ensure(r.s == s_exact_rational(&t)?, || format!("({a},{b}): S = {} vs {}", r.s, s_exact_rational(&t).unwrap()))?;
    }
    ensure(invariants(model, 1, 7)?.s == rat(127, 24), || "S(7)".into())?;
    Ok("S(7) = 127/24".into())
}

fn check_pieces(exec: Execution) -> Result<String> {
    let bp = Breakpoints::new(8)?;
    for n in 1..=6 {
        let t = QuadRational::from(bp.t(n));
        ensure(piece_formula(n - 1, &t) == piece_formula(n, &t), || format!("jump at t_{n}"))?;
    }
    let r = scan_with(&ScanConfig::exact(int(1), rat(13, 2), rat(1, 20)), exec)?;
    ensure(r.breakpoints_at() == [int(2), int(5)] && r.breakpoints.len() == 2, || {
        format!("breakpoints {:?}", r.breakpoints)
    })?;
    ensure(r.slopes() == [int(1), rat(1, 2), rat(2, 5)], || format!("slopes {:?}", r.slopes()))?;
    ensure(tail_formula(&tau()) == QuadRational::new(int(3), int(1)), || "tail(τ)".into())?;
    ensure(s_exact(&tau())? == QuadRational::new(int(3), int(1)), || "S(τ)".into())?;
    Ok("breakpoints {2, 5}, slopes {1, 1/2, 2/5}, S(τ) = 3+√5".into())
}

fn check_classifier(_: Execution) -> Result<String> {
    let q = |p: Rational, s: i64| QuadRational::new(p, int(s));
    let table: Vec<(QuadRational, bool, bool, Option<&str>)> = vec![
        (q(int(1), 0), true, true, Some("P(1,1,1)")),
        (q(int(3), 0), true, true, Some("P(1,1,4)")),
        (q(int(5), 0), true, true, Some("x0*x3 = x1^5 + x2 in P(1,1,5,4)")),
        (q(rat(22, 3), 0), true, false, None),
        (q(int(7), 0), true, false, None),
        (q(int(4), 1), true, true, Some("P(1,4,25)")),
        (q(int(7), 1), false, false, None),
        (tau(), false, false, None),
    ];
    for (t, fg, fano, deg) in &table {
        let v = classify(t)?;
        ensure(v.fg == *fg && v.fano == *fano, || format!("t = {t}: fg {} fano {}", v.fg, v.fano))?;
        let got = v.degeneration.as_ref().map(|d| d.to_string());
        ensure(got.as_deref() == *deg, || format!("t = {t}: degeneration {got:?}"))?;
        ensure(!v.fano || v.fg, || format!("t = {t}: fano without fg"))?;
    }
    // below 1 through the reflection t -> 1/t
    let half = classify(&q(rat(1, 2), 0))?;
    let two = classify(&q(int(2), 0))?;
    ensure(half.fg && half.fano && half.degeneration == two.degeneration, || "t = 1/2 vs t = 2".into())?;
    Ok(format!("{} slopes", table.len() + 1))
}

fn random_form(rng: &mut StdRng, degree: u32) -> Form {
    loop {
        let mut terms = Vec::new();
        for e in monomial_basis(degree) {
            if rng.gen_bool(0.6) {
                terms.push((e, int(rng.gen_range(-3..=3))));
            }
        }
        let f = Form::from_terms(degree, terms);
        if !f.is_zero() {
            return f;
        }
    }
}

fn check_properties(exec: Execution) -> Result<String> {
    let model = NodalCubicModel::shared();
    let slope = |t: &Rational| MonomialValuation::from_slope(t);

    // finite-level concavity
    let pairs = [(int(1), int(2)), (int(2), int(5)), (rat(1, 2), int(3))];
    let us = [rat(1, 4), rat(1, 2), rat(3, 4)];
    let mut jobs: Vec<(Rational, u32)> = Vec::new();
    for m in 1..=4u32 {
        for (t0, t1) in &pairs {
            jobs.push((t0.clone(), m));
            jobs.push((t1.clone(), m));
            for u in &us {
                jobs.push(((int(1) - u) * t0 + u * t1, m));
            }
        }
    }
    jobs.sort();
    jobs.dedup();
    let vals = par::map(exec, &jobs, |(t, m)| s_m_valuation(model, &slope(t)?, *m));
    let mut sm: BTreeMap<(Rational, u32), Rational> = BTreeMap::new();
    for (k, v) in jobs.into_iter().zip(vals) {
        sm.insert(k, v?);
    }
    let mut triples = 0;
    for m in 1..=4u32 {
        for (t0, t1) in &pairs {
            for u in &us {
                let ts = (int(1) - u) * t0 + u * t1;
                let lhs = &sm[&(ts.clone(), m)];
                let rhs = (int(1) - u) * &sm[&(t0.clone(), m)] + u * &sm[&(t1.clone(), m)];
                ensure(lhs >= &rhs, || format!("concavity m={m} t={ts}: {lhs} < {rhs}"))?;
                triples += 1;
            }
        }
    }

    // valuation axioms on random pairs
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let weights = [(1, 1), (1, 2), (2, 1), (2, 3), (1, 5), (3, 7)];
    for k in 0..100 {
        let (a, b) = weights[k % weights.len()];
        let v = MonomialValuation::new(a, b)?;
        let (df, dg) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let f = random_form(&mut rng, df);
        let g = random_form(&mut rng, dg);
        let (vf, vg) = (model.vweight(&v, &f)?.ord, model.vweight(&v, &g)?.ord);
        let vfg = model.vweight(&v, &f.mul(&g))?.ord;
        ensure(vfg == vf + vg, || format!("pair {k}: v(fg) = {vfg} != {vf} + {vg}"))?;
        let h = random_form(&mut rng, df);
        let sum = f.add(&h);
        if !sum.is_zero() {
            let vh = model.vweight(&v, &h)?.ord;
            let vs = model.vweight(&v, &sum)?.ord;
            ensure(vs >= vf.min(vh), || format!("pair {k}: ultrametric"))?;
        }
    }

    // swap symmetry, including T_m
    for (a, b) in [(1u64, 2u64), (2, 3), (1, 3)] {
        for m in 1..=3 {
            let (v, w) = (MonomialValuation::new(a, b)?, MonomialValuation::new(b, a)?);
            let (ra, rb) = (int(a as i64), int(b as i64));
            ensure(&ra * s_m_valuation(model, &v, m)? == &rb * s_m_valuation(model, &w, m)?, || {
                format!("S swap ({a},{b}) m={m}")
            })?;
            ensure(&ra * t_m(model, &v, m)? == &rb * t_m(model, &w, m)?, || format!("T swap ({a},{b}) m={m}"))?;
        }
    }

    // T_m never exceeds the exact T
    for (a, b) in [(1u64, 1u64), (2, 3), (1, 2), (1, 3), (1, 7)] {
        let exact = invariants(model, a, b)?.t_inv;
        for m in 1..=3 {
            let tm = t_m(model, &MonomialValuation::new(a, b)?, m)?;
            ensure(tm <= exact, || format!("T_{m}({a},{b}) = {tm} > {exact}"))?;
        }
    }

    // independence of the compatible basis
    let mut rng = StdRng::seed_from_u64(11);
    for (a, b, m) in [(1u64, 1u64, 3u32), (2, 3, 2), (1, 2, 2), (3, 1, 2)] {
        let v = MonomialValuation::new(a, b)?;
        let reference = s_m_valuation(model, &v, m)?;
        let norm = Rational::from_integer((u64::from(m) * dim_space(m)).into());
        for _ in 0..5 {
            let mut order: Vec<usize> = (0..dim_space(m) as usize).collect();
            order.shuffle(&mut rng);
            let basis = initial_basis_in_order(model, &v, m, &order)?;
            ensure(basis.value_sum() / &norm == reference, || format!("order dependence at ({a},{b}) m={m}"))?;
        }
    }

    // joint compatible bases
    let joint = [
        (Filtration::Valuation(MonomialValuation::new(1, 1)?), Filtration::line(), 1u32),
        (Filtration::Valuation(MonomialValuation::new(1, 1)?), Filtration::line(), 2),
        (
            Filtration::Valuation(MonomialValuation::new(1, 2)?),
            Filtration::Valuation(MonomialValuation::new(2, 1)?),
            1,
        ),
        (Filtration::Valuation(MonomialValuation::new(2, 3)?), Filtration::Divisor(Form::nodal_cubic()), 2),
    ];
    for (f, g, m) in &joint {
        let jb = joint_compatible_basis(model, f, g, *m)?;
        let norm = Rational::from_integer((u64::from(*m) * dim_space(*m)).into());
        let sf: Rational = jb.values_f.iter().sum::<Rational>() / &norm;
        let sg: Rational = jb.values_g.iter().sum::<Rational>() / &norm;
        ensure(sf == s_m(model, f, *m)? && sg == s_m(model, g, *m)?, || format!("joint sums at m={m}"))?;
        ensure(
            jb.for_first().is_compatible_with(&f.flag(model, *m)?)
                && jb.for_second().is_compatible_with(&g.flag(model, *m)?),
            || format!("joint rank check at m={m}"),
        )?;
    }
    Ok(format!("{triples} concavity triples, 100 random pairs, swap, T_m bound, 5 orders, joint bases"))
}

fn check_delta(_: Execution) -> Result<String> {
    let r = delta_upper_bound(&ScanConfig::exact(rat(1, 2), rat(13, 2), rat(1, 4)))?;
    let expect: Vec<Rational> = (2..=8).map(|k| rat(k, 4)).collect();
    ensure(r.min == int(1), || format!("min {}", r.min))?;
    ensure(r.argmin == expect, || format!("argmin {:?}", r.argmin))?;
    ensure(r.all_at_least_one, || "a ratio below 1".into())?;
    Ok("min A/S = 1 on [1/2, 2]".into())
}

fn check_determinism(exec: Execution) -> Result<String> {
    let config = ScanConfig::exact(rat(1, 2), int(8), rat(1, 8));
    let serial = to_csv(&scan_with(&config, Execution::Serial)?);
    let parallel = to_csv(&scan_with(&config, exec)?);
    ensure(serial == parallel, || "serial and parallel CSV differ".into())?;
    let sample = ScanConfig::sample(int(1), int(3), rat(1, 2), 2);
    ensure(
        to_csv(&scan_with(&sample, Execution::Serial)?) == to_csv(&scan_with(&sample, exec)?),
        || "sample-mode CSV differs".into(),
    )?;
    let dir = scratch_dir();
    let first = to_csv(&cached_scan(&config, &dir, exec)?);
    let second = to_csv(&cached_scan(&config, &dir, exec)?);
    let _ = std::fs::remove_dir_all(&dir);
    ensure(first == second && first == serial, || "cached CSV differs".into())?;
    Ok(format!("{} bytes identical across runs", serial.len()))
}

fn scratch_dir() -> PathBuf {
    let nanos = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos())
        .unwrap_or(0);
    std::env::temp_dir().join(format!("nodal-kstab-verify-{}-{nanos}", std::process::id()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_checks_pass() {
        for o in run(&[1, 2, 4, 7, 8, 10], Execution::default()) {
            assert!(o.passed, "{o}");
        }
    }
}
