//! One test per acceptance criterion. Each prints a `PASS`/`FAIL` line.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use crossint::bounds::{concentration_bound, entropy_bound, sandwich_check};
use crossint::counterex::{akbk_explicit_check, akbk_report, mod3_certificate, quadratic_roots, AKBK_CHECKED_RANGE};
use crossint::exactmath::{binomial_u, log_of_count, shannon_h, BigCount, LogValue};
use crossint::hirschorn::{hirschorn_optimum, Functional, ThresholdCache};
use crossint::oracle::{oracle_compressed, oracle_exhaustive, OracleCaps};
use crossint::par;
use crossint::setfam::InstanceParams;
use crossint::verify::{compression_suite, condition_equivalence_all};

fn verdict(id: u32, ok: bool, detail: &str) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("{tag} criterion {id}: {detail}");
    assert!(ok, "criterion {id} failed: {detail}");
}

fn params(n: u32, a: u32, b: u32, t: u32) -> InstanceParams {
    InstanceParams::new(n, a, b, t).unwrap()
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let took = start.elapsed();
    (took < limit, format!("{:.2}s of {:.0}s", took.as_secs_f64(), limit.as_secs_f64()))
}

/// Instance solved in both modes under criterion 3.
struct Solved {
    params: InstanceParams,
    product: BigCount,
    sum: BigCount,
    /// Exhaustive and compressed modes disagree somewhere (either functional).
    mismatch: bool,
}

fn criterion3_grid() -> Vec<InstanceParams> {
    let mut grid = Vec::new();
    for n in 2..=6 {
        for a in 1..n {
            for b in a..n {
                for t in 1..=a {
                    grid.push(params(n, a, b, t));
                }
            }
        }
    }
    grid
}

fn solved() -> &'static (Vec<Solved>, Duration) {
    static SOLVED: OnceLock<(Vec<Solved>, Duration)> = OnceLock::new();
    SOLVED.get_or_init(|| {
        let start = Instant::now();
        let rows = criterion3_grid()
            .into_iter()
            .map(|p| {
                let ep = oracle_exhaustive(p, Functional::Product).unwrap();
                let cp = oracle_compressed(p, Functional::Product).unwrap();
                let es = oracle_exhaustive(p, Functional::Sum).unwrap();
                let cs = oracle_compressed(p, Functional::Sum).unwrap();
                Solved {
                    params: p,
                    mismatch: ep.value != cp.value || es.value != cs.value,
                    product: cp.value,
                    sum: cs.value,
                }
            })
            .collect();
        (rows, start.elapsed())
    })
}

#[test]
fn criterion_01_closed_form_regression() {
    let mut ok = true;
    let mut detail = Vec::new();
    for (p, want) in [(params(4, 2, 2, 1), 9u64), (params(6, 2, 2, 1), 25)] {
        let formula = binomial_u(p.n - 1, p.a as i64 - 1) * binomial_u(p.n - 1, p.b as i64 - 1);
        type Run = fn(InstanceParams, Functional) -> crossint::Result<crossint::OracleResult>;
        for (mode, run) in [("exhaustive", oracle_exhaustive as Run), ("compressed", oracle_compressed as Run)] {
            let start = Instant::now();
            let r = run(p, Functional::Product).unwrap();
            let (fast, took) = within(Duration::from_secs(10), start);
            let hit = r.value == BigCount::from(want) && r.value == formula;
            ok &= hit && fast;
            detail.push(format!("{p} {mode}={} ({took})", r.value));
        }
    }
    verdict(1, ok, &detail.join("; "));
}

#[test]
fn criterion_02_trivial_regime() {
    let caps = OracleCaps::default();
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 1..=7 {
        for a in 1..=n {
            for b in 1..=n {
                for t in 1..=a.min(b) {
                    let p = params(n, a, b, t);
                    if !p.is_trivial() {
                        continue;
                    }
                    let want = binomial_u(n, a as i64) * binomial_u(n, b as i64);
                    let compressed = oracle_compressed(p, Functional::Product).unwrap();
                    if compressed.value != want {
                        bad.push(format!("{p} compressed={}", compressed.value));
                    }
                    if (binomial_u(n, a as i64).to_u64().unwrap()) <= caps.max_exhaustive_layer {
                        let exhaustive = oracle_exhaustive(p, Functional::Product).unwrap();
                        if exhaustive.value != want {
                            bad.push(format!("{p} exhaustive={}", exhaustive.value));
                        }
                    }
                    checked += 1;
                }
            }
        }
    }
    verdict(2, bad.is_empty(), &format!("{checked} trivial instances, mismatches: {bad:?}"));
}

#[test]
fn criterion_03_mode_equivalence() {
    let (rows, took) = solved();
    let bad: Vec<String> = rows.iter().filter(|r| r.mismatch).map(|r| r.params.to_string()).collect();
    let fast = *took < Duration::from_secs(300);
    verdict(
        3,
        bad.is_empty() && fast,
        &format!("{} instances, both functionals, {:.2}s; mismatches: {bad:?}", rows.len(), took.as_secs_f64()),
    );
}

#[test]
fn criterion_04_split_beats_hirschorn() {
    let start = Instant::now();
    let p = params(8, 2, 6, 1);
    let hat = hirschorn_optimum(p, Functional::Product).value;
    let split = binomial_u(8, 2).checked_exact_div(&BigCount::from(2u64)).unwrap().pow(2);
    let exact = oracle_compressed(p, Functional::Product).unwrap().value;
    let desk = hat == BigCount::from(195u64) && split == BigCount::from(196u64) && hat < split && exact == split;
    let series: Vec<u32> = (8..=10_000).step_by(12).collect();
    let disagree: Vec<u32> = series
        .iter()
        .copied()
        .filter(|&n| !(quadratic_roots(n).is_empty() && mod3_certificate(n)))
        .collect();
    let (fast, took) = within(Duration::from_secs(60), start);
    verdict(
        4,
        desk && disagree.is_empty() && fast,
        &format!(
            "N̂(8,2,6,1)={hat}, split={split}, N(8,2,6,1)={exact}; {} series values, disagreements {disagree:?}; {took}",
            series.len()
        ),
    );
}

#[test]
fn criterion_05_akbk_reproduction() {
    let start = Instant::now();
    let ks: Vec<u32> = AKBK_CHECKED_RANGE.collect();
    let reports: Vec<_> = par::map_collect(&ks, |&k| akbk_report(k).unwrap());
    let no_gain: Vec<u32> = reports.iter().filter(|r| !r.product_exceeds).map(|r| r.k).collect();
    let argmax_missing: Vec<String> = reports
        .iter()
        .filter(|r| !r.expected_argmax_present)
        .map(|r| format!("k={} argmax={:?}", r.k, r.hirschorn_argmax))
        .collect();
    let (fast, took) = within(Duration::from_secs(120), start);

    let mut explicit = Vec::new();
    let mut explicit_ok = true;
    for k in [3u32, 4] {
        let e = akbk_explicit_check(k).unwrap();
        explicit_ok &= e.sizes_match && e.cross_2_intersecting;
        explicit.push(format!("k={k}: |A|={} |B|={} sizes match={} cross-2={}", e.listed_a, e.listed_b, e.sizes_match, e.cross_2_intersecting));
    }

    verdict(
        5,
        no_gain.is_empty() && argmax_missing.is_empty() && fast && explicit_ok,
        &format!(
            "k=3..50 product>N̂ failures {no_gain:?}; (2k,k+1,k+1) missing from argmax: {argmax_missing:?}; {took}; {}",
            explicit.join(", ")
        ),
    );
}

#[test]
fn criterion_06_compression_suite() {
    let suite = compression_suite(20_240_601, 1000, None, 10).unwrap();
    verdict(
        6,
        suite.trials == 1000 && suite.failed == 0,
        &format!("{} trials, {} passed, {} compression steps, failing trials {:?}", suite.trials, suite.passed, suite.total_steps, suite.failures),
    );
}

#[test]
fn criterion_07_prefix_condition_equivalence() {
    let start = Instant::now();
    let mut pairs = 0;
    let mut bad = 0;
    let mut instances = 0;
    for n in 1..=8 {
        let scan = condition_equivalence_all(n);
        pairs += scan.pairs_checked;
        bad += scan.discrepancies;
        instances += scan.params.len();
    }
    let (fast, took) = within(Duration::from_secs(300), start);
    verdict(7, bad == 0 && fast, &format!("{instances} parameter sets, {pairs} pairs, {bad} discrepancies, {took}"));
}

#[test]
fn criterion_08_m_sandwich() {
    let (rows, _) = solved();
    let bad: Vec<String> =
        rows.iter().filter(|r| !sandwich_check(r.params, &r.product)).map(|r| r.params.to_string()).collect();
    verdict(8, bad.is_empty(), &format!("{} instances, violations {bad:?}", rows.len()));
}

#[test]
fn criterion_09_analytic_bounds_dominate() {
    const TOL: f64 = 1e-9;
    let mut grid_checked = 0u64;
    let mut bad = Vec::new();
    for n in (10..=60).step_by(10) {
        let cache = ThresholdCache::new(n);
        let mut triples = Vec::new();
        for a in 1..=n {
            for b in 1..=n {
                for t in 1..=a.min(b) {
                    if a + b < n + t {
                        triples.push(params(n, a, b, t));
                    }
                }
            }
        }
        let failures: Vec<Vec<String>> = par::map_collect(&triples, |&p| {
            let hat = log_of_count(&cache.optimum(p, Functional::Product).value);
            check_bounds(p, &hat, TOL, "N̂")
        });
        grid_checked += triples.len() as u64;
        bad.extend(failures.into_iter().flatten());
    }
    let (rows, _) = solved();
    let mut tiny = 0;
    for r in rows.iter().filter(|r| !r.params.is_trivial()) {
        bad.extend(check_bounds(r.params, &log_of_count(&r.product), TOL, "N"));
        tiny += 1;
    }
    verdict(9, bad.is_empty(), &format!("{grid_checked} grid instances, {tiny} solved instances, failures {bad:?}"));
}

fn check_bounds(p: InstanceParams, target: &LogValue, tol: f64, what: &str) -> Vec<String> {
    let mut out = Vec::new();
    let e = entropy_bound(p).unwrap();
    let c = concentration_bound(p).unwrap();
    if !e.ge_with_tol(target, tol) {
        out.push(format!("{p}: entropy {:?} < ln {what} {:?}", e.ln(), target.ln()));
    }
    if !c.ge_with_tol(target, tol) {
        out.push(format!("{p}: concentration {:?} < ln {what} {:?}", c.ln(), target.ln()));
    }
    out
}

#[test]
fn criterion_10_hirschorn_sandwich() {
    let (rows, _) = solved();
    let mut bad = Vec::new();
    for r in rows {
        let p = r.params;
        let n2 = BigCount::from((p.n as u64).pow(2));
        for (f, exact) in [(Functional::Product, &r.product), (Functional::Sum, &r.sum)] {
            let hat = hirschorn_optimum(p, f).value;
            if !(&hat <= exact && exact <= &(&hat * &n2)) {
                bad.push(format!("{p} {f}: N̂={hat} N={exact}"));
            }
        }
    }
    verdict(10, bad.is_empty(), &format!("{} instances x 2 functionals, violations {bad:?}", rows.len()));
}

#[test]
fn criterion_11_shannon_suites() {
    let start = Instant::now();
    let h = |x: f64| shannon_h(x).unwrap();
    let mut bad = Vec::new();
    for n in 2..=60u32 {
        for k in 1..n {
            let ln_c = log_of_count(&binomial_u(n, k as i64));
            let hn = h(k as f64 / n as f64) * n as f64;
            let upper = LogValue::from_ln(hn);
            let lower = LogValue::from_ln(hn - 0.5 * (8.0 * n as f64).ln());
            if !upper.ge_with_tol(&ln_c, 1e-9) || !ln_c.ge_with_tol(&lower, 1e-9) {
                bad.push(format!("C({n},{k})"));
            }
        }
    }
    let grid: Vec<f64> = (0..=1000).map(|i| i as f64 / 1000.0).collect();
    let mut concavity = 0;
    for &x in &grid {
        for &y in &grid {
            if h((x + y) / 2.0) < (h(x) + h(y)) / 2.0 - 1e-12 {
                concavity += 1;
            }
        }
    }
    let symmetry = grid.iter().filter(|&&x| (h(x) - h(1.0 - x)).abs() > 1e-12).count();
    let (fast, took) = within(Duration::from_secs(10), start);
    verdict(
        11,
        bad.is_empty() && concavity == 0 && symmetry == 0 && fast,
        &format!("binomial sandwich failures {bad:?}, concavity failures {concavity}, symmetry failures {symmetry}, {took}"),
    );
}
