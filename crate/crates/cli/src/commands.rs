use crossint::bounds::bounds_report;
use crossint::counterex::{akbk_explicit_check, akbk_report, prop4_scan, AKBK_EXPLICIT_MAX_K};
use crossint::hirschorn::{hirschorn_optimum, Functional};
use crossint::oracle::{oracle, OracleCaps, SearchMode};
use crossint::setfam::InstanceParams;
use crossint::verify::{compression_suite, condition_equivalence_all};
use crossint::{Error, Result};
use serde::Serialize;
use serde_json::json;

use crate::report::{row, to_value, Format, Report};

pub fn hirschorn(params: InstanceParams, functional: Functional) -> Report {
    let opt = hirschorn_optimum(params, functional);
    let mut r = Report::new("hirschorn", params, Format::Json);
    r.rows.push(row(json!({
        "n": params.n, "a": params.a, "b": params.b, "t": params.t,
        "functional": functional, "value": opt.value, "argmax": opt.argmax,
    })));
    r.stats = json!({ "argmax_count": opt.argmax.len() });
    r.result = to_value(&opt);
    r
}

pub fn oracle_cmd(params: InstanceParams, functional: Functional, mode: SearchMode, caps: &OracleCaps) -> Result<Report> {
    let res = oracle(params, functional, mode, caps)?;
    let mut r = Report::new("oracle", params, Format::Json);
    r.result = json!({
        "value": res.value,
        "functional": res.functional,
        "mode": res.mode,
        "degenerate": res.degenerate,
    });
    r.witnesses = Some(json!({ "F": res.witness_f.to_text(), "G": res.witness_g.to_text() }));
    r.stats = json!({
        "nodes_explored": res.nodes_explored,
        "families_evaluated": res.families_evaluated,
        "searched": res.searched,
        "caps": caps,
    });
    r.rows.push(row(json!({
        "n": params.n, "a": params.a, "b": params.b, "t": params.t,
        "functional": functional, "mode": mode, "value": res.value,
        "witness_f_size": res.witness_f.len(), "witness_g_size": res.witness_g.len(),
        "nodes_explored": res.nodes_explored, "families_evaluated": res.families_evaluated,
    })));
    Ok(r)
}

pub fn bounds(params: InstanceParams) -> Report {
    let rep = bounds_report(params);
    let mut r = Report::new("bounds", params, Format::Json);
    r.stats = json!({ "argmax_count": rep.m_argmax.len() });
    r.rows.push(row(json!({
        "n": params.n, "a": params.a, "b": params.b, "t": params.t,
        "M": rep.m_value, "M_argmax": rep.m_argmax, "sandwich_hi": rep.sandwich_hi,
        "entropy_bound_ln": rep.entropy_bound_ln, "concentration_bound_ln": rep.concentration_bound_ln,
        "trivial_bound_ln": rep.trivial_bound_ln, "regime": rep.regime, "exact_optimum": rep.exact_optimum,
    })));
    r.result = to_value(&rep);
    r
}

pub fn scan_prop4(max_n: u32) -> Result<Report> {
    let mut r = Report::new("scan-prop4", json!({ "max_n": max_n }), Format::Csv);
    let mut rows = Vec::new();
    for n in (8..=max_n).step_by(12) {
        let rep = prop4_scan(n)?;
        if !rep.quadratic_roots.is_empty() {
            r.failures.push(format!("n={n}: integer roots {:?}", rep.quadratic_roots));
        }
        if !rep.mod3_certificate {
            r.failures.push(format!("n={n}: mod-3 certificate missing"));
        }
        if !rep.split_beats_hirschorn {
            r.failures.push(format!("n={n}: N̂={} is not below the split product {}", rep.hirschorn_max, rep.split_product));
        }
        if !rep.pairing_bound_holds {
            r.failures.push(format!("n={n}: a Hirschorn pair exceeds |F| + |G| <= C(n,2)"));
        }
        rows.push(rep);
    }
    r.rows = rows.iter().map(row).collect();
    r.stats = json!({ "rows": rows.len(), "failures": r.failures.len() });
    r.result = to_value(&rows);
    Ok(r)
}

#[derive(Serialize)]
struct AkBkRow {
    #[serde(flatten)]
    report: crossint::counterex::AkBkReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    explicit_sizes_match: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    explicit_cross_2: Option<bool>,
}

pub fn scan_akbk(kmin: u32, kmax: u32, verify_explicit: bool) -> Result<Report> {
    if kmin < 3 {
        return Err(Error::Usage(format!("--kmin must be at least 3, got {kmin}")));
    }
    if verify_explicit && kmax > AKBK_EXPLICIT_MAX_K {
        return Err(Error::ResourceCap(format!(
            "--verify-explicit lists the families and needs --kmax <= {AKBK_EXPLICIT_MAX_K}"
        )));
    }
    let mut r = Report::new("scan-akbk", json!({ "kmin": kmin, "kmax": kmax, "verify_explicit": verify_explicit }), Format::Csv);
    let ks: Vec<u32> = (kmin..=kmax).collect();
    let reports = crossint::par::map_collect(&ks, |&k| akbk_report(k));
    let mut rows = Vec::new();
    for rep in reports {
        let rep = rep?;
        let k = rep.k;
        if rep.in_checked_range {
            if !rep.product_exceeds {
                r.failures.push(format!("k={k}: |A|·|B|={} does not exceed N̂={}", rep.product, rep.hirschorn_max));
            }
            if !rep.expected_argmax_present {
                r.failures.push(format!(
                    "k={k}: ({}, {}, {}) not among the maximizers {:?}",
                    2 * k,
                    k + 1,
                    k + 1,
                    rep.hirschorn_argmax
                ));
            }
        }
        let (mut sizes, mut cross) = (None, None);
        if verify_explicit {
            let e = akbk_explicit_check(k)?;
            if !(e.sizes_match && e.cross_2_intersecting) {
                r.failures.push(format!("k={k}: explicit check failed ({e:?})"));
            }
            sizes = Some(e.sizes_match);
            cross = Some(e.cross_2_intersecting);
        }
        rows.push(AkBkRow { report: rep, explicit_sizes_match: sizes, explicit_cross_2: cross });
    }
    r.rows = rows.iter().map(row).collect();
    r.stats = json!({ "rows": rows.len(), "failures": r.failures.len() });
    r.result = to_value(&rows);
    Ok(r)
}

pub fn verify(params: InstanceParams, trials: u64, seed: u64) -> Result<Report> {
    if params.n > 12 {
        return Err(Error::ResourceCap(format!("verify needs n <= 12, got {}", params.n)));
    }
    let suite = compression_suite(seed, trials, Some(params), params.n)?;
    let scan = condition_equivalence_all(params.n);
    let mut r = Report::new("verify", json!({ "params": params, "trials": trials, "seed": seed }), Format::Json);
    if suite.failed > 0 {
        r.failures.push(format!("compression trials failed: {:?}", suite.failures));
    }
    if scan.discrepancies > 0 {
        r.failures.push(format!("prefix and complement-order conditions disagree on {} pairs", scan.discrepancies));
    }
    r.result = json!({
        "compression": {
            "trials": suite.trials, "passed": suite.passed, "failed": suite.failed,
            "failing_trials": suite.failures,
        },
        "equivalence": {
            "n": params.n, "parameter_sets": scan.params.len(),
            "pairs_checked": scan.pairs_checked, "discrepancies": scan.discrepancies,
        },
    });
    r.stats = json!({ "compression_steps": suite.total_steps });
    r.rows.push(row(json!({
        "n": params.n, "a": params.a, "b": params.b, "t": params.t, "seed": seed,
        "trials": suite.trials, "trials_passed": suite.passed, "trials_failed": suite.failed,
        "equivalence_pairs": scan.pairs_checked, "equivalence_discrepancies": scan.discrepancies,
    })));
    Ok(r)
}

/// Parse `CROSSINT_CAPS`, e.g. `exhaustive=30,compressed_n=13,nodes=1000000`.
pub fn caps_from_env(raw: Option<&str>) -> Result<OracleCaps> {
    let mut caps = OracleCaps::default();
    let Some(raw) = raw else { return Ok(caps) };
    for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, val) = item
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("CROSSINT_CAPS entry {item:?} is not key=value")))?;
        let num: u64 = val
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("CROSSINT_CAPS value {val:?} is not an integer")))?;
        match key.trim() {
            "exhaustive" => caps.max_exhaustive_layer = num,
            "compressed_n" => {
                caps.max_compressed_n = u32::try_from(num).map_err(|_| Error::Parse(format!("compressed_n={num}")))?
            }
            "nodes" => caps.max_nodes = Some(num),
            other => return Err(Error::Parse(format!("unknown CROSSINT_CAPS key {other:?}"))),
        }
    }
    Ok(caps)
}
