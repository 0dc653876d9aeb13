//! The exact-intersection maximum `M` and the analytic upper bounds on
//! `N_prod` built from it.
//!
//! `M = max C(s, u)·C(n - s, a - u)·C(s, v)·C(n - s, b - v)` over
//! `s, u, v ∈ [n]` with `u + v >= s + t`, and `M <= N_prod <= n³·M`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{binomial_u, log_of_count, shannon_h, BigCount, BinomialTable, LogValue};
use crate::par;
use crate::setfam::InstanceParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Normal,
    /// `a + b >= n + t`: the full layers are already cross-t-intersecting.
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub params: InstanceParams,
    #[serde(rename = "M")]
    pub m_value: BigCount,
    #[serde(rename = "M_argmax")]
    pub m_argmax: Vec<(u32, u32, u32)>,
    /// `n³·M`.
    pub sandwich_hi: BigCount,
    pub entropy_bound_ln: Option<LogValue>,
    pub concentration_bound_ln: Option<LogValue>,
    /// `ln C(n, a)·C(n, b)`.
    pub trivial_bound_ln: LogValue,
    pub regime: Regime,
    /// Known exactly in the trivial regime.
    pub exact_optimum: Option<BigCount>,
}

/// `M` and every `(s, u, v)` attaining it, lexicographic.
pub fn compute_m(params: InstanceParams) -> (BigCount, Vec<(u32, u32, u32)>) {
    let binom = BinomialTable::new(params.n);
    compute_m_with(params, &binom)
}

pub fn compute_m_with(params: InstanceParams, binom: &BinomialTable) -> (BigCount, Vec<(u32, u32, u32)>) {
    let InstanceParams { n, a, b, t } = params;
    let rows = par::map_range(1..n + 1, |s| {
        // Factor the sweep: the u-part and v-part are independent given s.
        let f_side: Vec<BigCount> = (0..=n)
            .map(|u| binom.get(s, u as i64) * binom.get(n - s, a as i64 - u as i64))
            .collect();
        let g_side: Vec<BigCount> = (0..=n)
            .map(|v| binom.get(s, v as i64) * binom.get(n - s, b as i64 - v as i64))
            .collect();
        let mut best = BigCount::zero();
        let mut arg = Vec::new();
        for u in 1..=n {
            let v_lo = (s + t).saturating_sub(u).max(1);
            for v in v_lo..=n {
                let val = &f_side[u as usize] * &g_side[v as usize];
                if arg.is_empty() || val > best {
                    best = val;
                    arg.clear();
                    arg.push((s, u, v));
                } else if val == best {
                    arg.push((s, u, v));
                }
            }
        }
        (best, arg)
    });
    let mut value = BigCount::zero();
    let mut argmax = Vec::new();
    for (best, arg) in rows {
        if arg.is_empty() {
            continue;
        }
        if argmax.is_empty() || best > value {
            value = best;
            argmax = arg;
        } else if best == value {
            argmax.extend(arg);
        }
    }
    (value, argmax)
}

fn require_normal(params: &InstanceParams, what: &str) -> Result<()> {
    if params.is_trivial() {
        return Err(Error::InvalidParams(format!(
            "{what} needs a + b < n + t; {params} is in the trivial regime where N_prod = C(n,a)·C(n,b)"
        )));
    }
    Ok(())
}

/// `ln(n³·exp{2h((a + b - 2t) / 2n)·n})`.
pub fn entropy_bound(params: InstanceParams) -> Result<LogValue> {
    require_normal(&params, "entropy bound")?;
    let InstanceParams { n, a, b, t } = params;
    let nf = n as f64;
    let x = (a + b - 2 * t) as f64 / (2.0 * nf);
    Ok(LogValue::from_ln(3.0 * nf.ln() + 2.0 * shannon_h(x)? * nf))
}

/// `(min{t, n - a - b + t}, min{a, n - a} + min{b, n - b})`; the concentration
/// bound's exponent is `-first² / (8·second)`.
pub fn concentration_exponent_parts(params: InstanceParams) -> Result<(u32, u32)> {
    require_normal(&params, "concentration bound")?;
    let InstanceParams { n, a, b, t } = params;
    let margin = t.min(n + t - a - b);
    let spread = a.min(n - a) + b.min(n - b);
    Ok((margin, spread))
}

/// `ln(8n⁴·exp{-margin² / (8·spread)}·C(n, a)·C(n, b))`.
pub fn concentration_bound(params: InstanceParams) -> Result<LogValue> {
    let (margin, spread) = concentration_exponent_parts(params)?;
    let InstanceParams { n, a, b, .. } = params;
    let layers = binomial_u(n, a as i64) * binomial_u(n, b as i64);
    let nf = n as f64;
    let exponent = -((margin as f64).powi(2)) / (8.0 * spread as f64);
    let ln_layers = log_of_count(&layers).ln().expect("nonempty layers");
    Ok(LogValue::from_ln(8f64.ln() + 4.0 * nf.ln() + exponent + ln_layers))
}

/// `M <= exact <= n³·M`, exactly.
pub fn sandwich_check(params: InstanceParams, exact: &BigCount) -> bool {
    let (m, _) = compute_m(params);
    let hi = &m * &BigCount::from((params.n as u64).pow(3));
    &m <= exact && exact <= &hi
}

pub fn bounds_report(params: InstanceParams) -> BoundsReport {
    let InstanceParams { n, a, b, .. } = params;
    let binom = BinomialTable::new(n);
    let (m_value, m_argmax) = compute_m_with(params, &binom);
    let sandwich_hi = &m_value * &BigCount::from((n as u64).pow(3));
    let layers = binom.get(n, a as i64) * binom.get(n, b as i64);
    let trivial_bound_ln = log_of_count(&layers);
    let (regime, entropy, concentration, exact) = if params.is_trivial() {
        (Regime::Trivial, None, None, Some(layers))
    } else {
        (Regime::Normal, entropy_bound(params).ok(), concentration_bound(params).ok(), None)
    };
    BoundsReport {
        params,
        m_value,
        m_argmax,
        sandwich_hi,
        entropy_bound_ln: entropy,
        concentration_bound_ln: concentration,
        trivial_bound_ln,
        regime,
        exact_optimum: exact,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfam::{is_cross_t_intersecting, Family};

    fn params(n: u32, a: u32, b: u32, t: u32) -> InstanceParams {
        InstanceParams::new(n, a, b, t).unwrap()
    }

    // Plain triple loop with the multiplicative binomial, no factoring.
    fn m_oracle(p: InstanceParams) -> (BigCount, Vec<(u32, u32, u32)>) {
        use crate::exactmath::binomial_u;
        let InstanceParams { n, a, b, t } = p;
        let mut best = BigCount::zero();
        let mut arg: Vec<(u32, u32, u32)> = Vec::new();
        for s in 1..=n {
            for u in 1..=n {
                for v in 1..=n {
                    if u + v < s + t {
                        continue;
                    }
                    let val = binomial_u(s, u as i64)
                        * binomial_u(n - s, a as i64 - u as i64)
                        * binomial_u(s, v as i64)
                        * binomial_u(n - s, b as i64 - v as i64);
                    if arg.is_empty() || val > best {
                        best = val;
                        arg = vec![(s, u, v)];
                    } else if val == best {
                        arg.push((s, u, v));
                    }
                }
            }
        }
        (best, arg)
    }

    #[test]
    fn m_examples() {
        assert_eq!(compute_m(params(4, 2, 3, 1)), (BigCount::from(24u64), vec![(4, 2, 3)]));
        // Independent triple sweep value.
        assert_eq!(compute_m(params(8, 2, 6, 1)), (BigCount::from(180u64), vec![(2, 1, 2), (6, 2, 5)]));
        assert_eq!(compute_m(params(6, 2, 2, 1)).0, BigCount::from(25u64));
    }

    #[test]
    fn m_matches_triple_loop() {
        for n in 1..=9 {
            for a in 1..=n {
                for b in 1..=n {
                    for t in 1..=a.min(b) {
                        let p = params(n, a, b, t);
                        assert_eq!(compute_m(p), m_oracle(p), "{p}");
                    }
                }
            }
        }
    }

    #[test]
    fn m_argmax_respects_constraint_and_lower_leg() {
        for n in 2..=10 {
            for a in 1..n {
                for b in a..n {
                    for t in 1..=a {
                        let p = params(n, a, b, t);
                        let (m, arg) = compute_m(p);
                        for &(s, u, v) in &arg {
                            assert!(u + v >= s + t);
                            let f = Family::filtered(n, a, |x| x.prefix_count(s) == u);
                            let g = Family::filtered(n, b, |y| y.prefix_count(s) == v);
                            assert!(is_cross_t_intersecting(&f, &g, t), "{p} ({s},{u},{v})");
                            assert_eq!(BigCount::from((f.len() * g.len()) as u64), m);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn entropy_bound_examples() {
        let v = entropy_bound(params(8, 2, 6, 1)).unwrap().ln().unwrap();
        // 3 ln 8 + 16 h(3/8) at 50 digits.
        assert!((v - 16.823336435567220742).abs() < 1e-12);
        assert!(v >= 196f64.ln());
        let v = entropy_bound(params(9, 3, 3, 3)).unwrap().ln().unwrap();
        assert!((v - 3.0 * 9f64.ln()).abs() < 1e-12);
        assert!(entropy_bound(params(4, 2, 3, 1)).is_err());
    }

    #[test]
    fn concentration_bound_examples() {
        let p = params(8, 2, 6, 1);
        assert_eq!(concentration_exponent_parts(p).unwrap(), (1, 4));
        let v = concentration_bound(p).unwrap().ln().unwrap();
        // ln 8 + 4 ln 8 - 1/32 + 2 ln 28 at 50 digits.
        assert!((v - 17.030366728749587489).abs() < 1e-12);
        assert!(concentration_bound(params(4, 2, 3, 1)).is_err());
        // a + b = n + t - 1 makes n - a - b + t = 1 the binding margin.
        assert_eq!(concentration_exponent_parts(params(10, 6, 5, 2)).unwrap().0, 1);
    }

    #[test]
    fn complement_keeps_exponent() {
        use crate::oracle::complement_transfer;
        for n in 2..=14 {
            for a in 1..n {
                for b in 1..n {
                    for t in 1..=a.min(b) {
                        let p = params(n, a, b, t);
                        if p.is_trivial() {
                            continue;
                        }
                        let c = complement_transfer(p).unwrap();
                        assert_eq!(concentration_exponent_parts(p).unwrap(), concentration_exponent_parts(c).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn sandwich_examples() {
        assert!(sandwich_check(params(4, 2, 3, 1), &BigCount::from(24u64)));
        assert!(sandwich_check(params(6, 2, 2, 1), &BigCount::from(25u64)));
        assert!(!sandwich_check(params(6, 2, 2, 1), &BigCount::from(24u64 * 216 * 25)));
    }

    #[test]
    fn report_regimes() {
        let r = bounds_report(params(4, 2, 3, 1));
        assert_eq!(r.regime, Regime::Trivial);
        assert_eq!(r.exact_optimum, Some(BigCount::from(24u64)));
        assert!(r.entropy_bound_ln.is_none() && r.concentration_bound_ln.is_none());
        let r = bounds_report(params(8, 2, 6, 1));
        assert_eq!(r.regime, Regime::Normal);
        assert_eq!(r.sandwich_hi, BigCount::from(180u64 * 512));
        assert!(r.entropy_bound_ln.is_some() && r.concentration_bound_ln.is_some());
    }
}
