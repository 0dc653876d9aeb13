//! Hirschorn pairs and the best value a functional attains on them.
//!
//! A Hirschorn pair for `(n, a, b, t)` is
//! `F = {F ∈ C([n], a) : |F ∩ [s]| >= u}`, `G = {G ∈ C([n], b) : |G ∩ [s]| >= v}`
//! with `s, u, v ∈ [n]` and `u + v = s + t`. Such a pair is always
//! cross-t-intersecting.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{binomial_u, BigCount, BinomialTable};
use crate::par;
use crate::setfam::{Family, InstanceParams, MAX_GROUND};

/// Size-symmetric objective on a pair of families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Functional {
    Product,
    Sum,
}

impl Functional {
    pub fn eval(&self, f: &BigCount, g: &BigCount) -> BigCount {
        match self {
            Functional::Product => f * g,
            Functional::Sum => f + g,
        }
    }

    pub(crate) fn eval_u128(&self, f: u64, g: u64) -> u128 {
        match self {
            Functional::Product => f as u128 * g as u128,
            Functional::Sum => f as u128 + g as u128,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Functional::Product => "product",
            Functional::Sum => "sum",
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Functional {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product" | "prod" => Ok(Functional::Product),
            "sum" => Ok(Functional::Sum),
            _ => Err(Error::Parse(format!("unknown functional {s:?}"))),
        }
    }
}

/// `|{X ∈ C([n], m) : |X ∩ [s]| >= u}| = Σ_{i >= u} C(s, i)·C(n - s, m - i)`.
pub fn count_prefix_threshold(n: u32, m: u32, s: u32, u: u32) -> BigCount {
    debug_assert!(m <= n && s <= n);
    (u..=s.min(m))
        .map(|i| &binomial_u(s, i as i64) * &binomial_u(n - s, m as i64 - i as i64))
        .sum()
}

/// Prefix-threshold counts `T[s][u]` for one `(n, m)`, `s ∈ 1..=n`,
/// `u ∈ 0..=n + 1`.
#[derive(Clone, Debug)]
pub struct ThresholdTable {
    n: u32,
    m: u32,
    big: Vec<Vec<BigCount>>,
    // Same values when C(n, m) fits in 64 bits.
    small: Option<Vec<Vec<u64>>>,
}

impl ThresholdTable {
    pub fn new(n: u32, m: u32, binom: &BinomialTable) -> Self {
        assert!(binom.max_n() >= n && m <= n);
        let mut big = Vec::with_capacity(n as usize + 1);
        big.push(Vec::new());
        for s in 1..=n {
            let mut row = vec![BigCount::zero(); n as usize + 2];
            // Suffix sums over i = |X ∩ [s]|.
            for u in (0..=n).rev() {
                let term = if u <= s.min(m) {
                    binom.get(s, u as i64) * binom.get(n - s, m as i64 - u as i64)
                } else {
                    BigCount::zero()
                };
                row[u as usize] = &row[u as usize + 1] + &term;
            }
            big.push(row);
        }
        let small = binom.get(n, m as i64).to_u64().map(|_| {
            big.iter()
                .map(|row| row.iter().map(|c| c.to_u64().expect("bounded by C(n, m)")).collect())
                .collect()
        });
        ThresholdTable { n, m, big, small }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Count for threshold `u` on prefix `[s]`; zero once `u > min(s, m)`.
    pub fn get(&self, s: u32, u: u32) -> &BigCount {
        &self.big[s as usize][(u.min(self.n + 1)) as usize]
    }

    fn get_small(&self, s: u32, u: u32) -> Option<u64> {
        self.small.as_ref().map(|t| t[s as usize][(u.min(self.n + 1)) as usize])
    }
}

/// One Hirschorn pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HirschornPair {
    pub params: InstanceParams,
    pub s: u32,
    pub u: u32,
    pub v: u32,
}

impl HirschornPair {
    pub fn new(params: InstanceParams, s: u32, u: u32, v: u32) -> Result<Self> {
        let n = params.n;
        if !(1..=n).contains(&s) || !(1..=n).contains(&u) || !(1..=n).contains(&v) {
            return Err(Error::InvalidParams(format!("s, u, v must lie in [1, {n}], got ({s}, {u}, {v})")));
        }
        if u + v != s + params.t {
            return Err(Error::InvalidParams(format!(
                "Hirschorn pair needs u + v = s + t, got u={u} v={v} s={s} t={}",
                params.t
            )));
        }
        Ok(HirschornPair { params, s, u, v })
    }

    /// `(|F|, |G|)`.
    pub fn sizes(&self) -> (BigCount, BigCount) {
        let p = self.params;
        (
            count_prefix_threshold(p.n, p.a, self.s, self.u),
            count_prefix_threshold(p.n, p.b, self.s, self.v),
        )
    }

    /// The two families, listed explicitly.
    pub fn families(&self) -> Result<(Family, Family)> {
        let p = self.params;
        if p.n > MAX_GROUND {
            return Err(Error::ResourceCap(format!("explicit families need n <= {MAX_GROUND}")));
        }
        let (s, u, v) = (self.s, self.u, self.v);
        Ok((
            Family::filtered(p.n, p.a, |x| x.prefix_count(s) >= u),
            Family::filtered(p.n, p.b, |y| y.prefix_count(s) >= v),
        ))
    }
}

/// Shorthand for [`HirschornPair::sizes`].
pub fn pair_sizes(p: &HirschornPair) -> (BigCount, BigCount) {
    p.sizes()
}

/// Best value over all Hirschorn pairs, with every `(s, u, v)` attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HirschornOptimum {
    pub value: BigCount,
    pub argmax: Vec<(u32, u32, u32)>,
    pub functional: Functional,
}

/// Lazily built threshold tables for one ground-set size.
///
/// Share one of these across many `(a, b, t)` queries on the same `n`.
pub struct ThresholdCache {
    n: u32,
    binom: BinomialTable,
    tables: Vec<OnceLock<ThresholdTable>>,
}

impl ThresholdCache {
    pub fn new(n: u32) -> Self {
        ThresholdCache {
            n,
            binom: BinomialTable::new(n),
            tables: (0..=n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn binomials(&self) -> &BinomialTable {
        &self.binom
    }

    pub fn table(&self, m: u32) -> &ThresholdTable {
        self.tables[m as usize].get_or_init(|| ThresholdTable::new(self.n, m, &self.binom))
    }

    pub fn optimum(&self, params: InstanceParams, functional: Functional) -> HirschornOptimum {
        assert_eq!(params.n, self.n, "cache built for a different n");
        optimum_from_tables(params, functional, self.table(params.a), self.table(params.b))
    }
}

/// `max h(F, G)` over all Hirschorn pairs for `params`.
pub fn hirschorn_optimum(params: InstanceParams, functional: Functional) -> HirschornOptimum {
    let binom = BinomialTable::new(params.n);
    let ta = ThresholdTable::new(params.n, params.a, &binom);
    let tb = if params.b == params.a { ta.clone() } else { ThresholdTable::new(params.n, params.b, &binom) };
    optimum_from_tables(params, functional, &ta, &tb)
}

fn optimum_from_tables(
    params: InstanceParams,
    functional: Functional,
    ta: &ThresholdTable,
    tb: &ThresholdTable,
) -> HirschornOptimum {
    let InstanceParams { n, t, .. } = params;
    let small = ta.small.is_some() && tb.small.is_some();
    // Per-s partial results, merged in s order so argmax stays lexicographic.
    let rows: Vec<(BigCount, Vec<(u32, u32, u32)>)> = par::map_range(1..n + 1, |s| {
        let u_lo = (s + t).saturating_sub(n).max(1);
        let u_hi = (s + t - 1).min(n);
        if small {
            let mut best = 0u128;
            let mut arg = Vec::new();
            for u in u_lo..=u_hi {
                let v = s + t - u;
                let val = functional.eval_u128(ta.get_small(s, u).unwrap(), tb.get_small(s, v).unwrap());
                if arg.is_empty() || val > best {
                    best = val;
                    arg.clear();
                    arg.push((s, u, v));
                } else if val == best {
                    arg.push((s, u, v));
                }
            }
            (BigCount::from(best), arg)
        } else {
            let mut best = BigCount::zero();
            let mut arg = Vec::new();
            for u in u_lo..=u_hi {
                let v = s + t - u;
                let val = functional.eval(ta.get(s, u), tb.get(s, v));
                if arg.is_empty() || val > best {
                    best = val;
                    arg.clear();
                    arg.push((s, u, v));
                } else if val == best {
                    arg.push((s, u, v));
                }
            }
            (best, arg)
        }
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
    HirschornOptimum { value, argmax, functional }
}
