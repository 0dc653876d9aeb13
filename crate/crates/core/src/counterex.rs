//! Two families of instances where the best Hirschorn pair is not optimal.
//!
//! * `(n, 2, n - 2, 1)` with `n ≡ 8 (mod 12)`: a 2-set and an (n-2)-set meet
//!   unless they are complementary, so splitting `C([n], 2)` into two equal
//!   halves gives `(C(n, 2) / 2)^2`, while no Hirschorn pair is balanced.
//! * `A_k`, `B_k` on `n = 4k + 3` with `a = 2k + 1`, `b = 2k + 2`, `t = 2`,
//!   defined by thresholds on the two prefixes `[2k + 1]` and `[2k + 3]`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{binomial_u, BigCount};
use crate::hirschorn::{Functional, ThresholdCache};
use crate::par;
use crate::setfam::{Family, InstanceParams, MAX_GROUND};

/// Range of `k` for which the `A_k`/`B_k` claims are asserted.
pub const AKBK_CHECKED_RANGE: std::ops::RangeInclusive<u32> = 3..=50;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prop4Report {
    pub n: u32,
    /// `n ≡ 8 (mod 12)`.
    pub in_series: bool,
    pub binom_half: BigCount,
    pub split_product: BigCount,
    pub hirschorn_max: BigCount,
    pub hirschorn_argmax: Vec<(u32, u32, u32)>,
    /// Integer `s ∈ [n]` with `2s² - (4n - 2)s + n² - n = 0`.
    pub quadratic_roots: Vec<u32>,
    pub mod3_certificate: bool,
    /// Every Hirschorn pair has `|F| + |G| <= C(n, 2)`.
    pub pairing_bound_holds: bool,
    /// `hirschorn_max < split_product`.
    pub split_beats_hirschorn: bool,
}

/// Sizes of the two nontrivial Hirschorn shapes for `(n, 2, n - 2, 1)` at `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseSizes {
    /// `u = 1, v = s`: `|F| = s(n - s) + C(s, 2)`, `|G| = C(n - s, 2)`.
    pub case1: (BigCount, BigCount),
    /// `u = 2, v = s - 1`: `|F| = C(s, 2)`, `|G| = s(n - s) + C(n - s, 2)`.
    pub case2: (BigCount, BigCount),
}

pub fn case_sizes(n: u32, s: u32) -> CaseSizes {
    assert!(s <= n);
    let cross = BigCount::from(s as u64 * (n - s) as u64);
    let c_s = binomial_u(s, 2);
    let c_rest = binomial_u(n - s, 2);
    CaseSizes { case1: (&cross + &c_s, c_rest.clone()), case2: (c_s, &cross + &c_rest) }
}

/// Direct scan of `s ∈ [n]` for integer roots of `2s² - (4n - 2)s + n² - n`.
pub fn quadratic_roots(n: u32) -> Vec<u32> {
    let nn = n as i128;
    (1..=n)
        .filter(|&s| {
            let s = s as i128;
            2 * s * s - (4 * nn - 2) * s + nn * nn - nn == 0
        })
        .collect()
}

/// `n ≡ 2 (mod 3)`, under which the quadratic reduces to `s² ≡ 2 (mod 3)` and
/// has no integer root.
pub fn mod3_certificate(n: u32) -> bool {
    n % 3 == 2
}

pub fn prop4_scan(n: u32) -> Result<Prop4Report> {
    if n < 4 {
        return Err(Error::InvalidParams(format!("prop4 scan needs n >= 4, got {n}")));
    }
    let pairs = binomial_u(n, 2);
    let two = BigCount::from(2u64);
    let binom_half = pairs
        .checked_exact_div(&two)
        .ok_or_else(|| Error::InvalidParams(format!("C({n}, 2) = {pairs} is odd")))?;
    let split_product = &binom_half * &binom_half;

    let params = InstanceParams::new(n, 2, n - 2, 1)?;
    let cache = ThresholdCache::new(n);
    let opt = cache.optimum(params, Functional::Product);
    let (ta, tb) = (cache.table(2), cache.table(n - 2));
    let pairing_bound_holds = (1..=n).all(|s| {
        (1..=s).all(|u| {
            let v = s + 1 - u;
            &(ta.get(s, u) + tb.get(s, v)) <= &pairs
        })
    });

    Ok(Prop4Report {
        n,
        in_series: n % 12 == 8,
        binom_half,
        split_beats_hirschorn: opt.value < split_product,
        split_product,
        hirschorn_max: opt.value,
        hirschorn_argmax: opt.argmax,
        quadratic_roots: quadratic_roots(n),
        mod3_certificate: mod3_certificate(n),
        pairing_bound_holds,
    })
}

/// `Σ C(s1, i)·C(s2 - s1, j)·C(n - s2, m - i - j)` over `i = |X ∩ [s1]|`,
/// `j = |X ∩ (s1, s2]|` with `keep(i, i + j)`.
pub fn count_two_prefix(n: u32, m: u32, s1: u32, s2: u32, keep: impl Fn(u32, u32) -> bool) -> BigCount {
    assert!(1 <= s1 && s1 < s2 && s2 <= n && m <= n, "count_two_prefix: bad prefixes");
    let mut total = BigCount::zero();
    for i in 0..=s1.min(m) {
        for j in 0..=(s2 - s1).min(m - i) {
            if keep(i, i + j) {
                let term = &(&binomial_u(s1, i as i64) * &binomial_u(s2 - s1, j as i64))
                    * &binomial_u(n - s2, (m - i - j) as i64);
                total += &term;
            }
        }
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AkBkReport {
    pub k: u32,
    pub n: u32,
    pub a: u32,
    pub b: u32,
    pub size_a: BigCount,
    pub size_b: BigCount,
    pub product: BigCount,
    /// Best Hirschorn product for `(4k + 3, 2k + 1, 2k + 2, 2)`.
    pub hirschorn_max: BigCount,
    pub hirschorn_argmax: Vec<(u32, u32, u32)>,
    /// Same quantity with `b = 2k + 3`, kept for comparison.
    pub hirschorn_max_b_plus_one: BigCount,
    pub product_exceeds: bool,
    /// `(2k, k + 1, k + 1)` is among the maximizers.
    pub expected_argmax_present: bool,
    pub in_checked_range: bool,
}

#[inline]
fn a_member(k: u32) -> impl Fn(u32, u32) -> bool {
    move |i, ij| i >= k + 1 && ij >= k + 2
}

#[inline]
fn b_member(k: u32) -> impl Fn(u32, u32) -> bool {
    move |i, ij| i >= k + 2 || ij >= k + 3
}

pub fn akbk_report(k: u32) -> Result<AkBkReport> {
    if k < 3 {
        return Err(Error::InvalidParams(format!("A_k/B_k needs k >= 3, got {k}")));
    }
    let (n, a, b) = (4 * k + 3, 2 * k + 1, 2 * k + 2);
    let (s1, s2) = (2 * k + 1, 2 * k + 3);
    let size_a = count_two_prefix(n, a, s1, s2, a_member(k));
    let size_b = count_two_prefix(n, b, s1, s2, b_member(k));
    let product = &size_a * &size_b;

    let cache = ThresholdCache::new(n);
    let opt = cache.optimum(InstanceParams::new(n, a, b, 2)?, Functional::Product);
    let alt = cache.optimum(InstanceParams::new(n, a, b + 1, 2)?, Functional::Product);

    Ok(AkBkReport {
        k,
        n,
        a,
        b,
        product_exceeds: product > opt.value,
        expected_argmax_present: opt.argmax.contains(&(2 * k, k + 1, k + 1)),
        in_checked_range: AKBK_CHECKED_RANGE.contains(&k),
        size_a,
        size_b,
        product,
        hirschorn_max: opt.value,
        hirschorn_argmax: opt.argmax,
        hirschorn_max_b_plus_one: alt.value,
    })
}

/// `A_k` and `B_k` listed explicitly (needs `4k + 3 <= 32`).
pub fn akbk_families(k: u32) -> Result<(Family, Family)> {
    let n = 4 * k + 3;
    if k < 1 || n > MAX_GROUND {
        return Err(Error::ResourceCap(format!("explicit A_k/B_k needs 1 <= k and 4k + 3 <= {MAX_GROUND}")));
    }
    let (s1, s2) = (2 * k + 1, 2 * k + 3);
    let in_a = a_member(k);
    let in_b = b_member(k);
    Ok((
        Family::filtered(n, 2 * k + 1, |x| in_a(x.prefix_count(s1), x.prefix_count(s2))),
        Family::filtered(n, 2 * k + 2, |y| in_b(y.prefix_count(s1), y.prefix_count(s2))),
    ))
}

/// Largest `k` for which [`akbk_explicit_check`] runs (about 10⁹ pair tests).
pub const AKBK_EXPLICIT_MAX_K: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AkBkExplicit {
    pub k: u32,
    pub listed_a: u64,
    pub listed_b: u64,
    pub sizes_match: bool,
    pub cross_2_intersecting: bool,
}

/// List `A_k`, `B_k` explicitly, compare with the counted sizes, and check
/// every pair meets in at least 2 points.
pub fn akbk_explicit_check(k: u32) -> Result<AkBkExplicit> {
    if !(3..=AKBK_EXPLICIT_MAX_K).contains(&k) {
        return Err(Error::ResourceCap(format!(
            "explicit A_k/B_k check runs for 3 <= k <= {AKBK_EXPLICIT_MAX_K}, got {k}"
        )));
    }
    let report = akbk_report(k)?;
    let (fa, fb) = akbk_families(k)?;
    let bits_a: Vec<u32> = fa.iter().map(|x| x.bits()).collect();
    let bits_b: Vec<u32> = fb.iter().map(|y| y.bits()).collect();
    let violated = par::any(&bits_a, |&x| bits_b.iter().any(|&y| (x & y).count_ones() < 2));
    Ok(AkBkExplicit {
        k,
        listed_a: fa.len() as u64,
        listed_b: fb.len() as u64,
        sizes_match: BigCount::from(fa.len() as u64) == report.size_a
            && BigCount::from(fb.len() as u64) == report.size_b,
        cross_2_intersecting: !violated,
    })
}
