//! Randomized and exhaustive checks of the compression argument.
//!
//! A trial draws a random cross-t-intersecting pair, drives it to a
//! left-compressed fixpoint and checks that every member pair of the result
//! satisfies the prefix condition, i.e. lands in some Hirschorn product.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::dual_family;
use crate::par;
use crate::setfam::{
    compress_pair_with, condition_a, condition_b, hirschorn_cover, is_cross_t_intersecting, is_left_compressed,
    k_subsets, Family, InstanceParams, SetMask,
};

/// Deterministic per-trial generator: same `(seed, trial)`, same stream.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform valid `(n, a, b, t)` with `2 <= n <= max_n`.
pub fn random_params(rng: &mut impl Rng, max_n: u32) -> InstanceParams {
    let n = rng.gen_range(2..=max_n.max(2));
    let a = rng.gen_range(1..=n);
    let b = rng.gen_range(1..=n);
    let t = rng.gen_range(1..=a.min(b));
    InstanceParams::new(n, a, b, t).expect("drawn in range")
}

/// A random cross-t-intersecting pair with both families nonempty.
///
/// Seeds `F` with a few random a-sets, keeps a random part of their dual as
/// `G`, then grows `F` inside the dual of `G`.
pub fn random_cross_pair(rng: &mut impl Rng, params: InstanceParams) -> (Family, Family) {
    let InstanceParams { n, a, b, t } = params;
    let layer_a = k_subsets(n, a);
    loop {
        let seeds = rng.gen_range(1..=4usize.min(layer_a.len()));
        let f0: Vec<SetMask> = layer_a
            .choose_multiple(rng, seeds)
            .map(|&x| SetMask::new(n, x).unwrap())
            .collect();
        let f0 = Family::new(n, a, f0).unwrap();
        let dual = dual_family(&f0, b, t);
        if dual.is_empty() {
            continue;
        }
        let keep_g: f64 = rng.gen_range(0.2..=1.0);
        let mut g: Vec<SetMask> = dual.iter().copied().filter(|_| rng.gen_bool(keep_g)).collect();
        if g.is_empty() {
            g.push(*dual.members().choose(rng).unwrap());
        }
        let g = Family::new(n, b, g).unwrap();
        let room = dual_family(&g, a, t);
        let keep_f: f64 = rng.gen_range(0.2..=1.0);
        let f = room
            .iter()
            .copied()
            .filter(|x| f0.contains(x) || rng.gen_bool(keep_f));
        let f = Family::new(n, a, f).unwrap();
        return (f, g);
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TrialOutcome {
    pub steps: u64,
    pub sizes_preserved: bool,
    pub cross_preserved: bool,
    pub weight_decreasing: bool,
    pub left_compressed: bool,
    /// Every member pair of the result satisfies the prefix condition.
    pub condition_a_all: bool,
    /// Every member pair lands in the Hirschorn product its prefix names.
    pub hirschorn_cover_all: bool,
}

impl TrialOutcome {
    pub fn passed(&self) -> bool {
        self.sizes_preserved
            && self.cross_preserved
            && self.weight_decreasing
            && self.left_compressed
            && self.condition_a_all
            && self.hirschorn_cover_all
    }
}

/// Compress `(f, g)` and check every invariant along the way.
pub fn check_compression(f: &Family, g: &Family, t: u32) -> TrialOutcome {
    let (len_f, len_g) = (f.len(), g.len());
    let mut sizes_preserved = true;
    let mut cross_preserved = is_cross_t_intersecting(f, g, t);
    let mut weight_decreasing = true;
    let (mut last_f, mut last_g) = (f.weight(), g.weight());
    let out = compress_pair_with(f, g, false, |_, _, nf, ng| {
        sizes_preserved &= nf.len() == len_f && ng.len() == len_g;
        cross_preserved &= is_cross_t_intersecting(nf, ng, t);
        // Steps fire only when F moves, so F strictly drops and G never rises.
        weight_decreasing &= nf.weight() < last_f && ng.weight() <= last_g;
        (last_f, last_g) = (nf.weight(), ng.weight());
    });
    let mut condition_a_all = true;
    let mut hirschorn_cover_all = true;
    for x in out.f.iter() {
        for y in out.g.iter() {
            condition_a_all &= condition_a(x, y, t);
            hirschorn_cover_all &= match hirschorn_cover(x, y, t) {
                Some((s, u, v)) => u + v == s + t && x.prefix_count(s) >= u && y.prefix_count(s) >= v,
                None => false,
            };
        }
    }
    TrialOutcome {
        steps: out.steps,
        sizes_preserved,
        cross_preserved,
        weight_decreasing,
        left_compressed: is_left_compressed(&out.f),
        condition_a_all,
        hirschorn_cover_all,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CompressionSuite {
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    pub total_steps: u64,
    /// Indices of failing trials.
    pub failures: Vec<u64>,
}

/// Run `trials` seeded trials. With `fixed` the parameters are held fixed,
/// otherwise each trial draws its own with `n <= max_n`.
pub fn compression_suite(seed: u64, trials: u64, fixed: Option<InstanceParams>, max_n: u32) -> Result<CompressionSuite> {
    if let Some(p) = fixed {
        if p.n > 12 {
            return Err(Error::ResourceCap(format!("compression trials need n <= 12, got {}", p.n)));
        }
    }
    let indices: Vec<u64> = (0..trials).collect();
    let outcomes = par::map_collect(&indices, |&trial| {
        let mut rng = trial_rng(seed, trial);
        let params = fixed.unwrap_or_else(|| random_params(&mut rng, max_n));
        let (f, g) = random_cross_pair(&mut rng, params);
        check_compression(&f, &g, params.t)
    });
    let mut suite = CompressionSuite { trials, ..Default::default() };
    for (k, o) in outcomes.iter().enumerate() {
        suite.total_steps += o.steps;
        if o.passed() {
            suite.passed += 1;
        } else {
            suite.failed += 1;
            suite.failures.push(k as u64);
        }
    }
    Ok(suite)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EquivalenceScan {
    pub params: Vec<InstanceParams>,
    pub pairs_checked: u64,
    pub discrepancies: u64,
}

/// Compare the prefix condition with the complement-order condition on every
/// `(F, G) ∈ C([n], a) × C([n], b)`. Requires `n > a + b - t`.
pub fn condition_equivalence(params: InstanceParams) -> Result<(u64, u64)> {
    let InstanceParams { n, a, b, t } = params;
    if n + t <= a + b {
        return Err(Error::InvalidParams(format!("equivalence scan needs n > a + b - t, got {params}")));
    }
    let layer_b = k_subsets(n, b);
    let layer_a = k_subsets(n, a);
    let per_f = par::map_collect(&layer_a, |&x| {
        let x = SetMask::new(n, x).unwrap();
        let mut bad = 0u64;
        for &y in &layer_b {
            let y = SetMask::new(n, y).unwrap();
            if condition_a(&x, &y, t) != condition_b(&x, &y, t).expect("precondition checked") {
                bad += 1;
            }
        }
        bad
    });
    let pairs = (layer_a.len() * layer_b.len()) as u64;
    Ok((pairs, per_f.into_iter().sum()))
}

/// [`condition_equivalence`] over every valid `(a, b, t)` for this `n`.
pub fn condition_equivalence_all(n: u32) -> EquivalenceScan {
    let mut scan = EquivalenceScan::default();
    for a in 1..=n {
        for b in 1..=n {
            for t in 1..=a.min(b) {
                if n + t <= a + b {
                    continue;
                }
                let p = InstanceParams::new(n, a, b, t).unwrap();
                let (pairs, bad) = condition_equivalence(p).unwrap();
                scan.params.push(p);
                scan.pairs_checked += pairs;
                scan.discrepancies += bad;
            }
        }
    }
    scan
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_pairs_are_cross_intersecting() {
        for trial in 0..200 {
            let mut rng = trial_rng(11, trial);
            let p = random_params(&mut rng, 9);
            let (f, g) = random_cross_pair(&mut rng, p);
            assert!(!f.is_empty() && !g.is_empty());
            assert_eq!((f.member_size(), g.member_size()), (p.a, p.b));
            assert!(is_cross_t_intersecting(&f, &g, p.t), "{p}");
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let draw = |seed, trial| {
            let mut rng = trial_rng(seed, trial);
            let p = random_params(&mut rng, 10);
            (p, random_cross_pair(&mut rng, p))
        };
        assert_eq!(draw(7, 3), draw(7, 3));
        assert_ne!(draw(7, 3), draw(7, 4));
    }

    #[test]
    fn small_suite_passes() {
        let s = compression_suite(5, 100, None, 8).unwrap();
        assert_eq!(s.failed, 0, "{:?}", s.failures);
        let fixed = InstanceParams::new(8, 3, 3, 1).unwrap();
        let s = compression_suite(7, 50, Some(fixed), 8).unwrap();
        assert_eq!(s.passed, 50);
    }

    #[test]
    fn equivalence_small() {
        let (pairs, bad) = condition_equivalence(InstanceParams::new(6, 2, 2, 1).unwrap()).unwrap();
        assert_eq!((pairs, bad), (225, 0));
        assert!(condition_equivalence(InstanceParams::new(4, 2, 3, 1).unwrap()).is_err());
    }
}
