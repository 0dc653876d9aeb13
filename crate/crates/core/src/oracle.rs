//! Exact `N_h(n, a, b, t)` on small instances.
//!
//! Both modes search over the a-uniform family `F` only and pair it with its
//! dual, the largest b-uniform family cross-t-intersecting with `F`: any
//! partner of `F` is a subfamily of the dual, and both functionals are
//! monotone in `|G|`.
//!
//! * [`oracle_exhaustive`] walks every subfamily of `C([n], a)`.
//! * [`oracle_compressed`] walks only left-compressed families, i.e. the
//!   down-sets of the dominance order on `C([n], a)`, with branch-and-bound.
//!
//! The two share nothing beyond the witness tie-break, so they check each
//! other.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{binomial_u, BigCount};
use crate::hirschorn::{hirschorn_optimum, Functional};
use crate::par;
use crate::setfam::{k_subsets, prefix_count, weight_bits, Family, InstanceParams, SetMask};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Compressed,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(SearchMode::Exhaustive),
            "compressed" => Ok(SearchMode::Compressed),
            _ => Err(Error::Parse(format!("unknown search mode {s:?}"))),
        }
    }
}

/// Search-size limits. Exceeding one is an error, never a truncated answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCaps {
    /// Largest `C(n, a)` the exhaustive mode accepts (`2^C(n, a)` families).
    pub max_exhaustive_layer: u64,
    /// Largest ground set the compressed mode accepts.
    pub max_compressed_n: u32,
    /// Optional limit on search-tree nodes, either mode.
    pub max_nodes: Option<u64>,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps { max_exhaustive_layer: 24, max_compressed_n: 12, max_nodes: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub params: InstanceParams,
    pub functional: Functional,
    pub mode: SearchMode,
    pub value: BigCount,
    #[serde(skip)]
    pub witness_f: Family,
    #[serde(skip)]
    pub witness_g: Family,
    /// Instance actually searched after swap/complement canonicalization.
    pub searched: InstanceParams,
    pub nodes_explored: u64,
    pub families_evaluated: u64,
    /// Optimum realised only with an empty `F` (sum functional).
    pub degenerate: bool,
}

/// `{G ∈ C([n], b) : |F ∩ G| >= t for all F ∈ F}`.
pub fn dual_family(f: &Family, b: u32, t: u32) -> Family {
    let n = f.ground();
    let members = f.members();
    Family::filtered(n, b, |g| members.iter().all(|x| x.intersection_len(g) >= t))
}

/// `(n, a, b, t) ↦ (n, n - a, n - b, n - a - b + t)`; complementing every
/// member of both families maps one problem onto the other.
pub fn complement_transfer(params: InstanceParams) -> Result<InstanceParams> {
    let InstanceParams { n, a, b, t } = params;
    if n + t < a + b + 1 {
        return Err(Error::InvalidParams(format!(
            "complement needs n - a - b + t >= 1, got {params}"
        )));
    }
    InstanceParams::new(n, n - a, n - b, n + t - a - b)
}

/// Dominance order: `x <= y` iff the i-th smallest element of `x` is at most
/// the i-th smallest element of `y`, for every i. Sets must have equal size.
pub fn dominates(x: &SetMask, y: &SetMask) -> bool {
    debug_assert_eq!(x.len(), y.len());
    dominated_bits(x.bits(), y.bits(), x.ground())
}

#[inline]
fn dominated_bits(x: u32, y: u32, n: u32) -> bool {
    // Equivalent prefix form: |x ∩ [s]| >= |y ∩ [s]| for all s.
    (1..=n).all(|s| prefix_count(x, s) >= prefix_count(y, s))
}

/// Visit every left-compressed a-uniform family on `[n]` exactly once.
///
/// The callback sees members as raw bitmasks in a linear extension of the
/// dominance order.
pub fn for_each_left_compressed(n: u32, a: u32, mut visit: impl FnMut(&[u32])) {
    let poset = DominancePoset::new(n, a);
    let mut stack = Vec::new();
    let forbidden = vec![0u64; poset.words];
    enumerate_ideals(&poset, 0, &forbidden, &mut stack, &mut visit);
}

fn enumerate_ideals(
    poset: &DominancePoset,
    mut pos: usize,
    forbidden: &[u64],
    stack: &mut Vec<u32>,
    visit: &mut impl FnMut(&[u32]),
) {
    while pos < poset.elems.len() && test_bit(forbidden, pos) {
        pos += 1;
    }
    if pos == poset.elems.len() {
        visit(stack);
        return;
    }
    stack.push(poset.elems[pos]);
    enumerate_ideals(poset, pos + 1, forbidden, stack, visit);
    stack.pop();
    let next = or_words(forbidden, &poset.up[pos]);
    enumerate_ideals(poset, pos + 1, &next, stack, visit);
}

pub fn oracle_exhaustive(params: InstanceParams, functional: Functional) -> Result<OracleResult> {
    oracle_exhaustive_with(params, functional, &OracleCaps::default())
}

pub fn oracle_compressed(params: InstanceParams, functional: Functional) -> Result<OracleResult> {
    oracle_compressed_with(params, functional, &OracleCaps::default())
}

/// Dispatch on `mode`.
pub fn oracle(
    params: InstanceParams,
    functional: Functional,
    mode: SearchMode,
    caps: &OracleCaps,
) -> Result<OracleResult> {
    match mode {
        SearchMode::Exhaustive => oracle_exhaustive_with(params, functional, caps),
        SearchMode::Compressed => oracle_compressed_with(params, functional, caps),
    }
}

// ---------------------------------------------------------------------------
// bitset helpers

#[inline]
fn test_bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
fn set_bit(words: &mut [u64], i: usize) {
    words[i / 64] |= 1 << (i % 64);
}

#[inline]
fn and_words(x: &[u64], y: &[u64]) -> Vec<u64> {
    x.iter().zip(y).map(|(p, q)| p & q).collect()
}

#[inline]
fn or_words(x: &[u64], y: &[u64]) -> Vec<u64> {
    x.iter().zip(y).map(|(p, q)| p | q).collect()
}

#[inline]
fn count_words(x: &[u64]) -> u64 {
    x.iter().map(|w| w.count_ones() as u64).sum()
}

/// Number of clear bits at positions `from..len`.
fn count_clear_from(x: &[u64], from: usize, len: usize) -> u64 {
    if from >= len {
        return 0;
    }
    let mut total = 0u64;
    let first = from / 64;
    let last = (len - 1) / 64;
    for w in first..=last {
        let mut mask = u64::MAX;
        if w == first {
            mask &= u64::MAX << (from % 64);
        }
        if w == last && len % 64 != 0 {
            mask &= (1u64 << (len % 64)) - 1;
        }
        total += (!x[w] & mask).count_ones() as u64;
    }
    total
}

fn bits_to_indices(x: &[u64], len: usize) -> impl Iterator<Item = usize> + '_ {
    (0..len).filter(move |&i| test_bit(x, i))
}

// ---------------------------------------------------------------------------
// shared best-candidate bookkeeping

#[derive(Clone, Debug)]
struct Candidate {
    value: u128,
    weight: u64,
    // Member bitmasks, ascending.
    f_bits: Vec<u32>,
    g_words: Vec<u64>,
}

/// Larger value first, then lighter `F`, then lexicographically smaller `F`.
fn compare_candidates(x: &Candidate, y: &Candidate) -> Ordering {
    x.value
        .cmp(&y.value)
        .then_with(|| y.weight.cmp(&x.weight))
        .then_with(|| y.f_bits.cmp(&x.f_bits))
}

struct NodeBudget<'a> {
    counter: &'a AtomicU64,
    limit: Option<u64>,
    pending: u64,
    exceeded: bool,
}

impl<'a> NodeBudget<'a> {
    const BATCH: u64 = 1024;

    fn new(counter: &'a AtomicU64, limit: Option<u64>) -> Self {
        NodeBudget { counter, limit, pending: 0, exceeded: false }
    }

    /// Returns false once the shared limit has been passed.
    #[inline]
    fn tick(&mut self) -> bool {
        if self.limit.is_none() {
            return true;
        }
        self.pending += 1;
        if self.pending == Self::BATCH {
            self.flush();
        }
        !self.exceeded
    }

    fn flush(&mut self) {
        if let Some(limit) = self.limit {
            let total = self.counter.fetch_add(self.pending, AtomicOrdering::Relaxed) + self.pending;
            self.pending = 0;
            if total > limit {
                self.exceeded = true;
            }
        }
    }
}

/// Error iff the whole tree (prefix plus all subtrees) is larger than the
/// limit, independent of scheduling.
fn check_node_cap(counter: &AtomicU64, prefix_nodes: u64, limit: Option<u64>) -> Result<()> {
    match limit {
        Some(limit) if counter.load(AtomicOrdering::Relaxed) + prefix_nodes > limit => Err(node_cap_error(Some(limit))),
        _ => Ok(()),
    }
}

fn node_cap_error(limit: Option<u64>) -> Error {
    Error::ResourceCap(format!("search exceeded the node limit of {}", limit.unwrap_or(0)))
}

// ---------------------------------------------------------------------------
// exhaustive mode

pub fn oracle_exhaustive_with(
    params: InstanceParams,
    functional: Functional,
    caps: &OracleCaps,
) -> Result<OracleResult> {
    let InstanceParams { n, a, b, t } = params;
    let layer = binomial_u(n, a as i64);
    if layer.to_u64().map_or(true, |c| c > caps.max_exhaustive_layer) {
        return Err(Error::ResourceCap(format!(
            "exhaustive search over 2^C({n},{a}) = 2^{layer} families exceeds the cap C(n,a) <= {}",
            caps.max_exhaustive_layer
        )));
    }
    let a_sets = k_subsets(n, a);
    let b_sets = k_subsets(n, b);
    let words = b_sets.len().div_ceil(64);
    let compat: Vec<Vec<u64>> = a_sets
        .iter()
        .map(|&x| {
            let mut w = vec![0u64; words];
            for (k, &y) in b_sets.iter().enumerate() {
                if (x & y).count_ones() >= t {
                    set_bit(&mut w, k);
                }
            }
            w
        })
        .collect();
    let mut full = vec![0u64; words];
    for k in 0..b_sets.len() {
        set_bit(&mut full, k);
    }

    // Fix the first `split` include/exclude decisions up front; each
    // assignment is an independent subtree.
    let split = a_sets.len().min(10);
    let prefixes: Vec<u32> = (0..1u32 << split).collect();
    let counter = AtomicU64::new(0);
    let outcomes = par::map_collect(&prefixes, |&prefix| {
        let mut dual = full.clone();
        let mut chosen = Vec::new();
        for (k, c) in compat.iter().enumerate().take(split) {
            if prefix >> k & 1 == 1 {
                dual = and_words(&dual, c);
                chosen.push(k);
            }
        }
        let mut walk = ExhaustiveWalk {
            a_sets: &a_sets,
            compat: &compat,
            functional,
            chosen,
            best: None,
            nodes: 0,
            leaves: 0,
            budget: NodeBudget::new(&counter, caps.max_nodes),
        };
        walk.dfs(split, &dual);
        walk.budget.flush();
        (walk.best, walk.nodes, walk.leaves)
    });

    let prefix_nodes = (1u64 << split) - 1;
    check_node_cap(&counter, prefix_nodes, caps.max_nodes)?;
    let mut best: Option<Candidate> = None;
    let mut nodes = prefix_nodes;
    let mut leaves = 0u64;
    for (cand, k, l) in outcomes {
        nodes += k;
        leaves += l;
        if let Some(c) = cand {
            if best.as_ref().map_or(true, |b| compare_candidates(&c, b) == Ordering::Greater) {
                best = Some(c);
            }
        }
    }
    let best = best.expect("the empty family is always a leaf");
    let witness_f = Family::from_bits(n, a, best.f_bits.iter().copied());
    let witness_g = Family::from_bits(n, b, bits_to_indices(&best.g_words, b_sets.len()).map(|k| b_sets[k]));
    Ok(OracleResult {
        params,
        functional,
        mode: SearchMode::Exhaustive,
        value: BigCount::from(best.value),
        degenerate: witness_f.is_empty(),
        witness_f,
        witness_g,
        searched: params,
        nodes_explored: nodes,
        families_evaluated: leaves,
    })
}

struct ExhaustiveWalk<'a> {
    a_sets: &'a [u32],
    compat: &'a [Vec<u64>],
    functional: Functional,
    chosen: Vec<usize>,
    best: Option<Candidate>,
    nodes: u64,
    leaves: u64,
    budget: NodeBudget<'a>,
}

impl ExhaustiveWalk<'_> {
    fn dfs(&mut self, pos: usize, dual: &[u64]) {
        self.nodes += 1;
        if !self.budget.tick() {
            return;
        }
        if pos == self.a_sets.len() {
            self.leaf(dual);
            return;
        }
        let with = and_words(dual, &self.compat[pos]);
        self.chosen.push(pos);
        self.dfs(pos + 1, &with);
        self.chosen.pop();
        self.dfs(pos + 1, dual);
    }

    fn leaf(&mut self, dual: &[u64]) {
        self.leaves += 1;
        let f_len = self.chosen.len() as u64;
        let value = self.functional.eval_u128(f_len, count_words(dual));
        if let Some(b) = &self.best {
            if value < b.value {
                return;
            }
        }
        let weight = self.chosen.iter().map(|&k| weight_bits(self.a_sets[k]) as u64).sum();
        if let Some(b) = &self.best {
            if value == b.value && weight > b.weight {
                return;
            }
        }
        let mut f_bits: Vec<u32> = self.chosen.iter().map(|&k| self.a_sets[k]).collect();
        f_bits.sort_unstable();
        let cand = Candidate { value, weight, f_bits, g_words: dual.to_vec() };
        if self.best.as_ref().map_or(true, |b| compare_candidates(&cand, b) == Ordering::Greater) {
            self.best = Some(cand);
        }
    }
}

// ---------------------------------------------------------------------------
// compressed mode

/// `C([n], a)` under the dominance order, listed in a linear extension.
struct DominancePoset {
    elems: Vec<u32>,
    // up[k]: elements strictly above elems[k].
    up: Vec<Vec<u64>>,
    words: usize,
}

impl DominancePoset {
    fn new(n: u32, a: u32) -> Self {
        let mut elems = k_subsets(n, a);
        // Strictly dominated sets are strictly lighter, so weight order is a
        // linear extension.
        elems.sort_by_key(|&x| (weight_bits(x), x));
        let words = elems.len().div_ceil(64);
        let up = elems
            .iter()
            .map(|&x| {
                let mut w = vec![0u64; words];
                for (k, &y) in elems.iter().enumerate() {
                    if x != y && dominated_bits(x, y, n) {
                        set_bit(&mut w, k);
                    }
                }
                w
            })
            .collect();
        DominancePoset { elems, up, words }
    }
}

#[derive(Clone, Copy)]
struct Transform {
    swapped: bool,
    complemented: bool,
}

/// Pick the cheapest equivalent instance to search: smallest enumerated
/// layer, then smallest partner layer.
fn canonicalize(params: InstanceParams) -> (InstanceParams, Transform) {
    let mut options = vec![
        (params, Transform { swapped: false, complemented: false }),
        (params.swapped(), Transform { swapped: true, complemented: false }),
    ];
    if let Ok(c) = complement_transfer(params) {
        options.push((c, Transform { swapped: false, complemented: true }));
        options.push((c.swapped(), Transform { swapped: true, complemented: true }));
    }
    options
        .into_iter()
        .min_by_key(|(p, _)| (binomial_u(p.n, p.a as i64), binomial_u(p.n, p.b as i64), p.a, p.b, p.t))
        .unwrap()
}

pub fn oracle_compressed_with(
    params: InstanceParams,
    functional: Functional,
    caps: &OracleCaps,
) -> Result<OracleResult> {
    if params.n > caps.max_compressed_n {
        return Err(Error::ResourceCap(format!(
            "compressed search needs n <= {}, got n = {}",
            caps.max_compressed_n, params.n
        )));
    }
    let (canon, transform) = canonicalize(params);
    let InstanceParams { n, a, b, t } = canon;

    let poset = DominancePoset::new(n, a);
    let b_sets = k_subsets(n, b);
    let b_words = b_sets.len().div_ceil(64);
    let compat: Vec<Vec<u64>> = poset
        .elems
        .iter()
        .map(|&x| {
            let mut w = vec![0u64; b_words];
            for (k, &y) in b_sets.iter().enumerate() {
                if (x & y).count_ones() >= t {
                    set_bit(&mut w, k);
                }
            }
            w
        })
        .collect();
    let mut full = vec![0u64; b_words];
    for k in 0..b_sets.len() {
        set_bit(&mut full, k);
    }

    // Every Hirschorn pair is feasible, so its best value is a valid floor.
    let floor = hirschorn_optimum(canon, functional)
        .value
        .to_u64()
        .map(u128::from)
        .unwrap_or(0);
    let ctx = CompressedCtx { poset: &poset, compat: &compat, functional, floor };

    let counter = AtomicU64::new(0);
    let split = poset.elems.len().min(12);
    let mut frontier = Vec::new();
    let mut prefix_nodes = 0u64;
    collect_frontier(
        &ctx,
        split,
        Task { pos: 0, forbidden: vec![0u64; poset.words], dual: full, chosen: Vec::new() },
        &mut frontier,
        &mut prefix_nodes,
    );

    let outcomes = par::map_collect(&frontier, |task| {
        let mut walk = CompressedWalk {
            ctx: &ctx,
            chosen: task.chosen.clone(),
            best: None,
            nodes: 0,
            leaves: 0,
            budget: NodeBudget::new(&counter, caps.max_nodes),
        };
        walk.dfs(task.pos, &task.forbidden, &task.dual);
        walk.budget.flush();
        (walk.best, walk.nodes, walk.leaves)
    });

    check_node_cap(&counter, prefix_nodes, caps.max_nodes)?;
    let mut best: Option<Candidate> = None;
    let mut nodes = prefix_nodes;
    let mut leaves = 0u64;
    for (cand, k, l) in outcomes {
        nodes += k;
        leaves += l;
        if let Some(c) = cand {
            if best.as_ref().map_or(true, |b| compare_candidates(&c, b) == Ordering::Greater) {
                best = Some(c);
            }
        }
    }
    let best = best.expect("the optimum is never below the Hirschorn floor");

    let mut f = Family::from_bits(n, a, best.f_bits.iter().copied());
    let mut g = Family::from_bits(n, b, bits_to_indices(&best.g_words, b_sets.len()).map(|k| b_sets[k]));
    if transform.swapped {
        std::mem::swap(&mut f, &mut g);
    }
    if transform.complemented {
        f = f.complemented();
        g = g.complemented();
    }
    Ok(OracleResult {
        params,
        functional,
        mode: SearchMode::Compressed,
        value: BigCount::from(best.value),
        degenerate: f.is_empty(),
        witness_f: f,
        witness_g: g,
        searched: canon,
        nodes_explored: nodes,
        families_evaluated: leaves,
    })
}

struct CompressedCtx<'a> {
    poset: &'a DominancePoset,
    compat: &'a [Vec<u64>],
    functional: Functional,
    floor: u128,
}

impl CompressedCtx<'_> {
    fn len(&self) -> usize {
        self.poset.elems.len()
    }

    fn skip_forbidden(&self, mut pos: usize, forbidden: &[u64]) -> usize {
        while pos < self.len() && test_bit(forbidden, pos) {
            pos += 1;
        }
        pos
    }

    /// Upper bound on `h` over every down-set extending the current one.
    fn bound(&self, chosen: usize, pos: usize, forbidden: &[u64], dual: &[u64]) -> u128 {
        let f_max = chosen as u64 + count_clear_from(forbidden, pos, self.len());
        self.functional.eval_u128(f_max, count_words(dual))
    }
}

struct Task {
    pos: usize,
    forbidden: Vec<u64>,
    dual: Vec<u64>,
    chosen: Vec<usize>,
}

fn collect_frontier(ctx: &CompressedCtx, split: usize, task: Task, out: &mut Vec<Task>, nodes: &mut u64) {
    let pos = ctx.skip_forbidden(task.pos, &task.forbidden);
    if pos >= split || pos == ctx.len() {
        out.push(Task { pos, ..task });
        return;
    }
    *nodes += 1;
    if ctx.bound(task.chosen.len(), pos, &task.forbidden, &task.dual) < ctx.floor {
        return;
    }
    let mut chosen = task.chosen.clone();
    chosen.push(pos);
    let include = Task {
        pos: pos + 1,
        forbidden: task.forbidden.clone(),
        dual: and_words(&task.dual, &ctx.compat[pos]),
        chosen,
    };
    collect_frontier(ctx, split, include, out, nodes);
    let exclude = Task {
        pos: pos + 1,
        forbidden: or_words(&task.forbidden, &ctx.poset.up[pos]),
        dual: task.dual,
        chosen: task.chosen,
    };
    collect_frontier(ctx, split, exclude, out, nodes);
}

struct CompressedWalk<'a> {
    ctx: &'a CompressedCtx<'a>,
    chosen: Vec<usize>,
    best: Option<Candidate>,
    nodes: u64,
    leaves: u64,
    budget: NodeBudget<'a>,
}

impl CompressedWalk<'_> {
    fn threshold(&self) -> u128 {
        self.best.as_ref().map_or(self.ctx.floor, |b| b.value.max(self.ctx.floor))
    }

    fn dfs(&mut self, pos: usize, forbidden: &[u64], dual: &[u64]) {
        self.nodes += 1;
        if !self.budget.tick() {
            return;
        }
        let pos = self.ctx.skip_forbidden(pos, forbidden);
        if self.ctx.bound(self.chosen.len(), pos, forbidden, dual) < self.threshold() {
            return;
        }
        if pos == self.ctx.len() {
            self.leaf(dual);
            return;
        }
        let with = and_words(dual, &self.ctx.compat[pos]);
        self.chosen.push(pos);
        self.dfs(pos + 1, forbidden, &with);
        self.chosen.pop();
        let without = or_words(forbidden, &self.ctx.poset.up[pos]);
        self.dfs(pos + 1, &without, dual);
    }

    fn leaf(&mut self, dual: &[u64]) {
        self.leaves += 1;
        let elems = &self.ctx.poset.elems;
        let value = self.ctx.functional.eval_u128(self.chosen.len() as u64, count_words(dual));
        if value < self.threshold() {
            return;
        }
        let weight: u64 = self.chosen.iter().map(|&k| weight_bits(elems[k]) as u64).sum();
        if let Some(b) = &self.best {
            if value == b.value && weight > b.weight {
                return;
            }
        }
        let mut f_bits: Vec<u32> = self.chosen.iter().map(|&k| elems[k]).collect();
        f_bits.sort_unstable();
        let cand = Candidate { value, weight, f_bits, g_words: dual.to_vec() };
        if self.best.as_ref().map_or(true, |b| compare_candidates(&cand, b) == Ordering::Greater) {
            self.best = Some(cand);
        }
    }
}
