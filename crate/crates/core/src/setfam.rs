//! Explicit set families over a ground set `[n]`, `n <= 32`, and the left
//! compression machinery that drives them toward initial segments.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_GROUND: u32 = 32;

/// The quadruple `(n, a, b, t)`: ground-set size, the two uniformities, and
/// the required intersection size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InstanceParams {
    pub n: u32,
    pub a: u32,
    pub b: u32,
    pub t: u32,
}

impl InstanceParams {
    pub fn new(n: u32, a: u32, b: u32, t: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if a < 1 || a > n || b < 1 || b > n {
            return Err(Error::InvalidParams(format!(
                "need 1 <= a, b <= n, got n={n} a={a} b={b}"
            )));
        }
        if t < 1 || t > a.min(b) {
            return Err(Error::InvalidParams(format!(
                "need 1 <= t <= min(a, b), got t={t} a={a} b={b}"
            )));
        }
        Ok(InstanceParams { n, a, b, t })
    }

    /// Like [`InstanceParams::new`] but allows `t > min(a, b)`, for counting
    /// paths where such an instance is merely degenerate (every product is 0).
    pub fn new_counting(n: u32, a: u32, b: u32, t: u32) -> Result<Self> {
        if t >= 1 && t <= n && t > a.min(b) {
            InstanceParams::new(n, a, b, 1)?;
            return Ok(InstanceParams { n, a, b, t });
        }
        InstanceParams::new(n, a, b, t)
    }

    /// `a + b >= n + t`: every a-set meets every b-set in at least t points.
    pub fn is_trivial(&self) -> bool {
        self.a + self.b >= self.n + self.t
    }

    pub fn swapped(&self) -> Self {
        InstanceParams { n: self.n, a: self.b, b: self.a, t: self.t }
    }
}

impl fmt::Display for InstanceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, a={}, b={}, t={})", self.n, self.a, self.b, self.t)
    }
}

#[inline]
pub(crate) fn ground_mask(n: u32) -> u32 {
    ((1u64 << n) - 1) as u32
}

#[inline]
pub(crate) fn prefix_count(bits: u32, s: u32) -> u32 {
    (bits & ground_mask(s)).count_ones()
}

#[inline]
pub(crate) fn delta_bits(bits: u32, i: u32, j: u32) -> u32 {
    let bi = 1u32 << (i - 1);
    let bj = 1u32 << (j - 1);
    if bits & bj != 0 && bits & bi == 0 {
        (bits & !bj) | bi
    } else {
        bits
    }
}

#[inline]
pub(crate) fn weight_bits(mut bits: u32) -> u32 {
    let mut w = 0;
    while bits != 0 {
        w += bits.trailing_zeros() + 1;
        bits &= bits - 1;
    }
    w
}

/// A subset of `[n]`; bit `i - 1` set iff element `i` is present.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetMask {
    bits: u32,
    n: u8,
}

impl SetMask {
    pub fn new(n: u32, bits: u32) -> Result<Self> {
        if n < 1 || n > MAX_GROUND {
            return Err(Error::Usage(format!("ground set size {n} outside 1..=32")));
        }
        if bits & !ground_mask(n) != 0 {
            return Err(Error::Usage(format!("bitmask {bits:#x} has elements beyond n={n}")));
        }
        Ok(SetMask { bits, n: n as u8 })
    }

    pub fn from_elements(n: u32, elements: &[u32]) -> Result<Self> {
        let mut bits = 0u32;
        for &e in elements {
            if e < 1 || e > n {
                return Err(Error::Usage(format!("element {e} outside [1, {n}]")));
            }
            bits |= 1 << (e - 1);
        }
        SetMask::new(n, bits)
    }

    pub(crate) fn from_bits_unchecked(n: u32, bits: u32) -> Self {
        debug_assert!(bits & !ground_mask(n) == 0);
        SetMask { bits, n: n as u8 }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn ground(&self) -> u32 {
        self.n as u32
    }

    pub fn len(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, e: u32) -> bool {
        e >= 1 && e <= self.ground() && self.bits & (1 << (e - 1)) != 0
    }

    /// Elements in increasing order.
    pub fn elements(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len() as usize);
        let mut bits = self.bits;
        while bits != 0 {
            out.push(bits.trailing_zeros() + 1);
            bits &= bits - 1;
        }
        out
    }

    pub fn complement(&self) -> SetMask {
        SetMask { bits: !self.bits & ground_mask(self.ground()), n: self.n }
    }

    /// `|X ∩ [s]|`.
    pub fn prefix_count(&self, s: u32) -> u32 {
        prefix_count(self.bits, s.min(self.ground()))
    }

    pub fn intersection_len(&self, other: &SetMask) -> u32 {
        (self.bits & other.bits).count_ones()
    }
}

impl fmt::Display for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        let elems = self.elements();
        for (k, e) in elems.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// `m(X, i)`: the i-th smallest element of `X`, 1-based.
pub fn mth_element(x: &SetMask, i: u32) -> Result<u32> {
    if i < 1 || i > x.len() {
        return Err(Error::Usage(format!("mth_element: index {i} outside 1..={}", x.len())));
    }
    Ok(nth_bit(x.bits, i))
}

#[inline]
fn nth_bit(mut bits: u32, i: u32) -> u32 {
    for _ in 1..i {
        bits &= bits - 1;
    }
    bits.trailing_zeros() + 1
}

/// Sum of the elements of `X`.
pub fn weight(x: &SetMask) -> u32 {
    weight_bits(x.bits)
}

/// Left compression: swap `j` out for `i` when `j ∈ X` and `i ∉ X`.
pub fn delta_compress(x: &SetMask, i: u32, j: u32) -> Result<SetMask> {
    if i < 1 || i >= j || j > x.ground() {
        return Err(Error::Usage(format!(
            "delta_compress needs 1 <= i < j <= n, got i={i} j={j} n={}",
            x.ground()
        )));
    }
    Ok(SetMask { bits: delta_bits(x.bits, i, j), n: x.n })
}

/// All `m`-subsets of `[n]` as bitmasks, ascending.
pub fn k_subsets(n: u32, m: u32) -> Vec<u32> {
    assert!(n <= MAX_GROUND, "k_subsets: n={n} exceeds {MAX_GROUND}");
    if m > n {
        return Vec::new();
    }
    if m == 0 {
        return vec![0];
    }
    let limit = 1u64 << n;
    let mut out = Vec::new();
    let mut x: u64 = (1u64 << m) - 1;
    while x < limit {
        out.push(x as u32);
        // Gosper's hack
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

/// A uniform family: every member has exactly `size` elements.
///
/// Members are kept sorted by bitmask and duplicate-free, so equality is
/// structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    n: u32,
    size: u32,
    members: Vec<SetMask>,
}

impl Family {
    pub fn new(n: u32, size: u32, members: impl IntoIterator<Item = SetMask>) -> Result<Self> {
        if n < 1 || n > MAX_GROUND || size > n {
            return Err(Error::Usage(format!("family with n={n} size={size}")));
        }
        let mut members: Vec<SetMask> = members.into_iter().collect();
        for m in &members {
            if m.ground() != n {
                return Err(Error::Usage(format!("member {m} lives in [{}], not [{n}]", m.ground())));
            }
            if m.len() != size {
                return Err(Error::Usage(format!("member {m} has {} elements, expected {size}", m.len())));
            }
        }
        members.sort_unstable();
        members.dedup();
        Ok(Family { n, size, members })
    }

    /// Build from raw bitmasks; panics on bad input. Internal callers only.
    pub(crate) fn from_bits(n: u32, size: u32, bits: impl IntoIterator<Item = u32>) -> Self {
        let mut members: Vec<SetMask> =
            bits.into_iter().map(|b| SetMask::from_bits_unchecked(n, b)).collect();
        debug_assert!(members.iter().all(|m| m.len() == size));
        members.sort_unstable();
        members.dedup();
        Family { n, size, members }
    }

    pub fn empty(n: u32, size: u32) -> Self {
        Family { n, size, members: Vec::new() }
    }

    /// All `size`-subsets of `[n]`.
    pub fn full_layer(n: u32, size: u32) -> Self {
        Family::from_bits(n, size, k_subsets(n, size))
    }

    /// `{X ∈ C([n], size) : keep(X)}`.
    pub fn filtered(n: u32, size: u32, keep: impl Fn(&SetMask) -> bool) -> Self {
        let members = k_subsets(n, size)
            .into_iter()
            .map(|b| SetMask::from_bits_unchecked(n, b))
            .filter(|m| keep(m))
            .collect();
        Family { n, size, members }
    }

    pub fn ground(&self) -> u32 {
        self.n
    }

    pub fn member_size(&self) -> u32 {
        self.size
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[SetMask] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = &SetMask> {
        self.members.iter()
    }

    pub fn contains(&self, x: &SetMask) -> bool {
        self.contains_bits(x.bits)
    }

    fn contains_bits(&self, bits: u32) -> bool {
        self.members.binary_search_by(|m| m.bits.cmp(&bits)).is_ok()
    }

    /// Sum of member weights.
    pub fn weight(&self) -> u64 {
        self.members.iter().map(|m| weight(m) as u64).sum()
    }

    /// Every member replaced by its complement in `[n]`.
    pub fn complemented(&self) -> Family {
        Family::from_bits(self.n, self.n - self.size, self.members.iter().map(|m| m.complement().bits))
    }

    /// Serialize as a header line `n=<n> size=<k>` followed by one
    /// comma-separated member per line.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={} size={}", self.n, self.size)?;
        for m in &self.members {
            writeln!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty family text".into()))?;
        let mut n = None;
        let mut size = None;
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field {field:?}")))?;
            let value: u32 = value
                .parse()
                .map_err(|_| Error::Parse(format!("bad header value {field:?}")))?;
            match key {
                "n" => n = Some(value),
                "size" => size = Some(value),
                _ => return Err(Error::Parse(format!("unknown header key {key:?}"))),
            }
        }
        let (n, size) = match (n, size) {
            (Some(n), Some(size)) => (n, size),
            _ => return Err(Error::Parse(format!("header {header:?} needs n= and size="))),
        };
        let mut members = Vec::new();
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let elements = if line == "-" {
                Vec::new()
            } else {
                line.split(',')
                    .map(|e| e.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad member {line:?}"))))
                    .collect::<Result<Vec<_>>>()?
            };
            members.push(SetMask::from_elements(n, &elements).map_err(|e| Error::Parse(e.to_string()))?);
        }
        Family::new(n, size, members).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `Δ_ij`: move each member through `δ_ij` unless its image is already
/// present. Preserves the family size.
pub fn family_compress(f: &Family, i: u32, j: u32) -> Family {
    assert!(1 <= i && i < j && j <= f.n, "family_compress needs 1 <= i < j <= n");
    let bits = f.members.iter().map(|x| {
        let y = delta_bits(x.bits, i, j);
        if y != x.bits && !f.contains_bits(y) {
            y
        } else {
            x.bits
        }
    });
    Family::from_bits(f.n, f.size, bits)
}

/// Whether `Δ_ij` would move some member.
fn moves_under(f: &Family, i: u32, j: u32) -> bool {
    f.members.iter().any(|x| {
        let y = delta_bits(x.bits, i, j);
        y != x.bits && !f.contains_bits(y)
    })
}

/// Closed under every left compression `δ_ij`, `i < j`.
pub fn is_left_compressed(f: &Family) -> bool {
    (1..f.n).all(|i| (i + 1..=f.n).all(|j| !moves_under(f, i, j)))
}

/// `|X ∩ Y| >= t` for every `X ∈ F`, `Y ∈ G`. Vacuously true when either is empty.
pub fn is_cross_t_intersecting(f: &Family, g: &Family, t: u32) -> bool {
    f.members
        .iter()
        .all(|x| g.members.iter().all(|y| (x.bits & y.bits).count_ones() >= t))
}

/// `∃ s ∈ [n] : |F ∩ [s]| + |G ∩ [s]| >= s + t`.
pub fn condition_a(f: &SetMask, g: &SetMask, t: u32) -> bool {
    first_good_prefix(f, g, t).is_some()
}

/// Smallest `s` witnessing [`condition_a`].
pub fn first_good_prefix(f: &SetMask, g: &SetMask, t: u32) -> Option<u32> {
    let n = f.ground();
    (1..=n).find(|&s| prefix_count(f.bits, s) + prefix_count(g.bits, s) >= s + t)
}

/// `∃ i ∈ [a - t + 1] : m(Ḡ, i) > m(F, t + i - 1)`, where `a = |F|`.
///
/// Requires `n > |F| + |G| - t` so that `Ḡ` has at least `a - t + 1` elements.
pub fn condition_b(f: &SetMask, g: &SetMask, t: u32) -> Result<bool> {
    let n = f.ground();
    let (a, b) = (f.len(), g.len());
    if t < 1 || t > a {
        return Err(Error::Usage(format!("condition_b needs 1 <= t <= |F|, got t={t} |F|={a}")));
    }
    if n + t <= a + b {
        return Err(Error::Usage(format!(
            "condition_b needs n > a + b - t, got n={n} a={a} b={b} t={t}"
        )));
    }
    let gc = g.complement().bits;
    Ok((1..=a - t + 1).any(|i| nth_bit(gc, i) > nth_bit(f.bits, t + i - 1)))
}

/// A Hirschorn triple `(s, u, v)` with `u + v = s + t`, `|F ∩ [s]| >= u` and
/// `|G ∩ [s]| >= v`, if one exists.
pub fn hirschorn_cover(f: &SetMask, g: &SetMask, t: u32) -> Option<(u32, u32, u32)> {
    let s = first_good_prefix(f, g, t)?;
    let u = f.prefix_count(s);
    let v = s + t - u;
    debug_assert!(v <= g.prefix_count(s));
    Some((s, u, v))
}

/// Result of driving a pair to a left-compressed fixpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedPair {
    pub f: Family,
    pub g: Family,
    pub steps: u64,
}

/// Apply `Δ_ij` to both families until `F` is closed under every left
/// compression. With `compress_g`, keep going until `G` is closed as well.
pub fn compress_pair_to_fixpoint(f: &Family, g: &Family, compress_g: bool) -> CompressedPair {
    compress_pair_with(f, g, compress_g, |_, _, _, _| {})
}

/// [`compress_pair_to_fixpoint`] reporting every applied step as
/// `(i, j, F_after, G_after)`.
pub fn compress_pair_with(
    f: &Family,
    g: &Family,
    compress_g: bool,
    mut observer: impl FnMut(u32, u32, &Family, &Family),
) -> CompressedPair {
    assert_eq!(f.n, g.n, "families over different ground sets");
    let n = f.n;
    let mut f = f.clone();
    let mut g = g.clone();
    let mut steps = 0u64;
    'outer: loop {
        for i in 1..n {
            for j in i + 1..=n {
                if moves_under(&f, i, j) || (compress_g && moves_under(&g, i, j)) {
                    f = family_compress(&f, i, j);
                    g = family_compress(&g, i, j);
                    steps += 1;
                    observer(i, j, &f, &g);
                    continue 'outer;
                }
            }
        }
        break;
    }
    CompressedPair { f, g, steps }
}
