//! Exact combinatorial arithmetic.
//!
//! Every count in this crate is a [`BigCount`]; floating point only shows up
//! when a count is compared against an analytic bound, and then always on a
//! natural-log scale through [`LogValue`].

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer used for family sizes and products.
///
/// Serialized as a decimal string so values past 64 bits survive JSON.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn one() -> Self {
        BigCount(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn pow(&self, exp: u32) -> Self {
        BigCount(self.0.pow(exp))
    }

    /// Exact division; `None` if `divisor` is zero or does not divide `self`.
    pub fn checked_exact_div(&self, divisor: &BigCount) -> Option<BigCount> {
        if divisor.is_zero() {
            return None;
        }
        let q = &self.0 / &divisor.0;
        if &q * &divisor.0 == self.0 {
            Some(BigCount(q))
        } else {
            None
        }
    }

    pub fn is_even(&self) -> bool {
        !self.0.bit(0)
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<u128> for BigCount {
    fn from(v: u128) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount(v)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for BigCount {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .parse::<BigUint>()
            .map(BigCount)
            .map_err(|e| Error::Parse(format!("not a decimal count {s:?}: {e}")))
    }
}

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_str_radix(10))
    }
}

impl<'de> Deserialize<'de> for BigCount {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for BigCount {
    type Output = BigCount;
    fn add(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a BigCount> for &'a BigCount {
    type Output = BigCount;
    fn add(self, rhs: &BigCount) -> BigCount {
        BigCount(&self.0 + &rhs.0)
    }
}

impl AddAssign<&BigCount> for BigCount {
    fn add_assign(&mut self, rhs: &BigCount) {
        self.0 += &rhs.0;
    }
}

impl Mul for BigCount {
    type Output = BigCount;
    fn mul(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a BigCount> for &'a BigCount {
    type Output = BigCount;
    fn mul(self, rhs: &BigCount) -> BigCount {
        BigCount(&self.0 * &rhs.0)
    }
}

impl Sum for BigCount {
    fn sum<I: Iterator<Item = BigCount>>(iter: I) -> Self {
        iter.fold(BigCount::zero(), |acc, x| acc + x)
    }
}

/// Natural logarithm of a nonnegative quantity, with an explicit zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogValue {
    pub ln_value: f64,
    pub is_zero: bool,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { ln_value: 0.0, is_zero: true };

    pub fn from_ln(ln_value: f64) -> Self {
        LogValue { ln_value, is_zero: false }
    }

    /// `None` for zero.
    pub fn ln(&self) -> Option<f64> {
        if self.is_zero {
            None
        } else {
            Some(self.ln_value)
        }
    }

    /// `self >= other` up to a relative tolerance on the log scale.
    ///
    /// Zero is below everything except zero.
    pub fn ge_with_tol(&self, other: &LogValue, rel_tol: f64) -> bool {
        match (self.is_zero, other.is_zero) {
            (_, true) => true,
            (true, false) => false,
            (false, false) => {
                let slack = rel_tol * other.ln_value.abs().max(1.0);
                self.ln_value >= other.ln_value - slack
            }
        }
    }
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.is_zero, other.is_zero) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => self.ln_value.partial_cmp(&other.ln_value),
        }
    }
}

impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.ln() {
            Some(v) => serializer.serialize_f64(v),
            None => serializer.serialize_none(),
        }
    }
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> Result<BigCount> {
    if n < 0 {
        return Err(Error::Usage(format!("binomial: negative n = {n}")));
    }
    Ok(binomial_u(n as u32, k))
}

/// Infallible form of [`binomial`] for a nonnegative top argument.
pub fn binomial_u(n: u32, k: i64) -> BigCount {
    if k < 0 || k > n as i64 {
        return BigCount::zero();
    }
    let k = (k as u32).min(n - k as u32);
    let mut acc = BigUint::one();
    // acc = C(n - k + i, i) after step i; each division is exact.
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    BigCount(acc)
}

/// Pascal's triangle up to a fixed row, for sweeps that need many binomials.
#[derive(Clone, Debug)]
pub struct BinomialTable {
    rows: Vec<Vec<BigCount>>,
}

impl BinomialTable {
    pub fn new(max_n: u32) -> Self {
        let mut rows: Vec<Vec<BigCount>> = Vec::with_capacity(max_n as usize + 1);
        rows.push(vec![BigCount::one()]);
        for n in 1..=max_n as usize {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigCount::one());
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigCount::one());
            rows.push(row);
        }
        BinomialTable { rows }
    }

    pub fn max_n(&self) -> u32 {
        (self.rows.len() - 1) as u32
    }

    /// `C(n, k)` with the zero convention for `k` out of range.
    ///
    /// Panics if `n` exceeds the table.
    pub fn get(&self, n: u32, k: i64) -> &BigCount {
        static ZERO: std::sync::OnceLock<BigCount> = std::sync::OnceLock::new();
        let row = &self.rows[n as usize];
        if k < 0 || k as usize >= row.len() {
            ZERO.get_or_init(BigCount::zero)
        } else {
            &row[k as usize]
        }
    }
}

/// Natural-log binary entropy, extended to `{0, 1}` by continuity.
pub fn shannon_h(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Usage(format!("shannon_h: argument {x} outside [0, 1]")));
    }
    Ok(entropy_term(x) + entropy_term(1.0 - x))
}

fn entropy_term(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.ln()
    }
}

/// Natural log of an exact count, relative error well under 1e-12.
pub fn log_of_count(c: &BigCount) -> LogValue {
    if c.is_zero() {
        return LogValue::ZERO;
    }
    let bits = c.bits();
    if bits <= 64 {
        return LogValue::from_ln((c.0.to_u64().unwrap() as f64).ln());
    }
    let shift = bits - 64;
    let top = (&c.0 >> shift).to_u64().unwrap();
    LogValue::from_ln((top as f64).ln() + shift as f64 * std::f64::consts::LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(5, 2).unwrap(), BigCount::from(10u64));
        assert_eq!(binomial(3, 5).unwrap(), BigCount::zero());
        assert_eq!(binomial(3, -1).unwrap(), BigCount::zero());
        assert_eq!(binomial(0, 0).unwrap(), BigCount::one());
        assert!(binomial(-1, 0).is_err());
    }

    #[test]
    fn table_matches_multiplicative_formula() {
        let table = BinomialTable::new(120);
        for n in 0..=120u32 {
            for k in -1..=(n as i64 + 1) {
                assert_eq!(table.get(n, k), &binomial_u(n, k), "C({n},{k})");
            }
        }
    }

    #[test]
    fn shannon_endpoints_and_domain() {
        assert_eq!(shannon_h(0.0).unwrap(), 0.0);
        assert_eq!(shannon_h(1.0).unwrap(), 0.0);
        assert!((shannon_h(0.5).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(shannon_h(-0.1).is_err());
        assert!(shannon_h(1.5).is_err());
        assert!(shannon_h(f64::NAN).is_err());
    }

    #[test]
    fn reference_values() {
        // mpmath, 50 digits.
        let c = binomial_u(203, 101);
        assert_eq!(
            c.to_string(),
            "717268694139581087437776477828108394209165360614616653685960"
        );
        assert_eq!(c.bits(), 199);
        assert_eq!(binomial(203, 101).unwrap(), *BinomialTable::new(203).get(203, 101));
        let ln = log_of_count(&c).ln().unwrap();
        let want = 137.82280081881377106837159383620660748345073859687;
        assert!((ln - want).abs() <= 1e-12 * want);
        assert!((shannon_h(0.375).unwrap() - 0.66156323815798205985300481726221529028019059747941).abs() < 1e-12);
    }

    #[test]
    fn second_derivative_spot_checks() {
        let step = 1e-4;
        for i in 1..10 {
            let x = i as f64 / 10.0;
            let h = |y: f64| shannon_h(y).unwrap();
            let fd = (h(x + step) - 2.0 * h(x) + h(x - step)) / (step * step);
            let exact = -1.0 / x - 1.0 / (1.0 - x);
            assert!((fd - exact).abs() < 1e-6 * exact.abs(), "x={x}: {fd} vs {exact}");
        }
    }

    #[test]
    fn log_of_small_counts() {
        assert_eq!(log_of_count(&BigCount::one()).ln(), Some(0.0));
        assert!(log_of_count(&BigCount::zero()).is_zero);
        let v = log_of_count(&BigCount::from(u64::MAX)).ln().unwrap();
        assert!((v - (u64::MAX as f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn log_value_ordering() {
        let z = LogValue::ZERO;
        let a = LogValue::from_ln(-3.0);
        let b = LogValue::from_ln(2.0);
        assert!(z < a && a < b);
        assert!(b.ge_with_tol(&a, 1e-9));
        assert!(!z.ge_with_tol(&a, 1e-9));
        assert!(z.ge_with_tol(&z, 1e-9));
    }

    #[test]
    fn bigcount_decimal_round_trip() {
        let c = binomial_u(203, 101);
        assert_eq!(c.to_string().parse::<BigCount>().unwrap(), c);
        assert!("12x".parse::<BigCount>().is_err());
    }

    #[test]
    fn exact_division() {
        let c = BigCount::from(28u64);
        assert_eq!(c.checked_exact_div(&BigCount::from(2u64)), Some(BigCount::from(14u64)));
        assert_eq!(c.checked_exact_div(&BigCount::from(3u64)), None);
        assert_eq!(c.checked_exact_div(&BigCount::zero()), None);
    }
}
