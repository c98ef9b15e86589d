//! Shared domain types and arithmetic conventions.
//!
//! Everything the solvers touch is exact: weights are arbitrary-precision
//! rationals, widths are `scaled * D^-exponent` pairs, and penalty functions
//! are materialized as validated rational tables. No floating point anywhere.

use std::cmp::Ordering;

use num::bigint::Sign;
use num::{BigInt, BigRational, BigUint, Integer, One, Signed, Zero};

use crate::error::{Error, Result};

/// Size of the output alphabet. Always at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Radix(u32);

impl Radix {
    pub fn new(d: u32) -> Result<Radix> {
        if d < 2 {
            return Err(Error::RadixTooSmall(d));
        }
        Ok(Radix(d))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn to_biguint(self) -> BigUint {
        BigUint::from(self.0)
    }

    /// D^exp for nonnegative exp.
    pub fn pow(self, exp: u32) -> BigUint {
        self.to_biguint().pow(exp)
    }
}

impl std::fmt::Display for Radix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Smallest `n' >= n_real` with `n' == 1 (mod D-1)`.
///
/// Appending that many zero-weight dummy symbols is what lets every optimal
/// code meet the Kraft inequality with equality. For D = 2 this is `n_real`
/// itself.
pub fn pad_dummies(n_real: u64, radix: Radix) -> u64 {
    debug_assert!(n_real >= 1);
    let step = u64::from(radix.get()) - 1;
    if step == 1 {
        return n_real;
    }
    let rem = (n_real - 1) % step;
    if rem == 0 {
        n_real
    } else {
        n_real + (step - rem)
    }
}

/// Exact nonnegative value of the form `scaled * D^-scale_exponent`.
///
/// Stored canonically: `scaled` is never divisible by the radix (zero is
/// stored as `0 * D^0`), so two `WidthValue`s built for the same radix are
/// equal as values iff they are structurally equal. All constructors take the
/// radix and canonicalize; values built for different radixes must not be
/// mixed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WidthValue {
    scaled: BigUint,
    scale_exponent: i64,
}

impl WidthValue {
    pub fn zero() -> WidthValue {
        WidthValue {
            scaled: BigUint::zero(),
            scale_exponent: 0,
        }
    }

    pub fn new(radix: Radix, scaled: BigUint, scale_exponent: i64) -> WidthValue {
        let mut w = WidthValue {
            scaled,
            scale_exponent,
        };
        w.canonicalize(radix);
        w
    }

    /// The pure power `D^exp` (exp may be negative, zero, or positive).
    /// Already canonical for any radix; the parameter keeps the constructor
    /// signatures uniform.
    pub fn power(_radix: Radix, exp: i64) -> WidthValue {
        WidthValue {
            scaled: BigUint::one(),
            scale_exponent: -exp,
        }
    }

    /// `n * D^-level`, the combined width of one grid row segment.
    pub fn multiple_of_power(radix: Radix, n: u64, exp: i64) -> WidthValue {
        WidthValue::new(radix, BigUint::from(n), -exp)
    }

    /// `Sum_{l = lo..=hi} D^-l`, exact. Empty when `lo > hi`.
    pub fn geometric_run(radix: Radix, lo: u32, hi: u32) -> WidthValue {
        if lo > hi {
            return WidthValue::zero();
        }
        let d = radix.to_biguint();
        let run = hi - lo + 1;
        let numer = (d.pow(run) - BigUint::one()) / (d - BigUint::one());
        WidthValue::new(radix, numer, i64::from(hi))
    }

    fn canonicalize(&mut self, radix: Radix) {
        if self.scaled.is_zero() {
            self.scale_exponent = 0;
            return;
        }
        let d = radix.to_biguint();
        loop {
            let (q, r) = self.scaled.div_rem(&d);
            if !r.is_zero() {
                break;
            }
            self.scaled = q;
            self.scale_exponent -= 1;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scaled.is_zero()
    }

    pub fn scaled(&self) -> &BigUint {
        &self.scaled
    }

    pub fn scale_exponent(&self) -> i64 {
        self.scale_exponent
    }

    /// `Some(e)` when the value is exactly `D^e`.
    pub fn as_unit_power(&self) -> Option<i64> {
        if self.scaled.is_one() {
            Some(-self.scale_exponent)
        } else {
            None
        }
    }

    /// Exponent of the smallest power of D appearing in the base-D expansion
    /// of the value; `None` for zero. In canonical form this is simply
    /// `-scale_exponent`.
    pub fn lowest_exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(-self.scale_exponent)
        }
    }

    /// The value expressed in units of `D^exp`, if that is an integer.
    pub fn units_at(&self, radix: Radix, exp: i64) -> Option<BigUint> {
        if self.is_zero() {
            return Some(BigUint::zero());
        }
        let shift = -self.scale_exponent - exp;
        if shift < 0 {
            return None;
        }
        Some(&self.scaled * radix.to_biguint().pow(shift as u32))
    }

    pub fn add(&self, other: &WidthValue, radix: Radix) -> WidthValue {
        let e = self.scale_exponent.max(other.scale_exponent);
        let d = radix.to_biguint();
        let a = &self.scaled * d.pow((e - self.scale_exponent) as u32);
        let b = &other.scaled * d.pow((e - other.scale_exponent) as u32);
        WidthValue::new(radix, a + b, e)
    }

    /// `self - other`, or `None` when the result would be negative.
    pub fn checked_sub(&self, other: &WidthValue, radix: Radix) -> Option<WidthValue> {
        let e = self.scale_exponent.max(other.scale_exponent);
        let d = radix.to_biguint();
        let a = &self.scaled * d.pow((e - self.scale_exponent) as u32);
        let b = &other.scaled * d.pow((e - other.scale_exponent) as u32);
        if a < b {
            return None;
        }
        Some(WidthValue::new(radix, a - b, e))
    }

    pub fn scale_by(&self, n: u64, radix: Radix) -> WidthValue {
        WidthValue::new(radix, &self.scaled * BigUint::from(n), self.scale_exponent)
    }

    pub fn cmp_with(&self, other: &WidthValue, radix: Radix) -> Ordering {
        let e = self.scale_exponent.max(other.scale_exponent);
        let d = radix.to_biguint();
        let a = &self.scaled * d.pow((e - self.scale_exponent) as u32);
        let b = &other.scaled * d.pow((e - other.scale_exponent) as u32);
        a.cmp(&b)
    }

    pub fn to_rational(&self, radix: Radix) -> BigRational {
        let numer = BigInt::from_biguint(Sign::Plus, self.scaled.clone());
        if self.scale_exponent >= 0 {
            let den = BigInt::from_biguint(
                Sign::Plus,
                radix.to_biguint().pow(self.scale_exponent as u32),
            );
            BigRational::new(numer, den)
        } else {
            let mul = BigInt::from_biguint(
                Sign::Plus,
                radix.to_biguint().pow((-self.scale_exponent) as u32),
            );
            BigRational::from(numer * mul)
        }
    }
}

/// Minimum and maximum allowed codeword lengths, inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LengthBounds {
    l_min: u32,
    l_max: u32,
}

impl LengthBounds {
    pub fn new(l_min: u32, l_max: u32) -> Result<LengthBounds> {
        if l_min > l_max {
            return Err(Error::InvertedBounds { l_min, l_max });
        }
        Ok(LengthBounds { l_min, l_max })
    }

    pub fn l_min(self) -> u32 {
        self.l_min
    }

    pub fn l_max(self) -> u32 {
        self.l_max
    }

    /// Number of grid levels, `l_max - l_min`.
    pub fn span(self) -> u32 {
        self.l_max - self.l_min
    }
}

/// Caller weights, sorted nonincreasing, padded with zero-weight dummies.
///
/// The sort is stable, so equal weights keep their input order and the
/// dummies always occupy the highest indexes. The permutation back to caller
/// order is retained so results can be reported in the order the weights were
/// given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    sorted: Vec<BigRational>,
    caller_of_sorted: Vec<usize>,
    n_real: usize,
    n_padded: usize,
}

impl WeightVector {
    pub fn new(weights: &[BigRational], radix: Radix) -> Result<WeightVector> {
        WeightVector::with_extra_dummies(weights, radix, 0)
    }

    /// Like [`WeightVector::new`] but appends `extra_blocks * (D-1)` dummies
    /// beyond the minimum padding. Extra dummies deliberately leave unused
    /// leaves in the code tree; the fringe sweep uses this.
    pub fn with_extra_dummies(
        weights: &[BigRational],
        radix: Radix,
        extra_blocks: u32,
    ) -> Result<WeightVector> {
        if weights.is_empty() {
            return Err(Error::NoWeights);
        }
        for (index, w) in weights.iter().enumerate() {
            if !w.is_positive() {
                return Err(Error::NonPositiveWeight { index });
            }
        }
        let mut order: Vec<usize> = (0..weights.len()).collect();
        // Stable descending sort: ties keep caller order.
        order.sort_by(|&a, &b| weights[b].cmp(&weights[a]));
        let sorted: Vec<BigRational> = order.iter().map(|&i| weights[i].clone()).collect();
        let n_real = weights.len();
        let n_padded = pad_dummies(n_real as u64, radix) as usize
            + extra_blocks as usize * (radix.get() as usize - 1);
        let mut padded = sorted;
        padded.resize(n_padded, BigRational::zero());
        Ok(WeightVector {
            sorted: padded,
            caller_of_sorted: order,
            n_real,
            n_padded,
        })
    }

    /// All padded weights, nonincreasing; dummies are exact zeros at the tail.
    pub fn sorted(&self) -> &[BigRational] {
        &self.sorted
    }

    pub fn n_real(&self) -> usize {
        self.n_real
    }

    pub fn n_padded(&self) -> usize {
        self.n_padded
    }

    pub fn dummy_count(&self) -> usize {
        self.n_padded - self.n_real
    }

    /// Sum of the real weights (dummies contribute nothing).
    pub fn total(&self) -> BigRational {
        self.sorted[..self.n_real]
            .iter()
            .fold(BigRational::zero(), |acc, w| acc + w)
    }

    /// Reorders per-sorted-symbol values back to caller order, dropping the
    /// dummy entries.
    pub fn to_caller_order<T: Clone>(&self, per_sorted: &[T]) -> Vec<T> {
        debug_assert!(per_sorted.len() >= self.n_real);
        let mut out: Vec<Option<T>> = vec![None; self.n_real];
        for (sorted_pos, &caller_pos) in self.caller_of_sorted.iter().enumerate() {
            out[caller_pos] = Some(per_sorted[sorted_pos].clone());
        }
        out.into_iter().map(|v| v.unwrap()).collect()
    }
}

/// Penalty function on the excess length `delta = l - l_min`.
///
/// `Linear` and `Quadratic` follow the usual conventions: `delta` itself, and
/// the square of the absolute length `(delta + l_min)^2`. `Exponential` is
/// `D^(t * (delta + l_min))`, rationalized once to denominator `precision`;
/// the solvers then run exactly on the rationalized table. `Table` supplies
/// `phi(0), phi(1), ...` directly and is validated for monotonicity and
/// convexity over the range actually used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Penalty {
    Linear,
    Quadratic,
    Exponential { t: BigRational, precision: BigUint },
    Table(Vec<BigRational>),
}

impl Penalty {
    /// Default denominator bound for rationalizing exponential penalties.
    pub fn default_precision() -> BigUint {
        BigUint::from(1_000_000_000_000u64)
    }

    /// Evaluates `phi(delta)` after validating the table over `0..=delta`.
    pub fn eval(&self, delta: u32, l_min: u32, radix: Radix) -> Result<BigRational> {
        let table = self.table(l_min, radix, delta)?;
        Ok(table.phi(delta).clone())
    }

    /// Materializes `phi(0..=span)` as exact rationals and validates that the
    /// sequence is nonnegative, nondecreasing, and convex.
    pub fn table(&self, l_min: u32, radix: Radix, span: u32) -> Result<PenaltyTable> {
        let mut values = Vec::with_capacity(span as usize + 1);
        for delta in 0..=span {
            values.push(self.raw_value(delta, l_min, radix)?);
        }
        PenaltyTable::validated(values)
    }

    fn raw_value(&self, delta: u32, l_min: u32, radix: Radix) -> Result<BigRational> {
        match self {
            Penalty::Linear => Ok(BigRational::from(BigInt::from(delta))),
            Penalty::Quadratic => {
                let abs = BigInt::from(delta) + BigInt::from(l_min);
                Ok(BigRational::from(&abs * &abs))
            }
            Penalty::Exponential { t, precision } => {
                rationalized_power(radix, t, delta + l_min, precision)
            }
            Penalty::Table(values) => values.get(delta as usize).cloned().ok_or({
                Error::PenaltyTableTooShort {
                    len: values.len(),
                    needed: delta,
                }
            }),
        }
    }
}

/// Best approximation of `D^(t * exponent)` with denominator `precision`.
/// Exact when the true value is representable; ties round down.
fn rationalized_power(
    radix: Radix,
    t: &BigRational,
    exponent: u32,
    precision: &BigUint,
) -> Result<BigRational> {
    if !t.is_positive() {
        return Err(Error::NonPositiveRate);
    }
    if precision.is_zero() {
        return Err(Error::ZeroPrecision);
    }
    let x = t * BigRational::from(BigInt::from(exponent));
    let a = x.numer().to_biguint().expect("nonnegative exponent");
    let b = x.denom().to_biguint().expect("positive denominator");
    let a32 = u32::try_from(&a).map_err(|_| Error::RationalizationOverflow)?;
    let b32 = u32::try_from(&b).map_err(|_| Error::RationalizationOverflow)?;
    // target = precision^b * D^a; reject absurd magnitudes before computing.
    let bits = precision.bits() * u64::from(b32) + radix.to_biguint().bits() * u64::from(a32);
    if bits > 4_000_000 {
        return Err(Error::RationalizationOverflow);
    }
    let target = precision.pow(b32) * radix.to_biguint().pow(a32);
    // m = round(target^(1/b)): floor root, then bump if the remainder is
    // past the halfway point, i.e. 2^b * target > (2r+1)^b.
    let r = target.nth_root(b32);
    let lhs = BigUint::from(2u32).pow(b32) * &target;
    let rhs = (BigUint::from(2u32) * &r + BigUint::one()).pow(b32);
    let m = if lhs > rhs { r + BigUint::one() } else { r };
    Ok(BigRational::new(
        BigInt::from_biguint(Sign::Plus, m),
        BigInt::from_biguint(Sign::Plus, precision.clone()),
    ))
}

/// Validated table of `phi(0) ..= phi(span)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PenaltyTable {
    values: Vec<BigRational>,
}

impl PenaltyTable {
    fn validated(values: Vec<BigRational>) -> Result<PenaltyTable> {
        debug_assert!(!values.is_empty());
        if values[0].is_negative() {
            return Err(Error::PenaltyNegative { delta: 0 });
        }
        let mut prev_diff: Option<BigRational> = None;
        for delta in 1..values.len() {
            let diff = &values[delta] - &values[delta - 1];
            if diff.is_negative() {
                return Err(Error::PenaltyNotMonotone {
                    delta: delta as u32,
                });
            }
            if let Some(ref p) = prev_diff {
                if diff < *p {
                    return Err(Error::PenaltyNotConvex {
                        delta: delta as u32,
                    });
                }
            }
            prev_diff = Some(diff);
        }
        Ok(PenaltyTable { values })
    }

    pub fn span(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    pub fn phi(&self, delta: u32) -> &BigRational {
        &self.values[delta as usize]
    }

    /// `phi(delta) - phi(delta - 1)`, the per-node weight factor. Requires
    /// `delta >= 1`.
    pub fn diff(&self, delta: u32) -> BigRational {
        &self.values[delta as usize] - &self.values[delta as usize - 1]
    }
}

/// One cell of the solver grid: the `level`-th digit of `symbol`'s codeword.
/// Symbols are 0-based positions in the sorted, padded weight vector; levels
/// are absolute codeword lengths in `l_min+1 ..= l_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Node {
    pub symbol: u32,
    pub level: u32,
}

/// A set of grid nodes stored as per-symbol column heights.
///
/// Valid nodesets have contiguous columns: if `(i, l)` is present then so is
/// `(i, l-1)` down to `l_min + 1`. That is an internal invariant of the
/// solver output, so construction asserts it rather than returning an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSet {
    heights: Vec<u32>,
}

impl NodeSet {
    pub fn from_nodes(n_symbols: usize, bounds: LengthBounds, nodes: &[Node]) -> NodeSet {
        let mut heights = vec![0u32; n_symbols];
        let mut level_sum = vec![0u64; n_symbols];
        for node in nodes {
            let i = node.symbol as usize;
            assert!(i < n_symbols, "node symbol out of range");
            assert!(
                node.level > bounds.l_min() && node.level <= bounds.l_max(),
                "node level out of range"
            );
            heights[i] += 1;
            level_sum[i] += u64::from(node.level);
        }
        // Contiguity: h nodes in a column must be exactly the levels
        // l_min+1 ..= l_min+h, which have a unique sum.
        for i in 0..n_symbols {
            let h = u64::from(heights[i]);
            let lo = u64::from(bounds.l_min()) + 1;
            let expect = h * lo + h * (h.saturating_sub(1)) / 2;
            assert_eq!(
                level_sum[i], expect,
                "column {i} is not a contiguous prefix of levels"
            );
        }
        NodeSet { heights }
    }

    pub fn empty(n_symbols: usize) -> NodeSet {
        NodeSet {
            heights: vec![0; n_symbols],
        }
    }

    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    /// Length vector in sorted-symbol order: `l_i = l_min + height_i`.
    pub fn to_lengths(&self, l_min: u32) -> Vec<u32> {
        self.heights.iter().map(|&h| l_min + h).collect()
    }
}

/// Exact Kraft sum `Sum_i D^-l_i`.
pub fn kraft_sum(lengths: &[u32], radix: Radix) -> BigRational {
    let mut total = WidthValue::zero();
    for &l in lengths {
        total = total.add(&WidthValue::power(radix, -i64::from(l)), radix);
    }
    total.to_rational(radix)
}
