//! Generic D-ary Coin Collector solver (package-merge).
//!
//! Coins have widths that are integer powers of the radix and arbitrary
//! exact rational weights. [`cc_solve`] selects a minimum-weight subset whose
//! widths sum exactly to a target. Width classes are processed from the
//! smallest power upward: at each class the base-D digit of the remaining
//! target is paid with the lightest live elements, the survivors are packaged
//! D at a time into the next class, and the fewer-than-D leftovers are
//! discarded.
//!
//! Tie rules are fixed and deterministic: among equal weights the highest
//! coin id is preferred, and a package ranks below every coin and below any
//! earlier package of equal weight and width. The coding reduction depends on
//! these rules to produce monotone nodesets.

use std::collections::BTreeMap;
use std::collections::HashSet;

use num::{BigInt, BigRational, BigUint, Integer, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{Radix, WidthValue};

/// One coin: a unique orderable id, a width in `D^Z`, and an exact weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coin {
    pub id: u64,
    pub width: WidthValue,
    pub weight: BigRational,
}

/// A Coin Collector instance: coins plus the exact target total width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoinInstance {
    pub radix: Radix,
    pub coins: Vec<Coin>,
    pub total_width: WidthValue,
}

/// Minimum-weight subset reaching the target width exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoinSolution {
    /// Ids of the selected coins, ascending.
    pub coin_ids: Vec<u64>,
    pub weight: BigRational,
}

/// Region classification used by the attribute-tracking pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoinClass {
    Low,
    Mid,
    High,
}

/// The four attributes retained per package in the O(n)-space pass:
/// total weight, total width, the count of mid-row members, and the width
/// contributed by members below the mid row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackageAttr {
    pub mu: BigRational,
    pub rho: WidthValue,
    pub nu: u64,
    pub psi: WidthValue,
}

impl PackageAttr {
    pub fn zero() -> PackageAttr {
        PackageAttr {
            mu: BigRational::zero(),
            rho: WidthValue::zero(),
            nu: 0,
            psi: WidthValue::zero(),
        }
    }
}

// ---------------------------------------------------------------------------
// Engine internals, shared with the coding reduction.
// ---------------------------------------------------------------------------

/// Contents carried by a live element; packages merge the contents of their
/// members.
pub(crate) trait Payload: Sized {
    fn merge(parts: Vec<Self>) -> Self;
}

/// Flat list of selected coin ids.
pub(crate) struct IdList(pub Vec<u64>);

impl Payload for IdList {
    fn merge(mut parts: Vec<Self>) -> Self {
        let mut base = parts.swap_remove(0).0;
        for p in parts {
            base.extend(p.0);
        }
        IdList(base)
    }
}

/// Flat list of selected grid nodes.
pub(crate) struct NodeList(pub Vec<crate::model::Node>);

impl Payload for NodeList {
    fn merge(mut parts: Vec<Self>) -> Self {
        let mut base = parts.swap_remove(0).0;
        for p in parts {
            base.extend(p.0);
        }
        NodeList(base)
    }
}

/// Constant-size attribute aggregate: `nu` members on the mid row and the
/// summed width of members below it, in units of `D^psi_ref`.
pub(crate) struct AttrPayload {
    pub nu: u64,
    pub psi_units: BigUint,
}

impl Payload for AttrPayload {
    fn merge(parts: Vec<Self>) -> Self {
        let mut nu = 0u64;
        let mut psi_units = BigUint::zero();
        for p in parts {
            nu += p.nu;
            psi_units += p.psi_units;
        }
        AttrPayload { nu, psi_units }
    }
}

/// A live element: a coin or a package of D same-width elements.
pub(crate) struct Item<P> {
    /// Exact weight, pre-scaled to an integer by the caller.
    pub weight: BigInt,
    /// Tie rank: coins carry their id, packages carry negative values from a
    /// decreasing counter. Higher rank is preferred among equal weights.
    pub rank: i128,
    pub payload: P,
}

/// `true` when `a` is selected before `b`: lighter first, then higher rank.
fn precedes<P>(a: &Item<P>, b: &Item<P>) -> bool {
    match a.weight.cmp(&b.weight) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => a.rank > b.rank,
    }
}

fn merge_items<P>(a: Vec<Item<P>>, b: Vec<Item<P>>) -> Vec<Item<P>> {
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ia = a.into_iter().peekable();
    let mut ib = b.into_iter().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (Some(x), Some(y)) => {
                if precedes(x, y) {
                    out.push(ia.next().unwrap());
                } else {
                    out.push(ib.next().unwrap());
                }
            }
            (Some(_), None) => {
                out.extend(ia);
                break;
            }
            (None, _) => {
                out.extend(ib);
                break;
            }
        }
    }
    out
}

/// Supplies the native coins of each width class, smallest exponent first.
pub(crate) trait ClassSource<P> {
    /// Ascending exponents at which native coins exist.
    fn exponents(&self) -> &[i64];
    /// Items at exponent `e`, already sorted by (weight asc, rank desc).
    fn take(&mut self, e: i64) -> Vec<Item<P>>;
}

/// Trivial source over pre-grouped items.
pub(crate) struct VecSource<P> {
    exponents: Vec<i64>,
    classes: BTreeMap<i64, Vec<Item<P>>>,
}

impl<P> VecSource<P> {
    pub(crate) fn new(mut classes: BTreeMap<i64, Vec<Item<P>>>) -> VecSource<P> {
        for items in classes.values_mut() {
            items.sort_by(|a, b| a.weight.cmp(&b.weight).then_with(|| b.rank.cmp(&a.rank)));
        }
        VecSource {
            exponents: classes.keys().copied().collect(),
            classes,
        }
    }
}

impl<P> ClassSource<P> for VecSource<P> {
    fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    fn take(&mut self, e: i64) -> Vec<Item<P>> {
        self.classes.remove(&e).unwrap_or_default()
    }
}

#[derive(Debug, Default)]
pub(crate) struct RunStats {
    /// Maximum number of live elements while processing any width class.
    pub peak_live: usize,
    /// (exponent, count) for every class where elements were extracted.
    pub extractions: Vec<(i64, u32)>,
}

pub(crate) struct EngineOutcome<P> {
    /// Payloads of the extracted elements.
    pub picked: Vec<P>,
    /// Total scaled weight of the extracted elements.
    pub weight: BigInt,
}

/// Runs package-merge over the class stream until the target is paid off.
pub(crate) fn run_engine<P: Payload, S: ClassSource<P>>(
    radix: Radix,
    total: &WidthValue,
    source: &mut S,
    stats: &mut RunStats,
) -> Result<EngineOutcome<P>> {
    let mut outcome = EngineOutcome {
        picked: Vec::new(),
        weight: BigInt::zero(),
    };
    if total.is_zero() {
        return Ok(outcome);
    }
    let exponents = source.exponents().to_vec();
    if exponents.is_empty() {
        return Err(Error::NoCoinSubset);
    }
    let e_start = exponents[0];
    // Every subset width is a multiple of the smallest coin width, so a
    // target with finer base-D digits is unreachable.
    let total_low = total.lowest_exponent().expect("total is nonzero");
    if total_low < e_start {
        return Err(Error::NoCoinSubset);
    }

    let d = radix.get() as usize;
    let d_big = BigUint::from(radix.get());
    // Remaining target, denominated in units of D^e for the current class e.
    let mut remaining = total
        .units_at(radix, e_start)
        .expect("total_low >= e_start");
    let mut cur: Vec<Item<P>> = Vec::new();
    let mut e = e_start;
    let mut exp_idx = 0usize;
    let mut next_package_rank: i128 = -1;

    loop {
        if exp_idx < exponents.len() && exponents[exp_idx] == e {
            cur = merge_items(cur, source.take(e));
            exp_idx += 1;
        }
        stats.peak_live = stats.peak_live.max(cur.len());

        let digit = (&remaining % &d_big).to_u32().expect("digit < D");
        let mut it = cur.into_iter();
        if digit > 0 {
            if it.len() < digit as usize {
                return Err(Error::NoCoinSubset);
            }
            for _ in 0..digit {
                let item = it.next().expect("length checked");
                outcome.weight += item.weight;
                outcome.picked.push(item.payload);
            }
            remaining -= BigUint::from(digit);
            stats.extractions.push((e, digit));
        }
        if remaining.is_zero() {
            return Ok(outcome);
        }

        // Package survivors D at a time; drop the short tail.
        let mut packages: Vec<Item<P>> = Vec::with_capacity(it.len() / d);
        loop {
            let chunk: Vec<Item<P>> = it.by_ref().take(d).collect();
            if chunk.len() < d {
                break;
            }
            let mut weight = BigInt::zero();
            let mut parts = Vec::with_capacity(d);
            for item in chunk {
                weight += item.weight;
                parts.push(item.payload);
            }
            packages.push(Item {
                weight,
                rank: next_package_rank,
                payload: P::merge(parts),
            });
            next_package_rank -= 1;
        }
        cur = packages;

        remaining /= &d_big; // the digit here is now zero, so this is exact
        e += 1;

        if cur.is_empty() {
            if exp_idx >= exponents.len() {
                return Err(Error::NoCoinSubset);
            }
            // Fast-forward through classes with nothing live; each skipped
            // digit of the target must be zero or nothing can pay it.
            while e < exponents[exp_idx] {
                if !(&remaining % &d_big).is_zero() {
                    return Err(Error::NoCoinSubset);
                }
                remaining /= &d_big;
                e += 1;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Public instance-level API.
// ---------------------------------------------------------------------------

struct PreparedCoins {
    /// Per-coin width exponent, aligned with `instance.coins`.
    exponents: Vec<i64>,
    /// Per-coin weight scaled to an integer, aligned with `instance.coins`.
    weights: Vec<BigInt>,
    /// Common denominator: true weight = scaled / weight_scale.
    weight_scale: BigInt,
}

fn prepare_coins(instance: &CoinInstance) -> Result<PreparedCoins> {
    let mut seen = HashSet::with_capacity(instance.coins.len());
    let mut exponents = Vec::with_capacity(instance.coins.len());
    for coin in &instance.coins {
        if !seen.insert(coin.id) {
            return Err(Error::DuplicateCoinId(coin.id));
        }
        let exp = coin
            .width
            .as_unit_power()
            .ok_or(Error::NonPowerWidth { id: coin.id })?;
        exponents.push(exp);
    }
    let mut weight_scale = BigInt::one();
    for coin in &instance.coins {
        weight_scale = weight_scale.lcm(coin.weight.denom());
    }
    let weights = instance
        .coins
        .iter()
        .map(|c| (&c.weight * &weight_scale).to_integer())
        .collect();
    Ok(PreparedCoins {
        exponents,
        weights,
        weight_scale,
    })
}

fn group_classes<P>(
    instance: &CoinInstance,
    prep: &PreparedCoins,
    mut payload: impl FnMut(usize) -> P,
) -> BTreeMap<i64, Vec<Item<P>>> {
    let mut classes: BTreeMap<i64, Vec<Item<P>>> = BTreeMap::new();
    for (idx, coin) in instance.coins.iter().enumerate() {
        classes.entry(prep.exponents[idx]).or_default().push(Item {
            weight: prep.weights[idx].clone(),
            rank: coin.id as i128,
            payload: payload(idx),
        });
    }
    classes
}

/// Solves the Coin Collector instance, returning the selected coin ids and
/// their exact total weight. Deterministic under the fixed tie rules.
pub fn cc_solve(instance: &CoinInstance) -> Result<CoinSolution> {
    cc_solve_internal(instance).map(|(sol, _)| sol)
}

pub(crate) fn cc_solve_internal(instance: &CoinInstance) -> Result<(CoinSolution, RunStats)> {
    let prep = prepare_coins(instance)?;
    let classes = group_classes(instance, &prep, |idx| IdList(vec![instance.coins[idx].id]));
    let mut source = VecSource::new(classes);
    let mut stats = RunStats::default();
    let outcome = run_engine(instance.radix, &instance.total_width, &mut source, &mut stats)?;
    let mut coin_ids: Vec<u64> = outcome.picked.into_iter().flat_map(|p| p.0).collect();
    coin_ids.sort_unstable();
    let weight = BigRational::new(outcome.weight, prep.weight_scale);
    Ok((CoinSolution { coin_ids, weight }, stats))
}

/// Same recursion as [`cc_solve`], but each element carries only the four
/// aggregate attributes, never its member list. Agrees with `cc_solve` on
/// `mu` and `rho` exactly; the classifier supplies each coin's `nu` and `psi`
/// contribution.
pub fn cc_solve_tracked(
    instance: &CoinInstance,
    mut classify: impl FnMut(&Coin) -> CoinClass,
) -> Result<PackageAttr> {
    if instance.total_width.is_zero() {
        return Ok(PackageAttr::zero());
    }
    let prep = prepare_coins(instance)?;
    let psi_ref = prep.exponents.iter().copied().min().unwrap_or(0);
    let d_big = instance.radix.to_biguint();
    let classes = group_classes(instance, &prep, |idx| {
        let coin = &instance.coins[idx];
        match classify(coin) {
            CoinClass::Low => AttrPayload {
                nu: 0,
                psi_units: BigUint::zero(),
            },
            CoinClass::Mid => AttrPayload {
                nu: 1,
                psi_units: BigUint::zero(),
            },
            CoinClass::High => AttrPayload {
                nu: 0,
                psi_units: d_big.pow((prep.exponents[idx] - psi_ref) as u32),
            },
        }
    });
    let mut source = VecSource::new(classes);
    let mut stats = RunStats::default();
    let outcome = run_engine(instance.radix, &instance.total_width, &mut source, &mut stats)?;
    let merged = AttrPayload::merge(outcome.picked);
    Ok(PackageAttr {
        mu: BigRational::new(outcome.weight, prep.weight_scale),
        rho: instance.total_width.clone(),
        nu: merged.nu,
        psi: WidthValue::new(instance.radix, merged.psi_units, -psi_ref),
    })
}
