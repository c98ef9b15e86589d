//! Brute-force references for testing.
//!
//! These are correctness anchors, deliberately naive and guard-railed; the
//! production solvers never call them. They also back the hidden `oracle`
//! CLI subcommand used when eyeballing small instances.

use num::{BigInt, BigRational, Integer, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{Radix, WeightVector};
use crate::packmerge::CoinInstance;
use crate::solver::CodingProblem;

const MAX_ORACLE_SYMBOLS: usize = 10;
const MAX_ORACLE_LEN: u32 = 6;
const MAX_ORACLE_COINS: usize = 20;

/// Exhaustive minimum of the coding objective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeOracle {
    /// Exact minimum penalty, or `None` when no Kraft-equality vector exists
    /// within the bounds.
    pub min_penalty: Option<BigRational>,
    /// Every optimal nondecreasing length vector (sorted-symbol order,
    /// including dummies).
    pub optimal_lengths: Vec<Vec<u32>>,
}

/// Enumerates all nondecreasing length vectors in `[l_min, l_max]^n` with
/// Kraft sum exactly 1 and returns the exact minimum of
/// `Sum_i p_i phi(l_i - l_min)` together with every argmin.
///
/// Nondecreasing vectors suffice: weights are sorted nonincreasing, so any
/// optimal vector can be resorted without changing the objective.
pub fn brute_force_code(problem: &CodingProblem) -> Result<CodeOracle> {
    let n = problem.weights().n_padded();
    let bounds = problem.bounds();
    if n > MAX_ORACLE_SYMBOLS || bounds.l_max() > MAX_ORACLE_LEN {
        return Err(Error::OracleTooLarge(format!(
            "{n} symbols with l_max {} exceeds {MAX_ORACLE_SYMBOLS} symbols / l_max {MAX_ORACLE_LEN}",
            bounds.l_max()
        )));
    }
    let d = u128::from(problem.radix().get());
    let unit_exp = bounds.l_max();
    // Kraft target D^l_max in units of D^-l_max; guard the power.
    let mut target: u128 = 1;
    for _ in 0..unit_exp {
        target = target
            .checked_mul(d)
            .ok_or_else(|| Error::OracleTooLarge("radix too large".into()))?;
    }
    let unit_of = |l: u32| -> u128 { d.pow(unit_exp - l) };

    // Scale weights and penalty values to integers once.
    let mut weight_scale = BigInt::one();
    for w in problem.weights().sorted() {
        weight_scale = weight_scale.lcm(w.denom());
    }
    let weights: Vec<BigInt> = problem
        .weights()
        .sorted()
        .iter()
        .map(|w| (w * &weight_scale).to_integer())
        .collect();
    let mut phi_scale = BigInt::one();
    for delta in 0..=bounds.span() {
        phi_scale = phi_scale.lcm(problem.table().phi(delta).denom());
    }
    let phi: Vec<BigInt> = (0..=bounds.span())
        .map(|delta| (problem.table().phi(delta) * &phi_scale).to_integer())
        .collect();

    struct Search<'a> {
        n: usize,
        l_min: u32,
        l_max: u32,
        unit_of: &'a dyn Fn(u32) -> u128,
        target: u128,
        weights: &'a [BigInt],
        phi: &'a [BigInt],
        best: Option<BigInt>,
        argmins: Vec<Vec<u32>>,
        current: Vec<u32>,
    }

    impl Search<'_> {
        fn go(&mut self, pos: usize, floor: u32, kraft: u128, cost: BigInt) {
            if kraft > self.target {
                return;
            }
            if pos == self.n {
                if kraft != self.target {
                    return;
                }
                match &self.best {
                    Some(b) if cost > *b => {}
                    Some(b) if cost == *b => self.argmins.push(self.current.clone()),
                    _ => {
                        self.best = Some(cost);
                        self.argmins = vec![self.current.clone()];
                    }
                }
                return;
            }
            let remaining = (self.n - pos) as u128;
            // Largest possible remaining contribution: everything at `floor`.
            if kraft + remaining * (self.unit_of)(floor) < self.target {
                return;
            }
            // Smallest possible: everything at l_max.
            if kraft + remaining * (self.unit_of)(self.l_max) > self.target {
                return;
            }
            for l in floor..=self.l_max {
                let cost_here =
                    &cost + &self.weights[pos] * &self.phi[(l - self.l_min) as usize];
                if let Some(b) = &self.best {
                    if cost_here > *b {
                        // phi is nondecreasing in l and weights are sorted,
                        // but a longer l for this symbol can still free
                        // width; only prune the exact-cost comparison per
                        // branch, not the loop.
                    }
                }
                self.current.push(l);
                self.go(pos + 1, l, kraft + (self.unit_of)(l), cost_here);
                self.current.pop();
            }
        }
    }

    let mut search = Search {
        n,
        l_min: bounds.l_min(),
        l_max: bounds.l_max(),
        unit_of: &unit_of,
        target,
        weights: &weights,
        phi: &phi,
        best: None,
        argmins: Vec::new(),
        current: Vec::with_capacity(n),
    };
    search.go(0, bounds.l_min(), 0, BigInt::zero());

    let value_scale = &weight_scale * &phi_scale;
    Ok(CodeOracle {
        min_penalty: search
            .best
            .map(|b| BigRational::new(b, value_scale.clone())),
        optimal_lengths: search.argmins,
    })
}

/// Exhaustive subset check of the Coin Collector objective: the exact
/// minimum weight over all `2^m` subsets whose widths sum to the target, or
/// `None` when no subset does.
pub fn brute_force_cc(instance: &CoinInstance) -> Result<Option<BigRational>> {
    let m = instance.coins.len();
    if m > MAX_ORACLE_COINS {
        return Err(Error::OracleTooLarge(format!(
            "{m} coins exceeds {MAX_ORACLE_COINS}"
        )));
    }
    // Re-express widths as integers in units of the smallest coin width.
    let mut exps = Vec::with_capacity(m);
    for coin in &instance.coins {
        let e = coin
            .width
            .as_unit_power()
            .ok_or(Error::NonPowerWidth { id: coin.id })?;
        exps.push(e);
    }
    let e_min = exps.iter().copied().min().unwrap_or(0);
    let d = u128::from(instance.radix.get());
    let unit = |e: i64| -> Result<u128> {
        let shift = u32::try_from(e - e_min)
            .map_err(|_| Error::OracleTooLarge("width spread too large".into()))?;
        d.checked_pow(shift)
            .ok_or_else(|| Error::OracleTooLarge("width spread too large".into()))
    };
    let units: Vec<u128> = exps.iter().map(|&e| unit(e)).collect::<Result<_>>()?;
    let target = match instance.total_width.units_at(instance.radix, e_min) {
        Some(t) => match t.to_u128() {
            Some(t) => t,
            None => return Err(Error::OracleTooLarge("target too large".into())),
        },
        // Finer than the smallest coin: unreachable by any subset.
        None => return Ok(None),
    };

    let mut scale = BigInt::one();
    for coin in &instance.coins {
        scale = scale.lcm(coin.weight.denom());
    }
    let weights: Vec<BigInt> = instance
        .coins
        .iter()
        .map(|c| (&c.weight * &scale).to_integer())
        .collect();

    let mut best: Option<BigInt> = None;
    for mask in 0u32..(1u32 << m) {
        let mut width: u128 = 0;
        for (i, u) in units.iter().enumerate() {
            if mask & (1 << i) != 0 {
                width += u;
            }
        }
        if width != target {
            continue;
        }
        let mut weight = BigInt::zero();
        for (i, w) in weights.iter().enumerate() {
            if mask & (1 << i) != 0 {
                weight += w;
            }
        }
        if best.as_ref().is_none_or(|b| weight < *b) {
            best = Some(weight);
        }
    }
    Ok(best.map(|b| BigRational::new(b, scale)))
}

/// Plain D-ary Huffman lengths via the two-queue merge, used as the oracle
/// for trivial bounds with the linear penalty. Input must already be padded;
/// the returned lengths align with `weights.sorted()`. Only the expected
/// length is contractual; tie handling picks one specific optimal tree
/// (leaves are preferred over packages on equal weight).
pub fn reference_huffman(weights: &WeightVector, radix: Radix) -> Vec<u32> {
    let n = weights.n_padded();
    if n == 1 {
        return vec![0];
    }
    debug_assert_eq!((n - 1) % (radix.get() as usize - 1), 0, "padded input");

    let mut scale = BigInt::one();
    for w in weights.sorted() {
        scale = scale.lcm(w.denom());
    }
    // Ascending weights: reverse of the sorted vector.
    let asc: Vec<BigInt> = weights
        .sorted()
        .iter()
        .rev()
        .map(|w| (w * &scale).to_integer())
        .collect();

    struct Package {
        weight: BigInt,
        members: Vec<usize>, // ascending-order leaf indexes
    }
    let mut depths = vec![0u32; n];
    let mut leaves = std::collections::VecDeque::from_iter(0..n);
    let mut packages: std::collections::VecDeque<Package> = std::collections::VecDeque::new();
    let merges = (n - 1) / (radix.get() as usize - 1);
    for _ in 0..merges {
        let mut weight = BigInt::zero();
        let mut members = Vec::new();
        for _ in 0..radix.get() {
            let take_leaf = match (leaves.front(), packages.front()) {
                (Some(&l), Some(p)) => asc[l] <= p.weight,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => unreachable!("padded merge never starves"),
            };
            if take_leaf {
                let l = leaves.pop_front().unwrap();
                weight += &asc[l];
                members.push(l);
            } else {
                let p = packages.pop_front().unwrap();
                weight += p.weight;
                members.extend(p.members);
            }
        }
        for &l in &members {
            depths[l] += 1;
        }
        packages.push_back(Package { weight, members });
    }
    debug_assert!(leaves.is_empty() && packages.len() == 1);
    depths.reverse(); // back to nonincreasing-weight order
    depths
}
