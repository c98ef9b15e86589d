//! Reduction of the bounded-length coding problem to a Coin Collector
//! instance, plus recovery of the optimal length vector.
//!
//! Every grid node `(i, l)` stands for the `l`-th digit of symbol `i`'s
//! codeword, with width `D^-l` (its share of the Kraft sum) and weight
//! `p_i * (phi(l - l_min) - phi(l - l_min - 1))` (its share of the penalty).
//! Picking a minimum-weight nodeset of total width
//! `(n - D^l_min) / (D - 1) * D^-l_min` yields an optimal length vector.

use std::cmp::Ordering;
use std::ops::Range;

use num::{BigInt, BigRational, BigUint, Integer, One, Zero};

use crate::error::{Error, Result};
use crate::model::{
    kraft_sum, LengthBounds, Node, NodeSet, Penalty, PenaltyTable, Radix, WeightVector, WidthValue,
};
use crate::packmerge::{run_engine, ClassSource, Coin, CoinInstance, Item, NodeList, RunStats};

/// A fully validated instance: weights sorted and padded, bounds feasible,
/// penalty table materialized over the used range. Immutable once built.
#[derive(Debug, Clone)]
pub struct CodingProblem {
    weights: WeightVector,
    radix: Radix,
    bounds: LengthBounds,
    penalty: Penalty,
    table: PenaltyTable,
}

impl CodingProblem {
    pub fn new(
        weights: &[BigRational],
        radix: Radix,
        bounds: LengthBounds,
        penalty: Penalty,
    ) -> Result<CodingProblem> {
        let wv = WeightVector::new(weights, radix)?;
        CodingProblem::from_weight_vector(wv, radix, bounds, penalty)
    }

    /// Builds a problem from an already padded weight vector (the fringe
    /// sweep reuses one vector across windows).
    pub fn from_weight_vector(
        weights: WeightVector,
        radix: Radix,
        bounds: LengthBounds,
        penalty: Penalty,
    ) -> Result<CodingProblem> {
        check_capacity(weights.n_padded() as u64, radix, bounds)?;
        let table = penalty.table(bounds.l_min(), radix, bounds.span())?;
        Ok(CodingProblem {
            weights,
            radix,
            bounds,
            penalty,
            table,
        })
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn radix(&self) -> Radix {
        self.radix
    }

    pub fn bounds(&self) -> LengthBounds {
        self.bounds
    }

    pub fn penalty(&self) -> &Penalty {
        &self.penalty
    }

    pub fn table(&self) -> &PenaltyTable {
        &self.table
    }
}

/// Kraft-equality feasibility: the padded symbol count must fit between
/// `D^l_min` and `D^l_max`, exactly hitting `D^l_min` when the bounds pin a
/// single length.
fn check_capacity(n_padded: u64, radix: Radix, bounds: LengthBounds) -> Result<()> {
    let l_min = bounds.l_min();
    let l_max = bounds.l_max();
    if l_min == l_max {
        if cmp_power_vs(radix, l_min, n_padded) != Ordering::Equal {
            return Err(Error::ExactCapacityRequired {
                n_padded,
                len: l_min,
                required: pow_display(radix, l_min),
            });
        }
        return Ok(());
    }
    if cmp_power_vs(radix, l_min, n_padded) == Ordering::Greater {
        return Err(Error::BelowMinCapacity {
            n_padded,
            l_min,
            capacity: pow_display(radix, l_min),
        });
    }
    if cmp_power_vs(radix, l_max, n_padded) == Ordering::Less {
        return Err(Error::AboveMaxCapacity {
            n_padded,
            l_max,
            capacity: pow_display(radix, l_max),
        });
    }
    Ok(())
}

/// Compares `D^exp` with `n` without materializing huge powers.
fn cmp_power_vs(radix: Radix, exp: u32, n: u64) -> Ordering {
    let d = u128::from(radix.get());
    let n = u128::from(n);
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(d);
        if acc > n {
            return Ordering::Greater;
        }
    }
    acc.cmp(&n)
}

fn pow_display(radix: Radix, exp: u32) -> String {
    if exp <= 96 {
        radix.pow(exp).to_string()
    } else {
        format!("{}^{}", radix.get(), exp)
    }
}

/// Weight of grid node `(symbol, level)`:
/// `p_symbol * (phi(level - l_min) - phi(level - l_min - 1))`.
/// `symbol` indexes the sorted, padded weight vector. Panics outside the grid.
pub fn node_weight(symbol: usize, level: u32, problem: &CodingProblem) -> BigRational {
    let bounds = problem.bounds();
    assert!(symbol < problem.weights().n_padded(), "symbol outside grid");
    assert!(
        level > bounds.l_min() && level <= bounds.l_max(),
        "level outside grid"
    );
    let delta = level - bounds.l_min();
    &problem.weights().sorted()[symbol] * problem.table().diff(delta)
}

/// Target width of the Coin Collector reduction:
/// `(n_padded - D^l_min) / (D - 1) * D^-l_min`.
pub fn total_width(n_padded: u64, radix: Radix, l_min: u32) -> Result<WidthValue> {
    if cmp_power_vs(radix, l_min, n_padded) == Ordering::Greater {
        return Err(Error::BelowMinCapacity {
            n_padded,
            l_min,
            capacity: pow_display(radix, l_min),
        });
    }
    let numer = BigUint::from(n_padded) - radix.pow(l_min);
    let (q, r) = numer.div_rem(&BigUint::from(radix.get() - 1));
    debug_assert!(r.is_zero(), "requires n_padded == 1 (mod D-1)");
    Ok(WidthValue::new(radix, q, i64::from(l_min)))
}

/// Materializes the full grid as a generic Coin Collector instance: one coin
/// per node, id `level * (n_padded + 1) + symbol` so that same-width coins
/// order by symbol index.
pub fn build_instance(problem: &CodingProblem) -> Result<CoinInstance> {
    let bounds = problem.bounds();
    let wv = problem.weights();
    let n = wv.n_padded();
    let stride = n as u64 + 1;
    let mut coins = Vec::with_capacity(n * bounds.span() as usize);
    for level in bounds.l_min() + 1..=bounds.l_max() {
        let diff = problem.table().diff(level - bounds.l_min());
        for symbol in 0..n {
            coins.push(Coin {
                id: u64::from(level) * stride + symbol as u64,
                width: WidthValue::power(problem.radix(), -i64::from(level)),
                weight: &wv.sorted()[symbol] * &diff,
            });
        }
    }
    let total = total_width(n as u64, problem.radix(), bounds.l_min())?;
    Ok(CoinInstance {
        radix: problem.radix(),
        coins,
        total_width: total,
    })
}

/// Length vector (sorted order, including dummies) from a valid nodeset:
/// `l_i = l_min + column_height_i`.
pub fn recover_lengths(nodeset: &NodeSet, problem: &CodingProblem) -> Vec<u32> {
    nodeset.to_lengths(problem.bounds().l_min())
}

/// Optimal code for a [`CodingProblem`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    /// Codeword lengths in caller order; dummies stripped.
    pub lengths: Vec<u32>,
    /// Lengths in sorted order including dummies; nondecreasing, Kraft sum
    /// exactly 1.
    pub padded_lengths: Vec<u32>,
    /// `Sum_i p_i * phi(l_i - l_min)`, exact.
    pub penalty_value: BigRational,
    /// Total weight `mu(N)` of the selected nodeset, exact.
    pub nodeset_weight: BigRational,
    /// Kraft sum of the real (non-dummy) codewords; at most 1.
    pub kraft: BigRational,
}

/// Instrumentation gathered during a solve.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Maximum number of live elements in any width class of any
    /// package-merge run.
    pub peak_live_elements: usize,
    /// (parent area, summed child area) per recursion step of the
    /// linear-space solver; empty for the full solver.
    pub recursion_areas: Vec<(u64, u64)>,
}

/// Scaled-integer view of a problem: node weights become exact `BigInt`s so
/// the engine never touches rationals on the hot path.
pub(crate) struct Prepared {
    pub weights_scaled: Vec<BigInt>,
    pub diffs_scaled: Vec<BigInt>,
    /// Node weight denominator: true mu = scaled / mu_scale.
    pub mu_scale: BigInt,
    pub phi_scaled: Vec<BigInt>,
    /// Penalty denominator: true value = scaled / value_scale.
    pub value_scale: BigInt,
    pub rho_total: WidthValue,
    pub id_stride: i128,
}

impl Prepared {
    pub(crate) fn new(problem: &CodingProblem) -> Result<Prepared> {
        let wv = problem.weights();
        let table = problem.table();
        let span = problem.bounds().span();

        let mut weight_scale = BigInt::one();
        for w in wv.sorted() {
            weight_scale = weight_scale.lcm(w.denom());
        }
        let weights_scaled: Vec<BigInt> = wv
            .sorted()
            .iter()
            .map(|w| (w * &weight_scale).to_integer())
            .collect();

        let diffs: Vec<BigRational> = (1..=span).map(|d| table.diff(d)).collect();
        let mut diff_scale = BigInt::one();
        for d in &diffs {
            diff_scale = diff_scale.lcm(d.denom());
        }
        let diffs_scaled: Vec<BigInt> = diffs.iter().map(|d| (d * &diff_scale).to_integer()).collect();

        let mut phi_scale = BigInt::one();
        for delta in 0..=span {
            phi_scale = phi_scale.lcm(table.phi(delta).denom());
        }
        let phi_scaled: Vec<BigInt> = (0..=span)
            .map(|d| (table.phi(d) * &phi_scale).to_integer())
            .collect();

        let rho_total = total_width(
            wv.n_padded() as u64,
            problem.radix(),
            problem.bounds().l_min(),
        )?;

        Ok(Prepared {
            weights_scaled,
            diffs_scaled,
            mu_scale: &weight_scale * &diff_scale,
            phi_scaled,
            value_scale: &weight_scale * &phi_scale,
            rho_total,
            id_stride: wv.n_padded() as i128 + 1,
        })
    }
}

/// Lazy per-level coin stream over a rectangular grid region. Levels are
/// emitted smallest-width first; within a level, symbols are emitted in
/// descending index order, which is exactly (weight ascending, rank
/// descending) because the weight vector is sorted nonincreasing.
pub(crate) struct GridSource<'a, P, F: FnMut(u32, u32) -> P> {
    weights: &'a [BigInt],
    diffs: &'a [BigInt],
    l_min: u32,
    symbols: Range<u32>,
    exponents: Vec<i64>,
    id_stride: i128,
    seed: F,
}

impl<'a, P, F: FnMut(u32, u32) -> P> GridSource<'a, P, F> {
    pub(crate) fn new(
        prep: &'a Prepared,
        l_min: u32,
        symbols: Range<u32>,
        levels: Range<u32>,
        seed: F,
    ) -> Self {
        let exponents: Vec<i64> = levels.rev().map(|l| -i64::from(l)).collect();
        GridSource {
            weights: &prep.weights_scaled,
            diffs: &prep.diffs_scaled,
            l_min,
            symbols,
            exponents,
            id_stride: prep.id_stride,
            seed,
        }
    }
}

impl<'a, P, F: FnMut(u32, u32) -> P> ClassSource<P> for GridSource<'a, P, F> {
    fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    fn take(&mut self, e: i64) -> Vec<Item<P>> {
        let level = (-e) as u32;
        let delta = level - self.l_min;
        let factor = &self.diffs[delta as usize - 1];
        let mut items = Vec::with_capacity(self.symbols.len());
        for symbol in self.symbols.clone().rev() {
            items.push(Item {
                weight: &self.weights[symbol as usize] * factor,
                rank: i128::from(level) * self.id_stride + i128::from(symbol),
                payload: (self.seed)(symbol, level),
            });
        }
        items
    }
}

/// Solves the problem with the full-memory package-merge pass.
///
/// The output is optimal among all Kraft-equality length vectors within the
/// bounds, and has minimum height among the monotone optima. Dummy symbols
/// participate internally but are stripped from the reported lengths.
pub fn solve(problem: &CodingProblem) -> Result<SolveResult> {
    solve_with_stats(problem).map(|(result, _)| result)
}

pub fn solve_with_stats(problem: &CodingProblem) -> Result<(SolveResult, SolveStats)> {
    let prep = Prepared::new(problem)?;
    let mut stats = RunStats::default();
    let (nodes, mu_scaled) = if prep.rho_total.is_zero() {
        (Vec::new(), BigInt::zero())
    } else {
        let bounds = problem.bounds();
        let mut source = GridSource::new(
            &prep,
            bounds.l_min(),
            0..problem.weights().n_padded() as u32,
            bounds.l_min() + 1..bounds.l_max() + 1,
            |symbol, level| NodeList(vec![Node { symbol, level }]),
        );
        let outcome = run_engine(problem.radix(), &prep.rho_total, &mut source, &mut stats)?;
        let nodes: Vec<Node> = outcome.picked.into_iter().flat_map(|p| p.0).collect();
        (nodes, outcome.weight)
    };
    let result = finish(problem, &prep, &nodes, mu_scaled);
    Ok((
        result,
        SolveStats {
            peak_live_elements: stats.peak_live,
            recursion_areas: Vec::new(),
        },
    ))
}

/// Turns selected nodes into the final report; shared by both solvers.
pub(crate) fn finish(
    problem: &CodingProblem,
    prep: &Prepared,
    nodes: &[Node],
    mu_scaled: BigInt,
) -> SolveResult {
    let bounds = problem.bounds();
    let wv = problem.weights();
    let radix = problem.radix();

    let nodeset = NodeSet::from_nodes(wv.n_padded(), bounds, nodes);
    let padded_lengths = nodeset.to_lengths(bounds.l_min());
    assert!(
        padded_lengths.windows(2).all(|w| w[0] <= w[1]),
        "solver output must be monotone"
    );
    debug_assert!(kraft_sum(&padded_lengths, radix).is_one());

    let mut penalty_scaled = BigInt::zero();
    for (i, &l) in padded_lengths.iter().take(wv.n_real()).enumerate() {
        penalty_scaled += &prep.weights_scaled[i] * &prep.phi_scaled[(l - bounds.l_min()) as usize];
    }
    let penalty_value = BigRational::new(penalty_scaled, prep.value_scale.clone());
    let nodeset_weight = BigRational::new(mu_scaled, prep.mu_scale.clone());
    debug_assert_eq!(
        penalty_value,
        &nodeset_weight + problem.table().phi(0) * wv.total(),
        "penalty must equal nodeset weight plus phi(0) * total weight"
    );

    let real_lengths = &padded_lengths[..wv.n_real()];
    let kraft = kraft_sum(real_lengths, radix);
    let lengths = wv.to_caller_order(&padded_lengths);

    SolveResult {
        lengths,
        padded_lengths,
        penalty_value,
        nodeset_weight,
        kraft,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packmerge::cc_solve;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn radix(d: u32) -> Radix {
        Radix::new(d).unwrap()
    }

    fn uniform(n: usize) -> Vec<BigRational> {
        vec![rat(1, n as i64); n]
    }

    /// n=7, D=3, bounds [1,4]; the square-in-delta table makes per-level
    /// weight factors 1, 3, 5.
    fn seven_symbol_problem(penalty: Penalty) -> CodingProblem {
        CodingProblem::new(
            &uniform(7),
            radix(3),
            LengthBounds::new(1, 4).unwrap(),
            penalty,
        )
        .unwrap()
    }

    fn delta_square_table() -> Penalty {
        Penalty::Table(vec![rat(0, 1), rat(1, 1), rat(4, 1), rat(9, 1)])
    }

    #[test]
    fn node_weight_follows_penalty_differences() {
        let problem = seven_symbol_problem(delta_square_table());
        let p = rat(1, 7);
        assert_eq!(node_weight(1, 2, &problem), p.clone());
        assert_eq!(node_weight(1, 3, &problem), rat(3, 1) * &p);
        assert_eq!(node_weight(4, 4, &problem), rat(5, 1) * &p);

        let linear = seven_symbol_problem(Penalty::Linear);
        for level in 2..=4 {
            assert_eq!(node_weight(2, level, &linear), p.clone());
        }
    }

    #[test]
    fn total_width_examples() {
        let w = total_width(21, radix(3), 2).unwrap();
        assert_eq!(w.to_rational(radix(3)), rat(2, 3));
        let w = total_width(7, radix(3), 1).unwrap();
        assert_eq!(w.to_rational(radix(3)), rat(2, 3));
        let w = total_width(9, radix(3), 2).unwrap();
        assert!(w.is_zero());
        assert!(matches!(
            total_width(2, radix(3), 2),
            Err(Error::BelowMinCapacity { .. })
        ));
    }

    #[test]
    fn grid_instance_shape() {
        let problem = seven_symbol_problem(delta_square_table());
        let instance = build_instance(&problem).unwrap();
        assert_eq!(instance.coins.len(), 21);
        let r = radix(3);
        for level in 2..=4u32 {
            let level_coins: Vec<_> = instance
                .coins
                .iter()
                .filter(|c| c.width == WidthValue::power(r, -i64::from(level)))
                .collect();
            assert_eq!(level_coins.len(), 7);
            let factor = rat(i64::from(2 * (level - 1) - 1), 1);
            for (sym, coin) in level_coins.iter().enumerate() {
                assert_eq!(coin.weight, &factor * rat(1, 7));
                assert_eq!(coin.id % 8, sym as u64);
            }
        }
        assert_eq!(instance.total_width.to_rational(r), rat(2, 3));
    }

    #[test]
    fn empty_grid_when_bounds_pin_lengths() {
        let problem = CodingProblem::new(
            &uniform(9),
            radix(3),
            LengthBounds::new(2, 2).unwrap(),
            Penalty::Linear,
        )
        .unwrap();
        let instance = build_instance(&problem).unwrap();
        assert!(instance.coins.is_empty());
        assert!(instance.total_width.is_zero());
        let result = solve(&problem).unwrap();
        assert_eq!(result.lengths, vec![2; 9]);
        assert!(result.penalty_value.is_zero());
    }

    #[test]
    fn seven_uniform_ternary() {
        let problem = seven_symbol_problem(Penalty::Linear);
        let result = solve(&problem).unwrap();
        assert_eq!(result.lengths, vec![1, 2, 2, 2, 2, 2, 2]);
        // penalty is sum p (l - 1); expected length 13/7 is one more.
        assert_eq!(result.penalty_value, rat(6, 7));
        assert_eq!(result.kraft, rat(1, 1));
    }

    #[test]
    fn classic_binary_instances() {
        let weights = vec![rat(8, 16), rat(4, 16), rat(2, 16), rat(1, 16), rat(1, 16)];
        let problem = CodingProblem::new(
            &weights,
            radix(2),
            LengthBounds::new(0, 8).unwrap(),
            Penalty::Linear,
        )
        .unwrap();
        let result = solve(&problem).unwrap();
        assert_eq!(result.lengths, vec![1, 2, 3, 4, 4]);
        assert_eq!(result.penalty_value, rat(15, 8));

        let capped = CodingProblem::new(
            &weights,
            radix(2),
            LengthBounds::new(0, 3).unwrap(),
            Penalty::Linear,
        )
        .unwrap();
        let result = solve(&capped).unwrap();
        assert_eq!(result.lengths, vec![1, 3, 3, 3, 3]);
        assert_eq!(result.penalty_value, rat(2, 1));
    }

    #[test]
    fn caller_order_is_restored() {
        // Unsorted input; the report must line up with what was passed in.
        let weights = vec![rat(1, 16), rat(8, 16), rat(2, 16), rat(4, 16), rat(1, 16)];
        let problem = CodingProblem::new(
            &weights,
            radix(2),
            LengthBounds::new(0, 8).unwrap(),
            Penalty::Linear,
        )
        .unwrap();
        let result = solve(&problem).unwrap();
        assert_eq!(result.lengths, vec![4, 1, 3, 2, 4]);
    }

    #[test]
    fn dummy_padding_is_invisible_to_callers() {
        // Six ternary weights pad to seven; the dummy takes the deep slot.
        let problem = CodingProblem::new(
            &uniform(6),
            radix(3),
            LengthBounds::new(1, 4).unwrap(),
            Penalty::Linear,
        )
        .unwrap();
        let result = solve(&problem).unwrap();
        assert_eq!(result.lengths.len(), 6);
        assert_eq!(result.padded_lengths.len(), 7);
        assert!(kraft_sum(&result.padded_lengths, radix(3)).is_one());
        assert!(result.kraft < BigRational::one());
    }

    #[test]
    fn single_symbol_needs_min_zero() {
        let one = vec![rat(3, 1)];
        let problem = CodingProblem::new(
            &one,
            radix(2),
            LengthBounds::new(0, 0).unwrap(),
            Penalty::Linear,
        )
        .unwrap();
        let result = solve(&problem).unwrap();
        assert_eq!(result.lengths, vec![0]);
        assert_eq!(result.kraft, rat(1, 1));

        assert!(matches!(
            CodingProblem::new(
                &one,
                radix(2),
                LengthBounds::new(1, 1).unwrap(),
                Penalty::Linear
            ),
            Err(Error::ExactCapacityRequired { .. })
        ));
    }

    #[test]
    fn infeasible_bounds_are_named() {
        let two = uniform(2);
        assert!(matches!(
            CodingProblem::new(
                &two,
                radix(2),
                LengthBounds::new(2, 2).unwrap(),
                Penalty::Linear
            ),
            Err(Error::ExactCapacityRequired { n_padded: 2, len: 2, .. })
        ));
        let many = uniform(9);
        assert!(matches!(
            CodingProblem::new(
                &many,
                radix(2),
                LengthBounds::new(0, 3).unwrap(),
                Penalty::Linear
            ),
            Err(Error::AboveMaxCapacity { .. })
        ));
        let few = uniform(3);
        assert!(matches!(
            CodingProblem::new(
                &few,
                radix(2),
                LengthBounds::new(2, 4).unwrap(),
                Penalty::Linear
            ),
            Err(Error::BelowMinCapacity { .. })
        ));
    }

    #[test]
    fn recover_lengths_matches_fig_shapes() {
        let problem = seven_symbol_problem(Penalty::Linear);
        let bounds = problem.bounds();
        let nodes: Vec<Node> = (1..7).map(|symbol| Node { symbol, level: 2 }).collect();
        let ns = NodeSet::from_nodes(7, bounds, &nodes);
        assert_eq!(recover_lengths(&ns, &problem), vec![1, 2, 2, 2, 2, 2, 2]);

        let empty = NodeSet::empty(7);
        assert_eq!(recover_lengths(&empty, &problem), vec![1; 7]);

        let full: Vec<Node> = (0..7)
            .flat_map(|symbol| (2..=4).map(move |level| Node { symbol, level }))
            .collect();
        let ns = NodeSet::from_nodes(7, bounds, &full);
        assert_eq!(recover_lengths(&ns, &problem), vec![4; 7]);
    }

    #[test]
    fn lazy_grid_agrees_with_materialized_instance() {
        // The internal scaled path and the public instance path must pick
        // node sets with identical weight.
        for penalty in [Penalty::Linear, Penalty::Quadratic, delta_square_table()] {
            let problem = seven_symbol_problem(penalty);
            let by_solver = solve(&problem).unwrap();
            let instance = build_instance(&problem).unwrap();
            let by_cc = cc_solve(&instance).unwrap();
            assert_eq!(by_cc.weight, by_solver.nodeset_weight);
            // Decode ids back into nodes and compare the recovered lengths.
            let stride = problem.weights().n_padded() as u64 + 1;
            let nodes: Vec<Node> = by_cc
                .coin_ids
                .iter()
                .map(|id| Node {
                    symbol: (id % stride) as u32,
                    level: (id / stride) as u32,
                })
                .collect();
            let ns = NodeSet::from_nodes(7, problem.bounds(), &nodes);
            assert_eq!(recover_lengths(&ns, &problem), by_solver.padded_lengths);
        }
    }
}
