//! O(n)-space solver.
//!
//! A first package-merge pass keeps only four attributes per element (weight,
//! width, mid-row member count, below-mid width), which pins down the middle
//! slice of the optimal nodeset by monotonicity. The remaining nodes live in
//! two disjoint sub-grids whose combined area is at most half the original,
//! so recursing on them reconstructs the full nodeset in linear space without
//! changing the asymptotic running time.

use std::ops::Range;

use num::{BigInt, BigUint, Zero};

use crate::error::Result;
use crate::model::{Node, Radix, WidthValue};
use crate::packmerge::{run_engine, AttrPayload, NodeList, PackageAttr, Payload, RunStats};
use crate::solver::{
    finish, solve_with_stats, CodingProblem, GridSource, Prepared, SolveResult, SolveStats,
};

/// Level spans at or below this are solved by the full member-tracking pass.
pub const BASE_LEVEL_SPAN: u32 = 2;

/// Rectangular sub-grid of the node grid. Both ranges are half-open; the
/// levels of the whole problem are `l_min+1 .. l_max+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridRegion {
    pub symbols: Range<u32>,
    pub levels: Range<u32>,
}

impl GridRegion {
    /// Splitting row: with the region playing `[l_min+1, l_max]`, this is
    /// `floor((l_max + l_min + 1) / 2)`.
    pub fn l_mid(&self) -> u32 {
        (self.levels.start + self.levels.end - 1) / 2
    }

    pub fn area(&self) -> u64 {
        self.symbols.len() as u64 * self.levels.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty() || self.levels.is_empty()
    }
}

/// The four disjoint pieces of an optimal nodeset relative to a region's mid
/// row: `rect_b` and `row_gamma` are fully determined rectangles; `region_a`
/// and `region_delta` must be re-solved with the given width targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub region_a: GridRegion,
    pub width_a: WidthValue,
    pub rect_b: GridRegion,
    pub width_b: WidthValue,
    pub row_gamma: GridRegion,
    pub width_gamma: WidthValue,
    pub region_delta: GridRegion,
    pub width_delta: WidthValue,
}

/// Splits a region according to the attributes of its optimal nodeset.
///
/// Panics if the attributes are inconsistent with the region (more mid-row
/// members than symbols, or widths that do not balance); those are internal
/// invariant violations, not user errors.
pub fn decompose(attrs: &PackageAttr, region: &GridRegion, radix: Radix) -> Decomposition {
    split_region(region, attrs.nu, &attrs.psi, &attrs.rho, radix)
}

fn split_region(
    region: &GridRegion,
    nu: u64,
    psi: &WidthValue,
    rho: &WidthValue,
    radix: Radix,
) -> Decomposition {
    assert!(
        nu <= region.symbols.len() as u64,
        "mid-row member count exceeds region symbols"
    );
    let n_nu = nu as u32;
    let l_mid = region.l_mid();
    let b_lo = region.symbols.end - n_nu;

    let region_a = GridRegion {
        symbols: region.symbols.start..b_lo,
        levels: region.levels.start..l_mid,
    };
    let rect_b = GridRegion {
        symbols: b_lo..region.symbols.end,
        levels: region.levels.start..l_mid,
    };
    let row_gamma = GridRegion {
        symbols: b_lo..region.symbols.end,
        levels: l_mid..l_mid + 1,
    };
    let region_delta = GridRegion {
        symbols: b_lo..region.symbols.end,
        levels: l_mid + 1..region.levels.end,
    };

    let width_b = if l_mid > region.levels.start {
        WidthValue::geometric_run(radix, region.levels.start, l_mid - 1).scale_by(nu, radix)
    } else {
        WidthValue::zero()
    };
    let width_gamma = WidthValue::multiple_of_power(radix, nu, -i64::from(l_mid));
    let width_delta = psi.clone();
    let spent = width_b.add(&width_gamma, radix).add(&width_delta, radix);
    let width_a = rho
        .checked_sub(&spent, radix)
        .expect("fixed rows must not exceed the solution width");

    Decomposition {
        region_a,
        width_a,
        rect_b,
        width_b,
        row_gamma,
        width_gamma,
        region_delta,
        width_delta,
    }
}

/// Solves the problem in O(n) space. The result is identical to
/// [`crate::solver::solve`] on every input: both passes run the same engine
/// with the same tie ranks, and the fixed rank scheme makes the selected
/// nodeset unique.
pub fn solve_linear_space(problem: &CodingProblem) -> Result<SolveResult> {
    solve_linear_space_with_stats(problem).map(|(result, _)| result)
}

pub fn solve_linear_space_with_stats(
    problem: &CodingProblem,
) -> Result<(SolveResult, SolveStats)> {
    if problem.bounds().span() <= BASE_LEVEL_SPAN {
        return solve_with_stats(problem);
    }
    let prep = Prepared::new(problem)?;
    if prep.rho_total.is_zero() {
        return solve_with_stats(problem);
    }
    let bounds = problem.bounds();
    let top = GridRegion {
        symbols: 0..problem.weights().n_padded() as u32,
        levels: bounds.l_min() + 1..bounds.l_max() + 1,
    };
    let target = prep.rho_total.clone();
    let mut nodes = Vec::new();
    let mut run_stats = RunStats::default();
    let mut areas = Vec::new();
    let mu_scaled = recurse(
        problem,
        &prep,
        &top,
        &target,
        &mut nodes,
        &mut run_stats,
        &mut areas,
    )?;
    let result = finish(problem, &prep, &nodes, mu_scaled);
    Ok((
        result,
        SolveStats {
            peak_live_elements: run_stats.peak_live,
            recursion_areas: areas,
        },
    ))
}

/// Solves one region for one width target, appending its nodes; returns the
/// scaled weight of the region's solution.
fn recurse(
    problem: &CodingProblem,
    prep: &Prepared,
    region: &GridRegion,
    target: &WidthValue,
    nodes: &mut Vec<Node>,
    run_stats: &mut RunStats,
    areas: &mut Vec<(u64, u64)>,
) -> Result<BigInt> {
    if target.is_zero() {
        return Ok(BigInt::zero());
    }
    let radix = problem.radix();
    let l_min = problem.bounds().l_min();

    if region.levels.len() as u32 <= BASE_LEVEL_SPAN {
        let mut source = GridSource::new(
            prep,
            l_min,
            region.symbols.clone(),
            region.levels.clone(),
            |symbol, level| NodeList(vec![Node { symbol, level }]),
        );
        let outcome = run_engine(radix, target, &mut source, run_stats)?;
        for list in outcome.picked {
            nodes.extend(list.0);
        }
        return Ok(outcome.weight);
    }

    let l_mid = region.l_mid();
    let lvl_hi = region.levels.end - 1;
    let d_big = radix.to_biguint();
    let mut source = GridSource::new(
        prep,
        l_min,
        region.symbols.clone(),
        region.levels.clone(),
        |_, level| {
            if level == l_mid {
                AttrPayload {
                    nu: 1,
                    psi_units: BigUint::zero(),
                }
            } else if level > l_mid {
                // width D^-level in units of the region's smallest width
                AttrPayload {
                    nu: 0,
                    psi_units: d_big.pow(lvl_hi - level),
                }
            } else {
                AttrPayload {
                    nu: 0,
                    psi_units: BigUint::zero(),
                }
            }
        },
    );
    let outcome = run_engine(radix, target, &mut source, run_stats)?;
    let merged = AttrPayload::merge(outcome.picked);
    let psi = WidthValue::new(radix, merged.psi_units, i64::from(lvl_hi));
    let split = split_region(region, merged.nu, &psi, target, radix);

    for symbol in split.rect_b.symbols.clone() {
        for level in split.rect_b.levels.clone() {
            nodes.push(Node { symbol, level });
        }
    }
    for symbol in split.row_gamma.symbols.clone() {
        nodes.push(Node {
            symbol,
            level: l_mid,
        });
    }

    areas.push((
        region.area(),
        split.region_a.area() + split.region_delta.area(),
    ));

    recurse(
        problem,
        prep,
        &split.region_a,
        &split.width_a,
        nodes,
        run_stats,
        areas,
    )?;
    recurse(
        problem,
        prep,
        &split.region_delta,
        &split.width_delta,
        nodes,
        run_stats,
        areas,
    )?;
    Ok(outcome.weight)
}
