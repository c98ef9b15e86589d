//! Optimal D-ary prefix codes with bounded codeword lengths.
//!
//! Given positive symbol weights, a radix `D >= 2`, and an interval
//! `[l_min, l_max]` of allowed codeword lengths, this crate constructs a
//! prefix code minimizing any convex, nondecreasing penalty of the form
//! `Sum_i p_i * phi(l_i - l_min)`. The construction reduces the problem to a
//! D-ary coin collector instance solved by package-merge, runs entirely on
//! exact rational arithmetic, and is deterministic: equal-weight ties are
//! resolved by fixed index rules, which also makes the output the
//! minimum-height code among the monotone optima.
//!
//! The main entry points:
//!
//! - [`solver::solve`]: full solver, keeps node lists in memory.
//! - [`linspace::solve_linear_space`]: same answers, O(n) space via the
//!   attribute-pass / reconstruction scheme.
//! - [`fringe::fringe_solve`]: best code whose longest and shortest codeword
//!   differ by at most `d`.
//! - [`codebook::assign_canonical`]: canonical codewords from a length
//!   vector, plus encode/decode helpers.
//! - [`oracle`]: brute-force references for testing; not production paths.
//!
//! ```
//! use codelim::{
//!     assign_canonical, solve_linear_space, CodingProblem, LengthBounds, Penalty, Radix,
//! };
//! use num::{BigInt, BigRational};
//!
//! let weights: Vec<BigRational> =
//!     [8, 4, 2, 1, 1].iter().map(|&w| BigRational::from(BigInt::from(w))).collect();
//! let problem = CodingProblem::new(
//!     &weights,
//!     Radix::new(2)?,
//!     LengthBounds::new(1, 3)?,
//!     Penalty::Linear,
//! )?;
//! let result = solve_linear_space(&problem)?;
//! assert_eq!(result.lengths, vec![1, 3, 3, 3, 3]);
//!
//! let book = assign_canonical(&result.lengths, Radix::new(2)?)?;
//! assert_eq!(book.codewords()[0], vec![0]);
//! assert_eq!(book.codewords()[1], vec![1, 0, 0]);
//! # Ok::<(), codelim::Error>(())
//! ```

pub mod codebook;
pub mod error;
pub mod fringe;
pub mod linspace;
pub mod model;
pub mod oracle;
pub mod packmerge;
pub mod solver;

pub use codebook::{assign_canonical, decode, encode, Codebook};
pub use error::{Error, Result};
pub use fringe::{fringe_solve, FringeProblem, FringeResult, SweepEntry, SweepOutcome};
pub use linspace::{
    decompose, solve_linear_space, solve_linear_space_with_stats, Decomposition, GridRegion,
};
pub use model::{
    kraft_sum, pad_dummies, LengthBounds, Node, NodeSet, Penalty, PenaltyTable, Radix, WeightVector,
    WidthValue,
};
pub use packmerge::{
    cc_solve, cc_solve_tracked, Coin, CoinClass, CoinInstance, CoinSolution, PackageAttr,
};
pub use solver::{
    build_instance, node_weight, recover_lengths, solve, solve_with_stats, total_width,
    CodingProblem, SolveResult, SolveStats,
};
