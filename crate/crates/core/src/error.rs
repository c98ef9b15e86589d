use thiserror::Error;

/// Errors surfaced by problem validation, the coin-collector engine, and the
/// codebook round-trip helpers.
///
/// The `Infeasible*` variants name the violated bound so callers (notably the
/// CLI) can report why no code exists without string matching.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("radix must be at least 2, got {0}")]
    RadixTooSmall(u32),

    #[error("weight list is empty")]
    NoWeights,

    #[error("weight at input position {index} must be strictly positive")]
    NonPositiveWeight { index: usize },

    #[error("length bounds are inverted: min {l_min} exceeds max {l_max}")]
    InvertedBounds { l_min: u32, l_max: u32 },

    #[error("penalty table must cover deltas 0..={needed}, got {len} entries")]
    PenaltyTableTooShort { len: usize, needed: u32 },

    #[error("penalty value at delta {delta} is negative")]
    PenaltyNegative { delta: u32 },

    #[error("penalty is not nondecreasing at delta {delta}")]
    PenaltyNotMonotone { delta: u32 },

    #[error("penalty is not convex at delta {delta}")]
    PenaltyNotConvex { delta: u32 },

    #[error("exponential penalty rate t must be strictly positive")]
    NonPositiveRate,

    #[error("rationalization precision must be at least 1")]
    ZeroPrecision,

    #[error("exponential penalty overflows the rationalization budget (rate or range too large)")]
    RationalizationOverflow,

    #[error("coin id {0} appears more than once")]
    DuplicateCoinId(u64),

    #[error("coin {id} has a width that is not a power of the radix")]
    NonPowerWidth { id: u64 },

    #[error("infeasible: no subset of the coins has total width exactly equal to the target")]
    NoCoinSubset,

    #[error(
        "infeasible: minimum length {l_min} requires at least D^l_min = {capacity} codewords \
         after dummy padding, got {n_padded}"
    )]
    BelowMinCapacity {
        n_padded: u64,
        l_min: u32,
        capacity: String,
    },

    #[error(
        "infeasible: maximum length {l_max} admits at most D^l_max = {capacity} codewords, \
         but dummy padding requires {n_padded}"
    )]
    AboveMaxCapacity {
        n_padded: u64,
        l_max: u32,
        capacity: String,
    },

    #[error(
        "infeasible: fixed length {len} requires exactly D^{len} = {required} codewords \
         after dummy padding, got {n_padded}"
    )]
    ExactCapacityRequired {
        n_padded: u64,
        len: u32,
        required: String,
    },

    #[error(
        "infeasible: fringe sweep range is empty (ceil(log_D n) = {lo} exceeds \
         floor(log_D n) + d = {hi}); adding dummy blocks can re-enable it"
    )]
    EmptyFringeRange { lo: u32, hi: u32 },

    #[error("infeasible: every max-length candidate in the fringe sweep was infeasible")]
    FringeSweepExhausted,

    #[error("codeword lengths violate the Kraft inequality for radix {radix}")]
    KraftViolation { radix: u32 },

    #[error("symbol index {index} is out of range for this codebook")]
    UnknownSymbol { index: usize },

    #[error("digit stream ends inside a codeword (dangling partial codeword)")]
    DanglingCodeword,

    #[error("digit {digit} is out of range for radix {radix}")]
    DigitOutOfRange { digit: u32, radix: u32 },

    #[error("codebook contains an empty codeword; digit streams cannot be decoded unambiguously")]
    EmptyCodewordInBook,

    #[error("oracle refused the instance: {0}")]
    OracleTooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for the variants that mean "no code exists under these
    /// constraints", as opposed to malformed input.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::NoCoinSubset
                | Error::BelowMinCapacity { .. }
                | Error::AboveMaxCapacity { .. }
                | Error::ExactCapacityRequired { .. }
                | Error::EmptyFringeRange { .. }
                | Error::FringeSweepExhausted
        )
    }
}
