//! Report rendering: the codebook JSON shape and the plain-text report.
//! Output is byte-deterministic unless timing was requested.

use codelim::{Codebook, FringeResult, Penalty, Radix, SolveResult, SweepOutcome};
use num::{BigInt, BigRational, Signed, Zero};
use serde::{Deserialize, Serialize};

pub const DECIMAL_DIGITS: u32 = 12;

/// `a/b`, always with an explicit denominator.
pub fn rational_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Fixed-point rendering with `DECIMAL_DIGITS` fractional digits, round half
/// away from zero, trailing zeros trimmed.
pub fn decimal_string(x: &BigRational) -> String {
    let sign = if x.is_negative() { "-" } else { "" };
    let abs = x.abs();
    let scale = BigInt::from(10).pow(DECIMAL_DIGITS);
    let scaled = (&abs * BigRational::from(scale.clone())
        + BigRational::new(BigInt::from(1), BigInt::from(2)))
    .floor()
    .to_integer();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    if frac_part.is_zero() {
        return format!("{sign}{int_part}");
    }
    let mut frac = format!("{:0>width$}", frac_part, width = DECIMAL_DIGITS as usize);
    while frac.ends_with('0') {
        frac.pop();
    }
    format!("{sign}{int_part}.{frac}")
}

/// Digit string for one codeword: compact digits up to radix 10,
/// dot-separated decimal digits beyond.
pub fn codeword_string(word: &[u32], radix: Radix) -> String {
    if radix.get() <= 10 {
        word.iter().map(|d| d.to_string()).collect()
    } else {
        word.iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Inverse of [`codeword_string`].
pub fn parse_codeword(text: &str, radix: u32) -> Result<Vec<u32>, String> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    if radix <= 10 {
        text.chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| format!("invalid digit {c:?}"))
            })
            .collect()
    } else {
        text.split('.')
            .map(|part| {
                part.parse::<u32>()
                    .map_err(|_| format!("invalid digit {part:?}"))
            })
            .collect()
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PenaltyJson {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
}

impl PenaltyJson {
    pub fn from_penalty(penalty: &Penalty) -> PenaltyJson {
        match penalty {
            Penalty::Linear => PenaltyJson {
                kind: "linear".into(),
                t: None,
            },
            Penalty::Quadratic => PenaltyJson {
                kind: "quadratic".into(),
                t: None,
            },
            Penalty::Exponential { t, .. } => PenaltyJson {
                kind: "exp".into(),
                t: Some(rational_string(t)),
            },
            Penalty::Table(_) => PenaltyJson {
                kind: "table".into(),
                t: None,
            },
        }
    }
}

/// The codebook JSON shape shared by `solve`, `fringe`, and `verify`.
#[derive(Debug, Serialize)]
pub struct SolveJson {
    pub radix: u32,
    pub lengths: Vec<u32>,
    pub codewords: Vec<String>,
    pub penalty: PenaltyJson,
    pub penalty_value: String,
    pub kraft: String,
    pub penalty_value_decimal: String,
    pub dummies: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_len: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_len: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct SweepJson {
    pub min_len: u32,
    pub max_len: u32,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub penalty: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct FringeJson {
    #[serde(flatten)]
    pub solve: SolveJson,
    pub max_fringe: u32,
    pub extra_dummy_blocks: u32,
    pub chosen_min_len: u32,
    pub chosen_max_len: u32,
    pub absolute_penalty: String,
    pub absolute_penalty_decimal: String,
    pub sweep: Vec<SweepJson>,
}

pub struct ReportInputs<'a> {
    pub radix: Radix,
    pub penalty: &'a Penalty,
    pub result: &'a SolveResult,
    pub book: &'a Codebook,
    pub dummies: usize,
    /// Requested bounds; fringe reports its chosen window separately.
    pub bounds: Option<(u32, u32)>,
    pub timing_ms: Option<f64>,
}

pub fn solve_json(inputs: &ReportInputs) -> SolveJson {
    SolveJson {
        radix: inputs.radix.get(),
        lengths: inputs.result.lengths.clone(),
        codewords: inputs
            .book
            .codewords()
            .iter()
            .map(|w| codeword_string(w, inputs.radix))
            .collect(),
        penalty: PenaltyJson::from_penalty(inputs.penalty),
        penalty_value: rational_string(&inputs.result.penalty_value),
        kraft: rational_string(&inputs.result.kraft),
        penalty_value_decimal: decimal_string(&inputs.result.penalty_value),
        dummies: inputs.dummies,
        min_len: inputs.bounds.map(|b| b.0),
        max_len: inputs.bounds.map(|b| b.1),
        timing_ms: inputs.timing_ms,
    }
}

pub fn solve_text(inputs: &ReportInputs) -> String {
    let mut out = String::new();
    let push = |out: &mut String, line: String| {
        out.push_str(&line);
        out.push('\n');
    };
    push(&mut out, format!("radix: {}", inputs.radix.get()));
    push(
        &mut out,
        format!(
            "symbols: {} (dummies added: {})",
            inputs.result.lengths.len(),
            inputs.dummies
        ),
    );
    if let Some((lo, hi)) = inputs.bounds {
        push(&mut out, format!("bounds: [{lo}, {hi}]"));
    }
    push(
        &mut out,
        format!("penalty: {}", penalty_text(inputs.penalty)),
    );
    push(
        &mut out,
        format!(
            "lengths: {}",
            inputs
                .result
                .lengths
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        ),
    );
    push(
        &mut out,
        format!(
            "codewords: {}",
            inputs
                .book
                .codewords()
                .iter()
                .map(|w| {
                    let s = codeword_string(w, inputs.radix);
                    if s.is_empty() {
                        "\"\"".to_string()
                    } else {
                        s
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        ),
    );
    push(
        &mut out,
        format!(
            "penalty_value: {} (~{})",
            rational_string(&inputs.result.penalty_value),
            decimal_string(&inputs.result.penalty_value)
        ),
    );
    push(
        &mut out,
        format!("kraft: {}", rational_string(&inputs.result.kraft)),
    );
    if let Some(ms) = inputs.timing_ms {
        push(&mut out, format!("time_ms: {ms:.3}"));
    }
    out
}

pub fn penalty_text(penalty: &Penalty) -> String {
    match penalty {
        Penalty::Linear => "linear".into(),
        Penalty::Quadratic => "quadratic".into(),
        Penalty::Exponential { t, .. } => format!("exp:{}", rational_string(t)),
        Penalty::Table(_) => "table".into(),
    }
}

pub fn fringe_json(
    inputs: &ReportInputs,
    fringe: &FringeResult,
    max_fringe: u32,
    extra_dummy_blocks: u32,
) -> FringeJson {
    FringeJson {
        solve: solve_json(inputs),
        max_fringe,
        extra_dummy_blocks,
        chosen_min_len: fringe.chosen_lower,
        chosen_max_len: fringe.chosen_upper,
        absolute_penalty: rational_string(&fringe.absolute_penalty),
        absolute_penalty_decimal: decimal_string(&fringe.absolute_penalty),
        sweep: fringe
            .sweep
            .iter()
            .map(|entry| match &entry.outcome {
                SweepOutcome::Solved { penalty } => SweepJson {
                    min_len: entry.lower,
                    max_len: entry.upper,
                    status: "ok".into(),
                    penalty: Some(rational_string(penalty)),
                },
                SweepOutcome::Infeasible => SweepJson {
                    min_len: entry.lower,
                    max_len: entry.upper,
                    status: "infeasible".into(),
                    penalty: None,
                },
            })
            .collect(),
    }
}

pub fn fringe_text(
    inputs: &ReportInputs,
    fringe: &FringeResult,
    max_fringe: u32,
) -> String {
    let mut out = solve_text(inputs);
    out.push_str(&format!("max_fringe: {max_fringe}\n"));
    out.push_str("sweep:\n");
    for entry in &fringe.sweep {
        match &entry.outcome {
            SweepOutcome::Solved { penalty } => {
                out.push_str(&format!(
                    "  bounds [{}, {}]: penalty {} (~{})\n",
                    entry.lower,
                    entry.upper,
                    rational_string(penalty),
                    decimal_string(penalty)
                ));
            }
            SweepOutcome::Infeasible => {
                out.push_str(&format!(
                    "  bounds [{}, {}]: infeasible\n",
                    entry.lower, entry.upper
                ));
            }
        }
    }
    out.push_str(&format!(
        "chosen: bounds [{}, {}], absolute penalty {} (~{})\n",
        fringe.chosen_lower,
        fringe.chosen_upper,
        rational_string(&fringe.absolute_penalty),
        decimal_string(&fringe.absolute_penalty)
    ));
    out
}

/// Millisecond duration with stable rounding for the optional timing field.
pub fn millis(duration: std::time::Duration) -> f64 {
    (duration.as_secs_f64() * 1e3 * 1e3).round() / 1e3
}
