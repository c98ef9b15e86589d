//! Canonical codeword assignment and a round-trip encode/decode harness.
//!
//! Codewords are digit vectors over `{0 .. D-1}`, not packed bits: the radix
//! is arbitrary and packing is a serialization concern. The canonical
//! assignment walks symbols in nondecreasing length order (stable by index);
//! each codeword is the previous one plus one as a base-D numeral, extended
//! with zeros to the new length. That makes codewords of equal length
//! consecutive numerals, the layout table-driven decoders want.

use std::collections::HashMap;

use num::{BigRational, One};

use crate::error::{Error, Result};
use crate::model::{kraft_sum, Radix};

/// Immutable codeword table aligned with caller symbol order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    radix: Radix,
    codewords: Vec<Vec<u32>>,
}

impl Codebook {
    /// Wraps raw digit vectors, checking digit range only. Most callers want
    /// [`assign_canonical`] instead.
    pub fn new(radix: Radix, codewords: Vec<Vec<u32>>) -> Result<Codebook> {
        for word in &codewords {
            for &digit in word {
                if digit >= radix.get() {
                    return Err(Error::DigitOutOfRange {
                        digit,
                        radix: radix.get(),
                    });
                }
            }
        }
        Ok(Codebook { radix, codewords })
    }

    pub fn radix(&self) -> Radix {
        self.radix
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn codewords(&self) -> &[Vec<u32>] {
        &self.codewords
    }

    pub fn lengths(&self) -> Vec<u32> {
        self.codewords.iter().map(|w| w.len() as u32).collect()
    }
}

/// Canonical prefix code for the given lengths. Rejects lengths violating
/// the Kraft inequality; everything that passes yields a prefix-free book.
pub fn assign_canonical(lengths: &[u32], radix: Radix) -> Result<Codebook> {
    if kraft_sum(lengths, radix) > BigRational::one() {
        return Err(Error::KraftViolation {
            radix: radix.get(),
        });
    }
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by_key(|&i| lengths[i]); // stable: ties keep index order

    let mut codewords: Vec<Vec<u32>> = vec![Vec::new(); lengths.len()];
    let mut current: Vec<u32> = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        let len = lengths[i] as usize;
        if pos == 0 {
            current = vec![0; len];
        } else {
            increment_base_d(&mut current, radix);
            debug_assert!(current.len() <= len, "kraft check admits every step");
            current.resize(len, 0);
        }
        codewords[i] = current.clone();
    }
    Ok(Codebook { radix, codewords })
}

/// Adds one to a base-D numeral in place. A carry past the leading digit
/// cannot happen for Kraft-satisfying lengths.
fn increment_base_d(digits: &mut [u32], radix: Radix) {
    for d in digits.iter_mut().rev() {
        if *d + 1 < radix.get() {
            *d += 1;
            return;
        }
        *d = 0;
    }
    unreachable!("canonical increment overflowed; kraft sum was not checked");
}

/// Concatenated digit stream for a symbol sequence.
pub fn encode(symbols: &[usize], book: &Codebook) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for &s in symbols {
        let word = book
            .codewords
            .get(s)
            .ok_or(Error::UnknownSymbol { index: s })?;
        out.extend_from_slice(word);
    }
    Ok(out)
}

/// Unique parse of a digit stream back into symbols. The stream must end on
/// a codeword boundary. Books containing an empty codeword are rejected: an
/// empty word makes the parse ambiguous.
pub fn decode(stream: &[u32], book: &Codebook) -> Result<Vec<usize>> {
    if book.codewords.iter().any(|w| w.is_empty()) {
        return Err(Error::EmptyCodewordInBook);
    }
    let lut: HashMap<&[u32], usize> = book
        .codewords
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_slice(), i))
        .collect();
    let mut out = Vec::new();
    let mut start = 0usize;
    for (pos, &digit) in stream.iter().enumerate() {
        if digit >= book.radix.get() {
            return Err(Error::DigitOutOfRange {
                digit,
                radix: book.radix.get(),
            });
        }
        if let Some(&symbol) = lut.get(&stream[start..=pos]) {
            out.push(symbol);
            start = pos + 1;
        }
    }
    if start != stream.len() {
        return Err(Error::DanglingCodeword);
    }
    Ok(out)
}
