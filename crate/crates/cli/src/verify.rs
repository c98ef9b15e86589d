//! Codebook verification: prefix-freedom, duplicates, declared lengths, and
//! the Kraft inequality. Violations are reported as a machine-readable list.

use num::{BigRational, One};
use serde::{Deserialize, Serialize};

use codelim::{kraft_sum, Radix};

use crate::render::parse_codeword;

#[derive(Debug, Deserialize)]
pub struct CodebookFile {
    pub radix: u32,
    #[serde(default)]
    pub lengths: Option<Vec<u32>>,
    pub codewords: Vec<String>,
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct Violation {
    pub kind: String,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

pub fn verify_codebook(file: &CodebookFile) -> VerifyReport {
    let mut violations = Vec::new();
    let mut push = |kind: &str, detail: String| {
        violations.push(Violation {
            kind: kind.to_string(),
            detail,
        });
    };

    if Radix::new(file.radix).is_err() {
        push("radix", format!("radix {} is below 2", file.radix));
        return VerifyReport {
            ok: false,
            violations,
        };
    }

    let mut words: Vec<Option<Vec<u32>>> = Vec::with_capacity(file.codewords.len());
    for (i, text) in file.codewords.iter().enumerate() {
        match parse_codeword(text, file.radix) {
            Ok(word) => {
                if let Some(&bad) = word.iter().find(|&&d| d >= file.radix) {
                    push(
                        "digit-range",
                        format!("codeword {i} contains digit {bad} >= radix {}", file.radix),
                    );
                    words.push(None);
                } else {
                    words.push(Some(word));
                }
            }
            Err(e) => {
                push("digit-range", format!("codeword {i}: {e}"));
                words.push(None);
            }
        }
    }

    if let Some(lengths) = &file.lengths {
        if lengths.len() != file.codewords.len() {
            push(
                "length-mismatch",
                format!(
                    "{} lengths declared for {} codewords",
                    lengths.len(),
                    file.codewords.len()
                ),
            );
        } else {
            for (i, (len, word)) in lengths.iter().zip(&words).enumerate() {
                if let Some(word) = word {
                    if word.len() as u32 != *len {
                        push(
                            "length-mismatch",
                            format!(
                                "codeword {i} has {} digits but length {len} is declared",
                                word.len()
                            ),
                        );
                    }
                }
            }
        }
    }

    for i in 0..words.len() {
        for j in 0..words.len() {
            if i == j {
                continue;
            }
            let (Some(a), Some(b)) = (&words[i], &words[j]) else {
                continue;
            };
            if i < j && a == b {
                push("duplicate", format!("codewords {i} and {j} are identical"));
            } else if a.len() < b.len() && b.starts_with(a.as_slice()) {
                push(
                    "prefix",
                    format!("codeword {i} is a prefix of codeword {j}"),
                );
            }
        }
    }

    if words.iter().all(|w| w.is_some()) {
        let lengths: Vec<u32> = words
            .iter()
            .map(|w| w.as_ref().unwrap().len() as u32)
            .collect();
        let kraft = kraft_sum(&lengths, Radix::new(file.radix).unwrap());
        if kraft > BigRational::one() {
            push(
                "kraft",
                format!(
                    "kraft sum {}/{} exceeds 1",
                    kraft.numer(),
                    kraft.denom()
                ),
            );
        }
    }

    VerifyReport {
        ok: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(radix: u32, codewords: &[&str]) -> CodebookFile {
        CodebookFile {
            radix,
            lengths: None,
            codewords: codewords.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn kinds(report: &VerifyReport) -> Vec<&str> {
        report.violations.iter().map(|v| v.kind.as_str()).collect()
    }

    #[test]
    fn clean_book_passes() {
        let report = verify_codebook(&file(2, &["0", "10", "11"]));
        assert!(report.ok);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn prefix_violation() {
        let report = verify_codebook(&file(2, &["0", "01"]));
        assert!(!report.ok);
        assert_eq!(kinds(&report), vec!["prefix"]);
    }

    #[test]
    fn duplicate_and_kraft() {
        let report = verify_codebook(&file(2, &["00", "01", "10", "11", "11"]));
        assert!(!report.ok);
        let kinds = kinds(&report);
        assert!(kinds.contains(&"duplicate"));
        assert!(kinds.contains(&"kraft"));
    }

    #[test]
    fn declared_length_mismatch() {
        let report = verify_codebook(&CodebookFile {
            radix: 2,
            lengths: Some(vec![1, 1]),
            codewords: vec!["0".into(), "10".into()],
        });
        assert!(!report.ok);
        assert_eq!(kinds(&report), vec!["length-mismatch"]);
    }

    #[test]
    fn digit_range_checked() {
        let report = verify_codebook(&file(2, &["0", "12"]));
        assert!(!report.ok);
        assert!(kinds(&report).contains(&"digit-range"));
    }
}
