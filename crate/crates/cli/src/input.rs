//! Weight file parsing: one weight per line, `#` comments, blank lines
//! ignored. Each weight is an integer, a decimal, or an `a/b` rational.

use num::{BigInt, BigRational, Zero};

pub fn parse_weights(text: &str) -> Result<Vec<BigRational>, String> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let value = parse_number(line)
            .map_err(|e| format!("line {}: {e} (got {line:?})", lineno + 1))?;
        out.push(value);
    }
    if out.is_empty() {
        return Err("no weights found in input".to_string());
    }
    Ok(out)
}

/// Integer, decimal, or `a/b` rational.
pub fn parse_number(text: &str) -> Result<BigRational, String> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| "invalid rational numerator".to_string())?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| "invalid rational denominator".to_string())?;
        if d.is_zero() {
            return Err("rational has zero denominator".to_string());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        let int_part = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            format!("{int_part}0")
        } else {
            int_part.to_string()
        };
        let negative = int_part.starts_with('-');
        let whole: BigInt = int_part
            .parse()
            .map_err(|_| "invalid decimal".to_string())?;
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err("invalid decimal fraction".to_string());
        }
        let frac: BigInt = frac_part.parse().map_err(|_| "invalid decimal".to_string())?;
        let scale = BigInt::from(10).pow(frac_part.len() as u32);
        let frac_signed = if negative { -frac } else { frac };
        return Ok(
            BigRational::from(whole) + BigRational::new(frac_signed, scale)
        );
    }
    let n: BigInt = text.parse().map_err(|_| "invalid integer".to_string())?;
    Ok(BigRational::from(n))
}

/// Positive rational for flag values like `exp:3/2` or `exp:0.5`.
pub fn parse_positive_rational(text: &str) -> Result<BigRational, String> {
    let value = parse_number(text)?;
    if value <= BigRational::zero() {
        return Err("value must be strictly positive".to_string());
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn grammar() {
        let text = "# header\n3\n\n1/2   # trailing comment\n0.25\n  7 \n";
        let parsed = parse_weights(text).unwrap();
        assert_eq!(parsed, vec![rat(3, 1), rat(1, 2), rat(1, 4), rat(7, 1)]);
    }

    #[test]
    fn decimals() {
        assert_eq!(parse_number("12.5").unwrap(), rat(25, 2));
        assert_eq!(parse_number("-0.2").unwrap(), rat(-1, 5));
        assert_eq!(parse_number(".5").unwrap(), rat(1, 2));
        assert!(parse_number("1.2.3").is_err());
        assert!(parse_number("1.").is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_number("6/8").unwrap(), rat(3, 4));
        assert!(parse_number("1/0").is_err());
        assert!(parse_number("a/b").is_err());
    }

    #[test]
    fn rejects_empty_input() {
        assert!(parse_weights("# nothing\n\n").is_err());
    }
}
