//! Polynomial input parsing.
//!
//! Two forms are accepted:
//!   * a comma-separated coefficient list `c0,c1,...,cn` (constant first);
//!   * a sparse expression like `x^8+15`, `19*x^4 - x^3 - 10*x^2 + 1` or
//!     `x^2-x-1`, with one single-letter variable, optional `*`, and
//!     integer coefficients.
//!
//! Grammar for expressions:
//!   poly  := term (('+' | '-') term)*
//!   term  := int | int '*'? var pow? | var pow?
//!   pow   := '^' uint
//!   var   := single ascii letter

use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "parse error: {}", self.0)
    }
}

impl std::error::Error for ParseError {}

/// Parse either a coefficient list or a sparse expression into constant-first
/// coefficients.
pub fn parse_poly(input: &str) -> Result<Vec<BigInt>, ParseError> {
    let s = input.trim();
    if s.is_empty() {
        return Err(ParseError("empty input".into()));
    }
    if s.contains(',') {
        return parse_coeff_list(s);
    }
    parse_expression(s)
}

pub fn parse_coeff_list(s: &str) -> Result<Vec<BigInt>, ParseError> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let t = part.trim();
        let c: BigInt = t
            .parse()
            .map_err(|_| ParseError(format!("bad coefficient {t:?}")))?;
        out.push(c);
    }
    while out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    if out.len() < 2 {
        return Err(ParseError("polynomial must have degree at least 1".into()));
    }
    Ok(out)
}

fn parse_expression(s: &str) -> Result<Vec<BigInt>, ParseError> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms: Vec<(BigInt, usize)> = Vec::new();
    let mut i = 0usize;
    let mut var: Option<char> = None;
    let n = chars.len();
    let mut sign = 1i64;
    // Leading sign.
    if i < n && (chars[i] == '+' || chars[i] == '-') {
        if chars[i] == '-' {
            sign = -1;
        }
        i += 1;
    }
    loop {
        if i >= n {
            return Err(ParseError("expected a term".into()));
        }
        // Optional integer part.
        let start = i;
        while i < n && chars[i].is_ascii_digit() {
            i += 1;
        }
        let mut coeff: BigInt = if i > start {
            chars[start..i].iter().collect::<String>().parse().unwrap()
        } else {
            BigInt::from(1)
        };
        if sign < 0 {
            coeff = -coeff;
        }
        let had_digits = i > start;
        // Optional '*'.
        if i < n && chars[i] == '*' {
            if !had_digits {
                return Err(ParseError("'*' needs a coefficient before it".into()));
            }
            i += 1;
        }
        // Optional variable with power.
        let mut exp = 0usize;
        if i < n && chars[i].is_ascii_alphabetic() {
            match var {
                None => var = Some(chars[i]),
                Some(v) if v == chars[i] => {}
                Some(v) => {
                    return Err(ParseError(format!(
                        "mixed variables {v:?} and {:?}",
                        chars[i]
                    )))
                }
            }
            i += 1;
            exp = 1;
            if i < n && chars[i] == '^' {
                i += 1;
                let es = i;
                while i < n && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i == es {
                    return Err(ParseError("'^' needs an exponent".into()));
                }
                exp = chars[es..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| ParseError("exponent too large".into()))?;
            }
        } else if !had_digits {
            return Err(ParseError(format!(
                "unexpected character {:?}",
                chars.get(i).copied().unwrap_or(' ')
            )));
        }
        terms.push((coeff, exp));
        if i == n {
            break;
        }
        match chars[i] {
            '+' => {
                sign = 1;
                i += 1;
            }
            '-' => {
                sign = -1;
                i += 1;
            }
            other => return Err(ParseError(format!("unexpected character {other:?}"))),
        }
    }
    let deg = terms.iter().map(|&(_, e)| e).max().unwrap_or(0);
    if deg == 0 {
        return Err(ParseError("polynomial must have degree at least 1".into()));
    }
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    for (c, e) in terms {
        coeffs[e] += c;
    }
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Err(ParseError("polynomial must have degree at least 1".into()));
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn sparse_forms() {
        assert_eq!(parse_poly("x^8+15").unwrap(), ints(&[15, 0, 0, 0, 0, 0, 0, 0, 1]));
        assert_eq!(parse_poly("x^3+2*x+11").unwrap(), ints(&[11, 2, 0, 1]));
        assert_eq!(parse_poly("x^2-5").unwrap(), ints(&[-5, 0, 1]));
        assert_eq!(
            parse_poly("19x^4 - x^3 - 10x^2 + 1").unwrap(),
            ints(&[1, 0, -10, -1, 19])
        );
        assert_eq!(parse_poly("y^2-y-1").unwrap(), ints(&[-1, -1, 1]));
        assert_eq!(parse_poly("-x^2+5").unwrap(), ints(&[5, 0, -1]));
    }

    #[test]
    fn coefficient_lists() {
        assert_eq!(parse_poly("11,2,0,1").unwrap(), ints(&[11, 2, 0, 1]));
        assert_eq!(parse_poly(" -5 , 0 , 1 ").unwrap(), ints(&[-5, 0, 1]));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("").is_err());
        assert!(parse_poly("x^").is_err());
        assert!(parse_poly("x+y").is_err());
        assert!(parse_poly("7").is_err());
        assert!(parse_poly("1,0").is_err()); // degree 0 after trim? 1 + 0x -> [1]
        assert!(parse_poly("3 $ 4").is_err());
    }

    #[test]
    fn repeated_terms_accumulate() {
        assert_eq!(parse_poly("x + x + 1").unwrap(), ints(&[1, 2]));
    }
}
