//! Field-table ingestion.
//!
//! One record per line: `label | c0,c1,...,cn | [expected_disc]`, with `#`
//! starting a comment and blank lines ignored. The optional third column is
//! checked against the computed field discriminant; mismatches flag the
//! record without aborting the scan.

use num_bigint::BigInt;

use crate::parse::parse_coeff_list;

#[derive(Debug, Clone)]
pub struct FieldTableRecord {
    pub label: String,
    pub coeffs: Vec<BigInt>,
    pub expected_disc: Option<BigInt>,
}

#[derive(Debug, Clone)]
pub struct TableIngest {
    pub records: Vec<FieldTableRecord>,
    /// (line number, content, reason)
    pub malformed: Vec<(usize, String, String)>,
}

pub fn parse_table(text: &str) -> TableIngest {
    let mut records = Vec::new();
    let mut malformed = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(h) => &raw[..h],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split('|').map(str::trim).collect();
        if parts.len() < 2 || parts.len() > 3 {
            malformed.push((lineno, raw.to_string(), "expected 2 or 3 '|' fields".into()));
            continue;
        }
        let label = parts[0].to_string();
        if label.is_empty() {
            malformed.push((lineno, raw.to_string(), "empty label".into()));
            continue;
        }
        let coeffs = match parse_coeff_list(parts[1]) {
            Ok(c) => c,
            Err(e) => {
                malformed.push((lineno, raw.to_string(), e.to_string()));
                continue;
            }
        };
        let expected_disc = match parts.get(2) {
            Some(s) if !s.is_empty() => match s.parse::<BigInt>() {
                Ok(d) => Some(d),
                Err(_) => {
                    malformed.push((lineno, raw.to_string(), "bad expected_disc".into()));
                    continue;
                }
            },
            _ => None,
        };
        records.push(FieldTableRecord { label, coeffs, expected_disc });
    }
    TableIngest { records, malformed }
}

/// Render records back into the line format (used by the table round-trip
/// test and by fixture generation).
pub fn render_record(r: &FieldTableRecord) -> String {
    let coeffs = r
        .coeffs
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",");
    match &r.expected_disc {
        Some(d) => format!("{} | {} | {}", r.label, coeffs, d),
        None => format!("{} | {}", r.label, coeffs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_records_and_comments() {
        let text = "\
# comment line
a1 | -5,0,1 | 5
a2 | 11,2,0,1

bad line without pipe
a3 | 1,1,1,1,1
";
        let t = parse_table(text);
        assert_eq!(t.records.len(), 3);
        assert_eq!(t.malformed.len(), 1);
        assert_eq!(t.records[0].label, "a1");
        assert_eq!(t.records[0].expected_disc, Some(BigInt::from(5)));
        assert_eq!(t.records[2].expected_disc, None);
    }

    #[test]
    fn round_trip() {
        let rec = FieldTableRecord {
            label: "x".into(),
            coeffs: vec![BigInt::from(-5), BigInt::from(0), BigInt::from(1)],
            expected_disc: Some(BigInt::from(5)),
        };
        let line = render_record(&rec);
        let t = parse_table(&line);
        assert_eq!(t.records.len(), 1);
        assert_eq!(t.records[0].label, rec.label);
        assert_eq!(t.records[0].coeffs, rec.coeffs);
        assert_eq!(t.records[0].expected_disc, rec.expected_disc);
    }
}
