//! Sample input: one real per line.
//!
//! Blank lines and `#` comments are ignored. A single non-numeric header is
//! accepted if it is the first content line; any later non-numeric line is an
//! error naming the line.

use crate::error::{Error, Result};

pub fn parse_sample(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) => out.push(v),
            Err(_) if !seen_content => {}
            Err(_) => return Err(Error::Parse { line: idx + 1, token: line.to_string() }),
        }
        seen_content = true;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_values() {
        assert_eq!(parse_sample("1\n2.5\n-3e2\n").unwrap(), vec![1.0, 2.5, -300.0]);
    }

    #[test]
    fn header_comments_and_blanks() {
        let text = "# generated\nvalue\n\n0.5\n  1.0  \n# trailing\n";
        assert_eq!(parse_sample(text).unwrap(), vec![0.5, 1.0]);
    }

    #[test]
    fn bad_line_is_reported() {
        let err = parse_sample("x\n1\nabc\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, token: "abc".into() });
    }

    #[test]
    fn only_first_line_may_be_header() {
        assert!(parse_sample("1\nheader\n").is_err());
    }
}
