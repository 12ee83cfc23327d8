//! Text forms of the CLI arguments.
//!
//! Matrices are row-semicolon, comma-separated (`2,0;0,2`), vectors are
//! comma-separated, and `n` is either `N` or an inclusive range `lo:hi`.
//! Error positions are 0-based byte offsets into the input.

use ortho_moments::{Error, ExponentMatrix, Result};

fn parse_error(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

/// Splits `text` on `sep`, keeping the byte offset of each piece.
fn pieces(text: &str, sep: char, base: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        if ch == sep {
            out.push((base + start, &text[start..i]));
            start = i + ch.len_utf8();
        }
    }
    out.push((base + start, &text[start..]));
    out
}

fn parse_entry(pos: usize, token: &str) -> Result<u32> {
    let lead = token.len() - token.trim_start().len();
    let t = token.trim();
    if t.is_empty() {
        return Err(parse_error(pos, "missing entry"));
    }
    if !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_error(pos + lead, format!("'{t}' is not a nonnegative integer")));
    }
    t.parse().map_err(|_| parse_error(pos + lead, format!("'{t}' is too large")))
}

fn parse_list(text: &str, base: usize) -> Result<Vec<u32>> {
    pieces(text, ',', base)
        .into_iter()
        .map(|(pos, tok)| parse_entry(pos, tok))
        .collect()
}

pub fn parse_matrix(text: &str) -> Result<ExponentMatrix> {
    if text.trim().is_empty() {
        return Err(parse_error(0, "empty matrix"));
    }
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (pos, row) in pieces(text, ';', 0) {
        let entries = parse_list(row, pos)?;
        if let Some(first) = rows.first() {
            if first.len() != entries.len() {
                return Err(parse_error(
                    pos,
                    format!(
                        "row {} has {} entries, expected {}",
                        rows.len() + 1,
                        entries.len(),
                        first.len()
                    ),
                ));
            }
        }
        rows.push(entries);
    }
    ExponentMatrix::from_rows(&rows)
}

pub fn render_matrix(a: &ExponentMatrix) -> String {
    a.to_string()
}

pub fn parse_vector(text: &str) -> Result<Vec<u32>> {
    if text.trim().is_empty() {
        return Err(parse_error(0, "empty vector"));
    }
    parse_list(text, 0)
}

/// `N` or `lo:hi`, inclusive.
pub fn parse_n_range(text: &str) -> Result<Vec<u32>> {
    match text.split_once(':') {
        None => Ok(vec![parse_entry(0, text)?]),
        Some((lo, hi)) => {
            let a = parse_entry(0, lo)?;
            let b = parse_entry(lo.len() + 1, hi)?;
            if a > b {
                return Err(parse_error(0, format!("empty range {a}:{b}")));
            }
            Ok((a..=b).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pos(e: Error) -> usize {
        match e {
            Error::Parse { pos, .. } => pos,
            other => panic!("not a parse error: {other:?}"),
        }
    }

    #[test]
    fn matrices() {
        let m = parse_matrix("2,0;0,2").unwrap();
        assert_eq!(m, ExponentMatrix::from_rows(&[[2, 0], [0, 2]]).unwrap());
        assert_eq!(parse_matrix("4").unwrap(), ExponentMatrix::from_rows(&[[4]]).unwrap());
        assert_eq!(parse_matrix(" 1 , 1 ; 1,1 ").unwrap().to_string(), "1,1;1,1");
    }

    #[test]
    fn matrix_errors() {
        assert_eq!(pos(parse_matrix("2,0;0").unwrap_err()), 4);
        assert_eq!(pos(parse_matrix("").unwrap_err()), 0);
        assert_eq!(pos(parse_matrix("2,x").unwrap_err()), 2);
        assert_eq!(pos(parse_matrix("2,-1").unwrap_err()), 2);
        assert_eq!(pos(parse_matrix("2,;1,1").unwrap_err()), 2);
        assert!(parse_matrix("99999999999").is_err());
    }

    #[test]
    fn vectors_and_ranges() {
        assert_eq!(parse_vector("2,2").unwrap(), vec![2, 2]);
        assert_eq!(parse_n_range("4:8").unwrap(), vec![4, 5, 6, 7, 8]);
        assert_eq!(parse_n_range("3").unwrap(), vec![3]);
        assert!(parse_n_range("8:4").is_err());
        assert_eq!(pos(parse_n_range("4:y").unwrap_err()), 2);
    }
}
