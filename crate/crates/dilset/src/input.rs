//! Reading sets from literals, line files and standard input.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use dilset_core::IntSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("malformed integer at token {token}: {text:?}")]
    MalformedToken { token: usize, text: String },
    #[error("malformed integer on line {line}: {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("input contains no integers")]
    Empty,
    #[error("cannot read {path}: {source}")]
    Unreadable {
        path: String,
        #[source]
        source: io::Error,
    },
}

/// A parsed set and the number of repeated elements that were dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedSet {
    pub set: IntSet,
    pub duplicates: usize,
}

/// Where a set comes from. `-` as a path or literal means standard input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputSource {
    Literal(String),
    File(PathBuf),
}

fn finish(values: Vec<i64>) -> Result<ParsedSet, InputError> {
    if values.is_empty() {
        return Err(InputError::Empty);
    }
    let (set, duplicates) = IntSet::from_unsorted(values);
    Ok(ParsedSet { set, duplicates })
}

/// Parses `0,1,3,4`. Whitespace around tokens is ignored; tokens are numbered from 1.
pub fn parse_literal(text: &str) -> Result<ParsedSet, InputError> {
    if text.trim().is_empty() {
        return Err(InputError::Empty);
    }
    let values = text
        .split(',')
        .enumerate()
        .map(|(k, raw)| {
            let tok = raw.trim();
            tok.parse::<i64>().map_err(|_| InputError::MalformedToken {
                token: k + 1,
                text: tok.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    finish(values)
}

/// Parses one integer per line; `#` starts a comment and blank lines are skipped.
pub fn parse_lines(text: &str) -> Result<ParsedSet, InputError> {
    let mut values = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let v = body.parse::<i64>().map_err(|_| InputError::MalformedLine {
            line: k + 1,
            text: body.to_string(),
        })?;
        values.push(v);
    }
    finish(values)
}

fn read_stdin() -> Result<String, InputError> {
    let mut buf = String::new();
    io::stdin()
        .read_to_string(&mut buf)
        .map_err(|source| InputError::Unreadable {
            path: "-".into(),
            source,
        })?;
    Ok(buf)
}

fn read_file(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Unreadable {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_set_input(source: &InputSource) -> Result<ParsedSet, InputError> {
    match source {
        InputSource::Literal(text) if text == "-" => parse_literal(&read_stdin()?),
        InputSource::Literal(text) => parse_literal(text),
        InputSource::File(path) if path.as_os_str() == "-" => parse_lines(&read_stdin()?),
        InputSource::File(path) => parse_lines(&read_file(path)?),
    }
}

/// The literal form, which [`parse_literal`] reads back unchanged.
pub fn format_literal(set: &IntSet) -> String {
    set.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn literal_examples() {
        let p = parse_literal("0,1,3,4").unwrap();
        assert_eq!(p.set.as_slice(), &[0, 1, 3, 4]);
        assert_eq!(p.duplicates, 0);

        let p = parse_literal("4, 1,1, 0 , 3").unwrap();
        assert_eq!(p.set.as_slice(), &[0, 1, 3, 4]);
        assert_eq!(p.duplicates, 1);

        let err = parse_literal("0,x").unwrap_err();
        assert!(matches!(err, InputError::MalformedToken { token: 2, .. }));
        assert!(err.to_string().starts_with("malformed integer at token 2"));
    }

    #[test]
    fn literal_edge_cases() {
        assert!(matches!(parse_literal("  "), Err(InputError::Empty)));
        assert!(matches!(
            parse_literal("1,,2"),
            Err(InputError::MalformedToken { token: 2, .. })
        ));
        assert_eq!(parse_literal("-5, -7").unwrap().set.as_slice(), &[-7, -5]);
        assert!(parse_literal("9223372036854775808").is_err());
    }

    #[test]
    fn line_format() {
        let text = "# header\n3\n\n1 # trailing\n  2\n3\n";
        let p = parse_lines(text).unwrap();
        assert_eq!(p.set.as_slice(), &[1, 2, 3]);
        assert_eq!(p.duplicates, 1);
        assert!(matches!(
            parse_lines("1\nfoo\n"),
            Err(InputError::MalformedLine { line: 2, .. })
        ));
        assert!(matches!(parse_lines("# only comments\n"), Err(InputError::Empty)));
    }

    #[test]
    fn missing_file_is_unreadable() {
        let src = InputSource::File("/nonexistent/dilset/input".into());
        assert!(matches!(parse_set_input(&src), Err(InputError::Unreadable { .. })));
    }

    proptest! {
        #[test]
        fn literal_round_trip(v in prop::collection::vec(any::<i64>(), 1..50)) {
            let (set, _) = IntSet::from_unsorted(v);
            let again = parse_literal(&format_literal(&set)).unwrap();
            prop_assert_eq!(again.set, set);
            prop_assert_eq!(again.duplicates, 0);
        }
    }
}
