//! Plain-text structure format:
//!
//! ```text
//! signature E/2 P/1
//! size 3
//! E: (0,1) (1,0)
//! P: (2)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Relations without a
//! line are empty.

use std::fmt::Write as _;
use std::sync::Arc;

use super::{FinStructure, Signature};
use crate::error::{Error, Result};

pub fn write_structure(m: &FinStructure) -> String {
    let mut out = String::from("signature");
    for rel in m.signature().relations() {
        write!(out, " {}/{}", rel.name, rel.arity).unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "size {}", m.size()).unwrap();
    for (r, rel) in m.signature().relations().iter().enumerate() {
        write!(out, "{}:", rel.name).unwrap();
        for t in m.relation(r) {
            let body: Vec<String> = t.iter().map(usize::to_string).collect();
            write!(out, " ({})", body.join(",")).unwrap();
        }
        writeln!(out).unwrap();
    }
    out
}

pub fn parse_structure(text: &str) -> Result<FinStructure> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));

    let sig_line = lines
        .next()
        .ok_or_else(|| Error::Parse("missing `signature` line".into()))?;
    let rest = sig_line
        .strip_prefix("signature")
        .ok_or_else(|| Error::Parse(format!("expected `signature`, found `{sig_line}`")))?;
    let mut symbols = Vec::new();
    for item in rest.split_whitespace() {
        let (name, arity) = item
            .rsplit_once('/')
            .ok_or_else(|| Error::Parse(format!("bad relation symbol `{item}`")))?;
        let arity: usize = arity
            .parse()
            .map_err(|_| Error::Parse(format!("bad arity in `{item}`")))?;
        symbols.push((name.to_string(), arity));
    }
    let sig = Arc::new(Signature::new(symbols)?);

    let size_line = lines
        .next()
        .ok_or_else(|| Error::Parse("missing `size` line".into()))?;
    let size: usize = size_line
        .strip_prefix("size")
        .map(str::trim)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("expected `size n`, found `{size_line}`")))?;

    let mut m = FinStructure::empty(Arc::clone(&sig), size);
    for line in lines {
        let (name, body) = line
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `name: tuples`, found `{line}`")))?;
        let r = sig
            .index_of(name.trim())
            .ok_or_else(|| Error::Parse(format!("unknown relation `{}`", name.trim())))?;
        for tuple in parse_tuples(body)? {
            m.insert(r, tuple)?;
        }
    }
    Ok(m)
}

fn parse_tuples(body: &str) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        let inner_start = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected `(` at `{rest}`")))?;
        let close = inner_start
            .find(')')
            .ok_or_else(|| Error::Parse("unterminated tuple".into()))?;
        let tuple = inner_start[..close]
            .split(',')
            .map(|e| {
                e.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad element `{}`", e.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(tuple);
        rest = inner_start[close + 1..].trim_start();
    }
    Ok(out)
}
