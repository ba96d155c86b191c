//! Flat-file formats: a `# <kind> key=value…` header followed by one
//! permutation (space-separated, 1-based) or one transition index per line.

use std::fmt;
use std::io::{BufRead, Write};

use crate::aux::{AuxCode, AuxFamily};
use crate::error::{Error, Result};
use crate::gray::transitions_of;
use crate::perm::Permutation;

/// Parsed header line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub kind: String,
    pub fields: Vec<(String, String)>,
}

impl Header {
    pub fn new(kind: &str) -> Self {
        Header {
            kind: kind.to_string(),
            fields: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// A field parsed as a number.
    pub fn number<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let v = self
            .get(key)
            .ok_or_else(|| Error::Parse(format!("header lacks `{key}=`")))?;
        v.parse()
            .map_err(|_| Error::Parse(format!("header field {key}={v} is not a number")))
    }

    pub fn parse(line: &str) -> Result<Header> {
        let rest = line
            .strip_prefix('#')
            .ok_or_else(|| Error::Parse(format!("expected a `#` header, got {line:?}")))?;
        let mut parts = rest.split_whitespace();
        let kind = parts
            .next()
            .ok_or_else(|| Error::Parse("empty header".into()))?
            .to_string();
        let fields = parts
            .map(|p| {
                p.split_once('=')
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .ok_or_else(|| Error::Parse(format!("header token {p:?} is not key=value")))
            })
            .collect::<Result<_>>()?;
        Ok(Header { kind, fields })
    }

    /// The declared number of lines, if any.
    fn declared_len(&self) -> Option<Result<u128>> {
        ["M", "size"]
            .iter()
            .find(|k| self.get(k).is_some())
            .map(|k| self.number(k))
    }
}

impl fmt::Display for Header {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "# {}", self.kind)?;
        for (k, v) in &self.fields {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

pub fn parse_perm(s: &str) -> Result<Permutation> {
    let values = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("{t:?} is not a positive integer")))
        })
        .collect::<Result<Vec<_>>>()?;
    Permutation::from_images(&values)
}

/// Writes a header and one permutation per line.
pub fn write_words<W, I>(out: &mut W, header: &Header, words: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = Permutation>,
{
    writeln!(out, "{header}")?;
    for w in words {
        writeln!(out, "{w}")?;
    }
    Ok(())
}

fn body_lines<R: BufRead>(input: R) -> Result<(Header, Vec<String>)> {
    let mut lines = input.lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::Parse("empty file".into()))??;
    let header = Header::parse(first.trim())?;
    let mut body = Vec::new();
    for line in lines {
        let line = line?;
        let t = line.trim();
        if !t.is_empty() && !t.starts_with('#') {
            body.push(t.to_string());
        }
    }
    Ok((header, body))
}

/// Reads a permutation-per-line file, checking lengths and the declared size.
pub fn read_words<R: BufRead>(input: R) -> Result<(Header, Vec<Permutation>)> {
    let (header, body) = body_lines(input)?;
    let words = body
        .iter()
        .enumerate()
        .map(|(i, l)| parse_perm(l).map_err(|e| Error::Parse(format!("line {}: {e}", i + 2))))
        .collect::<Result<Vec<_>>>()?;
    if let Some(n) = words.first().map(Permutation::len) {
        if let Some(bad) = words.iter().position(|w| w.len() != n) {
            return Err(Error::Parse(format!(
                "line {}: length {} differs from {n}",
                bad + 2,
                words[bad].len()
            )));
        }
        for key in ["n", "k", "order"] {
            if header.get(key).is_some() && header.number::<usize>(key)? != n {
                return Err(Error::Parse(format!(
                    "header {key} differs from the length {n}"
                )));
            }
        }
    }
    if let Some(m) = header.declared_len() {
        let m = m?;
        if m != words.len() as u128 {
            return Err(Error::Parse(format!(
                "header declares {m} codewords, file has {}",
                words.len()
            )));
        }
    }
    Ok((header, words))
}

/// Writes an auxiliary code in certificate form: one transition per line.
pub fn write_aux_certificate<W: Write>(out: &mut W, code: &AuxCode) -> Result<()> {
    let header = aux_header(code);
    writeln!(out, "{header}")?;
    for j in code.gray_code(u128::MAX)?.transitions() {
        writeln!(out, "{j}")?;
    }
    Ok(())
}

pub fn aux_header(code: &AuxCode) -> Header {
    Header::new("aux")
        .with("k", code.order())
        .with("M", code.size())
        .with("family", code.family())
}

/// Reads an auxiliary code whose body is either transition indices or
/// permutations starting at the identity.
pub fn read_aux_certificate<R: BufRead>(input: R) -> Result<AuxCode> {
    let (header, body) = body_lines(input)?;
    if header.kind != "aux" {
        return Err(Error::Parse(format!(
            "expected an aux header, got `{}`",
            header.kind
        )));
    }
    let k: usize = header.number("k")?;
    let family: AuxFamily = match header.get("family") {
        Some(f) => f.parse()?,
        None => AuxFamily::SearchedParityPreserving,
    };
    let single = body.iter().all(|l| l.split_whitespace().count() == 1);
    let transitions: Vec<u8> = if single && k > 1 {
        body.iter()
            .enumerate()
            .map(|(i, l)| {
                l.parse::<u8>()
                    .map_err(|_| Error::Parse(format!("line {}: {l:?} is not an index", i + 2)))
            })
            .collect::<Result<_>>()?
    } else {
        let words = body
            .iter()
            .map(|l| parse_perm(l))
            .collect::<Result<Vec<_>>>()?;
        if words.first().is_some_and(|w| !w.is_identity()) {
            return Err(Error::Parse(
                "the first codeword must be the identity".into(),
            ));
        }
        transitions_of(&words)?
    };
    if let Some(m) = header.declared_len() {
        if m? != transitions.len() as u128 {
            return Err(Error::Parse(format!(
                "header declares M={}, body has {} entries",
                header.get("M").unwrap_or("?"),
                transitions.len()
            )));
        }
    }
    AuxCode::from_transitions(k, family, transitions)
}
