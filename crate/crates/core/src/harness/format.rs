//! Plain-text instance files.
//!
//! ```text
//! # comments start with '#' and run to the end of the line
//! version 1
//! name tadpole-10-3
//! n 14
//! root 0
//! sequence 1 1
//! edges
//! 0 1
//! 1 2
//! ```
//!
//! Header keys may come in any order but each at most once; `name` is
//! optional, runs to the end of the line and cannot contain `#`; `sequence`
//! may be empty. Everything after the `edges` line is one `u v` pair per
//! line. Vertex ids are 0-based.

use std::fmt::Write as _;

use thiserror::Error;

use crate::game::Instance;
use crate::graph::{Graph, GraphError};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    /// `line` and `column` are 1-based.
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unsupported format version {0}")]
    UnknownVersion(u32),
    #[error("invalid graph: {0}")]
    InvalidGraph(#[from] GraphError),
}

/// An instance together with its optional name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub name: Option<String>,
    pub instance: Instance,
}

impl InstanceFile {
    pub fn new(name: Option<String>, instance: Instance) -> Self {
        InstanceFile { name, instance }
    }

    pub fn named(name: impl Into<String>, instance: Instance) -> Self {
        InstanceFile {
            name: Some(name.into()),
            instance,
        }
    }
}

/// Whitespace-separated tokens of one line with their 1-based columns,
/// comments stripped.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in content.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &content[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &content[s..]));
    }
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(line: usize, (col, tok): (usize, &str), what: &str) -> Result<T, FormatError> {
    tok.parse()
        .map_err(|_| err(line, col, format!("expected {what}, found `{tok}`")))
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, FormatError> {
    let mut version: Option<u32> = None;
    let mut name: Option<String> = None;
    let mut n: Option<usize> = None;
    let mut root: Option<usize> = None;
    let mut sequence: Option<Vec<usize>> = None;
    let mut edges: Option<Vec<(usize, usize)>> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let toks = tokens(raw);
        let Some(&(col, key)) = toks.first() else {
            continue;
        };
        if let Some(list) = edges.as_mut() {
            if toks.len() != 2 {
                return Err(err(line, col, format!("expected an edge `u v`, found {} fields", toks.len())));
            }
            list.push((number(line, toks[0], "a vertex id")?, number(line, toks[1], "a vertex id")?));
            continue;
        }
        let args = &toks[1..];
        let single = |what: &str| -> Result<(usize, &str), FormatError> {
            match args {
                [one] => Ok(*one),
                [] => Err(err(line, col + key.len(), format!("`{key}` needs {what}"))),
                [_, extra, ..] => Err(err(line, extra.0, format!("unexpected `{}` after `{key}`", extra.1))),
            }
        };
        let duplicate = |seen: bool| -> Result<(), FormatError> {
            if seen {
                Err(err(line, col, format!("duplicate `{key}`")))
            } else {
                Ok(())
            }
        };
        match key {
            "version" => {
                duplicate(version.is_some())?;
                let v: u32 = number(line, single("a number")?, "a version number")?;
                if v != FORMAT_VERSION {
                    return Err(FormatError::UnknownVersion(v));
                }
                version = Some(v);
            }
            "name" => {
                duplicate(name.is_some())?;
                let content = raw.split('#').next().unwrap_or("");
                let rest = content[col - 1 + key.len()..].trim();
                if rest.is_empty() {
                    return Err(err(line, col + key.len(), "`name` needs a value"));
                }
                name = Some(rest.to_string());
            }
            "n" => {
                duplicate(n.is_some())?;
                n = Some(number(line, single("a vertex count")?, "a vertex count")?);
            }
            "root" => {
                duplicate(root.is_some())?;
                root = Some(number(line, single("a vertex id")?, "a vertex id")?);
            }
            "sequence" => {
                duplicate(sequence.is_some())?;
                sequence = Some(
                    args.iter()
                        .map(|&t| number(line, t, "a firefighter count"))
                        .collect::<Result<_, _>>()?,
                );
            }
            "edges" => {
                if let Some(extra) = args.first() {
                    return Err(err(line, extra.0, "`edges` takes no arguments"));
                }
                edges = Some(Vec::new());
            }
            other => return Err(err(line, col, format!("unknown key `{other}`"))),
        }
    }

    let end = last_line + 1;
    if version.is_none() {
        return Err(err(end, 1, "missing `version`"));
    }
    let n = n.ok_or_else(|| err(end, 1, "missing `n`"))?;
    let root = root.ok_or_else(|| err(end, 1, "missing `root`"))?;
    let sequence = sequence.ok_or_else(|| err(end, 1, "missing `sequence`"))?;
    let edges = edges.ok_or_else(|| err(end, 1, "missing `edges` section"))?;
    let graph = Graph::new(n, edges, root)?;
    Ok(InstanceFile {
        name,
        instance: Instance::new(graph, sequence),
    })
}

/// Canonical text: header in fixed order, edges sorted.
pub fn serialize_instance(file: &InstanceFile) -> String {
    let inst = &file.instance;
    let mut out = String::new();
    writeln!(out, "version {FORMAT_VERSION}").unwrap();
    if let Some(name) = &file.name {
        writeln!(out, "name {name}").unwrap();
    }
    writeln!(out, "n {}", inst.n()).unwrap();
    writeln!(out, "root {}", inst.graph.root()).unwrap();
    out.push_str("sequence");
    for f in &inst.sequence {
        write!(out, " {f}").unwrap();
    }
    out.push('\n');
    out.push_str("edges\n");
    for (u, v) in inst.graph.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}
