//! Plain-text digraph documents.
//!
//! ```text
//! # name: C3
//! n 3
//! 0 1
//! 1 2
//! 2 0
//! ```
//!
//! `#` starts a comment, blank lines are ignored, the first remaining line is
//! the `n <count>` header and every later line is one arc `u v`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphDocument {
    pub name: Option<String>,
    pub vertex_count: usize,
    pub arcs: Vec<(Vertex, Vertex)>,
}

impl DigraphDocument {
    pub fn from_digraph(d: &Digraph, name: Option<String>) -> Self {
        DigraphDocument { name, vertex_count: d.vertex_count(), arcs: d.arcs().to_vec() }
    }

    pub fn to_digraph(&self) -> Result<Digraph> {
        Digraph::new(self.vertex_count, self.arcs.iter().copied())
    }

    /// Parses a document, keeping a leading `# name: ...` comment.
    pub fn parse(input: &str) -> Result<Self> {
        let mut name = None;
        let mut header: Option<usize> = None;
        let mut arcs = Vec::new();
        for (idx, raw) in input.lines().enumerate() {
            let line = idx + 1;
            let (body, comment) = match raw.find('#') {
                Some(i) => (&raw[..i], Some(&raw[i + 1..])),
                None => (raw, None),
            };
            if header.is_none() && name.is_none() {
                if let Some(rest) = comment.and_then(|c| c.trim().strip_prefix("name:")) {
                    name = Some(rest.trim().to_string());
                }
            }
            let fields: Vec<&str> = body.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            match header {
                None => {
                    if fields.len() != 2 || fields[0] != "n" {
                        return Err(syntax(line, "expected header `n <count>`"));
                    }
                    header = Some(number(fields[1], line)?);
                }
                Some(_) => {
                    if fields.len() != 2 {
                        return Err(syntax(line, "expected arc `<u> <v>`"));
                    }
                    arcs.push((number(fields[0], line)?, number(fields[1], line)?, line));
                }
            }
        }
        let vertex_count = header.ok_or_else(|| syntax(input.lines().count().max(1), "missing header `n <count>`"))?;
        // Validate arc by arc so errors carry the offending line.
        let mut seen = std::collections::HashSet::new();
        for &(u, v, line) in &arcs {
            let err = if u == v {
                Some(Error::LoopArc(u))
            } else if u >= vertex_count || v >= vertex_count {
                Some(Error::VertexOutOfRange { vertex: u.max(v), vertex_count })
            } else if !seen.insert((u, v)) {
                Some(Error::DuplicateArc(u, v))
            } else {
                None
            };
            if let Some(e) = err {
                return Err(Error::AtLine { line, source: Box::new(e) });
            }
        }
        Ok(DigraphDocument { name, vertex_count, arcs: arcs.into_iter().map(|(u, v, _)| (u, v)).collect() })
    }

    /// Canonical form: optional name comment, header, arcs sorted.
    pub fn format(&self) -> String {
        let mut arcs = self.arcs.clone();
        arcs.sort_unstable();
        let mut out = String::new();
        if let Some(name) = &self.name {
            let _ = writeln!(out, "# name: {name}");
        }
        let _ = writeln!(out, "n {}", self.vertex_count);
        for (u, v) in arcs {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

fn syntax(line: usize, message: &str) -> Error {
    Error::Syntax { line, message: message.to_string() }
}

fn number(field: &str, line: usize) -> Result<usize> {
    field.parse().map_err(|_| syntax(line, &format!("`{field}` is not a non-negative integer")))
}

pub fn parse_digraph_text(input: &str) -> Result<Digraph> {
    DigraphDocument::parse(input)?.to_digraph()
}

pub fn format_digraph(d: &Digraph) -> String {
    DigraphDocument::from_digraph(d, None).format()
}

pub fn format_named_digraph(d: &Digraph, name: &str) -> String {
    DigraphDocument::from_digraph(d, Some(name.to_string())).format()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_c3() {
        assert_eq!(parse_digraph_text("n 3\n0 1\n1 2\n2 0\n").unwrap(), Digraph::cycle(3));
    }

    #[test]
    fn comments_and_blanks() {
        let text = "# a triangle\n\nn 3   # header\n2 0\n\n0 1 # first\n1 2\n";
        assert_eq!(parse_digraph_text(text).unwrap(), Digraph::cycle(3));
    }

    #[test]
    fn loop_is_reported_with_line() {
        let err = parse_digraph_text("n 2\n0 0\n").unwrap_err();
        assert_eq!(err, Error::AtLine { line: 2, source: Box::new(Error::LoopArc(0)) });
    }

    #[test]
    fn other_errors() {
        assert_eq!(parse_digraph_text("n 2\n0 1\n0 1\n").unwrap_err().root(), &Error::DuplicateArc(0, 1));
        assert_eq!(
            parse_digraph_text("n 2\n0 5\n").unwrap_err().root(),
            &Error::VertexOutOfRange { vertex: 5, vertex_count: 2 }
        );
        assert!(matches!(parse_digraph_text("0 1\n"), Err(Error::Syntax { line: 1, .. })));
        assert!(matches!(parse_digraph_text("n 2\n0 1 2\n"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(parse_digraph_text("n 2\n0 x\n"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(parse_digraph_text("# nothing\n"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn canonical_round_trip() {
        let text = "n 4\n3 0\n0 1\n2 3\n1 2\n";
        let canon = format_digraph(&parse_digraph_text(text).unwrap());
        assert_eq!(canon, "n 4\n0 1\n1 2\n2 3\n3 0\n");
        assert_eq!(format_digraph(&parse_digraph_text(&canon).unwrap()), canon);
    }

    #[test]
    fn name_survives() {
        let doc = DigraphDocument::from_digraph(&Digraph::cycle(6), Some("C6".into()));
        let again = DigraphDocument::parse(&doc.format()).unwrap();
        assert_eq!(again, doc);
    }

    #[test]
    fn empty_digraph() {
        assert_eq!(parse_digraph_text("n 0\n").unwrap().vertex_count(), 0);
    }
}
