//! The LGR text format: a line-oriented edge list with an explicit loop
//! record.
//!
//! ```text
//! # comment
//! n 4
//! e 0 1
//! e 1 2
//! l 3
//! ```
//!
//! The first non-comment line declares the vertex count; `e u v` records a
//! 2-edge between distinct vertices, `l v` a loop. Ids are 0-based decimals.
//! Serialization is canonical (edges and loops sorted ascending), so parsing
//! a serialized document and serializing it again is the identity.

use boxprod::Graph;

/// Errors raised while parsing an LGR document. Line numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LgrError {
    #[error("SyntaxError: line {line}: {message}")]
    SyntaxError { line: usize, message: String },
    #[error("IdOutOfRange: line {line}: vertex {id} out of range for {n} vertices")]
    IdOutOfRange { line: usize, id: usize, n: usize },
    #[error("DuplicateRecord: line {line}: record repeats an earlier one")]
    DuplicateRecord { line: usize },
    #[error("SelfEdgeViaE: line {line}: a loop must use an 'l' record, not 'e v v'")]
    SelfEdgeViaE { line: usize },
}

fn syntax(line: usize, message: impl Into<String>) -> LgrError {
    LgrError::SyntaxError {
        line,
        message: message.into(),
    }
}

fn parse_id(line: usize, token: &str) -> Result<usize, LgrError> {
    token
        .parse::<usize>()
        .map_err(|_| syntax(line, format!("expected a vertex id, found {token:?}")))
}

/// Parses an LGR document into a graph.
pub fn parse_lgr(text: &str) -> Result<Graph, LgrError> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut loops: Vec<usize> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match (n, tokens.as_slice()) {
            (None, ["n", count]) => {
                n = Some(parse_id(line, count)?);
            }
            (None, _) => {
                return Err(syntax(line, "the first record must be 'n <count>'"));
            }
            (Some(_), ["n", ..]) => {
                return Err(syntax(line, "duplicate 'n' record"));
            }
            (Some(count), ["e", a, b]) => {
                let u = parse_id(line, a)?;
                let v = parse_id(line, b)?;
                if u >= count {
                    return Err(LgrError::IdOutOfRange { line, id: u, n: count });
                }
                if v >= count {
                    return Err(LgrError::IdOutOfRange { line, id: v, n: count });
                }
                if u == v {
                    return Err(LgrError::SelfEdgeViaE { line });
                }
                let pair = (u.min(v), u.max(v));
                if edges.contains(&pair) {
                    return Err(LgrError::DuplicateRecord { line });
                }
                edges.push(pair);
            }
            (Some(count), ["l", a]) => {
                let v = parse_id(line, a)?;
                if v >= count {
                    return Err(LgrError::IdOutOfRange { line, id: v, n: count });
                }
                if loops.contains(&v) {
                    return Err(LgrError::DuplicateRecord { line });
                }
                loops.push(v);
            }
            (Some(_), _) => {
                return Err(syntax(line, format!("unrecognized record {trimmed:?}")));
            }
        }
    }

    let n = n.ok_or_else(|| syntax(text.lines().count().max(1), "missing 'n' record"))?;
    Graph::new(n, &edges, &loops).map_err(|_| syntax(0, "inconsistent records"))
}

/// Serializes a graph canonically: header, then edges sorted ascending, then
/// loops sorted ascending.
pub fn serialize_lgr(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!("n {}\n", g.vertex_count()));
    for (u, v) in g.two_edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    for v in g.loop_vertices() {
        out.push_str(&format!("l {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_documents() {
        assert_eq!(parse_lgr("n 1").unwrap(), Graph::trivial());
        let g = parse_lgr("n 2\ne 0 1\nl 0").unwrap();
        assert_eq!(g.two_edge_count(), 1);
        assert!(g.has_loop(0));
    }

    #[test]
    fn ignores_comments_and_blank_lines() {
        let g = parse_lgr("# a square\n\nn 4\ne 0 1\n# middle\ne 1 2\ne 2 3\ne 0 3\n").unwrap();
        assert_eq!(g.two_edge_count(), 4);
    }

    #[test]
    fn rejects_self_edge_via_e() {
        assert_eq!(
            parse_lgr("n 2\ne 0 0"),
            Err(LgrError::SelfEdgeViaE { line: 2 })
        );
    }

    #[test]
    fn rejects_out_of_range_and_duplicates() {
        assert_eq!(
            parse_lgr("n 2\ne 0 2"),
            Err(LgrError::IdOutOfRange { line: 2, id: 2, n: 2 })
        );
        assert_eq!(
            parse_lgr("n 3\ne 0 1\ne 1 0"),
            Err(LgrError::DuplicateRecord { line: 3 })
        );
        assert_eq!(
            parse_lgr("n 1\nl 0\nl 0"),
            Err(LgrError::DuplicateRecord { line: 3 })
        );
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(matches!(parse_lgr(""), Err(LgrError::SyntaxError { .. })));
        assert!(matches!(parse_lgr("e 0 1"), Err(LgrError::SyntaxError { line: 1, .. })));
        assert!(matches!(
            parse_lgr("n 2\nx 1"),
            Err(LgrError::SyntaxError { line: 2, .. })
        ));
        assert!(matches!(
            parse_lgr("n 2\nn 2"),
            Err(LgrError::SyntaxError { line: 2, .. })
        ));
        assert!(matches!(
            parse_lgr("n two"),
            Err(LgrError::SyntaxError { line: 1, .. })
        ));
    }

    #[test]
    fn serializes_canonically() {
        assert_eq!(serialize_lgr(&Graph::looped_vertex()), "n 1\nl 0\n");
        let g = Graph::new(3, &[(2, 1), (0, 2)], &[2, 0]).unwrap();
        assert_eq!(serialize_lgr(&g), "n 3\ne 0 2\ne 1 2\nl 0\nl 2\n");
    }

    #[test]
    fn roundtrip_is_identity_on_canonical_documents() {
        let docs = ["n 1\n", "n 2\ne 0 1\nl 0\n", "n 4\ne 0 1\ne 0 3\ne 1 2\ne 2 3\n"];
        for doc in docs {
            let g = parse_lgr(doc).unwrap();
            assert_eq!(serialize_lgr(&g), doc);
            let again = parse_lgr(&serialize_lgr(&g)).unwrap();
            assert_eq!(again, g);
        }
    }
}
