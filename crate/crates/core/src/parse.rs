//! Line-oriented text format for graph and Bratteli presentations.
//!
//! A file holds one stanza. `#` starts a comment, blank lines are skipped,
//! identifiers are ASCII alphanumerics and underscores.
//!
//! ```text
//! graph <name>
//!   vertex <id>
//!   edge <id> : <src> -> <rng>
//!   bundle <id> : <src> => <rng>
//!   tail <vertex>
//!   redirect <id> : <src> -> <attach> @ <pos>
//!   pump <attach> : <src>, <src>, ...
//! end
//! ```
//!
//! An edge `e : u -> v` has source u and range v. A bundle is countably
//! many parallel edges. A tail hangs the infinite receiving chain
//! `v <- v.1 <- v.2 <- ...` below its attach vertex; `redirect` lands one
//! named edge at a fixed tail position and `pump` fills every deeper
//! position round-robin from its source list.
//!
//! ```text
//! bratteli <name>
//!   prefix [<matrix>; <matrix>; ...]
//!   repeat <matrix>
//! end
//! ```
//!
//! A matrix is `[[a,b],[c,d]]`, one row per range-level vertex. Level sizes
//! follow from the matrix shapes and vertices and edges are named by the
//! fixed scheme of the bratteli module.

use std::collections::BTreeSet;

use crate::bratteli::{BratteliPresentation, Matrix};
use crate::error::ParseError;
use crate::graph::{Edge, GraphPresentation, Redirect, Tail};

fn is_ident(tok: &str) -> bool {
    !tok.is_empty() && tok.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn tokenize(line: usize, text: &str) -> Result<Vec<String>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_alphanumeric() || c == '_' {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            toks.push(word);
        } else if c == '-' || c == '=' {
            chars.next();
            if chars.peek() == Some(&'>') {
                chars.next();
                toks.push(if c == '-' { "->".into() } else { "=>".into() });
            } else {
                return Err(ParseError::syntax(line, format!("stray `{c}`")));
            }
        } else if ":@,~[];".contains(c) {
            chars.next();
            toks.push(c.to_string());
        } else {
            return Err(ParseError::syntax(line, format!("unexpected character `{c}`")));
        }
    }
    Ok(toks)
}

/// Content lines with their 1-based line numbers, comments stripped.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

/// Parse one graph or Bratteli stanza.
pub fn parse_graph(text: &str) -> Result<GraphPresentation, ParseError> {
    let lines = content_lines(text);
    let Some(&(header_line, header)) = lines.first() else {
        return Err(ParseError::syntax(0, "empty input"));
    };
    let toks = tokenize(header_line, header)?;
    let toks: Vec<&str> = toks.iter().map(String::as_str).collect();
    let g = match toks.as_slice() {
        ["graph", name] if is_ident(name) => {
            parse_graph_body(name, header_line, &lines[1..])?
        }
        ["bratteli", name] if is_ident(name) => {
            parse_bratteli_body(name, header_line, &lines[1..])?
        }
        ["kgraph", _] | ["product", ..] => {
            return Err(ParseError::syntax(
                header_line,
                "this stanza is a higher-rank graph, not a directed graph",
            ));
        }
        _ => {
            return Err(ParseError::syntax(
                header_line,
                "expected `graph <name>` or `bratteli <name>`",
            ));
        }
    };
    g.validate()
        .map_err(|msg| ParseError::structure(header_line, msg))?;
    Ok(g)
}

fn parse_graph_body(
    name: &str,
    header_line: usize,
    lines: &[(usize, &str)],
) -> Result<GraphPresentation, ParseError> {
    let mut g = GraphPresentation::finite(name);
    let mut used: BTreeSet<String> = BTreeSet::new();
    let mut body = Vec::new();
    let mut ended = false;
    for &(ln, raw) in lines {
        if ended {
            return Err(ParseError::syntax(ln, "content after `end`"));
        }
        if raw == "end" {
            ended = true;
        } else {
            body.push((ln, tokenize(ln, raw)?));
        }
    }
    if !ended {
        return Err(ParseError::syntax(header_line, "stanza missing `end`"));
    }

    let claim = |ln: usize, id: &str, used: &mut BTreeSet<String>| {
        if used.insert(id.to_string()) {
            Ok(())
        } else {
            Err(ParseError::DuplicateId { line: ln, id: id.to_string() })
        }
    };

    for (ln, toks) in &body {
        let toks: Vec<&str> = toks.iter().map(String::as_str).collect();
        if let ["vertex", id] = toks.as_slice() {
            if !is_ident(id) {
                return Err(ParseError::syntax(*ln, "bad vertex identifier"));
            }
            claim(*ln, id, &mut used)?;
            g.vertices.push(id.to_string());
        }
    }

    let resolve = |ln: usize, id: &str, g: &GraphPresentation| {
        g.vertex_index(id)
            .ok_or_else(|| ParseError::DanglingEndpoint { line: ln, id: id.to_string() })
    };

    for (ln, toks) in &body {
        let ln = *ln;
        let toks: Vec<&str> = toks.iter().map(String::as_str).collect();
        match toks.as_slice() {
            ["vertex", _] => {}
            ["edge", id, ":", u, "->", v] if is_ident(id) => {
                claim(ln, id, &mut used)?;
                let (src, rng) = (resolve(ln, u, &g)?, resolve(ln, v, &g)?);
                g.edges.push(Edge { name: id.to_string(), src, rng });
            }
            ["bundle", id, ":", u, "=>", v] if is_ident(id) => {
                claim(ln, id, &mut used)?;
                let (src, rng) = (resolve(ln, u, &g)?, resolve(ln, v, &g)?);
                g.bundles.push(Edge { name: id.to_string(), src, rng });
            }
            ["tail", v] => {
                let attach = resolve(ln, v, &g)?;
                if g.tails.iter().any(|t| t.attach == attach) {
                    return Err(ParseError::structure(ln, format!("second tail at `{v}`")));
                }
                g.tails.push(Tail { attach, redirects: Vec::new(), pump: Vec::new() });
            }
            ["redirect", id, ":", u, "->", v, "@", pos] if is_ident(id) => {
                claim(ln, id, &mut used)?;
                let src = resolve(ln, u, &g)?;
                let attach = resolve(ln, v, &g)?;
                let pos: u64 = pos
                    .parse()
                    .map_err(|_| ParseError::syntax(ln, "redirect position must be a number"))?;
                let tail = g
                    .tails
                    .iter_mut()
                    .find(|t| t.attach == attach)
                    .ok_or_else(|| ParseError::structure(ln, format!("no tail at `{v}`")))?;
                tail.redirects.push(Redirect { name: id.to_string(), src, pos });
            }
            ["pump", v, ":", rest @ ..] => {
                let attach = resolve(ln, v, &g)?;
                let mut pump = Vec::new();
                let mut expect_id = true;
                for tok in rest {
                    if expect_id {
                        pump.push(resolve(ln, tok, &g)?);
                    } else if *tok != "," {
                        return Err(ParseError::syntax(ln, "pump sources must be comma separated"));
                    }
                    expect_id = !expect_id;
                }
                if pump.is_empty() || expect_id {
                    return Err(ParseError::syntax(ln, "pump needs a source list"));
                }
                let tail = g
                    .tails
                    .iter_mut()
                    .find(|t| t.attach == attach)
                    .ok_or_else(|| ParseError::structure(ln, format!("no tail at `{v}`")))?;
                if !tail.pump.is_empty() {
                    return Err(ParseError::structure(ln, format!("second pump list at `{v}`")));
                }
                tail.pump = pump;
            }
            _ => return Err(ParseError::syntax(ln, "unrecognized record")),
        }
    }
    Ok(g)
}

fn parse_bratteli_body(
    name: &str,
    header_line: usize,
    lines: &[(usize, &str)],
) -> Result<GraphPresentation, ParseError> {
    let mut prefix: Option<Vec<Matrix>> = None;
    let mut repeat: Option<Matrix> = None;
    let mut ended = false;
    for &(ln, raw) in lines {
        if ended {
            return Err(ParseError::syntax(ln, "content after `end`"));
        }
        if raw == "end" {
            ended = true;
            continue;
        }
        let toks = tokenize(ln, raw)?;
        match toks.first().map(String::as_str) {
            Some("prefix") => {
                if prefix.is_some() {
                    return Err(ParseError::structure(ln, "second `prefix` line"));
                }
                prefix = Some(parse_matrix_list(ln, &toks[1..])?);
            }
            Some("repeat") => {
                if repeat.is_some() {
                    return Err(ParseError::structure(ln, "second `repeat` line"));
                }
                let mut cur = Cursor { line: ln, toks: &toks[1..], pos: 0 };
                let m = parse_matrix(&mut cur)?;
                cur.finish()?;
                repeat = Some(m);
            }
            _ => return Err(ParseError::syntax(ln, "expected `prefix`, `repeat` or `end`")),
        }
    }
    if !ended {
        return Err(ParseError::syntax(header_line, "stanza missing `end`"));
    }
    let Some(repeat) = repeat else {
        return Err(ParseError::structure(header_line, "missing `repeat` line"));
    };
    let b = BratteliPresentation { prefix: prefix.unwrap_or_default(), repeat };
    let mut g = GraphPresentation::finite(name);
    g.bratteli = Some(b);
    Ok(g)
}

struct Cursor<'a> {
    line: usize,
    toks: &'a [String],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.pos).map(String::as_str)
    }

    fn take(&mut self, want: &str) -> Result<(), ParseError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::syntax(self.line, format!("expected `{want}`")))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(ParseError::syntax(self.line, "trailing tokens"))
        }
    }
}

/// `[M1; M2; ...]`, possibly empty.
fn parse_matrix_list(line: usize, toks: &[String]) -> Result<Vec<Matrix>, ParseError> {
    let mut cur = Cursor { line, toks, pos: 0 };
    let mut out = Vec::new();
    cur.take("[")?;
    if cur.peek() != Some("]") {
        out.push(parse_matrix(&mut cur)?);
        while cur.peek() == Some(";") {
            cur.take(";")?;
            out.push(parse_matrix(&mut cur)?);
        }
    }
    cur.take("]")?;
    cur.finish()?;
    Ok(out)
}

/// `[[a,b],[c,d]]`.
fn parse_matrix(cur: &mut Cursor) -> Result<Matrix, ParseError> {
    let mut rows = Vec::new();
    cur.take("[")?;
    rows.push(parse_row(cur)?);
    while cur.peek() == Some(",") {
        cur.take(",")?;
        rows.push(parse_row(cur)?);
    }
    cur.take("]")?;
    Ok(rows)
}

fn parse_row(cur: &mut Cursor) -> Result<Vec<u64>, ParseError> {
    let mut row = Vec::new();
    cur.take("[")?;
    if cur.peek() != Some("]") {
        loop {
            let tok = cur
                .peek()
                .ok_or_else(|| ParseError::syntax(cur.line, "unterminated row"))?;
            let n: u64 = tok
                .parse()
                .map_err(|_| ParseError::syntax(cur.line, "matrix entries must be numbers"))?;
            cur.pos += 1;
            row.push(n);
            if cur.peek() == Some(",") {
                cur.take(",")?;
            } else {
                break;
            }
        }
    }
    cur.take("]")?;
    Ok(row)
}

fn render_matrix(m: &Matrix) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| {
            let entries: Vec<String> = r.iter().map(u64::to_string).collect();
            format!("[{}]", entries.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

/// Write a presentation back out in the input format.
pub fn render_graph(g: &GraphPresentation) -> String {
    let mut out = String::new();
    if let Some(b) = &g.bratteli {
        out.push_str(&format!("bratteli {}\n", g.name));
        let ms: Vec<String> = b.prefix.iter().map(render_matrix).collect();
        out.push_str(&format!("prefix [{}]\n", ms.join("; ")));
        out.push_str(&format!("repeat {}\n", render_matrix(&b.repeat)));
        out.push_str("end\n");
        return out;
    }
    out.push_str(&format!("graph {}\n", g.name));
    for v in &g.vertices {
        out.push_str(&format!("vertex {v}\n"));
    }
    for e in &g.edges {
        out.push_str(&format!(
            "edge {} : {} -> {}\n",
            e.name, g.vertices[e.src], g.vertices[e.rng]
        ));
    }
    for b in &g.bundles {
        out.push_str(&format!(
            "bundle {} : {} => {}\n",
            b.name, g.vertices[b.src], g.vertices[b.rng]
        ));
    }
    for t in &g.tails {
        let attach = &g.vertices[t.attach];
        out.push_str(&format!("tail {attach}\n"));
        for r in &t.redirects {
            out.push_str(&format!(
                "redirect {} : {} -> {attach} @ {}\n",
                r.name, g.vertices[r.src], r.pos
            ));
        }
        if !t.pump.is_empty() {
            let srcs: Vec<&str> = t.pump.iter().map(|&v| g.vertices[v].as_str()).collect();
            out.push_str(&format!("pump {attach} : {}\n", srcs.join(", ")));
        }
    }
    out.push_str("end\n");
    out
}

/// Read and parse a graph or Bratteli stanza from a file.
pub fn parse_graph_file(path: &std::path::Path) -> Result<GraphPresentation, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    parse_graph(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loop_graph_round_trips() {
        let text = "graph loop\nvertex v\nedge e : v -> v\nend\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.vertices, vec!["v"]);
        assert_eq!(g.edges.len(), 1);
        assert_eq!(render_graph(&g), text);
        let again = parse_graph(&render_graph(&g)).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn comments_and_spacing_are_ignored() {
        let g = parse_graph(
            "# a loop\n\ngraph loop # header\n  vertex v\n  edge e:v->v\nend\n",
        )
        .unwrap();
        assert_eq!(g.edges[0].name, "e");
        assert_eq!(g.edges[0].src, 0);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_graph("graph g\nvertex v\nedge e : v -> w\nend\n").unwrap_err();
        assert!(matches!(err, ParseError::DanglingEndpoint { line: 3, .. }));
        let err = parse_graph("graph g\nvertex v\nvertex v\nend\n").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateId { line: 3, .. }));
        let err = parse_graph("graph g\nvertex v\nend\nvertex w\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 4, .. }));
        let err = parse_graph("graph g\nwedge e\nend\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }));
    }

    #[test]
    fn tail_records_parse() {
        let g = parse_graph(
            "graph d\nvertex u\nvertex v\nvertex w\n\
             tail v\nredirect g0 : u -> v @ 0\nredirect g1 : w -> v @ 1\npump v : u, w\nend\n",
        )
        .unwrap();
        let t = &g.tails[0];
        assert_eq!(g.vertices[t.attach], "v");
        assert_eq!(t.redirects.len(), 2);
        assert_eq!(t.redirects[1].pos, 1);
        assert_eq!(t.pump, vec![0, 2]);
        let again = parse_graph(&render_graph(&g)).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn bratteli_stanza_parses() {
        let g = parse_graph("bratteli uhf\nprefix []\nrepeat [[2]]\nend\n").unwrap();
        let b = g.bratteli.as_ref().unwrap();
        assert_eq!(b.prefix_len(), 0);
        assert_eq!(b.repeat, vec![vec![2]]);
        let two = parse_graph(
            "bratteli pascal\nprefix [[[1,1]]; [[1,1],[1,1]]]\nrepeat [[1,1],[1,1]]\nend\n",
        )
        .unwrap();
        assert_eq!(two.bratteli.as_ref().unwrap().prefix_len(), 2);
        let again = parse_graph(&render_graph(&two)).unwrap();
        assert_eq!(again, two);
    }

    #[test]
    fn bratteli_shape_errors_are_structural() {
        let err = parse_graph("bratteli b\nprefix [[[1,1]]]\nrepeat [[1]]\nend\n").unwrap_err();
        assert!(matches!(err, ParseError::Structure { .. }));
        let err = parse_graph("bratteli b\nprefix []\nrepeat [[0]]\nend\n").unwrap_err();
        assert!(matches!(err, ParseError::Structure { .. }));
    }
}
