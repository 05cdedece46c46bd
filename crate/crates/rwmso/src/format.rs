//! Text formats for labeled graphs and parse trees.
//!
//! Graph:
//!
//! ```text
//! p graph <n> <m> <t>
//! v <id> <t-bit label string>
//! e <u> <v>
//! ```
//!
//! Vertex lines are optional (labels default to all-zero). Lines starting
//! with `c` and blank lines are ignored.
//!
//! Parse tree: a header line `t=<width>` followed by
//! `tree := "(v)" | "(o" MAT MAT MAT tree tree ")"` where `MAT` is `t` rows of
//! `t` bits separated by `;`, row `i` being the image of label `i`. The
//! matrices are `g`, `f1`, `f2` in that order. Both reader and writer are
//! iterative, so trees of any depth are accepted.

use std::fmt::Write as _;

use rwmso_core::bits::MAX_LABEL_WIDTH;
use rwmso_core::{Composition, LabelVec, ParseNode, ParseTree, ParseTreeBuilder, Relabeling, Structure};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Graph { line: usize, message: String },
    #[error("parse tree, token {token}: {message}")]
    Tree { token: usize, message: String },
}

fn graph_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Graph {
        line,
        message: message.into(),
    }
}

fn parse_bits(text: &str, width: usize) -> Option<LabelVec> {
    if text.len() != width || !text.bytes().all(|b| b == b'0' || b == b'1') {
        return None;
    }
    Some(LabelVec::from_labels(
        text.bytes()
            .enumerate()
            .filter(|&(_, b)| b == b'1')
            .map(|(i, _)| i + 1),
    ))
}

pub fn parse_graph(text: &str) -> Result<Structure, FormatError> {
    let mut graph: Option<(Structure, usize)> = None;
    let mut edges_seen = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first().copied() {
            None | Some("c") => continue,
            Some("p") => {
                if graph.is_some() {
                    return Err(graph_err(line, "second header line"));
                }
                let [_, "graph", n, m, t] = fields[..] else {
                    return Err(graph_err(line, "expected `p graph <n> <m> <t>`"));
                };
                let num = |s: &str| s.parse::<usize>().map_err(|_| graph_err(line, format!("bad number `{s}`")));
                let (n, m, t) = (num(n)?, num(m)?, num(t)?);
                let s = Structure::new(n, t).map_err(|e| graph_err(line, e.to_string()))?;
                graph = Some((s, m));
            }
            Some(kind @ ("v" | "e")) => {
                let Some((g, _)) = graph.as_mut() else {
                    return Err(graph_err(line, "missing header line"));
                };
                if fields.len() != 3 {
                    return Err(graph_err(line, format!("expected `{kind}` and two fields")));
                }
                let id = |s: &str| {
                    s.parse::<usize>()
                        .ok()
                        .filter(|&v| v < g.len())
                        .ok_or_else(|| graph_err(line, format!("bad vertex id `{s}`")))
                };
                if kind == "v" {
                    let v = id(fields[1])?;
                    let label = parse_bits(fields[2], g.width())
                        .ok_or_else(|| graph_err(line, format!("expected {} label bits", g.width())))?;
                    g.set_label(v, label).map_err(|e| graph_err(line, e.to_string()))?;
                } else {
                    let (u, v) = (id(fields[1])?, id(fields[2])?);
                    if u == v {
                        return Err(graph_err(line, "self-loop"));
                    }
                    if g.has_edge(u, v) {
                        return Err(graph_err(line, "duplicate edge"));
                    }
                    g.add_edge(u, v).map_err(|e| graph_err(line, e.to_string()))?;
                    edges_seen += 1;
                }
            }
            Some(other) => return Err(graph_err(line, format!("unknown line type `{other}`"))),
        }
    }
    let (g, m) = graph.ok_or_else(|| graph_err(0, "missing header line"))?;
    if m != edges_seen {
        return Err(graph_err(0, format!("header declares {m} edges, found {edges_seen}")));
    }
    Ok(g)
}

pub fn print_graph(g: &Structure) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p graph {} {} {}", g.len(), g.edge_count(), g.width());
    for v in 0..g.len() {
        let label = g.label(v);
        if !label.is_zero() {
            let _ = writeln!(out, "v {v} {}", label.to_bit_string(g.width()));
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

fn tokens(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        if ch == '(' || ch == ')' || ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(&text[s..i]);
            }
            if !ch.is_whitespace() {
                out.push(&text[i..i + 1]);
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(&text[s..]);
    }
    out
}

fn parse_matrix(text: &str, width: usize) -> Option<Relabeling> {
    let rows: Option<Vec<LabelVec>> = text.split(';').map(|r| parse_bits(r, width)).collect();
    Relabeling::from_rows(width, &rows?).ok()
}

fn print_matrix(f: &Relabeling, out: &mut String) {
    for (i, row) in f.rows().enumerate() {
        if i > 0 {
            out.push(';');
        }
        out.push_str(&row.to_bit_string(f.width()));
    }
}

pub fn parse_tree_from_text(text: &str) -> Result<ParseTree, FormatError> {
    let mut lines = text.trim_start().splitn(2, '\n');
    let header = lines.next().unwrap_or("").trim();
    let body = lines.next().unwrap_or("");
    let tree_err = |token: usize, message: String| FormatError::Tree { token, message };
    let width: usize = header
        .strip_prefix("t=")
        .and_then(|w| w.trim().parse().ok())
        .filter(|&w| (1..=MAX_LABEL_WIDTH).contains(&w))
        .ok_or_else(|| tree_err(0, format!("expected header `t=<width>`, found `{header}`")))?;
    let toks = tokens(body);
    let mut builder = ParseTreeBuilder::new(width).map_err(|e| tree_err(0, e.to_string()))?;
    // open compositions and the children read so far
    let mut stack: Vec<(Composition, Vec<usize>)> = Vec::new();
    let mut root = None;
    let mut i = 0;
    let expect = |i: usize, want: &str| -> Result<(), FormatError> {
        match toks.get(i) {
            Some(&t) if t == want => Ok(()),
            Some(&t) => Err(tree_err(i, format!("expected `{want}`, found `{t}`"))),
            None => Err(tree_err(i, format!("expected `{want}`, found end of input"))),
        }
    };
    while i < toks.len() {
        if root.is_some() {
            return Err(tree_err(i, format!("trailing input `{}`", toks[i])));
        }
        let finished = match toks[i] {
            "(" => match toks.get(i + 1).copied() {
                Some("v") => {
                    expect(i + 2, ")")?;
                    i += 3;
                    Some(builder.leaf())
                }
                Some("o") => {
                    let mut mats = [Relabeling::identity(width); 3];
                    for (k, m) in mats.iter_mut().enumerate() {
                        let at = i + 2 + k;
                        let tok = toks.get(at).copied().unwrap_or(")");
                        if tok == "(" || tok == ")" {
                            return Err(tree_err(at, "expected three matrices".into()));
                        }
                        *m = parse_matrix(tok, width).ok_or_else(|| {
                            tree_err(at, format!("`{tok}` is not a {width}x{width} matrix"))
                        })?;
                    }
                    let op = Composition::new(mats[0], mats[1], mats[2]).map_err(|e| tree_err(i, e.to_string()))?;
                    stack.push((op, Vec::new()));
                    i += 5;
                    None
                }
                Some(t) => return Err(tree_err(i + 1, format!("expected `v` or `o`, found `{t}`"))),
                None => return Err(tree_err(i + 1, "unexpected end of input".into())),
            },
            ")" => {
                let Some((op, kids)) = stack.pop() else {
                    return Err(tree_err(i, "unbalanced `)`".into()));
                };
                if kids.len() != 2 {
                    return Err(tree_err(i, format!("composition has {} subtrees, expected 2", kids.len())));
                }
                i += 1;
                Some(
                    builder
                        .compose(op, kids[0], kids[1])
                        .map_err(|e| tree_err(i, e.to_string()))?,
                )
            }
            t => return Err(tree_err(i, format!("unexpected `{t}`"))),
        };
        if let Some(node) = finished {
            match stack.last_mut() {
                Some((_, kids)) if kids.len() < 2 => kids.push(node),
                Some(_) => return Err(tree_err(i, "composition has more than 2 subtrees".into())),
                None => root = Some(node),
            }
        }
    }
    let root = root.ok_or_else(|| tree_err(toks.len(), "incomplete tree".into()))?;
    builder.finish(root).map_err(|e| tree_err(toks.len(), e.to_string()))
}

pub fn print_parse_tree(tree: &ParseTree) -> String {
    enum Item {
        Node(usize),
        Close,
    }
    let mut out = format!("t={}\n", tree.width());
    let mut stack = vec![Item::Node(tree.root())];
    while let Some(item) = stack.pop() {
        match item {
            Item::Close => out.push(')'),
            Item::Node(v) => match tree.nodes()[v] {
                ParseNode::Leaf => out.push_str("(v)"),
                ParseNode::Compose { op, left, right } => {
                    out.push_str("(o ");
                    for (k, m) in [op.g, op.f1, op.f2].iter().enumerate() {
                        if k > 0 {
                            out.push(' ');
                        }
                        print_matrix(m, &mut out);
                    }
                    out.push(' ');
                    stack.push(Item::Close);
                    stack.push(Item::Node(right));
                    stack.push(Item::Node(left));
                }
            },
        }
    }
    out.push('\n');
    out
}
