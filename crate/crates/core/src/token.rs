//! Token grammar for group elements and tree vertices.
//!
//! ```text
//! element  := block ( " | " edge " | " block )*
//! vertex   := block ( " | " edge )+  |  "o"
//! block    := "1" | term ( " " term )*
//! term     := gen [ "^" int ]
//! gen      := "a"<i> | "c"<i> | "z"        (1-based indices per vertex)
//! edge     := "e"<k> [ "^-1" ]             (k = 1-based edge id)
//! ```
//!
//! Handle generators print as `a1..a2g`, designated boundary generators as
//! `c1..c(b-1)`, the central fiber as `z`. Printing a canonical form and
//! parsing it back is exact.

use crate::block::BlockElement;
use crate::error::{Error, Result};
use crate::fund::{GroupElement, PathBuilder};
use crate::graph::{DirEdge, EdgeId, GraphOfGroups};
use crate::surface::SurfaceData;
use crate::tree::TreeVertex;
use crate::words::FreeWord;
use std::fmt;
use std::sync::Arc;

fn write_block(f: &mut fmt::Formatter<'_>, b: &BlockElement) -> fmt::Result {
    if b.is_identity() {
        return write!(f, "1");
    }
    let g2 = 2 * b.surface.genus;
    let mut first = true;
    for &(gen, exp) in b.base.runs() {
        if !first {
            write!(f, " ")?;
        }
        first = false;
        if gen < g2 {
            write!(f, "a{}", gen + 1)?;
        } else {
            write!(f, "c{}", gen - g2 + 1)?;
        }
        if exp != 1 {
            write!(f, "^{exp}")?;
        }
    }
    if b.fiber != 0 {
        if !first {
            write!(f, " ")?;
        }
        write!(f, "z")?;
        if b.fiber != 1 {
            write!(f, "^{}", b.fiber)?;
        }
    }
    Ok(())
}

fn write_edge(f: &mut fmt::Formatter<'_>, d: DirEdge) -> fmt::Result {
    write!(f, "e{}", d.edge.0 + 1)?;
    if !d.forward {
        write!(f, "^-1")?;
    }
    Ok(())
}

impl fmt::Display for BlockElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_block(f, self)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_block(f, self.head_syllable())?;
        for (d, b) in self.edge_syllables() {
            write!(f, " | ")?;
            write_edge(f, *d)?;
            write!(f, " | ")?;
            write_block(f, b)?;
        }
        Ok(())
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_base() {
            return write!(f, "o");
        }
        let mut first = true;
        for (rep, d) in self.steps() {
            if !first {
                write!(f, " | ")?;
            }
            first = false;
            write_block(f, rep)?;
            write!(f, " | ")?;
            write_edge(f, *d)?;
        }
        Ok(())
    }
}

fn parse_int(s: &str) -> Result<i64> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
}

fn parse_block(surface: SurfaceData, text: &str) -> Result<BlockElement> {
    let text = text.trim();
    if text == "1" {
        return Ok(BlockElement::identity(surface));
    }
    let g2 = 2 * surface.genus;
    let mut runs: Vec<(u32, i64)> = Vec::new();
    let mut fiber = 0i64;
    for term in text.split_whitespace() {
        let (sym, exp) = match term.split_once('^') {
            Some((s, e)) => (s, parse_int(e)?),
            None => (term, 1),
        };
        if sym == "z" {
            fiber += exp;
            continue;
        }
        let (kind, idx) = sym.split_at(1);
        let i: u32 = idx
            .parse()
            .map_err(|_| Error::Parse(format!("bad generator {term:?}")))?;
        let gen = match kind {
            "a" if i >= 1 && i <= g2 => i - 1,
            "c" if i >= 1 && i < surface.boundary_count => g2 + i - 1,
            _ => return Err(Error::Parse(format!("generator {term:?} out of range"))),
        };
        runs.push((gen, exp));
    }
    BlockElement::new(surface, FreeWord::reduce(&runs), fiber)
}

fn parse_edge(graph: &GraphOfGroups, text: &str) -> Result<DirEdge> {
    let text = text.trim();
    let (body, forward) = match text.strip_suffix("^-1") {
        Some(b) => (b, false),
        None => (text, true),
    };
    let idx: usize = body
        .strip_prefix('e')
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad edge token {text:?}")))?;
    if idx < 1 || idx > graph.edge_count() {
        return Err(Error::Parse(format!("edge id {idx} out of range")));
    }
    Ok(DirEdge {
        edge: EdgeId(idx - 1),
        forward,
    })
}

/// Parses an element in the token grammar; the result is canonicalized.
pub fn parse_element(graph: &Arc<GraphOfGroups>, text: &str) -> Result<GroupElement> {
    let parts: Vec<&str> = text.split('|').map(str::trim).collect();
    if parts.len() % 2 == 0 {
        return Err(Error::Parse(
            "element must alternate block | edge | block".into(),
        ));
    }
    let mut b = PathBuilder::new(graph.clone());
    b.push_block(&parse_block(graph.surface(graph.base_vertex()), parts[0])?)?;
    for chunk in parts[1..].chunks(2) {
        let d = parse_edge(graph, chunk[0])?;
        b.push_edge(d)?;
        let v = b.current_vertex();
        b.push_block(&parse_block(graph.surface(v), chunk[1])?)?;
    }
    b.finish_element()
}

/// Parses a tree vertex (element grammar truncated at the last edge, or `o`).
pub fn parse_vertex(graph: &Arc<GraphOfGroups>, text: &str) -> Result<TreeVertex> {
    let text = text.trim();
    if text == "o" {
        return Ok(TreeVertex::base(graph));
    }
    let parts: Vec<&str> = text.split('|').map(str::trim).collect();
    if parts.len() % 2 != 0 {
        return Err(Error::Parse(
            "vertex must alternate block | edge, ending with an edge".into(),
        ));
    }
    let mut b = PathBuilder::new(graph.clone());
    for chunk in parts.chunks(2) {
        let v = b.current_vertex();
        b.push_block(&parse_block(graph.surface(v), chunk[0])?)?;
        b.push_edge(parse_edge(graph, chunk[1])?)?;
    }
    Ok(b.finish_vertex())
}
