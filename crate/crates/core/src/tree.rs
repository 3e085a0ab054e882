//! Bass-Serre tree geometry.
//!
//! A tree vertex is a coset of a vertex group, named by its canonical
//! decorated path from the base vertex `o`: alternating coset representatives
//! and directed edges, with the final vertex-group syllable dropped. Canonical
//! paths are prefix-closed, so the geodesic from `o` to a vertex is literally
//! the sequence of path prefixes, and distances reduce to longest-common-
//! prefix arithmetic.

use crate::block::BlockElement;
use crate::error::{Error, Result};
use crate::fund::GroupElement;
use crate::graph::{DirEdge, GraphOfGroups, VertexId};
use crate::words::FreeWord;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct TreeVertex {
    pub(crate) graph: Arc<GraphOfGroups>,
    /// `steps[j] = (coset representative, edge)`; empty means the base vertex.
    pub(crate) steps: Vec<(BlockElement, DirEdge)>,
    /// Graph vertex underlying this tree vertex.
    pub(crate) end: VertexId,
}

impl PartialEq for TreeVertex {
    fn eq(&self, other: &Self) -> bool {
        self.graph.same_graph(&other.graph) && self.steps == other.steps
    }
}
impl Eq for TreeVertex {}
impl Hash for TreeVertex {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.graph.fingerprint().hash(state);
        self.steps.hash(state);
    }
}

impl TreeVertex {
    /// The base vertex `o`.
    pub fn base(graph: &Arc<GraphOfGroups>) -> Self {
        TreeVertex {
            graph: graph.clone(),
            steps: Vec::new(),
            end: graph.base_vertex(),
        }
    }

    pub fn graph(&self) -> &Arc<GraphOfGroups> {
        &self.graph
    }

    /// Number of tree edges from `o`.
    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn is_base(&self) -> bool {
        self.steps.is_empty()
    }

    /// Graph vertex label at this tree vertex.
    pub fn vertex_label(&self) -> VertexId {
        self.end
    }

    pub fn steps(&self) -> &[(BlockElement, DirEdge)] {
        &self.steps
    }

    /// The depth-`d` ancestor (prefix of the canonical path).
    pub fn prefix(&self, d: usize) -> TreeVertex {
        assert!(d <= self.depth());
        let steps: Vec<_> = self.steps[..d].to_vec();
        let end = steps
            .last()
            .map(|(_, e)| self.graph.target(*e))
            .unwrap_or(self.graph.base_vertex());
        TreeVertex {
            graph: self.graph.clone(),
            steps,
            end,
        }
    }

    pub fn parent(&self) -> Option<TreeVertex> {
        if self.is_base() {
            None
        } else {
            Some(self.prefix(self.depth() - 1))
        }
    }

    /// Appends one step: `rep` must be a coset representative at this vertex
    /// for `d`'s slot, and must not undo the incoming edge trivially.
    pub fn child(&self, rep: BlockElement, d: DirEdge) -> Result<TreeVertex> {
        if self.graph.origin(d) != self.end {
            return Err(Error::Domain("edge does not start at this vertex".into()));
        }
        let slot_gen = self.graph.gen_out(d);
        if rep.fiber != 0 || rep.base.strip_trailing(slot_gen).1 != 0 {
            return Err(Error::Domain("not a canonical coset representative".into()));
        }
        if let Some((_, last)) = self.steps.last() {
            if *last == d.reverse() && rep.is_identity() {
                return Err(Error::Domain(
                    "trivial backtrack is the parent, not a child".into(),
                ));
            }
        }
        let mut steps = self.steps.clone();
        steps.push((rep, d));
        Ok(TreeVertex {
            graph: self.graph.clone(),
            steps,
            end: self.graph.target(d),
        })
    }

    pub fn common_prefix_len(&self, other: &TreeVertex) -> usize {
        self.steps
            .iter()
            .zip(other.steps.iter())
            .take_while(|(a, b)| a == b)
            .count()
    }
}

/// Tree distance: depth of both vertices above their deepest common ancestor.
pub fn tree_distance(u: &TreeVertex, v: &TreeVertex) -> Result<usize> {
    if !u.graph.same_graph(&v.graph) {
        return Err(Error::GraphMismatch);
    }
    let c = u.common_prefix_len(v);
    Ok(u.depth() - c + v.depth() - c)
}

/// The unique geodesic vertex sequence from `u` to `v` (inclusive).
pub fn geodesic(u: &TreeVertex, v: &TreeVertex) -> Result<Vec<TreeVertex>> {
    if !u.graph.same_graph(&v.graph) {
        return Err(Error::GraphMismatch);
    }
    let c = u.common_prefix_len(v);
    let mut path = Vec::with_capacity(u.depth() - c + v.depth() - c + 1);
    for d in (c..=u.depth()).rev() {
        path.push(u.prefix(d));
    }
    for d in c + 1..=v.depth() {
        path.push(v.prefix(d));
    }
    Ok(path)
}

/// The median of three vertices: the unique common point of the three
/// pairwise geodesics.
pub fn median(u: &TreeVertex, v: &TreeVertex, w: &TreeVertex) -> Result<TreeVertex> {
    if !u.graph.same_graph(&v.graph) || !u.graph.same_graph(&w.graph) {
        return Err(Error::GraphMismatch);
    }
    // In rooted coordinates the median is the pairwise-deepest common prefix.
    let uv = u.common_prefix_len(v);
    let uw = u.common_prefix_len(w);
    let vw = v.common_prefix_len(w);
    let m = uv.max(uw).max(vw);
    if m == uv {
        Ok(u.prefix(uv.max(uw.min(vw))))
    } else if m == uw {
        Ok(u.prefix(uw))
    } else {
        Ok(v.prefix(vw))
    }
}

/// A finite geodesic prefix from `o`, naming the cylinder of all ends whose
/// rays pass through it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EndPrefix(TreeVertex);

impl EndPrefix {
    pub fn new(v: TreeVertex) -> Result<Self> {
        if v.is_base() {
            return Err(Error::Domain("end prefix needs depth >= 1".into()));
        }
        Ok(EndPrefix(v))
    }

    pub fn vertex(&self) -> &TreeVertex {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.depth()
    }
}

/// True iff `p`'s path is a prefix of `q`'s path.
pub fn cylinder_contains_vertex(p: &EndPrefix, q: &TreeVertex) -> bool {
    p.0.graph.same_graph(&q.graph)
        && p.0.depth() <= q.depth()
        && p.0.common_prefix_len(q) == p.0.depth()
}

pub fn cylinder_contains(p: &EndPrefix, q: &EndPrefix) -> bool {
    cylinder_contains_vertex(p, &q.0)
}

/// Length of the common prefix of `geodesic(o, x.o)` and `p`. A sequence
/// `x_n.o` converges to the end through `p` iff for every depth `d` the
/// confluence with the depth-`d` prefix is eventually `d`.
pub fn confluence_depth(x: &GroupElement, p: &EndPrefix) -> usize {
    let pos = x.tree_position();
    pos.common_prefix_len(&p.0)
}

/// All neighbors of `v` reachable with coset representatives of syllable norm
/// at most `norm_bound`: the parent plus, for every outgoing edge, one child
/// per enumerated representative. The list grows strictly and without bound
/// in `norm_bound`, witnessing countably infinite degree.
pub fn enumerate_neighbors(v: &TreeVertex, norm_bound: u64) -> Vec<TreeVertex> {
    let g = v.graph.clone();
    let mut out = Vec::new();
    if let Some(p) = v.parent() {
        out.push(p);
    }
    let surface = g.surface(v.end);
    for &d in g.out_edges(v.end) {
        let slot_gen = g.gen_out(d);
        let skip_identity = v
            .steps
            .last()
            .map_or(false, |(_, last)| *last == d.reverse());
        for word in coset_reps(surface.rank(), slot_gen, norm_bound) {
            if skip_identity && word.is_identity() {
                continue; // that coset is the parent
            }
            let rep = BlockElement {
                surface,
                base: word,
                fiber: 0,
            };
            out.push(v.child(rep, d).expect("rep is canonical"));
        }
    }
    out
}

/// All reduced words of length <= `bound` not ending in `slot_gen^+-1`,
/// in a deterministic order.
pub(crate) fn coset_reps(rank: u32, slot_gen: u32, bound: u64) -> Vec<FreeWord> {
    let mut out = Vec::new();
    let mut stack = vec![FreeWord::identity()];
    while let Some(w) = stack.pop() {
        let trailing = w.runs().last().map(|&(g, _)| g);
        if trailing != Some(slot_gen) {
            out.push(w.clone());
        }
        if w.len() < bound {
            for gen in (0..rank).rev() {
                for sign in [-1i64, 1] {
                    let next = w.mul(&FreeWord::letter(gen, sign));
                    if next.len() > w.len() {
                        stack.push(next);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fund::canonical_generators;
    use crate::graph::{two_block_graph, EdgeId};
    use rand::{Rng, SeedableRng};

    fn graph() -> Arc<GraphOfGroups> {
        two_block_graph()
    }

    fn vertex_e1(g: &Arc<GraphOfGroups>) -> TreeVertex {
        TreeVertex::base(g)
            .child(
                BlockElement::identity(g.surface(g.base_vertex())),
                DirEdge { edge: EdgeId(0), forward: true },
            )
            .unwrap()
    }

    #[test]
    fn distance_examples() {
        let g = graph();
        let o = TreeVertex::base(&g);
        let ve = vertex_e1(&g);
        assert_eq!(tree_distance(&o, &o).unwrap(), 0);
        assert_eq!(tree_distance(&o, &ve).unwrap(), 1);
        // x2 * vertex(e1) is a different coset; the geodesic passes through o
        let x2 = GroupElement::base_generator(&g, 1, 1).unwrap();
        let moved = x2.act(&ve).unwrap();
        assert_ne!(moved, ve);
        assert_eq!(tree_distance(&ve, &moved).unwrap(), 2);
    }

    #[test]
    fn geodesic_examples() {
        let g = graph();
        let o = TreeVertex::base(&g);
        assert_eq!(geodesic(&o, &o).unwrap(), vec![o.clone()]);
        // a depth-2 vertex: o, vertex(e1), vertex(e1 . y . e1-bar? no: child)
        let ve = vertex_e1(&g);
        let s2 = g.surface(VertexId(1));
        let d_back = DirEdge { edge: EdgeId(0), forward: false };
        let y = BlockElement::generator(s2, g.gen_out(d_back), 0).unwrap();
        // child along the second edge from v2
        let d2_back = DirEdge { edge: EdgeId(1), forward: false };
        let deep = ve.child(y, d2_back).unwrap();
        let path = geodesic(&o, &deep).unwrap();
        assert_eq!(path.len(), 3);
        assert_eq!(path[0], o);
        assert_eq!(path[1], ve);
        assert_eq!(path[2], deep);
        let mut rev = geodesic(&deep, &o).unwrap();
        rev.reverse();
        assert_eq!(rev, path);
    }

    #[test]
    fn confluence_examples() {
        let g = graph();
        let ve = vertex_e1(&g);
        let p = EndPrefix::new(ve.clone()).unwrap();
        // identity: position is o, shares nothing
        assert_eq!(confluence_depth(&GroupElement::identity(&g), &p), 0);
        // element fixing o entirely inside the base group
        let x = GroupElement::base_generator(&g, 1, 1).unwrap();
        assert_eq!(confluence_depth(&x, &p), 0);
        // an element whose position starts through e1
        let s2 = g.surface(VertexId(1));
        let far = BlockElement::generator(s2, g.gen_in(DirEdge { edge: EdgeId(1), forward: true }), 1).unwrap();
        let id1 = BlockElement::identity(g.surface(VertexId(0)));
        let through = GroupElement::normalize(
            &g,
            id1.clone(),
            &[
                (DirEdge { edge: EdgeId(0), forward: true }, far),
                (DirEdge { edge: EdgeId(0), forward: false }, id1),
            ],
        )
        .unwrap();
        assert_eq!(confluence_depth(&through, &p), 1);
    }

    #[test]
    fn end_prefix_requires_depth() {
        let g = graph();
        assert!(EndPrefix::new(TreeVertex::base(&g)).is_err());
    }

    #[test]
    fn cylinder_examples() {
        let g = graph();
        let ve = vertex_e1(&g);
        let p = EndPrefix::new(ve.clone()).unwrap();
        assert!(cylinder_contains(&p, &p));
        // extend deeper: still inside
        let d2_back = DirEdge { edge: EdgeId(1), forward: false };
        let deep = ve
            .child(BlockElement::identity(g.surface(VertexId(1))), d2_back)
            .unwrap();
        assert!(cylinder_contains_vertex(&p, &deep));
        // different first coset: outside
        let x2 = GroupElement::base_generator(&g, 1, 1).unwrap();
        let other = x2.act(&ve).unwrap();
        assert!(!cylinder_contains_vertex(&p, &other));
    }

    #[test]
    fn neighbor_enumeration_counts() {
        let g = graph();
        let o = TreeVertex::base(&g);
        // bound 0: exactly one neighbor per incident edge (identity cosets)
        assert_eq!(enumerate_neighbors(&o, 0).len(), 2);
        // bound 1 includes distinct nontrivial cosets
        let n1 = enumerate_neighbors(&o, 1);
        assert!(n1.len() > 2);
        let set: std::collections::HashSet<_> = n1.iter().cloned().collect();
        assert_eq!(set.len(), n1.len(), "cosets must be distinct");
        // strict growth in the bound
        let mut last = 0;
        for b in 0..=5u64 {
            let n = enumerate_neighbors(&o, b).len();
            assert!(n > last, "bound {b}: {n} <= {last}");
            last = n;
        }
    }

    #[test]
    fn neighbors_are_at_distance_one() {
        let g = graph();
        let ve = vertex_e1(&g);
        for n in enumerate_neighbors(&ve, 2) {
            assert_eq!(tree_distance(&ve, &n).unwrap(), 1);
        }
    }

    #[test]
    fn degree_regularity_across_same_label_vertices() {
        // vertices with the same graph label and both having a parent see the
        // same number of neighbors at each bound
        let g = graph();
        let ve = vertex_e1(&g);
        let s1 = g.surface(g.base_vertex());
        let other = TreeVertex::base(&g)
            .child(
                BlockElement::generator(s1, 1, 2).unwrap(),
                DirEdge { edge: EdgeId(0), forward: true },
            )
            .unwrap();
        let third = TreeVertex::base(&g)
            .child(
                BlockElement::generator(s1, 0, -1).unwrap(),
                DirEdge { edge: EdgeId(1), forward: true },
            )
            .unwrap();
        for b in 0..4u64 {
            let n = enumerate_neighbors(&ve, b).len();
            assert_eq!(n, enumerate_neighbors(&other, b).len());
            assert_eq!(n, enumerate_neighbors(&third, b).len());
        }
    }

    #[test]
    fn random_triples_have_medians_on_all_geodesics() {
        let g = graph();
        let gens = canonical_generators(&g);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(71);
        let random_vertex = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut x = GroupElement::identity(&g);
            for _ in 0..rng.gen_range(0..10) {
                x = x.mul(&gens[rng.gen_range(0..gens.len())]).unwrap();
            }
            x.tree_position()
        };
        for _ in 0..200 {
            let u = random_vertex(&mut rng);
            let v = random_vertex(&mut rng);
            let w = random_vertex(&mut rng);
            let m = median(&u, &v, &w).unwrap();
            for (a, b) in [(&u, &v), (&u, &w), (&v, &w)] {
                let path = geodesic(a, b).unwrap();
                assert!(path.contains(&m), "median must lie on every geodesic");
            }
            // triangle equality through the median
            let (du, dv, dw) = (
                tree_distance(&u, &m).unwrap(),
                tree_distance(&v, &m).unwrap(),
                tree_distance(&w, &m).unwrap(),
            );
            assert_eq!(tree_distance(&u, &v).unwrap(), du + dv);
            assert_eq!(tree_distance(&u, &w).unwrap(), du + dw);
            assert_eq!(tree_distance(&v, &w).unwrap(), dv + dw);
        }
    }

    #[test]
    fn action_is_by_isometries() {
        let g = graph();
        let gens = canonical_generators(&g);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(73);
        let random_elem = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut x = GroupElement::identity(&g);
            for _ in 0..rng.gen_range(0..8) {
                x = x.mul(&gens[rng.gen_range(0..gens.len())]).unwrap();
            }
            x
        };
        for _ in 0..120 {
            let a = random_elem(&mut rng);
            let b = random_elem(&mut rng);
            let x = random_elem(&mut rng);
            let (u, v) = (a.tree_position(), b.tree_position());
            let d = tree_distance(&u, &v).unwrap();
            let (xu, xv) = (x.act(&u).unwrap(), x.act(&v).unwrap());
            assert_eq!(tree_distance(&xu, &xv).unwrap(), d);
            // left action: (xy).v = x.(y.v)
            let y = random_elem(&mut rng);
            let xy = x.mul(&y).unwrap();
            assert_eq!(xy.act(&u).unwrap(), x.act(&y.act(&u).unwrap()).unwrap());
        }
    }

    #[test]
    fn action_preserves_adjacency() {
        let g = graph();
        let ve = vertex_e1(&g);
        let x = GroupElement::base_generator(&g, 1, -1).unwrap();
        for n in enumerate_neighbors(&ve, 1) {
            let (xu, xn) = (x.act(&ve).unwrap(), x.act(&n).unwrap());
            assert_eq!(tree_distance(&xu, &xn).unwrap(), 1);
        }
    }
}
