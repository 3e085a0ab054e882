//! The fundamental group of a graph of groups, as Britton-reduced decorated
//! edge paths.
//!
//! An element is a closed decorated path at the base vertex: block elements
//! `g0, g1, ..., gn` interleaved with directed edge traversals `d1, ..., dn`.
//! The canonical form is unique:
//!
//! * every `gj` with `j < n` is the canonical representative of its left
//!   coset of the outgoing edge image — its base word carries no trailing
//!   power of the edge's designated boundary generator and its fiber exponent
//!   is zero (both absorb rightward through the edge symbol);
//! * no pinch `d, h, reverse(d)` with `h` in the edge image survives; a pinch
//!   transports the peripheral coordinates through the gluing matrix and
//!   collapses two edge symbols.
//!
//! Equality of group elements is structural equality of canonical forms.

use crate::block::BlockElement;
use crate::error::{Error, Result};
use crate::graph::{DirEdge, GraphOfGroups, VertexId};
use crate::tree::TreeVertex;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct GroupElement {
    pub(crate) graph: Arc<GraphOfGroups>,
    pub(crate) head: BlockElement,
    pub(crate) tail: Vec<(DirEdge, BlockElement)>,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.graph.same_graph(&other.graph) && self.head == other.head && self.tail == other.tail
    }
}
impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.graph.fingerprint().hash(state);
        self.head.hash(state);
        self.tail.hash(state);
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.word_norm(), self.to_string()).cmp(&(other.word_norm(), other.to_string()))
    }
}
impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Incremental normal-form accumulator. Pushing syllables keeps the prefix
/// canonical; pinches pop back into the pending block, so appending a short
/// element to a long one costs only the cancellation actually performed.
pub(crate) struct PathBuilder {
    graph: Arc<GraphOfGroups>,
    head: BlockElement,
    tail: Vec<(DirEdge, BlockElement)>,
    cur: VertexId,
}

impl PathBuilder {
    pub(crate) fn new(graph: Arc<GraphOfGroups>) -> Self {
        let base = graph.base_vertex();
        let head = BlockElement::identity(graph.surface(base));
        PathBuilder {
            graph,
            head,
            tail: Vec::new(),
            cur: base,
        }
    }

    pub(crate) fn load(elem: &GroupElement) -> Self {
        PathBuilder {
            graph: elem.graph.clone(),
            head: elem.head.clone(),
            tail: elem.tail.clone(),
            cur: elem.graph.base_vertex(),
        }
    }

    pub(crate) fn current_vertex(&self) -> VertexId {
        self.cur
    }

    /// Number of edges in the committed path (the walk position's tree depth).
    pub(crate) fn depth(&self) -> usize {
        self.tail.len()
    }

    /// The `j`-th path component `(representative, edge)` of the position's
    /// vertex coset, `j < depth()`. The pending block is not part of the path.
    pub(crate) fn component(&self, j: usize) -> (&BlockElement, DirEdge) {
        let block = if j == 0 { &self.head } else { &self.tail[j - 1].1 };
        (block, self.tail[j].0)
    }

    /// True iff the first `snap.len()` path components equal `snap`.
    pub(crate) fn prefix_matches(&self, snap: &[(BlockElement, DirEdge)]) -> bool {
        if self.depth() < snap.len() {
            return false;
        }
        snap.iter().enumerate().all(|(j, (b, d))| {
            let (bj, dj) = self.component(j);
            dj == *d && bj == b
        })
    }

    pub(crate) fn snapshot_prefix(&self, d: usize) -> Option<Vec<(BlockElement, DirEdge)>> {
        if self.depth() < d {
            return None;
        }
        Some(
            (0..d)
                .map(|j| {
                    let (b, e) = self.component(j);
                    (b.clone(), e)
                })
                .collect(),
        )
    }

    /// Materializes the current value as an element (the path must be closed).
    pub(crate) fn current_element(&self) -> Result<GroupElement> {
        if self.cur != self.graph.base_vertex() {
            return Err(Error::Domain("path is not closed at base vertex".into()));
        }
        Ok(GroupElement {
            graph: self.graph.clone(),
            head: self.head.clone(),
            tail: self.tail.clone(),
        })
    }

    /// Appends a whole element (its syllables) to the accumulator.
    pub(crate) fn push_element(&mut self, x: &GroupElement) -> Result<()> {
        self.push_block(&x.head)?;
        for (d, blk) in &x.tail {
            self.push_edge(*d)?;
            self.push_block(blk)?;
        }
        Ok(())
    }

    fn pending_mut(&mut self) -> &mut BlockElement {
        match self.tail.last_mut() {
            Some((_, b)) => b,
            None => &mut self.head,
        }
    }

    pub(crate) fn push_block(&mut self, b: &BlockElement) -> Result<()> {
        if b.surface != self.graph.surface(self.cur) {
            return Err(Error::Domain(format!(
                "block element surface does not match vertex {}",
                self.graph.vertex_name(self.cur)
            )));
        }
        let pending = self.pending_mut();
        *pending = pending.mul_same_surface(b);
        Ok(())
    }

    pub(crate) fn push_edge(&mut self, d: DirEdge) -> Result<()> {
        if self.graph.origin(d) != self.cur {
            return Err(Error::Domain(format!(
                "edge sequence is not a path: edge {} does not start at {}",
                d.edge.0 + 1,
                self.graph.vertex_name(self.cur)
            )));
        }
        let slot_gen = self.graph.gen_out(d);
        let (prefix, coords) = {
            let pending = self.pending_mut();
            let (prefix, word_exp) = pending.base.strip_trailing(slot_gen);
            (prefix, (word_exp, pending.fiber))
        };
        let transported = self.graph.cross(d, coords);
        let periph = self.graph.peripheral_out(d.reverse(), transported);

        let pinch = prefix.is_identity()
            && self
                .tail
                .last()
                .map_or(false, |(last, _)| *last == d.reverse());
        if pinch {
            // d cancels the previous edge symbol. The middle block was
            // entirely peripheral (prefix empty), so it is consumed by the
            // transport and its image merges into the block before the
            // cancelled edge.
            self.tail.pop().expect("pinch requires a previous edge");
            let pending = self.pending_mut();
            *pending = pending.mul_same_surface(&periph);
        } else {
            let pending = self.pending_mut();
            *pending = BlockElement {
                surface: pending.surface,
                base: prefix,
                fiber: 0,
            };
            self.tail.push((d, periph));
        }
        self.cur = self.graph.target(d);
        Ok(())
    }

    /// Finishes a closed path as a group element.
    pub(crate) fn finish_element(self) -> Result<GroupElement> {
        if self.cur != self.graph.base_vertex() {
            return Err(Error::Domain(format!(
                "path is not closed at base vertex (ends at {})",
                self.graph.vertex_name(self.cur)
            )));
        }
        Ok(GroupElement {
            graph: self.graph,
            head: self.head,
            tail: self.tail,
        })
    }

    /// Finishes an arbitrary path as a tree vertex, discarding the pending
    /// block (it only names the coset).
    pub(crate) fn finish_vertex(self) -> TreeVertex {
        let mut steps = Vec::with_capacity(self.tail.len());
        let mut rep = self.head;
        for (d, b) in self.tail {
            steps.push((rep, d));
            rep = b;
        }
        TreeVertex {
            graph: self.graph,
            steps,
            end: self.cur,
        }
    }
}

impl GroupElement {
    pub fn identity(graph: &Arc<GraphOfGroups>) -> Self {
        GroupElement {
            graph: graph.clone(),
            head: BlockElement::identity(graph.surface(graph.base_vertex())),
            tail: Vec::new(),
        }
    }

    /// A single-syllable element of the base vertex group.
    pub fn from_block(graph: &Arc<GraphOfGroups>, b: BlockElement) -> Result<Self> {
        if b.surface != graph.surface(graph.base_vertex()) {
            return Err(Error::Domain(
                "block element is not over the base vertex surface".into(),
            ));
        }
        Ok(GroupElement {
            graph: graph.clone(),
            head: b,
            tail: Vec::new(),
        })
    }

    /// The fiber generator of the base vertex, `z^exp`.
    pub fn fiber(graph: &Arc<GraphOfGroups>, exp: i64) -> Self {
        let b = BlockElement::fiber_power(graph.surface(graph.base_vertex()), exp);
        GroupElement {
            graph: graph.clone(),
            head: b,
            tail: Vec::new(),
        }
    }

    pub fn base_generator(graph: &Arc<GraphOfGroups>, gen: u32, exp: i64) -> Result<Self> {
        let b = BlockElement::generator(graph.surface(graph.base_vertex()), gen, exp)?;
        Self::from_block(graph, b)
    }

    /// Canonicalizes a raw decorated path: `head`, then alternating edge
    /// traversals and block elements. The path must be closed at the base.
    pub fn normalize(
        graph: &Arc<GraphOfGroups>,
        head: BlockElement,
        rest: &[(DirEdge, BlockElement)],
    ) -> Result<Self> {
        let mut b = PathBuilder::new(graph.clone());
        b.push_block(&head)?;
        for (d, blk) in rest {
            b.push_edge(*d)?;
            b.push_block(blk)?;
        }
        b.finish_element()
    }

    pub fn graph(&self) -> &Arc<GraphOfGroups> {
        &self.graph
    }

    pub fn is_identity(&self) -> bool {
        self.tail.is_empty() && self.head.is_identity()
    }

    pub fn head_syllable(&self) -> &BlockElement {
        &self.head
    }

    pub fn edge_syllables(&self) -> &[(DirEdge, BlockElement)] {
        &self.tail
    }

    pub fn edge_count(&self) -> usize {
        self.tail.len()
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        if !self.graph.same_graph(&other.graph) {
            return Err(Error::GraphMismatch);
        }
        let mut b = PathBuilder::load(self);
        b.push_block(&other.head)?;
        for (d, blk) in &other.tail {
            b.push_edge(*d)?;
            b.push_block(blk)?;
        }
        b.finish_element()
    }

    pub fn inverse(&self) -> GroupElement {
        let mut b = PathBuilder::new(self.graph.clone());
        let last = self
            .tail
            .last()
            .map(|(_, blk)| blk)
            .unwrap_or(&self.head);
        b.push_block(&last.inverse()).expect("inverse stays on path");
        // Walk the path backwards, inverting blocks.
        for j in (0..self.tail.len()).rev() {
            let (d, _) = self.tail[j];
            let prev = if j == 0 { &self.head } else { &self.tail[j - 1].1 };
            b.push_edge(d.reverse()).expect("reversed path is a path");
            b.push_block(&prev.inverse()).expect("inverse stays on path");
        }
        b.finish_element().expect("reversed path is closed")
    }

    /// Syllable word norm: total reduced base length, plus total absolute
    /// fiber exponent, plus the number of edge traversals. Zero iff identity.
    ///
    /// This is bi-Lipschitz equivalent to any finite-generating-set word norm
    /// (each syllable expands into boundedly many generators and vice versa),
    /// which is all the moment hypotheses downstream depend on.
    pub fn word_norm(&self) -> u64 {
        let mut n = self.head.norm();
        for (_, b) in &self.tail {
            n += 1 + b.norm();
        }
        n
    }

    /// The Bass-Serre tree vertex this element moves the base vertex to.
    pub fn tree_position(&self) -> TreeVertex {
        let mut steps = Vec::with_capacity(self.tail.len());
        let mut rep = self.head.clone();
        let mut cur = self.graph.base_vertex();
        for (d, b) in &self.tail {
            steps.push((rep, *d));
            rep = b.clone();
            cur = self.graph.target(*d);
        }
        TreeVertex {
            graph: self.graph.clone(),
            steps,
            end: cur,
        }
    }

    /// Left action on Bass-Serre tree vertices.
    pub fn act(&self, v: &TreeVertex) -> Result<TreeVertex> {
        if !self.graph.same_graph(&v.graph) {
            return Err(Error::GraphMismatch);
        }
        let mut b = PathBuilder::load(self);
        for (rep, d) in &v.steps {
            b.push_block(rep)?;
            b.push_edge(*d)?;
        }
        Ok(b.finish_vertex())
    }

    /// Debug validator for the canonical-form invariants.
    pub fn is_canonical(&self) -> bool {
        let g = &self.graph;
        let mut cur = g.base_vertex();
        if self.head.surface != g.surface(cur) {
            return false;
        }
        for (j, (d, blk)) in self.tail.iter().enumerate() {
            if g.origin(*d) != cur {
                return false;
            }
            // the syllable before this edge must be coset-canonical
            let before = if j == 0 { &self.head } else { &self.tail[j - 1].1 };
            let slot_gen = g.gen_out(*d);
            if before.fiber != 0 {
                return false;
            }
            if let Some(&(last_gen, _)) = before.base.runs().last() {
                if last_gen == slot_gen {
                    return false;
                }
            }
            // Britton: a reverse pair needs a nontrivial representative between
            if j > 0 && self.tail[j - 1].0 == d.reverse() && before.is_identity() {
                return false;
            }
            cur = g.target(*d);
            if blk.surface != g.surface(cur) {
                return false;
            }
        }
        cur == g.base_vertex()
    }
}

/// The canonical generating set of the fundamental group: base vertex-group
/// generators, spanning-tree conjugates of the other vertex groups'
/// generators, and one stable letter per non-tree edge. Symmetric and
/// deduplicated by canonical form; order is deterministic.
pub fn canonical_generators(graph: &Arc<GraphOfGroups>) -> Vec<GroupElement> {
    let base = graph.base_vertex();

    // BFS spanning tree: directed edge path from base to each vertex.
    let mut tree_path: Vec<Option<Vec<DirEdge>>> = vec![None; graph.vertex_count()];
    tree_path[base.0] = Some(Vec::new());
    let mut tree_edges = std::collections::BTreeSet::new();
    let mut queue = std::collections::VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        for &d in graph.out_edges(v) {
            let w = graph.target(d);
            if tree_path[w.0].is_none() {
                let mut path = tree_path[v.0].clone().unwrap();
                path.push(d);
                tree_path[w.0] = Some(path);
                tree_edges.insert(d.edge);
                queue.push_back(w);
            }
        }
    }

    let conjugated = |v: VertexId, blk: BlockElement| -> GroupElement {
        let path = tree_path[v.0].as_ref().expect("graph is connected");
        let mut b = PathBuilder::new(graph.clone());
        for &d in path {
            b.push_edge(d).unwrap();
        }
        b.push_block(&blk).unwrap();
        for &d in path.iter().rev() {
            b.push_edge(d.reverse()).unwrap();
        }
        b.finish_element().expect("conjugation path is closed")
    };

    let mut seen = std::collections::HashSet::new();
    let mut gens = Vec::new();
    let mut add = |e: GroupElement, gens: &mut Vec<GroupElement>| {
        if !e.is_identity() && seen.insert(e.clone()) {
            gens.push(e);
        }
    };

    for vi in 0..graph.vertex_count() {
        let v = VertexId(vi);
        let s = graph.surface(v);
        for gen in 0..s.rank() {
            for sign in [1i64, -1] {
                let blk = BlockElement::generator(s, gen, sign).unwrap();
                add(conjugated(v, blk), &mut gens);
            }
        }
        for sign in [1i64, -1] {
            add(conjugated(v, BlockElement::fiber_power(s, sign)), &mut gens);
        }
    }
    for k in 0..graph.edge_count() {
        let e = crate::graph::EdgeId(k);
        if tree_edges.contains(&e) {
            continue;
        }
        let d = DirEdge { edge: e, forward: true };
        let u = graph.origin(d);
        let w = graph.target(d);
        let mut b = PathBuilder::new(graph.clone());
        for &t in tree_path[u.0].as_ref().unwrap() {
            b.push_edge(t).unwrap();
        }
        b.push_edge(d).unwrap();
        for &t in tree_path[w.0].as_ref().unwrap().iter().rev() {
            b.push_edge(t.reverse()).unwrap();
        }
        let stable = b.finish_element().expect("stable letter loop is closed");
        add(stable.inverse(), &mut gens);
        add(stable, &mut gens);
    }

    gens.sort();
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{two_block_graph, EdgeId};
    use crate::words::FreeWord;
    use rand::{Rng, SeedableRng};

    fn graph() -> Arc<GraphOfGroups> {
        two_block_graph()
    }

    fn e1(fwd: bool) -> DirEdge {
        DirEdge { edge: EdgeId(0), forward: fwd }
    }
    fn e2(fwd: bool) -> DirEdge {
        DirEdge { edge: EdgeId(1), forward: fwd }
    }

    #[test]
    fn pinch_transports_through_gluing() {
        // [1, e1, c'1, e1^-1, 1] collapses to the single syllable z: the
        // peripheral c'1 on the far side is the image of (0,1) on this side.
        let g = graph();
        let s2 = g.surface(VertexId(1));
        let far = BlockElement::generator(s2, g.gen_in(e1(true)), 1).unwrap();
        let x = GroupElement::normalize(
            &g,
            BlockElement::identity(g.surface(VertexId(0))),
            &[(e1(true), far), (e1(false), BlockElement::identity(g.surface(VertexId(0))))],
        )
        .unwrap();
        assert_eq!(x, GroupElement::fiber(&g, 1));
        assert!(x.is_canonical());
    }

    #[test]
    fn non_peripheral_conjugate_stays_reduced() {
        // [1, e1, c'2, e1^-1, 1] is already Britton-reduced.
        let g = graph();
        let s2 = g.surface(VertexId(1));
        let y1 = BlockElement::generator(s2, g.gen_in(e2(true)), 1).unwrap();
        let id1 = BlockElement::identity(g.surface(VertexId(0)));
        let x = GroupElement::normalize(&g, id1.clone(), &[(e1(true), y1), (e1(false), id1)])
            .unwrap();
        assert_eq!(x.edge_count(), 2);
        assert_eq!(x.word_norm(), 3);
        assert!(x.is_canonical());
    }

    #[test]
    fn normalize_is_idempotent_and_identity_examples() {
        let g = graph();
        let z = GroupElement::fiber(&g, 1);
        let x1 = GroupElement::base_generator(&g, 0, 1).unwrap();
        // z * (x1, 0) = (x1, 1) as a single syllable
        let p = z.mul(&x1).unwrap();
        assert_eq!(p.edge_count(), 0);
        assert_eq!(p.head_syllable().base, FreeWord::letter(0, 1));
        assert_eq!(p.head_syllable().fiber, 1);
        // x * identity = x, x * x^-1 = identity
        assert_eq!(p.mul(&GroupElement::identity(&g)).unwrap(), p);
        assert!(p.mul(&p.inverse()).unwrap().is_identity());
    }

    #[test]
    fn word_norm_examples() {
        let g = graph();
        assert_eq!(GroupElement::identity(&g).word_norm(), 0);
        assert_eq!(GroupElement::fiber(&g, 3).word_norm(), 3);
    }

    #[test]
    fn raw_path_errors() {
        let g = graph();
        let id1 = BlockElement::identity(g.surface(VertexId(0)));
        // not closed at base
        let mut b = PathBuilder::new(g.clone());
        b.push_block(&id1).unwrap();
        b.push_edge(e1(true)).unwrap();
        assert!(matches!(b.finish_element(), Err(Error::Domain(_))));
        // edges not consecutive: e1 forward starts at v1, cannot follow e1 forward
        let mut b2 = PathBuilder::new(g.clone());
        b2.push_edge(e1(true)).unwrap();
        assert!(b2.push_edge(e1(true)).is_err());
    }

    fn random_element(g: &Arc<GraphOfGroups>, rng: &mut rand_chacha::ChaCha8Rng) -> GroupElement {
        let gens = canonical_generators(g);
        let mut x = GroupElement::identity(g);
        for _ in 0..rng.gen_range(0..12) {
            let k = rng.gen_range(0..gens.len());
            x = x.mul(&gens[k]).unwrap();
        }
        x
    }

    #[test]
    fn random_pinch_insertion_normalizes_back() {
        let g = graph();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..300 {
            let x = random_element(&g, &mut rng);
            let pinched = insert_random_pinch(&x, &mut rng);
            assert_eq!(pinched, x, "pinch insertion must normalize away");
        }
    }

    /// Rebuilds `x` from its syllables with one Britton pinch spliced in at a
    /// random position: ... t_d beta(m) t_d^-1 alpha(m)^-1 ... is the identity.
    pub(crate) fn insert_random_pinch(
        x: &GroupElement,
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> GroupElement {
        let g = x.graph().clone();
        let n = x.edge_count();
        let pos = rng.gen_range(0..=n); // syllable index to splice after
        let mut b = PathBuilder::new(g.clone());
        b.push_block(&x.head).unwrap();
        let mut splice = |b: &mut PathBuilder, rng: &mut rand_chacha::ChaCha8Rng| {
            let v = b.current_vertex();
            let outs = g.out_edges(v);
            let d = outs[rng.gen_range(0..outs.len())];
            let m = (rng.gen_range(-3..=3i64), rng.gen_range(-3..=3i64));
            let far = g.peripheral_out(d.reverse(), g.cross(d, m));
            let near_inv = g.peripheral_out(d, m).inverse();
            b.push_edge(d).unwrap();
            b.push_block(&far).unwrap();
            b.push_edge(d.reverse()).unwrap();
            b.push_block(&near_inv).unwrap();
        };
        if pos == 0 {
            splice(&mut b, rng);
        }
        for (j, (d, blk)) in x.tail.iter().enumerate() {
            b.push_edge(*d).unwrap();
            b.push_block(blk).unwrap();
            if j + 1 == pos {
                splice(&mut b, rng);
            }
        }
        b.finish_element().unwrap()
    }

    #[test]
    fn associativity_and_inverse_on_random_elements() {
        let g = graph();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for _ in 0..200 {
            let x = random_element(&g, &mut rng);
            let y = random_element(&g, &mut rng);
            let z = random_element(&g, &mut rng);
            let l = x.mul(&y).unwrap().mul(&z).unwrap();
            let r = x.mul(&y.mul(&z).unwrap()).unwrap();
            assert_eq!(l, r);
            assert!(l.is_canonical());
            assert!(x.mul(&x.inverse()).unwrap().is_identity());
            assert!(x.inverse().mul(&x).unwrap().is_identity());
        }
    }

    #[test]
    fn norm_symmetric_under_inverse_on_swap_gluings() {
        // Exact for the stock graph: its gluings are coordinate swaps, which
        // preserve the l1 size of transported peripheral coordinates.
        let g = graph();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..300 {
            let x = random_element(&g, &mut rng);
            assert_eq!(x.word_norm(), x.inverse().word_norm());
        }
    }

    #[test]
    fn norm_zero_iff_identity() {
        let g = graph();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        for _ in 0..200 {
            let x = random_element(&g, &mut rng);
            assert_eq!(x.word_norm() == 0, x.is_identity());
        }
    }

    #[test]
    fn canonical_generator_set_of_stock_graph() {
        let g = graph();
        let gens = canonical_generators(&g);
        // c1^+-, c2^+-, z^+- at the base, the conjugated far generator, and
        // the stable letter of the second edge, both signed.
        assert_eq!(gens.len(), 10);
        assert!(gens.iter().all(|e| !e.is_identity()));
        // symmetric: closed under inverse
        for e in &gens {
            assert!(gens.contains(&e.inverse()));
        }
        let norms: Vec<u64> = gens.iter().map(|e| e.word_norm()).collect();
        assert_eq!(norms.iter().filter(|&&n| n == 1).count(), 6);
        assert_eq!(norms.iter().filter(|&&n| n == 2).count(), 2);
        assert_eq!(norms.iter().filter(|&&n| n == 3).count(), 2);
    }

    #[test]
    fn graph_mismatch_detected() {
        let g1 = graph();
        let g2 = crate::graph::GraphOfGroups::build(&crate::graph::random_graph_spec(3)).unwrap();
        let a = GroupElement::identity(&g1);
        let b = GroupElement::identity(&g2);
        assert!(matches!(a.mul(&b), Err(Error::GraphMismatch)));
    }
}
