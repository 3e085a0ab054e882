//! Exhaustive desk-scale verification of stabilizer structure.
//!
//! The groups are infinite, so every check here is over a ball of bounded
//! syllable norm: a violation found in the ball is conclusive, a confirmation
//! is valid on the enumerated horizon. Canonical forms are enumerated
//! directly (never generated and deduplicated), so the ball is exact.

use crate::block::BlockElement;
use crate::error::{Error, Result};
use crate::fund::{GroupElement, PathBuilder};
use crate::graph::{DirEdge, GraphOfGroups, VertexId};
use crate::tree::{enumerate_neighbors, geodesic, tree_distance, TreeVertex};
use crate::words::FreeWord;
use std::collections::HashSet;
use std::sync::Arc;

/// True iff `g` fixes the tree vertex `u`.
pub fn fixes_vertex(g: &GroupElement, u: &TreeVertex) -> Result<bool> {
    Ok(g.act(u)? == *u)
}

/// All block elements over `surface` with syllable norm at most `budget`.
fn block_elements(surface: crate::surface::SurfaceData, budget: u64) -> Vec<BlockElement> {
    let mut out = Vec::new();
    let mut words = vec![FreeWord::identity()];
    let mut stack = vec![FreeWord::identity()];
    while let Some(w) = stack.pop() {
        if w.len() < budget {
            for gen in (0..surface.rank()).rev() {
                for sign in [-1i64, 1] {
                    let next = w.mul(&FreeWord::letter(gen, sign));
                    if next.len() > w.len() {
                        words.push(next.clone());
                        stack.push(next);
                    }
                }
            }
        }
    }
    for w in words {
        let room = (budget - w.len()) as i64;
        for fiber in -room..=room {
            out.push(BlockElement {
                surface,
                base: w.clone(),
                fiber,
            });
        }
    }
    out
}

/// All distinct canonical group elements of syllable norm at most `radius`.
///
/// Errors with the count reached if more than `guard` elements would be
/// produced.
pub fn ball_enumerate(
    graph: &Arc<GraphOfGroups>,
    radius: u64,
    guard: usize,
) -> Result<Vec<GroupElement>> {
    let base = graph.base_vertex();

    // Depth-first over canonical forms: alternately choose a coset
    // representative and an outgoing edge, closing the path at the base.
    struct Ctx<'a> {
        graph: &'a Arc<GraphOfGroups>,
        guard: usize,
        out: Vec<GroupElement>,
    }

    fn emit(ctx: &mut Ctx, e: GroupElement) -> Result<()> {
        debug_assert!(e.is_canonical());
        if ctx.out.len() >= ctx.guard {
            return Err(Error::Resource { count: ctx.out.len() });
        }
        ctx.out.push(e);
        Ok(())
    }

    fn rec(
        ctx: &mut Ctx,
        cur: VertexId,
        budget: u64,
        head: &BlockElement,
        tail: &mut Vec<(DirEdge, BlockElement)>,
    ) -> Result<()> {
        let graph = ctx.graph.clone();
        // Option 1: stop here (only valid at the base): the pending slot may
        // be any block element within budget.
        if cur == graph.base_vertex() {
            for last in block_elements(graph.surface(cur), budget) {
                let mut full_tail = tail.clone();
                if let Some(slot) = full_tail.last_mut() {
                    slot.1 = last;
                    emit(
                        ctx,
                        GroupElement {
                            graph: graph.clone(),
                            head: head.clone(),
                            tail: full_tail,
                        },
                    )?;
                } else {
                    emit(
                        ctx,
                        GroupElement {
                            graph: graph.clone(),
                            head: last,
                            tail: full_tail,
                        },
                    )?;
                }
            }
        }
        // Option 2: extend with (representative, edge); the edge costs 1 and
        // the path must still be able to close.
        if budget == 0 {
            return Ok(());
        }
        for &d in graph.out_edges(cur) {
            let back_home = graph.dist_to_base(graph.target(d)) as u64;
            if 1 + back_home > budget {
                continue;
            }
            let slot_gen = graph.gen_out(d);
            let surface = graph.surface(cur);
            let is_backtrack = tail.last().map_or(false, |(last, _)| *last == d.reverse());
            let rep_budget = budget - 1 - back_home;
            for rep_word in crate::tree::coset_reps(surface.rank(), slot_gen, rep_budget) {
                if is_backtrack && rep_word.is_identity() {
                    continue; // Britton: a pinch pattern needs a nontrivial middle
                }
                let rep = BlockElement {
                    surface,
                    base: rep_word,
                    fiber: 0,
                };
                // budget actually spent: the representative plus the edge
                // (back_home was only a feasibility bound).
                let spent = rep.norm() + 1;
                if spent > budget {
                    continue;
                }
                if tail.is_empty() {
                    // the representative becomes the head syllable
                    tail.push((d, BlockElement::identity(graph.surface(graph.target(d)))));
                    rec(ctx, graph.target(d), budget - spent, &rep, tail)?;
                    tail.pop();
                } else {
                    let slot = tail.len() - 1;
                    let saved = std::mem::replace(&mut tail[slot].1, rep);
                    tail.push((d, BlockElement::identity(graph.surface(graph.target(d)))));
                    rec(ctx, graph.target(d), budget - spent, head, tail)?;
                    tail.pop();
                    tail[slot].1 = saved;
                }
            }
        }
        Ok(())
    }

    let mut ctx = Ctx {
        graph,
        guard,
        out: Vec::new(),
    };
    let head = BlockElement::identity(graph.surface(base));
    let mut tail = Vec::new();
    match rec(&mut ctx, base, radius, &head, &mut tail) {
        Ok(()) => {}
        Err(Error::Resource { .. }) => {
            return Err(Error::Resource {
                count: ctx.out.len(),
            })
        }
        Err(e) => return Err(e),
    }
    let mut out = ctx.out;
    out.sort();
    Ok(out)
}

/// What the common stabilizer of a vertex pair looks like on the ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabStructure {
    /// Only the identity was found.
    Trivial,
    /// Every element found is a power of the reported generator.
    Cyclic { generator: GroupElement },
    /// Some other configuration (e.g. the full vertex-group ball when u = v).
    Other,
}

#[derive(Debug, Clone)]
pub struct StabReport {
    pub pair: (TreeVertex, TreeVertex),
    pub distance: usize,
    pub radius: u64,
    /// Non-identity elements of the ball fixing both vertices.
    pub elements: Vec<GroupElement>,
    pub structure: StabStructure,
}

impl StabReport {
    pub fn to_json(&self) -> serde_json::Value {
        let structure = match &self.structure {
            StabStructure::Trivial => serde_json::json!({"kind": "trivial"}),
            StabStructure::Cyclic { generator } => {
                serde_json::json!({"kind": "cyclic", "generator": generator.to_string()})
            }
            StabStructure::Other => serde_json::json!({"kind": "other"}),
        };
        serde_json::json!({
            "pair": [self.pair.0.to_string(), self.pair.1.to_string()],
            "distance": self.distance,
            "radius": self.radius,
            "elements_found": self.elements.len(),
            "elements_sample": self.elements.iter().take(12).map(|e| e.to_string()).collect::<Vec<_>>(),
            "structure": structure,
        })
    }
}

fn is_power_of(g: &GroupElement, h: &GroupElement, kmax: u64) -> bool {
    if h.is_identity() {
        return true;
    }
    for dir in [g.clone(), g.inverse()] {
        let mut p = dir.clone();
        for _ in 0..kmax {
            if p == *h {
                return true;
            }
            if p.word_norm() > h.word_norm() + dir.word_norm() {
                break;
            }
            p = p.mul(&dir).expect("same graph");
        }
    }
    false
}

/// Filters the radius-`radius` ball by membership in `Stab(u) and Stab(v)`
/// and classifies the result.
pub fn stab_intersection_check(
    u: &TreeVertex,
    v: &TreeVertex,
    radius: u64,
    guard: usize,
) -> Result<StabReport> {
    if !u.graph().same_graph(v.graph()) {
        return Err(Error::GraphMismatch);
    }
    let graph = u.graph().clone();
    let ball = ball_enumerate(&graph, radius, guard)?;
    let mut elements = Vec::new();
    for g in ball {
        if g.is_identity() {
            continue;
        }
        if fixes_vertex(&g, u)? && fixes_vertex(&g, v)? {
            elements.push(g);
        }
    }
    let structure = if elements.is_empty() {
        StabStructure::Trivial
    } else {
        let generator = elements
            .iter()
            .min_by_key(|g| (g.word_norm(), g.to_string()))
            .unwrap()
            .clone();
        let kmax = radius + 2;
        if elements.iter().all(|h| is_power_of(&generator, h, kmax)) {
            StabStructure::Cyclic { generator }
        } else {
            StabStructure::Other
        }
    };
    Ok(StabReport {
        pair: (u.clone(), v.clone()),
        distance: tree_distance(u, v)?,
        radius,
        elements,
        structure,
    })
}

/// The fiber generator of `m`'s block, conjugated back to a loop at the base:
/// `gamma z^sign gamma^-1` for the canonical path `gamma` to `m`.
pub fn fiber_conjugate(m: &TreeVertex, sign: i64) -> GroupElement {
    let graph = m.graph().clone();
    let mut b = PathBuilder::new(graph.clone());
    for (rep, d) in m.steps() {
        b.push_block(rep).unwrap();
        b.push_edge(*d).unwrap();
    }
    b.push_block(&BlockElement::fiber_power(
        graph.surface(m.vertex_label()),
        sign,
    ))
    .unwrap();
    for (rep, d) in m.steps().iter().rev() {
        b.push_edge(d.reverse()).unwrap();
        b.push_block(&rep.inverse()).unwrap();
    }
    b.finish_element().expect("conjugation loop is closed")
}

/// Searches `Stab(u)` inside the radius-`radius` ball for an element that
/// moves every neighbor of `u` enumerated at norm bound `witness_bound`.
///
/// Finding one is a necessary condition for `u` being the unique fixed
/// vertex, exact on the enumerated horizon; `None` only reports horizon
/// exhaustion. Non-peripheral candidates (mixed-generator base words with
/// zero fiber) are tried first.
pub fn sole_fixer_search(
    u: &TreeVertex,
    radius: u64,
    witness_bound: u64,
    guard: usize,
) -> Result<Option<GroupElement>> {
    let graph = u.graph().clone();
    let ball = ball_enumerate(&graph, radius, guard)?;
    let mut candidates: Vec<GroupElement> = Vec::new();
    for g in ball {
        if !g.is_identity() && fixes_vertex(&g, u)? {
            candidates.push(g);
        }
    }
    let peripheral_score = |g: &GroupElement| -> u32 {
        if g.edge_count() > 0 {
            return 1;
        }
        let b = g.head_syllable();
        if b.fiber == 0 && b.base.runs().len() >= 2 {
            0 // e.g. c1 c2: cannot lie in any single peripheral subgroup
        } else {
            2
        }
    };
    candidates.sort_by_key(|g| (peripheral_score(g), g.word_norm(), g.to_string()));

    let neighbors = enumerate_neighbors(u, witness_bound);
    'cand: for g in candidates {
        for n in &neighbors {
            if g.act(n)? == *n {
                continue 'cand;
            }
        }
        return Ok(Some(g));
    }
    Ok(None)
}

#[derive(Debug, Clone)]
pub struct OrbitProbeFinding {
    pub mover: GroupElement,
    pub moved_vertex: TreeVertex,
    pub image: TreeVertex,
}

/// Searches the ball for an element moving some candidate vertex outside the
/// convex hull of the candidate set, witnessing that the set spans no
/// invariant subtree and no finite orbit. `None` never asserts invariance,
/// only that the horizon is exhausted.
pub fn orbit_probe(
    candidates: &[TreeVertex],
    radius: u64,
    guard: usize,
) -> Result<Option<OrbitProbeFinding>> {
    let first = candidates
        .first()
        .ok_or_else(|| Error::Domain("candidate set is empty".into()))?;
    let graph = first.graph().clone();

    let mut hull: HashSet<TreeVertex> = HashSet::new();
    for a in candidates {
        for b in candidates {
            for x in geodesic(a, b)? {
                hull.insert(x);
            }
        }
    }

    for g in ball_enumerate(&graph, radius, guard)? {
        if g.is_identity() {
            continue;
        }
        for x in candidates {
            let image = g.act(x)?;
            if !hull.contains(&image) {
                return Ok(Some(OrbitProbeFinding {
                    mover: g,
                    moved_vertex: x.clone(),
                    image,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{two_block_graph, EdgeId};

    const GUARD: usize = 2_000_000;

    fn graph() -> Arc<GraphOfGroups> {
        two_block_graph()
    }

    fn o(g: &Arc<GraphOfGroups>) -> TreeVertex {
        TreeVertex::base(g)
    }

    fn vertex_edge(g: &Arc<GraphOfGroups>, k: usize) -> TreeVertex {
        o(g).child(
            BlockElement::identity(g.surface(g.base_vertex())),
            DirEdge { edge: EdgeId(k), forward: true },
        )
        .unwrap()
    }

    #[test]
    fn fixes_examples() {
        let g = graph();
        let ve = vertex_edge(&g, 0);
        assert!(fixes_vertex(&GroupElement::identity(&g), &ve).unwrap());
        // z lies in the edge image, so it fixes vertex(e1)
        assert!(fixes_vertex(&GroupElement::fiber(&g, 1), &ve).unwrap());
        // c2 names a different coset
        let c2 = GroupElement::base_generator(&g, 1, 1).unwrap();
        assert!(!fixes_vertex(&c2, &ve).unwrap());
    }

    #[test]
    fn ball_counts_on_stock_graph() {
        let g = graph();
        let b0 = ball_enumerate(&g, 0, GUARD).unwrap();
        assert_eq!(b0.len(), 1);
        assert!(b0[0].is_identity());
        // norm 1: the six signed base generators plus identity
        let b1 = ball_enumerate(&g, 1, GUARD).unwrap();
        assert_eq!(b1.len(), 7);
        // norm 2 adds 22 base-block elements and the two cross-edge loops
        let b2 = ball_enumerate(&g, 2, GUARD).unwrap();
        assert_eq!(b2.len(), 31);
        let mut last = 0;
        for r in 0..=4u64 {
            let n = ball_enumerate(&g, r, GUARD).unwrap().len();
            assert!(n > last);
            last = n;
        }
    }

    #[test]
    fn ball_elements_are_distinct_and_canonical() {
        let g = graph();
        let ball = ball_enumerate(&g, 3, GUARD).unwrap();
        let set: HashSet<_> = ball.iter().cloned().collect();
        assert_eq!(set.len(), ball.len());
        for e in &ball {
            assert!(e.is_canonical());
            assert!(e.word_norm() <= 3);
        }
    }

    #[test]
    fn ball_guard_trips() {
        let g = graph();
        match ball_enumerate(&g, 4, 50) {
            Err(Error::Resource { count }) => assert!(count <= 50),
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn distance_two_intersection_is_fiber_cyclic() {
        let g = graph();
        // u = vertex(e1), v = vertex(e2): both neighbors of o
        let u = vertex_edge(&g, 0);
        let v = vertex_edge(&g, 1);
        let report = stab_intersection_check(&u, &v, 4, GUARD).unwrap();
        assert_eq!(report.distance, 2);
        match &report.structure {
            StabStructure::Cyclic { generator } => {
                let z = GroupElement::fiber(&g, 1);
                assert!(
                    *generator == z || *generator == z.inverse(),
                    "generator {generator} should be the base fiber"
                );
            }
            other => panic!("expected cyclic, got {other:?}"),
        }
        // z^1..z^4 and inverses
        assert_eq!(report.elements.len(), 8);
    }

    #[test]
    fn distance_two_with_nontrivial_coset() {
        let g = graph();
        let u = vertex_edge(&g, 0);
        let c2 = GroupElement::base_generator(&g, 1, 1).unwrap();
        let v = c2.act(&u).unwrap();
        let report = stab_intersection_check(&u, &v, 4, GUARD).unwrap();
        assert_eq!(report.distance, 2);
        assert!(matches!(report.structure, StabStructure::Cyclic { .. }));
    }

    #[test]
    fn distance_three_intersection_is_trivial() {
        let g = graph();
        let u = o(&g);
        // depth-3 vertex through e1, a far non-peripheral letter, back, then e1 again
        let s2 = g.surface(VertexId(1));
        let far =
            BlockElement::generator(s2, g.gen_in(DirEdge { edge: EdgeId(1), forward: true }), 1)
                .unwrap();
        let w = vertex_edge(&g, 0)
            .child(far, DirEdge { edge: EdgeId(0), forward: false })
            .unwrap()
            .child(
                BlockElement::generator(g.surface(g.base_vertex()), 1, 1).unwrap(),
                DirEdge { edge: EdgeId(0), forward: true },
            )
            .unwrap();
        assert_eq!(tree_distance(&u, &w).unwrap(), 3);
        let report = stab_intersection_check(&u, &w, 4, GUARD).unwrap();
        assert_eq!(report.structure, StabStructure::Trivial);
        assert!(report.elements.is_empty());
    }

    #[test]
    fn equal_vertices_give_other() {
        let g = graph();
        let u = o(&g);
        let report = stab_intersection_check(&u, &u, 3, GUARD).unwrap();
        assert_eq!(report.structure, StabStructure::Other);
        assert!(!report.elements.is_empty());
    }

    #[test]
    fn stab_closed_under_inverse_and_product_on_ball() {
        let g = graph();
        let u = vertex_edge(&g, 0);
        let ball = ball_enumerate(&g, 3, GUARD).unwrap();
        let fixers: Vec<GroupElement> = ball
            .into_iter()
            .filter(|e| fixes_vertex(e, &u).unwrap())
            .collect();
        for a in &fixers {
            assert!(fixes_vertex(&a.inverse(), &u).unwrap());
            for b in fixers.iter().take(10) {
                assert!(fixes_vertex(&a.mul(b).unwrap(), &u).unwrap());
            }
        }
    }

    #[test]
    fn fiber_conjugate_matches_direct_check() {
        let g = graph();
        // middle at depth 1: the conjugated fiber must fix the middle vertex
        let m = vertex_edge(&g, 0);
        let zc = fiber_conjugate(&m, 1);
        assert!(fixes_vertex(&zc, &m).unwrap());
        assert!(!zc.is_identity());
        // and at the base it is just z
        assert_eq!(fiber_conjugate(&o(&g), 1), GroupElement::fiber(&g, 1));
    }

    #[test]
    fn sole_fixer_found_at_base() {
        let g = graph();
        let found = sole_fixer_search(&o(&g), 2, 1, GUARD).unwrap();
        let got = found.expect("mixed word like c1 c2 must qualify");
        assert!(fixes_vertex(&got, &o(&g)).unwrap());
        // it is a mixed non-peripheral single syllable
        assert_eq!(got.edge_count(), 0);
        assert!(got.head_syllable().base.runs().len() >= 2);
        // z itself would fail: it fixes vertex(e1)
        let z = GroupElement::fiber(&g, 1);
        let neighbors = enumerate_neighbors(&o(&g), 1);
        assert!(neighbors.iter().any(|n| z.act(n).unwrap() == *n));
    }

    #[test]
    fn orbit_probe_moves_base() {
        let g = graph();
        // with two parallel edges, a norm-2 cross loop already moves o
        let finding = orbit_probe(&[o(&g)], 2, GUARD).unwrap().expect("found");
        assert_eq!(finding.moved_vertex, o(&g));
        assert!(finding.mover.edge_count() > 0);
        assert!(finding.mover.word_norm() <= 2);
    }

    #[test]
    fn orbit_probe_on_small_hulls() {
        let g = graph();
        let sets = vec![
            vec![o(&g)],
            vec![o(&g), vertex_edge(&g, 0)],
            {
                let mut s = vec![o(&g)];
                s.extend(enumerate_neighbors(&o(&g), 0));
                s
            },
        ];
        for set in sets {
            let finding = orbit_probe(&set, 4, GUARD).unwrap();
            assert!(finding.is_some(), "no mover for {set:?}");
        }
    }

    #[test]
    fn empty_candidate_set_rejected() {
        assert!(orbit_probe(&[], 2, GUARD).is_err());
    }
}
