//! Graph-of-groups schema for graph-manifold data.
//!
//! Vertices carry block groups (surface group times fiber), edges carry
//! rank-2 free-abelian gluings between peripheral subgroups of their two
//! endpoint groups. The gluing of an edge is a matrix in GL2(Z) transporting
//! peripheral coordinates `(boundary exponent, fiber exponent)` from the
//! `from`-side to the `to`-side. Transversality — the second basis vector
//! (the fiber) must not map to a fiber power on the far side — is what makes
//! deep stabilizer intersections collapse.

use crate::block::BlockElement;
use crate::error::{Error, Result};
use crate::surface::SurfaceData;
use crate::words::FreeWord;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

/// A directed traversal of an undirected gluing edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DirEdge {
    pub edge: EdgeId,
    pub forward: bool,
}

impl DirEdge {
    pub fn reverse(self) -> DirEdge {
        DirEdge {
            edge: self.edge,
            forward: !self.forward,
        }
    }
}

pub type Gl2 = [[i64; 2]; 2];

pub fn det2(m: &Gl2) -> i64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Exact inverse of a GL2(Z) matrix.
pub fn inv2(m: &Gl2) -> Gl2 {
    let d = det2(m);
    debug_assert!(d == 1 || d == -1);
    [
        [d * m[1][1], -d * m[0][1]],
        [-d * m[1][0], d * m[0][0]],
    ]
}

pub fn apply2(m: &Gl2, v: (i64, i64)) -> (i64, i64) {
    (
        m[0][0] * v.0 + m[0][1] * v.1,
        m[1][0] * v.0 + m[1][1] * v.1,
    )
}

/// One torus gluing: endpoints are (vertex, designated boundary slot) pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeGluing {
    pub from: (VertexId, u32),
    pub to: (VertexId, u32),
    pub matrix: Gl2,
}

// ---------------------------------------------------------------------------
// Config schema (the on-disk graph description consumed by the CLI)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<EdgeSpec>,
    pub base: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub id: String,
    pub genus: u32,
    pub boundary: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub from: (String, u32),
    pub to: (String, u32),
    pub matrix: Gl2,
}

impl GraphSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph config: {e}")))
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<String>,
    /// Informational findings that do not invalidate the graph, e.g. unglued
    /// boundary slots (the manifold then has leftover boundary tori).
    pub notes: Vec<String>,
}

/// Checks every schema invariant and returns the complete list of violations.
pub fn validate_graph(spec: &GraphSpec) -> ValidationReport {
    let mut violations = Vec::new();
    let mut notes = Vec::new();

    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, v) in spec.vertices.iter().enumerate() {
        if index.insert(v.id.as_str(), i).is_some() {
            violations.push(format!("duplicate vertex id {:?}", v.id));
        }
        if v.boundary == 0 {
            violations.push(format!("vertex {:?}: no boundary circles", v.id));
        }
        let chi = 2 - 2 * v.genus as i64 - v.boundary as i64;
        if chi >= 0 {
            violations.push(format!(
                "vertex {:?}: Euler characteristic {chi} not negative",
                v.id
            ));
        }
    }
    if spec.vertices.is_empty() {
        violations.push("graph has no vertices".into());
    }
    if !index.contains_key(spec.base.as_str()) {
        violations.push(format!("base vertex {:?} not declared", spec.base));
    }
    if spec.edges.is_empty() {
        violations.push("graph has no edges".into());
    }

    let mut used_slots: BTreeSet<(usize, u32)> = BTreeSet::new();
    for (k, e) in spec.edges.iter().enumerate() {
        let label = format!("edge {}", k + 1);
        let mut endpoint = |side: &(String, u32)| -> Option<usize> {
            match index.get(side.0.as_str()) {
                Some(&i) => {
                    let v = &spec.vertices[i];
                    if side.1 < 1 || side.1 >= v.boundary {
                        violations.push(format!(
                            "{label}: slot {} at {:?} is not a designated boundary slot (must be 1..{})",
                            side.1,
                            side.0,
                            v.boundary.saturating_sub(1)
                        ));
                    }
                    if !used_slots.insert((i, side.1)) {
                        violations.push(format!(
                            "{label}: slot {} at {:?} already used by another edge",
                            side.1, side.0
                        ));
                    }
                    Some(i)
                }
                None => {
                    violations.push(format!("{label}: unknown vertex {:?}", side.0));
                    None
                }
            }
        };
        let a = endpoint(&e.from);
        let b = endpoint(&e.to);
        if let (Some(a), Some(b)) = (a, b) {
            if a == b {
                violations.push(format!("{label}: loop edge at {:?}", e.from.0));
            }
        }
        let d = det2(&e.matrix);
        if d != 1 && d != -1 {
            violations.push(format!("{label}: matrix determinant {d} is not +-1"));
        }
        if e.matrix[0][1] == 0 {
            violations.push(format!("{label}: fiber glued to fiber (transversality fails)"));
        }
    }

    // Connectivity over declared vertices (skip if endpoints were unknown).
    if !spec.vertices.is_empty() {
        let n = spec.vertices.len();
        let mut adj = vec![Vec::new(); n];
        for e in &spec.edges {
            if let (Some(&a), Some(&b)) = (
                index.get(e.from.0.as_str()),
                index.get(e.to.0.as_str()),
            ) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            violations.push("underlying graph is not connected".into());
        }
    }

    for (i, v) in spec.vertices.iter().enumerate() {
        let unglued: Vec<u32> = (1..=v.boundary)
            .filter(|&s| s == v.boundary || !used_slots.contains(&(i, s)))
            .collect();
        if !unglued.is_empty() {
            notes.push(format!(
                "vertex {:?}: boundary slots {:?} unglued (manifold keeps boundary tori there)",
                v.id, unglued
            ));
        }
    }

    ValidationReport {
        ok: violations.is_empty(),
        violations,
        notes,
    }
}

// ---------------------------------------------------------------------------
// The validated graph
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct GraphOfGroups {
    names: Vec<String>,
    surfaces: Vec<SurfaceData>,
    edges: Vec<EdgeGluing>,
    base: VertexId,
    out_edges: Vec<Vec<DirEdge>>,
    /// Distance (in edges) from each vertex to the base, over the underlying graph.
    base_dist: Vec<u32>,
    fingerprint: u64,
}

impl PartialEq for GraphOfGroups {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint
    }
}
impl Eq for GraphOfGroups {}

impl GraphOfGroups {
    /// Builds a validated graph; any violation refuses construction.
    pub fn build(spec: &GraphSpec) -> Result<Arc<Self>> {
        let report = validate_graph(spec);
        if !report.ok {
            return Err(Error::InvalidGraph(report.violations.join("; ")));
        }
        let index: BTreeMap<&str, usize> = spec
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), i))
            .collect();
        let surfaces: Vec<SurfaceData> = spec
            .vertices
            .iter()
            .map(|v| SurfaceData::new(v.genus, v.boundary))
            .collect::<Result<_>>()?;
        let edges: Vec<EdgeGluing> = spec
            .edges
            .iter()
            .map(|e| EdgeGluing {
                from: (VertexId(index[e.from.0.as_str()]), e.from.1),
                to: (VertexId(index[e.to.0.as_str()]), e.to.1),
                matrix: e.matrix,
            })
            .collect();
        let mut out_edges = vec![Vec::new(); spec.vertices.len()];
        for (k, e) in edges.iter().enumerate() {
            out_edges[e.from.0 .0].push(DirEdge {
                edge: EdgeId(k),
                forward: true,
            });
            out_edges[e.to.0 .0].push(DirEdge {
                edge: EdgeId(k),
                forward: false,
            });
        }
        for list in &mut out_edges {
            list.sort();
        }
        let base = VertexId(index[spec.base.as_str()]);

        // BFS distances to base for path pruning during ball enumeration.
        let mut base_dist = vec![u32::MAX; spec.vertices.len()];
        base_dist[base.0] = 0;
        let mut queue = std::collections::VecDeque::from([base.0]);
        while let Some(v) = queue.pop_front() {
            for d in &out_edges[v] {
                let w = match d.forward {
                    true => edges[d.edge.0].to.0 .0,
                    false => edges[d.edge.0].from.0 .0,
                };
                if base_dist[w] == u32::MAX {
                    base_dist[w] = base_dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }

        let mut hasher = std::collections::hash_map::DefaultHasher::new();
        serde_json::to_string(spec)
            .map_err(|e| Error::Parse(e.to_string()))?
            .hash(&mut hasher);
        let fingerprint = hasher.finish();

        Ok(Arc::new(GraphOfGroups {
            names: spec.vertices.iter().map(|v| v.id.clone()).collect(),
            surfaces,
            edges,
            base,
            out_edges,
            base_dist,
            fingerprint,
        }))
    }

    pub fn vertex_count(&self) -> usize {
        self.surfaces.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn base_vertex(&self) -> VertexId {
        self.base
    }

    pub fn surface(&self, v: VertexId) -> SurfaceData {
        self.surfaces[v.0]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeGluing {
        &self.edges[e.0]
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn same_graph(&self, other: &GraphOfGroups) -> bool {
        self.fingerprint == other.fingerprint
    }

    /// Directed edges leaving `v`, in a fixed deterministic order.
    pub fn out_edges(&self, v: VertexId) -> &[DirEdge] {
        &self.out_edges[v.0]
    }

    pub fn origin(&self, d: DirEdge) -> VertexId {
        let e = &self.edges[d.edge.0];
        if d.forward {
            e.from.0
        } else {
            e.to.0
        }
    }

    pub fn target(&self, d: DirEdge) -> VertexId {
        let e = &self.edges[d.edge.0];
        if d.forward {
            e.to.0
        } else {
            e.from.0
        }
    }

    /// Boundary slot used by `d` at its origin vertex.
    pub fn slot_out(&self, d: DirEdge) -> u32 {
        let e = &self.edges[d.edge.0];
        if d.forward {
            e.from.1
        } else {
            e.to.1
        }
    }

    /// Boundary slot used by `d` at its target vertex.
    pub fn slot_in(&self, d: DirEdge) -> u32 {
        self.slot_out(d.reverse())
    }

    /// Generator index of the peripheral boundary generator at `d`'s origin.
    pub fn gen_out(&self, d: DirEdge) -> u32 {
        let v = self.origin(d);
        self.surfaces[v.0]
            .boundary_gen(self.slot_out(d))
            .expect("validated slot")
    }

    pub fn gen_in(&self, d: DirEdge) -> u32 {
        self.gen_out(d.reverse())
    }

    /// Transports peripheral coordinates (boundary exponent, fiber exponent)
    /// across `d` from origin-side to target-side.
    pub fn cross(&self, d: DirEdge, coords: (i64, i64)) -> (i64, i64) {
        let m = &self.edges[d.edge.0].matrix;
        if d.forward {
            apply2(m, coords)
        } else {
            apply2(&inv2(m), coords)
        }
    }

    /// The peripheral block element `c^a z^b` at `d`'s origin vertex.
    pub fn peripheral_out(&self, d: DirEdge, coords: (i64, i64)) -> BlockElement {
        let v = self.origin(d);
        BlockElement {
            surface: self.surfaces[v.0],
            base: FreeWord::letter(self.gen_out(d), coords.0),
            fiber: coords.1,
        }
    }

    pub fn dist_to_base(&self, v: VertexId) -> u32 {
        self.base_dist[v.0]
    }
}

/// Which end of an edge an embedding lands in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeSide {
    Left,
    Right,
}

/// Monomorphism of the rank-2 edge group into an endpoint vertex group.
///
/// The left side maps `(m1, m2)` to `c^m1 z^m2` at the `from` vertex; the
/// right side applies the gluing matrix first and lands at the `to` vertex.
pub fn edge_embed(graph: &GraphOfGroups, e: EdgeId, side: EdgeSide, m: (i64, i64)) -> BlockElement {
    let d = DirEdge { edge: e, forward: true };
    match side {
        EdgeSide::Left => graph.peripheral_out(d, m),
        EdgeSide::Right => graph.peripheral_out(d.reverse(), graph.cross(d, m)),
    }
}

// ---------------------------------------------------------------------------
// Stock graphs
// ---------------------------------------------------------------------------

/// The default two-block graph: two pair-of-pants blocks joined by two
/// parallel edges with swap gluings. Both slots of each vertex are glued, the
/// third boundary circle stays free.
pub fn two_block_spec() -> GraphSpec {
    GraphSpec {
        vertices: vec![
            VertexSpec {
                id: "v1".into(),
                genus: 0,
                boundary: 3,
            },
            VertexSpec {
                id: "v2".into(),
                genus: 0,
                boundary: 3,
            },
        ],
        edges: vec![
            EdgeSpec {
                from: ("v1".into(), 1),
                to: ("v2".into(), 1),
                matrix: [[0, 1], [1, 0]],
            },
            EdgeSpec {
                from: ("v1".into(), 2),
                to: ("v2".into(), 2),
                matrix: [[0, 1], [1, 0]],
            },
        ],
        base: "v1".into(),
    }
}

pub fn two_block_graph() -> Arc<GraphOfGroups> {
    GraphOfGroups::build(&two_block_spec()).expect("stock graph is valid")
}

/// Random valid graph-of-groups instances for randomized verification.
///
/// Produces 2-4 vertices on a path plus possibly one extra parallel edge,
/// with random small-entry GL2(Z) gluings (transversal by construction).
pub fn random_graph_spec(seed: u64) -> GraphSpec {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);

    let n = rng.gen_range(2..=4usize);
    let extra_edge = rng.gen_bool(0.5);
    // Degree per vertex along the path, plus the possible parallel edge at the
    // first pair.
    let mut degree = vec![0u32; n];
    for i in 0..n - 1 {
        degree[i] += 1;
        degree[i + 1] += 1;
    }
    if extra_edge {
        degree[0] += 1;
        degree[1] += 1;
    }

    let vertices: Vec<VertexSpec> = (0..n)
        .map(|i| {
            let genus = rng.gen_range(0..=1u32);
            // Need `degree` designated slots, so boundary >= degree + 1, and
            // negative Euler characteristic.
            let min_b = (degree[i] + 1).max(if genus == 0 { 3 } else { 1 });
            let boundary = min_b + rng.gen_range(0..=1u32);
            VertexSpec {
                id: format!("v{}", i + 1),
                genus,
                boundary,
            }
        })
        .collect();

    let mut slot_next = vec![1u32; n];
    let take_slot = |v: usize, slot_next: &mut Vec<u32>| {
        let s = slot_next[v];
        slot_next[v] += 1;
        s
    };

    let random_matrix = |rng: &mut rand_chacha::ChaCha8Rng| -> Gl2 {
        loop {
            // Random product of elementary matrices and the swap keeps the
            // determinant in {1, -1}; retry until transversal.
            let mut m: Gl2 = [[1, 0], [0, 1]];
            for _ in 0..rng.gen_range(1..=4) {
                let f: Gl2 = match rng.gen_range(0..3) {
                    0 => [[1, rng.gen_range(-2..=2i64)], [0, 1]],
                    1 => [[1, 0], [rng.gen_range(-2..=2i64), 1]],
                    _ => [[0, 1], [1, 0]],
                };
                m = [
                    [
                        f[0][0] * m[0][0] + f[0][1] * m[1][0],
                        f[0][0] * m[0][1] + f[0][1] * m[1][1],
                    ],
                    [
                        f[1][0] * m[0][0] + f[1][1] * m[1][0],
                        f[1][0] * m[0][1] + f[1][1] * m[1][1],
                    ],
                ];
            }
            if m[0][1] != 0 {
                return m;
            }
        }
    };

    let mut edges = Vec::new();
    for i in 0..n - 1 {
        edges.push(EdgeSpec {
            from: (format!("v{}", i + 1), take_slot(i, &mut slot_next)),
            to: (format!("v{}", i + 2), take_slot(i + 1, &mut slot_next)),
            matrix: random_matrix(&mut rng),
        });
    }
    if extra_edge {
        edges.push(EdgeSpec {
            from: ("v1".into(), take_slot(0, &mut slot_next)),
            to: ("v2".into(), take_slot(1, &mut slot_next)),
            matrix: random_matrix(&mut rng),
        });
    }

    GraphSpec {
        vertices,
        edges,
        base: "v1".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stock_graph_validates() {
        let spec = two_block_spec();
        let report = validate_graph(&spec);
        assert!(report.ok, "{:?}", report.violations);
        assert!(!report.notes.is_empty()); // slot 3 of each vertex stays free
    }

    #[test]
    fn simple_two_vertex_one_edge_ok() {
        let spec = GraphSpec {
            vertices: vec![
                VertexSpec { id: "v1".into(), genus: 0, boundary: 3 },
                VertexSpec { id: "v2".into(), genus: 0, boundary: 3 },
            ],
            edges: vec![EdgeSpec {
                from: ("v1".into(), 1),
                to: ("v2".into(), 1),
                matrix: [[0, 1], [1, 0]],
            }],
            base: "v1".into(),
        };
        assert!(validate_graph(&spec).ok);
    }

    #[test]
    fn loop_edge_violates() {
        let mut spec = two_block_spec();
        spec.edges[0].to = ("v1".into(), 2);
        spec.edges.truncate(1);
        let report = validate_graph(&spec);
        assert!(!report.ok);
        assert!(report.violations.iter().any(|v| v.contains("loop edge")));
    }

    #[test]
    fn fiber_to_fiber_violates() {
        let mut spec = two_block_spec();
        spec.edges[0].matrix = [[1, 0], [0, 1]];
        let report = validate_graph(&spec);
        assert!(!report.ok);
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("fiber glued to fiber")));
    }

    #[test]
    fn disconnected_and_slot_reuse_reported() {
        let mut spec = two_block_spec();
        spec.edges[1].from = ("v1".into(), 1); // reuse slot 1
        let report = validate_graph(&spec);
        assert!(report.violations.iter().any(|v| v.contains("already used")));

        let spec2 = GraphSpec {
            vertices: vec![
                VertexSpec { id: "a".into(), genus: 0, boundary: 3 },
                VertexSpec { id: "b".into(), genus: 0, boundary: 3 },
                VertexSpec { id: "c".into(), genus: 0, boundary: 3 },
            ],
            edges: vec![EdgeSpec {
                from: ("a".into(), 1),
                to: ("b".into(), 1),
                matrix: [[0, 1], [1, 0]],
            }],
            base: "a".into(),
        };
        let report2 = validate_graph(&spec2);
        assert!(report2
            .violations
            .iter()
            .any(|v| v.contains("not connected")));
    }

    #[test]
    fn embed_examples() {
        let g = two_block_graph();
        let e = EdgeId(0);
        // left (0,1) -> the fiber z
        let z = edge_embed(&g, e, EdgeSide::Left, (0, 1));
        assert!(z.base.is_identity());
        assert_eq!(z.fiber, 1);
        // right (0,1): swap matrix sends it to (1,0), i.e. c'1
        let c = edge_embed(&g, e, EdgeSide::Right, (0, 1));
        assert_eq!(c.base, FreeWord::letter(g.gen_in(DirEdge { edge: e, forward: true }), 1));
        assert_eq!(c.fiber, 0);
    }

    #[test]
    fn embed_is_homomorphism() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for gseed in 0..5u64 {
            let spec = random_graph_spec(gseed);
            assert!(validate_graph(&spec).ok, "seed {gseed}");
            let g = GraphOfGroups::build(&spec).unwrap();
            for side in [EdgeSide::Left, EdgeSide::Right] {
                for _ in 0..50 {
                    let m = (rng.gen_range(-4..=4i64), rng.gen_range(-4..=4i64));
                    let m2 = (rng.gen_range(-4..=4i64), rng.gen_range(-4..=4i64));
                    let sum = edge_embed(&g, EdgeId(0), side, (m.0 + m2.0, m.1 + m2.1));
                    let prod = edge_embed(&g, EdgeId(0), side, m)
                        .mul(&edge_embed(&g, EdgeId(0), side, m2))
                        .unwrap();
                    assert_eq!(sum, prod);
                }
            }
        }
    }

    #[test]
    fn cross_round_trips() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for gseed in 0..8u64 {
            let g = GraphOfGroups::build(&random_graph_spec(gseed)).unwrap();
            for k in 0..g.edge_count() {
                let d = DirEdge { edge: EdgeId(k), forward: true };
                for _ in 0..30 {
                    let m = (rng.gen_range(-9..=9i64), rng.gen_range(-9..=9i64));
                    assert_eq!(g.cross(d.reverse(), g.cross(d, m)), m);
                }
            }
        }
    }

    #[test]
    fn infinite_index_witnessed_by_coset_growth() {
        // The edge image <c> x Z misses every reduced word not a c-power;
        // count distinct coset representatives up to each length bound.
        let g = two_block_graph();
        let d = DirEdge { edge: EdgeId(0), forward: true };
        let slot_gen = g.gen_out(d);
        let rank = g.surface(g.base_vertex()).rank();
        let mut counts = Vec::new();
        for bound in 0..5u64 {
            let mut reps = std::collections::BTreeSet::new();
            let mut stack = vec![FreeWord::identity()];
            while let Some(w) = stack.pop() {
                if w.len() <= bound && !w.runs().last().map_or(false, |&(g0, _)| g0 == slot_gen) {
                    reps.insert(w.clone());
                }
                if w.len() < bound {
                    for gen in 0..rank {
                        for sign in [1i64, -1] {
                            let next = w.mul(&FreeWord::letter(gen, sign));
                            if next.len() > w.len() {
                                stack.push(next);
                            }
                        }
                    }
                }
            }
            counts.push(reps.len());
        }
        for pair in counts.windows(2) {
            assert!(pair[1] > pair[0], "coset count must grow: {counts:?}");
        }
    }

    #[test]
    fn random_specs_validate() {
        for seed in 0..30u64 {
            let spec = random_graph_spec(seed);
            let report = validate_graph(&spec);
            assert!(report.ok, "seed {seed}: {:?}", report.violations);
        }
    }

    #[test]
    fn config_rejects_unknown_fields() {
        let text = r#"{"vertices": [], "edges": [], "base": "v1", "bogus": 1}"#;
        assert!(GraphSpec::from_json(text).is_err());
    }
}
