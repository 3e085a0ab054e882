//! Exact arithmetic in fundamental groups of graph-manifold graphs of groups,
//! Bass-Serre tree geometry, and random-walk simulation toward the tree's
//! space of ends.
//!
//! The crate is organized around the pipeline:
//!
//! * [`words`], [`surface`], [`block`] — free-group words and block groups
//!   (surface group x fiber) with exact normal forms;
//! * [`graph`] — the graph-of-groups schema: vertices carry block groups,
//!   edges carry GL2(Z) peripheral gluings; validation and edge embeddings;
//! * [`fund`] — Britton-reduced decorated-path normal forms for the
//!   fundamental group, with multiplication, inversion, word norm, and the
//!   action on the Bass-Serre tree;
//! * [`tree`] — tree vertices as canonical cosets, distances, geodesics,
//!   neighbor enumeration, ends as geodesic prefixes and cylinders;
//! * [`stab`] — exhaustive ball enumeration and stabilizer probes;
//! * [`measure`], [`walk`], [`stationarity`], [`drift`], [`firstreturn`] —
//!   step measures with moment accounting and the Monte Carlo walk engine;
//! * [`atlas`] — the geometry classification table, exact Nil/Sol arithmetic,
//!   reference groups, and the central-fiber pushforward;
//! * [`token`] — the printable grammar for elements and vertices.

pub mod atlas;
pub mod block;
pub mod drift;
pub mod error;
pub mod firstreturn;
pub mod fund;
pub mod graph;
pub mod measure;
pub mod stab;
pub mod stationarity;
pub mod surface;
pub mod token;
pub mod tree;
pub mod walk;
pub mod words;

pub use block::BlockElement;
pub use error::{Error, Result};
pub use fund::GroupElement;
pub use graph::{DirEdge, EdgeId, GraphOfGroups, GraphSpec, VertexId};
pub use surface::SurfaceData;
pub use tree::{EndPrefix, TreeVertex};
pub use words::FreeWord;
