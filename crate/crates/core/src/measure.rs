//! Step measures on countable groups, with exact mass accounting and
//! moment/entropy bounds.
//!
//! A measure has a finite core (elements with positive rational weights) and
//! an optional geometric tail: with the remaining mass, a length is drawn
//! with `P(L = k) = q^k (1 - q)` and a uniform product of `L` generators is
//! returned. Exponential tails keep the first moment finite, hence the
//! logarithmic moment and the entropy too; the tail's own pointwise masses
//! are not computable in closed form, so its moment contributions are
//! reported as analytic upper bounds.

use crate::error::{Error, Result};
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// A group a walk can run on: exact arithmetic plus the norms and keys the
/// engine needs. `origin_distance` is the displacement used for drift
/// diagnostics (tree depth for graph-of-groups elements, a word-metric gauge
/// for the reference groups); `norm` is the word-norm proxy used in moment
/// accounting.
pub trait WalkGroup: Sync {
    type Elem: Clone + Eq + std::hash::Hash + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;
    fn norm(&self, a: &Self::Elem) -> u64;
    fn origin_distance(&self, a: &Self::Elem) -> u64;
    /// Canonical printable key; equal keys iff equal elements.
    fn key(&self, a: &Self::Elem) -> String;
    /// The symmetric generating set backing presets and tail sampling.
    fn generators(&self) -> Vec<Self::Elem>;
}

/// The fundamental group of a validated graph of groups, with its canonical
/// generating set cached.
pub struct GraphGroup {
    graph: std::sync::Arc<crate::graph::GraphOfGroups>,
    gens: Vec<crate::fund::GroupElement>,
}

impl GraphGroup {
    pub fn new(graph: std::sync::Arc<crate::graph::GraphOfGroups>) -> Self {
        let gens = crate::fund::canonical_generators(&graph);
        GraphGroup { graph, gens }
    }

    pub fn graph(&self) -> &std::sync::Arc<crate::graph::GraphOfGroups> {
        &self.graph
    }
}

impl WalkGroup for GraphGroup {
    type Elem = crate::fund::GroupElement;

    fn identity(&self) -> Self::Elem {
        crate::fund::GroupElement::identity(&self.graph)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.mul(b).expect("same graph")
    }
    fn inverse(&self, a: &Self::Elem) -> Self::Elem {
        a.inverse()
    }
    fn norm(&self, a: &Self::Elem) -> u64 {
        a.word_norm()
    }
    fn origin_distance(&self, a: &Self::Elem) -> u64 {
        a.tree_position().depth() as u64
    }
    fn key(&self, a: &Self::Elem) -> String {
        a.to_string()
    }
    fn generators(&self) -> Vec<Self::Elem> {
        self.gens.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TailSpec {
    /// Mass handed to the tail sampler; the core carries `1 - mass`.
    pub mass: Rational64,
    /// Geometric ratio `q` of the length law, strictly inside (0, 1).
    pub length_ratio: Rational64,
}

/// Where a sampled step came from; first-return quotients compose
/// permutation images along this.
#[derive(Debug, Clone)]
pub enum StepProvenance {
    Core(usize),
    /// Indices into the generating set, in product order.
    TailWord(Vec<usize>),
}

pub struct StepMeasure<G: WalkGroup> {
    core: Vec<(G::Elem, Rational64)>,
    tail: Option<TailSpec>,
    // cumulative numerators over a common denominator, for exact sampling
    denom: u128,
    cum: Vec<u128>,
    generators: Vec<G::Elem>,
}

fn lcm_u128(a: u128, b: u128) -> u128 {
    fn gcd(mut a: u128, mut b: u128) -> u128 {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }
    a / gcd(a, b) * b
}

impl<G: WalkGroup> StepMeasure<G> {
    /// Validated constructor: positive weights, exact total mass 1, and a
    /// support that structurally generates the group (every canonical
    /// generator present in the core, or a tail present).
    pub fn build(
        group: &G,
        core: Vec<(G::Elem, Rational64)>,
        tail: Option<TailSpec>,
    ) -> Result<Self> {
        for (_, w) in &core {
            if !w.is_positive() {
                return Err(Error::Domain(format!("non-positive weight {w}")));
            }
        }
        let core_mass: Rational64 = core.iter().map(|(_, w)| *w).sum();
        let tail = tail.filter(|t| !t.mass.is_zero());
        if let Some(t) = &tail {
            if !t.mass.is_positive() || t.mass >= Rational64::one() {
                return Err(Error::Validation(format!(
                    "tail mass {} out of (0,1)",
                    t.mass
                )));
            }
            if !t.length_ratio.is_positive() || t.length_ratio >= Rational64::one() {
                return Err(Error::Validation(format!(
                    "tail length ratio {} out of (0,1)",
                    t.length_ratio
                )));
            }
        }
        let total = core_mass + tail.map(|t| t.mass).unwrap_or_else(Rational64::zero);
        if total != Rational64::one() {
            return Err(Error::Validation(format!("total mass {total} is not 1")));
        }
        if tail.is_none() {
            let support: std::collections::HashSet<&G::Elem> =
                core.iter().map(|(e, _)| e).collect();
            for g in group.generators() {
                if !support.contains(&g) {
                    return Err(Error::Validation(format!(
                        "support does not generate: generator {} missing and no tail present",
                        group.key(&g)
                    )));
                }
            }
        }
        Ok(Self::assemble(group, core, tail))
    }

    /// Unvalidated constructor for derived measures (pushforward images,
    /// diagnostic fixtures). Mass and generation checks are the caller's
    /// responsibility.
    pub fn new_unchecked(
        group: &G,
        core: Vec<(G::Elem, Rational64)>,
        tail: Option<TailSpec>,
    ) -> Self {
        Self::assemble(group, core, tail.filter(|t| !t.mass.is_zero()))
    }

    fn assemble(group: &G, core: Vec<(G::Elem, Rational64)>, tail: Option<TailSpec>) -> Self {
        let mut denom: u128 = 1;
        for (_, w) in &core {
            denom = lcm_u128(denom, *w.denom() as u128);
        }
        if let Some(t) = &tail {
            denom = lcm_u128(denom, *t.mass.denom() as u128);
        }
        let mut cum = Vec::with_capacity(core.len());
        let mut acc: u128 = 0;
        for (_, w) in &core {
            acc += (*w.numer() as u128) * (denom / (*w.denom() as u128));
            cum.push(acc);
        }
        StepMeasure {
            core,
            tail,
            denom,
            cum,
            generators: group.generators(),
        }
    }

    pub fn core(&self) -> &[(G::Elem, Rational64)] {
        &self.core
    }

    pub fn tail(&self) -> Option<&TailSpec> {
        self.tail.as_ref()
    }

    pub fn core_mass(&self) -> Rational64 {
        self.core.iter().map(|(_, w)| *w).sum()
    }

    /// Draws one step. Exact: core weights resolve over a common integer
    /// denominator, the tail length is a run of exact Bernoulli trials.
    pub fn sample_step(&self, group: &G, rng: &mut ChaCha8Rng) -> (G::Elem, StepProvenance) {
        let r = rng.gen_range(0..self.denom);
        match self.cum.iter().position(|&c| r < c) {
            Some(i) => (self.core[i].0.clone(), StepProvenance::Core(i)),
            None => {
                let t = self.tail.as_ref().expect("mass accounted");
                let q_num = *t.length_ratio.numer() as u64;
                let q_den = *t.length_ratio.denom() as u64;
                let mut len = 0u32;
                while rng.gen_range(0..q_den) < q_num {
                    len += 1;
                }
                let mut word = Vec::with_capacity(len as usize);
                let mut prod = group.identity();
                for _ in 0..len {
                    let k = rng.gen_range(0..self.generators.len());
                    word.push(k);
                    prod = group.mul(&prod, &self.generators[k]);
                }
                (prod, StepProvenance::TailWord(word))
            }
        }
    }

    /// Geometric tail length sampler, exposed for direct distribution checks.
    pub fn sample_tail_length(&self, rng: &mut ChaCha8Rng) -> Option<u32> {
        let t = self.tail.as_ref()?;
        let q_num = *t.length_ratio.numer() as u64;
        let q_den = *t.length_ratio.denom() as u64;
        let mut len = 0u32;
        while rng.gen_range(0..q_den) < q_num {
            len += 1;
        }
        Some(len)
    }
}

/// Entropy and moment accounting: exact sums over the core, analytic upper
/// bounds for the tail, and their totals. All totals are finite for any
/// geometric tail with ratio < 1.
#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    /// -sum w log w over core entries (nats), exact up to f64 evaluation.
    pub entropy_core: f64,
    /// Upper bound on the measure's entropy including the tail channel.
    pub entropy_bound: f64,
    /// sum w log|g| over the core, with log|identity| taken as 0.
    pub log_moment_core: f64,
    pub log_moment_bound: f64,
    /// sum w |g| over the core, exact.
    pub first_moment_core: Rational64,
    pub first_moment_bound: f64,
}

pub fn moment_report<G: WalkGroup>(group: &G, m: &StepMeasure<G>) -> MomentReport {
    let to_f = |r: &Rational64| *r.numer() as f64 / *r.denom() as f64;

    let mut entropy_core = 0.0;
    let mut log_moment_core = 0.0;
    let mut first_moment_core = Rational64::zero();
    for (e, w) in m.core() {
        let wf = to_f(w);
        entropy_core -= wf * wf.ln();
        let n = group.norm(e);
        if n > 1 {
            log_moment_core += wf * (n as f64).ln();
        }
        first_moment_core += *w * Rational64::from_integer(n as i64);
    }

    let (entropy_bound, log_moment_bound, first_moment_bound) = match m.tail() {
        None => (entropy_core, log_moment_core, to_f(&first_moment_core)),
        Some(t) => {
            let tm = to_f(&t.mass);
            let q = to_f(&t.length_ratio);
            let gens = group.generators();
            let gen_count = gens.len().max(1) as f64;
            let max_gen_norm = gens
                .iter()
                .map(|g| group.norm(g))
                .max()
                .unwrap_or(1)
                .max(1) as f64;
            let expected_len = q / (1.0 - q);
            // entropy of the geometric length law
            let h_len = -(1.0 - q).ln() - q * q.ln() / (1.0 - q);
            // tail channel entropy <= length entropy + E[L] log(#generators);
            // the core/tail split adds -t log t (the core side's weights are
            // already the true masses inside entropy_core).
            let entropy_bound =
                entropy_core - tm * tm.ln() + tm * (h_len + expected_len * gen_count.ln());
            // |tail element| <= max_gen_norm * L, and E log(1+L) <= log(1+E L)
            let log_moment_bound =
                log_moment_core + tm * (max_gen_norm.ln() + (1.0 + expected_len).ln());
            let first_moment_bound = to_f(&first_moment_core) + tm * max_gen_norm * expected_len;
            (entropy_bound, log_moment_bound, first_moment_bound)
        }
    };

    MomentReport {
        entropy_core,
        entropy_bound,
        log_moment_core,
        log_moment_bound,
        first_moment_core,
        first_moment_bound,
    }
}

// ---------------------------------------------------------------------------
// Graph-group presets and the measure config format
// ---------------------------------------------------------------------------

/// Uniform measure on the canonical generating set.
pub fn preset_uniform(group: &GraphGroup) -> StepMeasure<GraphGroup> {
    let gens = group.generators();
    let w = Rational64::new(1, gens.len() as i64);
    StepMeasure::build(group, gens.into_iter().map(|g| (g, w)).collect(), None)
        .expect("uniform preset is valid")
}

/// Geometric-tail preset: nine tenths uniform on the generators, one tenth
/// in a geometric tail with ratio one half (infinite support).
pub fn preset_geometric(group: &GraphGroup) -> StepMeasure<GraphGroup> {
    let gens = group.generators();
    let w = Rational64::new(9, 10 * gens.len() as i64);
    StepMeasure::build(
        group,
        gens.into_iter().map(|g| (g, w)).collect(),
        Some(TailSpec {
            mass: Rational64::new(1, 10),
            length_ratio: Rational64::new(1, 2),
        }),
    )
    .expect("geometric preset is valid")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub core: Vec<MeasureEntry>,
    #[serde(default)]
    pub tail: Option<TailSpecConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureEntry {
    pub element: String,
    pub weight: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailSpecConfig {
    pub mass: String,
    pub length_ratio: String,
}

pub fn parse_ratio(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad ratio {s:?}")))?;
            let q: i64 = q
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad ratio {s:?}")))?;
            if q == 0 {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Rational64::new(p, q)
        }
        None => {
            let p: i64 = s
                .parse()
                .map_err(|_| Error::Parse(format!("bad ratio {s:?}")))?;
            Rational64::from_integer(p)
        }
    };
    Ok(r)
}

/// Builds a validated measure over a graph group from its config form.
pub fn measure_from_spec(
    group: &GraphGroup,
    spec: &MeasureSpec,
) -> Result<StepMeasure<GraphGroup>> {
    let mut merged: HashMap<crate::fund::GroupElement, Rational64> = HashMap::new();
    for entry in &spec.core {
        let elem = crate::token::parse_element(group.graph(), &entry.element)?;
        let w = parse_ratio(&entry.weight)?;
        *merged.entry(elem).or_insert_with(Rational64::zero) += w;
    }
    let mut core: Vec<_> = merged.into_iter().collect();
    core.sort_by_key(|(e, _)| (e.word_norm(), e.to_string()));
    let tail = match &spec.tail {
        Some(t) => Some(TailSpec {
            mass: parse_ratio(&t.mass)?,
            length_ratio: parse_ratio(&t.length_ratio)?,
        }),
        None => None,
    };
    StepMeasure::build(group, core, tail)
}
