//! First-return reduction to a finite-index subgroup.
//!
//! A finite-index subgroup is carried as the kernel of a map onto a finite
//! permutation group, given by images of the measure's core elements and of
//! the generators (tail samples compose generator images). The induced
//! measure is the law of the walk's position the first time its permutation
//! image returns to the identity.

use crate::error::{Error, Result};
use crate::measure::{StepMeasure, StepProvenance, WalkGroup};
use crate::walk::stream_rng;
use serde::Serialize;

/// A permutation of `0..degree` in image form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perm(pub Vec<u8>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u8).collect())
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u8 == j)
    }

    /// The cyclic shift by `x` on `m` points (the mod-`m` quotient of an
    /// integer coordinate).
    pub fn shift(x: i64, m: usize) -> Perm {
        let m = m as i64;
        let x = x.rem_euclid(m);
        Perm((0..m).map(|i| ((i + x) % m) as u8).collect())
    }
}

pub struct QuotientMap<G: WalkGroup> {
    pub degree: usize,
    core_images: Vec<Perm>,
    gen_images: Vec<Perm>,
    _group: std::marker::PhantomData<fn() -> G>,
}

impl<G: WalkGroup> QuotientMap<G> {
    /// Builds the map from a per-element image function and validates it as a
    /// homomorphism on sampled relators: products of core elements and
    /// generators must have multiplicative images.
    pub fn from_fn(
        group: &G,
        m: &StepMeasure<G>,
        degree: usize,
        f: impl Fn(&G::Elem) -> Perm,
    ) -> Result<Self> {
        if degree == 0 || degree > 64 {
            return Err(Error::Validation(format!(
                "quotient degree {degree} out of range 1..=64"
            )));
        }
        let core_images: Vec<Perm> = m.core().iter().map(|(e, _)| f(e)).collect();
        let gen_images: Vec<Perm> = group.generators().iter().map(&f).collect();
        for p in core_images.iter().chain(gen_images.iter()) {
            if p.0.len() != degree {
                return Err(Error::Validation("image degree mismatch".into()));
            }
        }

        // relation check: f(a b) = f(a) f(b) on sampled products
        let mut pool: Vec<&G::Elem> = m.core().iter().map(|(e, _)| e).collect();
        let gens = group.generators();
        pool.extend(gens.iter());
        let cap = 240usize;
        let mut checked = 0usize;
        'outer: for a in &pool {
            for b in &pool {
                let prod = group.mul(a, b);
                if f(&prod) != f(a).then(&f(b)) {
                    return Err(Error::Validation(format!(
                        "image table is not a homomorphism: fails on {} * {}",
                        group.key(a),
                        group.key(b)
                    )));
                }
                checked += 1;
                if checked >= cap {
                    break 'outer;
                }
            }
        }

        Ok(QuotientMap {
            degree,
            core_images,
            gen_images,
            _group: std::marker::PhantomData,
        })
    }

    fn image_of(&self, prov: &StepProvenance) -> Perm {
        match prov {
            StepProvenance::Core(i) => self.core_images[*i].clone(),
            StepProvenance::TailWord(word) => {
                let mut p = Perm::identity(self.degree);
                for &k in word {
                    p = p.then(&self.gen_images[k]);
                }
                p
            }
        }
    }
}

/// The trivial quotient: everything maps to the identity, so the induced
/// measure equals the step measure.
pub fn trivial_quotient<G: WalkGroup>(group: &G, m: &StepMeasure<G>) -> QuotientMap<G> {
    QuotientMap::from_fn(group, m, 1, |_| Perm::identity(1)).expect("trivial map is a homomorphism")
}

/// Edge-traversal parity on a graph group: a pinch cancels edges in pairs,
/// so the edge count of the canonical form is additive mod 2.
pub fn edge_parity_quotient(
    group: &crate::measure::GraphGroup,
    m: &StepMeasure<crate::measure::GraphGroup>,
) -> Result<QuotientMap<crate::measure::GraphGroup>> {
    QuotientMap::from_fn(group, m, 2, |e| Perm::shift(e.edge_count() as i64, 2))
}

#[derive(Debug, Clone, Serialize)]
pub struct FirstReturnSample {
    /// Canonical key of the recorded kernel element.
    pub position: String,
    pub return_time: u32,
}

/// Runs the walk repeatedly, recording the position at the first step whose
/// permutation image is the identity; `n_returns` independent samples of the
/// induced measure on the kernel.
pub fn first_return_walk<G: WalkGroup>(
    group: &G,
    m: &StepMeasure<G>,
    quot: &QuotientMap<G>,
    n_returns: u64,
    max_steps_per_return: u32,
    seed: u64,
) -> Result<Vec<(G::Elem, u32)>> {
    let mut out = Vec::with_capacity(n_returns as usize);
    for j in 0..n_returns {
        let mut rng = stream_rng(seed, 0, j);
        let mut pos = group.identity();
        let mut state = Perm::identity(quot.degree);
        let mut returned = false;
        for k in 1..=max_steps_per_return {
            let (g, prov) = m.sample_step(group, &mut rng);
            pos = group.mul(&pos, &g);
            state = state.then(&quot.image_of(&prov));
            if state.is_identity() {
                out.push((pos, k));
                returned = true;
                break;
            }
        }
        if !returned {
            return Err(Error::Validation(format!(
                "walk {j} did not return within {max_steps_per_return} steps"
            )));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::two_block_graph;
    use crate::measure::{preset_uniform, GraphGroup};

    #[test]
    fn perm_algebra() {
        let s = Perm::shift(1, 3);
        assert!(!s.is_identity());
        assert!(s.then(&s).then(&s).is_identity());
        assert_eq!(Perm::shift(-1, 3), Perm::shift(2, 3));
    }

    #[test]
    fn trivial_quotient_returns_immediately() {
        let g = GraphGroup::new(two_block_graph());
        let m = preset_uniform(&g);
        let q = trivial_quotient(&g, &m);
        let samples = first_return_walk(&g, &m, &q, 200, 10, 3).unwrap();
        // every step is already in the kernel: the induced law is the step law
        let mut rng = stream_rng(3, 0, 7);
        let _ = &mut rng;
        for (pos, t) in &samples {
            assert_eq!(*t, 1);
            assert!(m.core().iter().any(|(e, _)| e == pos));
        }
    }

    #[test]
    fn edge_parity_samples_have_even_edge_count() {
        let g = GraphGroup::new(two_block_graph());
        let m = preset_uniform(&g);
        let q = edge_parity_quotient(&g, &m).unwrap();
        let samples = first_return_walk(&g, &m, &q, 300, 100_000, 5).unwrap();
        for (pos, _) in &samples {
            assert_eq!(pos.edge_count() % 2, 0, "odd edge count in {pos}");
        }
    }

    #[test]
    fn non_homomorphic_table_rejected() {
        let g = GraphGroup::new(two_block_graph());
        let m = preset_uniform(&g);
        // norm is not additive under multiplication, so this is not a
        // homomorphism into Z/5
        let err = QuotientMap::from_fn(&g, &m, 5, |e| Perm::shift(e.word_norm() as i64, 5));
        assert!(matches!(err, Err(Error::Validation(_))));
    }
}
