//! Drift and entropy-rate diagnostics.
//!
//! Boundary triviality shows up here as vanishing drift: diffusive walks
//! (abelian, nilpotent reference groups) have displacement of order sqrt(n),
//! so the normalized drift decays like n^(-1/2), while walks converging to a
//! nontrivial boundary escape linearly. The entropy rate is a plug-in
//! estimate, biased low, reported only as a decay diagnostic.

use crate::measure::{StepMeasure, WalkGroup};
use crate::walk::stream_rng;
use serde::Serialize;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DriftReport {
    pub steps: u32,
    pub samples: u64,
    /// Mean of distance(origin, z_n . origin) / n.
    pub drift: f64,
    /// Standard error of the drift estimate.
    pub std_err: f64,
    /// Plug-in entropy of the empirical law of z_n, divided by n.
    pub entropy_rate_bound: f64,
}

pub fn entropy_drift_estimate<G: WalkGroup>(
    group: &G,
    m: &StepMeasure<G>,
    steps: u32,
    samples: u64,
    seed: u64,
    jobs: usize,
) -> DriftReport {
    let run = |j: u64| -> (u64, String) {
        let mut rng = stream_rng(seed, 0, j);
        let mut pos = group.identity();
        for _ in 0..steps {
            let (g, _) = m.sample_step(group, &mut rng);
            pos = group.mul(&pos, &g);
        }
        (group.origin_distance(&pos), group.key(&pos))
    };

    let finals: Vec<(u64, String)> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            use rayon::prelude::*;
            (0..samples).into_par_iter().map(run).collect()
        })
    } else {
        (0..samples).map(run).collect()
    };

    let n = steps.max(1) as f64;
    let count = samples.max(1) as f64;
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    let mut freq: HashMap<String, u64> = HashMap::new();
    for (d, key) in finals {
        let v = d as f64 / n;
        sum += v;
        sumsq += v * v;
        *freq.entry(key).or_insert(0) += 1;
    }
    let drift = sum / count;
    let var = (sumsq / count - drift * drift).max(0.0);
    let std_err = (var / count).sqrt();
    let mut entropy = 0.0;
    for c in freq.values() {
        let p = *c as f64 / count;
        entropy -= p * p.ln();
    }
    DriftReport {
        steps,
        samples,
        drift,
        std_err,
        entropy_rate_bound: entropy / n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fund::GroupElement;
    use crate::graph::two_block_graph;
    use crate::measure::{GraphGroup, StepMeasure};
    use num_rational::Rational64;
    use num_traits::One;

    #[test]
    fn point_mass_at_fiber_has_zero_drift() {
        let g = GraphGroup::new(two_block_graph());
        let z = GroupElement::fiber(g.graph(), 1);
        let m = StepMeasure::new_unchecked(&g, vec![(z, Rational64::one())], None);
        let r = entropy_drift_estimate(&g, &m, 50, 20, 1, 1);
        assert_eq!(r.drift, 0.0);
        assert_eq!(r.std_err, 0.0);
        // deterministic walk: a single final value, zero plug-in entropy
        assert_eq!(r.entropy_rate_bound, 0.0);
    }

    #[test]
    fn uniform_measure_escapes_on_stock_graph() {
        let g = GraphGroup::new(two_block_graph());
        let m = crate::measure::preset_uniform(&g);
        let r = entropy_drift_estimate(&g, &m, 120, 160, 2, 2);
        assert!(r.drift > 0.05, "drift {}", r.drift);
    }

    #[test]
    fn jobs_do_not_change_results() {
        let g = GraphGroup::new(two_block_graph());
        let m = crate::measure::preset_uniform(&g);
        let a = entropy_drift_estimate(&g, &m, 60, 40, 5, 1);
        let b = entropy_drift_estimate(&g, &m, 60, 40, 5, 3);
        assert_eq!(a.drift, b.drift);
        assert_eq!(a.entropy_rate_bound, b.entropy_rate_bound);
    }
}
