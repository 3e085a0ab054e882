//! Stationarity test for the estimated harmonic measure.
//!
//! A stationary measure satisfies nu = sum_g mu(g) (g . nu). Both sides are
//! estimable: the left by walks from the identity, the right by mixing walk
//! estimates started at each core element g. Per-cylinder z-scores with a
//! Bonferroni-corrected normal threshold give the global verdict; truncating
//! an infinite-support measure to a finite sub-support of mass >= 1 - epsilon
//! adds epsilon of slack to every comparison rather than silently biasing it.

use crate::error::{Error, Result};
use crate::measure::{GraphGroup, StepMeasure};
use crate::walk::{harmonic_estimate, harmonic_estimate_from, ConvergenceParams, CylinderHistogram};
use num_rational::Rational64;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct StationarityParams {
    pub depth: usize,
    pub walks: u64,
    pub steps: u32,
    pub patience: u32,
    /// Truncation budget for infinite-support measures.
    pub epsilon: f64,
    /// Global confidence level, e.g. 0.99.
    pub confidence: f64,
    /// Minimum expected count for a cylinder to be tested on its own;
    /// smaller ones pool into a rare bucket.
    pub min_expected: f64,
    pub seed: u64,
    pub jobs: usize,
}

impl Default for StationarityParams {
    fn default() -> Self {
        StationarityParams {
            depth: 2,
            walks: 2000,
            steps: 1200,
            patience: 150,
            epsilon: 0.0,
            confidence: 0.99,
            min_expected: 8.0,
            seed: 1,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    /// Not enough samples (or support) for calibrated z-scores.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct CylinderStat {
    pub cylinder: String,
    pub direct: f64,
    pub mixture: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StationarityReport {
    pub verdict: Verdict,
    pub z_threshold: f64,
    pub tested: Vec<CylinderStat>,
    /// Mass excluded by support truncation (tail mass plus skipped core).
    pub epsilon_effective: f64,
    pub support_size: usize,
    pub params: StationarityParams,
}

/// Inverse standard-normal CDF (Acklam's rational approximation, relative
/// error below 1.2e-9 — far tighter than the Monte Carlo noise it gates).
pub fn inverse_normal_cdf(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0);
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    let p_low = 0.02425;
    if p < p_low {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - p_low {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -inverse_normal_cdf(1.0 - p)
    }
}

const UNDECIDED_KEY: &str = "(undecided)";
const RARE_KEY: &str = "(rare)";

fn to_f(r: &Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn proportions(h: &CylinderHistogram) -> BTreeMap<String, f64> {
    let n = h.walks.max(1) as f64;
    let mut out: BTreeMap<String, f64> = h
        .counts
        .iter()
        .map(|(k, c)| (k.clone(), *c as f64 / n))
        .collect();
    out.insert(UNDECIDED_KEY.into(), h.undecided as f64 / n);
    out
}

struct Comparison {
    stats: Vec<CylinderStat>,
    worst_z: f64,
    testable: usize,
}

/// Shared z-score machinery between the live check and the corruption
/// self-test.
fn compare(
    direct: &BTreeMap<String, f64>,
    n_direct: f64,
    mixture_parts: &[(f64, BTreeMap<String, f64>, f64)], // (weight, proportions, n)
    slack: f64,
    min_expected: f64,
) -> Comparison {
    let mut keys: BTreeSet<String> = direct.keys().cloned().collect();
    for (_, p, _) in mixture_parts {
        keys.extend(p.keys().cloned());
    }

    // pool low-count cylinders into a rare bucket
    let mixture_of = |key: &str| -> f64 {
        mixture_parts
            .iter()
            .map(|(w, p, _)| w * p.get(key).copied().unwrap_or(0.0))
            .sum()
    };
    let mut tested_keys = Vec::new();
    let mut rare_direct = 0.0;
    let mut rare_mixture = 0.0;
    for key in &keys {
        let d = direct.get(key.as_str()).copied().unwrap_or(0.0);
        let mx = mixture_of(key);
        if d.max(mx) * n_direct >= min_expected || key == UNDECIDED_KEY {
            tested_keys.push(key.clone());
        } else {
            rare_direct += d;
            rare_mixture += mx;
        }
    }

    let mut stats = Vec::new();
    let mut worst_z: f64 = 0.0;
    let mut eval = |key: String, d: f64, mx: f64| {
        let var_direct = d * (1.0 - d) / n_direct;
        let var_mix: f64 = mixture_parts
            .iter()
            .map(|(w, p, n)| {
                let pi = p.get(&key as &str).copied().unwrap_or(0.0);
                w * w * pi * (1.0 - pi) / n
            })
            .sum();
        let sigma = (var_direct + var_mix).sqrt();
        let gap = (d - mx).abs() - slack;
        let z = if gap <= 0.0 {
            0.0
        } else if sigma > 0.0 {
            gap / sigma
        } else {
            f64::INFINITY
        };
        worst_z = worst_z.max(z);
        stats.push(CylinderStat {
            cylinder: key,
            direct: d,
            mixture: mx,
            z,
        });
    };
    for key in tested_keys {
        let d = direct.get(key.as_str()).copied().unwrap_or(0.0);
        let mx = mixture_of(&key);
        eval(key, d, mx);
    }
    eval(RARE_KEY.into(), rare_direct, rare_mixture);

    let testable = stats.len();
    Comparison {
        stats,
        worst_z,
        testable,
    }
}

struct Estimates {
    direct: CylinderHistogram,
    parts: Vec<(f64, BTreeMap<String, f64>, f64)>,
    epsilon_effective: f64,
    support_size: usize,
}

fn estimate_both_sides(
    group: &GraphGroup,
    m: &StepMeasure<GraphGroup>,
    p: &StationarityParams,
) -> Result<Estimates> {
    let params = ConvergenceParams {
        steps: p.steps,
        depth: p.depth,
        patience: p.patience,
    };
    let direct = harmonic_estimate(group, m, p.walks, params, p.seed, 0, p.jobs);

    // truncated support: heaviest core entries until mass >= 1 - epsilon
    let mut entries: Vec<(usize, Rational64)> = m
        .core()
        .iter()
        .enumerate()
        .map(|(i, (_, w))| (i, *w))
        .collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut included = Vec::new();
    let mut mass = 0.0;
    for (i, w) in entries {
        if 1.0 - mass <= p.epsilon + 1e-15 {
            break;
        }
        included.push((i, w));
        mass += to_f(&w);
    }
    let epsilon_effective = 1.0 - mass;
    if epsilon_effective > p.epsilon + 1e-12 {
        return Err(Error::Validation(format!(
            "support truncation cannot reach mass {} (epsilon {}); tail mass too large",
            1.0 - p.epsilon,
            p.epsilon
        )));
    }

    let mut parts = Vec::new();
    for (j, (idx, w)) in included.iter().enumerate() {
        let start = m.core()[*idx].0.clone();
        let h = harmonic_estimate_from(
            group,
            m,
            Some(&start),
            p.walks,
            params,
            p.seed,
            j as u64 + 1,
            p.jobs,
        );
        parts.push((to_f(w), proportions(&h), p.walks.max(1) as f64));
    }
    Ok(Estimates {
        direct,
        parts,
        epsilon_effective,
        support_size: included.len(),
    })
}

/// Tests nu-hat against sum_g mu(g) nu-hat_g on depth-d cylinders.
pub fn stationarity_check(
    group: &GraphGroup,
    m: &StepMeasure<GraphGroup>,
    p: &StationarityParams,
) -> Result<StationarityReport> {
    let est = estimate_both_sides(group, m, p)?;
    finish_report(est, p, None)
}

/// Self-test of the detector: the direct histogram is corrupted by moving
/// mass (ten sigma of the largest cylinder) between two cylinders before the
/// comparison. A calibrated detector must fail it.
pub fn stationarity_self_test(
    group: &GraphGroup,
    m: &StepMeasure<GraphGroup>,
    p: &StationarityParams,
) -> Result<StationarityReport> {
    let est = estimate_both_sides(group, m, p)?;
    finish_report(est, p, Some(10.0))
}

fn finish_report(
    mut est: Estimates,
    p: &StationarityParams,
    corrupt_sigmas: Option<f64>,
) -> Result<StationarityReport> {
    if let Some(k_sigma) = corrupt_sigmas {
        // move k sigma-hat worth of counts between the two largest cylinders
        let mut by_count: Vec<(String, u64)> = est
            .direct
            .counts
            .iter()
            .map(|(k, c)| (k.clone(), *c))
            .collect();
        by_count.sort_by(|a, b| b.1.cmp(&a.1));
        if by_count.len() < 2 {
            return Err(Error::Validation(
                "not enough cylinders to corrupt".into(),
            ));
        }
        let n = est.direct.walks as f64;
        let p1 = by_count[0].1 as f64 / n;
        let sigma = (p1 * (1.0 - p1) / n).sqrt();
        let delta = ((k_sigma * sigma * n).ceil() as u64).max(1).min(by_count[0].1);
        *est.direct.counts.get_mut(&by_count[0].0).unwrap() -= delta;
        *est.direct.counts.get_mut(&by_count[1].0).unwrap() += delta;
    }

    let direct_props = proportions(&est.direct);
    let cmp = compare(
        &direct_props,
        est.direct.walks.max(1) as f64,
        &est.parts,
        est.epsilon_effective,
        p.min_expected,
    );

    let alpha = 1.0 - p.confidence;
    let k = cmp.testable.max(1) as f64;
    let z_threshold = inverse_normal_cdf(1.0 - alpha / (2.0 * k));

    let verdict = if cmp.testable == 0 || est.direct.walks == 0 {
        Verdict::Inconclusive
    } else if cmp.worst_z > z_threshold {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    Ok(StationarityReport {
        verdict,
        z_threshold,
        tested: cmp.stats,
        epsilon_effective: est.epsilon_effective,
        support_size: est.support_size,
        params: *p,
    })
}
