//! Seeded Monte Carlo fault injection: draws uniform vertex fault sets,
//! optionally conditions on the survivor graph having no isolated vertex or
//! edge, and estimates disconnection probabilities with Wilson intervals.
//!
//! Each trial's randomness comes from a counter-based stream keyed by
//! (seed, trial index), so estimates are bit-identical for any worker
//! layout. Conditioning is by rejection: every trial is counted, and trials
//! whose survivors violate the condition are excluded from the estimate.

use rayon::prelude::*;

use crate::cuts::SurvivorCondition;
use crate::dense::{self, DenseGraph, Scratch};
use crate::error::{Error, Result};
use crate::sampling;
use crate::solver::{run_in_pool, SearchConfig};
use crate::torus::{Torus, VertexSet};

/// Two-sided 95% normal quantile.
const WILSON_Z: f64 = 1.959963984540054;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FaultModel {
    pub fault_count: u64,
    pub condition: SurvivorCondition,
    pub seed: u64,
}

/// Disconnection probability estimate over the accepted trials.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ReliabilityEstimate {
    pub fault_count: u64,
    pub trials: u64,
    /// Trials whose survivor graph satisfied the condition.
    pub accepted: u64,
    /// Accepted trials whose survivor graph was disconnected.
    pub disconnected: u64,
    pub point_estimate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

/// The fault set for one trial: `fault_count` distinct vertices, uniform,
/// a deterministic function of (seed, trial_index).
pub fn sample_fault_set(t: &Torus, model: &FaultModel, trial_index: u64) -> Result<VertexSet> {
    let nv = t.vertex_count();
    if model.fault_count >= nv {
        return Err(Error::TooManyFaults {
            faults: model.fault_count,
            count: nv,
        });
    }
    let mut rng = sampling::trial_rng(model.seed, trial_index);
    let mut codes = Vec::with_capacity(model.fault_count as usize);
    sampling::sample_codes(&mut rng, nv, model.fault_count, &mut codes);
    VertexSet::from_codes(*t, codes)
}

/// Wilson 95% score interval for `hits` successes in `n` trials.
fn wilson_interval(hits: u64, n: u64) -> (f64, f64) {
    let nf = n as f64;
    let p = hits as f64 / nf;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = (WILSON_Z / denom) * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    // clamping keeps the interval inside [0, 1] and around p even when
    // rounding makes center - half drift off zero
    ((center - half).clamp(0.0, p), (center + half).clamp(p, 1.0))
}

/// Runs `trials` independent fault draws and estimates the probability that
/// a fault set of the model's size disconnects the torus, conditioned on the
/// survivors satisfying the model's condition.
///
/// Errors with `ConditionStarved` when no trial satisfies the condition.
pub fn estimate_disconnection(
    t: &Torus,
    model: &FaultModel,
    trials: u64,
    cfg: &SearchConfig,
) -> Result<ReliabilityEstimate> {
    cfg.validate()?;
    if trials == 0 {
        return Err(Error::InvalidConfig {
            reason: "trials must be positive",
        });
    }
    let nv = t.vertex_count();
    if model.fault_count >= nv {
        return Err(Error::TooManyFaults {
            faults: model.fault_count,
            count: nv,
        });
    }
    let g = DenseGraph::build(t, cfg.vertex_ceiling)?;
    let words = g.words();
    let condition = model.condition;
    let (fault_count, seed) = (model.fault_count, model.seed);
    let (accepted, disconnected) = run_in_pool(cfg.worker_count, || {
        (0..trials)
            .into_par_iter()
            .map_init(
                || (Scratch::new(words), vec![0u64; words], Vec::new(), Vec::new()),
                |(scratch, removed, codes, sizes), i| {
                    let mut rng = sampling::trial_rng(seed, i);
                    sampling::sample_codes(&mut rng, nv, fault_count, codes);
                    dense::zero(removed);
                    for &c in codes.iter() {
                        dense::set_bit(removed, c as usize);
                    }
                    g.component_sizes_into(removed, scratch, sizes);
                    if !condition.admits(sizes) {
                        return (0u64, 0u64);
                    }
                    (1, u64::from(sizes.len() > 1))
                },
            )
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    })?;
    if accepted == 0 {
        return Err(Error::ConditionStarved);
    }
    let point_estimate = disconnected as f64 / accepted as f64;
    let (wilson_low, wilson_high) = wilson_interval(disconnected, accepted);
    Ok(ReliabilityEstimate {
        fault_count: model.fault_count,
        trials,
        accepted,
        disconnected,
        point_estimate,
        wilson_low,
        wilson_high,
    })
}

/// One estimate per fault count, each with its own stream derived from the
/// master seed, so the table does not depend on which sizes run together.
pub fn sweep_fault_sizes(
    t: &Torus,
    fault_counts: &[u64],
    condition: SurvivorCondition,
    trials: u64,
    base_seed: u64,
    cfg: &SearchConfig,
) -> Result<Vec<ReliabilityEstimate>> {
    fault_counts
        .iter()
        .map(|&f| {
            let model = FaultModel {
                fault_count: f,
                condition,
                seed: sampling::derive_seed(base_seed, f),
            };
            estimate_disconnection(t, &model, trials, cfg)
        })
        .collect()
}
