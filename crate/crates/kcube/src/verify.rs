//! Machine checks for the structural facts the connectivity formulas rest
//! on: common-neighbor counts, neighborhood cuts of vertices, edges, and
//! two-paths, and conditional connectivity under fault-set restrictions.
//!
//! Each check runs either exhaustively over its full case set or over a
//! seeded sample, and reports the cases covered together with the first
//! counterexample in canonical case order when one exists. Counterexamples
//! carry the raw vertices and sets involved so they can be re-checked with
//! the `torus` and `cuts` primitives alone.

use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;

use crate::cuts::{self, PathTriple, SurvivorCondition};
use crate::dense::{self, DenseGraph, Scratch};
use crate::error::{Error, Result};
use crate::sampling;
use crate::solver::{run_in_pool, SearchConfig};
use crate::torus::{Torus, Vertex, VertexSet};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { trials: u64, seed: u64 },
}

/// The vertices and sets implicated in a failed check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Counterexample {
    pub detail: String,
    pub vertices: Vec<Vertex>,
    pub sets: Vec<VertexSet>,
}

/// Outcome of one check run.
///
/// In exhaustive mode a passing report's `cases_checked` equals the full
/// case count; a failing report counts cases up to and including the first
/// counterexample in canonical case order, independent of worker count.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub check_id: &'static str,
    pub torus: Torus,
    pub mode: VerifyMode,
    pub cases_checked: u64,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
    pub elapsed: Duration,
}

// elapsed is excluded: reports compare by observable verdict
impl PartialEq for VerificationReport {
    fn eq(&self, other: &Self) -> bool {
        self.check_id == other.check_id
            && self.torus == other.torus
            && self.mode == other.mode
            && self.cases_checked == other.cases_checked
            && self.passed == other.passed
            && self.counterexample == other.counterexample
    }
}

struct CheckOutcome {
    cases_checked: u64,
    counterexample: Option<Counterexample>,
}

fn finish(
    check_id: &'static str,
    t: &Torus,
    mode: VerifyMode,
    outcome: CheckOutcome,
    started: Instant,
) -> VerificationReport {
    VerificationReport {
        check_id,
        torus: *t,
        mode,
        cases_checked: outcome.cases_checked,
        passed: outcome.counterexample.is_none(),
        counterexample: outcome.counterexample,
        elapsed: started.elapsed(),
    }
}

/// First counterexample over a pre-collected case list, in list order.
fn scan_cases<C: Sync>(
    cases: &[C],
    test: impl Fn(&C) -> Option<Counterexample> + Sync,
) -> CheckOutcome {
    match cases
        .par_iter()
        .enumerate()
        .find_map_first(|(i, c)| test(c).map(|ce| (i, ce)))
    {
        Some((i, ce)) => CheckOutcome {
            cases_checked: i as u64 + 1,
            counterexample: Some(ce),
        },
        None => CheckOutcome {
            cases_checked: cases.len() as u64,
            counterexample: None,
        },
    }
}

/// First failing trial index; each trial draws from its own RNG stream, so
/// the case sequence depends only on the seed.
fn scan_trials(
    trials: u64,
    test: impl Fn(u64) -> Option<Counterexample> + Sync,
) -> CheckOutcome {
    match (0..trials)
        .into_par_iter()
        .find_map_first(|i| test(i).map(|ce| (i, ce)))
    {
        Some((i, ce)) => CheckOutcome {
            cases_checked: i + 1,
            counterexample: Some(ce),
        },
        None => CheckOutcome {
            cases_checked: trials,
            counterexample: None,
        },
    }
}

fn domain(n: u32, min_n: u32, op: &'static str, requires: &'static str) -> Result<Torus> {
    if n < min_n {
        return Err(Error::Unsupported { op, requires });
    }
    Torus::new(3, n)
}

/// Checks that two distinct vertices have exactly 1, 2, or 0 common
/// neighbors according to Lee distance 1, 2, or more.
pub fn verify_common_neighbors(
    n: u32,
    mode: VerifyMode,
    cfg: &SearchConfig,
) -> Result<VerificationReport> {
    let t = domain(n, 1, "verify_common_neighbors", "n >= 1")?;
    cfg.validate()?;
    let started = Instant::now();
    let nv = t.vertex_count();
    let outcome = run_in_pool(cfg.worker_count, || match mode {
        VerifyMode::Exhaustive => {
            let cases: Vec<(u64, u64)> = (0..nv)
                .flat_map(|u| ((u + 1)..nv).map(move |v| (u, v)))
                .collect();
            scan_cases(&cases, |&(u, v)| check_common_pair(&t, u, v))
        }
        VerifyMode::Sampled { trials, seed } => scan_trials(trials, |i| {
            let mut rng = sampling::trial_rng(seed, i);
            let u = rng.random_range(0..nv);
            let mut v = rng.random_range(0..nv);
            while v == u {
                v = rng.random_range(0..nv);
            }
            check_common_pair(&t, u.min(v), u.max(v))
        }),
    })?;
    Ok(finish("common-neighbors", &t, mode, outcome, started))
}

fn check_common_pair(t: &Torus, uc: u64, vc: u64) -> Option<Counterexample> {
    let u = t.vertex(uc).expect("in range");
    let v = t.vertex(vc).expect("in range");
    let distance = t.lee_distance(u, v);
    let expected: u64 = match distance {
        1 => 1,
        2 => 2,
        _ => 0,
    };
    let common = t.common_neighbors(u, v).expect("vertices distinct");
    if common.len() as u64 == expected {
        return None;
    }
    Some(Counterexample {
        detail: format!(
            "pair at distance {} has {} common neighbors, expected {}",
            distance,
            common.len(),
            expected
        ),
        vertices: vec![u, v],
        sets: vec![common],
    })
}

/// Checks that removing a closed vertex neighborhood leaves one connected
/// component of 3^n - 2n - 1 survivors.
pub fn verify_closed_neighborhood_connected(
    n: u32,
    mode: VerifyMode,
    cfg: &SearchConfig,
) -> Result<VerificationReport> {
    let t = domain(n, 2, "verify_closed_neighborhood_connected", "n >= 2")?;
    cfg.validate()?;
    let started = Instant::now();
    let nv = t.vertex_count();
    let expected = nv - 2 * u64::from(n) - 1;
    let check = |code: u64| -> Option<Counterexample> {
        let x = t.vertex(code).expect("in range");
        let single = VertexSet::from_vertices(t, [x]).expect("valid");
        let closed = cuts::closed_neighborhood(&single);
        let comps = cuts::survivor_components(&closed).expect("proper subset");
        if comps.len() == 1 && comps[0].len() as u64 == expected {
            return None;
        }
        Some(Counterexample {
            detail: format!(
                "removing the closed neighborhood leaves {} components with sizes {:?}, expected one of {}",
                comps.len(),
                comps.iter().map(VertexSet::len).collect::<Vec<_>>(),
                expected
            ),
            vertices: vec![x],
            sets: vec![closed],
        })
    };
    let outcome = run_in_pool(cfg.worker_count, || match mode {
        VerifyMode::Exhaustive => {
            let cases: Vec<u64> = (0..nv).collect();
            scan_cases(&cases, |&c| check(c))
        }
        VerifyMode::Sampled { trials, seed } => scan_trials(trials, |i| {
            let mut rng = sampling::trial_rng(seed, i);
            check(rng.random_range(0..nv))
        }),
    })?;
    Ok(finish(
        "closed-neighborhood-connected",
        &t,
        mode,
        outcome,
        started,
    ))
}

/// All edges as (smaller code, larger code), sorted.
fn sorted_edges(t: &Torus) -> Vec<(u64, u64)> {
    let mut edges: Vec<(u64, u64)> = t
        .edges()
        .map(|(u, v)| {
            let (a, b) = (u.code(), v.code());
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    edges
}

/// Checks that the open neighborhood of an edge has 4n - 3 vertices and
/// splits the torus into exactly the edge itself plus one large component.
pub fn verify_edge_cut_lemma(
    n: u32,
    mode: VerifyMode,
    cfg: &SearchConfig,
) -> Result<VerificationReport> {
    let t = domain(n, 2, "verify_edge_cut_lemma", "n >= 2")?;
    cfg.validate()?;
    let started = Instant::now();
    let outcome = run_in_pool(cfg.worker_count, || match mode {
        VerifyMode::Exhaustive => {
            let cases = sorted_edges(&t);
            scan_cases(&cases, |&(u, v)| check_edge_cut(&t, u, v))
        }
        VerifyMode::Sampled { trials, seed } => scan_trials(trials, |i| {
            let mut rng = sampling::trial_rng(seed, i);
            let (u, v) = random_edge(&t, &mut rng);
            check_edge_cut(&t, u, v)
        }),
    })?;
    Ok(finish("edge-cut", &t, mode, outcome, started))
}

fn random_edge(t: &Torus, rng: &mut rand_chacha::ChaCha8Rng) -> (u64, u64) {
    let u = t.vertex(rng.random_range(0..t.vertex_count())).expect("in range");
    let nbrs = t.neighbors(u);
    let v = nbrs.codes()[rng.random_range(0..nbrs.len() as u64) as usize];
    (u.code().min(v), u.code().max(v))
}

fn check_edge_cut(t: &Torus, uc: u64, vc: u64) -> Option<Counterexample> {
    let n = u64::from(t.n());
    let nv = t.vertex_count();
    let u = t.vertex(uc).expect("in range");
    let v = t.vertex(vc).expect("in range");
    let cut = cuts::cut_of_edge(t, u, v).expect("edge endpoints");
    let edge_set = VertexSet::from_vertices(*t, [u, v]).expect("valid");
    let fail = |detail: String, sets: Vec<VertexSet>| {
        Some(Counterexample {
            detail,
            vertices: vec![u, v],
            sets,
        })
    };
    if cut.len() as u64 != 4 * n - 3 {
        return fail(
            format!("edge neighborhood has {} vertices, expected {}", cut.len(), 4 * n - 3),
            vec![cut],
        );
    }
    let comps = cuts::survivor_components(&cut).expect("proper subset");
    let sizes: Vec<u64> = comps.iter().map(|c| c.len() as u64).collect();
    let big = nv - (4 * n - 3) - 2;
    let edge_comp = comps.iter().find(|c| c.contains(u));
    let structure_ok = comps.len() == 2
        && sizes.iter().sum::<u64>() == big + 2
        && sizes.contains(&2)
        && sizes.contains(&big)
        && edge_comp.is_some_and(|c| *c == edge_set);
    if !structure_ok {
        return fail(
            format!(
                "edge neighborhood leaves components of sizes {:?}, expected {{2, {}}} with the edge isolated",
                sizes, big
            ),
            vec![cut],
        );
    }
    let classification = cuts::classify_cut(&cut).expect("proper subset");
    if !classification.is_h_extra_cut(1) {
        return fail(
            format!("edge neighborhood classifies with max_h {}", classification.max_h),
            vec![cut],
        );
    }
    None
}

/// Two-paths whose ends are nonadjacent, as (middle, end, end) code triples
/// with the ends ascending, sorted by middle then ends.
fn sorted_path_cases(t: &Torus) -> Vec<(u64, u64, u64)> {
    let mut cases = Vec::new();
    for mid in 0..t.vertex_count() {
        let m = t.vertex(mid).expect("in range");
        let nbrs = t.neighbors(m);
        let codes = nbrs.codes();
        for i in 0..codes.len() {
            for j in (i + 1)..codes.len() {
                let a = t.vertex(codes[i]).expect("in range");
                let b = t.vertex(codes[j]).expect("in range");
                if !t.is_adjacent(a, b) {
                    cases.push((mid, codes[i], codes[j]));
                }
            }
        }
    }
    cases
}

/// Checks that the open neighborhood of a two-path with nonadjacent ends has
/// 6n - 7 vertices, splits the torus into the path plus one large component,
/// and that the path's flanking common neighbors are pairwise distinct.
pub fn verify_path_cut_lemma(
    n: u32,
    mode: VerifyMode,
    cfg: &SearchConfig,
) -> Result<VerificationReport> {
    let t = domain(n, 3, "verify_path_cut_lemma", "n >= 3")?;
    cfg.validate()?;
    let started = Instant::now();
    let outcome = run_in_pool(cfg.worker_count, || match mode {
        VerifyMode::Exhaustive => {
            let cases = sorted_path_cases(&t);
            scan_cases(&cases, |&(mid, a, b)| check_path_cut(&t, mid, a, b))
        }
        VerifyMode::Sampled { trials, seed } => scan_trials(trials, |i| {
            let mut rng = sampling::trial_rng(seed, i);
            let nv = t.vertex_count();
            loop {
                let m = t.vertex(rng.random_range(0..nv)).expect("in range");
                let codes = t.neighbors(m).codes().to_vec();
                let i1 = rng.random_range(0..codes.len() as u64) as usize;
                let i2 = rng.random_range(0..codes.len() as u64) as usize;
                if i1 == i2 {
                    continue;
                }
                let a = t.vertex(codes[i1]).expect("in range");
                let b = t.vertex(codes[i2]).expect("in range");
                if t.is_adjacent(a, b) {
                    continue;
                }
                return check_path_cut(&t, m.code(), codes[i1].min(codes[i2]), codes[i1].max(codes[i2]));
            }
        }),
    })?;
    Ok(finish("path-cut", &t, mode, outcome, started))
}

fn check_path_cut(t: &Torus, mid: u64, a: u64, b: u64) -> Option<Counterexample> {
    let n = u64::from(t.n());
    let nv = t.vertex_count();
    let m = t.vertex(mid).expect("in range");
    let u = t.vertex(a).expect("in range");
    let w = t.vertex(b).expect("in range");
    let triple = PathTriple::new(*t, u, m, w).expect("valid two-path");
    let cut = cuts::cut_of_path(&triple);
    let fail = |detail: String, sets: Vec<VertexSet>| {
        Some(Counterexample {
            detail,
            vertices: vec![u, m, w],
            sets,
        })
    };
    if cut.len() as u64 != 6 * n - 7 {
        return fail(
            format!("path neighborhood has {} vertices, expected {}", cut.len(), 6 * n - 7),
            vec![cut],
        );
    }
    let comps = cuts::survivor_components(&cut).expect("proper subset");
    let sizes: Vec<u64> = comps.iter().map(|c| c.len() as u64).collect();
    let big = nv - (6 * n - 7) - 3;
    let path_comp = comps.iter().find(|c| c.contains(m));
    let structure_ok = comps.len() == 2
        && sizes.contains(&3)
        && sizes.contains(&big)
        && path_comp.is_some_and(|c| *c == triple.as_set());
    if !structure_ok {
        return fail(
            format!(
                "path neighborhood leaves components of sizes {:?}, expected {{3, {}}} with the path isolated",
                sizes, big
            ),
            vec![cut],
        );
    }
    let classification = cuts::classify_cut(&cut).expect("proper subset");
    if !classification.is_h_extra_cut(2) {
        return fail(
            format!("path neighborhood classifies with max_h {}", classification.max_h),
            vec![cut],
        );
    }
    // flanking structure: each edge of the path has one common neighbor,
    // the ends have exactly the middle plus one more, all distinct
    let cn_um = t.common_neighbors(u, m).expect("distinct");
    let cn_mw = t.common_neighbors(m, w).expect("distinct");
    let cn_uw = t.common_neighbors(u, w).expect("distinct");
    if cn_um.len() != 1 || cn_mw.len() != 1 || cn_uw.len() != 2 || !cn_uw.contains(m) {
        return fail(
            format!(
                "flanking counts ({}, {}, {}) or middle membership off",
                cn_um.len(),
                cn_mw.len(),
                cn_uw.len()
            ),
            vec![cn_um, cn_mw, cn_uw],
        );
    }
    let x = cn_um.codes()[0];
    let y = cn_mw.codes()[0];
    let z = cn_uw
        .iter()
        .map(Vertex::code)
        .find(|&c| c != mid)
        .expect("two common neighbors");
    let mut special = vec![x, y, z, mid];
    special.sort_unstable();
    special.dedup();
    if special.len() != 4 {
        return fail(
            format!("flanking vertices {x}, {y}, {z} and middle {mid} are not distinct"),
            vec![cn_um, cn_mw, cn_uw],
        );
    }
    None
}

/// Checks that every fault set within the size bound whose survivors satisfy
/// the condition leaves the torus connected. Exhaustive mode covers all sets
/// of size 0..=bound; sampled mode draws sets of exactly `bound` faults.
pub fn verify_conditional_connectivity(
    t: &Torus,
    bound: u64,
    condition: SurvivorCondition,
    mode: VerifyMode,
    cfg: &SearchConfig,
) -> Result<VerificationReport> {
    conditional_engine("conditional-connectivity", t, bound, condition, mode, cfg)
}

/// Fault sets of up to 4n - 4 vertices that isolate no survivor vertex never
/// disconnect the torus.
pub fn verify_theorem1_conditional(
    n: u32,
    mode: VerifyMode,
    cfg: &SearchConfig,
) -> Result<VerificationReport> {
    let t = domain(n, 2, "verify_theorem1_conditional", "n >= 2")?;
    conditional_engine(
        "thm1",
        &t,
        4 * u64::from(n) - 4,
        SurvivorCondition::NoIsolatedVertex,
        mode,
        cfg,
    )
}

/// Fault sets of up to 6n - 8 vertices that isolate no survivor vertex or
/// edge never disconnect the torus.
pub fn verify_theorem2_conditional(
    n: u32,
    mode: VerifyMode,
    cfg: &SearchConfig,
) -> Result<VerificationReport> {
    let t = domain(n, 3, "verify_theorem2_conditional", "n >= 3")?;
    conditional_engine(
        "thm2",
        &t,
        6 * u64::from(n) - 8,
        SurvivorCondition::NoIsolatedVertexOrEdge,
        mode,
        cfg,
    )
}

fn conditional_engine(
    check_id: &'static str,
    t: &Torus,
    bound: u64,
    condition: SurvivorCondition,
    mode: VerifyMode,
    cfg: &SearchConfig,
) -> Result<VerificationReport> {
    cfg.validate()?;
    let g = DenseGraph::build(t, cfg.vertex_ceiling)?;
    let nv = g.nv() as u64;
    let started = Instant::now();
    let outcome = match mode {
        VerifyMode::Exhaustive => {
            let feasible = bound.min(nv);
            let estimate: u128 = (0..=feasible).map(|s| dense::binomial(nv, s)).sum();
            if estimate > cfg.subset_ceiling {
                return Err(Error::CeilingExceeded {
                    what: "subset enumeration count",
                    amount: estimate,
                    ceiling: cfg.subset_ceiling,
                });
            }
            run_in_pool(cfg.worker_count, || {
                exhaustive_conditional(t, &g, feasible, condition)
            })?
        }
        VerifyMode::Sampled { trials, seed } => {
            if bound > nv {
                return Err(Error::TooManyFaults {
                    faults: bound,
                    count: nv,
                });
            }
            run_in_pool(cfg.worker_count, || {
                sampled_conditional(t, &g, bound, condition, trials, seed)
            })?
        }
    };
    Ok(finish(check_id, t, mode, outcome, started))
}

fn conditional_counterexample(
    t: &Torus,
    condition: SurvivorCondition,
    codes: Vec<u64>,
    component_count: usize,
    origin: String,
) -> Counterexample {
    let faults = VertexSet::from_codes(*t, codes).expect("codes in range");
    Counterexample {
        detail: format!(
            "{} faults satisfying {} leave {} components ({})",
            faults.len(),
            condition.label(),
            component_count,
            origin
        ),
        vertices: Vec::new(),
        sets: vec![faults],
    }
}

fn exhaustive_conditional(
    t: &Torus,
    g: &DenseGraph,
    max_size: u64,
    condition: SurvivorCondition,
) -> CheckOutcome {
    let nv = g.nv() as u64;
    let mut checked: u64 = 0;
    for s in 0..=max_size {
        if s == 0 {
            // the empty fault set: the torus itself is connected
            let removed = vec![0u64; g.words()];
            let mut scratch = Scratch::new(g.words());
            let mut sizes = Vec::new();
            g.component_sizes_into(&removed, &mut scratch, &mut sizes);
            if condition.admits(&sizes) && sizes.len() > 1 {
                return CheckOutcome {
                    cases_checked: 1,
                    counterexample: Some(conditional_counterexample(
                        t,
                        condition,
                        Vec::new(),
                        sizes.len(),
                        "case 0".to_string(),
                    )),
                };
            }
            checked += 1;
            continue;
        }
        let found = (0..=(nv - s))
            .into_par_iter()
            .find_map_first(|anchor| {
                scan_anchor_conditional(g, s as usize, anchor as usize, condition)
                    .map(|(local, codes, ncomp)| (anchor, local, codes, ncomp))
            });
        if let Some((anchor, local, codes, ncomp)) = found {
            let prefix: u128 = (0..anchor)
                .map(|a| dense::binomial(nv - 1 - a, s - 1))
                .sum();
            let case_index = checked as u128 + prefix + local as u128;
            return CheckOutcome {
                cases_checked: (case_index + 1) as u64,
                counterexample: Some(conditional_counterexample(
                    t,
                    condition,
                    codes,
                    ncomp,
                    format!("case {case_index} in canonical order"),
                )),
            };
        }
        checked += dense::binomial(nv, s) as u64;
    }
    CheckOutcome {
        cases_checked: checked,
        counterexample: None,
    }
}

/// First violating fault set of size `s` with minimum vertex `anchor`, in
/// lexicographic order, as (index within the anchor, codes, components).
fn scan_anchor_conditional(
    g: &DenseGraph,
    s: usize,
    anchor: usize,
    condition: SurvivorCondition,
) -> Option<(u64, Vec<u64>, usize)> {
    let nv = g.nv();
    let mut scratch = Scratch::new(g.words());
    let mut removed = vec![0u64; g.words()];
    let mut sizes: Vec<u64> = Vec::new();
    let mut idx: Vec<usize> = (anchor..anchor + s).collect();
    for &i in &idx {
        dense::set_bit(&mut removed, i);
    }
    let mut local: u64 = 0;
    loop {
        g.component_sizes_into(&removed, &mut scratch, &mut sizes);
        if condition.admits(&sizes) && sizes.len() > 1 {
            return Some((local, idx.iter().map(|&i| i as u64).collect(), sizes.len()));
        }
        local += 1;
        let mut at = usize::MAX;
        for j in (1..s).rev() {
            if idx[j] < nv - s + j {
                at = j;
                break;
            }
        }
        if at == usize::MAX {
            return None;
        }
        for j in at..s {
            dense::clear_bit(&mut removed, idx[j]);
        }
        idx[at] += 1;
        for j in at + 1..s {
            idx[j] = idx[j - 1] + 1;
        }
        for j in at..s {
            dense::set_bit(&mut removed, idx[j]);
        }
    }
}

fn sampled_conditional(
    t: &Torus,
    g: &DenseGraph,
    bound: u64,
    condition: SurvivorCondition,
    trials: u64,
    seed: u64,
) -> CheckOutcome {
    let nv = g.nv() as u64;
    let words = g.words();
    let found = (0..trials)
        .into_par_iter()
        .map_init(
            || (Scratch::new(words), vec![0u64; words], Vec::new(), Vec::new()),
            |(scratch, removed, codes, sizes), i| {
                let mut rng = sampling::trial_rng(seed, i);
                sampling::sample_codes(&mut rng, nv, bound, codes);
                dense::zero(removed);
                for &c in codes.iter() {
                    dense::set_bit(removed, c as usize);
                }
                g.component_sizes_into(removed, scratch, sizes);
                if condition.admits(sizes) && sizes.len() > 1 {
                    Some((i, codes.clone(), sizes.len()))
                } else {
                    None
                }
            },
        )
        .find_first(Option::is_some)
        .flatten();
    match found {
        Some((i, codes, ncomp)) => CheckOutcome {
            cases_checked: i + 1,
            counterexample: Some(conditional_counterexample(
                t,
                condition,
                codes,
                ncomp,
                format!("trial {i}"),
            )),
        },
        None => CheckOutcome {
            cases_checked: trials,
            counterexample: None,
        },
    }
}
