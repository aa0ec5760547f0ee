//! Acceptance gate. One test per numbered criterion; each asserts the
//! required values and time budget, then prints a PASS line with the
//! measured data (visible with `--nocapture`).
//!
//! The harness line per test doubles as the pass/fail line per criterion.
//! Tests serialize on a global lock so each gets the stated time budget
//! without contention from its neighbors.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use kcube::cuts::{self, PathTriple, SurvivorCondition};
use kcube::reliability::{self, FaultModel};
use kcube::solver::{kappa_boundary_enum, kappa_subset_oracle, KappaCertificate, SearchConfig};
use kcube::verify::{
    verify_closed_neighborhood_connected, verify_common_neighbors, verify_edge_cut_lemma,
    verify_path_cut_lemma, verify_theorem1_conditional, verify_theorem2_conditional, VerifyMode,
};
use kcube::{Torus, VertexSet};

static GATE: Mutex<()> = Mutex::new(());

fn serialized() -> std::sync::MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn cfg(workers: usize) -> SearchConfig {
    SearchConfig {
        worker_count: workers,
        ..SearchConfig::default()
    }
}

fn within(budget: Duration, elapsed: Duration, what: &str) {
    assert!(
        elapsed <= budget,
        "{what} took {elapsed:?}, over the {budget:?} budget"
    );
}

/// Re-derives the cut grade of a certificate witness through the
/// classifier, which shares no code with the search that produced it.
fn classify_witness(t: &Torus, cert: &KappaCertificate, h: u64) {
    let witness = cert.witness.as_ref().expect("witness present");
    let set = VertexSet::from_codes(*t, witness.iter().map(|v| v.code())).unwrap();
    assert_eq!(set.len() as u64, cert.value);
    let class = cuts::classify_cut(&set).unwrap();
    assert!(class.is_cut);
    assert!(
        class.is_h_extra_cut(h),
        "witness is not an {h}-extra cut: components {:?}",
        class.component_sizes
    );
}

#[test]
fn criterion_1_kappa0_subsets_flow_boundary() {
    let _g = serialized();
    let mut timings = Vec::new();
    for (n, expected) in [("2", "4"), ("3", "6")] {
        for method in ["subsets", "flow", "boundary"] {
            let started = Instant::now();
            let out = std::process::Command::new(env!("CARGO_BIN_EXE_kcube"))
                .args(["kappa", "--k", "3", "--n", n, "--h", "0", "--method", method])
                .output()
                .unwrap();
            let elapsed = started.elapsed();
            assert!(out.status.success(), "method {method} n {n} failed");
            let text = String::from_utf8(out.stdout).unwrap();
            let want = format!("kappa_0(Q_{n}^3) = {expected}");
            assert!(text.contains(&want), "missing `{want}` in:\n{text}");
            within(Duration::from_secs(10), elapsed, method);
            timings.push(format!("{method}/n={n} {:.2}s", elapsed.as_secs_f64()));
        }
    }
    println!("PASS criterion 1: kappa_0 = 4 on Q_2^3 and 6 on Q_3^3 by subsets, flow, and boundary ({})", timings.join(", "));
}

#[test]
fn criterion_2_kappa1_oracle_and_boundary() {
    let _g = serialized();
    let c = cfg(8);

    let t2 = Torus::new(3, 2).unwrap();
    let started = Instant::now();
    let oracle = kappa_subset_oracle(&t2, 1, &c).unwrap();
    let oracle_time = started.elapsed();
    assert_eq!(oracle.value, 5);
    assert!(oracle.exhaustive);
    within(Duration::from_secs(1), oracle_time, "subset oracle on Q_2^3");
    classify_witness(&t2, &oracle, 1);

    let t3 = Torus::new(3, 3).unwrap();
    let started = Instant::now();
    let boundary = kappa_boundary_enum(&t3, 1, &c).unwrap();
    let boundary_time = started.elapsed();
    assert_eq!(boundary.value, 9);
    assert!(boundary.exhaustive);
    within(Duration::from_secs(60), boundary_time, "boundary solver on Q_3^3");
    classify_witness(&t3, &boundary, 1);

    println!(
        "PASS criterion 2: kappa_1 = 5 on Q_2^3 ({:.3}s) and 9 on Q_3^3 ({:.3}s), witnesses classified as 1-extra cuts",
        oracle_time.as_secs_f64(),
        boundary_time.as_secs_f64()
    );
}

#[test]
fn criterion_3_kappa2_boundary() {
    let _g = serialized();
    let t = Torus::new(3, 3).unwrap();
    let started = Instant::now();
    let cert = kappa_boundary_enum(&t, 2, &cfg(8)).unwrap();
    let elapsed = started.elapsed();
    assert_eq!(cert.value, 11);
    assert!(cert.exhaustive);
    within(Duration::from_secs(300), elapsed, "boundary solver for kappa_2");
    classify_witness(&t, &cert, 2);
    println!(
        "PASS criterion 3: kappa_2 = 11 on Q_3^3 by boundary search ({:.3}s)",
        elapsed.as_secs_f64()
    );
}

/// Opt-in slow confirmation: scanning every fault set of at most 10
/// vertices (16,628,809 subsets) finds no 2-extra cut, so kappa_2 > 10.
#[test]
#[ignore = "slow: exhausts all C(27, <=10) fault sets"]
fn criterion_3_slow_subset_oracle_confirms_kappa2() {
    let _g = serialized();
    let t = Torus::new(3, 3).unwrap();
    let c = SearchConfig {
        worker_count: 8,
        max_cut_size: Some(10),
        ..SearchConfig::default()
    };
    let started = Instant::now();
    let cert = kappa_subset_oracle(&t, 2, &c).unwrap();
    let elapsed = started.elapsed();
    assert_eq!(cert.value, 11, "no 2-extra cut of size <= 10 may exist");
    assert!(cert.witness.is_none());
    assert!(!cert.exhaustive);
    within(Duration::from_secs(3600), elapsed, "full subset scan");
    println!(
        "PASS criterion 3 (slow): subset oracle rules out every 2-extra cut of size <= 10 ({:.1}s)",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_4_cut_size_formulas_all_edges_and_paths() {
    let _g = serialized();
    let started = Instant::now();

    let mut edges_checked = 0u64;
    for n in 2..=7u32 {
        let t = Torus::new(3, n).unwrap();
        let expected = 4 * u64::from(n) - 3;
        for (u, v) in t.edges() {
            assert_eq!(
                cuts::cut_of_edge(&t, u, v).unwrap().len() as u64,
                expected,
                "edge ({}, {}) in n={n}",
                t.vertex_string(u),
                t.vertex_string(v)
            );
            edges_checked += 1;
        }
    }

    let mut paths_checked = 0u64;
    for n in 3..=4u32 {
        let t = Torus::new(3, n).unwrap();
        let expected = 6 * u64::from(n) - 7;
        for m in t.vertices() {
            let nbrs: Vec<_> = t.neighbors(m).iter().collect();
            for (i, &u) in nbrs.iter().enumerate() {
                for &w in &nbrs[i + 1..] {
                    if t.is_adjacent(u, w) {
                        continue;
                    }
                    let p = PathTriple::new(t, u, m, w).unwrap();
                    assert_eq!(
                        cuts::cut_of_path(&p).len() as u64,
                        expected,
                        "path ({}, {}, {}) in n={n}",
                        t.vertex_string(u),
                        t.vertex_string(m),
                        t.vertex_string(w)
                    );
                    paths_checked += 1;
                }
            }
        }
    }

    let elapsed = started.elapsed();
    within(Duration::from_secs(120), elapsed, "cut-size formula scan");
    println!(
        "PASS criterion 4: |N(u,v)| = 4n-3 on {edges_checked} edges (n=2..7) and |N(P)| = 6n-7 on {paths_checked} paths (n=3..4) ({:.2}s)",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_5_lemma_suite_exhaustive() {
    let _g = serialized();
    let c = cfg(8);
    let started = Instant::now();
    let mut lines = Vec::new();

    let mut run = |name: &str,
                   n: u32,
                   f: fn(u32, VerifyMode, &SearchConfig) -> kcube::Result<kcube::verify::VerificationReport>| {
        let rep = f(n, VerifyMode::Exhaustive, &c).unwrap();
        assert!(rep.passed, "{name} failed at n={n}: {:?}", rep.counterexample);
        lines.push(format!("{name}(n={n}):{} cases", rep.cases_checked));
    };

    for n in 1..=5 {
        run("common-neighbors", n, verify_common_neighbors);
    }
    for n in 2..=5 {
        run("closed-nbhd", n, verify_closed_neighborhood_connected);
    }
    for n in 2..=4 {
        run("edge-cut", n, verify_edge_cut_lemma);
    }
    for n in 3..=4 {
        run("path-cut", n, verify_path_cut_lemma);
    }

    let elapsed = started.elapsed();
    within(Duration::from_secs(300), elapsed, "lemma suite");
    println!(
        "PASS criterion 5: lemma suite exhaustive in {:.2}s [{}]",
        elapsed.as_secs_f64(),
        lines.join(", ")
    );
}

#[test]
fn criterion_6_conditional_connectivity() {
    let _g = serialized();
    let c = cfg(8);
    let started = Instant::now();

    let exhaustive = verify_theorem1_conditional(2, VerifyMode::Exhaustive, &c).unwrap();
    assert!(exhaustive.passed);
    assert_eq!(exhaustive.cases_checked, 256, "all fault sets with |S| <= 4");

    let sampled = VerifyMode::Sampled {
        trials: 1_000_000,
        seed: 42,
    };
    let thm1 = verify_theorem1_conditional(3, sampled, &c).unwrap();
    assert!(thm1.passed, "disconnection found: {:?}", thm1.counterexample);
    assert_eq!(thm1.cases_checked, 1_000_000);

    let thm2 = verify_theorem2_conditional(3, sampled, &c).unwrap();
    assert!(thm2.passed, "disconnection found: {:?}", thm2.counterexample);
    assert_eq!(thm2.cases_checked, 1_000_000);

    let elapsed = started.elapsed();
    within(Duration::from_secs(900), elapsed, "conditional-connectivity checks");
    println!(
        "PASS criterion 6: 256 exhaustive sets at n=2; 10^6 seeded trials each at n=3 (|S|=8 and |S|=10) with zero disconnections ({:.2}s)",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_7_worker_count_determinism() {
    let _g = serialized();
    let c1 = cfg(1);
    let c8 = cfg(8);
    let t2 = Torus::new(3, 2).unwrap();
    let t3 = Torus::new(3, 3).unwrap();

    // criterion 2 artifacts
    assert_eq!(
        kappa_subset_oracle(&t2, 1, &c1).unwrap(),
        kappa_subset_oracle(&t2, 1, &c8).unwrap()
    );
    assert_eq!(
        kappa_boundary_enum(&t3, 1, &c1).unwrap(),
        kappa_boundary_enum(&t3, 1, &c8).unwrap()
    );

    // criterion 3 artifact
    assert_eq!(
        kappa_boundary_enum(&t3, 2, &c1).unwrap(),
        kappa_boundary_enum(&t3, 2, &c8).unwrap()
    );

    // criterion 6 artifacts
    let sampled = VerifyMode::Sampled {
        trials: 1_000_000,
        seed: 42,
    };
    assert_eq!(
        verify_theorem1_conditional(2, VerifyMode::Exhaustive, &c1).unwrap(),
        verify_theorem1_conditional(2, VerifyMode::Exhaustive, &c8).unwrap()
    );
    assert_eq!(
        verify_theorem1_conditional(3, sampled, &c1).unwrap(),
        verify_theorem1_conditional(3, sampled, &c8).unwrap()
    );
    assert_eq!(
        verify_theorem2_conditional(3, sampled, &c1).unwrap(),
        verify_theorem2_conditional(3, sampled, &c8).unwrap()
    );

    println!("PASS criterion 7: criteria 2, 3, 6 artifacts identical at worker counts 1 and 8");
}

#[test]
fn criterion_8_monte_carlo_calibration() {
    let _g = serialized();
    let t = Torus::new(3, 2).unwrap();

    // exact disconnection probability over all C(9,4) fault sets
    let nv = t.vertex_count();
    let mut total = 0u64;
    let mut disconnecting = 0u64;
    for a in 0..nv {
        for b in (a + 1)..nv {
            for c in (b + 1)..nv {
                for d in (c + 1)..nv {
                    let s = VertexSet::from_codes(t, [a, b, c, d]).unwrap();
                    total += 1;
                    if cuts::classify_cut(&s).unwrap().is_cut {
                        disconnecting += 1;
                    }
                }
            }
        }
    }
    assert_eq!(total, 126);
    let exact = disconnecting as f64 / total as f64;

    let model = FaultModel {
        fault_count: 4,
        condition: SurvivorCondition::None,
        seed: 20260815,
    };
    let est = reliability::estimate_disconnection(&t, &model, 1_000_000, &cfg(8)).unwrap();
    assert_eq!(est.accepted, 1_000_000);

    let half_width = (est.wilson_high - est.wilson_low) / 2.0;
    let deviation = (est.point_estimate - exact).abs();
    assert!(
        deviation <= 3.0 * half_width,
        "estimate {} deviates {deviation} from exact {exact}, over 3 half-widths ({half_width})",
        est.point_estimate
    );

    println!(
        "PASS criterion 8: exact {disconnecting}/126 = {exact:.6}; 10^6-trial estimate {:.6} within {:.2} half-widths",
        est.point_estimate,
        deviation / half_width.max(f64::MIN_POSITIVE)
    );
}
