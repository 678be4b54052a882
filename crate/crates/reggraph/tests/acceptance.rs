//! Acceptance suite: one test per release criterion, each printing a single
//! pass/fail line. Oracles are brute-force enumerations and numerical
//! cross-checks that are independent of the decision procedures under test.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use reggraph::corpus;
use reggraph::equivalence::{classify, markov_equivalent};
use reggraph::gaussian::{faithfulness_check, Verdict};
use reggraph::graph::{Flavor, StoredEdge};
use reggraph::oracle::structures_equal;
use reggraph::orientation::{orient_to_dag, verify_orientation};
use reggraph::separation::marginal_independent;
use reggraph::{collision_vs, io, separates, RegressionGraph, UndirectedGraph};

fn report(n: u32, desc: &str, ok: bool) {
    println!("criterion {n}: {} - {desc}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed");
}

fn five_node_fixture() -> RegressionGraph {
    io::parse("context:\n1 ~~ 2\n3 -> 1\n5 -> 2\n4 ~~ 3\n4 ~~ 5\n").unwrap()
}

/// Criterion 1: the five-node fixture has exactly the three known collision
/// Vs, computed in under 10 ms.
#[test]
fn criterion_1_collision_vs_fixture() {
    let g = five_node_fixture();
    let t0 = Instant::now();
    let vs = collision_vs(&g);
    let elapsed = t0.elapsed();
    let got: BTreeSet<(String, String, String)> = vs
        .iter()
        .map(|v| {
            (
                g.label(v.endpoints.0).to_string(),
                g.label(v.inner).to_string(),
                g.label(v.endpoints.1).to_string(),
            )
        })
        .collect();
    let want: BTreeSet<(String, String, String)> = [("3", "4", "5"), ("1", "2", "5"), ("2", "1", "3")]
        .iter()
        .map(|&(a, o, b)| {
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            (a.to_string(), o.to_string(), b.to_string())
        })
        .collect();
    report(
        1,
        "five-node fixture yields exactly the three expected collision Vs in < 10 ms",
        got == want && elapsed < Duration::from_millis(10),
    );
}

/// Criterion 2: skeleton-plus-collision-V equivalence agrees with the
/// brute-force independence-structure oracle on 1000 random pairs.
#[test]
fn criterion_2_equivalence_oracle_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_001);
    let t0 = Instant::now();
    let mut agree = 0usize;
    let mut total = 0usize;
    while total < 1000 {
        let n = rng.gen_range(2..=6);
        let g1 = corpus::random_graph(n, rng.gen_range(0.2..0.7), &mut rng);
        let g2 = if rng.gen_bool(0.5) {
            match corpus::same_skeleton_variant(&g1, &mut rng) {
                Some(v) => v,
                None => continue,
            }
        } else {
            corpus::random_graph(n, rng.gen_range(0.2..0.7), &mut rng)
        };
        let fast = markov_equivalent(&g1, &g2).unwrap().equivalent;
        let slow = structures_equal(&g1, &g2).unwrap();
        total += 1;
        if fast == slow {
            agree += 1;
        }
    }
    report(
        2,
        "Markov equivalence matches the brute-force oracle on 1000 random pairs (n <= 6) in < 5 min",
        agree == total && t0.elapsed() < Duration::from_secs(300),
    );
}

/// Criterion 3: orientation output verifies (acyclic, skeleton- and
/// collision-V-preserving, oracle-equivalent) on 500 random orientable graphs.
#[test]
fn criterion_3_orientation_end_to_end() {
    let mut rng = ChaCha8Rng::seed_from_u64(30_001);
    let t0 = Instant::now();
    let mut failures = 0usize;
    for trial in 0..500 {
        let n = 2 + trial % 7; // 2..=8
        let g = corpus::random_orientable(n, &mut rng);
        match orient_to_dag(&g) {
            Ok(res) if verify_orientation(&g, &res) => {}
            _ => failures += 1,
        }
    }
    report(
        3,
        "500 random orientable graphs (n <= 8) orient and verify with zero failures in < 5 min",
        failures == 0 && t0.elapsed() < Duration::from_secs(300),
    );
}

/// Criterion 4: a 200-node / 1000-edge orientable graph orients in < 1 s and
/// a doubling experiment stays within a cubic growth exponent.
#[test]
fn criterion_4_orientation_complexity() {
    let mut rng = ChaCha8Rng::seed_from_u64(40_001);
    let time_for = |edges: usize, rng: &mut ChaCha8Rng| -> Duration {
        let g = corpus::large_orientable(200, edges, rng);
        assert_eq!(g.edge_count(), edges);
        let mut best = Duration::MAX;
        for _ in 0..3 {
            let t0 = Instant::now();
            let res = orient_to_dag(&g).unwrap();
            best = best.min(t0.elapsed());
            assert!(res.dag.edges().all(|(_, e)| matches!(e, StoredEdge::Arrow { .. })));
        }
        best
    };
    let t252 = time_for(252, &mut rng);
    let t500 = time_for(500, &mut rng);
    let t1000 = time_for(1000, &mut rng);
    // clamp tiny timings so scheduler noise cannot fake a steep exponent
    let floor = Duration::from_micros(200);
    let exponent = (t1000.max(floor).as_secs_f64() / t252.max(floor).as_secs_f64()).ln()
        / (1000f64 / 252f64).ln();
    println!(
        "  orientation timings: e=252 {:?}, e=500 {:?}, e=1000 {:?}, growth exponent {:.2}",
        t252, t500, t1000, exponent
    );
    report(
        4,
        "200-node/1000-edge orientation in < 1 s with doubling growth exponent <= 3.5",
        t1000 < Duration::from_secs(1) && exponent <= 3.5,
    );
}

fn test_local_components(g: &RegressionGraph) -> Vec<Vec<usize>> {
    // independent flood fill over undirected edges
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                let undirected =
                    !matches!(g.edge_between(v, w), Some(StoredEdge::Arrow { .. }));
                if undirected && comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        out.push(members);
    }
    out
}

/// Test-local re-derivation of the chain-graph class criteria, written
/// directly from the definitions rather than through the library predicates.
fn brute_amp(g: &RegressionGraph) -> bool {
    test_local_components(g).iter().all(|comp| {
        g.is_context(comp[0])
            || comp.iter().all(|&x| {
                comp.iter().all(|&y| {
                    x == y || g.edge_between(x, y) == Some(StoredEdge::Dashed)
                })
            })
    })
}

fn brute_semi_directed_collision_path(g: &RegressionGraph) -> bool {
    let n = g.n();
    let head_at = |x: usize, y: usize, at: usize| -> bool {
        match g.edge_between(x, y) {
            Some(StoredEdge::Arrow { head }) => head == at,
            Some(StoredEdge::Dashed) => true,
            _ => false,
        }
    };
    for k0 in 0..n {
        for k1 in 0..n {
            for k2 in 0..n {
                for k3 in 0..n {
                    let nodes = [k0, k1, k2, k3];
                    let mut distinct = nodes.to_vec();
                    distinct.sort_unstable();
                    distinct.dedup();
                    if distinct.len() != 4 {
                        continue;
                    }
                    if !(g.coupled(k0, k1) && g.coupled(k1, k2) && g.coupled(k2, k3)) {
                        continue;
                    }
                    if g.coupled(k0, k2) || g.coupled(k1, k3) {
                        continue;
                    }
                    if !(head_at(k0, k1, k1)
                        && head_at(k1, k2, k1)
                        && head_at(k1, k2, k2)
                        && head_at(k2, k3, k2))
                    {
                        continue;
                    }
                    let kinds = [
                        g.edge_between(k0, k1).unwrap(),
                        g.edge_between(k1, k2).unwrap(),
                        g.edge_between(k2, k3).unwrap(),
                    ];
                    let arrows = kinds.iter().any(|e| matches!(e, StoredEdge::Arrow { .. }));
                    let undirected = kinds.iter().any(|e| !matches!(e, StoredEdge::Arrow { .. }));
                    if arrows && undirected {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn check_class_flags(g: &RegressionGraph) -> bool {
    let r = classify(g);
    let skel = g.skeleton();
    let as_con = skel.clone().with_flavor(Flavor::Concentration).to_regression_graph();
    let as_cov = skel.clone().with_flavor(Flavor::Covariance).to_regression_graph();
    if r.concentration_equivalent != structures_equal(g, &as_con).unwrap() {
        return false;
    }
    if r.covariance_equivalent != structures_equal(g, &as_cov).unwrap() {
        return false;
    }
    if r.cov_con_equivalent != structures_equal(&as_cov, &as_con).unwrap() {
        return false;
    }
    if r.amp_same_components != brute_amp(g) {
        return false;
    }
    if r.lwf_same_components != (brute_amp(g) && !brute_semi_directed_collision_path(g)) {
        return false;
    }
    true
}

/// Criterion 5: classification flags agree with brute-force verdicts on the
/// exhaustive n <= 4 corpus and on a random n <= 6 corpus; DAG-pair
/// equivalence agrees with the oracle across same-skeleton DAG groups.
#[test]
fn criterion_5_classification_oracle_agreement() {
    let mut ok = true;

    for n in 1..=4 {
        for g in corpus::enumerate_graphs(n) {
            if !check_class_flags(&g) {
                ok = false;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(50_001);
    for _ in 0..200 {
        let n = rng.gen_range(5..=6);
        let g = corpus::random_graph(n, rng.gen_range(0.2..0.7), &mut rng);
        if !check_class_flags(&g) {
            ok = false;
        }
    }

    // DAG pairs with a shared skeleton: equivalence must match the oracle
    for n in 2..=4 {
        use std::collections::BTreeMap;
        let mut by_skeleton: BTreeMap<Vec<(usize, usize)>, Vec<RegressionGraph>> = BTreeMap::new();
        for d in corpus::enumerate_dags(n) {
            by_skeleton.entry(d.skeleton().edges().collect()).or_default().push(d);
        }
        for group in by_skeleton.values() {
            for (i, d1) in group.iter().enumerate() {
                for d2 in &group[i + 1..] {
                    let fast = markov_equivalent(d1, d2).unwrap().equivalent;
                    if fast != structures_equal(d1, d2).unwrap() {
                        ok = false;
                    }
                }
            }
        }
    }

    report(
        5,
        "classification flags and DAG-pair equivalence match brute-force verdicts (exhaustive n <= 4, random n <= 6)",
        ok,
    );
}

/// Criterion 6: on 100 random graphs, separated statements have vanishing
/// partial covariance in every draw; almost all connected statements show
/// dependence in some draw.
#[test]
fn criterion_6_gaussian_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(60_001);
    let mut zero_side_violations = 0usize;
    let mut misses = 0usize;
    let mut statements = 0usize;
    for trial in 0..100 {
        let n = 2 + trial % 6; // 2..=7
        let g = corpus::random_graph(n, rng.gen_range(0.2..0.7), &mut rng);
        let rep = faithfulness_check(&g, 7_000 + trial as u64, 5, 1e-8, 1e-6).unwrap();
        statements += rep.statements_checked;
        for v in &rep.violations {
            match v.verdict {
                Verdict::NonzeroWhenSeparated => zero_side_violations += 1,
                Verdict::VanishingWhenConnected => misses += 1,
            }
        }
    }
    let miss_rate = misses as f64 / statements as f64;
    println!(
        "  gaussian check: {statements} statements, {zero_side_violations} zero-side violations, {misses} faithfulness misses ({:.3}%)",
        miss_rate * 100.0
    );
    report(
        6,
        "separated statements vanish in all draws (0 violations); >= 99% of connected statements show dependence",
        zero_side_violations == 0 && miss_rate <= 0.01,
    );
}

/// Criterion 7: the three recursion identities hold to 1e-10 on 1000 random
/// symmetric positive definite 3x3 matrices.
#[test]
fn criterion_7_recursion_identities() {
    use nalgebra::DMatrix;
    use reggraph::gaussian::{recursion_identity_checks, CovMatrix};
    let mut rng = ChaCha8Rng::seed_from_u64(70_001);
    let mut max_residual = 0.0f64;
    for _ in 0..1000 {
        let a = DMatrix::from_fn(3, 3, |_, _| rng.gen_range(-1.0..1.0));
        let sigma = CovMatrix::new(&a * a.transpose() + DMatrix::identity(3, 3) * 0.3).unwrap();
        max_residual = max_residual.max(recursion_identity_checks(&sigma).unwrap());
    }
    println!("  max recursion residual: {max_residual:.3e}");
    report(
        7,
        "recursion identities hold with max residual <= 1e-10 over 1000 random SPD matrices",
        max_residual <= 1e-10,
    );
}

fn mask_set(m: u32, n: usize) -> BTreeSet<usize> {
    (0..n).filter(|&v| m >> v & 1 == 1).collect()
}

fn check_marginal_vs_separation(u: &UndirectedGraph) -> bool {
    let n = u.n();
    match u.flavor() {
        // covariance reading: marginal independence for every disjoint pair
        Flavor::Covariance => {
            let g = u.clone().to_regression_graph();
            for code in 0..3u32.pow(n as u32) {
                let mut c = code;
                let (mut am, mut bm) = (0u32, 0u32);
                for v in 0..n {
                    match c % 3 {
                        1 => am |= 1 << v,
                        2 => bm |= 1 << v,
                        _ => {}
                    }
                    c /= 3;
                }
                if am == 0 || bm == 0 {
                    continue;
                }
                let (a, b) = (mask_set(am, n), mask_set(bm, n));
                let mi = marginal_independent(u, &a, &b).unwrap();
                if mi != separates(&g, &a, &b, &BTreeSet::new()).unwrap() {
                    return false;
                }
            }
            true
        }
        // concentration reading: only for partitions a and b of all nodes
        _ => {
            let g = u.clone().to_regression_graph();
            for am in 1u32..(1 << n) - 1 {
                let bm = ((1u32 << n) - 1) ^ am;
                let (a, b) = (mask_set(am, n), mask_set(bm, n));
                let mi = marginal_independent(u, &a, &b).unwrap();
                if mi != separates(&g, &a, &b, &BTreeSet::new()).unwrap() {
                    return false;
                }
            }
            true
        }
    }
}

/// Criterion 8: for undirected graphs, a missing join between a and b means
/// exactly marginal independence — under the covariance reading for all
/// disjoint pairs, and under the concentration reading for partitions.
#[test]
fn criterion_8_marginal_independence() {
    let mut ok = true;
    for n in 1..=4 {
        for flavor in [Flavor::Covariance, Flavor::Concentration] {
            for u in corpus::enumerate_undirected(n, flavor) {
                if !check_marginal_vs_separation(&u) {
                    ok = false;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(80_001);
    for trial in 0..200 {
        let n = 5 + trial % 2; // 5..=6
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |k| (i, k))).collect();
        let edges: Vec<(usize, usize)> =
            pairs.into_iter().filter(|_| rng.gen_bool(0.4)).collect();
        for flavor in [Flavor::Covariance, Flavor::Concentration] {
            let u = UndirectedGraph::new(
                (1..=n).map(|i| i.to_string()).collect(),
                &edges,
                flavor,
            )
            .unwrap();
            if !check_marginal_vs_separation(&u) {
                ok = false;
            }
        }
    }
    report(
        8,
        "marginal independence matches separation for undirected graphs (n <= 6, both readings)",
        ok,
    );
}

/// Criterion 9: parse/serialize round-trips across the corpus and the CLI
/// fixture matrix returns the documented exit codes and bytes.
#[test]
fn criterion_9_round_trip_and_cli() {
    let mut ok = true;

    for n in 0..=3 {
        for g in corpus::enumerate_graphs(n) {
            if !io::parse(&io::serialize(&g)).unwrap().structural_eq(&g) {
                ok = false;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(90_001);
    for _ in 0..300 {
        let n = rng.gen_range(0..=8);
        let g = corpus::random_graph(n, rng.gen_range(0.1..0.9), &mut rng);
        if !io::parse(&io::serialize(&g)).unwrap().structural_eq(&g) {
            ok = false;
        }
    }

    let fixture = |name: &str| format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let invocations: &[(&[&str], i32, Option<&str>)] = &[
        (&["validate", &fixture("five_cycle.rg")], 0, Some("valid\n")),
        (&["validate", &fixture("selfloop.rg")], 1, Some("self loop at '1'\n")),
        (&["validate", "/nonexistent.rg"], 2, None),
        (&["independences", &fixture("five_cycle.rg")], 0, Some(
            "{1} _||_ {4} | {3, 5}\n{1} _||_ {5} | {3, 4}\n{2} _||_ {3} | {4, 5}\n{2} _||_ {4} | {3, 5}\n{3} _||_ {5} | {}\n",
        )),
        (&["separate", &fixture("five_cycle.rg"), "--a", "3", "--b", "5", "--c", ""], 0, Some("separated\n")),
        (&["separate", &fixture("five_cycle.rg"), "--a", "3", "--b", "5", "--c", "4"], 1, Some("connected\n")),
        (&["equivalent", &fixture("five_cycle.rg"), &fixture("five_cycle.rg")], 0, Some("equivalent\n")),
        (&["equivalent", &fixture("five_cycle.rg"), &fixture("five_cycle_arrow.rg")], 1, Some(
            "not equivalent: collision V (1,2,5) in one graph only\n",
        )),
        (&["classify", &fixture("five_cycle.rg")], 0, None),
        (&["orient", &fixture("dashed4path.rg")], 1, Some(
            "NotOrientable: chordless collision path 1~2~3~4\n",
        )),
        (&["orient", &fixture("orientable.rg")], 0, None),
        (&["gaussian-check", &fixture("five_cycle.rg")], 0, Some(
            "checked 80 statements over 5 draws, 0 violations\n",
        )),
    ];
    for (args, want_code, want_stdout) in invocations {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_reggraph"))
            .args(*args)
            .output()
            .expect("binary runs");
        if out.status.code() != Some(*want_code) {
            println!("  exit mismatch for {args:?}: got {:?}", out.status.code());
            ok = false;
        }
        if let Some(want) = want_stdout {
            if String::from_utf8_lossy(&out.stdout) != *want {
                println!("  stdout mismatch for {args:?}");
                ok = false;
            }
        }
    }

    report(
        9,
        "parse/serialize round-trips on the corpus; 12-invocation CLI matrix matches exit codes and bytes",
        ok,
    );
}
