//! Exit criteria. Each test prints one `criterion N: PASS|FAIL` line and
//! then asserts.

use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;
use subgroup_decomp::decomp::{
    audit_theorems, canonical_product, canonical_ratio_rep, find_ratio_representations,
    max_difference_clique, AuditConfig, AuditKind, AuditOutcome, LambdaScope, SearchOptions,
    WitnessKind,
};
use subgroup_decomp::set::{build_target, TargetVariant};
use subgroup_decomp::suites::{self, IdentityCounts, UnityRanges};
use subgroup_decomp::unity;
use subgroup_decomp::{ElementSet, FieldContext};

fn verdict(n: u32, title: &str, elapsed: Duration, limit: Option<Duration>, failures: &[String]) {
    let mut failures = failures.to_vec();
    if let Some(limit) = limit {
        if elapsed >= limit {
            failures.push(format!("took {elapsed:?}, limit {limit:?}"));
        }
    }
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n} ({title}): {status} [{:.2}s]", elapsed.as_secs_f64());
    for f in failures.iter().take(20) {
        println!("  {f}");
    }
    assert!(failures.is_empty(), "criterion {n} failed with {} problem(s)", failures.len());
}

fn config(pmax: u32) -> AuditConfig {
    AuditConfig {
        pmin: 3,
        pmax,
        orders: None,
        lambda_scope: LambdaScope::InG,
        oracle: true,
        workers: 0,
        search: SearchOptions::default(),
    }
}

fn violation_lines(outcome: &AuditOutcome) -> Vec<String> {
    outcome
        .violations
        .iter()
        .map(|v| format!("p={:?} |G|={:?} {}: {}", v.task.p, v.task.subgroup_order, v.task.params, v.detail))
        .collect()
}

fn set(p: u32, xs: &[u32]) -> ElementSet {
    ElementSet::from_residues(p, xs.iter().copied())
}

fn json_set(p: u32, v: &Value) -> ElementSet {
    ElementSet::from_residues(p, v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as u32))
}

#[test]
fn criterion_1_counterexample_reproduction() {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_sgdecomp"))
        .args(["reproduce", "counterexamples", "--no-timing"])
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    let mut failures = Vec::new();
    if out.status.code() != Some(0) {
        failures.push(format!("exit status {:?}", out.status.code()));
    }
    let stdout = String::from_utf8(out.stdout).unwrap();
    let records: Vec<Value> = stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let expected: [(u32, &[u32], &[u32], &[u32]); 2] = [
        (11, &[1, 3, 4, 5, 9], &[1, 7], &[1, 2, 3]),
        (19, &[1, 7, 8, 11, 12, 18], &[1, 9], &[6, 9, 18]),
    ];
    if records.len() != expected.len() {
        failures.push(format!("{} records, expected 2", records.len()));
    }
    for (rec, (p, g, a, b)) in records.iter().zip(expected) {
        let ctx = FieldContext::new(p as u64).unwrap();
        if rec["p"] != p {
            failures.push(format!("record for p={}, expected {p}", rec["p"]));
            continue;
        }
        let order = ctx.subgroup_of_order(rec["subgroup_order"].as_u64().unwrap() as u32).unwrap();
        if order.elements() != &set(p, g) || rec["params"]["lambda"] != 2 {
            failures.push(format!("p={p}: wrong subgroup or shift"));
        }
        let want = canonical_product(&ctx, &set(p, a), &set(p, b));
        let ws = rec["witnesses"].as_array().unwrap();
        let got: Vec<_> = ws.iter().map(|w| (json_set(p, &w["A"]), json_set(p, &w["B"]))).collect();
        if got != vec![want.clone()] {
            failures.push(format!("p={p}: witnesses {got:?}, expected {want:?}"));
        }
    }
    verdict(1, "counterexample reproduction", elapsed, Some(Duration::from_secs(1)), &failures);
}

#[test]
fn criterion_2_product_audit_lambda_in_g() {
    let start = Instant::now();
    let outcome = audit_theorems(&config(61), AuditKind::Sarkozy).unwrap();
    let elapsed = start.elapsed();
    let mut failures = violation_lines(&outcome);
    for r in &outcome.reports {
        if !r.witnesses.is_empty() {
            failures.push(format!("p={:?} {}: {} witnesses", r.task.p, r.task.params, r.witnesses.len()));
        }
    }
    let largest = outcome.reports.iter().filter_map(|r| r.task.p).max();
    if largest != Some(61) {
        failures.push(format!("largest prime audited {largest:?}"));
    }
    if !outcome.reports.iter().any(|r| r.task.p == Some(23)) {
        failures.push("oracle range not covered".into());
    }
    verdict(2, "no product decomposition with lambda in G", elapsed, Some(Duration::from_secs(300)), &failures);
}

#[test]
fn criterion_3_ratio_audit() {
    let start = Instant::now();
    let outcome = audit_theorems(&config(31), AuditKind::RatioSet).unwrap();
    let mut failures = violation_lines(&outcome);
    for r in &outcome.reports {
        if r.task.subgroup_order.unwrap() >= 3 && !r.witnesses.is_empty() {
            failures.push(format!("p={:?} {}: ratio witness", r.task.p, r.task.params));
        }
        if r.witnesses.iter().any(|w| w.kind != WitnessKind::RatioRep) {
            failures.push("unexpected witness kind".into());
        }
    }
    // Small-subgroup constructions: (order, xi, mu, wide variant, A) with
    // fractions evaluated in F_p.
    let mut exceptions = 0;
    for p in subgroup_decomp::field::odd_primes_in(5, 31) {
        let ctx = FieldContext::new(p as u64).unwrap();
        let half = ctx.inv(2);
        let neg = |x: u32| ctx.neg(x);
        let cases = [
            (1, 2, neg(1), false, vec![1]),
            (1, neg(1), 1, true, vec![1]),
            (2, half, half, false, vec![1]),
            (2, neg(ctx.mul(3, half)), neg(half), true, vec![1, neg(2)]),
        ];
        for (order, xi, mu, with_zero, a) in cases {
            let g = ctx.subgroup_of_order(order).unwrap();
            let variant = if with_zero {
                TargetVariant::XiShiftWithZero { xi, mu }
            } else {
                TargetVariant::XiShift { xi, mu }
            };
            let t = build_target(&g, variant).unwrap();
            let want = canonical_ratio_rep(&ctx, &set(p, &a));
            let direct = find_ratio_representations(&ctx, &t).unwrap();
            let in_audit = outcome.reports.iter().any(|r| {
                r.task.p == Some(p)
                    && r.task.subgroup_order == Some(order)
                    && r.task.params["variant"] == variant.name()
                    && r.task.params["mu"] == mu
                    && g.elements().iter().any(|h| r.task.params["xi"] == ctx.mul(xi, h))
                    && r.witnesses.iter().any(|w| w.a == want)
            });
            if direct.witnesses.iter().any(|w| w.a == want) && in_audit {
                exceptions += 1;
            } else {
                failures.push(format!("p={p} |G|={order} {}: construction {a:?} not found", variant.name()));
            }
        }
    }
    let elapsed = start.elapsed();
    if exceptions == 0 {
        failures.push("no small-subgroup constructions checked".into());
    }
    verdict(3, "no ratio representation once |G| >= 3", elapsed, Some(Duration::from_secs(300)), &failures);
}

#[test]
fn criterion_4_difference_audit() {
    let start = Instant::now();
    let outcome = audit_theorems(&config(61), AuditKind::LevSonn).unwrap();
    let elapsed = start.elapsed();
    let mut failures = violation_lines(&outcome);
    let mut pairs_seen = 0;
    for r in &outcome.reports {
        let (p, order) = (r.task.p.unwrap(), r.task.subgroup_order.unwrap());
        match order {
            2 => {
                if r.witnesses.iter().any(|w| w.a == set(p, &[0, 1])) {
                    pairs_seen += 1;
                } else {
                    failures.push(format!("p={p}: A = {{0, 1}} missing for |G| = 2"));
                }
            }
            6 => {}
            _ if !r.witnesses.is_empty() => failures.push(format!("p={p} |G|={order}: witness found")),
            _ => {}
        }
    }
    if pairs_seen != subgroup_decomp::field::odd_primes_in(5, 61).len() {
        failures.push(format!("|G| = 2 checked for {pairs_seen} primes"));
    }
    verdict(4, "no difference representation of G ∪ {0}", elapsed, Some(Duration::from_secs(120)), &failures);
}

#[test]
fn criterion_5_sum_audit() {
    let start = Instant::now();
    let outcome = audit_theorems(&config(61), AuditKind::KalmyninSum).unwrap();
    let elapsed = start.elapsed();
    let mut failures = violation_lines(&outcome);
    for r in &outcome.reports {
        let (p, order) = (r.task.p.unwrap(), r.task.subgroup_order.unwrap());
        let root = (1..=order).find(|k| k * k >= order).unwrap();
        for w in &r.witnesses {
            let b = w.b.as_ref().unwrap();
            if root * root != order || w.a.len() != root as usize || b.len() != root as usize {
                failures.push(format!("p={p} |G|={order}: sizes {} and {}", w.a.len(), b.len()));
            }
            if 2 * order == p - 1 {
                failures.push(format!("p={p}: quadratic residues split as a sum"));
            }
        }
    }
    verdict(5, "sum decompositions of G are balanced", elapsed, Some(Duration::from_secs(180)), &failures);
}

#[test]
fn criterion_6_paley_clique_bound() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for p in subgroup_decomp::field::odd_primes_in(17, 101).into_iter().filter(|p| p % 4 == 1) {
        let ctx = FieldContext::new(p as u64).unwrap();
        let residues = ctx.quadratic_residues();
        let clique = max_difference_clique(&ctx, &residues);
        let bound = ((2.0 * p as f64 - 5.0).sqrt() + 1.0) / 2.0;
        if clique.size as f64 > bound {
            failures.push(format!(
                "p={p}: clique {} of size {} exceeds {bound:.4}",
                clique.clique, clique.size
            ));
        }
        if p == 17 && clique.size != 3 {
            failures.push(format!("p=17: clique number {}, expected 3", clique.size));
        }
    }
    verdict(6, "Paley clique bound", start.elapsed(), Some(Duration::from_secs(120)), &failures);
}

#[test]
fn criterion_7_auxiliary_polynomial_suite() {
    let start = Instant::now();
    let summary = suites::stepanov_suite(0, 1000, 5, 101);
    let elapsed = start.elapsed();
    let mut failures = summary.failures.clone();
    if summary.cases < 1000 {
        failures.push(format!("only {} instances", summary.cases));
    }
    let first = &summary.details["first_instance"];
    if first["p"] != 11 || first["degree"] != 6 || first["bound_lhs"] != first["bound_rhs"] {
        failures.push(format!("first instance {first}"));
    }
    let equality = summary.details["factorizations_roots_of_b"].as_u64().unwrap()
        + summary.details["factorizations_with_zero"].as_u64().unwrap();
    if equality == 0 {
        failures.push("no equality instance exercised the factorization".into());
    }
    verdict(7, "auxiliary polynomial bounds", elapsed, None, &failures);
}

#[test]
fn criterion_8_identity_suite() {
    let start = Instant::now();
    let counts = IdentityCounts::default();
    let summaries = suites::identity_suite(0, counts, 101);
    let elapsed = start.elapsed();
    let mut failures = Vec::new();
    let expected = [counts.gf, counts.newton, counts.derivative, counts.harmonic];
    if summaries.len() != expected.len() {
        failures.push(format!("{} suites", summaries.len()));
    }
    for (s, want) in summaries.iter().zip(expected) {
        if s.cases < want {
            failures.push(format!("{}: {} cases, expected {want}", s.name, s.cases));
        }
        failures.extend(s.failures.iter().map(|f| format!("{}: {f}", s.name)));
    }
    verdict(8, "exact identities", elapsed, None, &failures);
}

#[test]
fn criterion_9_unity_suite() {
    let start = Instant::now();
    let summaries = suites::unity_suite(UnityRanges::default());
    let mut failures: Vec<String> = summaries
        .iter()
        .flat_map(|s| s.failures.iter().map(move |f| format!("{}: {f}", s.name)))
        .collect();
    for m in 3..=8 {
        let report = unity::classify_circle_preserving_maps(m).unwrap();
        if report.survivors.len() != 2 * m {
            failures.push(format!("m={m}: {} survivors", report.survivors.len()));
        }
    }
    if (3..=100).any(|m| unity::check_xk_product_claim(m).max_product_norm.is_nan()) {
        failures.push("non-finite product".into());
    }
    verdict(9, "roots of unity", start.elapsed(), Some(Duration::from_secs(120)), &failures);
}
