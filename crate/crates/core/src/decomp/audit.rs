//! Sweeps over primes and subgroups that run a search per task and compare
//! the outcome with what the corresponding theorem predicts.

use rayon::prelude::*;
use serde_json::json;

use super::{
    canonical_diff_rep, canonical_product, find_difference_representations,
    find_exact_factorizations, find_ratio_representations, max_difference_clique, naive,
    DecompError, DecompWitness, FactorKind, SearchOptions, SearchReport, TaskDescriptor,
    WitnessKind,
};
use crate::field::{odd_primes_in, FieldContext, MultSubgroup, DEFAULT_PRIME_BOUND};
use crate::set::{build_target, ElementSet, TargetVariant};

/// Largest prime for which the brute-force cross-check runs.
pub const ORACLE_PRIME_CAP: u32 = 23;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AuditKind {
    /// No `AB = (G - λ) \ {0}` for `λ ∈ G`.
    Sarkozy,
    /// No `A/A` equal to either shifted-coset target once `|G| >= 3`.
    RatioSet,
    /// No `A - A = G ∪ {0}` once `|G| ∉ {2, 6}`.
    LevSonn,
    /// `A + B = G` forces `|A| = |B| = sqrt|G|`, and is impossible for the
    /// quadratic residues.
    KalmyninSum,
    /// Difference-clique bound for the quadratic residues.
    PaleyClique,
    /// Product decompositions of `(G - λ) \ {0}`, recorded without any
    /// expectation.
    Census,
}

impl AuditKind {
    pub fn task_name(self) -> &'static str {
        match self {
            AuditKind::Sarkozy => "sarkozy",
            AuditKind::RatioSet => "ratio",
            AuditKind::LevSonn => "levsonn",
            AuditKind::KalmyninSum => "kalmynin-sum",
            AuditKind::PaleyClique => "clique",
            AuditKind::Census => "census-lambda-not-in-g",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaScope {
    InG,
    NotInG,
    All,
}

impl LambdaScope {
    fn admits(self, g: &MultSubgroup, lambda: u32) -> bool {
        match self {
            LambdaScope::InG => g.contains(lambda),
            LambdaScope::NotInG => !g.contains(lambda),
            LambdaScope::All => true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AuditConfig {
    pub pmin: u32,
    pub pmax: u32,
    /// Restrict to these subgroup orders; `None` means every proper one.
    pub orders: Option<Vec<u32>>,
    pub lambda_scope: LambdaScope,
    pub oracle: bool,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
    pub search: SearchOptions,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            pmin: 3,
            pmax: 61,
            orders: None,
            lambda_scope: LambdaScope::InG,
            oracle: true,
            workers: 0,
            search: SearchOptions::default(),
        }
    }
}

/// A search result that contradicts the theorem being audited.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremViolation {
    pub task: TaskDescriptor,
    pub witness: Option<DecompWitness>,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct AuditOutcome {
    /// One per task, in task order.
    pub reports: Vec<SearchReport>,
    pub violations: Vec<TheoremViolation>,
}

#[derive(Debug, Clone)]
struct Task {
    p: u32,
    order: u32,
    params: TaskParams,
}

#[derive(Debug, Clone, Copy)]
enum TaskParams {
    Lambda(u32),
    Ratio(TargetVariant),
    None,
}

impl TaskParams {
    fn to_json(self) -> serde_json::Value {
        match self {
            TaskParams::Lambda(lambda) => json!({ "lambda": lambda }),
            TaskParams::Ratio(v @ (TargetVariant::XiShift { xi, mu } | TargetVariant::XiShiftWithZero { xi, mu })) => {
                json!({ "variant": v.name(), "xi": xi, "mu": mu })
            }
            TaskParams::Ratio(v) => json!({ "variant": v.name() }),
            TaskParams::None => json!({}),
        }
    }
}

fn subgroups(ctx: &FieldContext, orders: &Option<Vec<u32>>) -> Vec<MultSubgroup> {
    ctx.proper_subgroups()
        .into_iter()
        .filter(|g| orders.as_ref().is_none_or(|o| o.contains(&g.order())))
        .collect()
}

/// Tasks in canonical order: prime, subgroup order, then parameters.
fn plan(kind: AuditKind, config: &AuditConfig, primes: &[u32]) -> Result<Vec<Task>, DecompError> {
    let mut tasks = Vec::new();
    for &p in primes {
        let ctx = FieldContext::new(p as u64)?;
        match kind {
            AuditKind::PaleyClique => {
                if p % 4 == 1 && p >= 17 {
                    tasks.push(Task { p, order: (p - 1) / 2, params: TaskParams::None });
                }
                continue;
            }
            _ => {}
        }
        for g in subgroups(&ctx, &config.orders) {
            let order = g.order();
            match kind {
                AuditKind::Sarkozy | AuditKind::Census => {
                    let scope = if kind == AuditKind::Census { LambdaScope::NotInG } else { config.lambda_scope };
                    for lambda in 1..p {
                        if scope.admits(&g, lambda) {
                            tasks.push(Task { p, order, params: TaskParams::Lambda(lambda) });
                        }
                    }
                }
                AuditKind::RatioSet => {
                    for xi in g.coset_representatives() {
                        for mu in 1..p {
                            for v in [TargetVariant::XiShift { xi, mu }, TargetVariant::XiShiftWithZero { xi, mu }] {
                                tasks.push(Task { p, order, params: TaskParams::Ratio(v) });
                            }
                        }
                    }
                }
                AuditKind::LevSonn | AuditKind::KalmyninSum => {
                    tasks.push(Task { p, order, params: TaskParams::None });
                }
                AuditKind::PaleyClique => unreachable!(),
            }
        }
    }
    Ok(tasks)
}

fn run_task(
    kind: AuditKind,
    config: &AuditConfig,
    task: &Task,
) -> Result<(SearchReport, Vec<TheoremViolation>), DecompError> {
    let ctx = FieldContext::new(task.p as u64)?;
    let g = ctx.subgroup_of_order(task.order)?;
    let descriptor = TaskDescriptor::new(kind.task_name(), task.p, Some(task.order), task.params.to_json());
    let mut violations = Vec::new();
    let mut violate = |witness: Option<&DecompWitness>, detail: String| {
        violations.push(TheoremViolation { task: descriptor.clone(), witness: witness.cloned(), detail });
    };

    let mut report = match (kind, task.params) {
        (AuditKind::Sarkozy | AuditKind::Census, TaskParams::Lambda(lambda)) => {
            let s = build_target(&g, TargetVariant::ShiftMinusLambda { lambda })?;
            let report = find_exact_factorizations(&ctx, &s, FactorKind::Product, config.search)?;
            if kind == AuditKind::Sarkozy {
                if g.contains(lambda) {
                    for w in &report.witnesses {
                        violate(Some(w), format!("product decomposition with lambda = {lambda} in G"));
                    }
                }
                if config.oracle && task.p <= ORACLE_PRIME_CAP {
                    let fast: Vec<_> = report.witnesses.iter().map(|w| (w.a.clone(), w.b.clone().expect("pair"))).collect();
                    if fast != naive::product_factorizations(&ctx, &s) {
                        violate(None, "search and brute force disagree".to_string());
                    }
                }
            }
            report
        }
        (AuditKind::RatioSet, TaskParams::Ratio(variant)) => {
            let t = build_target(&g, variant)?;
            let report = find_ratio_representations(&ctx, &t)?;
            if task.order >= 3 {
                for w in &report.witnesses {
                    violate(Some(w), format!("ratio representation of a {} target", variant.name()));
                }
            }
            report
        }
        (AuditKind::LevSonn, _) => {
            let t = build_target(&g, TargetVariant::GUnionZero)?;
            let report = find_difference_representations(&ctx, &t)?;
            match task.order {
                2 => {
                    let expected = ElementSet::from_residues(task.p, [0, 1]);
                    if !report.witnesses.iter().any(|w| canonical_diff_rep(&ctx, &w.a) == expected) {
                        violate(None, "missing A = {0, 1} for |G| = 2".to_string());
                    }
                }
                6 => {}
                _ => {
                    for w in &report.witnesses {
                        violate(Some(w), "difference representation of G ∪ {0}".to_string());
                    }
                }
            }
            report
        }
        (AuditKind::KalmyninSum, _) => {
            let report = find_exact_factorizations(&ctx, g.elements(), FactorKind::Sum, config.search)?;
            let root = (task.order as f64).sqrt().round() as usize;
            let square = root * root == task.order as usize;
            for w in &report.witnesses {
                let b_len = w.b.as_ref().map_or(0, ElementSet::len);
                if !square || w.a.len() != root || b_len != root {
                    violate(Some(w), format!("sum decomposition with sizes {} and {b_len}", w.a.len()));
                } else if 2 * task.order == task.p - 1 {
                    violate(Some(w), "sum decomposition of the quadratic residues".to_string());
                }
            }
            report
        }
        (AuditKind::PaleyClique, _) => clique_report(&ctx, &g, &descriptor, &mut violate),
        _ => unreachable!("task parameters match the audit kind"),
    };
    if kind != AuditKind::PaleyClique {
        report.task = descriptor.clone();
    }
    for w in &report.witnesses {
        if !w.validate(&ctx) {
            violations.push(TheoremViolation {
                task: descriptor.clone(),
                witness: Some(w.clone()),
                detail: "witness failed re-validation".to_string(),
            });
        }
    }
    if !report.exhaustive {
        violations.push(TheoremViolation {
            task: descriptor,
            witness: None,
            detail: "search stopped at the node budget".to_string(),
        });
    }
    Ok((report, violations))
}

/// Largest clique size allowed by the refined bound `(sqrt(2p - 5) + 1) / 2`.
pub fn paley_clique_bound(p: u32) -> usize {
    // Largest k with (2k - 1)^2 <= 2p - 5.
    let rhs = 2 * p as u64 - 5;
    let mut k = 1u64;
    while (2 * (k + 1) - 1).pow(2) <= rhs {
        k += 1;
    }
    k as usize
}

fn clique_report(
    ctx: &FieldContext,
    g: &MultSubgroup,
    descriptor: &TaskDescriptor,
    violate: &mut impl FnMut(Option<&DecompWitness>, String),
) -> SearchReport {
    let start = std::time::Instant::now();
    let result = max_difference_clique(ctx, g);
    let witness = DecompWitness {
        p: ctx.p(),
        target: g.elements().with(0),
        kind: WitnessKind::DiffClique,
        a: canonical_diff_rep(ctx, &result.clique),
        b: None,
        canonical: true,
    };
    let bound = paley_clique_bound(ctx.p());
    if result.size > bound {
        violate(Some(&witness), format!("clique of size {} exceeds bound {bound}", result.size));
    }
    let k = result.size;
    if k * k - k > g.order() as usize - 1 {
        violate(Some(&witness), format!("|A|^2 - |A| = {} exceeds |G| - 1", k * k - k));
    }
    let mut params = descriptor.params.clone();
    params["clique_number"] = json!(result.size);
    params["bound"] = json!(bound);
    SearchReport {
        task: TaskDescriptor { params, ..descriptor.clone() },
        witnesses: vec![witness],
        exhaustive: true,
        nodes_explored: result.nodes,
        elapsed: start.elapsed(),
    }
}

/// Runs every task of one audit over the configured prime range. Tasks run on
/// a bounded pool and come back in canonical order.
pub fn audit_theorems(config: &AuditConfig, kind: AuditKind) -> Result<AuditOutcome, DecompError> {
    let primes = audit_primes(config)?;
    let tasks = plan(kind, config, &primes)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .expect("thread pool");
    let results: Vec<_> = pool.install(|| {
        tasks
            .par_iter()
            .map(|t| run_task(kind, config, t))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut outcome = AuditOutcome::default();
    for (report, violations) in results {
        outcome.reports.push(report);
        outcome.violations.extend(violations);
    }
    Ok(outcome)
}

/// Odd primes in the configured range, rejecting empty or out-of-bound
/// ranges.
pub fn audit_primes(config: &AuditConfig) -> Result<Vec<u32>, DecompError> {
    let range_err = DecompError::EmptyRange { pmin: config.pmin, pmax: config.pmax };
    if config.pmin > config.pmax || config.pmax > DEFAULT_PRIME_BOUND {
        return Err(range_err);
    }
    let primes = odd_primes_in(config.pmin.max(3), config.pmax);
    if primes.is_empty() {
        return Err(range_err);
    }
    Ok(primes)
}

/// Searches `(G - λ) \ {0}` for the product decomposition equivalent to
/// `(a, b)` and returns the canonical witness if the search finds it.
pub fn reproduce_product_witness(
    ctx: &FieldContext,
    g: &MultSubgroup,
    lambda: u32,
    a: &ElementSet,
    b: &ElementSet,
) -> Result<(SearchReport, Option<DecompWitness>), DecompError> {
    let s = build_target(g, TargetVariant::ShiftMinusLambda { lambda })?;
    let report = find_exact_factorizations(ctx, &s, FactorKind::Product, SearchOptions::default())?;
    let key = canonical_product(ctx, a, b);
    let hit = report
        .witnesses
        .iter()
        .find(|w| (w.a.clone(), w.b.clone().expect("pair")) == key)
        .cloned();
    Ok((report, hit))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(pmin: u32, pmax: u32) -> AuditConfig {
        AuditConfig { pmin, pmax, workers: 2, ..AuditConfig::default() }
    }

    #[test]
    fn clique_bound_values() {
        assert_eq!(paley_clique_bound(17), 3);
        assert_eq!(paley_clique_bound(29), 4);
        assert_eq!(paley_clique_bound(101), 7);
    }

    #[test]
    fn empty_ranges_rejected() {
        assert!(matches!(audit_primes(&config(3, 2)), Err(DecompError::EmptyRange { .. })));
        assert!(matches!(audit_primes(&config(24, 28)), Err(DecompError::EmptyRange { .. })));
        assert_eq!(audit_primes(&config(1, 11)).unwrap(), vec![3, 5, 7, 11]);
    }

    #[test]
    fn small_sarkozy_sweep() {
        let out = audit_theorems(&config(3, 23), AuditKind::Sarkozy).unwrap();
        assert!(out.violations.is_empty(), "{:?}", out.violations);
        assert!(out.reports.iter().all(|r| r.witnesses.is_empty()));
    }

    #[test]
    fn census_contains_f11_pair() {
        let cfg = AuditConfig { orders: Some(vec![5]), ..config(11, 11) };
        let out = audit_theorems(&cfg, AuditKind::Census).unwrap();
        let hit = out.reports.iter().find(|r| r.task.params["lambda"] == 2).unwrap();
        assert!(hit.witnesses.iter().any(|w| w.a.to_vec() == vec![1, 7]));
    }

    #[test]
    fn task_order_is_canonical_and_worker_independent() {
        let run = |workers| {
            let cfg = AuditConfig { workers, ..config(5, 19) };
            audit_theorems(&cfg, AuditKind::RatioSet)
                .unwrap()
                .reports
                .into_iter()
                .map(|r| (r.task, r.witnesses, r.nodes_explored))
                .collect::<Vec<_>>()
        };
        let one = run(1);
        assert_eq!(one, run(4));
        let keys: Vec<_> = one.iter().map(|(t, _, _)| (t.p, t.subgroup_order)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn levsonn_small_range() {
        let out = audit_theorems(&config(3, 23), AuditKind::LevSonn).unwrap();
        assert!(out.violations.is_empty(), "{:?}", out.violations);
    }
}
