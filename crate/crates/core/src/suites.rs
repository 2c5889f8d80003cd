//! Randomized and sweeping check suites shared by the command line and the
//! test harness. Every suite is seeded and deterministic.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::field::{odd_primes_in, FieldContext, MultSubgroup};
use crate::poly::DensePoly;
use crate::set::ElementSet;
use crate::stepanov::{self, audit_instance, FactorizationForm, StepanovError};
use crate::sympoly;
use crate::unity;

/// Result of one suite: how many cases ran and which failed.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSummary {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
    pub details: serde_json::Value,
}

impl SuiteSummary {
    fn new(name: &str) -> Self {
        Self { name: name.to_string(), cases: 0, failures: Vec::new(), details: json!({}) }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// An instance with `AB + λ ⊆ G ∪ {0}`.
#[derive(Debug, Clone)]
pub struct HypothesisInstance {
    pub ctx: FieldContext,
    pub g: MultSubgroup,
    pub lambda: u32,
    pub a: ElementSet,
    pub b: ElementSet,
}

fn compatible(ctx: &FieldContext, g: &MultSubgroup, lambda: u32, fixed: &ElementSet) -> Vec<u32> {
    (1..ctx.p())
        .filter(|&x| {
            fixed.iter().all(|y| {
                let v = ctx.add(ctx.mul(x, y), lambda);
                v == 0 || g.contains(v)
            })
        })
        .collect()
}

/// Draws a random instance satisfying the audit hypothesis.
///
/// A quarter of the draws take `A` a singleton and `B` every compatible
/// element (optionally avoiding the zero of `AB + λ`); those are exactly
/// the cases where the degree bounds are met with equality.
pub fn sample_instance<R: Rng + ?Sized>(rng: &mut R, primes: &[u32]) -> HypothesisInstance {
    let p = *primes.choose(rng).expect("nonempty prime list");
    let ctx = FieldContext::new(p as u64).expect("prime");
    let g = ctx.proper_subgroups().choose(rng).expect("trivial subgroup").clone();
    let lambda = rng.gen_range(1..p);
    let mut a = ElementSet::from_residues(p, [rng.gen_range(1..p)]);
    let mut b = ElementSet::empty(p);

    if rng.gen_bool(0.25) {
        let a0 = a.first().expect("singleton");
        let zero_free = rng.gen_bool(0.5);
        let pole = ctx.div(ctx.neg(lambda), a0);
        for x in compatible(&ctx, &g, lambda, &a) {
            if !(zero_free && x == pole) {
                b.insert(x);
            }
        }
    } else {
        let (n_target, m_target) = (rng.gen_range(1..=4usize), rng.gen_range(1..=8usize));
        for _ in 0..3 {
            while b.len() < m_target {
                let cands: Vec<u32> =
                    compatible(&ctx, &g, lambda, &a).into_iter().filter(|x| !b.contains(*x)).collect();
                let Some(&x) = cands.choose(rng) else { break };
                b.insert(x);
            }
            while a.len() < n_target {
                let cands: Vec<u32> =
                    compatible(&ctx, &g, lambda, &b).into_iter().filter(|x| !a.contains(*x)).collect();
                let Some(&x) = cands.choose(rng) else { break };
                a.insert(x);
            }
        }
    }
    if b.is_empty() {
        // -λ/a always works for a singleton A; for larger A fall back to it.
        let a0 = a.first().expect("nonempty");
        a = ElementSet::from_residues(p, [a0]);
        b.insert(ctx.div(ctx.neg(lambda), a0));
    }
    HypothesisInstance { ctx, g, lambda, a, b }
}

fn fixed_instances() -> Vec<HypothesisInstance> {
    let make = |p: u32, order: u32, lambda: u32, a: &[u32], b: &[u32]| {
        let ctx = FieldContext::new(p as u64).expect("prime");
        let g = ctx.subgroup_of_order(order).expect("divisor");
        HypothesisInstance {
            a: ElementSet::from_residues(p, a.iter().copied()),
            b: ElementSet::from_residues(p, b.iter().copied()),
            ctx,
            g,
            lambda,
        }
    };
    vec![make(11, 5, 2, &[1, 7], &[1, 2, 3]), make(19, 6, 2, &[1, 9], &[6, 9, 18])]
}

/// Audits the two known decompositions plus `samples` random instances with
/// primes in `[pmin, pmax]`.
pub fn stepanov_suite(seed: u64, samples: usize, pmin: u32, pmax: u32) -> SuiteSummary {
    let mut summary = SuiteSummary::new("stepanov-audit");
    let primes = odd_primes_in(pmin.max(5), pmax);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut instances = fixed_instances();
    if !primes.is_empty() {
        instances.extend((0..samples).map(|_| sample_instance(&mut rng, &primes)));
    }
    let (mut plain_eq, mut zero_eq, mut tight, mut strict) = (0, 0, 0, 0);
    let mut first = None;
    for inst in &instances {
        summary.cases += 1;
        let label = format!(
            "p={} |G|={} lambda={} A={} B={}",
            inst.ctx.p(),
            inst.g.order(),
            inst.lambda,
            inst.a,
            inst.b
        );
        match audit_instance(&inst.ctx, &inst.a, &inst.b, inst.lambda, &inst.g) {
            Ok(audit) => {
                if first.is_none() {
                    first = Some(json!({
                        "p": inst.ctx.p(),
                        "degree": audit.degree,
                        "bound_lhs": audit.lemma_bound.lhs,
                        "bound_rhs": audit.lemma_bound.rhs,
                    }));
                }
                match audit.factorization.as_ref().map(|f| f.form) {
                    Some(FactorizationForm::RootsOfB) => plain_eq += 1,
                    Some(FactorizationForm::RootsOfBAndZero) => zero_eq += 1,
                    None => {}
                }
                tight += usize::from(audit.lemma_bound.is_tight());
                strict += usize::from(audit.strong_lemma_bound.is_some());
            }
            Err(StepanovError::BoundViolation { violations, .. }) => {
                summary.failures.push(format!("{label}: {}", violations.join("; ")));
            }
            Err(e) => summary.failures.push(format!("{label}: {e}")),
        }
    }
    summary.details = json!({
        "seed": seed,
        "first_instance": first,
        "factorizations_roots_of_b": plain_eq,
        "factorizations_with_zero": zero_eq,
        "tight_bounds": tight,
        "lambda_in_g": strict,
    });
    summary
}

/// Case counts for [`identity_suite`].
#[derive(Debug, Clone, Copy)]
pub struct IdentityCounts {
    pub gf: usize,
    pub newton: usize,
    pub derivative: usize,
    pub harmonic: usize,
}

impl Default for IdentityCounts {
    fn default() -> Self {
        Self { gf: 500, newton: 500, derivative: 200, harmonic: 200 }
    }
}

fn random_units<R: Rng + ?Sized>(rng: &mut R, p: u32, max_len: usize) -> ElementSet {
    let mut pool: Vec<u32> = (1..p).collect();
    pool.shuffle(rng);
    let len = rng.gen_range(1..=max_len.min(pool.len()));
    ElementSet::from_residues(p, pool.into_iter().take(len))
}

/// Exact identity checks over random inputs with primes up to `pmax`.
pub fn identity_suite(seed: u64, counts: IdentityCounts, pmax: u32) -> Vec<SuiteSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let primes = odd_primes_in(13, pmax.max(13));
    let pick = |rng: &mut ChaCha8Rng| {
        let p = *primes.choose(rng).expect("primes");
        (p, FieldContext::new(p as u64).expect("prime"))
    };

    let mut gf = SuiteSummary::new("gf-identity");
    for _ in 0..counts.gf {
        let (p, ctx) = pick(&mut rng);
        let a = random_units(&mut rng, p, 8);
        gf.cases += 1;
        match stepanov::check_gf_identity(&ctx, &a) {
            Ok(v) if v.holds() => {}
            other => gf.failures.push(format!("p={p} A={a}: {other:?}")),
        }
    }

    let mut newton = SuiteSummary::new("newton-roundtrip");
    for _ in 0..counts.newton {
        let (p, ctx) = pick(&mut rng);
        let len = rng.gen_range(0..=8);
        let xs: Vec<u32> = (0..len).map(|_| rng.gen_range(0..p)).collect();
        let k = len.max(1);
        newton.cases += 1;
        let mut direct = sympoly::elementary_from_roots(&ctx, &xs);
        direct.resize(k + 1, 0);
        let ok = sympoly::elementary_from_power_sums(&ctx, &sympoly::power_sums(&ctx, &xs, k))
            .is_ok_and(|e| e[..] == direct[1..]);
        if !ok {
            newton.failures.push(format!("p={p} X={xs:?}"));
        }
    }

    let mut deriv = SuiteSummary::new("derivative-ratio");
    while deriv.cases < counts.derivative {
        let (p, ctx) = pick(&mut rng);
        let deg = rng.gen_range(0..=6);
        let h = DensePoly::from_coeffs(p, (0..=deg).map(|_| rng.gen_range(0..p)).collect());
        let b = rng.gen_range(0..p);
        let n = rng.gen_range(0..=4);
        if h.is_zero() || h.eval(&ctx, b) == 0 {
            continue;
        }
        deriv.cases += 1;
        match stepanov::check_derivative_ratio(&ctx, &h, b, n) {
            Ok(v) if v.holds() => {}
            other => deriv.failures.push(format!("p={p} h={h} b={b} n={n}: {other:?}")),
        }
    }

    let mut harmonic = SuiteSummary::new("harmonic-sum");
    for _ in 0..counts.harmonic {
        let (p, ctx) = pick(&mut rng);
        let b = random_units(&mut rng, p, 10);
        harmonic.cases += 1;
        match stepanov::harmonic_sum_identity(&ctx, &b) {
            Ok(v) if v.holds() => {}
            other => harmonic.failures.push(format!("p={p} B={b}: {other:?}")),
        }
    }
    vec![gf, newton, deriv, harmonic]
}

/// Order ranges for [`unity_suite`].
#[derive(Debug, Clone, Copy)]
pub struct UnityRanges {
    pub mmin: usize,
    pub product_claim_max: usize,
    pub search_max: usize,
    pub classify_max: usize,
}

impl Default for UnityRanges {
    fn default() -> Self {
        Self { mmin: 3, product_claim_max: 100, search_max: 50, classify_max: 8 }
    }
}

pub fn unity_suite(ranges: UnityRanges) -> Vec<SuiteSummary> {
    let mut claim = SuiteSummary::new("xk-product-claim");
    let mut pairs = 0;
    for m in ranges.mmin..=ranges.product_claim_max {
        let v = unity::check_xk_product_claim(m);
        claim.cases += 1;
        pairs += v.pairs;
        if !v.passed() {
            claim.failures.push(format!(
                "m={m}: {} disagreements, {} violations",
                v.disagreements.len(),
                v.violations.len()
            ));
        }
    }
    claim.details = json!({ "pairs": pairs });

    let mut search = SuiteSummary::new("2x2-decomposition");
    for m in ranges.mmin..=ranges.search_max {
        search.cases += 1;
        let found = unity::search_2x2_decomposition(m);
        if !found.is_empty() {
            search.failures.push(format!("m={m}: {found:?}"));
        }
    }

    let mut classify = SuiteSummary::new("circle-preserving-maps");
    let mut survivors = Vec::new();
    for m in ranges.mmin..=ranges.classify_max {
        classify.cases += 1;
        match unity::classify_circle_preserving_maps(m) {
            Ok(r) => {
                survivors.push(json!({ "m": m, "survivors": r.survivors.len() }));
                if !r.passed() {
                    classify.failures.push(format!(
                        "m={m}: {} survivors, {} unexplained",
                        r.survivors.len(),
                        r.unexplained.len()
                    ));
                }
            }
            Err(e) => classify.failures.push(format!("m={m}: {e}")),
        }
    }
    classify.details = json!({ "counts": survivors });
    vec![claim, search, classify]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_instances_satisfy_hypothesis() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let primes = odd_primes_in(5, 61);
        for _ in 0..200 {
            let inst = sample_instance(&mut rng, &primes);
            assert!(!inst.a.is_empty() && !inst.b.is_empty());
            for x in &inst.a {
                for y in &inst.b {
                    let v = inst.ctx.add(inst.ctx.mul(x, y), inst.lambda);
                    assert!(v == 0 || inst.g.contains(v));
                }
            }
        }
    }

    #[test]
    fn small_suites_pass() {
        let s = stepanov_suite(1, 50, 5, 41);
        assert!(s.passed(), "{:?}", s.failures);
        let counts = IdentityCounts { gf: 20, newton: 20, derivative: 20, harmonic: 20 };
        assert!(identity_suite(2, counts, 61).iter().all(SuiteSummary::passed));
        let ranges = UnityRanges { mmin: 3, product_claim_max: 10, search_max: 8, classify_max: 4 };
        assert!(unity_suite(ranges).iter().all(SuiteSummary::passed));
    }
}
