//! Brute-force enumerations used to cross-check the searches. Every routine
//! walks all subsets of a small universe, so they are only meant for
//! `p <= 23`.

use std::collections::BTreeSet;

use super::{canonical_diff_rep, canonical_product, canonical_ratio_rep, scale};
use crate::field::FieldContext;
use crate::set::{compose_sets, Composition, ElementSet};

/// Largest universe a subset walk will accept.
pub const MAX_UNIVERSE: usize = 24;

fn subsets(universe: &[u32]) -> impl Iterator<Item = Vec<u32>> + '_ {
    assert!(universe.len() <= MAX_UNIVERSE, "universe too large for brute force");
    (0u64..1 << universe.len()).map(move |mask| {
        universe
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &x)| x)
            .collect()
    })
}

/// Every `B ∋ 1` with `2 <= |B| <= |S|` paired with its maximal
/// `A = ∩ b^{-1} S`, kept when `|A| >= 2` and `AB = S`; canonical forms,
/// sorted.
pub fn product_factorizations(ctx: &FieldContext, s: &ElementSet) -> Vec<(ElementSet, ElementSet)> {
    let p = ctx.p();
    let preimage = |b: u32| scale(ctx, s, ctx.inv(b));
    let universe: Vec<u32> =
        (2..p).filter(|&b| s.intersection_len(&preimage(b)) >= 2).collect();
    let mut out = BTreeSet::new();
    for extra in subsets(&universe) {
        if extra.is_empty() || extra.len() + 1 > s.len() {
            continue;
        }
        let b = ElementSet::from_residues(p, extra.iter().copied().chain([1]));
        let a = extra.iter().fold(s.clone(), |acc, &x| acc.intersection(&preimage(x)));
        if a.len() >= 2 && compose_sets(ctx, &a, &b, Composition::Product).as_ref() == Ok(s) {
            out.insert(canonical_product(ctx, &a, &b));
        }
    }
    out.into_iter().collect()
}

/// Every `B ⊆ F_p` with `|B| >= 2` paired with its maximal `A = ∩ (S - b)`,
/// kept when `|A| >= 2` and `A + B = S`; stored as `(min, max)`, sorted.
pub fn sum_factorizations(ctx: &FieldContext, s: &ElementSet) -> Vec<(ElementSet, ElementSet)> {
    let p = ctx.p();
    let universe: Vec<u32> = (0..p).collect();
    let shifted = |b: u32| ElementSet::from_residues(p, s.iter().map(|x| ctx.sub(x, b)));
    let mut out = BTreeSet::new();
    for bs in subsets(&universe) {
        if bs.len() < 2 {
            continue;
        }
        let a = bs.iter().fold(ElementSet::full(p), |acc, &x| acc.intersection(&shifted(x)));
        let b = ElementSet::from_residues(p, bs);
        if a.len() >= 2 && compose_sets(ctx, &a, &b, Composition::Sum).as_ref() == Ok(s) {
            out.insert(if a <= b { (a, b) } else { (b, a) });
        }
    }
    out.into_iter().collect()
}

/// Canonical forms of every `A ⊆ F_p^*` with `A/A = T`.
pub fn ratio_representations(ctx: &FieldContext, t: &ElementSet) -> Vec<ElementSet> {
    let p = ctx.p();
    let universe: Vec<u32> = (2..p).collect();
    let mut out = BTreeSet::new();
    for extra in subsets(&universe) {
        let a = ElementSet::from_residues(p, extra.into_iter().chain([1]));
        if compose_sets(ctx, &a, &a, Composition::Ratio).as_ref() == Ok(t) {
            out.insert(canonical_ratio_rep(ctx, &a));
        }
    }
    out.into_iter().collect()
}

/// Canonical forms of every `A ⊆ F_p` with `A - A = T`.
pub fn difference_representations(ctx: &FieldContext, t: &ElementSet) -> Vec<ElementSet> {
    let p = ctx.p();
    let universe: Vec<u32> = (1..p).collect();
    let mut out = BTreeSet::new();
    for extra in subsets(&universe) {
        let a = ElementSet::from_residues(p, extra.into_iter().chain([0]));
        if compose_sets(ctx, &a, &a, Composition::Difference).as_ref() == Ok(t) {
            out.insert(canonical_diff_rep(ctx, &a));
        }
    }
    out.into_iter().collect()
}

/// Largest `A ∋ 0` with `A - A ⊆ G ∪ {0}`.
pub fn max_difference_clique(ctx: &FieldContext, g: &ElementSet) -> usize {
    let p = ctx.p();
    let allowed = g.with(0);
    let universe: Vec<u32> = (1..p).filter(|&x| g.contains(x) && g.contains(ctx.neg(x))).collect();
    subsets(&universe)
        .filter(|extra| {
            extra
                .iter()
                .all(|&x| extra.iter().all(|&y| allowed.contains(ctx.sub(x, y))))
        })
        .map(|extra| extra.len() + 1)
        .max()
        .unwrap_or(1)
}
