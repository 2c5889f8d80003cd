//! Exact decomposition searches over F_p: product and sum factorizations
//! `AB = S`, representations `A/A = T` and `A - A = T`, difference cliques,
//! and the drivers that sweep them over primes and subgroups.

mod audit;
mod clique;
pub mod naive;
mod search;

use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldContext, FieldError};
use crate::set::{compose_sets, Composition, ElementSet, SetError};

pub use audit::{
    audit_primes, audit_theorems, paley_clique_bound, reproduce_product_witness, AuditConfig, AuditKind, AuditOutcome, LambdaScope, TheoremViolation,
    ORACLE_PRIME_CAP,
};
pub use clique::{
    find_difference_representations, find_ratio_representations, max_difference_clique,
    CliqueResult,
};
pub use search::{find_exact_factorizations, FactorKind, SearchOptions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("product target contains 0")]
    ZeroInProductTarget,
    #[error("ratio target contains 0")]
    ZeroInTarget,
    #[error("difference target is missing 0")]
    MissingZero,
    #[error("no odd primes in [{pmin}, {pmax}]")]
    EmptyRange { pmin: u32, pmax: u32 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Set(#[from] SetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WitnessKind {
    Product,
    Sum,
    RatioRep,
    DiffRep,
    /// `A - A ⊆ target` rather than equality.
    DiffClique,
}

/// A verified solution of one search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompWitness {
    pub p: u32,
    pub target: ElementSet,
    pub kind: WitnessKind,
    pub a: ElementSet,
    pub b: Option<ElementSet>,
    pub canonical: bool,
}

impl DecompWitness {
    /// Recomputes the composition and compares it with the target.
    pub fn validate(&self, ctx: &FieldContext) -> bool {
        if ctx.p() != self.p || self.a.modulus() != self.p || self.target.modulus() != self.p {
            return false;
        }
        let ok = match (self.kind, &self.b) {
            (WitnessKind::Product | WitnessKind::Sum, Some(b)) => {
                let comp = if self.kind == WitnessKind::Product {
                    Composition::Product
                } else {
                    Composition::Sum
                };
                self.a.len() >= 2
                    && b.len() >= 2
                    && compose_sets(ctx, &self.a, b, comp).as_ref() == Ok(&self.target)
            }
            (WitnessKind::RatioRep, None) => {
                compose_sets(ctx, &self.a, &self.a, Composition::Ratio).as_ref() == Ok(&self.target)
            }
            (WitnessKind::DiffRep, None) => {
                compose_sets(ctx, &self.a, &self.a, Composition::Difference).as_ref()
                    == Ok(&self.target)
            }
            (WitnessKind::DiffClique, None) => compose_sets(ctx, &self.a, &self.a, Composition::Difference)
                .is_ok_and(|d| d.is_subset(&self.target)),
            _ => false,
        };
        ok && (!self.canonical || self.is_in_normal_form(ctx))
    }

    fn is_in_normal_form(&self, ctx: &FieldContext) -> bool {
        match (self.kind, &self.b) {
            (WitnessKind::Product, Some(b)) => {
                b.contains(1) && canonical_product(ctx, &self.a, b) == (self.a.clone(), b.clone())
            }
            (WitnessKind::Sum, Some(b)) => self.a <= *b,
            (WitnessKind::RatioRep, None) => canonical_ratio_rep(ctx, &self.a) == self.a,
            (WitnessKind::DiffRep | WitnessKind::DiffClique, None) => {
                canonical_diff_rep(ctx, &self.a) == self.a
            }
            _ => false,
        }
    }
}

/// What a report was computed for.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskDescriptor {
    pub name: String,
    pub p: Option<u32>,
    pub subgroup_order: Option<u32>,
    pub params: serde_json::Value,
}

impl TaskDescriptor {
    pub fn new(name: &str, p: u32, subgroup_order: Option<u32>, params: serde_json::Value) -> Self {
        Self { name: name.to_string(), p: Some(p), subgroup_order, params }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub task: TaskDescriptor,
    pub witnesses: Vec<DecompWitness>,
    /// False when a node budget cut the search short.
    pub exhaustive: bool,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

/// `c·X`
pub(crate) fn scale(ctx: &FieldContext, x: &ElementSet, c: u32) -> ElementSet {
    ElementSet::from_residues(ctx.p(), x.iter().map(|v| ctx.mul(v, c)))
}

/// `X + t`
pub(crate) fn translate(ctx: &FieldContext, x: &ElementSet, t: u32) -> ElementSet {
    ElementSet::from_residues(ctx.p(), x.iter().map(|v| ctx.add(v, t)))
}

/// Least `(b0·A, b0^{-1}·B)` over `b0 ∈ B`, comparing `A` first.
pub fn canonical_product(
    ctx: &FieldContext,
    a: &ElementSet,
    b: &ElementSet,
) -> (ElementSet, ElementSet) {
    b.iter()
        .map(|b0| (scale(ctx, a, b0), scale(ctx, b, ctx.inv(b0))))
        .min()
        .expect("nonempty B")
}

/// Least `m^{-1}·M` over `m ∈ M`.
pub fn canonical_ratio_rep(ctx: &FieldContext, m: &ElementSet) -> ElementSet {
    m.iter().map(|x| scale(ctx, m, ctx.inv(x))).min().expect("nonempty set")
}

/// Least `M - m` over `m ∈ M`.
pub fn canonical_diff_rep(ctx: &FieldContext, m: &ElementSet) -> ElementSet {
    m.iter().map(|x| translate(ctx, m, ctx.neg(x))).min().expect("nonempty set")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(p: u32, xs: &[u32]) -> ElementSet {
        ElementSet::from_residues(p, xs.iter().copied())
    }

    #[test]
    fn f19_pair_canonicalizes() {
        let c = FieldContext::new(19).unwrap();
        let (a, b) = canonical_product(&c, &set(19, &[1, 9]), &set(19, &[6, 9, 18]));
        assert_eq!(a, set(19, &[5, 9]));
        assert_eq!(b, set(19, &[1, 2, 7]));
    }

    #[test]
    fn f11_pair_is_already_canonical() {
        let c = FieldContext::new(11).unwrap();
        let (a, b) = (set(11, &[1, 7]), set(11, &[1, 2, 3]));
        assert_eq!(canonical_product(&c, &a, &b), (a.clone(), b.clone()));
        let w = DecompWitness {
            p: 11,
            target: set(11, &[1, 2, 3, 7, 10]),
            kind: WitnessKind::Product,
            a,
            b: Some(b),
            canonical: true,
        };
        assert!(w.validate(&c));
    }

    #[test]
    fn scaling_orbit_shares_a_canonical_form() {
        let c = FieldContext::new(11).unwrap();
        let (a, b) = (set(11, &[1, 7]), set(11, &[1, 2, 3]));
        let base = canonical_product(&c, &a, &b);
        for k in 1..11 {
            let moved = canonical_product(&c, &scale(&c, &a, k), &scale(&c, &b, c.inv(k)));
            assert_eq!(moved, base);
        }
    }

    #[test]
    fn rep_canonical_forms() {
        let c = FieldContext::new(13).unwrap();
        assert_eq!(canonical_diff_rep(&c, &set(13, &[5, 6])), set(13, &[0, 1]));
        assert_eq!(canonical_ratio_rep(&c, &set(13, &[3, 9])), set(13, &[1, 3]));
    }

    #[test]
    fn validate_rejects_wrong_witness() {
        let c = FieldContext::new(11).unwrap();
        let w = DecompWitness {
            p: 11,
            target: set(11, &[1, 2, 3]),
            kind: WitnessKind::Product,
            a: set(11, &[1, 7]),
            b: Some(set(11, &[1, 2])),
            canonical: false,
        };
        assert!(!w.validate(&c));
    }
}
