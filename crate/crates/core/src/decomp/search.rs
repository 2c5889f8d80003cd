//! Backtracking search for `A ∘ B = S` with `∘` product or sum.
//!
//! `B` grows in increasing residue order. For the current `B` the largest
//! admissible `A` is `∩_{b ∈ B} {x : x ∘ b ∈ S}`, and since `A ∘ B` only grows
//! with `A`, testing that maximal `A` decides the node.

use std::collections::BTreeSet;
use std::time::Instant;

use serde_json::json;

use super::{canonical_product, DecompError, DecompWitness, SearchReport, TaskDescriptor, WitnessKind};
use crate::field::FieldContext;
use crate::set::ElementSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorKind {
    Product,
    Sum,
}

impl FactorKind {
    fn apply(self, ctx: &FieldContext, x: u32, y: u32) -> u32 {
        match self {
            FactorKind::Product => ctx.mul(x, y),
            FactorKind::Sum => ctx.add(x, y),
        }
    }

    fn witness_kind(self) -> WitnessKind {
        match self {
            FactorKind::Product => WitnessKind::Product,
            FactorKind::Sum => WitnessKind::Sum,
        }
    }

    fn name(self) -> &'static str {
        match self {
            FactorKind::Product => "product",
            FactorKind::Sum => "sum",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Depth interval between coverage-potential checks.
    pub prune_interval: usize,
    /// Stop after this many nodes; the report is then marked non-exhaustive.
    pub node_budget: Option<u64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { prune_interval: 4, node_budget: None }
    }
}

struct Engine<'a> {
    ctx: &'a FieldContext,
    kind: FactorKind,
    target: &'a ElementSet,
    /// `pre[b] = {x : x ∘ b ∈ S}`
    pre: Vec<ElementSet>,
    opts: SearchOptions,
    nodes: u64,
    truncated: bool,
    found: BTreeSet<(ElementSet, ElementSet)>,
}

impl Engine<'_> {
    fn image(&self, a: &ElementSet, bs: impl Iterator<Item = u32>) -> ElementSet {
        let mut out = ElementSet::empty(self.ctx.p());
        for b in bs {
            for x in a {
                out.insert(self.kind.apply(self.ctx, x, b));
            }
        }
        out
    }

    fn record(&mut self, a: &ElementSet, b: &ElementSet) {
        let key = match self.kind {
            FactorKind::Product => canonical_product(self.ctx, a, b),
            FactorKind::Sum if a <= b => (a.clone(), b.clone()),
            FactorKind::Sum => (b.clone(), a.clone()),
        };
        self.found.insert(key);
    }

    fn dfs(&mut self, b: &mut Vec<u32>, a_cand: &ElementSet, live: &[u32]) {
        if self.truncated {
            return;
        }
        self.nodes += 1;
        if self.opts.node_budget.is_some_and(|cap| self.nodes > cap) {
            self.truncated = true;
            return;
        }
        if b.len() >= 2 && self.image(a_cand, b.iter().copied()).len() == self.target.len() {
            let bset = ElementSet::from_residues(self.ctx.p(), b.iter().copied());
            self.record(a_cand, &bset);
        }
        let need = self.target.len();
        for (i, &x) in live.iter().enumerate() {
            let next_a = a_cand.intersection(&self.pre[x as usize]);
            let next_live: Vec<u32> = live[i + 1..]
                .iter()
                .copied()
                .filter(|&y| next_a.intersection_len(&self.pre[y as usize]) >= 2)
                .collect();
            if next_a.len() * (b.len() + 1 + next_live.len()) < need {
                continue;
            }
            b.push(x);
            let depth = b.len();
            if depth % self.opts.prune_interval.max(1) == 0 && !self.can_still_cover(b, &next_a, &next_live) {
                b.pop();
                continue;
            }
            self.dfs(b, &next_a, &next_live);
            b.pop();
        }
    }

    /// Everything any descendant could still produce must contain `S`.
    fn can_still_cover(&self, b: &[u32], a: &ElementSet, live: &[u32]) -> bool {
        let mut reach = self.image(a, b.iter().copied());
        for &y in live {
            let part = a.intersection(&self.pre[y as usize]);
            for x in &part {
                reach.insert(self.kind.apply(self.ctx, x, y));
            }
        }
        self.target.is_subset(&reach)
    }
}

/// All nontrivial (`|A|, |B| >= 2`) solutions of `A ∘ B = S`.
///
/// Product solutions are reported once per scaling class `(cA, c^{-1}B)`,
/// normalized with `1 ∈ B` and the lexicographically least pair. Sum
/// solutions are reported as unordered pairs `A <= B`. In both cases `A` is
/// the largest set compatible with `B`.
pub fn find_exact_factorizations(
    ctx: &FieldContext,
    target: &ElementSet,
    kind: FactorKind,
    opts: SearchOptions,
) -> Result<SearchReport, DecompError> {
    let start = Instant::now();
    let p = ctx.p();
    if target.modulus() != p {
        return Err(DecompError::Field(crate::field::FieldError::ModulusMismatch {
            expected: p,
            found: target.modulus(),
        }));
    }
    if kind == FactorKind::Product && target.contains(0) {
        return Err(DecompError::ZeroInProductTarget);
    }
    let task = TaskDescriptor::new(kind.name(), p, None, json!({ "target": target }));
    let mut engine = Engine {
        ctx,
        kind,
        target,
        pre: (0..p)
            .map(|b| {
                ElementSet::from_residues(
                    p,
                    (0..p).filter(|&x| target.contains(kind.apply(ctx, x, b))),
                )
            })
            .collect(),
        opts,
        nodes: 0,
        truncated: false,
        found: BTreeSet::new(),
    };
    if target.len() >= 2 {
        let (mut b, root_a) = match kind {
            FactorKind::Product => (vec![1], target.clone()),
            FactorKind::Sum => (Vec::new(), ElementSet::full(p)),
        };
        let live: Vec<u32> = (0..p)
            .filter(|&x| !b.contains(&x) && root_a.intersection_len(&engine.pre[x as usize]) >= 2)
            .collect();
        engine.dfs(&mut b, &root_a, &live);
    }
    let witness_kind = kind.witness_kind();
    let witnesses = engine
        .found
        .into_iter()
        .map(|(a, b)| DecompWitness {
            p,
            target: target.clone(),
            kind: witness_kind,
            a,
            b: Some(b),
            canonical: true,
        })
        .collect();
    Ok(SearchReport {
        task,
        witnesses,
        exhaustive: !engine.truncated,
        nodes_explored: engine.nodes,
        elapsed: start.elapsed(),
    })
}
