//! Clique-based searches: ratio and difference representations via maximal
//! clique enumeration, and maximum difference cliques via branch and bound.

use std::collections::BTreeSet;
use std::time::Instant;

use serde_json::json;

use super::{
    canonical_diff_rep, canonical_ratio_rep, DecompError, DecompWitness, SearchReport,
    TaskDescriptor, WitnessKind,
};
use crate::field::{FieldContext, FieldError, MultSubgroup};
use crate::set::{compose_sets, Composition, ElementSet};

/// Adjacency over residues; vertices outside the graph have no neighbours.
struct Graph {
    adj: Vec<ElementSet>,
}

impl Graph {
    fn new(p: u32, vertices: &ElementSet, edge: impl Fn(u32, u32) -> bool) -> Self {
        let adj = (0..p)
            .map(|x| {
                if !vertices.contains(x) {
                    return ElementSet::empty(p);
                }
                ElementSet::from_residues(p, vertices.iter().filter(|&y| y != x && edge(x, y)))
            })
            .collect();
        Self { adj }
    }

    fn neighbours(&self, x: u32) -> &ElementSet {
        &self.adj[x as usize]
    }

    /// Bron–Kerbosch with Tomita pivoting; returns every maximal clique
    /// that contains `root`.
    fn maximal_cliques_through(&self, root: u32, nodes: &mut u64) -> Vec<ElementSet> {
        let mut out = Vec::new();
        let mut r = vec![root];
        let p = self.neighbours(root).modulus();
        self.bron_kerbosch(&mut r, self.neighbours(root).clone(), ElementSet::empty(p), &mut out, nodes);
        out
    }

    fn bron_kerbosch(
        &self,
        r: &mut Vec<u32>,
        mut cand: ElementSet,
        mut excl: ElementSet,
        out: &mut Vec<ElementSet>,
        nodes: &mut u64,
    ) {
        *nodes += 1;
        if cand.is_empty() {
            if excl.is_empty() {
                out.push(ElementSet::from_residues(cand.modulus(), r.iter().copied()));
            }
            return;
        }
        let pivot = cand
            .union(&excl)
            .iter()
            .max_by_key(|&u| (cand.intersection_len(self.neighbours(u)), std::cmp::Reverse(u)))
            .expect("nonempty");
        let branch = cand.difference(self.neighbours(pivot));
        for v in &branch {
            let nv = self.neighbours(v);
            r.push(v);
            self.bron_kerbosch(r, cand.intersection(nv), excl.intersection(nv), out, nodes);
            r.pop();
            cand.remove(v);
            excl.insert(v);
        }
    }

    /// Maximum clique inside `cand` by branch and bound with a greedy
    /// colouring bound.
    fn maximum_clique(&self, cand: &[u32], nodes: &mut u64) -> Vec<u32> {
        let mut best = Vec::new();
        let mut current = Vec::new();
        self.expand(&mut current, cand.to_vec(), &mut best, nodes);
        best
    }

    fn expand(&self, current: &mut Vec<u32>, cand: Vec<u32>, best: &mut Vec<u32>, nodes: &mut u64) {
        *nodes += 1;
        let (order, colours) = self.colour_sort(&cand);
        for i in (0..order.len()).rev() {
            if current.len() + colours[i] <= best.len() {
                return;
            }
            let v = order[i];
            current.push(v);
            let nv = self.neighbours(v);
            let next: Vec<u32> = order[..i].iter().copied().filter(|&u| nv.contains(u)).collect();
            if next.is_empty() {
                if current.len() > best.len() {
                    *best = current.clone();
                }
            } else {
                self.expand(current, next, best, nodes);
            }
            current.pop();
        }
    }

    /// Greedy colouring; vertices come back grouped by colour class with the
    /// running class count as an upper bound on any clique among the
    /// vertices up to that position.
    fn colour_sort(&self, cand: &[u32]) -> (Vec<u32>, Vec<usize>) {
        let mut classes: Vec<Vec<u32>> = Vec::new();
        for &v in cand {
            let nv = self.neighbours(v);
            match classes.iter_mut().find(|c| c.iter().all(|&u| !nv.contains(u))) {
                Some(c) => c.push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut order = Vec::with_capacity(cand.len());
        let mut colours = Vec::with_capacity(cand.len());
        for (k, class) in classes.into_iter().enumerate() {
            for v in class {
                order.push(v);
                colours.push(k + 1);
            }
        }
        (order, colours)
    }
}

fn check_modulus(ctx: &FieldContext, t: &ElementSet) -> Result<(), DecompError> {
    if t.modulus() != ctx.p() {
        return Err(DecompError::Field(FieldError::ModulusMismatch {
            expected: ctx.p(),
            found: t.modulus(),
        }));
    }
    Ok(())
}

/// All `A ∋ 1` with `A/A = T`, one per scaling class and each maximal among
/// cliques of the compatibility graph.
pub fn find_ratio_representations(
    ctx: &FieldContext,
    t: &ElementSet,
) -> Result<SearchReport, DecompError> {
    let start = Instant::now();
    check_modulus(ctx, t)?;
    if t.contains(0) {
        return Err(DecompError::ZeroInTarget);
    }
    let p = ctx.p();
    let task = TaskDescriptor::new("ratio", p, None, json!({ "target": t }));
    let mut nodes = 0;
    let mut found = BTreeSet::new();
    if t.contains(1) {
        let vertices = ElementSet::from_residues(p, t.iter().filter(|&x| t.contains(ctx.inv(x))));
        let graph = Graph::new(p, &vertices, |x, y| t.contains(ctx.div(x, y)) && t.contains(ctx.div(y, x)));
        for m in graph.maximal_cliques_through(1, &mut nodes) {
            if compose_sets(ctx, &m, &m, Composition::Ratio)? == *t {
                found.insert(canonical_ratio_rep(ctx, &m));
            }
        }
    }
    Ok(SearchReport {
        task,
        witnesses: found
            .into_iter()
            .map(|a| rep_witness(p, t, WitnessKind::RatioRep, a))
            .collect(),
        exhaustive: true,
        nodes_explored: nodes,
        elapsed: start.elapsed(),
    })
}

/// All `A ∋ 0` with `A - A = T`, one per translation class and each maximal
/// among cliques of the compatibility graph.
pub fn find_difference_representations(
    ctx: &FieldContext,
    t: &ElementSet,
) -> Result<SearchReport, DecompError> {
    let start = Instant::now();
    check_modulus(ctx, t)?;
    if !t.contains(0) {
        return Err(DecompError::MissingZero);
    }
    let p = ctx.p();
    let task = TaskDescriptor::new("difference", p, None, json!({ "target": t }));
    let vertices = ElementSet::from_residues(p, t.iter().filter(|&x| t.contains(ctx.neg(x))));
    let graph = Graph::new(p, &vertices, |x, y| t.contains(ctx.sub(x, y)) && t.contains(ctx.sub(y, x)));
    let mut nodes = 0;
    let mut found = BTreeSet::new();
    for m in graph.maximal_cliques_through(0, &mut nodes) {
        if compose_sets(ctx, &m, &m, Composition::Difference)? == *t {
            found.insert(canonical_diff_rep(ctx, &m));
        }
    }
    Ok(SearchReport {
        task,
        witnesses: found
            .into_iter()
            .map(|a| rep_witness(p, t, WitnessKind::DiffRep, a))
            .collect(),
        exhaustive: true,
        nodes_explored: nodes,
        elapsed: start.elapsed(),
    })
}

fn rep_witness(p: u32, t: &ElementSet, kind: WitnessKind, a: ElementSet) -> DecompWitness {
    DecompWitness { p, target: t.clone(), kind, a, b: None, canonical: true }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueResult {
    pub size: usize,
    /// A maximum clique containing 0.
    pub clique: ElementSet,
    pub nodes: u64,
}

/// Largest `A ⊆ F_p` with `A - A ⊆ G ∪ {0}`.
///
/// Translations act transitively on the graph `x ~ y ⟺ x - y, y - x ∈ G`, so
/// some maximum clique contains 0 and the rest of it lies in
/// `{g ∈ G : -g ∈ G}`.
pub fn max_difference_clique(ctx: &FieldContext, g: &MultSubgroup) -> CliqueResult {
    let p = ctx.p();
    let allowed = g.elements().with(0);
    let vertices = ElementSet::full(p);
    let graph = Graph::new(p, &vertices, |x, y| {
        allowed.contains(ctx.sub(x, y)) && allowed.contains(ctx.sub(y, x))
    });
    let mut nodes = 0;
    let around_zero = graph.neighbours(0).to_vec();
    let rest = graph.maximum_clique(&around_zero, &mut nodes);
    let clique = ElementSet::from_residues(p, rest.into_iter().chain([0]));
    CliqueResult { size: clique.len(), clique, nodes }
}
