//! Subsets of F_p as bitsets, plus sumsets, product sets and the shifted
//! subgroup targets the searches work on.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::field::{FieldContext, MultSubgroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetError {
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("ratio set requested with 0 in the denominator set")]
    ZeroDivisor,
    #[error("affine scale must be nonzero")]
    ZeroScale,
    #[error("target parameter `{0}` must be nonzero")]
    ZeroParameter(&'static str),
}

/// A subset of `{0, .., p-1}` stored as a bitset with a cached cardinality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    p: u32,
    words: Vec<u64>,
    len: usize,
}

impl ElementSet {
    pub fn empty(p: u32) -> Self {
        Self { p, words: vec![0; (p as usize).div_ceil(64)], len: 0 }
    }

    /// Every residue `0..p`.
    pub fn full(p: u32) -> Self {
        Self::from_residues(p, 0..p)
    }

    /// Builds a set from arbitrary integers, reducing them modulo `p`.
    pub fn from_residues<I: IntoIterator<Item = u32>>(p: u32, items: I) -> Self {
        let mut s = Self::empty(p);
        for x in items {
            s.insert(x % p);
        }
        s
    }

    /// Like [`from_residues`](Self::from_residues) for signed input.
    pub fn from_signed<I: IntoIterator<Item = i64>>(p: u32, items: I) -> Self {
        Self::from_residues(p, items.into_iter().map(|x| x.rem_euclid(p as i64) as u32))
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        x < self.p && self.words[(x / 64) as usize] >> (x % 64) & 1 == 1
    }

    /// Inserts `x`; returns `false` if it was already present.
    pub fn insert(&mut self, x: u32) -> bool {
        assert!(x < self.p, "residue {x} out of range for p = {}", self.p);
        let w = &mut self.words[(x / 64) as usize];
        let bit = 1u64 << (x % 64);
        if *w & bit != 0 {
            return false;
        }
        *w |= bit;
        self.len += 1;
        true
    }

    pub fn remove(&mut self, x: u32) -> bool {
        if !self.contains(x) {
            return false;
        }
        self.words[(x / 64) as usize] &= !(1u64 << (x % 64));
        self.len -= 1;
        true
    }

    /// Copy of `self` with `x` removed.
    pub fn without(&self, x: u32) -> Self {
        let mut s = self.clone();
        s.remove(x);
        s
    }

    pub fn with(&self, x: u32) -> Self {
        let mut s = self.clone();
        s.insert(x);
        s
    }

    /// Residues in increasing order.
    pub fn iter(&self) -> Iter<'_> {
        Iter { words: &self.words, word_idx: 0, current: self.words.first().copied().unwrap_or(0) }
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<u32> {
        self.iter().next()
    }

    fn zip_words(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.p, other.p, "set operation across moduli");
        let words: Vec<u64> =
            self.words.iter().zip(&other.words).map(|(&a, &b)| op(a, b)).collect();
        let len = words.iter().map(|w| w.count_ones() as usize).sum();
        Self { p: self.p, words, len }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a & !b)
    }

    /// `|self ∩ other|` without allocating.
    pub fn intersection_len(&self, other: &Self) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.p == other.p && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        while self.current == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
        let bit = self.current.trailing_zeros();
        self.current &= self.current - 1;
        Some(self.word_idx as u32 * 64 + bit)
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = u32;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// Lexicographic order on the ascending element lists, then by modulus.
impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter()).then(self.p.cmp(&other.p))
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// The four binary set compositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Composition {
    Sum,
    Difference,
    Product,
    Ratio,
}

impl Composition {
    #[inline]
    pub fn apply(self, ctx: &FieldContext, x: u32, y: u32) -> u32 {
        match self {
            Composition::Sum => ctx.add(x, y),
            Composition::Difference => ctx.sub(x, y),
            Composition::Product => ctx.mul(x, y),
            Composition::Ratio => ctx.div(x, y),
        }
    }
}

fn check_operands(
    ctx: &FieldContext,
    x: &ElementSet,
    y: &ElementSet,
    kind: Composition,
) -> Result<(), SetError> {
    if x.p != ctx.p() {
        return Err(SetError::ModulusMismatch(ctx.p(), x.p));
    }
    if y.p != ctx.p() {
        return Err(SetError::ModulusMismatch(ctx.p(), y.p));
    }
    if kind == Composition::Ratio && y.contains(0) {
        return Err(SetError::ZeroDivisor);
    }
    Ok(())
}

/// `{x ∘ y : x ∈ X, y ∈ Y}` for the chosen composition.
pub fn compose_sets(
    ctx: &FieldContext,
    x: &ElementSet,
    y: &ElementSet,
    kind: Composition,
) -> Result<ElementSet, SetError> {
    check_operands(ctx, x, y, kind)?;
    let mut out = ElementSet::empty(ctx.p());
    // Invert once instead of per pair.
    let ys: Vec<u32> = match kind {
        Composition::Ratio => y.iter().map(|v| ctx.inv(v)).collect(),
        _ => y.to_vec(),
    };
    let op = if kind == Composition::Ratio { Composition::Product } else { kind };
    for a in x {
        for &b in &ys {
            out.insert(op.apply(ctx, a, b));
        }
    }
    Ok(out)
}

/// Number of pairs `(x, y)` producing each residue; indexed by residue.
pub fn representation_counts(
    ctx: &FieldContext,
    x: &ElementSet,
    y: &ElementSet,
    kind: Composition,
) -> Result<Vec<u32>, SetError> {
    check_operands(ctx, x, y, kind)?;
    let mut counts = vec![0u32; ctx.p() as usize];
    for a in x {
        for b in y {
            counts[kind.apply(ctx, a, b) as usize] += 1;
        }
    }
    Ok(counts)
}

/// `{ξx + μ : x ∈ X}`, optionally with 0 removed.
pub fn affine_image(
    ctx: &FieldContext,
    x: &ElementSet,
    xi: u32,
    mu: u32,
    drop_zero: bool,
) -> Result<ElementSet, SetError> {
    if x.p != ctx.p() {
        return Err(SetError::ModulusMismatch(ctx.p(), x.p));
    }
    let xi = xi % ctx.p();
    if xi == 0 {
        return Err(SetError::ZeroScale);
    }
    let mu = mu % ctx.p();
    let mut out = ElementSet::from_residues(ctx.p(), x.iter().map(|v| ctx.add(ctx.mul(xi, v), mu)));
    if drop_zero {
        out.remove(0);
    }
    Ok(out)
}

/// Shapes of shifted-subgroup targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TargetVariant {
    /// `(G - λ) \ {0}`
    ShiftMinusLambda { lambda: u32 },
    /// `(ξG + μ) \ {0}`
    XiShift { xi: u32, mu: u32 },
    /// `((ξG ∪ {0}) + μ) \ {0}`
    XiShiftWithZero { xi: u32, mu: u32 },
    /// `G ∪ {0}`
    GUnionZero,
}

impl TargetVariant {
    pub fn name(&self) -> &'static str {
        match self {
            TargetVariant::ShiftMinusLambda { .. } => "shift_minus_lambda",
            TargetVariant::XiShift { .. } => "xi_shift",
            TargetVariant::XiShiftWithZero { .. } => "xi_shift_with_zero",
            TargetVariant::GUnionZero => "g_union_zero",
        }
    }
}

pub fn build_target(g: &MultSubgroup, variant: TargetVariant) -> Result<ElementSet, SetError> {
    let ctx = g.ctx();
    let p = ctx.p();
    let nonzero = |name: &'static str, v: u32| {
        if v % p == 0 {
            Err(SetError::ZeroParameter(name))
        } else {
            Ok(v % p)
        }
    };
    match variant {
        TargetVariant::ShiftMinusLambda { lambda } => {
            let lambda = nonzero("lambda", lambda)?;
            affine_image(ctx, g.elements(), 1, ctx.neg(lambda), true)
        }
        TargetVariant::XiShift { xi, mu } => {
            let (xi, mu) = (nonzero("xi", xi)?, nonzero("mu", mu)?);
            affine_image(ctx, g.elements(), xi, mu, true)
        }
        TargetVariant::XiShiftWithZero { xi, mu } => {
            let (xi, mu) = (nonzero("xi", xi)?, nonzero("mu", mu)?);
            let with_zero = g.elements().with(0);
            affine_image(ctx, &with_zero, xi, mu, true)
        }
        TargetVariant::GUnionZero => Ok(g.elements().with(0)),
    }
}
