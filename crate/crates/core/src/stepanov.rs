//! The multiplicative Hanson–Petridis auxiliary polynomial and the checks
//! built around it.
//!
//! For `A = {a_1, .., a_n} ⊆ F_p^*` the weights `c_i` are the unique solution
//! of
//!
//! ```text
//! Σ c_i = 1,   Σ c_i a_i^j = 0  (1 <= j <= n-1)
//! ```
//!
//! and the auxiliary polynomial is
//!
//! ```text
//! f(x) = -λ^(n-1) + Σ c_i (a_i x + λ)^(n-1+|G|).
//! ```
//!
//! When `AB + λ ⊆ G ∪ {0}`, every `b ∈ B` is a root of `f` of high
//! multiplicity; [`audit_instance`] measures those multiplicities directly by
//! synthetic division and checks the degree bounds and factorizations that
//! follow from them.

use thiserror::Error;

use crate::field::{FieldContext, MultSubgroup};
use crate::poly::DensePoly;
use crate::set::ElementSet;

#[derive(Debug, Clone, Error)]
pub enum StepanovError {
    #[error("expected a nonempty subset of F_{0}^* (no zero residue)")]
    InvalidSet(u32),
    #[error("elimination and closed-form weights disagree")]
    InternalMismatch,
    #[error("lambda must be a nonzero residue")]
    ZeroLambda,
    #[error("exponent {degree} is not below p = {p} and the Lucas fallback is disabled")]
    DegreeOverflow { degree: usize, p: u32 },
    #[error("the zero polynomial has no finite root multiplicity")]
    ZeroPolynomial,
    #[error("hypothesis fails: {a} ∘ {b} shifted lands on {value}, outside G ∪ {{0}}")]
    HypothesisViolated { a: u32, b: u32, value: u32 },
    #[error("auxiliary polynomial vanished identically for A = {0}")]
    AuxiliaryVanished(ElementSet),
    #[error("bound violation: {}", .violations.join("; "))]
    BoundViolation { violations: Vec<String>, audit: Box<AuxAudit> },
    #[error("h({0}) = 0")]
    RootOfH(u32),
    #[error("n + 1 = {0} must stay below p")]
    FactorialOverflow(usize),
}

fn check_unit_set(ctx: &FieldContext, a: &ElementSet) -> Result<(), StepanovError> {
    if a.modulus() != ctx.p() || a.is_empty() || a.contains(0) {
        return Err(StepanovError::InvalidSet(ctx.p()));
    }
    Ok(())
}

/// Weights `c_i` paired with the ascending elements `a_i` of `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffSolution {
    pub elements: Vec<u32>,
    pub coeffs: Vec<u32>,
}

impl CoeffSolution {
    /// `Σ c_i a_i^k`
    pub fn moment(&self, ctx: &FieldContext, k: u64) -> u32 {
        self.elements
            .iter()
            .zip(&self.coeffs)
            .fold(0, |acc, (&a, &c)| ctx.add(acc, ctx.mul(c, ctx.pow(a, k))))
    }

    /// Checks the defining linear system exactly.
    pub fn satisfies_system(&self, ctx: &FieldContext) -> bool {
        let n = self.elements.len() as u64;
        self.moment(ctx, 0) == 1 && (1..n).all(|j| self.moment(ctx, j) == 0)
    }
}

/// Solves the transposed Vandermonde system by elimination and by the
/// explicit inverse, and insists they agree.
pub fn solve_coefficients(
    ctx: &FieldContext,
    a: &ElementSet,
) -> Result<CoeffSolution, StepanovError> {
    check_unit_set(ctx, a)?;
    let elements = a.to_vec();
    let by_elimination = solve_by_elimination(ctx, &elements).ok_or(StepanovError::InternalMismatch)?;
    let closed = closed_form_coefficients(ctx, &elements);
    if by_elimination != closed {
        return Err(StepanovError::InternalMismatch);
    }
    Ok(CoeffSolution { elements, coeffs: closed })
}

/// Gauss–Jordan on rows `Σ_i a_i^j c_i = [j == 0]`, `0 <= j < n`.
fn solve_by_elimination(ctx: &FieldContext, elements: &[u32]) -> Option<Vec<u32>> {
    let n = elements.len();
    let mut m: Vec<Vec<u32>> = (0..n)
        .map(|j| {
            let mut row: Vec<u32> = elements.iter().map(|&a| ctx.pow(a, j as u64)).collect();
            row.push(u32::from(j == 0));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| m[r][col] != 0)?;
        m.swap(col, pivot);
        let inv = ctx.inv(m[col][col]);
        for v in m[col].iter_mut() {
            *v = ctx.mul(*v, inv);
        }
        for r in 0..n {
            if r == col || m[r][col] == 0 {
                continue;
            }
            let factor = m[r][col];
            for k in col..=n {
                let sub = ctx.mul(factor, m[col][k]);
                m[r][k] = ctx.sub(m[r][k], sub);
            }
        }
    }
    Some(m.into_iter().map(|row| row[n]).collect())
}

/// `c_i = (-1)^(n-1) ∏ a_t / (a_i ∏_{j≠i} (a_i - a_j))`
fn closed_form_coefficients(ctx: &FieldContext, elements: &[u32]) -> Vec<u32> {
    let n = elements.len();
    let prod = elements.iter().fold(1, |acc, &a| ctx.mul(acc, a));
    let signed = if n % 2 == 1 { prod } else { ctx.neg(prod) };
    elements
        .iter()
        .enumerate()
        .map(|(i, &ai)| {
            let denom = elements
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(ai, |acc, (_, &aj)| ctx.mul(acc, ctx.sub(ai, aj)));
            ctx.div(signed, denom)
        })
        .collect()
}

/// Knobs for [`build_auxiliary_polynomial_with`].
#[derive(Debug, Clone, Copy)]
pub struct AuxOptions {
    /// Allow exponents `n - 1 + |G| >= p` by computing binomials with Lucas'
    /// theorem.
    pub lucas_fallback: bool,
}

impl Default for AuxOptions {
    fn default() -> Self {
        Self { lucas_fallback: true }
    }
}

pub fn build_auxiliary_polynomial(
    ctx: &FieldContext,
    a: &ElementSet,
    lambda: u32,
    g_order: u32,
) -> Result<DensePoly, StepanovError> {
    build_auxiliary_polynomial_with(ctx, a, lambda, g_order, AuxOptions::default())
}

pub fn build_auxiliary_polynomial_with(
    ctx: &FieldContext,
    a: &ElementSet,
    lambda: u32,
    g_order: u32,
    opts: AuxOptions,
) -> Result<DensePoly, StepanovError> {
    let sol = solve_coefficients(ctx, a)?;
    auxiliary_from_solution(ctx, &sol, lambda, g_order, opts)
}

fn auxiliary_from_solution(
    ctx: &FieldContext,
    sol: &CoeffSolution,
    lambda: u32,
    g_order: u32,
    opts: AuxOptions,
) -> Result<DensePoly, StepanovError> {
    let lambda = lambda % ctx.p();
    if lambda == 0 {
        return Err(StepanovError::ZeroLambda);
    }
    let n = sol.elements.len();
    let big_n = n - 1 + g_order as usize;
    if big_n >= ctx.p() as usize && !opts.lucas_fallback {
        return Err(StepanovError::DegreeOverflow { degree: big_n, p: ctx.p() });
    }
    // [x^k] Σ c_i (a_i x + λ)^N = C(N, k) λ^(N-k) Σ c_i a_i^k
    let mut coeffs: Vec<u32> = (0..=big_n)
        .map(|k| {
            let binom = ctx.binomial(big_n as u64, k as u64);
            let lam = ctx.pow(lambda, (big_n - k) as u64);
            ctx.mul(ctx.mul(binom, lam), sol.moment(ctx, k as u64))
        })
        .collect();
    coeffs[0] = ctx.sub(coeffs[0], ctx.pow(lambda, (n - 1) as u64));
    let f = DensePoly::from_coeffs(ctx.p(), coeffs);
    if (1..n).any(|k| f.coeff(k) != 0) {
        return Err(StepanovError::InternalMismatch);
    }
    Ok(f)
}

/// Largest `k` with `(x - b)^k | f`.
pub fn root_multiplicity(
    ctx: &FieldContext,
    f: &DensePoly,
    b: u32,
) -> Result<usize, StepanovError> {
    f.root_multiplicity(ctx, b).ok_or(StepanovError::ZeroPolynomial)
}

/// Measured multiplicity of a root against the multiplicity the theory
/// demands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootCheck {
    pub root: u32,
    pub multiplicity: usize,
    pub required: usize,
}

impl RootCheck {
    pub fn holds(&self) -> bool {
        self.multiplicity >= self.required
    }
}

/// An inequality `lhs <= rhs` between set-size expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundCheck {
    pub lhs: usize,
    pub rhs: usize,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }

    pub fn is_tight(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorizationForm {
    /// `f = C ∏_{b ∈ B ∩ (-λ/A)} (x - b)^(n-1) ∏_{other b} (x - b)^n`
    RootsOfB,
    /// `f = C (x ∏_{b ∈ B} (x - b))^n`
    RootsOfBAndZero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationCheck {
    pub form: FactorizationForm,
    /// `C = Σ c_i a_i^(n-1+|G|)`
    pub leading_constant: u32,
    pub matches: bool,
}

/// Everything measured for one `(A, B, λ, G)` instance.
#[derive(Debug, Clone)]
pub struct AuxAudit {
    pub a: ElementSet,
    pub b: ElementSet,
    pub lambda: u32,
    pub g_order: u32,
    pub lambda_in_g: bool,
    /// `AB + λ ⊆ G` (no product hits `-λ`).
    pub zero_free: bool,
    /// `|B ∩ (-λ A^{-1})|`
    pub r: usize,
    pub solution: CoeffSolution,
    pub f: DensePoly,
    pub degree: usize,
    pub multiplicities: Vec<RootCheck>,
    /// `mn - r <= deg f <= n - 1 + |G|`
    pub degree_lower: usize,
    pub degree_upper: usize,
    /// Only when `λ ∈ G` and `AB + λ ⊆ G`.
    pub zero_root: Option<RootCheck>,
    pub f_at_zero: u32,
    /// `(m + 1) n <= n - 1 + |G|`, same condition as `zero_root`.
    pub strong_degree_bound: Option<BoundCheck>,
    pub factorization: Option<FactorizationCheck>,
    /// `|A||B| <= |G| + r + |A| - 1`
    pub lemma_bound: BoundCheck,
    /// `|A||B| <= |G| + r - 1`, only when `λ ∈ G`.
    pub strong_lemma_bound: Option<BoundCheck>,
}

impl AuxAudit {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn m(&self) -> usize {
        self.b.len()
    }

    /// Human-readable list of every failed check; empty when all hold.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for rc in &self.multiplicities {
            if !rc.holds() {
                out.push(format!(
                    "root {} has multiplicity {} < {}",
                    rc.root, rc.multiplicity, rc.required
                ));
            }
        }
        if self.degree < self.degree_lower || self.degree > self.degree_upper {
            out.push(format!(
                "deg f = {} outside [{}, {}]",
                self.degree, self.degree_lower, self.degree_upper
            ));
        }
        if let Some(z) = &self.zero_root {
            if !z.holds() || self.f_at_zero != 0 {
                out.push(format!("0 is a root of multiplicity {} < {}", z.multiplicity, z.required));
            }
        }
        if let Some(b) = &self.strong_degree_bound {
            if !b.holds() {
                out.push(format!("(m+1)n = {} > {}", b.lhs, b.rhs));
            }
        }
        if let Some(fc) = &self.factorization {
            if !fc.matches || fc.leading_constant == 0 {
                out.push(format!("factorization {:?} does not reproduce f", fc.form));
            }
        }
        if !self.lemma_bound.holds() {
            out.push(format!("|A||B| = {} > {}", self.lemma_bound.lhs, self.lemma_bound.rhs));
        }
        if let Some(b) = &self.strong_lemma_bound {
            if !b.holds() {
                out.push(format!("|A||B| = {} > {} (lambda in G)", b.lhs, b.rhs));
            }
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.violations().is_empty()
    }
}

/// Runs every check on one instance with `AB + λ ⊆ G ∪ {0}`.
pub fn audit_instance(
    ctx: &FieldContext,
    a: &ElementSet,
    b: &ElementSet,
    lambda: u32,
    g: &MultSubgroup,
) -> Result<AuxAudit, StepanovError> {
    check_unit_set(ctx, a)?;
    check_unit_set(ctx, b)?;
    let lambda = lambda % ctx.p();
    if lambda == 0 {
        return Err(StepanovError::ZeroLambda);
    }
    let mut zero_free = true;
    for x in a {
        for y in b {
            let v = ctx.add(ctx.mul(x, y), lambda);
            if v == 0 {
                zero_free = false;
            } else if !g.contains(v) {
                return Err(StepanovError::HypothesisViolated { a: x, b: y, value: v });
            }
        }
    }

    let (n, m) = (a.len(), b.len());
    let g_order = g.order();
    let lambda_in_g = g.contains(lambda);
    let neg_lambda = ctx.neg(lambda);
    let zero_set = ElementSet::from_residues(ctx.p(), a.iter().map(|x| ctx.div(neg_lambda, x)));
    let zero_bs = b.intersection(&zero_set);
    let r = zero_bs.len();

    let solution = solve_coefficients(ctx, a)?;
    let f = auxiliary_from_solution(ctx, &solution, lambda, g_order, AuxOptions::default())?;
    let degree = f.degree().ok_or_else(|| StepanovError::AuxiliaryVanished(a.clone()))?;
    let big_n = n - 1 + g_order as usize;

    let multiplicities: Vec<RootCheck> = b
        .iter()
        .map(|y| RootCheck {
            root: y,
            multiplicity: f.root_multiplicity(ctx, y).expect("nonzero f"),
            required: if zero_bs.contains(y) { n - 1 } else { n },
        })
        .collect();

    let strong_case = lambda_in_g && zero_free;
    let zero_root = strong_case.then(|| RootCheck {
        root: 0,
        multiplicity: f.root_multiplicity(ctx, 0).expect("nonzero f"),
        required: n,
    });
    let strong_degree_bound = strong_case.then_some(BoundCheck { lhs: (m + 1) * n, rhs: big_n });

    let leading_constant = solution.moment(ctx, big_n as u64);
    let factorization = if m * n - r == big_n {
        let mut expected = DensePoly::constant(ctx.p(), leading_constant);
        for y in b {
            let e = if zero_bs.contains(y) { n - 1 } else { n };
            expected = expected.mul(ctx, &DensePoly::linear(ctx.p(), y).pow(ctx, e as u32));
        }
        Some(FactorizationCheck {
            form: FactorizationForm::RootsOfB,
            leading_constant,
            matches: expected == f,
        })
    } else if strong_case && (m + 1) * n == big_n {
        let base = DensePoly::from_roots(ctx, &b.with(0).to_vec());
        let expected = base.pow(ctx, n as u32).scale(ctx, leading_constant);
        Some(FactorizationCheck {
            form: FactorizationForm::RootsOfBAndZero,
            leading_constant,
            matches: expected == f,
        })
    } else {
        None
    };

    let g_sz = g_order as usize;
    let audit = AuxAudit {
        a: a.clone(),
        b: b.clone(),
        lambda,
        g_order,
        lambda_in_g,
        zero_free,
        r,
        f_at_zero: f.eval(ctx, 0),
        solution,
        f,
        degree,
        multiplicities,
        degree_lower: m * n - r,
        degree_upper: big_n,
        zero_root,
        strong_degree_bound,
        factorization,
        lemma_bound: BoundCheck { lhs: n * m, rhs: g_sz + r + n - 1 },
        strong_lemma_bound: lambda_in_g.then_some(BoundCheck { lhs: n * m, rhs: (g_sz + r).saturating_sub(1) }),
    };
    let violations = audit.violations();
    if violations.is_empty() {
        Ok(audit)
    } else {
        Err(StepanovError::BoundViolation { violations, audit: Box::new(audit) })
    }
}

/// Additive bound: if `A + B ⊆ G ∪ {0}` then `|A||B| <= |G| + |(-A) ∩ B|`.
pub fn check_hp_additive_bound(
    ctx: &FieldContext,
    a: &ElementSet,
    b: &ElementSet,
    g: &MultSubgroup,
) -> Result<BoundCheck, StepanovError> {
    for x in a {
        for y in b {
            let v = ctx.add(x, y);
            if v != 0 && !g.contains(v) {
                return Err(StepanovError::HypothesisViolated { a: x, b: y, value: v });
            }
        }
    }
    let neg_a = ElementSet::from_residues(ctx.p(), a.iter().map(|x| ctx.neg(x)));
    Ok(BoundCheck {
        lhs: a.len() * b.len(),
        rhs: g.order() as usize + neg_a.intersection_len(b),
    })
}

/// Two sides of an exact polynomial identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityVerdict {
    pub lhs: DensePoly,
    pub rhs: DensePoly,
}

impl IdentityVerdict {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Cross-multiplied generating-function identity for the weights:
/// `Σ_i c_i a_i^n ∏_{j≠i} (1 - a_j x) = (-1)^(n-1) ∏ a_i`.
pub fn check_gf_identity(
    ctx: &FieldContext,
    a: &ElementSet,
) -> Result<IdentityVerdict, StepanovError> {
    let sol = solve_coefficients(ctx, a)?;
    let p = ctx.p();
    let n = sol.elements.len();
    let factors: Vec<DensePoly> =
        sol.elements.iter().map(|&aj| DensePoly::from_coeffs(p, vec![1, ctx.neg(aj)])).collect();
    let mut lhs = DensePoly::zero(p);
    for (i, (&ai, &ci)) in sol.elements.iter().zip(&sol.coeffs).enumerate() {
        let term = factors
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(DensePoly::constant(p, ctx.mul(ci, ctx.pow(ai, n as u64))), |acc, (_, fj)| {
                acc.mul(ctx, fj)
            });
        lhs = lhs.add(ctx, &term);
    }
    let prod = sol.elements.iter().fold(1, |acc, &x| ctx.mul(acc, x));
    let rhs = DensePoly::constant(p, if n % 2 == 1 { prod } else { ctx.neg(prod) });
    Ok(IdentityVerdict { lhs, rhs })
}

/// Derivative data for `f = (x - b)^n h` at `x = b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivativeRatioVerdict {
    /// `f^(n)(b)` and `n! h(b)`
    pub nth: (u32, u32),
    /// `f^(n+1)(b)` and `(n+1)! h'(b)`
    pub next: (u32, u32),
    /// `h'(b)/h(b)` and `f^(n+1)(b) / ((n+1) f^(n)(b))`
    pub ratio: (u32, u32),
}

impl DerivativeRatioVerdict {
    pub fn holds(&self) -> bool {
        self.nth.0 == self.nth.1 && self.next.0 == self.next.1 && self.ratio.0 == self.ratio.1
    }
}

pub fn check_derivative_ratio(
    ctx: &FieldContext,
    h: &DensePoly,
    b: u32,
    n: usize,
) -> Result<DerivativeRatioVerdict, StepanovError> {
    if n + 1 >= ctx.p() as usize {
        return Err(StepanovError::FactorialOverflow(n + 1));
    }
    let hb = h.eval(ctx, b);
    if hb == 0 {
        return Err(StepanovError::RootOfH(b));
    }
    let f = DensePoly::linear(ctx.p(), b).pow(ctx, n as u32).mul(ctx, h);
    let fn_b = f.nth_derivative(ctx, n).eval(ctx, b);
    let fn1_b = f.nth_derivative(ctx, n + 1).eval(ctx, b);
    let dh_b = h.derivative(ctx).eval(ctx, b);
    let n1 = (n as u32 + 1) % ctx.p();
    Ok(DerivativeRatioVerdict {
        nth: (fn_b, ctx.mul(ctx.factorial(n), hb)),
        next: (fn1_b, ctx.mul(ctx.factorial(n + 1), dh_b)),
        ratio: (ctx.div(dh_b, hb), ctx.div(fn1_b, ctx.mul(n1, fn_b))),
    })
}

/// `Σ_{b ∈ B} b H(b)` against `m(m+1)/2`, where
/// `H(b) = 1/b + Σ_{b' ≠ b} 1/(b - b')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicVerdict {
    pub h_values: Vec<(u32, u32)>,
    pub sum: u32,
    pub expected: u32,
}

impl HarmonicVerdict {
    pub fn holds(&self) -> bool {
        self.sum == self.expected
    }
}

pub fn harmonic_sum_identity(
    ctx: &FieldContext,
    b: &ElementSet,
) -> Result<HarmonicVerdict, StepanovError> {
    check_unit_set(ctx, b)?;
    let elems = b.to_vec();
    let h_values: Vec<(u32, u32)> = elems
        .iter()
        .map(|&x| {
            let h = elems
                .iter()
                .filter(|&&y| y != x)
                .fold(ctx.inv(x), |acc, &y| ctx.add(acc, ctx.inv(ctx.sub(x, y))));
            (x, h)
        })
        .collect();
    let sum = h_values.iter().fold(0, |acc, &(x, h)| ctx.add(acc, ctx.mul(x, h)));
    let m = elems.len() as u64;
    let expected = (m * (m + 1) / 2 % ctx.p() as u64) as u32;
    Ok(HarmonicVerdict { h_values, sum, expected })
}
