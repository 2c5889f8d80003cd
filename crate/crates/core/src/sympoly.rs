//! Power sums, elementary symmetric polynomials and Newton's identities over
//! F_p. Multisets are plain slices; repetition is allowed.

use thiserror::Error;

use crate::field::FieldContext;
use crate::poly::DensePoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("index {k} is not invertible modulo {p}")]
    NonInvertibleIndex { k: usize, p: u32 },
    #[error("the zero polynomial has every residue as a root")]
    ZeroPolynomial,
}

/// A multiset together with its first `K` power sums and elementary
/// symmetric polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymData {
    pub p: u32,
    /// Sorted, with repetition.
    pub elements: Vec<u32>,
    /// `p_1..p_K`
    pub power_sums: Vec<u32>,
    /// `e_0..e_K`
    pub elementary: Vec<u32>,
}

impl SymData {
    pub fn new(ctx: &FieldContext, elements: &[u32], k: usize) -> Self {
        let mut elements: Vec<u32> = elements.iter().map(|&x| x % ctx.p()).collect();
        elements.sort_unstable();
        let mut elementary = elementary_from_roots(ctx, &elements);
        elementary.resize(k + 1, 0);
        Self {
            p: ctx.p(),
            power_sums: power_sums(ctx, &elements, k),
            elementary,
            elements,
        }
    }

    /// `k e_k = Σ_{i=1..k} (-1)^(i-1) e_(k-i) p_i` for every cached `k`.
    pub fn newton_holds(&self, ctx: &FieldContext) -> bool {
        (1..self.elementary.len()).all(|k| {
            let rhs = (1..=k).fold(0, |acc, i| {
                let t = ctx.mul(self.elementary[k - i], self.power_sums[i - 1]);
                if i % 2 == 1 {
                    ctx.add(acc, t)
                } else {
                    ctx.sub(acc, t)
                }
            });
            ctx.mul((k % ctx.p() as usize) as u32, self.elementary[k]) == rhs
        })
    }
}

/// `p_1..p_K` with `p_k = Σ x^k`.
pub fn power_sums(ctx: &FieldContext, xs: &[u32], k: usize) -> Vec<u32> {
    let mut sums = vec![0; k];
    for &x in xs {
        let mut pw = 1;
        for s in sums.iter_mut() {
            pw = ctx.mul(pw, x);
            *s = ctx.add(*s, pw);
        }
    }
    sums
}

/// `e_0..e_n` of the multiset, read off `∏ (1 + x t)`.
pub fn elementary_from_roots(ctx: &FieldContext, xs: &[u32]) -> Vec<u32> {
    let mut e = vec![1u32];
    for &x in xs {
        e.push(0);
        for k in (1..e.len()).rev() {
            e[k] = ctx.add(e[k], ctx.mul(e[k - 1], x));
        }
    }
    e
}

/// Newton recursion: returns `e_1..e_K`.
pub fn elementary_from_power_sums(ctx: &FieldContext, ps: &[u32]) -> Result<Vec<u32>, SymError> {
    let big_k = ps.len();
    if big_k >= ctx.p() as usize {
        return Err(SymError::NonInvertibleIndex { k: ctx.p() as usize, p: ctx.p() });
    }
    let mut e = vec![1u32];
    for k in 1..=big_k {
        let s = (1..=k).fold(0, |acc, i| {
            let t = ctx.mul(e[k - i], ps[i - 1]);
            if i % 2 == 1 {
                ctx.add(acc, t)
            } else {
                ctx.sub(acc, t)
            }
        });
        e.push(ctx.div(s, k as u32));
    }
    e.remove(0);
    Ok(e)
}

/// The monic degree-`K` polynomial `x^K - e_1 x^(K-1) + .. + (-1)^K e_K`
/// whose roots have the given first `K` power sums.
pub fn reconstruct_polynomial_from_power_sums(
    ctx: &FieldContext,
    ps: &[u32],
) -> Result<DensePoly, SymError> {
    let e = elementary_from_power_sums(ctx, ps)?;
    let big_k = e.len();
    let mut coeffs = vec![0u32; big_k + 1];
    coeffs[big_k] = 1;
    for (i, &ei) in e.iter().enumerate() {
        let k = i + 1;
        coeffs[big_k - k] = if k % 2 == 1 { ctx.neg(ei) } else { ei };
    }
    Ok(DensePoly::from_coeffs(ctx.p(), coeffs))
}

/// Roots in F_p with multiplicity, ascending.
pub fn roots_over_field(ctx: &FieldContext, f: &DensePoly) -> Result<Vec<u32>, SymError> {
    if f.is_zero() {
        return Err(SymError::ZeroPolynomial);
    }
    let mut roots = Vec::new();
    let mut rest = f.clone();
    for x in 0..ctx.p() {
        if rest.degree() == Some(0) {
            break;
        }
        if rest.eval(ctx, x) != 0 {
            continue;
        }
        loop {
            let (q, r) = rest.div_linear(ctx, x);
            if r != 0 {
                break;
            }
            roots.push(x);
            rest = q;
        }
    }
    Ok(roots)
}
