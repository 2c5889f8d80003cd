//! Dense univariate polynomials over F_p.

use std::fmt;

use crate::field::FieldContext;

/// Coefficients `c_0, c_1, ..` in increasing degree. The zero polynomial has
/// no coefficients; otherwise the last coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DensePoly {
    p: u32,
    coeffs: Vec<u32>,
}

impl DensePoly {
    pub fn zero(p: u32) -> Self {
        Self { p, coeffs: Vec::new() }
    }

    pub fn constant(p: u32, c: u32) -> Self {
        Self::from_coeffs(p, vec![c])
    }

    /// `x^k`
    pub fn monomial(p: u32, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        Self { p, coeffs }
    }

    /// `x - root`
    pub fn linear(p: u32, root: u32) -> Self {
        Self::from_coeffs(p, vec![(p - root % p) % p, 1])
    }

    /// Takes coefficients in increasing degree, reducing and trimming them.
    pub fn from_coeffs(p: u32, coeffs: Vec<u32>) -> Self {
        let mut out = Self { p, coeffs: coeffs.into_iter().map(|c| c % p).collect() };
        out.trim();
        out
    }

    pub fn from_signed(p: u32, coeffs: &[i64]) -> Self {
        Self::from_coeffs(p, coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u32).collect())
    }

    /// `∏ (x - r)` over the given roots (with repetition).
    pub fn from_roots(ctx: &FieldContext, roots: &[u32]) -> Self {
        roots
            .iter()
            .fold(Self::constant(ctx.p(), 1), |acc, &r| acc.mul(ctx, &Self::linear(ctx.p(), r)))
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> u32 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<u32> {
        self.coeffs.last().copied()
    }

    /// Horner evaluation.
    pub fn eval(&self, ctx: &FieldContext, x: u32) -> u32 {
        self.coeffs.iter().rev().fold(0, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    pub fn add(&self, ctx: &FieldContext, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| ctx.add(self.coeff(k), other.coeff(k))).collect();
        Self::from_coeffs(self.p, coeffs)
    }

    pub fn sub(&self, ctx: &FieldContext, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| ctx.sub(self.coeff(k), other.coeff(k))).collect();
        Self::from_coeffs(self.p, coeffs)
    }

    pub fn scale(&self, ctx: &FieldContext, c: u32) -> Self {
        Self::from_coeffs(self.p, self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    /// Schoolbook product; degrees here stay in the low hundreds.
    pub fn mul(&self, ctx: &FieldContext, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let p = ctx.p() as u64;
        let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % p;
            }
        }
        Self::from_coeffs(self.p, acc.into_iter().map(|c| c as u32).collect())
    }

    pub fn pow(&self, ctx: &FieldContext, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(self.p, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ctx, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ctx, &base);
            }
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self, ctx: &FieldContext) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| ctx.mul(c, (k as u64 % self.p as u64) as u32))
            .collect();
        Self::from_coeffs(self.p, coeffs)
    }

    /// `k`-th formal derivative.
    pub fn nth_derivative(&self, ctx: &FieldContext, k: usize) -> Self {
        (0..k).fold(self.clone(), |f, _| f.derivative(ctx))
    }

    /// Synthetic division by `x - b`: returns `(quotient, remainder)`.
    pub fn div_linear(&self, ctx: &FieldContext, b: u32) -> (Self, u32) {
        if self.is_zero() {
            return (Self::zero(self.p), 0);
        }
        let n = self.coeffs.len();
        let mut q = vec![0u32; n - 1];
        let mut carry = 0u32;
        for k in (0..n).rev() {
            let v = ctx.add(self.coeffs[k], ctx.mul(carry, b));
            if k == 0 {
                return (Self::from_coeffs(self.p, q), v);
            }
            q[k - 1] = v;
            carry = v;
        }
        unreachable!()
    }

    /// Largest `k` with `(x - b)^k | self`, by repeated synthetic division.
    /// Returns `None` for the zero polynomial.
    pub fn root_multiplicity(&self, ctx: &FieldContext, b: u32) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let mut f = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = f.div_linear(ctx, b);
            if r != 0 {
                return Some(k);
            }
            k += 1;
            f = q;
        }
    }
}

impl fmt::Debug for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (mod {})", self.p);
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}x")?,
                _ => write!(f, "{c}x^{k}")?,
            }
        }
        write!(f, " (mod {})", self.p)
    }
}

impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
