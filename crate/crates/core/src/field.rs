//! Arithmetic in the prime field F_p and its multiplicative subgroups.
//!
//! A [`FieldContext`] validates `p` once and carries the lookup tables every
//! other module leans on: inverses, factorials and a primitive root. The
//! context is cheap to clone (tables are shared) and immutable, so it can be
//! handed to worker threads freely.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::set::ElementSet;

/// Largest modulus accepted by [`FieldContext::new`].
pub const DEFAULT_PRIME_BOUND: u32 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {value} outside the supported range [3, {bound}]")]
    OutOfRange { value: u64, bound: u32 },
    #[error("{d} does not divide p - 1 = {p_minus_one}")]
    NotADivisor { d: u32, p_minus_one: u32 },
    #[error("set contains the zero residue")]
    ZeroElement,
    #[error("set is empty")]
    EmptySet,
    #[error("set lives in F_{found}, expected F_{expected}")]
    ModulusMismatch { expected: u32, found: u32 },
}

struct Tables {
    inv: Vec<u32>,
    fact: Vec<u32>,
    inv_fact: Vec<u32>,
}

/// A validated odd prime together with precomputed arithmetic tables.
#[derive(Clone)]
pub struct FieldContext {
    p: u32,
    primitive_root: u32,
    p_minus_one_factors: Arc<Vec<u32>>,
    tables: Arc<Tables>,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldContext")
            .field("p", &self.p)
            .field("primitive_root", &self.primitive_root)
            .finish()
    }
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for FieldContext {}

impl FieldContext {
    /// Builds the context for `p`, rejecting composites and anything outside
    /// `[3, DEFAULT_PRIME_BOUND]`.
    pub fn new(p: u64) -> Result<Self, FieldError> {
        Self::with_bound(p, DEFAULT_PRIME_BOUND)
    }

    pub fn with_bound(p: u64, bound: u32) -> Result<Self, FieldError> {
        if p < 3 || p > u64::from(bound) {
            return Err(FieldError::OutOfRange { value: p, bound });
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let p = p as u32;
        let factors = prime_factors(p - 1);
        let primitive_root = (2..p)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&q| pow_mod(g as u64, ((p - 1) / q) as u64, p as u64) != 1)
            })
            .unwrap_or(1); // p = 3 is covered by g = 2, so this never triggers.

        let n = p as usize;
        let mut inv = vec![0u32; n];
        inv[1] = 1;
        for x in 2..n {
            // inv[x] = -(p / x) * inv[p mod x]
            let q = (n / x) as u64;
            let r = n % x;
            inv[x] = ((p as u64 - q * inv[r] as u64 % p as u64) % p as u64) as u32;
        }
        let mut fact = vec![1u32; n];
        for k in 1..n {
            fact[k] = (fact[k - 1] as u64 * k as u64 % p as u64) as u32;
        }
        let mut inv_fact = vec![1u32; n];
        inv_fact[n - 1] = pow_mod(fact[n - 1] as u64, (p - 2) as u64, p as u64) as u32;
        for k in (1..n).rev() {
            inv_fact[k - 1] = (inv_fact[k] as u64 * k as u64 % p as u64) as u32;
        }

        Ok(Self {
            p,
            primitive_root,
            p_minus_one_factors: Arc::new(factors),
            tables: Arc::new(Tables { inv, fact, inv_fact }),
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn primitive_root(&self) -> u32 {
        self.primitive_root
    }

    /// Maps any signed integer to its residue in `[0, p)`.
    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        let s = x as u64 + y as u64;
        (if s >= self.p as u64 { s - self.p as u64 } else { s }) as u32
    }

    #[inline]
    pub fn sub(&self, x: u32, y: u32) -> u32 {
        if x >= y {
            x - y
        } else {
            x + self.p - y
        }
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        if x == 0 {
            0
        } else {
            self.p - x
        }
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        (x as u64 * y as u64 % self.p as u64) as u32
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, x: u32) -> u32 {
        assert!(x != 0 && x < self.p, "no inverse for {x} mod {}", self.p);
        self.tables.inv[x as usize]
    }

    #[inline]
    pub fn try_inv(&self, x: u32) -> Option<u32> {
        (x != 0 && x < self.p).then(|| self.tables.inv[x as usize])
    }

    #[inline]
    pub fn div(&self, x: u32, y: u32) -> u32 {
        self.mul(x, self.inv(y))
    }

    #[inline]
    pub fn pow(&self, x: u32, e: u64) -> u32 {
        pow_mod(x as u64, e, self.p as u64) as u32
    }

    /// `k!` for `k < p`.
    pub fn factorial(&self, k: usize) -> u32 {
        self.tables.fact[k]
    }

    pub fn inv_factorial(&self, k: usize) -> u32 {
        self.tables.inv_fact[k]
    }

    /// Binomial coefficient `C(n, k) mod p`. Uses the factorial tables when
    /// `n < p` and Lucas' theorem on base-p digits otherwise.
    pub fn binomial(&self, n: u64, k: u64) -> u32 {
        if k > n {
            return 0;
        }
        let p = self.p as u64;
        if n < p {
            return self.small_binomial(n as usize, k as usize);
        }
        let (mut n, mut k) = (n, k);
        let mut acc = 1u32;
        while n > 0 || k > 0 {
            let (nd, kd) = ((n % p) as usize, (k % p) as usize);
            if kd > nd {
                return 0;
            }
            acc = self.mul(acc, self.small_binomial(nd, kd));
            n /= p;
            k /= p;
        }
        acc
    }

    fn small_binomial(&self, n: usize, k: usize) -> u32 {
        let t = &self.tables;
        self.mul(t.fact[n], self.mul(t.inv_fact[k], t.inv_fact[n - k]))
    }

    /// Multiplicative order of a nonzero residue.
    pub fn order(&self, x: u32) -> u32 {
        assert!(x != 0, "zero has no multiplicative order");
        let mut ord = self.p - 1;
        for &q in self.p_minus_one_factors.iter() {
            while ord % q == 0 && self.pow(x, (ord / q) as u64) == 1 {
                ord /= q;
            }
        }
        ord
    }

    /// Divisors of `p - 1` in increasing order.
    pub fn group_order_divisors(&self) -> Vec<u32> {
        divisors(self.p - 1)
    }

    /// The unique subgroup of `F_p^*` with `d` elements.
    pub fn subgroup_of_order(&self, d: u32) -> Result<MultSubgroup, FieldError> {
        if d == 0 || (self.p - 1) % d != 0 {
            return Err(FieldError::NotADivisor { d, p_minus_one: self.p - 1 });
        }
        let index = (self.p - 1) / d;
        let generator = self.pow(self.primitive_root, index as u64);
        let mut elements = ElementSet::empty(self.p);
        let mut x = 1u32;
        for _ in 0..d {
            elements.insert(x);
            x = self.mul(x, generator);
        }
        debug_assert_eq!(elements.len(), d as usize);
        Ok(MultSubgroup { ctx: self.clone(), order: d, index, generator, elements })
    }

    /// One subgroup per divisor `d < p - 1`, ordered by `d`.
    pub fn proper_subgroups(&self) -> Vec<MultSubgroup> {
        self.group_order_divisors()
            .into_iter()
            .filter(|&d| d < self.p - 1)
            .map(|d| self.subgroup_of_order(d).expect("divisor"))
            .collect()
    }

    /// Subgroup of nonzero squares (index 2).
    pub fn quadratic_residues(&self) -> MultSubgroup {
        self.subgroup_of_order((self.p - 1) / 2).expect("p odd")
    }

    /// Decides whether `a` is a coset `rep * H` of some subgroup `H`.
    ///
    /// Returns the order of `H` and the smallest element of `a` as the
    /// representative.
    pub fn coset_test(&self, a: &ElementSet) -> Result<Option<CosetInfo>, FieldError> {
        if a.modulus() != self.p {
            return Err(FieldError::ModulusMismatch { expected: self.p, found: a.modulus() });
        }
        if a.contains(0) {
            return Err(FieldError::ZeroElement);
        }
        let rep = a.first().ok_or(FieldError::EmptySet)?;
        let d = a.len() as u32;
        if (self.p - 1) % d != 0 {
            return Ok(None);
        }
        let rep_inv = self.inv(rep);
        // A/rep is the order-d subgroup iff every element has order dividing d.
        let is_coset = a.iter().all(|x| self.pow(self.mul(x, rep_inv), d as u64) == 1);
        Ok(is_coset.then_some(CosetInfo { order: d, representative: rep }))
    }
}

/// Order and representative returned by [`FieldContext::coset_test`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CosetInfo {
    pub order: u32,
    pub representative: u32,
}

/// A multiplicative subgroup `G` of `F_p^*`.
#[derive(Clone, Debug)]
pub struct MultSubgroup {
    ctx: FieldContext,
    order: u32,
    index: u32,
    generator: u32,
    elements: ElementSet,
}

impl PartialEq for MultSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.p == other.ctx.p && self.order == other.order
    }
}

impl Eq for MultSubgroup {}

impl MultSubgroup {
    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn elements(&self) -> &ElementSet {
        &self.elements
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.contains(x)
    }

    pub fn is_proper(&self) -> bool {
        self.index > 1
    }

    /// `g^k` for `0 <= k < index`, one representative per coset of `G`.
    pub fn coset_representatives(&self) -> Vec<u32> {
        let g = self.ctx.primitive_root;
        let mut reps = Vec::with_capacity(self.index as usize);
        let mut x = 1;
        for _ in 0..self.index {
            reps.push(x);
            x = self.ctx.mul(x, g);
        }
        reps
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set is exact for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &q in &WITNESSES {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Odd primes in `[lo, hi]`.
pub fn odd_primes_in(lo: u32, hi: u32) -> Vec<u32> {
    (lo.max(3)..=hi).filter(|&n| is_prime(n as u64)).collect()
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn divisors(n: u32) -> Vec<u32> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(p: u32, x: u32) -> u32 {
        let mut y = x;
        let mut k = 1;
        while y != 1 {
            y = (y as u64 * x as u64 % p as u64) as u32;
            k += 1;
        }
        k
    }

    #[test]
    fn make_field_examples() {
        let f11 = FieldContext::new(11).unwrap();
        assert_eq!(f11.primitive_root(), 2);
        assert_eq!(brute_order(11, f11.primitive_root()), 10);

        assert_eq!(FieldContext::new(4).unwrap_err(), FieldError::NotPrime(4));

        let f3 = FieldContext::new(3).unwrap();
        assert_eq!(f3.primitive_root(), 2);
        assert_eq!(f3.subgroup_of_order(2).unwrap().elements().to_vec(), vec![1, 2]);
    }

    #[test]
    fn make_field_range_errors() {
        assert!(matches!(FieldContext::new(2), Err(FieldError::OutOfRange { .. })));
        assert!(matches!(FieldContext::new(1_048_583), Err(FieldError::OutOfRange { .. })));
        assert!(matches!(FieldContext::with_bound(101, 100), Err(FieldError::OutOfRange { .. })));
        assert!(FieldContext::new(1_048_573).is_ok()); // largest prime below 2^20
    }

    #[test]
    fn primality_agrees_with_trial_division() {
        for n in 0u64..5000 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "n = {n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn primitive_root_is_smallest_generator() {
        for p in odd_primes_in(3, 400) {
            let ctx = FieldContext::new(p as u64).unwrap();
            let g = ctx.primitive_root();
            assert_eq!(brute_order(p, g), p - 1);
            for h in 2..g {
                assert!(brute_order(p, h) < p - 1);
            }
        }
    }

    #[test]
    fn inverse_and_factorial_tables() {
        let ctx = FieldContext::new(101).unwrap();
        for x in 1..101 {
            assert_eq!(ctx.mul(x, ctx.inv(x)), 1);
            assert_eq!(ctx.inv(ctx.inv(x)), x);
        }
        let mut f = 1u64;
        for k in 0..101usize {
            if k > 0 {
                f = f * k as u64 % 101;
            }
            assert_eq!(ctx.factorial(k) as u64, f);
            assert_eq!(ctx.mul(ctx.factorial(k), ctx.inv_factorial(k)), 1);
        }
        assert_eq!(ctx.try_inv(0), None);
    }

    #[test]
    fn binomial_matches_pascal_including_lucas_range() {
        let ctx = FieldContext::new(7).unwrap();
        let mut row = vec![1u64];
        for n in 0..60u64 {
            for (k, &c) in row.iter().enumerate() {
                assert_eq!(ctx.binomial(n, k as u64) as u64, c % 7, "C({n},{k})");
            }
            let mut next = vec![1u64; row.len() + 1];
            for k in 1..row.len() {
                next[k] = (row[k - 1] + row[k]) % 7;
            }
            row = next;
        }
        assert_eq!(ctx.binomial(3, 5), 0);
    }

    #[test]
    fn subgroup_examples() {
        let f11 = FieldContext::new(11).unwrap();
        assert_eq!(f11.subgroup_of_order(5).unwrap().elements().to_vec(), vec![1, 3, 4, 5, 9]);
        let f19 = FieldContext::new(19).unwrap();
        assert_eq!(
            f19.subgroup_of_order(6).unwrap().elements().to_vec(),
            vec![1, 7, 8, 11, 12, 18]
        );
        let f13 = FieldContext::new(13).unwrap();
        assert_eq!(f13.subgroup_of_order(1).unwrap().elements().to_vec(), vec![1]);
        let squares: ElementSet =
            ElementSet::from_residues(13, (1..13u32).map(|x| x * x % 13));
        assert_eq!(f13.subgroup_of_order(6).unwrap().elements(), &squares);
        assert_eq!(
            f13.subgroup_of_order(5).unwrap_err(),
            FieldError::NotADivisor { d: 5, p_minus_one: 12 }
        );
    }

    #[test]
    fn subgroups_are_roots_of_unity() {
        for p in odd_primes_in(3, 101) {
            let ctx = FieldContext::new(p as u64).unwrap();
            for d in ctx.group_order_divisors() {
                let g = ctx.subgroup_of_order(d).unwrap();
                let roots = ElementSet::from_residues(
                    p,
                    (1..p).filter(|&x| ctx.pow(x, d as u64) == 1),
                );
                assert_eq!(g.elements(), &roots, "p={p} d={d}");
                assert!(g.contains(1));
                assert_eq!(ctx.order(g.generator()), d);
                for x in g.elements().iter() {
                    assert!(g.contains(ctx.inv(x)));
                    for y in g.elements().iter() {
                        assert!(g.contains(ctx.mul(x, y)));
                    }
                }
            }
        }
    }

    #[test]
    fn proper_subgroup_enumeration() {
        let orders = |p: u64| -> Vec<u32> {
            FieldContext::new(p).unwrap().proper_subgroups().iter().map(|g| g.order()).collect()
        };
        assert_eq!(orders(11), vec![1, 2, 5]);
        assert_eq!(orders(3), vec![1]);
        assert_eq!(orders(13), vec![1, 2, 3, 4, 6]);
    }

    #[test]
    fn coset_test_examples() {
        let ctx = FieldContext::new(13).unwrap();
        let a = ElementSet::from_residues(13, [2, 5, 6]);
        assert_eq!(ctx.coset_test(&a).unwrap(), Some(CosetInfo { order: 3, representative: 2 }));
        let h = ElementSet::from_residues(13, [1, 3, 9]);
        assert_eq!(ctx.coset_test(&h).unwrap(), Some(CosetInfo { order: 3, representative: 1 }));
        let no = ElementSet::from_residues(13, [1, 2]);
        assert_eq!(ctx.coset_test(&no).unwrap(), None);
        let zero = ElementSet::from_residues(13, [0, 1]);
        assert_eq!(ctx.coset_test(&zero).unwrap_err(), FieldError::ZeroElement);
        assert_eq!(ctx.coset_test(&ElementSet::empty(13)).unwrap_err(), FieldError::EmptySet);
    }

    #[test]
    fn coset_representatives_hit_every_coset() {
        let ctx = FieldContext::new(31).unwrap();
        for g in ctx.proper_subgroups() {
            let mut seen = ElementSet::empty(31);
            for r in g.coset_representatives() {
                for x in g.elements().iter() {
                    assert!(seen.insert(ctx.mul(r, x)));
                }
            }
            assert_eq!(seen.len(), 30);
        }
    }
}
