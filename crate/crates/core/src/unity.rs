//! Roots of unity in the complex plane: product distinctness for the shifted
//! points `ζ^k - 1`, Möbius maps that preserve a root-of-unity group, and the
//! residual 2×2 decomposition search.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

/// Absolute tolerance for unit-magnitude quantities.
pub const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnityError {
    #[error("interpolation points must be pairwise distinct")]
    DegenerateInput,
    #[error("order {m} outside the supported range {lo}..={hi}")]
    OutOfRange { m: usize, lo: usize, hi: usize },
}

/// The `m`-th roots of unity `ζ^k = exp(2πik/m)`.
#[derive(Debug, Clone)]
pub struct UnityGroup {
    m: usize,
    elements: Vec<Complex64>,
}

impl UnityGroup {
    pub fn new(m: usize) -> Self {
        assert!(m >= 1, "group order must be positive");
        let elements = (0..m)
            .map(|k| if k == 0 { Complex64::new(1.0, 0.0) } else { root_of_unity(k as i64, m) })
            .collect();
        Self { m, elements }
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn elements(&self) -> &[Complex64] {
        &self.elements
    }

    pub fn element(&self, k: i64) -> Complex64 {
        self.elements[k.rem_euclid(self.m as i64) as usize]
    }

    /// `x_k = ζ^k - 1`
    pub fn x(&self, k: usize) -> Complex64 {
        self.element(k as i64) - 1.0
    }

    /// Index `j` with `|z - ζ^j| <= TOL`.
    pub fn index_of(&self, z: Complex64) -> Option<usize> {
        self.elements.iter().position(|&g| (g - z).norm() <= TOL)
    }
}

fn root_of_unity(k: i64, m: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)
}

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    pub fn finite(re: f64, im: f64) -> Self {
        ExtComplex::Finite(Complex64::new(re, im))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (ExtComplex::Infinity, ExtComplex::Infinity) => true,
            (ExtComplex::Finite(a), ExtComplex::Finite(b)) => (a - b).norm() <= tol,
            _ => false,
        }
    }
}

impl From<Complex64> for ExtComplex {
    fn from(z: Complex64) -> Self {
        ExtComplex::Finite(z)
    }
}

/// `z ↦ (az + b) / (cz + d)` with `ad - bc ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self::new(one, zero, zero, one)
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    fn scale_hint(&self) -> f64 {
        [self.a, self.b, self.c, self.d].iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, z: ExtComplex) -> ExtComplex {
        let eps = 1e-14 * self.scale_hint().max(1.0);
        match z {
            ExtComplex::Infinity => {
                if self.c.norm() <= eps {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite(self.a / self.c)
                }
            }
            ExtComplex::Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm() <= eps * (1.0 + z.norm()) {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }
}

/// Map sending `z1, z2, z3` to `0, 1, ∞`.
fn to_standard(z: [ExtComplex; 3]) -> MobiusMap {
    use ExtComplex::{Finite, Infinity};
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match z {
        [Infinity, Finite(z2), Finite(z3)] => MobiusMap::new(zero, z2 - z3, one, -z3),
        [Finite(z1), Infinity, Finite(z3)] => MobiusMap::new(one, -z1, one, -z3),
        [Finite(z1), Finite(z2), Infinity] => MobiusMap::new(one, -z1, zero, z2 - z1),
        [Finite(z1), Finite(z2), Finite(z3)] => {
            MobiusMap::new(z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1))
        }
        _ => unreachable!("at most one point at infinity after the distinctness check"),
    }
}

fn distinct(pts: &[ExtComplex; 3]) -> bool {
    (0..3).all(|i| (i + 1..3).all(|j| !pts[i].approx_eq(&pts[j], TOL)))
}

/// The unique Möbius map sending `z[i]` to `w[i]`, via cross-ratios.
pub fn mobius_fit(z: [ExtComplex; 3], w: [ExtComplex; 3]) -> Result<MobiusMap, UnityError> {
    if !distinct(&z) || !distinct(&w) {
        return Err(UnityError::DegenerateInput);
    }
    Ok(to_standard(w).inverse().compose(&to_standard(z)))
}

/// `T ∘ ι ∘ T^{-1}` with `T(z) = (z - μ)/ξ` and `ι(z) = 1/z`.
pub fn conjugated_inversion(xi: Complex64, mu: Complex64) -> MobiusMap {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let t = MobiusMap::new(one, -mu, zero, xi);
    let iota = MobiusMap::new(zero, one, one, zero);
    t.compose(&iota).compose(&t.inverse())
}

/// Outcome of checking that `x_k x_l = x_t x_r` forces `{k, l} = {t, r}`.
#[derive(Debug, Clone, PartialEq)]
pub struct XkVerdict {
    pub m: usize,
    pub pairs: usize,
    /// Unordered index pairs that one criterion calls equal and the other
    /// does not.
    pub disagreements: Vec<((usize, usize), (usize, usize))>,
    /// Distinct index pairs with equal products under the exact criterion.
    pub violations: Vec<((usize, usize), (usize, usize))>,
    pub max_product_norm: f64,
}

impl XkVerdict {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty() && self.violations.is_empty()
    }
}

/// Compares all products `x_k x_l` numerically, and independently through
/// the exact criterion: writing `x_k = 2i sin(πk/m) e^{πik/m}`, two products
/// agree exactly when `k + l ≡ t + r (mod 2m)` and `|k - l| = |t - r|`.
pub fn check_xk_product_claim(m: usize) -> XkVerdict {
    let g = UnityGroup::new(m.max(1));
    let pairs: Vec<(usize, usize)> =
        (1..m).flat_map(|k| (k..m).map(move |l| (k, l))).collect();

    let mut by_key: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for &(k, l) in &pairs {
        by_key.entry(((k + l) % (2 * m), l - k)).or_default().push((k, l));
    }
    let mut exact = BTreeSet::new();
    for group in by_key.values() {
        for (i, &u) in group.iter().enumerate() {
            for &v in &group[i + 1..] {
                exact.insert((u, v));
            }
        }
    }

    let mut products: Vec<(Complex64, (usize, usize))> =
        pairs.iter().map(|&(k, l)| (g.x(k) * g.x(l), (k, l))).collect();
    let max_product_norm = products.iter().map(|(z, _)| z.norm()).fold(0.0, f64::max);
    products.sort_by(|x, y| x.0.re.total_cmp(&y.0.re));
    let mut numeric = BTreeSet::new();
    for i in 0..products.len() {
        for j in i + 1..products.len() {
            if products[j].0.re - products[i].0.re > TOL {
                break;
            }
            if (products[j].0 - products[i].0).norm() <= TOL {
                let (u, v) = (products[i].1, products[j].1);
                numeric.insert((u.min(v), u.max(v)));
            }
        }
    }

    XkVerdict {
        m,
        pairs: pairs.len(),
        disagreements: exact.symmetric_difference(&numeric).copied().collect(),
        violations: exact.into_iter().collect(),
        max_product_norm,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DihedralKind {
    /// `z ↦ ζ^j z`
    Rotation,
    /// `z ↦ ζ^j / z`
    Reflection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DihedralMap {
    pub kind: DihedralKind,
    pub j: usize,
    pub map: MobiusMap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub m: usize,
    /// Maps fitted and tested.
    pub candidates: usize,
    pub survivors: Vec<DihedralMap>,
    /// Survivors that matched no rotation or reflection.
    pub unexplained: Vec<MobiusMap>,
}

impl ClassificationReport {
    pub fn passed(&self) -> bool {
        self.unexplained.is_empty() && self.survivors.len() == 2 * self.m
    }
}

pub const CLASSIFY_MIN: usize = 3;
pub const CLASSIFY_MAX: usize = 12;

fn preserves_circle(map: &MobiusMap, m: usize, extra: &[Complex64]) -> bool {
    let samples = (0..4 * m).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / (4 * m) as f64));
    samples.chain(extra.iter().copied()).all(|z| match map.apply(z.into()) {
        ExtComplex::Finite(w) => (w.norm() - 1.0).abs() <= TOL,
        ExtComplex::Infinity => false,
    })
}

/// Image indices of `G` under `map`, if `map` permutes `G`.
fn permutation_of(map: &MobiusMap, g: &UnityGroup) -> Option<Vec<usize>> {
    let mut seen = vec![false; g.order()];
    let mut image = Vec::with_capacity(g.order());
    for &z in g.elements() {
        let ExtComplex::Finite(w) = map.apply(z.into()) else { return None };
        let j = g.index_of(w)?;
        if std::mem::replace(&mut seen[j], true) {
            return None;
        }
        image.push(j);
    }
    Some(image)
}

/// Enumerates every Möbius map carrying `(1, ζ, ζ^2)` to an ordered triple of
/// distinct points of `G`, keeps those preserving the unit circle and `G`,
/// and matches each against the rotations and reflections of `G`.
///
/// A map preserving `G` is determined by where it sends `1, ζ, ζ^2`, so the
/// fixed source triple already sees every such map exactly once.
pub fn classify_circle_preserving_maps(m: usize) -> Result<ClassificationReport, UnityError> {
    if !(CLASSIFY_MIN..=CLASSIFY_MAX).contains(&m) {
        return Err(UnityError::OutOfRange { m, lo: CLASSIFY_MIN, hi: CLASSIFY_MAX });
    }
    let g = UnityGroup::new(m);
    let src = [g.element(0), g.element(1), g.element(2)];
    let mut candidates = 0;
    let mut survivors = Vec::new();
    let mut unexplained = Vec::new();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                if i == j || j == k || i == k {
                    continue;
                }
                let dst = [g.element(i as i64), g.element(j as i64), g.element(k as i64)];
                candidates += 1;
                let map = mobius_fit(src.map(ExtComplex::from), dst.map(ExtComplex::from))?;
                if !preserves_circle(&map, m, &src) {
                    continue;
                }
                let Some(image) = permutation_of(&map, &g) else { continue };
                match classify_dihedral(&image, m) {
                    Some((kind, j)) => survivors.push(DihedralMap { kind, j, map }),
                    None => unexplained.push(map),
                }
            }
        }
    }
    Ok(ClassificationReport { m, candidates, survivors, unexplained })
}

/// Matches a permutation of `Z/m` (as the action on exponents) against
/// `k ↦ j + k` and `k ↦ j - k`.
fn classify_dihedral(image: &[usize], m: usize) -> Option<(DihedralKind, usize)> {
    let j = image[0];
    if (0..m).all(|k| image[k] == (j + k) % m) {
        return Some((DihedralKind::Rotation, j));
    }
    if (0..m).all(|k| image[k] == (j + m - k) % m) {
        return Some((DihedralKind::Reflection, j));
    }
    None
}

/// Exhausts `A = {a1, a2}`, `B = {b1, b2}` with `AB = (G - 1) \ {0}` by
/// assigning an index `k_ij` with `a_i b_j = x_{k_ij}` to each product.
/// Consistency requires `x_{k11} x_{k22} = x_{k12} x_{k21}`; distinctness of
/// the `a`s and `b`s forbids equal indices along a row or column. Returns
/// every `[k11, k12, k21, k22]` that survives and covers all of `1..m`.
pub fn search_2x2_decomposition(m: usize) -> Vec<[usize; 4]> {
    if m < 2 {
        return Vec::new();
    }
    let g = UnityGroup::new(m);
    let xs: Vec<Complex64> = (0..m).map(|k| g.x(k)).collect();
    let mut out = Vec::new();
    for k11 in 1..m {
        for k12 in 1..m {
            if k12 == k11 {
                continue;
            }
            for k21 in 1..m {
                if k21 == k11 {
                    continue;
                }
                for k22 in 1..m {
                    if k22 == k12 || k22 == k21 {
                        continue;
                    }
                    let lhs = xs[k11] * xs[k22];
                    let rhs = xs[k12] * xs[k21];
                    if (lhs - rhs).norm() > TOL {
                        continue;
                    }
                    let covered: BTreeSet<usize> = [k11, k12, k21, k22].into_iter().collect();
                    if covered.len() == m - 1 {
                        out.push([k11, k12, k21, k22]);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn group_basics() {
        let g = UnityGroup::new(4);
        assert_eq!(g.elements()[0], c(1.0, 0.0));
        assert!(g.elements().iter().all(|z| (z.norm() - 1.0).abs() < TOL));
        // x_1 x_3 = (i - 1)(-i - 1) = 2, x_2 x_2 = 4
        assert!((g.x(1) * g.x(3) - c(2.0, 0.0)).norm() < TOL);
        assert!((g.x(2) * g.x(2) - c(4.0, 0.0)).norm() < TOL);
    }

    #[test]
    fn xk_claim_small() {
        for m in [3, 4, 5, 12] {
            let v = check_xk_product_claim(m);
            assert!(v.passed(), "{v:?}");
            assert!(v.max_product_norm <= 4.0 + TOL);
        }
        assert_eq!(check_xk_product_claim(3).pairs, 3);
    }

    #[test]
    fn fit_identity() {
        let pts = [ExtComplex::finite(0.0, 0.0), ExtComplex::finite(1.0, 0.0), ExtComplex::Infinity];
        let f = mobius_fit(pts, pts).unwrap();
        for z in [c(2.0, 3.0), c(-0.5, 0.1)] {
            assert!(f.apply(z.into()).approx_eq(&z.into(), 1e-12));
        }
        assert_eq!(f.apply(ExtComplex::Infinity), ExtComplex::Infinity);
    }

    #[test]
    fn fit_rotation() {
        let g = UnityGroup::new(5);
        let f = mobius_fit(
            [g.element(0), g.element(1), g.element(2)].map(ExtComplex::from),
            [g.element(1), g.element(2), g.element(3)].map(ExtComplex::from),
        )
        .unwrap();
        assert!(f.apply(g.element(3).into()).approx_eq(&g.element(4).into(), 1e-9));
        let z = c(0.3, -0.7);
        assert!(f.apply(z.into()).approx_eq(&(g.element(1) * z).into(), 1e-9));
    }

    #[test]
    fn fit_rejects_repeats() {
        let p = ExtComplex::finite(1.0, 0.0);
        let q = ExtComplex::finite(2.0, 0.0);
        assert_eq!(mobius_fit([p, p, q], [p, q, ExtComplex::Infinity]), Err(UnityError::DegenerateInput));
        assert_eq!(
            mobius_fit([p, q, ExtComplex::Infinity], [ExtComplex::Infinity, q, ExtComplex::Infinity]),
            Err(UnityError::DegenerateInput)
        );
    }

    #[test]
    fn conjugated_inversion_sends_infinity() {
        let (xi, mu) = (c(2.0, 1.0), c(-0.5, 3.0));
        let psi = conjugated_inversion(xi, mu);
        assert!(psi.apply(ExtComplex::Infinity).approx_eq(&(-mu / xi).into(), 1e-12));
        // an involution
        let z = c(0.7, 0.2);
        assert!(psi.apply(psi.apply(z.into())).approx_eq(&z.into(), 1e-9));
    }

    #[test]
    fn fit_inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut rnd = || c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let f = mobius_fit([rnd(), rnd(), rnd()].map(ExtComplex::from), [rnd(), rnd(), rnd()].map(ExtComplex::from))
            .unwrap();
        let id = f.compose(&f.inverse());
        for _ in 0..50 {
            let z = rnd();
            assert!(id.apply(z.into()).approx_eq(&z.into(), 1e-9));
        }
    }

    #[test]
    fn classification_small() {
        for m in [3, 5] {
            let r = classify_circle_preserving_maps(m).unwrap();
            assert!(r.passed(), "m = {m}: {} survivors", r.survivors.len());
            assert!(r.survivors.iter().any(|s| s.kind == DihedralKind::Rotation && s.j == 0));
        }
        assert!(classify_circle_preserving_maps(2).is_err());
        assert!(classify_circle_preserving_maps(13).is_err());
    }

    #[test]
    fn no_2x2_decompositions() {
        for m in 2..=12 {
            assert!(search_2x2_decomposition(m).is_empty(), "m = {m}");
        }
    }
}
