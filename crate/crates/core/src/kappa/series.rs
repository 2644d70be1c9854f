//! Truncated face-product series and the resulting bounds.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dyadic::DyadicRational;
use super::fixed::Fixed;
use crate::enumeration::{FaceDecomposition, FaceKind, Meander, PartialShape, ShapeSource};
use crate::error::{Error, Result};

/// `Cat_n = C(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> BigUint {
    num_integer::binomial(BigUint::from(2 * n), BigUint::from(n)) / BigUint::from(n + 1)
}

/// `C(n, floor(n/2))`, the number of simple walks of length `n` that never
/// go below their starting level.
pub fn central_binomial(n: u64) -> BigUint {
    num_integer::binomial(BigUint::from(n), BigUint::from(n / 2))
}

/// How the series terms are accumulated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    /// Exact up to `l_max = 64`, directed fixed point above.
    #[default]
    Auto,
    /// Exact dyadic rationals.
    Exact,
    /// 64-bit-fraction fixed point rounded toward zero: a lower bound of the
    /// exact truncated sum.
    Directed,
}

impl Arithmetic {
    pub const AUTO_EXACT_LIMIT: usize = 64;

    pub fn resolve(self, l_max: usize) -> Arithmetic {
        match self {
            Arithmetic::Auto if l_max <= Self::AUTO_EXACT_LIMIT => Arithmetic::Exact,
            Arithmetic::Auto => Arithmetic::Directed,
            a => a,
        }
    }
}

/// Scalars the face sums can be accumulated in. All values are nonnegative.
trait SeriesScalar: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    /// `Cat_s / 4^s` for `s < n`.
    fn catalan_weights(n: usize) -> Vec<Self>;
    /// `C(2s, s) / 4^s` for `s < n`.
    fn central_weights(n: usize) -> Vec<Self>;
    fn to_dyadic(&self) -> DyadicRational;
}

impl SeriesScalar for DyadicRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }

    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }

    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }

    fn is_zero(&self) -> bool {
        DyadicRational::is_zero(self)
    }

    fn catalan_weights(n: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(n);
        let mut cat = BigUint::one();
        for s in 0..n as u64 {
            if s > 0 {
                cat = cat * BigUint::from(2 * (2 * s - 1)) / BigUint::from(s + 1);
            }
            out.push(DyadicRational::new(BigInt::from(cat.clone()), 2 * s));
        }
        out
    }

    fn central_weights(n: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(n);
        let mut c = BigUint::one();
        for s in 0..n as u64 {
            if s > 0 {
                c = c * BigUint::from(2 * (2 * s - 1)) / BigUint::from(s);
            }
            out.push(DyadicRational::new(BigInt::from(c.clone()), 2 * s));
        }
        out
    }

    fn to_dyadic(&self) -> DyadicRational {
        self.clone()
    }
}

impl SeriesScalar for Fixed {
    fn zero() -> Self {
        Fixed::ZERO
    }

    fn one() -> Self {
        Fixed::ONE
    }

    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }

    fn sub(&self, o: &Self) -> Option<Self> {
        self.0.checked_sub(o.0).map(Fixed)
    }

    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn catalan_weights(n: usize) -> Vec<Self> {
        ratio_weights(n, |s| (2 * s - 1, 2 * s + 2))
    }

    fn central_weights(n: usize) -> Vec<Self> {
        ratio_weights(n, |s| (2 * s - 1, 2 * s))
    }

    fn to_dyadic(&self) -> DyadicRational {
        Fixed::to_dyadic(*self)
    }
}

/// `w_0 = 1`, `w_s = floor(w_{s-1} * num(s) / den(s))`; each step rounds
/// down, so `w_s` never exceeds the exact product.
fn ratio_weights(n: usize, ratio: impl Fn(u64) -> (u64, u64)) -> Vec<Fixed> {
    let mut out = Vec::with_capacity(n);
    let mut w = Fixed::ONE;
    for s in 0..n as u64 {
        if s > 0 {
            let (a, b) = ratio(s);
            w = w.checked_mul_ratio(a, b).expect("weights stay below one");
        }
        out.push(w);
    }
    out
}

fn overflow() -> Error {
    Error::resource("fixed-point accumulator overflowed; use exact arithmetic")
}

fn convolve<S: SeriesScalar>(a: &[S], b: &[S]) -> Result<Vec<S>> {
    let mut out = vec![S::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let p = x.mul(y).ok_or_else(overflow)?;
            out[i + j] = out[i + j].add(&p).ok_or_else(overflow)?;
        }
    }
    Ok(out)
}

/// Convolution with the all-ones vector of length `l_max + 1`: the effect of
/// a gap variable that appears in a single face.
fn window_sum<S: SeriesScalar>(a: &[S], l_max: usize) -> Result<Vec<S>> {
    let len = a.len() + l_max;
    let mut out = Vec::with_capacity(len);
    let mut acc = S::zero();
    for t in 0..len {
        if t < a.len() {
            acc = acc.add(&a[t]).ok_or_else(overflow)?;
        }
        if t > l_max {
            acc = acc.sub(&a[t - l_max - 1]).ok_or_else(overflow)?;
        }
        out.push(acc.clone());
    }
    Ok(out)
}

fn dot_shifted<S: SeriesScalar>(c: &[S], w: &[S], shift: usize) -> Result<S> {
    let mut acc = S::zero();
    for (t, x) in c.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let p = x.mul(&w[shift + t]).ok_or_else(overflow)?;
        acc = acc.add(&p).ok_or_else(overflow)?;
    }
    Ok(acc)
}

/// Sum over `l in [0, l_max]^gaps` of `prod_F w_F(sum_{g in I(F)} l_g)`.
///
/// Faces and shared gaps form a forest (the arcs are planar), so the sum is
/// evaluated by passing messages from leaves to a root face in each tree.
/// The message through gap `g` is indexed by the value of `l_g`.
fn face_sum<S: SeriesScalar>(fd: &FaceDecomposition, l_max: usize) -> Result<DyadicRational> {
    let nf = fd.faces.len();
    let mut gap_faces: Vec<Vec<usize>> = vec![Vec::new(); fd.gap_count];
    for (fi, f) in fd.faces.iter().enumerate() {
        for &g in &f.gaps {
            let slot = usize::try_from(g)
                .ok()
                .and_then(|g| gap_faces.get_mut(g))
                .ok_or_else(|| Error::invariant(format!("gap {g} out of range")))?;
            slot.push(fi);
        }
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nf];
    let mut pendant = vec![0usize; nf];
    let mut free_gaps = 0u64;
    for (g, fs) in gap_faces.iter().enumerate() {
        match fs[..] {
            [] => free_gaps += 1,
            [f] => pendant[f] += 1,
            [f, h] if f != h => {
                adj[f].push((g, h));
                adj[h].push((g, f));
            }
            _ => {
                return Err(Error::invariant(format!(
                    "gap {g} is shared by faces {fs:?}"
                )))
            }
        }
    }

    let widest = fd.faces.iter().map(|f| f.gaps.len()).max().unwrap_or(0);
    let table_len = widest * l_max + 1;
    let cat = S::catalan_weights(table_len);
    let cb = if fd.faces.iter().any(|f| f.kind != FaceKind::Bounded) {
        S::central_weights(table_len)
    } else {
        Vec::new()
    };

    let mut total = S::one();
    let mut visited = vec![false; nf];
    let mut parent_gap: Vec<Option<usize>> = vec![None; nf];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); nf];
    let mut messages: Vec<Vec<S>> = vec![Vec::new(); nf];
    for root in 0..nf {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut order = Vec::new();
        let mut stack = vec![root];
        while let Some(f) = stack.pop() {
            order.push(f);
            for &(g, h) in &adj[f] {
                if parent_gap[f] == Some(g) {
                    continue;
                }
                if visited[h] {
                    return Err(Error::invariant("faces and shared gaps contain a cycle"));
                }
                visited[h] = true;
                parent_gap[h] = Some(g);
                children[f].push(h);
                stack.push(h);
            }
        }
        for &f in order.iter().rev() {
            let mut c = vec![S::one()];
            for &ch in &children[f] {
                c = convolve(&c, &std::mem::take(&mut messages[ch]))?;
            }
            for _ in 0..pendant[f] {
                c = window_sum(&c, l_max)?;
            }
            let w = match fd.faces[f].kind {
                FaceKind::Bounded => &cat,
                FaceKind::OpenZero | FaceKind::OpenInfinity => &cb,
            };
            if f == root {
                let v = dot_shifted(&c, w, 0)?;
                total = total.mul(&v).ok_or_else(overflow)?;
            } else {
                messages[f] = (0..=l_max)
                    .map(|s| dot_shifted(&c, w, s))
                    .collect::<Result<_>>()?;
            }
        }
    }
    let mut out = total.to_dyadic();
    if free_gaps > 0 {
        out =
            &out * &DyadicRational::from_int(BigInt::from(l_max as u64 + 1).pow(free_gaps as u32));
    }
    Ok(out)
}

/// The truncated series `sum over l in [0, l_max]^gaps` of the product of
/// face weights: `Cat_m / 4^m` for bounded faces and `C(2m, m) / 4^m` for
/// the two open faces, where `m` is the sum of the face's gap variables.
pub fn face_product_sum(
    fd: &FaceDecomposition,
    l_max: usize,
    arithmetic: Arithmetic,
) -> Result<DyadicRational> {
    match arithmetic.resolve(l_max) {
        Arithmetic::Exact => face_sum::<DyadicRational>(fd, l_max),
        _ => face_sum::<Fixed>(fd, l_max),
    }
}

/// Truncated `P(S_0 = c) = 2^(1-4k) k * face_product_sum`; never exceeds the
/// exact probability.
pub fn prob_shape_lower(
    c: &Meander,
    l_max: usize,
    arithmetic: Arithmetic,
) -> Result<DyadicRational> {
    let k = c.k() as u64;
    let s = face_product_sum(&c.faces(), l_max, arithmetic)?;
    Ok((&s * &DyadicRational::from_int(k)).scale_pow2(1 - 4 * k as i64))
}

/// Truncated probability that the partial shape of the origin equals `p`:
/// `2^(-4k-2) * face_product_sum` over the completed shape.
pub fn prob_shape_upper_term(
    p: &PartialShape,
    l_max: usize,
    arithmetic: Arithmetic,
) -> Result<DyadicRational> {
    let k = p.k() as i64;
    let s = face_product_sum(&p.open_faces(), l_max, arithmetic)?;
    Ok(s.scale_pow2(-4 * k - 2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationSpec {
    /// Largest half-size of meanders and open shapes included.
    pub k_max: usize,
    /// Cap on every gap variable.
    pub l_max: usize,
    #[serde(default)]
    pub arithmetic: Arithmetic,
}

impl TruncationSpec {
    pub fn new(k_max: usize, l_max: usize) -> Self {
        TruncationSpec {
            k_max,
            l_max,
            arithmetic: Arithmetic::Auto,
        }
    }

    pub fn with_arithmetic(self, arithmetic: Arithmetic) -> Self {
        TruncationSpec { arithmetic, ..self }
    }
}

/// Contribution of one half-size `k` to either bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KContribution {
    pub k: usize,
    /// Number of meanders (lower bound) or open shapes (upper bound).
    pub count: usize,
    /// For the lower bound: `(1/k) sum_C P(S_0 = C)`. For the upper bound:
    /// `sum_P P(P_0 = P)`.
    pub value: DyadicRational,
    pub decimal: String,
}

const DIGITS: usize = 12;

fn contribution(k: usize, count: usize, value: DyadicRational) -> KContribution {
    let decimal = value.to_decimal_floor(DIGITS);
    KContribution {
        k,
        count,
        value,
        decimal,
    }
}

fn sum_parallel<T: Sync>(
    items: &[T],
    f: impl Fn(&T) -> Result<DyadicRational> + Sync + Send,
) -> Result<DyadicRational> {
    let terms: Vec<DyadicRational> = items.par_iter().map(f).collect::<Result<_>>()?;
    Ok(terms.into_iter().sum())
}

/// Per-`k` terms of the lower bound `sum_k (1/k) sum_C P(S_0 = C)`.
///
/// The factor `k` in the shape probability cancels `1/k`, so every term is
/// dyadic.
pub fn kappa_lower_terms(
    spec: &TruncationSpec,
    source: &dyn ShapeSource,
) -> Result<Vec<KContribution>> {
    (1..=spec.k_max)
        .map(|k| {
            let ms = source.meanders(k)?;
            let s = sum_parallel(&ms, |c| {
                face_product_sum(&c.faces(), spec.l_max, spec.arithmetic)
            })?;
            Ok(contribution(k, ms.len(), s.scale_pow2(1 - 4 * k as i64)))
        })
        .collect()
}

/// Per-`k` sums of the open-shape probabilities.
pub fn kappa_upper_terms(
    spec: &TruncationSpec,
    source: &dyn ShapeSource,
) -> Result<Vec<KContribution>> {
    (1..=spec.k_max)
        .map(|k| {
            let ps = source.partial_shapes(k)?;
            let s = sum_parallel(&ps, |p| {
                prob_shape_upper_term(p, spec.l_max, spec.arithmetic)
            })?;
            Ok(contribution(k, ps.len(), s))
        })
        .collect()
}

pub fn kappa_lower(spec: &TruncationSpec, source: &dyn ShapeSource) -> Result<DyadicRational> {
    Ok(kappa_lower_terms(spec, source)?
        .into_iter()
        .map(|c| c.value)
        .sum())
}

fn upper_from_terms(terms: &[KContribution]) -> DyadicRational {
    let sub: DyadicRational = terms.iter().map(|c| c.value.clone()).sum();
    (&DyadicRational::pow2_inv(2) - &sub).scale_pow2(1)
}

/// `2 (1/4 - sum_k sum_P P(P_0 = P))`, truncated; never below the exact
/// value of the constant.
pub fn kappa_upper(spec: &TruncationSpec, source: &dyn ShapeSource) -> Result<DyadicRational> {
    Ok(upper_from_terms(&kappa_upper_terms(spec, source)?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub lower: DyadicRational,
    pub upper: DyadicRational,
    /// Rounded down.
    pub decimal_lower: String,
    /// Rounded up.
    pub decimal_upper: String,
    pub spec: TruncationSpec,
    pub per_k_lower: Vec<KContribution>,
    pub per_k_upper: Vec<KContribution>,
}

impl BoundsReport {
    pub fn lower_f64(&self) -> f64 {
        self.lower.to_f64()
    }

    pub fn upper_f64(&self) -> f64 {
        self.upper.to_f64()
    }
}

pub fn kappa_bounds(spec: &TruncationSpec, source: &dyn ShapeSource) -> Result<BoundsReport> {
    let per_k_lower = kappa_lower_terms(spec, source)?;
    let per_k_upper = kappa_upper_terms(spec, source)?;
    let lower: DyadicRational = per_k_lower.iter().map(|c| c.value.clone()).sum();
    let upper = upper_from_terms(&per_k_upper);
    Ok(BoundsReport {
        decimal_lower: lower.to_decimal_floor(DIGITS),
        decimal_upper: upper.to_decimal_ceil(DIGITS),
        lower,
        upper,
        spec: *spec,
        per_k_lower,
        per_k_upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{enumerate_meanders, InMemory};
    use crate::systems::PairSystem;

    fn meander(u: &str, l: &str) -> Meander {
        Meander::new(PairSystem::parse(u, l).unwrap()).unwrap()
    }

    #[test]
    fn integer_sequences() {
        let cats: Vec<u64> = (0..=10).map(|n| catalan(n).try_into().unwrap()).collect();
        assert_eq!(cats, [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796]);
        assert_eq!(central_binomial(4), BigUint::from(6u32));
        assert_eq!(central_binomial(5), BigUint::from(10u32));
        assert_eq!(central_binomial(0), BigUint::from(1u32));
    }

    #[test]
    fn weight_tables_agree() {
        let exact = DyadicRational::catalan_weights(40);
        let fixed = Fixed::catalan_weights(40);
        for (e, f) in exact.iter().zip(&fixed) {
            let f = f.to_dyadic();
            assert!(&f <= e);
            assert!(e - &f < DyadicRational::pow2_inv(55));
        }
        let exact = DyadicRational::central_weights(40);
        let fixed = Fixed::central_weights(40);
        for (e, f) in exact.iter().zip(&fixed) {
            assert!(&f.to_dyadic() <= e);
        }
    }

    #[test]
    fn smallest_meander_terms() {
        let c = meander("LR", "LR");
        let s0 = face_product_sum(&c.faces(), 0, Arithmetic::Exact).unwrap();
        assert_eq!(s0, DyadicRational::from_int(1));
        assert_eq!(
            prob_shape_lower(&c, 0, Arithmetic::Exact).unwrap(),
            DyadicRational::pow2_inv(3)
        );
        // 1 + 1/16
        let s1 = face_product_sum(&c.faces(), 1, Arithmetic::Exact).unwrap();
        assert_eq!(s1, DyadicRational::new(17, 4));
    }

    #[test]
    fn first_open_shape_terms() {
        let shapes = InMemory.partial_shapes(1).unwrap();
        let a = prob_shape_upper_term(&shapes[0], 0, Arithmetic::Exact).unwrap();
        assert_eq!(a, DyadicRational::pow2_inv(6));
        let b = prob_shape_upper_term(&shapes[1], 20, Arithmetic::Exact).unwrap();
        let a = prob_shape_upper_term(&shapes[0], 20, Arithmetic::Exact).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exact_and_directed_close() {
        for c in enumerate_meanders(3).unwrap() {
            let e = face_product_sum(&c.faces(), 12, Arithmetic::Exact).unwrap();
            let d = face_product_sum(&c.faces(), 12, Arithmetic::Directed).unwrap();
            assert!(d <= e);
            assert!((&e - &d).to_f64() < 1e-12);
        }
    }

    #[test]
    fn trivial_specs() {
        let lo = kappa_lower(&TruncationSpec::new(1, 0), &InMemory).unwrap();
        assert_eq!(lo, DyadicRational::pow2_inv(3));
        let up = kappa_upper(&TruncationSpec::new(0, 10), &InMemory).unwrap();
        assert_eq!(up, DyadicRational::pow2_inv(1));
    }

    #[test]
    fn cycles_are_rejected() {
        use crate::enumeration::Face;
        use crate::systems::Side;
        let face = |gaps: Vec<i64>| Face {
            side: Side::Upper,
            arc: (0, 1),
            gaps,
            kind: FaceKind::Bounded,
        };
        let fd = FaceDecomposition {
            faces: vec![face(vec![0, 1]), face(vec![0, 1])],
            gap_count: 2,
        };
        assert!(matches!(
            face_product_sum(&fd, 3, Arithmetic::Exact),
            Err(Error::Invariant(_))
        ));
    }
}
