//! Slow, independent reference implementations used as oracles.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;

/// Letters as booleans: `true` is `R`.
pub type Bits = Vec<bool>;

pub fn from_str(s: &str) -> Bits {
    s.chars().map(|c| c == 'R').collect()
}

pub fn to_str(w: &[bool]) -> String {
    w.iter().map(|&r| if r { 'R' } else { 'L' }).collect()
}

/// All words of length `n`, in lexicographic order with `L < R`.
pub fn all_words(n: usize) -> Vec<Bits> {
    (0u32..1 << n)
        .map(|x| (0..n).map(|i| x >> (n - 1 - i) & 1 == 1).collect())
        .collect()
}

pub fn is_balanced(w: &[bool]) -> bool {
    let mut h = 0i64;
    for &r in w {
        h += if r { -1 } else { 1 };
        if h < 0 {
            return false;
        }
    }
    h == 0
}

pub fn balanced_words(n: usize) -> Vec<Bits> {
    all_words(2 * n)
        .into_iter()
        .filter(|w| is_balanced(w))
        .collect()
}

/// Partner of every position under stack matching; `None` for unmatched.
pub fn partners(w: &[bool]) -> Vec<Option<usize>> {
    let mut p = vec![None; w.len()];
    let mut stack = Vec::new();
    for (i, &r) in w.iter().enumerate() {
        if !r {
            stack.push(i);
        } else if let Some(j) = stack.pop() {
            p[i] = Some(j);
            p[j] = Some(i);
        }
    }
    p
}

/// Components of a two-sided arc system, as sorted point lists, by
/// repeated graph search.
pub fn components(upper: &[bool], lower: &[bool]) -> Vec<Vec<usize>> {
    let (pu, pl) = (partners(upper), partners(lower));
    let n = upper.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![];
        let mut todo = vec![s];
        seen[s] = true;
        while let Some(p) = todo.pop() {
            comp.push(p);
            for q in [pu[p], pl[p]].into_iter().flatten() {
                if !seen[q] {
                    seen[q] = true;
                    todo.push(q);
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

pub fn catalan(n: u64) -> BigInt {
    let mut c = BigInt::from(1);
    for i in 0..n {
        c = c * BigInt::from(2 * (2 * i + 1)) / BigInt::from(i + 2);
    }
    c
}

pub fn central(n: u64) -> BigInt {
    let mut c = BigInt::from(1);
    for i in 0..n {
        c = c * BigInt::from((2 * i + 1) * (2 * i + 2)) / BigInt::from((i + 1) * (i + 1));
    }
    c
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn pow4(e: u64) -> BigInt {
    BigInt::from(1) << (2 * e)
}

/// Every vector in `[0, bound]^dims`, in odometer order.
pub fn grid(dims: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..dims {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=bound).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}
