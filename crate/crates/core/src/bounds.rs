//! Closed-form coding bounds, the greedy shrinkage sequence and asymptotic
//! rate curves. Integer bounds use exact big-integer arithmetic.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::errorspace::count_errors;
use crate::pauli::Dim;

/// `ceil(log2(c))` for `c >= 1`.
pub fn ceil_log2(c: &BigUint) -> u64 {
    if c <= &BigUint::one() {
        0
    } else {
        (c - 1u32).bits()
    }
}

fn qubit_count(n: usize, t: usize) -> BigUint {
    count_errors(n, t, Dim::QUBIT)
}

/// Largest `k >= 0` with `2^k * sum_{j<=t} 3^j C(n,j) <= 2^n`, or -1 if none.
pub fn hamming_max_k(n: usize, t: usize) -> i64 {
    let k = n as i64 - ceil_log2(&qubit_count(n, t)) as i64;
    if k < 0 {
        -1
    } else {
        k
    }
}

/// `n - 4t`, or -1 when negative.
pub fn singleton_max_k(n: usize, t: usize) -> i64 {
    let k = n as i64 - 4 * t as i64;
    if k < 0 {
        -1
    } else {
        k
    }
}

/// Largest `k` with `2^(n-k) >= sum_{j<=2t} 3^j C(n,j)`. May be negative.
pub fn gv_k(n: usize, t: usize) -> Result<i64> {
    if 2 * t > n {
        return Err(Error::Precondition(format!(
            "Gilbert-Varshamov bound needs 2t <= n, got n = {n}, t = {t}"
        )));
    }
    Ok(n as i64 - ceil_log2(&qubit_count(n, 2 * t)) as i64)
}

/// Guaranteed yield of the greedy two-way protocol: `n - ceil(log2 |E|) - 2`.
/// Negative values mean the guarantee is vacuous.
pub fn thm2_k(n: usize, t: usize) -> i64 {
    n as i64 - ceil_log2(&qubit_count(n, t)) as i64 - 2
}

/// Step budget behind [`thm2_k`]: `ceil(log2 |E|) + 2`.
pub fn greedy_step_bound(n: usize, t: usize) -> u64 {
    ceil_log2(&qubit_count(n, t)) + 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsRow {
    pub n: usize,
    pub t: usize,
    pub hamming_k: i64,
    pub singleton_k: i64,
    /// -1 when `2t > n`.
    pub gv_k: i64,
    pub thm2_k: i64,
}

impl BoundsRow {
    pub fn compute(n: usize, t: usize) -> BoundsRow {
        BoundsRow {
            n,
            t,
            hamming_k: hamming_max_k(n, t),
            singleton_k: singleton_max_k(n, t),
            gv_k: gv_k(n, t).unwrap_or(-1),
            thm2_k: thm2_k(n, t),
        }
    }
}

/// Rows for every `(n, t)` pair, n-major.
pub fn bounds_table(
    ns: impl IntoIterator<Item = usize>,
    ts: impl IntoIterator<Item = usize> + Clone,
) -> Vec<BoundsRow> {
    ns.into_iter()
        .flat_map(|n| {
            ts.clone()
                .into_iter()
                .map(move |t| BoundsRow::compute(n, t))
        })
        .collect()
}

/// First `len` terms of the sequence `m_0 = 1`, `m_i` = largest integer with
/// `(m_i + sqrt(m_i)) / 2 <= m_{i-1} + 1`.
///
/// With `B = 2 m_{i-1} + 2` the condition is `sqrt(m) <= B - m`, checked
/// exactly as `m <= B` and `m <= (B - m)^2`.
pub fn mi_sequence(len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    out.push(1u64);
    while out.len() < len {
        let b = 2 * *out.last().unwrap() as u128 + 2;
        let feasible = |m: u128| m <= b && m <= (b - m) * (b - m);
        // feasibility is monotone decreasing in m on [0, B]
        let (mut lo, mut hi) = (1u128, b);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if feasible(mid) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        out.push(u64::try_from(lo).expect("sequence term overflows u64"));
    }
    out
}

/// Binary entropy in bits, with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatePoint {
    pub x: f64,
    pub rate_2epp: f64,
    pub rate_gv: f64,
    #[serde(skip)]
    pub h: f64,
}

impl RatePoint {
    pub fn at(x: f64) -> RatePoint {
        let l3 = 3f64.log2();
        let h = binary_entropy(x);
        let rate_2epp = (1.0 - x * l3 - h).clamp(0.0, 1.0);
        let rate_gv = (1.0 - 2.0 * x * l3 - binary_entropy(2.0 * x)).clamp(0.0, 1.0);
        RatePoint {
            x,
            rate_2epp,
            rate_gv,
            h,
        }
    }
}

/// `points` evenly spaced samples of `t/n` over `[0, 1/2]`.
pub fn rate_table(points: usize) -> Result<Vec<RatePoint>> {
    if points < 2 {
        return Err(Error::Precondition(format!(
            "rate table needs at least 2 points, got {points}"
        )));
    }
    Ok((0..points)
        .map(|i| RatePoint::at(0.5 * i as f64 / (points - 1) as f64))
        .collect())
}

/// Fixed six-decimal rendering with trailing zeros trimmed (at least one
/// decimal kept), so output is locale-free and byte-stable.
pub fn format_decimal(v: f64) -> String {
    let s = format!("{v:.6}");
    let trimmed = s.trim_end_matches('0');
    if trimmed.ends_with('.') {
        format!("{trimmed}0")
    } else {
        trimmed.to_string()
    }
}

pub fn bounds_csv(rows: &[BoundsRow]) -> String {
    let mut out = String::from("n,t,hamming_k,singleton_k,gv_k,thm2_k\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n, r.t, r.hamming_k, r.singleton_k, r.gv_k, r.thm2_k
        ));
    }
    out
}

pub fn rates_csv(points: &[RatePoint]) -> String {
    let mut out = String::from("x,rate_2epp,rate_gv\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{}\n",
            format_decimal(p.x),
            format_decimal(p.rate_2epp),
            format_decimal(p.rate_gv)
        ));
    }
    out
}

pub fn mi_csv(seq: &[u64]) -> String {
    let mut out = String::from("i,m_i\n");
    for (i, m) in seq.iter().enumerate() {
        out.push_str(&format!("{i},{m}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: smallest power of two not below `c`, by doubling.
    fn brute_ceil_log2(c: u128) -> u64 {
        let mut j = 0;
        while (1u128 << j) < c {
            j += 1;
        }
        j
    }

    fn small_count(n: u32, t: u32) -> u128 {
        (0..=t)
            .map(|j| 3u128.pow(j) * (0..j as u128).fold(1, |a, i| a * (n as u128 - i) / (i + 1)))
            .sum()
    }

    /// Oracle: largest k with 2^k * count <= 2^n by direct search.
    fn brute_hamming(n: u32, t: u32) -> i64 {
        let c = small_count(n, t);
        (0..=n as i64)
            .rev()
            .find(|&k| (c << k) <= (1u128 << n))
            .unwrap_or(-1)
    }

    #[test]
    fn ceil_log2_matches_doubling() {
        for c in 1u32..2000 {
            assert_eq!(ceil_log2(&BigUint::from(c)), brute_ceil_log2(c as u128));
        }
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_max_k(10, 2), 1);
        // k = 1 needs n >= 10 for t = 2; at n = 9 only k = 0 fits (352 <= 512)
        assert_eq!(hamming_max_k(9, 2), 0);
        assert_eq!(brute_hamming(9, 2), 0);
        for n in 0..20 {
            assert_eq!(hamming_max_k(n, 0), n as i64);
        }
        assert_eq!(hamming_max_k(6, 1), 1);
        assert_eq!(hamming_max_k(3, 2), -1);
    }

    #[test]
    fn hamming_matches_brute_force() {
        for n in 1..=40u32 {
            for t in 0..=n.min(6) {
                assert_eq!(
                    hamming_max_k(n as usize, t as usize),
                    brute_hamming(n, t),
                    "{n} {t}"
                );
            }
        }
    }

    #[test]
    fn hamming_monotonicity() {
        for n in 1..60 {
            for t in 0..n.min(10) {
                assert!(hamming_max_k(n + 1, t) >= hamming_max_k(n, t));
                assert!(hamming_max_k(n, t + 1) <= hamming_max_k(n, t));
            }
        }
    }

    #[test]
    fn singleton_examples() {
        assert_eq!(singleton_max_k(5, 1), 1);
        assert_eq!(singleton_max_k(4, 1), 0);
        assert_eq!(singleton_max_k(3, 1), -1);
        assert_eq!(singleton_max_k(17, 0), 17);
    }

    #[test]
    fn gv_examples() {
        assert_eq!(gv_k(9, 1).unwrap(), 0);
        assert_eq!(gv_k(12, 0).unwrap(), 12);
        assert!(gv_k(50, 5).unwrap() < thm2_k(50, 5));
        assert_eq!(gv_k(50, 5).unwrap(), 0);
        assert_eq!(thm2_k(50, 5), 19);
        assert!(gv_k(3, 2).is_err());
    }

    #[test]
    fn thm2_examples() {
        assert_eq!(thm2_k(20, 1), 12);
        assert_eq!(thm2_k(8, 0), 6);
        // j = 9 since 2^8 < 352 <= 2^9, so k = 9 - 9 - 2
        assert_eq!(thm2_k(9, 2), -2);
        assert_eq!(greedy_step_bound(7, 1), 7);
        assert_eq!(greedy_step_bound(6, 1), 7);
    }

    #[test]
    fn thm2_dominates_gv() {
        for n in 1..=60usize {
            for t in 1..=n / 4 {
                assert!(thm2_k(n, t) >= gv_k(n, t).unwrap(), "{n} {t}");
            }
        }
    }

    /// Oracle: linear scan with floating-point square root, evaluated away
    /// from the equality cases.
    fn float_next(prev: u64) -> u64 {
        let mut m = 1u64;
        while ((m + 1) as f64 + ((m + 1) as f64).sqrt()) / 2.0 <= (prev + 1) as f64 + 1e-9 {
            m += 1;
        }
        m
    }

    #[test]
    fn mi_examples() {
        assert_eq!(mi_sequence(10), vec![1, 2, 4, 7, 12, 21, 37, 67, 124, 234]);
        assert_eq!(mi_sequence(1), vec![1]);
        assert!(mi_sequence(0).is_empty());
        let seq = mi_sequence(16);
        for w in seq.windows(2) {
            assert_eq!(w[1], float_next(w[0]));
        }
    }

    #[test]
    fn mi_growth() {
        let seq = mi_sequence(41);
        for (i, &m) in seq.iter().enumerate().skip(8) {
            assert!(1u64 << (i - 2) <= m && m <= 1u64 << (i - 1), "i={i} m={m}");
        }
        for w in seq.windows(2) {
            let (a, b) = (w[0], w[1]);
            let root = (2 * a).isqrt();
            let ceil_root = if root * root == 2 * a { root } else { root + 1 };
            assert!(2 * a >= b);
            assert!(b + ceil_root + 1 >= 2 * a);
        }
    }

    #[test]
    fn rates() {
        let p0 = RatePoint::at(0.0);
        assert_eq!((p0.rate_2epp, p0.rate_gv), (1.0, 1.0));
        let p = RatePoint::at(0.1);
        assert!((p.rate_2epp - 0.3725).abs() < 1e-3);
        assert_eq!(p.rate_gv, 0.0);
        let table = rate_table(101).unwrap();
        assert_eq!(table.len(), 101);
        assert_eq!(table[0].x, 0.0);
        assert_eq!(table[100].x, 0.5);
        for w in table.windows(2) {
            assert!(w[1].rate_2epp <= w[0].rate_2epp);
            assert!(w[1].rate_gv <= w[0].rate_gv);
        }
        // the 2-EPP curve reaches zero near x = 0.189; past that both clamp
        for pt in table.iter().filter(|p| p.x > 0.0 && p.x <= 0.25) {
            if pt.x < 0.189 {
                assert!(pt.rate_2epp > pt.rate_gv, "x = {}", pt.x);
            } else {
                assert_eq!((pt.rate_2epp, pt.rate_gv), (0.0, 0.0), "x = {}", pt.x);
            }
        }
        assert!(rate_table(1).is_err());
    }

    #[test]
    fn csv_shapes() {
        let rows = bounds_table(9..=10, [2]);
        assert_eq!(
            bounds_csv(&rows),
            "n,t,hamming_k,singleton_k,gv_k,thm2_k\n9,2,0,1,-5,-2\n10,2,1,2,-5,-1\n"
        );
        let csv = rates_csv(&rate_table(3).unwrap());
        assert!(csv.starts_with("x,rate_2epp,rate_gv\n0.0,1.0,1.0\n0.25,"));
        assert_eq!(format_decimal(0.5), "0.5");
        assert_eq!(format_decimal(0.372508156), "0.372508");
    }
}
