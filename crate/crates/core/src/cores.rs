//! t-core partitions: hook numbers, brute-force counts, generating series.
//!
//! For a partition α = (α_1 >= α_2 >= ... >= α_r) the hook number of the cell
//! in row i, column j of its Young diagram is
//!
//! ```text
//!   H(i, j) = α_i + α'_j - i - j + 1,
//! ```
//!
//! α' the conjugate partition.  α is a *t-core* when t divides no hook
//! number.  [`count_oracle`] counts t-cores of n by enumerating all
//! partitions of n and testing hooks — slow and obviously correct, the
//! referee for everything faster.  [`generating_series`] computes the same
//! numbers a_t(n) through the product formula
//!
//! ```text
//!   sum a_t(n) q^n = (q^t; q^t)_inf^t / (q; q)_inf ,
//! ```
//!
//! which is what every congruence-verification routine in this crate
//! actually expands.

use crate::qseries::{self, SeriesError, TruncatedSeries};
use thiserror::Error;

/// Enumeration beyond this n is refused: the partition count p(n) grows
/// subexponentially and the oracle walks every partition.
pub const MAX_ORACLE_N: u32 = 60;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoreError {
    #[error("parts must be positive and weakly decreasing")]
    InvalidPartition,
    #[error("t must be positive")]
    ZeroCore,
    #[error("oracle enumeration is limited to n <= {MAX_ORACLE_N}, got {0}")]
    OracleRange(u32),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A partition: weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, CoreError> {
        if parts.iter().any(|&p| p == 0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(CoreError::InvalidPartition);
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The number being partitioned.
    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// Column lengths of the Young diagram (the conjugate partition).
    fn conjugate(&self) -> Vec<u32> {
        let cols = self.parts.first().copied().unwrap_or(0) as usize;
        let mut conj = vec![0u32; cols];
        for &p in &self.parts {
            for c in conj.iter_mut().take(p as usize) {
                *c += 1;
            }
        }
        conj
    }

    /// All hook numbers, row by row.
    pub fn hook_table(&self) -> HookTable {
        let conj = self.conjugate();
        let rows = self
            .parts
            .iter()
            .enumerate()
            .map(|(i, &len)| {
                (0..len as usize)
                    .map(|j| {
                        // 1-based H(i,j) = α_i + α'_j - i - j + 1
                        (len as u64) + (conj[j] as u64) - (i as u64) - (j as u64) - 1
                    })
                    .collect()
            })
            .collect();
        HookTable { rows }
    }

    /// Does t divide no hook number?  Every partition is a 2-core or not in
    /// O(cells); the empty partition is a t-core for every t, and the only
    /// 1-core.
    pub fn is_t_core(&self, t: u64) -> Result<bool, CoreError> {
        if t == 0 {
            return Err(CoreError::ZeroCore);
        }
        let conj = self.conjugate();
        for (i, &len) in self.parts.iter().enumerate() {
            for j in 0..len as usize {
                let hook = (len as u64) + (conj[j] as u64) - (i as u64) - (j as u64) - 1;
                if hook % t == 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Hook numbers of a Young diagram, in the diagram's shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HookTable {
    rows: Vec<Vec<u64>>,
}

impl HookTable {
    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }
}

/// Count t-core partitions of n by exhaustive enumeration.
pub fn count_oracle(t: u64, n: u32) -> Result<u64, CoreError> {
    if t == 0 {
        return Err(CoreError::ZeroCore);
    }
    if n > MAX_ORACLE_N {
        return Err(CoreError::OracleRange(n));
    }
    let mut count = 0u64;
    let mut parts: Vec<u32> = Vec::new();
    enumerate(n, n, &mut parts, &mut |parts| {
        let p = Partition {
            parts: parts.to_vec(),
        };
        if p.is_t_core(t).expect("t > 0") {
            count += 1;
        }
    });
    Ok(count)
}

/// Visit every partition of `n` with parts at most `max`, in place.
fn enumerate(n: u32, max: u32, parts: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if n == 0 {
        visit(parts);
        return;
    }
    for next in (1..=max.min(n)).rev() {
        parts.push(next);
        enumerate(n - next, next, parts, visit);
        parts.pop();
    }
}

/// The series sum a_t(n) q^n through `order`, exactly or modulo u:
/// dilate the Euler product by t, raise to the t-th power, divide by the
/// Euler product.
pub fn generating_series(
    t: u64,
    order: usize,
    modulus: Option<u64>,
) -> Result<TruncatedSeries, CoreError> {
    if t == 0 {
        return Err(CoreError::ZeroCore);
    }
    let t = t as usize;
    // (q^t; q^t)^t to order `order`: power at the contracted order, then dilate
    let contracted = order.div_ceil(t);
    let numerator = qseries::euler_function(contracted, modulus)?
        .pow(t as u64)?
        .dilate(t)?
        .truncate(order)?;
    let denominator_inv = qseries::euler_function(order, modulus)?.inverse()?;
    Ok(numerator.mul(&denominator_inv)?)
}

/// Parity of the 3-core count: a_3(n) is odd exactly when n = 3m^2 + 2m for
/// some integer m, i.e. when 3n + 1 is a perfect square.
pub fn three_core_parity_is_odd(n: u64) -> bool {
    let v = 3 * n + 1;
    let r = v.isqrt();
    r * r == v
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn hook_table_of_5_3_2() {
        let p = Partition::new(vec![5, 3, 2]).unwrap();
        assert_eq!(
            p.hook_table().rows(),
            &[vec![7, 6, 4, 2, 1], vec![4, 3, 1], vec![2, 1]]
        );
    }

    #[test]
    fn hook_corners_are_one() {
        // wherever a row and a column both end, the hook is 1
        for parts in [vec![6, 4, 4, 1], vec![3, 3, 3], vec![10], vec![1, 1, 1, 1]] {
            let p = Partition::new(parts).unwrap();
            let table = p.hook_table();
            let rows = table.rows();
            for (i, row) in rows.iter().enumerate() {
                let len = row.len();
                let row_ends = i + 1 == rows.len() || rows[i + 1].len() < len;
                if row_ends {
                    assert_eq!(row[len - 1], 1, "corner of {:?} row {}", p.parts(), i);
                }
            }
        }
    }

    #[test]
    fn five_core_but_not_seven_core() {
        let p = Partition::new(vec![5, 3, 2]).unwrap();
        assert!(p.is_t_core(5).unwrap());
        assert!(!p.is_t_core(7).unwrap()); // the (1,1) hook is 7
    }

    #[test]
    fn empty_partition_is_always_core() {
        let e = Partition::empty();
        for t in 1..10 {
            assert!(e.is_t_core(t).unwrap());
        }
    }

    #[test]
    fn only_empty_partition_is_a_1_core() {
        assert_eq!(count_oracle(1, 0).unwrap(), 1);
        for n in 1..=12 {
            assert_eq!(count_oracle(1, n).unwrap(), 0, "n={n}");
        }
    }

    #[test]
    fn rejects_bad_partitions() {
        assert!(Partition::new(vec![3, 4]).is_err());
        assert!(Partition::new(vec![3, 0]).is_err());
        assert!(Partition::new(vec![4, 4, 2]).is_ok());
    }

    #[test]
    fn oracle_samples() {
        // a_5(4) = 5: every partition of 4 is a 5-core (no hook exceeds 4)
        assert_eq!(count_oracle(5, 4).unwrap(), 5);
        // a_2(n): exactly the triangular numbers have a 2-core (the staircase)
        assert_eq!(count_oracle(2, 6).unwrap(), 1);
        assert_eq!(count_oracle(2, 7).unwrap(), 0);
        assert_eq!(count_oracle(2, 10).unwrap(), 1);
    }

    #[test]
    fn oracle_range_guard() {
        assert!(count_oracle(5, 60).is_ok());
        assert_eq!(count_oracle(5, 61), Err(CoreError::OracleRange(61)));
    }

    #[test]
    fn series_matches_oracle_everywhere_small() {
        for t in 1..=8u64 {
            let s = generating_series(t, 26, None).unwrap();
            for n in 0..26u32 {
                assert_eq!(
                    s.coeff(n as usize).unwrap(),
                    BigInt::from(count_oracle(t, n).unwrap()),
                    "t={t}, n={n}"
                );
            }
        }
    }

    #[test]
    fn series_for_t_1_is_constant_one() {
        let s = generating_series(1, 10, None).unwrap();
        assert_eq!(s.coeff(0).unwrap(), BigInt::from(1));
        for n in 1..10 {
            assert_eq!(s.coeff(n).unwrap(), BigInt::from(0));
        }
    }

    #[test]
    fn large_t_counts_all_partitions() {
        // for t > n every partition of n is a t-core, so a_t(n) = p(n)
        let p = qseries::euler_function(30, None)
            .unwrap()
            .inverse()
            .unwrap();
        for n in 20..30usize {
            let s = generating_series(31, 30, None).unwrap();
            assert_eq!(s.coeff(n).unwrap(), p.coeff(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn parity_rule_small_cases() {
        // odd at n = 0, 1, 5, 8, 16, ... (n = 3m^2 + 2m)
        let odd: Vec<u64> = (0..20).filter(|&n| three_core_parity_is_odd(n)).collect();
        assert_eq!(odd, vec![0, 1, 5, 8, 16]);
        // cross-check against the enumeration oracle
        for n in 0..=30u32 {
            let count = count_oracle(3, n).unwrap();
            assert_eq!(
                count % 2 == 1,
                three_core_parity_is_odd(n as u64),
                "n={n}, a_3={count}"
            );
        }
    }

    #[test]
    fn parity_rule_against_series_mod_2() {
        let s = generating_series(3, 500, Some(2)).unwrap();
        let r = s.residues().unwrap();
        for (n, &c) in r.iter().enumerate() {
            assert_eq!(c == 1, three_core_parity_is_odd(n as u64), "n={n}");
        }
    }
}
