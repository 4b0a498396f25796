//! Empirical divisibility densities of t-core coefficients.
//!
//! For a core size t and a prime power p^j, the fraction
//! #{1 ≤ n ≤ X : a_t(n) ≡ 0 mod p^j} / X is tabulated at a list of
//! increasing checkpoints X.  The limiting value is 1 for the families
//! covered by the density theorems; at desk scale the table only exhibits
//! the upward trend, so no extrapolation or curve fitting is attempted —
//! raw counts are reported as exact rationals, never floats.
//!
//! Each configuration costs a single modular series pass up to the largest
//! checkpoint; n = 0 is excluded from every count.

use crate::cores::{self, CoreError};
use crate::qseries::MAX_MODULUS;
use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// Default ceiling on the largest checkpoint.
pub const DEFAULT_SERIES_GUARD: usize = 200_000;

/// Default checkpoint list: enough to show the trend in seconds.
pub const DEFAULT_CHECKPOINTS: [usize; 4] = [100, 1_000, 10_000, 20_000];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DensityError {
    #[error("checkpoints must be a non-empty strictly increasing list of positive values")]
    BadCheckpoints,
    #[error("largest checkpoint {x} exceeds the series guard {guard}")]
    GuardExceeded { x: usize, guard: usize },
    #[error("modulus {p}^{j} does not fit the modular coefficient width")]
    ModulusOutOfRange { p: u64, j: u32 },
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Zero-coefficient counts for one (t, p^j) configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityTable {
    pub t: u32,
    /// p^j, expanded.
    pub modulus: u64,
    pub checkpoints: Vec<usize>,
    /// #{1 ≤ n ≤ X : a_t(n) ≡ 0 mod p^j} per checkpoint.
    pub hits: Vec<u64>,
}

impl DensityTable {
    /// The measured densities as exact rationals in [0, 1].
    pub fn densities(&self) -> Vec<BigRational> {
        self.checkpoints
            .iter()
            .zip(&self.hits)
            .map(|(&x, &hit)| BigRational::new(BigInt::from(hit), BigInt::from(x)))
            .collect()
    }

    /// CSV rendering, one row per checkpoint.  Numerators are the raw
    /// counts over the checkpoint denominator, deliberately unreduced.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,modulus,X,numerator,denominator\n");
        for (&x, &hit) in self.checkpoints.iter().zip(&self.hits) {
            out.push_str(&format!("{},{},{},{},{}\n", self.t, self.modulus, x, hit, x));
        }
        out
    }
}

/// Measure one configuration with the default series guard.
pub fn measure_density(
    t: u32,
    p: u64,
    j: u32,
    checkpoints: &[usize],
) -> Result<DensityTable, DensityError> {
    measure_density_guarded(t, p, j, checkpoints, DEFAULT_SERIES_GUARD)
}

/// Measure one configuration; the largest checkpoint may not exceed
/// `guard`.
pub fn measure_density_guarded(
    t: u32,
    p: u64,
    j: u32,
    checkpoints: &[usize],
    guard: usize,
) -> Result<DensityTable, DensityError> {
    if checkpoints.is_empty()
        || checkpoints[0] == 0
        || checkpoints.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(DensityError::BadCheckpoints);
    }
    let x_max = *checkpoints.last().expect("non-empty");
    if x_max > guard {
        return Err(DensityError::GuardExceeded { x: x_max, guard });
    }
    let modulus = p
        .checked_pow(j)
        .filter(|&m| (2..=MAX_MODULUS).contains(&m))
        .ok_or(DensityError::ModulusOutOfRange { p, j })?;

    let series = cores::generating_series(u64::from(t), x_max + 1, Some(modulus))?;
    let residues = series.residues().expect("series was built modular");
    let mut hits = Vec::with_capacity(checkpoints.len());
    let mut zeros: u64 = 0;
    let mut next = checkpoints.iter().copied();
    let mut boundary = next.next();
    for (n, &r) in residues.iter().enumerate().skip(1) {
        if r == 0 {
            zeros += 1;
        }
        while boundary == Some(n) {
            hits.push(zeros);
            boundary = next.next();
        }
    }
    Ok(DensityTable {
        t,
        modulus,
        checkpoints: checkpoints.to_vec(),
        hits,
    })
}

/// Measure several configurations; independent, so they fan out across
/// threads when the `parallel` feature is on.  Output order matches input
/// order.
pub fn measure_many(
    configs: &[(u32, u64, u32)],
    checkpoints: &[usize],
    guard: usize,
) -> Vec<Result<DensityTable, DensityError>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        configs
            .par_iter()
            .map(|&(t, p, j)| measure_density_guarded(t, p, j, checkpoints, guard))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        configs
            .iter()
            .map(|&(t, p, j)| measure_density_guarded(t, p, j, checkpoints, guard))
            .collect()
    }
}
