//! Eta-quotients and their holomorphy certificates.
//!
//! An [`EtaQuotient`] is a finite product prod_{δ|N} η(δ z)^{r_δ} on a level
//! N.  The standard modularity criteria say such a product is a modular form
//! of weight k = (1/2) Σ r_δ on Γ₀(N) with a quadratic Kronecker character,
//! provided
//!
//! ```text
//!   Σ δ r_δ   == 0 (mod 24)   and   Σ (N/δ) r_δ == 0 (mod 24),
//! ```
//!
//! and it is *holomorphic* when additionally its order at every cusp of
//! Γ₀(N) is non-negative.  The cusps are indexed by the divisors d of N, and
//! the order at the cusp d is the exact rational
//!
//! ```text
//!   (N/24) Σ_δ  gcd(d, δ)^2 r_δ / (gcd(d, N/d) d δ).
//! ```
//!
//! All of this is computed in exact rational arithmetic: several of the
//! quotients built by this crate have cusp orders that are exactly zero, and
//! a certificate that rounds is no certificate.
//!
//! The module also provides the three builder families whose expansions
//! witness t-core congruences modulo 2^(j+1), 3^(j+1) and p^(j+1) (p >= 5):
//! see [`mod2_witness`], [`mod3_witness`], [`prime_power_witness`].
//! [`EtaQuotient::expand`] turns a quotient into a [`TruncatedSeries`]
//! through a requested order, with the q-power prefactor supplied explicitly
//! and validated against Σ δ r_δ / 24.

use crate::arith::{divisors, factorize, is_prime};
use crate::qseries::{self, SeriesError, TruncatedSeries};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EtaError {
    #[error("level must be positive")]
    ZeroLevel,
    #[error("divisor {delta} does not divide level {level}")]
    DivisorNotInLevel { delta: u64, level: u64 },
    #[error("divisor {0} appears twice")]
    DuplicateDivisor(u64),
    #[error("d = {d} is not a divisor of the level {level}")]
    CuspNotDivisor { d: u64, level: u64 },
    #[error("character requires gcd(d, level) = 1, got d = {d}, level = {level}")]
    CharacterNotCoprime { d: i64, level: u64 },
    #[error("weight {0} is not an integer")]
    NonIntegralWeight(String),
    #[error("the multiplier conditions fail for every level multiple (Σ δ r_δ = {0} mod 24)")]
    NoAdmissibleLevel(i64),
    #[error("prefactor exponent is {actual}/24, which does not match the declared shift {declared}")]
    ShiftMismatch { declared: u64, actual: i64 },
    #[error("parameter out of range: {0}")]
    ParameterRange(String),
    #[error("malformed eta-quotient spec: {0}")]
    Parse(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// The Kronecker symbol (a | n), extended to all integers with the usual
/// conventions: (a | 0) is 1 for a = ±1 and 0 otherwise, (a | -1) is the
/// sign of a, and (a | 2) vanishes for even a and is (-1)^((a^2-1)/8)
/// otherwise.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut a = a;
    let mut n = n;
    // factors of 2 in n each contribute (a | 2)
    let mut v = 0u32;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    let mut k: i32 = if v % 2 == 0 {
        1
    } else {
        match a.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1, // a is odd here: 3 or 5 mod 8
        }
    };
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    // n odd and positive: Jacobi via reciprocity
    loop {
        a = a.rem_euclid(n);
        if a == 0 {
            return if n == 1 { k } else { 0 };
        }
        let mut v = 0u32;
        while a % 2 == 0 {
            a /= 2;
            v += 1;
        }
        if v % 2 == 1 && matches!(n % 8, 3 | 5) {
            k = -k;
        }
        if a % 4 == 3 && n % 4 == 3 {
            k = -k;
        }
        std::mem::swap(&mut a, &mut n);
    }
}

/// prod_{δ|N} η(δ z)^{r_δ}: a level and a map δ -> r_δ with every δ
/// dividing the level and no zero exponents stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotient {
    level: u64,
    exponents: BTreeMap<u64, i64>,
}

impl EtaQuotient {
    /// Build from (δ, r_δ) pairs.  Divisors must divide the level and may
    /// not repeat; zero exponents are dropped.
    pub fn new(
        level: u64,
        exponents: impl IntoIterator<Item = (u64, i64)>,
    ) -> Result<Self, EtaError> {
        if level == 0 {
            return Err(EtaError::ZeroLevel);
        }
        let mut map = BTreeMap::new();
        for (delta, r) in exponents {
            if delta == 0 || level % delta != 0 {
                return Err(EtaError::DivisorNotInLevel { delta, level });
            }
            if map.insert(delta, r).is_some() {
                return Err(EtaError::DuplicateDivisor(delta));
            }
        }
        map.retain(|_, r| *r != 0);
        Ok(EtaQuotient {
            level,
            exponents: map,
        })
    }

    /// Like [`EtaQuotient::new`] but summing repeated divisors instead of
    /// rejecting them; the builders below hit genuine coincidences such as
    /// 24t = 24 p^a when t = p^a.
    fn new_merged(
        level: u64,
        exponents: impl IntoIterator<Item = (u64, i64)>,
    ) -> Result<Self, EtaError> {
        let mut map: BTreeMap<u64, i64> = BTreeMap::new();
        for (delta, r) in exponents {
            *map.entry(delta).or_insert(0) += r;
        }
        Self::new(level, map)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn exponents(&self) -> &BTreeMap<u64, i64> {
        &self.exponents
    }

    /// Weight k = (1/2) Σ r_δ, as an exact rational (possibly half-integral).
    pub fn weight(&self) -> BigRational {
        let sum: i64 = self.exponents.values().sum();
        BigRational::new(BigInt::from(sum), BigInt::from(2))
    }

    fn sum_delta_r(&self) -> i128 {
        self.exponents
            .iter()
            .map(|(&d, &r)| d as i128 * r as i128)
            .sum()
    }

    fn sum_level_over_delta_r(&self, level: u64) -> i128 {
        self.exponents
            .iter()
            .map(|(&d, &r)| (level / d) as i128 * r as i128)
            .sum()
    }

    /// The two multiplier-system congruences:
    /// Σ δ r_δ == 0 and Σ (N/δ) r_δ == 0, both mod 24.
    pub fn conditions_24(&self) -> (bool, bool) {
        (
            self.sum_delta_r().rem_euclid(24) == 0,
            self.sum_level_over_delta_r(self.level).rem_euclid(24) == 0,
        )
    }

    /// Smallest M >= 1 such that the level N*M satisfies both congruences of
    /// [`EtaQuotient::conditions_24`].  The first congruence does not involve
    /// the level; when it fails no multiple helps and this errors.  Otherwise
    /// M | 24, since Σ (24N/δ) r_δ is trivially 0 mod 24.
    pub fn minimal_level_multiplier(&self) -> Result<u64, EtaError> {
        let s1 = self.sum_delta_r().rem_euclid(24);
        if s1 != 0 {
            return Err(EtaError::NoAdmissibleLevel(s1 as i64));
        }
        let s2 = self.sum_level_over_delta_r(self.level).rem_euclid(24) as u64;
        Ok(24 / s2.gcd(&24))
    }

    /// Exact order of vanishing at the cusp indexed by the divisor d of N.
    pub fn cusp_order(&self, d: u64) -> Result<BigRational, EtaError> {
        let n = self.level;
        if d == 0 || n % d != 0 {
            return Err(EtaError::CuspNotDivisor { d, level: n });
        }
        let mut sum = BigRational::zero();
        for (&delta, &r) in &self.exponents {
            let g = d.gcd(&delta);
            let num = BigInt::from(g) * BigInt::from(g) * BigInt::from(r);
            let den = BigInt::from(d.gcd(&(n / d))) * BigInt::from(d) * BigInt::from(delta);
            sum += BigRational::new(num, den);
        }
        Ok(sum * BigRational::new(BigInt::from(n), BigInt::from(24)))
    }

    /// The quadratic character χ(d) = ((-1)^k s | d) with s = Π δ^{r_δ},
    /// evaluated factor-wise (the Kronecker symbol is completely
    /// multiplicative in its top argument, and negative r_δ contribute the
    /// same factor as positive ones since the symbol squares to 1 for
    /// coprime entries).  Requires an integral weight and gcd(d, N) = 1.
    pub fn character(&self, d: i64) -> Result<i32, EtaError> {
        let k = self.integral_weight()?;
        if (d.unsigned_abs()).gcd(&self.level) != 1 {
            return Err(EtaError::CharacterNotCoprime {
                d,
                level: self.level,
            });
        }
        let mut chi = if k % 2 == 1 { kronecker(-1, d) } else { 1 };
        for (&delta, &r) in &self.exponents {
            if r.rem_euclid(2) == 1 {
                chi *= kronecker(delta as i64, d);
            }
        }
        Ok(chi)
    }

    fn integral_weight(&self) -> Result<i64, EtaError> {
        let sum: i64 = self.exponents.values().sum();
        if sum % 2 != 0 {
            return Err(EtaError::NonIntegralWeight(self.weight().to_string()));
        }
        Ok(sum / 2)
    }

    /// Full holomorphy certificate: weight, both multiplier congruences, and
    /// the exact order at every cusp.  `holomorphic` is the conjunction:
    /// integral non-negative weight, both congruences, all orders >= 0.
    pub fn certify(&self) -> CuspReport {
        let weight = self.weight();
        let weight_integral = self.exponents.values().sum::<i64>() % 2 == 0;
        let (cond_a, cond_b) = self.conditions_24();
        let cusp_orders: BTreeMap<u64, BigRational> = divisors(self.level)
            .into_iter()
            .map(|d| {
                let o = self.cusp_order(d).expect("d runs over divisors");
                (d, o)
            })
            .collect();
        let all_nonneg = cusp_orders.values().all(|o| !o.is_negative());
        let holomorphic = weight_integral && !weight.is_negative() && cond_a && cond_b && all_nonneg;
        CuspReport {
            level: self.level,
            weight,
            weight_integral,
            cond_sum_delta: cond_a,
            cond_sum_level_over_delta: cond_b,
            cusp_orders,
            holomorphic,
        }
    }

    /// q-expansion through `order`.  The caller declares the q-power
    /// prefactor (the shift): the product Π (q^δ; q^δ)^{r_δ} is expanded and
    /// multiplied by q^shift, after checking 24 * shift == Σ δ r_δ exactly.
    pub fn expand(
        &self,
        shift: u64,
        order: usize,
        modulus: Option<u64>,
    ) -> Result<TruncatedSeries, EtaError> {
        let s = self.sum_delta_r();
        if s < 0 || s % 24 != 0 || (s / 24) as u128 != shift as u128 {
            return Err(EtaError::ShiftMismatch {
                declared: shift,
                actual: s as i64,
            });
        }
        let shift = shift as usize;
        if shift >= order {
            return Ok(TruncatedSeries::zero(order, modulus)?);
        }
        let t = order - shift;
        let mut acc = TruncatedSeries::one(t, modulus)?;
        for (&delta, &r) in &self.exponents {
            let d = delta as usize;
            let factor = qseries::euler_function(t.div_ceil(d), modulus)?
                .dilate(d)?
                .truncate(t)?;
            let power = if r >= 0 {
                factor.pow(r as u64)?
            } else {
                factor.inverse()?.pow(r.unsigned_abs())?
            };
            acc = acc.mul(&power)?;
        }
        Ok(acc.shift_up(shift))
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={};", self.level)?;
        let mut first = true;
        for (&delta, &r) in &self.exponents {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{delta}:{r}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for EtaQuotient {
    type Err = EtaError;

    /// Parse `N=<level>;<δ>:<r>[,<δ>:<r>]*`, whitespace-insensitive.
    fn from_str(s: &str) -> Result<Self, EtaError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let rest = compact
            .strip_prefix("N=")
            .ok_or_else(|| EtaError::Parse("expected leading 'N='".into()))?;
        let (level_str, pairs_str) = rest
            .split_once(';')
            .ok_or_else(|| EtaError::Parse("expected ';' after the level".into()))?;
        let level: u64 = level_str
            .parse()
            .map_err(|_| EtaError::Parse(format!("bad level '{level_str}'")))?;
        let mut pairs = Vec::new();
        for item in pairs_str.split(',') {
            let (d, r) = item
                .split_once(':')
                .ok_or_else(|| EtaError::Parse(format!("expected '<divisor>:<exponent>', got '{item}'")))?;
            let d: u64 = d
                .parse()
                .map_err(|_| EtaError::Parse(format!("bad divisor '{d}'")))?;
            let r: i64 = r
                .parse()
                .map_err(|_| EtaError::Parse(format!("bad exponent '{r}'")))?;
            pairs.push((d, r));
        }
        EtaQuotient::new(level, pairs)
    }
}

/// Everything [`EtaQuotient::certify`] measures, kept exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspReport {
    pub level: u64,
    pub weight: BigRational,
    pub weight_integral: bool,
    pub cond_sum_delta: bool,
    pub cond_sum_level_over_delta: bool,
    /// Order at the cusp indexed by each divisor d of the level.
    pub cusp_orders: BTreeMap<u64, BigRational>,
    pub holomorphic: bool,
}

fn checked_pow(base: u64, exp: u32, what: &str) -> Result<u64, EtaError> {
    base.checked_pow(exp)
        .ok_or_else(|| EtaError::ParameterRange(format!("{what} overflows")))
}

fn checked_mul(a: u64, b: u64, what: &str) -> Result<u64, EtaError> {
    a.checked_mul(b)
        .ok_or_else(|| EtaError::ParameterRange(format!("{what} overflows")))
}

/// Witness for t-core congruences modulo powers of two, t = 3^α m with
/// gcd(m, 6) = 1: the quotient
///
/// ```text
///   η(8·3^(α+1) m z)^(3^α m + 2^(j+1)) · η(24 z)^(-1) · η(16·3^(α+1) m z)^(-2^j)
/// ```
///
/// on level 2^6 3^(α+1) m, whose expansion is congruent mod 2^(j+1) to
/// Σ a_t(n) q^(24n + shift) with shift = 3^(2α) m^2 - 1.
/// Returns the quotient and that shift.
pub fn mod2_witness(alpha: u32, m: u64, j: u32) -> Result<(EtaQuotient, u64), EtaError> {
    witness_params(alpha, m, j)?;
    let pow3 = checked_pow(3, alpha + 1, "3^(α+1)")?;
    let t = checked_mul(checked_pow(3, alpha, "3^α")?, m, "3^α m")?;
    let d1 = checked_mul(8 * pow3, m, "8·3^(α+1)·m")?;
    let d3 = checked_mul(16 * pow3, m, "16·3^(α+1)·m")?;
    let level = checked_mul(64 * pow3, m, "2^6·3^(α+1)·m")?;
    let two_j = checked_pow(2, j, "2^j")? as i64;
    let r1 = t as i64 + 2 * two_j;
    let quotient = EtaQuotient::new_merged(level, [(d1, r1), (24, -1), (d3, -two_j)])?;
    Ok((quotient, t * t - 1))
}

/// Witness for t-core congruences modulo powers of three, t = 3^α m with
/// gcd(m, 6) = 1: the quotient
///
/// ```text
///   η(8·3^(α+1) m z)^(3^α m + 3^(j+1)) · η(24 z)^(-1) · η(8·3^(α+2) m z)^(-3^j)
/// ```
///
/// on level 2^3 3^(α+2) m, congruent mod 3^(j+1) to the same shifted t-core
/// series as [`mod2_witness`].
pub fn mod3_witness(alpha: u32, m: u64, j: u32) -> Result<(EtaQuotient, u64), EtaError> {
    witness_params(alpha, m, j)?;
    let pow3 = checked_pow(3, alpha + 1, "3^(α+1)")?;
    let t = checked_mul(checked_pow(3, alpha, "3^α")?, m, "3^α m")?;
    let d1 = checked_mul(8 * pow3, m, "8·3^(α+1)·m")?;
    let d3 = checked_mul(24 * pow3, m, "8·3^(α+2)·m")?;
    let level = d3;
    let three_j = checked_pow(3, j, "3^j")? as i64;
    let r1 = t as i64 + 3 * three_j;
    let quotient = EtaQuotient::new_merged(level, [(d1, r1), (24, -1), (d3, -three_j)])?;
    Ok((quotient, t * t - 1))
}

fn witness_params(alpha: u32, m: u64, j: u32) -> Result<(), EtaError> {
    if m == 0 || m.gcd(&6) != 1 {
        return Err(EtaError::ParameterRange(format!(
            "m = {m} must be positive and coprime to 6"
        )));
    }
    if j == 0 {
        return Err(EtaError::ParameterRange("j must be at least 1".into()));
    }
    if alpha > 20 || j > 40 || m > 1_000_000 {
        return Err(EtaError::ParameterRange(
            "witness parameters are limited to α <= 20, j <= 40, m <= 10^6".into(),
        ));
    }
    Ok(())
}

/// Witness for t-core congruences modulo p^(j+1) where p >= 5 is one of the
/// primes of t = Π p_i^{a_i} (all p_i >= 5): the quotient
///
/// ```text
///   η(24 t z)^t · η(24 z)^(p^(a+j) - 1) · η(24 p^a z)^(-p^j)
/// ```
///
/// on level 2^6 3^2 t, congruent mod p^(j+1) to Σ a_t(n) q^(24n + t^2 - 1).
/// `a` must be the exact multiplicity of p in t.
pub fn prime_power_witness(p: u64, a: u32, j: u32, t: u64) -> Result<(EtaQuotient, u64), EtaError> {
    if j == 0 || a == 0 {
        return Err(EtaError::ParameterRange("need a >= 1 and j >= 1".into()));
    }
    if t == 0 || t > 1_000_000 || j > 20 {
        return Err(EtaError::ParameterRange(
            "witness parameters are limited to t <= 10^6, j <= 20".into(),
        ));
    }
    let factors = factorize(t);
    if factors.iter().any(|&(q, _)| q < 5) {
        return Err(EtaError::ParameterRange(format!(
            "every prime of t must be at least 5, got t = {t}"
        )));
    }
    if !is_prime(p) || factors.iter().find(|&&(q, _)| q == p).map(|&(_, e)| e) != Some(a) {
        return Err(EtaError::ParameterRange(format!(
            "p^a = {p}^{a} must exactly divide t = {t}"
        )));
    }
    let pa = checked_pow(p, a, "p^a")?;
    let paj = checked_pow(p, a + j, "p^(a+j)")?;
    let pj = checked_pow(p, j, "p^j")?;
    let level = checked_mul(576, t, "2^6·3^2·t")?;
    let quotient = EtaQuotient::new_merged(
        level,
        [
            (checked_mul(24, t, "24t")?, t as i64),
            (24, paj as i64 - 1),
            (checked_mul(24, pa, "24·p^a")?, -(pj as i64)),
        ],
    )?;
    Ok((quotient, t * t - 1))
}
