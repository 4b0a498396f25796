//! The Radu–Sellers congruence-proving engine, specialized to t-core
//! generating functions.
//!
//! A claim "a_p(mn + t) ≡ 0 (mod u) for all n" is turned into a finite,
//! mechanical check:
//!
//! 1. attach to the claim the tuple (m, M=p, N, r, t) with the exponent
//!    vector r = (r_1 = -1, r_p = p) of Σ a_p(n) q^n = (q^p;q^p)^p/(q;q),
//!    and the level N = 2^ε₂ p^εp · (product of the distinct primes of m);
//! 2. verify the admissibility divisor A_t divides N and the tuple lies in
//!    the set Δ* (conditions (a)–(f) of [`delta_star_check`]);
//! 3. close the residue class t under the s-action
//!    t′ ≡ ts + (s−1)/24 · Σ δ r_δ (mod m), s over the squares of units of
//!    ℤ_{24m}, giving the orbit P(t);
//! 4. bound the number of coefficients that must vanish: with the cusp
//!    minima p_{m,r}(γ) non-negative at every double-coset representative
//!    γ_δ = [[1,0],[δ,1]] (δ | N), the quantity
//!    ν = (1/24)·Σr_δ·[Γ:Γ₀(N)] − (1/24m)·Σδr_δ − t_min/m
//!    caps the check at n ≤ ⌊ν⌋;
//! 5. expand the t-core series mod u that far and inspect a_p(mn + t′) for
//!    every t′ ∈ P(t), 0 ≤ n ≤ ⌊ν⌋.
//!
//! All residues vanishing constitutes a proof for every n ≥ 0; the verdict
//! is `proven`.  A nonzero residue refutes the claim with a concrete
//! witness.  When the machinery's hypotheses fail (p not an odd prime,
//! A_t ∤ N, Δ* membership broken, no square-free-ish level for the coset
//! representatives, a negative cusp minimum) the verdict is
//! `not_applicable`: the claim is neither proven nor refuted.
//!
//! Everything before the final coefficient pass is exact integer or
//! rational arithmetic; the coefficient pass runs in ℤ/uℤ.

use crate::arith::{divisors, is_prime, is_squarefree, prime_divisors};
use crate::cores::{self, CoreError};
use crate::qseries::{SeriesError, MAX_MODULUS};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Step sizes m and core sizes p are factored by trial division; published
/// applications stay far below this.
pub const MAX_STEP: u64 = 1_000_000;

/// Default ceiling on the number of series coefficients a single claim may
/// demand (the check needs m·⌊ν⌋ + max P(t) + 1 of them).
pub const DEFAULT_SERIES_BUDGET: usize = 1 << 22;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RaduError {
    #[error("m must satisfy 1 <= m <= {MAX_STEP}, got {0}")]
    StepOutOfRange(u64),
    #[error("core size p must satisfy 2 <= p <= {MAX_STEP}, got {0}")]
    CoreOutOfRange(u64),
    #[error("residue class t = {t} must lie in [0, m) with m = {m}")]
    ResidueOutOfRange { t: u64, m: u64 },
    #[error("congruence modulus u must satisfy 2 <= u <= {MAX_MODULUS}, got {0}")]
    ModulusOutOfRange(u64),
    #[error("(p^2 - 1)/24 is an integer only for primes p >= 5, got {0}")]
    OffsetUndefined(u64),
    #[error("divisor {delta} does not divide the vector level {level}")]
    DivisorNotInLevel { delta: u64, level: u64 },
    #[error("neither {0} nor {0}/2 is square-free; no divisor-indexed coset representatives")]
    NotSquareFreeish(u64),
    #[error("tuple is not a member of Delta*")]
    OutsideDeltaStar,
    #[error("cusp minimum is negative at the representative with lower-left entry {c}")]
    CuspHypothesis { c: i64 },
    #[error("closed-form bound does not apply: {0}")]
    ShapeMismatch(String),
    #[error("claim needs {needed} series coefficients, over the budget of {budget}")]
    SeriesBudget { needed: u128, budget: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// κ(m) = gcd(m² − 1, 24).  By quadratic-residue bookkeeping this is 24, 8,
/// 3 or 1 according to gcd(m, 6) = 1, 3, 2, 6.
pub fn kappa(m: u64) -> u64 {
    let m = m as u128;
    ((m * m - 1).gcd(&24)) as u64
}

/// p̂ = (p² − 1)/24, integral exactly for primes p ≥ 5.
pub fn core_offset(p: u64) -> Result<u64, RaduError> {
    if p < 5 || !is_prime(p) {
        return Err(RaduError::OffsetUndefined(p));
    }
    Ok((p * p - 1) / 24)
}

/// ε₂ = (1 − (−1)^((p−1)/2))/2 when 2 | m, else 0; p must be odd.
pub fn eps2(m: u64, p: u64) -> u32 {
    if m % 2 == 0 && p % 4 == 3 {
        1
    } else {
        0
    }
}

/// ε_p = 1 if p ∤ m, else 0.
pub fn epsp(m: u64, p: u64) -> u32 {
    if m % p == 0 {
        0
    } else {
        1
    }
}

/// The admissibility divisor A_t(m, p) = 24m / gcd(−κ(24t + p² − 1), 24m).
/// For p > 3 this collapses to m / gcd(κ(t + p̂), m), and for p = 3 to
/// 3m / gcd(κ(3t + 1), 3m); the general form is evaluated here.
pub fn admissibility_divisor(m: u64, p: u64, t: u64) -> u64 {
    let kap = kappa(m) as u128;
    let inner = 24 * t as u128 + (p as u128) * (p as u128) - 1;
    let g = (kap * inner).gcd(&(24 * m as u128));
    (24 * m as u128 / g) as u64
}

/// The canonical level N = 2^ε₂ · p^εp · p₁p₂···p_g attached to a claim,
/// where p₁, …, p_g are the distinct primes of m.  Larger admissible levels
/// exist (extra primes with exponent zero may be adjoined to m); this is
/// the minimal one.
pub fn canonical_level(m: u64, p: u64) -> u64 {
    let mut n: u64 = prime_divisors(m).iter().product::<u64>().max(1);
    if epsp(m, p) == 1 {
        n *= p;
    }
    if eps2(m, p) == 1 {
        n *= 2;
    }
    n
}

/// An exponent vector r = (r_δ)_{δ|M}: finitely many integers indexed by
/// the divisors of a level M.  Zero exponents are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentVector {
    level: u64,
    exponents: BTreeMap<u64, i64>,
}

impl ExponentVector {
    /// Build from (δ, r_δ) pairs; divisors must divide M and repeats are
    /// summed.
    pub fn new(
        level: u64,
        pairs: impl IntoIterator<Item = (u64, i64)>,
    ) -> Result<Self, RaduError> {
        if level == 0 {
            return Err(RaduError::StepOutOfRange(0));
        }
        let mut exponents: BTreeMap<u64, i64> = BTreeMap::new();
        for (delta, r) in pairs {
            if delta == 0 || level % delta != 0 {
                return Err(RaduError::DivisorNotInLevel { delta, level });
            }
            *exponents.entry(delta).or_insert(0) += r;
        }
        exponents.retain(|_, r| *r != 0);
        Ok(ExponentVector { level, exponents })
    }

    /// The t-core specialization: M = p and r = (r₁ = −1, r_p = p), the
    /// exponents of (q^p;q^p)^p/(q;q).  For p = 1 the two entries cancel
    /// and the vector is empty (the 1-core series is the constant 1).
    pub fn t_core(p: u64) -> Result<Self, RaduError> {
        let r = i64::try_from(p).map_err(|_| RaduError::CoreOutOfRange(p))?;
        Self::new(p, [(1, -1), (p, r)])
    }

    /// The level M whose divisors index the exponents.
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn exponents(&self) -> &BTreeMap<u64, i64> {
        &self.exponents
    }

    /// Σ r_δ.
    pub fn sum(&self) -> i64 {
        self.exponents.values().sum()
    }

    /// Σ δ r_δ.
    pub fn weighted_sum(&self) -> i128 {
        self.exponents
            .iter()
            .map(|(&d, &r)| d as i128 * r as i128)
            .sum()
    }
}

/// Which multipliers s act in [`residue_orbit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrbitConvention {
    /// Squares of units of ℤ_{24m} (these satisfy s ≡ 1 mod 24, so the
    /// action is always defined).  The published orbit tables follow this
    /// convention.
    #[default]
    SquaresOfUnits,
    /// Every unit of ℤ_{24m}, skipping those s with 24 ∤ (s−1)·Σδr_δ where
    /// the action is undefined.  Kept for comparison.
    AllUnits,
}

/// The orbit P(t) = { t′ : t′ ≡ ts + (s−1)/24 · Σδr_δ (mod m) } of a
/// residue class t under the s-action.
pub fn residue_orbit(
    m: u64,
    vector: &ExponentVector,
    t: u64,
    convention: OrbitConvention,
) -> Result<BTreeSet<u64>, RaduError> {
    if m == 0 || m > MAX_STEP {
        return Err(RaduError::StepOutOfRange(m));
    }
    if t >= m {
        return Err(RaduError::ResidueOutOfRange { t, m });
    }
    let modulus = 24 * m;
    let mut multipliers = BTreeSet::new();
    for x in 1..modulus {
        if x.gcd(&modulus) != 1 {
            continue;
        }
        match convention {
            OrbitConvention::SquaresOfUnits => {
                multipliers.insert(((x as u128 * x as u128) % modulus as u128) as u64);
            }
            OrbitConvention::AllUnits => {
                multipliers.insert(x);
            }
        }
    }
    let weighted = vector.weighted_sum();
    let mut orbit = BTreeSet::new();
    for s in multipliers {
        let scaled = (s as i128 - 1) * weighted;
        if scaled % 24 != 0 {
            continue; // only reachable under AllUnits
        }
        let image = (t as i128 * s as i128 + scaled / 24).rem_euclid(m as i128);
        orbit.insert(image as u64);
    }
    Ok(orbit)
}

/// A candidate tuple (m, M, N, r, t) for Δ* membership; M travels inside
/// the exponent vector and `level` is N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaStarTuple {
    pub m: u64,
    pub level: u64,
    pub vector: ExponentVector,
    pub t: u64,
}

/// One boolean per Δ* condition; `member` is their conjunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeltaStarReport {
    /// (a) every prime of m divides N.
    pub primes_of_m_divide_level: bool,
    /// (b) every δ | M with r_δ ≠ 0 divides mN.
    pub supports_divide_m_level: bool,
    /// (c) κN · Σ r_δ·mN/δ ≡ 0 (mod 24).
    pub scaled_weighted_sum: bool,
    /// (d) κN · Σ r_δ ≡ 0 (mod 8).
    pub scaled_sum: bool,
    /// (e) 24m / gcd(−24κt − κΣδr_δ, 24m) divides N.
    pub admissibility: bool,
    /// (f) for even m: (4 | κN and 8 | sN) or (2 | s and 8 | (1−j)N),
    /// where Πδ^|r_δ| = 2^s · j with j odd.
    pub even_step: bool,
    pub member: bool,
}

/// Evaluate conditions (a)–(f) defining the set Δ*.
pub fn delta_star_check(tuple: &DeltaStarTuple) -> DeltaStarReport {
    let m = tuple.m as u128;
    let n = tuple.level as u128;
    let kap = kappa(tuple.m) as u128;
    let kn_mod = |q: u128| (kap * (n % q)) % q;

    let primes_of_m_divide_level = prime_divisors(tuple.m)
        .iter()
        .all(|&q| tuple.level % q == 0);

    let supports_divide_m_level = tuple
        .vector
        .exponents()
        .keys()
        .all(|&delta| (m * n) % delta as u128 == 0);

    // (c) needs mN/δ integral, which is condition (b); without it the sum
    // is not an integer and the condition is counted as failed.
    let scaled_weighted_sum = supports_divide_m_level && {
        let sum: i128 = tuple
            .vector
            .exponents()
            .iter()
            .map(|(&delta, &r)| r as i128 * ((m * n / delta as u128) % 24) as i128)
            .sum();
        (kn_mod(24) as i128 * sum).rem_euclid(24) == 0
    };

    let scaled_sum = (kn_mod(8) as i128 * tuple.vector.sum() as i128).rem_euclid(8) == 0;

    let admissibility = {
        let inner = (24 * tuple.t as i128 + tuple.vector.weighted_sum()).unsigned_abs();
        let g = (kap * inner).gcd(&(24 * m));
        let required = 24 * m / g;
        n % required == 0
    };

    let even_step = if tuple.m % 2 != 0 {
        true
    } else {
        // Π δ^|r_δ| = 2^s · j with j odd: s from the 2-adic valuations,
        // j needed only modulo 8.
        let mut s: u128 = 0;
        let mut j_mod_8: u128 = 1;
        for (&delta, &r) in tuple.vector.exponents() {
            let e = r.unsigned_abs() as u128;
            let mut odd = delta;
            while odd % 2 == 0 {
                odd /= 2;
                s += e;
            }
            let mut base = (odd % 8) as u128;
            let mut exp = e;
            while exp > 0 {
                if exp & 1 == 1 {
                    j_mod_8 = j_mod_8 * base % 8;
                }
                base = base * base % 8;
                exp >>= 1;
            }
        }
        let first = kn_mod(4) == 0 && (s % 8) * (n % 8) % 8 == 0;
        let second = s % 2 == 0 && ((1i128 - j_mod_8 as i128).rem_euclid(8) as u128) * (n % 8) % 8 == 0;
        first || second
    };

    let member = primes_of_m_divide_level
        && supports_divide_m_level
        && scaled_weighted_sum
        && scaled_sum
        && admissibility
        && even_step;
    DeltaStarReport {
        primes_of_m_divide_level,
        supports_divide_m_level,
        scaled_weighted_sum,
        scaled_sum,
        admissibility,
        even_step,
        member,
    }
}

/// A complete set of double-coset representatives of Γ₀(N)\Γ/Γ_∞: the
/// matrices [[1,0],[δ,1]] over δ | N.  Valid whenever N or N/2 is
/// square-free; anything else is an error (the fallback of enumerating
/// general cosets is out of scope).
pub fn double_coset_reps(level: u64) -> Result<Vec<[i64; 4]>, RaduError> {
    if level == 0 {
        return Err(RaduError::StepOutOfRange(0));
    }
    if !is_squarefree(level) && !(level % 2 == 0 && is_squarefree(level / 2)) {
        return Err(RaduError::NotSquareFreeish(level));
    }
    Ok(divisors(level)
        .into_iter()
        .map(|d| [1, 0, d as i64, 1])
        .collect())
}

/// [Γ : Γ₀(N)] = N · Π_{q|N} (1 + 1/q), an exact integer.
pub fn gamma0_index(level: u64) -> u64 {
    let mut index = level;
    for q in prime_divisors(level) {
        index = index / q * (q + 1);
    }
    index
}

/// The cusp minimum p_{m,r}(γ) = min over λ ∈ {0,…,m−1} of
/// (1/24) Σ_δ r_δ · gcd²(δa + δκλc, mc)/(δm), where (a, c) is the first
/// column of γ ∈ SL₂(ℤ) and gcd(x, 0) = |x|.
pub fn cusp_min_value(vector: &ExponentVector, m: u64, a: i64, c: i64) -> BigRational {
    let kap = kappa(m) as i128;
    let mc = (m as i128 * c as i128).unsigned_abs();
    let mut min: Option<BigRational> = None;
    for lambda in 0..m {
        let shifted = a as i128 + kap * lambda as i128 * c as i128;
        let mut sum = BigRational::zero();
        for (&delta, &r) in vector.exponents() {
            let g = BigInt::from((delta as i128 * shifted).unsigned_abs().gcd(&mc));
            sum += BigRational::new(
                BigInt::from(r) * &g * &g,
                BigInt::from(delta) * BigInt::from(m),
            );
        }
        if min.as_ref().is_none_or(|best| &sum < best) {
            min = Some(sum);
        }
    }
    min.expect("m >= 1") / BigRational::from(BigInt::from(24))
}

/// The cusp offset p*_a(γ) = (1/24) Σ_{δ|N} a_δ · gcd²(δ, c)/δ for an
/// auxiliary exponent vector a on the divisors of N.  The engine always
/// passes a ≡ 0 (an empty map), for which this vanishes.
pub fn cusp_offset_value(aux: &BTreeMap<u64, i64>, c: i64) -> BigRational {
    let cu = c.unsigned_abs();
    let mut sum = BigRational::zero();
    for (&delta, &a) in aux {
        let g = BigInt::from(delta.gcd(&cu));
        sum += BigRational::new(BigInt::from(a) * &g * &g, BigInt::from(delta));
    }
    sum / BigRational::from(BigInt::from(24))
}

/// The finite-check bound: exact ν and its floor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuBound {
    pub nu: BigRational,
    pub bound: i64,
}

/// Evaluate ν = (1/24){(Σr_δ + Σa_δ)[Γ:Γ₀(N)] − Σδa_δ}
/// − (1/24m)Σδr_δ − t_min/m and return ⌊ν⌋ alongside.
///
/// The hypotheses are enforced, not assumed: the tuple must lie in Δ*, the
/// level must admit divisor-indexed coset representatives, and
/// p_{m,r}(γ) + p*_a(γ) must be non-negative at every representative.
pub fn nu_bound(
    tuple: &DeltaStarTuple,
    aux: &BTreeMap<u64, i64>,
    t_min: u64,
) -> Result<NuBound, RaduError> {
    for &delta in aux.keys() {
        if delta == 0 || tuple.level % delta != 0 {
            return Err(RaduError::DivisorNotInLevel {
                delta,
                level: tuple.level,
            });
        }
    }
    if !delta_star_check(tuple).member {
        return Err(RaduError::OutsideDeltaStar);
    }
    for rep in double_coset_reps(tuple.level)? {
        let total = cusp_min_value(&tuple.vector, tuple.m, rep[0], rep[2])
            + cusp_offset_value(aux, rep[2]);
        if total.is_negative() {
            return Err(RaduError::CuspHypothesis { c: rep[2] });
        }
    }
    let index = BigInt::from(gamma0_index(tuple.level));
    let sum_r = BigInt::from(tuple.vector.sum());
    let sum_a: BigInt = aux.values().map(|&a| BigInt::from(a)).sum();
    let weighted_a: BigInt = aux
        .iter()
        .map(|(&d, &a)| BigInt::from(d) * BigInt::from(a))
        .sum();
    let nu = BigRational::new((sum_r + sum_a) * index - weighted_a, BigInt::from(24))
        - BigRational::new(
            BigInt::from(tuple.vector.weighted_sum()),
            BigInt::from(24) * BigInt::from(tuple.m),
        )
        - BigRational::new(BigInt::from(t_min), BigInt::from(tuple.m));
    let bound = nu
        .floor()
        .to_integer()
        .to_i64()
        .expect("bounds in range of i64 by the step/core guards");
    Ok(NuBound { nu, bound })
}

/// Closed-form upper bounds for ⌊ν⌋ in the t-core setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    /// Any m: ⌊2^ε₂ (p+1)^εp (p−1)(p₁+1)···(p_g+1)/24 − (p²−1)/(24m)⌋.
    General { p: u64, m: u64 },
    /// m = 2p: 2^ε₂·3·p̂ − 1.
    DoubledPrime { p: u64 },
    /// m = pq for an odd prime q ≠ p: p̂(q + 1).
    DistinctPrimes { p: u64, q: u64 },
}

/// Evaluate a closed-form bound.  These dominate (or equal) the exact
/// ⌊ν⌋ of [`nu_bound`]; the `General` form is the sharpest of the three.
pub fn corollary_bound(form: ClosedForm) -> Result<i64, RaduError> {
    match form {
        ClosedForm::General { p, m } => {
            if p < 3 || !is_prime(p) {
                return Err(RaduError::ShapeMismatch(format!(
                    "general form needs an odd prime p, got {p}"
                )));
            }
            if m == 0 || m > MAX_STEP {
                return Err(RaduError::StepOutOfRange(m));
            }
            let mut main = BigInt::from(p) - 1;
            if epsp(m, p) == 1 {
                main *= BigInt::from(p) + 1;
            }
            if eps2(m, p) == 1 {
                main *= 2;
            }
            for q in prime_divisors(m) {
                main *= BigInt::from(q) + 1;
            }
            let nu = BigRational::new(main, BigInt::from(24))
                - BigRational::new(
                    BigInt::from(p) * BigInt::from(p) - 1,
                    BigInt::from(24) * BigInt::from(m),
                );
            Ok(nu.floor().to_integer().to_i64().expect("guarded sizes"))
        }
        ClosedForm::DoubledPrime { p } => {
            let p_hat = core_offset(p)? as i64;
            Ok(3 * (1 << eps2(2 * p, p)) * p_hat - 1)
        }
        ClosedForm::DistinctPrimes { p, q } => {
            let p_hat = core_offset(p)? as i64;
            if q == p || q == 2 || !is_prime(q) {
                return Err(RaduError::ShapeMismatch(format!(
                    "m = pq needs an odd prime q distinct from p, got q = {q}"
                )));
            }
            Ok(p_hat * (q as i64 + 1))
        }
    }
}

/// "a_p(mn + t′) ≡ 0 (mod u) for all t′ ∈ P(t) and n ≥ 0."
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceClaim {
    /// Core size (an odd prime for the machinery to apply).
    pub p: u64,
    /// Arithmetic-progression step.
    pub m: u64,
    /// Seed residue class, 0 ≤ t < m.
    pub t: u64,
    /// Congruence modulus, 2 ≤ u ≤ 2³¹.
    pub u: u64,
}

/// One inspected coefficient: a_p(m·n + residue) ≡ value (mod u).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientCheck {
    pub residue: u64,
    pub n: u64,
    /// Decimal string; residues are exact integers in [0, u).
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    /// Every required coefficient vanished; the congruence holds for all n.
    Proven,
    /// A coefficient failed to vanish; the claim is false.
    Refuted { witness: CoefficientCheck },
    /// The machinery's hypotheses do not cover this claim.
    NotApplicable { reason: String },
}

/// The full machine-readable certificate for one claim.  Exact integers
/// that may exceed machine words (coefficient residues, ν) are serialized
/// as decimal strings; fields the verdict never reached are null.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub claim: CongruenceClaim,
    pub kappa: u64,
    pub p_hat: Option<u64>,
    #[serde(rename = "A_t")]
    pub a_t: Option<u64>,
    pub eps2: Option<u32>,
    pub epsp: Option<u32>,
    /// The level N the tuple was certified on.
    pub level: Option<u64>,
    /// [Γ : Γ₀(N)].
    pub index: Option<u64>,
    #[serde(rename = "P_set")]
    pub p_set: Vec<u64>,
    pub t_min: Option<u64>,
    /// Exact ν as a rational string.
    pub nu: Option<String>,
    /// ⌊ν⌋: coefficients are checked for 0 ≤ n ≤ bound.
    pub bound: Option<i64>,
    /// ⌊2^ε₂(p+1)^εp(p−1)Π(pᵢ+1)/24 − (p²−1)/(24m)⌋.
    pub closed_form_bound: Option<i64>,
    /// The same expression without the −(p²−1)/(24m) correction, as
    /// displayed alongside the sharp form; rational string since it need
    /// not be integral.
    pub closed_form_without_offset: Option<String>,
    pub checks: Vec<CoefficientCheck>,
    pub verdict: Verdict,
}

/// Knobs for [`verify_claim_with`].
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub orbit: OrbitConvention,
    /// Ceiling on series coefficients a claim may demand.
    pub series_budget: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            orbit: OrbitConvention::SquaresOfUnits,
            series_budget: DEFAULT_SERIES_BUDGET,
        }
    }
}

/// Run the full engine on one claim with default options.
pub fn verify_claim(claim: &CongruenceClaim) -> Result<VerificationReport, RaduError> {
    verify_claim_with(claim, &VerifyOptions::default())
}

/// Run the full engine on one claim.  Malformed claims (m or u out of
/// range, t ≥ m) and blown resource budgets are errors; every
/// mathematical obstruction is a `not_applicable` verdict inside a report.
pub fn verify_claim_with(
    claim: &CongruenceClaim,
    options: &VerifyOptions,
) -> Result<VerificationReport, RaduError> {
    let CongruenceClaim { p, m, t, u } = *claim;
    if m == 0 || m > MAX_STEP {
        return Err(RaduError::StepOutOfRange(m));
    }
    if t >= m {
        return Err(RaduError::ResidueOutOfRange { t, m });
    }
    if u < 2 || u > MAX_MODULUS {
        return Err(RaduError::ModulusOutOfRange(u));
    }
    if p < 2 || p > MAX_STEP {
        return Err(RaduError::CoreOutOfRange(p));
    }

    let mut report = VerificationReport {
        claim: *claim,
        kappa: kappa(m),
        p_hat: None,
        a_t: None,
        eps2: None,
        epsp: None,
        level: None,
        index: None,
        p_set: Vec::new(),
        t_min: None,
        nu: None,
        bound: None,
        closed_form_bound: None,
        closed_form_without_offset: None,
        checks: Vec::new(),
        verdict: Verdict::Proven, // replaced below
    };

    if p < 3 || !is_prime(p) {
        report.verdict = Verdict::NotApplicable {
            reason: format!("core size {p} is not an odd prime"),
        };
        return Ok(report);
    }
    report.p_hat = core_offset(p).ok();
    report.eps2 = Some(eps2(m, p));
    report.epsp = Some(epsp(m, p));
    let a_t = admissibility_divisor(m, p, t);
    report.a_t = Some(a_t);
    let level = canonical_level(m, p);
    report.level = Some(level);
    report.index = Some(gamma0_index(level));
    report.closed_form_bound = corollary_bound(ClosedForm::General { p, m }).ok();
    report.closed_form_without_offset = Some(closed_form_without_offset(p, m).to_string());

    if level % a_t != 0 {
        report.verdict = Verdict::NotApplicable {
            reason: format!("admissibility divisor A_t = {a_t} does not divide the level N = {level}"),
        };
        return Ok(report);
    }

    let vector = ExponentVector::t_core(p)?;
    let tuple = DeltaStarTuple {
        m,
        level,
        vector: vector.clone(),
        t,
    };
    let membership = delta_star_check(&tuple);
    if !membership.member {
        report.verdict = Verdict::NotApplicable {
            reason: format!("tuple is outside Delta*: {membership:?}"),
        };
        return Ok(report);
    }

    let orbit = residue_orbit(m, &vector, t, options.orbit)?;
    report.p_set = orbit.iter().copied().collect();
    let t_min = *orbit.first().expect("t is in its own orbit");
    report.t_min = Some(t_min);

    let nu = match nu_bound(&tuple, &BTreeMap::new(), t_min) {
        Ok(nu) => nu,
        Err(RaduError::NotSquareFreeish(n)) => {
            report.verdict = Verdict::NotApplicable {
                reason: format!("neither {n} nor {n}/2 is square-free; no coset representatives"),
            };
            return Ok(report);
        }
        Err(RaduError::CuspHypothesis { c }) => {
            report.verdict = Verdict::NotApplicable {
                reason: format!("negative cusp minimum at the representative with lower-left entry {c}"),
            };
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.nu = Some(nu.nu.to_string());
    report.bound = Some(nu.bound);

    if nu.bound < 0 {
        // nothing to check: the congruence holds vacuously for all n ≥ 0
        report.verdict = Verdict::Proven;
        return Ok(report);
    }
    let bound = nu.bound as u128;
    let max_residue = *orbit.last().expect("non-empty") as u128;
    let needed = m as u128 * bound + max_residue + 1;
    if needed > options.series_budget as u128 {
        return Err(RaduError::SeriesBudget {
            needed,
            budget: options.series_budget,
        });
    }
    let series = cores::generating_series(p, needed as usize, Some(u))?;
    for n in 0..=nu.bound as u64 {
        for &residue in &orbit {
            let value = series.coeff((m * n + residue) as usize)?;
            let check = CoefficientCheck {
                residue,
                n,
                value: value.to_string(),
            };
            let nonzero = !value.is_zero();
            report.checks.push(check.clone());
            if nonzero {
                report.verdict = Verdict::Refuted { witness: check };
                return Ok(report);
            }
        }
    }
    report.verdict = Verdict::Proven;
    Ok(report)
}

/// 2^ε₂ (p+1)^εp (p−1)(p₁+1)···(p_g+1)/24 as an exact rational: the
/// displayed companion of the sharp closed form, which omits the
/// −(p²−1)/(24m) correction (and its floor).
fn closed_form_without_offset(p: u64, m: u64) -> BigRational {
    let mut main = BigInt::from(p) - 1;
    if epsp(m, p) == 1 {
        main *= BigInt::from(p) + 1;
    }
    if eps2(m, p) == 1 {
        main *= 2;
    }
    for q in prime_divisors(m) {
        main *= BigInt::from(q) + 1;
    }
    BigRational::new(main, BigInt::from(24))
}

/// Verify a batch of claims, in input order.  Claims are independent; with
/// the `parallel` feature they fan out across threads.
pub fn verify_claims(claims: &[CongruenceClaim]) -> Vec<Result<VerificationReport, RaduError>> {
    verify_claims_with(claims, &VerifyOptions::default())
}

#[cfg(feature = "parallel")]
pub fn verify_claims_with(
    claims: &[CongruenceClaim],
    options: &VerifyOptions,
) -> Vec<Result<VerificationReport, RaduError>> {
    use rayon::prelude::*;
    claims
        .par_iter()
        .map(|claim| verify_claim_with(claim, options))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn verify_claims_with(
    claims: &[CongruenceClaim],
    options: &VerifyOptions,
) -> Vec<Result<VerificationReport, RaduError>> {
    claims
        .iter()
        .map(|claim| verify_claim_with(claim, options))
        .collect()
}
