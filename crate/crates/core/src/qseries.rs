//! Truncated formal power series in q.
//!
//! A [`TruncatedSeries`] holds the coefficients of q^0 .. q^(T-1) of a formal
//! power series; T is its *truncation order*.  Coefficients are either exact
//! arbitrary-precision integers or residues modulo a fixed u, chosen at
//! construction.  The two flavours never mix inside one expression: combining
//! an exact series with a modular one is an error, as is combining two
//! different moduli.
//!
//! The basic vocabulary:
//!
//! * [`euler_function`] — (q; q)_inf = prod (1 - q^n), expanded by Euler's
//!   pentagonal number theorem, so it has O(sqrt(T)) nonzero terms.
//! * [`TruncatedSeries::mul`] — Cauchy product, truncated to the shorter
//!   operand.
//! * [`TruncatedSeries::inverse`] — reciprocal, for series whose constant
//!   term is a unit (±1 exactly, or invertible mod u).
//! * [`TruncatedSeries::dilate`] — substitution q -> q^k.
//! * [`TruncatedSeries::pow`], [`TruncatedSeries::reduce_mod`], plus the
//!   obvious ring plumbing.
//!
//! Reading a coefficient at or beyond the truncation order is an *error*,
//! never silently zero: the tail of a truncated series is unknown, and
//! pretending otherwise is how wrong congruence "proofs" happen.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Largest accepted modulus.  Residues are kept in `u64` and products are
/// accumulated in `u128`; capping u at 2^31 keeps every accumulation far from
/// overflow even for multi-million-term convolutions.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("coefficient index {index} is outside truncation order {order}")]
    CoeffOutOfRange { index: usize, order: usize },
    #[error("operands carry different coefficient domains ({left} vs {right})")]
    ModulusMismatch { left: String, right: String },
    #[error("modulus {0} is not in 2..={MAX_MODULUS}")]
    InvalidModulus(u64),
    #[error("constant term {0} is not invertible in the coefficient domain")]
    NonInvertibleConstant(String),
    #[error("cannot reduce modulo {new}: existing modulus {old} is not a multiple")]
    IncompatibleReduction { old: u64, new: u64 },
    #[error("dilation factor must be positive")]
    ZeroDilation,
    #[error("requested truncation order {requested} exceeds available order {available}")]
    TruncationTooLong { requested: usize, available: usize },
    #[error("series length {0} overflows the address space")]
    LengthOverflow(u128),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Exact(Vec<BigInt>),
    Modular { coeffs: Vec<u64>, modulus: u64 },
}

/// A formal power series known through the coefficient of q^(T-1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    repr: Repr,
}

fn check_modulus(u: u64) -> Result<u64, SeriesError> {
    if u < 2 || u > MAX_MODULUS {
        return Err(SeriesError::InvalidModulus(u));
    }
    Ok(u)
}

fn domain_name(m: Option<u64>) -> String {
    match m {
        None => "exact".to_string(),
        Some(u) => format!("mod {u}"),
    }
}

impl TruncatedSeries {
    /// The all-zero series of a given truncation order.
    pub fn zero(order: usize, modulus: Option<u64>) -> Result<Self, SeriesError> {
        let repr = match modulus {
            None => Repr::Exact(vec![BigInt::zero(); order]),
            Some(u) => Repr::Modular {
                coeffs: vec![0; order],
                modulus: check_modulus(u)?,
            },
        };
        Ok(TruncatedSeries { repr })
    }

    /// The constant series 1.
    pub fn one(order: usize, modulus: Option<u64>) -> Result<Self, SeriesError> {
        let mut s = Self::zero(order, modulus)?;
        if order > 0 {
            match &mut s.repr {
                Repr::Exact(c) => c[0] = BigInt::one(),
                Repr::Modular { coeffs, modulus } => coeffs[0] = 1 % *modulus,
            }
        }
        Ok(s)
    }

    /// Build a series from explicit leading coefficients.  The truncation
    /// order is the length of `coeffs`; with a modulus the values are reduced.
    pub fn from_coeffs<I>(coeffs: I, modulus: Option<u64>) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = i64>,
    {
        match modulus {
            None => Ok(TruncatedSeries {
                repr: Repr::Exact(coeffs.into_iter().map(BigInt::from).collect()),
            }),
            Some(u) => {
                let u = check_modulus(u)?;
                Ok(TruncatedSeries {
                    repr: Repr::Modular {
                        coeffs: coeffs.into_iter().map(|c| c.rem_euclid(u as i64) as u64).collect(),
                        modulus: u,
                    },
                })
            }
        }
    }

    pub(crate) fn from_bigint_coeffs(coeffs: Vec<BigInt>) -> Self {
        TruncatedSeries {
            repr: Repr::Exact(coeffs),
        }
    }

    pub(crate) fn from_residues(coeffs: Vec<u64>, modulus: u64) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < modulus));
        TruncatedSeries {
            repr: Repr::Modular { coeffs, modulus },
        }
    }

    /// Truncation order T: coefficients of q^0 .. q^(T-1) are known.
    pub fn trunc_order(&self) -> usize {
        match &self.repr {
            Repr::Exact(c) => c.len(),
            Repr::Modular { coeffs, .. } => coeffs.len(),
        }
    }

    /// The modulus, or `None` for exact coefficients.
    pub fn modulus(&self) -> Option<u64> {
        match &self.repr {
            Repr::Exact(_) => None,
            Repr::Modular { modulus, .. } => Some(*modulus),
        }
    }

    /// Coefficient of q^n.  Indices at or beyond the truncation order are an
    /// error: those coefficients are not known, not zero.
    pub fn coeff(&self, n: usize) -> Result<BigInt, SeriesError> {
        if n >= self.trunc_order() {
            return Err(SeriesError::CoeffOutOfRange {
                index: n,
                order: self.trunc_order(),
            });
        }
        Ok(match &self.repr {
            Repr::Exact(c) => c[n].clone(),
            Repr::Modular { coeffs, .. } => BigInt::from(coeffs[n]),
        })
    }

    /// Residue view of a modular series: the full coefficient slice.
    /// Returns `None` for exact series.
    pub fn residues(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Exact(_) => None,
            Repr::Modular { coeffs, .. } => Some(coeffs),
        }
    }

    fn common_modulus(&self, other: &Self) -> Result<Option<u64>, SeriesError> {
        match (self.modulus(), other.modulus()) {
            (a, b) if a == b => Ok(a),
            (a, b) => Err(SeriesError::ModulusMismatch {
                left: domain_name(a),
                right: domain_name(b),
            }),
        }
    }

    /// Pointwise sum, truncated to the shorter operand.
    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.common_modulus(other)?;
        let t = self.trunc_order().min(other.trunc_order());
        Ok(match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => TruncatedSeries::from_bigint_coeffs(
                (0..t).map(|k| &a[k] + &b[k]).collect(),
            ),
            (Repr::Modular { coeffs: a, modulus }, Repr::Modular { coeffs: b, .. }) => {
                let u = *modulus;
                TruncatedSeries::from_residues((0..t).map(|k| (a[k] + b[k]) % u).collect(), u)
            }
            _ => unreachable!("domains already checked"),
        })
    }

    /// Pointwise difference, truncated to the shorter operand.
    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.common_modulus(other)?;
        let t = self.trunc_order().min(other.trunc_order());
        Ok(match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => TruncatedSeries::from_bigint_coeffs(
                (0..t).map(|k| &a[k] - &b[k]).collect(),
            ),
            (Repr::Modular { coeffs: a, modulus }, Repr::Modular { coeffs: b, .. }) => {
                let u = *modulus;
                TruncatedSeries::from_residues(
                    (0..t).map(|k| (a[k] + u - b[k]) % u).collect(),
                    u,
                )
            }
            _ => unreachable!("domains already checked"),
        })
    }

    /// Cauchy product, truncated to the shorter operand.  The sparser factor
    /// drives the convolution, so multiplying by a pentagonal-number series
    /// costs O(T sqrt T) rather than O(T^2).
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.mul_impl(other, false)
    }

    /// The sequential multiplication kernel.  `mul` dispatches long products
    /// to rayon when the `parallel` feature is on; this entry point always
    /// stays on the calling thread, and exists so the two lanes can be
    /// compared directly (see the `lanes` benchmark).
    pub fn mul_seq(&self, other: &Self) -> Result<Self, SeriesError> {
        self.mul_impl(other, true)
    }

    fn mul_impl(&self, other: &Self, force_seq: bool) -> Result<Self, SeriesError> {
        self.common_modulus(other)?;
        let t = self.trunc_order().min(other.trunc_order());
        let _ = force_seq; // consumed only by the parallel lane below
        Ok(match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => {
                let (dense, sparse) = order_by_sparsity(a, b, t, |c| c.is_zero());
                let terms: Vec<(usize, &BigInt)> = sparse_terms(sparse, t, |c| c.is_zero());
                let compute = |k: usize| -> BigInt {
                    let mut acc = BigInt::zero();
                    for &(e, c) in terms.iter().take_while(|&&(e, _)| e <= k) {
                        acc += c * &dense[k - e];
                    }
                    acc
                };
                TruncatedSeries::from_bigint_coeffs(gather(t, force_seq, compute))
            }
            (Repr::Modular { coeffs: a, modulus }, Repr::Modular { coeffs: b, .. }) => {
                let u = *modulus;
                let (dense, sparse) = order_by_sparsity(a, b, t, |&c| c == 0);
                let terms: Vec<(usize, u64)> = sparse_terms(sparse, t, |&c| c == 0)
                    .into_iter()
                    .map(|(e, &c)| (e, c))
                    .collect();
                let compute = |k: usize| -> u64 {
                    let mut acc: u128 = 0;
                    for &(e, c) in terms.iter().take_while(|&&(e, _)| e <= k) {
                        acc += c as u128 * dense[k - e] as u128;
                    }
                    (acc % u as u128) as u64
                };
                TruncatedSeries::from_residues(gather(t, force_seq, compute), u)
            }
            _ => unreachable!("domains already checked"),
        })
    }

    /// e-th power by repeated multiplication or binary powering, whichever
    /// the sparsity of the base makes cheaper.
    pub fn pow(&self, e: u64) -> Result<Self, SeriesError> {
        let t = self.trunc_order();
        if e == 0 {
            return Self::one(t, self.modulus());
        }
        let nonzeros = match &self.repr {
            Repr::Exact(c) => c.iter().filter(|x| !x.is_zero()).count(),
            Repr::Modular { coeffs, .. } => coeffs.iter().filter(|&&x| x != 0).count(),
        };
        // repeated multiplication costs ~ e * T * nonzeros; binary powering
        // ~ log2(e) squarings of a dense series, ~ log2(e) * T^2 / 2.
        let log_e = 64 - e.leading_zeros() as u64;
        let repeated_wins = (e as u128) * (nonzeros as u128) <= (log_e as u128) * (t as u128) / 2;
        if repeated_wins {
            let mut acc = self.clone();
            for _ in 1..e {
                acc = acc.mul(self)?;
            }
            Ok(acc)
        } else {
            let mut acc = Self::one(t, self.modulus())?;
            let mut base = self.clone();
            let mut e = e;
            loop {
                if e & 1 == 1 {
                    acc = acc.mul(&base)?;
                }
                e >>= 1;
                if e == 0 {
                    break;
                }
                base = base.mul(&base)?;
            }
            Ok(acc)
        }
    }

    /// Reciprocal series.  Requires the constant term to be a unit: ±1 for
    /// exact coefficients, invertible mod u otherwise.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let t = self.trunc_order();
        match &self.repr {
            Repr::Exact(a) => {
                if t == 0 {
                    return Ok(self.clone());
                }
                if !a[0].is_one() && a[0] != -BigInt::one() {
                    return Err(SeriesError::NonInvertibleConstant(a[0].to_string()));
                }
                let c0_neg = a[0].is_negative();
                let terms: Vec<(usize, &BigInt)> = (1..t).filter(|&e| !a[e].is_zero()).map(|e| (e, &a[e])).collect();
                let mut b: Vec<BigInt> = Vec::with_capacity(t);
                b.push(a[0].clone()); // 1/±1 = ±1
                for k in 1..t {
                    let mut acc = BigInt::zero();
                    for &(e, c) in terms.iter().take_while(|&&(e, _)| e <= k) {
                        acc += c * &b[k - e];
                    }
                    // b[k] = -acc / a[0]
                    b.push(if c0_neg { acc } else { -acc });
                }
                Ok(TruncatedSeries::from_bigint_coeffs(b))
            }
            Repr::Modular { coeffs: a, modulus } => {
                let u = *modulus;
                if t == 0 {
                    return Ok(self.clone());
                }
                let inv0 = mod_inverse(a[0], u).ok_or_else(|| {
                    SeriesError::NonInvertibleConstant(format!("{} (mod {})", a[0], u))
                })?;
                let terms: Vec<(usize, u64)> = (1..t).filter(|&e| a[e] != 0).map(|e| (e, a[e])).collect();
                let mut b: Vec<u64> = Vec::with_capacity(t);
                b.push(inv0);
                for k in 1..t {
                    let mut acc: u128 = 0;
                    for &(e, c) in terms.iter().take_while(|&&(e, _)| e <= k) {
                        acc += c as u128 * b[k - e] as u128;
                    }
                    let s = (acc % u as u128) as u64;
                    b.push(((u - s) as u128 * inv0 as u128 % u as u128) as u64);
                }
                Ok(TruncatedSeries::from_residues(b, u))
            }
        }
    }

    /// Substitute q -> q^k.  The result is known through order k*T: the new
    /// coefficients between multiples of k are genuinely zero.
    pub fn dilate(&self, k: usize) -> Result<Self, SeriesError> {
        if k == 0 {
            return Err(SeriesError::ZeroDilation);
        }
        let t = self.trunc_order();
        let new_t = (t as u128)
            .checked_mul(k as u128)
            .filter(|&n| n <= usize::MAX as u128)
            .ok_or(SeriesError::LengthOverflow(t as u128 * k as u128))?
            as usize;
        Ok(match &self.repr {
            Repr::Exact(a) => {
                let mut c = vec![BigInt::zero(); new_t];
                for (n, v) in a.iter().enumerate() {
                    c[n * k] = v.clone();
                }
                TruncatedSeries::from_bigint_coeffs(c)
            }
            Repr::Modular { coeffs: a, modulus } => {
                let mut c = vec![0u64; new_t];
                for (n, &v) in a.iter().enumerate() {
                    c[n * k] = v;
                }
                TruncatedSeries::from_residues(c, *modulus)
            }
        })
    }

    /// Multiply by q^s: coefficients move up by s and the truncation order
    /// grows by s (the shifted-in low coefficients are exactly zero).
    pub fn shift_up(&self, s: usize) -> Self {
        match &self.repr {
            Repr::Exact(a) => {
                let mut c = vec![BigInt::zero(); a.len() + s];
                for (n, v) in a.iter().enumerate() {
                    c[n + s] = v.clone();
                }
                TruncatedSeries::from_bigint_coeffs(c)
            }
            Repr::Modular { coeffs: a, modulus } => {
                let mut c = vec![0u64; a.len() + s];
                c[s..].copy_from_slice(a);
                TruncatedSeries::from_residues(c, *modulus)
            }
        }
    }

    /// Forget coefficients from `order` on.  Lengthening is an error.
    pub fn truncate(&self, order: usize) -> Result<Self, SeriesError> {
        if order > self.trunc_order() {
            return Err(SeriesError::TruncationTooLong {
                requested: order,
                available: self.trunc_order(),
            });
        }
        Ok(match &self.repr {
            Repr::Exact(a) => TruncatedSeries::from_bigint_coeffs(a[..order].to_vec()),
            Repr::Modular { coeffs, modulus } => {
                TruncatedSeries::from_residues(coeffs[..order].to_vec(), *modulus)
            }
        })
    }

    /// Reduce an exact series modulo u, or a modular series to a divisor of
    /// its modulus.  Anything else loses information and is an error.
    pub fn reduce_mod(&self, u: u64) -> Result<Self, SeriesError> {
        let u = check_modulus(u)?;
        match &self.repr {
            Repr::Exact(a) => {
                let ub = BigInt::from(u);
                let coeffs = a
                    .iter()
                    .map(|c| {
                        let r = c % &ub;
                        let r = if r.is_negative() { r + &ub } else { r };
                        u64::try_from(r).expect("residue fits u64")
                    })
                    .collect();
                Ok(TruncatedSeries::from_residues(coeffs, u))
            }
            Repr::Modular { coeffs, modulus } => {
                if modulus % u != 0 {
                    return Err(SeriesError::IncompatibleReduction {
                        old: *modulus,
                        new: u,
                    });
                }
                Ok(TruncatedSeries::from_residues(
                    coeffs.iter().map(|&c| c % u).collect(),
                    u,
                ))
            }
        }
    }
}

/// (q; q)_inf = prod_{n>=1} (1 - q^n) through order T, by the pentagonal
/// number theorem: the coefficient of q^(k(3k±1)/2) is (-1)^k and every other
/// coefficient vanishes.
pub fn euler_function(order: usize, modulus: Option<u64>) -> Result<TruncatedSeries, SeriesError> {
    let mut s = TruncatedSeries::zero(order, modulus)?;
    let assign = |s: &mut TruncatedSeries, idx: usize, negative: bool| match &mut s.repr {
        Repr::Exact(c) => c[idx] = if negative { -BigInt::one() } else { BigInt::one() },
        Repr::Modular { coeffs, modulus } => {
            coeffs[idx] = if negative { *modulus - 1 } else { 1 } % *modulus
        }
    };
    if order > 0 {
        assign(&mut s, 0, false);
    }
    let mut k: u128 = 1;
    loop {
        let g1 = k * (3 * k - 1) / 2;
        let g2 = k * (3 * k + 1) / 2;
        if g1 >= order as u128 {
            break;
        }
        let negative = k % 2 == 1;
        assign(&mut s, g1 as usize, negative);
        if g2 < order as u128 {
            assign(&mut s, g2 as usize, negative);
        }
        k += 1;
    }
    Ok(s)
}

/// Return `(dense, sparse)` views of the two factor prefixes, the sparser
/// one second.
fn order_by_sparsity<'a, C>(
    a: &'a [C],
    b: &'a [C],
    t: usize,
    is_zero: impl Fn(&C) -> bool,
) -> (&'a [C], &'a [C]) {
    let na = a[..t.min(a.len())].iter().filter(|c| !is_zero(c)).count();
    let nb = b[..t.min(b.len())].iter().filter(|c| !is_zero(c)).count();
    if na >= nb {
        (&a[..t.min(a.len())], &b[..t.min(b.len())])
    } else {
        (&b[..t.min(b.len())], &a[..t.min(a.len())])
    }
}

fn sparse_terms<C>(s: &[C], t: usize, is_zero: impl Fn(&C) -> bool) -> Vec<(usize, &C)> {
    s.iter()
        .take(t)
        .enumerate()
        .filter(|(_, c)| !is_zero(c))
        .collect()
}

/// Evaluate `compute(k)` for k in 0..t, fanning out to rayon for long
/// outputs when the `parallel` feature is enabled.
#[cfg(feature = "parallel")]
fn gather<C: Send>(t: usize, force_seq: bool, compute: impl Fn(usize) -> C + Sync + Send) -> Vec<C> {
    const PAR_THRESHOLD: usize = 4096;
    if force_seq || t < PAR_THRESHOLD {
        (0..t).map(compute).collect()
    } else {
        (0..t).into_par_iter().map(compute).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn gather<C>(t: usize, _force_seq: bool, compute: impl Fn(usize) -> C) -> Vec<C> {
    (0..t).map(compute).collect()
}

/// Inverse of a modulo u (u need not be prime), by the extended Euclidean
/// algorithm; `None` when gcd(a, u) > 1.
pub(crate) fn mod_inverse(a: u64, u: u64) -> Option<u64> {
    let (mut r0, mut r1) = (u as i128, (a % u) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(u as i128) as u64)
}
