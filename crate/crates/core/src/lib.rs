//! Computational machinery for t-core partitions and their arithmetic.
//!
//! A partition is a *t-core* if no hook number of its Young diagram is
//! divisible by t.  Writing a_t(n) for the number of t-core partitions of n,
//! the generating function is
//!
//! ```text
//!   sum_{n>=0} a_t(n) q^n  =  (q^t; q^t)_inf^t / (q; q)_inf .
//! ```
//!
//! The crate provides:
//!
//! * [`qseries`] — truncated formal power series over exact integers or a
//!   fixed modulus: Euler products, Cauchy products, inverses, dilations.
//! * [`cores`] — hook tables, brute-force t-core counting, the generating
//!   series above, and the parity characterization of 3-core counts.
//! * [`eta`] — eta-quotients: weights, level conditions, exact cusp orders,
//!   holomorphy certification, Kronecker characters, and builders for the
//!   specific quotients whose expansions witness t-core congruences.
//! * [`radu`] — the Radu–Sellers finite-check engine: it reduces a claimed
//!   congruence `a_p(m n + t') == 0 (mod u)` for all n and all t' in an
//!   orbit P(t) to a finite, mechanically checkable set of coefficient
//!   conditions, and returns a machine-readable verification report.
//! * [`density`] — empirical densities of n with `a_t(n) == 0 (mod p^j)`.
//!
//! Everything that feeds a proof is computed in exact arithmetic: arbitrary
//! precision integers for series coefficients, exact rationals for cusp
//! orders and check bounds.  Floating point is never used.
//!
//! With the default `parallel` feature the heavy inner loops (long Cauchy
//! products, batch claim verification, density sweeps) fan out via rayon;
//! without it the same entry points run sequentially.

pub(crate) mod arith;
pub mod cores;
pub mod density;
pub mod eta;
pub mod qseries;
pub mod radu;

pub use qseries::TruncatedSeries;
