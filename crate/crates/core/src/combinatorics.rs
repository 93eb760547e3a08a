//! Exact integer/rational kernels: factorials, double factorials with the
//! (−1)!! = 0!! = 1 convention, total binomial coefficients, and the two
//! double-factorial summation identities every spectral formula rests on.
//!
//! All exact values are arbitrary precision. A parallel log-space path
//! (`log_factorial`, `log_double_factorial`) serves evaluations at scales
//! where the exact integers are no longer practical; the threshold between
//! the two paths is always the caller's choice.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision natural number.
pub type BigNat = BigUint;

/// Arbitrary-precision rational, always reduced, denominator positive.
pub type Rat = BigRational;

/// n! as an exact natural number.
pub fn factorial(n: u64) -> BigNat {
    let mut acc = BigNat::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// n!! with the convention (−1)!! = 0!! = 1.
///
/// For n ≥ 1 this is the product of the same-parity integers down to 1 or 2.
/// Arguments below −1 are rejected.
pub fn double_factorial(n: i64) -> Result<BigNat> {
    if n < -1 {
        return Err(Error::Domain(format!(
            "double factorial is defined for n >= -1, got {n}"
        )));
    }
    Ok(df(n))
}

/// Internal double factorial for arguments already known to be ≥ −1.
pub(crate) fn df(n: i64) -> BigNat {
    debug_assert!(n >= -1);
    let mut acc = BigNat::one();
    let mut i = n;
    while i > 1 {
        acc *= i as u64;
        i -= 2;
    }
    acc
}

/// a!!/b!! for same-parity a ≥ b ≥ −1, computed as the product b+2, b+4, …, a.
pub(crate) fn df_ratio(a: i64, b: i64) -> BigNat {
    debug_assert!(a >= b && b >= -1 && (a - b) % 2 == 0);
    let mut acc = BigNat::one();
    let mut i = b + 2;
    while i <= a {
        acc *= i as u64;
        i += 2;
    }
    acc
}

/// Binomial coefficient C(n, k), extended so that C(n, k) = 0 whenever
/// n < 0 or n < k. The negative-n case covers the C(−1, 1) = 0 convention
/// used by the harmonic-subspace dimension formula.
pub fn binomial(n: i64, k: u64) -> BigNat {
    if n < 0 || (n as u64) < k {
        return BigNat::zero();
    }
    let n = n as u64;
    let k = k.min(n - k);
    let mut acc = BigNat::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i; // exact: every prefix is itself a binomial coefficient
    }
    acc
}

/// Both sides of the double-factorial/binomial summation identity
///
///   Σ_{k=0}^{n} C(n,k) (2n−2k−1+q)!! (2k−1+p)!!
///     = (p−1)!! (q−1)!! (2n+p+q)!! / (p+q)!!
///
/// evaluated independently so a caller can assert equality.
pub fn eval_df_binomial_identity(n: u64, p: u64, q: u64) -> (BigNat, BigNat) {
    let mut lhs = BigNat::zero();
    for k in 0..=n {
        lhs += binomial(n as i64, k)
            * df(2 * (n - k) as i64 - 1 + q as i64)
            * df(2 * k as i64 - 1 + p as i64);
    }
    let rhs = df(p as i64 - 1)
        * df(q as i64 - 1)
        * df_ratio(2 * n as i64 + (p + q) as i64, (p + q) as i64);
    (lhs, rhs)
}

/// Both sides of the nested generalization
///
///   Σ_{0 ≤ k_{d−1} ≤ … ≤ k_1 ≤ k_0}
///       [ Π_{j=0}^{d−2} C(k_j, k_{j+1}) (2k_j−2k_{j+1}+q−1)!! ] (2k_{d−1}+p−1)!!
///     = (2k_0+p+(d−1)(q+1)−1)!! (p−1)!! [(q−1)!!]^{d−1} / (p+(d−1)(q+1)−1)!!
///
/// The d = 2 case reduces to `eval_df_binomial_identity`.
pub fn eval_nested_df_identity(d: u64, k0: u64, p: u64, q: u64) -> Result<(BigNat, BigNat)> {
    if d < 2 {
        return Err(Error::Domain(format!("nested identity requires d >= 2, got {d}")));
    }
    let mut lhs = BigNat::zero();
    // chain holds (k_1, …, k_{d-1}); k_0 is fixed.
    let mut chain = vec![0u64; (d - 1) as usize];
    nested_sum(&mut chain, 0, k0, p, q, &mut lhs);
    let m = (d - 1) as i64 * (q as i64 + 1);
    let rhs = df_ratio(2 * k0 as i64 + p as i64 + m - 1, p as i64 + m - 1)
        * df(p as i64 - 1)
        * df(q as i64 - 1).pow((d - 1) as u32);
    Ok((lhs, rhs))
}

fn nested_sum(chain: &mut [u64], depth: usize, k0: u64, p: u64, q: u64, acc: &mut BigNat) {
    let upper = if depth == 0 { k0 } else { chain[depth - 1] };
    if depth == chain.len() {
        let mut term = BigNat::one();
        let mut prev = k0;
        for &kj in chain.iter() {
            term *= binomial(prev as i64, kj) * df(2 * (prev - kj) as i64 + q as i64 - 1);
            prev = kj;
        }
        term *= df(2 * prev as i64 + p as i64 - 1);
        *acc += term;
        return;
    }
    for v in 0..=upper {
        chain[depth] = v;
        nested_sum(chain, depth + 1, k0, p, q, acc);
    }
}

/// ln(n!) via the log-gamma function.
pub fn log_factorial(n: u64) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

/// ln(n!!) via (2m)!! = 2^m m! and (2m−1)!! = (2m)!/(2^m m!).
pub fn log_double_factorial(n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if n % 2 == 0 {
        let m = n / 2;
        m as f64 * std::f64::consts::LN_2 + log_factorial(m)
    } else {
        let m = (n + 1) / 2;
        log_factorial(2 * m) - m as f64 * std::f64::consts::LN_2 - log_factorial(m)
    }
}

/// Shorthand rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Rational num/den from exact naturals.
pub fn rat_from_nats(num: BigNat, den: BigNat) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Reciprocal of an exact natural.
pub fn rat_recip(den: BigNat) -> Rat {
    Rat::new(BigInt::one(), BigInt::from(den))
}

/// ln of a positive natural, accurate to ~1 ulp even for huge magnitudes:
/// the top 64 bits carry the mantissa, the rest contributes bits·ln 2.
pub fn big_ln(x: &BigNat) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).ln();
    }
    let top = (x >> (bits - 64)).to_u64().unwrap();
    (top as f64).ln() + (bits - 64) as f64 * std::f64::consts::LN_2
}

/// ln|r| for a nonzero rational; `None` for zero.
pub fn rat_ln_abs(r: &Rat) -> Option<f64> {
    if r.is_zero() {
        return None;
    }
    let num = r.numer().abs().to_biguint().unwrap();
    let den = r.denom().to_biguint().unwrap();
    Some(big_ln(&num) - big_ln(&den))
}

/// Rational to double, robust against numerator/denominator magnitudes far
/// beyond the f64 range: both are shifted down together before conversion so
/// only their ratio matters.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.numer().is_negative() { -1.0 } else { 1.0 };
    let num = r.numer().abs().to_biguint().unwrap();
    let den = r.denom().to_biguint().unwrap();
    let nb = num.bits();
    let db = den.bits();
    let shift = nb.max(db).saturating_sub(1000);
    let nf = (&num >> shift).to_f64().unwrap_or(f64::INFINITY);
    let df_ = (&den >> shift).to_f64().unwrap_or(f64::INFINITY);
    sign * nf / df_
}
