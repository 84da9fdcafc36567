//! Closed-form densities and constants: the Sato-Tate measure, the
//! per-prime cyclicity density, its average over primes, the divisibility
//! densities, and the trace-count Euler constants.
//!
//! Everything that feeds an exact acceptance check (the omega and
//! vartheta families) is computed in arbitrary-precision rationals; the
//! irrational constants carry a certified truncation bound instead.

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::primes::{euler_phi, factorize, gcd, sieve_upto};

/// Exact rational density value.
pub type Rational = BigRational;

/// A floating constant together with an honest truncation bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityValue {
    pub value: f64,
    pub abs_error: f64,
}

fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Sato-Tate measure of [alpha, beta]: (2/pi) integral of sin^2.
pub fn mu_st(alpha: f64, beta: f64) -> Result<f64> {
    if !(0.0..std::f64::consts::PI).contains(&alpha) || beta <= alpha || beta > std::f64::consts::PI
    {
        return Err(Error::InvalidInterval(alpha, beta));
    }
    Ok(mu_st_raw(alpha, beta))
}

/// The antiderivative form, without interval validation.
#[inline]
pub(crate) fn mu_st_raw(alpha: f64, beta: f64) -> f64 {
    use std::f64::consts::PI;
    (beta - alpha) / PI - ((2.0 * beta).sin() - (2.0 * alpha).sin()) / (2.0 * PI)
}

/// Density of cyclic curves mod p: prod over primes q | p-1 of
/// (1 - 1/(q(q^2-1))), exact.
pub fn vartheta_p(p: u64) -> Rational {
    let mut acc = Rational::one();
    for (q, _) in factorize(p - 1) {
        let q = q as i64;
        acc *= Rational::one() - ratio(1, q * (q * q - 1));
    }
    acc
}

/// The average cyclicity constant prod_q (1 - 1/(q(q-1)(q^2-1))),
/// truncated with certified absolute error at most `eps`.
pub fn big_theta(eps: f64) -> DensityValue {
    assert!(eps > 0.0, "eps must be positive");
    let cutoff = euler_cutoff(eps, |q| {
        // Tail of sum 1/(n(n-1)^2(n+1)) <= sum_{m >= Q} m^-4.
        1.0 / (q * q * q * q) + 1.0 / (3.0 * q * q * q)
    });
    let mut value = 1.0;
    for q in sieve_upto(cutoff) {
        let q = q as f64;
        value *= 1.0 - 1.0 / (q * (q - 1.0) * (q * q - 1.0));
    }
    let tail = {
        let q = cutoff as f64;
        1.0 / (q * q * q * q) + 1.0 / (3.0 * q * q * q)
    };
    DensityValue { value, abs_error: tail + 1e-15 }
}

/// Smallest power-of-two cutoff whose tail bound is below eps/2.
fn euler_cutoff(eps: f64, tail: impl Fn(f64) -> f64) -> u64 {
    let mut q = 16u64;
    while tail(q as f64) > eps * 0.5 {
        q *= 2;
        assert!(q <= 1 << 34, "eps too small for f64 truncation");
    }
    q
}

/// omega_k at one prime power q^j.
fn omega_prime_power(k: i64, q: u64, j: u32) -> Rational {
    let qb = BigInt::from(q);
    let modulus = q.pow(j.div_ceil(2));
    if k.rem_euclid(modulus as i64) == 1 % modulus as i64 {
        let half = j / 2; // floor(j/2)
        let numer = qb.pow(half + 1) + qb.pow(half) - BigInt::one();
        let denom = qb.pow(j + half - 1) * (&qb * &qb - BigInt::one());
        BigRational::new(numer, denom)
    } else {
        BigRational::new(BigInt::one(), qb.pow(j - 1) * (qb - BigInt::one()))
    }
}

/// The divisibility density omega_k(m): product of the prime-power branch
/// over q^j || m, exact.
pub fn omega_k(k: i64, m: u64) -> Result<Rational> {
    if m < 1 {
        return Err(Error::InvalidM(m as i64));
    }
    let mut acc = Rational::one();
    for (q, j) in factorize(m) {
        acc *= omega_prime_power(k, q, j);
    }
    Ok(acc)
}

/// mu(m) = prod over q^j || m of q^ceil(j/2); the modulus through which
/// omega_k(m) depends on k.
pub fn mu_of_m(m: u64) -> u64 {
    assert!(m >= 1, "m must be >= 1");
    factorize(m).into_iter().map(|(q, j)| q.pow(j.div_ceil(2))).product()
}

/// Omega_m: the average of omega_k(m) over k coprime to mu(m), exact.
pub fn omega_avg(m: u64) -> Result<Rational> {
    if m < 1 {
        return Err(Error::InvalidM(m as i64));
    }
    let mu = mu_of_m(m);
    let mut sum = Rational::zero();
    for k in 1..=mu {
        if gcd(k, mu) == 1 {
            sum += omega_k(k as i64, m)?;
        }
    }
    Ok(sum / BigRational::from(BigInt::from(euler_phi(mu))))
}

fn generic_trace_factor(p: f64) -> f64 {
    p * (p * p - p - 1.0) / ((p - 1.0) * (p * p - 1.0))
}

/// The averaged trace-count constant for t != 0:
/// (2/pi) prod_{p | t} (1 - p^-2)^-1 prod_{p not| t} p(p^2-p-1)/((p-1)(p^2-1)),
/// truncated with certified absolute error at most `eps`.
pub fn c_t(t: i64, eps: f64) -> Result<DensityValue> {
    if t == 0 {
        return Err(Error::ZeroTrace);
    }
    assert!(eps > 0.0, "eps must be positive");
    let support: Vec<u64> = factorize(t.unsigned_abs()).into_iter().map(|(q, _)| q).collect();
    // Generic factors are 1 - 1/((p-1)(p^2-1)); tail <= sum_{m >= Q} m^-3.
    let tail_bound = |q: f64| 1.0 / (q * q * q) + 1.0 / (2.0 * q * q);
    let cutoff = euler_cutoff(eps / 1.1, tail_bound);
    let mut value = 2.0 / std::f64::consts::PI;
    for p in sieve_upto(cutoff) {
        let pf = p as f64;
        if support.contains(&p) {
            value *= 1.0 / (1.0 - 1.0 / (pf * pf));
        } else {
            value *= generic_trace_factor(pf);
        }
    }
    // Prime divisors of t past the cutoff still need their special factor.
    for &p in support.iter().filter(|&&p| p > cutoff) {
        let pf = p as f64;
        value *= (1.0 - 1.0 / (pf * pf)).recip() / generic_trace_factor(pf);
        value *= generic_trace_factor(pf);
    }
    let abs_error = value.abs() * tail_bound(cutoff as f64) + 1e-15;
    Ok(DensityValue { value, abs_error })
}

/// The main-term constant pi/3 of the averaged trace-zero count.
pub fn fouvry_murty_constant() -> f64 {
    std::f64::consts::FRAC_PI_3
}

/// True when the rational is stored in lowest terms with positive
/// denominator (used by tests; the representation maintains it).
pub fn is_reduced(r: &Rational) -> bool {
    r.denom().is_positive()
        && num::Integer::gcd(&r.numer().abs(), &r.denom().abs()) == BigInt::one()
}
