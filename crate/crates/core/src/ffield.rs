//! Exact arithmetic in F_p and the multiplicative characters of F_p*.
//!
//! A [`PrimeContext`] fixes one prime p > 3 together with its smallest
//! primitive root g and O(p) lookup tables: powers of g, discrete logs
//! base g, and the quadratic character. Every character chi_j is then
//! indexed by an exponent j against g,
//!
//! ```text
//!     chi_j(n) = exp(2 pi i * j * dlog(n) / (p - 1)),     chi_j(0) = 0,
//! ```
//!
//! so equality and multiplicativity questions reduce to integer
//! arithmetic on exponents; complex values appear only when a sum is
//! actually evaluated.

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::primes::{factorize, gcd, is_prime};

/// Largest supported prime; all tables are O(p).
pub const MAX_PRIME: u64 = 1 << 20;

/// One prime p with its primitive root and lookup tables.
///
/// Immutable after construction and safe to share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeContext {
    p: u64,
    g: u64,
    /// `pow[k] = g^k mod p` for `k = 0..p-1`.
    pow: Vec<u32>,
    /// `dlog[n]` with `g^dlog[n] = n` for `n = 1..p-1`; entry 0 is unused.
    dlog: Vec<u32>,
    /// Quadratic character values in {-1, 0, +1}, indexed by residue.
    qr: Vec<i8>,
    d_p: u64,
    e_p: u64,
}

impl PrimeContext {
    /// Builds the full context for a prime `p > 3`.
    ///
    /// Deterministic: the smallest primitive root is always chosen.
    pub fn new(p: u64) -> Result<Self> {
        if p <= 3 {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            return Err(Error::PrimeTooSmall(p));
        }
        if p > MAX_PRIME {
            return Err(Error::CapacityExceeded(p, MAX_PRIME));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }

        let g = smallest_primitive_root(p);
        let mut pow = vec![0u32; (p - 1) as usize];
        let mut dlog = vec![0u32; p as usize];
        let mut acc = 1u64;
        for k in 0..(p - 1) {
            pow[k as usize] = acc as u32;
            dlog[acc as usize] = k as u32;
            acc = acc * g % p;
        }
        debug_assert_eq!(acc, 1);

        let mut qr = vec![0i8; p as usize];
        for n in 1..p {
            qr[n as usize] = if dlog[n as usize] % 2 == 0 { 1 } else { -1 };
        }

        Ok(PrimeContext {
            p,
            g,
            pow,
            dlog,
            qr,
            d_p: gcd(p - 1, 6),
            e_p: gcd(p - 1, 4),
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The smallest primitive root of p.
    #[inline]
    pub fn generator(&self) -> u64 {
        self.g
    }

    /// gcd(p - 1, 6); the number of sixth-power classes in F_p*.
    #[inline]
    pub fn d_p(&self) -> u64 {
        self.d_p
    }

    /// gcd(p - 1, 4); the number of fourth-power classes in F_p*.
    #[inline]
    pub fn e_p(&self) -> u64 {
        self.e_p
    }

    /// Discrete log base g of a unit residue.
    #[inline]
    pub fn dlog(&self, n: u64) -> u64 {
        debug_assert!(n % self.p != 0, "dlog of 0 is undefined");
        self.dlog[(n % self.p) as usize] as u64
    }

    /// `g^k mod p` for any exponent (reduced mod p - 1).
    #[inline]
    pub fn pow_g(&self, k: u64) -> u64 {
        self.pow[(k % (self.p - 1)) as usize] as u64
    }

    /// Quadratic character chi_2(n): +1 on nonzero squares, -1 on
    /// non-squares, 0 at 0.
    #[inline]
    pub fn qr(&self, n: u64) -> i8 {
        self.qr[(n % self.p) as usize]
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.p as u128) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - b + a
        }
    }

    /// Multiplicative inverse of a unit, via the power tables.
    #[inline]
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0, "cannot invert 0");
        let k = self.dlog[(a % self.p) as usize] as u64;
        self.pow[((self.p - 1 - k) % (self.p - 1)) as usize] as u64
    }

    /// Reduces a signed integer into `0..p`.
    #[inline]
    pub fn reduce(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// The representative of `n` in the signed system {0, +-1, ..., +-(p-1)/2}.
    #[inline]
    pub fn signed(&self, n: u64) -> i64 {
        let r = n % self.p;
        if r > (self.p - 1) / 2 {
            r as i64 - self.p as i64
        } else {
            r as i64
        }
    }

    /// The character of index `j`, `0 <= j <= p - 2`.
    pub fn character(&self, j: u64) -> Result<CharacterHandle<'_>> {
        if j > self.p - 2 {
            return Err(Error::IndexOutOfRange { j, max: self.p - 2 });
        }
        Ok(CharacterHandle { ctx: self, j })
    }

    /// All characters of F_p*, by ascending index (chi_0 first).
    pub fn characters(&self) -> impl Iterator<Item = CharacterHandle<'_>> {
        (0..self.p - 1).map(move |j| CharacterHandle { ctx: self, j })
    }

    /// The nonprincipal characters chi with chi^d = chi_0, i.e. of order
    /// dividing d. There are gcd(d, p - 1) - 1 of them.
    pub fn characters_of_order_dividing(&self, d: u64) -> Vec<CharacterHandle<'_>> {
        assert!(d >= 1);
        let step = (self.p - 1) / gcd(d, self.p - 1);
        (1..gcd(d, self.p - 1))
            .map(|k| CharacterHandle { ctx: self, j: k * step })
            .collect()
    }
}

/// A multiplicative character chi_j of F_p*, held as an exponent index.
#[derive(Clone, Copy)]
pub struct CharacterHandle<'a> {
    ctx: &'a PrimeContext,
    j: u64,
}

impl<'a> CharacterHandle<'a> {
    #[inline]
    pub fn index(&self) -> u64 {
        self.j
    }

    #[inline]
    pub fn context(&self) -> &'a PrimeContext {
        self.ctx
    }

    /// Multiplicative order: (p - 1) / gcd(j, p - 1).
    pub fn order(&self) -> u64 {
        (self.ctx.p - 1) / gcd(self.j, self.ctx.p - 1)
    }

    #[inline]
    pub fn is_principal(&self) -> bool {
        self.j == 0
    }

    /// chi_j(n) as a point on the unit circle; chi_j(0) = 0.
    ///
    /// `n` is reduced mod p first, so any u64 argument is accepted.
    pub fn eval(&self, n: u64) -> Complex64 {
        let p = self.ctx.p;
        let r = n % p;
        if r == 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.root_of_unity(self.j * self.ctx.dlog[r as usize] as u64)
    }

    /// chi_j(n) for signed n (reduced into 0..p first).
    pub fn eval_signed(&self, n: i64) -> Complex64 {
        self.eval(self.ctx.reduce(n))
    }

    /// e^(2 pi i k / (p-1)).
    #[inline]
    fn root_of_unity(&self, k: u64) -> Complex64 {
        let order = self.ctx.p - 1;
        let angle = 2.0 * std::f64::consts::PI * ((k % order) as f64) / (order as f64);
        Complex64::new(angle.cos(), angle.sin())
    }
}

fn smallest_primitive_root(p: u64) -> u64 {
    let phi = p - 1;
    let prime_factors: Vec<u64> = factorize(phi).into_iter().map(|(q, _)| q).collect();
    'candidates: for g in 2..p {
        for &q in &prime_factors {
            if pow_mod(g, phi / q, p) == 1 {
                continue 'candidates;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root");
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}
