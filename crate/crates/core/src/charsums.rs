//! Interval character sums and the diagnostics built from them: the
//! sigma/rho partial-sum maxima, the fourth-moment identity, reference
//! bound formulas, and the census of primes with an unusually large
//! initial character sum.
//!
//! Bounds with unspecified implied constants are evaluated with constant
//! one and natural logarithms; they feed ratio diagnostics, never hard
//! assertions. The one exception is the exact `11 sigma_p(B)` fiber
//! inequality, which is asserted where it is used.

use num::complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::ffield::{CharacterHandle, PrimeContext};
use crate::primes::sieve_upto;

/// A summation window for character sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Window {
    /// Signed box |n| <= B.
    Centered(u64),
    /// The run n = start+1, ..., start+len.
    Interval { start: i64, len: u64 },
}

impl Window {
    /// Residues mod p of the window elements, multiples of p dropped
    /// (every character vanishes there). A window wider than p yields
    /// residues with multiplicity.
    pub fn unit_residues(&self, p: u64) -> Vec<u64> {
        let pi = p as i64;
        let range: Box<dyn Iterator<Item = i64>> = match *self {
            Window::Centered(b) => Box::new(-(b as i64)..=b as i64),
            Window::Interval { start, len } => Box::new(start + 1..=start + len as i64),
        };
        range.map(|n| n.rem_euclid(pi) as u64).filter(|&r| r != 0).collect()
    }
}

/// sum_{n=L+1}^{L+M} chi(n), with n reduced mod p and chi(p | n) = 0.
pub fn interval_char_sum(chi: &CharacterHandle<'_>, start: i64, len: u64) -> Complex64 {
    assert!(len >= 1, "window length must be >= 1");
    (start + 1..=start + len as i64).map(|n| chi.eval_signed(n)).sum()
}

/// |sum_{n=1}^{M} chi(n)| maximized over nonprincipal chi with chi^d = chi_0.
///
/// Full periods of a nonprincipal character vanish, so only M mod p terms
/// are ever summed.
fn max_initial_sum(ctx: &PrimeContext, d: u64, len: u64) -> f64 {
    let rem = len % ctx.p();
    ctx.characters_of_order_dividing(d)
        .iter()
        .map(|chi| {
            if rem == 0 {
                0.0
            } else {
                interval_char_sum(chi, 0, rem).norm()
            }
        })
        .fold(0.0, f64::max)
}

/// (sigma_p(M), rho_p(M)): the floored-at-one maxima of initial character
/// sums over characters of order dividing gcd(p-1,6) resp. gcd(p-1,4).
pub fn sigma_rho(ctx: &PrimeContext, len: u64) -> (f64, f64) {
    assert!(len >= 1);
    let sigma = max_initial_sum(ctx, ctx.d_p(), len).max(1.0);
    let rho = max_initial_sum(ctx, ctx.e_p(), len).max(1.0);
    (sigma, rho)
}

/// Both sides of the fourth-moment identity over one window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourthMoment {
    /// sum over nonprincipal chi of |sum_window chi(n)|^4.
    pub char_side: f64,
    /// Quadruples (n1,n2,n3,n4) of window units with n1 n2 = n3 n4 mod p.
    pub count_side: u64,
    /// Window elements coprime to p (the principal character's sum).
    pub unit_count: u64,
}

impl FourthMoment {
    /// (char_side + unit_count^4) / (p - 1), which must equal count_side.
    pub fn identity_value(&self, p: u64) -> f64 {
        let w = self.unit_count as f64;
        (self.char_side + w * w * w * w) / (p - 1) as f64
    }
}

/// Computes the fourth moment of window sums over all nonprincipal
/// characters, together with the multiplicative-quadruple count it must
/// equal after adding the principal term and dividing by p - 1.
pub fn fourth_moment(ctx: &PrimeContext, window: Window) -> FourthMoment {
    let p = ctx.p();
    let residues = window.unit_residues(p);
    assert!(!residues.is_empty(), "window has no unit elements");

    // Quadruple count via the histogram of pair products.
    let mut products = vec![0u64; p as usize];
    for &n1 in &residues {
        for &n2 in &residues {
            products[ctx.mul(n1, n2) as usize] += 1;
        }
    }
    let count_side = products.iter().map(|&c| c * c).sum();

    // One pass per character over the window's discrete logs.
    let order = p - 1;
    let dlogs: Vec<u64> = residues.iter().map(|&r| ctx.dlog(r)).collect();
    let mut char_side = 0.0;
    for j in 1..order {
        let s: Complex64 = dlogs
            .iter()
            .map(|&d| {
                let angle =
                    2.0 * std::f64::consts::PI * ((j * d % order) as f64) / (order as f64);
                Complex64::new(angle.cos(), angle.sin())
            })
            .sum();
        let sq = s.norm_sqr();
        char_side += sq * sq;
    }

    FourthMoment { char_side, count_side, unit_count: residues.len() as u64 }
}

/// The reference bound M^(1-1/nu) p^((nu+1)/(4 nu^2)) (ln p)^(1/nu),
/// implied constant one. nu = 1 is the Polya-Vinogradov shape, nu >= 2
/// the Burgess shapes.
pub fn burgess_bound(p: u64, len: u64, nu: u32) -> f64 {
    assert!(nu >= 1, "nu must be >= 1");
    let nu = nu as f64;
    let m = len as f64;
    let p = p as f64;
    m.powf(1.0 - 1.0 / nu) * p.powf((nu + 1.0) / (4.0 * nu * nu)) * p.ln().powf(1.0 / nu)
}

/// Outcome of the exceptional-prime census.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaraevCensus {
    /// Primes 3 < p <= x with some nonprincipal chi, chi^{d_p} = chi_0,
    /// whose initial sum exceeds M^(1-eta). Ascending.
    pub exceptional_primes: Vec<u64>,
    /// The reference envelope x^(3/4 + 4 eta); no pass/fail semantics.
    pub envelope: f64,
}

impl GaraevCensus {
    pub fn count(&self) -> usize {
        self.exceptional_primes.len()
    }
}

/// Census of primes whose sixth-power-class characters have an initial
/// sum larger than M^(1-eta).
pub fn garaev_census(x: u64, len: u64, eta: f64) -> GaraevCensus {
    assert!(len >= 1, "window length must be >= 1");
    assert!((0.0..1.0).contains(&eta), "eta must lie in [0, 1)");
    let threshold = (len as f64).powf(1.0 - eta);
    let mut exceptional_primes: Vec<u64> = sieve_upto(x)
        .into_par_iter()
        .filter(|&p| p > 3)
        .filter(|&p| {
            let ctx = PrimeContext::new(p).expect("census prime in supported range");
            max_initial_sum(&ctx, ctx.d_p(), len) > threshold
        })
        .collect();
    exceptional_primes.sort_unstable();
    GaraevCensus { exceptional_primes, envelope: (x as f64).powf(0.75 + 4.0 * eta) }
}

/// The two error functionals of the box-counting theorem, evaluated with
/// implied constants one. Diagnostic only.
pub fn error_bounds(p: u64, a_bound: u64, b_bound: u64, sigma: f64, rho: f64) -> (f64, f64) {
    let p = p as f64;
    let a = a_bound as f64;
    let b = b_bound as f64;
    let cross = (a * b).sqrt() * p.sqrt();
    let e1 = (a * sigma + a.sqrt() * b * p.powf(0.25) + cross)
        .min(b * rho + a * b.sqrt() * p.powf(0.25) + cross);
    let e2 = (a * sigma + b.sqrt() * p * p.ln()).min(b * rho + a.sqrt() * p * p.ln());
    (e1, e2)
}
