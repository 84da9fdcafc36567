//! Per-curve exact statistics for y^2 = x^3 + ax + b over F_p:
//! group order, Frobenius trace, Sato-Tate angle, and group structure.
//!
//! The group order is computed in one O(p) pass with the precomputed
//! quadratic-character table,
//!
//! ```text
//!     #E(F_p) = p + 1 + sum_{x in F_p} chi_2(x^3 + ax + b),
//! ```
//!
//! and full point enumeration is kept only as an independent test oracle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffield::PrimeContext;
use crate::isoclasses::ClassTable;
use crate::primes::{factorize, gcd, lcm};

/// Exact statistics of one nonsingular curve over F_p.
///
/// The group is Z/n1 x Z/n2 with n1 | n2; the curve is cyclic iff n1 = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveStats {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    /// Frobenius trace t = p + 1 - #E(F_p).
    pub trace: i64,
    /// Group order #E(F_p).
    pub order: u64,
    /// Sato-Tate angle psi = arccos(t / 2 sqrt(p)), in (0, pi).
    pub angle: f64,
    pub n1: u64,
    pub n2: u64,
}

impl CurveStats {
    #[inline]
    pub fn is_cyclic(&self) -> bool {
        self.n1 == 1
    }
}

/// 4a^3 + 27b^2 mod p.
pub fn discriminant(ctx: &PrimeContext, a: u64, b: u64) -> u64 {
    let a = a % ctx.p();
    let b = b % ctx.p();
    let a3 = ctx.mul(ctx.mul(a, a), a);
    let b2 = ctx.mul(b, b);
    ctx.add(ctx.mul(4 % ctx.p(), a3), ctx.mul(27 % ctx.p(), b2))
}

fn require_nonsingular(ctx: &PrimeContext, a: u64, b: u64) -> Result<(u64, u64)> {
    let a = a % ctx.p();
    let b = b % ctx.p();
    if discriminant(ctx, a, b) == 0 {
        Err(Error::SingularCurve { p: ctx.p(), a, b })
    } else {
        Ok((a, b))
    }
}

/// Full statistics of the curve (a, b); errors on singular input.
pub fn curve_stats(ctx: &PrimeContext, a: u64, b: u64) -> Result<CurveStats> {
    let (a, b) = require_nonsingular(ctx, a, b)?;
    let order = order_via_char_sum(ctx, a, b);
    let (n1, n2) = structure_of(ctx, a, b, order);
    Ok(assemble_stats(ctx, a, b, order, n1, n2))
}

/// Builds the stats record and enforces the global invariants: the Hasse
/// bound, n1 | n2, n1 | p - 1, n1 n2 = N, and psi strictly inside (0, pi).
pub(crate) fn assemble_stats(
    ctx: &PrimeContext,
    a: u64,
    b: u64,
    order: u64,
    n1: u64,
    n2: u64,
) -> CurveStats {
    let p = ctx.p();
    let trace = p as i64 + 1 - order as i64;
    assert!(trace * trace <= 4 * p as i64, "Hasse bound violated: p={p} a={a} b={b}");
    assert!(n1 * n2 == order && n2 % n1 == 0 && (p - 1) % n1 == 0, "bad group structure");
    let angle = (trace as f64 / (2.0 * (p as f64).sqrt())).clamp(-1.0, 1.0).acos();
    assert!(angle > 0.0 && angle < std::f64::consts::PI);
    CurveStats { p, a, b, trace, order, angle, n1, n2 }
}

/// #E(F_p) in one pass over x with the quadratic-character table.
pub(crate) fn order_via_char_sum(ctx: &PrimeContext, a: u64, b: u64) -> u64 {
    let p = ctx.p();
    let mut sum: i64 = 0;
    for x in 0..p {
        let x2 = ctx.mul(x, x);
        let rhs = ctx.add(ctx.mul(x2, x), ctx.add(ctx.mul(a, x), b));
        sum += ctx.qr(rhs) as i64;
    }
    (p as i64 + 1 + sum) as u64
}

/// Independent order oracle: counts affine solutions of y^2 = x^3 + ax + b
/// by full double enumeration, plus one for the point at infinity.
pub fn trace_oracle(ctx: &PrimeContext, a: u64, b: u64) -> Result<u64> {
    let (a, b) = require_nonsingular(ctx, a, b)?;
    let p = ctx.p();
    let mut count = 1u64;
    for x in 0..p {
        let x2 = ctx.mul(x, x);
        let rhs = ctx.add(ctx.mul(x2, x), ctx.add(ctx.mul(a, x), b));
        for y in 0..p {
            if ctx.mul(y, y) == rhs {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Group structure E(F_p) = Z/n1 x Z/n2, n1 | n2.
///
/// The group exponent n2 is the lcm of point orders, found by walking one
/// point per x-coordinate ((x, y) and (x, -y) have equal order). The walk
/// stops as soon as only one admissible n1 (a divisor d of gcd(N, p-1)
/// with d^2 | N and exponent | N/d) remains.
pub fn group_structure(ctx: &PrimeContext, a: u64, b: u64) -> Result<(u64, u64)> {
    let (a, b) = require_nonsingular(ctx, a, b)?;
    let order = order_via_char_sum(ctx, a, b);
    Ok(structure_of(ctx, a, b, order))
}

pub(crate) fn structure_of(ctx: &PrimeContext, a: u64, b: u64, order: u64) -> (u64, u64) {
    let p = ctx.p();
    let arith = Arith { ctx, a };
    let factors = factorize(order);

    let g0 = gcd(order, p - 1);
    let candidates: Vec<u64> = crate::primes::divisors(g0)
        .into_iter()
        .filter(|&d| (d * d) <= order && order % (d * d) == 0)
        .collect();

    let mut exponent = 1u64;
    if candidates.len() > 1 {
        'scan: for x in 0..p {
            let x2 = ctx.mul(x, x);
            let rhs = ctx.add(ctx.mul(x2, x), ctx.add(ctx.mul(a, x), b));
            if ctx.qr(rhs) < 0 {
                continue;
            }
            let y = if rhs == 0 { 0 } else { ctx.pow_g(ctx.dlog(rhs) / 2) };
            debug_assert_eq!(ctx.mul(y, y), rhs);
            let point = Some((x, y));
            if exponent > 1 && arith.scalar_mul(exponent, point).is_none() {
                continue; // order already divides the running exponent
            }
            exponent = lcm(exponent, arith.point_order(point, order, &factors));
            let mut admissible = candidates.iter().filter(|&&d| (order / d) % exponent == 0);
            let first = *admissible.next().expect("true n1 is always admissible");
            if admissible.next().is_none() {
                exponent = order / first;
                break 'scan;
            }
        }
    } else {
        exponent = order;
    }

    (order / exponent, exponent)
}

/// mu(E): the least max(a, b) over all curves (a, b), 1 <= a, b < p,
/// in the given isomorphism class.
pub fn min_weierstrass(table: &ClassTable, class_id: u32) -> Result<u64> {
    let (r, s) = table.representative(class_id);
    if r == 0 || s == 0 {
        return Err(Error::UndefinedForSpecialClass);
    }
    let mu = table
        .orbit_members(class_id)
        .into_iter()
        .map(|(a, b)| a.max(b))
        .min()
        .expect("orbit is nonempty");
    Ok(mu)
}

/// Affine point arithmetic on y^2 = x^3 + ax + b; `None` is infinity.
struct Arith<'a> {
    ctx: &'a PrimeContext,
    a: u64,
}

type Point = Option<(u64, u64)>;

impl Arith<'_> {
    fn add(&self, p1: Point, p2: Point) -> Point {
        let ctx = self.ctx;
        let (x1, y1) = match p1 {
            None => return p2,
            Some(v) => v,
        };
        let (x2, y2) = match p2 {
            None => return p1,
            Some(v) => v,
        };
        let lambda = if x1 == x2 {
            if ctx.add(y1, y2) == 0 {
                return None;
            }
            // Tangent slope (3 x1^2 + a) / (2 y1).
            let num = ctx.add(ctx.mul(3 % ctx.p(), ctx.mul(x1, x1)), self.a);
            ctx.mul(num, ctx.inv(ctx.add(y1, y1)))
        } else {
            ctx.mul(ctx.sub(y2, y1), ctx.inv(ctx.sub(x2, x1)))
        };
        let x3 = ctx.sub(ctx.mul(lambda, lambda), ctx.add(x1, x2));
        let y3 = ctx.sub(ctx.mul(lambda, ctx.sub(x1, x3)), y1);
        Some((x3, y3))
    }

    fn scalar_mul(&self, mut k: u64, mut base: Point) -> Point {
        let mut acc = None;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    /// Order of a point, given the group order and its factorization.
    fn point_order(&self, point: Point, group_order: u64, factors: &[(u64, u32)]) -> u64 {
        debug_assert!(self.scalar_mul(group_order, point).is_none());
        let mut ord = group_order;
        for &(q, _) in factors {
            while ord % q == 0 {
                let t = ord / q;
                if self.scalar_mul(t, point).is_none() {
                    ord = t;
                } else {
                    break;
                }
            }
        }
        ord
    }
}
