//! Isomorphism classes of curves over F_p and the counting machinery
//! built on them.
//!
//! Two nonsingular curves (a, b) and (r, s) are isomorphic over F_p iff
//! a = r u^4 and b = s u^6 for a unit u. [`build_class_table`] partitions
//! all p^2 - p nonsingular coefficient pairs into these orbits, computes
//! the per-curve statistics once per class, and keeps an O(p^2) lookup
//! from coefficient pairs to class ids.
//!
//! The module also houses the power-fiber sets behind the averaged
//! theorems (how often s u^6 lands in a short signed window, jointly with
//! r u^4), and [`m_p_count`], which counts integer coefficient boxes
//! against class predicates.

use serde::Serialize;

use crate::curves::{self, CurveStats};
use crate::error::{Error, Result};
use crate::ffield::PrimeContext;

/// Largest prime for which a class table may be built; the pair lookup is
/// O(p^2) memory.
pub const MAX_TABLE_PRIME: u64 = 1 << 13;

const UNSET: u32 = u32::MAX;

/// One isomorphism class: representative, orbit size, shared statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassRecord {
    pub id: u32,
    /// Lexicographically smallest (r, s) in the orbit.
    pub representative: (u64, u64),
    /// Number of coefficient pairs in the orbit; (p-1)/2 when rs != 0.
    pub orbit_size: u64,
    pub stats: CurveStats,
}

/// All isomorphism classes mod p, with a pair -> class lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassTable {
    p: u64,
    classes: Vec<ClassRecord>,
    /// Row-major (a, b) -> class id; `UNSET` marks singular pairs.
    lookup: Vec<u32>,
}

/// Partitions all nonsingular pairs into isomorphism classes.
///
/// Deterministic: pairs are scanned in lexicographic order, so class ids
/// ascend with their smallest member. Statistics are computed once on the
/// representative and shared by the whole orbit.
pub fn build_class_table(ctx: &PrimeContext) -> ClassTable {
    rebuild(ctx, |ctx, a, b, _, _| {
        let order = curves::order_via_char_sum(ctx, a, b);
        let (n1, n2) = curves::structure_of(ctx, a, b, order);
        Ok(curves::assemble_stats(ctx, a, b, order, n1, n2))
    })
    .expect("fresh statistics never fail")
}

/// Per-class data sufficient to reconstruct a table without recomputing
/// statistics; orbit shapes are re-derived and cross-checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassSeed {
    pub representative: (u64, u64),
    pub orbit_size: u64,
    pub trace: i64,
    pub n1: u64,
    pub n2: u64,
}

/// Rebuilds a class table from stored per-class rows (a cache, say).
///
/// The orbit scan is repeated and every seed is checked against it:
/// representative, orbit size, class order, and the arithmetic relations
/// between trace, order, and group structure. The result is
/// field-by-field identical to a fresh [`build_class_table`].
pub fn reassemble_class_table(ctx: &PrimeContext, seeds: &[ClassSeed]) -> Result<ClassTable> {
    let p = ctx.p();
    let mismatch = |what: String| Error::SeedMismatch(what);
    rebuild(ctx, |ctx, a, b, orbit_size, id| {
        let seed = seeds
            .get(id as usize)
            .ok_or_else(|| mismatch(format!("missing class {id}")))?;
        if seed.representative != (a, b) {
            return Err(mismatch(format!(
                "class {id} representative {:?} != scanned ({a}, {b})",
                seed.representative
            )));
        }
        if seed.orbit_size != orbit_size {
            return Err(mismatch(format!(
                "class {id} orbit size {} != scanned {orbit_size}",
                seed.orbit_size
            )));
        }
        let order = p as i64 + 1 - seed.trace;
        let hasse_ok = seed.trace * seed.trace <= 4 * p as i64;
        let structure_ok = order > 0
            && seed.n1 >= 1
            && seed.n1 * seed.n2 == order as u64
            && seed.n2 % seed.n1 == 0
            && (p - 1) % seed.n1 == 0;
        if !hasse_ok || !structure_ok {
            return Err(mismatch(format!("class {id} carries inconsistent statistics")));
        }
        Ok(curves::assemble_stats(ctx, a, b, order as u64, seed.n1, seed.n2))
    })
    .and_then(|table| {
        if table.class_count() == seeds.len() {
            Ok(table)
        } else {
            Err(mismatch(format!(
                "{} seeds for {} scanned classes",
                seeds.len(),
                table.class_count()
            )))
        }
    })
}

/// Shared orbit scan: `stats_for` supplies the per-representative record
/// (freshly computed, or replayed from stored rows).
fn rebuild(
    ctx: &PrimeContext,
    mut stats_for: impl FnMut(&PrimeContext, u64, u64, u64, u32) -> Result<CurveStats>,
) -> Result<ClassTable> {
    let p = ctx.p();
    assert!(p <= MAX_TABLE_PRIME, "class tables are O(p^2); p = {p} is over the cap");
    let pu = p as usize;
    let mut lookup = vec![UNSET; pu * pu];
    let mut classes: Vec<ClassRecord> = Vec::with_capacity(2 * pu + 8);

    // Fourth and sixth powers of every unit, shared by all orbit scans.
    let mut u4 = vec![0u64; pu];
    let mut u6 = vec![0u64; pu];
    for u in 1..p {
        let u2 = ctx.mul(u, u);
        u4[u as usize] = ctx.mul(u2, u2);
        u6[u as usize] = ctx.mul(u4[u as usize], u2);
    }

    let mut covered = 0u64;
    for a in 0..p {
        for b in 0..p {
            if lookup[(a * p + b) as usize] != UNSET
                || curves::discriminant(ctx, a, b) == 0
            {
                continue;
            }
            let id = classes.len() as u32;
            let mut orbit_size = 0u64;
            for u in 1..pu {
                let pa = ctx.mul(a, u4[u]);
                let pb = ctx.mul(b, u6[u]);
                let slot = &mut lookup[(pa * p + pb) as usize];
                if *slot == UNSET {
                    *slot = id;
                    orbit_size += 1;
                }
            }
            covered += orbit_size;
            classes.push(ClassRecord {
                id,
                representative: (a, b),
                orbit_size,
                stats: stats_for(ctx, a, b, orbit_size, id)?,
            });
        }
    }
    // Exactly p singular pairs exist for p > 3: (-3t^2, 2t^3), t in F_p.
    assert_eq!(covered, p * p - p, "orbit sizes must cover all nonsingular pairs");

    Ok(ClassTable { p, classes, lookup })
}

impl ClassTable {
    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[ClassRecord] {
        &self.classes
    }

    pub fn class(&self, id: u32) -> &ClassRecord {
        &self.classes[id as usize]
    }

    pub fn representative(&self, id: u32) -> (u64, u64) {
        self.classes[id as usize].representative
    }

    /// Class id of (a, b); errors on singular pairs.
    pub fn classify(&self, a: u64, b: u64) -> Result<u32> {
        let a = a % self.p;
        let b = b % self.p;
        match self.lookup[(a * self.p + b) as usize] {
            UNSET => Err(Error::SingularCurve { p: self.p, a, b }),
            id => Ok(id),
        }
    }

    /// All coefficient pairs in the orbit of a class, ascending.
    pub fn orbit_members(&self, id: u32) -> Vec<(u64, u64)> {
        let (r, s) = self.representative(id);
        let ctx_p = self.p;
        let mut members: Vec<(u64, u64)> = (1..ctx_p)
            .map(|u| {
                let u2 = (u as u128 * u as u128 % ctx_p as u128) as u64;
                let u4 = (u2 as u128 * u2 as u128 % ctx_p as u128) as u64;
                let u6 = (u4 as u128 * u2 as u128 % ctx_p as u128) as u64;
                (
                    (r as u128 * u4 as u128 % ctx_p as u128) as u64,
                    (s as u128 * u6 as u128 % ctx_p as u128) as u64,
                )
            })
            .collect();
        members.sort_unstable();
        members.dedup();
        members
    }
}

/// #Z_s(B; p): units u with s u^6 congruent to a signed residue of
/// absolute value at most B.
pub fn z_set_count(ctx: &PrimeContext, s: u64, bound: u64) -> u64 {
    let p = ctx.p();
    let s = s % p;
    assert!(s != 0, "s must be a unit");
    assert!(bound >= 1);
    let mut count = 0u64;
    for u in 1..p {
        let u2 = ctx.mul(u, u);
        let u6 = ctx.mul(ctx.mul(u2, u2), u2);
        if ctx.signed(ctx.mul(s, u6)).unsigned_abs() <= bound {
            count += 1;
        }
    }
    count
}

/// #Z_{r,s}(A, B; p): members of Z_s(B; p) whose fourth power lands r in
/// the signed window |a| <= A as well.
pub fn zrs_count(ctx: &PrimeContext, r: u64, s: u64, a_bound: u64, b_bound: u64) -> u64 {
    let p = ctx.p();
    let (r, s) = (r % p, s % p);
    assert!(s != 0, "s must be a unit");
    assert!(a_bound >= 1 && b_bound >= 1);
    let mut count = 0u64;
    for u in 1..p {
        let u2 = ctx.mul(u, u);
        let u4 = ctx.mul(u2, u2);
        let u6 = ctx.mul(u4, u2);
        if ctx.signed(ctx.mul(s, u6)).unsigned_abs() <= b_bound
            && ctx.signed(ctx.mul(r, u4)).unsigned_abs() <= a_bound
        {
            count += 1;
        }
    }
    count
}

/// sum over r in F_p of |#Z_{r,s}(A,B;p) - 2A #Z_s(B;p) / p|, the
/// left-hand side of both averaged fiber lemmas.
pub fn zrs_deviation(ctx: &PrimeContext, s: u64, a_bound: u64, b_bound: u64) -> f64 {
    let p = ctx.p();
    let s = s % p;
    assert!(s != 0, "s must be a unit");
    assert!(a_bound >= 1 && b_bound >= 1 && a_bound < p && b_bound < p);

    let mut fourth_powers = Vec::new();
    for u in 1..p {
        let u2 = ctx.mul(u, u);
        let u4 = ctx.mul(u2, u2);
        let u6 = ctx.mul(u4, u2);
        if ctx.signed(ctx.mul(s, u6)).unsigned_abs() <= b_bound {
            fourth_powers.push(u4);
        }
    }
    let z_count = fourth_powers.len() as u64;

    // For each u in Z_s, the r with |signed(r u^4)| <= A are exactly
    // a * (u^4)^{-1} for |a| <= A, so accumulate those fibers directly.
    let mut counts = vec![0u64; p as usize];
    for &v in &fourth_powers {
        let vinv = ctx.inv(v);
        for a in -(a_bound as i64)..=(a_bound as i64) {
            counts[ctx.mul(ctx.reduce(a), vinv) as usize] += 1;
        }
    }

    let mean = 2.0 * a_bound as f64 * z_count as f64 / p as f64;
    counts.iter().map(|&c| (c as f64 - mean).abs()).sum()
}

/// An integer coefficient box: a over `a_shift +- a_half_width`, b over
/// `b_shift +- b_half_width`. Defaults shifts of 0 give |a| <= A, |b| <= B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoxSpec {
    pub a_half_width: u64,
    pub b_half_width: u64,
    pub a_shift: i64,
    pub b_shift: i64,
}

impl BoxSpec {
    pub fn new(a_half_width: u64, b_half_width: u64) -> Self {
        Self::with_shifts(a_half_width, b_half_width, 0, 0)
    }

    pub fn with_shifts(a_half_width: u64, b_half_width: u64, a_shift: i64, b_shift: i64) -> Self {
        assert!(a_half_width >= 1 && b_half_width >= 1, "box half-widths must be >= 1");
        BoxSpec { a_half_width, b_half_width, a_shift, b_shift }
    }

    /// Inclusive integer range of the a coordinate.
    pub fn a_range(&self) -> (i64, i64) {
        (self.a_shift - self.a_half_width as i64, self.a_shift + self.a_half_width as i64)
    }

    /// Inclusive integer range of the b coordinate.
    pub fn b_range(&self) -> (i64, i64) {
        (self.b_shift - self.b_half_width as i64, self.b_shift + self.b_half_width as i64)
    }

    /// For each residue mod p, how many integers of the a (resp. b) range
    /// reduce to it. Boxes wider than p count residues with multiplicity.
    pub fn residue_multiplicities(&self, p: u64) -> (Vec<u64>, Vec<u64>) {
        (range_multiplicities(self.a_range(), p), range_multiplicities(self.b_range(), p))
    }
}

fn range_multiplicities((lo, hi): (i64, i64), p: u64) -> Vec<u64> {
    let pi = p as i64;
    (0..pi)
        .map(|r| {
            let count = (hi - r).div_euclid(pi) - (lo - 1 - r).div_euclid(pi);
            count as u64
        })
        .collect()
}

/// Result of a box count against a class predicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MpCount {
    /// Integer pairs in the box whose reduction is nonsingular and whose
    /// class satisfies the predicate.
    pub count: u64,
    /// Integer pairs in the box whose reduction is singular.
    pub skipped_singular: u64,
    /// #S: coefficient pairs mod p belonging to a satisfying class.
    pub member_pairs: u64,
    /// The main term 4AB #S / p^2.
    pub expected: f64,
    /// |count - expected|.
    pub deviation: f64,
}

/// Counts integer pairs of the box whose class satisfies `predicate`.
///
/// The predicate is a function of the class id alone, which makes it
/// automatically closed under isomorphism.
pub fn m_p_count(
    table: &ClassTable,
    predicate: impl Fn(u32) -> bool,
    box_spec: &BoxSpec,
) -> MpCount {
    let p = table.p();
    let satisfied: Vec<bool> = table.classes.iter().map(|c| predicate(c.id)).collect();
    let member_pairs: u64 = table
        .classes
        .iter()
        .filter(|c| satisfied[c.id as usize])
        .map(|c| c.orbit_size)
        .sum();

    let (ma, mb) = box_spec.residue_multiplicities(p);
    let mut count = 0u64;
    let mut skipped = 0u64;
    for ra in 0..p {
        if ma[ra as usize] == 0 {
            continue;
        }
        let row = (ra * p) as usize;
        for rb in 0..p {
            let mult = ma[ra as usize] * mb[rb as usize];
            if mult == 0 {
                continue;
            }
            match table.lookup[row + rb as usize] {
                UNSET => skipped += mult,
                id if satisfied[id as usize] => count += mult,
                _ => {}
            }
        }
    }

    let expected = 4.0 * box_spec.a_half_width as f64 * box_spec.b_half_width as f64
        * member_pairs as f64
        / (p as f64 * p as f64);
    MpCount {
        count,
        skipped_singular: skipped,
        member_pairs,
        expected,
        deviation: (count as f64 - expected).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charsums::sigma_rho;
    use crate::primes::{gcd, sieve_upto};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn table5() -> (PrimeContext, ClassTable) {
        let ctx = PrimeContext::new(5).unwrap();
        let table = build_class_table(&ctx);
        (ctx, table)
    }

    #[test]
    fn class_census_p5() {
        let (_, table) = table5();
        assert_eq!(table.class_count(), 12);

        let mut size_by_kind = [0usize; 3]; // ab != 0, a = 0, b = 0
        for c in table.classes() {
            let (r, s) = c.representative;
            if r != 0 && s != 0 {
                assert_eq!(c.orbit_size, 2);
                size_by_kind[0] += 1;
            } else if r == 0 {
                assert_eq!(c.orbit_size, 2);
                size_by_kind[1] += 1;
            } else {
                assert_eq!(c.orbit_size, 1);
                size_by_kind[2] += 1;
            }
        }
        assert_eq!(size_by_kind, [6, 2, 4]);

        // The six ab != 0 classes carry orders {9,4,7,5,8,3}.
        let mut orders: Vec<u64> = table
            .classes()
            .iter()
            .filter(|c| c.representative.0 != 0 && c.representative.1 != 0)
            .map(|c| c.stats.order)
            .collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![3, 4, 5, 7, 8, 9]);
    }

    #[test]
    fn orbit_and_singular_pairs_p5() {
        let (_, table) = table5();
        let id = table.classify(1, 1).unwrap();
        assert_eq!(table.orbit_members(id), vec![(1, 1), (1, 4)]);
        assert_eq!(table.class(id).stats.trace, -3);

        let mut singular = Vec::new();
        for a in 0..5 {
            for b in 0..5 {
                if table.classify(a, b).is_err() {
                    singular.push((a, b));
                }
            }
        }
        assert_eq!(singular, vec![(0, 0), (2, 2), (2, 3), (3, 1), (3, 4)]);
    }

    #[test]
    fn classify_examples() {
        let (_, table) = table5();
        assert_eq!(table.classify(1, 4).unwrap(), table.classify(1, 1).unwrap());
        assert!(matches!(table.classify(3, 1), Err(Error::SingularCurve { .. })));

        let ctx7 = PrimeContext::new(7).unwrap();
        let t7 = build_class_table(&ctx7);
        assert_eq!(t7.classify(2, 1).unwrap(), t7.classify(1, 1).unwrap());
    }

    #[test]
    fn pair_count_identities() {
        for p in sieve_upto(60).into_iter().filter(|&p| p > 3) {
            let ctx = PrimeContext::new(p).unwrap();
            let table = build_class_table(&ctx);
            let total: u64 = table.classes().iter().map(|c| c.orbit_size).sum();
            assert_eq!(total, p * p - p);
            let ab_nonzero: u64 = table
                .classes()
                .iter()
                .filter(|c| c.representative.0 != 0 && c.representative.1 != 0)
                .map(|c| c.orbit_size)
                .sum();
            assert_eq!(ab_nonzero, (p - 1) * (p - 2));
            for c in table.classes() {
                if c.representative.0 != 0 && c.representative.1 != 0 {
                    assert_eq!(c.orbit_size, (p - 1) / 2);
                }
            }
            assert!(table.class_count().abs_diff(2 * p as usize) <= 10);
        }
    }

    #[test]
    fn class_function_well_defined_on_random_triples() {
        let mut rng = StdRng::seed_from_u64(0xc1a55);
        let primes: Vec<u64> = sieve_upto(200).into_iter().filter(|&p| p > 3).collect();
        let mut checked = 0;
        while checked < 1000 {
            let p = primes[rng.gen_range(0..primes.len())];
            let ctx = PrimeContext::new(p).unwrap();
            let table = build_class_table(&ctx);
            // Amortize the table over a batch of triples.
            for _ in 0..50 {
                let a = rng.gen_range(0..p);
                let b = rng.gen_range(0..p);
                let u = rng.gen_range(1..p);
                let Ok(id) = table.classify(a, b) else { continue };
                let u2 = ctx.mul(u, u);
                let u4 = ctx.mul(u2, u2);
                let u6 = ctx.mul(u4, u2);
                let id2 = table.classify(ctx.mul(a, u4), ctx.mul(b, u6)).unwrap();
                assert_eq!(id, id2);
                let s1 = &table.class(id).stats;
                let s2 = curves::curve_stats(&ctx, ctx.mul(a, u4), ctx.mul(b, u6)).unwrap();
                assert_eq!((s1.trace, s1.n1, s1.n2), (s2.trace, s2.n1, s2.n2));
                checked += 1;
            }
        }
    }

    #[test]
    fn reassemble_round_trips() {
        for p in [5u64, 7, 23] {
            let ctx = PrimeContext::new(p).unwrap();
            let fresh = build_class_table(&ctx);
            let seeds: Vec<ClassSeed> = fresh
                .classes()
                .iter()
                .map(|c| ClassSeed {
                    representative: c.representative,
                    orbit_size: c.orbit_size,
                    trace: c.stats.trace,
                    n1: c.stats.n1,
                    n2: c.stats.n2,
                })
                .collect();
            let rebuilt = reassemble_class_table(&ctx, &seeds).unwrap();
            assert_eq!(fresh, rebuilt);

            let mut tampered = seeds.clone();
            tampered[0].trace += 1;
            assert!(matches!(
                reassemble_class_table(&ctx, &tampered),
                Err(Error::SeedMismatch(_))
            ));
            let mut truncated = seeds.clone();
            truncated.pop();
            assert!(reassemble_class_table(&ctx, &truncated).is_err());
            let mut reordered = seeds.clone();
            reordered.swap(0, 1);
            assert!(reassemble_class_table(&ctx, &reordered).is_err());
        }
    }

    #[test]
    fn z_set_examples() {
        let ctx = PrimeContext::new(7).unwrap();
        assert_eq!(z_set_count(&ctx, 1, 2), 6);
        assert_eq!(z_set_count(&ctx, 3, 1), 0);
        let (sigma, _) = sigma_rho(&ctx, 3);
        assert_eq!(z_set_count(&ctx, 1, 3), 6);
        assert!((6.0f64 - 2.0 * 3.0).abs() <= 11.0 * sigma);
    }

    #[test]
    fn zrs_examples() {
        let ctx = PrimeContext::new(7).unwrap();
        assert_eq!(zrs_count(&ctx, 1, 1, 3, 3), 6);
        assert_eq!(zrs_count(&ctx, 1, 1, 2, 3), 4);
        assert_eq!(zrs_count(&ctx, 1, 3, 3, 1), 0);
    }

    #[test]
    fn zrs_sums_count_each_window_pair_once() {
        // Each (u, a) with u in Z_s and |a| <= A determines exactly one r,
        // so summing the fiber counts over all r gives (2A+1) #Z_s.
        for p in [5u64, 7, 11, 13] {
            let ctx = PrimeContext::new(p).unwrap();
            for s in 1..p.min(5) {
                for a_bound in 1..=(p - 1) / 2 {
                    for b_bound in 1..=(p - 1) / 2 {
                        let total: u64 =
                            (0..p).map(|r| zrs_count(&ctx, r, s, a_bound, b_bound)).sum();
                        assert_eq!(total, (2 * a_bound + 1) * z_set_count(&ctx, s, b_bound));
                    }
                }
            }
        }
    }

    #[test]
    fn zrs_deviation_matches_direct_enumeration() {
        // (p=5, s=1, A=2, B=2) and a spread of other parameters.
        for (p, s, a_bound, b_bound) in
            [(5u64, 1u64, 2u64, 2u64), (7, 1, 3, 3), (7, 3, 2, 1), (11, 4, 3, 5), (13, 2, 4, 4)]
        {
            let ctx = PrimeContext::new(p).unwrap();
            let z = z_set_count(&ctx, s, b_bound);
            let mean = 2.0 * a_bound as f64 * z as f64 / p as f64;
            let direct: f64 = (0..p)
                .map(|r| (zrs_count(&ctx, r, s, a_bound, b_bound) as f64 - mean).abs())
                .sum();
            let dev = zrs_deviation(&ctx, s, a_bound, b_bound);
            assert!((dev - direct).abs() < 1e-9, "p={p} s={s}");
        }
    }

    #[test]
    fn z_lemma_bound_small_primes() {
        // |#Z_s(B;p) - 2B| <= 11 sigma_p(B); the exhaustive p <= 200 run
        // lives in the acceptance suite.
        for p in sieve_upto(50).into_iter().filter(|&p| p > 3) {
            let ctx = PrimeContext::new(p).unwrap();
            for b_bound in 1..=(p - 1) / 2 {
                let (sigma, _) = sigma_rho(&ctx, b_bound);
                for s in 1..p {
                    let z = z_set_count(&ctx, s, b_bound) as f64;
                    assert!(
                        (z - 2.0 * b_bound as f64).abs() <= 11.0 * sigma,
                        "p={p} s={s} B={b_bound}"
                    );
                }
            }
        }
    }

    #[test]
    fn z_set_reduces_to_quadratic_residues_when_gcd_is_two() {
        // gcd(p-1,6) = 2 makes u^6 range over the squares, so #Z_s(B) is
        // twice the count of quadratic residues (or non-residues, by the
        // class of s) in the signed window.
        for p in sieve_upto(100).into_iter().filter(|&p| p > 3 && gcd(p - 1, 6) == 2) {
            let ctx = PrimeContext::new(p).unwrap();
            for s in 1..p {
                for b_bound in 1..=(p - 1) / 2 {
                    let same_class = (1..=b_bound)
                        .flat_map(|n| [n as i64, -(n as i64)])
                        .filter(|&b| ctx.qr(ctx.reduce(b)) == ctx.qr(s))
                        .count() as u64;
                    assert_eq!(z_set_count(&ctx, s, b_bound), 2 * same_class, "p={p} s={s}");
                }
            }
        }
    }

    #[test]
    fn box_multiplicities() {
        let spec = BoxSpec::new(2, 2);
        let (ma, mb) = spec.residue_multiplicities(5);
        assert_eq!(ma, vec![1, 1, 1, 1, 1]);
        assert_eq!(mb, vec![1, 1, 1, 1, 1]);

        // Width 15 = 3 * 5 covers every residue three times.
        let wide = BoxSpec::new(7, 7);
        let (ma, _) = wide.residue_multiplicities(5);
        assert_eq!(ma, vec![3, 3, 3, 3, 3]);

        let shifted = BoxSpec::with_shifts(1, 1, 4, 0);
        let (ma, _) = shifted.residue_multiplicities(5);
        // a in {3, 4, 5} -> residues 3, 4, 0.
        assert_eq!(ma, vec![1, 0, 0, 1, 1]);
    }

    #[test]
    fn m_p_count_examples() {
        let (_, table) = table5();
        let all = m_p_count(&table, |_| true, &BoxSpec::new(2, 2));
        assert_eq!(all.count, 20);
        assert_eq!(all.skipped_singular, 5);
        assert_eq!(all.member_pairs, 20);

        let cyclic_small = m_p_count(
            &table,
            |id| table.class(id).stats.is_cyclic(),
            &BoxSpec::new(1, 1),
        );
        assert_eq!(cyclic_small.count, 6);

        let cyclic_full = m_p_count(
            &table,
            |id| table.class(id).stats.is_cyclic(),
            &BoxSpec::new(2, 2),
        );
        assert_eq!(cyclic_full.count, 18);
    }

    #[test]
    fn m_p_count_full_box_and_multiplicity() {
        for p in [5u64, 7, 11] {
            let ctx = PrimeContext::new(p).unwrap();
            let table = build_class_table(&ctx);
            let full = m_p_count(&table, |_| true, &BoxSpec::new((p - 1) / 2, (p - 1) / 2));
            assert_eq!(full.count, p * p - p);
        }
        // Triple-covering box counts everything three times per axis.
        let (_, table) = table5();
        let wide = m_p_count(&table, |_| true, &BoxSpec::new(7, 7));
        assert_eq!(wide.count, 9 * 20);
        assert_eq!(wide.skipped_singular, 9 * 5);
    }
}
