//! Per-prime aggregate statistics and the averaged sweeps over all primes
//! p <= x, with main-term comparisons.
//!
//! Per-prime counts (angle intervals, cyclicity, divisibility) run over
//! coefficient pairs with ab != 0, matching how the per-prime statistics
//! are set up; the integer-box sweeps instead count every integer pair of
//! the box, including a = 0 and b = 0 columns, skipping only singular
//! reductions.
//!
//! All floating aggregates are accumulated in a fixed order (ascending
//! class id, then ascending prime), so results are bitwise reproducible
//! under any parallel schedule.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::CurveStats;
use crate::densities;
use crate::error::{Error, Result};
use crate::ffield::PrimeContext;
use crate::isoclasses::{build_class_table, m_p_count, BoxSpec, ClassTable};
use crate::primes::sieve_upto;

/// Exact per-prime counts over pairs (a, b) in F_p* x F_p*.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerPrimeRecord {
    pub p: u64,
    /// Pairs whose Sato-Tate angle lies in the requested [alpha, beta].
    pub t_count: u64,
    /// Pairs with cyclic group.
    pub c_count: u64,
    /// Pairs whose group order is divisible by m, per requested m.
    pub d_counts: BTreeMap<u64, u64>,
    /// Angle-interval discrepancy against the Sato-Tate measure.
    pub discrepancy: f64,
    /// Chebyshev moments of the angle distribution, n = 1..=3.
    pub katz: BTreeMap<u32, f64>,
    /// Singular pairs with ab != 0 excluded from the counts (p - 1 of them).
    pub skipped_singular: u64,
}

fn validate_interval(alpha: f64, beta: f64) -> Result<()> {
    if !(0.0..std::f64::consts::PI).contains(&alpha)
        || beta <= alpha
        || beta > std::f64::consts::PI
    {
        return Err(Error::InvalidInterval(alpha, beta));
    }
    Ok(())
}

/// Weighted iterator over classes whose orbits lie in ab != 0.
fn weighted_classes(table: &ClassTable) -> impl Iterator<Item = (&CurveStats, u64)> {
    table
        .classes()
        .iter()
        .filter(|c| c.representative.0 != 0 && c.representative.1 != 0)
        .map(|c| (&c.stats, c.orbit_size))
}

/// Counts angle-interval, cyclicity, and divisibility statistics over the
/// pairs with ab != 0, from class statistics weighted by orbit sizes.
pub fn per_prime_counts(
    table: &ClassTable,
    alpha: f64,
    beta: f64,
    ms: &[u64],
) -> Result<PerPrimeRecord> {
    validate_interval(alpha, beta)?;
    if let Some(&m) = ms.iter().find(|&&m| m < 1) {
        return Err(Error::InvalidM(m as i64));
    }

    let mut t_count = 0u64;
    let mut c_count = 0u64;
    let mut d_counts: BTreeMap<u64, u64> = ms.iter().map(|&m| (m, 0)).collect();
    for (stats, weight) in weighted_classes(table) {
        if stats.angle >= alpha && stats.angle <= beta {
            t_count += weight;
        }
        if stats.is_cyclic() {
            c_count += weight;
        }
        for (&m, count) in d_counts.iter_mut() {
            if stats.order % m == 0 {
                *count += weight;
            }
        }
    }

    let katz = (1..=3).map(|n| (n, katz_moment(table, n))).collect();
    Ok(PerPrimeRecord {
        p: table.p(),
        t_count,
        c_count,
        d_counts,
        discrepancy: st_discrepancy(table),
        katz,
        skipped_singular: table.p() - 1,
    })
}

/// Largest deviation sup |#T_p(alpha, beta) - mu_ST(alpha, beta) p^2| over
/// all 0 <= alpha < beta <= pi, computed exactly from the sorted multiset
/// of class angles (extrema occur at sample angles and interval ends).
pub fn st_discrepancy(table: &ClassTable) -> f64 {
    let p = table.p();
    let p2 = (p * p) as f64;

    // Traces determine angles monotonically (descending trace = ascending
    // angle), so aggregating weights by trace dedupes equal angles exactly.
    let mut by_trace: BTreeMap<i64, u64> = BTreeMap::new();
    for (stats, weight) in weighted_classes(table) {
        *by_trace.entry(stats.trace).or_insert(0) += weight;
    }

    let mut cumulative = 0u64;
    // Per angle: H_minus = C_{i-1} - G(psi_i), H_plus = C_i - G(psi_i),
    // where C is the cumulative angle count and G the scaled measure.
    let mut h_minus = Vec::with_capacity(by_trace.len());
    let mut h_plus = Vec::with_capacity(by_trace.len());
    for (&trace, &weight) in by_trace.iter().rev() {
        let angle = (trace as f64 / (2.0 * (p as f64).sqrt())).clamp(-1.0, 1.0).acos();
        let measure = densities::mu_st_raw(0.0, angle) * p2;
        h_minus.push(cumulative as f64 - measure);
        cumulative += weight;
        h_plus.push(cumulative as f64 - measure);
    }
    let end = cumulative as f64 - p2; // beta = pi

    // sup of (count - measure): forward scan, alpha candidates before beta.
    let mut best = 0.0f64;
    let mut left_min = 0.0f64; // alpha = 0
    for i in 0..h_plus.len() {
        best = best.max(h_minus[i] - left_min); // beta just below angle i
        left_min = left_min.min(h_minus[i]); // alpha = psi_i
        best = best.max(h_plus[i] - left_min); // beta = psi_i
        left_min = left_min.min(h_plus[i]); // alpha just above psi_i
    }
    best = best.max(end - left_min);

    // sup of (measure - count): backward scan, beta candidates after alpha.
    let mut right_min = end; // beta = pi
    for i in (0..h_plus.len()).rev() {
        best = best.max(h_plus[i] - right_min); // alpha just above psi_i
        right_min = right_min.min(h_plus[i]); // beta = psi_i
        best = best.max(h_minus[i] - right_min); // alpha = psi_i
        right_min = right_min.min(h_minus[i]); // beta just below psi_i
    }
    best.max(-right_min) // alpha = 0
}

/// The n-th Chebyshev moment of the angle distribution:
/// (1/(p-1)^2) sum over ab != 0 pairs of sin((n+1) psi) / sin(psi).
///
/// The per-class terms p^{n/2} U_n(t / 2 sqrt(p)) satisfy the integer
/// recurrence s_{j+1} = t s_j - p s_{j-1}, so the numerator accumulates
/// exactly; n = 1 yields exactly zero by quadratic-twist cancellation.
pub fn katz_moment(table: &ClassTable, n: u32) -> f64 {
    assert!((1..=14).contains(&n), "moment index must be in 1..=14");
    let p = table.p();
    let mut numerator: i128 = 0;
    for (stats, weight) in weighted_classes(table) {
        let t = stats.trace as i128;
        let (mut prev, mut cur) = (1i128, t); // s_0, s_1
        for _ in 1..n {
            (prev, cur) = (cur, t * cur - p as i128 * prev);
        }
        numerator += weight as i128 * cur;
    }
    let mut scale = (p as f64).powi((n / 2) as i32);
    if n % 2 == 1 {
        scale *= (p as f64).sqrt();
    }
    let pairs = (p - 1) as f64 * (p - 1) as f64;
    numerator as f64 / (scale * pairs)
}

/// Which property of a curve's reduction a sweep counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "stat", rename_all = "snake_case")]
pub enum Statistic {
    /// Sato-Tate angle in [alpha, beta].
    AngleInterval { alpha: f64, beta: f64 },
    /// Cyclic group.
    Cyclic,
    /// m divides the group order.
    Divisibility { m: u64 },
    /// Frobenius trace equals t.
    TraceEquals { t: i64 },
    /// Group order congruent to k mod m.
    OrderResidue { m: u64, k: u64 },
    /// Trace congruent to k mod m.
    TraceResidue { m: u64, k: u64 },
}

impl Statistic {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Statistic::AngleInterval { alpha, beta } => validate_interval(alpha, beta),
            Statistic::Cyclic => Ok(()),
            Statistic::Divisibility { m } if m >= 1 => Ok(()),
            Statistic::Divisibility { m } => Err(Error::InvalidM(m as i64)),
            Statistic::TraceEquals { .. } => Ok(()),
            Statistic::OrderResidue { m, k } | Statistic::TraceResidue { m, k } => {
                if m < 1 {
                    Err(Error::InvalidM(m as i64))
                } else if k >= m {
                    Err(Error::InvalidStatistic(format!("residue k={k} must be below m={m}")))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Whether a class with these statistics is counted.
    pub fn matches(&self, stats: &CurveStats) -> bool {
        match *self {
            Statistic::AngleInterval { alpha, beta } => {
                stats.angle >= alpha && stats.angle <= beta
            }
            Statistic::Cyclic => stats.is_cyclic(),
            Statistic::Divisibility { m } => stats.order % m == 0,
            Statistic::TraceEquals { t } => stats.trace == t,
            Statistic::OrderResidue { m, k } => stats.order % m == k,
            Statistic::TraceResidue { m, k } => stats.trace.rem_euclid(m as i64) as u64 == k,
        }
    }
}

/// One prime's contribution to a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepPrime {
    pub p: u64,
    /// Integer pairs of the box counted at this prime.
    pub count: u64,
    /// Integer pairs of the box with singular reduction, skipped.
    pub skipped_singular: u64,
}

/// Echo of the semantic sweep parameters (execution details such as the
/// worker count are deliberately excluded; outputs must not depend on them).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepConfig {
    pub x: u64,
    #[serde(flatten)]
    pub box_spec: BoxSpec,
    #[serde(flatten)]
    pub statistic: Statistic,
}

/// Aggregated sweep output; serializes to the stable report schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: SweepConfig,
    pub per_prime: Vec<SweepPrime>,
    pub aggregate: u64,
    pub main_term: f64,
    pub relative_deviation: Option<f64>,
    pub warnings: Vec<String>,
}

/// Box count of one prime for one statistic.
pub fn box_count_for_prime(
    table: &ClassTable,
    box_spec: &BoxSpec,
    stat: &Statistic,
) -> SweepPrime {
    let mp = m_p_count(table, |id| stat.matches(&table.class(id).stats), box_spec);
    SweepPrime { p: table.p(), count: mp.count, skipped_singular: mp.skipped_singular }
}

/// Ascending primes <= x; pi(x) is the length.
pub fn prime_list(x: u64) -> Vec<u64> {
    sieve_upto(x)
}

/// Sweeps all primes 3 < p <= x, counting box pairs satisfying the
/// statistic, with class tables built fresh per prime.
pub fn sweep(x: u64, box_spec: BoxSpec, stat: Statistic) -> Result<Report> {
    sweep_with(x, box_spec, stat, |p| Ok(Arc::new(build_class_table(&PrimeContext::new(p)?))))
}

/// Sweep over a caller-controlled table source (a cache, for instance).
///
/// Primes are processed in parallel; records are merged in ascending-prime
/// order, so the report is independent of the worker schedule.
pub fn sweep_with(
    x: u64,
    box_spec: BoxSpec,
    stat: Statistic,
    table_source: impl Fn(u64) -> Result<Arc<ClassTable>> + Sync,
) -> Result<Report> {
    assert!(x >= 5, "sweep needs x >= 5");
    stat.validate()?;

    let primes: Vec<u64> = prime_list(x).into_iter().filter(|&p| p > 3).collect();
    let mut per_prime = primes
        .par_iter()
        .map(|&p| {
            let table = table_source(p)?;
            Ok(box_count_for_prime(&table, &box_spec, &stat))
        })
        .collect::<Result<Vec<SweepPrime>>>()?;
    per_prime.sort_by_key(|r| r.p);

    let aggregate: u64 = per_prime.iter().map(|r| r.count).sum();
    let (main_term, mut warnings) = main_term_for(x, &box_spec, &stat)?;
    warnings.push(
        "main term uses pi(x) over all primes including 2 and 3; the sweep skips p <= 3"
            .to_string(),
    );
    if box_spec.a_shift != 0 || box_spec.b_shift != 0 {
        warnings.push("shifted box: main term still uses the centered-box constants".to_string());
    }

    let relative_deviation =
        (main_term > 0.0).then(|| (aggregate as f64 / main_term - 1.0).abs());
    Ok(Report {
        config: SweepConfig { x, box_spec, statistic: stat },
        per_prime,
        aggregate,
        main_term,
        relative_deviation,
        warnings,
    })
}

fn main_term_for(x: u64, box_spec: &BoxSpec, stat: &Statistic) -> Result<(f64, Vec<String>)> {
    const EULER_EPS: f64 = 1e-12;
    let ab = box_spec.a_half_width as f64 * box_spec.b_half_width as f64;
    let pi_x = prime_list(x).len() as f64;
    let mut warnings = Vec::new();
    let main = match *stat {
        Statistic::AngleInterval { alpha, beta } => {
            4.0 * densities::mu_st(alpha, beta)? * ab * pi_x
        }
        Statistic::Cyclic => 4.0 * densities::big_theta(EULER_EPS).value * ab * pi_x,
        Statistic::Divisibility { m } => {
            let density = densities::omega_avg(m)?.to_f64().expect("density fits f64");
            4.0 * density * ab * pi_x
        }
        Statistic::TraceEquals { t } => {
            warnings.push(
                "trace-count main term sqrt(x)/ln(x) is a reference only at desk scale"
                    .to_string(),
            );
            let constant = if t == 0 {
                densities::fouvry_murty_constant()
            } else {
                densities::c_t(t, EULER_EPS)?.value
            };
            4.0 * ab * constant * (x as f64).sqrt() / (x as f64).ln()
        }
        Statistic::OrderResidue { m, .. } | Statistic::TraceResidue { m, .. } => {
            warnings.push(
                "residue-class main term assumes uniform residues (reference only)".to_string(),
            );
            4.0 * ab * pi_x / m as f64
        }
    };
    Ok((main, warnings))
}
