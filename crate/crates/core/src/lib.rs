//! ellstat: exact elliptic-curve statistics over small prime fields.
//!
//! The crate computes, for y^2 = x^3 + ax + b over F_p, exact per-curve
//! data (group order, Frobenius trace, Sato-Tate angle, group structure),
//! partitions coefficient pairs into isomorphism classes, evaluates
//! interval character sums and the closed-form densities they predict,
//! and averages integer coefficient boxes over all primes p <= x with
//! main-term comparisons.
//!
//! Everything is exact enumeration at desk scale: contexts carry O(p)
//! tables, class tables O(p^2) lookups, and all counts are integers.
//! Floating point enters only for angles, measures, and Euler constants.

pub mod charsums;
pub mod curves;
pub mod densities;
pub mod error;
pub mod ffield;
pub mod harness;
pub mod isoclasses;
pub mod primes;

pub use charsums::{
    burgess_bound, error_bounds, fourth_moment, garaev_census, interval_char_sum, sigma_rho,
    FourthMoment, GaraevCensus, Window,
};
pub use curves::{curve_stats, group_structure, min_weierstrass, trace_oracle, CurveStats};
pub use densities::{
    big_theta, c_t, fouvry_murty_constant, mu_of_m, mu_st, omega_avg, omega_k, vartheta_p,
    DensityValue, Rational,
};
pub use error::{Error, Result};
pub use ffield::{CharacterHandle, PrimeContext, MAX_PRIME};
pub use harness::{
    box_count_for_prime, katz_moment, per_prime_counts, prime_list, st_discrepancy, sweep,
    sweep_with, PerPrimeRecord, Report, Statistic, SweepConfig, SweepPrime,
};
pub use isoclasses::{
    build_class_table, m_p_count, reassemble_class_table, z_set_count, zrs_count, zrs_deviation,
    BoxSpec, ClassRecord, ClassSeed, ClassTable, MpCount, MAX_TABLE_PRIME,
};
