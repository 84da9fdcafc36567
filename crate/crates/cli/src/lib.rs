//! Command-line front end for the ellstat library.
//!
//! Subcommands: `curve`, `classes`, `density`, `lemma`, `census`,
//! `sweep`, `cache`. Reports go to stdout or `--out`, as JSON or CSV.
//! Exit codes: 0 success, 2 usage error, 1 computation error.
//!
//! Two identical invocations produce byte-identical outputs; `--jobs`
//! changes the worker pool, never the bytes.

pub mod cache;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ellstat::{
    build_class_table, burgess_bound, error_bounds, fourth_moment, garaev_census,
    interval_char_sum, katz_moment, min_weierstrass, per_prime_counts, sigma_rho,
    st_discrepancy, sweep_with, z_set_count, BoxSpec, ClassTable, PrimeContext, Statistic,
    Window,
};

/// Parses the argument vector and executes it; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(Failure::Computation(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

enum Failure {
    Usage(String),
    Computation(String),
}

impl From<ellstat::Error> for Failure {
    fn from(e: ellstat::Error) -> Self {
        Failure::Computation(e.to_string())
    }
}

impl From<cache::CacheError> for Failure {
    fn from(e: cache::CacheError) -> Self {
        Failure::Computation(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Computation(format!("io: {e}"))
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

#[derive(Parser)]
#[command(
    name = "ellstat",
    version,
    about = "Exact elliptic-curve statistics over small prime fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact statistics of one curve y^2 = x^3 + ax + b mod p
    Curve(CurveArgs),
    /// Isomorphism-class table of one prime with per-prime counts
    Classes(ClassesArgs),
    /// Closed-form densities and constants
    Density(DensityArgs),
    /// Per-prime diagnostics against the reference bounds
    Lemma(LemmaArgs),
    /// Census of primes with a large initial character sum
    Census(CensusArgs),
    /// Average a box statistic over all primes 3 < p <= x
    Sweep(SweepArgs),
    /// Build or verify per-prime cache files
    Cache(CacheArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutputArgs {
    fn emit(&self, csv: String, json: impl Serialize) -> Result<(), Failure> {
        let mut text = match self.format {
            Format::Csv => csv,
            Format::Json => serde_json::to_string_pretty(&json)
                .map_err(|e| Failure::Computation(e.to_string()))?,
        };
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match &self.out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

/// Angles are radians; a literal "pi" suffix scales by pi (e.g. 0.5pi).
fn parse_angle(s: &str) -> Result<f64, String> {
    let (number, scale) = match s.strip_suffix("pi") {
        Some("") => ("1", std::f64::consts::PI),
        Some(rest) => (rest, std::f64::consts::PI),
        None => (s, 1.0),
    };
    number
        .trim()
        .parse::<f64>()
        .map(|v| v * scale)
        .map_err(|_| format!("'{s}' is not a radian value (use e.g. 1.57 or 0.5pi)"))
}

fn with_pool<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, Failure> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(usage("--jobs must be at least 1")),
        Some(n) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Computation(e.to_string()))?
            .install(f)),
    }
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Curve(args) => run_curve(args),
        Command::Classes(args) => run_classes(args),
        Command::Density(args) => run_density(args),
        Command::Lemma(args) => run_lemma(args),
        Command::Census(args) => run_census(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Cache(args) => run_cache(args),
    }
}

// ---------------------------------------------------------------- curve

#[derive(Args)]
struct CurveArgs {
    /// The prime modulus (> 3)
    #[arg(long)]
    prime: u64,
    /// Coefficient a
    #[arg(long)]
    a: u64,
    /// Coefficient b
    #[arg(long)]
    b: u64,
    #[command(flatten)]
    output: OutputArgs,
}

fn run_curve(args: CurveArgs) -> Result<(), Failure> {
    let ctx = PrimeContext::new(args.prime)?;
    let stats = ellstat::curve_stats(&ctx, args.a, args.b)?;
    let csv = format!(
        "p,a,b,trace,order,angle,n1,n2\n{},{},{},{},{},{},{},{}",
        stats.p, stats.a, stats.b, stats.trace, stats.order, stats.angle, stats.n1, stats.n2
    );
    args.output.emit(csv, stats)
}

// -------------------------------------------------------------- classes

#[derive(Args)]
struct ClassesArgs {
    /// The prime modulus (> 3)
    #[arg(long)]
    prime: u64,
    /// Angle interval lower end (radians; "pi" suffix allowed)
    #[arg(long, value_parser = parse_angle, default_value = "0", allow_hyphen_values = true)]
    alpha: f64,
    /// Angle interval upper end
    #[arg(long, value_parser = parse_angle, default_value = "pi")]
    beta: f64,
    /// Divisors m for the divisibility counts (repeatable)
    #[arg(long = "m")]
    ms: Vec<u64>,
    /// Load/store the class table here
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Serialize)]
struct ClassesReport {
    p: u64,
    class_count: usize,
    counts: ellstat::PerPrimeRecord,
    classes: Vec<ellstat::ClassRecord>,
}

fn run_classes(args: ClassesArgs) -> Result<(), Failure> {
    let table = cache::load_or_build(args.cache_dir.as_deref(), args.prime)?;
    let counts = per_prime_counts(&table, args.alpha, args.beta, &args.ms)?;

    let mut csv = String::from("class_id,r,s,orbit_size,trace,n1,n2\n");
    for c in table.classes() {
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            c.id, c.representative.0, c.representative.1, c.orbit_size, c.stats.trace,
            c.stats.n1, c.stats.n2
        )
        .unwrap();
    }
    write!(
        csv,
        "# class_count={} t_count={} c_count={} discrepancy={} skipped_singular={}",
        table.class_count(),
        counts.t_count,
        counts.c_count,
        counts.discrepancy,
        counts.skipped_singular
    )
    .unwrap();
    for (m, count) in &counts.d_counts {
        write!(csv, " d[{m}]={count}").unwrap();
    }

    let report = ClassesReport {
        p: table.p(),
        class_count: table.class_count(),
        counts,
        classes: table.classes().to_vec(),
    };
    args.output.emit(csv, report)
}

// -------------------------------------------------------------- density

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DensityKind {
    /// Sato-Tate measure of [alpha, beta]
    MuSt,
    /// Per-prime cyclicity density (exact rational)
    Vartheta,
    /// Averaged cyclicity constant (Euler product)
    BigTheta,
    /// Divisibility density omega_k(m) (exact rational)
    Omega,
    /// Averaged divisibility density (exact rational)
    OmegaAvg,
    /// The modulus mu(m) through which omega_k(m) depends on k
    Mu,
    /// Averaged trace-count constant for t != 0 (Euler product)
    #[value(name = "c-t")]
    CT,
    /// Main-term constant pi/3 for averaged t = 0 counts
    FouvryMurty,
}

#[derive(Args)]
struct DensityArgs {
    #[arg(value_enum)]
    kind: DensityKind,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, value_parser = parse_angle)]
    beta: Option<f64>,
    #[arg(long)]
    prime: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<i64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Serialize)]
#[serde(untagged)]
enum DensityOut {
    Exact { value: String },
    Float { value: f64 },
    Truncated { value: f64, abs_error: f64 },
}

/// Truncation tolerance for the Euler-product constants emitted by the CLI.
const EULER_EPS: f64 = 1e-12;

fn run_density(args: DensityArgs) -> Result<(), Failure> {
    let need = |opt: Option<u64>, what: &str, kind: &str| {
        opt.ok_or_else(|| usage(format!("density {kind} requires --{what}")))
    };
    let out = match args.kind {
        DensityKind::MuSt => {
            let (Some(alpha), Some(beta)) = (args.alpha, args.beta) else {
                return Err(usage("density mu-st requires --alpha and --beta"));
            };
            DensityOut::Float { value: ellstat::mu_st(alpha, beta)? }
        }
        DensityKind::Vartheta => {
            let p = need(args.prime, "prime", "vartheta")?;
            if !ellstat::primes::is_prime(p) {
                return Err(ellstat::Error::NotPrime(p).into());
            }
            DensityOut::Exact { value: ellstat::vartheta_p(p).to_string() }
        }
        DensityKind::BigTheta => {
            let theta = ellstat::big_theta(EULER_EPS);
            DensityOut::Truncated { value: theta.value, abs_error: theta.abs_error }
        }
        DensityKind::Omega => {
            let m = need(args.m, "m", "omega")?;
            let k = args.k.ok_or_else(|| usage("density omega requires --k"))?;
            DensityOut::Exact { value: ellstat::omega_k(k, m)?.to_string() }
        }
        DensityKind::OmegaAvg => {
            let m = need(args.m, "m", "omega-avg")?;
            DensityOut::Exact { value: ellstat::omega_avg(m)?.to_string() }
        }
        DensityKind::Mu => {
            let m = need(args.m, "m", "mu")?;
            if m < 1 {
                return Err(ellstat::Error::InvalidM(0).into());
            }
            DensityOut::Exact { value: ellstat::mu_of_m(m).to_string() }
        }
        DensityKind::CT => {
            let t = args.t.ok_or_else(|| usage("density c-t requires --t"))?;
            let c = ellstat::c_t(t, EULER_EPS)?;
            DensityOut::Truncated { value: c.value, abs_error: c.abs_error }
        }
        DensityKind::FouvryMurty => {
            DensityOut::Float { value: ellstat::fouvry_murty_constant() }
        }
    };
    let csv = match &out {
        DensityOut::Exact { value } => value.clone(),
        DensityOut::Float { value } => value.to_string(),
        DensityOut::Truncated { value, abs_error } => format!("{value} +-{abs_error:e}"),
    };
    args.output.emit(csv, out)
}

// ---------------------------------------------------------------- lemma

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LemmaKind {
    /// |#Z_s(B;p) - 2B| <= 11 sigma_p(B), every s (exact inequality)
    Zsb,
    /// Fourth-moment identity and its p M^2 envelope
    FourthMoment,
    /// Initial-sum maximum against the nu-th bound formula
    Burgess,
    /// Angle discrepancy against p^(7/4)
    Discrepancy,
    /// Chebyshev moment against n p^(-1/2)
    Katz,
    /// The two error functionals E1, E2 of the box-count theorem
    ErrorBounds,
    /// Least max(a,b) Weierstrass model in the class of (a, b)
    MinWeierstrass,
}

#[derive(Args)]
struct LemmaArgs {
    #[arg(value_enum)]
    kind: LemmaKind,
    /// The prime modulus (> 3)
    #[arg(long)]
    prime: u64,
    /// Window half-width A
    #[arg(long = "A")]
    a_bound: Option<u64>,
    /// Window half-width B
    #[arg(long = "B")]
    b_bound: Option<u64>,
    /// Initial-interval length M
    #[arg(long = "M")]
    window: Option<u64>,
    /// Bound index nu (1 = Polya-Vinogradov shape)
    #[arg(long)]
    nu: Option<u32>,
    /// Moment index (katz)
    #[arg(long)]
    m: Option<u64>,
    /// Coefficient a (min-weierstrass)
    #[arg(long)]
    a: Option<u64>,
    /// Coefficient b (min-weierstrass)
    #[arg(long)]
    b: Option<u64>,
    /// Load/store class tables here (discrepancy, katz, min-weierstrass)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Serialize)]
#[serde(untagged)]
enum LemmaOut {
    Zsb { p: u64, b: u64, sigma: f64, max_deviation: f64, bound: f64, holds: bool },
    FourthMoment {
        p: u64,
        window_len: u64,
        char_side: f64,
        count_side: u64,
        unit_count: u64,
        identity_residual: f64,
        envelope: f64,
        envelope_ratio: f64,
    },
    Burgess { p: u64, m: u64, nu: u32, observed: f64, bound: f64, ratio: f64 },
    Discrepancy { p: u64, discrepancy: f64, envelope: f64, ratio: f64 },
    Katz { p: u64, n: u32, value: f64, envelope: f64, ratio: f64 },
    ErrorBounds { p: u64, a: u64, b: u64, sigma: f64, rho: f64, e1: f64, e2: f64 },
    MinWeierstrass { p: u64, a: u64, b: u64, class_id: u32, mu: u64 },
}

fn lemma_table(args: &LemmaArgs) -> Result<ClassTable, Failure> {
    Ok(cache::load_or_build(args.cache_dir.as_deref(), args.prime)?)
}

fn run_lemma(args: LemmaArgs) -> Result<(), Failure> {
    let out = match args.kind {
        LemmaKind::Zsb => {
            let b = args.b_bound.ok_or_else(|| usage("lemma zsb requires --B"))?;
            let ctx = PrimeContext::new(args.prime)?;
            let (sigma, _) = sigma_rho(&ctx, b);
            let max_deviation = (1..ctx.p())
                .map(|s| (z_set_count(&ctx, s, b) as f64 - 2.0 * b as f64).abs())
                .fold(0.0, f64::max);
            let bound = 11.0 * sigma;
            LemmaOut::Zsb { p: ctx.p(), b, sigma, max_deviation, bound, holds: max_deviation <= bound }
        }
        LemmaKind::FourthMoment => {
            let ctx = PrimeContext::new(args.prime)?;
            let (window, window_len) = match (args.b_bound, args.window) {
                (Some(b), None) => (Window::Centered(b), 2 * b + 1),
                (None, Some(m)) => (Window::Interval { start: 0, len: m }, m),
                _ => return Err(usage("lemma fourth-moment takes exactly one of --B or --M")),
            };
            let fm = fourth_moment(&ctx, window);
            let p = ctx.p() as f64;
            let envelope = 10.0 * p * (window_len as f64).powi(2) * p.ln().powi(2);
            LemmaOut::FourthMoment {
                p: ctx.p(),
                window_len,
                char_side: fm.char_side,
                count_side: fm.count_side,
                unit_count: fm.unit_count,
                identity_residual: (fm.identity_value(ctx.p()) - fm.count_side as f64).abs(),
                envelope,
                envelope_ratio: fm.char_side / envelope,
            }
        }
        LemmaKind::Burgess => {
            let m = args.window.ok_or_else(|| usage("lemma burgess requires --M"))?;
            let nu = args.nu.ok_or_else(|| usage("lemma burgess requires --nu"))?;
            if nu < 1 {
                return Err(usage("--nu must be at least 1"));
            }
            let ctx = PrimeContext::new(args.prime)?;
            let rem = m % ctx.p();
            let observed = ctx
                .characters()
                .filter(|chi| !chi.is_principal())
                .map(|chi| if rem == 0 { 0.0 } else { interval_char_sum(&chi, 0, rem).norm() })
                .fold(0.0, f64::max);
            let bound = burgess_bound(ctx.p(), m, nu);
            LemmaOut::Burgess { p: ctx.p(), m, nu, observed, bound, ratio: observed / bound }
        }
        LemmaKind::Discrepancy => {
            let table = lemma_table(&args)?;
            let discrepancy = st_discrepancy(&table);
            let envelope = (table.p() as f64).powf(1.75);
            LemmaOut::Discrepancy {
                p: table.p(),
                discrepancy,
                envelope,
                ratio: discrepancy / envelope,
            }
        }
        LemmaKind::Katz => {
            let n = args.m.ok_or_else(|| usage("lemma katz requires --m (moment index)"))?;
            if !(1..=14).contains(&n) {
                return Err(usage("moment index must be in 1..=14"));
            }
            let table = lemma_table(&args)?;
            let value = katz_moment(&table, n as u32);
            let envelope = n as f64 / (table.p() as f64).sqrt();
            LemmaOut::Katz {
                p: table.p(),
                n: n as u32,
                value,
                envelope,
                ratio: value.abs() / envelope,
            }
        }
        LemmaKind::ErrorBounds => {
            let a = args.a_bound.ok_or_else(|| usage("lemma error-bounds requires --A"))?;
            let b = args.b_bound.ok_or_else(|| usage("lemma error-bounds requires --B"))?;
            let ctx = PrimeContext::new(args.prime)?;
            let (sigma, _) = sigma_rho(&ctx, b);
            let (_, rho) = sigma_rho(&ctx, a);
            let (e1, e2) = error_bounds(ctx.p(), a, b, sigma, rho);
            LemmaOut::ErrorBounds { p: ctx.p(), a, b, sigma, rho, e1, e2 }
        }
        LemmaKind::MinWeierstrass => {
            let (Some(a), Some(b)) = (args.a, args.b) else {
                return Err(usage("lemma min-weierstrass requires --a and --b"));
            };
            let table = lemma_table(&args)?;
            let class_id = table.classify(a, b)?;
            let mu = min_weierstrass(&table, class_id)?;
            LemmaOut::MinWeierstrass { p: table.p(), a, b, class_id, mu }
        }
    };
    let csv = serde_json::to_value(&out)
        .map_err(|e| Failure::Computation(e.to_string()))?
        .as_object()
        .map(|map| {
            map.iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .unwrap_or_default();
    args.output.emit(csv, out)
}

// --------------------------------------------------------------- census

#[derive(Args)]
struct CensusArgs {
    /// Upper bound on the primes surveyed
    #[arg(long)]
    x: u64,
    /// Initial-interval length
    #[arg(long = "M")]
    window: u64,
    /// Threshold exponent: flag |sum| > M^(1 - eta)
    #[arg(long)]
    eta: f64,
    /// Worker pool size
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Serialize)]
struct CensusReport {
    x: u64,
    m: u64,
    eta: f64,
    exceptional_primes: Vec<u64>,
    count: usize,
    envelope: f64,
}

fn run_census(args: CensusArgs) -> Result<(), Failure> {
    if args.window < 1 {
        return Err(usage("--M must be at least 1"));
    }
    if !(0.0..1.0).contains(&args.eta) {
        return Err(usage("--eta must lie in [0, 1)"));
    }
    if args.x > ellstat::MAX_PRIME {
        return Err(usage(format!("--x exceeds the supported cap {}", ellstat::MAX_PRIME)));
    }
    let census = with_pool(args.jobs, || garaev_census(args.x, args.window, args.eta))?;
    let mut csv = String::from("p\n");
    for p in &census.exceptional_primes {
        writeln!(csv, "{p}").unwrap();
    }
    write!(csv, "# count={} envelope={}", census.count(), census.envelope).unwrap();
    let report = CensusReport {
        x: args.x,
        m: args.window,
        eta: args.eta,
        count: census.count(),
        exceptional_primes: census.exceptional_primes,
        envelope: census.envelope,
    };
    args.output.emit(csv, report)
}

// ---------------------------------------------------------------- sweep

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StatKind {
    /// Sato-Tate angle in [--alpha, --beta]
    St,
    /// Cyclic group
    Cyclic,
    /// Group order divisible by --m
    Div,
    /// Frobenius trace equal to --t
    Trace,
    /// Group order congruent to --k mod --m
    OrderMod,
    /// Trace congruent to --k mod --m
    TraceMod,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep all primes 3 < p <= x
    #[arg(long)]
    x: u64,
    /// Coefficient box half-width |a| <= A
    #[arg(long = "A")]
    a_half_width: u64,
    /// Coefficient box half-width |b| <= B
    #[arg(long = "B")]
    b_half_width: u64,
    /// Which statistic to count
    #[arg(long, value_enum)]
    stat: StatKind,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, value_parser = parse_angle)]
    beta: Option<f64>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<i64>,
    /// Worker pool size (affects speed only, never the output bytes)
    #[arg(long)]
    jobs: Option<usize>,
    /// Load/store per-prime class tables here
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

fn statistic_from(args: &SweepArgs) -> Result<Statistic, Failure> {
    Ok(match args.stat {
        StatKind::St => {
            let (Some(alpha), Some(beta)) = (args.alpha, args.beta) else {
                return Err(usage("--stat st requires --alpha and --beta"));
            };
            Statistic::AngleInterval { alpha, beta }
        }
        StatKind::Cyclic => Statistic::Cyclic,
        StatKind::Div => {
            let m = args.m.ok_or_else(|| usage("--stat div requires --m"))?;
            Statistic::Divisibility { m }
        }
        StatKind::Trace => {
            let t = args.t.ok_or_else(|| usage("--stat trace requires --t"))?;
            Statistic::TraceEquals { t }
        }
        StatKind::OrderMod => {
            let (Some(m), Some(k)) = (args.m, args.k) else {
                return Err(usage("--stat order-mod requires --m and --k"));
            };
            Statistic::OrderResidue { m, k }
        }
        StatKind::TraceMod => {
            let (Some(m), Some(k)) = (args.m, args.k) else {
                return Err(usage("--stat trace-mod requires --m and --k"));
            };
            Statistic::TraceResidue { m, k }
        }
    })
}

fn run_sweep(args: SweepArgs) -> Result<(), Failure> {
    if args.x < 5 {
        return Err(usage("--x must be at least 5"));
    }
    if args.a_half_width < 1 || args.b_half_width < 1 {
        return Err(usage("--A and --B must be at least 1"));
    }
    let stat = statistic_from(&args)?;
    let box_spec = BoxSpec::new(args.a_half_width, args.b_half_width);
    let cache_dir = args.cache_dir.clone();

    let report = with_pool(args.jobs, move || {
        sweep_with(args.x, box_spec, stat, |p| {
            cache::load_or_build(cache_dir.as_deref(), p)
                .map(Arc::new)
                .map_err(|e| match e {
                    cache::CacheError::Core(core) => core,
                    other => ellstat::Error::SeedMismatch(format!("cache: {other}")),
                })
        })
    })??;

    let mut csv = String::from("p,count,skipped_singular\n");
    for r in &report.per_prime {
        writeln!(csv, "{},{},{}", r.p, r.count, r.skipped_singular).unwrap();
    }
    writeln!(csv, "# aggregate={}", report.aggregate).unwrap();
    writeln!(csv, "# main_term={}", report.main_term).unwrap();
    match report.relative_deviation {
        Some(dev) => writeln!(csv, "# relative_deviation={dev}").unwrap(),
        None => writeln!(csv, "# relative_deviation=undefined").unwrap(),
    }
    for w in &report.warnings {
        writeln!(csv, "# warning={w}").unwrap();
    }
    csv.pop();
    args.output.emit(csv, report)
}

// ---------------------------------------------------------------- cache

#[derive(Args)]
struct CacheArgs {
    #[command(subcommand)]
    action: CacheAction,
}

#[derive(Subcommand)]
enum CacheAction {
    /// Build the class table for one prime and store it
    Build {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        cache_dir: PathBuf,
    },
    /// Reload a stored table and check it against a fresh build
    Verify {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        cache_dir: PathBuf,
    },
}

fn run_cache(args: CacheArgs) -> Result<(), Failure> {
    match args.action {
        CacheAction::Build { prime, cache_dir } => {
            let ctx = PrimeContext::new(prime)?;
            let table = build_class_table(&ctx);
            let path = cache::cache_store(&cache_dir, ctx.generator(), &table)?;
            println!("stored {} classes at {}", table.class_count(), path.display());
            Ok(())
        }
        CacheAction::Verify { prime, cache_dir } => {
            let loaded = cache::cache_load(&cache_dir, prime)?;
            let ctx = PrimeContext::new(prime)?;
            let fresh = build_class_table(&ctx);
            if loaded == fresh {
                println!("ok p={prime} classes={}", loaded.class_count());
                Ok(())
            } else {
                Err(Failure::Computation(format!(
                    "cache for p={prime} differs from a fresh build"
                )))
            }
        }
    }
}
