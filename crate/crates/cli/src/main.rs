//! Command-line front end for the t-core toolkit: exact counting, series
//! expansion, a brute-force oracle, eta-quotient certification, congruence
//! proving (single and batched), and density tabulation.
//!
//! Exit codes: 0 for success (including a `proven` verdict and a
//! holomorphic certification), 1 for `refuted` or non-holomorphic, 2 for
//! `not_applicable`, guard violations, and usage errors.  JSON output is
//! compact with keys sorted, so piping a report through a JSON parser and
//! re-serializing reproduces it byte for byte.
//!
//! The environment variable `TCORE_MAX_SERIES` overrides the series-length
//! guards (the `series` length cap, the largest `density` checkpoint, and
//! the coefficient budget of `prove`/`prove-batch`).

use clap::{Parser, Subcommand, ValueEnum};
use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use tcore::density::{self, DensityTable};
use tcore::eta::EtaQuotient;
use tcore::qseries::TruncatedSeries;
use tcore::radu::{
    verify_claims_with, CongruenceClaim, VerificationReport, Verdict, VerifyOptions,
};
use tcore::{cores, radu};

#[derive(Parser)]
#[command(
    name = "tcore",
    version,
    about = "t-core partition counts, eta-quotient certification, and mechanical congruence proofs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Count the t-core partitions of n, exactly.
    Count {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Expand the t-core series a_t(0), …, a_t(limit − 1).
    Series {
        #[arg(long)]
        t: u64,
        /// Number of coefficients to print.
        #[arg(long)]
        limit: usize,
        /// Reduce coefficients modulo this (caret form p^j accepted).
        #[arg(long = "mod", value_parser = parse_caret_modulus)]
        modulus: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Count by brute-force hook enumeration (small n only); a cross-check.
    Oracle {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Certify whether an eta-quotient is holomorphic, cusp by cusp.
    EtaCheck {
        /// Quotient spec, e.g. "N=192;24:4,48:-2".
        #[arg(long)]
        spec: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Prove or refute "a_p(mn + t) ≡ 0 (mod u) for all n" mechanically.
    Prove {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        t: u64,
        /// Congruence modulus u (caret form p^j accepted).
        #[arg(long = "mod", value_parser = parse_caret_modulus)]
        modulus: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Verify a batch of claims from JSON-lines, one object per line.
    ProveBatch {
        /// Input file; standard input when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Worker threads for fanning claims out.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Tabulate the fraction of n ≤ X with a_t(n) ≡ 0 mod p^j.
    Density {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        j: u32,
        /// Comma-separated checkpoint list (default 100,1000,10000,20000).
        #[arg(long, value_delimiter = ',')]
        checkpoints: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

fn parse_caret_modulus(s: &str) -> Result<u64, String> {
    let parse_part = |part: &str, what: &str| -> Result<u64, String> {
        part.trim()
            .parse::<u64>()
            .map_err(|_| format!("invalid {what} {part:?} in modulus"))
    };
    match s.split_once('^') {
        None => parse_part(s, "value"),
        Some((base, exp)) => {
            let base = parse_part(base, "base")?;
            let exp: u32 = exp
                .trim()
                .parse()
                .map_err(|_| format!("invalid exponent {exp:?} in modulus"))?;
            base.checked_pow(exp)
                .ok_or_else(|| format!("modulus {base}^{exp} overflows"))
        }
    }
}

fn series_guard(default: usize) -> Result<usize, String> {
    match std::env::var("TCORE_MAX_SERIES") {
        Ok(raw) => raw
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("TCORE_MAX_SERIES must be a positive integer, got {raw:?}")),
        Err(_) => Ok(default),
    }
}

fn print_json(value: &serde_json::Value) -> Result<(), Box<dyn std::error::Error>> {
    // serde_json's Value keeps keys in a sorted map, so this is canonical
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn main() -> ExitCode {
    // behave like any other filter when the downstream pipe closes:
    // rust ignores SIGPIPE by default, which turns `tcore series | head`
    // into a write panic instead of a quiet exit
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<u8, Box<dyn std::error::Error>> {
    match command {
        Command::Count { t, n, format } => {
            let guard = series_guard(density::DEFAULT_SERIES_GUARD)?;
            let order = usize::try_from(n)
                .ok()
                .and_then(|n| n.checked_add(1))
                .filter(|&o| o <= guard)
                .ok_or_else(|| format!("n = {n} exceeds the series guard {guard}"))?;
            let series = cores::generating_series(t, order, None)?;
            let value = series.coeff(n as usize)?;
            match format {
                Format::Text => println!("{value}"),
                Format::Json => print_json(&serde_json::json!({
                    "t": t, "n": n, "count": value.to_string(),
                }))?,
                Format::Csv => println!("t,n,count\n{t},{n},{value}"),
            }
            Ok(0)
        }
        Command::Series { t, limit, modulus, format } => {
            let guard = series_guard(density::DEFAULT_SERIES_GUARD)?;
            if limit == 0 || limit > guard {
                return Err(format!("limit must lie in 1..={guard}").into());
            }
            let series = cores::generating_series(t, limit, modulus)?;
            print_series(&series, t, format)?;
            Ok(0)
        }
        Command::Oracle { t, n, format } => {
            let value = cores::count_oracle(t, n)?;
            match format {
                Format::Text => println!("{value}"),
                Format::Json => print_json(&serde_json::json!({
                    "t": t, "n": n, "count": value.to_string(),
                }))?,
                Format::Csv => println!("t,n,count\n{t},{n},{value}"),
            }
            Ok(0)
        }
        Command::EtaCheck { spec, format } => {
            let quotient: EtaQuotient = spec.parse()?;
            let report = quotient.certify();
            match format {
                Format::Text => {
                    println!("level: {}", report.level);
                    println!(
                        "weight: {} (integral: {})",
                        report.weight, report.weight_integral
                    );
                    println!("sum condition Σδr ≡ 0 (24): {}", report.cond_sum_delta);
                    println!(
                        "dual condition Σ(N/δ)r ≡ 0 (24): {}",
                        report.cond_sum_level_over_delta
                    );
                    println!("cusp orders:");
                    for (d, order) in &report.cusp_orders {
                        println!("  d = {d}: {order}");
                    }
                    println!("holomorphic: {}", report.holomorphic);
                }
                Format::Json => {
                    let orders: BTreeMap<String, String> = report
                        .cusp_orders
                        .iter()
                        .map(|(d, o)| (d.to_string(), o.to_string()))
                        .collect();
                    print_json(&serde_json::json!({
                        "level": report.level,
                        "weight": report.weight.to_string(),
                        "weight_integral": report.weight_integral,
                        "cond_sum_delta": report.cond_sum_delta,
                        "cond_sum_level_over_delta": report.cond_sum_level_over_delta,
                        "cusp_orders": orders,
                        "holomorphic": report.holomorphic,
                    }))?;
                }
                Format::Csv => {
                    println!("d,order");
                    for (d, order) in &report.cusp_orders {
                        println!("{d},{order}");
                    }
                }
            }
            Ok(if report.holomorphic { 0 } else { 1 })
        }
        Command::Prove { p, m, t, modulus, format } => {
            let options = verify_options()?;
            let claim = CongruenceClaim { p, m, t, u: modulus };
            let report = radu::verify_claim_with(&claim, &options)?;
            print_report(&report, format)?;
            Ok(verdict_exit(&report.verdict))
        }
        Command::ProveBatch { input, jobs, format } => {
            configure_jobs(jobs);
            let claims = read_claims(input)?;
            let options = verify_options()?;
            let results = verify_claims_with(&claims, &options);
            let mut worst = 0u8;
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            for (claim, result) in claims.iter().zip(&results) {
                match result {
                    Ok(report) => {
                        worst = batch_worst(worst, verdict_exit(&report.verdict));
                        match format {
                            Format::Json => writeln!(
                                out,
                                "{}",
                                serde_json::to_string(&serde_json::to_value(report)?)?
                            )?,
                            Format::Text => writeln!(out, "{}", one_line_summary(report))?,
                            Format::Csv => {
                                writeln!(
                                    out,
                                    "{},{},{},{},{},{}",
                                    claim.p,
                                    claim.m,
                                    claim.t,
                                    claim.u,
                                    verdict_word(&report.verdict),
                                    report
                                        .bound
                                        .map(|b| b.to_string())
                                        .unwrap_or_default()
                                )?;
                            }
                        }
                    }
                    Err(err) => {
                        worst = batch_worst(worst, 2);
                        match format {
                            Format::Json => writeln!(
                                out,
                                "{}",
                                serde_json::json!({ "error": err.to_string() })
                            )?,
                            _ => writeln!(out, "error: {err}")?,
                        }
                    }
                }
            }
            Ok(worst)
        }
        Command::Density { t, p, j, checkpoints, format } => {
            let guard = series_guard(density::DEFAULT_SERIES_GUARD)?;
            let checkpoints =
                checkpoints.unwrap_or_else(|| density::DEFAULT_CHECKPOINTS.to_vec());
            let table = density::measure_density_guarded(t, p, j, &checkpoints, guard)?;
            print_density(&table, format)?;
            Ok(0)
        }
    }
}

fn verify_options() -> Result<VerifyOptions, Box<dyn std::error::Error>> {
    let mut options = VerifyOptions::default();
    options.series_budget = series_guard(options.series_budget)?;
    Ok(options)
}

fn configure_jobs(jobs: Option<usize>) {
    let Some(jobs) = jobs else { return };
    #[cfg(feature = "parallel")]
    {
        // a second invocation in-process would fail; that is harmless here
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    {
        eprintln!("note: built without the parallel feature; --jobs {jobs} ignored");
    }
}

fn read_claims(input: Option<PathBuf>) -> Result<Vec<CongruenceClaim>, Box<dyn std::error::Error>> {
    let raw: Box<dyn BufRead> = match input {
        Some(path) => Box::new(std::io::BufReader::new(std::fs::File::open(path)?)),
        None => Box::new(std::io::stdin().lock()),
    };
    let mut claims = Vec::new();
    for (i, line) in raw.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let claim: CongruenceClaim = serde_json::from_str(line)
            .map_err(|e| format!("line {}: {e}", i + 1))?;
        claims.push(claim);
    }
    Ok(claims)
}

fn verdict_exit(verdict: &Verdict) -> u8 {
    match verdict {
        Verdict::Proven => 0,
        Verdict::Refuted { .. } => 1,
        Verdict::NotApplicable { .. } => 2,
    }
}

/// Batch exit code: any refuted claim wins over any not-applicable one.
fn batch_worst(current: u8, new: u8) -> u8 {
    let rank = |code: u8| match code {
        1 => 2, // refuted: most severe
        2 => 1,
        _ => 0,
    };
    if rank(new) > rank(current) {
        new
    } else {
        current
    }
}

fn verdict_word(verdict: &Verdict) -> &'static str {
    match verdict {
        Verdict::Proven => "proven",
        Verdict::Refuted { .. } => "refuted",
        Verdict::NotApplicable { .. } => "not_applicable",
    }
}

fn one_line_summary(report: &VerificationReport) -> String {
    let c = &report.claim;
    let head = format!(
        "a_{}({}n + {}) mod {}: {}",
        c.p,
        c.m,
        c.t,
        c.u,
        verdict_word(&report.verdict)
    );
    match &report.verdict {
        Verdict::Proven => format!(
            "{head} (orbit {:?}, coefficients checked through n = {})",
            report.p_set,
            report.bound.unwrap_or(-1)
        ),
        Verdict::Refuted { witness } => format!(
            "{head} (a_{}({}·{} + {}) ≡ {} ≢ 0)",
            c.p, c.m, witness.n, witness.residue, witness.value
        ),
        Verdict::NotApplicable { reason } => format!("{head} ({reason})"),
    }
}

fn print_report(
    report: &VerificationReport,
    format: Format,
) -> Result<(), Box<dyn std::error::Error>> {
    match format {
        Format::Json => print_json(&serde_json::to_value(report)?)?,
        Format::Csv => {
            println!("residue,n,value");
            for check in &report.checks {
                println!("{},{},{}", check.residue, check.n, check.value);
            }
        }
        Format::Text => {
            let c = &report.claim;
            println!("claim: a_{}({}n + {}) ≡ 0 (mod {})", c.p, c.m, c.t, c.u);
            println!("kappa: {}", report.kappa);
            if let Some(p_hat) = report.p_hat {
                println!("offset (p² − 1)/24: {p_hat}");
            }
            if let Some(a_t) = report.a_t {
                println!("admissibility divisor: {a_t}");
            }
            if let (Some(level), Some(index)) = (report.level, report.index) {
                println!("level: {level} (index {index})");
            }
            if !report.p_set.is_empty() {
                println!("orbit P(t): {:?}", report.p_set);
            }
            if let (Some(nu), Some(bound)) = (&report.nu, report.bound) {
                println!("nu: {nu} (checked n ≤ {bound})");
            }
            if let (Some(sharp), Some(plain)) =
                (report.closed_form_bound, &report.closed_form_without_offset)
            {
                println!("closed-form bound: {sharp} (without offset: {plain})");
            }
            match &report.verdict {
                Verdict::Proven => println!(
                    "verdict: proven ({} coefficients vanished)",
                    report.checks.len()
                ),
                Verdict::Refuted { witness } => println!(
                    "verdict: refuted — a_{}({}·{} + {}) ≡ {} (mod {})",
                    c.p, c.m, witness.n, witness.residue, witness.value, c.u
                ),
                Verdict::NotApplicable { reason } => {
                    println!("verdict: not applicable — {reason}")
                }
            }
        }
    }
    Ok(())
}

fn print_series(
    series: &TruncatedSeries,
    t: u64,
    format: Format,
) -> Result<(), Box<dyn std::error::Error>> {
    match format {
        Format::Text => {
            for n in 0..series.trunc_order() {
                println!("{n}: {}", series.coeff(n)?);
            }
        }
        Format::Csv => {
            println!("n,value");
            for n in 0..series.trunc_order() {
                println!("{n},{}", series.coeff(n)?);
            }
        }
        Format::Json => {
            let coefficients: Vec<String> = (0..series.trunc_order())
                .map(|n| series.coeff(n).map(|c| c.to_string()))
                .collect::<Result<_, _>>()?;
            print_json(&serde_json::json!({
                "t": t,
                "modulus": series.modulus(),
                "coefficients": coefficients,
            }))?;
        }
    }
    Ok(())
}


fn print_density(table: &DensityTable, format: Format) -> Result<(), Box<dyn std::error::Error>> {
    match format {
        Format::Csv => print!("{}", table.to_csv()),
        Format::Text => {
            println!("t = {}, modulus = {}", table.t, table.modulus);
            for (density, &x) in table.densities().iter().zip(&table.checkpoints) {
                let approx = density.numer().to_string().parse::<f64>().unwrap_or(0.0)
                    / density.denom().to_string().parse::<f64>().unwrap_or(1.0);
                println!("X = {x}: {density} ≈ {approx:.4}");
            }
        }
        Format::Json => {
            let densities: Vec<String> = table
                .densities()
                .iter()
                .map(|d| d.to_string())
                .collect();
            print_json(&serde_json::json!({
                "t": table.t,
                "modulus": table.modulus,
                "checkpoints": table.checkpoints,
                "densities": densities,
            }))?;
        }
    }
    Ok(())
}
