//! Batch CLI over the diagnostics library. One subcommand per invocation,
//! reports on stdout, diagnostics on stderr. Exit codes: 0 success,
//! 2 validation/domain error, 3 resource or overflow error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use serde_json::json;

use p1diag::error::{Error, Result};
use p1diag::gcd_diag::{self, BoundSequence};
use p1diag::report::Envelope;
use p1diag::sequences::{self, Builtin, SequenceKind, SequenceSpec};
use p1diag::simplex::{SimplexCountResult, WeightVector};
use p1diag::smooth::{self, PrimeSet};
use p1diag::{census, growth};

#[derive(Debug, Parser)]
#[command(name = "p1diag", version, about = "Prime-divisor growth diagnostics for integer sequences")]
struct Cli {
    /// Report format. JSON is the stable contract; text is human-oriented
    /// and may change.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,

    /// Worker threads for parallel operations (default: machine
    /// parallelism). Output is independent of this value.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Accepted for compatibility with randomized test helpers; the CLI
    /// subcommands themselves are deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
struct SequenceArgs {
    /// Polynomial coefficients, ascending degree, comma-separated
    /// (e.g. "1,0,1" for n^2 + 1). Negative coefficients are allowed.
    #[arg(long, value_name = "COEFFS", allow_hyphen_values = true)]
    poly: Option<String>,

    /// Sequence file: one base-10 integer per line, '#' comments allowed.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,

    /// Builtin family: mersenne, fermat, factorial-plus-one, identity.
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,

    /// Smooth sequence over these primes, comma-separated (e.g. "2,3,5").
    #[arg(long, value_name = "PRIMES")]
    primes: Option<String>,

    /// First sequence index to materialize.
    #[arg(long, default_value_t = 1)]
    start: u64,

    /// Number of terms (required for generated sequences; files default to
    /// all terms).
    #[arg(long)]
    count: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Primes dividing at least one term, with the growth curve.
    Census {
        #[command(flatten)]
        seq: SequenceArgs,
    },
    /// The statistic d_k = ln ln n_k / ln k and its running infimum.
    Growth {
        #[command(flatten)]
        seq: SequenceArgs,
        /// Running-infimum threshold for the empirical verdict.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Verify gcd(n_k, n_{k+l}) < m_l for all offsets up to the window.
    GcdCheck {
        #[command(flatten)]
        seq: SequenceArgs,
        /// Bound sequence: "linear:C" for m_l = l + C, or "file:PATH".
        #[arg(long)]
        m: String,
        /// Largest offset l to check.
        #[arg(long)]
        window: u64,
    },
    /// Count S-smooth numbers up to a limit (exact integer arithmetic).
    SmoothCount {
        /// Comma-separated primes of S.
        #[arg(long)]
        primes: String,
        /// Inclusive upper limit (base-10, any size).
        #[arg(long)]
        limit: String,
        /// Cap on the count before aborting with a resource error.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Exact lattice count under a weighted simplex next to its analytic
    /// bound.
    BoundCheck {
        /// Comma-separated positive real weights.
        #[arg(long)]
        weights: String,
        /// Weight budget W.
        #[arg(long = "W")]
        w_budget: f64,
    },
    /// High-valuation index set for a prime and its spacing check.
    Spacing {
        #[command(flatten)]
        seq: SequenceArgs,
        /// The prime whose valuation defines the index set.
        #[arg(long)]
        prime: String,
        /// Valuation threshold M. If omitted, derived from --m and --l as
        /// the least M with 2^M > m_l.
        #[arg(long = "M")]
        threshold_m: Option<u32>,
        /// Bound sequence (same syntax as gcd-check), used when --M is
        /// omitted.
        #[arg(long)]
        m: Option<String>,
        /// The offset l that gaps must exceed.
        #[arg(long)]
        l: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("p1diag: failed to configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("p1diag: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn parse_csv_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| x.trim())
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse::<T>()
                .map_err(|_| Error::Validation(format!("invalid {what}: {x:?}")))
        })
        .collect()
}

fn parse_prime_set(s: &str) -> Result<PrimeSet> {
    PrimeSet::new(parse_csv_list::<BigUint>(s, "prime in --primes")?)
}

fn parse_bound_sequence(s: &str) -> Result<BoundSequence> {
    if let Some(c) = s.strip_prefix("linear:") {
        let offset: u64 = c
            .parse()
            .map_err(|_| Error::Validation(format!("--m linear offset must be an integer, got {c:?}")))?;
        Ok(BoundSequence::linear(offset))
    } else if let Some(path) = s.strip_prefix("file:") {
        let values = sequences::read_sequence_file(std::path::Path::new(path))?;
        BoundSequence::explicit(values)
    } else {
        Err(Error::Validation(format!(
            "--m must be linear:C or file:PATH, got {s:?} (constant bound sequences are not accepted)"
        )))
    }
}

fn build_spec(seq: &SequenceArgs) -> Result<SequenceSpec> {
    let sources = [
        seq.poly.is_some(),
        seq.file.is_some(),
        seq.builtin.is_some(),
        seq.primes.is_some(),
    ]
    .iter()
    .filter(|b| **b)
    .count();
    if sources != 1 {
        return Err(Error::Validation(
            "exactly one sequence source is required: --poly, --file, --builtin or --primes".into(),
        ));
    }
    let (kind, default_count) = if let Some(p) = &seq.poly {
        (SequenceKind::Polynomial(parse_csv_list::<BigInt>(p, "coefficient in --poly")?), None)
    } else if let Some(path) = &seq.file {
        (SequenceKind::File(path.clone()), Some(u64::MAX))
    } else if let Some(name) = &seq.builtin {
        (SequenceKind::Builtin(Builtin::parse(name)?), None)
    } else {
        (SequenceKind::Smooth(parse_prime_set(seq.primes.as_ref().unwrap())?), None)
    };
    let count = match (seq.count, default_count) {
        (Some(c), _) => c,
        (None, Some(d)) => d,
        (None, None) => {
            return Err(Error::Validation("--count is required for generated sequences".into()))
        }
    };
    SequenceSpec::new(kind, seq.start, count)
}

fn materialize(seq: &SequenceArgs) -> Result<sequences::SequencePrefix> {
    let spec = build_spec(seq)?;
    let prefix = sequences::materialize(&spec)?;
    if let Some(n0) = prefix.start_shifted_to() {
        eprintln!(
            "p1diag: start index raised to {n0} so the sequence is positive and strictly increasing"
        );
    }
    Ok(prefix)
}

fn seq_config(seq: &SequenceArgs) -> serde_json::Value {
    json!({
        "poly": seq.poly,
        "file": seq.file,
        "builtin": seq.builtin,
        "primes": seq.primes,
        "start": seq.start,
        "count": seq.count,
    })
}

fn emit<T: Serialize>(
    format: OutputFormat,
    subcommand: &str,
    config: serde_json::Value,
    result: T,
    csv: String,
    text: String,
) {
    match format {
        OutputFormat::Json => println!("{}", Envelope::new(subcommand, config, result).to_json()),
        OutputFormat::Csv => print!("{csv}"),
        OutputFormat::Text => print!("{text}"),
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Census { seq } => {
            let prefix = materialize(seq)?;
            let report = census::prime_census(&prefix)?;
            let mut csv = String::from("k,distinct_prime_count\n");
            for (k, c) in &report.growth_curve {
                csv.push_str(&format!("{k},{c}\n"));
            }
            let text = format!(
                "census of {} ({} terms)\n  distinct primes found: {}\n  incomplete factorizations: {}\n",
                prefix.origin(),
                prefix.len(),
                report.primes_found.len(),
                report.incomplete_terms.len(),
            );
            emit(cli.output, "census", seq_config(seq), report, csv, text);
        }
        Command::Growth { seq, threshold } => {
            let prefix = materialize(seq)?;
            let report = match threshold {
                Some(t) => growth::growth_statistic_with_threshold(&prefix, *t)?,
                None => growth::growth_statistic(&prefix)?,
            };
            let mut csv = String::from("k,n_k,d_k,running_inf\n");
            for (e, inf) in report.entries.iter().zip(&report.running_inf) {
                csv.push_str(&format!("{},{},{},{}\n", e.k, e.n_k, e.d_k, inf));
            }
            let text = format!(
                "growth statistic for {} ({} terms)\n  first valid k: {}\n  final running infimum: {}\n  verdict: {:?}\n",
                prefix.origin(),
                prefix.len(),
                report.first_valid_k,
                report.final_running_inf(),
                report.verdict,
            );
            let config = {
                let mut c = seq_config(seq);
                c["threshold"] = json!(threshold);
                c
            };
            emit(cli.output, "growth", config, report, csv, text);
        }
        Command::GcdCheck { seq, m, window } => {
            let prefix = materialize(seq)?;
            let bounds = parse_bound_sequence(m)?;
            let report = gcd_diag::verify_gcd_hypothesis(&prefix, &bounds, *window)?;
            let mut csv = String::from("k,l,gcd,m_l\n");
            for v in &report.violations {
                csv.push_str(&format!("{},{},{},{}\n", v.k, v.l, v.gcd_value, v.m_l));
            }
            let text = format!(
                "gcd hypothesis for {} (window {})\n  pairs checked: {}\n  holds: {}\n  violations: {}\n",
                prefix.origin(),
                window,
                report.pairs_checked,
                report.holds,
                report.violations.len(),
            );
            let config = {
                let mut c = seq_config(seq);
                c["m"] = json!(m);
                c["window"] = json!(window);
                c
            };
            emit(cli.output, "gcd-check", config, report, csv, text);
        }
        Command::SmoothCount { primes, limit, cap } => {
            let s = parse_prime_set(primes)?;
            let limit_v: BigUint = limit
                .parse()
                .map_err(|_| Error::Validation(format!("--limit must be a base-10 integer, got {limit:?}")))?;
            let count = match cap {
                Some(c) => smooth::count_smooth_capped(&s, &limit_v, *c)?,
                None => smooth::count_smooth(&s, &limit_v)?,
            };
            #[derive(Serialize)]
            struct SmoothCountResult {
                count: u64,
            }
            let csv = format!("primes,limit,count\n\"{primes}\",{limit},{count}\n");
            let text = format!("{count} {{{primes}}}-smooth numbers in [1, {limit}]\n");
            let config = json!({ "primes": primes, "limit": limit, "cap": cap });
            emit(cli.output, "smooth-count", config, SmoothCountResult { count }, csv, text);
        }
        Command::BoundCheck { weights, w_budget } => {
            let ws = WeightVector::new(parse_csv_list::<f64>(weights, "weight in --weights")?)?;
            let result = SimplexCountResult::evaluate(*w_budget, &ws)?;
            let csv = format!(
                "W,exact,upper_bound,bound_holds\n{},{},{},{}\n",
                result.w_budget, result.exact, result.upper_bound, result.bound_holds
            );
            let text = format!(
                "lattice points under W = {}: exact {}, bound {}, {}\n",
                result.w_budget,
                result.exact,
                result.upper_bound,
                if result.bound_holds { "pass" } else { "FAIL" },
            );
            let config = json!({ "weights": weights, "W": w_budget });
            emit(cli.output, "bound-check", config, result, csv, text);
        }
        Command::Spacing { seq, prime, threshold_m, m, l } => {
            let prefix = materialize(seq)?;
            let p: BigUint = prime
                .parse()
                .map_err(|_| Error::Validation(format!("--prime must be a base-10 integer, got {prime:?}")))?;
            let threshold = match (threshold_m, m) {
                (Some(t), _) => *t,
                (None, Some(m)) => gcd_diag::choose_m(&parse_bound_sequence(m)?, *l)?,
                (None, None) => {
                    return Err(Error::Validation("either --M or --m is required".into()))
                }
            };
            let set = gcd_diag::index_set(&prefix, &p, threshold)?;
            let check = gcd_diag::spacing_check(&set, *l);
            #[derive(Serialize)]
            struct SpacingResult {
                set: gcd_diag::IndexSet,
                min_gap: Option<u64>,
                pass: bool,
            }
            let indices = set
                .indices
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(";");
            let csv = format!(
                "prime,M,l,indices,min_gap,pass\n{},{},{},\"{}\",{},{}\n",
                p,
                threshold,
                l,
                indices,
                check.min_gap.map(|g| g.to_string()).unwrap_or_default(),
                check.pass
            );
            let text = format!(
                "index set for prime {p} with valuation > {threshold}: {} indices\n  min gap: {:?}, pass (gap > {l}): {}\n",
                set.indices.len(),
                check.min_gap,
                check.pass,
            );
            let config = {
                let mut c = seq_config(seq);
                c["prime"] = json!(prime);
                c["M"] = json!(threshold_m);
                c["m"] = json!(m);
                c["l"] = json!(l);
                c
            };
            emit(
                cli.output,
                "spacing",
                config,
                SpacingResult { set, min_gap: check.min_gap, pass: check.pass },
                csv,
                text,
            );
        }
    }
    Ok(())
}
