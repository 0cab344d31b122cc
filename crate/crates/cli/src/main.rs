//! `knapgap`: command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 guardrail hit,
//! 64 malformed command line. The resolved configuration goes to stderr as a
//! `#` line so that stdout stays machine-readable.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use knapgap::bounds::check_bounds;
use knapgap::experiments::{
    default_thresholds, mean_experiment, sample_records, tail_experiment, ExperimentConfig,
    ExperimentSummary, SampleRecord,
};
use knapgap::export::write_records_csv;
use knapgap::gap::{gap_exact_with, ip_value};
use knapgap::group::{frobenius_with, group_minima_with};
use knapgap::model::{lp_value, validate_instance};
use knapgap::rational::{to_decimal, DEFAULT_PRECISION_BITS};
use knapgap::{
    lovasz_example, parse_rational, BoundReport, CostVector, GapReport, KnapsackInstance, Limits,
    Rational,
};

const EXIT_IO: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_GUARDRAIL: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] knapgap::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_guardrail() => EXIT_GUARDRAIL,
            CliError::Core(e) if e.is_io() => EXIT_IO,
            CliError::Core(_) | CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "knapgap",
    version,
    about = "Integrality gaps of knapsack programs and Frobenius numbers"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Write results to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
struct InstanceArg {
    /// Instance entries, e.g. `6,9,20`.
    #[arg(
        long = "a",
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    a: Vec<i64>,
}

#[derive(Args, Debug)]
struct CostArg {
    /// Cost vector as integers or `p/q`, e.g. `3/1,0`.
    #[arg(long = "c", value_delimiter = ',', allow_hyphen_values = true, value_parser = rational_arg, required = true)]
    c: Vec<Rational>,
}

#[derive(Args, Debug, Clone)]
struct SamplingArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_parser = rational_arg, default_value = "4/5", allow_hyphen_values = true)]
    epsilon: Rational,
    /// Worker threads; output does not depend on it.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = DEFAULT_PRECISION_BITS)]
    precision_bits: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Frobenius number g(a).
    Frobenius {
        #[command(flatten)]
        inst: InstanceArg,
    },
    /// Group minima over the residues modulo a_tau.
    Group {
        #[command(flatten)]
        inst: InstanceArg,
        /// One-based index of the modulus entry (default: the last entry).
        #[arg(long)]
        tau: Option<usize>,
        /// Weights of the other generators (default: their own sizes).
        #[arg(long = "w", value_delimiter = ',', allow_hyphen_values = true, value_parser = rational_arg)]
        w: Option<Vec<Rational>>,
    },
    /// Exact integer programming gap, optionally with IP/LP/IG at one b.
    Gap {
        #[command(flatten)]
        inst: InstanceArg,
        #[command(flatten)]
        cost: CostArg,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<i64>,
    },
    /// Closed-form gap bounds next to the exact gap.
    Bounds {
        #[command(flatten)]
        inst: InstanceArg,
        #[command(flatten)]
        cost: CostArg,
    },
    /// The bidiagonal LP/IP distance example.
    Lovasz {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: u64,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        beta: Rational,
    },
    /// Per-instance bracket ratios for uniform draws from Q(T).
    Sample {
        #[arg(long = "t", alias = "T")]
        t: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Survival fractions and log-log tail slope of the normalized gap.
    Tail {
        #[arg(long = "t", alias = "T")]
        t: u64,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, value_delimiter = ',', value_parser = rational_arg)]
        thresholds: Option<Vec<Rational>>,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Mean bracket ratios over a ladder of T values.
    Mean {
        /// Ladder of norm bounds, e.g. `250,500,1000,2000`.
        #[arg(long = "t", alias = "T", value_delimiter = ',', required = true)]
        t: Vec<u64>,
        #[arg(long, default_value_t = 5_000)]
        count: usize,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn describe(cmd: &Command, limits: &Limits) -> String {
    let cap = limits.max_cells;
    match cmd {
        Command::Frobenius { inst } => {
            format!("frobenius a={} guardrail_cells={cap}", join(&inst.a))
        }
        Command::Group { inst, tau, w } => format!(
            "group a={} tau={} w={} guardrail_cells={cap}",
            join(&inst.a),
            tau.map_or_else(|| inst.a.len().to_string(), |t| t.to_string()),
            w.as_ref()
                .map_or_else(|| "default".to_string(), |w| join(w)),
        ),
        Command::Gap { inst, cost, b } => format!(
            "gap a={} c={} b={} guardrail_cells={cap}",
            join(&inst.a),
            join(&cost.c),
            b.map_or_else(|| "none".to_string(), |b| b.to_string()),
        ),
        Command::Bounds { inst, cost } => {
            format!(
                "bounds a={} c={} guardrail_cells={cap}",
                join(&inst.a),
                join(&cost.c)
            )
        }
        Command::Lovasz { n, delta, beta } => format!("lovasz n={n} delta={delta} beta={beta}"),
        Command::Sample { t, count, sampling } => {
            format!("sample T={t} count={count} {}", describe_sampling(sampling))
        }
        Command::Tail {
            t,
            count,
            thresholds,
            sampling,
        } => format!(
            "tail T={t} count={count} thresholds={} {}",
            join(thresholds.as_deref().unwrap_or(&default_thresholds())),
            describe_sampling(sampling)
        ),
        Command::Mean { t, count, sampling } => {
            format!(
                "mean T={} count={count} {}",
                join(t),
                describe_sampling(sampling)
            )
        }
    }
}

fn describe_sampling(s: &SamplingArgs) -> String {
    format!(
        "n={} seed={} epsilon={} jobs={} precision_bits={}",
        s.n, s.seed, s.epsilon, s.jobs, s.precision_bits
    )
}

fn experiment_config(t: u64, count: usize, s: &SamplingArgs) -> ExperimentConfig {
    ExperimentConfig {
        jobs: s.jobs,
        precision_bits: s.precision_bits,
        ..ExperimentConfig::new(s.n, t, count, s.seed, s.epsilon.clone())
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string(value).map_err(knapgap::Error::from)? + "\n")
}

fn csv(n: usize, records: &[SampleRecord]) -> Result<String, CliError> {
    let mut buf = Vec::new();
    write_records_csv(&mut buf, n, records)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn no_csv(what: &str) -> CliError {
    CliError::Usage(format!(
        "--format csv is only available for sample, tail and mean, not {what}"
    ))
}

fn cost_for(inst: &KnapsackInstance, c: &[Rational]) -> Result<CostVector, CliError> {
    let cost = CostVector::new(c.to_vec());
    cost.check_against(inst)?;
    Ok(cost)
}

#[derive(Serialize)]
struct FrobeniusOutput<'a> {
    a: &'a KnapsackInstance,
    g: i64,
}

#[derive(Serialize)]
struct GroupRow {
    residue: u64,
    #[serde(with = "knapgap::serde_rational")]
    minimum: Rational,
    witness: Vec<u64>,
    load: u64,
}

#[derive(Serialize)]
struct GroupOutput<'a> {
    a: &'a KnapsackInstance,
    /// One-based.
    tau: usize,
    modulus: u64,
    #[serde(with = "knapgap::serde_rational::vec")]
    weights: Vec<Rational>,
    #[serde(with = "knapgap::serde_rational")]
    lattice_gap: Rational,
    rows: Vec<GroupRow>,
}

#[derive(Serialize)]
struct GapOutput<'a> {
    #[serde(flatten)]
    report: GapReport,
    a: &'a KnapsackInstance,
    #[serde(with = "knapgap::serde_rational::vec")]
    c: Vec<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    at_b: Option<AtB>,
}

#[derive(Serialize)]
struct AtB {
    b: i64,
    #[serde(with = "knapgap::serde_rational::option")]
    ip: Option<Rational>,
    #[serde(with = "knapgap::serde_rational")]
    lp: Rational,
    #[serde(with = "knapgap::serde_rational::option")]
    ig: Option<Rational>,
}

#[derive(Serialize)]
struct BoundsOutput<'a> {
    #[serde(flatten)]
    report: BoundReport,
    a: &'a KnapsackInstance,
    #[serde(with = "knapgap::serde_rational::vec")]
    c: Vec<Rational>,
}

fn opt(x: &Option<Rational>) -> String {
    x.as_ref()
        .map_or_else(|| "none".to_string(), Rational::to_string)
}

fn run(cli: &Cli, limits: &Limits) -> Result<String, CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Frobenius { inst } => {
            let a = validate_instance(&inst.a)?;
            let g = frobenius_with(&a, limits)?;
            match format {
                Format::Text => Ok(format!("g = {g}\n")),
                Format::Json => json(&FrobeniusOutput { a: &a, g }),
                Format::Csv => Err(no_csv("frobenius")),
            }
        }
        Command::Group { inst, tau, w } => {
            let a = validate_instance(&inst.a)?;
            let tau = tau.unwrap_or(a.dim());
            if tau == 0 || tau > a.dim() {
                return Err(CliError::Validation(format!(
                    "--tau {tau} must lie in 1..={}",
                    a.dim()
                )));
            }
            let weights: Vec<Rational> = match w {
                Some(w) => w.clone(),
                None => a
                    .without(tau - 1)
                    .into_iter()
                    .map(knapgap::rational::uint)
                    .collect(),
            };
            let table = group_minima_with(&a, tau - 1, &weights, limits)?;
            let rows: Vec<GroupRow> = (0..table.modulus())
                .map(|r| GroupRow {
                    residue: r,
                    minimum: table.minima()[r as usize].clone(),
                    witness: table.witness()[r as usize].clone(),
                    load: table.load()[r as usize],
                })
                .collect();
            let out = GroupOutput {
                a: &a,
                tau,
                modulus: table.modulus(),
                weights,
                lattice_gap: table.lattice_gap(),
                rows,
            };
            match format {
                Format::Text => {
                    let mut s = format!(
                        "modulus = {}, tau = {}, weights = ({})\nresidue minimum witness load\n",
                        out.modulus,
                        out.tau,
                        join(&out.weights)
                    );
                    for r in &out.rows {
                        s += &format!(
                            "{} {} ({}) {}\n",
                            r.residue,
                            r.minimum,
                            join(&r.witness),
                            r.load
                        );
                    }
                    s += &format!("max minimum = {}\n", out.lattice_gap);
                    Ok(s)
                }
                Format::Json => json(&out),
                Format::Csv => Err(no_csv("group")),
            }
        }
        Command::Gap { inst, cost, b } => {
            let a = validate_instance(&inst.a)?;
            let c = cost_for(&a, &cost.c)?;
            let report = gap_exact_with(&a, &c, limits)?;
            let at_b = match b {
                Some(b) => {
                    let ip = ip_value(&a, &c, *b)?;
                    let lp = lp_value(&a, &c, *b)?;
                    let ig = ip.as_ref().map(|ip| ip - &lp);
                    Some(AtB { b: *b, ip, lp, ig })
                }
                None => None,
            };
            let out = GapOutput {
                report,
                a: &a,
                c: cost.c.clone(),
                at_b,
            };
            match format {
                Format::Text => {
                    let r = &out.report;
                    let mut s = format!(
                        "gap = {}\nwitness b = {}\nthreshold B* = {}\ntail gap = {}\nscan gap = {}\ntau = {} (modulus {})\ngeneric = {}\n",
                        r.gap,
                        r.witness_b,
                        r.threshold,
                        r.tail_gap,
                        opt(&r.scan_gap),
                        r.tau + 1,
                        r.modulus,
                        r.generic
                    );
                    if let Some(x) = &out.at_b {
                        s += &format!(
                            "IP(b={}) = {}\nLP(b={}) = {}\nIG(b={}) = {}\n",
                            x.b,
                            opt(&x.ip),
                            x.b,
                            x.lp,
                            x.b,
                            opt(&x.ig)
                        );
                    }
                    Ok(s)
                }
                Format::Json => json(&out),
                Format::Csv => Err(no_csv("gap")),
            }
        }
        Command::Bounds { inst, cost } => {
            let a = validate_instance(&inst.a)?;
            let c = cost_for(&a, &cost.c)?;
            let gap = gap_exact_with(&a, &c, limits)?.gap;
            let report = check_bounds(&a, &c, &gap)?;
            match format {
                Format::Text => Ok(format!(
                    "gap = {}\ncovering lower = {}\nnorm upper = {}\ninfnorm upper = {}\nfrobenius upper = {}\ncook upper = {}\nschur = {}\nall satisfied = {}\n",
                    report.gap,
                    opt(&report.covering_lower),
                    report.norm_upper,
                    report.infnorm_upper,
                    report.frobenius_upper,
                    report.cook,
                    report.schur,
                    report.all_satisfied
                )),
                Format::Json => json(&BoundsOutput {
                    report,
                    a: &a,
                    c: cost.c.clone(),
                }),
                Format::Csv => Err(no_csv("bounds")),
            }
        }
        Command::Lovasz { n, delta, beta } => {
            let ex = lovasz_example(*n, *delta, beta)?;
            match format {
                Format::Text => Ok(format!(
                    "lp solution = ({})\nip solution = ({})\ndistance = {}\ndual = ({})\nmax subdeterminant = {}\nlp rows tight = {}\ndual feasible = {}\nip optimal = {}\n",
                    join(&ex.lp_solution),
                    join(&ex.ip_solution),
                    ex.distance,
                    join(&ex.dual),
                    ex.max_subdeterminant.map_or_else(|| "not computed".to_string(), |d| d.to_string()),
                    ex.lp_rows_tight,
                    ex.dual_feasible,
                    ex.ip_optimal
                )),
                Format::Json => json(&ex),
                Format::Csv => Err(no_csv("lovasz")),
            }
        }
        Command::Sample { t, count, sampling } => {
            let config = experiment_config(*t, *count, sampling);
            let records = sample_records(&config)?;
            match format {
                Format::Text => {
                    let mut s = String::from("index a g f ratio_lower ratio_upper\n");
                    for r in &records {
                        s += &format!(
                            "{} {} {} {} {} {}\n",
                            r.index,
                            r.a,
                            r.g,
                            r.f,
                            to_decimal(&r.ratio_lower, 12),
                            to_decimal(&r.ratio_upper, 12)
                        );
                    }
                    Ok(s)
                }
                Format::Csv => csv(config.n, &records),
                Format::Json => json(&records),
            }
        }
        Command::Tail {
            t,
            count,
            thresholds,
            sampling,
        } => {
            let mut config = experiment_config(*t, *count, sampling);
            if let Some(th) = thresholds {
                config.thresholds = th.clone();
            }
            let (records, summary) = tail_experiment(&config)?;
            match format {
                Format::Text => Ok(tail_text(&summary)),
                Format::Csv => csv(config.n, &records),
                Format::Json => json(&summary),
            }
        }
        Command::Mean { t, count, sampling } => {
            let configs: Vec<ExperimentConfig> = t
                .iter()
                .map(|&t| experiment_config(t, *count, sampling))
                .collect();
            let runs = mean_experiment(&configs)?;
            match format {
                Format::Text => {
                    let mut s = String::from("T count mean_ratio_lower mean_ratio_upper flags\n");
                    for (_, m) in &runs {
                        s += &format!(
                            "{} {} {} {} {}\n",
                            m.t,
                            m.count,
                            m.mean_lower_decimal,
                            m.mean_upper_decimal,
                            flags(m)
                        );
                    }
                    Ok(s)
                }
                Format::Csv => {
                    let all: Vec<SampleRecord> = runs.into_iter().flat_map(|(r, _)| r).collect();
                    csv(sampling.n, &all)
                }
                Format::Json => json(&runs.iter().map(|(_, m)| m).collect::<Vec<_>>()),
            }
        }
    }
}

fn flags(m: &ExperimentSummary) -> String {
    let mut f = Vec::new();
    if m.degenerate {
        f.push("degenerate");
    }
    if !m.epsilon_above_two_over_n {
        f.push("epsilon<=2/n");
    }
    if f.is_empty() {
        "-".to_string()
    } else {
        f.join(",")
    }
}

fn tail_text(s: &ExperimentSummary) -> String {
    let mut out = format!(
        "n = {}, T = {}, count = {}, seed = {}, epsilon = {}\n",
        s.n, s.t, s.count, s.seed, s.epsilon
    );
    out += "t survivors_upper fraction_upper survivors_lower fraction_lower\n";
    for p in &s.tail {
        out += &format!(
            "{} {} {} {} {}\n",
            p.t, p.survivors_upper, p.fraction_upper, p.survivors_lower, p.fraction_lower
        );
    }
    let slope = |x: Option<f64>| x.map_or_else(|| "none".to_string(), |v| format!("{v:.6}"));
    out += &format!(
        "fitted slope (upper) = {} over {} thresholds\nfitted slope (lower) = {}\nalpha = {}\nflags = {}\n",
        slope(s.fitted_slope),
        s.fit_points,
        slope(s.fitted_slope_lower),
        opt(&s.alpha_theoretical),
        flags(s)
    );
    out
}

fn emit(out: Option<&PathBuf>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => File::create(path)?.write_all(text.as_bytes()),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let limits = match Limits::from_env() {
        Ok(l) => l,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    eprintln!("# {}", describe(&cli.command, &limits));
    let result = run(&cli, &limits).and_then(|text| Ok(emit(cli.out.as_ref(), &text)?));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
