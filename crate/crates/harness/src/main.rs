use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use sparsenum_core::arithmetic::{greatest_prime_factor, s_part, s_unit_stream, PrimeSet};
use sparsenum_core::bounds::{
    lemma32_rhs, lemma33_rhs, matveev_lower_bound, MatveevInstance, DEFAULT_PRECISION_CAP,
};
use sparsenum_core::numeration::{base_digits, zeckendorf_encode};
use sparsenum_core::ostrowski::{
    ostrowski_encode, surd_cf_expand, ContinuedFraction, QuadraticSurd,
};
use sparsenum_core::sparse_enum::{
    base_sparse_stream, fib_sparse_stream, SparseBaseSpec, SparseFibSpec,
};
use sparsenum_core::BigNat;

use sparsenum_harness::experiments::{self, audit_violations};
use sparsenum_harness::{Cell, ExperimentConfig, ExperimentId, HarnessError, OutputFormat, Report};

#[derive(Parser)]
#[command(name = "sparsenum", version, about = "Sparse-digit integers, S-parts and linear-form bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Digit budget.
    #[arg(long, global = true, default_value_t = 2)]
    k: usize,
    /// Base for base-b digits.
    #[arg(long, global = true, default_value_t = 10)]
    b: u32,
    /// Prime set S, comma separated.
    #[arg(long, global = true, value_delimiter = ',', default_value = "2,3,5")]
    primes: Vec<u64>,
    /// Upper value limit; accepts forms like 1000000, 10^6 or 1e6.
    #[arg(long, global = true, default_value = "1000000", value_parser = parse_nat)]
    limit: BigNat,
    #[arg(long, global = true, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION_CAP)]
    precision_cap: u32,
    /// Threshold variant for thm13.
    #[arg(long, global = true, default_value_t = 1)]
    variant: u8,
    /// Random instances per family for matveev-audit.
    #[arg(long, global = true, default_value_t = 100)]
    count: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Digit representation of an integer.
    Encode {
        #[command(subcommand)]
        system: EncodeCmd,
    },
    /// Increasing enumeration up to --limit.
    Enum {
        #[command(subcommand)]
        family: EnumCmd,
    },
    /// S-part of N over --primes.
    Spart {
        #[arg(value_parser = parse_nat)]
        n: BigNat,
    },
    /// Greatest prime factor of N.
    Gpf {
        #[arg(value_parser = parse_nat)]
        n: BigNat,
    },
    /// Explicit lower bounds.
    Bounds {
        #[command(subcommand)]
        which: BoundsCmd,
    },
    /// Run an experiment: thm11, thm12, thm13, thm14, thm15 or matveev-audit.
    Experiment { id: String },
}

#[derive(Subcommand)]
enum EncodeCmd {
    Zeck {
        #[arg(value_parser = parse_nat)]
        n: BigNat,
    },
    /// Base --b digits.
    Base {
        #[arg(value_parser = parse_nat)]
        n: BigNat,
    },
    /// Ostrowski digits for the continued fraction of (p + sqrt d)/q, or of a
    /// purely periodic expansion [0; (period)*]; the golden ratio by default.
    Ostrowski {
        #[arg(value_parser = parse_nat)]
        n: BigNat,
        /// p,d,q
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, num_args = 1)]
        surd: Option<Vec<i64>>,
        /// Period of a purely periodic expansion, e.g. 1,2.
        #[arg(long, value_delimiter = ',', conflicts_with = "surd")]
        period: Option<Vec<i64>>,
    },
}

#[derive(Subcommand)]
enum EnumCmd {
    FibSparse,
    BaseSparse,
    SUnits,
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Lower bound for log|Lambda|.
    Matveev {
        #[arg(long, value_delimiter = ',', required = true)]
        log_a: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        exponents: Vec<i64>,
        #[arg(long, default_value_t = 1)]
        degree: u32,
    },
    Lemma32(LemmaArgs),
    Lemma33(LemmaArgs),
}

#[derive(Args)]
struct LemmaArgs {
    #[arg(long, value_parser = parse_nat, default_value = "1")]
    a: BigNat,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    c: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    big_c: f64,
}

fn parse_nat(s: &str) -> Result<BigNat, String> {
    let s = s.trim().replace('_', "");
    let pow = |base: &str, exp: &str| -> Result<BigNat, String> {
        let b: BigNat = base.parse().map_err(|_| format!("bad integer '{s}'"))?;
        let e: u32 = exp.parse().map_err(|_| format!("bad exponent in '{s}'"))?;
        Ok(num_traits::pow(b, e as usize))
    };
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let mant: BigNat = m.parse().map_err(|_| format!("bad integer '{s}'"))?;
        return Ok(mant * pow("10", e)?);
    }
    if let Some((b, e)) = s.split_once('^') {
        return pow(b, e);
    }
    s.parse().map_err(|_| format!("bad integer '{s}'"))
}

fn prime_set(opts: &Opts) -> Result<PrimeSet, HarnessError> {
    PrimeSet::new(opts.primes.clone()).map_err(|e| HarnessError::Config(e.to_string()))
}

fn config(e: sparsenum_core::Error) -> HarnessError {
    HarnessError::Config(e.to_string())
}

fn value_report(name: &str, column: &'static str, values: impl Iterator<Item = BigNat>) -> Report {
    let mut r = Report::new(name, vec!["j", column]);
    for (j, v) in values.enumerate() {
        r.rows.push(vec![Cell::int(j as u64 + 1), Cell::Int(v)]);
    }
    r.push_summary("rows", Cell::int(r.rows.len() as u64));
    r
}

fn encode(system: &EncodeCmd, opts: &Opts) -> Result<Report, HarnessError> {
    match system {
        EncodeCmd::Zeck { n } => {
            let z = zeckendorf_encode(n).map_err(config)?;
            let mut r = Report::new("encode-zeck", vec!["index", "fib"]);
            for &i in z.indices() {
                r.rows.push(vec![
                    Cell::int(i as u64),
                    Cell::Int(sparsenum_core::numeration::fib(i)),
                ]);
            }
            r.push_summary("n", Cell::Int(n.clone()));
            r.push_summary("digits", Cell::int(z.digit_count() as u64));
            r.push_summary("repr", Cell::Text(z.to_string()));
            Ok(r)
        }
        EncodeCmd::Base { n } => {
            let ds = base_digits(n, opts.b).map_err(config)?;
            let mut r = Report::new("encode-base", vec!["position", "digit"]);
            for &(p, d) in ds.nonzero().iter().rev() {
                r.rows.push(vec![Cell::int(p), Cell::int(d)]);
            }
            r.push_summary("n", Cell::Int(n.clone()));
            r.push_summary("base", Cell::int(opts.b));
            r.push_summary("nonzero_digits", Cell::int(ds.nonzero_count() as u64));
            Ok(r)
        }
        EncodeCmd::Ostrowski { n, surd, period } => {
            let cf = match (surd, period) {
                (Some(v), _) => {
                    let [p, d, q] = v[..] else {
                        return Err(HarnessError::Config("--surd takes p,d,q".into()));
                    };
                    let x = QuadraticSurd::new(p, d, q).map_err(config)?;
                    surd_cf_expand(&x).map_err(config)?
                }
                (None, Some(p)) => ContinuedFraction::purely_periodic(p.clone()).map_err(config)?,
                (None, None) => ContinuedFraction::golden_ratio(),
            };
            let repr = ostrowski_encode(n, &cf).map_err(config)?;
            let mut r = Report::new("encode-ostrowski", vec!["index", "digit"]);
            for (i, &d) in repr.digits().iter().enumerate() {
                if d != 0 {
                    r.rows.push(vec![Cell::int(i as u64), Cell::int(d)]);
                }
            }
            r.push_summary("n", Cell::Int(n.clone()));
            r.push_summary("continued_fraction", Cell::Text(cf.to_string()));
            Ok(r)
        }
    }
}

fn enumerate(family: &EnumCmd, opts: &Opts) -> Result<Report, HarnessError> {
    Ok(match family {
        EnumCmd::FibSparse => {
            let spec = SparseFibSpec::new(opts.k).map_err(config)?;
            value_report("fib-sparse", "value", fib_sparse_stream(spec, &opts.limit))
        }
        EnumCmd::BaseSparse => {
            let spec = SparseBaseSpec::new(opts.b, opts.k).map_err(config)?;
            value_report("base-sparse", "value", base_sparse_stream(spec, &opts.limit))
        }
        EnumCmd::SUnits => {
            let set = prime_set(opts)?;
            value_report("s-units", "value", s_unit_stream(&set, &opts.limit))
        }
    })
}

fn bounds(which: &BoundsCmd, opts: &Opts) -> Result<Report, HarnessError> {
    match which {
        BoundsCmd::Matveev {
            log_a,
            exponents,
            degree,
        } => {
            let inst =
                MatveevInstance::new(*degree, log_a.clone(), exponents.clone()).map_err(config)?;
            let f = inst.factors();
            let mut r = Report::new("bounds-matveev", vec!["factor", "value"]);
            for (name, v) in [
                ("leading", f.leading),
                ("n_power", f.n_power),
                ("degree_power", f.degree_power),
                ("log_e_degree", f.log_e_degree),
                ("log_a_product", f.log_a_product),
                ("log_e_b_prime", f.log_e_b_prime),
            ] {
                r.rows.push(vec![Cell::Text(name.into()), Cell::Float(v)]);
            }
            r.push_summary("b_prime", Cell::Float(inst.b_prime()));
            r.push_summary("bound", Cell::Float(matveev_lower_bound(&inst)));
            Ok(r)
        }
        BoundsCmd::Lemma32(a) | BoundsCmd::Lemma33(a) => {
            let set = prime_set(opts)?;
            let k = u32::try_from(opts.k).map_err(|_| HarnessError::Config("k too large".into()))?;
            let (name, v) = if matches!(which, BoundsCmd::Lemma32(_)) {
                ("bounds-lemma32", lemma32_rhs(k, &set, &a.a, a.c, a.big_c))
            } else {
                ("bounds-lemma33", lemma33_rhs(k, &set, &a.a, a.c, a.big_c))
            };
            let mut r = Report::new(name, vec!["k", "primes", "a", "rhs"]);
            r.rows.push(vec![
                Cell::int(k),
                Cell::Text(set.to_string()),
                Cell::Int(a.a.clone()),
                Cell::Float(v.map_err(config)?),
            ]);
            Ok(r)
        }
    }
}

fn experiment(id: &str, opts: &Opts) -> Result<Report, HarnessError> {
    let id: ExperimentId = id.parse()?;
    let mut cfg = ExperimentConfig::new(id);
    cfg.k = opts.k;
    cfg.b = opts.b;
    cfg.primes = opts.primes.clone();
    cfg.limit = opts.limit.clone();
    cfg.epsilon = opts.epsilon;
    cfg.variant = opts.variant;
    cfg.count = opts.count;
    cfg.seed = opts.seed;
    cfg.workers = opts.workers;
    cfg.precision_cap = opts.precision_cap;
    cfg.format = opts.format.into();
    experiments::run(&cfg)
}

fn execute(cli: &Cli) -> Result<(), HarnessError> {
    let opts = &cli.opts;
    let report = match &cli.command {
        Command::Encode { system } => encode(system, opts)?,
        Command::Enum { family } => enumerate(family, opts)?,
        Command::Spart { n } => {
            if n.is_zero() {
                return Err(HarnessError::Config("N must be positive".into()));
            }
            let set = prime_set(opts)?;
            let sp = s_part(n, &set);
            let mut r = Report::new("spart", vec!["prime", "exponent"]);
            for (q, e) in set.primes().iter().zip(&sp.exponents) {
                r.rows.push(vec![Cell::int(*q), Cell::int(*e)]);
            }
            r.push_summary("n", Cell::Int(n.clone()));
            r.push_summary("s_part", Cell::Int(sp.part));
            r.push_summary("cofactor", Cell::Int(sp.cofactor));
            r
        }
        Command::Gpf { n } => {
            if n.is_zero() {
                return Err(HarnessError::Config("N must be positive".into()));
            }
            let p = greatest_prime_factor(n)?;
            let mut r = Report::new("gpf", vec!["n", "gpf"]);
            r.rows.push(vec![Cell::Int(n.clone()), Cell::Int(p)]);
            r
        }
        Command::Bounds { which } => bounds(which, opts)?,
        Command::Experiment { id } => experiment(id, opts)?,
    };

    let format = opts.format.into();
    match &opts.out {
        Some(path) => report.write(format, BufWriter::new(File::create(path)?))?,
        None => report.write(format, io::stdout().lock())?,
    }

    let violations = audit_violations(&report);
    if violations > 0 {
        return Err(HarnessError::Audit(format!("{violations} audit rows violated their inequality")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = io::stdout().flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
