use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use boomspec_core::apn;
use boomspec_core::boomerang::{beta, beta_row, boom_spectrum};
use boomspec_core::charsum::gamma_sums;
use boomspec_core::diff::{classify_locally, delta, delta_row, diff_spectrum};
use boomspec_core::field::{format_digits, parse_digits, DEFAULT_MAX_ELEMENTS};
use boomspec_core::funcs::{algebraic_degree_binomial, coset_orbit, gcd_class};
use boomspec_core::scan::{self, ScanCtx, ScanOptions};
use boomspec_core::tables::{self, TableKind, VerifyOptions};
use boomspec_core::{Elem, Error, ExponentClass, FieldCtx, FuncKind, FuncTable, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

mod render;

use render::Format;

/// Exact differential and boomerang analysis of x^r and x^r (1 + u chi(x)) over F_{p^n}.
#[derive(Parser, Debug)]
#[command(name = "boomspec", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalArgs {
    /// Field characteristic (default 3).
    #[arg(long, global = true)]
    p: Option<u32>,

    /// Extension degree.
    #[arg(long, global = true)]
    n: Option<u32>,

    /// Modulus as base-p digits, constant term first (e.g. 1201 for x^3 + 2x + 1).
    #[arg(long, global = true)]
    modulus: Option<String>,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Allow runs that take minutes or more.
    #[arg(long, global = true)]
    long: bool,

    /// Compute BCT rows even where the beta = 0 shortcut applies.
    #[arg(long, global = true)]
    bct_confirm: bool,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// JSON file with defaults for p, n, modulus, threads, format, max_field, long.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Largest field size (number of elements) to tabulate.
    #[arg(long, global = true, env = "BOOMSPEC_MAX_FIELD")]
    max_field: Option<u64>,
}

#[derive(Args, Debug, Clone)]
struct FuncArgs {
    /// Exponent; negative values are reduced mod q - 1.
    #[arg(long, allow_hyphen_values = true)]
    r: i128,

    /// Coefficient of chi(x) for binomials (default 1).
    #[arg(long)]
    u: Option<String>,

    #[arg(long, value_enum, default_value_t = KindArg::Power)]
    kind: KindArg,

    /// Shorthand for --kind binomial.
    #[arg(long)]
    binomial: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Power,
    Binomial,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ScanMode {
    BetaZero,
    BetaOne,
    LocallyPn,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Modulus, generator and basic constants of the field.
    FieldInfo,
    /// Values of a power map or binomial, at one point or over the whole field.
    Eval {
        #[command(flatten)]
        func: FuncArgs,
        /// Input element (id or poly:<digits>); omit for the full table.
        #[arg(long)]
        x: Option<String>,
    },
    /// One DDT row, or a single entry with --b.
    Ddt {
        #[command(flatten)]
        func: FuncArgs,
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long)]
        b: Option<String>,
    },
    /// One BCT row, or a single entry with --b.
    Bct {
        #[command(flatten)]
        func: FuncArgs,
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long)]
        b: Option<String>,
    },
    /// Differential spectrum of the a = 1 row and the local classification.
    DiffSpectrum {
        #[command(flatten)]
        func: FuncArgs,
    },
    /// Boomerang spectrum of the a = 1 row.
    BoomSpectrum {
        #[command(flatten)]
        func: FuncArgs,
    },
    /// APN exponents from (3^m + 1) r - 2 = k (3^n - 1).
    ApnGen {
        #[arg(long)]
        m: Option<u32>,
        /// All m (the default).
        #[arg(long, conflicts_with = "m")]
        all: bool,
    },
    /// Cyclotomic cosets of an exponent.
    Coset {
        #[arg(long, allow_hyphen_values = true)]
        r: i128,
    },
    /// Gamma sums and the boomerang spectrum of x^{3^n-3} (1 + chi(x)).
    Charsum,
    /// Exhaustive search over binomial exponent classes.
    Scan {
        #[arg(long, value_enum, default_value_t = ScanMode::BetaZero)]
        mode: ScanMode,
        /// Progress file for resumable locally-PN screens.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        batch: Option<usize>,
        /// Force the beta = 0 vs locally-PN cross-check on or off.
        #[arg(long)]
        conjecture_check: Option<bool>,
    },
    /// Recompute a reference table and diff it against the embedded values.
    VerifyTables {
        #[arg(long)]
        table: u32,
    },
}

#[derive(Deserialize, Default, Debug)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    p: Option<u32>,
    n: Option<u32>,
    modulus: Option<String>,
    threads: Option<usize>,
    format: Option<String>,
    max_field: Option<u64>,
    long: Option<bool>,
}

/// Settings after merging flags over the config file.
struct Config {
    p: u32,
    n: Option<u32>,
    modulus: Option<Vec<u32>>,
    /// None means the command's own default: JSON, or plain text for verify-tables.
    format: Option<Format>,
    max_field: u64,
    long: bool,
    bct_confirm: bool,
    out: Option<PathBuf>,
}

impl Config {
    fn resolve(g: &GlobalArgs) -> Result<(Self, Option<usize>)> {
        let file: ConfigFile = match &g.config {
            Some(path) => serde_json::from_reader(File::open(path)?)
                .map_err(|e| Error::Parse(format!("config {}: {e}", path.display())))?,
            None => ConfigFile::default(),
        };
        let p = g.p.or(file.p).unwrap_or(3);
        let format = match (g.format, file.format.as_deref()) {
            (Some(f), _) => Some(f),
            (None, Some(s)) => Some(
                Format::from_str(s, true)
                    .map_err(|_| Error::Parse(format!("config format {s:?}: expected json, csv or md")))?,
            ),
            (None, None) => None,
        };
        let modulus = g
            .modulus
            .as_deref()
            .or(file.modulus.as_deref())
            .map(|s| parse_digits(s, p))
            .transpose()?;
        if let Some(0) = g.threads.or(file.threads) {
            return Err(Error::Domain("--threads must be at least 1".into()));
        }
        Ok((
            Config {
                p,
                n: g.n.or(file.n),
                modulus,
                format,
                max_field: g.max_field.or(file.max_field).unwrap_or(DEFAULT_MAX_ELEMENTS),
                long: g.long || file.long.unwrap_or(false),
                bct_confirm: g.bct_confirm,
                out: g.out.clone(),
            },
            g.threads.or(file.threads),
        ))
    }

    fn n(&self) -> Result<u32> {
        self.n.ok_or_else(|| Error::Domain("--n is required".into()))
    }

    fn field(&self) -> Result<FieldCtx> {
        let n = self.n()?;
        FieldCtx::builder(self.p, n)
            .modulus(self.modulus.clone())
            .max_elements(self.max_field)
            .build()
    }

    fn require_long(&self, what: &str) -> Result<()> {
        if self.long {
            Ok(())
        } else {
            Err(Error::Resource(format!("{what} is a long run; pass --long to start it")))
        }
    }
}

fn table<'f>(field: &'f FieldCtx, f: &FuncArgs) -> Result<FuncTable<'f>> {
    let kind = if f.binomial { KindArg::Binomial } else { f.kind };
    match kind {
        KindArg::Power => {
            if f.u.is_some() {
                return Err(Error::Domain("--u only applies to binomials".into()));
            }
            FuncTable::tabulate(field, FuncKind::Power, f.r, None)
        }
        KindArg::Binomial => {
            let u = match &f.u {
                Some(s) => field.parse_element(s)?,
                None => 1,
            };
            FuncTable::tabulate(field, FuncKind::Binomial, f.r, Some(u))
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let (cfg, threads) = Config::resolve(&cli.global)?;
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
    }
    let mut out: Box<dyn Write> = match &cfg.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let fmt = cfg.format.unwrap_or(Format::Json);
    let mut passed = true;

    match &cli.command {
        Command::FieldInfo => {
            let f = cfg.field()?;
            let info = json!({
                "p": f.p(),
                "n": f.n(),
                "q": f.q(),
                "modulus": f.modulus_string(),
                "generator": f.generator(),
                "generator_digits": format_digits(&f.digits(f.generator()), f.p()),
                "chi_minus_one": f.chi(f.minus_one()),
                "bitsliced": f.trits().is_some(),
            });
            render::object(&mut out, fmt, &info)?;
        }
        Command::Eval { func, x } => {
            let f = cfg.field()?;
            let t = table(&f, func)?;
            match x {
                Some(x) => {
                    let x: Elem = f.parse_element(x)?;
                    let y = t.at(x);
                    let v = json!({"x": x, "y": y, "y_digits": format_digits(&f.digits(y), f.p())});
                    render::object(&mut out, fmt, &v)?;
                }
                None => match fmt {
                    Format::Csv => t.write_csv(&mut out)?,
                    _ => render::pairs(&mut out, fmt, ("x", "y"), t.values().iter().enumerate().map(|(x, &y)| (x as u64, y as u64)))?,
                },
            }
        }
        Command::Ddt { func, a, b } => {
            let f = cfg.field()?;
            let t = table(&f, func)?;
            let a = f.parse_element(a)?;
            match b {
                Some(b) => {
                    let b = f.parse_element(b)?;
                    render::object(&mut out, fmt, &json!({"a": a, "b": b, "delta": delta(&t, a, b)?}))?;
                }
                None => {
                    let row = delta_row(&t, a)?;
                    render::pairs(&mut out, fmt, ("b", "delta"), row.counts.iter().enumerate().map(|(b, &c)| (b as u64, c as u64)))?;
                }
            }
        }
        Command::Bct { func, a, b } => {
            let f = cfg.field()?;
            let t = table(&f, func)?;
            let a = f.parse_element(a)?;
            match b {
                Some(b) => {
                    let b = f.parse_element(b)?;
                    render::object(&mut out, fmt, &json!({"a": a, "b": b, "beta": beta(&t, a, b)?}))?;
                }
                None => {
                    let row = beta_row(&t, a)?;
                    render::pairs(&mut out, fmt, ("b", "beta"), row.counts.iter().enumerate().skip(1).map(|(b, &c)| (b as u64, c as u64)))?;
                }
            }
        }
        Command::DiffSpectrum { func } => {
            let f = cfg.field()?;
            let t = table(&f, func)?;
            let s = diff_spectrum(&t)?;
            let class = if t.has_unit_reduction() { Some(classify_locally(&t)?) } else { None };
            match fmt {
                Format::Json => render::object(&mut out, fmt, &json!({"omega": s.omega, "delta": s.delta, "local": class}))?,
                _ => render::pairs(&mut out, fmt, ("count", "multiplicity"), s.omega.iter().map(|(&k, &v)| (k as u64, v)))?,
            }
        }
        Command::BoomSpectrum { func } => {
            let f = cfg.field()?;
            let t = table(&f, func)?;
            let s = boom_spectrum(&t)?;
            match fmt {
                Format::Json => render::object(&mut out, fmt, &s)?,
                _ => render::pairs(&mut out, fmt, ("count", "multiplicity"), s.nu.iter().map(|(&k, &v)| (k as u64, v)))?,
            }
        }
        Command::ApnGen { m, all: _ } => {
            let recs = apn::generate(cfg.n()?, *m)?;
            render::records(&mut out, fmt, &recs)?;
        }
        Command::Coset { r } => {
            let n = cfg.n()?;
            let q = (cfg.p as u64)
                .checked_pow(n)
                .ok_or_else(|| Error::Domain(format!("{}^{n} overflows", cfg.p)))?;
            let class = ExponentClass::new(*r, cfg.p as u64, q);
            let v = json!({
                "r": class.r,
                "coset_full": class.coset_full,
                "coset_half": class.coset_half,
                "canon": class.canon,
                "orbit_half": coset_orbit(*r, (q - 1) / 2, cfg.p as u64),
                "gcd": gcd_class(*r, q),
                "binomial_degree": algebraic_degree_binomial(cfg.p as u64, q, *r)?,
            });
            render::object(&mut out, fmt, &v)?;
        }
        Command::Charsum => {
            let n = cfg.n()?;
            if n >= 11 {
                cfg.require_long(&format!("charsum at n = {n}"))?;
            }
            let f = cfg.field()?;
            let report = gamma_sums(&f)?;
            if !report.within_weil_bound() || report.quartic_sum != -1 || report.mixed_sum != -1 {
                return Err(Error::InvariantViolation(format!(
                    "charsum p=3 n={n} modulus={}: {report:?}",
                    f.modulus_string()
                )));
            }
            render::object(&mut out, fmt, &report)?;
        }
        Command::Scan { mode, checkpoint, batch, conjecture_check } => {
            let n = cfg.n()?;
            let f = cfg.field()?;
            let ctx = ScanCtx::new(&f)?;
            let opts = ScanOptions {
                bct_confirm: cfg.bct_confirm,
                conjecture_check: *conjecture_check,
                checkpoint: checkpoint.clone(),
                batch: *batch,
            };
            let report = match mode {
                ScanMode::BetaZero => {
                    if n >= 9 && cfg.bct_confirm {
                        cfg.require_long(&format!("BCT-confirmed scan at n = {n}"))?;
                    }
                    scan::scan_beta_zero(&ctx, &opts)?
                }
                ScanMode::BetaOne => scan::scan_beta_one(&ctx, &opts)?,
                ScanMode::LocallyPn => {
                    if n >= 13 {
                        cfg.require_long(&format!("locally-PN screen at n = {n}"))?;
                    }
                    scan::scan_locally_pn(&ctx, &opts)?
                }
            };
            render::scan(&mut out, fmt, &report)?;
        }
        Command::VerifyTables { table } => {
            let kind = TableKind::from_id(*table)?;
            let opts = VerifyOptions {
                long: cfg.long,
                bct_confirm: cfg.bct_confirm,
                modulus: cfg.modulus.clone(),
                max_elements: Some(cfg.max_field),
                scan: ScanOptions::default(),
            };
            let ns: Vec<u32> = match cfg.n {
                Some(n) => vec![n],
                None => kind
                    .n_range()
                    .0
                    .iter()
                    .copied()
                    .filter(|n| cfg.long || !kind.n_range().1.contains(n))
                    .collect(),
            };
            for n in ns {
                let report = tables::verify(kind, n, &opts)?;
                passed &= report.passed();
                match cfg.format {
                    Some(fmt) => render::verify(&mut out, fmt, &report)?,
                    None => writeln!(out, "table {table} n={n}\n{report}")?,
                }
            }
        }
    }
    out.flush()?;
    Ok(passed)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvariantViolation(_) => 2,
        Error::Resource(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("boomspec: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
