use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ssp_core::census::{
    census_scan, parse_coeff_list, read_csv, trace_scan, write_csv, CensusOptions, HyperellipticCurve,
};
use ssp_core::finite_field::{is_prime, PrimeModulus};
use ssp_core::groups::verify::{verify_groups, CheckStatus, VerifyOptions};
use ssp_core::sieve::{
    offset_li, param_schedule, sieve_report, theorem_bound, BoundCase, ScheduleCase, SieveConfig, DEFAULT_ELL_CONSTANT,
};
use ssp_core::splitting::{splits_by_factorization, splits_by_legendre, CaseIndex};
use ssp_core::weil::{classify, discriminant, p_rank, rm_factor, WeilQuartic};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "ssp", version, about = "Supersingular-prime toolkit for abelian surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScheduleArg {
    Generic,
    Rm,
    Qm,
}

#[derive(Subcommand)]
enum Command {
    /// Point counts, Frobenius quartics and classes for every good prime 7 <= p <= x.
    Census {
        /// Five integers (monic quintic c4..c0), six (c5..c0), seven (sextic), or a config file path.
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long)]
        x: f64,
        /// Count over F_p only.
        #[arg(long)]
        trace_only: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Class of X^4 + a1 X^3 + a2 X^2 + p a1 X + p^2.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        a1: i64,
        #[arg(long, allow_hyphen_values = true)]
        a2: i64,
        #[arg(long)]
        p: i64,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Factor the quartic over the integers of Q(sqrt d).
    RmFactor {
        #[arg(long, allow_hyphen_values = true)]
        a1: i64,
        #[arg(long, allow_hyphen_values = true)]
        a2: i64,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        d: i64,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structural checks on the matrix groups and conjugacy sets.
    VerifyGroups {
        /// Largest ell for witness and quotient-size checks.
        #[arg(long, default_value_t = 200)]
        ell: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Legendre criterion against factorization for every admissible (i, ell) and prime p <= x.
    VerifySplitting {
        /// Comma-separated auxiliary primes.
        #[arg(long, default_value = "3,5,13,17,29,37,41")]
        ell: String,
        /// Restrict to one template index.
        #[arg(long)]
        case: Option<u8>,
        #[arg(long, default_value_t = 500.0)]
        x: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sieve report on the supersingular primes of one template from a census CSV.
    SieveDemo {
        /// Census CSV produced by `census`.
        #[arg(long)]
        census: PathBuf,
        /// JSON file {x, t, primes, case}; overrides the inline flags.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long)]
        case: Option<u8>,
        #[arg(long)]
        primes: Option<String>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bound curves, Li(x) and the sieve schedules at x.
    Bounds {
        #[arg(long)]
        x: f64,
        #[arg(long, value_enum)]
        case: Option<ScheduleArg>,
        #[arg(long, default_value_t = 1)]
        n_k: u64,
        #[arg(long, default_value_t = 1)]
        n_a: u64,
        #[arg(long, default_value_t = 1)]
        d: u64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 1.0)]
        c1: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_curve(arg: &str) -> Result<HyperellipticCurve> {
    if let Ok(coeffs) = parse_coeff_list(arg) {
        return Ok(match coeffs.len() {
            5 => HyperellipticCurve::monic_quintic([coeffs[0], coeffs[1], coeffs[2], coeffs[3], coeffs[4]])?,
            6 | 7 => HyperellipticCurve::new(&coeffs)?,
            n => bail!("--curve takes 5, 6 or 7 coefficients, got {n}"),
        });
    }
    let text = fs::read_to_string(arg).with_context(|| format!("cannot read curve file `{arg}`"))?;
    Ok(HyperellipticCurve::from_config(&text)?)
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|e| anyhow!("bad integer `{}`: {e}", t.trim())))
        .collect()
}

fn case_arg(i: u8) -> Result<CaseIndex> {
    Ok(CaseIndex::new(i)?)
}

/// Writes to a temporary file beside `out` and renames it into place, so a
/// failed run leaves nothing behind.
fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)
                .with_context(|| format!("cannot write to `{}`", dir.display()))?;
            tmp.write_all(bytes)?;
            tmp.persist(path).map_err(|e| anyhow!("cannot write `{}`: {}", path.display(), e.error))?;
        }
    }
    Ok(())
}

fn to_json(v: &impl Serialize) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(v)?;
    s.push(b'\n');
    Ok(s)
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(w.into_inner().map_err(|e| anyhow!("{e}"))?)
}

fn quartic(a1: i64, a2: i64, p: i64) -> Result<WeilQuartic> {
    Ok(WeilQuartic::prime(a1, a2, p)?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Census { curve, x, trace_only, format, out } => {
            let c = parse_curve(&curve)?;
            if !x.is_finite() || x < 0.0 {
                bail!("--x must be a non-negative number, got {x}");
            }
            let opts = CensusOptions::default();
            let params = json!({ "curve": c.coeffs(), "discriminant": c.discriminant().to_string(), "x": x, "trace_only": trace_only });
            let bytes = if trace_only {
                let recs = trace_scan(&c, x, &opts)?;
                match format {
                    Format::Csv => csv_bytes(&recs)?,
                    Format::Json => to_json(&json!({ "version": VERSION, "parameters": params, "records": recs }))?,
                }
            } else {
                let recs = census_scan(&c, x, &opts)?;
                match format {
                    Format::Csv => {
                        let mut buf = Vec::new();
                        write_csv(&recs, &mut buf)?;
                        buf
                    }
                    Format::Json => {
                        let rows: Vec<_> = recs
                            .iter()
                            .map(|r| {
                                json!({ "p": r.p, "n1": r.n1, "n2": r.n2, "a1": r.a1, "a2": r.a2, "delta": r.delta, "class": r.cls.name() })
                            })
                            .collect();
                        to_json(&json!({ "version": VERSION, "parameters": params, "records": rows }))?
                    }
                }
            };
            emit(&out, &bytes)
        }
        Command::Classify { a1, a2, p, format, out } => {
            let w = quartic(a1, a2, p)?;
            let cls = classify(&w)?;
            let bytes = match format {
                None => format!("{}\n", cls.name()).into_bytes(),
                Some(Format::Csv) => format!("a1,a2,p,class\n{a1},{a2},{p},{}\n", cls.name()).into_bytes(),
                Some(Format::Json) => to_json(&json!({
                    "version": VERSION,
                    "parameters": { "a1": a1, "a2": a2, "p": p },
                    "class": cls.name(),
                    "p_rank": p_rank(&w),
                    "discriminant": discriminant(&w),
                }))?,
            };
            emit(&out, &bytes)
        }
        Command::RmFactor { a1, a2, p, d, format, out } => {
            let w = quartic(a1, a2, p)?;
            let b = rm_factor(&w, d)?;
            let bytes = match format {
                None => match b {
                    Some(b) => format!("{b}\n"),
                    None => "none\n".into(),
                }
                .into_bytes(),
                Some(Format::Csv) => {
                    let (u, v) = b.map_or((String::new(), String::new()), |b| (b.u().to_string(), b.v().to_string()));
                    format!("a1,a2,p,d,u,v\n{a1},{a2},{p},{d},{u},{v}\n").into_bytes()
                }
                Some(Format::Json) => to_json(&json!({
                    "version": VERSION,
                    "parameters": { "a1": a1, "a2": a2, "p": p, "d": d },
                    "factor": b.map(|b| json!({ "u": b.u(), "v": b.v(), "d": b.d() })),
                }))?,
            };
            emit(&out, &bytes)
        }
        Command::VerifyGroups { ell, format, out } => {
            if ell < 3 {
                bail!("--ell must be at least 3");
            }
            let opts = VerifyOptions { max_ell: ell, ..VerifyOptions::default() };
            let checks = verify_groups(&opts);
            let failed = checks.iter().filter(|c| c.status == CheckStatus::Fail).count();
            let bytes = match format {
                Format::Csv => csv_bytes(&checks)?,
                Format::Json => to_json(&json!({
                    "version": VERSION,
                    "parameters": opts,
                    "summary": { "checks": checks.len(), "failed": failed },
                    "checks": checks,
                }))?,
            };
            emit(&out, &bytes)
        }
        Command::VerifySplitting { ell, case, x, format, out } => {
            let ells = parse_u64_list(&ell)?;
            for &l in &ells {
                PrimeModulus::new(l).map_err(|_| anyhow!("--ell: {l} is not an odd prime"))?;
            }
            let cases = match case {
                Some(i) => vec![case_arg(i)?],
                None => CaseIndex::ALL.to_vec(),
            };
            if !(x >= 2.0) || !x.is_finite() {
                bail!("--x must be at least 2");
            }
            #[derive(Serialize)]
            struct Row {
                i: u8,
                ell: u64,
                p: u64,
                legendre_side: bool,
                factor_side: bool,
                agree: bool,
            }
            let mut rows = Vec::new();
            for i in cases {
                for &l in ells.iter().filter(|&&l| i.plain_admissible(l)) {
                    let md = PrimeModulus::new(l)?;
                    for p in (2..=x as u64).filter(|&p| is_prime(p)) {
                        let legendre_side = splits_by_legendre(p, md, i)?;
                        let factor_side = splits_by_factorization(p, md, i);
                        rows.push(Row { i: i.get(), ell: l, p, legendre_side, factor_side, agree: legendre_side == factor_side });
                    }
                }
            }
            let bytes = match format {
                Format::Csv => csv_bytes(&rows)?,
                Format::Json => {
                    let disagreements = rows.iter().filter(|r| !r.agree).count();
                    to_json(&json!({
                        "version": VERSION,
                        "parameters": { "ell": ells, "case": case, "x": x },
                        "summary": { "triples": rows.len(), "disagreements": disagreements },
                        "rows": rows,
                    }))?
                }
            };
            emit(&out, &bytes)
        }
        Command::SieveDemo { census, config, x, case, primes, t, out } => {
            let cfg: SieveConfig = match config {
                Some(path) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("cannot read `{}`", path.display()))?;
                    serde_json::from_str(&text).with_context(|| format!("bad sieve config `{}`", path.display()))?
                }
                None => {
                    let x = x.ok_or_else(|| anyhow!("--x is required without --config"))?;
                    let case = case_arg(case.ok_or_else(|| anyhow!("--case is required without --config"))?)?;
                    let primes = parse_u64_list(&primes.ok_or_else(|| anyhow!("--primes is required without --config"))?)?;
                    let mut cfg = SieveConfig { x, t: primes.len(), primes, case, ell_constant: DEFAULT_ELL_CONSTANT };
                    if let Some(t) = t {
                        cfg.t = t;
                    }
                    cfg
                }
            };
            cfg.validate()?;
            let file = fs::File::open(&census).with_context(|| format!("cannot read census `{}`", census.display()))?;
            let recs = read_csv(io::BufReader::new(file))?;
            let target = cfg.case.surface_class();
            let members: Vec<u64> =
                recs.iter().filter(|r| r.cls == target && r.p as f64 <= cfg.x).map(|r| r.p).collect();
            let report = sieve_report(&members, &cfg)?;
            emit(
                &out,
                &to_json(&json!({
                    "version": VERSION,
                    "parameters": { "config": cfg, "census": census.display().to_string(), "class": target.name() },
                    "report": report,
                }))?,
            )
        }
        Command::Bounds { x, case, n_k, n_a, d, c, c1, out } => {
            let generic = theorem_bound(BoundCase::Generic, x)?;
            let rm_qm = theorem_bound(BoundCase::RmOrQm, x)?;
            let cases = match case {
                Some(ScheduleArg::Generic) => vec![ScheduleCase::Generic],
                Some(ScheduleArg::Rm) => vec![ScheduleCase::Rm],
                Some(ScheduleArg::Qm) => vec![ScheduleCase::Qm],
                None => vec![ScheduleCase::Generic, ScheduleCase::Rm, ScheduleCase::Qm],
            };
            let mut schedules = Vec::new();
            for s in cases {
                let sched = param_schedule(s, x, n_k, n_a, d, c, c1)?;
                schedules.push(json!({ "case": s, "ell1": sched.ell1, "t": sched.t }));
            }
            let li = offset_li(x);
            emit(
                &out,
                &to_json(&json!({
                    "version": VERSION,
                    "parameters": { "x": x, "n_k": n_k, "n_a": n_a, "d_k": d, "c": c, "c1": c1 },
                    "theorem_bound": { "generic": generic, "rm_or_qm": rm_qm, "ratio": generic / rm_qm },
                    "offset_li": li,
                    "schedules": schedules,
                }))?,
            )
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let line = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("{}", line.trim());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let chain: Vec<String> = e.chain().map(|c| c.to_string()).collect();
            eprintln!("error: {}", chain.join(": "));
            ExitCode::from(2)
        }
    }
}
