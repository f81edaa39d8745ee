//! Command-line surface: flag parsing, config-file merge, dispatch, and
//! byte-stable CSV/JSON report emission.
//!
//! Every numeric value in a report is serialized with 17 significant digits
//! (`{:.16e}`), so identical inputs always produce identical bytes.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exact::{self, JointPoint};
use crate::expansions::{self, ApproxOrder};
use crate::gmd::GmdParams;
use crate::lab::{self, ErrorRecord, ErrorSide, ProbeId, ProbeResult};
use crate::norming::solve_norming;

/// 17-significant-digit serialization used for every numeric output.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Exact column order of the error-table reports.
pub const ERROR_TABLE_COLUMNS: [&str; 20] = [
    "k",
    "sigma",
    "n",
    "x",
    "y",
    "b",
    "exact_cdf",
    "s1",
    "s2",
    "s3",
    "delta1",
    "delta2",
    "delta3",
    "exact_pdf",
    "t1",
    "t2",
    "t3",
    "theta1",
    "theta2",
    "theta3",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Usage(format!(
                "unknown format '{other}' (expected csv or json)"
            ))),
        }
    }
}

fn record_fields(r: &ErrorRecord) -> [f64; 20] {
    [
        r.k,
        r.sigma,
        r.n,
        r.x,
        r.y,
        r.b,
        r.exact_cdf,
        r.s1,
        r.s2,
        r.s3,
        r.delta1,
        r.delta2,
        r.delta3,
        r.exact_pdf,
        r.t1,
        r.t2,
        r.t3,
        r.theta1,
        r.theta2,
        r.theta3,
    ]
}

pub fn render_error_table_csv(records: &[ErrorRecord]) -> String {
    let mut out = String::new();
    out.push_str(&ERROR_TABLE_COLUMNS.join(","));
    out.push('\n');
    for r in records {
        let row: Vec<String> = record_fields(r).iter().map(|v| fmt17(*v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn render_error_table_json(records: &[ErrorRecord]) -> String {
    let mut out = String::from("[\n");
    for (i, r) in records.iter().enumerate() {
        let fields: Vec<String> = ERROR_TABLE_COLUMNS
            .iter()
            .zip(record_fields(r))
            .map(|(name, v)| format!("\"{name}\":{}", fmt17(v)))
            .collect();
        out.push_str("  {");
        out.push_str(&fields.join(","));
        out.push('}');
        if i + 1 < records.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("]\n");
    out
}

/// Writes an error-table report to `out` (stdout when absent).
pub fn write_report(
    records: &[ErrorRecord],
    format: ReportFormat,
    out: Option<&Path>,
) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Usage("refusing to write an empty report".into()));
    }
    let body = match format {
        ReportFormat::Csv => render_error_table_csv(records),
        ReportFormat::Json => render_error_table_json(records),
    };
    emit(out, &body)
}

fn emit(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)?;
                }
            }
            fs::write(path, body)?;
        }
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
        }
    }
    Ok(())
}

fn json_array(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|v| fmt17(*v)).collect();
    format!("[{}]", items.join(","))
}

pub fn render_probe_json(r: &ProbeResult) -> String {
    let stage = |s: &lab::ProbeStage| {
        format!(
            "{{\"values\":{},\"extrapolated\":{},\"target\":{},\"abs_gap\":{}}}",
            json_array(&s.values),
            fmt17(s.extrapolated),
            fmt17(s.target),
            fmt17(s.abs_gap)
        )
    };
    format!(
        "{{\"functional_id\":\"{}\",\"k\":{},\"sigma\":{},\"x\":{},\"y\":{},\
         \"n_grid\":{},\"t_grid\":{},\"stage1\":{},\"stage2\":{}}}\n",
        r.id.as_str(),
        fmt17(r.k),
        fmt17(r.sigma),
        fmt17(r.x),
        fmt17(r.y),
        json_array(&r.n_grid),
        json_array(&r.t_grid),
        stage(&r.stage1),
        stage(&r.stage2)
    )
}

pub fn render_mc_json(s: &lab::McSummary) -> String {
    let points: Vec<String> = s
        .points
        .iter()
        .map(|p| {
            format!(
                "{{\"x\":{},\"y\":{},\"empirical\":{},\"exact\":{},\"abs_dev\":{},\"se_bound\":{}}}",
                fmt17(p.x),
                fmt17(p.y),
                fmt17(p.empirical),
                fmt17(p.exact),
                fmt17(p.abs_dev),
                fmt17(p.se_bound)
            )
        })
        .collect();
    format!(
        "{{\"n\":{},\"reps\":{},\"seed\":{},\"points\":[{}],\"max_abs_dev\":{},\"se_bound\":{}}}\n",
        s.n,
        s.reps,
        s.seed,
        points.join(","),
        fmt17(s.max_abs_dev),
        fmt17(s.se_bound)
    )
}

/// Parses `start:stop:count` (inclusive endpoints) or a comma-separated list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |msg: &str| Error::Usage(format!("bad grid '{spec}': {msg}"));
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:count"));
        }
        let start: f64 = parts[0].parse().map_err(|_| bad("start is not a number"))?;
        let stop: f64 = parts[1].parse().map_err(|_| bad("stop is not a number"))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| bad("count is not an integer"))?;
        if !start.is_finite() || !stop.is_finite() || count == 0 {
            return Err(bad("need finite endpoints and count >= 1"));
        }
        if count > 10_000_000 {
            return Err(bad("count exceeds the 1e7 grid budget"));
        }
        if count == 1 {
            return Ok(vec![start]);
        }
        let step = (stop - start) / (count - 1) as f64;
        Ok((0..count).map(|i| start + step * i as f64).collect())
    } else {
        spec.split(',')
            .map(|tok| {
                let v: f64 = tok.trim().parse().map_err(|_| bad("not a number"))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(bad("values must be finite"))
                }
            })
            .collect()
    }
}

#[derive(Parser)]
#[command(
    name = "gmd-extremes",
    version,
    about = "Generalized Maxwell extremes: exact laws, asymptotic expansions, and their verification lab"
)]
struct Cli {
    /// JSON config file supplying default values; explicit flags win.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy, Default)]
struct DistFlags {
    /// Shape parameter k > 0 (default 1).
    #[arg(long)]
    k: Option<f64>,
    /// Scale parameter sigma > 0 (default 1).
    #[arg(long)]
    sigma: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Distribution-level evaluations (pdf, cdf, sf, quantile, sample, mills).
    Dist {
        #[command(subcommand)]
        action: DistAction,
    },
    /// Solve the norming constant for a sample size.
    Norming {
        #[command(flatten)]
        dist: DistFlags,
        /// Sample size n (real-valued, 3 <= n <= 1e300).
        #[arg(long)]
        n: Option<f64>,
    },
    /// Asymptotic approximants of the extreme-value laws.
    Approx {
        #[command(subcommand)]
        action: ApproxAction,
    },
    /// Exact finite-n laws of the normalized (max, min) pair.
    Exact {
        #[command(subcommand)]
        action: ExactAction,
    },
    /// Error table: exact values, approximants, and absolute errors.
    Errors {
        #[command(flatten)]
        dist: DistFlags,
        /// Sample sizes, e.g. `50,500,5000` or `start:stop:count`.
        #[arg(long)]
        n_list: Option<String>,
        /// Max coordinates, e.g. `0:2:5` or `0,1,2`.
        #[arg(long, allow_hyphen_values = true)]
        x_grid: Option<String>,
        /// Min coordinates, same syntax.
        #[arg(long, allow_hyphen_values = true)]
        y_grid: Option<String>,
        /// Report format: csv (default) or json.
        #[arg(long)]
        format: Option<String>,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Limit probe: evaluate a catalog functional on an n-grid and
    /// Richardson-extrapolate both stages.
    Probe {
        #[command(flatten)]
        dist: DistFlags,
        /// Probe id: lemma42, lemma43, prop21, thm22, thm23, eq415, eq416.
        #[arg(long)]
        id: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<f64>,
        /// Ascending n grid (default 1e6,1e12,1e24).
        #[arg(long)]
        n_grid: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convergence-rate fit: slope of log error vs log b^(-2k).
    Rates {
        #[command(flatten)]
        dist: DistFlags,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<f64>,
        /// Truncation order of the approximant: 1, 2, or 3.
        #[arg(long)]
        order: Option<u32>,
        /// Which error family to fit: cdf or pdf.
        #[arg(long)]
        side: Option<String>,
        /// Ascending n grid (default 1e6,1e12,1e24,1e48).
        #[arg(long)]
        n_grid: Option<String>,
    },
    /// Monte Carlo block extremes against the exact joint law.
    Mc {
        #[command(flatten)]
        dist: DistFlags,
        /// Block size (integer n >= 3).
        #[arg(long)]
        n: Option<u64>,
        /// Replication count.
        #[arg(long)]
        reps: Option<u64>,
        /// RNG seed (default 42).
        #[arg(long)]
        seed: Option<u64>,
        /// Max coordinates of the comparison grid.
        #[arg(long, allow_hyphen_values = true)]
        x_grid: Option<String>,
        /// Min coordinates of the comparison grid.
        #[arg(long, allow_hyphen_values = true)]
        y_grid: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the figure datasets (CSV) into a directory.
    Figures {
        #[command(flatten)]
        dist: DistFlags,
        /// Which figure dataset: 1, 2, 3, or 4.
        #[arg(long)]
        which: Option<u32>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the n grid of figures 1-2.
        #[arg(long)]
        n_list: Option<String>,
        /// Override the free-coordinate grid of figures 3-4.
        #[arg(long, allow_hyphen_values = true)]
        coord_grid: Option<String>,
    },
}

#[derive(Subcommand)]
enum DistAction {
    /// Density at x.
    Pdf {
        #[command(flatten)]
        dist: DistFlags,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
    },
    /// Distribution function at x.
    Cdf {
        #[command(flatten)]
        dist: DistFlags,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
    },
    /// Survival function at x.
    Sf {
        #[command(flatten)]
        dist: DistFlags,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
    },
    /// Quantile at probability q in (0,1).
    Quantile {
        #[command(flatten)]
        dist: DistFlags,
        #[arg(long)]
        q: Option<f64>,
    },
    /// Draw i.i.d. samples (one per line).
    Sample {
        #[command(flatten)]
        dist: DistFlags,
        #[arg(long)]
        count: Option<u64>,
        /// RNG seed (default 0).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Mills-type tail approximation of sf(x) with 1, 2, or 3 terms.
    Mills {
        #[command(flatten)]
        dist: DistFlags,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        #[arg(long)]
        terms: Option<u32>,
    },
}

#[derive(Args)]
struct LevelArgs {
    #[command(flatten)]
    dist: DistFlags,
    #[arg(long)]
    n: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<f64>,
    /// Truncation order: 1, 2, or 3.
    #[arg(long)]
    order: Option<u32>,
}

#[derive(Subcommand)]
enum ApproxAction {
    /// Approximant of P(M_n <= u(x, b_n)).
    Max(LevelArgs),
    /// Approximant of P(m_n <= v(y, b_n)).
    Min(LevelArgs),
    /// Approximant S_i of the joint cdf.
    Cdf(LevelArgs),
    /// Approximant T_i of the joint density.
    Pdf(LevelArgs),
}

#[derive(Subcommand)]
enum ExactAction {
    /// Exact P(M_n <= u(x, b_n)).
    Max(LevelArgs),
    /// Exact P(m_n <= v(y, b_n)).
    Min(LevelArgs),
    /// Exact joint cdf at (x, y).
    Cdf(LevelArgs),
    /// Exact joint density at (x, y).
    Pdf(LevelArgs),
    /// The log-law functional h(x, y).
    H(LevelArgs),
}

/// JSON config file; any subset of these keys may be present.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    k: Option<f64>,
    sigma: Option<f64>,
    n: Option<f64>,
    x: Option<f64>,
    y: Option<f64>,
    q: Option<f64>,
    order: Option<u32>,
    terms: Option<u32>,
    seed: Option<u64>,
    count: Option<u64>,
    reps: Option<u64>,
    id: Option<String>,
    side: Option<String>,
    which: Option<u32>,
    n_list: Option<String>,
    n_grid: Option<String>,
    x_grid: Option<String>,
    y_grid: Option<String>,
    coord_grid: Option<String>,
    format: Option<String>,
    out: Option<String>,
}

fn load_config(path: Option<&Path>) -> Result<ConfigFile> {
    match path {
        None => Ok(ConfigFile::default()),
        Some(p) => {
            let text = fs::read_to_string(p)?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Usage(format!("--config {}: {e}", p.display())))
        }
    }
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::Usage(format!("missing required value for {flag}")))
}

/// Domain violations on flag-derived values are usage errors carrying the
/// offending flag name; numeric failures keep their own class.
fn flag_scope<T>(r: Result<T>, flag: &str) -> Result<T> {
    r.map_err(|e| match e {
        Error::Domain(msg) => Error::Usage(format!("{flag}: {msg}")),
        other => other,
    })
}

fn make_dist(flags: DistFlags, cfg: &ConfigFile) -> Result<GmdParams> {
    let k = flags.k.or(cfg.k).unwrap_or(1.0);
    let sigma = flags.sigma.or(cfg.sigma).unwrap_or(1.0);
    flag_scope(GmdParams::new(k, sigma), "--k/--sigma")
}

fn parse_order(order: Option<u32>, cfg: &ConfigFile) -> Result<ApproxOrder> {
    let idx = require(order.or(cfg.order), "--order")?;
    flag_scope(ApproxOrder::from_index(idx), "--order")
}

/// Runs the CLI; returns the process exit code (0 ok, 2 usage, 1 numeric/IO).
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(err @ Error::Usage(_)) => {
            eprintln!("{err}");
            2
        }
        Err(err) => {
            eprintln!("{err}");
            1
        }
    }
}

fn print_value(v: f64) {
    println!("{}", fmt17(v));
}

fn dispatch(cli: Cli) -> Result<()> {
    let cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Dist { action } => run_dist(action, &cfg),
        Command::Norming { dist, n } => {
            let p = make_dist(dist, &cfg)?;
            let n = require(n.or(cfg.n), "--n")?;
            let nm = flag_scope(solve_norming(&p, n), "--n")?;
            println!(
                "{{\"n\":{},\"b\":{},\"b_pow_2k\":{},\"t\":{}}}",
                fmt17(nm.n()),
                fmt17(nm.b()),
                fmt17(nm.b_pow_2k()),
                fmt17(nm.t())
            );
            Ok(())
        }
        Command::Approx { action } => run_approx(action, &cfg),
        Command::Exact { action } => run_exact(action, &cfg),
        Command::Errors {
            dist,
            n_list,
            x_grid,
            y_grid,
            format,
            out,
        } => {
            let p = make_dist(dist, &cfg)?;
            let n_list = parse_grid(&require(n_list.or(cfg.n_list.clone()), "--n-list")?)?;
            let xs = parse_grid(&require(x_grid.or(cfg.x_grid.clone()), "--x-grid")?)?;
            let ys = parse_grid(&require(y_grid.or(cfg.y_grid.clone()), "--y-grid")?)?;
            let format = match format.or(cfg.format.clone()) {
                Some(s) => s.parse::<ReportFormat>()?,
                None => ReportFormat::Csv,
            };
            let out = out.or_else(|| cfg.out.clone().map(PathBuf::from));
            let records = flag_scope(lab::error_table(&p, &n_list, &xs, &ys), "--n-list")?;
            write_report(&records, format, out.as_deref())
        }
        Command::Probe {
            dist,
            id,
            x,
            y,
            n_grid,
            out,
        } => {
            let p = make_dist(dist, &cfg)?;
            let id: ProbeId = require(id.or(cfg.id.clone()), "--id")?.parse()?;
            let x = require(x.or(cfg.x), "--x")?;
            let y = require(y.or(cfg.y), "--y")?;
            let n_grid = match n_grid.or(cfg.n_grid.clone()) {
                Some(s) => parse_grid(&s)?,
                None => vec![1e6, 1e12, 1e24],
            };
            let result = flag_scope(
                lab::limit_probe(id, &p, JointPoint::new(x, y), &n_grid),
                "--n-grid",
            )?;
            let body = render_probe_json(&result);
            let out = out.or_else(|| cfg.out.clone().map(PathBuf::from));
            emit(out.as_deref(), &body)
        }
        Command::Rates {
            dist,
            x,
            y,
            order,
            side,
            n_grid,
        } => {
            let p = make_dist(dist, &cfg)?;
            let x = require(x.or(cfg.x), "--x")?;
            let y = require(y.or(cfg.y), "--y")?;
            let ord = parse_order(order, &cfg)?;
            let side: ErrorSide = require(side.or(cfg.side.clone()), "--side")?.parse()?;
            let n_grid = match n_grid.or(cfg.n_grid.clone()) {
                Some(s) => parse_grid(&s)?,
                None => vec![1e6, 1e12, 1e24, 1e48],
            };
            let slope = flag_scope(
                lab::rate_fit(&p, JointPoint::new(x, y), side, ord, &n_grid),
                "--n-grid",
            )?;
            print_value(slope);
            Ok(())
        }
        Command::Mc {
            dist,
            n,
            reps,
            seed,
            x_grid,
            y_grid,
            out,
        } => {
            let p = make_dist(dist, &cfg)?;
            let n = require(n.or(cfg.n.map(|v| v as u64)), "--n")?;
            let reps = require(reps.or(cfg.reps), "--reps")?;
            let seed = seed.or(cfg.seed).unwrap_or(42);
            let xs = parse_grid(&require(x_grid.or(cfg.x_grid.clone()), "--x-grid")?)?;
            let ys = parse_grid(&require(y_grid.or(cfg.y_grid.clone()), "--y-grid")?)?;
            let mut grid = Vec::with_capacity(xs.len() * ys.len());
            for &x in &xs {
                for &y in &ys {
                    grid.push(JointPoint::new(x, y));
                }
            }
            let summary = flag_scope(lab::mc_block_extremes(&p, n, reps, seed, &grid), "--n")?;
            let body = render_mc_json(&summary);
            let out = out.or_else(|| cfg.out.clone().map(PathBuf::from));
            emit(out.as_deref(), &body)
        }
        Command::Figures {
            dist,
            which,
            out,
            n_list,
            coord_grid,
        } => {
            let which = require(which.or(cfg.which), "--which")?;
            let out = require(out.or_else(|| cfg.out.clone().map(PathBuf::from)), "--out")?;
            let n_list = match n_list.or(cfg.n_list.clone()) {
                Some(s) => Some(parse_grid(&s)?),
                None => None,
            };
            let coord = match coord_grid.or(cfg.coord_grid.clone()) {
                Some(s) => Some(parse_grid(&s)?),
                None => None,
            };
            run_figures(dist, &cfg, which, &out, n_list, coord)
        }
    }
}

fn run_dist(action: DistAction, cfg: &ConfigFile) -> Result<()> {
    match action {
        DistAction::Pdf { dist, x } => {
            let p = make_dist(dist, cfg)?;
            print_value(p.pdf(require(x.or(cfg.x), "--x")?));
        }
        DistAction::Cdf { dist, x } => {
            let p = make_dist(dist, cfg)?;
            print_value(p.cdf(require(x.or(cfg.x), "--x")?));
        }
        DistAction::Sf { dist, x } => {
            let p = make_dist(dist, cfg)?;
            print_value(p.sf(require(x.or(cfg.x), "--x")?));
        }
        DistAction::Quantile { dist, q } => {
            let p = make_dist(dist, cfg)?;
            let q = require(q.or(cfg.q), "--q")?;
            print_value(flag_scope(p.quantile(q), "--q")?);
        }
        DistAction::Sample { dist, count, seed } => {
            let p = make_dist(dist, cfg)?;
            let count = require(count.or(cfg.count), "--count")?;
            let seed = seed.or(cfg.seed).unwrap_or(0);
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            let draws = p.sample(&mut rng, count as usize);
            let mut stdout = std::io::stdout().lock();
            for d in draws {
                writeln!(stdout, "{}", fmt17(d))?;
            }
        }
        DistAction::Mills { dist, x, terms } => {
            let p = make_dist(dist, cfg)?;
            let x = require(x.or(cfg.x), "--x")?;
            let terms = require(terms.or(cfg.terms), "--terms")?;
            print_value(flag_scope(p.mills_tail(x, terms), "--x/--terms")?);
        }
    }
    Ok(())
}

fn level_context(
    args: &LevelArgs,
    cfg: &ConfigFile,
) -> Result<(GmdParams, crate::norming::Norming)> {
    let p = make_dist(args.dist, cfg)?;
    let n = require(args.n.or(cfg.n), "--n")?;
    let nm = flag_scope(solve_norming(&p, n), "--n")?;
    Ok((p, nm))
}

fn run_approx(action: ApproxAction, cfg: &ConfigFile) -> Result<()> {
    match action {
        ApproxAction::Max(args) => {
            let (p, nm) = level_context(&args, cfg)?;
            let x = require(args.x.or(cfg.x), "--x")?;
            let ord = parse_order(args.order, cfg)?;
            print_value(expansions::approx_max_cdf(&p, &nm, x, ord));
        }
        ApproxAction::Min(args) => {
            let (p, nm) = level_context(&args, cfg)?;
            let y = require(args.y.or(cfg.y), "--y")?;
            let ord = parse_order(args.order, cfg)?;
            print_value(expansions::approx_min_cdf(&p, &nm, y, ord));
        }
        ApproxAction::Cdf(args) => {
            let (p, nm) = level_context(&args, cfg)?;
            let x = require(args.x.or(cfg.x), "--x")?;
            let y = require(args.y.or(cfg.y), "--y")?;
            let ord = parse_order(args.order, cfg)?;
            print_value(expansions::approx_joint_cdf(&p, &nm, x, y, ord));
        }
        ApproxAction::Pdf(args) => {
            let (p, nm) = level_context(&args, cfg)?;
            let x = require(args.x.or(cfg.x), "--x")?;
            let y = require(args.y.or(cfg.y), "--y")?;
            let ord = parse_order(args.order, cfg)?;
            print_value(expansions::approx_joint_pdf(&p, &nm, x, y, ord));
        }
    }
    Ok(())
}

fn run_exact(action: ExactAction, cfg: &ConfigFile) -> Result<()> {
    match action {
        ExactAction::Max(args) => {
            let (p, nm) = level_context(&args, cfg)?;
            let x = require(args.x.or(cfg.x), "--x")?;
            print_value(exact::exact_max_cdf(&p, &nm, x));
        }
        ExactAction::Min(args) => {
            let (p, nm) = level_context(&args, cfg)?;
            let y = require(args.y.or(cfg.y), "--y")?;
            print_value(exact::exact_min_cdf(&p, &nm, y));
        }
        ExactAction::Cdf(args) => {
            let (p, nm) = level_context(&args, cfg)?;
            let x = require(args.x.or(cfg.x), "--x")?;
            let y = require(args.y.or(cfg.y), "--y")?;
            print_value(exact::exact_joint_cdf(&p, &nm, JointPoint::new(x, y)));
        }
        ExactAction::Pdf(args) => {
            let (p, nm) = level_context(&args, cfg)?;
            let x = require(args.x.or(cfg.x), "--x")?;
            let y = require(args.y.or(cfg.y), "--y")?;
            print_value(exact::exact_joint_pdf(&p, &nm, JointPoint::new(x, y)));
        }
        ExactAction::H(args) => {
            let (p, nm) = level_context(&args, cfg)?;
            let x = require(args.x.or(cfg.x), "--x")?;
            let y = require(args.y.or(cfg.y), "--y")?;
            print_value(flag_scope(
                exact::h_k_functional(&p, &nm, JointPoint::new(x, y)),
                "--x/--y",
            )?);
        }
    }
    Ok(())
}

/// Log-spaced n grid for the approximants-vs-n figures.
fn default_fig_n_grid() -> Vec<f64> {
    let (lo, hi, count) = (50.0f64, 5000.0f64, 25usize);
    let ratio = (hi / lo).powf(1.0 / (count - 1) as f64);
    (0..count).map(|i| lo * ratio.powi(i as i32)).collect()
}

fn write_pdf_vs_n_csv(p: &GmdParams, n_grid: &[f64], x: f64, y: f64, path: &Path) -> Result<()> {
    let mut body = String::from("n,exact_pdf,t1,t2,t3\n");
    for &n in n_grid {
        let nm = solve_norming(p, n)?;
        let exact_pdf = exact::exact_joint_pdf(p, &nm, JointPoint::new(x, y));
        let t1 = expansions::approx_joint_pdf(p, &nm, x, y, ApproxOrder::First);
        let t2 = expansions::approx_joint_pdf(p, &nm, x, y, ApproxOrder::Second);
        let t3 = expansions::approx_joint_pdf(p, &nm, x, y, ApproxOrder::Third);
        body.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt17(n),
            fmt17(exact_pdf),
            fmt17(t1),
            fmt17(t2),
            fmt17(t3)
        ));
    }
    emit(Some(path), &body)
}

/// One panel of the absolute-error figures: vary one coordinate, fix the other.
fn write_error_panel_csv(
    p: &GmdParams,
    n: f64,
    vary_x: bool,
    fixed: f64,
    grid: &[f64],
    side: ErrorSide,
    path: &Path,
) -> Result<()> {
    let nm = solve_norming(p, n)?;
    let err_names = match side {
        ErrorSide::Cdf => ["delta1", "delta2", "delta3"],
        ErrorSide::Pdf => ["theta1", "theta2", "theta3"],
    };
    let mut body = format!(
        "{},{},{},{}\n",
        if vary_x { "x" } else { "y" },
        err_names[0],
        err_names[1],
        err_names[2]
    );
    for &c in grid {
        let (x, y) = if vary_x { (c, fixed) } else { (fixed, c) };
        let pt = JointPoint::new(x, y);
        let errs: [f64; 3] = match side {
            ErrorSide::Cdf => {
                let exact = exact::exact_joint_cdf(p, &nm, pt);
                [
                    (exact - expansions::approx_joint_cdf(p, &nm, x, y, ApproxOrder::First)).abs(),
                    (exact - expansions::approx_joint_cdf(p, &nm, x, y, ApproxOrder::Second)).abs(),
                    (exact - expansions::approx_joint_cdf(p, &nm, x, y, ApproxOrder::Third)).abs(),
                ]
            }
            ErrorSide::Pdf => {
                let exact = exact::exact_joint_pdf(p, &nm, pt);
                [
                    (exact - expansions::approx_joint_pdf(p, &nm, x, y, ApproxOrder::First)).abs(),
                    (exact - expansions::approx_joint_pdf(p, &nm, x, y, ApproxOrder::Second)).abs(),
                    (exact - expansions::approx_joint_pdf(p, &nm, x, y, ApproxOrder::Third)).abs(),
                ]
            }
        };
        body.push_str(&format!(
            "{},{},{},{}\n",
            fmt17(c),
            fmt17(errs[0]),
            fmt17(errs[1]),
            fmt17(errs[2])
        ));
    }
    emit(Some(path), &body)
}

/// Figure datasets:
/// 1: joint pdf vs n at (2, 6), k = 1 (one CSV);
/// 2: same point for k in {0.5, 1, 1.5, 6} (four CSVs);
/// 3: joint-cdf absolute errors at n = 500, k = 1, four panels
///    (y = 2, y = 10 varying x; x = 2, x = 10 varying y);
/// 4: the same four panels for the joint-density errors.
fn run_figures(
    dist: DistFlags,
    cfg: &ConfigFile,
    which: u32,
    out_dir: &Path,
    n_list: Option<Vec<f64>>,
    coord: Option<Vec<f64>>,
) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    let sigma = dist.sigma.or(cfg.sigma).unwrap_or(1.0);
    let point = (2.0, 6.0);
    let n_grid = n_list.unwrap_or_else(default_fig_n_grid);
    let coord_grid = match coord {
        Some(g) => g,
        None => parse_grid("-2:10:121")?,
    };
    match which {
        1 => {
            let p = flag_scope(
                GmdParams::new(dist.k.or(cfg.k).unwrap_or(1.0), sigma),
                "--k/--sigma",
            )?;
            write_pdf_vs_n_csv(
                &p,
                &n_grid,
                point.0,
                point.1,
                &out_dir.join("fig1_k1.0.csv"),
            )
        }
        2 => {
            for &k in &[0.5, 1.0, 1.5, 6.0] {
                let p = flag_scope(GmdParams::new(k, sigma), "--sigma")?;
                let name = format!("fig2_k{k:.1}.csv");
                write_pdf_vs_n_csv(&p, &n_grid, point.0, point.1, &out_dir.join(name))?;
            }
            Ok(())
        }
        3 | 4 => {
            let p = flag_scope(
                GmdParams::new(dist.k.or(cfg.k).unwrap_or(1.0), sigma),
                "--k/--sigma",
            )?;
            let n = 500.0;
            let side = if which == 3 {
                ErrorSide::Cdf
            } else {
                ErrorSide::Pdf
            };
            let stem = if which == 3 { "fig3" } else { "fig4" };
            write_error_panel_csv(
                &p,
                n,
                true,
                2.0,
                &coord_grid,
                side,
                &out_dir.join(format!("{stem}_panel_a_y2.csv")),
            )?;
            write_error_panel_csv(
                &p,
                n,
                true,
                10.0,
                &coord_grid,
                side,
                &out_dir.join(format!("{stem}_panel_b_y10.csv")),
            )?;
            write_error_panel_csv(
                &p,
                n,
                false,
                2.0,
                &coord_grid,
                side,
                &out_dir.join(format!("{stem}_panel_c_x2.csv")),
            )?;
            write_error_panel_csv(
                &p,
                n,
                false,
                10.0,
                &coord_grid,
                side,
                &out_dir.join(format!("{stem}_panel_d_x10.csv")),
            )?;
            Ok(())
        }
        other => Err(Error::Usage(format!(
            "--which must be 1, 2, 3, or 4, got {other}"
        ))),
    }
}
