//! The `cusp-coho` command line.
//!
//! Exit codes: `0` success, `1` a failed check (validation, inconsistent
//! cohomology, inadmissible weights, failed certificate), `2` unreadable or
//! malformed input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::cohomology::{cohomology_report, stalk_report, stalk_row};
use crate::dbar::obstruction::obstruction_demo;
use crate::dbar::sweep::{bound_sweep, write_csv, SweepConfig};
use crate::dbar::{
    norm_form01, norm_section, residual, solve, FormDegree, ProfileForm, RadialGrid, WeightedNormParams, DEFAULT_A,
    DEFAULT_EPSILONS, DEFAULT_GRID_LEVEL, DEFAULT_N_MAX,
};
use crate::document::read_rep;
use crate::error::{Error, Result};
use crate::monodromy::{nilpotent_log, validate, PuncturedSurfaceRep};
use crate::spectral::{degeneration_certificate, render_page, spectral_report, FilteredComplexModel};
use crate::weight_filtration::build_weight_filtration;

pub const THREADS_ENV: &str = "CUSP_COHO_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "cusp-coho",
    version,
    about = "L2 cohomology tools for unipotent local systems on punctured curves"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Representation document (or profile file for `dbar solve`).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_GRID_LEVEL)]
    pub grid_level: u32,
    /// Inner cutoff; repeat to build a ladder.
    #[arg(long = "epsilon", global = true)]
    pub epsilons: Vec<f64>,
    /// Outer radius of the disk.
    #[arg(long = "outer-radius", global = true, default_value_t = DEFAULT_A)]
    pub a: f64,
    #[arg(long, global = true, default_value_t = DEFAULT_N_MAX)]
    pub n_max: i32,
}

impl Common {
    fn ladder(&self) -> Vec<f64> {
        if self.epsilons.is_empty() {
            DEFAULT_EPSILONS.to_vec()
        } else {
            self.epsilons.clone()
        }
    }

    fn input(&self) -> Result<&Path> {
        self.input
            .as_deref()
            .ok_or_else(|| Error::Structure("--input is required for this command".into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the surface relation, invertibility and unipotent cusps.
    Validate,
    /// Logarithms of the cusp monodromies.
    Log,
    /// Weight filtration of each cusp logarithm.
    Filtration,
    /// Stalk cohomology at each cusp.
    Stalks,
    /// Global cohomology dimensions with both h1 routes.
    Cohomology,
    /// Spectral sequence pages at each cusp.
    Spectral,
    /// The model dbar problem on a punctured disk.
    #[command(subcommand)]
    Dbar(DbarCommand),
}

#[derive(Debug, Subcommand)]
pub enum DbarCommand {
    /// Solve for data given mode by mode in a profile file.
    Solve(WeightArgs),
    /// Sup of |u|^2/|f|^2 over random data.
    Sweep(SweepArgs),
    /// Norm growth in the excluded case (alpha, k) = (0, 1).
    Obstruction,
}

#[derive(Debug, Clone, Args)]
pub struct WeightArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i32>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Pairs as `alpha:k`, comma separated; defaults to the admissible grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub pairs: Vec<String>,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
}

/// Header recorded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct ReportHeader {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    #[serde(rename = "A")]
    pub a: f64,
    pub epsilon_ladder: Vec<f64>,
    pub grid_level: u32,
    pub n_max: i32,
    pub seed: u64,
}

impl ReportHeader {
    fn new(command: &str, common: &Common) -> Self {
        Self {
            tool: "cusp-coho",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            a: common.a,
            epsilon_ladder: common.ladder(),
            grid_level: common.grid_level,
            n_max: common.n_max,
            seed: common.seed,
        }
    }

    fn comment(&self) -> String {
        format!(
            "# {} {} command={} A={} epsilon_ladder={:?} grid_level={} n_max={} seed={}\n",
            self.tool, self.version, self.command, self.a, self.epsilon_ladder, self.grid_level, self.n_max, self.seed
        )
    }
}

/// A finished report plus the exit code it implies.
pub struct Outcome {
    pub body: String,
    pub exit: i32,
    pub stderr: Option<String>,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self {
            body,
            exit: 0,
            stderr: None,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Io(_) | Error::Structure(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (including the program name), runs, writes output, returns the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    configure_threads();
    match execute(&cli) {
        Ok(outcome) => {
            if let Some(msg) = &outcome.stderr {
                eprintln!("{msg}");
            }
            if let Err(e) = emit(&cli.common, &outcome.body) {
                eprintln!("error: {e}");
                return 2;
            }
            outcome.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn emit(common: &Common, body: &str) -> Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, body)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn with_header(header: &ReportHeader, report: impl Serialize) -> Result<String> {
    let mut value = serde_json::to_value(report).map_err(|e| Error::Domain(e.to_string()))?;
    let header = serde_json::to_value(header).map_err(|e| Error::Domain(e.to_string()))?;
    let object = match value {
        Value::Object(ref mut map) => {
            let mut out = Map::new();
            out.insert("header".into(), header);
            out.extend(std::mem::take(map));
            Value::Object(out)
        }
        other => json!({ "header": header, "report": other }),
    };
    Ok(serde_json::to_string_pretty(&object).expect("values serialize") + "\n")
}

fn unsupported(format: Format, command: &str) -> Error {
    Error::Structure(format!("{command} does not support --format {format:?}").to_lowercase())
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let common = &cli.common;
    match &cli.command {
        Command::Validate => cmd_validate(common),
        Command::Log => cmd_log(common),
        Command::Filtration => cmd_filtration(common),
        Command::Stalks => cmd_stalks(common),
        Command::Cohomology => cmd_cohomology(common),
        Command::Spectral => cmd_spectral(common),
        Command::Dbar(DbarCommand::Solve(w)) => cmd_dbar_solve(common, w),
        Command::Dbar(DbarCommand::Sweep(s)) => cmd_dbar_sweep(common, s),
        Command::Dbar(DbarCommand::Obstruction) => cmd_dbar_obstruction(common),
    }
}

fn load(common: &Common) -> Result<PuncturedSurfaceRep> {
    read_rep(common.input()?)
}

pub fn cmd_validate(common: &Common) -> Result<Outcome> {
    let rep = load(common)?;
    let report = validate(&rep);
    let mut problems = Vec::new();
    if !report.invertibility_ok {
        problems.push("a generator is singular".to_string());
    }
    if !report.relation_ok {
        problems.push("surface-group relation fails".to_string());
    }
    for j in report.failing_cusps() {
        problems.push(format!("cusp {} (C[{}]) is not unipotent", j + 1, j + 1));
    }
    let header = ReportHeader::new("validate", common);
    let body = match common.format {
        Format::Json => with_header(
            &header,
            json!({ "valid": report.is_valid(), "report": report, "problems": problems }),
        )?,
        Format::Text => {
            let mut s = header.comment();
            let _ = writeln!(s, "relation_ok      {}", report.relation_ok);
            let _ = writeln!(s, "invertibility_ok {}", report.invertibility_ok);
            let _ = writeln!(s, "unipotency_ok    {:?}", report.unipotency_ok);
            let _ = writeln!(s, "valid            {}", report.is_valid());
            s
        }
        Format::Csv => return Err(unsupported(common.format, "validate")),
    };
    Ok(Outcome {
        body,
        exit: if report.is_valid() { 0 } else { 1 },
        stderr: (!problems.is_empty()).then(|| format!("invalid representation: {}", problems.join("; "))),
    })
}

pub fn cmd_log(common: &Common) -> Result<Outcome> {
    let rep = load(common)?;
    let logs = (0..rep.punctures())
        .map(|j| Ok((j + 1, nilpotent_log(rep.cusp(j)?)?)))
        .collect::<Result<Vec<_>>>()?;
    let header = ReportHeader::new("log", common);
    match common.format {
        Format::Json => {
            let cusps: Vec<Value> = logs
                .iter()
                .map(|(j, n)| json!({ "cusp": j, "N": n.matrix(), "nilpotency_index": n.nilpotency_index() }))
                .collect();
            Ok(Outcome::ok(with_header(&header, json!({ "cusps": cusps }))?))
        }
        Format::Text => {
            let mut s = header.comment();
            for (j, n) in &logs {
                let _ = writeln!(s, "N[{j}] =");
                for row in n.matrix().to_rows() {
                    let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                    let _ = writeln!(s, "  [{}]", cells.join(", "));
                }
            }
            Ok(Outcome::ok(s))
        }
        Format::Csv => Err(unsupported(common.format, "log")),
    }
}

pub fn cmd_filtration(common: &Common) -> Result<Outcome> {
    let rep = load(common)?;
    let reports = (0..rep.punctures())
        .map(|j| Ok(build_weight_filtration(&nilpotent_log(rep.cusp(j)?)?).report()))
        .collect::<Result<Vec<_>>>()?;
    let header = ReportHeader::new("filtration", common);
    match common.format {
        Format::Json => Ok(Outcome::ok(with_header(&header, json!({ "cusps": reports }))?)),
        Format::Text => {
            let mut s = header.comment();
            for (j, r) in reports.iter().enumerate() {
                let dims: Vec<String> = r.graded_dims.iter().map(|(l, d)| format!("Gr_{l}: {d}")).collect();
                let _ = writeln!(
                    s,
                    "cusp {}: weight {}; {}; exponents {:?}",
                    j + 1,
                    r.weight,
                    dims.join(", "),
                    r.frame_exponents
                );
            }
            Ok(Outcome::ok(s))
        }
        Format::Csv => Err(unsupported(common.format, "filtration")),
    }
}

pub fn cmd_stalks(common: &Common) -> Result<Outcome> {
    let rep = load(common)?;
    let stalks = stalk_report(&rep)?;
    let header = ReportHeader::new("stalks", common);
    match common.format {
        Format::Json => {
            let exponents: Vec<i64> = (-3..=3).collect();
            let table: Vec<_> = exponents.iter().map(|&k| stalk_row(k)).collect();
            Ok(Outcome::ok(with_header(
                &header,
                json!({ "cusps": stalks, "model_rows": table }),
            )?))
        }
        Format::Text => {
            let mut s = header.comment();
            for (j, c) in stalks.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "cusp {}: dim ker N = {}, stalk ({},{},{})",
                    j + 1,
                    c.kernel_dim,
                    c.stalk[0],
                    c.stalk[1],
                    c.stalk[2]
                );
            }
            Ok(Outcome::ok(s))
        }
        Format::Csv => {
            let mut s = String::from("cusp,kernel_dim,h0,h1,h2\n");
            for (j, c) in stalks.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    j + 1,
                    c.kernel_dim,
                    c.stalk[0],
                    c.stalk[1],
                    c.stalk[2]
                );
            }
            Ok(Outcome::ok(s))
        }
    }
}

pub fn cmd_cohomology(common: &Common) -> Result<Outcome> {
    let rep = load(common)?;
    let report = cohomology_report(&rep)?;
    let certificates = (0..rep.punctures())
        .map(|j| degeneration_certificate(&FilteredComplexModel::from_nilpotent(&nilpotent_log(rep.cusp(j)?)?)))
        .collect::<Result<Vec<_>>>()?;
    let header = ReportHeader::new("cohomology", common);
    let stderr = (!report.consistent).then(|| {
        format!(
            "cohomology routes disagree: h1 (euler) = {}, h1 (parabolic) = {}",
            report.h1, report.h1_parabolic
        )
    });
    let body = match common.format {
        Format::Json => {
            let mut value = serde_json::to_value(&report).expect("report serializes");
            value["certificates"] = serde_json::to_value(&certificates).expect("certificates serialize");
            with_header(&header, value)?
        }
        Format::Text => {
            let mut s = header.comment();
            let _ = writeln!(s, "(h0,h1,h2) = ({},{},{})", report.h0, report.h1, report.h2);
            let _ = writeln!(s, "euler = {}", report.euler);
            let _ = writeln!(
                s,
                "h1 (parabolic) = {}, consistent = {}",
                report.h1_parabolic, report.consistent
            );
            for (j, c) in report.cusps.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "cusp {}: stalk ({},{},{})",
                    j + 1,
                    c.stalk[0],
                    c.stalk[1],
                    c.stalk[2]
                );
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("h0,h1,h2,euler,h1_parabolic,consistent\n");
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                report.h0, report.h1, report.h2, report.euler, report.h1_parabolic, report.consistent
            );
            s
        }
    };
    Ok(Outcome {
        body,
        exit: if report.consistent { 0 } else { 1 },
        stderr,
    })
}

pub fn cmd_spectral(common: &Common) -> Result<Outcome> {
    let rep = load(common)?;
    let reports = (0..rep.punctures())
        .map(|j| spectral_report(&FilteredComplexModel::from_nilpotent(&nilpotent_log(rep.cusp(j)?)?)))
        .collect::<Result<Vec<_>>>()?;
    let header = ReportHeader::new("spectral", common);
    match common.format {
        Format::Json => Ok(Outcome::ok(with_header(&header, json!({ "cusps": reports }))?)),
        Format::Text => {
            let mut s = header.comment();
            for (j, r) in reports.iter().enumerate() {
                let _ = writeln!(s, "cusp {}", j + 1);
                for page in &r.pages {
                    s.push_str(&render_page(page));
                }
                let c = &r.certificate;
                let _ = writeln!(s, "stalk ({},{},{})\n", c.stalk_h0, c.stalk_h1, c.stalk_h2);
            }
            Ok(Outcome::ok(s))
        }
        Format::Csv => Err(unsupported(common.format, "spectral")),
    }
}

/// `dbar solve` input: data `f` mode by mode, optionally with weights.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveInput {
    pub alpha: Option<f64>,
    pub k: Option<i32>,
    #[serde(rename = "A")]
    pub a: Option<f64>,
    pub modes: ProfileForm,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveRun {
    pub epsilon: f64,
    pub norm_f: f64,
    pub norm_u: f64,
    pub ratio: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeSamples {
    pub r: Vec<f64>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

pub fn cmd_dbar_solve(common: &Common, w: &WeightArgs) -> Result<Outcome> {
    let text = std::fs::read_to_string(common.input()?)?;
    let input: SolveInput = serde_json::from_str(&text)?;
    let a = input.a.unwrap_or(common.a);
    let p = WeightedNormParams::new(w.alpha.or(input.alpha).unwrap_or(0.0), w.k.or(input.k).unwrap_or(0), a)?;
    p.require_admissible()?;
    let mut header = ReportHeader::new("dbar solve", common);
    header.a = a;
    let ladder = common.ladder();
    let mut runs = Vec::new();
    let mut last = None;
    for &epsilon in &ladder {
        let grid = RadialGrid::new(epsilon, a, common.grid_level)?;
        let f = input.modes.sample(&grid, FormDegree::Form01);
        let u = solve(&f, &p, &grid)?.u;
        let norm_f = norm_form01(&f, &p, &grid)?;
        let norm_u = norm_section(&u, &p, &grid)?;
        runs.push(SolveRun {
            epsilon,
            norm_f,
            norm_u,
            ratio: if norm_f > 0.0 { norm_u / norm_f } else { 0.0 },
            residual: residual(&u, &f, &grid)?,
        });
        last = Some((grid, u));
    }
    let (grid, u) = last.ok_or_else(|| Error::Domain("empty epsilon ladder".into()))?;
    match common.format {
        Format::Json => {
            let modes: std::collections::BTreeMap<String, ModeSamples> = u
                .modes
                .iter()
                .map(|(n, v)| {
                    (
                        n.to_string(),
                        ModeSamples {
                            r: grid.r.clone(),
                            re: v.iter().map(|z| z.re).collect(),
                            im: v.iter().map(|z| z.im).collect(),
                        },
                    )
                })
                .collect();
            Ok(Outcome::ok(with_header(
                &header,
                json!({
                    "alpha": p.alpha, "k": p.k, "A": p.a,
                    "epsilon_ladder": ladder, "grid_level": common.grid_level,
                    "runs": runs, "modes": modes,
                }),
            )?))
        }
        Format::Text => {
            let mut s = header.comment();
            let _ = writeln!(
                s,
                "{:>10} {:>14} {:>14} {:>12} {:>12}",
                "epsilon", "norm_f", "norm_u", "ratio", "residual"
            );
            for r in &runs {
                let _ = writeln!(
                    s,
                    "{:>10.1e} {:>14.8} {:>14.8} {:>12.6} {:>12.3e}",
                    r.epsilon, r.norm_f, r.norm_u, r.ratio, r.residual
                );
            }
            Ok(Outcome::ok(s))
        }
        Format::Csv => {
            let mut s = header.comment();
            let names: Vec<String> = u
                .modes
                .keys()
                .flat_map(|n| [format!("u_{n}_re"), format!("u_{n}_im")])
                .collect();
            let _ = writeln!(s, "r,{}", names.join(","));
            for i in 0..grid.len() {
                let cells: Vec<String> = u
                    .modes
                    .values()
                    .flat_map(|v| [format!("{:e}", v[i].re), format!("{:e}", v[i].im)])
                    .collect();
                let _ = writeln!(s, "{:e},{}", grid.r[i], cells.join(","));
            }
            Ok(Outcome::ok(s))
        }
    }
}

fn parse_pair(s: &str) -> Result<(f64, i32)> {
    let bad = || Error::Structure(format!("pair '{s}' is not of the form alpha:k"));
    let (alpha, k) = s.split_once(':').ok_or_else(bad)?;
    Ok((
        alpha.trim().parse().map_err(|_| bad())?,
        k.trim().parse().map_err(|_| bad())?,
    ))
}

pub fn cmd_dbar_sweep(common: &Common, args: &SweepArgs) -> Result<Outcome> {
    let pairs = if args.pairs.is_empty() {
        SweepConfig::admissible_grid()
    } else {
        args.pairs.iter().map(|s| parse_pair(s)).collect::<Result<Vec<_>>>()?
    };
    let config = SweepConfig {
        pairs,
        samples: args.samples,
        epsilons: common.ladder(),
        grid_levels: vec![common.grid_level.saturating_sub(1), common.grid_level],
        a: common.a,
        n_max: common.n_max,
        seed: common.seed,
    };
    let report = bound_sweep(&config)?;
    let header = ReportHeader::new("dbar sweep", common);
    let flagged: Vec<String> = report
        .pairs
        .iter()
        .filter(|p| p.flagged)
        .map(|p| format!("({}, {})", p.alpha, p.k))
        .collect();
    let body = match common.format {
        Format::Json => with_header(&header, &report)?,
        Format::Csv => {
            let mut buf = header.comment().into_bytes();
            write_csv(&report.rows, &mut buf)?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
        Format::Text => {
            let mut s = header.comment();
            let _ = writeln!(
                s,
                "{:>5} {:>3} {:>8} {:>8}  sup ratio per epsilon",
                "alpha", "k", "drift", "flagged"
            );
            for p in &report.pairs {
                let _ = writeln!(
                    s,
                    "{:>5} {:>3} {:>8.4} {:>8}  {:?}",
                    p.alpha, p.k, p.drift, p.flagged, p.sup_ratio
                );
            }
            s
        }
    };
    Ok(Outcome {
        body,
        exit: 0,
        stderr: (!flagged.is_empty()).then(|| format!("growth flagged for {}", flagged.join(", "))),
    })
}

pub fn cmd_dbar_obstruction(common: &Common) -> Result<Outcome> {
    let report = obstruction_demo(common.a, &common.ladder(), common.grid_level)?;
    let header = ReportHeader::new("dbar obstruction", common);
    let body = match common.format {
        Format::Json => with_header(&header, &report)?,
        Format::Csv => {
            let mut s = header.comment();
            s.push_str("epsilon,log_log,norm_f,norm_u,u0_inner\n");
            for r in &report.rows {
                let _ = writeln!(
                    s,
                    "{:e},{},{},{},{}",
                    r.epsilon, r.log_log, r.norm_f, r.norm_u, r.u0_inner
                );
            }
            s
        }
        Format::Text => {
            let mut s = header.comment();
            let _ = writeln!(
                s,
                "{:>10} {:>10} {:>14} {:>14}",
                "epsilon", "loglog", "norm_f", "norm_u"
            );
            for r in &report.rows {
                let _ = writeln!(
                    s,
                    "{:>10.1e} {:>10.4} {:>14.8} {:>14.8}",
                    r.epsilon, r.log_log, r.norm_f, r.norm_u
                );
            }
            let _ = writeln!(
                s,
                "slope {:.4} vs 2πc^2 = {:.4} (deviation {:.3}, fits {}); norm_f drift {:.4}",
                report.fitted_slope, report.predicted_slope, report.relative_deviation, report.fits_law, report.f_drift
            );
            s
        }
    };
    Ok(Outcome::ok(body))
}
