//! Command-line front end for the `genstable` library.
//!
//! Every run prints one report: a header with the parameters, derived `a`
//! and `b`, the command, the seed and the library version, followed by rows
//! of `(argument, value, err, method)`. Failures print an error object and
//! exit with status 2.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;

use genstable::density::{
    asymptotic_infinity, asymptotic_zero, fox_parameters, laplace_transform, DensityEvaluator,
    Method,
};
use genstable::fracops::{
    ide_residual, steutel_residual, thorin_density_frechet, QuadratureSpec, ThorinConvention,
};
use genstable::mellin::{labr_selfdecomp_criterion, mellin, moment_lattice};
use genstable::sampling::{sample, Representation, SampleConfig, TailCorrection, DEFAULT_DEPTH};
use genstable::{Error, GenStableParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Density,
    Mellin,
    Moments,
    Sample,
    VerifyIde,
    VerifySteutel,
    Asymptotics,
    Laplace,
    Thorin,
    Fox,
    Labr,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Density => "density",
            Command::Mellin => "mellin",
            Command::Moments => "moments",
            Command::Sample => "sample",
            Command::VerifyIde => "verify-ide",
            Command::VerifySteutel => "verify-steutel",
            Command::Asymptotics => "asymptotics",
            Command::Laplace => "laplace",
            Command::Thorin => "thorin",
            Command::Fox => "fox",
            Command::Labr => "labr",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Parser)]
#[command(
    name = "genstable",
    version,
    about = "Generalized stable laws: densities, transforms, samplers"
)]
#[command(args_override_self = true)]
pub struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    pub command: Option<Command>,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// `lo,hi,count` for the argument grid.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, value_enum)]
    pub spacing: Option<Spacing>,
    #[arg(long, value_enum)]
    pub output: Option<Output>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Density method; automatic when absent.
    #[arg(long)]
    pub method: Option<String>,
    /// Mellin argument(s), comma separated.
    #[arg(long)]
    pub s: Option<String>,
    /// Number of draws for `sample`.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// none, mean-log or gaussian.
    #[arg(long)]
    pub tail: Option<String>,
    /// first-product, second-product or special.
    #[arg(long)]
    pub representation: Option<String>,
    /// Thorin constant: pi2 for 1/pi^2 (default) or 4pi2 for 1/(4 pi^2).
    #[arg(long)]
    pub convention: Option<String>,
    /// Highest lattice moment index for `moments`.
    #[arg(long)]
    pub kmax: Option<u32>,
    /// Parameters of the `labr` criterion.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    /// Flat `key=value` file with the same fields as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Exit status and text of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub status: i32,
    pub text: String,
}

/// A table cell.
#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Num(v) if v.is_finite() => fmt_num(*v),
            Cell::Num(_) => "null".into(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => serde_json::to_string(s).expect("string serialises"),
        }
    }
}

/// Scientific notation with 17 significant digits.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

struct Row {
    key: f64,
    value: f64,
    err: f64,
    method: String,
}

struct Report {
    key_name: &'static str,
    rows: Vec<Row>,
}

struct Header {
    m: Option<f64>,
    alpha: Option<f64>,
    command: Command,
    seed: Option<u64>,
}

struct Options {
    command: Command,
    params: Option<GenStableParams>,
    m: Option<f64>,
    alpha: Option<f64>,
    grid: Option<(f64, f64, usize)>,
    spacing: Spacing,
    output: Output,
    seed: Option<u64>,
    cli: Cli,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn parse_grid(s: &str) -> Result<(f64, f64, usize), Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(invalid(format!("grid must be lo,hi,count, got '{s}'")));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| invalid(format!("bad grid lo '{}'", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| invalid(format!("bad grid hi '{}'", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| invalid(format!("bad grid count '{}'", parts[2])))?;
    if count == 0 {
        return Err(invalid("grid count must be at least 1"));
    }
    if !(lo.is_finite() && hi.is_finite()) || hi < lo || (count > 1 && hi == lo) {
        return Err(invalid(format!("grid needs lo < hi, got {lo},{hi}")));
    }
    Ok((lo, hi, count))
}

fn grid_points(lo: f64, hi: f64, count: usize, spacing: Spacing) -> Result<Vec<f64>, Error> {
    if count == 1 {
        return Ok(vec![lo]);
    }
    if spacing == Spacing::Log && lo <= 0.0 {
        return Err(invalid("log spacing needs lo > 0"));
    }
    Ok((0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            if i == count - 1 {
                return hi;
            }
            match spacing {
                Spacing::Linear => lo + (hi - lo) * t,
                Spacing::Log => (lo.ln() + (hi.ln() - lo.ln()) * t).exp(),
            }
        })
        .collect())
}

/// Turns a `key=value` file into flags placed before the command line ones,
/// so explicit flags win.
fn config_args(path: &PathBuf) -> Result<Vec<String>, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
    let mut args = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("config line {} is not key=value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k == "config" {
            return Err(invalid("config files cannot include other config files"));
        }
        if k == "command" {
            args.insert(0, v.to_string());
        } else {
            args.push(format!("--{k}"));
            args.push(v.to_string());
        }
    }
    Ok(args)
}

fn parse_options(args: &[String]) -> Result<Options, Error> {
    let first = Cli::try_parse_from(args).map_err(|e| invalid(e.to_string()))?;
    let cli = match &first.config {
        Some(path) => {
            let mut merged = vec![args[0].clone()];
            let from_file = config_args(path)?;
            // a command given on the command line replaces the file's
            let cmd_on_line = first.command.is_some();
            for (i, a) in from_file.into_iter().enumerate() {
                if i == 0 && cmd_on_line && !a.starts_with("--") {
                    continue;
                }
                merged.push(a);
            }
            merged.extend(args[1..].iter().cloned());
            Cli::try_parse_from(&merged).map_err(|e| invalid(e.to_string()))?
        }
        None => first,
    };
    let command = cli.command.ok_or_else(|| invalid("missing command"))?;
    let params = match (cli.m, cli.alpha) {
        (Some(m), Some(alpha)) => Some(GenStableParams::new(m, alpha)?),
        _ => None,
    };
    let grid = cli.grid.as_deref().map(parse_grid).transpose()?;
    Ok(Options {
        command,
        params,
        m: cli.m,
        alpha: cli.alpha,
        grid,
        spacing: cli.spacing.unwrap_or(Spacing::Linear),
        output: cli.output.unwrap_or(Output::Json),
        seed: cli.seed,
        cli,
    })
}

impl Options {
    fn params(&self) -> Result<GenStableParams, Error> {
        self.params
            .ok_or_else(|| invalid(format!("{} needs --m and --alpha", self.command.name())))
    }

    fn grid(&self, default: (f64, f64, usize)) -> Result<Vec<f64>, Error> {
        let (lo, hi, n) = self.grid.unwrap_or(default);
        grid_points(lo, hi, n, self.spacing)
    }

    fn positive_grid(&self, default: (f64, f64, usize)) -> Result<Vec<f64>, Error> {
        let g = self.grid(default)?;
        if g.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::Domain(format!(
                "{} needs a positive grid",
                self.command.name()
            )));
        }
        Ok(g)
    }
}

fn s_values(o: &Options) -> Result<Vec<f64>, Error> {
    match &o.cli.s {
        Some(s) => s
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| invalid(format!("bad --s value '{v}'")))
            })
            .collect(),
        None => o.grid((0.0, 5.0, 11)),
    }
}

fn row(key: f64, value: f64, err: f64, method: impl Into<String>) -> Row {
    Row {
        key,
        value,
        err,
        method: method.into(),
    }
}

fn compute(o: &Options) -> Result<Report, Error> {
    let cli = &o.cli;
    match o.command {
        Command::Density => {
            let p = o.params()?;
            let xs = o.positive_grid((0.1, 10.0, 100))?;
            let method = cli
                .method
                .as_deref()
                .map(str::parse::<Method>)
                .transpose()?;
            let lo = xs.iter().copied().fold(f64::MAX, f64::min);
            let hi = xs.iter().copied().fold(f64::MIN, f64::max);
            let eval = DensityEvaluator::new(p).with_range(lo, hi);
            let rows = xs
                .par_iter()
                .map(|&x| {
                    eval.density(x, method)
                        .map(|v| row(x, v.value, v.err, v.method.as_str()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Report {
                key_name: "x",
                rows,
            })
        }
        Command::Mellin => {
            let p = o.params()?;
            let rows = s_values(o)?
                .into_iter()
                .map(|s| {
                    mellin(&p, s).map(|v| row(s, v.value(), v.err * v.value(), v.route.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Report {
                key_name: "s",
                rows,
            })
        }
        Command::Moments => {
            let p = o.params()?;
            let kmax = cli.kmax.unwrap_or(5);
            let rows = (1..=kmax)
                .map(|k| {
                    let v = moment_lattice(&p, k);
                    row(v.s, v.value(), v.err * v.value(), v.route.to_string())
                })
                .collect();
            Ok(Report {
                key_name: "s",
                rows,
            })
        }
        Command::Sample => {
            let p = o.params()?;
            let mut cfg = SampleConfig::new(cli.count.unwrap_or(1000), o.seed.unwrap_or(0))
                .with_depth(cli.depth.unwrap_or(DEFAULT_DEPTH));
            if let Some(t) = &cli.tail {
                cfg = cfg.with_tail(t.parse::<TailCorrection>()?);
            }
            if let Some(r) = &cli.representation {
                cfg = cfg.with_representation(r.parse::<Representation>()?);
            }
            let batch = sample(&p, cfg)?;
            let method = cfg.representation.as_str();
            let rows = batch
                .values
                .iter()
                .enumerate()
                .map(|(i, &v)| row(i as f64, v, 0.0, method))
                .collect();
            Ok(Report {
                key_name: "i",
                rows,
            })
        }
        Command::VerifyIde => {
            let p = o.params()?;
            let xs = o.positive_grid((0.2, 20.0, 25))?;
            let q = QuadratureSpec::for_alpha(p.alpha());
            let report = ide_residual(&p, &xs, &q)?;
            let rows = report
                .points
                .iter()
                .map(|pt| row(pt.x, pt.relative, 0.0, q.scheme.as_str()))
                .collect();
            Ok(Report {
                key_name: "x",
                rows,
            })
        }
        Command::VerifySteutel => {
            let alpha = o
                .alpha
                .ok_or_else(|| invalid("verify-steutel needs --alpha"))?;
            if let Some(m) = o.m {
                if (m - 2.0 * alpha).abs() > 1e-12 * m.abs().max(1.0) {
                    return Err(Error::Precondition(format!(
                        "Steutel kernel is explicit only for m = 2 alpha (m = {m}, alpha = {alpha})"
                    )));
                }
            }
            let convention = convention(o)?;
            let xs = o.positive_grid((0.5, 4.0, 8))?;
            let report = steutel_residual(alpha, &xs, convention)?;
            let rows = report
                .points
                .iter()
                .map(|pt| row(pt.x, pt.relative, 0.0, convention.as_str()))
                .collect();
            Ok(Report {
                key_name: "x",
                rows,
            })
        }
        Command::Asymptotics => {
            let p = o.params()?;
            let xs = o.positive_grid((0.1, 10.0, 10))?;
            let mut rows = Vec::with_capacity(2 * xs.len());
            for &x in &xs {
                rows.push(row(x, asymptotic_zero(&p, x), 0.0, "asymptotic-zero"));
                rows.push(row(
                    x,
                    asymptotic_infinity(&p, x),
                    0.0,
                    "asymptotic-infinity",
                ));
            }
            Ok(Report {
                key_name: "x",
                rows,
            })
        }
        Command::Laplace => {
            let p = o.params()?;
            let lams = o.grid((0.0, 10.0, 11))?;
            let rows = lams
                .par_iter()
                .map(|&l| laplace_transform(&p, l).map(|v| row(l, v, 0.0, "laplace")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Report {
                key_name: "lambda",
                rows,
            })
        }
        Command::Thorin => {
            let alpha = o.alpha.ok_or_else(|| invalid("thorin needs --alpha"))?;
            let convention = convention(o)?;
            let us = o.positive_grid((0.1, 10.0, 10))?;
            let rows = us
                .iter()
                .map(|&u| {
                    thorin_density_frechet(alpha, u, convention)
                        .map(|t| row(u, t.value, 0.0, convention.as_str()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Report {
                key_name: "u",
                rows,
            })
        }
        Command::Fox => {
            let p = o.params()?;
            let f = fox_parameters(&p)?;
            let family = f.family.method().as_str();
            let mut rows = vec![
                row(0.0, f.m_index as f64, 0.0, "m-index"),
                row(0.0, f.n_index as f64, 0.0, "n-index"),
                row(0.0, f.p as f64, 0.0, "p"),
                row(0.0, f.q as f64, 0.0, "q"),
                row(0.0, f.prefactor, 0.0, "prefactor"),
                row(0.0, f.scale, 0.0, "scale"),
            ];
            for (i, &(a, big_a)) in f.upper.iter().enumerate() {
                rows.push(row((i + 1) as f64, a, big_a, format!("upper:{family}")));
            }
            for (j, &(b, big_b)) in f.lower.iter().enumerate() {
                rows.push(row((j + 1) as f64, b, big_b, format!("lower:{family}")));
            }
            Ok(Report {
                key_name: "index",
                rows,
            })
        }
        Command::Labr => {
            let (a, b, r) = match (cli.a, cli.b, cli.r) {
                (Some(a), Some(b), Some(r)) => (a, b, r),
                _ => return Err(invalid("labr needs --a, --b and --r")),
            };
            if !(a > 0.0 && b > 0.0 && r > 0.0) {
                return Err(Error::Domain("labr needs positive a, b, r".into()));
            }
            let ok = labr_selfdecomp_criterion(a, b, r);
            Ok(Report {
                key_name: "index",
                rows: vec![row(0.0, if ok { 1.0 } else { 0.0 }, 0.0, "labr")],
            })
        }
    }
}

fn convention(o: &Options) -> Result<ThorinConvention, Error> {
    o.cli
        .convention
        .as_deref()
        .map(str::parse)
        .transpose()
        .map(|c| c.unwrap_or(ThorinConvention::PiSquared))
}

fn header_cells(h: &Header) -> Vec<(&'static str, Cell)> {
    let opt = |v: Option<f64>| v.map(Cell::Num).unwrap_or(Cell::Text(String::new()));
    let (a, b) = match (h.m, h.alpha) {
        (Some(m), Some(alpha)) => (Some(m - alpha), Some((m - alpha) / alpha)),
        _ => (None, None),
    };
    vec![
        ("m", opt(h.m)),
        ("alpha", opt(h.alpha)),
        ("a", opt(a)),
        ("b", opt(b)),
        ("command", Cell::Text(h.command.name().into())),
        (
            "seed",
            h.seed.map(Cell::Int).unwrap_or(Cell::Text(String::new())),
        ),
        ("version", Cell::Text(genstable::VERSION.into())),
    ]
}

fn render(h: &Header, report: &Report, output: Output) -> String {
    let header = header_cells(h);
    let cells = |r: &Row| -> Vec<Cell> {
        let key = if matches!(report.key_name, "i" | "index") {
            Cell::Int(r.key as u64)
        } else {
            Cell::Num(r.key)
        };
        vec![
            key,
            Cell::Num(r.value),
            Cell::Num(r.err),
            Cell::Text(r.method.clone()),
        ]
    };
    let names = [report.key_name, "value", "err", "method"];
    let mut out = String::new();
    match output {
        Output::Json => {
            let head: Vec<String> = header
                .iter()
                .map(|(k, v)| {
                    let v = match v {
                        Cell::Text(s) if s.is_empty() && *k != "command" && *k != "version" => {
                            "null".into()
                        }
                        other => other.json(),
                    };
                    format!("\"{k}\":{v}")
                })
                .collect();
            let rows: Vec<String> = report
                .rows
                .iter()
                .map(|r| {
                    let fields: Vec<String> = names
                        .iter()
                        .zip(cells(r))
                        .map(|(k, c)| format!("\"{k}\":{}", c.json()))
                        .collect();
                    format!("{{{}}}", fields.join(","))
                })
                .collect();
            let _ = writeln!(
                out,
                "{{\"header\":{{{}}},\"rows\":[{}]}}",
                head.join(","),
                rows.join(",")
            );
        }
        Output::Csv => {
            for (k, v) in &header {
                let _ = writeln!(out, "# {k}={}", v.csv());
            }
            let _ = writeln!(out, "{}", names.join(","));
            for r in &report.rows {
                let line: Vec<String> = cells(r).iter().map(Cell::csv).collect();
                let _ = writeln!(out, "{}", line.join(","));
            }
        }
    }
    out
}

fn render_error(e: &Error) -> String {
    let message = serde_json::to_string(&e.to_string()).expect("string serialises");
    format!(
        "{{\"error\":{{\"kind\":\"{}\",\"message\":{message}}}}}\n",
        e.kind()
    )
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<S: AsRef<str>>(args: &[S]) -> RunOutput {
    let args: Vec<String> = args.iter().map(|a| a.as_ref().to_string()).collect();
    if let Err(e) = Cli::try_parse_from(&args) {
        if matches!(
            e.kind(),
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
        ) {
            return RunOutput {
                status: 0,
                text: e.to_string(),
            };
        }
    }
    let result = parse_options(&args).and_then(|o| {
        let report = compute(&o)?;
        let header = Header {
            m: o.m,
            alpha: o.alpha,
            command: o.command,
            seed: o.seed,
        };
        Ok(render(&header, &report, o.output))
    });
    match result {
        Ok(text) => RunOutput { status: 0, text },
        Err(e) => RunOutput {
            status: 2,
            text: render_error(&e),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1,1,1").unwrap(), (1.0, 1.0, 1));
        assert!(parse_grid("2,1,3").is_err());
        assert!(parse_grid("1,1,3").is_err());
        assert!(parse_grid("1,2").is_err());
        let g = grid_points(1.0, 100.0, 3, Spacing::Log).unwrap();
        assert!((g[1] - 10.0).abs() < 1e-12);
        assert_eq!(
            grid_points(0.0, 1.0, 3, Spacing::Linear).unwrap(),
            vec![0.0, 0.5, 1.0]
        );
    }

    #[test]
    fn number_format_round_trips() {
        for &v in &[0.1, std::f64::consts::PI, 1e-300, 6.02e23] {
            let s = fmt_num(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }
}
