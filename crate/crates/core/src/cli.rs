//! The `bertrand` command-line front end.
//!
//! Every subcommand reads a curve from `--curve` (a family string such as
//! `helix(1,1)@0:10`, or a path to a CSV of points) and optionally a TOML job
//! file given by `--config`. Flags override values from the file.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::bertrand::{
    detect_bertrand, f_bertrand_mates, offset_mate, v_bertrand_mate, BertrandFit, BertrandKind,
    BranchId, BranchOutcome, FitRejection, MateReport,
};
use crate::curve::{build_curve, Curve, CurveSpec, Vec3, DEFAULT_SAMPLES};
use crate::direction::{principal_donor, FrameField};
use crate::error::{Error, Result};
use crate::frenet::{classify, frenet_apparatus, FrenetData};
use crate::spherical::{bertrand_from_spherical, sabban_bertrand, spherical_test, FitOutcome};
use crate::surface::{bertrand_surface, to_mesh, verify_rows, SurfaceParams};

#[derive(Debug, Parser)]
#[command(
    name = "bertrand",
    version,
    about = "Frenet analysis and Bertrand-type constructions for space curves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frenet frame, curvature and torsion, classification and Bertrand fits
    Analyze(CommonArgs),
    /// Offset mate along a frame field
    Mate(CommonArgs),
    /// The four coefficient branches and their mates for an offset function f
    Fbertrand(CommonArgs),
    /// Bertrand surface swept over the offset parameter
    Surface(CommonArgs),
    /// Sphere test, optionally followed by the Bertrand curve built from it
    Spherical(CommonArgs),
    /// Principal-donor curve
    Donor(CommonArgs),
    /// Bertrand curve generated from a unit-sphere curve through its Sabban frame
    Sabban(CommonArgs),
}

impl Command {
    fn split(self) -> (CommandKind, CommonArgs) {
        match self {
            Command::Analyze(c) => (CommandKind::Analyze, c),
            Command::Mate(c) => (CommandKind::Mate, c),
            Command::Fbertrand(c) => (CommandKind::Fbertrand, c),
            Command::Surface(c) => (CommandKind::Surface, c),
            Command::Spherical(c) => (CommandKind::Spherical, c),
            Command::Donor(c) => (CommandKind::Donor, c),
            Command::Sabban(c) => (CommandKind::Sabban, c),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Analyze,
    Mate,
    Fbertrand,
    Surface,
    Spherical,
    Donor,
    Sabban,
}

impl CommandKind {
    fn allowed(self) -> &'static [&'static str] {
        match self {
            CommandKind::Analyze => &["tol"],
            CommandKind::Mate => &["field", "lambda", "theta"],
            CommandKind::Fbertrand => &["f", "theta"],
            CommandKind::Surface => &["branch", "t_range", "resolution", "lambda", "tol"],
            CommandKind::Spherical => &["tol", "theta0"],
            CommandKind::Donor => &[],
            CommandKind::Sabban => &["a", "theta"],
        }
    }

    fn default_format(self) -> Format {
        match self {
            CommandKind::Surface => Format::Obj,
            CommandKind::Spherical => Format::Report,
            _ => Format::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Obj,
    Report,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// TOML job file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Curve family string (helix(a,b), circle(r), line(x,y,z), sphere_circle(polar), optional @lo:hi) or a CSV of points
    #[arg(long)]
    pub curve: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Output directory; results go to stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[command(flatten)]
    pub params: Parameters,
}

/// Command-specific parameters; each command accepts only its own keys.
#[derive(Debug, Clone, Default, Args, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Offset at the start of the curve
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Frenet coefficients u,v,w of the frame field
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub field: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t_range: Option<Vec<f64>>,
    /// Surface grid size nt,ns
    #[arg(long, value_delimiter = ',')]
    pub resolution: Option<Vec<usize>>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// 1+, 1-, 2+ or 2-
    #[arg(long)]
    pub branch: Option<String>,
}

impl Parameters {
    fn merge(self, over: Parameters) -> Parameters {
        Parameters {
            tol: over.tol.or(self.tol),
            lambda: over.lambda.or(self.lambda),
            theta: over.theta.or(self.theta),
            field: over.field.or(self.field),
            f: over.f.or(self.f),
            t_range: over.t_range.or(self.t_range),
            resolution: over.resolution.or(self.resolution),
            theta0: over.theta0.or(self.theta0),
            a: over.a.or(self.a),
            branch: over.branch.or(self.branch),
        }
    }

    fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut mark = |set: bool, name| {
            if set {
                out.push(name)
            }
        };
        mark(self.tol.is_some(), "tol");
        mark(self.lambda.is_some(), "lambda");
        mark(self.theta.is_some(), "theta");
        mark(self.field.is_some(), "field");
        mark(self.f.is_some(), "f");
        mark(self.t_range.is_some(), "t_range");
        mark(self.resolution.is_some(), "resolution");
        mark(self.theta0.is_some(), "theta0");
        mark(self.a.is_some(), "a");
        mark(self.branch.is_some(), "branch");
        out
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    command: Option<CommandKind>,
    curve: Option<CurveSection>,
    #[serde(default)]
    parameters: Parameters,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveSection {
    spec: String,
    samples: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    dir: Option<PathBuf>,
    format: Option<Format>,
}

/// A fully resolved job.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub command: CommandKind,
    pub curve: CurveSpec,
    pub parameters: Parameters,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl JobConfig {
    pub fn resolve(command: CommandKind, args: CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path)?;
                toml::from_str::<ConfigFile>(&text)
                    .map_err(|e| Error::Config(format!("{}: {}", path.display(), e.message())))?
            }
            None => ConfigFile {
                command: None,
                curve: None,
                parameters: Parameters::default(),
                output: OutputSection::default(),
            },
        };
        if let Some(c) = file.command {
            if c != command {
                return Err(Error::Config(format!(
                    "config is for {c:?} but the {command:?} subcommand was run"
                )));
            }
        }
        let spec_text = args
            .curve
            .or(file.curve.as_ref().map(|c| c.spec.clone()))
            .ok_or_else(|| Error::Config("no curve given (--curve or [curve] spec)".into()))?;
        let samples = args
            .samples
            .or(file.curve.as_ref().and_then(|c| c.samples))
            .unwrap_or(DEFAULT_SAMPLES);
        let curve = parse_curve(&spec_text)?.with_samples(samples);
        let parameters = file.parameters.merge(args.params);
        let allowed = command.allowed();
        if let Some(bad) = parameters
            .present()
            .into_iter()
            .find(|p| !allowed.contains(p))
        {
            return Err(Error::Config(format!(
                "parameter `{bad}` is not used by {command:?}"
            )));
        }
        let format = args
            .format
            .or(file.output.format)
            .unwrap_or(command.default_format());
        Ok(Self {
            command,
            curve,
            parameters,
            out: args.out.or(file.output.dir),
            format,
        })
    }
}

fn parse_numbers(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidSpec(format!("`{t}` is not a number")))
        })
        .collect()
}

/// Parses `family(args)[@lo:hi]`; anything without parentheses is read as a points file.
pub fn parse_curve(text: &str) -> Result<CurveSpec> {
    let text = text.trim();
    if Path::new(text).is_file() || !text.contains('(') {
        return read_points(Path::new(text)).map(CurveSpec::sampled);
    }
    let (body, domain) = match text.split_once('@') {
        Some((b, d)) => {
            let (lo, hi) = d
                .split_once(':')
                .ok_or_else(|| Error::InvalidSpec(format!("domain `{d}` should be lo:hi")))?;
            let lo = parse_numbers(lo)?[0];
            let hi = parse_numbers(hi)?[0];
            (b, Some((lo, hi)))
        }
        None => (text, None),
    };
    let open = body
        .find('(')
        .filter(|_| body.ends_with(')'))
        .ok_or_else(|| Error::InvalidSpec(format!("cannot read curve `{text}`")))?;
    let name = &body[..open];
    let args = parse_numbers(&body[open + 1..body.len() - 1])?;
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!("{name} takes {n} argument(s)")))
        }
    };
    let spec = match name {
        "helix" => {
            arity(2)?;
            CurveSpec::helix(args[0], args[1])
        }
        "circle" => {
            arity(1)?;
            CurveSpec::circle(args[0])
        }
        "line" => {
            arity(3)?;
            CurveSpec::line(Vec3::new(args[0], args[1], args[2]))
        }
        "sphere_circle" => {
            arity(1)?;
            CurveSpec::sphere_circle(args[0])
        }
        _ => return Err(Error::InvalidSpec(format!("unknown curve family `{name}`"))),
    };
    Ok(match domain {
        Some((lo, hi)) => spec.with_domain(lo, hi),
        None => spec,
    })
}

/// Points CSV: three numeric columns, optional header line, `#` comments.
pub fn read_points(path: &Path) -> Result<Vec<Vec3>> {
    let text = fs::read_to_string(path)?;
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match parse_numbers(line) {
            Ok(v) if v.len() == 3 => points.push(Vec3::new(v[0], v[1], v[2])),
            Err(_) if points.is_empty() && i == 0 => continue,
            _ => {
                return Err(Error::InvalidSpec(format!(
                    "{}:{}: expected x,y,z",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(points)
}

/// One output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

struct Table {
    text: String,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Self {
            text: columns.join(",") + "\n",
        }
    }

    fn row(&mut self, values: impl IntoIterator<Item = f64>) {
        let cells: Vec<String> = values.into_iter().map(num).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }
}

/// Flat `key = value` text.
#[derive(Default)]
struct Report {
    text: String,
}

impl Report {
    fn put(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.text, "{key} = {value}");
    }

    fn mate(&mut self, prefix: &str, r: &MateReport) {
        self.put(&format!("{prefix}accepted"), r.accepted);
        self.put(
            &format!("{prefix}normal_collinearity"),
            num(r.normal_collinearity),
        );
        self.put(&format!("{prefix}epsilon"), r.epsilon);
        self.put(&format!("{prefix}epsilon_uniform"), r.epsilon_uniform);
        self.put(&format!("{prefix}theta_mean"), num(r.theta_mean));
        self.put(&format!("{prefix}theta_deviation"), num(r.theta_deviation));
        if let Some(c) = r.condition_residual {
            self.put(&format!("{prefix}condition_residual"), num(c));
        }
    }

    fn fit(&mut self, prefix: &str, fit: std::result::Result<&BertrandFit, &FitRejection>) {
        match fit {
            Ok(f) => {
                self.put(&format!("{prefix}accepted"), true);
                self.put(&format!("{prefix}kind"), f.kind);
                self.put(&format!("{prefix}lambda"), num(f.lambda));
                self.put(&format!("{prefix}mu"), num(f.mu));
                self.put(&format!("{prefix}theta"), num(f.theta));
                self.put(&format!("{prefix}residual"), num(f.residual));
                self.put(&format!("{prefix}planar_special"), f.planar_special);
            }
            Err(r) => {
                self.put(&format!("{prefix}accepted"), false);
                self.put(&format!("{prefix}kind"), r.kind);
                self.put(&format!("{prefix}residual"), num(r.residual));
            }
        }
    }

    fn outcome(&mut self, prefix: &str, fit: &FitOutcome) {
        match fit {
            Ok(f) => self.fit(prefix, Ok(f)),
            Err([a, b]) => {
                let best = if a.residual <= b.residual { a } else { b };
                self.fit(prefix, Err(best))
            }
        }
    }
}

fn positions_csv(curve: &Curve) -> Result<String> {
    let mut t = Table::new(&["s", "x", "y", "z"]);
    for s in curve.grid() {
        let p = curve.position(s)?;
        t.row([s, p.x, p.y, p.z]);
    }
    Ok(t.text)
}

fn frenet_csv(data: &FrenetData) -> String {
    let mut t = Table::new(&[
        "s", "x", "y", "z", "Tx", "Ty", "Tz", "Nx", "Ny", "Nz", "Bx", "By", "Bz", "kappa", "tau",
    ]);
    for i in 0..data.len() {
        let (p, tt, n, b) = (data.position[i], data.t[i], data.n[i], data.b[i]);
        t.row([
            data.s[i],
            p.x,
            p.y,
            p.z,
            tt.x,
            tt.y,
            tt.z,
            n.x,
            n.y,
            n.z,
            b.x,
            b.y,
            b.z,
            data.kappa[i],
            data.tau[i],
        ]);
    }
    t.text
}

fn require<T: Clone>(value: &Option<T>, name: &str, command: CommandKind) -> Result<T> {
    value
        .clone()
        .ok_or_else(|| Error::Config(format!("{command:?} requires --{}", name.replace('_', "-"))))
}

fn parse_branch(text: &str) -> Result<BranchId> {
    BranchId::ALL
        .into_iter()
        .find(|b| b.label() == text)
        .ok_or_else(|| Error::Config(format!("branch `{text}` is not one of 1+, 1-, 2+, 2-")))
}

fn branch_file(id: BranchId) -> &'static str {
    match id {
        BranchId::OnePlus => "1plus",
        BranchId::OneMinus => "1minus",
        BranchId::TwoPlus => "2plus",
        BranchId::TwoMinus => "2minus",
    }
}

fn unsupported(command: CommandKind, format: Format) -> Error {
    Error::Config(format!("{command:?} cannot write {format:?} output"))
}

/// Runs a job and returns its output files without writing them.
pub fn execute(job: &JobConfig) -> Result<Vec<Artifact>> {
    let curve = build_curve(&job.curve)?.reparameterize_arclength()?;
    let p = &job.parameters;
    let cmd = job.command;
    let artifact = |name: &str, contents: String| Artifact {
        name: name.to_string(),
        contents,
    };
    let mut report = Report::default();
    report.put("command", format!("{cmd:?}").to_lowercase());
    report.put("samples", curve.samples());
    report.put("length", num(curve.length()));

    match cmd {
        CommandKind::Analyze => {
            let data = frenet_apparatus(&curve)?;
            if job.format == Format::Csv {
                return Ok(vec![artifact("frenet.csv", frenet_csv(&data))]);
            }
            if job.format != Format::Report {
                return Err(unsupported(cmd, job.format));
            }
            let tol = p.tol.unwrap_or(data.default_tolerance());
            let class = classify(&data, tol);
            let (kmin, kmax) = min_max(&data.kappa);
            let (tmin, tmax) = min_max(&data.tau);
            report.put("kappa_min", num(kmin));
            report.put("kappa_max", num(kmax));
            report.put("tau_min", num(tmin));
            report.put("tau_max", num(tmax));
            report.put("orthonormality_defect", num(data.orthonormality_defect()));
            report.put("planar", class.is_planar);
            report.put("general_helix", class.is_general_helix);
            report.put("salkowski", class.is_salkowski);
            report.put("anti_salkowski", class.is_anti_salkowski);
            for (prefix, kind) in [
                ("bertrand.", BertrandKind::Bertrand),
                ("b_bertrand.", BertrandKind::BBertrand),
            ] {
                let fit = detect_bertrand(&data, kind, tol);
                report.fit(prefix, fit.as_ref());
            }
            Ok(vec![artifact("analyze.txt", report.text)])
        }
        CommandKind::Mate => {
            let field = require(&p.field, "field", cmd)?;
            if field.len() != 3 {
                return Err(Error::Config("--field takes three values u,v,w".into()));
            }
            let field = FrameField::constant(field[0], field[1], field[2]);
            let lambda = require(&p.lambda, "lambda", cmd)?;
            let (mate, rep) = match p.theta {
                Some(theta) => v_bertrand_mate(&curve, &field, lambda, theta)?,
                None => offset_mate(&curve, &field, lambda)?,
            };
            match job.format {
                Format::Csv => Ok(vec![artifact("mate.csv", positions_csv(&mate)?)]),
                Format::Report => {
                    report.mate("", &rep);
                    Ok(vec![artifact("mate.txt", report.text)])
                }
                Format::Obj => Err(unsupported(cmd, job.format)),
            }
        }
        CommandKind::Fbertrand => {
            let f = require(&p.f, "f", cmd)?;
            let theta = require(&p.theta, "theta", cmd)?;
            let mates = f_bertrand_mates(&curve, f, theta)?;
            let mut out = Vec::new();
            for m in &mates {
                let prefix = format!("branch.{}.", m.id.label());
                report.put(&format!("{prefix}u"), num(m.u));
                report.put(&format!("{prefix}w"), num(m.w));
                match &m.outcome {
                    BranchOutcome::Mate {
                        curve: c,
                        report: r,
                    } => {
                        report.mate(&prefix, r);
                        if job.format == Format::Csv {
                            out.push(artifact(
                                &format!("fbertrand_{}.csv", branch_file(m.id)),
                                positions_csv(c)?,
                            ));
                        }
                    }
                    BranchOutcome::Omitted { reason } => {
                        report.put(&format!("{prefix}omitted"), reason)
                    }
                }
            }
            match job.format {
                Format::Csv => Ok(out),
                Format::Report => Ok(vec![artifact("fbertrand.txt", report.text)]),
                Format::Obj => Err(unsupported(cmd, job.format)),
            }
        }
        CommandKind::Surface => {
            let branch = parse_branch(&require(&p.branch, "branch", cmd)?)?;
            let data = frenet_apparatus(&curve)?;
            let tol = p.tol.unwrap_or(data.default_tolerance());
            let fit = detect_bertrand(&data, BertrandKind::Bertrand, tol)
                .map_err(|r| Error::NotBertrand(format!("fit residual {:e}", r.residual)))?;
            let resolution = p.resolution.clone().unwrap_or(vec![16, 128]);
            if resolution.len() != 2 {
                return Err(Error::Config("--resolution takes nt,ns".into()));
            }
            let mut params = SurfaceParams::new(branch, resolution[0], resolution[1]);
            params.lambda = p.lambda;
            if let Some(tr) = &p.t_range {
                if tr.len() != 2 {
                    return Err(Error::Config("--t-range takes lo,hi".into()));
                }
                params = params.with_t_range(tr[0], tr[1]);
            }
            let grid = bertrand_surface(&curve, &fit, &params)?;
            match job.format {
                Format::Obj => Ok(vec![artifact("surface.obj", to_mesh(&grid)?.to_obj())]),
                Format::Csv => {
                    let mut t = Table::new(&["t", "s", "x", "y", "z"]);
                    for i in 0..grid.nt() {
                        for j in 0..grid.ns() {
                            let q = grid.point(i, j);
                            t.row([grid.t_values[i], grid.s_values[j], q.x, q.y, q.z]);
                        }
                    }
                    Ok(vec![artifact("surface.csv", t.text)])
                }
                Format::Report => {
                    report.put("branch", branch.label());
                    report.put("theta", num(grid.theta));
                    report.put("lambda", num(grid.lambda));
                    report.put("nt", grid.nt());
                    report.put("ns", grid.ns());
                    let rows = verify_rows(&curve, &grid)?;
                    let worst = rows
                        .iter()
                        .fold(1.0f64, |m, r| m.min(r.normal_collinearity));
                    report.put("rows_accepted", rows.iter().filter(|r| r.accepted).count());
                    report.put("min_normal_collinearity", num(worst));
                    Ok(vec![artifact("surface.txt", report.text)])
                }
            }
        }
        CommandKind::Spherical => {
            let data = frenet_apparatus(&curve)?;
            let tol = p.tol.unwrap_or(data.default_tolerance());
            let fit = spherical_test(&data, tol);
            report.put("accepted", fit.accepted);
            report.put("radius", num(fit.radius));
            report.put("theta0", num(fit.theta0));
            report.put(
                "center",
                format!(
                    "{},{},{}",
                    num(fit.center.x),
                    num(fit.center.y),
                    num(fit.center.z)
                ),
            );
            report.put("residual", num(fit.residual));
            report.put("osculating_ratio", num(fit.osculating_ratio));
            report.put("radius_degenerate", fit.radius_degenerate);
            let built = match p.theta0 {
                Some(theta0) => Some(bertrand_from_spherical(&curve, theta0)?),
                None => None,
            };
            match (job.format, built) {
                (Format::Report, built) => {
                    if let Some((_, kfit)) = &built {
                        report.outcome("constructed.", kfit);
                    }
                    Ok(vec![artifact("spherical.txt", report.text)])
                }
                (Format::Csv, Some((k, _))) => Ok(vec![artifact(
                    "constructed.csv",
                    frenet_csv(&frenet_apparatus(&k)?),
                )]),
                (Format::Csv, None) => Err(Error::Config(
                    "spherical CSV output is the constructed curve; give --theta0".into(),
                )),
                (Format::Obj, _) => Err(unsupported(cmd, job.format)),
            }
        }
        CommandKind::Donor => {
            let donor = principal_donor(&curve)?;
            match job.format {
                Format::Csv => Ok(vec![artifact(
                    "donor.csv",
                    frenet_csv(&frenet_apparatus(&donor)?),
                )]),
                Format::Report => {
                    report.put("donor_length", num(donor.length()));
                    Ok(vec![artifact("donor.txt", report.text)])
                }
                Format::Obj => Err(unsupported(cmd, job.format)),
            }
        }
        CommandKind::Sabban => {
            let a = require(&p.a, "a", cmd)?;
            let theta = require(&p.theta, "theta", cmd)?;
            let (out, fit) = sabban_bertrand(&curve, a, theta)?;
            match job.format {
                Format::Csv => Ok(vec![artifact(
                    "sabban.csv",
                    frenet_csv(&frenet_apparatus(&out)?),
                )]),
                Format::Report => {
                    report.outcome("fit.", &fit);
                    Ok(vec![artifact("sabban.txt", report.text)])
                }
                Format::Obj => Err(unsupported(cmd, job.format)),
            }
        }
    }
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(*x), hi.max(*x))
        })
}

/// Writes artifacts into `out`, or concatenates them to `stdout` when `out` is `None`.
pub fn emit(
    artifacts: &[Artifact],
    out: Option<&Path>,
    stdout: &mut dyn std::io::Write,
) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for a in artifacts {
                fs::write(dir.join(&a.name), &a.contents)?;
            }
        }
        None => {
            for a in artifacts {
                stdout.write_all(a.contents.as_bytes())?;
            }
        }
    }
    Ok(())
}

/// Parses arguments, runs the job and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
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
    let (kind, common) = cli.command.split();
    let result = JobConfig::resolve(kind, common).and_then(|job| {
        let artifacts = execute(&job)?;
        emit(
            &artifacts,
            job.out.as_deref(),
            &mut std::io::stdout().lock(),
        )
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let category = e.category();
            eprintln!("error[{}]: {e}", category.name());
            category.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(args: &[&str]) -> Result<JobConfig> {
        let mut full = vec!["bertrand"];
        full.extend_from_slice(args);
        let (kind, common) = Cli::try_parse_from(full).unwrap().command.split();
        JobConfig::resolve(kind, common)
    }

    #[test]
    fn curve_strings() {
        let spec = parse_curve("helix(1, 1)@0:5").unwrap();
        assert_eq!(spec.domain, Some((0.0, 5.0)));
        assert!(parse_curve("cardioid(1)").is_err());
        assert!(parse_curve("helix(1)").is_err());
        assert!(parse_curve("circle(2").is_err());
    }

    #[test]
    fn analyze_csv_has_constant_curvature() {
        let j = job(&["analyze", "--curve", "helix(1,1)", "--samples", "64"]).unwrap();
        let out = execute(&j).unwrap();
        let mut lines = out[0].contents.lines();
        assert_eq!(
            lines.next().unwrap(),
            "s,x,y,z,Tx,Ty,Tz,Nx,Ny,Nz,Bx,By,Bz,kappa,tau"
        );
        for line in lines {
            let kappa: f64 = line.split(',').nth(13).unwrap().parse().unwrap();
            assert!((kappa - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn mate_csv_lies_on_axis() {
        let j = job(&[
            "mate",
            "--curve",
            "helix(1,1)",
            "--field",
            "1,0,0",
            "--lambda",
            "1",
            "--samples",
            "128",
        ])
        .unwrap();
        let out = execute(&j).unwrap();
        for line in out[0].contents.lines().skip(1) {
            let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
            assert!(v[1].abs() < 1e-6 && v[2].abs() < 1e-6, "{line}");
        }
    }

    #[test]
    fn strict_parameters() {
        let e = job(&["analyze", "--curve", "helix(1,1)", "--lambda", "1"]).unwrap_err();
        assert_eq!(e.category().exit_code(), 2);
        let j = job(&["mate", "--curve", "helix(1,1)"]).unwrap();
        assert!(matches!(execute(&j), Err(Error::Config(_))));
    }

    #[test]
    fn config_file_and_overrides() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("job.toml");
        fs::write(
            &path,
            "command = \"surface\"\n[curve]\nspec = \"helix(1,1)\"\nsamples = 128\n\n[parameters]\nbranch = \"1+\"\nresolution = [4, 8]\nt_range = [-1.0, 1.0]\n",
        )
        .unwrap();
        let p = path.to_str().unwrap();
        let j = job(&["surface", "--config", p, "--resolution", "3,5"]).unwrap();
        assert_eq!(j.parameters.resolution, Some(vec![3, 5]));
        assert_eq!(j.parameters.branch.as_deref(), Some("1+"));
        assert_eq!(j.format, Format::Obj);
        let obj = &execute(&j).unwrap()[0].contents;
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 16);

        fs::write(&path, "[curve]\nspec = \"helix(1,1)\"\nwidth = 3\n").unwrap();
        assert!(matches!(
            job(&["surface", "--config", p]),
            Err(Error::Config(_))
        ));
        fs::write(
            &path,
            "command = \"donor\"\n[curve]\nspec = \"helix(1,1)\"\n",
        )
        .unwrap();
        assert!(matches!(
            job(&["surface", "--config", p]),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            run([
                "bertrand",
                "analyze",
                "--curve",
                "line(1,0,0)",
                "--samples",
                "64"
            ]),
            3
        );
        assert_eq!(run(["bertrand", "analyze"]), 2);
        assert_eq!(run(["bertrand", "frobnicate"]), 2);
        assert_eq!(
            run([
                "bertrand",
                "mate",
                "--curve",
                "helix(1,1)",
                "--field",
                "1,0,0",
                "--lambda",
                "1",
                "--theta",
                "0.2",
                "--samples",
                "64"
            ]),
            4
        );
        assert_eq!(
            run(["bertrand", "analyze", "--config", "/nonexistent/job.toml"]),
            5
        );
    }
}
