//! File-driven command-line front-end.
//!
//! Every command reads one JSON [`InputDocument`] (or `-` for stdin) and
//! writes either aligned text or, with `--json`, a document that re-parses
//! as an `InputDocument` (or as a [`VerificationReport`] for `check` and
//! `verify`). Exit status: 0 on success, 1 when a consistency check or
//! verification fails, 2 on input errors, which are reported on stderr as a
//! single `error CODE: message` line.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::identities::{beta12_2d, residual_2d, solve_alpha_2d, solve_alpha_2d_with_beta, AngleProblem};
use crate::linalg::{self, Matrix};
use crate::metric::{
    build_metric, cell_volume, cholesky_factor, delta_omega, dual_metric, gram_from_basis, mixed_from_bases,
    primal_metric,
};
use crate::reciprocal::{reciprocal_basis, reciprocal_geometry};
use crate::tolerances;
use crate::types::{
    geometry_from_metric, matrix_rows, pair_label, pairs, BasisGeometry, BasisMatrix, GammaMatrix, MetricMatrix,
    MixedMatrix, PairAngles,
};
use crate::verify::{check_configuration, verify_identities, TrialConfig, VerificationReport};

#[derive(Debug, Parser)]
#[command(name = "dualbasis", version, about = "Metric, mixed and reciprocal computations for two basis sets")]
pub struct Cli {
    /// Write JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Report angles in degrees (default).
    #[arg(long, global = true, conflicts_with = "radians")]
    pub degrees: bool,

    /// Report angles in radians.
    #[arg(long, global = true)]
    pub radians: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InputArg {
    /// Input document, or `-` for stdin.
    pub input: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Geometry (or basis) to metric matrix.
    Metric {
        #[command(flatten)]
        input: InputArg,
        /// Also emit the upper-triangular Cholesky basis.
        #[arg(long)]
        factor: bool,
    },
    /// Dual metric `G* = Q^T G^-1 Q` and the dual geometry it encodes.
    DualMetric {
        #[command(flatten)]
        input: InputArg,
    },
    /// Reciprocal basis or reciprocal cell.
    Reciprocal {
        #[command(flatten)]
        input: InputArg,
    },
    /// Recover cos(a12) and cos(b12) from 2D gamma cosines.
    SolveAngles {
        #[command(flatten)]
        input: InputArg,
    },
    /// Cell area or volume.
    Volume {
        #[command(flatten)]
        input: InputArg,
    },
    /// Consistency of a `metric`, `dual_metric`, `mixed` triple.
    Check {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, default_value_t = tolerances::IDENTITY)]
        tol: f64,
    },
    /// Randomized identity verification.
    Verify {
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
        dim: u8,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = tolerances::CONDITION_LIMIT)]
        cond: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AngleUnit {
    #[default]
    #[serde(rename = "deg")]
    Degrees,
    #[serde(rename = "rad")]
    Radians,
}

impl AngleUnit {
    pub fn to_radians(self, v: f64) -> f64 {
        match self {
            AngleUnit::Degrees => v.to_radians(),
            AngleUnit::Radians => v,
        }
    }

    pub fn from_radians(self, v: f64) -> f64 {
        match self {
            AngleUnit::Degrees => v.to_degrees(),
            AngleUnit::Radians => v,
        }
    }

    fn suffix(self) -> &'static str {
        match self {
            AngleUnit::Degrees => "deg",
            AngleUnit::Radians => "rad",
        }
    }
}

/// Lengths plus angles keyed `"12"`, `"13"`, `"23"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryDoc {
    pub lengths: Vec<f64>,
    pub angles: BTreeMap<String, f64>,
}

impl GeometryDoc {
    pub fn from_geometry(g: &BasisGeometry, unit: AngleUnit) -> Self {
        let angles = pairs(g.dim())
            .iter()
            .zip(g.angles().values())
            .map(|(&(i, j), &v)| (pair_label(i, j), unit.from_radians(v)))
            .collect();
        Self { lengths: g.lengths().to_vec(), angles }
    }

    fn to_geometry(&self, field: &str, n: usize, unit: AngleUnit) -> Result<BasisGeometry, CliError> {
        check_len(field, n, self.lengths.len())?;
        let labels: Vec<String> = pairs(n).iter().map(|&(i, j)| pair_label(i, j)).collect();
        if let Some(extra) = self.angles.keys().find(|k| !labels.contains(k)) {
            return Err(CliError::new("INVALID_FIELD", format!("{field}.angles has unknown key \"{extra}\"")));
        }
        let values = labels
            .iter()
            .map(|k| {
                self.angles
                    .get(k)
                    .map(|&v| unit.to_radians(v))
                    .ok_or_else(|| CliError::missing(&format!("{field}.angles.{k}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BasisGeometry::new(self.lengths.clone(), PairAngles::new(n, values)?)?)
    }
}

/// Input file format. `basis` and `dual_basis` are lists of columns; the
/// other matrices are lists of rows.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct InputDocument {
    pub dimension: usize,
    #[serde(default)]
    pub angle_unit: AngleUnit,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_geometry: Option<GeometryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_basis: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_metric: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixed: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gammas: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_lengths: Option<Vec<f64>>,
}

impl InputDocument {
    pub fn new(dimension: usize, angle_unit: AngleUnit) -> Self {
        Self { dimension, angle_unit, ..Self::default() }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: Self = serde_json::from_str(text).map_err(|e| CliError::new("PARSE_ERROR", e.to_string()))?;
        doc.check_shape()?;
        Ok(doc)
    }

    fn check_shape(&self) -> Result<(), CliError> {
        if self.dimension != 2 && self.dimension != 3 {
            return Err(Error::UnsupportedDimension(self.dimension).into());
        }
        if self.geometry.is_some() && self.basis.is_some() {
            return Err(CliError::new("CONFLICTING_FIELDS", "give at most one of geometry and basis".into()));
        }
        if self.dual_geometry.is_some() && self.dual_basis.is_some() {
            return Err(CliError::new("CONFLICTING_FIELDS", "give at most one of dual_geometry and dual_basis".into()));
        }
        Ok(())
    }

    fn geometry(&self) -> Result<Option<BasisGeometry>, CliError> {
        self.geometry.as_ref().map(|g| g.to_geometry("geometry", self.dimension, self.angle_unit)).transpose()
    }

    fn dual_geometry(&self) -> Result<Option<BasisGeometry>, CliError> {
        self.dual_geometry.as_ref().map(|g| g.to_geometry("dual_geometry", self.dimension, self.angle_unit)).transpose()
    }

    fn basis(&self) -> Result<Option<BasisMatrix>, CliError> {
        self.basis.as_ref().map(|c| self.columns("basis", c)).transpose()
    }

    fn columns(&self, field: &str, cols: &[Vec<f64>]) -> Result<BasisMatrix, CliError> {
        check_square(field, self.dimension, cols)?;
        Ok(BasisMatrix::from_columns(cols)?)
    }

    /// `G` from `metric`, else `geometry`, else `basis`.
    fn primal_metric(&self) -> Result<MetricMatrix, CliError> {
        if let Some(rows) = &self.metric {
            check_square("metric", self.dimension, rows)?;
            return Ok(MetricMatrix::from_rows(rows)?);
        }
        if let Some(g) = self.geometry()? {
            return Ok(build_metric(&g)?);
        }
        if let Some(a) = self.basis()? {
            return Ok(gram_from_basis(&a)?);
        }
        Err(CliError::missing("metric, geometry or basis"))
    }

    fn dual_lengths(&self) -> Result<Vec<f64>, CliError> {
        if let Some(l) = &self.dual_lengths {
            check_len("dual_lengths", self.dimension, l.len())?;
            return Ok(l.clone());
        }
        if let Some(g) = self.dual_geometry()? {
            return Ok(g.lengths().to_vec());
        }
        if let Some(cols) = &self.dual_basis {
            return Ok(geometry_from_metric(&gram_from_basis(&self.columns("dual_basis", cols)?)?)?.lengths().to_vec());
        }
        Err(CliError::missing("dual_lengths or dual_geometry"))
    }

    /// `Q` from `mixed`, else from `gammas` and both length sets.
    fn mixed(&self, g: &MetricMatrix) -> Result<MixedMatrix, CliError> {
        if let Some(rows) = &self.mixed {
            check_square("mixed", self.dimension, rows)?;
            return Ok(MixedMatrix::from_rows(rows)?);
        }
        if let Some(rows) = &self.gammas {
            check_square("gammas", self.dimension, rows)?;
            let primal: Vec<f64> = (0..g.dim()).map(|i| g.matrix()[(i, i)].sqrt()).collect();
            return Ok(MixedMatrix::from_gammas(&GammaMatrix::from_rows(rows)?, &primal, &self.dual_lengths()?)?);
        }
        Err(CliError::missing("mixed or gammas"))
    }
}

/// An input error: stable code plus message.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
}

impl CliError {
    fn new(code: &'static str, message: String) -> Self {
        Self { code, message }
    }

    fn missing(what: &str) -> Self {
        Self::new("MISSING_FIELD", format!("input needs {what}"))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::new(e.code(), e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "error {}: {}", self.code, self.message)
    }
}

fn check_len(field: &str, expected: usize, found: usize) -> Result<(), CliError> {
    if expected == found {
        Ok(())
    } else {
        Err(CliError::new("DIMENSION_MISMATCH", format!("{field} has {found} entries, expected {expected}")))
    }
}

fn check_square(field: &str, n: usize, rows: &[Vec<f64>]) -> Result<(), CliError> {
    check_len(field, n, rows.len())?;
    for r in rows {
        check_len(field, n, r.len())?;
    }
    Ok(())
}

/// A command result plus extra values that are not part of the input format.
#[derive(Debug, Serialize)]
struct Output<R: Serialize> {
    #[serde(flatten)]
    document: InputDocument,
    result: R,
}

#[derive(Debug, Serialize)]
struct MetricResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    cholesky: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Serialize)]
struct DualMetricResult {
    /// Relative max-entry mismatch of `Q G*^-1 Q^T` against `G`.
    inverse_residual: f64,
}

#[derive(Debug, Serialize)]
struct ReciprocalResult {
    volume: f64,
    dual_volume: f64,
    /// `|a_i| |a*_i| cos(g_ii) - 1`, or `max |A^T A* - I|` for a basis.
    normalization: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct Candidate {
    label: &'static str,
    cos_alpha: f64,
    residuals: [f64; 2],
}

#[derive(Debug, Serialize)]
struct SolveResult {
    cos_alpha: f64,
    alpha: f64,
    branch: &'static str,
    numerator: f64,
    denominator: f64,
    cos_beta: f64,
    beta: f64,
    residuals: [f64; 2],
    candidates: Vec<Candidate>,
}

#[derive(Debug, Serialize)]
struct VolumeResult {
    volume: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega: Option<[f64; 3]>,
}

/// Rendered command output.
struct Rendered {
    body: String,
    pass: bool,
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn read_input(path: &Path) -> Result<InputDocument, CliError> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| CliError::new("IO_ERROR", format!("{}: {e}", path.display())))?;
    InputDocument::parse(&text)
}

struct Text(String);

impl Text {
    fn new() -> Self {
        Self(String::new())
    }

    fn line(&mut self, label: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.0, "{label:<16}{value}");
    }

    fn values(&mut self, label: &str, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|v| format!("{v:>14.9}")).collect();
        self.line(label, cells.join(" "));
    }

    fn matrix(&mut self, label: &str, m: &Matrix) {
        for (i, row) in matrix_rows(m).iter().enumerate() {
            self.values(if i == 0 { label } else { "" }, row);
        }
    }

    fn geometry(&mut self, prefix: &str, g: &BasisGeometry, unit: AngleUnit) {
        self.values(&format!("{prefix}lengths"), g.lengths());
        for (&(i, j), &v) in pairs(g.dim()).iter().zip(g.angles().values()) {
            self.line(
                &format!("{prefix}angle {}", pair_label(i, j)),
                format!("{:.9} {}", unit.from_radians(v), unit.suffix()),
            );
        }
    }
}

fn metric_cmd(doc: &InputDocument, factor: bool, unit: AngleUnit, json: bool) -> Result<Rendered, CliError> {
    let g = doc.primal_metric()?;
    let geometry = match doc.geometry()? {
        Some(geometry) => geometry,
        None => geometry_from_metric(&g)?,
    };
    let chol = if factor { Some(cholesky_factor(&g)?) } else { None };
    let body = if json {
        let mut out = InputDocument::new(doc.dimension, unit);
        out.geometry = Some(GeometryDoc::from_geometry(&geometry, unit));
        out.metric = Some(matrix_rows(g.matrix()));
        to_json(&Output { document: out, result: MetricResult { cholesky: chol.map(|b| b.columns()) } })
    } else {
        let mut t = Text::new();
        t.geometry("", &geometry, unit);
        t.matrix("metric", g.matrix());
        if let Some(b) = &chol {
            t.matrix("cholesky", b.matrix());
        }
        t.0
    };
    Ok(Rendered { body, pass: true })
}

fn dual_metric_cmd(doc: &InputDocument, unit: AngleUnit, json: bool) -> Result<Rendered, CliError> {
    let g = doc.primal_metric()?;
    let q = doc.mixed(&g)?;
    let gs = dual_metric(&g, &q)?;
    let dual = geometry_from_metric(&gs)?;
    let inverse_residual = linalg::rel_max_diff(primal_metric(&gs, &q)?.matrix(), g.matrix());
    let body = if json {
        let mut out = InputDocument::new(doc.dimension, unit);
        out.metric = Some(matrix_rows(g.matrix()));
        out.mixed = Some(matrix_rows(q.matrix()));
        out.dual_metric = Some(matrix_rows(gs.matrix()));
        out.dual_geometry = Some(GeometryDoc::from_geometry(&dual, unit));
        to_json(&Output { document: out, result: DualMetricResult { inverse_residual } })
    } else {
        let mut t = Text::new();
        t.matrix("metric", g.matrix());
        t.matrix("mixed", q.matrix());
        t.matrix("dual metric", gs.matrix());
        t.geometry("dual ", &dual, unit);
        t.line("inverse resid", format!("{inverse_residual:.3e}"));
        t.0
    };
    Ok(Rendered { body, pass: true })
}

fn reciprocal_cmd(doc: &InputDocument, unit: AngleUnit, json: bool) -> Result<Rendered, CliError> {
    let mut out = InputDocument::new(doc.dimension, unit);
    let mut t = Text::new();
    let result = if let Some(a) = doc.basis()? {
        let a_star = reciprocal_basis(&a)?;
        let q = mixed_from_bases(&a, &a_star)?;
        let n = a.dim();
        let normalization = vec![linalg::max_abs(&(q.matrix() - Matrix::identity(n, n)))];
        out.basis = Some(a.columns());
        out.dual_basis = Some(a_star.columns());
        t.matrix("basis", a.matrix());
        t.matrix("dual basis", a_star.matrix());
        t.geometry("dual ", &geometry_from_metric(&gram_from_basis(&a_star)?)?, unit);
        ReciprocalResult { volume: a.det().abs(), dual_volume: a_star.det().abs(), normalization }
    } else if let Some(g) = doc.geometry()? {
        let pair = reciprocal_geometry(&g)?;
        out.geometry = Some(GeometryDoc::from_geometry(&pair.primal, unit));
        out.dual_geometry = Some(GeometryDoc::from_geometry(&pair.dual, unit));
        t.geometry("", &pair.primal, unit);
        t.geometry("dual ", &pair.dual, unit);
        t.values("cos gamma_ii", &pair.gamma_diag);
        ReciprocalResult {
            volume: cell_volume(&pair.primal)?,
            dual_volume: cell_volume(&pair.dual)?,
            normalization: pair.normalization_residuals(),
        }
    } else {
        return Err(CliError::missing("geometry or basis"));
    };
    let body = if json {
        to_json(&Output { document: out, result })
    } else {
        t.line("volume", format!("{:.12}", result.volume));
        t.line("dual volume", format!("{:.12}", result.dual_volume));
        t.values("normalization", &result.normalization);
        t.0
    };
    Ok(Rendered { body, pass: true })
}

fn solve_angles_cmd(doc: &InputDocument, unit: AngleUnit, json: bool) -> Result<Rendered, CliError> {
    if doc.dimension != 2 {
        return Err(CliError::new("DIMENSION_MISMATCH", "solve-angles needs dimension 2".into()));
    }
    let rows = doc.gammas.as_ref().ok_or_else(|| CliError::missing("gammas"))?;
    check_square("gammas", 2, rows)?;
    let gamma = GammaMatrix::from_rows(rows)?;
    let dual = doc.dual_geometry()?;
    let sol = match &dual {
        Some(d) => solve_alpha_2d_with_beta(&gamma, d.angles().cos(0, 1))?,
        None => solve_alpha_2d(&gamma)?,
    };
    let p = AngleProblem::new(PairAngles::from_cosines(2, &[sol.cos_alpha])?, gamma.clone())?;
    let cos_beta = beta12_2d(&p)?;
    let result = SolveResult {
        cos_alpha: sol.cos_alpha,
        alpha: unit.from_radians(sol.alpha()),
        branch: sol.branch.name(),
        numerator: sol.numerator,
        denominator: sol.denominator,
        cos_beta,
        beta: unit.from_radians(cos_beta.acos()),
        residuals: [residual_2d(&p, 0)?, residual_2d(&p, 1)?],
        candidates: sol
            .candidates
            .iter()
            .map(|c| Candidate { label: c.label, cos_alpha: c.cos_alpha, residuals: c.residuals })
            .collect(),
    };
    let body = if json {
        let mut out = InputDocument::new(2, unit);
        out.gammas = Some(rows.clone());
        out.dual_geometry = dual.as_ref().map(|d| GeometryDoc::from_geometry(d, unit));
        to_json(&Output { document: out, result })
    } else {
        let mut t = Text::new();
        t.line("branch", result.branch);
        t.line("cos alpha12", format!("{:.15}", result.cos_alpha));
        t.line("alpha12", format!("{:.9} {}", result.alpha, unit.suffix()));
        t.line("cos beta12", format!("{:.15}", result.cos_beta));
        t.line("beta12", format!("{:.9} {}", result.beta, unit.suffix()));
        t.line("numerator", format!("{:.6e}", result.numerator));
        t.line("denominator", format!("{:.6e}", result.denominator));
        t.line("residuals", format!("{:.3e} {:.3e}", result.residuals[0], result.residuals[1]));
        for c in &result.candidates {
            t.line(
                &format!("  {}", c.label),
                format!("cos {:>18.15}  residuals {:.3e} {:.3e}", c.cos_alpha, c.residuals[0], c.residuals[1]),
            );
        }
        t.0
    };
    Ok(Rendered { body, pass: true })
}

fn volume_cmd(doc: &InputDocument, unit: AngleUnit, json: bool) -> Result<Rendered, CliError> {
    let geometry = match doc.geometry()? {
        Some(g) => g,
        None => geometry_from_metric(&doc.primal_metric()?)?,
    };
    let dw = if geometry.dim() == 3 { Some(delta_omega(geometry.angles())?) } else { None };
    let result =
        VolumeResult { volume: cell_volume(&geometry)?, delta: dw.map(|d| d.delta), omega: dw.map(|d| d.omega) };
    let body = if json {
        let mut out = InputDocument::new(doc.dimension, unit);
        out.geometry = Some(GeometryDoc::from_geometry(&geometry, unit));
        to_json(&Output { document: out, result })
    } else {
        let mut t = Text::new();
        t.geometry("", &geometry, unit);
        t.line(if geometry.dim() == 2 { "area" } else { "volume" }, format!("{:.15}", result.volume));
        if let (Some(d), Some(o)) = (result.delta, result.omega) {
            t.line("delta", format!("{d:.15}"));
            t.values("omega", &o);
        }
        t.0
    };
    Ok(Rendered { body, pass: true })
}

fn report_text(report: &VerificationReport) -> String {
    let mut t = Text::new();
    if let Some(c) = &report.config {
        t.line("dimension", c.dimension);
        t.line("trials", c.trials);
        t.line("seed", c.seed);
        t.line("cond limit", format!("{:e}", c.condition_limit));
    }
    t.line("tolerance", format!("{:e}", report.tolerance));
    let width = report.identities.keys().map(String::len).max().unwrap_or(0);
    for (name, s) in &report.identities {
        let _ = writeln!(
            t.0,
            "{name:<width$}  {:>6} trials  max {:>10.3e}  at #{:<6} {}",
            s.trials,
            s.max_residual,
            s.trial_index,
            if s.pass { "ok" } else { "FAIL" }
        );
    }
    t.line("result", if report.pass { "pass" } else { "FAIL" });
    t.0
}

fn render_report(report: VerificationReport, json: bool) -> Rendered {
    let body = if json { to_json(&report) } else { report_text(&report) };
    Rendered { body, pass: report.pass }
}

fn check_cmd(doc: &InputDocument, tol: f64, json: bool) -> Result<Rendered, CliError> {
    let n = doc.dimension;
    let field = |name: &str, rows: &Option<Vec<Vec<f64>>>| -> Result<Vec<Vec<f64>>, CliError> {
        let rows = rows.as_ref().ok_or_else(|| CliError::missing(name))?;
        check_square(name, n, rows)?;
        Ok(rows.clone())
    };
    let g = MetricMatrix::from_rows(&field("metric", &doc.metric)?)?;
    let gs = MetricMatrix::from_rows(&field("dual_metric", &doc.dual_metric)?)?;
    let q = MixedMatrix::from_rows(&field("mixed", &doc.mixed)?)?;
    Ok(render_report(check_configuration(&g, &gs, &q, tol)?, json))
}

fn execute(cli: &Cli) -> Result<Rendered, CliError> {
    let unit = if cli.radians { AngleUnit::Radians } else { AngleUnit::Degrees };
    let json = cli.json;
    match &cli.command {
        Command::Metric { input, factor } => metric_cmd(&read_input(&input.input)?, *factor, unit, json),
        Command::DualMetric { input } => dual_metric_cmd(&read_input(&input.input)?, unit, json),
        Command::Reciprocal { input } => reciprocal_cmd(&read_input(&input.input)?, unit, json),
        Command::SolveAngles { input } => solve_angles_cmd(&read_input(&input.input)?, unit, json),
        Command::Volume { input } => volume_cmd(&read_input(&input.input)?, unit, json),
        Command::Check { input, tol } => check_cmd(&read_input(&input.input)?, *tol, json),
        Command::Verify { dim, trials, seed, tol, cond } => {
            let cfg = TrialConfig::new(*dim as usize, *trials, *seed, *tol, *cond)?;
            Ok(render_report(verify_identities(&cfg)?, json))
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let _ = out.write_all(r.body.as_bytes());
            if r.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            2
        }
    }
}
