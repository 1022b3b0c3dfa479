//! Command-line surface: matrix and pair parsing, command dispatch, JSON
//! reports and SVG rendering of planar tilings around the origin.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::boxenum::{enumerate_with_limit, Parallelepiped, Topology, DEFAULT_MAX_CELLS};
use crate::constructors::{
    cascade_pair, coprime_pair, diagonal_pair, direct_sum_pair, tensor_pair, unipotent_pair,
    CascadeParams, ConstructedPair, CoprimeParams, DiagParams, Family,
};
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, MatrixJson, Scalar};
use crate::goodpair::{
    check_single_with, check_witness_with, minkowski_boundary_report_with, CheckOptions,
    CheckReport, WitnessCandidate,
};
use crate::lattice::{lattices_equal, Lattice, LatticePair};
use crate::oracle::{mc_tiling_check, notgood_scan_with, McConfig};

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_entry(text: &str, line: usize, column: usize, radicand: u64) -> Result<Scalar> {
    let x: Scalar = text
        .parse()
        .map_err(|e: String| parse_error(line, column, e))?;
    let r = x.radicand();
    if r != 0 && radicand != 0 && r != radicand {
        return Err(Error::RadicandMismatch(radicand, r));
    }
    Ok(x)
}

fn finish(rows: Vec<Vec<Scalar>>, radicand: u64) -> Result<Matrix> {
    let m = Matrix::from_rows(rows)?;
    if radicand == 0 {
        Ok(m)
    } else {
        m.in_field(radicand)
    }
}

fn matrix_from_json(json: &MatrixJson, radicand: u64) -> Result<Matrix> {
    if json.radicand != 0 && radicand != 0 && json.radicand != radicand {
        return Err(Error::RadicandMismatch(radicand, json.radicand));
    }
    let r = if radicand == 0 { json.radicand } else { radicand };
    if json.rows.len() != json.dim {
        return Err(parse_error(
            json.rows.len(),
            0,
            format!("expected {} rows, found {}", json.dim, json.rows.len()),
        ));
    }
    let mut rows = Vec::with_capacity(json.dim);
    for (i, row) in json.rows.iter().enumerate() {
        if row.len() != json.dim {
            return Err(parse_error(
                i + 1,
                row.len(),
                format!("expected {} entries, found {}", json.dim, row.len()),
            ));
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, s)| parse_entry(s, i + 1, j + 1, r))
            .collect::<Result<Vec<_>>>()?;
        rows.push(parsed);
    }
    finish(rows, r)
}

fn matrix_from_value(v: &Value, radicand: u64) -> Result<Matrix> {
    match v {
        Value::String(s) => parse_matrix(s, radicand),
        _ => {
            let json: MatrixJson = serde_json::from_value(v.clone())
                .map_err(|e| parse_error(1, 1, e.to_string()))?;
            matrix_from_json(&json, radicand)
        }
    }
}

/// Parses the text format (`;` or newline between rows, `,` between entries)
/// or the JSON object `{"dim", "radicand", "rows"}`. Rows and entries in
/// parse errors are 1-based.
pub fn parse_matrix(text: &str, radicand: u64) -> Result<Matrix> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let json: MatrixJson = serde_json::from_str(trimmed)
            .map_err(|e| parse_error(e.line(), e.column(), e.to_string()))?;
        return matrix_from_json(&json, radicand);
    }
    let lines: Vec<&str> = trimmed
        .split([';', '\n'])
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    if lines.is_empty() {
        return Err(parse_error(1, 1, "empty matrix"));
    }
    let dim = lines.len();
    let mut rows = Vec::with_capacity(dim);
    for (i, line) in lines.iter().enumerate() {
        let entries: Vec<&str> = line.split(',').collect();
        let row = entries
            .iter()
            .enumerate()
            .map(|(j, s)| parse_entry(s, i + 1, j + 1, radicand))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != dim {
            return Err(parse_error(
                i + 1,
                row.len(),
                format!("expected {dim} entries, found {}", row.len()),
            ));
        }
        rows.push(row);
    }
    finish(rows, radicand)
}

/// Parses `{"gamma1": <matrix>, "gamma2": <matrix>}` where each matrix is a
/// text-format string or a JSON matrix object.
pub fn parse_pair(json: &str, radicand: u64) -> Result<LatticePair> {
    let v: Value = serde_json::from_str(json)
        .map_err(|e| parse_error(e.line(), e.column(), e.to_string()))?;
    let get = |key: &str| {
        v.get(key)
            .ok_or_else(|| parse_error(1, 1, format!("missing field {key:?}")))
    };
    let m1 = matrix_from_value(get("gamma1")?, radicand)?;
    let m2 = matrix_from_value(get("gamma2")?, radicand)?;
    LatticePair::from_bases(m1, m2)
}

/// Reads a [`ConstructedPair`] as emitted by `construct`, re-verifying its witness.
pub fn parse_constructed(json: &str, radicand: u64) -> Result<ConstructedPair> {
    let v: Value = serde_json::from_str(json)
        .map_err(|e| parse_error(e.line(), e.column(), e.to_string()))?;
    let field = |path: &[&str]| {
        path.iter()
            .try_fold(&v, |acc, key| acc.get(key))
            .ok_or_else(|| parse_error(1, 1, format!("missing field {:?}", path.join("."))))
    };
    let basis = matrix_from_value(field(&["pair", "gamma1"])?, radicand)?;
    let other = matrix_from_value(field(&["pair", "gamma2"])?, radicand)?;
    if !other.is_identity() {
        return Err(Error::InvalidArgument(
            "constructed pair must have the standard lattice as gamma2".into(),
        ));
    }
    let witness = matrix_from_value(field(&["witness", "n"])?, radicand)?;
    let family: Family = serde_json::from_value(field(&["family"])?.clone())
        .map_err(|e| parse_error(1, 1, e.to_string()))?;
    let params = v.get("params").cloned().unwrap_or(Value::Null);
    ConstructedPair::from_parts(basis, witness, family, params)
}

/// Two-dimensional drawing of `N[0,1]^2 + γ` for the points `γ` of up to
/// two lattices inside the window `[-w, w]^2`.
#[derive(Clone, Debug)]
pub struct SvgScene {
    pub witness: Matrix,
    pub lattices: Vec<Lattice>,
    pub window: Scalar,
    pub colors: [String; 2],
    pub fill_opacity: f64,
}

impl SvgScene {
    pub fn new(witness: Matrix, lattices: Vec<Lattice>) -> Self {
        SvgScene {
            witness,
            lattices,
            window: Scalar::from_int(2),
            colors: ["#1f77b4".into(), "#d62728".into()],
            fill_opacity: 0.15,
        }
    }
}

/// Decimal with 12 significant digits.
fn decimal(x: &Scalar) -> String {
    decimal_f64(x.to_f64())
}

fn decimal_f64(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("float");
    format!("{rounded}")
}

pub fn emit_svg(scene: &SvgScene) -> Result<String> {
    if scene.witness.dim() != 2 {
        return Err(Error::DimensionNot2(scene.witness.dim()));
    }
    if let Some(l) = scene.lattices.iter().find(|l| l.dim() != 2) {
        return Err(Error::DimensionNot2(l.dim()));
    }
    if scene.lattices.len() > 2 {
        return Err(Error::InvalidArgument("at most two lattices".into()));
    }
    if !scene.window.is_positive() {
        return Err(Error::InvalidArgument("window must be positive".into()));
    }
    let n = &scene.witness;
    let corners: Vec<Vec<Scalar>> = [(0, 0), (1, 0), (1, 1), (0, 1)]
        .iter()
        .map(|&(a, b)| n.mul_vec(&[Scalar::from_int(a), Scalar::from_int(b)]))
        .collect::<Result<_>>()?;
    let window_box = Parallelepiped::new(
        Matrix::identity(2).scale(&scene.window)?,
        Topology::ClosedPm1,
    )?;

    let mut shapes = Vec::new();
    let mut extent = scene.window.to_f64();
    for (idx, latt) in scene.lattices.iter().enumerate() {
        let mut gammas = enumerate_with_limit(latt, &window_box, DEFAULT_MAX_CELLS)?.images;
        gammas.sort();
        let color = &scene.colors[idx];
        for g in gammas {
            let pts: Vec<String> = corners
                .iter()
                .map(|c| {
                    let x = &g[0] + &c[0];
                    let y = -(&g[1] + &c[1]);
                    extent = extent.max(x.to_f64().abs()).max(y.to_f64().abs());
                    format!("{},{}", decimal(&x), decimal(&y))
                })
                .collect();
            shapes.push(format!(
                "  <polygon data-lattice=\"{}\" data-gamma=\"{},{}\" points=\"{}\" fill=\"{color}\" fill-opacity=\"{}\" stroke=\"{color}\" stroke-width=\"0.02\"/>",
                idx + 1,
                g[0],
                g[1],
                pts.join(" "),
                scene.fill_opacity,
            ));
        }
    }

    let margin = extent.ceil() + 0.5;
    let e = decimal_f64(margin);
    let w = decimal(&scene.window);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-{e} -{e} {0} {0}\">\n",
        decimal_f64(2.0 * margin)
    ));
    out.push_str(&format!(
        "  <rect x=\"-{w}\" y=\"-{w}\" width=\"{0}\" height=\"{0}\" fill=\"none\" stroke=\"#888888\" stroke-width=\"0.01\" stroke-dasharray=\"0.05\"/>\n",
        decimal(&(&scene.window + &scene.window))
    ));
    for s in shapes {
        out.push_str(&s);
        out.push('\n');
    }
    out.push_str("  <circle cx=\"0\" cy=\"0\" r=\"0.05\" fill=\"#000000\"/>\n");
    out.push_str("</svg>\n");
    Ok(out)
}

#[derive(Parser, Debug)]
#[command(name = "latpair", version, about = "Exact good-pair lattice toolkit")]
struct Cli {
    /// Radicand of the quadratic field; 0 for rational input.
    #[arg(long, global = true, default_value_t = 0)]
    radicand: u64,
    /// Cell limit for lattice-point enumeration.
    #[arg(long, global = true, env = "LATPAIR_MAX_CELLS", default_value_t = DEFAULT_MAX_CELLS)]
    max_cells: u64,
    /// Machine-readable output for commands that default to plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Pretty-print JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a witness N against a pair of lattices.
    CheckWitness {
        #[arg(long)]
        pair: String,
        #[arg(long)]
        witness: String,
        #[arg(long)]
        all_failures: bool,
        /// Also list the lattice points on the boundary of N[-1,1]^d.
        #[arg(long)]
        boundary: bool,
    },
    /// Check that N[0,1)^d is a fundamental domain of one lattice.
    CheckSingle {
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        witness: String,
    },
    /// Build a good pair from one of the constructive families.
    Construct(ConstructArgs),
    /// List the lattice points B k inside N(-1,1)^d, N[-1,1]^d or N[0,1)^d.
    Enumerate {
        #[arg(long)]
        lattice: String,
        #[arg(long = "box")]
        bx: String,
        #[arg(long, value_enum, default_value_t = TopologyArg::Open)]
        topology: TopologyArg,
    },
    /// Monte-Carlo tiling check of N[0,1)^d against one lattice.
    VerifyMc {
        #[arg(long)]
        witness: String,
        #[arg(long)]
        lattice: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 97)]
        denbound: i64,
    },
    /// Random search for witnesses of (R(r) Z^2, Z^2) and solvable corner systems.
    NotgoodScan {
        #[arg(long)]
        r: u64,
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Decide whether two bases generate the same lattice.
    EqualLattices {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Render the translates of N[0,1]^2 around the origin as SVG.
    EmitSvg {
        #[arg(long)]
        witness: String,
        /// Lattice basis; may be given twice.
        #[arg(long)]
        lattice: Vec<String>,
        /// Pair JSON, an alternative to --lattice.
        #[arg(long)]
        pair: Option<String>,
        #[arg(long, default_value = "2")]
        window: String,
        #[arg(long, default_value = "#1f77b4")]
        color1: String,
        #[arg(long, default_value = "#d62728")]
        color2: String,
        #[arg(long, default_value_t = 0.15)]
        fill_opacity: f64,
    },
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Cascade parameters, comma-separated.
    #[arg(long)]
    p: Option<String>,
    /// Diagonal parameters, comma-separated; the single m for coprime2.
    #[arg(long)]
    m: Option<String>,
    /// The n for coprime2, or the integral unimodular factor for tensor.
    #[arg(long)]
    n: Option<String>,
    /// Unipotent matrix T.
    #[arg(long)]
    t: Option<String>,
    /// Left unimodular factor.
    #[arg(long = "P")]
    left: Option<String>,
    /// Right unimodular factor.
    #[arg(long = "Q")]
    right: Option<String>,
    /// First summand (constructed pair JSON) for direct-sum.
    #[arg(long)]
    a: Option<String>,
    /// Second summand for direct-sum.
    #[arg(long)]
    b: Option<String>,
    /// Base pair for tensor.
    #[arg(long)]
    base: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Unipotent,
    Cascade,
    Diagonal,
    Coprime2,
    DirectSum,
    Tensor,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TopologyArg {
    Open,
    Closed,
    HalfOpen,
}

impl From<TopologyArg> for Topology {
    fn from(t: TopologyArg) -> Self {
        match t {
            TopologyArg::Open => Topology::OpenPm1,
            TopologyArg::Closed => Topology::ClosedPm1,
            TopologyArg::HalfOpen => Topology::HalfOpen01,
        }
    }
}

/// File contents if `arg` names an existing file, otherwise `arg` itself.
fn load_text(arg: &str) -> Result<String> {
    let path = Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn load_matrix(arg: &str, radicand: u64) -> Result<Matrix> {
    parse_matrix(&load_text(arg)?, radicand)
}

fn parse_list(text: &str, what: &str) -> Result<Vec<Scalar>> {
    text.split(',')
        .enumerate()
        .map(|(i, s)| {
            s.parse()
                .map_err(|e: String| Error::InvalidArgument(format!("{what} entry {}: {e}", i + 1)))
        })
        .collect()
}

fn parse_int(text: &str, what: &str) -> Result<i64> {
    text.trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("{what} must be an integer, got {text:?}")))
}

impl ConstructArgs {
    fn validate(&self) -> Result<()> {
        let given = [
            ("p", self.p.is_some()),
            ("m", self.m.is_some()),
            ("n", self.n.is_some()),
            ("t", self.t.is_some()),
            ("P", self.left.is_some()),
            ("Q", self.right.is_some()),
            ("a", self.a.is_some()),
            ("b", self.b.is_some()),
            ("base", self.base.is_some()),
        ];
        let (required, optional): (&[&str], &[&str]) = match self.family {
            FamilyArg::Unipotent => (&["t"], &["P", "Q"]),
            FamilyArg::Cascade => (&["p"], &["P", "Q"]),
            FamilyArg::Diagonal => (&["m"], &["P", "Q"]),
            FamilyArg::Coprime2 => (&["m", "n"], &["P", "Q"]),
            FamilyArg::DirectSum => (&["a", "b"], &[]),
            FamilyArg::Tensor => (&["base", "n"], &[]),
        };
        for (name, present) in given {
            if present && !required.contains(&name) && !optional.contains(&name) {
                return Err(Error::InvalidArgument(format!(
                    "--{name} is not used by family {:?}",
                    self.family
                )));
            }
        }
        for (name, present) in given {
            if !present && required.contains(&name) {
                return Err(Error::InvalidArgument(format!(
                    "family {:?} requires --{name}",
                    self.family
                )));
            }
        }
        Ok(())
    }

    fn run(&self, radicand: u64) -> Result<ConstructedPair> {
        self.validate()?;
        let opt = |v: &Option<String>| v.as_deref().map(|s| load_matrix(s, radicand)).transpose();
        let (left, right) = (opt(&self.left)?, opt(&self.right)?);
        let req = |v: &Option<String>| v.clone().expect("validated");
        match self.family {
            FamilyArg::Unipotent => {
                let t = load_matrix(&req(&self.t), radicand)?;
                let d = t.dim();
                let left = left.unwrap_or_else(|| Matrix::identity(d));
                let right = right.unwrap_or_else(|| Matrix::identity(d));
                unipotent_pair(&t, &left, &right)
            }
            FamilyArg::Cascade => {
                let p = parse_list(&req(&self.p), "p")?
                    .into_iter()
                    .map(|x| if radicand == 0 { x } else { x.in_field(radicand) })
                    .collect();
                cascade_pair(&CascadeParams { p, left, right })
            }
            FamilyArg::Diagonal => {
                let m = req(&self.m)
                    .split(',')
                    .map(|s| parse_int(s, "m"))
                    .collect::<Result<_>>()?;
                diagonal_pair(&DiagParams { m, left, right })
            }
            FamilyArg::Coprime2 => {
                let m = parse_int(&req(&self.m), "m")?;
                let n = parse_int(&req(&self.n), "n")?;
                coprime_pair(&CoprimeParams { m, n, left, right })
            }
            FamilyArg::DirectSum => {
                let a = parse_constructed(&load_text(&req(&self.a))?, radicand)?;
                let b = parse_constructed(&load_text(&req(&self.b))?, radicand)?;
                direct_sum_pair(&a, &b)
            }
            FamilyArg::Tensor => {
                let base = parse_constructed(&load_text(&req(&self.base))?, radicand)?;
                let n = load_matrix(&req(&self.n), radicand)?;
                tensor_pair(&base, &n)
            }
        }
    }
}

struct Printer<'a> {
    out: &'a mut dyn Write,
    pretty: bool,
}

impl Printer<'_> {
    fn json<T: Serialize>(&mut self, value: &T) -> Result<()> {
        let text = if self.pretty {
            serde_json::to_string_pretty(value)
        } else {
            serde_json::to_string(value)
        }
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        self.line(&text)
    }

    fn line(&mut self, text: &str) -> Result<()> {
        writeln!(self.out, "{text}").map_err(|e| Error::InvalidArgument(e.to_string()))
    }

    fn report(&mut self, report: &CheckReport) -> Result<i32> {
        self.json(report)?;
        Ok(if report.passed() { 0 } else { 1 })
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let r = cli.radicand;
    let max_cells = cli.max_cells;
    let as_json = cli.json;
    let mut p = Printer { out, pretty: cli.pretty };
    match cli.command {
        Command::CheckWitness { pair, witness, all_failures, boundary } => {
            let pair = parse_pair(&load_text(&pair)?, r)?;
            let w = WitnessCandidate::new(load_matrix(&witness, r)?);
            let report = if boundary {
                if all_failures {
                    return Err(Error::InvalidArgument(
                        "--boundary and --all-failures are exclusive".into(),
                    ));
                }
                minkowski_boundary_report_with(&w, &pair, max_cells)?
            } else {
                check_witness_with(&w, &pair, CheckOptions { max_cells, all_failures })?
            };
            p.report(&report)
        }
        Command::CheckSingle { lattice, witness } => {
            let latt = Lattice::new(load_matrix(&lattice, r)?)?;
            let w = WitnessCandidate::new(load_matrix(&witness, r)?);
            p.report(&check_single_with(&w, &latt, max_cells)?)
        }
        Command::Construct(args) => {
            let built = args.run(r)?;
            p.json(&built)?;
            Ok(0)
        }
        Command::Enumerate { lattice, bx, topology } => {
            let latt = Lattice::new(load_matrix(&lattice, r)?)?;
            let bx = Parallelepiped::new(load_matrix(&bx, r)?, topology.into())?;
            let res = enumerate_with_limit(&latt, &bx, max_cells)?;
            if as_json {
                p.json(&res)?;
            } else {
                for k in &res.points {
                    p.line(&k.to_string())?;
                }
            }
            Ok(0)
        }
        Command::VerifyMc { witness, lattice, samples, seed, denbound } => {
            let w = WitnessCandidate::new(load_matrix(&witness, r)?);
            let latt = Lattice::new(load_matrix(&lattice, r)?)?;
            let cfg = McConfig { max_cells, ..McConfig::new(samples, seed, denbound) };
            p.report(&mc_tiling_check(&w, &latt, &cfg)?)
        }
        Command::NotgoodScan { r: field, count, seed } => {
            let report = notgood_scan_with(field, count, seed, max_cells)?;
            p.json(&report)?;
            Ok(if report.clean() { 0 } else { 1 })
        }
        Command::EqualLattices { a, b } => {
            let a = Lattice::new(load_matrix(&a, r)?)?;
            let b = Lattice::new(load_matrix(&b, r)?)?;
            let equal = lattices_equal(&a, &b);
            if as_json {
                p.json(&serde_json::json!({ "equal": equal }))?;
            } else {
                p.line(if equal { "true" } else { "false" })?;
            }
            Ok(if equal { 0 } else { 1 })
        }
        Command::EmitSvg {
            witness,
            lattice,
            pair,
            window,
            color1,
            color2,
            fill_opacity,
        } => {
            let mut lattices = lattice
                .iter()
                .map(|l| Lattice::new(load_matrix(l, r)?))
                .collect::<Result<Vec<_>>>()?;
            if let Some(pair) = pair {
                if !lattices.is_empty() {
                    return Err(Error::InvalidArgument(
                        "--pair and --lattice are exclusive".into(),
                    ));
                }
                let pair = parse_pair(&load_text(&pair)?, r)?;
                lattices = vec![pair.gamma1().clone(), pair.gamma2().clone()];
            }
            if lattices.is_empty() {
                return Err(Error::InvalidArgument("give --lattice or --pair".into()));
            }
            let window: Scalar = window
                .parse()
                .map_err(|e: String| Error::InvalidArgument(format!("window: {e}")))?;
            let scene = SvgScene {
                witness: load_matrix(&witness, r)?,
                lattices,
                window,
                colors: [color1, color2],
                fill_opacity,
            };
            let svg = emit_svg(&scene)?;
            write!(p.out, "{svg}").map_err(|e| Error::InvalidArgument(e.to_string()))?;
            Ok(0)
        }
    }
}

/// Runs the CLI and returns the exit code: 0 pass, 1 fail, 2 error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
