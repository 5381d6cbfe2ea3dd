use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use nadegen::berkovich::{BerkPoint, Disk, P1Label};
use nadegen::complexverify::{convergence_table, ConvergenceTable, SampleConfig};
use nadegen::dynamics::{
    canonical_measure_approx, julia_span, quadratic, reduction_class, RationalMapK,
};
use nadegen::json as wire;
use nadegen::limits::{limit_measure, node_mass_check, s_membership, span_vs_s_check, LimitConfig};
use nadegen::puiseux::{Exponent, PuiseuxSeries};
use nadegen::sncmodel::{snc_witness, ReductionTarget, SncModel};
use nadegen::Error;

const EXIT_IO: u8 = 1;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  I/O error (unreadable input, unwritable output)
  2  usage error
  3  malformed input (JSON, series, point, map or model)
  4  invalid model (empty, duplicate divisor, bad multiplicity, not a contraction)
  5  divisor set is not snc (the witness is printed)
  6  solver failure (ramification cap, no convergence, complex root polishing)
  7  precondition failure (potentially good reduction, exceptional seed, unsupported map)
  8  bad configuration (depth, eps, t list, overlapping balls)
  9  other internal error

Errors are written to stderr as a JSON object {\"error\": {...}}.";

#[derive(Parser, Debug)]
#[command(
    name = "nadegen",
    version,
    about = "Limits of canonical measures of degenerating rational maps",
    after_help = EXIT_CODES
)]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate, print or draw a model.
    Model {
        #[command(subcommand)]
        action: ModelAction,
    },
    /// Backward orbit of a seed and its span in the Berkovich line.
    Measure(MeasureArgs),
    /// Limit measure on the central fiber of a model.
    Limit(LimitArgs),
    /// Membership in the set of points whose minimal model carries several atoms.
    SCheck(SCheckArgs),
    /// Compare complex measures at small t with a predicted limit.
    Verify(VerifyArgs),
    /// Recompute every artifact of the family (z^2 + 1)/t.
    ExampleQuadratic(ExampleArgs),
}

#[derive(Subcommand, Debug)]
enum ModelAction {
    /// Check the snc condition and multiplicities.
    Validate { model: PathBuf },
    /// Print the canonical form with adjacency.
    Show { model: PathBuf },
    /// Dual graph of the central fiber in DOT.
    Dot { model: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Args, Debug, Clone)]
struct MapArgs {
    /// Map JSON file, or `quadratic` for (z^2 + 1)/t.
    #[arg(long, default_value = "quadratic")]
    map: String,
}

#[derive(Args, Debug, Clone)]
struct SampleArgs {
    /// Levels of the backward orbit.
    #[arg(long, default_value_t = 4)]
    depth: usize,
    /// Absolute precision of every preimage, as an integer or a fraction `p/q`.
    #[arg(long)]
    precision: Option<String>,
    /// Seed point: a real number or a point in JSON.
    #[arg(long)]
    seed: Option<String>,
    /// Seed of the subsampling generator.
    #[arg(long)]
    rng_seed: Option<u64>,
    /// Leaves kept per level before subsampling.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args, Debug)]
struct MeasureArgs {
    #[command(flatten)]
    map: MapArgs,
    #[command(flatten)]
    sample: SampleArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct LimitArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Model JSON file, `trivial`, or `tower:N`.
    #[arg(long, default_value = "trivial")]
    model: String,
    #[command(flatten)]
    sample: SampleArgs,
    /// Also recompute node and smooth atoms from minimal models.
    #[arg(long)]
    check_nodes: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct SCheckArgs {
    #[command(flatten)]
    map: MapArgs,
    /// JSON array of type-2 points.
    #[arg(long)]
    candidates: Option<PathBuf>,
    /// Comma separated sign words such as `,+,+-`; adds the branch points of
    /// (z^2 + 1)/t (the empty word is the Gauss point).
    #[arg(long)]
    eta: Option<String>,
    #[command(flatten)]
    sample: SampleArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Model JSON file, `trivial`, or `tower:N`.
    #[arg(long, default_value = "trivial")]
    model: String,
    /// Parameters of decreasing modulus: `re` or `re:im`, comma separated.
    #[arg(long, default_value = "0.1,0.01,0.001")]
    t: String,
    /// Radius of the comparison balls in each chart.
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
    /// Levels of the complex backward orbit.
    #[arg(long, default_value_t = 12)]
    depth: usize,
    /// Depth of the non-archimedean sample that predicts the limit.
    #[arg(long, default_value_t = 4)]
    limit_depth: usize,
    /// Complex seed: `re` or `re:im`.
    #[arg(long, default_value = "2")]
    seed: String,
    #[arg(long)]
    rng_seed: Option<u64>,
    #[arg(long)]
    cap: Option<usize>,
    /// Slack allowed when checking that discrepancies shrink with |t|.
    #[arg(long, default_value_t = 0.0)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct ExampleArgs {
    /// Height of the model tower.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Also write every artifact into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Levels of the complex backward orbit.
    #[arg(long, default_value_t = 12)]
    complex_depth: usize,
}

/// Failures carry the exit code they map to.
struct Failure {
    code: u8,
    value: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let mut value = json!({"code": e.exit_code(), "message": e.to_string()});
        if let Error::SncViolation { witness } = &e {
            value["witness"] = json!(witness);
        }
        Failure {
            code: e.exit_code() as u8,
            value,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        if let Some(inner) = e.downcast_ref::<Error>() {
            return Failure::from(inner.clone());
        }
        Failure {
            code: EXIT_IO,
            value: json!({"code": EXIT_IO, "message": format!("{e:#}")}),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("{}", json!({"error": {"code": 8, "message": e.to_string()}}));
            return ExitCode::from(8);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", json!({ "error": f.value }));
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome<()> {
    let text = match &cli.command {
        Command::Model { action } => cmd_model(action)?,
        Command::Measure(a) => cmd_measure(a)?,
        Command::Limit(a) => cmd_limit(a)?,
        Command::SCheck(a) => cmd_s_check(a)?,
        Command::Verify(a) => cmd_verify(a)?,
        Command::ExampleQuadratic(a) => cmd_example_quadratic(a)?,
    };
    match &cli.output {
        Some(path) => write_file(path, &text)?,
        None => io::stdout()
            .write_all(text.as_bytes())
            .context("writing to stdout")?,
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn read_json(path: &Path) -> Outcome<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(wire::parse(&text)?)
}

fn load_map(arg: &str) -> Outcome<RationalMapK> {
    if arg == "quadratic" {
        return Ok(quadratic::example_map());
    }
    Ok(wire::map_from_json(&read_json(Path::new(arg))?)?)
}

fn load_model(arg: &str) -> Outcome<SncModel> {
    if arg == "trivial" {
        return Ok(SncModel::trivial());
    }
    if let Some(n) = arg.strip_prefix("tower:") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::Config(format!("tower height {n:?} is not a number")))?;
        return Ok(quadratic::tower_model(n)?);
    }
    Ok(wire::model_from_json(&read_json(Path::new(arg))?)?)
}

fn parse_rational(s: &str) -> Result<Exponent, Error> {
    let bad = || Error::Config(format!("precision {s:?} is not a positive rational"));
    let q = match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d <= 0 {
                return Err(bad());
            }
            Exponent::new(n, d)
        }
        None => Exponent::from_integer(s.trim().parse().map_err(|_| bad())?),
    };
    if q <= Exponent::from_integer(0) {
        return Err(bad());
    }
    Ok(q)
}

fn parse_complex(s: &str) -> Result<Complex64, Error> {
    let bad = || Error::Config(format!("{s:?} is not a complex number (use re or re:im)"));
    let (re, im) = s.split_once(':').unwrap_or((s, "0"));
    Ok(Complex64::new(
        re.trim().parse().map_err(|_| bad())?,
        im.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_seed(s: &str) -> Outcome<BerkPoint> {
    if let Ok(x) = s.trim().parse::<f64>() {
        return Ok(BerkPoint::Classical(PuiseuxSeries::real(x)));
    }
    Ok(wire::point_from_json(&wire::parse(s)?)?)
}

fn limit_config(a: &SampleArgs) -> Outcome<LimitConfig> {
    if a.depth == 0 {
        return Err(Error::Config("depth must be at least 1".into()).into());
    }
    let mut cfg = LimitConfig::with_depth(a.depth);
    if let Some(p) = &a.precision {
        cfg.measure.precision = parse_rational(p)?;
    }
    if let Some(s) = &a.seed {
        cfg.seed = parse_seed(s)?;
    }
    if let Some(r) = a.rng_seed {
        cfg.measure.rng_seed = r;
    }
    if let Some(c) = a.cap {
        if c == 0 {
            return Err(Error::Config("cap must be at least 1".into()).into());
        }
        cfg.measure.cap = c;
    }
    Ok(cfg)
}

fn cmd_model(action: &ModelAction) -> Outcome<String> {
    let (ModelAction::Validate { model } | ModelAction::Show { model } | ModelAction::Dot { model }) = action;
    let v = read_json(model)?;
    let x = match wire::model_from_json(&v) {
        Ok(x) => x,
        Err(Error::SncViolation { witness }) => {
            // report the witness as a point as well as in words
            let pts: Vec<BerkPoint> = v["divisors"]
                .as_array()
                .into_iter()
                .flatten()
                .filter_map(|d| wire::point_from_json(&d["eta"]).ok())
                .collect();
            let mut f = Failure::from(Error::SncViolation { witness });
            if let Some(w) = snc_witness(&pts) {
                f.value["witness_point"] = wire::point_to_json(&w);
            }
            return Err(f);
        }
        Err(e) => return Err(e.into()),
    };
    Ok(match action {
        ModelAction::Validate { .. } => pretty(&json!({
            "valid": true,
            "components": x.len(),
            "nodes": x.adjacency().len(),
        })),
        ModelAction::Show { .. } => pretty(&model_summary(&x)),
        ModelAction::Dot { .. } => x.dual_graph_dot(),
    })
}

fn model_summary(x: &SncModel) -> Value {
    let mut v = wire::model_to_json(x);
    let nodes: Vec<Value> = x
        .adjacency()
        .iter()
        .map(|&(i, j)| {
            json!({
                "components": [x.name(i), x.name(j)],
                "labels": [
                    wire::label_to_json(&x.node_coordinate(i, j)),
                    wire::label_to_json(&x.node_coordinate(j, i)),
                ],
            })
        })
        .collect();
    v["nodes"] = Value::Array(nodes);
    v
}

fn cmd_measure(a: &MeasureArgs) -> Outcome<String> {
    let f = load_map(&a.map.map)?;
    let cfg = limit_config(&a.sample)?;
    let sample = canonical_measure_approx(&f, &cfg.seed, &cfg.measure)?;
    let span = julia_span(&sample)?;
    Ok(match a.format {
        Format::Json => pretty(&json!({
            "sample": wire::sample_to_json(&sample),
            "span": wire::tree_to_json(&span),
        })),
        Format::Dot => {
            let branch: Vec<BerkPoint> = span
                .branch_vertices()
                .into_iter()
                .map(|v| span.vertices()[v].clone())
                .collect();
            span.to_dot(&|p| branch.contains(p))
        }
        Format::Csv => return Err(Error::Config("measure supports json and dot".into()).into()),
    })
}

fn target_columns(t: &ReductionTarget, x: &SncModel) -> [String; 3] {
    let label = |l: &P1Label| match l {
        P1Label::Finite(_) => wire::label_to_json(l).to_string(),
        P1Label::Infinity => "inf".to_string(),
    };
    match t {
        ReductionTarget::Generic(i) => ["generic".into(), x.name(*i).into(), String::new()],
        ReductionTarget::Smooth(i, l) => ["smooth".into(), x.name(*i).into(), label(l)],
        ReductionTarget::Node(i, j) => [
            "node".into(),
            format!("{}|{}", x.name(*i), x.name(*j)),
            format!("{}|{}", label(&x.node_coordinate(*i, *j)), label(&x.node_coordinate(*j, *i))),
        ],
    }
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn cmd_limit(a: &LimitArgs) -> Outcome<String> {
    let f = load_map(&a.map.map)?;
    let x = load_model(&a.model)?;
    let cfg = limit_config(&a.sample)?;
    let rho = limit_measure(&f, &x, &cfg)?;
    match a.format {
        Format::Json => {
            let mut out = json!({"measure": wire::measure_to_json(&rho, &x)});
            if a.check_nodes {
                let report = node_mass_check(&f, &x, &cfg)?;
                out["node_check"] = json!({
                    "all_exact": report.all_exact(),
                    "report": serde_json::to_value(&report).map_err(|e| Error::Internal(e.to_string()))?,
                });
            }
            Ok(pretty(&out))
        }
        Format::Csv => {
            let rows = rho.atoms.iter().map(|atom| {
                let [kind, comp, label] = target_columns(&atom.target, &x);
                vec![kind, comp, label, atom.mass.numer().to_string(), atom.mass.denom().to_string()]
            });
            Ok(csv_string(&["kind", "component", "label", "mass_num", "mass_den"], rows)?)
        }
        Format::Dot => Ok(x.dual_graph_dot()),
    }
}

fn candidates(a: &SCheckArgs) -> Outcome<Vec<Disk>> {
    let mut out = Vec::new();
    if let Some(path) = &a.candidates {
        let v = read_json(path)?;
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("candidates: expected an array of points".into()))?;
        for p in arr {
            out.push(wire::disk_from_json(p)?);
        }
    }
    if let Some(words) = &a.eta {
        for w in words.split(',') {
            out.push(quadratic::eta(&quadratic::Sign::parse_word(w.trim())?)?);
        }
    }
    if out.is_empty() {
        return Err(Error::Config("give --candidates or --eta".into()).into());
    }
    Ok(out)
}

fn cmd_s_check(a: &SCheckArgs) -> Outcome<String> {
    let f = load_map(&a.map.map)?;
    let cfg = limit_config(&a.sample)?;
    let zs = candidates(a)?;
    let report = span_vs_s_check(&f, &cfg, &zs)?;
    match a.format {
        Format::Json => {
            let mut rows = Vec::new();
            for (z, row) in zs.iter().zip(&report.rows) {
                let s = s_membership(&f, z, &cfg)?;
                rows.push(json!({
                    "candidate": wire::disk_to_json(z),
                    "in_s": row.in_s,
                    "on_span": row.on_span,
                    "atoms": s.atoms,
                    "resolution": [s.resolution.0, s.resolution.1],
                }));
            }
            Ok(pretty(&json!({
                "rows": rows,
                "agreement": report.agreement,
                "disagreements": report.disagreements,
                "depth": cfg.measure.depth,
                "rng_seed": cfg.measure.rng_seed,
            })))
        }
        Format::Csv => {
            let rows = report
                .rows
                .iter()
                .map(|r| vec![r.candidate.clone(), r.in_s.to_string(), r.on_span.to_string()]);
            Ok(csv_string(&["candidate", "in_s", "on_span"], rows)?)
        }
        Format::Dot => Err(Error::Config("s-check supports json and csv".into()).into()),
    }
}

fn parse_ts(s: &str) -> Result<Vec<Complex64>, Error> {
    let ts: Vec<Complex64> = s.split(',').map(parse_complex).collect::<Result<_, _>>()?;
    if ts.iter().any(|t| t.norm() == 0.0) {
        return Err(Error::Config("t = 0 is the degenerate fiber".into()));
    }
    Ok(ts)
}

fn table_csv(table: &ConvergenceTable) -> anyhow::Result<String> {
    let rows = table.rows.iter().map(|r| {
        vec![
            r.t[0].to_string(),
            r.t[1].to_string(),
            r.atom.clone(),
            r.predicted.to_string(),
            r.measured.to_string(),
            r.discrepancy.to_string(),
        ]
    });
    csv_string(&["t_re", "t_im", "atom", "predicted", "measured", "discrepancy"], rows)
}

struct Verification {
    table: ConvergenceTable,
    report: Value,
}

#[allow(clippy::too_many_arguments)]
fn verify(
    f: &RationalMapK,
    x: &SncModel,
    ts: &[Complex64],
    eps: f64,
    limit_depth: usize,
    w0: Complex64,
    scfg: &SampleConfig,
    tolerance: f64,
) -> Outcome<Verification> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Config("eps must be positive".into()).into());
    }
    if scfg.depth == 0 || limit_depth == 0 {
        return Err(Error::Config("depth must be at least 1".into()).into());
    }
    let mut lcfg = LimitConfig::with_depth(limit_depth);
    lcfg.measure.rng_seed = scfg.rng_seed;
    let rho = limit_measure(f, x, &lcfg)?;
    let table = convergence_table(f, x, &rho, ts, Some(w0), scfg, eps, tolerance)?;
    let report = json!({
        "predicted": wire::measure_to_json(&rho, x),
        "table": serde_json::to_value(&table).map_err(|e| Error::Internal(e.to_string()))?,
        "depth": scfg.depth,
        "cap": scfg.cap,
        "eps": eps,
        "seed": [w0.re, w0.im],
        "rng_seed": scfg.rng_seed,
        "branch": "principal",
    });
    Ok(Verification { table, report })
}

fn cmd_verify(a: &VerifyArgs) -> Outcome<String> {
    let f = load_map(&a.map.map)?;
    let x = load_model(&a.model)?;
    let ts = parse_ts(&a.t)?;
    let w0 = parse_complex(&a.seed)?;
    let mut scfg = SampleConfig::with_depth(a.depth);
    if let Some(r) = a.rng_seed {
        scfg.rng_seed = r;
    }
    if let Some(c) = a.cap {
        scfg.cap = c.max(1);
    }
    let v = verify(&f, &x, &ts, a.eps, a.limit_depth, w0, &scfg, a.tolerance)?;
    match a.format {
        Format::Json => Ok(pretty(&v.report)),
        Format::Csv => Ok(table_csv(&v.table)?),
        Format::Dot => Err(Error::Config("verify supports json and csv".into()).into()),
    }
}

/// Type-2 points near the tree of the example map that lie off its span.
fn off_span_candidates() -> Vec<Disk> {
    let z = |q: i64| Disk::new(&PuiseuxSeries::zero(), Exponent::from_integer(q));
    vec![
        z(1),
        z(-1),
        Disk::new(&PuiseuxSeries::real(1.0), Exponent::from_integer(1)),
        Disk::new(&PuiseuxSeries::real(-1.0), Exponent::from_integer(1)),
        Disk::new(&quadratic::fixed_point(quadratic::Sign::Plus), Exponent::new(1, 2)),
    ]
}

fn cmd_example_quadratic(a: &ExampleArgs) -> Outcome<String> {
    let f = quadratic::example_map();
    let mut files: Vec<(String, String)> = vec![("map.json".into(), pretty(&wire::map_to_json(&f)))];

    let mut towers = Vec::new();
    let mut top = Value::Null;
    for k in 0..=a.n {
        let x = quadratic::tower_model(k)?;
        let rho = limit_measure(&f, &x, &LimitConfig::with_depth(k + 2))?;
        let measure = wire::measure_to_json(&rho, &x);
        files.push((format!("model_X{k}.json"), pretty(&model_summary(&x))));
        files.push((format!("limit_X{k}.json"), pretty(&measure)));
        files.push((format!("dual_X{k}.dot"), x.dual_graph_dot()));
        let masses: Vec<Value> = {
            let mut ms: Vec<_> = rho.atoms.iter().map(|a| a.mass).collect();
            ms.sort();
            ms.dedup();
            ms.into_iter().map(wire::mass_json).collect()
        };
        towers.push(json!({
            "k": k,
            "components": x.len(),
            "atoms": rho.len(),
            "masses": masses,
        }));
        if k == a.n {
            top = measure;
        }
    }
    let x = quadratic::tower_model(a.n)?;
    let nodes = node_mass_check(&f, &x, &LimitConfig::with_depth(a.n + 2))?;

    let span_depth = (a.n + 2).max(5);
    let cfg = LimitConfig::with_depth(span_depth);
    let sample = canonical_measure_approx(&f, &cfg.seed, &cfg.measure)?;
    let span = julia_span(&sample)?;
    files.push(("span.dot".into(), {
        let etas: Vec<BerkPoint> = x.divisors().iter().map(|d| BerkPoint::Disk(d.eta.clone())).collect();
        span.to_dot(&|p| etas.contains(p))
    }));
    let branch: Vec<Disk> = (0..=a.n)
        .flat_map(quadratic::words)
        .map(|w| quadratic::eta(&w))
        .collect::<Result<_, _>>()?;
    let mut zs = branch.clone();
    zs.extend(off_span_candidates());
    let s = span_vs_s_check(&f, &cfg, &zs)?;
    let s_value = serde_json::to_value(&s).map_err(|e| Error::Internal(e.to_string()))?;
    files.push(("s_check.json".into(), pretty(&s_value)));

    let ts = [1e-1, 1e-2, 1e-3].map(|r| Complex64::new(r, 0.0));
    let v = verify(
        &f,
        &SncModel::trivial(),
        &ts,
        0.25,
        4,
        Complex64::new(2.0, 0.0),
        &SampleConfig::with_depth(a.complex_depth),
        0.0,
    )?;
    files.push(("convergence.csv".into(), table_csv(&v.table)?));
    files.push(("verify.json".into(), pretty(&v.report)));

    let summary = json!({
        "map": "(z^2 + 1)/t",
        "reduction": reduction_class(&f),
        "towers": towers,
        "measure": top,
        "node_check": {"all_exact": nodes.all_exact(), "nodes": nodes.nodes.len()},
        "s_check": {
            "branch_points": branch.len(),
            "off_span": zs.len() - branch.len(),
            "agreement": s.agreement,
        },
        "verify": {
            "max_by_t": v.table.max_by_t,
            "non_increasing": v.table.non_increasing,
        },
    });
    let text = pretty(&summary);
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        files.push(("summary.json".into(), text.clone()));
        for (name, body) in &files {
            write_file(&dir.join(name), body)?;
        }
    }
    Ok(text)
}
