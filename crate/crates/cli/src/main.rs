mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use horolab::dynamics::{denjoy_wolff, iterate, HolomorphicMap, DEFAULT_HORIZON};
use horolab::ends::build_end_tree_with;
use horolab::geodesy::{geodesic, quasi_geodesic, PathSample};
use horolab::horofunction::{
    approach_sequence, estimate_horofunction, fiber_sample, horoball_contains, horosphere_membership,
    HorosphereFamily, Membership, DEFAULT_TOL,
};
use horolab::suites::{verify, worked_examples, VerifyReport, NORMALIZATION};
use horolab::{DistanceEngine, HoroError, Point};
use serde::Serialize;

use config::{ConfigError, RunConfig};

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug)]
#[command(name = "horolab", version, about = "Kobayashi distances, horofunctions, ends and iteration")]
struct Cli {
    /// JSON run configuration; built-in disk defaults when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for artifacts; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Horofunction convergence tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Iteration horizon for `orbit` and `denjoy-wolff`.
    #[arg(long, global = true, default_value_t = DEFAULT_HORIZON)]
    horizon: usize,
    /// Raster side for `region`; lattice cells per unit for `ends` and the chain engine.
    #[arg(long, global = true)]
    resolution: Option<usize>,
    /// Run the bundled worked examples against their oracles.
    #[arg(long)]
    worked_examples: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pairwise distances between the configured points.
    Dist,
    /// Geodesic (or quasi-geodesic with `epsilon`) between the first two points.
    Geodesic,
    /// Horofunction estimate on the probe grid plus certificate.
    Horofun,
    /// Horoball and horosphere raster of a planar domain.
    Region,
    /// Sampled fiber over the target with a distinctness matrix.
    Fibers,
    /// End tree of the domain.
    Ends,
    /// Orbit of the first seed under the configured map.
    Orbit,
    /// Denjoy–Wolff report for the configured map and seeds.
    DenjoyWolff,
    /// Run an invariant suite, or `all`.
    Verify { suite: String },
}

enum Failure {
    Config(String),
    Numeric(String),
    Verification,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<HoroError> for Failure {
    fn from(e: HoroError) -> Self {
        if e.is_input_error() {
            Failure::Config(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Config(format!("output: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Config(format!("output: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Numeric(format!("serialization: {e}"))
    }
}

type Outcome = Result<(), Failure>;

/// Comment header shared by every artifact.
struct Header {
    lines: Vec<String>,
}

impl Header {
    fn new(cli: &Cli, command: &str, engine: Option<&DistanceEngine>) -> Self {
        let mut lines = vec![
            format!("horolab {command}"),
            format!("seed = {}", cli.seed),
            format!("normalization = {NORMALIZATION}"),
            format!("tol = {}", cli.tol),
            format!("horizon = {}", cli.horizon),
            format!(
                "resolution = {}",
                cli.resolution.map_or("default".to_string(), |r| r.to_string())
            ),
        ];
        if let Some(e) = engine {
            lines.push(format!("domain = {}", e.domain().name()));
            lines.push(format!("engine = {}", e.mode().label()));
        }
        Self { lines }
    }

    fn push(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    fn render(&self) -> String {
        self.lines.iter().map(|l| format!("# {l}\n")).collect()
    }
}

fn emit(cli: &Cli, file: &str, body: &str) -> Outcome {
    match &cli.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(file), body)?;
        }
        None => print!("{body}"),
    }
    Ok(())
}

fn csv_body(header: &Header, columns: &[String], rows: Vec<Vec<String>>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let data = w.into_inner().map_err(|e| Failure::Config(format!("output: {e}")))?;
    Ok(header.render() + &String::from_utf8_lossy(&data))
}

fn json_body<T: Serialize>(header: &Header, value: &T) -> Result<String, Failure> {
    let mut s = header.render();
    s.push_str(&serde_json::to_string_pretty(value)?);
    s.push('\n');
    Ok(s)
}

fn coord_columns(dim: usize) -> Vec<String> {
    (0..dim).flat_map(|i| [format!("re{i}"), format!("im{i}")]).collect()
}

fn coord_cells(p: &Point) -> Vec<String> {
    p.coords().iter().flat_map(|c| [c.re.to_string(), c.im.to_string()]).collect()
}

fn membership_cell(m: Membership) -> String {
    match m {
        Membership::Inside => "true",
        Membership::Outside => "false",
        Membership::Indeterminate => "indeterminate",
    }
    .into()
}

fn cmd_dist(cli: &Cli, cfg: &RunConfig) -> Outcome {
    let engine = cfg.engine(cli.resolution)?;
    let mut header = Header::new(cli, "dist", Some(&engine));
    if engine.is_chain() {
        header.push("chain_approx values are approximate, interval-valued");
    }
    let mut rows = Vec::new();
    for i in 0..cfg.points.len() {
        for j in i + 1..cfg.points.len() {
            let iv = engine.distance_interval(&cfg.points[i], &cfg.points[j])?;
            let d = if iv.lo == iv.hi { iv.lo } else { iv.mid() };
            rows.push(vec![i.to_string(), j.to_string(), d.to_string(), iv.lo.to_string(), iv.hi.to_string()]);
        }
    }
    let cols = ["i", "j", "distance", "lo", "hi"].map(String::from);
    emit(cli, "dist.csv", &csv_body(&header, &cols, rows)?)
}

fn cmd_geodesic(cli: &Cli, cfg: &RunConfig) -> Outcome {
    let engine = cfg.engine(cli.resolution)?;
    let [z, w] = match cfg.points.as_slice() {
        [z, w, ..] => [*z, *w],
        _ => return Err(Failure::Config("geodesic needs two points".into())),
    };
    let path: PathSample = match cfg.epsilon {
        Some(eps) => quasi_geodesic(&engine, &z, &w, eps)?,
        None => geodesic(&engine, &z, &w, cfg.samples)?,
    };
    let mut header = Header::new(cli, "geodesic", Some(&engine));
    header.push(format!("is_geodesic = {}", path.is_geodesic));
    header.push(format!("epsilon = {}", path.epsilon));
    let mut cols = vec!["t".to_string()];
    cols.extend(coord_columns(z.dim()));
    let rows = path
        .params
        .iter()
        .zip(&path.points)
        .map(|(t, p)| std::iter::once(t.to_string()).chain(coord_cells(p)).collect())
        .collect();
    emit(cli, "geodesic.csv", &csv_body(&header, &cols, rows)?)
}

fn cmd_horofun(cli: &Cli, cfg: &RunConfig) -> Outcome {
    let engine = cfg.engine(cli.resolution)?;
    let domain = engine.domain();
    let pole = cfg.pole(domain);
    let target = cfg.target(domain)?;
    let style = cfg.styles.first().cloned().unwrap_or(horolab::horofunction::ApproachStyle::Radial);
    let seq = approach_sequence(domain, &target, &style, cfg.terms)?;
    let est = match estimate_horofunction(&engine, &pole, &seq, &cfg.probes, cli.tol) {
        Ok(e) => e,
        Err(HoroError::Unresolved { estimate, .. }) => *estimate,
        Err(e) => return Err(e.into()),
    };
    let mut header = Header::new(cli, "horofun", Some(&engine));
    header.push(format!("certificate = {}", serde_json::to_string(&est.certificate())?));
    let mut cols = coord_columns(domain.dim());
    cols.extend(["h", "osc"].map(String::from));
    let mut rows = Vec::new();
    for z in &est.probes {
        let mut r = coord_cells(z);
        r.push(est.value(z)?.to_string());
        r.push(est.oscillation_at(z)?.to_string());
        rows.push(r);
    }
    emit(cli, "horofun.csv", &csv_body(&header, &cols, rows)?)?;
    if !est.converged {
        return Err(Failure::Numeric(format!("estimate unresolved (osc {:e})", est.osc)));
    }
    Ok(())
}

fn cmd_region(cli: &Cli, cfg: &RunConfig) -> Outcome {
    let engine = cfg.engine(cli.resolution)?;
    let domain = engine.domain();
    if domain.dim() != 1 {
        return Err(Failure::Config("region rasters planar domains only".into()));
    }
    let pole = cfg.pole(domain);
    let target = cfg.target(domain)?;
    let family = HorosphereFamily::build(&engine, &pole, &target, &cfg.styles, cfg.terms, cli.tol)?;
    let est = &family.estimates[0];
    let window = cfg.window.unwrap_or_else(|| {
        let b = domain.kind().bounding_box();
        [b[0].max(-4.0), b[1].min(4.0), b[2].max(-4.0), b[3].min(4.0)]
    });
    let n = cli.resolution.unwrap_or(101).max(2);
    let mut header = Header::new(cli, "region", Some(&engine));
    header.push(format!("radius = {}", cfg.radius));
    header.push(format!("target = {}", target.describe()));
    header.push(format!("family = {}", family.labels.join("; ")));
    header.push(format!("window = {window:?}"));
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let x = window[0] + (window[1] - window[0]) * i as f64 / (n - 1) as f64;
            let y = window[2] + (window[3] - window[2]) * j as f64 / (n - 1) as f64;
            let z = Point::planar(num_complex::Complex64::new(x, y));
            if !domain.contains(&z)? {
                continue;
            }
            let m = horosphere_membership(&family, &z, cfg.radius)?;
            rows.push(vec![
                x.to_string(),
                y.to_string(),
                est.value(&z)?.to_string(),
                membership_cell(horoball_contains(est, &z, cfg.radius)?),
                membership_cell(m.in_big),
                membership_cell(m.in_small),
            ]);
        }
    }
    let cols = ["x", "y", "h", "in_ball", "in_big", "in_small"].map(String::from);
    emit(cli, "region.csv", &csv_body(&header, &cols, rows)?)
}

fn cmd_fibers(cli: &Cli, cfg: &RunConfig) -> Outcome {
    let engine = cfg.engine(cli.resolution)?;
    let domain = engine.domain();
    let target = cfg.target(domain)?;
    let sample = fiber_sample(&engine, &cfg.pole(domain), &target, &cfg.styles, cfg.terms, cli.tol)?;
    let mut header = Header::new(cli, "fibers", Some(&engine));
    header.push(format!("target = {}", target.describe()));
    header.push("sampled fiber: a finite style set, not the whole fiber");
    emit(cli, "fibers.json", &json_body(&header, &sample)?)
}

fn cmd_ends(cli: &Cli, cfg: &RunConfig) -> Outcome {
    let domain = cfg.domain()?;
    let spacing = cli.resolution.map(|r| 1.0 / r.max(1) as f64);
    let tree = build_end_tree_with(&domain, cfg.max_level, spacing)?;
    let mut header = Header::new(cli, "ends", None);
    header.push(format!("domain = {}", domain.name()));
    header.push(format!("flood fill spacing = {}", tree.resolution));
    emit(cli, "ends.json", &json_body(&header, &tree)?)
}

fn certified_map(cfg: &RunConfig, engine: &DistanceEngine) -> Result<HolomorphicMap, Failure> {
    HolomorphicMap::certify(engine, cfg.map.clone()).map_err(|e| match e {
        HoroError::Certification(m) => Failure::Config(format!("map certification failed: {m}")),
        other => other.into(),
    })
}

fn cmd_orbit(cli: &Cli, cfg: &RunConfig) -> Outcome {
    let engine = cfg.engine(cli.resolution)?;
    let f = certified_map(cfg, &engine)?;
    let seed = cfg.seeds.first().copied().unwrap_or_else(|| engine.domain().anchor());
    let orbit = iterate(&engine, &f, &seed, cli.horizon)?;
    let mut header = Header::new(cli, "orbit", Some(&engine));
    header.push(format!("map = {}", f.expr.describe()));
    header.push(format!("self_map_margin = {}", f.self_map_margin));
    header.push(format!("classification = {}", serde_json::to_string(&orbit.classification)?));
    if let Some(n) = orbit.boundary_hit {
        header.push(format!("iterate {n} rounds onto the boundary"));
    }
    let mut cols = vec!["n".to_string()];
    cols.extend(coord_columns(seed.dim()));
    cols.extend(["exhaustion_index", "pole_distance"].map(String::from));
    let rows = orbit
        .iterates
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let mut r = vec![n.to_string()];
            r.extend(coord_cells(p));
            r.push(orbit.exhaustion_indices[n].to_string());
            r.push(orbit.pole_distances[n].to_string());
            r
        })
        .collect();
    emit(cli, "orbit.csv", &csv_body(&header, &cols, rows)?)
}

fn cmd_denjoy_wolff(cli: &Cli, cfg: &RunConfig) -> Outcome {
    let engine = cfg.engine(cli.resolution)?;
    let f = certified_map(cfg, &engine)?;
    let report = denjoy_wolff(&engine, &f, &cfg.seeds, cli.horizon)?;
    let mut header = Header::new(cli, "denjoy-wolff", Some(&engine));
    header.push(format!("map = {}", f.expr.describe()));
    emit(cli, "denjoy_wolff.json", &json_body(&header, &report)?)
}

fn report_outcome(cli: &Cli, name: &str, report: &VerifyReport) -> Outcome {
    let header = Header::new(cli, name, None);
    emit(cli, "verify.json", &json_body(&header, report)?)?;
    for s in &report.suites {
        for c in s.checks.iter().filter(|c| !c.passed) {
            eprintln!("FAIL {} / {}: observed {} vs bound {}", s.suite, c.name, c.observed, c.bound);
        }
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run(cli: &Cli) -> Outcome {
    if !(cli.tol > 0.0) {
        return Err(Failure::Config("--tol must be positive".into()));
    }
    if cli.worked_examples {
        let report = worked_examples(cli.seed)?;
        return report_outcome(cli, "worked examples", &report);
    }
    let Some(command) = &cli.command else {
        return Err(Failure::Config("no command given; see --help".into()));
    };
    let cfg = RunConfig::load(cli.config.as_deref().map(Path::new))?;
    match command {
        Command::Dist => cmd_dist(cli, &cfg),
        Command::Geodesic => cmd_geodesic(cli, &cfg),
        Command::Horofun => cmd_horofun(cli, &cfg),
        Command::Region => cmd_region(cli, &cfg),
        Command::Fibers => cmd_fibers(cli, &cfg),
        Command::Ends => cmd_ends(cli, &cfg),
        Command::Orbit => cmd_orbit(cli, &cfg),
        Command::DenjoyWolff => cmd_denjoy_wolff(cli, &cfg),
        Command::Verify { suite } => {
            let report = verify(suite, cli.seed)?;
            report_outcome(cli, &format!("verify {suite}"), &report)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Config(m)) => {
            eprintln!("config error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("numeric error: {m}");
            ExitCode::from(3)
        }
    }
}
