use std::f64::consts::{PI, SQRT_2};
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use sphere_contacts::bounds::{self, BoundReport};
use sphere_contacts::geometry::{self, R_HAT, R_HAT_IMPROVED};
use sphere_contacts::io::{self as formats, format_float};
use sphere_contacts::lattice::{self, SellingRule};
use sphere_contacts::packing::{self, Packing};
use sphere_contacts::search::{self, SearchConfig, Strategy};
use sphere_contacts::verify::{self, SphereSample, VerificationReport};
use sphere_contacts::{with_workers, Error};

const EXIT_DOMAIN: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug, Serialize)]
#[command(name = "sphere-contacts", version, about = "Contact numbers of unit-ball packings")]
struct Cli {
    /// Seed for every stochastic step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Sample count for sampling-based checks.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Contact tolerance for real coordinates.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Write the primary output here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
enum Command {
    /// Build one of the explicit packings.
    Generate(GenerateArgs),
    /// Contact graph summary of a packing file (`-` for standard input).
    Contacts { input: PathBuf },
    /// Evaluate a bound formula.
    Bounds(BoundsArgs),
    /// Recompute the constants ledger.
    Constants {
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
    },
    /// Selling-reduce a lattice and list its Voronoi vector candidates.
    Reduce {
        lattice: PathBuf,
        /// Reduce on a seeded random positive parameter instead of the largest.
        #[arg(long)]
        random_rule: bool,
        #[arg(long, default_value_t = lattice::DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// Map lattice points into the fcc lattice without losing contacts.
    MapFcc { lattice: PathBuf, points: PathBuf },
    /// Numerical checks.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Search fcc clusters with many contacts.
    Search(SearchArgs),
    /// Convert a packing file.
    Export {
        input: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
    },
}

#[derive(Args, Debug, Serialize)]
#[group(required = true, multiple = false)]
struct GenerateArgs {
    /// Octahedral fcc cluster with K balls per edge.
    #[arg(long, value_name = "K")]
    octahedron: Option<u64>,
    /// Two octahedra glued along a face (9 balls).
    #[arg(long)]
    double_oct: bool,
    /// Double octahedron with E balls added in its concave edges (1..=3).
    #[arg(long, value_name = "E")]
    augmented: Option<usize>,
    /// Cuboctahedron with its center (13 balls).
    #[arg(long)]
    cubocta13: bool,
    /// All fcc points with squared integer norm at most R2.
    #[arg(long, value_name = "R2")]
    fcc_ball: Option<i64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
enum Formula {
    Harborth,
    I,
    Ii,
    Iii,
    Improved,
    Conjectural,
    Dimension,
}

#[derive(Args, Debug, Serialize)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    formula: Formula,
    #[arg(long)]
    n: u64,
    /// Edge length of the octahedral cluster, for `iii`.
    #[arg(long)]
    k: Option<u64>,
    /// Kissing number, for `dimension`.
    #[arg(long, default_value_t = 12.0)]
    tau: f64,
    /// Packing density, for `dimension` (default π/√18).
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 3)]
    dim: u32,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
enum ExportFormat {
    Json,
    Xyz,
    Csv,
}

#[derive(Args, Debug, Serialize)]
struct BallArgs {
    /// Packing file; the directions are the contacts of ball `--ball`.
    /// Without it the 12 cuboctahedral directions are used.
    #[arg(long)]
    packing: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    ball: usize,
}

#[derive(Subcommand, Debug, Serialize)]
enum VerifyCommand {
    /// Whether enlarged neighbours cover the enlarged sphere.
    Covering {
        #[command(flatten)]
        ball: BallArgs,
        #[arg(long)]
        r: f64,
    },
    /// Packed π/6 caps against the union of α-caps.
    Molnar {
        #[command(flatten)]
        ball: BallArgs,
        #[arg(long)]
        alpha: f64,
    },
    /// Contact count of the octahedral cluster against its closed forms.
    OctahedralCount {
        #[arg(long)]
        k: u64,
    },
    /// Monte Carlo density of the union of enlarged balls.
    Density {
        packing: PathBuf,
        #[arg(long)]
        r: f64,
    },
    /// Boundary area of the union of enlarged balls.
    Surface {
        packing: PathBuf,
        #[arg(long)]
        r: f64,
    },
    /// Isoperimetric inequality on the sampled volume and area.
    Isoperimetric {
        packing: PathBuf,
        #[arg(long)]
        r: f64,
    },
}

#[derive(Args, Debug, Serialize)]
struct SearchArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Best-known table for n = 2..=N_MAX, as CSV.
    #[arg(long, value_name = "N_MAX")]
    table: Option<usize>,
    #[arg(long, value_enum, default_value_t = StrategyArg::GreedySwap)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 100)]
    swap_iterations: usize,
    #[arg(long, default_value_t = 0)]
    restarts: usize,
    /// Directory for witness packings of the table rows.
    #[arg(long)]
    witness_dir: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
enum StrategyArg {
    Greedy,
    GreedySwap,
}

/// Failure of a run, mapped to an exit code.
enum Failure {
    Domain(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistency(_) => Failure::Verification(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// Primary output of a command and whether its checks passed.
struct Outcome {
    text: String,
    pass: bool,
    inputs: Vec<PathBuf>,
    extra_outputs: Vec<PathBuf>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, pass: true, inputs: Vec::new(), extra_outputs: Vec::new() }
    }

    fn reading(mut self, paths: &[&PathBuf]) -> Self {
        self.inputs.extend(paths.iter().map(|p| (*p).clone()));
        self
    }
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    config: &'a Cli,
    seed: u64,
    tool_version: &'static str,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
    wall_time_seconds: f64,
}

/// Round every float to 12 significant digits.
fn rounded(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            let x = n.as_f64().expect("non-integer numbers are floats");
            let r: f64 = format_float(x).parse().expect("formatted float parses");
            serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(rounded).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, rounded(v))).collect()),
        other => other,
    }
}

fn to_json<T: Serialize>(x: &T) -> String {
    let v = serde_json::to_value(x).expect("outputs serialize");
    serde_json::to_string_pretty(&rounded(v)).expect("values serialize") + "\n"
}

fn read_input(path: &Path) -> Run<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
    }
}

fn read_packing(path: &Path) -> Run<Packing> {
    Ok(formats::read_packing_json(&read_input(path)?)?)
}

fn generate(a: &GenerateArgs) -> Run<Outcome> {
    let p = if let Some(k) = a.octahedron {
        packing::gen_fcc_octahedron(k)?
    } else if a.double_oct {
        packing::gen_double_octahedron()
    } else if let Some(e) = a.augmented {
        packing::gen_augmented_double_octahedron(e)?
    } else if a.cubocta13 {
        packing::gen_cuboctahedron_13()
    } else if let Some(r2) = a.fcc_ball {
        packing::gen_fcc_ball(r2)?
    } else {
        unreachable!("clap requires one generator")
    };
    Ok(Outcome::ok(formats::write_packing_json(&p)))
}

fn contacts(input: &PathBuf) -> Run<Outcome> {
    let p = read_packing(input)?;
    let g = packing::contact_graph(&p)?;
    let part = packing::degree_partition(&g);
    let scan = if p.len() >= 2 { Some(bounds::bound_violation_scan(&g, p.is_exact_fcc())?) } else { None };
    let report = json!({
        "n": p.len(),
        "contacts": g.contact_number(),
        "representation": if p.is_exact_fcc() { "exact-fcc" } else { "real" },
        "max_degree": g.max_degree(),
        "degree_histogram": g.degree_histogram(),
        "degree_partition": part,
        "bounds": scan,
    });
    Ok(Outcome::ok(to_json(&report)).reading(&[input]))
}

fn bound_json(r: &BoundReport) -> Value {
    let intermediates: serde_json::Map<String, Value> = r.intermediates.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    let mut v = json!({
        "formula_id": r.formula_id,
        "n": r.n,
        "value": r.value,
        "coefficient": r.coefficient,
        "intermediates": intermediates,
        "conjectural": r.conjectural,
    });
    if r.conjectural {
        v["condition"] = json!("holds only if the π/6-cap to π/3-cap density never exceeds 6(1−√3/2); unproven");
    }
    v
}

fn bounds_cmd(a: &BoundsArgs) -> Run<Outcome> {
    let v = match a.formula {
        Formula::Harborth => json!({ "formula_id": "harborth", "n": a.n, "value": bounds::harborth_2d(a.n)? }),
        Formula::Dimension => {
            let delta = a.delta.unwrap_or_else(bounds::fcc_density);
            json!({
                "formula_id": "dimension",
                "n": a.n,
                "dimension": a.dim,
                "tau": a.tau,
                "delta": delta,
                "coefficient": bounds::general_dim_coefficient(delta, a.dim),
                "value": bounds::general_dim_bound(a.n, a.tau, delta, a.dim)?,
            })
        }
        Formula::I => bound_json(&bounds::bound_i(a.n)?),
        Formula::Ii => bound_json(&bounds::bound_ii(a.n)?),
        Formula::Iii => {
            let k = a.k.or_else(|| search::octahedral_k(a.n as usize)).ok_or_else(|| {
                Failure::Domain(format!("n = {} is not an octahedral size k(2k²+1)/3", a.n))
            })?;
            bound_json(&bounds::bound_iii_lower(a.n, k)?)
        }
        Formula::Improved => bound_json(&bounds::bound_improved(a.n)?),
        Formula::Conjectural => bound_json(&bounds::bound_conjectural(a.n)?),
    };
    Ok(Outcome::ok(to_json(&v)))
}

fn constants(format: TableFormat) -> Run<Outcome> {
    let ledger = bounds::derive_constants();
    let pass = ledger.iter().all(|e| e.matches);
    let text = match format {
        TableFormat::Json => to_json(&ledger),
        TableFormat::Csv => formats::constants_csv(&ledger),
    };
    Ok(Outcome { pass, ..Outcome::ok(text) })
}

fn reduce(path: &PathBuf, random_rule: bool, max_steps: usize, seed: u64) -> Run<Outcome> {
    let basis = lattice::parse_lattice_json(&read_input(path)?)?;
    let rule = if random_rule { SellingRule::Random(seed) } else { SellingRule::Largest };
    let sb = lattice::selling_reduce_with(&basis, rule, max_steps)?;
    let vv = lattice::voronoi_vectors(&sb)?;
    let report = json!({
        "steps": sb.steps(),
        "superbase": sb.vectors().iter().map(|v| v.to_array()).collect::<Vec<_>>(),
        "coefficients": sb.coeffs(),
        "selling_parameters": sb.selling(),
        "voronoi_vectors": vv.vectors.iter().map(|v| json!({
            "vector": v.vector.to_array(),
            "mask": v.mask,
            "negated": v.negated,
            "norm_sq": v.norm_sq,
        })).collect::<Vec<_>>(),
        "min_length": vv.min_length(),
        "length_two_count": vv.length_two_count,
    });
    Ok(Outcome::ok(to_json(&report)).reading(&[path]))
}

fn map_fcc(lat: &PathBuf, pts: &PathBuf) -> Run<Outcome> {
    let basis = lattice::parse_lattice_json(&read_input(lat)?)?;
    let points = formats::read_points_json(&read_input(pts)?)?;
    let sb = lattice::selling_reduce(&basis)?;
    let mapped = lattice::map_to_fcc(&sb, &points)?;
    let before = Packing::real(points.iter().map(|&x| basis.point(x)).collect());
    let after = Packing::fcc(mapped);
    let (cb, ca) = (packing::contact_number_brute_force(&before), packing::contact_number_brute_force(&after));
    eprintln!("contacts: {cb} before, {ca} after");
    if ca < cb {
        return Err(Failure::Verification(format!("mapping lost contacts: {cb} before, {ca} after")));
    }
    Ok(Outcome::ok(formats::write_packing_json(&after)).reading(&[lat, pts]))
}

fn directions(ball: &BallArgs) -> Run<(Vec<geometry::RealVec3>, Value)> {
    match &ball.packing {
        None => Ok((verify::cuboctahedral_directions(), json!("cuboctahedral"))),
        Some(path) => {
            let p = read_packing(path)?;
            let g = packing::contact_graph(&p)?;
            let d = packing::contact_directions(&g, &p, ball.ball)?;
            Ok((d, json!({ "packing": path, "ball": ball.ball })))
        }
    }
}

/// Smallest proven density bound for the union of balls enlarged to `r`.
fn density_reference(r: f64, lattice_packing: bool) -> Option<f64> {
    let mut refs = Vec::new();
    if lattice_packing && r >= SQRT_2 - 1e-12 {
        refs.push(bounds::fcc_density());
    }
    let p = bounds::BoundParams::default();
    if r >= R_HAT_IMPROVED {
        refs.push(p.density_improved);
    }
    if r >= R_HAT {
        refs.push(p.density_i);
    }
    refs.into_iter().reduce(f64::min)
}

fn verify_cmd(cmd: &VerifyCommand, cli: &Cli) -> Run<Outcome> {
    let report = match cmd {
        VerifyCommand::Covering { ball, r } => {
            let (dirs, source) = directions(ball)?;
            let sample = SphereSample::fibonacci(cli.samples.unwrap_or(verify::DEFAULT_COVERING_SAMPLES))?;
            let c = verify::covering_check_with(&dirs, *r, &sample)?;
            VerificationReport::new("covering", json!({ "directions": source, "r": r, "samples": sample.count() }), c.covering_radius, c.cap_angle, c.margin, c.pass)
        }
        VerifyCommand::Molnar { ball, alpha } => {
            let (dirs, source) = directions(ball)?;
            let sample = SphereSample::fibonacci(cli.samples.unwrap_or(verify::DEFAULT_COVERING_SAMPLES))?;
            let m = verify::molnar_ratio_with(&dirs, *alpha, &sample)?;
            let bound = bounds::BoundParams::default().molnar;
            VerificationReport::new("molnar", json!({ "directions": source, "alpha": alpha, "samples": sample.count() }), m, bound, bound - m, m < bound)
        }
        VerifyCommand::OctahedralCount { k } => {
            let e = verify::check_octahedral_count(*k)?;
            let mut r = VerificationReport::new("octahedral-count", json!({ "k": k, "n": e.n }), e.counted as f64, e.cubic as f64, 0.0, true);
            r.inputs["closed_forms"] = json!({ "cubic": e.cubic, "from_n": e.from_n, "breakdown": e.breakdown });
            r
        }
        VerifyCommand::Density { packing, r } => {
            let p = read_packing(packing)?;
            let samples = cli.samples.unwrap_or(verify::DEFAULT_VOLUME_SAMPLES);
            let v = verify::union_volume_mc(&p, *r, samples, cli.seed)?;
            let reference = density_reference(*r, p.is_exact_fcc())
                .ok_or_else(|| Failure::Domain(format!("no density bound is known for enlargement {r}")))?;
            let mut rep = VerificationReport::new(
                "density",
                json!({ "packing": packing, "r": r, "samples": samples, "seed": cli.seed }),
                v.density.value,
                reference,
                reference - v.density.value,
                v.density.value < reference,
            );
            rep.inputs["estimate"] = json!({ "volume": v.volume, "density_stderr": v.density.stderr });
            rep
        }
        VerifyCommand::Surface { packing, r } => {
            let p = read_packing(packing)?;
            let samples = cli.samples.unwrap_or(verify::DEFAULT_SURFACE_SAMPLES);
            let a = verify::union_surface(&p, *r, samples)?;
            let n = p.len() as f64;
            let reference = if p.is_exact_fcc() && (r - SQRT_2).abs() < 1e-12 {
                let c = packing::contact_graph(&p)?.contact_number() as f64;
                8.0 * PI * n - 4.0 * PI / 3.0 * c
            } else {
                n * 4.0 * PI * r * r
            };
            let margin = reference - a.value;
            let mut rep = VerificationReport::new("surface", json!({ "packing": packing, "r": r, "per_ball_samples": samples }), a.value, reference, margin, margin >= -3.0 * a.stderr);
            rep.inputs["stderr"] = json!(a.stderr);
            rep
        }
        VerifyCommand::Isoperimetric { packing, r } => {
            let p = read_packing(packing)?;
            let samples = cli.samples.unwrap_or(verify::DEFAULT_VOLUME_SAMPLES);
            let v = verify::union_volume_mc(&p, *r, samples, cli.seed)?;
            let a = verify::union_surface(&p, *r, verify::DEFAULT_SURFACE_SAMPLES.min(samples))?;
            let pass = verify::isoperimetric_check(v.volume, a)?;
            let lhs = 36.0 * PI * v.volume.value.powi(2);
            let rhs = a.value.powi(3);
            let mut rep = VerificationReport::new("isoperimetric", json!({ "packing": packing, "r": r, "samples": samples, "seed": cli.seed }), lhs, rhs, rhs - lhs, pass);
            rep.inputs["estimates"] = json!({ "volume": v.volume, "area": a });
            rep
        }
    };
    let pass = report.pass;
    Ok(Outcome { pass, ..Outcome::ok(to_json(&report)) })
}

fn search_cmd(a: &SearchArgs, cli: &Cli) -> Run<Outcome> {
    let strategy = match a.strategy {
        StrategyArg::Greedy => Strategy::Greedy,
        StrategyArg::GreedySwap => Strategy::GreedySwap,
    };
    let base = SearchConfig {
        n: a.n.unwrap_or(2),
        strategy,
        swap_iterations: a.swap_iterations,
        restarts: a.restarts,
        seed: cli.seed,
        // the whole run already executes on the requested pool
        workers: None,
    };
    if let Some(n_max) = a.table {
        eprintln!("searching n = 2..={n_max}");
        let table = search::best_known_table(n_max, &base)?;
        let mut csv = String::from("n,best,bound_ii,octahedral_value,source,witness\n");
        let mut written = Vec::new();
        for (row, w) in table.rows.iter().zip(&table.witnesses) {
            let witness = match &a.witness_dir {
                Some(dir) => {
                    fs::create_dir_all(dir)?;
                    let path = dir.join(format!("n{:03}.json", row.n));
                    fs::write(&path, formats::write_packing_json(w))?;
                    written.push(path);
                    format!("n{:03}.json", row.n)
                }
                None => String::new(),
            };
            let oct = row.octahedral_value.map(|v| v.to_string()).unwrap_or_default();
            csv.push_str(&format!("{},{},{},{},{},{}\n", row.n, row.best, format_float(row.bound_ii), oct, row.source, witness));
        }
        for n in table.chain_shortfalls() {
            eprintln!("note: best({n}) < best({}) + 3", n - 1);
        }
        return Ok(Outcome { extra_outputs: written, ..Outcome::ok(csv) });
    }
    let n = a.n.ok_or_else(|| Failure::Domain("search needs --n or --table".into()))?;
    let r = search::search(&SearchConfig { n, ..base })?;
    eprintln!("n = {n}: {} contacts", r.contact_number);
    Ok(Outcome::ok(to_json(&r)))
}

fn export(input: &PathBuf, format: ExportFormat) -> Run<Outcome> {
    let p = read_packing(input)?;
    let text = match format {
        ExportFormat::Json => formats::write_packing_json(&p),
        ExportFormat::Xyz => formats::to_xyz(&p),
        ExportFormat::Csv => formats::edges_csv(&packing::contact_graph(&p)?),
    };
    Ok(Outcome::ok(text).reading(&[input]))
}

fn dispatch(cli: &Cli) -> Run<Outcome> {
    if let Some(t) = cli.tolerance {
        geometry::set_tolerance(t)?;
    }
    match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Contacts { input } => contacts(input),
        Command::Bounds(a) => bounds_cmd(a),
        Command::Constants { format } => constants(*format),
        Command::Reduce { lattice, random_rule, max_steps } => reduce(lattice, *random_rule, *max_steps, cli.seed),
        Command::MapFcc { lattice, points } => map_fcc(lattice, points),
        Command::Verify(v) => verify_cmd(v, cli),
        Command::Search(a) => search_cmd(a, cli),
        Command::Export { input, format } => export(input, *format),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Generate(_) => "generate",
        Command::Contacts { .. } => "contacts",
        Command::Bounds(_) => "bounds",
        Command::Constants { .. } => "constants",
        Command::Reduce { .. } => "reduce",
        Command::MapFcc { .. } => "map-fcc",
        Command::Verify(_) => "verify",
        Command::Search(_) => "search",
        Command::Export { .. } => "export",
    }
}

fn manifest_path(output: &Path) -> PathBuf {
    let stem = output.file_stem().map_or_else(|| "output".into(), |s| s.to_string_lossy().into_owned());
    output.with_file_name(format!("{stem}.manifest.json"))
}

fn emit(cli: &Cli, outcome: &Outcome, started: Instant) -> io::Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, &outcome.text)?,
        None => io::stdout().write_all(outcome.text.as_bytes())?,
    }
    let mut outputs: Vec<PathBuf> = cli.output.iter().cloned().collect();
    outputs.extend(outcome.extra_outputs.iter().cloned());
    let manifest = RunManifest {
        command: command_name(&cli.command),
        config: cli,
        seed: cli.seed,
        tool_version: env!("CARGO_PKG_VERSION"),
        inputs: outcome.inputs.clone(),
        outputs,
        wall_time_seconds: started.elapsed().as_secs_f64(),
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    match &cli.output {
        Some(path) => fs::write(manifest_path(path), text),
        None => io::stderr().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let started = Instant::now();
    let result = with_workers(cli.workers, || dispatch(&cli)).unwrap_or_else(|e| Err(e.into()));
    match result {
        Ok(outcome) => {
            if let Err(e) = emit(&cli, &outcome, started) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_DOMAIN);
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(EXIT_VERIFICATION)
            }
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_DOMAIN)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFICATION)
        }
    }
}
