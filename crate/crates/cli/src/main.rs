use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use homcode::analysis::{
    code_distance_with_budget, decode_min_weight, decompose_error, energy_barrier, syndrome,
    syndrome_from_phases, ErrorConfig, Syndrome, DEFAULT_SEARCH_BUDGET,
};
use homcode::complex::{dual_complex, Builder, CellComplex};
use homcode::homology::{cohomology, homology, integral_homology, FgAbelianGroup};
use homcode::obstruction::{
    build_cube_tangent_bundle, cube_crossing_data, cube_tau_table, cube_theta_table,
    minimal_violation_search, obstruction_is_cocycle, quotient_code_space, reference_obstruction,
    sk_bundle_tau, solve_section, sweep_sections, BundleSpec, SearchOptions, DEFAULT_NODE_CAP,
};
use homcode::sim::{Simulator, DEFAULT_MAX_DIM};
use homcode::stabilizer::{build_code, CodeMode, HomologicalCode};

#[derive(Parser)]
#[command(
    name = "homcode",
    version,
    about = "Homological stabilizer codes on cell complexes"
)]
struct Cli {
    /// Add wall-clock time to the report.
    #[arg(long, global = true)]
    timing: bool,
    /// Render the result as a key/value table instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a cell complex.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Homology or cohomology with given coefficients.
    Homology(HomologyArgs),
    /// Build and check homological codes.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Dense state-vector checks.
    #[command(subcommand)]
    Sim(SimCmd),
    /// Syndromes, decomposition, distance, decoding, energy barrier.
    #[command(subcommand)]
    Error(ErrorCmd),
    /// Obstruction-class codes of bundles.
    #[command(subcommand)]
    Obstruction(ObstructionCmd),
}

#[derive(Args, Clone)]
struct ComplexInput {
    /// Named fixture: circle, interval, torus_grid, sphere_cube, solid_cube,
    /// projective_plane_min (or `name:args`, e.g. `torus_grid:3,3`).
    #[arg(long)]
    builder: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    /// JSON complex document.
    #[arg(long, conflicts_with = "builder")]
    complex: Option<PathBuf>,
}

#[derive(Args)]
struct ComplexFileArgs {
    /// JSON complex document (alternative to --complex).
    file: Option<PathBuf>,
    #[command(flatten)]
    input: ComplexInput,
}

#[derive(Subcommand)]
enum ComplexCmd {
    /// Check ∂∂ = 0 and unit incidences.
    Validate(ComplexFileArgs),
    /// Cell counts, Euler characteristic and integral homology.
    Info(ComplexFileArgs),
    /// The dual complex.
    Dual {
        #[command(flatten)]
        args: ComplexFileArgs,
        /// Closed dual (adds the cell at infinity) instead of the open one.
        #[arg(long)]
        closed: bool,
    },
}

#[derive(Args)]
struct HomologyArgs {
    #[command(flatten)]
    input: ComplexInput,
    #[arg(long)]
    k: usize,
    /// Coefficient group, e.g. `Z`, `Z_3`, `Z^2 x Z_4`.
    #[arg(long, default_value = "Z")]
    coeff: String,
    #[arg(long)]
    cohomology: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Homology,
    Cohomology,
}

impl From<ModeArg> for CodeMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Homology => CodeMode::Homology,
            ModeArg::Cohomology => CodeMode::Cohomology,
        }
    }
}

#[derive(Args, Clone)]
struct CodeArgs {
    #[command(flatten)]
    input: ComplexInput,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 2)]
    d: u64,
    #[arg(long, value_enum, default_value = "homology")]
    mode: ModeArg,
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Stabilizers, logicals and parameters.
    Build(CodeArgs),
    /// Pairwise commutation of all stabilizers.
    Check(CodeArgs),
    /// Exact code-space dimension.
    Dim(CodeArgs),
}

#[derive(Args)]
struct SimArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest Hilbert-space dimension to simulate.
    #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
    max_dim: usize,
}

#[derive(Subcommand)]
enum SimCmd {
    /// Ground-space dimension against the exact code dimension.
    Ground {
        #[command(flatten)]
        args: SimArgs,
        /// Also compare against the projector-stabilizer fixed space.
        #[arg(long)]
        projectors: bool,
    },
    /// Hamiltonian energies of random, ground and single-error states.
    Spectrum {
        #[command(flatten)]
        args: SimArgs,
        #[arg(long, default_value_t = 8)]
        trials: usize,
    },
}

#[derive(Subcommand)]
enum ErrorCmd {
    /// Syndrome of an error configuration.
    Syndrome {
        #[command(flatten)]
        code: CodeArgs,
        /// JSON error configuration.
        #[arg(long)]
        error: PathBuf,
    },
    /// Degree-1 connected components of an error.
    Decompose {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        error: PathBuf,
    },
    /// Minimum weight of a nontrivial logical, by exhaustive search.
    Distance {
        #[command(flatten)]
        code: CodeArgs,
        /// Largest weight to try.
        #[arg(long, default_value_t = 6)]
        cap: usize,
        /// Largest number of supports to enumerate.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
    },
    /// Minimum-weight correction for a syndrome.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        /// JSON syndrome.
        #[arg(long)]
        syndrome: PathBuf,
        #[arg(long, default_value_t = 6)]
        cap: usize,
    },
    /// Energy barrier of the X-side logical (d = 2).
    Barrier {
        #[command(flatten)]
        code: CodeArgs,
    },
}

#[derive(Args)]
struct SearchArgs {
    /// Per-cell bound on free section values.
    #[arg(long)]
    range: Option<i64>,
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    node_cap: u64,
}

impl SearchArgs {
    fn options(&self) -> SearchOptions {
        SearchOptions {
            range: self.range,
            node_cap: self.node_cap,
        }
    }
}

#[derive(Subcommand)]
enum ObstructionCmd {
    /// The tangent circle bundle of the cube.
    Cube {
        #[command(flatten)]
        search: SearchArgs,
        /// Also sweep every section with values in [-R, R].
        #[arg(long, value_name = "R")]
        sweep: Option<i64>,
    },
    /// Checks and minimal violations of a JSON bundle spec.
    Run {
        bundle: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// H^k(B;G) ⊗ Z_m and Tor(H^{k+1}(B;G), Z_m).
    Quotient {
        #[command(flatten)]
        input: ComplexInput,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "Z")]
        group: String,
        /// Qudit dimension m of the quotient.
        #[arg(long)]
        modulus: u64,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<homcode::Error> for Failure {
    fn from(e: homcode::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome<T> = Result<T, Failure>;

/// Files read while serving a command, hashed into the report digest.
#[derive(Default)]
struct Inputs {
    files: Vec<(String, String)>,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Outcome<String> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))?;
        self.files.push((path.display().to_string(), text.clone()));
        Ok(text)
    }

    fn json<T: serde::de::DeserializeOwned>(&mut self, path: &Path) -> Outcome<T> {
        let text = self.read(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::Domain(format!("parse error in {}: {e}", path.display())))
    }

    fn complex(&mut self, input: &ComplexInput, file: Option<&Path>) -> Outcome<CellComplex> {
        if let Some(path) = file.or(input.complex.as_deref()) {
            let text = self.read(path)?;
            return Ok(CellComplex::from_json(&text)?);
        }
        let Some(name) = &input.builder else {
            return Err(Failure::Usage(
                "a complex is required: pass --builder or a JSON file".into(),
            ));
        };
        let spec = if name.contains(':') {
            name.clone()
        } else {
            let args: Vec<String> = [input.m, input.p, input.q]
                .iter()
                .flatten()
                .map(ToString::to_string)
                .collect();
            if args.is_empty() {
                name.clone()
            } else {
                format!("{name}:{}", args.join(","))
            }
        };
        Ok(spec.parse::<Builder>()?.build()?)
    }

    fn code(&mut self, args: &CodeArgs) -> Outcome<HomologicalCode> {
        let c = self.complex(&args.input, None)?;
        Ok(build_code(&c, args.k, args.d, args.mode.into())?)
    }

    fn digest(&self, argv: &[String]) -> String {
        let canonical = json!({ "argv": argv, "files": self.files });
        let mut h = Sha256::new();
        h.update(canonical.to_string().as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn parse_group(s: &str) -> Outcome<FgAbelianGroup> {
    Ok(s.parse::<FgAbelianGroup>()?)
}

fn group_value(g: &FgAbelianGroup) -> Value {
    json!({
        "group": g.to_string(),
        "free": g.free_rank(),
        "torsion": g.torsion(),
        "order": g.order().map(|o| o.to_string()),
    })
}

fn tau_rows(t: &std::collections::BTreeMap<(String, String), i64>) -> Value {
    t.iter()
        .map(|((from, to), tau)| json!({ "from": from, "to": to, "tau": tau }))
        .collect()
}

fn run_complex(cmd: &ComplexCmd, io: &mut Inputs) -> Outcome<(String, Value)> {
    match cmd {
        ComplexCmd::Validate(a) => {
            let c = io.complex(&a.input, a.file.as_deref())?;
            let report = c.validate();
            if !report.is_admissible() {
                return Err(homcode::Error::NotAdmissible(report.summary()).into());
            }
            Ok((
                "complex validate".into(),
                json!({
                    "label": c.label(),
                    "dimension": c.dimension(),
                    "cell_counts": c.cell_counts(),
                    "admissible": true,
                }),
            ))
        }
        ComplexCmd::Info(a) => {
            let c = io.complex(&a.input, a.file.as_deref())?;
            let homology: Vec<String> = (0..=c.dimension())
                .map(|k| integral_homology(&c, k).to_string())
                .collect();
            Ok((
                "complex info".into(),
                json!({
                    "label": c.label(),
                    "dimension": c.dimension(),
                    "cell_counts": c.cell_counts(),
                    "euler_characteristic": c.euler_characteristic(),
                    "integral_homology": homology,
                    "validation": to_value(&c.validate()),
                }),
            ))
        }
        ComplexCmd::Dual { args, closed } => {
            let c = io.complex(&args.input, args.file.as_deref())?;
            let dual = dual_complex(&c, *closed)?;
            Ok((
                "complex dual".into(),
                json!({
                    "closed": closed,
                    "cell_counts": dual.cell_counts(),
                    "complex": to_value(&dual.to_document()),
                }),
            ))
        }
    }
}

fn run_code(cmd: &CodeCmd, io: &mut Inputs) -> Outcome<(String, Value)> {
    match cmd {
        CodeCmd::Build(a) => {
            let code = io.code(a)?;
            Ok(("code build".into(), to_value(&code.report())))
        }
        CodeCmd::Check(a) => {
            let code = io.code(a)?;
            let r = code.check_commutation();
            Ok((
                "code check".into(),
                json!({
                    "summary": code.summary(None),
                    "all_commute": r.all_commute(),
                    "report": to_value(&r),
                }),
            ))
        }
        CodeCmd::Dim(a) => {
            let code = io.code(a)?;
            let c = code.complex();
            let h = homology(c, a.k, &FgAbelianGroup::cyclic(a.d))?;
            Ok((
                "code dim".into(),
                json!({
                    "summary": code.summary(None),
                    "code_dimension": code.code_dimension().to_string(),
                    "logical_group": code.logical_group().to_string(),
                    "homology": group_value(&h),
                }),
            ))
        }
    }
}

fn run_sim(cmd: &SimCmd, io: &mut Inputs) -> Outcome<(String, Value)> {
    match cmd {
        SimCmd::Ground { args, projectors } => {
            let code = io.code(&args.code)?;
            let sim = Simulator::with_max_dim(&code, args.max_dim)?;
            let ground = sim.ground_space_dimension(args.seed)?;
            let exact = code.code_dimension().to_string();
            let mut out = json!({
                "summary": code.summary(None),
                "hilbert_dimension": sim.dim(),
                "ground_space_dimension": ground,
                "code_dimension": exact,
                "matches": ground.to_string() == exact,
            });
            if *projectors {
                out["projectors"] = to_value(&sim.projector_check(args.seed)?);
            }
            Ok(("sim ground".into(), out))
        }
        SimCmd::Spectrum { args, trials } => {
            let code = io.code(&args.code)?;
            let sim = Simulator::with_max_dim(&code, args.max_dim)?;
            let r = sim.hamiltonian_spectrum_check(*trials, args.seed)?;
            Ok(("sim spectrum".into(), to_value(&r)))
        }
    }
}

fn run_error(cmd: &ErrorCmd, io: &mut Inputs) -> Outcome<(String, Value)> {
    match cmd {
        ErrorCmd::Syndrome { code, error } => {
            let code = io.code(code)?;
            let e: ErrorConfig = io.json(error)?;
            let s = syndrome(&code, &e)?;
            let from_phases = syndrome_from_phases(&code, &e)? == s;
            Ok((
                "error syndrome".into(),
                json!({
                    "weight": s.weight(),
                    "syndrome": to_value(&s),
                    "phases_agree": from_phases,
                }),
            ))
        }
        ErrorCmd::Decompose { code, error } => {
            let code = io.code(code)?;
            let e: ErrorConfig = io.json(error)?;
            let comps = decompose_error(&code, &e)?;
            Ok((
                "error decompose".into(),
                json!({ "count": comps.len(), "components": to_value(&comps) }),
            ))
        }
        ErrorCmd::Distance { code, cap, budget } => {
            let code = io.code(code)?;
            let r = code_distance_with_budget(&code, *cap, *budget)?;
            Ok((
                "error distance".into(),
                json!({
                    "summary": code.summary(r.distance.weight()),
                    "report": to_value(&r),
                }),
            ))
        }
        ErrorCmd::Decode {
            code,
            syndrome: path,
            cap,
        } => {
            let code = io.code(code)?;
            let s: Syndrome = io.json(path)?;
            let r = decode_min_weight(&code, &s, *cap)?;
            Ok(("error decode".into(), to_value(&r)))
        }
        ErrorCmd::Barrier { code } => {
            let code = io.code(code)?;
            let b = energy_barrier(&code)?;
            Ok((
                "error barrier".into(),
                json!({ "summary": code.summary(None), "barrier": b }),
            ))
        }
    }
}

fn run_obstruction(cmd: &ObstructionCmd, io: &mut Inputs) -> Outcome<(String, Value)> {
    match cmd {
        ObstructionCmd::Cube { search, sweep } => {
            let spec = build_cube_tangent_bundle();
            let reference = reference_obstruction(&spec)?;
            let minimal = minimal_violation_search(&spec, search.options())?;
            let tau = cube_tau_table();
            let mut out = json!({
                "tau": tau_rows(&tau),
                "tau_from_crossings": tau_rows(&sk_bundle_tau(&cube_crossing_data())),
                "theta": to_value(&cube_theta_table()),
                "reference": to_value(&reference),
                "total_degree": reference.total_degree,
                "witness": reference.violated,
                "minimal": to_value(&minimal),
            });
            if let Some(r) = sweep {
                out["sweep"] = to_value(&sweep_sections(&spec, *r)?);
            }
            Ok(("obstruction cube".into(), out))
        }
        ObstructionCmd::Run { bundle, search } => {
            let spec: BundleSpec = io.json(bundle)?;
            let missing = spec.missing_transitions();
            if let Some((cell, face)) = missing.first() {
                return Err(homcode::Error::Spec(format!(
                    "missing transition for ({cell}, {face}) and {} more",
                    missing.len() - 1
                ))
                .into());
            }
            let cyclic = spec.group().generator_count() == 1;
            Ok((
                "obstruction run".into(),
                json!({
                    "group": spec.group().to_string(),
                    "k": spec.degree(),
                    "cocycle": to_value(&obstruction_is_cocycle(&spec)?),
                    "reference": to_value(&reference_obstruction(&spec)?),
                    "minimal": to_value(&minimal_violation_search(&spec, search.options())?),
                    "global_section": if cyclic { to_value(&solve_section(&spec)?) } else { Value::Null },
                }),
            ))
        }
        ObstructionCmd::Quotient {
            input,
            k,
            group,
            modulus,
        } => {
            let c = io.complex(input, None)?;
            let g = parse_group(group)?;
            let q = quotient_code_space(&c, *k, &g, *modulus)?;
            let hk = cohomology(&c, *k, &g)?;
            Ok((
                "obstruction quotient".into(),
                json!({
                    "cohomology": group_value(&hk),
                    "tensor_part": group_value(&q.tensor_part),
                    "tor_part": group_value(&q.tor_part),
                    "report": to_value(&q),
                }),
            ))
        }
    }
}

fn dispatch(cmd: &Command, io: &mut Inputs) -> Outcome<(String, Value)> {
    match cmd {
        Command::Complex(c) => run_complex(c, io),
        Command::Homology(a) => {
            let c = io.complex(&a.input, None)?;
            let g = parse_group(&a.coeff)?;
            let h = if a.cohomology {
                cohomology(&c, a.k, &g)?
            } else {
                homology(&c, a.k, &g)?
            };
            let mut out = group_value(&h);
            out["k"] = json!(a.k);
            out["coefficients"] = json!(g.to_string());
            out["kind"] = json!(if a.cohomology {
                "cohomology"
            } else {
                "homology"
            });
            Ok(("homology".into(), out))
        }
        Command::Code(c) => run_code(c, io),
        Command::Sim(c) => run_sim(c, io),
        Command::Error(c) => run_error(c, io),
        Command::Obstruction(c) => run_obstruction(c, io),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            out.push((prefix.to_string(), v.to_string()));
        }
        Value::Array(items) if items.len() > 16 => {
            out.push((prefix.to_string(), format!("[{} entries]", items.len())));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        _ => out.push((prefix.to_string(), v.to_string())),
    }
}

fn render_human(report: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", report, &mut rows);
    let width = rows
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

fn configure_threads() -> Outcome<()> {
    let Ok(raw) = std::env::var("HOMCODE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::Usage(format!(
            "HOMCODE_THREADS must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let argv: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| a != "--timing" && a != "--human")
        .collect();
    let start = Instant::now();
    let mut io = Inputs::default();
    let outcome = configure_threads().and_then(|()| dispatch(&cli.command, &mut io));
    match outcome {
        Ok((command, result)) => {
            let mut report = json!({
                "command": command,
                "inputs_digest": io.digest(&argv),
                "result": result,
            });
            if cli.timing {
                report["timing_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
            }
            let text = if cli.human {
                render_human(&report)
            } else {
                serde_json::to_string_pretty(&report).expect("json") + "\n"
            };
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
