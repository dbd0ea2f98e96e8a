//! Command-line front end. Exit codes: 0 success, 1 failed check or
//! numerical failure, 2 configuration or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use crate::action::{
    action_difference, corpus_report, geometric_inequality_check, hamiltonian_action_spectrum, loop_corpus, Polyline,
    PrimitiveForm,
};
use crate::config::{resolve_map, ExperimentConfig, ExperimentKind};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::filling::{estimate, geometric_grid, FillingModel, FillingSetup};
use crate::groups::{distortion_profile, word_length_bfs, GroupWord, Presentation};
use crate::growth::{growth_sequence, propagation};
use crate::poly::RadialProfile;
use crate::report::{artifact_files, distortion_csv, filling_csv, growth_csv, write_atomic, Report};
use crate::verify::run;
use crate::zoo::{schema, standard_members, Dynamics, LiftedMap, MapDescription, SymplecticMap, TwistParams};

#[derive(Parser, Debug)]
#[command(name = "symplab", version, about = "Growth, action and filling experiments for symplectic maps")]
pub struct Cli {
    /// TOML file overriding the built-in defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for artifacts; overrides `output.dir` in the config.
    #[arg(long, global = true, env = "SYMPLAB_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Inspect the map zoo.
    Zoo {
        #[command(subcommand)]
        cmd: ZooCmd,
    },
    /// Growth sequence of one map.
    Growth(GrowthArgs),
    /// Action differences, spectra and isoperimetric checks.
    Action {
        #[command(subcommand)]
        cmd: ActionCmd,
    },
    /// Filling bounds for the flat torus or the hyperbolic plane.
    Filling(FillingArgs),
    /// Word metrics in Baumslag-Solitar groups.
    Groups {
        #[command(subcommand)]
        cmd: GroupsCmd,
    },
    /// Run every acceptance check and write all artifacts.
    VerifyAll,
    /// Run the experiment selected in the config.
    Run {
        #[arg(long, value_enum)]
        experiment: Option<ExperimentKind>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ZooCmd {
    /// Print every model's schema and the named standard members.
    List,
    /// Print the JSON description of a standard member.
    Show { name: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct GrowthArgs {
    /// Standard member name or JSON description.
    #[arg(long)]
    pub map: String,
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
    /// Add the `dn` column from the canonical lift.
    #[arg(long)]
    pub propagation: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub out: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PrimitiveChoice {
    PDq,
    MinusQDp,
    Symmetric,
}

#[derive(Subcommand, Debug)]
pub enum ActionCmd {
    /// Action difference of two fixed points of the canonical lift.
    Delta {
        #[arg(long)]
        map: String,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        y: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, value_enum, default_value = "p-dq")]
        primitive: PrimitiveChoice,
    },
    /// Action spectrum of a twist Hamiltonian: a map name, a twist map
    /// description, or bare `{"m", "epsilon", "profile"}` parameters.
    Spectrum {
        #[arg(long = "H", alias = "h")]
        hamiltonian: String,
        /// Spectrum of the n-th iterate.
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Isoperimetric ratios over a loop corpus (JSON list of vertex lists).
    Isoperimetric {
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        kappa: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    Torus2n,
    Hyperbolic,
}

#[derive(Args, Debug)]
pub struct FillingArgs {
    #[arg(long, value_enum, default_value = "torus2n")]
    pub model: ModelChoice,
    /// Half the dimension of the torus.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long)]
    pub smin: Option<f64>,
    #[arg(long)]
    pub smax: Option<f64>,
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long)]
    pub per_octave: Option<u32>,
    #[arg(long, value_enum, default_value = "csv")]
    pub out: Format,
    #[command(subcommand)]
    pub cmd: Option<FillingCmd>,
}

#[derive(Subcommand, Debug)]
pub enum FillingCmd {
    /// Certified interval for `v(t)`.
    Invert {
        #[arg(long)]
        t: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum GroupsCmd {
    /// `BS(q, p) = <a, b | a^q = b a^p b^-1>`.
    Bs(BsArgs),
}

#[derive(Args, Debug)]
pub struct BsArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<i64>,
    #[command(subcommand)]
    pub cmd: BsCmd,
}

#[derive(Subcommand, Debug)]
pub enum BsCmd {
    /// Word length of `a^N`, or of an arbitrary word.
    Length {
        #[arg(long)]
        power: Option<BigInt>,
        #[arg(long, conflicts_with = "power")]
        word: Option<String>,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long)]
        max_nodes: Option<usize>,
    },
    /// `|a^n|` for `n = 1..=nmax` plus `n = 2^k`.
    Distortion {
        #[arg(long)]
        nmax: Option<u64>,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long)]
        max_nodes: Option<usize>,
        /// Also sample `n = 2^k` for `k <= extra_k`.
        #[arg(long)]
        extra_k: Option<u32>,
        #[arg(long, value_enum, default_value = "csv")]
        out: Format,
    },
}

/// Output of a subcommand: text for stdout, artifacts for the output
/// directory, and the exit status.
struct Outcome {
    stdout: String,
    artifacts: Vec<(String, String)>,
    code: u8,
}

impl Outcome {
    fn text(stdout: String) -> Self {
        Outcome { stdout, artifacts: Vec::new(), code: 0 }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Range { .. } => 1,
        _ => 2,
    }
}

fn exec_for(jobs: Option<usize>) -> Result<Exec> {
    match jobs {
        None => Ok(Exec::Parallel),
        Some(0) => Err(Error::Config("--jobs must be at least 1".into())),
        Some(1) => Ok(Exec::Sequential),
        Some(k) => {
            #[cfg(feature = "parallel")]
            {
                // A pool may already exist when the CLI is driven in-process.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
            #[cfg(not(feature = "parallel"))]
            let _ = k;
            Ok(Exec::Parallel)
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            ExperimentConfig::from_overrides(&text)?
        }
        None => ExperimentConfig::defaults(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

/// Parses `args` and runs the command, writing to the given streams.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code() as u8;
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    let result = load_config(&cli).and_then(|cfg| {
        let exec = exec_for(cli.jobs)?;
        dispatch(&cli, &cfg, exec).map(|o| (o, cfg))
    });
    let (outcome, cfg) = match result {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let dir = match (&cli.out_dir, &cli.command) {
        (Some(d), _) => Some(d.clone()),
        (None, Command::VerifyAll | Command::Run { .. }) => Some(PathBuf::from(&cfg.output.dir)),
        _ => None,
    };
    if let Some(dir) = dir {
        for (name, body) in &outcome.artifacts {
            if let Err(e) = write_atomic(&dir.join(name), body.as_bytes()) {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
        }
    }
    let _ = write!(out, "{}", outcome.stdout);
    outcome.code
}

fn dispatch(cli: &Cli, cfg: &ExperimentConfig, exec: Exec) -> Result<Outcome> {
    match &cli.command {
        Command::Zoo { cmd } => zoo(cmd),
        Command::Growth(args) => growth(args, cfg, exec),
        Command::Action { cmd } => action(cmd, cfg, exec),
        Command::Filling(args) => filling(args, cfg, exec),
        Command::Groups { cmd: GroupsCmd::Bs(args) } => groups(args, cfg, exec),
        Command::VerifyAll => {
            let mut cfg = cfg.clone();
            cfg.experiment = ExperimentKind::All;
            experiment(&cfg, exec)
        }
        Command::Run { experiment: kind } => {
            let mut cfg = cfg.clone();
            if let Some(k) = kind {
                cfg.experiment = *k;
            }
            experiment(&cfg, exec)
        }
    }
}

fn zoo(cmd: &ZooCmd) -> Result<Outcome> {
    let mut s = String::new();
    match cmd {
        ZooCmd::List => {
            for (model, doc, example) in schema() {
                s.push_str(&format!("{model}\n  {doc}\n  examples:\n"));
                for line in example.lines() {
                    s.push_str(&format!("    {line}\n"));
                }
            }
            s.push_str("standard members:\n");
            for (name, map) in standard_members() {
                s.push_str(&format!("  {name}: {}\n", map.to_json()));
            }
        }
        ZooCmd::Show { name } => {
            let (_, map) = resolve_map(name)?;
            s.push_str(&map.to_json());
            s.push('\n');
        }
    }
    Ok(Outcome::text(s))
}

fn growth(args: &GrowthArgs, cfg: &ExperimentConfig, exec: Exec) -> Result<Outcome> {
    let (id, map) = resolve_map(&args.map)?;
    let n_max = args.nmax.unwrap_or(cfg.growth.n_max);
    let grid = args.grid.unwrap_or(cfg.growth.grid);
    let series = growth_sequence(&map, &id, n_max, grid, exec)?;
    let prop = if args.propagation {
        let lift = LiftedMap::canonical(&map)?;
        let res = if map.dim() == 4 { cfg.propagation.grid_4d } else { cfg.propagation.grid };
        Some(propagation(&lift, n_max, res, exec)?)
    } else {
        None
    };
    let csv = growth_csv(&series, prop.as_ref());
    let stdout = match args.out {
        Format::Csv => csv.clone(),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&json!({ "growth": series, "propagation": prop }))?),
    };
    Ok(Outcome { stdout, artifacts: vec![(format!("growth_{id}.csv"), csv)], code: 0 })
}

fn primitive(choice: PrimitiveChoice, dim: usize) -> PrimitiveForm {
    match choice {
        PrimitiveChoice::PDq => PrimitiveForm::p_dq(dim),
        PrimitiveChoice::MinusQDp => PrimitiveForm::minus_q_dp(dim),
        PrimitiveChoice::Symmetric => PrimitiveForm::symmetric(dim),
    }
}

fn twist_from(spec: &str) -> Result<SymplecticMap> {
    let trimmed = spec.trim();
    if trimmed.starts_with('{') && !trimmed.contains("\"model\"") {
        let params: TwistParams = serde_json::from_str(trimmed)?;
        return SymplecticMap::from_description(MapDescription::TwistCylinder(params));
    }
    Ok(resolve_map(trimmed)?.1)
}

/// A report holding one computed (not asserted) record.
fn single_record(cfg: &ExperimentConfig, exec: Exec, check_id: &str, tag: &str, values: serde_json::Value, passed: bool) -> String {
    let mut report = Report::new(cfg.seed, cfg.experiment, exec.is_parallel());
    report.records.push(crate::report::CheckRecord {
        check_id: check_id.into(),
        tag: tag.into(),
        values,
        bound: "computed value".into(),
        passed,
        runtime_ms: 0.0,
    });
    format!("{}\n", report.to_json())
}

fn action(cmd: &ActionCmd, cfg: &ExperimentConfig, exec: Exec) -> Result<Outcome> {
    match cmd {
        ActionCmd::Delta { map, x, y, n, primitive: choice } => {
            let (_, map) = resolve_map(map)?;
            let lift = LiftedMap::canonical(&map)?;
            let gamma = Polyline::open(vec![x.clone(), y.clone()]);
            let r = action_difference(&lift, *n, x, y, &gamma, &primitive(*choice, lift.dim()))?;
            let values = json!({ "value": r.value, "error": r.error, "power": r.power, "x": r.x, "y": r.y });
            Ok(Outcome::text(single_record(cfg, exec, "delta", "action.well-defined", values, true)))
        }
        ActionCmd::Spectrum { hamiltonian, n } => {
            let map = twist_from(hamiltonian)?;
            let Some(profile) = map.twist_profile() else {
                return Err(Error::Description("spectrum needs a twist Hamiltonian".into()));
            };
            let profile: RadialProfile = profile.scaled(*n as f64);
            let m = map.dim() / 2;
            let spectrum = hamiltonian_action_spectrum(&profile, m)?;
            let mut values = json!({ "n": n, "spectrum": spectrum });
            let mut passed = true;
            if m == 1 {
                let ineq = geometric_inequality_check(&profile, cfg.spectrum.inequality_grid, exec)?;
                passed = ineq.holds;
                values["geometric_inequality"] = serde_json::to_value(ineq)?;
            }
            let body = single_record(cfg, exec, "spectrum", "action.width", values, passed);
            Ok(Outcome { stdout: body, artifacts: Vec::new(), code: if passed { 0 } else { 1 } })
        }
        ActionCmd::Isoperimetric { corpus, kappa } => {
            let kappa = kappa.unwrap_or(cfg.isoperimetric.kappa);
            let loops = match corpus {
                Some(path) => read_corpus(path)?,
                None => loop_corpus(cfg.isoperimetric.loops, cfg.seed),
            };
            let r = corpus_report(&loops, kappa, exec);
            let values = json!({ "kappa": kappa, "loops": loops.len(), "report": r });
            Ok(Outcome::text(single_record(cfg, exec, "isoperimetric", "action.isoperimetric", values, r.all_hold)))
        }
    }
}

fn read_corpus(path: &Path) -> Result<Vec<Polyline>> {
    let text = std::fs::read_to_string(path)?;
    let raw: Vec<Vec<[f64; 2]>> = serde_json::from_str(&text)?;
    raw.into_iter().map(|pts| Polyline::new(pts.into_iter().map(|p| p.to_vec()).collect(), true, f64::INFINITY)).collect()
}

fn filling(args: &FillingArgs, cfg: &ExperimentConfig, exec: Exec) -> Result<Outcome> {
    let f = &cfg.filling;
    let (model, name, resolution) = match args.model {
        ModelChoice::Torus2n => {
            if args.n == 0 {
                return Err(Error::Config("--n must be at least 1".into()));
            }
            (FillingModel::Torus { n: args.n }, format!("torus{}", 2 * args.n), f.resolution)
        }
        ModelChoice::Hyperbolic => (FillingModel::Hyperbolic, "hyperbolic".to_string(), f.hyperbolic_resolution),
    };
    let resolution = args.resolution.unwrap_or(resolution);
    let grid = geometric_grid(args.smin.unwrap_or(f.s_min), args.smax.unwrap_or(f.s_max), args.per_octave.unwrap_or(f.per_octave));
    if grid.is_empty() {
        return Err(Error::Config("the s range contains no grid point".into()));
    }
    let est = estimate(&FillingSetup::new(model, resolution), &grid, exec)?;
    let csv = filling_csv(&est);
    let stdout = match (&args.cmd, args.out) {
        (Some(FillingCmd::Invert { t }), _) => {
            let (lo, hi) = est.v_from_u(*t)?;
            format!("{}\n", serde_json::to_string_pretty(&json!({ "t": t, "v_lo": lo, "v_hi": hi, "model": name }))?)
        }
        (None, Format::Csv) => csv.clone(),
        (None, Format::Json) => format!("{}\n", serde_json::to_string_pretty(&est)?),
    };
    Ok(Outcome { stdout, artifacts: vec![(format!("filling_{name}.csv"), csv)], code: 0 })
}

fn groups(args: &BsArgs, cfg: &ExperimentConfig, exec: Exec) -> Result<Outcome> {
    let d = &cfg.distortion;
    let pres = Presentation::new(args.q.unwrap_or(d.q), args.p.unwrap_or(d.p))?;
    match &args.cmd {
        BsCmd::Length { power, word, radius, max_nodes } => {
            let target = match (power, word) {
                (Some(n), _) => GroupWord::a_power(n.clone()),
                (None, Some(w)) => w.parse()?,
                (None, None) => return Err(Error::Config("give --power or --word".into())),
            };
            let r = word_length_bfs(pres, &target, radius.unwrap_or(d.radius), max_nodes.unwrap_or(d.max_nodes), exec)?;
            let body = json!({ "presentation": pres.to_string(), "target": target.to_string(), "result": r });
            Ok(Outcome::text(format!("{}\n", serde_json::to_string_pretty(&body)?)))
        }
        BsCmd::Distortion { nmax, radius, max_nodes, extra_k, out } => {
            let extra: Vec<BigInt> = (0..=extra_k.unwrap_or(d.liminf_k_max)).map(|k| BigInt::from(1u8) << k).collect();
            let profile = distortion_profile(
                pres,
                nmax.unwrap_or(d.n_max),
                &extra,
                radius.unwrap_or(d.radius),
                max_nodes.unwrap_or(d.max_nodes),
                exec,
            )?;
            let csv = distortion_csv(&profile);
            let stdout = match out {
                Format::Csv => csv.clone(),
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&profile)?),
            };
            Ok(Outcome { stdout, artifacts: vec![("distortion.csv".into(), csv)], code: 0 })
        }
    }
}

fn experiment(cfg: &ExperimentConfig, exec: Exec) -> Result<Outcome> {
    let report = run(cfg, exec)?;
    let artifacts = artifact_files(&report);
    let mut s = format!("seed {}\n", report.seed);
    for r in &report.records {
        s.push_str(&format!(
            "{} {:<24} {:<30} {:>10.1} ms\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.check_id,
            r.tag,
            r.runtime_ms
        ));
    }
    let failures: Vec<_> = report.failures().map(|r| r.check_id.clone()).collect();
    if failures.is_empty() {
        s.push_str("all checks passed\n");
    } else {
        s.push_str(&format!("failed: {}\n", failures.join(", ")));
    }
    Ok(Outcome { stdout: s, artifacts, code: if failures.is_empty() { 0 } else { 1 } })
}
