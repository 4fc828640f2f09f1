//! Command-line front end: figure data, lattice sweeps and the verification
//! suite, all written as CSV with a `#` metadata block.
//!
//! Settings resolve as command-line flag, then `--config` file, then the
//! subcommand default. The config file is flat `key = value` text using the
//! flag names (`a_min` or `a-min`); `#` starts a comment.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::oracle::fock::{fock_compare, FOCK_TOLERANCE};
use crate::oracle::{
    appendix_expectations, build_circuit, photon_number_variance_lo, sample_bin_pairs, Scenario,
    REFINEMENT_FLOOR,
};
use crate::spectral::{make_wavepacket, spectral_integrals, WavepacketSpec, SPECTRAL_REL_TOL};
use crate::teleportation::{
    displaced_report, inertial_output, squeezed_report, Gain, VarianceReport, INFINITE_GAIN_R,
};

/// Default directory for output files when `--out` is not given.
pub const OUT_DIR_ENV: &str = "RINDLER_TELEPORT_OUT_DIR";

/// Quadrature nodes of every wavepacket the CLI builds.
pub const WAVEPACKET_NODES: usize = 256;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;
pub const APPENDIX_TOLERANCE: f64 = 1e-8;
pub const ORACLE_TOLERANCE: f64 = 1e-2;
pub const COMMUTATOR_TOLERANCE: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(
    name = "rindler-teleport",
    version,
    about = "Teleportation from a uniformly accelerated sender: variance sweeps and oracle checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Displaced-state variance against acceleration, one curve per carrier.
    Fig4(CommonArgs),
    /// Squeezed-state thermal and decoherence contributions against acceleration.
    Fig5(CommonArgs),
    /// Lattice sweep for one scenario.
    Sweep(CommonArgs),
    /// Contraction identities, oracle agreement and the Fock check; exit 1 on a breach.
    Verify(CommonArgs),
}

impl Command {
    fn parts(&self) -> (CommandKind, &CommonArgs) {
        match self {
            Command::Fig4(a) => (CommandKind::Fig4, a),
            Command::Fig5(a) => (CommandKind::Fig5, a),
            Command::Sweep(a) => (CommandKind::Sweep, a),
            Command::Verify(a) => (CommandKind::Verify, a),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Fig4,
    Fig5,
    Sweep,
    Verify,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Fig4 => "fig4",
            CommandKind::Fig5 => "fig5",
            CommandKind::Sweep => "sweep",
            CommandKind::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioKind {
    Displaced,
    Squeezed,
    Inertial,
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScenarioKind::Displaced => "displaced",
            ScenarioKind::Squeezed => "squeezed",
            ScenarioKind::Inertial => "inertial",
        })
    }
}

#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// Scenario for `sweep`.
    #[arg(long, value_enum)]
    pub scenario: Option<ScenarioKind>,
    /// Smallest acceleration (log-spaced lattice).
    #[arg(long)]
    pub a_min: Option<f64>,
    #[arg(long)]
    pub a_max: Option<f64>,
    #[arg(long)]
    pub a_steps: Option<usize>,
    /// Carrier frequencies, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub omega0: Option<Vec<f64>>,
    /// Wavepacket width as a fraction of the carrier.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Single-mode squeezing of the signal.
    #[arg(long)]
    pub rs: Option<f64>,
    /// Homodyne phase.
    #[arg(long)]
    pub phi: Option<f64>,
    /// Frequency bins of the oracle grid.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Add oracle columns to sweeps.
    #[arg(long)]
    pub oracle: bool,
    /// Amplifier squeezing of the inertial protocol (`inf` for unbounded gain).
    #[arg(long)]
    pub gain: Option<String>,
    /// Resource squeezing values of the inertial protocol, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub r_omega: Option<Vec<f64>>,
    /// Seed for sampled bin pairs.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Bin pairs sampled per contraction identity.
    #[arg(long)]
    pub pairs: Option<usize>,
    /// Photon cutoff per mode of the Fock check.
    #[arg(long)]
    pub fock_cutoff: Option<usize>,
    /// Flat `key = value` file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("verification failed: {}", .0.join(", "))]
    VerificationFailed(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::VerificationFailed(_) => 1,
            CliError::Invalid(_) | CliError::Io { .. } => 2,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

const KEYS: [&str; 16] = [
    "scenario",
    "a_min",
    "a_max",
    "a_steps",
    "omega0",
    "sigma",
    "rs",
    "phi",
    "bins",
    "oracle",
    "gain",
    "r_omega",
    "seed",
    "pairs",
    "fock_cutoff",
    "out",
];

/// Fully resolved settings of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub command: CommandKind,
    pub scenario: ScenarioKind,
    pub a_min: f64,
    pub a_max: f64,
    pub a_steps: usize,
    pub omega0: Vec<f64>,
    /// Relative width `sigma / omega0`.
    pub sigma: f64,
    pub r_s: f64,
    pub phi: f64,
    pub bins: usize,
    pub oracle: bool,
    pub gain: Gain,
    pub r_omega: Vec<f64>,
    pub seed: u64,
    pub pairs: usize,
    pub fock_cutoff: usize,
    pub out: PathBuf,
    pub warnings: Vec<String>,
}

/// Parses flat `key = value` text.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("config line {}: expected `key = value`", n + 1)))?;
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(invalid(format!(
                "config line {}: unknown key `{key}`",
                n + 1
            )));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn flag_values(args: &CommonArgs) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            m.insert(k.to_string(), v);
        }
    };
    put("scenario", args.scenario.map(|s| s.to_string()));
    put("a_min", args.a_min.map(|x| x.to_string()));
    put("a_max", args.a_max.map(|x| x.to_string()));
    put("a_steps", args.a_steps.map(|x| x.to_string()));
    put("omega0", args.omega0.as_deref().map(join));
    put("sigma", args.sigma.map(|x| x.to_string()));
    put("rs", args.rs.map(|x| x.to_string()));
    put("phi", args.phi.map(|x| x.to_string()));
    put("bins", args.bins.map(|x| x.to_string()));
    put("oracle", args.oracle.then(|| "true".to_string()));
    put("gain", args.gain.clone());
    put("r_omega", args.r_omega.as_deref().map(join));
    put("seed", args.seed.map(|x| x.to_string()));
    put("pairs", args.pairs.map(|x| x.to_string()));
    put("fock_cutoff", args.fock_cutoff.map(|x| x.to_string()));
    put("out", args.out.as_ref().map(|p| p.display().to_string()));
    m
}

fn relevant_keys(command: CommandKind, scenario: ScenarioKind) -> &'static [&'static str] {
    const SPECTRAL: [&str; 7] = [
        "a_min", "a_max", "a_steps", "omega0", "sigma", "bins", "oracle",
    ];
    match (command, scenario) {
        (CommandKind::Fig4, _) => &SPECTRAL,
        (CommandKind::Fig5, _) => &[
            "a_min", "a_max", "a_steps", "omega0", "sigma", "bins", "oracle", "rs",
        ],
        (CommandKind::Sweep, ScenarioKind::Displaced) => &SPECTRAL,
        (CommandKind::Sweep, ScenarioKind::Squeezed) => &[
            "a_min", "a_max", "a_steps", "omega0", "sigma", "bins", "oracle", "rs", "phi",
        ],
        (CommandKind::Sweep, ScenarioKind::Inertial) => {
            &["gain", "r_omega", "oracle", "fock_cutoff"]
        }
        (CommandKind::Verify, _) => &[
            "a_min",
            "a_max",
            "a_steps",
            "omega0",
            "sigma",
            "bins",
            "rs",
            "gain",
            "r_omega",
            "seed",
            "pairs",
            "fock_cutoff",
        ],
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T, CliError> {
    raw.trim()
        .parse()
        .map_err(|_| invalid(format!("`{key}`: cannot parse `{raw}`")))
}

fn parse_list(key: &str, raw: &str) -> Result<Vec<f64>, CliError> {
    raw.split(',').map(|x| parse_value(key, x)).collect()
}

fn parse_gain(raw: &str) -> Result<Gain, CliError> {
    match raw.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinite" | "unbounded" => Ok(Gain::Infinite),
        other => {
            let r: f64 = parse_value("gain", other)?;
            if r.is_finite() && r >= 0.0 {
                Ok(Gain::Finite(r))
            } else {
                Err(invalid("`gain` must be non-negative or `inf`"))
            }
        }
    }
}

fn default_out(command: CommandKind, env_dir: Option<OsString>) -> PathBuf {
    let file = match command {
        CommandKind::Verify => "verify_report.csv".to_string(),
        c => format!("{}.csv", c.name()),
    };
    env_dir.map(PathBuf::from).unwrap_or_default().join(file)
}

/// Merges defaults, config file and flags, and validates the result.
pub fn resolve_config(
    command: CommandKind,
    args: &CommonArgs,
    env_dir: Option<OsString>,
) -> Result<SweepConfig, CliError> {
    let mut values = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            parse_config(&text)?
        }
        None => BTreeMap::new(),
    };
    values.extend(flag_values(args));

    let scenario = match values.get("scenario") {
        Some(raw) => ScenarioKind::from_str(raw, true)
            .map_err(|_| invalid(format!("unknown scenario `{raw}`")))?,
        None => match command {
            CommandKind::Fig5 => ScenarioKind::Squeezed,
            _ => ScenarioKind::Displaced,
        },
    };
    let relevant = relevant_keys(command, scenario);
    let mut warnings = Vec::new();
    for key in values.keys() {
        let always = key == "out" || (key == "scenario" && command == CommandKind::Sweep);
        if !always && !relevant.contains(&key.as_str()) {
            warnings.push(format!(
                "`{key}` has no effect on `{}` ({scenario}) and is ignored",
                command.name()
            ));
        }
    }

    let get = |k: &str| values.get(k).map(String::as_str);
    let num = |k: &str, default: f64| -> Result<f64, CliError> {
        get(k).map_or(Ok(default), |v| parse_value(k, v))
    };
    let count = |k: &str, default: usize| -> Result<usize, CliError> {
        get(k).map_or(Ok(default), |v| parse_value(k, v))
    };

    let (a_lo, a_hi, a_n) = match command {
        CommandKind::Fig4 | CommandKind::Fig5 => (0.05, 50.0, 31),
        CommandKind::Sweep => (0.1, 10.0, 5),
        CommandKind::Verify => (0.2, 5.0, 3),
    };
    let default_omega: Vec<f64> = match command {
        CommandKind::Fig4 => (1..=7).map(|k| 0.5 * k as f64).collect(),
        CommandKind::Verify => vec![0.5, 1.0, 2.0],
        _ => vec![1.0],
    };
    let default_rs = match (command, scenario) {
        (CommandKind::Fig5 | CommandKind::Verify, _) | (_, ScenarioKind::Squeezed) => 0.5,
        _ => 0.0,
    };
    let default_gain = match command {
        CommandKind::Verify => Gain::Finite(1.0),
        _ => Gain::Infinite,
    };

    let cfg = SweepConfig {
        command,
        scenario,
        a_min: num("a_min", a_lo)?,
        a_max: num("a_max", a_hi)?,
        a_steps: count("a_steps", a_n)?,
        omega0: get("omega0").map_or(Ok(default_omega), |v| parse_list("omega0", v))?,
        sigma: num("sigma", 0.01)?,
        r_s: num("rs", default_rs)?,
        phi: num("phi", 0.0)?,
        bins: count("bins", crate::oracle::DEFAULT_BINS)?,
        oracle: get("oracle").map_or(Ok(false), |v| parse_value("oracle", v))?,
        gain: get("gain").map_or(Ok(default_gain), parse_gain)?,
        r_omega: get("r_omega")
            .map_or(Ok(vec![0.0, 0.5, 0.8, 1.0]), |v| parse_list("r_omega", v))?,
        seed: get("seed").map_or(Ok(DEFAULT_SEED), |v| parse_value("seed", v))?,
        pairs: count("pairs", 50)?,
        fock_cutoff: count("fock_cutoff", crate::oracle::fock::DEFAULT_CUTOFF)?,
        out: get("out").map_or_else(|| default_out(command, env_dir), PathBuf::from),
        warnings,
    };
    cfg.validate()?;
    Ok(cfg)
}

impl SweepConfig {
    fn validate(&self) -> Result<(), CliError> {
        let positive = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(invalid(format!(
                    "`{name}` must be finite and positive, got {x}"
                )))
            }
        };
        positive("a_min", self.a_min)?;
        positive("a_max", self.a_max)?;
        positive("sigma", self.sigma)?;
        if self.a_max < self.a_min {
            return Err(invalid("`a_max` is below `a_min`"));
        }
        if self.a_steps == 0 {
            return Err(invalid("`a_steps` must be at least 1"));
        }
        if self.omega0.is_empty() {
            return Err(invalid("`omega0` is empty"));
        }
        for &w in &self.omega0 {
            positive("omega0", w)?;
        }
        if !(self.r_s.is_finite() && self.r_s >= 0.0) {
            return Err(invalid("`rs` must be non-negative"));
        }
        if !self.phi.is_finite() {
            return Err(invalid("`phi` must be finite"));
        }
        if self.bins == 0 {
            return Err(invalid("`bins` must be positive"));
        }
        if self.r_omega.is_empty() || self.r_omega.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(invalid(
                "`r_omega` must be a non-empty list of non-negative values",
            ));
        }
        if self.pairs == 0 {
            return Err(invalid("`pairs` must be positive"));
        }
        Ok(())
    }

    /// Log-spaced accelerations from `a_min` to `a_max`.
    pub fn accelerations(&self) -> Vec<f64> {
        if self.a_steps == 1 {
            return vec![self.a_min];
        }
        let (lo, hi) = (self.a_min.ln(), self.a_max.ln());
        let n = (self.a_steps - 1) as f64;
        (0..self.a_steps)
            .map(|k| (lo + (hi - lo) * k as f64 / n).exp())
            .collect()
    }

    fn wavepacket(&self, omega0: f64) -> crate::Result<WavepacketSpec> {
        make_wavepacket(omega0, self.sigma * omega0, WAVEPACKET_NODES)
    }

    fn echo(&self) -> Vec<(String, String)> {
        let gain = match self.gain {
            Gain::Infinite => format!("inf (r = {INFINITE_GAIN_R})"),
            Gain::Finite(r) => r.to_string(),
        };
        vec![
            ("command".into(), self.command.name().into()),
            ("scenario".into(), self.scenario.to_string()),
            ("a_min".into(), self.a_min.to_string()),
            ("a_max".into(), self.a_max.to_string()),
            ("a_steps".into(), self.a_steps.to_string()),
            ("omega0".into(), join(&self.omega0)),
            ("sigma_over_omega0".into(), self.sigma.to_string()),
            ("rs".into(), self.r_s.to_string()),
            ("phi".into(), self.phi.to_string()),
            ("bins".into(), self.bins.to_string()),
            ("oracle".into(), self.oracle.to_string()),
            ("gain".into(), gain),
            ("r_omega".into(), join(&self.r_omega)),
            ("seed".into(), self.seed.to_string()),
            ("pairs".into(), self.pairs.to_string()),
            ("fock_cutoff".into(), self.fock_cutoff.to_string()),
            ("wavepacket_nodes".into(), WAVEPACKET_NODES.to_string()),
            ("spectral_rel_tol".into(), SPECTRAL_REL_TOL.to_string()),
        ]
    }
}

/// A CSV body with its metadata block.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(cfg: &SweepConfig, header: &[&str]) -> Self {
        Table {
            metadata: cfg.echo(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Numeric value of `name` in every row; non-numeric cells become NaN.
    pub fn values(&self, name: &str) -> Vec<f64> {
        let Some(c) = self.column(name) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .map(|r| r[c].parse().unwrap_or(f64::NAN))
            .collect()
    }

    pub fn render(&self) -> String {
        let mut out = format!("# rindler-teleport {}\n", env!("CARGO_PKG_VERSION"));
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8"));
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let io = |source| CliError::Io {
            path: path.to_path_buf(),
            source,
        };
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(io)?;
        }
        std::fs::write(path, self.render()).map_err(io)
    }
}

fn fmt(x: f64) -> String {
    x.to_string()
}

fn status(wp: &WavepacketSpec) -> String {
    if wp.truncation_warning() {
        "truncation-warning".into()
    } else {
        "ok".into()
    }
}

fn failed(e: &crate::Error) -> String {
    format!("error: {e}")
}

fn relative(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs()
}

fn oracle_report(
    cfg: &SweepConfig,
    a: f64,
    wp: &WavepacketSpec,
    scenario: Scenario,
    phi: f64,
) -> crate::Result<VarianceReport> {
    let circ = build_circuit(a, wp, cfg.bins, scenario, Gain::Infinite)?.with_phase(phi);
    photon_number_variance_lo(&circ)
}

fn lattice(cfg: &SweepConfig) -> Vec<(f64, f64)> {
    let accel = cfg.accelerations();
    cfg.omega0
        .iter()
        .flat_map(|&w| accel.iter().map(move |&a| (w, a)))
        .collect()
}

/// Displaced-state variance against acceleration for every carrier.
pub fn cmd_fig4(cfg: &SweepConfig) -> Table {
    let mut header = vec!["omega0", "a", "variance_total", "thermal", "qnl"];
    if cfg.oracle {
        header.extend(["oracle_total", "oracle_rel_deviation"]);
    }
    header.push("status");
    let mut table = Table::new(cfg, &header);
    table.rows = lattice(cfg)
        .par_iter()
        .map(|&(w, a)| {
            let mut row = vec![fmt(w), fmt(a)];
            let width = header.len() - 3;
            let result = cfg.wavepacket(w).and_then(|wp| {
                let rep = displaced_report(&spectral_integrals(&wp, a)?);
                let mut cells = vec![
                    fmt(rep.total),
                    fmt(rep.thermal_noise),
                    fmt(rep.qnl_or_decoherence),
                ];
                if cfg.oracle {
                    let o = oracle_report(cfg, a, &wp, Scenario::Displaced, 0.0)?;
                    cells.extend([fmt(o.total), fmt(relative(o.total, rep.total))]);
                }
                Ok((cells, status(&wp)))
            });
            push_result(&mut row, result, width);
            row
        })
        .collect();
    table
}

fn push_result(row: &mut Vec<String>, result: crate::Result<(Vec<String>, String)>, width: usize) {
    match result {
        Ok((cells, st)) => {
            row.extend(cells);
            row.push(st);
        }
        Err(e) => {
            row.extend(std::iter::repeat_n("NaN".to_string(), width));
            row.push(failed(&e));
        }
    }
}

/// Squeezed-state contributions at `phi = 0` and `phi = pi/2`.
pub fn cmd_fig5(cfg: &SweepConfig) -> Table {
    let mut header = vec![
        "omega0",
        "a",
        "thermal",
        "delta_phi0",
        "delta_phi90",
        "total_phi0",
        "total_phi90",
    ];
    if cfg.oracle {
        header.extend(["oracle_total_phi0", "oracle_total_phi90"]);
    }
    header.push("status");
    let mut table = Table::new(cfg, &header);
    let scenario = Scenario::Squeezed { r_s: cfg.r_s };
    table.rows = lattice(cfg)
        .par_iter()
        .map(|&(w, a)| {
            let mut row = vec![fmt(w), fmt(a)];
            let result = cfg.wavepacket(w).and_then(|wp| {
                let s = spectral_integrals(&wp, a)?;
                let p0 = squeezed_report(&s, cfg.r_s, 0.0);
                let p90 = squeezed_report(&s, cfg.r_s, FRAC_PI_2);
                let mut cells = vec![
                    fmt(p0.thermal_noise),
                    fmt(p0.qnl_or_decoherence),
                    fmt(p90.qnl_or_decoherence),
                    fmt(p0.total),
                    fmt(p90.total),
                ];
                if cfg.oracle {
                    let o0 = oracle_report(cfg, a, &wp, scenario, 0.0)?;
                    let o90 = oracle_report(cfg, a, &wp, scenario, FRAC_PI_2)?;
                    cells.extend([fmt(o0.total), fmt(o90.total)]);
                }
                Ok((cells, status(&wp)))
            });
            push_result(&mut row, result, header.len() - 3);
            row
        })
        .collect();
    table
}

/// Lattice sweep of the configured scenario.
pub fn cmd_sweep(cfg: &SweepConfig) -> Table {
    match cfg.scenario {
        ScenarioKind::Inertial => inertial_sweep(cfg),
        kind => spectral_sweep(cfg, kind),
    }
}

fn spectral_sweep(cfg: &SweepConfig, kind: ScenarioKind) -> Table {
    let (r_s, phi) = match kind {
        ScenarioKind::Squeezed => (cfg.r_s, cfg.phi),
        _ => (0.0, 0.0),
    };
    let mut header = vec![
        "omega0",
        "a",
        "rs",
        "phi",
        "total",
        "thermal",
        "qnl_or_decoherence",
        "purity_product",
    ];
    if cfg.oracle {
        header.extend(["oracle_total", "oracle_rel_deviation", "oracle_bins"]);
    }
    header.push("status");
    let mut table = Table::new(cfg, &header);
    let scenario = match kind {
        ScenarioKind::Squeezed => Scenario::Squeezed { r_s },
        _ => Scenario::Displaced,
    };
    table.rows = lattice(cfg)
        .par_iter()
        .map(|&(w, a)| {
            let mut row = vec![fmt(w), fmt(a), fmt(r_s), fmt(phi)];
            let result = cfg.wavepacket(w).and_then(|wp| {
                let s = spectral_integrals(&wp, a)?;
                let rep = match kind {
                    ScenarioKind::Squeezed => squeezed_report(&s, r_s, phi),
                    _ => displaced_report(&s),
                };
                let mut cells = vec![
                    fmt(rep.total),
                    fmt(rep.thermal_noise),
                    fmt(rep.qnl_or_decoherence),
                    fmt(rep.purity_product),
                ];
                if cfg.oracle {
                    let o = oracle_report(cfg, a, &wp, scenario, phi)?;
                    cells.extend([
                        fmt(o.total),
                        fmt(relative(o.total, rep.total)),
                        cfg.bins.to_string(),
                    ]);
                }
                Ok((cells, status(&wp)))
            });
            push_result(&mut row, result, header.len() - 5);
            row
        })
        .collect();
    table
}

fn inertial_sweep(cfg: &SweepConfig) -> Table {
    let mut header = vec!["r", "r_omega", "vacuum_variance", "residual_coefficient"];
    if cfg.oracle {
        header.extend(["fock_cutoff", "fock_max_deviation"]);
    }
    header.push("status");
    let mut table = Table::new(cfg, &header);
    let r = cfg.gain.squeezing();
    table.rows = cfg
        .r_omega
        .par_iter()
        .map(|&ro| {
            let mut row = vec![fmt(r), fmt(ro)];
            let result = inertial_output(cfg.gain, ro).and_then(|out| {
                let var = crate::mode_algebra::quadrature_variance(&out, cfg.phi)?;
                let residual = out.coefficient(crate::teleportation::inertial::V1, true).re;
                let mut cells = vec![fmt(var), fmt(residual)];
                if cfg.oracle {
                    let rep = fock_compare(r, ro, cfg.fock_cutoff)?;
                    cells.extend([cfg.fock_cutoff.to_string(), fmt(rep.max_deviation)]);
                }
                Ok((cells, "ok".to_string()))
            });
            push_result(&mut row, result, header.len() - 3);
            row
        })
        .collect();
    table
}

/// Outcome of one verification check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn from_result(name: &'static str, tolerance: f64, r: crate::Result<(f64, String)>) -> Self {
        match r {
            Ok((worst, detail)) => Check {
                name,
                worst,
                tolerance,
                passed: worst <= tolerance,
                detail,
            },
            Err(e) => Check {
                name,
                worst: f64::NAN,
                tolerance,
                passed: false,
                detail: e.to_string(),
            },
        }
    }
}

/// Largest deviation and where it occurred.
type Worst = (f64, String);

fn worst_of<I: IntoIterator<Item = (f64, String)>>(items: I) -> (f64, String) {
    items.into_iter().fold(
        (0.0, String::new()),
        |acc, x| if x.0 >= acc.0 { x } else { acc },
    )
}

fn appendix_check(cfg: &SweepConfig, scenario: Scenario) -> crate::Result<(f64, String)> {
    let w = cfg.omega0[cfg.omega0.len() / 2];
    let wp = cfg.wavepacket(w)?;
    let pairs = sample_bin_pairs(cfg.bins.max(1), cfg.pairs, cfg.seed);
    let per_a = cfg
        .accelerations()
        .par_iter()
        .map(|&a| {
            let circ = build_circuit(a, &wp, cfg.bins, scenario, Gain::Infinite)?.with_phase(0.3);
            let mut worst = (0.0, String::new());
            for &(i, j) in &pairs {
                for e in appendix_expectations(&circ, i, j)? {
                    if e.deviation() > worst.0 || worst.1.is_empty() {
                        worst = (
                            e.deviation(),
                            format!("{} at a={a}, bins ({i},{j})", e.name),
                        );
                    }
                }
            }
            Ok(worst)
        })
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(worst_of(per_a))
}

/// Oracle against closed form on the lattice; returns the worst deviation at
/// `bins` and the worst refinement regression at `2 bins`.
fn oracle_lattice(cfg: &SweepConfig) -> (crate::Result<Worst>, crate::Result<Worst>) {
    let mut points = Vec::new();
    for &w in &cfg.omega0 {
        for &a in &cfg.accelerations() {
            for r_s in [0.0, cfg.r_s] {
                points.push((w, a, r_s));
            }
        }
    }
    points.dedup();
    let results: crate::Result<Vec<(Worst, Worst)>> = points
        .par_iter()
        .map(|&(w, a, r_s)| {
            let wp = cfg.wavepacket(w)?;
            let s = spectral_integrals(&wp, a)?;
            let scenario = if r_s == 0.0 {
                Scenario::Displaced
            } else {
                Scenario::Squeezed { r_s }
            };
            let mut agree = (0.0, String::new());
            let mut regress = (0.0, String::new());
            for phi in [0.0, FRAC_PI_2] {
                let closed = squeezed_report(&s, r_s, phi).total;
                let coarse = relative(oracle_report(cfg, a, &wp, scenario, phi)?.total, closed);
                let circ =
                    build_circuit(a, &wp, 2 * cfg.bins, scenario, Gain::Infinite)?.with_phase(phi);
                let fine = relative(photon_number_variance_lo(&circ)?.total, closed);
                let label = format!("omega0={w}, a={a}, rs={r_s}, phi={phi}");
                if coarse >= agree.0 {
                    agree = (coarse, label.clone());
                }
                let excess = fine - coarse.max(REFINEMENT_FLOOR);
                if excess >= regress.0 {
                    regress = (excess.max(0.0), label);
                }
            }
            Ok((agree, regress))
        })
        .collect();
    match results {
        Ok(v) => {
            let (agree, regress): (Vec<_>, Vec<_>) = v.into_iter().unzip();
            (Ok(worst_of(agree)), Ok(worst_of(regress)))
        }
        Err(e) => (Err(e.clone()), Err(e)),
    }
}

fn commutator_check(cfg: &SweepConfig) -> crate::Result<(f64, String)> {
    let w = cfg.omega0[0];
    let wp = cfg.wavepacket(w)?;
    let a = cfg.a_max;
    let circ = build_circuit(
        a,
        &wp,
        cfg.bins,
        Scenario::Squeezed { r_s: cfg.r_s },
        Gain::Infinite,
    )?;
    Ok((
        circ.commutator_audit()?,
        format!("omega0={w}, a={a}, rs={}", cfg.r_s),
    ))
}

fn fock_check(cfg: &SweepConfig) -> crate::Result<(f64, String)> {
    let r = cfg.gain.squeezing();
    let reports = cfg
        .r_omega
        .par_iter()
        .map(|&ro| {
            let rep = fock_compare(r, ro, cfg.fock_cutoff)?;
            Ok((
                rep.max_deviation,
                format!("r={r}, r_omega={ro}, cutoff={}", cfg.fock_cutoff),
            ))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(worst_of(reports))
}

/// Runs every verification check; the table lists worst-case deviations.
pub fn cmd_verify(cfg: &SweepConfig) -> (Table, Vec<Check>) {
    let (agree, regress) = oracle_lattice(cfg);
    let checks = vec![
        Check::from_result(
            "appendix-displaced",
            APPENDIX_TOLERANCE,
            appendix_check(cfg, Scenario::Displaced),
        ),
        Check::from_result(
            "appendix-squeezed",
            APPENDIX_TOLERANCE,
            appendix_check(cfg, Scenario::Squeezed { r_s: cfg.r_s }),
        ),
        Check::from_result("oracle-agreement", ORACLE_TOLERANCE, agree),
        Check::from_result("oracle-refinement", 0.0, regress),
        Check::from_result(
            "commutator-audit",
            COMMUTATOR_TOLERANCE,
            commutator_check(cfg),
        ),
        Check::from_result("fock-inertial", FOCK_TOLERANCE, fock_check(cfg)),
    ];
    let mut table = Table::new(
        cfg,
        &["check", "worst_deviation", "tolerance", "status", "detail"],
    );
    table.rows = checks
        .iter()
        .map(|c| {
            vec![
                c.name.to_string(),
                fmt(c.worst),
                fmt(c.tolerance),
                if c.passed { "pass" } else { "fail" }.to_string(),
                c.detail.clone(),
            ]
        })
        .collect();
    (table, checks)
}

/// Executes one parsed command; returns the path written.
pub fn execute(command: &Command, env_dir: Option<OsString>) -> Result<PathBuf, CliError> {
    let (kind, args) = command.parts();
    let cfg = resolve_config(kind, args, env_dir)?;
    for w in &cfg.warnings {
        eprintln!("warning: {w}");
    }
    let (table, failures) = match kind {
        CommandKind::Fig4 => (cmd_fig4(&cfg), Vec::new()),
        CommandKind::Fig5 => (cmd_fig5(&cfg), Vec::new()),
        CommandKind::Sweep => (cmd_sweep(&cfg), Vec::new()),
        CommandKind::Verify => {
            let (table, checks) = cmd_verify(&cfg);
            for c in &checks {
                eprintln!(
                    "{:<20} {:>6}  worst {:.3e} (tol {:.1e})  {}",
                    c.name,
                    if c.passed { "pass" } else { "FAIL" },
                    c.worst,
                    c.tolerance,
                    c.detail
                );
            }
            let failures = checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| format!("{} ({})", c.name, c.detail))
                .collect();
            (table, failures)
        }
    };
    table.write(&cfg.out)?;
    if failures.is_empty() {
        Ok(cfg.out)
    } else {
        Err(CliError::VerificationFailed(failures))
    }
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(&cli.command, std::env::var_os(OUT_DIR_ENV)) {
        Ok(path) => {
            println!("{}", path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args() -> CommonArgs {
        CommonArgs::default()
    }

    #[test]
    fn config_file_parsing() {
        let m = parse_config("# comment\na-min = 0.1\nomega0=0.5,1.5 # trailing\n\n").unwrap();
        assert_eq!(m["a_min"], "0.1");
        assert_eq!(m["omega0"], "0.5,1.5");
        assert!(parse_config("bogus = 1").is_err());
        assert!(parse_config("no equals sign").is_err());
    }

    #[test]
    fn flags_override_file_values() {
        let dir = std::env::temp_dir().join(format!("rt-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.txt");
        std::fs::write(&path, "a_min = 0.3\na_steps = 4\n").unwrap();
        let mut a = args();
        a.config = Some(path);
        a.a_steps = Some(2);
        let cfg = resolve_config(CommandKind::Fig4, &a, None).unwrap();
        assert_eq!(cfg.a_min, 0.3);
        assert_eq!(cfg.a_steps, 2);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn irrelevant_settings_warn() {
        let mut a = args();
        a.rs = Some(0.2);
        let cfg = resolve_config(CommandKind::Fig4, &a, None).unwrap();
        assert_eq!(cfg.warnings.len(), 1);
        assert!(cfg.warnings[0].contains("rs"));
    }

    #[test]
    fn invalid_values_rejected() {
        let mut a = args();
        a.a_min = Some(-1.0);
        assert!(matches!(
            resolve_config(CommandKind::Fig4, &a, None),
            Err(CliError::Invalid(_))
        ));
        let mut a = args();
        a.gain = Some("-2".into());
        assert!(resolve_config(CommandKind::Sweep, &a, None).is_err());
    }

    #[test]
    fn default_output_honours_environment() {
        let cfg = resolve_config(CommandKind::Fig5, &args(), Some("/tmp/xyz".into())).unwrap();
        assert_eq!(cfg.out, PathBuf::from("/tmp/xyz/fig5.csv"));
        let cfg = resolve_config(CommandKind::Verify, &args(), None).unwrap();
        assert_eq!(cfg.out, PathBuf::from("verify_report.csv"));
    }

    #[test]
    fn accelerations_are_log_spaced() {
        let mut a = args();
        a.a_min = Some(0.1);
        a.a_max = Some(10.0);
        a.a_steps = Some(3);
        let cfg = resolve_config(CommandKind::Sweep, &a, None).unwrap();
        let acc = cfg.accelerations();
        assert!((acc[1] - 1.0).abs() < 1e-12);
        assert!((acc[2] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn rendered_csv_has_metadata_block() {
        let mut a = args();
        a.a_steps = Some(2);
        a.omega0 = Some(vec![1.0]);
        let cfg = resolve_config(CommandKind::Fig4, &a, None).unwrap();
        let text = cmd_fig4(&cfg).render();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# rindler-teleport"));
        assert!(text.contains("# sigma_over_omega0 = 0.01"));
        assert!(text.contains("omega0,a,variance_total,thermal,qnl,status"));
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);
    }
}
