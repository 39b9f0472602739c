//! Command-line front end: JSON configuration, the `run`, `verify` and
//! `dispersion` subcommands, and the output files they write.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::diagnostics::{dispersion_table, DiagnosticsRecord, DispersionRow};
use crate::error::{Error, Result};
use crate::model::{ForcingMode, ModelParams, SimState};
use crate::oracle::suite::{run_suite, VerifyReport, VerifySettings, MAX_VERIFY_KMAX};
use crate::spectral::{Grid, SpectralField};
use crate::timestepper::{run, RunConfig, Termination, Trajectory};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 5;

pub const SERIES_FILE: &str = "series.csv";
pub const SNAPSHOT_FILE: &str = "snapshot_final.json";
pub const FIELDS_FILE: &str = "fields_final.csv";
pub const REPORT_FILE: &str = "verify_report.json";
pub const DISPERSION_FILE: &str = "dispersion.csv";

#[derive(Debug, Parser)]
#[command(name = "tumorstrip", version, about = "Two-interface thin tumor strip simulator")]
pub struct Cli {
    /// Print a commented example configuration and exit.
    #[arg(long)]
    pub seed_preset: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the interface system and write the time series and final fields.
    Run {
        config: PathBuf,
        /// Overrides `output.directory`.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Run the oracle suite and write `verify_report.json`.
    Verify {
        config: PathBuf,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Tabulate the linear decay rates of the symmetric and antisymmetric modes.
    Dispersion {
        config: PathBuf,
        /// Highest wavenumber; defaults to the truncation `K`.
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub dt: f64,
    pub t_end: f64,
    pub output_every: usize,
    pub forcing_mode: ForcingMode,
    pub project_zero_mean: bool,
    pub collision_threshold: f64,
    pub energy_blowup_threshold: f64,
}

impl Default for RunSection {
    fn default() -> Self {
        let base = RunConfig::new(ModelParams::default(), SpectralField::zeros(0), SpectralField::zeros(0));
        Self {
            dt: base.dt,
            t_end: base.t_end,
            output_every: base.output_every,
            forcing_mode: base.forcing_mode,
            project_zero_mean: base.project_zero_mean,
            collision_threshold: base.collision_threshold,
            energy_blowup_threshold: base.energy_blowup_threshold,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Series,
    Snapshot,
    Fields,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub directory: PathBuf,
    pub formats: Vec<OutputFormat>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("output"),
            formats: vec![OutputFormat::Series, OutputFormat::Snapshot, OutputFormat::Fields],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    #[serde(rename = "K")]
    pub kmax: usize,
    pub nodes: usize,
    pub datasets: usize,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for VerifySection {
    fn default() -> Self {
        let s = VerifySettings::default();
        Self {
            kmax: s.kmax,
            nodes: s.nodes,
            datasets: s.datasets,
            seed: s.seed,
            tolerances: s.tolerance_overrides,
        }
    }
}

/// `U = amp_U cos(k(x - phase))`, `V = amp_V cos(k(x - phase))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingleMode {
    pub k: i64,
    #[serde(rename = "amp_U")]
    pub amp_u: f64,
    #[serde(rename = "amp_V")]
    pub amp_v: f64,
    pub phase: f64,
}

impl Default for SingleMode {
    fn default() -> Self {
        Self {
            k: 1,
            amp_u: 0.01,
            amp_v: 0.0,
            phase: 0.0,
        }
    }
}

/// `(k, re, im)` for `k ≥ 0`; the conjugate mode is implied.
pub type Triple = (i64, f64, f64);

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coefficients {
    #[serde(rename = "U")]
    pub u: Vec<Triple>,
    #[serde(rename = "V")]
    pub v: Vec<Triple>,
}

/// Final state as written by `run` and accepted back as initial data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Snapshot {
    pub t: f64,
    pub termination: Termination,
    #[serde(rename = "K")]
    pub kmax: usize,
    #[serde(rename = "U")]
    pub u: Vec<Triple>,
    #[serde(rename = "V")]
    pub v: Vec<Triple>,
}

impl Snapshot {
    pub fn from_state(state: &SimState, termination: Termination) -> Self {
        let triples = |f: &SpectralField| -> Vec<Triple> {
            (0..=f.kmax() as i64)
                .map(|k| {
                    let c = f.coeff(k);
                    (k, c.re, c.im)
                })
                .collect()
        };
        Self {
            t: state.t,
            termination,
            kmax: state.u.kmax(),
            u: triples(&state.u),
            v: triples(&state.v),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InitialData {
    pub u: SpectralField,
    pub v: SpectralField,
    pub t_start: f64,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub params: ModelParams,
    pub initial: InitialData,
    pub run: RunSection,
    pub output: OutputSection,
    pub verify: VerifySection,
    /// Defaults that were filled in, one line each.
    pub notices: Vec<String>,
}

impl Config {
    pub fn run_config(&self) -> RunConfig {
        RunConfig {
            t_start: self.initial.t_start,
            dt: self.run.dt,
            t_end: self.run.t_end,
            output_every: self.run.output_every,
            forcing_mode: self.run.forcing_mode,
            project_zero_mean: self.run.project_zero_mean,
            collision_threshold: self.run.collision_threshold,
            energy_blowup_threshold: self.run.energy_blowup_threshold,
            ..RunConfig::new(self.params.clone(), self.initial.u.clone(), self.initial.v.clone())
        }
    }

    pub fn verify_settings(&self) -> VerifySettings {
        VerifySettings {
            kmax: self.verify.kmax.min(MAX_VERIFY_KMAX),
            nodes: self.verify.nodes,
            datasets: self.verify.datasets,
            seed: self.verify.seed,
            tolerance_overrides: self.verify.tolerances.clone(),
        }
    }
}

/// Blanks out `//` comments outside string literals, keeping line breaks so
/// parser line numbers still match the file.
pub fn strip_comments(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    let mut in_string = false;
    let mut escaped = false;
    while let Some(c) = chars.next() {
        if in_string {
            out.push(c);
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_string = false;
            }
        } else if c == '/' && chars.peek() == Some(&'/') {
            for rest in chars.by_ref() {
                if rest == '\n' {
                    out.push('\n');
                    break;
                }
            }
        } else {
            if c == '"' {
                in_string = true;
            }
            out.push(c);
        }
    }
    out
}

fn config_error(line: Option<usize>, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

/// Line of the first `"key"` at or after the line holding `"section"`.
fn locate(text: &str, section: &str, key: Option<&str>) -> Option<usize> {
    let section_pat = format!("\"{section}\"");
    let start = text.lines().position(|l| l.contains(&section_pat))?;
    let Some(key) = key else {
        return Some(start + 1);
    };
    let key_pat = format!("\"{key}\"");
    text.lines()
        .enumerate()
        .skip(start)
        .find(|(_, l)| l.contains(&key_pat))
        .map(|(i, _)| i + 1)
        .or(Some(start + 1))
}

fn as_object<'a>(value: &'a Value, text: &str, path: &str) -> Result<&'a Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| config_error(locate(text, path, None), format!("`{path}` must be an object")))
}

/// Deserializes `value` over the defaults of `T`, recording a notice for
/// every key that was left out and rejecting keys `T` does not know.
fn section<T>(text: &str, path: &str, value: Option<&Value>, notices: &mut Vec<String>) -> Result<T>
where
    T: Default + Serialize + DeserializeOwned,
{
    let default = T::default();
    let Some(value) = value else {
        notices.push(format!("section `{path}` not set; using defaults"));
        return Ok(default);
    };
    let user = as_object(value, text, path)?;
    let Value::Object(base) = serde_json::to_value(&default)? else {
        unreachable!("config sections serialize to objects")
    };
    for key in user.keys() {
        if !base.contains_key(key) {
            let known: Vec<&str> = base.keys().map(String::as_str).collect();
            return Err(config_error(
                locate(text, path, Some(key)),
                format!("unknown key `{path}.{key}` (expected one of: {})", known.join(", ")),
            ));
        }
    }
    let mut merged = base.clone();
    for (key, default_value) in &base {
        match user.get(key) {
            Some(v) => {
                merged.insert(key.clone(), v.clone());
            }
            None => notices.push(format!("`{path}.{key}` not set; using default {default_value}")),
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| {
        // pin the message to the first key that fails on its own
        let culprit = user.iter().find(|(key, v)| {
            let mut trial = base.clone();
            trial.insert((*key).clone(), (*v).clone());
            serde_json::from_value::<T>(Value::Object(trial)).is_err()
        });
        match culprit {
            Some((key, _)) => config_error(locate(text, path, Some(key)), format!("`{path}.{key}`: {e}")),
            None => config_error(locate(text, path, None), format!("`{path}`: {e}")),
        }
    })
}

fn field_from_triples(triples: &[Triple], kmax: usize, what: &str) -> std::result::Result<SpectralField, String> {
    let mut field = SpectralField::zeros(kmax);
    let mut seen = vec![false; kmax + 1];
    for &(k, re, im) in triples {
        if k < 0 || k as usize > kmax {
            return Err(format!("{what}: mode {k} outside 0..={kmax}"));
        }
        if seen[k as usize] {
            return Err(format!("{what}: mode {k} listed twice"));
        }
        seen[k as usize] = true;
        if !(re.is_finite() && im.is_finite()) {
            return Err(format!("{what}: mode {k} is not finite"));
        }
        if k == 0 && im != 0.0 {
            return Err(format!("{what}: the mean (k = 0) must be real"));
        }
        field.set_mode(k, Complex64::new(re, im));
    }
    Ok(field)
}

fn initial_data(
    text: &str,
    value: Option<&Value>,
    kmax: usize,
    base_dir: &Path,
    notices: &mut Vec<String>,
) -> Result<InitialData> {
    let zero_time = |(u, v)| InitialData { u, v, t_start: 0.0 };
    let single = |m: SingleMode| {
        (
            SpectralField::cosine_shifted(kmax, m.k, m.amp_u, m.phase),
            SpectralField::cosine_shifted(kmax, m.k, m.amp_v, m.phase),
        )
    };
    let Some(value) = value else {
        notices.push(format!("section `initial` not set; using single_mode {:?}", SingleMode::default()));
        return Ok(zero_time(single(SingleMode::default())));
    };
    let obj = as_object(value, text, "initial")?;
    let line = locate(text, "initial", None);
    if obj.len() != 1 {
        return Err(config_error(
            line,
            "`initial` must hold exactly one of `single_mode`, `coefficients`, `snapshot`",
        ));
    }
    let (kind, body) = obj.iter().next().expect("one entry");
    match kind.as_str() {
        "single_mode" => {
            let m: SingleMode = section(text, "single_mode", Some(body), notices)?;
            if m.k < 0 || m.k as usize > kmax {
                return Err(config_error(
                    locate(text, "single_mode", Some("k")),
                    format!("`single_mode.k` must be in 0..={kmax}"),
                ));
            }
            Ok(zero_time(single(m)))
        }
        "coefficients" => {
            let c: Coefficients = section(text, "coefficients", Some(body), notices)?;
            let build = |t: &[Triple], name: &str| {
                field_from_triples(t, kmax, name)
                    .map_err(|m| config_error(locate(text, "coefficients", Some(name)), m))
            };
            Ok(zero_time((build(&c.u, "U")?, build(&c.v, "V")?)))
        }
        "snapshot" => {
            let at = locate(text, "initial", Some("snapshot"));
            let rel = body
                .as_str()
                .ok_or_else(|| config_error(at, "`initial.snapshot` must be a file path"))?;
            let path = base_dir.join(rel);
            let raw = fs::read_to_string(&path)
                .map_err(|e| config_error(at, format!("cannot read snapshot {}: {e}", path.display())))?;
            let snap: Snapshot = serde_json::from_str(&raw)
                .map_err(|e| config_error(at, format!("snapshot {}: {e}", path.display())))?;
            let u = field_from_triples(&snap.u, kmax, "snapshot U").map_err(|m| config_error(at, m))?;
            let v = field_from_triples(&snap.v, kmax, "snapshot V").map_err(|m| config_error(at, m))?;
            Ok(InitialData { u, v, t_start: snap.t })
        }
        other => Err(config_error(
            locate(text, "initial", Some(other)),
            format!("unknown initial data kind `{other}`"),
        )),
    }
}

const SECTIONS: [&str; 5] = ["params", "initial", "run", "output", "verify"];

/// Parses a configuration document; relative snapshot paths resolve against
/// `base_dir`.
pub fn parse_config(raw: &str, base_dir: &Path) -> Result<Config> {
    let text = strip_comments(raw);
    let root: Value = serde_json::from_str(&text).map_err(|e| config_error(Some(e.line()), e.to_string()))?;
    let obj = root
        .as_object()
        .ok_or_else(|| config_error(Some(1), "configuration must be a JSON object"))?;
    for key in obj.keys() {
        if !SECTIONS.contains(&key.as_str()) {
            return Err(config_error(
                locate(&text, key, None),
                format!("unknown section `{key}` (expected one of: {})", SECTIONS.join(", ")),
            ));
        }
    }
    let mut notices = Vec::new();
    let params: ModelParams = section(&text, "params", obj.get("params"), &mut notices)?;
    params
        .validate()
        .map_err(|e| config_error(locate(&text, "params", None), e.to_string()))?;
    let initial = initial_data(&text, obj.get("initial"), params.kmax, base_dir, &mut notices)?;
    let run: RunSection = section(&text, "run", obj.get("run"), &mut notices)?;
    let output: OutputSection = section(&text, "output", obj.get("output"), &mut notices)?;
    let verify: VerifySection = section(&text, "verify", obj.get("verify"), &mut notices)?;
    if verify.kmax > MAX_VERIFY_KMAX {
        notices.push(format!("`verify.K` = {} capped at {MAX_VERIFY_KMAX}", verify.kmax));
    }
    let config = Config {
        params,
        initial,
        run,
        output,
        verify,
        notices,
    };
    config
        .run_config()
        .validate()
        .map_err(|e| config_error(locate(&text, "run", None), e.to_string()))?;
    config
        .verify_settings()
        .validate()
        .map_err(|e| config_error(locate(&text, "verify", None), e.to_string()))?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<Config> {
    let raw = fs::read_to_string(path).map_err(|e| config_error(None, format!("cannot read {}: {e}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_config(&raw, base)
}

fn number(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn series_csv(records: &[DiagnosticsRecord]) -> String {
    let mut out = String::from(DiagnosticsRecord::CSV_HEADER);
    out.push('\n');
    for r in records {
        let row: Vec<String> = r.values().iter().map(|&v| number(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `x1,U,V,thickness` on the physical grid.
pub fn fields_csv(state: &SimState, p: &ModelParams) -> Result<String> {
    let grid = Grid::new(p.m);
    let x = grid.points();
    let (u, v) = if state.is_finite() {
        (grid.synthesize(&state.u)?, grid.synthesize(&state.v)?)
    } else {
        (vec![f64::NAN; x.len()], vec![f64::NAN; x.len()])
    };
    let mut out = String::from("x1,U,V,thickness\n");
    for j in 0..x.len() {
        let thickness = 1.0 + p.epsilon * (u[j] - v[j]);
        let _ = writeln!(out, "{},{},{},{}", number(x[j]), number(u[j]), number(v[j]), number(thickness));
    }
    Ok(out)
}

pub fn dispersion_csv(rows: &[DispersionRow]) -> String {
    let mut out = String::from("k,lambda_plus,lambda_minus\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.k, number(r.lambda_plus), number(r.lambda_minus));
    }
    out
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

/// Pretty JSON with a trailing newline.
pub fn pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn output_dir(config: &Config, overridden: Option<&Path>) -> PathBuf {
    overridden.map(Path::to_path_buf).unwrap_or_else(|| config.output.directory.clone())
}

/// Writes the artifacts of a finished run into `dir`.
pub fn write_run_outputs(dir: &Path, config: &Config, traj: &Trajectory) -> Result<()> {
    let formats = &config.output.formats;
    if formats.contains(&OutputFormat::Series) {
        write(dir, SERIES_FILE, &series_csv(&traj.records))?;
    }
    if formats.contains(&OutputFormat::Snapshot) {
        let snap = Snapshot::from_state(traj.final_state(), traj.termination);
        write(dir, SNAPSHOT_FILE, &pretty(&snap)?)?;
    }
    if formats.contains(&OutputFormat::Fields) {
        write(dir, FIELDS_FILE, &fields_csv(traj.final_state(), &config.params)?)?;
    }
    Ok(())
}

pub fn cmd_run(config: &Config, out: &Path) -> Result<Trajectory> {
    let traj = run(&config.run_config())?;
    write_run_outputs(out, config, &traj)?;
    Ok(traj)
}

pub fn cmd_verify(config: &Config, out: &Path) -> Result<VerifyReport> {
    let report = run_suite(&config.params, &config.verify_settings())?;
    write(out, REPORT_FILE, &pretty(&report)?)?;
    Ok(report)
}

pub fn cmd_dispersion(config: &Config, kmax: Option<usize>, out: &Path) -> Result<Vec<DispersionRow>> {
    let rows = dispersion_table(&config.params, kmax.unwrap_or(config.params.kmax));
    write(out, DISPERSION_FILE, &dispersion_csv(&rows))?;
    Ok(rows)
}

pub const SEED_PRESET: &str = r#"// tumorstrip configuration; `//` comments are allowed.
// Keys left out fall back to their defaults with a notice on stderr.
{
  "params": {
    "epsilon": 0.1,       // aspect ratio
    "eta": 1.0,           // surface tension
    "theta": 1.0,         // chemotaxis
    "rho": 1.0,           // proliferation
    "tau": 1.0,           // inhibitor weight
    "N": 1.0,             // decay rate of nutrient and inhibitor
    "c_B": 0.5,
    "c_S": 1.0,
    "K": 64,              // retained Fourier modes
    "M": 256,             // physical grid points, at least 2K + 2
    "j1_cosh_variant": false
  },
  // exactly one of single_mode, coefficients ({"U": [[k, re, im], ...], "V": [...]})
  // or snapshot ("path/to/snapshot_final.json", relative to this file)
  "initial": {
    "single_mode": { "k": 1, "amp_U": 0.05, "amp_V": -0.05, "phase": 0.0 }
  },
  "run": {
    "dt": 0.001,
    "t_end": 1.0,
    "output_every": 10,
    "forcing_mode": "simplified",   // or "full"
    "project_zero_mean": false,
    "collision_threshold": 0.0,
    "energy_blowup_threshold": 1000000.0
  },
  "output": {
    "directory": "output",
    "formats": ["series", "snapshot", "fields"]
  },
  "verify": {
    "K": 32,              // at most 32
    "nodes": 129,         // vertical nodes for the strip checks
    "datasets": 10,       // random low-mode datasets
    "seed": 20240601,
    "tolerances": {}      // per-check overrides, e.g. {"poisson_manufactured": 1e-9}
  }
}
"#;

fn report_error(e: &Error) -> i32 {
    eprintln!("error: {e}");
    EXIT_CONFIG
}

/// Runs the CLI on parsed arguments and returns the process exit code.
pub fn execute(cli: Cli) -> i32 {
    if cli.seed_preset {
        print!("{SEED_PRESET}");
        return EXIT_OK;
    }
    let Some(command) = cli.command else {
        eprintln!("error: no subcommand given (try `run`, `verify`, `dispersion` or `--seed-preset`)");
        return EXIT_CONFIG;
    };
    let (path, dir) = match &command {
        Command::Run { config, output_dir }
        | Command::Verify { config, output_dir }
        | Command::Dispersion { config, output_dir, .. } => (config, output_dir),
    };
    let config = match load_config(path) {
        Ok(c) => c,
        Err(e) => return report_error(&e),
    };
    for notice in &config.notices {
        eprintln!("notice: {notice}");
    }
    let out = output_dir(&config, dir.as_deref());
    match command {
        Command::Run { .. } => match cmd_run(&config, &out) {
            Ok(traj) => {
                let last = traj.final_record();
                println!(
                    "{} at t = {} (min thickness {}, E0 + E1 = {})",
                    traj.termination.as_str(),
                    last.t,
                    last.min_thickness,
                    last.energy()
                );
                traj.termination.exit_code()
            }
            Err(e) => report_error(&e),
        },
        Command::Verify { .. } => match cmd_verify(&config, &out) {
            Ok(report) => {
                for c in &report.checks {
                    let status = match (c.pass, c.gating) {
                        (true, _) => "pass",
                        (false, true) => "FAIL",
                        (false, false) => "info",
                    };
                    println!("{status:4}  {:<40} {:.3e} (tol {:.1e})", c.name, c.max_deviation, c.tolerance);
                }
                if report.pass {
                    EXIT_OK
                } else {
                    EXIT_VERIFY_FAILED
                }
            }
            Err(e) => report_error(&e),
        },
        Command::Dispersion { kmax, .. } => match cmd_dispersion(&config, kmax, &out) {
            Ok(_) => EXIT_OK,
            Err(e) => report_error(&e),
        },
    }
}
