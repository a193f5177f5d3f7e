//! Run configuration: command-line flags layered over an optional
//! `key = value` file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Arg, ArgAction, ArgMatches, Command, ValueEnum};

use crate::table::Format;
use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "SQED_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    PlanckOde,
    Balance,
    Drag,
    Diffusion,
    RindlerSpectrum,
    RindlerDiffusion,
    OracleVariance,
    XiCheck,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::PlanckOde => "planck-ode",
            Scenario::Balance => "balance",
            Scenario::Drag => "drag",
            Scenario::Diffusion => "diffusion",
            Scenario::RindlerSpectrum => "rindler-spectrum",
            Scenario::RindlerDiffusion => "rindler-diffusion",
            Scenario::OracleVariance => "oracle-variance",
            Scenario::XiCheck => "xi-check",
        }
    }
}

/// Scenario parameters accepted as flags and config keys. Numeric values
/// may be comma-separated lists wherever a scenario sweeps.
pub const PARAMS: &[(&str, &str)] = &[
    ("T", "temperature(s)"),
    ("v", "velocity(ies), |v| < 1"),
    ("a", "proper acceleration(s), a > 0"),
    ("beta", "oscillator damping (default 0.05)"),
    ("omega", "lab-frame frequency(ies)"),
    ("Omega", "proper frequency(ies)"),
    ("omega-ref", "reference frequency for planck-ode"),
    ("omega-min", "lower end of a frequency grid"),
    ("omega-max", "upper end of a frequency grid"),
    ("points", "number of grid points"),
    ("identity-points", "log-grid size for the polarizability identity in balance"),
    ("L", "oracle box length"),
    ("N", "oracle mode count"),
    ("t-min", "first oracle time"),
    ("t-max", "last oracle time"),
    ("dt", "oracle time step"),
    ("fit-min", "start of the slope fit window"),
    ("fit-max", "end of the slope fit window"),
    ("T-window", "proper-time window for the windowed xi check (0 skips it)"),
    ("cutoff", "fixed frequency cutoff(s), or 'adaptive'"),
    ("rel-tol", "relative quadrature tolerance"),
    ("anti-resonant", "include anti-resonant oracle terms (0/1)"),
    ("integrand", "export integrands instead of the summary table (0/1)"),
    ("form", "drag form: exact, qed3d, coth-total, single-direction"),
    ("check", "oracle check: variance, rr, transfer"),
    ("occupation", "CSV file with omega,n columns replacing the Planck law"),
];

/// Keys a config file may set besides [`PARAMS`].
const GLOBAL_KEYS: &[&str] = &["scenario", "output", "format", "seed"];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub params: BTreeMap<String, String>,
    pub output_path: PathBuf,
    pub format: Format,
    /// Reserved. Every scenario is deterministic.
    pub seed: u64,
}

pub fn command() -> Command {
    let mut cmd = Command::new("sqed")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Thermal and accelerated-frame drag, diffusion and oracle checks for a polarizable particle")
        .arg(
            Arg::new("scenario")
                .value_parser(clap::builder::EnumValueParser::<Scenario>::new())
                .help("scenario to run; may instead come from the config file"),
        )
        .arg(Arg::new("config").long("config").value_name("FILE").help("key = value file; flags override it"))
        .arg(Arg::new("output").long("output").short('o').value_name("PATH").help("output file"))
        .arg(
            Arg::new("format")
                .long("format")
                .value_parser(clap::builder::EnumValueParser::<Format>::new())
                .help("output format (default: csv, or json for a .json output path)"),
        )
        .arg(Arg::new("seed").long("seed").value_parser(clap::value_parser!(u64)).help("reserved"))
        .arg(
            Arg::new("unit-report")
                .long("unit-report")
                .action(ArgAction::SetTrue)
                .help("print the conversion from natural units to SI"),
        );
    for &(name, help) in PARAMS {
        cmd = cmd.arg(Arg::new(name).long(name).value_name("VALUE").allow_hyphen_values(true).help(help));
    }
    cmd
}

/// Parses `key = value` lines. `#` starts a comment; `_` in keys reads as `-`.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("config line {}: expected key = value", i + 1)));
        };
        let key = k.trim().replace('_', "-");
        if !GLOBAL_KEYS.contains(&key.as_str()) && !PARAMS.iter().any(|(n, _)| *n == key) {
            return Err(CliError::Usage(format!("config line {}: unknown key '{key}'", i + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config_text(&text)
}

impl RunConfig {
    /// `None` when no scenario was given by flag or file.
    pub fn from_matches(m: &ArgMatches, output_dir: Option<PathBuf>) -> Result<Option<RunConfig>, CliError> {
        let mut file = match m.get_one::<String>("config") {
            Some(p) => read_config_file(Path::new(p))?,
            None => BTreeMap::new(),
        };
        let scenario = match m.get_one::<Scenario>("scenario") {
            Some(s) => Some(*s),
            None => match file.get("scenario") {
                Some(s) => Some(
                    Scenario::from_str(s, false)
                        .map_err(|_| CliError::Usage(format!("unknown scenario '{s}'")))?,
                ),
                None => None,
            },
        };
        let Some(scenario) = scenario else {
            return Ok(None);
        };
        let output = m.get_one::<String>("output").cloned().or_else(|| file.get("output").cloned());
        let format = match m.get_one::<Format>("format") {
            Some(f) => *f,
            None => match file.get("format") {
                Some(f) => Format::parse(f).ok_or_else(|| CliError::Usage(format!("unknown format '{f}'")))?,
                None if output.as_deref().is_some_and(|o| o.ends_with(".json")) => Format::Json,
                None => Format::Csv,
            },
        };
        let seed = match m.get_one::<u64>("seed") {
            Some(s) => *s,
            None => match file.get("seed") {
                Some(s) => s.parse().map_err(|_| CliError::Usage(format!("seed must be an integer, got '{s}'")))?,
                None => 0,
            },
        };
        let output_path = match output {
            Some(o) => PathBuf::from(o),
            None => output_dir
                .unwrap_or_default()
                .join(format!("{}.{}", scenario.name(), format.extension())),
        };
        for key in GLOBAL_KEYS {
            file.remove(*key);
        }
        let mut params = file;
        for &(name, _) in PARAMS {
            if let Some(v) = m.get_one::<String>(name) {
                params.insert(name.to_string(), v.clone());
            }
        }
        Ok(Some(RunConfig { scenario, params, output_path, format, seed }))
    }

    pub fn params(&self) -> Params<'_> {
        Params(&self.params)
    }
}

/// Typed access to the raw parameter map.
#[derive(Debug, Clone, Copy)]
pub struct Params<'a>(pub &'a BTreeMap<String, String>);

fn bad(key: &str, value: &str, what: &str) -> CliError {
    CliError::Usage(format!("--{key}: expected {what}, got '{value}'"))
}

impl Params<'_> {
    pub fn raw(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn list_opt(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        let Some(s) = self.raw(key) else {
            return Ok(None);
        };
        s.split(',')
            .map(|x| {
                let x = x.trim();
                x.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| bad(key, x, "a finite number"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    pub fn list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        Ok(self.list_opt(key)?.unwrap_or_else(|| default.to_vec()))
    }

    pub fn scalar_opt(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.list_opt(key)? {
            None => Ok(None),
            Some(v) if v.len() == 1 => Ok(Some(v[0])),
            Some(_) => Err(bad(key, self.raw(key).unwrap_or(""), "a single number")),
        }
    }

    pub fn scalar(&self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.scalar_opt(key)?.unwrap_or(default))
    }

    pub fn count(&self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some(s) => s.trim().parse().map_err(|_| bad(key, s, "a non-negative integer")),
        }
    }

    pub fn switch(&self, key: &str) -> Result<bool, CliError> {
        match self.raw(key).map(str::trim) {
            None | Some("0") | Some("false") | Some("no") => Ok(false),
            Some("1") | Some("true") | Some("yes") => Ok(true),
            Some(s) => Err(bad(key, s, "0 or 1")),
        }
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.raw(key).map(str::trim)
    }
}
