//! Run configuration: `key = value` files overridden by command-line flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use serde::Serialize;

use crate::error::CliError;

const KNOWN_KEYS: &[&str] = &[
    "potential",
    "omega",
    "gamma",
    "N",
    "kappa",
    "nmax",
    "count",
    "dim",
    "half_width",
    "delta_spike",
    "delta_cut",
    "epsilon",
    "scan_radius",
    "grid_step",
    "out",
    "json",
    "dump_matrix",
    "threads",
    "tol_ratio",
    "tol_slope",
    "tol_identity",
    "tol_ims",
    "tol_ritz",
];

/// Flags shared by every subcommand. Each one may also come from `--config`.
#[derive(Debug, Default, Clone, Args)]
pub struct CommonArgs {
    /// `key = value` file; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// harmonic | double-well | separable-double-well | quartic | free | hkappa
    #[arg(long, global = true)]
    pub potential: Option<String>,
    /// Harmonic frequencies, one per axis (comma separated).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega: Option<String>,
    /// γ value or comma-separated grid.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Comma-separated inverse mesh sizes N.
    #[arg(long = "N", global = true)]
    pub meshes: Option<String>,
    /// Comma-separated κ values (descending for `kappa`).
    #[arg(long, global = true)]
    pub kappa: Option<String>,
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    #[arg(long, global = true)]
    pub count: Option<usize>,
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Fixed box half-width; auto-sized when omitted.
    #[arg(long = "half-width", global = true)]
    pub half_width: Option<i64>,
    #[arg(long = "delta-spike", global = true)]
    pub delta_spike: Option<f64>,
    #[arg(long = "delta-cut", global = true)]
    pub delta_cut: Option<f64>,
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long = "scan-radius", global = true)]
    pub scan_radius: Option<f64>,
    #[arg(long = "grid-step", global = true)]
    pub grid_step: Option<f64>,
    /// CSV destination (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON summary destination.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Write the assembled operator as `i j value` triplets.
    #[arg(long = "dump-matrix", global = true)]
    pub dump_matrix: Option<PathBuf>,
    #[arg(long, global = true, env = "LSC_THREADS")]
    pub threads: Option<usize>,
    /// Largest accepted |E_n/λ_N − e_n| at the finest N.
    #[arg(long = "tol-ratio", global = true)]
    pub tol_ratio: Option<f64>,
    /// Largest accepted |ĥ(γ) − h(γ)|.
    #[arg(long = "tol-slope", global = true)]
    pub tol_slope: Option<f64>,
    /// Largest accepted relative deviation in exact identities.
    #[arg(long = "tol-identity", global = true)]
    pub tol_identity: Option<f64>,
    /// Largest accepted relative IMS identity residual.
    #[arg(long = "tol-ims", global = true)]
    pub tol_ims: Option<f64>,
    /// Constant C in θ_n ≤ κ²(2n+1)(1 + Cκ).
    #[arg(long = "tol-ritz", global = true)]
    pub tol_ritz: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub ratio: f64,
    pub slope: f64,
    pub identity: f64,
    pub ims: f64,
    pub ritz: f64,
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub potential: String,
    pub omega: Vec<f64>,
    pub gammas: Vec<f64>,
    #[serde(rename = "N")]
    pub meshes: Vec<u64>,
    pub kappas: Vec<f64>,
    pub n_max: usize,
    pub count: Option<usize>,
    pub dim: usize,
    pub half_width: Option<i64>,
    pub delta_spike: f64,
    pub delta_cut: f64,
    pub epsilon: f64,
    pub scan_radius: f64,
    pub grid_step: f64,
    pub out: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub dump_matrix: Option<PathBuf>,
    pub threads: Option<usize>,
    pub tolerances: Tolerances,
}

/// Parse `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let key = key.trim().replace('-', "_");
        let key = if key.eq_ignore_ascii_case("n") { "N".to_string() } else { key };
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("line {}: unknown key '{key}'", lineno + 1)));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn parse_one<T: FromStr>(key: &str, text: &str) -> Result<T, CliError> {
    text.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{key}: cannot parse '{text}'")))
}

fn parse_list<T: FromStr>(key: &str, text: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_one(key, s))
        .collect()
}

struct Sources {
    file: BTreeMap<String, String>,
}

impl Sources {
    fn scalar<T: FromStr + Clone>(&self, flag: &Option<T>, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.optional(flag, key)?.unwrap_or(default))
    }

    fn optional<T: FromStr + Clone>(&self, flag: &Option<T>, key: &str) -> Result<Option<T>, CliError> {
        match (flag, self.file.get(key)) {
            (Some(v), _) => Ok(Some(v.clone())),
            (None, Some(text)) => parse_one(key, text).map(Some),
            (None, None) => Ok(None),
        }
    }

    fn list<T: FromStr>(&self, flag: &Option<String>, key: &str, default: &str) -> Result<Vec<T>, CliError> {
        let text = flag
            .as_deref()
            .or(self.file.get(key).map(String::as_str))
            .unwrap_or(default);
        let values = parse_list(key, text)?;
        if values.is_empty() {
            return Err(CliError::Config(format!("{key}: empty list")));
        }
        Ok(values)
    }

    fn path(&self, flag: &Option<PathBuf>, key: &str) -> Option<PathBuf> {
        flag.clone().or_else(|| self.file.get(key).map(PathBuf::from))
    }
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => read_config(path)?,
            None => BTreeMap::new(),
        };
        let src = Sources { file };
        let potential = args
            .potential
            .clone()
            .or_else(|| src.file.get("potential").cloned())
            .unwrap_or_else(|| "harmonic".to_string());
        let cfg = RunConfig {
            potential,
            omega: src.list(&args.omega, "omega", "1")?,
            gammas: src.list(&args.gamma, "gamma", "0")?,
            meshes: src.list(&args.meshes, "N", "64,256,1024")?,
            kappas: src.list(&args.kappa, "kappa", "0.2,0.1,0.05,0.025")?,
            n_max: src.scalar(&args.nmax, "nmax", 3)?,
            count: src.optional(&args.count, "count")?,
            dim: src.scalar(&args.dim, "dim", 1)?,
            half_width: src.optional(&args.half_width, "half_width")?,
            delta_spike: src.scalar(&args.delta_spike, "delta_spike", 0.25)?,
            delta_cut: src.scalar(&args.delta_cut, "delta_cut", 0.25)?,
            epsilon: src.scalar(&args.epsilon, "epsilon", lsc_core::semiclassics::DEFAULT_EPSILON)?,
            scan_radius: src.scalar(&args.scan_radius, "scan_radius", 4.0)?,
            grid_step: src.scalar(&args.grid_step, "grid_step", 0.01)?,
            out: src.path(&args.out, "out"),
            json: src.path(&args.json, "json"),
            dump_matrix: src.path(&args.dump_matrix, "dump_matrix"),
            threads: src.optional(&args.threads, "threads")?,
            tolerances: Tolerances {
                ratio: src.scalar(&args.tol_ratio, "tol_ratio", 0.05)?,
                slope: src.scalar(&args.tol_slope, "tol_slope", 0.1)?,
                identity: src.scalar(&args.tol_identity, "tol_identity", 1e-12)?,
                ims: src.scalar(&args.tol_ims, "tol_ims", 1e-12)?,
                ritz: src.scalar(&args.tol_ritz, "tol_ritz", 10.0)?,
            },
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), CliError> {
        if !(self.delta_spike > 0.0 && self.delta_spike < 0.5) {
            return Err(CliError::Config(format!(
                "delta_spike must lie in (0, 0.5), got {}",
                self.delta_spike
            )));
        }
        if self.gammas.iter().any(|g| !g.is_finite()) {
            return Err(CliError::Config("gamma grid must be finite".into()));
        }
        if self.meshes[0] == 0 || self.meshes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config("N list must be strictly increasing positive integers".into()));
        }
        if self.kappas.iter().any(|k| !(*k > 0.0 && k.is_finite())) {
            return Err(CliError::Config("kappa values must be positive".into()));
        }
        if self.omega.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(CliError::Config("omega values must be positive".into()));
        }
        if self.threads == Some(0) {
            return Err(CliError::Config("threads must be at least 1".into()));
        }
        if self.dim == 0 {
            return Err(CliError::Config("dim must be at least 1".into()));
        }
        Ok(())
    }

    pub fn gamma(&self) -> f64 {
        self.gammas[0]
    }

    pub fn mesh(&self) -> u64 {
        self.meshes[0]
    }

    pub fn kappa(&self) -> f64 {
        self.kappas[0]
    }
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let m = parse_config("# comment\npotential = double-well\nN = 8, 16 ,32\ndelta-spike=0.3 # inline\n").unwrap();
        assert_eq!(m["potential"], "double-well");
        assert_eq!(m["N"], "8, 16 ,32");
        assert_eq!(m["delta_spike"], "0.3");
        assert!(parse_config("bogus = 1").is_err());
        assert!(parse_config("no equals sign").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "gamma = 0.5\nnmax = 2\n").unwrap();
        let args = CommonArgs {
            config: Some(path),
            nmax: Some(4),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(&args).unwrap();
        assert_eq!(cfg.gammas, vec![0.5]);
        assert_eq!(cfg.n_max, 4);
    }

    #[test]
    fn invariants_enforced() {
        let bad_spike = CommonArgs {
            delta_spike: Some(0.5),
            ..Default::default()
        };
        assert!(RunConfig::resolve(&bad_spike).is_err());
        let bad_mesh = CommonArgs {
            meshes: Some("8,4".into()),
            ..Default::default()
        };
        assert!(RunConfig::resolve(&bad_mesh).is_err());
    }
}
