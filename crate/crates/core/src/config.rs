//! Run configuration: defaults, `key = value` files, validation.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::cases::Case;
use crate::error::{MhdError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Vtk,
}

impl FromStr for OutputFormat {
    type Err = MhdError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "vtk" => Ok(OutputFormat::Vtk),
            other => Err(MhdError::Config(format!("unknown output format `{other}`"))),
        }
    }
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Vtk => "vtk",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: Case,
    pub nx: usize,
    pub ny: usize,
    pub degree: usize,
    pub cfl: f64,
    /// Overrides the case's final time.
    pub t_final: Option<f64>,
    pub snapshots: Vec<f64>,
    pub out_dir: Option<PathBuf>,
    pub format: OutputFormat,
    pub oe_enabled: bool,
    pub ldf_enabled: bool,
    /// 0 lets the thread pool pick.
    pub workers: usize,
    pub max_steps: usize,
    /// Also dump solution values at every volume quadrature point.
    pub dump_quadrature: bool,
}

impl RunConfig {
    pub fn new(case: Case) -> Self {
        let (nx, ny) = case.spec().default_mesh;
        RunConfig {
            case,
            nx,
            ny,
            degree: 2,
            cfl: 0.15,
            t_final: None,
            snapshots: Vec::new(),
            out_dir: None,
            format: OutputFormat::Csv,
            oe_enabled: true,
            ldf_enabled: true,
            workers: 0,
            max_steps: usize::MAX,
            dump_quadrature: false,
        }
    }

    pub fn final_time(&self) -> f64 {
        self.t_final.unwrap_or_else(|| self.case.spec().t_final)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(MhdError::Config(format!("cfl must lie in (0, 1), got {}", self.cfl)));
        }
        if self.degree > 2 {
            return Err(MhdError::Config(format!("k must be 0, 1 or 2, got {}", self.degree)));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(MhdError::Config("nx and ny must be at least 2".into()));
        }
        let tf = self.final_time();
        if !(tf >= 0.0) {
            return Err(MhdError::Config(format!("final time must be non-negative, got {tf}")));
        }
        if let Some(t) = self.snapshots.iter().find(|t| !(**t >= 0.0 && **t <= tf)) {
            return Err(MhdError::Config(format!("snapshot time {t} outside [0, {tf}]")));
        }
        Ok(())
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| MhdError::Config(format!("bad value `{value}` for {what}"));
        match key {
            "case" => {
                let case: Case = value.parse()?;
                if case != self.case {
                    let (nx, ny) = case.spec().default_mesh;
                    self.nx = nx;
                    self.ny = ny;
                    self.case = case;
                }
            }
            "nx" => self.nx = value.parse().map_err(|_| bad(key))?,
            "ny" => self.ny = value.parse().map_err(|_| bad(key))?,
            "k" | "degree" => self.degree = value.parse().map_err(|_| bad(key))?,
            "cfl" => self.cfl = value.parse().map_err(|_| bad(key))?,
            "t_final" => self.t_final = Some(value.parse().map_err(|_| bad(key))?),
            "snapshots" => self.snapshots = parse_times(value)?,
            "out" | "out_dir" => self.out_dir = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            "oe" | "oe_enabled" => self.oe_enabled = parse_bool(value).ok_or_else(|| bad(key))?,
            "ldf" | "ldf_enabled" => self.ldf_enabled = parse_bool(value).ok_or_else(|| bad(key))?,
            "workers" => self.workers = value.parse().map_err(|_| bad(key))?,
            "max_steps" => self.max_steps = value.parse().map_err(|_| bad(key))?,
            "dump_quadrature" => {
                self.dump_quadrature = parse_bool(value).ok_or_else(|| bad(key))?
            }
            other => return Err(MhdError::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Parses a flat `key = value` file; `#` starts a comment. The `case`
    /// key is applied first so mesh defaults do not clobber explicit sizes.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| MhdError::Config(format!("line {}: expected `key = value`", n + 1)))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        let case = pairs
            .iter()
            .find(|(k, _)| k == "case")
            .map(|(_, v)| v.parse())
            .transpose()?
            .unwrap_or(Case::Vortex);
        let mut cfg = RunConfig::new(case);
        for (k, v) in pairs.iter().filter(|(k, _)| k != "case") {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| MhdError::io(path, e))?;
        Self::from_text(&text)
    }
}

pub fn parse_times(value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| MhdError::Config(format!("bad time `{s}`")))
        })
        .collect()
}

fn parse_bool(v: &str) -> Option<bool> {
    match v {
        "true" | "1" | "yes" | "on" => Some(true),
        "false" | "0" | "no" | "off" => Some(false),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_the_case() {
        let c = RunConfig::new(Case::ShockCloud);
        assert_eq!((c.nx, c.ny), (600, 300));
        assert_eq!(c.cfl, 0.15);
        assert!(c.oe_enabled && c.ldf_enabled);
        assert_eq!(c.final_time(), 0.6);
    }

    #[test]
    fn parses_key_value_files() {
        let cfg = RunConfig::from_text(
            "# rotor at low resolution\nnx = 50\ncase = rotor\nny=40\nsnapshots = 0.1, 0.2\nformat = vtk\noe = false\n",
        )
        .unwrap();
        assert_eq!(cfg.case, Case::Rotor);
        assert_eq!((cfg.nx, cfg.ny), (50, 40));
        assert_eq!(cfg.snapshots, vec![0.1, 0.2]);
        assert_eq!(cfg.format, OutputFormat::Vtk);
        assert!(!cfg.oe_enabled);
        cfg.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::from_text("case = sod").is_err());
        assert!(RunConfig::from_text("nx 4").is_err());
        assert!(RunConfig::from_text("colour = blue").is_err());
        let mut c = RunConfig::new(Case::Vortex);
        c.cfl = 1.5;
        assert!(c.validate().is_err());
        let mut c = RunConfig::new(Case::Blast);
        c.snapshots = vec![1.0];
        assert!(c.validate().is_err());
    }
}
