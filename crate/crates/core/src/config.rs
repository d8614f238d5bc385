//! Run configuration and its line-oriented `key = value` file format.
//!
//! ```text
//! # comment
//! [atom]
//! j = 8
//! g_j = 1.24159
//!
//! [scattering]
//! b_field_gauss = 1
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::atomdata::{build_k_tensor, dy_reference_k, parse_linelist, KTensor};
use crate::error::{Error, Result};
use crate::scales::DEFAULT_DELTA_C6;
use crate::scattering::{self, CollisionConfig};
use crate::units::{gauss_to_au, kelvin_to_hartree, reduced_mass_au, DY164_MASS_AMU, DY_GROUND_G_FACTOR};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "DYSPAIR_OUT";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomConfig {
    pub j: u32,
    pub g_j: f64,
    pub mass_amu: f64,
    /// Electric quadrupole moment, a.u.
    pub quadrupole_au: f64,
}

impl Default for AtomConfig {
    fn default() -> Self {
        Self { j: 8, g_j: DY_GROUND_G_FACTOR, mass_amu: DY164_MASS_AMU, quadrupole_au: -0.00524 }
    }
}

/// Where the K tensor comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KSource {
    /// Built-in Dy values.
    Reference,
    LineList(PathBuf),
}

impl FromStr for KSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "" => Err(Error::Config("empty k_source".into())),
            "reference" => Ok(KSource::Reference),
            path => Ok(KSource::LineList(PathBuf::from(path))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
}

impl RangeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_max > self.r_min) {
            return Err(Error::Config(format!("need 0 < rmin < rmax, got {} and {}", self.r_min, self.r_max)));
        }
        if self.points == 0 {
            return Err(Error::Config("need at least one point".into()));
        }
        Ok(())
    }

    /// Uniform grid; a single point sits at `r_min`.
    pub fn grid(&self) -> Result<Vec<f64>> {
        self.validate()?;
        if self.points == 1 {
            return Ok(vec![self.r_min]);
        }
        let step = (self.r_max - self.r_min) / (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| if i == self.points - 1 { self.r_max } else { self.r_min + step * i as f64 })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScattConfig {
    pub c6_au: f64,
    pub r_inner: f64,
    /// `None` for the per-energy automatic radius.
    pub r_outer: Option<f64>,
    pub grid_step: f64,
    pub l_max: u32,
    pub e_min_uk: f64,
    pub e_max_uk: f64,
    pub points: usize,
    /// Required for the Born rates; deliberately no default.
    pub b_field_gauss: Option<f64>,
}

impl Default for ScattConfig {
    fn default() -> Self {
        Self {
            c6_au: scattering::DEFAULT_C6,
            r_inner: scattering::DEFAULT_R_INNER,
            r_outer: None,
            grid_step: scattering::DEFAULT_GRID_STEP,
            l_max: scattering::DEFAULT_L_MAX,
            e_min_uk: scattering::DEFAULT_E_MIN_K * 1e6,
            e_max_uk: scattering::DEFAULT_E_MAX_K * 1e6,
            points: scattering::DEFAULT_E_POINTS,
            b_field_gauss: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format '{other}' (csv or json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub atom: AtomConfig,
    pub k_source: KSource,
    pub delta_c6_au: f64,
    pub b_fields_gauss: Vec<f64>,
    pub scales: RangeConfig,
    pub adiabats: RangeConfig,
    pub scattering: ScattConfig,
    pub output_dir: PathBuf,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            atom: AtomConfig::default(),
            k_source: KSource::Reference,
            delta_c6_au: DEFAULT_DELTA_C6,
            b_fields_gauss: vec![10.0, 100.0],
            scales: RangeConfig { r_min: 10.0, r_max: 200.0, points: 381 },
            adiabats: RangeConfig { r_min: 20.0, r_max: 400.0, points: 381 },
            scattering: ScattConfig::default(),
            output_dir: PathBuf::from("."),
            format: Format::Csv,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Config(format!("bad value '{value}' for {key}")))
}

/// Comma-separated floats; an empty string is an empty list.
pub fn parse_float_list(value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Config(format!("bad number '{s}' in list"))))
        .collect()
}

/// Sections of a config file: `section -> key -> (line, value)`.
pub type RawConfig = BTreeMap<String, BTreeMap<String, (usize, String)>>;

pub fn parse_raw(text: &str) -> Result<RawConfig> {
    let mut raw = RawConfig::new();
    let mut section = String::new();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse { line: n, message: "unterminated section header".into() })?;
            section = name.trim().to_string();
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: n, message: format!("expected 'key = value', got '{line}'") })?;
        let key = key.trim().to_string();
        if key.is_empty() {
            return Err(Error::Parse { line: n, message: "empty key".into() });
        }
        let entries = raw.entry(section.clone()).or_default();
        if entries.insert(key.clone(), (n, value.trim().to_string())).is_some() {
            return Err(Error::Parse { line: n, message: format!("duplicate key '{key}'") });
        }
    }
    Ok(raw)
}

impl RunConfig {
    pub fn from_str_config(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (section, entries) in parse_raw(text)? {
            for (key, (n, value)) in entries {
                cfg.set(&section, &key, &value)
                    .map_err(|e| Error::Parse { line: n, message: e.to_string() })?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str_config(&text)
    }

    fn set(&mut self, section: &str, key: &str, value: &str) -> Result<()> {
        let p = |v: &str| -> Result<f64> { parse_num(key, v) };
        match (section, key) {
            ("atom", "j") => self.atom.j = parse_num(key, value)?,
            ("atom", "g_j") => self.atom.g_j = p(value)?,
            ("atom", "mass_amu") => self.atom.mass_amu = p(value)?,
            ("atom", "quadrupole_au") => self.atom.quadrupole_au = p(value)?,
            ("c6", "k_source") => self.k_source = value.parse()?,
            ("scales", "delta_c6_au") => self.delta_c6_au = p(value)?,
            ("scales", "b_fields_gauss") => self.b_fields_gauss = parse_float_list(value)?,
            ("scales", "rmin") => self.scales.r_min = p(value)?,
            ("scales", "rmax") => self.scales.r_max = p(value)?,
            ("scales", "points") => self.scales.points = parse_num(key, value)?,
            ("adiabats", "rmin") => self.adiabats.r_min = p(value)?,
            ("adiabats", "rmax") => self.adiabats.r_max = p(value)?,
            ("adiabats", "points") => self.adiabats.points = parse_num(key, value)?,
            ("scattering", "c6_au") => self.scattering.c6_au = p(value)?,
            ("scattering", "r_inner") => self.scattering.r_inner = p(value)?,
            ("scattering", "r_outer") => {
                self.scattering.r_outer = if value == "auto" { None } else { Some(p(value)?) }
            }
            ("scattering", "grid_step") => self.scattering.grid_step = p(value)?,
            ("scattering", "l_max") => self.scattering.l_max = parse_num(key, value)?,
            ("scattering", "emin_uk") => self.scattering.e_min_uk = p(value)?,
            ("scattering", "emax_uk") => self.scattering.e_max_uk = p(value)?,
            ("scattering", "points") => self.scattering.points = parse_num(key, value)?,
            ("scattering", "b_field_gauss") => self.scattering.b_field_gauss = Some(p(value)?),
            ("output", "dir") => self.output_dir = PathBuf::from(value),
            ("output", "format") => self.format = value.parse()?,
            _ => {
                let name = if section.is_empty() { key.to_string() } else { format!("[{section}] {key}") };
                return Err(Error::Config(format!("unknown setting {name}")));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        if self.atom.j == 0 {
            return Err(Error::Config("j must be at least 1".into()));
        }
        positive("g_j", self.atom.g_j)?;
        positive("mass_amu", self.atom.mass_amu)?;
        if !(self.delta_c6_au >= 0.0) {
            return Err(Error::Config(format!("delta_c6_au must be non-negative, got {}", self.delta_c6_au)));
        }
        if let Some(b) = self.b_fields_gauss.iter().find(|b| !(**b >= 0.0)) {
            return Err(Error::Config(format!("field {b} G is negative")));
        }
        self.scales.validate()?;
        self.adiabats.validate()?;
        let s = &self.scattering;
        positive("c6_au", s.c6_au)?;
        positive("r_inner", s.r_inner)?;
        positive("grid_step", s.grid_step)?;
        positive("emin_uk", s.e_min_uk)?;
        if s.e_max_uk < s.e_min_uk || s.points == 0 {
            return Err(Error::Config("energy range needs emin <= emax and at least one point".into()));
        }
        if let Some(b) = s.b_field_gauss {
            positive("b_field_gauss", b)?;
        }
        Ok(())
    }

    pub fn reduced_mass(&self) -> f64 {
        reduced_mass_au(self.atom.mass_amu, self.atom.mass_amu)
    }

    /// Resolves the K tensor; relative line-list paths are taken from the
    /// working directory.
    pub fn k_tensor(&self) -> Result<KTensor> {
        match &self.k_source {
            KSource::Reference => {
                if self.atom.j != 8 {
                    return Err(Error::Config(format!(
                        "built-in K values are for j = 8, configured j = {}; give a line list",
                        self.atom.j
                    )));
                }
                Ok(dy_reference_k())
            }
            KSource::LineList(path) => {
                let file = std::fs::File::open(path)
                    .map_err(|e| Error::Config(format!("cannot open line list {}: {e}", path.display())))?;
                let lines = parse_linelist(std::io::BufReader::new(file), self.atom.j)?;
                build_k_tensor(&lines, self.atom.j)
            }
        }
    }

    pub fn collision_config(&self) -> Result<CollisionConfig> {
        let s = &self.scattering;
        let energies = scattering::log_energy_grid(s.e_min_uk * 1e-6, s.e_max_uk * 1e-6, s.points)?;
        let c = CollisionConfig {
            c6: s.c6_au,
            reduced_mass: self.reduced_mass(),
            r_match_inner: s.r_inner,
            r_match_outer: s.r_outer,
            grid_step: s.grid_step,
            l_max: s.l_max,
            energies,
        };
        c.validate()?;
        Ok(c)
    }

    /// Born field in a.u.; an error when none was given.
    pub fn born_field(&self) -> Result<f64> {
        self.scattering
            .b_field_gauss
            .map(gauss_to_au)
            .ok_or_else(|| Error::Config("a magnetic field is required for the Born rates (--bfield)".into()))
    }
}

/// `500 uK` etc. in Hartree.
pub fn microkelvin(t: f64) -> f64 {
    kelvin_to_hartree(t * 1e-6)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
        assert!(RunConfig::default().born_field().is_err());
    }

    #[test]
    fn parses_sections() {
        let text = "# demo\n[atom]\nj = 8\ng_j = 1.2 # inline\n\n[scales]\nb_fields_gauss = 1, 2.5\n[scattering]\nr_outer = auto\nb_field_gauss = 1\n[output]\nformat = json\n";
        let c = RunConfig::from_str_config(text).unwrap();
        assert_eq!(c.atom.g_j, 1.2);
        assert_eq!(c.b_fields_gauss, vec![1.0, 2.5]);
        assert_eq!(c.scattering.r_outer, None);
        assert_eq!(c.scattering.b_field_gauss, Some(1.0));
        assert_eq!(c.format, Format::Json);
    }

    #[test]
    fn reports_line_numbers() {
        let err = RunConfig::from_str_config("[atom]\n\nj = eight\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = RunConfig::from_str_config("[atom]\nbogus = 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(RunConfig::from_str_config("[atom\n").is_err());
        assert!(RunConfig::from_str_config("[atom]\nj = 8\nj = 8\n").is_err());
        assert!(RunConfig::from_str_config("no equals here\n").is_err());
    }

    #[test]
    fn invalid_values() {
        assert!(RunConfig::from_str_config("[adiabats]\nrmin = 50\nrmax = 40\n").is_err());
        assert!(RunConfig::from_str_config("[scales]\nb_fields_gauss = -1\n").is_err());
        assert!(RunConfig::from_str_config("[c6]\nk_source = /does/not/exist\n").unwrap().k_tensor().is_err());
    }

    #[test]
    fn grids() {
        let r = RangeConfig { r_min: 20.0, r_max: 400.0, points: 1 };
        assert_eq!(r.grid().unwrap(), vec![20.0]);
        let r = RangeConfig { points: 5, ..r };
        assert_eq!(r.grid().unwrap(), vec![20.0, 115.0, 210.0, 305.0, 400.0]);
    }

    #[test]
    fn collision_config_from_run() {
        let c = RunConfig::default().collision_config().unwrap();
        assert_eq!(c.energies.len(), 60);
        assert_eq!(c.r_match_inner, 35.0);
    }
}
