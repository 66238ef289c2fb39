//! Run configuration: the bundled defaults, an optional override file, then
//! command-line flags, each layer replacing what the previous one set.

use std::path::Path;

use altlink::checkerboard::IsoMode;
use altlink::chirality::ClassifyConfig;
use altlink::diagram::ReflectionPolicy;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

const DEFAULTS: &str = include_str!("../data/defaults.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Table,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Reflection {
    Preserving,
    Reflecting,
}

impl From<Reflection> for ReflectionPolicy {
    fn from(r: Reflection) -> Self {
        match r {
            Reflection::Preserving => ReflectionPolicy::PRESERVING,
            Reflection::Reflecting => ReflectionPolicy::REFLECTING,
        }
    }
}

/// Every key is optional so a file may override only some of them.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Layer {
    version: Option<u32>,
    iso_mode: Option<IsoMode>,
    reflection: Option<Reflection>,
    max_orbit: Option<usize>,
    format: Option<Format>,
    oracle_checks: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub defaults_version: u32,
    pub iso_mode: IsoMode,
    pub reflection: Reflection,
    pub max_orbit: usize,
    pub format: Format,
    pub oracle_checks: bool,
}

/// Flag values; `None` leaves the configured value alone.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub iso_mode: Option<IsoMode>,
    pub reflection: Option<Reflection>,
    pub max_orbit: Option<usize>,
    pub format: Option<Format>,
    pub oracle_checks: bool,
}

impl RunConfig {
    pub fn load(file: Option<&Path>, flags: &Overrides) -> Result<RunConfig, String> {
        let base: Layer = toml::from_str(DEFAULTS).map_err(|e| format!("bundled defaults: {e}"))?;
        let mut cfg = RunConfig {
            defaults_version: base.version.ok_or("bundled defaults lack a version")?,
            iso_mode: base.iso_mode.ok_or("bundled defaults lack iso_mode")?,
            reflection: base.reflection.ok_or("bundled defaults lack reflection")?,
            max_orbit: base.max_orbit.ok_or("bundled defaults lack max_orbit")?,
            format: base.format.ok_or("bundled defaults lack format")?,
            oracle_checks: base.oracle_checks.unwrap_or(false),
        };
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let layer: Layer = toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            cfg.apply(layer);
        }
        cfg.apply(Layer {
            version: None,
            iso_mode: flags.iso_mode,
            reflection: flags.reflection,
            max_orbit: flags.max_orbit,
            format: flags.format,
            oracle_checks: flags.oracle_checks.then_some(true),
        });
        if cfg.max_orbit == 0 {
            return Err("max_orbit must be at least 1".into());
        }
        Ok(cfg)
    }

    fn apply(&mut self, l: Layer) {
        if let Some(v) = l.version {
            self.defaults_version = v;
        }
        if let Some(v) = l.iso_mode {
            self.iso_mode = v;
        }
        if let Some(v) = l.reflection {
            self.reflection = v;
        }
        if let Some(v) = l.max_orbit {
            self.max_orbit = v;
        }
        if let Some(v) = l.format {
            self.format = v;
        }
        if let Some(v) = l.oracle_checks {
            self.oracle_checks = v;
        }
    }

    pub fn classify(&self) -> ClassifyConfig {
        ClassifyConfig { iso_mode: self.iso_mode, reflection: self.reflection.into(), max_orbit: self.max_orbit }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_defaults_match_the_library() {
        let cfg = RunConfig::load(None, &Overrides::default()).unwrap();
        assert_eq!(cfg.classify(), ClassifyConfig::default());
        assert_eq!(cfg.format, Format::Table);
        assert!(!cfg.oracle_checks);
    }

    #[test]
    fn flags_win_over_file() {
        let dir = std::env::temp_dir().join(format!("altlink-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "iso_mode = \"embedded\"\nmax_orbit = 10\n").unwrap();
        let flags = Overrides { max_orbit: Some(20), ..Default::default() };
        let cfg = RunConfig::load(Some(&path), &flags).unwrap();
        assert_eq!(cfg.iso_mode, IsoMode::Embedded);
        assert_eq!(cfg.max_orbit, 20);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn zero_orbit_cap_is_rejected() {
        let flags = Overrides { max_orbit: Some(0), ..Default::default() };
        assert!(RunConfig::load(None, &flags).is_err());
    }
}
