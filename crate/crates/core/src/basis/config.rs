//! Level configuration files and the levels shipped with the crate.

use super::generator::{BuildContext, Generator, GeneratorRegistry};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::{Path, PathBuf};

const SHIPPED: &[(u64, &str)] = &[
    (1, include_str!("../../levels/level1.json")),
    (2, include_str!("../../levels/level2.json")),
    (3, include_str!("../../levels/level3.json")),
    (4, include_str!("../../levels/level4.json")),
    (5, include_str!("../../levels/level5.json")),
    (6, include_str!("../../levels/level6.json")),
    (7, include_str!("../../levels/level7.json")),
    (8, include_str!("../../levels/level8.json")),
    (9, include_str!("../../levels/level9.json")),
    (10, include_str!("../../levels/level10.json")),
    (11, include_str!("../../levels/level11.json")),
    (27, include_str!("../../levels/level27.json")),
    (31, include_str!("../../levels/level31.json")),
];

const SEEDS: &[(&str, &str)] = &[
    ("level11_f2.series", include_str!("../../levels/level11_f2.series")),
    ("level11_f3.series", include_str!("../../levels/level11_f3.series")),
];

fn default_precision() -> i64 {
    60
}

#[derive(Clone, Debug, Default)]
enum Source {
    #[default]
    Embedded,
    Dir(PathBuf),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelConfig {
    pub level: u64,
    #[serde(default)]
    pub genus_hint: Option<u64>,
    pub generators: Vec<Value>,
    #[serde(default = "default_precision")]
    pub precision: i64,
    #[serde(default)]
    pub description: String,
    #[serde(skip)]
    source: Source,
}

pub fn shipped_levels() -> Vec<u64> {
    SHIPPED.iter().map(|(n, _)| *n).collect()
}

pub fn shipped_seed(name: &str) -> Option<&'static str> {
    SEEDS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

impl LevelConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: LevelConfig = serde_json::from_str(text)?;
        if cfg.level == 0 {
            return Err(Error::Config("level must be positive".into()));
        }
        if cfg.generators.is_empty() {
            return Err(Error::Config("at least one generator is required".into()));
        }
        let g = crate::modcurve::level_data(cfg.level).genus;
        if let Some(h) = cfg.genus_hint {
            if h != g {
                return Err(Error::Config(format!("genus_hint {h} disagrees with genus {g} of X0({})", cfg.level)));
            }
        }
        Ok(cfg)
    }

    pub fn shipped(n: u64) -> Result<Self> {
        let text = SHIPPED
            .iter()
            .find(|(m, _)| *m == n)
            .map(|(_, t)| *t)
            .ok_or_else(|| Error::Config(format!("no shipped configuration for level {n}")))?;
        Self::from_json(text)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_json(&text)?;
        cfg.source = Source::Dir(path.parent().map(Path::to_path_buf).unwrap_or_default());
        Ok(cfg)
    }

    /// A bare integer names a shipped level; anything else is a config path.
    pub fn resolve(arg: &str) -> Result<Self> {
        match arg.trim().parse::<u64>() {
            Ok(n) => Self::shipped(n),
            Err(_) => Self::load(Path::new(arg)),
        }
    }

    fn read_seed(&self, name: &str) -> Result<String> {
        match &self.source {
            Source::Embedded => shipped_seed(name)
                .map(str::to_string)
                .ok_or_else(|| Error::Config(format!("unknown shipped seed {name:?}"))),
            Source::Dir(dir) => {
                let p = dir.join(name);
                if p.exists() {
                    Ok(std::fs::read_to_string(p)?)
                } else {
                    shipped_seed(name)
                        .map(str::to_string)
                        .ok_or_else(|| Error::Config(format!("seed file {} not found", p.display())))
                }
            }
        }
    }

    pub fn generators(&self, registry: &GeneratorRegistry) -> Result<Vec<Box<dyn Generator>>> {
        let load = |name: &str| self.read_seed(name);
        let ctx = BuildContext { level: self.level, load_seed: &load };
        self.generators.iter().map(|g| registry.build(g, &ctx)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_configs_parse() {
        let reg = GeneratorRegistry::default();
        for n in shipped_levels() {
            let cfg = LevelConfig::shipped(n).unwrap();
            assert_eq!(cfg.level, n);
            assert!(!cfg.generators(&reg).unwrap().is_empty());
        }
    }

    #[test]
    fn bad_configs() {
        assert!(LevelConfig::from_json(r#"{"level": 11, "genus_hint": 0, "generators": [{"kind":"klein_j"}]}"#).is_err());
        let cfg = LevelConfig::from_json(r#"{"level": 5, "generators": [{"kind":"mystery"}]}"#).unwrap();
        assert!(cfg.generators(&GeneratorRegistry::default()).is_err());
        assert!(LevelConfig::shipped(12).is_err());
    }
}
