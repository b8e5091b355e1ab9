//! Experiment configuration.
//!
//! A config file is TOML restricted to flat `key = value` pairs grouped into one section
//! per experiment (`[cantilever]`, `[helix]`, `[objectivity]`, `[bent_helix]`,
//! `[heavy_top]`, `[conservation]`, `[liegroup_selftest]`). Every key is optional and
//! falls back to its default; unknown sections and keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, BenchResult};
use crate::experiments::{
    bent_helix::BentHelixConfig, cantilever::CantileverConfig, conservation::ConservationConfig,
    heavy_top::HeavyTopConfig, helix::HelixConfig, objectivity::ObjectivityConfig,
    selftest::SelftestConfig, Experiment,
};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub cantilever: CantileverConfig,
    pub helix: HelixConfig,
    pub objectivity: ObjectivityConfig,
    pub bent_helix: BentHelixConfig,
    pub heavy_top: HeavyTopConfig,
    pub conservation: ConservationConfig,
    pub liegroup_selftest: SelftestConfig,
}

impl Config {
    pub fn parse(text: &str) -> BenchResult<Self> {
        toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> BenchResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The default section of one experiment rendered as config text.
    pub fn default_section(exp: Experiment) -> String {
        let full = toml::to_string(&Config::default()).expect("defaults serialize");
        let table: toml::Table = full.parse().expect("serialized defaults parse");
        let mut out = toml::Table::new();
        out.insert(exp.section().to_string(), table[exp.section()].clone());
        toml::to_string(&out).expect("section serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(Config::parse("").unwrap(), Config::default());
    }

    #[test]
    fn defaults_round_trip() {
        for exp in Experiment::ALL {
            let text = Config::default_section(exp);
            assert_eq!(Config::parse(&text).unwrap(), Config::default(), "{exp}");
        }
    }

    #[test]
    fn partial_section_overrides() {
        let c = Config::parse("[cantilever]\nincrements = 7\nn_el = [1, 2]\n").unwrap();
        assert_eq!(c.cantilever.increments, 7);
        assert_eq!(c.cantilever.n_el, vec![1, 2]);
        assert_eq!(c.helix, HelixConfig::default());
    }

    #[test]
    fn unknown_keys_and_sections_rejected() {
        for text in ["[cantilever]\nincrement = 7\n", "[spiral]\nx = 1\n", "stray = 1\n"] {
            assert!(matches!(Config::parse(text), Err(BenchError::Config(_))), "{text}");
        }
    }
}
