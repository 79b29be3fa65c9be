//! TOML configuration: where the fixture files live, scoring weights, and
//! build options. All paths in the file are resolved relative to the file
//! itself, so a config can be shipped next to its fixtures.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::query::Weights;
use crate::{Error, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub paths: Paths,
    #[serde(default)]
    pub scoring: Weights,
    #[serde(default)]
    pub build: BuildOptions,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    pub lexicon: PathBuf,
    pub grammar: PathBuf,
    pub sense_dictionary: PathBuf,
    #[serde(default)]
    pub synonym_lexicons: Vec<PathBuf>,
    pub derivation_patterns: PathBuf,
    /// Output location of the index; the one path that need not exist yet.
    pub index: PathBuf,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BuildOptions {
    /// Worker threads for the build phase; 0 means one per core.
    pub workers: usize,
}

pub fn load_config(path: &Path) -> Result<Config> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut config: Config = toml::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;

    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let resolve = |p: &mut PathBuf| *p = base.join(&*p);
    resolve(&mut config.paths.lexicon);
    resolve(&mut config.paths.grammar);
    resolve(&mut config.paths.sense_dictionary);
    config.paths.synonym_lexicons.iter_mut().for_each(resolve);
    resolve(&mut config.paths.derivation_patterns);
    resolve(&mut config.paths.index);

    config.validate()?;
    Ok(config)
}

impl Config {
    fn validate(&self) -> Result<()> {
        let w = &self.scoring;
        for (name, value) in [
            ("original", w.original),
            ("synonym", w.synonym),
            ("derived", w.derived),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::Config(format!(
                    "scoring.{name} must be positive, got {value}"
                )));
            }
        }
        // expanded matches must never outrank verbatim ones
        if w.synonym > w.original {
            return Err(Error::Config(format!(
                "scoring.synonym ({}) must not exceed scoring.original ({})",
                w.synonym, w.original
            )));
        }
        if w.derived > w.original {
            return Err(Error::Config(format!(
                "scoring.derived ({}) must not exceed scoring.original ({})",
                w.derived, w.original
            )));
        }
        if !(w.partial_match_threshold > 0.0 && w.partial_match_threshold <= 1.0) {
            return Err(Error::Config(format!(
                "scoring.partial_match_threshold must be in (0, 1], got {}",
                w.partial_match_threshold
            )));
        }

        for path in self.input_paths() {
            if !path.is_file() {
                return Err(Error::Config(format!(
                    "referenced file does not exist: {}",
                    path.display()
                )));
            }
        }
        Ok(())
    }

    /// Every configured path that must already exist (the index is output).
    pub fn input_paths(&self) -> Vec<&Path> {
        let p = &self.paths;
        let mut paths = vec![
            p.lexicon.as_path(),
            p.grammar.as_path(),
            p.sense_dictionary.as_path(),
        ];
        paths.extend(p.synonym_lexicons.iter().map(PathBuf::as_path));
        paths.push(p.derivation_patterns.as_path());
        paths
    }
}
