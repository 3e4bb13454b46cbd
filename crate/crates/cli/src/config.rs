use crate::args::{Cli, Format};
use crate::CliError;
use clap::ValueEnum;
use hrcone::quadrature::QuadConfig;
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

pub const FORMAT_ENV: &str = "HRCONE_FORMAT";

const KNOWN_KEYS: [&str; 9] =
    ["format", "seed", "tol-abs", "tol-rel", "max-subdivisions", "trials", "grid-size", "ell-max", "eps-grid"];

/// Presets read from a key=value file. Blank lines and lines starting with '#' are skipped.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Input(format!("config line {}: expected key=value", i + 1)))?;
            let k = k.trim().replace('_', "-");
            if !KNOWN_KEYS.contains(&k.as_str()) {
                return Err(CliError::Input(format!("config line {}: unknown key '{k}'", i + 1)));
            }
            values.insert(k, v.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Input(format!("config value for '{key}' is malformed: '{v}'"))),
        }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// Settings after applying argv over the config file over defaults.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub format: Format,
    pub seed: u64,
    pub quad: QuadConfig,
    pub file: ConfigFile,
}

impl Resolved {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let format = match cli.format {
            Some(f) => f,
            None => {
                let from = file.raw("format").map(str::to_string).or_else(|| std::env::var(FORMAT_ENV).ok());
                match from {
                    Some(s) => Format::from_str(&s, true).map_err(|_| CliError::Input(format!("unknown format '{s}'")))?,
                    None => Format::Json,
                }
            }
        };
        let mut quad = QuadConfig::default();
        if let Some(v) = cli.tol_abs.or(file.get("tol-abs")?) {
            quad.abs_tol = v;
        }
        if let Some(v) = cli.tol_rel.or(file.get("tol-rel")?) {
            quad.rel_tol = v;
        }
        if let Some(v) = file.get("max-subdivisions")? {
            quad.max_subdivisions = v;
        }
        if !(quad.abs_tol >= 0.0 && quad.rel_tol >= 0.0) || quad.abs_tol + quad.rel_tol == 0.0 {
            return Err(CliError::Input("tolerances must be nonnegative and not both zero".into()));
        }
        let seed = cli.seed.or(file.get("seed")?).unwrap_or(42);
        Ok(Resolved { format, seed, quad, file })
    }

    /// argv value, else config value, else `default`.
    pub fn pick<T: FromStr>(&self, argv: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        Ok(match argv {
            Some(v) => v,
            None => self.file.get(key)?.unwrap_or(default),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let c = ConfigFile::parse("# presets\ntol_abs = 1e-13\n\ngrid-size=300\n").unwrap();
        assert_eq!(c.get::<f64>("tol-abs").unwrap(), Some(1e-13));
        assert_eq!(c.get::<usize>("grid-size").unwrap(), Some(300));
        assert!(ConfigFile::parse("colour=red").is_err());
        assert!(ConfigFile::parse("seed").is_err());
        assert!(ConfigFile::parse("seed=x").unwrap().get::<u64>("seed").is_err());
    }
}
