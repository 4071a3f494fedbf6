use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

/// Keys accepted in a config file.
const KNOWN: &[&str] = &[
    "seed",
    "trials",
    "jobs",
    "generator.family",
    "generator.n",
    "generator.avg_degree",
    "generator.p_forward",
    "generator.p_backward",
    "delay.spec",
    "delay.mean",
    "delay.mean2",
    "delay.hetero",
    "delay.horizon",
    "infer.algo",
    "infer.iterations",
    "infer.ms",
    "infer.tau",
    "infer.deg_ave",
    "infer.vc_frac",
    "infer.kappa",
];

/// Flat `key=value` settings; `#` starts a comment line.
#[derive(Debug, Default, Clone)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|m| CliError::Usage(format!("{}: {m}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key=value", i + 1))?;
            let k = k.trim();
            if !KNOWN.contains(&k) {
                return Err(format!("line {}: unknown key {k:?}", i + 1));
            }
            values.insert(k.to_string(), v.trim().to_string());
        }
        Ok(Config { values })
    }

    /// The flag value if given, else the config value under `key`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key {key}: cannot parse {raw:?}"))),
        }
    }

    /// Like [`Config::pick`], failing with a message naming `flag_name`.
    pub fn require<T: FromStr>(
        &self,
        flag: Option<T>,
        key: &str,
        flag_name: &str,
    ) -> Result<T, CliError> {
        self.pick(flag, key)?.ok_or_else(|| {
            CliError::Usage(format!("missing {flag_name} (or {key} in the config file)"))
        })
    }
}
