//! Flat key-value config files: one `key = value` per line, `#` comments,
//! keys dot-namespaced. Manifests reuse the format, so `run.*` and
//! `result.*` keys are carried but never interpreted as configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::CliError;

/// Parsed key-value file, keys sorted.
#[derive(Debug, Clone, Default)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (lineno, raw_line) in text.lines().enumerate() {
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    lineno + 1
                ))
            })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key", lineno + 1)));
            }
            entries.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn apply_override(&mut self, spec: &str) -> Result<(), CliError> {
        let (key, value) = spec.split_once('=').ok_or_else(|| {
            CliError::Config(format!("override `{spec}` is not of the form KEY=VALUE"))
        })?;
        self.entries
            .insert(key.trim().to_string(), value.trim().to_string());
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), value.into());
    }

    /// Raw value, ignoring manifest bookkeeping keys on lookup is not needed:
    /// those live under `run.` / `result.` namespaces which no scenario reads.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key)
            .ok_or_else(|| CliError::Config(format!("missing required key `{key}`")))
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| CliError::Config(format!("key `{key}`: `{v}` is not a number")))
            })
            .transpose()
    }

    pub fn require_f64(&self, key: &str) -> Result<f64, CliError> {
        self.get_f64(key)?
            .ok_or_else(|| CliError::Config(format!("missing required key `{key}`")))
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| CliError::Config(format!("key `{key}`: `{v}` is not a count")))
            })
            .transpose()
    }

    pub fn get_bool(&self, key: &str) -> Result<Option<bool>, CliError> {
        self.get(key)
            .map(|v| match v {
                "true" => Ok(true),
                "false" => Ok(false),
                other => Err(CliError::Config(format!(
                    "key `{key}`: `{other}` is not true/false"
                ))),
            })
            .transpose()
    }

    pub fn get_f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|item| {
                        item.trim().parse::<f64>().map_err(|_| {
                            CliError::Config(format!(
                                "key `{key}`: `{}` is not a number",
                                item.trim()
                            ))
                        })
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn get_usize_list(&self, key: &str) -> Result<Option<Vec<usize>>, CliError> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|item| {
                        item.trim().parse::<usize>().map_err(|_| {
                            CliError::Config(format!(
                                "key `{key}`: `{}` is not a count",
                                item.trim()
                            ))
                        })
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn get_string_list(&self, key: &str) -> Option<Vec<String>> {
        self.get(key)
            .map(|v| v.split(',').map(|s| s.trim().to_string()).collect())
    }

    /// Complex entries in `re` or `re+imi` / `re-imi` form, comma-separated.
    pub fn get_complex_list(&self, key: &str) -> Result<Option<Vec<uqsl_core::C64>>, CliError> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|item| parse_complex(key, item.trim()))
                    .collect()
            })
            .transpose()
    }

    /// All keys except the `run.` / `result.` manifest namespaces.
    pub fn config_keys(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries
            .iter()
            .filter(|(k, _)| !k.starts_with("run.") && !k.starts_with("result."))
            .map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Serializes the configuration keys, sorted, one per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (key, value) in self.config_keys() {
            let _ = writeln!(out, "{key} = {value}");
        }
        out
    }
}

pub fn parse_complex(key: &str, text: &str) -> Result<uqsl_core::C64, CliError> {
    let bad = || CliError::Config(format!("key `{key}`: `{text}` is not a complex number"));
    let t = text.trim();
    if let Some(imag_part) = t.strip_suffix('i') {
        // split at the sign that separates real and imaginary parts
        let chars: Vec<char> = imag_part.chars().collect();
        for pos in (1..chars.len()).rev() {
            if (chars[pos] == '+' || chars[pos] == '-')
                && chars[pos - 1] != 'e'
                && chars[pos - 1] != 'E'
            {
                let re: f64 = imag_part[..pos].parse().map_err(|_| bad())?;
                let im_text = &imag_part[pos..];
                let im: f64 = if im_text == "+" {
                    1.0
                } else if im_text == "-" {
                    -1.0
                } else {
                    im_text.parse().map_err(|_| bad())?
                };
                return Ok(uqsl_core::C64::new(re, im));
            }
        }
        // pure imaginary like `2i` or `i`
        let im: f64 = if imag_part.is_empty() {
            1.0
        } else {
            imag_part.parse().map_err(|_| bad())?
        };
        return Ok(uqsl_core::C64::new(0.0, im));
    }
    let re: f64 = t.parse().map_err(|_| bad())?;
    Ok(uqsl_core::C64::new(re, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_comments_and_overrides() {
        let mut cfg =
            Config::parse("# comment\nscenario = pt_qubit\n\nalpha = 0.1, 0.5\n").unwrap();
        assert_eq!(cfg.get("scenario"), Some("pt_qubit"));
        assert_eq!(cfg.get_f64_list("alpha").unwrap().unwrap(), vec![0.1, 0.5]);
        cfg.apply_override("scenario=xxz").unwrap();
        assert_eq!(cfg.get("scenario"), Some("xxz"));
        assert!(Config::parse("no equals sign").is_err());
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(
            parse_complex("k", "1.5").unwrap(),
            uqsl_core::C64::new(1.5, 0.0)
        );
        assert_eq!(
            parse_complex("k", "1+2i").unwrap(),
            uqsl_core::C64::new(1.0, 2.0)
        );
        assert_eq!(
            parse_complex("k", "-1e-3-2.5i").unwrap(),
            uqsl_core::C64::new(-1e-3, -2.5)
        );
        assert_eq!(
            parse_complex("k", "2i").unwrap(),
            uqsl_core::C64::new(0.0, 2.0)
        );
        assert_eq!(
            parse_complex("k", "1e2").unwrap(),
            uqsl_core::C64::new(100.0, 0.0)
        );
        assert!(parse_complex("k", "oops").is_err());
    }

    #[test]
    fn render_skips_manifest_namespaces() {
        let mut cfg =
            Config::parse("b = 2\na = 1\nrun.wall = 3\nresult.checksums.x = y\n").unwrap();
        cfg.set("c", "3");
        assert_eq!(cfg.render(), "a = 1\nb = 2\nc = 3\n");
    }
}
