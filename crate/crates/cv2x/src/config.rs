//! Flat key-value network configuration files.
//!
//! Format: one `key = value` per line, `#` starts a comment, blank lines
//! ignored. Keys mirror the [`NetworkConfig`] field names exactly; unknown
//! keys are parse errors. Unspecified fields keep the defaults; a
//! `scenario` line is applied first so explicit `alpha_s`/`m_s0`/`m_v0`
//! overrides win regardless of line order.

use std::path::Path;

use crate::channel::{NetworkConfig, Scenario};
use crate::{Error, Result};

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64> {
    value.parse::<f64>().map_err(|_| Error::Parse {
        line,
        msg: format!("{key}: expected a number, got `{value}`"),
    })
}

fn parse_u32(line: usize, key: &str, value: &str) -> Result<u32> {
    value.parse::<u32>().map_err(|_| Error::Parse {
        line,
        msg: format!("{key}: expected a non-negative integer, got `{value}`"),
    })
}

/// Parses config text into a validated [`NetworkConfig`].
pub fn parse_config(text: &str) -> Result<NetworkConfig> {
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected `key = value`, got `{line}`"),
            });
        };
        entries.push((line_no, key.trim().to_string(), value.trim().to_string()));
    }

    // Scenario first: it sets the paired (alpha_s, m_s0, m_v0) defaults
    // that explicit keys may then override.
    let mut cfg = NetworkConfig::default();
    for (line, key, value) in &entries {
        if key == "scenario" {
            let scenario = Scenario::parse(value).ok_or_else(|| Error::Parse {
                line: *line,
                msg: format!("scenario: expected `los` or `nlos`, got `{value}`"),
            })?;
            cfg = NetworkConfig::defaults(scenario);
        }
    }

    for (line, key, value) in &entries {
        let line = *line;
        match key.as_str() {
            "scenario" => {}
            "lambda_m" => cfg.lambda_m = parse_f64(line, key, value)?,
            "lambda_l" => cfg.lambda_l = parse_f64(line, key, value)?,
            "lambda_s" => cfg.lambda_s = parse_f64(line, key, value)?,
            "lambda_v" => cfg.lambda_v = parse_f64(line, key, value)?,
            "p_m_dbm" => cfg.p_m_dbm = parse_f64(line, key, value)?,
            "p_s_dbm" => cfg.p_s_dbm = parse_f64(line, key, value)?,
            "p_v_dbm" => cfg.p_v_dbm = parse_f64(line, key, value)?,
            "g_m_dbi" => cfg.g_m_dbi = parse_f64(line, key, value)?,
            "g_s0_dbi" => cfg.g_s0_dbi = parse_f64(line, key, value)?,
            "g_s1_dbi" => cfg.g_s1_dbi = parse_f64(line, key, value)?,
            "g_v0_dbi" => cfg.g_v0_dbi = parse_f64(line, key, value)?,
            "g_v1_dbi" => cfg.g_v1_dbi = parse_f64(line, key, value)?,
            "alpha_m" => cfg.alpha_m = parse_f64(line, key, value)?,
            "alpha_s" => cfg.alpha_s = parse_f64(line, key, value)?,
            "m_m" => cfg.m_m = parse_u32(line, key, value)?,
            "m_s0" => cfg.m_s0 = parse_u32(line, key, value)?,
            "m_s1" => cfg.m_s1 = parse_u32(line, key, value)?,
            "m_v0" => cfg.m_v0 = parse_u32(line, key, value)?,
            "m_v1" => cfg.m_v1 = parse_u32(line, key, value)?,
            "shadow_std_m_db" => cfg.shadow_std_m_db = parse_f64(line, key, value)?,
            "shadow_std_s0_db" => cfg.shadow_std_s0_db = parse_f64(line, key, value)?,
            "shadow_std_s1_db" => cfg.shadow_std_s1_db = parse_f64(line, key, value)?,
            "v_max_kmh" => cfg.v_max_kmh = parse_f64(line, key, value)?,
            "lambda_max_per_km" => cfg.lambda_max_per_km = parse_f64(line, key, value)?,
            "region_radius_km" => cfg.region_radius_km = parse_f64(line, key, value)?,
            "noise_power_w" => cfg.noise_power_w = parse_f64(line, key, value)?,
            other => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown key `{other}`"),
                })
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Loads and validates a config file; an empty file yields the defaults.
pub fn load_config(path: &Path) -> Result<NetworkConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_los_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, NetworkConfig::default());
        assert_eq!(cfg.scenario, Scenario::Los);
        assert_eq!(cfg.p_m_dbm, 46.0);
        assert_eq!(cfg.lambda_l, 10.0);
        assert_eq!(cfg.lambda_max_per_km, 63.0);
    }

    #[test]
    fn comments_and_overrides() {
        let cfg = parse_config(
            "# deployment\nscenario = nlos\nlambda_m = 2.5 # nodes/km^2\n\nlambda_s = 7.5\n",
        )
        .unwrap();
        assert_eq!(cfg.scenario, Scenario::Nlos);
        assert_eq!(cfg.alpha_s, 4.0);
        assert_eq!(cfg.lambda_m, 2.5);
        assert_eq!(cfg.lambda_s, 7.5);
    }

    #[test]
    fn scenario_applies_before_explicit_overrides() {
        // alpha_s before the scenario line still wins.
        let cfg = parse_config("alpha_s = 3\nscenario = nlos\n").unwrap();
        assert_eq!(cfg.alpha_s, 3.0);
        assert_eq!(cfg.m_s0, 1);
    }

    #[test]
    fn unknown_key_is_a_parse_error() {
        let err = parse_config("lambda_q = 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_config("lambda_m = 1\nnot a pair\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn invariant_violations_are_validation_errors() {
        let err = parse_config("lambda_m = -1\n").unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        // a_ms > b_ms check: pull MBS power down and raise the side lobe.
        let err = parse_config("p_m_dbm = 20\ng_v1_dbi = 0\ng_s0_dbi = 5\n").unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }
}
