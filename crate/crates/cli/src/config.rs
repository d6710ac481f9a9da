//! Config files: a JSON object (or array of objects) with a `scenario` name
//! and flat fields overlaying that scenario's defaults.

use std::path::Path;

use odsim_core::{ScenarioConfig, ScenarioKind};
use serde_json::{Map, Value};

fn valid_names() -> String {
    ScenarioKind::ALL
        .iter()
        .map(|k| k.name())
        .collect::<Vec<_>>()
        .join(", ")
}

/// `key=value`; the value is read as JSON when it parses, else as a string.
pub fn parse_override(raw: &str) -> Result<(String, Value), String> {
    let (key, value) = raw
        .split_once('=')
        .ok_or_else(|| format!("override '{raw}' is not of the form key=value"))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(format!("override '{raw}' has an empty key"));
    }
    let value = serde_json::from_str(value.trim()).unwrap_or_else(|_| Value::String(value.into()));
    Ok((key.to_string(), value))
}

fn resolve(entry: &Value, overrides: &[(String, Value)]) -> Result<ScenarioConfig, String> {
    let Value::Object(fields) = entry else {
        return Err("each config entry must be a JSON object".into());
    };
    let mut fields = fields.clone();
    for (k, v) in overrides {
        fields.insert(k.clone(), v.clone());
    }
    let name = match fields.get("scenario") {
        Some(Value::String(s)) => s.clone(),
        Some(other) => return Err(format!("scenario must be a string, got {other}")),
        None => {
            return Err(format!(
                "config has no 'scenario'; valid scenarios: {}",
                valid_names()
            ))
        }
    };
    let kind = ScenarioKind::parse(&name).ok_or_else(|| {
        format!(
            "unknown scenario '{name}'; valid scenarios: {}",
            valid_names()
        )
    })?;

    let Value::Object(mut merged) =
        serde_json::to_value(ScenarioConfig::defaults(kind)).map_err(|e| e.to_string())?
    else {
        unreachable!("ScenarioConfig serializes to an object");
    };
    merge(&mut merged, fields);
    let config: ScenarioConfig =
        serde_json::from_value(Value::Object(merged)).map_err(|e| format!("{name}: {e}"))?;
    config.validate().map_err(|e| format!("{name}: {e}"))?;
    Ok(config)
}

fn merge(into: &mut Map<String, Value>, from: Map<String, Value>) {
    for (k, v) in from {
        into.insert(k, v);
    }
}

pub fn load(path: &Path, overrides: &[String]) -> Result<Vec<ScenarioConfig>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| format!("config {} is not valid JSON: {e}", path.display()))?;
    let overrides = overrides
        .iter()
        .map(|o| parse_override(o))
        .collect::<Result<Vec<_>, _>>()?;
    let entries = match &doc {
        Value::Array(items) if items.is_empty() => return Err("config array is empty".into()),
        Value::Array(items) => items.clone(),
        other => vec![other.clone()],
    };
    let configs = entries
        .iter()
        .map(|e| resolve(e, &overrides))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, c) in configs.iter().enumerate() {
        if configs[..i].iter().any(|p| p.scenario == c.scenario) {
            return Err(format!(
                "scenario '{}' appears twice; each writes {0}.csv",
                c.scenario.name()
            ));
        }
    }
    Ok(configs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn override_values() {
        assert_eq!(
            parse_override("epsilon=0").unwrap(),
            ("epsilon".into(), json!(0))
        );
        assert_eq!(
            parse_override("scenario=gem").unwrap(),
            ("scenario".into(), json!("gem"))
        );
        assert_eq!(
            parse_override("omega_over_gamma_list=[0,1]").unwrap().1,
            json!([0, 1])
        );
        assert!(parse_override("epsilon").is_err());
        assert!(parse_override("=3").is_err());
    }

    #[test]
    fn defaults_fill_missing_fields() {
        let c = resolve(&json!({"scenario": "gem"}), &[]).unwrap();
        assert_eq!(c, ScenarioConfig::defaults(ScenarioKind::Gem));
    }

    #[test]
    fn unknown_key_is_an_error() {
        let err = resolve(&json!({"scenario": "cascade", "epsilom": 0.5}), &[]).unwrap_err();
        assert!(err.contains("epsilom"), "{err}");
    }

    #[test]
    fn unknown_scenario_names_the_valid_ones() {
        let err = resolve(&json!({"scenario": "fig9"}), &[]).unwrap_err();
        for k in ScenarioKind::ALL {
            assert!(err.contains(k.name()));
        }
    }

    #[test]
    fn override_wins_over_file() {
        let o = vec![parse_override("epsilon=0.25").unwrap()];
        let c = resolve(&json!({"scenario": "cascade", "epsilon": 0.5}), &o).unwrap();
        assert_eq!(c.epsilon, 0.25);
    }
}
