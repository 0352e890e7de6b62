//! Versioned JSON configs, flag overrides and schema errors with JSON pointers.

use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

/// A config problem, located by a JSON pointer into the merged config.
#[derive(Debug)]
pub struct ConfigError {
    pub pointer: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Self { pointer: pointer.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() { "<root>" } else { &self.pointer };
        write!(f, "config error at {at}: {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

pub fn load(path: &Path) -> Result<Map<String, Value>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::new("", format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| ConfigError::new("", format!("invalid JSON in {}: {e}", path.display())))?;
    match value {
        Value::Object(map) => Ok(map),
        _ => Err(ConfigError::new("", "config must be a JSON object")),
    }
}

/// Checks `schema_version` and `command`, and strips them from the map.
pub fn take_header(map: &mut Map<String, Value>, command: &str) -> Result<(), ConfigError> {
    match map.remove("schema_version") {
        None => {}
        Some(Value::Number(n)) if n.as_u64() == Some(SCHEMA_VERSION) => {}
        Some(other) => {
            return Err(ConfigError::new("/schema_version", format!("unsupported schema version {other}, expected {SCHEMA_VERSION}")))
        }
    }
    match map.remove("command") {
        None => Ok(()),
        Some(Value::String(c)) if c == command => Ok(()),
        Some(other) => Err(ConfigError::new("/command", format!("config is for {other}, not \"{command}\""))),
    }
}

/// Writes `value` at `pointer` (e.g. `/law/alpha`), creating objects on the way.
pub fn set_pointer(root: &mut Map<String, Value>, pointer: &str, value: Value) {
    let keys: Vec<&str> = pointer.trim_start_matches('/').split('/').collect();
    let mut node = root;
    for key in &keys[..keys.len() - 1] {
        let slot = node.entry(key.to_string()).or_insert_with(|| Value::Object(Map::new()));
        if !slot.is_object() {
            *slot = Value::Object(Map::new());
        }
        node = slot.as_object_mut().expect("object just ensured");
    }
    node.insert(keys[keys.len() - 1].to_string(), value);
}

pub fn parse<T: DeserializeOwned>(map: Map<String, Value>) -> Result<T, ConfigError> {
    serde_path_to_error::deserialize(Value::Object(map)).map_err(|e| {
        let pointer: String = e
            .path()
            .iter()
            .filter_map(|seg| match seg {
                serde_path_to_error::Segment::Seq { index } => Some(format!("/{index}")),
                serde_path_to_error::Segment::Map { key } => Some(format!("/{key}")),
                serde_path_to_error::Segment::Enum { variant } => Some(format!("/{variant}")),
                serde_path_to_error::Segment::Unknown => None,
            })
            .collect();
        ConfigError::new(pointer, e.into_inner().to_string())
    })
}
