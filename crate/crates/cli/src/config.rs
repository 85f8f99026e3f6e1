//! Merging `--config` files under command-line flags.

use std::fs;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::args::{Format, IoArgs};
use crate::error::CliError;

pub trait RunArgs: Serialize + DeserializeOwned {
    fn io(&self) -> &IoArgs;
    fn io_mut(&mut self) -> &mut IoArgs;
    fn fill_defaults(&mut self);
}

/// Flags given on the command line win over the config file; keys the
/// subcommand does not know are rejected.
pub fn resolve<A: RunArgs>(cli: A) -> Result<A, CliError> {
    let path = cli.io().config.clone();
    let mut merged = serde_json::to_value(&cli).expect("flags serialize");
    if let Some(path) = &path {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let file: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {} is not JSON: {e}", path.display())))?;
        let Value::Object(file) = file else {
            return Err(CliError::Usage("config must be a JSON object".into()));
        };
        let slots = merged.as_object_mut().expect("flags serialize to an object");
        for (k, v) in file {
            match slots.get_mut(&k) {
                None => return Err(CliError::Usage(format!("unknown config key `{k}`"))),
                Some(slot) if slot.is_null() => *slot = v,
                Some(_) => {}
            }
        }
    }
    let mut a: A = serde_json::from_value(merged).map_err(|e| CliError::Usage(format!("bad config value: {e}")))?;
    a.io_mut().config = path;
    a.io_mut().format.get_or_insert(Format::Json);
    a.fill_defaults();
    Ok(a)
}

pub fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str, CliError> {
    v.as_deref().ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
}

pub fn tolerance(tol: Option<f64>) -> Result<f64, CliError> {
    match tol {
        Some(t) if t.is_finite() && t >= 0.0 => Ok(t),
        Some(t) => Err(CliError::Usage(format!("--tol must be a nonnegative number, got {t}"))),
        None => unreachable!("defaults filled"),
    }
}
