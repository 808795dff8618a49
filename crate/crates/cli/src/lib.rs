//! Library surface of the scenario runner, so integration tests can drive
//! the exact code paths the binary uses.

// validation guards are written `!(x > 0.0)` so that NaN fails them too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod run;

pub use config::{validate_config, Kind, RawConfig, ScenarioConfig};
pub use run::{run_scenario, RunOutput};

/// Parse and validate a JSON config string.
pub fn load_config(json: &str) -> Result<ScenarioConfig, Vec<String>> {
    let raw: RawConfig =
        serde_json::from_str(json).map_err(|e| vec![format!("json: {e}")])?;
    validate_config(&raw)
}
