//! Regenerates fixtures/pilot_thresholds.json.

use std::path::PathBuf;

use zeroset::experiments::{run_pilot, PilotConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = run_pilot(PilotConfig::default())?;
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/pilot_thresholds.json");
    std::fs::write(&path, serde_json::to_string_pretty(&t)? + "\n")?;
    println!("{}", serde_json::to_string_pretty(&t)?);
    Ok(())
}
