//! Driving an experiment from a JSON configuration, as the CLI does.

use kroger_stability::harness::{execute, ExperimentConfig, Format};

fn main() -> kroger_stability::Result<()> {
    let config = ExperimentConfig::from_json(r#"{"schema": 1, "command": "kroger", "k": 3, "d": 3, "format": "csv"}"#)?;
    let outcome = execute(&config)?;
    assert_eq!(config.format, Format::Csv);
    print!("{}", outcome.csv);
    println!("violations: {}", outcome.violations.len());
    Ok(())
}
