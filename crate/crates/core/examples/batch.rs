//! Runs the shipped problem file through the batch front end and prints the
//! verdict of every task.

use std::path::Path;

use fitzrep::cli::{parse, run_resolved, Overrides};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/full-suite.toml");
    let resolved = parse(&std::fs::read_to_string(&spec_path)?)?.resolve(Overrides::default())?;
    let out = std::env::temp_dir().join("fitzrep-full-suite");
    std::fs::create_dir_all(&out)?;
    let report = run_resolved(&resolved, &out, None, 0);
    for t in &report.tasks {
        println!("{:<32} {}", t.name, t.result.verdict);
    }
    println!("exit code {}; outputs in {}", report.exit_code, out.display());
    Ok(())
}
