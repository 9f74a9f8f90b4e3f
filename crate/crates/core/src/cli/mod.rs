//! Batch front end: `run <spec> --out <dir>`.
//!
//! The problem file is TOML with `[operators.NAME]`, `[maps.NAME]`,
//! `[probes.NAME]` tables and a `[[tasks]]` list. Results go to
//! `<dir>/report.toml`, plus one CSV per `sample-surface` task.
//!
//! Exit codes: 0 all tasks passed or were inapplicable, 1 some task failed or
//! errored, 2 only possible failures, 64 parse error, 65 unresolved name.

mod spec;
mod surface;
mod tasks;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::report::{CheckReport, Verdict};

pub use spec::{parse, Family, OperatorSpec, Overrides, ProblemSpec, Resolved, SpecError, TaskSpec, Verb};
pub use surface::{sample_surface, SurfaceSource, SurfaceSummary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_POSSIBLE_FAIL: i32 = 2;
pub const EXIT_PARSE: i32 = 64;
pub const EXIT_UNRESOLVED: i32 = 65;
const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(name = "fitzrep", version, about = "Check monotone operator problems in batch")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every task of a problem file.
    Run {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Grid step for every probe in the file.
        #[arg(long)]
        resolution: Option<f64>,
        /// Tolerance for every probe and task.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskReport {
    pub name: String,
    pub verb: String,
    pub operands: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub wall_time_ms: f64,
    pub result: CheckReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub exit_code: i32,
    #[serde(default)]
    pub tasks: Vec<TaskReport>,
}

impl Report {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("report serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

/// Exit code for a list of verdicts.
pub fn exit_code_for(verdicts: impl IntoIterator<Item = Verdict>) -> i32 {
    let mut code = EXIT_OK;
    for v in verdicts {
        match v {
            Verdict::Fails | Verdict::Error => return EXIT_FAILS,
            Verdict::PossibleFail => code = EXIT_POSSIBLE_FAIL,
            _ => {}
        }
    }
    code
}

/// Runs all tasks of a resolved problem in order.
pub fn run_resolved(resolved: &Resolved, out_dir: &Path, tol: Option<f64>, seed: u64) -> Report {
    let ctx = tasks::TaskContext { resolved, out_dir, seed, tol };
    let mut reports = Vec::with_capacity(resolved.tasks.len());
    for (i, t) in resolved.tasks.iter().enumerate() {
        let name = t.name.clone().unwrap_or_else(|| format!("task-{:02}-{}", i + 1, t.verb.name()));
        let start = Instant::now();
        let (result, output) = match ctx.run(t, &name) {
            Ok(o) => (o.report, o.output),
            Err(e) => (CheckReport::new(Verdict::Error, tol.unwrap_or(0.0)).with_note(e.to_string()), None),
        };
        reports.push(TaskReport {
            name,
            verb: t.verb.name().to_owned(),
            operands: t.operands.clone(),
            probe: t.probe.clone(),
            output,
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
            result,
        });
    }
    Report { exit_code: exit_code_for(reports.iter().map(|r| r.result.verdict)), tasks: reports }
}

/// `run <spec> --out <dir>`; returns the process exit code.
pub fn run(spec_path: &Path, out_dir: &Path, ov: Overrides, seed: u64) -> i32 {
    let text = match fs::read_to_string(spec_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", spec_path.display());
            return EXIT_IO;
        }
    };
    let resolved = match parse(&text).and_then(|s| s.resolve(ov)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}: {e}", spec_path.display());
            return e.exit_code();
        }
    };
    if let Err(e) = fs::create_dir_all(out_dir) {
        eprintln!("cannot create {}: {e}", out_dir.display());
        return EXIT_IO;
    }
    let report = run_resolved(&resolved, out_dir, ov.tol, seed);
    for t in &report.tasks {
        eprintln!("{:<32} {}", t.name, t.result.verdict);
    }
    let path = out_dir.join("report.toml");
    if let Err(e) = fs::write(&path, report.to_toml()) {
        eprintln!("cannot write {}: {e}", path.display());
        return EXIT_IO;
    }
    report.exit_code
}

/// Entry point for the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Run { spec, out, resolution, tol, seed } => run(&spec, &out, Overrides { resolution, tol }, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_text(text: &str) -> (i32, Report) {
        let dir = tempfile::tempdir().unwrap();
        let spec = dir.path().join("p.toml");
        fs::write(&spec, text).unwrap();
        let out = dir.path().join("out");
        let code = run(&spec, &out, Overrides::default(), 0);
        let report = Report::from_toml(&fs::read_to_string(out.join("report.toml")).unwrap()).unwrap();
        (code, report)
    }

    #[test]
    fn crossed_pair_fails() {
        let (code, r) = run_text(
            r#"
[operators.g]
kind = "finite"
points = [{ x = [0.0], xstar = [1.0] }, { x = [1.0], xstar = [0.0] }]

[[tasks]]
verb = "monotone"
operands = ["g"]
"#,
        );
        assert_eq!(code, EXIT_FAILS);
        assert_eq!(r.tasks[0].result.verdict, Verdict::Fails);
        assert!(r.tasks[0].result.witness.is_some());
    }

    #[test]
    fn skew_identity_holds() {
        let (code, r) = run_text(
            r#"
[operators.id]
kind = "identity"
dim = 2

[operators.rot]
kind = "skew"
b = [[0.0, -1.0], [1.0, 0.0]]

[probes.small]
radius = 1.0
dim = 4
resolution = 0.5

[[tasks]]
verb = "skew-identity"
operands = ["id", "rot"]
probe = "small"
"#,
        );
        assert_eq!(code, EXIT_OK, "{r:?}");
        assert_eq!(r.tasks[0].result.verdict, Verdict::Holds);
    }

    #[test]
    fn surface_of_identity() {
        let dir = tempfile::tempdir().unwrap();
        let spec = dir.path().join("p.toml");
        fs::write(
            &spec,
            r#"
[operators.id]
kind = "identity"
dim = 1

[probes.b]
radius = 1.0
dim = 2
resolution = 0.25

[[tasks]]
name = "id-surface"
verb = "sample-surface"
operands = ["id"]
probe = "b"
"#,
        )
        .unwrap();
        let out = dir.path().join("out");
        assert_eq!(run(&spec, &out, Overrides::default(), 0), EXIT_OK);
        let csv = fs::read_to_string(out.join("id-surface.csv")).unwrap();
        let rows: Vec<&str> = csv.lines().skip(1).collect();
        assert_eq!(rows.len(), 81);
        for row in rows {
            let gap: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
            assert!(gap >= -1e-9);
        }
    }

    #[test]
    fn report_round_trip() {
        let (_, r) = run_text(
            r#"
[operators.a]
kind = "normal-cone"
lo = [0.0]
hi = [1.0]

[operators.b]
kind = "normal-cone"
lo = [1.0]
hi = [2.0]

[[tasks]]
verb = "qual-sum"
operands = ["a", "b"]

[[tasks]]
verb = "interiority"
operands = ["a", "b"]
family = "delta"
"#,
        );
        assert_eq!(Report::from_toml(&r.to_toml()).unwrap(), r);
        assert_eq!(r.tasks[0].result.verdict, Verdict::Fails);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code_for([Verdict::Holds, Verdict::Inapplicable]), EXIT_OK);
        assert_eq!(exit_code_for([Verdict::PossibleFail, Verdict::Holds]), EXIT_POSSIBLE_FAIL);
        assert_eq!(exit_code_for([Verdict::PossibleFail, Verdict::Error]), EXIT_FAILS);
        let dir = tempfile::tempdir().unwrap();
        let spec = dir.path().join("p.toml");
        fs::write(&spec, "[[tasks]]\nverb = \"monotone\"\noperands = [\"ghost\"]\n").unwrap();
        assert_eq!(run(&spec, dir.path(), Overrides::default(), 0), EXIT_UNRESOLVED);
        fs::write(&spec, "[[tasks]\n").unwrap();
        assert_eq!(run(&spec, dir.path(), Overrides::default(), 0), EXIT_PARSE);
    }
}
