//! The shipped problem file and the binary, end to end.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fitzrep::cli::Report;
use fitzrep::Verdict;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fitzrep"))
}

fn suite() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/full-suite.toml")
}

fn run(spec: &Path, out: &Path, extra: &[&str]) -> Output {
    bin().arg("run").arg(spec).arg("--out").arg(out).args(extra).output().unwrap()
}

fn report(out: &Path) -> Report {
    Report::from_toml(&fs::read_to_string(out.join("report.toml")).unwrap()).unwrap()
}

fn untimed(out: &Path) -> String {
    fs::read_to_string(out.join("report.toml"))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with("wall_time_ms"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn full_suite_passes_and_repeats() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let first = run(&suite(), &a, &[]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(run(&suite(), &b, &["--seed", "0"]).status.code(), Some(0));
    assert_eq!(untimed(&a), untimed(&b));

    let r = report(&a);
    assert_eq!(r.exit_code, 0);
    assert!(r.tasks.iter().all(|t| t.result.verdict != Verdict::Fails && t.result.verdict != Verdict::Error));
    assert_eq!(Report::from_toml(&r.to_toml()).unwrap(), r);
    for t in &r.tasks {
        if let Some(csv) = &t.output {
            assert_eq!(fs::read(a.join(csv)).unwrap(), fs::read(b.join(csv)).unwrap(), "{csv}");
        }
    }
}

#[test]
fn overrides_reach_every_probe() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("coarse");
    let o = run(&suite(), &out, &["--resolution", "0.5", "--tol", "1e-8"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for t in report(&out).tasks {
        if let Some(res) = t.result.resolution {
            assert_eq!(res, 0.5, "{}", t.name);
        }
    }
}

fn write_spec(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("p.toml");
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn crossed_pair_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        r#"
[operators.g]
kind = "finite"
points = [{ x = [0.0], xstar = [1.0] }, { x = [1.0], xstar = [0.0] }]

[[tasks]]
verb = "monotone"
operands = ["g"]
"#,
    );
    let out = dir.path().join("out");
    assert_eq!(run(&spec, &out, &[]).status.code(), Some(1));
    assert_eq!(report(&out).tasks[0].result.verdict, Verdict::Fails);
}

#[test]
fn parse_errors_point_at_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "[operators.g]\nkind = \"finite\"\npoints = [\n");
    let o = run(&spec, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn unresolved_names_exit_65() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "[[tasks]]\nverb = \"ni\"\noperands = [\"ghost\"]\n");
    assert_eq!(run(&spec, &dir.path().join("out"), &[]).status.code(), Some(65));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(bin().arg("run").output().unwrap().status.code(), Some(64));
    assert_eq!(bin().arg("--help").output().unwrap().status.code(), Some(0));
}
