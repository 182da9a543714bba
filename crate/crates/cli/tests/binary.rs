use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use dwellgraph::parse_report;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dwellgraph"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut input = child.stdin.take().unwrap();
    input.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(input);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

fn example(name: &str) -> String {
    let o = run(&["generate-example", name], None);
    assert_eq!(o.status.code(), Some(0));
    stdout(&o)
}

#[test]
fn analyze_succeeds_with_parsable_report() {
    let o = run(&["analyze", "-"], Some(&example("example1")));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = parse_report(&stdout(&o)).unwrap();
    assert_eq!(report.winner.minimum.unwrap().tau_int, 7);
}

#[test]
fn analyze_reads_files_and_writes_output() {
    let spec = scratch("ex2.toml");
    let out = scratch("ex2.report.toml");
    let o = run(&["generate-example", "example2", "-o", spec.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["analyze", spec.to_str().unwrap(), "--min", "--norm", "spectral", "-o", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let report = parse_report(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(report.input.norms, vec!["spectral"]);
    assert!(report.method("corollary1").is_some());
}

#[test]
fn invalid_input_exits_2() {
    let bad = "dimension = 2\nadjacency = [[1, 1]]\n[[subsystem]]\nmatrix = [[0.1, 0.0], [0.0, 0.1]]\n";
    let o = run(&["analyze", "-"], Some(bad));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("self-loop"), "{}", stderr(&o));

    let o = run(&["analyze", "/nonexistent/spec.toml"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["generate-example", "example9"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown example"));
    let o = run(&["analyze", "-", "--eps", "0.1", "--eps-search"], Some(&example("example2")));
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["analyze", "-", "--tol", "-1"], Some(&example("example2")));
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["simulate", "-", "--tau", "7", "--trials", "0", "--horizon", "10", "--seed", "1"], Some(&example("example2")));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unstable_input_exits_3() {
    let spec = "dimension = 1\nadjacency = \"full\"\n[[subsystem]]\nname = \"drift\"\nmatrix = [[1.01]]\n";
    let o = run(&["analyze", "-"], Some(spec));
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("`drift`"));
}

#[test]
fn breakdown_exits_4() {
    // a rank tolerance this loose makes the Jordan chains unable to reproduce A
    let spec = "dimension = 2\nadjacency = \"full\"\n[[subsystem]]\nmatrix = [[0.5, 1.0], [0.0, 0.5]]\n\
                [[subsystem]]\nmatrix = [[0.1, 0.0], [0.0, 0.3]]\n";
    let o = run(&["analyze", "-", "--rank-tol", "0.9"], Some(spec));
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn simulate_is_byte_identical_across_runs() {
    let spec = example("example1");
    let args = ["simulate", "-", "--tau", "7", "--trials", "20", "--horizon", "200", "--seed", "42"];
    let a = run(&args, Some(&spec));
    let b = run(&args, Some(&spec));
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let report = parse_report(&stdout(&a)).unwrap();
    let sim = report.simulation.unwrap();
    assert_eq!((sim.seed, sim.trials, sim.horizon), (42, 20, 200));
}

#[test]
fn simulate_dumps_norm_columns() {
    let path = scratch("norms.txt");
    let args = [
        "simulate", "-", "--tau", "7", "--trials", "5", "--horizon", "30", "--seed", "1", "--norms-out",
        path.to_str().unwrap(), "--norms-trials", "2",
    ];
    let o = run(&args, Some(&example("example2")));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 32);
    assert!(text.lines().skip(1).all(|l| l.split_whitespace().count() == 3));
}

#[test]
fn graph_dumps_edges() {
    let o = run(&["generate-example", "example1", "--adjacency", "ring"], None);
    let o = run(&["graph", "-"], Some(&stdout(&o)));
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.matches("[[diagnostics.edge]]").count(), 4);
}
