use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use thermal_transient_cli::formats::{read_structure_function, read_transient};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&Path]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thermal-transient"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn run_str(args: &[&str]) -> Output {
    let paths: Vec<&Path> = args.iter().map(Path::new).collect();
    run(&paths)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn value(text: &str, key: &str) -> Option<String> {
    text.lines().find_map(|l| {
        let (k, v) = l.split_once('=')?;
        (k.trim() == key).then(|| v.trim().to_string())
    })
}

fn simulate(dir: &Path, name: &str, stack: &str, extra: &[&str]) -> PathBuf {
    let out = dir.join(name);
    let mut args = vec!["simulate", stack, "-o", p(&out)];
    args.extend_from_slice(extra);
    let o = run_str(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    out
}

fn analyze(dir: &Path, inputs: &[&Path]) -> Output {
    let mut args = vec!["analyze", "--out-dir", p(dir)];
    args.extend(inputs.iter().map(|x| p(x)));
    run_str(&args)
}

#[test]
fn single_layer_simulation_is_single_pole() {
    let dir = tempfile::tempdir().unwrap();
    let csv = simulate(dir.path(), "one.csv", p(&fixture("single_layer.toml")), &["--power", "2"]);
    let rec = read_transient(&csv).unwrap();
    for (t, v) in rec.times().iter().zip(rec.values()) {
        let exact = -2.0 * (-t / 0.1f64).exp_m1();
        assert!((v - exact).abs() <= 1e-12 * exact.max(1e-12), "t = {t}: {v} vs {exact}");
    }
}

#[test]
fn malformed_stack_reports_line_and_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_str(&[
        "simulate",
        p(&fixture("malformed_stack.toml")),
        "-o",
        p(&dir.path().join("x.csv")),
    ]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("malformed_stack.toml:9:"), "{err}");
    assert!(!dir.path().join("x.csv").exists());
}

#[test]
fn noise_requires_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_str(&[
        "simulate",
        p(&fixture("single_layer.toml")),
        "-o",
        p(&dir.path().join("x.csv")),
        "--noise",
        "1e-3",
    ]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn seeded_noise_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let stack = fixture("three_rung.toml");
    let a = simulate(dir.path(), "a.csv", p(&stack), &["--noise", "1e-3", "--seed", "9"]);
    let b = simulate(dir.path(), "b.csv", p(&stack), &["--noise", "1e-3", "--seed", "9"]);
    let c = simulate(dir.path(), "c.csv", p(&stack), &["--noise", "1e-3", "--seed", "10"]);
    let read = |x: &Path| std::fs::read(x).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
}

#[test]
fn wet_gypsum_runs_cooler() {
    let dir = tempfile::tempdir().unwrap();
    let stack = fixture("gypsum.toml");
    let dry = read_transient(&simulate(dir.path(), "dry.csv", p(&stack), &[])).unwrap();
    let wet = read_transient(&simulate(dir.path(), "wet.csv", p(&stack), &["--saturation", "0.8"])).unwrap();
    assert!(wet.values().last() < dry.values().last());
}

#[test]
fn analyze_recovers_single_pole_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let csv = simulate(dir.path(), "pole.csv", p(&fixture("single_layer.toml")), &[]);
    let first = analyze(dir.path(), &[&csv]);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let text = stdout(&first);
    let identified: f64 = value(&text, "identified_resistance_K_per_W").unwrap().parse().unwrap();
    let eq1: f64 = value(&text, "steady_state_resistance_K_per_W").unwrap().parse().unwrap();
    assert!((eq1 - 1.0).abs() < 1e-9);
    assert!((identified - 1.0).abs() <= 0.02);

    let sf = std::fs::read(dir.path().join("pole.sf.csv")).unwrap();
    let spectrum = std::fs::read(dir.path().join("pole.spectrum.csv")).unwrap();
    let second = analyze(dir.path(), &[&csv]);
    assert_eq!(stdout(&second), text);
    assert_eq!(std::fs::read(dir.path().join("pole.sf.csv")).unwrap(), sf);
    assert_eq!(std::fs::read(dir.path().join("pole.spectrum.csv")).unwrap(), spectrum);
    let head = String::from_utf8(spectrum).unwrap();
    assert!(head.starts_with("zeta,density\n"));
}

#[test]
fn voltage_input_is_converted() {
    let dir = tempfile::tempdir().unwrap();
    let stack = p(&fixture("three_rung.toml")).to_string();
    let t = simulate(dir.path(), "t.csv", &stack, &[]);
    let v = simulate(dir.path(), "v.csv", &stack, &["--sensitivity-mv-per-k", "-2"]);
    let text = std::fs::read_to_string(&v).unwrap();
    assert!(text.contains("# kind = voltage") && text.contains("voltage_V"));
    let o = analyze(dir.path(), &[&t, &v]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let sf_t = read_structure_function(&dir.path().join("t.sf.csv")).unwrap();
    let sf_v = read_structure_function(&dir.path().join("v.sf.csv")).unwrap();
    assert!((sf_t.total_resistance() - sf_v.total_resistance()).abs() < 1e-9);
}

#[test]
fn unsettled_transient_withholds_steady_state() {
    let dir = tempfile::tempdir().unwrap();
    let csv = simulate(dir.path(), "short.csv", p(&fixture("gypsum.toml")), &["--t-end", "1"]);
    let o = analyze(dir.path(), &[&csv]);
    assert_eq!(o.status.code(), Some(0));
    assert!(value(&stdout(&o), "steady_state_resistance_K_per_W").unwrap().starts_with("withheld"));
    assert!(stderr(&o).contains("withheld"), "{}", stderr(&o));
}

#[test]
fn one_bad_input_does_not_stop_the_others() {
    let dir = tempfile::tempdir().unwrap();
    let good = simulate(dir.path(), "good.csv", p(&fixture("single_layer.toml")), &[]);
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "time_s,temperature_K\n1,2\n").unwrap();
    let o = analyze(dir.path(), &[&bad, &good]);
    assert_eq!(o.status.code(), Some(3));
    assert!(dir.path().join("good.sf.csv").exists());
    assert!(stderr(&o).contains("bad.csv"));
}

fn gypsum_pair(dir: &Path) -> (PathBuf, PathBuf) {
    let stack = p(&fixture("gypsum.toml")).to_string();
    let dry = simulate(dir, "dry.csv", &stack, &[]);
    let wet = simulate(dir, "wet.csv", &stack, &["--saturation", "0.8"]);
    let o = analyze(dir, &[&dry, &wet]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    (dir.join("dry.sf.csv"), dir.join("wet.sf.csv"))
}

#[test]
fn compare_reports_divergence() {
    let dir = tempfile::tempdir().unwrap();
    let (dry, wet) = gypsum_pair(dir.path());

    let same = stdout(&run_str(&["compare", p(&dry), p(&dry)]));
    assert_eq!(value(&same, "status").unwrap(), "identical");

    let pair = stdout(&run_str(&["compare", p(&dry), p(&wet)]));
    assert_eq!(value(&pair, "status").unwrap(), "diverged");
    let r: f64 = value(&pair, "divergence_resistance_K_per_W").unwrap().parse().unwrap();
    assert!((r - 1.56).abs() <= 0.156, "{r}");

    let disjoint = stdout(&run_str(&["compare", p(&dry), p(&fixture("wrong_fixture.sf.csv"))]));
    assert_eq!(value(&disjoint, "status").unwrap(), "no_common_section");
    let r: f64 = value(&disjoint, "divergence_resistance_K_per_W").unwrap().parse().unwrap();
    assert_eq!(r, 0.0);
}

#[test]
fn classify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (dry, wet) = gypsum_pair(dir.path());
    assert_eq!(run_str(&["classify", p(&dry), p(&dry)]).status.code(), Some(0));
    let breached = run_str(&["classify", p(&dry), p(&wet)]);
    assert_eq!(breached.status.code(), Some(1));
    assert_eq!(value(&stdout(&breached), "status").unwrap(), "breached");
    let wrong = run_str(&["classify", p(&dry), p(&fixture("wrong_fixture.sf.csv"))]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let (dry, wet) = gypsum_pair(dir.path());
    let cfg = fixture("analysis.toml");
    let loose = run_str(&[
        "classify",
        p(&dry),
        p(&wet),
        "--config",
        p(&cfg),
        "--classifier-threshold",
        "0.9",
    ]);
    assert_eq!(loose.status.code(), Some(0));
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "foster_stages = 10\nnot_a_key = 3\n").unwrap();
    let o = run_str(&["compare", p(&dry), p(&wet), "--config", p(&bad)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("bad.toml:2:"), "{}", stderr(&o));
}
