use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(name).to_string_lossy().into_owned()
}

fn valdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_valdyn"))
        .args(args)
        .env_remove("VALDYN_SEED")
        .output()
        .expect("spawn valdyn")
}

fn stdout(args: &[&str]) -> String {
    let o = valdyn(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn first_line(args: &[&str]) -> String {
    stdout(args).lines().next().unwrap_or_default().to_string()
}

#[test]
fn degrees_example() {
    assert_eq!(first_line(&["degrees", "--n", "6", &fixture("cubic_recurrence.map")]), "1 3 6 11 23 46 91");
}

#[test]
fn degrees_bruteforce_agrees() {
    let a = first_line(&["degrees", "--n", "3", &fixture("cubic_recurrence.map")]);
    let b = first_line(&["degrees", "--n", "3", "--bruteforce", &fixture("cubic_recurrence.map")]);
    assert_eq!(a, b);
}

#[test]
fn recur_example() {
    let out = first_line(&["recur", "--n", "10", "--max-order", "4", &fixture("cubic_recurrence.map")]);
    assert_eq!(out, "order=3 coeffs=1,1,2 lambda1=2");
}

#[test]
fn eigen_surd() {
    let out = first_line(&["eigen", &fixture("y2_x3.map")]);
    assert_eq!(out, "kind=irrational nu(x)=-sqrt(2/3) lambda1=sqrt(6)");
}

#[test]
fn lambda2_and_classify() {
    assert_eq!(first_line(&["lambda2", &fixture("cubic_recurrence.map")]), "3");
    assert_eq!(first_line(&["classify", &fixture("skew_x2_xy2.map")]), "branch=C1-skew lambda1=2 lambda2=4");
    let toric = stdout(&["classify", &fixture("x2py_y2.map")]);
    assert!(toric.starts_with("branch=C2-toric"), "{toric}");
    assert!(toric.contains("toric_rays = (1/2, 1) (1, 0)"), "{toric}");
}

#[test]
fn valuation_commands() {
    assert_eq!(first_line(&["invariants", "--weights", "1/2"]), "alpha=1/2 A=-3/2 m=1");
    let push = stdout(&["push", "--weights", "1/2", &fixture("cubic_recurrence.map")]);
    assert!(push.starts_with("d=5/2\n"), "{push}");
    assert!(first_line(&["jacobian-check", &fixture("cubic_recurrence.map")]).ends_with("equal=true"));
    assert!(first_line(&["jacobian-check", "--weights", "2/3", &fixture("henon.map")]).ends_with("equal=true"));
    let graph = stdout(&["blowup", "--weights", "2/3"]);
    assert!(graph.ends_with("target = 3\ntight = true\n"), "{graph}");
}

#[test]
fn extends_and_witness() {
    assert_eq!(first_line(&["extends", "--p", "1", "--q", "1", &fixture("x2py_y2.map")]), "true");
    assert!(first_line(&["witness", "--bound", "5", &fixture("x_xy.map")]).starts_with("witness "));
    assert_eq!(first_line(&["witness", "--bound", "5", &fixture("x2_y2.map")]), "none bound=5");
}

#[test]
fn domain_errors_exit_one() {
    let o = valdyn(&["extends", "--p", "1", "--q", "1", &fixture("y3_x2.map")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not fixed"));
    let o = valdyn(&["degrees", "--n", "2", "/nonexistent/map"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(valdyn(&["degrees", &fixture("cubic_recurrence.map")]).status.code(), Some(2));
    assert_eq!(valdyn(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(valdyn(&["push", "--weights", "x/y", &fixture("cubic_recurrence.map")]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_valdyn"))
        .args(["lambda2", &fixture("cubic_recurrence.map")])
        .env("VALDYN_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seed_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_valdyn"))
        .args(["lambda2", "--seed", "1", &fixture("cubic_recurrence.map")])
        .env("VALDYN_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&o.stdout), "3\n");
}

#[test]
fn green_grid_is_reproducible() {
    let dir = std::env::temp_dir().join(format!("valdyn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (csv, pgm) = (dir.join("g.csv"), dir.join("g.pgm"));
    let args = |out: &PathBuf| {
        vec![
            "green".to_string(),
            "grid".into(),
            fixture("henon.map"),
            "--res".into(),
            "8".into(),
            "--out".into(),
            out.to_string_lossy().into_owned(),
            "--pgm".into(),
            pgm.to_string_lossy().into_owned(),
        ]
    };
    let run = |out: &PathBuf| {
        let a = args(out);
        let o = valdyn(&a.iter().map(String::as_str).collect::<Vec<_>>());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        (std::fs::read(out).unwrap(), std::fs::read(&pgm).unwrap())
    };
    let first = run(&csv);
    let second = run(&dir.join("g2.csv"));
    assert_eq!(first, second);
    let text = String::from_utf8(first.0).unwrap();
    assert_eq!(text.lines().next(), Some("x,y,G,converged,n"));
    assert_eq!(text.lines().count(), 65);
    assert!(first.1.starts_with(b"P5\n8 8\n255\n"));
    assert_eq!(first.1.len(), b"P5\n8 8\n255\n".len() + 64);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn green_value_far_out() {
    let out = first_line(&["green", "value", &fixture("henon.map"), "--point", "0,100000000"]);
    let g: f64 = out.strip_prefix("G=").unwrap().split(' ').next().unwrap().parse().unwrap();
    assert!((g / 1e8f64.ln() - 1.0).abs() < 0.01, "{out}");
    assert!(out.contains("converged=true"), "{out}");
}

#[test]
fn green_warns_without_expansion() {
    // lambda1 = lambda2 = 2
    let o = valdyn(&["green", "value", &fixture("linear_fiber.map"), "--point", "3,3"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn green_bound_on_fixed_point() {
    // (0, 0) is fixed by (y, y^2 - x)
    let out = stdout(&["green", "bound", &fixture("henon.map"), "--point", "0,0", "--n-max", "5"]);
    assert!(out.starts_with("C=0 lambda2=1"), "{out}");
    assert_eq!(out.lines().count(), 2 + 6);
}

#[test]
fn conjugation_is_checked() {
    let dir = std::env::temp_dir().join(format!("valdyn-conj-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (g, h, bad) = (dir.join("g.map"), dir.join("h.map"), dir.join("bad.map"));
    std::fs::write(&g, "P = x + y^2\nQ = y\n").unwrap();
    std::fs::write(&h, "P = x - y^2\nQ = y\n").unwrap();
    std::fs::write(&bad, "P = x\nQ = y + 1\n").unwrap();
    let (g, h, bad) = (g.to_string_lossy().into_owned(), h.to_string_lossy().into_owned(), bad.to_string_lossy().into_owned());
    let plain = first_line(&["degrees", "--n", "3", &fixture("x2_y2.map")]);
    let conj = first_line(&["degrees", "--n", "3", "--conj", &g, "--conj-inv", &h, &fixture("x2_y2.map")]);
    assert_eq!(plain, "1 2 4 8");
    // (x + y^2)^(2^n) - y^(2^(n+1)) loses its top term
    assert_eq!(conj, "1 3 7 15");
    let o = valdyn(&["degrees", "--n", "3", "--conj", &g, "--conj-inv", &bad, &fixture("x2_y2.map")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(valdyn(&["degrees", "--n", "3", "--conj", &g, &fixture("x2_y2.map")]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn every_fixture_classifies() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut paths: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    for p in paths {
        let line = first_line(&["classify", &p.to_string_lossy()]);
        assert!(line.starts_with("branch="), "{}: {line}", p.display());
    }
}

#[test]
fn identical_runs_identical_output() {
    let a = stdout(&["classify", &fixture("cubic_recurrence.map")]);
    let b = stdout(&["classify", &fixture("cubic_recurrence.map")]);
    assert_eq!(a, b);
}
