use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsc"))
        .args(args)
        .env_remove("LSC_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn sigma_harmonic_rows() {
    let o = lsc(&["sigma", "--potential", "harmonic", "--omega", "1", "--count", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("n,e_n"));
    let r = rows(&out);
    assert_eq!(r.len(), 4);
    for (i, row) in r.iter().enumerate() {
        assert_eq!(row[0], i.to_string());
        assert_eq!(num(&row[1]), i as f64 + 0.5);
    }
}

#[test]
fn free_laplacian_three_points() {
    let o = lsc(&["spectrum", "--potential", "free", "--half-width", "1", "--count", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    let s2 = 2f64.sqrt();
    for (row, want) in r.iter().zip([2.0 - s2, 2.0, 2.0 + s2]) {
        assert!((num(&row[1]) - want).abs() < 1e-12);
    }
}

#[test]
fn regimes_gamma_minus_one_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("summary.json");
    let csv = dir.path().join("rows.csv");
    let o = lsc(&[
        "regimes",
        "--gamma",
        "-1",
        "--N",
        "2,4,8",
        "--nmax",
        "2",
        "--json",
        json.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("gamma,n,slope_fit,slope_pred,limit_const_fit,limit_const_pred")
    );
    for row in rows(&text) {
        let (fit, pred) = (num(&row[4]), num(&row[5]));
        assert!((fit - pred).abs() <= 1e-12 * pred);
    }
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    for key in ["experiment", "params", "pass", "measured_constants", "rows_csv_path"] {
        assert!(summary.get(key).is_some(), "missing {key}");
    }
    assert_eq!(summary["experiment"], "regimes");
    assert_eq!(summary["pass"], true);
    assert!(summary["measured_constants"]["identity_deviation[-1]"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn csv_headers() {
    let cases: [(&[&str], &str); 3] = [
        (
            &["converge", "--N", "16,32,64", "--nmax", "0"],
            "gamma,N,n,E_n,lambda_N,ratio,target,abs_err",
        ),
        (&["kappa", "--kappa", "0.2,0.1", "--nmax", "1"], "kappa,n,E_n,ratio,target,abs_err"),
        (&["sigma", "--count", "1"], "n,e_n"),
    ];
    for (args, header) in cases {
        let o = lsc(args);
        assert_eq!(stdout(&o).lines().next(), Some(header), "{args:?}");
    }
}

#[test]
fn invalid_configuration_exits_2() {
    for args in [
        &["sigma", "--delta-spike", "0.5"][..],
        &["sigma", "--potential", "nonsense"],
        &["converge", "--N", "64,32"],
        &["converge", "--gamma", "1.5", "--N", "8,16"],
        &["spectrum", "--potential", "harmonic", "--dim", "2"],
        &["no-such-command"],
    ] {
        assert_eq!(lsc(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failed_assumptions_exit_3() {
    assert_eq!(lsc(&["validate", "--potential", "quartic"]).status.code(), Some(3));
    assert_eq!(
        lsc(&["converge", "--potential", "quartic", "--N", "8,16"]).status.code(),
        Some(3)
    );
    assert_eq!(lsc(&["validate", "--potential", "double-well"]).status.code(), Some(0));
}

#[test]
fn non_convergence_exits_4() {
    // the free Laplacian has no confining potential; box doubling never settles
    let o = lsc(&["spectrum", "--potential", "free", "--count", "2"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn failed_certificate_exits_5() {
    let o = lsc(&["intervals", "--nmax", "3", "--kappa", "0.05", "--delta-spike", "0.25"]);
    assert_eq!(o.status.code(), Some(5));
    let passing = lsc(&["intervals", "--nmax", "2", "--kappa", "0.05"]);
    assert_eq!(passing.status.code(), Some(0));
}

#[test]
fn output_independent_of_thread_count() {
    let args = ["converge", "--potential", "double-well", "--N", "32,64,128,256", "--nmax", "3"];
    let one = lsc(&[&args[..], &["--threads", "1"]].concat());
    let four = lsc(&[&args[..], &["--threads", "4"]].concat());
    assert!(!one.stdout.is_empty());
    assert_eq!(one.stdout, four.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_lsc"))
        .args(args)
        .env("LSC_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(env.stdout, one.stdout);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# sigma run\npotential = double-well\ncount = 6\n").unwrap();
    let o = lsc(&["sigma", "--config", cfg.to_str().unwrap(), "--count", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 2);
    assert!(r.iter().all(|row| (num(&row[1]) - 1.0).abs() < 1e-14));
    fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(lsc(&["sigma", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

fn triplet_count(path: &Path) -> usize {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('%') && !l.starts_with('#'))
        .count()
}

#[test]
fn dump_matrix_writes_triplets() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.txt");
    let o = lsc(&[
        "spectrum",
        "--potential",
        "hkappa",
        "--kappa",
        "0.5",
        "--half-width",
        "4",
        "--count",
        "2",
        "--dump-matrix",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    // 9 diagonal entries plus 8 couplings each way, after a size line
    assert!(triplet_count(&path) >= 9 + 16);
}

#[test]
fn ims_and_quasimode_run() {
    let ims = lsc(&["ims", "--potential", "double-well", "--N", "64,128"]);
    assert_eq!(ims.status.code(), Some(0), "{}", String::from_utf8_lossy(&ims.stderr));
    assert_eq!(rows(&stdout(&ims)).len(), 4);
    let q = lsc(&["quasimode", "--kappa", "0.2,0.1", "--nmax", "2"]);
    assert_eq!(q.status.code(), Some(0));
    assert_eq!(rows(&stdout(&q)).len(), 6);
}
