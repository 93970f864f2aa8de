use std::fs;
use std::path::Path;
use std::process::Command;

use compflex::config::{parse_config, Overrides};
use compflex::run::{run, DISTANCE_FILE, MANIFEST_FILE, SUCCESS_FILE};

fn simulate(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_simulate"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn desk_run_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = simulate(&["--desk", "--drops", "40", "--out", path_arg(dir.path())]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let success = fs::read_to_string(dir.path().join(SUCCESS_FILE)).unwrap();
    let mut lines = success.lines();
    assert_eq!(
        lines.next().unwrap(),
        "scheme,direction,beta_db,p_success,ci_low,ci_high,source,drops,seed"
    );
    // 2 schemes × 2 directions × 2 sources × 9 thresholds.
    assert_eq!(lines.count(), 72);
    assert!(success.contains(",analytic_analog,"));
    let cdf = fs::read_to_string(dir.path().join(DISTANCE_FILE)).unwrap();
    assert!(cdf.starts_with("scheme,link_type,r_km,cdf\n"));
    for kind in [
        "ul_signal",
        "dl_signal",
        "intra_cell_interference",
        "signal_analytic",
    ] {
        assert!(cdf.contains(kind), "missing {kind}");
    }
    for f in [
        "deployment_compflex.csv",
        "pairing_compflex.csv",
        "scenario_fd.csv",
        MANIFEST_FILE,
    ] {
        assert!(dir.path().join(f).exists(), "missing {f}");
    }
}

#[test]
fn figure_selects_direction_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = simulate(&[
        "--figure",
        "3",
        "--mode",
        "analytic",
        "--scheme",
        "compflex",
        "--out",
        path_arg(dir.path()),
    ]);
    assert!(out.status.success());
    let success = fs::read_to_string(dir.path().join(SUCCESS_FILE)).unwrap();
    assert_eq!(success.lines().count(), 1 + 9);
    assert!(success
        .lines()
        .skip(1)
        .all(|l| l.starts_with("compflex,ul,")));
    assert!(!dir.path().join(DISTANCE_FILE).exists());

    let dir5 = tempfile::tempdir().unwrap();
    let out = simulate(&[
        "--figure",
        "5",
        "--desk",
        "--drops",
        "20",
        "--out",
        path_arg(dir5.path()),
    ]);
    assert!(out.status.success());
    assert!(dir5.path().join(DISTANCE_FILE).exists());
    assert!(!dir5.path().join(SUCCESS_FILE).exists());
}

#[test]
fn configuration_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "alpha = 2.0\n").unwrap();
    let out = simulate(&["--config", path_arg(&cfg), "--out", path_arg(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));

    fs::write(&cfg, "lambda_c = 0.02\nlambda_f = 0.05\n").unwrap();
    let out = simulate(&["--config", path_arg(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda_f"));

    fs::write(&cfg, "windows_km = 50\n").unwrap();
    let out = simulate(&["--config", path_arg(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("windows_km"));

    let out = simulate(&["--figure", "7"]);
    assert_eq!(out.status.code(), Some(2));
    let out = simulate(&["--config", "/nonexistent/config.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn manifest_reloads_to_the_same_run() {
    let first = tempfile::tempdir().unwrap();
    let cfg_path = first.path().join("in.toml");
    fs::write(
        &cfg_path,
        "window_km = 40\nbeta_db = [-5, 0, 5]\nseed = 9\ndrops = 30\nschemes = \"fd\"\nlambda_f = 0.015\n",
    )
    .unwrap();
    let overrides = Overrides {
        out: Some(first.path().join("a")),
        ..Default::default()
    };
    let cfg = parse_config(Some(&cfg_path), &overrides).unwrap();
    run(&cfg).unwrap();

    let manifest = first.path().join("a").join(MANIFEST_FILE);
    let second = Overrides {
        out: Some(first.path().join("b")),
        ..Default::default()
    };
    let reloaded = parse_config(Some(&manifest), &second).unwrap();
    assert_eq!(
        compflex::config::RunConfig {
            out_dir: cfg.out_dir.clone(),
            ..reloaded.clone()
        },
        cfg
    );
    run(&reloaded).unwrap();
    for f in [
        SUCCESS_FILE,
        DISTANCE_FILE,
        "scenario_fd.csv",
        "deployment_fd.csv",
    ] {
        assert_eq!(
            fs::read(first.path().join("a").join(f)).unwrap(),
            fs::read(first.path().join("b").join(f)).unwrap(),
            "{f} differs"
        );
    }
}

#[test]
fn seed_flag_changes_monte_carlo_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, seed) in [(&a, "1"), (&b, "2")] {
        let out = simulate(&[
            "--desk",
            "--drops",
            "20",
            "--mode",
            "mc",
            "--figure",
            "4",
            "--seed",
            seed,
            "--out",
            path_arg(dir.path()),
        ]);
        assert!(out.status.success());
    }
    assert_ne!(
        fs::read(a.path().join(SUCCESS_FILE)).unwrap(),
        fs::read(b.path().join(SUCCESS_FILE)).unwrap()
    );
}
