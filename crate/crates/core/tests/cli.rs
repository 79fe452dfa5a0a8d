use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use redtraj::cli::ConfigFile;

fn redtraj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_redtraj")).args(args).output().expect("binary runs")
}

/// Small, fast run flags.
const QUICK: [&str; 6] = ["--n-traj", "40", "--steps", "400", "--traj-sample", "3"];

fn run_into(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", "--out", dir.to_str().unwrap()];
    args.extend_from_slice(&QUICK);
    args.extend_from_slice(extra);
    redtraj(&args)
}

fn numeric_files(dir: &Path) -> Vec<String> {
    ["histogram.csv", "analytic_profile.csv", "trajectories.csv"]
        .iter()
        .map(|f| fs::read_to_string(dir.join(f)).unwrap())
        .collect()
}

#[test]
fn run_writes_four_files_with_headers() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_into(dir.path(), &["--scenario", "partial", "--preset", "zeilinger", "--seed", "7"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("visibility"));

    let hist = fs::read_to_string(dir.path().join("histogram.csv")).unwrap();
    assert!(hist.starts_with("# bin_center_m,count,normalized_intensity,analytic_intensity\n"));
    let rows: Vec<&str> = hist.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 50);
    let counts: u64 = rows.iter().map(|r| r.split(',').nth(1).unwrap().parse::<u64>().unwrap()).sum();
    assert!(counts <= 40 && counts >= 39);

    let traj = fs::read_to_string(dir.path().join("trajectories.csv")).unwrap();
    assert!(traj.starts_with("# traj_id,t_s,x_m,z_m\n"));
    let analytic = fs::read_to_string(dir.path().join("analytic_profile.csv")).unwrap();
    assert!(analytic.starts_with("# x_m,"));

    let manifest = ConfigFile::load(&dir.path().join("manifest.toml")).unwrap();
    assert_eq!(manifest.seed, Some(7));
    assert_eq!(manifest.scenario.as_deref(), Some("partial"));
    let info = manifest.run_info.unwrap();
    assert!(info.contains_key("software_version"));
    assert!(info.contains_key("wall_time_s"));
    assert_eq!(info["node_aborts"].as_integer(), Some(0));
}

#[test]
fn manifest_reproduces_the_run() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    assert!(run_into(first.path(), &["--scenario", "coherent", "--seed", "3", "--sampling", "random"]).status.success());
    let manifest = first.path().join("manifest.toml");
    let out = redtraj(&["run", "--config", manifest.to_str().unwrap(), "--out", second.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(numeric_files(first.path()), numeric_files(second.path()));
}

#[test]
fn zero_coherence_time_equals_decoherent_scenario() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(run_into(a.path(), &["--tau-c", "0", "--scenario", "partial"]).status.success());
    assert!(run_into(b.path(), &["--scenario", "decoherent"]).status.success());
    assert_eq!(numeric_files(a.path()), numeric_files(b.path()));
}

#[test]
fn thread_count_does_not_change_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let common = ["--scenario", "partial", "--sampling", "random", "--seed", "5"];
    assert!(run_into(a.path(), &[&common[..], &["--threads", "1"]].concat()).status.success());
    assert!(run_into(b.path(), &[&common[..], &["--threads", "3"]].concat()).status.success());
    assert_eq!(numeric_files(a.path()), numeric_files(b.path()));
}

#[test]
fn single_trajectory_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = redtraj(&["run", "--scenario", "coherent", "--n-traj", "1", "--steps", "400", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let hist = fs::read_to_string(dir.path().join("histogram.csv")).unwrap();
    let occupied = hist
        .lines()
        .filter(|l| !l.starts_with('#'))
        .filter(|l| l.split(',').nth(1) != Some("0"))
        .count();
    assert_eq!(occupied, 1);
    let traj = fs::read_to_string(dir.path().join("trajectories.csv")).unwrap();
    assert!(traj.lines().filter(|l| !l.starts_with('#')).all(|l| l.starts_with("0,")));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "a1_um = -3.0\n").unwrap();
    let out_dir = dir.path().join("out");
    let o = out_dir.to_str().unwrap();
    for args in [
        vec!["run", "--config", bad.to_str().unwrap(), "--out", o],
        vec!["run", "--preset", "nowhere", "--out", o],
        vec!["run", "--tau-c", "0.02", "--alpha-fixed", "0.3", "--out", o],
        vec!["run", "--tau-c", "-1", "--out", o],
        vec!["run", "--n-traj", "0", "--out", o],
        vec!["sweep"],
    ] {
        let out = redtraj(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert!(!out_dir.exists());
}

#[test]
fn config_file_with_unit_suffixed_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "scenario = \"decoherent\"\nbin_width_um = 25.0\nwindow_min_um = -400.0\nwindow_max_um = 400.0\nn_traj = 20\nsteps = 200\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = redtraj(&["run", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let hist = fs::read_to_string(out_dir.join("histogram.csv")).unwrap();
    assert_eq!(hist.lines().filter(|l| !l.starts_with('#')).count(), 32);
    let manifest = ConfigFile::load(&out_dir.join("manifest.toml")).unwrap();
    assert_eq!(manifest.scenario.as_deref(), Some("decoherent"));
    assert_eq!(manifest.n_traj, Some(20));
}

#[test]
fn sweep_table() {
    let out = redtraj(&["sweep", "--tau-c", "0.005,0.0226,0.1,inf"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# tau_c_s,alpha_tf,lambda_analytic,lambda_measured\n"));
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    let t_f = 5.0 / 214.4;
    let sech = 1.0 / (t_f / 0.0226f64).cosh();
    assert!((rows[1][2] - sech).abs() < 1e-12);
    assert!((rows[1][2] - 0.63).abs() < 0.01);
    assert_eq!(rows[3][2], 1.0);
    assert!(rows.windows(2).all(|w| w[1][2] >= w[0][2]));
    assert!((rows[1][3] - rows[1][2]).abs() < 0.02);
}
