use std::path::Path;

use optdoe_harness::cli::run;
use optdoe_harness::config::Manifest;

fn doe(args: &[&str]) -> i32 {
    run(std::iter::once("doe").chain(args.iter().copied()))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

fn csv_lines(dir: &Path, name: &str) -> usize {
    read(dir, name).lines().count() - 1
}

const SMALL: &str = "n_max = 3000\nreplicates = 3\nsizes = [7, 10]\n";

#[test]
fn config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let out = out.to_str().unwrap();
    let unknown = write(tmp.path(), "u.toml", "n_max = 10\nbogus = 1\n");
    assert_eq!(doe(&["tournament", "--config", &unknown, "--out", out]), 2);
    assert_eq!(doe(&["tournament", "--restriction", "diagonal", "--out", out]), 2);
    assert_eq!(doe(&["tournament", "--criteria", "ae,nope", "--out", out]), 2);
    assert_eq!(doe(&["tournament", "--config", "/nonexistent/x.toml", "--out", out]), 2);
    let seq = write(tmp.path(), "s.toml", "sizes = [7]\n");
    assert_eq!(doe(&["sequential", "--config", &seq, "--out", out]), 2);
    let other = write(tmp.path(), "o.toml", "study = \"landscape\"\n");
    assert_eq!(doe(&["tournament", "--config", &other, "--out", out]), 2);
    assert_eq!(doe(&["no-such-study"]), 2);
    assert!(!Path::new(out).exists());
}

#[test]
fn unwritable_output_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let file = write(tmp.path(), "plain", "");
    assert_eq!(doe(&["landscape", "--criteria", "ae", "--out", &format!("{file}/sub")]), 3);
}

#[test]
fn tournament_outputs_and_manifest_rerun() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "t.toml", SMALL);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert_eq!(doe(&["tournament", "--config", &cfg, "--criteria", "ae,emm,ml2", "--out", a.to_str().unwrap()]), 0);

    // replicate-level rows: sizes x optimizers x replicates x evaluators
    assert_eq!(csv_lines(&a, "tournament_values.csv"), 2 * 3 * 3 * 3);
    assert_eq!(csv_lines(&a, "tournament_summary.csv"), 2 * 3 * 3);
    let svg = read(&a, "tournament_7_by_evaluator.svg");
    assert_eq!(svg.matches("class=\"panel\"").count(), 3);
    assert_eq!(svg.matches("class=\"box\"").count(), 9);

    let manifest: Manifest = serde_json::from_str(&read(&a, "manifest.json")).unwrap();
    assert_eq!(manifest.tool, "doe");
    assert_eq!(manifest.config.replicates, 3);
    for f in &manifest.files {
        assert!(a.join(f).exists(), "{f}");
    }
    let m = a.join("manifest.json");
    assert_eq!(doe(&["tournament", "--config", m.to_str().unwrap(), "--out", b.to_str().unwrap()]), 0);
    for f in manifest.files.iter().filter(|f| f.ends_with(".csv") || f.ends_with(".svg")) {
        assert_eq!(read(&a, f), read(&b, f), "{f}");
    }
}

#[test]
fn summary_is_recomputable_from_replicate_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "t.toml", SMALL);
    let a = tmp.path().join("a");
    assert_eq!(doe(&["tournament", "--config", &cfg, "--criteria", "ae,pmcc", "--out", a.to_str().unwrap()]), 0);
    let values = read(&a, "tournament_values.csv");
    for line in read(&a, "tournament_summary.csv").lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let vals: Vec<f64> = values
            .lines()
            .skip(1)
            .map(|l| l.split(',').collect::<Vec<_>>())
            .filter(|v| v[0] == f[0] && v[1] == f[1] && v[3] == f[2])
            .map(|v| v[4].parse().unwrap())
            .collect();
        let s = optdoe_harness::stats::boxplot_stats(&vals).unwrap();
        assert_eq!(f[5].parse::<f64>().unwrap(), s.median);
        assert_eq!(f[8].parse::<usize>().unwrap(), vals.len());
    }
}

#[test]
fn parallel_and_serial_runs_agree() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "t.toml", SMALL);
    let a = tmp.path().join("par");
    let b = tmp.path().join("ser");
    let args = ["sa-analytical", "--config", &cfg, "--criteria", "ml2,cn", "--restriction", "lh"];
    assert_eq!(doe(&[&args[..], &["--out", a.to_str().unwrap()]].concat()), 0);
    assert_eq!(doe(&[&args[..], &["--serial", "--out", b.to_str().unwrap()]].concat()), 0);
    for f in ["sa_analytical_lh_errors.csv", "sa_analytical_lh_table.csv"] {
        assert_eq!(read(&a, f), read(&b, f), "{f}");
    }
    // one-shot: sizes x criteria x replicates x 15 models; sequential: 4 sizes
    let rows = csv_lines(&a, "sa_analytical_lh_errors.csv");
    assert_eq!(rows, 2 * 2 * 3 * 15 + 4 * 2 * 3 * 15);
    let svg = read(&a, "sa_analytical_lh_oneshot_10x7_n7.svg");
    assert_eq!(svg.matches("class=\"panel\"").count(), 2 * 15);
}

#[test]
fn seed_flag_changes_results() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "p.toml", SMALL);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert_eq!(doe(&["tournament", "--config", &cfg, "--criteria", "ae,cn", "--out", a.to_str().unwrap()]), 0);
    assert_eq!(doe(&["tournament", "--config", &cfg, "--criteria", "ae,cn", "--seed", "99", "--out", b.to_str().unwrap()]), 0);
    assert_ne!(read(&a, "designs.json"), read(&b, "designs.json"));
    let lh = tmp.path().join("lh");
    assert_eq!(doe(&["projection", "--config", &cfg, "--criteria", "ae", "--restriction", "lh", "--out", lh.to_str().unwrap()]), 0);
    for line in read(&lh, "projection_counts.csv").lines().skip(1) {
        assert!(line.ends_with(",0"), "{line}");
    }
}

#[test]
fn landscape_heatmaps_have_one_cell_per_grid_point() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "l.toml", "grid = 11\n");
    let a = tmp.path().join("a");
    assert_eq!(doe(&["landscape", "--config", &cfg, "--criteria", "ml2,cn", "--out", a.to_str().unwrap()]), 0);
    let svg = read(&a, "landscape_three_corners_ml2.svg");
    assert_eq!(svg.matches("class=\"cell\"").count(), 121);
    assert_eq!(read(&a, "landscape_four_corners_cn.csv").lines().count(), 11);
    let summary = read(&a, "landscape_summary.csv");
    assert!(summary.lines().any(|l| l.starts_with("dopt_linear,")));
}

#[test]
fn sequential_points_are_tagged_by_iteration() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "s.toml", "n_max = 2000\nreplicates = 2\niterations = 2\n");
    let a = tmp.path().join("a");
    assert_eq!(doe(&["sequential", "--config", &cfg, "--criteria", "ae", "--out", a.to_str().unwrap()]), 0);
    let pts = read(&a, "sequential_points.csv");
    assert_eq!(pts.lines().count() - 1, 2 * 30);
    for it in 0..3 {
        assert_eq!(pts.lines().skip(1).filter(|l| l.ends_with(&format!(",{it}"))).count(), 20);
    }
    assert_eq!(csv_lines(&a, "sequential_values.csv"), 2 * 2);
}

#[test]
fn truss_reference_is_cached_in_the_output_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "t.toml", "n_max = 1000\nreplicates = 1\nmc_samples = 2000\ntrusses = [\"ten_bar\"]\n");
    let a = tmp.path().join("a");
    let args = ["sa-truss", "--config", &cfg, "--criteria", "ae", "--out", a.to_str().unwrap()];
    assert_eq!(doe(&args), 0);
    let first = read(&a, "reference_ten_bar.json");
    let table = read(&a, "sa_truss_table.csv");
    let errors = read(&a, "sa_truss_errors.csv");
    assert!(table.lines().any(|l| l.starts_with("ten_bar,42,AE,overall")));
    assert!(table.lines().any(|l| l.starts_with("ten_bar,84,AE,overall")));
    assert_eq!(doe(&args), 0);
    assert_eq!(read(&a, "reference_ten_bar.json"), first);
    assert_eq!(read(&a, "sa_truss_errors.csv"), errors);
}
