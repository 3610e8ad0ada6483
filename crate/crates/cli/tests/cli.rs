//! End-to-end subcommand tests against the compiled binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sudo-eval"))
}

fn run_ok(args: &[&str]) -> Output {
    let output = bin().args(args).output().expect("binary runs");
    assert!(
        output.status.success(),
        "command {:?} failed:\n{}\n{}",
        args,
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

fn simulate(dir: &Path, extra: &[&str]) {
    let out = path(dir, "data");
    let mut args = vec![
        "simulate",
        "--scenario",
        "shift",
        "--seed",
        "0",
        "--out",
        &out,
    ];
    args.extend_from_slice(extra);
    run_ok(&args);
}

#[test]
fn simulate_writes_exactly_four_files() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), &[]);
    let mut names: Vec<String> = std::fs::read_dir(dir.path().join("data"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().to_string())
        .collect();
    names.sort();
    assert_eq!(
        names,
        vec!["held_out.csv", "train.csv", "wild.csv", "wild_labels.csv"]
    );
}

#[test]
fn imbalanced_scenario_has_4500_wild_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "data");
    run_ok(&[
        "simulate",
        "--scenario",
        "shift_imbalanced",
        "--seed",
        "0",
        "--out",
        &out,
    ]);
    let wild = std::fs::read_to_string(dir.path().join("data/wild.csv")).unwrap();
    assert_eq!(wild.lines().count(), 4501); // header + rows
}

#[test]
fn half_noise_flips_exactly_100_of_200_labels() {
    let dir = tempfile::tempdir().unwrap();
    let clean = path(dir.path(), "clean");
    let noisy = path(dir.path(), "noisy");
    run_ok(&["simulate", "--seed", "0", "--out", &clean]);
    run_ok(&["simulate", "--seed", "0", "--noise", "0.5", "--out", &noisy]);
    let labels = |p: PathBuf| -> Vec<String> {
        let text = std::fs::read_to_string(p).unwrap();
        let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
        let col = header.iter().position(|&h| h == "label").unwrap();
        text.lines()
            .skip(1)
            .map(|l| l.split(',').nth(col).unwrap().to_string())
            .collect()
    };
    let a = labels(dir.path().join("clean/held_out.csv"));
    let b = labels(dir.path().join("noisy/held_out.csv"));
    assert_eq!(a.len(), 200);
    let flips = a.iter().zip(&b).filter(|(x, y)| x != y).count();
    assert_eq!(flips, 100);
}

#[test]
fn run_emits_one_row_per_interval_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), &[]);
    let data = dir.path().join("data");
    let run_once = |out: &str| {
        run_ok(&[
            "run",
            "--wild",
            &path(&data, "wild.csv"),
            "--train",
            &path(&data, "train.csv"),
            "--held-out",
            &path(&data, "held_out.csv"),
            "--out",
            &path(dir.path(), out),
        ]);
    };
    run_once("r1");
    run_once("r2");

    let csv = std::fs::read_to_string(dir.path().join("r1/report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 11); // header + ten intervals

    let strip_timestamp = |name: &str| -> serde_json::Value {
        let text = std::fs::read_to_string(dir.path().join(name).join("report.json")).unwrap();
        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["manifest"]
            .as_object_mut()
            .unwrap()
            .remove("created_unix");
        value
    };
    assert_eq!(strip_timestamp("r1"), strip_timestamp("r2"));
}

#[test]
fn thread_counts_do_not_change_the_payload() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), &[]);
    let data = dir.path().join("data");
    for (threads, out) in [("1", "t1"), ("8", "t8")] {
        run_ok(&[
            "--threads",
            threads,
            "run",
            "--wild",
            &path(&data, "wild.csv"),
            "--train",
            &path(&data, "train.csv"),
            "--held-out",
            &path(&data, "held_out.csv"),
            "--out",
            &path(dir.path(), out),
        ]);
    }
    let payload = |name: &str| {
        let text = std::fs::read_to_string(dir.path().join(name).join("report.json")).unwrap();
        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["manifest"]
            .as_object_mut()
            .unwrap()
            .remove("created_unix");
        serde_json::to_string(&value).unwrap()
    };
    assert_eq!(payload("t1"), payload("t8"));
}

#[test]
fn pipeline_validate_passes_and_rc_curve_reports_aurcc() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), &[]);
    let data = dir.path().join("data");
    run_ok(&[
        "run",
        "--wild",
        &path(&data, "wild.csv"),
        "--train",
        &path(&data, "train.csv"),
        "--held-out",
        &path(&data, "held_out.csv"),
        "--out",
        &path(dir.path(), "run"),
    ]);
    let output = run_ok(&[
        "validate",
        "--report",
        &path(dir.path(), "run/report.json"),
        "--wild",
        &path(&data, "wild.csv"),
        "--labels",
        &path(&data, "wild_labels.csv"),
        "--out",
        &path(dir.path(), "val"),
    ]);
    assert!(String::from_utf8_lossy(&output.stdout).contains("pass"));
    let validation: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("val/validation.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(validation["check"]["pass"], serde_json::Value::Bool(true));

    run_ok(&[
        "rc-curve",
        "--report",
        &path(dir.path(), "run/report.json"),
        "--wild",
        &path(&data, "wild.csv"),
        "--out",
        &path(dir.path(), "rc"),
    ]);
    let curve: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("rc/rc_curve.json")).unwrap(),
    )
    .unwrap();
    let aurcc = curve["curve"]["aurcc"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&aurcc));
    assert!(dir.path().join("rc/rc_curve.svg").exists());
}

#[test]
fn survival_medians_follow_the_hazard_ordering() {
    let dir = tempfile::tempdir().unwrap();
    // rate_low = ln(2)/2 (median 2y), rate_high = 3x.
    simulate(
        dir.path(),
        &["--attach-survival", "0.34657359,1.03972077,5.0"],
    );
    let data = dir.path().join("data");
    run_ok(&[
        "run",
        "--wild",
        &path(&data, "wild.csv"),
        "--train",
        &path(&data, "train.csv"),
        "--held-out",
        &path(&data, "held_out.csv"),
        "--out",
        &path(dir.path(), "run"),
    ]);
    run_ok(&[
        "survival",
        "--wild",
        &path(&data, "wild.csv"),
        "--strata",
        "low:0:0.2,uncertain:0.2:0.5,high:0.5:1",
        "--report",
        &path(dir.path(), "run/report.json"),
        "--out",
        &path(dir.path(), "surv"),
    ]);
    let doc: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("surv/survival.json")).unwrap(),
    )
    .unwrap();
    let curves = doc["stratified"]["curves"].as_array().unwrap();
    let median = |label: &str| -> f64 {
        curves
            .iter()
            .find(|c| c[0] == label)
            .and_then(|c| c[1]["median"].as_f64())
            .unwrap()
    };
    assert!(median("low") > median("high"));
    let rho = doc["correlation"]["rho"].as_f64().unwrap();
    assert!(rho.abs() >= 0.8, "sudo-vs-median rho {rho}");
    assert!(dir.path().join("surv/survival_curves.csv").exists());
    assert!(dir.path().join("surv/survival.svg").exists());
}

#[test]
fn config_errors_and_data_errors_use_distinct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), &[]);
    let data = dir.path().join("data");
    let common = [
        "--wild".to_string(),
        path(&data, "wild.csv"),
        "--train".to_string(),
        path(&data, "train.csv"),
        "--held-out".to_string(),
        path(&data, "held_out.csv"),
    ];

    let mut bad_config: Vec<String> = vec!["run".into()];
    bad_config.extend(common.iter().cloned());
    bad_config.extend([
        "--metric".into(),
        "nonsense".into(),
        "--out".into(),
        path(dir.path(), "x1"),
    ]);
    let status = bin().args(&bad_config).output().unwrap();
    assert_eq!(status.status.code(), Some(2));

    let mut bad_data: Vec<String> = vec!["run".into()];
    bad_data.extend(common.iter().cloned());
    bad_data.extend([
        "--m".into(),
        "99999".into(),
        "--out".into(),
        path(dir.path(), "x2"),
    ]);
    let status = bin().args(&bad_data).output().unwrap();
    assert_eq!(status.status.code(), Some(3));
}

#[test]
fn failed_runs_leave_no_partial_outputs() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), &[]);
    let data = dir.path().join("data");
    let out = dir.path().join("out");
    std::fs::create_dir(&out).unwrap();
    let status = bin()
        .args([
            "run",
            "--wild",
            &path(&data, "wild.csv"),
            "--train",
            &path(&data, "train.csv"),
            "--held-out",
            &path(&data, "held_out.csv"),
            "--m",
            "99999",
            "--out",
            &out.display().to_string(),
        ])
        .output()
        .unwrap();
    assert!(!status.status.success());
    assert_eq!(std::fs::read_dir(&out).unwrap().count(), 0);
}

#[test]
fn multiclass_run_reports_per_class_performance() {
    use sudo_eval::data::write_dataset;
    use sudo_eval::inference::{apply_inference_model, fit_inference_model};
    use sudo_eval::probe::LrConfig;
    use sudo_eval::sim::{
        generate_source, generate_three_class_source, generate_wild, SimulationConfig, WildScenario,
    };

    let dir = tempfile::tempdir().unwrap();
    let sim = SimulationConfig {
        seed: 0,
        scenario: WildScenario::ShiftThirdClass,
        ..SimulationConfig::default()
    };
    let (train2, _) = generate_source(&sim).unwrap();
    let (train3, held3) = generate_three_class_source(&sim, 250, 100).unwrap();
    let (wild, _) = generate_wild(&sim).unwrap();
    let model = fit_inference_model(&train2, &LrConfig::default()).unwrap();
    let wild = apply_inference_model(&model, &wild).unwrap();

    write_dataset(&train3, dir.path().join("train.csv")).unwrap();
    write_dataset(&held3, dir.path().join("held_out.csv")).unwrap();
    write_dataset(&wild, dir.path().join("wild.csv")).unwrap();

    run_ok(&[
        "run",
        "--wild",
        &path(dir.path(), "wild.csv"),
        "--train",
        &path(dir.path(), "train.csv"),
        "--held-out",
        &path(dir.path(), "held_out.csv"),
        "--classes",
        "3",
        "--out",
        &path(dir.path(), "run"),
    ]);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("run/report.json")).unwrap())
            .unwrap();
    assert_eq!(doc["report"]["class_count"], 3);
    let evaluated: Vec<&serde_json::Value> = doc["report"]["intervals"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|i| i["status"] == "evaluated")
        .collect();
    assert!(!evaluated.is_empty());
    for interval in evaluated {
        let detail = &interval["detail"];
        assert_eq!(detail["mean_perf"].as_array().unwrap().len(), 3);
        assert!(detail["sudo"].as_f64().unwrap() >= 0.0);
    }
}

#[test]
fn config_file_drives_the_run() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), &[]);
    let data = dir.path().join("data");
    let conf = dir.path().join("run.conf");
    std::fs::write(
        &conf,
        "range = 0,1\nbins = 5\nm = 40\nk = 2\ntau = 0.2\nmaster_seed = 3\n",
    )
    .unwrap();
    run_ok(&[
        "run",
        "--wild",
        &path(&data, "wild.csv"),
        "--train",
        &path(&data, "train.csv"),
        "--held-out",
        &path(&data, "held_out.csv"),
        "--config",
        &conf.display().to_string(),
        "--out",
        &path(dir.path(), "run"),
    ]);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("run/report.json")).unwrap())
            .unwrap();
    assert_eq!(doc["report"]["intervals"].as_array().unwrap().len(), 5);
    assert_eq!(doc["report"]["m_resolved"], 40);
    assert_eq!(doc["report"]["k"], 2);
    assert_eq!(doc["report"]["master_seed"], 3);
    assert_eq!(doc["report"]["tau"], 0.2);
}

#[test]
fn bias_audit_reports_groups_and_npv() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), &[]);
    let data = dir.path().join("data");

    // Tag wild records with alternating groups.
    let text = std::fs::read_to_string(data.join("wild.csv")).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    let mut grouped = format!("{header},group\n");
    for (i, line) in lines.enumerate() {
        grouped.push_str(&format!("{line},g{}\n", i % 2 + 1));
    }
    let wild_grouped = dir.path().join("wild_grouped.csv");
    std::fs::write(&wild_grouped, grouped).unwrap();

    run_ok(&[
        "bias",
        "--wild",
        &wild_grouped.display().to_string(),
        "--train",
        &path(&data, "train.csv"),
        "--held-out",
        &path(&data, "held_out.csv"),
        "--labels",
        &path(&data, "wild_labels.csv"),
        "--intervals",
        "0,0.2",
        "--m",
        "100",
        "--out",
        &path(dir.path(), "bias"),
    ]);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("bias/bias.json")).unwrap())
            .unwrap();
    let groups = doc["bias"]["groups"].as_array().unwrap();
    assert_eq!(groups.len(), 2);
    assert!(groups.iter().all(|g| g["outcome"]["Evaluated"].is_object()));
    let npv = doc["npv"].as_array().unwrap();
    assert_eq!(npv.len(), 2);
    // Alternating halves of one population: NPV near-identical across groups.
    let values: Vec<f64> = npv.iter().map(|g| g["npv"].as_f64().unwrap()).collect();
    assert!((values[0] - values[1]).abs() < 0.1, "{values:?}");
    assert!(dir.path().join("bias/bias.csv").exists());
}

#[test]
fn featurize_writes_feature_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.txt");
    std::fs::write(&corpus, "the cat sat on the mat\nthe dog sat on the log\n").unwrap();
    run_ok(&[
        "featurize",
        "--train-corpus",
        &corpus.display().to_string(),
        "--input",
        &corpus.display().to_string(),
        "--vocab-size",
        "4",
        "--vocab-json",
        &path(dir.path(), "vocab.json"),
        "--out",
        &path(dir.path(), "feat"),
    ]);
    let features = std::fs::read_to_string(dir.path().join("feat/features.csv")).unwrap();
    assert_eq!(features.lines().count(), 3);
    assert!(features.starts_with("id,f0,f1,f2,f3"));
    assert!(dir.path().join("vocab.json").exists());
}

#[test]
fn jsonl_input_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), &[]);
    let data = dir.path().join("data");
    // Convert the wild CSV to JSONL by hand and rerun against it.
    let text = std::fs::read_to_string(data.join("wild.csv")).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let mut jsonl = String::new();
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let mut obj = serde_json::Map::new();
        for (key, value) in header.iter().zip(&cells) {
            if value.is_empty() {
                continue;
            }
            let parsed: serde_json::Value = if *key == "id" {
                serde_json::Value::String((*value).to_string())
            } else {
                serde_json::from_str(value).unwrap()
            };
            obj.insert((*key).to_string(), parsed);
        }
        jsonl.push_str(&serde_json::Value::Object(obj).to_string());
        jsonl.push('\n');
    }
    let wild_jsonl = dir.path().join("wild.jsonl");
    std::fs::write(&wild_jsonl, jsonl).unwrap();

    let csv_out = path(dir.path(), "csvrun");
    let jsonl_out = path(dir.path(), "jsonlrun");
    for (wild, out) in [
        (path(&data, "wild.csv"), &csv_out),
        (wild_jsonl.display().to_string(), &jsonl_out),
    ] {
        run_ok(&[
            "run",
            "--wild",
            &wild,
            "--train",
            &path(&data, "train.csv"),
            "--held-out",
            &path(&data, "held_out.csv"),
            "--out",
            out,
        ]);
    }
    let report = |p: &str| -> serde_json::Value {
        let text = std::fs::read_to_string(Path::new(p).join("report.json")).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["report"].clone()
    };
    assert_eq!(report(&csv_out), report(&jsonl_out));
}
