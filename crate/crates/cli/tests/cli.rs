use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn emoreact(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emoreact"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "status {:?}\nstderr: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_config(dir: &Path) {
    fs::write(
        dir.join("experiment.json"),
        r#"{
  "version": 1,
  "sources": [
    {"name": "alpha", "kind": "canonical_tsv", "path": "alpha.tsv"},
    {"name": "beta", "kind": "canonical_tsv", "path": "beta.tsv"}
  ],
  "eval": [{"name": "dev", "kind": "canonical_tsv", "path": "dev.tsv"}],
  "features": {"embeddings": false},
  "train": {"epochs": 5, "seed": 1},
  "output_dir": "run"
}
"#,
    )
    .unwrap();
}

#[test]
fn synth_train_eval_search() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    for (name, seed) in [("alpha", "1"), ("beta", "2"), ("dev", "3")] {
        ok(&emoreact(
            dir,
            &["synth", "--n", "200", "--vocab", "20", "--seed", seed, "--source", name, "--out", &format!("{name}.tsv")],
        ));
    }
    write_config(dir);

    let tsv = ok(&emoreact(dir, &["train", "--config", "experiment.json", "--format", "tsv"]));
    assert!(tsv.starts_with("class\tprecision\trecall\tf1\n"), "{tsv}");
    assert!(tsv.lines().last().unwrap().starts_with("micro\t"));
    for artifact in ["model.json", "vectorizer.json", "run_record.json", "report_dev.tsv"] {
        assert!(dir.join("run").join(artifact).is_file(), "{artifact}");
    }

    let eval = ok(&emoreact(dir, &["eval", "--run", "run", "--data", "dev.tsv", "--format", "tsv"]));
    assert_eq!(eval, tsv);

    let json = ok(&emoreact(dir, &["eval", "--run", "run", "--data", "dev.tsv", "--format", "json"]));
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(value["micro_f1"].as_f64().unwrap() > 0.9);

    let ranking = ok(&emoreact(dir, &["search", "--config", "experiment.json", "--format", "tsv"]));
    let lines: Vec<_> = ranking.lines().collect();
    assert_eq!(lines[0], "rank\tmicro_f1\tsources");
    assert_eq!(lines.len(), 4, "{ranking}");

    let dist = ok(&emoreact(dir, &["distribution", "--config", "experiment.json", "--sources", "beta", "--format", "tsv"]));
    assert_eq!(dist.lines().count(), 2, "{dist}");
    assert!(dist.lines().nth(1).unwrap().starts_with("beta\t"));
}

#[test]
fn ingest_and_label_a_feed() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fs::write(
        dir.join("page.json"),
        r#"[
 {"created_time": "2016-06-19T01:40:00+0000", "message": "so sad today", "reactions": [5073, 4483, 60, 22, 54, 284, 170, 0]},
 {"created_time": "2016-06-19T01:41:00+0000", "message": "outrage", "reactions": [2256, 1011, 16, 6, 123, 409, 691, 0]},
 {"created_time": "2016-06-19T01:42:00+0000", "message": "just likes", "reactions": [10, 10, 0, 0, 0, 0, 0, 0]},
 {"created_time": "bad", "message": "", "reactions": [1]}
]"#,
    )
    .unwrap();

    let out = emoreact(dir, &["ingest", "page.json", "--out", "clean.json"]);
    ok(&out);
    assert!(String::from_utf8_lossy(&out.stderr).contains("3 posts, 1 rejected"));
    assert_eq!(emoreact(dir, &["ingest", "page.json", "--strict", "--out", "x.json"]).status.code(), Some(2));

    ok(&emoreact(dir, &["label", "clean.json", "--out", "labeled.tsv"]));
    let tsv = fs::read_to_string(dir.join("labeled.tsv")).unwrap();
    let labels: Vec<_> = tsv.lines().filter_map(|l| l.split('\t').next()).collect();
    assert!(labels.contains(&"sadness") && labels.contains(&"anger"), "{tsv}");
    assert!(tsv.contains("clean"));
    assert!(!tsv.contains("just likes"));
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();

    assert_eq!(emoreact(dir, &["--help"]).status.code(), Some(0));
    assert_eq!(emoreact(dir, &["train"]).status.code(), Some(1));
    assert_eq!(emoreact(dir, &["bogus"]).status.code(), Some(1));

    fs::write(dir.join("bad.json"), r#"{"version": 1, "sources": [], "surprise": true}"#).unwrap();
    let out = emoreact(dir, &["train", "--config", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));

    write_config(dir);
    let out = emoreact(dir, &["train", "--config", "experiment.json"]);
    assert_eq!(out.status.code(), Some(1), "missing source file");

    for name in ["alpha", "beta", "dev"] {
        fs::write(dir.join(format!("{name}.tsv")), "not\ta valid label\n").unwrap();
    }
    let out = emoreact(dir, &["train", "--config", "experiment.json"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!dir.join("run").join("model.json").exists());

    let out = emoreact(dir, &["eval", "--run", "missing", "--data", "dev.tsv"]);
    assert_ne!(out.status.code(), Some(0));
}
