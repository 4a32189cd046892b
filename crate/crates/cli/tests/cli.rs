use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use depsig::model;
use depsig::{pipeline, Analyzer, FeatureSet, Label, LabeledCorpus, TrainConfig};
use serde_json::Value;
use tempfile::TempDir;

fn depsig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_depsig"))
        .args(args)
        .output()
        .expect("spawn depsig")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ok(o: Output) -> Output {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    o
}

const WORDS: [[&str; 4]; 3] = [
    ["sunny", "garden", "picnic", "football"],
    ["tired", "lonely", "worried", "sleepless"],
    ["hopeless", "worthless", "despair", "abyss"],
];

/// Posts whose vocabularies are disjoint across classes.
fn separable(per_class: usize, offset: usize) -> LabeledCorpus {
    let mut rows = Vec::new();
    for i in 0..per_class {
        for label in Label::ALL {
            let w = &WORDS[label.index()];
            let text = format!(
                "{} {} and {}.",
                w[(i + offset) % 4],
                w[(i + offset + 1) % 4],
                w[(i + offset + 2) % 4]
            );
            rows.push((text, label));
        }
    }
    LabeledCorpus::from_texts(rows)
}

fn write_corpus(dir: &Path, name: &str, corpus: &LabeledCorpus) -> PathBuf {
    let path = dir.join(name);
    corpus.write_tsv(fs::File::create(&path).unwrap()).unwrap();
    path
}

struct Fixture {
    dir: TempDir,
    train: PathBuf,
    dev: PathBuf,
}

fn fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let train = write_corpus(dir.path(), "train.tsv", &separable(8, 0));
    let dev = write_corpus(dir.path(), "dev.tsv", &separable(4, 1));
    Fixture { dir, train, dev }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn train(f: &Fixture, name: &str, extra: &[&str]) -> PathBuf {
    let out = f.dir.path().join(name);
    let mut args = vec!["train", "--data", s(&f.train), "--features", "model2", "--out", s(&out)];
    args.extend_from_slice(extra);
    ok(depsig(&args));
    out
}

#[test]
fn train_then_evaluate_scores_perfectly_on_separable_posts() {
    let f = fixture();
    let m = train(&f, "m.dsg", &[]);
    let report = f.dir.path().join("report.json");
    let confusion = f.dir.path().join("confusion.csv");
    let o = ok(depsig(&[
        "evaluate",
        "--model",
        s(&m),
        "--data",
        s(&f.dev),
        "--report-out",
        s(&report),
        "--confusion-out",
        s(&confusion),
    ]));
    let printed: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(printed["macro_f1"], 1.0);
    let written: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(written, printed);
    let csv = fs::read_to_string(&confusion).unwrap();
    assert_eq!(csv.lines().next(), Some("gold,not depression,moderate,severe"));
    assert_eq!(csv.lines().nth(3), Some("severe,0,0,4"));

    let text = ok(depsig(&[
        "evaluate",
        "--model",
        s(&m),
        "--data",
        s(&f.dev),
        "--output",
        "text",
    ]));
    assert!(stdout(&text).contains("macro F1 1.0000"));
}

#[test]
fn predict_matches_the_in_process_model() {
    let f = fixture();
    let m = train(&f, "m.dsg", &[]);
    let o = ok(depsig(&["predict", "--model", s(&m), "--text", "I am lost"]));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let probs = &v["probabilities"];
    let p: Vec<f64> = ["not depression", "moderate", "severe"]
        .iter()
        .map(|k| probs[k].as_f64().unwrap())
        .collect();
    assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(p.iter().all(|&x| x > 0.0));

    let corpus = depsig::corpus::load_corpus(&f.train, depsig::corpus::CorpusFormat::Tsv, &Default::default()).unwrap();
    let analyzer = Analyzer::bundled();
    let in_memory = pipeline::train_model(
        &corpus,
        FeatureSet::Model2,
        Default::default(),
        &TrainConfig::default(),
        &analyzer,
    )
    .unwrap();
    let (label, expected) = pipeline::predict_text(&in_memory, "I am lost", &analyzer).unwrap();
    assert_eq!(v["label"], label.as_str());
    assert_eq!(p, expected.to_vec());
    assert_eq!(model::load(&m).unwrap(), in_memory);
}

#[test]
fn predict_over_a_corpus_emits_one_line_per_post() {
    let f = fixture();
    let m = train(&f, "m.dsg", &[]);
    let o = ok(depsig(&["predict", "--model", s(&m), "--data", s(&f.dev)]));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 12);
    assert_eq!(lines[2]["id"], "2");
    assert_eq!(lines[2]["label"], "severe");

    let o = ok(depsig(&[
        "predict",
        "--model",
        s(&m),
        "--data",
        s(&f.dev),
        "--output",
        "csv",
    ]));
    let out = stdout(&o);
    assert_eq!(
        out.lines().next(),
        Some("id,label,p_not_depression,p_moderate,p_severe")
    );
    assert_eq!(out.lines().count(), 13);
}

#[test]
fn identical_runs_write_identical_model_files() {
    let f = fixture();
    let a = train(&f, "a.dsg", &["--seed", "7"]);
    let b = train(&f, "b.dsg", &["--seed", "7"]);
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn usage_errors_exit_with_one() {
    let o = depsig(&["train", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Usage"));
    assert_eq!(depsig(&[]).status.code(), Some(1));
    assert_eq!(depsig(&["--help"]).status.code(), Some(0));
    assert_eq!(depsig(&["train", "--help"]).status.code(), Some(0));

    let f = fixture();
    let o = depsig(&["bootstrap", "--data", s(&f.train), "--runs", "1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let o = depsig(&[
        "train",
        "--data",
        s(&f.train),
        "--l2",
        "-1",
        "--out",
        s(&f.dir.path().join("m")),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn data_errors_exit_with_two() {
    let f = fixture();
    let missing = f.dir.path().join("missing.tsv");
    let o = depsig(&["train", "--data", s(&missing), "--out", s(&f.dir.path().join("m.dsg"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not found"));

    let bad = f.dir.path().join("bad.tsv");
    fs::write(&bad, "id\ttext\tlabel\n1\thello\tecstatic\n").unwrap();
    let o = depsig(&["train", "--data", s(&bad), "--out", s(&f.dir.path().join("m.dsg"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ecstatic"));

    let junk = f.dir.path().join("junk.dsg");
    fs::write(&junk, "{").unwrap();
    let o = depsig(&["predict", "--model", s(&junk), "--text", "hi"]);
    assert_eq!(o.status.code(), Some(2));

    let o = depsig(&[
        "split",
        "--data",
        s(&f.train),
        "--train-out",
        "/no/such/dir/a",
        "--test-out",
        "b",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults_and_flags_override_it() {
    let f = fixture();
    let cfg = f.dir.path().join("depsig.toml");
    fs::write(&cfg, "l2 = 0.5\nmax_iter = 40\nfeatures = \"model1\"\n").unwrap();
    let out = f.dir.path().join("m.dsg");
    let o = ok(depsig(&[
        "--config",
        s(&cfg),
        "train",
        "--data",
        s(&f.train),
        "--l2",
        "2",
        "--out",
        s(&out),
    ]));
    let err = stderr(&o);
    let logged = err.lines().find(|l| l.starts_with("depsig: config ")).unwrap();
    let v: Value = serde_json::from_str(logged.trim_start_matches("depsig: config ")).unwrap();
    assert_eq!(v["train"]["l2_strength"], 2.0);
    assert_eq!(v["train"]["max_iter"], 40);
    assert_eq!(v["features"], "model1");
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["dimension"], 13 + 17 + 22);

    fs::write(&cfg, "l2 = 0.5\nunknown_key = 1\n").unwrap();
    let o = depsig(&["--config", s(&cfg), "train", "--data", s(&f.train), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn ingest_reports_counts_and_histogram() {
    let f = fixture();
    let hist = f.dir.path().join("hist.csv");
    let o = ok(depsig(&[
        "ingest",
        "--data",
        s(&f.train),
        "--stats",
        "--histogram-width",
        "2",
        "--histogram-out",
        s(&hist),
    ]));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["total"], 24);
    assert_eq!(v["classes"][1]["label"], "moderate");
    assert_eq!(v["classes"][1]["count"], 8);
    assert_eq!(v["stats"]["mean_words"], 4.0);
    // no pronouns, so nothing is first person
    assert_eq!(v["stats"]["classes"][0]["first_person_ratio"], 0.0);
    assert_eq!(
        fs::read_to_string(&hist).unwrap(),
        "bucket_start,bucket_end,count\n0,1,0\n2,3,0\n4,5,24\n"
    );
}

#[test]
fn ingest_detects_shared_task_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dev.tsv");
    fs::write(
        &path,
        "PID\tText_data\tLabel\ndev_1\tI feel fine\tnot depression\ndev_2\tso tired\tmoderate\n",
    )
    .unwrap();
    let o = ok(depsig(&["ingest", "--data", s(&path), "--output", "csv"]));
    assert_eq!(stdout(&o), "label,count\nnot depression,1\nmoderate,1\nsevere,0\n");
}

#[test]
fn split_is_seeded_and_stratified() {
    let f = fixture();
    let run = |seed: &str, tag: &str| {
        let tr = f.dir.path().join(format!("tr{tag}.tsv"));
        let te = f.dir.path().join(format!("te{tag}.tsv"));
        let o = ok(depsig(&[
            "split",
            "--data",
            s(&f.train),
            "--fraction",
            "0.25",
            "--seed",
            seed,
            "--train-out",
            s(&tr),
            "--test-out",
            s(&te),
        ]));
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert!(v["test"].as_array().unwrap().iter().all(|c| c["count"] == 2));
        (fs::read(tr).unwrap(), fs::read(te).unwrap())
    };
    assert_eq!(run("3", "a"), run("3", "b"));
    assert_ne!(run("3", "a").1, run("4", "c").1);
}

#[test]
fn inspect_filters_by_template_and_class() {
    let f = fixture();
    let m = train(&f, "m.dsg", &[]);
    let full = f.dir.path().join("ranking.csv");
    let o = ok(depsig(&[
        "inspect",
        "--model",
        s(&m),
        "--top",
        "3",
        "--template",
        "words",
        "--class",
        "severe",
        "--csv-out",
        s(&full),
    ]));
    let rows: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["class"] == "severe" && r["template"] == "words"));
    assert!(rows.iter().all(|r| r["weight"].as_f64().unwrap() > 0.0));
    assert!(rows.windows(2).all(|w| w[0]["rank"].as_u64() < w[1]["rank"].as_u64()));
    let severe_words: Vec<&str> = WORDS[2].to_vec();
    assert!(rows
        .iter()
        .all(|r| severe_words.contains(&r["feature_name"].as_str().unwrap())));
    let csv = fs::read_to_string(&full).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * (12 + 1 + 17 + 22 + 5));

    let all = ok(depsig(&["inspect", "--model", s(&m)]));
    let rows: Vec<Value> = serde_json::from_str(&stdout(&all)).unwrap();
    assert_eq!(rows.len(), 3 * 4 * 5);

    let none = depsig(&["inspect", "--model", s(&m), "--top", "0"]);
    assert_eq!(none.status.code(), Some(1));
}

#[test]
fn featurize_dumps_sparse_words_and_dense_tail() {
    let f = fixture();
    let m = train(&f, "m.dsg", &[]);
    let o = ok(depsig(&["featurize", "--model", s(&m), "--data", s(&f.dev)]));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 12);
    let first = &lines[0];
    assert_eq!(first["id"], "0");
    assert_eq!(first["words"].as_array().unwrap().len(), 4);
    let dense = first["dense"].as_array().unwrap();
    assert_eq!(dense.len(), 17 + 22 + 5);
    assert_eq!(dense[0]["template"], "pos");
    assert_eq!(dense[17]["template"], "read");
    let pos_sum: f64 = dense[..17].iter().map(|d| d["value"].as_f64().unwrap()).sum();
    assert!((pos_sum - 1.0).abs() < 1e-9);
}

#[test]
fn analyze_prints_token_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("post.txt");
    fs::write(&path, "I am lost. They left!").unwrap();
    let o = ok(depsig(&["analyze", s(&path)]));
    let out = stdout(&o);
    let rows: Vec<Vec<&str>> = out.lines().map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows[0][0], "sentence");
    assert_eq!(rows.len(), 1 + 7);
    assert_eq!(rows[1], ["1", "1", "0", "1", "I", "PRON", "1", "Sg", "1"]);
    assert_eq!(rows[4][5], "PUNCT");
    assert_eq!(rows[5][..2], ["2", "5"]);
    assert_eq!(rows[5][6..8], ["3", "Pl"]);
}

#[test]
fn bootstrap_is_independent_of_thread_count() {
    let f = fixture();
    let run = |threads: &str, name: &str| {
        let out = f.dir.path().join(name);
        let o = ok(depsig(&[
            "bootstrap",
            "--data",
            s(&f.train),
            "--runs",
            "4",
            "--fraction",
            "0.75",
            "--seed",
            "1",
            "--max-iter",
            "50",
            "--threads",
            threads,
            "--out",
            s(&out),
        ]));
        (stdout(&o), fs::read(out).unwrap())
    };
    let (one, csv_one) = run("1", "a.csv");
    let (three, csv_three) = run("3", "b.csv");
    assert_eq!(one, three);
    assert_eq!(csv_one, csv_three);
    let v: Value = serde_json::from_str(&one).unwrap();
    assert_eq!(v["n_runs"], 4);
    assert_eq!(v["top"].as_array().unwrap().len(), 3 * 4 * 5);
}
