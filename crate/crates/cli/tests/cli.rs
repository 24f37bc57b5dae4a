//! End-to-end command tests against the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn rwov(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rwov"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("reading {name}: {e}"))
}

#[test]
fn synth_hits_preset_prevalences_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "synth", "--preset", "table1", "--n", "300", "--seed", "7", "--out", "a",
    ];
    let out = rwov(dir.path(), &args);
    assert_ok(&out);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("ER:"), "{stdout}");

    let docs = read(dir.path(), "a/corpus.jsonl");
    let er_pos = docs.matches("\"ER\":\"pos\"").count();
    // 300 * 0.775 = 232.5, so 232 or 233.
    assert!((232..=233).contains(&er_pos), "ER positives {er_pos}");

    let mut args_b = args;
    args_b[8] = "b";
    assert_ok(&rwov(dir.path(), &args_b));
    assert_eq!(docs, read(dir.path(), "b/corpus.jsonl"));
}

#[test]
fn synth_rejects_zero_documents() {
    let dir = tempfile::tempdir().unwrap();
    let out = rwov(dir.path(), &["synth", "--n", "0"]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("n_docs"), "{stderr}");
}

#[test]
fn synth_csv_format_round_trips_header() {
    let dir = tempfile::tempdir().unwrap();
    assert_ok(&rwov(
        dir.path(),
        &["synth", "--n", "10", "--seed", "3", "--format", "csv"],
    ));
    let csv = read(dir.path(), "corpus.csv");
    assert!(csv.starts_with("id,text,ER,PR,HER2"), "{csv}");
}

#[test]
fn vectorize_produces_hand_verifiable_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = concat!(
        "{\"id\":\"d1\",\"text\":\"Positive for ER, negative for PR.\",\"labels\":{\"ER\":\"pos\"}}\n",
        "{\"id\":\"d2\",\"text\":\"Negative for ER.\",\"labels\":{\"ER\":\"neg\"}}\n",
        "{\"id\":\"d3\",\"text\":\"ER positive.\",\"labels\":{\"ER\":\"pos\"}}\n",
    );
    std::fs::write(dir.path().join("toy.jsonl"), corpus).unwrap();
    std::fs::write(dir.path().join("er.conf"), "[toi ER]\n").unwrap();
    let out = rwov(
        dir.path(),
        &["vectorize", "--config", "er.conf", "--corpus", "toy.jsonl"],
    );
    assert_ok(&out);

    let top = read(dir.path(), "topwords_er.tsv");
    assert_eq!(top, "neg\t2\nposit\t2\npr\t1\n");
    let matrix = read(dir.path(), "matrix_er.csv");
    let lines: Vec<&str> = matrix.lines().collect();
    assert_eq!(lines[0], "doc_id,neg,posit,pr");
    assert_eq!(
        lines[1],
        "d1,1.0000000000000000e0,-1.0000000000000000e0,5.0000000000000000e-1"
    );
    assert_eq!(
        lines[2],
        "d2,-1.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0"
    );
    assert_eq!(
        lines[3],
        "d3,0.0000000000000000e0,1.0000000000000000e0,0.0000000000000000e0"
    );
}

#[test]
fn vectorize_without_toi_names_it_and_fails() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("toy.jsonl"),
        "{\"id\":\"d1\",\"text\":\"Margins are free of tumor.\",\"labels\":{\"ER\":\"pos\"}}\n",
    )
    .unwrap();
    let out = rwov(dir.path(), &["vectorize", "--corpus", "toy.jsonl"]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("ER"), "{stderr}");
    assert!(stderr.contains("empty input"), "{stderr}");
}

#[test]
fn vectorize_reruns_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    assert_ok(&rwov(dir.path(), &["synth", "--n", "40", "--seed", "5"]));
    assert_ok(&rwov(
        dir.path(),
        &["vectorize", "--corpus", "corpus.jsonl", "--out", "v1"],
    ));
    assert_ok(&rwov(
        dir.path(),
        &["vectorize", "--corpus", "corpus.jsonl", "--out", "v2"],
    ));
    for name in ["topwords_er.tsv", "matrix_er.csv", "matrix_her2.csv"] {
        assert_eq!(
            read(dir.path(), &format!("v1/{name}")),
            read(dir.path(), &format!("v2/{name}")),
            "{name}"
        );
    }
}

#[test]
fn compare_writes_reports_and_marks_broken_methods_failed() {
    let dir = tempfile::tempdir().unwrap();
    assert_ok(&rwov(
        dir.path(),
        &["synth", "--n", "60", "--seed", "11", "--toi", "ER=0.5"],
    ));
    std::fs::write(dir.path().join("er.conf"), "[toi ER]\n[eval]\nbootstrap = 100\n").unwrap();
    let out = rwov(
        dir.path(),
        &[
            "compare",
            "--config",
            "er.conf",
            "--corpus",
            "corpus.jsonl",
            "--methods",
            "rwov-svm,definitely-broken",
            "--seed",
            "11",
        ],
    );
    // Broken method id: partial results flushed, nonzero exit.
    assert!(!out.status.success());
    let report = read(dir.path(), "report.csv");
    assert!(report.contains("RWOV-SVM,ok"), "{report}");
    assert!(report.contains("definitely-broken,FAILED"), "{report}");
    let txt = read(dir.path(), "report.txt");
    assert!(txt.contains("FAILED: unknown method id"), "{txt}");
    assert!(dir.path().join("ci.csv").exists());
    assert!(dir.path().join("roc.csv").exists());
    assert!(dir.path().join("folds.csv").exists());
}

#[test]
fn compare_via_config_file_runs_the_configured_grid() {
    let dir = tempfile::tempdir().unwrap();
    assert_ok(&rwov(
        dir.path(),
        &["synth", "--n", "60", "--seed", "13", "--toi", "ER=0.5"],
    ));
    std::fs::write(
        dir.path().join("run.conf"),
        "corpus = corpus.jsonl\nseed = 13\n\
         [toi ER]\naliases = estrogen receptor\n\
         [methods]\nrwov-svm\nsvm(1,2)\n\
         [eval]\nbootstrap = 100\n",
    )
    .unwrap();
    let out = rwov(dir.path(), &["compare", "--config", "run.conf"]);
    assert_ok(&out);
    let report = read(dir.path(), "report.csv");
    assert_eq!(report.lines().count(), 3, "{report}");
    assert!(report.contains("RWOV-SVM,ok"));
    assert!(report.contains("\"SVM(1,2)\",ok"));
}

#[test]
fn train_then_predict_matches_in_memory_scores() {
    let dir = tempfile::tempdir().unwrap();
    assert_ok(&rwov(
        dir.path(),
        &["synth", "--n", "50", "--seed", "17", "--toi", "ER=0.6"],
    ));
    assert_ok(&rwov(
        dir.path(),
        &[
            "train", "--corpus", "corpus.jsonl", "--method", "rwov-svm", "--toi", "ER",
            "--class", "pos", "--seed", "17", "--model-out", "model.txt",
        ],
    ));
    assert_ok(&rwov(
        dir.path(),
        &["predict", "--corpus", "corpus.jsonl", "--model", "model.txt"],
    ));

    // Recompute scores in memory from the persisted bundle.
    let bundle = rwov_core::persist::ModelBundle::<f64>::from_text(&read(dir.path(), "model.txt"))
        .unwrap();
    let docs = rwov_core::corpus::load_corpus(
        &dir.path().join("corpus.jsonl"),
        rwov_core::corpus::CorpusFormat::Jsonl,
    )
    .unwrap();
    let predictions = read(dir.path(), "predictions.csv");
    let mut lines = predictions.lines();
    assert_eq!(lines.next(), Some("doc_id,score,predicted_class,flag"));
    for (doc, line) in docs.iter().zip(lines) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0], doc.id);
        match bundle.score_document(doc).unwrap() {
            Some((score, predicted)) => {
                assert_eq!(fields[1].parse::<f64>().unwrap(), score, "{line}");
                assert_eq!(fields[2], bundle.predicted_label(predicted).as_str());
                assert_eq!(fields[3], "");
            }
            None => {
                assert_eq!(fields[1], "");
                assert_eq!(fields[3], "toi_not_found");
            }
        }
    }
}

#[test]
fn predict_flags_documents_without_the_toi() {
    let dir = tempfile::tempdir().unwrap();
    assert_ok(&rwov(
        dir.path(),
        &["synth", "--n", "40", "--seed", "19", "--toi", "ER=0.5"],
    ));
    assert_ok(&rwov(
        dir.path(),
        &[
            "train", "--corpus", "corpus.jsonl", "--method", "rwov-nn", "--toi", "ER",
            "--seed", "19", "--model-out", "model.txt",
        ],
    ));
    std::fs::write(
        dir.path().join("new.jsonl"),
        concat!(
            "{\"id\":\"with\",\"text\":\"ER is positive in 90 percent of tumor cells.\"}\n",
            "{\"id\":\"without\",\"text\":\"Margins are free of tumor.\"}\n",
        ),
    )
    .unwrap();
    assert_ok(&rwov(
        dir.path(),
        &["predict", "--corpus", "new.jsonl", "--model", "model.txt"],
    ));
    let predictions = read(dir.path(), "predictions.csv");
    assert!(predictions.contains("without,,,toi_not_found"), "{predictions}");
    let with_line = predictions
        .lines()
        .find(|l| l.starts_with("with,"))
        .unwrap();
    assert!(with_line.ends_with("pos,") || with_line.ends_with("neg,"), "{with_line}");
}

#[test]
fn predict_rejects_tampered_model_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    assert_ok(&rwov(
        dir.path(),
        &["synth", "--n", "40", "--seed", "23", "--toi", "ER=0.5"],
    ));
    assert_ok(&rwov(
        dir.path(),
        &[
            "train", "--corpus", "corpus.jsonl", "--method", "rwov-svm", "--toi", "ER",
            "--seed", "23", "--model-out", "model.txt",
        ],
    ));
    let tampered: String = read(dir.path(), "model.txt")
        .lines()
        .map(|l| {
            if l.starts_with("weights = ") {
                let mut parts: Vec<&str> = l.split(' ').collect();
                parts.pop();
                parts.join(" ") + "\n"
            } else {
                format!("{l}\n")
            }
        })
        .collect();
    std::fs::write(dir.path().join("tampered.txt"), tampered).unwrap();
    let out = rwov(
        dir.path(),
        &["predict", "--corpus", "corpus.jsonl", "--model", "tampered.txt"],
    );
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("dimension mismatch"), "{stderr}");
}

#[test]
fn predict_rejects_unknown_model_versions() {
    let dir = tempfile::tempdir().unwrap();
    assert_ok(&rwov(
        dir.path(),
        &["synth", "--n", "40", "--seed", "29", "--toi", "ER=0.5"],
    ));
    assert_ok(&rwov(
        dir.path(),
        &[
            "train", "--corpus", "corpus.jsonl", "--method", "rwov-svm", "--toi", "ER",
            "--seed", "29", "--model-out", "model.txt",
        ],
    ));
    let bumped = read(dir.path(), "model.txt").replace("rwov-model v1", "rwov-model v2");
    std::fs::write(dir.path().join("v2.txt"), bumped).unwrap();
    let out = rwov(
        dir.path(),
        &["predict", "--corpus", "corpus.jsonl", "--model", "v2.txt"],
    );
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("version"));
}

#[test]
fn crossval_subcommand_writes_prefixed_reports() {
    let dir = tempfile::tempdir().unwrap();
    assert_ok(&rwov(
        dir.path(),
        &["synth", "--n", "60", "--seed", "31", "--toi", "ER=0.5"],
    ));
    std::fs::write(
        dir.path().join("run.conf"),
        "corpus = corpus.jsonl\nseed = 31\n[toi ER]\n[eval]\nbootstrap = 100\n",
    )
    .unwrap();
    let out = rwov(
        dir.path(),
        &["crossval", "--config", "run.conf", "--method", "rwov-svm"],
    );
    assert_ok(&out);
    let folds = read(dir.path(), "crossval_folds.csv");
    assert!(folds.starts_with("method,class,fold,f1,precision,recall,auc"));
    // threefold, two classes -> six fold rows.
    assert_eq!(folds.lines().count(), 7, "{folds}");
}
