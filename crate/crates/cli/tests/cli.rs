use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uudnlg"))
        .args(args)
        .env("UUDNLG_WORKERS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn path_str(path: &Path) -> &str {
    path.to_str().unwrap()
}

const DATASET: &str = "mr,ref
\"name[The Punter], area[riverside]\",Do not go to The Punter near riverside.
\"name[The Mill], eatType[pub]\",The Mill is a pub. It is cheap.
";

const PARSES: &str = "# sent_id = 1-1
# text = Do not go to xname near riverside.
1\tDo\tdo\tAUX\t_\t_\t3\taux\t_\t_
2\tnot\tnot\tPART\t_\tPolarity=Neg\t3\tadvmod\t_\t_
3\tgo\tgo\tVERB\t_\t_\t0\troot\t_\t_
4\tto\tto\tADP\t_\t_\t5\tcase\t_\t_
5\txname\txname\tPROPN\t_\t_\t3\tobl\t_\t_
6\tnear\tnear\tADP\t_\t_\t7\tcase\t_\t_
7\triverside\triverside\tNOUN\t_\t_\t3\tobl\t_\t_
8\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_

# sent_id = 2-1
# text = xname is a pub.
1\txname\txname\tPROPN\t_\t_\t4\tnsubj\t_\t_
2\tis\tbe\tAUX\t_\t_\t4\tcop\t_\t_
3\ta\ta\tDET\t_\t_\t4\tdet\t_\t_
4\tpub\tpub\tNOUN\t_\t_\t0\troot\t_\t_
5\t.\t.\tPUNCT\t_\t_\t4\tpunct\t_\t_

# sent_id = 2-2
# text = It is cheap.
1\tIt\tit\tPRON\t_\t_\t3\tnsubj\t_\t_
2\tis\tbe\tAUX\t_\t_\t3\tcop\t_\t_
3\tcheap\tcheap\tADJ\t_\t_\t0\troot\t_\t_
4\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_

";

fn prepare_inputs(dir: &TempDir, parses: &str) -> (PathBuf, PathBuf) {
    let dataset = dir.path().join("data.csv");
    let conllu = dir.path().join("parses.conllu");
    fs::write(&dataset, DATASET).unwrap();
    fs::write(&conllu, parses).unwrap();
    (dataset, conllu)
}

#[test]
fn prepare_writes_training_files() {
    let dir = TempDir::new().unwrap();
    let (dataset, conllu) = prepare_inputs(&dir, PARSES);
    let out = dir.path().join("out");
    let output = run(&[
        "prepare",
        "--dataset",
        path_str(&dataset),
        "--conllu",
        path_str(&conllu),
        "--out",
        path_str(&out),
    ]);
    assert!(output.status.success(), "{:?}", output);

    let read = |name: &str| fs::read_to_string(out.join(name)).unwrap();
    assert_eq!(
        read("planner.src"),
        "name xname area riverside\nname xname eattype pub\n"
    );
    assert_eq!(
        read("planner.tgt"),
        "go _( not xname riverside )_\npub xname <sent> cheap it\n"
    );
    assert_eq!(
        read("realizer.src"),
        "go _( not xname riverside )_\npub xname\ncheap it\n"
    );
    assert_eq!(
        read("realizer.tgt"),
        "do not go to xname near riverside .\nxname is a pub .\nit is cheap .\n"
    );
    assert_eq!(read("realizer.delex").lines().count(), 3);
    assert_eq!(
        read("planner.delex").lines().nth(1),
        Some("xname\tThe Mill")
    );

    let manifest: serde_json::Value = serde_json::from_str(&read("manifest.json")).unwrap();
    assert_eq!(manifest["planner_pairs"], 2);
    assert_eq!(manifest["realizer_pairs"], 3);
    assert_eq!(manifest["skipped"].as_array().unwrap().len(), 0);
}

#[test]
fn prepare_skips_utterance_with_missing_parse() {
    let dir = TempDir::new().unwrap();
    let without_last = PARSES.split("# sent_id = 2-2").next().unwrap();
    let (dataset, conllu) = prepare_inputs(&dir, without_last);
    let out = dir.path().join("out");
    let output = run(&[
        "prepare",
        "--dataset",
        path_str(&dataset),
        "--conllu",
        path_str(&conllu),
        "--out",
        path_str(&out),
    ]);
    assert!(output.status.success(), "{:?}", output);

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["planner_pairs"], 1);
    assert_eq!(manifest["realizer_pairs"], 1);
    let skipped = manifest["skipped"].as_array().unwrap();
    assert_eq!(skipped.len(), 1);
    assert_eq!(skipped[0]["row"], 2);
    assert!(skipped[0]["reason"].as_str().unwrap().contains("2-2"));
}

#[test]
fn prepare_rejects_misaligned_parses() {
    let dir = TempDir::new().unwrap();
    let wrong = PARSES.replace("# sent_id = 2-2", "# sent_id = 7-1");
    let (dataset, conllu) = prepare_inputs(&dir, &wrong);
    let output = run(&[
        "prepare",
        "--dataset",
        path_str(&dataset),
        "--conllu",
        path_str(&conllu),
        "--out",
        path_str(&dir.path().join("out")),
    ]);
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("7-1"));
}

#[test]
fn prepare_emits_sentences_for_parser() {
    let dir = TempDir::new().unwrap();
    let (dataset, _) = prepare_inputs(&dir, PARSES);
    let out = dir.path().join("sentences.tsv");
    let output = run(&[
        "prepare",
        "--dataset",
        path_str(&dataset),
        "--emit-sentences",
        path_str(&out),
    ]);
    assert!(output.status.success(), "{:?}", output);
    assert_eq!(
        fs::read_to_string(out).unwrap(),
        "1-1\tDo not go to xname near riverside.\n2-1\txname is a pub.\n2-2\tIt is cheap.\n"
    );
}

#[test]
fn filter_keeps_in_bounds_in_vocabulary_sentences() {
    let dir = TempDir::new().unwrap();
    let vocab = dir.path().join("vocab.txt");
    let input = dir.path().join("raw.txt");
    let kept = dir.path().join("kept.txt");
    let report = dir.path().join("report.txt");
    fs::write(
        &vocab,
        "The Mill is a cheap pub near the river.\nIt serves good food in the city centre.\n",
    )
    .unwrap();
    fs::write(
        &input,
        "The Mill is a cheap pub.\n\
         It serves food.\n\
         The pub serves good food near the river.\n\
         The Mill serves sushi in the city centre.\n\
         It is a good pub in the city centre.\n\
         The the the the the the the the the the the the the the the the the the the the the the the the the the the the the the the.\n",
    )
    .unwrap();
    let output = run(&[
        "filter",
        "--in",
        path_str(&input),
        "--vocab-source",
        path_str(&vocab),
        "--out",
        path_str(&kept),
        "--report",
        path_str(&report),
    ]);
    assert!(output.status.success(), "{:?}", output);

    assert_eq!(
        fs::read_to_string(&kept).unwrap(),
        "The Mill is a cheap pub.\n\
         The pub serves good food near the river.\n\
         It is a good pub in the city centre.\n"
    );
    let report = fs::read_to_string(&report).unwrap();
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[1], "rejected\tlength 4");
    assert_eq!(lines[3], "rejected\toov sushi");
    assert_eq!(lines[5], "rejected\tlength 32");

    let stats = run(&["stats", "--in", path_str(&kept)]);
    assert!(stats.status.success());
    assert_eq!(
        stdout(&stats),
        "sentences\t3\nmin_len\t7\nmax_len\t10\nmean_len\t8.67\n"
    );
}

#[test]
fn linearize_delinearize_fixpoint() {
    let dir = TempDir::new().unwrap();
    let first = run(&[
        "linearize",
        "--in",
        path_str(&fixture("golden.conllu")),
        "--lowercase",
    ]);
    assert!(first.status.success(), "{:?}", first);
    let ir = dir.path().join("a.ir");
    fs::write(&ir, &first.stdout).unwrap();
    assert_eq!(
        stdout(&first).lines().next(),
        Some("go _( not xname riverside )_")
    );

    let trees = dir.path().join("trees.conllu");
    let back = run(&[
        "delinearize",
        "--in",
        path_str(&ir),
        "--out",
        path_str(&trees),
    ]);
    assert!(back.status.success(), "{:?}", back);

    let again = run(&["linearize", "--in", path_str(&trees)]);
    assert!(again.status.success(), "{:?}", again);
    assert_eq!(again.stdout, first.stdout);
}

#[test]
fn validate_reports_first_bad_line() {
    let dir = TempDir::new().unwrap();
    let ir = dir.path().join("bad.ir");
    fs::write(&ir, "go _( not xname )_\nhave _( it\nx )_\n").unwrap();
    let output = run(&["validate", "--ir", path_str(&ir)]);
    assert_eq!(output.status.code(), Some(1));
    let text = stdout(&output);
    assert!(text.contains("bad.ir:2:"), "{}", text);
    assert!(!text.contains("bad.ir:3:"), "{}", text);

    let ok = run(&["validate", "--conllu", path_str(&fixture("golden.conllu"))]);
    assert!(ok.status.success());
    assert!(stdout(&ok).contains("ok, 3 sentences"));

    let broken = dir.path().join("bad.conllu");
    fs::write(&broken, "1\tgo\tgo\tVERB\t_\t_\t0\troot\t_\n").unwrap();
    let output = run(&["validate", "--conllu", path_str(&broken)]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stdout(&output).contains("bad.conllu:1:"));
}

#[test]
fn score_identical_hypotheses() {
    let refs = fixture("metrics.ref");
    let output = run(&[
        "score",
        "--hyp",
        path_str(&refs),
        "--refs",
        path_str(&refs),
        "--pretokenized",
        "--format",
        "machine-readable",
    ]);
    assert!(output.status.success(), "{:?}", output);
    let text = stdout(&output);
    let value = |name: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{}\t", name)))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((value("bleu") - 1.0).abs() < 1e-12);
    assert!((value("rouge_l") - 1.0).abs() < 1e-12);
}

#[test]
fn score_fixture_text_report() {
    let output = run(&[
        "score",
        "--hyp",
        path_str(&fixture("metrics.hyp")),
        "--refs",
        path_str(&fixture("metrics.ref")),
        "--pretokenized",
    ]);
    assert!(output.status.success(), "{:?}", output);
    let text = stdout(&output);
    assert!(text.contains("BLEU:     0.4142"), "{}", text);
    assert!(text.contains("CIDEr:    3.7436"), "{}", text);
}

#[test]
fn lint_flags_missing_and_repeated_words() {
    let dir = TempDir::new().unwrap();
    let ir = dir.path().join("ir.txt");
    let gen = dir.path().join("gen.txt");
    fs::write(
        &ir,
        "go _( not xname riverside )_\ngo _( not xname riverside )_\n",
    )
    .unwrap();
    fs::write(
        &gen,
        "Not go to xname in riverside.\nDo not go to xname xname.\n",
    )
    .unwrap();
    let output = run(&["lint", "--ir", path_str(&ir), "--gen", path_str(&gen)]);
    assert_eq!(output.status.code(), Some(1));
    assert_eq!(
        stdout(&output),
        "pass\tmissing=\trepeated=\nfail\tmissing=riverside\trepeated=xname\n"
    );

    let lenient = run(&[
        "lint",
        "--ir",
        path_str(&ir),
        "--gen",
        path_str(&gen),
        "--allowance",
        "1",
    ]);
    assert!(stdout(&lenient).ends_with("fail\tmissing=riverside\trepeated=\n"));
}

#[test]
fn relexicalize_restores_values() {
    let dir = TempDir::new().unwrap();
    let text = dir.path().join("gen.txt");
    let delex = dir.path().join("gen.delex");
    fs::write(&text, "xname is near xnear .\n").unwrap();
    fs::write(&delex, "xname\tThe Sorrento\txnear\tThe Wrestlers\n").unwrap();
    let output = run(&[
        "relexicalize",
        "--in",
        path_str(&text),
        "--delex",
        path_str(&delex),
    ]);
    assert!(output.status.success(), "{:?}", output);
    assert_eq!(stdout(&output), "The Sorrento is near The Wrestlers .\n");
}

#[test]
fn bad_worker_count_is_an_error() {
    let output = Command::new(env!("CARGO_BIN_EXE_uudnlg"))
        .args(["stats", "--in", path_str(&fixture("metrics.ref"))])
        .env("UUDNLG_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn validate_reports_structural_ir_errors() {
    let dir = TempDir::new().unwrap();
    let ir = dir.path().join("trailing.ir");
    fs::write(&ir, "go _( not xname )_\na _( b c )_ d\n").unwrap();
    let output = run(&["validate", "--ir", path_str(&ir)]);
    assert_eq!(output.status.code(), Some(1));
    let text = stdout(&output);
    assert!(
        text.contains("trailing.ir:2: token 5 follows the closed top-level scope"),
        "{}",
        text
    );
}
