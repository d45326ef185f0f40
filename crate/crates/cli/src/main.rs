//! `uudnlg`: file-to-file pipeline commands.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use uudnlg::conllu::{parse_conllu, serialize_conllu, Sentence, Token};
use uudnlg::corpus::{
    build_vocab, corpus_stats, filter_augmentation, split_sentences, tokenize_lower, LengthBounds,
};
use uudnlg::e2e::{read_dataset, relexicalize, DelexMap};
use uudnlg::ir::{delinearize, linearize, parse_ir, IrSequence};
use uudnlg::lint::{lint_coverage, Verdict};
use uudnlg::metrics::score_files;
use uudnlg::prepare::{lowercase_forms, prepare, sentences_for_parsing};
use uudnlg::uud::{convert, PruneRules, UudNode};

#[derive(Parser)]
#[command(name = "uudnlg", version, about = "Content-word IR data pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build planner and realizer training files from a dataset and its parses.
    Prepare(PrepareArgs),
    /// Keep augmentation sentences that fit the length bounds and vocabulary.
    Filter(FilterArgs),
    /// Score hypotheses against references.
    Score(ScoreArgs),
    /// Print sentence count and length statistics.
    Stats(StatsArgs),
    /// Convert CoNLL-U parses to IR lines.
    Linearize(LinearizeArgs),
    /// Convert IR lines back to CoNLL-U trees.
    Delinearize(InOut),
    /// Check CoNLL-U and IR files and report the first problem.
    Validate(ValidateArgs),
    /// Check generated text for missing or repeated IR words.
    Lint(LintArgs),
    /// Put delexicalized values back into generated text.
    Relexicalize(RelexArgs),
}

#[derive(Args)]
struct PrepareArgs {
    /// CSV file with an `mr,ref` header.
    #[arg(long)]
    dataset: PathBuf,
    /// Parses of the delexicalized sentences.
    #[arg(long, required_unless_present = "emit_sentences")]
    conllu: Option<PathBuf>,
    /// Pruning rule directives applied on top of the defaults.
    #[arg(long)]
    rules: Option<PathBuf>,
    #[arg(long, required_unless_present = "emit_sentences")]
    out: Option<PathBuf>,
    /// Only write `id<TAB>sentence` lines for the parser and stop.
    #[arg(long)]
    emit_sentences: Option<PathBuf>,
}

#[derive(Args)]
struct FilterArgs {
    /// Candidate sentences, one per line.
    #[arg(long = "in")]
    input: PathBuf,
    /// Text whose tokens make up the vocabulary.
    #[arg(long)]
    vocab_source: PathBuf,
    #[arg(long, default_value_t = 5)]
    min_len: usize,
    #[arg(long, default_value_t = 30)]
    max_len: usize,
    #[arg(long)]
    out: PathBuf,
    /// One line per input sentence: `kept` or `rejected<TAB>reason`.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Input lines are documents to split into sentences first.
    #[arg(long)]
    documents: bool,
    #[arg(long)]
    pretokenized: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScoreFormat {
    Text,
    MachineReadable,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    hyp: PathBuf,
    /// Reference files, parallel to the hypotheses, or one file of
    /// blank-line separated blocks.
    #[arg(long, required = true, value_delimiter = ',')]
    refs: Vec<PathBuf>,
    #[arg(long)]
    pretokenized: bool,
    #[arg(long, value_enum, default_value_t = ScoreFormat::Text)]
    format: ScoreFormat,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    documents: bool,
    #[arg(long)]
    pretokenized: bool,
}

#[derive(Args)]
struct InOut {
    #[arg(long = "in")]
    input: PathBuf,
    /// Defaults to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LinearizeArgs {
    #[command(flatten)]
    io: InOut,
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Lowercase forms before pruning.
    #[arg(long)]
    lowercase: bool,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    conllu: Option<PathBuf>,
    #[arg(long)]
    ir: Option<PathBuf>,
}

#[derive(Args)]
struct LintArgs {
    #[arg(long)]
    ir: PathBuf,
    /// Generated text, one sentence per IR line.
    #[arg(long)]
    gen: PathBuf,
    /// Extra repeats tolerated per IR word.
    #[arg(long, default_value_t = 0)]
    allowance: usize,
    #[arg(long)]
    pretokenized: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RelexArgs {
    #[command(flatten)]
    io: InOut,
    /// Sidecar with one delexicalization map per line.
    #[arg(long)]
    delex: PathBuf,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(path) => write(path, contents),
        None => io::stdout()
            .write_all(contents.as_bytes())
            .context("writing to standard output"),
    }
}

fn lines_file<I: IntoIterator<Item = S>, S: AsRef<str>>(lines: I) -> String {
    lines
        .into_iter()
        .map(|l| format!("{}\n", l.as_ref()))
        .collect()
}

fn load_rules(path: Option<&Path>) -> Result<PruneRules> {
    match path {
        Some(path) => PruneRules::from_directives(&read(path)?)
            .with_context(|| format!("rules {}", path.display())),
        None => Ok(PruneRules::default()),
    }
}

fn tokenize_line(line: &str, pretokenized: bool) -> Vec<String> {
    if pretokenized {
        line.split_whitespace().map(str::to_owned).collect()
    } else {
        tokenize_lower(line)
    }
}

/// Non-empty sentences of a text file, split further when it holds documents.
fn sentences_of(text: &str, documents: bool) -> Vec<String> {
    text.lines()
        .flat_map(|line| {
            if documents {
                split_sentences(line)
            } else {
                vec![line.trim().to_owned()]
            }
        })
        .filter(|s| !s.is_empty())
        .collect()
}

#[derive(Serialize)]
struct SkipEntry {
    row: usize,
    reason: String,
}

#[derive(Serialize)]
struct Manifest {
    rows: usize,
    planner_pairs: usize,
    realizer_pairs: usize,
    skipped: Vec<SkipEntry>,
}

fn cmd_prepare(args: PrepareArgs) -> Result<()> {
    let rows = read_dataset(&args.dataset)
        .with_context(|| format!("dataset {}", args.dataset.display()))?;

    if let Some(path) = &args.emit_sentences {
        let sentences = sentences_for_parsing(&rows);
        return write(
            path,
            &lines_file(
                sentences
                    .iter()
                    .map(|(id, text)| format!("{}\t{}", id, text)),
            ),
        );
    }

    let (Some(conllu), Some(out)) = (&args.conllu, &args.out) else {
        bail!("--conllu and --out are required");
    };
    let parses =
        parse_conllu(&read(conllu)?).with_context(|| format!("parses {}", conllu.display()))?;
    let rules = load_rules(args.rules.as_deref())?;
    let prepared = prepare(&rows, &parses, &rules).context("aligning dataset and parses")?;

    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    write(
        &out.join("planner.src"),
        &lines_file(prepared.planner.iter().map(|p| p.source_line())),
    )?;
    write(
        &out.join("planner.tgt"),
        &lines_file(prepared.planner.iter().map(|p| p.target_line())),
    )?;
    write(
        &out.join("planner.delex"),
        &lines_file(prepared.planner_maps.iter().map(DelexMap::to_line)),
    )?;
    write(
        &out.join("realizer.src"),
        &lines_file(prepared.realizer.iter().map(|p| p.source_line())),
    )?;
    write(
        &out.join("realizer.tgt"),
        &lines_file(prepared.realizer.iter().map(|p| p.target_line())),
    )?;
    write(
        &out.join("realizer.delex"),
        &lines_file(prepared.realizer_maps.iter().map(DelexMap::to_line)),
    )?;

    let manifest = Manifest {
        rows: rows.len(),
        planner_pairs: prepared.planner.len(),
        realizer_pairs: prepared.realizer.len(),
        skipped: prepared
            .skipped
            .iter()
            .map(|s| SkipEntry {
                row: s.row,
                reason: s.reason.to_string(),
            })
            .collect(),
    };
    write(
        &out.join("manifest.json"),
        &(serde_json::to_string_pretty(&manifest)? + "\n"),
    )?;
    eprintln!(
        "{} planner pairs, {} realizer pairs, {} rows skipped",
        manifest.planner_pairs,
        manifest.realizer_pairs,
        manifest.skipped.len()
    );
    Ok(())
}

fn cmd_filter(args: FilterArgs) -> Result<()> {
    if args.min_len > args.max_len {
        bail!(
            "--min-len {} exceeds --max-len {}",
            args.min_len,
            args.max_len
        );
    }
    let source = read(&args.vocab_source)?;
    let source_lines: Vec<&str> = source.lines().collect();
    let vocab_sentences: Vec<Vec<String>> = source_lines
        .par_iter()
        .map(|l| tokenize_line(l, args.pretokenized))
        .collect();
    let vocab = build_vocab(&vocab_sentences);

    let candidates = sentences_of(&read(&args.input)?, args.documents);
    let tokenized: Vec<Vec<String>> = candidates
        .par_iter()
        .map(|s| tokenize_line(s, args.pretokenized))
        .collect();
    let bounds = LengthBounds {
        min: args.min_len,
        max: args.max_len,
    };
    let outcome = filter_augmentation(&tokenized, &vocab, bounds);

    write(
        &args.out,
        &lines_file(outcome.kept.iter().map(|&i| &candidates[i])),
    )?;
    if let Some(report) = &args.report {
        let mut lines = vec![String::from("kept"); candidates.len()];
        for (idx, reason) in &outcome.rejected {
            lines[*idx] = format!("rejected\t{}", reason);
        }
        write(report, &lines_file(lines))?;
    }
    eprintln!(
        "kept {} of {} sentences (vocabulary {} types)",
        outcome.kept.len(),
        candidates.len(),
        vocab.size()
    );
    Ok(())
}

fn cmd_score(args: ScoreArgs) -> Result<()> {
    let report = score_files(&args.hyp, &args.refs, args.pretokenized)?;
    match args.format {
        ScoreFormat::Text => println!("{}", report),
        ScoreFormat::MachineReadable => print!("{}", report.to_machine_readable()),
    }
    Ok(())
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    let sentences = sentences_of(&read(&args.input)?, args.documents);
    let tokenized: Vec<Vec<String>> = sentences
        .par_iter()
        .map(|s| tokenize_line(s, args.pretokenized))
        .collect();
    println!("{}", corpus_stats(&tokenized));
    Ok(())
}

fn cmd_linearize(args: LinearizeArgs) -> Result<()> {
    let rules = load_rules(args.rules.as_deref())?;
    let sentences = parse_conllu(&read(&args.io.input)?)
        .with_context(|| format!("parses {}", args.io.input.display()))?;
    let irs: Vec<Result<IrSequence>> = sentences
        .par_iter()
        .enumerate()
        .map(|(idx, sentence)| {
            let sentence = if args.lowercase {
                lowercase_forms(sentence)
            } else {
                sentence.clone()
            };
            let tree = convert(&sentence, &sentence.to_tree(), &rules)
                .with_context(|| format!("sentence {}", idx + 1))?;
            Ok(linearize(&tree))
        })
        .collect();
    let irs = irs.into_iter().collect::<Result<Vec<_>>>()?;
    emit(
        args.io.out.as_deref(),
        &lines_file(irs.iter().map(IrSequence::render)),
    )
}

fn tree_to_sentence(root: &UudNode, ir: &str) -> Result<Sentence> {
    fn walk(node: &UudNode, head: usize, out: &mut Vec<Token>) {
        let deprel = if head == 0 { "root" } else { "dep" };
        out.push(Token::new(node.position, node.form.clone(), head).with_deprel(deprel));
        for child in &node.children {
            walk(child, node.position, out);
        }
    }
    let mut tokens = Vec::new();
    walk(root, 0, &mut tokens);
    tokens.sort_by_key(|t| t.id);
    let text = tokens
        .iter()
        .map(|t| t.form.as_str())
        .collect::<Vec<_>>()
        .join(" ");
    let comments = vec![format!("# ir = {}", ir), format!("# text = {}", text)];
    Ok(Sentence::new(comments, tokens)?)
}

fn cmd_delinearize(args: InOut) -> Result<()> {
    let text = read(&args.input)?;
    let lines: Vec<&str> = text.lines().collect();
    let sentences: Vec<Result<Sentence>> = lines
        .par_iter()
        .enumerate()
        .map(|(idx, line)| {
            let ir = parse_ir(line).with_context(|| format!("line {}", idx + 1))?;
            let tree = delinearize(&ir).with_context(|| format!("line {}", idx + 1))?;
            tree_to_sentence(&tree.root, line.trim())
        })
        .collect();
    let sentences = sentences.into_iter().collect::<Result<Vec<_>>>()?;
    emit(args.out.as_deref(), &serialize_conllu(&sentences))
}

fn cmd_validate(args: ValidateArgs) -> Result<bool> {
    if args.conllu.is_none() && args.ir.is_none() {
        bail!("nothing to validate: pass --conllu and/or --ir");
    }
    let mut ok = true;
    if let Some(path) = &args.conllu {
        match parse_conllu(&read(path)?) {
            Ok(sentences) => println!("{}: ok, {} sentences", path.display(), sentences.len()),
            Err(e) => {
                println!("{}:{}: {}", path.display(), e.line(), e);
                ok = false;
            }
        }
    }
    if let Some(path) = &args.ir {
        let text = read(path)?;
        let first_error = text.lines().enumerate().find_map(|(idx, line)| {
            parse_ir(line)
                .and_then(|ir| delinearize(&ir))
                .err()
                .map(|e| (idx + 1, e))
        });
        match first_error {
            None => println!("{}: ok, {} lines", path.display(), text.lines().count()),
            Some((line, e)) => {
                println!("{}:{}: {}", path.display(), line, e);
                ok = false;
            }
        }
    }
    Ok(ok)
}

fn cmd_lint(args: LintArgs) -> Result<bool> {
    let irs = read(&args.ir)?;
    let gens = read(&args.gen)?;
    let ir_lines: Vec<&str> = irs.lines().collect();
    let gen_lines: Vec<&str> = gens.lines().collect();
    if ir_lines.len() != gen_lines.len() {
        bail!(
            "{} IR lines but {} generated lines",
            ir_lines.len(),
            gen_lines.len()
        );
    }

    let reports: Vec<Result<String>> = ir_lines
        .par_iter()
        .zip(gen_lines.par_iter())
        .enumerate()
        .map(|(idx, (ir, gen))| {
            let ir = parse_ir(ir).with_context(|| format!("IR line {}", idx + 1))?;
            let report = lint_coverage(&ir, &tokenize_line(gen, args.pretokenized), args.allowance);
            Ok(report.to_string())
        })
        .collect();
    let reports = reports.into_iter().collect::<Result<Vec<_>>>()?;
    let failed = reports
        .iter()
        .filter(|r| r.starts_with(&Verdict::Fail.to_string()))
        .count();
    emit(args.out.as_deref(), &lines_file(&reports))?;
    eprintln!("{} of {} lines fail", failed, reports.len());
    Ok(failed == 0)
}

fn cmd_relexicalize(args: RelexArgs) -> Result<()> {
    let text = read(&args.io.input)?;
    let maps = read(&args.delex)?;
    let lines: Vec<&str> = text.lines().collect();
    let map_lines: Vec<&str> = maps.lines().collect();
    if lines.len() != map_lines.len() {
        bail!(
            "{} lines but {} delexicalization maps",
            lines.len(),
            map_lines.len()
        );
    }
    let mut out = Vec::with_capacity(lines.len());
    for (idx, (line, map)) in lines.iter().zip(&map_lines).enumerate() {
        let Some(map) = DelexMap::from_line(map) else {
            bail!("{}:{}: malformed map", args.delex.display(), idx + 1);
        };
        let relex = relexicalize(line, &map);
        for placeholder in &relex.unresolved {
            eprintln!("line {}: no value for {}", idx + 1, placeholder);
        }
        out.push(relex.text);
    }
    emit(args.io.out.as_deref(), &lines_file(out))
}

fn configure_workers() -> Result<()> {
    if let Ok(value) = std::env::var("UUDNLG_WORKERS") {
        let workers: usize = value
            .parse()
            .with_context(|| format!("UUDNLG_WORKERS={}", value))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .context("starting worker pool")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    configure_workers()?;
    match cli.command {
        Command::Prepare(args) => cmd_prepare(args).map(|_| true),
        Command::Filter(args) => cmd_filter(args).map(|_| true),
        Command::Score(args) => cmd_score(args).map(|_| true),
        Command::Stats(args) => cmd_stats(args).map(|_| true),
        Command::Linearize(args) => cmd_linearize(args).map(|_| true),
        Command::Delinearize(args) => cmd_delinearize(args).map(|_| true),
        Command::Validate(args) => cmd_validate(args),
        Command::Lint(args) => cmd_lint(args),
        Command::Relexicalize(args) => cmd_relexicalize(args).map(|_| true),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}
