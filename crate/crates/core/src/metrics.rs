//! Corpus-level text generation metrics: BLEU, NIST, METEOR-lite, ROUGE-L
//! and CIDEr-D, all with multiple references per hypothesis.
//!
//! The definitions follow the usual scoring scripts for the E2E challenge:
//!
//! * BLEU: clipped n-gram precision up to 4-grams, geometric mean, brevity
//!   penalty against the closest reference length (shorter one on ties), no
//!   smoothing.
//! * NIST: information-weighted n-gram precision up to 5-grams with the
//!   information weights estimated on all references of the corpus, and
//!   the NIST brevity factor.
//! * ROUGE-L: LCS F-measure with β = 1.2, taking the best precision and
//!   best recall over references, averaged over instances.
//! * CIDEr-D: tf-idf weighted n-gram cosine (n = 1..4) with clipping and a
//!   Gaussian length penalty (σ = 6), document frequencies taken from the
//!   references of the evaluated corpus, scaled by 10.
//!
//! METEOR is implemented without synonym or paraphrase tables: unigrams are
//! aligned by exact match, then by a crude suffix-stripping stem. Scores are
//! not comparable with the official METEOR release.
//!
//! Every metric works on whatever tokens it is given. Lowercasing and
//! relexicalization are up to the caller.

use std::collections::HashMap;
use std::fmt;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::corpus::tokenize;

pub const BLEU_ORDER: usize = 4;
pub const NIST_ORDER: usize = 5;
pub const CIDER_ORDER: usize = 4;
pub const CIDER_SIGMA: f64 = 6.0;
pub const ROUGE_BETA: f64 = 1.2;
pub const METEOR_ALPHA: f64 = 0.9;
pub const METEOR_BETA: f64 = 3.0;
pub const METEOR_GAMMA: f64 = 0.5;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("no instances to score")]
    Empty,
    #[error("instance {0}: empty hypothesis")]
    EmptyHypothesis(usize),
    #[error("instance {0}: no references")]
    NoReferences(usize),
    #[error("instance {0}: empty reference")]
    EmptyReference(usize),
    #[error("{hypotheses} hypotheses but {references} reference entries")]
    CountMismatch {
        hypotheses: usize,
        references: usize,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

/// A hypothesis with its references.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalInstance {
    hypothesis: Vec<String>,
    references: Vec<Vec<String>>,
}

impl EvalInstance {
    pub fn new(hypothesis: Vec<String>, references: Vec<Vec<String>>) -> Result<Self, MetricError> {
        EvalInstance::checked(0, hypothesis, references)
    }

    fn checked(
        index: usize,
        hypothesis: Vec<String>,
        references: Vec<Vec<String>>,
    ) -> Result<Self, MetricError> {
        if hypothesis.is_empty() {
            return Err(MetricError::EmptyHypothesis(index));
        }
        if references.is_empty() {
            return Err(MetricError::NoReferences(index));
        }
        if references.iter().any(Vec::is_empty) {
            return Err(MetricError::EmptyReference(index));
        }
        Ok(EvalInstance {
            hypothesis,
            references,
        })
    }

    /// Whitespace-tokenized hypothesis and references.
    pub fn from_text(hypothesis: &str, references: &[&str]) -> Result<Self, MetricError> {
        let split = |s: &str| s.split_whitespace().map(str::to_owned).collect::<Vec<_>>();
        EvalInstance::new(
            split(hypothesis),
            references.iter().map(|r| split(r)).collect(),
        )
    }

    pub fn hypothesis(&self) -> &[String] {
        &self.hypothesis
    }

    pub fn references(&self) -> &[Vec<String>] {
        &self.references
    }
}

type Ngram<'a> = &'a [String];

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<Ngram<'_>, usize> {
    let mut counts = HashMap::new();
    if n == 0 || tokens.len() < n {
        return counts;
    }
    for gram in tokens.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

/// Per n-gram maximum count over the references.
fn max_ref_counts(references: &[Vec<String>], n: usize) -> HashMap<Ngram<'_>, usize> {
    let mut max = HashMap::new();
    for reference in references {
        for (gram, count) in ngram_counts(reference, n) {
            let entry = max.entry(gram).or_insert(0);
            *entry = (*entry).max(count);
        }
    }
    max
}

fn check_nonempty(instances: &[EvalInstance]) -> Result<(), MetricError> {
    if instances.is_empty() {
        Err(MetricError::Empty)
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BleuScore {
    pub score: f64,
    /// Clipped precisions p1..pN.
    pub precisions: Vec<f64>,
    pub brevity_penalty: f64,
    pub hypothesis_length: usize,
    pub reference_length: usize,
}

/// Corpus BLEU.
pub fn bleu(instances: &[EvalInstance], max_n: usize) -> Result<BleuScore, MetricError> {
    check_nonempty(instances)?;

    let mut matched = vec![0usize; max_n];
    let mut total = vec![0usize; max_n];
    let mut hyp_len = 0;
    let mut ref_len = 0;

    for instance in instances {
        let hyp = &instance.hypothesis;
        hyp_len += hyp.len();
        ref_len += instance
            .references
            .iter()
            .map(Vec::len)
            .min_by_key(|&len| (len.abs_diff(hyp.len()), len))
            .expect("instances have references");

        for n in 1..=max_n {
            let max_ref = max_ref_counts(&instance.references, n);
            for (gram, count) in ngram_counts(hyp, n) {
                matched[n - 1] += count.min(max_ref.get(gram).copied().unwrap_or(0));
                total[n - 1] += count;
            }
        }
    }

    let precisions: Vec<f64> = matched
        .iter()
        .zip(&total)
        .map(|(&m, &t)| if t == 0 { 0.0 } else { m as f64 / t as f64 })
        .collect();

    let brevity_penalty = if hyp_len == 0 {
        0.0
    } else if hyp_len < ref_len {
        (1.0 - ref_len as f64 / hyp_len as f64).exp()
    } else {
        1.0
    };

    let score = if precisions.contains(&0.0) {
        0.0
    } else {
        let log_mean = precisions.iter().map(|p| p.ln()).sum::<f64>() / max_n as f64;
        brevity_penalty * log_mean.exp()
    };

    Ok(BleuScore {
        score,
        precisions,
        brevity_penalty,
        hypothesis_length: hyp_len,
        reference_length: ref_len,
    })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct NistScore {
    pub score: f64,
    /// Information-weighted precision for each order.
    pub info_precisions: Vec<f64>,
    pub brevity_penalty: f64,
}

/// NIST brevity factor: 1 at or above the reference length, 0.5 at a
/// length ratio of 2/3.
pub fn nist_brevity_penalty(hyp_len: f64, ref_len: f64) -> f64 {
    let ratio = if ref_len > 0.0 {
        hyp_len / ref_len
    } else {
        1.0
    };
    if ratio >= 1.0 {
        1.0
    } else if ratio <= 0.0 {
        0.0
    } else {
        let beta = 0.5f64.ln() / 1.5f64.ln().powi(2);
        (beta * ratio.ln().powi(2)).exp()
    }
}

/// Corpus NIST.
pub fn nist(instances: &[EvalInstance], max_n: usize) -> Result<NistScore, MetricError> {
    check_nonempty(instances)?;

    // Reference n-gram statistics over the whole corpus.
    let mut ref_counts: HashMap<Ngram<'_>, usize> = HashMap::new();
    let mut ref_words = 0usize;
    for instance in instances {
        for reference in &instance.references {
            ref_words += reference.len();
            for n in 1..=max_n {
                for (gram, count) in ngram_counts(reference, n) {
                    *ref_counts.entry(gram).or_insert(0) += count;
                }
            }
        }
    }
    let info = |gram: Ngram<'_>| -> f64 {
        let count = ref_counts[gram] as f64;
        let context = if gram.len() == 1 {
            ref_words as f64
        } else {
            ref_counts[&gram[..gram.len() - 1]] as f64
        };
        (context / count).log2()
    };

    let mut info_matched = vec![0.0f64; max_n];
    let mut hyp_total = vec![0usize; max_n];
    let mut hyp_len = 0usize;
    let mut ref_len = 0.0f64;

    for instance in instances {
        hyp_len += instance.hypothesis.len();
        ref_len += instance.references.iter().map(Vec::len).sum::<usize>() as f64
            / instance.references.len() as f64;

        for n in 1..=max_n {
            let max_ref = max_ref_counts(&instance.references, n);
            for (gram, count) in ngram_counts(&instance.hypothesis, n) {
                hyp_total[n - 1] += count;
                if let Some(&ref_max) = max_ref.get(gram) {
                    info_matched[n - 1] += info(gram) * count.min(ref_max) as f64;
                }
            }
        }
    }

    let info_precisions: Vec<f64> = info_matched
        .iter()
        .zip(&hyp_total)
        .map(|(&m, &t)| if t == 0 { 0.0 } else { m / t as f64 })
        .collect();
    let brevity_penalty = nist_brevity_penalty(hyp_len as f64, ref_len);

    Ok(NistScore {
        score: info_precisions.iter().sum::<f64>() * brevity_penalty,
        info_precisions,
        brevity_penalty,
    })
}

/// Length of the longest common subsequence.
pub fn lcs_length(a: &[String], b: &[String]) -> usize {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut prev = vec![0usize; short.len() + 1];
    let mut cur = vec![0usize; short.len() + 1];
    for x in long {
        for (j, y) in short.iter().enumerate() {
            cur[j + 1] = if x == y {
                prev[j] + 1
            } else {
                cur[j].max(prev[j + 1])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[short.len()]
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RougeScore {
    pub score: f64,
    /// Per-instance F-measures.
    pub instance_scores: Vec<f64>,
    /// Sum over instances of the best LCS length.
    pub total_lcs: usize,
}

/// Sentence-level ROUGE-L F-measure.
pub fn rouge_l_instance(instance: &EvalInstance) -> (f64, usize) {
    let hyp = &instance.hypothesis;
    let mut best_p = 0.0f64;
    let mut best_r = 0.0f64;
    let mut best_lcs = 0;
    for reference in &instance.references {
        let lcs = lcs_length(reference, hyp);
        best_lcs = best_lcs.max(lcs);
        best_p = best_p.max(lcs as f64 / hyp.len() as f64);
        best_r = best_r.max(lcs as f64 / reference.len() as f64);
    }
    let beta2 = ROUGE_BETA * ROUGE_BETA;
    let score = if best_p > 0.0 && best_r > 0.0 {
        (1.0 + beta2) * best_p * best_r / (best_r + beta2 * best_p)
    } else {
        0.0
    };
    (score, best_lcs)
}

/// Mean ROUGE-L over instances.
pub fn rouge_l(instances: &[EvalInstance]) -> Result<RougeScore, MetricError> {
    check_nonempty(instances)?;
    let (instance_scores, lcs): (Vec<f64>, Vec<usize>) =
        instances.iter().map(rouge_l_instance).unzip();
    Ok(RougeScore {
        score: instance_scores.iter().sum::<f64>() / instances.len() as f64,
        instance_scores,
        total_lcs: lcs.into_iter().sum(),
    })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CiderScore {
    pub score: f64,
    /// Mean cosine term for each n-gram order, before scaling.
    pub per_order: Vec<f64>,
    pub instance_scores: Vec<f64>,
}

struct TfIdf {
    vectors: Vec<HashMap<Vec<String>, f64>>,
    norms: Vec<f64>,
    /// Bigram count, used as the length in the Gaussian penalty.
    length: f64,
}

/// Corpus CIDEr-D.
pub fn cider(instances: &[EvalInstance]) -> Result<CiderScore, MetricError> {
    check_nonempty(instances)?;
    let n_max = CIDER_ORDER;

    let count_all = |tokens: &[String]| -> HashMap<Vec<String>, usize> {
        let mut counts = HashMap::new();
        for n in 1..=n_max {
            for (gram, count) in ngram_counts(tokens, n) {
                counts.insert(gram.to_vec(), count);
            }
        }
        counts
    };

    let refs: Vec<Vec<HashMap<Vec<String>, usize>>> = instances
        .iter()
        .map(|i| i.references.iter().map(|r| count_all(r)).collect())
        .collect();
    let hyps: Vec<HashMap<Vec<String>, usize>> =
        instances.iter().map(|i| count_all(&i.hypothesis)).collect();

    // Document frequency: number of instances whose references contain
    // the n-gram.
    let mut doc_freq: HashMap<&[String], usize> = HashMap::new();
    for instance_refs in &refs {
        let mut seen: Vec<&[String]> = instance_refs
            .iter()
            .flat_map(|r| r.keys().map(Vec::as_slice))
            .collect();
        seen.sort_unstable();
        seen.dedup();
        for gram in seen {
            *doc_freq.entry(gram).or_insert(0) += 1;
        }
    }
    let log_docs = (instances.len() as f64).ln();

    let vectorize = |counts: &HashMap<Vec<String>, usize>| -> TfIdf {
        let mut vectors = vec![HashMap::new(); n_max];
        let mut norms = vec![0.0f64; n_max];
        let mut length = 0.0;
        for (gram, &tf) in counts {
            let df = (doc_freq.get(gram.as_slice()).copied().unwrap_or(0).max(1) as f64).ln();
            let n = gram.len() - 1;
            let weight = tf as f64 * (log_docs - df);
            norms[n] += weight * weight;
            vectors[n].insert(gram.clone(), weight);
            if n == 1 {
                length += tf as f64;
            }
        }
        TfIdf {
            vectors,
            norms: norms.into_iter().map(f64::sqrt).collect(),
            length,
        }
    };

    let similarity = |hyp: &TfIdf, reference: &TfIdf| -> Vec<f64> {
        let delta = hyp.length - reference.length;
        let penalty = (-(delta * delta) / (2.0 * CIDER_SIGMA * CIDER_SIGMA)).exp();
        (0..n_max)
            .map(|n| {
                let mut val: f64 = hyp.vectors[n]
                    .iter()
                    .map(|(gram, &h)| {
                        let r = reference.vectors[n].get(gram).copied().unwrap_or(0.0);
                        h.min(r) * r
                    })
                    .sum();
                if hyp.norms[n] != 0.0 && reference.norms[n] != 0.0 {
                    val /= hyp.norms[n] * reference.norms[n];
                }
                val * penalty
            })
            .collect()
    };

    let mut per_order = vec![0.0f64; n_max];
    let mut instance_scores = Vec::with_capacity(instances.len());
    for (hyp_counts, ref_counts) in hyps.iter().zip(&refs) {
        let hyp = vectorize(hyp_counts);
        let mut sums = vec![0.0f64; n_max];
        for reference in ref_counts {
            for (sum, s) in sums.iter_mut().zip(similarity(&hyp, &vectorize(reference))) {
                *sum += s;
            }
        }
        let n_refs = ref_counts.len() as f64;
        for (total, sum) in per_order.iter_mut().zip(&sums) {
            *total += sum / n_refs;
        }
        instance_scores.push(sums.iter().sum::<f64>() / n_max as f64 / n_refs * 10.0);
    }

    let count = instances.len() as f64;
    Ok(CiderScore {
        score: instance_scores.iter().sum::<f64>() / count,
        per_order: per_order.into_iter().map(|v| v / count).collect(),
        instance_scores,
    })
}

/// Strip one common English suffix, keeping at least three characters.
pub fn crude_stem(word: &str) -> String {
    let lower = word.to_lowercase();
    if let Some(stem) = lower.strip_suffix("ies") {
        if stem.chars().count() >= 2 {
            return format!("{}y", stem);
        }
    }
    for suffix in ["ing", "edly", "ed", "ly", "es", "s"] {
        if let Some(stem) = lower.strip_suffix(suffix) {
            if stem.chars().count() >= 3 && !(suffix == "s" && stem.ends_with('s')) {
                return stem.to_owned();
            }
        }
    }
    lower
}

/// Alignment statistics of one hypothesis against one reference.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MeteorAlignment {
    pub matches: usize,
    pub chunks: usize,
    pub hypothesis_length: usize,
    pub reference_length: usize,
}

/// Align unigrams: exact matches first, then stem matches among the
/// remaining words.
///
/// Within a stage hypothesis words are visited left to right. A word takes
/// the reference word right after the previous word's match when that one
/// is a candidate, otherwise the leftmost free candidate.
pub fn meteor_align(hypothesis: &[String], reference: &[String]) -> MeteorAlignment {
    let mut hyp_to_ref: Vec<Option<usize>> = vec![None; hypothesis.len()];
    let mut ref_used = vec![false; reference.len()];

    let hyp_stems: Vec<String> = hypothesis.iter().map(|w| crude_stem(w)).collect();
    let ref_stems: Vec<String> = reference.iter().map(|w| crude_stem(w)).collect();

    for stage in 0..2 {
        for h in 0..hypothesis.len() {
            if hyp_to_ref[h].is_some() {
                continue;
            }
            let is_candidate = |r: usize| {
                !ref_used[r]
                    && if stage == 0 {
                        hypothesis[h] == reference[r]
                    } else {
                        hyp_stems[h] == ref_stems[r]
                    }
            };
            let follow = h
                .checked_sub(1)
                .and_then(|p| hyp_to_ref[p])
                .map(|r| r + 1)
                .filter(|&r| r < reference.len() && is_candidate(r));
            if let Some(r) = follow.or_else(|| (0..reference.len()).find(|&r| is_candidate(r))) {
                hyp_to_ref[h] = Some(r);
                ref_used[r] = true;
            }
        }
    }

    let mut chunks = 0;
    let mut prev: Option<usize> = None;
    for (h, target) in hyp_to_ref.iter().enumerate() {
        match target {
            Some(r) => {
                let continues =
                    h > 0 && prev.is_some_and(|p| p + 1 == *r) && hyp_to_ref[h - 1].is_some();
                if !continues {
                    chunks += 1;
                }
                prev = Some(*r);
            }
            None => prev = None,
        }
    }

    MeteorAlignment {
        matches: hyp_to_ref.iter().filter(|m| m.is_some()).count(),
        chunks,
        hypothesis_length: hypothesis.len(),
        reference_length: reference.len(),
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MeteorScore {
    pub score: f64,
    pub precision: f64,
    pub recall: f64,
    pub fmean: f64,
    pub penalty: f64,
    pub matches: usize,
    pub chunks: usize,
}

fn meteor_from(alignment: MeteorAlignment) -> MeteorScore {
    let MeteorAlignment {
        matches,
        chunks,
        hypothesis_length,
        reference_length,
    } = alignment;
    if matches == 0 {
        return MeteorScore::default();
    }
    let precision = matches as f64 / hypothesis_length as f64;
    let recall = matches as f64 / reference_length as f64;
    let fmean = precision * recall / (METEOR_ALPHA * precision + (1.0 - METEOR_ALPHA) * recall);
    let penalty = METEOR_GAMMA * (chunks as f64 / matches as f64).powf(METEOR_BETA);
    MeteorScore {
        score: fmean * (1.0 - penalty),
        precision,
        recall,
        fmean,
        penalty,
        matches,
        chunks,
    }
}

/// METEOR-lite. Each hypothesis is aligned to the reference it scores best
/// against; the corpus score is computed from the summed alignment
/// statistics.
pub fn meteor_lite(instances: &[EvalInstance]) -> Result<MeteorScore, MetricError> {
    check_nonempty(instances)?;

    let mut sum = MeteorAlignment::default();
    for instance in instances {
        let best = instance
            .references
            .iter()
            .map(|r| meteor_align(&instance.hypothesis, r))
            .map(|a| (meteor_from(a).score, a))
            .fold(None::<(f64, MeteorAlignment)>, |best, cur| match best {
                Some(b) if b.0 >= cur.0 => Some(b),
                _ => Some(cur),
            })
            .expect("instances have references")
            .1;
        sum.matches += best.matches;
        sum.chunks += best.chunks;
        sum.hypothesis_length += best.hypothesis_length;
        sum.reference_length += best.reference_length;
    }

    Ok(meteor_from(sum))
}

/// All five metrics for one corpus.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MetricReport {
    pub bleu: BleuScore,
    pub nist: NistScore,
    pub meteor: MeteorScore,
    pub rouge_l: RougeScore,
    pub cider: CiderScore,
}

impl MetricReport {
    pub fn compute(instances: &[EvalInstance]) -> Result<Self, MetricError> {
        Ok(MetricReport {
            bleu: bleu(instances, BLEU_ORDER)?,
            nist: nist(instances, NIST_ORDER)?,
            meteor: meteor_lite(instances)?,
            rouge_l: rouge_l(instances)?,
            cider: cider(instances)?,
        })
    }

    /// `(name, value)` pairs; components are prefixed `component.`.
    pub fn entries(&self) -> Vec<(String, f64)> {
        let mut out = vec![
            ("bleu".to_owned(), self.bleu.score),
            ("nist".to_owned(), self.nist.score),
            ("meteor".to_owned(), self.meteor.score),
            ("rouge_l".to_owned(), self.rouge_l.score),
            ("cider".to_owned(), self.cider.score),
        ];
        for (n, p) in self.bleu.precisions.iter().enumerate() {
            out.push((format!("component.bleu.p{}", n + 1), *p));
        }
        out.push((
            "component.bleu.brevity_penalty".to_owned(),
            self.bleu.brevity_penalty,
        ));
        out.push((
            "component.bleu.hypothesis_length".to_owned(),
            self.bleu.hypothesis_length as f64,
        ));
        out.push((
            "component.bleu.reference_length".to_owned(),
            self.bleu.reference_length as f64,
        ));
        for (n, p) in self.nist.info_precisions.iter().enumerate() {
            out.push((format!("component.nist.info{}", n + 1), *p));
        }
        out.push((
            "component.nist.brevity_penalty".to_owned(),
            self.nist.brevity_penalty,
        ));
        out.push((
            "component.meteor.precision".to_owned(),
            self.meteor.precision,
        ));
        out.push(("component.meteor.recall".to_owned(), self.meteor.recall));
        out.push(("component.meteor.fmean".to_owned(), self.meteor.fmean));
        out.push(("component.meteor.penalty".to_owned(), self.meteor.penalty));
        out.push((
            "component.meteor.chunks".to_owned(),
            self.meteor.chunks as f64,
        ));
        out.push((
            "component.meteor.matches".to_owned(),
            self.meteor.matches as f64,
        ));
        out.push((
            "component.rouge_l.lcs".to_owned(),
            self.rouge_l.total_lcs as f64,
        ));
        for (n, v) in self.cider.per_order.iter().enumerate() {
            out.push((format!("component.cider.cos{}", n + 1), *v));
        }
        out
    }

    /// `metric<TAB>value` lines.
    pub fn to_machine_readable(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(name, value)| format!("{}\t{}\n", name, value))
            .collect()
    }
}

impl fmt::Display for MetricReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BLEU:     {:.4}", self.bleu.score)?;
        writeln!(f, "NIST:     {:.4}", self.nist.score)?;
        writeln!(
            f,
            "METEOR*:  {:.4}  (meteor-lite: exact and stem matches only)",
            self.meteor.score
        )?;
        writeln!(f, "ROUGE_L:  {:.4}", self.rouge_l.score)?;
        write!(f, "CIDEr:    {:.4}", self.cider.score)
    }
}

/// Group reference text into one list of references per hypothesis.
///
/// With several reference files, line `i` of each file is a reference of
/// hypothesis `i`. A single file containing blank lines is read as
/// blank-line separated blocks of references; otherwise it has one
/// reference per line.
pub fn group_references(files: &[String]) -> Vec<Vec<String>> {
    match files {
        [single] if single.lines().any(|l| l.trim().is_empty()) => {
            let mut blocks = Vec::new();
            let mut current = Vec::new();
            for line in single.lines() {
                if line.trim().is_empty() {
                    if !current.is_empty() {
                        blocks.push(std::mem::take(&mut current));
                    }
                } else {
                    current.push(line.to_owned());
                }
            }
            if !current.is_empty() {
                blocks.push(current);
            }
            blocks
        }
        _ => {
            let per_file: Vec<Vec<&str>> = files.iter().map(|f| f.lines().collect()).collect();
            let len = per_file.iter().map(Vec::len).max().unwrap_or(0);
            (0..len)
                .map(|i| {
                    per_file
                        .iter()
                        .filter_map(|lines| lines.get(i))
                        .filter(|l| !l.trim().is_empty())
                        .map(|l| l.to_string())
                        .collect()
                })
                .collect()
        }
    }
}

/// Build instances from hypothesis text and reference file contents.
pub fn load_instances(
    hypotheses: &str,
    reference_files: &[String],
    pretokenized: bool,
) -> Result<Vec<EvalInstance>, MetricError> {
    let split = |s: &str| -> Vec<String> {
        if pretokenized {
            s.split_whitespace().map(str::to_owned).collect()
        } else {
            tokenize(s)
        }
    };

    let hyps: Vec<&str> = hypotheses.lines().collect();
    let refs = group_references(reference_files);
    if hyps.len() != refs.len() {
        return Err(MetricError::CountMismatch {
            hypotheses: hyps.len(),
            references: refs.len(),
        });
    }

    hyps.into_iter()
        .zip(refs)
        .enumerate()
        .map(|(idx, (hyp, refs))| {
            EvalInstance::checked(idx + 1, split(hyp), refs.iter().map(|r| split(r)).collect())
        })
        .collect()
}

/// Score a hypothesis file against one or more reference files.
pub fn score_files(
    hyp_path: impl AsRef<Path>,
    ref_paths: &[impl AsRef<Path>],
    pretokenized: bool,
) -> Result<MetricReport, MetricError> {
    let read = |path: &Path| {
        std::fs::read_to_string(path).map_err(|source| MetricError::Io {
            path: path.display().to_string(),
            source,
        })
    };
    let hyps = read(hyp_path.as_ref())?;
    let refs = ref_paths
        .iter()
        .map(|p| read(p.as_ref()))
        .collect::<Result<Vec<_>, _>>()?;
    MetricReport::compute(&load_instances(&hyps, &refs, pretokenized)?)
}
