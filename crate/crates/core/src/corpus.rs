//! Sentence splitting, tokenization, vocabularies and the augmentation
//! filter.
//!
//! The tokenizer is a small rule-based one: whitespace splitting, then
//! punctuation peeled off the edges of each chunk and English clitics split
//! off (`doesn't` becomes `does n't`). It does not try to match any
//! particular statistical tokenizer. Callers with their own tokenization can
//! pass whitespace-separated text and skip it.

use std::collections::BTreeMap;
use std::fmt;

/// Abbreviations (lowercased, without the final period) that do not end a
/// sentence.
const ABBREVIATIONS: [&str; 16] = [
    "mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "vs", "etc", "e.g", "i.e", "approx", "inc",
    "ltd", "co",
];

const LEADING_PUNCT: &[char] = &['(', '[', '{', '"', '\'', '`', '£', '$', '€', '«', '“', '‘'];
const TRAILING_PUNCT: &[char] = &[
    '.', ',', ';', ':', '!', '?', ')', ']', '}', '"', '\'', '»', '”', '’', '…',
];

/// Clitic suffixes split off a word, longest first.
const CLITICS: [&str; 7] = ["n't", "'s", "'re", "'ll", "'ve", "'m", "'d"];

/// Split running text into sentences.
///
/// A sentence ends at a run of `.`, `!` or `?` (optionally followed by
/// closing quotes or brackets) that is followed by whitespace or the end of
/// the text, unless the word carrying the period is a known abbreviation.
pub fn split_sentences(text: &str) -> Vec<String> {
    let mut sentences = Vec::new();
    let mut current: Vec<&str> = Vec::new();

    for word in text.split_whitespace() {
        current.push(word);
        if ends_sentence(word) {
            sentences.push(current.join(" "));
            current.clear();
        }
    }
    if !current.is_empty() {
        sentences.push(current.join(" "));
    }

    sentences
}

fn ends_sentence(word: &str) -> bool {
    let core = word.trim_end_matches(['"', '\'', ')', ']', '”', '’']);
    let Some(last) = core.chars().last() else {
        return false;
    };
    if !matches!(last, '.' | '!' | '?' | '…') {
        return false;
    }
    if last == '.' {
        let stem = core
            .trim_end_matches('.')
            .trim_start_matches(LEADING_PUNCT)
            .to_lowercase();
        if ABBREVIATIONS.contains(&stem.as_str()) {
            return false;
        }
    }
    true
}

/// Tokenize one sentence. Case is preserved.
pub fn tokenize(sentence: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for chunk in sentence.split_whitespace() {
        tokenize_chunk(chunk, &mut tokens);
    }
    tokens
}

/// [`tokenize`] followed by lowercasing.
pub fn tokenize_lower(sentence: &str) -> Vec<String> {
    tokenize(&sentence.to_lowercase())
}

fn tokenize_chunk(chunk: &str, out: &mut Vec<String>) {
    let mut rest = chunk;

    while let Some(c) = rest.chars().next() {
        if LEADING_PUNCT.contains(&c) && rest.len() > c.len_utf8() {
            out.push(c.to_string());
            rest = &rest[c.len_utf8()..];
        } else {
            break;
        }
    }

    let mut trailing = Vec::new();
    while let Some(c) = rest.chars().last() {
        if !TRAILING_PUNCT.contains(&c) {
            break;
        }
        // Keep a run of periods together ("..."), and leave a lone
        // punctuation chunk as a single token.
        let cut = if c == '.' {
            rest.len() - rest.trim_end_matches('.').len()
        } else {
            c.len_utf8()
        };
        if cut == rest.len() {
            break;
        }
        // An apostrophe that belongs to a clitic stays attached.
        if c == '\'' && ends_with_clitic(rest) {
            break;
        }
        trailing.push(rest[rest.len() - cut..].to_owned());
        rest = &rest[..rest.len() - cut];
    }

    if !rest.is_empty() {
        split_clitic(rest, out);
    }
    out.extend(trailing.into_iter().rev());
}

fn ends_with_clitic(word: &str) -> bool {
    let lower = word.to_lowercase();
    CLITICS
        .iter()
        .any(|c| lower.ends_with(c) && lower.len() > c.len())
}

fn split_clitic(word: &str, out: &mut Vec<String>) {
    let lower = word.to_lowercase();
    for clitic in CLITICS {
        if lower.len() > clitic.len() && lower.ends_with(clitic) {
            let cut = word.len() - clitic.len();
            if word.is_char_boundary(cut) {
                out.push(word[..cut].to_owned());
                out.push(word[cut..].to_owned());
                return;
            }
        }
    }
    out.push(word.to_owned());
}

/// Token counts over a corpus.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocab {
    entries: BTreeMap<String, usize>,
}

impl Vocab {
    pub fn new() -> Self {
        Vocab::default()
    }

    pub fn add(&mut self, token: &str) {
        *self.entries.entry(token.to_owned()).or_insert(0) += 1;
    }

    pub fn remove(&mut self, token: &str) -> Option<usize> {
        self.entries.remove(token)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.entries.contains_key(token)
    }

    pub fn count(&self, token: &str) -> usize {
        self.entries.get(token).copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of all counts.
    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.entries.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

/// Count every token of already tokenized sentences.
pub fn build_vocab<S: AsRef<[String]>>(sentences: &[S]) -> Vocab {
    let mut vocab = Vocab::new();
    for sentence in sentences {
        for token in sentence.as_ref() {
            vocab.add(token);
        }
    }
    vocab
}

/// Inclusive sentence length bounds in tokens.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LengthBounds {
    pub min: usize,
    pub max: usize,
}

impl Default for LengthBounds {
    fn default() -> Self {
        LengthBounds { min: 5, max: 30 }
    }
}

impl LengthBounds {
    pub fn contains(&self, len: usize) -> bool {
        self.min <= len && len <= self.max
    }
}

/// Why a sentence was rejected by [`filter_augmentation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectReason {
    Length(usize),
    OutOfVocabulary(String),
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::Length(len) => write!(f, "length {}", len),
            RejectReason::OutOfVocabulary(token) => write!(f, "oov {}", token),
        }
    }
}

/// Decide a single sentence. Length is checked before vocabulary.
pub fn check_sentence(
    tokens: &[String],
    vocab: &Vocab,
    bounds: LengthBounds,
) -> Result<(), RejectReason> {
    if !bounds.contains(tokens.len()) {
        return Err(RejectReason::Length(tokens.len()));
    }
    match tokens.iter().find(|t| !vocab.contains(t)) {
        Some(oov) => Err(RejectReason::OutOfVocabulary(oov.clone())),
        None => Ok(()),
    }
}

/// Result of filtering: kept and rejected sentence indexes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FilterOutcome {
    pub kept: Vec<usize>,
    pub rejected: Vec<(usize, RejectReason)>,
}

/// Keep sentences whose length is within `bounds` and whose tokens all
/// occur in `vocab`.
pub fn filter_augmentation<S: AsRef<[String]>>(
    sentences: &[S],
    vocab: &Vocab,
    bounds: LengthBounds,
) -> FilterOutcome {
    let mut outcome = FilterOutcome::default();
    for (idx, sentence) in sentences.iter().enumerate() {
        match check_sentence(sentence.as_ref(), vocab, bounds) {
            Ok(()) => outcome.kept.push(idx),
            Err(reason) => outcome.rejected.push((idx, reason)),
        }
    }
    outcome
}

/// Sentence count and length extremes of a tokenized corpus.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CorpusStats {
    pub sentence_count: usize,
    pub min_len: usize,
    pub max_len: usize,
    pub mean_len: f64,
}

impl CorpusStats {
    pub fn is_empty(&self) -> bool {
        self.sentence_count == 0
    }
}

impl fmt::Display for CorpusStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sentences\t{}\nmin_len\t{}\nmax_len\t{}\nmean_len\t{:.2}",
            self.sentence_count, self.min_len, self.max_len, self.mean_len
        )
    }
}

pub fn corpus_stats<S: AsRef<[String]>>(sentences: &[S]) -> CorpusStats {
    let lengths: Vec<usize> = sentences.iter().map(|s| s.as_ref().len()).collect();
    let (Some(&min_len), Some(&max_len)) = (lengths.iter().min(), lengths.iter().max()) else {
        return CorpusStats::default();
    };
    CorpusStats {
        sentence_count: lengths.len(),
        min_len,
        max_len,
        mean_len: lengths.iter().sum::<usize>() as f64 / lengths.len() as f64,
    }
}
