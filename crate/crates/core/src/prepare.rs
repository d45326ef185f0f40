//! Turning a dataset plus dependency parses of its sentences into planner
//! and realizer training pairs.
//!
//! Each reference utterance is delexicalized and split into sentences. The
//! sentence with ordinal `k` (1-based) of data row `r` (1-based) gets the id
//! `r-k`. Parses are matched to sentences by their `# sent_id` comment, or,
//! when no parse carries one, by order.

use std::collections::HashMap;

use thiserror::Error;

use crate::conllu::Sentence;
use crate::corpus::{split_sentences, tokenize_lower};
use crate::e2e::{
    build_planner_pair, build_realizer_pair, delexicalize, DatasetRow, DelexMap, TrainingPair,
};
use crate::ir::{linearize, IrSequence};
use crate::uud::{convert, ConvertError, PruneRules};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PrepareError {
    #[error("{sentences} dataset sentences but {parses} parses and no sent_id comments")]
    CountMismatch { sentences: usize, parses: usize },
    #[error("parse {ordinal} has sent_id `{id}` which matches no dataset sentence")]
    UnknownSentenceId { ordinal: usize, id: String },
    #[error("parse {ordinal} has duplicate sent_id `{id}`")]
    DuplicateSentenceId { ordinal: usize, id: String },
    #[error("sentence {id}: parse text `{parsed}` does not match `{expected}`")]
    TextMismatch {
        id: String,
        parsed: String,
        expected: String,
    },
}

pub fn sentence_id(row: usize, sentence: usize) -> String {
    format!("{}-{}", row, sentence)
}

/// A delexicalized utterance split into sentences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitUtterance {
    pub row: usize,
    pub map: DelexMap,
    pub sentences: Vec<String>,
}

impl SplitUtterance {
    pub fn ids(&self) -> impl Iterator<Item = String> + '_ {
        (1..=self.sentences.len()).map(move |k| sentence_id(self.row, k))
    }
}

/// Delexicalize and sentence-split every row. Rows are numbered from 1.
pub fn split_rows(rows: &[DatasetRow]) -> Vec<SplitUtterance> {
    rows.iter()
        .enumerate()
        .map(|(idx, row)| {
            let (text, map) = delexicalize(&row.reference, &row.mr);
            SplitUtterance {
                row: idx + 1,
                map,
                sentences: split_sentences(&text),
            }
        })
        .collect()
}

/// Sentences to hand to a dependency parser, with a `# sent_id` and
/// `# text` header each, as `(id, text)` pairs.
pub fn sentences_for_parsing(rows: &[DatasetRow]) -> Vec<(String, String)> {
    split_rows(rows)
        .into_iter()
        .flat_map(|u| u.ids().zip(u.sentences.clone()).collect::<Vec<_>>())
        .collect()
}

/// A copy of the sentence with lowercased forms.
pub fn lowercase_forms(sentence: &Sentence) -> Sentence {
    let mut lowered = sentence.clone();
    for token in &mut lowered.tokens {
        token.form = token.form.to_lowercase();
    }
    lowered
}

/// Lowercase, prune and linearize one parsed sentence.
pub fn sentence_ir(sentence: &Sentence, rules: &PruneRules) -> Result<IrSequence, ConvertError> {
    let lowered = lowercase_forms(sentence);
    let tree = convert(&lowered, &lowered.to_tree(), rules)?;
    Ok(linearize(&tree))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SkipReason {
    MissingParse(String),
    AllDropped(String),
    EmptyUtterance,
}

impl std::fmt::Display for SkipReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SkipReason::MissingParse(id) => write!(f, "missing parse for sentence {}", id),
            SkipReason::AllDropped(id) => write!(f, "no content words in sentence {}", id),
            SkipReason::EmptyUtterance => f.write_str("empty utterance"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skip {
    pub row: usize,
    pub reason: SkipReason,
}

/// Training data for both models. Delexicalization maps run parallel to
/// the pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Prepared {
    pub planner: Vec<TrainingPair>,
    pub planner_maps: Vec<DelexMap>,
    pub realizer: Vec<TrainingPair>,
    pub realizer_maps: Vec<DelexMap>,
    pub skipped: Vec<Skip>,
}

fn normalized(text: &str) -> String {
    tokenize_lower(text).join(" ")
}

fn align<'a>(
    utterances: &[SplitUtterance],
    parses: &'a [Sentence],
) -> Result<HashMap<String, &'a Sentence>, PrepareError> {
    let expected: HashMap<String, &str> = utterances
        .iter()
        .flat_map(|u| u.ids().zip(u.sentences.iter().map(String::as_str)))
        .collect();

    let mut by_id = HashMap::new();
    if parses.iter().all(|p| p.comment_value("sent_id").is_none()) {
        let ids: Vec<String> = utterances
            .iter()
            .flat_map(|u| u.ids().collect::<Vec<_>>())
            .collect();
        if ids.len() != parses.len() {
            return Err(PrepareError::CountMismatch {
                sentences: ids.len(),
                parses: parses.len(),
            });
        }
        by_id.extend(ids.into_iter().zip(parses));
    } else {
        for (idx, parse) in parses.iter().enumerate() {
            let ordinal = idx + 1;
            let Some(id) = parse.comment_value("sent_id") else {
                continue;
            };
            if !expected.contains_key(id) {
                return Err(PrepareError::UnknownSentenceId {
                    ordinal,
                    id: id.to_owned(),
                });
            }
            if by_id.insert(id.to_owned(), parse).is_some() {
                return Err(PrepareError::DuplicateSentenceId {
                    ordinal,
                    id: id.to_owned(),
                });
            }
        }
    }

    for (id, parse) in &by_id {
        if let Some(parsed) = parse.comment_value("text") {
            let want = expected[id.as_str()];
            if normalized(parsed) != normalized(want) {
                return Err(PrepareError::TextMismatch {
                    id: id.clone(),
                    parsed: parsed.to_owned(),
                    expected: want.to_owned(),
                });
            }
        }
    }

    Ok(by_id)
}

/// Build planner and realizer pairs. An utterance is skipped as a whole
/// when any of its sentences has no parse or no content words.
pub fn prepare(
    rows: &[DatasetRow],
    parses: &[Sentence],
    rules: &PruneRules,
) -> Result<Prepared, PrepareError> {
    let utterances = split_rows(rows);
    let by_id = align(&utterances, parses)?;
    let mut out = Prepared::default();

    'utterances: for (utterance, row) in utterances.iter().zip(rows) {
        if utterance.sentences.is_empty() {
            out.skipped.push(Skip {
                row: utterance.row,
                reason: SkipReason::EmptyUtterance,
            });
            continue;
        }

        let mut irs = Vec::new();
        let mut targets = Vec::new();
        for id in utterance.ids() {
            let Some(parse) = by_id.get(&id) else {
                out.skipped.push(Skip {
                    row: utterance.row,
                    reason: SkipReason::MissingParse(id),
                });
                continue 'utterances;
            };
            match sentence_ir(parse, rules) {
                Ok(ir) => irs.push(ir),
                Err(_) => {
                    out.skipped.push(Skip {
                        row: utterance.row,
                        reason: SkipReason::AllDropped(id),
                    });
                    continue 'utterances;
                }
            }
            let forms: Vec<String> = parse.tokens.iter().map(|t| t.form.to_lowercase()).collect();
            targets.push(forms.join(" "));
        }

        for (ir, target) in irs.iter().zip(&targets) {
            let pair = build_realizer_pair(ir, target).expect("parsed sentences are non-empty");
            out.realizer.push(pair);
            out.realizer_maps.push(utterance.map.clone());
        }
        let pair = build_planner_pair(&row.mr, &irs).expect("at least one sentence");
        out.planner.push(pair);
        out.planner_maps.push(utterance.map.clone());
    }

    Ok(out)
}
