//! Reading and writing CoNLL-U dependency parses.
//!
//! Only basic word lines are modeled. Multiword-token ranges (`3-4`) and
//! empty nodes (`5.1`) are skipped while reading. The `DEPS` and `MISC`
//! columns are carried through verbatim.

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

const COLUMNS: usize = 10;

/// Errors found while reading CoNLL-U text.
///
/// `sentence` is the 1-based ordinal of the sentence block, `line` the
/// 1-based line number in the input.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ConlluError {
    #[error("sentence {sentence}, line {line}: expected 10 tab-separated columns, found {found}")]
    ColumnCount {
        sentence: usize,
        line: usize,
        found: usize,
    },
    #[error("sentence {sentence}, line {line}: invalid token id `{value}`")]
    InvalidId {
        sentence: usize,
        line: usize,
        value: String,
    },
    #[error("sentence {sentence}, line {line}: invalid head `{value}`")]
    InvalidHead {
        sentence: usize,
        line: usize,
        value: String,
    },
    #[error("sentence {sentence}, line {line}: empty form")]
    EmptyForm { sentence: usize, line: usize },
    #[error("sentence {sentence}, line {line}: expected token id {expected}, found {found}")]
    IdSequence {
        sentence: usize,
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("sentence {sentence}, line {line}: head {head} out of range 0..={len}")]
    HeadOutOfRange {
        sentence: usize,
        line: usize,
        head: usize,
        len: usize,
    },
    #[error("sentence {sentence}, line {line}: no token is attached to the root")]
    NoRoot { sentence: usize, line: usize },
    #[error("sentence {sentence}, line {line}: tokens {first} and {second} are both attached to the root")]
    MultipleRoots {
        sentence: usize,
        line: usize,
        first: usize,
        second: usize,
    },
    #[error("sentence {sentence}, line {line}: token {token} is part of a head cycle")]
    Cycle {
        sentence: usize,
        line: usize,
        token: usize,
    },
    #[error("sentence {sentence}, line {line}: comment after token lines")]
    MisplacedComment { sentence: usize, line: usize },
}

impl ConlluError {
    /// Line number the error was reported at.
    pub fn line(&self) -> usize {
        match self {
            ConlluError::ColumnCount { line, .. }
            | ConlluError::InvalidId { line, .. }
            | ConlluError::InvalidHead { line, .. }
            | ConlluError::EmptyForm { line, .. }
            | ConlluError::IdSequence { line, .. }
            | ConlluError::HeadOutOfRange { line, .. }
            | ConlluError::NoRoot { line, .. }
            | ConlluError::MultipleRoots { line, .. }
            | ConlluError::Cycle { line, .. }
            | ConlluError::MisplacedComment { line, .. } => *line,
        }
    }

    /// Ordinal of the sentence the error was found in.
    pub fn sentence(&self) -> usize {
        match self {
            ConlluError::ColumnCount { sentence, .. }
            | ConlluError::InvalidId { sentence, .. }
            | ConlluError::InvalidHead { sentence, .. }
            | ConlluError::EmptyForm { sentence, .. }
            | ConlluError::IdSequence { sentence, .. }
            | ConlluError::HeadOutOfRange { sentence, .. }
            | ConlluError::NoRoot { sentence, .. }
            | ConlluError::MultipleRoots { sentence, .. }
            | ConlluError::Cycle { sentence, .. }
            | ConlluError::MisplacedComment { sentence, .. } => *sentence,
        }
    }
}

/// Lexical features in the order they were written.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Features(Vec<(String, String)>);

impl Features {
    pub fn new() -> Self {
        Features(Vec::new())
    }

    pub fn from_pairs<K, V, I>(pairs: I) -> Self
    where
        K: Into<String>,
        V: Into<String>,
        I: IntoIterator<Item = (K, V)>,
    {
        Features(
            pairs
                .into_iter()
                .map(|(k, v)| (k.into(), v.into()))
                .collect(),
        )
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn contains(&self, key: &str, value: &str) -> bool {
        self.0.iter().any(|(k, v)| k == key && v == value)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    fn parse(column: &str) -> Self {
        if column == "_" {
            return Features::new();
        }

        Features(
            column
                .split('|')
                .map(|feat| match feat.split_once('=') {
                    Some((k, v)) => (k.to_owned(), v.to_owned()),
                    None => (feat.to_owned(), String::new()),
                })
                .collect(),
        )
    }
}

impl fmt::Display for Features {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("_");
        }

        for (idx, (k, v)) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str("|")?;
            }
            if v.is_empty() {
                f.write_str(k)?;
            } else {
                write!(f, "{}={}", k, v)?;
            }
        }

        Ok(())
    }
}

/// A word line of a CoNLL-U sentence.
///
/// Columns other than `ID`, `HEAD` and `FEATS` are stored as written, so an
/// underscore lemma stays `"_"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub id: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: Option<String>,
    pub feats: Features,
    pub head: usize,
    pub deprel: String,
    pub deps: String,
    pub misc: String,
}

impl Token {
    /// Token with the given surface form; every other column is empty.
    pub fn new(id: usize, form: impl Into<String>, head: usize) -> Self {
        Token {
            id,
            form: form.into(),
            lemma: "_".to_owned(),
            upos: "_".to_owned(),
            xpos: None,
            feats: Features::new(),
            head,
            deprel: "_".to_owned(),
            deps: "_".to_owned(),
            misc: "_".to_owned(),
        }
    }

    pub fn with_upos(mut self, upos: impl Into<String>) -> Self {
        self.upos = upos.into();
        self
    }

    pub fn with_feats(mut self, feats: Features) -> Self {
        self.feats = feats;
        self
    }

    pub fn with_deprel(mut self, deprel: impl Into<String>) -> Self {
        self.deprel = deprel.into();
        self
    }
}

/// A sentence: comment lines followed by word lines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sentence {
    /// Comment lines including the leading `#`.
    pub comments: Vec<String>,
    pub tokens: Vec<Token>,
}

impl Sentence {
    /// Build a sentence and check the token id, root and tree invariants.
    pub fn new(comments: Vec<String>, tokens: Vec<Token>) -> Result<Self, ConlluError> {
        let sentence = Sentence { comments, tokens };
        sentence.validate(1, 1)?;
        Ok(sentence)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Value of a `# key = value` comment.
    pub fn comment_value(&self, key: &str) -> Option<&str> {
        self.comments.iter().find_map(|comment| {
            let rest = comment.strip_prefix('#')?.trim_start();
            let (k, v) = rest.split_once('=')?;
            if k.trim() == key {
                Some(v.trim())
            } else {
                None
            }
        })
    }

    /// The dependency tree spanned by the head attachments.
    ///
    /// The sentence invariants guarantee that this succeeds.
    pub fn to_tree(&self) -> DepTree {
        let mut children = vec![Vec::new(); self.tokens.len()];
        let mut root = 0;
        for (idx, token) in self.tokens.iter().enumerate() {
            if token.head == 0 {
                root = idx;
            } else {
                children[token.head - 1].push(idx);
            }
        }

        // Tokens are visited in id order, so child lists are already sorted.
        DepTree { root, children }
    }

    /// Check ids, heads, the single root and acyclicity. `first_line` is
    /// the line number of the first word line, used in error reports.
    fn validate(&self, ordinal: usize, first_line: usize) -> Result<(), ConlluError> {
        let lines: Vec<usize> = (0..self.tokens.len()).map(|i| first_line + i).collect();
        validate_tokens(&self.tokens, &lines, ordinal, first_line)
    }
}

fn validate_tokens(
    tokens: &[Token],
    lines: &[usize],
    ordinal: usize,
    block_line: usize,
) -> Result<(), ConlluError> {
    let len = tokens.len();
    let mut root = None;

    for (idx, token) in tokens.iter().enumerate() {
        let line = lines[idx];
        if token.id != idx + 1 {
            return Err(ConlluError::IdSequence {
                sentence: ordinal,
                line,
                expected: idx + 1,
                found: token.id,
            });
        }
        if token.form.is_empty() {
            return Err(ConlluError::EmptyForm {
                sentence: ordinal,
                line,
            });
        }
        if token.head > len {
            return Err(ConlluError::HeadOutOfRange {
                sentence: ordinal,
                line,
                head: token.head,
                len,
            });
        }
        if token.head == 0 {
            if let Some(first) = root {
                return Err(ConlluError::MultipleRoots {
                    sentence: ordinal,
                    line,
                    first,
                    second: token.id,
                });
            }
            root = Some(token.id);
        }
    }

    if len == 0 {
        return Ok(());
    }

    if root.is_none() {
        // Without a root every head chain ends in a cycle; report the
        // missing root since that is the underlying problem.
        return Err(ConlluError::NoRoot {
            sentence: ordinal,
            line: block_line,
        });
    }

    // 0 = unvisited, 1 = on the current path, 2 = reaches the root.
    let mut state = vec![0u8; len];
    for start in 0..len {
        let mut path = Vec::new();
        let mut cur = start;
        loop {
            match state[cur] {
                2 => break,
                1 => {
                    return Err(ConlluError::Cycle {
                        sentence: ordinal,
                        line: lines[cur],
                        token: cur + 1,
                    })
                }
                _ => {
                    state[cur] = 1;
                    path.push(cur);
                    let head = tokens[cur].head;
                    if head == 0 {
                        break;
                    }
                    cur = head - 1;
                }
            }
        }
        for idx in path {
            state[idx] = 2;
        }
    }

    Ok(())
}

/// Dependency tree over the tokens of a sentence. Nodes are 0-based token
/// indexes; children are in ascending id order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepTree {
    pub root: usize,
    pub children: Vec<Vec<usize>>,
}

impl DepTree {
    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    /// Parent of every node, `None` for the root.
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parents = vec![None; self.children.len()];
        for (parent, children) in self.children.iter().enumerate() {
            for &child in children {
                parents[child] = Some(parent);
            }
        }
        parents
    }
}

/// Parse CoNLL-U text into sentences.
pub fn parse_conllu(text: &str) -> Result<Vec<Sentence>, ConlluError> {
    let mut sentences = Vec::new();
    let mut block = Block::default();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);

        if line.trim().is_empty() {
            if let Some(sentence) = block.finish(sentences.len() + 1)? {
                sentences.push(sentence);
            }
            continue;
        }

        let ordinal = sentences.len() + 1;
        if block.start_line == 0 {
            block.start_line = line_no;
        }

        if line.starts_with('#') {
            if !block.tokens.is_empty() {
                return Err(ConlluError::MisplacedComment {
                    sentence: ordinal,
                    line: line_no,
                });
            }
            block.comments.push(line.to_owned());
            continue;
        }

        if let Some(token) = parse_token_line(line, ordinal, line_no)? {
            block.tokens.push(token);
            block.lines.push(line_no);
        }
    }

    if let Some(sentence) = block.finish(sentences.len() + 1)? {
        sentences.push(sentence);
    }

    Ok(sentences)
}

#[derive(Default)]
struct Block {
    comments: Vec<String>,
    tokens: Vec<Token>,
    lines: Vec<usize>,
    start_line: usize,
}

impl Block {
    fn finish(&mut self, ordinal: usize) -> Result<Option<Sentence>, ConlluError> {
        let block = std::mem::take(self);
        if block.tokens.is_empty() && block.comments.is_empty() {
            return Ok(None);
        }

        validate_tokens(&block.tokens, &block.lines, ordinal, block.start_line)?;

        Ok(Some(Sentence {
            comments: block.comments,
            tokens: block.tokens,
        }))
    }
}

/// Returns `None` for multiword-token and empty-node lines.
fn parse_token_line(
    line: &str,
    sentence: usize,
    line_no: usize,
) -> Result<Option<Token>, ConlluError> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != COLUMNS {
        return Err(ConlluError::ColumnCount {
            sentence,
            line: line_no,
            found: fields.len(),
        });
    }

    let id_field = fields[0];
    if id_field.contains('-') || id_field.contains('.') {
        return Ok(None);
    }

    let id = match id_field.parse::<usize>() {
        Ok(id) if id > 0 => id,
        _ => {
            return Err(ConlluError::InvalidId {
                sentence,
                line: line_no,
                value: id_field.to_owned(),
            })
        }
    };

    let head = fields[6]
        .parse::<usize>()
        .map_err(|_| ConlluError::InvalidHead {
            sentence,
            line: line_no,
            value: fields[6].to_owned(),
        })?;

    if fields[1].is_empty() {
        return Err(ConlluError::EmptyForm {
            sentence,
            line: line_no,
        });
    }

    Ok(Some(Token {
        id,
        form: fields[1].to_owned(),
        lemma: fields[2].to_owned(),
        upos: fields[3].to_owned(),
        xpos: if fields[4] == "_" {
            None
        } else {
            Some(fields[4].to_owned())
        },
        feats: Features::parse(fields[5]),
        head,
        deprel: fields[7].to_owned(),
        deps: fields[8].to_owned(),
        misc: fields[9].to_owned(),
    }))
}

/// Write sentences as CoNLL-U. Every sentence is followed by a blank line.
pub fn serialize_conllu(sentences: &[Sentence]) -> String {
    let mut out = String::new();
    for sentence in sentences {
        for comment in &sentence.comments {
            out.push_str(comment);
            out.push('\n');
        }
        for token in &sentence.tokens {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                token.id,
                token.form,
                token.lemma,
                token.upos,
                token.xpos.as_deref().unwrap_or("_"),
                token.feats,
                token.head,
                token.deprel,
                token.deps,
                token.misc,
            )
            .expect("writing to a String cannot fail");
        }
        out.push('\n');
    }
    out
}
