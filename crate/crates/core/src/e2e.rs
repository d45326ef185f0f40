//! E2E-style restaurant data: meaning representations, delexicalization and
//! training pairs for the planning and realization models.

use std::fmt;
use std::io;
use std::path::Path;

use regex::RegexBuilder;
use thiserror::Error;

use crate::corpus::tokenize_lower;
use crate::ir::IrSequence;

/// Placeholder substituted for the `name` slot value.
pub const NAME_PLACEHOLDER: &str = "xname";
/// Placeholder substituted for the `near` slot value.
pub const NEAR_PLACEHOLDER: &str = "xnear";
/// Separates sentence IRs in planner targets.
pub const SENTENCE_SEPARATOR: &str = "<sent>";

/// Slot order used when writing planner sources.
pub const SLOT_ORDER: [&str; 8] = [
    "name",
    "eatType",
    "food",
    "priceRange",
    "customer rating",
    "area",
    "familyFriendly",
    "near",
];

#[derive(Debug, Error)]
pub enum DataError {
    #[error("meaning representation `{text}`: missing `{bracket}`")]
    MissingBracket { text: String, bracket: char },
    #[error("meaning representation `{0}`: empty slot name")]
    EmptySlot(String),
    #[error("meaning representation `{text}`: empty value for slot `{slot}`")]
    EmptyValue { text: String, slot: String },
    #[error("meaning representation `{text}`: duplicate slot `{slot}`")]
    DuplicateSlot { text: String, slot: String },
    #[error("meaning representation `{text}`: unexpected `{found}` after slot `{slot}`")]
    Trailing {
        text: String,
        slot: String,
        found: String,
    },
    #[error("dataset has no `mr,ref` header")]
    MissingHeader,
    #[error("dataset line {line}: expected 2 fields, found {found}")]
    FieldCount { line: u64, found: usize },
    #[error("dataset line {line}: {source}")]
    Row {
        line: u64,
        #[source]
        source: Box<DataError>,
    },
    #[error("no sentence IRs for planner pair")]
    NoIrs,
    #[error("empty sentence for realizer pair")]
    EmptySentence,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Ordered slot/value pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MeaningRepresentation {
    slots: Vec<(String, String)>,
}

impl MeaningRepresentation {
    pub fn new<I, K, V>(slots: I) -> Result<Self, DataError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let mut mr = MeaningRepresentation::default();
        for (slot, value) in slots {
            mr.push(slot.into(), value.into())
                .map_err(|e| e.with_text(|| mr.to_string()))?;
        }
        Ok(mr)
    }

    fn push(&mut self, slot: String, value: String) -> Result<(), DataError> {
        if slot.is_empty() {
            return Err(DataError::EmptySlot(String::new()));
        }
        if value.is_empty() {
            return Err(DataError::EmptyValue {
                text: String::new(),
                slot,
            });
        }
        if self.get(&slot).is_some() {
            return Err(DataError::DuplicateSlot {
                text: String::new(),
                slot,
            });
        }
        self.slots.push((slot, value));
        Ok(())
    }

    pub fn get(&self, slot: &str) -> Option<&str> {
        self.slots
            .iter()
            .find(|(s, _)| s == slot)
            .map(|(_, v)| v.as_str())
    }

    pub fn slots(&self) -> impl Iterator<Item = (&str, &str)> {
        self.slots.iter().map(|(s, v)| (s.as_str(), v.as_str()))
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }
}

impl DataError {
    fn with_text(self, text: impl FnOnce() -> String) -> Self {
        match self {
            DataError::EmptySlot(_) => DataError::EmptySlot(text()),
            DataError::EmptyValue { slot, .. } => DataError::EmptyValue { text: text(), slot },
            DataError::DuplicateSlot { slot, .. } => {
                DataError::DuplicateSlot { text: text(), slot }
            }
            other => other,
        }
    }
}

impl fmt::Display for MeaningRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, (slot, value)) in self.slots.iter().enumerate() {
            if idx > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}[{}]", slot, value)?;
        }
        Ok(())
    }
}

/// Parse `slot[value], slot[value], ...`.
///
/// Values may contain commas; they end at the first `]`.
pub fn parse_mr(text: &str) -> Result<MeaningRepresentation, DataError> {
    let mut mr = MeaningRepresentation::default();
    let mut rest = text.trim();

    while !rest.is_empty() {
        let open = rest.find('[').ok_or_else(|| DataError::MissingBracket {
            text: text.to_owned(),
            bracket: '[',
        })?;
        let slot = rest[..open].trim();
        let after = &rest[open + 1..];
        let close = after.find(']').ok_or_else(|| DataError::MissingBracket {
            text: text.to_owned(),
            bracket: ']',
        })?;
        let value = after[..close].trim();

        mr.push(slot.to_owned(), value.to_owned())
            .map_err(|e| e.with_text(|| text.to_owned()))?;

        rest = after[close + 1..].trim_start();
        if let Some(next) = rest.strip_prefix(',') {
            rest = next.trim_start();
        } else if !rest.is_empty() {
            return Err(DataError::Trailing {
                text: text.to_owned(),
                slot: slot.to_owned(),
                found: rest.chars().next().map(String::from).unwrap_or_default(),
            });
        }
    }

    Ok(mr)
}

/// Placeholder to surface string pairs for one utterance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DelexMap {
    pairs: Vec<(String, String)>,
}

impl DelexMap {
    pub fn new() -> Self {
        DelexMap::default()
    }

    /// Record a placeholder, replacing an earlier surface for it.
    pub fn insert(&mut self, placeholder: impl Into<String>, surface: impl Into<String>) {
        let placeholder = placeholder.into();
        let surface = surface.into();
        match self.pairs.iter_mut().find(|(p, _)| *p == placeholder) {
            Some(pair) => pair.1 = surface,
            None => self.pairs.push((placeholder, surface)),
        }
    }

    pub fn get(&self, placeholder: &str) -> Option<&str> {
        self.pairs
            .iter()
            .find(|(p, _)| p == placeholder)
            .map(|(_, s)| s.as_str())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.pairs.iter().map(|(p, s)| (p.as_str(), s.as_str()))
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Sidecar line: `placeholder<TAB>surface` pairs, tab separated.
    pub fn to_line(&self) -> String {
        self.pairs
            .iter()
            .flat_map(|(p, s)| [p.as_str(), s.as_str()])
            .collect::<Vec<_>>()
            .join("\t")
    }

    pub fn from_line(line: &str) -> Option<Self> {
        let line = line.trim_end_matches(['\n', '\r']);
        if line.is_empty() {
            return Some(DelexMap::new());
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if !fields.len().is_multiple_of(2) {
            return None;
        }
        let mut map = DelexMap::new();
        for pair in fields.chunks(2) {
            map.insert(pair[0], pair[1]);
        }
        Some(map)
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Replace every case-insensitive occurrence of `value` that sits on token
/// boundaries.
fn replace_bounded(text: &str, value: &str, replacement: &str) -> String {
    let value = value.trim();
    if value.is_empty() {
        return text.to_owned();
    }
    let re = RegexBuilder::new(&regex::escape(value))
        .case_insensitive(true)
        .build()
        .expect("escaped literal is a valid pattern");

    let mut out = String::with_capacity(text.len());
    let mut copied = 0;
    let mut start = 0;
    while let Some(m) = re.find_at(text, start) {
        let before = text[..m.start()].chars().next_back();
        let after = text[m.end()..].chars().next();
        let bounded = !before.is_some_and(is_word_char) && !after.is_some_and(is_word_char);
        if bounded {
            out.push_str(&text[copied..m.start()]);
            out.push_str(replacement);
            copied = m.end();
            start = m.end();
        } else {
            start = m.start() + text[m.start()..].chars().next().map_or(1, char::len_utf8);
        }
        if start >= text.len() {
            break;
        }
    }
    out.push_str(&text[copied..]);
    out
}

/// Replace the `name` and `near` slot values with their placeholders.
///
/// The map records both slots whenever they are present in the meaning
/// representation, even if the value does not occur in the text.
pub fn delexicalize(utterance: &str, mr: &MeaningRepresentation) -> (String, DelexMap) {
    let mut map = DelexMap::new();
    let mut targets: Vec<(&str, &str)> = Vec::new();
    if let Some(name) = mr.get("name") {
        map.insert(NAME_PLACEHOLDER, name);
        targets.push((NAME_PLACEHOLDER, name));
    }
    if let Some(near) = mr.get("near") {
        map.insert(NEAR_PLACEHOLDER, near);
        targets.push((NEAR_PLACEHOLDER, near));
    }

    // Longer values first so a value containing the other is not split.
    targets.sort_by_key(|(_, value)| std::cmp::Reverse(value.len()));

    let mut text = utterance.to_owned();
    for (placeholder, value) in targets {
        text = replace_bounded(&text, value, placeholder);
    }

    (text, map)
}

/// Relexicalized text plus placeholders that had no surface string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relexicalized {
    pub text: String,
    pub unresolved: Vec<String>,
}

/// Put surface strings back in place of placeholders.
pub fn relexicalize(text: &str, map: &DelexMap) -> Relexicalized {
    let mut out = text.to_owned();
    for (placeholder, surface) in map.pairs() {
        out = replace_placeholder(&out, placeholder, surface);
    }

    let unresolved = [NAME_PLACEHOLDER, NEAR_PLACEHOLDER]
        .into_iter()
        .filter(|p| map.get(p).is_none() && contains_bounded(&out, p))
        .map(str::to_owned)
        .collect();

    Relexicalized {
        text: out,
        unresolved,
    }
}

/// Case-sensitive bounded replacement; placeholders are lowercase tokens.
fn replace_placeholder(text: &str, placeholder: &str, surface: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut copied = 0;
    for (idx, _) in text.match_indices(placeholder) {
        let end = idx + placeholder.len();
        let before = text[..idx].chars().next_back();
        let after = text[end..].chars().next();
        if idx >= copied && !before.is_some_and(is_word_char) && !after.is_some_and(is_word_char) {
            out.push_str(&text[copied..idx]);
            out.push_str(surface);
            copied = end;
        }
    }
    out.push_str(&text[copied..]);
    out
}

fn contains_bounded(text: &str, token: &str) -> bool {
    text.match_indices(token).any(|(idx, _)| {
        let before = text[..idx].chars().next_back();
        let after = text[idx + token.len()..].chars().next();
        !before.is_some_and(is_word_char) && !after.is_some_and(is_word_char)
    })
}

/// One dataset row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetRow {
    pub mr: MeaningRepresentation,
    pub reference: String,
}

/// Read a two-column `mr,ref` CSV file.
pub fn read_dataset(path: impl AsRef<Path>) -> Result<Vec<DatasetRow>, DataError> {
    let file = std::fs::File::open(path)?;
    read_dataset_from(file)
}

pub fn read_dataset_from<R: io::Read>(reader: R) -> Result<Vec<DatasetRow>, DataError> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);

    let mut records = csv.records();
    let header = records.next().ok_or(DataError::MissingHeader)??;
    let names: Vec<String> = header.iter().map(|h| h.trim().to_lowercase()).collect();
    if names != ["mr", "ref"] {
        return Err(DataError::MissingHeader);
    }

    let mut rows = Vec::new();
    for record in records {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(DataError::FieldCount {
                line,
                found: record.len(),
            });
        }
        let mr = parse_mr(&record[0]).map_err(|e| DataError::Row {
            line,
            source: Box::new(e),
        })?;
        rows.push(DatasetRow {
            mr,
            reference: record[1].to_owned(),
        });
    }

    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    Planner,
    Realizer,
}

/// Parallel source/target token sequences for one model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrainingPair {
    pub source: Vec<String>,
    pub target: Vec<String>,
    pub kind: PairKind,
}

impl TrainingPair {
    pub fn source_line(&self) -> String {
        self.source.join(" ")
    }

    pub fn target_line(&self) -> String {
        self.target.join(" ")
    }
}

/// Planner source tokens: slots in [`SLOT_ORDER`] (unknown slots after, in
/// input order), slot name then value, lowercased, with `name` and `near`
/// values replaced by their placeholders.
pub fn encode_mr(mr: &MeaningRepresentation) -> Vec<String> {
    let rank = |slot: &str| {
        SLOT_ORDER
            .iter()
            .position(|s| *s == slot)
            .unwrap_or(SLOT_ORDER.len())
    };
    let mut slots: Vec<(usize, (&str, &str))> = mr.slots().enumerate().collect();
    slots.sort_by_key(|&(idx, (slot, _))| (rank(slot), idx));

    let mut tokens = Vec::new();
    for (_, (slot, value)) in slots {
        tokens.extend(slot.split_whitespace().map(str::to_lowercase));
        match slot {
            "name" => tokens.push(NAME_PLACEHOLDER.to_owned()),
            "near" => tokens.push(NEAR_PLACEHOLDER.to_owned()),
            _ => tokens.extend(tokenize_lower(value)),
        }
    }
    tokens
}

pub fn build_planner_pair(
    mr: &MeaningRepresentation,
    sentence_irs: &[IrSequence],
) -> Result<TrainingPair, DataError> {
    if sentence_irs.is_empty() {
        return Err(DataError::NoIrs);
    }

    let mut target = Vec::new();
    for (idx, ir) in sentence_irs.iter().enumerate() {
        if idx > 0 {
            target.push(SENTENCE_SEPARATOR.to_owned());
        }
        target.extend(ir.tokens().iter().cloned());
    }

    Ok(TrainingPair {
        source: encode_mr(mr),
        target,
        kind: PairKind::Planner,
    })
}

/// Realizer pair from an IR and its tokenized, lowercased, delexicalized
/// sentence.
pub fn build_realizer_pair(ir: &IrSequence, sentence: &str) -> Result<TrainingPair, DataError> {
    let target: Vec<String> = sentence.split_whitespace().map(str::to_owned).collect();
    if target.is_empty() {
        return Err(DataError::EmptySentence);
    }
    Ok(TrainingPair {
        source: ir.tokens().to_vec(),
        target,
        kind: PairKind::Realizer,
    })
}

/// Split planner output on [`SENTENCE_SEPARATOR`] into per-sentence IR
/// token lists. Empty segments are dropped.
pub fn split_planner_output(line: &str) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    for token in line.split_whitespace() {
        if token == SENTENCE_SEPARATOR {
            if !current.is_empty() {
                out.push(std::mem::take(&mut current));
            }
        } else {
            current.push(token.to_owned());
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::ir::parse_ir;

    fn mr(text: &str) -> MeaningRepresentation {
        parse_mr(text).unwrap()
    }

    #[test]
    fn parses_mr() {
        let parsed = mr("name[The Punter], area[riverside], familyFriendly[no]");
        assert_eq!(
            parsed.slots().collect::<Vec<_>>(),
            [
                ("name", "The Punter"),
                ("area", "riverside"),
                ("familyFriendly", "no")
            ]
        );
        assert_eq!(mr("name[X]").len(), 1);
        assert_eq!(
            mr(" priceRange[£20-25] , customer rating[3 out of 5] ").len(),
            2
        );
        assert_eq!(
            mr("food[Fast food, mostly]").get("food"),
            Some("Fast food, mostly")
        );
        assert!(mr("").is_empty());
    }

    #[test]
    fn mr_errors() {
        assert!(matches!(
            parse_mr("name[]").unwrap_err(),
            DataError::EmptyValue { .. }
        ));
        assert!(matches!(
            parse_mr("[x]").unwrap_err(),
            DataError::EmptySlot(_)
        ));
        assert!(matches!(
            parse_mr("name[x").unwrap_err(),
            DataError::MissingBracket { bracket: ']', .. }
        ));
        assert!(matches!(
            parse_mr("name").unwrap_err(),
            DataError::MissingBracket { bracket: '[', .. }
        ));
        assert!(matches!(
            parse_mr("name[a], name[b]").unwrap_err(),
            DataError::DuplicateSlot { .. }
        ));
        assert!(matches!(
            parse_mr("name[a] area[b]").unwrap_err(),
            DataError::Trailing { .. }
        ));
    }

    #[test]
    fn delexicalizes_name() {
        let (text, map) = delexicalize(
            "Do not go to The Punter near riverside.",
            &mr("name[The Punter], area[riverside]"),
        );
        assert_eq!(text, "Do not go to xname near riverside.");
        assert_eq!(map.pairs().collect::<Vec<_>>(), [("xname", "The Punter")]);
    }

    #[test]
    fn delexicalize_absent_value() {
        let (text, map) = delexicalize("A pub by the river.", &mr("name[Z]"));
        assert_eq!(text, "A pub by the river.");
        assert_eq!(map.get("xname"), Some("Z"));
    }

    #[test]
    fn delexicalize_multi_token_and_boundaries() {
        let (text, _) = delexicalize(
            "Have you heard of The Sorrento and The Wrestlers, they are friendly.",
            &mr("name[The Sorrento], near[The Wrestlers]"),
        );
        assert_eq!(
            text,
            "Have you heard of xname and xnear, they are friendly."
        );

        let (text, _) = delexicalize(
            "the wrestlers' pub and The Wrestlersons",
            &mr("near[The Wrestlers]"),
        );
        assert_eq!(text, "xnear' pub and The Wrestlersons");

        // A value containing the other value is replaced whole.
        let (text, _) = delexicalize(
            "Try Blue Spice Bar near Blue Spice.",
            &mr("name[Blue Spice Bar], near[Blue Spice]"),
        );
        assert_eq!(text, "Try xname near xnear.");
    }

    #[test]
    fn relexicalizes() {
        let mut map = DelexMap::new();
        map.insert("xname", "A");
        map.insert("xnear", "B");
        let out = relexicalize("xname is near xnear", &map);
        assert_eq!(out.text, "A is near B");
        assert!(out.unresolved.is_empty());

        let mut only_name = DelexMap::new();
        only_name.insert("xname", "A");
        let out = relexicalize("xname is near xnear .", &only_name);
        assert_eq!(out.text, "A is near xnear .");
        assert_eq!(out.unresolved, ["xnear"]);
    }

    #[test]
    fn sidecar_lines() {
        let mut map = DelexMap::new();
        map.insert("xname", "The Punter");
        map.insert("xnear", "Café Sicilia");
        let line = map.to_line();
        assert_eq!(line, "xname\tThe Punter\txnear\tCafé Sicilia");
        assert_eq!(DelexMap::from_line(&line), Some(map));
        assert_eq!(DelexMap::from_line(""), Some(DelexMap::new()));
        assert_eq!(DelexMap::from_line("xname"), None);
    }

    #[test]
    fn reads_csv() {
        let data = "mr,ref\n\"name[A], food[Thai]\",\"A serves Thai food, cheaply.\"\nname[B],\"He said \"\"hi\"\".\"\n";
        let rows = read_dataset_from(data.as_bytes()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].reference, "A serves Thai food, cheaply.");
        assert_eq!(rows[0].mr.get("food"), Some("Thai"));
        assert_eq!(rows[1].reference, "He said \"hi\".");
    }

    #[test]
    fn csv_errors() {
        assert!(matches!(
            read_dataset_from("".as_bytes()).unwrap_err(),
            DataError::MissingHeader
        ));
        assert!(matches!(
            read_dataset_from("a,b\nname[x],y\n".as_bytes()).unwrap_err(),
            DataError::MissingHeader
        ));
        assert!(matches!(
            read_dataset_from("mr,ref\nname[x],y,z\n".as_bytes()).unwrap_err(),
            DataError::FieldCount { line: 2, found: 3 }
        ));
        assert!(matches!(
            read_dataset_from("mr,ref\nname[],y\n".as_bytes()).unwrap_err(),
            DataError::Row { line: 2, .. }
        ));
    }

    #[test]
    fn planner_pairs() {
        let ir = parse_ir("go _( not xname riverside )_").unwrap();
        let pair = build_planner_pair(
            &mr("area[riverside], name[The Punter]"),
            std::slice::from_ref(&ir),
        )
        .unwrap();
        assert_eq!(pair.source_line(), "name xname area riverside");
        assert_eq!(pair.target_line(), "go _( not xname riverside )_");
        assert_eq!(pair.kind, PairKind::Planner);

        let second = parse_ir("it _( is cheap )_").unwrap();
        let pair = build_planner_pair(&mr("name[X]"), &[ir.clone(), second]).unwrap();
        assert_eq!(
            pair.target_line(),
            "go _( not xname riverside )_ <sent> it _( is cheap )_"
        );
        assert_eq!(pair.target.len(), 6 + 5 + 1);

        assert!(matches!(
            build_planner_pair(&mr("name[X]"), &[]),
            Err(DataError::NoIrs)
        ));
    }

    #[test]
    fn mr_encoding_order() {
        let m =
            mr("near[Café Rouge], customer rating[5 out of 5], eatType[pub], name[X], extra[Yes]");
        assert_eq!(
            encode_mr(&m).join(" "),
            "name xname eattype pub customer rating 5 out of 5 near xnear extra yes"
        );
    }

    #[test]
    fn realizer_pairs() {
        let ir = parse_ir("go _( not xname riverside )_").unwrap();
        let pair = build_realizer_pair(&ir, "do not go to xname near riverside .").unwrap();
        assert_eq!(pair.source_line(), "go _( not xname riverside )_");
        assert_eq!(pair.target_line(), "do not go to xname near riverside .");

        let pair = build_realizer_pair(&parse_ir("hi").unwrap(), "hi").unwrap();
        assert_eq!((pair.source.len(), pair.target.len()), (1, 1));

        assert!(matches!(
            build_realizer_pair(&ir, "  "),
            Err(DataError::EmptySentence)
        ));
    }

    #[test]
    fn splits_planner_output() {
        assert_eq!(
            split_planner_output("a _( b c )_ <sent> d e <sent>"),
            vec![vec!["a", "_(", "b", "c", ")_"], vec!["d", "e"]]
        );
    }

    fn arb_mr() -> impl Strategy<Value = MeaningRepresentation> {
        prop::collection::vec(
            (
                0..SLOT_ORDER.len(),
                "[A-Za-z£0-9][A-Za-z0-9 ,-]{0,10}[A-Za-z0-9]",
            ),
            0..6,
        )
        .prop_map(|slots| {
            let mut mr = MeaningRepresentation::default();
            for (slot, value) in slots {
                let _ = mr.push(SLOT_ORDER[slot].to_owned(), value);
            }
            mr
        })
    }

    proptest! {
        #[test]
        fn mr_render_parse_identity(m in arb_mr()) {
            prop_assert_eq!(parse_mr(&m.to_string()).unwrap(), m);
        }

        #[test]
        fn delex_relex_inverse(
            words in prop::collection::vec("[a-w]{1,6}", 0..8),
            name in "[A-Z][a-w]{2,6}( [A-Z][a-w]{2,6})?",
            near in "[A-Z][a-w]{2,6} [A-Z][a-w]{2,6}",
            at_name in 0usize..8,
            at_near in 0usize..8,
        ) {
            prop_assume!(!name.eq_ignore_ascii_case(&near));
            prop_assume!(!near.to_lowercase().contains(&name.to_lowercase()));
            prop_assume!(!name.to_lowercase().contains(&near.to_lowercase()));
            let mut tokens = words.clone();
            tokens.insert(at_name.min(tokens.len()), name.clone());
            tokens.insert(at_near.min(tokens.len()), near.clone());
            let utterance = format!("{}.", tokens.join(" "));
            let mr = MeaningRepresentation::new([("name", name.as_str()), ("near", near.as_str())]).unwrap();

            let (delex, map) = delexicalize(&utterance, &mr);
            prop_assert!(delex.contains(NAME_PLACEHOLDER));
            prop_assert!(delex.contains(NEAR_PLACEHOLDER));
            let relex = relexicalize(&delex, &map);
            prop_assert_eq!(relex.text, utterance);
            prop_assert!(relex.unresolved.is_empty());
        }
    }
}
