//! Pruning full dependency trees down to content-word trees.
//!
//! Function words are removed and every remaining word is attached to its
//! nearest surviving ancestor. Which words count as function words is
//! decided by [`PruneRules`], which are plain data and can be loaded from a
//! small directive file.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::conllu::{DepTree, Sentence, Token};

/// UPOS tags dropped by [`PruneRules::default`].
pub const DEFAULT_DROP_UPOS: [&str; 8] =
    ["ADP", "AUX", "DET", "SCONJ", "PART", "PUNCT", "SYM", "X"];

/// Lowercased forms that count as negation markers by default.
pub const DEFAULT_NEGATION_FORMS: [&str; 4] = ["not", "n't", "no", "never"];

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ConvertError {
    #[error("every token of sentence `{0}` is dropped by the pruning rules")]
    AllDropped(String),
    #[error("sentence has no tokens")]
    EmptySentence,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RulesError {
    #[error("rules line {line}: unknown directive `{directive}`")]
    UnknownDirective { line: usize, directive: String },
    #[error("rules line {line}: directive `{directive}` expects one argument")]
    MissingArgument { line: usize, directive: String },
    #[error("rules line {line}: feature `{value}` is not of the form Key=Value")]
    InvalidFeature { line: usize, value: String },
}

/// Keeps otherwise droppable negation markers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NegationRule {
    /// `(key, value)` features marking negation, e.g. `Polarity=Neg`.
    pub feats: BTreeSet<(String, String)>,
    /// Lowercased forms treated as negation.
    pub forms: BTreeSet<String>,
}

impl NegationRule {
    pub fn matches(&self, token: &Token) -> bool {
        self.feats.iter().any(|(k, v)| token.feats.contains(k, v))
            || self.forms.contains(&token.form.to_lowercase())
    }
}

/// The content/function word partition.
///
/// A token is dropped when its UPOS is in `drop_upos`, unless the negation
/// rule matches it or its lowercased form is in `keep_forms`. Keep rules
/// always win over the drop set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PruneRules {
    pub drop_upos: BTreeSet<String>,
    pub negation: NegationRule,
    pub keep_forms: BTreeSet<String>,
}

impl Default for PruneRules {
    fn default() -> Self {
        PruneRules {
            drop_upos: DEFAULT_DROP_UPOS.iter().map(|s| s.to_string()).collect(),
            negation: NegationRule {
                feats: [("Polarity".to_owned(), "Neg".to_owned())]
                    .into_iter()
                    .collect(),
                forms: DEFAULT_NEGATION_FORMS
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
            },
            keep_forms: BTreeSet::new(),
        }
    }
}

impl PruneRules {
    /// Rules that keep every token.
    pub fn keep_all() -> Self {
        PruneRules {
            drop_upos: BTreeSet::new(),
            negation: NegationRule::default(),
            keep_forms: BTreeSet::new(),
        }
    }

    pub fn keeps(&self, token: &Token) -> bool {
        !self.drop_upos.contains(&token.upos)
            || self.negation.matches(token)
            || self.keep_forms.contains(&token.form.to_lowercase())
    }

    /// Apply a directive file on top of these rules.
    ///
    /// One directive per line; `#` starts a comment.
    ///
    /// ```text
    /// drop_upos INTJ        # add a tag to the drop set
    /// keep_upos PART        # remove a tag from the drop set
    /// keep_form there       # always keep this (lowercased) form
    /// negation_form nor     # extra negation form
    /// negation_feat Polarity=Neg
    /// clear                 # start over from rules that keep everything
    /// ```
    pub fn apply_directives(mut self, text: &str) -> Result<Self, RulesError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }

            let mut parts = content.split_whitespace();
            let directive = parts.next().unwrap_or_default();
            let argument = parts.next();
            let needs_arg = |arg: Option<&str>| {
                arg.map(str::to_owned)
                    .ok_or_else(|| RulesError::MissingArgument {
                        line,
                        directive: directive.to_owned(),
                    })
            };

            match directive {
                "clear" => self = PruneRules::keep_all(),
                "drop_upos" => {
                    self.drop_upos.insert(needs_arg(argument)?);
                }
                "keep_upos" => {
                    self.drop_upos.remove(&needs_arg(argument)?);
                }
                "keep_form" => {
                    self.keep_forms.insert(needs_arg(argument)?.to_lowercase());
                }
                "negation_form" => {
                    self.negation
                        .forms
                        .insert(needs_arg(argument)?.to_lowercase());
                }
                "negation_feat" => {
                    let value = needs_arg(argument)?;
                    let (k, v) =
                        value
                            .split_once('=')
                            .ok_or_else(|| RulesError::InvalidFeature {
                                line,
                                value: value.clone(),
                            })?;
                    self.negation.feats.insert((k.to_owned(), v.to_owned()));
                }
                other => {
                    return Err(RulesError::UnknownDirective {
                        line,
                        directive: other.to_owned(),
                    })
                }
            }
        }

        Ok(self)
    }

    /// Default rules with a directive file applied.
    pub fn from_directives(text: &str) -> Result<Self, RulesError> {
        PruneRules::default().apply_directives(text)
    }
}

/// A node of a content-word tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UudNode {
    pub form: String,
    /// Id of the source token; siblings are sorted by it.
    pub position: usize,
    pub children: Vec<UudNode>,
}

impl UudNode {
    pub fn leaf(form: impl Into<String>, position: usize) -> Self {
        UudNode {
            form: form.into(),
            position,
            children: Vec::new(),
        }
    }

    pub fn with_children(form: impl Into<String>, position: usize, children: Vec<UudNode>) -> Self {
        UudNode {
            form: form.into(),
            position,
            children,
        }
    }

    fn count(&self) -> usize {
        1 + self.children.iter().map(UudNode::count).sum::<usize>()
    }

    fn collect<'a>(&'a self, out: &mut Vec<(&'a str, usize)>) {
        out.push((&self.form, self.position));
        for child in &self.children {
            child.collect(out);
        }
    }
}

/// A content-word tree for one sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UudTree {
    pub root: UudNode,
}

impl UudTree {
    pub fn new(root: UudNode) -> Self {
        UudTree { root }
    }

    pub fn node_count(&self) -> usize {
        self.root.count()
    }

    /// All nodes in depth-first preorder.
    pub fn preorder(&self) -> Vec<&UudNode> {
        let mut out = Vec::new();
        let mut stack = vec![&self.root];
        while let Some(node) = stack.pop() {
            out.push(node);
            stack.extend(node.children.iter().rev());
        }
        out
    }

    /// Same tree with positions renumbered 1.. in depth-first order.
    pub fn renumbered(&self) -> UudTree {
        fn walk(node: &UudNode, next: &mut usize) -> UudNode {
            let position = *next;
            *next += 1;
            UudNode {
                form: node.form.clone(),
                position,
                children: node.children.iter().map(|c| walk(c, next)).collect(),
            }
        }
        let mut next = 1;
        UudTree::new(walk(&self.root, &mut next))
    }
}

impl fmt::Display for UudTree {
    /// Bracketed rendering, e.g. `go(not xname riverside)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn walk(node: &UudNode, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str(&node.form)?;
            if !node.children.is_empty() {
                f.write_str("(")?;
                for (idx, child) in node.children.iter().enumerate() {
                    if idx > 0 {
                        f.write_str(" ")?;
                    }
                    walk(child, f)?;
                }
                f.write_str(")")?;
            }
            Ok(())
        }
        walk(&self.root, f)
    }
}

/// Prune a dependency tree to its content words.
///
/// Every kept token is attached to its nearest kept ancestor. When the root
/// itself is dropped, the shallowest kept token (lowest id on ties) becomes
/// the new root and the other parentless kept tokens attach to it.
pub fn convert(
    sentence: &Sentence,
    tree: &DepTree,
    rules: &PruneRules,
) -> Result<UudTree, ConvertError> {
    if sentence.is_empty() {
        return Err(ConvertError::EmptySentence);
    }

    let kept: Vec<bool> = sentence.tokens.iter().map(|t| rules.keeps(t)).collect();
    if !kept.iter().any(|&k| k) {
        let text = sentence
            .comment_value("text")
            .map(str::to_owned)
            .unwrap_or_else(|| {
                sentence
                    .tokens
                    .iter()
                    .map(|t| t.form.as_str())
                    .collect::<Vec<_>>()
                    .join(" ")
            });
        return Err(ConvertError::AllDropped(text));
    }

    // Walk top-down carrying the nearest kept ancestor and depth.
    let len = tree.len();
    let mut kept_parent: Vec<Option<usize>> = vec![None; len];
    let mut depth = vec![0usize; len];
    let mut stack = vec![(tree.root, None::<usize>, 0usize)];
    while let Some((node, nearest, d)) = stack.pop() {
        kept_parent[node] = nearest;
        depth[node] = d;
        let below = if kept[node] { Some(node) } else { nearest };
        for &child in &tree.children[node] {
            stack.push((child, below, d + 1));
        }
    }

    let root = (0..len)
        .filter(|&n| kept[n] && kept_parent[n].is_none())
        .min_by_key(|&n| (depth[n], n))
        .expect("at least one token is kept");

    let mut children: Vec<Vec<usize>> = vec![Vec::new(); len];
    for node in 0..len {
        if !kept[node] || node == root {
            continue;
        }
        let parent = kept_parent[node].unwrap_or(root);
        children[parent].push(node);
    }

    fn build(node: usize, sentence: &Sentence, children: &[Vec<usize>]) -> UudNode {
        // Node indexes follow token ids, so ascending index is surface order.
        let mut kids = children[node].clone();
        kids.sort_unstable();
        UudNode {
            form: sentence.tokens[node].form.clone(),
            position: sentence.tokens[node].id,
            children: kids
                .into_iter()
                .map(|c| build(c, sentence, children))
                .collect(),
        }
    }

    Ok(UudTree::new(build(root, sentence, &children)))
}

/// Every node as `(form, position)`, sorted by position.
pub fn project_content_words(tree: &UudTree) -> Vec<(String, usize)> {
    let mut nodes = Vec::with_capacity(tree.node_count());
    tree.root.collect(&mut nodes);
    nodes.sort_by_key(|&(_, position)| position);
    nodes
        .into_iter()
        .map(|(form, position)| (form.to_owned(), position))
        .collect()
}
