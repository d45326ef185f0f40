//! Independent reference implementations and generators shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use uudnlg::conllu::{Features, Sentence, Token};
use uudnlg::uud::{NegationRule, PruneRules, UudNode, UudTree};

pub const UPOS_POOL: [&str; 14] = [
    "NOUN", "VERB", "ADJ", "ADV", "PRON", "PROPN", "CCONJ", "NUM", "ADP", "AUX", "DET", "PART",
    "PUNCT", "SCONJ",
];
pub const FORM_POOL: [&str; 12] = [
    "go", "not", "no", "n't", "never", "the", "to", "and", "it", "food", "cheap", "near",
];

pub fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{}", env!("CARGO_MANIFEST_DIR"), name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {}", path, e))
}

/// A random dependency tree with random labels. Heads may point forward
/// or backward; `heads[i]` is the 1-based head of token `i + 1`, 0 for
/// the root.
pub fn random_sentence(rng: &mut StdRng, max_len: usize) -> Sentence {
    let n = rng.gen_range(1..=max_len);
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let mut heads = vec![0usize; n + 1];
    for k in 1..n {
        let parent = order[rng.gen_range(0..k)];
        heads[order[k]] = parent;
    }
    let tokens = (1..=n)
        .map(|id| {
            let form = *FORM_POOL.choose(rng).unwrap();
            let upos = *UPOS_POOL.choose(rng).unwrap();
            let feats = if rng.gen_bool(0.15) {
                Features::from_pairs([("Polarity", "Neg")])
            } else {
                Features::new()
            };
            Token::new(id, form, heads[id])
                .with_upos(upos)
                .with_feats(feats)
        })
        .collect();
    Sentence::new(Vec::new(), tokens).expect("generated sentence is a tree")
}

/// Random pruning rules over the label pools.
pub fn random_rules(rng: &mut StdRng) -> PruneRules {
    let pick = |rng: &mut StdRng, pool: &[&str], p: f64| -> BTreeSet<String> {
        pool.iter()
            .filter(|_| rng.gen_bool(p))
            .map(|s| s.to_string())
            .collect()
    };
    let mut feats = BTreeSet::new();
    if rng.gen_bool(0.5) {
        feats.insert(("Polarity".to_string(), "Neg".to_string()));
    }
    PruneRules {
        drop_upos: pick(rng, &UPOS_POOL, 0.5),
        negation: NegationRule {
            feats,
            forms: pick(rng, &["not", "no", "n't", "never"], 0.5),
        },
        keep_forms: pick(rng, &FORM_POOL, 0.1),
    }
}

/// Keep decision written out directly from the rule fields.
pub fn oracle_keeps(rules: &PruneRules, token: &Token) -> bool {
    let form = token.form.to_lowercase();
    if rules.keep_forms.contains(&form) || rules.negation.forms.contains(&form) {
        return true;
    }
    if rules
        .negation
        .feats
        .iter()
        .any(|(k, v)| token.feats.get(k) == Some(v.as_str()))
    {
        return true;
    }
    !rules.drop_upos.contains(&token.upos)
}

/// Expected content-word tree as `(root id, sorted (parent id, child id)
/// edges)`, found by walking head pointers from every kept token.
pub fn oracle_prune(sentence: &Sentence, keep: &[bool]) -> Option<(usize, Vec<(usize, usize)>)> {
    let head = |id: usize| sentence.tokens[id - 1].head;
    let kept = |id: usize| keep[id - 1];
    let n = sentence.tokens.len();

    let depth = |id: usize| {
        let mut d = 0;
        let mut up = head(id);
        while up != 0 {
            up = head(up);
            d += 1;
        }
        d
    };

    let mut attached = Vec::new();
    let mut orphans = Vec::new();
    for id in (1..=n).filter(|&id| kept(id)) {
        let mut cur = head(id);
        while cur != 0 && !kept(cur) {
            cur = head(cur);
        }
        if cur == 0 {
            orphans.push((depth(id), id));
        } else {
            attached.push((cur, id));
        }
    }
    let &(_, root) = orphans.iter().min()?;
    let mut edges = attached;
    edges.extend(
        orphans
            .iter()
            .filter(|&&(_, id)| id != root)
            .map(|&(_, id)| (root, id)),
    );
    edges.sort_unstable();
    Some((root, edges))
}

/// Root id and sorted edges of a content-word tree.
pub fn tree_edges(tree: &UudTree) -> (usize, Vec<(usize, usize)>) {
    fn walk(node: &UudNode, out: &mut Vec<(usize, usize)>) {
        for child in &node.children {
            out.push((node.position, child.position));
            walk(child, out);
        }
    }
    let mut edges = Vec::new();
    walk(&tree.root, &mut edges);
    edges.sort_unstable();
    (tree.root.position, edges)
}

/// Whether every sibling list is strictly ascending by position.
pub fn siblings_ascending(node: &UudNode) -> bool {
    node.children
        .windows(2)
        .all(|w| w[0].position < w[1].position)
        && node.children.iter().all(siblings_ascending)
}

/// Recursive preorder of forms.
pub fn preorder_forms(node: &UudNode, out: &mut Vec<String>) {
    out.push(node.form.clone());
    for child in &node.children {
        preorder_forms(child, out);
    }
}

pub fn branching_nodes(node: &UudNode) -> usize {
    usize::from(node.children.len() >= 2) + node.children.iter().map(branching_nodes).sum::<usize>()
}

fn random_form(rng: &mut StdRng) -> String {
    ["a", "b", "c", "xname", "not", "food"]
        .choose(rng)
        .unwrap()
        .to_string()
}

/// A random content-word tree with up to `max_nodes` nodes. Positions are
/// creation order, so siblings come out ascending.
pub fn random_tree(rng: &mut StdRng, max_nodes: usize) -> UudTree {
    let n = rng.gen_range(1..=max_nodes);
    let mut parents = vec![None; n];
    for (k, parent) in parents.iter_mut().enumerate().skip(1) {
        *parent = Some(rng.gen_range(0..k));
    }
    let forms: Vec<String> = (0..n).map(|_| random_form(rng)).collect();
    fn build(id: usize, parents: &[Option<usize>], forms: &[String]) -> UudNode {
        let children = (0..parents.len())
            .filter(|&c| parents[c] == Some(id))
            .map(|c| build(c, parents, forms))
            .collect();
        UudNode::with_children(forms[id].clone(), id + 1, children)
    }
    UudTree::new(build(0, &parents, &forms))
}

/// A random tree where every node below the initial chain from the root
/// has zero or at least two children.
pub fn random_unambiguous_tree(rng: &mut StdRng) -> UudTree {
    fn branch(rng: &mut StdRng, depth: usize) -> UudNode {
        let width = if depth >= 3 || rng.gen_bool(0.5) {
            0
        } else {
            rng.gen_range(2..=4)
        };
        let children = (0..width).map(|_| branch(rng, depth + 1)).collect();
        UudNode::with_children(random_form(rng), 0, children)
    }
    let chain = rng.gen_range(0..4);
    let mut node = branch(rng, 0);
    for _ in 0..chain {
        node = UudNode::with_children(random_form(rng), 0, vec![node]);
    }
    UudTree::new(node).renumbered()
}
