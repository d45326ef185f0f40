//! Linearized content-word trees.
//!
//! A tree is written depth first. A node with a single child is directly
//! followed by that child; a node with two or more children is followed by
//! its children wrapped in the scope markers `_(` and `)_`:
//!
//! ```text
//! go(not xname riverside)   =>   go _( not xname riverside )_
//! a(b(c))                   =>   a b c
//! ```
//!
//! Dropping the markers around single children keeps sequences short but
//! makes the string ambiguous: `a _( b c d )_` could come from `a(b c d)` or
//! from `a(b(c) d)`. [`delinearize`] resolves this by always choosing the
//! flattest reading.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::uud::{UudNode, UudTree};

/// Opens the children of a node with two or more children.
pub const OPEN: &str = "_(";
/// Closes a scope opened by [`OPEN`].
pub const CLOSE: &str = ")_";

pub fn is_marker(token: &str) -> bool {
    token == OPEN || token == CLOSE
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum IrError {
    #[error("empty IR")]
    Empty,
    #[error("unbalanced scope markers at token {index}")]
    Unbalanced { index: usize },
    #[error("IR starts with a scope marker")]
    MarkerAtRoot,
    #[error("token {index} follows the closed top-level scope")]
    TrailingTokens { index: usize },
    #[error("empty scope at token {index}")]
    EmptyScope { index: usize },
    #[error("scope at token {index} has no head token")]
    HeadlessScope { index: usize },
    #[error("token {index} is empty or contains whitespace")]
    InvalidToken { index: usize },
}

/// A linearized IR: form tokens interleaved with balanced scope markers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IrSequence(Vec<String>);

impl IrSequence {
    /// Validates the marker balance and that the first token is a form.
    pub fn new(tokens: Vec<String>) -> Result<Self, IrError> {
        if tokens.is_empty() {
            return Err(IrError::Empty);
        }
        if is_marker(&tokens[0]) {
            return Err(if tokens[0] == OPEN {
                IrError::MarkerAtRoot
            } else {
                IrError::Unbalanced { index: 0 }
            });
        }

        let mut depth = 0usize;
        for (index, token) in tokens.iter().enumerate() {
            if token.is_empty() || token.chars().any(char::is_whitespace) {
                return Err(IrError::InvalidToken { index });
            }
            match token.as_str() {
                OPEN => depth += 1,
                CLOSE => {
                    depth = depth.checked_sub(1).ok_or(IrError::Unbalanced { index })?;
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(IrError::Unbalanced {
                index: tokens.len(),
            });
        }

        Ok(IrSequence(tokens))
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn into_tokens(self) -> Vec<String> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Form tokens in order, markers skipped.
    pub fn forms(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str).filter(|t| !is_marker(t))
    }

    /// Tokens joined by single spaces.
    pub fn render(&self) -> String {
        self.0.join(" ")
    }
}

impl fmt::Display for IrSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for IrSequence {
    type Err = IrError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ir(s)
    }
}

/// Split a line on whitespace and validate it.
pub fn parse_ir(line: &str) -> Result<IrSequence, IrError> {
    IrSequence::new(line.split_whitespace().map(str::to_owned).collect())
}

/// Write a tree as an IR sequence.
pub fn linearize(tree: &UudTree) -> IrSequence {
    fn emit(node: &UudNode, out: &mut Vec<String>) {
        out.push(node.form.clone());
        match node.children.as_slice() {
            [] => {}
            [only] => emit(only, out),
            children => {
                out.push(OPEN.to_owned());
                for child in children {
                    emit(child, out);
                }
                out.push(CLOSE.to_owned());
            }
        }
    }

    let mut out = Vec::new();
    emit(&tree.root, &mut out);
    IrSequence(out)
}

/// Read an IR sequence back into a tree.
///
/// At the top level, consecutive forms form a chain, each node the only
/// child of the one before. A scope attaches its contents to the node right
/// before it. Inside a scope every form is a sibling, optionally followed by
/// a scope of its own children. Positions are assigned in reading order.
///
/// For every tree `t`, `linearize(&delinearize(&linearize(&t)))` equals
/// `linearize(&t)`.
pub fn delinearize(ir: &IrSequence) -> Result<UudTree, IrError> {
    let tokens = ir.tokens();
    let mut reader = Reader {
        tokens,
        pos: 0,
        next_position: 1,
    };

    // Top-level chain. The chain nodes are collected first and nested after.
    let mut chain: Vec<UudNode> = Vec::new();
    let mut scope: Option<Vec<UudNode>> = None;
    while reader.pos < tokens.len() {
        let index = reader.pos;
        match tokens[index].as_str() {
            OPEN => {
                if chain.is_empty() {
                    return Err(IrError::MarkerAtRoot);
                }
                reader.pos += 1;
                scope = Some(reader.scope(index)?);
                if reader.pos < tokens.len() {
                    return Err(IrError::TrailingTokens { index: reader.pos });
                }
            }
            CLOSE => return Err(IrError::Unbalanced { index }),
            _ => {
                chain.push(reader.leaf());
            }
        }
    }

    let mut node = chain.pop().ok_or(IrError::Empty)?;
    if let Some(children) = scope {
        node.children = children;
    }
    while let Some(mut parent) = chain.pop() {
        parent.children = vec![node];
        node = parent;
    }

    Ok(UudTree::new(node))
}

struct Reader<'a> {
    tokens: &'a [String],
    pos: usize,
    next_position: usize,
}

impl Reader<'_> {
    fn leaf(&mut self) -> UudNode {
        let node = UudNode::leaf(self.tokens[self.pos].clone(), self.next_position);
        self.next_position += 1;
        self.pos += 1;
        node
    }

    /// Read scope contents after an opening marker at `open`, consuming the
    /// closing marker.
    fn scope(&mut self, open: usize) -> Result<Vec<UudNode>, IrError> {
        let mut siblings: Vec<UudNode> = Vec::new();
        loop {
            let index = self.pos;
            let token = self
                .tokens
                .get(index)
                .ok_or(IrError::Unbalanced { index })?;
            match token.as_str() {
                CLOSE => {
                    self.pos += 1;
                    if siblings.is_empty() {
                        return Err(IrError::EmptyScope { index: open });
                    }
                    return Ok(siblings);
                }
                OPEN => {
                    self.pos += 1;
                    let children = self.scope(index)?;
                    match siblings.last_mut() {
                        Some(head) if head.children.is_empty() => head.children = children,
                        _ => return Err(IrError::HeadlessScope { index }),
                    }
                }
                _ => siblings.push(self.leaf()),
            }
        }
    }
}
