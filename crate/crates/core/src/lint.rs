//! IR coverage linting: does generated text realize every content word of
//! its IR exactly as often as the IR has it?
//!
//! Words that are not in the IR (determiners, prepositions, punctuation and
//! so on) are never flagged. Positions are not compared.

use std::collections::HashMap;
use std::fmt;

use crate::ir::IrSequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    /// IR tokens realized fewer times than they occur in the IR.
    pub missing: Vec<String>,
    /// IR tokens realized more often than the IR count plus the allowance.
    pub repeated: Vec<String>,
    pub verdict: Verdict,
}

impl fmt::Display for CoverageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\tmissing={}\trepeated={}",
            self.verdict,
            self.missing.join(","),
            self.repeated.join(",")
        )
    }
}

/// Compare the IR's content words with generated tokens as multisets.
///
/// Tokens are reported once each, in order of first appearance in the IR.
pub fn lint_coverage(ir: &IrSequence, generated: &[String], allowance: usize) -> CoverageReport {
    let mut generated_counts: HashMap<&str, usize> = HashMap::new();
    for token in generated {
        *generated_counts.entry(token.as_str()).or_insert(0) += 1;
    }

    let mut ir_counts: Vec<(&str, usize)> = Vec::new();
    for form in ir.forms() {
        match ir_counts.iter_mut().find(|(f, _)| *f == form) {
            Some((_, count)) => *count += 1,
            None => ir_counts.push((form, 1)),
        }
    }

    let mut missing = Vec::new();
    let mut repeated = Vec::new();
    for (form, expected) in ir_counts {
        let found = generated_counts.get(form).copied().unwrap_or(0);
        if found < expected {
            missing.push(form.to_owned());
        } else if found > expected + allowance {
            repeated.push(form.to_owned());
        }
    }

    let verdict = if missing.is_empty() && repeated.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };

    CoverageReport {
        missing,
        repeated,
        verdict,
    }
}
