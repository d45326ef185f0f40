//! Content-word dependency trees as a linearized intermediate
//! representation for two-stage text generation.
//!
//! The crate covers the data side of a planner/realizer pipeline:
//!
//! * [`conllu`] reads and writes dependency parses.
//! * [`uud`] prunes a parse down to its content words.
//! * [`ir`] turns content-word trees into token sequences with scope
//!   markers and back.
//! * [`e2e`] handles meaning representations, delexicalization and the
//!   training pairs for both models.
//! * [`corpus`] has the tokenizer, vocabulary and augmentation filter.
//! * [`metrics`] scores generated text with BLEU, NIST, METEOR-lite,
//!   ROUGE-L and CIDEr-D.
//! * [`prepare`] assembles training pairs from a dataset and its parses.
//! * [`lint`] checks generated text against its IR for dropped or
//!   repeated words.
//!
//! ```
//! use uudnlg::conllu::parse_conllu;
//! use uudnlg::ir::linearize;
//! use uudnlg::uud::{convert, PruneRules};
//!
//! let text = "\
//! 1\tdo\tdo\tAUX\t_\t_\t3\taux\t_\t_
//! 2\tnot\tnot\tPART\t_\tPolarity=Neg\t3\tadvmod\t_\t_
//! 3\tgo\tgo\tVERB\t_\t_\t0\troot\t_\t_
//! 4\tto\tto\tADP\t_\t_\t5\tcase\t_\t_
//! 5\txname\txname\tPROPN\t_\t_\t3\tobl\t_\t_
//! 6\tnear\tnear\tADP\t_\t_\t7\tcase\t_\t_
//! 7\triverside\triverside\tNOUN\t_\t_\t3\tobl\t_\t_
//! 8\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_
//! ";
//! let sentence = &parse_conllu(text)?[0];
//! let tree = convert(sentence, &sentence.to_tree(), &PruneRules::default())?;
//! assert_eq!(linearize(&tree).render(), "go _( not xname riverside )_");
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod conllu;
pub mod corpus;
pub mod e2e;
pub mod ir;
pub mod lint;
pub mod metrics;
pub mod prepare;
pub mod uud;

pub use conllu::{parse_conllu, serialize_conllu, DepTree, Sentence, Token};
pub use ir::{delinearize, linearize, parse_ir, IrSequence};
pub use uud::{convert, PruneRules, UudNode, UudTree};
