//! Runs the code listings of the book in `book/src` as doctests, one
//! module per chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/conllu.md")]
pub mod conllu {}
#[doc = include_str!("../../../book/src/content-words.md")]
pub mod content_words {}
#[doc = include_str!("../../../book/src/linearization.md")]
pub mod linearization {}
#[doc = include_str!("../../../book/src/e2e-data.md")]
pub mod e2e_data {}
#[doc = include_str!("../../../book/src/filtering.md")]
pub mod filtering {}
#[doc = include_str!("../../../book/src/metrics.md")]
pub mod metrics {}
#[doc = include_str!("../../../book/src/linting.md")]
pub mod linting {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
