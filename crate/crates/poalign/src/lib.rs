//! Alignments of totally and partially ordered sets as first-class
//! values: build posets, align them, validate the alignment axioms,
//! decompose alignments into rows and blocks, treat pairwise alignments
//! as composable relations, and cross-check everything against
//! exhaustive oracles at desk scale.
//!
//! The `examples/` directory of this crate is the guided tour: one
//! runnable program per capability. A thin `poalign` binary exposes the
//! same operations on line-oriented text files.
//!
//! # Quick start
//!
//! ```
//! use poalign::poset::Poset;
//! use poalign::scoring::ScoringScheme;
//! use poalign::dp::align_pair_cross;
//!
//! let b = Poset::from_sequence("B", "000011011");
//! let c = Poset::from_sequence("C", "100010000");
//! let (score, _alignment) = align_pair_cross(&b, &c, &ScoringScheme::default()).unwrap();
//! assert_eq!(score, 5);
//! ```

pub mod order;
pub mod poset;
pub mod alignment;
pub mod validate;
pub mod decompose;
pub mod relations;
pub mod scoring;
pub mod dp;
pub mod oracle;
pub mod io;

pub use alignment::{induce_column_order, Alignment, AlignmentError, Column, ColumnFlag};
pub use order::StrictOrder;
pub use poset::{Antichain, BottomSet, Poset, PosetError};
pub use scoring::ScoringScheme;
