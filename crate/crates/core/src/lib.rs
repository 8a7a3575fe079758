//! Verification, equivalence testing, enumeration and mutation of
//! unextendible orthogonal matrices (UOMs): the integer-label form of
//! multiqubit unextendible product bases.

pub mod canon;
pub mod catalog;
pub mod enumerate;
pub mod equivalence;
pub mod error;
pub mod extend;
pub mod feature;
pub mod format;
pub mod matrix;
pub mod mutation;

pub use canon::canonical_form;
pub use catalog::{existence, known_uoms, min_size, Existence};
pub use enumerate::{enumerate_uoms, EnumerationOptions, EnumerationReport, FeatureCandidate, Status};
pub use equivalence::{are_equivalent, Verdict};
pub use error::{Result, UomError};
pub use extend::{check_sequences, find_extension, is_uom, ExtensionWitness, KillSequence};
pub use feature::{column_feature, feature_list, ColumnFeature, FeatureList, PairCount};
pub use matrix::{are_orthogonal_labels, partner, Label, Uom};
pub use mutation::{apply_swap, find_swap_sites, SwapSite};
