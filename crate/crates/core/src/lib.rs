//! Exact construction, verification and classification of charge-conserving
//! representations of the loop braid category.
//!
//! A representation at rank `N` is a pair `(S, R)` of charge-conserving
//! operators on `C^N ⊗ C^N`, each stored as an [`AlphaForm`]: `N` vertex
//! scalars plus one 2×2 block per edge of the complete graph on `1..=N`.
//! All arithmetic is over the Gaussian rationals, so every check is an exact
//! equality.

pub mod classifier;
pub mod combinatorics;
pub mod error;
pub mod exec;
pub mod matchcat;
pub mod recipe;
pub mod relations;
pub mod scalars;

pub use classifier::{
    canonicalize, edge_type, interrogate, interrogate_with, x_equivalent, Canonical,
    Classification, EdgeType,
};
pub use combinatorics::{
    canonical_labelling, compose_permutations, count_series, enum_compositions2, enum_labelled,
    enum_labelled_with, enum_multisets, enum_signed, invert_permutation, perm_action, shape_of,
    Composition2, LabelledShape, Multiset, Nation, Residence, Sign, SignedShape,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use matchcat::{
    alpha_to_dense, antitranspose, block, dense_to_alpha, flat_index, gauge_pair,
    gauge_transform, is_charge_conserving, kron, monomial_decompose, perm_p, restrict,
    scalar_block, shift_embed, swap_block, swap_diagonal, word_of, AlphaForm, Block, DenseMatrix,
    Gauge, Pair,
};
pub use recipe::{
    anof_solution, make_recipe, n2_family, n2_tag, permute_point, random_point, AnofCase,
    N2Family, N2Tag, NationParams, PairEntry, PairParams, ParamPoint,
};
pub use relations::{
    anomaly, anomaly_with, cubic_residuals, search_extension, verify_pair, verify_pair_with,
    Extension, ExtensionKind, Failure, Method, Relation, RelationReport, Residual,
    TripleResiduals, MAX_FAILURES_PER_RELATION,
};
pub use scalars::{parse_rational, render_rational, ExactComplex, Rational};
