//! Bounded binary multicomplexes of free modules, their nilpotent
//! decorations, and degreewise morphisms between them.

mod binary;
mod graded_map;
mod grading;
mod morphism;
mod nil;

pub use binary::{
    check_acyclic, diagonal_direction, diagonal_embed, is_diagonal, multicomplex_direct_sum, tensor, validate,
    AcyclicityReport, BinaryMulticomplex, DiffPair, Differential, LineFailure, MulticomplexBuilder, MulticomplexError,
    ValidationReport, Violation, DEFAULT_MAX_DIM,
};
pub use graded_map::GradedMap;
pub use grading::{format_degree, parse_degree, GradingBox};
pub use morphism::{
    check_chain_iso, check_morphism, check_ses, identity_map, sum_inclusion, sum_projection, GradedObject,
    MorphismDefect, SesMap, SesMapDefect,
};
pub use nil::{
    decorate_zero_nil, forget_nil, nil_multicomplex_direct_sum, tensor_nil, transport_nil, validate_nil,
    NilBinaryMulticomplex, TransportError,
};
