//! Finite fragments of Grothendieck groups of acyclic binary
//! multicomplexes, plain and Nil-decorated.
//!
//! A ledger holds registered objects and verified relations (short exact
//! sequences, isomorphisms, diagonal objects) and decides whether two formal
//! sums agree modulo the integer lattice those relations span.

mod normalize;
mod object;
mod pair;
mod persist;
mod store;

pub use normalize::{
    normalize_nil_generator, verify_transcript, LedgerSide, NilPair, NormalizationTranscript, NormalizeOptions,
    TranscriptStep,
};
pub use object::{FormalSum, LedgerObject, ObjectKey};
pub use pair::{insert_zero_transform, EqualityRecord, EqualityWitness, InsertZero, LedgerPair, PairSide, SesMaps};
pub use persist::{
    decode_equality_witness, decode_formal_sum, decode_ledger_pair, decode_witness, encode_equality_witness,
    encode_formal_sum, encode_ledger_pair, encode_transcript, encode_witness, PersistError,
};
pub use store::{Derivation, Ledger, LedgerError, Relation, RelationKind, RelationWitness};
