//! Certificate-producing computations in Nil categories of nilpotent
//! endomorphisms over computable principal ideal domains: kernel-filtration
//! vanishing certificates, acyclic binary multicomplexes with nilpotent
//! decorations, and finite relation ledgers for their Grothendieck groups.

pub mod codec;
pub mod complexes;
pub mod ledger;
pub mod multicomplex;
pub mod nil_category;
pub mod pid_modules;
pub mod ring_core;
