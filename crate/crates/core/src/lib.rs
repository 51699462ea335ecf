//! Proof-library interchange toolchain: a logical-framework kernel with
//! predicate subtypes and declaration patterns, built-in logic encodings,
//! importers for two prover export formats, an XML interchange format,
//! theory morphisms, and an RDF abstraction with dependency queries.

pub mod cli;
pub mod extensions;
pub mod importers;
pub mod kernel;
pub mod logic;
pub mod morphisms;
pub mod omdoc;
pub mod ontology;
pub mod xml;

pub use kernel::{Declaration, Ident, Library, Term, Theory};
