//! Logical-framework kernel: de Bruijn terms, reduction, βδη-equality with
//! proof-irrelevant subtype witnesses, bidirectional typing, and checking of
//! theories relative to their meta-theory and includes.

mod error;
mod ident;
mod library;
mod term;
mod theory;
mod typing;

pub use error::{KernelError, KernelResult};
pub use ident::{Ident, IdentError};
pub use library::{
    Context, DeclKind, Declaration, Library, Metadata, Proof, ProofStyle, SourceRef, Theory,
};
pub use term::{Pretty, Term};
pub use theory::{
    check_library, check_theory, check_theory_with, flatten, library_signature, signature_of,
    theory_closure, CheckReport, DeclStatus, TheoryChecker,
};
pub use typing::{
    check, equal, infer, whnf, Kernel, KernelConfig, SigEntry, Signature, Sort,
    DEFAULT_REDUCTION_BUDGET,
};
