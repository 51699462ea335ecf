use thiserror::Error;

use super::ident::Ident;
use super::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("not typable: {0}")]
    NotTyped(String),
    #[error("unknown identifier {0}")]
    UnknownIdent(Ident),
    #[error("unbound variable #{0}")]
    UnboundVariable(usize),
    #[error("`{term}` is applied but has non-function type `{tp}`")]
    NotAFunction { term: Term, tp: Term },
    #[error("type mismatch: expected `{expected}`, found `{found}`")]
    Mismatch { expected: Term, found: Term },
    #[error("`{term}` needs an explicit witness to inhabit predicate subtype `{expected}`")]
    SubtypeWitnessMissing { term: Term, expected: Term },
    #[error("reduction budget of {0} steps exceeded")]
    ReductionDepthExceeded(usize),
    #[error("include cycle through {0}")]
    Cycle(Ident),
    #[error("predicate subtypes are not enabled for this meta-theory")]
    ExtensionDisabled,
    #[error("declaration {0} has neither type nor definiens")]
    Incomplete(Ident),
    #[error("{0} is declared twice")]
    Duplicate(Ident),
    #[error("theorem {0} carries no proof")]
    MissingProof(Ident),
    #[error("{0} may not carry this kind of proof")]
    UnexpectedProof(Ident),
    #[error("constant {0} has no assignment")]
    UnassignedConstant(Ident),
    #[error("{0} is not an axiom or theorem")]
    NotAnAssertion(Ident),
}

pub type KernelResult<T> = Result<T, KernelError>;
