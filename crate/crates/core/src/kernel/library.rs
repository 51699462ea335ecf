use std::fmt;

use super::ident::Ident;
use super::term::Term;
use crate::extensions::{Pattern, PatternInstance};
use crate::logic;
use crate::morphisms::Morphism;

/// Typing context, innermost entry last.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Context {
    entries: Vec<(String, Term)>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: Vec<(String, Term)>) -> Self {
        Context { entries }
    }

    pub fn push(&mut self, hint: &str, tp: Term) {
        self.entries.push((hint.to_string(), tp));
    }

    pub fn pop(&mut self) -> Option<(String, Term)> {
        self.entries.pop()
    }

    pub fn extended(&self, hint: &str, tp: Term) -> Context {
        let mut ctx = self.clone();
        ctx.push(hint, tp);
        ctx
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(String, Term)] {
        &self.entries
    }

    /// Type of `Var(index)`, shifted into the full context.
    pub fn lookup(&self, index: usize) -> Option<Term> {
        let pos = self.entries.len().checked_sub(index + 1)?;
        Some(self.entries[pos].1.shift(index as isize + 1, 0))
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|(h, _)| h.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Proof {
    Omitted,
    DependsOn(Vec<Ident>),
    ProofTerm(Term),
}

impl Proof {
    /// Builds a dependency-only proof, dropping repeated entries but keeping
    /// first-occurrence order.
    pub fn depends_on(ids: impl IntoIterator<Item = Ident>) -> Proof {
        let mut out: Vec<Ident> = Vec::new();
        for id in ids {
            if !out.contains(&id) {
                out.push(id);
            }
        }
        Proof::DependsOn(out)
    }

    pub fn style(&self) -> ProofStyle {
        match self {
            Proof::Omitted => ProofStyle::Omitted,
            Proof::DependsOn(_) => ProofStyle::DependsOn,
            Proof::ProofTerm(_) => ProofStyle::Term,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProofStyle {
    Omitted,
    DependsOn,
    Term,
}

impl ProofStyle {
    pub fn as_str(self) -> &'static str {
        match self {
            ProofStyle::Omitted => "omitted",
            ProofStyle::DependsOn => "dependsOn",
            ProofStyle::Term => "term",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "omitted" => Some(ProofStyle::Omitted),
            "dependsOn" => Some(ProofStyle::DependsOn),
            "term" => Some(ProofStyle::Term),
            _ => None,
        }
    }
}

/// Physical source location, 1-based, inclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceRef {
    pub file: String,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl SourceRef {
    /// Returns `None` when the end precedes the start.
    pub fn new(file: impl Into<String>, start: (u32, u32), end: (u32, u32)) -> Option<SourceRef> {
        if end < start {
            return None;
        }
        Some(SourceRef {
            file: file.into(),
            start_line: start.0,
            start_col: start.1,
            end_line: end.0,
            end_col: end.1,
        })
    }

    pub fn point(file: impl Into<String>, line: u32, col: u32) -> SourceRef {
        SourceRef::new(file, (line, col), (line, col)).expect("point range is ordered")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DeclKind {
    Type,
    Constant,
    Definition,
    Axiom,
    Theorem,
    PatternInstance,
}

impl DeclKind {
    pub const ALL: [DeclKind; 6] = [
        DeclKind::Type,
        DeclKind::Constant,
        DeclKind::Definition,
        DeclKind::Axiom,
        DeclKind::Theorem,
        DeclKind::PatternInstance,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DeclKind::Type => "type",
            DeclKind::Constant => "constant",
            DeclKind::Definition => "definition",
            DeclKind::Axiom => "axiom",
            DeclKind::Theorem => "theorem",
            DeclKind::PatternInstance => "patternInstance",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        DeclKind::ALL.into_iter().find(|k| k.as_str() == s)
    }

    pub fn is_assertion(self) -> bool {
        matches!(self, DeclKind::Axiom | DeclKind::Theorem)
    }

    /// Kinds a dependency-only proof may cite. Pattern-generated declarations
    /// count since patterns produce axioms.
    pub fn is_citable(self) -> bool {
        self.is_assertion() || self == DeclKind::PatternInstance
    }
}

impl fmt::Display for DeclKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metadata {
    pub source_ref: Option<SourceRef>,
    pub comments: Vec<String>,
    pub notation: Option<String>,
    pub kind: DeclKind,
    /// Pattern instance a generated declaration was elaborated from.
    pub origin: Option<Ident>,
}

impl Metadata {
    pub fn of_kind(kind: DeclKind) -> Self {
        Metadata {
            source_ref: None,
            comments: Vec::new(),
            notation: None,
            kind,
            origin: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Declaration {
    pub name: Ident,
    pub tp: Option<Term>,
    pub definiens: Option<Term>,
    pub proof: Option<Proof>,
    pub meta: Metadata,
}

impl Declaration {
    pub fn constant(name: Ident, tp: Term, kind: DeclKind) -> Self {
        Declaration {
            name,
            tp: Some(tp),
            definiens: None,
            proof: None,
            meta: Metadata::of_kind(kind),
        }
    }

    pub fn defined(name: Ident, tp: Option<Term>, definiens: Term) -> Self {
        Declaration {
            name,
            tp,
            definiens: Some(definiens),
            proof: None,
            meta: Metadata::of_kind(DeclKind::Definition),
        }
    }

    pub fn axiom(name: Ident, statement: Term) -> Self {
        Declaration::constant(name, statement, DeclKind::Axiom)
    }

    pub fn theorem(name: Ident, statement: Term, proof: Proof) -> Self {
        Declaration {
            proof: Some(proof),
            ..Declaration::constant(name, statement, DeclKind::Theorem)
        }
    }

    pub fn kind(&self) -> DeclKind {
        self.meta.kind
    }

    /// Every term carried by the declaration (type, definiens, proof term).
    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        let proof = match &self.proof {
            Some(Proof::ProofTerm(t)) => Some(t),
            _ => None,
        };
        self.tp.iter().chain(self.definiens.iter()).chain(proof)
    }

    pub(crate) fn terms_mut(&mut self) -> impl Iterator<Item = &mut Term> {
        let proof = match &mut self.proof {
            Some(Proof::ProofTerm(t)) => Some(t),
            _ => None,
        };
        self.tp
            .iter_mut()
            .chain(self.definiens.iter_mut())
            .chain(proof)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    pub name: Ident,
    pub meta_theory: Option<Ident>,
    pub includes: Vec<Ident>,
    pub decls: Vec<Declaration>,
    /// Pattern instances kept alongside their elaborated declarations.
    pub instances: Vec<PatternInstance>,
}

impl Theory {
    pub fn new(name: Ident, meta_theory: Option<Ident>) -> Self {
        Theory {
            name,
            meta_theory,
            includes: Vec::new(),
            decls: Vec::new(),
            instances: Vec::new(),
        }
    }

    /// Identifier for a symbol declared in this theory.
    pub fn symbol(&self, local: &str) -> Ident {
        self.name
            .child(local)
            .unwrap_or_else(|e| panic!("invalid local name `{local}`: {e}"))
    }

    pub fn decl(&self, name: &Ident) -> Option<&Declaration> {
        self.decls.iter().find(|d| &d.name == name)
    }

    pub fn decl_local(&self, local: &str) -> Option<&Declaration> {
        self.decls.iter().find(|d| d.name.name() == local)
    }

    pub fn push(&mut self, decl: Declaration) -> &mut Self {
        self.decls.push(decl);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Library {
    pub namespace: String,
    pub theories: Vec<Theory>,
    pub morphisms: Vec<Morphism>,
    pub patterns: Vec<Pattern>,
}

impl Library {
    pub fn new(namespace: impl Into<String>) -> Self {
        Library {
            namespace: namespace.into(),
            theories: Vec::new(),
            morphisms: Vec::new(),
            patterns: Vec::new(),
        }
    }

    /// Resolves a theory among the library's own theories, then among the
    /// built-in logic encodings.
    pub fn theory(&self, id: &Ident) -> Option<&Theory> {
        self.theories
            .iter()
            .find(|t| &t.name == id)
            .or_else(|| logic::builtin_theory(id))
    }

    pub fn own_theory(&self, id: &Ident) -> Option<&Theory> {
        self.theories.iter().find(|t| &t.name == id)
    }

    pub fn morphism(&self, id: &Ident) -> Option<&Morphism> {
        self.morphisms.iter().find(|m| &m.name == id)
    }

    pub fn pattern(&self, id: &Ident) -> Option<&Pattern> {
        self.patterns
            .iter()
            .find(|p| &p.name == id)
            .or_else(|| logic::builtin_pattern(id))
    }

    /// Finds the declaration with identifier `id` in any resolvable theory.
    pub fn declaration(&self, id: &Ident) -> Option<&Declaration> {
        let theory = self
            .theories
            .iter()
            .find(|t| id.is_child_of(&t.name))
            .or_else(|| {
                logic::builtin_theories()
                    .iter()
                    .find(|t| id.is_child_of(&t.name))
            })?;
        theory.decl(id)
    }

    pub fn declaration_count(&self) -> usize {
        self.theories.iter().map(|t| t.decls.len()).sum()
    }

    pub fn declarations(&self) -> impl Iterator<Item = &Declaration> {
        self.theories.iter().flat_map(|t| t.decls.iter())
    }
}
