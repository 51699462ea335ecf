//! Theory morphisms: homomorphic translation, the typing condition on
//! assignments, and installation of translated theorems into a conservative
//! extension of the target theory.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::kernel::{
    flatten, theory_closure, CheckReport, Context, DeclKind, DeclStatus, Declaration, Ident,
    Kernel, KernelError, Library, Proof, Term, Theory, TheoryChecker,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("constant {0} has no assignment")]
    UnassignedConstant(Ident),
    #[error("morphism {0} does not type-check")]
    IllTyped(Ident),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub name: Ident,
    pub from: Ident,
    pub to: Ident,
    pub assignments: BTreeMap<Ident, Term>,
}

impl Morphism {
    pub fn new(name: Ident, from: Ident, to: Ident) -> Self {
        Morphism {
            name,
            from,
            to,
            assignments: BTreeMap::new(),
        }
    }

    pub fn assign(&mut self, source: Ident, target: Term) -> &mut Self {
        self.assignments.insert(source, target);
        self
    }

    /// The identity on `theory`: every non-meta constant maps to itself.
    /// Theorems are left out like in any other morphism, so identities
    /// compose.
    pub fn identity(lib: &Library, name: Ident, theory: &Ident) -> Result<Morphism, MorphismError> {
        let mut m = Morphism::new(name, theory.clone(), theory.clone());
        let meta = meta_constants(lib, theory)?;
        for d in flatten(lib, theory)? {
            if !meta.contains(&d.name) && d.kind() != DeclKind::Theorem {
                m.assign(d.name.clone(), Term::Const(d.name.clone()));
            }
        }
        Ok(m)
    }
}

/// Constants of the logic the source theory is written in; every morphism
/// fixes them.
fn meta_constants(lib: &Library, theory: &Ident) -> Result<HashSet<Ident>, KernelError> {
    let th = lib
        .theory(theory)
        .ok_or_else(|| KernelError::UnknownIdent(theory.clone()))?;
    let mut out = HashSet::new();
    if let Some(meta) = &th.meta_theory {
        for d in flatten(lib, meta)? {
            out.insert(d.name.clone());
        }
    }
    Ok(out)
}

/// Precomputed translation data for one morphism.
pub struct Translator<'a> {
    morphism: &'a Morphism,
    definitions: HashMap<Ident, Term>,
    meta: HashSet<Ident>,
}

impl<'a> Translator<'a> {
    pub fn new(lib: &Library, morphism: &'a Morphism) -> Result<Self, MorphismError> {
        let meta = meta_constants(lib, &morphism.from)?;
        let definitions = flatten(lib, &morphism.from)?
            .into_iter()
            .filter(|d| !meta.contains(&d.name))
            .filter_map(|d| d.definiens.clone().map(|def| (d.name.clone(), def)))
            .collect();
        Ok(Translator {
            morphism,
            definitions,
            meta,
        })
    }

    pub fn translate(&self, t: &Term) -> Result<Term, MorphismError> {
        Ok(match t {
            Term::Const(c) => {
                if let Some(target) = self.morphism.assignments.get(c) {
                    target.clone()
                } else if let Some(def) = self.definitions.get(c) {
                    self.translate(def)?
                } else if self.meta.contains(c) {
                    t.clone()
                } else {
                    return Err(MorphismError::UnassignedConstant(c.clone()));
                }
            }
            Term::Var(_) | Term::Type => t.clone(),
            Term::Apply(f, a) => Term::app(self.translate(f)?, self.translate(a)?),
            Term::Lambda(x, a, b) => Term::lam(x, self.translate(a)?, self.translate(b)?),
            Term::Pi(x, a, b) => Term::pi(x, self.translate(a)?, self.translate(b)?),
            Term::SubType(a, b) => Term::sub_type(self.translate(a)?, self.translate(b)?),
            Term::SubIn(a, b) => Term::sub_in(self.translate(a)?, self.translate(b)?),
            Term::SubOut(a) => Term::sub_out(self.translate(a)?),
        })
    }
}

pub fn translate(lib: &Library, m: &Morphism, t: &Term) -> Result<Term, MorphismError> {
    Translator::new(lib, m)?.translate(t)
}

/// `second ∘ first`: assignments of `first` translated along `second`.
pub fn compose(
    lib: &Library,
    name: Ident,
    first: &Morphism,
    second: &Morphism,
) -> Result<Morphism, MorphismError> {
    let along = Translator::new(lib, second)?;
    let mut m = Morphism::new(name, first.from.clone(), second.to.clone());
    for (c, t) in &first.assignments {
        m.assign(c.clone(), along.translate(t)?);
    }
    Ok(m)
}

/// Checks every assignment `c := t` with `c : A` against `translate(A)` in
/// the target theory, and reports undefined source constants left
/// unassigned.
pub fn check_morphism(lib: &Library, m: &Morphism) -> Result<CheckReport, MorphismError> {
    let target = lib
        .theory(&m.to)
        .ok_or_else(|| KernelError::UnknownIdent(m.to.clone()))?;
    theory_closure(lib, &m.from)?;
    let translator = Translator::new(lib, m)?;
    let checker = TheoryChecker::new(lib, Some(&target.name), &[], Default::default())?;
    let kernel: Kernel<'_> = checker.kernel();
    let mut report = CheckReport::new(m.name.clone());
    for d in flatten(lib, &m.from)? {
        if translator.meta.contains(&d.name) {
            continue;
        }
        let assigned = m.assignments.get(&d.name);
        if assigned.is_none() && !needs_assignment(d) {
            continue;
        }
        let result = match (assigned, &d.tp) {
            (None, _) => Err(KernelError::UnassignedConstant(d.name.clone())),
            (Some(_), None) => Ok(()),
            (Some(t), Some(tp)) => match translator.translate(tp) {
                Ok(expected) => kernel.check(&Context::new(), t, &expected),
                Err(MorphismError::UnassignedConstant(c)) => {
                    Err(KernelError::UnassignedConstant(c))
                }
                Err(MorphismError::Kernel(e)) => Err(e),
                Err(e @ MorphismError::IllTyped(_)) => unreachable!("{e}"),
            },
        };
        report.entries.push(DeclStatus {
            name: d.name.clone(),
            kind: d.kind(),
            proof: None,
            result,
        });
    }
    Ok(report)
}

/// Defined constants translate through their definiens and theorems follow
/// from the translated axioms; everything else must be assigned.
fn needs_assignment(d: &Declaration) -> bool {
    d.definiens.is_none() && d.kind() != DeclKind::Theorem
}

/// Source constants that need an assignment but lack one.
pub fn unassigned(lib: &Library, m: &Morphism) -> Result<Vec<Ident>, MorphismError> {
    let meta = meta_constants(lib, &m.from)?;
    Ok(flatten(lib, &m.from)?
        .into_iter()
        .filter(|d| !meta.contains(&d.name) && needs_assignment(d))
        .filter(|d| !m.assignments.contains_key(&d.name))
        .map(|d| d.name.clone())
        .collect())
}

/// Builds `T_m`: includes the target and holds, for every source theorem
/// `th`, the declaration `m/th : translate(type of th)` justified by
/// `DependsOn([th, m])`.
pub fn install_morphism(lib: &Library, m: &Morphism) -> Result<Theory, MorphismError> {
    if let Some(c) = unassigned(lib, m)?.into_iter().next() {
        return Err(MorphismError::UnassignedConstant(c));
    }
    let report = check_morphism(lib, m)?;
    if !report.passed() {
        return Err(MorphismError::IllTyped(m.name.clone()));
    }
    let target = lib
        .theory(&m.to)
        .ok_or_else(|| KernelError::UnknownIdent(m.to.clone()))?;
    let name = target
        .name
        .sibling(&format!("{}_{}", target.name.name(), m.name.name()))
        .map_err(|_| KernelError::UnknownIdent(m.to.clone()))?;
    let mut installed = Theory::new(name, target.meta_theory.clone());
    installed.includes.push(target.name.clone());
    let translator = Translator::new(lib, m)?;
    for d in flatten(lib, &m.from)? {
        if d.kind() != DeclKind::Theorem || translator.meta.contains(&d.name) {
            continue;
        }
        let Some(tp) = &d.tp else { continue };
        let local = format!("{}/{}", m.name.name(), d.name.name());
        let mut decl = Declaration::theorem(
            installed.symbol(&local),
            translator.translate(tp)?,
            Proof::depends_on([d.name.clone(), m.name.clone()]),
        );
        decl.meta.comments = d.meta.comments.clone();
        installed.push(decl);
    }
    Ok(installed)
}
