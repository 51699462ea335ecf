use std::collections::{BTreeMap, HashSet};

use super::error::{KernelError, KernelResult};
use super::ident::Ident;
use super::library::{Context, DeclKind, Declaration, Library, Proof, ProofStyle, Theory};
use super::term::Term;
use super::typing::{Kernel, KernelConfig, Signature};
use crate::logic;

/// Theories reachable from `th` (meta-theory first, then includes in order,
/// then `th` itself), each exactly once, in first-visit post-order.
pub fn theory_closure<'a>(lib: &'a Library, th: &Ident) -> KernelResult<Vec<&'a Theory>> {
    fn visit<'a>(
        lib: &'a Library,
        id: &Ident,
        active: &mut Vec<Ident>,
        done: &mut HashSet<Ident>,
        out: &mut Vec<&'a Theory>,
    ) -> KernelResult<()> {
        if done.contains(id) {
            return Ok(());
        }
        if active.contains(id) {
            return Err(KernelError::Cycle(id.clone()));
        }
        let theory = lib
            .theory(id)
            .ok_or_else(|| KernelError::UnknownIdent(id.clone()))?;
        active.push(id.clone());
        for dep in theory.meta_theory.iter().chain(theory.includes.iter()) {
            visit(lib, dep, active, done, out)?;
        }
        active.pop();
        done.insert(id.clone());
        out.push(theory);
        Ok(())
    }
    let mut out = Vec::new();
    visit(lib, th, &mut Vec::new(), &mut HashSet::new(), &mut out)?;
    Ok(out)
}

/// All declarations visible in `th`: depth-first include resolution with
/// each theory contributing once, own declarations last.
pub fn flatten<'a>(lib: &'a Library, th: &Ident) -> KernelResult<Vec<&'a Declaration>> {
    Ok(theory_closure(lib, th)?
        .into_iter()
        .flat_map(|t| t.decls.iter())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclStatus {
    pub name: Ident,
    pub kind: DeclKind,
    pub proof: Option<ProofStyle>,
    pub result: Result<(), KernelError>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub subject: Ident,
    pub entries: Vec<DeclStatus>,
}

impl CheckReport {
    pub fn new(subject: Ident) -> Self {
        CheckReport {
            subject,
            entries: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.result.is_ok())
    }

    pub fn failures(&self) -> impl Iterator<Item = &DeclStatus> {
        self.entries.iter().filter(|e| e.result.is_err())
    }

    pub fn failed_count(&self) -> usize {
        self.failures().count()
    }

    pub fn status(&self, name: &Ident) -> Option<&DeclStatus> {
        self.entries.iter().find(|e| &e.name == name)
    }

    pub fn proof_histogram(&self) -> BTreeMap<&'static str, usize> {
        let mut hist = BTreeMap::from([("none", 0), ("omitted", 0), ("dependsOn", 0), ("term", 0)]);
        for e in &self.entries {
            let key = e.proof.map_or("none", ProofStyle::as_str);
            *hist.entry(key).or_default() += 1;
        }
        hist
    }
}

/// Incremental checker: declarations are checked in order against the
/// signature of everything accepted so far.
pub struct TheoryChecker<'l> {
    lib: &'l Library,
    sig: Signature,
    config: KernelConfig,
    assertions: BTreeMap<Ident, DeclKind>,
    own: HashSet<Ident>,
}

impl<'l> TheoryChecker<'l> {
    /// Starts from the trusted closure of `meta` and `includes`.
    pub fn new(
        lib: &'l Library,
        meta: Option<&Ident>,
        includes: &[Ident],
        config: KernelConfig,
    ) -> KernelResult<Self> {
        let mut checker = TheoryChecker {
            lib,
            sig: Signature::new(),
            config,
            assertions: BTreeMap::new(),
            own: HashSet::new(),
        };
        let mut seen = HashSet::new();
        for root in meta.into_iter().chain(includes) {
            for theory in theory_closure(lib, root)? {
                if !seen.insert(theory.name.clone()) {
                    continue;
                }
                if logic::enables_refinement(&theory.name) {
                    checker.sig.set_refinement(true);
                }
                for d in &theory.decls {
                    checker.trust(d);
                }
            }
        }
        Ok(checker)
    }

    pub fn for_theory(
        lib: &'l Library,
        theory: &Theory,
        config: KernelConfig,
    ) -> KernelResult<Self> {
        // Surface include cycles through this theory before anything else.
        theory_closure(lib, &theory.name)?;
        let mut checker =
            TheoryChecker::new(lib, theory.meta_theory.as_ref(), &theory.includes, config)?;
        if logic::enables_refinement(&theory.name) {
            checker.sig.set_refinement(true);
        }
        for d in &theory.decls {
            if d.kind().is_citable() {
                checker.assertions.insert(d.name.clone(), d.kind());
            }
        }
        Ok(checker)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn kernel(&self) -> Kernel<'_> {
        Kernel::with_config(&self.sig, self.config)
    }

    fn trust(&mut self, d: &Declaration) {
        let tp = match (&d.tp, &d.definiens) {
            (Some(tp), _) => Some(tp.clone()),
            (None, Some(def)) => self.kernel().infer(&Context::new(), def).ok(),
            (None, None) => None,
        };
        if let Some(tp) = tp {
            self.sig
                .insert(d.name.clone(), tp, d.definiens.clone(), d.kind());
        }
        if d.kind().is_citable() {
            self.assertions.insert(d.name.clone(), d.kind());
        }
    }

    /// Checks one declaration; on success (or when only its proof is at
    /// fault) the declaration joins the signature.
    pub fn check_decl(&mut self, d: &Declaration) -> KernelResult<()> {
        if !self.own.insert(d.name.clone()) || self.sig.contains(&d.name) {
            return Err(KernelError::Duplicate(d.name.clone()));
        }
        let ctx = Context::new();
        let kernel = self.kernel();
        let tp = match (&d.tp, &d.definiens) {
            (None, None) => return Err(KernelError::Incomplete(d.name.clone())),
            (Some(tp), def) => {
                kernel.sort_of(&ctx, tp)?;
                if let Some(def) = def {
                    kernel.check(&ctx, def, tp)?;
                }
                tp.clone()
            }
            (None, Some(def)) => kernel.infer(&ctx, def)?,
        };
        let proof_result = self.check_proof(d, &tp);
        if d.kind().is_citable() {
            self.assertions.insert(d.name.clone(), d.kind());
        }
        self.sig
            .insert(d.name.clone(), tp, d.definiens.clone(), d.kind());
        proof_result
    }

    fn check_proof(&self, d: &Declaration, tp: &Term) -> KernelResult<()> {
        match (d.kind(), &d.proof) {
            (DeclKind::Theorem, None) => Err(KernelError::MissingProof(d.name.clone())),
            (DeclKind::Axiom, None | Some(Proof::Omitted)) => Ok(()),
            (DeclKind::Theorem | DeclKind::PatternInstance, Some(proof)) => match proof {
                Proof::Omitted => Ok(()),
                Proof::ProofTerm(p) => self.kernel().check(&Context::new(), p, tp),
                Proof::DependsOn(ids) => self.check_dependencies(ids),
            },
            (_, None) => Ok(()),
            (_, Some(_)) => Err(KernelError::UnexpectedProof(d.name.clone())),
        }
    }

    fn check_dependencies(&self, ids: &[Ident]) -> KernelResult<()> {
        // A morphism named among the dependencies licenses references to the
        // assertions of its source theory (provenance of installed theorems).
        let mut via_morphism: HashSet<&Ident> = HashSet::new();
        let mut morphism_sources = Vec::new();
        for id in ids {
            if let Some(m) = self.lib.morphism(id) {
                via_morphism.insert(id);
                morphism_sources.push(&m.from);
            }
        }
        let mut source_assertions = HashSet::new();
        for src in morphism_sources {
            for d in flatten(self.lib, src)? {
                if d.kind().is_citable() {
                    source_assertions.insert(&d.name);
                }
            }
        }
        for id in ids {
            if via_morphism.contains(id)
                || self.assertions.contains_key(id)
                || source_assertions.contains(id)
            {
                continue;
            }
            return Err(match self.sig.get(id) {
                Some(_) => KernelError::NotAnAssertion(id.clone()),
                None => KernelError::UnknownIdent(id.clone()),
            });
        }
        Ok(())
    }
}

/// Checks the declarations of `th` in order, collecting per-declaration
/// results. Included theories are trusted.
pub fn check_theory(lib: &Library, th: &Ident) -> KernelResult<CheckReport> {
    check_theory_with(lib, th, KernelConfig::default())
}

pub fn check_theory_with(
    lib: &Library,
    th: &Ident,
    config: KernelConfig,
) -> KernelResult<CheckReport> {
    let theory = lib
        .theory(th)
        .ok_or_else(|| KernelError::UnknownIdent(th.clone()))?;
    let mut checker = TheoryChecker::for_theory(lib, theory, config)?;
    let mut report = CheckReport::new(th.clone());
    for d in &theory.decls {
        report.entries.push(DeclStatus {
            name: d.name.clone(),
            kind: d.kind(),
            proof: d.proof.as_ref().map(Proof::style),
            result: checker.check_decl(d),
        });
    }
    Ok(report)
}

/// Signature of everything visible in `th`, trusting all declarations.
pub fn signature_of(lib: &Library, th: &Ident) -> KernelResult<Signature> {
    let theory = lib
        .theory(th)
        .ok_or_else(|| KernelError::UnknownIdent(th.clone()))?;
    let mut checker = TheoryChecker::new(lib, Some(th), &[], KernelConfig::default())?;
    if logic::enables_refinement(&theory.name) {
        checker.sig.set_refinement(true);
    }
    Ok(checker.sig)
}

/// Signature of every theory in the library plus the built-in logics.
pub fn library_signature(lib: &Library) -> KernelResult<Signature> {
    let roots: Vec<Ident> = logic::builtin_theories()
        .iter()
        .chain(lib.theories.iter())
        .map(|t| t.name.clone())
        .collect();
    let checker = TheoryChecker::new(lib, None, &roots, KernelConfig::default())?;
    Ok(checker.sig)
}

/// Checks every theory of the library in include order.
pub fn check_library(lib: &Library, config: KernelConfig) -> KernelResult<Vec<CheckReport>> {
    lib.theories
        .iter()
        .map(|t| check_theory_with(lib, &t.name, config))
        .collect()
}
