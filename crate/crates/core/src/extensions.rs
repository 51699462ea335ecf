//! Declaration patterns with substitution-based elaboration, and schematic
//! declarations closed by the Pi-binder.

use thiserror::Error;

use crate::kernel::{
    signature_of, Context, DeclKind, Declaration, Ident, Kernel, KernelError, Library, Signature,
    Term,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("pattern {pattern} expects {expected} arguments, got {found}")]
    ArityMismatch {
        pattern: Ident,
        expected: usize,
        found: usize,
    },
    #[error("unknown pattern {0}")]
    UnknownPattern(Ident),
    #[error("ground instantiation supports one schematic variable, found {0}")]
    ArityUnsupported(usize),
    #[error("argument {index}: {source}")]
    Argument { index: usize, source: KernelError },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// A parameterized list of declaration templates. Templates refer to the
/// parameters as de Bruijn variables (last parameter is `Var(0)`) and to each
/// other by the identifiers `pattern.child(template)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub name: Ident,
    pub params: Context,
    pub body: Vec<Declaration>,
}

impl Pattern {
    pub fn arity(&self) -> usize {
        self.params.len()
    }

    /// Identifier for a template of this pattern.
    pub fn template(&self, local: &str) -> Ident {
        self.name
            .child(local)
            .unwrap_or_else(|e| panic!("invalid template name `{local}`: {e}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternInstance {
    pub name: Ident,
    pub pattern: Ident,
    pub args: Vec<Term>,
}

impl PatternInstance {
    /// Name of the declaration generated from template `template_local`.
    pub fn generated_name(&self, template_local: &str) -> Ident {
        let local = format!("{}/{}", self.name.name(), template_local);
        self.name
            .sibling(&local)
            .unwrap_or_else(|e| panic!("invalid generated name `{local}`: {e}"))
    }
}

/// Substitutes closed `args` for the parameters a term ranges over.
pub fn instantiate_params(t: &Term, args: &[Term]) -> Term {
    args.iter()
        .rev()
        .fold(t.clone(), |acc, arg| acc.instantiate(arg))
}

/// Elaborates `inst` in the signature of the theory it belongs to.
pub fn elaborate_pattern(
    lib: &Library,
    inst: &PatternInstance,
) -> Result<Vec<Declaration>, ExtensionError> {
    let pattern = lib
        .pattern(&inst.pattern)
        .ok_or_else(|| ExtensionError::UnknownPattern(inst.pattern.clone()))?;
    let owner = lib
        .theories
        .iter()
        .find(|t| inst.name.is_child_of(&t.name))
        .ok_or_else(|| KernelError::UnknownIdent(inst.name.clone()))?;
    let sig = signature_of(lib, &owner.name)?;
    elaborate_in(&Kernel::new(&sig), pattern, inst)
}

/// Elaboration against an explicit signature: every argument is checked
/// against its parameter type, then the templates are instantiated.
pub fn elaborate_in(
    kernel: &Kernel<'_>,
    pattern: &Pattern,
    inst: &PatternInstance,
) -> Result<Vec<Declaration>, ExtensionError> {
    if inst.args.len() != pattern.arity() {
        return Err(ExtensionError::ArityMismatch {
            pattern: pattern.name.clone(),
            expected: pattern.arity(),
            found: inst.args.len(),
        });
    }
    let ctx = Context::new();
    for (index, ((_, param_tp), arg)) in pattern.params.entries().iter().zip(&inst.args).enumerate()
    {
        let expected = instantiate_params(param_tp, &inst.args[..index]);
        kernel
            .check(&ctx, arg, &expected)
            .map_err(|source| ExtensionError::Argument { index, source })?;
    }
    Ok(substitute_templates(pattern, inst))
}

/// The substitution step of elaboration, without argument checking.
pub fn substitute_templates(pattern: &Pattern, inst: &PatternInstance) -> Vec<Declaration> {
    let rename = |id: &Ident| {
        if id.is_child_of(&pattern.name) {
            Some(Term::Const(inst.generated_name(id.name())))
        } else {
            None
        }
    };
    pattern
        .body
        .iter()
        .map(|tmpl| {
            let mut decl = tmpl.clone();
            decl.name = inst.generated_name(tmpl.name.name());
            for t in decl.terms_mut() {
                *t = instantiate_params(t, &inst.args).map_constants(&rename);
            }
            if let Some(crate::kernel::Proof::DependsOn(ids)) = &mut decl.proof {
                for id in ids.iter_mut() {
                    if id.is_child_of(&pattern.name) {
                        *id = inst.generated_name(id.name());
                    }
                }
            }
            decl.meta.kind = DeclKind::PatternInstance;
            decl.meta.origin = Some(inst.name.clone());
            decl
        })
        .collect()
}

/// A statement with implicitly universally bound schematic variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchematicDecl {
    pub vars: Context,
    pub statement: Term,
}

/// Pi-closure of a schematic statement, outermost variable first.
pub fn close_toplevel(sd: &SchematicDecl) -> Term {
    sd.vars
        .entries()
        .iter()
        .rev()
        .fold(sd.statement.clone(), |body, (hint, tp)| {
            Term::pi(hint, tp.clone(), body)
        })
}

/// Ground instances of a one-variable schema, in candidate order.
pub fn ground_instances(
    sd: &SchematicDecl,
    candidates: &[Term],
    limit: usize,
) -> Result<Vec<Term>, ExtensionError> {
    if sd.vars.len() != 1 {
        return Err(ExtensionError::ArityUnsupported(sd.vars.len()));
    }
    Ok(candidates
        .iter()
        .take(limit)
        .map(|c| sd.statement.instantiate(c))
        .collect())
}

/// Checks ground instances against `sig` as well as producing them.
pub fn checked_ground_instances(
    sig: &Signature,
    sd: &SchematicDecl,
    candidates: &[Term],
    limit: usize,
) -> Result<Vec<Term>, ExtensionError> {
    let kernel = Kernel::new(sig);
    let out = ground_instances(sd, candidates, limit)?;
    let (_, var_tp) = &sd.vars.entries()[0];
    for (index, c) in candidates.iter().take(limit).enumerate() {
        kernel
            .check(&Context::new(), c, var_tp)
            .map_err(|source| ExtensionError::Argument { index, source })?;
    }
    for t in &out {
        kernel.sort_of(&Context::new(), t)?;
    }
    Ok(out)
}
