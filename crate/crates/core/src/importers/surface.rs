//! Surface terms of the HOL-like export, simple-type inference by
//! first-order unification, and elaboration into the Church encoding (fully
//! annotated `app A B`, `lam A B`, `forall A`) or the Curry encoding.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::kernel::{Ident, Term};
use crate::logic::LogicId;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SurfaceType {
    Base(String),
    Arrow(Box<SurfaceType>, Box<SurfaceType>),
    /// Unification variable; never present in importer output.
    Meta(u32),
}

impl SurfaceType {
    pub fn base(name: &str) -> Self {
        SurfaceType::Base(name.to_string())
    }

    pub fn arrow(a: SurfaceType, b: SurfaceType) -> Self {
        SurfaceType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn bool() -> Self {
        SurfaceType::base(BOOL)
    }

    pub fn has_meta(&self) -> bool {
        match self {
            SurfaceType::Meta(_) => true,
            SurfaceType::Base(_) => false,
            SurfaceType::Arrow(a, b) => a.has_meta() || b.has_meta(),
        }
    }
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceType::Base(b) => f.write_str(b),
            SurfaceType::Meta(m) => write!(f, "?{m}"),
            SurfaceType::Arrow(a, b) => match **a {
                SurfaceType::Arrow(..) => write!(f, "({a}) -> {b}"),
                _ => write!(f, "{a} -> {b}"),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinderKind {
    Forall,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SurfaceTerm {
    Name(String),
    App(Box<SurfaceTerm>, Box<SurfaceTerm>),
    Abs {
        var: String,
        annot: Option<SurfaceType>,
        body: Box<SurfaceTerm>,
    },
    Binder {
        kind: BinderKind,
        var: String,
        annot: Option<SurfaceType>,
        body: Box<SurfaceTerm>,
    },
}

impl SurfaceTerm {
    pub fn name(n: &str) -> Self {
        SurfaceTerm::Name(n.to_string())
    }

    pub fn app(f: SurfaceTerm, a: SurfaceTerm) -> Self {
        SurfaceTerm::App(Box::new(f), Box::new(a))
    }

    pub fn abs(var: &str, annot: Option<SurfaceType>, body: SurfaceTerm) -> Self {
        SurfaceTerm::Abs {
            var: var.to_string(),
            annot,
            body: Box::new(body),
        }
    }

    pub fn forall(var: &str, annot: Option<SurfaceType>, body: SurfaceTerm) -> Self {
        SurfaceTerm::Binder {
            kind: BinderKind::Forall,
            var: var.to_string(),
            annot,
            body: Box::new(body),
        }
    }

    pub fn application_count(&self) -> usize {
        match self {
            SurfaceTerm::Name(_) => 0,
            SurfaceTerm::App(f, a) => 1 + f.application_count() + a.application_count(),
            SurfaceTerm::Abs { body, .. } | SurfaceTerm::Binder { body, .. } => {
                body.application_count()
            }
        }
    }
}

/// Base type of propositions.
pub const BOOL: &str = "bool'";
/// Built-in implication, `bool' -> bool' -> bool'`.
pub const IMPL: &str = "impl";
/// Built-in polymorphic equality, `A -> A -> bool'`.
pub const EQ: &str = "eq";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferError {
    #[error("cannot unify `{left}` with `{right}` in {location}")]
    UnificationFailure {
        left: String,
        right: String,
        location: String,
    },
    #[error("no principal ground type for `{0}`")]
    AmbiguousType(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("unknown base type `{0}`")]
    UnknownType(String),
}

/// Names visible to inference: base types and typed constants, each with
/// the framework identifier it elaborates to.
#[derive(Debug, Clone, Default)]
pub struct TypingEnv {
    base_types: HashMap<String, Ident>,
    constants: HashMap<String, (Ident, SurfaceType)>,
    builtins: bool,
}

impl TypingEnv {
    /// Empty environment without `bool'`, `impl`, or `eq`.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Environment with the HOL built-ins.
    pub fn hol() -> Self {
        let mut env = TypingEnv {
            builtins: true,
            ..Default::default()
        };
        env.base_types
            .insert(BOOL.to_string(), LogicId::HolChurch.symbol(BOOL));
        env
    }

    pub fn declare_type(&mut self, name: &str, id: Ident) {
        self.base_types.insert(name.to_string(), id);
    }

    pub fn declare_constant(&mut self, name: &str, id: Ident, tp: SurfaceType) {
        self.constants.insert(name.to_string(), (id, tp));
    }

    pub fn constant(&self, name: &str) -> Option<&(Ident, SurfaceType)> {
        self.constants.get(name)
    }

    pub fn base_type(&self, name: &str) -> Option<&Ident> {
        self.base_types.get(name)
    }

    pub fn check_type(&self, t: &SurfaceType) -> Result<(), InferError> {
        match t {
            SurfaceType::Base(b) if self.base_types.contains_key(b) => Ok(()),
            SurfaceType::Base(b) => Err(InferError::UnknownType(b.clone())),
            SurfaceType::Arrow(a, b) => {
                self.check_type(a)?;
                self.check_type(b)
            }
            SurfaceType::Meta(m) => Err(InferError::AmbiguousType(format!("?{m}"))),
        }
    }

    /// Church encoding of a ground type as a `tp` term.
    pub fn church_type(&self, t: &SurfaceType) -> Result<Term, InferError> {
        Ok(match t {
            SurfaceType::Base(b) => Term::Const(
                self.base_types
                    .get(b)
                    .cloned()
                    .ok_or_else(|| InferError::UnknownType(b.clone()))?,
            ),
            SurfaceType::Arrow(a, b) => Term::apps(
                LogicId::HolChurch.constant("arrow"),
                [self.church_type(a)?, self.church_type(b)?],
            ),
            SurfaceType::Meta(m) => return Err(InferError::AmbiguousType(format!("?{m}"))),
        })
    }
}

/// Inference result with binder and application types recorded.
#[derive(Debug, Clone)]
enum Typed {
    Local(usize),
    Const(Ident),
    Impl,
    Eq(SurfaceType),
    App {
        f: Box<Typed>,
        a: Box<Typed>,
        dom: SurfaceType,
        cod: SurfaceType,
    },
    Abs {
        var: String,
        dom: SurfaceType,
        cod: SurfaceType,
        body: Box<Typed>,
    },
    Forall {
        var: String,
        dom: SurfaceType,
        body: Box<Typed>,
    },
}

#[derive(Default)]
struct Unifier {
    solution: Vec<Option<SurfaceType>>,
}

impl Unifier {
    fn fresh(&mut self) -> SurfaceType {
        self.solution.push(None);
        SurfaceType::Meta(self.solution.len() as u32 - 1)
    }

    fn resolve(&self, t: &SurfaceType) -> SurfaceType {
        match t {
            SurfaceType::Meta(m) => match &self.solution[*m as usize] {
                Some(s) => self.resolve(s),
                None => t.clone(),
            },
            SurfaceType::Base(_) => t.clone(),
            SurfaceType::Arrow(a, b) => SurfaceType::arrow(self.resolve(a), self.resolve(b)),
        }
    }

    fn occurs(&self, m: u32, t: &SurfaceType) -> bool {
        match self.resolve(t) {
            SurfaceType::Meta(n) => n == m,
            SurfaceType::Base(_) => false,
            SurfaceType::Arrow(a, b) => self.occurs(m, &a) || self.occurs(m, &b),
        }
    }

    fn unify(
        &mut self,
        a: &SurfaceType,
        b: &SurfaceType,
        location: &dyn Fn() -> String,
    ) -> Result<(), InferError> {
        let (a, b) = (self.resolve(a), self.resolve(b));
        let fail = |a: &SurfaceType, b: &SurfaceType| InferError::UnificationFailure {
            left: a.to_string(),
            right: b.to_string(),
            location: location(),
        };
        match (&a, &b) {
            (SurfaceType::Meta(m), SurfaceType::Meta(n)) if m == n => Ok(()),
            (SurfaceType::Meta(m), other) | (other, SurfaceType::Meta(m)) => {
                if self.occurs(*m, other) {
                    return Err(fail(&a, &b));
                }
                self.solution[*m as usize] = Some(other.clone());
                Ok(())
            }
            (SurfaceType::Base(x), SurfaceType::Base(y)) if x == y => Ok(()),
            (SurfaceType::Arrow(a1, b1), SurfaceType::Arrow(a2, b2)) => {
                self.unify(a1, a2, location)?;
                self.unify(b1, b2, location)
            }
            _ => Err(fail(&a, &b)),
        }
    }
}

struct Inference<'e> {
    env: &'e TypingEnv,
    unifier: Unifier,
}

impl Inference<'_> {
    fn infer(
        &mut self,
        locals: &mut Vec<(String, SurfaceType)>,
        t: &SurfaceTerm,
    ) -> Result<(Typed, SurfaceType), InferError> {
        match t {
            SurfaceTerm::Name(n) => {
                if let Some(pos) = locals.iter().rposition(|(x, _)| x == n) {
                    return Ok((Typed::Local(locals.len() - 1 - pos), locals[pos].1.clone()));
                }
                if let Some((id, tp)) = self.env.constants.get(n) {
                    return Ok((Typed::Const(id.clone()), tp.clone()));
                }
                if self.env.builtins && n == IMPL {
                    let b = SurfaceType::bool();
                    return Ok((
                        Typed::Impl,
                        SurfaceType::arrow(b.clone(), SurfaceType::arrow(b.clone(), b)),
                    ));
                }
                if self.env.builtins && n == EQ {
                    let a = self.unifier.fresh();
                    let tp = SurfaceType::arrow(
                        a.clone(),
                        SurfaceType::arrow(a.clone(), SurfaceType::bool()),
                    );
                    return Ok((Typed::Eq(a), tp));
                }
                Err(InferError::UnknownName(n.clone()))
            }
            SurfaceTerm::App(f, a) => {
                let (tf, ftp) = self.infer(locals, f)?;
                let (ta, atp) = self.infer(locals, a)?;
                let cod = self.unifier.fresh();
                let expected = SurfaceType::arrow(atp.clone(), cod.clone());
                self.unifier.unify(&ftp, &expected, &|| {
                    format!("application of {}", describe(f))
                })?;
                Ok((
                    Typed::App {
                        f: Box::new(tf),
                        a: Box::new(ta),
                        dom: atp,
                        cod: cod.clone(),
                    },
                    cod,
                ))
            }
            SurfaceTerm::Abs { var, annot, body } => {
                let dom = self.binder_type(annot)?;
                locals.push((var.clone(), dom.clone()));
                let r = self.infer(locals, body);
                locals.pop();
                let (tb, cod) = r?;
                Ok((
                    Typed::Abs {
                        var: var.clone(),
                        dom: dom.clone(),
                        cod: cod.clone(),
                        body: Box::new(tb),
                    },
                    SurfaceType::arrow(dom, cod),
                ))
            }
            SurfaceTerm::Binder {
                var, annot, body, ..
            } => {
                let dom = self.binder_type(annot)?;
                locals.push((var.clone(), dom.clone()));
                let r = self.infer(locals, body);
                locals.pop();
                let (tb, btp) = r?;
                self.unifier.unify(&btp, &SurfaceType::bool(), &|| {
                    format!("body of binder over `{var}`")
                })?;
                Ok((
                    Typed::Forall {
                        var: var.clone(),
                        dom,
                        body: Box::new(tb),
                    },
                    SurfaceType::bool(),
                ))
            }
        }
    }

    fn binder_type(&mut self, annot: &Option<SurfaceType>) -> Result<SurfaceType, InferError> {
        match annot {
            Some(t) => {
                self.env.check_type(t)?;
                Ok(t.clone())
            }
            None => Ok(self.unifier.fresh()),
        }
    }

    fn ground(&self, t: &SurfaceType, what: &str) -> Result<SurfaceType, InferError> {
        let r = self.unifier.resolve(t);
        if r.has_meta() {
            return Err(InferError::AmbiguousType(what.to_string()));
        }
        Ok(r)
    }

    /// Resolves all recorded types; fails on the first surviving meta.
    fn resolve_tree(&self, t: Typed) -> Result<Typed, InferError> {
        Ok(match t {
            Typed::Local(_) | Typed::Const(_) | Typed::Impl => t,
            Typed::Eq(a) => Typed::Eq(self.ground(&a, EQ)?),
            Typed::App { f, a, dom, cod } => Typed::App {
                f: Box::new(self.resolve_tree(*f)?),
                a: Box::new(self.resolve_tree(*a)?),
                dom: self.ground(&dom, "application argument")?,
                cod: self.ground(&cod, "application result")?,
            },
            Typed::Abs {
                var,
                dom,
                cod,
                body,
            } => {
                let dom = self.ground(&dom, &var)?;
                let cod = self.ground(&cod, &var)?;
                Typed::Abs {
                    body: Box::new(self.resolve_tree(*body)?),
                    var,
                    dom,
                    cod,
                }
            }
            Typed::Forall { var, dom, body } => {
                let dom = self.ground(&dom, &var)?;
                Typed::Forall {
                    body: Box::new(self.resolve_tree(*body)?),
                    var,
                    dom,
                }
            }
        })
    }
}

fn describe(t: &SurfaceTerm) -> String {
    match t {
        SurfaceTerm::Name(n) => format!("`{n}`"),
        SurfaceTerm::App(f, _) => describe(f),
        SurfaceTerm::Abs { var, .. } => format!("abstraction over `{var}`"),
        SurfaceTerm::Binder { var, .. } => format!("binder over `{var}`"),
    }
}

/// A term whose every binder and application carries a ground type.
#[derive(Debug, Clone)]
pub struct Annotated {
    tree: Typed,
    pub tp: SurfaceType,
}

/// Infers simple types, optionally against an expected result type.
pub fn annotate(
    env: &TypingEnv,
    t: &SurfaceTerm,
    expected: Option<&SurfaceType>,
) -> Result<Annotated, InferError> {
    let mut inf = Inference {
        env,
        unifier: Unifier::default(),
    };
    let (tree, tp) = inf.infer(&mut Vec::new(), t)?;
    if let Some(e) = expected {
        env.check_type(e)?;
        inf.unifier.unify(&tp, e, &|| "declared type".to_string())?;
    }
    let what = match t {
        SurfaceTerm::Abs { var, .. } | SurfaceTerm::Binder { var, .. } => var.clone(),
        SurfaceTerm::Name(n) => n.clone(),
        SurfaceTerm::App(..) => "term".to_string(),
    };
    let tree = inf.resolve_tree(tree)?;
    let tp = inf.ground(&tp, &what)?;
    Ok(Annotated { tree, tp })
}

/// Church elaboration: the returned term has framework type `tm ⟦type⟧`.
pub fn infer_church_annotations(
    env: &TypingEnv,
    t: &SurfaceTerm,
) -> Result<(Term, SurfaceType), InferError> {
    let ann = annotate(env, t, None)?;
    Ok((church_term(env, &ann)?, ann.tp))
}

pub fn church_term(env: &TypingEnv, ann: &Annotated) -> Result<Term, InferError> {
    church(env, &ann.tree)
}

fn hol(n: &str) -> Term {
    LogicId::HolChurch.constant(n)
}

fn tm(a: Term) -> Term {
    Term::app(hol("tm"), a)
}

fn church(env: &TypingEnv, t: &Typed) -> Result<Term, InferError> {
    let ty = |s: &SurfaceType| env.church_type(s);
    Ok(match t {
        Typed::Local(i) => Term::var(*i),
        Typed::Const(id) => Term::Const(id.clone()),
        Typed::Impl => {
            // Unsaturated use: [p] [q] impl p q as an object-level function.
            let b = ty(&SurfaceType::bool())?;
            let arrow_bb = Term::apps(hol("arrow"), [b.clone(), b.clone()]);
            let inner = Term::apps(
                hol("lam"),
                [
                    b.clone(),
                    b.clone(),
                    Term::lam(
                        "q",
                        tm(b.clone()),
                        Term::apps(hol("impl"), [Term::var(1), Term::var(0)]),
                    ),
                ],
            );
            Term::apps(
                hol("lam"),
                [b.clone(), arrow_bb, Term::lam("p", tm(b), inner)],
            )
        }
        Typed::Eq(a) => {
            let a = ty(a)?;
            let b = ty(&SurfaceType::bool())?;
            let arrow_ab = Term::apps(hol("arrow"), [a.clone(), b.clone()]);
            let inner = Term::apps(
                hol("lam"),
                [
                    a.clone(),
                    b,
                    Term::lam(
                        "y",
                        tm(a.clone()),
                        Term::apps(hol("eq"), [a.shift(2, 0), Term::var(1), Term::var(0)]),
                    ),
                ],
            );
            Term::apps(
                hol("lam"),
                [a.clone(), arrow_ab, Term::lam("x", tm(a), inner)],
            )
        }
        Typed::App { f, a, dom, cod } => {
            if let Typed::App {
                f: op,
                a: lhs,
                dom: ldom,
                ..
            } = f.as_ref()
            {
                match op.as_ref() {
                    Typed::Impl => {
                        return Ok(Term::apps(
                            hol("impl"),
                            [church(env, lhs)?, church(env, a)?],
                        ))
                    }
                    Typed::Eq(_) => {
                        return Ok(Term::apps(
                            hol("eq"),
                            [ty(ldom)?, church(env, lhs)?, church(env, a)?],
                        ))
                    }
                    _ => {}
                }
            }
            Term::apps(
                hol("app"),
                [ty(dom)?, ty(cod)?, church(env, f)?, church(env, a)?],
            )
        }
        Typed::Abs {
            var,
            dom,
            cod,
            body,
        } => Term::apps(
            hol("lam"),
            [
                ty(dom)?,
                ty(cod)?,
                Term::lam(var, tm(ty(dom)?), church(env, body)?),
            ],
        ),
        Typed::Forall { var, dom, body } => Term::apps(
            hol("forall"),
            [ty(dom)?, Term::lam(var, tm(ty(dom)?), church(env, body)?)],
        ),
    })
}

/// Identifiers used by the Curry elaboration for names that the Church side
/// takes from the logic.
#[derive(Debug, Clone)]
pub struct CurryNames {
    pub impl_op: Ident,
    pub eq_op: Ident,
    pub base_types: HashMap<String, Ident>,
    pub constants: HashMap<String, Ident>,
}

fn dtt(n: &str) -> Term {
    LogicId::DttCurry.constant(n)
}

fn curry_type(names: &CurryNames, t: &SurfaceType) -> Result<Term, InferError> {
    Ok(match t {
        SurfaceType::Base(b) => Term::Const(
            names
                .base_types
                .get(b)
                .cloned()
                .ok_or_else(|| InferError::UnknownType(b.clone()))?,
        ),
        SurfaceType::Arrow(a, b) => Term::apps(
            dtt("pi'"),
            [
                curry_type(names, a)?,
                Term::lam("_", dtt("expr"), curry_type(names, b)?.shift(1, 0)),
            ],
        ),
        SurfaceType::Meta(m) => return Err(InferError::AmbiguousType(format!("?{m}"))),
    })
}

/// Curry elaboration into untyped `expr` terms built with `app'`, `lam'`,
/// and `pi'` (used for universal quantification).
pub fn curry_term(names: &CurryNames, ann: &Annotated) -> Result<Term, InferError> {
    curry(names, &ann.tree)
}

fn curry(names: &CurryNames, t: &Typed) -> Result<Term, InferError> {
    let constant = |id: &Ident| -> Term {
        Term::Const(
            names
                .constants
                .get(id.name())
                .cloned()
                .unwrap_or_else(|| id.clone()),
        )
    };
    Ok(match t {
        Typed::Local(i) => Term::var(*i),
        Typed::Const(id) => constant(id),
        Typed::Impl | Typed::Eq(_) => {
            let op = if matches!(t, Typed::Impl) {
                &names.impl_op
            } else {
                &names.eq_op
            };
            let expr = dtt("expr");
            let body = Term::apps(Term::Const(op.clone()), [Term::var(1), Term::var(0)]);
            let dom = match t {
                Typed::Eq(a) => curry_type(names, a)?,
                _ => curry_type(names, &SurfaceType::bool())?,
            };
            let inner = Term::apps(
                dtt("lam'"),
                [dom.shift(1, 0), Term::lam("y", expr.clone(), body)],
            );
            Term::apps(dtt("lam'"), [dom, Term::lam("x", expr, inner)])
        }
        Typed::App { f, a, .. } => {
            if let Typed::App { f: op, a: lhs, .. } = f.as_ref() {
                let opid = match op.as_ref() {
                    Typed::Impl => Some(&names.impl_op),
                    Typed::Eq(_) => Some(&names.eq_op),
                    _ => None,
                };
                if let Some(opid) = opid {
                    return Ok(Term::apps(
                        Term::Const(opid.clone()),
                        [curry(names, lhs)?, curry(names, a)?],
                    ));
                }
            }
            Term::apps(dtt("app'"), [curry(names, f)?, curry(names, a)?])
        }
        Typed::Abs { var, dom, body, .. } => Term::apps(
            dtt("lam'"),
            [
                curry_type(names, dom)?,
                Term::lam(var, dtt("expr"), curry(names, body)?),
            ],
        ),
        Typed::Forall { var, dom, body } => Term::apps(
            dtt("pi'"),
            [
                curry_type(names, dom)?,
                Term::lam(var, dtt("expr"), curry(names, body)?),
            ],
        ),
    })
}
