use std::collections::HashMap;

use super::error::{KernelError, KernelResult};
use super::ident::Ident;
use super::library::{Context, DeclKind};
use super::term::Term;

pub const DEFAULT_REDUCTION_BUDGET: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelConfig {
    /// Include η in definitional equality.
    pub eta: bool,
    /// Reduction steps allowed per top-level kernel call.
    pub reduction_budget: usize,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            eta: true,
            reduction_budget: DEFAULT_REDUCTION_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigEntry {
    pub tp: Term,
    pub definiens: Option<Term>,
    pub kind: DeclKind,
}

/// The constants in scope for type checking.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    entries: HashMap<Ident, SigEntry>,
    refinement: bool,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_refinement(mut self, enabled: bool) -> Self {
        self.refinement = enabled;
        self
    }

    pub fn set_refinement(&mut self, enabled: bool) {
        self.refinement = enabled;
    }

    pub fn refinement(&self) -> bool {
        self.refinement
    }

    pub fn insert(&mut self, id: Ident, tp: Term, definiens: Option<Term>, kind: DeclKind) {
        self.entries.insert(
            id,
            SigEntry {
                tp,
                definiens,
                kind,
            },
        );
    }

    pub fn declare(&mut self, id: Ident, tp: Term) {
        self.insert(id, tp, None, DeclKind::Constant);
    }

    pub fn define(&mut self, id: Ident, tp: Term, definiens: Term) {
        self.insert(id, tp, Some(definiens), DeclKind::Definition);
    }

    pub fn get(&self, id: &Ident) -> Option<&SigEntry> {
        self.entries.get(id)
    }

    pub fn contains(&self, id: &Ident) -> bool {
        self.entries.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sort {
    /// Classified by `type`.
    Type,
    /// `type` itself or a Pi ending in `type`.
    Kind,
}

struct Fuel {
    left: usize,
    budget: usize,
}

impl Fuel {
    fn new(budget: usize) -> Self {
        Fuel {
            left: budget,
            budget,
        }
    }

    fn tick(&mut self) -> KernelResult<()> {
        if self.left == 0 {
            return Err(KernelError::ReductionDepthExceeded(self.budget));
        }
        self.left -= 1;
        Ok(())
    }
}

/// Type checker and conversion checker over a fixed signature.
#[derive(Clone, Copy)]
pub struct Kernel<'s> {
    sig: &'s Signature,
    config: KernelConfig,
}

impl<'s> Kernel<'s> {
    pub fn new(sig: &'s Signature) -> Self {
        Kernel {
            sig,
            config: KernelConfig::default(),
        }
    }

    pub fn with_config(sig: &'s Signature, config: KernelConfig) -> Self {
        Kernel { sig, config }
    }

    pub fn signature(&self) -> &'s Signature {
        self.sig
    }

    pub fn config(&self) -> KernelConfig {
        self.config
    }

    fn fuel(&self) -> Fuel {
        Fuel::new(self.config.reduction_budget)
    }

    pub fn whnf(&self, t: &Term) -> KernelResult<Term> {
        self.whnf_with(t, &mut self.fuel())
    }

    pub fn equal(&self, ctx: &Context, a: &Term, b: &Term) -> KernelResult<bool> {
        let _ = ctx;
        self.conv(a, b, &mut self.fuel())
    }

    pub fn infer(&self, ctx: &Context, t: &Term) -> KernelResult<Term> {
        let mut ctx = ctx.clone();
        self.infer_with(&mut ctx, t, &mut self.fuel())
    }

    pub fn check(&self, ctx: &Context, t: &Term, expected: &Term) -> KernelResult<()> {
        let mut ctx = ctx.clone();
        self.check_with(&mut ctx, t, expected, &mut self.fuel())
    }

    /// Classifies a type or kind; errors when `t` is neither.
    pub fn sort_of(&self, ctx: &Context, t: &Term) -> KernelResult<Sort> {
        let mut ctx = ctx.clone();
        self.sort_with(&mut ctx, t, &mut self.fuel())
    }

    fn whnf_with(&self, t: &Term, fuel: &mut Fuel) -> KernelResult<Term> {
        match t {
            Term::Apply(f, a) => {
                let head = self.whnf_with(f, fuel)?;
                match head {
                    Term::Lambda(_, _, body) => {
                        fuel.tick()?;
                        self.whnf_with(&body.instantiate(a), fuel)
                    }
                    head => Ok(Term::Apply(Box::new(head), a.clone())),
                }
            }
            Term::Const(c) => match self.sig.get(c).and_then(|e| e.definiens.as_ref()) {
                Some(def) => {
                    fuel.tick()?;
                    self.whnf_with(def, fuel)
                }
                None => Ok(t.clone()),
            },
            Term::SubOut(e) => match self.whnf_with(e, fuel)? {
                Term::SubIn(inner, _) => {
                    fuel.tick()?;
                    self.whnf_with(&inner, fuel)
                }
                e => Ok(Term::sub_out(e)),
            },
            _ => Ok(t.clone()),
        }
    }

    fn conv(&self, a: &Term, b: &Term, fuel: &mut Fuel) -> KernelResult<bool> {
        if a == b {
            return Ok(true);
        }
        fuel.tick()?;
        let a = self.whnf_with(a, fuel)?;
        let b = self.whnf_with(b, fuel)?;
        if a == b {
            return Ok(true);
        }
        match (&a, &b) {
            (Term::Lambda(_, _, x), Term::Lambda(_, _, y)) => self.conv(x, y, fuel),
            (Term::Lambda(_, _, x), other) | (other, Term::Lambda(_, _, x)) if self.config.eta => {
                let expanded = Term::app(other.shift(1, 0), Term::var(0));
                self.conv(x, &expanded, fuel)
            }
            (Term::Pi(_, a1, b1), Term::Pi(_, a2, b2))
            | (Term::SubType(a1, b1), Term::SubType(a2, b2)) => {
                Ok(self.conv(a1, a2, fuel)? && self.conv(b1, b2, fuel)?)
            }
            // Witnesses are proof-irrelevant.
            (Term::SubIn(x, _), Term::SubIn(y, _)) => self.conv(x, y, fuel),
            (Term::SubOut(x), Term::SubOut(y)) => self.conv(x, y, fuel),
            (Term::Apply(..), Term::Apply(..)) => {
                let (h1, args1) = a.spine();
                let (h2, args2) = b.spine();
                if args1.len() != args2.len() || !self.conv(h1, h2, fuel)? {
                    return Ok(false);
                }
                for (x, y) in args1.into_iter().zip(args2) {
                    if !self.conv(x, y, fuel)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(false),
        }
    }

    fn gate(&self) -> KernelResult<()> {
        if self.sig.refinement {
            Ok(())
        } else {
            Err(KernelError::ExtensionDisabled)
        }
    }

    fn sort_with(&self, ctx: &mut Context, t: &Term, fuel: &mut Fuel) -> KernelResult<Sort> {
        match self.whnf_with(t, fuel)? {
            Term::Type => Ok(Sort::Kind),
            Term::Pi(x, dom, cod) => {
                self.require_type(ctx, &dom, fuel)?;
                ctx.push(&x, *dom);
                let r = self.sort_with(ctx, &cod, fuel);
                ctx.pop();
                r
            }
            _ => {
                let k = self.infer_with(ctx, t, fuel)?;
                if self.conv(&k, &Term::Type, fuel)? {
                    Ok(Sort::Type)
                } else {
                    Err(KernelError::Mismatch {
                        expected: Term::Type,
                        found: k,
                    })
                }
            }
        }
    }

    fn require_type(&self, ctx: &mut Context, t: &Term, fuel: &mut Fuel) -> KernelResult<()> {
        match self.sort_with(ctx, t, fuel)? {
            Sort::Type => Ok(()),
            Sort::Kind => Err(KernelError::NotTyped(format!(
                "binder domain `{}` is a kind, not a type",
                t.display_in(&ctx.names())
            ))),
        }
    }

    fn infer_with(&self, ctx: &mut Context, t: &Term, fuel: &mut Fuel) -> KernelResult<Term> {
        match t {
            Term::Const(c) => self
                .sig
                .get(c)
                .map(|e| e.tp.clone())
                .ok_or_else(|| KernelError::UnknownIdent(c.clone())),
            Term::Var(i) => ctx.lookup(*i).ok_or(KernelError::UnboundVariable(*i)),
            Term::Type => Err(KernelError::NotTyped("`type` has no type".into())),
            Term::Apply(f, a) => {
                let ftp = self.infer_with(ctx, f, fuel)?;
                match self.whnf_with(&ftp, fuel)? {
                    Term::Pi(_, dom, cod) => {
                        self.check_with(ctx, a, &dom, fuel)?;
                        Ok(cod.instantiate(a))
                    }
                    other => Err(KernelError::NotAFunction {
                        term: (**f).clone(),
                        tp: other,
                    }),
                }
            }
            Term::Lambda(x, dom, body) => {
                self.require_type(ctx, dom, fuel)?;
                ctx.push(x, (**dom).clone());
                let cod = self.infer_with(ctx, body, fuel);
                ctx.pop();
                Ok(Term::pi(x, (**dom).clone(), cod?))
            }
            Term::Pi(x, dom, cod) => {
                self.require_type(ctx, dom, fuel)?;
                ctx.push(x, (**dom).clone());
                let sort = self.sort_with(ctx, cod, fuel);
                ctx.pop();
                match sort? {
                    Sort::Type => Ok(Term::Type),
                    Sort::Kind => Err(KernelError::NotTyped("a kind has no type".into())),
                }
            }
            Term::SubType(base, pred) => {
                self.gate()?;
                self.require_type(ctx, base, fuel)?;
                let pred_tp = Term::arrow((**base).clone(), Term::Type);
                self.check_with(ctx, pred, &pred_tp, fuel)?;
                Ok(Term::Type)
            }
            Term::SubIn(..) => {
                self.gate()?;
                Err(KernelError::NotTyped(
                    "subtype introduction needs an expected type".into(),
                ))
            }
            Term::SubOut(e) => {
                self.gate()?;
                let etp = self.infer_with(ctx, e, fuel)?;
                match self.whnf_with(&etp, fuel)? {
                    Term::SubType(base, _) => Ok(*base),
                    other => Err(KernelError::Mismatch {
                        expected: Term::sub_type(Term::Type, Term::Type),
                        found: other,
                    }),
                }
            }
        }
    }

    fn check_with(
        &self,
        ctx: &mut Context,
        t: &Term,
        expected: &Term,
        fuel: &mut Fuel,
    ) -> KernelResult<()> {
        match t {
            Term::Lambda(x, dom, body) => {
                if let Term::Pi(_, edom, ecod) = self.whnf_with(expected, fuel)? {
                    self.require_type(ctx, dom, fuel)?;
                    if !self.conv(dom, &edom, fuel)? {
                        return Err(KernelError::Mismatch {
                            expected: *edom,
                            found: (**dom).clone(),
                        });
                    }
                    ctx.push(x, (**dom).clone());
                    let r = self.check_with(ctx, body, &ecod, fuel);
                    ctx.pop();
                    return r;
                }
            }
            Term::SubIn(elem, witness) => {
                self.gate()?;
                return match self.whnf_with(expected, fuel)? {
                    Term::SubType(base, pred) => {
                        self.check_with(ctx, elem, &base, fuel)?;
                        let claim = self.whnf_with(&Term::app(*pred, (**elem).clone()), fuel)?;
                        self.check_with(ctx, witness, &claim, fuel)
                    }
                    other => Err(KernelError::Mismatch {
                        expected: other,
                        found: Term::sub_type(Term::Type, Term::Type),
                    }),
                };
            }
            _ => {}
        }
        let found = self.infer_with(ctx, t, fuel)?;
        if self.conv(&found, expected, fuel)? {
            return Ok(());
        }
        if self.sig.refinement {
            if let Term::SubType(..) = self.whnf_with(expected, fuel)? {
                return Err(KernelError::SubtypeWitnessMissing {
                    term: t.clone(),
                    expected: expected.clone(),
                });
            }
        }
        Err(KernelError::Mismatch {
            expected: expected.clone(),
            found,
        })
    }
}

pub fn whnf(sig: &Signature, t: &Term) -> KernelResult<Term> {
    Kernel::new(sig).whnf(t)
}

pub fn equal(sig: &Signature, ctx: &Context, a: &Term, b: &Term) -> KernelResult<bool> {
    Kernel::new(sig).equal(ctx, a, b)
}

pub fn infer(sig: &Signature, ctx: &Context, t: &Term) -> KernelResult<Term> {
    Kernel::new(sig).infer(ctx, t)
}

pub fn check(sig: &Signature, ctx: &Context, t: &Term, expected: &Term) -> KernelResult<()> {
    Kernel::new(sig).check(ctx, t, expected)
}
