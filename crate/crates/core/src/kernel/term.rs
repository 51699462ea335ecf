use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::ident::Ident;

/// Expressions of the framework. Bound variables are de Bruijn indices;
/// binder hints are kept for printing only and are ignored by `==`.
#[derive(Debug, Clone)]
pub enum Term {
    Const(Ident),
    Var(usize),
    Apply(Box<Term>, Box<Term>),
    Lambda(String, Box<Term>, Box<Term>),
    Pi(String, Box<Term>, Box<Term>),
    Type,
    /// Predicate subtype `{x : base | pred x}`.
    SubType(Box<Term>, Box<Term>),
    /// Introduction into a predicate subtype: element plus witness.
    SubIn(Box<Term>, Box<Term>),
    /// Coercion out of a predicate subtype.
    SubOut(Box<Term>),
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        use Term::*;
        match (self, other) {
            (Const(a), Const(b)) => a == b,
            (Var(i), Var(j)) => i == j,
            (Apply(f, a), Apply(g, b)) => f == g && a == b,
            (Lambda(_, a, b), Lambda(_, c, d)) | (Pi(_, a, b), Pi(_, c, d)) => a == c && b == d,
            (Type, Type) => true,
            (SubType(a, b), SubType(c, d)) | (SubIn(a, b), SubIn(c, d)) => a == c && b == d,
            (SubOut(a), SubOut(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            Term::Const(c) => c.hash(state),
            Term::Var(i) => i.hash(state),
            Term::Apply(a, b)
            | Term::Lambda(_, a, b)
            | Term::Pi(_, a, b)
            | Term::SubType(a, b)
            | Term::SubIn(a, b) => {
                a.hash(state);
                b.hash(state);
            }
            Term::SubOut(a) => a.hash(state),
            Term::Type => {}
        }
    }
}

impl Term {
    pub fn cnst(id: &Ident) -> Term {
        Term::Const(id.clone())
    }

    pub fn var(index: usize) -> Term {
        Term::Var(index)
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::Apply(Box::new(f), Box::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn lam(hint: &str, dom: Term, body: Term) -> Term {
        Term::Lambda(hint.to_string(), Box::new(dom), Box::new(body))
    }

    pub fn pi(hint: &str, dom: Term, cod: Term) -> Term {
        Term::Pi(hint.to_string(), Box::new(dom), Box::new(cod))
    }

    /// Non-dependent function type; `cod` is given outside the new binder.
    pub fn arrow(dom: Term, cod: Term) -> Term {
        Term::pi("_", dom, cod.shift(1, 0))
    }

    pub fn sub_type(base: Term, pred: Term) -> Term {
        Term::SubType(Box::new(base), Box::new(pred))
    }

    pub fn sub_in(elem: Term, witness: Term) -> Term {
        Term::SubIn(Box::new(elem), Box::new(witness))
    }

    pub fn sub_out(elem: Term) -> Term {
        Term::SubOut(Box::new(elem))
    }

    /// Structural equality that also compares binder hints.
    pub fn identical(&self, other: &Term) -> bool {
        use Term::*;
        match (self, other) {
            (Lambda(x, a, b), Lambda(y, c, d)) | (Pi(x, a, b), Pi(y, c, d)) => {
                x == y && a.identical(c) && b.identical(d)
            }
            (Apply(a, b), Apply(c, d))
            | (SubType(a, b), SubType(c, d))
            | (SubIn(a, b), SubIn(c, d)) => a.identical(c) && b.identical(d),
            (SubOut(a), SubOut(b)) => a.identical(b),
            _ => self == other,
        }
    }

    /// Adds `amount` to every variable index `>= cutoff`.
    pub fn shift(&self, amount: isize, cutoff: usize) -> Term {
        if amount == 0 {
            return self.clone();
        }
        self.map_vars(cutoff, &|i, depth| {
            if i >= depth {
                let shifted = i as isize + amount;
                assert!(shifted >= 0, "shift produced a negative de Bruijn index");
                Term::Var(shifted as usize)
            } else {
                Term::Var(i)
            }
        })
    }

    fn map_vars(&self, depth: usize, f: &impl Fn(usize, usize) -> Term) -> Term {
        match self {
            Term::Var(i) => f(*i, depth),
            Term::Const(_) | Term::Type => self.clone(),
            Term::Apply(a, b) => Term::app(a.map_vars(depth, f), b.map_vars(depth, f)),
            Term::Lambda(x, a, b) => Term::Lambda(
                x.clone(),
                Box::new(a.map_vars(depth, f)),
                Box::new(b.map_vars(depth + 1, f)),
            ),
            Term::Pi(x, a, b) => Term::Pi(
                x.clone(),
                Box::new(a.map_vars(depth, f)),
                Box::new(b.map_vars(depth + 1, f)),
            ),
            Term::SubType(a, b) => Term::sub_type(a.map_vars(depth, f), b.map_vars(depth, f)),
            Term::SubIn(a, b) => Term::sub_in(a.map_vars(depth, f), b.map_vars(depth, f)),
            Term::SubOut(a) => Term::sub_out(a.map_vars(depth, f)),
        }
    }

    /// Replaces `Var(depth)` by `s` and removes that binder: indices above
    /// `depth` drop by one, and `s` (given relative to the context outside the
    /// removed binder) is shifted past the `depth` binders it is inserted under.
    pub fn substitute(&self, depth: usize, s: &Term) -> Term {
        self.map_vars(depth, &|i, d| {
            if i == d {
                s.shift(d as isize, 0)
            } else if i > d {
                Term::Var(i - 1)
            } else {
                Term::Var(i)
            }
        })
    }

    /// Instantiates the outermost binder of a body, i.e. `substitute(0, s)`.
    pub fn instantiate(&self, s: &Term) -> Term {
        self.substitute(0, s)
    }

    /// Whether `Var(index)` (relative to this term's root) occurs.
    pub fn has_free_var(&self, index: usize) -> bool {
        match self {
            Term::Var(i) => *i == index,
            Term::Const(_) | Term::Type => false,
            Term::Apply(a, b) | Term::SubType(a, b) | Term::SubIn(a, b) => {
                a.has_free_var(index) || b.has_free_var(index)
            }
            Term::Lambda(_, a, b) | Term::Pi(_, a, b) => {
                a.has_free_var(index) || b.has_free_var(index + 1)
            }
            Term::SubOut(a) => a.has_free_var(index),
        }
    }

    /// Number of free variables the term needs, i.e. one more than the
    /// largest escaping index (0 for closed terms).
    pub fn free_var_bound(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::Const(_) | Term::Type => 0,
            Term::Apply(a, b) | Term::SubType(a, b) | Term::SubIn(a, b) => {
                a.free_var_bound().max(b.free_var_bound())
            }
            Term::Lambda(_, a, b) | Term::Pi(_, a, b) => {
                a.free_var_bound().max(b.free_var_bound().saturating_sub(1))
            }
            Term::SubOut(a) => a.free_var_bound(),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_var_bound() == 0
    }

    pub fn uses_refinement(&self) -> bool {
        match self {
            Term::SubType(..) | Term::SubIn(..) | Term::SubOut(..) => true,
            Term::Var(_) | Term::Const(_) | Term::Type => false,
            Term::Apply(a, b) | Term::Lambda(_, a, b) | Term::Pi(_, a, b) => {
                a.uses_refinement() || b.uses_refinement()
            }
        }
    }

    /// Head and argument list of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut head = self;
        let mut args = Vec::new();
        while let Term::Apply(f, a) = head {
            args.push(a.as_ref());
            head = f;
        }
        args.reverse();
        (head, args)
    }

    pub fn constants(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        self.collect_constants(&mut out);
        out
    }

    pub fn collect_constants(&self, out: &mut BTreeSet<Ident>) {
        match self {
            Term::Const(c) => {
                out.insert(c.clone());
            }
            Term::Var(_) | Term::Type => {}
            Term::Apply(a, b)
            | Term::Lambda(_, a, b)
            | Term::Pi(_, a, b)
            | Term::SubType(a, b)
            | Term::SubIn(a, b) => {
                a.collect_constants(out);
                b.collect_constants(out);
            }
            Term::SubOut(a) => a.collect_constants(out),
        }
    }

    /// Renames constants; constants absent from `f`'s domain are kept.
    pub fn map_constants(&self, f: &impl Fn(&Ident) -> Option<Term>) -> Term {
        match self {
            Term::Const(c) => f(c).unwrap_or_else(|| self.clone()),
            Term::Var(_) | Term::Type => self.clone(),
            Term::Apply(a, b) => Term::app(a.map_constants(f), b.map_constants(f)),
            Term::Lambda(x, a, b) => Term::lam(x, a.map_constants(f), b.map_constants(f)),
            Term::Pi(x, a, b) => Term::pi(x, a.map_constants(f), b.map_constants(f)),
            Term::SubType(a, b) => Term::sub_type(a.map_constants(f), b.map_constants(f)),
            Term::SubIn(a, b) => Term::sub_in(a.map_constants(f), b.map_constants(f)),
            Term::SubOut(a) => Term::sub_out(a.map_constants(f)),
        }
    }

    /// Node count with application spines flattened: atoms, binders and
    /// refinement formers count one each, `Apply` counts zero.
    pub fn size(&self) -> usize {
        match self {
            Term::Const(_) | Term::Var(_) | Term::Type => 1,
            Term::Apply(a, b) => a.size() + b.size(),
            Term::Lambda(_, a, b) | Term::Pi(_, a, b) | Term::SubType(a, b) | Term::SubIn(a, b) => {
                1 + a.size() + b.size()
            }
            Term::SubOut(a) => 1 + a.size(),
        }
    }

    /// Total constructor count, applications included.
    pub fn node_count(&self) -> usize {
        match self {
            Term::Const(_) | Term::Var(_) | Term::Type => 1,
            Term::Apply(a, b)
            | Term::Lambda(_, a, b)
            | Term::Pi(_, a, b)
            | Term::SubType(a, b)
            | Term::SubIn(a, b) => 1 + a.node_count() + b.node_count(),
            Term::SubOut(a) => 1 + a.node_count(),
        }
    }

    /// Renders in the concrete term syntax with bound names taken from `names`
    /// (innermost last) for free variables.
    pub fn display_in<'a>(&'a self, names: &'a [String]) -> Pretty<'a> {
        Pretty { term: self, names }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            Pretty {
                term: self,
                names: &[]
            }
        )
    }
}

/// Concrete syntax:
/// `type`, `c`, `x`, `f a b`, `[x:A] b`, `{x:A} B`, `A -> B`,
/// `sub A P`, `subin t p`, `subout t`.
pub struct Pretty<'a> {
    term: &'a Term,
    names: &'a [String],
}

impl fmt::Display for Pretty<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names = self.names.to_vec();
        write_term(f, self.term, &mut names, Prec::Top)
    }
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Top,
    Arrow,
    App,
    Atom,
}

fn fresh_name(hint: &str, names: &[String]) -> String {
    let base = if hint.is_empty() || hint == "_" {
        "x"
    } else {
        hint
    };
    if !names.iter().any(|n| n == base) {
        return base.to_string();
    }
    (1..)
        .map(|k| format!("{base}{k}"))
        .find(|cand| !names.iter().any(|n| n == cand))
        .expect("unbounded search")
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    t: &Term,
    names: &mut Vec<String>,
    prec: Prec,
) -> fmt::Result {
    let paren = |f: &mut fmt::Formatter<'_>, needed: bool, open: bool| -> fmt::Result {
        if needed {
            f.write_str(if open { "(" } else { ")" })
        } else {
            Ok(())
        }
    };
    match t {
        Term::Const(c) => f.write_str(c.name()),
        Term::Var(i) => match names.len().checked_sub(i + 1) {
            Some(pos) => f.write_str(&names[pos]),
            None => write!(f, "#{i}"),
        },
        Term::Type => f.write_str("type"),
        Term::Apply(..) => {
            let (head, args) = t.spine();
            paren(f, prec > Prec::App, true)?;
            write_term(f, head, names, Prec::App)?;
            for a in args {
                f.write_str(" ")?;
                write_term(f, a, names, Prec::Atom)?;
            }
            paren(f, prec > Prec::App, false)
        }
        Term::Pi(x, a, b) if !b.has_free_var(0) => {
            paren(f, prec > Prec::Arrow, true)?;
            write_term(f, a, names, Prec::App)?;
            f.write_str(" -> ")?;
            names.push(String::new());
            let r = write_term(f, b, names, Prec::Arrow);
            names.pop();
            r?;
            let _ = x;
            paren(f, prec > Prec::Arrow, false)
        }
        Term::Lambda(x, a, b) | Term::Pi(x, a, b) => {
            let (open, close) = if matches!(t, Term::Lambda(..)) {
                ("[", "]")
            } else {
                ("{", "}")
            };
            paren(f, prec > Prec::Top, true)?;
            let name = fresh_name(x, names);
            write!(f, "{open}{name}:")?;
            write_term(f, a, names, Prec::Top)?;
            write!(f, "{close} ")?;
            names.push(name);
            let r = write_term(f, b, names, Prec::Top);
            names.pop();
            r?;
            paren(f, prec > Prec::Top, false)
        }
        Term::SubType(a, b) | Term::SubIn(a, b) => {
            let kw = if matches!(t, Term::SubType(..)) {
                "sub"
            } else {
                "subin"
            };
            paren(f, prec > Prec::App, true)?;
            write!(f, "{kw} ")?;
            write_term(f, a, names, Prec::Atom)?;
            f.write_str(" ")?;
            write_term(f, b, names, Prec::Atom)?;
            paren(f, prec > Prec::App, false)
        }
        Term::SubOut(a) => {
            paren(f, prec > Prec::App, true)?;
            f.write_str("subout ")?;
            write_term(f, a, names, Prec::Atom)?;
            paren(f, prec > Prec::App, false)
        }
    }
}
