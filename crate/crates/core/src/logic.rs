//! Built-in logic encodings: Church-style HOL, Curry-style dependent type
//! theory with soft typing through predicate subtypes, and untyped
//! first-order logic over sets with second-order schema binders.

use std::fmt::Write as _;
use std::sync::OnceLock;

use num_rational::Ratio;
use thiserror::Error;

use crate::extensions::Pattern;
use crate::kernel::{Context, DeclKind, Declaration, Ident, Library, Term, Theory};

pub const LOGIC_NAMESPACE: &str = "http://oaf.example.org/logics";
const LOGIC_DOCUMENT: &str = "lf";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogicId {
    HolChurch,
    DttCurry,
    FolSoft,
}

impl LogicId {
    pub const ALL: [LogicId; 3] = [LogicId::HolChurch, LogicId::DttCurry, LogicId::FolSoft];

    pub fn local_name(self) -> &'static str {
        match self {
            LogicId::HolChurch => "HOLChurch",
            LogicId::DttCurry => "DTTCurry",
            LogicId::FolSoft => "FOLSoft",
        }
    }

    pub fn ident(self) -> Ident {
        Ident::new(LOGIC_NAMESPACE, LOGIC_DOCUMENT, self.local_name()).expect("static identifier")
    }

    /// Identifier of constant `local` of this logic.
    pub fn symbol(self, local: &str) -> Ident {
        self.ident().child(local).expect("static identifier")
    }

    pub fn constant(self, local: &str) -> Term {
        Term::Const(self.symbol(local))
    }

    pub fn theory(self) -> &'static Theory {
        let idx = LogicId::ALL.iter().position(|l| *l == self).unwrap();
        &builtin_theories()[idx]
    }

    pub fn of(id: &Ident) -> Option<LogicId> {
        LogicId::ALL.into_iter().find(|l| &l.ident() == id)
    }
}

pub fn builtin_theories() -> &'static [Theory] {
    static THEORIES: OnceLock<Vec<Theory>> = OnceLock::new();
    THEORIES.get_or_init(|| vec![hol_church(), dtt_curry(), fol_soft()])
}

pub fn builtin_theory(id: &Ident) -> Option<&'static Theory> {
    builtin_theories().iter().find(|t| &t.name == id)
}

pub fn builtin_patterns() -> &'static [Pattern] {
    static PATTERNS: OnceLock<Vec<Pattern>> = OnceLock::new();
    PATTERNS.get_or_init(|| vec![type_definition_pattern(), func_definition_pattern()])
}

pub fn builtin_pattern(id: &Ident) -> Option<&'static Pattern> {
    builtin_patterns().iter().find(|p| &p.name == id)
}

/// Whether theories built on `id` may use predicate subtypes.
pub fn enables_refinement(id: &Ident) -> bool {
    *id == LogicId::DttCurry.ident()
}

struct Builder {
    theory: Theory,
}

impl Builder {
    fn new(logic: LogicId) -> Self {
        Builder {
            theory: Theory::new(logic.ident(), None),
        }
    }

    fn c(&self, local: &str) -> Term {
        Term::Const(self.theory.symbol(local))
    }

    fn app(&self, head: &str, args: impl IntoIterator<Item = Term>) -> Term {
        Term::apps(self.c(head), args)
    }

    fn decl(&mut self, local: &str, tp: Term) {
        let id = self.theory.symbol(local);
        self.theory
            .push(Declaration::constant(id, tp, DeclKind::Constant));
    }

    fn def(&mut self, local: &str, tp: Term, definiens: Term) {
        let id = self.theory.symbol(local);
        self.theory
            .push(Declaration::defined(id, Some(tp), definiens));
    }
}

fn v(i: usize) -> Term {
    Term::var(i)
}

/// `{x1:A} ... {xn:A} body` with all binders sharing one (closed) domain.
fn pis(names: &[&str], dom: &Term, body: Term) -> Term {
    names
        .iter()
        .rev()
        .fold(body, |acc, n| Term::pi(n, dom.clone(), acc))
}

fn hol_church() -> Theory {
    let mut b = Builder::new(LogicId::HolChurch);
    let tp = b.c("tp");
    let tm = |b: &Builder, x: Term| b.app("tm", [x]);
    let ded = |b: &Builder, x: Term| b.app("ded", [x]);
    let boolean = b.c("bool'");
    let tm_bool = tm(&b, boolean.clone());

    b.decl("tp", Term::Type);
    b.decl("tm", Term::arrow(tp.clone(), Term::Type));
    b.decl("bool'", tp.clone());
    b.decl(
        "arrow",
        Term::arrow(tp.clone(), Term::arrow(tp.clone(), tp.clone())),
    );
    // {A:tp}{B:tp} (tm A -> tm B) -> tm (arrow A B)
    let lam = pis(
        &["A", "B"],
        &tp,
        Term::arrow(
            Term::arrow(tm(&b, v(1)), tm(&b, v(0))),
            tm(&b, b.app("arrow", [v(1), v(0)])),
        ),
    );
    b.decl("lam", lam);
    // {A:tp}{B:tp} tm (arrow A B) -> tm A -> tm B
    let app = pis(
        &["A", "B"],
        &tp,
        Term::arrow(
            tm(&b, b.app("arrow", [v(1), v(0)])),
            Term::arrow(tm(&b, v(1)), tm(&b, v(0))),
        ),
    );
    b.decl("app", app);
    let forall = Term::pi(
        "A",
        tp.clone(),
        Term::arrow(Term::arrow(tm(&b, v(0)), tm_bool.clone()), tm_bool.clone()),
    );
    b.decl("forall", forall);
    b.decl(
        "impl",
        Term::arrow(
            tm_bool.clone(),
            Term::arrow(tm_bool.clone(), tm_bool.clone()),
        ),
    );
    let eq = Term::pi(
        "A",
        tp.clone(),
        Term::arrow(tm(&b, v(0)), Term::arrow(tm(&b, v(0)), tm_bool.clone())),
    );
    b.decl("eq", eq);
    b.decl("ded", Term::arrow(tm_bool.clone(), Term::Type));

    // {p}{q} (ded p -> ded q) -> ded (impl p q)
    let impl_i = pis(
        &["p", "q"],
        &tm_bool,
        Term::arrow(
            Term::arrow(ded(&b, v(1)), ded(&b, v(0))),
            ded(&b, b.app("impl", [v(1), v(0)])),
        ),
    );
    b.decl("implI", impl_i);
    // {p}{q} ded (impl p q) -> ded p -> ded q
    let impl_e = pis(
        &["p", "q"],
        &tm_bool,
        Term::arrow(
            ded(&b, b.app("impl", [v(1), v(0)])),
            Term::arrow(ded(&b, v(1)), ded(&b, v(0))),
        ),
    );
    b.decl("implE", impl_e);
    // {A:tp}{P: tm A -> tm bool'} ({x: tm A} ded (P x)) -> ded (forall A P)
    let pred = Term::arrow(tm(&b, v(0)), tm_bool.clone());
    let forall_i = Term::pi(
        "A",
        tp.clone(),
        Term::pi(
            "P",
            pred.clone(),
            Term::arrow(
                Term::pi("x", tm(&b, v(1)), ded(&b, Term::app(v(1), v(0)))),
                ded(&b, b.app("forall", [v(1), v(0)])),
            ),
        ),
    );
    b.decl("forallI", forall_i);
    // {A:tp}{P} ded (forall A P) -> {x: tm A} ded (P x)
    let forall_e = Term::pi(
        "A",
        tp.clone(),
        Term::pi(
            "P",
            pred,
            Term::arrow(
                ded(&b, b.app("forall", [v(1), v(0)])),
                Term::pi("x", tm(&b, v(1)), ded(&b, Term::app(v(1), v(0)))),
            ),
        ),
    );
    b.decl("forallE", forall_e);
    // {A}{B}{F: tm A -> tm B}{x: tm A}
    //   ded (eq B (app A B (lam A B F) x) (F x))
    let beta = pis(
        &["A", "B"],
        &tp,
        Term::pi(
            "F",
            Term::arrow(tm(&b, v(1)), tm(&b, v(0))),
            Term::pi(
                "x",
                tm(&b, v(2)),
                ded(
                    &b,
                    b.app(
                        "eq",
                        [
                            v(2),
                            b.app("app", [v(3), v(2), b.app("lam", [v(3), v(2), v(1)]), v(0)]),
                            Term::app(v(1), v(0)),
                        ],
                    ),
                ),
            ),
        ),
    );
    b.decl("beta", beta);
    b.theory
}

fn dtt_curry() -> Theory {
    let mut b = Builder::new(LogicId::DttCurry);
    let expr = b.c("expr");
    let of = |b: &Builder, e: Term, a: Term| b.app("of", [e, a]);
    let fam = Term::arrow(expr.clone(), expr.clone());

    b.decl("expr", Term::Type);
    b.decl(
        "of",
        Term::arrow(expr.clone(), Term::arrow(expr.clone(), Term::Type)),
    );
    b.decl(
        "app'",
        Term::arrow(expr.clone(), Term::arrow(expr.clone(), expr.clone())),
    );
    b.decl(
        "lam'",
        Term::arrow(expr.clone(), Term::arrow(fam.clone(), expr.clone())),
    );
    b.decl(
        "pi'",
        Term::arrow(expr.clone(), Term::arrow(fam.clone(), expr.clone())),
    );
    // {f}{a}{A}{B: expr -> expr} of f (pi' A B) -> of a A -> of (app' f a) (B a)
    let of_app = pis(
        &["f", "a", "A"],
        &expr,
        Term::pi(
            "B",
            fam.clone(),
            Term::arrow(
                of(&b, v(3), b.app("pi'", [v(1), v(0)])),
                Term::arrow(
                    of(&b, v(2), v(1)),
                    of(&b, b.app("app'", [v(3), v(2)]), Term::app(v(0), v(2))),
                ),
            ),
        ),
    );
    b.decl("of_app", of_app);
    // {A}{B}{F} ({x} of x A -> of (F x) (B x)) -> of (lam' A F) (pi' A B)
    let of_lam = Term::pi(
        "A",
        expr.clone(),
        pis(
            &["B", "F"],
            &fam,
            Term::arrow(
                Term::pi(
                    "x",
                    expr.clone(),
                    Term::arrow(
                        of(&b, v(0), v(3)),
                        of(&b, Term::app(v(1), v(0)), Term::app(v(2), v(0))),
                    ),
                ),
                of(&b, b.app("lam'", [v(2), v(0)]), b.app("pi'", [v(2), v(1)])),
            ),
        ),
    );
    b.decl("of_lam", of_lam);
    // tmOf := [A:expr] sub expr ([e:expr] of e A)
    let tm_of = Term::lam(
        "A",
        expr.clone(),
        Term::sub_type(
            expr.clone(),
            Term::lam("e", expr.clone(), of(&b, v(0), v(1))),
        ),
    );
    b.def("tmOf", Term::arrow(expr, Term::Type), tm_of);
    b.theory
}

fn fol_soft() -> Theory {
    let mut b = Builder::new(LogicId::FolSoft);
    let set = b.c("set");
    let prop = b.c("prop");
    let ded = |b: &Builder, x: Term| b.app("ded", [x]);
    let binop = Term::arrow(prop.clone(), Term::arrow(prop.clone(), prop.clone()));
    let pred = Term::arrow(set.clone(), prop.clone());

    b.decl("set", Term::Type);
    b.decl("prop", Term::Type);
    b.decl("ded", Term::arrow(prop.clone(), Term::Type));
    b.decl(
        "in'",
        Term::arrow(set.clone(), Term::arrow(set.clone(), prop.clone())),
    );
    b.decl(
        "eq'",
        Term::arrow(set.clone(), Term::arrow(set.clone(), prop.clone())),
    );
    b.decl("and'", binop.clone());
    b.decl("or'", binop.clone());
    b.decl("impl'", binop);
    b.decl("not'", Term::arrow(prop.clone(), prop.clone()));
    b.decl("forallSet", Term::arrow(pred.clone(), prop.clone()));

    let rule2 = |body: Term| pis(&["p", "q"], &prop, body);
    let impl_i = rule2(Term::arrow(
        Term::arrow(ded(&b, v(1)), ded(&b, v(0))),
        ded(&b, b.app("impl'", [v(1), v(0)])),
    ));
    b.decl("implI", impl_i);
    let impl_e = rule2(Term::arrow(
        ded(&b, b.app("impl'", [v(1), v(0)])),
        Term::arrow(ded(&b, v(1)), ded(&b, v(0))),
    ));
    b.decl("implE", impl_e);
    let and_i = rule2(Term::arrow(
        ded(&b, v(1)),
        Term::arrow(ded(&b, v(0)), ded(&b, b.app("and'", [v(1), v(0)]))),
    ));
    b.decl("andI", and_i);
    let and_el = rule2(Term::arrow(
        ded(&b, b.app("and'", [v(1), v(0)])),
        ded(&b, v(1)),
    ));
    b.decl("andEl", and_el);
    let and_er = rule2(Term::arrow(
        ded(&b, b.app("and'", [v(1), v(0)])),
        ded(&b, v(0)),
    ));
    b.decl("andEr", and_er);
    // {P: set -> prop} ({x:set} ded (P x)) -> ded (forallSet P)
    let forall_i = Term::pi(
        "P",
        pred.clone(),
        Term::arrow(
            Term::pi("x", set.clone(), ded(&b, Term::app(v(1), v(0)))),
            ded(&b, b.app("forallSet", [v(0)])),
        ),
    );
    b.decl("forallI", forall_i);
    let forall_e = Term::pi(
        "P",
        pred,
        Term::arrow(
            ded(&b, b.app("forallSet", [v(0)])),
            Term::pi("x", set, ded(&b, Term::app(v(1), v(0)))),
        ),
    );
    b.decl("forallE", forall_e);
    b.theory
}

/// `[A:tp] [P: tm A -> tm bool']`: a new type `T`, its representation
/// `rep : tm T -> tm A`, and the axiom that representations satisfy `P`.
fn type_definition_pattern() -> Pattern {
    let hol = LogicId::HolChurch;
    let tm = |x: Term| Term::app(hol.constant("tm"), x);
    let ded = |x: Term| Term::app(hol.constant("ded"), x);
    let name = Ident::new(LOGIC_NAMESPACE, LOGIC_DOCUMENT, "TypeDefinition").unwrap();
    let tmpl = |local: &str| Term::Const(name.child(local).unwrap());
    let params = Context::from_entries(vec![
        ("A".into(), hol.constant("tp")),
        ("P".into(), Term::arrow(tm(v(0)), tm(hol.constant("bool'")))),
    ]);
    let body = vec![
        Declaration::constant(name.child("T").unwrap(), hol.constant("tp"), DeclKind::Type),
        Declaration::constant(
            name.child("rep").unwrap(),
            Term::arrow(tm(tmpl("T")), tm(v(1))),
            DeclKind::Constant,
        ),
        Declaration::axiom(
            name.child("rep_prop").unwrap(),
            Term::pi(
                "x",
                tm(tmpl("T")),
                ded(Term::app(v(1), Term::app(tmpl("rep"), v(0)))),
            ),
        ),
    ];
    Pattern { name, params, body }
}

/// `[P: set -> set -> prop]`: a function symbol `func` and the axiom
/// `{x:set} ded (P x (func x))`.
fn func_definition_pattern() -> Pattern {
    let fol = LogicId::FolSoft;
    let set = fol.constant("set");
    let prop = fol.constant("prop");
    let name = Ident::new(LOGIC_NAMESPACE, LOGIC_DOCUMENT, "FuncDefinition").unwrap();
    let params = Context::from_entries(vec![(
        "P".into(),
        Term::arrow(set.clone(), Term::arrow(set.clone(), prop)),
    )]);
    let func = Term::Const(name.child("func").unwrap());
    let body = vec![
        Declaration::constant(
            name.child("func").unwrap(),
            Term::arrow(set.clone(), set.clone()),
            DeclKind::Constant,
        ),
        Declaration::axiom(
            name.child("def").unwrap(),
            Term::pi(
                "x",
                set,
                Term::app(
                    fol.constant("ded"),
                    Term::apps(v(1), [v(0), Term::app(func, v(0))]),
                ),
            ),
        ),
    ];
    Pattern { name, params, body }
}

pub fn func_definition_pattern_id() -> Ident {
    Ident::new(LOGIC_NAMESPACE, LOGIC_DOCUMENT, "FuncDefinition").unwrap()
}

pub fn type_definition_pattern_id() -> Ident {
    Ident::new(LOGIC_NAMESPACE, LOGIC_DOCUMENT, "TypeDefinition").unwrap()
}

/// Statement and proof term of `ded (forall bool' [p] impl p p)` in HOL.
pub fn hol_identity_theorem() -> (Term, Term) {
    let hol = LogicId::HolChurch;
    let c = |n: &str| hol.constant(n);
    let boolean = c("bool'");
    let tm_bool = Term::app(c("tm"), boolean.clone());
    let body = Term::lam("p", tm_bool.clone(), Term::apps(c("impl"), [v(0), v(0)]));
    let statement = Term::app(
        c("ded"),
        Term::apps(c("forall"), [boolean.clone(), body.clone()]),
    );
    let proof = Term::apps(
        c("forallI"),
        [
            boolean,
            body,
            Term::lam(
                "p",
                tm_bool,
                Term::apps(
                    c("implI"),
                    [v(0), v(0), Term::lam("h", Term::app(c("ded"), v(0)), v(0))],
                ),
            ),
        ],
    );
    (statement, proof)
}

/// Statement and proof term of `{p:prop} ded (impl' p p)` in soft FOL.
pub fn fol_identity_theorem() -> (Term, Term) {
    let fol = LogicId::FolSoft;
    let c = |n: &str| fol.constant(n);
    let statement = Term::pi(
        "p",
        c("prop"),
        Term::app(c("ded"), Term::apps(c("impl'"), [v(0), v(0)])),
    );
    let proof = Term::lam(
        "p",
        c("prop"),
        Term::apps(
            c("implI"),
            [v(0), v(0), Term::lam("h", Term::app(c("ded"), v(0)), v(0))],
        ),
    );
    (statement, proof)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("corpus has no term nodes")]
    EmptyCorpus,
}

fn corpus_size(lib: &Library) -> u64 {
    lib.declarations()
        .filter(|d| !matches!(d.kind(), DeclKind::Type | DeclKind::Constant))
        .flat_map(|d| d.terms())
        .map(|t| t.size() as u64)
        .sum()
}

/// Ratio of total term sizes (see [`Term::size`]) of a Church-encoded
/// library to a Curry-encoded library of the same corpus. Bare type and
/// constant declarations are signature, not corpus, and are not counted.
pub fn church_curry_size_ratio(
    church: &Library,
    curry: &Library,
) -> Result<Ratio<u64>, LogicError> {
    let (a, b) = (corpus_size(church), corpus_size(curry));
    if a == 0 || b == 0 {
        return Err(LogicError::EmptyCorpus);
    }
    Ok(Ratio::new(a, b))
}

/// Markdown listing of every built-in constant and pattern with its type.
pub fn encoding_catalog() -> String {
    let mut out = String::from("# Logic encodings\n\nGenerated by `oaf catalog`; do not edit.\n");
    for th in builtin_theories() {
        let _ = write!(out, "\n## {}\n\n`{}`\n\n", th.name.name(), th.name);
        for d in &th.decls {
            let tp = d.tp.as_ref().map(ToString::to_string).unwrap_or_default();
            let _ = write!(out, "- `{} : {}`", d.name.name(), tp);
            if let Some(def) = &d.definiens {
                let _ = write!(out, " `:= {def}`");
            }
            out.push('\n');
        }
    }
    for p in builtin_patterns() {
        let _ = write!(out, "\n## Pattern {}\n\n`{}`\n\n", p.name.name(), p.name);
        let mut names = Vec::new();
        for (hint, tp) in p.params.entries() {
            let _ = writeln!(out, "- parameter `{} : {}`", hint, tp.display_in(&names));
            names.push(hint.clone());
        }
        for d in &p.body {
            let tp = d.tp.as_ref().map(|t| t.display_in(&names).to_string());
            let _ = writeln!(
                out,
                "- template `{} : {}` ({})",
                d.name.name(),
                tp.unwrap_or_default(),
                d.kind()
            );
        }
    }
    out.push_str(NOT_IMPLEMENTED);
    out
}

const NOT_IMPLEMENTED: &str = "
## Alternatives not implemented

- IMPS-style partial functions: a definedness predicate on terms with
  quasi-equality. Could be added as a further encoding over `holChurch`.
- Universe-parametric type theories: a family of `tp_i` with cumulativity
  rules. LF has no universe polymorphism, so each level would need its own
  constants; only the single-universe `dttCurry` is provided.
";
