//! Random generators. Typed generators record the type of everything they
//! build, so the recorded type is the oracle for inference.

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use oaf_core::extensions::{Pattern, PatternInstance};
use oaf_core::importers::surface::{SurfaceTerm, SurfaceType, TypingEnv};
use oaf_core::kernel::{
    signature_of, Context, DeclKind, Declaration, Ident, Library, Metadata, Proof, Signature,
    SourceRef, Term, Theory,
};
use oaf_core::logic::LogicId;
use oaf_core::morphisms::Morphism;
use oaf_core::ontology::{Object, RdfTriple, TripleStore};

pub const TEST_NS: &str = "http://oaf.example.org/test";

fn hol(n: &str) -> Term {
    LogicId::HolChurch.constant(n)
}

// ---------------------------------------------------------------------------
// Typed LF terms over a small HOL signature

/// Object-level simple types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HTy {
    Bool,
    Ind,
    Arrow(Box<HTy>, Box<HTy>),
}

/// Framework-level types of generated terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GTy {
    Tm(HTy),
    Arr(Box<GTy>, Box<GTy>),
}

pub fn arrow(a: HTy, b: HTy) -> HTy {
    HTy::Arrow(Box::new(a), Box::new(b))
}

pub fn arr(a: GTy, b: GTy) -> GTy {
    GTy::Arr(Box::new(a), Box::new(b))
}

pub struct GenSig {
    pub lib: Library,
    pub theory: Ident,
    pub sig: Signature,
    pub consts: Vec<(Term, GTy)>,
    /// The object type standing for `HTy::Ind`.
    pub ind: Ident,
    /// Closed inhabitants used when nothing else fits.
    pub bool_atom: Term,
    pub ind_atom: Term,
    pub ind_fun: Term,
}

impl GenSig {
    pub fn ident(&self, local: &str) -> Ident {
        self.theory.child(local).unwrap()
    }

    pub fn hol_type(&self, t: &HTy) -> Term {
        match t {
            HTy::Bool => hol("bool'"),
            HTy::Ind => Term::Const(self.ind.clone()),
            HTy::Arrow(a, b) => Term::apps(hol("arrow"), [self.hol_type(a), self.hol_type(b)]),
        }
    }

    pub fn lf_type(&self, t: &GTy) -> Term {
        match t {
            GTy::Tm(h) => Term::app(hol("tm"), self.hol_type(h)),
            GTy::Arr(a, b) => Term::arrow(self.lf_type(a), self.lf_type(b)),
        }
    }

    pub fn context(&self, ctx: &[GTy]) -> Context {
        let mut c = Context::new();
        for (i, t) in ctx.iter().enumerate() {
            c.push(&format!("v{i}"), self.lf_type(t));
        }
        c
    }
}

/// Theory `Gen` over HOL with constants of assorted shapes and two
/// definitions.
pub fn gen_signature() -> GenSig {
    let theory = Ident::new(TEST_NS, "gen", "Gen").unwrap();
    let mut th = Theory::new(theory.clone(), Some(LogicId::HolChurch.ident()));
    let mut consts = Vec::new();
    let tm = |t: Term| Term::app(hol("tm"), t);
    let ind = Term::Const(theory.child("ind").unwrap());
    th.push(Declaration::constant(th.symbol("ind"), hol("tp"), DeclKind::Type));
    let mut add = |th: &mut Theory, name: &str, g: GTy, tp: Term, def: Option<Term>| {
        let id = th.symbol(name);
        let d = match def {
            Some(def) => Declaration::defined(id.clone(), Some(tp), def),
            None => Declaration::constant(id.clone(), tp, DeclKind::Constant),
        };
        th.push(d);
        consts.push((Term::Const(id), g));
    };
    let b = || GTy::Tm(HTy::Bool);
    let i = || GTy::Tm(HTy::Ind);
    add(&mut th, "c", b(), tm(hol("bool'")), None);
    add(&mut th, "a", i(), tm(ind.clone()), None);
    add(
        &mut th,
        "f",
        GTy::Tm(arrow(HTy::Ind, HTy::Bool)),
        tm(Term::apps(hol("arrow"), [ind.clone(), hol("bool'")])),
        None,
    );
    add(&mut th, "g", arr(i(), i()), Term::arrow(tm(ind.clone()), tm(ind.clone())), None);
    add(
        &mut th,
        "h",
        arr(b(), arr(i(), b())),
        Term::arrow(tm(hol("bool'")), Term::arrow(tm(ind.clone()), tm(hol("bool'")))),
        None,
    );
    add(
        &mut th,
        "k",
        GTy::Tm(arrow(HTy::Bool, arrow(HTy::Ind, HTy::Ind))),
        tm(Term::apps(
            hol("arrow"),
            [hol("bool'"), Term::apps(hol("arrow"), [ind.clone(), ind.clone()])],
        )),
        None,
    );
    add(
        &mut th,
        "did",
        arr(i(), i()),
        Term::arrow(tm(ind.clone()), tm(ind.clone())),
        Some(Term::lam("x", tm(ind.clone()), Term::var(0))),
    );
    let f = Term::Const(theory.child("f").unwrap());
    let a = Term::Const(theory.child("a").unwrap());
    add(
        &mut th,
        "dc",
        b(),
        tm(hol("bool'")),
        Some(Term::apps(hol("app"), [ind.clone(), hol("bool'"), f, a])),
    );
    let mut lib = Library::new(TEST_NS);
    lib.theories.push(th);
    let sig = signature_of(&lib, &theory).unwrap();
    GenSig {
        ind: theory.child("ind").unwrap(),
        bool_atom: Term::Const(theory.child("c").unwrap()),
        ind_atom: Term::Const(theory.child("a").unwrap()),
        ind_fun: Term::Const(theory.child("g").unwrap()),
        lib,
        theory,
        sig,
        consts,
    }
}

/// Generator view of a monoid-shaped theory: carrier `carrier`, binary
/// `op` and unit `unit`, all framework-level.
pub fn structure_signature(lib: &Library, theory: &Ident, carrier: &str, op: &str, unit: &str) -> GenSig {
    let id = |n: &str| theory.child(n).unwrap();
    let i = || GTy::Tm(HTy::Ind);
    let e = Term::Const(id(unit));
    let consts = vec![
        (e.clone(), i()),
        (Term::Const(id(op)), arr(i(), arr(i(), i()))),
    ];
    GenSig {
        lib: lib.clone(),
        theory: theory.clone(),
        sig: signature_of(lib, theory).unwrap(),
        consts,
        ind: id(carrier),
        bool_atom: Term::apps(hol("eq"), [Term::Const(id(carrier)), e.clone(), e.clone()]),
        ind_atom: e.clone(),
        ind_fun: Term::app(Term::Const(id(op)), e),
    }
}

pub fn random_hty(rng: &mut StdRng, depth: usize) -> HTy {
    match rng.gen_range(0..if depth == 0 { 2 } else { 4 }) {
        0 => HTy::Bool,
        1 => HTy::Ind,
        _ => arrow(random_hty(rng, depth - 1), random_hty(rng, depth - 1)),
    }
}

pub fn random_gty(rng: &mut StdRng, depth: usize) -> GTy {
    if depth > 0 && rng.gen_bool(0.25) {
        arr(random_gty(rng, depth - 1), random_gty(rng, depth - 1))
    } else {
        GTy::Tm(random_hty(rng, depth.min(1)))
    }
}

pub struct TermGen<'a> {
    pub sig: &'a GenSig,
}

impl TermGen<'_> {
    /// A term of type `ty` in `ctx` (innermost last).
    pub fn term(&self, rng: &mut StdRng, ctx: &mut Vec<GTy>, ty: &GTy, depth: usize) -> Term {
        let mut atoms: Vec<Term> = ctx
            .iter()
            .enumerate()
            .filter(|(_, t)| *t == ty)
            .map(|(i, _)| Term::var(ctx.len() - 1 - i))
            .collect();
        atoms.extend(self.sig.consts.iter().filter(|(_, t)| t == ty).map(|(c, _)| c.clone()));
        if depth == 0 || (!atoms.is_empty() && rng.gen_bool(0.3)) {
            return match atoms.choose(rng) {
                Some(a) => a.clone(),
                None => self.structural(rng, ctx, ty, depth),
            };
        }
        self.structural(rng, ctx, ty, depth)
    }

    fn sub(&self, rng: &mut StdRng, ctx: &mut Vec<GTy>, ty: &GTy, depth: usize) -> Term {
        self.term(rng, ctx, ty, depth.saturating_sub(1))
    }

    fn under(&self, rng: &mut StdRng, ctx: &mut Vec<GTy>, bound: GTy, ty: &GTy, depth: usize) -> Term {
        ctx.push(bound);
        let t = self.sub(rng, ctx, ty, depth);
        ctx.pop();
        t
    }

    fn structural(&self, rng: &mut StdRng, ctx: &mut Vec<GTy>, ty: &GTy, depth: usize) -> Term {
        let s = self.sig;
        // Framework-level application of a generated function: makes redexes.
        if depth > 0 && rng.gen_bool(0.25) {
            let a = random_gty(rng, 1);
            let f = self.sub(rng, ctx, &arr(a.clone(), ty.clone()), depth);
            let x = self.sub(rng, ctx, &a, depth);
            return Term::app(f, x);
        }
        match ty {
            GTy::Arr(a, b) => {
                let body = self.under(rng, ctx, (**a).clone(), b, depth);
                Term::lam("x", s.lf_type(a), body)
            }
            GTy::Tm(HTy::Arrow(a, b)) => {
                let body = self.under(rng, ctx, GTy::Tm((**a).clone()), &GTy::Tm((**b).clone()), depth);
                Term::apps(
                    hol("lam"),
                    [
                        s.hol_type(a),
                        s.hol_type(b),
                        Term::lam("y", s.lf_type(&GTy::Tm((**a).clone())), body),
                    ],
                )
            }
            GTy::Tm(base) => {
                let choice = if depth == 0 { 0 } else { rng.gen_range(0..5) };
                match (choice, base) {
                    (1, _) => {
                        let a = random_hty(rng, 1);
                        let f = self.sub(rng, ctx, &GTy::Tm(arrow(a.clone(), base.clone())), depth);
                        let x = self.sub(rng, ctx, &GTy::Tm(a.clone()), depth);
                        Term::apps(hol("app"), [s.hol_type(&a), s.hol_type(base), f, x])
                    }
                    (2, HTy::Bool) => {
                        let p = self.sub(rng, ctx, ty, depth);
                        let q = self.sub(rng, ctx, ty, depth);
                        Term::apps(hol("impl"), [p, q])
                    }
                    (3, HTy::Bool) => {
                        let a = random_hty(rng, 1);
                        let x = self.sub(rng, ctx, &GTy::Tm(a.clone()), depth);
                        let y = self.sub(rng, ctx, &GTy::Tm(a.clone()), depth);
                        Term::apps(hol("eq"), [s.hol_type(&a), x, y])
                    }
                    (4, HTy::Bool) => {
                        let a = random_hty(rng, 1);
                        let body = self.under(rng, ctx, GTy::Tm(a.clone()), ty, depth);
                        Term::apps(
                            hol("forall"),
                            [s.hol_type(&a), Term::lam("z", s.lf_type(&GTy::Tm(a)), body)],
                        )
                    }
                    (4, HTy::Ind) => {
                        let x = self.sub(rng, ctx, ty, depth);
                        Term::app(s.ind_fun.clone(), x)
                    }
                    _ => match base {
                        HTy::Bool => s.bool_atom.clone(),
                        HTy::Ind => s.ind_atom.clone(),
                        HTy::Arrow(..) => unreachable!(),
                    },
                }
            }
        }
    }
}

/// Replaces every binder hint with a random string.
pub fn rehint(rng: &mut StdRng, t: &Term) -> Term {
    let h = |rng: &mut StdRng| -> String {
        let pool = ["x", "y", "p", "q", "_", "α", "x'", "long_name", ""];
        pool.choose(rng).unwrap().to_string()
    };
    match t {
        Term::Const(_) | Term::Var(_) | Term::Type => t.clone(),
        Term::Apply(f, a) => Term::app(rehint(rng, f), rehint(rng, a)),
        Term::Lambda(_, d, b) => {
            let n = h(rng);
            Term::lam(&n, rehint(rng, d), rehint(rng, b))
        }
        Term::Pi(_, d, b) => {
            let n = h(rng);
            Term::pi(&n, rehint(rng, d), rehint(rng, b))
        }
        Term::SubType(a, p) => Term::sub_type(rehint(rng, a), rehint(rng, p)),
        Term::SubIn(a, p) => Term::sub_in(rehint(rng, a), rehint(rng, p)),
        Term::SubOut(a) => Term::sub_out(rehint(rng, a)),
    }
}

// ---------------------------------------------------------------------------
// Untyped well-scoped terms (substitution oracle, serialization)

pub fn random_scoped_term(rng: &mut StdRng, consts: &[Ident], bound: usize, size: usize) -> Term {
    let leaf = |rng: &mut StdRng| -> Term {
        match rng.gen_range(0..10) {
            0 => Term::Type,
            1..=5 if bound > 0 => Term::var(rng.gen_range(0..bound)),
            _ if !consts.is_empty() => Term::Const(consts.choose(rng).unwrap().clone()),
            _ if bound > 0 => Term::var(rng.gen_range(0..bound)),
            _ => Term::Type,
        }
    };
    if size <= 1 {
        return leaf(rng);
    }
    let hints = ["x", "y", "P", "", "h'", "ϕ", "a<b"];
    let hint = hints.choose(rng).unwrap().to_string();
    match rng.gen_range(0..9) {
        0 | 1 => {
            let k = rng.gen_range(1..size);
            Term::app(
                random_scoped_term(rng, consts, bound, k),
                random_scoped_term(rng, consts, bound, size - k),
            )
        }
        2 | 3 => {
            let k = rng.gen_range(1..size);
            Term::lam(
                &hint,
                random_scoped_term(rng, consts, bound, k),
                random_scoped_term(rng, consts, bound + 1, size - k),
            )
        }
        4 => {
            let k = rng.gen_range(1..size);
            Term::pi(
                &hint,
                random_scoped_term(rng, consts, bound, k),
                random_scoped_term(rng, consts, bound + 1, size - k),
            )
        }
        5 => {
            let k = rng.gen_range(1..size);
            Term::sub_type(
                random_scoped_term(rng, consts, bound, k),
                random_scoped_term(rng, consts, bound, size - k),
            )
        }
        6 => {
            let k = rng.gen_range(1..size);
            Term::sub_in(
                random_scoped_term(rng, consts, bound, k),
                random_scoped_term(rng, consts, bound, size - k),
            )
        }
        7 => Term::sub_out(random_scoped_term(rng, consts, bound, size - 1)),
        _ => leaf(rng),
    }
}

/// A scoped term of random size below `max`.
pub fn sized_term(rng: &mut StdRng, consts: &[Ident], bound: usize, max: usize) -> Term {
    let size = rng.gen_range(1..max);
    random_scoped_term(rng, consts, bound, size)
}

// ---------------------------------------------------------------------------
// Surface terms with recorded simple types

pub struct SurfaceGen {
    pub env: TypingEnv,
    pub constants: Vec<(String, SurfaceType)>,
}

pub fn st_bool() -> SurfaceType {
    SurfaceType::bool()
}

pub fn st_ind() -> SurfaceType {
    SurfaceType::base("ind")
}

pub fn st_arrow(a: SurfaceType, b: SurfaceType) -> SurfaceType {
    SurfaceType::arrow(a, b)
}

/// Surface view of [`gen_signature`]'s object-level constants.
pub fn surface_gen(sig: &GenSig) -> SurfaceGen {
    let mut env = TypingEnv::hol();
    env.declare_type("ind", sig.ident("ind"));
    let constants = vec![
        ("c".to_string(), st_bool()),
        ("a".to_string(), st_ind()),
        ("f".to_string(), st_arrow(st_ind(), st_bool())),
        ("k".to_string(), st_arrow(st_bool(), st_arrow(st_ind(), st_ind()))),
    ];
    for (n, t) in &constants {
        env.declare_constant(n, sig.ident(n), t.clone());
    }
    SurfaceGen { env, constants }
}

pub fn random_stype(rng: &mut StdRng, depth: usize) -> SurfaceType {
    match rng.gen_range(0..if depth == 0 { 2 } else { 4 }) {
        0 => st_bool(),
        1 => st_ind(),
        _ => st_arrow(random_stype(rng, depth - 1), random_stype(rng, depth - 1)),
    }
}

impl SurfaceGen {
    /// A surface term of type `ty`. Unannotated binders only occur applied
    /// to an argument of known type, and the bare polymorphic `eq` only as an
    /// argument to a function of known type, so every generated term has a
    /// principal ground type equal to `ty`.
    pub fn term(
        &self,
        rng: &mut StdRng,
        locals: &mut Vec<(String, SurfaceType)>,
        ty: &SurfaceType,
        depth: usize,
        bare_ok: bool,
    ) -> SurfaceTerm {
        let mut atoms: Vec<SurfaceTerm> = Vec::new();
        for (i, (n, t)) in locals.iter().enumerate() {
            let shadowed = locals[i + 1..].iter().any(|(m, _)| m == n);
            if t == ty && !shadowed {
                atoms.push(SurfaceTerm::name(n));
            }
        }
        let local_names: BTreeSet<&str> = locals.iter().map(|(n, _)| n.as_str()).collect();
        for (n, t) in &self.constants {
            if t == ty && !local_names.contains(n.as_str()) {
                atoms.push(SurfaceTerm::name(n));
            }
        }
        let b = st_bool();
        if *ty == st_arrow(b.clone(), st_arrow(b.clone(), b.clone())) && !local_names.contains("impl") {
            atoms.push(SurfaceTerm::name("impl"));
        }
        if bare_ok && !local_names.contains("eq") {
            if let SurfaceType::Arrow(a, rest) = ty {
                if **rest == st_arrow((**a).clone(), b.clone()) {
                    atoms.push(SurfaceTerm::name("eq"));
                }
            }
        }
        if depth == 0 || (!atoms.is_empty() && rng.gen_bool(0.3)) {
            if let Some(a) = atoms.choose(rng) {
                return a.clone();
            }
        }
        let d = depth.saturating_sub(1);
        let fresh = format!("x{}", locals.len());
        let choice = rng.gen_range(0..6);
        match (choice, ty) {
            (0, _) if depth > 0 => {
                let a = random_stype(rng, 1);
                let f = self.term(rng, locals, &st_arrow(a.clone(), ty.clone()), d, false);
                let x = self.term(rng, locals, &a, d, true);
                SurfaceTerm::app(f, x)
            }
            (1, _) if depth > 0 => {
                // Unannotated binder, domain fixed by the argument.
                let a = random_stype(rng, 1);
                let x = self.term(rng, locals, &a, d, false);
                locals.push((fresh.clone(), a));
                let body = self.term(rng, locals, ty, d, false);
                locals.pop();
                SurfaceTerm::app(SurfaceTerm::abs(&fresh, None, body), x)
            }
            (_, SurfaceType::Arrow(a, r)) => {
                locals.push((fresh.clone(), (**a).clone()));
                let body = self.term(rng, locals, r, d, false);
                locals.pop();
                SurfaceTerm::abs(&fresh, Some((**a).clone()), body)
            }
            (2, SurfaceType::Base(n)) if n == "bool'" && depth > 0 => {
                let p = self.term(rng, locals, ty, d, false);
                let q = self.term(rng, locals, ty, d, false);
                SurfaceTerm::app(SurfaceTerm::app(SurfaceTerm::name("impl"), p), q)
            }
            (3, SurfaceType::Base(n)) if n == "bool'" && depth > 0 => {
                let a = random_stype(rng, 1);
                let x = self.term(rng, locals, &a, d, false);
                let y = self.term(rng, locals, &a, d, false);
                SurfaceTerm::app(SurfaceTerm::app(SurfaceTerm::name("eq"), x), y)
            }
            (4, SurfaceType::Base(n)) if n == "bool'" && depth > 0 => {
                let a = random_stype(rng, 1);
                locals.push((fresh.clone(), a.clone()));
                let body = self.term(rng, locals, ty, d, false);
                locals.pop();
                SurfaceTerm::forall(&fresh, Some(a), body)
            }
            _ => match atoms.first() {
                Some(a) => a.clone(),
                None => {
                    // Every base type has a constant; reach one by application.
                    let via = self
                        .constants
                        .iter()
                        .find(|(n, _)| n == if *ty == st_bool() { "c" } else { "a" })
                        .unwrap();
                    SurfaceTerm::name(&via.0)
                }
            },
        }
    }
}

// ---------------------------------------------------------------------------
// Random libraries for serialization round trips

const WEIRD: [&str; 8] = ["", "<tag>", "a & b", "quote \"q\" 'a'", "line\nbreak\ttab", "]]>", "∀x. φ", "  padded  "];

fn random_text(rng: &mut StdRng) -> String {
    let mut s = WEIRD.choose(rng).unwrap().to_string();
    if rng.gen_bool(0.5) {
        s.push_str(&rng.gen_range(0..1000).to_string());
    }
    s
}

fn random_meta(rng: &mut StdRng, kind: DeclKind) -> Metadata {
    let mut m = Metadata::of_kind(kind);
    if rng.gen_bool(0.5) {
        let sl = rng.gen_range(1..100);
        let sc = rng.gen_range(1..80);
        let el = sl + rng.gen_range(0..3);
        let ec = if el == sl { sc + rng.gen_range(0..10) } else { rng.gen_range(1..80) };
        let file = ["a.thy", "dir/b c.v", "ü.miz"].choose(rng).unwrap().to_string();
        m.source_ref = SourceRef::new(file, (sl, sc), (el, ec));
    }
    for _ in 0..rng.gen_range(0..3) {
        m.comments.push(random_text(rng));
    }
    if rng.gen_bool(0.3) {
        m.notation = Some(random_text(rng));
    }
    m
}

fn meta_idents(logic: Option<LogicId>) -> Vec<Ident> {
    logic
        .map(|l| l.theory().decls.iter().map(|d| d.name.clone()).collect())
        .unwrap_or_default()
}

/// A library whose every reference resolves; terms are well-scoped but not
/// necessarily well-typed.
pub fn random_library(rng: &mut StdRng) -> Library {
    let ns = ["http://ex.org/lib", "http://ex.org/a&b<c>", "urn:x:ü"].choose(rng).unwrap().to_string();
    let mut lib = Library::new(ns.clone());
    let logics = [None, Some(LogicId::HolChurch), Some(LogicId::DttCurry), Some(LogicId::FolSoft)];

    for p in 0..rng.gen_range(0..3) {
        let name = Ident::new(&ns, "doc", &format!("Pat{p}")).unwrap();
        let mut params = Context::new();
        for i in 0..rng.gen_range(0..3) {
            let tp = sized_term(rng, &meta_idents(Some(LogicId::HolChurch)), i, 4);
            params.push(&format!("P{i}"), tp);
        }
        let mut body: Vec<Declaration> = Vec::new();
        for j in 0..rng.gen_range(0..3) {
            let mut consts = meta_idents(Some(LogicId::HolChurch));
            consts.extend(body.iter().map(|d| d.name.clone()));
            let tp = sized_term(rng, &consts, params.len(), 6);
            let kind = *[DeclKind::Constant, DeclKind::Axiom].choose(rng).unwrap();
            let mut d = Declaration::constant(name.child(&format!("t{j}")).unwrap(), tp, kind);
            d.meta = random_meta(rng, kind);
            body.push(d);
        }
        lib.patterns.push(Pattern { name, params, body });
    }

    let mut visible: Vec<Vec<Ident>> = Vec::new();
    for t in 0..rng.gen_range(1..5) {
        let logic = *logics.choose(rng).unwrap();
        let name = Ident::new(&ns, "doc", &format!("T{t}")).unwrap();
        let mut th = Theory::new(name, logic.map(LogicId::ident));
        let mut consts = meta_idents(logic);
        for (i, vis) in visible.iter().enumerate() {
            if rng.gen_bool(0.4) {
                th.includes.push(lib.theories[i].name.clone());
                consts.extend(vis.iter().cloned());
            }
        }
        let mut citable: Vec<Ident> = Vec::new();
        let mut own = Vec::new();
        if !lib.patterns.is_empty() && rng.gen_bool(0.5) {
            let pat = lib.patterns.choose(rng).unwrap().clone();
            let inst = PatternInstance {
                name: th.symbol("inst"),
                pattern: pat.name.clone(),
                args: (0..pat.arity())
                    .map(|_| sized_term(rng, &consts, 0, 5))
                    .collect(),
            };
            let mut d = Declaration::constant(inst.generated_name("gen"), Term::Type, DeclKind::PatternInstance);
            d.meta.origin = Some(inst.name.clone());
            d.proof = Some(Proof::Omitted);
            citable.push(d.name.clone());
            own.push(d.name.clone());
            th.push(d);
            th.instances.push(inst);
        }
        for j in 0..rng.gen_range(0..7) {
            let local = ["c", "d'", "x_y", "α"].choose(rng).unwrap().to_string() + &j.to_string();
            let kind = *DeclKind::ALL[..5].choose(rng).unwrap();
            let mut scope = consts.clone();
            scope.extend(own.iter().cloned());
            let tp = sized_term(rng, &scope, 0, 8);
            let def = rng
                .gen_bool(0.3)
                .then(|| sized_term(rng, &scope, 0, 8));
            let mut d = Declaration::constant(th.symbol(&local), tp, kind);
            d.definiens = def;
            if rng.gen_bool(0.1) && d.definiens.is_some() {
                d.tp = None;
            }
            d.proof = match kind {
                DeclKind::Theorem => Some(match rng.gen_range(0..3) {
                    0 => Proof::Omitted,
                    1 => Proof::depends_on(
                        (0..rng.gen_range(0..4))
                            .filter_map(|_| citable.choose(rng).cloned())
                            .collect::<Vec<_>>(),
                    ),
                    _ => Proof::ProofTerm(sized_term(rng, &scope, 0, 6)),
                }),
                DeclKind::Axiom if rng.gen_bool(0.5) => Some(Proof::Omitted),
                _ => None,
            };
            d.meta = random_meta(rng, kind);
            if kind.is_citable() {
                citable.push(d.name.clone());
            }
            own.push(d.name.clone());
            th.push(d);
        }
        let mut vis = consts[meta_idents(logic).len()..].to_vec();
        vis.extend(own);
        vis.sort();
        vis.dedup();
        visible.push(vis);
        lib.theories.push(th);
    }

    for k in 0..rng.gen_range(0..3) {
        let from = rng.gen_range(0..lib.theories.len());
        let to = rng.gen_range(0..lib.theories.len());
        let name = Ident::new(&ns, "doc", &format!("m{k}")).unwrap();
        let mut m = Morphism::new(name, lib.theories[from].name.clone(), lib.theories[to].name.clone());
        for c in visible[from].iter().take(3) {
            let t = sized_term(rng, &visible[to], 0, 4);
            m.assign(c.clone(), t);
        }
        lib.morphisms.push(m);
    }
    lib
}

// ---------------------------------------------------------------------------
// Triple stores and dependency DAGs

pub fn random_store(rng: &mut StdRng) -> TripleStore {
    let iri = |rng: &mut StdRng| -> String {
        let bodies = ["a", "b?c?d", "é", "x%20y", "p/q#r", "ü'", "(n)"];
        format!("http://ex.org/{}{}", bodies.choose(rng).unwrap(), rng.gen_range(0..20))
    };
    let literal = |rng: &mut StdRng| -> String {
        let parts = ["plain", "quote\"", "back\\slash", "nl\n", "cr\r", "tab\t", "bell\u{7}", "∀", "", " "];
        (0..rng.gen_range(0..4)).map(|_| *parts.choose(rng).unwrap()).collect()
    };
    (0..rng.gen_range(0..40))
        .map(|_| {
            let object = if rng.gen_bool(0.5) {
                Object::Iri(iri(rng))
            } else {
                Object::Literal(literal(rng))
            };
            RdfTriple::new(iri(rng), iri(rng), object)
        })
        .collect()
}

/// A DAG library: node `n_i` depends only on nodes with smaller index,
/// through its type (`uses`) or through a `DependsOn` proof
/// (`justifiedBy`). Returns the library and the edge list it was built from.
pub fn random_dag(rng: &mut StdRng, nodes: usize) -> (Library, BTreeMap<Ident, BTreeSet<Ident>>) {
    let th_id = Ident::new(TEST_NS, "dag", "Dag").unwrap();
    let mut th = Theory::new(th_id, None);
    let base = th.symbol("o");
    th.push(Declaration::constant(base.clone(), Term::Type, DeclKind::Type));
    let mut edges: BTreeMap<Ident, BTreeSet<Ident>> = BTreeMap::new();
    edges.insert(base.clone(), BTreeSet::new());
    let mut names: Vec<Ident> = Vec::new();
    let density = rng.gen_range(0.0..0.08);
    for i in 0..nodes {
        let id = th.symbol(&format!("n{i}"));
        let mut uses = Vec::new();
        let mut just = Vec::new();
        for prev in &names {
            if rng.gen_bool(density) {
                if rng.gen_bool(0.5) {
                    uses.push(prev.clone());
                } else {
                    just.push(prev.clone());
                }
            }
        }
        let tp = Term::apps(Term::Const(base.clone()), uses.iter().cloned().map(Term::Const));
        let kind = if just.is_empty() {
            *[DeclKind::Constant, DeclKind::Axiom, DeclKind::Theorem].choose(rng).unwrap()
        } else {
            DeclKind::Theorem
        };
        let mut d = Declaration::constant(id.clone(), tp, kind);
        if kind == DeclKind::Theorem {
            d.proof = Some(Proof::depends_on(just.clone()));
        }
        th.push(d);
        let e = edges.entry(id.clone()).or_default();
        e.insert(base.clone());
        e.extend(uses);
        e.extend(just);
        names.push(id);
    }
    let mut lib = Library::new(TEST_NS);
    lib.theories.push(th);
    (lib, edges)
}

/// Reference BFS over an adjacency list.
pub fn bfs(edges: &BTreeMap<Ident, BTreeSet<Ident>>, start: &Ident) -> BTreeSet<Ident> {
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = std::collections::VecDeque::from([start.clone()]);
    while let Some(n) = queue.pop_front() {
        for m in edges.get(&n).into_iter().flatten() {
            if seen.insert(m.clone()) {
                queue.push_back(m.clone());
            }
        }
    }
    seen
}

// ---------------------------------------------------------------------------
// Prover sources with known declaration positions

/// Text in which each name occurs exactly once followed by a definition
/// marker; returns the text and the recorded `(line, col)` of each name.
pub fn random_source(rng: &mut StdRng, names: &[String]) -> (String, BTreeMap<String, (u32, u32)>) {
    let mut lines: Vec<String> = Vec::new();
    let mut positions = BTreeMap::new();
    let keywords = ["theorem ", "lemma ", "def ", "", "  ", "axiom\t"];
    let noise = ["(* comment *)", "proof -", "  by simp", "qed", "", "end"];
    for n in names {
        for _ in 0..rng.gen_range(0..3) {
            let mut l = noise.choose(rng).unwrap().to_string();
            if rng.gen_bool(0.3) {
                // Mentions without a marker must not be picked up.
                if let Some(other) = names.choose(rng) {
                    l = format!("  using {other} by auto");
                }
            }
            lines.push(l);
        }
        let prefix = keywords.choose(rng).unwrap();
        let marker = [":", ":=", " :", "  := "].choose(rng).unwrap();
        let col = prefix.chars().count() as u32 + 1;
        lines.push(format!("{prefix}{n}{marker} body"));
        positions.insert(n.clone(), (lines.len() as u32, col));
    }
    (lines.join("\n") + "\n", positions)
}
