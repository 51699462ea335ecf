//! Property checks shared by the integration tests and the acceptance run.
//! Each returns `Err` with a description of the counterexample.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use oaf_core::importers::surface::{infer_church_annotations, SurfaceType};
use oaf_core::kernel::{Context, Ident, Kernel, KernelConfig, Library, Signature, Term, TheoryChecker};
use oaf_core::logic::LogicId;

use super::gen::{random_gty, rehint, GTy, GenSig, SurfaceGen, TermGen, TEST_NS};

pub type Outcome = Result<(), String>;

fn kernel(sig: &Signature) -> Kernel<'_> {
    Kernel::with_config(sig, KernelConfig::default())
}

pub struct Sample {
    pub ctx: Vec<GTy>,
    pub term: Term,
    pub ty: GTy,
}

pub fn sample(gs: &GenSig, rng: &mut StdRng) -> Sample {
    let ctx: Vec<GTy> = (0..rng.gen_range(0..3)).map(|_| random_gty(rng, 1)).collect();
    let ty = random_gty(rng, 2);
    let depth = rng.gen_range(1..5);
    let mut scratch = ctx.clone();
    let mut term = TermGen { sig: gs }.term(rng, &mut scratch, &ty, depth);
    if rng.gen_bool(0.4) {
        // Explicit redex around the whole term.
        term = Term::app(Term::lam("r", gs.lf_type(&ty), Term::var(0)), term);
    }
    Sample { ctx, term, ty }
}

fn show(gs: &GenSig, s: &Sample) -> String {
    let names: Vec<String> = (0..s.ctx.len()).map(|i| format!("v{i}")).collect();
    format!("{} : {}", s.term.display_in(&names), gs.lf_type(&s.ty))
}

/// infer returns the generator's type up to `equal`.
pub fn infer_matches(gs: &GenSig, rng: &mut StdRng) -> Outcome {
    let s = sample(gs, rng);
    let k = kernel(&gs.sig);
    let ctx = gs.context(&s.ctx);
    let found = k.infer(&ctx, &s.term).map_err(|e| format!("{}: {e}", show(gs, &s)))?;
    if k.equal(&ctx, &found, &gs.lf_type(&s.ty)).map_err(|e| e.to_string())? {
        Ok(())
    } else {
        Err(format!("{}: inferred {found}", show(gs, &s)))
    }
}

pub fn substitution_lemma(gs: &GenSig, rng: &mut StdRng) -> Outcome {
    let k = kernel(&gs.sig);
    let outer: Vec<GTy> = (0..rng.gen_range(0..2)).map(|_| random_gty(rng, 1)).collect();
    let a = random_gty(rng, 1);
    let b = random_gty(rng, 2);
    let tg = TermGen { sig: gs };
    let mut inner = outer.clone();
    inner.push(a.clone());
    let depth = rng.gen_range(1..5);
    let t = tg.term(rng, &mut inner.clone(), &b, depth);
    let sd = rng.gen_range(0..3);
    let s = tg.term(rng, &mut outer.clone(), &a, sd);
    let (ctx_in, ctx_out) = (gs.context(&inner), gs.context(&outer));
    let (lf_a, lf_b) = (gs.lf_type(&a), gs.lf_type(&b));
    k.check(&ctx_out, &lf_a, &Term::Type).map_err(|e| format!("A: {e}"))?;
    k.check(&ctx_in, &t, &lf_b).map_err(|e| format!("premise t: {e}"))?;
    k.check(&ctx_out, &s, &lf_a).map_err(|e| format!("premise s: {e}"))?;
    let st = t.substitute(0, &s);
    k.check(&ctx_out, &st, &lf_b.substitute(0, &s))
        .map_err(|e| format!("t = {t}, s = {s}, t[s] = {st}: {e}"))
}

pub fn subject_reduction(gs: &GenSig, rng: &mut StdRng) -> Outcome {
    let s = sample(gs, rng);
    let k = kernel(&gs.sig);
    let ctx = gs.context(&s.ctx);
    let u = k.infer(&ctx, &s.term).map_err(|e| e.to_string())?;
    let w = k.whnf(&s.term).map_err(|e| e.to_string())?;
    let u2 = k.infer(&ctx, &w).map_err(|e| format!("whnf {w}: {e}"))?;
    if k.equal(&ctx, &u, &u2).map_err(|e| e.to_string())? {
        Ok(())
    } else {
        Err(format!("{}: {u} became {u2} after whnf", show(gs, &s)))
    }
}

pub fn whnf_idempotent(gs: &GenSig, rng: &mut StdRng) -> Outcome {
    let s = sample(gs, rng);
    let k = kernel(&gs.sig);
    let w = k.whnf(&s.term).map_err(|e| e.to_string())?;
    let ww = k.whnf(&w).map_err(|e| e.to_string())?;
    if w.identical(&ww) {
        Ok(())
    } else {
        Err(format!("whnf {w} reduced further to {ww}"))
    }
}

pub fn alpha_invariance(gs: &GenSig, rng: &mut StdRng) -> Outcome {
    let s = sample(gs, rng);
    let other = TermGen { sig: gs }.term(rng, &mut s.ctx.clone(), &s.ty, 2);
    let k = kernel(&gs.sig);
    let ctx = gs.context(&s.ctx);
    let renamed = rehint(rng, &s.term);
    let tp = gs.lf_type(&s.ty);
    let renamed_tp = rehint(rng, &tp);
    let i1 = k.infer(&ctx, &s.term).map_err(|e| e.to_string())?;
    let i2 = k.infer(&ctx, &renamed).map_err(|e| e.to_string())?;
    if i1 != i2 {
        return Err(format!("infer changed under renaming: {i1} vs {i2}"));
    }
    if k.check(&ctx, &s.term, &tp).is_ok() != k.check(&ctx, &renamed, &renamed_tp).is_ok() {
        return Err(format!("check outcome changed for {}", show(gs, &s)));
    }
    let e1 = k.equal(&ctx, &s.term, &other).map_err(|e| e.to_string())?;
    let e2 = k.equal(&ctx, &renamed, &other).map_err(|e| e.to_string())?;
    if e1 != e2 || !k.equal(&ctx, &s.term, &renamed).map_err(|e| e.to_string())? {
        return Err(format!("equal changed under renaming for {}", show(gs, &s)));
    }
    Ok(())
}

/// Reflexivity, symmetry, transitivity and congruence under application on
/// a pool of same-typed terms including convertible variants.
pub fn equal_equivalence(gs: &GenSig, rng: &mut StdRng) -> Outcome {
    let s = sample(gs, rng);
    let k = kernel(&gs.sig);
    let ctx = gs.context(&s.ctx);
    let tp = gs.lf_type(&s.ty);
    let tg = TermGen { sig: gs };
    let mut pool = vec![
        s.term.clone(),
        Term::app(Term::lam("i", tp.clone(), Term::var(0)), s.term.clone()),
        k.whnf(&s.term).map_err(|e| e.to_string())?,
        tg.term(rng, &mut s.ctx.clone(), &s.ty, 2),
    ];
    pool.push(tg.term(rng, &mut s.ctx.clone(), &s.ty, 1));
    let n = pool.len();
    let mut eq = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            eq[i][j] = k.equal(&ctx, &pool[i], &pool[j]).map_err(|e| e.to_string())?;
        }
    }
    for i in 0..n {
        if !eq[i][i] {
            return Err(format!("not reflexive on {}", pool[i]));
        }
        for j in 0..n {
            if eq[i][j] != eq[j][i] {
                return Err(format!("not symmetric on {} / {}", pool[i], pool[j]));
            }
            for l in 0..n {
                if eq[i][j] && eq[j][l] && !eq[i][l] {
                    return Err(format!("not transitive through {}", pool[j]));
                }
            }
        }
    }
    // Congruence: f a ≡ f' a' for convertible f, f' and a, a'.
    let cod = random_gty(rng, 1);
    let f = tg.term(rng, &mut s.ctx.clone(), &super::gen::arr(s.ty.clone(), cod), 2);
    let f_eta = Term::lam("e", tp, Term::app(f.shift(1, 0), Term::var(0)));
    for i in 0..n {
        for j in 0..n {
            if eq[i][j] {
                let l = Term::app(f.clone(), pool[i].clone());
                let r = Term::app(f_eta.clone(), pool[j].clone());
                if !k.equal(&ctx, &l, &r).map_err(|e| e.to_string())? {
                    return Err(format!("not a congruence: {l} vs {r}"));
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Soft typing through predicate subtypes

/// Tiny expression language with a syntactic typing oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ex {
    Atom(&'static str),
    App(Box<Ex>, Box<Ex>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ty {
    Nat,
    Bool,
    Fun(Box<Ty>, Box<Ty>),
}

fn fun(a: Ty, b: Ty) -> Ty {
    Ty::Fun(Box::new(a), Box::new(b))
}

pub const SOFT_ATOMS: [&str; 11] = ["z", "one", "two", "t", "f", "s", "pred", "f2", "toNat", "plus", "times"];

fn atom_ty(a: &str) -> Ty {
    match a {
        "z" | "one" | "two" => Ty::Nat,
        "t" | "f" => Ty::Bool,
        "s" | "pred" => fun(Ty::Nat, Ty::Nat),
        "f2" | "toNat" => fun(Ty::Bool, Ty::Nat),
        _ => fun(Ty::Nat, fun(Ty::Nat, Ty::Nat)),
    }
}

pub fn oracle_ty(e: &Ex) -> Option<Ty> {
    match e {
        Ex::Atom(a) => Some(atom_ty(a)),
        Ex::App(f, a) => match (oracle_ty(f)?, oracle_ty(a)?) {
            (Ty::Fun(d, c), at) if *d == at => Some(*c),
            _ => None,
        },
    }
}

pub fn soft_types() -> Vec<Ty> {
    vec![
        Ty::Nat,
        Ty::Bool,
        fun(Ty::Nat, Ty::Nat),
        fun(Ty::Bool, Ty::Nat),
        fun(Ty::Nat, fun(Ty::Nat, Ty::Nat)),
    ]
}

pub struct SoftSig {
    pub theory: Ident,
    pub sig: Signature,
}

fn dtt(n: &str) -> Term {
    LogicId::DttCurry.constant(n)
}

impl SoftSig {
    pub fn new() -> SoftSig {
        let lib = Library::new(TEST_NS);
        let checker =
            TheoryChecker::new(&lib, Some(&LogicId::DttCurry.ident()), &[], KernelConfig::default()).unwrap();
        let mut sig = checker.signature().clone();
        let theory = Ident::new(TEST_NS, "soft", "Soft").unwrap();
        let mut out = SoftSig { theory, sig: Signature::new() };
        for base in ["nat", "bool"] {
            sig.declare(out.theory.child(base).unwrap(), dtt("expr"));
        }
        for a in SOFT_ATOMS {
            sig.declare(out.theory.child(a).unwrap(), dtt("expr"));
        }
        for a in SOFT_ATOMS {
            let proof_tp = out.of(&out.ex(&Ex::Atom(a)), &out.ty(&atom_ty(a)));
            sig.declare(out.theory.child(&format!("{a}_ty")).unwrap(), proof_tp);
        }
        out.sig = sig;
        out
    }

    fn c(&self, n: &str) -> Term {
        Term::Const(self.theory.child(n).unwrap())
    }

    pub fn ex(&self, e: &Ex) -> Term {
        match e {
            Ex::Atom(a) => self.c(a),
            Ex::App(f, a) => Term::apps(dtt("app'"), [self.ex(f), self.ex(a)]),
        }
    }

    pub fn ty(&self, t: &Ty) -> Term {
        match t {
            Ty::Nat => self.c("nat"),
            Ty::Bool => self.c("bool"),
            Ty::Fun(a, b) => Term::apps(
                dtt("pi'"),
                [self.ty(a), Term::lam("_", dtt("expr"), self.ty(b).shift(1, 0))],
            ),
        }
    }

    pub fn of(&self, e: &Term, a: &Term) -> Term {
        Term::apps(dtt("of"), [e.clone(), a.clone()])
    }

    pub fn tm_of(&self, a: &Term) -> Term {
        Term::app(dtt("tmOf"), a.clone())
    }

    /// The derivation the oracle would give, as an `of` proof term.
    pub fn proof(&self, e: &Ex) -> Option<(Term, Ty)> {
        match e {
            Ex::Atom(a) => Some((self.c(&format!("{a}_ty")), atom_ty(a))),
            Ex::App(f, a) => {
                let (pf, ft) = self.proof(f)?;
                let (pa, at) = self.proof(a)?;
                match ft {
                    Ty::Fun(d, c) if *d == at => {
                        let fam = Term::lam("_", dtt("expr"), self.ty(&c).shift(1, 0));
                        let p = Term::apps(
                            dtt("of_app"),
                            [self.ex(f), self.ex(a), self.ty(&d), fam, pf, pa],
                        );
                        Some((p, *c))
                    }
                    _ => None,
                }
            }
        }
    }
}

/// Every application tree with at most one application, plus `extra`
/// random trees with two or three.
pub fn soft_exprs(rng: &mut StdRng, extra: usize) -> Vec<Ex> {
    let atoms: Vec<Ex> = SOFT_ATOMS.iter().map(|a| Ex::Atom(a)).collect();
    let mut out = atoms.clone();
    for f in &atoms {
        for a in &atoms {
            out.push(Ex::App(Box::new(f.clone()), Box::new(a.clone())));
        }
    }
    let one_app: Vec<Ex> = out[atoms.len()..].to_vec();
    for _ in 0..extra {
        out.push(typed_nat(rng, 3));
    }
    for _ in 0..extra {
        let deep = one_app.choose(rng).unwrap().clone();
        let other = if rng.gen_bool(0.5) { atoms.choose(rng) } else { one_app.choose(rng) }
            .unwrap()
            .clone();
        let e = if rng.gen_bool(0.5) {
            Ex::App(Box::new(deep), Box::new(other))
        } else {
            Ex::App(Box::new(other), Box::new(deep))
        };
        out.push(e);
    }
    out
}

/// A random well-typed expression of type `Nat`.
fn typed_nat(rng: &mut StdRng, depth: usize) -> Ex {
    let app = |f: &'static str, a: Ex| Ex::App(Box::new(Ex::Atom(f)), Box::new(a));
    match if depth == 0 { 0 } else { rng.gen_range(0..4) } {
        0 => Ex::Atom(["z", "one", "two"].choose(rng).unwrap()),
        1 => app(["s", "pred"].choose(rng).unwrap(), typed_nat(rng, depth - 1)),
        2 => app(["f2", "toNat"].choose(rng).unwrap(), Ex::Atom(["t", "f"].choose(rng).unwrap())),
        _ => {
            let op = app(["plus", "times"].choose(rng).unwrap(), typed_nat(rng, depth - 1));
            Ex::App(Box::new(op), Box::new(typed_nat(rng, depth - 1)))
        }
    }
}

pub struct SoftStats {
    pub pairs: usize,
    pub well_typed: usize,
}

/// `SubIn(e, p) : tmOf A` iff `p : of e A`, and membership iff the oracle
/// types `e` at `A`; cancellation and witness irrelevance on every member.
pub fn soft_typing(rng: &mut StdRng, extra: usize) -> Result<SoftStats, String> {
    let soft = SoftSig::new();
    let k = kernel(&soft.sig);
    let ctx = Context::new();
    let exprs = soft_exprs(rng, extra);
    let mut pool: Vec<Term> = exprs.iter().filter_map(|e| soft.proof(e)).map(|(p, _)| p).collect();
    pool.dedup();
    let mut stats = SoftStats { pairs: 0, well_typed: 0 };
    for e in &exprs {
        let et = soft.ex(e);
        let own = soft.proof(e);
        for a in soft_types() {
            stats.pairs += 1;
            let at = soft.ty(&a);
            let mut candidates: Vec<Term> = pool.choose_multiple(rng, 3).cloned().collect();
            if let Some((p, _)) = &own {
                candidates.push(p.clone());
            }
            let mut member = false;
            for p in &candidates {
                let sub_ok = k.check(&ctx, &Term::sub_in(et.clone(), p.clone()), &soft.tm_of(&at)).is_ok();
                let of_ok = k.check(&ctx, p, &soft.of(&et, &at)).is_ok();
                if sub_ok != of_ok {
                    return Err(format!("membership {sub_ok} but proof {of_ok} for {et} : {at} via {p}"));
                }
                member |= sub_ok;
            }
            let expected = oracle_ty(e).as_ref() == Some(&a);
            if member != expected {
                return Err(format!("{et} in tmOf {at}: kernel {member}, oracle {expected}"));
            }
            if !member {
                continue;
            }
            stats.well_typed += 1;
            let (p, _) = own.clone().unwrap();
            let x = Term::sub_in(et.clone(), p.clone());
            if !k.equal(&ctx, &Term::sub_out(x.clone()), &et).map_err(|e| e.to_string())? {
                return Err(format!("SubOut(SubIn({et}, _)) is not {et}"));
            }
            let out = Term::app(Term::lam("m", soft.tm_of(&at), Term::sub_out(Term::var(0))), x.clone());
            k.check(&ctx, &out, &dtt("expr")).map_err(|e| format!("coercion of {et}: {e}"))?;
            for q in pool.choose_multiple(rng, 3) {
                let y = Term::sub_in(et.clone(), q.clone());
                if !k.equal(&ctx, &x, &y).map_err(|e| e.to_string())? {
                    return Err(format!("witnesses distinguish {et}: {p} vs {q}"));
                }
            }
        }
    }
    Ok(stats)
}

// ---------------------------------------------------------------------------
// Church annotation inference

pub fn surface_inference(gs: &GenSig, sg: &SurfaceGen, rng: &mut StdRng) -> Outcome {
    let ty = super::gen::random_stype(rng, 2);
    let depth = rng.gen_range(1..5);
    let t = sg.term(rng, &mut Vec::new(), &ty, depth, false);
    let (church, inferred) = infer_church_annotations(&sg.env, &t).map_err(|e| format!("{t:?}: {e}"))?;
    if inferred != ty {
        return Err(format!("{t:?}: inferred {inferred}, generated {ty}"));
    }
    let expected = Term::app(LogicId::HolChurch.constant("tm"), sg.env.church_type(&ty).unwrap());
    kernel(&gs.sig)
        .check(&Context::new(), &church, &expected)
        .map_err(|e| format!("{church} : {expected}: {e}"))?;
    if has_meta_free(&inferred) {
        Ok(())
    } else {
        Err(format!("meta variable left in {inferred}"))
    }
}

fn has_meta_free(t: &SurfaceType) -> bool {
    !t.has_meta()
}
