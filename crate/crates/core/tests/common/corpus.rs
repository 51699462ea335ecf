//! Paired Church/Curry corpora for the size comparison.

use std::collections::HashMap;

use rand::rngs::StdRng;
use rand::Rng;

use oaf_core::importers::surface::{annotate, church_term, curry_term, CurryNames, SurfaceTerm};
use oaf_core::kernel::{Declaration, Ident, Library, Term, Theory};
use oaf_core::logic::LogicId;

use super::gen::{random_stype, SurfaceGen, TEST_NS};

fn empty() -> Library {
    Library::new(TEST_NS)
}

/// `f a` at bool' in both encodings, hand-built.
pub fn single_application() -> (Library, Library) {
    let hol = LogicId::HolChurch;
    let dtt = LogicId::DttCurry;
    let mut ch = Theory::new(Ident::new(TEST_NS, "logic", "Church").unwrap(), Some(hol.ident()));
    let b = hol.constant("bool'");
    let f = Term::Const(ch.symbol("f"));
    let a = Term::Const(ch.symbol("a"));
    let d = Declaration::defined(ch.symbol("d"), None, Term::apps(hol.constant("app"), [b.clone(), b, f.clone(), a.clone()]));
    ch.push(d);
    let mut cu = Theory::new(Ident::new(TEST_NS, "logic", "Curry").unwrap(), Some(dtt.ident()));
    let d = Declaration::defined(cu.symbol("d"), None, Term::apps(dtt.constant("app'"), [f, a]));
    cu.push(d);
    let (mut lc, mut lu) = (empty(), empty());
    lc.theories.push(ch);
    lu.theories.push(cu);
    (lc, lu)
}

pub fn has_object_application(t: &SurfaceTerm) -> bool {
    match t {
        SurfaceTerm::App(f, a) => {
            let mut head = &**f;
            while let SurfaceTerm::App(g, _) = head {
                head = g;
            }
            let builtin = matches!(head, SurfaceTerm::Name(n) if n == "impl" || n == "eq");
            !builtin || has_object_application(f) || has_object_application(a)
        }
        SurfaceTerm::Abs { body, .. } | SurfaceTerm::Binder { body, .. } => has_object_application(body),
        SurfaceTerm::Name(_) => false,
    }
}

/// Random surface declarations rendered in both encodings; the flag says
/// whether any of them contains a non-builtin application.
pub fn random_corpus(sg: &SurfaceGen, r: &mut StdRng) -> (Library, Library, bool) {
    let theory = Ident::new(TEST_NS, "logic", "CurryCorpus").unwrap();
    let names = CurryNames {
        impl_op: theory.child("impl").unwrap(),
        eq_op: theory.child("eq").unwrap(),
        base_types: HashMap::from([
            ("bool'".to_string(), theory.child("bool").unwrap()),
            ("ind".to_string(), theory.child("ind").unwrap()),
        ]),
        constants: HashMap::new(),
    };
    let mut ch = Theory::new(Ident::new(TEST_NS, "logic", "C").unwrap(), Some(LogicId::HolChurch.ident()));
    let mut cu = Theory::new(theory, Some(LogicId::DttCurry.ident()));
    let mut any_app = false;
    for i in 0..r.gen_range(1..5) {
        let ty = random_stype(r, 2);
        let depth = r.gen_range(0..4);
        let t = sg.term(r, &mut Vec::new(), &ty, depth, false);
        any_app |= has_object_application(&t);
        let ann = annotate(&sg.env, &t, None).unwrap();
        let local = format!("d{i}");
        ch.push(Declaration::defined(ch.symbol(&local), None, church_term(&sg.env, &ann).unwrap()));
        cu.push(Declaration::defined(cu.symbol(&local), None, curry_term(&names, &ann).unwrap()));
    }
    let (mut lc, mut lu) = (empty(), empty());
    lc.theories.push(ch);
    lu.theories.push(cu);
    (lc, lu, any_app)
}
