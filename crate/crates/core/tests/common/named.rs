//! Terms with named variables and textbook capture-avoiding substitution,
//! used as an independent oracle for the de Bruijn implementation.

use std::collections::BTreeSet;

use oaf_core::kernel::Ident;
use oaf_core::Term;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Named {
    Const(Ident),
    Var(String),
    App(Box<Named>, Box<Named>),
    Lam(String, Box<Named>, Box<Named>),
    Pi(String, Box<Named>, Box<Named>),
    Type,
    Sub(Box<Named>, Box<Named>),
    SubIn(Box<Named>, Box<Named>),
    SubOut(Box<Named>),
}

/// Name of the free variable with de Bruijn index `i` at top level.
pub fn free_name(i: usize) -> String {
    format!("f{i}")
}

/// Converts with binders named `b0, b1, ...` in traversal order; free
/// variable `i` (relative to the top) becomes `free_name(i)`.
pub fn to_named(t: &Term) -> Named {
    let mut counter = 0;
    go_named(t, &mut Vec::new(), &mut counter)
}

fn go_named(t: &Term, scope: &mut Vec<String>, counter: &mut usize) -> Named {
    let bind = |hint: &str, dom: &Term, body: &Term, scope: &mut Vec<String>, counter: &mut usize| {
        let _ = hint;
        let name = format!("b{counter}");
        *counter += 1;
        let d = go_named(dom, scope, counter);
        scope.push(name.clone());
        let b = go_named(body, scope, counter);
        scope.pop();
        (name, Box::new(d), Box::new(b))
    };
    match t {
        Term::Const(c) => Named::Const(c.clone()),
        Term::Var(i) => match scope.len().checked_sub(i + 1) {
            Some(pos) => Named::Var(scope[pos].clone()),
            None => Named::Var(free_name(i - scope.len())),
        },
        Term::Apply(f, a) => Named::App(
            Box::new(go_named(f, scope, counter)),
            Box::new(go_named(a, scope, counter)),
        ),
        Term::Lambda(h, d, b) => {
            let (n, d, b) = bind(h, d, b, scope, counter);
            Named::Lam(n, d, b)
        }
        Term::Pi(h, d, b) => {
            let (n, d, b) = bind(h, d, b, scope, counter);
            Named::Pi(n, d, b)
        }
        Term::Type => Named::Type,
        Term::SubType(a, p) => Named::Sub(
            Box::new(go_named(a, scope, counter)),
            Box::new(go_named(p, scope, counter)),
        ),
        Term::SubIn(a, p) => Named::SubIn(
            Box::new(go_named(a, scope, counter)),
            Box::new(go_named(p, scope, counter)),
        ),
        Term::SubOut(a) => Named::SubOut(Box::new(go_named(a, scope, counter))),
    }
}

/// Back to de Bruijn; `free` maps a free name to its top-level index.
pub fn from_named(n: &Named, free: &dyn Fn(&str) -> usize) -> Term {
    go_db(n, &mut Vec::new(), free)
}

fn go_db(n: &Named, scope: &mut Vec<String>, free: &dyn Fn(&str) -> usize) -> Term {
    match n {
        Named::Const(c) => Term::Const(c.clone()),
        Named::Var(x) => match scope.iter().rposition(|y| y == x) {
            Some(pos) => Term::var(scope.len() - 1 - pos),
            None => Term::var(free(x) + scope.len()),
        },
        Named::App(f, a) => Term::app(go_db(f, scope, free), go_db(a, scope, free)),
        Named::Lam(x, d, b) | Named::Pi(x, d, b) => {
            let d = go_db(d, scope, free);
            scope.push(x.clone());
            let b = go_db(b, scope, free);
            scope.pop();
            if matches!(n, Named::Lam(..)) {
                Term::lam(x, d, b)
            } else {
                Term::pi(x, d, b)
            }
        }
        Named::Type => Term::Type,
        Named::Sub(a, p) => Term::sub_type(go_db(a, scope, free), go_db(p, scope, free)),
        Named::SubIn(a, p) => Term::sub_in(go_db(a, scope, free), go_db(p, scope, free)),
        Named::SubOut(a) => Term::sub_out(go_db(a, scope, free)),
    }
}

pub fn free_vars(n: &Named) -> BTreeSet<String> {
    match n {
        Named::Const(_) | Named::Type => BTreeSet::new(),
        Named::Var(x) => BTreeSet::from([x.clone()]),
        Named::App(a, b) | Named::Sub(a, b) | Named::SubIn(a, b) => {
            free_vars(a).union(&free_vars(b)).cloned().collect()
        }
        Named::SubOut(a) => free_vars(a),
        Named::Lam(x, d, b) | Named::Pi(x, d, b) => {
            let mut fv = free_vars(b);
            fv.remove(x);
            fv.union(&free_vars(d)).cloned().collect()
        }
    }
}

fn fresh(avoid: &BTreeSet<String>, base: &str) -> String {
    (0..)
        .map(|i| format!("{base}'{i}"))
        .find(|c| !avoid.contains(c))
        .expect("infinite supply")
}

/// `n[x := s]`, renaming binders that would capture free variables of `s`.
pub fn subst(n: &Named, x: &str, s: &Named) -> Named {
    match n {
        Named::Const(_) | Named::Type => n.clone(),
        Named::Var(y) if y == x => s.clone(),
        Named::Var(_) => n.clone(),
        Named::App(a, b) => Named::App(Box::new(subst(a, x, s)), Box::new(subst(b, x, s))),
        Named::Sub(a, b) => Named::Sub(Box::new(subst(a, x, s)), Box::new(subst(b, x, s))),
        Named::SubIn(a, b) => Named::SubIn(Box::new(subst(a, x, s)), Box::new(subst(b, x, s))),
        Named::SubOut(a) => Named::SubOut(Box::new(subst(a, x, s))),
        Named::Lam(y, d, b) | Named::Pi(y, d, b) => {
            let d2 = Box::new(subst(d, x, s));
            let (y2, b2) = if y == x {
                (y.clone(), b.as_ref().clone())
            } else if free_vars(s).contains(y) {
                let mut avoid = free_vars(s);
                avoid.extend(free_vars(b));
                avoid.insert(x.to_string());
                let z = fresh(&avoid, y);
                let renamed = subst(b, y, &Named::Var(z.clone()));
                (z, subst(&renamed, x, s))
            } else {
                (y.clone(), subst(b, x, s))
            };
            if matches!(n, Named::Lam(..)) {
                Named::Lam(y2, d2, Box::new(b2))
            } else {
                Named::Pi(y2, d2, Box::new(b2))
            }
        }
    }
}

fn free_index(name: &str) -> usize {
    name.strip_prefix('f')
        .and_then(|i| i.parse().ok())
        .unwrap_or_else(|| panic!("unexpected free name {name}"))
}

/// Oracle for `t.substitute(depth, s)`: free variable `depth` of `t` is
/// replaced by `s` (which lives in the context without that variable), and
/// free variables above it move down by one.
pub fn oracle_substitute(t: &Term, depth: usize, s: &Term) -> Term {
    let nt = to_named(t);
    // `s` lives outside all `depth` inner binders: its free index j is the
    // variable t calls j + depth + 1.
    let ns = rename_free(&to_named(s), &|j| j + depth + 1);
    let result = subst(&nt, &free_name(depth), &ns);
    from_named(&result, &|x| {
        let i = free_index(x);
        assert_ne!(i, depth, "substituted variable survived");
        if i > depth {
            i - 1
        } else {
            i
        }
    })
}

fn rename_free(n: &Named, f: &dyn Fn(usize) -> usize) -> Named {
    let fv = free_vars(n);
    let mut out = n.clone();
    // Rename through temporaries so that chains like f1->f2, f2->f3 do not clash.
    for x in &fv {
        out = subst(&out, x, &Named::Var(format!("tmp_{x}")));
    }
    for x in &fv {
        let target = free_name(f(free_index(x)));
        out = subst(&out, &format!("tmp_{x}"), &Named::Var(target));
    }
    out
}
