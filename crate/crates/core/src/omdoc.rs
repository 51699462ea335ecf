//! XML interchange format for libraries (`.omdoc.xml`).
//!
//! Vocabulary (attribute order as listed, two-space indentation):
//!
//! ```text
//! omdoc(version, namespace)
//!   theory(name, meta?) > include(from)* , constant* , instance*
//!     constant(name, kind, origin?) > type? definition? proof? metadata?
//!       proof(style = omitted | dependsOn | term) > ref(name)* | term
//!       metadata > srcref(file, sl, sc, el, ec)? comment* notation?
//!     instance(name, pattern) > arg*
//!   pattern(name) > param(name)* , constant*
//!   morphism(name, from, to) > assignment(name)*
//! terms: OMS(name) | OMV(index, hint) | OMA(head, args...)
//!      | OMBIND(binder, var?) with binder in lambda, pi, sub, subin, subout, type
//! ```

use std::collections::BTreeMap;

use thiserror::Error;

use crate::extensions::{Pattern, PatternInstance};
use crate::kernel::{
    Context, DeclKind, Declaration, Ident, Library, Metadata, Proof, ProofStyle, SourceRef, Term,
    Theory,
};
use crate::morphisms::Morphism;
use crate::xml::{self, Element, XmlError, XmlWriter};

pub const FORMAT_VERSION: &str = "1";
pub const FILE_EXTENSION: &str = ".omdoc.xml";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OmdocError {
    #[error("malformed XML: {0}")]
    Malformed(String),
    #[error("schema violation at {path}: {message}")]
    SchemaViolation { path: String, message: String },
    #[error("unsupported format version `{0}`")]
    UnsupportedVersion(String),
    #[error("dangling identifier {0}")]
    DanglingIdent(Ident),
}

impl From<XmlError> for OmdocError {
    fn from(e: XmlError) -> Self {
        match e {
            XmlError::Malformed(m) => OmdocError::Malformed(m),
            XmlError::SchemaViolation { path, message } => {
                OmdocError::SchemaViolation { path, message }
            }
        }
    }
}

fn violation(path: &str, message: impl Into<String>) -> OmdocError {
    XmlError::schema(path, message).into()
}

/// Every identifier referenced anywhere in `lib` must resolve.
pub fn check_references(lib: &Library) -> Result<(), OmdocError> {
    let dangling = |id: &Ident| OmdocError::DanglingIdent(id.clone());
    let resolves = |id: &Ident| lib.declaration(id).is_some();
    let check_term = |t: &Term, local: &dyn Fn(&Ident) -> bool| -> Result<(), OmdocError> {
        for c in t.constants() {
            if !resolves(&c) && !local(&c) {
                return Err(dangling(&c));
            }
        }
        Ok(())
    };
    let check_decl = |d: &Declaration, local: &dyn Fn(&Ident) -> bool| -> Result<(), OmdocError> {
        for t in d.terms() {
            check_term(t, local)?;
        }
        if let Some(Proof::DependsOn(ids)) = &d.proof {
            for id in ids {
                if !resolves(id) && lib.morphism(id).is_none() && !local(id) {
                    return Err(dangling(id));
                }
            }
        }
        Ok(())
    };
    let no_local = |_: &Ident| false;
    for th in &lib.theories {
        for dep in th.meta_theory.iter().chain(&th.includes) {
            lib.theory(dep).ok_or_else(|| dangling(dep))?;
        }
        for d in &th.decls {
            check_decl(d, &no_local)?;
            if let Some(origin) = &d.meta.origin {
                if !th.instances.iter().any(|i| &i.name == origin) {
                    return Err(dangling(origin));
                }
            }
        }
        for inst in &th.instances {
            lib.pattern(&inst.pattern)
                .ok_or_else(|| dangling(&inst.pattern))?;
            for a in &inst.args {
                check_term(a, &no_local)?;
            }
        }
    }
    for p in &lib.patterns {
        let local = |id: &Ident| id.is_child_of(&p.name);
        for (_, tp) in p.params.entries() {
            check_term(tp, &local)?;
        }
        for d in &p.body {
            check_decl(d, &local)?;
        }
    }
    for m in &lib.morphisms {
        lib.theory(&m.from).ok_or_else(|| dangling(&m.from))?;
        lib.theory(&m.to).ok_or_else(|| dangling(&m.to))?;
        for (c, t) in &m.assignments {
            if !resolves(c) {
                return Err(dangling(c));
            }
            check_term(t, &no_local)?;
        }
    }
    Ok(())
}

pub fn serialize(lib: &Library) -> Result<String, OmdocError> {
    check_references(lib)?;
    let mut w = XmlWriter::new();
    let root = [
        ("version", FORMAT_VERSION),
        ("namespace", lib.namespace.as_str()),
    ];
    if lib.theories.is_empty() && lib.patterns.is_empty() && lib.morphisms.is_empty() {
        w.empty("omdoc", &root);
        return Ok(w.finish());
    }
    w.open("omdoc", &root);
    for th in &lib.theories {
        write_theory(&mut w, th);
    }
    for p in &lib.patterns {
        write_pattern(&mut w, p);
    }
    for m in &lib.morphisms {
        write_morphism(&mut w, m);
    }
    w.close("omdoc");
    Ok(w.finish())
}

fn write_theory(w: &mut XmlWriter, th: &Theory) {
    let name = th.name.to_string();
    let meta = th.meta_theory.as_ref().map(ToString::to_string);
    let mut attrs = vec![("name", name.as_str())];
    if let Some(m) = &meta {
        attrs.push(("meta", m.as_str()));
    }
    if th.includes.is_empty() && th.decls.is_empty() && th.instances.is_empty() {
        w.empty("theory", &attrs);
        return;
    }
    w.open("theory", &attrs);
    for inc in &th.includes {
        w.empty("include", &[("from", &inc.to_string())]);
    }
    for d in &th.decls {
        write_constant(w, d, &[]);
    }
    for inst in &th.instances {
        let (name, pattern) = (inst.name.to_string(), inst.pattern.to_string());
        let attrs = [("name", name.as_str()), ("pattern", pattern.as_str())];
        if inst.args.is_empty() {
            w.empty("instance", &attrs);
        } else {
            w.open("instance", &attrs);
            for a in &inst.args {
                w.open("arg", &[]);
                write_term(w, a);
                w.close("arg");
            }
            w.close("instance");
        }
    }
    w.close("theory");
}

/// `params` names the free variables of pattern templates.
fn write_constant(w: &mut XmlWriter, d: &Declaration, params: &[String]) {
    let term = |w: &mut XmlWriter, t: &Term| write_term_in(w, t, &mut params.to_vec());
    let name = d.name.to_string();
    let origin = d.meta.origin.as_ref().map(ToString::to_string);
    let mut attrs = vec![("name", name.as_str()), ("kind", d.kind().as_str())];
    if let Some(o) = &origin {
        attrs.push(("origin", o.as_str()));
    }
    let meta = &d.meta;
    let has_meta =
        meta.source_ref.is_some() || !meta.comments.is_empty() || meta.notation.is_some();
    if d.tp.is_none() && d.definiens.is_none() && d.proof.is_none() && !has_meta {
        w.empty("constant", &attrs);
        return;
    }
    w.open("constant", &attrs);
    if let Some(tp) = &d.tp {
        w.open("type", &[]);
        term(w, tp);
        w.close("type");
    }
    if let Some(def) = &d.definiens {
        w.open("definition", &[]);
        term(w, def);
        w.close("definition");
    }
    match &d.proof {
        None => {}
        Some(Proof::Omitted) => w.empty("proof", &[("style", ProofStyle::Omitted.as_str())]),
        Some(Proof::DependsOn(ids)) if ids.is_empty() => {
            w.empty("proof", &[("style", ProofStyle::DependsOn.as_str())])
        }
        Some(Proof::DependsOn(ids)) => {
            w.open("proof", &[("style", ProofStyle::DependsOn.as_str())]);
            for id in ids {
                w.empty("ref", &[("name", &id.to_string())]);
            }
            w.close("proof");
        }
        Some(Proof::ProofTerm(t)) => {
            w.open("proof", &[("style", ProofStyle::Term.as_str())]);
            term(w, t);
            w.close("proof");
        }
    }
    if has_meta {
        w.open("metadata", &[]);
        if let Some(r) = &meta.source_ref {
            let nums = [r.start_line, r.start_col, r.end_line, r.end_col].map(|n| n.to_string());
            w.empty(
                "srcref",
                &[
                    ("file", r.file.as_str()),
                    ("sl", &nums[0]),
                    ("sc", &nums[1]),
                    ("el", &nums[2]),
                    ("ec", &nums[3]),
                ],
            );
        }
        for c in &meta.comments {
            w.text_element("comment", &[], c);
        }
        if let Some(n) = &meta.notation {
            w.text_element("notation", &[], n);
        }
        w.close("metadata");
    }
    w.close("constant");
}

fn write_pattern(w: &mut XmlWriter, p: &Pattern) {
    let name = p.name.to_string();
    if p.params.is_empty() && p.body.is_empty() {
        w.empty("pattern", &[("name", &name)]);
        return;
    }
    w.open("pattern", &[("name", &name)]);
    let mut names = Vec::new();
    for (hint, tp) in p.params.entries() {
        w.open("param", &[("name", hint)]);
        write_term_in(w, tp, &mut names.clone());
        w.close("param");
        names.push(hint.clone());
    }
    for d in &p.body {
        write_constant(w, d, &names);
    }
    w.close("pattern");
}

fn write_morphism(w: &mut XmlWriter, m: &Morphism) {
    let (name, from, to) = (m.name.to_string(), m.from.to_string(), m.to.to_string());
    let attrs = [
        ("name", name.as_str()),
        ("from", from.as_str()),
        ("to", to.as_str()),
    ];
    if m.assignments.is_empty() {
        w.empty("morphism", &attrs);
        return;
    }
    w.open("morphism", &attrs);
    for (c, t) in &m.assignments {
        w.open("assignment", &[("name", &c.to_string())]);
        write_term(w, t);
        w.close("assignment");
    }
    w.close("morphism");
}

pub fn write_term(w: &mut XmlWriter, t: &Term) {
    write_term_in(w, t, &mut Vec::new());
}

/// `names` holds the hints of the enclosing binders, innermost last.
fn write_term_in(w: &mut XmlWriter, t: &Term, names: &mut Vec<String>) {
    match t {
        Term::Const(c) => w.empty("OMS", &[("name", &c.to_string())]),
        Term::Var(i) => {
            let hint = names
                .len()
                .checked_sub(i + 1)
                .map_or("", |pos| names[pos].as_str());
            w.empty("OMV", &[("index", &i.to_string()), ("hint", hint)])
        }
        Term::Apply(..) => {
            let (head, args) = t.spine();
            w.open("OMA", &[]);
            write_term_in(w, head, names);
            for a in args {
                write_term_in(w, a, names);
            }
            w.close("OMA");
        }
        Term::Type => w.empty("OMBIND", &[("binder", "type")]),
        Term::Lambda(x, a, b) | Term::Pi(x, a, b) => {
            let binder = if matches!(t, Term::Lambda(..)) {
                "lambda"
            } else {
                "pi"
            };
            w.open("OMBIND", &[("binder", binder), ("var", x)]);
            write_term_in(w, a, names);
            names.push(x.clone());
            write_term_in(w, b, names);
            names.pop();
            w.close("OMBIND");
        }
        Term::SubType(a, b) | Term::SubIn(a, b) => {
            let binder = if matches!(t, Term::SubType(..)) {
                "sub"
            } else {
                "subin"
            };
            w.open("OMBIND", &[("binder", binder)]);
            write_term_in(w, a, names);
            write_term_in(w, b, names);
            w.close("OMBIND");
        }
        Term::SubOut(a) => {
            w.open("OMBIND", &[("binder", "subout")]);
            write_term_in(w, a, names);
            w.close("OMBIND");
        }
    }
}

pub fn parse(input: &[u8]) -> Result<Library, OmdocError> {
    let root = xml::parse(input)?;
    let path = root.name.clone();
    if root.name != "omdoc" {
        return Err(violation(
            &path,
            format!("expected root `omdoc`, found `{}`", root.name),
        ));
    }
    root.expect_attrs(&path, &["version", "namespace"], &[])?;
    root.expect_no_text(&path)?;
    let version = root.required(&path, "version")?;
    if version != FORMAT_VERSION {
        return Err(OmdocError::UnsupportedVersion(version.to_string()));
    }
    let mut lib = Library::new(root.required(&path, "namespace")?);
    for (i, child) in root.children.iter().enumerate() {
        let cpath = format!("{path}/{}[{i}]", child.name);
        match child.name.as_str() {
            "theory" => lib.theories.push(read_theory(child, &cpath)?),
            "pattern" => lib.patterns.push(read_pattern(child, &cpath)?),
            "morphism" => lib.morphisms.push(read_morphism(child, &cpath)?),
            other => return Err(violation(&cpath, format!("unknown element `{other}`"))),
        }
    }
    Ok(lib)
}

fn ident_attr(el: &Element, path: &str, key: &str) -> Result<Ident, OmdocError> {
    el.required(path, key)?
        .parse()
        .map_err(|e| violation(&format!("{path}@{key}"), format!("{e}")))
}

fn num_attr<T: std::str::FromStr>(el: &Element, path: &str, key: &str) -> Result<T, OmdocError> {
    el.required(path, key)?
        .parse()
        .map_err(|_| violation(&format!("{path}@{key}"), "expected a nonnegative integer"))
}

fn read_theory(el: &Element, path: &str) -> Result<Theory, OmdocError> {
    el.expect_attrs(path, &["name"], &["meta"])?;
    el.expect_no_text(path)?;
    let meta = match el.attr("meta") {
        Some(_) => Some(ident_attr(el, path, "meta")?),
        None => None,
    };
    let mut th = Theory::new(ident_attr(el, path, "name")?, meta);
    for (i, child) in el.children.iter().enumerate() {
        let cpath = format!("{path}/{}[{i}]", child.name);
        match child.name.as_str() {
            "include" => {
                child.expect_attrs(&cpath, &["from"], &[])?;
                child.expect_leaf(&cpath)?;
                th.includes.push(ident_attr(child, &cpath, "from")?);
            }
            "constant" => th.decls.push(read_constant(child, &cpath)?),
            "instance" => th.instances.push(read_instance(child, &cpath)?),
            other => return Err(violation(&cpath, format!("unknown element `{other}`"))),
        }
    }
    Ok(th)
}

fn single_term(el: &Element, path: &str) -> Result<Term, OmdocError> {
    el.expect_attrs(path, &[], &[])?;
    el.expect_no_text(path)?;
    match el.children.as_slice() {
        [t] => read_term(t, &format!("{path}/{}", t.name)),
        _ => Err(violation(path, "expected exactly one term")),
    }
}

fn read_constant(el: &Element, path: &str) -> Result<Declaration, OmdocError> {
    el.expect_attrs(path, &["name", "kind"], &["origin"])?;
    el.expect_no_text(path)?;
    let kind_str = el.required(path, "kind")?;
    let kind = DeclKind::parse(kind_str).ok_or_else(|| {
        violation(
            &format!("{path}@kind"),
            format!("unknown kind `{kind_str}`"),
        )
    })?;
    let mut meta = Metadata::of_kind(kind);
    if el.attr("origin").is_some() {
        meta.origin = Some(ident_attr(el, path, "origin")?);
    }
    let mut decl = Declaration {
        name: ident_attr(el, path, "name")?,
        tp: None,
        definiens: None,
        proof: None,
        meta,
    };
    // Children must appear in vocabulary order, each at most once.
    let order = ["type", "definition", "proof", "metadata"];
    let mut last = None;
    for (i, child) in el.children.iter().enumerate() {
        let cpath = format!("{path}/{}[{i}]", child.name);
        let Some(pos) = order.iter().position(|n| *n == child.name) else {
            return Err(violation(
                &cpath,
                format!("unknown element `{}`", child.name),
            ));
        };
        if last.is_some_and(|l| pos <= l) {
            return Err(violation(&cpath, "element out of order or repeated"));
        }
        last = Some(pos);
        match pos {
            0 => decl.tp = Some(single_term(child, &cpath)?),
            1 => decl.definiens = Some(single_term(child, &cpath)?),
            2 => decl.proof = Some(read_proof(child, &cpath)?),
            _ => read_metadata(child, &cpath, &mut decl.meta)?,
        }
    }
    Ok(decl)
}

fn read_proof(el: &Element, path: &str) -> Result<Proof, OmdocError> {
    el.expect_attrs(path, &["style"], &[])?;
    el.expect_no_text(path)?;
    let style_str = el.required(path, "style")?;
    let style = ProofStyle::parse(style_str).ok_or_else(|| {
        violation(
            &format!("{path}@style"),
            format!("unknown style `{style_str}`"),
        )
    })?;
    match style {
        ProofStyle::Omitted => {
            el.expect_leaf(path)?;
            Ok(Proof::Omitted)
        }
        ProofStyle::DependsOn => {
            let mut ids = Vec::new();
            for (i, child) in el.children.iter().enumerate() {
                let cpath = format!("{path}/{}[{i}]", child.name);
                if child.name != "ref" {
                    return Err(violation(
                        &cpath,
                        format!("unknown element `{}`", child.name),
                    ));
                }
                child.expect_attrs(&cpath, &["name"], &[])?;
                child.expect_leaf(&cpath)?;
                let id = ident_attr(child, &cpath, "name")?;
                if ids.contains(&id) {
                    return Err(violation(&cpath, "repeated dependency"));
                }
                ids.push(id);
            }
            Ok(Proof::DependsOn(ids))
        }
        ProofStyle::Term => match el.children.as_slice() {
            [t] => Ok(Proof::ProofTerm(read_term(
                t,
                &format!("{path}/{}", t.name),
            )?)),
            _ => Err(violation(path, "expected exactly one term")),
        },
    }
}

fn read_metadata(el: &Element, path: &str, meta: &mut Metadata) -> Result<(), OmdocError> {
    el.expect_attrs(path, &[], &[])?;
    el.expect_no_text(path)?;
    for (i, child) in el.children.iter().enumerate() {
        let cpath = format!("{path}/{}[{i}]", child.name);
        match child.name.as_str() {
            "srcref"
                if meta.source_ref.is_none()
                    && meta.comments.is_empty()
                    && meta.notation.is_none() =>
            {
                child.expect_attrs(&cpath, &["file", "sl", "sc", "el", "ec"], &[])?;
                child.expect_leaf(&cpath)?;
                let start = (
                    num_attr(child, &cpath, "sl")?,
                    num_attr(child, &cpath, "sc")?,
                );
                let end = (
                    num_attr(child, &cpath, "el")?,
                    num_attr(child, &cpath, "ec")?,
                );
                let r = SourceRef::new(child.required(&cpath, "file")?, start, end)
                    .ok_or_else(|| violation(&cpath, "source range ends before it starts"))?;
                meta.source_ref = Some(r);
            }
            "comment" if meta.notation.is_none() => {
                child.expect_attrs(&cpath, &[], &[])?;
                child.expect_leaf_text(&cpath)?;
                meta.comments.push(child.text().to_string());
            }
            "notation" if meta.notation.is_none() => {
                child.expect_attrs(&cpath, &[], &[])?;
                child.expect_leaf_text(&cpath)?;
                meta.notation = Some(child.text().to_string());
            }
            "srcref" | "comment" | "notation" => {
                return Err(violation(&cpath, "element out of order or repeated"))
            }
            other => return Err(violation(&cpath, format!("unknown element `{other}`"))),
        }
    }
    Ok(())
}

fn read_instance(el: &Element, path: &str) -> Result<PatternInstance, OmdocError> {
    el.expect_attrs(path, &["name", "pattern"], &[])?;
    el.expect_no_text(path)?;
    let mut args = Vec::new();
    for (i, child) in el.children.iter().enumerate() {
        let cpath = format!("{path}/{}[{i}]", child.name);
        if child.name != "arg" {
            return Err(violation(
                &cpath,
                format!("unknown element `{}`", child.name),
            ));
        }
        args.push(single_term(child, &cpath)?);
    }
    Ok(PatternInstance {
        name: ident_attr(el, path, "name")?,
        pattern: ident_attr(el, path, "pattern")?,
        args,
    })
}

fn read_pattern(el: &Element, path: &str) -> Result<Pattern, OmdocError> {
    el.expect_attrs(path, &["name"], &[])?;
    el.expect_no_text(path)?;
    let mut params = Context::new();
    let mut body = Vec::new();
    for (i, child) in el.children.iter().enumerate() {
        let cpath = format!("{path}/{}[{i}]", child.name);
        match child.name.as_str() {
            "param" if body.is_empty() => {
                child.expect_attrs(&cpath, &["name"], &[])?;
                let hint = child.required(&cpath, "name")?.to_string();
                let tp = match child.children.as_slice() {
                    [t] => read_term(t, &format!("{cpath}/{}", t.name))?,
                    _ => return Err(violation(&cpath, "expected exactly one term")),
                };
                child.expect_no_text(&cpath)?;
                params.push(&hint, tp);
            }
            "constant" => body.push(read_constant(child, &cpath)?),
            "param" => return Err(violation(&cpath, "parameters must precede templates")),
            other => return Err(violation(&cpath, format!("unknown element `{other}`"))),
        }
    }
    Ok(Pattern {
        name: ident_attr(el, path, "name")?,
        params,
        body,
    })
}

fn read_morphism(el: &Element, path: &str) -> Result<Morphism, OmdocError> {
    el.expect_attrs(path, &["name", "from", "to"], &[])?;
    el.expect_no_text(path)?;
    let mut assignments = BTreeMap::new();
    for (i, child) in el.children.iter().enumerate() {
        let cpath = format!("{path}/{}[{i}]", child.name);
        if child.name != "assignment" {
            return Err(violation(
                &cpath,
                format!("unknown element `{}`", child.name),
            ));
        }
        child.expect_attrs(&cpath, &["name"], &[])?;
        let name = ident_attr(child, &cpath, "name")?;
        let t = match child.children.as_slice() {
            [t] => read_term(t, &format!("{cpath}/{}", t.name))?,
            _ => return Err(violation(&cpath, "expected exactly one term")),
        };
        child.expect_no_text(&cpath)?;
        if assignments.insert(name, t).is_some() {
            return Err(violation(&cpath, "repeated assignment"));
        }
    }
    Ok(Morphism {
        name: ident_attr(el, path, "name")?,
        from: ident_attr(el, path, "from")?,
        to: ident_attr(el, path, "to")?,
        assignments,
    })
}

pub fn read_term(el: &Element, path: &str) -> Result<Term, OmdocError> {
    el.expect_no_text(path)?;
    let kids = |n: usize| -> Result<Vec<Term>, OmdocError> {
        if el.children.len() != n {
            return Err(violation(
                path,
                format!("expected {n} child terms, found {}", el.children.len()),
            ));
        }
        el.children
            .iter()
            .enumerate()
            .map(|(i, c)| read_term(c, &format!("{path}/{}[{i}]", c.name)))
            .collect()
    };
    match el.name.as_str() {
        "OMS" => {
            el.expect_attrs(path, &["name"], &[])?;
            el.expect_leaf(path)?;
            Ok(Term::Const(ident_attr(el, path, "name")?))
        }
        "OMV" => {
            el.expect_attrs(path, &["index", "hint"], &[])?;
            el.expect_leaf(path)?;
            Ok(Term::Var(num_attr(el, path, "index")?))
        }
        "OMA" => {
            el.expect_attrs(path, &[], &[])?;
            if el.children.len() < 2 {
                return Err(violation(
                    path,
                    "application needs a head and at least one argument",
                ));
            }
            let mut terms = kids(el.children.len())?.into_iter();
            let head = terms.next().expect("checked length");
            if matches!(head, Term::Apply(..)) {
                return Err(violation(
                    path,
                    "application head must not be an application",
                ));
            }
            Ok(Term::apps(head, terms))
        }
        "OMBIND" => {
            let binder = el.required(path, "binder")?;
            match binder {
                "lambda" | "pi" => {
                    el.expect_attrs(path, &["binder", "var"], &[])?;
                    let var = el.required(path, "var")?;
                    let [a, b]: [Term; 2] = kids(2)?.try_into().expect("checked length");
                    Ok(if binder == "lambda" {
                        Term::lam(var, a, b)
                    } else {
                        Term::pi(var, a, b)
                    })
                }
                "sub" | "subin" => {
                    el.expect_attrs(path, &["binder"], &[])?;
                    let [a, b]: [Term; 2] = kids(2)?.try_into().expect("checked length");
                    Ok(if binder == "sub" {
                        Term::sub_type(a, b)
                    } else {
                        Term::sub_in(a, b)
                    })
                }
                "subout" => {
                    el.expect_attrs(path, &["binder"], &[])?;
                    let [a]: [Term; 1] = kids(1)?.try_into().expect("checked length");
                    Ok(Term::sub_out(a))
                }
                "type" => {
                    el.expect_attrs(path, &["binder"], &[])?;
                    el.expect_leaf(path)?;
                    Ok(Term::Type)
                }
                other => Err(violation(
                    &format!("{path}@binder"),
                    format!("unknown binder `{other}`"),
                )),
            }
        }
        other => Err(violation(path, format!("unknown element `{other}`"))),
    }
}
