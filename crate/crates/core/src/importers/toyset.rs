//! The `toyset` XML export (format version "1"). See `docs/toyset-schema.md`.

use std::collections::HashMap;

use super::{finish, Import, ImportError, ImportFailure, ImportIssue, ImportReport};
use crate::extensions::{close_toplevel, elaborate_in, PatternInstance, SchematicDecl};
use crate::kernel::{
    Context, DeclKind, Declaration, Ident, KernelConfig, Library, Metadata, Proof, SourceRef, Term,
    Theory, TheoryChecker,
};
use crate::logic::{func_definition_pattern_id, LogicId};
use crate::xml::{self, Element, XmlError};

pub const VERSION: &str = "1";
pub const DEFAULT_NAMESPACE: &str = "http://oaf.example.org/toyset";
pub const DOCUMENT: &str = "toyset";

/// Surface names of the logical primitives and their `folSoft` constants.
pub const CONNECTIVES: [(&str, &str); 6] = [
    ("in", "in'"),
    ("eq", "eq'"),
    ("and", "and'"),
    ("or", "or'"),
    ("implies", "impl'"),
    ("not", "not'"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToysetDoc {
    pub version: String,
    pub namespace: Option<String>,
    pub articles: Vec<Article>,
}

impl ToysetDoc {
    pub fn record_count(&self) -> usize {
        self.articles.iter().map(|a| a.decls.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Article {
    pub name: String,
    pub includes: Vec<String>,
    pub decls: Vec<ToysetDecl>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToysetKind {
    Func,
    Pred,
    Axiom,
    Theorem,
    Scheme,
    Definition,
}

impl ToysetKind {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "func" => ToysetKind::Func,
            "pred" => ToysetKind::Pred,
            "axiom" => ToysetKind::Axiom,
            "theorem" => ToysetKind::Theorem,
            "scheme" => ToysetKind::Scheme,
            "definition" => ToysetKind::Definition,
            _ => return None,
        })
    }
}

/// Terms and formulas; the soft-typed logic has a single sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetTerm {
    Ref(String),
    App(String, Vec<SetTerm>),
    Forall(String, Box<SetTerm>),
    Lambda(String, Box<SetTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeParam {
    pub name: String,
    pub arity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToysetDecl {
    pub kind: ToysetKind,
    pub name: String,
    pub arity: Option<usize>,
    pub params: Vec<SchemeParam>,
    pub tp: Option<SetTerm>,
    pub definiens: Option<SetTerm>,
    pub deps: Option<Vec<String>>,
    pub src: Option<SourceRef>,
    pub notation: Option<String>,
    pub comment: Option<String>,
}

fn schema(path: &str, message: impl Into<String>) -> ImportError {
    ImportError::schema(path, message)
}

impl From<XmlError> for ImportError {
    fn from(e: XmlError) -> Self {
        match e {
            XmlError::Malformed(m) => ImportError::Malformed(m),
            XmlError::SchemaViolation { path, message } => {
                ImportError::SchemaViolation { path, message }
            }
        }
    }
}

fn name_attr(el: &Element, path: &str, key: &str) -> Result<String, ImportError> {
    let v = ref_attr(el, path, key)?;
    if v.contains('/') {
        return Err(schema(&format!("{path}@{key}"), format!("invalid name `{v}`")));
    }
    Ok(v)
}

/// References may also name generated declarations such as `f/def`.
fn ref_attr(el: &Element, path: &str, key: &str) -> Result<String, ImportError> {
    let v = el.required(path, key)?;
    if v.is_empty() || v.contains('?') || v.chars().any(char::is_whitespace) {
        return Err(schema(
            &format!("{path}@{key}"),
            format!("invalid name `{v}`"),
        ));
    }
    Ok(v.to_string())
}

fn num_attr(el: &Element, path: &str, key: &str, min: u32) -> Result<u32, ImportError> {
    el.required(path, key)?
        .parse::<u32>()
        .ok()
        .filter(|n| *n >= min)
        .ok_or_else(|| {
            schema(
                &format!("{path}@{key}"),
                format!("expected an integer >= {min}"),
            )
        })
}

fn child_path(path: &str, i: usize, el: &Element) -> String {
    format!("{path}/{}[{i}]", el.name)
}

fn set_term(el: &Element, path: &str) -> Result<SetTerm, ImportError> {
    match el.name.as_str() {
        "ref" => {
            el.expect_attrs(path, &["name"], &[])?;
            el.expect_leaf(path)?;
            Ok(SetTerm::Ref(ref_attr(el, path, "name")?))
        }
        "app" => {
            el.expect_attrs(path, &["name"], &[])?;
            el.expect_no_text(path)?;
            if el.children.is_empty() {
                return Err(schema(path, "application without arguments"));
            }
            let args = el
                .children
                .iter()
                .enumerate()
                .map(|(i, c)| set_term(c, &child_path(path, i, c)))
                .collect::<Result<_, _>>()?;
            Ok(SetTerm::App(ref_attr(el, path, "name")?, args))
        }
        "forall" | "lambda" => {
            el.expect_attrs(path, &["var"], &[])?;
            el.expect_no_text(path)?;
            let var = name_attr(el, path, "var")?;
            let body = match el.children.as_slice() {
                [b] => set_term(b, &child_path(path, 0, b))?,
                _ => return Err(schema(path, "binder needs exactly one body")),
            };
            Ok(if el.name == "forall" {
                SetTerm::Forall(var, Box::new(body))
            } else {
                SetTerm::Lambda(var, Box::new(body))
            })
        }
        other => Err(schema(path, format!("unknown term element `{other}`"))),
    }
}

fn single_term(el: &Element, path: &str) -> Result<SetTerm, ImportError> {
    el.expect_attrs(path, &[], &[])?;
    el.expect_no_text(path)?;
    match el.children.as_slice() {
        [t] => set_term(t, &child_path(path, 0, t)),
        _ => Err(schema(path, "expected exactly one term")),
    }
}

fn src(el: &Element, path: &str) -> Result<SourceRef, ImportError> {
    el.expect_attrs(path, &["file", "line", "col"], &["endLine", "endCol"])?;
    el.expect_leaf(path)?;
    let line = num_attr(el, path, "line", 1)?;
    let col = num_attr(el, path, "col", 1)?;
    let end = match (el.attr("endLine"), el.attr("endCol")) {
        (None, None) => (line, col),
        (Some(_), Some(_)) => (
            num_attr(el, path, "endLine", 1)?,
            num_attr(el, path, "endCol", 1)?,
        ),
        (None, Some(_)) => return Err(schema(&format!("{path}@endLine"), "missing attribute")),
        (Some(_), None) => return Err(schema(&format!("{path}@endCol"), "missing attribute")),
    };
    SourceRef::new(el.required(path, "file")?, (line, col), end)
        .ok_or_else(|| schema(path, "range ends before it starts"))
}

fn text_child(el: &Element, path: &str) -> Result<String, ImportError> {
    el.expect_attrs(path, &[], &[])?;
    el.expect_leaf_text(path)?;
    Ok(el.text().to_string())
}

fn decl(el: &Element, path: &str) -> Result<ToysetDecl, ImportError> {
    if el.name != "decl" {
        return Err(schema(path, format!("unknown element `{}`", el.name)));
    }
    el.expect_attrs(path, &["kind", "name"], &["arity"])?;
    el.expect_no_text(path)?;
    let kind_str = el.required(path, "kind")?;
    let kind = ToysetKind::parse(kind_str).ok_or_else(|| {
        schema(
            &format!("{path}@kind"),
            format!("unknown kind `{kind_str}`"),
        )
    })?;
    let name = name_attr(el, path, "name")?;
    let arity = match (kind, el.attr("arity")) {
        (ToysetKind::Func | ToysetKind::Pred, _) => Some(num_attr(el, path, "arity", 0)? as usize),
        (_, Some(_)) => {
            return Err(schema(
                &format!("{path}@arity"),
                "only allowed on func and pred",
            ))
        }
        (_, None) => None,
    };
    let mut d = ToysetDecl {
        kind,
        name,
        arity,
        params: Vec::new(),
        tp: None,
        definiens: None,
        deps: None,
        src: None,
        notation: None,
        comment: None,
    };
    let allowed: &[&str] = match kind {
        ToysetKind::Func | ToysetKind::Pred => &[],
        ToysetKind::Axiom => &["type"],
        ToysetKind::Theorem => &["type", "dep"],
        ToysetKind::Scheme => &["param", "type", "dep"],
        ToysetKind::Definition => &["definiens"],
    };
    for (i, c) in el.children.iter().enumerate() {
        let cpath = child_path(path, i, c);
        let name = c.name.as_str();
        let common = matches!(name, "src" | "notation" | "comment");
        if !common && !allowed.contains(&name) {
            return Err(schema(
                &cpath,
                format!("element `{name}` not allowed for kind `{kind_str}`"),
            ));
        }
        let once = |present: bool| {
            if present {
                Err(schema(&cpath, format!("duplicate `{name}`")))
            } else {
                Ok(())
            }
        };
        match name {
            "type" => {
                once(d.tp.is_some())?;
                d.tp = Some(single_term(c, &cpath)?);
            }
            "definiens" => {
                once(d.definiens.is_some())?;
                d.definiens = Some(single_term(c, &cpath)?);
            }
            "param" => {
                c.expect_attrs(&cpath, &["name", "arity"], &[])?;
                c.expect_leaf(&cpath)?;
                d.params.push(SchemeParam {
                    name: name_attr(c, &cpath, "name")?,
                    arity: num_attr(c, &cpath, "arity", 0)? as usize,
                });
            }
            "dep" => {
                c.expect_attrs(&cpath, &["ref"], &[])?;
                c.expect_leaf(&cpath)?;
                d.deps
                    .get_or_insert_with(Vec::new)
                    .push(ref_attr(c, &cpath, "ref")?);
            }
            "src" => {
                once(d.src.is_some())?;
                d.src = Some(src(c, &cpath)?);
            }
            "notation" => {
                once(d.notation.is_some())?;
                d.notation = Some(text_child(c, &cpath)?);
            }
            "comment" => {
                once(d.comment.is_some())?;
                d.comment = Some(text_child(c, &cpath)?);
            }
            _ => unreachable!(),
        }
    }
    let needs = match kind {
        ToysetKind::Axiom | ToysetKind::Theorem | ToysetKind::Scheme => {
            Some(("type", d.tp.is_none()))
        }
        ToysetKind::Definition => Some(("definiens", d.definiens.is_none())),
        _ => None,
    };
    if let Some((field, true)) = needs {
        return Err(schema(&format!("{path}/{field}"), "missing element"));
    }
    if kind == ToysetKind::Scheme && d.params.is_empty() {
        return Err(schema(
            &format!("{path}/param"),
            "a scheme needs at least one parameter",
        ));
    }
    Ok(d)
}

/// Parses and validates a `toyset` document.
pub fn parse_toyset(bytes: &[u8]) -> Result<ToysetDoc, ImportError> {
    let root = xml::parse(bytes)?;
    let path = "export".to_string();
    if root.name != "export" {
        return Err(schema(
            &path,
            format!("expected root `export`, found `{}`", root.name),
        ));
    }
    root.expect_attrs(&path, &["version"], &["namespace"])?;
    root.expect_no_text(&path)?;
    let version = root.required(&path, "version")?.to_string();
    if version != VERSION {
        return Err(ImportError::UnsupportedVersion(version));
    }
    let namespace = root.attr("namespace").map(str::to_string);
    if namespace
        .as_deref()
        .is_some_and(|ns| ns.is_empty() || ns.contains('?'))
    {
        return Err(schema(&format!("{path}@namespace"), "invalid namespace"));
    }
    let mut articles: Vec<Article> = Vec::new();
    for (i, a) in root.children.iter().enumerate() {
        let apath = child_path(&path, i, a);
        if a.name != "article" {
            return Err(schema(&apath, format!("unknown element `{}`", a.name)));
        }
        a.expect_attrs(&apath, &["name"], &[])?;
        a.expect_no_text(&apath)?;
        let name = name_attr(a, &apath, "name")?;
        if articles.iter().any(|x| x.name == name) {
            return Err(schema(
                &format!("{apath}@name"),
                format!("duplicate article `{name}`"),
            ));
        }
        let mut article = Article {
            name,
            includes: Vec::new(),
            decls: Vec::new(),
        };
        for (j, c) in a.children.iter().enumerate() {
            let cpath = child_path(&apath, j, c);
            if c.name == "include" {
                if !article.decls.is_empty() {
                    return Err(schema(&cpath, "includes must precede declarations"));
                }
                c.expect_attrs(&cpath, &["article"], &[])?;
                c.expect_leaf(&cpath)?;
                article.includes.push(name_attr(c, &cpath, "article")?);
                continue;
            }
            let d = decl(c, &cpath)?;
            if article.decls.iter().any(|x| x.name == d.name) {
                return Err(schema(
                    &format!("{cpath}@name"),
                    format!("duplicate declaration `{}`", d.name),
                ));
            }
            article.decls.push(d);
        }
        articles.push(article);
    }
    Ok(ToysetDoc {
        version,
        namespace,
        articles,
    })
}

fn fol(n: &str) -> Term {
    LogicId::FolSoft.constant(n)
}

fn predicate_type(arity: usize, result: Term) -> Term {
    (0..arity).fold(result, |acc, _| Term::arrow(fol("set"), acc))
}

#[derive(Debug, Clone)]
enum Entry {
    Symbol(Ident),
    Assertion(Ident),
}

struct Encoder<'a> {
    scope: &'a HashMap<String, Entry>,
    locals: Vec<String>,
}

impl Encoder<'_> {
    fn head(&self, name: &str) -> Result<Term, ImportIssue> {
        if let Some(pos) = self.locals.iter().rposition(|x| x == name) {
            return Ok(Term::var(self.locals.len() - 1 - pos));
        }
        if let Some(Entry::Symbol(id)) = self.scope.get(name) {
            return Ok(Term::Const(id.clone()));
        }
        if let Some((_, c)) = CONNECTIVES.iter().find(|(s, _)| *s == name) {
            return Ok(fol(c));
        }
        Err(ImportIssue::UnknownIdent(name.to_string()))
    }

    fn binder(&mut self, var: &str, body: &SetTerm) -> Result<Term, ImportIssue> {
        self.locals.push(var.to_string());
        let b = self.encode(body);
        self.locals.pop();
        Ok(Term::lam(var, fol("set"), b?))
    }

    fn encode(&mut self, t: &SetTerm) -> Result<Term, ImportIssue> {
        match t {
            SetTerm::Ref(n) => self.head(n),
            SetTerm::App(n, args) => {
                let head = self.head(n)?;
                let args = args
                    .iter()
                    .map(|a| self.encode(a))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Term::apps(head, args))
            }
            SetTerm::Forall(var, body) => Ok(Term::app(fol("forallSet"), self.binder(var, body)?)),
            SetTerm::Lambda(var, body) => self.binder(var, body),
        }
    }
}

fn metadata(kind: DeclKind, d: &ToysetDecl) -> Metadata {
    let mut meta = Metadata::of_kind(kind);
    meta.source_ref = d.src.clone();
    meta.notation = d.notation.clone();
    meta.comments = d.comment.iter().cloned().collect();
    meta
}

/// Output of one record: the declarations it generates, the pattern
/// instance if any, and the name under which it is visible afterwards.
struct Translated {
    decls: Vec<Declaration>,
    instance: Option<PatternInstance>,
    entry: Entry,
}

fn translate(
    theory: &Theory,
    scope: &HashMap<String, Entry>,
    checker: &TheoryChecker<'_>,
    d: &ToysetDecl,
) -> Result<Translated, ImportIssue> {
    let id = theory.symbol(&d.name);
    let mut enc = Encoder {
        scope,
        locals: Vec::new(),
    };
    let deps = || -> Result<Proof, ImportIssue> {
        Ok(match &d.deps {
            None => Proof::Omitted,
            Some(deps) => Proof::depends_on(
                deps.iter()
                    .map(|n| match scope.get(n) {
                        Some(Entry::Assertion(id)) => Ok(id.clone()),
                        _ => Err(ImportIssue::UnknownIdent(n.clone())),
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        })
    };
    let single = |decl: Declaration, entry: Entry| Translated {
        decls: vec![decl],
        instance: None,
        entry,
    };
    let mut out = match d.kind {
        ToysetKind::Func | ToysetKind::Pred => {
            let result = if d.kind == ToysetKind::Func {
                "set"
            } else {
                "prop"
            };
            let tp = predicate_type(d.arity.unwrap_or(0), fol(result));
            single(
                Declaration::constant(id.clone(), tp, DeclKind::Constant),
                Entry::Symbol(id),
            )
        }
        ToysetKind::Axiom => {
            let st = Term::app(fol("ded"), enc.encode(d.tp.as_ref().expect("validated"))?);
            single(Declaration::axiom(id.clone(), st), Entry::Assertion(id))
        }
        ToysetKind::Theorem => {
            let st = Term::app(fol("ded"), enc.encode(d.tp.as_ref().expect("validated"))?);
            single(
                Declaration::theorem(id.clone(), st, deps()?),
                Entry::Assertion(id),
            )
        }
        ToysetKind::Scheme => {
            let mut vars = Context::new();
            for p in &d.params {
                vars.push(&p.name, predicate_type(p.arity, fol("prop")));
                enc.locals.push(p.name.clone());
            }
            let statement = Term::app(fol("ded"), enc.encode(d.tp.as_ref().expect("validated"))?);
            let closed = close_toplevel(&SchematicDecl { vars, statement });
            let decl = match d.deps {
                Some(_) => Declaration::theorem(id.clone(), closed, deps()?),
                None => Declaration::axiom(id.clone(), closed),
            };
            single(decl, Entry::Assertion(id))
        }
        ToysetKind::Definition => {
            let arg = enc.encode(d.definiens.as_ref().expect("validated"))?;
            let inst = PatternInstance {
                name: id,
                pattern: func_definition_pattern_id(),
                args: vec![arg],
            };
            let pattern = crate::logic::builtin_pattern(&inst.pattern).expect("bundled pattern");
            let decls = elaborate_in(&checker.kernel(), pattern, &inst)?;
            Translated {
                decls,
                entry: Entry::Symbol(inst.generated_name("func")),
                instance: Some(inst),
            }
        }
    };
    for decl in &mut out.decls {
        let kind = decl.kind();
        let origin = decl.meta.origin.take();
        decl.meta = metadata(kind, d);
        decl.meta.origin = origin;
    }
    Ok(out)
}

/// Imports a validated document into a library over `folSoft`.
pub fn import_toyset(doc: &ToysetDoc) -> Result<Import, ImportError> {
    import_toyset_with(doc, KernelConfig::default())
}

pub fn import_toyset_with(doc: &ToysetDoc, config: KernelConfig) -> Result<Import, ImportError> {
    let ns = doc.namespace.as_deref().unwrap_or(DEFAULT_NAMESPACE);
    let mut lib = Library::new(ns);
    let mut report = ImportReport {
        records: doc.record_count(),
        ..Default::default()
    };
    let mut exports: HashMap<String, (Ident, HashMap<String, Entry>)> = HashMap::new();
    let meta = LogicId::FolSoft.ident();
    for (i, a) in doc.articles.iter().enumerate() {
        let name = Ident::new(ns, DOCUMENT, &a.name)
            .map_err(|e| schema(&format!("export/article[{i}]@name"), e.to_string()))?;
        let mut theory = Theory::new(name, Some(meta.clone()));
        let mut scope = HashMap::new();
        for inc in &a.includes {
            let (id, names) = exports.get(inc).ok_or_else(|| ImportError::UnknownTheory {
                path: format!("export/article[{i}]@name"),
                name: inc.clone(),
            })?;
            theory.includes.push(id.clone());
            scope.extend(names.iter().map(|(k, v)| (k.clone(), v.clone())));
        }
        let mut checker =
            TheoryChecker::new(&lib, theory.meta_theory.as_ref(), &theory.includes, config)?;
        let mut accepted = Vec::new();
        let mut instances = Vec::new();
        for d in &a.decls {
            let outcome = translate(&theory, &scope, &checker, d).and_then(|t| {
                for decl in &t.decls {
                    checker.check_decl(decl)?;
                }
                Ok(t)
            });
            match outcome {
                Ok(t) => {
                    scope.insert(d.name.clone(), t.entry);
                    // Generated declarations stay addressable by their own names.
                    for decl in t.decls.iter().skip(1) {
                        let entry = if decl.kind().is_citable() {
                            Entry::Assertion(decl.name.clone())
                        } else {
                            Entry::Symbol(decl.name.clone())
                        };
                        scope.insert(decl.name.name().to_string(), entry);
                    }
                    if t.instance.is_some() {
                        scope.insert(
                            t.decls[0].name.name().to_string(),
                            Entry::Symbol(t.decls[0].name.clone()),
                        );
                    }
                    accepted.extend(t.decls);
                    instances.extend(t.instance);
                    report.imported += 1;
                }
                Err(issue) => report.failures.push(ImportFailure {
                    theory: theory.name.clone(),
                    name: d.name.clone(),
                    issue,
                }),
            }
        }
        drop(checker);
        theory.decls = accepted;
        theory.instances = instances;
        exports.insert(a.name.clone(), (theory.name.clone(), scope));
        lib.theories.push(theory);
    }
    finish(lib, report)
}
