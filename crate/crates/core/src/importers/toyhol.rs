//! The `toyhol` JSON export (format version "1"). See `docs/toyhol-schema.md`.

use std::collections::HashMap;

use serde_json::{Map, Value};

use super::surface::{annotate, church_term, SurfaceTerm, SurfaceType, TypingEnv};
use super::{finish, Import, ImportError, ImportFailure, ImportIssue, ImportReport};
use crate::kernel::{
    DeclKind, Declaration, Ident, KernelConfig, Library, Metadata, Proof, SourceRef, Term, Theory,
    TheoryChecker,
};
use crate::logic::LogicId;

pub const VERSION: &str = "1";
pub const DEFAULT_NAMESPACE: &str = "http://oaf.example.org/toyhol";
/// Document component of imported theory identifiers.
pub const DOCUMENT: &str = "toyhol";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToyholDoc {
    pub version: String,
    pub namespace: Option<String>,
    pub theories: Vec<ToyholTheory>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToyholTheory {
    pub name: String,
    pub includes: Vec<String>,
    pub decls: Vec<ToyholDecl>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToyholKind {
    Type,
    Constant,
    Definition,
    Axiom,
    Theorem,
}

impl ToyholKind {
    const NAMES: [(&'static str, ToyholKind); 5] = [
        ("type", ToyholKind::Type),
        ("constant", ToyholKind::Constant),
        ("definition", ToyholKind::Definition),
        ("axiom", ToyholKind::Axiom),
        ("theorem", ToyholKind::Theorem),
    ];
}

/// The `type` field: a simple type for constants and definitions, a
/// statement for axioms and theorems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeField {
    Type(SurfaceType),
    Statement(SurfaceTerm),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrcField {
    pub file: String,
    pub line: u32,
    pub col: u32,
    pub end: Option<(u32, u32)>,
}

impl SrcField {
    pub fn to_source_ref(&self) -> Option<SourceRef> {
        let end = self.end.unwrap_or((self.line, self.col));
        SourceRef::new(self.file.clone(), (self.line, self.col), end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToyholDecl {
    pub kind: ToyholKind,
    pub name: String,
    pub tp: Option<TypeField>,
    pub definiens: Option<SurfaceTerm>,
    pub deps: Option<Vec<String>>,
    pub src: Option<SrcField>,
    pub notation: Option<String>,
    pub comment: Option<String>,
}

impl ToyholDoc {
    pub fn record_count(&self) -> usize {
        self.theories.iter().map(|t| t.decls.len()).sum()
    }
}

type Fields<'a> = &'a Map<String, Value>;

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<Fields<'a>, ImportError> {
    let obj = v
        .as_object()
        .ok_or_else(|| ImportError::schema(path, "expected an object"))?;
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(ImportError::schema(join(path, key), "unknown field"));
        }
    }
    Ok(obj)
}

fn join(path: &str, field: &str) -> String {
    if path.is_empty() {
        field.to_string()
    } else {
        format!("{path}.{field}")
    }
}

fn required<'a>(obj: Fields<'a>, path: &str, field: &str) -> Result<&'a Value, ImportError> {
    obj.get(field)
        .ok_or_else(|| ImportError::schema(join(path, field), "missing field"))
}

fn string(v: &Value, path: &str) -> Result<String, ImportError> {
    match v.as_str() {
        Some(s) if !s.is_empty() => Ok(s.to_string()),
        Some(_) => Err(ImportError::schema(path, "empty string")),
        None => Err(ImportError::schema(path, "expected a string")),
    }
}

fn opt_string(obj: Fields<'_>, path: &str, field: &str) -> Result<Option<String>, ImportError> {
    obj.get(field)
        .map(|v| string(v, &join(path, field)))
        .transpose()
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, ImportError> {
    v.as_array()
        .ok_or_else(|| ImportError::schema(path, "expected an array"))
}

fn strings(v: &Value, path: &str) -> Result<Vec<String>, ImportError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, s)| string(s, &format!("{path}[{i}]")))
        .collect()
}

fn positive(v: &Value, path: &str) -> Result<u32, ImportError> {
    v.as_u64()
        .filter(|n| *n >= 1 && *n <= u32::MAX as u64)
        .map(|n| n as u32)
        .ok_or_else(|| ImportError::schema(path, "expected a positive integer"))
}

fn identifier(v: &Value, path: &str) -> Result<String, ImportError> {
    let s = string(v, path)?;
    if s.contains(['?', '/']) || s.chars().any(char::is_whitespace) {
        return Err(ImportError::schema(path, format!("invalid name `{s}`")));
    }
    Ok(s)
}

fn surface_type(v: &Value, path: &str) -> Result<SurfaceType, ImportError> {
    if v.is_string() {
        return Ok(SurfaceType::Base(identifier(v, path)?));
    }
    let obj = object(v, path, &["arrow"])?;
    let p = join(path, "arrow");
    let parts = array(required(obj, path, "arrow")?, &p)?;
    if parts.len() < 2 {
        return Err(ImportError::schema(p, "arrow needs at least two types"));
    }
    let mut types = parts
        .iter()
        .enumerate()
        .map(|(i, t)| surface_type(t, &format!("{p}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut acc = types.pop().expect("nonempty");
    while let Some(t) = types.pop() {
        acc = SurfaceType::arrow(t, acc);
    }
    Ok(acc)
}

fn surface_term(v: &Value, path: &str) -> Result<SurfaceTerm, ImportError> {
    if v.is_string() {
        return Ok(SurfaceTerm::Name(identifier(v, path)?));
    }
    let obj = v
        .as_object()
        .ok_or_else(|| ImportError::schema(path, "expected a name or an object"))?;
    let former = match obj.keys().next() {
        Some(k) if obj.len() == 1 => k.as_str(),
        _ => {
            return Err(ImportError::schema(
                path,
                "expected exactly one of app, abs, forall",
            ))
        }
    };
    let p = join(path, former);
    match former {
        "app" => {
            let parts = array(&obj["app"], &p)?;
            if parts.len() < 2 {
                return Err(ImportError::schema(p, "app needs a head and an argument"));
            }
            let mut it = parts.iter().enumerate();
            let (_, head) = it.next().expect("nonempty");
            let mut acc = surface_term(head, &format!("{p}[0]"))?;
            for (i, a) in it {
                acc = SurfaceTerm::app(acc, surface_term(a, &format!("{p}[{i}]"))?);
            }
            Ok(acc)
        }
        "abs" | "forall" => {
            let b = object(&obj[former], &p, &["var", "type", "body"])?;
            let var = identifier(required(b, &p, "var")?, &join(&p, "var"))?;
            let annot = b
                .get("type")
                .map(|t| surface_type(t, &join(&p, "type")))
                .transpose()?;
            let body = surface_term(required(b, &p, "body")?, &join(&p, "body"))?;
            Ok(if former == "abs" {
                SurfaceTerm::abs(&var, annot, body)
            } else {
                SurfaceTerm::forall(&var, annot, body)
            })
        }
        other => Err(ImportError::schema(
            join(path, other),
            "unknown term former",
        )),
    }
}

fn src_field(v: &Value, path: &str) -> Result<SrcField, ImportError> {
    let o = object(v, path, &["file", "line", "col", "endLine", "endCol"])?;
    let file = string(required(o, path, "file")?, &join(path, "file"))?;
    let line = positive(required(o, path, "line")?, &join(path, "line"))?;
    let col = positive(required(o, path, "col")?, &join(path, "col"))?;
    let end = match (o.get("endLine"), o.get("endCol")) {
        (None, None) => None,
        (Some(l), Some(c)) => Some((
            positive(l, &join(path, "endLine"))?,
            positive(c, &join(path, "endCol"))?,
        )),
        (None, Some(_)) => return Err(ImportError::schema(join(path, "endLine"), "missing field")),
        (Some(_), None) => return Err(ImportError::schema(join(path, "endCol"), "missing field")),
    };
    let src = SrcField {
        file,
        line,
        col,
        end,
    };
    if src.to_source_ref().is_none() {
        return Err(ImportError::schema(path, "range ends before it starts"));
    }
    Ok(src)
}

fn decl(v: &Value, path: &str) -> Result<ToyholDecl, ImportError> {
    let o = object(
        v,
        path,
        &[
            "kind",
            "name",
            "type",
            "definiens",
            "deps",
            "src",
            "notation",
            "comment",
        ],
    )?;
    let kind_path = join(path, "kind");
    let kind_str = string(required(o, path, "kind")?, &kind_path)?;
    let kind = ToyholKind::NAMES
        .iter()
        .find(|(n, _)| *n == kind_str)
        .map(|(_, k)| *k)
        .ok_or_else(|| ImportError::schema(&kind_path, format!("unknown kind `{kind_str}`")))?;
    let name = identifier(required(o, path, "name")?, &join(path, "name"))?;

    let (type_rule, def_rule, deps_allowed) = match kind {
        ToyholKind::Type => (Rule::Forbidden, Rule::Forbidden, false),
        ToyholKind::Constant => (Rule::Required, Rule::Forbidden, false),
        ToyholKind::Definition => (Rule::Optional, Rule::Required, false),
        ToyholKind::Axiom => (Rule::Required, Rule::Forbidden, false),
        ToyholKind::Theorem => (Rule::Required, Rule::Forbidden, true),
    };
    let type_path = join(path, "type");
    let tp = rule(o, path, "type", type_rule, &kind_str)?
        .map(|t| match kind {
            ToyholKind::Axiom | ToyholKind::Theorem => {
                surface_term(t, &type_path).map(TypeField::Statement)
            }
            _ => surface_type(t, &type_path).map(TypeField::Type),
        })
        .transpose()?;
    let definiens = rule(o, path, "definiens", def_rule, &kind_str)?
        .map(|t| surface_term(t, &join(path, "definiens")))
        .transpose()?;
    let deps_path = join(path, "deps");
    let deps = match o.get("deps") {
        Some(_) if !deps_allowed => {
            return Err(ImportError::schema(
                deps_path,
                format!("not allowed for kind `{kind_str}`"),
            ))
        }
        Some(d) => Some(strings(d, &deps_path)?),
        None => None,
    };
    Ok(ToyholDecl {
        kind,
        name,
        tp,
        definiens,
        deps,
        src: o
            .get("src")
            .map(|s| src_field(s, &join(path, "src")))
            .transpose()?,
        notation: opt_string(o, path, "notation")?,
        comment: opt_string(o, path, "comment")?,
    })
}

#[derive(Clone, Copy)]
enum Rule {
    Required,
    Optional,
    Forbidden,
}

fn rule<'a>(
    o: Fields<'a>,
    path: &str,
    field: &str,
    rule: Rule,
    kind: &str,
) -> Result<Option<&'a Value>, ImportError> {
    match (rule, o.get(field)) {
        (Rule::Required, None) => Err(ImportError::schema(join(path, field), "missing field")),
        (Rule::Forbidden, Some(_)) => Err(ImportError::schema(
            join(path, field),
            format!("not allowed for kind `{kind}`"),
        )),
        (_, v) => Ok(v),
    }
}

/// Parses and validates a `toyhol` document.
pub fn parse_toyhol(bytes: &[u8]) -> Result<ToyholDoc, ImportError> {
    let v: Value =
        serde_json::from_slice(bytes).map_err(|e| ImportError::Malformed(e.to_string()))?;
    let o = object(&v, "", &["version", "namespace", "theories"])?;
    let version = required(o, "", "version")?
        .as_str()
        .ok_or_else(|| ImportError::schema("version", "expected a string"))?
        .to_string();
    if version != VERSION {
        return Err(ImportError::UnsupportedVersion(version));
    }
    let namespace = opt_string(o, "", "namespace")?;
    if let Some(ns) = &namespace {
        if ns.contains('?') {
            return Err(ImportError::schema("namespace", "must not contain `?`"));
        }
    }
    let mut theories = Vec::new();
    let mut theory_names = HashMap::new();
    for (i, t) in array(required(o, "", "theories")?, "theories")?
        .iter()
        .enumerate()
    {
        let path = format!("theories[{i}]");
        let to = object(t, &path, &["name", "includes", "decls"])?;
        let name = identifier(required(to, &path, "name")?, &join(&path, "name"))?;
        if theory_names.insert(name.clone(), i).is_some() {
            return Err(ImportError::schema(
                join(&path, "name"),
                format!("duplicate theory `{name}`"),
            ));
        }
        let includes = match to.get("includes") {
            Some(v) => strings(v, &join(&path, "includes"))?,
            None => Vec::new(),
        };
        let decls_path = join(&path, "decls");
        let mut decls = Vec::new();
        let mut names = HashMap::new();
        for (j, d) in array(required(to, &path, "decls")?, &decls_path)?
            .iter()
            .enumerate()
        {
            let dpath = format!("{decls_path}[{j}]");
            let d = decl(d, &dpath)?;
            if names.insert(d.name.clone(), j).is_some() {
                return Err(ImportError::schema(
                    join(&dpath, "name"),
                    format!("duplicate declaration `{}`", d.name),
                ));
            }
            decls.push(d);
        }
        theories.push(ToyholTheory {
            name,
            includes,
            decls,
        });
    }
    Ok(ToyholDoc {
        version,
        namespace,
        theories,
    })
}

/// What a local name refers to while importing.
#[derive(Debug, Clone)]
pub(crate) struct Exported {
    pub(crate) id: Ident,
    pub(crate) entry: Entry,
}

#[derive(Debug, Clone)]
pub(crate) enum Entry {
    Type,
    Constant(SurfaceType),
    Assertion,
}

fn metadata(kind: DeclKind, d: &ToyholDecl) -> Metadata {
    let mut meta = Metadata::of_kind(kind);
    meta.source_ref = d.src.as_ref().and_then(SrcField::to_source_ref);
    meta.notation = d.notation.clone();
    meta.comments = d.comment.iter().cloned().collect();
    meta
}

fn env_of(scope: &HashMap<String, Exported>) -> TypingEnv {
    let mut env = TypingEnv::hol();
    for (local, e) in scope {
        match &e.entry {
            Entry::Type => env.declare_type(local, e.id.clone()),
            Entry::Constant(tp) => env.declare_constant(local, e.id.clone(), tp.clone()),
            Entry::Assertion => {}
        }
    }
    env
}

fn hol(n: &str) -> Term {
    LogicId::HolChurch.constant(n)
}

/// Translates one record; the checker decides whether it is kept.
fn translate(
    theory: &Theory,
    scope: &HashMap<String, Exported>,
    d: &ToyholDecl,
) -> Result<(Declaration, Entry), ImportIssue> {
    let env = env_of(scope);
    let id = theory.symbol(&d.name);
    let bool_t = SurfaceType::bool();
    let statement = |t: &SurfaceTerm| -> Result<Term, ImportIssue> {
        let ann = annotate(&env, t, Some(&bool_t))?;
        Ok(Term::app(hol("ded"), church_term(&env, &ann)?))
    };
    let (mut decl, entry) = match (d.kind, &d.tp) {
        (ToyholKind::Type, _) => (
            Declaration::constant(id, hol("tp"), DeclKind::Type),
            Entry::Type,
        ),
        (ToyholKind::Constant, Some(TypeField::Type(t))) => {
            env.check_type(t).map_err(ImportIssue::from)?;
            let tp = Term::app(hol("tm"), env.church_type(t)?);
            (
                Declaration::constant(id, tp, DeclKind::Constant),
                Entry::Constant(t.clone()),
            )
        }
        (ToyholKind::Definition, tp) => {
            let expected = match tp {
                Some(TypeField::Type(t)) => Some(t),
                _ => None,
            };
            let def = d.definiens.as_ref().expect("validated");
            let ann = annotate(&env, def, expected)?;
            let tp = Term::app(hol("tm"), env.church_type(&ann.tp)?);
            (
                Declaration::defined(id, Some(tp), church_term(&env, &ann)?),
                Entry::Constant(ann.tp.clone()),
            )
        }
        (ToyholKind::Axiom, Some(TypeField::Statement(s))) => {
            (Declaration::axiom(id, statement(s)?), Entry::Assertion)
        }
        (ToyholKind::Theorem, Some(TypeField::Statement(s))) => {
            let proof = match &d.deps {
                None => Proof::Omitted,
                Some(deps) => Proof::depends_on(
                    deps.iter()
                        .map(|dep| match scope.get(dep) {
                            Some(Exported {
                                id,
                                entry: Entry::Assertion,
                            }) => Ok(id.clone()),
                            _ => Err(ImportIssue::UnknownIdent(dep.clone())),
                        })
                        .collect::<Result<Vec<_>, _>>()?,
                ),
            };
            (
                Declaration::theorem(id, statement(s)?, proof),
                Entry::Assertion,
            )
        }
        _ => unreachable!("record shape is validated by the parser"),
    };
    let kind = decl.kind();
    decl.meta = metadata(kind, d);
    Ok((decl, entry))
}

/// Imports a validated document into a library over `holChurch`. Failing
/// declarations are dropped and listed in the report.
pub fn import_toyhol(doc: &ToyholDoc) -> Result<Import, ImportError> {
    import_toyhol_with(doc, KernelConfig::default())
}

pub fn import_toyhol_with(doc: &ToyholDoc, config: KernelConfig) -> Result<Import, ImportError> {
    let ns = doc.namespace.as_deref().unwrap_or(DEFAULT_NAMESPACE);
    let mut lib = Library::new(ns);
    let mut report = ImportReport {
        records: doc.record_count(),
        ..Default::default()
    };
    let mut exports: HashMap<String, (Ident, HashMap<String, Exported>)> = HashMap::new();
    let hol_id = LogicId::HolChurch.ident();
    for (i, t) in doc.theories.iter().enumerate() {
        let name = Ident::new(ns, DOCUMENT, &t.name)
            .map_err(|e| ImportError::schema(format!("theories[{i}].name"), e.to_string()))?;
        let mut theory = Theory::new(name, Some(hol_id.clone()));
        let mut scope = HashMap::new();
        for (j, inc) in t.includes.iter().enumerate() {
            let (id, names) = exports.get(inc).ok_or_else(|| ImportError::UnknownTheory {
                path: format!("theories[{i}].includes[{j}]"),
                name: inc.clone(),
            })?;
            theory.includes.push(id.clone());
            scope.extend(names.iter().map(|(k, v)| (k.clone(), v.clone())));
        }
        let mut checker =
            TheoryChecker::new(&lib, theory.meta_theory.as_ref(), &theory.includes, config)?;
        let mut accepted = Vec::new();
        for d in &t.decls {
            let outcome = translate(&theory, &scope, d).and_then(|(decl, entry)| {
                checker.check_decl(&decl)?;
                Ok((decl, entry))
            });
            match outcome {
                Ok((decl, entry)) => {
                    scope.insert(
                        d.name.clone(),
                        Exported {
                            id: decl.name.clone(),
                            entry,
                        },
                    );
                    accepted.push(decl);
                }
                Err(issue) => report.failures.push(ImportFailure {
                    theory: theory.name.clone(),
                    name: d.name.clone(),
                    issue,
                }),
            }
        }
        drop(checker);
        report.imported += accepted.len();
        theory.decls = accepted;
        exports.insert(t.name.clone(), (theory.name.clone(), scope));
        lib.theories.push(theory);
    }
    finish(lib, report)
}
