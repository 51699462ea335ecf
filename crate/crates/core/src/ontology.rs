//! Identifier-level RDF abstraction of libraries, N-Triples I/O, and
//! dependency queries over the resulting store.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::kernel::{check_library, DeclKind, Ident, KernelConfig, KernelResult, Library, Proof};

/// Expansion of the `ulo:` prefix.
pub const ULO_BASE: &str = "https://oaf.example.org/ulo#";

/// The seven relations extracted from a library.
pub const PREDICATES: [&str; 7] = [
    "declares",
    "includes",
    "metaTheory",
    "kind",
    "sourceFile",
    "uses",
    "justifiedBy",
];

/// Per-theory provenance: whether the kernel ran and what it said.
pub const CHECK_STATUS: &str = "checkStatus";

pub fn ulo(local: &str) -> String {
    format!("{ULO_BASE}{local}")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OntologyError {
    #[error("unknown identifier {0}")]
    UnknownIdent(Ident),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Object {
    Iri(String),
    Literal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RdfTriple {
    pub subject: String,
    pub predicate: String,
    pub object: Object,
}

impl RdfTriple {
    pub fn new(subject: impl Into<String>, predicate: impl Into<String>, object: Object) -> Self {
        RdfTriple {
            subject: subject.into(),
            predicate: predicate.into(),
            object,
        }
    }
}

/// Insertion-ordered set of triples with subject and object indexes.
#[derive(Debug, Clone, Default)]
pub struct TripleStore {
    triples: Vec<RdfTriple>,
    seen: HashSet<RdfTriple>,
    by_subject: HashMap<String, Vec<usize>>,
    by_object: HashMap<String, Vec<usize>>,
}

impl PartialEq for TripleStore {
    fn eq(&self, other: &Self) -> bool {
        self.triples == other.triples
    }
}

impl Eq for TripleStore {}

impl TripleStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false if the triple was already present.
    pub fn insert(&mut self, t: RdfTriple) -> bool {
        if self.seen.contains(&t) {
            return false;
        }
        let i = self.triples.len();
        self.by_subject
            .entry(t.subject.clone())
            .or_default()
            .push(i);
        if let Object::Iri(o) = &t.object {
            self.by_object.entry(o.clone()).or_default().push(i);
        }
        self.seen.insert(t.clone());
        self.triples.push(t);
        true
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &RdfTriple> {
        self.triples.iter()
    }

    pub fn contains(&self, t: &RdfTriple) -> bool {
        self.seen.contains(t)
    }

    pub fn with_subject<'a>(&'a self, s: &str) -> impl Iterator<Item = &'a RdfTriple> {
        self.by_subject
            .get(s)
            .into_iter()
            .flatten()
            .map(|&i| &self.triples[i])
    }

    pub fn with_object<'a>(&'a self, o: &str) -> impl Iterator<Item = &'a RdfTriple> {
        self.by_object
            .get(o)
            .into_iter()
            .flatten()
            .map(|&i| &self.triples[i])
    }

    /// True if `iri` occurs as subject or IRI object.
    pub fn mentions(&self, iri: &str) -> bool {
        self.by_subject.contains_key(iri) || self.by_object.contains_key(iri)
    }
}

impl FromIterator<RdfTriple> for TripleStore {
    fn from_iter<I: IntoIterator<Item = RdfTriple>>(iter: I) -> Self {
        let mut s = TripleStore::new();
        for t in iter {
            s.insert(t);
        }
        s
    }
}

fn iri_safe(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b"-._~:/@!$&'()*+,;=".contains(&b)
}

fn percent_encode(s: &str, out: &mut String) {
    for b in s.bytes() {
        if iri_safe(b) {
            out.push(b as char);
        } else {
            let _ = write!(out, "%{b:02X}");
        }
    }
}

/// `namespace?module?name`, each component percent-encoded.
pub fn iri_of(id: &Ident) -> String {
    let mut out = String::new();
    percent_encode(id.namespace(), &mut out);
    out.push('?');
    percent_encode(id.module(), &mut out);
    out.push('?');
    percent_encode(id.name(), &mut out);
    out
}

fn percent_decode(s: &str) -> Option<String> {
    let bytes = s.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' {
            let hex = s.get(i + 1..i + 3)?;
            out.push(u8::from_str_radix(hex, 16).ok()?);
            i += 3;
        } else {
            out.push(bytes[i]);
            i += 1;
        }
    }
    String::from_utf8(out).ok()
}

/// Inverse of [`iri_of`]; `None` for IRIs that do not name an identifier.
pub fn ident_of(iri: &str) -> Option<Ident> {
    let parts: Vec<&str> = iri.split('?').collect();
    let [ns, module, name] = parts.as_slice() else {
        return None;
    };
    Ident::new(
        &percent_decode(ns)?,
        &percent_decode(module)?,
        &percent_decode(name)?,
    )
    .ok()
}

#[derive(Debug, Clone, Default)]
pub struct ExtractOptions {
    /// Count constants inside proof terms as uses.
    pub include_proof_uses: bool,
    /// Check verdict per theory; `None` records every theory as unchecked.
    pub verdicts: Option<BTreeMap<Ident, bool>>,
}

/// Runs the kernel over `lib` and records the verdicts.
pub fn checked_options(lib: &Library, config: KernelConfig) -> KernelResult<ExtractOptions> {
    let verdicts = check_library(lib, config)?
        .into_iter()
        .map(|r| {
            let ok = r.passed();
            (r.subject, ok)
        })
        .collect();
    Ok(ExtractOptions {
        include_proof_uses: false,
        verdicts: Some(verdicts),
    })
}

/// Triples in library order: per theory its own triples, then per
/// declaration `declares`, `kind`, `sourceFile`, `uses`, `justifiedBy`.
pub fn extract_triples(lib: &Library, opts: &ExtractOptions) -> TripleStore {
    let mut store = TripleStore::new();
    let iri = |id: &Ident| Object::Iri(iri_of(id));
    for th in &lib.theories {
        let t = iri_of(&th.name);
        if let Some(m) = &th.meta_theory {
            store.insert(RdfTriple::new(&t, ulo("metaTheory"), iri(m)));
        }
        for inc in &th.includes {
            store.insert(RdfTriple::new(&t, ulo("includes"), iri(inc)));
        }
        let status = match &opts.verdicts {
            None => "unchecked",
            Some(v) => match v.get(&th.name) {
                Some(true) => "passed",
                Some(false) => "failed",
                None => "unchecked",
            },
        };
        store.insert(RdfTriple::new(
            &t,
            ulo(CHECK_STATUS),
            Object::Literal(status.into()),
        ));
        for d in &th.decls {
            let s = iri_of(&d.name);
            store.insert(RdfTriple::new(&t, ulo("declares"), Object::Iri(s.clone())));
            store.insert(RdfTriple::new(
                &s,
                ulo("kind"),
                Object::Iri(ulo(d.kind().as_str())),
            ));
            if let Some(r) = &d.meta.source_ref {
                store.insert(RdfTriple::new(
                    &s,
                    ulo("sourceFile"),
                    Object::Literal(r.file.clone()),
                ));
            }
            let mut used = BTreeSet::new();
            for t in d.tp.iter().chain(&d.definiens) {
                t.collect_constants(&mut used);
            }
            if opts.include_proof_uses {
                if let Some(Proof::ProofTerm(p)) = &d.proof {
                    p.collect_constants(&mut used);
                }
            }
            for c in &used {
                store.insert(RdfTriple::new(&s, ulo("uses"), iri(c)));
            }
            if let Some(Proof::DependsOn(ids)) = &d.proof {
                for a in ids {
                    store.insert(RdfTriple::new(&s, ulo("justifiedBy"), iri(a)));
                }
            }
        }
    }
    store
}

fn is_dependency(p: &str) -> bool {
    p.strip_prefix(ULO_BASE)
        .is_some_and(|l| l == "uses" || l == "justifiedBy")
}

fn known(store: &TripleStore, id: &Ident) -> Result<String, OntologyError> {
    let iri = iri_of(id);
    if store.mentions(&iri) {
        Ok(iri)
    } else {
        Err(OntologyError::UnknownIdent(id.clone()))
    }
}

fn closure(start: String, next: impl Fn(&str) -> Vec<String>) -> BTreeSet<String> {
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(n) = queue.pop_front() {
        for m in next(&n) {
            if seen.insert(m.clone()) {
                queue.push_back(m);
            }
        }
    }
    seen
}

fn to_idents(iris: BTreeSet<String>) -> BTreeSet<Ident> {
    iris.iter().filter_map(|i| ident_of(i)).collect()
}

/// Reflexive-transitive closure of `uses` and `justifiedBy` from `id`.
pub fn transitive_uses(store: &TripleStore, id: &Ident) -> Result<BTreeSet<Ident>, OntologyError> {
    let start = known(store, id)?;
    Ok(to_idents(closure(start, |n| {
        store
            .with_subject(n)
            .filter(|t| is_dependency(&t.predicate))
            .filter_map(|t| match &t.object {
                Object::Iri(o) => Some(o.clone()),
                Object::Literal(_) => None,
            })
            .collect()
    })))
}

/// Everything whose transitive uses include `concept`, excluding `concept`
/// itself, optionally restricted to one declaration kind.
pub fn used_by(
    store: &TripleStore,
    concept: &Ident,
    kind: Option<DeclKind>,
) -> Result<BTreeSet<Ident>, OntologyError> {
    let start = known(store, concept)?;
    let mut users = closure(start.clone(), |n| {
        store
            .with_object(n)
            .filter(|t| is_dependency(&t.predicate))
            .map(|t| t.subject.clone())
            .collect()
    });
    users.remove(&start);
    if let Some(k) = kind {
        let want = Object::Iri(ulo(k.as_str()));
        users.retain(|u| {
            store
                .with_subject(u)
                .any(|t| t.predicate == ulo("kind") && t.object == want)
        });
    }
    Ok(to_idents(users))
}

fn escape_literal(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
}

/// One `<s> <p> <o> .` line per triple, in store order.
pub fn write_ntriples(store: &TripleStore) -> String {
    let mut out = String::new();
    for t in store.iter() {
        let _ = write!(out, "<{}> <{}> ", t.subject, t.predicate);
        match &t.object {
            Object::Iri(o) => {
                let _ = write!(out, "<{o}>");
            }
            Object::Literal(l) => {
                out.push('"');
                escape_literal(l, &mut out);
                out.push('"');
            }
        }
        out.push_str(" .\n");
    }
    out
}

struct LineParser<'a> {
    rest: &'a str,
    line: usize,
}

impl<'a> LineParser<'a> {
    fn err(&self, message: impl Into<String>) -> OntologyError {
        OntologyError::Malformed {
            line: self.line,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start_matches([' ', '\t']);
    }

    fn iri(&mut self) -> Result<String, OntologyError> {
        self.skip_ws();
        let Some(body) = self.rest.strip_prefix('<') else {
            return Err(self.err("expected `<`"));
        };
        let end = body.find('>').ok_or_else(|| self.err("unterminated IRI"))?;
        let iri = &body[..end];
        if iri.is_empty() || iri.chars().any(|c| c <= ' ' || "<>\"{}|^`\\".contains(c)) {
            return Err(self.err(format!("invalid IRI `{iri}`")));
        }
        if !iri.split_once(':').is_some_and(|(scheme, _)| {
            scheme
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic())
                && scheme
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || "+-.".contains(c))
        }) {
            return Err(self.err(format!("IRI `{iri}` is not absolute")));
        }
        self.rest = &body[end + 1..];
        Ok(iri.to_string())
    }

    fn literal(&mut self) -> Result<String, OntologyError> {
        let mut out = String::new();
        let mut chars = self.rest[1..].char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    self.rest = &self.rest[1 + i + 1..];
                    return Ok(out);
                }
                '\\' => {
                    let (_, e) = chars.next().ok_or_else(|| self.err("dangling escape"))?;
                    match e {
                        't' => out.push('\t'),
                        'b' => out.push('\u{8}'),
                        'n' => out.push('\n'),
                        'r' => out.push('\r'),
                        'f' => out.push('\u{c}'),
                        '"' => out.push('"'),
                        '\'' => out.push('\''),
                        '\\' => out.push('\\'),
                        'u' | 'U' => {
                            let n = if e == 'u' { 4 } else { 8 };
                            let hex: String = (0..n)
                                .filter_map(|_| chars.next().map(|(_, h)| h))
                                .collect();
                            let c = (hex.len() == n)
                                .then(|| u32::from_str_radix(&hex, 16).ok())
                                .flatten()
                                .and_then(char::from_u32)
                                .ok_or_else(|| self.err("invalid unicode escape"))?;
                            out.push(c);
                        }
                        other => return Err(self.err(format!("unknown escape `\\{other}`"))),
                    }
                }
                '\n' | '\r' => return Err(self.err("raw line break in literal")),
                c => out.push(c),
            }
        }
        Err(self.err("unterminated literal"))
    }
}

/// Reads the subset written by [`write_ntriples`]: IRI subjects and
/// predicates, IRI or plain-literal objects. Blank and `#` lines are skipped.
pub fn read_ntriples(input: &str) -> Result<TripleStore, OntologyError> {
    let mut store = TripleStore::new();
    for (i, raw) in input.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut p = LineParser {
            rest: line,
            line: i + 1,
        };
        let subject = p.iri()?;
        let predicate = p.iri()?;
        p.skip_ws();
        let object = if p.rest.starts_with('"') {
            let lit = p.literal()?;
            if p.rest.starts_with("^^") || p.rest.starts_with('@') {
                return Err(p.err("typed and language-tagged literals are not supported"));
            }
            Object::Literal(lit)
        } else {
            Object::Iri(p.iri()?)
        };
        p.skip_ws();
        if p.rest != "." {
            return Err(p.err("expected terminal `.`"));
        }
        store.insert(RdfTriple::new(subject, predicate, object));
    }
    Ok(store)
}
