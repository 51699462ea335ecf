//! Recovery of missing source references by scanning source text for
//! `name <marker>` at token boundaries.

use std::collections::BTreeMap;
use std::path::Path;

use crate::kernel::{Ident, Library, SourceRef, Theory};

pub const DEFAULT_MARKERS: [&str; 2] = [":=", ":"];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SrcRefReport {
    pub recovered: usize,
    /// Declarations that already had a reference.
    pub kept: usize,
    pub misses: Vec<Ident>,
    /// Declarations with more than one candidate position; the first wins.
    pub collisions: Vec<(Ident, Vec<(u32, u32)>)>,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// All `(line, col)` positions (1-based, in characters) where `name` occurs
/// as a whole token followed, after optional blanks, by one of `markers`.
pub fn scan(text: &str, name: &str, markers: &[&str]) -> Vec<(u32, u32)> {
    let mut hits = Vec::new();
    if name.is_empty() {
        return hits;
    }
    for (lineno, line) in text.lines().enumerate() {
        for (byte, _) in line.match_indices(name) {
            let before = line[..byte].chars().next_back();
            let rest = &line[byte + name.len()..];
            if before.is_some_and(is_name_char) || rest.chars().next().is_some_and(is_name_char) {
                continue;
            }
            let rest = rest.trim_start();
            if markers.iter().any(|m| rest.starts_with(m)) {
                let col = line[..byte].chars().count() + 1;
                hits.push((lineno as u32 + 1, col as u32));
            }
        }
    }
    hits
}

/// The file a theory's source is expected in: the file of any reference
/// already present, else a file whose stem is the theory name.
fn theory_file<'s>(theory: &Theory, sources: &'s BTreeMap<String, String>) -> Option<&'s str> {
    if let Some(file) = theory
        .decls
        .iter()
        .find_map(|d| d.meta.source_ref.as_ref().map(|r| r.file.as_str()))
    {
        return sources.get_key_value(file).map(|(k, _)| k.as_str());
    }
    sources
        .keys()
        .find(|k| {
            Path::new(k.as_str())
                .file_name()
                .and_then(|f| f.to_str())
                .map(|f| f.split('.').next() == Some(theory.name.name()))
                .unwrap_or(false)
        })
        .map(String::as_str)
}

/// Attaches recovered references to declarations lacking one; existing
/// references are never changed. Pattern-generated declarations are looked
/// up under the name of the instance that produced them.
pub fn recover_source_refs(
    lib: &Library,
    sources: &BTreeMap<String, String>,
    markers: &[&str],
) -> (Library, SrcRefReport) {
    let mut out = lib.clone();
    let mut report = SrcRefReport::default();
    for theory in &mut out.theories {
        let file = theory_file(theory, sources);
        for d in &mut theory.decls {
            if d.meta.source_ref.is_some() {
                report.kept += 1;
                continue;
            }
            let local = d.meta.origin.as_ref().unwrap_or(&d.name).name().to_string();
            let hits = file
                .map(|f| scan(&sources[f], &local, markers))
                .unwrap_or_default();
            let Some(&(line, col)) = hits.first() else {
                report.misses.push(d.name.clone());
                continue;
            };
            if hits.len() > 1 {
                report.collisions.push((d.name.clone(), hits.clone()));
            }
            let end = col + local.chars().count() as u32 - 1;
            d.meta.source_ref =
                SourceRef::new(file.expect("hit implies file"), (line, col), (line, end));
            report.recovered += 1;
        }
    }
    (out, report)
}
