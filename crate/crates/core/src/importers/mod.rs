//! Importers for the two toy exports (`toyhol` JSON and `toyset` XML),
//! source-reference recovery, and file-name mangling for exported modules.

pub mod srcref;
pub mod surface;
pub mod toyhol;
pub mod toyset;

use std::fmt;

use thiserror::Error;

use crate::extensions::ExtensionError;
use crate::kernel::{Ident, KernelError, Library};
use surface::InferError;

pub use srcref::{recover_source_refs, SrcRefReport, DEFAULT_MARKERS};
pub use toyhol::{import_toyhol, parse_toyhol};
pub use toyset::{import_toyset, parse_toyset};

/// Fatal import errors. Problems with individual declarations are reported
/// in an [`ImportReport`] instead.
#[derive(Debug, Error)]
pub enum ImportError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("schema violation at {path}: {message}")]
    SchemaViolation { path: String, message: String },
    #[error("unsupported format version `{0}`")]
    UnsupportedVersion(String),
    #[error("unknown theory `{name}` at {path}")]
    UnknownTheory { path: String, name: String },
    #[error("input has {records} records but no declaration survived import")]
    EmptyOutput { records: usize },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

impl ImportError {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        ImportError::SchemaViolation {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Path of the offending field, if the error is a schema violation.
    pub fn path(&self) -> Option<&str> {
        match self {
            ImportError::SchemaViolation { path, .. } | ImportError::UnknownTheory { path, .. } => {
                Some(path)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum ImportIssue {
    #[error(transparent)]
    Inference(#[from] InferError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),
}

/// A declaration that was dropped during import.
#[derive(Debug)]
pub struct ImportFailure {
    pub theory: Ident,
    pub name: String,
    pub issue: ImportIssue,
}

impl fmt::Display for ImportFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.theory, self.name, self.issue)
    }
}

#[derive(Debug, Default)]
pub struct ImportReport {
    /// Declaration records in the input.
    pub records: usize,
    /// Declarations that made it into the library.
    pub imported: usize,
    pub failures: Vec<ImportFailure>,
}

impl ImportReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug)]
pub struct Import {
    pub library: Library,
    pub report: ImportReport,
}

pub(crate) fn finish(library: Library, report: ImportReport) -> Result<Import, ImportError> {
    if report.records > 0 && report.imported == 0 {
        return Err(ImportError::EmptyOutput {
            records: report.records,
        });
    }
    Ok(Import { library, report })
}

/// Maps a module name to a portable file-name stem: `[a-z0-9.-]` is kept,
/// every other byte of the UTF-8 encoding becomes `_xx` (lower-case hex).
/// The mapping is injective.
pub fn mangle_file_name(module: &str) -> String {
    let mut out = String::with_capacity(module.len());
    for b in module.bytes() {
        match b {
            b'a'..=b'z' | b'0'..=b'9' | b'-' | b'.' => out.push(b as char),
            _ => out.push_str(&format!("_{b:02x}")),
        }
    }
    out
}

/// Inverse of [`mangle_file_name`].
pub fn demangle_file_name(stem: &str) -> Option<String> {
    let bytes = stem.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'_' => {
                let hex = stem.get(i + 1..i + 3)?;
                if !hex
                    .bytes()
                    .all(|c| c.is_ascii_digit() || (b'a'..=b'f').contains(&c))
                {
                    return None;
                }
                out.push(u8::from_str_radix(hex, 16).ok()?);
                i += 3;
            }
            b @ (b'a'..=b'z' | b'0'..=b'9' | b'-' | b'.') => {
                out.push(b);
                i += 1;
            }
            _ => return None,
        }
    }
    String::from_utf8(out).ok()
}
