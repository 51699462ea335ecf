use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub const SEPARATOR: char = '?';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentError {
    #[error("identifier component `{0}` is empty")]
    Empty(&'static str),
    #[error("identifier component `{0}` contains the separator `?`")]
    Separator(&'static str),
    #[error("`{0}` is not of the form namespace?module?name")]
    Shape(String),
}

/// Global name of a theory, symbol, pattern or morphism, rendered as
/// `namespace?module?name`.
///
/// Symbols declared in a theory whose own identifier is `ns?doc?T` live in
/// module `T`, so a constant `c` of that theory is `ns?T?c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ident {
    namespace: String,
    module: String,
    name: String,
}

impl Ident {
    pub fn new(
        namespace: impl Into<String>,
        module: impl Into<String>,
        name: impl Into<String>,
    ) -> Result<Self, IdentError> {
        let id = Ident {
            namespace: namespace.into(),
            module: module.into(),
            name: name.into(),
        };
        for (label, part) in [
            ("namespace", &id.namespace),
            ("module", &id.module),
            ("name", &id.name),
        ] {
            if part.is_empty() {
                return Err(IdentError::Empty(label));
            }
            if part.contains(SEPARATOR) {
                return Err(IdentError::Separator(label));
            }
        }
        Ok(id)
    }

    pub fn namespace(&self) -> &str {
        &self.namespace
    }

    pub fn module(&self) -> &str {
        &self.module
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The identifier of a symbol declared in the theory named by `self`.
    pub fn child(&self, local: &str) -> Result<Ident, IdentError> {
        Ident::new(self.namespace.clone(), self.name.clone(), local)
    }

    /// Same namespace and module, different local name.
    pub fn sibling(&self, local: &str) -> Result<Ident, IdentError> {
        Ident::new(self.namespace.clone(), self.module.clone(), local)
    }

    /// Whether `self` is a symbol declared in theory `theory`.
    pub fn is_child_of(&self, theory: &Ident) -> bool {
        self.namespace == theory.namespace && self.module == theory.name
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}?{}?{}", self.namespace, self.module, self.name)
    }
}

impl FromStr for Ident {
    type Err = IdentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(SEPARATOR).collect();
        match parts.as_slice() {
            [ns, module, name] => Ident::new(*ns, *module, *name),
            _ => Err(IdentError::Shape(s.to_string())),
        }
    }
}
