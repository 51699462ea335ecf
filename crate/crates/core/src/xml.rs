//! Minimal element tree over quick-xml, plus a deterministic writer. Shared
//! by the toyset importer and the OMDoc reader/writer.

use std::fmt::Write as _;

use quick_xml::events::Event;
use quick_xml::Reader;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum XmlError {
    #[error("malformed XML: {0}")]
    Malformed(String),
    #[error("schema violation at {path}: {message}")]
    SchemaViolation { path: String, message: String },
}

impl XmlError {
    pub fn schema(path: &str, message: impl Into<String>) -> Self {
        XmlError::SchemaViolation {
            path: path.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub name: String,
    pub attrs: Vec<(String, String)>,
    pub children: Vec<Element>,
    pub text: Option<String>,
}

impl Element {
    pub fn attr(&self, key: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Rejects attributes outside `allowed` and reports missing `required`.
    pub fn expect_attrs(
        &self,
        path: &str,
        required: &[&str],
        optional: &[&str],
    ) -> Result<(), XmlError> {
        for (k, _) in &self.attrs {
            if !required.contains(&k.as_str()) && !optional.contains(&k.as_str()) {
                return Err(XmlError::schema(
                    &format!("{path}@{k}"),
                    "unknown attribute",
                ));
            }
        }
        for r in required {
            if self.attr(r).is_none() {
                return Err(XmlError::schema(
                    &format!("{path}@{r}"),
                    "missing attribute",
                ));
            }
        }
        Ok(())
    }

    pub fn required(&self, path: &str, key: &str) -> Result<&str, XmlError> {
        self.attr(key)
            .ok_or_else(|| XmlError::schema(&format!("{path}@{key}"), "missing attribute"))
    }

    pub fn expect_no_text(&self, path: &str) -> Result<(), XmlError> {
        match &self.text {
            Some(_) => Err(XmlError::schema(path, "unexpected text content")),
            None => Ok(()),
        }
    }

    pub fn expect_leaf(&self, path: &str) -> Result<(), XmlError> {
        self.expect_no_text(path)?;
        if let Some(child) = self.children.first() {
            return Err(XmlError::schema(
                &format!("{path}/{}", child.name),
                "unexpected child element",
            ));
        }
        Ok(())
    }

    /// Text-only element: no child elements.
    pub fn expect_leaf_text(&self, path: &str) -> Result<(), XmlError> {
        match self.children.first() {
            Some(child) => Err(XmlError::schema(
                &format!("{path}/{}", child.name),
                "unexpected child element",
            )),
            None => Ok(()),
        }
    }

    pub fn text(&self) -> &str {
        self.text.as_deref().unwrap_or("")
    }
}

/// Parses a document into its root element. Comments, the XML declaration
/// and whitespace between elements are ignored; mixed content is rejected.
pub fn parse(input: &[u8]) -> Result<Element, XmlError> {
    let src = std::str::from_utf8(input).map_err(|e| XmlError::Malformed(e.to_string()))?;
    let mut reader = Reader::from_str(src);
    reader.config_mut().trim_text(false);
    let mut stack: Vec<(Element, String)> = Vec::new();
    let mut root: Option<Element> = None;
    let malformed = |e: &dyn std::fmt::Display, reader: &Reader<&[u8]>| {
        XmlError::Malformed(format!("{e} (at byte {})", reader.buffer_position()))
    };
    loop {
        let event = reader.read_event().map_err(|e| malformed(&e, &reader))?;
        match event {
            Event::Start(e) | Event::Empty(e) if root.is_some() => {
                let _ = e;
                return Err(XmlError::Malformed("content after the root element".into()));
            }
            Event::Start(ref e) | Event::Empty(ref e) => {
                let name = String::from_utf8(e.name().as_ref().to_vec())
                    .map_err(|err| malformed(&err, &reader))?;
                let mut attrs = Vec::new();
                for attr in e.attributes() {
                    let attr = attr.map_err(|err| malformed(&err, &reader))?;
                    let key = String::from_utf8(attr.key.as_ref().to_vec())
                        .map_err(|err| malformed(&err, &reader))?;
                    let value = attr
                        .unescape_value()
                        .map_err(|err| malformed(&err, &reader))?
                        .into_owned();
                    attrs.push((key, value));
                }
                let el = Element {
                    name,
                    attrs,
                    children: Vec::new(),
                    text: None,
                };
                if matches!(event, Event::Empty(_)) {
                    attach(&mut stack, &mut root, el)?;
                } else {
                    stack.push((el, String::new()));
                }
            }
            Event::End(_) => {
                let (mut el, text) = stack
                    .pop()
                    .ok_or_else(|| XmlError::Malformed("unbalanced end tag".into()))?;
                if el.children.is_empty() {
                    if !text.is_empty() {
                        el.text = Some(text);
                    }
                } else if !text.trim().is_empty() {
                    return Err(XmlError::schema(&el.name, "mixed text and element content"));
                }
                attach(&mut stack, &mut root, el)?;
            }
            Event::Text(t) => {
                let text = t.unescape().map_err(|err| malformed(&err, &reader))?;
                match stack.last_mut() {
                    Some((_, buf)) => buf.push_str(&text),
                    None if text.trim().is_empty() => {}
                    None => {
                        return Err(XmlError::Malformed("text outside the root element".into()))
                    }
                }
            }
            Event::CData(t) => {
                let text = String::from_utf8(t.into_inner().into_owned())
                    .map_err(|err| malformed(&err, &reader))?;
                match stack.last_mut() {
                    Some((_, buf)) => buf.push_str(&text),
                    None => {
                        return Err(XmlError::Malformed("CDATA outside the root element".into()))
                    }
                }
            }
            Event::Comment(_) | Event::Decl(_) | Event::PI(_) => {}
            Event::DocType(_) => {
                return Err(XmlError::Malformed("DOCTYPE is not supported".into()))
            }
            Event::Eof => break,
        }
    }
    if !stack.is_empty() {
        return Err(XmlError::Malformed("unexpected end of input".into()));
    }
    root.ok_or_else(|| XmlError::Malformed("no root element".into()))
}

fn attach(
    stack: &mut [(Element, String)],
    root: &mut Option<Element>,
    el: Element,
) -> Result<(), XmlError> {
    match stack.last_mut() {
        Some((parent, _)) => parent.children.push(el),
        None => *root = Some(el),
    }
    Ok(())
}

pub fn escape_attr(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
    out
}

pub fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
    out
}

/// Indented writer: two spaces per level, `\n` line ends, attributes in the
/// order given.
#[derive(Default)]
pub struct XmlWriter {
    out: String,
    depth: usize,
}

impl XmlWriter {
    pub fn new() -> Self {
        Self::default()
    }

    fn line_start(&mut self) {
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
    }

    fn tag(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.line_start();
        self.out.push('<');
        self.out.push_str(name);
        for (k, v) in attrs {
            let _ = write!(self.out, " {k}=\"{}\"", escape_attr(v));
        }
    }

    pub fn open(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.tag(name, attrs);
        self.out.push_str(">\n");
        self.depth += 1;
    }

    pub fn close(&mut self, name: &str) {
        self.depth -= 1;
        self.line_start();
        let _ = writeln!(self.out, "</{name}>");
    }

    pub fn empty(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.tag(name, attrs);
        self.out.push_str("/>\n");
    }

    pub fn text_element(&mut self, name: &str, attrs: &[(&str, &str)], text: &str) {
        self.tag(name, attrs);
        let _ = writeln!(self.out, ">{}</{name}>", escape_text(text));
    }

    pub fn finish(self) -> String {
        self.out
    }
}
