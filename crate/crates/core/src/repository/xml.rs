//! Canonical XML writing and strict reading for the repository file.
//!
//! The writer produces one fixed byte form: two-space indentation, a fixed
//! attribute order, LF endings, self-closing empty elements. The reader
//! accepts that subset (attribute order and surrounding whitespace are free),
//! decoding the five named entities plus numeric references. Anything else
//! is malformed.

use std::fmt::Write as _;

/// A parsed element: name, attributes in document order, child elements.
/// Text content is not part of the repository format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Element {
    pub name: String,
    pub attrs: Vec<(String, String)>,
    pub children: Vec<Element>,
}

impl Element {
    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_str())
    }
}

pub(crate) fn escape_attr(value: &str, out: &mut String) {
    for c in value.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "&#{};", c as u32);
            }
            c => out.push(c),
        }
    }
}

pub(crate) struct Writer {
    out: String,
}

impl Writer {
    pub fn new() -> Writer {
        Writer { out: String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n") }
    }

    /// Writes `<name a="1" b="2">` (or self-closing with `empty`).
    pub fn open(&mut self, depth: usize, name: &str, attrs: &[(&str, &str)], empty: bool) {
        for _ in 0..depth {
            self.out.push_str("  ");
        }
        self.out.push('<');
        self.out.push_str(name);
        for (k, v) in attrs {
            self.out.push(' ');
            self.out.push_str(k);
            self.out.push_str("=\"");
            escape_attr(v, &mut self.out);
            self.out.push('"');
        }
        self.out.push_str(if empty { "/>\n" } else { ">\n" });
    }

    pub fn close(&mut self, depth: usize, name: &str) {
        for _ in 0..depth {
            self.out.push_str("  ");
        }
        self.out.push_str("</");
        self.out.push_str(name);
        self.out.push_str(">\n");
    }

    pub fn finish(self) -> String {
        self.out
    }
}

pub(crate) fn parse_document(text: &str) -> Result<Element, String> {
    let mut p = Parser { text, pos: 0 };
    p.skip_ws();
    if p.rest().starts_with("<?xml") {
        let end = p.rest().find("?>").ok_or("unterminated xml declaration")?;
        p.pos += end + 2;
    }
    p.skip_ws();
    let root = p.element()?;
    p.skip_ws();
    if !p.rest().is_empty() {
        return Err("trailing content after root element".into());
    }
    Ok(root)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn name(&mut self) -> Result<String, String> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.')
        {
            self.bump();
        }
        if self.pos == start {
            return Err(format!("expected a name at byte {}", self.pos));
        }
        Ok(self.text[start..self.pos].to_string())
    }

    fn element(&mut self) -> Result<Element, String> {
        if !self.eat("<") {
            return Err(format!("expected '<' at byte {}", self.pos));
        }
        let name = self.name()?;
        let mut attrs = Vec::new();
        loop {
            self.skip_ws();
            if self.eat("/>") {
                return Ok(Element { name, attrs, children: Vec::new() });
            }
            if self.eat(">") {
                break;
            }
            let attr_name = self.name()?;
            self.skip_ws();
            if !self.eat("=") {
                return Err(format!("expected '=' after attribute {attr_name}"));
            }
            self.skip_ws();
            let quote = self.bump().filter(|&c| c == '"' || c == '\'');
            let Some(quote) = quote else {
                return Err(format!("expected quoted value for attribute {attr_name}"));
            };
            let value = self.attr_value(quote)?;
            attrs.push((attr_name, value));
        }

        let mut children = Vec::new();
        loop {
            self.skip_ws();
            if self.eat("</") {
                let closing = self.name()?;
                if closing != name {
                    return Err(format!("mismatched close tag: <{name}> vs </{closing}>"));
                }
                self.skip_ws();
                if !self.eat(">") {
                    return Err("malformed close tag".into());
                }
                return Ok(Element { name, attrs, children });
            }
            if self.rest().starts_with('<') {
                children.push(self.element()?);
            } else if self.rest().is_empty() {
                return Err(format!("unterminated element <{name}>"));
            } else {
                return Err(format!("unexpected text content inside <{name}>"));
            }
        }
    }

    fn attr_value(&mut self, quote: char) -> Result<String, String> {
        let mut value = String::new();
        loop {
            match self.bump() {
                None => return Err("unterminated attribute value".into()),
                Some(c) if c == quote => return Ok(value),
                Some('&') => value.push(self.entity()?),
                Some('<') => return Err("raw '<' inside attribute value".into()),
                Some(c) => value.push(c),
            }
        }
    }

    fn entity(&mut self) -> Result<char, String> {
        let end = self.rest().find(';').ok_or("unterminated entity")?;
        let body = &self.rest()[..end];
        let c = match body {
            "amp" => '&',
            "lt" => '<',
            "gt" => '>',
            "quot" => '"',
            "apos" => '\'',
            _ => {
                let digits = body.strip_prefix('#').ok_or(format!("unknown entity &{body};"))?;
                let code = if let Some(hex) = digits.strip_prefix('x') {
                    u32::from_str_radix(hex, 16)
                } else {
                    digits.parse()
                }
                .map_err(|_| format!("bad numeric entity &{body};"))?;
                char::from_u32(code).ok_or(format!("entity &{body}; is not a character"))?
            }
        };
        self.pos += end + 1;
        Ok(c)
    }
}
