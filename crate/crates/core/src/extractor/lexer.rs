//! Tolerant lexer for the analyzed source subset. Never fails: bytes that
//! form no token become lex-error diagnostics and are skipped. Strings,
//! character literals and comments are consumed as units so that brace
//! counting downstream cannot be fooled by their contents.

use crate::types::{DiagnosticKind, ExtractionDiagnostic};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum TokKind {
    Ident,
    Number,
    Str,
    CharLit,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Dot,
    At,
    Op,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Tok<'a> {
    pub kind: TokKind,
    pub text: &'a str,
    pub line: u32,
}

// Longest first for maximal munch.
const OPS: &[&str] = &[
    ">>>=", ">>>", "<<=", ">>=", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=",
    "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "->", "::", "=", "<", ">", "+", "-", "*",
    "/", "%", "!", "&", "|", "^", "~", "?", ":",
];

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

pub(crate) fn lex(src: &str) -> (Vec<Tok<'_>>, Vec<ExtractionDiagnostic>) {
    let mut lx = Lexer { src, pos: 0, line: 1, toks: Vec::new(), diags: Vec::new() };
    lx.run();
    (lx.toks, lx.diags)
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    toks: Vec<Tok<'a>>,
    diags: Vec<ExtractionDiagnostic>,
}

impl<'a> Lexer<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        if c == '\n' {
            self.line += 1;
        }
        self.pos += c.len_utf8();
        Some(c)
    }

    fn push(&mut self, kind: TokKind, start: usize, line: u32) {
        self.toks.push(Tok { kind, text: &self.src[start..self.pos], line });
    }

    fn diag(&mut self, line: u32) {
        self.diags.push(ExtractionDiagnostic { line, kind: DiagnosticKind::LexError });
    }

    fn run(&mut self) {
        while let Some(c) = self.peek() {
            let start = self.pos;
            let line = self.line;
            match c {
                _ if c.is_whitespace() => {
                    self.bump();
                }
                '/' if self.rest().starts_with("//") => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                '/' if self.rest().starts_with("/*") => {
                    self.bump();
                    self.bump();
                    let mut closed = false;
                    while self.peek().is_some() {
                        if self.rest().starts_with("*/") {
                            self.bump();
                            self.bump();
                            closed = true;
                            break;
                        }
                        self.bump();
                    }
                    if !closed {
                        self.diag(line);
                    }
                }
                '"' => {
                    self.bump();
                    self.scan_quoted('"', line);
                    self.push(TokKind::Str, start, line);
                }
                '\'' => {
                    self.bump();
                    self.scan_quoted('\'', line);
                    self.push(TokKind::CharLit, start, line);
                }
                _ if is_ident_start(c) => {
                    while self.peek().is_some_and(is_ident_continue) {
                        self.bump();
                    }
                    self.push(TokKind::Ident, start, line);
                }
                _ if c.is_ascii_digit() => {
                    self.scan_number();
                    self.push(TokKind::Number, start, line);
                }
                '.' if self.rest()[1..].starts_with(|d: char| d.is_ascii_digit()) => {
                    self.bump();
                    self.scan_number();
                    self.push(TokKind::Number, start, line);
                }
                '(' | ')' | '{' | '}' | '[' | ']' | ';' | ',' | '.' | '@' => {
                    self.bump();
                    let kind = match c {
                        '(' => TokKind::LParen,
                        ')' => TokKind::RParen,
                        '{' => TokKind::LBrace,
                        '}' => TokKind::RBrace,
                        '[' => TokKind::LBracket,
                        ']' => TokKind::RBracket,
                        ';' => TokKind::Semi,
                        ',' => TokKind::Comma,
                        '.' => TokKind::Dot,
                        _ => TokKind::At,
                    };
                    self.push(kind, start, line);
                }
                _ => {
                    if let Some(op) = OPS.iter().find(|op| self.rest().starts_with(**op)) {
                        self.pos += op.len();
                        self.push(TokKind::Op, start, line);
                    } else {
                        self.bump();
                        self.diag(line);
                    }
                }
            }
        }
    }

    /// Consumes up to the closing quote on the same line; an unterminated
    /// literal is diagnosed and ends at the newline or end of input.
    fn scan_quoted(&mut self, quote: char, line: u32) {
        loop {
            match self.peek() {
                None => {
                    self.diag(line);
                    return;
                }
                Some('\n') => {
                    self.diag(line);
                    return;
                }
                Some('\\') => {
                    self.bump();
                    if self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                Some(c) => {
                    self.bump();
                    if c == quote {
                        return;
                    }
                }
            }
        }
    }

    fn scan_number(&mut self) {
        while let Some(c) = self.peek() {
            let digit_dot =
                c == '.' && self.rest()[1..].starts_with(|d: char| d.is_ascii_digit());
            if c.is_ascii_alphanumeric() || c == '_' || digit_dot {
                self.bump();
            } else {
                break;
            }
        }
    }
}
