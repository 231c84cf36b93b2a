//! Tolerant parser for the analyzed subset: package and import declarations,
//! classes with fields and brace-balanced method bodies, and inside bodies
//! the statement forms that can carry API calls. Anything else is skipped a
//! token at a time.
//!
//! Statement recognition is speculative: an attempt that does not pan out
//! rolls back without side effects and the parser moves one token forward.
//! Two things abort a whole method instead, yielding one skipped-method
//! diagnostic: running off the end of the body inside unclosed parentheses
//! or brackets, and a malformed statement the parser had already committed
//! to (a declaration or a return).

use std::collections::BTreeMap;

use super::lexer::{Tok, TokKind};
use super::scope::{ImportTable, ResolutionScope};
use crate::types::{ApiCall, CallSequence, DiagnosticKind, ExtractionDiagnostic, SequenceId};

pub(crate) struct ParseOutput {
    pub sequences: Vec<CallSequence>,
    pub diagnostics: Vec<ExtractionDiagnostic>,
}

pub(crate) fn parse_file(toks: &[Tok<'_>], label: &str) -> ParseOutput {
    let mut parser = FileParser {
        toks,
        label,
        sequences: Vec::new(),
        diagnostics: Vec::new(),
        emitted: 0,
    };
    parser.run();
    ParseOutput { sequences: parser.sequences, diagnostics: parser.diagnostics }
}

const MODIFIERS: &[&str] = &[
    "public", "private", "protected", "static", "final", "abstract", "synchronized", "native",
    "transient", "volatile", "strictfp", "default", "sealed",
];

// Words that can never start a type or an expression operand path.
const RESERVED: &[&str] = &[
    "package", "import", "class", "interface", "enum", "extends", "implements", "return", "new",
    "if", "else", "for", "while", "do", "switch", "case", "break", "continue", "try", "catch",
    "finally", "throw", "throws", "instanceof", "assert", "goto", "const",
];

fn is_modifier(text: &str) -> bool {
    MODIFIERS.contains(&text)
}

fn is_reserved(text: &str) -> bool {
    RESERVED.contains(&text) || is_modifier(text)
}

/// Reserved words that may still appear inside expressions as path heads.
fn blocks_operand(text: &str) -> bool {
    is_reserved(text) && text != "this" && text != "super"
}

struct FileParser<'a> {
    toks: &'a [Tok<'a>],
    label: &'a str,
    sequences: Vec<CallSequence>,
    diagnostics: Vec<ExtractionDiagnostic>,
    emitted: usize,
}

enum Member {
    Method(MethodRec),
    Nested { name_at: usize },
}

struct MethodRec {
    name: String,
    params: Vec<(String, String)>,
    body: Option<(usize, usize)>,
}

impl<'a> FileParser<'a> {
    fn kind(&self, i: usize) -> Option<TokKind> {
        self.toks.get(i).map(|t| t.kind)
    }

    fn text(&self, i: usize) -> &'a str {
        self.toks.get(i).map(|t| t.text).unwrap_or("")
    }

    fn line(&self, i: usize) -> u32 {
        self.toks.get(i.min(self.toks.len().saturating_sub(1))).map(|t| t.line).unwrap_or(1)
    }

    fn is_ident(&self, i: usize) -> bool {
        self.kind(i) == Some(TokKind::Ident)
    }

    fn is_op(&self, i: usize, op: &str) -> bool {
        self.kind(i) == Some(TokKind::Op) && self.text(i) == op
    }

    fn run(&mut self) {
        let mut package = String::new();
        let mut imports = ImportTable::new();
        let mut i = 0;
        let limit = self.toks.len();
        while i < limit {
            match (self.kind(i), self.text(i)) {
                (Some(TokKind::Ident), "package") => {
                    let (segs, next) = self.collect_dotted(i + 1, limit);
                    if package.is_empty() && !segs.is_empty() {
                        package = segs.join(".");
                    }
                    i = self.skip_to_semi(next, limit);
                }
                (Some(TokKind::Ident), "import") => {
                    i = self.parse_import(i + 1, limit, &mut imports);
                }
                (Some(TokKind::Ident), "class") => {
                    i = self.parse_class(i + 1, &package, &imports);
                }
                (Some(TokKind::Ident), "interface") | (Some(TokKind::Ident), "enum") => {
                    i = self.skip_braced_decl(i + 1, limit);
                }
                (Some(TokKind::At), _) => {
                    i = self.skip_annotation(i + 1, limit);
                }
                _ => i += 1,
            }
        }
    }

    /// Collects `Ident (. Ident)*`, stopping before anything else.
    fn collect_dotted(&self, mut i: usize, limit: usize) -> (Vec<&'a str>, usize) {
        let mut segs = Vec::new();
        if i < limit && self.is_ident(i) {
            segs.push(self.text(i));
            i += 1;
            while i + 1 < limit
                && self.kind(i) == Some(TokKind::Dot)
                && self.is_ident(i + 1)
                && !is_reserved(self.text(i + 1))
            {
                segs.push(self.text(i + 1));
                i += 2;
            }
        }
        (segs, i)
    }

    fn skip_to_semi(&self, mut i: usize, limit: usize) -> usize {
        while i < limit {
            if self.kind(i) == Some(TokKind::Semi) {
                return i + 1;
            }
            i += 1;
        }
        limit
    }

    fn parse_import(&mut self, i: usize, limit: usize, imports: &mut ImportTable) -> usize {
        if self.is_ident(i) && self.text(i) == "static" {
            return self.skip_to_semi(i + 1, limit);
        }
        let (segs, next) = self.collect_dotted(i, limit);
        if segs.is_empty() {
            return self.skip_to_semi(i, limit);
        }
        if self.kind(next) == Some(TokKind::Dot) && self.is_op(next + 1, "*") {
            imports.add_wildcard(&segs.join("."));
        } else if segs.len() > 1 {
            imports.add_single_type(&segs.join("."));
        }
        self.skip_to_semi(next, limit)
    }

    /// Skips `@Name` or `@Name(args)`.
    fn skip_annotation(&self, i: usize, limit: usize) -> usize {
        let (_, mut next) = self.collect_dotted(i, limit);
        if self.kind(next) == Some(TokKind::LParen) {
            next = self
                .matching_close(next, limit, TokKind::LParen, TokKind::RParen)
                .map(|c| c + 1)
                .unwrap_or(limit);
        }
        next.max(i + 1).min(limit)
    }

    /// Skips an interface or enum declaration whole.
    fn skip_braced_decl(&self, i: usize, limit: usize) -> usize {
        let mut j = i;
        while j < limit {
            match self.kind(j) {
                Some(TokKind::LBrace) => {
                    return self
                        .matching_close(j, limit, TokKind::LBrace, TokKind::RBrace)
                        .map(|c| c + 1)
                        .unwrap_or(limit);
                }
                Some(TokKind::Semi) => return j + 1,
                _ => j += 1,
            }
        }
        limit
    }

    /// Index of the token closing the bracket opened at `open`, if any.
    fn matching_close(
        &self,
        open: usize,
        limit: usize,
        open_kind: TokKind,
        close_kind: TokKind,
    ) -> Option<usize> {
        debug_assert_eq!(self.kind(open), Some(open_kind));
        let mut depth = 1usize;
        let mut i = open + 1;
        while i < limit {
            let k = self.kind(i);
            if k == Some(open_kind) {
                depth += 1;
            } else if k == Some(close_kind) {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            i += 1;
        }
        None
    }

    /// `name_at` points at the class name token. Returns the index after the
    /// class body (or after whatever could be salvaged).
    fn parse_class(&mut self, name_at: usize, prefix: &str, imports: &ImportTable) -> usize {
        let limit = self.toks.len();
        if !(self.is_ident(name_at) && !is_reserved(self.text(name_at))) {
            return name_at.min(limit);
        }
        let name = self.text(name_at);
        let owner = if prefix.is_empty() { name.to_string() } else { format!("{prefix}.{name}") };

        // Tolerate extends/implements clauses between the name and the body.
        let mut j = name_at + 1;
        loop {
            match self.kind(j) {
                None => return limit,
                Some(TokKind::LBrace) => break,
                Some(TokKind::Semi) => return j + 1,
                _ => j += 1,
            }
        }
        let body_start = j + 1;
        let close = match self.matching_close(j, limit, TokKind::LBrace, TokKind::RBrace) {
            Some(c) => c,
            None => limit,
        };

        let (fields, members) = self.scan_members(body_start, close);
        for member in members {
            match member {
                Member::Method(m) => {
                    if let Some((start, end)) = m.body {
                        self.parse_method_body(&owner, imports, &fields, &m, start, end);
                    }
                }
                Member::Nested { name_at } => {
                    self.parse_class(name_at, &owner, imports);
                }
            }
        }
        (close + 1).min(limit)
    }

    /// First pass over a class body: collect field declarations, method body
    /// spans and nested class positions without touching statement contents.
    fn scan_members(
        &mut self,
        start: usize,
        close: usize,
    ) -> (BTreeMap<String, String>, Vec<Member>) {
        let mut fields = BTreeMap::new();
        let mut members = Vec::new();
        let mut i = start;
        while i < close {
            match (self.kind(i), self.text(i)) {
                (Some(TokKind::Semi), _) => i += 1,
                (Some(TokKind::At), _) => i = self.skip_annotation(i + 1, close),
                (Some(TokKind::Ident), t) if is_modifier(t) => i += 1,
                (Some(TokKind::Ident), "class") => {
                    if self.is_ident(i + 1) && !is_reserved(self.text(i + 1)) {
                        members.push(Member::Nested { name_at: i + 1 });
                        i = self.skip_braced_decl(i + 1, close);
                    } else {
                        i += 1;
                    }
                }
                (Some(TokKind::Ident), "interface") | (Some(TokKind::Ident), "enum") => {
                    i = self.skip_braced_decl(i + 1, close);
                }
                (Some(TokKind::LBrace), _) => {
                    // Instance or static initializer block.
                    i = self
                        .matching_close(i, close, TokKind::LBrace, TokKind::RBrace)
                        .map(|c| c + 1)
                        .unwrap_or(close);
                }
                _ => i = self.scan_one_member(i, close, &mut fields, &mut members),
            }
        }
        (fields, members)
    }

    /// Tries to read one field or method at `i`; on anything else advances a
    /// single token.
    fn scan_one_member(
        &mut self,
        i: usize,
        close: usize,
        fields: &mut BTreeMap<String, String>,
        members: &mut Vec<Member>,
    ) -> usize {
        let Some((type_path, after_type)) = self.try_type_path(i, close) else {
            return i + 1;
        };

        // Constructor: a single-segment "type" directly followed by parens.
        if self.kind(after_type) == Some(TokKind::LParen) && !type_path.contains('.') {
            return match self.scan_method(type_path.clone(), after_type, close) {
                Some((rec, next)) => {
                    members.push(Member::Method(rec));
                    next
                }
                None => i + 1,
            };
        }

        if !(after_type < close && self.is_ident(after_type) && !is_reserved(self.text(after_type)))
        {
            return i + 1;
        }
        let name = self.text(after_type).to_string();
        let k = after_type + 1;
        match (self.kind(k), self.text(k)) {
            (Some(TokKind::LParen), _) => match self.scan_method(name, k, close) {
                Some((rec, next)) => {
                    members.push(Member::Method(rec));
                    next
                }
                None => i + 1,
            },
            (Some(TokKind::Semi), _) => {
                fields.insert(name, type_path);
                k + 1
            }
            (Some(TokKind::Op), "=") | (Some(TokKind::Comma), _) => {
                match self.scan_field_declarators(name, &type_path, k, close, fields) {
                    Some(next) => next,
                    None => i + 1,
                }
            }
            _ => i + 1,
        }
    }

    /// `name(params) [junk] { body }` or `name(params) [junk] ;`.
    /// `paren` points at the opening paren.
    fn scan_method(
        &self,
        name: String,
        paren: usize,
        close: usize,
    ) -> Option<(MethodRec, usize)> {
        let pclose = self.matching_close(paren, close, TokKind::LParen, TokKind::RParen)?;
        let params = self.parse_params(paren + 1, pclose);
        let mut j = pclose + 1;
        while j < close {
            match self.kind(j) {
                Some(TokKind::Semi) => {
                    return Some((MethodRec { name, params, body: None }, j + 1));
                }
                Some(TokKind::LBrace) => {
                    let bclose =
                        self.matching_close(j, close, TokKind::LBrace, TokKind::RBrace)?;
                    return Some((MethodRec { name, params, body: Some((j + 1, bclose)) }, bclose + 1));
                }
                Some(TokKind::RBrace) | Some(TokKind::LParen) => return None,
                _ => j += 1,
            }
        }
        None
    }

    /// Parameters between `start` and the closing paren at `end`: splits on
    /// top-level commas and reads each as `[annotations/final] Type name`.
    /// Angle-bracket runs count toward depth so generic arguments with
    /// commas stay in one piece.
    fn parse_params(&self, start: usize, end: usize) -> Vec<(String, String)> {
        let mut params = Vec::new();
        let mut piece_start = start;
        let mut depth = 0usize;
        let mut i = start;
        while i <= end {
            let at_end = i == end;
            let splits = at_end
                || (depth == 0 && self.kind(i) == Some(TokKind::Comma));
            if splits {
                if let Some(p) = self.parse_one_param(piece_start, i) {
                    params.push(p);
                }
                piece_start = i + 1;
            } else {
                match self.kind(i) {
                    Some(TokKind::LParen) | Some(TokKind::LBracket) => depth += 1,
                    Some(TokKind::RParen) | Some(TokKind::RBracket) => {
                        depth = depth.saturating_sub(1)
                    }
                    Some(TokKind::Op) => {
                        let t = self.text(i);
                        if !t.is_empty() && t.chars().all(|c| c == '<') {
                            depth += t.len();
                        } else if !t.is_empty() && t.chars().all(|c| c == '>') {
                            depth = depth.saturating_sub(t.len());
                        }
                    }
                    _ => {}
                }
            }
            i += 1;
        }
        params
    }

    fn parse_one_param(&self, mut i: usize, end: usize) -> Option<(String, String)> {
        while i < end {
            match (self.kind(i), self.text(i)) {
                (Some(TokKind::At), _) => i = self.skip_annotation(i + 1, end),
                (Some(TokKind::Ident), t) if is_modifier(t) => i += 1,
                _ => break,
            }
        }
        let (ty, after_type) = self.try_type_path(i, end)?;
        // The name is the last identifier before the piece ends; varargs dots
        // and stray brackets in between are tolerated.
        let mut name = None;
        let mut j = after_type;
        while j < end {
            if self.is_ident(j) && !is_reserved(self.text(j)) {
                name = Some(self.text(j).to_string());
            }
            j += 1;
        }
        Some((name?, ty))
    }

    /// Field declarator list after the first name: initializers are skipped
    /// bracket-aware up to the terminating semicolon.
    fn scan_field_declarators(
        &self,
        first_name: String,
        type_path: &str,
        mut i: usize,
        close: usize,
        fields: &mut BTreeMap<String, String>,
    ) -> Option<usize> {
        let mut pending = vec![first_name];
        loop {
            match (self.kind(i), self.text(i)) {
                (Some(TokKind::Semi), _) => {
                    for name in pending {
                        fields.insert(name, type_path.to_string());
                    }
                    return Some(i + 1);
                }
                (Some(TokKind::Comma), _) => {
                    i += 1;
                    if self.is_ident(i) && !is_reserved(self.text(i)) {
                        pending.push(self.text(i).to_string());
                        i += 1;
                    } else {
                        return None;
                    }
                }
                (Some(TokKind::Op), "=") => {
                    i = self.skip_initializer(i + 1, close)?;
                }
                _ => return None,
            }
        }
    }

    /// Skips an initializer expression up to a top-level `,` or `;`.
    fn skip_initializer(&self, mut i: usize, close: usize) -> Option<usize> {
        let mut depth = 0usize;
        while i < close {
            match self.kind(i) {
                Some(TokKind::LParen) | Some(TokKind::LBracket) | Some(TokKind::LBrace) => {
                    depth += 1
                }
                Some(TokKind::RParen) | Some(TokKind::RBracket) | Some(TokKind::RBrace) => {
                    if depth == 0 {
                        return None;
                    }
                    depth -= 1;
                }
                Some(TokKind::Semi) | Some(TokKind::Comma) if depth == 0 => return Some(i),
                _ => {}
            }
            i += 1;
        }
        None
    }

    /// `Ident (. Ident)* [<generics>] ([])*` — returns the dotted base name
    /// with generics and array brackets stripped, and the next index.
    fn try_type_path(&self, i: usize, limit: usize) -> Option<(String, usize)> {
        if !(i < limit && self.is_ident(i) && !is_reserved(self.text(i)) && self.text(i) != "this"
            && self.text(i) != "super")
        {
            return None;
        }
        let (segs, mut j) = self.collect_dotted(i, limit);
        if self.is_op(j, "<") {
            j = self.scan_generics(j, limit)?;
        }
        while j + 1 < limit
            && self.kind(j) == Some(TokKind::LBracket)
            && self.kind(j + 1) == Some(TokKind::RBracket)
        {
            j += 2;
        }
        Some((segs.join("."), j))
    }

    /// Balances `<`/`>` runs from the opening angle at `i`. Operators made
    /// purely of angle brackets count with their multiplicity so `>>` closes
    /// two levels.
    fn scan_generics(&self, i: usize, limit: usize) -> Option<usize> {
        let mut depth = 0i32;
        let mut j = i;
        while j < limit {
            match self.kind(j) {
                Some(TokKind::Op) => {
                    let t = self.text(j);
                    if !t.is_empty() && t.chars().all(|c| c == '<') {
                        depth += t.len() as i32;
                    } else if !t.is_empty() && t.chars().all(|c| c == '>') {
                        depth -= t.len() as i32;
                        if depth < 0 {
                            return None;
                        }
                        if depth == 0 {
                            return Some(j + 1);
                        }
                    } else if t == "?" || t == "&" {
                        // wildcard bounds
                    } else {
                        return None;
                    }
                }
                Some(TokKind::Ident) | Some(TokKind::Dot) | Some(TokKind::Comma)
                | Some(TokKind::LBracket) | Some(TokKind::RBracket) => {}
                _ => return None,
            }
            j += 1;
        }
        None
    }

    /// Second pass: statement-parse one method body, building its sequence.
    fn parse_method_body(
        &mut self,
        owner: &str,
        imports: &ImportTable,
        fields: &BTreeMap<String, String>,
        method: &MethodRec,
        start: usize,
        end: usize,
    ) {
        let mut scope = ResolutionScope::new(imports, fields);
        for (name, ty) in &method.params {
            scope.push_local(name.clone(), ty.clone());
        }
        let mut body = BodyParser {
            file: self,
            end,
            scope,
            calls: Vec::new(),
            diags: Vec::new(),
        };

        let mut i = start;
        let failed_at: Option<u32> = loop {
            if i >= end {
                break None;
            }
            match body.try_statement(i) {
                Ok(Some(next)) => i = next.max(i + 1),
                Ok(None) => i += 1,
                Err(line) => break Some(line),
            }
        };

        let BodyParser { calls, diags, .. } = body;
        if let Some(line) = failed_at {
            self.diagnostics
                .push(ExtractionDiagnostic { line, kind: DiagnosticKind::SkippedMethod });
            return;
        }
        self.diagnostics.extend(diags);
        if !calls.is_empty() {
            let id = SequenceId::derive(self.label, self.emitted);
            self.emitted += 1;
            self.sequences.push(CallSequence {
                id,
                calls,
                origin_owner: owner.to_string(),
                origin_method: method.name.clone(),
                origin_file: self.label.to_string(),
            });
        }
    }
}

/// Expression-level parse failure.
enum ExprError {
    /// Tokens do not form the attempted construct; roll back quietly.
    NoMatch,
    /// The body physically cannot parse (unclosed bracket at body end);
    /// carries the line to report.
    Fatal(u32),
}

type ExprResult = Result<usize, ExprError>;

struct BodyParser<'p, 'a> {
    file: &'p FileParser<'a>,
    end: usize,
    scope: ResolutionScope<'p>,
    calls: Vec<ApiCall>,
    diags: Vec<ExtractionDiagnostic>,
}

const BINARY_OPS: &[&str] = &[
    "+", "-", "*", "/", "%", "<", ">", "<=", ">=", "==", "!=", "&&", "||", "&", "|", "^", "<<",
    ">>", ">>>", "?", ":", "->", "::", "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "<<=", ">>=", ">>>=",
];

const PREFIX_OPS: &[&str] = &["!", "~", "+", "-", "++", "--"];

impl<'p, 'a> BodyParser<'p, 'a> {
    fn kind(&self, i: usize) -> Option<TokKind> {
        if i < self.end {
            self.file.kind(i)
        } else {
            None
        }
    }

    fn text(&self, i: usize) -> &'a str {
        if i < self.end {
            self.file.text(i)
        } else {
            ""
        }
    }

    fn line(&self, i: usize) -> u32 {
        self.file.line(i.min(self.end.saturating_sub(1)))
    }

    fn is_ident(&self, i: usize) -> bool {
        self.kind(i) == Some(TokKind::Ident)
    }

    fn is_op(&self, i: usize, op: &str) -> bool {
        self.kind(i) == Some(TokKind::Op) && self.text(i) == op
    }

    /// `Ok(Some(next))` consumed a statement, `Ok(None)` recognized nothing,
    /// `Err(line)` aborts the method.
    fn try_statement(&mut self, i: usize) -> Result<Option<usize>, u32> {
        if let Some(outcome) = self.try_local_declaration(i)? {
            return Ok(Some(outcome));
        }
        if self.is_ident(i) && self.text(i) == "return" {
            return self.parse_return(i).map(Some);
        }
        // Plain expression statement, speculative until the semicolon.
        let mark = (self.calls.len(), self.diags.len());
        match self.parse_expr(i) {
            Ok(next) if self.kind(next) == Some(TokKind::Semi) => Ok(Some(next + 1)),
            Ok(_) | Err(ExprError::NoMatch) => {
                self.rollback(mark);
                Ok(None)
            }
            Err(ExprError::Fatal(line)) => Err(line),
        }
    }

    fn rollback(&mut self, mark: (usize, usize)) {
        self.calls.truncate(mark.0);
        self.diags.truncate(mark.1);
    }

    /// `Type name (= expr)? (, name (= expr)?)* ;` — speculative until the
    /// token after the first name proves it a declaration, committed after.
    fn try_local_declaration(&mut self, i: usize) -> Result<Option<usize>, u32> {
        let Some((ty, after_type)) = self.file.try_type_path(i, self.end) else {
            return Ok(None);
        };
        if !(self.is_ident(after_type) && !is_reserved(self.text(after_type))) {
            return Ok(None);
        }
        let looks_like_decl = matches!(self.kind(after_type + 1), Some(TokKind::Semi) | Some(TokKind::Comma))
            || self.is_op(after_type + 1, "=");
        if !looks_like_decl {
            return Ok(None);
        }

        let mark = (self.calls.len(), self.diags.len());
        let mut names = vec![self.text(after_type).to_string()];
        let mut cur = after_type + 1;
        if self.is_op(cur, "=") {
            cur = self.committed_expr(cur + 1, mark)?;
        }
        loop {
            match self.kind(cur) {
                Some(TokKind::Semi) => {
                    for name in names {
                        self.scope.push_local(name, ty.clone());
                    }
                    return Ok(Some(cur + 1));
                }
                Some(TokKind::Comma) => {
                    cur += 1;
                    if !(self.is_ident(cur) && !is_reserved(self.text(cur))) {
                        self.rollback(mark);
                        return Err(self.line(cur));
                    }
                    names.push(self.text(cur).to_string());
                    cur += 1;
                    if self.is_op(cur, "=") {
                        cur = self.committed_expr(cur + 1, mark)?;
                    }
                }
                _ => {
                    self.rollback(mark);
                    return Err(self.line(cur));
                }
            }
        }
    }

    fn parse_return(&mut self, i: usize) -> Result<usize, u32> {
        if self.kind(i + 1) == Some(TokKind::Semi) {
            return Ok(i + 2);
        }
        let mark = (self.calls.len(), self.diags.len());
        let next = self.committed_expr(i + 1, mark)?;
        if self.kind(next) == Some(TokKind::Semi) {
            Ok(next + 1)
        } else {
            self.rollback(mark);
            Err(self.line(next))
        }
    }

    /// An expression in a committed context: any failure aborts the method.
    fn committed_expr(&mut self, i: usize, mark: (usize, usize)) -> Result<usize, u32> {
        match self.parse_expr(i) {
            Ok(next) => Ok(next),
            Err(ExprError::NoMatch) => {
                self.rollback(mark);
                Err(self.line(i))
            }
            Err(ExprError::Fatal(line)) => {
                self.rollback(mark);
                Err(line)
            }
        }
    }

    fn parse_expr(&mut self, i: usize) -> ExprResult {
        let mut pos = self.parse_unary(i)?;
        while pos < self.end {
            let is_binop = (self.kind(pos) == Some(TokKind::Op)
                && BINARY_OPS.contains(&self.text(pos)))
                || (self.is_ident(pos) && self.text(pos) == "instanceof");
            if !is_binop {
                break;
            }
            pos = self.parse_unary(pos + 1)?;
        }
        Ok(pos)
    }

    fn parse_unary(&mut self, mut i: usize) -> ExprResult {
        while self.kind(i) == Some(TokKind::Op) && PREFIX_OPS.contains(&self.text(i)) {
            i += 1;
        }
        self.parse_postfix(i)
    }

    fn parse_postfix(&mut self, i: usize) -> ExprResult {
        let mut pos = self.parse_operand(i)?;
        loop {
            match self.kind(pos) {
                Some(TokKind::LBracket) => {
                    pos = self.parse_bracketed(pos)?;
                }
                Some(TokKind::Op) if self.text(pos) == "++" || self.text(pos) == "--" => {
                    pos += 1;
                }
                Some(TokKind::Dot) if self.is_ident(pos + 1) => {
                    let name = self.text(pos + 1);
                    if self.kind(pos + 2) == Some(TokKind::LParen) {
                        // Chained call: the receiver is a computed value, not
                        // a declared name, so it stays unresolved.
                        let line = self.line(pos + 1);
                        pos = self.parse_args(pos + 3)?;
                        self.diags.push(ExtractionDiagnostic {
                            line,
                            kind: DiagnosticKind::UnresolvedReceiver,
                        });
                    } else if is_reserved(name) && name != "this" && name != "super"
                        && name != "class"
                    {
                        break;
                    } else {
                        pos += 2;
                    }
                }
                _ => break,
            }
        }
        Ok(pos)
    }

    /// Index expression `[ ... ]`; opaque skip if the inside will not parse.
    fn parse_bracketed(&mut self, open: usize) -> ExprResult {
        if self.kind(open + 1) == Some(TokKind::RBracket) {
            return Err(ExprError::NoMatch);
        }
        let mark = (self.calls.len(), self.diags.len());
        match self.parse_expr(open + 1) {
            Ok(next) if self.kind(next) == Some(TokKind::RBracket) => Ok(next + 1),
            _ => {
                self.rollback(mark);
                self.skip_balanced(open, TokKind::LBracket, TokKind::RBracket)
            }
        }
    }

    fn parse_operand(&mut self, i: usize) -> ExprResult {
        match self.kind(i) {
            Some(TokKind::Number) | Some(TokKind::Str) | Some(TokKind::CharLit) => Ok(i + 1),
            Some(TokKind::LParen) => {
                let mark = (self.calls.len(), self.diags.len());
                match self.parse_expr(i + 1) {
                    Ok(next) if self.kind(next) == Some(TokKind::RParen) => Ok(next + 1),
                    Err(ExprError::Fatal(line)) => Err(ExprError::Fatal(line)),
                    _ => {
                        self.rollback(mark);
                        self.skip_balanced(i, TokKind::LParen, TokKind::RParen)
                    }
                }
            }
            Some(TokKind::Ident) if self.text(i) == "new" => self.parse_new(i),
            Some(TokKind::Ident) if !blocks_operand(self.text(i)) => self.parse_path_operand(i),
            _ => Err(ExprError::NoMatch),
        }
    }

    /// A dotted name, possibly an invocation: `a`, `a.b`, `a.b.m(args)`.
    fn parse_path_operand(&mut self, i: usize) -> ExprResult {
        let mut segs: Vec<(&'a str, u32)> = vec![(self.text(i), self.line(i))];
        let mut j = i + 1;
        while j + 1 < self.end
            && self.kind(j) == Some(TokKind::Dot)
            && self.is_ident(j + 1)
            && !is_reserved(self.text(j + 1))
        {
            segs.push((self.text(j + 1), self.line(j + 1)));
            j += 2;
        }
        if self.kind(j) != Some(TokKind::LParen) {
            return Ok(j);
        }

        let after = self.parse_args(j + 1)?;
        self.emit_invocation(&segs);
        Ok(after)
    }

    /// Argument-subexpression calls come first, then the enclosing call.
    fn emit_invocation(&mut self, segs: &[(&str, u32)]) {
        if segs.len() < 2 {
            return; // unqualified call on the enclosing class
        }
        let (method, line) = *segs.last().expect("segments are non-empty");
        let receiver = &segs[..segs.len() - 1];

        let resolved: Option<String> = if receiver.len() == 1 {
            self.scope.resolve_receiver(receiver[0].0)
        } else if self.scope.has_binding(receiver[0].0) {
            None // field-access chain; no type information for the tail
        } else if receiver.last().is_some_and(|(s, _)| {
            s.chars().next().is_some_and(char::is_uppercase)
        }) {
            // Qualified static call such as java.lang.Math.abs(x).
            Some(receiver.iter().map(|(s, _)| *s).collect::<Vec<_>>().join("."))
        } else {
            None
        };

        match resolved {
            Some(class_name) => self.calls.push(ApiCall::new(class_name, method)),
            None => self
                .diags
                .push(ExtractionDiagnostic { line, kind: DiagnosticKind::UnresolvedReceiver }),
        }
    }

    /// `new Type(args)`, `new Type[dims]`, with optional anonymous body or
    /// array initializer skipped whole.
    fn parse_new(&mut self, i: usize) -> ExprResult {
        let mut j = i + 1;
        if !(self.is_ident(j) && !is_reserved(self.text(j))) {
            return Err(ExprError::NoMatch);
        }
        let mut segs = vec![self.text(j)];
        j += 1;
        while j + 1 < self.end
            && self.kind(j) == Some(TokKind::Dot)
            && self.is_ident(j + 1)
            && !is_reserved(self.text(j + 1))
        {
            segs.push(self.text(j + 1));
            j += 2;
        }
        if self.is_op(j, "<") {
            j = self.file.scan_generics(j, self.end).ok_or(ExprError::NoMatch)?;
        }
        match self.kind(j) {
            Some(TokKind::LParen) => {
                let mut pos = self.parse_args(j + 1)?;
                let class_name = if segs.len() == 1 {
                    self.scope.qualify(segs[0])
                } else {
                    segs.join(".")
                };
                self.calls.push(ApiCall::new(class_name, "<init>"));
                if self.kind(pos) == Some(TokKind::LBrace) {
                    pos = self.skip_balanced(pos, TokKind::LBrace, TokKind::RBrace)?;
                }
                Ok(pos)
            }
            Some(TokKind::LBracket) => {
                let mut pos = j;
                while self.kind(pos) == Some(TokKind::LBracket) {
                    pos = if self.kind(pos + 1) == Some(TokKind::RBracket) {
                        pos + 2
                    } else {
                        self.parse_bracketed(pos)?
                    };
                }
                if self.kind(pos) == Some(TokKind::LBrace) {
                    pos = self.skip_balanced(pos, TokKind::LBrace, TokKind::RBrace)?;
                }
                Ok(pos)
            }
            _ => Err(ExprError::NoMatch),
        }
    }

    /// Argument list after the opening paren. Arguments that parse are mined
    /// for calls; a malformed list is skipped opaquely to its closing paren.
    /// Running off the body inside the list is fatal.
    fn parse_args(&mut self, i: usize) -> ExprResult {
        if self.kind(i) == Some(TokKind::RParen) {
            return Ok(i + 1);
        }
        let mut pos = i;
        loop {
            if pos >= self.end {
                return Err(ExprError::Fatal(self.line(pos)));
            }
            let mark = (self.calls.len(), self.diags.len());
            match self.parse_expr(pos) {
                Ok(next) => match self.kind(next) {
                    Some(TokKind::Comma) => pos = next + 1,
                    Some(TokKind::RParen) => return Ok(next + 1),
                    None => return Err(ExprError::Fatal(self.line(next))),
                    _ => {
                        self.rollback(mark);
                        return self.skip_balanced(i - 1, TokKind::LParen, TokKind::RParen);
                    }
                },
                Err(ExprError::Fatal(line)) => return Err(ExprError::Fatal(line)),
                Err(ExprError::NoMatch) => {
                    self.rollback(mark);
                    return self.skip_balanced(i - 1, TokKind::LParen, TokKind::RParen);
                }
            }
        }
    }

    /// Skips from the opener at `open` to just past its match; hitting the
    /// body end first is fatal.
    fn skip_balanced(&self, open: usize, open_kind: TokKind, close_kind: TokKind) -> ExprResult {
        self.file
            .matching_close(open, self.end, open_kind, close_kind)
            .map(|c| c + 1)
            .ok_or_else(|| ExprError::Fatal(self.line(self.end)))
    }
}
