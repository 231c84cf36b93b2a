//! Shared domain types: resolved API calls, extracted call sequences, and
//! extraction diagnostics.

use std::fmt;

/// One resolved API invocation: the owning class (qualified when the import
/// table could supply a package) and the method name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ApiCall {
    pub class_name: String,
    pub method_name: String,
}

impl ApiCall {
    pub fn new(class_name: impl Into<String>, method_name: impl Into<String>) -> ApiCall {
        let call = ApiCall { class_name: class_name.into(), method_name: method_name.into() };
        debug_assert!(!call.class_name.is_empty() && !call.method_name.is_empty());
        call
    }

    /// `java.sql.Connection.close`
    pub fn qualified(&self) -> String {
        format!("{}.{}", self.class_name, self.method_name)
    }

    fn segments(&self) -> impl Iterator<Item = &str> {
        self.class_name.split('.').chain(std::iter::once(self.method_name.as_str()))
    }

    /// The index keys this call is filed under: fully qualified name,
    /// `SimpleClass.method`, and the bare method name.
    pub fn method_keys(&self) -> Vec<String> {
        let simple = self.class_name.rsplit('.').next().unwrap_or(&self.class_name);
        let mut keys = vec![
            self.qualified(),
            format!("{}.{}", simple, self.method_name),
            self.method_name.clone(),
        ];
        keys.sort();
        keys.dedup();
        keys
    }
}

impl fmt::Display for ApiCall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.class_name, self.method_name)
    }
}

/// A dot-separated method query. A query matches a call when its segments
/// equal a suffix of the call's segments, so `close`, `Connection.close` and
/// `java.sql.Connection.close` all match the same call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MethodQuery {
    segments: Vec<String>,
}

impl MethodQuery {
    /// `None` when the query is empty or has an empty segment.
    pub fn parse(query: &str) -> Option<MethodQuery> {
        let q = query.trim();
        if q.is_empty() {
            return None;
        }
        let segments: Vec<String> = q.split('.').map(str::to_string).collect();
        if segments.iter().any(|s| s.is_empty()) {
            return None;
        }
        Some(MethodQuery { segments })
    }

    pub fn matches(&self, call: &ApiCall) -> bool {
        let call_segments: Vec<&str> = call.segments().collect();
        if self.segments.len() > call_segments.len() {
            return false;
        }
        let tail = &call_segments[call_segments.len() - self.segments.len()..];
        tail.iter().zip(&self.segments).all(|(a, b)| *a == b)
    }

    /// Last segment; always the method name being asked about.
    pub fn bare_method(&self) -> &str {
        self.segments.last().expect("query has at least one segment")
    }
}

impl fmt::Display for MethodQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.segments.join("."))
    }
}

/// Opaque sequence identifier, derived from the origin label and the
/// sequence's position within its file so save/load reproduces it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SequenceId(String);

impl SequenceId {
    pub fn derive(label: &str, ordinal: usize) -> SequenceId {
        SequenceId(format!("{label}#{ordinal}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Ordered API calls extracted from one method body, with provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CallSequence {
    pub id: SequenceId,
    pub calls: Vec<ApiCall>,
    /// Qualified name of the enclosing class.
    pub origin_owner: String,
    /// Name of the enclosing method.
    pub origin_method: String,
    /// Label the sequence was extracted under (a file path in the repository).
    pub origin_file: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiagnosticKind {
    /// A method body failed to parse and was skipped whole.
    SkippedMethod,
    /// An invocation whose receiver could not be resolved to a class.
    UnresolvedReceiver,
    /// A byte sequence the lexer could not form a token from.
    LexError,
}

impl DiagnosticKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticKind::SkippedMethod => "skipped-method",
            DiagnosticKind::UnresolvedReceiver => "unresolved-receiver",
            DiagnosticKind::LexError => "lex-error",
        }
    }

    pub fn parse(s: &str) -> Option<DiagnosticKind> {
        match s {
            "skipped-method" => Some(DiagnosticKind::SkippedMethod),
            "unresolved-receiver" => Some(DiagnosticKind::UnresolvedReceiver),
            "lex-error" => Some(DiagnosticKind::LexError),
            _ => None,
        }
    }
}

/// A non-fatal extraction problem, reported instead of failing the file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionDiagnostic {
    /// 1-based source line.
    pub line: u32,
    pub kind: DiagnosticKind,
}
