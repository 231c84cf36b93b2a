//! Fault-tolerant extraction of API call sequences from source text.
//!
//! A file never fails to extract. Each method body that parses and contains
//! at least one resolved call yields one [`CallSequence`]; everything the
//! analyzer had to give up on is reported as a diagnostic: a broken method
//! body becomes one `skipped-method`, an invocation whose receiver has no
//! known type becomes `unresolved-receiver`, and untokenizable bytes become
//! `lex-error`.
//!
//! Call order within a sequence is evaluation order: inside a statement,
//! argument-subexpression calls precede their enclosing call; across
//! statements, source order.

mod lexer;
mod parser;
mod scope;

pub use scope::{ImportTable, ResolutionScope};

use crate::types::{CallSequence, ExtractionDiagnostic};

/// Everything extraction produced for one file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    pub sequences: Vec<CallSequence>,
    pub diagnostics: Vec<ExtractionDiagnostic>,
}

/// Extracts per-method call sequences from arbitrary text. `file_label`
/// becomes the sequences' origin and the base of their ids.
pub fn extract_file(source_text: &str, file_label: &str) -> Extraction {
    let (tokens, mut diagnostics) = lexer::lex(source_text);
    let parsed = parser::parse_file(&tokens, file_label);
    diagnostics.extend(parsed.diagnostics);
    Extraction { sequences: parsed.sequences, diagnostics }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{ApiCall, DiagnosticKind};
    use proptest::prelude::*;

    fn calls_of(extraction: &Extraction, idx: usize) -> Vec<String> {
        extraction.sequences[idx].calls.iter().map(ApiCall::qualified).collect()
    }

    fn diag_kinds(extraction: &Extraction) -> Vec<DiagnosticKind> {
        extraction.diagnostics.iter().map(|d| d.kind).collect()
    }

    #[test]
    fn field_receiver_worked_example() {
        let src = "import java.sql.Connection; class Client { Connection conn; \
                   void run(){ conn.open(); conn.close(); } }";
        let got = extract_file(src, "t");
        assert_eq!(got.sequences.len(), 1);
        assert_eq!(calls_of(&got, 0), vec!["java.sql.Connection.open", "java.sql.Connection.close"]);
        assert_eq!(got.sequences[0].origin_owner, "Client");
        assert_eq!(got.sequences[0].origin_method, "run");
        assert_eq!(got.sequences[0].origin_file, "t");
        assert!(got.diagnostics.is_empty());
    }

    #[test]
    fn empty_file_yields_nothing() {
        let got = extract_file("", "t");
        assert!(got.sequences.is_empty());
        assert!(got.diagnostics.is_empty());
    }

    #[test]
    fn broken_method_is_skipped_others_survive() {
        let src = "import java.net.Socket;\n\
                   class W {\n\
                     Socket s;\n\
                     void good() { s.connect(); s.close(); }\n\
                     void bad() { s.send(((; }\n\
                   }\n";
        let got = extract_file(src, "t");
        assert_eq!(got.sequences.len(), 1);
        assert_eq!(calls_of(&got, 0), vec!["java.net.Socket.connect", "java.net.Socket.close"]);
        assert_eq!(diag_kinds(&got), vec![DiagnosticKind::SkippedMethod]);
        assert_eq!(got.diagnostics[0].line, 5);
    }

    #[test]
    fn argument_calls_precede_the_enclosing_call() {
        let src = "class C { A a; B b; void m() { a.m(b.n()); } }";
        let got = extract_file(src, "t");
        assert_eq!(calls_of(&got, 0), vec!["B.n", "A.m"]);
    }

    #[test]
    fn local_declarations_resolve_most_recent_first() {
        let src = "import x.T1; import y.T2; class C { void m() { \
                   T1 v = new T1(); v.a(); T2 v = new T2(); v.b(); } }";
        let got = extract_file(src, "t");
        assert_eq!(
            calls_of(&got, 0),
            vec!["x.T1.<init>", "x.T1.a", "y.T2.<init>", "y.T2.b"]
        );
    }

    #[test]
    fn static_calls_on_capitalized_receivers() {
        let src = "class C { void m() { Math.abs(1); java.lang.System.gc(); } }";
        let got = extract_file(src, "t");
        assert_eq!(calls_of(&got, 0), vec!["Math.abs", "java.lang.System.gc"]);
    }

    #[test]
    fn unresolved_receivers_diagnose_instead_of_emitting() {
        let src = "class C { void m() { x.run(); } }";
        let got = extract_file(src, "t");
        assert!(got.sequences.is_empty());
        assert_eq!(diag_kinds(&got), vec![DiagnosticKind::UnresolvedReceiver]);
    }

    #[test]
    fn chained_calls_resolve_only_the_first_link() {
        let src = "class C { A a; void m() { a.open().close(); } }";
        let got = extract_file(src, "t");
        assert_eq!(calls_of(&got, 0), vec!["A.open"]);
        assert_eq!(diag_kinds(&got), vec![DiagnosticKind::UnresolvedReceiver]);
    }

    #[test]
    fn constructor_calls_are_init() {
        let src = "import java.io.FileWriter; class C { void m() { \
                   FileWriter w = new FileWriter(\"x\"); w.write(); } }";
        let got = extract_file(src, "t");
        assert_eq!(calls_of(&got, 0), vec!["java.io.FileWriter.<init>", "java.io.FileWriter.write"]);
    }

    #[test]
    fn wildcard_imports_leave_simple_names() {
        let src = "import java.util.*; class C { List l; void m() { l.add(1); } }";
        let got = extract_file(src, "t");
        assert_eq!(calls_of(&got, 0), vec!["List.add"]);
    }

    #[test]
    fn generics_and_arrays_strip_to_base_type() {
        let src = "import java.util.List; class C { void m() { \
                   List<String> l = x; l.add(1); int[] a = y; Buf[] b = z; b.flip(); } }";
        let got = extract_file(src, "t");
        assert_eq!(calls_of(&got, 0), vec!["java.util.List.add", "Buf.flip"]);
    }

    #[test]
    fn package_qualifies_the_owner() {
        let src = "package com.app; class C { A a; void m() { a.go(); } }";
        let got = extract_file(src, "t");
        assert_eq!(got.sequences[0].origin_owner, "com.app.C");
    }

    #[test]
    fn nested_classes_get_their_own_fields() {
        let src = "class Outer { A shared; \
                   class Inner { B own; void m() { own.x(); shared.y(); } } \
                   void n() { shared.z(); } }";
        let got = extract_file(src, "t");
        assert_eq!(got.sequences.len(), 2);
        let inner = &got.sequences[0];
        assert_eq!(inner.origin_owner, "Outer.Inner");
        // `shared` belongs to Outer, invisible from Inner's scope.
        assert_eq!(inner.calls.len(), 1);
        assert_eq!(inner.calls[0].qualified(), "B.x");
        assert_eq!(got.sequences[1].origin_owner, "Outer");
        assert_eq!(got.sequences[1].calls[0].qualified(), "A.z");
        assert_eq!(diag_kinds(&got), vec![DiagnosticKind::UnresolvedReceiver]);
    }

    #[test]
    fn parameters_act_as_local_declarations() {
        let src = "import java.sql.Connection; class C { \
                   void m(Connection c, int n) { c.open(); } }";
        let got = extract_file(src, "t");
        assert_eq!(calls_of(&got, 0), vec!["java.sql.Connection.open"]);
    }

    #[test]
    fn generic_parameter_types_survive_their_commas() {
        let src = "import java.util.Map; class C { \
                   void m(Map<String, Integer> lookup, int n) { lookup.get(n); } }";
        let got = extract_file(src, "t");
        assert_eq!(calls_of(&got, 0), vec!["java.util.Map.get"]);
    }

    #[test]
    fn for_header_declarations_reach_the_body() {
        let src = "import x.Cursor; class C { void m() { \
                   for (Cursor cur = top(); more; next) { cur.advance(); } } }";
        let got = extract_file(src, "t");
        assert_eq!(calls_of(&got, 0), vec!["x.Cursor.advance"]);
    }

    #[test]
    fn try_with_resources_is_beyond_the_subset_and_skips_the_method() {
        // The resource header commits to a declaration that cannot finish;
        // recovery is at method granularity by design.
        let src = "class C { A a; void risky() { try (B b = open()) { b.use(); } } \
                   void safe() { a.ok(); } }";
        let got = extract_file(src, "t");
        assert_eq!(got.sequences.len(), 1);
        assert_eq!(calls_of(&got, 0), vec!["A.ok"]);
        assert_eq!(diag_kinds(&got), vec![DiagnosticKind::SkippedMethod]);
    }

    #[test]
    fn casts_do_not_hide_following_calls() {
        let src = "class C { A a; void m() { x = (B) a.load(); a.done(); } }";
        let got = extract_file(src, "t");
        // The cast statement itself is skipped token-wise; the later
        // statement still extracts, and the cast's call is salvaged when
        // the skip reaches it.
        assert!(calls_of(&got, 0).contains(&"A.done".to_string()));
        assert!(calls_of(&got, 0).contains(&"A.load".to_string()));
    }

    #[test]
    fn class_literals_and_self_calls_are_inert() {
        let src = "class C { void m() { use(C.class); this.helper(); helper(); } }";
        let got = extract_file(src, "t");
        assert!(got.sequences.is_empty());
        // `this` has no declared type: one unresolved diagnostic; the bare
        // helper() calls have no receiver at all.
        assert_eq!(diag_kinds(&got), vec![DiagnosticKind::UnresolvedReceiver]);
    }

    #[test]
    fn static_initializer_blocks_are_skipped_whole() {
        let src = "class C { static { bootstrap.run(); } A a; void m() { a.go(); } }";
        let got = extract_file(src, "t");
        assert_eq!(got.sequences.len(), 1);
        assert_eq!(calls_of(&got, 0), vec!["A.go"]);
        assert!(got.diagnostics.is_empty());
    }

    #[test]
    fn annotations_are_tolerated_everywhere() {
        let src = "@Component class C { @Inject A a; \
                   @Override @Timed(limit = 3) void m(@NotNull int n) { a.fire(); } }";
        let got = extract_file(src, "t");
        assert_eq!(calls_of(&got, 0), vec!["A.fire"]);
    }

    #[test]
    fn calls_in_nested_blocks_are_found() {
        let src = "class C { A a; void m() { if (ready) { a.begin(); } else { a.abort(); } \
                   while (busy) { a.poll(); } } }";
        let got = extract_file(src, "t");
        assert_eq!(calls_of(&got, 0), vec!["A.begin", "A.abort", "A.poll"]);
    }

    #[test]
    fn fields_declared_after_use_still_resolve() {
        let src = "class C { void m() { late.fire(); } A late; }";
        let got = extract_file(src, "t");
        assert_eq!(calls_of(&got, 0), vec!["A.fire"]);
    }

    #[test]
    fn constructors_extract_under_the_class_name() {
        let src = "class C { A a; C() { a.setup(); } }";
        let got = extract_file(src, "t");
        assert_eq!(got.sequences[0].origin_method, "C");
        assert_eq!(calls_of(&got, 0), vec!["A.setup"]);
    }

    #[test]
    fn sequence_ids_are_stable_and_positional() {
        let src = "class C { A a; void m1() { a.x(); } void m2() { a.y(); } }";
        let got = extract_file(src, "lbl");
        assert_eq!(got.sequences[0].id.as_str(), "lbl#0");
        assert_eq!(got.sequences[1].id.as_str(), "lbl#1");
    }

    #[test]
    fn determinism_on_same_input() {
        let src = "class C { A a; void m() { a.x(); b.y(); } void n() { nope(((; } }";
        assert_eq!(extract_file(src, "t"), extract_file(src, "t"));
    }

    #[test]
    fn locality_of_body_corruption() {
        let clean = "class C { A a; void m1() { a.x(); } void m2() { a.y(); } void m3() { a.z(); } }";
        let broken = "class C { A a; void m1() { a.x(); } void m2() { $$ a.y( ; !! } void m3() { a.z(); } }";
        let a = extract_file(clean, "t");
        let b = extract_file(broken, "t");
        // m1 is untouched byte for byte; m3 differs only in its positional id.
        assert_eq!(a.sequences[0], b.sequences[0]);
        assert_eq!(a.sequences[2].calls, b.sequences[1].calls);
        assert_eq!(a.sequences[2].origin_method, b.sequences[1].origin_method);
        assert!(b.diagnostics.iter().any(|d| d.kind == DiagnosticKind::SkippedMethod));
    }

    #[test]
    fn resolution_accounting_balances() {
        // Four identifier-receiver invocations: two resolve, two do not.
        let src = "class C { A a; void m() { a.x(); q.y(); Math.z(); w.v(); } }";
        let got = extract_file(src, "t");
        let emitted = got.sequences.iter().map(|s| s.calls.len()).sum::<usize>();
        let unresolved = got
            .diagnostics
            .iter()
            .filter(|d| d.kind == DiagnosticKind::UnresolvedReceiver)
            .count();
        assert_eq!(emitted, 2);
        assert_eq!(unresolved, 2);
        assert_eq!(emitted + unresolved, 4);
    }

    #[test]
    fn abstract_methods_and_interfaces_are_inert() {
        let src = "interface I { void x(); } class C { abstract void y(); A a; void m() { a.k(); } } enum E { ONE, TWO }";
        let got = extract_file(src, "t");
        assert_eq!(got.sequences.len(), 1);
        assert_eq!(calls_of(&got, 0), vec!["A.k"]);
    }

    #[test]
    fn diagnostics_lines_stay_within_the_file() {
        let src = "class C {\n void m() {\n x.q();\n }\n}\n";
        let total_lines = src.lines().count() as u32;
        let got = extract_file(src, "t");
        for d in &got.diagnostics {
            assert!(d.line >= 1 && d.line <= total_lines);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(192))]

        #[test]
        fn never_panics_on_arbitrary_text(src in ".{0,400}") {
            let _ = extract_file(&src, "fuzz");
        }

        #[test]
        fn never_panics_on_java_like_soup(
            tokens in proptest::collection::vec(
                proptest::sample::select(vec![
                    "class", "{", "}", "(", ")", ";", ".", "=", "new", "import",
                    "a", "B", "foo", "int", "void", "\"s\"", "//x\n", "/*", "*/",
                    "<", ">", ",", "[", "]", "@", "return", "1.5", "'c'", "$",
                ]),
                0..120,
            ),
        ) {
            let src = tokens.join(" ");
            let _ = extract_file(&src, "fuzz");
        }
    }
}
