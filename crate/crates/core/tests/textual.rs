mod common;

use sidekick::ir::{Attribute, DiagnosticKind, FloatType, ParametrizedAttr};
use sidekick::textual::{parse_attribute, parse_module, print_attribute, print_module, ParseOptions};

use common::cmath_context;

const LOOSE: ParseOptions = ParseOptions {
    allow_unregistered: true,
};

fn canonical(text: &str) -> String {
    let ctx = cmath_context();
    let m = parse_module(text, &ctx, &LOOSE).unwrap_or_else(|d| panic!("{d}"));
    print_module(&m.ir, m.top, &ctx)
}

fn error(text: &str) -> (DiagnosticKind, (u32, u32)) {
    let ctx = cmath_context();
    let d = parse_module(text, &ctx, &LOOSE).expect_err("should not parse");
    assert!(!d.message.is_empty());
    (d.kind, d.line_column().expect("source position"))
}

#[test]
fn parse_errors_have_kind_and_position() {
    use DiagnosticKind::*;
    let cases: &[(&str, DiagnosticKind, (u32, u32))] = &[
        ("%0 = \"test.a\"(%x) : (i32) -> i32", UndefinedValue, (1, 15)),
        ("\"test.a\"()[^nope] : () -> ()", UndefinedBlock, (1, 12)),
        ("%0 = \"test.a\"() : () -> i32\n%0 = \"test.b\"() : () -> i32", Redefinition, (2, 1)),
        ("\"test.a\"() {a = #builtin.nope} : () -> ()", UnknownAttribute, (1, 17)),
        ("\"test.a\"() {a = #cmath.complex<f32>} : () -> ()", InvalidAttribute, (1, 17)),
        ("\"test.a\"() {a = 1.5 : i32} : () -> ()", InvalidAttribute, (1, 23)),
        ("\"test.a\"() {a = 3 : f32} : () -> ()", InvalidAttribute, (1, 21)),
        ("\"test.a\"() {a = #foo.b<(]>} : () -> ()", UnbalancedBody, (1, 25)),
        ("\"test.a\"() {a = \"open} : () -> ()", Lexical, (1, 17)),
        ("\"test.a\"() : () -> () $", Lexical, (1, 23)),
        ("noquote() : () -> ()", Syntax, (1, 1)),
        ("\"nodot\"() : () -> ()", Syntax, (1, 1)),
        ("%0 = \"test.a\"() : () -> i32\n\"test.b\"(%0) : (i64) -> ()", TypeMismatch, (2, 10)),
        ("\"test.a\"() {a = 1, a = 2} : () -> ()", Redefinition, (1, 20)),
        ("\"test.a\"() : (i32) -> ()", TypeMismatch, (1, 14)),
        ("%a, %b = \"test.a\"() : () -> i32", TypeMismatch, (1, 23)),
        ("\"test.a\"() {a = 1 : i65} : () -> ()", InvalidAttribute, (1, 21)),
    ];
    for (text, kind, pos) in cases {
        let (k, p) = error(text);
        assert_eq!((k, p), (*kind, *pos), "for {text:?}");
    }
}

#[test]
fn values_from_outside_an_isolated_op_are_undefined() {
    let text = "\"func.func\"() ({\n  \"func.return\"(%outer) : (i32) -> ()\n}) {sym_name = \"f\", function_type = () -> ()} : () -> ()\n%outer = \"test.a\"() : () -> i32\n";
    assert_eq!(error(text), (DiagnosticKind::UndefinedValue, (2, 17)));
}

#[test]
fn later_definitions_parse_and_fail_dominance() {
    let ctx = cmath_context();
    let text = "\"test.r\"() ({\n  \"test.use\"(%v) : (i32) -> ()\n  %v = \"test.def\"() : () -> i32\n}) : () -> ()\n";
    let m = parse_module(text, &ctx, &LOOSE).unwrap();
    let mut loose = ctx.clone();
    loose.allow_unregistered = true;
    let kinds: Vec<_> = sidekick::ir::verify(&m.ir, m.top, &loose).iter().map(|d| d.kind).collect();
    assert_eq!(kinds, vec![DiagnosticKind::Dominance]);
}

#[test]
fn unregistered_ops_need_the_flag() {
    let ctx = cmath_context();
    let d = parse_module("\"test.a\"() : () -> ()", &ctx, &ParseOptions::default()).unwrap_err();
    assert_eq!(d.kind, DiagnosticKind::UnregisteredOperation);
}

#[test]
fn values_are_renumbered_in_textual_order() {
    let text = "%z = \"test.a\"() : () -> i32\n%y, %x = \"test.b\"(%z) : (i32) -> (i1, i1)\n";
    assert_eq!(
        canonical(text),
        "\"builtin.module\"() ({\n  %0 = \"test.a\"() : () -> i32\n  %1, %2 = \"test.b\"(%0) : (i32) -> (i1, i1)\n}) : () -> ()\n"
    );
}

#[test]
fn isolated_regions_restart_numbering() {
    let out = canonical(
        "%a = \"test.a\"() : () -> i32\n\"func.func\"() ({\n^e(%q: i8):\n  \"func.return\"() : () -> ()\n}) {sym_name = \"g\", function_type = (i8) -> ()} : () -> ()\n%b = \"test.a\"() : () -> i32\n",
    );
    assert!(out.contains("^bb0(%0: i8):"), "{out}");
    assert!(out.contains("%1 = \"test.a\"() : () -> i32"), "{out}");
}

#[test]
fn block_labels_are_renamed_per_region() {
    let out = canonical(
        "\"test.r\"() ({\n  \"cf.br\"()[^exit] : () -> ()\n^exit:\n  \"test.end\"() : () -> ()\n}, {\n^other:\n  \"test.end\"() : () -> ()\n}) : () -> ()\n",
    );
    assert_eq!(
        out,
        "\"builtin.module\"() ({\n  \"test.r\"() ({\n  ^bb0:\n    \"cf.br\"()[^bb1] : () -> ()\n  ^bb1:\n    \"test.end\"() : () -> ()\n  }, {\n    \"test.end\"() : () -> ()\n  }) : () -> ()\n}) : () -> ()\n"
    );
}

#[test]
fn attributes_print_sorted_with_explicit_types() {
    let out = canonical("\"test.a\"() {z = 1, a = 2.0, m = \"s\"} : () -> ()");
    assert!(out.contains("{a = 2.0 : f64, m = \"s\", z = 1 : i64}"), "{out}");
}

#[test]
fn explicit_module_is_not_wrapped_twice() {
    let once = canonical("\"test.a\"() : () -> ()");
    assert_eq!(canonical(&once), once);
    assert_eq!(once.matches("builtin.module").count(), 1);
}

#[test]
fn attribute_shorthands() {
    let ctx = cmath_context();
    let cases = [
        ("42 : i32", "42 : i32"),
        ("255 : i8", "-1 : i8"),
        ("0x7f : i8", "127 : i8"),
        ("-3", "-3 : i64"),
        ("1.0e-3 : f32", "0.001 : f32"),
        ("0.1 : f16", "0.099975586 : f16"),
        ("[2 : i32, 5 : i32]", "[2 : i32, 5 : i32]"),
        ("{b = 1 : i1, a = \"u\"}", "{a = \"u\", b = -1 : i1}"),
        ("\"a\\\"b\"", "\"a\\\"b\""),
        ("(i32, f64) -> index", "(i32, f64) -> index"),
        ("() -> (i1, i1)", "() -> (i1, i1)"),
        ("!cmath.complex<f64>", "!cmath.complex<f64>"),
        ("#foo.bar<x, [1, 2]>", "#foo.bar<x, [1, 2]>"),
    ];
    for (input, printed) in cases {
        let a = parse_attribute(input, &ctx).unwrap_or_else(|d| panic!("{input}: {d}"));
        assert_eq!(print_attribute(&a), printed, "for {input}");
    }
}

#[test]
fn integer_literals_wrap_to_the_type_width() {
    let ctx = cmath_context();
    let a = parse_attribute("300 : i8", &ctx).unwrap();
    assert_eq!(a.as_integer().unwrap().value(), 44);
    let b = parse_attribute("-129 : i8", &ctx).unwrap();
    assert_eq!(b.as_integer().unwrap().value(), 127);
}

#[test]
fn dialect_types_parse_to_parametrized_attributes() {
    let ctx = cmath_context();
    let a = parse_attribute("!cmath.complex<f32>", &ctx).unwrap();
    assert_eq!(
        a,
        Attribute::Parametrized(ParametrizedAttr {
            dialect: "cmath".into(),
            mnemonic: "complex".into(),
            parameters: vec![Attribute::FloatType(FloatType::F32)],
            is_type: true,
        })
    );
    assert!(a.is_type());
}

#[test]
fn opaque_bodies_are_kept_verbatim() {
    let text = "%0 = \"test.a\"() {a = #foo.bar<a<b> \"x>\" (i32) -> i32>} : () -> !foo.t<{[ ]}>\n";
    let out = canonical(text);
    assert!(out.contains("#foo.bar<a<b> \"x>\" (i32) -> i32>"), "{out}");
    assert!(out.contains("!foo.t<{[ ]}>"), "{out}");
}

#[test]
fn comments_and_whitespace_are_ignored() {
    let a = canonical("// c\n  %0   =  \"test.a\"( )  :  ( )  ->  i32 // trailing\n");
    let b = canonical("%0 = \"test.a\"() : () -> i32");
    assert_eq!(a, b);
}
