//! A fixed collection of formulas over labels 1 and 2, used by tests and
//! benchmarks.

use alloc::vec::Vec;

use crate::logic::{parse_formula, Formula};

/// Sentences of quantifier rank at most 3.
pub const SENTENCES: &[(&str, &str)] = &[
    ("nonempty", "Ex x. x = x"),
    ("two-vertices", "Ex x. Ex y. !(x = y)"),
    ("has-edge", "Ex x. Ex y. adj(x,y)"),
    ("edgeless", "Ax x. Ax y. !adj(x,y)"),
    ("no-edge-negated", "!(Ex x. Ex y. adj(x,y))"),
    ("has-isolated", "Ex x. Ax y. !adj(x,y)"),
    ("no-isolated", "Ax x. Ex y. adj(x,y)"),
    ("dominating-vertex", "Ex x. Ax y. (x = y | adj(x,y))"),
    ("has-triangle", "Ex x. Ex y. Ex z. adj(x,y) & adj(y,z) & adj(x,z)"),
    ("induced-p3", "Ex x. Ex y. Ex z. adj(x,y) & adj(y,z) & !adj(x,z) & !(x = z)"),
    ("some-label1", "Ex x. label1(x)"),
    ("some-label2", "Ex x. label2(x)"),
    ("all-label1", "Ax x. label1(x)"),
    ("label1-adjacent-label2", "Ex x. Ex y. label1(x) & label2(y) & adj(x,y)"),
    (
        "2-colorable",
        "EX X. Ax x. Ax y. (!adj(x,y) | (X(x) & !X(y)) | (!X(x) & X(y)))",
    ),
    (
        "independent-vertex-cover",
        "EX S. Ax x. Ax y. (!adj(x,y) | ((S(x) | S(y)) & !(S(x) & S(y))))",
    ),
    (
        "nonempty-independent-set",
        "EX X. Ex x. X(x) & (Ax y. (!X(y) | !adj(x,y)))",
    ),
    ("set-tautology", "AX X. (Ex x. X(x)) | (Ax x. !X(x))"),
    (
        "distinct-sets-differ",
        "AX X. AX Y. (X = Y | (Ex x. (X(x) & !Y(x)) | (!X(x) & Y(x))))",
    ),
];

/// Formulas with free variables whose quantifier rank is at most 2 when
/// added to the number of free variables. Only `sets-equal` uses set
/// equality.
pub const OPEN_FORMULAS: &[(&str, &str)] = &[
    ("adjacent", "adj(x,y)"),
    ("equal", "x = y"),
    ("labeled", "label1(x)"),
    ("member", "X(x)"),
    ("not-member", "!X(x)"),
    ("has-neighbor", "Ex y. adj(x,y)"),
    ("all-neighbors", "Ax y. (!adj(x,y) | x = y)"),
    ("set-nonempty", "Ex x. X(x)"),
    ("some-superset", "EX Y. Y(x)"),
    ("sets-equal", "X = Y"),
    ("all-in-set", "Ax x. X(x)"),
];

fn parse_all(entries: &[(&'static str, &str)]) -> Vec<(&'static str, Formula)> {
    entries
        .iter()
        .map(|&(name, text)| (name, parse_formula(text, 2).expect("catalog formulas parse")))
        .collect()
}

pub fn sentences() -> Vec<(&'static str, Formula)> {
    parse_all(SENTENCES)
}

pub fn open_formulas() -> Vec<(&'static str, Formula)> {
    parse_all(OPEN_FORMULAS)
}

/// Looks up a catalog sentence by name.
pub fn sentence(name: &str) -> Option<Formula> {
    SENTENCES
        .iter()
        .find(|&&(n, _)| n == name)
        .map(|&(_, text)| parse_formula(text, 2).expect("catalog formulas parse"))
}
