//! MSO₁ formulas over the graph vocabulary `{E, L1, .., Lt}`.
//!
//! Object variables range over vertices, set variables over vertex sets. The
//! concrete syntax is handled by [`parse_formula`]; [`Formula`]'s `Display`
//! implementation prints text that parses back to the same tree.

mod parser;

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use parser::{parse_formula, ParseError, ParseErrorKind};

/// An MSO₁ formula.
///
/// Variables are plain names; the sort of a variable is fixed by the variant it
/// appears in. Formulas produced by [`parse_formula`] never bind the same name
/// twice along a root-to-leaf path and never bind a name that also occurs free.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    /// `x = y` on objects.
    Equal(String, String),
    /// `X = Y` on sets.
    SetEqual(String, String),
    /// The edge relation `E(x, y)`.
    Adj(String, String),
    /// `L_i(x)` with a 1-based label index.
    Label(usize, String),
    /// Membership `X(x)`.
    In(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    ExistsObj(String, Box<Formula>),
    ForallObj(String, Box<Formula>),
    ExistsSet(String, Box<Formula>),
    ForallSet(String, Box<Formula>),
}

/// Free variables of a formula, each list ordered by first occurrence.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VariableList {
    pub objects: Vec<String>,
    pub sets: Vec<String>,
}

impl VariableList {
    pub fn is_empty(&self) -> bool {
        self.objects.is_empty() && self.sets.is_empty()
    }
}

impl Formula {
    pub fn equal(x: &str, y: &str) -> Formula {
        Formula::Equal(x.into(), y.into())
    }

    pub fn set_equal(x: &str, y: &str) -> Formula {
        Formula::SetEqual(x.into(), y.into())
    }

    pub fn adj(x: &str, y: &str) -> Formula {
        Formula::Adj(x.into(), y.into())
    }

    pub fn label(i: usize, x: &str) -> Formula {
        Formula::Label(i, x.into())
    }

    pub fn member(set: &str, x: &str) -> Formula {
        Formula::In(set.into(), x.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn exists(x: &str, body: Formula) -> Formula {
        Formula::ExistsObj(x.into(), Box::new(body))
    }

    pub fn forall(x: &str, body: Formula) -> Formula {
        Formula::ForallObj(x.into(), Box::new(body))
    }

    pub fn exists_set(x: &str, body: Formula) -> Formula {
        Formula::ExistsSet(x.into(), Box::new(body))
    }

    pub fn forall_set(x: &str, body: Formula) -> Formula {
        Formula::ForallSet(x.into(), Box::new(body))
    }

    /// `a -> b` as `!a | b`.
    pub fn implies(self, other: Formula) -> Formula {
        self.not().or(other)
    }

    /// `a <-> b` as `(!a | b) & (a | !b)`.
    pub fn iff(self, other: Formula) -> Formula {
        let left = self.clone().not().or(other.clone());
        let right = self.or(other.not());
        left.and(right)
    }

    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            Formula::Equal(..)
                | Formula::SetEqual(..)
                | Formula::Adj(..)
                | Formula::Label(..)
                | Formula::In(..)
        )
    }

    pub fn is_quantifier(&self) -> bool {
        matches!(
            self,
            Formula::ExistsObj(..)
                | Formula::ForallObj(..)
                | Formula::ExistsSet(..)
                | Formula::ForallSet(..)
        )
    }

    /// Maximum nesting depth of quantifiers.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            f if f.is_atomic() => 0,
            Formula::Not(a) => a.quantifier_rank(),
            Formula::And(a, b) | Formula::Or(a, b) => a.quantifier_rank().max(b.quantifier_rank()),
            Formula::ExistsObj(_, a)
            | Formula::ForallObj(_, a)
            | Formula::ExistsSet(_, a)
            | Formula::ForallSet(_, a) => a.quantifier_rank() + 1,
            _ => unreachable!(),
        }
    }

    /// Number of set quantifiers anywhere in the formula.
    pub fn set_quantifier_count(&self) -> usize {
        match self {
            f if f.is_atomic() => 0,
            Formula::Not(a) => a.set_quantifier_count(),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.set_quantifier_count() + b.set_quantifier_count()
            }
            Formula::ExistsObj(_, a) | Formula::ForallObj(_, a) => a.set_quantifier_count(),
            Formula::ExistsSet(_, a) | Formula::ForallSet(_, a) => a.set_quantifier_count() + 1,
            _ => unreachable!(),
        }
    }

    /// Largest label index used by a `label` atom, 0 if none.
    pub fn max_label(&self) -> usize {
        match self {
            Formula::Label(i, _) => *i,
            f if f.is_atomic() => 0,
            Formula::Not(a) => a.max_label(),
            Formula::And(a, b) | Formula::Or(a, b) => a.max_label().max(b.max_label()),
            Formula::ExistsObj(_, a)
            | Formula::ForallObj(_, a)
            | Formula::ExistsSet(_, a)
            | Formula::ForallSet(_, a) => a.max_label(),
            _ => unreachable!(),
        }
    }

    /// Free variables, ordered by first occurrence in a left-to-right reading.
    pub fn free_variables(&self) -> VariableList {
        let mut out = VariableList::default();
        let mut bound_obj = Vec::new();
        let mut bound_set = Vec::new();
        self.collect_free(&mut bound_obj, &mut bound_set, &mut out);
        out
    }

    fn collect_free<'a>(
        &'a self,
        bound_obj: &mut Vec<&'a str>,
        bound_set: &mut Vec<&'a str>,
        out: &mut VariableList,
    ) {
        let obj = |x: &str, bound: &Vec<&str>, out: &mut VariableList| {
            if !bound.contains(&x) && !out.objects.iter().any(|o| o == x) {
                out.objects.push(x.into());
            }
        };
        let set = |x: &str, bound: &Vec<&str>, out: &mut VariableList| {
            if !bound.contains(&x) && !out.sets.iter().any(|o| o == x) {
                out.sets.push(x.into());
            }
        };
        match self {
            Formula::Equal(x, y) | Formula::Adj(x, y) => {
                obj(x, bound_obj, out);
                obj(y, bound_obj, out);
            }
            Formula::SetEqual(x, y) => {
                set(x, bound_set, out);
                set(y, bound_set, out);
            }
            Formula::Label(_, x) => obj(x, bound_obj, out),
            Formula::In(s, x) => {
                set(s, bound_set, out);
                obj(x, bound_obj, out);
            }
            Formula::Not(a) => a.collect_free(bound_obj, bound_set, out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound_obj, bound_set, out);
                b.collect_free(bound_obj, bound_set, out);
            }
            Formula::ExistsObj(x, a) | Formula::ForallObj(x, a) => {
                bound_obj.push(x);
                a.collect_free(bound_obj, bound_set, out);
                bound_obj.pop();
            }
            Formula::ExistsSet(x, a) | Formula::ForallSet(x, a) => {
                bound_set.push(x);
                a.collect_free(bound_obj, bound_set, out);
                bound_set.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Negation normal form: negations only directly above atoms.
    pub fn to_nnf(&self) -> Formula {
        self.nnf(false)
    }

    fn nnf(&self, negate: bool) -> Formula {
        use Formula::*;
        match self {
            f if f.is_atomic() => {
                if negate {
                    f.clone().not()
                } else {
                    f.clone()
                }
            }
            Not(a) => a.nnf(!negate),
            And(a, b) if negate => Or(Box::new(a.nnf(true)), Box::new(b.nnf(true))),
            And(a, b) => And(Box::new(a.nnf(false)), Box::new(b.nnf(false))),
            Or(a, b) if negate => And(Box::new(a.nnf(true)), Box::new(b.nnf(true))),
            Or(a, b) => Or(Box::new(a.nnf(false)), Box::new(b.nnf(false))),
            ExistsObj(x, a) if negate => ForallObj(x.clone(), Box::new(a.nnf(true))),
            ExistsObj(x, a) => ExistsObj(x.clone(), Box::new(a.nnf(false))),
            ForallObj(x, a) if negate => ExistsObj(x.clone(), Box::new(a.nnf(true))),
            ForallObj(x, a) => ForallObj(x.clone(), Box::new(a.nnf(false))),
            ExistsSet(x, a) if negate => ForallSet(x.clone(), Box::new(a.nnf(true))),
            ExistsSet(x, a) => ExistsSet(x.clone(), Box::new(a.nnf(false))),
            ForallSet(x, a) if negate => ExistsSet(x.clone(), Box::new(a.nnf(true))),
            ForallSet(x, a) => ForallSet(x.clone(), Box::new(a.nnf(false))),
            _ => unreachable!(),
        }
    }

    pub fn is_nnf(&self) -> bool {
        match self {
            f if f.is_atomic() => true,
            Formula::Not(a) => a.is_atomic(),
            Formula::And(a, b) | Formula::Or(a, b) => a.is_nnf() && b.is_nnf(),
            Formula::ExistsObj(_, a)
            | Formula::ForallObj(_, a)
            | Formula::ExistsSet(_, a)
            | Formula::ForallSet(_, a) => a.is_nnf(),
            _ => unreachable!(),
        }
    }

    pub fn contains_set_equality(&self) -> bool {
        match self {
            Formula::SetEqual(..) => true,
            f if f.is_atomic() => false,
            Formula::Not(a) => a.contains_set_equality(),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.contains_set_equality() || b.contains_set_equality()
            }
            Formula::ExistsObj(_, a)
            | Formula::ForallObj(_, a)
            | Formula::ExistsSet(_, a)
            | Formula::ForallSet(_, a) => a.contains_set_equality(),
            _ => unreachable!(),
        }
    }

    /// Rewrites every `X = Y` into `Ax z. ((!X(z) | Y(z)) & (X(z) | !Y(z)))`
    /// with a fresh `z`. The result has no set equality atoms and its
    /// quantifier rank grows by at most one.
    pub fn expand_set_equalities(&self) -> Formula {
        let mut names = BTreeSet::new();
        self.collect_names(&mut names);
        self.expand_set_eq(&mut names)
    }

    fn expand_set_eq(&self, names: &mut BTreeSet<String>) -> Formula {
        use Formula::*;
        match self {
            SetEqual(a, b) => {
                let z = fresh_name("z", names);
                names.insert(z.clone());
                let fwd = Formula::member(a, &z).implies(Formula::member(b, &z));
                let bwd = Formula::member(a, &z).or(Formula::member(b, &z).not());
                Formula::forall(&z, fwd.and(bwd))
            }
            f if f.is_atomic() => f.clone(),
            Not(a) => Not(Box::new(a.expand_set_eq(names))),
            And(a, b) => And(Box::new(a.expand_set_eq(names)), Box::new(b.expand_set_eq(names))),
            Or(a, b) => Or(Box::new(a.expand_set_eq(names)), Box::new(b.expand_set_eq(names))),
            ExistsObj(x, a) => ExistsObj(x.clone(), Box::new(a.expand_set_eq(names))),
            ForallObj(x, a) => ForallObj(x.clone(), Box::new(a.expand_set_eq(names))),
            ExistsSet(x, a) => ExistsSet(x.clone(), Box::new(a.expand_set_eq(names))),
            ForallSet(x, a) => ForallSet(x.clone(), Box::new(a.expand_set_eq(names))),
            _ => unreachable!(),
        }
    }

    pub(crate) fn collect_names(&self, names: &mut BTreeSet<String>) {
        match self {
            Formula::Equal(x, y)
            | Formula::SetEqual(x, y)
            | Formula::Adj(x, y)
            | Formula::In(x, y) => {
                names.insert(x.clone());
                names.insert(y.clone());
            }
            Formula::Label(_, x) => {
                names.insert(x.clone());
            }
            Formula::Not(a) => a.collect_names(names),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_names(names);
                b.collect_names(names);
            }
            Formula::ExistsObj(x, a)
            | Formula::ForallObj(x, a)
            | Formula::ExistsSet(x, a)
            | Formula::ForallSet(x, a) => {
                names.insert(x.clone());
                a.collect_names(names);
            }
        }
    }

    /// Renames bound variables so that no name is bound twice along a path
    /// and no bound name coincides with a free one.
    pub fn alpha_normalize(&self) -> Formula {
        let free = self.free_variables();
        let mut names = BTreeSet::new();
        self.collect_names(&mut names);
        let mut in_scope: Vec<String> = free.objects.into_iter().chain(free.sets).collect();
        let mut subst: Vec<(String, String)> = Vec::new();
        self.rename(&mut in_scope, &mut subst, &mut names)
    }

    fn rename(
        &self,
        in_scope: &mut Vec<String>,
        subst: &mut Vec<(String, String)>,
        names: &mut BTreeSet<String>,
    ) -> Formula {
        use Formula::*;
        let look = |x: &String, subst: &Vec<(String, String)>| -> String {
            subst
                .iter()
                .rev()
                .find(|(from, _)| from == x)
                .map(|(_, to)| to.clone())
                .unwrap_or_else(|| x.clone())
        };
        let bind = |x: &String,
                        body: &Formula,
                        in_scope: &mut Vec<String>,
                        subst: &mut Vec<(String, String)>,
                        names: &mut BTreeSet<String>|
         -> (String, Formula) {
            let new = if in_scope.contains(x) {
                let n = fresh_name(x, names);
                names.insert(n.clone());
                n
            } else {
                x.clone()
            };
            in_scope.push(new.clone());
            subst.push((x.clone(), new.clone()));
            let body = body.rename(in_scope, subst, names);
            subst.pop();
            in_scope.pop();
            (new, body)
        };
        match self {
            Equal(x, y) => Equal(look(x, subst), look(y, subst)),
            SetEqual(x, y) => SetEqual(look(x, subst), look(y, subst)),
            Adj(x, y) => Adj(look(x, subst), look(y, subst)),
            Label(i, x) => Label(*i, look(x, subst)),
            In(s, x) => In(look(s, subst), look(x, subst)),
            Not(a) => Not(Box::new(a.rename(in_scope, subst, names))),
            And(a, b) => And(
                Box::new(a.rename(in_scope, subst, names)),
                Box::new(b.rename(in_scope, subst, names)),
            ),
            Or(a, b) => Or(
                Box::new(a.rename(in_scope, subst, names)),
                Box::new(b.rename(in_scope, subst, names)),
            ),
            ExistsObj(x, a) => {
                let (x, a) = bind(x, a, in_scope, subst, names);
                ExistsObj(x, Box::new(a))
            }
            ForallObj(x, a) => {
                let (x, a) = bind(x, a, in_scope, subst, names);
                ForallObj(x, Box::new(a))
            }
            ExistsSet(x, a) => {
                let (x, a) = bind(x, a, in_scope, subst, names);
                ExistsSet(x, Box::new(a))
            }
            ForallSet(x, a) => {
                let (x, a) = bind(x, a, in_scope, subst, names);
                ForallSet(x, Box::new(a))
            }
        }
    }

    /// Whether the binding discipline of [`Formula::alpha_normalize`] holds.
    pub fn is_alpha_normal(&self) -> bool {
        let free = self.free_variables();
        let mut scope: Vec<&str> = free
            .objects
            .iter()
            .chain(free.sets.iter())
            .map(String::as_str)
            .collect();
        self.check_alpha(&mut scope)
    }

    fn check_alpha<'a>(&'a self, scope: &mut Vec<&'a str>) -> bool {
        match self {
            f if f.is_atomic() => true,
            Formula::Not(a) => a.check_alpha(scope),
            Formula::And(a, b) | Formula::Or(a, b) => a.check_alpha(scope) && b.check_alpha(scope),
            Formula::ExistsObj(x, a)
            | Formula::ForallObj(x, a)
            | Formula::ExistsSet(x, a)
            | Formula::ForallSet(x, a) => {
                if scope.contains(&x.as_str()) {
                    return false;
                }
                scope.push(x);
                let ok = a.check_alpha(scope);
                scope.pop();
                ok
            }
            _ => unreachable!(),
        }
    }

    /// Number of nodes of the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            f if f.is_atomic() => 1,
            Formula::Not(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::ExistsObj(_, a)
            | Formula::ForallObj(_, a)
            | Formula::ExistsSet(_, a)
            | Formula::ForallSet(_, a) => 1 + a.size(),
            _ => unreachable!(),
        }
    }
}

fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    (1..)
        .map(|k| format!("{base}_{k}"))
        .find(|n| !taken.contains(n))
        .expect("unbounded name supply")
}

/// Operands of `&`/`|` that are quantifiers must be parenthesized since a
/// quantifier body extends as far right as possible.
struct Operand<'a>(&'a Formula);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_quantifier() {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Equal(x, y) | Formula::SetEqual(x, y) => write!(f, "{x} = {y}"),
            Formula::Adj(x, y) => write!(f, "adj({x},{y})"),
            Formula::Label(i, x) => write!(f, "label{i}({x})"),
            Formula::In(s, x) => write!(f, "{s}({x})"),
            Formula::Not(a) => match **a {
                Formula::Equal(..) | Formula::SetEqual(..) => write!(f, "!({a})"),
                _ => write!(f, "!{}", Operand(a)),
            },
            Formula::And(a, b) => write!(f, "({} & {})", Operand(a), Operand(b)),
            Formula::Or(a, b) => write!(f, "({} | {})", Operand(a), Operand(b)),
            Formula::ExistsObj(x, a) => write!(f, "Ex {x}. {a}"),
            Formula::ForallObj(x, a) => write!(f, "Ax {x}. {a}"),
            Formula::ExistsSet(x, a) => write!(f, "EX {x}. {a}"),
            Formula::ForallSet(x, a) => write!(f, "AX {x}. {a}"),
        }
    }
}
