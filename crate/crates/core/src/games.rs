//! Evaluating MSO formulas: directly by the satisfaction relation, as a
//! model-checking game on a structure, and as the same game played on full
//! or reduced characteristic trees.
//!
//! The game is played on formulas in negation normal form. The verifier
//! chooses at `∃` and `∨`, the falsifier at `∀` and `∧`, and a position with
//! a (negated) atomic formula is won by the verifier iff the atom holds under
//! the choices made so far. On characteristic trees an object quantifier
//! moves to a point-move child and a set quantifier to a set-move child; the
//! `i`-th chosen element is position `i` of the node's ordered structure.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use hashbrown::HashMap;
use thiserror::Error;

use crate::bits::VertexSet;
use crate::chartree::{CharTreeError, CharTreeStore, FullCharTree, RcId};
use crate::logic::Formula;
use crate::parsetree::ParseTree;
use crate::structures::{Structure, MAX_DEPTH};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("variable {0} is not bound")]
    UnboundVariable(String),
    #[error("formula is not in negation normal form")]
    NotNnf,
    #[error("formula is not a sentence")]
    NotSentence,
    #[error("set equality atoms cannot be evaluated on characteristic trees")]
    SetEqualityOnTree,
    #[error("quantifier at a node without children")]
    DepthBudget,
    #[error("tree node chose {found} elements and sets, expected {expected}")]
    FreeVariableMismatch { expected: usize, found: usize },
    #[error("element {element} out of range for a universe of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("quantifier rank {0} exceeds the supported depth {MAX_DEPTH}")]
    DepthTooLarge(usize),
    #[error(transparent)]
    CharTree(#[from] CharTreeError),
}

/// Values for free variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub objects: BTreeMap<String, usize>,
    pub sets: BTreeMap<String, VertexSet>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn with_object(mut self, name: &str, element: usize) -> Assignment {
        self.objects.insert(name.to_string(), element);
        self
    }

    pub fn with_set(mut self, name: &str, set: VertexSet) -> Assignment {
        self.sets.insert(name.to_string(), set);
        self
    }
}

/// `A ⊨ φ[α]` by the satisfaction relation, including set equality.
///
/// Quantifying over sets enumerates all `2^|A|` subsets.
pub fn evaluate(a: &Structure, phi: &Formula, alpha: &Assignment) -> Result<bool, GameError> {
    let mut alpha = alpha.clone();
    for s in alpha.sets.values() {
        if s.universe() != a.len() {
            return Err(GameError::ElementOutOfRange {
                element: s.universe(),
                size: a.len(),
            });
        }
    }
    for &v in alpha.objects.values() {
        if v >= a.len() {
            return Err(GameError::ElementOutOfRange {
                element: v,
                size: a.len(),
            });
        }
    }
    eval_rec(a, phi, &mut alpha)
}

fn object(alpha: &Assignment, x: &str) -> Result<usize, GameError> {
    alpha
        .objects
        .get(x)
        .copied()
        .ok_or_else(|| GameError::UnboundVariable(x.to_string()))
}

fn set<'a>(alpha: &'a Assignment, x: &str) -> Result<&'a VertexSet, GameError> {
    alpha
        .sets
        .get(x)
        .ok_or_else(|| GameError::UnboundVariable(x.to_string()))
}

fn eval_rec(a: &Structure, phi: &Formula, alpha: &mut Assignment) -> Result<bool, GameError> {
    Ok(match phi {
        Formula::Equal(x, y) => object(alpha, x)? == object(alpha, y)?,
        Formula::SetEqual(x, y) => set(alpha, x)? == set(alpha, y)?,
        Formula::Adj(x, y) => a.has_edge(object(alpha, x)?, object(alpha, y)?),
        Formula::Label(i, x) => a.label(object(alpha, x)?).contains(*i),
        Formula::In(s, x) => {
            let v = object(alpha, x)?;
            set(alpha, s)?.contains(v)
        }
        Formula::Not(f) => !eval_rec(a, f, alpha)?,
        Formula::And(f, g) => eval_rec(a, f, alpha)? && eval_rec(a, g, alpha)?,
        Formula::Or(f, g) => eval_rec(a, f, alpha)? || eval_rec(a, g, alpha)?,
        Formula::ExistsObj(x, f) | Formula::ForallObj(x, f) => {
            let exists = matches!(phi, Formula::ExistsObj(..));
            let saved = alpha.objects.remove(x);
            let mut result = !exists;
            for v in 0..a.len() {
                alpha.objects.insert(x.clone(), v);
                if eval_rec(a, f, alpha)? == exists {
                    result = exists;
                    break;
                }
            }
            alpha.objects.remove(x);
            if let Some(v) = saved {
                alpha.objects.insert(x.clone(), v);
            }
            result
        }
        Formula::ExistsSet(x, f) | Formula::ForallSet(x, f) => {
            let exists = matches!(phi, Formula::ExistsSet(..));
            let saved = alpha.sets.remove(x);
            let mut result = !exists;
            let mut current = VertexSet::new(a.len());
            loop {
                alpha.sets.insert(x.clone(), current.clone());
                if eval_rec(a, f, alpha)? == exists {
                    result = exists;
                    break;
                }
                if !next_subset(&mut current) {
                    break;
                }
            }
            alpha.sets.remove(x);
            if let Some(s) = saved {
                alpha.sets.insert(x.clone(), s);
            }
            result
        }
    })
}

/// Binary increment; false after the full set.
fn next_subset(s: &mut VertexSet) -> bool {
    for v in 0..s.universe() {
        if s.contains(v) {
            s.remove(v);
        } else {
            s.insert(v);
            return true;
        }
    }
    false
}

/// An atomic formula with variables resolved to positions in the sequences
/// of chosen elements and sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    Equal(usize, usize),
    SetEqual(usize, usize),
    Adj(usize, usize),
    Label(usize, usize),
    In(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GameNode {
    Atom(Atom, bool),
    And(usize, usize),
    Or(usize, usize),
    ExistsObj(usize),
    ForallObj(usize),
    ExistsSet(usize),
    ForallSet(usize),
}

/// A formula in negation normal form flattened to an arena of subformulas,
/// with every variable replaced by its position among the chosen elements
/// or sets (free variables first, then bound ones in nesting order).
#[derive(Clone, Debug)]
pub struct CompiledFormula {
    nodes: Vec<GameNode>,
    root: usize,
    free_objects: usize,
    free_sets: usize,
}

type SlotLookup = dyn Fn(&[&str], &str) -> Result<usize, GameError>;

impl CompiledFormula {
    pub fn compile(phi: &Formula, objects: &[String], sets: &[String]) -> Result<CompiledFormula, GameError> {
        if !phi.is_nnf() {
            return Err(GameError::NotNnf);
        }
        let mut c = CompiledFormula {
            nodes: Vec::new(),
            root: 0,
            free_objects: objects.len(),
            free_sets: sets.len(),
        };
        let mut obj_scope: Vec<&str> = objects.iter().map(String::as_str).collect();
        let mut set_scope: Vec<&str> = sets.iter().map(String::as_str).collect();
        c.root = c.add(phi, &mut obj_scope, &mut set_scope)?;
        Ok(c)
    }

    fn add<'f>(
        &mut self,
        phi: &'f Formula,
        objs: &mut Vec<&'f str>,
        sets: &mut Vec<&'f str>,
    ) -> Result<usize, GameError> {
        let find = |scope: &[&str], x: &str| {
            scope
                .iter()
                .rposition(|&y| y == x)
                .ok_or_else(|| GameError::UnboundVariable(x.to_string()))
        };
        let node = match phi {
            Formula::Not(inner) => match self.atom(inner, objs, sets, &find)? {
                Some(a) => GameNode::Atom(a, false),
                None => return Err(GameError::NotNnf),
            },
            Formula::And(f, g) | Formula::Or(f, g) => {
                let l = self.add(f, objs, sets)?;
                let r = self.add(g, objs, sets)?;
                if matches!(phi, Formula::And(..)) {
                    GameNode::And(l, r)
                } else {
                    GameNode::Or(l, r)
                }
            }
            Formula::ExistsObj(x, f) | Formula::ForallObj(x, f) => {
                objs.push(x);
                let body = self.add(f, objs, sets)?;
                objs.pop();
                if matches!(phi, Formula::ExistsObj(..)) {
                    GameNode::ExistsObj(body)
                } else {
                    GameNode::ForallObj(body)
                }
            }
            Formula::ExistsSet(x, f) | Formula::ForallSet(x, f) => {
                sets.push(x);
                let body = self.add(f, objs, sets)?;
                sets.pop();
                if matches!(phi, Formula::ExistsSet(..)) {
                    GameNode::ExistsSet(body)
                } else {
                    GameNode::ForallSet(body)
                }
            }
            atomic => GameNode::Atom(
                self.atom(atomic, objs, sets, &find)?
                    .expect("remaining variants are atomic"),
                true,
            ),
        };
        self.nodes.push(node);
        Ok(self.nodes.len() - 1)
    }

    fn atom(
        &self,
        phi: &Formula,
        objs: &[&str],
        sets: &[&str],
        find: &SlotLookup,
    ) -> Result<Option<Atom>, GameError> {
        Ok(Some(match phi {
            Formula::Equal(x, y) => Atom::Equal(find(objs, x)?, find(objs, y)?),
            Formula::SetEqual(x, y) => Atom::SetEqual(find(sets, x)?, find(sets, y)?),
            Formula::Adj(x, y) => Atom::Adj(find(objs, x)?, find(objs, y)?),
            Formula::Label(i, x) => Atom::Label(*i, find(objs, x)?),
            Formula::In(s, x) => Atom::In(find(sets, s)?, find(objs, x)?),
            _ => return Ok(None),
        }))
    }

    /// Number of subformulas.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node(&self, i: usize) -> GameNode {
        self.nodes[i]
    }

    /// Number of free object and set variables, which occupy the first
    /// positions.
    pub fn free_counts(&self) -> (usize, usize) {
        (self.free_objects, self.free_sets)
    }

    pub fn contains_set_equality(&self) -> bool {
        self.nodes
            .iter()
            .any(|n| matches!(n, GameNode::Atom(Atom::SetEqual(..), _)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Player {
    Verifier,
    Falsifier,
}

/// What happens at a game position.
pub enum Step<P> {
    /// The game is over; `true` if the verifier won.
    Terminal(bool),
    Choice { player: Player, options: Vec<P> },
}

/// A finite two-player game.
pub trait Game {
    type Position;

    fn step(&mut self, pos: &Self::Position) -> Result<Step<Self::Position>, GameError>;
}

/// Whether the verifier has a winning strategy from `start`.
pub fn verifier_wins<G: Game>(game: &mut G, start: &G::Position) -> Result<bool, GameError> {
    match game.step(start)? {
        Step::Terminal(won) => Ok(won),
        Step::Choice { player, options } => {
            let want = player == Player::Verifier;
            for o in &options {
                if verifier_wins(game, o)? == want {
                    return Ok(want);
                }
            }
            Ok(!want)
        }
    }
}

fn connective_step<P>(node: GameNode, wrap: impl Fn(usize) -> P) -> Option<Step<P>> {
    match node {
        GameNode::And(l, r) => Some(Step::Choice {
            player: Player::Falsifier,
            options: vec![wrap(l), wrap(r)],
        }),
        GameNode::Or(l, r) => Some(Step::Choice {
            player: Player::Verifier,
            options: vec![wrap(l), wrap(r)],
        }),
        _ => None,
    }
}

fn quantifier_player(node: GameNode) -> Player {
    match node {
        GameNode::ExistsObj(_) | GameNode::ExistsSet(_) => Player::Verifier,
        _ => Player::Falsifier,
    }
}

/// The model-checking game played directly on a structure.
struct StructureGame<'a> {
    a: &'a Structure,
    phi: &'a CompiledFormula,
}

#[derive(Clone)]
struct StructurePos {
    node: usize,
    objects: Vec<usize>,
    sets: Vec<VertexSet>,
}

impl Game for StructureGame<'_> {
    type Position = StructurePos;

    fn step(&mut self, pos: &StructurePos) -> Result<Step<StructurePos>, GameError> {
        let node = self.phi.node(pos.node);
        let at = |n: usize| StructurePos {
            node: n,
            objects: pos.objects.clone(),
            sets: pos.sets.clone(),
        };
        if let Some(s) = connective_step(node, at) {
            return Ok(s);
        }
        Ok(match node {
            GameNode::Atom(atom, positive) => {
                let o = &pos.objects;
                let s = &pos.sets;
                let holds = match atom {
                    Atom::Equal(i, j) => o[i] == o[j],
                    Atom::SetEqual(i, j) => s[i] == s[j],
                    Atom::Adj(i, j) => self.a.has_edge(o[i], o[j]),
                    Atom::Label(k, i) => self.a.label(o[i]).contains(k),
                    Atom::In(j, i) => s[j].contains(o[i]),
                };
                Step::Terminal(holds == positive)
            }
            GameNode::ExistsObj(body) | GameNode::ForallObj(body) => Step::Choice {
                player: quantifier_player(node),
                options: (0..self.a.len())
                    .map(|v| {
                        let mut p = at(body);
                        p.objects.push(v);
                        p
                    })
                    .collect(),
            },
            GameNode::ExistsSet(body) | GameNode::ForallSet(body) => {
                let mut options = Vec::new();
                let mut current = VertexSet::new(self.a.len());
                loop {
                    let mut p = at(body);
                    p.sets.push(current.clone());
                    options.push(p);
                    if !next_subset(&mut current) {
                        break;
                    }
                }
                Step::Choice {
                    player: quantifier_player(node),
                    options,
                }
            }
            GameNode::And(..) | GameNode::Or(..) => unreachable!("handled above"),
        })
    }
}

/// The model-checking game on `A` from the position given by `phi` and
/// `alpha`. `phi` must be in negation normal form.
pub fn game_on_structure(a: &Structure, phi: &Formula, alpha: &Assignment) -> Result<bool, GameError> {
    let free = phi.free_variables();
    let compiled = CompiledFormula::compile(phi, &free.objects, &free.sets)?;
    let objects = free
        .objects
        .iter()
        .map(|x| {
            let v = object(alpha, x)?;
            if v < a.len() {
                Ok(v)
            } else {
                Err(GameError::ElementOutOfRange {
                    element: v,
                    size: a.len(),
                })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let sets = free
        .sets
        .iter()
        .map(|x| set(alpha, x).cloned())
        .collect::<Result<Vec<_>, _>>()?;
    let mut game = StructureGame { a, phi: &compiled };
    verifier_wins(
        &mut game,
        &StructurePos {
            node: compiled.root(),
            objects,
            sets,
        },
    )
}

fn check_free(phi: &Formula, objects: &[String], sets: &[String]) -> Result<(), GameError> {
    let free = phi.free_variables();
    for x in &free.objects {
        if !objects.contains(x) {
            return Err(GameError::UnboundVariable(x.clone()));
        }
    }
    for x in &free.sets {
        if !sets.contains(x) {
            return Err(GameError::UnboundVariable(x.clone()));
        }
    }
    Ok(())
}

struct FullTreeGame<'a> {
    phi: &'a CompiledFormula,
}

impl<'a> Game for FullTreeGame<'a> {
    type Position = (usize, &'a FullCharTree);

    fn step(&mut self, &(node_idx, tree): &Self::Position) -> Result<Step<Self::Position>, GameError> {
        let node = self.phi.node(node_idx);
        if let Some(s) = connective_step(node, |n| (n, tree)) {
            return Ok(s);
        }
        Ok(match node {
            GameNode::Atom(atom, positive) => {
                let holds = match atom {
                    Atom::Equal(i, j) => tree.same_element(i, j),
                    Atom::Adj(i, j) => tree.adjacent(i, j),
                    Atom::Label(k, i) => tree.label_at(i).contains(k),
                    Atom::In(j, i) => tree.in_set(j, i),
                    Atom::SetEqual(..) => return Err(GameError::SetEqualityOnTree),
                };
                Step::Terminal(holds == positive)
            }
            GameNode::ExistsObj(body) | GameNode::ForallObj(body) => {
                if tree.point_children.is_empty() && tree.set_children.is_empty() {
                    return Err(GameError::DepthBudget);
                }
                Step::Choice {
                    player: quantifier_player(node),
                    options: tree.point_children.iter().map(|c| (body, c)).collect(),
                }
            }
            GameNode::ExistsSet(body) | GameNode::ForallSet(body) => {
                if tree.set_children.is_empty() {
                    return Err(GameError::DepthBudget);
                }
                Step::Choice {
                    player: quantifier_player(node),
                    options: tree.set_children.iter().map(|c| (body, c)).collect(),
                }
            }
            GameNode::And(..) | GameNode::Or(..) => unreachable!("handled above"),
        })
    }
}

/// The game on a full characteristic tree whose root chose the elements
/// for `objects` and the sets for `sets`, in order.
pub fn game_on_full_tree(
    tree: &FullCharTree,
    phi: &Formula,
    objects: &[String],
    sets: &[String],
) -> Result<bool, GameError> {
    if tree.elements.len() != objects.len() || tree.set_traces.len() != sets.len() {
        return Err(GameError::FreeVariableMismatch {
            expected: objects.len() + sets.len(),
            found: tree.elements.len() + tree.set_traces.len(),
        });
    }
    check_free(phi, objects, sets)?;
    let compiled = CompiledFormula::compile(phi, objects, sets)?;
    let mut game = FullTreeGame { phi: &compiled };
    verifier_wins(&mut game, &(compiled.root(), tree))
}

/// Counters from a game on a reduced characteristic tree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GameStats {
    /// Distinct `(subformula, node)` positions evaluated.
    pub visits: usize,
    pub subformulas: usize,
}

/// The game on reduced characteristic trees, memoized on
/// `(subformula, node)`.
pub struct ReducedTreeGame<'a> {
    store: &'a CharTreeStore,
    phi: &'a CompiledFormula,
    memo: HashMap<(usize, RcId), bool>,
    visits: usize,
}

impl<'a> ReducedTreeGame<'a> {
    pub fn new(store: &'a CharTreeStore, phi: &'a CompiledFormula) -> ReducedTreeGame<'a> {
        ReducedTreeGame {
            store,
            phi,
            memo: HashMap::new(),
            visits: 0,
        }
    }

    pub fn stats(&self) -> GameStats {
        GameStats {
            visits: self.visits,
            subformulas: self.phi.len(),
        }
    }

    /// Whether the verifier wins from subformula `node` at tree node `at`.
    pub fn wins(&mut self, node: usize, at: RcId) -> Result<bool, GameError> {
        if let Some(&w) = self.memo.get(&(node, at)) {
            return Ok(w);
        }
        self.visits += 1;
        let store = self.store;
        let tree = store.get(at)?;
        let ord = tree.ord();
        let won = match self.phi.node(node) {
            GameNode::Atom(atom, positive) => {
                let holds = match atom {
                    Atom::Equal(i, j) => ord.class_of(i) == ord.class_of(j),
                    Atom::Adj(i, j) => ord.adjacent(ord.class_of(i), ord.class_of(j)),
                    Atom::Label(k, i) => ord.label(ord.class_of(i)).contains(k),
                    Atom::In(j, i) => ord.in_trace(j, ord.class_of(i)),
                    Atom::SetEqual(..) => return Err(GameError::SetEqualityOnTree),
                };
                holds == positive
            }
            GameNode::And(l, r) => self.wins(l, at)? && self.wins(r, at)?,
            GameNode::Or(l, r) => self.wins(l, at)? || self.wins(r, at)?,
            q @ (GameNode::ExistsObj(body)
            | GameNode::ForallObj(body)
            | GameNode::ExistsSet(body)
            | GameNode::ForallSet(body)) => {
                if tree.is_leaf() {
                    return Err(GameError::DepthBudget);
                }
                let children = match q {
                    GameNode::ExistsObj(_) | GameNode::ForallObj(_) => tree.point_children(),
                    _ => tree.set_children(),
                };
                let exists = quantifier_player(q) == Player::Verifier;
                let mut result = !exists;
                for &c in children {
                    if self.wins(body, c)? == exists {
                        result = exists;
                        break;
                    }
                }
                result
            }
        };
        self.memo.insert((node, at), won);
        Ok(won)
    }
}

/// The game on a reduced characteristic tree whose root chose the elements
/// for `objects` and the sets for `sets`, in order.
pub fn game_on_tree(
    store: &CharTreeStore,
    root: RcId,
    phi: &Formula,
    objects: &[String],
    sets: &[String],
) -> Result<bool, GameError> {
    game_on_tree_with_stats(store, root, phi, objects, sets).map(|(w, _)| w)
}

pub fn game_on_tree_with_stats(
    store: &CharTreeStore,
    root: RcId,
    phi: &Formula,
    objects: &[String],
    sets: &[String],
) -> Result<(bool, GameStats), GameError> {
    let ord = store.get(root)?.ord();
    if ord.point_count() != objects.len() || ord.set_count() != sets.len() {
        return Err(GameError::FreeVariableMismatch {
            expected: objects.len() + sets.len(),
            found: ord.point_count() + ord.set_count(),
        });
    }
    check_free(phi, objects, sets)?;
    let compiled = CompiledFormula::compile(phi, objects, sets)?;
    let mut game = ReducedTreeGame::new(store, &compiled);
    let won = game.wins(compiled.root(), root)?;
    Ok((won, game.stats()))
}

/// The form of a sentence that the tree game evaluates: set equalities
/// expanded into membership tests, then negation normal form.
pub fn prepare_sentence(phi: &Formula) -> Result<Formula, GameError> {
    if !phi.is_sentence() {
        return Err(GameError::NotSentence);
    }
    let prepared = phi.expand_set_equalities().to_nnf();
    let q = prepared.quantifier_rank();
    if q > MAX_DEPTH {
        return Err(GameError::DepthTooLarge(q));
    }
    Ok(prepared)
}

/// Model checking over a parse tree with a reusable tree store.
#[derive(Clone, Debug)]
pub struct ModelChecker {
    store: CharTreeStore,
}

/// Outcome of [`ModelChecker::check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub holds: bool,
    pub depth: usize,
    pub root: RcId,
    /// Distinct nodes of the characteristic tree of the whole graph.
    pub tree_nodes: usize,
    pub game: GameStats,
}

impl ModelChecker {
    pub fn new(width: usize) -> ModelChecker {
        let mut store = CharTreeStore::new(width);
        store.set_product_cache(true);
        ModelChecker { store }
    }

    pub fn store(&self) -> &CharTreeStore {
        &self.store
    }

    pub fn store_mut(&mut self) -> &mut CharTreeStore {
        &mut self.store
    }

    /// Decides `G ⊨ φ` for the graph `G` generated by `tree`.
    pub fn check(&mut self, tree: &ParseTree, phi: &Formula) -> Result<CheckReport, GameError> {
        let prepared = prepare_sentence(phi)?;
        let q = prepared.quantifier_rank();
        let root = self.store.from_parse_tree(tree, q)?;
        let (holds, game) = game_on_tree_with_stats(&self.store, root, &prepared, &[], &[])?;
        Ok(CheckReport {
            holds,
            depth: q,
            root,
            tree_nodes: self.store.reachable_count(root),
            game,
        })
    }
}

/// Whether the graph generated by `tree` satisfies the sentence `phi`.
pub fn model_check(tree: &ParseTree, phi: &Formula) -> Result<bool, GameError> {
    ModelChecker::new(tree.width()).check(tree, phi).map(|r| r.holds)
}
