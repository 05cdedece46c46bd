//! Linear optimization over the sets satisfying an MSO formula.
//!
//! For `φ(X₁,…,X_l)` and weights `a₁,…,a_l`, finds `U₁,…,U_l` with
//! `G ⊨ φ[U₁,…,U_l]` that optimize `Σ aᵢ|Uᵢ|`. Each parse-tree node keeps one
//! entry per distinct reduced characteristic tree `RC^q(G_node, ε, Ū ∩ G_node)`
//! with the best weight seen for it, so the work per node depends only on
//! `q`, `l` and the label width.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use hashbrown::HashMap;
use thiserror::Error;

use crate::bits::VertexSet;
use crate::chartree::{CharTreeError, CharTreeStore, IndicatorVector, RcId};
use crate::games::{prepare_sentence, CompiledFormula, GameError, ReducedTreeGame};
use crate::logic::Formula;
use crate::parsetree::{ParseNode, ParseTree};
use crate::structures::MAX_DEPTH;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Max,
    Min,
}

impl Direction {
    fn better(self, a: i128, b: i128) -> bool {
        match self {
            Direction::Max => a > b,
            Direction::Min => a < b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LinEmsoError {
    #[error("no sets satisfy the formula")]
    Infeasible,
    #[error("formula has free object variable {0}")]
    FreeObjectVariable(String),
    #[error("{weights} weights given for {variables} set variables")]
    WeightCount { weights: usize, variables: usize },
    #[error("set variable {0} is not free in the formula")]
    NotFree(String),
    #[error("depth {0} exceeds the supported maximum {MAX_DEPTH}")]
    DepthTooLarge(usize),
    #[error("objective overflow")]
    Overflow,
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    CharTree(#[from] CharTreeError),
}

/// `(φ(X₁,…,X_l), a₁,…,a_l, opt)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinEmsoProblem {
    pub phi: Formula,
    /// `X₁,…,X_l`.
    pub variables: Vec<String>,
    pub weights: Vec<i64>,
    pub direction: Direction,
}

impl LinEmsoProblem {
    /// Takes the set variables in the order [`Formula::free_variables`]
    /// lists them.
    pub fn new(phi: Formula, weights: Vec<i64>, direction: Direction) -> LinEmsoProblem {
        let variables = phi.free_variables().sets;
        LinEmsoProblem {
            phi,
            variables,
            weights,
            direction,
        }
    }

    pub fn with_variables(
        phi: Formula,
        variables: Vec<String>,
        weights: Vec<i64>,
        direction: Direction,
    ) -> LinEmsoProblem {
        LinEmsoProblem {
            phi,
            variables,
            weights,
            direction,
        }
    }

    fn validate(&self) -> Result<(), LinEmsoError> {
        let free = self.phi.free_variables();
        if let Some(x) = free.objects.first() {
            return Err(LinEmsoError::FreeObjectVariable(x.clone()));
        }
        if self.weights.len() != self.variables.len() {
            return Err(LinEmsoError::WeightCount {
                weights: self.weights.len(),
                variables: self.variables.len(),
            });
        }
        for x in &free.sets {
            if !self.variables.contains(x) {
                return Err(LinEmsoError::NotFree(x.clone()));
            }
        }
        for x in &self.variables {
            if !free.sets.contains(x) {
                return Err(LinEmsoError::NotFree(x.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinEmsoSolution {
    pub value: i128,
    /// `U₁,…,U_l` over the vertices of the generated graph.
    pub witness: Vec<VertexSet>,
    /// `qr(φ) + l`.
    pub depth: usize,
    /// Largest number of classes kept at one parse-tree node.
    pub max_classes: usize,
}

/// How a class's witness was formed; leaves record the vertex and the sets
/// it was put in.
#[derive(Clone, Copy, Debug)]
enum Origin {
    Leaf { vertex: usize, mask: u8 },
    Pair(usize, usize),
}

#[derive(Clone, Copy, Debug)]
struct Class {
    tree: RcId,
    value: i128,
    origin: usize,
}

/// Classes in first-found order, with an index by tree id.
#[derive(Default)]
struct ClassMap {
    classes: Vec<Class>,
    index: HashMap<RcId, usize>,
}

impl ClassMap {
    fn offer(&mut self, class: Class, direction: Direction) {
        match self.index.get(&class.tree) {
            Some(&i) => {
                if direction.better(class.value, self.classes[i].value) {
                    self.classes[i] = class;
                }
            }
            None => {
                self.index.insert(class.tree, self.classes.len());
                self.classes.push(class);
            }
        }
    }
}

pub fn solve_linemso(tree: &ParseTree, problem: &LinEmsoProblem) -> Result<LinEmsoSolution, LinEmsoError> {
    problem.validate()?;
    let prepared = prepare_sentence_with_sets(&problem.phi)?;
    let l = problem.variables.len();
    let q = prepared.quantifier_rank() + l;
    if q > MAX_DEPTH {
        return Err(LinEmsoError::DepthTooLarge(q));
    }
    let mut store = CharTreeStore::new(tree.width());
    store.set_product_cache(true);

    let mut origins: Vec<Origin> = Vec::new();
    let mut leaf_classes = Vec::with_capacity(1 << l);
    for mask in 0..(1u16 << l) {
        let in_set: Vec<bool> = (0..l).map(|j| mask >> j & 1 == 1).collect();
        let id = store.leaf_with_sets(q, &in_set)?;
        let mut value: i128 = 0;
        for (j, &w) in problem.weights.iter().enumerate() {
            if in_set[j] {
                value += i128::from(w);
            }
        }
        leaf_classes.push((id, value, mask as u8));
    }

    let mut maps: Vec<Option<ClassMap>> = Vec::with_capacity(tree.len());
    let mut vertex = 0;
    let mut max_classes = 0;
    for node in tree.nodes() {
        let mut map = ClassMap::default();
        match *node {
            ParseNode::Leaf => {
                for &(id, value, mask) in &leaf_classes {
                    origins.push(Origin::Leaf { vertex, mask });
                    map.offer(
                        Class {
                            tree: id,
                            value,
                            origin: origins.len() - 1,
                        },
                        problem.direction,
                    );
                }
                vertex += 1;
            }
            ParseNode::Compose { op, left, right } => {
                let lm = maps[left].take().expect("children precede parents");
                let rm = maps[right].take().expect("children precede parents");
                for a in &lm.classes {
                    for b in &rm.classes {
                        let id = store.cross_product(a.tree, b.tree, q, &op, IndicatorVector::EMPTY)?;
                        let value = a.value.checked_add(b.value).ok_or(LinEmsoError::Overflow)?;
                        let better = match map.index.get(&id) {
                            Some(&i) => problem.direction.better(value, map.classes[i].value),
                            None => true,
                        };
                        if better {
                            origins.push(Origin::Pair(a.origin, b.origin));
                            map.offer(
                                Class {
                                    tree: id,
                                    value,
                                    origin: origins.len() - 1,
                                },
                                problem.direction,
                            );
                        }
                    }
                }
            }
        }
        max_classes = max_classes.max(map.classes.len());
        maps.push(Some(map));
    }
    let root = maps[tree.root()].take().expect("root map present");

    let compiled = CompiledFormula::compile(&prepared, &[], &problem.variables)?;
    let mut game = ReducedTreeGame::new(&store, &compiled);
    let mut best: Option<Class> = None;
    for class in &root.classes {
        if best.is_some_and(|b| !problem.direction.better(class.value, b.value)) {
            continue;
        }
        if game.wins(compiled.root(), class.tree)? {
            best = Some(*class);
        }
    }
    let best = best.ok_or(LinEmsoError::Infeasible)?;
    let n = tree.leaf_count();
    Ok(LinEmsoSolution {
        value: best.value,
        witness: witness(&origins, best.origin, n, l),
        depth: q,
        max_classes,
    })
}

/// Sentence preparation that tolerates free set variables.
fn prepare_sentence_with_sets(phi: &Formula) -> Result<Formula, LinEmsoError> {
    // Closing off the free sets lets the shared checks run unchanged.
    let free = phi.free_variables().sets;
    let closed = free
        .iter()
        .rev()
        .fold(phi.clone(), |acc, x| Formula::exists_set(x, acc));
    let prepared = prepare_sentence(&closed).map_err(|e| match e {
        GameError::DepthTooLarge(q) => LinEmsoError::DepthTooLarge(q),
        e => LinEmsoError::Game(e),
    })?;
    let mut body = prepared;
    for _ in 0..free.len() {
        body = match body {
            Formula::ExistsSet(_, inner) => *inner,
            _ => unreachable!("prefix is preserved by normalization"),
        };
    }
    Ok(body)
}

fn witness(origins: &[Origin], root: usize, n: usize, l: usize) -> Vec<VertexSet> {
    let mut sets = vec![VertexSet::new(n); l];
    let mut stack = vec![root];
    while let Some(i) = stack.pop() {
        match origins[i] {
            Origin::Leaf { vertex, mask } => {
                for (j, s) in sets.iter_mut().enumerate() {
                    if mask >> j & 1 == 1 {
                        s.insert(vertex);
                    }
                }
            }
            Origin::Pair(a, b) => {
                stack.push(a);
                stack.push(b);
            }
        }
    }
    sets
}
