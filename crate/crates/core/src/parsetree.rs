//! `t`-labeled parse trees and the graph families used for testing and
//! benchmarking.
//!
//! Trees are stored as arenas in post-order: children always precede their
//! parent and the root is the last node, so every traversal here is a plain
//! loop and deep (caterpillar-shaped) trees cannot overflow the stack.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::bits::{LabelVec, MAX_LABEL_WIDTH};
use crate::structures::{Composition, Relabeling, Structure, StructureError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseTreeError {
    #[error("parse tree node {0} does not exist")]
    UnknownNode(usize),
    #[error("parse tree node {0} is used more than once")]
    SharedNode(usize),
    #[error("label width must be at least 1")]
    ZeroWidth,
    #[error("family {family} needs n >= {min}, got {n}")]
    UnsupportedSize {
        family: &'static str,
        min: usize,
        n: usize,
    },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParseNode {
    /// `⊙`: creates one vertex labeled `{1}`.
    Leaf,
    Compose {
        op: Composition,
        left: usize,
        right: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParseTree {
    width: usize,
    nodes: Vec<ParseNode>,
}

/// Incremental construction of a parse tree; [`ParseTreeBuilder::finish`]
/// compacts the chosen root's subtree into post-order.
#[derive(Clone, Debug)]
pub struct ParseTreeBuilder {
    width: usize,
    nodes: Vec<ParseNode>,
}

impl ParseTreeBuilder {
    pub fn new(width: usize) -> Result<ParseTreeBuilder, ParseTreeError> {
        if width == 0 {
            return Err(ParseTreeError::ZeroWidth);
        }
        if width > MAX_LABEL_WIDTH {
            return Err(StructureError::WidthTooLarge(width).into());
        }
        Ok(ParseTreeBuilder {
            width,
            nodes: Vec::new(),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn leaf(&mut self) -> usize {
        self.nodes.push(ParseNode::Leaf);
        self.nodes.len() - 1
    }

    pub fn compose(
        &mut self,
        op: Composition,
        left: usize,
        right: usize,
    ) -> Result<usize, ParseTreeError> {
        if op.width() != self.width {
            return Err(StructureError::WidthMismatch {
                expected: self.width,
                found: op.width(),
            }
            .into());
        }
        for c in [left, right] {
            if c >= self.nodes.len() {
                return Err(ParseTreeError::UnknownNode(c));
            }
        }
        if left == right {
            return Err(ParseTreeError::SharedNode(left));
        }
        self.nodes.push(ParseNode::Compose { op, left, right });
        Ok(self.nodes.len() - 1)
    }

    pub fn finish(self, root: usize) -> Result<ParseTree, ParseTreeError> {
        if root >= self.nodes.len() {
            return Err(ParseTreeError::UnknownNode(root));
        }
        let mut new_id = vec![usize::MAX; self.nodes.len()];
        let mut out = Vec::new();
        // (node, children already pushed)
        let mut stack = vec![(root, false)];
        while let Some((v, expanded)) = stack.pop() {
            match self.nodes[v] {
                ParseNode::Leaf => {
                    if new_id[v] != usize::MAX {
                        return Err(ParseTreeError::SharedNode(v));
                    }
                    new_id[v] = out.len();
                    out.push(ParseNode::Leaf);
                }
                ParseNode::Compose { op, left, right } => {
                    if !expanded {
                        if new_id[v] != usize::MAX {
                            return Err(ParseTreeError::SharedNode(v));
                        }
                        stack.push((v, true));
                        stack.push((right, false));
                        stack.push((left, false));
                    } else {
                        new_id[v] = out.len();
                        out.push(ParseNode::Compose {
                            op,
                            left: new_id[left],
                            right: new_id[right],
                        });
                    }
                }
            }
        }
        Ok(ParseTree {
            width: self.width,
            nodes: out,
        })
    }
}

impl ParseTree {
    /// The one-leaf tree.
    pub fn leaf(width: usize) -> Result<ParseTree, ParseTreeError> {
        let mut b = ParseTreeBuilder::new(width)?;
        let l = b.leaf();
        b.finish(l)
    }

    /// `left ⊗[g, f1, f2] right` as a new tree.
    pub fn compose(
        left: &ParseTree,
        right: &ParseTree,
        op: Composition,
    ) -> Result<ParseTree, ParseTreeError> {
        if left.width != right.width {
            return Err(StructureError::WidthMismatch {
                expected: left.width,
                found: right.width,
            }
            .into());
        }
        let mut b = ParseTreeBuilder::new(left.width)?;
        let l = b.append(left);
        let r = b.append(right);
        let root = b.compose(op, l, r)?;
        b.finish(root)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Nodes in post-order; the root is last.
    pub fn nodes(&self) -> &[ParseNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    /// `|T|`, the number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, ParseNode::Leaf))
            .count()
    }

    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            if let ParseNode::Compose { left, right, .. } = *n {
                depth[i] = 1 + depth[left].max(depth[right]);
            }
        }
        depth.last().copied().unwrap_or(0)
    }

    /// The same tree over a larger label width; new labels are never used.
    pub fn widen(&self, width: usize) -> Result<ParseTree, ParseTreeError> {
        let nodes = self
            .nodes
            .iter()
            .map(|n| match *n {
                ParseNode::Leaf => Ok(ParseNode::Leaf),
                ParseNode::Compose { op, left, right } => Ok(ParseNode::Compose {
                    op: op.widen(width)?,
                    left,
                    right,
                }),
            })
            .collect::<Result<Vec<_>, StructureError>>()?;
        Ok(ParseTree { width, nodes })
    }

    /// The graph generated by the tree. The `i`-th leaf in left-to-right
    /// order becomes vertex `i`.
    pub fn generate_graph(&self) -> Structure {
        let n = self.leaf_count();
        let mut g = Structure::new(n, self.width).expect("width validated on construction");
        // vertices of each subtree grouped by current label
        let mut groups: Vec<Option<BTreeMap<LabelVec, Vec<usize>>>> = vec![None; self.nodes.len()];
        let mut next_vertex = 0;
        for (i, node) in self.nodes.iter().enumerate() {
            let merged = match *node {
                ParseNode::Leaf => {
                    let mut m = BTreeMap::new();
                    m.insert(LabelVec::unit(1), vec![next_vertex]);
                    next_vertex += 1;
                    m
                }
                ParseNode::Compose { op, left, right } => {
                    let l = groups[left].take().expect("post-order");
                    let r = groups[right].take().expect("post-order");
                    for (&la, us) in &l {
                        for (&lb, vs) in &r {
                            if op.joins(la, lb) {
                                for &u in us {
                                    for &v in vs {
                                        g.add_edge(u, v).expect("distinct vertices");
                                    }
                                }
                            }
                        }
                    }
                    let mut m: BTreeMap<LabelVec, Vec<usize>> = BTreeMap::new();
                    for (side, f) in [(l, op.f1), (r, op.f2)] {
                        for (lab, vs) in side {
                            let entry = m.entry(f.apply(lab)).or_default();
                            if entry.len() < vs.len() {
                                let small = core::mem::replace(entry, vs);
                                entry.extend(small);
                            } else {
                                entry.extend(vs);
                            }
                        }
                    }
                    m
                }
            };
            groups[i] = Some(merged);
        }
        if let Some(root) = groups.pop().flatten() {
            for (lab, vs) in root {
                for v in vs {
                    g.set_label(v, lab).expect("labels stay within width");
                }
            }
        }
        g
    }
}

impl ParseTreeBuilder {
    /// Copies all nodes of `tree` and returns the id of its root.
    pub fn append(&mut self, tree: &ParseTree) -> usize {
        let offset = self.nodes.len();
        for n in &tree.nodes {
            self.nodes.push(match *n {
                ParseNode::Leaf => ParseNode::Leaf,
                ParseNode::Compose { op, left, right } => ParseNode::Compose {
                    op,
                    left: left + offset,
                    right: right + offset,
                },
            });
        }
        self.nodes.len() - 1
    }
}

/// Graph families with known small rankwidth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Path,
    Cycle,
    Complete,
    CographUnion,
    CographJoin,
    Star,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Path,
        Family::Cycle,
        Family::Complete,
        Family::CographUnion,
        Family::CographJoin,
        Family::Star,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::CographUnion => "cograph-union",
            Family::CographJoin => "cograph-join",
            Family::Star => "star",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Smallest supported `n`.
    pub fn min_size(self) -> usize {
        match self {
            Family::Cycle => 3,
            _ => 1,
        }
    }

    /// Label width used by [`family_tree`].
    pub fn width(self) -> usize {
        match self {
            Family::Path | Family::Cycle => 2,
            _ => 1,
        }
    }
}

const L1: LabelVec = LabelVec(0b01);
const L2: LabelVec = LabelVec(0b10);
const NONE: LabelVec = LabelVec(0);

fn rel(rows: &[LabelVec]) -> Relabeling {
    Relabeling::from_rows(rows.len(), rows).expect("fixed rows fit")
}

/// A parse tree for the `n`-vertex member of `family`.
///
/// Every tree is a full binary tree with `n` leaves, balanced up to rounding.
/// The cograph families split the vertex range in halves recursively and
/// alternate disjoint union and complete join by depth, starting with the
/// named operation at the root.
pub fn family_tree(family: Family, n: usize) -> Result<ParseTree, ParseTreeError> {
    if n < family.min_size() {
        return Err(ParseTreeError::UnsupportedSize {
            family: family.name(),
            min: family.min_size(),
            n,
        });
    }
    let mut b = ParseTreeBuilder::new(family.width())?;
    let root = match family {
        Family::Complete => balanced(&mut b, n, 0, &|_| Composition::identity(1))?,
        Family::CographUnion | Family::CographJoin => {
            let parity = usize::from(family == Family::CographJoin);
            balanced(&mut b, n, 0, &|depth| {
                let id = Relabeling::identity(1);
                let g = if (depth + parity) % 2 == 0 {
                    Relabeling::zero(1)
                } else {
                    id
                };
                Composition { g, f1: id, f2: id }
            })?
        }
        Family::Star => {
            let center = b.leaf();
            if n == 1 {
                center
            } else {
                let id = Relabeling::identity(1);
                let union = Composition {
                    g: Relabeling::zero(1),
                    f1: id,
                    f2: id,
                };
                let rest = balanced(&mut b, n - 1, 0, &|_| union)?;
                b.compose(Composition::identity(1), center, rest)?
            }
        }
        Family::Path => path(&mut b, n)?,
        Family::Cycle => {
            let k = n / 2;
            let left = path(&mut b, k)?;
            let right = path(&mut b, n - k)?;
            let g = if k == 1 { rel(&[L1, L1]) } else { rel(&[L2, L1]) };
            let zero = Relabeling::zero(2);
            b.compose(Composition { g, f1: zero, f2: zero }, left, right)?
        }
    };
    b.finish(root)
}

fn balanced(
    b: &mut ParseTreeBuilder,
    n: usize,
    depth: usize,
    op: &dyn Fn(usize) -> Composition,
) -> Result<usize, ParseTreeError> {
    if n == 1 {
        return Ok(b.leaf());
    }
    let k = n - n / 2;
    let l = balanced(b, k, depth + 1, op)?;
    let r = balanced(b, n - k, depth + 1, op)?;
    b.compose(op(depth), l, r)
}

/// `P_n` with its left end labeled `{1}`, its right end labeled `{2}` and the
/// inner vertices unlabeled (a single vertex keeps `{1}`).
fn path(b: &mut ParseTreeBuilder, n: usize) -> Result<usize, ParseTreeError> {
    if n == 1 {
        return Ok(b.leaf());
    }
    let k = n - n / 2;
    let l = path(b, k)?;
    let r = path(b, n - k)?;
    // the right end of the left part is labeled {1} only when it is a leaf
    let g = if k == 1 { rel(&[L1, NONE]) } else { rel(&[L2, NONE]) };
    let f1 = rel(&[L1, NONE]);
    let f2 = if n - k == 1 { rel(&[L2, NONE]) } else { rel(&[NONE, L2]) };
    b.compose(Composition { g, f1, f2 }, l, r)
}
