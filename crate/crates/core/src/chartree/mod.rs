//! Reduced characteristic trees.
//!
//! A reduced characteristic tree of depth `q` summarizes every play of the
//! model-checking game of length `q` on a structure. Its nodes are ordered
//! induced structures; a node with `m` chosen elements and `p` chosen sets
//! has children iff `m + p < q`, split into point moves (one more element)
//! and set moves (one more set). Sibling subtrees are a set, so equal
//! subtrees are merged.
//!
//! All trees live in a [`CharTreeStore`] that interns nodes: two ids are
//! equal exactly when the trees they root are equal. Trees are built either
//! from the definition on small structures or bottom-up over a parse tree
//! with the tree cross product.

mod bound;
mod dump;
mod full;
mod indicator;

pub use bound::{size_bound, tower, SizeBound, TowerNum};
pub use dump::{dump, NodeKind};
pub use full::{FullCharTree, FULL_TREE_MAX_DEPTH, FULL_TREE_MAX_SIZE};
pub use indicator::{rename_combine, IndicatorVector, Side, MAX_INDICATOR_LEN};

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use hashbrown::HashMap;
use thiserror::Error;

use crate::bits::VertexSet;
use crate::parsetree::{ParseNode, ParseTree};
use crate::structures::{Composition, OrderedStructure, Structure, StructureError, MAX_DEPTH};

/// Largest structure accepted by [`CharTreeStore::direct`].
pub const DIRECT_MAX_SIZE: usize = 4;
/// Largest depth accepted by [`CharTreeStore::direct`].
pub const DIRECT_MAX_DEPTH: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CharTreeError {
    #[error("depth {0} exceeds the supported maximum {MAX_DEPTH}")]
    DepthTooLarge(usize),
    #[error("an operand tree is too shallow for the requested depth")]
    DepthBudget,
    #[error("structure of size {size} at depth {depth} is beyond the enumeration limit")]
    ScaleGuard { size: usize, depth: usize },
    #[error("{0}")]
    Indicator(&'static str),
    #[error("label widths differ")]
    WidthMismatch,
    #[error("operands carry different numbers of sets")]
    SetCountMismatch,
    #[error("{0} chosen elements and sets exceed depth {1}")]
    SequenceTooLong(usize, usize),
    #[error("size bound does not fit the number representation")]
    BoundOverflow,
    #[error("unknown tree id {0}")]
    UnknownId(u32),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Id of an interned node.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RcId(u32);

impl RcId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for RcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for RcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An interned node: its ordered structure and the sorted, duplicate-free
/// ids of its point-move and set-move children.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RcNode {
    ord: OrderedStructure,
    point_children: Box<[RcId]>,
    set_children: Box<[RcId]>,
}

impl RcNode {
    pub fn ord(&self) -> &OrderedStructure {
        &self.ord
    }

    pub fn point_children(&self) -> &[RcId] {
        &self.point_children
    }

    pub fn set_children(&self) -> &[RcId] {
        &self.set_children
    }

    pub fn children(&self) -> impl Iterator<Item = RcId> + '_ {
        self.point_children.iter().chain(self.set_children.iter()).copied()
    }

    pub fn is_leaf(&self) -> bool {
        self.point_children.is_empty() && self.set_children.is_empty()
    }
}

type ProductKey = (RcId, RcId, Composition, u8);

/// Interning store for reduced characteristic trees over one label width.
#[derive(Clone, Debug)]
pub struct CharTreeStore {
    width: usize,
    nodes: Vec<RcNode>,
    index: HashMap<RcNode, RcId>,
    leaves: HashMap<(usize, usize, u8), RcId>,
    products: HashMap<ProductKey, RcId>,
    cache_products: bool,
}

impl CharTreeStore {
    pub fn new(width: usize) -> CharTreeStore {
        CharTreeStore {
            width,
            nodes: Vec::new(),
            index: HashMap::new(),
            leaves: HashMap::new(),
            products: HashMap::new(),
            cache_products: false,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Remember top-level cross products by `(left, right, op, q)`.
    ///
    /// With the cache off every composition of a parse tree recomputes its
    /// product, which is the cost the linear-time bound refers to.
    pub fn set_product_cache(&mut self, enabled: bool) {
        self.cache_products = enabled;
        if !enabled {
            self.products.clear();
        }
    }

    /// Number of distinct interned nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: RcId) -> &RcNode {
        &self.nodes[id.index()]
    }

    pub fn get(&self, id: RcId) -> Result<&RcNode, CharTreeError> {
        self.nodes.get(id.index()).ok_or(CharTreeError::UnknownId(id.0))
    }

    /// Interns a node; children are sorted and deduplicated.
    pub fn intern(
        &mut self,
        ord: OrderedStructure,
        mut point_children: Vec<RcId>,
        mut set_children: Vec<RcId>,
    ) -> RcId {
        point_children.sort_unstable();
        point_children.dedup();
        set_children.sort_unstable();
        set_children.dedup();
        let node = RcNode {
            ord,
            point_children: point_children.into_boxed_slice(),
            set_children: set_children.into_boxed_slice(),
        };
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = RcId(u32::try_from(self.nodes.len()).expect("fewer than 2^32 interned nodes"));
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    fn check_depth(q: usize) -> Result<(), CharTreeError> {
        if q > MAX_DEPTH {
            Err(CharTreeError::DepthTooLarge(q))
        } else {
            Ok(())
        }
    }

    /// `RC^q(A, c̄, C̄)` computed from the definition by enumerating every
    /// element and every subset at each level. Limited to structures with at
    /// most [`DIRECT_MAX_SIZE`] elements and depth at most
    /// [`DIRECT_MAX_DEPTH`].
    pub fn direct(
        &mut self,
        a: &Structure,
        q: usize,
        c: &[usize],
        sets: &[VertexSet],
    ) -> Result<RcId, CharTreeError> {
        if a.len() > DIRECT_MAX_SIZE || q > DIRECT_MAX_DEPTH {
            return Err(CharTreeError::ScaleGuard {
                size: a.len(),
                depth: q,
            });
        }
        self.direct_unchecked(a, q, c, sets)
    }

    pub(crate) fn direct_unchecked(
        &mut self,
        a: &Structure,
        q: usize,
        c: &[usize],
        sets: &[VertexSet],
    ) -> Result<RcId, CharTreeError> {
        Self::check_depth(q)?;
        if a.width() != self.width {
            return Err(CharTreeError::WidthMismatch);
        }
        if c.len() + sets.len() > q {
            return Err(CharTreeError::SequenceTooLong(c.len() + sets.len(), q));
        }
        if a.len() > 63 {
            return Err(CharTreeError::ScaleGuard {
                size: a.len(),
                depth: q,
            });
        }
        let mut c = c.to_vec();
        let mut sets = sets.to_vec();
        self.direct_rec(a, q, &mut c, &mut sets)
    }

    fn direct_rec(
        &mut self,
        a: &Structure,
        q: usize,
        c: &mut Vec<usize>,
        sets: &mut Vec<VertexSet>,
    ) -> Result<RcId, CharTreeError> {
        let ord = a.ordered_induced(c, sets)?;
        let mut points = Vec::new();
        let mut subsets = Vec::new();
        if c.len() + sets.len() < q {
            for v in 0..a.len() {
                c.push(v);
                points.push(self.direct_rec(a, q, c, sets)?);
                c.pop();
            }
            for mask in 0..(1u64 << a.len()) {
                sets.push(VertexSet::from_mask(a.len(), mask));
                subsets.push(self.direct_rec(a, q, c, sets)?);
                sets.pop();
            }
        }
        Ok(self.intern(ord, points, subsets))
    }

    /// `RC^q` of the one-vertex graph created by a parse-tree leaf.
    pub fn leaf(&mut self, q: usize) -> Result<RcId, CharTreeError> {
        self.leaf_with_sets(q, &[])
    }

    /// `RC^q(v, ε, C̄)` for the one-vertex graph with `C_j = {v}` exactly
    /// when `in_set[j]`.
    pub fn leaf_with_sets(&mut self, q: usize, in_set: &[bool]) -> Result<RcId, CharTreeError> {
        Self::check_depth(q)?;
        if in_set.len() > q {
            return Err(CharTreeError::SequenceTooLong(in_set.len(), q));
        }
        let mask = in_set
            .iter()
            .enumerate()
            .fold(0u8, |acc, (j, &b)| acc | (u8::from(b) << j));
        let key = (q, in_set.len(), mask);
        if let Some(&id) = self.leaves.get(&key) {
            return Ok(id);
        }
        let v = Structure::vertex(self.width)?;
        let sets: Vec<VertexSet> = in_set
            .iter()
            .map(|&b| VertexSet::from_mask(1, u64::from(b)))
            .collect();
        let id = self.direct_unchecked(&v, q, &[], &sets)?;
        self.leaves.insert(key, id);
        Ok(id)
    }

    /// The tree cross product: from `RC^q(A1, c̄[A1], C̄ ∩ A1)` and
    /// `RC^q(A2, c̄[A2], C̄ ∩ A2)` computes `RC^q(A1 ⊗[g,f1,f2] A2, c̄, C̄)`
    /// where `d` is the indicator vector of `c̄`.
    pub fn cross_product(
        &mut self,
        left: RcId,
        right: RcId,
        q: usize,
        op: &Composition,
        d: IndicatorVector,
    ) -> Result<RcId, CharTreeError> {
        Self::check_depth(q)?;
        self.get(left)?;
        self.get(right)?;
        if op.width() != self.width {
            return Err(CharTreeError::WidthMismatch);
        }
        let cacheable = self.cache_products && d.is_empty();
        let key = (left, right, *op, q as u8);
        if cacheable {
            if let Some(&id) = self.products.get(&key) {
                return Ok(id);
            }
        }
        let mut memo = HashMap::new();
        let id = self.cross_rec(left, right, d, q, op, &mut memo)?;
        if cacheable {
            self.products.insert(key, id);
        }
        Ok(id)
    }

    fn cross_rec(
        &mut self,
        left: RcId,
        right: RcId,
        d: IndicatorVector,
        q: usize,
        op: &Composition,
        memo: &mut HashMap<(RcId, RcId, IndicatorVector), RcId>,
    ) -> Result<RcId, CharTreeError> {
        if let Some(&id) = memo.get(&(left, right, d)) {
            return Ok(id);
        }
        let a = &self.nodes[left.index()];
        let b = &self.nodes[right.index()];
        let ord = rename_combine(&a.ord, &b.ord, d, op)?;
        let mut points = Vec::new();
        let mut subsets = Vec::new();
        if d.len() + ord.set_count() < q {
            if a.set_children.is_empty() || b.set_children.is_empty() {
                return Err(CharTreeError::DepthBudget);
            }
            let (a_points, a_sets) = (a.point_children.clone(), a.set_children.clone());
            let (b_points, b_sets) = (b.point_children.clone(), b.set_children.clone());
            let d_left = d.push(Side::Left)?;
            for &u in a_points.iter() {
                points.push(self.cross_rec(u, right, d_left, q, op, memo)?);
            }
            let d_right = d.push(Side::Right)?;
            for &u in b_points.iter() {
                points.push(self.cross_rec(left, u, d_right, q, op, memo)?);
            }
            for &u1 in a_sets.iter() {
                for &u2 in b_sets.iter() {
                    subsets.push(self.cross_rec(u1, u2, d, q, op, memo)?);
                }
            }
        }
        let id = self.intern(ord, points, subsets);
        memo.insert((left, right, d), id);
        Ok(id)
    }

    /// `RC^q` of the graph generated by `tree`, built bottom-up.
    pub fn from_parse_tree(&mut self, tree: &ParseTree, q: usize) -> Result<RcId, CharTreeError> {
        if tree.width() != self.width {
            return Err(CharTreeError::WidthMismatch);
        }
        let leaf = self.leaf(q)?;
        let mut ids: Vec<RcId> = vec![leaf; tree.len()];
        for (i, node) in tree.nodes().iter().enumerate() {
            if let ParseNode::Compose { op, left, right } = *node {
                ids[i] = self.cross_product(ids[left], ids[right], q, &op, IndicatorVector::EMPTY)?;
            }
        }
        Ok(ids[tree.root()])
    }

    /// Number of distinct nodes reachable from `root`.
    pub fn reachable_count(&self, root: RcId) -> usize {
        let mut seen = hashbrown::HashSet::new();
        let mut stack = vec![root];
        seen.insert(root);
        while let Some(id) = stack.pop() {
            for c in self.nodes[id.index()].children() {
                if seen.insert(c) {
                    stack.push(c);
                }
            }
        }
        seen.len()
    }

    /// Number of nodes of the tree rooted at `root` with shared subtrees
    /// counted once per occurrence (saturating).
    pub fn tree_size(&self, root: RcId) -> u128 {
        let mut size: HashMap<RcId, u128> = HashMap::new();
        // iterative post-order
        let mut stack = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if size.contains_key(&id) {
                continue;
            }
            let node = &self.nodes[id.index()];
            if expanded {
                let s = node
                    .children()
                    .fold(1u128, |acc, c| acc.saturating_add(size[&c]));
                size.insert(id, s);
            } else {
                stack.push((id, true));
                for c in node.children() {
                    if !size.contains_key(&c) {
                        stack.push((c, false));
                    }
                }
            }
        }
        size[&root]
    }

    /// Depth of the tree rooted at `root` (a single node has depth 0).
    pub fn depth(&self, root: RcId) -> usize {
        let mut d = 0;
        let mut id = root;
        loop {
            let node = &self.nodes[id.index()];
            match node.children().next() {
                Some(c) => {
                    d += 1;
                    id = c;
                }
                None => return d,
            }
        }
    }
}
