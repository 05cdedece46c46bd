use alloc::vec::Vec;

use super::CharTreeError;
use crate::bits::{LabelVec, VertexSet};
use crate::structures::{OrderedStructure, Structure};

/// Largest structure accepted by [`FullCharTree::build`].
pub const FULL_TREE_MAX_SIZE: usize = 3;
/// Largest depth accepted by [`FullCharTree::build`].
pub const FULL_TREE_MAX_DEPTH: usize = 3;

/// A full characteristic tree: every sequence of point and set moves up to
/// depth `q`, each node labeled with the induced substructure, the chosen
/// elements and the traces of the chosen sets on them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullCharTree {
    /// `A[c̄]`, on the distinct entries of `c̄` in increasing order.
    pub induced: Structure,
    /// The distinct entries of `c̄`, sorted; element `k` of `induced` is
    /// `universe[k]`.
    pub universe: Vec<usize>,
    /// `c̄`.
    pub elements: Vec<usize>,
    /// `C̄ ∩ c̄`.
    pub set_traces: Vec<VertexSet>,
    /// One child per element of `A`, by element id.
    pub point_children: Vec<FullCharTree>,
    /// One child per subset of `A`, by bitmask.
    pub set_children: Vec<FullCharTree>,
}

impl FullCharTree {
    pub fn build(
        a: &Structure,
        q: usize,
        c: &[usize],
        sets: &[VertexSet],
    ) -> Result<FullCharTree, CharTreeError> {
        if a.len() > FULL_TREE_MAX_SIZE || q > FULL_TREE_MAX_DEPTH {
            return Err(CharTreeError::ScaleGuard {
                size: a.len(),
                depth: q,
            });
        }
        if c.len() + sets.len() > q {
            return Err(CharTreeError::SequenceTooLong(c.len() + sets.len(), q));
        }
        // validates ids and universes
        a.ordered_induced(c, sets)?;
        let mut c = c.to_vec();
        let mut sets = sets.to_vec();
        Ok(Self::build_rec(a, q, &mut c, &mut sets))
    }

    fn build_rec(a: &Structure, q: usize, c: &mut Vec<usize>, sets: &mut Vec<VertexSet>) -> FullCharTree {
        let mut universe = c.clone();
        universe.sort_unstable();
        universe.dedup();
        let set_traces = sets
            .iter()
            .map(|s| VertexSet::from_elements(a.len(), c.iter().copied().filter(|&v| s.contains(v))))
            .collect();
        let mut point_children = Vec::new();
        let mut set_children = Vec::new();
        if c.len() + sets.len() < q {
            for v in 0..a.len() {
                c.push(v);
                point_children.push(Self::build_rec(a, q, c, sets));
                c.pop();
            }
            for mask in 0..(1u64 << a.len()) {
                sets.push(VertexSet::from_mask(a.len(), mask));
                set_children.push(Self::build_rec(a, q, c, sets));
                sets.pop();
            }
        }
        FullCharTree {
            induced: a.induced_on(&universe),
            universe,
            elements: c.clone(),
            set_traces,
            point_children,
            set_children,
        }
    }

    /// Total number of nodes.
    pub fn size(&self) -> usize {
        1 + self
            .point_children
            .iter()
            .chain(&self.set_children)
            .map(FullCharTree::size)
            .sum::<usize>()
    }

    fn slot(&self, position: usize) -> usize {
        self.universe
            .binary_search(&self.elements[position])
            .expect("every entry is in the universe")
    }

    /// Whether the elements at 0-based positions `i` and `j` are adjacent.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.induced.has_edge(self.slot(i), self.slot(j))
    }

    pub fn same_element(&self, i: usize, j: usize) -> bool {
        self.elements[i] == self.elements[j]
    }

    pub fn label_at(&self, i: usize) -> LabelVec {
        self.induced.label(self.slot(i))
    }

    /// Whether the element at position `i` lies in set `j`.
    pub fn in_set(&self, j: usize, i: usize) -> bool {
        self.set_traces[j].contains(self.elements[i])
    }

    /// The node's ordered induced structure.
    pub fn ordered(&self) -> OrderedStructure {
        let slots: Vec<usize> = (0..self.elements.len()).map(|i| self.slot(i)).collect();
        let traces: Vec<VertexSet> = self
            .set_traces
            .iter()
            .map(|t| VertexSet::from_elements(self.universe.len(), (0..self.universe.len()).filter(|&k| t.contains(self.universe[k]))))
            .collect();
        self.induced
            .ordered_induced(&slots, &traces)
            .expect("positions index the induced structure")
    }
}
