//! Indicator vectors and the renaming combination of two ordered structures.

use alloc::vec::Vec;
use arrayvec::ArrayVec;
use core::fmt;

use super::CharTreeError;
use crate::structures::{Composition, OrderedStructure, MAX_DEPTH};

/// Longest indicator vector supported.
pub const MAX_INDICATOR_LEN: usize = 32;

/// Which operand of a composition an element comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// `1` or `2`.
    pub fn number(self) -> usize {
        match self {
            Side::Left => 1,
            Side::Right => 2,
        }
    }
}

/// For a sequence `c̄` over the universe of `A1 ⊗ A2`, entry `j` records the
/// operand holding `c_j`; the index within that operand is implied by
/// counting earlier entries with the same side.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndicatorVector {
    len: u8,
    right: u32,
}

impl IndicatorVector {
    pub const EMPTY: IndicatorVector = IndicatorVector { len: 0, right: 0 };

    /// Builds `d̄` from `(side, k)` pairs with 1-based `k`.
    pub fn from_entries(entries: &[(Side, usize)]) -> Result<IndicatorVector, CharTreeError> {
        let mut d = IndicatorVector::EMPTY;
        let mut counts = [0usize; 2];
        for &(side, k) in entries {
            let c = &mut counts[side.number() - 1];
            *c += 1;
            if k != *c {
                return Err(CharTreeError::Indicator("indices must count up from 1 per side"));
            }
            d = d.push(side)?;
        }
        Ok(d)
    }

    /// `ind(A1, A2, c̄)` for a sequence whose entries are classified by
    /// `side_of`.
    pub fn of<T>(
        c: &[T],
        mut side_of: impl FnMut(&T) -> Option<Side>,
    ) -> Result<IndicatorVector, CharTreeError> {
        let mut d = IndicatorVector::EMPTY;
        for x in c {
            let side = side_of(x).ok_or(CharTreeError::Indicator("entry belongs to neither operand"))?;
            d = d.push(side)?;
        }
        Ok(d)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn side(&self, j: usize) -> Side {
        if self.right >> j & 1 == 1 {
            Side::Right
        } else {
            Side::Left
        }
    }

    /// Number of entries on `side`.
    pub fn count(&self, side: Side) -> usize {
        let right = self.right.count_ones() as usize;
        match side {
            Side::Left => self.len() - right,
            Side::Right => right,
        }
    }

    /// `d̄` extended by the next element of `side`.
    pub fn push(self, side: Side) -> Result<IndicatorVector, CharTreeError> {
        if self.len() == MAX_INDICATOR_LEN {
            return Err(CharTreeError::Indicator("indicator vector too long"));
        }
        let bit = u32::from(side == Side::Right) << self.len;
        Ok(IndicatorVector {
            len: self.len + 1,
            right: self.right | bit,
        })
    }

    /// The `(side, k)` pairs.
    pub fn entries(&self) -> Vec<(Side, usize)> {
        let mut counts = [0usize; 2];
        (0..self.len())
            .map(|j| {
                let s = self.side(j);
                counts[s.number() - 1] += 1;
                (s, counts[s.number() - 1])
            })
            .collect()
    }
}

impl fmt::Debug for IndicatorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "ε");
        }
        for (s, k) in self.entries() {
            write!(f, "({},{})", s.number(), k)?;
        }
        Ok(())
    }
}

/// `O1 ⊗_d̄ O2`: the ordered structure of `A1 ⊗[g, f1, f2] A2` on the merged
/// sequence described by `d`, computed from the two ordered structures alone.
///
/// Same-side relations are copied, cross edges follow the composition's
/// join rule on the stored labels, labels are mapped by `f1`/`f2` and the
/// set traces are merged pairwise.
pub fn rename_combine(
    left: &OrderedStructure,
    right: &OrderedStructure,
    d: IndicatorVector,
    op: &Composition,
) -> Result<OrderedStructure, CharTreeError> {
    let width = left.width();
    if right.width() != width || op.width() != width {
        return Err(CharTreeError::WidthMismatch);
    }
    if d.count(Side::Left) != left.point_count() || d.count(Side::Right) != right.point_count() {
        return Err(CharTreeError::Indicator("indicator vector does not match the operands"));
    }
    if d.len() > MAX_DEPTH {
        return Err(CharTreeError::Indicator("combined sequence too long"));
    }
    if left.set_count() != right.set_count() {
        return Err(CharTreeError::SetCountMismatch);
    }
    // new class -> (side, old class); per-side old class -> new class
    let mut origin: ArrayVec<(Side, u8), MAX_DEPTH> = ArrayVec::new();
    let mut renamed = [[u8::MAX; MAX_DEPTH]; 2];
    let mut positions = ArrayVec::new();
    let mut counts = [0usize; 2];
    for j in 0..d.len() {
        let side = d.side(j);
        let s = side.number() - 1;
        let o = if s == 0 { left } else { right };
        let old = o.class_of(counts[s]);
        counts[s] += 1;
        if renamed[s][old] == u8::MAX {
            renamed[s][old] = origin.len() as u8;
            origin.push((side, old as u8));
        }
        positions.push(renamed[s][old]);
    }
    let mut labels = ArrayVec::new();
    let mut adjacency = ArrayVec::new();
    for &(side, old) in &origin {
        let (o, f) = match side {
            Side::Left => (left, &op.f1),
            Side::Right => (right, &op.f2),
        };
        labels.push(f.apply(o.label(old as usize)));
        let mut row = 0u8;
        for (b, &(side2, old2)) in origin.iter().enumerate() {
            let edge = match (side, side2) {
                (Side::Left, Side::Left) => left.adjacent(old as usize, old2 as usize),
                (Side::Right, Side::Right) => right.adjacent(old as usize, old2 as usize),
                (Side::Left, Side::Right) => {
                    op.joins(left.label(old as usize), right.label(old2 as usize))
                }
                (Side::Right, Side::Left) => {
                    op.joins(left.label(old2 as usize), right.label(old as usize))
                }
            };
            if edge {
                row |= 1 << b;
            }
        }
        adjacency.push(row);
    }
    let traces = (0..left.set_count())
        .map(|j| {
            origin
                .iter()
                .enumerate()
                .filter(|(_, &(side, old))| match side {
                    Side::Left => left.in_trace(j, old as usize),
                    Side::Right => right.in_trace(j, old as usize),
                })
                .fold(0u8, |acc, (b, _)| acc | 1 << b)
        })
        .collect();
    Ok(OrderedStructure::from_raw(width, positions, adjacency, labels, traces))
}
