//! Bit-packed vectors and matrices over GF(2).
//!
//! Labels of a `t`-labeled graph are vectors of GF(2)^t and are packed into a
//! single [`LabelVec`] word (bit `i - 1` holds label `i`). Vertex sets and
//! adjacency rows are packed into `u64` words.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Largest supported label width `t`.
pub const MAX_LABEL_WIDTH: usize = 16;

/// A vector of GF(2)^t, i.e. a subset of the labels `{1, .., t}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LabelVec(pub u16);

impl LabelVec {
    pub const ZERO: LabelVec = LabelVec(0);

    /// The unit vector for a single 1-based label.
    pub fn unit(label: usize) -> LabelVec {
        debug_assert!((1..=MAX_LABEL_WIDTH).contains(&label));
        LabelVec(1 << (label - 1))
    }

    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> LabelVec {
        labels
            .into_iter()
            .fold(LabelVec::ZERO, |acc, l| LabelVec(acc.0 | LabelVec::unit(l).0))
    }

    /// Whether the 1-based `label` is present.
    pub fn contains(self, label: usize) -> bool {
        (1..=MAX_LABEL_WIDTH).contains(&label) && self.0 >> (label - 1) & 1 == 1
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Scalar product over GF(2): parity of the intersection size.
    pub fn dot(self, other: LabelVec) -> bool {
        (self.0 & other.0).count_ones() & 1 == 1
    }

    /// Whether every set bit lies below `width`.
    pub fn fits(self, width: usize) -> bool {
        width >= 16 || self.0 >> width == 0
    }

    /// Iterator over the 1-based labels present.
    pub fn labels(self) -> impl Iterator<Item = usize> {
        (0..16).filter(move |i| self.0 >> i & 1 == 1).map(|i| i + 1)
    }

    /// Renders as `t` characters, label 1 first.
    pub fn to_bit_string(self, width: usize) -> alloc::string::String {
        (1..=width)
            .map(|l| if self.contains(l) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for LabelVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.labels().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// Reduced row echelon basis of the span of `vectors`, sorted by decreasing pivot.
pub fn span_basis<I: IntoIterator<Item = LabelVec>>(vectors: I) -> Vec<LabelVec> {
    let mut basis: Vec<u16> = Vec::new();
    for v in vectors {
        let mut x = v.0;
        for &b in &basis {
            let pivot = 15 - b.leading_zeros();
            if x >> pivot & 1 == 1 {
                x ^= b;
            }
        }
        if x != 0 {
            // keep the basis sorted by pivot so the reduction above stays valid
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    // back-substitute to reduced form
    for i in 0..basis.len() {
        let pivot = 15 - basis[i].leading_zeros();
        for j in 0..basis.len() {
            if j != i && basis[j] >> pivot & 1 == 1 {
                basis[j] ^= basis[i];
            }
        }
    }
    basis.sort_unstable_by(|a, b| b.cmp(a));
    basis.into_iter().map(LabelVec).collect()
}

/// A set of vertices `0..n`, packed into words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    len: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new(len: usize) -> VertexSet {
        VertexSet {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> VertexSet {
        let mut s = VertexSet::new(len);
        for v in 0..len {
            s.insert(v);
        }
        s
    }

    /// Builds the set from the low `len` bits of `mask` (`len <= 64`).
    pub fn from_mask(len: usize, mask: u64) -> VertexSet {
        assert!(len <= 64, "from_mask supports universes of at most 64 elements");
        let mut s = VertexSet::new(len);
        if len > 0 {
            let keep = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
            s.words[0] = mask & keep;
        }
        s
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(len: usize, elements: I) -> VertexSet {
        let mut s = VertexSet::new(len);
        for v in elements {
            s.insert(v);
        }
        s
    }

    /// Size of the universe the set lives in.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.len, "vertex {v} out of range 0..{}", self.len);
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        if v < self.len {
            self.words[v / 64] &= !(1 << (v % 64));
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.len && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    pub fn complement(&self) -> VertexSet {
        let mut out = VertexSet::new(self.len);
        for v in 0..self.len {
            if !self.contains(v) {
                out.insert(v);
            }
        }
        out
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A dense GF(2) matrix with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> BitMatrix {
        let stride = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / 64];
        if value {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        rank_of_rows((0..self.rows).map(|r| self.row(r).to_vec()).collect())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", if self.get(r, c) { '1' } else { '0' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Rank over GF(2) of a list of equally long packed rows.
pub fn rank_of_rows(rows: Vec<Vec<u64>>) -> usize {
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for mut row in rows {
        for (pivot, b) in &basis {
            if row[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (x, y) in row.iter_mut().zip(b) {
                    *x ^= y;
                }
            }
        }
        if let Some((i, &w)) = row.iter().enumerate().find(|(_, &w)| w != 0) {
            let pivot = i * 64 + w.trailing_zeros() as usize;
            basis.push((pivot, row));
        }
    }
    basis.len()
}
