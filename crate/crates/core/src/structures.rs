//! Graphs as structures over `{E, L1, .., Lt}` and the labeling algebra of
//! `t`-labeled graphs: relabelings, the labeled join and labeled composition.

use alloc::vec::Vec;
use arrayvec::ArrayVec;
use core::fmt;
use thiserror::Error;

use crate::bits::{span_basis, BitMatrix, LabelVec, VertexSet, MAX_LABEL_WIDTH};

/// Longest element or set sequence an ordered structure can carry; this caps
/// the depth of characteristic trees.
pub const MAX_DEPTH: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("label width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("label width {0} exceeds the supported maximum {MAX_LABEL_WIDTH}")]
    WidthTooLarge(usize),
    #[error("element {element} out of range for a universe of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("label {label:?} does not fit width {width}")]
    LabelTooWide { label: LabelVec, width: usize },
    #[error("sequence of length {0} exceeds the maximum depth {MAX_DEPTH}")]
    TooLong(usize),
    #[error("set vector over a universe of size {found}, expected {expected}")]
    SetUniverseMismatch { expected: usize, found: usize },
    #[error("malformed ordered structure: {0}")]
    MalformedOrdered(&'static str),
}

fn check_width(width: usize) -> Result<(), StructureError> {
    if width > MAX_LABEL_WIDTH {
        Err(StructureError::WidthTooLarge(width))
    } else {
        Ok(())
    }
}

/// A `t`-relabeling: a linear map on GF(2)^t given by its matrix `T_f`.
///
/// Row `i` of the matrix is the image of label `i + 1`; applying the map to a
/// label vector is the row-vector product `lab × T_f`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relabeling {
    width: u8,
    rows: [u16; MAX_LABEL_WIDTH],
}

impl Relabeling {
    pub fn identity(width: usize) -> Relabeling {
        let mut rows = [0; MAX_LABEL_WIDTH];
        for (i, r) in rows.iter_mut().enumerate().take(width) {
            *r = 1 << i;
        }
        Relabeling {
            width: width as u8,
            rows,
        }
    }

    pub fn zero(width: usize) -> Relabeling {
        Relabeling {
            width: width as u8,
            rows: [0; MAX_LABEL_WIDTH],
        }
    }

    /// Builds the map from its matrix rows.
    pub fn from_rows(width: usize, rows: &[LabelVec]) -> Result<Relabeling, StructureError> {
        check_width(width)?;
        if rows.len() != width {
            return Err(StructureError::WidthMismatch {
                expected: width,
                found: rows.len(),
            });
        }
        let mut out = Relabeling::zero(width);
        for (i, r) in rows.iter().enumerate() {
            if !r.fits(width) {
                return Err(StructureError::LabelTooWide { label: *r, width });
            }
            out.rows[i] = r.0;
        }
        Ok(out)
    }

    /// The relabeling sending label `i` to the set `images[i - 1]`.
    pub fn from_images(width: usize, images: &[&[usize]]) -> Result<Relabeling, StructureError> {
        let rows: Vec<LabelVec> = images
            .iter()
            .map(|img| LabelVec::from_labels(img.iter().copied()))
            .collect();
        Relabeling::from_rows(width, &rows)
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn row(&self, i: usize) -> LabelVec {
        LabelVec(self.rows[i])
    }

    pub fn rows(&self) -> impl Iterator<Item = LabelVec> + '_ {
        self.rows[..self.width()].iter().map(|&r| LabelVec(r))
    }

    /// `lab × T_f`: the XOR of the rows selected by `lab`.
    pub fn apply(&self, lab: LabelVec) -> LabelVec {
        let mut out = 0u16;
        let mut bits = lab.0;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            out ^= self.rows[i];
            bits &= bits - 1;
        }
        LabelVec(out)
    }

    /// Matrix product `T_self × T_then`, i.e. first `self`, then `then`.
    pub fn then(&self, then: &Relabeling) -> Result<Relabeling, StructureError> {
        same_width(self.width(), then.width())?;
        let mut out = Relabeling::zero(self.width());
        for i in 0..self.width() {
            out.rows[i] = then.apply(self.row(i)).0;
        }
        Ok(out)
    }

    /// Embeds the map into a larger width; the new labels map to zero.
    pub fn widen(&self, width: usize) -> Result<Relabeling, StructureError> {
        check_width(width)?;
        if width < self.width() {
            return Err(StructureError::WidthMismatch {
                expected: self.width(),
                found: width,
            });
        }
        let mut out = *self;
        out.width = width as u8;
        Ok(out)
    }
}

impl fmt::Debug for Relabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.width();
        let mut list = f.debug_list();
        for r in self.rows() {
            list.entry(&r.to_bit_string(w));
        }
        list.finish()
    }
}

fn same_width(expected: usize, found: usize) -> Result<(), StructureError> {
    if expected == found {
        Ok(())
    } else {
        Err(StructureError::WidthMismatch { expected, found })
    }
}

/// The labeled composition operator `⊗[g, f1, f2]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Composition {
    pub g: Relabeling,
    pub f1: Relabeling,
    pub f2: Relabeling,
}

impl Composition {
    pub fn new(g: Relabeling, f1: Relabeling, f2: Relabeling) -> Result<Self, StructureError> {
        same_width(g.width(), f1.width())?;
        same_width(g.width(), f2.width())?;
        Ok(Composition { g, f1, f2 })
    }

    pub fn identity(width: usize) -> Composition {
        let id = Relabeling::identity(width);
        Composition { g: id, f1: id, f2: id }
    }

    pub fn width(&self) -> usize {
        self.g.width()
    }

    /// Whether vertices labeled `left` (first operand) and `right` (second
    /// operand) get joined: `left • (right × T_g) = 1`.
    pub fn joins(&self, left: LabelVec, right: LabelVec) -> bool {
        left.dot(self.g.apply(right))
    }

    pub fn widen(&self, width: usize) -> Result<Composition, StructureError> {
        Ok(Composition {
            g: self.g.widen(width)?,
            f1: self.f1.widen(width)?,
            f2: self.f2.widen(width)?,
        })
    }
}

/// A finite graph with a `t`-labeling, viewed as a structure over
/// `{E, L1, .., Lt}` with universe `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    width: u8,
    adjacency: BitMatrix,
    labels: Vec<LabelVec>,
}

impl Structure {
    /// `n` isolated vertices with empty labels.
    pub fn new(n: usize, width: usize) -> Result<Structure, StructureError> {
        check_width(width)?;
        Ok(Structure {
            width: width as u8,
            adjacency: BitMatrix::new(n, n),
            labels: alloc::vec![LabelVec::ZERO; n],
        })
    }

    /// The one-vertex graph created by a parse-tree leaf, labeled `{1}`.
    pub fn vertex(width: usize) -> Result<Structure, StructureError> {
        if width == 0 {
            return Err(StructureError::WidthMismatch {
                expected: 1,
                found: 0,
            });
        }
        let mut s = Structure::new(1, width)?;
        s.labels[0] = LabelVec::unit(1);
        Ok(s)
    }

    pub fn from_edges(
        n: usize,
        width: usize,
        edges: &[(usize, usize)],
    ) -> Result<Structure, StructureError> {
        let mut s = Structure::new(n, width)?;
        for &(u, v) in edges {
            s.add_edge(u, v)?;
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    fn check(&self, v: usize) -> Result<(), StructureError> {
        if v < self.len() {
            Ok(())
        } else {
            Err(StructureError::ElementOutOfRange {
                element: v,
                size: self.len(),
            })
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), StructureError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(StructureError::SelfLoop(u));
        }
        self.adjacency.set(u, v, true);
        self.adjacency.set(v, u, true);
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.len() && v < self.len() && self.adjacency.get(u, v)
    }

    pub fn label(&self, v: usize) -> LabelVec {
        self.labels[v]
    }

    pub fn labels(&self) -> &[LabelVec] {
        &self.labels
    }

    pub fn set_label(&mut self, v: usize, label: LabelVec) -> Result<(), StructureError> {
        self.check(v)?;
        if !label.fits(self.width()) {
            return Err(StructureError::LabelTooWide {
                label,
                width: self.width(),
            });
        }
        self.labels[v] = label;
        Ok(())
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adjacency
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |u| {
            ((u + 1)..self.len())
                .filter(move |&v| self.adjacency.get(u, v))
                .map(move |v| (u, v))
        })
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&u| self.adjacency.get(v, u))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    /// `f(G) = (G, f ∘ lab)`.
    pub fn relabel(&self, f: &Relabeling) -> Result<Structure, StructureError> {
        same_width(self.width(), f.width())?;
        let mut out = self.clone();
        for l in &mut out.labels {
            *l = f.apply(*l);
        }
        Ok(out)
    }

    /// The same graph over a larger label width.
    pub fn widen(&self, width: usize) -> Result<Structure, StructureError> {
        check_width(width)?;
        if width < self.width() {
            return Err(StructureError::WidthMismatch {
                expected: self.width(),
                found: width,
            });
        }
        let mut out = self.clone();
        out.width = width as u8;
        Ok(out)
    }

    /// Disjoint union with the vertices of `other` numbered after ours.
    fn disjoint_union(&self, other: &Structure) -> Structure {
        let n1 = self.len();
        let n = n1 + other.len();
        let mut s = Structure {
            width: self.width,
            adjacency: BitMatrix::new(n, n),
            labels: alloc::vec![LabelVec::ZERO; n],
        };
        for (u, v) in self.edges() {
            s.adjacency.set(u, v, true);
            s.adjacency.set(v, u, true);
        }
        for (u, v) in other.edges() {
            s.adjacency.set(n1 + u, n1 + v, true);
            s.adjacency.set(n1 + v, n1 + u, true);
        }
        s
    }

    /// The labeled join `G1 ⊗ G2`: disjoint union plus every edge `{u, v}`
    /// with `lab1(u) • lab2(v) = 1`. The result is unlabeled.
    pub fn join(&self, other: &Structure) -> Result<Structure, StructureError> {
        same_width(self.width(), other.width())?;
        let mut s = self.disjoint_union(other);
        let n1 = self.len();
        for u in 0..n1 {
            for v in 0..other.len() {
                if self.labels[u].dot(other.labels[v]) {
                    s.adjacency.set(u, n1 + v, true);
                    s.adjacency.set(n1 + v, u, true);
                }
            }
        }
        Ok(s)
    }

    /// The labeled composition `G1 ⊗[g, f1, f2] G2`.
    pub fn compose(&self, other: &Structure, op: &Composition) -> Result<Structure, StructureError> {
        same_width(self.width(), op.width())?;
        let mut s = self.join(&other.relabel(&op.g)?)?;
        let n1 = self.len();
        for u in 0..n1 {
            s.labels[u] = op.f1.apply(self.labels[u]);
        }
        for v in 0..other.len() {
            s.labels[n1 + v] = op.f2.apply(other.labels[v]);
        }
        Ok(s)
    }

    /// The substructure induced by the distinct entries of `c`, with its
    /// elements numbered in increasing order of their ids here.
    pub fn induced(&self, c: &[usize]) -> Result<Structure, StructureError> {
        for &v in c {
            self.check(v)?;
        }
        let mut elems: Vec<usize> = c.to_vec();
        elems.sort_unstable();
        elems.dedup();
        Ok(self.induced_on(&elems))
    }

    pub(crate) fn induced_on(&self, elems: &[usize]) -> Structure {
        let k = elems.len();
        let mut s = Structure {
            width: self.width,
            adjacency: BitMatrix::new(k, k),
            labels: elems.iter().map(|&v| self.labels[v]).collect(),
        };
        for i in 0..k {
            for j in 0..k {
                if self.adjacency.get(elems[i], elems[j]) {
                    s.adjacency.set(i, j, true);
                }
            }
        }
        s
    }

    /// `Ord(A, c̄, C̄)`.
    pub fn ordered_induced(
        &self,
        c: &[usize],
        sets: &[VertexSet],
    ) -> Result<OrderedStructure, StructureError> {
        if c.len() > MAX_DEPTH {
            return Err(StructureError::TooLong(c.len()));
        }
        if sets.len() > MAX_DEPTH {
            return Err(StructureError::TooLong(sets.len()));
        }
        for &v in c {
            self.check(v)?;
        }
        for s in sets {
            if s.universe() != self.len() {
                return Err(StructureError::SetUniverseMismatch {
                    expected: self.len(),
                    found: s.universe(),
                });
            }
        }
        let mut elems: ArrayVec<usize, MAX_DEPTH> = ArrayVec::new();
        let mut positions = ArrayVec::new();
        for &v in c {
            let k = match elems.iter().position(|&e| e == v) {
                Some(k) => k,
                None => {
                    elems.push(v);
                    elems.len() - 1
                }
            };
            positions.push(k as u8);
        }
        let mut adjacency = ArrayVec::new();
        let mut labels = ArrayVec::new();
        for &u in &elems {
            let mut row = 0u8;
            for (j, &v) in elems.iter().enumerate() {
                if self.adjacency.get(u, v) {
                    row |= 1 << j;
                }
            }
            adjacency.push(row);
            labels.push(self.labels[u]);
        }
        let traces = sets
            .iter()
            .map(|s| {
                elems
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| s.contains(e))
                    .fold(0u8, |acc, (j, _)| acc | 1 << j)
            })
            .collect();
        Ok(OrderedStructure {
            width: self.width,
            positions,
            adjacency,
            labels,
            traces,
        })
    }

    /// Basis of the subspace spanned by the labels of `x`.
    pub fn generated_subspace(&self, x: &VertexSet) -> Subspace {
        Subspace {
            width: self.width(),
            basis: span_basis(x.iter().filter(|&v| v < self.len()).map(|v| self.labels[v])),
        }
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Structure")
            .field("n", &self.len())
            .field("t", &self.width)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .field("labels", &self.labels)
            .finish()
    }
}

/// A subspace of GF(2)^t, kept as a reduced row echelon basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    pub width: usize,
    pub basis: Vec<LabelVec>,
}

impl Subspace {
    pub fn new(width: usize, generators: &[LabelVec]) -> Subspace {
        Subspace {
            width,
            basis: span_basis(generators.iter().copied()),
        }
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Whether every pair of basis vectors has scalar product zero.
    pub fn orthogonal(&self, other: &Subspace) -> Result<bool, StructureError> {
        same_width(self.width, other.width)?;
        Ok(self
            .basis
            .iter()
            .all(|a| other.basis.iter().all(|b| !a.dot(*b))))
    }

    /// The image of the subspace under a relabeling.
    pub fn map(&self, f: &Relabeling) -> Result<Subspace, StructureError> {
        same_width(self.width, f.width())?;
        Ok(Subspace {
            width: self.width,
            basis: span_basis(self.basis.iter().map(|&b| f.apply(b))),
        })
    }
}

/// `Ord(A, c̄, C̄)`: the structure induced by `c̄` with each element renamed
/// to the class of positions holding it, plus the positions and set traces.
///
/// Classes are numbered `0..k` in order of first appearance in `c̄`; class
/// `i` is the one whose minimum 1-based position index is
/// [`OrderedStructure::representative`]. Equal ordered structures are equal
/// as values, which is what interning relies on.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedStructure {
    width: u8,
    positions: ArrayVec<u8, MAX_DEPTH>,
    adjacency: ArrayVec<u8, MAX_DEPTH>,
    labels: ArrayVec<LabelVec, MAX_DEPTH>,
    traces: ArrayVec<u8, MAX_DEPTH>,
}

impl OrderedStructure {
    /// The ordered structure with no positions and `p` empty traces.
    pub fn empty(width: usize, p: usize) -> OrderedStructure {
        OrderedStructure {
            width: width as u8,
            positions: ArrayVec::new(),
            adjacency: ArrayVec::new(),
            labels: ArrayVec::new(),
            traces: core::iter::repeat_n(0, p).collect(),
        }
    }

    /// Assembles an ordered structure from explicit parts, checking that the
    /// classes are numbered canonically and the adjacency is a loop-free
    /// symmetric relation.
    pub fn from_parts(
        width: usize,
        positions: &[u8],
        adjacency: &[u8],
        labels: &[LabelVec],
        traces: &[u8],
    ) -> Result<OrderedStructure, StructureError> {
        check_width(width)?;
        if positions.len() > MAX_DEPTH || traces.len() > MAX_DEPTH {
            return Err(StructureError::TooLong(positions.len().max(traces.len())));
        }
        let k = adjacency.len();
        if labels.len() != k {
            return Err(StructureError::MalformedOrdered("labels and adjacency differ in length"));
        }
        let mut next = 0u8;
        for &p in positions {
            if p > next {
                return Err(StructureError::MalformedOrdered("classes not in first-appearance order"));
            }
            if p == next {
                next += 1;
            }
        }
        if next as usize != k {
            return Err(StructureError::MalformedOrdered("class count does not match positions"));
        }
        let mask = if k == 8 { 0xff } else { (1u8 << k) - 1 };
        for i in 0..k {
            if adjacency[i] & !mask != 0 || adjacency[i] >> i & 1 == 1 {
                return Err(StructureError::MalformedOrdered("adjacency out of range or loop"));
            }
            for j in 0..k {
                if (adjacency[i] >> j & 1) != (adjacency[j] >> i & 1) {
                    return Err(StructureError::MalformedOrdered("adjacency not symmetric"));
                }
            }
            if !labels[i].fits(width) {
                return Err(StructureError::LabelTooWide {
                    label: labels[i],
                    width,
                });
            }
        }
        if traces.iter().any(|&t| t & !mask != 0) {
            return Err(StructureError::MalformedOrdered("trace outside universe"));
        }
        Ok(OrderedStructure {
            width: width as u8,
            positions: positions.iter().copied().collect(),
            adjacency: adjacency.iter().copied().collect(),
            labels: labels.iter().copied().collect(),
            traces: traces.iter().copied().collect(),
        })
    }

    /// Assembles without validation; callers keep the classes canonical.
    pub(crate) fn from_raw(
        width: usize,
        positions: ArrayVec<u8, MAX_DEPTH>,
        adjacency: ArrayVec<u8, MAX_DEPTH>,
        labels: ArrayVec<LabelVec, MAX_DEPTH>,
        traces: ArrayVec<u8, MAX_DEPTH>,
    ) -> OrderedStructure {
        OrderedStructure {
            width: width as u8,
            positions,
            adjacency,
            labels,
            traces,
        }
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    /// Number of chosen elements `m`.
    pub fn point_count(&self) -> usize {
        self.positions.len()
    }

    /// Number of chosen sets `p`.
    pub fn set_count(&self) -> usize {
        self.traces.len()
    }

    /// Size of the universe (number of position classes).
    pub fn universe_size(&self) -> usize {
        self.adjacency.len()
    }

    /// Class of 1-based position `i` is `class_of(i - 1)`.
    pub fn class_of(&self, position: usize) -> usize {
        self.positions[position] as usize
    }

    pub fn positions(&self) -> &[u8] {
        &self.positions
    }

    /// The minimum 1-based position index of a class.
    pub fn representative(&self, class: usize) -> usize {
        self.positions
            .iter()
            .position(|&p| p as usize == class)
            .map(|i| i + 1)
            .expect("every class occurs among the positions")
    }

    /// `h(1) .. h(m)` with classes written as their representatives.
    pub fn position_representatives(&self) -> Vec<usize> {
        self.positions
            .iter()
            .map(|&p| self.representative(p as usize))
            .collect()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a] >> b & 1 == 1
    }

    pub fn adjacency_rows(&self) -> &[u8] {
        &self.adjacency
    }

    pub fn label(&self, class: usize) -> LabelVec {
        self.labels[class]
    }

    pub fn labels(&self) -> &[LabelVec] {
        &self.labels
    }

    /// Trace `j` as a bitmask over classes.
    pub fn trace(&self, j: usize) -> u8 {
        self.traces[j]
    }

    pub fn traces(&self) -> &[u8] {
        &self.traces
    }

    pub fn in_trace(&self, j: usize, class: usize) -> bool {
        self.traces[j] >> class & 1 == 1
    }

    /// The universe as a plain structure (class `i` becomes element `i`).
    pub fn to_structure(&self) -> Structure {
        let k = self.universe_size();
        let mut s = Structure {
            width: self.width,
            adjacency: BitMatrix::new(k, k),
            labels: self.labels.to_vec(),
        };
        for i in 0..k {
            for j in 0..k {
                if self.adjacent(i, j) {
                    s.adjacency.set(i, j, true);
                }
            }
        }
        s
    }
}

impl fmt::Display for OrderedStructure {
    /// `pos=1,2,3,3,1 adj=1-2 lab=1:10,2:01,3:00 tr={1,3};{}` with classes
    /// named by their representatives.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let reps: Vec<usize> = (0..self.universe_size())
            .map(|c| self.representative(c))
            .collect();
        write!(f, "pos=")?;
        for (i, &p) in self.positions.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", reps[p as usize])?;
        }
        write!(f, " adj=")?;
        let mut first = true;
        for a in 0..reps.len() {
            for b in (a + 1)..reps.len() {
                if self.adjacent(a, b) {
                    if !first {
                        write!(f, ",")?;
                    }
                    first = false;
                    write!(f, "{}-{}", reps[a], reps[b])?;
                }
            }
        }
        write!(f, " lab=")?;
        for (c, l) in self.labels.iter().enumerate() {
            if c > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}:{}", reps[c], l.to_bit_string(self.width()))?;
        }
        write!(f, " tr=")?;
        for (j, &t) in self.traces.iter().enumerate() {
            if j > 0 {
                write!(f, ";")?;
            }
            write!(f, "{{")?;
            let mut first = true;
            for (c, rep) in reps.iter().enumerate() {
                if t >> c & 1 == 1 {
                    if !first {
                        write!(f, ",")?;
                    }
                    first = false;
                    write!(f, "{rep}")?;
                }
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for OrderedStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ord({self})")
    }
}

/// Whether `pi` (a list of `(a, b)` pairs) is a partial isomorphism from
/// `(a, abar)` to `(b, bbar)`: injective, preserving edges and labels in both
/// directions, and respecting membership in each pair of sets.
pub fn is_partial_isomorphism(
    a: &Structure,
    b: &Structure,
    abar: &[VertexSet],
    bbar: &[VertexSet],
    pi: &[(usize, usize)],
) -> bool {
    if abar.len() != bbar.len() || a.width() != b.width() {
        return false;
    }
    for (i, &(x, y)) in pi.iter().enumerate() {
        if x >= a.len() || y >= b.len() {
            return false;
        }
        for &(x2, y2) in &pi[..i] {
            if (x == x2) != (y == y2) {
                return false;
            }
        }
    }
    for &(x, y) in pi {
        if a.label(x) != b.label(y) {
            return false;
        }
        if abar.iter().zip(bbar).any(|(sa, sb)| sa.contains(x) != sb.contains(y)) {
            return false;
        }
        for &(x2, y2) in pi {
            if a.has_edge(x, x2) != b.has_edge(y, y2) {
                return false;
            }
        }
    }
    true
}
