//! Cut-rank, the width of a rank-decomposition, and an exhaustive rankwidth
//! search for very small graphs.

use alloc::vec;
use alloc::vec::Vec;
use hashbrown::HashMap;
use thiserror::Error;

use crate::bits::{rank_of_rows, VertexSet};
use crate::structures::Structure;

/// Largest graph [`exact_rankwidth`] accepts.
pub const EXACT_RANKWIDTH_MAX: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RankDecError {
    #[error("exact rankwidth supports at most {EXACT_RANKWIDTH_MAX} vertices, got {0}")]
    TooLarge(usize),
    #[error("invalid decomposition: {0}")]
    Invalid(&'static str),
}

/// `ρ(Y)`: the GF(2) rank of the adjacency matrix between `Y` and its
/// complement.
pub fn cut_rank(g: &Structure, y: &VertexSet) -> usize {
    let n = g.len();
    let mut rest = VertexSet::new(n);
    for v in 0..n {
        if !y.contains(v) {
            rest.insert(v);
        }
    }
    let rows = y
        .iter()
        .filter(|&v| v < n)
        .map(|u| {
            g.adjacency()
                .row(u)
                .iter()
                .zip(rest.words())
                .map(|(a, b)| a & b)
                .collect()
        })
        .collect();
    rank_of_rows(rows)
}

/// A branch-decomposition `(T, μ)` of the vertex set: an unrooted tree given
/// by adjacency lists and the tree node `leaf_of[v]` of each vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchDecomposition {
    pub adjacency: Vec<Vec<usize>>,
    pub leaf_of: Vec<usize>,
}

impl BranchDecomposition {
    /// The single-edge decomposition of a two-vertex graph, or the one-node
    /// tree for graphs with at most one vertex.
    pub fn trivial(n: usize) -> BranchDecomposition {
        match n {
            0 => BranchDecomposition {
                adjacency: Vec::new(),
                leaf_of: Vec::new(),
            },
            1 => BranchDecomposition {
                adjacency: vec![Vec::new()],
                leaf_of: vec![0],
            },
            _ => BranchDecomposition {
                adjacency: vec![vec![1], vec![0]],
                leaf_of: vec![0, 1],
            },
        }
    }

    /// A caterpillar: the vertices hang off a spine in order `0..n`.
    pub fn caterpillar(n: usize) -> BranchDecomposition {
        if n <= 2 {
            return BranchDecomposition::trivial(n);
        }
        // leaves 0..n, spine nodes n..2n-2 (spine k carries vertex k+1)
        let mut d = BranchDecomposition {
            adjacency: vec![Vec::new(); 2 * n - 2],
            leaf_of: (0..n).collect(),
        };
        let spine = |k: usize| n + k;
        let connect = |a: usize, b: usize, d: &mut BranchDecomposition| {
            d.adjacency[a].push(b);
            d.adjacency[b].push(a);
        };
        connect(0, spine(0), &mut d);
        connect(n - 1, spine(n - 3), &mut d);
        for k in 0..n - 2 {
            connect(k + 1, spine(k), &mut d);
            if k + 1 < n - 2 {
                connect(spine(k), spine(k + 1), &mut d);
            }
        }
        d
    }

    fn validate(&self, n: usize) -> Result<(), RankDecError> {
        let nodes = self.adjacency.len();
        if self.leaf_of.len() != n {
            return Err(RankDecError::Invalid("leaf map does not cover the vertex set"));
        }
        if n == 0 {
            return Ok(());
        }
        let edges: usize = self.adjacency.iter().map(Vec::len).sum();
        if edges != 2 * (nodes - 1) {
            return Err(RankDecError::Invalid("not a tree"));
        }
        for (a, list) in self.adjacency.iter().enumerate() {
            if list.len() > 3 {
                return Err(RankDecError::Invalid("node of degree above three"));
            }
            for &b in list {
                if b >= nodes || b == a || !self.adjacency[b].contains(&a) {
                    return Err(RankDecError::Invalid("adjacency not symmetric"));
                }
            }
        }
        let mut seen = vec![false; nodes];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(a) = stack.pop() {
            for &b in &self.adjacency[a] {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(RankDecError::Invalid("not connected"));
        }
        let mut mapped = vec![false; nodes];
        for &l in &self.leaf_of {
            if l >= nodes || mapped[l] {
                return Err(RankDecError::Invalid("leaf map not injective"));
            }
            if self.adjacency[l].len() > 1 {
                return Err(RankDecError::Invalid("vertex mapped to an inner node"));
            }
            mapped[l] = true;
        }
        if (0..nodes).any(|a| self.adjacency[a].len() <= 1 && !mapped[a]) {
            return Err(RankDecError::Invalid("unmapped leaf"));
        }
        Ok(())
    }

    /// For every tree edge `(a, b)` with `a < b`, the set of vertices on
    /// `a`'s side.
    pub fn edge_cuts(&self) -> Vec<((usize, usize), VertexSet)> {
        let n = self.leaf_of.len();
        let mut vertex_at = vec![None; self.adjacency.len()];
        for (v, &l) in self.leaf_of.iter().enumerate() {
            vertex_at[l] = Some(v);
        }
        let mut out = Vec::new();
        for (a, list) in self.adjacency.iter().enumerate() {
            for &b in list {
                if a > b {
                    continue;
                }
                let mut side = VertexSet::new(n);
                let mut stack = vec![(a, b)];
                while let Some((x, from)) = stack.pop() {
                    if let Some(v) = vertex_at[x] {
                        side.insert(v);
                    }
                    for &y in &self.adjacency[x] {
                        if y != from {
                            stack.push((y, x));
                        }
                    }
                }
                out.push(((a, b), side));
            }
        }
        out
    }
}

/// The width of a decomposition: the largest cut-rank over its edges.
pub fn decomposition_width(g: &Structure, d: &BranchDecomposition) -> Result<usize, RankDecError> {
    d.validate(g.len())?;
    Ok(d
        .edge_cuts()
        .iter()
        .map(|(_, side)| cut_rank(g, side))
        .max()
        .unwrap_or(0))
}

/// Rank of the adjacency matrix between two disjoint vertex masks.
fn mask_rank(rows: &[u8], y: u8, z: u8) -> usize {
    let mut basis: Vec<u8> = Vec::new();
    for (u, &row) in rows.iter().enumerate().take(8) {
        if y >> u & 1 == 0 {
            continue;
        }
        let mut r = row & z;
        for &b in &basis {
            r = r.min(r ^ b);
        }
        if r != 0 {
            basis.push(r);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

struct Search<'a> {
    rows: &'a [u8],
    n: usize,
    memo: HashMap<(u8, u8), usize>,
    best: usize,
    best_tree: Option<Vec<(usize, usize)>>,
}

impl Search<'_> {
    fn rank(&mut self, y: u8, z: u8) -> usize {
        let key = if y < z { (y, z) } else { (z, y) };
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let r = mask_rank(self.rows, y, z);
        self.memo.insert(key, r);
        r
    }

    /// Width of a partial tree whose leaves `0..k` are the tree nodes `0..k`.
    fn width(&mut self, edges: &[(usize, usize)], k: usize) -> usize {
        let mut adj = vec![Vec::new(); 2 * self.n];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let all: u8 = ((1u16 << k) - 1) as u8;
        let mut w = 0;
        for &(a, b) in edges {
            let mut side = 0u8;
            let mut stack = vec![(a, b)];
            while let Some((x, from)) = stack.pop() {
                if x < k {
                    side |= 1 << x;
                }
                for &y in &adj[x] {
                    if y != from {
                        stack.push((y, x));
                    }
                }
            }
            w = w.max(self.rank(side, all & !side));
        }
        w
    }

    /// Leaves are tree nodes `0..n`; inner nodes are numbered from `n`.
    fn extend(&mut self, edges: &mut Vec<(usize, usize)>, k: usize, next_inner: usize) {
        let w = self.width(edges, k);
        if w >= self.best {
            // adding leaves never lowers a cut-rank
            return;
        }
        if k == self.n {
            self.best = w;
            self.best_tree = Some(edges.clone());
            return;
        }
        for i in 0..edges.len() {
            let (a, b) = edges[i];
            edges[i] = (a, next_inner);
            edges.push((next_inner, b));
            edges.push((next_inner, k));
            self.extend(edges, k + 1, next_inner + 1);
            edges.pop();
            edges.pop();
            edges[i] = (a, b);
        }
    }
}

/// The rankwidth of `g` with a decomposition attaining it, by exhaustive
/// search over all leaf-labeled cubic trees. Graphs with at most one vertex
/// have width 0.
pub fn exact_rankwidth(g: &Structure) -> Result<(usize, BranchDecomposition), RankDecError> {
    let n = g.len();
    if n > EXACT_RANKWIDTH_MAX {
        return Err(RankDecError::TooLarge(n));
    }
    if n <= 2 {
        let d = BranchDecomposition::trivial(n);
        let w = decomposition_width(g, &d)?;
        return Ok((w, d));
    }
    let rows: Vec<u8> = (0..8)
        .map(|u| {
            if u < n {
                g.neighbors(u).fold(0u8, |acc, v| acc | 1 << v)
            } else {
                0
            }
        })
        .collect();
    let mut search = Search {
        rows: &rows,
        n,
        memo: HashMap::new(),
        best: usize::MAX,
        best_tree: None,
    };
    let mut edges = vec![(0, 1)];
    // the inner node ids start after the n leaf ids
    search.extend(&mut edges, 2, n);
    let tree = search.best_tree.expect("some tree always exists");
    let mut adjacency = vec![Vec::new(); 2 * n - 2];
    for (a, b) in tree {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    let d = BranchDecomposition {
        adjacency,
        leaf_of: (0..n).collect(),
    };
    Ok((search.best, d))
}
