#![allow(dead_code)]

use rand::Rng;
use rwmso_core::{Composition, LabelVec, ParseTree, ParseTreeBuilder, Relabeling, Structure};

/// Every `t`-labeled graph on `n` vertices.
pub fn all_graphs(n: usize, t: usize) -> Vec<Structure> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for edges in 0u64..1 << pairs.len() {
        for labels in 0u64..1 << (n * t) {
            let mut g = Structure::new(n, t).unwrap();
            for (k, &(u, v)) in pairs.iter().enumerate() {
                if edges >> k & 1 == 1 {
                    g.add_edge(u, v).unwrap();
                }
            }
            for v in 0..n {
                let bits = (labels >> (v * t)) & ((1 << t) - 1);
                g.set_label(v, LabelVec(bits as u16)).unwrap();
            }
            out.push(g);
        }
    }
    out
}

pub fn random_graph(rng: &mut impl Rng, n: usize, t: usize) -> Structure {
    let mut g = Structure::new(n, t).unwrap();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                g.add_edge(u, v).unwrap();
            }
        }
        g.set_label(u, LabelVec(rng.gen_range(0..1u16 << t))).unwrap();
    }
    g
}

pub fn random_relabeling(rng: &mut impl Rng, t: usize) -> Relabeling {
    let rows: Vec<LabelVec> = (0..t).map(|_| LabelVec(rng.gen_range(0..1u16 << t))).collect();
    Relabeling::from_rows(t, &rows).unwrap()
}

pub fn random_composition(rng: &mut impl Rng, t: usize) -> Composition {
    Composition::new(
        random_relabeling(rng, t),
        random_relabeling(rng, t),
        random_relabeling(rng, t),
    )
    .unwrap()
}

/// Every relabeling of width `t`.
pub fn all_relabelings(t: usize) -> Vec<Relabeling> {
    (0u32..1 << (t * t))
        .map(|bits| {
            let rows: Vec<LabelVec> = (0..t)
                .map(|i| LabelVec(((bits >> (i * t)) & ((1 << t) - 1)) as u16))
                .collect();
            Relabeling::from_rows(t, &rows).unwrap()
        })
        .collect()
}

pub fn all_compositions(t: usize) -> Vec<Composition> {
    let rs = all_relabelings(t);
    let mut out = Vec::new();
    for &g in &rs {
        for &f1 in &rs {
            for &f2 in &rs {
                out.push(Composition::new(g, f1, f2).unwrap());
            }
        }
    }
    out
}

/// A parse tree with `leaves` leaves, random shape and random operators.
pub fn random_tree(rng: &mut impl Rng, t: usize, leaves: usize) -> ParseTree {
    fn build(rng: &mut impl Rng, b: &mut ParseTreeBuilder, t: usize, n: usize) -> usize {
        if n == 1 {
            return b.leaf();
        }
        let k = rng.gen_range(1..n);
        let l = build(rng, b, t, k);
        let r = build(rng, b, t, n - k);
        let op = random_composition(rng, t);
        b.compose(op, l, r).unwrap()
    }
    let mut b = ParseTreeBuilder::new(t).unwrap();
    let root = build(rng, &mut b, t, leaves);
    b.finish(root).unwrap()
}

/// Binary tree shapes with `n` leaves, as nested pairs over leaf markers.
#[derive(Clone, Debug)]
pub enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

pub fn shapes(n: usize) -> Vec<Shape> {
    if n == 1 {
        return vec![Shape::Leaf];
    }
    let mut out = Vec::new();
    for k in 1..n {
        for l in shapes(k) {
            for r in shapes(n - k) {
                out.push(Shape::Node(Box::new(l.clone()), Box::new(r)));
            }
        }
    }
    out
}

pub fn internal_count(s: &Shape) -> usize {
    match s {
        Shape::Leaf => 0,
        Shape::Node(l, r) => 1 + internal_count(l) + internal_count(r),
    }
}

/// The parse tree of `shape` whose internal nodes, in post-order, carry
/// `ops`.
pub fn tree_from_shape(shape: &Shape, t: usize, ops: &[Composition]) -> ParseTree {
    fn build(s: &Shape, b: &mut ParseTreeBuilder, ops: &[Composition], next: &mut usize) -> usize {
        match s {
            Shape::Leaf => b.leaf(),
            Shape::Node(l, r) => {
                let l = build(l, b, ops, next);
                let r = build(r, b, ops, next);
                let op = ops[*next];
                *next += 1;
                b.compose(op, l, r).unwrap()
            }
        }
    }
    let mut b = ParseTreeBuilder::new(t).unwrap();
    let mut next = 0;
    let root = build(shape, &mut b, ops, &mut next);
    b.finish(root).unwrap()
}

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// `g` with vertex `v` renamed to `perm[v]`.
pub fn permute(g: &Structure, perm: &[usize]) -> Structure {
    let mut h = Structure::new(g.len(), g.width()).unwrap();
    for (u, v) in g.edges() {
        h.add_edge(perm[u], perm[v]).unwrap();
    }
    for (v, &image) in perm.iter().enumerate() {
        h.set_label(image, g.label(v)).unwrap();
    }
    h
}

/// Isomorphism of unlabeled graphs by trying every bijection.
pub fn isomorphic_unlabeled(a: &Structure, b: &Structure) -> bool {
    if a.len() != b.len() || a.edge_count() != b.edge_count() {
        return false;
    }
    permutations(a.len()).iter().any(|p| {
        a.edges().all(|(u, v)| b.has_edge(p[u], p[v]))
    })
}

pub fn graph_from_edges(n: usize, edges: &[(usize, usize)]) -> Structure {
    Structure::from_edges(n, 1, edges).unwrap()
}
