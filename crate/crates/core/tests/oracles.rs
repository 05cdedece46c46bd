mod common;

use std::collections::BTreeSet;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rwmso_core::chartree::{rename_combine, FullCharTree, IndicatorVector, Side};
use rwmso_core::games::{game_on_full_tree, game_on_structure, game_on_tree, ModelChecker};
use rwmso_core::rankdec::{cut_rank, decomposition_width, exact_rankwidth};
use rwmso_core::structures::Subspace;
use rwmso_core::*;

fn explicit_family(family: Family, n: usize) -> Structure {
    let mut edges = Vec::new();
    match family {
        Family::Path => edges.extend((1..n).map(|v| (v - 1, v))),
        Family::Cycle => {
            edges.extend((1..n).map(|v| (v - 1, v)));
            edges.push((n - 1, 0));
        }
        Family::Complete => {
            for u in 0..n {
                edges.extend((u + 1..n).map(|v| (u, v)));
            }
        }
        Family::Star => edges.extend((1..n).map(|v| (0, v))),
        Family::CographUnion | Family::CographJoin => {
            // halves of a vertex range are joined at alternating depths
            fn rec(lo: usize, n: usize, join: bool, edges: &mut Vec<(usize, usize)>) {
                if n == 1 {
                    return;
                }
                let k = n - n / 2;
                rec(lo, k, !join, edges);
                rec(lo + k, n - k, !join, edges);
                if join {
                    for u in lo..lo + k {
                        edges.extend((lo + k..lo + n).map(|v| (u, v)));
                    }
                }
            }
            rec(0, n, family == Family::CographJoin, &mut edges);
        }
    }
    graph_from_edges(n, &edges)
}

#[test]
fn family_trees_generate_their_graphs() {
    for family in Family::ALL {
        for n in family.min_size()..=7 {
            let tree = family_tree(family, n).unwrap();
            assert_eq!(tree.leaf_count(), n);
            assert_eq!(tree.len(), 2 * n - 1);
            let g = tree.generate_graph();
            let want = explicit_family(family, n);
            assert!(isomorphic_unlabeled(&g, &want), "{} n={n}", family.name());
        }
    }
    // edge counts at a size too large for the permutation check
    let n = 40;
    let edges = |f| family_tree(f, n).unwrap().generate_graph().edge_count();
    assert_eq!(edges(Family::Complete), n * (n - 1) / 2);
    assert_eq!(edges(Family::Path), n - 1);
    assert_eq!(edges(Family::Cycle), n);
    assert_eq!(edges(Family::Star), n - 1);
}

#[test]
fn family_graphs_have_small_rankwidth() {
    for family in Family::ALL {
        for n in family.min_size()..=7 {
            let g = family_tree(family, n).unwrap().generate_graph();
            let (w, d) = exact_rankwidth(&g).unwrap();
            assert!(w <= family.width(), "{} n={n} width {w}", family.name());
            assert_eq!(decomposition_width(&g, &d).unwrap(), w);
        }
    }
}

/// Linear orders give upper bounds on rankwidth and balanced cuts give
/// lower bounds.
#[test]
fn exact_rankwidth_at_most_linear_orders() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let n = rng.gen_range(3..=6);
        let g = random_graph(&mut rng, n, 1);
        let (w, _) = exact_rankwidth(&g).unwrap();
        let mut best = usize::MAX;
        for p in permutations(n) {
            let mut worst = 0;
            for k in 1..n {
                let y = VertexSet::from_elements(n, p[..k].iter().copied());
                worst = worst.max(cut_rank(&g, &y));
            }
            best = best.min(worst);
        }
        assert!(w <= best);
        // every subcubic tree has an edge leaving between a third and two
        // thirds of the leaves on each side
        let lower = (1u64..(1 << n) - 1)
            .filter(|m| {
                let k = m.count_ones() as usize;
                3 * k >= n && 3 * k <= 2 * n
            })
            .map(|m| cut_rank(&g, &VertexSet::from_mask(n, m)))
            .min()
            .unwrap();
        assert!(w >= lower, "width {w} below balanced-cut bound {lower}");
    }
}

/// No edge between `X` and `Y` in the join exactly when the label
/// subspaces are orthogonal.
#[test]
fn join_edges_and_orthogonal_subspaces() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for t in 1..=3 {
        let rels = if t <= 2 { all_relabelings(t) } else { (0..20).map(|_| random_relabeling(&mut rng, t)).collect() };
        for _ in 0..40 {
            let n1 = rng.gen_range(1..=3);
            let n2 = rng.gen_range(1..=3);
            let g1 = random_graph(&mut rng, n1, t);
            let g2 = random_graph(&mut rng, n2, t);
            for g in &rels {
                let joined = g1.join(&g2.relabel(g).unwrap()).unwrap();
                for xm in 1u64..1 << n1 {
                    for ym in 1u64..1 << n2 {
                        let x = VertexSet::from_mask(n1, xm);
                        let y = VertexSet::from_mask(n2, ym);
                        let edge = x.iter().any(|u| y.iter().any(|v| joined.has_edge(u, n1 + v)));
                        let sx = g1.generated_subspace(&x);
                        let sy = g2.generated_subspace(&y).map(g).unwrap();
                        assert_eq!(!edge, sx.orthogonal(&sy).unwrap());
                    }
                }
            }
        }
    }
    let e1 = Subspace::new(2, &[LabelVec::unit(1)]);
    let e2 = Subspace::new(2, &[LabelVec::unit(2)]);
    assert!(e1.orthogonal(&e2).unwrap());
    assert!(!e1.orthogonal(&e1).unwrap());
}

/// A composed graph with a point sequence that repeats elements: the
/// combined ordered structure equals the ordered structure read directly
/// off the composition.
#[test]
fn ordered_structure_of_a_composition() {
    // left: vertices 0..5 (a1..a5); right: two vertices (a6, a7)
    let mut left = Structure::from_edges(5, 2, &[(0, 1), (1, 4), (3, 4)]).unwrap();
    left.set_label(4, LabelVec::from_labels([1])).unwrap();
    left.set_label(0, LabelVec::from_labels([2])).unwrap();
    let mut right = Structure::from_edges(2, 2, &[]).unwrap();
    right.set_label(0, LabelVec::from_labels([1])).unwrap();
    right.set_label(1, LabelVec::from_labels([1, 2])).unwrap();
    let op = Composition::new(
        Relabeling::identity(2),
        Relabeling::from_images(2, &[&[1], &[]]).unwrap(),
        Relabeling::from_images(2, &[&[2], &[1]]).unwrap(),
    )
    .unwrap();
    let composed = left.compose(&right, &op).unwrap();
    // a5 a6 a7 a7 a5 in composed numbering
    let c = [4, 5, 6, 6, 4];
    let sets = [VertexSet::from_elements(7, [4, 6])];
    let direct = composed.ordered_induced(&c, &sets).unwrap();
    assert_eq!(direct.positions(), &[0, 1, 2, 2, 0]);
    assert_eq!(direct.position_representatives(), vec![1, 2, 3, 3, 1]);

    let l_ord = left.ordered_induced(&[4, 4], &[VertexSet::from_elements(5, [4])]).unwrap();
    let r_ord = right.ordered_induced(&[0, 1, 1], &[VertexSet::from_elements(2, [1])]).unwrap();
    let d = IndicatorVector::from_entries(&[
        (Side::Left, 1),
        (Side::Right, 1),
        (Side::Right, 2),
        (Side::Right, 3),
        (Side::Left, 2),
    ])
    .unwrap();
    assert_eq!(IndicatorVector::of(&c, |&v| Some(if v < 5 { Side::Left } else { Side::Right })).unwrap(), d);
    assert_eq!(rename_combine(&l_ord, &r_ord, d, &op).unwrap(), direct);
}

/// Canonical form of a full characteristic tree: ordered structure plus the
/// sets of canonical forms of the point and set children.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Canon {
    ord: String,
    points: BTreeSet<Canon>,
    sets: BTreeSet<Canon>,
}

fn canon(t: &FullCharTree) -> Canon {
    Canon {
        ord: format!("{:?}", t.ordered()),
        points: t.point_children.iter().map(canon).collect(),
        sets: t.set_children.iter().map(canon).collect(),
    }
}

#[test]
fn two_element_structure_merges() {
    let a = Structure::new(2, 0).unwrap();
    let full = FullCharTree::build(&a, 2, &[], &[]).unwrap();
    assert_eq!(full.point_children.len(), 2);
    assert_eq!(full.set_children.len(), 4);
    // choosing a1 or a2 first gives the same subtree; so do the sets {a1}, {a2}
    assert_eq!(canon(&full.point_children[0]), canon(&full.point_children[1]));
    assert_eq!(canon(&full.set_children[0b01]), canon(&full.set_children[0b10]));
    let distinct_points: BTreeSet<Canon> = full.point_children.iter().map(canon).collect();
    let distinct_sets: BTreeSet<Canon> = full.set_children.iter().map(canon).collect();
    assert_eq!(distinct_points.len(), 1);
    assert_eq!(distinct_sets.len(), 3);

    let mut store = CharTreeStore::new(0);
    let root = store.direct(&a, 2, &[], &[]).unwrap();
    let node = store.node(root);
    assert_eq!(node.point_children().len(), distinct_points.len());
    assert_eq!(node.set_children().len(), distinct_sets.len());
}

#[test]
fn reduced_tree_sizes_match_full_tree_merge() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let n = rng.gen_range(0..=3);
        let t = rng.gen_range(1..=2);
        let a = random_graph(&mut rng, n, t);
        let q = rng.gen_range(0..=2);
        let full = FullCharTree::build(&a, q, &[], &[]).unwrap();
        fn count(c: &Canon) -> u128 {
            1 + c.points.iter().chain(&c.sets).map(count).sum::<u128>()
        }
        let mut store = CharTreeStore::new(t);
        let root = store.direct(&a, q, &[], &[]).unwrap();
        assert_eq!(store.tree_size(root), count(&canon(&full)));
    }
}

#[test]
fn isomorphic_presentations_share_ids() {
    for t in 1..=2 {
        let mut store = CharTreeStore::new(t);
        for n in 0..=3 {
            for g in all_graphs(n, t) {
                for q in 0..=2 {
                    let id = store.direct(&g, q, &[], &[]).unwrap();
                    for p in permutations(n) {
                        assert_eq!(store.direct(&permute(&g, &p), q, &[], &[]).unwrap(), id);
                    }
                }
            }
        }
    }
}

#[test]
fn k2_and_two_vertices_differ_at_depth_two() {
    let k2 = graph_from_edges(2, &[(0, 1)]);
    let e2 = graph_from_edges(2, &[]);
    let mut store = CharTreeStore::new(1);
    let a = store.direct(&k2, 2, &[], &[]).unwrap();
    let b = store.direct(&e2, 2, &[], &[]).unwrap();
    assert_ne!(a, b);
    // at depth one a single element cannot see an edge
    assert_eq!(store.direct(&k2, 1, &[], &[]).unwrap(), store.direct(&e2, 1, &[], &[]).unwrap());
    let phi = parse_formula("Ex x. Ex y. adj(x,y)", 1).unwrap();
    assert!(game_on_tree(&store, a, &phi, &[], &[]).unwrap());
    assert!(!game_on_tree(&store, b, &phi, &[], &[]).unwrap());
}

#[test]
fn model_check_agrees_with_evaluate_on_families() {
    let sentences = catalog::sentences();
    for family in Family::ALL {
        let mut checker = ModelChecker::new(family.width());
        for n in family.min_size()..=8 {
            let tree = family_tree(family, n).unwrap();
            let g = tree.generate_graph();
            for (name, phi) in &sentences {
                let want = evaluate(&g, phi, &Assignment::new()).unwrap();
                let got = checker.check(&tree, phi).unwrap().holds;
                assert_eq!(got, want, "{} n={n} {name}", family.name());
            }
        }
    }
}

#[test]
fn full_tree_game_agrees_with_oracle_on_open_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (name, phi) in catalog::open_formulas() {
        if phi.contains_set_equality() {
            continue;
        }
        let free = phi.free_variables();
        let q = free.objects.len() + free.sets.len() + phi.quantifier_rank();
        let nnf = phi.to_nnf();
        for _ in 0..10 {
            let n = rng.gen_range(1..=3);
            let a = random_graph(&mut rng, n, 2);
            let c: Vec<usize> = free.objects.iter().map(|_| rng.gen_range(0..n)).collect();
            let sets: Vec<VertexSet> = free.sets.iter().map(|_| VertexSet::from_mask(n, rng.gen_range(0..1 << n))).collect();
            let mut alpha = Assignment::new();
            for (x, &v) in free.objects.iter().zip(&c) {
                alpha = alpha.with_object(x, v);
            }
            for (x, s) in free.sets.iter().zip(&sets) {
                alpha = alpha.with_set(x, s.clone());
            }
            let want = evaluate(&a, &phi, &alpha).unwrap();
            assert_eq!(game_on_structure(&a, &nnf, &alpha).unwrap(), want, "{name}");
            let full = FullCharTree::build(&a, q, &c, &sets).unwrap();
            assert_eq!(game_on_full_tree(&full, &nnf, &free.objects, &free.sets).unwrap(), want, "{name}");
            let mut store = CharTreeStore::new(2);
            let root = store.direct(&a, q, &c, &sets).unwrap();
            assert_eq!(game_on_tree(&store, root, &nnf, &free.objects, &free.sets).unwrap(), want, "{name}");
        }
    }
}

#[test]
fn linemso_matches_brute_force_on_paths_and_cycles() {
    let fixtures = [
        ("Ax x. Ax y. (!adj(x,y) | !X(x) | !X(y))", Direction::Max),
        ("Ax x. (X(x) | (Ex y. (X(y) & adj(x,y))))", Direction::Min),
        ("Ax x. Ax y. (!adj(x,y) | X(x) | X(y))", Direction::Min),
    ];
    for family in [Family::Path, Family::Cycle, Family::CographJoin] {
        for n in family.min_size()..=6 {
            let tree = family_tree(family, n).unwrap();
            let g = tree.generate_graph();
            for (text, dir) in fixtures {
                let phi = parse_formula(text, 2).unwrap();
                let mut best: Option<i128> = None;
                for mask in 0u64..1 << n {
                    let alpha = Assignment::new().with_set("X", VertexSet::from_mask(n, mask));
                    if evaluate(&g, &phi, &alpha).unwrap() {
                        let v = mask.count_ones() as i128;
                        best = Some(match (best, dir) {
                            (None, _) => v,
                            (Some(b), Direction::Max) => b.max(v),
                            (Some(b), Direction::Min) => b.min(v),
                        });
                    }
                }
                let sol = solve_linemso(&tree, &LinEmsoProblem::new(phi.clone(), vec![1], dir)).unwrap();
                assert_eq!(Some(sol.value), best, "{} n={n} {text}", family.name());
                let alpha = Assignment::new().with_set("X", sol.witness[0].clone());
                assert!(evaluate(&g, &phi, &alpha).unwrap());
                assert_eq!(sol.witness[0].count() as i128, sol.value);
            }
        }
    }
}

#[test]
fn linemso_two_weighted_sets() {
    // a partition of the vertices into two independent sets, counting
    // the first set double
    let phi = parse_formula(
        "(Ax x. (X(x) | Y(x)) & !(X(x) & Y(x))) & (Ax x. Ax y. (!adj(x,y) | ((!X(x) | !X(y)) & (!Y(x) | !Y(y)))))",
        2,
    )
    .unwrap();
    let tree = family_tree(Family::Path, 5).unwrap();
    let problem = LinEmsoProblem::with_variables(phi, vec!["X".into(), "Y".into()], vec![2, 1], Direction::Max);
    let sol = solve_linemso(&tree, &problem).unwrap();
    // the larger side of P5 has three vertices
    assert_eq!(sol.value, 2 * 3 + 2);
    assert_eq!(sol.witness[0].count(), 3);
}
