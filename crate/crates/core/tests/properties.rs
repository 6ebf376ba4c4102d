use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::test_runner::Config;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use graphsym::amenability::{amenable_iso, check_amenable, IsoAnswer, Violation};
use graphsym::cell_structure::{build_cell_graph, CellTree};
use graphsym::generators::{generate, random_amenable, random_spec, validate_spec, GraphSpec, ShapeParams};
use graphsym::oracle::{self, OracleLimits, RootedTree};
use graphsym::refinement::{cr_iso_test, is_equitable, refine, stable_partition, CrOutcome, Partition};
use graphsym::symmetry::{analyze, dist_number, fix_number, leg_dist_count, leg_dist_count_exact, CountMode};
use graphsym::Graph;

fn lim() -> OracleLimits {
    OracleLimits::uniform(12)
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::from_edge_list(n, &edges).unwrap()
        })
    })
}

fn with_perm(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph_strategy(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn amenable_instance(max_n: usize) -> impl Strategy<Value = (Graph, Partition, GraphSpec)> {
    any::<u64>().prop_map(move |seed| {
        let target = 1 + (seed % max_n as u64) as usize;
        random_amenable(target, &ShapeParams::default(), seed).expect("generator budget")
    })
}

/// Rooted canonical string of a sized tree; minimized over all roots it is an
/// unrooted invariant.
fn sized_canon(sizes: &[usize], parent: &[Option<usize>]) -> String {
    let n = sizes.len();
    let mut adj = vec![Vec::new(); n];
    for (v, p) in parent.iter().enumerate() {
        if let Some(p) = *p {
            adj[v].push(p);
            adj[p].push(v);
        }
    }
    fn rooted(v: usize, from: usize, sizes: &[usize], adj: &[Vec<usize>]) -> String {
        let mut kids: Vec<String> = adj[v].iter().filter(|&&w| w != from).map(|&w| rooted(w, v, sizes, adj)).collect();
        kids.sort();
        format!("{}({})", sizes[v], kids.concat())
    }
    (0..n).map(|r| rooted(r, usize::MAX, sizes, &adj)).min().unwrap()
}

/// A tree edge under a one-vertex cell is a complete (or empty) bipartite
/// graph, hence isotropic: the recognizer sees the spec tree cut there.
fn expected_pieces(sizes: &[usize], parent: &[Option<usize>]) -> Vec<String> {
    let cut: Vec<Option<usize>> = parent.iter().map(|p| p.filter(|&q| sizes[q] > 1)).collect();
    let mut piece = vec![usize::MAX; sizes.len()];
    let mut roots = Vec::new();
    for v in 0..sizes.len() {
        piece[v] = match cut[v] {
            None => {
                roots.push(v);
                roots.len() - 1
            }
            Some(q) => piece[q],
        };
    }
    (0..roots.len())
        .map(|k| {
            let members: Vec<usize> = (0..sizes.len()).filter(|&v| piece[v] == k).collect();
            let local = |v: usize| members.iter().position(|&w| w == v);
            let sz: Vec<usize> = members.iter().map(|&v| sizes[v]).collect();
            let par: Vec<Option<usize>> = members.iter().map(|&v| cut[v].and_then(local)).collect();
            sized_canon(&sz, &par)
        })
        .collect()
}

proptest! {
    #![proptest_config(Config::with_cases(128))]

    #[test]
    fn constructed_graphs_validate(g in graph_strategy(20)) {
        prop_assert!(g.validate().is_ok());
        prop_assert_eq!(g.vertices().map(|v| g.degree(v)).sum::<usize>(), 2 * g.m());
    }

    #[test]
    fn graph6_round_trip(g in graph_strategy(62)) {
        let text = g.to_graph6();
        prop_assert_eq!(Graph::from_graph6(&text).unwrap(), g.clone());
        prop_assert_eq!(Graph::from_graph6(&text).unwrap().to_graph6(), text);
    }

    #[test]
    fn complement_is_involution(g in graph_strategy(16)) {
        let c = g.complement();
        prop_assert_eq!(c.m() + g.m(), g.n() * (g.n() - 1) / 2);
        prop_assert_eq!(c.complement(), g);
    }

    #[test]
    fn full_induced_subgraph_is_identity(g in graph_strategy(16)) {
        let all: Vec<usize> = g.vertices().collect();
        prop_assert_eq!(g.induced_subgraph(&all).unwrap().graph, g);
    }

    #[test]
    fn stable_partition_is_equitable_and_canonical((g, perm) in with_perm(24)) {
        let p = stable_partition(&g);
        prop_assert!(is_equitable(&g, &p).unwrap());
        // The coarsest equitable partition is unique, so relabeling maps it cell for cell.
        let q = stable_partition(&g.relabel(&perm));
        let mapped: Vec<usize> = (0..g.n()).map(|v| perm[v]).collect();
        for cell in p.cells() {
            let images: Vec<usize> = cell.iter().map(|&v| mapped[v]).collect();
            let id = q.cell_of(images[0]);
            prop_assert!(images.iter().all(|&w| q.cell_of(w) == id));
            prop_assert_eq!(q.cell(id).len(), cell.len());
        }
    }

    #[test]
    fn refine_refines_and_is_idempotent(g in graph_strategy(20), seed in any::<u64>()) {
        let colors: Vec<u64> = (0..g.n() as u64).map(|v| (v ^ seed) % 3).collect();
        let start = Partition::from_colors(&colors);
        let p = refine(&g, &start).unwrap();
        prop_assert!(p.refines(&start));
        prop_assert!(is_equitable(&g, &p).unwrap());
        prop_assert_eq!(refine(&g, &p).unwrap(), p.clone());
        prop_assert!(p.refines(&stable_partition(&g)));
    }

    #[test]
    fn cr_cannot_separate_relabelings((g, perm) in with_perm(20)) {
        prop_assert_eq!(cr_iso_test(&g, &g.relabel(&perm)).outcome, CrOutcome::CrEquivalent);
    }

    #[test]
    fn cell_graph_double_counting(g in graph_strategy(20)) {
        let p = stable_partition(&g);
        let cg = build_cell_graph(&g, &p).unwrap();
        for i in 0..cg.num_cells() {
            for j in 0..cg.num_cells() {
                if i != j {
                    prop_assert_eq!(cg.sizes[i] * cg.d(i, j), cg.sizes[j] * cg.d(j, i));
                }
            }
        }
    }

    #[test]
    fn verdict_is_permutation_invariant((g, perm) in with_perm(16)) {
        let class = |v: &graphsym::AmenabilityVerdict| match v.violation() {
            None => 'Y',
            Some(Violation::CondA { .. }) => 'A',
            Some(Violation::CondB { .. }) => 'B',
            Some(Violation::CondC { .. }) => 'C',
            Some(Violation::CondD { .. }) => 'D',
        };
        prop_assert_eq!(class(&check_amenable(&g)), class(&check_amenable(&g.relabel(&perm))));
    }

    #[test]
    fn symmetry_is_permutation_invariant((g, _, _) in amenable_instance(40), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..g.n()).collect();
        rand::seq::SliceRandom::shuffle(&mut perm[..], &mut ChaCha8Rng::seed_from_u64(seed));
        let h = g.relabel(&perm);
        prop_assert_eq!(dist_number(&g).unwrap(), dist_number(&h).unwrap());
        prop_assert_eq!(fix_number(&g).unwrap(), fix_number(&h).unwrap());
    }

    #[test]
    fn amenable_iso_is_exact((g, _, _) in amenable_instance(8), h in graph_strategy(8), seed in any::<u64>(), mode in 0..3u8) {
        // Mix unrelated graphs with relabelings and near-relabelings of g.
        let h = if mode == 0 || g.n() < 2 {
            h
        } else {
            let mut perm: Vec<usize> = (0..g.n()).collect();
            rand::seq::SliceRandom::shuffle(&mut perm[..], &mut ChaCha8Rng::seed_from_u64(seed));
            let r = g.relabel(&perm);
            if mode == 1 { r } else { flip_edge(&r, (seed % r.n() as u64) as usize) }
        };
        let truth = oracle::isomorphic_bf(&g, &h, lim()).unwrap();
        let answer = amenable_iso(&g, &h);
        prop_assert_eq!(answer, if truth { IsoAnswer::Isomorphic } else { IsoAnswer::NotIsomorphic });
    }

    #[test]
    fn generated_graphs_are_amenable((g, p, spec) in amenable_instance(60)) {
        prop_assert!(validate_spec(&g, &p));
        let verdict = check_amenable(&g);
        let forest = verdict.forest().expect("validated instance must be amenable");
        let mut want: Vec<String> = spec.components.iter().flat_map(|c| {
            let (sizes, parent) = c.cell_tree();
            expected_pieces(&sizes, &parent)
        }).collect();
        let mut got: Vec<String> = forest.components.iter().map(|c| sized_canon(&c.tree.sizes, &c.tree.parent)).collect();
        want.sort();
        got.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn generate_is_deterministic(seed in any::<u64>()) {
        let spec = random_spec(30, &ShapeParams::default(), &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(generate(&spec, seed).unwrap(), generate(&spec, seed).unwrap());
    }

    #[test]
    fn exact_and_saturating_modes_agree((g, _, _) in amenable_instance(60)) {
        let a = analyze(&g, CountMode::Saturating).unwrap();
        let b = analyze(&g, CountMode::Exact).unwrap();
        prop_assert_eq!((a.dist_number, a.fix_number), (b.dist_number, b.fix_number));
    }

    #[test]
    fn saturation_matches_exact(sizes_seed in any::<u64>(), d_star in 1u64..=50, c in 1u64..=8) {
        let tree = random_cell_tree(sizes_seed);
        let cap = d_star + tree.vertex_count() as u64 + 1;
        let fast = leg_dist_count(&tree, c, cap).unwrap();
        let exact = leg_dist_count_exact(&tree, c);
        prop_assert_eq!(fast.at_least(d_star), exact >= BigUint::from(d_star));
        if !fast.saturated {
            prop_assert_eq!(BigUint::from(fast.value), exact);
        }
    }
}

proptest! {
    #![proptest_config(Config::with_cases(96))]

    #[test]
    fn pipeline_matches_oracle((g, _, _) in amenable_instance(12)) {
        let (d, f) = (dist_number(&g).unwrap(), fix_number(&g).unwrap());
        prop_assert_eq!(d, oracle::dist_number_bf(&g, None, lim()).unwrap());
        prop_assert_eq!(f, oracle::fix_number_bf(&g, None, lim()).unwrap());
        prop_assert!(d <= f + 1);
    }

    #[test]
    fn pipeline_matches_oracle_on_dense_specs(seed in any::<u64>()) {
        let shape = ShapeParams { complete_prob: 0.6, co_stars_prob: 0.8, join_prob: 0.5, max_root: 4, ..ShapeParams::default() };
        let (g, _, _) = random_amenable(12, &shape, seed).unwrap();
        prop_assert_eq!(dist_number(&g).unwrap(), oracle::dist_number_bf(&g, None, lim()).unwrap());
        prop_assert_eq!(fix_number(&g).unwrap(), oracle::fix_number_bf(&g, None, lim()).unwrap());
    }

    #[test]
    fn complement_pairs_share_invariants((g, _, _) in amenable_instance(12)) {
        let c = g.complement();
        if check_amenable(&c).is_amenable() {
            prop_assert_eq!(dist_number(&g).unwrap(), dist_number(&c).unwrap());
            prop_assert_eq!(fix_number(&g).unwrap(), fix_number(&c).unwrap());
        }
    }

    #[test]
    fn group_order_matches_enumeration(g in graph_strategy(8)) {
        let full = oracle::automorphisms(&g, None, lim()).unwrap();
        let chain = oracle::aut_summary(&g, None, lim()).unwrap();
        prop_assert_eq!(full.order() as u128, chain.order);
        prop_assert!(chain.generators.iter().all(|s| full.contains(s)));
    }

    #[test]
    fn rooted_tree_recursions_match_oracle(parents in rooted_tree_strategy(9), c in 1u64..=3) {
        let t = RootedTree::from_parents(parents).unwrap();
        let (g, p) = t.to_graph();
        prop_assert_eq!(oracle::tree_dist_count(&t, c), oracle::dist_count_bf(&g, Some(&p), c as usize, lim()).unwrap());
        prop_assert_eq!(oracle::tree_fix(&t), oracle::fix_number_bf(&g, Some(&p), lim()).unwrap());
    }

    #[test]
    fn forest_formulas_match_oracle(a in rooted_tree_strategy(4), b in rooted_tree_strategy(4), ra in 1usize..=3, rb in 1usize..=2) {
        let ga = RootedTree::from_parents(a).unwrap().to_graph().0;
        let gb = RootedTree::from_parents(b).unwrap().to_graph().0;
        let mut classes = vec![(ga.clone(), ra)];
        if !oracle::isomorphic_bf(&ga, &gb, lim()).unwrap() {
            classes.push((gb.clone(), rb));
        }
        let mut union = Graph::empty(0);
        for (g, r) in &classes {
            for _ in 0..*r {
                union = union.disjoint_union(g).0;
            }
        }
        prop_assume!(union.n() <= 12);
        prop_assert_eq!(oracle::forest_dist(&classes, lim()).unwrap(), oracle::dist_number_bf(&union, None, lim()).unwrap());
        prop_assert_eq!(oracle::forest_fix(&classes, lim()).unwrap(), oracle::fix_number_bf(&union, None, lim()).unwrap());
    }
}

fn rooted_tree_strategy(max_n: usize) -> impl Strategy<Value = Vec<Option<usize>>> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<prop::sample::Index>(), n - 1).prop_map(move |picks| {
            let mut parent = vec![None];
            for (i, pick) in picks.iter().enumerate() {
                parent.push(Some(pick.index(i + 1)));
            }
            parent
        })
    })
}

fn flip_edge(g: &Graph, v: usize) -> Graph {
    let w = (v + 1) % g.n();
    let mut edges: Vec<(usize, usize)> = g.edges().filter(|&e| e != (v.min(w), v.max(w))).collect();
    if !g.has_edge(v, w) {
        edges.push((v, w));
    }
    Graph::from_edge_list(g.n(), &edges).unwrap()
}

fn random_cell_tree(seed: u64) -> CellTree {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = rng.gen_range(1..=30);
    // Parents drawn from a sliding window keep the order breadth-first.
    let mut sizes = vec![rng.gen_range(1..=6usize)];
    let mut parent = vec![None];
    for i in 1..cells {
        let lo = parent.last().unwrap().unwrap_or(0);
        let p = rng.gen_range(lo..i);
        parent.push(Some(p));
        let m = if sizes[p] > 5_000 { 1 } else { rng.gen_range(1..=3) };
        sizes.push(sizes[p] * m);
    }
    CellTree::new(sizes, parent).unwrap()
}
