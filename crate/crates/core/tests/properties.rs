use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sidlab::automorphism::{automorphisms, canonical_form, colored_automorphisms, compose, identity, inverse, is_endomorphism};
use sidlab::bigraph::amalgamate_left;
use sidlab::checkers::{check_orbit_hypotheses, verify_rtd, DegreeProfile, ReflectiveTreeDecomposition};
use sidlab::density::{
    colored_density, density, density_brute_force, fractional_density, sinkhorn_biregularize, BigraphonTuple,
    StepBigraphon, SINKHORN_MAX_ITER, SINKHORN_TOL,
};
use sidlab::fold::{complete_to_fold, enumerate_folds, is_cut_involution, Fold};
use sidlab::fractional::ColoredFractionalBigraph;
use sidlab::percolation::{
    find_cut_percolating, find_left_cut_percolating, generated_group_is_transitive, project_to_left,
    verify_certificate, FoldPool, DEFAULT_BUDGET,
};
use sidlab::reflection::build_incidence;
use sidlab::testers::{test_strong_sidorenko, TrialConfig, Verdict};
use sidlab::{Bigraph, ColoredBigraph};

fn graph_from(v1: usize, v2: usize, mask: &[bool]) -> Bigraph {
    let left: Vec<String> = (0..v1).map(|i| format!("l{i}")).collect();
    let right: Vec<String> = (0..v2).map(|j| format!("r{j}")).collect();
    let mut edges = Vec::new();
    for i in 0..v1 {
        for j in 0..v2 {
            if mask[i * v2 + j] {
                edges.push((left[i].clone(), right[j].clone()));
            }
        }
    }
    Bigraph::new(left, right, edges).unwrap()
}

fn arb_graph(max_left: usize, max_right: usize) -> impl Strategy<Value = Bigraph> {
    (1..=max_left, 1..=max_right)
        .prop_flat_map(|(a, b)| (Just(a), Just(b), proptest::collection::vec(any::<bool>(), a * b)))
        .prop_map(|(a, b, mask)| graph_from(a, b, &mask))
}

fn arb_bigraphon(max: usize) -> impl Strategy<Value = StepBigraphon> {
    (1..=max, 1..=max)
        .prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(0.001f64..1.0, c), r))
        .prop_map(|w| StepBigraphon::uniform(w).unwrap())
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

/// Deletes low-degree vertices one at a time in a shuffled order.
fn two_core_by_random_deletion(g: &Bigraph, seed: u64) -> BTreeSet<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut alive: BTreeSet<usize> = g.vertices().collect();
    loop {
        let deg = |v: usize, alive: &BTreeSet<usize>| g.neighbors(v).iter().filter(|u| alive.contains(u)).count();
        let mut low: Vec<usize> = alive.iter().copied().filter(|&v| deg(v, &alive) < 2).collect();
        if low.is_empty() {
            return alive.iter().map(|&v| g.name(v).to_string()).collect();
        }
        low.shuffle(&mut rng);
        alive.remove(&low[0]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn induced_subgraphs_compose(g in arb_graph(4, 4), m2 in proptest::collection::vec(any::<bool>(), 8), m1 in proptest::collection::vec(any::<bool>(), 8)) {
        let names: Vec<String> = g.vertices().map(|v| g.name(v).to_string()).collect();
        let u2: Vec<&String> = names.iter().enumerate().filter(|(i, _)| m2[*i]).map(|(_, n)| n).collect();
        let u1: Vec<&String> = u2.iter().copied().enumerate().filter(|(i, _)| m1[*i]).map(|(_, n)| n).collect();
        let twice = g.induced_subgraph(&u2).unwrap().induced_subgraph(&u1).unwrap();
        prop_assert_eq!(twice, g.induced_subgraph(&u1).unwrap());
    }

    #[test]
    fn two_core_is_idempotent_and_order_free(g in arb_graph(5, 5), seed in any::<u64>()) {
        let core = g.two_core();
        prop_assert_eq!(core.two_core(), core.clone());
        let names: BTreeSet<String> = core.vertices().map(|v| core.name(v).to_string()).collect();
        prop_assert_eq!(names, two_core_by_random_deletion(&g, seed));
    }

    #[test]
    fn automorphisms_form_a_group(g in arb_graph(4, 4), colors in proptest::collection::vec(0usize..2, 16)) {
        let auts: BTreeSet<Vec<usize>> = automorphisms(&g).unwrap().into_iter().collect();
        prop_assert!(auts.contains(&identity(g.v())));
        for a in &auts {
            prop_assert!(auts.contains(&inverse(a)));
            for b in &auts {
                prop_assert!(auts.contains(&compose(a, b)));
            }
        }
        let h = ColoredBigraph::new(g.clone(), colors[..g.e()].to_vec()).unwrap();
        let sub: BTreeSet<Vec<usize>> = colored_automorphisms(&h).unwrap().into_iter().collect();
        prop_assert!(sub.is_subset(&auts));
        prop_assert!(sub.contains(&identity(g.v())));
        for a in &sub {
            for b in &sub {
                prop_assert!(sub.contains(&compose(a, b)));
            }
        }
    }

    #[test]
    fn amalgamation_counts_and_associativity(a in arb_graph(3, 3), b in arb_graph(3, 3), c in arb_graph(3, 3)) {
        prop_assume!(a.v1() == b.v1() && b.v1() == c.v1());
        let tag = |g: &Bigraph, t: &str| g.relabel(|s| if s.starts_with('r') { format!("{s}{t}") } else { s.to_string() }).unwrap();
        let (a, b, c) = (tag(&a, "a"), tag(&b, "b"), tag(&c, "c"));
        let all = amalgamate_left(&[a.clone(), b.clone(), c.clone()]).unwrap();
        prop_assert_eq!(all.v2(), a.v2() + b.v2() + c.v2());
        prop_assert_eq!(all.e(), a.e() + b.e() + c.e());
        let left = amalgamate_left(&[amalgamate_left(&[a.clone(), b.clone()]).unwrap(), c.clone()]).unwrap();
        let right = amalgamate_left(&[a, amalgamate_left(&[b, c]).unwrap()]).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left, all);
    }

    #[test]
    fn folding_maps_are_endomorphisms(g in arb_graph(3, 4)) {
        for f in enumerate_folds(&g).unwrap() {
            f.validate(&g).unwrap();
            let (a, b) = (f.phi_l(), f.phi_l_star());
            prop_assert!(is_endomorphism(&g, &a) && is_endomorphism(&g, &b));
            let fixed = f.fixed();
            for (v, &x) in compose(&a, &b).iter().enumerate() {
                prop_assert!(f.left[x] || fixed[x], "vertex {} lands outside L ∪ Fix", v);
            }
        }
    }

    #[test]
    fn completion_matches_brute_force(g in arb_graph(3, 4)) {
        for phi in automorphisms(&g).unwrap() {
            if !is_cut_involution(&g, &phi).unwrap() {
                continue;
            }
            let fixed: Vec<bool> = phi.iter().enumerate().map(|(v, &w)| v == w).collect();
            let comps = g.components_excluding(&fixed);
            let found = (0u32..1 << comps.len()).any(|pick| {
                let mut left = vec![false; g.v()];
                for (i, c) in comps.iter().enumerate() {
                    if pick >> i & 1 == 1 {
                        for &v in c {
                            left[v] = true;
                        }
                    }
                }
                Fold { phi: phi.clone(), left }.validate(&g).is_ok()
            });
            prop_assert_eq!(complete_to_fold(&g, &phi).unwrap().is_some(), found);
        }
    }

    #[test]
    fn certificates_verify(g in arb_graph(3, 4)) {
        let g = g.without_isolated();
        prop_assume!(g.e() > 0);
        if let Some(cert) = find_left_cut_percolating(&g, &FoldPool::Complete, DEFAULT_BUDGET).unwrap().certificate() {
            prop_assert!(verify_certificate(&g, &cert).valid);
            prop_assert!(generated_group_is_transitive(&g, &cert));
            for w in cert.trajectory.windows(2) {
                prop_assert!(w[1].len() <= 2 * w[0].len());
            }
        }
        if let Some(cert) = find_cut_percolating(&g, &FoldPool::Complete, DEFAULT_BUDGET).unwrap().certificate() {
            prop_assert!(verify_certificate(&g, &cert).valid);
            prop_assert!(generated_group_is_transitive(&g, &cert));
            prop_assert!(verify_certificate(&g, &project_to_left(&g, &cert)).valid);
        }
    }

    #[test]
    fn elimination_matches_brute_force(g in arb_graph(4, 4), w in arb_bigraphon(3)) {
        prop_assert!(close(density(&g, &w), density_brute_force(&g, &w), 1e-12));
    }

    #[test]
    fn density_scaling_and_products(g in arb_graph(3, 3), h in arb_graph(3, 3), w in arb_bigraphon(3), lambda in 0.1f64..1.0) {
        let t = density(&g, &w);
        prop_assert!(close(density(&g, &w.scaled(lambda)), lambda.powi(g.e() as i32) * t, 1e-12));
        prop_assert!(close(density(&g.disjoint_union(&h), &w), t * density(&h, &w), 1e-12));
        let half = StepBigraphon::constant(w.rows(), w.cols(), 0.5).unwrap();
        prop_assert_eq!(density(&g, &half), 0.5f64.powi(g.e() as i32));
    }

    #[test]
    fn sinkhorn_balances(w in arb_bigraphon(4), g in arb_graph(3, 3)) {
        let b = sinkhorn_biregularize(&w, SINKHORN_TOL, SINKHORN_MAX_ITER).unwrap();
        prop_assert!(b.is_biregular(1e-9));
        let ratio = density(&g, &b) / b.edge_density().powi(g.e() as i32);
        prop_assert!(ratio.is_finite());
    }

    #[test]
    fn fractional_matches_colored(g in arb_graph(4, 4), right_colors in proptest::collection::vec(1usize..3, 4), w1 in arb_bigraphon(3)) {
        let g = g.without_isolated();
        prop_assume!(g.e() > 0);
        let v1 = g.v1();
        let h = ColoredBigraph::from_fn(g, |_, r| right_colors[r - v1]);
        let w2 = w1.with_values(w1.w.iter().map(|row| row.iter().map(|x| 1.0 - 0.9 * x).collect()).collect()).unwrap();
        let ws = BigraphonTuple::new(BTreeMap::from([(1, w1), (2, w2)])).unwrap();
        let frac = ColoredFractionalBigraph::from_colored(&h).unwrap();
        prop_assert!(close(fractional_density(&frac, &ws).unwrap(), colored_density(&h, &ws).unwrap(), 1e-12));
    }

    #[test]
    fn violated_witnesses_replay(extra in 1usize..3, seed in 0u64..1000) {
        let left: Vec<String> = (0..=extra).map(|i| format!("l{i}")).collect();
        let g = Bigraph::new(left, ["r"], [("l0", "r")]).unwrap();
        let cfg = TrialConfig { trials: 200, seed, ..Default::default() };
        let r = test_strong_sidorenko(&g, &cfg).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Violated);
        let replayed = r.witness.as_ref().unwrap().replay().unwrap();
        prop_assert!((replayed - r.worst_margin).abs() <= 1e-12);
        let again = serde_json::from_str::<sidlab::testers::TestReport>(&r.to_json_string()).unwrap();
        prop_assert!((again.witness.unwrap().replay().unwrap() - r.worst_margin).abs() <= 1e-12);
    }

    #[test]
    fn divisibility_implies_largeright(v1 in 1usize..7, d in proptest::collection::vec(0usize..100, 3)) {
        let counts: BTreeMap<usize, usize> = (2..=4).zip(d).filter(|&(k, _)| k <= v1).collect();
        let p = DegreeProfile::new(v1, counts).unwrap();
        prop_assert!(!p.divisibility().pass || p.largeright().pass);
    }

    #[test]
    fn orbit_check_ignores_right_names(d2 in 4usize..12, seed in any::<u64>()) {
        let h = build_incidence(4, &[2]).unwrap().colored;
        let g = DegreeProfile::new(4, BTreeMap::from([(2, d2)])).unwrap().realize().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..g.v2()).collect();
        perm.shuffle(&mut rng);
        let v1 = g.v1();
        let renamed = g
            .relabel(|s| match g.index_of(s) {
                Some(v) if v >= v1 => format!("x{:02}", perm[v - v1]),
                _ => s.to_string(),
            })
            .unwrap();
        let a = check_orbit_hypotheses(&g, &h).unwrap();
        let b = check_orbit_hypotheses(&renamed, &h).unwrap();
        prop_assert_eq!(a.pass, b.pass);
        prop_assert_eq!(a.orbits, b.orbits);
    }

    #[test]
    fn two_bag_amalgamations_decompose(g in arb_graph(3, 3)) {
        prop_assume!(g.is_connected() && g.e() > 0 && !g.has_isolated());
        let copy = g.relabel(|s| if s.starts_with('r') { format!("{s}'") } else { s.to_string() }).unwrap();
        let both = amalgamate_left(&[g.clone(), copy.clone()]).unwrap();
        let bag = |h: &Bigraph| h.vertices().map(|v| h.name(v).to_string()).collect::<BTreeSet<_>>();
        let t = ReflectiveTreeDecomposition { bags: vec![bag(&g), bag(&copy)], tree_edges: vec![(0, 1)] };
        let r = verify_rtd(&both, &t);
        prop_assert!(r.valid, "{:?}", r.failure);
        prop_assert_eq!(canonical_form(&r.core.unwrap().to_bigraph().unwrap()), canonical_form(&g.two_core()));
    }
}

#[test]
fn reflection_pools_percolate_up_to_six_points() {
    for n in 1..=6usize {
        for mask in 1u32..1 << n {
            let ks: Vec<usize> = (1..=n).filter(|k| mask >> (k - 1) & 1 == 1).collect();
            let ib = build_incidence(n, &ks).unwrap();
            let pool = FoldPool::Given(ib.reflection_fold_pool());
            let cert = find_left_cut_percolating(ib.graph(), &pool, DEFAULT_BUDGET).unwrap().certificate();
            let cert = cert.unwrap_or_else(|| panic!("no certificate for ({n}; {ks:?})"));
            assert!(verify_certificate(ib.graph(), &cert).valid);
            assert_eq!(cert.len(), n - 1);
        }
    }
}

#[test]
fn natural_coloring_is_color_edge_transitive() {
    for (n, ks) in [(3, vec![1, 2]), (4, vec![2]), (4, vec![1, 3]), (5, vec![2])] {
        let h = build_incidence(n, &ks).unwrap().colored;
        let g = &h.graph;
        let auts = colored_automorphisms(&h).unwrap();
        for c in h.color_set() {
            let edges: Vec<usize> = (0..g.e()).filter(|&e| h.colors[e] == c).collect();
            let (l0, r0) = g.edges()[edges[0]];
            let reached: BTreeSet<usize> = auts.iter().map(|s| g.edge_id(s[l0], s[r0]).unwrap()).collect();
            assert_eq!(reached, edges.iter().copied().collect::<BTreeSet<_>>(), "({n}; {ks:?}) color {c}");
        }
    }
}
