use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{relative_margin, run_trials, TestReport, TrialConfig, Witness};
use crate::automorphism::is_endomorphism;
use crate::bigraph::{Bigraph, Color, ColoredBigraph};
use crate::density::{colored_density, BigraphonTuple};
use crate::error::{Error, Result};
use crate::fold::Fold;

/// `c ∘ ψ` for an edge coloring `c` and an endomorphism `ψ`.
fn pull_back(g: &Bigraph, c: &[Color], psi: &[usize]) -> Vec<Color> {
    g.edges()
        .iter()
        .map(|&(l, r)| c[g.edge_id(psi[l], psi[r]).expect("endomorphisms map edges to edges")])
        .collect()
}

/// Leaf colorings of the Cauchy–Schwarz tree of `(g, c)` along `folds`, left
/// to right. The left child of `c'` is `c' ∘ φ_L`, the right one `c' ∘ φ_L^*`.
pub fn cs_tree_leaves(g: &Bigraph, c: &[Color], folds: &[Fold]) -> Result<Vec<Vec<Color>>> {
    if c.len() != g.e() {
        return Err(Error::ColorCount { colors: c.len(), edges: g.e() });
    }
    let mut level = vec![c.to_vec()];
    for f in folds {
        f.validate(g)?;
        let (a, b) = (f.phi_l(), f.phi_l_star());
        level = level.iter().flat_map(|c| [pull_back(g, c, &a), pull_back(g, c, &b)]).collect();
    }
    Ok(level)
}

/// `c ∘ (φ_1)_{L_1} ∘ … ∘ (φ_m)_{L_m}`.
pub fn leftmost_leaf(g: &Bigraph, c: &[Color], folds: &[Fold]) -> Result<Vec<Color>> {
    if c.len() != g.e() {
        return Err(Error::ColorCount { colors: c.len(), edges: g.e() });
    }
    let mut c = c.to_vec();
    for f in folds {
        f.validate(g)?;
        c = pull_back(g, &c, &f.phi_l());
    }
    Ok(c)
}

/// `t((G, c), W) ≤ Π_t t((G, c_t), W)^{2^{-m}}` over the tree leaves.
pub fn cs_margin(h: &ColoredBigraph, folds: &[Fold], ws: &BigraphonTuple) -> Result<f64> {
    let leaves = cs_tree_leaves(&h.graph, &h.colors, folds)?;
    let mut counts: BTreeMap<Vec<Color>, usize> = BTreeMap::new();
    for leaf in leaves {
        *counts.entry(leaf).or_insert(0) += 1;
    }
    let scale = 0.5f64.powi(folds.len() as i32);
    let mut rhs = 1.0;
    for (leaf, k) in counts {
        let colored = ColoredBigraph::new(h.graph.clone(), leaf)?;
        rhs *= colored_density(&colored, ws)?.powf(k as f64 * scale);
    }
    Ok(relative_margin(rhs, colored_density(h, ws)?))
}

fn cs_witness(h: &ColoredBigraph, folds: &[Fold], ws: &BigraphonTuple) -> Witness {
    Witness::CsTree {
        graph: h.to_json(),
        folds: folds.iter().map(|f| f.to_json(&h.graph)).collect(),
        tuple: ws.clone(),
    }
}

/// Single-instance check of the Cauchy–Schwarz tree bound.
pub fn verify_cs_inequality(h: &ColoredBigraph, folds: &[Fold], ws: &BigraphonTuple, tol: f64) -> Result<TestReport> {
    let cfg = TrialConfig { trials: 1, tol, ..Default::default() };
    cfg.validate()?;
    let m = cs_margin(h, folds, ws)?;
    Ok(run_trials("cs-tree", &cfg, |_, _| Some((m, cs_witness(h, folds, ws)))))
}

/// Random edge colorings with up to three colors, random sequences of at
/// most `max_len` folds drawn from `pool`, and random tuples.
pub fn test_cs_tree(g: &Bigraph, pool: &[Fold], max_len: usize, cfg: &TrialConfig) -> Result<TestReport> {
    cfg.validate()?;
    for f in pool {
        f.validate(g)?;
    }
    if g.e() == 0 {
        return Ok(TestReport::precondition_failed("cs-tree", "graph has no edges".into(), cfg));
    }
    Ok(run_trials("cs-tree", cfg, |t, rng| {
        let k = rng.gen_range(1..=3);
        let colors: Vec<Color> = (0..g.e()).map(|_| rng.gen_range(0..k)).collect();
        let h = ColoredBigraph::new(g.clone(), colors).expect("one color per edge");
        let len = if pool.is_empty() { 0 } else { rng.gen_range(0..=max_len) };
        let folds: Vec<Fold> = (0..len).map(|_| pool.choose(rng).expect("nonempty pool").clone()).collect();
        let ws = cfg.tuple(rng, t, &(0..k).collect::<Vec<_>>());
        let m = cs_margin(&h, &folds, &ws).expect("validated folds");
        Some((m, cs_witness(&h, &folds, &ws)))
    }))
}

/// `G_f`: the spanning subgraph keeping edges with `f(v) + f(w) ≥ 2`.
pub fn two_threshold(g: &Bigraph, f: &[u8]) -> Result<Bigraph> {
    if f.len() != g.v() {
        return Err(Error::InvalidParameter(format!("expected {} values, got {}", g.v(), f.len())));
    }
    if let Some(x) = f.iter().find(|&&x| x > 2) {
        return Err(Error::InvalidParameter(format!("threshold value {x} outside {{0, 1, 2}}")));
    }
    let keep: Vec<bool> = g.edges().iter().map(|&(l, r)| f[l] + f[r] >= 2).collect();
    Ok(g.spanning_by_mask(&keep))
}

/// `φ^{-1}(sub)`: the spanning subgraph of edges whose image lies in `sub`.
pub fn endo_preimage(g: &Bigraph, sub: &Bigraph, phi: &[usize]) -> Result<Bigraph> {
    if phi.len() != g.v() || !is_endomorphism(g, phi) {
        return Err(Error::NotEndomorphism);
    }
    if sub.names() != g.names() || sub.v1() != g.v1() || sub.edges().iter().any(|&(l, r)| !g.has_edge(l, r)) {
        return Err(Error::InvalidParameter("not a spanning subgraph".into()));
    }
    let keep: Vec<bool> = g.edges().iter().map(|&(l, r)| sub.has_edge(phi[l], phi[r])).collect();
    Ok(g.spanning_by_mask(&keep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::endomorphisms;
    use crate::fold::enumerate_folds;
    use crate::percolation::{find_left_cut_percolating, FoldPool, DEFAULT_BUDGET};
    use crate::reflection::build_incidence;

    fn swap_fold(g: &Bigraph) -> Fold {
        // swaps the two left vertices of C4, fixing the right side
        let phi = vec![1, 0, 2, 3];
        let mut left = vec![false; g.v()];
        left[0] = true;
        let f = Fold { phi, left };
        f.validate(g).unwrap();
        f
    }

    #[test]
    fn empty_sequence_is_the_root() {
        let g = Bigraph::cycle4();
        let c = vec![0, 1, 2, 3];
        assert_eq!(cs_tree_leaves(&g, &c, &[]).unwrap(), vec![c.clone()]);
        let h = ColoredBigraph::new(g, c).unwrap();
        let cfg = TrialConfig::default();
        let ws = cfg.tuple(&mut cfg.rng(0), 0, &[0, 1, 2, 3]);
        assert!(cs_margin(&h, &[], &ws).unwrap().abs() < 1e-15);
    }

    #[test]
    fn c4_single_fold() {
        let g = Bigraph::cycle4();
        let c: Vec<Color> = (0..g.e()).collect();
        let leaves = cs_tree_leaves(&g, &c, &[swap_fold(&g)]).unwrap();
        assert_eq!(leaves.len(), 2);
        for (leaf, v) in leaves.iter().zip([0, 1]) {
            // every edge takes the color of the matching edge at left vertex v
            for (e, &(_, r)) in g.edges().iter().enumerate() {
                assert_eq!(leaf[e], c[g.edge_id(v, r).unwrap()]);
            }
        }
        let h = ColoredBigraph::new(g.clone(), c).unwrap();
        let cfg = TrialConfig { trials: 200, seed: 5, ..Default::default() };
        assert!(test_cs_tree(&g, &[swap_fold(&g)], 3, &cfg).unwrap().holds());
        let ws = cfg.tuple(&mut cfg.rng(1), 1, &[0, 1, 2, 3]);
        assert!(verify_cs_inequality(&h, &[swap_fold(&g)], &ws, 1e-9).unwrap().holds());
    }

    #[test]
    fn leftmost_leaf_is_left_constant() {
        let ib = build_incidence(4, &[2]).unwrap();
        let g = ib.graph();
        let cert = find_left_cut_percolating(g, &FoldPool::Given(ib.reflection_fold_pool()), DEFAULT_BUDGET)
            .unwrap()
            .certificate()
            .unwrap();
        let stride = 10;
        let v0 = cert.trajectory[0][0];
        for seed in 0..20u64 {
            let mut rng = TrialConfig { seed, ..Default::default() }.rng(0);
            let ell: Vec<usize> = g.left().map(|_| rng.gen_range(0..3)).collect();
            let lifted: Vec<Color> =
                g.edges().iter().zip(&ib.colored.colors).map(|(&(l, _), &c)| ell[l] * stride + c).collect();
            let leaf = leftmost_leaf(g, &lifted, &cert.folds).unwrap();
            for (e, &c) in leaf.iter().enumerate() {
                assert_eq!(c / stride, ell[v0]);
                assert_eq!(c % stride, ib.colored.colors[e]);
            }
            assert_eq!(&leaf, &cs_tree_leaves(g, &lifted, &cert.folds).unwrap()[0]);
        }
        let cfg = TrialConfig { trials: 100, seed: 1, ..Default::default() };
        assert!(test_cs_tree(g, &cert.folds, 3, &cfg).unwrap().holds());
    }

    #[test]
    fn thresholds() {
        let g = Bigraph::book(2);
        assert_eq!(two_threshold(&g, &vec![2; g.v()]).unwrap(), g);
        assert_eq!(two_threshold(&g, &vec![0; g.v()]).unwrap().e(), 0);
        let mut ind = vec![0u8; g.v()];
        let u = [g.index_of("p").unwrap(), g.index_of("b1").unwrap(), g.index_of("q").unwrap()];
        for &v in &u {
            ind[v] = 1;
        }
        let sub = two_threshold(&g, &ind).unwrap();
        assert_eq!(sub.v(), g.v());
        let mask: Vec<bool> = g.vertices().map(|v| u.contains(&v)).collect();
        assert_eq!(sub.e(), g.induced_by_mask(&mask).e());
        assert!(two_threshold(&g, &vec![3; g.v()]).is_err());
    }

    #[test]
    fn preimage_of_threshold_is_threshold_of_pullback() {
        for g in [Bigraph::cycle4(), Bigraph::book(2), Bigraph::star(3)] {
            let endos = endomorphisms(&g);
            let n = g.v();
            for code in 0..3usize.pow(n as u32) {
                let f: Vec<u8> = (0..n).map(|i| (code / 3usize.pow(i as u32) % 3) as u8).collect();
                let gf = two_threshold(&g, &f).unwrap();
                for phi in &endos {
                    let pulled: Vec<u8> = phi.iter().map(|&w| f[w]).collect();
                    assert_eq!(endo_preimage(&g, &gf, phi).unwrap(), two_threshold(&g, &pulled).unwrap());
                }
            }
        }
        let g = Bigraph::cycle4();
        for f in enumerate_folds(&g).unwrap() {
            assert_eq!(endo_preimage(&g, &g, &f.phi_l()).unwrap(), g);
        }
        assert_eq!(endo_preimage(&g, &g, &[0, 0, 0, 0]), Err(Error::NotEndomorphism));
    }
}
