//! Cauchy–Schwarz trees along fold sequences and threshold subgraphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sidlab::density::random_positive_tuple;
use sidlab::percolation::{find_left_cut_percolating, FoldPool, DEFAULT_BUDGET};
use sidlab::reflection::build_incidence;
use sidlab::testers::{cs_tree_leaves, leftmost_leaf, test_cs_tree, two_threshold, verify_cs_inequality, TrialConfig};
use sidlab::{Bigraph, ColoredBigraph};

fn main() -> sidlab::Result<()> {
    let inc = build_incidence(4, &[2])?;
    let g = inc.graph();
    let pool = inc.reflection_fold_pool();
    let cert = find_left_cut_percolating(g, &FoldPool::Given(pool.clone()), DEFAULT_BUDGET)?.certificate().unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let colors: Vec<usize> = (0..g.e()).map(|_| rng.gen_range(0..3)).collect();
    let leaves = cs_tree_leaves(g, &colors, &cert.folds)?;
    println!("{} folds give {} leaves", cert.len(), leaves.len());

    let left = leftmost_leaf(g, &colors, &cert.folds)?;
    let v0 = cert.trajectory[0][0];
    println!("leftmost leaf copies the colors at {}: {:?}", g.name(v0), left);

    let h = ColoredBigraph::new(g.clone(), colors)?;
    let ws = random_positive_tuple(&mut rng, &[0, 1, 2], 3, 3, 0.05);
    let r = verify_cs_inequality(&h, &cert.folds, &ws, 1e-9)?;
    println!("single instance: {:?}, margin {:.4}", r.verdict, r.worst_margin);

    let cfg = TrialConfig { trials: 300, seed: 1, ..Default::default() };
    let r = test_cs_tree(g, &pool, 4, &cfg)?;
    println!("random trees over the reflection pool: {:?}, worst {:.3e}", r.verdict, r.worst_margin);

    let b = Bigraph::book(2);
    let f: Vec<u8> = b.vertices().map(|v| if b.name(v).ends_with('2') { 0 } else { 1 }).collect();
    println!("threshold of B2 off page 2 keeps {} of {} edges", two_threshold(&b, &f)?.e(), b.e());
    Ok(())
}
