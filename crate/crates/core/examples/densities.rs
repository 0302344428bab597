//! Homomorphism densities over step bigraphons, flag densities and Sinkhorn
//! biregularization.

use sidlab::density::{
    colored_density, density, density_brute_force, flag_density, random_step_bigraphon, sinkhorn_biregularize,
    BigraphonTuple, StepBigraphon, SINKHORN_MAX_ITER, SINKHORN_TOL,
};
use sidlab::{Bigraph, ColoredBigraph, Flag};

fn main() -> sidlab::Result<()> {
    let w = random_step_bigraphon(3, 4, 11, 0.05);
    println!("W: {}x{} edge density {:.6}", w.rows(), w.cols(), w.edge_density());

    for (name, g) in [("edge", Bigraph::edge()), ("C4", Bigraph::cycle4()), ("B3", Bigraph::book(3))] {
        let (fast, slow) = (density(&g, &w), density_brute_force(&g, &w));
        let sidorenko = w.edge_density().powi(g.e() as i32);
        println!("t({name}, W) = {fast:.10} (brute force {slow:.10}), p^e = {sidorenko:.10}");
    }

    let half = StepBigraphon::new(vec![0.5, 0.5], vec![1.0], vec![vec![1.0], vec![0.2]])?;
    let cherry = Flag::new(Bigraph::dual_star(2), &["1"])?;
    for row in 0..2 {
        println!("t(cherry rooted at row {row}) = {:.4}", flag_density(&cherry, &half, &[row])?);
    }

    let h = ColoredBigraph::from_fn(Bigraph::cycle4(), |l, _| l);
    let ws = BigraphonTuple::new([(0, w.clone()), (1, w.scaled(0.5))].into_iter().collect())?;
    println!("two-colored C4: {:.10}", colored_density(&h, &ws)?);

    let balanced = sinkhorn_biregularize(&w, SINKHORN_TOL, SINKHORN_MAX_ITER)?;
    println!("row marginal before {:?}", w.row_marginal());
    println!("row marginal after  {:?}", balanced.row_marginal());
    println!("biregular: {}", balanced.is_biregular(1e-9));
    Ok(())
}
