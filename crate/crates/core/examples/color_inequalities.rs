//! Colored and fractional inequalities: weak norming, left weak Hölder, color
//! Sidorenko, the Jensen step and color restriction.

use std::collections::{BTreeMap, BTreeSet};

use sidlab::density::{fractional_density, BigraphonTuple, StepBigraphon};
use sidlab::fractional::ColoredFractionalBigraph;
use sidlab::reflection::build_incidence;
use sidlab::testers::{
    jensen_sides, test_color_restriction, test_color_restriction_trials, test_color_sidorenko, test_inductive_jensen,
    test_left_weak_holder, test_weakly_norming, TrialConfig,
};
use sidlab::Bigraph;

fn main() -> sidlab::Result<()> {
    let cfg = TrialConfig { trials: 300, seed: 2, ..Default::default() };

    for (name, g) in [("C4", Bigraph::cycle4()), ("star(3)", Bigraph::star(3)), ("B2", Bigraph::book(2))] {
        let r = test_weakly_norming(&g, &cfg)?;
        println!("weakly norming {name}: {:?} {}", r.verdict, r.reason.unwrap_or_default());
    }

    let inc = build_incidence(4, &[1, 2])?;
    println!("left weak Hölder on incidence(4; 1,2): {:?}", test_left_weak_holder(&inc.colored, &cfg)?.verdict);

    let h = ColoredFractionalBigraph::from_colored(&inc.colored)?;
    println!("fractional form: e={} colors {:?}", h.e(), h.colors());
    println!("color sidorenko: {:?}", test_color_sidorenko(&h, &cfg)?.verdict);

    let p: BTreeMap<usize, f64> = [(0, 0.25), (1, 0.75)].into();
    let star = ColoredFractionalBigraph::rainbow(&p)?;
    let w = StepBigraphon::uniform(vec![vec![0.3, 0.6], vec![0.8, 0.1]])?;
    let ws = BigraphonTuple::new([(0, w.clone()), (1, w.scaled(0.5))].into())?;
    println!("rainbow star density {:.6}", fractional_density(&star, &ws)?);

    let (lhs, rhs) = jensen_sides(&[0.5, 0.5], &[1.0, 1.0], &[vec![1.0, 3.0]], &[2.0]);
    println!("jensen step on a two-point space: {lhs} >= {rhs}");
    println!("random jensen instances: {:?}", test_inductive_jensen(3, &cfg)?.verdict);

    let inc = build_incidence(3, &[1, 2])?;
    let uneven = StepBigraphon::uniform(vec![vec![0.2, 0.7], vec![0.9, 0.4]])?;
    let ws = BigraphonTuple::constant([1, 2], &uneven);
    let keep: BTreeSet<usize> = [2].into();
    let r = test_color_restriction(&inc.colored, &keep, &ws, 1e-9)?;
    println!("dropping color 1 with a non-regular W: {:?} ({:?})", r.verdict, r.reason);
    println!("after normalizing rows: {:?}", test_color_restriction_trials(&inc.colored, &keep, &cfg)?.verdict);
    Ok(())
}
