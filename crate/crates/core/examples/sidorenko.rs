//! Randomized Sidorenko-type testers and witness replay.

use sidlab::testers::{
    induced_subgraph_classes, test_induced_sidorenko, test_sidorenko, test_strong_sidorenko, test_weak_domination,
    TrialConfig,
};
use sidlab::Bigraph;

fn main() -> sidlab::Result<()> {
    let cfg = TrialConfig { trials: 500, seed: 3, ..Default::default() };

    for (name, g) in [("C4", Bigraph::cycle4()), ("B2", Bigraph::book(2)), ("star(3)", Bigraph::star(3))] {
        let r = test_sidorenko(&g, &cfg)?;
        println!("sidorenko {name}: {:?}, worst margin {:.3e}", r.verdict, r.worst_margin);
    }

    let b2 = Bigraph::book(2);
    println!("B2 has {} induced subgraph classes", induced_subgraph_classes(&b2)?.len());
    let r = test_induced_sidorenko(&b2, &TrialConfig { trials: 100, ..cfg.clone() })?;
    println!("induced sidorenko B2: {:?}", r.verdict);
    let r = test_weak_domination(&Bigraph::cycle4(), &Bigraph::edge(), &cfg)?;
    println!("C4 weakly dominates an edge: {:?}", r.verdict);

    // an isolated left vertex breaks the strong form
    let lone = Bigraph::new(["x", "z"], ["y"], [("x", "y")])?;
    let r = test_strong_sidorenko(&lone, &cfg)?;
    println!("strong sidorenko on edge + isolated vertex: {:?} at trial {:?}", r.verdict, r.worst_trial);
    if let Some(w) = &r.witness {
        println!("replayed margin {:.6} (reported {:.6})", w.replay()?, r.worst_margin);
    }

    let again = test_strong_sidorenko(&lone, &cfg)?;
    assert_eq!(again.to_json_string(), r.to_json_string());
    Ok(())
}
