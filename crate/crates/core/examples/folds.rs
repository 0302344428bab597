//! Cut-involutions, folds and their folding maps.

use sidlab::automorphism::{automorphisms, compose, is_endomorphism};
use sidlab::fold::{complete_to_fold, enumerate_folds, is_cut_involution};
use sidlab::Bigraph;

fn main() -> sidlab::Result<()> {
    for (name, g) in [("C4", Bigraph::cycle4()), ("B2", Bigraph::book(2)), ("star(3)", Bigraph::star(3))] {
        let auts = automorphisms(&g)?;
        let cuts = auts.iter().filter(|phi| is_cut_involution(&g, phi).unwrap_or(false)).count();
        let folds = enumerate_folds(&g)?;
        println!("{name}: |Aut|={} cut-involutions={cuts} folds={}", auts.len(), folds.len());
    }

    let g = Bigraph::book(2);
    for f in enumerate_folds(&g)? {
        let (a, b) = (f.phi_l(), f.phi_l_star());
        assert!(is_endomorphism(&g, &a) && is_endomorphism(&g, &b));
        let fixed: Vec<&str> = g.vertices().filter(|&v| f.fixed()[v]).map(|v| g.name(v)).collect();
        let side: Vec<&str> = g.vertices().filter(|&v| f.left[v]).map(|v| g.name(v)).collect();
        let image: Vec<&str> = compose(&a, &b).iter().map(|&v| g.name(v)).collect();
        println!("B2 fold: Fix={fixed:?} L={side:?} image of φ_L∘φ_L*: {image:?}");
        println!("  json: {}", serde_json::to_string(&f.to_json(&g)).unwrap());
    }

    // the swap of C4's left vertices fixes the right side, which separates them
    let c4 = Bigraph::cycle4();
    let swap = vec![1, 0, 2, 3];
    println!("C4 left swap completes to {:?}", complete_to_fold(&c4, &swap)?.map(|f| f.left));
    Ok(())
}
