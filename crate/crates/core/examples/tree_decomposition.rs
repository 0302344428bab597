//! Verifying reflective tree decompositions.

use std::collections::BTreeSet;

use sidlab::checkers::{verify_rtd, ReflectiveTreeDecomposition};
use sidlab::Bigraph;

fn page(i: usize) -> BTreeSet<String> {
    ["p".to_string(), "q".to_string(), format!("a{i}"), format!("b{i}")].into()
}

fn main() -> sidlab::Result<()> {
    let g = Bigraph::book(3);
    let path = ReflectiveTreeDecomposition { bags: vec![page(1), page(2), page(3)], tree_edges: vec![(0, 1), (1, 2)] };
    let r = verify_rtd(&g, &path);
    println!("B3 as a path of pages: valid={}", r.valid);
    if let Some(core) = &r.core {
        println!("  core: {}", serde_json::to_string(core).unwrap());
    }

    let star = ReflectiveTreeDecomposition { bags: vec![page(1), page(2), page(3)], tree_edges: vec![(0, 1), (0, 2)] };
    println!("as a star of pages: valid={}", verify_rtd(&g, &star).valid);

    let mut leaky = path.clone();
    leaky.bags[2].insert("a1".into());
    println!("with a1 leaking into page 3: {:?}", verify_rtd(&g, &leaky).failure);

    let mut uneven = path.clone();
    uneven.bags[1].remove("b2");
    println!("with b2 dropped: {:?}", verify_rtd(&g, &uneven).failure);

    let text = path.to_json_string();
    println!("{text}");
    assert_eq!(ReflectiveTreeDecomposition::from_json_str(&text)?, path);
    Ok(())
}
