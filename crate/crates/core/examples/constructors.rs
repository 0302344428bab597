//! Building bigraphs: presets, JSON, induced subgraphs, 2-cores, amalgamation
//! and incidence bigraphs of complete hypergraphs.

use sidlab::bigraph::amalgamate_left;
use sidlab::reflection::build_incidence;
use sidlab::Bigraph;

fn main() -> sidlab::Result<()> {
    let c4 = Bigraph::cycle4();
    println!("C4: v1={} v2={} e={}", c4.v1(), c4.v2(), c4.e());
    println!("{}", serde_json::to_string(&c4.to_json()).unwrap());

    let book = Bigraph::book(3);
    println!("B3: v={} e={} 2-core has {} vertices", book.v(), book.e(), book.two_core().v());
    let page = book.induced_subgraph(&["p", "q", "a1", "b1"])?;
    println!("one page of B3 is C4-shaped: e={}", page.e());

    // a pendant right vertex drops out of the 2-core
    let tail = Bigraph::new(["x", "y"], ["u", "v", "w"], [("x", "u"), ("x", "v"), ("y", "u"), ("y", "v"), ("y", "w")])?;
    println!("pendant graph: v={} 2-core v={}", tail.v(), tail.two_core().v());

    let parts = [Bigraph::star(2), Bigraph::star(3).relabel(|s| if s == "0" { s.into() } else { format!("{s}'") })?];
    let joined = amalgamate_left(&parts)?;
    println!("star(2) + star(3) over the shared center: v2={} e={}", joined.v2(), joined.e());

    let parsed = Bigraph::from_json_str(r#"{"v1":["s"],"v2":["t"],"edges":[["s","t"]]}"#)?;
    assert_eq!(parsed, Bigraph::new(["s"], ["t"], [("s", "t")])?);

    let inc = build_incidence(5, &[2, 3])?;
    let g = inc.graph();
    println!(
        "incidence(5; 2,3): v1={} v2={} e={} colors={:?}",
        g.v1(),
        g.v2(),
        g.e(),
        inc.colored.color_set()
    );
    println!("first right vertices: {:?}", g.right().take(3).map(|v| g.name(v)).collect::<Vec<_>>());
    Ok(())
}
