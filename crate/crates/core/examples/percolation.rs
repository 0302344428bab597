//! Cut-percolation certificates: search, verification, JSON, projection and
//! lifting to amalgamations.

use sidlab::percolation::{
    find_cut_percolating, find_left_cut_percolating, generated_group_is_transitive, lift_certificate, project_to_left,
    verify_certificate, FoldPool, PercolationCertificate, SearchOutcome, DEFAULT_BUDGET,
};
use sidlab::reflection::build_incidence;
use sidlab::Bigraph;

fn main() -> sidlab::Result<()> {
    let inc = build_incidence(5, &[2])?;
    let g = inc.graph();
    let pool = FoldPool::Given(inc.reflection_fold_pool());
    let cert = find_left_cut_percolating(g, &pool, DEFAULT_BUDGET)?.certificate().expect("reflections percolate");
    println!("incidence(5; 2): {} folds, trajectory sizes {:?}", cert.len(), cert.trajectory.iter().map(Vec::len).collect::<Vec<_>>());
    println!("verified: {:?}, transitive: {}", verify_certificate(g, &cert), generated_group_is_transitive(g, &cert));

    let text = cert.to_json_string(g);
    assert_eq!(PercolationCertificate::from_json_str(g, &text)?, cert);

    let c4 = Bigraph::cycle4();
    let edge_cert = find_cut_percolating(&c4, &FoldPool::Complete, DEFAULT_BUDGET)?.certificate().expect("C4 percolates");
    let projected = project_to_left(&c4, &edge_cert);
    println!("C4 edge certificate: {} folds; projected valid: {}", edge_cert.len(), verify_certificate(&c4, &projected).valid);

    let rigid = Bigraph::new(["x", "z"], ["y", "w"], [("x", "y"), ("z", "y"), ("z", "w")])?;
    match find_left_cut_percolating(&rigid, &FoldPool::Complete, DEFAULT_BUDGET)? {
        SearchOutcome::Found(_) => unreachable!("the path has no fold"),
        SearchOutcome::NotFound(nf) => println!("path P4: not found, definitive={}", nf.definitive),
    }

    // two copies of C4 sharing their left side
    let other = c4.relabel(|s| if c4.index_of(s).is_some_and(|v| c4.is_left(v)) { s.into() } else { format!("{s}'") })?;
    let ca = find_left_cut_percolating(&c4, &FoldPool::Complete, DEFAULT_BUDGET)?.certificate().unwrap();
    let cb = find_left_cut_percolating(&other, &FoldPool::Complete, DEFAULT_BUDGET)?.certificate().unwrap();
    let (joined, lifted) = lift_certificate(&[c4, other], &[ca, cb])?;
    println!("lifted to K(2,4): e={} valid={}", joined.e(), verify_certificate(&joined, &lifted).valid);
    Ok(())
}
