//! Degree-profile checks and the orbit-sum comparison.

use std::collections::BTreeMap;

use sidlab::checkers::{check_largeright, check_orbit_hypotheses, DegreeProfile};
use sidlab::reflection::build_incidence;

fn main() -> sidlab::Result<()> {
    for counts in [vec![(2, 6), (3, 4)], vec![(2, 7)], vec![(1, 4), (2, 12)]] {
        let p = DegreeProfile::new(4, counts.iter().copied().collect::<BTreeMap<_, _>>())?;
        let (lr, dv) = (p.largeright(), p.divisibility());
        println!("v1=4 {counts:?}: large-right {} divisibility {}", lr.pass, dv.pass);
        for row in dv.rows.iter().filter(|r| !r.ok) {
            println!("  d_{} = {} not a multiple of {}", row.k, row.d_k, row.bound);
        }
    }

    let g = DegreeProfile::new(4, [(2, 7)].into())?.realize()?;
    println!("realized profile: v2={} e={}", g.v2(), g.e());
    println!("{}", serde_json::to_string(&check_largeright(&g)?).unwrap());

    let h = build_incidence(4, &[2])?.colored;
    let r = check_orbit_hypotheses(&g, &h)?;
    for p in &r.preconditions {
        println!("  {:<26} passed={} evidence_only={}", p.name, p.passed, p.evidence_only);
    }
    for o in &r.orbits {
        println!("  orbit of {:?} (size {}): G {} vs H {}", o.representative, o.orbit_size, o.sum_g, o.sum_h);
    }
    println!("orbit check passes: {}", r.pass);
    Ok(())
}
