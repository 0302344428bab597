//! Cut-involutions, folds and folding maps.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::automorphism::{automorphisms, compose, is_automorphism};
use crate::bigraph::{Bigraph, VertexMap};
use crate::error::{Error, Result};

/// A fold `(φ, L)`: `phi` is the involution, `left[v]` marks membership in `L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fold {
    pub phi: VertexMap,
    pub left: Vec<bool>,
}

fn check_total(g: &Bigraph, phi: &[usize]) -> Result<()> {
    if phi.len() != g.v() || phi.iter().any(|&x| x >= g.v()) {
        return Err(Error::NotABijection);
    }
    Ok(())
}

fn fixed_mask(phi: &[usize]) -> Vec<bool> {
    phi.iter().enumerate().map(|(v, &w)| v == w).collect()
}

/// An involutive automorphism whose fixed set disconnects the graph.
///
/// "Disconnects" means `G - Fix(φ)` has at least two components. On a
/// disconnected graph a fixed-point-free involution qualifies through the
/// empty cut; the identity never does.
pub fn is_cut_involution(g: &Bigraph, phi: &[usize]) -> Result<bool> {
    check_total(g, phi)?;
    if !is_automorphism(g, phi) || g.vertices().any(|v| phi[phi[v]] != v) {
        return Ok(false);
    }
    Ok(g.components_excluding(&fixed_mask(phi)).len() >= 2)
}

/// Completes a cut-involution to a fold, or `None` when some component of
/// `G - Fix(φ)` is mapped onto itself.
///
/// From each swapped pair of components, `L` takes the one holding the
/// smallest vertex id.
pub fn complete_to_fold(g: &Bigraph, phi: &[usize]) -> Result<Option<Fold>> {
    if !is_cut_involution(g, phi)? {
        return Err(Error::NotCutInvolution);
    }
    let comps = g.components_excluding(&fixed_mask(phi));
    let mut comp_of = vec![usize::MAX; g.v()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let min_name = |c: &[usize]| c.iter().map(|&v| g.name(v)).min().expect("components are nonempty");
    let mut left = vec![false; g.v()];
    for (i, c) in comps.iter().enumerate() {
        let j = comp_of[phi[c[0]]];
        if j == i {
            return Ok(None);
        }
        if min_name(c) < min_name(&comps[j]) {
            for &v in c {
                left[v] = true;
            }
        }
    }
    Ok(Some(Fold { phi: phi.to_vec(), left }))
}

impl Fold {
    pub fn fixed(&self) -> Vec<bool> {
        fixed_mask(&self.phi)
    }

    /// Checks every fold axiom on `g`.
    pub fn validate(&self, g: &Bigraph) -> Result<()> {
        let bad = |s: &str| Err(Error::InvalidFold(s.to_string()));
        if self.left.len() != g.v() {
            return bad("left-side mask has the wrong length");
        }
        check_total(g, &self.phi)?;
        if !is_cut_involution(g, &self.phi)? {
            return bad("map is not a cut-involution");
        }
        for v in g.vertices() {
            let w = self.phi[v];
            if self.left[v] && (v == w || self.left[w]) {
                return bad(&format!("vertex {} is in L and in Fix or φ(L)", g.name(v)));
            }
            if v != w && !self.left[v] && !self.left[w] {
                return bad(&format!("vertex {} is in none of L, Fix, φ(L)", g.name(v)));
            }
        }
        // L is a union of components of G - Fix iff no edge leaves L except into Fix.
        let fixed = self.fixed();
        for &(l, r) in g.edges() {
            if !fixed[l] && !fixed[r] && self.left[l] != self.left[r] {
                return bad(&format!("edge ({}, {}) joins L to φ(L)", g.name(l), g.name(r)));
            }
        }
        Ok(())
    }

    /// `φ_L`: applies `φ` off `L`, identity on `L`. Image lies in `L ∪ Fix`.
    pub fn phi_l(&self) -> VertexMap {
        self.phi.iter().enumerate().map(|(v, &w)| if self.left[v] { v } else { w }).collect()
    }

    /// `φ_L^*`: applies `φ` on `L`, identity elsewhere. Image lies in `φ(L) ∪ Fix`.
    pub fn phi_l_star(&self) -> VertexMap {
        self.phi.iter().enumerate().map(|(v, &w)| if self.left[v] { w } else { v }).collect()
    }

    pub fn to_json(&self, g: &Bigraph) -> FoldJson {
        FoldJson {
            phi: g.map_to_names(&self.phi),
            left: g.vertices().filter(|&v| self.left[v]).map(|v| g.name(v).to_string()).collect(),
        }
    }

    pub fn from_json(g: &Bigraph, raw: &FoldJson) -> Result<Fold> {
        let phi = g.map_from_names(&raw.phi)?;
        let mut left = vec![false; g.v()];
        for name in &raw.left {
            left[g.lookup(name)?] = true;
        }
        Ok(Fold { phi, left })
    }
}

/// Both folding maps of a validated fold, `(φ_L, φ_L^*)`.
pub fn folding_maps(g: &Bigraph, f: &Fold) -> Result<(VertexMap, VertexMap)> {
    f.validate(g)?;
    Ok((f.phi_l(), f.phi_l_star()))
}

/// One canonical fold per completable cut-involution, in automorphism order.
pub fn enumerate_folds(g: &Bigraph) -> Result<Vec<Fold>> {
    let mut out = Vec::new();
    for phi in automorphisms(g)? {
        let involution = compose(&phi, &phi).iter().enumerate().all(|(v, &w)| v == w);
        if !involution || !is_cut_involution(g, &phi)? {
            continue;
        }
        if let Some(f) = complete_to_fold(g, &phi)? {
            out.push(f);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldJson {
    pub phi: BTreeMap<String, String>,
    pub left: BTreeSet<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::is_endomorphism;
    use crate::reflection::build_incidence;

    fn uncompletable_graph() -> Bigraph {
        Bigraph::new(
            ["0", "2", "4"],
            ["1", "3", "5", "6"],
            [("0", "1"), ("0", "3"), ("0", "5"), ("0", "6"), ("2", "1"), ("2", "3"), ("4", "1"), ("4", "3")],
        )
        .unwrap()
    }

    fn map(g: &Bigraph, pairs: &[(&str, &str)]) -> VertexMap {
        let mut m: BTreeMap<String, String> = g.names().iter().map(|n| (n.clone(), n.clone())).collect();
        for (a, b) in pairs {
            m.insert(a.to_string(), b.to_string());
            m.insert(b.to_string(), a.to_string());
        }
        g.map_from_names(&m).unwrap()
    }

    /// Direct axiom check on an explicit `L`, independent of `Fold::validate`.
    fn axioms_hold(g: &Bigraph, phi: &[usize], l: &BTreeSet<usize>) -> bool {
        let fix: BTreeSet<usize> = g.vertices().filter(|&v| phi[v] == v).collect();
        let image: BTreeSet<usize> = l.iter().map(|&v| phi[v]).collect();
        let parts_disjoint = l.is_disjoint(&fix) && l.is_disjoint(&image) && image.is_disjoint(&fix);
        let covers = l.len() + fix.len() + image.len() == g.v();
        let closed = g.edges().iter().all(|&(a, b)| {
            fix.contains(&a) || fix.contains(&b) || l.contains(&a) == l.contains(&b)
        });
        parts_disjoint && covers && closed
    }

    fn some_l_exists(g: &Bigraph, phi: &[usize]) -> bool {
        (0u32..1 << g.v()).any(|mask| {
            let l: BTreeSet<usize> = g.vertices().filter(|&v| mask >> v & 1 == 1).collect();
            axioms_hold(g, phi, &l)
        })
    }

    #[test]
    fn uncompletable_involution_has_no_fold() {
        let g = uncompletable_graph();
        let phi = map(&g, &[("1", "3"), ("2", "4"), ("5", "6")]);
        assert!(is_cut_involution(&g, &phi).unwrap());
        assert_eq!(complete_to_fold(&g, &phi).unwrap(), None);
        assert!(!some_l_exists(&g, &phi));
    }

    #[test]
    fn small_cut_involutions() {
        let k12 = Bigraph::star(2);
        let swap = map(&k12, &[("1", "2")]);
        assert!(is_cut_involution(&k12, &swap).unwrap());
        let f = complete_to_fold(&k12, &swap).unwrap().unwrap();
        assert_eq!(f.to_json(&k12).left, BTreeSet::from(["1".to_string()]));
        let (pl, _) = folding_maps(&k12, &f).unwrap();
        let one = k12.index_of("1").unwrap();
        assert_eq!(pl[one], one);
        assert_eq!(pl[k12.index_of("2").unwrap()], one);

        let c4 = Bigraph::cycle4();
        assert!(!is_cut_involution(&c4, &map(&c4, &[])).unwrap());
        let f = complete_to_fold(&c4, &map(&c4, &[("a", "b")])).unwrap().unwrap();
        assert_eq!(f.to_json(&c4).left, BTreeSet::from(["a".to_string()]));
        let pl = f.phi_l();
        let a = c4.index_of("a").unwrap();
        let pre: Vec<usize> = c4.vertices().filter(|&v| pl[v] == a).collect();
        assert_eq!(pre, vec![a, c4.index_of("b").unwrap()]);

        assert!(complete_to_fold(&c4, &map(&c4, &[])).is_err());
        assert!(is_cut_involution(&c4, &[0, 1]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert!(enumerate_folds(&Bigraph::edge()).unwrap().is_empty());
        assert_eq!(enumerate_folds(&Bigraph::cycle4()).unwrap().len(), 2);
        let ib = build_incidence(4, &[2]).unwrap();
        let folds = enumerate_folds(ib.graph()).unwrap();
        for r in ib.reflection_fold_pool() {
            let canonical = complete_to_fold(ib.graph(), &r.phi).unwrap().unwrap();
            assert!(folds.contains(&canonical));
        }
    }

    #[test]
    fn completion_matches_subset_oracle() {
        let mut graphs = vec![Bigraph::star(2), Bigraph::star(3), Bigraph::cycle4(), Bigraph::book(2), uncompletable_graph()];
        graphs.push(build_incidence(3, &[1]).unwrap().colored.graph);
        graphs.push(build_incidence(3, &[2]).unwrap().colored.graph);
        graphs.push(Bigraph::cycle4().disjoint_union(&Bigraph::edge()));
        for g in &graphs {
            for phi in automorphisms(g).unwrap() {
                if !is_cut_involution(g, &phi).unwrap() {
                    continue;
                }
                let got = complete_to_fold(g, &phi).unwrap();
                assert_eq!(got.is_some(), some_l_exists(g, &phi));
                if let Some(f) = got {
                    let l: BTreeSet<usize> = g.vertices().filter(|&v| f.left[v]).collect();
                    assert!(axioms_hold(g, &phi, &l));
                    f.validate(g).unwrap();
                }
            }
        }
    }

    #[test]
    fn folding_maps_behave() {
        let graphs = [Bigraph::cycle4(), Bigraph::book(2), build_incidence(4, &[2]).unwrap().colored.graph];
        for g in &graphs {
            for f in enumerate_folds(g).unwrap() {
                let (pl, ps) = folding_maps(g, &f).unwrap();
                assert!(is_endomorphism(g, &pl) && is_endomorphism(g, &ps));
                assert_eq!(compose(&pl, &pl), pl);
                let fixed = f.fixed();
                assert!(compose(&pl, &ps).iter().all(|&v| f.left[v] || fixed[v]));
                assert!(compose(&ps, &pl).iter().all(|&v| f.left[f.phi[v]] || fixed[v]));
            }
        }
    }

    #[test]
    fn invalid_folds_rejected() {
        let g = Bigraph::cycle4();
        let mut f = enumerate_folds(&g).unwrap().remove(0);
        f.left = vec![true; g.v()];
        assert!(f.validate(&g).is_err());
        f.left = vec![false; g.v()];
        assert!(f.validate(&g).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = Bigraph::book(2);
        for f in enumerate_folds(&g).unwrap() {
            let s = serde_json::to_string(&f.to_json(&g)).unwrap();
            let back = Fold::from_json(&g, &serde_json::from_str(&s).unwrap()).unwrap();
            assert_eq!(back, f);
        }
    }
}
