//! Automorphism enumeration and canonical forms.
//!
//! Both rest on color refinement: vertices start colored by side (and label,
//! for flags) and are repeatedly split by the multiset of neighbor colors.
//! Automorphisms are found by backtracking over refined cells; canonical forms
//! by individualization-refinement, taking the least encoding over all leaves.

use std::collections::{BTreeMap, BTreeSet};

use crate::bigraph::{Bigraph, ColoredBigraph, VertexMap};
use crate::error::{Error, Result};

/// Hard limit on `v(G)` for automorphism enumeration.
pub const MAX_AUTOMORPHISM_VERTICES: usize = 24;
/// Hard limit on the number of automorphisms returned.
pub const MAX_AUTOMORPHISMS: usize = 500_000;

/// Stable refinement of an initial vertex coloring. Color ids are assigned
/// by sorted signature, so they are isomorphism invariant.
pub(crate) fn refine(g: &Bigraph, initial: &[usize]) -> Vec<usize> {
    let mut colors = normalize(initial);
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = g
            .vertices()
            .map(|v| {
                let mut ns: Vec<usize> = g.neighbors(v).iter().map(|&u| colors[u]).collect();
                ns.sort_unstable();
                (colors[v], ns)
            })
            .collect();
        let next = normalize(&sigs);
        let before = colors.iter().collect::<BTreeSet<_>>().len();
        let after = next.iter().collect::<BTreeSet<_>>().len();
        colors = next;
        if after == before {
            return colors;
        }
    }
}

fn normalize<T: Ord + Clone>(keys: &[T]) -> Vec<usize> {
    let distinct: BTreeSet<&T> = keys.iter().collect();
    let rank: BTreeMap<&T, usize> = distinct.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
    keys.iter().map(|k| rank[k]).collect()
}

fn side_colors(g: &Bigraph) -> Vec<usize> {
    g.vertices().map(|v| usize::from(!g.is_left(v))).collect()
}

pub fn automorphisms(g: &Bigraph) -> Result<Vec<VertexMap>> {
    enumerate(g, None)
}

/// Automorphisms of the underlying graph that also preserve edge colors.
pub fn colored_automorphisms(h: &ColoredBigraph) -> Result<Vec<VertexMap>> {
    enumerate(&h.graph, Some(&h.colors))
}

fn enumerate(g: &Bigraph, colors: Option<&[usize]>) -> Result<Vec<VertexMap>> {
    let n = g.v();
    if n > MAX_AUTOMORPHISM_VERTICES {
        return Err(Error::TooLarge(n, MAX_AUTOMORPHISM_VERTICES));
    }
    let cell = refine(g, &side_colors(g));
    let mut search = AutSearch {
        g,
        colors,
        cell: &cell,
        map: vec![usize::MAX; n],
        used: vec![false; n],
        out: Vec::new(),
    };
    search.extend(0)?;
    let mut out = search.out;
    out.sort();
    Ok(out)
}

struct AutSearch<'a> {
    g: &'a Bigraph,
    colors: Option<&'a [usize]>,
    cell: &'a [usize],
    map: Vec<usize>,
    used: Vec<bool>,
    out: Vec<VertexMap>,
}

impl AutSearch<'_> {
    fn extend(&mut self, v: usize) -> Result<()> {
        let n = self.g.v();
        if v == n {
            if self.out.len() >= MAX_AUTOMORPHISMS {
                return Err(Error::TooManyAutomorphisms(MAX_AUTOMORPHISMS));
            }
            self.out.push(self.map.clone());
            return Ok(());
        }
        for t in 0..n {
            if self.used[t] || self.cell[t] != self.cell[v] || !self.consistent(v, t) {
                continue;
            }
            self.map[v] = t;
            self.used[t] = true;
            self.extend(v + 1)?;
            self.used[t] = false;
            self.map[v] = usize::MAX;
        }
        Ok(())
    }

    fn consistent(&self, v: usize, t: usize) -> bool {
        let g = self.g;
        for u in 0..v {
            let s = self.map[u];
            match (g.edge_id(v, u), g.edge_id(t, s)) {
                (None, None) => {}
                (Some(a), Some(b)) => {
                    if let Some(c) = self.colors {
                        if c[a] != c[b] {
                            return false;
                        }
                    }
                }
                _ => return false,
            }
        }
        true
    }
}

pub fn is_automorphism(g: &Bigraph, map: &[usize]) -> bool {
    if map.len() != g.v() || !is_bijection(map) {
        return false;
    }
    is_endomorphism(g, map)
}

/// Side-preserving and edge-preserving (not necessarily injective).
pub fn is_endomorphism(g: &Bigraph, map: &[usize]) -> bool {
    map.len() == g.v()
        && g.vertices().all(|v| map[v] < g.v() && g.is_left(v) == g.is_left(map[v]))
        && g.edges().iter().all(|&(l, r)| g.has_edge(map[l], map[r]))
}

pub fn is_bijection(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    for &x in map {
        if x >= map.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// `(a ∘ b)(v) = a(b(v))`.
pub fn compose(a: &[usize], b: &[usize]) -> VertexMap {
    b.iter().map(|&x| a[x]).collect()
}

pub fn inverse(a: &[usize]) -> VertexMap {
    let mut inv = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

pub fn identity(n: usize) -> VertexMap {
    (0..n).collect()
}

/// Every endomorphism of `g`, by backtracking in vertex order.
pub fn endomorphisms(g: &Bigraph) -> Vec<VertexMap> {
    fn go(g: &Bigraph, v: usize, map: &mut Vec<usize>, out: &mut Vec<VertexMap>) {
        if v == g.v() {
            out.push(map.clone());
            return;
        }
        let range = if g.is_left(v) { g.left() } else { g.right() };
        for t in range {
            let ok = g.neighbors(v).iter().filter(|&&u| u < v).all(|&u| g.has_edge(t, map[u]));
            if ok {
                map[v] = t;
                go(g, v + 1, map, out);
            }
        }
        map[v] = usize::MAX;
    }
    let mut out = Vec::new();
    go(g, 0, &mut vec![usize::MAX; g.v()], &mut out);
    out
}

/// An isomorphism-invariant encoding: equal iff the (labeled) graphs are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    v1: usize,
    v2: usize,
    labels: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

pub fn canonical_form(g: &Bigraph) -> CanonicalForm {
    canonical_form_labeled(g, &[])
}

/// Canonical form of a flag: labeled vertices keep their label position, so
/// equal forms mean an isomorphism that fixes the labels pointwise.
pub fn canonical_form_labeled(g: &Bigraph, labels: &[usize]) -> CanonicalForm {
    let mut init = side_colors(g);
    for (i, &v) in labels.iter().enumerate() {
        init[v] = 2 + i;
    }
    let colors = refine(g, &init);
    let mut best: Option<CanonicalForm> = None;
    search_canonical(g, labels, colors, &mut best);
    best.expect("at least one leaf")
}

fn search_canonical(g: &Bigraph, labels: &[usize], colors: Vec<usize>, best: &mut Option<CanonicalForm>) {
    let n = g.v();
    let mut sizes = BTreeMap::new();
    for &c in &colors {
        *sizes.entry(c).or_insert(0usize) += 1;
    }
    let target = sizes.iter().find(|(_, &s)| s > 1).map(|(&c, _)| c);
    let Some(target) = target else {
        // discrete: colors are a permutation of 0..n
        let form = encode(g, labels, &colors);
        if best.as_ref().is_none_or(|b| form < *b) {
            *best = Some(form);
        }
        return;
    };
    // twins (equal neighborhoods) lead to identical subtrees
    let mut tried: BTreeSet<&[usize]> = BTreeSet::new();
    for v in 0..n {
        if colors[v] != target || !tried.insert(g.neighbors(v)) {
            continue;
        }
        let split: Vec<(usize, usize)> =
            (0..n).map(|u| (colors[u], usize::from(u != v))).collect();
        let next = refine(g, &normalize(&split));
        search_canonical(g, labels, next, best);
    }
}

fn encode(g: &Bigraph, labels: &[usize], order: &[usize]) -> CanonicalForm {
    let mut edges: Vec<(usize, usize)> = g.edges().iter().map(|&(l, r)| (order[l], order[r])).collect();
    edges.sort_unstable();
    CanonicalForm { v1: g.v1(), v2: g.v2(), labels: labels.iter().map(|&v| order[v]).collect(), edges }
}

pub fn are_isomorphic(a: &Bigraph, b: &Bigraph) -> bool {
    a.v1() == b.v1() && a.v2() == b.v2() && a.e() == b.e() && canonical_form(a) == canonical_form(b)
}

/// Orbits of the group generated by `gens` acting on `0..n`.
pub fn orbits(n: usize, gens: &[VertexMap]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut orbit = vec![s];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for g in gens {
                let y = g[x];
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflection::build_incidence;

    fn brute_force_automorphisms(g: &Bigraph) -> Vec<VertexMap> {
        fn perms(items: &[usize]) -> Vec<Vec<usize>> {
            if items.is_empty() {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for i in 0..items.len() {
                let mut rest = items.to_vec();
                let x = rest.remove(i);
                for mut p in perms(&rest) {
                    p.insert(0, x);
                    out.push(p);
                }
            }
            out
        }
        let left: Vec<usize> = g.left().collect();
        let right: Vec<usize> = g.right().collect();
        let mut out = Vec::new();
        for pl in perms(&left) {
            for pr in perms(&right) {
                let map: Vec<usize> = pl.iter().chain(pr.iter()).copied().collect();
                if is_automorphism(g, &map) {
                    out.push(map);
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn small_groups() {
        assert_eq!(automorphisms(&Bigraph::star(2)).unwrap().len(), 2);
        let c4 = Bigraph::cycle4();
        let auts = automorphisms(&c4).unwrap();
        assert_eq!(auts, brute_force_automorphisms(&c4));
        assert_eq!(auts.len(), 4);
        assert_eq!(auts[0], identity(4));
    }

    #[test]
    fn incidence_k4_2_group_is_point_permutations() {
        let ib = build_incidence(4, &[2]).unwrap();
        let g = &ib.colored.graph;
        let auts = automorphisms(g).unwrap();
        assert_eq!(auts.len(), 24);
        // every automorphism is determined by its action on the points
        let restricted: BTreeSet<Vec<usize>> = auts.iter().map(|a| a[..4].to_vec()).collect();
        assert_eq!(restricted.len(), 24);
        assert_eq!(auts, brute_force_automorphisms(g));
    }

    #[test]
    fn colored_filters() {
        let c4 = Bigraph::cycle4();
        let mono = ColoredBigraph::monochromatic(c4.clone(), 7);
        assert_eq!(colored_automorphisms(&mono).unwrap().len(), 4);
        // recolor edge (a,c): only maps fixing {a}, {c} survive; among C4's
        // four automorphisms that is the identity alone
        let mut colors = vec![0; 4];
        colors[c4.edge_id(0, 2).unwrap()] = 1;
        let h = ColoredBigraph::new(c4.clone(), colors).unwrap();
        let expected: Vec<VertexMap> = automorphisms(&c4)
            .unwrap()
            .into_iter()
            .filter(|m| c4.edges().iter().enumerate().all(|(k, &(l, r))| {
                h.colors[k] == h.colors[c4.edge_id(m[l], m[r]).unwrap()]
            }))
            .collect();
        assert_eq!(colored_automorphisms(&h).unwrap(), expected);
        assert_eq!(expected, vec![identity(4)]);

        let nat = build_incidence(4, &[2, 3]).unwrap();
        assert_eq!(colored_automorphisms(&nat.colored).unwrap().len(), 24);
    }

    #[test]
    fn group_closure() {
        let g = Bigraph::book(2);
        let auts = automorphisms(&g).unwrap();
        let set: BTreeSet<&VertexMap> = auts.iter().collect();
        for a in &auts {
            assert!(set.contains(&inverse(a)));
            for b in &auts {
                assert!(set.contains(&compose(a, b)));
            }
        }
        assert_eq!(auts, brute_force_automorphisms(&g));
    }

    #[test]
    fn size_cap() {
        let big = Bigraph::star(30);
        assert_eq!(automorphisms(&big), Err(Error::TooLarge(31, MAX_AUTOMORPHISM_VERTICES)));
    }

    #[test]
    fn canonical_forms_detect_isomorphism() {
        let c4 = Bigraph::cycle4();
        let renamed = c4.relabel(|s| format!("z{s}")).unwrap();
        assert!(are_isomorphic(&c4, &renamed));
        assert!(!are_isomorphic(&c4, &Bigraph::star(4)));
        // path a-c-b-d vs star: same sizes, different shape
        let path = Bigraph::new(["a", "b"], ["c", "d"], [("a", "c"), ("b", "c"), ("b", "d")]).unwrap();
        let other = Bigraph::new(["a", "b"], ["c", "d"], [("a", "c"), ("a", "d"), ("b", "c")]).unwrap();
        assert!(are_isomorphic(&path, &other));
        let flipped = Bigraph::new(["a", "b"], ["c", "d"], [("a", "c"), ("a", "d"), ("b", "d")]).unwrap();
        assert!(are_isomorphic(&path, &flipped));
        // labels must be fixed pointwise
        let f1 = canonical_form_labeled(&c4, &[0, 2]);
        let f2 = canonical_form_labeled(&c4, &[1, 3]);
        let f3 = canonical_form_labeled(&c4, &[2, 0]);
        assert_eq!(f1, f2);
        assert_ne!(f1, f3);
    }

    #[test]
    fn endomorphisms_of_c4() {
        // each side maps into a side of size two: 2^2 * 2^2 maps, all edge preserving
        assert_eq!(endomorphisms(&Bigraph::cycle4()).len(), 16);
        assert!(endomorphisms(&Bigraph::star(2)).iter().all(|m| is_endomorphism(&Bigraph::star(2), m)));
    }
}
