//! Exact checkers for the combinatorial hypotheses of the strong Sidorenko
//! criteria, and a verifier for reflective tree decompositions.
//!
//! A passing checker certifies hypotheses only. Conclusions about densities
//! are spot-checked separately by the randomized testers.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::automorphism::{canonical_form_labeled, colored_automorphisms, orbits};
use crate::bigraph::{Bigraph, BigraphJson, ColoredBigraph, Flag, VertexMap};
use crate::error::{Error, Result};
use crate::testers::{test_left_weak_holder, TrialConfig, Verdict};

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of right vertices of each degree, together with `v_1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub v1: usize,
    pub counts: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRow {
    pub k: usize,
    pub d_k: usize,
    /// `C(v_1, k)` for the large-right check, `C(v_1, r) C(r, k)` for divisibility.
    pub bound: u128,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub check: String,
    pub pass: bool,
    pub rows: Vec<DegreeRow>,
}

impl DegreeProfile {
    pub fn new(v1: usize, counts: BTreeMap<usize, usize>) -> Result<Self> {
        if let Some(&k) = counts.keys().find(|&&k| k > v1) {
            return Err(Error::InvalidParameter(format!("degree {k} exceeds v1 = {v1}")));
        }
        let counts = counts.into_iter().filter(|&(_, d)| d > 0).collect();
        Ok(DegreeProfile { v1, counts })
    }

    /// Profile of a graph without isolated vertices.
    pub fn of(g: &Bigraph) -> Result<Self> {
        if g.has_isolated() {
            return Err(Error::IsolatedVertices);
        }
        Ok(DegreeProfile { v1: g.v1(), counts: g.right_degree_counts() })
    }

    pub fn d(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// Largest right degree, 0 when there are no right vertices.
    pub fn max_degree(&self) -> usize {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    /// `d_k = 0` or `d_k ≥ C(v_1, k)` for every `k ≥ 2`.
    pub fn largeright(&self) -> ProfileReport {
        let rows: Vec<DegreeRow> = (2..=self.max_degree())
            .map(|k| {
                let (d_k, bound) = (self.d(k), binomial(self.v1, k));
                DegreeRow { k, d_k, bound, ok: d_k == 0 || d_k as u128 >= bound }
            })
            .collect();
        ProfileReport { check: "largeright".into(), pass: rows.iter().all(|r| r.ok), rows }
    }

    /// `C(v_1, r) C(r, k)` divides `d_k` for every `2 ≤ k ≤ r`.
    pub fn divisibility(&self) -> ProfileReport {
        let r = self.max_degree();
        let rows: Vec<DegreeRow> = (2..=r)
            .map(|k| {
                let d_k = self.d(k);
                let bound = binomial(self.v1, r) * binomial(r, k);
                DegreeRow { k, d_k, bound, ok: (d_k as u128).is_multiple_of(bound) }
            })
            .collect();
        ProfileReport { check: "conlonlee".into(), pass: rows.iter().all(|r| r.ok), rows }
    }

    /// A bigraph with this profile: left vertices `1..=v1`, right vertices of
    /// degree `k` cycling through the `k`-subsets in lexicographic order.
    pub fn realize(&self) -> Result<Bigraph> {
        let left: Vec<String> = (1..=self.v1).map(|i| i.to_string()).collect();
        let mut right = Vec::new();
        let mut edges = Vec::new();
        for (&k, &d) in &self.counts {
            let subsets = k_subsets(self.v1, k);
            for j in 0..d {
                let name = format!("w{k}_{j}");
                for &v in &subsets[j % subsets.len()] {
                    edges.push((left[v].clone(), name.clone()));
                }
                right.push(name);
            }
        }
        let g = Bigraph::new(left, right, edges)?;
        if g.has_isolated() {
            return Err(Error::IsolatedVertices);
        }
        Ok(g)
    }
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub fn check_largeright(g: &Bigraph) -> Result<ProfileReport> {
    Ok(DegreeProfile::of(g)?.largeright())
}

pub fn check_conlonlee_divisibility(g: &Bigraph) -> Result<ProfileReport> {
    Ok(DegreeProfile::of(g)?.divisibility())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precondition {
    pub name: String,
    pub passed: bool,
    /// Set for checks backed by random trials rather than exact computation.
    pub evidence_only: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRow {
    /// Smallest member of the orbit, as left vertex ids.
    pub representative: Vec<String>,
    pub orbit_size: usize,
    /// `Σ_{U'} d_G(U')` over the orbit.
    pub sum_g: usize,
    pub sum_h: usize,
    pub zero_iff_zero: bool,
    pub dominates: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub preconditions: Vec<Precondition>,
    pub orbits: Vec<OrbitRow>,
    /// Every exact precondition and every orbit condition holds.
    pub pass: bool,
    pub note: String,
}

impl OrbitReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Trials used for the numeric left-weak Hölder precheck.
pub const HOLDER_EVIDENCE_TRIALS: usize = 200;

fn color_edge_transitive(h: &ColoredBigraph, autos: &[VertexMap]) -> bool {
    let g = &h.graph;
    let gens: Vec<VertexMap> = autos
        .iter()
        .map(|s| g.edges().iter().map(|&(l, r)| g.edge_id(s[l], s[r]).expect("automorphisms keep edges")).collect())
        .collect();
    let mut seen = BTreeSet::new();
    orbits(g.e(), &gens).iter().all(|o| seen.insert(h.colors[o[0]]))
}

fn neighborhood_counts(g: &Bigraph) -> BTreeMap<Vec<usize>, usize> {
    let mut out = BTreeMap::new();
    for w in g.right() {
        let u = g.neighbors(w).to_vec();
        if u.len() >= 2 {
            *out.entry(u).or_insert(0) += 1;
        }
    }
    out
}

/// Checks the orbit-sum hypotheses of `g` against the symmetries of `h`.
///
/// Only orbits meeting some neighborhood of `g` or `h` are listed; the
/// others have both sums zero. Summing over orbits instead of over `Aut(H)`
/// scales both sides by the same stabilizer order.
pub fn check_orbit_hypotheses(g: &Bigraph, h: &ColoredBigraph) -> Result<OrbitReport> {
    let hg = &h.graph;
    let mut pre = Vec::new();
    let mut exact = |name: &str, passed: bool| {
        pre.push(Precondition { name: name.into(), passed, evidence_only: false, detail: None });
        passed
    };
    let same_left = g.v1() == hg.v1() && g.left().all(|v| g.name(v) == hg.name(v));
    let mut ok = exact("same-left-vertices", same_left);
    ok &= exact("h-right-uniform", h.is_right_uniform());
    ok &= exact("h-no-isolated", !hg.has_isolated());
    ok &= exact("h-non-trivial", hg.e() > 0);
    ok &= exact("g-no-isolated", !g.has_isolated());
    ok &= exact("h-left-color-regular", h.is_left_color_regular());
    let autos = colored_automorphisms(h)?;
    ok &= exact("h-color-edge-transitive", color_edge_transitive(h, &autos));
    if h.is_left_color_regular() && hg.v1() > 0 {
        let cfg = TrialConfig { trials: HOLDER_EVIDENCE_TRIALS, ..Default::default() };
        let r = test_left_weak_holder(h, &cfg)?;
        pre.push(Precondition {
            name: "h-left-weak-holder".into(),
            passed: r.verdict == Verdict::HoldsOnAllTrials,
            evidence_only: true,
            detail: Some(format!("{} trials, worst margin {:e}", r.trials, r.worst_margin)),
        });
        ok &= r.verdict != Verdict::Violated;
    }
    let mut orbit_rows = Vec::new();
    if same_left {
        let left_actions: BTreeSet<Vec<usize>> = autos.iter().map(|s| s[..hg.v1()].to_vec()).collect();
        let dg = neighborhood_counts(g);
        let dh = neighborhood_counts(hg);
        let mut done: BTreeSet<Vec<usize>> = BTreeSet::new();
        for u in dg.keys().chain(dh.keys()) {
            if done.contains(u) {
                continue;
            }
            let orbit: BTreeSet<Vec<usize>> = left_actions
                .iter()
                .map(|s| {
                    let mut img: Vec<usize> = u.iter().map(|&v| s[v]).collect();
                    img.sort_unstable();
                    img
                })
                .collect();
            let sum_g = orbit.iter().map(|x| dg.get(x).copied().unwrap_or(0)).sum::<usize>();
            let sum_h = orbit.iter().map(|x| dh.get(x).copied().unwrap_or(0)).sum::<usize>();
            let rep = orbit.iter().next().expect("orbit contains u");
            orbit_rows.push(OrbitRow {
                representative: rep.iter().map(|&v| g.name(v).to_string()).collect(),
                orbit_size: orbit.len(),
                sum_g,
                sum_h,
                zero_iff_zero: (sum_g == 0) == (sum_h == 0),
                dominates: sum_g >= sum_h,
            });
            done.extend(orbit);
        }
    }
    orbit_rows.sort_by(|a, b| (a.representative.len(), &a.representative).cmp(&(b.representative.len(), &b.representative)));
    let pass = ok && orbit_rows.iter().all(|r| r.zero_iff_zero && r.dominates);
    Ok(OrbitReport {
        preconditions: pre,
        orbits: orbit_rows,
        pass,
        note: "left-weak Hölder is supported by random trials only; the other conditions are exact".into(),
    })
}

/// Bags are sets of vertex ids; `tree_edges` index into `bags`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectiveTreeDecomposition {
    pub bags: Vec<BTreeSet<String>>,
    pub tree_edges: Vec<(usize, usize)>,
}

impl ReflectiveTreeDecomposition {
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("decompositions serialize")
    }

    /// Bag paths from `root`: `parent[i]` in a BFS tree, `None` if not a tree.
    fn parents(&self, root: usize) -> Option<Vec<Option<usize>>> {
        let n = self.bags.len();
        if n == 0 || self.tree_edges.len() != n - 1 {
            return None;
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.tree_edges {
            if a >= n || b >= n || a == b {
                return None;
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = vec![root];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    queue.push(y);
                }
            }
        }
        seen.iter().all(|&s| s).then_some(parent)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RtdReport {
    pub valid: bool,
    pub failure: Option<String>,
    /// The common 2-core of the bags, when valid.
    pub core: Option<BigraphJson>,
}

impl RtdReport {
    fn fail(msg: String) -> Self {
        RtdReport { valid: false, failure: Some(msg), core: None }
    }
}

fn show(bag: &BTreeSet<String>) -> String {
    format!("{{{}}}", bag.iter().cloned().collect::<Vec<_>>().join(","))
}

/// Verifies the four decomposition conditions in order and reports the first
/// one that fails.
pub fn verify_rtd(g: &Bigraph, t: &ReflectiveTreeDecomposition) -> RtdReport {
    if g.e() == 0 || !g.is_connected() {
        return RtdReport::fail("graph must be connected with at least one edge".into());
    }
    let Some(parent) = t.parents(0) else {
        return RtdReport::fail("bags and tree edges do not form a tree".into());
    };
    let mut masks = Vec::with_capacity(t.bags.len());
    for bag in &t.bags {
        let mut mask = vec![false; g.v()];
        for name in bag {
            match g.index_of(name) {
                Some(v) => mask[v] = true,
                None => return RtdReport::fail(format!("bag {} names unknown vertex {name}", show(bag))),
            }
        }
        masks.push(mask);
    }
    if let Some(v) = g.vertices().find(|&v| masks.iter().all(|m| !m[v])) {
        return RtdReport::fail(format!("vertex {} lies in no bag", g.name(v)));
    }
    if let Some(&(l, r)) = g.edges().iter().find(|&&(l, r)| masks.iter().all(|m| !(m[l] && m[r]))) {
        return RtdReport::fail(format!("edge ({}, {}) lies in no bag", g.name(l), g.name(r)));
    }
    let depth: Vec<usize> = (0..t.bags.len())
        .map(|mut i| {
            let mut d = 0;
            while let Some(p) = parent[i] {
                i = p;
                d += 1;
            }
            d
        })
        .collect();
    let path = |mut a: usize, mut b: usize| -> Vec<usize> {
        let (mut up, mut down) = (vec![], vec![]);
        while a != b {
            if depth[a] >= depth[b] {
                up.push(a);
                a = parent[a].expect("non-root");
            } else {
                down.push(b);
                b = parent[b].expect("non-root");
            }
        }
        up.push(a);
        up.extend(down.into_iter().rev());
        up
    };
    for a in 0..t.bags.len() {
        for b in a + 1..t.bags.len() {
            let shared: BTreeSet<&String> = t.bags[a].intersection(&t.bags[b]).collect();
            for c in path(a, b) {
                if !shared.iter().all(|v| t.bags[c].contains(*v)) {
                    return RtdReport::fail(format!(
                        "bag {} on the path from {} to {} misses part of their intersection",
                        show(&t.bags[c]),
                        show(&t.bags[a]),
                        show(&t.bags[b])
                    ));
                }
            }
        }
    }
    let flag = |own: usize, other: usize| -> Flag {
        let sub = g.induced_by_mask(&masks[own]);
        let labels = t.bags[own].intersection(&t.bags[other]).map(|v| sub.index_of(v).expect("bag member")).collect();
        Flag::from_indices(sub, labels).expect("distinct labels").two_core()
    };
    for &(a, b) in &t.tree_edges {
        let (fa, fb) = (flag(a, b), flag(b, a));
        if canonical_form_labeled(&fa.graph, &fa.labels) != canonical_form_labeled(&fb.graph, &fb.labels) {
            return RtdReport::fail(format!(
                "flag 2-cores across the tree edge {} -- {} are not isomorphic",
                show(&t.bags[a]),
                show(&t.bags[b])
            ));
        }
    }
    let core = g.induced_by_mask(&masks[0]).two_core();
    RtdReport { valid: true, failure: None, core: Some(core.to_json()) }
}
