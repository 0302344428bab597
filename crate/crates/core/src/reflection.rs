//! Type-A reflection machinery.
//!
//! The symmetric group `S_n` acts on `R^n` by permuting coordinates; its
//! reflections are the transpositions `t_{a,b}` with positive roots
//! `e_a - e_b` (`a < b`) and simple reflections `t_{i,i+1}`. Dropping
//! `t_{k,k+1}` from the simple reflections generates the parabolic subgroup
//! `S_k × S_{n-k}`, whose left cosets correspond to `k`-subsets through
//! `σ ↦ σ([k])`. Under that dictionary the left-reflection bigraph with
//! blocks `k_1, ..., k_t` is the incidence bigraph of the complete hypergraph
//! on `[n]` with those uniformities, and the fold of a transposition puts a
//! block vertex `U` on the left side exactly when the chamber point `1_U`
//! lies on the positive side of `e_a - e_b`.

use std::collections::{BTreeMap, BTreeSet};

use crate::bigraph::{Bigraph, ColoredBigraph};
use crate::error::{Error, Result};
use crate::fold::Fold;

/// A permutation of `1..=n` stored zero-based.
pub type Permutation = Vec<usize>;

#[derive(Clone, Debug)]
pub struct TypeAReflectionSystem {
    pub n: usize,
}

impl TypeAReflectionSystem {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        Ok(TypeAReflectionSystem { n })
    }

    /// All transpositions `(a, b)`, `1 ≤ a < b ≤ n`, in lexicographic order.
    pub fn reflections(&self) -> Vec<(usize, usize)> {
        (1..=self.n).flat_map(|a| (a + 1..=self.n).map(move |b| (a, b))).collect()
    }

    pub fn simple_reflections(&self) -> Vec<(usize, usize)> {
        (1..self.n).map(|i| (i, i + 1)).collect()
    }

    /// Simple reflections generating the parabolic subgroup for block size `k`.
    pub fn subset_choice(&self, k: usize) -> Vec<(usize, usize)> {
        self.simple_reflections().into_iter().filter(|&(i, _)| i != k).collect()
    }

    /// Closure of the transpositions in `gens` as a set of permutations.
    pub fn generated_subgroup(&self, gens: &[(usize, usize)]) -> BTreeSet<Permutation> {
        let id: Permutation = (0..self.n).collect();
        let mut group = BTreeSet::from([id.clone()]);
        let mut frontier = vec![id];
        while let Some(p) = frontier.pop() {
            for &(a, b) in gens {
                let mut q = p.clone();
                q.swap(a - 1, b - 1);
                if group.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        group
    }

    /// `σ([k])` as a sorted one-based subset.
    pub fn coset_subset(&self, sigma: &[usize], k: usize) -> Vec<usize> {
        let mut s: Vec<usize> = sigma[..k].iter().map(|&x| x + 1).collect();
        s.sort_unstable();
        s
    }

    /// Positive-side test for a transposition on a chamber point.
    pub fn on_positive_side(point: &[f64], a: usize, b: usize) -> bool {
        point[a - 1] - point[b - 1] > 0.0
    }
}

/// Incidence bigraph of the complete hypergraph on `[n]` with uniformities `ks`,
/// carrying its natural coloring (edge color = block index, starting at 1).
#[derive(Clone, Debug)]
pub struct IncidenceBigraph {
    pub n: usize,
    pub uniformities: Vec<usize>,
    pub colored: ColoredBigraph,
    /// For each right vertex (in global order), its subset and block index.
    pub blocks: Vec<(Vec<usize>, usize)>,
}

pub fn right_vertex_id(subset: &[usize], block: usize) -> String {
    let inner: Vec<String> = subset.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}@{}", inner.join(","), block)
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn build_incidence(n: usize, ks: &[usize]) -> Result<IncidenceBigraph> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if ks.is_empty() {
        return Err(Error::InvalidParameter("at least one uniformity is required".into()));
    }
    if let Some(&k) = ks.iter().find(|&&k| k == 0 || k > n) {
        return Err(Error::InvalidParameter(format!("uniformity {k} outside 1..={n}")));
    }
    let left: Vec<String> = (1..=n).map(|v| v.to_string()).collect();
    let mut right = Vec::new();
    let mut edges = Vec::new();
    for (i, &k) in ks.iter().enumerate() {
        for u in k_subsets(n, k) {
            let id = right_vertex_id(&u, i + 1);
            for v in &u {
                edges.push((v.to_string(), id.clone()));
            }
            right.push(id);
        }
    }
    let graph = Bigraph::new(left, right, edges)?;
    let blocks: Vec<(Vec<usize>, usize)> = graph.right().map(|w| parse_right_id(graph.name(w))).collect();
    let v1 = graph.v1();
    let colored = ColoredBigraph::from_fn(graph, |_, r| blocks[r - v1].1);
    Ok(IncidenceBigraph { n, uniformities: ks.to_vec(), colored, blocks })
}

fn parse_right_id(id: &str) -> (Vec<usize>, usize) {
    let (set, block) = id.rsplit_once('@').expect("right ids carry a block index");
    let inner = set.trim_start_matches('{').trim_end_matches('}');
    let subset = if inner.is_empty() { Vec::new() } else { inner.split(',').map(|x| x.parse().unwrap()).collect() };
    (subset, block.parse().unwrap())
}

impl IncidenceBigraph {
    /// Recovers the incidence structure of a graph built by [`build_incidence`]
    /// from its vertex ids.
    pub fn recognize(g: &Bigraph) -> Result<Self> {
        let not_incidence = || Error::InvalidParameter("graph is not an incidence bigraph".into());
        let mut ks: BTreeMap<usize, usize> = BTreeMap::new();
        for w in g.right() {
            let id = g.name(w);
            let (set, block) = id.rsplit_once('@').ok_or_else(not_incidence)?;
            let block: usize = block.parse().map_err(|_| not_incidence())?;
            let size = set.matches(',').count() + 1;
            if *ks.entry(block).or_insert(size) != size {
                return Err(not_incidence());
            }
        }
        let uniformities: Vec<usize> = ks.values().copied().collect();
        if ks.keys().copied().ne(1..=uniformities.len()) {
            return Err(not_incidence());
        }
        let built = build_incidence(g.v1(), &uniformities).map_err(|_| not_incidence())?;
        if built.graph() != g {
            return Err(not_incidence());
        }
        Ok(built)
    }

    pub fn graph(&self) -> &Bigraph {
        &self.colored.graph
    }

    /// Global index of point `p` (one-based).
    pub fn point(&self, p: usize) -> usize {
        self.graph().index_of(&p.to_string()).expect("point exists")
    }

    /// Reflection fold of the transposition `t_{a,b}`.
    pub fn reflection_fold(&self, a: usize, b: usize) -> Result<Fold> {
        if !(1 <= a && a < b && b <= self.n) {
            return Err(Error::InvalidParameter(format!("need 1 <= a < b <= {}, got ({a}, {b})", self.n)));
        }
        let g = self.graph();
        let swap = |x: usize| if x == a { b } else if x == b { a } else { x };
        let mut phi = vec![0; g.v()];
        let mut left = vec![false; g.v()];
        for p in 1..=self.n {
            let v = self.point(p);
            phi[v] = self.point(swap(p));
            left[v] = TypeAReflectionSystem::on_positive_side(&indicator(self.n, &[p]), a, b);
        }
        for w in g.right() {
            let (subset, block) = &self.blocks[w - g.v1()];
            let mut image: Vec<usize> = subset.iter().map(|&x| swap(x)).collect();
            image.sort_unstable();
            phi[w] = g.index_of(&right_vertex_id(&image, *block)).expect("image subset exists");
            left[w] = TypeAReflectionSystem::on_positive_side(&indicator(self.n, subset), a, b);
        }
        Ok(Fold { phi, left })
    }

    /// One fold per transposition, in lexicographic `(a, b)` order.
    pub fn reflection_fold_pool(&self) -> Vec<Fold> {
        TypeAReflectionSystem { n: self.n }
            .reflections()
            .into_iter()
            .map(|(a, b)| self.reflection_fold(a, b).expect("valid transposition"))
            .collect()
    }
}

fn indicator(n: usize, subset: &[usize]) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for &s in subset {
        x[s - 1] = 1.0;
    }
    x
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}
