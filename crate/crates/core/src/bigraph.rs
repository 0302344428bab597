//! Bigraphs, flags and edge-colored bigraphs.
//!
//! Vertices carry opaque string ids. Internally every vertex has a global
//! index: left vertices occupy `0..v1` and right vertices `v1..v1 + v2`, both
//! in sorted id order, so every list this module emits is deterministic.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = String;

/// A vertex map over global indices (`perm[v]` is the image of `v`).
pub type VertexMap = Vec<usize>;

#[derive(Clone, Debug)]
pub struct Bigraph {
    names: Vec<VertexId>,
    v1: usize,
    edges: Vec<(usize, usize)>,
    index: HashMap<VertexId, usize>,
    adj: Vec<Vec<usize>>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl PartialEq for Bigraph {
    fn eq(&self, other: &Self) -> bool {
        self.v1 == other.v1 && self.names == other.names && self.edges == other.edges
    }
}

impl Eq for Bigraph {}

impl Bigraph {
    pub fn new<L, R, A, B, E>(left: L, right: R, edges: E) -> Result<Self>
    where
        L: IntoIterator,
        L::Item: Into<String>,
        R: IntoIterator,
        R::Item: Into<String>,
        E: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut left: Vec<String> = left.into_iter().map(Into::into).collect();
        let mut right: Vec<String> = right.into_iter().map(Into::into).collect();
        left.sort();
        right.sort();
        let mut seen = BTreeSet::new();
        for name in left.iter().chain(right.iter()) {
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        let v1 = left.len();
        let names: Vec<String> = left.into_iter().chain(right).collect();
        let index: HashMap<String, usize> =
            names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let mut pairs = Vec::new();
        let mut dedup = BTreeSet::new();
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let l = *index.get(a).ok_or_else(|| Error::UnknownVertex(a.to_string()))?;
            let r = *index.get(b).ok_or_else(|| Error::UnknownVertex(b.to_string()))?;
            if l >= v1 || r < v1 {
                return Err(Error::WrongSide(a.to_string(), b.to_string()));
            }
            if !dedup.insert((l, r)) {
                return Err(Error::DuplicateEdge(a.to_string(), b.to_string()));
            }
            pairs.push((l, r));
        }
        Ok(Self::from_parts(names, v1, pairs))
    }

    /// Builds a graph from names already sorted within each side and edges
    /// given in global indices.
    pub(crate) fn from_parts(names: Vec<VertexId>, v1: usize, mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let mut adj = vec![Vec::new(); names.len()];
        let mut edge_index = HashMap::with_capacity(edges.len());
        for (k, &(l, r)) in edges.iter().enumerate() {
            adj[l].push(r);
            adj[r].push(l);
            edge_index.insert((l, r), k);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Bigraph { names, v1, edges, index, adj, edge_index }
    }

    pub fn empty() -> Self {
        Self::from_parts(Vec::new(), 0, Vec::new())
    }

    pub fn v1(&self) -> usize {
        self.v1
    }

    pub fn v2(&self) -> usize {
        self.names.len() - self.v1
    }

    pub fn v(&self) -> usize {
        self.names.len()
    }

    pub fn e(&self) -> usize {
        self.edges.len()
    }

    pub fn left(&self) -> std::ops::Range<usize> {
        0..self.v1
    }

    pub fn right(&self) -> std::ops::Range<usize> {
        self.v1..self.names.len()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.names.len()
    }

    pub fn is_left(&self, v: usize) -> bool {
        v < self.v1
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[VertexId] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub(crate) fn lookup(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Edges as `(left, right)` global index pairs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Position of the edge between `a` and `b` (in either order) in [`Self::edges`].
    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edge_index.get(&key).copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_id(a, b).is_some()
    }

    pub fn edge_names(&self) -> Vec<(String, String)> {
        self.edges
            .iter()
            .map(|&(l, r)| (self.names[l].clone(), self.names[r].clone()))
            .collect()
    }

    pub fn isolated(&self) -> Vec<usize> {
        self.vertices().filter(|&v| self.degree(v) == 0).collect()
    }

    pub fn has_isolated(&self) -> bool {
        self.vertices().any(|v| self.degree(v) == 0)
    }

    pub fn is_left_regular(&self) -> bool {
        let mut it = self.left().map(|v| self.degree(v));
        match it.next() {
            Some(d) => it.all(|x| x == d),
            None => true,
        }
    }

    pub fn is_right_regular(&self) -> bool {
        let mut it = self.right().map(|v| self.degree(v));
        match it.next() {
            Some(d) => it.all(|x| x == d),
            None => true,
        }
    }

    pub fn is_biregular(&self) -> bool {
        self.is_left_regular() && self.is_right_regular()
    }

    /// Subgraph induced by a vertex mask over global indices.
    pub fn induced_by_mask(&self, keep: &[bool]) -> Bigraph {
        let mut map = vec![usize::MAX; self.v()];
        let mut names = Vec::new();
        let mut v1 = 0;
        for v in self.vertices() {
            if keep[v] {
                map[v] = names.len();
                names.push(self.names[v].clone());
                if v < self.v1 {
                    v1 += 1;
                }
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(l, r)| keep[l] && keep[r])
            .map(|&(l, r)| (map[l], map[r]))
            .collect();
        Bigraph::from_parts(names, v1, edges)
    }

    pub fn induced_subgraph<S: AsRef<str>>(&self, u: &[S]) -> Result<Bigraph> {
        let mut keep = vec![false; self.v()];
        for name in u {
            keep[self.lookup(name.as_ref())?] = true;
        }
        Ok(self.induced_by_mask(&keep))
    }

    /// Spanning subgraph keeping the edges whose mask entry is set.
    pub fn spanning_by_mask(&self, keep: &[bool]) -> Bigraph {
        let edges = self
            .edges
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(&e, _)| e)
            .collect();
        Bigraph::from_parts(self.names.clone(), self.v1, edges)
    }

    pub fn without_isolated(&self) -> Bigraph {
        let keep: Vec<bool> = self.vertices().map(|v| self.degree(v) > 0).collect();
        self.induced_by_mask(&keep)
    }

    /// Connected components over the vertices not excluded, each sorted.
    pub fn components_excluding(&self, excluded: &[bool]) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.v()];
        let mut out = Vec::new();
        for s in self.vertices() {
            if excluded[s] || comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut head = 0;
            while head < members.len() {
                let x = members[head];
                head += 1;
                for &y in &self.adj[x] {
                    if !excluded[y] && comp[y] == usize::MAX {
                        comp[y] = id;
                        members.push(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_excluding(&vec![false; self.v()])
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// The 2-core: repeatedly delete vertices of degree below two.
    ///
    /// Stripping acts on each component separately, so on a disconnected
    /// graph this is the union of the componentwise 2-cores.
    pub fn two_core(&self) -> Bigraph {
        let keep = strip_low_degree(self, &vec![false; self.v()]);
        self.induced_by_mask(&keep)
    }

    /// Disjoint union; vertex ids are prefixed with `a:` and `b:`.
    pub fn disjoint_union(&self, other: &Bigraph) -> Bigraph {
        let tag = |p: &str, g: &Bigraph, r: std::ops::Range<usize>| -> Vec<String> {
            r.map(|v| format!("{p}:{}", g.name(v))).collect()
        };
        let left: Vec<String> = tag("a", self, self.left()).into_iter().chain(tag("b", other, other.left())).collect();
        let right: Vec<String> =
            tag("a", self, self.right()).into_iter().chain(tag("b", other, other.right())).collect();
        let edges = self
            .edge_names()
            .into_iter()
            .map(|(l, r)| (format!("a:{l}"), format!("a:{r}")))
            .chain(other.edge_names().into_iter().map(|(l, r)| (format!("b:{l}"), format!("b:{r}"))))
            .collect::<Vec<_>>();
        Bigraph::new(left, right, edges).expect("prefixed ids are distinct")
    }

    /// Renames every vertex through `f`; the result is re-sorted.
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Result<Bigraph> {
        let left: Vec<String> = self.left().map(|v| f(self.name(v))).collect();
        let right: Vec<String> = self.right().map(|v| f(self.name(v))).collect();
        let edges: Vec<(String, String)> =
            self.edge_names().into_iter().map(|(l, r)| (f(&l), f(&r))).collect();
        Bigraph::new(left, right, edges)
    }

    /// Degree of every right vertex, keyed by degree.
    pub fn right_degree_counts(&self) -> BTreeMap<usize, usize> {
        let mut counts = BTreeMap::new();
        for w in self.right() {
            *counts.entry(self.degree(w)).or_insert(0) += 1;
        }
        counts
    }

    // --- presets ---

    /// The single edge `ρ = ({1}, {2}, {(1,2)})`.
    pub fn edge() -> Bigraph {
        Bigraph::new(["1"], ["2"], [("1", "2")]).unwrap()
    }

    /// `K_{1,d}`: center `0` on the left, leaves `1..=d` on the right.
    pub fn star(d: usize) -> Bigraph {
        let leaves: Vec<String> = (1..=d).map(|i| i.to_string()).collect();
        let edges: Vec<(String, String)> = leaves.iter().map(|l| ("0".to_string(), l.clone())).collect();
        Bigraph::new(["0"], leaves, edges).unwrap()
    }

    /// `K_{d,1}`: leaves `1..=d` on the left, center `0` on the right.
    pub fn dual_star(d: usize) -> Bigraph {
        let leaves: Vec<String> = (1..=d).map(|i| i.to_string()).collect();
        let edges: Vec<(String, String)> = leaves.iter().map(|l| (l.clone(), "0".to_string())).collect();
        Bigraph::new(leaves, ["0"], edges).unwrap()
    }

    /// `C4` with left `{a, b}` and right `{c, d}`.
    pub fn cycle4() -> Bigraph {
        Bigraph::new(["a", "b"], ["c", "d"], [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]).unwrap()
    }

    /// Book bigraph `B_k`: `k` four-cycles sharing the edge `(p, q)`.
    ///
    /// Page `i` adds a left vertex `bi` and a right vertex `ai` with edges
    /// `p-ai`, `bi-ai` and `bi-q`.
    pub fn book(k: usize) -> Bigraph {
        let mut left = vec!["p".to_string()];
        let mut right = vec!["q".to_string()];
        let mut edges = vec![("p".to_string(), "q".to_string())];
        for i in 1..=k {
            let (a, b) = (format!("a{i}"), format!("b{i}"));
            edges.push(("p".into(), a.clone()));
            edges.push((b.clone(), a.clone()));
            edges.push((b.clone(), "q".into()));
            left.push(b);
            right.push(a);
        }
        Bigraph::new(left, right, edges).unwrap()
    }

    /// Two-sided vertex map given by names to a global index map.
    pub fn map_from_names(&self, pairs: &BTreeMap<String, String>) -> Result<VertexMap> {
        let mut map = vec![usize::MAX; self.v()];
        for (a, b) in pairs {
            map[self.lookup(a)?] = self.lookup(b)?;
        }
        if map.contains(&usize::MAX) {
            return Err(Error::NotABijection);
        }
        Ok(map)
    }

    pub fn map_to_names(&self, map: &[usize]) -> BTreeMap<String, String> {
        map.iter().enumerate().map(|(a, &b)| (self.names[a].clone(), self.names[b].clone())).collect()
    }

    pub fn to_json(&self) -> BigraphJson {
        BigraphJson {
            v1: self.left().map(|v| self.names[v].clone()).collect(),
            v2: self.right().map(|v| self.names[v].clone()).collect(),
            edges: self.edge_names().into_iter().map(|(l, r)| [l, r]).collect(),
            edge_colors: None,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Bigraph> {
        let raw: BigraphJson = serde_json::from_str(s)?;
        raw.to_bigraph()
    }
}

/// Deletes vertices of degree below two (never the protected ones) until none
/// remain; returns the surviving mask.
pub(crate) fn strip_low_degree(g: &Bigraph, protected: &[bool]) -> Vec<bool> {
    let mut alive = vec![true; g.v()];
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut queue: Vec<usize> = g.vertices().filter(|&v| !protected[v] && deg[v] < 2).collect();
    while let Some(v) = queue.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &u in g.neighbors(v) {
            if alive[u] {
                deg[u] -= 1;
                if !protected[u] && deg[u] < 2 {
                    queue.push(u);
                }
            }
        }
    }
    alive
}

/// Amalgamation over the left side: shared left vertex set, right sides and
/// edge sets united.
pub fn amalgamate_left(parts: &[Bigraph]) -> Result<Bigraph> {
    let Some(first) = parts.first() else {
        return Ok(Bigraph::empty());
    };
    let left: Vec<String> = first.left().map(|v| first.name(v).to_string()).collect();
    let mut right = Vec::new();
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for g in parts {
        let l: Vec<&str> = g.left().map(|v| g.name(v)).collect();
        if l.len() != left.len() || l.iter().zip(&left).any(|(a, b)| *a != b) {
            return Err(Error::LeftSidesDiffer);
        }
        for w in g.right() {
            if !seen.insert(g.name(w).to_string()) {
                return Err(Error::RightCollision(g.name(w).to_string()));
            }
            right.push(g.name(w).to_string());
        }
        edges.extend(g.edge_names());
    }
    Bigraph::new(left, right, edges)
}

/// A partially labeled bigraph; `labels` lists global indices in label order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    pub graph: Bigraph,
    pub labels: Vec<usize>,
}

impl Flag {
    pub fn new<S: AsRef<str>>(graph: Bigraph, labels: &[S]) -> Result<Flag> {
        let idx = labels
            .iter()
            .map(|s| graph.index_of(s.as_ref()).ok_or(Error::BadLabeling))
            .collect::<Result<Vec<_>>>()?;
        Flag::from_indices(graph, idx)
    }

    pub fn from_indices(graph: Bigraph, labels: Vec<usize>) -> Result<Flag> {
        let distinct: BTreeSet<_> = labels.iter().collect();
        if distinct.len() != labels.len() || labels.iter().any(|&v| v >= graph.v()) {
            return Err(Error::BadLabeling);
        }
        Ok(Flag { graph, labels })
    }

    /// `G^L`: every left vertex labeled, in order.
    pub fn all_left(graph: Bigraph) -> Flag {
        let labels = graph.left().collect();
        Flag { graph, labels }
    }

    pub fn label_names(&self) -> Vec<&str> {
        self.labels.iter().map(|&v| self.graph.name(v)).collect()
    }

    /// Flag 2-core: labeled vertices are never deleted.
    pub fn two_core(&self) -> Flag {
        let mut protected = vec![false; self.graph.v()];
        for &v in &self.labels {
            protected[v] = true;
        }
        let keep = strip_low_degree(&self.graph, &protected);
        let core = self.graph.induced_by_mask(&keep);
        let labels = self
            .labels
            .iter()
            .map(|&v| core.index_of(self.graph.name(v)).expect("labels survive"))
            .collect();
        Flag { graph: core, labels }
    }
}

pub type Color = usize;

/// A bigraph with a color on every edge (`colors` is parallel to `graph.edges()`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredBigraph {
    pub graph: Bigraph,
    pub colors: Vec<Color>,
}

impl ColoredBigraph {
    pub fn new(graph: Bigraph, colors: Vec<Color>) -> Result<Self> {
        if colors.len() != graph.e() {
            return Err(Error::ColorCount { colors: colors.len(), edges: graph.e() });
        }
        Ok(ColoredBigraph { graph, colors })
    }

    pub fn monochromatic(graph: Bigraph, color: Color) -> Self {
        let colors = vec![color; graph.e()];
        ColoredBigraph { graph, colors }
    }

    /// Colors by a function of the `(left, right)` global indices of each edge.
    pub fn from_fn(graph: Bigraph, f: impl Fn(usize, usize) -> Color) -> Self {
        let colors = graph.edges().iter().map(|&(l, r)| f(l, r)).collect();
        ColoredBigraph { graph, colors }
    }

    pub fn color_set(&self) -> BTreeSet<Color> {
        self.colors.iter().copied().collect()
    }

    /// `e_i(H)`.
    pub fn color_count(&self, color: Color) -> usize {
        self.colors.iter().filter(|&&c| c == color).count()
    }

    /// `d_{H,i}(v)`.
    pub fn color_degree(&self, v: usize, color: Color) -> usize {
        self.graph
            .neighbors(v)
            .iter()
            .filter(|&&u| self.colors[self.graph.edge_id(v, u).unwrap()] == color)
            .count()
    }

    pub fn is_right_uniform(&self) -> bool {
        self.graph.right().all(|w| {
            let mut cs = self.graph.neighbors(w).iter().map(|&v| self.colors[self.graph.edge_id(v, w).unwrap()]);
            match cs.next() {
                Some(c) => cs.all(|x| x == c),
                None => true,
            }
        })
    }

    pub fn is_left_color_regular(&self) -> bool {
        self.color_set().into_iter().all(|c| {
            let mut ds = self.graph.left().map(|v| self.color_degree(v, c));
            match ds.next() {
                Some(d) => ds.all(|x| x == d),
                None => true,
            }
        })
    }

    /// `H_{C'}`: keep only edges whose color lies in `keep`; all vertices stay.
    pub fn restrict_colors(&self, keep: &BTreeSet<Color>) -> ColoredBigraph {
        let mask: Vec<bool> = self.colors.iter().map(|c| keep.contains(c)).collect();
        let graph = self.graph.spanning_by_mask(&mask);
        let colors = self.colors.iter().copied().filter(|c| keep.contains(c)).collect();
        ColoredBigraph { graph, colors }
    }

    pub fn to_json(&self) -> BigraphJson {
        let mut j = self.graph.to_json();
        j.edge_colors = Some(self.colors.clone());
        j
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<ColoredBigraph> {
        let raw: BigraphJson = serde_json::from_str(s)?;
        raw.to_colored()
    }
}

/// Wire format: `{"v1":[ids],"v2":[ids],"edges":[[l,r],...],"edge_colors":[int,...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BigraphJson {
    pub v1: Vec<String>,
    pub v2: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_colors: Option<Vec<Color>>,
}

impl BigraphJson {
    pub fn to_bigraph(&self) -> Result<Bigraph> {
        Bigraph::new(self.v1.clone(), self.v2.clone(), self.edges.iter().map(|[l, r]| (l, r)))
    }

    /// Colors are matched to edges by endpoint pair, so input edge order does
    /// not matter. Missing colors default to a monochromatic coloring.
    pub fn to_colored(&self) -> Result<ColoredBigraph> {
        let graph = self.to_bigraph()?;
        let Some(cols) = &self.edge_colors else {
            return Ok(ColoredBigraph::monochromatic(graph, 0));
        };
        if cols.len() != self.edges.len() {
            return Err(Error::ColorCount { colors: cols.len(), edges: self.edges.len() });
        }
        let mut colors = vec![0; graph.e()];
        for ([l, r], &c) in self.edges.iter().zip(cols) {
            let id = graph.edge_id(graph.lookup(l)?, graph.lookup(r)?).expect("edge exists");
            colors[id] = c;
        }
        ColoredBigraph::new(graph, colors)
    }
}
