//! Colored fractional bigraphs: nonnegative weights on (left subset, color) pairs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bigraph::{Color, ColoredBigraph};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ColoredFractionalBigraph {
    vertices: Vec<String>,
    colors: BTreeSet<Color>,
    /// Keys are sorted vertex-index subsets; zero weights are not stored.
    weights: BTreeMap<(Vec<usize>, Color), f64>,
}

impl ColoredFractionalBigraph {
    pub fn new<S, I, U>(vertices: &[S], colors: &[Color], weights: I) -> Result<Self>
    where
        S: AsRef<str>,
        I: IntoIterator<Item = (U, Color, f64)>,
        U: IntoIterator,
        U::Item: AsRef<str>,
    {
        let mut names: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(names.windows(2).find(|w| w[0] == w[1]).unwrap()[0].clone()));
        }
        let colors: BTreeSet<Color> = colors.iter().copied().collect();
        let mut map = BTreeMap::new();
        for (subset, color, weight) in weights {
            if !weight.is_finite() || weight < 0.0 {
                return Err(Error::InvalidParameter(format!("weight {weight} is not a nonnegative real")));
            }
            if !colors.contains(&color) {
                return Err(Error::MissingColor(color));
            }
            let mut idx = Vec::new();
            for s in subset {
                let s = s.as_ref();
                idx.push(names.binary_search_by(|n| n.as_str().cmp(s)).map_err(|_| Error::UnknownVertex(s.to_string()))?);
            }
            idx.sort_unstable();
            idx.dedup();
            if weight > 0.0 {
                *map.entry((idx, color)).or_insert(0.0) += weight;
            }
        }
        Ok(ColoredFractionalBigraph { vertices: names, colors, weights: map })
    }

    /// `h_H`: counts right vertices by (neighborhood, color).
    pub fn from_colored(h: &ColoredBigraph) -> Result<Self> {
        if !h.is_right_uniform() {
            return Err(Error::Precondition("colored bigraph is not right-uniform".into()));
        }
        if h.graph.has_isolated() {
            return Err(Error::IsolatedVertices);
        }
        let g = &h.graph;
        let mut weights: BTreeMap<(Vec<usize>, Color), f64> = BTreeMap::new();
        for w in g.right() {
            let subset: Vec<usize> = g.neighbors(w).to_vec();
            let color = h.colors[g.edge_id(subset[0], w).expect("neighbor edge")];
            *weights.entry((subset, color)).or_insert(0.0) += 1.0;
        }
        Ok(ColoredFractionalBigraph {
            vertices: g.left().map(|v| g.name(v).to_string()).collect(),
            colors: h.color_set(),
            weights,
        })
    }

    /// The `C`-rainbow star with weight `p_i` on `({1}, i)`.
    pub fn rainbow(p: &BTreeMap<Color, f64>) -> Result<Self> {
        let colors: Vec<Color> = p.keys().copied().collect();
        Self::new(&["1"], &colors, p.iter().map(|(&c, &x)| (["1"], c, x)))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn v(&self) -> usize {
        self.vertices.len()
    }

    pub fn colors(&self) -> &BTreeSet<Color> {
        &self.colors
    }

    /// Nonzero weights as `((subset, color), weight)`, subsets as vertex indices.
    pub fn weights(&self) -> impl Iterator<Item = (&(Vec<usize>, Color), f64)> {
        self.weights.iter().map(|(k, &w)| (k, w))
    }

    pub fn weight<S: AsRef<str>>(&self, subset: &[S], color: Color) -> f64 {
        let mut idx: Vec<usize> = Vec::new();
        for s in subset {
            match self.vertices.iter().position(|n| n == s.as_ref()) {
                Some(i) => idx.push(i),
                None => return 0.0,
            }
        }
        idx.sort_unstable();
        self.weights.get(&(idx, color)).copied().unwrap_or(0.0)
    }

    /// `e_i(h) = Σ_U |U| h(U, i)`.
    pub fn e_color(&self, color: Color) -> f64 {
        self.weights.iter().filter(|((_, c), _)| *c == color).map(|((u, _), w)| u.len() as f64 * w).sum()
    }

    pub fn e(&self) -> f64 {
        self.colors.iter().map(|&c| self.e_color(c)).sum()
    }

    /// `d_{h,i}(v) = Σ_{U ∋ v} h(U, i)`, with `v` a vertex index.
    pub fn degree(&self, v: usize, color: Color) -> f64 {
        self.weights.iter().filter(|((u, c), _)| *c == color && u.contains(&v)).map(|(_, w)| w).sum()
    }

    pub fn is_color_regular(&self, tol: f64) -> bool {
        self.colors.iter().all(|&c| {
            let d: Vec<f64> = (0..self.v()).map(|v| self.degree(v, c)).collect();
            d.iter().all(|x| (x - d[0]).abs() <= tol * d[0].abs().max(1.0))
        })
    }

    /// `h^p(U, i) = h(U, i) p_i`.
    pub fn color_power(&self, p: &BTreeMap<Color, f64>) -> Result<Self> {
        for &c in &self.colors {
            let pc = *p.get(&c).ok_or(Error::MissingColor(c))?;
            if !pc.is_finite() || pc < 0.0 {
                return Err(Error::InvalidParameter(format!("color power {pc} is not a nonnegative real")));
            }
        }
        let weights = self
            .weights
            .iter()
            .map(|(k, &w)| (k.clone(), w * p[&k.1]))
            .filter(|(_, w)| *w > 0.0)
            .collect();
        Ok(ColoredFractionalBigraph { vertices: self.vertices.clone(), colors: self.colors.clone(), weights })
    }

    /// `ρ_h`: the rainbow star with weights `e_i(h) / e(h)`.
    pub fn rainbow_star(&self) -> Result<Self> {
        let e = self.e();
        if e <= 0.0 {
            return Err(Error::Precondition("e(h) must be positive".into()));
        }
        let p: BTreeMap<Color, f64> = self.colors.iter().map(|&c| (c, self.e_color(c) / e)).collect();
        Self::rainbow(&p)
    }

    pub fn to_json(&self) -> FractionalJson {
        FractionalJson {
            vertices: self.vertices.clone(),
            colors: self.colors.iter().copied().collect(),
            weights: self
                .weights
                .iter()
                .map(|((u, c), &w)| FractionalEntry {
                    subset: u.iter().map(|&v| self.vertices[v].clone()).collect(),
                    color: *c,
                    weight: w,
                })
                .collect(),
        }
    }

    pub fn from_json(raw: &FractionalJson) -> Result<Self> {
        Self::new(&raw.vertices, &raw.colors, raw.weights.iter().map(|e| (e.subset.clone(), e.color, e.weight)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionalJson {
    pub vertices: Vec<String>,
    pub colors: Vec<Color>,
    pub weights: Vec<FractionalEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FractionalEntry {
    pub subset: Vec<String>,
    pub color: Color,
    pub weight: f64,
}
