//! Homomorphism densities over finite step bigraphons.
//!
//! Every density is evaluated as a weighted sum of products by variable
//! elimination along a greedy minimum-degree order; each also has a direct
//! brute-force twin used for cross-checking.

mod bigraphon;
mod elimination;
mod random;
mod sinkhorn;

use std::collections::BTreeMap;

pub use bigraphon::{BigraphonTuple, StepBigraphon};
pub use elimination::min_degree_order;
use elimination::{Factor, Model};
pub use random::{near_indicator, random_positive_tuple, random_step_bigraphon, random_with};
pub use sinkhorn::{sinkhorn_biregularize, SINKHORN_MAX_ITER, SINKHORN_TOL};

use crate::bigraph::{Bigraph, ColoredBigraph, Flag};
use crate::error::{Error, Result};
use crate::fractional::ColoredFractionalBigraph;

fn matrix_factor(l: usize, r: usize, w: &StepBigraphon) -> Factor {
    Factor { vars: vec![l, r], table: w.w.iter().flatten().copied().collect() }
}

/// Model for `t(G; f, g; W_c)`: per-edge bigraphons and optional per-vertex
/// multipliers folded into the variable weights.
fn graph_model<'a>(g: &Bigraph, edge_w: impl Fn(usize) -> &'a StepBigraphon, base: &StepBigraphon) -> Model {
    let weights = g.vertices().map(|v| if g.is_left(v) { base.mu.clone() } else { base.nu.clone() }).collect();
    let factors = g.edges().iter().enumerate().map(|(k, &(l, r))| matrix_factor(l, r, edge_w(k))).collect();
    Model { weights, factors }
}

/// A precomputed elimination order for one graph structure.
#[derive(Clone, Debug)]
pub struct EliminationPlan {
    order: Vec<usize>,
}

impl EliminationPlan {
    pub fn new(g: &Bigraph) -> Self {
        let scopes: Vec<Vec<usize>> = g.edges().iter().map(|&(l, r)| vec![l, r]).collect();
        EliminationPlan { order: min_degree_order(g.v(), &scopes) }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn density(&self, g: &Bigraph, w: &StepBigraphon) -> f64 {
        graph_model(g, |_| w, w).eliminate(&self.order)
    }
}

/// `t(G, W)`.
pub fn density(g: &Bigraph, w: &StepBigraphon) -> f64 {
    EliminationPlan::new(g).density(g, w)
}

pub fn density_brute_force(g: &Bigraph, w: &StepBigraphon) -> f64 {
    graph_model(g, |_| w, w).brute_force()
}

/// `t(F, W)` at a point: `assignment[i]` is the row (or column) given to the
/// `i`-th labeled vertex; unlabeled vertices are integrated out.
pub fn flag_density(f: &Flag, w: &StepBigraphon, assignment: &[usize]) -> Result<f64> {
    let g = &f.graph;
    if assignment.len() != f.labels.len() {
        return Err(Error::AssignmentMismatch(format!(
            "{} values for {} labeled vertices",
            assignment.len(),
            f.labels.len()
        )));
    }
    let mut model = graph_model(g, |_| w, w);
    for (&v, &a) in f.labels.iter().zip(assignment) {
        let size = if g.is_left(v) { w.rows() } else { w.cols() };
        if a >= size {
            return Err(Error::AssignmentMismatch(format!("value {a} out of range for vertex {}", g.name(v))));
        }
        let mut point = vec![0.0; size];
        point[a] = 1.0;
        model.weights[v] = point;
    }
    Ok(model.evaluate())
}

/// `t(H, W)` with `W_{c(e)}` on every edge.
pub fn colored_density(h: &ColoredBigraph, ws: &BigraphonTuple) -> Result<f64> {
    Ok(colored_model(h, ws)?.evaluate())
}

pub fn colored_density_brute_force(h: &ColoredBigraph, ws: &BigraphonTuple) -> Result<f64> {
    Ok(colored_model(h, ws)?.brute_force())
}

fn colored_model(h: &ColoredBigraph, ws: &BigraphonTuple) -> Result<Model> {
    let per_edge = h.colors.iter().map(|&c| ws.get(c)).collect::<Result<Vec<_>>>()?;
    let Some(base) = ws.iter().next().map(|(_, b)| b) else {
        return if h.graph.v() == 0 { Ok(Model::default()) } else { Err(Error::InvalidParameter("empty bigraphon tuple".into())) };
    };
    Ok(graph_model(&h.graph, |k| per_edge[k], base))
}

/// `t(G; f, g; W)`: `f[i]` multiplies the `i`-th left vertex, `gw[j]` the
/// `j`-th right vertex.
pub fn weighted_density(g: &Bigraph, w: &StepBigraphon, f: &[Vec<f64>], gw: &[Vec<f64>]) -> Result<f64> {
    Ok(weighted_model(g, w, f, gw)?.evaluate())
}

pub fn weighted_density_brute_force(g: &Bigraph, w: &StepBigraphon, f: &[Vec<f64>], gw: &[Vec<f64>]) -> Result<f64> {
    Ok(weighted_model(g, w, f, gw)?.brute_force())
}

fn weighted_model(g: &Bigraph, w: &StepBigraphon, f: &[Vec<f64>], gw: &[Vec<f64>]) -> Result<Model> {
    if f.len() != g.v1() || gw.len() != g.v2() {
        return Err(Error::InvalidParameter("one weight function per vertex is required".into()));
    }
    if f.iter().any(|x| x.len() != w.rows()) || gw.iter().any(|y| y.len() != w.cols()) {
        return Err(Error::InvalidParameter("weight functions must match the bigraphon's spaces".into()));
    }
    let mut model = graph_model(g, |_| w, w);
    for (v, fv) in g.vertices().zip(f.iter().chain(gw)) {
        for (m, x) in model.weights[v].iter_mut().zip(fv) {
            *m *= x;
        }
    }
    Ok(model)
}

/// `t(K_{|U|,1}^L, W)(x_U)` for every assignment of `x_U`, row-major.
fn dual_star_table(size: usize, w: &StepBigraphon) -> Vec<f64> {
    let rows = w.rows();
    let total = rows.pow(size as u32);
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; size];
    for _ in 0..total {
        let s: f64 = (0..w.cols()).map(|y| w.nu[y] * idx.iter().map(|&x| w.w[x][y]).product::<f64>()).sum();
        out.push(s);
        for d in (0..size).rev() {
            idx[d] += 1;
            if idx[d] < rows {
                break;
            }
            idx[d] = 0;
        }
    }
    out
}

fn fractional_model(h: &ColoredFractionalBigraph, ws: &BigraphonTuple) -> Result<Model> {
    let mut factors = Vec::new();
    let mut tables: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    let mut mu = None;
    for ((subset, color), weight) in h.weights() {
        let w = ws.get(*color)?;
        mu.get_or_insert_with(|| w.mu.clone());
        let base = tables.entry((subset.len(), *color)).or_insert_with(|| dual_star_table(subset.len(), w));
        let mut table = Vec::with_capacity(base.len());
        for &b in base.iter() {
            if b == 0.0 && weight < 0.0 {
                return Err(Error::Domain);
            }
            table.push(b.powf(weight));
        }
        factors.push(Factor { vars: subset.clone(), table });
    }
    let mu = match mu {
        Some(m) => m,
        None => match ws.iter().next() {
            Some((_, b)) => b.mu.clone(),
            None => vec![1.0],
        },
    };
    Ok(Model { weights: vec![mu; h.v()], factors })
}

/// `t(h, W) = ∫ Π_{(U,i)} t(K_{|U|,1}^L, W_i)(x_U)^{h(U,i)} dμ(x)`, with `0^0 = 1`.
pub fn fractional_density(h: &ColoredFractionalBigraph, ws: &BigraphonTuple) -> Result<f64> {
    Ok(fractional_model(h, ws)?.evaluate())
}

pub fn fractional_density_brute_force(h: &ColoredFractionalBigraph, ws: &BigraphonTuple) -> Result<f64> {
    Ok(fractional_model(h, ws)?.brute_force())
}

/// `Σ r_i e(G_i)`: zero for every product inequality that is invariant under
/// scaling the bigraphon.
pub fn exponent_balance(terms: &[(&Bigraph, f64)]) -> f64 {
    terms.iter().map(|(g, r)| r * g.e() as f64).sum()
}

/// Left-regularizes every color except `pivot`, compensating on the pivot so
/// that `t(h, ·)` and `t(ρ_h, ·)` are unchanged when `h` is color-regular.
pub fn left_regularize_tuple(h: &ColoredFractionalBigraph, ws: &BigraphonTuple, pivot: usize) -> Result<BigraphonTuple> {
    if !h.is_color_regular(1e-12) {
        return Err(Error::Precondition("fractional bigraph is not color-regular".into()));
    }
    let e_pivot = h.e_color(pivot);
    if !h.colors().contains(&pivot) || e_pivot == 0.0 {
        return Err(Error::Precondition(format!("pivot color {pivot} carries no edge mass")));
    }
    let mut members = BTreeMap::new();
    for &c in h.colors() {
        let w = ws.get(c)?;
        if !w.is_positive() {
            return Err(Error::InvalidBigraphon(format!("bigraphon for color {c} is not strictly positive")));
        }
        members.insert(c, w.clone());
    }
    let rows = members[&pivot].rows();
    let mut compensation = vec![1.0; rows];
    for (&c, w) in members.iter_mut() {
        if c == pivot {
            continue;
        }
        let marg = w.row_marginal();
        let exponent = h.e_color(c) / e_pivot;
        for x in 0..rows {
            compensation[x] *= marg[x].powf(exponent);
            for v in w.w[x].iter_mut() {
                *v /= marg[x];
            }
        }
    }
    let p = members.get_mut(&pivot).expect("pivot present");
    for x in 0..rows {
        for v in p.w[x].iter_mut() {
            *v *= compensation[x];
        }
    }
    for (c, w) in ws.iter() {
        members.entry(c).or_insert_with(|| w.clone());
    }
    BigraphonTuple::new(members)
}
