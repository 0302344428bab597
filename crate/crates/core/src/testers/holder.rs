use std::collections::BTreeSet;

use rand::Rng;

use super::{relative_margin, run_trials, TestReport, TrialConfig, Witness};
use crate::bigraph::{Bigraph, ColoredBigraph};
use crate::density::{colored_density, density, fractional_density, BigraphonTuple};
use crate::error::{Error, Result};
use crate::fractional::ColoredFractionalBigraph;

const REGULARITY_TOL: f64 = 1e-9;

/// `t((G, c), W) ≤ Π_e t(G, W_{c(e)})^{1/e(G)}`.
pub fn weakly_norming_margin(h: &ColoredBigraph, ws: &BigraphonTuple) -> Result<f64> {
    let g = &h.graph;
    let lhs = colored_density(h, ws)?;
    let mut rhs = 1.0;
    for c in h.color_set() {
        rhs *= density(g, ws.get(c)?).powf(h.color_count(c) as f64 / g.e() as f64);
    }
    Ok(relative_margin(rhs, lhs))
}

/// Random edge colorings with up to four colors; graphs that are not
/// biregular after dropping isolated vertices fail the precondition.
pub fn test_weakly_norming(g: &Bigraph, cfg: &TrialConfig) -> Result<TestReport> {
    cfg.validate()?;
    if !g.without_isolated().is_biregular() {
        return Ok(TestReport::precondition_failed(
            "weak-norming",
            "not biregular after removing isolated vertices".into(),
            cfg,
        ));
    }
    if g.e() == 0 {
        return Ok(TestReport::precondition_failed("weak-norming", "graph has no edges".into(), cfg));
    }
    Ok(run_trials("weak-norming", cfg, |t, rng| {
        let k = rng.gen_range(1..=g.e().min(4));
        let colors: Vec<usize> = (0..g.e()).map(|_| rng.gen_range(0..k)).collect();
        let h = ColoredBigraph::new(g.clone(), colors).expect("one color per edge");
        let ws = cfg.tuple(rng, t, &(0..k).collect::<Vec<_>>());
        let m = weakly_norming_margin(&h, &ws).expect("tuple covers the coloring");
        Some((m, Witness::WeaklyNorming { graph: h.to_json(), tuple: ws }))
    }))
}

/// A colored bigraph together with a left-coloring `ℓ`; the product color
/// `(ℓ(v), c(v, w))` is encoded as `ℓ(v) * stride + c(v, w)`.
#[derive(Clone, Debug)]
pub struct LeftWeakHolderInstance {
    pub h: ColoredBigraph,
    pub left_colors: Vec<usize>,
    pub stride: usize,
}

impl LeftWeakHolderInstance {
    fn with_left(&self, left: impl Fn(usize) -> usize) -> ColoredBigraph {
        let colors = self.h.graph.edges().iter().zip(&self.h.colors).map(|(&(l, _), &c)| left(l) * self.stride + c).collect();
        ColoredBigraph::new(self.h.graph.clone(), colors).expect("one color per edge")
    }

    /// `(G, ℓ ⊗ c)`.
    pub fn lifted(&self) -> ColoredBigraph {
        self.with_left(|l| self.left_colors[l])
    }

    /// `(G, t ⊗ c)` for the constant left-coloring `t`.
    pub fn constant(&self, t: usize) -> ColoredBigraph {
        self.with_left(|_| t)
    }
}

/// `t((G, ℓ⊗c), W) ≤ Π_v t((G, ℓ(v)⊗c), W)^{1/v_1(G)}`.
pub fn left_weak_holder_margin(inst: &LeftWeakHolderInstance, ws: &BigraphonTuple) -> Result<f64> {
    let v1 = inst.h.graph.v1();
    if inst.left_colors.len() != v1 {
        return Err(Error::InvalidParameter("one left color per left vertex is required".into()));
    }
    let lhs = colored_density(&inst.lifted(), ws)?;
    let mut rhs = 1.0;
    for &t in &inst.left_colors {
        rhs *= colored_density(&inst.constant(t), ws)?.powf(1.0 / v1 as f64);
    }
    Ok(relative_margin(rhs, lhs))
}

pub fn test_left_weak_holder(h: &ColoredBigraph, cfg: &TrialConfig) -> Result<TestReport> {
    cfg.validate()?;
    if !h.is_left_color_regular() {
        return Ok(TestReport::precondition_failed("left-weak-holder", "not left-color-regular".into(), cfg));
    }
    if h.graph.v1() == 0 {
        return Ok(TestReport::precondition_failed("left-weak-holder", "no left vertices".into(), cfg));
    }
    let base: Vec<usize> = h.color_set().into_iter().collect();
    let stride = base.last().map_or(1, |c| c + 1);
    Ok(run_trials("left-weak-holder", cfg, |t, rng| {
        let levels = rng.gen_range(2..=3);
        let left_colors: Vec<usize> = (0..h.graph.v1()).map(|_| rng.gen_range(0..levels)).collect();
        let colors: Vec<usize> = (0..levels).flat_map(|l| base.iter().map(move |c| l * stride + c)).collect();
        let ws = cfg.tuple(rng, t, &colors);
        let inst = LeftWeakHolderInstance { h: h.clone(), left_colors, stride };
        let m = left_weak_holder_margin(&inst, &ws).expect("tuple covers every product color");
        Some((m, Witness::LeftWeakHolder { graph: h.to_json(), left_colors: inst.left_colors, stride, tuple: ws }))
    }))
}

/// `t(h, W) ≥ t(ρ_h, W)^{e(h)}`.
pub fn color_sidorenko_margin(h: &ColoredFractionalBigraph, ws: &BigraphonTuple) -> Result<f64> {
    let rho = h.rainbow_star()?;
    let lhs = fractional_density(h, ws)?;
    let rhs = fractional_density(&rho, ws)?.powf(h.e());
    Ok(relative_margin(lhs, rhs))
}

pub fn test_color_sidorenko(h: &ColoredFractionalBigraph, cfg: &TrialConfig) -> Result<TestReport> {
    cfg.validate()?;
    if h.e() <= 0.0 {
        return Ok(TestReport::precondition_failed("color-sidorenko", "e(h) = 0".into(), cfg));
    }
    let colors: Vec<usize> = h.colors().iter().copied().collect();
    Ok(run_trials("color-sidorenko", cfg, |t, rng| {
        let ws = cfg.tuple(rng, t, &colors);
        let m = color_sidorenko_margin(h, &ws).expect("tuple covers every color");
        Some((m, Witness::ColorSidorenko { h: h.to_json(), tuple: ws }))
    }))
}

/// Both sides of the inductive Jensen inequality on a finite probability
/// space: `∫ g Π f_i^{p_i}` and
/// `(∫ g Π f_i)^{p_1} / Π_i (∫ g Π_{j>i} f_j)^{p_i - p_{i+1}}` with `p_{n+1} = 1`.
pub fn jensen_sides(mu: &[f64], g: &[f64], f: &[Vec<f64>], p: &[f64]) -> (f64, f64) {
    let n = f.len();
    let integral = |h: &dyn Fn(usize) -> f64| -> f64 { (0..mu.len()).map(|x| mu[x] * g[x] * h(x)).sum() };
    let lhs = integral(&|x| (0..n).map(|i| f[i][x].powf(p[i])).product());
    if n == 0 {
        return (lhs, lhs);
    }
    let numerator = integral(&|x| (0..n).map(|i| f[i][x]).product()).powf(p[0]);
    let mut denominator = 1.0;
    for i in 0..n {
        let next = if i + 1 < n { p[i + 1] } else { 1.0 };
        let tail = integral(&|x| (i + 1..n).map(|j| f[j][x]).product());
        denominator *= tail.powf(p[i] - next);
    }
    (lhs, numerator / denominator)
}

pub fn jensen_margin(mu: &[f64], g: &[f64], f: &[Vec<f64>], p: &[f64]) -> f64 {
    let (lhs, rhs) = jensen_sides(mu, g, f, p);
    relative_margin(lhs, rhs)
}

/// Random positive `g, f_1..f_n` on a `cfg.rows`-point space with random
/// weights and exponents `p_1 ≥ … ≥ p_n ≥ 1` drawn from `[1, 4]`.
pub fn test_inductive_jensen(n: usize, cfg: &TrialConfig) -> Result<TestReport> {
    cfg.validate()?;
    Ok(run_trials("jensen", cfg, |_, rng| {
        let k = cfg.rows;
        let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(cfg.floor..=1.0)).collect();
        let total: f64 = raw.iter().sum();
        let mu: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let mut sample = || -> Vec<f64> { (0..k).map(|_| rng.gen_range(cfg.floor..=1.0)).collect() };
        let g = sample();
        let f: Vec<Vec<f64>> = (0..n).map(|_| sample()).collect();
        let mut p: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..=4.0)).collect();
        p.sort_by(|a, b| b.total_cmp(a));
        let m = jensen_margin(&mu, &g, &f, &p);
        Some((m, Witness::Jensen { mu, g, f, p }))
    }))
}

/// `t(H_C, W) ≤ t(H, W) / Π_{i ∉ C} t(ρ, W_i)^{e_i(H)}`; every `W_i` with
/// `i ∉ C` must be positive and left-regular.
pub fn color_restriction_margin(h: &ColoredBigraph, colors: &BTreeSet<usize>, ws: &BigraphonTuple) -> Result<f64> {
    if !h.is_right_uniform() {
        return Err(Error::Precondition("colored bigraph is not right-uniform".into()));
    }
    let mut denominator = 1.0;
    for c in h.color_set() {
        if colors.contains(&c) {
            continue;
        }
        let w = ws.get(c)?;
        if !w.is_positive() || !w.is_left_regular(REGULARITY_TOL * w.edge_density()) {
            return Err(Error::Precondition(format!("bigraphon for dropped color {c} is not positive and left-regular")));
        }
        denominator *= w.edge_density().powi(h.color_count(c) as i32);
    }
    let lhs = colored_density(&h.restrict_colors(colors), ws)?;
    let rhs = colored_density(h, ws)? / denominator;
    Ok(relative_margin(rhs, lhs))
}

/// Single-instance check of the color-restriction inequality.
pub fn test_color_restriction(h: &ColoredBigraph, colors: &BTreeSet<usize>, ws: &BigraphonTuple, tol: f64) -> Result<TestReport> {
    let cfg = TrialConfig { trials: 1, tol, ..Default::default() };
    cfg.validate()?;
    match color_restriction_margin(h, colors, ws) {
        Err(Error::Precondition(reason)) => Ok(TestReport::precondition_failed("color-restriction", reason, &cfg)),
        Err(e) => Err(e),
        Ok(m) => Ok(run_trials("color-restriction", &cfg, |_, _| {
            let witness = Witness::ColorRestriction {
                graph: h.to_json(),
                colors: colors.iter().copied().collect(),
                tuple: ws.clone(),
            };
            Some((m, witness))
        })),
    }
}

/// Random tuples whose dropped colors are made left-regular by dividing each
/// row by its marginal.
pub fn test_color_restriction_trials(h: &ColoredBigraph, colors: &BTreeSet<usize>, cfg: &TrialConfig) -> Result<TestReport> {
    cfg.validate()?;
    if !h.is_right_uniform() {
        return Ok(TestReport::precondition_failed("color-restriction", "not right-uniform".into(), cfg));
    }
    let all: Vec<usize> = h.color_set().into_iter().collect();
    Ok(run_trials("color-restriction", cfg, |t, rng| {
        let raw = cfg.tuple(rng, t, &all);
        let members = raw
            .iter()
            .map(|(c, w)| {
                if colors.contains(&c) {
                    return (c, w.clone());
                }
                let marg = w.row_marginal();
                let values = w.w.iter().zip(&marg).map(|(row, m)| row.iter().map(|v| v / m).collect()).collect();
                (c, w.with_values(values).expect("positive values"))
            })
            .collect();
        let ws = BigraphonTuple::new(members).expect("shared spaces");
        let m = color_restriction_margin(h, colors, &ws).ok()?;
        Some((m, Witness::ColorRestriction { graph: h.to_json(), colors: colors.iter().copied().collect(), tuple: ws }))
    }))
}
