use std::collections::BTreeSet;

use rand::Rng;

use super::{relative_margin, run_trials, TestReport, TrialConfig, Witness};
use crate::automorphism::canonical_form;
use crate::bigraph::Bigraph;
use crate::density::{density, sinkhorn_biregularize, weighted_density, EliminationPlan, StepBigraphon, SINKHORN_MAX_ITER, SINKHORN_TOL};
use crate::error::{Error, Result};

const MAX_INDUCED_VERTICES: usize = 20;

/// `t(G, W) ≥ t(ρ, W)^{e(G)}`.
pub fn sidorenko_margin(g: &Bigraph, w: &StepBigraphon) -> f64 {
    relative_margin(density(g, w), w.edge_density().powi(g.e() as i32))
}

pub fn test_sidorenko(g: &Bigraph, cfg: &TrialConfig) -> Result<TestReport> {
    cfg.validate()?;
    let plan = EliminationPlan::new(g);
    let e = g.e() as i32;
    Ok(run_trials("sidorenko", cfg, |t, rng| {
        let w = cfg.bigraphon(rng, t);
        let m = relative_margin(plan.density(g, &w), w.edge_density().powi(e));
        Some((m, Witness::Sidorenko { graph: g.to_json(), w }))
    }))
}

/// Both sides of the strong Sidorenko inequality, `(t(G; f, g; W), t(ρ; F, G; W)^{e(G)})`
/// with `F = Π f_v^{1/e(G)}` and `G = Π g_w^{1/e(G)}`.
pub fn strong_sidorenko_sides(g: &Bigraph, w: &StepBigraphon, f: &[Vec<f64>], gw: &[Vec<f64>]) -> Result<(f64, f64)> {
    if g.e() == 0 {
        return Err(Error::Precondition("the strong Sidorenko inequality needs e(G) > 0".into()));
    }
    let lhs = weighted_density(g, w, f, gw)?;
    let inv = 1.0 / g.e() as f64;
    let big_f: Vec<f64> = (0..w.rows()).map(|x| f.iter().map(|fv| fv[x].powf(inv)).product()).collect();
    let big_g: Vec<f64> = (0..w.cols()).map(|y| gw.iter().map(|gv| gv[y].powf(inv)).product()).collect();
    let mut base = 0.0;
    for x in 0..w.rows() {
        for y in 0..w.cols() {
            base += w.mu[x] * w.nu[y] * big_f[x] * big_g[y] * w.w[x][y];
        }
    }
    Ok((lhs, base.powi(g.e() as i32)))
}

pub fn strong_sidorenko_margin(g: &Bigraph, w: &StepBigraphon, f: &[Vec<f64>], gw: &[Vec<f64>]) -> Result<f64> {
    let (lhs, rhs) = strong_sidorenko_sides(g, w, f, gw)?;
    Ok(relative_margin(lhs, rhs))
}

pub fn test_strong_sidorenko(g: &Bigraph, cfg: &TrialConfig) -> Result<TestReport> {
    cfg.validate()?;
    if g.e() == 0 {
        return Ok(TestReport::precondition_failed("strong-sidorenko", "e(G) = 0".into(), cfg));
    }
    Ok(run_trials("strong-sidorenko", cfg, |t, rng| {
        let w = cfg.bigraphon(rng, t);
        let mut sample = |len: usize| -> Vec<f64> { (0..len).map(|_| rng.gen_range(cfg.floor..=1.0)).collect() };
        let f: Vec<Vec<f64>> = (0..g.v1()).map(|_| sample(w.rows())).collect();
        let gw: Vec<Vec<f64>> = (0..g.v2()).map(|_| sample(w.cols())).collect();
        let m = strong_sidorenko_margin(g, &w, &f, &gw).expect("shapes agree");
        Some((m, Witness::StrongSidorenko { graph: g.to_json(), w, f, g: gw }))
    }))
}

/// `t(g, W)/t(ρ, W)^{e(g)} ≥ t(h, W)/t(ρ, W)^{e(h)}`.
pub fn weak_domination_margin(g: &Bigraph, h: &Bigraph, w: &StepBigraphon) -> f64 {
    let rho = w.edge_density();
    relative_margin(density(g, w) / rho.powi(g.e() as i32), density(h, w) / rho.powi(h.e() as i32))
}

fn biregular_sample(cfg: &TrialConfig, rng: &mut rand_chacha::ChaCha8Rng, t: usize) -> Option<StepBigraphon> {
    sinkhorn_biregularize(&cfg.bigraphon(rng, t), SINKHORN_TOL, SINKHORN_MAX_ITER).ok()
}

pub fn test_weak_domination(g: &Bigraph, h: &Bigraph, cfg: &TrialConfig) -> Result<TestReport> {
    cfg.validate()?;
    Ok(run_trials("weak-domination", cfg, |t, rng| {
        let w = biregular_sample(cfg, rng, t)?;
        let m = weak_domination_margin(g, h, &w);
        Some((m, Witness::WeakDomination { g: g.to_json(), h: h.to_json(), w }))
    }))
}

/// One representative per isomorphism class of induced subgraphs, in the
/// order first met when scanning vertex subsets by bitmask.
pub fn induced_subgraph_classes(g: &Bigraph) -> Result<Vec<Bigraph>> {
    if g.v() > MAX_INDUCED_VERTICES {
        return Err(Error::TooLarge(g.v(), MAX_INDUCED_VERTICES));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << g.v() {
        let keep: Vec<bool> = g.vertices().map(|v| mask >> v & 1 == 1).collect();
        let h = g.induced_by_mask(&keep);
        if seen.insert(canonical_form(&h)) {
            out.push(h);
        }
    }
    Ok(out)
}

/// Weak domination of `g` over each of its induced subgraphs, sharing one
/// biregular sample per trial across all subgraphs.
pub fn test_induced_sidorenko(g: &Bigraph, cfg: &TrialConfig) -> Result<TestReport> {
    cfg.validate()?;
    let classes = induced_subgraph_classes(g)?;
    let plans: Vec<EliminationPlan> = classes.iter().map(EliminationPlan::new).collect();
    let own = EliminationPlan::new(g);
    Ok(run_trials("induced-sidorenko", cfg, |t, rng| {
        let w = biregular_sample(cfg, rng, t)?;
        let rho = w.edge_density();
        let big = own.density(g, &w) / rho.powi(g.e() as i32);
        let (k, m) = classes
            .iter()
            .zip(&plans)
            .map(|(h, p)| relative_margin(big, p.density(h, &w) / rho.powi(h.e() as i32)))
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (k, m)| if m < acc.1 { (k, m) } else { acc });
        Some((m, Witness::WeakDomination { g: g.to_json(), h: classes[k].to_json(), w }))
    }))
}
