//! Randomized validation and falsification of density inequalities.
//!
//! Every tester samples step bigraphons from a seeded ChaCha8 generator with
//! one stream per trial, evaluates an inequality `big ≥ small` and records
//! the relative margin `(big - small) / max(|small|, 1e-15)`. A trial
//! violates the inequality when its margin is below `-tol`. Passing reports
//! are evidence, never proofs.

mod cs_tree;
mod holder;
mod sidorenko;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use cs_tree::{cs_margin, cs_tree_leaves, endo_preimage, leftmost_leaf, test_cs_tree, two_threshold, verify_cs_inequality};
pub use holder::{
    color_restriction_margin, color_sidorenko_margin, jensen_margin, jensen_sides, left_weak_holder_margin,
    test_color_restriction, test_color_restriction_trials, test_color_sidorenko, test_inductive_jensen,
    test_left_weak_holder, test_weakly_norming, weakly_norming_margin, LeftWeakHolderInstance,
};
pub use sidorenko::{
    induced_subgraph_classes, sidorenko_margin, strong_sidorenko_margin, strong_sidorenko_sides, test_induced_sidorenko,
    test_sidorenko, test_strong_sidorenko, test_weak_domination, weak_domination_margin,
};

use crate::bigraph::BigraphJson;
use crate::density::{near_indicator, random_with, BigraphonTuple, StepBigraphon};
use crate::error::{Error, Result};
use crate::fold::{Fold, FoldJson};
use crate::fractional::{ColoredFractionalBigraph, FractionalJson};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_FLOOR: f64 = 1e-3;

const EVIDENCE_NOTE: &str = "numeric evidence over sampled step bigraphons; a passing run does not certify the inequality";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    /// Entries i.i.d. uniform on `[floor, 1]`.
    Uniform,
    /// Alternates uniform trials with near-indicator trials.
    Adversarial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub trials: usize,
    pub rows: usize,
    pub cols: usize,
    pub seed: u64,
    pub tol: f64,
    pub floor: f64,
    pub distribution: Distribution,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            trials: 1000,
            rows: 3,
            cols: 3,
            seed: 0,
            tol: DEFAULT_TOL,
            floor: DEFAULT_FLOOR,
            distribution: Distribution::Uniform,
        }
    }
}

impl TrialConfig {
    pub fn new(trials: usize, grid: usize, seed: u64, tol: f64) -> Self {
        TrialConfig { trials, rows: grid, cols: grid, seed, tol, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidParameter("trials and grid sizes must be positive".into()));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::InvalidParameter(format!("tol {} outside (0, 1)", self.tol)));
        }
        if !(self.floor > 0.0 && self.floor <= 1.0) {
            return Err(Error::InvalidParameter(format!("floor {} outside (0, 1]", self.floor)));
        }
        Ok(())
    }

    /// Independent generator for one trial.
    pub fn rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng
    }

    /// A random bigraphon of the configured shape for this trial.
    pub fn bigraphon(&self, rng: &mut ChaCha8Rng, trial: usize) -> StepBigraphon {
        match self.distribution {
            Distribution::Adversarial if trial % 2 == 1 => near_indicator(rng, self.rows, self.cols, self.floor),
            _ => random_with(rng, self.rows, self.cols, self.floor),
        }
    }

    pub fn tuple(&self, rng: &mut ChaCha8Rng, trial: usize, colors: &[usize]) -> BigraphonTuple {
        let members = colors.iter().map(|&c| (c, self.bigraphon(rng, trial))).collect();
        BigraphonTuple::new(members).expect("shared uniform spaces")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsOnAllTrials,
    Violated,
    PreconditionFailed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub property: String,
    pub verdict: Verdict,
    pub trials: usize,
    /// Trials that could not be evaluated (for instance Sinkhorn failures).
    pub skipped: usize,
    pub worst_margin: f64,
    pub worst_trial: Option<usize>,
    pub seed: u64,
    pub tol: f64,
    pub witness: Option<Witness>,
    pub reason: Option<String>,
    pub note: String,
}

impl TestReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::HoldsOnAllTrials
    }

    pub fn precondition_failed(property: &str, reason: String, cfg: &TrialConfig) -> Self {
        TestReport {
            property: property.to_string(),
            verdict: Verdict::PreconditionFailed,
            trials: 0,
            skipped: 0,
            worst_margin: f64::NAN,
            worst_trial: None,
            seed: cfg.seed,
            tol: cfg.tol,
            witness: None,
            reason: Some(reason),
            note: EVIDENCE_NOTE.to_string(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// `(big - small) / max(|small|, 1e-15)`.
pub fn relative_margin(big: f64, small: f64) -> f64 {
    (big - small) / small.abs().max(1e-15)
}

/// Result of one trial: `None` when skipped.
pub(crate) type TrialOutcome = Option<(f64, Witness)>;

/// Runs `cfg.trials` independent trials in parallel and reduces them in
/// trial order, so the report depends only on the inputs and the seed.
pub(crate) fn run_trials<F>(property: &str, cfg: &TrialConfig, trial: F) -> TestReport
where
    F: Fn(usize, &mut ChaCha8Rng) -> TrialOutcome + Sync,
{
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = cfg.rng(t);
            trial(t, &mut rng)
        })
        .collect();
    let skipped = outcomes.iter().filter(|o| o.is_none()).count();
    let mut worst: Option<(usize, f64, Witness)> = None;
    for (t, o) in outcomes.into_iter().enumerate() {
        if let Some((m, w)) = o {
            if worst.as_ref().is_none_or(|(_, best, _)| m < *best) {
                worst = Some((t, m, w));
            }
        }
    }
    let (worst_trial, worst_margin, witness) = match worst {
        Some((t, m, w)) => (Some(t), m, Some(w)),
        None => (None, f64::NAN, None),
    };
    let violated = worst_margin < -cfg.tol;
    TestReport {
        property: property.to_string(),
        verdict: if violated { Verdict::Violated } else { Verdict::HoldsOnAllTrials },
        trials: cfg.trials,
        skipped,
        worst_margin,
        worst_trial,
        seed: cfg.seed,
        tol: cfg.tol,
        witness: if violated { witness } else { None },
        reason: None,
        note: EVIDENCE_NOTE.to_string(),
    }
}

/// Self-contained inputs reproducing a margin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Sidorenko {
        graph: BigraphJson,
        w: StepBigraphon,
    },
    StrongSidorenko {
        graph: BigraphJson,
        w: StepBigraphon,
        f: Vec<Vec<f64>>,
        g: Vec<Vec<f64>>,
    },
    WeakDomination {
        g: BigraphJson,
        h: BigraphJson,
        w: StepBigraphon,
    },
    WeaklyNorming {
        graph: BigraphJson,
        tuple: BigraphonTuple,
    },
    LeftWeakHolder {
        graph: BigraphJson,
        left_colors: Vec<usize>,
        stride: usize,
        tuple: BigraphonTuple,
    },
    ColorSidorenko {
        h: FractionalJson,
        tuple: BigraphonTuple,
    },
    CsTree {
        graph: BigraphJson,
        folds: Vec<FoldJson>,
        tuple: BigraphonTuple,
    },
    Jensen {
        mu: Vec<f64>,
        g: Vec<f64>,
        f: Vec<Vec<f64>>,
        p: Vec<f64>,
    },
    ColorRestriction {
        graph: BigraphJson,
        colors: Vec<usize>,
        tuple: BigraphonTuple,
    },
}

impl Witness {
    /// Recomputes the margin from the stored inputs.
    pub fn replay(&self) -> Result<f64> {
        match self {
            Witness::Sidorenko { graph, w } => Ok(sidorenko_margin(&graph.to_bigraph()?, w)),
            Witness::StrongSidorenko { graph, w, f, g } => strong_sidorenko_margin(&graph.to_bigraph()?, w, f, g),
            Witness::WeakDomination { g, h, w } => Ok(weak_domination_margin(&g.to_bigraph()?, &h.to_bigraph()?, w)),
            Witness::WeaklyNorming { graph, tuple } => weakly_norming_margin(&graph.to_colored()?, tuple),
            Witness::LeftWeakHolder { graph, left_colors, stride, tuple } => {
                let inst = LeftWeakHolderInstance { h: graph.to_colored()?, left_colors: left_colors.clone(), stride: *stride };
                left_weak_holder_margin(&inst, tuple)
            }
            Witness::ColorSidorenko { h, tuple } => color_sidorenko_margin(&ColoredFractionalBigraph::from_json(h)?, tuple),
            Witness::CsTree { graph, folds, tuple } => {
                let h = graph.to_colored()?;
                let folds = folds.iter().map(|f| Fold::from_json(&h.graph, f)).collect::<Result<Vec<_>>>()?;
                cs_margin(&h, &folds, tuple)
            }
            Witness::Jensen { mu, g, f, p } => Ok(jensen_margin(mu, g, f, p)),
            Witness::ColorRestriction { graph, colors, tuple } => {
                color_restriction_margin(&graph.to_colored()?, &colors.iter().copied().collect(), tuple)
            }
        }
    }
}
