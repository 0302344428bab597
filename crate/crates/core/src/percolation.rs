//! Cut-percolating sequences: search, certificates, verification and lifting.
//!
//! In left mode a certificate grows `U_0 = {v_0}` to `U_m = V_1` through
//! `U_i = φ_L^{-1}(U_{i-1}) ∩ V_1`; in edge mode it grows a single edge to
//! `E(G)` through `E_i = {(v, w) : (φ_L v, φ_L w) ∈ E_{i-1}}`.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::automorphism::orbits;
use crate::bigraph::{amalgamate_left, Bigraph};
use crate::error::{Error, Result};
use crate::fold::{complete_to_fold, enumerate_folds, Fold, FoldJson};

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Search budget, overridable through `SIDLAB_BUDGET`.
pub fn default_budget() -> usize {
    std::env::var("SIDLAB_BUDGET").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Left,
    Edge,
}

/// `trajectory[i]` holds sorted left-vertex indices (left mode) or sorted
/// edge indices into `g.edges()` (edge mode).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PercolationCertificate {
    pub mode: Mode,
    pub folds: Vec<Fold>,
    pub trajectory: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TrajectoryItem {
    Vertex(String),
    Edge([String; 2]),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub mode: Mode,
    pub folds: Vec<FoldJson>,
    pub trajectory: Vec<Vec<TrajectoryItem>>,
}

impl PercolationCertificate {
    pub fn len(&self) -> usize {
        self.folds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.folds.is_empty()
    }

    pub fn to_json(&self, g: &Bigraph) -> CertificateJson {
        let item = |x: usize| match self.mode {
            Mode::Left => TrajectoryItem::Vertex(g.name(x).to_string()),
            Mode::Edge => {
                let (l, r) = g.edges()[x];
                TrajectoryItem::Edge([g.name(l).to_string(), g.name(r).to_string()])
            }
        };
        CertificateJson {
            mode: self.mode,
            folds: self.folds.iter().map(|f| f.to_json(g)).collect(),
            trajectory: self.trajectory.iter().map(|s| s.iter().map(|&x| item(x)).collect()).collect(),
        }
    }

    pub fn to_json_string(&self, g: &Bigraph) -> String {
        serde_json::to_string_pretty(&self.to_json(g)).expect("certificate serializes")
    }

    pub fn from_json(g: &Bigraph, raw: &CertificateJson) -> Result<Self> {
        let folds = raw.folds.iter().map(|f| Fold::from_json(g, f)).collect::<Result<Vec<_>>>()?;
        let mut trajectory = Vec::with_capacity(raw.trajectory.len());
        for step in &raw.trajectory {
            let mut set = Vec::with_capacity(step.len());
            for it in step {
                let x = match (raw.mode, it) {
                    (Mode::Left, TrajectoryItem::Vertex(v)) => g.lookup(v)?,
                    (Mode::Edge, TrajectoryItem::Edge([l, r])) => {
                        let (a, b) = (g.lookup(l)?, g.lookup(r)?);
                        g.edge_id(a, b).ok_or_else(|| Error::UnknownVertex(format!("edge ({l}, {r})")))?
                    }
                    _ => return Err(Error::Json("trajectory item does not match the certificate mode".into())),
                };
                set.push(x);
            }
            set.sort_unstable();
            trajectory.push(set);
        }
        Ok(PercolationCertificate { mode: raw.mode, folds, trajectory })
    }

    pub fn from_json_str(g: &Bigraph, s: &str) -> Result<Self> {
        Self::from_json(g, &serde_json::from_str(s)?)
    }
}

/// Outcome of [`verify_certificate`]; `failure` names the first broken condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub valid: bool,
    pub failure: Option<String>,
}

impl Verification {
    fn fail(msg: String) -> Self {
        Verification { valid: false, failure: Some(msg) }
    }
}

pub fn verify_certificate(g: &Bigraph, cert: &PercolationCertificate) -> Verification {
    let universe = match cert.mode {
        Mode::Left => g.v1(),
        Mode::Edge => g.e(),
    };
    if cert.trajectory.len() != cert.folds.len() + 1 {
        return Verification::fail(format!(
            "trajectory has {} sets for {} folds",
            cert.trajectory.len(),
            cert.folds.len()
        ));
    }
    for (i, set) in cert.trajectory.iter().enumerate() {
        if set.windows(2).any(|w| w[0] >= w[1]) || set.iter().any(|&x| x >= universe) {
            return Verification::fail(format!("trajectory set {i} is not a sorted subset of the ground set"));
        }
    }
    if cert.trajectory[0].len() != 1 {
        return Verification::fail(format!("initial set has {} elements", cert.trajectory[0].len()));
    }
    if cert.trajectory.last().map(Vec::len) != Some(universe) {
        return Verification::fail("final set does not cover the ground set".into());
    }
    for (i, f) in cert.folds.iter().enumerate() {
        if let Err(e) = f.validate(g) {
            return Verification::fail(format!("fold {}: {e}", i + 1));
        }
        let fold_left = |v: usize| if f.left[v] { v } else { f.phi[v] };
        let prev = &cert.trajectory[i];
        let expected: Vec<usize> = match cert.mode {
            Mode::Left => g.left().filter(|&v| prev.binary_search(&fold_left(v)).is_ok()).collect(),
            Mode::Edge => (0..g.e())
                .filter(|&k| {
                    let (l, r) = g.edges()[k];
                    g.edge_id(fold_left(l), fold_left(r)).is_some_and(|img| prev.binary_search(&img).is_ok())
                })
                .collect(),
        };
        if expected != cert.trajectory[i + 1] {
            return Verification::fail(format!("set {} is not the preimage of set {} under fold {}", i + 1, i, i + 1));
        }
    }
    Verification { valid: true, failure: None }
}

/// Which folds a search may use.
#[derive(Clone, Debug)]
pub enum FoldPool {
    /// One canonical fold per completable cut-involution.
    Canonical,
    /// Every admissible left side of every completable cut-involution.
    Complete,
    Given(Vec<Fold>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NotFound {
    /// States explored before stopping.
    pub explored: usize,
    pub budget_exceeded: bool,
    /// True only when the closure was exhausted over a complete fold pool.
    pub definitive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(PercolationCertificate),
    NotFound(NotFound),
}

impl SearchOutcome {
    pub fn certificate(self) -> Option<PercolationCertificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            SearchOutcome::NotFound(_) => None,
        }
    }
}

/// Every fold with the given involution, one per choice of side in each
/// swapped pair of components.
pub fn all_left_sides(g: &Bigraph, canonical: &Fold) -> Vec<Fold> {
    let fixed = canonical.fixed();
    let comps: Vec<Vec<usize>> =
        g.components_excluding(&fixed).into_iter().filter(|c| canonical.left[c[0]]).collect();
    (0u64..1 << comps.len())
        .map(|mask| {
            let mut left = canonical.left.clone();
            for (i, c) in comps.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for &v in c {
                        left[v] = false;
                        left[canonical.phi[v]] = true;
                    }
                }
            }
            Fold { phi: canonical.phi.clone(), left }
        })
        .collect()
}

fn resolve_pool(g: &Bigraph, pool: &FoldPool) -> Result<(Vec<Fold>, bool)> {
    Ok(match pool {
        FoldPool::Canonical => (enumerate_folds(g)?, false),
        FoldPool::Complete => {
            let folds = enumerate_folds(g)?.iter().flat_map(|f| all_left_sides(g, f)).collect();
            (folds, true)
        }
        FoldPool::Given(folds) => {
            for f in folds {
                f.validate(g)?;
            }
            (folds.clone(), false)
        }
    })
}

type Bits = Vec<u64>;

fn bits_of(n: usize, members: impl IntoIterator<Item = usize>) -> Bits {
    let mut b = vec![0u64; n.div_ceil(64)];
    for x in members {
        b[x / 64] |= 1 << (x % 64);
    }
    b
}

fn has(b: &Bits, x: usize) -> bool {
    b[x / 64] >> (x % 64) & 1 == 1
}

fn members(b: &Bits, n: usize) -> Vec<usize> {
    (0..n).filter(|&x| has(b, x)).collect()
}

/// Breadth-first search over preimage closures from every singleton.
fn search(g: &Bigraph, mode: Mode, pool: &FoldPool, budget: usize) -> Result<SearchOutcome> {
    let n = match mode {
        Mode::Left => g.v1(),
        Mode::Edge => g.e(),
    };
    if n == 0 {
        return Err(Error::Precondition(match mode {
            Mode::Left => "graph has no left vertices".into(),
            Mode::Edge => "graph has no edges".into(),
        }));
    }
    let (folds, complete) = resolve_pool(g, pool)?;
    // maps[j][x] = image of x under the j-th left-folding map
    let maps: Vec<Vec<usize>> = folds
        .iter()
        .map(|f| {
            let pl = f.phi_l();
            match mode {
                Mode::Left => g.left().map(|v| pl[v]).collect(),
                Mode::Edge => g
                    .edges()
                    .iter()
                    .map(|&(l, r)| g.edge_id(pl[l], pl[r]).expect("folding maps are endomorphisms"))
                    .collect(),
            }
        })
        .collect();
    let full = bits_of(n, 0..n);
    let mut states: Vec<Bits> = Vec::new();
    let mut parent: Vec<Option<(usize, usize)>> = Vec::new();
    let mut seen: HashMap<Bits, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut goal = None;
    for x in 0..n {
        let b = bits_of(n, [x]);
        if b == full {
            goal = Some(states.len());
        }
        seen.insert(b.clone(), states.len());
        queue.push_back(states.len());
        states.push(b);
        parent.push(None);
    }
    let mut budget_exceeded = false;
    'bfs: while goal.is_none() {
        let Some(s) = queue.pop_front() else { break };
        for (j, m) in maps.iter().enumerate() {
            let next = bits_of(n, (0..n).filter(|&x| has(&states[s], m[x])));
            if seen.contains_key(&next) {
                continue;
            }
            if states.len() >= budget {
                budget_exceeded = true;
                break 'bfs;
            }
            let id = states.len();
            seen.insert(next.clone(), id);
            let done = next == full;
            states.push(next);
            parent.push(Some((s, j)));
            queue.push_back(id);
            if done {
                goal = Some(id);
                break 'bfs;
            }
        }
    }
    let Some(mut cur) = goal else {
        return Ok(SearchOutcome::NotFound(NotFound {
            explored: states.len(),
            budget_exceeded,
            definitive: complete && !budget_exceeded,
        }));
    };
    let mut trajectory = vec![members(&states[cur], n)];
    let mut used = Vec::new();
    while let Some((p, j)) = parent[cur] {
        used.push(folds[j].clone());
        trajectory.push(members(&states[p], n));
        cur = p;
    }
    trajectory.reverse();
    used.reverse();
    if mode == Mode::Left {
        let offset = g.left().start;
        for set in &mut trajectory {
            for x in set.iter_mut() {
                *x += offset;
            }
        }
    }
    Ok(SearchOutcome::Found(PercolationCertificate { mode, folds: used, trajectory }))
}

/// Shortest left-cut-percolating sequence under the pool.
pub fn find_left_cut_percolating(g: &Bigraph, pool: &FoldPool, budget: usize) -> Result<SearchOutcome> {
    search(g, Mode::Left, pool, budget)
}

/// Shortest cut-percolating sequence (edge mode) under the pool.
pub fn find_cut_percolating(g: &Bigraph, pool: &FoldPool, budget: usize) -> Result<SearchOutcome> {
    search(g, Mode::Edge, pool, budget)
}

/// Left-endpoint projection of an edge-mode certificate.
pub fn project_to_left(g: &Bigraph, cert: &PercolationCertificate) -> PercolationCertificate {
    let trajectory = match cert.mode {
        Mode::Left => cert.trajectory.clone(),
        Mode::Edge => cert
            .trajectory
            .iter()
            .map(|set| {
                let mut left: Vec<usize> = set.iter().map(|&k| g.edges()[k].0).collect();
                left.sort_unstable();
                left.dedup();
                left
            })
            .collect(),
    };
    PercolationCertificate { mode: Mode::Left, folds: cert.folds.clone(), trajectory }
}

/// Whether the group generated by the certificate's involutions is
/// transitive on `V_1` (left mode) or on `E` (edge mode).
pub fn generated_group_is_transitive(g: &Bigraph, cert: &PercolationCertificate) -> bool {
    match cert.mode {
        Mode::Left => {
            let gens: Vec<Vec<usize>> = cert.folds.iter().map(|f| g.left().map(|v| f.phi[v]).collect()).collect();
            orbits(g.v1(), &gens).len() <= 1
        }
        Mode::Edge => {
            let gens: Vec<Vec<usize>> = cert
                .folds
                .iter()
                .map(|f| g.edges().iter().map(|&(l, r)| g.edge_id(f.phi[l], f.phi[r]).expect("automorphism")).collect())
                .collect();
            orbits(g.e(), &gens).len() <= 1
        }
    }
}

/// Lifts compatible left-mode certificates of the parts to their
/// amalgamation over the left side.
///
/// At every step the parts' folds must agree on `V_1` both as maps and in
/// their left sides; the lifted fold acts as each part's fold on that
/// part's right vertices and takes the union of the left sides.
pub fn lift_certificate(parts: &[Bigraph], certs: &[PercolationCertificate]) -> Result<(Bigraph, PercolationCertificate)> {
    let hyp = |step: usize, reason: &str| Error::LiftHypothesis { step, reason: reason.to_string() };
    if parts.is_empty() || parts.len() != certs.len() {
        return Err(Error::InvalidParameter("need one certificate per part".into()));
    }
    let g = amalgamate_left(parts)?;
    let m = certs[0].len();
    for (p, c) in parts.iter().zip(certs) {
        if c.mode != Mode::Left {
            return Err(hyp(0, "only left-mode certificates lift"));
        }
        if c.len() != m {
            return Err(hyp(0, "certificates have different lengths"));
        }
        for f in &c.folds {
            f.validate(p)?;
        }
    }
    let base = &parts[0];
    let mut folds = Vec::with_capacity(m);
    for step in 0..m {
        let mut phi = vec![usize::MAX; g.v()];
        let mut left = vec![false; g.v()];
        for (p, c) in parts.iter().zip(certs) {
            let f = &c.folds[step];
            for v in p.vertices() {
                let gv = g.index_of(p.name(v)).expect("amalgamation keeps every vertex");
                let img = g.index_of(p.name(f.phi[v])).expect("amalgamation keeps every vertex");
                if p.is_left(v) {
                    let f0 = &certs[0].folds[step];
                    let bv = base.index_of(p.name(v)).expect("shared left side");
                    if base.name(f0.phi[bv]) != p.name(f.phi[v]) {
                        return Err(hyp(step + 1, "maps disagree on the left side"));
                    }
                    if f0.left[bv] != f.left[v] {
                        return Err(hyp(step + 1, "left sides meet the left vertex set differently"));
                    }
                }
                phi[gv] = img;
                left[gv] = left[gv] || f.left[v];
            }
        }
        let lifted = Fold { phi, left };
        lifted.validate(&g).map_err(|e| hyp(step + 1, &e.to_string()))?;
        folds.push(lifted);
    }
    let trajectory = certs[0]
        .trajectory
        .iter()
        .map(|set| {
            let mut s: Vec<usize> = set.iter().map(|&v| g.index_of(base.name(v)).expect("shared left side")).collect();
            s.sort_unstable();
            s
        })
        .collect();
    let cert = PercolationCertificate { mode: Mode::Left, folds, trajectory };
    let check = verify_certificate(&g, &cert);
    if !check.valid {
        return Err(hyp(0, &check.failure.unwrap_or_default()));
    }
    Ok((g, cert))
}

/// Canonical completion of every fold in `folds`, skipping duplicates.
pub fn canonicalize_pool(g: &Bigraph, folds: &[Fold]) -> Result<Vec<Fold>> {
    let mut out: Vec<Fold> = Vec::new();
    for f in folds {
        if let Some(c) = complete_to_fold(g, &f.phi)? {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    Ok(out)
}
