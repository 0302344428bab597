//! Command-line front end: constructors, certificate search and
//! verification, randomized testers and hypothesis checkers, all speaking
//! JSON.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 no certificate found,
//! 3 inequality violated or check failed, 4 precondition failed.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bigraph::{Bigraph, BigraphJson, ColoredBigraph};
use crate::checkers::{
    check_conlonlee_divisibility, check_largeright, check_orbit_hypotheses, verify_rtd, DegreeProfile,
    ProfileReport, ReflectiveTreeDecomposition,
};
use crate::error::{Error, Result};
use crate::fold::enumerate_folds;
use crate::fractional::{ColoredFractionalBigraph, FractionalJson};
use crate::percolation::{
    default_budget, find_cut_percolating, find_left_cut_percolating, verify_certificate, FoldPool,
    PercolationCertificate, SearchOutcome,
};
use crate::reflection::{build_incidence, IncidenceBigraph};
use crate::testers::{self, Distribution, TestReport, TrialConfig, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_FOUND: i32 = 2;
pub const EXIT_VIOLATED: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "sidlab", version, about = "Folds, cut-percolation and density inequalities for bigraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a preset bigraph as JSON
    Construct {
        #[command(subcommand)]
        kind: Preset,
        /// Output file (stdout when omitted)
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Search for a cut-percolating certificate
    Certify {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = CliMode::Left)]
        mode: CliMode,
        #[arg(long, value_enum, default_value_t = PoolKind::All)]
        pool: PoolKind,
        /// State budget (defaults to SIDLAB_BUDGET or 1000000)
        #[arg(long)]
        budget: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify a certificate against a graph
    Verify { graph: PathBuf, certificate: PathBuf },
    /// Run a randomized inequality tester
    Test {
        #[arg(value_enum)]
        property: Property,
        /// Graph file; not used by jensen
        graph: Option<PathBuf>,
        #[command(flatten)]
        run: RunConfig,
        /// Number of functions for jensen
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Kept colors for color-restriction, comma separated
        #[arg(long, value_delimiter = ',')]
        colors: Vec<usize>,
        /// Longest fold sequence for cs-tree
        #[arg(long, default_value_t = 3)]
        max_folds: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check degree profiles, orbit hypotheses and tree decompositions
    Check {
        #[command(subcommand)]
        checker: Checker,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Preset {
    /// Incidence bigraph of the complete hypergraph with the given uniformities
    Incidence {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        uniformities: Vec<usize>,
    },
    /// Book bigraph with k four-cycle pages
    Book {
        #[arg(long)]
        k: usize,
    },
    /// Star with d edges, center on the left
    Star {
        #[arg(long)]
        d: usize,
    },
    Cycle4,
}

#[derive(Subcommand, Debug)]
pub enum Checker {
    /// Large right degree condition; takes a graph or --v1 with --profile
    Largeright(ProfileInput),
    /// Divisibility condition; takes a graph or --v1 with --profile
    Conlonlee(ProfileInput),
    /// Orbit-sum hypotheses of GRAPH against the colored bigraph H
    Orbits { graph: PathBuf, h: PathBuf },
    /// Reflective tree decomposition conditions
    Rtd { graph: PathBuf, decomposition: PathBuf },
}

#[derive(Args, Debug)]
pub struct ProfileInput {
    graph: Option<PathBuf>,
    #[arg(long, requires = "profile")]
    v1: Option<usize>,
    /// Degree counts such as 2:6,3:4
    #[arg(long, requires = "v1", value_delimiter = ',')]
    profile: Vec<String>,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Sets both rows and cols
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub rows: usize,
    #[arg(long, default_value_t = 3)]
    pub cols: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = testers::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = testers::DEFAULT_FLOOR)]
    pub floor: f64,
    #[arg(long)]
    pub adversarial: bool,
}

impl RunConfig {
    pub fn trial_config(&self) -> TrialConfig {
        TrialConfig {
            trials: self.trials,
            rows: self.grid.unwrap_or(self.rows),
            cols: self.grid.unwrap_or(self.cols),
            seed: self.seed,
            tol: self.tol,
            floor: self.floor,
            distribution: if self.adversarial { Distribution::Adversarial } else { Distribution::Uniform },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CliMode {
    Left,
    Edge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PoolKind {
    /// Every admissible side of every completable cut-involution
    All,
    /// One canonical side per cut-involution
    Canonical,
    /// Reflection folds of an incidence bigraph
    Reflection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Sidorenko,
    StrongSidorenko,
    InducedSidorenko,
    WeakNorming,
    LeftWeakHolder,
    ColorSidorenko,
    CsTree,
    Jensen,
    ColorRestriction,
}

/// Failure carrying an exit code.
#[derive(Debug)]
pub struct Exit {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Precondition(_) | Error::IsolatedVertices => EXIT_PRECONDITION,
            _ => EXIT_USAGE,
        };
        Exit { code, message: e.to_string() }
    }
}

fn usage(message: String) -> Exit {
    Exit { code: EXIT_USAGE, message }
}

fn read(path: &Path) -> std::result::Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> std::result::Result<BigraphJson, Exit> {
    serde_json::from_str(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> std::result::Result<Bigraph, Exit> {
    Ok(read_json(path)?.to_bigraph()?)
}

/// Uncolored input is treated as monochromatic with color 0.
fn read_colored(path: &Path) -> std::result::Result<ColoredBigraph, Exit> {
    let raw = read_json(path)?;
    if raw.edge_colors.is_some() {
        Ok(raw.to_colored()?)
    } else {
        Ok(ColoredBigraph::monochromatic(raw.to_bigraph()?, 0))
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> std::result::Result<(), Exit> {
    match output {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn pretty<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("outputs serialize")
}

/// Runs a parsed command and returns its exit code.
pub fn run(cli: Cli) -> std::result::Result<i32, Exit> {
    match cli.command {
        Command::Construct { kind, output } => construct(kind, &output),
        Command::Certify { graph, mode, pool, budget, output } => certify(&graph, mode, pool, budget, &output),
        Command::Verify { graph, certificate } => {
            let g = read_graph(&graph)?;
            let cert = PercolationCertificate::from_json_str(&g, &read(&certificate)?)?;
            let v = verify_certificate(&g, &cert);
            emit(&None, &pretty(&v))?;
            Ok(if v.valid { EXIT_OK } else { EXIT_VIOLATED })
        }
        Command::Test { property, graph, run, n, colors, max_folds, output } => {
            let report = test(property, graph.as_deref(), &run.trial_config(), n, &colors, max_folds)?;
            emit(&output, &report.to_json_string())?;
            Ok(match report.verdict {
                Verdict::HoldsOnAllTrials => EXIT_OK,
                Verdict::Violated => EXIT_VIOLATED,
                Verdict::PreconditionFailed => EXIT_PRECONDITION,
            })
        }
        Command::Check { checker, output } => check(checker, &output),
    }
}

fn construct(kind: Preset, output: &Option<PathBuf>) -> std::result::Result<i32, Exit> {
    let text = match kind {
        Preset::Incidence { n, uniformities } => build_incidence(n, &uniformities)?.colored.to_json_string(),
        Preset::Book { k: 0 } => return Err(usage("book needs k >= 1".into())),
        Preset::Book { k } => Bigraph::book(k).to_json_string(),
        Preset::Star { d: 0 } => return Err(usage("star needs d >= 1".into())),
        Preset::Star { d } => Bigraph::star(d).to_json_string(),
        Preset::Cycle4 => Bigraph::cycle4().to_json_string(),
    };
    emit(output, &text)?;
    Ok(EXIT_OK)
}

fn reflection_pool(g: &Bigraph) -> Result<FoldPool> {
    Ok(FoldPool::Given(IncidenceBigraph::recognize(g)?.reflection_fold_pool()))
}

fn certify(graph: &Path, mode: CliMode, pool: PoolKind, budget: Option<usize>, output: &Option<PathBuf>) -> std::result::Result<i32, Exit> {
    let g = read_graph(graph)?;
    let pool = match pool {
        PoolKind::All => FoldPool::Complete,
        PoolKind::Canonical => FoldPool::Canonical,
        PoolKind::Reflection => reflection_pool(&g)?,
    };
    let budget = budget.unwrap_or_else(default_budget);
    let outcome = match mode {
        CliMode::Left => find_left_cut_percolating(&g, &pool, budget)?,
        CliMode::Edge => find_cut_percolating(&g, &pool, budget)?,
    };
    match outcome {
        SearchOutcome::Found(cert) => {
            let v = verify_certificate(&g, &cert);
            if !v.valid {
                return Err(Exit { code: EXIT_VIOLATED, message: format!("search produced an invalid certificate: {v:?}") });
            }
            emit(output, &cert.to_json_string(&g))?;
            Ok(EXIT_OK)
        }
        SearchOutcome::NotFound(nf) => {
            eprintln!("no certificate found");
            emit(&None, &pretty(&nf))?;
            Ok(EXIT_NOT_FOUND)
        }
    }
}

fn test(
    property: Property,
    graph: Option<&Path>,
    cfg: &TrialConfig,
    n: usize,
    colors: &[usize],
    max_folds: usize,
) -> std::result::Result<TestReport, Exit> {
    if property == Property::Jensen {
        return Ok(testers::test_inductive_jensen(n, cfg)?);
    }
    let path = graph.ok_or_else(|| usage("this property needs a graph file".into()))?;
    let report = match property {
        Property::Sidorenko => testers::test_sidorenko(&read_graph(path)?, cfg)?,
        Property::StrongSidorenko => testers::test_strong_sidorenko(&read_graph(path)?, cfg)?,
        Property::InducedSidorenko => testers::test_induced_sidorenko(&read_graph(path)?, cfg)?,
        Property::WeakNorming => testers::test_weakly_norming(&read_graph(path)?, cfg)?,
        Property::LeftWeakHolder => testers::test_left_weak_holder(&read_colored(path)?, cfg)?,
        Property::ColorSidorenko => {
            let text = read(path)?;
            let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| usage(e.to_string()))?;
            let h = if value.get("weights").is_some() {
                let raw: FractionalJson = serde_json::from_value(value).map_err(|e| usage(e.to_string()))?;
                ColoredFractionalBigraph::from_json(&raw)?
            } else {
                match ColoredFractionalBigraph::from_colored(&read_colored(path)?) {
                    Ok(h) => h,
                    Err(e @ (Error::Precondition(_) | Error::IsolatedVertices)) => {
                        return Ok(TestReport::precondition_failed("color-sidorenko", e.to_string(), cfg))
                    }
                    Err(e) => return Err(e.into()),
                }
            };
            testers::test_color_sidorenko(&h, cfg)?
        }
        Property::CsTree => {
            let g = read_graph(path)?;
            let pool = match IncidenceBigraph::recognize(&g) {
                Ok(ib) => ib.reflection_fold_pool(),
                Err(_) => enumerate_folds(&g)?,
            };
            testers::test_cs_tree(&g, &pool, max_folds, cfg)?
        }
        Property::ColorRestriction => {
            let h = read_colored(path)?;
            let keep: BTreeSet<usize> = colors.iter().copied().collect();
            testers::test_color_restriction_trials(&h, &keep, cfg)?
        }
        Property::Jensen => unreachable!("handled above"),
    };
    Ok(report)
}

fn profile_report(input: &ProfileInput, divisibility: bool) -> std::result::Result<ProfileReport, Exit> {
    let profile = match (&input.graph, input.v1) {
        (Some(path), None) => {
            let g = read_graph(path)?;
            return Ok(if divisibility { check_conlonlee_divisibility(&g)? } else { check_largeright(&g)? });
        }
        (None, Some(v1)) => {
            let mut counts = BTreeMap::new();
            for item in &input.profile {
                let parse = || -> Option<(usize, usize)> {
                    let (k, d) = item.split_once(':')?;
                    Some((k.trim().parse().ok()?, d.trim().parse().ok()?))
                };
                let (k, d) = parse().ok_or_else(|| usage(format!("bad profile entry {item:?}; expected k:d")))?;
                *counts.entry(k).or_insert(0) += d;
            }
            DegreeProfile::new(v1, counts)?
        }
        _ => return Err(usage("give either a graph file or --v1 with --profile".into())),
    };
    Ok(if divisibility { profile.divisibility() } else { profile.largeright() })
}

fn check(checker: Checker, output: &Option<PathBuf>) -> std::result::Result<i32, Exit> {
    let (text, code) = match checker {
        Checker::Largeright(input) => {
            let r = profile_report(&input, false)?;
            (pretty(&r), if r.pass { EXIT_OK } else { EXIT_VIOLATED })
        }
        Checker::Conlonlee(input) => {
            let r = profile_report(&input, true)?;
            (pretty(&r), if r.pass { EXIT_OK } else { EXIT_VIOLATED })
        }
        Checker::Orbits { graph, h } => {
            let r = check_orbit_hypotheses(&read_graph(&graph)?, &read_colored(&h)?)?;
            let pre_ok = r.preconditions.iter().all(|p| p.passed || p.evidence_only);
            let code = if !pre_ok {
                EXIT_PRECONDITION
            } else if r.pass {
                EXIT_OK
            } else {
                EXIT_VIOLATED
            };
            (r.to_json_string(), code)
        }
        Checker::Rtd { graph, decomposition } => {
            let g = read_graph(&graph)?;
            let t = ReflectiveTreeDecomposition::from_json_str(&read(&decomposition)?)?;
            let r = verify_rtd(&g, &t);
            (pretty(&r), if r.valid { EXIT_OK } else { EXIT_VIOLATED })
        }
    };
    emit(output, &text)?;
    Ok(code)
}

/// Parses the process arguments, runs the command and returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
