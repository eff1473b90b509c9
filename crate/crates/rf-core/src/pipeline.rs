//! Seeded end-to-end runs: universe draw and gadget packing, class split,
//! finishing-stage list assignment, verification, and the counting
//! certificate, all steered from one master seed.
//!
//! Each phase receives its own seed at a fixed offset from the master, so
//! a phase can be replayed in isolation and still agree with the full
//! run.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{certify, Certificate, CertificateError};
use crate::coloring::{find_violations, ColorId, EdgeColoring, Vertex};
use crate::gadget::PhaseAUniverse;
use crate::phase_a::{run_phase_a, PhaseAConfig, PhaseAError, PhaseAOutput};
use crate::phase_b::{
    assign_colors, build_lists, default_d_b, ListAssignment, PhaseBConfig, PhaseBError,
    PhaseBStats, Strategy,
};
use crate::sfamily::{SFamilyError, UncoloredClasses};

/// Packing-stage seed sits this far above the master seed.
pub const PHASE_A_SEED_OFFSET: u64 = 1;
/// Finishing-stage seed sits this far above the master seed.
pub const PHASE_B_SEED_OFFSET: u64 = 2;
/// Report sampling seed sits this far above the master seed.
pub const REPORT_SEED_OFFSET: u64 = 3;

/// Default sharability probability, `n^(-1/4)`.
pub fn default_p(n: u32) -> f64 {
    f64::from(n).powf(-0.25)
}

/// Inputs of a full run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub n: u32,
    /// Sharability probability for the universe draw.
    pub p: f64,
    /// Master seed; each phase derives its own by a fixed offset.
    pub seed: u64,
    /// Consecutive failed proposals that stop the packing; `None` takes
    /// the packing-phase default.
    pub max_failures: Option<u64>,
    /// Extra finishing-stage attempts after the first.
    pub max_restarts: u32,
    /// Per-edge list budget override; `None` takes the formula value.
    pub d_b: Option<usize>,
    pub strategy: Strategy,
}

impl PipelineConfig {
    /// Defaults: `p = n^(-1/4)`, phase-default budgets, restart strategy.
    pub fn new(n: u32, seed: u64) -> Self {
        PipelineConfig {
            n,
            p: default_p(n),
            seed,
            max_failures: None,
            max_restarts: 50,
            d_b: None,
            strategy: Strategy::RandomGreedyRestart,
        }
    }
}

/// Packing-phase view of the run inputs.
pub fn phase_a_config(config: &PipelineConfig) -> PhaseAConfig {
    let mut cfg = PhaseAConfig::new(
        config.n,
        config.p,
        config.seed.wrapping_add(PHASE_A_SEED_OFFSET),
    );
    cfg.max_consecutive_failures = config.max_failures;
    cfg
}

/// Finishing-phase view of the run inputs.
pub fn phase_b_config(config: &PipelineConfig) -> PhaseBConfig {
    PhaseBConfig {
        n: config.n,
        d_b: config.d_b.unwrap_or_else(|| default_d_b(config.n)),
        seed: config.seed.wrapping_add(PHASE_B_SEED_OFFSET),
        max_restarts: config.max_restarts,
        strategy: config.strategy,
    }
}

/// First color id above both packing pools; the finishing pools start
/// here.
pub fn next_free_color(universe: &PhaseAUniverse) -> ColorId {
    let top = universe.c_a1().iter().chain(universe.c_a2()).map(|c| c.0).max();
    ColorId(top.map_or(0, |t| t + 1))
}

/// Everything a finished run produces.
#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub phase_a: PhaseAOutput,
    pub classes: UncoloredClasses,
    pub lists: ListAssignment,
    /// The completed coloring.
    pub coloring: EdgeColoring,
    pub phase_b_stats: PhaseBStats,
    pub certificate: Certificate,
}

/// Failures of any stage, plus the defensive final verification.
#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    PhaseA(#[from] PhaseAError),
    #[error(transparent)]
    Classes(#[from] SFamilyError),
    #[error(transparent)]
    PhaseB(#[from] PhaseBError),
    #[error("finished coloring violates the clique condition on {witness:?}")]
    Verification { witness: Vec<Vertex> },
    #[error(transparent)]
    Certificate(#[from] CertificateError),
}

/// Runs both phases, verifies the result, and certifies the color count.
///
/// # Errors
///
/// Passes through phase errors, reports a verification witness if the
/// finished coloring breaks the clique condition, and surfaces
/// certificate preconditions.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineOutput, PipelineError> {
    let phase_a = run_phase_a(&phase_a_config(config))?;
    let classes = UncoloredClasses::from_universe(phase_a.state.coloring(), &phase_a.universe)?;
    let cfg_b = phase_b_config(config);
    let lists = build_lists(&classes, &cfg_b, next_free_color(&phase_a.universe));
    let finished = assign_colors(phase_a.state.coloring(), &classes, &lists, &cfg_b)?;
    if let Some(witness) = find_violations(&finished.coloring, 5, 8, Some(1)).into_iter().next() {
        return Err(PipelineError::Verification { witness });
    }
    let certificate = certify(&finished.coloring)?;
    Ok(PipelineOutput {
        phase_a,
        classes,
        lists,
        coloring: finished.coloring,
        phase_b_stats: finished.stats,
        certificate,
    })
}
