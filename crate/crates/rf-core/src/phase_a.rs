//! Random-greedy packing of gadget placements into one shared coloring.
//!
//! A [`MatchingState`] owns the growing coloring plus the ledger of
//! consumed vertex-color pairs. [`try_place`] admits a placement only when
//! its edges are fresh, its pairs are unclaimed, it closes no alternating
//! 4-cycle, and it creates no (5,8)-violation; [`run_phase_a`] drives a
//! rejection-sampling loop over [`sample_gadget`] until proposals stop
//! landing. [`classify_conflict`] sorts the configurations the guards
//! exclude into the six shapes they can take on four or five vertices.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{
    count_pairs, for_each_subset, monochromatic_components, violation_threshold, ColorId,
    ColoringError, ComponentShape, Edge, EdgeColoring, Vertex,
};
use crate::gadget::{sample_gadget, validate, ColoredGadget, GadgetError, PhaseAUniverse};

/// Errors from placement, classification, and invariant auditing.
#[derive(Debug, Error, PartialEq)]
pub enum PhaseAError {
    #[error("state is over K_{state_n} but the universe is over K_{universe_n}")]
    SizeMismatch { state_n: u32, universe_n: u32 },
    #[error("proposed placement is invalid here: {0}")]
    InvalidGadget(#[from] GadgetError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("gadgets disagree on the color of {edge:?}")]
    InconsistentGadgets { edge: Edge },
    #[error("conflict subsets have four or five vertices, got {len}")]
    BadSubsetSize { len: usize },
    #[error("the subset carries too few repetitions to be a conflict")]
    NotAConflict,
    #[error("conflict shape outside the taxonomy: {detail}")]
    Unclassifiable { detail: &'static str },
    #[error("packing invariant broken: {what}")]
    InvariantBroken { what: String },
}

macro_rules! broken {
    ($($t:tt)*) => {
        return Err(PhaseAError::InvariantBroken { what: format!($($t)*) })
    };
}

/// Four vertices carrying two colors in alternation: `edges[0]` and
/// `edges[1]` share one color, `edges[2]` and `edges[3]` another.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AltCycle {
    pub vertices: Vec<Vertex>,
    pub edges: [(Edge, ColorId); 4],
}

/// Closes the cycle `e`, `f` (both in `alpha`) against a crossing pair in
/// some other shared color, if the coloring provides one.
fn cycle_between(coloring: &EdgeColoring, e: Edge, alpha: ColorId, f: Edge) -> Option<AltCycle> {
    let crossings = [
        (Edge::new(e.lo(), f.lo()), Edge::new(e.hi(), f.hi())),
        (Edge::new(e.lo(), f.hi()), Edge::new(e.hi(), f.lo())),
    ];
    for (x, y) in crossings {
        if let (Some(bx), Some(by)) = (coloring.color(x), coloring.color(y)) {
            if bx == by && bx != alpha {
                let mut vertices = vec![e.lo(), e.hi(), f.lo(), f.hi()];
                vertices.sort_unstable();
                return Some(AltCycle { vertices, edges: [(e, alpha), (f, alpha), (x, bx), (y, bx)] });
            }
        }
    }
    None
}

/// First alternating 4-cycle through the colored edge `e`, scanning its
/// class in sorted order.
fn cycle_through(coloring: &EdgeColoring, e: Edge, alpha: ColorId) -> Option<AltCycle> {
    coloring
        .class(alpha)
        .filter(|f| *f != e && !f.shares_vertex(&e))
        .find_map(|f| cycle_between(coloring, e, alpha, f))
}

/// Checks whether adding `new_edges` would close an alternating 4-cycle
/// through at least one of them. Cycles already present are not reported.
///
/// # Errors
///
/// Errors if a new edge is out of range, already colored, or listed twice.
pub fn alt_4cycle_check(
    coloring: &EdgeColoring,
    new_edges: &[(Edge, ColorId)],
) -> Result<Option<AltCycle>, ColoringError> {
    let mut overlay = coloring.clone();
    for &(e, c) in new_edges {
        overlay.assign(e, c)?;
    }
    Ok(new_edges.iter().find_map(|&(e, c)| cycle_through(&overlay, e, c)))
}

/// Scans the whole coloring for an alternating 4-cycle.
pub fn find_alt_4cycle(coloring: &EdgeColoring) -> Option<AltCycle> {
    for (alpha, class) in coloring.classes() {
        let edges: Vec<Edge> = class.iter().copied().collect();
        for i in 0..edges.len() {
            for j in (i + 1)..edges.len() {
                if edges[i].shares_vertex(&edges[j]) {
                    continue;
                }
                if let Some(cyc) = cycle_between(coloring, edges[i], alpha, edges[j]) {
                    return Some(cyc);
                }
            }
        }
    }
    None
}

/// The shared coloring built by the packing, together with the placements
/// behind it and the vertex-color pairs they consume.
#[derive(Clone, Debug)]
pub struct MatchingState {
    coloring: EdgeColoring,
    placed: Vec<ColoredGadget>,
    used_pairs: BTreeSet<(Vertex, ColorId)>,
}

impl MatchingState {
    pub fn new(n: u32) -> Self {
        MatchingState {
            coloring: EdgeColoring::new(n),
            placed: Vec::new(),
            used_pairs: BTreeSet::new(),
        }
    }

    pub fn coloring(&self) -> &EdgeColoring {
        &self.coloring
    }

    /// Accepted placements in canonical form, in placement order.
    pub fn placed(&self) -> &[ColoredGadget] {
        &self.placed
    }

    pub fn used_pairs(&self) -> &BTreeSet<(Vertex, ColorId)> {
        &self.used_pairs
    }

    /// Test and fuzz hook: applies a placement with no guard beyond edge
    /// occupancy. On error the coloring may hold a prefix of the edges.
    pub fn place_unchecked(&mut self, g: &ColoredGadget) -> Result<(), ColoringError> {
        for (e, c) in g.edges() {
            self.coloring.assign(e, c)?;
        }
        self.used_pairs.extend(g.hit_pairs());
        self.placed.push(g.canonical());
        Ok(())
    }
}

/// Why [`try_place`] turned a placement down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectReason {
    /// One of the seven edges is already colored.
    EdgeOverlap(Edge),
    /// One of the twelve vertex-color pairs is already consumed.
    PairOverlap(Vertex, ColorId),
    /// The placement would close an alternating 4-cycle.
    AltCycle(AltCycle),
    /// The placement would put three repetitions on five vertices.
    Violation(Vec<Vertex>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaceOutcome {
    Accepted,
    Rejected(RejectReason),
}

/// First (5,8)-violating 5-set through one of `edges`, which must already
/// be applied to the coloring. Subsets containing an earlier listed edge
/// are skipped, since the earlier pass covered them.
fn violation_through(coloring: &EdgeColoring, edges: &[(Edge, ColorId)]) -> Option<Vec<Vertex>> {
    let thresh = violation_threshold(5, 8);
    let n = coloring.n();
    let mut found: Option<Vec<Vertex>> = None;
    for (idx, &(e, _)) in edges.iter().enumerate() {
        let pool: Vec<Vertex> = (0..n).filter(|&v| !e.touches(v)).collect();
        let mut s: Vec<Vertex> = Vec::with_capacity(5);
        for_each_subset(&pool, 3, |rest| {
            if edges[..idx]
                .iter()
                .any(|&(f, _)| rest.contains(&f.lo()) && rest.contains(&f.hi()))
            {
                return true;
            }
            s.clear();
            s.push(e.lo());
            s.push(e.hi());
            s.extend_from_slice(rest);
            s.sort_unstable();
            let (x, y) = count_pairs(coloring, &s);
            if (x - y) as i64 > thresh {
                found = Some(s.clone());
                return false;
            }
            true
        });
        if found.is_some() {
            break;
        }
    }
    found
}

/// Admits `g` into the state if all four guards pass, reporting the first
/// failed guard otherwise.
///
/// # Errors
///
/// Errors when the state and universe sizes disagree or `g` is not a valid
/// placement for `u`; rejection by a guard is an `Ok` outcome.
pub fn try_place(
    state: &mut MatchingState,
    g: &ColoredGadget,
    u: &PhaseAUniverse,
) -> Result<PlaceOutcome, PhaseAError> {
    if state.coloring.n() != u.n() {
        return Err(PhaseAError::SizeMismatch { state_n: state.coloring.n(), universe_n: u.n() });
    }
    validate(g, u)?;
    let edges = g.edges();
    for &(e, _) in &edges {
        if state.coloring.is_colored(e) {
            return Ok(PlaceOutcome::Rejected(RejectReason::EdgeOverlap(e)));
        }
    }
    for &(v, c) in &g.hit_pairs() {
        if state.used_pairs.contains(&(v, c)) {
            return Ok(PlaceOutcome::Rejected(RejectReason::PairOverlap(v, c)));
        }
    }
    for &(e, c) in &edges {
        state.coloring.assign(e, c).expect("edges checked uncolored");
    }
    let hit = edges
        .iter()
        .find_map(|&(e, c)| cycle_through(&state.coloring, e, c))
        .map(RejectReason::AltCycle)
        .or_else(|| violation_through(&state.coloring, &edges).map(RejectReason::Violation));
    if let Some(reason) = hit {
        for &(e, _) in &edges {
            state.coloring.clear(e).expect("just assigned");
        }
        return Ok(PlaceOutcome::Rejected(reason));
    }
    state.used_pairs.extend(g.hit_pairs());
    state.placed.push(g.canonical());
    Ok(PlaceOutcome::Accepted)
}

/// The six conflict shapes on four or five vertices, plus a fallback for
/// alternating cycles whose edges do not come from four distinct
/// placements.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConflictKind {
    /// Alternating 4-cycle, one edge from each of four placements.
    Type1,
    /// Three edges of one 2-path color plus a doubled color, no cycle.
    Type2,
    /// A triangle whose chord color repeats elsewhere in the subset.
    Type3,
    /// Two triangles plus a third repeated color.
    Type4,
    /// One triangle, chord color unrepeated, two disjoint repeated pairs.
    Type5,
    /// Three repeated colors, each on a disjoint pair, no cycle.
    Type6,
    /// Alternating 4-cycle with fewer than four owners.
    Alt4Cycle,
}

/// A classified conflict: the vertices it lives on and the placements
/// whose edges participate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConflictWitness {
    pub kind: ConflictKind,
    pub subset: Vec<Vertex>,
    pub gadgets: Vec<ColoredGadget>,
}

/// First alternating cycle inside the sorted 4-set `q`, built from the
/// three ways of pairing its vertices.
fn cycle_in_quad(coloring: &EdgeColoring, q: [Vertex; 4]) -> Option<AltCycle> {
    let pairings = [
        [Edge::new(q[0], q[1]), Edge::new(q[2], q[3])],
        [Edge::new(q[0], q[2]), Edge::new(q[1], q[3])],
        [Edge::new(q[0], q[3]), Edge::new(q[1], q[2])],
    ];
    let mono = |p: &[Edge; 2]| match (coloring.color(p[0]), coloring.color(p[1])) {
        (Some(a), Some(b)) if a == b => Some(a),
        _ => None,
    };
    for i in 0..3 {
        for j in (i + 1)..3 {
            if let (Some(alpha), Some(beta)) = (mono(&pairings[i]), mono(&pairings[j])) {
                if alpha != beta {
                    return Some(AltCycle {
                        vertices: q.to_vec(),
                        edges: [
                            (pairings[i][0], alpha),
                            (pairings[i][1], alpha),
                            (pairings[j][0], beta),
                            (pairings[j][1], beta),
                        ],
                    });
                }
            }
        }
    }
    None
}

/// First alternating cycle inside any 4-subset of the sorted set `s`.
fn cycle_in_subset(coloring: &EdgeColoring, s: &[Vertex]) -> Option<AltCycle> {
    if s.len() == 4 {
        return cycle_in_quad(coloring, [s[0], s[1], s[2], s[3]]);
    }
    for skip in (0..s.len()).rev() {
        let mut q = [0; 4];
        let mut w = 0;
        for (i, &v) in s.iter().enumerate() {
            if i != skip {
                q[w] = v;
                w += 1;
            }
        }
        if let Some(cyc) = cycle_in_quad(coloring, q) {
            return Some(cyc);
        }
    }
    None
}

fn witness_for_cycle(
    gadgets: &[ColoredGadget],
    owners: &BTreeMap<Edge, Vec<usize>>,
    cyc: &AltCycle,
) -> ConflictWitness {
    let lists: Vec<&Vec<usize>> = cyc
        .edges
        .iter()
        .map(|(e, _)| owners.get(e).expect("cycle edges are colored"))
        .collect();
    let distinct: BTreeSet<usize> = lists.iter().flat_map(|l| l.iter().copied()).collect();
    let kind = if distinct.len() == 4 && lists.iter().all(|l| l.len() == 1) {
        ConflictKind::Type1
    } else {
        ConflictKind::Alt4Cycle
    };
    ConflictWitness {
        kind,
        subset: cyc.vertices.clone(),
        gadgets: distinct.into_iter().map(|i| gadgets[i]).collect(),
    }
}

/// Classifies the conflict the gadgets create on `subset`. The subset must
/// span an alternating 4-cycle (four vertices) or at least three
/// repetitions (five vertices).
///
/// # Errors
///
/// Errors on malformed subsets, on gadget lists that disagree about an
/// edge color, on subsets without a conflict, and on repetition patterns
/// no matching-consistent packing can produce.
pub fn classify_conflict(
    gadgets: &[ColoredGadget],
    subset: &[Vertex],
) -> Result<ConflictWitness, PhaseAError> {
    if subset.len() != 4 && subset.len() != 5 {
        return Err(PhaseAError::BadSubsetSize { len: subset.len() });
    }
    let mut s = subset.to_vec();
    s.sort_unstable();
    if s.windows(2).any(|w| w[0] == w[1]) {
        return Err(ColoringError::RepeatedVertex { subset: subset.to_vec() }.into());
    }

    let n = 1 + gadgets
        .iter()
        .flat_map(|g| g.slots())
        .chain(s.iter().copied())
        .max()
        .unwrap_or(0);
    let mut coloring = EdgeColoring::new(n);
    let mut owners: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    for (i, g) in gadgets.iter().enumerate() {
        for (e, c) in g.edges() {
            match coloring.color(e) {
                None => {
                    coloring.assign(e, c).expect("fresh edge");
                    owners.entry(e).or_default().push(i);
                }
                Some(prev) if prev == c => owners.entry(e).or_default().push(i),
                Some(_) => return Err(PhaseAError::InconsistentGadgets { edge: e }),
            }
        }
    }

    let mut by_color: BTreeMap<ColorId, Vec<Edge>> = BTreeMap::new();
    for i in 0..s.len() {
        for j in (i + 1)..s.len() {
            let e = Edge::new(s[i], s[j]);
            if let Some(c) = coloring.color(e) {
                by_color.entry(c).or_default().push(e);
            }
        }
    }

    let cycle = cycle_in_subset(&coloring, &s);
    if s.len() == 4 {
        return match cycle {
            Some(cyc) => Ok(witness_for_cycle(gadgets, &owners, &cyc)),
            None => Err(PhaseAError::NotAConflict),
        };
    }

    let reps: usize = by_color.values().map(|v| v.len() - 1).sum();
    if reps < 3 {
        return Err(PhaseAError::NotAConflict);
    }
    if let Some(cyc) = cycle {
        return Ok(witness_for_cycle(gadgets, &owners, &cyc));
    }

    let repeated: Vec<(ColorId, &Vec<Edge>)> =
        by_color.iter().filter(|(_, v)| v.len() >= 2).map(|(c, v)| (*c, v)).collect();
    let witness = |kind: ConflictKind| {
        let idx: BTreeSet<usize> = repeated
            .iter()
            .flat_map(|(_, v)| v.iter())
            .flat_map(|e| owners[e].iter().copied())
            .collect();
        Ok(ConflictWitness {
            kind,
            subset: s.clone(),
            gadgets: idx.into_iter().map(|i| gadgets[i]).collect(),
        })
    };

    if by_color.values().any(|v| v.len() >= 4) {
        return Err(PhaseAError::Unclassifiable {
            detail: "four or more edges share a color on five vertices",
        });
    }
    if by_color.values().any(|v| v.len() == 3) {
        return witness(ConflictKind::Type2);
    }

    let adjacent: Vec<&(ColorId, &Vec<Edge>)> =
        repeated.iter().filter(|(_, v)| v[0].shares_vertex(&v[1])).collect();
    match adjacent.len() {
        0 => witness(ConflictKind::Type6),
        1 => {
            let pair = adjacent[0].1;
            let center = pair[0]
                .endpoints()
                .into_iter()
                .find(|&v| pair[1].touches(v))
                .expect("adjacent edges share a vertex");
            let tips =
                [pair[0].other(center).unwrap(), pair[1].other(center).unwrap()];
            let chord = Edge::new(tips[0], tips[1]);
            let chord_repeats = coloring
                .color(chord)
                .is_some_and(|c| by_color[&c].len() >= 2);
            witness(if chord_repeats { ConflictKind::Type3 } else { ConflictKind::Type5 })
        }
        2 => witness(ConflictKind::Type4),
        _ => Err(PhaseAError::Unclassifiable {
            detail: "three or more adjacent repetitions on five vertices",
        }),
    }
}

/// Audits a state against the structural invariants the guards maintain:
/// placements valid and edge-disjoint, every hit pair claimed once, the
/// ledger in sync, colored edges off the sharable set, first-pool classes
/// matchings, and second-pool classes disjoint unions of 2-paths.
///
/// # Errors
///
/// Returns the first broken invariant.
pub fn check_invariants(state: &MatchingState, u: &PhaseAUniverse) -> Result<(), PhaseAError> {
    if state.coloring.n() != u.n() {
        return Err(PhaseAError::SizeMismatch { state_n: state.coloring.n(), universe_n: u.n() });
    }
    if state.coloring.colored_count() != 7 * state.placed.len() {
        broken!(
            "{} colored edges for {} placements",
            state.coloring.colored_count(),
            state.placed.len()
        );
    }
    let mut edge_owner: BTreeMap<Edge, ColorId> = BTreeMap::new();
    for g in &state.placed {
        validate(g, u)?;
        for (e, c) in g.edges() {
            if edge_owner.insert(e, c).is_some() {
                broken!("edge {e:?} claimed by two placements");
            }
            if state.coloring.color(e) != Some(c) {
                broken!("coloring disagrees with placement on {e:?}");
            }
        }
    }
    if edge_owner.len() != state.coloring.colored_count() {
        broken!("coloring holds edges no placement claims");
    }
    let mut pairs: BTreeSet<(Vertex, ColorId)> = BTreeSet::new();
    for g in &state.placed {
        for pr in g.hit_pairs() {
            if !pairs.insert(pr) {
                broken!("pair ({}, {:?}) claimed twice", pr.0, pr.1);
            }
        }
    }
    if pairs != state.used_pairs {
        broken!("pair ledger out of sync with placements");
    }
    for (e, _) in state.coloring.colored_edges() {
        if u.is_sharable(e) {
            broken!("sharable edge {e:?} is colored");
        }
    }
    for comp in monochromatic_components(&state.coloring) {
        if u.in_c_a1(comp.color) {
            if comp.shape != ComponentShape::IsolatedEdge {
                broken!("matching color {:?} has a {:?} component", comp.color, comp.shape);
            }
        } else if u.in_c_a2(comp.color) {
            if comp.shape != ComponentShape::TwoPath {
                broken!("2-path color {:?} has a {:?} component", comp.color, comp.shape);
            }
        } else {
            broken!("color {:?} is outside both pools", comp.color);
        }
    }
    Ok(())
}

/// Inputs of one packing run.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseAConfig {
    pub n: u32,
    /// Sharing probability for edges and for far-side vertex-color pairs.
    pub p: f64,
    pub seed: u64,
    /// Stop after this many rejected proposals in a row; `None` means
    /// twenty times `n`.
    pub max_consecutive_failures: Option<u64>,
}

impl PhaseAConfig {
    pub fn new(n: u32, p: f64, seed: u64) -> Self {
        PhaseAConfig { n, p, seed, max_consecutive_failures: None }
    }

    pub fn effective_max_failures(&self) -> u64 {
        self.max_consecutive_failures.unwrap_or(20 * u64::from(self.n))
    }
}

/// Proposal and rejection counts for one run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseAStats {
    pub proposals: u64,
    pub placed: u64,
    /// Proposals the sampler abandoned before producing a placement.
    pub sampler_rejects: u64,
    pub edge_overlap_rejects: u64,
    pub pair_overlap_rejects: u64,
    pub cycle_rejects: u64,
    pub violation_rejects: u64,
    pub colored_edges: u64,
}

#[derive(Clone, Debug)]
pub struct PhaseAOutput {
    pub universe: PhaseAUniverse,
    pub state: MatchingState,
    pub stats: PhaseAStats,
}

/// Draws the universe for `config` and pairs it with an empty state. Uses
/// the same stream as [`run_phase_a`], so the universes agree.
pub fn setup(config: &PhaseAConfig) -> (PhaseAUniverse, MatchingState) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let universe = PhaseAUniverse::random(config.n, config.p, &mut rng);
    (universe, MatchingState::new(config.n))
}

/// Packs gadgets greedily until `max_consecutive_failures` proposals in a
/// row fail to land.
///
/// # Errors
///
/// Errors only on internal inconsistencies surfaced by [`try_place`];
/// running out of proposals is the normal way to stop.
pub fn run_phase_a(config: &PhaseAConfig) -> Result<PhaseAOutput, PhaseAError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let universe = PhaseAUniverse::random(config.n, config.p, &mut rng);
    let mut state = MatchingState::new(config.n);
    let mut stats = PhaseAStats::default();
    let max_failures = config.effective_max_failures();
    let mut failures = 0u64;
    while failures < max_failures {
        stats.proposals += 1;
        let Some(g) = sample_gadget(&universe, &mut rng, None) else {
            stats.sampler_rejects += 1;
            failures += 1;
            continue;
        };
        match try_place(&mut state, &g, &universe)? {
            PlaceOutcome::Accepted => {
                stats.placed += 1;
                failures = 0;
            }
            PlaceOutcome::Rejected(reason) => {
                failures += 1;
                match reason {
                    RejectReason::EdgeOverlap(_) => stats.edge_overlap_rejects += 1,
                    RejectReason::PairOverlap(..) => stats.pair_overlap_rejects += 1,
                    RejectReason::AltCycle(_) => stats.cycle_rejects += 1,
                    RejectReason::Violation(_) => stats.violation_rejects += 1,
                }
            }
        }
    }
    stats.colored_edges = state.coloring.colored_count() as u64;
    Ok(PhaseAOutput { universe, state, stats })
}
