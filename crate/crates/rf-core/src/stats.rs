//! Measured diagnostics over packing outputs: per-vertex uncolored
//! degrees, how often each sharable edge sits in a gadget's sharing
//! position, family-size maxima over sampled anchors and overlap maxima
//! over sampled anchor pairs, plus an exact anchored gadget census with a
//! role breakdown.
//!
//! Everything here reports raw counts. No verdict is rendered against
//! asymptotic reference scales; judging trends needs a sweep over several
//! board sizes and is left to the caller.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{ColorId, Edge, Vertex};
use crate::gadget::{
    enumerate_gadgets, Anchor, ColoredGadget, PhaseAUniverse, SHARABLE_SLOT_PAIRS,
};
use crate::phase_a::PhaseAOutput;
use crate::sfamily::{count_matrix, overlap_pairs, CountMatrix, FamilyCount, UncoloredClasses};

/// Largest board the exact census will enumerate.
pub const CENSUS_MAX_N: u32 = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("census needs exhaustive enumeration; K_{n} is past the K_{max} budget")]
    EnumerationBudget { n: u32, max: u32 },
}

/// Snapshot of the quantities a well-behaved packing keeps small: how
/// much of each vertex's neighborhood is still uncolored, how the placed
/// gadgets spread over the sharable edges, and how large the anchored
/// families and their overlaps get on a sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiReport {
    pub n: u32,
    pub placed: usize,
    /// Uncolored edges at each vertex, indexed by vertex.
    pub uncolored_degree: Vec<usize>,
    pub max_uncolored_degree: usize,
    /// For every sharable edge, the number of placed gadgets holding it
    /// in one of the four sharing-position slot pairs.
    pub shareable_gadget_counts: Vec<(Edge, usize)>,
    pub max_shareable_count: usize,
    /// The uncolored edges the family counts were taken over, sorted.
    pub sampled_anchors: Vec<Edge>,
    /// Elementwise maxima of the five family counts over the sample.
    pub sfam_max: CountMatrix,
    /// The anchor pairs the overlap maximum was taken over.
    pub sampled_pairs: Vec<(Edge, Edge)>,
    pub overlap_max: usize,
}

fn max_count(a: FamilyCount, b: FamilyCount) -> FamilyCount {
    FamilyCount { sets: a.sets.max(b.sets), entries: a.entries.max(b.entries) }
}

/// Measures the report quantities on a packing output. Degrees and
/// per-edge gadget counts are exact; family and overlap numbers are
/// maxima over `sample_size` anchors and anchor pairs drawn from the
/// uncolored edges.
///
/// The output must come from a packing run: sharable edges uncolored,
/// every placed gadget's non-edges inside the sharable set.
pub fn quasi_report<R: Rng>(output: &PhaseAOutput, sample_size: usize, rng: &mut R) -> QuasiReport {
    let universe = &output.universe;
    let coloring = output.state.coloring();
    let n = universe.n();

    let mut uncolored_degree = vec![0usize; n as usize];
    for e in coloring.uncolored_edges() {
        uncolored_degree[e.lo() as usize] += 1;
        uncolored_degree[e.hi() as usize] += 1;
    }
    let max_uncolored_degree = uncolored_degree.iter().copied().max().unwrap_or(0);

    let mut share: BTreeMap<Edge, usize> = universe.sharable_edges().map(|e| (e, 0)).collect();
    for g in output.state.placed() {
        let slots = g.slots();
        for &(a, b) in &SHARABLE_SLOT_PAIRS {
            let e = Edge::new(slots[a], slots[b]);
            *share.get_mut(&e).expect("placed gadget non-edges are sharable") += 1;
        }
    }
    let shareable_gadget_counts: Vec<(Edge, usize)> = share.into_iter().collect();
    let max_shareable_count =
        shareable_gadget_counts.iter().map(|&(_, k)| k).max().unwrap_or(0);

    let classes = UncoloredClasses::from_universe(coloring, universe)
        .expect("packing outputs keep sharable edges uncolored");
    let uncolored: Vec<Edge> = coloring.uncolored_edges().collect();

    let mut sampled_anchors: Vec<Edge> = if sample_size >= uncolored.len() {
        uncolored.clone()
    } else {
        uncolored.choose_multiple(rng, sample_size).copied().collect()
    };
    sampled_anchors.sort_unstable();

    let zero = FamilyCount { sets: 0, entries: 0 };
    let mut sfam_max = CountMatrix {
        quad_zero: zero,
        quad_one: zero,
        quint_zero: zero,
        quint_one: zero,
        quint_two: zero,
    };
    for &e in &sampled_anchors {
        let m = count_matrix(coloring, &classes, e).expect("sampled anchors are uncolored");
        sfam_max.quad_zero = max_count(sfam_max.quad_zero, m.quad_zero);
        sfam_max.quad_one = max_count(sfam_max.quad_one, m.quad_one);
        sfam_max.quint_zero = max_count(sfam_max.quint_zero, m.quint_zero);
        sfam_max.quint_one = max_count(sfam_max.quint_one, m.quint_one);
        sfam_max.quint_two = max_count(sfam_max.quint_two, m.quint_two);
    }

    let mut sampled_pairs = Vec::new();
    let mut overlap_max = 0;
    if uncolored.len() >= 2 {
        for _ in 0..sample_size {
            let i = rng.gen_range(0..uncolored.len());
            let j = loop {
                let j = rng.gen_range(0..uncolored.len());
                if j != i {
                    break j;
                }
            };
            let (a, b) = if uncolored[i] < uncolored[j] {
                (uncolored[i], uncolored[j])
            } else {
                (uncolored[j], uncolored[i])
            };
            let overlap = overlap_pairs(coloring, &classes, a, b)
                .expect("sampled anchors are uncolored");
            overlap_max = overlap_max.max(overlap);
            sampled_pairs.push((a, b));
        }
    }

    QuasiReport {
        n,
        placed: output.state.placed().len(),
        uncolored_degree,
        max_uncolored_degree,
        shareable_gadget_counts,
        max_shareable_count,
        sampled_anchors,
        sfam_max,
        sampled_pairs,
        overlap_max,
    }
}

/// Where an anchor sits inside the placements counted for it. Edge
/// anchors split across the three edge orbits: the two outer matching
/// edges, the center matching edge joining the degree-three slots, and
/// the four 2-path legs. Vertex-color anchors split matching claims and
/// 2-path claims by the same outer-versus-center distinction.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RoleSplit {
    Edge { outer: usize, center: usize, path: usize },
    Claim { matching_outer: usize, matching_center: usize, path_end: usize, path_center: usize },
}

/// Exact anchored degree: how many valid placements contain the anchor,
/// and in which role.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorDegree {
    pub anchor: Anchor,
    pub total: usize,
    pub split: RoleSplit,
}

/// Index of `f` in the placement's edge list; 0 through 2 are the
/// matching edges, the rest the 2-path legs.
fn edge_slot(g: &ColoredGadget, f: Edge) -> usize {
    g.edges().iter().position(|&(x, _)| x == f).expect("anchored placement uses the edge")
}

/// True when the claimed vertex is one of the two center slots for its
/// color: the middle matching edge's endpoints for the matching color,
/// the 2-path middle for a path color.
fn claim_is_central(g: &ColoredGadget, v: Vertex, color: ColorId) -> bool {
    let pos = g.slots().iter().position(|&s| s == v).expect("anchored placement claims the vertex");
    if color == g.c1() {
        pos == 2 || pos == 3
    } else if color == g.c2() {
        pos == 2
    } else {
        pos == 3
    }
}

/// Enumerates every valid placement containing each anchor and reports
/// the count with its role breakdown. Boards past [`CENSUS_MAX_N`] are
/// refused; the enumeration is exhaustive and meant for fixture scales.
pub fn degree_census(
    u: &PhaseAUniverse,
    anchors: &[Anchor],
) -> Result<Vec<AnchorDegree>, StatsError> {
    if u.n() > CENSUS_MAX_N {
        return Err(StatsError::EnumerationBudget { n: u.n(), max: CENSUS_MAX_N });
    }
    let mut out = Vec::with_capacity(anchors.len());
    for &anchor in anchors {
        let hits = enumerate_gadgets(u, Some(&anchor));
        let split = match anchor {
            Anchor::Edge(f) => {
                let (mut outer, mut center, mut path) = (0, 0, 0);
                for g in &hits {
                    match edge_slot(g, f) {
                        0 | 2 => outer += 1,
                        1 => center += 1,
                        _ => path += 1,
                    }
                }
                RoleSplit::Edge { outer, center, path }
            }
            Anchor::Pair(v, color) => {
                let (mut matching_outer, mut matching_center) = (0, 0);
                let (mut path_end, mut path_center) = (0, 0);
                for g in &hits {
                    let central = claim_is_central(g, v, color);
                    if color == g.c1() {
                        if central {
                            matching_center += 1;
                        } else {
                            matching_outer += 1;
                        }
                    } else if central {
                        path_center += 1;
                    } else {
                        path_end += 1;
                    }
                }
                RoleSplit::Claim { matching_outer, matching_center, path_end, path_center }
            }
        };
        out.push(AnchorDegree { anchor, total: hits.len(), split });
    }
    Ok(out)
}
