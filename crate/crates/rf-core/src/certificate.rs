//! Counting certificate for the lower bound on the number of colors.
//!
//! Any complete coloring of `K_n` in which every 5-clique sees at least 8
//! colors can be normalized to have no monochromatic triangle, after which
//! its color classes split into components of at most three edges. The
//! components are merged into parts of eight kinds; charging each part's
//! edge weight against the vertex-color pairs it "hits" yields
//! `7 * hits >= 12 * edges` per part with every pair hit at most once, and
//! therefore `|C| >= 6(n-1)/7` colors overall. This module performs the
//! normalization, builds the partition with its hit ledger, and emits the
//! resulting arithmetic as an exactly checkable certificate.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{
    find_violations, monochromatic_components, would_violate, ColorId, ComponentShape, Edge,
    EdgeColoring, MonoComponent, Vertex,
};

/// Report schema version stamped into serialized certificates.
pub const SCHEMA_VERSION: u32 = 1;

/// Edge weight contributed by each part kind (index = kind - 1).
pub const EDGES_PER_KIND: [u64; 8] = [6, 5, 5, 5, 3, 4, 7, 1];

/// Vertex-color pairs hit by each part kind (index = kind - 1).
pub const HITS_PER_KIND: [u64; 8] = [13, 10, 10, 9, 6, 7, 12, 2];

/// One merged part of the component partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Part {
    /// Kind tag, 1 through 8.
    pub kind: u8,
    /// Sorted `(edge, color)` list; every colored edge of `K_n` appears in
    /// exactly one part.
    pub edges: Vec<(Edge, ColorId)>,
    /// Sorted vertex-color pairs charged to this part.
    pub hits: Vec<(Vertex, ColorId)>,
}

/// Outcome of a successful certification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub n: u32,
    /// Distinct colors used by the coloring.
    pub colors_used: u64,
    /// Number of parts of each kind (index = kind - 1).
    pub part_counts: [u64; 8],
    /// Total edge weight of all parts; equals `C(n,2)`.
    pub edge_sum: u64,
    /// Total hits; at most `n * colors_used`.
    pub hit_sum: u64,
    /// `n * colors_used`, for direct comparison against `hit_sum`.
    pub hit_capacity: u64,
    /// Reduced numerator/denominator of the exact bound `6(n-1)/7`.
    pub bound: (i64, i64),
    /// `ceil(6(n-1)/7)`, the integer form of the bound.
    pub bound_ceil: u64,
    /// Color swaps performed while removing monochromatic triangles.
    pub normalization_swaps: u64,
}

/// Errors from normalization, partition building, and certification.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("coloring is incomplete: {uncolored} edges uncolored")]
    Incomplete { uncolored: usize },
    #[error("coloring breaks the (5,8) condition on {witness:?}")]
    NotValid { witness: Vec<Vertex> },
    #[error("no safe swap removes the monochromatic triangle {triangle:?}")]
    TriangleStuck { triangle: Vec<Edge> },
    #[error("monochromatic triangle present (normalize first): {edges:?}")]
    TrianglePresent { edges: Vec<Edge> },
    #[error("color class component with more than three edges in color {color:?}: {edges:?}")]
    OversizeComponent { color: ColorId, edges: Vec<Edge> },
    #[error("{rule} needs edge {edge:?} as an unconsumed singleton part")]
    UnavailableSingleton { rule: &'static str, edge: Edge },
    #[error("{count} two-edge paths share the tip pair {tips:?}")]
    SharedTips { tips: [Vertex; 2], count: usize },
    #[error("vertex {vertex} has {count} edges of color {color:?}, expected at most one")]
    CenterColorDegree { vertex: Vertex, color: ColorId, count: usize },
    #[error("two-edge path centered at {center} has several partner candidates: {candidates:?}")]
    AmbiguousPartner { center: Vertex, candidates: Vec<Edge> },
    #[error("partner edges {edges:?} do not form an unconsumed two-edge path component")]
    BadPartner { edges: [Edge; 2] },
    #[error("kind {kind} part built with {edges} edges and {hits} hits")]
    PartInvariant { kind: u8, edges: usize, hits: usize },
    #[error("vertex-color pair ({vertex}, {color:?}) hit by parts {first} and {second}")]
    DoubleHit { vertex: Vertex, color: ColorId, first: usize, second: usize },
    #[error("certificate arithmetic failed: {what}")]
    Arithmetic { what: &'static str },
}

/// Exact lower bound `6(n-1)/7` as a reduced fraction plus its ceiling.
pub fn bound_for(n: u32) -> ((i64, i64), u64) {
    let r = Ratio::new(6 * (i64::from(n) - 1), 7);
    ((*r.numer(), *r.denom()), r.ceil().to_integer() as u64)
}

fn triangles_of(coloring: &EdgeColoring) -> Vec<MonoComponent> {
    monochromatic_components(coloring)
        .into_iter()
        .filter(|c| c.shape == ComponentShape::Triangle)
        .collect()
}

/// Removes monochromatic triangles by swapping the colors of a triangle
/// edge and an incident edge, accepting a swap only when it creates no
/// (5,8)-violation and strictly lowers the triangle count. Returns the
/// rewritten coloring and the number of swaps.
///
/// # Errors
///
/// Errors if some triangle admits no acceptable swap.
pub fn normalize_triangles(
    coloring: &EdgeColoring,
) -> Result<(EdgeColoring, u64), CertificateError> {
    let mut col = coloring.clone();
    let mut swaps = 0u64;
    loop {
        let triangles = triangles_of(&col);
        let Some(tri) = triangles.first() else {
            return Ok((col, swaps));
        };
        let tri_color = tri.color;
        let tri_edges = tri.edges.clone();
        let mut accepted = false;
        'candidates: for &e in &tri_edges {
            // Colored edges sharing exactly one endpoint with e, in order.
            let mut incident: Vec<(Edge, ColorId)> = col
                .colored_edges()
                .filter(|(f, c)| *c != tri_color && f.shares_vertex(&e) && *f != e)
                .collect();
            incident.sort_unstable();
            for (f, d) in incident {
                col.clear(e).expect("triangle edge is colored");
                col.clear(f).expect("incident edge is colored");
                let bad = would_violate(&col, &[(e, d), (f, tri_color)], 5, 8)
                    .expect("swap edges are uncolored");
                if bad.is_none() {
                    col.assign(e, d).unwrap();
                    col.assign(f, tri_color).unwrap();
                    if triangles_of(&col).len() < triangles.len() {
                        swaps += 1;
                        accepted = true;
                        break 'candidates;
                    }
                    col.clear(e).unwrap();
                    col.clear(f).unwrap();
                }
                col.assign(e, tri_color).unwrap();
                col.assign(f, d).unwrap();
            }
        }
        if !accepted {
            return Err(CertificateError::TriangleStuck { triangle: tri_edges });
        }
    }
}

/// Component pool shared by the merge stages.
struct Builder<'a> {
    coloring: &'a EdgeColoring,
    comps: Vec<MonoComponent>,
    consumed: Vec<bool>,
    /// Isolated-edge components by their edge.
    singleton_idx: BTreeMap<Edge, usize>,
    /// Two-edge path components by each member edge.
    twopath_edge: BTreeMap<Edge, usize>,
    parts: Vec<Part>,
}

impl<'a> Builder<'a> {
    fn new(coloring: &'a EdgeColoring) -> Result<Self, CertificateError> {
        let comps = monochromatic_components(coloring);
        let mut singleton_idx = BTreeMap::new();
        let mut twopath_edge = BTreeMap::new();
        for (i, c) in comps.iter().enumerate() {
            match c.shape {
                ComponentShape::Triangle => {
                    return Err(CertificateError::TrianglePresent { edges: c.edges.clone() });
                }
                ComponentShape::Other => {
                    return Err(CertificateError::OversizeComponent {
                        color: c.color,
                        edges: c.edges.clone(),
                    });
                }
                ComponentShape::IsolatedEdge => {
                    singleton_idx.insert(c.edges[0], i);
                }
                ComponentShape::TwoPath => {
                    twopath_edge.insert(c.edges[0], i);
                    twopath_edge.insert(c.edges[1], i);
                }
                ComponentShape::ThreePath | ComponentShape::ThreeStar => {}
            }
        }
        let consumed = vec![false; comps.len()];
        Ok(Builder { coloring, comps, consumed, singleton_idx, twopath_edge, parts: Vec::new() })
    }

    /// Consumes the singleton part holding `edge`, returning its color.
    fn claim_singleton(&mut self, edge: Edge, rule: &'static str) -> Result<ColorId, CertificateError> {
        match self.singleton_idx.get(&edge) {
            Some(&i) if !self.consumed[i] => {
                self.consumed[i] = true;
                Ok(self.comps[i].color)
            }
            _ => Err(CertificateError::UnavailableSingleton { rule, edge }),
        }
    }

    /// All vertex-color hits of a component: its vertices paired with its
    /// color.
    fn comp_hits(&self, i: usize) -> Vec<(Vertex, ColorId)> {
        self.comps[i].vertices.iter().map(|&v| (v, self.comps[i].color)).collect()
    }

    fn push_part(
        &mut self,
        kind: u8,
        edges: Vec<(Edge, ColorId)>,
        hits: BTreeSet<(Vertex, ColorId)>,
    ) -> Result<(), CertificateError> {
        let mut edges = edges;
        edges.sort_unstable();
        let part = Part { kind, edges, hits: hits.into_iter().collect() };
        let k = kind as usize - 1;
        if part.edges.len() as u64 != EDGES_PER_KIND[k] || part.hits.len() as u64 != HITS_PER_KIND[k]
        {
            return Err(CertificateError::PartInvariant {
                kind,
                edges: part.edges.len(),
                hits: part.hits.len(),
            });
        }
        self.parts.push(part);
        Ok(())
    }

    fn comp_edges(&self, i: usize) -> Vec<(Edge, ColorId)> {
        self.comps[i].edges.iter().map(|&e| (e, self.comps[i].color)).collect()
    }

    /// Stage 1: each three-edge star absorbs the three singletons opposite
    /// its center.
    fn merge_stars(&mut self) -> Result<(), CertificateError> {
        for i in 0..self.comps.len() {
            if self.comps[i].shape != ComponentShape::ThreeStar || self.consumed[i] {
                continue;
            }
            self.consumed[i] = true;
            let center = self.comps[i]
                .vertices
                .iter()
                .copied()
                .find(|&v| self.comps[i].degree(v) == 3)
                .expect("star has a degree-3 center");
            let leaves: Vec<Vertex> = self.comps[i]
                .vertices
                .iter()
                .copied()
                .filter(|&v| v != center)
                .collect();
            let mut edges = self.comp_edges(i);
            let mut hits: BTreeSet<(Vertex, ColorId)> = self.comp_hits(i).into_iter().collect();
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                let opp = Edge::new(leaves[a], leaves[b]);
                let c = self.claim_singleton(opp, "star merge")?;
                edges.push((opp, c));
                hits.insert((leaves[a], c));
                hits.insert((leaves[b], c));
                hits.insert((center, c));
            }
            self.push_part(1, edges, hits)?;
        }
        Ok(())
    }

    /// Stage 2: each three-edge path absorbs the two short chords, and the
    /// interior vertex off each chord picks up the chord's color.
    fn merge_three_paths(&mut self) -> Result<(), CertificateError> {
        for i in 0..self.comps.len() {
            if self.comps[i].shape != ComponentShape::ThreePath || self.consumed[i] {
                continue;
            }
            self.consumed[i] = true;
            // Orient the path u-x-y-v with u the smaller endpoint.
            let ends: Vec<Vertex> = self.comps[i]
                .vertices
                .iter()
                .copied()
                .filter(|&v| self.comps[i].degree(v) == 1)
                .collect();
            let u = *ends.iter().min().expect("path has two endpoints");
            let v = *ends.iter().max().expect("path has two endpoints");
            let x = self.comps[i]
                .edges
                .iter()
                .find_map(|e| e.other(u))
                .expect("endpoint has a neighbor");
            let y = self.comps[i]
                .edges
                .iter()
                .find_map(|e| e.other(v))
                .expect("endpoint has a neighbor");
            let mut edges = self.comp_edges(i);
            let mut hits: BTreeSet<(Vertex, ColorId)> = self.comp_hits(i).into_iter().collect();
            let c_uy = self.claim_singleton(Edge::new(u, y), "path chord merge")?;
            let c_xv = self.claim_singleton(Edge::new(x, v), "path chord merge")?;
            edges.push((Edge::new(u, y), c_uy));
            edges.push((Edge::new(x, v), c_xv));
            hits.extend([(u, c_uy), (y, c_uy), (x, c_xv), (v, c_xv)]);
            hits.insert((x, c_uy));
            hits.insert((y, c_xv));
            self.push_part(2, edges, hits)?;
        }
        Ok(())
    }

    /// Stage 3: two-edge paths sharing both tips pair up and absorb the tip
    /// edge; both centers pick up its color.
    fn merge_twin_paths(&mut self) -> Result<(), CertificateError> {
        let mut by_tips: BTreeMap<[Vertex; 2], Vec<usize>> = BTreeMap::new();
        for i in 0..self.comps.len() {
            if self.comps[i].shape == ComponentShape::TwoPath && !self.consumed[i] {
                let tips = self.comps[i].two_path_tips().expect("two-path tips");
                by_tips.entry(tips).or_default().push(i);
            }
        }
        for (tips, group) in by_tips {
            match group.len() {
                1 => {}
                2 => {
                    let (i, j) = (group[0], group[1]);
                    self.consumed[i] = true;
                    self.consumed[j] = true;
                    let tip_edge = Edge::new(tips[0], tips[1]);
                    let c = self.claim_singleton(tip_edge, "twin path merge")?;
                    let mut edges = self.comp_edges(i);
                    edges.extend(self.comp_edges(j));
                    edges.push((tip_edge, c));
                    let mut hits: BTreeSet<(Vertex, ColorId)> =
                        self.comp_hits(i).into_iter().collect();
                    hits.extend(self.comp_hits(j));
                    hits.extend([(tips[0], c), (tips[1], c)]);
                    for k in [i, j] {
                        let center = self.comps[k].two_path_center().expect("two-path center");
                        hits.insert((center, c));
                    }
                    self.push_part(3, edges, hits)?;
                }
                m => return Err(CertificateError::SharedTips { tips, count: m }),
            }
        }
        Ok(())
    }

    /// Stage 4: a two-edge path whose tip edge lies inside another two-edge
    /// path merges with it; the second path's center picks up the color of
    /// the closing singleton.
    fn merge_chained_paths(&mut self) -> Result<(), CertificateError> {
        for i in 0..self.comps.len() {
            if self.comps[i].shape != ComponentShape::TwoPath || self.consumed[i] {
                continue;
            }
            let tips = self.comps[i].two_path_tips().expect("two-path tips");
            let tip_edge = Edge::new(tips[0], tips[1]);
            let Some(&j) = self.twopath_edge.get(&tip_edge) else {
                continue;
            };
            if self.consumed[j] || j == i {
                continue;
            }
            self.consumed[i] = true;
            self.consumed[j] = true;
            let q_center = self.comps[j].two_path_center().expect("two-path center");
            debug_assert!(tip_edge.touches(q_center));
            let q_far = self.comps[j]
                .edges
                .iter()
                .find(|e| **e != tip_edge)
                .and_then(|e| e.other(q_center))
                .expect("second path has a far endpoint");
            let p_tip = tip_edge.other(q_center).expect("tip edge holds the center");
            let closing = Edge::new(p_tip, q_far);
            let c = self.claim_singleton(closing, "chained path merge")?;
            let mut edges = self.comp_edges(i);
            edges.extend(self.comp_edges(j));
            edges.push((closing, c));
            let mut hits: BTreeSet<(Vertex, ColorId)> = self.comp_hits(i).into_iter().collect();
            hits.extend(self.comp_hits(j));
            hits.extend([(p_tip, c), (q_far, c), (q_center, c)]);
            self.push_part(4, edges, hits)?;
        }
        Ok(())
    }

    /// Stages 5-7: each remaining two-edge path absorbs its tip-edge
    /// singleton; depending on how the tip-edge color continues at the
    /// path's center, the merge stops there (kind 5), absorbs the center's
    /// matching edge (kind 6), or completes a seven-edge gadget-shaped
    /// part with a partner path (kind 7).
    fn merge_remaining_paths(&mut self) -> Result<(), CertificateError> {
        for i in 0..self.comps.len() {
            if self.comps[i].shape != ComponentShape::TwoPath || self.consumed[i] {
                continue;
            }
            self.consumed[i] = true;
            let tips = self.comps[i].two_path_tips().expect("two-path tips");
            let center = self.comps[i].two_path_center().expect("two-path center");
            let tip_edge = Edge::new(tips[0], tips[1]);
            let blue = self.claim_singleton(tip_edge, "tip edge merge")?;
            let mut edges = self.comp_edges(i);
            edges.push((tip_edge, blue));
            let mut hits: BTreeSet<(Vertex, ColorId)> = self.comp_hits(i).into_iter().collect();
            hits.extend([(tips[0], blue), (tips[1], blue)]);

            let at_center: Vec<Edge> =
                self.coloring.class(blue).filter(|e| e.touches(center)).collect();
            match at_center.len() {
                0 => {
                    hits.insert((center, blue));
                    self.push_part(5, edges, hits)?;
                }
                1 => {
                    let xy = at_center[0];
                    let y = xy.other(center).expect("edge touches the center");
                    // Partner: another edge of the tip-edge color whose
                    // endpoints see a common color from y.
                    let mut partners: Vec<Edge> = Vec::new();
                    for zw in self.coloring.class(blue) {
                        if zw == tip_edge || zw == xy || zw.touches(y) {
                            continue;
                        }
                        let cz = self.coloring.color(Edge::new(y, zw.lo()));
                        let cw = self.coloring.color(Edge::new(y, zw.hi()));
                        if cz.is_some() && cz == cw {
                            partners.push(zw);
                        }
                    }
                    match partners[..] {
                        [] => {
                            let c_xy = self.claim_singleton(xy, "center edge merge")?;
                            debug_assert_eq!(c_xy, blue);
                            edges.push((xy, blue));
                            hits.extend([(center, blue), (y, blue)]);
                            self.push_part(6, edges, hits)?;
                        }
                        [zw] => {
                            let fork = [Edge::new(y, zw.lo()), Edge::new(y, zw.hi())];
                            let j = match self.twopath_edge.get(&fork[0]) {
                                Some(&j)
                                    if !self.consumed[j]
                                        && self.comps[j].edges == {
                                            let mut f = fork.to_vec();
                                            f.sort_unstable();
                                            f
                                        } =>
                                {
                                    j
                                }
                                _ => return Err(CertificateError::BadPartner { edges: fork }),
                            };
                            self.consumed[j] = true;
                            let c_xy = self.claim_singleton(xy, "gadget merge")?;
                            let c_zw = self.claim_singleton(zw, "gadget merge")?;
                            debug_assert_eq!((c_xy, c_zw), (blue, blue));
                            edges.extend(self.comp_edges(j));
                            edges.push((xy, blue));
                            edges.push((zw, blue));
                            hits.extend(self.comp_hits(j));
                            hits.extend([
                                (center, blue),
                                (y, blue),
                                (zw.lo(), blue),
                                (zw.hi(), blue),
                            ]);
                            self.push_part(7, edges, hits)?;
                        }
                        _ => {
                            return Err(CertificateError::AmbiguousPartner {
                                center,
                                candidates: partners,
                            });
                        }
                    }
                }
                m => {
                    return Err(CertificateError::CenterColorDegree {
                        vertex: center,
                        color: blue,
                        count: m,
                    });
                }
            }
        }
        Ok(())
    }

    /// Stage 8: leftover singletons stand alone.
    fn emit_singletons(&mut self) -> Result<(), CertificateError> {
        for i in 0..self.comps.len() {
            if self.comps[i].shape != ComponentShape::IsolatedEdge || self.consumed[i] {
                continue;
            }
            self.consumed[i] = true;
            let edges = self.comp_edges(i);
            let hits: BTreeSet<(Vertex, ColorId)> = self.comp_hits(i).into_iter().collect();
            self.push_part(8, edges, hits)?;
        }
        Ok(())
    }
}

/// Merges the monochromatic components of a triangle-free coloring into
/// parts of kinds 1 through 8. Every colored edge lands in exactly one
/// part.
///
/// # Errors
///
/// Errors if a monochromatic triangle or an oversize component is present,
/// or if a merge stage cannot claim a singleton it needs; on colorings
/// satisfying the (5,8) condition the stages always succeed.
pub fn build_partition(coloring: &EdgeColoring) -> Result<Vec<Part>, CertificateError> {
    let mut b = Builder::new(coloring)?;
    b.merge_stars()?;
    b.merge_three_paths()?;
    b.merge_twin_paths()?;
    b.merge_chained_paths()?;
    b.merge_remaining_paths()?;
    b.emit_singletons()?;
    debug_assert!(b.consumed.iter().all(|&c| c));
    debug_assert_eq!(
        b.parts.iter().map(|p| p.edges.len()).sum::<usize>(),
        coloring.colored_count()
    );
    Ok(b.parts)
}

/// Tallies every hit pair across the parts.
///
/// # Errors
///
/// Errors on the first pair hit by two different parts.
pub fn hit_ledger(parts: &[Part]) -> Result<BTreeMap<(Vertex, ColorId), usize>, CertificateError> {
    let mut ledger: BTreeMap<(Vertex, ColorId), usize> = BTreeMap::new();
    for (idx, part) in parts.iter().enumerate() {
        for &(v, c) in &part.hits {
            if let Some(&first) = ledger.get(&(v, c)) {
                return Err(CertificateError::DoubleHit {
                    vertex: v,
                    color: c,
                    first,
                    second: idx,
                });
            }
            ledger.insert((v, c), idx);
        }
    }
    Ok(ledger)
}

/// Runs the full certification pipeline on a complete coloring: validity
/// check, triangle normalization, partition, hit ledger, and the exact
/// bound arithmetic.
///
/// # Errors
///
/// Errors if the coloring is incomplete or breaks the (5,8) condition, if
/// normalization or a merge stage gets stuck, or if the final arithmetic
/// identities fail (which would indicate an internal bug rather than a bad
/// input).
pub fn certify(coloring: &EdgeColoring) -> Result<Certificate, CertificateError> {
    if !coloring.is_complete() {
        return Err(CertificateError::Incomplete {
            uncolored: coloring.edge_count() - coloring.colored_count(),
        });
    }
    if let Some(witness) = find_violations(coloring, 5, 8, Some(1)).into_iter().next() {
        return Err(CertificateError::NotValid { witness });
    }
    let (normalized, swaps) = normalize_triangles(coloring)?;
    debug_assert_eq!(normalized.colors_used(), coloring.colors_used());
    let parts = build_partition(&normalized)?;
    let ledger = hit_ledger(&parts)?;

    let mut part_counts = [0u64; 8];
    for p in &parts {
        part_counts[p.kind as usize - 1] += 1;
    }
    let edge_sum: u64 = part_counts
        .iter()
        .zip(EDGES_PER_KIND)
        .map(|(count, w)| count * w)
        .sum();
    let hit_sum: u64 = part_counts
        .iter()
        .zip(HITS_PER_KIND)
        .map(|(count, w)| count * w)
        .sum();
    let n = coloring.n();
    let m = (n as u64) * (n as u64 - 1) / 2;
    if edge_sum != m {
        return Err(CertificateError::Arithmetic { what: "edge sum differs from C(n,2)" });
    }
    if hit_sum != ledger.len() as u64 {
        return Err(CertificateError::Arithmetic { what: "hit sum differs from ledger size" });
    }
    if 7 * hit_sum < 12 * edge_sum {
        return Err(CertificateError::Arithmetic { what: "per-part hit weight bound failed" });
    }
    let colors_used = normalized.colors_used() as u64;
    let hit_capacity = (n as u64) * colors_used;
    if hit_sum > hit_capacity {
        return Err(CertificateError::Arithmetic { what: "hit sum exceeds n * colors" });
    }
    let (bound, bound_ceil) = bound_for(n);
    if colors_used < bound_ceil {
        return Err(CertificateError::Arithmetic { what: "color count below the bound" });
    }
    Ok(Certificate {
        schema_version: SCHEMA_VERSION,
        n,
        colors_used,
        part_counts,
        edge_sum,
        hit_sum,
        hit_capacity,
        bound,
        bound_ceil,
        normalization_swaps: swaps,
    })
}
