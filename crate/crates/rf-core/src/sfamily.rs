//! Danger families around uncolored edges, consulted by the list phase.
//!
//! For an uncolored anchor edge `e`, the family `S_{a,b}(e)` collects
//! every `a`-vertex subset through both endpoints of `e` whose colored
//! edges repeat colors exactly `b` times, provided the subset holds a
//! partner: a second uncolored edge disjoint from `e` and on the same
//! side of the sharable-residual split. A subset appears once per usable
//! partner, so entries are `(S, e')` pairs.
//!
//! [`classify_case`] names the repeating pattern inside an entry with one
//! or two repetitions. The taxonomy is closed over colorings produced by
//! gadget packing; a pattern outside it reports an error instead of a
//! guess, which turns a packing bug into a loud test failure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{count_pairs, ColorId, ColoringError, Edge, EdgeColoring, Vertex};
use crate::gadget::PhaseAUniverse;

/// The five `(a, b)` shapes with defined families.
pub const FAMILY_SHAPES: [(usize, usize); 5] = [(4, 0), (4, 1), (5, 0), (5, 1), (5, 2)];

/// Errors from family enumeration and case classification.
#[derive(Debug, Error, PartialEq)]
pub enum SFamilyError {
    #[error("anchor edge {edge:?} is colored")]
    AnchorColored { edge: Edge },
    #[error("no family is defined for size {a} with {b} repetitions")]
    UnsupportedFamily { a: usize, b: usize },
    #[error("edge {edge:?} belongs to neither class")]
    UnclassedEdge { edge: Edge },
    #[error("class split does not fit the coloring: {detail}")]
    ClassMismatch { detail: String },
    #[error("coloring is over K_{coloring_n} but the universe is over K_{universe_n}")]
    SizeMismatch { coloring_n: u32, universe_n: u32 },
    #[error("entry does not describe the coloring: {detail}")]
    InvalidEntry { detail: &'static str },
    #[error("colored pattern matches no listed case: {detail}")]
    UnmatchedPattern { detail: &'static str },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

/// Which side of the uncolored split an edge sits on.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum EdgeClass {
    /// Left open for sharing between placements during packing.
    Sharable,
    /// Kept edge the packing never reached.
    Residual,
}

/// The two-way split of the uncolored edges. Anchors pair only with
/// partners from their own side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UncoloredClasses {
    sharable: BTreeSet<Edge>,
    residual: BTreeSet<Edge>,
}

impl UncoloredClasses {
    /// Builds a split from explicit sets, which must not overlap.
    pub fn new(sharable: BTreeSet<Edge>, residual: BTreeSet<Edge>) -> Result<Self, SFamilyError> {
        if let Some(e) = sharable.intersection(&residual).next() {
            return Err(SFamilyError::ClassMismatch {
                detail: format!("edge {e:?} sits in both classes"),
            });
        }
        Ok(UncoloredClasses { sharable, residual })
    }

    /// Puts every uncolored edge of `coloring` on the sharable side.
    /// Convenient for synthetic colorings with no packing history.
    pub fn single_class(coloring: &EdgeColoring) -> Self {
        UncoloredClasses {
            sharable: coloring.uncolored_edges().collect(),
            residual: BTreeSet::new(),
        }
    }

    /// Splits the uncolored edges of a packed coloring: the universe's
    /// sharable edges on one side, untouched kept edges on the other.
    pub fn from_universe(
        coloring: &EdgeColoring,
        universe: &PhaseAUniverse,
    ) -> Result<Self, SFamilyError> {
        if coloring.n() != universe.n() {
            return Err(SFamilyError::SizeMismatch {
                coloring_n: coloring.n(),
                universe_n: universe.n(),
            });
        }
        let mut sharable = BTreeSet::new();
        for e in universe.sharable_edges() {
            if coloring.is_colored(e) {
                return Err(SFamilyError::ClassMismatch {
                    detail: format!("sharable edge {e:?} is colored"),
                });
            }
            sharable.insert(e);
        }
        let residual = coloring.uncolored_edges().filter(|e| !sharable.contains(e)).collect();
        Ok(UncoloredClasses { sharable, residual })
    }

    pub fn sharable(&self) -> &BTreeSet<Edge> {
        &self.sharable
    }

    pub fn residual(&self) -> &BTreeSet<Edge> {
        &self.residual
    }

    /// The class of `e`, or `None` when it sits in neither set.
    pub fn class_of(&self, e: Edge) -> Option<EdgeClass> {
        if self.sharable.contains(&e) {
            Some(EdgeClass::Sharable)
        } else if self.residual.contains(&e) {
            Some(EdgeClass::Residual)
        } else {
            None
        }
    }

    /// Checks that every classed edge fits inside the coloring and is
    /// actually uncolored.
    pub fn validate_against(&self, coloring: &EdgeColoring) -> Result<(), SFamilyError> {
        for &e in self.sharable.iter().chain(self.residual.iter()) {
            if e.hi() >= coloring.n() {
                return Err(SFamilyError::ClassMismatch {
                    detail: format!("edge {e:?} is outside K_{}", coloring.n()),
                });
            }
            if coloring.is_colored(e) {
                return Err(SFamilyError::ClassMismatch {
                    detail: format!("classed edge {e:?} is colored"),
                });
            }
        }
        Ok(())
    }
}

/// One `(S, e')` member of a family: the subset, the anchor it was
/// enumerated for, the partner, and the subset's repetition count. The
/// derived order sorts by subset, then anchor, then partner.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SFamilyEntry {
    pub subset: Vec<Vertex>,
    pub anchor: Edge,
    pub partner: Edge,
    pub repetitions: usize,
}

/// Lists `S_{a,b}(e)` as sorted `(S, e')` entries.
///
/// The anchor must be uncolored and classed, and `(a, b)` must be one of
/// [`FAMILY_SHAPES`].
pub fn enumerate_s(
    coloring: &EdgeColoring,
    classes: &UncoloredClasses,
    e: Edge,
    a: usize,
    b: usize,
) -> Result<Vec<SFamilyEntry>, SFamilyError> {
    if !FAMILY_SHAPES.contains(&(a, b)) {
        return Err(SFamilyError::UnsupportedFamily { a, b });
    }
    if coloring.is_colored(e) {
        return Err(SFamilyError::AnchorColored { edge: e });
    }
    let anchor_class = classes.class_of(e).ok_or(SFamilyError::UnclassedEdge { edge: e })?;

    let pool: Vec<Vertex> = (0..coloring.n()).filter(|&w| !e.touches(w)).collect();
    let mut out = Vec::new();
    let mut subset: Vec<Vertex> = Vec::with_capacity(a);
    let mut visit = |extra: &[Vertex]| {
        subset.clear();
        subset.extend_from_slice(extra);
        subset.push(e.lo());
        subset.push(e.hi());
        subset.sort_unstable();
        let (colored, distinct) = count_pairs(coloring, &subset);
        if colored - distinct != b {
            return;
        }
        for i in 0..extra.len() {
            for j in (i + 1)..extra.len() {
                let f = Edge::new(extra[i], extra[j]);
                if coloring.is_colored(f) || classes.class_of(f) != Some(anchor_class) {
                    continue;
                }
                out.push(SFamilyEntry {
                    subset: subset.clone(),
                    anchor: e,
                    partner: f,
                    repetitions: b,
                });
            }
        }
    };
    match a {
        4 => {
            for i in 0..pool.len() {
                for j in (i + 1)..pool.len() {
                    visit(&[pool[i], pool[j]]);
                }
            }
        }
        5 => {
            for i in 0..pool.len() {
                for j in (i + 1)..pool.len() {
                    for k in (j + 1)..pool.len() {
                        visit(&[pool[i], pool[j], pool[k]]);
                    }
                }
            }
        }
        _ => unreachable!("guarded by FAMILY_SHAPES"),
    }
    out.sort_unstable();
    Ok(out)
}

/// Size of one family, counted both ways: distinct subsets, and
/// `(S, e')` entries. A subset with several partners counts once as a
/// set and once per partner as an entry.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCount {
    pub sets: usize,
    pub entries: usize,
}

/// The five family sizes at one anchor.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountMatrix {
    pub quad_zero: FamilyCount,
    pub quad_one: FamilyCount,
    pub quint_zero: FamilyCount,
    pub quint_one: FamilyCount,
    pub quint_two: FamilyCount,
}

impl CountMatrix {
    /// The cell for shape `(a, b)`, when it is one of the five.
    pub fn get(&self, a: usize, b: usize) -> Option<FamilyCount> {
        match (a, b) {
            (4, 0) => Some(self.quad_zero),
            (4, 1) => Some(self.quad_one),
            (5, 0) => Some(self.quint_zero),
            (5, 1) => Some(self.quint_one),
            (5, 2) => Some(self.quint_two),
            _ => None,
        }
    }
}

/// Counts all five families at one anchor.
pub fn count_matrix(
    coloring: &EdgeColoring,
    classes: &UncoloredClasses,
    e: Edge,
) -> Result<CountMatrix, SFamilyError> {
    let mut cells = [FamilyCount { sets: 0, entries: 0 }; 5];
    for (slot, &(a, b)) in FAMILY_SHAPES.iter().enumerate() {
        let entries = enumerate_s(coloring, classes, e, a, b)?;
        let sets: BTreeSet<&Vec<Vertex>> = entries.iter().map(|en| &en.subset).collect();
        cells[slot] = FamilyCount { sets: sets.len(), entries: entries.len() };
    }
    Ok(CountMatrix {
        quad_zero: cells[0],
        quad_one: cells[1],
        quint_zero: cells[2],
        quint_one: cells[3],
        quint_two: cells[4],
    })
}

/// The repeating pattern inside an entry, up to swapping colors and
/// relabeling vertices.
///
/// A triangle here is a monochromatic 2-path closed by a chord of some
/// other color; its center is the 2-path's middle vertex and its tips
/// are the chord's endpoints. When a triangle meets the anchor, the far
/// endpoint is the anchor vertex outside it, and the spare vertex is the
/// one left over.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CaseShape {
    /// Four vertices, one color on two disjoint edges.
    QuadSplitPair,
    /// Five vertices, a triangle through exactly one anchor endpoint.
    AnchoredTriangle,
    /// One color on two disjoint edges, one through each anchor endpoint.
    SplitPairBothEnds,
    /// One color on two disjoint edges, only one touching the anchor.
    SplitPairOneEnd,
    /// One color three times: a triangle 2-path plus a disjoint edge.
    TripledColor,
    /// Two triangles sharing one vertex, each through an anchor endpoint.
    TwinTriangles,
    /// A triangle whose chord color returns on the spare-far edge.
    ChordEchoSpareFar,
    /// A triangle whose chord color returns on the center-spare edge.
    ChordEchoCenterSpare,
    /// A triangle whose chord color returns on the center-far edge.
    ChordEchoCenterFar,
    /// A triangle plus a split pair touching both anchor endpoints.
    TriangleSplitBothEnds,
    /// A triangle plus a split pair joining the far endpoint to the
    /// center.
    TriangleSplitFarCenter,
    /// A triangle plus a split pair joining the far endpoint to a tip.
    TriangleSplitFarTip,
    /// Two colors alternating along a 4-path that does not end on both
    /// anchor endpoints.
    AlternatingPathInterior,
    /// Two colors alternating along a 4-path whose ends are exactly the
    /// anchor endpoints.
    AlternatingPathSpanning,
}

impl CaseShape {
    /// Every shape, in declaration order.
    pub const ALL: [CaseShape; 14] = [
        CaseShape::QuadSplitPair,
        CaseShape::AnchoredTriangle,
        CaseShape::SplitPairBothEnds,
        CaseShape::SplitPairOneEnd,
        CaseShape::TripledColor,
        CaseShape::TwinTriangles,
        CaseShape::ChordEchoSpareFar,
        CaseShape::ChordEchoCenterSpare,
        CaseShape::ChordEchoCenterFar,
        CaseShape::TriangleSplitBothEnds,
        CaseShape::TriangleSplitFarCenter,
        CaseShape::TriangleSplitFarTip,
        CaseShape::AlternatingPathInterior,
        CaseShape::AlternatingPathSpanning,
    ];

    /// Stable tag used in dump lines.
    pub fn label(self) -> &'static str {
        match self {
            CaseShape::QuadSplitPair => "quad-split-pair",
            CaseShape::AnchoredTriangle => "anchored-triangle",
            CaseShape::SplitPairBothEnds => "split-pair-both-ends",
            CaseShape::SplitPairOneEnd => "split-pair-one-end",
            CaseShape::TripledColor => "tripled-color",
            CaseShape::TwinTriangles => "twin-triangles",
            CaseShape::ChordEchoSpareFar => "chord-echo-spare-far",
            CaseShape::ChordEchoCenterSpare => "chord-echo-center-spare",
            CaseShape::ChordEchoCenterFar => "chord-echo-center-far",
            CaseShape::TriangleSplitBothEnds => "triangle-split-both-ends",
            CaseShape::TriangleSplitFarCenter => "triangle-split-far-center",
            CaseShape::TriangleSplitFarTip => "triangle-split-far-tip",
            CaseShape::AlternatingPathInterior => "alternating-path-interior",
            CaseShape::AlternatingPathSpanning => "alternating-path-spanning",
        }
    }
}

/// A monochromatic 2-path closed by a colored chord.
struct Triangle {
    center: Vertex,
    tips: [Vertex; 2],
    chord: Edge,
}

impl Triangle {
    fn contains(&self, w: Vertex) -> bool {
        w == self.center || self.tips.contains(&w)
    }
}

fn shared_vertex(p: Edge, q: Edge) -> Option<Vertex> {
    q.endpoints().into_iter().find(|&w| p.touches(w))
}

/// Resolves a monochromatic adjacent pair into a triangle, requiring its
/// chord to carry some color.
fn triangle_from_pair(
    coloring: &EdgeColoring,
    p: Edge,
    q: Edge,
) -> Result<Triangle, SFamilyError> {
    let center = shared_vertex(p, q).expect("caller checked adjacency");
    let tips = [
        p.other(center).expect("center lies on p"),
        q.other(center).expect("center lies on q"),
    ];
    let chord = Edge::new(tips[0], tips[1]);
    if !coloring.is_colored(chord) {
        return Err(SFamilyError::UnmatchedPattern {
            detail: "monochromatic 2-path with an uncolored chord",
        });
    }
    Ok(Triangle { center, tips, chord })
}

/// Requires the triangle to contain exactly one anchor endpoint and
/// returns the other, far endpoint.
fn far_endpoint(t: &Triangle, u: Vertex, v: Vertex) -> Result<Vertex, SFamilyError> {
    match (t.contains(u), t.contains(v)) {
        (true, false) => Ok(v),
        (false, true) => Ok(u),
        (false, false) => {
            Err(SFamilyError::UnmatchedPattern { detail: "triangle avoids the anchor" })
        }
        (true, true) => {
            Err(SFamilyError::UnmatchedPattern { detail: "triangle swallows the anchor" })
        }
    }
}

fn classify_tripled(
    coloring: &EdgeColoring,
    u: Vertex,
    v: Vertex,
    group: &[Edge],
) -> Result<Option<CaseShape>, SFamilyError> {
    let adjacent: Vec<(usize, usize)> = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .filter(|&(i, j)| group[i].shares_vertex(&group[j]))
        .collect();
    if adjacent.len() != 1 {
        return Err(SFamilyError::UnmatchedPattern {
            detail: "three same-colored edges out of shape",
        });
    }
    let (i, j) = adjacent[0];
    let t = triangle_from_pair(coloring, group[i], group[j])?;
    far_endpoint(&t, u, v)?;
    Ok(Some(CaseShape::TripledColor))
}

fn classify_triangle_split(
    coloring: &EdgeColoring,
    u: Vertex,
    v: Vertex,
    path: &[Edge],
    split: &[Edge],
) -> Result<Option<CaseShape>, SFamilyError> {
    let t = triangle_from_pair(coloring, path[0], path[1])?;
    let far = far_endpoint(&t, u, v)?;

    if split.contains(&t.chord) {
        // The chord's color returns on the second split edge.
        let q = if split[0] == t.chord { split[1] } else { split[0] };
        return match (q.touches(t.center), q.touches(far)) {
            (true, true) => Ok(Some(CaseShape::ChordEchoCenterFar)),
            (true, false) => Ok(Some(CaseShape::ChordEchoCenterSpare)),
            (false, true) => Ok(Some(CaseShape::ChordEchoSpareFar)),
            (false, false) => Err(SFamilyError::UnmatchedPattern {
                detail: "chord echo misses the center and the far endpoint",
            }),
        };
    }

    let hits: Vec<Edge> =
        split.iter().copied().filter(|f| f.touches(u) || f.touches(v)).collect();
    match hits.len() {
        2 => Ok(Some(CaseShape::TriangleSplitBothEnds)),
        1 => {
            let f = hits[0];
            if !f.touches(far) {
                return Err(SFamilyError::UnmatchedPattern {
                    detail: "split pair meets the anchor only inside the triangle",
                });
            }
            let w = f.other(far).expect("far lies on f");
            if w == t.center {
                Ok(Some(CaseShape::TriangleSplitFarCenter))
            } else if t.tips.contains(&w) {
                Ok(Some(CaseShape::TriangleSplitFarTip))
            } else {
                Err(SFamilyError::UnmatchedPattern {
                    detail: "split pair joins the far endpoint to the spare vertex",
                })
            }
        }
        _ => Err(SFamilyError::UnmatchedPattern { detail: "split pair avoids the anchor" }),
    }
}

fn classify_alternating(
    u: Vertex,
    v: Vertex,
    g1: &[Edge],
    g2: &[Edge],
) -> Result<Option<CaseShape>, SFamilyError> {
    // Two disjoint pairs give every vertex degree at most two, so the
    // union is a single 4-path or a 4-cycle; two components would need
    // six vertices.
    let mut deg: BTreeMap<Vertex, usize> = BTreeMap::new();
    for f in g1.iter().chain(g2.iter()) {
        *deg.entry(f.lo()).or_insert(0) += 1;
        *deg.entry(f.hi()).or_insert(0) += 1;
    }
    let ends: Vec<Vertex> = deg.iter().filter(|&(_, &d)| d == 1).map(|(&w, _)| w).collect();
    if ends.is_empty() {
        return Err(SFamilyError::UnmatchedPattern {
            detail: "two colors alternating around a 4-cycle",
        });
    }
    debug_assert_eq!(ends.len(), 2);
    if ends == [u, v] {
        Ok(Some(CaseShape::AlternatingPathSpanning))
    } else {
        Ok(Some(CaseShape::AlternatingPathInterior))
    }
}

/// Checks `entry` against `coloring` and names its repeating pattern.
///
/// Zero-repetition entries carry no pattern and come back as `None`.
/// Fields that disagree with the coloring are an [`SFamilyError::InvalidEntry`];
/// a repetition structure outside the taxonomy is an
/// [`SFamilyError::UnmatchedPattern`].
pub fn classify_case(
    coloring: &EdgeColoring,
    entry: &SFamilyEntry,
) -> Result<Option<CaseShape>, SFamilyError> {
    let s = &entry.subset;
    let a = s.len();
    if a != 4 && a != 5 {
        return Err(SFamilyError::InvalidEntry {
            detail: "subset must have four or five vertices",
        });
    }
    if !s.windows(2).all(|w| w[0] < w[1]) {
        return Err(SFamilyError::InvalidEntry {
            detail: "subset must be sorted and duplicate-free",
        });
    }
    if s[a - 1] >= coloring.n() {
        return Err(SFamilyError::InvalidEntry { detail: "subset vertex outside the coloring" });
    }
    let inside = |w: Vertex| s.binary_search(&w).is_ok();
    let (u, v) = (entry.anchor.lo(), entry.anchor.hi());
    if !inside(u) || !inside(v) || !inside(entry.partner.lo()) || !inside(entry.partner.hi()) {
        return Err(SFamilyError::InvalidEntry {
            detail: "anchor and partner must lie inside the subset",
        });
    }
    if entry.anchor.shares_vertex(&entry.partner) {
        return Err(SFamilyError::InvalidEntry { detail: "anchor and partner must be disjoint" });
    }
    if coloring.is_colored(entry.anchor) {
        return Err(SFamilyError::InvalidEntry { detail: "anchor is colored" });
    }
    if coloring.is_colored(entry.partner) {
        return Err(SFamilyError::InvalidEntry { detail: "partner is colored" });
    }
    let (colored, distinct) = count_pairs(coloring, s);
    if colored - distinct != entry.repetitions {
        return Err(SFamilyError::InvalidEntry {
            detail: "stored repetition count disagrees with the coloring",
        });
    }

    let b = entry.repetitions;
    if b == 0 {
        return Ok(None);
    }
    if !FAMILY_SHAPES.contains(&(a, b)) {
        return Err(SFamilyError::UnsupportedFamily { a, b });
    }

    let mut by_color: BTreeMap<ColorId, Vec<Edge>> = BTreeMap::new();
    for i in 0..a {
        for j in (i + 1)..a {
            let f = Edge::new(s[i], s[j]);
            if let Some(c) = coloring.color(f) {
                by_color.entry(c).or_default().push(f);
            }
        }
    }
    let mut repeated: Vec<Vec<Edge>> = by_color.into_values().filter(|g| g.len() >= 2).collect();

    match b {
        1 => {
            // One repetition forces exactly one color pair.
            let pair = repeated.pop().expect("a repetition implies a repeated color");
            debug_assert!(repeated.is_empty() && pair.len() == 2);
            let (p, q) = (pair[0], pair[1]);
            if a == 4 {
                if p.shares_vertex(&q) {
                    return Err(SFamilyError::UnmatchedPattern {
                        detail: "adjacent monochromatic pair inside a four-vertex subset",
                    });
                }
                return Ok(Some(CaseShape::QuadSplitPair));
            }
            if p.shares_vertex(&q) {
                let t = triangle_from_pair(coloring, p, q)?;
                far_endpoint(&t, u, v)?;
                Ok(Some(CaseShape::AnchoredTriangle))
            } else {
                let hits =
                    [p, q].iter().filter(|f| f.touches(u) || f.touches(v)).count();
                match hits {
                    2 => Ok(Some(CaseShape::SplitPairBothEnds)),
                    1 => Ok(Some(CaseShape::SplitPairOneEnd)),
                    _ => Err(SFamilyError::UnmatchedPattern {
                        detail: "split pair avoids the anchor",
                    }),
                }
            }
        }
        2 => {
            // Two repetitions come as one tripled color or two pairs.
            if repeated.len() == 1 {
                return classify_tripled(coloring, u, v, &repeated[0]);
            }
            let g2 = repeated.pop().expect("two repeated colors");
            let g1 = repeated.pop().expect("two repeated colors");
            debug_assert!(repeated.is_empty() && g1.len() == 2 && g2.len() == 2);
            let adj1 = g1[0].shares_vertex(&g1[1]);
            let adj2 = g2[0].shares_vertex(&g2[1]);
            match (adj1, adj2) {
                (true, true) => {
                    let t1 = triangle_from_pair(coloring, g1[0], g1[1])?;
                    let t2 = triangle_from_pair(coloring, g2[0], g2[1])?;
                    let shared = [t1.center, t1.tips[0], t1.tips[1]]
                        .into_iter()
                        .filter(|&w| t2.contains(w))
                        .count();
                    if shared != 1 {
                        return Err(SFamilyError::UnmatchedPattern {
                            detail: "two triangles overlap out of shape",
                        });
                    }
                    far_endpoint(&t1, u, v)?;
                    far_endpoint(&t2, u, v)?;
                    Ok(Some(CaseShape::TwinTriangles))
                }
                (true, false) => classify_triangle_split(coloring, u, v, &g1, &g2),
                (false, true) => classify_triangle_split(coloring, u, v, &g2, &g1),
                (false, false) => classify_alternating(u, v, &g1, &g2),
            }
        }
        _ => unreachable!("guarded by FAMILY_SHAPES"),
    }
}

/// Renders entries one per line: subset size, repetition count, subset
/// vertices, anchor endpoints, partner endpoints, then the case tag (`-`
/// for zero-repetition entries).
pub fn dump_entries(
    coloring: &EdgeColoring,
    entries: &[SFamilyEntry],
) -> Result<String, SFamilyError> {
    let mut out = String::new();
    for en in entries {
        let tag = classify_case(coloring, en)?;
        write!(out, "{} {}", en.subset.len(), en.repetitions).unwrap();
        for w in &en.subset {
            write!(out, " {w}").unwrap();
        }
        let label = tag.map_or("-", CaseShape::label);
        writeln!(
            out,
            " {} {} {} {} {label}",
            en.anchor.lo(),
            en.anchor.hi(),
            en.partner.lo(),
            en.partner.hi()
        )
        .unwrap();
    }
    Ok(out)
}

/// Counts triples `(S1, S2, e')` where `(S1, e')` is an entry of
/// `S_{4,1}(e1)` or `S_{5,2}(e1)` and `(S2, e')` likewise for `e2`, with
/// both naming the same partner. Symmetric in the two anchors.
pub fn overlap_pairs(
    coloring: &EdgeColoring,
    classes: &UncoloredClasses,
    e1: Edge,
    e2: Edge,
) -> Result<usize, SFamilyError> {
    let tally = |e: Edge| -> Result<BTreeMap<Edge, usize>, SFamilyError> {
        let mut counts = BTreeMap::new();
        for (a, b) in [(4, 1), (5, 2)] {
            for en in enumerate_s(coloring, classes, e, a, b)? {
                *counts.entry(en.partner).or_insert(0) += 1;
            }
        }
        Ok(counts)
    };
    let left = tally(e1)?;
    let right = tally(e2)?;
    Ok(left.iter().map(|(f, c)| c * right.get(f).unwrap_or(&0)).sum())
}
