//! The seven-edge gadget and its placement universe.
//!
//! A gadget occupies six slots: two triangles `{g1,g2,g3}` and `{g4,g5,g6}`
//! joined by the middle edge `g3-g4`. One color from the first pool covers
//! the perfect matching `g1g2, g3g4, g5g6`; one second-pool color covers
//! the 2-path `g1g3, g2g3` and another the 2-path `g4g5, g4g6`. The other
//! eight slot pairs are non-edges and must fall in the universe's sharable
//! edge set, so packed gadgets never block them.
//!
//! A `PhaseAUniverse` fixes which edges are sharable (never colored during
//! packing), the two color pools, and which vertex-color pairs have been
//! removed from the second pool's budget. Validity of a placement is five
//! independently checkable conditions; `validate` reports the first one
//! that fails.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{ColorId, Edge, Vertex};

/// Slot pairs carrying the matching color, in order.
pub const C1_SLOT_EDGES: [(usize, usize); 3] = [(0, 1), (2, 3), (4, 5)];

/// Slot pairs carrying the first 2-path color.
pub const C2_SLOT_EDGES: [(usize, usize); 2] = [(0, 2), (1, 2)];

/// Slot pairs carrying the second 2-path color.
pub const C2P_SLOT_EDGES: [(usize, usize); 2] = [(3, 4), (3, 5)];

/// All seven colored slot pairs.
pub const SLOT_EDGES: [(usize, usize); 7] =
    [(0, 1), (2, 3), (4, 5), (0, 2), (1, 2), (3, 4), (3, 5)];

/// The eight slot pairs that are not gadget edges.
pub const SLOT_NONEDGES: [(usize, usize); 8] =
    [(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 4), (2, 5)];

/// Automorphism orbit of the non-edge slot pairs along which two packed
/// gadgets may share a vertex pair; the other four non-edge pairs form the
/// complementary orbit.
pub const SHARABLE_SLOT_PAIRS: [(usize, usize); 4] = [(0, 3), (1, 3), (2, 4), (2, 5)];

/// The eight slot permutations fixing the gadget shape. `new_slots[i] =
/// old_slots[perm[i]]`; entries with `true` also exchange the two 2-path
/// colors.
const AUTOMORPHISMS: [([usize; 6], bool); 8] = [
    ([0, 1, 2, 3, 4, 5], false),
    ([1, 0, 2, 3, 4, 5], false),
    ([0, 1, 2, 3, 5, 4], false),
    ([1, 0, 2, 3, 5, 4], false),
    ([5, 4, 3, 2, 1, 0], true),
    ([4, 5, 3, 2, 1, 0], true),
    ([5, 4, 3, 2, 0, 1], true),
    ([4, 5, 3, 2, 0, 1], true),
];

fn is_slot_edge(s: usize, t: usize) -> bool {
    SLOT_EDGES.contains(&(s.min(t), s.max(t)))
}

/// A gadget embedded in `K_n`: six slot vertices plus its three colors.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct ColoredGadget {
    slots: [Vertex; 6],
    c1: ColorId,
    c2: ColorId,
    c2p: ColorId,
}

impl ColoredGadget {
    pub fn new(slots: [Vertex; 6], c1: ColorId, c2: ColorId, c2p: ColorId) -> Self {
        ColoredGadget { slots, c1, c2, c2p }
    }

    pub fn slots(&self) -> [Vertex; 6] {
        self.slots
    }

    pub fn c1(&self) -> ColorId {
        self.c1
    }

    pub fn c2(&self) -> ColorId {
        self.c2
    }

    pub fn c2p(&self) -> ColorId {
        self.c2p
    }

    /// The seven colored edges of this placement.
    pub fn edges(&self) -> [(Edge, ColorId); 7] {
        let e = |(a, b): (usize, usize)| Edge::new(self.slots[a], self.slots[b]);
        [
            (e(C1_SLOT_EDGES[0]), self.c1),
            (e(C1_SLOT_EDGES[1]), self.c1),
            (e(C1_SLOT_EDGES[2]), self.c1),
            (e(C2_SLOT_EDGES[0]), self.c2),
            (e(C2_SLOT_EDGES[1]), self.c2),
            (e(C2P_SLOT_EDGES[0]), self.c2p),
            (e(C2P_SLOT_EDGES[1]), self.c2p),
        ]
    }

    /// The eight vertex pairs of the placement that carry no color.
    pub fn nonedges(&self) -> [Edge; 8] {
        let mut out = [Edge::new(0, 1); 8];
        for (k, &(a, b)) in SLOT_NONEDGES.iter().enumerate() {
            out[k] = Edge::new(self.slots[a], self.slots[b]);
        }
        out
    }

    /// The twelve vertex-color pairs consumed by this placement: every
    /// slot with the matching color, and each triangle's slots with its
    /// own 2-path color.
    pub fn hit_pairs(&self) -> [(Vertex, ColorId); 12] {
        let s = &self.slots;
        [
            (s[0], self.c1),
            (s[1], self.c1),
            (s[2], self.c1),
            (s[3], self.c1),
            (s[4], self.c1),
            (s[5], self.c1),
            (s[0], self.c2),
            (s[1], self.c2),
            (s[2], self.c2),
            (s[3], self.c2p),
            (s[4], self.c2p),
            (s[5], self.c2p),
        ]
    }

    /// The eight relabelings of this placement that keep its colored edge
    /// set intact.
    pub fn variants(&self) -> [ColoredGadget; 8] {
        AUTOMORPHISMS.map(|(perm, swap)| {
            let slots = perm.map(|i| self.slots[i]);
            let (c2, c2p) = if swap { (self.c2p, self.c2) } else { (self.c2, self.c2p) };
            ColoredGadget { slots, c1: self.c1, c2, c2p }
        })
    }

    /// The lexicographically least variant; two placements describe the
    /// same colored structure exactly when their canonical forms agree.
    pub fn canonical(&self) -> ColoredGadget {
        self.variants().into_iter().min().expect("eight variants")
    }

    /// True if `e` is one of the seven colored edges.
    pub fn uses_edge(&self, e: Edge) -> bool {
        self.edges().iter().any(|(f, _)| *f == e)
    }
}

/// Errors from placement validation and universe construction.
#[derive(Debug, Error, PartialEq)]
pub enum GadgetError {
    #[error("slots {slots:?} are not six distinct vertices")]
    SlotsNotDistinct { slots: [Vertex; 6] },
    #[error("slot vertex {v} out of range for n = {n}")]
    SlotOutOfRange { v: Vertex, n: u32 },
    #[error("color {color:?} is not in the {pool} pool")]
    ColorPool { color: ColorId, pool: &'static str },
    #[error("gadget edge {edge:?} is not a kept edge")]
    EdgeNotKept { edge: Edge },
    #[error("gadget non-edge {edge:?} is not sharable")]
    EdgeNotSharable { edge: Edge },
    #[error("required pair ({v}, {color:?}) has been removed")]
    PairMissing { v: Vertex, color: ColorId },
    #[error("far-side pair ({v}, {color:?}) is still available")]
    PairNotRemoved { v: Vertex, color: ColorId },
    #[error("universe needs n >= 6, got {n}")]
    UniverseTooSmall { n: u32 },
    #[error("universe edge {edge:?} out of range for n = {n}")]
    UniverseEdgeRange { edge: Edge, n: u32 },
    #[error("universe color pools must be disjoint and nonempty")]
    UniversePools,
    #[error("removed pair ({v}, {color:?}) does not reference a second-pool color")]
    UniverseRemovedPair { v: Vertex, color: ColorId },
}

/// Edge and color budget for the packing phase.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseAUniverse {
    n: u32,
    p: f64,
    sharable: BTreeSet<Edge>,
    c_a1: Vec<ColorId>,
    c_a2: Vec<ColorId>,
    removed: BTreeSet<(Vertex, ColorId)>,
    #[serde(skip)]
    kept_cache: Vec<Edge>,
}

impl PhaseAUniverse {
    /// Assembles a universe from explicit parts.
    ///
    /// # Errors
    ///
    /// Errors if `n < 6`, an edge or pair is out of range, the pools
    /// overlap or are empty, or a removed pair names a first-pool color.
    pub fn from_parts(
        n: u32,
        p: f64,
        sharable: BTreeSet<Edge>,
        c_a1: Vec<ColorId>,
        c_a2: Vec<ColorId>,
        removed: BTreeSet<(Vertex, ColorId)>,
    ) -> Result<Self, GadgetError> {
        if n < 6 {
            return Err(GadgetError::UniverseTooSmall { n });
        }
        for &e in &sharable {
            if e.hi() >= n {
                return Err(GadgetError::UniverseEdgeRange { edge: e, n });
            }
        }
        if c_a1.is_empty() || c_a2.is_empty() || c_a1.iter().any(|c| c_a2.contains(c)) {
            return Err(GadgetError::UniversePools);
        }
        for &(v, c) in &removed {
            if v >= n || !c_a2.contains(&c) {
                return Err(GadgetError::UniverseRemovedPair { v, color: c });
            }
        }
        let mut c_a1 = c_a1;
        let mut c_a2 = c_a2;
        c_a1.sort_unstable();
        c_a2.sort_unstable();
        let mut u = PhaseAUniverse { n, p, sharable, c_a1, c_a2, removed, kept_cache: Vec::new() };
        u.rebuild_cache();
        Ok(u)
    }

    /// Samples a universe: each edge becomes sharable with probability
    /// `p`, pools sized `round((1-p) * 3n/7)` and `round(3n/7)` get fresh
    /// color ids, and each vertex loses each second-pool color with
    /// probability `p`. Draw order is fixed (edges in lexicographic order,
    /// then pairs by vertex and color), so equal seeds give equal
    /// universes.
    pub fn random<R: Rng>(n: u32, p: f64, rng: &mut R) -> Self {
        assert!(n >= 6, "universe needs n >= 6, got {n}");
        assert!((0.0..1.0).contains(&p), "removal probability {p} outside [0,1)");
        let mut sharable = BTreeSet::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen::<f64>() < p {
                    sharable.insert(Edge::new(u, v));
                }
            }
        }
        let k1 = ((1.0 - p) * 3.0 / 7.0 * n as f64).round().max(1.0) as u32;
        let k2 = (3.0 / 7.0 * n as f64).round().max(1.0) as u32;
        let c_a1: Vec<ColorId> = (0..k1).map(ColorId).collect();
        let c_a2: Vec<ColorId> = (k1..k1 + k2).map(ColorId).collect();
        let mut removed = BTreeSet::new();
        for v in 0..n {
            for &c in &c_a2 {
                if rng.gen::<f64>() < p {
                    removed.insert((v, c));
                }
            }
        }
        let mut u = PhaseAUniverse { n, p, sharable, c_a1, c_a2, removed, kept_cache: Vec::new() };
        u.rebuild_cache();
        u
    }

    fn rebuild_cache(&mut self) {
        self.kept_cache.clear();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                let e = Edge::new(u, v);
                if !self.sharable.contains(&e) {
                    self.kept_cache.push(e);
                }
            }
        }
    }

    /// Restores the derived kept-edge cache after deserialization.
    pub fn refresh(&mut self) {
        self.rebuild_cache();
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn c_a1(&self) -> &[ColorId] {
        &self.c_a1
    }

    pub fn c_a2(&self) -> &[ColorId] {
        &self.c_a2
    }

    /// Kept edges (the complement of the sharable set), sorted.
    pub fn kept_edges(&self) -> &[Edge] {
        &self.kept_cache
    }

    pub fn sharable_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.sharable.iter().copied()
    }

    pub fn removed_pairs(&self) -> impl Iterator<Item = (Vertex, ColorId)> + '_ {
        self.removed.iter().copied()
    }

    pub fn is_sharable(&self, e: Edge) -> bool {
        self.sharable.contains(&e)
    }

    pub fn is_kept(&self, e: Edge) -> bool {
        e.hi() < self.n && !self.sharable.contains(&e)
    }

    /// Whether the vertex-color pair is still available. First-pool pairs
    /// are never removed.
    pub fn pair_present(&self, v: Vertex, c: ColorId) -> bool {
        !self.removed.contains(&(v, c))
    }

    pub fn in_c_a1(&self, c: ColorId) -> bool {
        self.c_a1.binary_search(&c).is_ok()
    }

    pub fn in_c_a2(&self, c: ColorId) -> bool {
        self.c_a2.binary_search(&c).is_ok()
    }

    /// Test and fuzz hook: moves an edge between the kept and sharable
    /// sets.
    pub fn set_sharable(&mut self, e: Edge, sharable: bool) {
        if sharable {
            self.sharable.insert(e);
        } else {
            self.sharable.remove(&e);
        }
        self.rebuild_cache();
    }

    /// Test and fuzz hook: adds or restores a vertex-color pair.
    pub fn set_pair_removed(&mut self, v: Vertex, c: ColorId, removed: bool) {
        if removed {
            self.removed.insert((v, c));
        } else {
            self.removed.remove(&(v, c));
        }
    }
}

/// Checks the five placement conditions, reporting the first failure:
/// distinct in-range slots, colors drawn from the right pools, the seven
/// edges kept, the eight non-edges sharable, the six own-side pairs
/// present, and the six far-side pairs removed.
///
/// # Errors
///
/// Returns the violated condition; `Ok(())` means the placement is valid.
pub fn validate(g: &ColoredGadget, u: &PhaseAUniverse) -> Result<(), GadgetError> {
    let slots = g.slots();
    for &v in &slots {
        if v >= u.n() {
            return Err(GadgetError::SlotOutOfRange { v, n: u.n() });
        }
    }
    let mut sorted = slots;
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(GadgetError::SlotsNotDistinct { slots });
    }
    if !u.in_c_a1(g.c1()) {
        return Err(GadgetError::ColorPool { color: g.c1(), pool: "matching" });
    }
    for c in [g.c2(), g.c2p()] {
        if !u.in_c_a2(c) {
            return Err(GadgetError::ColorPool { color: c, pool: "2-path" });
        }
    }
    for (e, _) in g.edges() {
        if !u.is_kept(e) {
            return Err(GadgetError::EdgeNotKept { edge: e });
        }
    }
    for e in g.nonedges() {
        if !u.is_sharable(e) {
            return Err(GadgetError::EdgeNotSharable { edge: e });
        }
    }
    for i in 0..3 {
        if !u.pair_present(slots[i], g.c2()) {
            return Err(GadgetError::PairMissing { v: slots[i], color: g.c2() });
        }
        if !u.pair_present(slots[i + 3], g.c2p()) {
            return Err(GadgetError::PairMissing { v: slots[i + 3], color: g.c2p() });
        }
    }
    for i in 0..3 {
        if u.pair_present(slots[i], g.c2p()) {
            return Err(GadgetError::PairNotRemoved { v: slots[i], color: g.c2p() });
        }
        if u.pair_present(slots[i + 3], g.c2()) {
            return Err(GadgetError::PairNotRemoved { v: slots[i + 3], color: g.c2() });
        }
    }
    Ok(())
}

/// Boolean form of [`validate`].
pub fn is_valid(g: &ColoredGadget, u: &PhaseAUniverse) -> bool {
    validate(g, u).is_ok()
}

/// An enumeration or sampling constraint: the result must contain this
/// edge among its colored edges, or consume this vertex-color pair.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Anchor {
    Edge(Edge),
    Pair(Vertex, ColorId),
}

impl Anchor {
    fn admits(&self, g: &ColoredGadget) -> bool {
        match *self {
            Anchor::Edge(e) => g.uses_edge(e),
            Anchor::Pair(v, c) => g.hit_pairs().contains(&(v, c)),
        }
    }
}

/// Second-pool colors that can play the near-side role on `near` with far
/// side `far`.
fn eligible_inner(u: &PhaseAUniverse, near: [Vertex; 3], far: [Vertex; 3]) -> Vec<ColorId> {
    u.c_a2()
        .iter()
        .copied()
        .filter(|&c| {
            near.iter().all(|&v| u.pair_present(v, c)) && far.iter().all(|&v| !u.pair_present(v, c))
        })
        .collect()
}

/// Lists every valid placement in canonical form, sorted and deduplicated,
/// optionally restricted to those containing `anchor`.
pub fn enumerate_gadgets(u: &PhaseAUniverse, anchor: Option<&Anchor>) -> Vec<ColoredGadget> {
    let n = u.n();
    let mut set: BTreeSet<ColoredGadget> = BTreeSet::new();
    for &mid in u.kept_edges() {
        for (g3, g4) in [(mid.lo(), mid.hi()), (mid.hi(), mid.lo())] {
            let a_cands: Vec<Vertex> = (0..n)
                .filter(|&x| {
                    x != g3 && x != g4 && u.is_kept(Edge::new(x, g3)) && u.is_sharable(Edge::new(x, g4))
                })
                .collect();
            if a_cands.len() < 2 {
                continue;
            }
            let b_cands: Vec<Vertex> = (0..n)
                .filter(|&y| {
                    y != g3 && y != g4 && u.is_kept(Edge::new(y, g4)) && u.is_sharable(Edge::new(y, g3))
                })
                .collect();
            if b_cands.len() < 2 {
                continue;
            }
            for i in 0..a_cands.len() {
                for j in (i + 1)..a_cands.len() {
                    let (g1, g2) = (a_cands[i], a_cands[j]);
                    if !u.is_kept(Edge::new(g1, g2)) {
                        continue;
                    }
                    for k in 0..b_cands.len() {
                        for l in (k + 1)..b_cands.len() {
                            let (g5, g6) = (b_cands[k], b_cands[l]);
                            if g5 == g1 || g5 == g2 || g6 == g1 || g6 == g2 {
                                continue;
                            }
                            if !u.is_kept(Edge::new(g5, g6)) {
                                continue;
                            }
                            if ![(g1, g5), (g1, g6), (g2, g5), (g2, g6)]
                                .iter()
                                .all(|&(a, b)| u.is_sharable(Edge::new(a, b)))
                            {
                                continue;
                            }
                            let slots = [g1, g2, g3, g4, g5, g6];
                            let near = [g1, g2, g3];
                            let far = [g4, g5, g6];
                            let inner = eligible_inner(u, near, far);
                            let inner_far = eligible_inner(u, far, near);
                            for &c1 in u.c_a1() {
                                for &c2 in &inner {
                                    for &c2p in &inner_far {
                                        let g = ColoredGadget::new(slots, c1, c2, c2p);
                                        debug_assert!(validate(&g, u).is_ok());
                                        set.insert(g.canonical());
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    set.into_iter()
        .filter(|g| anchor.is_none_or(|a| a.admits(g)))
        .collect()
}

/// Fixed slot fill order: triangle centers first, then the wings they
/// constrain.
const FILL_ORDER: [usize; 6] = [2, 3, 0, 1, 4, 5];

fn complete_placement<R: Rng>(
    u: &PhaseAUniverse,
    rng: &mut R,
    mut slots: [Option<Vertex>; 6],
    c1_forced: Option<ColorId>,
    c2_forced: Option<ColorId>,
    c2p_forced: Option<ColorId>,
) -> Option<ColoredGadget> {
    // Resolve the two inner colors first: a random color pair is eligible
    // for a finished slot tuple far too rarely, so the slot fill below
    // conditions on the colors instead. Seeded slots narrow the draw.
    let filled = |range: std::ops::Range<usize>| {
        let slots = &slots;
        range.filter_map(move |i| slots[i])
    };
    let fits = |c: ColorId, near: std::ops::Range<usize>, far: std::ops::Range<usize>| {
        filled(near).all(|v| u.pair_present(v, c)) && filled(far).all(|v| !u.pair_present(v, c))
    };
    let c2 = match c2_forced {
        Some(c) => c,
        None => *u
            .c_a2()
            .iter()
            .copied()
            .filter(|&c| Some(c) != c2p_forced && fits(c, 0..3, 3..6))
            .collect::<Vec<ColorId>>()
            .choose(rng)?,
    };
    let c2p = match c2p_forced {
        Some(c) if c != c2 => c,
        Some(_) => return None,
        None => *u
            .c_a2()
            .iter()
            .copied()
            .filter(|&c| c != c2 && fits(c, 3..6, 0..3))
            .collect::<Vec<ColorId>>()
            .choose(rng)?,
    };
    for &s in &FILL_ORDER {
        if slots[s].is_some() {
            continue;
        }
        let (own, other) = if s < 3 { (c2, c2p) } else { (c2p, c2) };
        let cands: Vec<Vertex> = (0..u.n())
            .filter(|&v| {
                if !u.pair_present(v, own) || u.pair_present(v, other) {
                    return false;
                }
                if slots.iter().flatten().any(|&w| w == v) {
                    return false;
                }
                (0..6).all(|t| match slots[t] {
                    Some(w) if t != s => {
                        let e = Edge::new(v, w);
                        if is_slot_edge(s, t) {
                            u.is_kept(e)
                        } else {
                            u.is_sharable(e)
                        }
                    }
                    _ => true,
                })
            })
            .collect();
        slots[s] = Some(*cands.choose(rng)?);
    }
    let slots = slots.map(|s| s.expect("all slots filled"));
    let c1 = match c1_forced {
        Some(c) => c,
        None => *u.c_a1().choose(rng)?,
    };
    let g = ColoredGadget::new(slots, c1, c2, c2p);
    validate(&g, u).ok()?;
    Some(g)
}

/// Greedy passes per [`sample_gadget`] call. A single pass commits to
/// colors and early slots blindly and often strands a later slot, so one
/// proposal bundles enough passes to make dry calls rare wherever a valid
/// placement exists.
const SAMPLE_PASSES: usize = 64;

/// Proposes one placement. Each pass seeds the anchor, if any, into a
/// uniformly chosen compatible role, draws the two inner colors (narrowed
/// by the seeded slots), fills the remaining slots in dependency order
/// from the candidate sets the universe and colors allow, draws the
/// matching color last, and validity-checks the result. Returns the first
/// pass that lands, or `None` once all passes run dry.
pub fn sample_gadget<R: Rng>(
    u: &PhaseAUniverse,
    rng: &mut R,
    anchor: Option<&Anchor>,
) -> Option<ColoredGadget> {
    (0..SAMPLE_PASSES).find_map(|_| sample_pass(u, rng, anchor))
}

fn sample_pass<R: Rng>(
    u: &PhaseAUniverse,
    rng: &mut R,
    anchor: Option<&Anchor>,
) -> Option<ColoredGadget> {
    let mut slots: [Option<Vertex>; 6] = [None; 6];
    let mut forced = (None, None, None);
    match anchor {
        None => {}
        Some(&Anchor::Edge(e)) => {
            let &(a, b) = SLOT_EDGES.choose(rng).expect("seven slot edges");
            let flip = rng.gen::<bool>();
            let (lo, hi) = if flip { (e.hi(), e.lo()) } else { (e.lo(), e.hi()) };
            slots[a] = Some(lo);
            slots[b] = Some(hi);
        }
        Some(&Anchor::Pair(v, c)) => {
            if u.in_c_a1(c) {
                slots[rng.gen_range(0..6)] = Some(v);
                forced.0 = Some(c);
            } else if u.in_c_a2(c) {
                if rng.gen::<bool>() {
                    slots[rng.gen_range(0..3)] = Some(v);
                    forced.1 = Some(c);
                } else {
                    slots[3 + rng.gen_range(0..3)] = Some(v);
                    forced.2 = Some(c);
                }
            } else {
                return None;
            }
        }
    }
    complete_placement(u, rng, slots, forced.0, forced.1, forced.2)
}
