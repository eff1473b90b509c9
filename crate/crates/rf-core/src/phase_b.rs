//! Finishing stage: colors every remaining edge from fresh per-class
//! pools while dodging the small-set conflicts that would push a 4- or
//! 5-vertex set past its repetition allowance.
//!
//! Sharable edges draw from one pool and residual edges from another, so
//! a color never crosses the class split and every new color class is a
//! matching. A tentative color is rejected when some small set around the
//! edge would end up with more repeated colors than its packing-stage
//! count leaves room for: a 4-set carrying a repetition admits no new
//! same-colored pair, a clean 4-set at most one, and a 5-set at most two
//! minus what it already carries. The default search shuffles the edges,
//! places greedily, and restarts on a dead end; an exhaustive
//! backtracking mode is available for small boards.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{count_pairs, ColorId, ColoringError, Edge, EdgeColoring, Vertex};
use crate::sfamily::{EdgeClass, SFamilyError, UncoloredClasses};

/// Errors from the conflict predicates and the finishing search.
#[derive(Debug, Error, PartialEq)]
pub enum PhaseBError {
    #[error("edge {edge:?} is already colored")]
    AlreadyColored { edge: Edge },
    #[error("edge {edge:?} belongs to neither class")]
    UnclassedEdge { edge: Edge },
    #[error("edges {e:?} and {f:?} sit in different classes and cannot share color {color:?}")]
    ClassMismatch { e: Edge, f: Edge, color: ColorId },
    #[error("conflict shape is invalid: {detail}")]
    MalformedConflict { detail: String },
    #[error("pool color {color:?} already appears on the board")]
    PoolCollision { color: ColorId },
    #[error("coloring is over K_{coloring_n} but the configuration says K_{config_n}")]
    SizeMismatch { coloring_n: u32, config_n: u32 },
    #[error("no conflict-free color for {stuck:?} after {restarts} restarts")]
    Exhausted { stuck: Edge, restarts: u32, blocked: Vec<(ColorId, ConflictKind)> },
    #[error(transparent)]
    Family(#[from] SFamilyError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

fn malformed(detail: String) -> PhaseBError {
    PhaseBError::MalformedConflict { detail }
}

/// Default per-edge list budget: `n` shrunk by a slowly growing factor
/// and rounded to the nearest integer. Each class pool holds twice this
/// many fresh colors.
pub fn default_d_b(n: u32) -> usize {
    if n < 2 {
        return 1;
    }
    let nf = f64::from(n);
    (nf * nf.ln().powf(-0.1)).round().max(1.0) as usize
}

/// How the finishing search recovers from dead ends.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    /// Shuffle the edges, place greedily, restart on a dead end.
    RandomGreedyRestart,
    /// Exhaustive search, always branching on a most-constrained edge.
    /// Meant for small boards; runtime is not bounded in general.
    Backtracking,
}

/// Knobs for the finishing stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseBConfig {
    pub n: u32,
    /// Per-edge list budget; each pool carries `2 * d_b` colors.
    pub d_b: usize,
    pub seed: u64,
    /// Extra attempts after the first, for the restart strategy.
    pub max_restarts: u32,
    pub strategy: Strategy,
}

impl PhaseBConfig {
    /// Defaults: the formula budget, fifty restarts, restart strategy.
    pub fn new(n: u32, seed: u64) -> Self {
        PhaseBConfig {
            n,
            d_b: default_d_b(n),
            seed,
            max_restarts: 50,
            strategy: Strategy::RandomGreedyRestart,
        }
    }
}

/// Fresh color pools for the finishing stage. Sharable edges draw from
/// the first pool and residual edges from the second; the pools are
/// disjoint ranges laid out above `base`, so they collide with nothing
/// already on the board.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ListAssignment {
    d_b: usize,
    c_b1: Vec<ColorId>,
    c_b2: Vec<ColorId>,
    stars: (usize, usize),
}

/// Lays both pools out above `base` and records how many edges of each
/// class will draw from them.
pub fn build_lists(
    classes: &UncoloredClasses,
    config: &PhaseBConfig,
    base: ColorId,
) -> ListAssignment {
    let width = 2 * config.d_b as u32;
    let first = base.0;
    ListAssignment {
        d_b: config.d_b,
        c_b1: (first..first + width).map(ColorId).collect(),
        c_b2: (first + width..first + 2 * width).map(ColorId).collect(),
        stars: (classes.sharable().len(), classes.residual().len()),
    }
}

impl ListAssignment {
    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn c_b1(&self) -> &[ColorId] {
        &self.c_b1
    }

    pub fn c_b2(&self) -> &[ColorId] {
        &self.c_b2
    }

    /// The full pool an edge of `class` may draw from.
    pub fn list_for(&self, class: EdgeClass) -> &[ColorId] {
        match class {
            EdgeClass::Sharable => &self.c_b1,
            EdgeClass::Residual => &self.c_b2,
        }
    }

    /// Which pool holds `c`, if either does.
    pub fn pool_of(&self, c: ColorId) -> Option<EdgeClass> {
        if self.c_b1.binary_search(&c).is_ok() {
            Some(EdgeClass::Sharable)
        } else if self.c_b2.binary_search(&c).is_ok() {
            Some(EdgeClass::Residual)
        } else {
            None
        }
    }

    /// Edges per class drawing from each pool.
    pub fn star_counts(&self) -> (usize, usize) {
        self.stars
    }
}

/// Conflict sizes: one shared color, two, or three.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConflictKind {
    Two,
    Four,
    Six,
}

/// A candidate conflict: equal-color pairs of newly colored edges plus
/// the vertex set that witnesses them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DConflict {
    pub kind: ConflictKind,
    pub members: Vec<(Edge, ColorId)>,
    pub witness: Vec<Vertex>,
}

impl DConflict {
    /// Validates the pairing shape: two, four, or six distinct edges
    /// grouped into equal-color pairs with pairwise distinct colors, and
    /// a sorted witness of at most five vertices covering every endpoint.
    pub fn new(members: Vec<(Edge, ColorId)>, witness: Vec<Vertex>) -> Result<Self, PhaseBError> {
        let kind = match members.len() {
            2 => ConflictKind::Two,
            4 => ConflictKind::Four,
            6 => ConflictKind::Six,
            len => return Err(malformed(format!("{len} members"))),
        };
        check_pairing(&members)?;
        if witness.len() > 5 || witness.windows(2).any(|w| w[0] >= w[1]) {
            return Err(malformed(format!("witness {witness:?} is not a small sorted set")));
        }
        for (edge, _) in &members {
            if !witness.contains(&edge.lo()) || !witness.contains(&edge.hi()) {
                return Err(malformed(format!("witness omits an endpoint of {edge:?}")));
            }
        }
        Ok(DConflict { kind, members, witness })
    }
}

/// Checks the equal-color pairing: every color on exactly two members and
/// no edge repeated.
fn check_pairing(members: &[(Edge, ColorId)]) -> Result<(), PhaseBError> {
    let mut per_color: BTreeMap<ColorId, Vec<Edge>> = BTreeMap::new();
    for &(edge, color) in members {
        per_color.entry(color).or_default().push(edge);
    }
    if per_color.len() * 2 != members.len() {
        return Err(malformed(format!(
            "{} colors across {} members",
            per_color.len(),
            members.len()
        )));
    }
    for (color, edges) in &per_color {
        if edges.len() != 2 {
            return Err(malformed(format!("color {color:?} appears {} times", edges.len())));
        }
    }
    let mut edges: Vec<Edge> = members.iter().map(|&(edge, _)| edge).collect();
    edges.sort_unstable();
    edges.dedup();
    if edges.len() != members.len() {
        return Err(malformed("an edge appears twice".to_string()));
    }
    Ok(())
}

/// Checks a member edge is usable and returns its class.
fn member_class(
    edge: Edge,
    coloring: &EdgeColoring,
    classes: &UncoloredClasses,
) -> Result<EdgeClass, PhaseBError> {
    if coloring.is_colored(edge) {
        return Err(PhaseBError::AlreadyColored { edge });
    }
    classes.class_of(edge).ok_or(PhaseBError::UnclassedEdge { edge })
}

fn reps_of(coloring: &EdgeColoring, s: &[Vertex]) -> usize {
    let (colored, distinct) = count_pairs(coloring, s);
    colored - distinct
}

fn sorted4(e: Edge, f: Edge) -> [Vertex; 4] {
    let mut s = [e.lo(), e.hi(), f.lo(), f.hi()];
    s.sort_unstable();
    s
}

/// Whether giving disjoint same-class edges `e` and `f` one new color `c`
/// trips a conflict: the edges touch, their shared 4-set already carries
/// a repetition, or some 5-set around them carries two.
pub fn is_2_conflict(
    e: Edge,
    f: Edge,
    c: ColorId,
    coloring: &EdgeColoring,
    classes: &UncoloredClasses,
) -> Result<bool, PhaseBError> {
    if e == f {
        return Err(malformed(format!("{e:?} paired with itself")));
    }
    let class_e = member_class(e, coloring, classes)?;
    let class_f = member_class(f, coloring, classes)?;
    if class_e != class_f {
        return Err(PhaseBError::ClassMismatch { e, f, color: c });
    }
    if e.shares_vertex(&f) {
        return Ok(true);
    }
    let quad = sorted4(e, f);
    if reps_of(coloring, &quad) == 1 {
        return Ok(true);
    }
    for t in 0..coloring.n() {
        if quad.contains(&t) {
            continue;
        }
        let mut quint = [quad[0], quad[1], quad[2], quad[3], t];
        quint.sort_unstable();
        if reps_of(coloring, &quint) == 2 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Validates the member list of a 4- or 6-conflict candidate: pairing
/// shape, uncolored classed edges, and a single class inside each pair.
fn conflict_shape(
    members: &[(Edge, ColorId)],
    want: usize,
    coloring: &EdgeColoring,
    classes: &UncoloredClasses,
) -> Result<(), PhaseBError> {
    if members.len() != want {
        return Err(malformed(format!("{} members, expected {want}", members.len())));
    }
    check_pairing(members)?;
    let mut per_color: BTreeMap<ColorId, Vec<(Edge, EdgeClass)>> = BTreeMap::new();
    for &(edge, color) in members {
        let class = member_class(edge, coloring, classes)?;
        per_color.entry(color).or_default().push((edge, class));
    }
    for (color, pair) in &per_color {
        let [(e, class_e), (f, class_f)] = pair.as_slice() else {
            unreachable!("pairing was checked");
        };
        if class_e != class_f {
            return Err(PhaseBError::ClassMismatch { e: *e, f: *f, color: *color });
        }
    }
    Ok(())
}

fn member_span(members: &[(Edge, ColorId)]) -> Vec<Vertex> {
    let mut span: Vec<Vertex> = members
        .iter()
        .flat_map(|&(edge, _)| [edge.lo(), edge.hi()])
        .collect();
    span.sort_unstable();
    span.dedup();
    span
}

/// Whether some member can anchor `s`: the member needs an uncolored
/// partner inside `s`, disjoint from it and on the same side of the
/// class split.
fn has_anchored_partner(
    members: &[(Edge, ColorId)],
    s: &[Vertex],
    coloring: &EdgeColoring,
    classes: &UncoloredClasses,
) -> bool {
    members.iter().any(|&(anchor, _)| {
        let class = classes.class_of(anchor);
        for i in 0..s.len() {
            for j in (i + 1)..s.len() {
                let p = Edge::new(s[i], s[j]);
                if p.touches(anchor.lo()) || p.touches(anchor.hi()) || coloring.is_colored(p) {
                    continue;
                }
                if classes.class_of(p) == class {
                    return true;
                }
            }
        }
        false
    })
}

/// Scans the candidate sets that could hold every member: the span when
/// it has four or five vertices, and the one-vertex extensions of a
/// four-vertex span. A set qualifies for shape `(a, b)` when it has `a`
/// vertices, exactly `b` repetitions, and an anchored partner.
fn anchored_check(
    members: &[(Edge, ColorId)],
    coloring: &EdgeColoring,
    classes: &UncoloredClasses,
    shapes: &[(usize, usize)],
) -> Result<bool, PhaseBError> {
    let span = member_span(members);
    match span.len() {
        4 => {
            let quad = [span[0], span[1], span[2], span[3]];
            for &(a, b) in shapes {
                if a == 4 {
                    if reps_of(coloring, &quad) == b
                        && has_anchored_partner(members, &quad, coloring, classes)
                    {
                        return Ok(true);
                    }
                } else {
                    for t in 0..coloring.n() {
                        if quad.contains(&t) {
                            continue;
                        }
                        let mut quint = [quad[0], quad[1], quad[2], quad[3], t];
                        quint.sort_unstable();
                        if reps_of(coloring, &quint) == b
                            && has_anchored_partner(members, &quint, coloring, classes)
                        {
                            return Ok(true);
                        }
                    }
                }
            }
            Ok(false)
        }
        5 => {
            for &(a, b) in shapes {
                if a == 5
                    && reps_of(coloring, &span) == b
                    && has_anchored_partner(members, &span, coloring, classes)
                {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        _ => Ok(false),
    }
}

/// Whether two equal-color pairs of newly colored edges land inside a
/// harmful set: a clean 4-set holding all four edges, or a 5-set that
/// carries one repetition.
pub fn is_4_conflict(
    quad: &[(Edge, ColorId)],
    coloring: &EdgeColoring,
    classes: &UncoloredClasses,
) -> Result<bool, PhaseBError> {
    conflict_shape(quad, 4, coloring, classes)?;
    anchored_check(quad, coloring, classes, &[(4, 0), (5, 1)])
}

/// Whether three equal-color pairs of newly colored edges fill a clean
/// 5-set.
pub fn is_6_conflict(
    sext: &[(Edge, ColorId)],
    coloring: &EdgeColoring,
    classes: &UncoloredClasses,
) -> Result<bool, PhaseBError> {
    conflict_shape(sext, 6, coloring, classes)?;
    anchored_check(sext, coloring, classes, &[(5, 0)])
}

/// True when no proper subset of the witness's members is itself a
/// conflict. Pairs are always minimal; larger shapes fail when an inner
/// pair conflicts on its own, and a sextet also when two of its pairs
/// already form a 4-conflict.
pub fn minimal_conflicts(
    witness: &DConflict,
    coloring: &EdgeColoring,
    classes: &UncoloredClasses,
) -> Result<bool, PhaseBError> {
    if witness.kind == ConflictKind::Two {
        return Ok(true);
    }
    let members = &witness.members;
    for i in 0..members.len() {
        for j in (i + 1)..members.len() {
            let (a, ca) = members[i];
            let (b, cb) = members[j];
            if ca == cb && is_2_conflict(a, b, ca, coloring, classes)? {
                return Ok(false);
            }
        }
    }
    if witness.kind == ConflictKind::Six {
        let colors: BTreeSet<ColorId> = members.iter().map(|&(_, c)| c).collect();
        for skip in &colors {
            let sub: Vec<(Edge, ColorId)> =
                members.iter().copied().filter(|&(_, c)| c != *skip).collect();
            if is_4_conflict(&sub, coloring, classes)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Tallies from a finishing run. The per-edge blocked-candidate numbers
/// describe the finished attempt of the restart strategy; backtracking
/// reports probes and undone nodes instead.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseBStats {
    pub restarts: u32,
    pub assigned: usize,
    pub colors_used_b1: usize,
    pub colors_used_b2: usize,
    /// Candidate colors rejected across all attempts and probes.
    pub rejections: u64,
    pub max_blocked_on_one_edge: usize,
    pub edges_with_blocked: usize,
    /// Nodes undone by the backtracking strategy.
    pub backtracks: u64,
}

/// A finished coloring with its search tallies.
#[derive(Clone, Debug)]
pub struct PhaseBOutput {
    pub coloring: EdgeColoring,
    pub stats: PhaseBStats,
}

/// Working state of the search: the growing coloring plus the edges
/// already placed under each new color.
struct Board<'a> {
    partial: &'a EdgeColoring,
    full: EdgeColoring,
    by_color: BTreeMap<ColorId, Vec<Edge>>,
}

impl<'a> Board<'a> {
    fn new(partial: &'a EdgeColoring) -> Self {
        Board { partial, full: partial.clone(), by_color: BTreeMap::new() }
    }

    /// The color `e` picked up this stage, if any.
    fn new_color(&self, e: Edge) -> Option<ColorId> {
        if self.partial.is_colored(e) {
            None
        } else {
            self.full.color(e)
        }
    }

    fn put(&mut self, x: Edge, c: ColorId) {
        self.full.assign(x, c).expect("placement was vetted");
        self.by_color.entry(c).or_default().push(x);
    }

    fn take(&mut self, x: Edge) {
        let c = self.full.clear(x).expect("edge was placed");
        let stack = self.by_color.get_mut(&c).expect("color was used");
        let top = stack.pop();
        debug_assert_eq!(top, Some(x), "undo out of order");
        if stack.is_empty() {
            self.by_color.remove(&c);
        }
    }

    fn used_from(&self, pool: &[ColorId]) -> usize {
        pool.iter().filter(|c| self.by_color.contains_key(c)).count()
    }

    /// Same-colored pairs already placed inside the 5-set `s`. The
    /// matching guard caps a color at two appearances here.
    fn pairs_inside(&self, s: &[Vertex; 5]) -> usize {
        let mut tally: Vec<(ColorId, usize)> = Vec::new();
        for i in 0..5 {
            for j in (i + 1)..5 {
                if let Some(c) = self.new_color(Edge::new(s[i], s[j])) {
                    match tally.iter_mut().find(|(x, _)| *x == c) {
                        Some((_, m)) => *m += 1,
                        None => tally.push((c, 1)),
                    }
                }
            }
        }
        tally.iter().filter(|&&(_, m)| m == 2).count()
    }

    /// Whether the 4-set spanned by disjoint `x` and `y` already holds a
    /// same-colored pair on its other two matchings.
    fn other_pair_inside(&self, x: Edge, y: Edge) -> bool {
        let (u, v) = (x.lo(), x.hi());
        let (w, z) = (y.lo(), y.hi());
        for (p, q) in [
            (Edge::new(u, w), Edge::new(v, z)),
            (Edge::new(u, z), Edge::new(v, w)),
        ] {
            if let (Some(cp), Some(cq)) = (self.new_color(p), self.new_color(q)) {
                if cp == cq {
                    return true;
                }
            }
        }
        false
    }

    /// Why `c` cannot go on `x` right now, or `None` when it can. Checks
    /// the matching rule, then every repetition budget a new pair with an
    /// already-placed edge of color `c` would touch.
    fn blocked_kind(&self, x: Edge, c: ColorId) -> Option<ConflictKind> {
        let same = self.by_color.get(&c)?;
        if same.iter().any(|y| y.shares_vertex(&x)) {
            return Some(ConflictKind::Two);
        }
        for &y in same {
            let quad = sorted4(x, y);
            let r4 = reps_of(self.partial, &quad);
            if r4 >= 1 {
                return Some(ConflictKind::Two);
            }
            if self.other_pair_inside(x, y) {
                return Some(ConflictKind::Four);
            }
            for t in 0..self.partial.n() {
                if quad.contains(&t) {
                    continue;
                }
                let mut quint = [quad[0], quad[1], quad[2], quad[3], t];
                quint.sort_unstable();
                let r5 = reps_of(self.partial, &quint) as i64;
                let existing = self.pairs_inside(&quint) as i64;
                if existing + 1 > 2 - r5 {
                    return Some(match r5 {
                        r if r >= 2 => ConflictKind::Two,
                        1 => ConflictKind::Four,
                        _ => ConflictKind::Six,
                    });
                }
            }
        }
        None
    }
}

/// Colors every uncolored edge of `partial` from the pool of its class so
/// that no conflict survives, using the configured search strategy. The
/// input must already be free of repetition overloads; the output then
/// stays free of them.
pub fn assign_colors(
    partial: &EdgeColoring,
    classes: &UncoloredClasses,
    lists: &ListAssignment,
    config: &PhaseBConfig,
) -> Result<PhaseBOutput, PhaseBError> {
    if partial.n() != config.n {
        return Err(PhaseBError::SizeMismatch { coloring_n: partial.n(), config_n: config.n });
    }
    classes.validate_against(partial)?;
    let mut todo: Vec<(Edge, EdgeClass)> = Vec::new();
    for edge in partial.uncolored_edges() {
        let class = classes.class_of(edge).ok_or(PhaseBError::UnclassedEdge { edge })?;
        todo.push((edge, class));
    }
    let used: BTreeSet<ColorId> = partial.classes().map(|(c, _)| c).collect();
    for &c in lists.c_b1().iter().chain(lists.c_b2()) {
        if used.contains(&c) {
            return Err(PhaseBError::PoolCollision { color: c });
        }
    }
    if todo.is_empty() {
        return Ok(PhaseBOutput { coloring: partial.clone(), stats: PhaseBStats::default() });
    }
    match config.strategy {
        Strategy::RandomGreedyRestart => run_restarts(partial, &todo, lists, config),
        Strategy::Backtracking => run_backtracking(partial, &todo, lists, config),
    }
}

fn finish_stats(board: &Board, lists: &ListAssignment, assigned: usize) -> PhaseBStats {
    PhaseBStats {
        assigned,
        colors_used_b1: board.used_from(lists.c_b1()),
        colors_used_b2: board.used_from(lists.c_b2()),
        ..PhaseBStats::default()
    }
}

fn run_restarts(
    partial: &EdgeColoring,
    todo: &[(Edge, EdgeClass)],
    lists: &ListAssignment,
    config: &PhaseBConfig,
) -> Result<PhaseBOutput, PhaseBError> {
    let mut rejections = 0u64;
    let mut last_dead: Option<(Edge, Vec<(ColorId, ConflictKind)>)> = None;
    for attempt in 0..=config.max_restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(u64::from(attempt)));
        let mut order = todo.to_vec();
        order.shuffle(&mut rng);
        let mut board = Board::new(partial);
        let mut max_blocked = 0usize;
        let mut edges_with_blocked = 0usize;
        let mut finished = true;
        for &(edge, class) in &order {
            // A shuffled probe order makes the first free candidate a
            // uniform draw from the free ones.
            let mut candidates = lists.list_for(class).to_vec();
            candidates.shuffle(&mut rng);
            let mut blocked = Vec::new();
            let mut chosen = None;
            for &c in &candidates {
                match board.blocked_kind(edge, c) {
                    None => {
                        chosen = Some(c);
                        break;
                    }
                    Some(kind) => blocked.push((c, kind)),
                }
            }
            rejections += blocked.len() as u64;
            if !blocked.is_empty() {
                edges_with_blocked += 1;
                max_blocked = max_blocked.max(blocked.len());
            }
            match chosen {
                Some(c) => board.put(edge, c),
                None => {
                    last_dead = Some((edge, blocked));
                    finished = false;
                    break;
                }
            }
        }
        if finished {
            let mut stats = finish_stats(&board, lists, todo.len());
            stats.restarts = attempt;
            stats.rejections = rejections;
            stats.max_blocked_on_one_edge = max_blocked;
            stats.edges_with_blocked = edges_with_blocked;
            return Ok(PhaseBOutput { coloring: board.full, stats });
        }
    }
    let (stuck, blocked) = last_dead.expect("a failed attempt leaves a dead end");
    Err(PhaseBError::Exhausted { stuck, restarts: config.max_restarts, blocked })
}

fn run_backtracking(
    partial: &EdgeColoring,
    todo: &[(Edge, EdgeClass)],
    lists: &ListAssignment,
    config: &PhaseBConfig,
) -> Result<PhaseBOutput, PhaseBError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut board = Board::new(partial);
    let mut unassigned: Vec<(Edge, EdgeClass)> = todo.to_vec();
    let mut stack: Vec<(Edge, EdgeClass, Vec<ColorId>)> = Vec::new();
    let mut backtracks = 0u64;
    let mut rejections = 0u64;
    while !unassigned.is_empty() {
        // Branch on a most-constrained edge; ties go to the smallest so
        // runs are reproducible.
        let mut pick: Option<(usize, Vec<ColorId>)> = None;
        let mut dead: Option<(Edge, Vec<(ColorId, ConflictKind)>)> = None;
        for (i, &(edge, class)) in unassigned.iter().enumerate() {
            let mut free = Vec::new();
            let mut blocked = Vec::new();
            for &c in lists.list_for(class) {
                match board.blocked_kind(edge, c) {
                    None => free.push(c),
                    Some(kind) => blocked.push((c, kind)),
                }
            }
            rejections += blocked.len() as u64;
            if free.is_empty() {
                dead = Some((edge, blocked));
                break;
            }
            let better = match &pick {
                None => true,
                Some((j, best)) => {
                    free.len() < best.len()
                        || (free.len() == best.len() && edge < unassigned[*j].0)
                }
            };
            if better {
                pick = Some((i, free));
            }
        }
        match dead {
            None => {
                let (i, mut free) = pick.expect("unassigned edges always yield a pick");
                free.shuffle(&mut rng);
                let (edge, class) = unassigned.remove(i);
                let c = free.pop().expect("free list is nonempty");
                board.put(edge, c);
                stack.push((edge, class, free));
            }
            Some((stuck, blocked)) => loop {
                let Some((edge, class, mut rest)) = stack.pop() else {
                    return Err(PhaseBError::Exhausted { stuck, restarts: 0, blocked });
                };
                board.take(edge);
                backtracks += 1;
                if let Some(c) = rest.pop() {
                    board.put(edge, c);
                    stack.push((edge, class, rest));
                    break;
                }
                unassigned.push((edge, class));
            },
        }
    }
    let mut stats = finish_stats(&board, lists, todo.len());
    stats.rejections = rejections;
    stats.backtracks = backtracks;
    Ok(PhaseBOutput { coloring: board.full, stats })
}
