//! Edge colorings of the complete graph `K_n` and the repetition test on
//! small vertex subsets.
//!
//! A subset `S` with `x` colored edges spanning `y` distinct colors has
//! `x - y` repetitions. A `p`-subset violates the `(p,q)` condition when
//! its repetitions exceed `C(p,2) - q`; on a fully colored clique that is
//! exactly "fewer than `q` distinct colors".
//!
//! # Representation
//!
//! Colors are stored in a flat lower-triangular vector indexed by
//! `hi*(hi-1)/2 + lo`, with a color-class index (`BTreeMap` of sorted edge
//! sets) maintained alongside for component extraction, matching checks
//! and alternating-cycle scans. All public scan results come back in a
//! deterministic order regardless of thread count.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Vertex index into `0..n`.
pub type Vertex = u32;

/// Opaque color identifier. Ordering is used only for determinism.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorId(pub u32);

/// Unordered vertex pair stored with the smaller endpoint first.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    a: Vertex,
    b: Vertex,
}

impl Edge {
    /// Builds the edge `{u, v}`.
    ///
    /// # Panics
    ///
    /// Panics if `u == v`.
    pub fn new(u: Vertex, v: Vertex) -> Self {
        assert_ne!(u, v, "loop edge {{{u},{u}}}");
        if u < v {
            Edge { a: u, b: v }
        } else {
            Edge { a: v, b: u }
        }
    }

    pub fn lo(&self) -> Vertex {
        self.a
    }

    pub fn hi(&self) -> Vertex {
        self.b
    }

    pub fn endpoints(&self) -> [Vertex; 2] {
        [self.a, self.b]
    }

    pub fn touches(&self, v: Vertex) -> bool {
        self.a == v || self.b == v
    }

    pub fn shares_vertex(&self, other: &Edge) -> bool {
        self.touches(other.a) || self.touches(other.b)
    }

    /// The endpoint opposite `v`, or `None` if `v` is not an endpoint.
    pub fn other(&self, v: Vertex) -> Option<Vertex> {
        if v == self.a {
            Some(self.b)
        } else if v == self.b {
            Some(self.a)
        } else {
            None
        }
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.a, self.b)
    }
}

impl Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.a, self.b).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (u, v): (Vertex, Vertex) = Deserialize::deserialize(d)?;
        if u == v {
            return Err(serde::de::Error::custom("loop edge"));
        }
        Ok(Edge::new(u, v))
    }
}

/// Errors from coloring construction and subset queries.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("vertex {v} out of range for n = {n}")]
    VertexOutOfRange { v: Vertex, n: u32 },
    #[error("subset contains a repeated vertex: {subset:?}")]
    RepeatedVertex { subset: Vec<Vertex> },
    #[error("subset has {got} vertices, expected {expected}")]
    WrongSubsetSize { expected: usize, got: usize },
    #[error("degenerate clique parameters p = {p}, q = {q}")]
    BadParameters { p: usize, q: u64 },
    #[error("edge {edge:?} is already colored")]
    AlreadyColored { edge: Edge },
    #[error("edge {edge:?} is not colored")]
    NotColored { edge: Edge },
}

/// Minimum number of colors `q` for which the `(p,q)` condition still
/// admits colorings with a linear number of colors: `C(p,2) - p + 3`.
///
/// # Errors
///
/// Errors for `p < 3`, where the expression is meaningless.
pub fn q_lin(p: usize) -> Result<u64, ColoringError> {
    if p < 3 {
        return Err(ColoringError::BadParameters { p, q: 0 });
    }
    let pairs = (p * (p - 1) / 2) as u64;
    Ok(pairs - p as u64 + 3)
}

/// Repetition census of one vertex subset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepetitionReport {
    pub subset: Vec<Vertex>,
    pub colored_edges: usize,
    pub distinct_colors: usize,
    pub repetitions: usize,
}

/// Shape of a monochromatic component, by edge count and degree profile.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ComponentShape {
    IsolatedEdge,
    TwoPath,
    ThreePath,
    ThreeStar,
    Triangle,
    Other,
}

/// One connected component of a color class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoComponent {
    pub color: ColorId,
    /// Sorted edge list.
    pub edges: Vec<Edge>,
    /// Sorted vertex support.
    pub vertices: Vec<Vertex>,
    pub shape: ComponentShape,
}

impl MonoComponent {
    /// Degree of `v` within the component.
    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    /// Center of a 2-path component (its unique degree-2 vertex).
    pub fn two_path_center(&self) -> Option<Vertex> {
        if self.shape != ComponentShape::TwoPath {
            return None;
        }
        self.vertices.iter().copied().find(|&v| self.degree(v) == 2)
    }

    /// The two degree-1 endpoints of a 2-path component.
    pub fn two_path_tips(&self) -> Option<[Vertex; 2]> {
        if self.shape != ComponentShape::TwoPath {
            return None;
        }
        let mut tips = self.vertices.iter().copied().filter(|&v| self.degree(v) == 1);
        Some([tips.next()?, tips.next()?])
    }
}

/// Partial edge coloring of `K_n`.
#[derive(Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    n: u32,
    slots: Vec<Option<ColorId>>,
    colored: usize,
    classes: BTreeMap<ColorId, BTreeSet<Edge>>,
}

impl fmt::Debug for EdgeColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "EdgeColoring {{ n: {}, colored: {}/{}, colors: {} }}",
            self.n,
            self.colored,
            self.slots.len(),
            self.classes.len()
        )
    }
}

impl EdgeColoring {
    /// Empty coloring of `K_n`.
    pub fn new(n: u32) -> Self {
        let m = (n as usize) * (n as usize - 1) / 2;
        EdgeColoring {
            n,
            slots: vec![None; m],
            colored: 0,
            classes: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of edges of `K_n`.
    pub fn edge_count(&self) -> usize {
        self.slots.len()
    }

    fn idx(&self, e: Edge) -> usize {
        debug_assert!(e.hi() < self.n, "edge {e:?} out of range for n = {}", self.n);
        (e.hi() as usize) * (e.hi() as usize - 1) / 2 + e.lo() as usize
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        e.hi() < self.n
    }

    pub fn color(&self, e: Edge) -> Option<ColorId> {
        self.slots[self.idx(e)]
    }

    pub fn is_colored(&self, e: Edge) -> bool {
        self.color(e).is_some()
    }

    /// Colors an uncolored edge.
    ///
    /// # Errors
    ///
    /// Errors if the edge is out of range or already colored.
    pub fn assign(&mut self, e: Edge, c: ColorId) -> Result<(), ColoringError> {
        if e.hi() >= self.n {
            return Err(ColoringError::VertexOutOfRange { v: e.hi(), n: self.n });
        }
        let i = self.idx(e);
        if self.slots[i].is_some() {
            return Err(ColoringError::AlreadyColored { edge: e });
        }
        self.slots[i] = Some(c);
        self.colored += 1;
        self.classes.entry(c).or_default().insert(e);
        Ok(())
    }

    /// Removes the color of `e`, returning it.
    ///
    /// # Errors
    ///
    /// Errors if the edge is out of range or not colored.
    pub fn clear(&mut self, e: Edge) -> Result<ColorId, ColoringError> {
        if e.hi() >= self.n {
            return Err(ColoringError::VertexOutOfRange { v: e.hi(), n: self.n });
        }
        let i = self.idx(e);
        let c = self.slots[i].ok_or(ColoringError::NotColored { edge: e })?;
        self.slots[i] = None;
        self.colored -= 1;
        let class = self.classes.get_mut(&c).expect("class index out of sync");
        class.remove(&e);
        if class.is_empty() {
            self.classes.remove(&c);
        }
        Ok(c)
    }

    pub fn colored_count(&self) -> usize {
        self.colored
    }

    pub fn is_complete(&self) -> bool {
        self.colored == self.slots.len()
    }

    /// Number of distinct colors in use.
    pub fn colors_used(&self) -> usize {
        self.classes.len()
    }

    /// Color class of `c` (empty if unused), in sorted edge order.
    pub fn class(&self, c: ColorId) -> impl Iterator<Item = Edge> + '_ {
        self.classes.get(&c).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn class_size(&self, c: ColorId) -> usize {
        self.classes.get(&c).map_or(0, |s| s.len())
    }

    /// All nonempty classes in color order.
    pub fn classes(&self) -> impl Iterator<Item = (ColorId, &BTreeSet<Edge>)> {
        self.classes.iter().map(|(c, s)| (*c, s))
    }

    /// Colored edges in lexicographic `(lo, hi)` order.
    pub fn colored_edges(&self) -> impl Iterator<Item = (Edge, ColorId)> + '_ {
        (0..self.n).flat_map(move |u| {
            ((u + 1)..self.n).filter_map(move |v| {
                let e = Edge::new(u, v);
                self.color(e).map(|c| (e, c))
            })
        })
    }

    /// Uncolored edges in lexicographic `(lo, hi)` order.
    pub fn uncolored_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n).flat_map(move |u| {
            ((u + 1)..self.n).filter_map(move |v| {
                let e = Edge::new(u, v);
                if self.color(e).is_none() {
                    Some(e)
                } else {
                    None
                }
            })
        })
    }

    /// True if some edge at `v` has color `c`.
    pub fn vertex_sees_color(&self, v: Vertex, c: ColorId) -> bool {
        self.class(c).any(|e| e.touches(v))
    }

    fn check_subset(&self, s: &[Vertex]) -> Result<(), ColoringError> {
        for &v in s {
            if v >= self.n {
                return Err(ColoringError::VertexOutOfRange { v, n: self.n });
            }
        }
        let mut sorted: Vec<Vertex> = s.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(ColoringError::RepeatedVertex { subset: s.to_vec() });
        }
        Ok(())
    }
}

/// Counts colored edges, distinct colors and repetitions inside `s`.
///
/// # Errors
///
/// Errors on out-of-range or repeated vertices.
pub fn repetitions(coloring: &EdgeColoring, s: &[Vertex]) -> Result<RepetitionReport, ColoringError> {
    coloring.check_subset(s)?;
    let (x, y) = count_pairs(coloring, s);
    let mut subset = s.to_vec();
    subset.sort_unstable();
    Ok(RepetitionReport {
        subset,
        colored_edges: x,
        distinct_colors: y,
        repetitions: x - y,
    })
}

/// Colored-edge and distinct-color counts without the validity checks.
pub(crate) fn count_pairs(coloring: &EdgeColoring, s: &[Vertex]) -> (usize, usize) {
    let mut seen: Vec<ColorId> = Vec::with_capacity(s.len() * (s.len() - 1) / 2);
    let mut x = 0usize;
    let mut y = 0usize;
    for i in 0..s.len() {
        for j in (i + 1)..s.len() {
            if let Some(c) = coloring.color(Edge::new(s[i], s[j])) {
                x += 1;
                if !seen.contains(&c) {
                    seen.push(c);
                    y += 1;
                }
            }
        }
    }
    (x, y)
}

pub(crate) fn violation_threshold(p: usize, q: u64) -> i64 {
    (p * (p - 1) / 2) as i64 - q as i64
}

/// Tests whether the `p`-subset `s` breaks the `(p,q)` condition.
///
/// # Errors
///
/// Errors when `|s| != p`, on invalid vertices, or for degenerate
/// parameters (`p < 2` or `q < 1`).
pub fn is_violation(
    coloring: &EdgeColoring,
    s: &[Vertex],
    p: usize,
    q: u64,
) -> Result<bool, ColoringError> {
    if p < 2 || q < 1 {
        return Err(ColoringError::BadParameters { p, q });
    }
    if s.len() != p {
        return Err(ColoringError::WrongSubsetSize { expected: p, got: s.len() });
    }
    coloring.check_subset(s)?;
    let (x, y) = count_pairs(coloring, s);
    Ok((x - y) as i64 > violation_threshold(p, q))
}

/// Calls `f` on every `k`-subset of `pool` in lexicographic order until it
/// returns `false`.
pub(crate) fn for_each_subset<F: FnMut(&[Vertex]) -> bool>(pool: &[Vertex], k: usize, mut f: F) {
    fn rec<F: FnMut(&[Vertex]) -> bool>(
        pool: &[Vertex],
        k: usize,
        start: usize,
        acc: &mut Vec<Vertex>,
        f: &mut F,
    ) -> bool {
        if acc.len() == k {
            return f(acc);
        }
        let need = k - acc.len();
        if pool.len() < need + start {
            return true;
        }
        for i in start..=(pool.len() - need) {
            acc.push(pool[i]);
            let go_on = rec(pool, k, i + 1, acc, f);
            acc.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    if k == 0 {
        f(&[]);
        return;
    }
    let mut acc = Vec::with_capacity(k);
    rec(pool, k, 0, &mut acc, &mut f);
}

fn violations_starting_at(
    coloring: &EdgeColoring,
    v0: Vertex,
    p: usize,
    thresh: i64,
    limit: Option<usize>,
) -> Vec<Vec<Vertex>> {
    let pool: Vec<Vertex> = ((v0 + 1)..coloring.n).collect();
    let mut out = Vec::new();
    let mut s = Vec::with_capacity(p);
    for_each_subset(&pool, p - 1, |tail| {
        s.clear();
        s.push(v0);
        s.extend_from_slice(tail);
        let (x, y) = count_pairs(coloring, &s);
        if (x - y) as i64 > thresh {
            out.push(s.clone());
            if let Some(cap) = limit {
                if out.len() >= cap {
                    return false;
                }
            }
        }
        true
    });
    out
}

/// Lists violating `p`-subsets in lexicographic order, optionally stopping
/// after `limit` hits. The full scan runs in parallel when the `parallel`
/// feature is enabled; results are identical either way.
///
/// # Panics
///
/// Panics for `p < 2` or `q < 1`.
pub fn find_violations(
    coloring: &EdgeColoring,
    p: usize,
    q: u64,
    limit: Option<usize>,
) -> Vec<Vec<Vertex>> {
    assert!(p >= 2 && q >= 1, "degenerate clique parameters p = {p}, q = {q}");
    if (coloring.n as usize) < p {
        return Vec::new();
    }
    let thresh = violation_threshold(p, q);

    if let Some(cap) = limit {
        let mut out = Vec::new();
        for v0 in 0..coloring.n {
            let room = cap - out.len();
            if room == 0 {
                break;
            }
            out.extend(violations_starting_at(coloring, v0, p, thresh, Some(room)));
        }
        return out;
    }

    #[cfg(feature = "parallel")]
    {
        (0..coloring.n)
            .into_par_iter()
            .map(|v0| violations_starting_at(coloring, v0, p, thresh, None))
            .reduce(Vec::new, |mut a, mut b| {
                a.append(&mut b);
                a
            })
    }

    #[cfg(not(feature = "parallel"))]
    {
        let mut out = Vec::new();
        for v0 in 0..coloring.n {
            out.extend(violations_starting_at(coloring, v0, p, thresh, None));
        }
        out
    }
}

/// Sequential variant of the full scan, kept callable with the `parallel`
/// feature on so the two routes can be compared directly.
pub fn find_violations_seq(coloring: &EdgeColoring, p: usize, q: u64) -> Vec<Vec<Vertex>> {
    assert!(p >= 2 && q >= 1, "degenerate clique parameters p = {p}, q = {q}");
    if (coloring.n as usize) < p {
        return Vec::new();
    }
    let thresh = violation_threshold(p, q);
    let mut out = Vec::new();
    for v0 in 0..coloring.n {
        out.extend(violations_starting_at(coloring, v0, p, thresh, None));
    }
    out
}

/// Checks whether adding `new_edges` would create a `(p,q)`-violation on a
/// subset containing at least one new edge, returning the first such
/// subset in scan order.
///
/// # Errors
///
/// Errors if a new edge is out of range, already colored, or listed twice.
pub fn would_violate(
    coloring: &EdgeColoring,
    new_edges: &[(Edge, ColorId)],
    p: usize,
    q: u64,
) -> Result<Option<Vec<Vertex>>, ColoringError> {
    if p < 2 || q < 1 {
        return Err(ColoringError::BadParameters { p, q });
    }
    let mut overlay = coloring.clone();
    for &(e, c) in new_edges {
        overlay.assign(e, c)?;
    }
    if (overlay.n as usize) < p {
        return Ok(None);
    }
    let thresh = violation_threshold(p, q);
    let mut found: Option<Vec<Vertex>> = None;
    for &(e, _) in new_edges {
        let pool: Vec<Vertex> = (0..overlay.n).filter(|v| !e.touches(*v)).collect();
        let mut s = Vec::with_capacity(p);
        for_each_subset(&pool, p - 2, |rest| {
            s.clear();
            s.push(e.lo());
            s.push(e.hi());
            s.extend_from_slice(rest);
            s.sort_unstable();
            let (x, y) = count_pairs(&overlay, &s);
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
    Ok(found)
}

fn classify_shape(edges: &[Edge], vertices: &[Vertex], degree: impl Fn(Vertex) -> usize) -> ComponentShape {
    match (edges.len(), vertices.len()) {
        (1, _) => ComponentShape::IsolatedEdge,
        (2, 3) => ComponentShape::TwoPath,
        (3, 3) => ComponentShape::Triangle,
        (3, 4) => {
            if vertices.iter().any(|&v| degree(v) == 3) {
                ComponentShape::ThreeStar
            } else {
                ComponentShape::ThreePath
            }
        }
        _ => ComponentShape::Other,
    }
}

/// Splits every color class into connected components and classifies each
/// one. Components come back ordered by color, then by smallest edge.
pub fn monochromatic_components(coloring: &EdgeColoring) -> Vec<MonoComponent> {
    let mut out = Vec::new();
    for (color, edges) in coloring.classes() {
        // Union-find over the class's vertex support.
        let verts: Vec<Vertex> = {
            let mut v: Vec<Vertex> = edges.iter().flat_map(|e| e.endpoints()).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let index: BTreeMap<Vertex, usize> = verts.iter().copied().zip(0..).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn root(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for e in edges {
            let (i, j) = (index[&e.lo()], index[&e.hi()]);
            let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
        let mut groups: BTreeMap<usize, Vec<Edge>> = BTreeMap::new();
        for e in edges {
            let r = root(&mut parent, index[&e.lo()]);
            groups.entry(r).or_default().push(*e);
        }
        for (_, mut comp_edges) in groups {
            comp_edges.sort_unstable();
            let mut comp_verts: Vec<Vertex> =
                comp_edges.iter().flat_map(|e| e.endpoints()).collect();
            comp_verts.sort_unstable();
            comp_verts.dedup();
            let degree = |v: Vertex| comp_edges.iter().filter(|e| e.touches(v)).count();
            let shape = classify_shape(&comp_edges, &comp_verts, degree);
            out.push(MonoComponent {
                color,
                edges: comp_edges,
                vertices: comp_verts,
                shape,
            });
        }
    }
    out
}
