//! Shared brute-force oracles for integration tests. Everything here is
//! written from the definitions with no reuse of the library's scan code,
//! so the two routes stay independent.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rf_core::coloring::{ColorId, Edge, EdgeColoring, Vertex};

/// Calls `f` with every k-subset of `pool`, in lexicographic order.
pub fn for_each_subset(pool: &[Vertex], k: usize, f: &mut dyn FnMut(&[Vertex])) {
    fn rec(pool: &[Vertex], k: usize, start: usize, acc: &mut Vec<Vertex>, f: &mut dyn FnMut(&[Vertex])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        let need = k - acc.len();
        for i in start..=pool.len().saturating_sub(need) {
            acc.push(pool[i]);
            rec(pool, k, i + 1, acc, f);
            acc.pop();
        }
    }
    let mut acc = Vec::with_capacity(k);
    rec(pool, k, 0, &mut acc, f);
}

/// All k-subsets of `0..n` in lexicographic order.
pub fn all_subsets(n: u32, k: usize) -> Vec<Vec<Vertex>> {
    let pool: Vec<Vertex> = (0..n).collect();
    let mut out = Vec::new();
    for_each_subset(&pool, k, &mut |s| out.push(s.to_vec()));
    out
}

/// Repetition count of `s` recomputed from the definition: colored edges
/// minus distinct colors, tallied through a map.
pub fn oracle_repetitions(coloring: &EdgeColoring, s: &[Vertex]) -> (usize, usize, usize) {
    let mut per_color: BTreeMap<ColorId, usize> = BTreeMap::new();
    let mut x = 0usize;
    for i in 0..s.len() {
        for j in (i + 1)..s.len() {
            if let Some(c) = coloring.color(Edge::new(s[i], s[j])) {
                x += 1;
                *per_color.entry(c).or_insert(0) += 1;
            }
        }
    }
    let y = per_color.len();
    (x, y, x - y)
}

/// Violation test straight from the threshold definition.
pub fn oracle_is_violation(coloring: &EdgeColoring, s: &[Vertex], p: usize, q: i64) -> bool {
    assert_eq!(s.len(), p);
    let (_, _, reps) = oracle_repetitions(coloring, s);
    let pairs = (p * (p - 1) / 2) as i64;
    (reps as i64) > pairs - q
}

/// Exhaustive violation list via the recursive subset generator.
pub fn oracle_find_violations(coloring: &EdgeColoring, p: usize, q: i64) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let pool: Vec<Vertex> = (0..coloring.n()).collect();
    for_each_subset(&pool, p, &mut |s| {
        if oracle_is_violation(coloring, s, p, q) {
            out.push(s.to_vec());
        }
    });
    out
}

/// Monochromatic components recomputed by per-color repeated BFS over an
/// adjacency map.
pub fn oracle_mono_components(coloring: &EdgeColoring) -> Vec<(ColorId, BTreeSet<Edge>)> {
    let mut by_color: BTreeMap<ColorId, Vec<Edge>> = BTreeMap::new();
    for (e, c) in coloring.colored_edges() {
        by_color.entry(c).or_default().push(e);
    }
    let mut out = Vec::new();
    for (c, edges) in by_color {
        let mut adj: BTreeMap<Vertex, Vec<Edge>> = BTreeMap::new();
        for &e in &edges {
            adj.entry(e.lo()).or_default().push(e);
            adj.entry(e.hi()).or_default().push(e);
        }
        let mut seen: BTreeSet<Edge> = BTreeSet::new();
        for &start in &edges {
            if seen.contains(&start) {
                continue;
            }
            let mut comp: BTreeSet<Edge> = BTreeSet::new();
            let mut queue = vec![start];
            seen.insert(start);
            while let Some(e) = queue.pop() {
                comp.insert(e);
                for v in [e.lo(), e.hi()] {
                    for &f in &adj[&v] {
                        if seen.insert(f) {
                            queue.push(f);
                        }
                    }
                }
            }
            out.push((c, comp));
        }
    }
    out
}

/// Deterministic pseudo-random partial coloring used by equivalence tests:
/// a hand-rolled LCG keeps the fixture independent of the library's RNG
/// choices.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 11
    }

    pub fn below(&mut self, m: u64) -> u64 {
        self.next_u64() % m
    }
}

/// Random partial coloring of K_n: each edge is colored with probability
/// `fill_pct`/100 using one of `palette` colors.
pub fn random_partial_coloring(n: u32, palette: u32, fill_pct: u64, rng: &mut Lcg) -> EdgeColoring {
    let mut col = EdgeColoring::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.below(100) < fill_pct {
                let c = ColorId(rng.below(palette as u64) as u32);
                col.assign(Edge::new(u, v), c).unwrap();
            }
        }
    }
    col
}

/// Brute-force enumeration of the danger family `S_{a,b}(e)`: every
/// `a`-subset containing both endpoints of `e` whose repetition count is
/// exactly `b`, paired with every uncolored edge inside it that avoids
/// both endpoints of `e` and sits in the same class (sharable or residual)
/// as `e`. Returns `(subset, partner)` pairs in sorted order.
pub fn oracle_enumerate_s(
    coloring: &EdgeColoring,
    sharable: &BTreeSet<Edge>,
    residual: &BTreeSet<Edge>,
    e: Edge,
    a: usize,
    b: usize,
) -> Vec<(Vec<Vertex>, Edge)> {
    assert!(!coloring.is_colored(e), "oracle wants an uncolored anchor");
    let anchor_sharable = sharable.contains(&e);
    assert!(
        anchor_sharable || residual.contains(&e),
        "oracle wants a classed anchor"
    );
    let mut out = Vec::new();
    for s in all_subsets(coloring.n(), a) {
        if !s.contains(&e.lo()) || !s.contains(&e.hi()) {
            continue;
        }
        let (_, _, reps) = oracle_repetitions(coloring, &s);
        if reps != b {
            continue;
        }
        for i in 0..s.len() {
            for j in (i + 1)..s.len() {
                let f = Edge::new(s[i], s[j]);
                if f.touches(e.lo()) || f.touches(e.hi()) || coloring.is_colored(f) {
                    continue;
                }
                let same_class = if anchor_sharable {
                    sharable.contains(&f)
                } else {
                    residual.contains(&f)
                };
                if same_class {
                    out.push((s.clone(), f));
                }
            }
        }
    }
    out.sort();
    out
}

/// Brute-force overlap count between two anchors: triples `(S1, S2, f)`
/// where `(S1, f)` is an entry of `S_{4,1}(e1)` or `S_{5,2}(e1)`, `(S2, f)`
/// likewise for `e2`, and both entries name the same partner `f`.
pub fn oracle_overlap_pairs(
    coloring: &EdgeColoring,
    sharable: &BTreeSet<Edge>,
    residual: &BTreeSet<Edge>,
    e1: Edge,
    e2: Edge,
) -> usize {
    let mut left = oracle_enumerate_s(coloring, sharable, residual, e1, 4, 1);
    left.extend(oracle_enumerate_s(coloring, sharable, residual, e1, 5, 2));
    let mut right = oracle_enumerate_s(coloring, sharable, residual, e2, 4, 1);
    right.extend(oracle_enumerate_s(coloring, sharable, residual, e2, 5, 2));
    let mut count = 0;
    for (_, f1) in &left {
        for (_, f2) in &right {
            if f1 == f2 {
                count += 1;
            }
        }
    }
    count
}

/// Definitional 2-conflict test: the pair is adjacent, or `f` lies inside
/// some member of `S_{4,1}(e)` or `S_{5,2}(e)`.
pub fn oracle_is_2_conflict(
    coloring: &EdgeColoring,
    sharable: &BTreeSet<Edge>,
    residual: &BTreeSet<Edge>,
    e: Edge,
    f: Edge,
) -> bool {
    if e.shares_vertex(&f) {
        return true;
    }
    for (a, b) in [(4usize, 1usize), (5, 2)] {
        for (s, _) in oracle_enumerate_s(coloring, sharable, residual, e, a, b) {
            if s.contains(&f.lo()) && s.contains(&f.hi()) {
                return true;
            }
        }
    }
    false
}

fn oracle_anchored_conflict(
    coloring: &EdgeColoring,
    sharable: &BTreeSet<Edge>,
    residual: &BTreeSet<Edge>,
    members: &[(Edge, ColorId)],
    shapes: &[(usize, usize)],
) -> bool {
    for i in 0..members.len() {
        let (anchor, _) = members[i];
        for &(a, b) in shapes {
            for (s, _) in oracle_enumerate_s(coloring, sharable, residual, anchor, a, b) {
                let rest_inside = members.iter().enumerate().all(|(j, &(x, _))| {
                    j == i || (s.contains(&x.lo()) && s.contains(&x.hi()))
                });
                if rest_inside {
                    return true;
                }
            }
        }
    }
    false
}

/// Definitional 4-conflict test over two equal-color pairs: some member
/// anchors a family set in `S_{4,0}` or `S_{5,1}` holding the other three
/// edges. Assumes the pairing shape has already been validated.
pub fn oracle_is_4_conflict(
    coloring: &EdgeColoring,
    sharable: &BTreeSet<Edge>,
    residual: &BTreeSet<Edge>,
    members: &[(Edge, ColorId)],
) -> bool {
    oracle_anchored_conflict(coloring, sharable, residual, members, &[(4, 0), (5, 1)])
}

/// Definitional 6-conflict test over three equal-color pairs: some member
/// anchors a set in `S_{5,0}` holding the other five edges.
pub fn oracle_is_6_conflict(
    coloring: &EdgeColoring,
    sharable: &BTreeSet<Edge>,
    residual: &BTreeSet<Edge>,
    members: &[(Edge, ColorId)],
) -> bool {
    oracle_anchored_conflict(coloring, sharable, residual, members, &[(5, 0)])
}

fn oracle_new_pairs(partial: &EdgeColoring, full: &EdgeColoring, s: &[Vertex]) -> usize {
    let mut per_color: BTreeMap<ColorId, usize> = BTreeMap::new();
    for i in 0..s.len() {
        for j in (i + 1)..s.len() {
            let e = Edge::new(s[i], s[j]);
            if partial.is_colored(e) {
                continue;
            }
            if let Some(c) = full.color(e) {
                *per_color.entry(c).or_insert(0) += 1;
            }
        }
    }
    per_color
        .values()
        .map(|&m| {
            assert!(m <= 2, "three same-colored new edges inside {s:?}");
            m - 1
        })
        .sum()
}

/// Post-hoc conflict scan of a finished run. `partial` is the packing-stage
/// coloring, `full` the completed one. Asserts that the new color classes
/// are matchings, that no 4-set with an old repetition gained a new
/// same-colored pair, that a clean 4-set gained at most one, and that no
/// 5-set holds more than two repetitions old and new combined.
pub fn oracle_assert_d_free(partial: &EdgeColoring, full: &EdgeColoring) {
    let n = full.n();
    assert_eq!(partial.n(), n);
    let mut by_color: BTreeMap<ColorId, Vec<Edge>> = BTreeMap::new();
    for (e, c) in full.colored_edges() {
        if partial.is_colored(e) {
            assert_eq!(partial.color(e), Some(c), "packing-stage color changed on {e:?}");
        } else {
            by_color.entry(c).or_default().push(e);
        }
    }
    for (c, edges) in &by_color {
        for i in 0..edges.len() {
            for j in (i + 1)..edges.len() {
                assert!(
                    !edges[i].shares_vertex(&edges[j]),
                    "class {c:?} is not a matching: {:?} meets {:?}",
                    edges[i],
                    edges[j]
                );
            }
        }
    }
    for s in all_subsets(n, 4) {
        let (_, _, old) = oracle_repetitions(partial, &s);
        let pairs = oracle_new_pairs(partial, full, &s);
        let cap = if old == 0 { 1 } else { 0 };
        assert!(pairs <= cap, "4-set {s:?}: {old} old repetitions, {pairs} new pairs");
    }
    for s in all_subsets(n, 5) {
        let (_, _, old) = oracle_repetitions(partial, &s);
        let pairs = oracle_new_pairs(partial, full, &s);
        assert!(old + pairs <= 2, "5-set {s:?}: {old} old repetitions, {pairs} new pairs");
    }
}
