//! Plain-text formats for colorings and phase universes, plus recovery of
//! a packing state from the files it was written to.
//!
//! A coloring file opens with an `n k` header (vertex count, number of
//! distinct colors referenced) followed by one `u v c` line per colored
//! edge; omitted pairs are uncolored. A universe fixture opens with a bare
//! `n` header followed by named sections for the sharable pairs, the two
//! color pools, and the removed vertex-color pairs; anything unlisted
//! keeps its default, so an absent section reads as empty. Fixtures do
//! not record a sampling probability; parsed universes carry `p = 0`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::coloring::{
    monochromatic_components, ColorId, ColoringError, ComponentShape, Edge, EdgeColoring, Vertex,
};
use crate::gadget::{ColoredGadget, GadgetError, PhaseAUniverse};
use crate::phase_a::{check_invariants, MatchingState, PhaseAError, PhaseAOutput, PhaseAStats};

/// Failures while reading files back or rebuilding state from them.
#[derive(Debug, Error)]
pub enum IoError {
    /// A line does not fit the format.
    #[error("line {line}: {detail}")]
    Parse { line: usize, detail: String },
    /// The same vertex pair is colored twice.
    #[error("line {line}: duplicate edge {edge:?}")]
    DuplicateEdge { line: usize, edge: Edge },
    /// The header's color count disagrees with the body.
    #[error("header declares {declared} colors, body references {found}")]
    ColorCount { declared: usize, found: usize },
    /// The coloring and the universe live on different vertex sets.
    #[error("coloring is over K_{coloring_n}, universe over K_{universe_n}")]
    SizeMismatch { coloring_n: u32, universe_n: u32 },
    /// A colored edge uses a color outside both packing pools.
    #[error("color {color:?} belongs to neither packing pool")]
    ForeignColor { color: ColorId },
    /// The colored edges do not decompose into gadget placements.
    #[error("colored edges do not decompose into placements: {detail}")]
    MalformedPacking { detail: String },
    #[error(transparent)]
    Universe(#[from] GadgetError),
    #[error(transparent)]
    Packing(#[from] PhaseAError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

fn parse_err(line: usize, detail: String) -> IoError {
    IoError::Parse { line, detail }
}

/// Splits `line` into exactly two integers, reporting `shape` on failure.
fn two_fields(line_no: usize, line: &str, shape: &str) -> Result<(u32, u32), IoError> {
    let mut it = line.split_whitespace();
    if let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) {
        if let (Ok(x), Ok(y)) = (a.parse(), b.parse()) {
            return Ok((x, y));
        }
    }
    Err(parse_err(line_no, format!("expected `{shape}`, got `{line}`")))
}

/// Non-blank lines of `text` with their 1-based line numbers.
fn meaningful_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

/// Renders a coloring in the shared text format, edges in sorted order.
pub fn write_coloring(coloring: &EdgeColoring) -> String {
    let mut out = format!("{} {}\n", coloring.n(), coloring.colors_used());
    for (e, c) in coloring.colored_edges() {
        writeln!(out, "{} {} {}", e.lo(), e.hi(), c.0).unwrap();
    }
    out
}

/// Parses a coloring file.
///
/// # Errors
///
/// Errors on a malformed header or line, endpoints out of order or range,
/// a duplicated pair, or a header color count that disagrees with the
/// body. Blank lines are ignored but still counted for error reporting.
pub fn parse_coloring(text: &str) -> Result<EdgeColoring, IoError> {
    let mut lines = meaningful_lines(text);
    let (header_no, header) =
        lines.next().ok_or_else(|| parse_err(1, "missing `n k` header".into()))?;
    let (n, declared) = two_fields(header_no, header, "n k")
        .map_err(|_| parse_err(header_no, format!("header: expected `n k`, got `{header}`")))?;

    let mut coloring = EdgeColoring::new(n);
    for (line_no, line) in lines {
        let mut it = line.split_whitespace();
        let fields = (it.next(), it.next(), it.next(), it.next());
        let (Some(a), Some(b), Some(c), None) = fields else {
            return Err(parse_err(line_no, format!("expected `u v c`, got `{line}`")));
        };
        let (Ok(u), Ok(v), Ok(color)) = (a.parse::<u32>(), b.parse::<u32>(), c.parse::<u32>())
        else {
            return Err(parse_err(line_no, format!("expected `u v c`, got `{line}`")));
        };
        if u >= v {
            return Err(parse_err(
                line_no,
                format!("edge endpoints must satisfy u < v, got {u} {v}"),
            ));
        }
        if v >= n {
            return Err(parse_err(line_no, format!("vertex {v} out of range for n = {n}")));
        }
        let edge = Edge::new(u, v);
        if coloring.is_colored(edge) {
            return Err(IoError::DuplicateEdge { line: line_no, edge });
        }
        coloring.assign(edge, ColorId(color))?;
    }

    let found = coloring.colors_used();
    if found != declared as usize {
        return Err(IoError::ColorCount { declared: declared as usize, found });
    }
    Ok(coloring)
}

const SECTION_SHARABLE: &str = "E''";
const SECTION_POOL_A: &str = "C_A1";
const SECTION_POOL_B: &str = "C_A2";
const SECTION_REMOVED: &str = "V'-removed";

/// Renders a universe fixture; empty sections are omitted.
pub fn write_universe(u: &PhaseAUniverse) -> String {
    let mut out = format!("{}\n", u.n());
    let section = |out: &mut String, name: &str, body: &[String]| {
        if !body.is_empty() {
            writeln!(out, "{name}").unwrap();
            for line in body {
                writeln!(out, "{line}").unwrap();
            }
        }
    };
    let sharable: Vec<String> =
        u.sharable_edges().map(|e| format!("{} {}", e.lo(), e.hi())).collect();
    section(&mut out, SECTION_SHARABLE, &sharable);
    let pool_a: Vec<String> = u.c_a1().iter().map(|c| c.0.to_string()).collect();
    section(&mut out, SECTION_POOL_A, &pool_a);
    let pool_b: Vec<String> = u.c_a2().iter().map(|c| c.0.to_string()).collect();
    section(&mut out, SECTION_POOL_B, &pool_b);
    let removed: Vec<String> =
        u.removed_pairs().map(|(v, c)| format!("{v} {}", c.0)).collect();
    section(&mut out, SECTION_REMOVED, &removed);
    out
}

/// Parses a universe fixture. Sections may appear in any order, each at
/// most once; absent sections read as empty.
///
/// # Errors
///
/// Errors on a malformed header, a line outside any section, a repeated
/// section, a malformed data line, or parts the universe itself rejects
/// (empty or overlapping pools, out-of-range edges, bad removed pairs).
pub fn parse_universe(text: &str) -> Result<PhaseAUniverse, IoError> {
    let mut lines = meaningful_lines(text);
    let (header_no, header) =
        lines.next().ok_or_else(|| parse_err(1, "missing `n` header".into()))?;
    let n: u32 = header
        .parse()
        .map_err(|_| parse_err(header_no, format!("header: expected a bare `n`, got `{header}`")))?;

    let mut sharable: BTreeSet<Edge> = BTreeSet::new();
    let mut pool_a: BTreeSet<ColorId> = BTreeSet::new();
    let mut pool_b: BTreeSet<ColorId> = BTreeSet::new();
    let mut removed: BTreeSet<(Vertex, ColorId)> = BTreeSet::new();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    let mut current: Option<&str> = None;

    for (line_no, line) in lines {
        if [SECTION_SHARABLE, SECTION_POOL_A, SECTION_POOL_B, SECTION_REMOVED].contains(&line) {
            if !seen.insert(line) {
                return Err(parse_err(line_no, format!("section {line} appears twice")));
            }
            current = Some(line);
            continue;
        }
        match current {
            None => {
                return Err(parse_err(
                    line_no,
                    format!("unknown section or stray line `{line}` before a section header"),
                ));
            }
            Some(SECTION_SHARABLE) => {
                let (u, v) = two_fields(line_no, line, "u v")?;
                if u >= v {
                    return Err(parse_err(
                        line_no,
                        format!("edge endpoints must satisfy u < v, got {u} {v}"),
                    ));
                }
                sharable.insert(Edge::new(u, v));
            }
            Some(SECTION_REMOVED) => {
                let (v, c) = two_fields(line_no, line, "v c")?;
                removed.insert((v, ColorId(c)));
            }
            Some(pool) => {
                let color: u32 = line.parse().map_err(|_| {
                    parse_err(line_no, format!("expected a single color id, got `{line}`"))
                })?;
                if pool == SECTION_POOL_A {
                    pool_a.insert(ColorId(color));
                } else {
                    pool_b.insert(ColorId(color));
                }
            }
        }
    }

    let universe = PhaseAUniverse::from_parts(
        n,
        0.0,
        sharable,
        pool_a.into_iter().collect(),
        pool_b.into_iter().collect(),
        removed,
    )?;
    Ok(universe)
}

fn malformed(detail: String) -> IoError {
    IoError::MalformedPacking { detail }
}

/// Rebuilds the packing state behind a coloring emitted by the packing
/// phase. Placements are read off the color classes: each placed gadget
/// is identified by its central matching edge, whose endpoints center the
/// two 2-paths, with the path tips joined by outer edges of the same
/// matching color. The result passes the full packing invariant check
/// against `universe`; proposal counters in the returned stats are zero
/// because the files do not record them.
///
/// # Errors
///
/// Errors if the sizes disagree, a color is outside both pools, a class
/// has the wrong component shape, or the colored edges are not exactly
/// covered by the recovered placements.
pub fn recover_packing(
    universe: &PhaseAUniverse,
    coloring: &EdgeColoring,
) -> Result<PhaseAOutput, IoError> {
    if coloring.n() != universe.n() {
        return Err(IoError::SizeMismatch {
            coloring_n: coloring.n(),
            universe_n: universe.n(),
        });
    }

    // A vertex may center several 2-paths, one per color, when distinct
    // placements share it through different vertex-color claims.
    let mut centers: BTreeMap<Vertex, Vec<(ColorId, [Vertex; 2])>> = BTreeMap::new();
    for comp in monochromatic_components(coloring) {
        if universe.in_c_a1(comp.color) {
            if comp.shape != ComponentShape::IsolatedEdge {
                return Err(malformed(format!(
                    "matching color {:?} has a {:?} component",
                    comp.color, comp.shape
                )));
            }
        } else if universe.in_c_a2(comp.color) {
            if comp.shape != ComponentShape::TwoPath {
                return Err(malformed(format!(
                    "2-path color {:?} has a {:?} component",
                    comp.color, comp.shape
                )));
            }
            let center = comp.two_path_center().expect("shape was checked");
            let tips = comp.two_path_tips().expect("shape was checked");
            centers.entry(center).or_default().push((comp.color, tips));
        } else {
            return Err(IoError::ForeignColor { color: comp.color });
        }
    }

    // A center pair joined by a matching edge whose tip edges carry the
    // same matching color pins down a placement: since the matching color
    // class holds one edge per vertex, the center edge and both 2-paths
    // must come from a single placement.
    let empty = Vec::new();
    let mut gadgets: BTreeSet<ColoredGadget> = BTreeSet::new();
    for (edge, c1) in coloring.colored_edges() {
        if !universe.in_c_a1(c1) {
            continue;
        }
        let lo_paths = centers.get(&edge.lo()).unwrap_or(&empty);
        let hi_paths = centers.get(&edge.hi()).unwrap_or(&empty);
        for &(cx, [a, b]) in lo_paths {
            for &(cy, [d, e]) in hi_paths {
                if coloring.color(Edge::new(a, b)) == Some(c1)
                    && coloring.color(Edge::new(d, e)) == Some(c1)
                {
                    let g = ColoredGadget::new([a, b, edge.lo(), edge.hi(), d, e], c1, cx, cy);
                    gadgets.insert(g.canonical());
                }
            }
        }
    }

    let mut state = MatchingState::new(universe.n());
    for g in &gadgets {
        state
            .place_unchecked(g)
            .map_err(|err| malformed(format!("overlapping placements: {err}")))?;
    }
    if state.coloring().colored_count() != coloring.colored_count() {
        return Err(malformed(format!(
            "{} colored edges, but {} recovered placements cover {}",
            coloring.colored_count(),
            gadgets.len(),
            state.coloring().colored_count()
        )));
    }
    check_invariants(&state, universe)?;

    let stats = PhaseAStats {
        placed: gadgets.len() as u64,
        colored_edges: state.coloring().colored_count() as u64,
        ..PhaseAStats::default()
    };
    Ok(PhaseAOutput { universe: universe.clone(), state, stats })
}
