//! Diagnostics report and exact degree census, checked against hand-counted
//! fixtures, recomputation over the recorded samples, and a structural role
//! oracle that classifies anchors by gadget-graph degrees instead of slot
//! positions.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rf_core::coloring::{ColorId, Edge};
use rf_core::gadget::{
    enumerate_gadgets, Anchor, ColoredGadget, PhaseAUniverse, SHARABLE_SLOT_PAIRS,
};
use rf_core::phase_a::{run_phase_a, setup, MatchingState, PhaseAConfig, PhaseAOutput, PhaseAStats};
use rf_core::sfamily::{count_matrix, overlap_pairs, CountMatrix, FamilyCount, UncoloredClasses};
use rf_core::stats::{degree_census, quasi_report, QuasiReport, RoleSplit, StatsError, CENSUS_MAX_N};

fn e(u: u32, v: u32) -> Edge {
    Edge::new(u, v)
}

fn c(x: u32) -> ColorId {
    ColorId(x)
}

fn max_fc(a: FamilyCount, b: FamilyCount) -> FamilyCount {
    FamilyCount { sets: a.sets.max(b.sets), entries: a.entries.max(b.entries) }
}

/// Recomputes the elementwise family-count maxima over `anchors`, the way
/// the report claims to aggregate them.
fn recompute_sfam_max(out: &PhaseAOutput, anchors: &[Edge]) -> CountMatrix {
    let coloring = out.state.coloring();
    let classes = UncoloredClasses::from_universe(coloring, &out.universe).unwrap();
    let zero = FamilyCount { sets: 0, entries: 0 };
    let mut acc = CountMatrix {
        quad_zero: zero,
        quad_one: zero,
        quint_zero: zero,
        quint_one: zero,
        quint_two: zero,
    };
    for &a in anchors {
        let m = count_matrix(coloring, &classes, a).unwrap();
        acc.quad_zero = max_fc(acc.quad_zero, m.quad_zero);
        acc.quad_one = max_fc(acc.quad_one, m.quad_one);
        acc.quint_zero = max_fc(acc.quint_zero, m.quint_zero);
        acc.quint_one = max_fc(acc.quint_one, m.quint_one);
        acc.quint_two = max_fc(acc.quint_two, m.quint_two);
    }
    acc
}

/// Checks the report's sample bookkeeping and recomputes the sampled
/// aggregates from the recorded anchors and pairs.
fn check_samples(out: &PhaseAOutput, report: &QuasiReport) {
    let coloring = out.state.coloring();
    let distinct: BTreeSet<Edge> = report.sampled_anchors.iter().copied().collect();
    assert_eq!(distinct.len(), report.sampled_anchors.len());
    assert!(report.sampled_anchors.windows(2).all(|w| w[0] < w[1]));
    for &a in &report.sampled_anchors {
        assert!(!coloring.is_colored(a), "sampled anchor {a:?} is colored");
    }
    assert_eq!(report.sfam_max, recompute_sfam_max(out, &report.sampled_anchors));

    let classes = UncoloredClasses::from_universe(coloring, &out.universe).unwrap();
    let mut want = 0;
    for &(a, b) in &report.sampled_pairs {
        assert_ne!(a, b);
        assert!(a < b, "pair {a:?} {b:?} not normalized");
        assert!(!coloring.is_colored(a) && !coloring.is_colored(b));
        want = want.max(overlap_pairs(coloring, &classes, a, b).unwrap());
    }
    assert_eq!(report.overlap_max, want);
}

#[test]
fn empty_packing_reports_full_degrees() {
    let cfg = PhaseAConfig::new(12, 0.4, 7);
    let (universe, state) = setup(&cfg);
    let out = PhaseAOutput { universe, state, stats: PhaseAStats::default() };

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let report = quasi_report(&out, 6, &mut rng);

    assert_eq!(report.n, 12);
    assert_eq!(report.placed, 0);
    assert_eq!(report.uncolored_degree, vec![11usize; 12]);
    assert_eq!(report.max_uncolored_degree, 11);
    let sum: usize = report.uncolored_degree.iter().sum();
    assert_eq!(sum, 2 * (12 * 11 / 2));

    // Every sharable edge appears as a key, all with zero gadget count.
    let keys: Vec<Edge> = report.shareable_gadget_counts.iter().map(|&(k, _)| k).collect();
    let want_keys: Vec<Edge> = out.universe.sharable_edges().collect();
    assert_eq!(keys, want_keys);
    assert!(report.shareable_gadget_counts.iter().all(|&(_, k)| k == 0));
    assert_eq!(report.max_shareable_count, 0);

    assert_eq!(report.sampled_anchors.len(), 6);
    assert_eq!(report.sampled_pairs.len(), 6);
    check_samples(&out, &report);

    // Same seed, same report, byte for byte; and the JSON form round-trips.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let again = quasi_report(&out, 6, &mut rng);
    assert_eq!(report, again);
    let text = serde_json::to_string(&report).unwrap();
    assert_eq!(text, serde_json::to_string(&again).unwrap());
    let parsed: QuasiReport = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed, report);
}

/// One placed gadget on K_10: slots 0..5 in order, matching color 0,
/// 2-path colors 1 and 2. Sharable set is the eight slot non-edges plus
/// two spares off the gadget; each side's opposite 2-path color is
/// removed so the placement is valid, not merely placed.
fn one_gadget_fixture() -> (PhaseAOutput, ColoredGadget) {
    let sharable: BTreeSet<Edge> = [
        e(0, 3),
        e(0, 4),
        e(0, 5),
        e(1, 3),
        e(1, 4),
        e(1, 5),
        e(2, 4),
        e(2, 5),
        e(6, 7),
        e(8, 9),
    ]
    .into();
    let removed: BTreeSet<(u32, ColorId)> =
        [(0, c(2)), (1, c(2)), (2, c(2)), (3, c(1)), (4, c(1)), (5, c(1))].into();
    let universe =
        PhaseAUniverse::from_parts(10, 0.3, sharable, vec![c(0)], vec![c(1), c(2)], removed)
            .unwrap();
    let g = ColoredGadget::new([0, 1, 2, 3, 4, 5], c(0), c(1), c(2));
    let mut state = MatchingState::new(10);
    state.place_unchecked(&g).unwrap();
    (PhaseAOutput { universe, state, stats: PhaseAStats::default() }, g)
}

#[test]
fn single_gadget_fixture_counts_are_exact() {
    let (out, g) = one_gadget_fixture();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let report = quasi_report(&out, 4, &mut rng);

    assert_eq!(report.placed, 1);
    // Slots 2 and 3 sit on three colored edges, the other slots on two,
    // and the four off-gadget vertices on none.
    assert_eq!(report.uncolored_degree, vec![7, 7, 6, 6, 7, 7, 9, 9, 9, 9]);
    assert_eq!(report.max_uncolored_degree, 9);
    let sum: usize = report.uncolored_degree.iter().sum();
    assert_eq!(sum, 2 * (10 * 9 / 2 - 7));

    // Exactly the four slot pairs in sharing position count the gadget.
    let slots = g.slots();
    let hot: BTreeSet<Edge> = SHARABLE_SLOT_PAIRS
        .iter()
        .map(|&(a, b)| Edge::new(slots[a], slots[b]))
        .collect();
    assert_eq!(hot, [e(0, 3), e(1, 3), e(2, 4), e(2, 5)].into());
    for &(edge, count) in &report.shareable_gadget_counts {
        assert_eq!(count, usize::from(hot.contains(&edge)), "{edge:?}");
    }
    assert_eq!(report.max_shareable_count, 1);

    assert_eq!(report.sampled_anchors.len(), 4);
    check_samples(&out, &report);
}

fn gadget_degree(g: &ColoredGadget, v: u32) -> usize {
    g.edges().iter().filter(|(f, _)| f.touches(v)).count()
}

/// Role of an anchored edge, read off the colored structure: matching
/// edges split by endpoint degree (the center edge joins the two
/// degree-three slots), 2-path edges are one role.
fn oracle_edge_role(g: &ColoredGadget, f: Edge) -> &'static str {
    let (_, color) = *g.edges().iter().find(|(x, _)| *x == f).expect("gadget uses the edge");
    if color == g.c1() {
        if gadget_degree(g, f.lo()) == 3 && gadget_degree(g, f.hi()) == 3 {
            "center"
        } else {
            "outer"
        }
    } else {
        "path"
    }
}

/// Role of a consumed vertex-color pair: matching claims split by slot
/// degree, 2-path claims split center versus end the same way.
fn oracle_claim_role(g: &ColoredGadget, v: u32, color: ColorId) -> &'static str {
    let center = gadget_degree(g, v) == 3;
    if color == g.c1() {
        if center {
            "matching-center"
        } else {
            "matching-outer"
        }
    } else if center {
        "path-center"
    } else {
        "path-end"
    }
}

/// Census totals must equal the anchored enumeration, and the role split
/// must match the structural oracle bucket by bucket.
fn check_census(u: &PhaseAUniverse, anchors: &[Anchor]) {
    let census = degree_census(u, anchors).unwrap();
    assert_eq!(census.len(), anchors.len());
    for (d, &anchor) in census.iter().zip(anchors) {
        assert_eq!(d.anchor, anchor);
        let hits = enumerate_gadgets(u, Some(&anchor));
        assert_eq!(d.total, hits.len(), "{anchor:?}");
        match (&d.split, anchor) {
            (&RoleSplit::Edge { outer, center, path }, Anchor::Edge(f)) => {
                assert_eq!(outer + center + path, d.total);
                let count = |role| hits.iter().filter(|g| oracle_edge_role(g, f) == role).count();
                assert_eq!(outer, count("outer"), "{anchor:?}");
                assert_eq!(center, count("center"), "{anchor:?}");
                assert_eq!(path, count("path"), "{anchor:?}");
            }
            (
                &RoleSplit::Claim { matching_outer, matching_center, path_end, path_center },
                Anchor::Pair(v, color),
            ) => {
                assert_eq!(matching_outer + matching_center + path_end + path_center, d.total);
                let count =
                    |role| hits.iter().filter(|g| oracle_claim_role(g, v, color) == role).count();
                assert_eq!(matching_outer, count("matching-outer"), "{anchor:?}");
                assert_eq!(matching_center, count("matching-center"), "{anchor:?}");
                assert_eq!(path_end, count("path-end"), "{anchor:?}");
                assert_eq!(path_center, count("path-center"), "{anchor:?}");
            }
            other => panic!("split kind does not match anchor kind: {other:?}"),
        }
    }
}

#[test]
fn census_roles_cross_validate_with_enumeration() {
    let (out, g) = one_gadget_fixture();
    let u = &out.universe;
    assert!(enumerate_gadgets(u, None).contains(&g.canonical()));

    // The fixture gadget itself lands in the expected bucket for every
    // edge and claim it contributes.
    let anchors: Vec<Anchor> = g
        .edges()
        .iter()
        .map(|&(f, _)| Anchor::Edge(f))
        .chain(g.hit_pairs().iter().map(|&(v, color)| Anchor::Pair(v, color)))
        .chain([Anchor::Edge(e(6, 7)), Anchor::Edge(e(6, 8)), Anchor::Pair(9, c(0))])
        .collect();
    check_census(u, &anchors);

    let census = degree_census(u, &anchors).unwrap();
    let bucket = |i: usize| &census[i].split;
    // edges() lists the three matching edges first, then the four 2-path
    // legs; hit_pairs() lists the six matching claims, then the 2-path
    // claims by side.
    assert!(matches!(bucket(0), &RoleSplit::Edge { outer, .. } if outer >= 1));
    assert!(matches!(bucket(1), &RoleSplit::Edge { center, .. } if center >= 1));
    assert!(matches!(bucket(2), &RoleSplit::Edge { outer, .. } if outer >= 1));
    for i in 3..7 {
        assert!(matches!(bucket(i), &RoleSplit::Edge { path, .. } if path >= 1), "edge {i}");
    }
    assert!(matches!(bucket(7), &RoleSplit::Claim { matching_outer, .. } if matching_outer >= 1));
    assert!(matches!(bucket(9), &RoleSplit::Claim { matching_center, .. } if matching_center >= 1));
    assert!(matches!(bucket(10), &RoleSplit::Claim { matching_center, .. } if matching_center >= 1));
    assert!(matches!(bucket(13), &RoleSplit::Claim { path_end, .. } if path_end >= 1));
    assert!(matches!(bucket(15), &RoleSplit::Claim { path_center, .. } if path_center >= 1));
    assert!(matches!(bucket(16), &RoleSplit::Claim { path_center, .. } if path_center >= 1));
    assert!(matches!(bucket(17), &RoleSplit::Claim { path_end, .. } if path_end >= 1));
    // A sharable edge is never a gadget edge, vertices 6 through 9 sit in
    // no placement at all.
    assert_eq!(census[19].total, 0);
    assert_eq!(census[20].total, 0);
    assert_eq!(census[21].total, 0);

    // A sampled universe, with anchors of both kinds picked from it.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let sampled = PhaseAUniverse::random(14, 0.45, &mut rng);
    let mut anchors: Vec<Anchor> =
        sampled.kept_edges().iter().take(3).map(|&f| Anchor::Edge(f)).collect();
    if let Some(f) = sampled.sharable_edges().next() {
        anchors.push(Anchor::Edge(f));
    }
    anchors.push(Anchor::Pair(0, sampled.c_a1()[0]));
    anchors.push(Anchor::Pair(1, sampled.c_a2()[0]));
    check_census(&sampled, &anchors);
}

#[test]
fn census_handles_empty_and_oversized_universes() {
    // No sharable edges means no valid placements anywhere.
    let empty = PhaseAUniverse::from_parts(
        8,
        0.2,
        BTreeSet::new(),
        vec![c(0)],
        vec![c(1), c(2)],
        BTreeSet::new(),
    )
    .unwrap();
    let anchors = [Anchor::Edge(e(0, 1)), Anchor::Pair(3, c(1))];
    let census = degree_census(&empty, &anchors).unwrap();
    assert!(census.iter().all(|d| d.total == 0));
    assert_eq!(census[0].split, RoleSplit::Edge { outer: 0, center: 0, path: 0 });
    assert_eq!(
        census[1].split,
        RoleSplit::Claim { matching_outer: 0, matching_center: 0, path_end: 0, path_center: 0 }
    );

    // Past the enumeration budget the census refuses to start.
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let big = PhaseAUniverse::random(CENSUS_MAX_N + 1, 0.3, &mut rng);
    assert_eq!(
        degree_census(&big, &anchors),
        Err(StatsError::EnumerationBudget { n: CENSUS_MAX_N + 1, max: CENSUS_MAX_N })
    );
}

#[test]
fn real_packing_report_stays_consistent() {
    let mut cfg = PhaseAConfig::new(30, 30f64.powf(-0.25), 0);
    cfg.max_consecutive_failures = Some(200);
    let out = run_phase_a(&cfg).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let report = quasi_report(&out, 8, &mut rng);

    let placed = out.state.placed().len();
    assert!(placed >= 1, "packing landed nothing");
    assert_eq!(report.placed, placed);

    // Handshake: every placed gadget colors exactly seven edges.
    let sum: usize = report.uncolored_degree.iter().sum();
    assert_eq!(sum, 2 * (30 * 29 / 2 - 7 * placed));
    assert_eq!(report.max_uncolored_degree, *report.uncolored_degree.iter().max().unwrap());

    // Each gadget is counted once per sharing-position pair.
    let total_counts: usize = report.shareable_gadget_counts.iter().map(|&(_, k)| k).sum();
    assert_eq!(total_counts, 4 * placed);
    let keys: Vec<Edge> = report.shareable_gadget_counts.iter().map(|&(k, _)| k).collect();
    assert_eq!(keys, out.universe.sharable_edges().collect::<Vec<_>>());

    assert_eq!(report.sampled_anchors.len(), 8);
    assert_eq!(report.sampled_pairs.len(), 8);
    check_samples(&out, &report);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let again = quasi_report(&out, 8, &mut rng);
    assert_eq!(report, again);
}
