//! The matching graph Ω and the cover search on T̄(m). The full 19200-clique
//! enumeration runs in the CLI acceptance suite; here only its building
//! blocks are exercised.

use pgarc::autiso::are_isomorphic;
use pgarc::catalog::builtin;
use pgarc::classify::{
    build_omega, fingerprint, line_set_stabilizer, matching_cover_search, perfect_matchings, Checkpoint,
    CoverSearchOptions, Fingerprint,
};
use pgarc::cliques::first_clique;
use pgarc::incidence::{verify_pg, IncidenceStructure};
use pgarc::srg::{bose_geometric_check, is_srg, pairs, point_graph, triangular_graph, SrgParams};

/// Perfect matchings counted by (m−1)!! — an independent formula.
fn double_factorial_odd(m: usize) -> usize {
    (1..m).step_by(2).product()
}

#[test]
fn matching_counts_follow_double_factorials() {
    for m in [2, 4, 6, 8, 10] {
        assert_eq!(perfect_matchings(m).len(), double_factorial_odd(m), "m = {m}");
    }
}

#[test]
fn omega_has_945_matchings_with_expected_adjacency() {
    let omega = build_omega();
    assert_eq!(omega.matchings.len(), 945);
    let tbar = triangular_graph(10).unwrap().complement();
    let ps = pairs(10);
    let first = vec![(0, 1), (2, 3), (4, 5), (6, 7), (8, 9)];
    let mut found = false;
    for m in &omega.matchings {
        assert!(tbar.is_clique(m), "{m:?}");
        let as_pairs: Vec<(usize, usize)> = m.iter().map(|&i| ps[i]).collect();
        found |= as_pairs == first;
    }
    assert!(found);
    // neighbours are exactly the other matchings sharing at most one pair
    for a in [0, 100, 944] {
        let expected = (0..945)
            .filter(|&b| {
                b != a
                    && omega.matchings[a]
                        .iter()
                        .filter(|p| omega.matchings[b].contains(p))
                        .count()
                        <= 1
            })
            .count();
        assert_eq!(omega.graph.degree(a), expected);
    }
    assert!(omega.matchings.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn first_omega_clique_is_a_pg_4_6_3() {
    let omega = build_omega();
    let clique = first_clique(&omega.graph, 63).expect("Ω has 63-cliques");
    let g = omega.geometry(&clique);
    assert_eq!(verify_pg(&g).params(), Some((4, 6, 3)));
    let tbar = triangular_graph(10).unwrap().complement();
    assert!(bose_geometric_check(&tbar, g.lines()));
    assert_eq!(is_srg(&point_graph(&g).unwrap()).unwrap(), SrgParams::new(45, 28, 15, 21));
    let fp = fingerprint(&g).unwrap();
    let known = [
        Fingerprint { parallel_classes: 28, rank2: 28 },
        Fingerprint { parallel_classes: 1, rank2: 34 },
    ];
    assert!(known.contains(&fp), "{fp:?}");
    let iso_g1 = are_isomorphic(&g, &builtin("G1").unwrap());
    let iso_g2 = are_isomorphic(&g, &builtin("G2").unwrap());
    assert!(iso_g1 != iso_g2);
}

#[test]
fn bose_check_rejects_damaged_line_systems() {
    let omega = build_omega();
    let clique = first_clique(&omega.graph, 63).unwrap();
    let g = omega.geometry(&clique);
    let tbar = triangular_graph(10).unwrap().complement();
    let mut lines = g.lines().to_vec();
    lines.pop();
    assert!(!bose_geometric_check(&tbar, &lines));
    lines.push(lines[0].clone());
    assert!(!bose_geometric_check(&tbar, &lines));
}

#[test]
fn stabilizer_filter_on_w2_as_matchings() {
    // the 15 matchings of K6 form W(2); its stabilizer in S6 is all of S6
    let w = perfect_matchings(6);
    assert_eq!(line_set_stabilizer(6, &w), 720);
    // a single matching of K6 is fixed by 2^3·3! = 48 permutations
    assert_eq!(line_set_stabilizer(6, &w[..1]), 48);
}

#[test]
fn cover_of_tbar6_is_w2() {
    let out = matching_cover_search(6, &CoverSearchOptions { keep: 1, ..Default::default() }).unwrap();
    assert!(out.finished);
    assert_eq!(out.solutions_found, 1);
    let ps = pairs(6);
    let index = |a: usize, b: usize| ps.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
    let lines: Vec<Vec<usize>> = out.solutions[0]
        .iter()
        .map(|m| m.iter().map(|&(a, b)| index(a, b)).collect())
        .collect();
    let g = IncidenceStructure::new(15, lines).unwrap();
    assert!(are_isomorphic(&g, &builtin("W2").unwrap()));
}

#[test]
fn first_cover_of_tbar10_is_a_pg_4_6_3() {
    let out = matching_cover_search(
        10,
        &CoverSearchOptions {
            max_solutions: Some(1),
            keep: 1,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(out.solutions_found, 1);
    assert_eq!(out.lines_needed, 63);
    let ps = pairs(10);
    let lines: Vec<Vec<usize>> = out.solutions[0]
        .iter()
        .map(|m| m.iter().map(|p| ps.iter().position(|q| q == p).unwrap()).collect())
        .collect();
    let g = IncidenceStructure::new(45, lines).unwrap();
    assert_eq!(verify_pg(&g).params(), Some((4, 6, 3)));
}

#[test]
fn checkpoints_serialize_and_resume() {
    let budget = CoverSearchOptions {
        node_budget: Some(50),
        ..Default::default()
    };
    let first = matching_cover_search(18, &budget).unwrap();
    assert!(!first.finished);
    let cp = first.checkpoint.unwrap();
    let text = serde_json::to_string(&cp).unwrap();
    let back: Checkpoint = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cp);
    let more = matching_cover_search(
        18,
        &CoverSearchOptions {
            node_budget: Some(100),
            resume: Some(back),
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(more.nodes, 100);
    assert_eq!(more.lines_needed, 255);
    // a checkpoint for another m is rejected
    let wrong = CoverSearchOptions {
        resume: Some(Checkpoint { m: 10, ..cp }),
        ..Default::default()
    };
    assert!(matching_cover_search(18, &wrong).is_err());
}

/// Splitting the m = 8 search into budgeted slices explores the same tree
/// as one uninterrupted run.
#[test]
fn sliced_search_matches_uninterrupted_search() {
    let full = matching_cover_search(8, &CoverSearchOptions::default()).unwrap();
    assert!(full.finished);
    let mut resume = None;
    let mut budget = 0;
    loop {
        budget += 7;
        let out = matching_cover_search(
            8,
            &CoverSearchOptions {
                node_budget: Some(budget),
                resume: resume.take(),
                ..Default::default()
            },
        )
        .unwrap();
        if out.finished {
            assert_eq!(out.nodes, full.nodes);
            assert_eq!(out.solutions_found, full.solutions_found);
            break;
        }
        resume = out.checkpoint;
    }
}
