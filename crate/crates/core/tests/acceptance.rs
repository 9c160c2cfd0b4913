//! Acceptance suite: one test per criterion, each printing its own
//! pass/fail line (run with `cargo test --test acceptance -- --nocapture`
//! to see them).

use std::collections::BTreeMap;

use klim::setcore::ComplementFamily;
use klim::{atomic, bicx, gprod, limit};

fn announce(criterion: u32, detail: &str) {
    println!("criterion {criterion:02}: PASS - {detail}");
}

#[test]
fn criterion_01_differential_validity() {
    let cases: [(u32, u32, Option<usize>); 6] = [
        (2, 3, None),
        (2, 4, None),
        (2, 5, None),
        (3, 5, None),
        (4, 6, None),
        (3, 6, Some(6)),
    ];
    let mut total = 0usize;
    for (k, l, bound) in cases {
        let report = atomic::verify_d_squared(k, l, bound).unwrap();
        assert!(
            report.pass,
            "d^2 != 0 in A({k},{l}) bound {bound:?}: {:?}",
            report.violations
        );
        total += report.generators_checked;
    }
    announce(
        1,
        &format!("d^2 = 0 on all six complexes, {total} generators checked"),
    );
}

/// Independent oracle: the coefficient list of `prod_{i=1}^{l-1} (1 + i t)`.
fn braid_poincare_coefficients(l: u32) -> Vec<usize> {
    let mut coefficients = vec![1usize];
    for i in 1..l {
        let mut next = vec![0usize; coefficients.len() + 1];
        for (power, &c) in coefficients.iter().enumerate() {
            next[power] += c;
            next[power + 1] += c * i as usize;
        }
        coefficients = next;
    }
    coefficients
}

#[test]
fn criterion_02_braid_oracle() {
    // Frozen values from the oracle: (1,3,2), (1,6,11,6), (1,10,35,50,24).
    assert_eq!(braid_poincare_coefficients(3), vec![1, 3, 2]);
    assert_eq!(braid_poincare_coefficients(4), vec![1, 6, 11, 6]);
    assert_eq!(braid_poincare_coefficients(5), vec![1, 10, 35, 50, 24]);

    for l in [3u32, 4, 5] {
        let betti = atomic::betti(2, l).unwrap();
        let expected: BTreeMap<i32, usize> = braid_poincare_coefficients(l)
            .into_iter()
            .enumerate()
            .map(|(degree, dim)| (degree as i32, dim))
            .collect();
        assert_eq!(betti, expected, "betti(2,{l}) disagrees with the oracle");
    }
    announce(2, "betti(2,l) matches the braid coefficients for l = 3, 4, 5");
}

#[test]
fn criterion_03_delta_squared() {
    let report = bicx::verify_delta_squared(6, 3);
    assert!(report.pass, "{:?}", report.violations);
    announce(
        3,
        &format!(
            "delta^2 = 0 on all {} generators with support in [6], at most 3 members",
            report.generators_checked
        ),
    );
}

#[test]
fn criterion_04_decomposition() {
    let report = bicx::verify_decomposition(6, 3);
    assert!(report.pass, "{:?}", report.violations);
    announce(
        4,
        &format!(
            "phi/psi round-trips and the chain-map identity hold ({} checks)",
            report.generators_checked
        ),
    );
}

#[test]
fn criterion_05_summand_exactness() {
    let report = bicx::verify_delta_exactness(6, 3).unwrap();
    assert!(report.pass);
    assert!(!report.summands.is_empty());
    for summand in &report.summands {
        assert!(
            summand.exact,
            "summand {} has homology {:?}",
            summand.key, summand.homology_dims
        );
    }
    announce(
        5,
        &format!(
            "all {} truncated summand complexes are exact ({} saturated keys skipped)",
            report.summands.len(),
            report.skipped_saturated.len()
        ),
    );
}

#[test]
fn criterion_06_double_complex() {
    let report = bicx::verify_double_complex(6, 3).unwrap();
    assert!(report.pass, "{:?}", report.violations);
    assert!(report.relation_uniform);
    assert_eq!(report.relation, Some(bicx::Commutation::Commute));
    assert!(report.total_squares_to_zero);
    assert!(report.column_exactness.pass);
    announce(
        6,
        &format!(
            "d and delta commute uniformly on {} generators, D^2 = 0, columns exact",
            report.generators_checked
        ),
    );
}

#[test]
fn criterion_07_generation() {
    for (q, stage_k) in [(1u32, 2u32), (1, 3), (2, 3), (2, 4)] {
        let report = limit::verify_generation(q, stage_k).unwrap();
        assert!(
            report.pass,
            "generation fails at (q={q}, stage_k={stage_k}): {:?}",
            report.per_codegree
        );
    }
    announce(
        7,
        "book classes span the homology at stages (1,2), (1,3), (2,3), (2,4)",
    );
}

#[test]
fn criterion_08_leibniz() {
    let report = gprod::verify_leibniz(200, 0, 10);
    assert!(report.pass, "{:?}", report.violations);
    assert_eq!(report.in_regime_checked, 200);

    // First printed counterexample: left side zero, right side the single
    // term on {{1,2,4},{1,3,5}}.
    let cex = &report.delta_counterexample;
    assert!(cex.lhs.is_zero());
    assert!(!cex.equal);
    let expected =
        ComplementFamily::new(vec![vec![1, 2, 4], vec![1, 3, 5]]).unwrap();
    assert_eq!(cex.rhs.len(), 1);
    assert!(cex.rhs.coeff(&expected).is_some());

    // Second printed counterexample: left side zero, right side the single
    // term on {{1,2,6},{3,4,7}}.
    let dcex = &report.d_counterexample;
    assert!(dcex.reproduces);
    assert!(dcex.lhs.is_zero());
    let expected =
        ComplementFamily::new(vec![vec![1, 2, 6], vec![3, 4, 7]]).unwrap();
    assert_eq!(dcex.rhs.len(), 1);
    assert!(dcex.rhs.coeff(&expected).is_some());

    announce(
        8,
        "200 in-regime pairs satisfy the identity; both printed counterexamples reproduce",
    );
}

#[test]
fn criterion_09_sign_lemmas() {
    let sweep = gprod::sign_lemmas_exhaustive(8);
    assert!(sweep.pass, "{:?}", sweep.violations);
    announce(
        9,
        &format!(
            "deletion and alternation identities hold on all {} core pairs from [8]",
            sweep.pairs_checked
        ),
    );
}

#[test]
fn criterion_10_vanishing_support() {
    for (k, l) in [(2u32, 3u32), (2, 4), (3, 5)] {
        let report = bicx::vanishing_check(k, l).unwrap();
        assert!(
            report.pass,
            "A({k},{l}) has homology at m = {} < n: {:?}",
            report.m, report.support
        );
        assert!(!report.support.is_empty());
    }
    announce(10, "homology support satisfies m >= n for A(2,3), A(2,4), A(3,5)");
}

/// Module invariant beyond the numbered criteria: the limit differential
/// squares to zero exhaustively on families from [8] with up to 4 members.
#[test]
fn invariant_limit_d_squared_exhaustive() {
    let mut checked = 0usize;
    for b in limit::enumerate_limit_indices(8, 4) {
        let dd = limit::limit_d_chain(&limit::limit_d(&b));
        assert!(dd.is_zero(), "d^2 != 0 at {b}");
        checked += 1;
    }
    println!("invariant: limit d^2 = 0 on {checked} generators from [8] with at most 4 members");
    assert!(checked > 1_000_000);
}
