//! The graded product on the sum of the limiting complexes: compatibility,
//! member-wise unions, the inversion-count sign, associativity, and the
//! conditional Leibniz rule together with the two zero-divisor
//! counterexamples that bound its hypothesis.
//!
//! Everything here works on raw complement families. That keeps the
//! one-member family holding the empty set distinct from the unit (the
//! empty family): the former is a zero divisor against families of any
//! other member count, which is exactly what the size-mismatch case of the
//! Leibniz rule needs when `delta` bottoms out.

use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bicx::delta_family;
use crate::error::{Error, Result};
use crate::formal::FormalSum;
use crate::limit::limit_d_family;
use crate::setcore::{inversion_count, ComplementFamily};

/// A formal rational combination of raw complement families.
pub type FamilyChain = FormalSum<ComplementFamily>;

/// Why a pair of families is or is not compatible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompatReason {
    EmptyOperand,
    SizeMatchAndDisjoint,
    SizeMismatch,
    UnionOverlap,
}

/// The compatibility verdict for a pair of families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatPair {
    pub compatible: bool,
    pub reason: CompatReason,
}

/// Compatible means one operand is empty, or both families have the same
/// number of members and disjoint total unions.
pub fn compatible(lambda: &ComplementFamily, gamma: &ComplementFamily) -> CompatPair {
    if lambda.is_empty() || gamma.is_empty() {
        return CompatPair {
            compatible: true,
            reason: CompatReason::EmptyOperand,
        };
    }
    if lambda.len() != gamma.len() {
        return CompatPair {
            compatible: false,
            reason: CompatReason::SizeMismatch,
        };
    }
    let union = lambda.support();
    let overlap = gamma
        .support()
        .iter()
        .any(|x| union.binary_search(x).is_ok());
    if overlap {
        CompatPair {
            compatible: false,
            reason: CompatReason::UnionOverlap,
        }
    } else {
        CompatPair {
            compatible: true,
            reason: CompatReason::SizeMatchAndDisjoint,
        }
    }
}

/// Member-wise unions pairing the i-th members of the canonical orders.
/// Both families must be nonempty and compatible.
pub fn uplus(lambda: &ComplementFamily, gamma: &ComplementFamily) -> Result<ComplementFamily> {
    let verdict = compatible(lambda, gamma);
    if !verdict.compatible {
        return Err(Error::Incompatible(format!("{:?}", verdict.reason)));
    }
    if lambda.is_empty() || gamma.is_empty() {
        return Err(Error::Incompatible(
            "member-wise union needs two nonempty families".into(),
        ));
    }
    let members = lambda
        .members()
        .iter()
        .zip(gamma.members())
        .map(|(a, b)| {
            let mut union = a.clone();
            union.extend(b.iter().copied());
            union.sort_unstable();
            union
        })
        .collect();
    ComplementFamily::new(members)
}

/// The sign exponent `eps(Lambda, Gamma)`: the full inversion count of the
/// two cores (zero when either core is empty).
pub fn epsilon(lambda: &ComplementFamily, gamma: &ComplementFamily) -> u64 {
    let a = lambda.core().unwrap_or_default();
    let b = gamma.core().unwrap_or_default();
    inversion_count(&a, &b).expect("compatible cores are disjoint")
}

/// The graded product `b_Lambda b_Gamma`: `(-1)^{eps} b_{Lambda uplus
/// Gamma}` on compatible pairs, zero otherwise; the unit (the empty
/// family) acts identically on either side.
pub fn gproduct(lambda: &ComplementFamily, gamma: &ComplementFamily) -> FamilyChain {
    let verdict = compatible(lambda, gamma);
    if !verdict.compatible {
        return FamilyChain::zero();
    }
    if lambda.is_empty() {
        return FamilyChain::term_int(gamma.clone(), 1);
    }
    if gamma.is_empty() {
        return FamilyChain::term_int(lambda.clone(), 1);
    }
    let merged = uplus(lambda, gamma).expect("compatibility checked");
    let sign = if epsilon(lambda, gamma).is_multiple_of(2) { 1 } else { -1 };
    FamilyChain::term_int(merged, sign)
}

/// Bilinear extension of the graded product to family chains.
pub fn gproduct_chain(x: &FamilyChain, y: &FamilyChain) -> FamilyChain {
    let mut out = FamilyChain::zero();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            for (term, ct) in gproduct(a, b).iter() {
                out.add_term(term.clone(), ca * cb * ct);
            }
        }
    }
    out
}

/// Outcome of a seeded associativity sweep.
#[derive(Debug, Clone)]
pub struct AssociativityReport {
    pub trials: u32,
    pub seed: u64,
    pub n: u32,
    pub nonzero_triples: u32,
    pub violations: Vec<String>,
    pub pass: bool,
}

fn sample_family(rng: &mut ChaCha8Rng, n: u32) -> ComplementFamily {
    let q = rng.gen_range(1..=2.min(n as usize));
    let r = rng.gen_range(0..=3usize);
    let mut members: Vec<Vec<u32>> = Vec::new();
    let mut guard = 0;
    while members.len() < r && guard < 64 {
        guard += 1;
        let mut member: Vec<u32> = Vec::new();
        while member.len() < q {
            let x = rng.gen_range(1..=n);
            if !member.contains(&x) {
                member.push(x);
            }
        }
        member.sort_unstable();
        if !members.contains(&member) {
            members.push(member);
        }
    }
    ComplementFamily::new(members).expect("sampled members are distinct and equal-size")
}

/// Checks `(ab)c = a(bc)` exactly on seeded random triples over `[n]`,
/// incompatible triples included.
pub fn verify_associativity(trials: u32, seed: u64, n: u32) -> AssociativityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut nonzero = 0u32;
    for _ in 0..trials {
        let a = sample_family(&mut rng, n);
        let b = sample_family(&mut rng, n);
        let c = sample_family(&mut rng, n);
        let left = gproduct_chain(&gproduct(&a, &b), &FamilyChain::term_int(c.clone(), 1));
        let right = gproduct_chain(&FamilyChain::term_int(a.clone(), 1), &gproduct(&b, &c));
        if !left.is_zero() {
            nonzero += 1;
        }
        if left != right {
            violations.push(format!(
                "associativity fails on {a}, {b}, {c}: {left} vs {right}"
            ));
        }
    }
    AssociativityReport {
        trials,
        seed,
        n,
        nonzero_triples: nonzero,
        pass: violations.is_empty(),
        violations,
    }
}

/// Where a pair stands relative to the Leibniz theorem's hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypothesisClass {
    /// The product is nonzero (compatible pair or a unit operand).
    ProductNonzero,
    /// The families have different member counts.
    SizeMismatch,
    /// The unions overlap only inside the intersection of the two cores.
    OverlapInCores,
    /// A zero divisor outside the theorem's hypothesis.
    OutsideHypothesis,
}

impl HypothesisClass {
    pub fn in_regime(self) -> bool {
        !matches!(self, HypothesisClass::OutsideHypothesis)
    }
}

/// Classifies a pair against the three hypothesis clauses.
pub fn leibniz_classify(lambda: &ComplementFamily, gamma: &ComplementFamily) -> HypothesisClass {
    if !gproduct(lambda, gamma).is_zero() {
        return HypothesisClass::ProductNonzero;
    }
    if lambda.len() != gamma.len() {
        return HypothesisClass::SizeMismatch;
    }
    let core_overlap: Vec<u32> = {
        let a = lambda.core().unwrap_or_default();
        let b = gamma.core().unwrap_or_default();
        a.into_iter()
            .filter(|x| b.binary_search(x).is_ok())
            .collect()
    };
    let union_a = lambda.support();
    let union_b = gamma.support();
    let union_overlap_in_cores = union_a
        .iter()
        .filter(|x| union_b.binary_search(x).is_ok())
        .all(|x| core_overlap.binary_search(x).is_ok());
    if union_overlap_in_cores {
        HypothesisClass::OverlapInCores
    } else {
        HypothesisClass::OutsideHypothesis
    }
}

/// Both sides of the delta-Leibniz identity for one pair.
#[derive(Debug, Clone)]
pub struct LeibnizReport {
    pub classification: HypothesisClass,
    pub lhs: FamilyChain,
    /// Right side with the theorem's sign `(-1)^{|core of Lambda|}`.
    pub rhs: FamilyChain,
    /// Right side with the flat `+` sign the final display of the paper
    /// uses; recorded alongside rather than silently chosen.
    pub rhs_plus_sign: FamilyChain,
    pub equal: bool,
    pub in_regime: bool,
    /// False only when an in-regime pair violates the identity.
    pub pass: bool,
}

/// Evaluates `delta(b_Lambda b_Gamma)` against
/// `delta(b_Lambda) b_Gamma + (-1)^{|core|} b_Lambda delta(b_Gamma)`
/// exactly. In-regime pairs must agree; outside the hypothesis the
/// discrepancy is reported, not failed.
pub fn leibniz_check(lambda: &ComplementFamily, gamma: &ComplementFamily) -> LeibnizReport {
    let classification = leibniz_classify(lambda, gamma);
    let b_lambda = FamilyChain::term_int(lambda.clone(), 1);
    let b_gamma = FamilyChain::term_int(gamma.clone(), 1);

    let lhs = gproduct(lambda, gamma).flat_map(delta_family);

    let left_term = gproduct_chain(&delta_family(lambda), &b_gamma);
    let right_term = gproduct_chain(&b_lambda, &delta_family(gamma));
    let core_size = lambda.core().map_or(0, |c| c.len());
    let sign = if core_size.is_multiple_of(2) {
        BigRational::from_integer(1.into())
    } else {
        BigRational::from_integer((-1).into())
    };
    let mut rhs = left_term.clone();
    rhs.add_assign(&right_term.scaled(&sign));
    let mut rhs_plus_sign = left_term;
    rhs_plus_sign.add_assign(&right_term);

    let equal = lhs == rhs;
    let in_regime = classification.in_regime();
    LeibnizReport {
        classification,
        equal,
        in_regime,
        pass: equal || !in_regime,
        lhs,
        rhs,
        rhs_plus_sign,
    }
}

/// Outcome of the seeded Leibniz sweep plus the printed counterexamples.
#[derive(Debug, Clone)]
pub struct LeibnizBatchReport {
    pub trials: u32,
    pub seed: u64,
    pub n: u32,
    pub in_regime_checked: u32,
    pub product_nonzero: u32,
    pub size_mismatch: u32,
    pub overlap_in_cores: u32,
    pub outside_catalogued: u32,
    pub violations: Vec<String>,
    /// The printed zero-divisor pair: left side zero, right side the
    /// nonzero `b_{{1,2,4},{1,3,5}}`.
    pub delta_counterexample: LeibnizReport,
    /// The printed d-rule counterexample with right side
    /// `b_{{1,2,6},{3,4,7}}`.
    pub d_counterexample: DLeibnizReport,
    pub pass: bool,
}

/// Runs `trials` seeded in-regime pairs over `[n]` (draws outside the
/// hypothesis are catalogued and redrawn), then reproduces both printed
/// counterexamples.
pub fn verify_leibniz(trials: u32, seed: u64, n: u32) -> LeibnizBatchReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut in_regime_checked = 0u32;
    let mut product_nonzero = 0u32;
    let mut size_mismatch = 0u32;
    let mut overlap_in_cores = 0u32;
    let mut outside = 0u32;
    let mut attempts = 0u32;
    while in_regime_checked < trials && attempts < trials.saturating_mul(64).max(1024) {
        attempts += 1;
        let lambda = sample_family(&mut rng, n);
        let gamma = sample_family(&mut rng, n);
        let report = leibniz_check(&lambda, &gamma);
        match report.classification {
            HypothesisClass::ProductNonzero => product_nonzero += 1,
            HypothesisClass::SizeMismatch => size_mismatch += 1,
            HypothesisClass::OverlapInCores => overlap_in_cores += 1,
            HypothesisClass::OutsideHypothesis => {
                outside += 1;
                continue;
            }
        }
        in_regime_checked += 1;
        if !report.equal {
            violations.push(format!(
                "in-regime pair {lambda}, {gamma} ({:?}): lhs = {}, rhs = {}",
                report.classification, report.lhs, report.rhs
            ));
        }
    }

    let delta_counterexample = printed_delta_counterexample();
    let d_counterexample = d_leibniz_counterexample();
    let pass = violations.is_empty()
        && in_regime_checked == trials
        && !delta_counterexample.equal
        && d_counterexample.reproduces;
    LeibnizBatchReport {
        trials,
        seed,
        n,
        in_regime_checked,
        product_nonzero,
        size_mismatch,
        overlap_in_cores,
        outside_catalogued: outside,
        violations,
        delta_counterexample,
        d_counterexample,
        pass,
    }
}

fn family_of(members: &[&[u32]]) -> ComplementFamily {
    ComplementFamily::new(members.iter().map(|m| m.to_vec()).collect())
        .expect("literal members are well-formed")
}

/// The printed zero-divisor pair `Lambda = {{1,2},{1,3}}`,
/// `Gamma = {{2,4},{2,5}}`.
pub fn printed_delta_counterexample() -> LeibnizReport {
    leibniz_check(
        &family_of(&[&[1, 2], &[1, 3]]),
        &family_of(&[&[2, 4], &[2, 5]]),
    )
}

/// Outcome of reproducing the d-rule counterexample.
#[derive(Debug, Clone)]
pub struct DLeibnizReport {
    pub lhs: FamilyChain,
    pub d_lambda: FamilyChain,
    pub d_gamma: FamilyChain,
    pub rhs: FamilyChain,
    /// True when the left side vanishes while the right side is the
    /// nonzero single term on `{{1,2,6},{3,4,7}}`.
    pub reproduces: bool,
}

/// Reproduces the printed failure of the Leibniz rule for the member
/// differential: `Lambda = {{1,2},{2,3},{3,4}}`, `Gamma = {{6},{7}}`.
pub fn d_leibniz_counterexample() -> DLeibnizReport {
    let lambda = family_of(&[&[1, 2], &[2, 3], &[3, 4]]);
    let gamma = family_of(&[&[6], &[7]]);

    let lhs = gproduct(&lambda, &gamma).flat_map(limit_d_family);
    let d_lambda = limit_d_family(&lambda);
    let d_gamma = limit_d_family(&gamma);
    let mut rhs = gproduct_chain(&d_lambda, &FamilyChain::term_int(gamma.clone(), 1));
    rhs.add_assign(&gproduct_chain(
        &FamilyChain::term_int(lambda.clone(), 1),
        &d_gamma,
    ));

    let expected = family_of(&[&[1, 2, 6], &[3, 4, 7]]);
    let reproduces = lhs.is_zero()
        && d_gamma.is_zero()
        && rhs.len() == 1
        && rhs.coeff(&expected).is_some();
    DLeibnizReport {
        lhs,
        d_lambda,
        d_gamma,
        rhs,
        reproduces,
    }
}

/// Outcome of the inversion and alternating sign lemma checks on one pair
/// of disjoint cores.
#[derive(Debug, Clone)]
pub struct SignLemmasReport {
    pub core_a: Vec<u32>,
    pub core_b: Vec<u32>,
    pub violations: Vec<String>,
    pub pass: bool,
}

/// Verifies both sign lemmas on a pair of disjoint sorted cores, in both
/// input orders:
///
/// - deletion identity: `eps(A \ a_{i+1}, B) = eps(A \ a_i, B) - k_i` with
///   `k_i` the number of merged-core elements strictly between the two;
/// - alternation: the parity of `position(a_i) + eps(A \ a_i, B)` flips
///   between consecutive `i` (positions taken in the merged core).
pub fn sign_lemmas_core_check(core_a: &[u32], core_b: &[u32]) -> Result<SignLemmasReport> {
    inversion_count(core_a, core_b)?;
    let mut violations = Vec::new();
    for (a, b) in [(core_a, core_b), (core_b, core_a)] {
        let mut merged: Vec<u32> = a.iter().chain(b.iter()).copied().collect();
        merged.sort_unstable();
        let eps_without = |skip: u32| -> i64 {
            let reduced: Vec<u32> = a.iter().copied().filter(|&x| x != skip).collect();
            inversion_count(&reduced, b).expect("subsets of disjoint sets stay disjoint") as i64
        };
        let position =
            |x: u32| -> i64 { merged.binary_search(&x).expect("x is in the merge") as i64 + 1 };
        for w in a.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let between = merged.iter().filter(|&&x| x > lo && x < hi).count() as i64;
            if eps_without(hi) != eps_without(lo) - between {
                violations.push(format!(
                    "deletion identity fails between {lo} and {hi} for A={a:?}, B={b:?}"
                ));
            }
            let sum_lo = position(lo) + eps_without(lo);
            let sum_hi = position(hi) + eps_without(hi);
            if (sum_lo - sum_hi) % 2 == 0 {
                violations.push(format!(
                    "parity fails to alternate between {lo} and {hi} for A={a:?}, B={b:?}"
                ));
            }
        }
    }
    Ok(SignLemmasReport {
        core_a: core_a.to_vec(),
        core_b: core_b.to_vec(),
        pass: violations.is_empty(),
        violations,
    })
}

/// Verifies the sign lemmas on a compatible pair of families with nonempty
/// cores.
pub fn sign_lemmas_check(
    lambda: &ComplementFamily,
    gamma: &ComplementFamily,
) -> Result<SignLemmasReport> {
    let verdict = compatible(lambda, gamma);
    if !verdict.compatible {
        return Err(Error::Incompatible(format!("{:?}", verdict.reason)));
    }
    let a = lambda.core().unwrap_or_default();
    let b = gamma.core().unwrap_or_default();
    if a.is_empty() || b.is_empty() {
        return Err(Error::Regime(
            "the sign lemmas need nonempty cores on both sides".into(),
        ));
    }
    sign_lemmas_core_check(&a, &b)
}

/// Outcome of the exhaustive sign-lemma sweep.
#[derive(Debug, Clone)]
pub struct SignLemmasSweep {
    pub n: u32,
    pub pairs_checked: usize,
    pub violations: Vec<String>,
    pub pass: bool,
}

/// Runs the sign lemmas over every pair of disjoint nonempty subsets of
/// `[n]`.
pub fn sign_lemmas_exhaustive(n: u32) -> SignLemmasSweep {
    let mut violations = Vec::new();
    let mut checked = 0usize;
    // Each element goes to A, to B, or to neither.
    let total = 3usize.pow(n);
    for assignment in 0..total {
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut rest = assignment;
        for x in 1..=n {
            match rest % 3 {
                1 => a.push(x),
                2 => b.push(x),
                _ => {}
            }
            rest /= 3;
        }
        if a.is_empty() || b.is_empty() {
            continue;
        }
        checked += 1;
        let report = sign_lemmas_core_check(&a, &b).expect("disjoint by construction");
        if !report.pass {
            violations.extend(report.violations);
        }
    }
    SignLemmasSweep {
        n,
        pairs_checked: checked,
        pass: violations.is_empty(),
        violations,
    }
}
