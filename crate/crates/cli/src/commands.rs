//! Payload builders: one function per command, each returning a verdict
//! plus a JSON payload assembled from deterministic (ordered) maps.

use anyhow::{anyhow, Context};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use klim::atomic::{self, ChainElement};
use klim::bicx;
use klim::gprod;
use klim::limit::{self, TheoremGenerator};
use klim::setcore::{self, Atom, AtomSet, ComplementFamily};

use crate::envelope::Verdict;

pub struct Outcome {
    pub verdict: Verdict,
    pub payload: Value,
}

fn pass_fail(pass: bool) -> Verdict {
    if pass {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// The Betti table of `A(k,l)`, keyed by degree and by codegree; bounded
/// complexes flag cut-affected degrees as indeterminate.
pub fn betti(k: u32, l: u32, max_atoms: Option<usize>) -> anyhow::Result<(Outcome, atomic::FiniteComplex)> {
    let complex = atomic::build_complex(k, l, max_atoms)?;
    let homology = complex.homology()?;
    let max_degree = atomic::max_degree(k, l);

    let mut by_degree = Map::new();
    let mut by_codegree = Map::new();
    let mut indeterminate = Vec::new();
    for (&degree, &dim) in &homology {
        match dim {
            Some(0) => {}
            Some(d) => {
                by_degree.insert(degree.to_string(), json!(d));
                by_codegree.insert((max_degree - degree).to_string(), json!(d));
            }
            None => indeterminate.push(json!(degree)),
        }
    }
    let generators: Map<String, Value> = complex
        .degrees()
        .into_iter()
        .map(|d| (d.to_string(), json!(complex.generator_count(d))))
        .collect();

    let verdict = if indeterminate.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Indeterminate
    };
    let payload = json!({
        "k": k,
        "l": l,
        "max_atoms": max_atoms,
        "max_degree": max_degree,
        "total_generators": complex.total_generators(),
        "generators_by_degree": generators,
        "betti_by_degree": by_degree,
        "betti_by_codegree": by_codegree,
        "indeterminate_degrees": indeterminate,
    });
    Ok((Outcome { verdict, payload }, complex))
}

/// Per-codegree homology of a stabilized stage plus the generation check.
pub fn limit_cmd(q: u32, stage_k: u32) -> anyhow::Result<Outcome> {
    let report = limit::verify_generation(q, stage_k)?;
    let rows: Vec<Value> = report
        .per_codegree
        .iter()
        .map(|(codegree, check)| {
            json!({
                "codegree": codegree,
                "degree": check.degree,
                "homology_dim": check.homology_dim,
                "generator_count": check.generator_count,
                "boundary_rank": check.boundary_rank,
                "generator_span_dim": check.generator_span_dim,
                "unit_skipped": check.unit_skipped,
                "in_span": check.all_in_span,
            })
        })
        .collect();
    let payload = json!({
        "q": report.q,
        "stage_k": report.stage_k,
        "ell": report.ell,
        "book_generators": report.generator_total,
        "per_codegree": rows,
        "generation_pass": report.pass,
    });
    Ok(Outcome {
        verdict: pass_fail(report.pass),
        payload,
    })
}

fn chain_terms<I: Ord + std::fmt::Display>(chain: &klim::formal::FormalSum<I>) -> Value {
    let terms: Vec<Value> = chain
        .iter()
        .map(|(index, coeff)| json!({"index": index.to_string(), "coefficient": coeff.to_string()}))
        .collect();
    json!({"display": chain.to_string(), "terms": terms})
}

pub fn verify_d2(k: u32, l: u32, max_atoms: Option<usize>) -> anyhow::Result<Outcome> {
    let report = atomic::verify_d_squared(k, l, max_atoms)?;
    Ok(Outcome {
        verdict: pass_fail(report.pass),
        payload: json!({
            "k": report.k,
            "l": report.l,
            "max_atoms": report.max_atoms,
            "generators_checked": report.generators_checked,
            "violations": report.violations,
            "pass": report.pass,
        }),
    })
}

pub fn verify_delta2(n: u32, m: usize) -> anyhow::Result<Outcome> {
    let report = bicx::verify_delta_squared(n, m);
    Ok(Outcome {
        verdict: pass_fail(report.pass),
        payload: json!({
            "n": report.n,
            "max_members": report.max_members,
            "generators_checked": report.generators_checked,
            "violations": report.violations,
            "pass": report.pass,
        }),
    })
}

pub fn verify_decomp(n: u32, m: usize) -> anyhow::Result<Outcome> {
    let report = bicx::verify_decomposition(n, m);
    Ok(Outcome {
        verdict: pass_fail(report.pass),
        payload: json!({
            "n": report.n,
            "max_members": report.max_members,
            "checks": report.generators_checked,
            "violations": report.violations,
            "pass": report.pass,
        }),
    })
}

fn exactness_payload(report: &bicx::ExactnessReport) -> Value {
    let failing: Vec<String> = report
        .summands
        .iter()
        .filter(|s| !s.exact)
        .map(|s| s.key.to_string())
        .collect();
    json!({
        "n": report.n,
        "max_members": report.max_members,
        "summands_checked": report.summands.len(),
        "failing_summands": failing,
        "skipped_saturated_count": report.skipped_saturated.len(),
        "pass": report.pass,
    })
}

pub fn verify_exactness(n: u32, m: usize) -> anyhow::Result<Outcome> {
    let report = bicx::verify_delta_exactness(n, m)?;
    Ok(Outcome {
        verdict: pass_fail(report.pass),
        payload: exactness_payload(&report),
    })
}

pub fn verify_bicomplex(n: u32, m: usize) -> anyhow::Result<Outcome> {
    let report = bicx::verify_double_complex(n, m)?;
    let relation = match report.relation {
        Some(bicx::Commutation::Commute) => "commute",
        Some(bicx::Commutation::Anticommute) => "anticommute",
        None => "indeterminate",
    };
    Ok(Outcome {
        verdict: pass_fail(report.pass),
        payload: json!({
            "n": report.n,
            "max_members": report.max_members,
            "generators_checked": report.generators_checked,
            "relation": relation,
            "relation_uniform": report.relation_uniform,
            "silent_generators": report.silent,
            "total_differential_squares_to_zero": report.total_squares_to_zero,
            "column_exactness": exactness_payload(&report.column_exactness),
            "violations": report.violations,
            "pass": report.pass,
        }),
    })
}

pub fn verify_leibniz(trials: u32, seed: u64, n: u32) -> anyhow::Result<Outcome> {
    let report = gprod::verify_leibniz(trials, seed, n);
    let delta_cex = &report.delta_counterexample;
    let d_cex = &report.d_counterexample;
    Ok(Outcome {
        verdict: pass_fail(report.pass),
        payload: json!({
            "trials": report.trials,
            "seed": report.seed,
            "n": report.n,
            "in_regime_checked": report.in_regime_checked,
            "class_counts": {
                "product_nonzero": report.product_nonzero,
                "size_mismatch": report.size_mismatch,
                "overlap_in_cores": report.overlap_in_cores,
                "outside_catalogued": report.outside_catalogued,
            },
            "violations": report.violations,
            "delta_counterexample": {
                "lambda": "{{1,2},{1,3}}",
                "gamma": "{{2,4},{2,5}}",
                "lhs": chain_terms(&delta_cex.lhs),
                "rhs_theorem_sign": chain_terms(&delta_cex.rhs),
                "rhs_flat_plus_sign": chain_terms(&delta_cex.rhs_plus_sign),
                "identity_fails": !delta_cex.equal,
            },
            "d_counterexample": {
                "lambda": "{{1,2},{2,3},{3,4}}",
                "gamma": "{{6},{7}}",
                "lhs": chain_terms(&d_cex.lhs),
                "d_lambda": chain_terms(&d_cex.d_lambda),
                "d_gamma": chain_terms(&d_cex.d_gamma),
                "rhs": chain_terms(&d_cex.rhs),
                "reproduces": d_cex.reproduces,
            },
            "pass": report.pass,
        }),
    })
}

pub fn verify_assoc(trials: u32, seed: u64, n: u32) -> anyhow::Result<Outcome> {
    let report = gprod::verify_associativity(trials, seed, n);
    Ok(Outcome {
        verdict: pass_fail(report.pass),
        payload: json!({
            "trials": report.trials,
            "seed": report.seed,
            "n": report.n,
            "nonzero_triples": report.nonzero_triples,
            "violations": report.violations,
            "pass": report.pass,
        }),
    })
}

pub fn verify_signlemmas(n: u32) -> anyhow::Result<Outcome> {
    let report = gprod::sign_lemmas_exhaustive(n);
    Ok(Outcome {
        verdict: pass_fail(report.pass),
        payload: json!({
            "n": report.n,
            "pairs_checked": report.pairs_checked,
            "violations": report.violations,
            "pass": report.pass,
        }),
    })
}

pub fn verify_cup_leibniz(k: u32, l: u32, trials: u32, seed: u64) -> anyhow::Result<Outcome> {
    let report = atomic::verify_cup_leibniz(k, l, trials, seed)?;
    Ok(Outcome {
        verdict: pass_fail(report.pass),
        payload: json!({
            "k": report.k,
            "l": report.l,
            "trials": report.trials,
            "seed": report.seed,
            "checked": report.checked,
            "violations": report.violations,
            "pass": report.pass,
        }),
    })
}

pub fn verify_vanishing(k: u32, l: u32) -> anyhow::Result<Outcome> {
    let report = bicx::vanishing_check(k, l)?;
    let support: Vec<Value> = report
        .support
        .iter()
        .map(|&(n, degree, dim)| json!({"n": n, "degree": degree, "dimension": dim}))
        .collect();
    Ok(Outcome {
        verdict: pass_fail(report.pass),
        payload: json!({
            "k": report.k,
            "l": report.l,
            "m": report.m,
            "support": support,
            "pass": report.pass,
        }),
    })
}

fn stabilize_chain(chain: &ChainElement) -> ChainElement {
    chain.map_indices(atomic::stabilize)
}

/// Stabilization coherence at a stabilized stage `(k, l)`, `l <= 2k-1`:
/// pushing one stage up preserves independence, commutes with the
/// differential, keeps the complement codegree, maps books to books, and
/// kills cup products.
pub fn verify_stabilization(k: u32, l: u32, trials: u32, seed: u64) -> anyhow::Result<Outcome> {
    if l + 1 > 2 * k {
        return Err(anyhow!(
            "stabilization checks need the stabilized regime l <= 2k-1, got k={k}, l={l}"
        ));
    }
    let atoms = setcore::atoms_of(k, l)?;
    let n = atoms.len();
    if n >= 64 {
        return Err(anyhow!("{n} atoms is beyond the sampling range"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations: Vec<String> = Vec::new();
    let mut independent_seen = 0u32;
    let mut cup_pairs_seen = 0u32;

    let sample = |rng: &mut ChaCha8Rng| -> AtomSet {
        let mask: u64 = rng.gen_range(0..(1u64 << n));
        let chosen = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| atoms[i].clone())
            .collect();
        AtomSet::new(chosen, l).expect("atoms drawn from atoms_of")
    };

    for _ in 0..trials {
        let s = sample(&mut rng);
        let pushed = atomic::stabilize(&s);

        if setcore::is_independent(&s) {
            independent_seen += 1;
            if !setcore::is_independent(&pushed) {
                violations.push(format!("independence lost at {s}"));
            }
        }

        if stabilize_chain(&atomic::differential(&s)) != atomic::differential(&pushed) {
            violations.push(format!("differential does not commute with the push at {s}"));
        }

        if !s.is_empty() {
            let family = setcore::complement(&s);
            let before = limit::codegree_finite(&family, k, l)?;
            let after =
                limit::codegree_finite(&setcore::complement(&pushed), k + 1, l + 1)?;
            let stable = limit::codegree_limit(&limit::canonicalize(&family))?;
            if before != after || before != stable {
                violations.push(format!(
                    "codegree drifts at {s}: {before} -> {after} (limit {stable})"
                ));
            }
        }

        // Small sets make nonzero cup products likely enough to exercise
        // the vanishing claim.
        let small = |rng: &mut ChaCha8Rng| -> AtomSet {
            let count = rng.gen_range(1..=2usize.min(n));
            let mut chosen: Vec<Atom> = Vec::new();
            while chosen.len() < count {
                let atom = atoms[rng.gen_range(0..n)].clone();
                if !chosen.contains(&atom) {
                    chosen.push(atom);
                }
            }
            AtomSet::new(chosen, l).expect("atoms drawn from atoms_of")
        };
        let (a, b) = (small(&mut rng), small(&mut rng));
        let product = atomic::cup(&a, &b)?;
        if !product.is_zero() && !a.is_empty() && !b.is_empty() {
            cup_pairs_seen += 1;
            if !atomic::cup(&atomic::stabilize(&a), &atomic::stabilize(&b))?.is_zero() {
                violations.push(format!("cup product survives the push at {a}, {b}"));
            }
        }
    }

    // Book generators of this stage push onto books of the next.
    let q = l - k;
    let mut books_checked = 0usize;
    for book in limit::theorem_generators(q, k)? {
        books_checked += 1;
        let pushed = atomic::stabilize(book.set());
        let mut core = book.core().to_vec();
        core.push(l + 1);
        let expected = TheoremGenerator::new(core, book.leaves().to_vec(), l + 1)?;
        if &pushed != expected.set() {
            violations.push(format!("book shape lost at {}", book.set()));
        }
    }

    let pass = violations.is_empty();
    Ok(Outcome {
        verdict: pass_fail(pass),
        payload: json!({
            "k": k,
            "l": l,
            "trials": trials,
            "seed": seed,
            "independent_sets_seen": independent_seen,
            "nonzero_cup_pairs_seen": cup_pairs_seen,
            "books_checked": books_checked,
            "violations": violations,
            "pass": pass,
        }),
    })
}

/// Parses a family literal such as `[[1,2],[1,3]]`.
pub fn parse_family(literal: &str) -> anyhow::Result<ComplementFamily> {
    let members: Vec<Vec<u32>> = serde_json::from_str(literal)
        .with_context(|| format!("cannot parse family literal {literal:?}"))?;
    Ok(ComplementFamily::new(members)?)
}

/// Parses an atom-set literal such as `[[1,2],[3,4]]` with ambient `l`.
pub fn parse_atom_set(literal: &str, l: u32) -> anyhow::Result<AtomSet> {
    let members: Vec<Vec<u32>> = serde_json::from_str(literal)
        .with_context(|| format!("cannot parse atom set literal {literal:?}"))?;
    let atoms = members
        .into_iter()
        .map(Atom::new)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AtomSet::new(atoms, l)?)
}

/// Parses a single sorted-set literal such as `[1,2]`.
pub fn parse_elements(literal: &str) -> anyhow::Result<Vec<u32>> {
    serde_json::from_str(literal)
        .with_context(|| format!("cannot parse element list {literal:?}"))
}

pub fn product_graded(lhs: &str, rhs: &str) -> anyhow::Result<Outcome> {
    let lambda = parse_family(lhs)?;
    let gamma = parse_family(rhs)?;
    let verdict_pair = gprod::compatible(&lambda, &gamma);
    let classification = gprod::leibniz_classify(&lambda, &gamma);
    let product = gprod::gproduct(&lambda, &gamma);
    let reason = match verdict_pair.reason {
        gprod::CompatReason::EmptyOperand => "empty-operand",
        gprod::CompatReason::SizeMatchAndDisjoint => "size-match-and-disjoint",
        gprod::CompatReason::SizeMismatch => "size-mismatch",
        gprod::CompatReason::UnionOverlap => "union-overlap",
    };
    Ok(Outcome {
        verdict: Verdict::Pass,
        payload: json!({
            "op": "graded",
            "lhs": lambda.to_string(),
            "rhs": gamma.to_string(),
            "compatible": verdict_pair.compatible,
            "reason": reason,
            "epsilon": if verdict_pair.compatible && !lambda.is_empty() && !gamma.is_empty() {
                json!(gprod::epsilon(&lambda, &gamma))
            } else {
                Value::Null
            },
            "leibniz_class": format!("{classification:?}"),
            "result": chain_terms(&product),
        }),
    })
}

pub fn product_cup(lhs: &str, rhs: &str, k: u32, l: u32) -> anyhow::Result<Outcome> {
    let s = parse_atom_set(lhs, l)?;
    let t = parse_atom_set(rhs, l)?;
    for set in [&s, &t] {
        if set.arity().is_some_and(|a| a != k as usize) {
            return Err(anyhow!("atom arity does not match --k {k}"));
        }
    }
    let product = atomic::cup(&s, &t)?;
    Ok(Outcome {
        verdict: Verdict::Pass,
        payload: json!({
            "op": "cup",
            "k": k,
            "l": l,
            "lhs": s.to_string(),
            "rhs": t.to_string(),
            "degrees": [atomic::degree(&s), atomic::degree(&t)],
            "result": chain_terms(&product),
        }),
    })
}

pub fn product_monoid(lhs: &str, rhs: &str, l: u32, m: u32) -> anyhow::Result<Outcome> {
    let sigma = parse_elements(lhs)?;
    let tau = parse_elements(rhs)?;
    let result = atomic::monoid_product(&sigma, l, &tau, m)?;
    Ok(Outcome {
        verdict: Verdict::Pass,
        payload: json!({
            "op": "monoid",
            "l": l,
            "m": m,
            "lhs": sigma,
            "rhs": tau,
            "result": result,
            "ambient": l + m,
        }),
    })
}

