//! `klim`: build k-equal complexes, compute their exact rational homology,
//! and run the verification harness over the limit algebra.

mod cache;
mod commands;
mod envelope;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cache::Cache;
use commands::Outcome;
use envelope::{Envelope, Format, Verdict};

#[derive(Parser)]
#[command(
    name = "klim",
    version,
    about = "k-equal arrangement complexes, their limits, and exact homology"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Worker pool width (results are identical for any value).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Cache directory (defaults to $KLIM_CACHE_DIR when set).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Betti numbers of the finite complex A(k,l).
    Betti {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        /// Build only generators with at most this many atoms.
        #[arg(long)]
        max_atoms: Option<usize>,
    },
    /// Homology of the q-th limit at a stabilized stage, with the
    /// book-generation check.
    Limit {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        stage_k: u32,
    },
    /// Run one named verification.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 4)]
        l: u32,
        /// Ground-set bound for truncation sweeps.
        #[arg(long, default_value_t = 6)]
        n: u32,
        /// Family-size bound for truncation sweeps.
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long)]
        max_atoms: Option<usize>,
        #[arg(long, default_value_t = 200)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate one product (graded, cup, or monoid).
    Product {
        #[arg(long, value_enum)]
        op: ProductOp,
        /// Left operand literal, e.g. `[[1,2],[1,3]]` (`[1,2]` for monoid).
        #[arg(long)]
        lhs: String,
        /// Right operand literal.
        #[arg(long)]
        rhs: String,
        /// Arity (cup only).
        #[arg(long)]
        k: Option<u32>,
        /// Ambient size (cup), or the left ambient (monoid).
        #[arg(long)]
        l: Option<u32>,
        /// Right ambient size (monoid only).
        #[arg(long)]
        m: Option<u32>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    /// d^2 = 0 on a finite complex.
    D2,
    /// delta^2 = 0 on a truncation.
    Delta2,
    /// The decomposition round trips and is a chain map.
    Decomp,
    /// Every truncated summand complex is exact.
    Exactness,
    /// Commutation relation, total differential, column exactness.
    Bicomplex,
    /// The conditional Leibniz rule and its counterexamples.
    Leibniz,
    /// Associativity of the graded product.
    Assoc,
    /// The inversion-count sign lemmas, exhaustively.
    Signlemmas,
    /// The graded Leibniz rule for the cup product.
    CupLeibniz,
    /// Stabilization coherence at a stabilized stage.
    Stabilization,
    /// Homology support satisfies m >= n.
    Vanishing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProductOp {
    Graded,
    Cup,
    Monoid,
}

fn main() {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // Results do not depend on the pool width; this only bounds it.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let started = Instant::now();
    match run(&cli) {
        Ok(envelope) => {
            print!("{}", envelope::render(&envelope, cli.format));
            eprintln!(
                "klim: {} finished in {} ms",
                envelope.command,
                started.elapsed().as_millis()
            );
            let code = match envelope.verdict {
                Verdict::Pass | Verdict::Indeterminate => 0,
                Verdict::Fail => 1,
            };
            std::process::exit(code);
        }
        Err(error) => {
            eprintln!("error: {error:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Envelope> {
    let cache = Cache::resolve(cli.cache.clone());
    match &cli.command {
        Command::Betti { k, l, max_atoms } => {
            let config = json!({"k": k, "l": l, "max_atoms": max_atoms});
            if let Some(cached) = cache.as_ref().and_then(|c| c.load("betti", &config)) {
                eprintln!("klim: betti served from cache");
                return Ok(cached);
            }
            let (outcome, complex) = commands::betti(*k, *l, *max_atoms)?;
            let envelope = Envelope::new("betti", config, outcome.verdict, outcome.payload);
            if let Some(cache) = &cache {
                cache.store(&envelope);
                cache.store_matrices(&envelope.config_hash, &complex);
            }
            Ok(envelope)
        }
        Command::Limit { q, stage_k } => {
            let config = json!({"q": q, "stage_k": stage_k});
            if let Some(cached) = cache.as_ref().and_then(|c| c.load("limit", &config)) {
                eprintln!("klim: limit served from cache");
                return Ok(cached);
            }
            let outcome = commands::limit_cmd(*q, *stage_k)?;
            let envelope = Envelope::new("limit", config, outcome.verdict, outcome.payload);
            if let Some(cache) = &cache {
                cache.store(&envelope);
            }
            Ok(envelope)
        }
        Command::Verify {
            check,
            k,
            l,
            n,
            m,
            max_atoms,
            trials,
            seed,
        } => {
            let (name, config, outcome) = dispatch_verify(
                *check, *k, *l, *n, *m, *max_atoms, *trials, *seed,
            )?;
            Ok(Envelope::new(&name, config, outcome.verdict, outcome.payload))
        }
        Command::Product {
            op,
            lhs,
            rhs,
            k,
            l,
            m,
        } => {
            let (config, outcome) = match op {
                ProductOp::Graded => {
                    let config = json!({"op": "graded", "lhs": lhs, "rhs": rhs});
                    (config, commands::product_graded(lhs, rhs)?)
                }
                ProductOp::Cup => {
                    let k = k.ok_or_else(|| anyhow::anyhow!("--op cup needs --k"))?;
                    let l = l.ok_or_else(|| anyhow::anyhow!("--op cup needs --l"))?;
                    let config = json!({"op": "cup", "lhs": lhs, "rhs": rhs, "k": k, "l": l});
                    (config, commands::product_cup(lhs, rhs, k, l)?)
                }
                ProductOp::Monoid => {
                    let l = l.ok_or_else(|| anyhow::anyhow!("--op monoid needs --l"))?;
                    let m = m.ok_or_else(|| anyhow::anyhow!("--op monoid needs --m"))?;
                    let config = json!({"op": "monoid", "lhs": lhs, "rhs": rhs, "l": l, "m": m});
                    (config, commands::product_monoid(lhs, rhs, l, m)?)
                }
            };
            Ok(Envelope::new("product", config, outcome.verdict, outcome.payload))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn dispatch_verify(
    check: Check,
    k: u32,
    l: u32,
    n: u32,
    m: usize,
    max_atoms: Option<usize>,
    trials: u32,
    seed: u64,
) -> anyhow::Result<(String, Value, Outcome)> {
    let (name, config, outcome) = match check {
        Check::D2 => (
            "verify-d2",
            json!({"k": k, "l": l, "max_atoms": max_atoms}),
            commands::verify_d2(k, l, max_atoms)?,
        ),
        Check::Delta2 => (
            "verify-delta2",
            json!({"n": n, "m": m}),
            commands::verify_delta2(n, m)?,
        ),
        Check::Decomp => (
            "verify-decomp",
            json!({"n": n, "m": m}),
            commands::verify_decomp(n, m)?,
        ),
        Check::Exactness => (
            "verify-exactness",
            json!({"n": n, "m": m}),
            commands::verify_exactness(n, m)?,
        ),
        Check::Bicomplex => (
            "verify-bicomplex",
            json!({"n": n, "m": m}),
            commands::verify_bicomplex(n, m)?,
        ),
        Check::Leibniz => (
            "verify-leibniz",
            json!({"trials": trials, "seed": seed, "n": n}),
            commands::verify_leibniz(trials, seed, n)?,
        ),
        Check::Assoc => (
            "verify-assoc",
            json!({"trials": trials, "seed": seed, "n": n}),
            commands::verify_assoc(trials, seed, n)?,
        ),
        Check::Signlemmas => (
            "verify-signlemmas",
            json!({"n": n}),
            commands::verify_signlemmas(n)?,
        ),
        Check::CupLeibniz => (
            "verify-cup-leibniz",
            json!({"k": k, "l": l, "trials": trials, "seed": seed}),
            commands::verify_cup_leibniz(k, l, trials, seed)?,
        ),
        Check::Stabilization => (
            "verify-stabilization",
            json!({"k": k, "l": l, "trials": trials, "seed": seed}),
            commands::verify_stabilization(k, l, trials, seed)?,
        ),
        Check::Vanishing => (
            "verify-vanishing",
            json!({"k": k, "l": l}),
            commands::verify_vanishing(k, l)?,
        ),
    };
    Ok((name.to_string(), config, outcome))
}
