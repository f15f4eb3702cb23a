//! Benchmark suites, algorithm dispatch and the bound-check report.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::engine::{self, RunTrace};
use crate::error::{Error, Result};
use crate::game::Ssg;
use crate::generate::{self, GenSpec};
use crate::oracle;
use crate::rational;
use crate::rules::{self, ArcSpec, IjmaOutcome};
use crate::strategy::{Strategy, ValueVector};

pub const ALGORITHMS: [&str; 10] = [
    "hk-all", "hk-bland", "hk-random", "gh", "opt:R", "opt:minin", "cfb", "fas", "ijma", "hybrid",
];

pub const DEFAULT_PERIOD: usize = 2;

#[derive(Clone, Debug)]
pub struct Instance {
    pub id: String,
    pub family: String,
    pub game: Ssg,
    pub q: u64,
    pub seed: u64,
}

/// `count` random q-SSGs: q in {2, 3}, up to 6 max and 6 min vertices,
/// 1 to 5 random vertices, outdegree 2 or 3, non-stopping allowed.
pub fn random_suite(count: usize, seed: u64) -> Result<Vec<Instance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let q = rng.random_range(2..=3u64);
            let spec = GenSpec::new(
                rng.random_range(0..=6),
                rng.random_range(0..=6),
                rng.random_range(1..=5),
                q,
                rng.random(),
            );
            Ok(Instance {
                id: format!("random-{i:03}"),
                family: "random".into(),
                game: generate::gen_random(&spec)?,
                q,
                seed: spec.seed,
            })
        })
        .collect()
}

pub fn chain_suite() -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for q in [2, 3] {
        for r in 1..=6 {
            out.push(Instance {
                id: format!("chain-q{q}-r{r}"),
                family: "chain".into(),
                game: generate::gen_chain(q, r)?,
                q,
                seed: 0,
            });
        }
    }
    Ok(out)
}

pub fn cycle_suite(q: u64) -> Result<Vec<Instance>> {
    (2..=8)
        .map(|r| {
            Ok(Instance {
                id: format!("cycle-q{q}-r{r}"),
                family: "cycle".into(),
                game: generate::gen_random_cycle(r, q)?,
                q,
                seed: 0,
            })
        })
        .collect()
}

/// `default`: 200 random instances, chains and cycles. `small`: 20 random
/// instances. `random`, `chains`, `cycles`: one family.
pub fn suite(name: &str, seed: u64) -> Result<Vec<Instance>> {
    Ok(match name {
        "default" => {
            let mut v = random_suite(200, seed)?;
            v.extend(chain_suite()?);
            v.extend(cycle_suite(2)?);
            v
        }
        "small" => random_suite(20, seed)?,
        "random" => random_suite(200, seed)?,
        "chains" => chain_suite()?,
        "cycles" => cycle_suite(2)?,
        other => return Err(Error::InvalidArgument(format!("unknown suite {other:?}"))),
    })
}

/// Fixed arcs of the constant-arc-set rules.
pub fn arc_spec_for(algorithm: &str) -> Option<ArcSpec> {
    match algorithm {
        "gh" => Some(ArcSpec::RandomOut),
        "cfb" => Some(ArcSpec::MinIn),
        "fas" => Some(ArcSpec::DfsBack),
        _ => algorithm
            .strip_prefix("opt:")
            .or_else(|| algorithm.strip_prefix("fas:"))
            .map(ArcSpec::parse),
    }
}

/// Opt-GSIA with a fixed set covering every random vertex.
pub fn is_random_covering(algorithm: &str) -> bool {
    matches!(arc_spec_for(algorithm), Some(ArcSpec::RandomOut | ArcSpec::RandomCover))
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgorithmRun {
    pub algorithm: String,
    pub values: ValueVector,
    pub sigma: Strategy,
    pub tau: Strategy,
    /// Improvement iterations, or deterministic solves for IJMA.
    pub iterations: usize,
    pub k_fixed_arcs: Option<usize>,
    pub trace: Option<RunTrace>,
    pub ijma: Option<IjmaOutcome>,
    pub wall_ms: f64,
}

/// Runs one algorithm by name. `ijma` and `hybrid` need `q`; the seed
/// drives randomized rules.
pub fn run_algorithm(game: &Ssg, q: u64, algorithm: &str, seed: u64, period: usize) -> Result<AlgorithmRun> {
    let start = Instant::now();
    let done = |values, sigma, tau, iterations, k, trace, ijma| AlgorithmRun {
        algorithm: algorithm.to_string(),
        values,
        sigma,
        tau,
        iterations,
        k_fixed_arcs: k,
        trace,
        ijma,
        wall_ms: start.elapsed().as_secs_f64() * 1000.0,
    };
    if algorithm == "ijma" || algorithm == "hybrid" {
        let out = if algorithm == "ijma" {
            rules::ijma(game, q)?
        } else {
            rules::hybrid(game, q, period)?
        };
        return Ok(done(
            out.values.clone(),
            out.sigma.clone(),
            out.tau.clone(),
            out.steps,
            None,
            None,
            Some(out),
        ));
    }
    let mut rule = rules::rule_by_name(algorithm, seed)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm {algorithm:?}")))?;
    let init = if algorithm == "cfb" {
        rules::cfb_init(game)?
    } else {
        engine::default_init(game)
    };
    let k = match arc_spec_for(algorithm) {
        Some(spec) => Some(spec.resolve(game)?.controlled_count(game)),
        None => None,
    };
    let out = engine::run(game, rule.as_mut(), init)?;
    let iterations = out.trace.iterations;
    Ok(done(out.values, out.sigma, out.tau, iterations, k, Some(out.trace), None))
}

pub fn values_hash(v: &ValueVector) -> String {
    hex::encode(Sha256::digest(v.to_strings().join(",").as_bytes()))
}

/// `n q^r`.
pub fn bound_nqr(n: usize, q: u64, r: usize) -> BigInt {
    BigInt::from(n) * rational::big_pow(q, r)
}

/// `min((r+k) q^r, (r+k)!)`.
pub fn bound_fstrat(r: usize, k: usize, q: u64) -> BigInt {
    let m = r + k;
    let linear = BigInt::from(m) * rational::big_pow(q, r);
    let fact = (1..=m).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
    linear.min(fact)
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub instance_id: String,
    pub family: String,
    pub n: usize,
    pub r: usize,
    pub q: u64,
    pub algorithm: String,
    pub k_fixed_arcs: Option<usize>,
    pub iterations: usize,
    pub bound_nqr: Option<String>,
    pub bound_fstrat: Option<String>,
    pub ijma_steps: Option<usize>,
    pub values_hash: String,
    pub wall_ms: String,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Failed bound or oracle checks, one line each.
    pub violations: Vec<String>,
}

impl BenchReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Internal(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub algorithms: Vec<String>,
    pub period: usize,
    /// Compare every algorithm with the enumeration oracle.
    pub oracle: bool,
    pub oracle_cap: u128,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            algorithms: ALGORITHMS.iter().map(|s| s.to_string()).collect(),
            period: DEFAULT_PERIOD,
            oracle: true,
            oracle_cap: oracle::DEFAULT_CAP,
        }
    }
}

struct Cell {
    row: BenchRow,
    values: ValueVector,
}

/// Runs every (instance, algorithm) cell in parallel and checks the
/// iteration bounds, the IJMA comparison and, optionally, oracle values.
pub fn bench(instances: &[Instance], opts: &BenchOptions) -> Result<BenchReport> {
    let cells: Vec<(usize, &str)> = (0..instances.len())
        .flat_map(|i| opts.algorithms.iter().map(move |a| (i, a.as_str())))
        .collect();
    let results: Vec<Result<Cell>> = cells
        .par_iter()
        .map(|&(i, alg)| {
            let inst = &instances[i];
            let run = run_algorithm(&inst.game, inst.q, alg, inst.seed, opts.period)
                .map_err(|e| Error::Internal(format!("{} on {}: {e}", alg, inst.id)))?;
            let gsia = run.trace.is_some();
            let (n, r) = (inst.game.n(), inst.game.r());
            Ok(Cell {
                row: BenchRow {
                    instance_id: inst.id.clone(),
                    family: inst.family.clone(),
                    n,
                    r,
                    q: inst.q,
                    algorithm: alg.to_string(),
                    k_fixed_arcs: run.k_fixed_arcs,
                    iterations: run.iterations,
                    bound_nqr: gsia.then(|| bound_nqr(n, inst.q, r).to_string()),
                    bound_fstrat: run.k_fixed_arcs.map(|k| bound_fstrat(r, k, inst.q).to_string()),
                    ijma_steps: None,
                    values_hash: values_hash(&run.values),
                    wall_ms: format!("{:.3}", run.wall_ms),
                    seed: inst.seed,
                },
                values: run.values,
            })
        })
        .collect();
    let mut cells_out = results.into_iter().collect::<Result<Vec<_>>>()?;
    let oracles: Vec<Option<Result<ValueVector>>> = instances
        .par_iter()
        .map(|inst| {
            opts.oracle
                .then(|| oracle::oracle_optimal(&inst.game, opts.oracle_cap).map(|o| o.values))
        })
        .collect();
    let mut violations = Vec::new();
    let per = opts.algorithms.len();
    for (i, inst) in instances.iter().enumerate() {
        let chunk = &mut cells_out[i * per..(i + 1) * per];
        let ijma_steps = match chunk.iter().find(|c| c.row.algorithm == "ijma") {
            Some(c) => Some(c.row.iterations),
            None => rules::ijma(&inst.game, inst.q).ok().map(|o| o.steps),
        };
        for c in chunk.iter_mut() {
            c.row.ijma_steps = ijma_steps;
            let row = &c.row;
            let it = BigInt::from(row.iterations);
            let exceeds = |bound: &Option<String>| {
                bound
                    .as_ref()
                    .and_then(|b| b.parse::<BigInt>().ok())
                    .is_some_and(|b| it > b)
            };
            if exceeds(&row.bound_nqr) {
                violations.push(format!("{} {}: {} iterations > n q^r = {}", row.instance_id, row.algorithm, row.iterations, row.bound_nqr.as_deref().unwrap_or("")));
            }
            if exceeds(&row.bound_fstrat) {
                violations.push(format!("{} {}: {} iterations > min((r+k)q^r,(r+k)!) = {}", row.instance_id, row.algorithm, row.iterations, row.bound_fstrat.as_deref().unwrap_or("")));
            }
            if is_random_covering(&row.algorithm) {
                if let Some(s) = ijma_steps.filter(|&s| row.iterations > s) {
                    violations.push(format!("{} {}: {} iterations > {} IJMA steps", row.instance_id, row.algorithm, row.iterations, s));
                }
            }
            match &oracles[i] {
                Some(Ok(v)) if v != &c.values => {
                    violations.push(format!("{} {}: values differ from the oracle", row.instance_id, row.algorithm));
                }
                Some(Err(Error::CapExceeded { .. })) | Some(Ok(_)) | None => {}
                Some(Err(e)) => violations.push(format!("{} oracle: {e}", inst.id)),
            }
        }
    }
    Ok(BenchReport {
        rows: cells_out.into_iter().map(|c| c.row).collect(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert_eq!(bound_nqr(3, 2, 4), BigInt::from(48));
        assert_eq!(bound_fstrat(2, 1, 2), BigInt::from(6));
        assert_eq!(bound_fstrat(1, 0, 3), BigInt::from(1));
        assert_eq!(bound_fstrat(4, 0, 2), BigInt::from(24));
    }

    #[test]
    fn small_bench_is_clean() {
        let inst = suite("small", 1).unwrap();
        let report = bench(&inst[..5], &BenchOptions::default()).unwrap();
        assert_eq!(report.rows.len(), 50);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        let csv = report.to_csv().unwrap();
        assert!(csv.starts_with("instance_id,family,n,r,q,algorithm,k_fixed_arcs,iterations,bound_nqr,bound_fstrat,ijma_steps,values_hash,wall_ms,seed\n"));
    }

    #[test]
    fn algorithm_names() {
        assert!(run_algorithm(&generate::coin(), 2, "nope", 0, 2).is_err());
        for a in ALGORITHMS {
            let out = run_algorithm(&generate::coin(), 2, a, 0, 2).unwrap();
            assert_eq!(out.values.0[0], rational::ratio(1, 2), "{a}");
        }
    }
}
