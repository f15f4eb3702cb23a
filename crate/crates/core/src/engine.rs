//! The generic strategy improvement loop.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Player, Ssg, VertexId, VertexKind};
use crate::graph::{self, AbsorbingSet};
use crate::strategy::{ArcSet, Strategy, ValueVector};
use crate::transform::{self, TransformedGame};
use crate::values;

/// An instance of GSIA: which arcs to fix and how to improve in the
/// resulting subgame.
pub trait ImprovementRule {
    fn name(&self) -> String;

    fn choose_arcs(&mut self, game: &Ssg, sigma: &Strategy, iteration: usize) -> Result<ArcSet>;

    /// A strategy of the derived game better than `sigma` (already lifted),
    /// or `None` when `sigma` is optimal there. `values` is `v_σ` in the
    /// derived game.
    fn improve(&mut self, sub: &TransformedGame, sigma: &Strategy, values: &ValueVector) -> Result<Option<Strategy>>;

    fn seed(&self) -> Option<u64> {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrictOrderWitness {
    pub increased: Vec<VertexId>,
    /// Max vertices of unchanged value that kept their choice.
    pub tied_unchanged: Vec<VertexId>,
}

/// Checks `σ' ≻ σ` given both value vectors.
pub fn strict_order_witness(
    game: &Ssg,
    sigma: &Strategy,
    v_sigma: &ValueVector,
    sigma_prime: &Strategy,
    v_prime: &ValueVector,
) -> Option<StrictOrderWitness> {
    if !v_prime.gt(v_sigma) {
        return None;
    }
    let mut tied_unchanged = Vec::new();
    for x in game.of_kind(VertexKind::Max) {
        if v_prime[x] == v_sigma[x] {
            if sigma_prime.at(x) != sigma.at(x) {
                return None;
            }
            tied_unchanged.push(x);
        }
    }
    let increased = game.ids().filter(|&x| v_prime[x] > v_sigma[x]).collect();
    Some(StrictOrderWitness {
        increased,
        tied_unchanged,
    })
}

/// `σ''`: `σ'` with the choice of `σ` restored wherever the value did not
/// move.
pub fn strictify(sub: &TransformedGame, sigma: &Strategy, sigma_prime: &Strategy) -> Result<Strategy> {
    let v = values::value_of_max(&sub.derived, sigma)?;
    strictify_in(&sub.derived, sigma, &v, sigma_prime).map(|(s, _, _)| s)
}

/// [`strictify`] on a plain game with `v_σ` known. Also returns the
/// values of `σ''` and the witness of `σ'' ≻ σ`.
pub fn strictify_in(
    game: &Ssg,
    sigma: &Strategy,
    v_sigma: &ValueVector,
    sigma_prime: &Strategy,
) -> Result<(Strategy, ValueVector, StrictOrderWitness)> {
    let v_prime = values::value_of_max(game, sigma_prime)?;
    if !v_prime.gt(v_sigma) {
        return Err(Error::NotAnImprovement(format!(
            "proposed values {v_prime} are not above {v_sigma}"
        )));
    }
    let mut strict = sigma_prime.clone();
    for x in game.of_kind(VertexKind::Max) {
        if v_prime[x] == v_sigma[x] && sigma_prime.at(x) != sigma.at(x) {
            strict.set(x, sigma.at(x));
        }
    }
    let v_strict = if &strict == sigma_prime {
        v_prime
    } else {
        values::value_of_max(game, &strict)?
    };
    let witness = strict_order_witness(game, sigma, v_sigma, &strict, &v_strict)
        .ok_or_else(|| Error::NotAnImprovement("strictified strategy is not strictly better".into()))?;
    Ok((strict, v_strict, witness))
}

#[derive(Clone, Debug, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub sigma: Strategy,
    pub values: ValueVector,
    pub arcs: ArcSet,
    /// Values of the improved strategy in the derived game.
    pub subgame_values: ValueVector,
    pub switched: Vec<VertexId>,
    pub witness: StrictOrderWitness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Optimal,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunTrace {
    pub algorithm: String,
    pub seed: Option<u64>,
    pub records: Vec<IterationRecord>,
    pub iterations: usize,
    pub improvements_per_vertex: BTreeMap<VertexId, usize>,
    pub termination: Termination,
    pub final_sigma: Strategy,
    pub final_values: ValueVector,
}

impl RunTrace {
    /// `v_{σ_0}, …, v_{σ_T}`.
    pub fn value_sequence(&self) -> Vec<&ValueVector> {
        self.records
            .iter()
            .map(|r| &r.values)
            .chain(std::iter::once(&self.final_values))
            .collect()
    }

    pub fn strategy_sequence(&self) -> Vec<&Strategy> {
        self.records
            .iter()
            .map(|r| &r.sigma)
            .chain(std::iter::once(&self.final_sigma))
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunResult {
    pub sigma: Strategy,
    pub tau: Strategy,
    pub values: ValueVector,
    pub trace: RunTrace,
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub max_iterations: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { max_iterations: 1_000_000 }
    }
}

pub fn run(game: &Ssg, rule: &mut dyn ImprovementRule, init: Strategy) -> Result<RunResult> {
    run_with(game, rule, init, RunOptions::default())
}

pub fn run_with(game: &Ssg, rule: &mut dyn ImprovementRule, init: Strategy, opts: RunOptions) -> Result<RunResult> {
    init.check(game)?;
    let mut sigma = init;
    let mut warm: Option<Strategy> = None;
    let mut records = Vec::new();
    let mut per_vertex = BTreeMap::new();
    let mut previous: Option<ValueVector> = None;
    loop {
        let (tau, v) = values::best_response_min_from(game, &sigma, warm.as_ref())?;
        if let Some(prev) = &previous {
            if !v.gt(prev) {
                return Err(Error::TheoremViolation(format!(
                    "{}: values did not strictly increase at iteration {}",
                    rule.name(),
                    records.len()
                )));
            }
        }
        let cert = values::certify(game, &sigma, &tau, v.clone());
        if cert.optimal {
            let trace = RunTrace {
                algorithm: rule.name(),
                seed: rule.seed(),
                iterations: records.len(),
                records,
                improvements_per_vertex: per_vertex,
                termination: Termination::Optimal,
                final_sigma: sigma.clone(),
                final_values: v.clone(),
            };
            return Ok(RunResult {
                sigma,
                tau,
                values: v,
                trace,
            });
        }
        if records.len() >= opts.max_iterations {
            return Err(Error::IterationLimit(opts.max_iterations));
        }
        let iteration = records.len();
        let arcs = rule.choose_arcs(game, &sigma, iteration)?;
        let sub = transform::from_values(game, &arcs, &v)?;
        let lifted = sub.lift_strategy(&sigma);
        let (_, sub_v) = values::best_response_min(&sub.derived, &lifted)?;
        if sub_v.truncated(game.len()) != v {
            return Err(Error::TheoremViolation("σ has different values in G[A,σ]".into()));
        }
        let proposal = rule.improve(&sub, &lifted, &sub_v)?.ok_or_else(|| Error::RuleViolation {
            rule: rule.name(),
            detail: format!("no improvement proposed at iteration {iteration} although σ is not optimal"),
        })?;
        proposal.check(&sub.derived).map_err(|e| Error::RuleViolation {
            rule: rule.name(),
            detail: e.to_string(),
        })?;
        let (strict, strict_v, witness) =
            strictify_in(&sub.derived, &lifted, &sub_v, &proposal).map_err(|e| Error::RuleViolation {
                rule: rule.name(),
                detail: e.to_string(),
            })?;
        let next = sub.restrict_strategy(&strict);
        let switched: Vec<VertexId> = next.differences(&sigma).collect();
        for &x in &switched {
            *per_vertex.entry(x).or_insert(0) += 1;
        }
        records.push(IterationRecord {
            iteration,
            sigma: sigma.clone(),
            values: v.clone(),
            arcs,
            subgame_values: strict_v,
            switched,
            witness,
        });
        previous = Some(v);
        warm = Some(tau);
        sigma = next;
    }
}

/// Lowest-id successor everywhere.
pub fn default_init(game: &Ssg) -> Strategy {
    Strategy::from_fn(game, Player::Max, |x| *game.succ(x).iter().min().expect("successor"))
}

/// Dai-Ge initialisation: among `k` seeded uniform strategies, the one
/// whose value vector dominates the most others (first sampled on ties).
pub fn dai_ge_init(game: &Ssg, k: usize, seed: u64) -> Result<Strategy> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Strategy> = (0..k.max(1))
        .map(|_| Strategy::random(game, Player::Max, &mut rng))
        .collect();
    let vals = samples
        .iter()
        .map(|s| values::value_of_max(game, s))
        .collect::<Result<Vec<_>>>()?;
    let score = |i: usize| vals.iter().filter(|w| vals[i].ge(w)).count();
    let best = (0..samples.len())
        .max_by(|&a, &b| score(a).cmp(&score(b)).then(b.cmp(&a)))
        .expect("at least one sample");
    Ok(samples[best].clone())
}

/// `Z(σ_i)` along a trace.
pub fn absorbing_sequence(game: &Ssg, trace: &RunTrace) -> Vec<AbsorbingSet> {
    trace
        .strategy_sequence()
        .into_iter()
        .map(|s| graph::max_absorbing(game, s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Vertex;
    use crate::rational::ratio;

    fn two_sinks() -> Ssg {
        // max 0 -> {sink0 1, sink1 2}
        Ssg::from_vertices(vec![Vertex::max([1, 2]), Vertex::sink(ratio(0, 1)), Vertex::sink(ratio(1, 1))])
    }

    #[test]
    fn strictify_keeps_strict_improvement() {
        let g = two_sinks();
        let sigma = default_init(&g);
        let better = Strategy::from_pairs(&g, Player::Max, [(VertexId(0), VertexId(2))]).unwrap();
        let v = values::value_of_max(&g, &sigma).unwrap();
        let (s, _, w) = strictify_in(&g, &sigma, &v, &better).unwrap();
        assert_eq!(s, better);
        assert_eq!(w.increased, vec![VertexId(0)]);
        assert!(strictify_in(&g, &better, &values::value_of_max(&g, &better).unwrap(), &sigma).is_err());
    }

    #[test]
    fn strictify_reverts_ties() {
        // max 0 -> {sink1 2, sink1' 3}, max 4 -> {sink0 1, sink1 2}
        let g = Ssg::from_vertices(vec![
            Vertex::max([2, 3]),
            Vertex::sink(ratio(0, 1)),
            Vertex::sink(ratio(1, 1)),
            Vertex::sink(ratio(1, 1)),
            Vertex::max([1, 2]),
        ]);
        let sigma = default_init(&g);
        let prime = Strategy::from_pairs(&g, Player::Max, [(VertexId(0), VertexId(3)), (VertexId(4), VertexId(2))]).unwrap();
        let v = values::value_of_max(&g, &sigma).unwrap();
        let (s, _, w) = strictify_in(&g, &sigma, &v, &prime).unwrap();
        assert_eq!(s.at(VertexId(0)), VertexId(2));
        assert_eq!(s.at(VertexId(4)), VertexId(2));
        assert_eq!(w.tied_unchanged, vec![VertexId(0)]);
    }

    #[test]
    fn dai_ge_single_sample() {
        let g = two_sinks();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let expected = Strategy::random(&g, Player::Max, &mut rng);
        assert_eq!(dai_ge_init(&g, 1, 5).unwrap(), expected);
    }
}
