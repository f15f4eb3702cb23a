use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Ssg, VertexId, VertexKind};
use crate::rational::{self, Rational};
use crate::strategy::{Strategy, ValueVector};
use crate::values;

#[derive(Clone, Debug, Serialize)]
pub struct IjmaOutcome {
    pub values: ValueVector,
    pub sigma: Strategy,
    pub tau: Strategy,
    /// Deterministic solves performed, counting the final one.
    pub steps: usize,
    /// `v_0, v_1, …` on the random vertices.
    #[serde(skip)]
    pub iterates: Vec<BTreeMap<VertexId, Rational>>,
}

const STEP_CAP: usize = 100_000;

/// Value iteration on the random vertices. Each step solves the
/// deterministic game where random vertices are sinks holding the current
/// vector, then averages. The run stops at the first step whose input
/// vector rounds to a certified optimal vector.
pub fn ijma(game: &Ssg, q: u64) -> Result<IjmaOutcome> {
    iterate(game, q, None)
}

/// [`ijma`], but every `period` steps the update is raised to the exact
/// values of the greedy strategy against a best response.
pub fn hybrid(game: &Ssg, q: u64, period: usize) -> Result<IjmaOutcome> {
    if period == 0 {
        return Err(Error::InvalidArgument("period must be at least 1".into()));
    }
    iterate(game, q, Some(period))
}

fn iterate(game: &Ssg, q: u64, period: Option<usize>) -> Result<IjmaOutcome> {
    let info = crate::game::infer_q(game)?;
    if let Some((&x, _)) = info.q_x.iter().find(|(_, &qx)| qx > q) {
        return Err(Error::NotQSsg(format!("q_x at {x} exceeds q = {q}")));
    }
    let sinks_lcm = rational::lcm_of_denominators(game.of_kind(VertexKind::Sink).filter_map(|s| game.sink_value(s)));
    let max_den = sinks_lcm * rational::big_pow(q, game.r());
    let tolerance = Rational::new(BigInt::one(), BigInt::from(2) * &max_den * &max_den);
    let randoms = game.random_vertices();
    let mut v: BTreeMap<VertexId, Rational> = randoms.iter().map(|&x| (x, Rational::zero())).collect();
    let mut iterates = vec![v.clone()];
    let mut greedy: Option<Strategy> = None;
    for step in 1..=STEP_CAP {
        if let Some((values, sigma, tau)) = certify_rounding(game, &v, &max_den, &tolerance)? {
            return Ok(IjmaOutcome {
                values,
                sigma,
                tau,
                steps: step,
                iterates,
            });
        }
        let det = game.with_vertices_as_sinks(&v);
        let (det_v, _, _) = values::solve_deterministic(&det)?;
        let mut next: BTreeMap<VertexId, Rational> = randoms
            .iter()
            .map(|&x| (x, game.distribution(x).map(|(y, p)| p * &det_v[y]).sum()))
            .collect();
        if period.is_some_and(|p| step % p == 0) {
            let sigma = values::optimal_max_strategy(&det, &det_v, greedy.as_ref())?;
            let exact = values::value_of_max(game, &sigma)?;
            for (x, val) in next.iter_mut() {
                if exact[*x] > *val {
                    *val = exact[*x].clone();
                }
            }
            greedy = Some(sigma);
        }
        v = next;
        iterates.push(v.clone());
    }
    Err(Error::IterationLimit(STEP_CAP))
}

/// Rounds `v` to denominators at most `max_den`; when every coordinate is
/// within `tolerance` and the rounded vector is realised by an optimal
/// pair, returns that pair and its values.
fn certify_rounding(
    game: &Ssg,
    v: &BTreeMap<VertexId, Rational>,
    max_den: &BigInt,
    tolerance: &Rational,
) -> Result<Option<(ValueVector, Strategy, Strategy)>> {
    let mut rounded = BTreeMap::new();
    for (&x, approx) in v {
        match rational::round_to_denominator(approx, max_den, tolerance) {
            Some(r) => {
                rounded.insert(x, r);
            }
            None => return Ok(None),
        }
    }
    let det = game.with_vertices_as_sinks(&rounded);
    let (candidate, _, _) = values::solve_deterministic(&det)?;
    let Ok(sigma) = values::optimal_max_strategy(game, &candidate, None) else {
        return Ok(None);
    };
    let (tau, exact) = values::best_response_min(game, &sigma)?;
    if exact != candidate {
        return Ok(None);
    }
    let cert = values::certify(game, &sigma, &tau, exact);
    Ok(cert.optimal.then(|| (cert.values, sigma, tau)))
}
