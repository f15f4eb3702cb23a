//! Exact value computation: strategy-pair values, best responses,
//! optimality certificates, deterministic games, f-strategies and value
//! iteration with rounding.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{infer_q, Player, Ssg, VertexId, VertexKind};
use crate::graph;
use crate::linalg::LinearSystem;
use crate::rational::{self, Rational};
use crate::strategy::{Strategy, ValueVector};

/// Verdicts for the five conditions of the value characterisation, in
/// order: sinks, random averages, min, max, zero set.
pub type ConditionFlags = [bool; 5];

/// `v_{σ,τ}`: members of `K_{σ,τ}` are fixed to 0, then the remaining
/// random vertices are solved as a linear system.
pub fn value_of_pair(game: &Ssg, sigma: &Strategy, tau: &Strategy) -> Result<ValueVector> {
    let zero = graph::zero_set_pair(game, sigma, tau);
    let len = game.len();
    // Follow max/min choices to the first random vertex or sink. Outside
    // K_{σ,τ} these chains cannot cycle.
    let mut target = vec![None; len];
    for x in game.ids() {
        if zero.contains(x) {
            continue;
        }
        let mut y = x;
        let mut steps = 0;
        loop {
            match game.kind(y) {
                VertexKind::Max => y = sigma.at(y),
                VertexKind::Min => y = tau.at(y),
                _ => break,
            }
            steps += 1;
            if steps > len {
                return Err(Error::Internal(format!("deterministic cycle from {x} outside K")));
            }
        }
        target[x.0] = Some(y);
    }
    let unknowns: Vec<VertexId> = game
        .ids()
        .filter(|&x| game.kind(x) == VertexKind::Random && !zero.contains(x))
        .collect();
    let mut slot = vec![usize::MAX; len];
    for (i, x) in unknowns.iter().enumerate() {
        slot[x.0] = i;
    }
    let mut sys = LinearSystem::zeros(unknowns.len());
    for (i, &x) in unknowns.iter().enumerate() {
        sys.matrix[i][i] += Rational::one();
        for (y, p) in game.distribution(x) {
            let Some(t) = target[y.0] else { continue };
            match game.kind(t) {
                VertexKind::Sink => {
                    let val = game.sink_value(t).expect("sink value");
                    sys.rhs[i] += p * val;
                }
                _ => sys.matrix[i][slot[t.0]] -= p,
            }
        }
    }
    let solution = sys
        .solve()
        .map_err(|_| Error::Internal("singular system after collapsing K_{σ,τ}".into()))?;
    let values = ValueVector(
        game.ids()
            .map(|x| match target[x.0] {
                None => Rational::zero(),
                Some(t) => match game.kind(t) {
                    VertexKind::Sink => game.sink_value(t).expect("sink value").clone(),
                    _ => solution[slot[t.0]].clone(),
                },
            })
            .collect(),
    );
    let flags = pair_conditions(game, sigma, tau, &values);
    if flags.iter().all(|&b| b) {
        Ok(values)
    } else {
        Err(Error::Internal(format!("pair value fails conditions {flags:?}")))
    }
}

/// Independent evaluator for the characterisation of `v_{σ,τ}`.
pub fn pair_conditions(game: &Ssg, sigma: &Strategy, tau: &Strategy, v: &ValueVector) -> ConditionFlags {
    let zero = graph::zero_set_pair(game, sigma, tau);
    [
        sinks_ok(game, v),
        random_ok(game, v),
        game.of_kind(VertexKind::Min).all(|x| v[x] == v[tau.at(x)]),
        game.of_kind(VertexKind::Max).all(|x| v[x] == v[sigma.at(x)]),
        graph::zero_exactly_on(v, &zero.members),
    ]
}

fn sinks_ok(game: &Ssg, v: &ValueVector) -> bool {
    game.of_kind(VertexKind::Sink)
        .all(|s| Some(&v[s]) == game.sink_value(s))
}

fn random_ok(game: &Ssg, v: &ValueVector) -> bool {
    game.of_kind(VertexKind::Random).all(|x| {
        let avg: Rational = game.distribution(x).map(|(y, p)| p * &v[y]).sum();
        v[x] == avg
    })
}

fn min_over<'a>(game: &Ssg, x: VertexId, v: &'a ValueVector) -> &'a Rational {
    game.succ(x).iter().map(|&y| &v[y]).min().expect("successor")
}

fn max_over<'a>(game: &Ssg, x: VertexId, v: &'a ValueVector) -> &'a Rational {
    game.succ(x).iter().map(|&y| &v[y]).max().expect("successor")
}

/// Best response of min to `sigma`, by policy iteration.
pub fn best_response_min(game: &Ssg, sigma: &Strategy) -> Result<(Strategy, ValueVector)> {
    best_response_min_from(game, sigma, None)
}

/// Same as [`best_response_min`], starting from `warm` where it helps.
///
/// Min vertices of `K_σ` are first pointed inside `K_σ`; after that only
/// strict improvements are taken (lowest id among strictly better
/// successors), and each strictly lowers the value vector.
pub fn best_response_min_from(game: &Ssg, sigma: &Strategy, warm: Option<&Strategy>) -> Result<(Strategy, ValueVector)> {
    let k_sigma = graph::zero_set_max(game, sigma);
    let mut tau = Strategy::from_fn(game, Player::Min, |x| {
        let succ = game.succ(x);
        let incumbent = warm.and_then(|w| w.get(x)).filter(|y| succ.contains(y));
        if k_sigma.contains(x) {
            incumbent
                .filter(|y| k_sigma.contains(*y))
                .or_else(|| succ.iter().copied().find(|&y| k_sigma.contains(y)))
                .expect("a K_σ min vertex keeps a successor in K_σ")
        } else {
            incumbent.unwrap_or(succ[0])
        }
    });
    loop {
        let v = value_of_pair(game, sigma, &tau)?;
        let mut changed = false;
        for x in game.of_kind(VertexKind::Min) {
            let current = &v[tau.at(x)];
            if let Some(&y) = game.succ(x).iter().filter(|&&y| &v[y] < current).min() {
                tau.set(x, y);
                changed = true;
            }
        }
        if !changed {
            return Ok((tau, v));
        }
    }
}

/// Best response of max to `tau`, by policy iteration on strict switches.
pub fn best_response_max(game: &Ssg, tau: &Strategy) -> Result<(Strategy, ValueVector)> {
    best_response_max_from(game, tau, None)
}

pub fn best_response_max_from(game: &Ssg, tau: &Strategy, warm: Option<&Strategy>) -> Result<(Strategy, ValueVector)> {
    let mut sigma = Strategy::from_fn(game, Player::Max, |x| {
        warm.and_then(|w| w.get(x))
            .filter(|y| game.succ(x).contains(y))
            .unwrap_or(game.succ(x)[0])
    });
    loop {
        let v = value_of_pair(game, &sigma, tau)?;
        let mut changed = false;
        for x in game.of_kind(VertexKind::Max) {
            let current = &v[sigma.at(x)];
            if let Some(&y) = game.succ(x).iter().filter(|&&y| &v[y] > current).min() {
                sigma.set(x, y);
                changed = true;
            }
        }
        if !changed {
            return Ok((sigma, v));
        }
    }
}

/// `v_σ`, the value of σ against a best response.
pub fn value_of_max(game: &Ssg, sigma: &Strategy) -> Result<ValueVector> {
    best_response_min(game, sigma).map(|(_, v)| v)
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimalityCertificate {
    pub sigma: Strategy,
    pub tau: Strategy,
    pub values: ValueVector,
    /// Sinks, random averages, min minimises, max maximises, zero set
    /// equals `K^G`.
    pub conditions: ConditionFlags,
    pub optimal: bool,
}

pub fn check_optimal(game: &Ssg, sigma: &Strategy, tau: &Strategy) -> Result<OptimalityCertificate> {
    let values = value_of_pair(game, sigma, tau)?;
    Ok(certify(game, sigma, tau, values))
}

/// Certificate for a pair whose value vector is already known.
pub fn certify(game: &Ssg, sigma: &Strategy, tau: &Strategy, values: ValueVector) -> OptimalityCertificate {
    let conditions = optimality_conditions(game, &values);
    OptimalityCertificate {
        sigma: sigma.clone(),
        tau: tau.clone(),
        optimal: conditions.iter().all(|&b| b),
        conditions,
        values,
    }
}

/// The optimality conditions evaluated on a vector alone.
pub fn optimality_conditions(game: &Ssg, v: &ValueVector) -> ConditionFlags {
    let k = graph::zero_set_optimal(game);
    [
        sinks_ok(game, v),
        random_ok(game, v),
        game.of_kind(VertexKind::Min).all(|x| &v[x] == min_over(game, x, v)),
        game.of_kind(VertexKind::Max).all(|x| &v[x] == max_over(game, x, v)),
        graph::zero_exactly_on(v, &k.members),
    ]
}

pub fn is_optimal_vector(game: &Ssg, v: &ValueVector) -> bool {
    optimality_conditions(game, v).iter().all(|&b| b)
}

/// Optimal values and strategies of a game without random vertices.
///
/// Distinct positive sink values are processed in decreasing order. For
/// each value the max-attractor of its sinks is taken inside the vertices
/// not yet assigned (a min vertex joins once all of its unassigned
/// successors are in), assigned that value and removed. What is left has
/// value 0.
pub fn solve_deterministic(game: &Ssg) -> Result<(ValueVector, Strategy, Strategy)> {
    if let Some(x) = game.of_kind(VertexKind::Random).next() {
        return Err(Error::NotDeterministic(x));
    }
    let len = game.len();
    let pred = game.predecessors();
    let mut assigned: Vec<Option<Rational>> = vec![None; len];
    let mut max_choice: Vec<Option<VertexId>> = vec![None; len];
    let levels: BTreeSet<Rational> = game
        .of_kind(VertexKind::Sink)
        .filter_map(|s| game.sink_value(s).cloned())
        .filter(|v| v.is_positive())
        .collect();
    for c in levels.into_iter().rev() {
        let mut remaining: Vec<usize> = game
            .ids()
            .map(|x| game.succ(x).iter().filter(|y| assigned[y.0].is_none()).count())
            .collect();
        let mut in_set = vec![false; len];
        let mut queue = std::collections::VecDeque::new();
        for s in game.of_kind(VertexKind::Sink) {
            if assigned[s.0].is_none() && game.sink_value(s) == Some(&c) {
                in_set[s.0] = true;
                queue.push_back(s);
            }
        }
        while let Some(y) = queue.pop_front() {
            for &p in &pred[y.0] {
                if in_set[p.0] || assigned[p.0].is_some() {
                    continue;
                }
                let joins = match game.kind(p) {
                    VertexKind::Max => {
                        max_choice[p.0] = Some(y);
                        true
                    }
                    VertexKind::Min => {
                        remaining[p.0] -= 1;
                        remaining[p.0] == 0
                    }
                    _ => false,
                };
                if joins {
                    in_set[p.0] = true;
                    queue.push_back(p);
                }
            }
        }
        for x in game.ids() {
            if in_set[x.0] {
                assigned[x.0] = Some(c.clone());
            }
        }
    }
    let values = ValueVector(
        game.ids()
            .map(|x| match game.kind(x) {
                VertexKind::Sink => game.sink_value(x).cloned().unwrap_or_default(),
                _ => assigned[x.0].clone().unwrap_or_else(Rational::zero),
            })
            .collect(),
    );
    let sigma = Strategy::from_fn(game, Player::Max, |x| max_choice[x.0].unwrap_or(game.succ(x)[0]));
    let tau = Strategy::from_fn(game, Player::Min, |x| {
        // cheapest successor; among equals prefer one assigned no later
        let succ = game.succ(x);
        let best = min_over(game, x, &values);
        *succ
            .iter()
            .filter(|&&y| &values[y] == best)
            .min()
            .expect("successor")
    });
    Ok((values, sigma, tau))
}

/// A total order on vertices, lowest first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SinkOrder(pub Vec<VertexId>);

impl SinkOrder {
    /// Order of `vertices` by value, ties broken by id.
    pub fn from_values(vertices: impl IntoIterator<Item = VertexId>, values: &ValueVector) -> Self {
        let mut v: Vec<VertexId> = vertices.into_iter().collect();
        v.sort_by(|a, b| values[*a].cmp(&values[*b]).then(a.cmp(b)));
        SinkOrder(v)
    }

    /// Rank values `k/(m+1)`, `k = 1..m`.
    pub fn rank_values(&self) -> BTreeMap<VertexId, Rational> {
        let m = self.0.len() as i64;
        self.0
            .iter()
            .enumerate()
            .map(|(k, &x)| (x, rational::ratio(k as i64 + 1, m + 1)))
            .collect()
    }
}

/// The game where the ordered vertices become sinks of rank value.
pub fn rank_game(game: &Ssg, order: &SinkOrder) -> Result<Ssg> {
    let required: BTreeSet<VertexId> = game
        .ids()
        .filter(|&x| matches!(game.kind(x), VertexKind::Random | VertexKind::Sink))
        .collect();
    let given: BTreeSet<VertexId> = order.0.iter().copied().collect();
    if given.len() != order.0.len() {
        return Err(Error::InvalidOrder("order repeats a vertex".into()));
    }
    if given != required {
        return Err(Error::InvalidOrder("order must cover exactly the random vertices and sinks".into()));
    }
    Ok(game.with_vertices_as_sinks(&order.rank_values()))
}

/// An f-strategy: optimal max strategy of the rank game of `order`.
pub fn f_strategy(game: &Ssg, order: &SinkOrder) -> Result<Strategy> {
    let ranked = rank_game(game, order)?;
    let (_, sigma, _) = solve_deterministic(&ranked)?;
    Ok(sigma)
}

/// Random vertices replaced by sinks of the given values.
pub fn with_random_as_sinks(game: &Ssg, values: &BTreeMap<VertexId, Rational>) -> Ssg {
    game.with_vertices_as_sinks(values)
}

/// When every random vertex moves only to sinks, replaces each by a sink
/// holding its expected value; `None` otherwise.
pub fn collapse_fixed_random(game: &Ssg) -> Option<Ssg> {
    let mut fixed = BTreeMap::new();
    for x in game.of_kind(VertexKind::Random) {
        let mut total = Rational::zero();
        for (y, p) in game.distribution(x) {
            total += p * game.sink_value(y)?;
        }
        fixed.insert(x, total);
    }
    Some(game.with_vertices_as_sinks(&fixed))
}

/// An optimal max strategy realising the optimal vector `v`.
///
/// In each positive value class, max vertices are pointed along an
/// attractor towards the class exits (sinks, and random vertices with a
/// successor of another value), so no positive-value play can be trapped.
/// The incumbent choice is kept wherever it stays inside its class, and
/// is given up one vertex at a time only when the attractor would stall.
pub fn optimal_max_strategy(game: &Ssg, v: &ValueVector, incumbent: Option<&Strategy>) -> Result<Strategy> {
    let mut choice: Vec<Option<VertexId>> = vec![None; game.len()];
    let mut classes: BTreeMap<&Rational, Vec<VertexId>> = BTreeMap::new();
    for x in game.ids() {
        classes.entry(&v[x]).or_default().push(x);
    }
    let preferred = |x: VertexId| incumbent.and_then(|s| s.get(x)).filter(|&y| game.succ(x).contains(&y));
    for (&c, members) in &classes {
        if c.is_zero() {
            for &x in members.iter().filter(|&&x| game.kind(x) == VertexKind::Max) {
                let best = max_over(game, x, v);
                choice[x.0] = Some(
                    preferred(x)
                        .filter(|&y| &v[y] == best)
                        .unwrap_or_else(|| *game.succ(x).iter().filter(|&&y| &v[y] == best).min().unwrap()),
                );
            }
            continue;
        }
        let mut attracted = vec![false; game.len()];
        let mut restricted: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        for &x in members {
            match game.kind(x) {
                VertexKind::Sink => attracted[x.0] = true,
                VertexKind::Random => {
                    if game.succ(x).iter().any(|&y| &v[y] != c) {
                        attracted[x.0] = true;
                    }
                }
                VertexKind::Max => {
                    if max_over(game, x, v) != c {
                        return Err(Error::Internal(format!("max condition fails at {x}")));
                    }
                    if let Some(y) = preferred(x).filter(|&y| &v[y] == c) {
                        restricted.insert(x, y);
                    }
                }
                VertexKind::Min => {
                    if min_over(game, x, v) != c {
                        return Err(Error::Internal(format!("min condition fails at {x}")));
                    }
                }
            }
        }
        loop {
            let mut changed = true;
            while changed {
                changed = false;
                for &x in members {
                    if attracted[x.0] {
                        continue;
                    }
                    let joins = match game.kind(x) {
                        VertexKind::Max => {
                            let via = match restricted.get(&x) {
                                Some(&y) => attracted[y.0].then_some(y),
                                None => game
                                    .succ(x)
                                    .iter()
                                    .copied()
                                    .filter(|&y| &v[y] == c && attracted[y.0])
                                    .min(),
                            };
                            if let Some(y) = via {
                                choice[x.0] = Some(y);
                            }
                            via.is_some()
                        }
                        VertexKind::Min => game
                            .succ(x)
                            .iter()
                            .filter(|&&y| &v[y] == c)
                            .all(|&y| attracted[y.0]),
                        VertexKind::Random => game.succ(x).iter().any(|&y| attracted[y.0]),
                        VertexKind::Sink => true,
                    };
                    if joins {
                        attracted[x.0] = true;
                        changed = true;
                    }
                }
            }
            if members.iter().all(|x| attracted[x.0]) {
                break;
            }
            let release = members.iter().copied().find(|&x| {
                !attracted[x.0]
                    && restricted.contains_key(&x)
                    && game.succ(x).iter().any(|&y| &v[y] == c && attracted[y.0])
            });
            match release {
                Some(x) => {
                    restricted.remove(&x);
                }
                None => {
                    return Err(Error::Internal(format!(
                        "value class {c} has a trap; the vector is not optimal"
                    )))
                }
            }
        }
    }
    let strategy = Strategy::from_fn(game, Player::Max, |x| choice[x.0].expect("every max vertex chosen"));
    Ok(strategy)
}

/// Mass each random vertex sends straight to sinks; the smallest such mass
/// bounds the per-visit stopping probability of value iteration.
pub fn min_sink_mass(game: &Ssg) -> Option<(VertexId, Rational)> {
    game.of_kind(VertexKind::Random)
        .map(|x| {
            let mass: Rational = game
                .distribution(x)
                .filter(|(y, _)| game.kind(*y) == VertexKind::Sink)
                .map(|(_, p)| p.clone())
                .sum();
            (x, mass)
        })
        .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
}

/// `D · Π q_x` with `D` the lcm of sink denominators: every pair value of
/// the game has a denominator dividing a number no larger than this.
pub fn value_denominator_bound(game: &Ssg) -> Result<BigInt> {
    let info = infer_q(game)?;
    let sinks_lcm = rational::lcm_of_denominators(
        game.of_kind(VertexKind::Sink).filter_map(|s| game.sink_value(s)),
    );
    Ok(info.q_x.values().fold(sinks_lcm, |acc, &q| acc * BigInt::from(q)))
}

/// Exact optimal values by value iteration on the random vertices plus
/// rounding. `q` bounds every `q_x`; the game must send at least `p_min`
/// of each random vertex's mass straight to sinks.
pub fn solve_by_vi_rounding(game: &Ssg, q: u64, p_min: &Rational) -> Result<ValueVector> {
    let info = infer_q(game)?;
    if let Some((&x, _)) = info.q_x.iter().find(|(_, &qx)| qx > q) {
        return Err(Error::InvalidArgument(format!("q_x at {x} exceeds q = {q}")));
    }
    let sinks_lcm = rational::lcm_of_denominators(
        game.of_kind(VertexKind::Sink).filter_map(|s| game.sink_value(s)),
    );
    let max_den = sinks_lcm * rational::big_pow(q, game.r());
    vi_rounding(game, &max_den, p_min)
}

/// Value iteration with a known denominator bound on the optimal values.
pub fn vi_rounding(game: &Ssg, max_den: &BigInt, p_min: &Rational) -> Result<ValueVector> {
    if !p_min.is_positive() {
        return Err(Error::InvalidArgument("p_min must be positive".into()));
    }
    if let Some((x, mass)) = min_sink_mass(game) {
        if &mass < p_min {
            return Err(Error::CoverageUnmet(x));
        }
    }
    let randoms = game.random_vertices();
    let tolerance = Rational::new(BigInt::one(), BigInt::from(2) * max_den * max_den);
    let contraction = Rational::one() - p_min;
    let mut estimate: BTreeMap<VertexId, Rational> = randoms.iter().map(|&x| (x, Rational::zero())).collect();
    let mut error_bound = Rational::one();
    while error_bound >= tolerance && !randoms.is_empty() {
        let (det_values, _, _) = solve_deterministic(&with_random_as_sinks(game, &estimate))?;
        for &x in &randoms {
            let next: Rational = game.distribution(x).map(|(y, p)| p * &det_values[y]).sum();
            estimate.insert(x, next);
        }
        error_bound *= &contraction;
    }
    let mut rounded = BTreeMap::new();
    for (&x, approx) in &estimate {
        let exact = rational::round_to_denominator(approx, max_den, &tolerance)
            .ok_or_else(|| Error::Rounding(format!("no rational near {approx} at {x}")))?;
        rounded.insert(x, exact);
    }
    let (values, _, _) = solve_deterministic(&with_random_as_sinks(game, &rounded))?;
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Vertex;
    use crate::rational::ratio;

    fn coin() -> Ssg {
        Ssg::from_vertices(vec![
            Vertex::random([(1, ratio(1, 2)), (2, ratio(1, 2))]),
            Vertex::sink(ratio(0, 1)),
            Vertex::sink(ratio(1, 1)),
        ])
    }

    fn empty(game: &Ssg, p: Player) -> Strategy {
        Strategy::first_successor(game, p)
    }

    #[test]
    fn coin_value() {
        let g = coin();
        let v = value_of_pair(&g, &empty(&g, Player::Max), &empty(&g, Player::Min)).unwrap();
        assert_eq!(v[VertexId(0)], ratio(1, 2));
        let (tau, v2) = best_response_min(&g, &empty(&g, Player::Max)).unwrap();
        assert!(tau.is_empty());
        assert_eq!(v, v2);
        let cert = check_optimal(&g, &empty(&g, Player::Max), &tau).unwrap();
        assert!(cert.optimal);
    }

    #[test]
    fn min_picks_zero_sink() {
        let g = Ssg::from_vertices(vec![Vertex::min([2, 1]), Vertex::sink(ratio(0, 1)), Vertex::sink(ratio(1, 1))]);
        let (tau, v) = best_response_min(&g, &empty(&g, Player::Max)).unwrap();
        assert_eq!(tau.at(VertexId(0)), VertexId(1));
        assert_eq!(v[VertexId(0)], ratio(0, 1));
        let bad = Strategy::from_pairs(&g, Player::Min, [(VertexId(0), VertexId(2))]).unwrap();
        let cert = check_optimal(&g, &empty(&g, Player::Max), &bad).unwrap();
        assert!(!cert.conditions[2]);
        assert!(!cert.optimal);
    }

    #[test]
    fn max_picks_one_sink() {
        let g = Ssg::from_vertices(vec![Vertex::max([1, 2]), Vertex::sink(ratio(0, 1)), Vertex::sink(ratio(1, 1))]);
        let (sigma, v) = best_response_max(&g, &empty(&g, Player::Min)).unwrap();
        assert_eq!(sigma.at(VertexId(0)), VertexId(2));
        assert_eq!(v[VertexId(0)], ratio(1, 1));
    }

    #[test]
    fn min_trap_in_best_response() {
        // min vertex 0 can loop through max vertex 1 (whose only move is
        // back) or exit to a coin; best response traps.
        let g = Ssg::from_vertices(vec![
            Vertex::min([2, 1]),
            Vertex::max([0]),
            Vertex::random([(3, ratio(1, 2)), (4, ratio(1, 2))]),
            Vertex::sink(ratio(0, 1)),
            Vertex::sink(ratio(1, 1)),
        ]);
        let (tau, v) = best_response_min(&g, &empty(&g, Player::Max)).unwrap();
        assert_eq!(tau.at(VertexId(0)), VertexId(1));
        assert!(v[VertexId(0)].is_zero());
    }

    #[test]
    fn deterministic_max_and_min() {
        let g = Ssg::from_vertices(vec![
            Vertex::max([2, 3]),
            Vertex::min([2, 3]),
            Vertex::sink(ratio(1, 3)),
            Vertex::sink(ratio(2, 3)),
        ]);
        let (v, sigma, tau) = solve_deterministic(&g).unwrap();
        assert_eq!(v[VertexId(0)], ratio(2, 3));
        assert_eq!(sigma.at(VertexId(0)), VertexId(3));
        assert_eq!(v[VertexId(1)], ratio(1, 3));
        assert_eq!(tau.at(VertexId(1)), VertexId(2));
        assert!(solve_deterministic(&coin()).is_err());
    }

    #[test]
    fn deterministic_min_cycle_is_zero() {
        // min 0 -> {max 1, sink 1}; max 1 -> {min 0}. min cycles forever.
        let g = Ssg::from_vertices(vec![Vertex::min([1, 2]), Vertex::max([0]), Vertex::sink(ratio(1, 1))]);
        let (v, _, tau) = solve_deterministic(&g).unwrap();
        assert!(v[VertexId(0)].is_zero());
        assert_eq!(tau.at(VertexId(0)), VertexId(1));
    }

    #[test]
    fn f_strategy_follows_order() {
        // max 0 -> {coin 1, sink0 2}; sinks 2 (0), 3 (1)
        let g = Ssg::from_vertices(vec![
            Vertex::max([1, 2]),
            Vertex::random([(2, ratio(1, 2)), (3, ratio(1, 2))]),
            Vertex::sink(ratio(0, 1)),
            Vertex::sink(ratio(1, 1)),
        ]);
        let order = SinkOrder(vec![VertexId(2), VertexId(1), VertexId(3)]);
        assert_eq!(f_strategy(&g, &order).unwrap().at(VertexId(0)), VertexId(1));
        let order = SinkOrder(vec![VertexId(1), VertexId(2), VertexId(3)]);
        assert_eq!(f_strategy(&g, &order).unwrap().at(VertexId(0)), VertexId(2));
        assert!(f_strategy(&g, &SinkOrder(vec![VertexId(1), VertexId(2)])).is_err());
    }

    #[test]
    fn vi_rounding_coin() {
        assert_eq!(solve_by_vi_rounding(&coin(), 2, &ratio(1, 1)).unwrap()[VertexId(0)], ratio(1, 2));
    }

    #[test]
    fn vi_rounding_requires_coverage() {
        let g = Ssg::from_vertices(vec![
            Vertex::random([(1, ratio(1, 2)), (2, ratio(1, 2))]),
            Vertex::random([(0, ratio(1, 2)), (2, ratio(1, 2))]),
            Vertex::sink(ratio(1, 1)),
        ]);
        assert!(matches!(
            solve_by_vi_rounding(&g, 2, &ratio(1, 1)),
            Err(Error::CoverageUnmet(VertexId(0)))
        ));
        assert!(solve_by_vi_rounding(&g, 2, &ratio(1, 2)).is_ok());
    }

    #[test]
    fn extraction_avoids_traps() {
        // max 0 -> {random 1, sink1 3}; random 1 -> {max 0: 1/2, max 2: 1/2};
        // max 2 -> {max 0}. Everything has value 1; pointing 0 at 1 traps.
        let g = Ssg::from_vertices(vec![
            Vertex::max([1, 3]),
            Vertex::random([(0, ratio(1, 2)), (2, ratio(1, 2))]),
            Vertex::max([0]),
            Vertex::sink(ratio(1, 1)),
        ]);
        let v = ValueVector(vec![ratio(1, 1); 4]);
        let trap = Strategy::from_pairs(&g, Player::Max, [(VertexId(0), VertexId(1)), (VertexId(2), VertexId(0))]).unwrap();
        let sigma = optimal_max_strategy(&g, &v, Some(&trap)).unwrap();
        assert_eq!(sigma.at(VertexId(0)), VertexId(3));
        assert_eq!(value_of_max(&g, &sigma).unwrap(), v);
    }
}
