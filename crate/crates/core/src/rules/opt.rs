use std::path::PathBuf;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::engine::{self, ImprovementRule};
use crate::error::{Error, Result};
use crate::game::{Player, Ssg, VertexKind};
use crate::graph;
use crate::rational::Rational;
use crate::rules::{HkVariant, HoffmanKarp};
use crate::strategy::{Arc, ArcSet, Strategy, ValueVector};
use crate::transform::{self, SinkAssignment, TransformedGame};
use crate::values;

/// How a rule's fixed arc set is obtained from the game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArcSpec {
    /// `R`: every arc out of a random vertex.
    RandomOut,
    /// Every arc entering a min vertex.
    MinIn,
    /// One arc out of each random vertex.
    RandomCover,
    /// Back arcs of a depth-first search, a feedback arc set.
    DfsBack,
    All,
    Fixed(ArcSet),
    File(PathBuf),
}

#[derive(Deserialize)]
struct ArcFile {
    arcs: Vec<[usize; 2]>,
}

impl ArcSpec {
    /// `R`, `minin`, `cover`, `dfs`, `all`, or a path to an arc file.
    pub fn parse(text: &str) -> Self {
        match text {
            "R" => ArcSpec::RandomOut,
            "minin" => ArcSpec::MinIn,
            "cover" => ArcSpec::RandomCover,
            "dfs" => ArcSpec::DfsBack,
            "all" => ArcSpec::All,
            path => ArcSpec::File(PathBuf::from(path)),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ArcSpec::RandomOut => "R".into(),
            ArcSpec::MinIn => "minin".into(),
            ArcSpec::RandomCover => "cover".into(),
            ArcSpec::DfsBack => "dfs".into(),
            ArcSpec::All => "all".into(),
            ArcSpec::Fixed(_) => "fixed".into(),
            ArcSpec::File(p) => p.display().to_string(),
        }
    }

    pub fn resolve(&self, game: &Ssg) -> Result<ArcSet> {
        Ok(match self {
            ArcSpec::RandomOut => ArcSet::random_out(game),
            ArcSpec::MinIn => ArcSet::min_in(game),
            ArcSpec::RandomCover => ArcSet::random_cover(game),
            ArcSpec::DfsBack => graph::dfs_back_arcs(game),
            ArcSpec::All => ArcSet::all(game),
            ArcSpec::Fixed(a) => ArcSet::checked(game, a.iter().copied())?,
            ArcSpec::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
                let file: ArcFile = serde_json::from_str(&text)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                ArcSet::checked(game, file.arcs.iter().map(|&[x, y]| Arc::new(x, y)))?
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgameMethod {
    /// Random vertices only lead to sinks: collapse them and solve the
    /// deterministic remainder.
    Deterministic,
    /// No arc enters a min vertex: a one-player problem for max.
    OnePlayer,
    /// Each random vertex has a sink arc: value iteration and rounding.
    ValueIteration,
    /// Nested Hoffman-Karp run.
    StrategyIteration,
}

/// Optimal values of a game, by the cheapest method that applies.
/// `hint` seeds the fallback strategy iteration.
pub fn solve_subgame(game: &Ssg, hint: &Strategy) -> Result<(ValueVector, SubgameMethod)> {
    if let Some(collapsed) = values::collapse_fixed_random(game) {
        let (v, _, _) = values::solve_deterministic(&collapsed)?;
        return Ok((v, SubgameMethod::Deterministic));
    }
    let min_entered = game.arcs().any(|(_, y)| game.kind(y) == VertexKind::Min);
    if !min_entered {
        let tau = Strategy::first_successor(game, Player::Min);
        let (_, mut v) = values::best_response_max_from(game, &tau, Some(hint))?;
        for x in game.of_kind(VertexKind::Min) {
            let low = game.succ(x).iter().map(|&y| v[y].clone()).min().expect("successor");
            v.0[x.0] = low;
        }
        return Ok((v, SubgameMethod::OnePlayer));
    }
    if let Some((_, mass)) = values::min_sink_mass(game) {
        if !mass.is_zero() {
            let bound = values::value_denominator_bound(game)?;
            let v = values::vi_rounding(game, &bound, &mass)?;
            return Ok((v, SubgameMethod::ValueIteration));
        }
    }
    let mut hk = HoffmanKarp::new(HkVariant::AllSwitches);
    let result = engine::run(game, &mut hk, hint.clone())?;
    Ok((result.values, SubgameMethod::StrategyIteration))
}

/// Opt-GSIA: a constant arc set, and the optimal strategy of each subgame.
pub struct OptRule {
    spec: ArcSpec,
    name: Option<String>,
    arcs: Option<ArcSet>,
    pub methods: Vec<SubgameMethod>,
}

impl OptRule {
    pub fn new(spec: ArcSpec) -> Self {
        OptRule {
            spec,
            name: None,
            arcs: None,
            methods: Vec::new(),
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.into());
        self
    }
}

impl ImprovementRule for OptRule {
    fn name(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("opt:{}", self.spec.label()))
    }

    fn choose_arcs(&mut self, game: &Ssg, _sigma: &Strategy, _iteration: usize) -> Result<ArcSet> {
        if self.arcs.is_none() {
            self.arcs = Some(self.spec.resolve(game)?);
        }
        Ok(self.arcs.clone().expect("resolved"))
    }

    fn improve(&mut self, sub: &TransformedGame, sigma: &Strategy, current: &ValueVector) -> Result<Option<Strategy>> {
        let (v, method) = solve_subgame(&sub.derived, sigma)?;
        self.methods.push(method);
        if &v == current {
            return Ok(None);
        }
        values::optimal_max_strategy(&sub.derived, &v, Some(sigma)).map(Some)
    }
}

/// Direct vector formulation of Converge From Below.
#[derive(Clone, Debug, Serialize)]
pub struct CfbDirect {
    pub values: ValueVector,
    pub sigma: Strategy,
    pub tau: Strategy,
    /// `v_r` of every loop, in order.
    pub responses: Vec<ValueVector>,
    /// The feasible stable vectors `v`, starting with the initial one.
    pub feasible: Vec<ValueVector>,
}

/// Feasible vector with min vertices set to `min_values` and every max
/// vertex stable: optimal values of `G[A_min, min_values]`, min vertices
/// overwritten. Also returns the subgame for strategy extraction.
fn stable_vector(game: &Ssg, arcs: &ArcSet, min_values: &ValueVector, hint: &Strategy) -> Result<(ValueVector, TransformedGame)> {
    let sub = transform::build(game, arcs, &SinkAssignment::from_head_values(arcs, min_values))?;
    let (mut v, _) = solve_subgame(&sub.derived, &sub.lift_strategy(hint))?;
    for x in game.of_kind(VertexKind::Min) {
        v.0[x.0] = min_values[x].clone();
    }
    Ok((v, sub))
}

/// The max strategy CFB's first loop plays: greedy in the initial
/// feasible vector. Starting Opt-GSIA on `A_min` here aligns its trace with
/// [`cfb_direct`].
pub fn cfb_init(game: &Ssg) -> Result<Strategy> {
    let arcs = ArcSet::min_in(game);
    let start = engine::default_init(game);
    let zeros = ValueVector::zeros(game.len());
    let (_, sub) = stable_vector(game, &arcs, &zeros, &start)?;
    greedy(&sub, &start)
}

fn greedy(sub: &TransformedGame, incumbent: &Strategy) -> Result<Strategy> {
    let (sub_v, _) = solve_subgame(&sub.derived, &sub.lift_strategy(incumbent))?;
    let s = values::optimal_max_strategy(&sub.derived, &sub_v, Some(&sub.lift_strategy(incumbent)))?;
    Ok(sub.restrict_strategy(&s))
}

pub fn cfb_direct(game: &Ssg) -> Result<CfbDirect> {
    let arcs = ArcSet::min_in(game);
    let mut sigma = engine::default_init(game);
    let zeros = ValueVector(vec![Rational::zero(); game.len()]);
    let (mut v, mut sub) = stable_vector(game, &arcs, &zeros, &sigma)?;
    let mut responses = Vec::new();
    let mut feasible = vec![v.clone()];
    let cap = 1_000_000;
    loop {
        sigma = greedy(&sub, &sigma)?;
        let (tau, v_r) = values::best_response_min(game, &sigma)?;
        responses.push(v_r.clone());
        let cert = values::certify(game, &sigma, &tau, v_r.clone());
        if cert.optimal {
            return Ok(CfbDirect {
                values: v_r,
                sigma,
                tau,
                responses,
                feasible,
            });
        }
        if responses.len() >= cap {
            return Err(Error::IterationLimit(cap));
        }
        (v, sub) = stable_vector(game, &arcs, &v_r, &sigma)?;
        feasible.push(v.clone());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Vertex, VertexId};
    use crate::rational::ratio;

    #[test]
    fn parses_specs() {
        assert_eq!(ArcSpec::parse("R"), ArcSpec::RandomOut);
        assert_eq!(ArcSpec::parse("minin"), ArcSpec::MinIn);
        assert!(matches!(ArcSpec::parse("arcs.json"), ArcSpec::File(_)));
    }

    #[test]
    fn subgame_methods() {
        let coin = Ssg::from_vertices(vec![
            Vertex::random([(1, ratio(1, 2)), (2, ratio(1, 2))]),
            Vertex::sink(ratio(0, 1)),
            Vertex::sink(ratio(1, 1)),
        ]);
        let empty = Strategy::first_successor(&coin, Player::Max);
        let (v, m) = solve_subgame(&coin, &empty).unwrap();
        assert_eq!(m, SubgameMethod::Deterministic);
        assert_eq!(v[VertexId(0)], ratio(1, 2));
        // random 0 -> {max 1, sink1 3}; max 1 -> {0, sink0 2}
        let g = Ssg::from_vertices(vec![
            Vertex::random([(1, ratio(1, 2)), (3, ratio(1, 2))]),
            Vertex::max([0, 2]),
            Vertex::sink(ratio(0, 1)),
            Vertex::sink(ratio(1, 1)),
        ]);
        let hint = Strategy::first_successor(&g, Player::Max);
        let (v, m) = solve_subgame(&g, &hint).unwrap();
        assert_eq!(m, SubgameMethod::OnePlayer);
        assert_eq!(v[VertexId(0)], ratio(1, 1));
    }

    #[test]
    fn cfb_on_coin() {
        let coin = Ssg::from_vertices(vec![
            Vertex::random([(1, ratio(1, 2)), (2, ratio(1, 2))]),
            Vertex::sink(ratio(0, 1)),
            Vertex::sink(ratio(1, 1)),
        ]);
        let out = cfb_direct(&coin).unwrap();
        assert_eq!(out.values[VertexId(0)], ratio(1, 2));
        assert_eq!(out.responses.len(), 1);
    }
}
