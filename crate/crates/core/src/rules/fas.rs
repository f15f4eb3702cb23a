use num_traits::Zero;

use crate::engine::ImprovementRule;
use crate::error::Result;
use crate::game::{Ssg, VertexKind};
use crate::graph;
use crate::rational::Rational;
use crate::rules::ArcSpec;
use crate::strategy::{ArcSet, Strategy, ValueVector};
use crate::transform::TransformedGame;
use crate::values;

/// Optimal values of an acyclic game, in reverse topological order.
pub fn backward_induction(game: &Ssg) -> Result<ValueVector> {
    let order = graph::topological_order_without(game, &ArcSet::new())?;
    let mut v = vec![Rational::zero(); game.len()];
    for &x in order.iter().rev() {
        let succ = game.succ(x).iter().map(|&y| &v[y.0]);
        v[x.0] = match game.kind(x) {
            VertexKind::Sink => game.sink_value(x).cloned().unwrap_or_default(),
            VertexKind::Max => succ.max().cloned().expect("successor"),
            VertexKind::Min => succ.min().cloned().expect("successor"),
            VertexKind::Random => game.distribution(x).map(|(y, p)| p * &v[y.0]).sum(),
        };
    }
    Ok(ValueVector(v))
}

/// Opt-GSIA over a feedback arc set: every subgame is acyclic.
pub struct FeedbackArcSetRule {
    spec: ArcSpec,
    arcs: Option<ArcSet>,
}

impl FeedbackArcSetRule {
    pub fn new(spec: ArcSpec) -> Self {
        FeedbackArcSetRule { spec, arcs: None }
    }
}

impl ImprovementRule for FeedbackArcSetRule {
    fn name(&self) -> String {
        format!("fas:{}", self.spec.label())
    }

    fn choose_arcs(&mut self, game: &Ssg, _sigma: &Strategy, _iteration: usize) -> Result<ArcSet> {
        if self.arcs.is_none() {
            let arcs = self.spec.resolve(game)?;
            graph::topological_order_without(game, &arcs)?;
            self.arcs = Some(arcs);
        }
        Ok(self.arcs.clone().expect("resolved"))
    }

    fn improve(&mut self, sub: &TransformedGame, sigma: &Strategy, current: &ValueVector) -> Result<Option<Strategy>> {
        let v = backward_induction(&sub.derived)?;
        if &v == current {
            return Ok(None);
        }
        values::optimal_max_strategy(&sub.derived, &v, Some(sigma)).map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine;
    use crate::error::Error;
    use crate::game::{Vertex, VertexId};
    use crate::rational::ratio;
    use crate::strategy::Arc;

    /// max 0 <-> max 1, each may also exit: 0 -> coin 2, 1 -> sink1 4.
    fn two_cycle() -> Ssg {
        Ssg::from_vertices(vec![
            Vertex::max([1, 2]),
            Vertex::max([0, 4]),
            Vertex::random([(3, ratio(1, 2)), (4, ratio(1, 2))]),
            Vertex::sink(ratio(0, 1)),
            Vertex::sink(ratio(1, 1)),
        ])
    }

    #[test]
    fn rejects_non_feedback_sets() {
        let mut rule = FeedbackArcSetRule::new(ArcSpec::Fixed(ArcSet::new()));
        let g = two_cycle();
        let err = rule.choose_arcs(&g, &engine::default_init(&g), 0).unwrap_err();
        assert!(matches!(err, Error::NotFeedbackArcSet(_)));
    }

    #[test]
    fn breaks_two_cycle() {
        let g = two_cycle();
        let a = ArcSet::checked(&g, [Arc::new(1, 0)]).unwrap();
        let mut rule = FeedbackArcSetRule::new(ArcSpec::Fixed(a));
        let out = engine::run(&g, &mut rule, engine::default_init(&g)).unwrap();
        assert_eq!(out.values[VertexId(0)], ratio(1, 1));
        assert_eq!(out.values[VertexId(1)], ratio(1, 1));
    }

    #[test]
    fn acyclic_game_in_one_step() {
        let g = Ssg::from_vertices(vec![
            Vertex::max([1, 2]),
            Vertex::random([(2, ratio(1, 2)), (3, ratio(1, 2))]),
            Vertex::sink(ratio(0, 1)),
            Vertex::sink(ratio(1, 1)),
        ]);
        let mut rule = FeedbackArcSetRule::new(ArcSpec::Fixed(ArcSet::new()));
        let init = Strategy::from_pairs(&g, crate::game::Player::Max, [(VertexId(0), VertexId(2))]).unwrap();
        let out = engine::run(&g, &mut rule, init).unwrap();
        assert_eq!(out.trace.iterations, 1);
        assert_eq!(out.values[VertexId(0)], ratio(1, 2));
    }
}
