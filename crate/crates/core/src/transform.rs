//! The transformed games `G[A,f]` and `G[A,σ]`.
//!
//! Every fixed arc `e = (x,y)` is redirected to a fresh sink `s_e` of
//! value `f(e)`. Original ids are kept; A-sinks are appended after them in
//! arc order.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Ssg, Vertex, VertexId, VertexKind};
use crate::rational::{self, Rational};
use crate::strategy::{Arc, ArcSet, Strategy};
use crate::values;

/// `f`: a value for each fixed arc.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SinkAssignment(pub BTreeMap<Arc, Rational>);

impl SinkAssignment {
    /// `f(e) = values(head of e)`.
    pub fn from_head_values(arcs: &ArcSet, values: &crate::strategy::ValueVector) -> Self {
        SinkAssignment(arcs.iter().map(|a| (*a, values[a.to].clone())).collect())
    }

    pub fn get(&self, arc: &Arc) -> Option<&Rational> {
        self.0.get(arc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformedGame {
    pub base: Ssg,
    pub derived: Ssg,
    pub arcs: ArcSet,
    pub assignment: SinkAssignment,
    pub arc_to_sink: BTreeMap<Arc, VertexId>,
}

#[derive(Serialize)]
struct ArcSinkEntry {
    arc: [usize; 2],
    sink: VertexId,
    value: String,
}

impl TransformedGame {
    /// `(arc, A-sink, value)` triples for reports.
    pub fn arc_sink_report(&self) -> serde_json::Value {
        let entries: Vec<ArcSinkEntry> = self
            .arc_to_sink
            .iter()
            .map(|(a, &s)| ArcSinkEntry {
                arc: [a.from.0, a.to.0],
                sink: s,
                value: rational::format(&self.assignment.0[a]),
            })
            .collect();
        serde_json::to_value(entries).expect("serializable")
    }

    /// Number of vertices of the base game; derived ids below this are
    /// original vertices.
    pub fn base_len(&self) -> usize {
        self.base.len()
    }

    pub fn is_a_sink(&self, x: VertexId) -> bool {
        x.0 >= self.base.len()
    }

    /// The identification of base strategies with derived ones.
    pub fn lift_strategy(&self, sigma: &Strategy) -> Strategy {
        let mut lifted = sigma.resized(self.derived.len());
        for (x, y) in sigma.pairs() {
            if let Some(&s) = self.arc_to_sink.get(&Arc { from: x, to: y }) {
                lifted.set(x, s);
            }
        }
        lifted
    }

    /// Inverse of [`TransformedGame::lift_strategy`].
    pub fn restrict_strategy(&self, sigma: &Strategy) -> Strategy {
        let sink_to_arc: BTreeMap<VertexId, Arc> = self.arc_to_sink.iter().map(|(a, &s)| (s, *a)).collect();
        let mut restricted = sigma.resized(self.base.len());
        for (x, y) in sigma.pairs() {
            if x.0 >= self.base.len() {
                continue;
            }
            if let Some(a) = sink_to_arc.get(&y) {
                restricted.set(x, a.to);
            }
        }
        restricted
    }
}

/// `G[A,f]`.
pub fn build(game: &Ssg, arcs: &ArcSet, f: &SinkAssignment) -> Result<TransformedGame> {
    let arcs = ArcSet::checked(game, arcs.iter().copied())?;
    let mut vertices = game.vertices().to_vec();
    let mut arc_to_sink = BTreeMap::new();
    for a in arcs.iter() {
        let value = f
            .get(a)
            .ok_or_else(|| Error::InvalidArgument(format!("no sink value for arc {a}")))?;
        if !rational::in_unit_interval(value) {
            return Err(Error::SinkValueOutOfRange(rational::format(value), a.from, a.to));
        }
        let s = VertexId(vertices.len());
        vertices.push(Vertex::sink(value.clone()));
        let slot = vertices[a.from.0]
            .succ
            .iter()
            .position(|&y| y == a.to)
            .expect("checked arc");
        vertices[a.from.0].succ[slot] = s;
        arc_to_sink.insert(*a, s);
    }
    if f.0.len() != arcs.len() {
        return Err(Error::InvalidArgument("sink assignment domain differs from A".into()));
    }
    let derived = Ssg::from_vertices(vertices);
    debug_assert!(derived.validate().is_ok());
    Ok(TransformedGame {
        base: game.clone(),
        derived,
        arcs,
        assignment: f.clone(),
        arc_to_sink,
    })
}

/// `G[A,σ]`: `f(e) = v_σ(head of e)`.
pub fn from_strategy(game: &Ssg, arcs: &ArcSet, sigma: &Strategy) -> Result<TransformedGame> {
    let v = values::value_of_max(game, sigma)?;
    build(game, arcs, &SinkAssignment::from_head_values(arcs, &v))
}

/// `G[A,v]` for a known vector; lets callers reuse a best-response solve.
pub fn from_values(game: &Ssg, arcs: &ArcSet, v: &crate::strategy::ValueVector) -> Result<TransformedGame> {
    build(game, arcs, &SinkAssignment::from_head_values(arcs, v))
}

/// Whether every successor of `x` in the derived game is an A-sink.
pub fn fully_fixed(tg: &TransformedGame, x: VertexId) -> bool {
    tg.derived.kind(x) != VertexKind::Sink && tg.derived.succ(x).iter().all(|&y| tg.is_a_sink(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Player;
    use crate::rational::ratio;

    /// max m(0) -> {c(1), sink0(2)}; c -> sink0, sink1(3).
    fn coin_with_max() -> Ssg {
        Ssg::from_vertices(vec![
            Vertex::max([1, 2]),
            Vertex::random([(2, ratio(1, 2)), (3, ratio(1, 2))]),
            Vertex::sink(ratio(0, 1)),
            Vertex::sink(ratio(1, 1)),
        ])
    }

    #[test]
    fn empty_transformation_is_identity() {
        let g = coin_with_max();
        let tg = build(&g, &ArcSet::new(), &SinkAssignment::default()).unwrap();
        assert_eq!(tg.derived, g);
    }

    #[test]
    fn from_strategy_uses_head_value() {
        let g = coin_with_max();
        let sigma = Strategy::first_successor(&g, Player::Max);
        let a = ArcSet::checked(&g, [Arc::new(0, 1)]).unwrap();
        let tg = from_strategy(&g, &a, &sigma).unwrap();
        let s = tg.arc_to_sink[&Arc::new(0, 1)];
        assert_eq!(s, VertexId(4));
        assert_eq!(tg.derived.sink_value(s), Some(&ratio(1, 2)));
        assert_eq!(tg.derived.succ(VertexId(0)), &[VertexId(4), VertexId(2)]);
        let lifted = tg.lift_strategy(&sigma);
        assert_eq!(lifted.at(VertexId(0)), s);
        assert_eq!(tg.restrict_strategy(&lifted), sigma);
    }

    #[test]
    fn fixing_random_arcs() {
        let g = coin_with_max();
        let a = ArcSet::random_out(&g);
        let tg = from_strategy(&g, &a, &Strategy::first_successor(&g, Player::Max)).unwrap();
        assert!(fully_fixed(&tg, VertexId(1)));
        assert_eq!(tg.derived.probs(VertexId(1)), g.probs(VertexId(1)));
    }

    #[test]
    fn rejects_bad_input() {
        let g = coin_with_max();
        assert!(ArcSet::checked(&g, [Arc::new(0, 3)]).is_err());
        let a = ArcSet::checked(&g, [Arc::new(0, 1)]).unwrap();
        let f = SinkAssignment([(Arc::new(0, 1), ratio(3, 2))].into_iter().collect());
        assert!(matches!(build(&g, &a, &f), Err(Error::SinkValueOutOfRange(..))));
        assert!(build(&g, &a, &SinkAssignment::default()).is_err());
    }
}
