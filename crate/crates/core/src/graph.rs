//! Reachability, zero-value sets and absorbing sets.
//!
//! Everything here is a graph fixpoint; no linear algebra.

use std::collections::{BTreeSet, VecDeque};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Player, Ssg, VertexId, VertexKind};
use crate::strategy::{Arc, ArcSet, Strategy};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReachSet {
    pub source: VertexId,
    pub members: BTreeSet<VertexId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ZeroFlavor {
    /// `K^G`: value 0 under optimal play.
    Optimal,
    /// `K_{σ,τ}`: value 0 under a fixed pair.
    Pair,
    /// `K_σ`: value 0 under σ and a best response.
    MaxOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroSet {
    pub flavor: ZeroFlavor,
    pub members: BTreeSet<VertexId>,
}

impl ZeroSet {
    pub fn contains(&self, x: VertexId) -> bool {
        self.members.contains(&x)
    }
}

/// A sink-free set no play leaves under the strategies it was computed for.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AbsorbingSet {
    pub members: BTreeSet<VertexId>,
}

impl AbsorbingSet {
    pub fn is_subset(&self, other: &AbsorbingSet) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// Successors a play can move to from `x` when max plays `sigma` and min
/// plays `tau`. Sinks have none.
fn pair_successors<'a>(game: &'a Ssg, sigma: &'a Strategy, tau: &'a Strategy, x: VertexId) -> PairSucc<'a> {
    match game.kind(x) {
        VertexKind::Max => PairSucc::One(Some(sigma.at(x))),
        VertexKind::Min => PairSucc::One(Some(tau.at(x))),
        VertexKind::Random => PairSucc::Many(game.succ(x).iter()),
        VertexKind::Sink => PairSucc::One(None),
    }
}

enum PairSucc<'a> {
    One(Option<VertexId>),
    Many(std::slice::Iter<'a, VertexId>),
}

impl Iterator for PairSucc<'_> {
    type Item = VertexId;
    fn next(&mut self) -> Option<VertexId> {
        match self {
            PairSucc::One(x) => x.take(),
            PairSucc::Many(it) => it.next().copied(),
        }
    }
}

pub fn reach(game: &Ssg, sigma: &Strategy, tau: &Strategy, x: VertexId) -> ReachSet {
    let mut seen = vec![false; game.len()];
    let mut queue = VecDeque::from([x]);
    seen[x.0] = true;
    while let Some(u) = queue.pop_front() {
        for v in pair_successors(game, sigma, tau, u) {
            if !seen[v.0] {
                seen[v.0] = true;
                queue.push_back(v);
            }
        }
    }
    ReachSet {
        source: x,
        members: to_set(&seen),
    }
}

fn to_set(flags: &[bool]) -> BTreeSet<VertexId> {
    flags
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| VertexId(i))
        .collect()
}

fn complement(flags: &[bool]) -> BTreeSet<VertexId> {
    flags
        .iter()
        .enumerate()
        .filter(|(_, &b)| !b)
        .map(|(i, _)| VertexId(i))
        .collect()
}

fn is_positive_sink(game: &Ssg, x: VertexId) -> bool {
    game.kind(x) == VertexKind::Sink && game.sink_value(x).is_some_and(|v| v.is_positive())
}

/// Vertices that can reach a vertex satisfying `target` along the arcs
/// fixed by `(sigma, tau)`.
fn backward_closure(game: &Ssg, sigma: &Strategy, tau: &Strategy, target: impl Fn(VertexId) -> bool) -> Vec<bool> {
    let pred = game.predecessors();
    let mut mark = vec![false; game.len()];
    let mut queue: VecDeque<VertexId> = game.ids().filter(|&x| target(x)).collect();
    for x in &queue {
        mark[x.0] = true;
    }
    while let Some(y) = queue.pop_front() {
        for &p in &pred[y.0] {
            if mark[p.0] {
                continue;
            }
            let active = match game.kind(p) {
                VertexKind::Max => sigma.at(p) == y,
                VertexKind::Min => tau.at(p) == y,
                VertexKind::Random => true,
                VertexKind::Sink => false,
            };
            if active {
                mark[p.0] = true;
                queue.push_back(p);
            }
        }
    }
    mark
}

/// Least fixpoint attractor. `forced_min` selects whether a min vertex
/// joins when all (true) or some (false) successors are in the set; max
/// vertices join via `max_choice` if given, else via any successor.
/// Random vertices join when any successor is in the set.
fn attractor(
    game: &Ssg,
    seed: impl Fn(VertexId) -> bool,
    max_choice: Option<&Strategy>,
    min_choice: Option<&Strategy>,
) -> Vec<bool> {
    let pred = game.predecessors();
    let mut mark = vec![false; game.len()];
    let mut remaining: Vec<usize> = game.ids().map(|x| game.succ(x).len()).collect();
    let mut queue: VecDeque<VertexId> = game.ids().filter(|&x| seed(x)).collect();
    for x in &queue {
        mark[x.0] = true;
    }
    while let Some(y) = queue.pop_front() {
        for &p in &pred[y.0] {
            if mark[p.0] {
                continue;
            }
            let joins = match game.kind(p) {
                VertexKind::Max => max_choice.is_none_or(|s| s.at(p) == y),
                VertexKind::Min => match min_choice {
                    Some(t) => t.at(p) == y,
                    None => {
                        remaining[p.0] -= 1;
                        remaining[p.0] == 0
                    }
                },
                VertexKind::Random => true,
                VertexKind::Sink => false,
            };
            if joins {
                mark[p.0] = true;
                queue.push_back(p);
            }
        }
    }
    mark
}

/// `K^G`, via its complement: vertices from which max can force a positive
/// probability of reaching a positive sink.
pub fn zero_set_optimal(game: &Ssg) -> ZeroSet {
    let w = attractor(game, |x| is_positive_sink(game, x), None, None);
    ZeroSet {
        flavor: ZeroFlavor::Optimal,
        members: complement(&w),
    }
}

/// `K_{σ,τ}`: vertices whose `(σ,τ)`-reach set holds no positive sink.
pub fn zero_set_pair(game: &Ssg, sigma: &Strategy, tau: &Strategy) -> ZeroSet {
    let w = backward_closure(game, sigma, tau, |x| is_positive_sink(game, x));
    ZeroSet {
        flavor: ZeroFlavor::Pair,
        members: complement(&w),
    }
}

/// `K_σ`: vertices where min, answering σ, can avoid every positive sink.
pub fn zero_set_max(game: &Ssg, sigma: &Strategy) -> ZeroSet {
    let w = attractor(game, |x| is_positive_sink(game, x), Some(sigma), None);
    ZeroSet {
        flavor: ZeroFlavor::MaxOnly,
        members: complement(&w),
    }
}

/// `K_τ`: vertices where max, facing τ, cannot reach a positive sink.
pub fn zero_set_min(game: &Ssg, tau: &Strategy) -> BTreeSet<VertexId> {
    let w = attractor(game, |x| is_positive_sink(game, x), None, Some(tau));
    complement(&w)
}

/// `Z(σ,τ)`: non-sink vertices from which no sink is reachable.
pub fn absorbing_union(game: &Ssg, sigma: &Strategy, tau: &Strategy) -> AbsorbingSet {
    let w = backward_closure(game, sigma, tau, |x| game.kind(x) == VertexKind::Sink);
    AbsorbingSet {
        members: complement(&w),
    }
}

/// `Z(σ)`, the largest absorbing set min can hold against σ, as a greatest
/// fixpoint: max members follow σ inside, min members have a successor
/// inside, random members have all successors inside.
pub fn max_absorbing(game: &Ssg, sigma: &Strategy) -> AbsorbingSet {
    let pred = game.predecessors();
    let mut inside: Vec<bool> = game.ids().map(|x| game.kind(x) != VertexKind::Sink).collect();
    let mut inside_succ: Vec<usize> = game
        .ids()
        .map(|x| game.succ(x).iter().filter(|y| inside[y.0]).count())
        .collect();
    let violates = |x: VertexId, inside: &[bool], inside_succ: &[usize]| match game.kind(x) {
        VertexKind::Max => !inside[sigma.at(x).0],
        VertexKind::Min => inside_succ[x.0] == 0,
        VertexKind::Random => inside_succ[x.0] < game.succ(x).len(),
        VertexKind::Sink => true,
    };
    let mut queue: VecDeque<VertexId> = game
        .ids()
        .filter(|&x| inside[x.0] && violates(x, &inside, &inside_succ))
        .collect();
    for x in &queue {
        inside[x.0] = false;
    }
    while let Some(y) = queue.pop_front() {
        for &p in &pred[y.0] {
            inside_succ[p.0] -= 1;
            if inside[p.0] && violates(p, &inside, &inside_succ) {
                inside[p.0] = false;
                queue.push_back(p);
            }
        }
    }
    AbsorbingSet {
        members: to_set(&inside),
    }
}

/// A min strategy keeping every member of `Z(σ)` inside it, so that
/// `absorbing_union(σ, τ) ⊇ max_absorbing(σ)`.
pub fn absorbing_witness(game: &Ssg, sigma: &Strategy) -> Strategy {
    let z = max_absorbing(game, sigma);
    Strategy::from_fn(game, Player::Min, |x| {
        let succ = game.succ(x);
        if z.members.contains(&x) {
            *succ.iter().find(|y| z.members.contains(y)).expect("member keeps a successor inside")
        } else {
            succ[0]
        }
    })
}

/// Topological order of the graph with the arcs of `removed` (and sink
/// self-loops) deleted, or a vertex lying on a remaining cycle.
pub fn topological_order_without(game: &Ssg, removed: &ArcSet) -> Result<Vec<VertexId>> {
    let mut indeg = vec![0usize; game.len()];
    for (x, y) in game.arcs() {
        if !removed.contains(x, y) {
            indeg[y.0] += 1;
        }
    }
    let mut queue: VecDeque<VertexId> = game.ids().filter(|x| indeg[x.0] == 0).collect();
    let mut order = Vec::with_capacity(game.len());
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for &y in game.succ(x) {
            if removed.contains(x, y) {
                continue;
            }
            indeg[y.0] -= 1;
            if indeg[y.0] == 0 {
                queue.push_back(y);
            }
        }
    }
    if order.len() == game.len() {
        Ok(order)
    } else {
        let stuck = game.ids().find(|x| indeg[x.0] > 0).expect("some vertex left");
        Err(Error::NotFeedbackArcSet(stuck))
    }
}

/// Back arcs of a depth-first search started from each vertex in id
/// order; removing them leaves an acyclic graph.
pub fn dfs_back_arcs(game: &Ssg) -> ArcSet {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    let mut mark = vec![Mark::White; game.len()];
    let mut back = Vec::new();
    for root in game.ids() {
        if mark[root.0] != Mark::White {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        mark[root.0] = Mark::Grey;
        while let Some(&mut (x, ref mut next)) = stack.last_mut() {
            let succ = game.succ(x);
            if *next < succ.len() {
                let y = succ[*next];
                *next += 1;
                match mark[y.0] {
                    Mark::White => {
                        mark[y.0] = Mark::Grey;
                        stack.push((y, 0));
                    }
                    Mark::Grey => back.push(Arc { from: x, to: y }),
                    Mark::Black => {}
                }
            } else {
                mark[x.0] = Mark::Black;
                stack.pop();
            }
        }
    }
    back.into_iter().collect()
}

/// Whether `v` is zero exactly on `set`.
pub fn zero_exactly_on(values: &crate::strategy::ValueVector, set: &BTreeSet<VertexId>) -> bool {
    values.iter().all(|(x, v)| v.is_zero() == set.contains(&x))
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

    fn self_loop() -> Ssg {
        Ssg::from_vertices(vec![Vertex::max([0]), Vertex::sink(ratio(0, 1))])
    }

    fn ids(v: &[usize]) -> BTreeSet<VertexId> {
        v.iter().map(|&i| VertexId(i)).collect()
    }

    #[test]
    fn coin_sets() {
        let g = coin();
        let s = Strategy::first_successor(&g, Player::Max);
        let t = Strategy::first_successor(&g, Player::Min);
        assert_eq!(reach(&g, &s, &t, VertexId(0)).members, ids(&[0, 1, 2]));
        assert_eq!(zero_set_optimal(&g).members, ids(&[1]));
        assert_eq!(zero_set_pair(&g, &s, &t).members, ids(&[1]));
        assert!(absorbing_union(&g, &s, &t).members.is_empty());
        assert!(max_absorbing(&g, &s).members.is_empty());
    }

    #[test]
    fn self_loop_sets() {
        let g = self_loop();
        let s = Strategy::first_successor(&g, Player::Max);
        let t = Strategy::first_successor(&g, Player::Min);
        assert_eq!(reach(&g, &s, &t, VertexId(0)).members, ids(&[0]));
        assert_eq!(zero_set_pair(&g, &s, &t).members, ids(&[0, 1]));
        assert_eq!(absorbing_union(&g, &s, &t).members, ids(&[0]));
        assert_eq!(max_absorbing(&g, &s).members, ids(&[0]));
    }

    #[test]
    fn min_forces_zero() {
        let g = Ssg::from_vertices(vec![Vertex::min([1, 2]), Vertex::sink(ratio(0, 1)), Vertex::sink(ratio(1, 1))]);
        assert!(zero_set_optimal(&g).contains(VertexId(0)));
    }

    #[test]
    fn back_arcs_break_cycles() {
        let g = Ssg::from_vertices(vec![
            Vertex::max([1, 3]),
            Vertex::min([0, 2]),
            Vertex::random([(2, ratio(1, 2)), (0, ratio(1, 2))]),
            Vertex::sink(ratio(1, 1)),
        ]);
        let back = dfs_back_arcs(&g);
        assert!(topological_order_without(&g, &back).is_ok());
        assert!(topological_order_without(&g, &ArcSet::new()).is_err());
        assert!(back.contains(VertexId(2), VertexId(2)));
    }
}
