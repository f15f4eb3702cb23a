use std::collections::BTreeSet;
use std::fmt;
use std::ops::Index;

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Player, Ssg, VertexId, VertexKind};
use crate::rational::{self, Rational};

/// A positional strategy for one player.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Strategy {
    owner: Player,
    choice: Vec<Option<VertexId>>,
}

impl Strategy {
    /// Lowest-id successor at every owned vertex.
    pub fn first_successor(game: &Ssg, owner: Player) -> Self {
        Self::from_fn(game, owner, |x| game.succ(x)[0])
    }

    pub fn from_fn(game: &Ssg, owner: Player, mut f: impl FnMut(VertexId) -> VertexId) -> Self {
        let kind = owner.kind();
        let choice = game.ids().map(|x| (game.kind(x) == kind).then(|| f(x))).collect();
        Strategy { owner, choice }
    }

    /// Uniformly random successor at every owned vertex.
    pub fn random<R: Rng + ?Sized>(game: &Ssg, owner: Player, rng: &mut R) -> Self {
        Self::from_fn(game, owner, |x| {
            let s = game.succ(x);
            s[rng.random_range(0..s.len())]
        })
    }

    pub fn from_pairs(game: &Ssg, owner: Player, pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        let mut choice = vec![None; game.len()];
        for (x, y) in pairs {
            if x.0 >= game.len() {
                return Err(Error::InvalidStrategy(format!("vertex {x} out of range")));
            }
            choice[x.0] = Some(y);
        }
        let s = Strategy { owner, choice };
        s.check(game)?;
        Ok(s)
    }

    pub fn owner(&self) -> Player {
        self.owner
    }

    pub fn len(&self) -> usize {
        self.choice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choice.iter().all(Option::is_none)
    }

    /// The choice at an owned vertex.
    pub fn at(&self, x: VertexId) -> VertexId {
        self.choice[x.0].unwrap_or_else(|| panic!("strategy has no choice at {x}"))
    }

    pub fn get(&self, x: VertexId) -> Option<VertexId> {
        self.choice.get(x.0).copied().flatten()
    }

    pub fn set(&mut self, x: VertexId, y: VertexId) {
        assert!(self.choice[x.0].is_some(), "vertex {x} is not owned by this strategy");
        self.choice[x.0] = Some(y);
    }

    pub fn pairs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.choice
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|y| (VertexId(i), y)))
    }

    /// Defined on exactly the owner's vertices, each choice a successor.
    pub fn check(&self, game: &Ssg) -> Result<()> {
        if self.choice.len() != game.len() {
            return Err(Error::InvalidStrategy(format!(
                "strategy covers {} vertices, game has {}",
                self.choice.len(),
                game.len()
            )));
        }
        let kind = self.owner.kind();
        for x in game.ids() {
            match (game.kind(x) == kind, self.choice[x.0]) {
                (true, None) => return Err(Error::InvalidStrategy(format!("no choice at {x}"))),
                (false, Some(_)) => {
                    return Err(Error::InvalidStrategy(format!("choice at {x}, which is not owned")))
                }
                (true, Some(y)) if !game.succ(x).contains(&y) => {
                    return Err(Error::InvalidStrategy(format!("{y} is not a successor of {x}")))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Same choices on a game with the same vertex ids and kinds plus
    /// extra vertices appended (transformed games).
    pub fn resized(&self, len: usize) -> Strategy {
        let mut choice = self.choice.clone();
        choice.resize(len, None);
        Strategy { owner: self.owner, choice }
    }

    /// Vertices where the two strategies choose differently.
    pub fn differences<'a>(&'a self, other: &'a Strategy) -> impl Iterator<Item = VertexId> + 'a {
        self.pairs().filter(move |&(x, y)| other.get(x) != Some(y)).map(|(x, _)| x)
    }

    /// Number of strategies of `owner` in `game` (saturating).
    pub fn count(game: &Ssg, owner: Player) -> u128 {
        game.of_kind(owner.kind())
            .fold(1u128, |acc, x| acc.saturating_mul(game.succ(x).len() as u128))
    }

    /// Every strategy of `owner`, in lexicographic order of successor
    /// positions.
    pub fn enumerate(game: &Ssg, owner: Player) -> StrategyIter<'_> {
        let owned: Vec<VertexId> = game.of_kind(owner.kind()).collect();
        StrategyIter {
            game,
            owner,
            positions: vec![0; owned.len()],
            owned,
            done: false,
        }
    }
}

pub struct StrategyIter<'a> {
    game: &'a Ssg,
    owner: Player,
    owned: Vec<VertexId>,
    positions: Vec<usize>,
    done: bool,
}

impl Iterator for StrategyIter<'_> {
    type Item = Strategy;

    fn next(&mut self) -> Option<Strategy> {
        if self.done {
            return None;
        }
        let mut choice = vec![None; self.game.len()];
        for (x, &p) in self.owned.iter().zip(&self.positions) {
            choice[x.0] = Some(self.game.succ(*x)[p]);
        }
        // odometer increment
        self.done = true;
        for (i, x) in self.owned.iter().enumerate() {
            self.positions[i] += 1;
            if self.positions[i] < self.game.succ(*x).len() {
                self.done = false;
                break;
            }
            self.positions[i] = 0;
        }
        Some(Strategy { owner: self.owner, choice })
    }
}

impl Serialize for Strategy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StrategyDoc {
            owner: self.owner,
            choices: self.pairs().map(|(x, y)| [x.0, y.0]).collect(),
        }
        .serialize(s)
    }
}

/// On-disk strategy form: `{"owner": "max", "choices": [[x, y], ...]}`.
#[derive(Serialize, Deserialize)]
pub struct StrategyDoc {
    pub owner: Player,
    pub choices: Vec<[usize; 2]>,
}

impl StrategyDoc {
    pub fn into_strategy(self, game: &Ssg) -> Result<Strategy> {
        Strategy::from_pairs(
            game,
            self.owner,
            self.choices.into_iter().map(|[x, y]| (VertexId(x), VertexId(y))),
        )
    }
}

/// Exact value per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValueVector(pub Vec<Rational>);

impl ValueVector {
    pub fn zeros(len: usize) -> Self {
        ValueVector(vec![Rational::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, x: VertexId) -> &Rational {
        &self.0[x.0]
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &Rational)> {
        self.0.iter().enumerate().map(|(i, v)| (VertexId(i), v))
    }

    /// First `len` entries (drops A-sinks of a transformed game).
    pub fn truncated(&self, len: usize) -> ValueVector {
        ValueVector(self.0[..len].to_vec())
    }

    /// Pointwise `>=`.
    pub fn ge(&self, other: &ValueVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// Pointwise `>=` with strict inequality somewhere.
    pub fn gt(&self, other: &ValueVector) -> bool {
        self.ge(other) && self.0.iter().zip(&other.0).any(|(a, b)| a > b)
    }

    pub fn ge_on(&self, other: &ValueVector, on: &[VertexId]) -> bool {
        on.iter().all(|&x| self.get(x) >= other.get(x))
    }

    pub fn pointwise_max(&self, other: &ValueVector) -> ValueVector {
        ValueVector(self.0.iter().zip(&other.0).map(|(a, b)| a.max(b).clone()).collect())
    }

    pub fn pointwise_min(&self, other: &ValueVector) -> ValueVector {
        ValueVector(self.0.iter().zip(&other.0).map(|(a, b)| a.min(b).clone()).collect())
    }

    pub fn zeros_set(&self) -> BTreeSet<VertexId> {
        self.iter().filter(|(_, v)| v.is_zero()).map(|(x, _)| x).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(rational::format).collect()
    }

    /// Least common multiple of all denominators.
    pub fn common_denominator(&self) -> num_bigint::BigInt {
        rational::lcm_of_denominators(&self.0)
    }
}

impl Index<VertexId> for ValueVector {
    type Output = Rational;
    fn index(&self, x: VertexId) -> &Rational {
        &self.0[x.0]
    }
}

impl fmt::Display for ValueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_strings().join(", "))
    }
}

impl Serialize for ValueVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub from: VertexId,
    pub to: VertexId,
}

impl Arc {
    pub fn new(from: usize, to: usize) -> Self {
        Arc {
            from: VertexId(from),
            to: VertexId(to),
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.from, self.to)
    }
}

/// A set of arcs of a base game, kept sorted so A-sink ids are stable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ArcSet(BTreeSet<Arc>);

impl ArcSet {
    pub fn new() -> Self {
        ArcSet(BTreeSet::new())
    }

    /// Validates against the game: every arc exists and none leaves a sink.
    pub fn checked(game: &Ssg, arcs: impl IntoIterator<Item = Arc>) -> Result<Self> {
        let set: BTreeSet<Arc> = arcs.into_iter().collect();
        for a in &set {
            if !game.has_arc(a.from, a.to) || game.kind(a.from) == VertexKind::Sink {
                return Err(Error::UnknownArc(a.from, a.to));
            }
        }
        Ok(ArcSet(set))
    }

    pub fn all(game: &Ssg) -> Self {
        ArcSet(game.arcs().map(|(from, to)| Arc { from, to }).collect())
    }

    /// `R`: every arc out of a random vertex.
    pub fn random_out(game: &Ssg) -> Self {
        ArcSet(
            game.arcs()
                .filter(|&(x, _)| game.kind(x) == VertexKind::Random)
                .map(|(from, to)| Arc { from, to })
                .collect(),
        )
    }

    /// Every arc entering a min vertex.
    pub fn min_in(game: &Ssg) -> Self {
        ArcSet(
            game.arcs()
                .filter(|&(_, y)| game.kind(y) == VertexKind::Min)
                .map(|(from, to)| Arc { from, to })
                .collect(),
        )
    }

    /// One arc per random vertex: the most probable, lowest id on ties.
    pub fn random_cover(game: &Ssg) -> Self {
        let mut set = BTreeSet::new();
        for x in game.of_kind(VertexKind::Random) {
            let (to, _) = game
                .distribution(x)
                .max_by(|(a, p), (b, q)| p.cmp(q).then(b.cmp(a)))
                .expect("random vertex has successors");
            set.insert(Arc { from: x, to });
        }
        ArcSet(set)
    }

    pub fn contains(&self, from: VertexId, to: VertexId) -> bool {
        self.0.contains(&Arc { from, to })
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Arcs out of max or min vertices (`k` in the Opt-GSIA bound).
    pub fn controlled_count(&self, game: &Ssg) -> usize {
        self.0
            .iter()
            .filter(|a| matches!(game.kind(a.from), VertexKind::Max | VertexKind::Min))
            .count()
    }

    /// Every random vertex has at least one fixed outgoing arc.
    pub fn covers_random(&self, game: &Ssg) -> bool {
        game.of_kind(VertexKind::Random)
            .all(|x| game.succ(x).iter().any(|&y| self.contains(x, y)))
    }

    pub fn to_pairs(&self) -> Vec<[usize; 2]> {
        self.0.iter().map(|a| [a.from.0, a.to.0]).collect()
    }
}

impl FromIterator<Arc> for ArcSet {
    fn from_iter<I: IntoIterator<Item = Arc>>(iter: I) -> Self {
        ArcSet(iter.into_iter().collect())
    }
}

impl Serialize for ArcSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Vertex;
    use crate::rational::ratio;

    fn small() -> Ssg {
        Ssg::from_vertices(vec![
            Vertex::max([1, 2, 3]),
            Vertex::max([2, 3]),
            Vertex::min([0, 3]),
            Vertex::sink(ratio(1, 1)),
        ])
    }

    #[test]
    fn enumerate_counts() {
        let g = small();
        assert_eq!(Strategy::count(&g, Player::Max), 6);
        let all: Vec<_> = Strategy::enumerate(&g, Player::Max).collect();
        assert_eq!(all.len(), 6);
        let distinct: BTreeSet<Vec<(VertexId, VertexId)>> = all.iter().map(|s| s.pairs().collect()).collect();
        assert_eq!(distinct.len(), 6);
        assert!(all.iter().all(|s| s.check(&g).is_ok()));
    }

    #[test]
    fn enumerate_without_owned_vertices_yields_one() {
        let g = Ssg::from_vertices(vec![Vertex::sink(ratio(0, 1))]);
        assert_eq!(Strategy::enumerate(&g, Player::Max).count(), 1);
    }

    #[test]
    fn check_rejects_bad_choice() {
        let g = small();
        assert!(Strategy::from_pairs(&g, Player::Max, [(VertexId(0), VertexId(1)), (VertexId(1), VertexId(0))]).is_err());
        assert!(Strategy::from_pairs(&g, Player::Max, [(VertexId(0), VertexId(1))]).is_err());
        assert!(Strategy::from_pairs(&g, Player::Min, [(VertexId(2), VertexId(3))]).is_ok());
    }

    #[test]
    fn pointwise_order() {
        let a = ValueVector(vec![ratio(1, 2), ratio(1, 3)]);
        let b = ValueVector(vec![ratio(1, 2), ratio(1, 4)]);
        assert!(a.gt(&b));
        assert!(a.ge(&a));
        assert!(!a.gt(&a));
        assert!(!b.ge(&a));
    }

    #[test]
    fn arc_sets() {
        let g = small();
        assert_eq!(ArcSet::all(&g).len(), 7);
        assert_eq!(ArcSet::min_in(&g).to_pairs(), vec![[0, 2], [1, 2]]);
        assert!(ArcSet::checked(&g, [Arc::new(0, 2)]).is_ok());
        assert!(ArcSet::checked(&g, [Arc::new(2, 1)]).is_err());
        assert_eq!(ArcSet::all(&g).controlled_count(&g), 7);
    }
}
