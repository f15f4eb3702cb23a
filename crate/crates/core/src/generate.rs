//! Seeded instance generators and the named example games.

use std::collections::BTreeSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{Ssg, Vertex, VertexId, VertexKind};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SinkSet {
    /// Two sinks valued 0 and 1 (a q-SSG).
    Binary,
    General(Vec<Rational>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub n_max: usize,
    pub n_min: usize,
    pub r: usize,
    pub q: u64,
    pub outdegree: (usize, usize),
    pub sinks: SinkSet,
    pub allow_non_stopping: bool,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(n_max: usize, n_min: usize, r: usize, q: u64, seed: u64) -> Self {
        GenSpec {
            n_max,
            n_min,
            r,
            q,
            outdegree: (2, 3),
            sinks: SinkSet::Binary,
            allow_non_stopping: true,
            seed,
        }
    }

    pub fn sink_values(&self) -> Vec<Rational> {
        match &self.sinks {
            SinkSet::Binary => vec![rational::zero(), rational::one()],
            SinkSet::General(v) => v.clone(),
        }
    }
}

/// Ids: max vertices first, then min, random, sinks.
pub fn gen_random(spec: &GenSpec) -> Result<Ssg> {
    let sink_values = spec.sink_values();
    let (lo, hi) = spec.outdegree;
    let len = spec.n_max + spec.n_min + spec.r + sink_values.len();
    if sink_values.is_empty() {
        return Err(Error::InvalidArgument("at least one sink is required".into()));
    }
    if lo == 0 || lo > hi {
        return Err(Error::InvalidArgument(format!("outdegree range {lo}..={hi} is empty or zero")));
    }
    if lo > len {
        return Err(Error::InvalidArgument(format!("outdegree {lo} exceeds the {len} vertices")));
    }
    if spec.r > 0 && spec.q < 1 {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    if sink_values.iter().any(|v| !rational::in_unit_interval(v)) {
        return Err(Error::InvalidArgument("sink values must lie in [0,1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut vertices = Vec::with_capacity(len);
    let kinds = std::iter::repeat_n(VertexKind::Max, spec.n_max)
        .chain(std::iter::repeat_n(VertexKind::Min, spec.n_min))
        .chain(std::iter::repeat_n(VertexKind::Random, spec.r));
    for kind in kinds {
        let mut d = rng.random_range(lo..=hi.min(len));
        if kind == VertexKind::Random {
            d = d.min(spec.q as usize);
        }
        let mut succ: Vec<usize> = index::sample(&mut rng, len, d).into_vec();
        succ.sort_unstable();
        vertices.push(match kind {
            VertexKind::Max => Vertex::max(succ),
            VertexKind::Min => Vertex::min(succ),
            _ => {
                let probs = random_distribution(&mut rng, d, spec.q);
                Vertex::random(succ.into_iter().zip(probs))
            }
        });
    }
    for v in sink_values {
        vertices.push(Vertex::sink(v));
    }
    if !spec.allow_non_stopping {
        make_sinks_reachable(&mut vertices, &mut rng);
    }
    Ssg::checked(vertices)
}

/// `d` positive numerators summing to `q`, as rationals over `q`.
fn random_distribution<R: Rng>(rng: &mut R, d: usize, q: u64) -> Vec<Rational> {
    let cuts: BTreeSet<u64> = index::sample(rng, (q - 1) as usize, d - 1)
        .into_iter()
        .map(|c| c as u64 + 1)
        .collect();
    let mut prev = 0;
    let mut out = Vec::with_capacity(d);
    for c in cuts.into_iter().chain(std::iter::once(q)) {
        out.push(rational::ratio((c - prev) as i64, q as i64));
        prev = c;
    }
    out
}

/// Redirects one arc of each vertex that cannot reach a sink, lowest id
/// first, until every vertex can.
fn make_sinks_reachable<R: Rng>(vertices: &mut [Vertex], rng: &mut R) {
    let sinks: Vec<usize> = (0..vertices.len())
        .filter(|&i| vertices[i].kind == VertexKind::Sink)
        .collect();
    loop {
        let game = Ssg::from_vertices(vertices.to_vec());
        let pred = game.predecessors();
        let mut reaches = vec![false; vertices.len()];
        let mut stack: Vec<VertexId> = sinks.iter().map(|&s| VertexId(s)).collect();
        for s in &stack {
            reaches[s.0] = true;
        }
        while let Some(y) = stack.pop() {
            for &p in &pred[y.0] {
                if !reaches[p.0] {
                    reaches[p.0] = true;
                    stack.push(p);
                }
            }
        }
        let Some(bad) = reaches.iter().position(|&b| !b) else {
            return;
        };
        let sink = VertexId(sinks[rng.random_range(0..sinks.len())]);
        let v = &mut vertices[bad];
        let last = v.succ.len() - 1;
        v.succ[last] = sink;
    }
}

/// A Markov chain whose last vertex has value `q^{-r}`. `x_i` has id
/// `i - 1`; the 0-sink is `r`, the 1-sink `r + 1`.
pub fn gen_chain(q: u64, r: usize) -> Result<Ssg> {
    if q < 2 || r < 1 {
        return Err(Error::InvalidArgument("gen_chain needs q >= 2 and r >= 1".into()));
    }
    let (q, zero, one) = (q as i64, r, r + 1);
    let mut vertices: Vec<Vertex> = (0..r)
        .map(|i| {
            let up = if i == 0 { one } else { i - 1 };
            Vertex::random([(up, rational::ratio(1, q)), (zero, rational::ratio(q - 1, q))])
        })
        .collect();
    vertices.push(Vertex::sink(rational::zero()));
    vertices.push(Vertex::sink(rational::one()));
    Ssg::checked(vertices)
}

/// `r` random vertices on a directed cycle. Each steps to the next with
/// probability `1/q`; the rest goes to the 1-sink from `x_0` and to the
/// 0-sink from every other vertex. Sinks are `r` (0) and `r + 1` (1).
pub fn gen_random_cycle(r: usize, q: u64) -> Result<Ssg> {
    if r < 2 || q < 2 {
        return Err(Error::InvalidArgument("gen_random_cycle needs r >= 2 and q >= 2".into()));
    }
    let (q, zero, one) = (q as i64, r, r + 1);
    let mut vertices: Vec<Vertex> = (0..r)
        .map(|i| {
            let exit = if i == 0 { one } else { zero };
            Vertex::random([((i + 1) % r, rational::ratio(1, q)), (exit, rational::ratio(q - 1, q))])
        })
        .collect();
    vertices.push(Vertex::sink(rational::zero()));
    vertices.push(Vertex::sink(rational::one()));
    Ssg::checked(vertices)
}

/// A fair coin between the 0-sink (1) and the 1-sink (2).
pub fn coin() -> Ssg {
    Ssg::from_vertices(vec![
        Vertex::random([(1, rational::ratio(1, 2)), (2, rational::ratio(1, 2))]),
        Vertex::sink(rational::zero()),
        Vertex::sink(rational::one()),
    ])
}

/// Vertex ids of [`fig1`].
pub mod fig1_ids {
    use crate::game::VertexId;
    pub const X1: VertexId = VertexId(0);
    pub const X2: VertexId = VertexId(1);
    pub const X3: VertexId = VertexId(2);
    pub const X4: VertexId = VertexId(3);
    pub const X5: VertexId = VertexId(4);
}

/// The five-vertex graph used to illustrate arc fixing: `x1 -> x3`,
/// `x2 -> {x3, x5}`, `x3 -> {x4, x5}`. `x1`, `x2` are max vertices, `x3` a
/// fair coin, `x4` and `x5` the 0- and 1-sinks.
pub fn fig1() -> Ssg {
    Ssg::from_vertices(vec![
        Vertex::max([2]),
        Vertex::max([2, 4]),
        Vertex::random([(3, rational::ratio(1, 2)), (4, rational::ratio(1, 2))]),
        Vertex::sink(rational::zero()),
        Vertex::sink(rational::one()),
    ])
}

/// Vertex ids of [`fig2`].
pub mod fig2_ids {
    use crate::game::VertexId;
    pub const X1: VertexId = VertexId(0);
    pub const X2: VertexId = VertexId(1);
    pub const X3: VertexId = VertexId(2);
    pub const N1: VertexId = VertexId(3);
    pub const N2: VertexId = VertexId(4);
    pub const R1: VertexId = VertexId(5);
    pub const R2: VertexId = VertexId(6);
    pub const R3: VertexId = VertexId(7);
    pub const R4: VertexId = VertexId(8);
    pub const ZERO: VertexId = VertexId(9);
    pub const ONE: VertexId = VertexId(10);
}

/// The absorbing-set example game. Random vertices are uniform over their
/// successors.
pub fn fig2() -> Ssg {
    use fig2_ids::*;
    let uniform = |succ: &[VertexId]| {
        let k = succ.len() as i64;
        Vertex::random(succ.iter().map(|s| (s.0, rational::ratio(1, k))))
    };
    let ids = |succ: &[VertexId]| succ.iter().map(|s| s.0).collect::<Vec<_>>();
    Ssg::from_vertices(vec![
        Vertex::max(ids(&[X2, R1])),
        Vertex::max(ids(&[R1, X3, N1])),
        Vertex::max(ids(&[R1, R4])),
        Vertex::min(ids(&[X1, R3])),
        Vertex::min(ids(&[ZERO, ONE, X3])),
        uniform(&[N1, R3]),
        uniform(&[X3, N2, ZERO]),
        uniform(&[R4, ONE]),
        uniform(&[R2, ONE, N2]),
        Vertex::sink(rational::zero()),
        Vertex::sink(rational::one()),
    ])
}

/// The strategies drawn with solid arcs in the absorbing-set example.
pub fn fig2_strategies(game: &Ssg) -> (crate::strategy::Strategy, crate::strategy::Strategy) {
    use crate::game::Player;
    use crate::strategy::Strategy;
    use fig2_ids::*;
    let sigma = Strategy::from_pairs(game, Player::Max, [(X1, X2), (X2, N1), (X3, R4)]).expect("fig2 max strategy");
    let tau = Strategy::from_pairs(game, Player::Min, [(N1, X1), (N2, ZERO)]).expect("fig2 min strategy");
    (sigma, tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::infer_q;

    #[test]
    fn deterministic_in_seed() {
        let spec = GenSpec::new(3, 2, 3, 3, 11);
        assert_eq!(gen_random(&spec).unwrap(), gen_random(&spec).unwrap());
        let other = GenSpec { seed: 12, ..spec.clone() };
        assert_ne!(gen_random(&spec).unwrap(), gen_random(&other).unwrap());
    }

    #[test]
    fn generated_games_are_valid() {
        for seed in 0..1000 {
            let spec = GenSpec::new((seed % 4) as usize, (seed % 3) as usize, 1 + (seed % 4) as usize, 2 + seed % 2, seed);
            let g = gen_random(&spec).unwrap();
            assert!(g.validate().is_ok());
            assert!(infer_q(&g).unwrap().q <= spec.q);
        }
    }

    #[test]
    fn coin_like_game() {
        let g = gen_random(&GenSpec::new(0, 0, 1, 2, 3)).unwrap();
        assert_eq!(g.r(), 1);
        assert_eq!(g.len(), 3);
    }

    #[test]
    fn stopping_option_reaches_sinks() {
        for seed in 0..50 {
            let spec = GenSpec {
                allow_non_stopping: false,
                ..GenSpec::new(3, 3, 2, 2, seed)
            };
            let g = gen_random(&spec).unwrap();
            let pred = g.predecessors();
            let mut seen: BTreeSet<VertexId> = g.sinks().into_iter().collect();
            let mut stack: Vec<VertexId> = seen.iter().copied().collect();
            while let Some(y) = stack.pop() {
                for &p in &pred[y.0] {
                    if seen.insert(p) {
                        stack.push(p);
                    }
                }
            }
            assert_eq!(seen.len(), g.len());
        }
    }

    #[test]
    fn infeasible_specs() {
        let spec = GenSpec {
            outdegree: (5, 5),
            ..GenSpec::new(1, 0, 0, 2, 0)
        };
        assert!(gen_random(&spec).is_err());
        assert!(gen_chain(1, 2).is_err());
        assert!(gen_random_cycle(1, 2).is_err());
    }

    #[test]
    fn named_games_are_valid() {
        for g in [coin(), fig1(), fig2(), gen_chain(3, 4).unwrap(), gen_random_cycle(5, 2).unwrap()] {
            assert!(g.validate().is_ok(), "{}", g.validate());
        }
    }
}
