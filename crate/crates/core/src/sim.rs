//! Monte-Carlo play simulation.

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{Player, Ssg, VertexId, VertexKind};
use crate::rational;
use crate::strategy::{ArcSet, Strategy};

/// Plays `outer` until `depth` arcs of `arcs` have been crossed, then
/// `inner`. `depth = None` never switches.
#[derive(Clone, Debug, Serialize)]
pub struct ConcatStrategy {
    pub outer: Strategy,
    pub inner: Strategy,
    pub arcs: ArcSet,
    pub depth: Option<usize>,
}

impl ConcatStrategy {
    /// `σ'|_A σ`: switch at the first crossing.
    pub fn once(outer: Strategy, inner: Strategy, arcs: ArcSet) -> Self {
        ConcatStrategy {
            outer,
            inner,
            arcs,
            depth: Some(1),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub enum PlayStrategy {
    Positional(Strategy),
    Concat(ConcatStrategy),
}

impl PlayStrategy {
    fn owner(&self) -> Player {
        match self {
            PlayStrategy::Positional(s) => s.owner(),
            PlayStrategy::Concat(c) => c.outer.owner(),
        }
    }

    fn choose(&self, x: VertexId, crossed: &[usize]) -> VertexId {
        match self {
            PlayStrategy::Positional(s) => s.at(x),
            PlayStrategy::Concat(c) => {
                let switched = c.depth.is_some_and(|d| crossed[self.slot()] >= d);
                if switched {
                    c.inner.at(x)
                } else {
                    c.outer.at(x)
                }
            }
        }
    }

    fn slot(&self) -> usize {
        match self.owner() {
            Player::Max => 0,
            Player::Min => 1,
        }
    }

    fn arcs(&self) -> Option<&ArcSet> {
        match self {
            PlayStrategy::Positional(_) => None,
            PlayStrategy::Concat(c) => Some(&c.arcs),
        }
    }

    fn check(&self, game: &Ssg, owner: Player) -> Result<()> {
        let parts: Vec<&Strategy> = match self {
            PlayStrategy::Positional(s) => vec![s],
            PlayStrategy::Concat(c) => vec![&c.outer, &c.inner],
        };
        for s in parts {
            if s.owner() != owner {
                return Err(Error::InvalidStrategy(format!("expected a {owner:?} strategy")));
            }
            s.check(game)?;
        }
        if let Some(a) = self.arcs() {
            ArcSet::checked(game, a.iter().copied())?;
        }
        Ok(())
    }
}

impl From<Strategy> for PlayStrategy {
    fn from(s: Strategy) -> Self {
        PlayStrategy::Positional(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Outcome {
    Sink(VertexId),
    Cutoff,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlayRecord {
    /// The first [`PREFIX_LEN`] vertices visited.
    pub prefix: Vec<VertexId>,
    pub outcome: Outcome,
    pub value: f64,
    pub steps: usize,
}

pub const PREFIX_LEN: usize = 32;
pub const BATCH: usize = 1000;

/// Integer sampling tables: cumulative numerators over a common
/// denominator per random vertex.
struct Sampler {
    tables: Vec<Option<(u64, Vec<u64>)>>,
    sink_values: Vec<f64>,
}

impl Sampler {
    fn new(game: &Ssg) -> Result<Self> {
        let mut tables = vec![None; game.len()];
        let mut sink_values = vec![0.0; game.len()];
        for x in game.ids() {
            match game.kind(x) {
                VertexKind::Random => {
                    let den = rational::lcm_of_denominators(game.probs(x));
                    let den_u = den
                        .to_u64()
                        .ok_or_else(|| Error::InvalidArgument(format!("denominator at {x} too large to sample")))?;
                    let mut acc = 0u64;
                    let cumulative = game
                        .probs(x)
                        .iter()
                        .map(|p| {
                            acc += (p.numer() * (&den / p.denom())).to_u64().unwrap_or(0);
                            acc
                        })
                        .collect();
                    tables[x.0] = Some((den_u, cumulative));
                }
                VertexKind::Sink => {
                    sink_values[x.0] = rational::to_f64(game.sink_value(x).expect("sink value"));
                }
                _ => {}
            }
        }
        Ok(Sampler { tables, sink_values })
    }

    fn step<R: Rng>(&self, game: &Ssg, x: VertexId, rng: &mut R) -> VertexId {
        let (den, cumulative) = self.tables[x.0].as_ref().expect("random vertex");
        let u = rng.random_range(0..*den);
        let i = cumulative.iter().position(|&c| u < c).expect("distribution sums to one");
        game.succ(x)[i]
    }
}

fn play<R: Rng>(
    game: &Ssg,
    sampler: &Sampler,
    max: &PlayStrategy,
    min: &PlayStrategy,
    start: VertexId,
    cutoff: usize,
    rng: &mut R,
) -> PlayRecord {
    let mut x = start;
    let mut prefix = vec![x];
    let mut crossed = [0usize; 2];
    for steps in 0..cutoff {
        let y = match game.kind(x) {
            VertexKind::Sink => {
                return PlayRecord {
                    prefix,
                    outcome: Outcome::Sink(x),
                    value: sampler.sink_values[x.0],
                    steps,
                }
            }
            VertexKind::Max => max.choose(x, &crossed),
            VertexKind::Min => min.choose(x, &crossed),
            VertexKind::Random => sampler.step(game, x, rng),
        };
        for s in [max, min] {
            if s.arcs().is_some_and(|a| a.contains(x, y)) {
                crossed[s.slot()] += 1;
            }
        }
        x = y;
        if prefix.len() < PREFIX_LEN {
            prefix.push(x);
        }
    }
    if game.kind(x) == VertexKind::Sink {
        return PlayRecord {
            prefix,
            outcome: Outcome::Sink(x),
            value: sampler.sink_values[x.0],
            steps: cutoff,
        };
    }
    PlayRecord {
        prefix,
        outcome: Outcome::Cutoff,
        value: 0.0,
        steps: cutoff,
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Welford) -> Welford {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let d = other.mean - self.mean;
        let mean = self.mean + d * other.count as f64 / count as f64;
        let m2 = self.m2 + other.m2 + d * d * (self.count as f64 * other.count as f64) / count as f64;
        Welford { count, mean, m2 }
    }

    fn stderr(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        (self.m2 / (self.count - 1) as f64 / self.count as f64).sqrt()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SimReport {
    pub mean: f64,
    pub stderr: f64,
    pub plays: usize,
    pub cutoff: usize,
    pub seed: u64,
    /// Plays stopped by the cutoff; each scored 0.
    pub cutoff_plays: usize,
    pub mean_steps_absorbed: f64,
    /// Fraction of plays still running at the cutoff times the largest sink
    /// value: an empirical bound on the truncation bias.
    pub truncation_bias_bound: f64,
}

pub fn default_cutoff(game: &Ssg) -> usize {
    64 * game.len()
}

#[derive(Clone, Copy, Default)]
struct BatchStats {
    values: Welford,
    cutoff_plays: usize,
    absorbed_steps: u64,
}

/// Estimates the value of `start` by `plays` independent plays. Batches of
/// [`BATCH`] plays draw from stream `b` of a generator seeded by `seed`;
/// the result does not depend on the thread count.
pub fn simulate(
    game: &Ssg,
    max: &PlayStrategy,
    min: &PlayStrategy,
    start: VertexId,
    plays: usize,
    cutoff: usize,
    seed: u64,
) -> Result<SimReport> {
    if cutoff == 0 {
        return Err(Error::InvalidArgument("cutoff must be at least 1".into()));
    }
    if start.0 >= game.len() {
        return Err(Error::InvalidArgument(format!("start vertex {start} out of range")));
    }
    max.check(game, Player::Max)?;
    min.check(game, Player::Min)?;
    let sampler = Sampler::new(game)?;
    let batches = plays.div_ceil(BATCH);
    let stats: Vec<BatchStats> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let n = BATCH.min(plays - b * BATCH);
            let mut s = BatchStats::default();
            for _ in 0..n {
                let rec = play(game, &sampler, max, min, start, cutoff, &mut rng);
                s.values.push(rec.value);
                match rec.outcome {
                    Outcome::Cutoff => s.cutoff_plays += 1,
                    Outcome::Sink(_) => s.absorbed_steps += rec.steps as u64,
                }
            }
            s
        })
        .collect();
    let total = stats.iter().fold(BatchStats::default(), |acc, s| BatchStats {
        values: acc.values.merge(s.values),
        cutoff_plays: acc.cutoff_plays + s.cutoff_plays,
        absorbed_steps: acc.absorbed_steps + s.absorbed_steps,
    });
    let absorbed = plays - total.cutoff_plays;
    let top = sampler.sink_values.iter().cloned().fold(0.0, f64::max);
    Ok(SimReport {
        mean: total.values.mean,
        stderr: total.values.stderr(),
        plays,
        cutoff,
        seed,
        cutoff_plays: total.cutoff_plays,
        mean_steps_absorbed: if absorbed == 0 {
            0.0
        } else {
            total.absorbed_steps as f64 / absorbed as f64
        },
        truncation_bias_bound: if plays == 0 {
            0.0
        } else {
            total.cutoff_plays as f64 / plays as f64 * top
        },
    })
}

/// A single play, for traces.
pub fn sample_play(
    game: &Ssg,
    max: &PlayStrategy,
    min: &PlayStrategy,
    start: VertexId,
    cutoff: usize,
    seed: u64,
) -> Result<PlayRecord> {
    max.check(game, Player::Max)?;
    min.check(game, Player::Min)?;
    let sampler = Sampler::new(game)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(play(game, &sampler, max, min, start, cutoff, &mut rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn coin_estimate() {
        let g = generate::coin();
        let max = Strategy::first_successor(&g, Player::Max).into();
        let min = Strategy::first_successor(&g, Player::Min).into();
        let rep = simulate(&g, &max, &min, VertexId(0), 10_000, 10, 5).unwrap();
        assert!((rep.mean - 0.5).abs() <= 3.0 * rep.stderr, "{rep:?}");
        assert_eq!(rep.cutoff_plays, 0);
        let again = simulate(&g, &max, &min, VertexId(0), 10_000, 10, 5).unwrap();
        assert_eq!(rep.mean, again.mean);
    }

    #[test]
    fn welford_merge_matches_sequential() {
        let xs: Vec<f64> = (0..100).map(|i| (i % 7) as f64 / 7.0).collect();
        let mut all = Welford::default();
        xs.iter().for_each(|&x| all.push(x));
        let (mut a, mut b) = (Welford::default(), Welford::default());
        xs[..37].iter().for_each(|&x| a.push(x));
        xs[37..].iter().for_each(|&x| b.push(x));
        let m = a.merge(b);
        assert!((m.mean - all.mean).abs() < 1e-12);
        assert!((m.m2 - all.m2).abs() < 1e-9);
    }

    #[test]
    fn cutoff_scores_zero() {
        // max 0 -> {0 via 1, sink}: a max self-cycle 0 -> 1 -> 0.
        let g = Ssg::from_vertices(vec![
            crate::game::Vertex::max([1, 2]),
            crate::game::Vertex::max([0]),
            crate::game::Vertex::sink(rational::one()),
        ]);
        let sigma = Strategy::first_successor(&g, Player::Max).into();
        let min = Strategy::first_successor(&g, Player::Min).into();
        let rep = simulate(&g, &sigma, &min, VertexId(0), 100, 8, 0).unwrap();
        assert_eq!(rep.mean, 0.0);
        assert_eq!(rep.cutoff_plays, 100);
        assert!(simulate(&g, &sigma, &min, VertexId(0), 1, 0, 0).is_err());
    }
}
