use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::ImprovementRule;
use crate::error::Result;
use crate::game::{Ssg, VertexId, VertexKind};
use crate::strategy::{ArcSet, Strategy, ValueVector};
use crate::transform::TransformedGame;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HkVariant {
    AllSwitches,
    /// First switchable vertex in a random order drawn once per run.
    Bland(u64),
    RandomSubset(u64),
}

/// Switchable max vertices with the successor each would move to.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SwitchSet(pub Vec<(VertexId, VertexId)>);

impl SwitchSet {
    /// Every max vertex with a successor of strictly higher value than its
    /// current choice, paired with its best successor (lowest id on ties).
    pub fn switchable(game: &Ssg, sigma: &Strategy, values: &ValueVector) -> Self {
        let mut out = Vec::new();
        for x in game.of_kind(VertexKind::Max) {
            let current = &values[sigma.at(x)];
            let best = game
                .succ(x)
                .iter()
                .copied()
                .max_by(|&a, &b| values[a].cmp(&values[b]).then(b.cmp(&a)))
                .expect("successor");
            if &values[best] > current {
                out.push((x, best));
            }
        }
        SwitchSet(out)
    }

    pub fn apply(&self, sigma: &Strategy) -> Strategy {
        let mut s = sigma.clone();
        for &(x, y) in &self.0 {
            s.set(x, y);
        }
        s
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub struct HoffmanKarp {
    variant: HkVariant,
    rng: Option<ChaCha8Rng>,
    order: Option<Vec<VertexId>>,
}

impl HoffmanKarp {
    pub fn new(variant: HkVariant) -> Self {
        let rng = match variant {
            HkVariant::AllSwitches => None,
            HkVariant::Bland(seed) | HkVariant::RandomSubset(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        };
        HoffmanKarp {
            variant,
            rng,
            order: None,
        }
    }
}

impl ImprovementRule for HoffmanKarp {
    fn name(&self) -> String {
        match self.variant {
            HkVariant::AllSwitches => "hk-all",
            HkVariant::Bland(_) => "hk-bland",
            HkVariant::RandomSubset(_) => "hk-random",
        }
        .into()
    }

    fn seed(&self) -> Option<u64> {
        match self.variant {
            HkVariant::AllSwitches => None,
            HkVariant::Bland(s) | HkVariant::RandomSubset(s) => Some(s),
        }
    }

    fn choose_arcs(&mut self, game: &Ssg, _sigma: &Strategy, _iteration: usize) -> Result<ArcSet> {
        if self.order.is_none() {
            let mut order = game.max_vertices();
            if let (HkVariant::Bland(_), Some(rng)) = (self.variant, self.rng.as_mut()) {
                order.shuffle(rng);
            }
            self.order = Some(order);
        }
        Ok(ArcSet::all(game))
    }

    fn improve(&mut self, sub: &TransformedGame, sigma: &Strategy, values: &ValueVector) -> Result<Option<Strategy>> {
        let all = SwitchSet::switchable(&sub.derived, sigma, values);
        if all.is_empty() {
            return Ok(None);
        }
        let chosen = match self.variant {
            HkVariant::AllSwitches => all,
            HkVariant::Bland(_) => {
                let order = self.order.as_ref().expect("order drawn in choose_arcs");
                let first = order
                    .iter()
                    .find_map(|x| all.0.iter().find(|(y, _)| y == x))
                    .copied()
                    .expect("switchable vertex is a max vertex");
                SwitchSet(vec![first])
            }
            HkVariant::RandomSubset(_) => {
                let rng = self.rng.as_mut().expect("seeded");
                loop {
                    let pick: Vec<_> = all.0.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
                    if !pick.is_empty() {
                        break SwitchSet(pick);
                    }
                }
            }
        };
        Ok(Some(chosen.apply(sigma)))
    }
}
