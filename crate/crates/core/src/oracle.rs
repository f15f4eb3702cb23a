//! Ground truth by exhaustive enumeration.

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{infer_q, Player, Ssg};
use crate::rational;
use crate::strategy::{Strategy, ValueVector};
use crate::values::{self, OptimalityCertificate};

pub const DEFAULT_CAP: u128 = 20_000;

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub values: ValueVector,
    pub sigma: Strategy,
    pub tau: Strategy,
    pub strategies: u128,
    pub certificate: OptimalityCertificate,
}

fn check_cap(count: u128, cap: u128) -> Result<()> {
    if count > cap {
        Err(Error::CapExceeded { count, cap })
    } else {
        Ok(())
    }
}

/// Enumerates every max strategy against its best response. The optimal
/// vector is the pointwise maximum; the witness is a strategy attaining it.
pub fn oracle_optimal(game: &Ssg, cap: u128) -> Result<OracleResult> {
    let count = Strategy::count(game, Player::Max);
    check_cap(count, cap)?;
    let mut best: Option<ValueVector> = None;
    let mut results: Vec<(Strategy, Strategy, ValueVector)> = Vec::new();
    let mut warm: Option<Strategy> = None;
    for sigma in Strategy::enumerate(game, Player::Max) {
        let (tau, v) = values::best_response_min_from(game, &sigma, warm.as_ref())?;
        best = Some(match best {
            None => v.clone(),
            Some(b) => b.pointwise_max(&v),
        });
        warm = Some(tau.clone());
        results.push((sigma, tau, v));
    }
    let best = best.expect("at least one max strategy");
    let (sigma, tau, v) = results
        .into_iter()
        .find(|(_, _, v)| v == &best)
        .ok_or_else(|| Error::TheoremViolation("no max strategy attains the pointwise maximum".into()))?;
    let certificate = values::certify(game, &sigma, &tau, v.clone());
    if !certificate.optimal {
        return Err(Error::Internal("oracle witness fails the optimality check".into()));
    }
    Ok(OracleResult {
        values: v,
        sigma,
        tau,
        strategies: count,
        certificate,
    })
}

/// Independent cross-check: values of every pair by linear solve, min over
/// min strategies, max over max strategies. `cap` bounds the pair count.
pub fn oracle_double(game: &Ssg, cap: u128) -> Result<ValueVector> {
    let count = Strategy::count(game, Player::Max) * Strategy::count(game, Player::Min);
    check_cap(count, cap)?;
    let mut best: Option<ValueVector> = None;
    for sigma in Strategy::enumerate(game, Player::Max) {
        let mut low: Option<ValueVector> = None;
        for tau in Strategy::enumerate(game, Player::Min) {
            let v = values::value_of_pair(game, &sigma, &tau)?;
            low = Some(match low {
                None => v,
                Some(l) => l.pointwise_min(&v),
            });
        }
        let low = low.expect("at least one min strategy");
        best = Some(match best {
            None => low,
            Some(b) => b.pointwise_max(&low),
        });
    }
    Ok(best.expect("at least one max strategy"))
}

#[derive(Clone, Debug, Serialize)]
pub struct DenominatorReport {
    pub q: u64,
    pub r: usize,
    #[serde(serialize_with = "big_as_string")]
    pub bound: BigInt,
    #[serde(serialize_with = "big_as_string")]
    pub max_lcm: BigInt,
    pub pairs_checked: usize,
    pub exhaustive: bool,
    pub seed: u64,
}

fn big_as_string<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Pairs are enumerated exhaustively when there are at most this many.
pub const AUDIT_ENUMERATION_CAP: u128 = 4_096;

/// Checks that the value denominators of sampled pairs, and of all pairs
/// when few enough, divide into at most `q^r`. A larger lcm is reported as
/// a theorem violation.
pub fn denominator_audit(game: &Ssg, q: u64, samples: usize, seed: u64) -> Result<DenominatorReport> {
    if !game.has_binary_sinks() {
        return Err(Error::NotQSsg("sinks must be exactly {0, 1}".into()));
    }
    let info = infer_q(game)?;
    if let Some((x, qx)) = info.q_x.iter().find(|(_, &qx)| qx > q) {
        return Err(Error::NotQSsg(format!("q_x = {qx} at {x} exceeds q = {q}")));
    }
    let r = game.r();
    let bound = rational::big_pow(q, r);
    let mut report = DenominatorReport {
        q,
        r,
        bound: bound.clone(),
        max_lcm: BigInt::from(1),
        pairs_checked: 0,
        exhaustive: false,
        seed,
    };
    let check = |sigma: &Strategy, tau: &Strategy, report: &mut DenominatorReport| -> Result<()> {
        let v = values::value_of_pair(game, sigma, tau)?;
        let lcm = v.common_denominator();
        if lcm > bound {
            return Err(Error::TheoremViolation(format!(
                "value denominators have lcm {lcm} > q^r = {bound} under σ = {:?}, τ = {:?}",
                sigma.pairs().collect::<Vec<_>>(),
                tau.pairs().collect::<Vec<_>>()
            )));
        }
        if lcm > report.max_lcm {
            report.max_lcm = lcm;
        }
        report.pairs_checked += 1;
        Ok(())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let sigma = Strategy::random(game, Player::Max, &mut rng);
        let tau = Strategy::random(game, Player::Min, &mut rng);
        check(&sigma, &tau, &mut report)?;
    }
    let pairs = Strategy::count(game, Player::Max) * Strategy::count(game, Player::Min);
    if pairs <= AUDIT_ENUMERATION_CAP {
        for sigma in Strategy::enumerate(game, Player::Max) {
            for tau in Strategy::enumerate(game, Player::Min) {
                check(&sigma, &tau, &mut report)?;
            }
        }
        report.exhaustive = true;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::VertexId;
    use crate::generate::{self, GenSpec};
    use crate::rational::ratio;

    #[test]
    fn coin_and_chain() {
        let out = oracle_optimal(&generate::coin(), DEFAULT_CAP).unwrap();
        assert_eq!(out.values[VertexId(0)], ratio(1, 2));
        let chain = generate::gen_chain(2, 2).unwrap();
        let out = oracle_optimal(&chain, DEFAULT_CAP).unwrap();
        assert_eq!(out.values[VertexId(1)], ratio(1, 4));
    }

    #[test]
    fn double_enumeration_agrees() {
        for seed in 0..40 {
            let g = generate::gen_random(&GenSpec::new(3, 2, 2, 2, seed)).unwrap();
            let a = oracle_optimal(&g, DEFAULT_CAP).unwrap();
            assert_eq!(a.values, oracle_double(&g, DEFAULT_CAP).unwrap(), "seed {seed}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = generate::gen_random(&GenSpec::new(6, 0, 1, 2, 0)).unwrap();
        assert!(matches!(oracle_optimal(&g, 1), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn chain_denominator_is_tight() {
        let g = generate::gen_chain(2, 3).unwrap();
        let report = denominator_audit(&g, 2, 10, 0).unwrap();
        assert_eq!(report.max_lcm, BigInt::from(8));
        let coin = denominator_audit(&generate::coin(), 2, 10, 0).unwrap();
        assert!(coin.max_lcm <= BigInt::from(2));
    }
}
