//! Concrete improvement rules and the value-iteration algorithms.

mod fas;
mod hoffman_karp;
mod ijma;
mod opt;

pub use fas::{backward_induction, FeedbackArcSetRule};
pub use hoffman_karp::{HkVariant, HoffmanKarp, SwitchSet};
pub use ijma::{hybrid, ijma, IjmaOutcome};
pub use opt::{cfb_direct, cfb_init, solve_subgame, ArcSpec, CfbDirect, OptRule, SubgameMethod};

use crate::engine::ImprovementRule;

pub fn rule_hoffman_karp(variant: HkVariant) -> HoffmanKarp {
    HoffmanKarp::new(variant)
}

pub fn rule_gimbert_horn() -> OptRule {
    OptRule::new(ArcSpec::RandomOut).named("gh")
}

pub fn rule_opt_gsia(arcs: ArcSpec) -> OptRule {
    OptRule::new(arcs)
}

pub fn rule_cfb() -> OptRule {
    OptRule::new(ArcSpec::MinIn).named("cfb")
}

pub fn rule_feedback_arc_set(arcs: ArcSpec) -> FeedbackArcSetRule {
    FeedbackArcSetRule::new(arcs)
}

/// Boxed rule by its command-line name, for rules that run under the
/// engine. `ijma` and `hybrid:<p>` are not engine rules.
pub fn rule_by_name(name: &str, seed: u64) -> Option<Box<dyn ImprovementRule + Send>> {
    let rule: Box<dyn ImprovementRule + Send> = match name {
        "hk-all" => Box::new(rule_hoffman_karp(HkVariant::AllSwitches)),
        "hk-bland" => Box::new(rule_hoffman_karp(HkVariant::Bland(seed))),
        "hk-random" => Box::new(rule_hoffman_karp(HkVariant::RandomSubset(seed))),
        "gh" => Box::new(rule_gimbert_horn()),
        "cfb" => Box::new(rule_cfb()),
        _ => {
            if let Some(spec) = name.strip_prefix("opt:") {
                Box::new(rule_opt_gsia(ArcSpec::parse(spec)))
            } else if let Some(spec) = name.strip_prefix("fas:") {
                Box::new(rule_feedback_arc_set(ArcSpec::parse(spec)))
            } else if name == "fas" {
                Box::new(rule_feedback_arc_set(ArcSpec::DfsBack))
            } else {
                return None;
            }
        }
    };
    Some(rule)
}
