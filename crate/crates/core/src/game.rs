//! The simple stochastic game data model.
//!
//! Vertex ids are dense indices `0..len`, so per-vertex maps are plain
//! vectors throughout the crate. Sinks store their self-loop implicitly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Max,
    Min,
    Random,
    Sink,
}

impl VertexKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VertexKind::Max => "max",
            VertexKind::Min => "min",
            VertexKind::Random => "random",
            VertexKind::Sink => "sink",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Max,
    Min,
}

impl Player {
    pub fn kind(self) -> VertexKind {
        match self {
            Player::Max => VertexKind::Max,
            Player::Min => VertexKind::Min,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub kind: VertexKind,
    /// Successors in declared order. Empty for sinks.
    pub succ: Vec<VertexId>,
    /// Parallel to `succ`; random vertices only.
    pub probs: Vec<Rational>,
    /// Sinks only.
    pub value: Option<Rational>,
}

impl Vertex {
    pub fn max(succ: impl IntoIterator<Item = usize>) -> Self {
        Self::controlled(VertexKind::Max, succ)
    }

    pub fn min(succ: impl IntoIterator<Item = usize>) -> Self {
        Self::controlled(VertexKind::Min, succ)
    }

    fn controlled(kind: VertexKind, succ: impl IntoIterator<Item = usize>) -> Self {
        Vertex {
            kind,
            succ: succ.into_iter().map(VertexId).collect(),
            probs: Vec::new(),
            value: None,
        }
    }

    pub fn random(dist: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let (succ, probs) = dist.into_iter().map(|(s, p)| (VertexId(s), p)).unzip();
        Vertex {
            kind: VertexKind::Random,
            succ,
            probs,
            value: None,
        }
    }

    pub fn sink(value: Rational) -> Self {
        Vertex {
            kind: VertexKind::Sink,
            succ: Vec::new(),
            probs: Vec::new(),
            value: Some(value),
        }
    }
}

/// A simple stochastic game. Construction does not validate; call
/// [`Ssg::validate`] or use [`Ssg::checked`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ssg {
    vertices: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub vertex: VertexId,
    pub rule: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "vertex {}: {} ({})", v.vertex, v.rule, v.detail)?;
        }
        Ok(())
    }
}

pub const RULE_NO_SINK: &str = "game has no sink";
pub const RULE_NO_ARC: &str = "vertex needs an outgoing arc";
pub const RULE_SINK_LOOP: &str = "sink must self-loop";
pub const RULE_SUCC_RANGE: &str = "successor out of range";
pub const RULE_DUPLICATE_ARC: &str = "duplicate arc";
pub const RULE_PROB_COUNT: &str = "probabilities must parallel successors";
pub const RULE_PROB_POSITIVE: &str = "probability must be positive";
pub const RULE_DIST_SUM: &str = "distribution sum ≠ 1";
pub const RULE_SINK_VALUE: &str = "sink value missing";
pub const RULE_SINK_RANGE: &str = "sink value outside [0,1]";
pub const RULE_STRAY_FIELD: &str = "field not allowed for vertex kind";

impl Ssg {
    pub fn from_vertices(vertices: Vec<Vertex>) -> Self {
        Ssg { vertices }
    }

    /// Builds and validates in one step.
    pub fn checked(vertices: Vec<Vertex>) -> Result<Self> {
        let game = Ssg::from_vertices(vertices);
        let report = game.validate();
        if report.is_ok() {
            Ok(game)
        } else {
            Err(Error::InvalidGame(report.to_string()))
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, x: VertexId) -> &Vertex {
        &self.vertices[x.0]
    }

    pub fn ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn kind(&self, x: VertexId) -> VertexKind {
        self.vertices[x.0].kind
    }

    pub fn succ(&self, x: VertexId) -> &[VertexId] {
        &self.vertices[x.0].succ
    }

    pub fn probs(&self, x: VertexId) -> &[Rational] {
        &self.vertices[x.0].probs
    }

    /// `(successor, probability)` pairs of a random vertex.
    pub fn distribution(&self, x: VertexId) -> impl Iterator<Item = (VertexId, &Rational)> + '_ {
        let v = &self.vertices[x.0];
        v.succ.iter().copied().zip(v.probs.iter())
    }

    pub fn sink_value(&self, x: VertexId) -> Option<&Rational> {
        self.vertices[x.0].value.as_ref()
    }

    pub fn of_kind(&self, kind: VertexKind) -> impl Iterator<Item = VertexId> + '_ {
        self.ids().filter(move |&x| self.kind(x) == kind)
    }

    pub fn max_vertices(&self) -> Vec<VertexId> {
        self.of_kind(VertexKind::Max).collect()
    }

    pub fn min_vertices(&self) -> Vec<VertexId> {
        self.of_kind(VertexKind::Min).collect()
    }

    pub fn random_vertices(&self) -> Vec<VertexId> {
        self.of_kind(VertexKind::Random).collect()
    }

    pub fn sinks(&self) -> Vec<VertexId> {
        self.of_kind(VertexKind::Sink).collect()
    }

    /// `n = |V_max|`.
    pub fn n(&self) -> usize {
        self.of_kind(VertexKind::Max).count()
    }

    /// `r = |V_R|`.
    pub fn r(&self) -> usize {
        self.of_kind(VertexKind::Random).count()
    }

    pub fn has_arc(&self, from: VertexId, to: VertexId) -> bool {
        from.0 < self.len() && self.succ(from).contains(&to)
    }

    /// All arcs out of non-sink vertices, in vertex then declared order.
    pub fn arcs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.ids().flat_map(move |x| self.succ(x).iter().map(move |&y| (x, y)))
    }

    /// Predecessor lists (sinks' implicit self-loops excluded).
    pub fn predecessors(&self) -> Vec<Vec<VertexId>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (x, y) in self.arcs() {
            pred[y.0].push(x);
        }
        pred
    }

    /// Copy with the given sink values replaced.
    pub fn with_sink_values(&self, values: &BTreeMap<VertexId, Rational>) -> Ssg {
        let mut g = self.clone();
        for (x, v) in values {
            assert_eq!(g.kind(*x), VertexKind::Sink, "vertex {x} is not a sink");
            g.vertices[x.0].value = Some(v.clone());
        }
        g
    }

    /// Copy where each listed vertex becomes a sink of the given value.
    /// Ids are preserved, so strategies carry over unchanged.
    pub fn with_vertices_as_sinks(&self, values: &BTreeMap<VertexId, Rational>) -> Ssg {
        let mut g = self.clone();
        for (x, v) in values {
            g.vertices[x.0] = Vertex::sink(v.clone());
        }
        g
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut push = |vertex: usize, rule: &'static str, detail: String| {
            violations.push(Violation {
                vertex: VertexId(vertex),
                rule,
                detail,
            })
        };
        let n = self.vertices.len();
        if !self.vertices.iter().any(|v| v.kind == VertexKind::Sink) {
            push(0, RULE_NO_SINK, "V_S must be nonempty".into());
        }
        for (i, v) in self.vertices.iter().enumerate() {
            for s in &v.succ {
                if s.0 >= n {
                    push(i, RULE_SUCC_RANGE, format!("successor {s} but only {n} vertices"));
                }
            }
            let distinct: BTreeSet<_> = v.succ.iter().collect();
            if distinct.len() != v.succ.len() {
                push(i, RULE_DUPLICATE_ARC, "successor listed twice".into());
            }
            match v.kind {
                VertexKind::Sink => {
                    if !(v.succ.is_empty() || v.succ == [VertexId(i)]) {
                        push(i, RULE_SINK_LOOP, format!("sink has arcs to {:?}", v.succ));
                    }
                    match &v.value {
                        None => push(i, RULE_SINK_VALUE, "sink needs a value".into()),
                        Some(val) if !rational::in_unit_interval(val) => {
                            push(i, RULE_SINK_RANGE, format!("value {val}"))
                        }
                        _ => {}
                    }
                    if !v.probs.is_empty() {
                        push(i, RULE_STRAY_FIELD, "sink has probabilities".into());
                    }
                }
                kind => {
                    if v.succ.is_empty() {
                        push(i, RULE_NO_ARC, format!("{} vertex without successors", kind.as_str()));
                    }
                    if v.value.is_some() {
                        push(i, RULE_STRAY_FIELD, "only sinks carry a value".into());
                    }
                    if kind == VertexKind::Random {
                        if v.probs.len() != v.succ.len() {
                            push(
                                i,
                                RULE_PROB_COUNT,
                                format!("{} successors, {} probabilities", v.succ.len(), v.probs.len()),
                            );
                        }
                        if v.probs.iter().any(|p| !p.is_positive()) {
                            push(i, RULE_PROB_POSITIVE, "support must equal successor set".into());
                        }
                        let sum: Rational = v.probs.iter().sum();
                        if !sum.is_one() {
                            push(i, RULE_DIST_SUM, format!("sum is {sum}"));
                        }
                    } else if !v.probs.is_empty() {
                        push(i, RULE_STRAY_FIELD, "only random vertices carry probabilities".into());
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// Exactly two sinks, valued 0 and 1.
    pub fn has_binary_sinks(&self) -> bool {
        let mut vals: Vec<&Rational> = self.sinks().into_iter().filter_map(|s| self.sink_value(s)).collect();
        vals.sort();
        vals.len() == 2 && vals[0].is_zero() && vals[1].is_one()
    }

    /// The 0-sink and 1-sink of a game with binary sinks.
    pub fn binary_sinks(&self) -> Option<(VertexId, VertexId)> {
        if !self.has_binary_sinks() {
            return None;
        }
        let s = self.sinks();
        let zero = *s.iter().find(|&&x| self.sink_value(x).is_some_and(|v| v.is_zero()))?;
        let one = *s.iter().find(|&&x| self.sink_value(x).is_some_and(|v| v.is_one()))?;
        Some((zero, one))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QInfo {
    /// Maximum over random vertices of the per-vertex minimal denominator.
    pub q: u64,
    pub q_x: BTreeMap<VertexId, u64>,
    /// `ℓ_{x,x'}` parallel to the successor list of each random vertex.
    pub numerators: BTreeMap<VertexId, Vec<u64>>,
    /// Exactly two sinks with values 0 and 1. When false the game is a
    /// general SSG and `q` only describes its distributions.
    pub q_ssg: bool,
}

impl QInfo {
    pub fn bound_pow_r(&self, r: usize) -> num_bigint::BigInt {
        rational::big_pow(self.q, r)
    }
}

/// Recovers `q`, the `q_x` and the numerators of every distribution.
pub fn infer_q(game: &Ssg) -> Result<QInfo> {
    let mut q = 1u64;
    let mut q_x = BTreeMap::new();
    let mut numerators = BTreeMap::new();
    for x in game.of_kind(VertexKind::Random) {
        let den = game
            .probs(x)
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, p| acc.lcm(p.denom()));
        let den_u = den
            .to_u64()
            .ok_or_else(|| Error::InvalidGame(format!("denominator at {x} does not fit in u64")))?;
        let nums = game
            .probs(x)
            .iter()
            .map(|p| (p * Rational::from_integer(den.clone())).to_integer().to_u64().unwrap_or(0))
            .collect();
        q = q.max(den_u);
        q_x.insert(x, den_u);
        numerators.insert(x, nums);
    }
    Ok(QInfo {
        q,
        q_x,
        numerators,
        q_ssg: game.has_binary_sinks(),
    })
}

/// Rewrites every distribution over the common denominator `q` by scaling
/// numerators. Each `q_x` must divide `q`.
pub fn normalize_to_q(game: &Ssg, q: u64) -> Result<Ssg> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    let info = infer_q(game)?;
    let mut vertices = game.vertices().to_vec();
    let q_big = num_bigint::BigInt::from(q);
    for (&x, &qx) in &info.q_x {
        if q % qx != 0 {
            return Err(Error::IncompatibleQ { q, qx, vertex: x });
        }
        let scale = q / qx;
        let v = &mut vertices[x.0];
        let mut total = 0u64;
        v.probs = info.numerators[&x]
            .iter()
            .map(|&l| {
                total += l * scale;
                Rational::new((l * scale).into(), q_big.clone())
            })
            .collect();
        // Left-over mass stays put. With qx | q the scaled numerators
        // already sum to q, so this only fires for hand-built inputs.
        let stay = q - total;
        if stay > 0 {
            let p = Rational::new(stay.into(), q_big.clone());
            match v.succ.iter().position(|&s| s == x) {
                Some(i) => v.probs[i] += p,
                None => {
                    v.succ.push(x);
                    v.probs.push(p);
                }
            }
        }
    }
    Ok(Ssg::from_vertices(vertices))
}
