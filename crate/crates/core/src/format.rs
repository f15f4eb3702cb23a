//! The JSON game format.
//!
//! ```json
//! {
//!   "vertices": [
//!     { "id": 0, "kind": "random", "succ": [1, 2], "probs": ["1/2", "1/2"] },
//!     { "id": 1, "kind": "sink", "value": "0" },
//!     { "id": 2, "kind": "sink", "value": "1" }
//!   ]
//! }
//! ```

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::game::{Player, Ssg, Vertex, VertexId, VertexKind};
use crate::rational;
use crate::strategy::{Arc, ArcSet, Strategy, StrategyDoc};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameDoc {
    vertices: Vec<VertexDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: usize,
    kind: KindDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    succ: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    probs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<String>,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindDoc {
    Max,
    Min,
    Random,
    Sink,
}

impl From<KindDoc> for VertexKind {
    fn from(k: KindDoc) -> Self {
        match k {
            KindDoc::Max => VertexKind::Max,
            KindDoc::Min => VertexKind::Min,
            KindDoc::Random => VertexKind::Random,
            KindDoc::Sink => VertexKind::Sink,
        }
    }
}

impl From<VertexKind> for KindDoc {
    fn from(k: VertexKind) -> Self {
        match k {
            VertexKind::Max => KindDoc::Max,
            VertexKind::Min => KindDoc::Min,
            VertexKind::Random => KindDoc::Random,
            VertexKind::Sink => KindDoc::Sink,
        }
    }
}

/// Parses and validates a game document.
pub fn parse(text: &str) -> Result<Ssg> {
    let game = parse_unchecked(text)?;
    let report = game.validate();
    if report.is_ok() {
        Ok(game)
    } else {
        Err(Error::InvalidGame(report.to_string()))
    }
}

/// Parses without checking the game invariants; only the document shape
/// and the presence of required fields are enforced.
pub fn parse_unchecked(text: &str) -> Result<Ssg> {
    let doc: GameDoc = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let len = doc.vertices.len();
    let mut slots: Vec<Option<Vertex>> = vec![None; len];
    for v in doc.vertices {
        let id = v.id;
        if id >= len {
            return Err(Error::Parse(format!("vertex id {id}: ids must be 0..{}", len.saturating_sub(1))));
        }
        if slots[id].is_some() {
            return Err(Error::Parse(format!("vertex id {id} appears twice")));
        }
        let field = |name: &str, text: &str| {
            rational::parse(text).map_err(|e| Error::Parse(format!("vertex {id}, field \"{name}\": {e}")))
        };
        let kind = VertexKind::from(v.kind);
        let mut succ: Vec<VertexId> = v.succ.unwrap_or_default().into_iter().map(VertexId).collect();
        let probs = v
            .probs
            .unwrap_or_default()
            .iter()
            .map(|p| field("probs", p))
            .collect::<Result<Vec<_>>>()?;
        let value = match v.value {
            Some(t) => Some(field("value", &t)?),
            None if kind == VertexKind::Sink => {
                return Err(Error::Parse(format!("vertex {id}: missing field \"value\" for sink")));
            }
            None => None,
        };
        if kind == VertexKind::Sink && succ == [VertexId(id)] {
            succ.clear();
        }
        slots[id] = Some(Vertex {
            kind,
            succ,
            probs,
            value,
        });
    }
    Ok(Ssg::from_vertices(slots.into_iter().map(|v| v.expect("dense ids")).collect()))
}

/// Canonical form: vertices by id, successors in declared order, pretty
/// printed with a trailing newline.
pub fn serialize(game: &Ssg) -> String {
    let doc = GameDoc {
        vertices: game
            .ids()
            .map(|x| {
                let v = game.vertex(x);
                let sink = v.kind == VertexKind::Sink;
                VertexDoc {
                    id: x.0,
                    kind: v.kind.into(),
                    succ: (!sink).then(|| v.succ.iter().map(|y| y.0).collect()),
                    probs: (v.kind == VertexKind::Random).then(|| v.probs.iter().map(rational::format).collect()),
                    value: v.value.as_ref().map(rational::format),
                }
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    text
}

/// SHA-256 of the canonical form, hex encoded.
pub fn game_hash(game: &Ssg) -> String {
    hex::encode(Sha256::digest(serialize(game).as_bytes()))
}

/// Strategy file: `{"owner": "max", "choices": [[x, y], ...]}`.
pub fn parse_strategy(text: &str, game: &Ssg) -> Result<Strategy> {
    let doc: StrategyDoc = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    doc.into_strategy(game)
}

pub fn serialize_strategy(s: &Strategy) -> String {
    serde_json::to_string_pretty(s).expect("serializable")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcDoc {
    arcs: Vec<[usize; 2]>,
}

/// Arc file: `{"arcs": [[x, y], ...]}`.
pub fn parse_arcs(text: &str, game: &Ssg) -> Result<ArcSet> {
    let doc: ArcDoc = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    ArcSet::checked(game, doc.arcs.iter().map(|&[x, y]| Arc::new(x, y)))
}

/// Owner of a strategy document, without building it.
pub fn strategy_owner(text: &str) -> Result<Player> {
    #[derive(Deserialize)]
    struct Owner {
        owner: Player,
    }
    let o: Owner = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(o.owner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    const COIN: &str = r#"{
  "vertices": [
    {
      "id": 0,
      "kind": "random",
      "succ": [
        1,
        2
      ],
      "probs": [
        "1/2",
        "1/2"
      ]
    },
    {
      "id": 1,
      "kind": "sink",
      "value": "0"
    },
    {
      "id": 2,
      "kind": "sink",
      "value": "1"
    }
  ]
}
"#;

    #[test]
    fn canonical_round_trip() {
        let g = parse(COIN).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(serialize(&g), COIN);
    }

    #[test]
    fn exact_probabilities() {
        let text = COIN.replace("\"1/2\",\n        \"1/2\"", "\"1/3\",\n        \"2/3\"");
        let g = parse(&text).unwrap();
        assert_eq!(g.probs(VertexId(0))[0], ratio(1, 3));
    }

    #[test]
    fn missing_sink_value_names_field() {
        let text = r#"{"vertices": [{"id": 0, "kind": "sink"}]}"#;
        let err = parse(text).unwrap_err().to_string();
        assert!(err.contains("\"value\""), "{err}");
    }

    #[test]
    fn malformed_reports_line() {
        let err = parse("{\n\"vertices\": [\n{\"id\": 0, \"kind\": \"bogus\"}]}").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
        assert!(parse(r#"{"vertices": [{"id": 0, "kind": "sink", "value": "0.5"}]}"#).is_err());
    }

    #[test]
    fn invalid_games_are_rejected() {
        let text = r#"{"vertices": [
            {"id": 0, "kind": "random", "succ": [1], "probs": ["3/4"]},
            {"id": 1, "kind": "sink", "value": "1"}]}"#;
        assert!(matches!(parse(text), Err(Error::InvalidGame(_))));
        assert!(parse_unchecked(text).is_ok());
    }
}
