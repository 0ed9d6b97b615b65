//! JSON mirror of the text format:
//! `{"m": 2, "n": 4, "components": [{"kind": "long", "from": "T1", "to": "B3", "events": ["O1+"]}]}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::text::{parse_slot, parse_token, token, SlotTable, TableBuilder};
use super::{Component, ComponentKind, CrossingKind, DiagramError, End, Passage, SlotUse, TangleDiagram};

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindJson {
    Closed,
    Long,
}

#[derive(Serialize, Deserialize)]
struct ComponentJson {
    kind: KindJson,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    from: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    to: Option<String>,
    events: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    m: usize,
    n: usize,
    components: Vec<ComponentJson>,
}

impl TangleDiagram {
    pub fn to_json(&self) -> Value {
        let (m, n) = self.arity();
        let components = self
            .components()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let slot = |end| self.slot_of(i, end).map(|s| s.to_string());
                let long = c.kind == ComponentKind::Long;
                ComponentJson {
                    kind: if long { KindJson::Long } else { KindJson::Closed },
                    from: if long { slot(End::Start) } else { None },
                    to: if long { slot(End::Finish) } else { None },
                    events: c
                        .events
                        .iter()
                        .map(|p| token(*p, self.kind(p.crossing).unwrap_or(CrossingKind::Singular)))
                        .collect(),
                }
            })
            .collect();
        serde_json::to_value(DiagramJson { m, n, components }).expect("diagram JSON is always serializable")
    }

    /// Reads the JSON mirror. A long component without `from`/`to` is left
    /// slotless and then reported by validation as an endpoint arity error.
    pub fn from_json(v: &Value) -> Result<TangleDiagram, DiagramError> {
        let raw: DiagramJson = serde_json::from_value(v.clone()).map_err(|e| DiagramError::Json(e.to_string()))?;
        let mut table = TableBuilder::default();
        let mut slots = SlotTable::new(raw.m, raw.n);
        let mut components = Vec::with_capacity(raw.components.len());
        let mut dangling = Vec::new();
        for (i, c) in raw.components.into_iter().enumerate() {
            let at = |msg: String| DiagramError::Json(format!("component {}: {msg}", i + 1));
            let kind = match c.kind {
                KindJson::Closed => ComponentKind::Closed,
                KindJson::Long => ComponentKind::Long,
            };
            for (name, end) in [(&c.from, End::Start), (&c.to, End::Finish)] {
                if let Some(name) = name {
                    let slot = parse_slot(name).ok_or_else(|| at(format!("bad slot `{name}`")))?;
                    slots.place(slot, SlotUse { component: i, end }).map_err(at)?;
                }
            }
            let mut events = Vec::with_capacity(c.events.len());
            for tok in &c.events {
                let (id, role, sign) = parse_token(tok).map_err(at)?;
                table.record(id, sign).map_err(at)?;
                events.push(Passage::new(id, role));
            }
            components.push(Component { kind, events });
        }
        let to_vec = |v: Vec<Option<SlotUse>>, dangling: &mut Vec<usize>| {
            v.into_iter()
                .enumerate()
                .filter_map(|(k, u)| {
                    if u.is_none() {
                        dangling.push(k);
                    }
                    u
                })
                .collect::<Vec<_>>()
        };
        let top = to_vec(slots.top, &mut dangling);
        let bottom = to_vec(slots.bottom, &mut dangling);
        let d = TangleDiagram::from_parts(components, table.kinds, top, bottom);
        d.validate().map_err(DiagramError::Invalid)?;
        if !dangling.is_empty() {
            return Err(DiagramError::Json(format!(
                "{} boundary slot(s) are not used by any component",
                dangling.len()
            )));
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::text::parse;
    use crate::diagram::Violation;
    use serde_json::json;

    #[test]
    fn round_trip() {
        let d = parse("tangle m=2 n=4\ncomponent 1 long from T1 to B3 : O1+\ncomponent 2 long from B4 to T2 : O2-\ncomponent 3 long from B1 to B2 : U1+ U2-\n").unwrap();
        let v = d.to_json();
        assert_eq!(v["components"][0]["from"], json!("T1"));
        assert_eq!(v["components"][2]["events"], json!(["U1+", "U2-"]));
        assert_eq!(TangleDiagram::from_json(&v).unwrap(), d);
    }

    #[test]
    fn closed_has_no_slots() {
        let d = parse("tangle m=0 n=0\ncomponent 1 closed : X1 Y1\n").unwrap();
        let v = d.to_json();
        assert!(v["components"][0].get("from").is_none());
        assert_eq!(TangleDiagram::from_json(&v).unwrap(), d);
    }

    #[test]
    fn missing_slot_is_arity_violation() {
        let v = json!({"m": 1, "n": 0, "components": [{"kind": "long", "from": "T1", "events": []}]});
        match TangleDiagram::from_json(&v) {
            Err(DiagramError::Invalid(v)) => {
                assert_eq!(v, vec![Violation::EndpointArity { component: 1, starts: 1, finishes: 0 }])
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sign_mismatch_reported() {
        let v = json!({"m": 0, "n": 0, "components": [{"kind": "closed", "events": ["O1+", "U1-"]}]});
        let err = TangleDiagram::from_json(&v).unwrap_err();
        assert!(err.to_string().contains("sign mismatch at crossing 1"), "{err}");
    }
}
