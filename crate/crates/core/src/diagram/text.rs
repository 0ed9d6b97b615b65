//! Line-oriented diagram format:
//!
//! ```text
//! # comment
//! tangle m=2 n=2
//! component 1 long from B1 to T2 : O1+ U2-
//! component 2 closed : X3 Y3
//! ```
//!
//! Tokens are `O<id><sign>` / `U<id><sign>` for classical passages (the
//! sign must agree at both occurrences) and `X<id>` / `Y<id>` for the
//! primary / secondary strand of a double point.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use super::{
    Component, ComponentKind, CrossingId, CrossingKind, DiagramError, End, Passage, Role, Side, Sign, Slot, SlotUse,
    TangleDiagram,
};

/// Parses one event token.
pub(crate) fn parse_token(tok: &str) -> Result<(CrossingId, Role, Option<Sign>), String> {
    let mut chars = tok.chars();
    let lead = chars.next().ok_or("empty token")?;
    let rest = chars.as_str();
    let (role, classical) = match lead {
        'O' => (Role::Over, true),
        'U' => (Role::Under, true),
        'X' => (Role::SingPrimary, false),
        'Y' => (Role::SingSecondary, false),
        _ => return Err(format!("unknown token `{tok}`")),
    };
    let (digits, sign) = if classical {
        match rest.chars().last() {
            Some('+') => (&rest[..rest.len() - 1], Some(Sign::Pos)),
            Some('-') => (&rest[..rest.len() - 1], Some(Sign::Neg)),
            _ => return Err(format!("token `{tok}` needs a sign")),
        }
    } else {
        (rest, None)
    };
    let id: CrossingId = digits.parse().map_err(|_| format!("bad crossing id in `{tok}`"))?;
    if id == 0 {
        return Err(format!("crossing ids start at 1 in `{tok}`"));
    }
    Ok((id, role, sign))
}

pub(crate) fn token(p: Passage, kind: CrossingKind) -> String {
    match (p.role, kind) {
        (Role::Over, CrossingKind::Classical(s)) => format!("O{}{}", p.crossing, s.symbol()),
        (Role::Under, CrossingKind::Classical(s)) => format!("U{}{}", p.crossing, s.symbol()),
        (Role::SingPrimary, _) => format!("X{}", p.crossing),
        (Role::SingSecondary, _) => format!("Y{}", p.crossing),
        // only reachable for diagrams that fail validation
        (Role::Over, CrossingKind::Singular) => format!("O{}?", p.crossing),
        (Role::Under, CrossingKind::Singular) => format!("U{}?", p.crossing),
    }
}

pub(crate) fn parse_slot(s: &str) -> Option<Slot> {
    let side = match s.chars().next()? {
        'T' => Side::Top,
        'B' => Side::Bottom,
        _ => return None,
    };
    let index: usize = s[1..].parse().ok()?;
    (index >= 1).then_some(Slot { side, index })
}

/// Crossing table under construction; catches sign and kind conflicts.
#[derive(Default)]
pub(crate) struct TableBuilder {
    pub kinds: BTreeMap<CrossingId, CrossingKind>,
}

impl TableBuilder {
    pub fn record(&mut self, id: CrossingId, sign: Option<Sign>) -> Result<(), String> {
        let kind = match sign {
            Some(s) => CrossingKind::Classical(s),
            None => CrossingKind::Singular,
        };
        match self.kinds.get(&id) {
            None => {
                self.kinds.insert(id, kind);
                Ok(())
            }
            Some(k) if *k == kind => Ok(()),
            Some(CrossingKind::Classical(_)) if sign.is_some() => Err(format!("sign mismatch at crossing {id}")),
            Some(_) => Err(format!("crossing {id} mixes classical and singular passages")),
        }
    }
}

/// Places component ends into slot tables, reporting duplicates and gaps.
pub(crate) struct SlotTable {
    pub top: Vec<Option<SlotUse>>,
    pub bottom: Vec<Option<SlotUse>>,
}

impl SlotTable {
    pub fn new(m: usize, n: usize) -> Self {
        SlotTable { top: vec![None; m], bottom: vec![None; n] }
    }

    pub fn place(&mut self, slot: Slot, use_: SlotUse) -> Result<(), String> {
        let table = match slot.side {
            Side::Top => &mut self.top,
            Side::Bottom => &mut self.bottom,
        };
        let cell = table.get_mut(slot.index - 1).ok_or_else(|| format!("slot {slot} is out of range"))?;
        if cell.is_some() {
            return Err(format!("slot {slot} is used twice"));
        }
        *cell = Some(use_);
        Ok(())
    }

    pub fn finish(self) -> Result<(Vec<SlotUse>, Vec<SlotUse>), String> {
        let collect = |v: Vec<Option<SlotUse>>, side: Side| {
            v.into_iter()
                .enumerate()
                .map(|(k, u)| {
                    u.ok_or_else(|| format!("slot {} is not used by any component", Slot { side, index: k + 1 }))
                })
                .collect::<Result<Vec<_>, _>>()
        };
        Ok((collect(self.top, Side::Top)?, collect(self.bottom, Side::Bottom)?))
    }
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl Line<'_> {
    /// Whitespace-separated words with 1-based columns.
    fn words(&self) -> Vec<(usize, &str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, ch) in self.text.char_indices().chain(std::iter::once((self.text.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    out.push((s + 1, &self.text[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        out
    }

    fn err(&self, column: usize, message: impl Into<String>) -> DiagramError {
        DiagramError::Syntax { line: self.number, column, message: message.into() }
    }
}

fn parse_header(line: &Line) -> Result<(usize, usize), DiagramError> {
    let words = line.words();
    let expect = |i: usize, key: &str| -> Result<usize, DiagramError> {
        let (col, w) =
            words.get(i).copied().ok_or_else(|| line.err(line.text.len() + 1, format!("expected `{key}=<int>`")))?;
        w.strip_prefix(key)
            .and_then(|v| v.strip_prefix('='))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| line.err(col, format!("expected `{key}=<int>`, found `{w}`")))
    };
    let m = expect(1, "m")?;
    let n = expect(2, "n")?;
    if let Some((col, w)) = words.get(3) {
        return Err(line.err(*col, format!("unexpected `{w}` after header")));
    }
    Ok((m, n))
}

/// Parses the text format and validates the result.
pub fn parse(input: &str) -> Result<TangleDiagram, DiagramError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut table = TableBuilder::default();
    let mut slots: Option<SlotTable> = None;
    let mut components = Vec::new();

    for (i, raw) in input.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("");
        let line = Line { number: i + 1, text };
        let words = line.words();
        let Some(&(col0, first)) = words.first() else { continue };
        match first {
            "tangle" => {
                if header.is_some() {
                    return Err(line.err(col0, "duplicate `tangle` header"));
                }
                let (m, n) = parse_header(&line)?;
                header = Some((m, n, line.number));
                slots = Some(SlotTable::new(m, n));
            }
            "component" => {
                let slots = slots.as_mut().ok_or_else(|| line.err(col0, "`component` before `tangle` header"))?;
                let colon =
                    text.find(':').ok_or_else(|| line.err(text.len() + 1, "expected `:` before the token list"))?;
                let head = Line { number: line.number, text: &text[..colon] };
                let head_words = head.words();
                let index_word = head_words.get(1).ok_or_else(|| line.err(colon + 1, "expected component index"))?;
                let index: usize = index_word
                    .1
                    .parse()
                    .map_err(|_| line.err(index_word.0, format!("bad component index `{}`", index_word.1)))?;
                if index != components.len() + 1 {
                    return Err(
                        line.err(index_word.0, format!("expected component {}, found {index}", components.len() + 1))
                    );
                }
                let comp_idx = index - 1;
                let kind_word = head_words.get(2).ok_or_else(|| line.err(colon + 1, "expected `closed` or `long`"))?;
                let kind = match kind_word.1 {
                    "closed" => {
                        if let Some((c, w)) = head_words.get(3) {
                            return Err(line.err(*c, format!("unexpected `{w}`")));
                        }
                        ComponentKind::Closed
                    }
                    "long" => {
                        let shape: Vec<&str> = head_words[3..].iter().map(|w| w.1).collect();
                        if shape.len() != 4 || shape[0] != "from" || shape[2] != "to" {
                            return Err(line.err(kind_word.0, "expected `long from <slot> to <slot>`"));
                        }
                        for (pos, end) in [(4usize, End::Start), (6usize, End::Finish)] {
                            let (c, w) = head_words[pos];
                            let slot = parse_slot(w).ok_or_else(|| line.err(c, format!("bad slot `{w}`")))?;
                            slots.place(slot, SlotUse { component: comp_idx, end }).map_err(|e| line.err(c, e))?;
                        }
                        ComponentKind::Long
                    }
                    other => return Err(line.err(kind_word.0, format!("expected `closed` or `long`, found `{other}`"))),
                };
                let tokens = Line { number: line.number, text: &text[colon + 1..] };
                let mut events = Vec::new();
                for (c, w) in tokens.words() {
                    let col = c + colon + 1;
                    let (id, role, sign) = parse_token(w).map_err(|e| line.err(col, e))?;
                    table.record(id, sign).map_err(|e| line.err(col, e))?;
                    events.push(Passage::new(id, role));
                }
                components.push(Component { kind, events });
            }
            other => return Err(line.err(col0, format!("unexpected `{other}`"))),
        }
    }
    let (_, _, header_line) = header.ok_or(DiagramError::Syntax {
        line: 1,
        column: 1,
        message: "missing `tangle m=<int> n=<int>` header".into(),
    })?;
    let (top, bottom) = slots
        .expect("slot table exists once the header is read")
        .finish()
        .map_err(|message| DiagramError::Syntax { line: header_line, column: 1, message })?;
    TangleDiagram::new(components, table.kinds, top, bottom)
}

/// Canonical text form; `parse(serialize(d)) == d` for valid diagrams.
pub fn serialize(d: &TangleDiagram) -> String {
    let (m, n) = d.arity();
    let mut out = format!("tangle m={m} n={n}\n");
    for (i, comp) in d.components().iter().enumerate() {
        write!(out, "component {}", i + 1).unwrap();
        match comp.kind {
            ComponentKind::Closed => out.push_str(" closed :"),
            ComponentKind::Long => {
                let from = d.slot_of(i, End::Start).map_or("?".to_string(), |s| s.to_string());
                let to = d.slot_of(i, End::Finish).map_or("?".to_string(), |s| s.to_string());
                write!(out, " long from {from} to {to} :").unwrap();
            }
        }
        for p in &comp.events {
            let kind = d.kind(p.crossing).unwrap_or(CrossingKind::Singular);
            write!(out, " {}", token(*p, kind)).unwrap();
        }
        out.push('\n');
    }
    out
}

impl FromStr for TangleDiagram {
    type Err = DiagramError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl std::fmt::Display for TangleDiagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&serialize(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Violation;

    const EX3: &str = "\
tangle m=2 n=4
component 1 long from T1 to B3 : O1+
component 2 long from B4 to T2 : O2-
component 3 long from B1 to B2 : U1+ U2-
";

    #[test]
    fn parses_three_components() {
        let d = parse(EX3).unwrap();
        assert_eq!(d.components().len(), 3);
        assert_eq!(d.sign(1), Some(Sign::Pos));
        assert_eq!(d.sign(2), Some(Sign::Neg));
        assert_eq!(d.arity(), (2, 4));
        assert_eq!(d.slot_of(2, End::Start), Some(Slot::bottom(1)));
    }

    #[test]
    fn canonical_round_trip() {
        assert_eq!(serialize(&parse(EX3).unwrap()), EX3);
        let kink = "tangle m=0 n=0\ncomponent 1 closed : O1+ U1+\n";
        assert_eq!(serialize(&parse(kink).unwrap()), kink);
        let empty = "tangle m=1 n=1\ncomponent 1 long from B1 to T1 :\n";
        assert_eq!(serialize(&parse(empty).unwrap()), empty);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# kink\n\ntangle m=0 n=0   # header\ncomponent 1 closed:O1- U1-\n";
        let d = parse(text).unwrap();
        assert_eq!(d.sign(1), Some(Sign::Neg));
    }

    #[test]
    fn sign_mismatch() {
        let err = parse("tangle m=0 n=0\ncomponent 1 closed : O1+ U1-").unwrap_err();
        assert_eq!(err, DiagramError::Syntax { line: 2, column: 26, message: "sign mismatch at crossing 1".into() });
        assert!(err.to_string().contains("sign mismatch at crossing 1"));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let cases = [
            ("component 1 closed : O1+ U1+", 1, 1),
            ("tangle m=0 n=x", 1, 12),
            ("tangle m=0 n=0\ncomponent 2 closed :", 2, 11),
            ("tangle m=0 n=0\ncomponent 1 closed : Q1", 2, 22),
            ("tangle m=0 n=0\ncomponent 1 closed : O1", 2, 22),
            ("tangle m=1 n=0\ncomponent 1 long from T1 to T2 :", 2, 29),
            ("tangle m=2 n=0\ncomponent 1 long from T1 to T1 :", 2, 29),
            ("tangle m=0 n=0\ncomponent 1 closed : O1+ X1", 2, 26),
            ("tangle m=0 n=0\nknot", 2, 1),
        ];
        for (text, line, column) in cases {
            match parse(text) {
                Err(DiagramError::Syntax { line: l, column: c, .. }) => {
                    assert_eq!((l, c), (line, column), "{text}");
                }
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn unused_slot_is_an_error() {
        let err = parse("tangle m=1 n=1\ncomponent 1 closed :").unwrap_err();
        assert!(err.to_string().contains("slot T1 is not used"), "{err}");
    }

    #[test]
    fn structural_violations_surface() {
        let err = parse("tangle m=0 n=0\ncomponent 1 closed : O1+ O1+").unwrap_err();
        match err {
            DiagramError::Invalid(v) => {
                assert!(v.contains(&Violation::DuplicateRole { crossing: 1, role: Role::Over, count: 2 }))
            }
            other => panic!("{other:?}"),
        }
    }
}
