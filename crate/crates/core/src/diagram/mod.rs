//! The combinatorial tangle model: an extended Gauss code listing, per
//! component, the crossing passages met along its orientation.
//!
//! Virtual crossings are not represented. They carry no labels, weights or
//! pairing contributions, and the virtual and mixed Reidemeister moves act
//! trivially on Gauss codes.

mod json;
mod random;
mod text;
mod word;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use random::{random_diagram, random_diagram_with, random_lower_for, RandomSpec};
pub use text::{parse, serialize};
pub use word::{from_generator_word, Atom, Dir, GeneratorWord};

pub type CrossingId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn from_value(v: i64) -> Sign {
        if v >= 0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CrossingKind {
    Classical(Sign),
    Singular,
}

/// How a component meets a crossing. `SingPrimary` marks the strand that
/// passes over in the positive resolution of a double point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Over,
    Under,
    SingPrimary,
    SingSecondary,
}

impl Role {
    pub fn is_classical(self) -> bool {
        matches!(self, Role::Over | Role::Under)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Passage {
    pub crossing: CrossingId,
    pub role: Role,
}

impl Passage {
    pub fn new(crossing: CrossingId, role: Role) -> Self {
        Passage { crossing, role }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    Closed,
    Long,
}

/// One component. For a closed component the basepoint sits just before
/// `events[0]`; for a long one, `events` runs from its start end to its
/// finish end.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub kind: ComponentKind,
    pub events: Vec<Passage>,
}

impl Component {
    pub fn closed(events: Vec<Passage>) -> Self {
        Component { kind: ComponentKind::Closed, events }
    }

    pub fn long(events: Vec<Passage>) -> Self {
        Component { kind: ComponentKind::Long, events }
    }

    pub fn is_closed(&self) -> bool {
        self.kind == ComponentKind::Closed
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Top,
    Bottom,
}

/// A boundary position, `T<k>` or `B<k>` (1-based, left to right).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub side: Side,
    pub index: usize,
}

impl Slot {
    pub fn top(index: usize) -> Self {
        Slot { side: Side::Top, index }
    }

    pub fn bottom(index: usize) -> Self {
        Slot { side: Side::Bottom, index }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Top => write!(f, "T{}", self.index),
            Side::Bottom => write!(f, "B{}", self.index),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    Start,
    Finish,
}

impl End {
    pub fn opposite(self) -> End {
        match self {
            End::Start => End::Finish,
            End::Finish => End::Start,
        }
    }
}

/// Which component end a boundary slot carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SlotUse {
    pub component: usize,
    pub end: End,
}

/// Position of one passage: 0-based component and offset into its events.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PassageLoc {
    pub component: usize,
    pub offset: usize,
}

/// The two passages of one crossing, in traversal order (component, then
/// offset).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossingPassages {
    pub first: (PassageLoc, Role),
    pub second: (PassageLoc, Role),
}

impl CrossingPassages {
    pub fn with_role(&self, role: Role) -> Option<PassageLoc> {
        if self.first.1 == role {
            Some(self.first.0)
        } else if self.second.1 == role {
            Some(self.second.0)
        } else {
            None
        }
    }
}

/// An oriented virtual tangle as an extended Gauss code.
///
/// `top[k]` / `bottom[k]` describe slots `T<k+1>` / `B<k+1>`. Use
/// [`TangleDiagram::validate`] (or the parsers, which call it) before
/// handing a hand-built diagram to the invariant code.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TangleDiagram {
    components: Vec<Component>,
    crossings: BTreeMap<CrossingId, CrossingKind>,
    top: Vec<SlotUse>,
    bottom: Vec<SlotUse>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("component {component}, position {offset}: unknown crossing {crossing}")]
    UnknownCrossing { component: usize, offset: usize, crossing: CrossingId },
    #[error("crossing {crossing}: role {role:?} does not match its kind")]
    RoleKindMismatch { crossing: CrossingId, role: Role },
    #[error("duplicate role: crossing {crossing} has {count} {role:?} passages")]
    DuplicateRole { crossing: CrossingId, role: Role, count: usize },
    #[error("missing role: crossing {crossing} has no {role:?} passage")]
    MissingRole { crossing: CrossingId, role: Role },
    #[error("endpoint arity: component {component} has {starts} start and {finishes} finish slots")]
    EndpointArity { component: usize, starts: usize, finishes: usize },
    #[error("slot {slot} refers to missing component {component}")]
    BadSlot { slot: Slot, component: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid diagram: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("generator word: row {row} has {found} strands where the row above ends with {expected}")]
    ArityMismatch { row: usize, expected: usize, found: usize },
    #[error("generator word: row {row}, strand {position} changes direction")]
    DirectionMismatch { row: usize, position: usize },
    #[error("json: {0}")]
    Json(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl TangleDiagram {
    /// Assembles a diagram without checking it.
    pub fn from_parts(
        components: Vec<Component>,
        crossings: BTreeMap<CrossingId, CrossingKind>,
        top: Vec<SlotUse>,
        bottom: Vec<SlotUse>,
    ) -> Self {
        TangleDiagram { components, crossings, top, bottom }
    }

    /// Assembles and validates.
    pub fn new(
        components: Vec<Component>,
        crossings: BTreeMap<CrossingId, CrossingKind>,
        top: Vec<SlotUse>,
        bottom: Vec<SlotUse>,
    ) -> Result<Self, DiagramError> {
        let d = Self::from_parts(components, crossings, top, bottom);
        d.validate().map_err(DiagramError::Invalid)?;
        Ok(d)
    }

    /// The empty (0,0) tangle.
    pub fn empty() -> Self {
        Self::from_parts(Vec::new(), BTreeMap::new(), Vec::new(), Vec::new())
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Component {
        &self.components[i]
    }

    pub fn crossings(&self) -> &BTreeMap<CrossingId, CrossingKind> {
        &self.crossings
    }

    pub fn top(&self) -> &[SlotUse] {
        &self.top
    }

    pub fn bottom(&self) -> &[SlotUse] {
        &self.bottom
    }

    /// `(m, n)`: number of top and bottom slots.
    pub fn arity(&self) -> (usize, usize) {
        (self.top.len(), self.bottom.len())
    }

    pub fn kind(&self, id: CrossingId) -> Option<CrossingKind> {
        self.crossings.get(&id).copied()
    }

    pub fn sign(&self, id: CrossingId) -> Option<Sign> {
        match self.crossings.get(&id) {
            Some(CrossingKind::Classical(s)) => Some(*s),
            _ => None,
        }
    }

    pub fn classical_ids(&self) -> impl Iterator<Item = CrossingId> + '_ {
        self.crossings.iter().filter(|(_, k)| matches!(k, CrossingKind::Classical(_))).map(|(id, _)| *id)
    }

    pub fn singular_ids(&self) -> impl Iterator<Item = CrossingId> + '_ {
        self.crossings.iter().filter(|(_, k)| **k == CrossingKind::Singular).map(|(id, _)| *id)
    }

    pub fn has_singular(&self) -> bool {
        self.singular_ids().next().is_some()
    }

    pub fn next_crossing_id(&self) -> CrossingId {
        self.crossings.keys().next_back().map_or(1, |m| m + 1)
    }

    pub fn passage(&self, loc: PassageLoc) -> Passage {
        self.components[loc.component].events[loc.offset]
    }

    /// Every passage with its location, in traversal order.
    pub fn passages(&self) -> impl Iterator<Item = (PassageLoc, Passage)> + '_ {
        self.components.iter().enumerate().flat_map(|(c, comp)| {
            comp.events.iter().enumerate().map(move |(o, p)| (PassageLoc { component: c, offset: o }, *p))
        })
    }

    /// Both passages of every crossing. Crossings met fewer than twice are
    /// left out.
    pub fn locate_all(&self) -> BTreeMap<CrossingId, CrossingPassages> {
        let mut seen: BTreeMap<CrossingId, Vec<(PassageLoc, Role)>> = BTreeMap::new();
        for (loc, p) in self.passages() {
            seen.entry(p.crossing).or_default().push((loc, p.role));
        }
        seen.into_iter()
            .filter(|(_, v)| v.len() == 2)
            .map(|(id, v)| (id, CrossingPassages { first: v[0], second: v[1] }))
            .collect()
    }

    pub fn locate(&self, id: CrossingId) -> Option<CrossingPassages> {
        let mut found = self.passages().filter(|(_, p)| p.crossing == id);
        let (l1, p1) = found.next()?;
        let (l2, p2) = found.next()?;
        Some(CrossingPassages { first: (l1, p1.role), second: (l2, p2.role) })
    }

    /// Slot holding the given end of a component, if any.
    pub fn slot_of(&self, component: usize, end: End) -> Option<Slot> {
        let want = SlotUse { component, end };
        if let Some(k) = self.top.iter().position(|u| *u == want) {
            return Some(Slot::top(k + 1));
        }
        self.bottom.iter().position(|u| *u == want).map(|k| Slot::bottom(k + 1))
    }

    /// Every violated structural invariant.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        let mut roles: BTreeMap<CrossingId, BTreeMap<Role, usize>> = BTreeMap::new();
        for (loc, p) in self.passages() {
            match self.crossings.get(&p.crossing) {
                None => out.push(Violation::UnknownCrossing {
                    component: loc.component + 1,
                    offset: loc.offset,
                    crossing: p.crossing,
                }),
                Some(kind) => {
                    let fits = match kind {
                        CrossingKind::Classical(_) => p.role.is_classical(),
                        CrossingKind::Singular => !p.role.is_classical(),
                    };
                    if !fits {
                        out.push(Violation::RoleKindMismatch { crossing: p.crossing, role: p.role });
                    }
                    *roles.entry(p.crossing).or_default().entry(p.role).or_default() += 1;
                }
            }
        }
        for (id, kind) in &self.crossings {
            let expected = match kind {
                CrossingKind::Classical(_) => [Role::Over, Role::Under],
                CrossingKind::Singular => [Role::SingPrimary, Role::SingSecondary],
            };
            let counts = roles.get(id);
            for role in expected {
                match counts.and_then(|c| c.get(&role)).copied().unwrap_or(0) {
                    0 => out.push(Violation::MissingRole { crossing: *id, role }),
                    1 => {}
                    count => out.push(Violation::DuplicateRole { crossing: *id, role, count }),
                }
            }
        }
        let mut ends = vec![(0usize, 0usize); self.components.len()];
        let slots = self
            .top
            .iter()
            .enumerate()
            .map(|(k, u)| (Slot::top(k + 1), u))
            .chain(self.bottom.iter().enumerate().map(|(k, u)| (Slot::bottom(k + 1), u)));
        for (slot, u) in slots {
            match ends.get_mut(u.component) {
                None => out.push(Violation::BadSlot { slot, component: u.component + 1 }),
                Some(e) => match u.end {
                    End::Start => e.0 += 1,
                    End::Finish => e.1 += 1,
                },
            }
        }
        for (i, comp) in self.components.iter().enumerate() {
            let (starts, finishes) = ends[i];
            let ok = match comp.kind {
                ComponentKind::Closed => starts == 0 && finishes == 0,
                ComponentKind::Long => starts == 1 && finishes == 1,
            };
            if !ok {
                out.push(Violation::EndpointArity { component: i + 1, starts, finishes });
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Renumbers crossings 1, 2, ... in order of first appearance.
    pub fn with_canonical_ids(&self) -> TangleDiagram {
        let mut map = BTreeMap::new();
        for (_, p) in self.passages() {
            let next = map.len() as CrossingId + 1;
            map.entry(p.crossing).or_insert(next);
        }
        self.map_crossing_ids(|id| map[&id])
    }

    pub(crate) fn map_crossing_ids(&self, mut f: impl FnMut(CrossingId) -> CrossingId) -> TangleDiagram {
        let components = self
            .components
            .iter()
            .map(|c| Component {
                kind: c.kind,
                events: c.events.iter().map(|p| Passage::new(f(p.crossing), p.role)).collect(),
            })
            .collect();
        let crossings = self.crossings.iter().map(|(id, k)| (f(*id), *k)).collect();
        TangleDiagram { components, crossings, top: self.top.clone(), bottom: self.bottom.clone() }
    }

    /// Reorders components: new component `j` is old component `order[j]`.
    pub fn permute_components(&self, order: &[usize]) -> TangleDiagram {
        assert_eq!(order.len(), self.components.len());
        let mut inverse = vec![usize::MAX; order.len()];
        for (new, old) in order.iter().enumerate() {
            inverse[*old] = new;
        }
        let remap = |u: &SlotUse| SlotUse { component: inverse[u.component], end: u.end };
        TangleDiagram {
            components: order.iter().map(|o| self.components[*o].clone()).collect(),
            crossings: self.crossings.clone(),
            top: self.top.iter().map(remap).collect(),
            bottom: self.bottom.iter().map(remap).collect(),
        }
    }

    /// Joins each long component's two ends into a closed loop whose
    /// basepoint is the former start; the result is a (0,0) tangle.
    pub fn close_long_components(&self) -> TangleDiagram {
        TangleDiagram {
            components: self.components.iter().map(|c| Component::closed(c.events.clone())).collect(),
            crossings: self.crossings.clone(),
            top: Vec::new(),
            bottom: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kink() -> TangleDiagram {
        TangleDiagram::from_parts(
            vec![Component::closed(vec![Passage::new(1, Role::Over), Passage::new(1, Role::Under)])],
            BTreeMap::from([(1, CrossingKind::Classical(Sign::Pos))]),
            vec![],
            vec![],
        )
    }

    #[test]
    fn kink_is_valid() {
        assert_eq!(kink().validate(), Ok(()));
        assert_eq!(kink().arity(), (0, 0));
    }

    #[test]
    fn duplicate_over_is_reported() {
        let d = TangleDiagram::from_parts(
            vec![Component::closed(vec![Passage::new(1, Role::Over), Passage::new(1, Role::Over)])],
            BTreeMap::from([(1, CrossingKind::Classical(Sign::Pos))]),
            vec![],
            vec![],
        );
        let v = d.validate().unwrap_err();
        assert!(v.contains(&Violation::DuplicateRole { crossing: 1, role: Role::Over, count: 2 }));
        assert!(v.contains(&Violation::MissingRole { crossing: 1, role: Role::Under }));
        assert!(v[0].to_string().contains("duplicate role") || v[1].to_string().contains("duplicate role"));
    }

    #[test]
    fn long_component_needs_two_slots() {
        let d = TangleDiagram::from_parts(
            vec![Component::long(vec![])],
            BTreeMap::new(),
            vec![SlotUse { component: 0, end: End::Start }],
            vec![],
        );
        let v = d.validate().unwrap_err();
        assert_eq!(v, vec![Violation::EndpointArity { component: 1, starts: 1, finishes: 0 }]);
        assert!(v[0].to_string().starts_with("endpoint arity"));
    }

    #[test]
    fn singular_roles_checked() {
        let d = TangleDiagram::from_parts(
            vec![Component::closed(vec![Passage::new(1, Role::Over), Passage::new(1, Role::SingSecondary)])],
            BTreeMap::from([(1, CrossingKind::Singular)]),
            vec![],
            vec![],
        );
        let v = d.validate().unwrap_err();
        assert!(v.contains(&Violation::RoleKindMismatch { crossing: 1, role: Role::Over }));
        assert!(v.contains(&Violation::MissingRole { crossing: 1, role: Role::SingPrimary }));
    }

    #[test]
    fn unknown_crossing_and_bad_slot() {
        let d = TangleDiagram::from_parts(
            vec![Component::closed(vec![Passage::new(7, Role::Over)])],
            BTreeMap::new(),
            vec![SlotUse { component: 3, end: End::Start }],
            vec![],
        );
        let v = d.validate().unwrap_err();
        assert!(v.contains(&Violation::UnknownCrossing { component: 1, offset: 0, crossing: 7 }));
        assert!(v.contains(&Violation::BadSlot { slot: Slot::top(1), component: 4 }));
    }

    #[test]
    fn canonical_ids_follow_traversal() {
        let d = kink().map_crossing_ids(|_| 9);
        assert_eq!(d.next_crossing_id(), 10);
        assert_eq!(d.with_canonical_ids(), kink());
    }

    #[test]
    fn locate_orders_passages() {
        let d = kink();
        let locs = d.locate(1).unwrap();
        assert_eq!(locs.with_role(Role::Over), Some(PassageLoc { component: 0, offset: 0 }));
        assert_eq!(locs.with_role(Role::Under), Some(PassageLoc { component: 0, offset: 1 }));
        assert_eq!(d.locate_all().len(), 1);
    }
}
