//! Reidemeister moves on Gauss codes and seeded random walks built from
//! them. Virtual and mixed moves do not change a Gauss code, so only R1,
//! R2 and R3 appear here.
//!
//! Deletions and R3 need the passages involved to be adjacent inside one
//! event list; a pair straddling a closed component's basepoint does not
//! count, since removing it would move the basepoint.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diagram::{Component, CrossingId, CrossingKind, Passage, Role, Sign, TangleDiagram};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("move not applicable: {0}")]
    NotApplicable(String),
    #[error("bad move syntax `{0}`")]
    Syntax(String),
}

fn not_applicable(msg: impl Into<String>) -> MoveError {
    MoveError::NotApplicable(msg.into())
}

/// A gap between events: before event `offset` of `component` (0-based;
/// `offset == len` is after the last event).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InsertAt {
    pub component: usize,
    pub offset: usize,
}

impl fmt::Display for InsertAt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.component + 1, self.offset)
    }
}

impl FromStr for InsertAt {
    type Err = MoveError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MoveError::Syntax(s.to_string());
        let (c, o) = s.split_once(':').ok_or_else(bad)?;
        let component: usize = c.parse().map_err(|_| bad())?;
        let offset = o.parse().map_err(|_| bad())?;
        if component == 0 {
            return Err(bad());
        }
        Ok(InsertAt { component: component - 1, offset })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum R1Order {
    OverFirst,
    UnderFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    R1Insert,
    R1Delete,
    R2Insert,
    R2Delete,
    R3,
}

impl MoveKind {
    pub const ALL: [MoveKind; 5] =
        [MoveKind::R1Insert, MoveKind::R1Delete, MoveKind::R2Insert, MoveKind::R2Delete, MoveKind::R3];

    pub fn tag(self) -> &'static str {
        match self {
            MoveKind::R1Insert => "R1+",
            MoveKind::R1Delete => "R1-",
            MoveKind::R2Insert => "R2+",
            MoveKind::R2Delete => "R2-",
            MoveKind::R3 => "R3",
        }
    }
}

/// An applicable rewrite. Insertions are located by gaps, deletions and
/// R3 by the crossing ids involved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveSite {
    R1Insert {
        at: InsertAt,
        sign: Sign,
        order: R1Order,
    },
    R1Delete {
        id: CrossingId,
    },
    R2Insert {
        a: InsertAt,
        b: InsertAt,
        sign: Sign,
        same_direction: bool,
    },
    /// `x` is met first along the over strand.
    R2Delete {
        x: CrossingId,
        y: CrossingId,
    },
    /// `x` and `y` share the top strand, `x` and `z` the middle one.
    R3 {
        x: CrossingId,
        y: CrossingId,
        z: CrossingId,
    },
}

impl MoveSite {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveSite::R1Insert { .. } => MoveKind::R1Insert,
            MoveSite::R1Delete { .. } => MoveKind::R1Delete,
            MoveSite::R2Insert { .. } => MoveKind::R2Insert,
            MoveSite::R2Delete { .. } => MoveKind::R2Delete,
            MoveSite::R3 { .. } => MoveKind::R3,
        }
    }
}

fn sign_char(s: Sign) -> char {
    match s {
        Sign::Pos => '+',
        Sign::Neg => '-',
    }
}

impl fmt::Display for MoveSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MoveSite::R1Insert { at, sign, order } => {
                let order = match order {
                    R1Order::OverFirst => "over-first",
                    R1Order::UnderFirst => "under-first",
                };
                write!(f, "R1+ {at} {} {order}", sign_char(sign))
            }
            MoveSite::R1Delete { id } => write!(f, "R1- {id}"),
            MoveSite::R2Insert { a, b, sign, same_direction } => {
                let dir = if same_direction { "same" } else { "opposite" };
                write!(f, "R2+ {a} {b} {} {dir}", sign_char(sign))
            }
            MoveSite::R2Delete { x, y } => write!(f, "R2- {x} {y}"),
            MoveSite::R3 { x, y, z } => write!(f, "R3 {x} {y} {z}"),
        }
    }
}

impl FromStr for MoveSite {
    type Err = MoveError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MoveError::Syntax(s.to_string());
        let words: Vec<&str> = s.split_whitespace().collect();
        let id = |w: &str| w.parse::<CrossingId>().map_err(|_| bad());
        let sign = |w: &str| match w {
            "+" => Ok(Sign::Pos),
            "-" => Ok(Sign::Neg),
            _ => Err(bad()),
        };
        match words.as_slice() {
            ["R1+", at, sg, order] => Ok(MoveSite::R1Insert {
                at: at.parse()?,
                sign: sign(sg)?,
                order: match *order {
                    "over-first" => R1Order::OverFirst,
                    "under-first" => R1Order::UnderFirst,
                    _ => return Err(bad()),
                },
            }),
            ["R1-", x] => Ok(MoveSite::R1Delete { id: id(x)? }),
            ["R2+", a, b, sg, dir] => Ok(MoveSite::R2Insert {
                a: a.parse()?,
                b: b.parse()?,
                sign: sign(sg)?,
                same_direction: match *dir {
                    "same" => true,
                    "opposite" => false,
                    _ => return Err(bad()),
                },
            }),
            ["R2-", x, y] => Ok(MoveSite::R2Delete { x: id(x)?, y: id(y)? }),
            ["R3", x, y, z] => Ok(MoveSite::R3 { x: id(x)?, y: id(y)?, z: id(z)? }),
            _ => Err(bad()),
        }
    }
}

/// Mutable working copy of a diagram's parts.
struct Parts {
    components: Vec<Component>,
    crossings: std::collections::BTreeMap<CrossingId, CrossingKind>,
    top: Vec<crate::diagram::SlotUse>,
    bottom: Vec<crate::diagram::SlotUse>,
}

impl Parts {
    fn of(d: &TangleDiagram) -> Parts {
        Parts {
            components: d.components().to_vec(),
            crossings: d.crossings().clone(),
            top: d.top().to_vec(),
            bottom: d.bottom().to_vec(),
        }
    }

    fn build(self) -> TangleDiagram {
        TangleDiagram::from_parts(self.components, self.crossings, self.top, self.bottom)
    }

    fn check_gap(&self, at: InsertAt) -> Result<(), MoveError> {
        match self.components.get(at.component) {
            Some(c) if at.offset <= c.events.len() => Ok(()),
            _ => Err(not_applicable(format!("no gap {at}"))),
        }
    }

    /// Inserts several runs; offsets refer to the event lists before any
    /// of them is inserted.
    fn insert_runs(&mut self, mut runs: Vec<(InsertAt, Vec<Passage>)>) {
        // later gaps first so that earlier offsets stay valid; on ties the
        // run listed first ends up first
        runs.reverse();
        runs.sort_by_key(|r| std::cmp::Reverse(r.0));
        for (at, run) in runs {
            let events = &mut self.components[at.component].events;
            events.splice(at.offset..at.offset, run);
        }
    }

    fn remove_crossings(&mut self, ids: &[CrossingId]) {
        for c in &mut self.components {
            c.events.retain(|p| !ids.contains(&p.crossing));
        }
        for id in ids {
            self.crossings.remove(id);
        }
    }
}

pub fn r1_insert(d: &TangleDiagram, at: InsertAt, sign: Sign, order: R1Order) -> Result<TangleDiagram, MoveError> {
    let mut parts = Parts::of(d);
    parts.check_gap(at)?;
    let id = d.next_crossing_id();
    parts.crossings.insert(id, CrossingKind::Classical(sign));
    let (o, u) = (Passage::new(id, Role::Over), Passage::new(id, Role::Under));
    let run = match order {
        R1Order::OverFirst => vec![o, u],
        R1Order::UnderFirst => vec![u, o],
    };
    parts.insert_runs(vec![(at, run)]);
    Ok(parts.build())
}

/// Whether the two passages of `id` sit next to each other on one
/// component.
fn adjacent_pair(d: &TangleDiagram, a: (CrossingId, Role), b: (CrossingId, Role)) -> Option<(usize, usize, bool)> {
    let find =
        |(id, role): (CrossingId, Role)| d.passages().find(|(_, p)| p.crossing == id && p.role == role).map(|(l, _)| l);
    let (la, lb) = (find(a)?, find(b)?);
    if la.component != lb.component {
        return None;
    }
    if lb.offset == la.offset + 1 {
        Some((la.component, la.offset, true))
    } else if la.offset == lb.offset + 1 {
        Some((la.component, lb.offset, false))
    } else {
        None
    }
}

pub fn r1_delete(d: &TangleDiagram, id: CrossingId) -> Result<TangleDiagram, MoveError> {
    if !matches!(d.kind(id), Some(CrossingKind::Classical(_))) {
        return Err(not_applicable(format!("crossing {id} is not classical")));
    }
    adjacent_pair(d, (id, Role::Over), (id, Role::Under))
        .ok_or_else(|| not_applicable(format!("crossing {id} is not a kink")))?;
    let mut parts = Parts::of(d);
    parts.remove_crossings(&[id]);
    Ok(parts.build())
}

/// Two new crossings `x` (sign `sign`) and `y` (opposite sign); strand `a`
/// passes over both, strand `b` under both, in the same order when the
/// strands run the same way.
pub fn r2_insert(
    d: &TangleDiagram,
    a: InsertAt,
    b: InsertAt,
    sign: Sign,
    same_direction: bool,
) -> Result<TangleDiagram, MoveError> {
    let mut parts = Parts::of(d);
    parts.check_gap(a)?;
    parts.check_gap(b)?;
    let x = d.next_crossing_id();
    let y = x + 1;
    parts.crossings.insert(x, CrossingKind::Classical(sign));
    parts.crossings.insert(y, CrossingKind::Classical(sign.flip()));
    let over = vec![Passage::new(x, Role::Over), Passage::new(y, Role::Over)];
    let under = if same_direction {
        vec![Passage::new(x, Role::Under), Passage::new(y, Role::Under)]
    } else {
        vec![Passage::new(y, Role::Under), Passage::new(x, Role::Under)]
    };
    parts.insert_runs(vec![(a, over), (b, under)]);
    Ok(parts.build())
}

pub fn r2_delete(d: &TangleDiagram, x: CrossingId, y: CrossingId) -> Result<TangleDiagram, MoveError> {
    match (d.sign(x), d.sign(y)) {
        (Some(sx), Some(sy)) if x != y && sx != sy => {}
        _ => return Err(not_applicable(format!("crossings {x}, {y} are not a classical pair of opposite signs"))),
    }
    adjacent_pair(d, (x, Role::Over), (y, Role::Over))
        .and(adjacent_pair(d, (x, Role::Under), (y, Role::Under)))
        .ok_or_else(|| not_applicable(format!("crossings {x}, {y} do not form a bigon")))?;
    let mut parts = Parts::of(d);
    parts.remove_crossings(&[x, y]);
    Ok(parts.build())
}

fn flag(forward: bool) -> i64 {
    if forward {
        1
    } else {
        -1
    }
}

/// The three adjacent pairs of an R3 site with their order flags, or
/// `None` if `(x, y, z)` is not a site. Besides adjacency the signs must
/// fit the orders: `s_x s_y = o_mid o_bot` and `s_x s_z = o_top o_bot`.
fn r3_pairs(d: &TangleDiagram, x: CrossingId, y: CrossingId, z: CrossingId) -> Option<[(usize, usize); 3]> {
    if x == y || y == z || x == z {
        return None;
    }
    let (sx, sy, sz) = (d.sign(x)?.value(), d.sign(y)?.value(), d.sign(z)?.value());
    let (tc, to, t_fwd) = adjacent_pair(d, (x, Role::Over), (y, Role::Over))?;
    let (mc, mo, m_fwd) = adjacent_pair(d, (x, Role::Under), (z, Role::Over))?;
    let (bc, bo, b_fwd) = adjacent_pair(d, (y, Role::Under), (z, Role::Under))?;
    let (ot, om, ob) = (flag(t_fwd), flag(m_fwd), flag(b_fwd));
    (sx * sy == om * ob && sx * sz == ot * ob).then_some([(tc, to), (mc, mo), (bc, bo)])
}

pub fn is_r3_site(d: &TangleDiagram, x: CrossingId, y: CrossingId, z: CrossingId) -> bool {
    r3_pairs(d, x, y, z).is_some()
}

/// Every R3 site, each listed once.
pub fn find_r3_sites(d: &TangleDiagram) -> Vec<MoveSite> {
    let mut out = Vec::new();
    let neighbours = |id: CrossingId, role: Role, want: Role| -> Vec<CrossingId> {
        let Some(loc) = d.passages().find(|(_, p)| p.crossing == id && p.role == role).map(|(l, _)| l) else {
            return Vec::new();
        };
        let events = &d.component(loc.component).events;
        [loc.offset.checked_sub(1), Some(loc.offset + 1)]
            .into_iter()
            .flatten()
            .filter_map(|o| events.get(o))
            .filter(|p| p.role == want && p.crossing != id)
            .map(|p| p.crossing)
            .collect()
    };
    for x in d.classical_ids() {
        for y in neighbours(x, Role::Over, Role::Over) {
            for z in neighbours(x, Role::Under, Role::Over) {
                if is_r3_site(d, x, y, z) {
                    out.push(MoveSite::R3 { x, y, z });
                }
            }
        }
    }
    out
}

/// Swaps the passages within each of the site's three pairs.
pub fn r3_apply(d: &TangleDiagram, x: CrossingId, y: CrossingId, z: CrossingId) -> Result<TangleDiagram, MoveError> {
    let pairs =
        r3_pairs(d, x, y, z).ok_or_else(|| not_applicable(format!("crossings {x}, {y}, {z} are not an R3 site")))?;
    let mut parts = Parts::of(d);
    for (c, o) in pairs {
        parts.components[c].events.swap(o, o + 1);
    }
    Ok(parts.build())
}

pub fn r1_delete_sites(d: &TangleDiagram) -> Vec<MoveSite> {
    d.classical_ids()
        .filter(|id| adjacent_pair(d, (*id, Role::Over), (*id, Role::Under)).is_some())
        .map(|id| MoveSite::R1Delete { id })
        .collect()
}

pub fn r2_delete_sites(d: &TangleDiagram) -> Vec<MoveSite> {
    let mut out = Vec::new();
    for comp in d.components() {
        for w in comp.events.windows(2) {
            if w[0].role == Role::Over && w[1].role == Role::Over {
                let (x, y) = (w[0].crossing, w[1].crossing);
                if d.sign(x).is_some()
                    && d.sign(x) != d.sign(y)
                    && adjacent_pair(d, (x, Role::Under), (y, Role::Under)).is_some()
                {
                    out.push(MoveSite::R2Delete { x, y });
                }
            }
        }
    }
    out
}

/// All sites of the deletion kinds and R3.
pub fn reducing_sites(d: &TangleDiagram) -> Vec<MoveSite> {
    let mut out = r1_delete_sites(d);
    out.extend(r2_delete_sites(d));
    out.extend(find_r3_sites(d));
    out
}

pub fn apply(d: &TangleDiagram, site: &MoveSite) -> Result<TangleDiagram, MoveError> {
    match *site {
        MoveSite::R1Insert { at, sign, order } => r1_insert(d, at, sign, order),
        MoveSite::R1Delete { id } => r1_delete(d, id),
        MoveSite::R2Insert { a, b, sign, same_direction } => r2_insert(d, a, b, sign, same_direction),
        MoveSite::R2Delete { x, y } => r2_delete(d, x, y),
        MoveSite::R3 { x, y, z } => r3_apply(d, x, y, z),
    }
}

/// Applies a logged sequence of moves.
pub fn replay(d: &TangleDiagram, log: &[MoveSite]) -> Result<TangleDiagram, MoveError> {
    log.iter().try_fold(d.clone(), |acc, site| apply(&acc, site))
}

fn random_gap<R: Rng + ?Sized>(rng: &mut R, d: &TangleDiagram) -> Option<InsertAt> {
    let total: usize = d.components().iter().map(|c| c.events.len() + 1).sum();
    if total == 0 {
        return None;
    }
    let mut pick = rng.gen_range(0..total);
    for (component, c) in d.components().iter().enumerate() {
        if pick <= c.events.len() {
            return Some(InsertAt { component, offset: pick });
        }
        pick -= c.events.len() + 1;
    }
    unreachable!()
}

fn random_sign<R: Rng + ?Sized>(rng: &mut R) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

/// A uniformly chosen applicable kind, then a uniform site of that kind.
pub fn random_move<R: Rng + ?Sized>(rng: &mut R, d: &TangleDiagram) -> Option<MoveSite> {
    let mut options: Vec<(MoveKind, Vec<MoveSite>)> = Vec::new();
    if d.components().is_empty() {
        return None;
    }
    options.push((MoveKind::R1Insert, Vec::new()));
    options.push((MoveKind::R2Insert, Vec::new()));
    for (kind, sites) in [
        (MoveKind::R1Delete, r1_delete_sites(d)),
        (MoveKind::R2Delete, r2_delete_sites(d)),
        (MoveKind::R3, find_r3_sites(d)),
    ] {
        if !sites.is_empty() {
            options.push((kind, sites));
        }
    }
    options.sort_by_key(|(k, _)| *k);
    let (kind, sites) = options.choose(rng)?;
    Some(match kind {
        MoveKind::R1Insert => MoveSite::R1Insert {
            at: random_gap(rng, d)?,
            sign: random_sign(rng),
            order: if rng.gen_bool(0.5) { R1Order::OverFirst } else { R1Order::UnderFirst },
        },
        MoveKind::R2Insert => MoveSite::R2Insert {
            a: random_gap(rng, d)?,
            b: random_gap(rng, d)?,
            sign: random_sign(rng),
            same_direction: rng.gen_bool(0.5),
        },
        _ => *sites.choose(rng)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    pub diagram: TangleDiagram,
    pub log: Vec<MoveSite>,
}

impl Walk {
    /// One move per line, replayable with [`MoveSite::from_str`].
    pub fn log_text(&self) -> String {
        self.log.iter().map(|m| format!("{m}\n")).collect()
    }
}

pub fn random_walk(d: &TangleDiagram, n_moves: usize, seed: u64) -> Walk {
    random_walk_with(&mut ChaCha8Rng::seed_from_u64(seed), d, n_moves)
}

pub fn random_walk_with<R: Rng + ?Sized>(rng: &mut R, d: &TangleDiagram, n_moves: usize) -> Walk {
    let mut diagram = d.clone();
    let mut log = Vec::with_capacity(n_moves);
    for _ in 0..n_moves {
        let Some(site) = random_move(rng, &diagram) else { break };
        diagram = apply(&diagram, &site).expect("enumerated sites apply");
        log.push(site);
    }
    Walk { diagram, log }
}

/// Adds three fresh crossings forming an R3 site at random gaps. This
/// changes the diagram; it only seeds walks with R3 opportunities.
pub fn plant_r3<R: Rng + ?Sized>(rng: &mut R, d: &TangleDiagram) -> TangleDiagram {
    let (Some(top), Some(mid), Some(bot)) = (random_gap(rng, d), random_gap(rng, d), random_gap(rng, d)) else {
        return d.clone();
    };
    let x = d.next_crossing_id();
    let (y, z) = (x + 1, x + 2);
    let (ot, om, ob) = (rng.gen_bool(0.5), rng.gen_bool(0.5), rng.gen_bool(0.5));
    let sx = random_sign(rng).value();
    let sy = sx * flag(om) * flag(ob);
    let sz = sx * flag(ot) * flag(ob);
    let mut parts = Parts::of(d);
    for (id, s) in [(x, sx), (y, sy), (z, sz)] {
        parts.crossings.insert(id, CrossingKind::Classical(Sign::from_value(s)));
    }
    let pair = |forward: bool, a: Passage, b: Passage| if forward { vec![a, b] } else { vec![b, a] };
    let o = |id| Passage::new(id, Role::Over);
    let u = |id| Passage::new(id, Role::Under);
    parts.insert_runs(vec![(top, pair(ot, o(x), o(y))), (mid, pair(om, u(x), o(z))), (bot, pair(ob, u(y), u(z)))]);
    parts.build()
}
