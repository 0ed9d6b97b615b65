//! Building diagrams from generator words: rows of atoms, read top to
//! bottom, each row a tensor product and consecutive rows stacked.

use std::collections::BTreeMap;

use super::{
    Component, ComponentKind, CrossingId, CrossingKind, DiagramError, End, Passage, Role, Sign, SlotUse, TangleDiagram,
};

/// Direction of a strand at a boundary point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    Up,
    Down,
}

impl Dir {
    fn value(self) -> i64 {
        match self {
            Dir::Up => 1,
            Dir::Down => -1,
        }
    }

    pub fn reverse(self) -> Dir {
        match self {
            Dir::Up => Dir::Down,
            Dir::Down => Dir::Up,
        }
    }
}

/// One generator. Crossing directions are those at the atom's two bottom
/// ends; the strand entering bottom-left leaves top-right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Identity(Dir),
    /// Two bottom ends; `left` is the direction at the left one.
    Cup {
        left: Dir,
    },
    /// Two top ends; `left` is the direction at the left one.
    Cap {
        left: Dir,
    },
    Crossing {
        sign: Sign,
        left: Dir,
        right: Dir,
    },
    Virtual {
        left: Dir,
        right: Dir,
    },
}

impl Atom {
    pub fn top_dirs(&self) -> Vec<Dir> {
        match *self {
            Atom::Identity(d) => vec![d],
            Atom::Cup { .. } => vec![],
            Atom::Cap { left } => vec![left, left.reverse()],
            Atom::Crossing { left, right, .. } | Atom::Virtual { left, right } => vec![right, left],
        }
    }

    pub fn bottom_dirs(&self) -> Vec<Dir> {
        match *self {
            Atom::Identity(d) => vec![d],
            Atom::Cup { left } => vec![left, left.reverse()],
            Atom::Cap { .. } => vec![],
            Atom::Crossing { left, right, .. } | Atom::Virtual { left, right } => vec![left, right],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorWord {
    pub rows: Vec<Vec<Atom>>,
}

fn row_top(row: &[Atom]) -> Vec<Dir> {
    row.iter().flat_map(Atom::top_dirs).collect()
}

fn row_bottom(row: &[Atom]) -> Vec<Dir> {
    row.iter().flat_map(Atom::bottom_dirs).collect()
}

impl GeneratorWord {
    pub fn new(rows: Vec<Vec<Atom>>) -> Self {
        GeneratorWord { rows }
    }

    /// A single row of identity strands.
    pub fn identity(dirs: &[Dir]) -> Self {
        GeneratorWord { rows: vec![dirs.iter().map(|d| Atom::Identity(*d)).collect()] }
    }

    pub fn top_dirs(&self) -> Vec<Dir> {
        self.rows.first().map(|r| row_top(r)).unwrap_or_default()
    }

    pub fn bottom_dirs(&self) -> Vec<Dir> {
        self.rows.last().map(|r| row_bottom(r)).unwrap_or_default()
    }

    /// Side by side; the shorter word is padded with identity rows.
    pub fn tensor(&self, other: &GeneratorWord) -> GeneratorWord {
        let height = self.rows.len().max(other.rows.len());
        let pad = |w: &GeneratorWord| {
            let mut rows = w.rows.clone();
            let fill: Vec<Atom> = w.bottom_dirs().into_iter().map(Atom::Identity).collect();
            rows.resize(height, fill);
            rows
        };
        let (a, b) = (pad(self), pad(other));
        GeneratorWord {
            rows: a
                .into_iter()
                .zip(b)
                .map(|(mut l, r)| {
                    l.extend(r);
                    l
                })
                .collect(),
        }
    }

    /// `self` above `other`.
    pub fn stack(&self, other: &GeneratorWord) -> GeneratorWord {
        GeneratorWord { rows: self.rows.iter().chain(&other.rows).cloned().collect() }
    }

    fn check(&self) -> Result<(), DiagramError> {
        for (r, pair) in self.rows.windows(2).enumerate() {
            let above = row_bottom(&pair[0]);
            let below = row_top(&pair[1]);
            if above.len() != below.len() {
                return Err(DiagramError::ArityMismatch { row: r + 2, expected: above.len(), found: below.len() });
            }
            if let Some(p) = above.iter().zip(&below).position(|(a, b)| a != b) {
                return Err(DiagramError::DirectionMismatch { row: r + 2, position: p + 1 });
            }
        }
        Ok(())
    }
}

/// A point on boundary line `level` (0 = top of the word) at `pos`.
type Point = (usize, usize);

/// A strand piece inside one atom, oriented tail to head.
struct Piece {
    tail: Point,
    head: Point,
    passage: Option<Passage>,
}

fn oriented(a: Point, b: Point, a_is_tail: bool, passage: Option<Passage>) -> Piece {
    if a_is_tail {
        Piece { tail: a, head: b, passage }
    } else {
        Piece { tail: b, head: a, passage }
    }
}

/// Traces strands through the rows. Long components are numbered by their
/// entry point (top boundary first, then bottom, left to right), closed
/// ones after them; crossings get ids row by row from 1.
pub fn from_generator_word(w: &GeneratorWord) -> Result<TangleDiagram, DiagramError> {
    w.check()?;
    let mut pieces = Vec::new();
    let mut crossings = BTreeMap::new();
    let mut next_id: CrossingId = 1;
    for (r, row) in w.rows.iter().enumerate() {
        let (mut t, mut b) = (0usize, 0usize);
        for atom in row {
            let (top, bot) = (r, r + 1);
            match *atom {
                Atom::Identity(d) => pieces.push(oriented((bot, b), (top, t), d == Dir::Up, None)),
                Atom::Cup { left } => pieces.push(oriented((bot, b), (bot, b + 1), left == Dir::Up, None)),
                Atom::Cap { left } => pieces.push(oriented((top, t + 1), (top, t), left == Dir::Up, None)),
                Atom::Crossing { sign, left, right } => {
                    let id = next_id;
                    next_id += 1;
                    crossings.insert(id, CrossingKind::Classical(sign));
                    let a_over = sign.value() * left.value() * right.value() == 1;
                    let (ra, rb) = if a_over { (Role::Over, Role::Under) } else { (Role::Under, Role::Over) };
                    pieces.push(oriented((bot, b), (top, t + 1), left == Dir::Up, Some(Passage::new(id, ra))));
                    pieces.push(oriented((bot, b + 1), (top, t), right == Dir::Up, Some(Passage::new(id, rb))));
                }
                Atom::Virtual { left, right } => {
                    pieces.push(oriented((bot, b), (top, t + 1), left == Dir::Up, None));
                    pieces.push(oriented((bot, b + 1), (top, t), right == Dir::Up, None));
                }
            }
            t += atom.top_dirs().len();
            b += atom.bottom_dirs().len();
        }
    }

    let outgoing: BTreeMap<Point, usize> = pieces.iter().enumerate().map(|(i, p)| (p.tail, i)).collect();
    let last = w.rows.len();
    let top_dirs = w.top_dirs();
    let bottom_dirs = w.bottom_dirs();
    let entries = top_dirs
        .iter()
        .enumerate()
        .filter(|(_, d)| **d == Dir::Down)
        .map(|(k, _)| (0, k))
        .chain(bottom_dirs.iter().enumerate().filter(|(_, d)| **d == Dir::Up).map(|(k, _)| (last, k)));

    let mut visited = vec![false; pieces.len()];
    let mut components = Vec::new();
    let mut ends: BTreeMap<Point, SlotUse> = BTreeMap::new();
    for entry in entries {
        let comp = components.len();
        ends.insert(entry, SlotUse { component: comp, end: End::Start });
        let mut events = Vec::new();
        let mut at = entry;
        while let Some(&i) = outgoing.get(&at) {
            visited[i] = true;
            events.extend(pieces[i].passage);
            at = pieces[i].head;
        }
        ends.insert(at, SlotUse { component: comp, end: End::Finish });
        components.push(Component { kind: ComponentKind::Long, events });
    }
    for first in 0..pieces.len() {
        if visited[first] {
            continue;
        }
        let mut events = Vec::new();
        let mut i = first;
        while !visited[i] {
            visited[i] = true;
            events.extend(pieces[i].passage);
            i = outgoing[&pieces[i].head];
        }
        components.push(Component::closed(events));
    }

    let top = (0..top_dirs.len()).map(|k| ends[&(0, k)]).collect();
    let bottom = (0..bottom_dirs.len()).map(|k| ends[&(last, k)]).collect();
    TangleDiagram::new(components, crossings, top, bottom)
}
