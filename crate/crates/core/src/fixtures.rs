//! Worked example diagrams shipped with the crate.

use crate::diagram::{parse, TangleDiagram};

/// Two-component closed diagram; the closure of `EX3` stacked on `EX2`.
pub const EX1: &str = include_str!("../fixtures/ex1.tangle");
/// (4,2) tangle.
pub const EX2: &str = include_str!("../fixtures/ex2.tangle");
/// (2,4) tangle.
pub const EX3: &str = include_str!("../fixtures/ex3.tangle");
/// Positive kink on an unknot.
pub const KINK: &str = include_str!("../fixtures/kink.tangle");
/// One double point between two long strands.
pub const SING: &str = include_str!("../fixtures/sing.tangle");
/// Two double points and one classical crossing.
pub const SING2: &str = include_str!("../fixtures/sing2.tangle");

/// Every fixture with its name.
pub const ALL: [(&str, &str); 6] =
    [("ex1", EX1), ("ex2", EX2), ("ex3", EX3), ("kink", KINK), ("sing", SING), ("sing2", SING2)];

fn load(text: &str) -> TangleDiagram {
    parse(text).expect("shipped fixtures parse")
}

pub fn ex1() -> TangleDiagram {
    load(EX1)
}

pub fn ex2() -> TangleDiagram {
    load(EX2)
}

pub fn ex3() -> TangleDiagram {
    load(EX3)
}

pub fn kink() -> TangleDiagram {
    load(KINK)
}

pub fn sing() -> TangleDiagram {
    load(SING)
}

pub fn sing2() -> TangleDiagram {
    load(SING2)
}

/// Looks a fixture up by name.
pub fn by_name(name: &str) -> Option<TangleDiagram> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| load(t))
}
