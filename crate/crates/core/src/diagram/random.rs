//! Seeded random diagrams. Any placement of passages is a valid virtual
//! diagram, so nothing here checks realizability.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Component, ComponentKind, CrossingKind, End, Passage, Role, Sign, SlotUse, TangleDiagram};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RandomSpec {
    pub n_closed: usize,
    pub n_long: usize,
    pub n_crossings: usize,
    /// How many of the crossings are double points.
    pub n_singular: usize,
}

pub fn random_diagram(seed: u64, n_closed: usize, n_long: usize, n_crossings: usize) -> TangleDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_diagram_with(&mut rng, RandomSpec { n_closed, n_long, n_crossings, n_singular: 0 })
}

/// Components come in random order; long ends go to random sides.
/// A spec with crossings but no components gets one closed component.
pub fn random_diagram_with<R: Rng + ?Sized>(rng: &mut R, spec: RandomSpec) -> TangleDiagram {
    let mut kinds: Vec<ComponentKind> = std::iter::repeat_n(ComponentKind::Closed, spec.n_closed)
        .chain(std::iter::repeat_n(ComponentKind::Long, spec.n_long))
        .collect();
    if kinds.is_empty() && spec.n_crossings > 0 {
        kinds.push(ComponentKind::Closed);
    }
    kinds.shuffle(rng);
    let mut top = Vec::new();
    let mut bottom = Vec::new();
    for (i, k) in kinds.iter().enumerate() {
        if *k == ComponentKind::Long {
            for end in [End::Start, End::Finish] {
                let side = if rng.gen_bool(0.5) { &mut top } else { &mut bottom };
                side.push(SlotUse { component: i, end });
            }
        }
    }
    top.shuffle(rng);
    bottom.shuffle(rng);
    let components = kinds.into_iter().map(|kind| Component { kind, events: Vec::new() }).collect();
    sprinkle(rng, components, top, bottom, spec.n_crossings, spec.n_singular)
}

/// A random diagram whose top boundary can be glued under `upper`'s bottom
/// boundary. Some top ends are joined pairwise by U-turn strands, the rest
/// run to the bottom boundary; `spec.n_long` adds extra bottom-to-bottom
/// strands.
pub fn random_lower_for<R: Rng + ?Sized>(rng: &mut R, upper: &TangleDiagram, spec: RandomSpec) -> TangleDiagram {
    let needs: Vec<End> = upper.bottom().iter().map(|u| u.end.opposite()).collect();
    let mut starts: Vec<usize> = (0..needs.len()).filter(|k| needs[*k] == End::Start).collect();
    let mut finishes: Vec<usize> = (0..needs.len()).filter(|k| needs[*k] == End::Finish).collect();
    starts.shuffle(rng);
    finishes.shuffle(rng);
    let u_turns = rng.gen_range(0..=starts.len().min(finishes.len()));

    let mut top = vec![None; needs.len()];
    let mut bottom = Vec::new();
    let mut count = 0usize;
    for _ in 0..u_turns {
        let (s, f) = (starts.pop().unwrap(), finishes.pop().unwrap());
        top[s] = Some(SlotUse { component: count, end: End::Start });
        top[f] = Some(SlotUse { component: count, end: End::Finish });
        count += 1;
    }
    for k in starts.into_iter().chain(finishes) {
        top[k] = Some(SlotUse { component: count, end: needs[k] });
        bottom.push(SlotUse { component: count, end: needs[k].opposite() });
        count += 1;
    }
    for _ in 0..spec.n_long {
        bottom.push(SlotUse { component: count, end: End::Start });
        bottom.push(SlotUse { component: count, end: End::Finish });
        count += 1;
    }
    bottom.shuffle(rng);
    let mut components: Vec<Component> = (0..count).map(|_| Component::long(Vec::new())).collect();
    components.extend((0..spec.n_closed).map(|_| Component::closed(Vec::new())));
    if components.is_empty() && spec.n_crossings > 0 {
        components.push(Component::closed(Vec::new()));
    }
    let top = top.into_iter().map(|u| u.expect("every top slot is assigned")).collect();
    sprinkle(rng, components, top, bottom, spec.n_crossings, spec.n_singular)
}

/// Inserts each crossing's two passages at uniform positions.
fn sprinkle<R: Rng + ?Sized>(
    rng: &mut R,
    mut components: Vec<Component>,
    top: Vec<SlotUse>,
    bottom: Vec<SlotUse>,
    n_crossings: usize,
    n_singular: usize,
) -> TangleDiagram {
    let mut ids: Vec<bool> = (0..n_crossings).map(|k| k < n_singular).collect();
    ids.shuffle(rng);
    let mut crossings = BTreeMap::new();
    for (k, singular) in ids.into_iter().enumerate() {
        let id = k as u32 + 1;
        let (first, second, kind) = if singular {
            let (a, b) = if rng.gen_bool(0.5) {
                (Role::SingPrimary, Role::SingSecondary)
            } else {
                (Role::SingSecondary, Role::SingPrimary)
            };
            (a, b, CrossingKind::Singular)
        } else {
            let sign = if rng.gen_bool(0.5) { Sign::Pos } else { Sign::Neg };
            let (a, b) = if rng.gen_bool(0.5) { (Role::Over, Role::Under) } else { (Role::Under, Role::Over) };
            (a, b, CrossingKind::Classical(sign))
        };
        crossings.insert(id, kind);
        for role in [first, second] {
            let total: usize = components.iter().map(|c| c.events.len() + 1).sum();
            let mut pick = rng.gen_range(0..total);
            for c in components.iter_mut() {
                if pick <= c.events.len() {
                    c.events.insert(pick, Passage::new(id, role));
                    break;
                }
                pick -= c.events.len() + 1;
            }
        }
    }
    let d = TangleDiagram::from_parts(components, crossings, top, bottom);
    debug_assert_eq!(d.validate(), Ok(()));
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_free_loop() {
        let d = random_diagram(7, 1, 0, 0);
        assert_eq!(d.components(), &[Component::closed(vec![])]);
    }

    #[test]
    fn deterministic_and_valid() {
        for seed in 0..200 {
            let d = random_diagram(seed, 2, 2, 9);
            assert_eq!(d.validate(), Ok(()));
            assert_eq!(d, random_diagram(seed, 2, 2, 9));
            assert_eq!(d.crossings().len(), 9);
            let (m, n) = d.arity();
            assert_eq!(m + n, 4);
        }
    }

    #[test]
    fn singular_count_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spec = RandomSpec { n_closed: 1, n_long: 1, n_crossings: 5, n_singular: 2 };
        let d = random_diagram_with(&mut rng, spec);
        assert_eq!(d.singular_ids().count(), 2);
        assert_eq!(d.validate(), Ok(()));
    }

    #[test]
    fn lower_matches_upper_bottom() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let upper =
                random_diagram_with(&mut rng, RandomSpec { n_closed: 0, n_long: 3, n_crossings: 4, n_singular: 0 });
            let lower = random_lower_for(
                &mut rng,
                &upper,
                RandomSpec { n_closed: 1, n_long: 1, n_crossings: 4, n_singular: 0 },
            );
            assert_eq!(lower.validate(), Ok(()));
            assert_eq!(lower.top().len(), upper.bottom().len());
            for (u, l) in upper.bottom().iter().zip(lower.top()) {
                assert_eq!(u.end, l.end.opposite());
            }
        }
    }
}
