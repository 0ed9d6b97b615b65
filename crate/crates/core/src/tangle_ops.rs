//! Tensor product and vertical composition of tangles, and the prediction
//! of a composite's polynomial from per-crossing data of its factors.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{AffineInt, Coeff, LaurentPoly, SymbolId, VarIndex};
use crate::diagram::{Component, ComponentKind, CrossingId, End, Passage, SlotUse, TangleDiagram};
use crate::invariant::{contributions, index_differences, Contribution, InvariantError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TangleOpsError {
    #[error("arity mismatch: upper tangle has {upper_bottom} bottom slots, lower tangle has {lower_top} top slots")]
    ArityMismatch { upper_bottom: usize, lower_top: usize },
    #[error("orientation mismatch at glued slot {slot}: both ends are {end:?}")]
    OrientationMismatch { slot: usize, end: End },
    #[error("inconsistent plan: {0}")]
    InconsistentPlan(String),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

fn shift_ids(d: &TangleDiagram, by: CrossingId) -> TangleDiagram {
    d.map_crossing_ids(|id| id + by)
}

fn max_id(d: &TangleDiagram) -> CrossingId {
    d.next_crossing_id() - 1
}

/// `a` to the left of `b`. Components, crossing ids and slots of `b` come
/// after those of `a`.
pub fn tensor(a: &TangleDiagram, b: &TangleDiagram) -> TangleDiagram {
    let b = shift_ids(b, max_id(a));
    let offset = a.components().len();
    let lift = |u: &SlotUse| SlotUse { component: u.component + offset, end: u.end };
    let components = a.components().iter().chain(b.components()).cloned().collect();
    let crossings = a.crossings().iter().chain(b.crossings()).map(|(k, v)| (*k, *v)).collect();
    let top = a.top().iter().copied().chain(b.top().iter().map(lift)).collect();
    let bottom = a.bottom().iter().copied().chain(b.bottom().iter().map(lift)).collect();
    TangleDiagram::from_parts(components, crossings, top, bottom)
}

/// The polynomial of `a ⊗ b` from the factors' polynomials: `b`'s
/// variables and symbols move up by `a`'s component count.
pub fn predict_tensor<C: Coeff>(pa: &LaurentPoly<C>, pb: &LaurentPoly<C>, a_components: usize) -> LaurentPoly<C> {
    let k = a_components as u32;
    pa + &pb.reindex(|v| VarIndex::new(v.index() + k), |s| SymbolId::new(s.index() + k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    Upper,
    Lower,
}

/// A component of one of the two factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FactorComponent {
    pub factor: Factor,
    pub component: usize,
}

impl fmt::Display for FactorComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.factor {
            Factor::Upper => 'U',
            Factor::Lower => 'L',
        };
        write!(f, "{tag}{}", self.component + 1)
    }
}

/// Factor components joined, in traversal order, into one composite
/// component. A closed chain is a cycle of gluings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub participants: Vec<FactorComponent>,
    pub closed: bool,
}

/// How the upper tangle's bottom slots meet the lower tangle's top slots.
/// `chains[g]` becomes composite component `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluePlan {
    pub chains: Vec<Chain>,
    upper_components: usize,
    lower_components: usize,
}

impl GluePlan {
    /// Slot-by-slot plan; bottom slot `k` of `upper` meets top slot `k` of
    /// `lower`. Chains are numbered by their first member when scanning the
    /// upper components and then the lower ones; a cycle starts at that
    /// member.
    pub fn new(upper: &TangleDiagram, lower: &TangleDiagram) -> Result<GluePlan, TangleOpsError> {
        let (ub, lt) = (upper.bottom(), lower.top());
        if ub.len() != lt.len() {
            return Err(TangleOpsError::ArityMismatch { upper_bottom: ub.len(), lower_top: lt.len() });
        }
        let up = |c| FactorComponent { factor: Factor::Upper, component: c };
        let lo = |c| FactorComponent { factor: Factor::Lower, component: c };
        let mut next = BTreeMap::new();
        for (k, (u, l)) in ub.iter().zip(lt).enumerate() {
            match (u.end, l.end) {
                (End::Finish, End::Start) => next.insert(up(u.component), lo(l.component)),
                (End::Start, End::Finish) => next.insert(lo(l.component), up(u.component)),
                (end, _) => return Err(TangleOpsError::OrientationMismatch { slot: k + 1, end }),
            };
        }
        let prev: BTreeMap<_, _> = next.iter().map(|(a, b)| (*b, *a)).collect();
        let all = (0..upper.components().len()).map(up).chain((0..lower.components().len()).map(lo));
        let mut seen = std::collections::BTreeSet::new();
        let mut chains = Vec::new();
        for fc in all {
            if seen.contains(&fc) {
                continue;
            }
            let mut head = fc;
            let mut closed = false;
            while let Some(p) = prev.get(&head) {
                if *p == fc {
                    closed = true;
                    break;
                }
                head = *p;
            }
            if closed {
                head = fc;
            }
            let mut participants = vec![head];
            let mut at = head;
            while let Some(n) = next.get(&at) {
                if *n == head {
                    break;
                }
                participants.push(*n);
                at = *n;
            }
            seen.extend(participants.iter().copied());
            chains.push(Chain { participants, closed });
        }
        Ok(GluePlan { chains, upper_components: upper.components().len(), lower_components: lower.components().len() })
    }

    /// Composite component holding each factor component.
    pub fn owner(&self) -> BTreeMap<FactorComponent, usize> {
        self.chains.iter().enumerate().flat_map(|(g, ch)| ch.participants.iter().map(move |p| (*p, g))).collect()
    }

    /// Longest chain, counted in participants.
    pub fn max_chain_len(&self) -> usize {
        self.chains.iter().map(|c| c.participants.len()).max().unwrap_or(0)
    }
}

impl fmt::Display for GluePlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, ch) in self.chains.iter().enumerate() {
            let names: Vec<String> = ch.participants.iter().map(|p| p.to_string()).collect();
            write!(f, "{}: {}", g + 1, names.join(" -> "))?;
            if ch.closed {
                f.write_str(" (closed)")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `upper` stacked on `lower`.
pub fn compose(upper: &TangleDiagram, lower: &TangleDiagram) -> Result<TangleDiagram, TangleOpsError> {
    let plan = GluePlan::new(upper, lower)?;
    Ok(compose_with(upper, lower, &plan))
}

/// Composition along a plan built by [`GluePlan::new`] for the same pair.
pub fn compose_with(upper: &TangleDiagram, lower: &TangleDiagram, plan: &GluePlan) -> TangleDiagram {
    let shift = max_id(upper);
    let lower = shift_ids(lower, shift);
    let part = |fc: &FactorComponent| match fc.factor {
        Factor::Upper => upper.component(fc.component),
        Factor::Lower => lower.component(fc.component),
    };
    let components = plan
        .chains
        .iter()
        .map(|ch| {
            let events: Vec<Passage> = ch.participants.iter().flat_map(|p| part(p).events.iter().copied()).collect();
            let closed = ch.closed || (ch.participants.len() == 1 && part(&ch.participants[0]).is_closed());
            Component { kind: if closed { ComponentKind::Closed } else { ComponentKind::Long }, events }
        })
        .collect();
    let owner = plan.owner();
    let owner = &owner;
    let remap = |factor| {
        move |u: &SlotUse| SlotUse { component: owner[&FactorComponent { factor, component: u.component }], end: u.end }
    };
    let top = upper.top().iter().map(remap(Factor::Upper)).collect();
    let bottom = lower.bottom().iter().map(remap(Factor::Lower)).collect();
    let crossings = upper.crossings().iter().chain(lower.crossings()).map(|(k, v)| (*k, *v)).collect();
    TangleDiagram::from_parts(components, crossings, top, bottom)
}

/// Unsimplified polynomial data of one factor: one record per crossing
/// plus the index differences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorData {
    pub n_components: usize,
    pub deltas: Vec<i64>,
    pub contributions: Vec<Contribution>,
}

impl FactorData {
    pub fn of(d: &TangleDiagram) -> Result<FactorData, InvariantError> {
        if d.has_singular() {
            return Err(InvariantError::HasSingular);
        }
        Ok(FactorData {
            n_components: d.components().len(),
            deltas: index_differences(d),
            contributions: contributions(d).into_values().collect(),
        })
    }

    /// The factor's own polynomial.
    pub fn polynomial<C: Coeff>(&self) -> LaurentPoly<C> {
        self.contributions.iter().map(Contribution::polynomial).sum()
    }
}

/// The composite's polynomial from its factors. Along each chain the
/// variables of all participants become the chain's variable, a
/// participant's start symbol becomes the chain's symbol plus the index
/// differences of the participants before it, and every participant's
/// index difference becomes the chain total.
pub fn predict_composed<C: Coeff>(
    upper: &FactorData,
    lower: &FactorData,
    plan: &GluePlan,
) -> Result<LaurentPoly<C>, TangleOpsError> {
    if upper.n_components != plan.upper_components || lower.n_components != plan.lower_components {
        return Err(TangleOpsError::InconsistentPlan(format!(
            "plan joins {}+{} components, factor data has {}+{}",
            plan.upper_components, plan.lower_components, upper.n_components, lower.n_components
        )));
    }
    for data in [upper, lower] {
        if data.deltas.len() != data.n_components {
            return Err(TangleOpsError::InconsistentPlan("index differences do not match component count".into()));
        }
    }
    let data = |f: Factor| match f {
        Factor::Upper => upper,
        Factor::Lower => lower,
    };
    let mut chain_of: BTreeMap<FactorComponent, usize> = BTreeMap::new();
    let mut subst: [BTreeMap<SymbolId, AffineInt>; 2] = [BTreeMap::new(), BTreeMap::new()];
    let mut totals = Vec::with_capacity(plan.chains.len());
    for (g, chain) in plan.chains.iter().enumerate() {
        let mut offset = 0i64;
        for p in &chain.participants {
            chain_of.insert(*p, g);
            subst[p.factor as usize]
                .insert(SymbolId::of_component(p.component), AffineInt::symbol(SymbolId::of_component(g)) + offset);
            offset += data(p.factor).deltas[p.component];
        }
        totals.push(offset);
    }
    let mut out = LaurentPoly::zero();
    for factor in [Factor::Upper, Factor::Lower] {
        for c in &data(factor).contributions {
            let owner = |component| {
                chain_of.get(&FactorComponent { factor, component }).copied().ok_or_else(|| {
                    TangleOpsError::InconsistentPlan(format!("component {} is in no chain", component + 1))
                })
            };
            let (g_over, g_under) = (owner(c.over)?, owner(c.under)?);
            let rewritten = Contribution {
                over: g_over,
                under: g_under,
                weight: c.weight.substitute(&subst[factor as usize]),
                over_label: c.over_label.substitute(&subst[factor as usize]),
                under_label: c.under_label.substitute(&subst[factor as usize]),
                delta_under: totals[g_under],
                ..c.clone()
            };
            out += rewritten.polynomial::<C>();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{
        from_generator_word, parse, random_diagram_with, random_lower_for, Dir, GeneratorWord, RandomSpec,
    };
    use crate::invariant::maip;
    use num_bigint::BigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type P = LaurentPoly<BigInt>;

    const UPPER: &str = "\
tangle m=2 n=4
component 1 long from T1 to B3 : O1+
component 2 long from B4 to T2 : O2-
component 3 long from B1 to B2 : U1+ U2-
";
    const LOWER: &str = "\
tangle m=4 n=2
component 1 long from B1 to T1 : O1+ O2+ U1+
component 2 long from T3 to T4 : U2+
component 3 long from T2 to B2 :
";

    fn identity_over(d: &TangleDiagram) -> TangleDiagram {
        let dirs: Vec<Dir> = d.top().iter().map(|u| if u.end == End::Start { Dir::Down } else { Dir::Up }).collect();
        from_generator_word(&GeneratorWord::identity(&dirs)).unwrap()
    }

    fn identity_under(d: &TangleDiagram) -> TangleDiagram {
        let dirs: Vec<Dir> = d.bottom().iter().map(|u| if u.end == End::Start { Dir::Up } else { Dir::Down }).collect();
        from_generator_word(&GeneratorWord::identity(&dirs)).unwrap()
    }

    #[test]
    fn tensor_shifts_everything() {
        let a = parse(UPPER).unwrap();
        let t = tensor(&a, &a);
        assert_eq!(t.validate(), Ok(()));
        assert_eq!(t.arity(), (4, 8));
        assert_eq!(t.components().len(), 6);
        assert_eq!(
            t.component(5).events,
            vec![Passage::new(3, crate::diagram::Role::Under), Passage::new(4, crate::diagram::Role::Under)]
        );
        let p: P = maip(&a).unwrap();
        assert_eq!(maip::<BigInt>(&t).unwrap(), predict_tensor(&p, &p, 3));
        assert_eq!(tensor(&TangleDiagram::empty(), &a), a);
    }

    #[test]
    fn stacking_example_chains() {
        let (u, l) = (parse(UPPER).unwrap(), parse(LOWER).unwrap());
        let plan = GluePlan::new(&u, &l).unwrap();
        assert_eq!(plan.to_string(), "1: U1 -> L2 -> U2\n2: L1 -> U3 -> L3\n");
        let d = compose_with(&u, &l, &plan);
        assert_eq!(
            d.to_string(),
            "tangle m=2 n=2\ncomponent 1 long from T1 to T2 : O1+ U4+ O2-\ncomponent 2 long from B1 to B2 : O3+ O4+ U3+ U1+ U2-\n"
        );
        let direct: P = maip(&d).unwrap();
        let predicted: P = predict_composed(&FactorData::of(&u).unwrap(), &FactorData::of(&l).unwrap(), &plan).unwrap();
        assert_eq!(direct, predicted);
        assert_eq!(direct, "1 - t2^(-1) + t2^(c2-c1) - t2 + t1^(c1-c2-1) - t1^(c1-c2)".parse().unwrap());
    }

    #[test]
    fn identity_composition() {
        let l = parse(LOWER).unwrap();
        assert_eq!(compose(&l, &identity_under(&l)).unwrap(), l);
        let id = identity_over(&l);
        let composed = compose(&id, &l).unwrap();
        assert_eq!(composed.validate(), Ok(()));
        let fl = FactorData::of(&l).unwrap();
        let plan = GluePlan::new(&id, &l).unwrap();
        let predicted: P = predict_composed(&FactorData::of(&id).unwrap(), &fl, &plan).unwrap();
        assert_eq!(predicted, maip::<BigInt>(&composed).unwrap());
        let plan_below = GluePlan::new(&l, &identity_under(&l)).unwrap();
        let same: P = predict_composed(&fl, &FactorData::of(&identity_under(&l)).unwrap(), &plan_below).unwrap();
        assert_eq!(same, maip::<BigInt>(&l).unwrap());
    }

    #[test]
    fn glue_errors() {
        let u = parse(UPPER).unwrap();
        assert_eq!(compose(&u, &u), Err(TangleOpsError::ArityMismatch { upper_bottom: 4, lower_top: 2 }));
        let down = parse("tangle m=1 n=1\ncomponent 1 long from T1 to B1 :").unwrap();
        let up = parse("tangle m=1 n=1\ncomponent 1 long from B1 to T1 :").unwrap();
        assert_eq!(compose(&up, &down), Err(TangleOpsError::OrientationMismatch { slot: 1, end: End::Start }));
        assert!(compose(&down, &down).is_ok());
        let plan = GluePlan::new(&down, &down).unwrap();
        let fu = FactorData::of(&u).unwrap();
        assert!(matches!(predict_composed::<BigInt>(&fu, &fu, &plan), Err(TangleOpsError::InconsistentPlan(_))));
    }

    #[test]
    fn cycles_close_up() {
        let cap = parse("tangle m=0 n=2\ncomponent 1 long from B1 to B2 : O1+ U1+").unwrap();
        let cup = parse("tangle m=2 n=0\ncomponent 1 long from T2 to T1 : O1- U1-").unwrap();
        let plan = GluePlan::new(&cap, &cup).unwrap();
        assert_eq!(
            plan.chains,
            vec![Chain {
                participants: vec![
                    FactorComponent { factor: Factor::Upper, component: 0 },
                    FactorComponent { factor: Factor::Lower, component: 0 }
                ],
                closed: true
            }]
        );
        let d = compose(&cap, &cup).unwrap();
        assert_eq!(d.to_string(), "tangle m=0 n=0\ncomponent 1 closed : O1+ U1+ O2- U2-\n");
    }

    #[test]
    fn random_pairs_predict_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut long_chains = 0;
        for _ in 0..150 {
            let upper =
                random_diagram_with(&mut rng, RandomSpec { n_closed: 1, n_long: 3, n_crossings: 5, n_singular: 0 });
            let lower = random_lower_for(
                &mut rng,
                &upper,
                RandomSpec { n_closed: 1, n_long: 1, n_crossings: 5, n_singular: 0 },
            );
            let plan = GluePlan::new(&upper, &lower).unwrap();
            long_chains += usize::from(plan.max_chain_len() >= 2);
            let d = compose_with(&upper, &lower, &plan);
            assert_eq!(d.validate(), Ok(()));
            let predicted: P =
                predict_composed(&FactorData::of(&upper).unwrap(), &FactorData::of(&lower).unwrap(), &plan).unwrap();
            assert_eq!(predicted, maip::<BigInt>(&d).unwrap());
        }
        assert!(long_chains > 100);
    }
}
