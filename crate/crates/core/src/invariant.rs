//! Affine labels, index differences, crossing weights, the polynomial
//! itself and the resolution of double points.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{AffineInt, Coeff, LaurentPoly, SymbolId, VarIndex};
use crate::diagram::{Component, CrossingId, CrossingKind, Passage, PassageLoc, Role, Sign, TangleDiagram};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("crossing {0} is not classical")]
    NotClassical(CrossingId),
    #[error("crossing {0} does not exist")]
    UnknownCrossing(CrossingId),
    #[error("diagram has singular crossings; use resolve")]
    HasSingular,
    #[error("diagram has no singular crossings")]
    NoSingular,
}

/// Label change when a component passes through a crossing.
pub fn increment(role: Role, kind: CrossingKind) -> i64 {
    match (role, kind) {
        (Role::Over, CrossingKind::Classical(s)) => -s.value(),
        (Role::Under, CrossingKind::Classical(s)) => s.value(),
        (Role::SingPrimary, _) => -1,
        (Role::SingSecondary, _) => 1,
        // role/kind mismatches are rejected by validation
        _ => 0,
    }
}

/// Arc labels of every component. `labels(i)[k]` is the label just before
/// event `k`; the last entry is the label after the final event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    labels: Vec<Vec<AffineInt>>,
    deltas: Vec<i64>,
}

impl Labeling {
    pub fn start(&self, component: usize) -> &AffineInt {
        &self.labels[component][0]
    }

    pub fn labels(&self, component: usize) -> &[AffineInt] {
        &self.labels[component]
    }

    /// Label on the arc entering the passage at `loc`.
    pub fn incoming(&self, loc: PassageLoc) -> &AffineInt {
        &self.labels[loc.component][loc.offset]
    }

    /// Label on the arc leaving the passage at `loc`.
    pub fn outgoing(&self, loc: PassageLoc) -> &AffineInt {
        &self.labels[loc.component][loc.offset + 1]
    }

    /// Index difference of a component: final label minus start label.
    pub fn delta(&self, component: usize) -> i64 {
        self.deltas[component]
    }

    pub fn deltas(&self) -> &[i64] {
        &self.deltas
    }
}

/// Labels starting from the symbols `c_1, c_2, ...`.
pub fn propagate_labels(d: &TangleDiagram) -> Labeling {
    let starts = (0..d.components().len()).map(|i| AffineInt::symbol(SymbolId::of_component(i))).collect();
    propagate_labels_from(d, starts)
}

/// Labels from caller-supplied start labels, one per component.
pub fn propagate_labels_from(d: &TangleDiagram, starts: Vec<AffineInt>) -> Labeling {
    assert_eq!(starts.len(), d.components().len(), "one start label per component");
    let mut labels = Vec::with_capacity(starts.len());
    let mut deltas = Vec::with_capacity(starts.len());
    for (comp, start) in d.components().iter().zip(starts) {
        let mut row = Vec::with_capacity(comp.events.len() + 1);
        let mut delta = 0;
        row.push(start.clone());
        for p in &comp.events {
            delta += d.kind(p.crossing).map_or(0, |k| increment(p.role, k));
            row.push(&start + delta);
        }
        labels.push(row);
        deltas.push(delta);
    }
    Labeling { labels, deltas }
}

/// Index differences only, without building labels.
pub fn index_differences(d: &TangleDiagram) -> Vec<i64> {
    let sum = |c: &Component| c.events.iter().map(|p| d.kind(p.crossing).map_or(0, |k| increment(p.role, k))).sum();
    d.components().iter().map(sum).collect()
}

/// Everything one classical crossing contributes to the polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    pub id: CrossingId,
    pub sign: Sign,
    /// 0-based component of the over strand.
    pub over: usize,
    pub under: usize,
    /// Incoming over label and outgoing under label; the weight is their
    /// difference.
    pub over_label: AffineInt,
    pub under_label: AffineInt,
    pub weight: AffineInt,
    /// Index difference of the under strand's component.
    pub delta_under: i64,
}

impl Contribution {
    /// `sign * t_over^delta_under * (t_over^weight - 1)`.
    pub fn polynomial<C: Coeff>(&self) -> LaurentPoly<C> {
        let var = VarIndex::of_component(self.over);
        let s = C::from(self.sign.value());
        let mut p = LaurentPoly::monomial(var, &self.weight + self.delta_under, s.clone());
        p.add_monomial(Some(var), AffineInt::constant(self.delta_under), -s);
        p
    }
}

pub type WeightTable = BTreeMap<CrossingId, Contribution>;

fn contribution(d: &TangleDiagram, lab: &Labeling, id: CrossingId) -> Result<Contribution, InvariantError> {
    let sign = match d.kind(id) {
        None => return Err(InvariantError::UnknownCrossing(id)),
        Some(CrossingKind::Singular) => return Err(InvariantError::NotClassical(id)),
        Some(CrossingKind::Classical(s)) => s,
    };
    let locs = d.locate(id).ok_or(InvariantError::UnknownCrossing(id))?;
    let over = locs.with_role(Role::Over).ok_or(InvariantError::UnknownCrossing(id))?;
    let under = locs.with_role(Role::Under).ok_or(InvariantError::UnknownCrossing(id))?;
    let over_label = lab.incoming(over).clone();
    let under_label = lab.outgoing(under).clone();
    Ok(Contribution {
        id,
        sign,
        over: over.component,
        under: under.component,
        weight: &over_label - &under_label,
        over_label,
        under_label,
        delta_under: lab.delta(under.component),
    })
}

/// `W = overIncoming - underIncoming - sign`.
pub fn crossing_weight(d: &TangleDiagram, lab: &Labeling, id: CrossingId) -> Result<AffineInt, InvariantError> {
    contribution(d, lab, id).map(|c| c.weight)
}

/// Contributions of every classical crossing under the given labeling.
pub fn weight_table(d: &TangleDiagram, lab: &Labeling) -> WeightTable {
    d.classical_ids().map(|id| (id, contribution(d, lab, id).expect("valid diagram"))).collect()
}

/// Contributions under the default symbolic labeling.
pub fn contributions(d: &TangleDiagram) -> WeightTable {
    weight_table(d, &propagate_labels(d))
}

/// The multi-variable affine index polynomial with symbolic start labels.
pub fn maip<C: Coeff>(d: &TangleDiagram) -> Result<LaurentPoly<C>, InvariantError> {
    maip_with(d, &propagate_labels(d))
}

/// The polynomial for an explicit labeling.
pub fn maip_with<C: Coeff>(d: &TangleDiagram, lab: &Labeling) -> Result<LaurentPoly<C>, InvariantError> {
    if d.has_singular() {
        return Err(InvariantError::HasSingular);
    }
    Ok(weight_table(d, lab).values().map(Contribution::polynomial).sum())
}

/// One signed diagram in the expansion of a singular diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularResolutionTerm {
    pub coefficient: i64,
    pub diagram: TangleDiagram,
}

/// All `2^k` resolutions. Terms are listed in binary order with the
/// smallest crossing id as the most significant digit, `+` before `-`.
pub fn resolve_singular(d: &TangleDiagram) -> Result<Vec<SingularResolutionTerm>, InvariantError> {
    let ids: Vec<CrossingId> = d.singular_ids().collect();
    if ids.is_empty() {
        return Err(InvariantError::NoSingular);
    }
    let k = ids.len();
    let terms = (0u64..1 << k)
        .map(|mask| {
            let negative: BTreeMap<CrossingId, bool> =
                ids.iter().enumerate().map(|(j, id)| (*id, mask >> (k - 1 - j) & 1 == 1)).collect();
            let coefficient = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            let components = d
                .components()
                .iter()
                .map(|c| Component {
                    kind: c.kind,
                    events: c
                        .events
                        .iter()
                        .map(|p| match (p.role, negative.get(&p.crossing)) {
                            (Role::SingPrimary, Some(false)) | (Role::SingSecondary, Some(true)) => {
                                Passage::new(p.crossing, Role::Over)
                            }
                            (Role::SingSecondary, Some(false)) | (Role::SingPrimary, Some(true)) => {
                                Passage::new(p.crossing, Role::Under)
                            }
                            _ => *p,
                        })
                        .collect(),
                })
                .collect();
            let crossings = d
                .crossings()
                .iter()
                .map(|(id, kind)| {
                    let kind = match negative.get(id) {
                        Some(false) => CrossingKind::Classical(Sign::Pos),
                        Some(true) => CrossingKind::Classical(Sign::Neg),
                        None => *kind,
                    };
                    (*id, kind)
                })
                .collect();
            let diagram = TangleDiagram::from_parts(components, crossings, d.top().to_vec(), d.bottom().to_vec());
            SingularResolutionTerm { coefficient, diagram }
        })
        .collect();
    Ok(terms)
}

/// The polynomial extended to double points by `v(D_s) = v(D_+) - v(D_-)`.
pub fn vassiliev_eval<C: Coeff>(d: &TangleDiagram) -> Result<LaurentPoly<C>, InvariantError> {
    if !d.has_singular() {
        return maip(d);
    }
    let mut out = LaurentPoly::zero();
    for term in resolve_singular(d)? {
        let p: LaurentPoly<C> = maip(&term.diagram)?;
        out += p.scale(&C::from(term.coefficient));
    }
    Ok(out)
}
