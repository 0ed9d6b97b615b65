use maip_core::diagram::{parse, serialize, TangleDiagram};
use maip_core::invariant::{maip, resolve_singular, vassiliev_eval};
use maip_core::{fixtures, Poly};
use proptest::prelude::*;

fn poly(s: &str) -> Poly {
    s.parse().unwrap()
}

#[test]
fn fixtures_are_canonical_text() {
    for (name, text) in fixtures::ALL {
        let d = parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(serialize(&d), text, "{name}");
        assert_eq!(d.validate(), Ok(()), "{name}");
    }
}

#[test]
fn fixtures_survive_json() {
    for (name, _) in fixtures::ALL {
        let d = fixtures::by_name(name).unwrap();
        let back = TangleDiagram::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d, "{name}");
    }
}

#[test]
fn kink_is_trivial() {
    assert!(maip::<num_bigint::BigInt>(&fixtures::kink()).unwrap().is_zero());
}

#[test]
fn sum_of_resolutions_matches_printed_value() {
    let terms = resolve_singular(&fixtures::sing()).unwrap();
    let sum =
        terms.iter().map(|t| maip::<num_bigint::BigInt>(&t.diagram).unwrap()).fold(Poly::zero(), |acc, p| acc + p);
    assert_eq!(sum, poly("t1^(c1-c2) - t2^(c2-c1) + t2^(-1) - t1"));
    assert_eq!(
        vassiliev_eval::<num_bigint::BigInt>(&fixtures::sing()).unwrap(),
        poly("t1^(c1-c2) - t1 + t2^(c2-c1) - t2^(-1)")
    );
}

#[test]
fn two_double_points_vanish() {
    assert!(vassiliev_eval::<num_bigint::BigInt>(&fixtures::sing2()).unwrap().is_zero());
}

proptest! {
    #[test]
    fn random_text_round_trip(seed in any::<u64>(), closed in 0usize..3, long in 0usize..3, n in 0usize..10) {
        let d = maip_core::diagram::random_diagram(seed, closed, long, n);
        let text = serialize(&d);
        prop_assert_eq!(parse(&text).unwrap(), d.clone());
        prop_assert_eq!(TangleDiagram::from_json(&d.to_json()).unwrap(), d);
    }
}
