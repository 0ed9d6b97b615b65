//! Acceptance criteria, one line each. Exits nonzero if any criterion
//! fails.

use std::collections::BTreeSet;
use std::time::Instant;

use maip_core::algebra::{AffineInt, VarIndex};
use maip_core::diagram::random_diagram;
use maip_core::homology;
use maip_core::invariant::{contributions, maip, propagate_labels, vassiliev_eval};
use maip_core::moves::{r1_insert, InsertAt, R1Order};
use maip_core::suite::{run_random, Property, SuiteConfig, SuiteReport};
use maip_core::tangle_ops::{compose, predict_composed, FactorData, GluePlan};
use maip_core::{fixtures, Poly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn poly(s: &str) -> Poly {
    s.parse().expect("test polynomial parses")
}

fn affine(s: &str) -> AffineInt {
    s.parse().expect("test exponent parses")
}

fn expect_eq<T: PartialEq + std::fmt::Display>(what: &str, got: &T, want: &T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, expected {want}"))
    }
}

fn suite_outcome(r: &SuiteReport, note: String) -> Outcome {
    if r.passed() {
        Ok(note)
    } else {
        Err(r.to_string())
    }
}

fn c1_small_tangle() -> Outcome {
    let p: Poly = maip(&fixtures::ex3()).map_err(|e| e.to_string())?;
    expect_eq("polynomial", &p, &poly("t1^(c1-c3-1) - t2^(c2-c3)"))?;
    expect_eq("render", &p.to_string(), &"t1^(c1-c3-1) - t2^(c2-c3)".to_string())?;
    Ok(p.to_string())
}

fn c2_four_two_tangle() -> Outcome {
    let d = fixtures::ex2();
    let table = contributions(&d);
    let (a, b) = (&table[&1], &table[&2]);
    expect_eq("crossing 1 over label", &a.over_label, &affine("c1"))?;
    expect_eq("crossing 1 under label", &a.under_label, &affine("c1-1"))?;
    expect_eq("crossing 1 delta", &a.delta_under, &-1)?;
    expect_eq("crossing 2 over label", &b.over_label, &affine("c1-1"))?;
    expect_eq("crossing 2 under label", &b.under_label, &affine("c2+1"))?;
    expect_eq("crossing 2 delta", &b.delta_under, &1)?;
    // independent expansion: t1^-1 (t1 - 1) + t1 (t1^(c1-c2-2) - 1)
    let t1 = VarIndex::new(1);
    let first = poly("t1 - 1").shift_monomial(t1, &AffineInt::constant(-1)).unwrap();
    let second = poly("t1^(c1-c2-2) - 1").shift_monomial(t1, &AffineInt::constant(1)).unwrap();
    let oracle = first + second;
    let p: Poly = maip(&d).map_err(|e| e.to_string())?;
    expect_eq("expansion", &oracle, &poly("1 - t1^(-1) + t1^(c1-c2-1) - t1"))?;
    expect_eq("polynomial", &p, &oracle)?;
    Ok(p.to_string())
}

fn c3_closed_and_stacked() -> Outcome {
    let closed: Poly = maip(&fixtures::ex1()).map_err(|e| e.to_string())?;
    expect_eq("closed diagram", &closed, &poly("t2^(c2-c1-1) - t2^(c2-c1) + 1 - t1^(-1) + t1^(c1-c2) - t1"))?;

    let (upper, lower) = (fixtures::ex3(), fixtures::ex2());
    let stacked = compose(&upper, &lower).map_err(|e| e.to_string())?;
    let direct: Poly = maip(&stacked).map_err(|e| e.to_string())?;
    // the stacked tangle lists the primed strand first: t1' -> t1, d1 -> c1,
    // t1 -> t2, c1 -> c2
    let published = poly("1 - t2^(-1) + t2^(c2-c1) - t2 + t1^(c1-c2-1) - t1 - t1^(c1-c2) + t1");
    expect_eq("stacked tangle", &direct, &published)?;
    let plan = GluePlan::new(&upper, &lower).map_err(|e| e.to_string())?;
    let fu = FactorData::of(&upper).map_err(|e| e.to_string())?;
    let fl = FactorData::of(&lower).map_err(|e| e.to_string())?;
    let predicted: Poly = predict_composed(&fu, &fl, &plan).map_err(|e| e.to_string())?;
    expect_eq("prediction from the factors", &predicted, &published)?;

    let closure = stacked.close_long_components().permute_components(&[1, 0]).with_canonical_ids();
    if closure != fixtures::ex1() {
        return Err(format!("closing the stacked tangle gives\n{closure}not\n{}", fixtures::EX1));
    }
    Ok(format!("closed: {closed}; stacked: {direct}"))
}

fn c4_single_double_point() -> Outcome {
    let v: Poly = vassiliev_eval(&fixtures::sing()).map_err(|e| e.to_string())?;
    expect_eq("evaluation", &v, &poly("t1^(c1-c2) - t2^(c2-c1) + t2^(-1) - t1"))?;
    Ok(v.to_string())
}

fn c5_moves() -> Outcome {
    let cfg = SuiteConfig { trials: 1000, seed: 1, walk_length: 50, max_components: 4, max_crossings: 12 };
    let r = run_random(Property::Moves, cfg);
    let counts: Vec<String> = ["R1+", "R1-", "R2+", "R2-", "R3"].iter().map(|k| format!("{k}:{}", r.stat(k))).collect();
    if r.stat("R3") == 0 {
        return Err(format!("no R3 move was exercised\n{r}"));
    }
    suite_outcome(&r, format!("1000 walks of 50 moves ({})", counts.join(" ")))
}

fn corpus_cfg() -> SuiteConfig {
    SuiteConfig { trials: 500, seed: 2, walk_length: 0, max_components: 4, max_crossings: 12 }
}

fn c6_prop2() -> Outcome {
    let r = run_random(Property::Prop2, corpus_cfg());
    let note = format!(
        "500 diagrams, {} early under, {} early over, {} mixed crossings",
        r.stat("earlyunder"),
        r.stat("earlyover"),
        r.stat("mixed")
    );
    suite_outcome(&r, note)
}

fn c7_corollary() -> Outcome {
    let r = run_random(Property::Corollary, corpus_cfg());
    suite_outcome(&r, format!("500 diagrams, {} crossings", r.stat("crossings")))
}

fn c8_order_one() -> Outcome {
    let cfg = SuiteConfig { trials: 200, seed: 3, walk_length: 0, max_components: 4, max_crossings: 12 };
    let r = run_random(Property::Vassiliev, cfg);
    let witness: Poly = vassiliev_eval(&fixtures::sing()).map_err(|e| e.to_string())?;
    if witness.is_zero() {
        return Err("single double point evaluates to zero".into());
    }
    suite_outcome(&r, format!("200 two-point diagrams vanish; one-point witness {witness}"))
}

fn c9_composition() -> Outcome {
    let cfg = SuiteConfig { trials: 300, seed: 4, walk_length: 0, max_components: 4, max_crossings: 12 };
    let r = run_random(Property::Compose, cfg);
    if r.stat("long_chains") < 200 {
        return Err(format!("only {} pairs had a chain of length >= 2\n{r}", r.stat("long_chains")));
    }
    let note = format!(
        "{} pairs, {} with chains of length >= 2, {} closed chains",
        r.stat("pairs"),
        r.stat("long_chains"),
        r.stat("closed_chains")
    );
    suite_outcome(&r, note)
}

fn c10_reductions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut kinks = 0;
    for seed in 0..300 {
        let knot = random_diagram(seed, 1, 0, rng.gen_range(0..=12));
        let lab = propagate_labels(&knot);
        if lab.delta(0) != 0 || homology::index_difference(&knot, 0) != 0 {
            return Err(format!("knot with nonzero index difference\n{knot}"));
        }
        for d in [knot, random_diagram(seed, 2, 2, 8)] {
            let len = d.component(0).events.len();
            let at = InsertAt { component: 0, offset: rng.gen_range(0..=len) };
            let sign = if rng.gen_bool(0.5) { maip_core::diagram::Sign::Pos } else { maip_core::diagram::Sign::Neg };
            let order = if rng.gen_bool(0.5) { R1Order::OverFirst } else { R1Order::UnderFirst };
            let with_kink = r1_insert(&d, at, sign, order).map_err(|e| e.to_string())?;
            let id = d.next_crossing_id();
            let c = &contributions(&with_kink)[&id];
            if !c.weight.is_zero() || !c.polynomial::<num_bigint::BigInt>().is_zero() {
                return Err(format!("kink {id} contributes {}\n{with_kink}", c.polynomial::<num_bigint::BigInt>()));
            }
            kinks += 1;
        }
    }
    Ok(format!("300 knots with zero index difference, {kinks} kinks contributing 0"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("polynomial of the (2,4) tangle ex3", c1_small_tangle),
        ("unsimplified factors and polynomial of the (4,2) tangle ex2", c2_four_two_tangle),
        ("closed link ex1, stacked tangle, and closure of the stack", c3_closed_and_stacked),
        ("resolution of one double point (sing)", c4_single_double_point),
        ("random Reidemeister walks keep the polynomial", c5_moves),
        ("labeled weights match homological weights", c6_prop2),
        ("polynomial from homological weights", c7_corollary),
        ("two double points vanish, one does not", c8_order_one),
        ("tensor additivity and composition prediction", c9_composition),
        ("knots have zero index differences; kinks contribute nothing", c10_reductions),
    ];
    let mut failed = BTreeSet::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(note) => println!("PASS [{:>2}] {name} ({secs:.1}s): {note}", k + 1),
            Err(why) => {
                failed.insert(k + 1);
                println!("FAIL [{:>2}] {name} ({secs:.1}s)", k + 1);
                for line in why.lines() {
                    println!("          {line}");
                }
            }
        }
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failed.len(), failed.len());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
