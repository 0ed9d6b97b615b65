//! Randomized property checks. Every trial draws from its own generator
//! (the base seed with the trial index as stream), so trials run in
//! parallel and any failure can be rerun alone.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::diagram::{random_diagram_with, random_lower_for, RandomSpec, TangleDiagram};
use crate::homology::{check_prop2, maip_via_homology};
use crate::invariant::{crossing_weight, maip, propagate_labels, vassiliev_eval};
use crate::moves::{plant_r3, random_walk_with};
use crate::tangle_ops::{compose_with, predict_composed, predict_tensor, tensor, FactorData, GluePlan};
use crate::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    /// Random Reidemeister walks keep the polynomial.
    Moves,
    /// Labeled weights against homological weights.
    Prop2,
    /// The polynomial rebuilt from homological weights.
    Corollary,
    /// Tensor additivity and the composition prediction.
    Compose,
    /// Diagrams with two double points evaluate to zero.
    Vassiliev,
}

impl Property {
    pub const ALL: [Property; 5] =
        [Property::Moves, Property::Prop2, Property::Corollary, Property::Compose, Property::Vassiliev];

    pub fn name(self) -> &'static str {
        match self {
            Property::Moves => "moves",
            Property::Prop2 => "prop2",
            Property::Corollary => "corollary",
            Property::Compose => "compose",
            Property::Vassiliev => "vassiliev",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown property `{s}` (expected moves, prop2, corollary, compose or vassiliev)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    /// Moves per random walk.
    pub walk_length: usize,
    /// Bound on components of generated diagrams.
    pub max_components: usize,
    /// Bound on crossings of generated diagrams.
    pub max_crossings: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { trials: 200, seed: 0, walk_length: 50, max_components: 4, max_crossings: 12 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialFailure {
    pub trial: usize,
    /// Diagram, move log or polynomials needed to reproduce the failure.
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub property: Property,
    pub config: SuiteConfig,
    pub failures: Vec<TrialFailure>,
    /// Counters such as moves applied per kind or crossings checked.
    pub stats: BTreeMap<String, usize>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn stat(&self, key: &str) -> usize {
        self.stats.get(key).copied().unwrap_or(0)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "{verdict} {}: {} trials, seed {}, {} failures",
            self.property,
            self.config.trials,
            self.config.seed,
            self.failures.len()
        )?;
        let stats: Vec<String> = self.stats.iter().map(|(k, v)| format!("{k}={v}")).collect();
        if !stats.is_empty() {
            writeln!(f, "  {}", stats.join(" "))?;
        }
        for fail in &self.failures {
            writeln!(f, "--- trial {} (seed {}) ---", fail.trial, self.config.seed)?;
            writeln!(f, "{}", fail.detail.trim_end())?;
        }
        Ok(())
    }
}

type Stats = BTreeMap<String, usize>;
type TrialResult = Result<Stats, String>;

/// Generator for one trial.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// A diagram with 1..=max components and up to `max_crossings` crossings,
/// `n_singular` of them double points.
pub fn random_corpus_diagram<R: Rng + ?Sized>(rng: &mut R, cfg: &SuiteConfig, n_singular: usize) -> TangleDiagram {
    let n_components = rng.gen_range(1..=cfg.max_components.max(1));
    let n_closed = rng.gen_range(0..=n_components);
    let n_crossings = rng.gen_range(n_singular..=cfg.max_crossings.max(n_singular));
    random_diagram_with(rng, RandomSpec { n_closed, n_long: n_components - n_closed, n_crossings, n_singular })
}

fn bump(stats: &mut Stats, key: &str, by: usize) {
    *stats.entry(key.to_string()).or_default() += by;
}

fn walk_trial(rng: &mut ChaCha8Rng, d: &TangleDiagram, cfg: &SuiteConfig) -> TrialResult {
    let before: Poly = maip(d).map_err(|e| e.to_string())?;
    let walk = random_walk_with(rng, d, cfg.walk_length);
    let after: Poly = maip(&walk.diagram).map_err(|e| e.to_string())?;
    let mut stats = Stats::new();
    for m in &walk.log {
        bump(&mut stats, m.kind().tag(), 1);
    }
    if let Err(v) = walk.diagram.validate() {
        return Err(format!("walk produced an invalid diagram: {v:?}\nstart:\n{d}moves:\n{}", walk.log_text()));
    }
    if before != after {
        return Err(format!("polynomial changed: {before}  ->  {after}\nstart:\n{d}moves:\n{}", walk.log_text()));
    }
    Ok(stats)
}

fn prop2_trial(d: &TangleDiagram) -> TrialResult {
    let lab = propagate_labels(d);
    let report = check_prop2(d, |id| crossing_weight(d, &lab, id).expect("classical")).map_err(|e| e.to_string())?;
    let bad: Vec<String> = report
        .failures()
        .map(|c| {
            format!("crossing {} ({:?}): W = {}, W^h = {}, delta = {}", c.id, c.class, c.weight, c.homological, c.delta)
        })
        .collect();
    if !bad.is_empty() {
        return Err(format!("{}\n{d}", bad.join("\n")));
    }
    let mut stats = Stats::new();
    for c in &report.checks {
        bump(&mut stats, &format!("{:?}", c.class).to_lowercase(), 1);
    }
    Ok(stats)
}

fn corollary_trial(d: &TangleDiagram) -> TrialResult {
    let direct: Poly = maip(d).map_err(|e| e.to_string())?;
    let via: Poly = maip_via_homology(d).map_err(|e| e.to_string())?;
    if direct != via {
        return Err(format!("labels give {direct}\nhomology gives {via}\n{d}"));
    }
    Ok(Stats::from([("crossings".to_string(), d.classical_ids().count())]))
}

fn compose_trial(upper: &TangleDiagram, lower: &TangleDiagram) -> TrialResult {
    let dump = || format!("upper:\n{upper}lower:\n{lower}");
    let pu: Poly = maip(upper).map_err(|e| e.to_string())?;
    let pl: Poly = maip(lower).map_err(|e| e.to_string())?;
    let t: Poly = maip(&tensor(upper, lower)).map_err(|e| e.to_string())?;
    let expected_t = predict_tensor(&pu, &pl, upper.components().len());
    if t != expected_t {
        return Err(format!("tensor: {t} but factors give {expected_t}\n{}", dump()));
    }
    let plan = GluePlan::new(upper, lower).map_err(|e| format!("{e}\n{}", dump()))?;
    let composite = compose_with(upper, lower, &plan);
    composite.validate().map_err(|v| format!("invalid composite {v:?}\n{}", dump()))?;
    let direct: Poly = maip(&composite).map_err(|e| e.to_string())?;
    let fu = FactorData::of(upper).map_err(|e| e.to_string())?;
    let fl = FactorData::of(lower).map_err(|e| e.to_string())?;
    let predicted: Poly = predict_composed(&fu, &fl, &plan).map_err(|e| e.to_string())?;
    if direct != predicted {
        return Err(format!("composite gives {direct}\nprediction gives {predicted}\nplan:\n{plan}{}", dump()));
    }
    let mut stats = Stats::new();
    bump(&mut stats, "pairs", 1);
    bump(&mut stats, "long_chains", usize::from(plan.max_chain_len() >= 2));
    bump(&mut stats, "closed_chains", plan.chains.iter().filter(|c| c.closed && c.participants.len() > 1).count());
    Ok(stats)
}

fn vassiliev_trial(d: &TangleDiagram) -> TrialResult {
    let v: Poly = vassiliev_eval(d).map_err(|e| e.to_string())?;
    if !v.is_zero() {
        return Err(format!("evaluation {v} is not zero\n{d}"));
    }
    Ok(Stats::from([("diagrams".to_string(), 1)]))
}

fn small_lower_spec<R: Rng + ?Sized>(rng: &mut R, max_crossings: usize) -> RandomSpec {
    RandomSpec {
        n_closed: rng.gen_range(0..=1),
        n_long: rng.gen_range(0..=1),
        n_crossings: rng.gen_range(0..=max_crossings),
        n_singular: 0,
    }
}

fn random_trial(property: Property, cfg: &SuiteConfig, trial: usize) -> TrialResult {
    let mut rng = trial_rng(cfg.seed, trial);
    match property {
        Property::Moves => {
            let mut small = *cfg;
            small.max_crossings = cfg.max_crossings.saturating_sub(3);
            let d = random_corpus_diagram(&mut rng, &small, 0);
            let d = plant_r3(&mut rng, &d);
            walk_trial(&mut rng, &d, cfg)
        }
        Property::Prop2 => prop2_trial(&random_corpus_diagram(&mut rng, cfg, 0)),
        Property::Corollary => corollary_trial(&random_corpus_diagram(&mut rng, cfg, 0)),
        Property::Compose => {
            let half = (cfg.max_crossings / 2).max(1);
            let upper_spec = RandomSpec {
                n_closed: rng.gen_range(0..=1),
                n_long: rng.gen_range(1..=cfg.max_components.max(1)),
                n_crossings: rng.gen_range(0..=half),
                n_singular: 0,
            };
            let upper = random_diagram_with(&mut rng, upper_spec);
            let lower_spec = small_lower_spec(&mut rng, half);
            let lower = random_lower_for(&mut rng, &upper, lower_spec);
            compose_trial(&upper, &lower)
        }
        Property::Vassiliev => vassiliev_trial(&random_corpus_diagram(&mut rng, cfg, 2)),
    }
}

fn collect(property: Property, cfg: SuiteConfig, results: Vec<TrialResult>) -> SuiteReport {
    let mut stats = Stats::new();
    let mut failures = Vec::new();
    for (trial, r) in results.into_iter().enumerate() {
        match r {
            Ok(s) => {
                for (k, v) in s {
                    bump(&mut stats, &k, v);
                }
            }
            Err(detail) => failures.push(TrialFailure { trial, detail }),
        }
    }
    SuiteReport { property, config: cfg, failures, stats }
}

/// Runs `cfg.trials` random trials of one property.
pub fn run_random(property: Property, cfg: SuiteConfig) -> SuiteReport {
    let results: Vec<TrialResult> = (0..cfg.trials).into_par_iter().map(|t| random_trial(property, &cfg, t)).collect();
    collect(property, cfg, results)
}

/// Runs one property against a given diagram. Walks start from it and
/// compositions put random lower tangles under it; the homology checks
/// and the double point check look at the diagram alone.
pub fn run_on(property: Property, d: &TangleDiagram, cfg: SuiteConfig) -> Result<SuiteReport, String> {
    let singular = d.singular_ids().count();
    match property {
        Property::Vassiliev if singular < 2 => {
            return Err(format!("diagram has {singular} double point(s); the check needs at least two"))
        }
        Property::Vassiliev => {}
        _ if singular > 0 => return Err("diagram has singular crossings; use resolve".to_string()),
        _ => {}
    }
    let single = |r: TrialResult| collect(property, SuiteConfig { trials: 1, ..cfg }, vec![r]);
    Ok(match property {
        Property::Prop2 => single(prop2_trial(d)),
        Property::Corollary => single(corollary_trial(d)),
        Property::Vassiliev => single(vassiliev_trial(d)),
        Property::Moves => {
            let results =
                (0..cfg.trials).into_par_iter().map(|t| walk_trial(&mut trial_rng(cfg.seed, t), d, &cfg)).collect();
            collect(property, cfg, results)
        }
        Property::Compose => {
            let results = (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(cfg.seed, t);
                    let spec = small_lower_spec(&mut rng, cfg.max_crossings / 2);
                    let lower = random_lower_for(&mut rng, d, spec);
                    compose_trial(d, &lower)
                })
                .collect();
            collect(property, cfg, results)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn small(trials: usize) -> SuiteConfig {
        SuiteConfig { trials, seed: 3, walk_length: 20, ..SuiteConfig::default() }
    }

    #[test]
    fn every_property_passes_briefly() {
        for p in Property::ALL {
            let report = run_random(p, small(30));
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        assert_eq!(run_random(Property::Moves, small(10)), run_random(Property::Moves, small(10)));
    }

    #[test]
    fn property_names() {
        for p in Property::ALL {
            assert_eq!(p.name().parse::<Property>().unwrap(), p);
        }
        assert!("prop3".parse::<Property>().is_err());
    }

    #[test]
    fn fixtures_on_file_mode() {
        let d = fixtures::ex3();
        assert!(run_on(Property::Prop2, &d, small(1)).unwrap().passed());
        assert!(run_on(Property::Compose, &d, small(5)).unwrap().passed());
        assert!(run_on(Property::Vassiliev, &fixtures::sing2(), small(1)).unwrap().passed());
        assert!(run_on(Property::Vassiliev, &fixtures::sing(), small(1)).is_err());
        assert!(run_on(Property::Moves, &fixtures::sing(), small(1)).is_err());
    }

    #[test]
    fn failing_trials_are_reported() {
        let r = collect(Property::Moves, small(2), vec![Ok(Stats::new()), Err("boom".into())]);
        assert!(!r.passed());
        assert_eq!(r.failures, vec![TrialFailure { trial: 1, detail: "boom".into() }]);
        assert!(r.to_string().starts_with("FAIL moves"));
    }
}
