//! Coherence laws as data, and an auditor that checks them by compiling both
//! sides exactly over randomly drawn environments.
//!
//! The registry covers the monoidal laws for `+` and `*` (pentagons,
//! triangles), the braided hexagons for `*` in both crossing directions,
//! symmetry of `+`, a set of distributivity and absorption conditions in the
//! braided setting, and naturality of every generator. It is a representative
//! subset, not a complete axiomatization; more laws are plain data.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::backend::{compile, BackendConfig, CompileError, ConcreteMorphism};
use crate::shape::{Atom, Env, Shape};
use crate::witness::{naturality_square, GenKind, MorType, TypeError, Witness};

/// A named equation between two witness schemas over shape variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawSpec {
    pub name: String,
    pub params: Vec<String>,
    pub lhs: Witness,
    pub rhs: Witness,
}

impl LawSpec {
    /// Parameters are the variables occurring in either side.
    pub fn new(name: impl Into<String>, lhs: Witness, rhs: Witness) -> LawSpec {
        let mut vars = lhs.free_vars();
        vars.extend(rhs.free_vars());
        LawSpec {
            name: name.into(),
            params: vars.into_iter().collect(),
            lhs,
            rhs,
        }
    }

    /// Common type of both sides, or the reason there is none.
    pub fn typecheck(&self) -> Result<MorType, AuditError> {
        let ill = |error| AuditError::IllTyped {
            law: self.name.clone(),
            error,
        };
        let lt = self.lhs.typecheck().map_err(ill)?;
        let rt = self.rhs.typecheck().map_err(ill)?;
        if lt != rt {
            return Err(AuditError::SidesDiffer {
                law: self.name.clone(),
                lhs: lt,
                rhs: rt,
            });
        }
        Ok(lt)
    }

    pub fn instantiate(&self, instance: &BTreeMap<String, Shape>) -> LawSpec {
        LawSpec::new(
            self.name.clone(),
            self.lhs.substitute(instance),
            self.rhs.substitute(instance),
        )
    }

    /// Compiles both sides at `env`.
    pub fn evaluate(&self, env: &Env, cfg: &BackendConfig) -> Result<(ConcreteMorphism, ConcreteMorphism), AuditError> {
        self.typecheck()?;
        let eval = |w: &Witness| {
            compile(w, env, cfg).map_err(|error| AuditError::Compile {
                law: self.name.clone(),
                error,
            })
        };
        Ok((eval(&self.lhs)?, eval(&self.rhs)?))
    }
}

#[derive(Debug, Error)]
pub enum AuditError {
    #[error("law '{law}' does not typecheck: {error}")]
    IllTyped { law: String, error: TypeError },
    #[error("law '{law}' relates different types: {lhs} vs {rhs}")]
    SidesDiffer { law: String, lhs: MorType, rhs: MorType },
    #[error("law '{law}' failed to compile: {error}")]
    Compile { law: String, error: CompileError },
    #[error("an audit needs at least one trial")]
    NoTrials,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub trial: usize,
    /// Shapes substituted for the law's parameters.
    pub instance: BTreeMap<String, Shape>,
    pub env: Env,
    pub lhs: ConcreteMorphism,
    pub rhs: ConcreteMorphism,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Counterexample(Box<Counterexample>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub law: String,
    pub trials: usize,
    pub seed: u64,
    pub outcome: Outcome,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    /// One JSON-lines record; keys come out sorted.
    pub fn to_json(&self) -> Value {
        let mut obj = json!({
            "law": self.law,
            "trials": self.trials,
            "seed": self.seed,
        });
        match &self.outcome {
            Outcome::Pass => obj["outcome"] = json!("pass"),
            Outcome::Counterexample(cx) => {
                obj["outcome"] = json!("counterexample");
                obj["trial"] = json!(cx.trial);
                obj["instance"] = cx
                    .instance
                    .iter()
                    .map(|(k, v)| (k.clone(), Value::String(v.to_string())))
                    .collect::<serde_json::Map<_, _>>()
                    .into();
                obj["env"] = cx.env.to_json();
                obj["lhs"] = serde_json::to_value(cx.lhs.to_json()).expect("plain data");
                obj["rhs"] = serde_json::to_value(cx.rhs.to_json()).expect("plain data");
            }
        }
        obj
    }
}

/// Audits `law` over `trials` random instances.
///
/// Each trial substitutes a shape for every parameter (usually the parameter
/// itself, sometimes `0`, `I`, a repeat of an earlier parameter, or a small
/// sum or product of fresh variables), then binds every remaining variable
/// to between 0 and `max_dim` atoms with degrees in `[-2, 2]`. The outcome is
/// deterministic in `(law, cfg, trials, seed, max_dim)`.
pub fn audit(
    law: &LawSpec,
    cfg: &BackendConfig,
    trials: usize,
    seed: u64,
    max_dim: usize,
) -> Result<AuditReport, AuditError> {
    if trials == 0 {
        return Err(AuditError::NoTrials);
    }
    law.typecheck()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let instance = sample_instance(&law.params, &mut rng);
        let concrete = law.instantiate(&instance);
        let env = sample_env(concrete.params.iter().map(String::as_str), max_dim, &mut rng);
        let (lhs, rhs) = concrete.evaluate(&env, cfg)?;
        if lhs != rhs {
            return Ok(AuditReport {
                law: law.name.clone(),
                trials,
                seed,
                outcome: Outcome::Counterexample(Box::new(Counterexample {
                    trial,
                    instance,
                    env,
                    lhs,
                    rhs,
                })),
            });
        }
    }
    Ok(AuditReport {
        law: law.name.clone(),
        trials,
        seed,
        outcome: Outcome::Pass,
    })
}

/// Audits every law in order; laws run in parallel, reports keep registry order.
pub fn audit_laws(
    laws: &[LawSpec],
    cfg: &BackendConfig,
    trials: usize,
    seed: u64,
    max_dim: usize,
) -> Result<Vec<AuditReport>, AuditError> {
    laws.par_iter()
        .map(|law| audit(law, cfg, trials, seed, max_dim))
        .collect()
}

pub fn audit_all(
    cfg: &BackendConfig,
    trials: usize,
    seed: u64,
    max_dim: usize,
) -> Result<Vec<AuditReport>, AuditError> {
    audit_laws(&builtin_laws(), cfg, trials, seed, max_dim)
}

fn sample_instance(params: &[String], rng: &mut ChaCha8Rng) -> BTreeMap<String, Shape> {
    let mut instance: BTreeMap<String, Shape> = BTreeMap::new();
    for (i, param) in params.iter().enumerate() {
        let fresh = |suffix: &str| Shape::var(format!("{param}{suffix}"));
        let roll = rng.random_range(0..100);
        let shape = match roll {
            0..=59 => fresh(""),
            60..=74 if i > 0 => instance[&params[rng.random_range(0..i)]].clone(),
            60..=74 => fresh(""),
            75..=81 => Shape::Zero,
            82..=88 => Shape::One,
            89..=94 => Shape::sum(fresh("_l"), fresh("_r")),
            _ => Shape::prod(fresh("_l"), fresh("_r")),
        };
        instance.insert(param.clone(), shape);
    }
    instance
}

fn sample_env<'a>(vars: impl Iterator<Item = &'a str>, max_dim: usize, rng: &mut ChaCha8Rng) -> Env {
    let mut env = Env::new();
    for var in vars {
        let size = rng.random_range(0..=max_dim);
        let atoms = (0..size)
            .map(|i| Atom::new(format!("{}{i}", var.to_lowercase()), rng.random_range(-2..=2)))
            .collect();
        env.bind(var, atoms).expect("generated labels are distinct");
    }
    env
}

fn v(name: &str) -> Shape {
    Shape::var(name)
}

fn s(a: &Shape, b: &Shape) -> Shape {
    Shape::sum(a.clone(), b.clone())
}

fn p(a: &Shape, b: &Shape) -> Shape {
    Shape::prod(a.clone(), b.clone())
}

fn id(a: &Shape) -> Witness {
    Witness::id(a.clone())
}

fn g<const N: usize>(kind: GenKind, args: [&Shape; N]) -> Witness {
    Witness::gen(kind, args.into_iter().cloned())
}

fn sm(f: Witness, g: Witness) -> Witness {
    Witness::sum_m(f, g)
}

fn pm(f: Witness, g: Witness) -> Witness {
    Witness::prod_m(f, g)
}

fn seq<const N: usize>(steps: [Witness; N]) -> Witness {
    Witness::seq(steps)
}

/// The builtin registry, in audit order.
pub fn builtin_laws() -> Vec<LawSpec> {
    use GenKind::*;
    let (a, b, c, d) = (&v("A"), &v("B"), &v("C"), &v("D"));
    let (zero, one) = (&Shape::Zero, &Shape::One);
    let mut laws = Vec::new();
    let mut law = |name: &str, lhs: Witness, rhs: Witness| laws.push(LawSpec::new(name, lhs, rhs));

    // Monoidal structure of each operation.
    law(
        "pentagon-times",
        seq([
            pm(g(ATimes, [a, b, c]), id(d)),
            g(ATimes, [a, &p(b, c), d]),
            pm(id(a), g(ATimes, [b, c, d])),
        ]),
        seq([g(ATimes, [&p(a, b), c, d]), g(ATimes, [a, b, &p(c, d)])]),
    );
    law(
        "pentagon-plus",
        seq([
            sm(g(APlus, [a, b, c]), id(d)),
            g(APlus, [a, &s(b, c), d]),
            sm(id(a), g(APlus, [b, c, d])),
        ]),
        seq([g(APlus, [&s(a, b), c, d]), g(APlus, [a, b, &s(c, d)])]),
    );
    law(
        "triangle-times",
        seq([g(ATimes, [a, one, b]), pm(id(a), g(LTimes, [b]))]),
        pm(g(RTimes, [a]), id(b)),
    );
    law(
        "triangle-plus",
        seq([g(APlus, [a, zero, b]), sm(id(a), g(LPlus, [b]))]),
        sm(g(RPlus, [a]), id(b)),
    );
    law("unit-agreement-times", g(LTimes, [one]), g(RTimes, [one]));
    law("unit-agreement-plus", g(LPlus, [zero]), g(RPlus, [zero]));

    // Hexagons. `*` has two braidings; each must satisfy both hexagons.
    for (tag, braid) in [("over", BTimesOver), ("under", BTimesUnder)] {
        law(
            &format!("hexagon-times-{tag}"),
            seq([g(ATimes, [a, b, c]), g(braid, [a, &p(b, c)]), g(ATimes, [b, c, a])]),
            seq([
                pm(g(braid, [a, b]), id(c)),
                g(ATimes, [b, a, c]),
                pm(id(b), g(braid, [a, c])),
            ]),
        );
        law(
            &format!("hexagon-times-{tag}-inv"),
            seq([
                g(ATimesInv, [a, b, c]),
                g(braid, [&p(a, b), c]),
                g(ATimesInv, [c, a, b]),
            ]),
            seq([
                pm(id(a), g(braid, [b, c])),
                g(ATimesInv, [a, c, b]),
                pm(g(braid, [a, c]), id(b)),
            ]),
        );
    }
    law(
        "hexagon-plus",
        seq([g(APlus, [a, b, c]), g(BPlus, [a, &s(b, c)]), g(APlus, [b, c, a])]),
        seq([
            sm(g(BPlus, [a, b]), id(c)),
            g(APlus, [b, a, c]),
            sm(id(b), g(BPlus, [a, c])),
        ]),
    );
    law(
        "hexagon-plus-inv",
        seq([g(APlusInv, [a, b, c]), g(BPlus, [&s(a, b), c]), g(APlusInv, [c, a, b])]),
        seq([
            sm(id(a), g(BPlus, [b, c])),
            g(APlusInv, [a, c, b]),
            sm(g(BPlus, [a, c]), id(b)),
        ]),
    );
    law("symmetry-plus", seq([g(BPlus, [a, b]), g(BPlus, [b, a])]), id(&s(a, b)));

    // Distributivity against the additive braiding and associator.
    law(
        "dist-braid",
        seq([g(DistL, [a, b, c]), g(BPlus, [&p(a, b), &p(a, c)])]),
        seq([pm(id(a), g(BPlus, [b, c])), g(DistL, [a, c, b])]),
    );
    law(
        "dist-braid-right",
        seq([g(DistR, [a, b, c]), g(BPlus, [&p(a, c), &p(b, c)])]),
        seq([pm(g(BPlus, [a, b]), id(c)), g(DistR, [b, a, c])]),
    );
    law(
        "dist-assoc-plus",
        seq([g(DistL, [a, &s(b, c), d]), sm(g(DistL, [a, b, c]), id(&p(a, d)))]),
        seq([
            pm(id(a), g(APlus, [b, c, d])),
            g(DistL, [a, b, &s(c, d)]),
            sm(id(&p(a, b)), g(DistL, [a, c, d])),
            g(APlusInv, [&p(a, b), &p(a, c), &p(a, d)]),
        ]),
    );
    law(
        "dist-assoc-plus-right",
        seq([
            pm(g(APlus, [a, b, c]), id(d)),
            g(DistR, [a, &s(b, c), d]),
            sm(id(&p(a, d)), g(DistR, [b, c, d])),
            g(APlusInv, [&p(a, d), &p(b, d), &p(c, d)]),
        ]),
        seq([g(DistR, [&s(a, b), c, d]), sm(g(DistR, [a, b, d]), id(&p(c, d)))]),
    );
    law(
        "dist-assoc-times",
        g(DistL, [&p(a, b), c, d]),
        seq([
            g(ATimes, [a, b, &s(c, d)]),
            pm(id(a), g(DistL, [b, c, d])),
            g(DistL, [a, &p(b, c), &p(b, d)]),
            sm(g(ATimesInv, [a, b, c]), g(ATimesInv, [a, b, d])),
        ]),
    );
    law(
        "dist-assoc-times-right",
        seq([
            g(DistR, [a, b, &p(c, d)]),
            sm(g(ATimesInv, [a, c, d]), g(ATimesInv, [b, c, d])),
        ]),
        seq([
            g(ATimesInv, [&s(a, b), c, d]),
            pm(g(DistR, [a, b, c]), id(d)),
            g(DistR, [&p(a, c), &p(b, c), d]),
        ]),
    );
    {
        // (A+B)*(C+D): distributing on the right first lands on
        // (AC+AD)+(BC+BD); on the left first, (AC+BC)+(AD+BD). They agree
        // after exchanging the middle summands.
        let (ac, ad, bc, bd) = (&p(a, c), &p(a, d), &p(b, c), &p(b, d));
        let middle_swap = seq([
            g(APlus, [ac, bc, &s(ad, bd)]),
            sm(id(ac), g(APlusInv, [bc, ad, bd])),
            sm(id(ac), sm(g(BPlus, [bc, ad]), id(bd))),
            sm(id(ac), g(APlus, [ad, bc, bd])),
            g(APlusInv, [ac, ad, &s(bc, bd)]),
        ]);
        law(
            "dist-lr-interchange",
            seq([g(DistR, [a, b, &s(c, d)]), sm(g(DistL, [a, c, d]), g(DistL, [b, c, d]))]),
            seq([
                g(DistL, [&s(a, b), c, d]),
                sm(g(DistR, [a, b, c]), g(DistR, [a, b, d])),
                middle_swap,
            ]),
        );
    }
    // Left and right distributors are related through either tensor braiding.
    for (tag, braid) in [("over", BTimesOver), ("under", BTimesUnder)] {
        law(
            &format!("dist-times-braid-{tag}"),
            seq([g(DistL, [a, b, c]), sm(g(braid, [a, b]), g(braid, [a, c]))]),
            seq([g(braid, [a, &s(b, c)]), g(DistR, [b, c, a])]),
        );
    }
    law(
        "dist-unit",
        seq([g(DistL, [one, b, c]), sm(g(LTimes, [b]), g(LTimes, [c]))]),
        g(LTimes, [&s(b, c)]),
    );
    law(
        "dist-unit-right",
        seq([g(DistR, [a, b, one]), sm(g(RTimes, [a]), g(RTimes, [b]))]),
        g(RTimes, [&s(a, b)]),
    );

    // Absorption by zero.
    law(
        "zero-absorb",
        pm(id(a), g(LPlus, [b])),
        seq([
            g(DistL, [a, zero, b]),
            sm(g(ZeroR, [a]), id(&p(a, b))),
            g(LPlus, [&p(a, b)]),
        ]),
    );
    law(
        "zero-absorb-right",
        pm(g(LPlus, [a]), id(b)),
        seq([
            g(DistR, [zero, a, b]),
            sm(g(ZeroL, [b]), id(&p(a, b))),
            g(LPlus, [&p(a, b)]),
        ]),
    );
    law("zero-unit", g(ZeroL, [one]), g(RTimes, [zero]));
    law("zero-zero", g(ZeroL, [zero]), g(ZeroR, [zero]));
    law(
        "zero-assoc",
        seq([g(ATimes, [zero, a, b]), g(ZeroL, [&p(a, b)])]),
        seq([pm(g(ZeroL, [a]), id(b)), g(ZeroL, [b])]),
    );

    // Naturality of every generator, against a rotating mix of structural
    // arguments including non-invertible injections.
    for (k, kind) in GenKind::ALL.into_iter().enumerate() {
        let args: Vec<Witness> = (0..kind.arity()).map(|slot| naturality_arg(k + slot, slot)).collect();
        let (lhs, rhs) = naturality_square(kind, &args).expect("pool arguments typecheck");
        law(&format!("naturality-{}", kind.name()), lhs, rhs);
    }

    laws
}

fn naturality_arg(pick: usize, slot: usize) -> Witness {
    use GenKind::*;
    let x = &v(&format!("X{slot}"));
    let y = &v(&format!("Y{slot}"));
    match pick % 6 {
        0 => g(BPlus, [x, y]),
        1 => g(Inl, [x, y]),
        2 => g(BTimesUnder, [x, y]),
        3 => g(LTimesInv, [x]),
        4 => g(Inr, [x, y]),
        _ => g(BTimesOver, [x, y]),
    }
}

/// Equations that are well typed but do not hold once the tensor braiding is
/// genuinely braided. Used to show the auditor can fail.
pub fn non_laws() -> Vec<LawSpec> {
    use GenKind::*;
    let (a, b) = (&v("A"), &v("B"));
    vec![
        LawSpec::new(
            "braid-over-twice",
            seq([g(BTimesOver, [a, b]), g(BTimesOver, [b, a])]),
            id(&p(a, b)),
        ),
        LawSpec::new("braid-over-is-under", g(BTimesOver, [a, b]), g(BTimesUnder, [a, b])),
    ]
}

pub fn find_law<'a>(laws: &'a [LawSpec], name: &str) -> Option<&'a LawSpec> {
    laws.iter().find(|l| l.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::Fault;

    fn law(name: &str) -> LawSpec {
        find_law(&builtin_laws(), name).unwrap().clone()
    }

    fn uniform_env(vars: &[&str], sizes: &[usize]) -> Env {
        let mut env = Env::new();
        for (var, &n) in vars.iter().zip(sizes) {
            env.bind(*var, (0..n).map(|i| Atom::new(format!("e{i}"), 1)).collect())
                .unwrap();
        }
        env
    }

    #[test]
    fn registry_contains_the_named_laws() {
        let laws = builtin_laws();
        for name in [
            "pentagon-times",
            "pentagon-plus",
            "triangle-times",
            "triangle-plus",
            "hexagon-times-over",
            "hexagon-times-under",
            "hexagon-plus",
            "symmetry-plus",
            "dist-braid",
            "dist-assoc-plus",
            "dist-lr-interchange",
            "zero-absorb",
            "naturality-bT_over",
            "naturality-inl",
        ] {
            assert!(find_law(&laws, name).is_some(), "{name}");
        }
        let mut names: Vec<_> = laws.iter().map(|l| l.name.as_str()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), laws.len(), "law names are unique");
    }

    #[test]
    fn every_law_typechecks_at_distinct_variables() {
        for law in builtin_laws().iter().chain(&non_laws()) {
            law.typecheck().unwrap_or_else(|e| panic!("{e}"));
        }
    }

    #[test]
    fn pentagon_at_unit_dimensions_is_the_identity() {
        let law = law("pentagon-times");
        let env = uniform_env(&["A", "B", "C", "D"], &[1, 1, 1, 1]);
        let (l, r) = law.evaluate(&env, &BackendConfig::finset()).unwrap();
        assert!(l.is_identity() && r.is_identity());
    }

    #[test]
    fn swapped_left_distributor_breaks_associativity_law() {
        let law = law("dist-assoc-plus");
        let env = uniform_env(&["A", "B", "C", "D"], &[2, 1, 1, 1]);
        let (l, r) = law.evaluate(&env, &BackendConfig::finset()).unwrap();
        assert_eq!(l, r);
        let faulty = BackendConfig::finset().with_fault(Fault::DistLBlockSwap);
        let (l, r) = law.evaluate(&env, &faulty).unwrap();
        assert_ne!(l, r);
    }

    #[test]
    fn hexagon_passes_at_order_four() {
        let cfg = BackendConfig::graded(4).unwrap();
        let report = audit(&law("hexagon-times-over"), &cfg, 100, 42, 3).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn over_braiding_twice_is_caught() {
        let probes = non_laws();
        let probe = find_law(&probes, "braid-over-twice").unwrap();
        let cfg = BackendConfig::graded(4).unwrap();
        let report = audit(probe, &cfg, 100, 42, 3).unwrap();
        let Outcome::Counterexample(cx) = &report.outcome else {
            panic!("expected a counterexample");
        };
        assert_ne!(cx.lhs, cx.rhs);
        let json = report.to_json();
        assert_eq!(json["outcome"], "counterexample");
        assert!(json["env"].is_object() && json["lhs"]["entries"].is_array());

        // With trivial phases the same equation holds.
        assert!(audit(probe, &BackendConfig::finset(), 100, 42, 3).unwrap().passed());
    }

    #[test]
    fn audits_are_deterministic() {
        let cfg = BackendConfig::graded(5).unwrap();
        let probe = &non_laws()[0];
        let a = audit(probe, &cfg, 50, 9, 4).unwrap();
        let b = audit(probe, &cfg, 50, 9, 4).unwrap();
        assert_eq!(a, b);
        let laws = builtin_laws();
        assert_eq!(
            audit_laws(&laws[..6], &cfg, 10, 3, 3).unwrap(),
            audit_laws(&laws[..6], &cfg, 10, 3, 3).unwrap()
        );
    }

    #[test]
    fn empty_registry_gives_empty_report() {
        assert!(audit_laws(&[], &BackendConfig::finset(), 10, 0, 3).unwrap().is_empty());
    }

    #[test]
    fn zero_trials_is_an_error() {
        assert!(matches!(
            audit(&law("symmetry-plus"), &BackendConfig::finset(), 0, 0, 3),
            Err(AuditError::NoTrials)
        ));
    }

    #[test]
    fn ill_typed_law_is_reported() {
        let bad = LawSpec::new("bad", Witness::id(v("A")), Witness::id(v("B")));
        assert!(matches!(
            audit(&bad, &BackendConfig::finset(), 1, 0, 1),
            Err(AuditError::SidesDiffer { .. })
        ));
        let worse = LawSpec::new(
            "worse",
            Witness::gen(GenKind::BPlus, [v("A"), v("B")]).then(Witness::id(v("A"))),
            Witness::id(v("A")),
        );
        assert!(matches!(worse.typecheck(), Err(AuditError::IllTyped { .. })));
    }

    #[test]
    fn pass_report_json() {
        let report = AuditReport {
            law: "x".into(),
            trials: 3,
            seed: 7,
            outcome: Outcome::Pass,
        };
        assert_eq!(
            report.to_json().to_string(),
            r#"{"law":"x","outcome":"pass","seed":7,"trials":3}"#
        );
    }
}
