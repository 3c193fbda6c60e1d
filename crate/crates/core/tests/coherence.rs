mod common;

use witnesskit::coherence::{audit_laws, find_law, non_laws, AuditError, Outcome};
use witnesskit::{audit, audit_all, builtin_laws, compile, BackendConfig, GenKind, LawSpec, Witness};

use common::*;

fn graded(n: u32) -> BackendConfig {
    BackendConfig::graded(n).unwrap()
}

#[test]
fn pentagon_on_single_points_is_identity() {
    let laws = builtin_laws();
    let pentagon = find_law(&laws, "pentagon-times").unwrap();
    let env = env_of(&[
        ("A", &[("a", 0)]),
        ("B", &[("b", 0)]),
        ("C", &[("c", 0)]),
        ("D", &[("d", 0)]),
    ]);
    let (lhs, rhs) = pentagon.evaluate(&env, &graded(1)).unwrap();
    assert!(lhs.is_identity() && rhs.is_identity());
    assert!(audit(pentagon, &graded(1), 20, 1, 1).unwrap().passed());
}

#[test]
fn over_hexagon_passes_at_order_four() {
    let laws = builtin_laws();
    let hexagon = find_law(&laws, "hexagon-times-over").unwrap();
    assert!(audit(hexagon, &graded(4), 100, 42, 3).unwrap().passed());
}

#[test]
fn registry_passes_symmetric_and_braided() {
    for cfg in [BackendConfig::finset(), graded(1), graded(5)] {
        for report in audit_all(&cfg, 100, 3, 3).unwrap() {
            assert!(report.passed(), "{}", report.to_json());
        }
    }
}

#[test]
fn empty_registry_gives_empty_report() {
    assert!(audit_laws(&[], &graded(4), 10, 0, 3).unwrap().is_empty());
}

#[test]
fn double_over_braiding_is_not_identity_when_braided() {
    let probes = non_laws();
    let probe = find_law(&probes, "braid-over-twice").unwrap();
    let report = audit(probe, &graded(4), 100, 42, 3).unwrap();
    let Outcome::Counterexample(cx) = &report.outcome else {
        panic!("no counterexample found");
    };
    // The counterexample reproduces when recompiled from its own data.
    let instance = probe.instantiate(&cx.instance);
    let (lhs, rhs) = instance.evaluate(&cx.env, &graded(4)).unwrap();
    assert_eq!((&lhs, &rhs), (&cx.lhs, &cx.rhs));
    assert_ne!(lhs, rhs);
    assert!(audit(probe, &graded(1), 100, 42, 3).unwrap().passed());
    assert!(audit(probe, &graded(2), 100, 42, 3).unwrap().passed());
}

#[test]
fn audits_are_reproducible() {
    let laws = builtin_laws();
    let first: Vec<String> = audit_laws(&laws, &graded(4), 30, 9, 3)
        .unwrap()
        .iter()
        .map(|r| r.to_json().to_string())
        .collect();
    let second: Vec<String> = audit_laws(&laws, &graded(4), 30, 9, 3)
        .unwrap()
        .iter()
        .map(|r| r.to_json().to_string())
        .collect();
    assert_eq!(first, second);
    let names: Vec<&str> = laws.iter().map(|l| l.name.as_str()).collect();
    let reported: Vec<String> = first
        .iter()
        .map(|j| {
            serde_json::from_str::<serde_json::Value>(j).unwrap()["law"]
                .as_str()
                .unwrap()
                .to_string()
        })
        .collect();
    assert_eq!(reported, names);
}

#[test]
fn ill_typed_and_mismatched_laws_are_rejected() {
    let (a, b) = (v("A"), v("B"));
    let bad = LawSpec::new(
        "bad",
        gen(GenKind::BPlus, &[&a, &b]).then(gen(GenKind::BPlus, &[&a, &b])),
        Witness::id(s(&a, &b)),
    );
    assert!(matches!(bad.typecheck(), Err(AuditError::IllTyped { .. })));
    let sides = LawSpec::new("sides", gen(GenKind::BPlus, &[&a, &b]), Witness::id(s(&a, &b)));
    assert!(matches!(sides.typecheck(), Err(AuditError::SidesDiffer { .. })));
    assert!(matches!(
        audit(&sides, &graded(1), 10, 0, 2),
        Err(AuditError::SidesDiffer { .. })
    ));
}

#[test]
fn zero_trials_is_an_error() {
    let laws = builtin_laws();
    assert!(matches!(
        audit(&laws[0], &graded(1), 0, 0, 2),
        Err(AuditError::NoTrials)
    ));
}

#[test]
fn registry_covers_the_expected_families() {
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
    ] {
        assert!(find_law(&laws, name).is_some(), "{name}");
    }
    for kind in GenKind::ALL {
        assert!(
            find_law(&laws, &format!("naturality-{}", kind.name())).is_some(),
            "{kind:?}"
        );
    }
    for law in &laws {
        law.typecheck().unwrap_or_else(|e| panic!("{}: {e}", law.name));
    }
}

#[test]
fn laws_hold_on_single_atom_environments() {
    let laws = builtin_laws();
    for law in &laws {
        let mut env = witnesskit::Env::new();
        for var in &law.params {
            env.bind(var.clone(), vec![witnesskit::Atom::new(var.to_lowercase(), 1)])
                .unwrap();
        }
        let (l, r) = law.evaluate(&env, &graded(4)).unwrap();
        assert_eq!(l, r, "{}", law.name);
        assert_eq!(compile(&law.lhs, &env, &graded(4)).unwrap(), l);
    }
}
