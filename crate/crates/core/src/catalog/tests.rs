use std::collections::{BTreeMap, BTreeSet};

use super::*;
use crate::model::equal_up_to_sign;
use crate::scaling::CriticalityOutcome;

fn critical(e: &CatalogEntry) -> CriticalityCondition {
    let ctx = e.spec.ctx().unwrap();
    match e.spec.criticality(&ctx).unwrap() {
        CriticalityOutcome::Critical(c) => c,
        CriticalityOutcome::Inconsistent => panic!("{} inconsistent", e.name()),
    }
}

fn dims(e: &CatalogEntry) -> BTreeMap<String, u32> {
    e.spec.dimension_params().into_iter().map(|p| (p.clone(), e.instance[&p].as_i64().unwrap() as u32)).collect()
}

#[test]
fn names_are_unique_and_resolve() {
    let names: BTreeSet<_> = list_models().into_iter().collect();
    assert_eq!(names.len(), 12);
    for n in names {
        assert_eq!(model(n).unwrap().name(), n);
    }
    assert!(matches!(model("nope"), Err(CatalogError::UnknownModel(_))));
}

#[test]
fn symbolic_conditions_match_closed_forms() {
    for e in all().unwrap() {
        let got = critical(&e);
        assert!(got.equivalent(&e.expected), "{}: got {got:?}\nwant {:?}", e.name(), e.expected);
        if let Some(p) = &e.power {
            let got = critical(p);
            assert!(got.equivalent(&p.expected), "{}: got {got:?}\nwant {:?}", p.name(), p.expected);
        }
    }
}

#[test]
fn spot_values() {
    let value = |name: &str, param: &str| {
        let e = model(name).unwrap();
        let c = critical(&e);
        let inst: BTreeMap<String, RatFunc> =
            e.instance.iter().filter(|(k, _)| *k != param).map(|(k, v)| (k.clone(), v.clone())).collect();
        let v = c.solved_exponent(param).unwrap().subst(&inst).unwrap();
        (v, c.trace.subst(&inst).unwrap())
    };
    assert_eq!(value("poisson", "p").0, RatFunc::int(5));
    assert_eq!(value("polyharmonic_even", "p").0, RatFunc::int(9));
    assert_eq!(value("baouendi_grushin", "p"), (RatFunc::int(5), RatFunc::int(3)));
    assert_eq!(value("kohn_laplace", "p"), (RatFunc::int(3), RatFunc::int(4)));
    assert_eq!(value("p_laplace", "q").0, RatFunc::int(6));
}

#[test]
fn stored_systems_are_euler_lagrange() {
    for e in all().unwrap() {
        let m = e.spec.instantiate(&e.instance).unwrap();
        let ctx = m.concrete_ctx(&dims(&e)).unwrap();
        let euler = m.euler_system(&ctx).unwrap();
        for (d, eq) in &m.system {
            let (_, el) = euler.iter().find(|(x, _)| x == d).unwrap();
            assert!(equal_up_to_sign(el, eq, &ctx).unwrap(), "{} equation {d}", e.name());
        }
    }
}

#[test]
fn full_regression_passes() {
    for c in check_all(&all().unwrap()) {
        assert!(c.passed(), "{c:#?}");
    }
}
