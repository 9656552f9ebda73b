use std::collections::BTreeMap;

use super::*;
use crate::analysis::analyze;
use crate::catalog;
use crate::expr::RatFunc;

fn report(name: &str, values: &[(&str, i64)], pk: bool) -> Report {
    let e = catalog::model(name).unwrap();
    let v: BTreeMap<String, RatFunc> = values.iter().map(|(k, x)| (k.to_string(), RatFunc::int(*x))).collect();
    Report::new(&analyze(&e.spec, &v, pk).unwrap())
}

#[test]
fn poisson_text_and_json() {
    let r = report("poisson", &[], false);
    let t = r.text();
    assert!(t.contains("weights: u -> (2 - n)/2, x -> 1"), "{t}");
    assert!(t.contains("i.e. p = (n + 2)/(n - 2)"), "{t}");
    assert_eq!(r.constraints, vec!["n*p - n - 2*p - 2 = 0"]);
    let j = r.json();
    let keys = ["\"model\"", "\"dimensions\"", "\"weights\"", "\"constraints\"", "\"solved_exponents\"", "\"checks\""];
    let pos: Vec<usize> = keys.iter().map(|k| j.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{j}");
    assert_eq!(j, report("poisson", &[], false).json());
}

#[test]
fn hyperbolic_latex() {
    let r = report("hyperbolic_hamiltonian", &[], false);
    let l = r.latex();
    assert!(l.contains("a u H_u + (1 - a) v H_v &= \\frac{n + 1}{n - 1} H"), "{l}");
    assert_eq!(r.functional_conditions, vec!["a*u*H_u - (a - 1)*v*H_v = ((n + 1)/(n - 1))*H"]);
}

#[test]
fn lane_emden_hyperbola() {
    let r = report("lane_emden_system", &[], false);
    assert_eq!(r.solved_exponents["p, q"], "1/(p + 1) + 1/(q + 1) = (n - 2)/n");
    assert!(r.latex().contains("\\frac{1}{p + 1} + \\frac{1}{q + 1} &= \\frac{n - 2}{n}"));
}

#[test]
fn concrete_checks_and_pokhozhaev() {
    let r = report("poisson", &[("n", 3), ("p", 5)], true);
    assert_eq!(r.classification, "critical unconditionally");
    assert!(!r.checks.any_failed(), "{:?}", r.checks);
    assert!(r.checks.noether.to_string().starts_with("pass"));
    let p = r.pokhozhaev.unwrap();
    assert_eq!(p.interior, "0");
    assert_eq!(p.boundary_current.len(), 3);
}
