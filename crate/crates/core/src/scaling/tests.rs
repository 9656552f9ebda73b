use super::*;
use crate::expr::{Assumption, Jet, Param};
use crate::jet::Block;
use num_rational::BigRational;

fn v(s: &str) -> RatFunc {
    RatFunc::var(s)
}

fn int(n: i64) -> RatFunc {
    RatFunc::int(n)
}

fn half() -> RatFunc {
    RatFunc::rational(1, 2)
}

fn power_term(dep: &str, e: RatFunc) -> Expr {
    Expr::powe(Jet::base(dep), e.clone()).scale(&e.inv().unwrap())
}

fn poisson() -> Expr {
    &Expr::grad_dot("u", "u", "x").scale(&half()) - &power_term("u", &v("p") + &int(1))
}

fn sym_ctx(deps: &[&str]) -> JetContext {
    JetContext::new(vec![Block::symbolic("x", "n")], deps.iter().map(|d| d.to_string()).collect()).unwrap()
}

fn unit_x(deps: &[&str]) -> WeightAssignment {
    deps.iter().fold(WeightAssignment::default().block("x", Weight::Known(int(1))), |w, d| w.dep(d, Weight::Unknown))
}

fn n_params() -> Vec<Param> {
    vec![
        Param::new("n", Some(Assumption::gt(2))),
        Param::new("p", Some(Assumption::gt(0))),
        Param::new("q", Some(Assumption::gt(0))),
    ]
}

fn critical(l: &Expr, w: &WeightAssignment, ctx: &JetContext, targets: &[ExponentTarget]) -> CriticalityCondition {
    let sys = criticality_system(l, w, ctx).unwrap();
    match solve_criticality(&sys, targets, &n_params()).unwrap() {
        CriticalityOutcome::Critical(c) => c,
        CriticalityOutcome::Inconsistent => panic!("inconsistent"),
    }
}

#[test]
fn atom_weights() {
    let bw: BTreeMap<_, _> = [("x".to_string(), v("a")), ("y".to_string(), v("c"))].into();
    let dw: BTreeMap<_, _> = [("u".to_string(), v("b"))].into();
    let g = Product::atom(Atom::grad_dot("u", "u", "x"), RatFunc::one());
    assert_eq!(term_weight(&g, &bw, &dw).unwrap(), &(&v("b") * &int(2)) - &(&v("a") * &int(2)));
    let pe = Expr::powe(Jet::base("u"), &v("p") + &int(1));
    let (p, _) = pe.single_term().unwrap();
    assert_eq!(term_weight(p, &bw, &dw).unwrap(), &(&v("p") + &int(1)) * &v("b"));
    let al = v("alpha");
    let gr = Product::atom(Atom::BlockNorm("x".into()), &al * &int(2))
        .mul(&Product::atom(Atom::grad_dot("u", "u", "y"), RatFunc::one()));
    let expect = &(&(&(&al * &int(2)) * &v("a")) + &(&v("b") * &int(2))) - &(&v("c") * &int(2));
    assert_eq!(term_weight(&gr, &bw, &dw).unwrap(), expect);
    let f = Product::atom(Atom::Func(FnSym::new("F", vec!["u".into()])), RatFunc::one());
    assert!(matches!(term_weight(&f, &bw, &dw), Err(ScalingError::UnweightableAtom(_))));
}

#[test]
fn poisson_system_and_solution() {
    let sys = criticality_system(&poisson(), &unit_x(&["u"]), &sym_ctx(&["u"])).unwrap();
    let got: BTreeSet<RatFunc> = sys.equations.iter().map(|e| e.to_ratfunc()).collect();
    let b = v("b_u");
    let want: BTreeSet<RatFunc> =
        [&(&(&b * &int(2)) - &int(2)) + &v("n"), &(&(&v("p") + &int(1)) * &b) + &v("n")].into();
    assert_eq!(got, want);
    let c = critical(&poisson(), &unit_x(&["u"]), &sym_ctx(&["u"]), &[ExponentTarget::new("p")]);
    assert_eq!(c.solved_weights["b_u"], &(&int(2) - &v("n")) / &int(2));
    assert_eq!(c.constraints.len(), 1);
    assert_eq!(c.constraints[0].to_string(), "n*p - n - 2*p - 2 = 0");
    assert_eq!(*c.solved_exponent("p").unwrap(), &(&v("n") + &int(2)) / &(&v("n") - &int(2)));
    assert_eq!(c.constraints[0].display_form(), "p = (n + 2)/(n - 2)");
}

use std::collections::BTreeSet;

#[test]
fn lane_emden_hyperbola() {
    let l =
        &(&Expr::grad_dot("u", "v", "x") - &power_term("u", &v("q") + &int(1))) - &power_term("v", &v("p") + &int(1));
    let c = critical(
        &l,
        &unit_x(&["u", "v"]),
        &sym_ctx(&["u", "v"]),
        &[ExponentTarget::new("p"), ExponentTarget::new("q")],
    );
    assert_eq!(c.constraints.len(), 1);
    let h = c.constraints[0].hyperbola.as_ref().unwrap();
    assert_eq!(h.value, &(&v("n") - &int(2)) / &v("n"));
    assert_eq!(h.to_string(), "1/(p + 1) + 1/(q + 1) = (n - 2)/n");
}

#[test]
fn ode_class_exponent() {
    let ctx = JetContext::new(vec![Block::concrete("r", 1)], vec!["v".into()]).unwrap();
    let (al, be, ga) = (v("alpha"), v("beta"), v("gamma"));
    let r = |e: &RatFunc| Expr::atom_pow(Atom::indep("r", 1), e.clone());
    let vr = Jet::new("v", vec![crate::expr::Var::new("r", 1)]);
    let kin = &r(&al) * &Expr::powe(vr, &be + &int(2)).scale(&(&be + &int(2)).inv().unwrap());
    let pot = (&r(&ga) * &power_term("v", &v("p") + &int(1))).scale(&v("mu"));
    let l = &kin - &pot;
    let w = WeightAssignment::default().block("r", Weight::Known(int(1))).dep("v", Weight::Unknown);
    let sys = criticality_system(&l, &w, &ctx).unwrap();
    let params = vec![
        Param::new("alpha", None),
        Param::new("beta", Some(Assumption::gt(-1))),
        Param::new("gamma", None),
        Param::new("p", Some(Assumption::gt(0))),
    ];
    let CriticalityOutcome::Critical(c) = solve_criticality(&sys, &[ExponentTarget::shifted("p", 1)], &params).unwrap()
    else {
        panic!()
    };
    let want = &(&(&ga + &int(1)) * &(&be + &int(2))) / &(&(&al - &be) - &int(1));
    assert_eq!(c.constraints[0].solved.as_ref().unwrap().1, want);
    assert!(c.constraints[0].display_form().starts_with("p + 1 = "));
}

#[test]
fn potential_and_hamiltonian_functional_conditions() {
    let l = &(&Expr::grad_dot("u", "u", "x").scale(&half()) + &Expr::grad_dot("v", "v", "x").scale(&half()))
        - &Expr::func("F", &["u", "v"]);
    let c = critical(&l, &unit_x(&["u", "v"]), &sym_ctx(&["u", "v"]), &[]);
    assert!(c.constraints.is_empty());
    let f = &c.functional_conditions[0];
    assert_eq!(f.coefficients, vec![int(1), int(1)]);
    assert_eq!(f.degree, &(&v("n") * &int(2)) / &(&v("n") - &int(2)));

    let h = &Expr::grad_dot("u", "v", "x") - &Expr::func("H", &["u", "v"]);
    let c = critical(&h, &unit_x(&["u", "v"]), &sym_ctx(&["u", "v"]), &[]);
    assert_eq!(c.free_weights, vec!["b_v".to_string()]);
    let f = &c.functional_conditions[0];
    assert_eq!(f.coefficients, vec![v("a"), &int(1) - &v("a")]);
    assert_eq!(f.degree, &v("n") / &(&v("n") - &int(2)));
    assert_eq!(f.to_string(), "a*u*H_u - (a - 1)*v*H_v = n/(n - 2)*H");
}

#[test]
fn inconsistent_system_reported() {
    // two kinetic terms of different orders cannot scale together without a parameter
    let l = &Expr::grad_dot("u", "u", "x") + &Expr::grad_dot("u", "u", "x").pow_u32(2);
    let sys = criticality_system(&l, &unit_x(&["u"]), &sym_ctx(&["u"])).unwrap();
    assert_eq!(solve_criticality(&sys, &[], &n_params()).unwrap(), CriticalityOutcome::Inconsistent);
}

#[test]
fn permutation_invariant() {
    let sys = criticality_system(&poisson(), &unit_x(&["u"]), &sym_ctx(&["u"])).unwrap();
    let mut rev = sys.clone();
    rev.equations.reverse();
    let t = [ExponentTarget::new("p")];
    assert_eq!(solve_criticality(&sys, &t, &n_params()).unwrap(), solve_criticality(&rev, &t, &n_params()).unwrap());
}

#[test]
fn concrete_layer_matches_symbolic() {
    let sym = critical(&poisson(), &unit_x(&["u"]), &sym_ctx(&["u"]), &[ExponentTarget::new("p")]);
    for n in 3..=5u32 {
        let ctx = JetContext::new(vec![Block::concrete("x", n)], vec!["u".into()]).unwrap();
        let c = critical(&poisson(), &unit_x(&["u"]), &ctx, &[ExponentTarget::new("p")]);
        let at: BTreeMap<String, RatFunc> = [("n".to_string(), int(n as i64))].into();
        assert_eq!(c.solved_exponent("p"), sym.solved_exponent("p").unwrap().subst(&at).as_ref());
    }
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn reconstruction() {
    let s = [(r(3, 1), r(5, 1)), (r(4, 1), r(3, 1)), (r(5, 1), r(7, 3)), (r(6, 1), r(2, 1))];
    assert_eq!(reconstruct_rational(&s, 1, 1, "n").unwrap(), &(&v("n") + &int(2)) / &(&v("n") - &int(2)));
    let s = [(r(3, 1), r(1, 1)), (r(4, 1), r(1, 1)), (r(5, 1), r(1, 1))];
    assert_eq!(reconstruct_rational(&s, 1, 1, "n").unwrap(), int(1));
    let s = [(r(3, 1), r(6, 1)), (r(4, 1), r(4, 1)), (r(5, 1), r(10, 3)), (r(6, 1), r(3, 1))];
    assert_eq!(reconstruct_rational(&s, 1, 1, "n").unwrap(), &(&v("n") * &int(2)) / &(&v("n") - &int(2)));
    let bad = [(r(3, 1), r(1, 1)), (r(4, 1), r(2, 1)), (r(5, 1), r(7, 1)), (r(6, 1), r(1, 1)), (r(7, 1), r(9, 1))];
    assert_eq!(reconstruct_rational(&bad, 1, 1, "n"), Err(ScalingError::NoFit));
}
