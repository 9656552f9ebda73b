use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;
use crate::expr::RatFunc;
use crate::jet::{self, Block, JetContext};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ctx(n: u32) -> JetContext {
    JetContext::new(vec![Block::concrete("x", n)], vec!["u".into()]).unwrap()
}

fn x(i: u32) -> Var {
    Var::new("x", i)
}

fn point(p: Poly, at: &[i64]) -> JetPoint {
    JetPoint {
        function: TestFunction::new([("u".to_string(), p)].into()),
        coords: at.iter().enumerate().map(|(i, v)| (x(i as u32 + 1), q(*v, 1))).collect(),
    }
}

#[test]
fn square_jets() {
    let x1 = TestFunction::variable(&x(1));
    let pt = point(x1.mul(&x1), &[1, 0, 0]);
    let jets = pt.jets(&ctx(3), 2).unwrap();
    assert_eq!(jets[&Jet::base("u")], q(1, 1));
    assert_eq!(jets[&Jet::new("u", vec![x(1)])], q(2, 1));
    assert_eq!(jets[&Jet::new("u", vec![x(1), x(1)])], q(2, 1));
    assert!(jets.iter().filter(|(j, _)| j.idx().iter().any(|v| v.index != 1)).all(|(_, v)| v.is_zero()));
}

#[test]
fn deterministic_jets() {
    let c = ctx(2);
    assert_eq!(random_jet(9, &c, 3, 3).unwrap(), random_jet(9, &c, 3, 3).unwrap());
    assert_ne!(random_jet(9, &c, 3, 3).unwrap(), random_jet(10, &c, 3, 3).unwrap());
}

#[test]
fn odd_power_of_negative() {
    let pt = point(Poly::constant(q(-2, 1)), &[1]);
    let e = Expr::powo(Jet::base("u"), RatFunc::int(3));
    assert_eq!(evaluate(&e, &pt, &BTreeMap::new(), Mode::Exact, &ctx(1)).unwrap(), Value::Exact(q(-8, 1)));
    let e = Expr::powo(Jet::base("u"), RatFunc::rational(5, 2));
    assert!(matches!(evaluate(&e, &pt, &BTreeMap::new(), Mode::Exact, &ctx(1)), Err(NumError::Irrational(_))));
    let f = evaluate(&e, &pt, &BTreeMap::new(), Mode::Float, &ctx(1)).unwrap().to_f64();
    assert!((f + 2f64.powf(2.5)).abs() < 1e-12);
}

#[test]
fn exact_roots_and_params() {
    let pt = point(Poly::constant(q(9, 4)), &[1]);
    let e = Expr::powe(Jet::base("u"), RatFunc::var("s"));
    let params = [("s".to_string(), q(1, 2))].into();
    assert_eq!(evaluate(&e, &pt, &params, Mode::Exact, &ctx(1)).unwrap(), Value::Exact(q(3, 2)));
    assert_eq!(evaluate(&e, &pt, &BTreeMap::new(), Mode::Exact, &ctx(1)), Err(NumError::UnresolvedParam("s".into())));
}

#[test]
fn jets_agree_with_total_derivatives() {
    let c = ctx(3);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pt = random_point(&mut rng, &c, 3).unwrap();
    let u = Expr::dep("u");
    let mut e = u.clone();
    for v in [x(1), x(2), x(2)] {
        e = jet::total_derivative(&e, &v, &c).unwrap();
        let direct = evaluate(&e, &pt, &BTreeMap::new(), Mode::Exact, &c).unwrap();
        let j = e.single_term().and_then(|(p, _)| p.factors().next().map(|(a, _)| a.clone())).unwrap();
        let Atom::Jet(j) = j else { panic!() };
        assert_eq!(direct, Value::Exact(pt.jet(&j)));
    }
}

#[test]
fn contracted_atoms_match_expansion() {
    let c =
        JetContext::new(vec![Block::concrete("x", 2), Block::concrete("y", 2)], vec!["u".into(), "v".into()]).unwrap();
    let e = &(&Expr::grad_dot("u", "v", "x") * &Expr::block_norm("y").pow_u32(3))
        + &Expr::atom(Atom::CoordDot { coord: "x".into(), dep: "u".into(), grad: "y".into() });
    let expanded = c.expand(&e).unwrap();
    let r = check_identity(&e, &expanded, &c, &CheckOptions { trials: 20, seed: 1, ..Default::default() }).unwrap();
    assert!(r.passed(), "{r:?}");
    assert!(!r.exact);
}

#[test]
fn noether_identity_and_negative_case() {
    let c = ctx(3);
    let l = &Expr::grad_dot("u", "u", "x").scale(&RatFunc::rational(1, 2))
        - &Expr::powe(Jet::base("u"), RatFunc::int(6)).scale(&RatFunc::rational(1, 6));
    let bw: BTreeMap<_, _> = [("x".to_string(), RatFunc::one())].into();
    let dw: BTreeMap<_, _> = [("u".to_string(), RatFunc::rational(-1, 2))].into();
    let g = jet::Generator::dilation(&c, &bw, &dw).unwrap();
    let lhs = &jet::apply_generator(&g, &l, &c).unwrap() + &c.expand(&l).unwrap().scale(&RatFunc::int(3));
    let opts = CheckOptions { trials: 30, seed: 7, ..Default::default() };
    let r = check_identity(&lhs, &Expr::zero(), &c, &opts).unwrap();
    assert!(r.passed() && r.exact && r.max_relative_error == 0.0, "{r:?}");

    let p = RatFunc::var("p");
    let lp = &Expr::grad_dot("u", "u", "x").scale(&RatFunc::rational(1, 2))
        - &Expr::powe(Jet::base("u"), &p + &RatFunc::one()).scale(&(&p + &RatFunc::one()).inv().unwrap());
    let lhs = &jet::apply_generator(&g, &lp, &c).unwrap() + &c.expand(&lp).unwrap().scale(&RatFunc::int(3));
    let mut opts = opts;
    opts.params.insert("p".into(), q(51, 10));
    let r = check_identity(&lhs, &Expr::zero(), &c, &opts).unwrap();
    assert_eq!(r.failures, 30);
    opts.params.insert("p".into(), q(5, 1));
    assert!(check_identity(&lhs, &Expr::zero(), &c, &opts).unwrap().passed());
}

#[test]
fn function_bindings() {
    let c = ctx(1);
    let f = Expr::func("F", &["u"]);
    let lhs = jet::total_derivative(&f, &x(1), &c).unwrap();
    let u3 = Expr::dep("u").pow_u32(3);
    let rhs = &(&Expr::dep("u").pow_u32(2) * &Expr::jet("u", vec![x(1)])).scale(&RatFunc::int(3));
    let opts = CheckOptions { trials: 10, seed: 3, functions: [("F".to_string(), u3)].into(), ..Default::default() };
    assert!(check_identity(&lhs, &rhs, &c, &opts).unwrap().passed());
    let seq = check_identity(&lhs, &rhs, &c, &opts).unwrap();
    assert_eq!(seq, check_identity(&lhs, &rhs, &c, &opts).unwrap());
}
