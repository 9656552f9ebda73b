use std::collections::BTreeMap;

use critsym::catalog;
use critsym::expr::{Expr, Jet, RatFunc, Var};
use critsym::scaling::CriticalityOutcome;

fn at(values: &[(&str, i64)]) -> BTreeMap<String, RatFunc> {
    values.iter().map(|(k, v)| (k.to_string(), RatFunc::int(*v))).collect()
}

#[test]
fn kohn_laplace_expands_term_by_term_at_n1() {
    let m = catalog::model("kohn_laplace").unwrap().spec.instantiate(&at(&[("n", 1)])).unwrap();
    let ctx = m.ctx().unwrap();
    let got = ctx.expand(&m.lagrangian).unwrap();

    let (x, y) = (Expr::indep("x", 1), Expr::indep("y", 1));
    let d = |b: &str| Expr::jet("u", vec![Var::new(b, 1)]);
    let (ux, uy, ut) = (d("x"), d("y"), d("t"));
    let c = |k: i64| Expr::int(k);
    let half = Expr::constant(RatFunc::rational(1, 2));
    let p1 = &RatFunc::var("p") + &RatFunc::one();
    let terms = [
        &half * &ux.pow_u32(2),
        &half * &uy.pow_u32(2),
        &(&c(2) * &(&x.pow_u32(2) + &y.pow_u32(2))) * &ut.pow_u32(2),
        &(&(&c(2) * &y) * &ux) * &ut,
        &(&(&c(-2) * &x) * &uy) * &ut,
        -&Expr::powe(Jet::base("u"), p1.clone()).scale(&p1.inv().unwrap()),
    ];
    let want = terms.iter().fold(Expr::zero(), |s, t| &s + t);
    assert_eq!(got, want, "\n got {got}\nwant {want}");
}

#[test]
fn lane_emden_diagonal_at_n4() {
    let e = catalog::model("lane_emden_system").unwrap();
    let m = e.spec.instantiate(&at(&[("n", 4), ("q", 3)])).unwrap();
    let CriticalityOutcome::Critical(c) = m.criticality(&m.ctx().unwrap()).unwrap() else { panic!("inconsistent") };
    assert_eq!(c.solved_exponent("p"), Some(&RatFunc::int(3)));
}
