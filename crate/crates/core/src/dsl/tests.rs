use super::*;
use crate::expr::{Jet, RatFunc, Var};
use crate::jet::Block;
use crate::scaling::Weight;

const POISSON: &str = r#"
model "poisson"
parameter n > 2
parameter p > 0
independent x[n]
dependent u
lagrangian: grad2(u, u, x)/2 - powe(u, p + 1)/(p + 1)
dilation: x -> 1, u -> ?
critical p
"#;

#[test]
fn parses_poisson() {
    let m = parse_model(POISSON).unwrap();
    assert_eq!(m.name, "poisson");
    assert_eq!(m.dependents, vec!["u".to_string()]);
    assert_eq!(m.weights.blocks["x"], Weight::Known(RatFunc::one()));
    assert_eq!(m.weights.deps["u"], Weight::Unknown);
    let p1 = &RatFunc::var("p") + &RatFunc::one();
    let want = &Expr::grad_dot("u", "u", "x").scale(&RatFunc::rational(1, 2))
        - &Expr::powe(Jet::base("u"), p1.clone()).scale(&p1.inv().unwrap());
    assert_eq!(m.lagrangian, want);
}

#[test]
fn round_trip() {
    let m = parse_model(POISSON).unwrap();
    let text = render_model(&m);
    assert_eq!(parse_model(&text).unwrap(), m);
}

#[test]
fn lane_emden_line_with_unicode_minus() {
    let src = "model \"le\"\nparameter p\nparameter q\nindependent x[3]\ndependent u, v\n\
               lagrangian: grad2(u,v) − powe(u,q+1)/(q+1) − powe(v,p+1)/(p+1)\n";
    let m = parse_model(src).unwrap();
    assert_eq!(m.lagrangian.len(), 3);
}

#[test]
fn jets_and_coordinates() {
    let scope = Scope::new(&[], vec![Block::concrete("x", 2), Block::concrete("t", 1)], &["u"]);
    let e = parse_expr("x2*u_{x1,x2} + t*u_{t}", &scope).unwrap();
    let x = |i| Var::new("x", i);
    let want = &(&Expr::indep("x", 2) * &Expr::jet("u", vec![x(1), x(2)]))
        + &(&Expr::indep("t", 1) * &Expr::jet("u", vec![Var::new("t", 1)]));
    assert_eq!(e, want);
}

#[test]
fn multiline_expression() {
    let src = "model \"m\"\nindependent x[1]\ndependent u\nlagrangian: u^2 +\n  u_{x}^2\n";
    assert_eq!(parse_model(src).unwrap().lagrangian.len(), 2);
}

#[test]
fn errors_carry_positions() {
    let e = parse_model("model \"m\"\nindependent x[1]\ndependent u\nlagrangian: u + * u\n").unwrap_err();
    assert!(matches!(e, DslError::Parse { line: 4, col: 17, .. }), "{e:?}");
    let e = parse_model("model \"m\"\nindependent x[1]\ndependent u\nlagrangian: w\n").unwrap_err();
    assert_eq!(e, DslError::UnknownSymbol { line: 4, col: 13, name: "w".into() });
    let e = parse_model("model \"m\"\nindependent x[1]\ndependent u\nlagrangian: powe(u)\n").unwrap_err();
    assert!(matches!(e, DslError::Arity { found: 1, .. }), "{e:?}");
    let e = parse_model("model \"m\"\nindependent x[n]\n").unwrap_err();
    assert!(matches!(e, DslError::UnknownSymbol { .. }));
    assert!(parse_model("model \"m\"\n").is_err());
}

#[test]
fn functions_and_partials() {
    let scope = Scope::new(&[], vec![Block::concrete("x", 1)], &["u", "v"]);
    let e = parse_expr("diff(H(u, v), v) - H(u, v)", &scope).unwrap();
    assert_eq!(e.len(), 2);
    assert!(parse_expr("diff(H(u, v), w)", &scope).is_err());
    assert!(parse_expr("H()", &scope).is_err());
}

#[test]
fn joint_assumptions() {
    let src = "model \"m\"\nparameter n\nparameter k\nassume n - 2*k > 0\nassume k >= 1\nindependent x[n]\ndependent u\nlagrangian: grad2(u, u, x)\n";
    let m = parse_model(src).unwrap();
    assert_eq!(m.assumptions.len(), 2);
    assert_eq!(m.assumptions[0].to_string(), "n - 2*k > 0");
    assert_eq!(parse_model(&render_model(&m)).unwrap(), m);
    let at = |n, k| [("n".to_string(), RatFunc::int(n)), ("k".to_string(), RatFunc::int(k))].into();
    assert!(m.instantiate(&at(5, 2)).unwrap().assumptions.is_empty());
    assert_eq!(m.instantiate(&at(4, 2)), Err(crate::expr::ExprError::AssumptionViolated("n - 2*k > 0".into())));
    let partial = m.instantiate(&[("k".to_string(), RatFunc::int(1))].into()).unwrap();
    assert_eq!(partial.assumptions[0].to_string(), "n - 2 > 0");
    assert!(parse_model("model \"m\"\nparameter n\nassume u > 0\n").is_err());
}
