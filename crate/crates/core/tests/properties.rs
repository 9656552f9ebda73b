mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{ctx, rewrite, to_expr, tree_from_seed};
use critsym::catalog;
use critsym::dsl::{parse_expr, parse_model, render_model, Scope};
use critsym::expr::{render_dsl, Expr, RatFunc, Var};
use critsym::jet::{total_derivative, Block};
use critsym::scaling::CriticalityOutcome;

fn tree_expr(seed: u64) -> Expr {
    to_expr(&tree_from_seed(seed, 3))
}

fn scope() -> Scope {
    Scope::new(&[], vec![Block::concrete("x", 2)], &["u", "v"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>()) {
        let e = tree_expr(seed);
        prop_assert_eq!(e.normalize(), e.clone());
        prop_assert_eq!(e.normalize().normalize(), e.normalize());
    }

    #[test]
    fn rewrites_normalize_to_the_same_expression(seed in any::<u64>()) {
        let t = tree_from_seed(seed, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        prop_assert_eq!(to_expr(&rewrite(&t, &mut rng)), to_expr(&t));
    }

    #[test]
    fn ring_axioms(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (a, b, c) = (tree_expr(a), tree_expr(b), tree_expr(c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Expr::one(), a.clone());
    }

    #[test]
    fn total_derivative_obeys_leibniz(a in any::<u64>(), b in any::<u64>(), i in 1u32..=2) {
        let ctx = ctx();
        let v = Var::new("x", i);
        let (f, g) = (tree_expr(a), tree_expr(b));
        let d = |e: &Expr| total_derivative(e, &v, &ctx).unwrap();
        prop_assert_eq!(d(&(&f * &g)), &(&d(&f) * &g) + &(&f * &d(&g)));
        prop_assert_eq!(d(&(&f + &g)), &d(&f) + &d(&g));
    }

    #[test]
    fn expressions_round_trip_through_text(seed in any::<u64>()) {
        let e = tree_expr(seed);
        let text = render_dsl(&e);
        prop_assert_eq!(parse_expr(&text, &scope()).unwrap(), e, "{}", text);
    }

    #[test]
    fn conditions_survive_positive_rescaling(idx in 0usize..12, num in 1i64..20, den in 1i64..20) {
        let entry = catalog::all().unwrap().swap_remove(idx);
        let ctx = entry.spec.ctx().unwrap();
        let mut scaled = entry.spec.clone();
        scaled.lagrangian = scaled.lagrangian.scale(&RatFunc::rational(num, den));
        let base = entry.spec.criticality(&ctx).unwrap();
        let other = scaled.criticality(&ctx).unwrap();
        match (base, other) {
            (CriticalityOutcome::Critical(x), CriticalityOutcome::Critical(y)) => {
                prop_assert!(x.equivalent(&y), "{}", entry.name())
            }
            (CriticalityOutcome::Inconsistent, CriticalityOutcome::Inconsistent) => {}
            _ => prop_assert!(false, "{} changed outcome", entry.name()),
        }
    }
}

#[test]
fn catalog_models_round_trip_through_text() {
    for e in catalog::all().unwrap() {
        let mut specs = vec![e.spec.clone()];
        specs.extend(e.power.iter().map(|p| p.spec.clone()));
        for s in specs {
            let text = render_model(&s);
            assert_eq!(parse_model(&text).unwrap(), s, "{text}");
        }
    }
}
