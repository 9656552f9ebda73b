//! Random expression trees with an evaluator that does not go through the
//! canonical form.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use critsym::expr::{Expr, Jet, RatFunc, Var};
use critsym::jet::{Block, JetContext};
use critsym::numcheck::JetPoint;

#[derive(Clone, Debug)]
pub enum Tree {
    Const(i64, i64),
    Dep(&'static str),
    Deriv(&'static str, u32),
    Deriv2(&'static str, u32, u32),
    Coord(u32),
    /// `|u|^k`
    AbsPow(&'static str, u32),
    Add(Box<Tree>, Box<Tree>),
    Sub(Box<Tree>, Box<Tree>),
    Mul(Box<Tree>, Box<Tree>),
    Neg(Box<Tree>),
    Pow(Box<Tree>, u32),
}

use Tree::*;

pub fn ctx() -> JetContext {
    JetContext::new(vec![Block::concrete("x", 2)], vec!["u".into(), "v".into()]).unwrap()
}

/// Which atoms may appear at the leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Leaves {
    /// Coordinates and dependents only.
    Point,
    /// Adds first derivatives and `|u|^k`.
    FirstOrder,
    /// Adds second derivatives.
    SecondOrder,
}

fn leaf(rng: &mut ChaCha8Rng, leaves: Leaves) -> Tree {
    let dep = if rng.gen_bool(0.5) { "u" } else { "v" };
    let kinds = match leaves {
        Leaves::Point => 3,
        Leaves::FirstOrder => 5,
        Leaves::SecondOrder => 6,
    };
    match rng.gen_range(0..kinds) {
        0 => Const(rng.gen_range(-4..=4), rng.gen_range(1..=3)),
        1 => Dep(dep),
        2 => Coord(rng.gen_range(1..=2)),
        3 => Deriv(dep, rng.gen_range(1..=2)),
        4 => AbsPow(dep, rng.gen_range(1..=4)),
        _ => {
            let i = rng.gen_range(1..=2);
            Deriv2(dep, i, rng.gen_range(i..=2))
        }
    }
}

pub fn random_tree(rng: &mut ChaCha8Rng, depth: u32) -> Tree {
    random_tree_with(rng, depth, Leaves::FirstOrder)
}

pub fn random_tree_with(rng: &mut ChaCha8Rng, depth: u32, leaves: Leaves) -> Tree {
    if depth == 0 || rng.gen_bool(0.25) {
        return leaf(rng, leaves);
    }
    let op = rng.gen_range(0..6);
    let mut sub = || Box::new(random_tree_with(rng, depth - 1, leaves));
    match op {
        0 | 1 => Add(sub(), sub()),
        2 => Sub(sub(), sub()),
        3 | 4 => Mul(sub(), sub()),
        _ => {
            let t = sub();
            match rng.gen_range(0..5) {
                0 | 1 => Neg(t),
                k => Pow(t, k - 2 + rng.gen_range(0..=1)),
            }
        }
    }
}

pub fn tree_from_seed(seed: u64, depth: u32) -> Tree {
    random_tree(&mut ChaCha8Rng::seed_from_u64(seed), depth)
}

/// An algebraically equal tree, built by commuting, distributing and
/// expanding.
pub fn rewrite(t: &Tree, rng: &mut ChaCha8Rng) -> Tree {
    let b = |t: Tree| Box::new(t);
    match t {
        Add(a, c) => {
            let (a, c) = (rewrite(a, rng), rewrite(c, rng));
            if rng.gen_bool(0.5) {
                Add(b(c), b(a))
            } else {
                Sub(b(a), b(Neg(b(c))))
            }
        }
        Sub(a, c) => Add(b(rewrite(a, rng)), b(Mul(b(Const(-1, 1)), b(rewrite(c, rng))))),
        Mul(a, c) => match (&**a, &**c) {
            (x, Add(p, q)) if rng.gen_bool(0.7) => {
                Add(b(Mul(b(rewrite(x, rng)), p.clone())), b(Mul(b(x.clone()), b(rewrite(q, rng)))))
            }
            _ => Mul(b(rewrite(c, rng)), b(rewrite(a, rng))),
        },
        Neg(a) => Mul(b(rewrite(a, rng)), b(Const(-2, 2))),
        Pow(a, k) if *k >= 2 => Mul(b(Pow(b(rewrite(a, rng)), k - 1)), a.clone()),
        Pow(a, 1) => rewrite(a, rng),
        Pow(_, _) => Const(1, 1),
        AbsPow(d, 2) => Mul(b(Dep(d)), b(Dep(d))),
        AbsPow(d, k) if *k >= 3 => Mul(b(AbsPow(d, k - 2)), b(Pow(b(Dep(d)), 2))),
        other => other.clone(),
    }
}

fn deriv_var(i: u32) -> Var {
    Var::new("x", i)
}

pub fn to_expr(t: &Tree) -> Expr {
    match t {
        Const(n, d) => Expr::constant(RatFunc::rational(*n, *d)),
        Dep(d) => Expr::dep(d),
        Deriv(d, i) => Expr::jet(d, vec![deriv_var(*i)]),
        Deriv2(d, i, j) => Expr::jet(d, vec![deriv_var(*i), deriv_var(*j)]),
        Coord(i) => Expr::indep("x", *i),
        AbsPow(d, k) => Expr::powe(Jet::base(d), RatFunc::int(*k as i64)),
        Add(a, c) => &to_expr(a) + &to_expr(c),
        Sub(a, c) => &to_expr(a) - &to_expr(c),
        Mul(a, c) => &to_expr(a) * &to_expr(c),
        Neg(a) => -&to_expr(a),
        Pow(a, k) => to_expr(a).pow_u32(*k),
    }
}

/// Direct recursive evaluation; shares nothing with the canonical form.
pub fn eval_tree(t: &Tree, pt: &JetPoint) -> BigRational {
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    match t {
        Const(n, d) => q(*n, *d),
        Dep(d) => pt.jet(&Jet::base(d)),
        Deriv(d, i) => pt.jet(&Jet::new(d, vec![deriv_var(*i)])),
        Deriv2(d, i, j) => pt.jet(&Jet::new(d, vec![deriv_var(*i), deriv_var(*j)])),
        Coord(i) => pt.coords[&deriv_var(*i)].clone(),
        AbsPow(d, k) => {
            let v = pt.jet(&Jet::base(d)).abs();
            (0..*k).fold(BigRational::one(), |acc, _| acc * &v)
        }
        Add(a, c) => eval_tree(a, pt) + eval_tree(c, pt),
        Sub(a, c) => eval_tree(a, pt) - eval_tree(c, pt),
        Mul(a, c) => eval_tree(a, pt) * eval_tree(c, pt),
        Neg(a) => -eval_tree(a, pt),
        Pow(a, k) => {
            let v = eval_tree(a, pt);
            (0..*k).fold(BigRational::one(), |acc, _| acc * &v)
        }
    }
}

/// `t` with every dependent renamed to `dep`.
pub fn single_dependent(t: &Tree, dep: &'static str) -> Tree {
    let b = |t: Tree| Box::new(t);
    let r = |t: &Tree| single_dependent(t, dep);
    match t {
        Dep(_) => Dep(dep),
        Deriv(_, i) => Deriv(dep, *i),
        Deriv2(_, i, j) => Deriv2(dep, *i, *j),
        AbsPow(_, k) => AbsPow(dep, *k),
        Add(a, c) => Add(b(r(a)), b(r(c))),
        Sub(a, c) => Sub(b(r(a)), b(r(c))),
        Mul(a, c) => Mul(b(r(a)), b(r(c))),
        Neg(a) => Neg(b(r(a))),
        Pow(a, k) => Pow(b(r(a)), *k),
        other => other.clone(),
    }
}
