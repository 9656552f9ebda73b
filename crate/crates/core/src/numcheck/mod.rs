//! Numeric oracle: expressions evaluated on jets of random polynomial test
//! functions.
//!
//! Exact mode works in rationals and rejects powers that leave them. Float
//! mode reads `Abs(u)^s` as `|u|^s`, so `PowEven(u, s) = |u|^s` and
//! `PowOdd(u, t) = |u|^(t-1) u`; non-integer powers of a jet use `|u|`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::expr::{Atom, Expr, Jet, Poly, Var};
use crate::jet::{JetContext, JetError};

mod check;

pub use check::{check_identity, CheckOptions, CheckReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumError {
    #[error("parameter {0} has no value")]
    UnresolvedParam(String),
    #[error("fractional power of negative value in exact mode: {0}")]
    NegativeBaseExact(String),
    #[error("power {0} is irrational at this point")]
    Irrational(String),
    #[error("function {0} has no binding")]
    UnresolvedFunction(String),
    #[error("negative power of zero: {0}")]
    ZeroBase(String),
    #[error(transparent)]
    Jet(#[from] JetError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(BigRational),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Value::Float(x) => *x,
        }
    }
}

fn key(v: &Var) -> String {
    format!("{}#{}", v.block, v.index)
}

/// One polynomial per dependent in the coordinates of a concrete context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestFunction {
    polys: BTreeMap<String, Poly>,
}

impl TestFunction {
    /// `polys` maps dependents to polynomials in variables named by
    /// [`TestFunction::variable`].
    pub fn new(polys: BTreeMap<String, Poly>) -> TestFunction {
        TestFunction { polys }
    }

    /// Polynomial variable standing for a coordinate.
    pub fn variable(v: &Var) -> Poly {
        Poly::var(&key(v))
    }

    /// Dense polynomials of total degree `degree` with small rational
    /// coefficients.
    pub fn random(rng: &mut ChaCha8Rng, ctx: &JetContext, degree: u32) -> Result<TestFunction, JetError> {
        let vars = ctx.vars()?;
        let mut monomials = vec![Poly::one()];
        for _ in 0..degree {
            let mut next = monomials.clone();
            for m in &monomials {
                for v in &vars {
                    next.push(m.mul(&TestFunction::variable(v)));
                }
            }
            next.sort();
            next.dedup();
            monomials = next;
        }
        let mut polys = BTreeMap::new();
        for d in &ctx.dependents {
            let mut p = Poly::zero();
            for m in &monomials {
                let c = BigRational::new(BigInt::from(rng.gen_range(-6..=6)), BigInt::from(rng.gen_range(1..=4)));
                p = p.add(&m.scale(&c));
            }
            polys.insert(d.clone(), p);
        }
        Ok(TestFunction { polys })
    }

    fn derivative(&self, j: &Jet) -> Poly {
        j.idx().iter().fold(self.polys.get(&j.dep).cloned().unwrap_or_else(Poly::zero), |p, v| p.diff(&key(v)))
    }
}

/// A test function together with an evaluation point.
#[derive(Clone, Debug)]
pub struct JetPoint {
    pub function: TestFunction,
    pub coords: BTreeMap<Var, BigRational>,
}

impl JetPoint {
    pub fn jet(&self, j: &Jet) -> BigRational {
        let values = self.coords.iter().map(|(v, x)| (key(v), x.clone())).collect();
        self.function.derivative(j).eval(&values).unwrap_or_else(BigRational::zero)
    }

    /// All jet values up to `order`.
    pub fn jets(&self, ctx: &JetContext, order: usize) -> Result<BTreeMap<Jet, BigRational>, JetError> {
        let mut out = BTreeMap::new();
        for l in 0..=order {
            for idx in ctx.multi_indices(l)? {
                for d in &ctx.dependents {
                    let j = Jet::new(d, idx.clone());
                    let v = self.jet(&j);
                    out.insert(j, v);
                }
            }
        }
        Ok(out)
    }
}

fn small(x: &BigRational) -> bool {
    x.abs() < BigRational::new(1.into(), 100.into())
}

/// Random test function and point; coordinates lie in `[1/4, 2]` and points
/// where some dependent is below 1/100 in size are resampled.
pub fn random_point(rng: &mut ChaCha8Rng, ctx: &JetContext, degree: u32) -> Result<JetPoint, JetError> {
    let function = TestFunction::random(rng, ctx, degree)?;
    let vars = ctx.vars()?;
    loop {
        let coords: BTreeMap<Var, BigRational> = vars
            .iter()
            .map(|v| (v.clone(), BigRational::new(BigInt::from(rng.gen_range(2..=16)), BigInt::from(8))))
            .collect();
        let pt = JetPoint { function: function.clone(), coords };
        if !ctx.dependents.iter().any(|d| small(&pt.jet(&Jet::base(d)))) {
            return Ok(pt);
        }
    }
}

/// Deterministic jet map for `seed`, up to `order`.
pub fn random_jet(
    seed: u64,
    ctx: &JetContext,
    degree: u32,
    order: usize,
) -> Result<BTreeMap<Jet, BigRational>, JetError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_point(&mut rng, ctx, degree)?.jets(ctx, order)
}

fn label(a: &Atom) -> String {
    Expr::atom(a.clone()).to_string()
}

/// Base of a power: a rational, or the square root of one.
enum Base {
    Plain(BigRational),
    Sqrt(BigRational),
}

fn base(a: &Atom, pt: &JetPoint, ctx: &JetContext) -> Result<Base, NumError> {
    let jet = |d: &str, idx: Vec<Var>| pt.jet(&Jet::new(d, idx));
    let block =
        |b: &str| -> Result<Vec<Var>, NumError> { Ok((1..=ctx.block_size(b)?).map(|i| Var::new(b, i)).collect()) };
    Ok(match a {
        Atom::Indep(v) => Base::Plain(pt.coords.get(v).cloned().ok_or(JetError::UnknownBlock(v.block.clone()))?),
        Atom::Jet(j) => Base::Plain(pt.jet(j)),
        Atom::Abs(j) => Base::Plain(pt.jet(j).abs()),
        Atom::BlockNorm(b) => {
            let s = block(b)?.iter().map(|v| &pt.coords[v] * &pt.coords[v]).fold(BigRational::zero(), |a, x| a + x);
            Base::Sqrt(s)
        }
        Atom::GradDot { left, right, block: b } => Base::Plain(
            block(b)?
                .into_iter()
                .map(|v| jet(left, vec![v.clone()]) * jet(right, vec![v]))
                .fold(BigRational::zero(), |a, x| a + x),
        ),
        Atom::CoordDot { coord, dep, grad } => {
            let (c, g) = (block(coord)?, block(grad)?);
            Base::Plain(
                c.iter().zip(g).map(|(c, g)| &pt.coords[c] * jet(dep, vec![g])).fold(BigRational::zero(), |a, x| a + x),
            )
        }
        Atom::LapPow { dep, block: b, power } => {
            let s = power.as_i64().filter(|s| *s >= 0).ok_or_else(|| NumError::Irrational(label(a)))?;
            let vars = block(b)?;
            let mut idxs: Vec<Vec<Var>> = vec![Vec::new()];
            for _ in 0..s {
                idxs = idxs
                    .into_iter()
                    .flat_map(|i| vars.iter().map(move |v| [i.clone(), vec![v.clone(), v.clone()]].concat()))
                    .collect();
            }
            Base::Plain(idxs.into_iter().map(|i| jet(dep, i)).fold(BigRational::zero(), |a, x| a + x))
        }
        Atom::Func(f) => return Err(NumError::UnresolvedFunction(f.name.clone())),
    })
}

fn int_pow(b: &BigRational, k: &BigInt, what: &str) -> Result<BigRational, NumError> {
    let k = k.to_i32().ok_or_else(|| NumError::Irrational(what.to_string()))?;
    if k < 0 && b.is_zero() {
        return Err(NumError::ZeroBase(what.to_string()));
    }
    Ok(num_traits::pow::Pow::pow(b, k))
}

fn exact_root(x: &BigRational, q: u32) -> Option<BigRational> {
    let root = |n: &BigInt| {
        let r = n.nth_root(q);
        (num_traits::pow(r.clone(), q as usize) == *n).then_some(r)
    };
    Some(BigRational::new(root(x.numer())?, root(x.denom())?))
}

fn power_exact(b: &Base, e: &BigRational, what: &str) -> Result<BigRational, NumError> {
    let (b, e) = match b {
        Base::Plain(b) => (b.clone(), e.clone()),
        Base::Sqrt(s) => (s.clone(), e / BigInt::from(2)),
    };
    if e.is_integer() {
        return int_pow(&b, &e.to_integer(), what);
    }
    if b.is_negative() {
        return Err(NumError::NegativeBaseExact(what.to_string()));
    }
    let q = e.denom().to_u32().ok_or_else(|| NumError::Irrational(what.to_string()))?;
    let r = exact_root(&b, q).ok_or_else(|| NumError::Irrational(what.to_string()))?;
    int_pow(&r, e.numer(), what)
}

fn power_float(b: &Base, e: f64) -> f64 {
    match b {
        Base::Plain(b) => {
            let x = b.to_f64().unwrap_or(f64::NAN);
            if e.fract() == 0.0 {
                x.powi(e as i32)
            } else {
                x.abs().powf(e)
            }
        }
        Base::Sqrt(s) => s.to_f64().unwrap_or(f64::NAN).powf(e / 2.0),
    }
}

/// Evaluate `e` at a point. Parameters missing from `params` are errors.
pub fn evaluate(
    e: &Expr,
    pt: &JetPoint,
    params: &BTreeMap<String, BigRational>,
    mode: Mode,
    ctx: &JetContext,
) -> Result<Value, NumError> {
    let param = |r: &crate::expr::RatFunc| {
        r.eval(params).ok_or_else(|| {
            let missing = r.vars().into_iter().find(|v| !params.contains_key(v)).unwrap_or_default();
            NumError::UnresolvedParam(missing)
        })
    };
    let mut exact = BigRational::zero();
    let mut float = 0.0;
    for (prod, coeff) in e.terms() {
        let c = param(coeff)?;
        match mode {
            Mode::Exact => {
                let mut t = c;
                for (a, x) in prod.factors() {
                    t *= power_exact(&base(a, pt, ctx)?, &param(x)?, &label(a))?;
                }
                exact += t;
            }
            Mode::Float => {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (a, x) in prod.factors() {
                    t *= power_float(&base(a, pt, ctx)?, param(x)?.to_f64().unwrap_or(f64::NAN));
                }
                float += t;
            }
        }
    }
    Ok(match mode {
        Mode::Exact => Value::Exact(exact),
        Mode::Float => Value::Float(float),
    })
}

#[cfg(test)]
mod tests;
