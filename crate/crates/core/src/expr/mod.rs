//! Immutable symbolic expressions over jet coordinates.
//!
//! An [`Expr`] is a canonical sum of terms, each a [`RatFunc`] coefficient
//! times a [`Product`] of atoms raised to rational-function exponents.
//! Every constructor and operation returns normalized values, so two
//! expressions are mathematically equal (in the rewrite system) iff they are
//! structurally equal.

mod atom;
pub mod poly;
pub mod ratfunc;
mod render;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use thiserror::Error;

pub use atom::{Atom, FnSym, Jet, Var};
pub use poly::{rat, Monomial, Poly};
pub use ratfunc::RatFunc;
pub use render::{render_coefficient, render_dsl};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("cannot differentiate contracted atom {0}; expand at concrete dimension first")]
    DifferentiateContracted(String),
    #[error("division by a non-monomial expression")]
    NonMonomialDivision,
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent {0} not allowed for a multi-term base")]
    BadExponent(String),
    #[error("binding {name} = {value} violates assumption {assumption}")]
    DomainViolation { name: String, value: String, assumption: String },
    #[error("substitution produced a zero denominator")]
    SingularSubstitution,
    #[error("parameter values violate the assumption {0}")]
    AssumptionViolated(String),
}

/// Sign / bound constraint attached to a parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assumption {
    pub strict: bool,
    pub bound: BigRational,
}

impl Assumption {
    pub fn gt(n: i64) -> Self {
        Assumption { strict: true, bound: BigRational::from_integer(BigInt::from(n)) }
    }

    pub fn ge(n: i64) -> Self {
        Assumption { strict: false, bound: BigRational::from_integer(BigInt::from(n)) }
    }

    pub fn admits(&self, v: &BigRational) -> bool {
        if self.strict {
            v > &self.bound
        } else {
            v >= &self.bound
        }
    }
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = &self.bound;
        let bs = if b.is_integer() { b.to_integer().to_string() } else { format!("{}/{}", b.numer(), b.denom()) };
        write!(f, "{} {}", if self.strict { ">" } else { ">=" }, bs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub assumption: Option<Assumption>,
}

impl Param {
    pub fn new(name: &str, assumption: Option<Assumption>) -> Self {
        Param { name: name.to_string(), assumption }
    }

    pub fn check(&self, value: &BigRational) -> Result<(), ExprError> {
        match &self.assumption {
            Some(a) if !a.admits(value) => Err(ExprError::DomainViolation {
                name: self.name.clone(),
                value: value.to_string(),
                assumption: a.to_string(),
            }),
            _ => Ok(()),
        }
    }
}

/// Product of atoms with nonzero rational-function exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Product(BTreeMap<Atom, RatFunc>);

impl Product {
    pub fn one() -> Self {
        Product::default()
    }

    pub fn atom(a: Atom, e: RatFunc) -> Self {
        let mut m = BTreeMap::new();
        m.insert(a, e);
        Product(m).normalized()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Atom, &RatFunc)> {
        self.0.iter()
    }

    pub fn exponent(&self, a: &Atom) -> Option<&RatFunc> {
        self.0.get(a)
    }

    pub fn mul(&self, other: &Product) -> Product {
        let mut m = self.0.clone();
        for (a, e) in &other.0 {
            let slot = m.entry(a.clone()).or_insert_with(RatFunc::zero);
            *slot = &*slot + e;
        }
        Product(m).normalized()
    }

    /// Raise to a power. `(u^(2k))^e` becomes `|u|^(2ke)` when `e` is not an
    /// integer; other bases use positive-base semantics.
    pub fn pow(&self, e: &RatFunc) -> Product {
        let e_int = e.as_integer().is_some();
        let mut m: BTreeMap<Atom, RatFunc> = BTreeMap::new();
        for (a, k) in &self.0 {
            let ke = k * e;
            let key = match a {
                Atom::Jet(j) if !e_int && k.as_integer().map(|i| i.is_even()).unwrap_or(false) => Atom::Abs(j.clone()),
                _ => a.clone(),
            };
            let slot = m.entry(key).or_insert_with(RatFunc::zero);
            *slot = &*slot + &ke;
        }
        Product(m).normalized()
    }

    /// Replace the exponent of one atom (zero removes it).
    pub fn with_exponent(&self, a: &Atom, e: RatFunc) -> Product {
        let mut m = self.0.clone();
        m.insert(a.clone(), e);
        Product(m).normalized()
    }

    fn from_map(m: BTreeMap<Atom, RatFunc>) -> Product {
        Product(m).normalized()
    }

    /// Fold `|u|^s * u^k` pairs and drop unit factors.
    fn normalized(mut self) -> Product {
        self.0.retain(|_, e| !e.is_zero());
        let abs_jets: Vec<Jet> =
            self.0.keys().filter_map(|a| if let Atom::Abs(j) = a { Some(j.clone()) } else { None }).collect();
        for j in abs_jets {
            let abs_key = Atom::Abs(j.clone());
            let jet_key = Atom::Jet(j);
            let s = self.0[&abs_key].clone();
            let k = match self.0.get(&jet_key) {
                None => BigInt::from(0),
                Some(e) => match e.as_integer() {
                    Some(k) => k,
                    None => continue,
                },
            };
            let r = k.mod_floor(&BigInt::from(2));
            let absorbed = RatFunc::constant(BigRational::from_integer(&k - &r));
            let s2 = &s + &absorbed;
            self.0.remove(&abs_key);
            self.0.remove(&jet_key);
            let even = s2.as_integer().map(|i| i.is_even()).unwrap_or(false);
            let mut jet_exp = RatFunc::constant(BigRational::from_integer(r));
            if even {
                jet_exp = &jet_exp + &s2;
            } else {
                self.0.insert(abs_key, s2);
            }
            if !jet_exp.is_zero() {
                self.0.insert(jet_key, jet_exp);
            }
        }
        self
    }

    /// Total scaling degree in the unknown functions, when defined.
    pub fn u_degree(&self) -> Option<RatFunc> {
        let mut d = RatFunc::zero();
        for (a, e) in &self.0 {
            let w = match a {
                Atom::Indep(_) | Atom::BlockNorm(_) => RatFunc::zero(),
                Atom::Jet(_) | Atom::Abs(_) | Atom::CoordDot { .. } | Atom::LapPow { .. } => e.clone(),
                Atom::GradDot { .. } => e * &RatFunc::int(2),
                Atom::Func(_) => return None,
            };
            d = &d + &w;
        }
        Some(d)
    }
}

/// Canonical sum of terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr {
    terms: BTreeMap<Product, RatFunc>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::constant(RatFunc::one())
    }

    pub fn int(n: i64) -> Self {
        Expr::constant(RatFunc::int(n))
    }

    pub fn constant(c: RatFunc) -> Self {
        Expr::term(c, Product::one())
    }

    pub fn param(name: &str) -> Self {
        Expr::constant(RatFunc::var(name))
    }

    pub fn term(c: RatFunc, p: Product) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(p, c);
        }
        Expr { terms }
    }

    pub fn atom(a: Atom) -> Self {
        Expr::term(RatFunc::one(), Product::atom(a, RatFunc::one()))
    }

    pub fn atom_pow(a: Atom, e: RatFunc) -> Self {
        Expr::term(RatFunc::one(), Product::atom(a, e))
    }

    pub fn dep(name: &str) -> Self {
        Expr::atom(Atom::Jet(Jet::base(name)))
    }

    pub fn jet(dep: &str, idx: Vec<Var>) -> Self {
        Expr::atom(Atom::jet(dep, idx))
    }

    pub fn indep(block: &str, index: u32) -> Self {
        Expr::atom(Atom::indep(block, index))
    }

    /// `|j|^s`
    pub fn powe(j: Jet, s: RatFunc) -> Self {
        Expr::atom_pow(Atom::Abs(j), s)
    }

    /// `|j|^(t-1) j`
    pub fn powo(j: Jet, t: RatFunc) -> Self {
        let e = &t - &RatFunc::one();
        let p = Product::atom(Atom::Abs(j.clone()), e).mul(&Product::atom(Atom::Jet(j), RatFunc::one()));
        Expr::term(RatFunc::one(), p)
    }

    pub fn grad_dot(a: &str, b: &str, block: &str) -> Self {
        Expr::atom(Atom::grad_dot(a, b, block))
    }

    pub fn block_norm(block: &str) -> Self {
        Expr::atom(Atom::BlockNorm(block.to_string()))
    }

    pub fn func(name: &str, args: &[&str]) -> Self {
        Expr::atom(Atom::Func(FnSym::new(name, args.iter().map(|s| s.to_string()).collect())))
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Product, RatFunc)>) -> Self {
        let mut e = Expr::zero();
        for (p, c) in it {
            e.add_term(p, c);
        }
        e
    }

    fn add_term(&mut self, p: Product, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        let remove = {
            let slot = self.terms.entry(p.clone()).or_insert_with(RatFunc::zero);
            *slot = &*slot + &c;
            slot.is_zero()
        };
        if remove {
            self.terms.remove(&p);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Product, &RatFunc)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient when this expression has no atoms.
    pub fn as_constant(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero()),
            1 => {
                let (p, c) = self.terms.iter().next()?;
                p.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn single_term(&self) -> Option<(&Product, &RatFunc)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Idempotent canonicalization. Values are always kept canonical, so this
    /// rebuilds from terms as a consistency check.
    pub fn normalize(&self) -> Expr {
        Expr::from_terms(self.terms.iter().map(|(p, c)| (Product::from_map(p.0.clone()), c.clone())))
    }

    pub fn scale(&self, c: &RatFunc) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr { terms: self.terms.iter().map(|(p, k)| (p.clone(), k * c)).collect() }
    }

    pub fn mul_product(&self, q: &Product) -> Expr {
        Expr::from_terms(self.terms.iter().map(|(p, c)| (p.mul(q), c.clone())))
    }

    pub fn pow_u32(&self, e: u32) -> Expr {
        let mut acc = Expr::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self^e`. Multi-term bases need a nonnegative integer exponent.
    pub fn pow(&self, e: &RatFunc) -> Result<Expr, ExprError> {
        if let Some((p, c)) = self.single_term() {
            let coeff = if c.is_one() {
                RatFunc::one()
            } else if let Some(k) = e.as_i64() {
                c.pow_i(k).ok_or(ExprError::DivisionByZero)?
            } else {
                return Err(ExprError::BadExponent(e.to_string()));
            };
            return Ok(Expr::term(coeff, p.pow(e)));
        }
        if self.is_zero() {
            return Ok(Expr::zero());
        }
        match e.as_i64() {
            Some(k) if k >= 0 => Ok(self.pow_u32(k as u32)),
            _ => Err(ExprError::BadExponent(e.to_string())),
        }
    }

    /// `self / d` for single-term `d`.
    pub fn checked_div(&self, d: &Expr) -> Result<Expr, ExprError> {
        let (p, c) = match d.single_term() {
            Some(t) => t,
            None if d.is_zero() => return Err(ExprError::DivisionByZero),
            None => return Err(ExprError::NonMonomialDivision),
        };
        let ci = c.inv().ok_or(ExprError::DivisionByZero)?;
        let pi = p.pow(&RatFunc::int(-1));
        Ok(self.mul_product(&pi).scale(&ci))
    }

    /// Formal partial derivative treating every atom as an independent
    /// coordinate; `target` must be an [`Atom::Indep`] or [`Atom::Jet`].
    pub fn diff(&self, target: &Atom) -> Result<Expr, ExprError> {
        let mut out = Expr::zero();
        for (prod, coeff) in &self.terms {
            for (atom, exp) in &prod.0 {
                let d = atom_partial(atom, target)?;
                if d.is_zero() {
                    continue;
                }
                let rest = prod.with_exponent(atom, exp - &RatFunc::one());
                let piece = d.mul_product(&rest).scale(&(coeff * exp));
                out = &out + &piece;
            }
        }
        Ok(out)
    }

    /// Split into `key-monomial -> coefficient`, where the key holds exactly
    /// the factors selected by `is_key`.
    pub fn collect(&self, is_key: impl Fn(&Atom) -> bool) -> BTreeMap<Product, Expr> {
        let mut out: BTreeMap<Product, Expr> = BTreeMap::new();
        for (prod, coeff) in &self.terms {
            let mut key = BTreeMap::new();
            let mut rest = BTreeMap::new();
            for (a, e) in &prod.0 {
                if is_key(a) {
                    key.insert(a.clone(), e.clone());
                } else {
                    rest.insert(a.clone(), e.clone());
                }
            }
            let entry = out.entry(Product(key)).or_default();
            *entry = &*entry + &Expr::term(coeff.clone(), Product(rest));
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Rebuild from a collection map.
    pub fn from_collected(m: &BTreeMap<Product, Expr>) -> Expr {
        let mut acc = Expr::zero();
        for (k, v) in m {
            acc = &acc + &v.mul_product(k);
        }
        acc
    }

    /// Simultaneous substitution of parameters and atoms.
    pub fn substitute(&self, b: &Bindings) -> Result<Expr, ExprError> {
        let mut out = Expr::zero();
        for (prod, coeff) in &self.terms {
            let mut t = Expr::constant(b.rat(coeff)?);
            for (atom, exp) in &prod.0 {
                let e2 = b.rat(exp)?;
                let base = b.atom(atom)?;
                t = &t * &base.pow(&e2)?;
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Apply a map to every atom (with the atom's exponent available).
    pub fn map_atoms(&self, mut f: impl FnMut(&Atom) -> Result<Option<Expr>, ExprError>) -> Result<Expr, ExprError> {
        let mut out = Expr::zero();
        for (prod, coeff) in &self.terms {
            let mut t = Expr::constant(coeff.clone());
            for (atom, exp) in &prod.0 {
                match f(atom)? {
                    Some(rep) => t = &t * &rep.pow(exp)?,
                    None => t = t.mul_product(&Product::atom(atom.clone(), exp.clone())),
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    pub fn atoms(&self) -> std::collections::BTreeSet<Atom> {
        self.terms.keys().flat_map(|p| p.0.keys().cloned()).collect()
    }

    /// Parameters mentioned in coefficients and exponents.
    pub fn params(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        for (p, c) in &self.terms {
            out.extend(c.vars());
            for (a, e) in &p.0 {
                out.extend(e.vars());
                if let Atom::LapPow { power, .. } = a {
                    out.extend(power.vars());
                }
            }
        }
        out
    }

    pub fn contains_func(&self) -> bool {
        self.atoms().iter().any(|a| matches!(a, Atom::Func(_)))
    }
}

fn atom_partial(atom: &Atom, target: &Atom) -> Result<Expr, ExprError> {
    Ok(match (atom, target) {
        (Atom::Indep(v), Atom::Indep(t)) if v == t => Expr::one(),
        (Atom::Jet(j), Atom::Jet(t)) if j == t => Expr::one(),
        (Atom::Abs(j), Atom::Jet(t)) if j == t => Expr::atom_pow(Atom::Abs(j.clone()), RatFunc::int(-1))
            .mul_product(&Product::atom(Atom::Jet(j.clone()), RatFunc::one())),
        (Atom::BlockNorm(b), Atom::Indep(t)) if &t.block == b => {
            Expr::atom_pow(Atom::BlockNorm(b.clone()), RatFunc::int(-1))
                .mul_product(&Product::atom(Atom::Indep(t.clone()), RatFunc::one()))
        }
        (Atom::GradDot { left, right, block }, Atom::Jet(t))
            if t.order() == 1 && &t.idx()[0].block == block && (&t.dep == left || &t.dep == right) =>
        {
            let i = t.idx()[0].clone();
            if left == right {
                Expr::jet(left, vec![i]).scale(&RatFunc::int(2))
            } else if &t.dep == left {
                Expr::jet(right, vec![i])
            } else {
                Expr::jet(left, vec![i])
            }
        }
        (Atom::CoordDot { coord, dep, grad }, Atom::Indep(t)) if &t.block == coord => {
            Expr::jet(dep, vec![Var::new(grad, t.index)])
        }
        (Atom::CoordDot { coord, dep, grad }, Atom::Jet(t))
            if &t.dep == dep && t.order() == 1 && &t.idx()[0].block == grad =>
        {
            Expr::indep(coord, t.idx()[0].index)
        }
        (Atom::LapPow { dep, .. }, Atom::Jet(t)) if &t.dep == dep && t.order() > 0 => {
            return Err(ExprError::DifferentiateContracted(format!("{atom:?}")));
        }
        (Atom::Func(f), Atom::Jet(t)) if t.order() == 0 && f.args.contains(&t.dep) => {
            Expr::atom(Atom::Func(f.differentiate(&t.dep)))
        }
        _ => Expr::zero(),
    })
}

/// Substitution table for [`Expr::substitute`].
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    pub params: BTreeMap<String, RatFunc>,
    pub atoms: BTreeMap<Atom, Expr>,
    /// Function symbols replaced by expressions in their arguments; formal
    /// partials become derivatives of the replacement.
    pub functions: BTreeMap<String, Expr>,
}

impl Bindings {
    pub fn param(mut self, name: &str, v: RatFunc) -> Self {
        self.params.insert(name.to_string(), v);
        self
    }

    pub fn function(mut self, name: &str, e: Expr) -> Self {
        self.functions.insert(name.to_string(), e);
        self
    }

    /// Check constant parameter bindings against assumptions.
    pub fn check(&self, params: &[Param]) -> Result<(), ExprError> {
        for p in params {
            if let Some(v) = self.params.get(&p.name).and_then(RatFunc::as_constant) {
                p.check(&v)?;
            }
        }
        Ok(())
    }

    fn rat(&self, r: &RatFunc) -> Result<RatFunc, ExprError> {
        if self.params.is_empty() {
            return Ok(r.clone());
        }
        r.subst(&self.params).ok_or(ExprError::SingularSubstitution)
    }

    fn atom(&self, a: &Atom) -> Result<Expr, ExprError> {
        if let Some(e) = self.atoms.get(a) {
            return Ok(e.clone());
        }
        match a {
            Atom::Func(f) if self.functions.contains_key(&f.name) => {
                let mut e = self.functions[&f.name].clone();
                for d in f.partials() {
                    e = e.diff(&Atom::Jet(Jet::base(d)))?;
                }
                // the replacement is written in the function's own arguments
                e.substitute(&Bindings { params: self.params.clone(), ..Default::default() })
            }
            Atom::LapPow { dep, block, power } if !self.params.is_empty() => {
                Ok(Expr::atom(Atom::LapPow { dep: dep.clone(), block: block.clone(), power: self.rat(power)? }))
            }
            _ => Ok(Expr::atom(a.clone())),
        }
    }
}

impl<'a> Add<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (p, c) in &small.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        for (p, c) in &rhs.terms {
            out.add_term(p.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (p1, c1) in &self.terms {
            for (p2, c2) in &rhs.terms {
                out.add_term(p1.mul(p2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr { terms: self.terms.iter().map(|(p, c)| (p.clone(), -c)).collect() }
    }
}

macro_rules! owned_expr_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_expr_ops!(Add, add);
owned_expr_ops!(Sub, sub);
owned_expr_ops!(Mul, mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_dsl(self))
    }
}

impl fmt::Display for Product {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_dsl(&Expr::term(RatFunc::one(), self.clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> Jet {
        Jet::base("u")
    }

    fn x1() -> Expr {
        Expr::indep("x", 1)
    }

    #[test]
    fn like_terms_merge() {
        assert_eq!(&x1() + &x1(), x1().scale(&RatFunc::int(2)));
    }

    #[test]
    fn square_cancels() {
        let u1 = Expr::jet("u", vec![Var::new("x", 1)]);
        let sq = u1.pow(&RatFunc::int(2)).unwrap();
        assert!((&(&u1 * &u1) - &sq).is_zero());
    }

    #[test]
    fn odd_powers_multiply_to_even() {
        let p = RatFunc::var("p");
        let q = RatFunc::var("q");
        let lhs = &Expr::powo(u(), p.clone()) * &Expr::powo(u(), q.clone());
        assert_eq!(lhs, Expr::powe(u(), &p + &q));
    }

    #[test]
    fn unit_and_zero_powers() {
        assert_eq!(Expr::powo(u(), RatFunc::one()), Expr::dep("u"));
        assert_eq!(Expr::powe(u(), RatFunc::zero()), Expr::one());
        assert_eq!(Expr::powe(u(), RatFunc::int(2)), Expr::dep("u").pow_u32(2));
    }

    #[test]
    fn grad_dot_is_symmetric() {
        assert_eq!(Expr::grad_dot("v", "u", "x"), Expr::grad_dot("u", "v", "x"));
    }

    #[test]
    fn diff_power_nonlinearity() {
        let p = RatFunc::var("p");
        let p1 = &p + &RatFunc::one();
        let f = Expr::powe(u(), p1.clone()).scale(&p1.inv().unwrap());
        let d = f.diff(&Atom::Jet(u())).unwrap();
        assert_eq!(d, Expr::powo(u(), p));
    }

    #[test]
    fn diff_function_symbol() {
        let f = Expr::func("F", &["u"]);
        let d = f.diff(&Atom::Jet(u())).unwrap();
        let fu = Expr::atom(Atom::Func(FnSym::with_partials("F", vec!["u".into()], vec!["u".into()])));
        assert_eq!(d, fu);
    }

    #[test]
    fn diff_half_square() {
        let u1 = Expr::jet("u", vec![Var::new("x", 1)]);
        let half = RatFunc::rational(1, 2);
        let e = u1.pow_u32(2).scale(&half);
        assert_eq!(e.diff(&Atom::jet("u", vec![Var::new("x", 1)])).unwrap(), u1);
    }

    #[test]
    fn collect_poisson_like() {
        let n = RatFunc::var("n");
        let a = RatFunc::var("a");
        let sigma = RatFunc::var("sigma");
        let c1 = &(&a + &(&n / &RatFunc::int(2))) - &RatFunc::one();
        let e = &Expr::grad_dot("u", "u", "x").scale(&c1) - &Expr::func("F", &["u"]).scale(&sigma);
        let m = e.collect(|a| matches!(a, Atom::GradDot { .. } | Atom::Func(_)));
        assert_eq!(m.len(), 2);
        assert_eq!(m[&Product::atom(Atom::grad_dot("u", "u", "x"), RatFunc::one())], Expr::constant(c1));
        assert_eq!(Expr::from_collected(&m), e);
        assert!(Expr::zero().collect(|_| true).is_empty());
    }

    #[test]
    fn substitute_params() {
        let n = RatFunc::var("n");
        let e = Expr::constant(&(&n + &RatFunc::int(2)) / &(&n - &RatFunc::int(2)));
        let b = Bindings::default().param("n", RatFunc::int(3));
        assert_eq!(e.substitute(&b).unwrap(), Expr::int(5));
        let p = Expr::param("p");
        assert_eq!(p.substitute(&Bindings::default().param("p", RatFunc::int(5))).unwrap(), Expr::int(5));
    }

    #[test]
    fn substitute_checks_assumptions() {
        let params = vec![Param::new("n", Some(Assumption::gt(2)))];
        let b = Bindings::default().param("n", RatFunc::int(2));
        assert!(matches!(b.check(&params), Err(ExprError::DomainViolation { .. })));
    }
}
