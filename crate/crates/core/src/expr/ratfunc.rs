//! The coefficient field: rational functions in parameters with exact
//! arithmetic, kept in lowest terms.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;

/// `num / den` with `gcd(num, den) = 1` and `den` integer-primitive with a
/// positive leading coefficient. The representation is canonical, so derived
/// equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFunc::int(1)
    }

    pub fn int(n: i64) -> Self {
        RatFunc::from_poly(Poly::from_int(n))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        RatFunc::constant(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn constant(c: BigRational) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn var(name: &str) -> Self {
        RatFunc::from_poly(Poly::var(name))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    /// Build `num / den`; `None` when `den` is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFunc::zero());
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = Poly::gcd(&num, &den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let (c, den) = den.primitive_integer();
        Some(RatFunc { num: num.scale(&c.recip()), den })
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_constant() && self.num.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_constant() {
            // den is normalized to 1 when constant
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Integer value, when this is a constant integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_constant().filter(|c| c.is_integer()).map(|c| c.to_integer())
    }

    pub fn as_i64(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        self.as_integer().and_then(|i| i.to_i64())
    }

    pub fn vars(&self) -> std::collections::BTreeSet<String> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn inv(&self) -> Option<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &RatFunc) -> Option<RatFunc> {
        let inv = other.inv()?;
        Some(self * &inv)
    }

    pub fn pow_i(&self, e: i64) -> Option<RatFunc> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Some(RatFunc { num: base.num.pow(k), den: base.den.pow(k) }).and_then(|r| RatFunc::new(r.num, r.den))
    }

    pub fn eval(&self, values: &BTreeMap<String, BigRational>) -> Option<BigRational> {
        let n = self.num.eval(values)?;
        let d = self.den.eval(values)?;
        if d.is_zero() {
            None
        } else {
            Some(n / d)
        }
    }

    /// Substitute variables by rational functions.
    pub fn subst(&self, bindings: &BTreeMap<String, RatFunc>) -> Option<RatFunc> {
        if !self.vars().iter().any(|v| bindings.contains_key(v)) {
            return Some(self.clone());
        }
        let n = subst_poly(&self.num, bindings);
        let d = subst_poly(&self.den, bindings);
        n.checked_div(&d)
    }

    /// Evaluate at floating point parameter values.
    pub fn eval_f64(&self, values: &BTreeMap<String, f64>) -> Option<f64> {
        let ev = |p: &Poly| -> Option<f64> {
            use num_traits::ToPrimitive;
            let mut acc = 0.0;
            for (m, c) in p.terms() {
                let mut t = c.to_f64()?;
                for (v, e) in m.factors() {
                    t *= values.get(v)?.powi(*e as i32);
                }
                acc += t;
            }
            Some(acc)
        };
        Some(ev(&self.num)? / ev(&self.den)?)
    }

    /// Negative constant, used when rendering signed sums.
    pub fn is_negative_display(&self) -> bool {
        self.num.lead_grlex().map(|(_, c)| c.is_negative()).unwrap_or(false)
    }
}

fn subst_poly(p: &Poly, bindings: &BTreeMap<String, RatFunc>) -> RatFunc {
    let mut acc = RatFunc::zero();
    for (m, c) in p.terms() {
        let mut t = RatFunc::constant(c.clone());
        for (v, e) in m.factors() {
            let base = bindings.get(v).cloned().unwrap_or_else(|| RatFunc::var(v));
            t = &t * &base.pow_i(*e as i64).expect("nonnegative power");
        }
        acc = &acc + &t;
    }
    acc
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::new(self.num.add(&rhs.num), self.den.clone()).expect("nonzero den");
        }
        RatFunc::new(self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)), self.den.mul(&rhs.den)).expect("nonzero den")
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            return RatFunc { num: self.num.mul(&rhs.num), den: Poly::one() };
        }
        RatFunc::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den)).expect("nonzero den")
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; use [`RatFunc::checked_div`] otherwise.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl From<i64> for RatFunc {
    fn from(n: i64) -> Self {
        RatFunc::int(n)
    }
}

impl From<BigRational> for RatFunc {
    fn from(c: BigRational) -> Self {
        RatFunc::constant(c)
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one_poly() {
            let d = self.num.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
            if d.is_one() || self.num.is_constant() {
                return write!(f, "{}", self.num);
            }
            let scaled = self.num.scale(&BigRational::from_integer(d.clone()));
            return if scaled.is_single_term() {
                write!(f, "{scaled}/{d}")
            } else {
                write!(f, "({})/{d}", scaled.to_string_positive_first())
            };
        }
        // (-2*k - n)/(2*k - n) reads better as (n + 2*k)/(n - 2*k)
        let lead_neg = |p: &Poly| p.lead_grlex().is_some_and(|(_, c)| c.is_negative());
        let flip = !self.den.is_single_term()
            && lead_neg(&self.num)
            && self.num.terms().all(|(_, c)| c.is_negative())
            && self.den.terms().any(|(_, c)| c.is_negative());
        let (num, den) = if flip { (self.num.neg(), self.den.neg()) } else { (self.num.clone(), self.den.clone()) };
        let n = if num.is_single_term() && !num.to_string().contains('/') {
            num.to_string()
        } else {
            format!("({})", num.to_string_positive_first())
        };
        let d = if den.is_single_term() { den.to_string() } else { format!("({})", den.to_string_positive_first()) };
        write!(f, "{n}/{d}")
    }
}

impl Poly {
    fn is_one_poly(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> RatFunc {
        RatFunc::var(s)
    }

    #[test]
    fn lowest_terms() {
        let n = v("n");
        let two = RatFunc::int(2);
        let a = &(&n - &two) * &(&n + &two);
        let b = &(&n - &two) * &v("p");
        let q = &a / &b;
        assert_eq!(q, &(&n + &two) / &v("p"));
    }

    #[test]
    fn canonical_sign_and_scale() {
        let n = v("n");
        let a = &(&RatFunc::int(2) - &n) / &RatFunc::int(2);
        let b = &(&n - &RatFunc::int(2)) / &RatFunc::int(-2);
        assert_eq!(a, b);
        let c = &RatFunc::int(1) / &(&(&RatFunc::int(4) * &n) - &RatFunc::int(8));
        let d = &RatFunc::rational(1, 4) / &(&n - &RatFunc::int(2));
        assert_eq!(c, d);
    }

    #[test]
    fn substitution_three_gives_five() {
        let n = v("n");
        let p = &(&n + &RatFunc::int(2)) / &(&n - &RatFunc::int(2));
        let mut b = BTreeMap::new();
        b.insert("n".to_string(), RatFunc::int(3));
        assert_eq!(p.subst(&b), Some(RatFunc::int(5)));
    }

    #[test]
    fn display() {
        let n = v("n");
        let p = &(&n + &RatFunc::int(2)) / &(&n - &RatFunc::int(2));
        assert_eq!(p.to_string(), "(n + 2)/(n - 2)");
        assert_eq!(RatFunc::rational(-3, 4).to_string(), "-3/4");
    }
}
