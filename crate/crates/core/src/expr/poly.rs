//! Sparse multivariate polynomials over ℚ in named parameters.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Power product of named variables, sorted by name, exponents positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| *e).sum()
    }

    pub fn exponent(&self, var: &str) -> u32 {
        self.0.iter().find(|(v, _)| v == var).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: BTreeMap<String, u32> = self.0.iter().cloned().collect();
        for (v, e) in &other.0 {
            *out.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(out.into_iter().collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out: BTreeMap<String, u32> = self.0.iter().cloned().collect();
        for (v, e) in &other.0 {
            let slot = out.get_mut(v)?;
            if *slot < *e {
                return None;
            }
            *slot -= e;
            if *slot == 0 {
                out.remove(v);
            }
        }
        Some(Monomial(out.into_iter().collect()))
    }

    fn without(&self, var: &str) -> Monomial {
        Monomial(self.0.iter().filter(|(v, _)| v != var).cloned().collect())
    }

    fn with_power(&self, var: &str, e: u32) -> Monomial {
        if e == 0 {
            return self.clone();
        }
        self.mul(&Monomial(vec![(var.to_string(), e)]))
    }

    /// Lexicographic order with alphabetically earlier variables most significant.
    pub fn cmp_lex(&self, other: &Monomial) -> Ordering {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        o => return o,
                    },
                },
            }
        }
    }

    /// Graded lexicographic order, used for display and sign conventions.
    pub fn cmp_grlex(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.cmp_lex(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.0.iter().map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") }).collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(name), BigRational::one());
        Poly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let remove = {
            let slot = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *slot += c;
            slot.is_zero()
        };
        if remove {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
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

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| v.clone())).collect()
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Leading term under lexicographic order.
    fn lead_lex(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().max_by(|a, b| a.0.cmp_lex(b.0))
    }

    /// Leading term under graded lexicographic order.
    pub fn lead_grlex(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().max_by(|a, b| a.0.cmp_grlex(b.0))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = d.lead_lex().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.lead_lex().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = rm.div(&dm)?;
            let qc = rc / &dc;
            let step = Poly::from_terms([(qm, qc)]);
            rem = rem.sub(&step.mul(d));
            quot = quot.add(&step);
        }
        Some(quot)
    }

    /// Coefficients of `self` viewed as a polynomial in `var`, indexed by degree.
    pub fn coeffs_in(&self, var: &str) -> Vec<Poly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(var) as usize;
            out[e].add_term(m.without(var), c.clone());
        }
        out
    }

    pub fn from_coeffs(var: &str, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            for (m, k) in &c.terms {
                out.add_term(m.with_power(var, e as u32), k.clone());
            }
        }
        out
    }

    /// Rational content and the integer-primitive part with positive
    /// lexicographic leading coefficient: `self = content * part`.
    pub fn primitive_integer(&self) -> (BigRational, Poly) {
        if self.is_zero() {
            return (BigRational::one(), Poly::zero());
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let scaled = (c * BigRational::from_integer(den_lcm.clone())).to_integer();
            num_gcd = num_gcd.gcd(&scaled);
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.lead_lex().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            content = -content;
        }
        let part = self.scale(&content.recip());
        (content, part)
    }

    pub fn normalized(&self) -> Poly {
        self.primitive_integer().1
    }

    pub fn eval(&self, values: &BTreeMap<String, BigRational>) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let x = values.get(v)?;
                t *= num_traits::pow(x.clone(), *e as usize);
            }
            acc += t;
        }
        Some(acc)
    }

    /// Substitute a subset of variables by constants, leaving the rest symbolic.
    pub fn eval_partial(&self, values: &BTreeMap<String, BigRational>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut k = c.clone();
            let mut rest = Vec::new();
            for (v, e) in &m.0 {
                match values.get(v) {
                    Some(x) => k *= num_traits::pow(x.clone(), *e as usize),
                    None => rest.push((v.clone(), *e)),
                }
            }
            out.add_term(Monomial(rest), k);
        }
        out
    }

    pub fn diff(&self, var: &str) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let mut fs: Vec<(String, u32)> = m.0.clone();
            for f in fs.iter_mut() {
                if f.0 == var {
                    f.1 -= 1;
                }
            }
            fs.retain(|f| f.1 > 0);
            out.add_term(Monomial(fs), c * BigRational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Greatest common divisor, normalized to be integer-primitive with
    /// positive leading coefficient.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.normalized();
        }
        if b.is_zero() {
            return a.normalized();
        }
        if a.is_constant() || b.is_constant() {
            return Poly::one();
        }
        let vars: BTreeSet<String> = a.vars().union(&b.vars()).cloned().collect();
        let v = vars.iter().next().cloned().expect("non-constant");
        let ca = a.content_in(&v);
        let cb = b.content_in(&v);
        let c = Poly::gcd(&ca, &cb);
        if a.degree_in(&v) == 0 || b.degree_in(&v) == 0 {
            return c;
        }
        let pa = a.div_exact(&ca).expect("content divides");
        let pb = b.div_exact(&cb).expect("content divides");
        let (mut f, mut g) = if pa.degree_in(&v) >= pb.degree_in(&v) { (pa, pb) } else { (pb, pa) };
        while !g.is_zero() {
            if g.degree_in(&v) == 0 {
                f = Poly::one();
                break;
            }
            let r = f.pseudo_rem(&g, &v);
            f = g;
            g = if r.is_zero() { r } else { r.primitive_in(&v) };
        }
        let pf = if f.degree_in(&v) == 0 { Poly::one() } else { f.primitive_in(&v) };
        pf.mul(&c).normalized()
    }

    fn content_in(&self, var: &str) -> Poly {
        let mut g = Poly::zero();
        for c in self.coeffs_in(var) {
            if c.is_zero() {
                continue;
            }
            g = Poly::gcd(&g, &c);
            if g.is_constant() {
                return Poly::one();
            }
        }
        g
    }

    fn primitive_in(&self, var: &str) -> Poly {
        let c = self.content_in(var);
        self.div_exact(&c).expect("content divides").normalized()
    }

    fn pseudo_rem(&self, g: &Poly, var: &str) -> Poly {
        let dg = g.degree_in(var);
        let lc = g.coeffs_in(var).pop().expect("nonzero");
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(var) >= dg {
            let dr = r.degree_in(var);
            let lr = r.coeffs_in(var).pop().expect("nonzero");
            let shift = Poly::from_terms([(Monomial::one().with_power(var, dr - dg), BigRational::one())]);
            r = lc.mul(&r).sub(&lr.mul(&shift).mul(g));
        }
        r
    }

    /// Terms sorted for display: descending graded-lex.
    pub fn display_terms(&self) -> Vec<(&Monomial, &BigRational)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| b.0.cmp_grlex(a.0));
        ts
    }

    pub fn is_single_term(&self) -> bool {
        self.terms.len() == 1
    }
}

fn fmt_rational_abs(c: &BigRational) -> String {
    let a = c.abs();
    if a.is_integer() {
        a.to_integer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

fn render_terms(ts: Vec<(&Monomial, &BigRational)>) -> String {
    let mut out = String::new();
    for (i, (m, c)) in ts.into_iter().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        if m.is_one() {
            out.push_str(&fmt_rational_abs(c));
        } else if a.is_one() {
            out.push_str(&m.to_string());
        } else {
            out.push_str(&format!("{}*{}", fmt_rational_abs(c), m));
        }
    }
    out
}

impl Poly {
    /// Display order with positive terms first (`2 - n` rather than `-n + 2`).
    pub fn to_string_positive_first(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut ts = self.display_terms();
        ts.sort_by_key(|(_, c)| c.is_negative());
        render_terms(ts)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", render_terms(self.display_terms()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &[(i64, &[(&str, u32)])]) -> Poly {
        Poly::from_terms(
            s.iter().map(|(c, m)| (Monomial(m.iter().map(|(v, e)| (v.to_string(), *e)).collect()), rat(*c, 1))),
        )
    }

    #[test]
    fn gcd_of_products() {
        let a = p(&[(1, &[("n", 1)]), (-2, &[])]); // n - 2
        let b = p(&[(1, &[("p", 1)]), (1, &[])]); // p + 1
        let c = p(&[(1, &[("n", 1)]), (1, &[("p", 1)])]); // n + p
        let g = Poly::gcd(&a.mul(&b).mul(&c), &a.mul(&c).mul(&c));
        assert_eq!(g, a.mul(&c).normalized());
    }

    #[test]
    fn coprime_gcd_is_one() {
        let a = p(&[(1, &[("n", 1)]), (-2, &[])]);
        let b = p(&[(1, &[("n", 1)]), (2, &[])]);
        assert_eq!(Poly::gcd(&a, &b), Poly::one());
    }

    #[test]
    fn exact_division() {
        let a = p(&[(1, &[("n", 1)]), (-2, &[])]);
        let b = p(&[(1, &[("p", 1), ("q", 1)]), (3, &[("n", 2)])]);
        assert_eq!(a.mul(&b).div_exact(&a), Some(b.clone()));
        assert_eq!(b.div_exact(&a), None);
    }

    #[test]
    fn display_is_grlex() {
        let q = p(&[(1, &[("n", 1), ("p", 1)]), (-2, &[("p", 1)]), (-1, &[("n", 1)]), (-2, &[])]);
        assert_eq!(q.to_string(), "n*p - n - 2*p - 2");
    }
}
