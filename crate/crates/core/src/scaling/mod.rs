//! Dilation-weight accounting, the criticality linear system, its exact
//! parametric solution and rational reconstruction from concrete runs.
//!
//! A diagonal dilation acts on every atom by an eigenvalue (its weight), so at
//! symbolic dimension `X^(k)L + L·trace` is computed term by term without
//! expanding contracted atoms. At concrete dimension the same system is read
//! off the fully expanded residual, which gives an independent second layer.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::expr::{Atom, Expr, ExprError, FnSym, Poly, Product, RatFunc};
use crate::jet::{self, Generator, JetContext, JetError};

mod reconstruct;
mod solve;

pub use reconstruct::reconstruct_rational;
pub use solve::{
    functional_condition, solve_criticality, Constraint, CriticalityCondition, CriticalityOutcome, ExponentTarget,
    FunctionalCondition, Hyperbola,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalingError {
    #[error("atom {0} has no scaling law in this context")]
    UnweightableAtom(String),
    #[error("no weight assigned to {0}")]
    MissingWeight(String),
    #[error("equation is not linear in the weights: {0}")]
    Nonlinear(String),
    #[error("pivot {pivot} vanishes at admissible {param} = {value}")]
    DegeneratePivot { pivot: String, param: String, value: String },
    #[error("no rational function of the given degree fits the samples")]
    NoFit,
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// A dilation weight: a fixed value or an unknown to be solved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weight {
    Known(RatFunc),
    Unknown,
}

/// Per-block weights `a_B` and per-dependent weights `b^α`. Unknowns are
/// named `a_<block>` and `b_<dep>`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightAssignment {
    pub blocks: BTreeMap<String, Weight>,
    pub deps: BTreeMap<String, Weight>,
}

pub fn block_unknown(block: &str) -> String {
    format!("a_{block}")
}

pub fn dep_unknown(dep: &str) -> String {
    format!("b_{dep}")
}

impl WeightAssignment {
    pub fn block(mut self, name: &str, w: Weight) -> Self {
        self.blocks.insert(name.to_string(), w);
        self
    }

    pub fn dep(mut self, name: &str, w: Weight) -> Self {
        self.deps.insert(name.to_string(), w);
        self
    }

    pub fn unknowns(&self) -> Vec<String> {
        let mut out: Vec<String> =
            self.blocks.iter().filter(|(_, w)| **w == Weight::Unknown).map(|(b, _)| block_unknown(b)).collect();
        out.extend(self.deps.iter().filter(|(_, w)| **w == Weight::Unknown).map(|(d, _)| dep_unknown(d)));
        out
    }

    /// Block weights with unknowns as symbols.
    pub fn block_map(&self) -> BTreeMap<String, RatFunc> {
        self.blocks
            .iter()
            .map(|(b, w)| {
                let v = match w {
                    Weight::Known(r) => r.clone(),
                    Weight::Unknown => RatFunc::var(&block_unknown(b)),
                };
                (b.clone(), v)
            })
            .collect()
    }

    /// Dependent weights with unknowns as symbols.
    pub fn dep_map(&self) -> BTreeMap<String, RatFunc> {
        self.deps
            .iter()
            .map(|(d, w)| {
                let v = match w {
                    Weight::Known(r) => r.clone(),
                    Weight::Unknown => RatFunc::var(&dep_unknown(d)),
                };
                (d.clone(), v)
            })
            .collect()
    }

    /// `Σ_B size_B · a_B`.
    pub fn trace(&self, ctx: &JetContext) -> RatFunc {
        ctx.trace(&self.block_map())
    }
}

fn lookup<'a>(m: &'a BTreeMap<String, RatFunc>, k: &str) -> Result<&'a RatFunc, ScalingError> {
    m.get(k).ok_or_else(|| ScalingError::MissingWeight(k.to_string()))
}

/// Eigenvalue of the dilation on one atom.
pub fn atom_weight(
    a: &Atom,
    bw: &BTreeMap<String, RatFunc>,
    dw: &BTreeMap<String, RatFunc>,
) -> Result<RatFunc, ScalingError> {
    Ok(match a {
        Atom::Indep(v) => lookup(bw, &v.block)?.clone(),
        Atom::BlockNorm(b) => lookup(bw, b)?.clone(),
        Atom::Jet(j) | Atom::Abs(j) => {
            let mut w = lookup(dw, &j.dep)?.clone();
            for v in j.idx() {
                w = &w - lookup(bw, &v.block)?;
            }
            w
        }
        Atom::GradDot { left, right, block } => {
            &(lookup(dw, left)? + lookup(dw, right)?) - &(lookup(bw, block)? * &RatFunc::int(2))
        }
        Atom::CoordDot { coord, dep, grad } => &(lookup(bw, coord)? + lookup(dw, dep)?) - lookup(bw, grad)?,
        Atom::LapPow { dep, block, power } => lookup(dw, dep)? - &(&(power * &RatFunc::int(2)) * lookup(bw, block)?),
        Atom::Func(_) => return Err(ScalingError::UnweightableAtom(Expr::atom(a.clone()).to_string())),
    })
}

/// `w(t)` with `X t = w(t) t`; the sum of exponent-weighted atom weights.
pub fn term_weight(
    p: &Product,
    bw: &BTreeMap<String, RatFunc>,
    dw: &BTreeMap<String, RatFunc>,
) -> Result<RatFunc, ScalingError> {
    let mut w = RatFunc::zero();
    for (a, e) in p.factors() {
        w = &w + &(e * &atom_weight(a, bw, dw)?);
    }
    Ok(w)
}

/// `X^(k)L` for a diagonal dilation, at any dimension. Function symbols act
/// by `X F = Σ_β b^β u^β F_β`.
pub fn dilation_action(
    l: &Expr,
    bw: &BTreeMap<String, RatFunc>,
    dw: &BTreeMap<String, RatFunc>,
) -> Result<Expr, ScalingError> {
    let mut out = Expr::zero();
    for (p, c) in l.terms() {
        let mut plain = Product::one();
        let mut funcs = Vec::new();
        for (a, e) in p.factors() {
            match a {
                Atom::Func(f) => funcs.push((f.clone(), e.clone())),
                _ => plain = plain.mul(&Product::atom(a.clone(), e.clone())),
            }
        }
        let w = term_weight(&plain, bw, dw)?;
        out = &out + &Expr::term(c * &w, p.clone());
        for (f, e) in funcs {
            let fa = Atom::Func(f.clone());
            let rest = Expr::term(c * &e, p.with_exponent(&fa, &e - &RatFunc::one()));
            let mut xf = Expr::zero();
            for arg in &f.args {
                let b = lookup(dw, arg)?;
                let t = &Expr::dep(arg) * &Expr::atom(Atom::Func(f.differentiate(arg)));
                xf = &xf + &t.scale(b);
            }
            out = &out + &(&rest * &xf);
        }
    }
    Ok(out)
}

/// One linear equation `Σ coeffs[x]·x + constant = 0` in the unknown weights.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinearEq {
    pub coeffs: BTreeMap<String, RatFunc>,
    pub constant: RatFunc,
}

impl LinearEq {
    /// Split `e` into its linear part in `unknowns`; fails when `e` is not affine.
    pub fn from_ratfunc(e: &RatFunc, unknowns: &[String]) -> Result<LinearEq, ScalingError> {
        let den = e.denom();
        if unknowns.iter().any(|u| den.degree_in(u) > 0) {
            return Err(ScalingError::Nonlinear(e.to_string()));
        }
        let zero: BTreeMap<String, RatFunc> = unknowns.iter().map(|u| (u.clone(), RatFunc::zero())).collect();
        let constant = e.subst(&zero).ok_or_else(|| ScalingError::Nonlinear(e.to_string()))?;
        let mut coeffs = BTreeMap::new();
        let mut rebuilt = constant.clone();
        for u in unknowns {
            let d = e.numer().diff(u);
            if d.is_zero() {
                continue;
            }
            let c = RatFunc::new(d, den.clone()).expect("nonzero denominator");
            rebuilt = &rebuilt + &(&c * &RatFunc::var(u));
            coeffs.insert(u.clone(), c);
        }
        if rebuilt != *e {
            return Err(ScalingError::Nonlinear(e.to_string()));
        }
        Ok(LinearEq { coeffs, constant })
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }

    pub fn to_ratfunc(&self) -> RatFunc {
        let mut r = self.constant.clone();
        for (u, c) in &self.coeffs {
            r = &r + &(c * &RatFunc::var(u));
        }
        r
    }

    /// Canonical representative of the equation up to a nonzero factor.
    pub fn canonical(&self) -> Poly {
        canonical_poly(self.to_ratfunc().numer())
    }
}

/// Clear content and fix the sign so the grlex-leading coefficient is positive.
pub fn canonical_poly(p: &Poly) -> Poly {
    let (_, prim) = p.primitive_integer();
    match prim.lead_grlex() {
        Some((_, c)) if c < &num_rational::BigRational::from_integer(0.into()) => prim.neg(),
        _ => prim,
    }
}

/// Template `Σ_β coeffs[β]·u^β F_β + constant·F = 0` for one function symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalTemplate {
    pub function: FnSym,
    pub coeffs: BTreeMap<String, RatFunc>,
    pub constant: RatFunc,
}

/// Linear equations in the unknown weights plus function-symbol templates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalitySystem {
    pub unknowns: Vec<String>,
    pub equations: Vec<LinearEq>,
    pub templates: Vec<FunctionalTemplate>,
    pub trace: RatFunc,
}

/// The system `X^(k)L + L·trace = 0` for a dilation ansatz. At symbolic
/// dimension it comes from weight accounting; at concrete dimension from the
/// expanded prolongation.
pub fn criticality_system(l: &Expr, w: &WeightAssignment, ctx: &JetContext) -> Result<CriticalitySystem, ScalingError> {
    let (bw, dw) = (w.block_map(), w.dep_map());
    let trace = w.trace(ctx);
    let (residual, reference) = if ctx.is_concrete() {
        let gen = Generator::dilation(ctx, &bw, &dw)?;
        let le = ctx.expand(l)?;
        (&jet::apply_generator(&gen, l, ctx)? + &le.scale(&trace), le)
    } else {
        (&dilation_action(l, &bw, &dw)? + &l.scale(&trace), l.clone())
    };
    system_from_residual(&residual, &reference, w.unknowns(), trace)
}

/// Read equations off a residual. Coefficients are divided by the matching
/// coefficient of `reference` so that only the weight factor remains.
pub fn system_from_residual(
    residual: &Expr,
    reference: &Expr,
    unknowns: Vec<String>,
    trace: RatFunc,
) -> Result<CriticalitySystem, ScalingError> {
    let refc: BTreeMap<&Product, &RatFunc> = reference.terms().collect();
    let mut seen = BTreeMap::new();
    let mut templates: BTreeMap<(FnSym, Product), FunctionalTemplate> = BTreeMap::new();
    for (p, c) in residual.terms() {
        if let Some((f, beta, rest)) = split_func(p)? {
            let t = templates.entry((f.clone(), rest)).or_insert_with(|| FunctionalTemplate {
                function: f,
                coeffs: BTreeMap::new(),
                constant: RatFunc::zero(),
            });
            match beta {
                Some(b) => {
                    t.coeffs.insert(b, c.clone());
                }
                None => t.constant = c.clone(),
            }
            continue;
        }
        let c = match refc.get(p) {
            Some(r) => c / *r,
            None => c.clone(),
        };
        let eq = LinearEq::from_ratfunc(&c, &unknowns)?;
        seen.entry(eq.canonical()).or_insert(eq);
    }
    // normalize each template by the coefficient of F in the reference
    let mut out_templates = Vec::new();
    for ((f, rest), mut t) in templates {
        let key = rest.mul(&Product::atom(Atom::Func(f), RatFunc::one()));
        if let Some(r) = refc.get(&key) {
            t.constant = &t.constant / *r;
            for v in t.coeffs.values_mut() {
                *v = &*v / *r;
            }
        }
        out_templates.push(t);
    }
    Ok(CriticalitySystem { unknowns, equations: seen.into_values().collect(), templates: out_templates, trace })
}

/// `rest · u^β F_β` or `rest · F` with `rest` coordinate-only.
#[allow(clippy::type_complexity)]
fn split_func(p: &Product) -> Result<Option<(FnSym, Option<String>, Product)>, ScalingError> {
    let Some((fa, fe)) = p.factors().find(|(a, _)| matches!(a, Atom::Func(_))) else {
        return Ok(None);
    };
    let Atom::Func(f) = fa else { unreachable!() };
    let bad = || ScalingError::UnweightableAtom(p.to_string());
    if !fe.is_one() || f.partials().len() > 1 {
        return Err(bad());
    }
    let base = FnSym::new(&f.name, f.args.clone());
    let beta = f.partials().first().cloned();
    let mut rest = Product::one();
    for (a, e) in p.factors() {
        match a {
            Atom::Func(_) => {}
            Atom::Jet(j) if j.order() == 0 && Some(&j.dep) == beta.as_ref() && e.is_one() => {}
            a if a.is_coordinate_only() => rest = rest.mul(&Product::atom(a.clone(), e.clone())),
            _ => return Err(bad()),
        }
    }
    let expected_jet = beta.as_ref().map(|b| Atom::jet(b, vec![]));
    if let Some(j) = &expected_jet {
        if p.exponent(j).is_none() {
            return Err(bad());
        }
    }
    Ok(Some((base, beta, rest)))
}

#[cfg(test)]
mod tests;
