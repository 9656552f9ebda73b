//! The Noether identity, divergence tests, explicit divergence currents and
//! Pokhozhaev identity assembly.
//!
//! Currents are built by integration by parts. For a characteristic `Q` and
//! any differential function `R`,
//!
//! ```text
//! Σ_J D_J(Q^α) ∂R/∂u^α_J = Q^α E_α(R) + D_i N^i(Q, R)
//! ```
//!
//! where `N^i` peels one total derivative at a time off each `D_J(Q)`. With
//! `Q = η − u_j ξ^j` this gives the Noether current `L ξ^i + N^i(Q, L)`; with
//! `Q = u` and `E(R) = 0` it inverts the divergence on each homogeneous
//! component (scaling degree `d` contributes `N^i / d`).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::expr::{Atom, Expr, ExprError, Jet, Product, RatFunc, Var};
use crate::jet::{self, Generator, JetContext, JetError};
use crate::scaling::{self, ScalingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NoetherError {
    #[error("expression is not a total divergence")]
    NotADivergence,
    #[error("cannot build a current for term {0}")]
    Unsupported(String),
    #[error("dilation leaves derivative terms in the identity: {0}")]
    NotVariational(String),
    #[error("constructed current does not reproduce the divergence")]
    CurrentMismatch,
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Scaling(#[from] ScalingError),
}

/// `X^(k)L + L D_iξ^i = characteristic + Σ_i D_i current_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoetherDecomposition {
    pub lhs: Expr,
    pub characteristic: Expr,
    pub current: Vec<Expr>,
}

impl NoetherDecomposition {
    /// `lhs − characteristic − Σ D_i current_i`, zero for a valid decomposition.
    pub fn defect(&self, ctx: &JetContext) -> Result<Expr, NoetherError> {
        let div = jet::divergence(&self.current, ctx)?;
        Ok(&(&ctx.expand(&self.lhs)? - &self.characteristic) - &div)
    }
}

/// `N^i(Q, R)` together with `Σ_α Q^α E_α(R)`.
pub fn ibp_current(q: &BTreeMap<String, Expr>, r: &Expr, ctx: &JetContext) -> Result<(Expr, Vec<Expr>), NoetherError> {
    let vars = ctx.vars()?;
    let pos: BTreeMap<&Var, usize> = vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let r = ctx.expand(r)?;
    let mut current = vec![Expr::zero(); vars.len()];
    let mut characteristic = Expr::zero();
    for j in ctx.jet_deps(&r)? {
        let Some(qa) = q.get(&j.dep) else { continue };
        if qa.is_zero() {
            continue;
        }
        let mut p = r.diff(&Atom::Jet(j.clone()))?;
        if p.is_zero() {
            continue;
        }
        let idx = j.idx().to_vec();
        for k in 0..idx.len() {
            // D_{idx[k..]}Q · P  =  D_{idx[k]}( D_{idx[k+1..]}Q · P ) − D_{idx[k+1..]}Q · D_{idx[k]}P
            let dq = jet::total_derivative_multi(qa, &idx[k + 1..], ctx)?;
            let slot = pos[&idx[k]];
            current[slot] = &current[slot] + &(&dq * &p);
            p = -&jet::total_derivative(&p, &idx[k], ctx)?;
        }
        characteristic = &characteristic + &(&ctx.expand(qa)? * &p);
    }
    Ok((characteristic, current))
}

/// `X^(k)L + L D_iξ^i − E_α(L) Q^α`; always a total divergence.
pub fn noether_residual(gen: &Generator, l: &Expr, ctx: &JetContext) -> Result<Expr, NoetherError> {
    let lhs = noether_lhs(gen, l, ctx)?;
    let mut chi = Expr::zero();
    for d in &ctx.dependents {
        let q = gen.characteristic(d, ctx)?;
        if q.is_zero() {
            continue;
        }
        chi = &chi + &(&jet::euler(l, d, ctx)? * &ctx.expand(&q)?);
    }
    Ok(&lhs - &chi)
}

fn noether_lhs(gen: &Generator, l: &Expr, ctx: &JetContext) -> Result<Expr, NoetherError> {
    let xl = jet::apply_generator(gen, l, ctx)?;
    let div = gen.divergence(ctx)?;
    Ok(&xl + &(&ctx.expand(l)? * &div))
}

/// Both sides of the Noether identity with an explicit current.
pub fn noether_decomposition(
    gen: &Generator,
    l: &Expr,
    ctx: &JetContext,
) -> Result<NoetherDecomposition, NoetherError> {
    let lhs = noether_lhs(gen, l, ctx)?;
    let mut q = BTreeMap::new();
    for d in &ctx.dependents {
        q.insert(d.clone(), ctx.expand(&gen.characteristic(d, ctx)?)?);
    }
    let (characteristic, mut current) = ibp_current(&q, l, ctx)?;
    let le = ctx.expand(l)?;
    for (slot, v) in ctx.vars()?.iter().enumerate() {
        let xi = gen.xi_of(v);
        if !xi.is_zero() {
            current[slot] = &current[slot] + &(&le * &ctx.expand(&xi)?);
        }
    }
    Ok(NoetherDecomposition { lhs, characteristic, current })
}

/// `E_α(R) = 0` for every dependent.
pub fn is_total_divergence(r: &Expr, ctx: &JetContext) -> Result<bool, NoetherError> {
    for d in &ctx.dependents {
        if !jet::euler(r, d, ctx)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

const FN_PEEL_LIMIT: usize = 10_000;

/// A current `B` with `Σ_i D_i B_i = R`.
pub fn divergence_current(r: &Expr, ctx: &JetContext) -> Result<Vec<Expr>, NoetherError> {
    let r = ctx.expand(r)?;
    if !is_total_divergence(&r, ctx)? {
        return Err(NoetherError::NotADivergence);
    }
    let vars = ctx.vars()?;
    let mut current = vec![Expr::zero(); vars.len()];
    let mut rest = peel_functions(&r, &vars, &mut current, ctx)?;

    // coordinate-only part: antiderivative in the first coordinate
    let mut coord_part = Expr::zero();
    for (p, c) in rest.terms() {
        if p.factors().all(|(a, _)| a.is_coordinate_only()) {
            coord_part = &coord_part + &Expr::term(c.clone(), p.clone());
        }
    }
    if !coord_part.is_zero() {
        let v0 = vars.first().ok_or(NoetherError::NotADivergence)?;
        current[0] = &current[0] + &antiderivative(&coord_part, v0)?;
        rest = &rest - &coord_part;
    }

    if !rest.is_zero() {
        let q: BTreeMap<String, Expr> = ctx.dependents.iter().map(|d| (d.clone(), Expr::dep(d))).collect();
        let (chi, n) = ibp_current(&q, &rest, ctx)?;
        if !chi.is_zero() {
            return Err(NoetherError::NotADivergence);
        }
        for (slot, ni) in n.into_iter().enumerate() {
            let mut scaled = Expr::zero();
            for (p, c) in ni.terms() {
                let d = p.u_degree().ok_or_else(|| NoetherError::Unsupported(p.to_string()))?;
                let c2 = c.checked_div(&d).ok_or_else(|| NoetherError::Unsupported(p.to_string()))?;
                scaled = &scaled + &Expr::term(c2, p.clone());
            }
            current[slot] = &current[slot] + &scaled;
        }
    }

    if !(&jet::divergence(&current, ctx)? - &r).is_zero() {
        return Err(NoetherError::CurrentMismatch);
    }
    Ok(current)
}

/// Remove terms `c(x) · F_{K+β} · u^β_i` by subtracting `D_i(c(x) F_K)`.
fn peel_functions(r: &Expr, vars: &[Var], current: &mut [Expr], ctx: &JetContext) -> Result<Expr, NoetherError> {
    let mut r = r.clone();
    for _ in 0..FN_PEEL_LIMIT {
        let Some((slot, g)) = r.terms().find_map(|(p, c)| peelable(p, c, vars)) else {
            break;
        };
        current[slot] = &current[slot] + &g;
        r = &r - &jet::total_derivative(&g, &vars[slot], ctx)?;
    }
    if let Some((p, _)) = r.terms().find(|(p, _)| p.factors().any(|(a, _)| matches!(a, Atom::Func(_)))) {
        return Err(NoetherError::Unsupported(p.to_string()));
    }
    Ok(r)
}

fn peelable(p: &Product, c: &RatFunc, vars: &[Var]) -> Option<(usize, Expr)> {
    let mut func = None;
    let mut jet: Option<Jet> = None;
    let mut coord = Product::one();
    for (a, e) in p.factors() {
        match a {
            Atom::Func(f) if e.is_one() && func.is_none() => func = Some(f.clone()),
            Atom::Jet(j) if e.is_one() && j.order() == 1 && jet.is_none() => jet = Some(j.clone()),
            a if a.is_coordinate_only() => coord = coord.mul(&Product::atom(a.clone(), e.clone())),
            _ => return None,
        }
    }
    let (f, j) = (func?, jet?);
    let mut partials = f.partials().to_vec();
    let at = partials.iter().position(|d| *d == j.dep)?;
    partials.remove(at);
    let lowered = crate::expr::FnSym::with_partials(&f.name, f.args.clone(), partials);
    let slot = vars.iter().position(|v| *v == j.idx()[0])?;
    let g = Expr::atom(Atom::Func(lowered)).mul_product(&coord).scale(c);
    Some((slot, g))
}

fn antiderivative(e: &Expr, v: &Var) -> Result<Expr, NoetherError> {
    let mut out = Expr::zero();
    let xv = Atom::Indep(v.clone());
    for (p, c) in e.terms() {
        if p.factors().any(|(a, _)| matches!(a, Atom::BlockNorm(b) if *b == v.block)) {
            return Err(NoetherError::Unsupported(p.to_string()));
        }
        let k = p.exponent(&xv).cloned().unwrap_or_else(RatFunc::zero);
        let k1 = &k + &RatFunc::one();
        if k1.is_zero() {
            return Err(NoetherError::Unsupported(p.to_string()));
        }
        out = &out + &Expr::term(c / &k1, p.with_exponent(&xv, k1.clone()));
    }
    Ok(out)
}

/// Integral identity obtained from the Noether identity for a dilation:
/// on solutions, `∫ interior = ∮ boundary_current · ν`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PokhozhaevIdentity {
    /// `X^(k)L + L Σ a_i`, free of derivative terms for an admissible dilation.
    pub interior: Expr,
    /// `E_α(L) Q^α`, vanishing on solutions (concrete dimension only).
    pub characteristic: Option<Expr>,
    /// The Noether current (concrete dimension only).
    pub boundary_current: Option<Vec<Expr>>,
    pub block_weights: BTreeMap<String, RatFunc>,
    pub dep_weights: BTreeMap<String, RatFunc>,
}

/// Assemble the identity for a dilation. At symbolic dimension only the
/// interior density is produced.
pub fn pokhozhaev(
    l: &Expr,
    block_weights: &BTreeMap<String, RatFunc>,
    dep_weights: &BTreeMap<String, RatFunc>,
    ctx: &JetContext,
) -> Result<PokhozhaevIdentity, NoetherError> {
    let trace = ctx.trace(block_weights);
    let (interior, characteristic, boundary_current) = if ctx.is_concrete() {
        let gen = Generator::dilation(ctx, block_weights, dep_weights)?;
        let dec = noether_decomposition(&gen, l, ctx)?;
        (dec.lhs.clone(), Some(dec.characteristic), Some(dec.current))
    } else {
        let xl = scaling::dilation_action(l, block_weights, dep_weights)?;
        (&xl + &l.scale(&trace), None, None)
    };
    if let Some((p, _)) = interior.terms().find(|(p, _)| has_derivatives(p)) {
        return Err(NoetherError::NotVariational(p.to_string()));
    }
    Ok(PokhozhaevIdentity {
        interior,
        characteristic,
        boundary_current,
        block_weights: block_weights.clone(),
        dep_weights: dep_weights.clone(),
    })
}

fn has_derivatives(p: &Product) -> bool {
    p.factors().any(|(a, _)| match a {
        Atom::Jet(j) | Atom::Abs(j) => j.order() > 0,
        Atom::GradDot { .. } | Atom::CoordDot { .. } | Atom::LapPow { .. } => true,
        _ => false,
    })
}
