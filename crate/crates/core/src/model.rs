//! A variational model: blocks, dependents, parameters, Lagrangian, dilation
//! ansatz and (optionally) the Euler–Lagrange system it should produce.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::expr::{Bindings, Expr, ExprError, Param, Poly, RatFunc};
use crate::jet::{self, Block, Generator, JetContext, JetError, Size};
use crate::scaling::{
    self, CriticalityOutcome, CriticalitySystem, ExponentTarget, ScalingError, Weight, WeightAssignment,
};

/// `expr > 0`, or `expr >= 0` when not strict, over several parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub expr: RatFunc,
    pub strict: bool,
}

impl Inequality {
    /// `None` while parameters remain unbound.
    pub fn holds(&self) -> Option<bool> {
        let v = self.expr.as_constant()?;
        Some(v.is_positive() || (!self.strict && v.is_zero()))
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.strict { ">" } else { ">=" };
        if self.expr.denom() == &Poly::one() {
            write!(f, "{} {op} 0", self.expr.numer().to_string_positive_first())
        } else {
            write!(f, "{} {op} 0", self.expr)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    pub name: String,
    pub params: Vec<Param>,
    /// Joint conditions on the parameters, checked once they are bound.
    pub assumptions: Vec<Inequality>,
    pub blocks: Vec<Block>,
    pub dependents: Vec<String>,
    pub lagrangian: Expr,
    pub weights: WeightAssignment,
    /// Exponents reported in solved form.
    pub targets: Vec<ExponentTarget>,
    /// `(dependent, expression)` pairs, each equation reading `expression = 0`.
    pub system: Vec<(String, Expr)>,
}

impl ModelSpec {
    pub fn ctx(&self) -> Result<JetContext, JetError> {
        JetContext::new(self.blocks.clone(), self.dependents.clone())
    }

    /// Context with symbolic block sizes fixed.
    pub fn concrete_ctx(&self, dims: &BTreeMap<String, u32>) -> Result<JetContext, JetError> {
        let ctx = self.ctx()?.concretize(dims);
        ctx.require_concrete()?;
        Ok(ctx)
    }

    /// Parameters that size a block.
    pub fn dimension_params(&self) -> Vec<String> {
        self.blocks
            .iter()
            .filter_map(|b| match &b.size {
                Size::Symbolic(p) => Some(p.clone()),
                Size::Concrete(_) => None,
            })
            .collect()
    }

    pub fn criticality_system(&self, ctx: &JetContext) -> Result<CriticalitySystem, ScalingError> {
        scaling::criticality_system(&self.lagrangian, &self.weights, ctx)
    }

    /// Solve for the critical dilation in `ctx` (symbolic or concrete).
    pub fn criticality(&self, ctx: &JetContext) -> Result<CriticalityOutcome, ScalingError> {
        let sys = self.criticality_system(ctx)?;
        scaling::solve_criticality(&sys, &self.targets, &self.params)
    }

    /// Substitute parameter values throughout; bound parameters are dropped.
    pub fn instantiate(&self, values: &BTreeMap<String, RatFunc>) -> Result<ModelSpec, ExprError> {
        let b = Bindings { params: values.clone(), ..Default::default() };
        b.check(&self.params)?;
        let sub = |r: &RatFunc| r.subst(values).ok_or(ExprError::SingularSubstitution);
        let mut assumptions = Vec::new();
        for a in &self.assumptions {
            let bound = Inequality { expr: sub(&a.expr)?, strict: a.strict };
            match bound.holds() {
                Some(true) => {}
                Some(false) => return Err(ExprError::AssumptionViolated(a.to_string())),
                None => assumptions.push(bound),
            }
        }
        let weight = |w: &Weight| -> Result<Weight, ExprError> {
            Ok(match w {
                Weight::Known(r) => Weight::Known(sub(r)?),
                Weight::Unknown => Weight::Unknown,
            })
        };
        let mut weights = WeightAssignment::default();
        for (k, w) in &self.weights.blocks {
            weights.blocks.insert(k.clone(), weight(w)?);
        }
        for (k, w) in &self.weights.deps {
            weights.deps.insert(k.clone(), weight(w)?);
        }
        let mut blocks = self.blocks.clone();
        for blk in blocks.iter_mut() {
            if let Size::Symbolic(p) = &blk.size {
                if let Some(n) = values.get(p).and_then(RatFunc::as_i64) {
                    blk.size = Size::Concrete(u32::try_from(n).map_err(|_| ExprError::SingularSubstitution)?);
                }
            }
        }
        Ok(ModelSpec {
            name: self.name.clone(),
            params: self.params.iter().filter(|p| !values.contains_key(&p.name)).cloned().collect(),
            assumptions,
            blocks,
            dependents: self.dependents.clone(),
            lagrangian: self.lagrangian.substitute(&b)?,
            weights,
            targets: self.targets.iter().filter(|t| !values.contains_key(&t.param)).cloned().collect(),
            system: self
                .system
                .iter()
                .map(|(d, e)| Ok((d.clone(), e.substitute(&b)?)))
                .collect::<Result<_, ExprError>>()?,
        })
    }

    /// Weights with every unknown replaced by `solved` (free unknowns by 0).
    pub fn dilation_weights(
        &self,
        solved: &BTreeMap<String, RatFunc>,
    ) -> Result<(BTreeMap<String, RatFunc>, BTreeMap<String, RatFunc>), ScalingError> {
        let free: BTreeMap<String, RatFunc> = self
            .weights
            .unknowns()
            .into_iter()
            .filter(|u| !solved.contains_key(u))
            .map(|u| (u, RatFunc::zero()))
            .collect();
        let mut all = free.clone();
        for (k, v) in solved {
            all.insert(k.clone(), v.subst(&free).ok_or(ExprError::SingularSubstitution)?);
        }
        let sub = |m: BTreeMap<String, RatFunc>| -> Result<BTreeMap<String, RatFunc>, ScalingError> {
            m.into_iter().map(|(k, v)| Ok((k, v.subst(&all).ok_or(ExprError::SingularSubstitution)?))).collect()
        };
        Ok((sub(self.weights.block_map())?, sub(self.weights.dep_map())?))
    }

    /// `X^(k)L + L·trace` for explicit weights, in `ctx`.
    pub fn q5_residual(
        &self,
        bw: &BTreeMap<String, RatFunc>,
        dw: &BTreeMap<String, RatFunc>,
        ctx: &JetContext,
    ) -> Result<Expr, ScalingError> {
        let trace = ctx.trace(bw);
        if ctx.is_concrete() {
            let gen = Generator::dilation(ctx, bw, dw)?;
            let xl = jet::apply_generator(&gen, &self.lagrangian, ctx)?;
            Ok(&xl + &ctx.expand(&self.lagrangian)?.scale(&trace))
        } else {
            let xl = scaling::dilation_action(&self.lagrangian, bw, dw)?;
            Ok(&xl + &self.lagrangian.scale(&trace))
        }
    }

    /// Euler–Lagrange expressions `E_α(L)` at concrete dimension.
    pub fn euler_system(&self, ctx: &JetContext) -> Result<Vec<(String, Expr)>, JetError> {
        self.dependents.iter().map(|d| Ok((d.clone(), jet::euler(&self.lagrangian, d, ctx)?))).collect()
    }
}

/// `a == b` or `a == −b` after expansion in `ctx`.
pub fn equal_up_to_sign(a: &Expr, b: &Expr, ctx: &JetContext) -> Result<bool, JetError> {
    let (a, b) = (ctx.expand(a)?, ctx.expand(b)?);
    Ok((&a - &b).is_zero() || (&a + &b).is_zero())
}
