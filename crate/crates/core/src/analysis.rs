//! End-to-end analysis of a model: criticality, verification checks and the
//! Pokhozhaev identity.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::expr::{Atom, Expr, ExprError, RatFunc};
use crate::jet::{self, Generator, JetContext, JetError, Size};
use crate::model::{equal_up_to_sign, ModelSpec};
use crate::noether::{self, NoetherError, PokhozhaevIdentity};
use crate::numcheck::{self, CheckOptions, CheckReport, NumError};
use crate::scaling::{self, CriticalityCondition, CriticalityOutcome, ScalingError};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("equation for {0} is not the Euler-Lagrange equation of the Lagrangian")]
    SystemMismatch(String),
    #[error("no dilation makes the Lagrangian critical")]
    NoCriticalDilation,
    #[error("{0} is not a dimension of the model")]
    NotADimension(String),
    #[error("cannot read a critical value from the run at {0}")]
    NoValue(String),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Scaling(#[from] ScalingError),
    #[error(transparent)]
    Noether(#[from] NoetherError),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Outcome of one verification step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass(String),
    Fail(String),
    Skipped(String),
}

impl Status {
    pub fn is_fail(&self) -> bool {
        matches!(self, Status::Fail(_))
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass(s) => write!(f, "pass ({s})"),
            Status::Fail(s) => write!(f, "fail ({s})"),
            Status::Skipped(s) => write!(f, "skipped ({s})"),
        }
    }
}

impl Serialize for Status {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Checks {
    pub q5_residual: Status,
    pub noether: Status,
    pub divergence_roundtrip: Status,
}

impl Checks {
    pub fn any_failed(&self) -> bool {
        self.q5_residual.is_fail() || self.noether.is_fail() || self.divergence_roundtrip.is_fail()
    }
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub model: ModelSpec,
    pub ctx: JetContext,
    pub condition: CriticalityCondition,
    /// Block and dependent weights; free unknowns stay symbolic.
    pub weights: BTreeMap<String, RatFunc>,
    pub checks: Checks,
    pub pokhozhaev: Option<PokhozhaevIdentity>,
}

impl Analysis {
    /// Block sizes, symbolic or concrete.
    pub fn dimensions(&self) -> BTreeMap<String, String> {
        self.ctx
            .blocks
            .iter()
            .map(|b| {
                let s = match &b.size {
                    Size::Concrete(n) => n.to_string(),
                    Size::Symbolic(p) => p.clone(),
                };
                (b.name.clone(), s)
            })
            .collect()
    }
}

/// Smallest integer at least 3 allowed by the parameter's assumption.
fn default_dim(m: &ModelSpec, p: &str) -> u32 {
    (3..)
        .find(|n| {
            m.params.iter().filter(|q| q.name == p).all(|q| q.check(&BigRational::from_integer((*n).into())).is_ok())
        })
        .unwrap_or(3)
}

fn verification_ctx(m: &ModelSpec) -> Result<JetContext, JetError> {
    let dims = m.dimension_params().into_iter().map(|p| (p.clone(), default_dim(m, &p))).collect();
    m.concrete_ctx(&dims)
}

/// Every stored equation must equal its Euler–Lagrange expression up to sign.
/// Operators with symbolic order cannot be expanded and are not checked.
pub fn check_system(m: &ModelSpec) -> Result<(), AnalysisError> {
    if m.system.is_empty() {
        return Ok(());
    }
    let ctx = verification_ctx(m)?;
    for (d, eq) in &m.system {
        let el = match jet::euler(&m.lagrangian, d, &ctx) {
            Err(JetError::Unexpandable(_)) => return Ok(()),
            r => r?,
        };
        if !equal_up_to_sign(&el, eq, &ctx)? {
            return Err(AnalysisError::SystemMismatch(d.clone()));
        }
    }
    Ok(())
}

fn vanishes_mod(c: &RatFunc, cond: &CriticalityCondition) -> bool {
    c.is_zero() || cond.constraints.iter().any(|k| c.numer().div_exact(&k.poly).is_some())
}

/// Classify `X^(k)L + L·trace` under the solved condition.
pub fn classify_residual(r: &Expr, cond: &CriticalityCondition) -> Status {
    if r.is_zero() {
        return Status::Pass("zero".into());
    }
    let mut functional = false;
    for (p, c) in r.terms() {
        if p.factors().any(|(a, _)| matches!(a, Atom::Func(_))) {
            functional = true;
        } else if !vanishes_mod(c, cond) {
            return Status::Fail("nonzero".into());
        }
    }
    if functional {
        Status::Pass("zero under the functional conditions".into())
    } else {
        Status::Pass("zero under the constraints".into())
    }
}

fn concrete_checks(m: &ModelSpec, gen: &Generator, ctx: &JetContext) -> Result<(Status, Status), AnalysisError> {
    let dec = noether::noether_decomposition(gen, &m.lagrangian, ctx)?;
    let noether =
        if dec.defect(ctx)?.is_zero() { Status::Pass("exact".into()) } else { Status::Fail("nonzero defect".into()) };
    let r = noether::noether_residual(gen, &m.lagrangian, ctx)?;
    let roundtrip = match noether::divergence_current(&r, ctx) {
        Ok(b) if (&jet::divergence(&b, ctx)? - &r).is_zero() => Status::Pass("exact".into()),
        Ok(_) => Status::Fail("current does not reproduce the residual".into()),
        Err(e) => Status::Fail(e.to_string()),
    };
    Ok((noether, roundtrip))
}

/// Analyze `spec` after substituting `values` (dimensions and, optionally,
/// exponents). Concrete dimensions enable the Noether checks.
pub fn analyze(
    spec: &ModelSpec,
    values: &BTreeMap<String, RatFunc>,
    with_pokhozhaev: bool,
) -> Result<Analysis, AnalysisError> {
    let model = if values.is_empty() { spec.clone() } else { spec.instantiate(values)? };
    check_system(&model)?;
    let ctx = model.ctx()?;
    let condition = match model.criticality(&ctx)? {
        CriticalityOutcome::Critical(c) => c,
        CriticalityOutcome::Inconsistent => return Err(AnalysisError::NoCriticalDilation),
    };
    let (bw, dw) = model.dilation_weights(&condition.solved_weights)?;
    let q5 = classify_residual(&model.q5_residual(&bw, &dw, &ctx)?, &condition);
    let (noether, divergence_roundtrip) = if ctx.is_concrete() {
        let gen = Generator::dilation(&ctx, &bw, &dw)?;
        concrete_checks(&model, &gen, &ctx)?
    } else {
        let why = || Status::Skipped("symbolic dimension".into());
        (why(), why())
    };
    let mut weights = model.weights.block_map();
    for (d, w) in model.weights.dep_map() {
        weights.insert(d, w.subst(&condition.solved_weights).ok_or(ExprError::SingularSubstitution)?);
    }
    let pokhozhaev = if with_pokhozhaev { Some(noether::pokhozhaev(&model.lagrangian, &bw, &dw, &ctx)?) } else { None };
    Ok(Analysis {
        model,
        ctx,
        condition,
        weights,
        checks: Checks { q5_residual: q5, noether, divergence_roundtrip },
        pokhozhaev,
    })
}

/// Stand-in for each unknown function: `Σ args³ + Π args`.
pub fn default_functions(m: &ModelSpec) -> BTreeMap<String, Expr> {
    let mut out = BTreeMap::new();
    for a in m.lagrangian.atoms() {
        if let Atom::Func(f) = a {
            let deps: Vec<Expr> = f.args.iter().map(|d| Expr::dep(d)).collect();
            let cubes = deps.iter().fold(Expr::zero(), |s, d| &s + &d.pow_u32(3));
            let prod = deps.iter().fold(Expr::one(), |s, d| &s * d);
            out.entry(f.name.clone()).or_insert(&cubes + &prod);
        }
    }
    out
}

/// Numeric check of the Noether identity for the critical dilation.
pub fn verify(
    spec: &ModelSpec,
    values: &BTreeMap<String, RatFunc>,
    trials: usize,
    seed: u64,
) -> Result<CheckReport, AnalysisError> {
    let a = analyze(spec, values, false)?;
    a.ctx.require_concrete()?;
    let (bw, dw) = a.model.dilation_weights(&a.condition.solved_weights)?;
    let gen = Generator::dilation(&a.ctx, &bw, &dw)?;
    let dec = noether::noether_decomposition(&gen, &a.model.lagrangian, &a.ctx)?;
    let rhs = &dec.characteristic + &jet::divergence(&dec.current, &a.ctx)?;
    let opts = CheckOptions { trials, seed, params: BTreeMap::new(), functions: default_functions(&a.model) };
    Ok(numcheck::check_identity(&dec.lhs, &rhs, &a.ctx, &opts)?)
}

/// The run's critical value: the first solved exponent, else the first
/// homogeneity degree.
fn critical_value(spec: &ModelSpec, c: &CriticalityCondition) -> Option<BigRational> {
    spec.targets
        .iter()
        .find_map(|t| c.solved_exponent(&t.param))
        .or_else(|| c.functional_conditions.first().map(|f| &f.degree))
        .and_then(RatFunc::as_constant)
}

/// Solve at each concrete dimension and interpolate the critical value as a
/// degree-(1,1) rational function of `param`.
pub fn reconstruct(
    spec: &ModelSpec,
    param: &str,
    dims: &[i64],
) -> Result<(RatFunc, Vec<(BigRational, BigRational)>), AnalysisError> {
    if !spec.dimension_params().iter().any(|p| p == param) {
        return Err(AnalysisError::NotADimension(param.to_string()));
    }
    let mut samples = Vec::new();
    for &d in dims {
        let m = spec.instantiate(&[(param.to_string(), RatFunc::int(d))].into())?;
        let ctx = m.ctx()?;
        let c = match m.criticality(&ctx)? {
            CriticalityOutcome::Critical(c) => c,
            CriticalityOutcome::Inconsistent => return Err(AnalysisError::NoCriticalDilation),
        };
        let v = critical_value(spec, &c).ok_or_else(|| AnalysisError::NoValue(format!("{param} = {d}")))?;
        samples.push((BigRational::from_integer(d.into()), v));
    }
    Ok((scaling::reconstruct_rational(&samples, 1, 1, param)?, samples))
}
