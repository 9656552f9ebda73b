use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{evaluate, random_point, JetPoint, Mode, NumError, Value};
use crate::expr::{Atom, Bindings, Expr};
use crate::jet::JetContext;

/// Relative tolerance for float-mode trials.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, Default)]
pub struct CheckOptions {
    pub trials: usize,
    pub seed: u64,
    pub params: BTreeMap<String, BigRational>,
    /// Replacements for function symbols, in their arguments.
    pub functions: BTreeMap<String, Expr>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub trials: usize,
    pub failures: usize,
    pub max_relative_error: f64,
    /// Every trial ran in exact arithmetic.
    pub exact: bool,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn needed_order(e: &Expr, ctx: &JetContext) -> Result<usize, NumError> {
    let mut k = ctx.max_jet_order(e)?;
    for a in e.atoms() {
        match a {
            Atom::LapPow { power, .. } => k = k.max(2 * power.as_i64().unwrap_or(0).max(0) as usize),
            Atom::GradDot { .. } | Atom::CoordDot { .. } => k = k.max(1),
            _ => {}
        }
    }
    Ok(k)
}

struct Trial {
    failed: bool,
    error: f64,
    exact: bool,
}

fn trial(lhs: &Expr, rhs: &Expr, pt: &JetPoint, opts: &CheckOptions, ctx: &JetContext) -> Result<Trial, NumError> {
    let exact = evaluate(lhs, pt, &opts.params, Mode::Exact, ctx)
        .and_then(|l| Ok((l, evaluate(rhs, pt, &opts.params, Mode::Exact, ctx)?)));
    match exact {
        Ok((Value::Exact(l), Value::Exact(r))) => {
            let (lf, rf) = (Value::Exact(l.clone()).to_f64(), Value::Exact(r.clone()).to_f64());
            let error = (lf - rf).abs() / 1f64.max(lf.abs()).max(rf.abs());
            Ok(Trial { failed: l != r, error, exact: true })
        }
        Err(NumError::Irrational(_) | NumError::NegativeBaseExact(_)) | Ok(_) => {
            let l = evaluate(lhs, pt, &opts.params, Mode::Float, ctx)?.to_f64();
            let r = evaluate(rhs, pt, &opts.params, Mode::Float, ctx)?.to_f64();
            let error = (l - r).abs() / 1f64.max(l.abs()).max(r.abs());
            Ok(Trial { failed: !(error <= TOLERANCE), error, exact: false })
        }
        Err(e) => Err(e),
    }
}

/// Compare `lhs` and `rhs` on `opts.trials` random jets. Exact trials demand
/// equality; trials with irrational powers fall back to floats and the
/// relative tolerance. Trials are seeded independently, so the report does
/// not depend on scheduling.
pub fn check_identity(lhs: &Expr, rhs: &Expr, ctx: &JetContext, opts: &CheckOptions) -> Result<CheckReport, NumError> {
    ctx.require_concrete()?;
    let b = Bindings { functions: opts.functions.clone(), ..Default::default() };
    let (lhs, rhs) = if opts.functions.is_empty() {
        (lhs.clone(), rhs.clone())
    } else {
        (
            lhs.substitute(&b).map_err(crate::jet::JetError::from)?,
            rhs.substitute(&b).map_err(crate::jet::JetError::from)?,
        )
    };
    let degree = (needed_order(&lhs, ctx)?.max(needed_order(&rhs, ctx)?) + 2) as u32;
    let results: Vec<Trial> = (0..opts.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(i as u64);
            let pt = random_point(&mut rng, ctx, degree)?;
            trial(&lhs, &rhs, &pt, opts, ctx)
        })
        .collect::<Result<_, _>>()?;
    Ok(CheckReport {
        trials: opts.trials,
        failures: results.iter().filter(|t| t.failed).count(),
        max_relative_error: results.iter().map(|t| t.error).fold(0.0, f64::max),
        exact: results.iter().all(|t| t.exact),
    })
}
