use std::collections::BTreeMap;

use num_rational::BigRational;
use rayon::prelude::*;

use super::CatalogEntry;
use crate::analysis::{analyze, AnalysisError, Checks, Status};
use crate::expr::RatFunc;
use crate::scaling::{CriticalityCondition, CriticalityOutcome};

/// Regression result for one catalog entry (and its power instance).
#[derive(Clone, Debug)]
pub struct EntryCheck {
    pub name: String,
    /// Headline condition, e.g. `p = (n + 2)/(n - 2)`.
    pub condition: String,
    pub symbolic_matches: bool,
    pub concrete: Option<Checks>,
    /// Residual of the critical dilation once the exponent is moved by 1/10.
    pub perturbed: Status,
    pub power: Option<Box<EntryCheck>>,
    pub error: Option<String>,
}

impl EntryCheck {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.symbolic_matches
            && self.concrete.as_ref().is_some_and(|c| !c.any_failed())
            && !self.perturbed.is_fail()
            && self.power.as_ref().map_or(true, |p| p.passed())
    }
}

/// The most specific condition of a solved model.
pub fn headline(c: &CriticalityCondition) -> String {
    let mut parts: Vec<String> = c.constraints.iter().map(|k| k.display_form()).collect();
    parts.extend(c.functional_conditions.iter().map(|f| f.to_string()));
    if parts.is_empty() {
        "critical unconditionally".into()
    } else {
        parts.join("; ")
    }
}

/// `X^(k)L + L·trace` with the critical weights, after moving `param` by 1/10.
pub fn perturbed_residual(e: &CatalogEntry, param: &str) -> Result<Status, AnalysisError> {
    let critical = analyze(&e.spec, &e.instance, false)?;
    let (bw, dw) = critical.model.dilation_weights(&critical.condition.solved_weights)?;
    let mut moved: BTreeMap<String, RatFunc> = e.instance.clone();
    let shift = RatFunc::constant(BigRational::new(1.into(), 10.into()));
    let v = moved.get(param).cloned().unwrap_or_else(RatFunc::zero);
    moved.insert(param.to_string(), &v + &shift);
    let m = e.spec.instantiate(&moved)?;
    let ctx = m.ctx()?;
    let r = m.q5_residual(&bw, &dw, &ctx)?;
    let consistent = matches!(m.criticality(&ctx)?, CriticalityOutcome::Critical(_));
    Ok(if !r.is_zero() && !consistent { Status::Pass("nonzero".into()) } else { Status::Fail("still critical".into()) })
}

fn run(e: &CatalogEntry) -> Result<EntryCheck, AnalysisError> {
    let sym = analyze(&e.spec, &BTreeMap::new(), false)?;
    let concrete = analyze(&e.spec, &e.instance, false)?;
    let perturbed = match &e.perturb {
        Some(p) => perturbed_residual(e, p)?,
        None => Status::Skipped("unknown nonlinearity".into()),
    };
    Ok(EntryCheck {
        name: e.name().to_string(),
        condition: headline(&sym.condition),
        symbolic_matches: sym.condition.equivalent(&e.expected),
        concrete: Some(concrete.checks),
        perturbed,
        power: e.power.as_deref().map(|p| Box::new(check_entry(p))),
        error: None,
    })
}

pub fn check_entry(e: &CatalogEntry) -> EntryCheck {
    run(e).unwrap_or_else(|err| EntryCheck {
        name: e.name().to_string(),
        condition: String::new(),
        symbolic_matches: false,
        concrete: None,
        perturbed: Status::Fail(err.to_string()),
        power: None,
        error: Some(err.to_string()),
    })
}

/// Check every entry in parallel; results keep the input order.
pub fn check_all(entries: &[CatalogEntry]) -> Vec<EntryCheck> {
    entries.par_iter().map(check_entry).collect()
}
