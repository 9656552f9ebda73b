use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;

use super::{canonical_poly, CriticalitySystem, FunctionalTemplate, LinearEq, ScalingError};
use crate::expr::{Param, Poly, RatFunc};

/// An exponent solved for in display form, `param + offset = value`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExponentTarget {
    pub param: String,
    pub offset: i64,
}

impl ExponentTarget {
    pub fn new(param: &str) -> Self {
        ExponentTarget { param: param.to_string(), offset: 0 }
    }

    pub fn shifted(param: &str, offset: i64) -> Self {
        ExponentTarget { param: param.to_string(), offset }
    }
}

impl fmt::Display for ExponentTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.offset {
            0 => write!(f, "{}", self.param),
            k if k > 0 => write!(f, "{} + {k}", self.param),
            k => write!(f, "{} - {}", self.param, -k),
        }
    }
}

/// `1/(first + 1) + 1/(second + 1) = value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperbola {
    pub first: String,
    pub second: String,
    pub value: RatFunc,
}

impl fmt::Display for Hyperbola {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/({} + 1) + 1/({} + 1) = {}", self.first, self.second, self.value)
    }
}

/// A polynomial relation among parameters, `poly = 0`, in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub poly: Poly,
    pub solved: Option<(ExponentTarget, RatFunc)>,
    pub hyperbola: Option<Hyperbola>,
}

impl Constraint {
    pub fn new(poly: Poly, targets: &[ExponentTarget]) -> Constraint {
        let poly = canonical_poly(&poly);
        let present: Vec<&ExponentTarget> = targets.iter().filter(|t| poly.degree_in(&t.param) > 0).collect();
        let solved = match present.as_slice() {
            [t] => solve_linear(&poly, &t.param).map(|v| ((*t).clone(), &v + &RatFunc::int(t.offset))),
            _ => None,
        };
        let hyperbola = match present.as_slice() {
            [s, t] => hyperbola(&poly, &s.param, &t.param),
            _ => None,
        };
        Constraint { poly, solved, hyperbola }
    }

    /// The most readable form: solved, hyperbola, else the canonical polynomial.
    pub fn display_form(&self) -> String {
        if let Some((t, v)) = &self.solved {
            format!("{t} = {v}")
        } else if let Some(h) = &self.hyperbola {
            h.to_string()
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0", self.poly)
    }
}

fn solve_linear(poly: &Poly, var: &str) -> Option<RatFunc> {
    let c = poly.coeffs_in(var);
    if c.len() != 2 || c[1].is_zero() {
        return None;
    }
    RatFunc::new(c[0].neg(), c[1].clone())
}

fn hyperbola(poly: &Poly, p: &str, q: &str) -> Option<Hyperbola> {
    let (pp, qq) = ("__hyp_p", "__hyp_q");
    let shift: BTreeMap<String, RatFunc> =
        [(p.to_string(), &RatFunc::var(pp) - &RatFunc::one()), (q.to_string(), &RatFunc::var(qq) - &RatFunc::one())]
            .into();
    let shifted = RatFunc::from_poly(poly.clone()).subst(&shift)?;
    let by_p = shifted.numer().coeffs_in(pp);
    if by_p.len() != 2 {
        return None;
    }
    let c0 = by_p[0].coeffs_in(qq);
    let c1 = by_p[1].coeffs_in(qq);
    let (k, k2, m) = match (c0.as_slice(), c1.as_slice()) {
        ([z, k], [k2, m]) if z.is_zero() => (k, k2, m),
        _ => return None,
    };
    if k != k2 || k.is_zero() {
        return None;
    }
    let (first, second) = if p <= q { (p, q) } else { (q, p) };
    Some(Hyperbola { first: first.into(), second: second.into(), value: -&RatFunc::new(m.clone(), k.clone())? })
}

/// `Σ coefficients[i]·u^i F_{u^i} = degree·F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalCondition {
    pub function: String,
    pub args: Vec<String>,
    pub coefficients: Vec<RatFunc>,
    pub degree: RatFunc,
    /// Free weight parameters surviving in the coefficients.
    pub parameters: Vec<String>,
}

fn factor_string(c: &RatFunc) -> Option<String> {
    if c.is_one() {
        None
    } else if c.numer().is_single_term() {
        Some(c.to_string())
    } else {
        Some(format!("({c})"))
    }
}

impl fmt::Display for FunctionalCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (arg, c) in self.args.iter().zip(&self.coefficients) {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative_display();
            let c = if neg { -c } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                _ => {}
            }
            first = false;
            if let Some(s) = factor_string(&c) {
                write!(f, "{s}*")?;
            }
            write!(f, "{arg}*{}_{arg}", self.function)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " = ")?;
        match factor_string(&self.degree) {
            Some(s) => write!(f, "{s}*{}", self.function),
            None => write!(f, "{}", self.function),
        }
    }
}

/// Solved dilation weights and the resulting conditions on the parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalityCondition {
    pub solved_weights: BTreeMap<String, RatFunc>,
    pub free_weights: Vec<String>,
    pub constraints: Vec<Constraint>,
    pub functional_conditions: Vec<FunctionalCondition>,
    /// Weighted dimension `Σ size_B a_B` under the solved weights.
    pub trace: RatFunc,
}

impl CriticalityCondition {
    /// Critical for every parameter value.
    pub fn is_unconditional(&self) -> bool {
        self.constraints.is_empty() && self.functional_conditions.is_empty()
    }

    /// The solved value of an exponent target, if some constraint yields one.
    pub fn solved_exponent(&self, param: &str) -> Option<&RatFunc> {
        self.constraints.iter().filter_map(|c| c.solved.as_ref()).find(|(t, _)| t.param == param).map(|(_, v)| v)
    }

    /// Same constraints, functional conditions and free weights; solved
    /// weights and trace agree modulo some constraint.
    pub fn equivalent(&self, other: &CriticalityCondition) -> bool {
        let polys = |c: &CriticalityCondition| c.constraints.iter().map(|k| k.poly.clone()).collect::<BTreeSet<_>>();
        if polys(self) != polys(other)
            || self.functional_conditions != other.functional_conditions
            || self.free_weights != other.free_weights
            || self.solved_weights.keys().ne(other.solved_weights.keys())
        {
            return false;
        }
        let agree = |a: &RatFunc, b: &RatFunc| {
            let d = a - b;
            d.is_zero() || self.constraints.iter().any(|c| d.numer().div_exact(&c.poly).is_some())
        };
        agree(&self.trace, &other.trace) && self.solved_weights.iter().all(|(k, v)| agree(v, &other.solved_weights[k]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CriticalityOutcome {
    Critical(CriticalityCondition),
    /// The system forces a nonzero constant to vanish.
    Inconsistent,
}

/// Univariate linear polynomial `c1·v + c0` → `(v, −c0/c1)`.
fn linear_root(p: &Poly) -> Option<(String, BigRational)> {
    let vars = p.vars();
    if vars.len() != 1 || p.total_degree() != 1 {
        return None;
    }
    let v = vars.into_iter().next()?;
    let c = p.coeffs_in(&v);
    let (c0, c1) = (c[0].as_constant()?, c[1].as_constant()?);
    Some((v, -c0 / c1))
}

fn admitted(params: &[Param], var: &str, value: &BigRational) -> bool {
    match params.iter().find(|p| p.name == var) {
        Some(p) => p.check(value).is_ok(),
        None => true,
    }
}

fn pivot_key(c: &RatFunc, targets: &[ExponentTarget]) -> (bool, bool, u32, Poly, Poly) {
    let vars = c.vars();
    let touches_target = targets.iter().any(|t| vars.contains(&t.param));
    let degree = c.numer().total_degree() + c.denom().total_degree();
    (touches_target, !c.is_constant(), degree, c.numer().clone(), c.denom().clone())
}

fn eliminate(row: &LinearEq, u: &str, pivot: &LinearEq) -> LinearEq {
    let Some(f) = row.coeffs.get(u).cloned() else { return row.clone() };
    let mut coeffs = row.coeffs.clone();
    for (v, c) in &pivot.coeffs {
        let e = coeffs.entry(v.clone()).or_insert_with(RatFunc::zero);
        *e = &*e - &(&f * c);
    }
    coeffs.retain(|_, c| !c.is_zero());
    LinearEq { coeffs, constant: &row.constant - &(&f * &pivot.constant) }
}

/// Gauss–Jordan elimination over the rational-function field in the
/// parameters. Rows and unknowns are processed in canonical order, so the
/// result does not depend on input order.
pub fn solve_criticality(
    sys: &CriticalitySystem,
    targets: &[ExponentTarget],
    params: &[Param],
) -> Result<CriticalityOutcome, ScalingError> {
    let mut rows: Vec<LinearEq> = sys.equations.iter().filter(|r| !r.is_trivial()).cloned().collect();
    rows.sort_by_key(|r| r.canonical());
    let unknowns: BTreeSet<String> = sys.unknowns.iter().cloned().collect();
    let mut pivots: Vec<(String, LinearEq)> = Vec::new();
    let mut free = Vec::new();
    for u in &unknowns {
        let best =
            rows.iter().enumerate().filter_map(|(i, r)| r.coeffs.get(u).map(|c| (pivot_key(c, targets), i))).min();
        let Some((_, i)) = best else {
            free.push(u.clone());
            continue;
        };
        let row = rows.remove(i);
        let c = row.coeffs[u].clone();
        if let Some((var, value)) = linear_root(c.numer()) {
            if admitted(params, &var, &value) {
                return Err(ScalingError::DegeneratePivot {
                    pivot: c.to_string(),
                    param: var,
                    value: value.to_string(),
                });
            }
        }
        let inv = c.inv().expect("pivot is nonzero");
        let pivot = LinearEq {
            coeffs: row.coeffs.iter().map(|(v, x)| (v.clone(), x * &inv)).collect(),
            constant: &row.constant * &inv,
        };
        for r in rows.iter_mut() {
            *r = eliminate(r, u, &pivot);
        }
        for (_, p) in pivots.iter_mut() {
            *p = eliminate(p, u, &pivot);
        }
        pivots.push((u.clone(), pivot));
    }

    let mut constraints: BTreeMap<Poly, Constraint> = BTreeMap::new();
    for r in rows {
        debug_assert!(r.coeffs.is_empty());
        if r.constant.is_zero() {
            continue;
        }
        if r.constant.is_constant() {
            return Ok(CriticalityOutcome::Inconsistent);
        }
        let c = Constraint::new(r.constant.numer().clone(), targets);
        if let Some((var, value)) = linear_root(&c.poly) {
            if !admitted(params, &var, &value) {
                return Ok(CriticalityOutcome::Inconsistent);
            }
        }
        constraints.entry(c.poly.clone()).or_insert(c);
    }

    let mut solved = BTreeMap::new();
    for (u, p) in &pivots {
        let mut v = -&p.constant;
        for (f, c) in p.coeffs.iter().filter(|(f, _)| *f != u) {
            v = &v - &(c * &RatFunc::var(f));
        }
        solved.insert(u.clone(), v);
    }
    let subst = &solved;
    let trace = sys.trace.subst(subst).ok_or(ScalingError::NoFit)?;
    let functional_conditions =
        sys.templates.iter().map(|t| functional_condition(t, subst, &free)).collect::<Result<Vec<_>, _>>()?;
    Ok(CriticalityOutcome::Critical(CriticalityCondition {
        solved_weights: solved,
        free_weights: free,
        constraints: constraints.into_values().collect(),
        functional_conditions,
        trace,
    }))
}

fn depends_on_any(c: &RatFunc, names: &[String]) -> bool {
    let vars = c.vars();
    names.iter().any(|n| vars.contains(n))
}

/// Normalize `Σ c_β u^β F_β + K F = 0` into a weighted Euler identity. The
/// scale is the first unknown-free pair sum when some coefficient carries a
/// free weight, otherwise the first coefficient. Each free weight is renamed
/// to a display parameter equal to the first coefficient it appears in.
pub fn functional_condition(
    t: &FunctionalTemplate,
    solved: &BTreeMap<String, RatFunc>,
    free: &[String],
) -> Result<FunctionalCondition, ScalingError> {
    let sub = |c: &RatFunc| c.subst(solved).ok_or(ScalingError::NoFit);
    let args = t.function.args.clone();
    let raw: Vec<RatFunc> =
        args.iter().map(|a| sub(t.coeffs.get(a).unwrap_or(&RatFunc::zero()))).collect::<Result<_, _>>()?;
    let constant = sub(&t.constant)?;

    let mut scale = None;
    if raw.iter().any(|c| depends_on_any(c, free)) {
        'pairs: for i in 0..raw.len() {
            for j in i + 1..raw.len() {
                let s = &raw[i] + &raw[j];
                if !s.is_zero() && !depends_on_any(&s, free) {
                    scale = Some(s);
                    break 'pairs;
                }
            }
        }
    }
    let scale = scale
        .or_else(|| raw.iter().find(|c| !c.is_zero() && !depends_on_any(c, free)).cloned())
        .unwrap_or_else(RatFunc::one);
    let inv = scale.inv().expect("nonzero scale");
    let mut coefficients: Vec<RatFunc> = raw.iter().map(|c| c * &inv).collect();
    let degree = -&(&constant * &inv);

    let mut parameters = Vec::new();
    for f in free {
        let Some(c) = coefficients.iter().find(|c| depends_on_any(c, std::slice::from_ref(f))).cloned() else {
            continue;
        };
        let name = if parameters.is_empty() { "a".to_string() } else { format!("a{}", parameters.len() + 1) };
        let lin = LinearEq::from_ratfunc(&c, std::slice::from_ref(f))?;
        let slope = &lin.coeffs[f];
        let back = &(&RatFunc::var(&name) - &lin.constant) / slope;
        let m: BTreeMap<String, RatFunc> = [(f.clone(), back)].into();
        for c in coefficients.iter_mut() {
            *c = c.subst(&m).ok_or(ScalingError::NoFit)?;
        }
        parameters.push(name);
    }
    Ok(FunctionalCondition { function: t.function.name.clone(), args, coefficients, degree, parameters })
}
