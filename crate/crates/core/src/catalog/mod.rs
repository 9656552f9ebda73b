//! Built-in models with their known critical conditions.
//!
//! Each expected condition is written from closed-form formulas, not from
//! the solver, so comparing the two is a real check.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::dsl::{parse_expr, parse_model, DslError, Scope};
use crate::expr::RatFunc;
use crate::model::ModelSpec;
use crate::scaling::{canonical_poly, dep_unknown, Constraint, CriticalityCondition, FunctionalCondition};

mod check;
pub mod models;

pub use check::{check_all, check_entry, headline, perturbed_residual, EntryCheck};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown model {0}")]
    UnknownModel(String),
    #[error("catalog entry does not parse: {0}")]
    Dsl(#[from] DslError),
    #[error("catalog formula {0} is not a constant")]
    Formula(String),
}

/// A catalog model with everything needed to check it.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub spec: ModelSpec,
    pub expected: CriticalityCondition,
    /// Parameter values at which concrete checks run; critical when the
    /// model has exponents.
    pub instance: BTreeMap<String, RatFunc>,
    /// Exponent moved off its critical value for the negative check.
    pub perturb: Option<String>,
    /// Power-law specialization of a model with an unknown nonlinearity.
    pub power: Option<Box<CatalogEntry>>,
}

impl CatalogEntry {
    pub fn name(&self) -> &str {
        &self.spec.name
    }
}

struct Functional<'a> {
    function: &'a str,
    coefficients: &'a [&'a str],
    degree: &'a str,
    parameters: &'a [&'a str],
}

struct Expect<'a> {
    weights: Vec<(&'a str, &'a str)>,
    free: &'a [&'a str],
    constraints: &'a [&'a str],
    functionals: Vec<Functional<'a>>,
    trace: &'a str,
}

const NAMES: [&str; 12] = [
    "poisson",
    "ode_class_e1",
    "p_laplace",
    "polyharmonic_even",
    "baouendi_grushin",
    "kohn_laplace",
    "potential_system",
    "hamiltonian_system",
    "lane_emden_system",
    "mixed_system",
    "hyperbolic_hamiltonian",
    "parabolic_hamiltonian",
];

/// Catalog model names in display order.
pub fn list_models() -> Vec<&'static str> {
    NAMES.to_vec()
}

/// Every catalog entry, in display order.
pub fn all() -> Result<Vec<CatalogEntry>, CatalogError> {
    NAMES.iter().map(|n| model(n)).collect()
}

/// Formula in the model's parameters. Weight unknowns are written without
/// the underscore (`bv` for `b_v`).
fn formula(spec: &ModelSpec, src: &str) -> Result<RatFunc, CatalogError> {
    let mut names: Vec<String> = spec.params.iter().map(|p| p.name.clone()).collect();
    let mut renames = BTreeMap::new();
    for d in &spec.dependents {
        names.push(format!("b{d}"));
        renames.insert(format!("b{d}"), RatFunc::var(&dep_unknown(d)));
    }
    names.push("a".into());
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let scope = Scope::new(&refs, spec.blocks.clone(), &[]);
    parse_expr(src, &scope)?
        .as_constant()
        .and_then(|r| r.subst(&renames))
        .ok_or_else(|| CatalogError::Formula(src.to_string()))
}

fn condition(spec: &ModelSpec, e: &Expect) -> Result<CriticalityCondition, CatalogError> {
    let f = |s: &str| formula(spec, s);
    let solved_weights =
        e.weights.iter().map(|(d, w)| Ok((dep_unknown(d), f(w)?))).collect::<Result<_, CatalogError>>()?;
    let mut constraints = e
        .constraints
        .iter()
        .map(|c| Ok(Constraint::new(canonical_poly(f(c)?.numer()), &spec.targets)))
        .collect::<Result<Vec<_>, CatalogError>>()?;
    constraints.sort_by(|a, b| a.poly.cmp(&b.poly));
    let args = |name: &str| -> Vec<String> {
        spec.lagrangian
            .atoms()
            .into_iter()
            .find_map(|a| match a {
                crate::expr::Atom::Func(fs) if fs.name == name && fs.partials().is_empty() => Some(fs.args.clone()),
                _ => None,
            })
            .unwrap_or_default()
    };
    let functional_conditions = e
        .functionals
        .iter()
        .map(|c| {
            Ok(FunctionalCondition {
                function: c.function.to_string(),
                args: args(c.function),
                coefficients: c.coefficients.iter().map(|s| f(s)).collect::<Result<_, _>>()?,
                degree: f(c.degree)?,
                parameters: c.parameters.iter().map(|s| s.to_string()).collect(),
            })
        })
        .collect::<Result<_, CatalogError>>()?;
    Ok(CriticalityCondition {
        solved_weights,
        free_weights: e.free.iter().map(|d| dep_unknown(d)).collect(),
        constraints,
        functional_conditions,
        trace: f(e.trace)?,
    })
}

fn entry(
    text: &str,
    e: &Expect,
    instance: &[(&str, i64)],
    perturb: Option<&str>,
    power: Option<CatalogEntry>,
) -> Result<CatalogEntry, CatalogError> {
    let spec = parse_model(text)?;
    let expected = condition(&spec, e)?;
    Ok(CatalogEntry {
        spec,
        expected,
        instance: instance.iter().map(|(k, v)| (k.to_string(), RatFunc::int(*v))).collect(),
        perturb: perturb.map(str::to_string),
        power: power.map(Box::new),
    })
}

/// Look up a catalog model by name.
pub fn model(name: &str) -> Result<CatalogEntry, CatalogError> {
    match name {
        "poisson" => entry(
            models::POISSON,
            &Expect {
                weights: vec![("u", "(2 - n)/2")],
                free: &[],
                constraints: &["p - (n + 2)/(n - 2)"],
                functionals: Vec::new(),
                trace: "n",
            },
            &[("n", 3), ("p", 5)],
            Some("p"),
            None,
        ),
        "ode_class_e1" => entry(
            models::ODE_CLASS_E1,
            &Expect {
                weights: vec![("v", "(beta + 1 - alpha)/(beta + 2)")],
                free: &[],
                constraints: &["p + 1 - (gamma + 1)*(beta + 2)/(alpha - beta - 1)"],
                functionals: Vec::new(),
                trace: "1",
            },
            &[("alpha", 4), ("beta", 1), ("gamma", 1), ("mu", 1), ("p", 2)],
            Some("p"),
            None,
        ),
        "p_laplace" => entry(
            models::P_LAPLACE,
            &Expect {
                weights: vec![("u", "(p - n)/p")],
                free: &[],
                constraints: &["q - n*p/(n - p)"],
                functionals: Vec::new(),
                trace: "n",
            },
            &[("n", 3), ("p", 2), ("q", 6)],
            Some("q"),
            None,
        ),
        "polyharmonic_even" => entry(
            models::POLYHARMONIC_EVEN,
            &Expect {
                weights: vec![("u", "(2*k - n)/2")],
                free: &[],
                constraints: &["p - (n + 2*k)/(n - 2*k)"],
                functionals: Vec::new(),
                trace: "n",
            },
            &[("n", 5), ("k", 2), ("p", 9)],
            Some("p"),
            None,
        ),
        "baouendi_grushin" => entry(
            models::BAOUENDI_GRUSHIN,
            &Expect {
                weights: vec![("u", "(2 - n - (alpha + 1)*m)/2")],
                free: &[],
                constraints: &["p - (n + (alpha + 1)*m + 2)/(n + (alpha + 1)*m - 2)"],
                functionals: Vec::new(),
                trace: "n + (alpha + 1)*m",
            },
            &[("n", 1), ("m", 1), ("alpha", 1), ("p", 5)],
            Some("p"),
            None,
        ),
        "kohn_laplace" => entry(
            models::KOHN_LAPLACE,
            &Expect {
                weights: vec![("u", "-n")],
                free: &[],
                constraints: &["p - (n + 2)/n"],
                functionals: Vec::new(),
                trace: "2*n + 2",
            },
            &[("n", 1), ("p", 3)],
            Some("p"),
            None,
        ),
        "potential_system" => {
            let power = entry(
                models::POTENTIAL_POWER,
                &Expect {
                    weights: vec![("u1", "(2 - n)/2"), ("u2", "(2 - n)/2")],
                    free: &[],
                    constraints: &["p - (n + 2)/(n - 2)"],
                    functionals: Vec::new(),
                    trace: "n",
                },
                &[("n", 3), ("p", 5)],
                Some("p"),
                None,
            )?;
            entry(
                models::POTENTIAL_SYSTEM,
                &Expect {
                    weights: vec![("u1", "(2 - n)/2"), ("u2", "(2 - n)/2")],
                    free: &[],
                    constraints: &[],
                    functionals: vec![Functional {
                        function: "F",
                        coefficients: &["1", "1"],
                        degree: "2*n/(n - 2)",
                        parameters: &[],
                    }],
                    trace: "n",
                },
                &[("n", 3)],
                None,
                Some(power),
            )
        }
        "hamiltonian_system" => {
            let mut power = model("lane_emden_system")?;
            power.spec.name = "hamiltonian_system_power".into();
            entry(
                models::HAMILTONIAN_SYSTEM,
                &hamiltonian_expect("2 - n - bv", "n/(n - 2)", "n"),
                &[("n", 3)],
                None,
                Some(power),
            )
        }
        "lane_emden_system" => entry(
            models::LANE_EMDEN_SYSTEM,
            &Expect {
                weights: vec![("u", "-n/(q + 1)"), ("v", "-n/(p + 1)")],
                free: &[],
                constraints: &["1/(p + 1) + 1/(q + 1) - (n - 2)/n"],
                functionals: Vec::new(),
                trace: "n",
            },
            &[("n", 3), ("q", 3), ("p", 11)],
            Some("p"),
            None,
        ),
        "mixed_system" => {
            let power = entry(
                models::MIXED_POWER,
                &Expect {
                    weights: vec![("u", "-n/(q + 1)"), ("v", "-n/(p + 1)"), ("w", "(2 - n)/2")],
                    free: &[],
                    constraints: &["1/(p + 1) + 1/(q + 1) - (n - 2)/n", "s - (n + 2)/(n - 2)"],
                    functionals: Vec::new(),
                    trace: "n",
                },
                &[("n", 3), ("q", 3), ("p", 11), ("s", 5)],
                Some("s"),
                None,
            )?;
            entry(
                models::MIXED_SYSTEM,
                &Expect {
                    weights: vec![("u", "2 - n - bv"), ("w", "(2 - n)/2")],
                    free: &["v"],
                    constraints: &[],
                    functionals: vec![Functional {
                        function: "H",
                        coefficients: &["a", "1 - a", "1/2"],
                        degree: "n/(n - 2)",
                        parameters: &["a"],
                    }],
                    trace: "n",
                },
                &[("n", 3)],
                None,
                Some(power),
            )
        }
        "hyperbolic_hamiltonian" => {
            let power = entry(
                models::HYPERBOLIC_POWER,
                &Expect {
                    weights: vec![("u", "-(n + 1)/(q + 1)"), ("v", "-(n + 1)/(p + 1)")],
                    free: &[],
                    constraints: &["1/(p + 1) + 1/(q + 1) - (n - 1)/(n + 1)"],
                    functionals: Vec::new(),
                    trace: "n + 1",
                },
                &[("n", 3), ("q", 3), ("p", 3)],
                Some("p"),
                None,
            )?;
            entry(
                models::HYPERBOLIC_HAMILTONIAN,
                &hamiltonian_expect("1 - n - bv", "(n + 1)/(n - 1)", "n + 1"),
                &[("n", 3)],
                None,
                Some(power),
            )
        }
        "parabolic_hamiltonian" => {
            let power = entry(
                models::PARABOLIC_POWER,
                &Expect {
                    weights: vec![("u", "-(n + 2)/(q + 1)"), ("v", "-(n + 2)/(p + 1)")],
                    free: &[],
                    constraints: &["1/(p + 1) + 1/(q + 1) - n/(n + 2)"],
                    functionals: Vec::new(),
                    trace: "n + 2",
                },
                &[("n", 3), ("q", 1), ("p", 9)],
                Some("p"),
                None,
            )?;
            entry(
                models::PARABOLIC_HAMILTONIAN,
                &hamiltonian_expect("-n - bv", "(n + 2)/n", "n + 2"),
                &[("n", 3)],
                None,
                Some(power),
            )
        }
        _ => Err(CatalogError::UnknownModel(name.to_string())),
    }
}

/// `H(u, v)` coupled through `∇u·∇v`, with `b_v` left free.
fn hamiltonian_expect(bu: &'static str, degree: &'static str, trace: &'static str) -> Expect<'static> {
    Expect {
        weights: vec![("u", bu)],
        free: &["v"],
        constraints: &[],
        functionals: vec![Functional { function: "H", coefficients: &["a", "1 - a"], degree, parameters: &["a"] }],
        trace,
    }
}

/// Scalar field with an unknown nonlinearity `F(u)`.
pub fn poisson_general() -> Result<ModelSpec, CatalogError> {
    Ok(parse_model(models::POISSON_GENERAL)?)
}

#[cfg(test)]
mod tests;
