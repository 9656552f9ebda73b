use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::expr::{Atom, Expr, Jet, Monomial, Poly, RatFunc};
use crate::scaling::FunctionalCondition;

const GREEK: [&str; 12] =
    ["alpha", "beta", "gamma", "delta", "epsilon", "theta", "kappa", "lambda", "mu", "nu", "sigma", "tau"];

/// A parameter or coordinate name; Greek names become commands.
pub(super) fn symbol(name: &str) -> String {
    let digits = name.trim_start_matches(|c: char| !c.is_ascii_digit());
    let stem = &name[..name.len() - digits.len()];
    let stem = if GREEK.contains(&stem) { format!("\\{stem}") } else { stem.to_string() };
    if digits.is_empty() || stem.is_empty() {
        format!("{stem}{digits}")
    } else {
        format!("{stem}_{{{digits}}}")
    }
}

fn monomial(m: &Monomial) -> String {
    m.factors()
        .iter()
        .map(|(v, e)| if *e == 1 { symbol(v) } else { format!("{}^{{{e}}}", symbol(v)) })
        .collect::<Vec<_>>()
        .join(" ")
}

fn rational_abs(c: &BigRational) -> String {
    let a = c.abs();
    if a.is_integer() {
        a.to_integer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
    }
}

fn terms(ts: Vec<(&Monomial, &BigRational)>) -> String {
    let mut out = String::new();
    for (i, (m, c)) in ts.into_iter().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if m.is_one() {
            out.push_str(&rational_abs(c));
        } else if c.abs().is_one() {
            out.push_str(&monomial(m));
        } else {
            out.push_str(&format!("{} {}", rational_abs(c), monomial(m)));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

pub fn latex_poly(p: &Poly) -> String {
    terms(p.display_terms())
}

/// Positive terms first, so `1 - a` does not become `-a + 1`.
fn poly_positive_first(p: &Poly) -> String {
    let mut ts = p.display_terms();
    ts.sort_by_key(|(_, c)| c.is_negative());
    terms(ts)
}

pub fn latex_ratfunc(r: &RatFunc) -> String {
    if r.denom().as_constant().is_some_and(|c| c.is_one()) {
        return latex_poly(r.numer());
    }
    if r.is_negative_display() {
        return format!("-{}", latex_ratfunc(&-r));
    }
    format!("\\frac{{{}}}{{{}}}", latex_poly(r.numer()), latex_poly(r.denom()))
}

fn jet(j: &Jet) -> String {
    if j.order() == 0 {
        return symbol(&j.dep);
    }
    let idx: Vec<String> = j.idx().iter().map(|v| format!("{}_{{{}}}", symbol(&v.block), v.index)).collect();
    format!("{}_{{{}}}", symbol(&j.dep), idx.join(" "))
}

fn exponent(base: String, e: &RatFunc) -> String {
    if e.is_one() {
        base
    } else {
        format!("{base}^{{{}}}", latex_ratfunc(e))
    }
}

fn factor(a: &Atom, e: &RatFunc) -> String {
    match a {
        Atom::Indep(v) => exponent(format!("{}_{{{}}}", symbol(&v.block), v.index), e),
        Atom::Jet(j) => exponent(jet(j), e),
        Atom::Abs(j) => exponent(format!("|{}|", jet(j)), e),
        Atom::BlockNorm(b) => exponent(format!("|{}|", symbol(b)), e),
        Atom::GradDot { left, right, block } if left == right => {
            exponent(format!("|\\nabla_{{{}}} {}|", symbol(block), symbol(left)), &(e * &RatFunc::int(2)))
        }
        Atom::GradDot { left, right, block } => {
            let b = symbol(block);
            exponent(format!("(\\nabla_{{{b}}} {} \\cdot \\nabla_{{{b}}} {})", symbol(left), symbol(right)), e)
        }
        Atom::CoordDot { coord, dep, grad } => {
            exponent(format!("({} \\cdot \\nabla_{{{}}} {})", symbol(coord), symbol(grad), symbol(dep)), e)
        }
        Atom::LapPow { dep, block, power } => {
            let lap = if power.is_one() {
                format!("\\Delta_{{{}}}", symbol(block))
            } else {
                format!("\\Delta_{{{}}}^{{{}}}", symbol(block), latex_ratfunc(power))
            };
            exponent(format!("({lap} {})", symbol(dep)), e)
        }
        Atom::Func(f) => {
            let base = if f.partials().is_empty() {
                f.name.clone()
            } else {
                let p: Vec<String> = f.partials().iter().map(|d| symbol(d)).collect();
                format!("{}_{{{}}}", f.name, p.join(""))
            };
            exponent(base, e)
        }
    }
}

fn coefficient(c: &RatFunc) -> String {
    if c.numer().is_single_term() {
        latex_ratfunc(c)
    } else if c.denom().is_constant() {
        format!("({})", latex_ratfunc(c))
    } else {
        latex_ratfunc(c)
    }
}

pub fn latex_expr(e: &Expr) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (p, c)) in e.terms().enumerate() {
        let neg = c.is_negative_display();
        let c = if neg { -c } else { c.clone() };
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let body: Vec<String> = p.factors().map(|(a, x)| factor(a, x)).collect();
        let body = body.join(" ");
        if p.is_one() {
            out.push_str(&coefficient(&c));
        } else if c.is_one() {
            out.push_str(&body);
        } else {
            out.push_str(&format!("{} {body}", coefficient(&c)));
        }
    }
    out
}

fn partial(f: &str, arg: &str) -> String {
    let a = symbol(arg);
    if a.chars().count() == 1 {
        format!("{f}_{a}")
    } else {
        format!("{f}_{{{a}}}")
    }
}

/// `a u H_u + (1 - a) v H_v = \frac{n}{n - 2} H`.
pub fn latex_functional(f: &FunctionalCondition) -> String {
    let mut out = String::new();
    for (arg, c) in f.args.iter().zip(&f.coefficients) {
        if c.is_zero() {
            continue;
        }
        let first = out.is_empty();
        let term = format!("{} {}", symbol(arg), partial(&f.function, arg));
        if !c.numer().is_single_term() && c.denom().is_constant() {
            let c = RatFunc::new(c.numer().clone(), c.denom().clone()).expect("nonzero denominator");
            let inner = if c.denom().as_constant().is_some_and(|d| d.is_one()) {
                poly_positive_first(c.numer())
            } else {
                latex_ratfunc(&c)
            };
            if !first {
                out.push_str(" + ");
            }
            out.push_str(&format!("({inner}) {term}"));
            continue;
        }
        let neg = c.is_negative_display();
        let c = if neg { -c } else { c.clone() };
        match (first, neg) {
            (true, true) => out.push('-'),
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
            _ => {}
        }
        if c.is_one() {
            out.push_str(&term);
        } else {
            out.push_str(&format!("{} {term}", latex_ratfunc(&c)));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    let rhs =
        if f.degree.is_one() { f.function.clone() } else { format!("{} {}", latex_ratfunc(&f.degree), f.function) };
    format!("{out} = {rhs}")
}
