//! Rendering of expressions in model-file syntax. The output re-parses to the
//! same expression.

use super::{Atom, Expr, Product, RatFunc};

/// A coefficient as a standalone DSL factor.
pub fn render_coefficient(c: &RatFunc) -> String {
    let s = c.to_string();
    if c.denom().is_constant() && c.numer().len() <= 1 {
        s
    } else if c.denom().is_constant() {
        format!("({s})")
    } else {
        // "(a)/(b)" must be grouped to act as a single factor
        format!("({s})")
    }
}

fn render_exponent(e: &RatFunc) -> String {
    match e.as_i64() {
        Some(k) if k >= 0 => k.to_string(),
        _ => format!("({e})"),
    }
}

fn render_factor(a: &Atom, e: &RatFunc) -> String {
    let with_exp = |base: String| {
        if e.is_one() {
            base
        } else {
            format!("{base}^{}", render_exponent(e))
        }
    };
    match a {
        Atom::Indep(v) => with_exp(v.to_string()),
        Atom::Jet(j) => with_exp(j.to_string()),
        Atom::Abs(j) => format!("powe({j}, {e})"),
        Atom::BlockNorm(b) => {
            let half = e / &RatFunc::int(2);
            if half.is_one() {
                format!("norm2({b})")
            } else {
                format!("norm2({b})^{}", render_exponent(&half))
            }
        }
        Atom::GradDot { left, right, block } => with_exp(format!("grad2({left}, {right}, {block})")),
        Atom::CoordDot { coord, dep, grad } => with_exp(format!("cdot({coord}, {dep}, {grad})")),
        Atom::LapPow { dep, block, power } => with_exp(format!("lap({dep}, {block}, {power})")),
        Atom::Func(f) => {
            let call = format!("{}({})", f.name, f.args.join(", "));
            let base =
                if f.partials().is_empty() { call } else { format!("diff({call}, {})", f.partials().join(", ")) };
            with_exp(base)
        }
    }
}

pub(crate) fn render_product(p: &Product) -> String {
    p.factors().map(|(a, e)| render_factor(a, e)).collect::<Vec<_>>().join("*")
}

pub fn render_dsl(e: &Expr) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (p, c)) in e.terms().enumerate() {
        let neg = c.is_negative_display();
        let c = if neg { -c } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let body = render_product(p);
        if p.is_one() {
            out.push_str(&render_coefficient(&c));
        } else if c.is_one() {
            out.push_str(&body);
        } else {
            out.push_str(&render_coefficient(&c));
            out.push('*');
            out.push_str(&body);
        }
    }
    out
}
