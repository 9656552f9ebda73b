use std::fmt::Write;

use crate::expr::{render_coefficient, render_dsl};
use crate::jet::Size;
use crate::model::ModelSpec;
use crate::scaling::Weight;

fn bound(b: &num_rational::BigRational) -> String {
    if b.is_integer() {
        b.to_integer().to_string()
    } else {
        format!("{}/{}", b.numer(), b.denom())
    }
}

fn weight(w: Option<&Weight>) -> String {
    match w {
        Some(Weight::Known(r)) => render_coefficient(r),
        _ => "?".to_string(),
    }
}

/// Model file text; parsing it yields an equal [`ModelSpec`].
pub fn render_model(m: &ModelSpec) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "model \"{}\"", m.name);
    for p in &m.params {
        match &p.assumption {
            Some(a) => {
                let op = if a.strict { ">" } else { ">=" };
                let _ = writeln!(s, "parameter {} {op} {}", p.name, bound(&a.bound));
            }
            None => {
                let _ = writeln!(s, "parameter {}", p.name);
            }
        }
    }
    for a in &m.assumptions {
        let _ = writeln!(s, "assume {} {} 0", render_coefficient(&a.expr), if a.strict { ">" } else { ">=" });
    }
    for b in &m.blocks {
        let size = match &b.size {
            Size::Concrete(n) => n.to_string(),
            Size::Symbolic(p) => p.clone(),
        };
        let _ = writeln!(s, "independent {}[{size}]", b.name);
    }
    if !m.dependents.is_empty() {
        let _ = writeln!(s, "dependent {}", m.dependents.join(", "));
    }
    let _ = writeln!(s, "lagrangian: {}", render_dsl(&m.lagrangian));
    let mut entries: Vec<String> =
        m.blocks.iter().map(|b| format!("{} -> {}", b.name, weight(m.weights.blocks.get(&b.name)))).collect();
    entries.extend(m.dependents.iter().map(|d| format!("{d} -> {}", weight(m.weights.deps.get(d)))));
    if !entries.is_empty() {
        let _ = writeln!(s, "dilation: {}", entries.join(", "));
    }
    if !m.targets.is_empty() {
        let t: Vec<String> = m.targets.iter().map(|t| t.to_string()).collect();
        let _ = writeln!(s, "critical {}", t.join(", "));
    }
    for (d, e) in &m.system {
        let _ = writeln!(s, "equation {d}: {}", render_dsl(e));
    }
    s
}
