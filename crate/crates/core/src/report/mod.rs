//! Analysis reports in text, LaTeX and JSON.
//!
//! All three renderings are produced from one [`Report`], so they carry the
//! same content. JSON keys follow the struct field order.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::analysis::{Analysis, Checks};
use crate::expr::render_dsl;
use crate::scaling::CriticalityCondition;

mod latex;

pub use latex::{latex_expr, latex_functional, latex_poly, latex_ratfunc};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PokhozhaevReport {
    pub interior: String,
    pub boundary_current: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub model: String,
    pub dimensions: BTreeMap<String, String>,
    pub weights: BTreeMap<String, String>,
    pub constraints: Vec<String>,
    pub solved_exponents: BTreeMap<String, String>,
    pub functional_conditions: Vec<String>,
    pub classification: String,
    pub checks: Checks,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pokhozhaev: Option<PokhozhaevReport>,
    #[serde(skip)]
    condition: CriticalityCondition,
    #[serde(skip)]
    latex_weights: BTreeMap<String, String>,
    #[serde(skip)]
    latex_pokhozhaev: Option<PokhozhaevReport>,
}

pub fn classification(c: &CriticalityCondition) -> &'static str {
    match (c.constraints.is_empty(), c.functional_conditions.is_empty()) {
        (true, true) => "critical unconditionally",
        (false, true) => "critical under constraints",
        (true, false) => "critical under functional conditions",
        (false, false) => "critical under constraints and functional conditions",
    }
}

impl Report {
    pub fn new(a: &Analysis) -> Report {
        let c = &a.condition;
        let mut solved_exponents = BTreeMap::new();
        for k in &c.constraints {
            if let Some((t, v)) = &k.solved {
                solved_exponents.insert(t.to_string(), v.to_string());
            } else if let Some(h) = &k.hyperbola {
                solved_exponents.insert(format!("{}, {}", h.first, h.second), h.to_string());
            }
        }
        let pk = |render: fn(&crate::expr::Expr) -> String| {
            a.pokhozhaev.as_ref().map(|p| PokhozhaevReport {
                interior: render(&p.interior),
                boundary_current: p.boundary_current.iter().flatten().map(render).collect(),
            })
        };
        Report {
            model: a.model.name.clone(),
            dimensions: a.dimensions(),
            weights: a.weights.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
            constraints: c.constraints.iter().map(|k| k.to_string()).collect(),
            solved_exponents,
            functional_conditions: c.functional_conditions.iter().map(|f| f.to_string()).collect(),
            classification: classification(c).to_string(),
            checks: a.checks.clone(),
            pokhozhaev: pk(render_dsl),
            condition: c.clone(),
            latex_weights: a
                .weights
                .iter()
                .map(|(k, v)| {
                    let sym = if a.model.blocks.iter().any(|b| &b.name == k) { "a" } else { "b" };
                    (format!("{sym}_{{{k}}}"), latex_ratfunc(v))
                })
                .collect(),
            latex_pokhozhaev: pk(latex_expr),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Latex => self.latex(),
            Format::Json => self.json(),
        }
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "model: {}", self.model);
        let dims: Vec<String> = self.dimensions.iter().map(|(b, n)| format!("{b}[{n}]")).collect();
        let _ = writeln!(s, "dimensions: {}", dims.join(", "));
        let ws: Vec<String> = self.weights.iter().map(|(k, v)| format!("{k} -> {v}")).collect();
        let _ = writeln!(s, "weights: {}", ws.join(", "));
        let _ = writeln!(s, "classification: {}", self.classification);
        for c in &self.condition.constraints {
            let _ = writeln!(s, "constraint: {c}");
            if c.solved.is_some() || c.hyperbola.is_some() {
                let _ = writeln!(s, "  i.e. {}", c.display_form());
            }
        }
        for f in &self.functional_conditions {
            let _ = writeln!(s, "functional condition: {f}");
        }
        let _ = writeln!(s, "check q5 residual: {}", self.checks.q5_residual);
        let _ = writeln!(s, "check noether: {}", self.checks.noether);
        let _ = writeln!(s, "check divergence roundtrip: {}", self.checks.divergence_roundtrip);
        if let Some(p) = &self.pokhozhaev {
            let _ = writeln!(s, "pokhozhaev interior: {}", p.interior);
            for (i, b) in p.boundary_current.iter().enumerate() {
                let _ = writeln!(s, "pokhozhaev current[{}]: {b}", i + 1);
            }
        }
        s
    }

    pub fn latex(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "% model: {}", self.model);
        let _ = writeln!(s, "\\begin{{align*}}");
        let ws: Vec<String> = self.latex_weights.iter().map(|(k, v)| format!("{k} &= {v}")).collect();
        let mut lines = ws;
        for c in &self.condition.constraints {
            lines.push(format!("{} &= 0", latex_poly(&c.poly)));
            if let Some((t, v)) = &c.solved {
                let lhs = if t.offset == 0 {
                    latex::symbol(&t.param)
                } else {
                    latex_poly(&crate::expr::Poly::var(&t.param).add(&crate::expr::Poly::from_int(t.offset)))
                };
                lines.push(format!("{lhs} &= {}", latex_ratfunc(v)));
            } else if let Some(h) = &c.hyperbola {
                lines.push(format!(
                    "\\frac{{1}}{{{} + 1}} + \\frac{{1}}{{{} + 1}} &= {}",
                    latex::symbol(&h.first),
                    latex::symbol(&h.second),
                    latex_ratfunc(&h.value)
                ));
            }
        }
        for f in &self.condition.functional_conditions {
            let body = latex_functional(f);
            lines.push(body.replacen(" = ", " &= ", 1));
        }
        let _ = writeln!(s, "{}", lines.join(" \\\\\n"));
        let _ = writeln!(s, "\\end{{align*}}");
        let _ = writeln!(s, "% {}", self.classification);
        let _ = writeln!(s, "% q5 residual: {}", self.checks.q5_residual);
        let _ = writeln!(s, "% noether: {}", self.checks.noether);
        let _ = writeln!(s, "% divergence roundtrip: {}", self.checks.divergence_roundtrip);
        if let Some(p) = &self.latex_pokhozhaev {
            let _ = writeln!(s, "\\[ {} \\]", p.interior);
            for (i, b) in p.boundary_current.iter().enumerate() {
                let _ = writeln!(s, "\\[ B_{{{}}} = {b} \\]", i + 1);
            }
        }
        s
    }
}

#[cfg(test)]
mod tests;
