//! Jet-space calculus at concrete dimension: total derivatives, prolongation
//! of point generators, and the Euler operator.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::expr::{Atom, Expr, ExprError, Jet, Product, RatFunc, Var};

pub const DEFAULT_MAX_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("block `{0}` has symbolic size; expand at a concrete dimension")]
    SymbolicDimension(String),
    #[error("unknown block `{0}`")]
    UnknownBlock(String),
    #[error("duplicate name `{0}` in jet context")]
    DuplicateName(String),
    #[error("jet order {0} exceeds the configured maximum {1}")]
    OrderExceeded(usize, usize),
    #[error("cannot expand {0}")]
    Unexpandable(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Size {
    Concrete(u32),
    Symbolic(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub name: String,
    pub size: Size,
}

impl Block {
    pub fn concrete(name: &str, n: u32) -> Self {
        Block { name: name.to_string(), size: Size::Concrete(n) }
    }

    pub fn symbolic(name: &str, param: &str) -> Self {
        Block { name: name.to_string(), size: Size::Symbolic(param.to_string()) }
    }

    /// Size as a coefficient (a parameter when symbolic).
    pub fn size_coefficient(&self) -> RatFunc {
        match &self.size {
            Size::Concrete(n) => RatFunc::int(*n as i64),
            Size::Symbolic(p) => RatFunc::var(p),
        }
    }
}

/// Independent-variable blocks, dependent names and the jet order bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetContext {
    pub blocks: Vec<Block>,
    pub dependents: Vec<String>,
    pub max_order: usize,
}

impl JetContext {
    pub fn new(blocks: Vec<Block>, dependents: Vec<String>) -> Result<Self, JetError> {
        let mut seen = BTreeSet::new();
        for n in blocks.iter().map(|b| &b.name).chain(dependents.iter()) {
            if !seen.insert(n.clone()) {
                return Err(JetError::DuplicateName(n.clone()));
            }
        }
        Ok(JetContext { blocks, dependents, max_order: DEFAULT_MAX_ORDER })
    }

    pub fn block(&self, name: &str) -> Result<&Block, JetError> {
        self.blocks.iter().find(|b| b.name == name).ok_or_else(|| JetError::UnknownBlock(name.to_string()))
    }

    pub fn block_size(&self, name: &str) -> Result<u32, JetError> {
        match &self.block(name)?.size {
            Size::Concrete(n) => Ok(*n),
            Size::Symbolic(_) => Err(JetError::SymbolicDimension(name.to_string())),
        }
    }

    pub fn is_concrete(&self) -> bool {
        self.blocks.iter().all(|b| matches!(b.size, Size::Concrete(_)))
    }

    pub fn require_concrete(&self) -> Result<(), JetError> {
        match self.blocks.iter().find(|b| !matches!(b.size, Size::Concrete(_))) {
            Some(b) => Err(JetError::SymbolicDimension(b.name.clone())),
            None => Ok(()),
        }
    }

    /// Fix symbolic block sizes from a parameter assignment.
    pub fn concretize(&self, dims: &BTreeMap<String, u32>) -> JetContext {
        let blocks = self
            .blocks
            .iter()
            .map(|b| match &b.size {
                Size::Symbolic(p) if dims.contains_key(p) => Block::concrete(&b.name, dims[p]),
                _ => b.clone(),
            })
            .collect();
        JetContext { blocks, dependents: self.dependents.clone(), max_order: self.max_order }
    }

    /// All coordinates, block by block.
    pub fn vars(&self) -> Result<Vec<Var>, JetError> {
        let mut out = Vec::new();
        for b in &self.blocks {
            let n = self.block_size(&b.name)?;
            out.extend((1..=n).map(|i| Var::new(&b.name, i)));
        }
        Ok(out)
    }

    fn block_vars(&self, name: &str) -> Result<Vec<Var>, JetError> {
        let n = self.block_size(name)?;
        Ok((1..=n).map(|i| Var::new(name, i)).collect())
    }

    /// Trace `Σ size_B · a_B` of a dilation with the given block weights.
    pub fn trace(&self, block_weights: &BTreeMap<String, RatFunc>) -> RatFunc {
        self.blocks.iter().fold(RatFunc::zero(), |acc, b| {
            let w = block_weights.get(&b.name).cloned().unwrap_or_else(RatFunc::zero);
            &acc + &(&b.size_coefficient() * &w)
        })
    }

    /// Every sorted multi-index of order `l` over the coordinates.
    pub fn multi_indices(&self, l: usize) -> Result<Vec<Vec<Var>>, JetError> {
        let vars = self.vars()?;
        let mut out = vec![Vec::new()];
        for _ in 0..l {
            let mut next = Vec::new();
            for idx in &out {
                let start = idx.last().map(|v| vars.iter().position(|w| w == v).unwrap()).unwrap_or(0);
                for v in &vars[start..] {
                    let mut i2: Vec<Var> = idx.clone();
                    i2.push(v.clone());
                    next.push(i2);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Rewrite contracted atoms as explicit sums where the exponent allows it.
    /// Atoms with non-integer exponents stay opaque; the differentiation rules
    /// cover them.
    pub fn expand(&self, e: &Expr) -> Result<Expr, JetError> {
        let mut out = Expr::zero();
        for (prod, coeff) in e.terms() {
            let mut t = Expr::constant(coeff.clone());
            for (atom, exp) in prod.factors() {
                let k = exp.as_i64().filter(|k| *k >= 0);
                let expanded = match (atom, k) {
                    (Atom::GradDot { left, right, block }, Some(k)) => {
                        let mut s = Expr::zero();
                        for v in self.block_vars(block)? {
                            s = &s + &(&Expr::jet(left, vec![v.clone()]) * &Expr::jet(right, vec![v]));
                        }
                        Some(s.pow_u32(k as u32))
                    }
                    (Atom::CoordDot { coord, dep, grad }, Some(k)) => {
                        let cv = self.block_vars(coord)?;
                        let gv = self.block_vars(grad)?;
                        if cv.len() != gv.len() {
                            return Err(JetError::Unexpandable(format!("{atom:?}")));
                        }
                        let mut s = Expr::zero();
                        for (c, g) in cv.into_iter().zip(gv) {
                            s = &s + &(&Expr::atom(Atom::Indep(c)) * &Expr::jet(dep, vec![g]));
                        }
                        Some(s.pow_u32(k as u32))
                    }
                    (Atom::BlockNorm(b), Some(k)) if k % 2 == 0 => {
                        let mut s = Expr::zero();
                        for v in self.block_vars(b)? {
                            s = &s + &Expr::atom(Atom::Indep(v)).pow_u32(2);
                        }
                        Some(s.pow_u32((k / 2) as u32))
                    }
                    (Atom::LapPow { dep, block, power }, _) => {
                        let s = power
                            .as_i64()
                            .filter(|s| *s >= 0)
                            .ok_or_else(|| JetError::Unexpandable(format!("{atom:?}")))?;
                        let mut lap = Expr::dep(dep);
                        let vars = self.block_vars(block)?;
                        for _ in 0..s {
                            lap = laplacian_of_linear(&lap, &vars);
                        }
                        Some(lap.pow(exp)?)
                    }
                    _ => None,
                };
                t = match expanded {
                    Some(x) => &t * &x,
                    None => t.mul_product(&Product::atom(atom.clone(), exp.clone())),
                };
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Jet coordinates an expanded expression depends on.
    pub fn jet_deps(&self, e: &Expr) -> Result<BTreeSet<Jet>, JetError> {
        let mut out = BTreeSet::new();
        for a in e.atoms() {
            match &a {
                Atom::Jet(j) | Atom::Abs(j) => {
                    out.insert(j.clone());
                }
                Atom::GradDot { left, right, block } => {
                    for v in self.block_vars(block)? {
                        out.insert(Jet::new(left, vec![v.clone()]));
                        out.insert(Jet::new(right, vec![v]));
                    }
                }
                Atom::CoordDot { dep, grad, .. } => {
                    for v in self.block_vars(grad)? {
                        out.insert(Jet::new(dep, vec![v]));
                    }
                }
                Atom::Func(f) => {
                    for a in &f.args {
                        out.insert(Jet::base(a));
                    }
                }
                Atom::LapPow { .. } => return Err(JetError::Unexpandable(format!("{a:?}"))),
                Atom::Indep(_) | Atom::BlockNorm(_) => {}
            }
        }
        Ok(out)
    }

    /// Coordinates an expanded expression depends on explicitly.
    pub fn indep_deps(&self, e: &Expr) -> Result<BTreeSet<Var>, JetError> {
        let mut out = BTreeSet::new();
        for a in e.atoms() {
            match &a {
                Atom::Indep(v) => {
                    out.insert(v.clone());
                }
                Atom::BlockNorm(b) => out.extend(self.block_vars(b)?),
                Atom::CoordDot { coord, .. } => out.extend(self.block_vars(coord)?),
                _ => {}
            }
        }
        Ok(out)
    }

    pub fn max_jet_order(&self, e: &Expr) -> Result<usize, JetError> {
        Ok(self.jet_deps(e)?.iter().map(Jet::order).max().unwrap_or(0))
    }
}

/// Laplacian of an expression linear in jets of a single dependent.
fn laplacian_of_linear(e: &Expr, vars: &[Var]) -> Expr {
    let mut out = Expr::zero();
    for (p, c) in e.terms() {
        for (a, _) in p.factors() {
            if let Atom::Jet(j) = a {
                for v in vars {
                    out = &out + &Expr::atom(Atom::Jet(j.extend(v).extend(v))).scale(c);
                }
            }
        }
    }
    out
}

/// Total derivative `D_v e`.
pub fn total_derivative(e: &Expr, v: &Var, ctx: &JetContext) -> Result<Expr, JetError> {
    ctx.require_concrete()?;
    let e = ctx.expand(e)?;
    total_derivative_expanded(&e, v, ctx)
}

fn total_derivative_expanded(e: &Expr, v: &Var, ctx: &JetContext) -> Result<Expr, JetError> {
    let mut out = e.diff(&Atom::Indep(v.clone()))?;
    for j in ctx.jet_deps(e)? {
        if j.order() + 1 > ctx.max_order {
            return Err(JetError::OrderExceeded(j.order() + 1, ctx.max_order));
        }
        let d = e.diff(&Atom::Jet(j.clone()))?;
        if d.is_zero() {
            continue;
        }
        out = &out + &(&Expr::atom(Atom::Jet(j.extend(v))) * &d);
    }
    Ok(out)
}

/// `D_{i1} ... D_{il} e`
pub fn total_derivative_multi(e: &Expr, idx: &[Var], ctx: &JetContext) -> Result<Expr, JetError> {
    ctx.require_concrete()?;
    let mut cur = ctx.expand(e)?;
    for v in idx {
        cur = total_derivative_expanded(&cur, v, ctx)?;
    }
    Ok(cur)
}

/// Total divergence `Σ_i D_i B_i` of a current indexed like `ctx.vars()`.
pub fn divergence(current: &[Expr], ctx: &JetContext) -> Result<Expr, JetError> {
    let vars = ctx.vars()?;
    let mut out = Expr::zero();
    for (v, b) in vars.iter().zip(current) {
        out = &out + &total_derivative(b, v, ctx)?;
    }
    Ok(out)
}

/// Point-symmetry generator `ξ^i ∂_{x_i} + η^α ∂_{u^α}`; absent entries are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Generator {
    pub xi: BTreeMap<Var, Expr>,
    pub eta: BTreeMap<String, Expr>,
}

impl Generator {
    /// Scaling generator with per-block and per-dependent weights.
    pub fn dilation(
        ctx: &JetContext,
        block_weights: &BTreeMap<String, RatFunc>,
        dep_weights: &BTreeMap<String, RatFunc>,
    ) -> Result<Generator, JetError> {
        let mut g = Generator::default();
        for v in ctx.vars()? {
            if let Some(w) = block_weights.get(&v.block) {
                g.xi.insert(v.clone(), Expr::atom(Atom::Indep(v)).scale(w));
            }
        }
        for d in &ctx.dependents {
            if let Some(w) = dep_weights.get(d) {
                g.eta.insert(d.clone(), Expr::dep(d).scale(w));
            }
        }
        Ok(g)
    }

    pub fn translation(v: &Var) -> Generator {
        let mut g = Generator::default();
        g.xi.insert(v.clone(), Expr::one());
        g
    }

    pub fn xi_of(&self, v: &Var) -> Expr {
        self.xi.get(v).cloned().unwrap_or_default()
    }

    pub fn eta_of(&self, dep: &str) -> Expr {
        self.eta.get(dep).cloned().unwrap_or_default()
    }

    /// `D_i ξ^i`
    pub fn divergence(&self, ctx: &JetContext) -> Result<Expr, JetError> {
        let vars = ctx.vars()?;
        let xi: Vec<Expr> = vars.iter().map(|v| self.xi_of(v)).collect();
        divergence(&xi, ctx)
    }

    /// Characteristic `Q^α = η^α − u^α_j ξ^j`.
    pub fn characteristic(&self, dep: &str, ctx: &JetContext) -> Result<Expr, JetError> {
        let mut q = self.eta_of(dep);
        for v in ctx.vars()? {
            let xi = self.xi_of(&v);
            if !xi.is_zero() {
                q = &q - &(&Expr::jet(dep, vec![v]) * &xi);
            }
        }
        Ok(q)
    }
}

/// Extended infinitesimals computed by the recursion
/// `η_{J,i} = D_i η_J − (D_i ξ^j) u_{J,j}`, memoized per jet.
pub struct Prolongation<'a> {
    gen: &'a Generator,
    ctx: &'a JetContext,
    cache: HashMap<Jet, Expr>,
    dxi: HashMap<(Var, Var), Expr>,
}

impl<'a> Prolongation<'a> {
    pub fn new(gen: &'a Generator, ctx: &'a JetContext) -> Result<Self, JetError> {
        ctx.require_concrete()?;
        Ok(Prolongation { gen, ctx, cache: HashMap::new(), dxi: HashMap::new() })
    }

    fn d_xi(&mut self, i: &Var, j: &Var) -> Result<Expr, JetError> {
        if let Some(e) = self.dxi.get(&(i.clone(), j.clone())) {
            return Ok(e.clone());
        }
        let d = total_derivative(&self.gen.xi_of(j), i, self.ctx)?;
        self.dxi.insert((i.clone(), j.clone()), d.clone());
        Ok(d)
    }

    pub fn coefficient(&mut self, jet: &Jet) -> Result<Expr, JetError> {
        if let Some(e) = self.cache.get(jet) {
            return Ok(e.clone());
        }
        let out = match jet.split_last() {
            None => self.ctx.expand(&self.gen.eta_of(&jet.dep))?,
            Some((parent, i)) => {
                let prev = self.coefficient(&parent)?;
                let mut acc = total_derivative(&prev, &i, self.ctx)?;
                for j in self.ctx.vars()? {
                    let dx = self.d_xi(&i, &j)?;
                    if !dx.is_zero() {
                        acc = &acc - &(&dx * &Expr::atom(Atom::Jet(parent.extend(&j))));
                    }
                }
                acc
            }
        };
        self.cache.insert(jet.clone(), out.clone());
        Ok(out)
    }
}

/// Full table of extended infinitesimals for jets of order `1..=k`.
pub fn prolong(gen: &Generator, k: usize, ctx: &JetContext) -> Result<BTreeMap<Jet, Expr>, JetError> {
    if k > ctx.max_order {
        return Err(JetError::OrderExceeded(k, ctx.max_order));
    }
    let mut pr = Prolongation::new(gen, ctx)?;
    let mut out = BTreeMap::new();
    for l in 1..=k {
        for idx in ctx.multi_indices(l)? {
            for d in &ctx.dependents {
                let j = Jet::new(d, idx.clone());
                out.insert(j.clone(), pr.coefficient(&j)?);
            }
        }
    }
    Ok(out)
}

/// `X^(k) L` with `k` the order of `L`.
pub fn apply_generator(gen: &Generator, l: &Expr, ctx: &JetContext) -> Result<Expr, JetError> {
    ctx.require_concrete()?;
    let l = ctx.expand(l)?;
    let mut out = Expr::zero();
    for v in ctx.indep_deps(&l)? {
        let xi = gen.xi_of(&v);
        if xi.is_zero() {
            continue;
        }
        out = &out + &(&xi * &l.diff(&Atom::Indep(v))?);
    }
    let mut pr = Prolongation::new(gen, ctx)?;
    for j in ctx.jet_deps(&l)? {
        let eta = pr.coefficient(&j)?;
        if eta.is_zero() {
            continue;
        }
        out = &out + &(&eta * &l.diff(&Atom::Jet(j))?);
    }
    Ok(out)
}

/// Euler operator component `E_α(L) = Σ_J (−D)_J ∂L/∂u^α_J`.
pub fn euler(l: &Expr, dep: &str, ctx: &JetContext) -> Result<Expr, JetError> {
    ctx.require_concrete()?;
    let l = ctx.expand(l)?;
    let mut out = Expr::zero();
    for j in ctx.jet_deps(&l)? {
        if j.dep != dep {
            continue;
        }
        let p = l.diff(&Atom::Jet(j.clone()))?;
        let d = total_derivative_multi(&p, j.idx(), ctx)?;
        out = if j.order() % 2 == 0 { &out + &d } else { &out - &d };
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: u32) -> JetContext {
        JetContext::new(vec![Block::concrete("x", n)], vec!["u".into()]).unwrap()
    }

    fn x(i: u32) -> Var {
        Var::new("x", i)
    }

    fn uj(idx: &[u32]) -> Expr {
        Expr::jet("u", idx.iter().map(|i| x(*i)).collect())
    }

    #[test]
    fn coordinates() {
        let c = ctx(3);
        assert_eq!(total_derivative(&Expr::indep("x", 2), &x(1), &c).unwrap(), Expr::zero());
        assert_eq!(total_derivative(&Expr::indep("x", 1), &x(1), &c).unwrap(), Expr::one());
    }

    #[test]
    fn chain_rule_through_u() {
        let c = ctx(3);
        let u2 = Expr::dep("u").pow_u32(2);
        let want = (&Expr::dep("u") * &uj(&[1])).scale(&RatFunc::int(2));
        assert_eq!(total_derivative(&u2, &x(1), &c).unwrap(), want);
    }

    #[test]
    fn contracted_gradient() {
        let c = ctx(3);
        let l = Expr::grad_dot("u", "u", "x").scale(&RatFunc::rational(1, 2));
        let want = &(&(&uj(&[1]) * &uj(&[1, 1])) + &(&uj(&[2]) * &uj(&[1, 2]))) + &(&uj(&[3]) * &uj(&[1, 3]));
        assert_eq!(total_derivative(&l, &x(1), &c).unwrap(), want);
    }

    #[test]
    fn dilation_prolongation() {
        let c = ctx(2);
        let a = RatFunc::var("a");
        let b = RatFunc::var("b");
        let bw: BTreeMap<_, _> = [("x".to_string(), a.clone())].into();
        let dw: BTreeMap<_, _> = [("u".to_string(), b.clone())].into();
        let g = Generator::dilation(&c, &bw, &dw).unwrap();
        let table = prolong(&g, 3, &c).unwrap();
        for (j, eta) in table {
            let w = &b - &(&a * &RatFunc::int(j.order() as i64));
            assert_eq!(eta, Expr::atom(Atom::Jet(j)).scale(&w));
        }
    }

    #[test]
    fn translation_prolongs_to_zero() {
        let c = ctx(2);
        let g = Generator::translation(&x(1));
        assert!(prolong(&g, 3, &c).unwrap().values().all(Expr::is_zero));
    }

    #[test]
    fn euler_poisson() {
        let c = ctx(3);
        let p = RatFunc::var("p");
        let p1 = &p + &RatFunc::one();
        let l = &Expr::grad_dot("u", "u", "x").scale(&RatFunc::rational(1, 2))
            - &Expr::powe(Jet::base("u"), p1.clone()).scale(&p1.inv().unwrap());
        let lap = &(&uj(&[1, 1]) + &uj(&[2, 2])) + &uj(&[3, 3]);
        let want = -&(&lap + &Expr::powo(Jet::base("u"), p));
        assert_eq!(euler(&l, "u", &c).unwrap(), want);
    }

    #[test]
    fn euler_kills_divergence() {
        let c = ctx(1);
        let e = total_derivative(&(&Expr::dep("u") * &uj(&[1])), &x(1), &c).unwrap();
        assert!(euler(&e, "u", &c).unwrap().is_zero());
    }

    #[test]
    fn symbolic_dimension_rejected() {
        let c = JetContext::new(vec![Block::symbolic("x", "n")], vec!["u".into()]).unwrap();
        assert!(matches!(total_derivative(&Expr::dep("u"), &x(1), &c), Err(JetError::SymbolicDimension(_))));
    }

    #[test]
    fn multiplicity_counts_orderings() {
        assert_eq!(Jet::new("u", vec![x(1), x(2), x(2)]).multiplicity(), 3);
        assert_eq!(Jet::new("u", vec![x(1), x(1)]).multiplicity(), 1);
    }
}
