use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::lexer::{lex, Tok, Token};
use super::DslError;
use crate::expr::{Assumption, Atom, Expr, FnSym, Jet, Param, RatFunc, Var};
use crate::jet::{Block, Size};
use crate::model::{Inequality, ModelSpec};
use crate::scaling::{ExponentTarget, Weight, WeightAssignment};

/// Names visible to expressions.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub params: BTreeSet<String>,
    pub blocks: Vec<Block>,
    pub deps: Vec<String>,
}

impl Scope {
    pub fn new(params: &[&str], blocks: Vec<Block>, deps: &[&str]) -> Scope {
        Scope {
            params: params.iter().map(|s| s.to_string()).collect(),
            blocks,
            deps: deps.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn from_model(m: &ModelSpec) -> Scope {
        Scope {
            params: m.params.iter().map(|p| p.name.clone()).collect(),
            blocks: m.blocks.clone(),
            deps: m.dependents.clone(),
        }
    }

    fn is_dep(&self, n: &str) -> bool {
        self.deps.iter().any(|d| d == n)
    }

    fn block(&self, n: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name == n)
    }

    fn is_taken(&self, n: &str) -> bool {
        self.params.contains(n) || self.is_dep(n) || self.block(n).is_some()
    }

    /// `x3` → coordinate 3 of block `x`; a size-1 block name denotes its coordinate.
    fn coordinate(&self, n: &str) -> Option<Var> {
        for b in &self.blocks {
            let Size::Concrete(size) = b.size else { continue };
            if n == b.name && size == 1 {
                return Some(Var::new(&b.name, 1));
            }
            if let Some(rest) = n.strip_prefix(b.name.as_str()) {
                if !rest.is_empty() && !rest.starts_with('0') && rest.chars().all(|c| c.is_ascii_digit()) {
                    let i: u32 = rest.parse().ok()?;
                    if i >= 1 && i <= size {
                        return Some(Var::new(&b.name, i));
                    }
                }
            }
        }
        None
    }
}

enum Arg {
    Name(String, usize, usize),
    Value(Expr, usize, usize),
}

impl Arg {
    fn pos(&self) -> (usize, usize) {
        match self {
            Arg::Name(_, l, c) | Arg::Value(_, l, c) => (*l, *c),
        }
    }
}

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
}

const KEYWORDS: [&str; 9] =
    ["model", "parameter", "assume", "independent", "dependent", "lagrangian", "dilation", "critical", "equation"];

impl Parser {
    pub fn new(src: &str) -> Result<Parser, DslError> {
        Ok(Parser { toks: lex(src)?, pos: 0, depth: 0 })
    }

    fn skip_nl(&mut self) {
        while self.toks[self.pos].tok == Tok::Newline {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> &Token {
        if self.depth > 0 {
            self.skip_nl();
        }
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        self.peek();
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, msg: &str) -> Result<T, DslError> {
        Err(DslError::parse(t.line, t.col, msg))
    }

    fn is_sym(&mut self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn expect_sym(&mut self, c: char) -> Result<Token, DslError> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(t)
        } else {
            self.err(&t, &format!("expected '{c}'"))
        }
    }

    fn name(&mut self) -> Result<(String, Token), DslError> {
        let t = self.next();
        match &t.tok {
            Tok::Name(n) => Ok((n.clone(), t.clone())),
            _ => self.err(&t, "expected a name"),
        }
    }

    fn end_statement(&mut self) -> Result<(), DslError> {
        let t = self.next();
        match t.tok {
            Tok::Newline | Tok::Eof => Ok(()),
            _ => self.err(&t, "expected end of line"),
        }
    }

    pub fn standalone_expr(&mut self, scope: &Scope) -> Result<Expr, DslError> {
        self.skip_nl();
        let e = self.expr(scope)?;
        self.skip_nl();
        let t = self.next();
        if t.tok != Tok::Eof {
            return self.err(&t, "unexpected trailing input");
        }
        Ok(e)
    }

    // ---- expressions ----

    fn expr(&mut self, s: &Scope) -> Result<Expr, DslError> {
        let mut acc = self.term(s)?;
        loop {
            if self.is_sym('+') {
                self.next();
                self.skip_nl();
                acc = &acc + &self.term(s)?;
            } else if self.is_sym('-') {
                self.next();
                self.skip_nl();
                acc = &acc - &self.term(s)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self, s: &Scope) -> Result<Expr, DslError> {
        let mut acc = self.unary(s)?;
        loop {
            if self.is_sym('*') {
                self.next();
                self.skip_nl();
                acc = &acc * &self.unary(s)?;
            } else if self.is_sym('/') {
                let t = self.next();
                self.skip_nl();
                let d = self.unary(s)?;
                acc = self.divide(&acc, &d, &t)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn divide(&self, a: &Expr, d: &Expr, at: &Token) -> Result<Expr, DslError> {
        if let Some(c) = d.as_constant() {
            return match c.inv() {
                Some(i) => Ok(a.scale(&i)),
                None => self.err(at, "division by zero"),
            };
        }
        a.checked_div(d).or_else(|e| self.err(at, &e.to_string()))
    }

    fn unary(&mut self, s: &Scope) -> Result<Expr, DslError> {
        if self.is_sym('-') {
            self.next();
            return Ok(-self.unary(s)?);
        }
        self.power(s)
    }

    fn power(&mut self, s: &Scope) -> Result<Expr, DslError> {
        let base = self.primary(s)?;
        if !self.is_sym('^') {
            return Ok(base);
        }
        let t = self.next();
        self.skip_nl();
        let e = self.unary(s)?;
        let Some(e) = e.as_constant() else {
            return self.err(&t, "exponent must be free of functions and coordinates");
        };
        base.pow(&e).or_else(|err| self.err(&t, &err.to_string()))
    }

    fn constant_of(&self, e: &Expr, at: (usize, usize), what: &str) -> Result<RatFunc, DslError> {
        e.as_constant().ok_or_else(|| DslError::parse(at.0, at.1, &format!("{what} must be a constant")))
    }

    fn primary(&mut self, s: &Scope) -> Result<Expr, DslError> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Number(n) => Ok(Expr::constant(RatFunc::constant(n))),
            Tok::Sym('(') => {
                self.depth += 1;
                let e = self.expr(s);
                let close = self.expect_sym(')');
                self.depth -= 1;
                let e = e?;
                close?;
                Ok(e)
            }
            Tok::Name(n) => {
                if self.is_sym('(') {
                    return self.call(&n, &t, s);
                }
                if self.peek().tok == Tok::Sym('_') && s.is_dep(&n) {
                    return self.jet_literal(&n, s);
                }
                self.resolve(&n, &t, s)
            }
            _ => self.err(&t, "expected an expression"),
        }
    }

    fn resolve(&self, n: &str, t: &Token, s: &Scope) -> Result<Expr, DslError> {
        if s.params.contains(n) {
            Ok(Expr::param(n))
        } else if s.is_dep(n) {
            Ok(Expr::dep(n))
        } else if let Some(v) = s.coordinate(n) {
            Ok(Expr::atom(Atom::Indep(v)))
        } else {
            Err(DslError::UnknownSymbol { line: t.line, col: t.col, name: n.to_string() })
        }
    }

    fn jet_literal(&mut self, dep: &str, s: &Scope) -> Result<Expr, DslError> {
        self.expect_sym('_')?;
        self.expect_sym('{')?;
        let mut idx = Vec::new();
        loop {
            let (n, t) = self.name()?;
            match s.coordinate(&n) {
                Some(v) => idx.push(v),
                None => return Err(DslError::UnknownSymbol { line: t.line, col: t.col, name: n }),
            }
            if self.is_sym(',') {
                self.next();
            } else {
                break;
            }
        }
        self.expect_sym('}')?;
        Ok(Expr::jet(dep, idx))
    }

    fn args(&mut self, s: &Scope) -> Result<Vec<Arg>, DslError> {
        self.expect_sym('(')?;
        self.depth += 1;
        let r = self.arg_list(s);
        self.depth -= 1;
        r
    }

    fn arg_list(&mut self, s: &Scope) -> Result<Vec<Arg>, DslError> {
        let mut out = Vec::new();
        if self.is_sym(')') {
            self.next();
            return Ok(out);
        }
        loop {
            let t = self.peek().clone();
            let bare = matches!(t.tok, Tok::Name(_))
                && matches!(
                    self.toks.get(self.pos + 1).map(|x| &x.tok),
                    Some(Tok::Sym(',')) | Some(Tok::Sym(')')) | Some(Tok::Newline)
                );
            if let (true, Tok::Name(n)) = (bare, &t.tok) {
                self.next();
                out.push(Arg::Name(n.clone(), t.line, t.col));
            } else {
                let e = self.expr(s)?;
                out.push(Arg::Value(e, t.line, t.col));
            }
            let sep = self.next();
            match sep.tok {
                Tok::Sym(',') => continue,
                Tok::Sym(')') => return Ok(out),
                _ => return self.err(&sep, "expected ',' or ')'"),
            }
        }
    }

    fn arg_dep(&self, a: &Arg, s: &Scope) -> Result<String, DslError> {
        match a {
            Arg::Name(n, _, _) if s.is_dep(n) => Ok(n.clone()),
            Arg::Name(n, l, c) => Err(DslError::UnknownSymbol { line: *l, col: *c, name: n.clone() }),
            Arg::Value(_, l, c) => Err(DslError::parse(*l, *c, "expected a dependent variable")),
        }
    }

    fn arg_block(&self, a: &Arg, s: &Scope) -> Result<String, DslError> {
        match a {
            Arg::Name(n, _, _) if s.block(n).is_some() => Ok(n.clone()),
            Arg::Name(n, l, c) => Err(DslError::UnknownSymbol { line: *l, col: *c, name: n.clone() }),
            Arg::Value(_, l, c) => Err(DslError::parse(*l, *c, "expected a block name")),
        }
    }

    fn arg_jet(&self, a: &Arg, s: &Scope) -> Result<Jet, DslError> {
        match a {
            Arg::Value(e, l, c) => match e.single_term() {
                Some((p, k)) if k.is_one() => match p.factors().collect::<Vec<_>>().as_slice() {
                    [(Atom::Jet(j), x)] if x.is_one() => Ok(j.clone()),
                    _ => Err(DslError::parse(*l, *c, "expected a dependent or jet")),
                },
                _ => Err(DslError::parse(*l, *c, "expected a dependent or jet")),
            },
            Arg::Name(..) => Ok(Jet::base(&self.arg_dep(a, s)?)),
        }
    }

    fn arg_value(&self, a: &Arg, s: &Scope) -> Result<Expr, DslError> {
        match a {
            Arg::Value(e, _, _) => Ok(e.clone()),
            Arg::Name(n, l, c) => self.resolve(n, &Token { tok: Tok::Name(n.clone()), line: *l, col: *c }, s),
        }
    }

    fn arg_const(&self, a: &Arg, s: &Scope, what: &str) -> Result<RatFunc, DslError> {
        let e = self.arg_value(a, s)?;
        self.constant_of(&e, a.pos(), what)
    }

    fn arity(t: &Token, name: &str, expected: &str, found: usize) -> DslError {
        DslError::Arity { line: t.line, col: t.col, name: name.to_string(), expected: expected.to_string(), found }
    }

    fn call(&mut self, name: &str, t: &Token, s: &Scope) -> Result<Expr, DslError> {
        let args = self.args(s)?;
        let n = args.len();
        match name {
            "grad2" => {
                let (l, r, blocks) = match args.as_slice() {
                    [a] => (self.arg_dep(a, s)?, self.arg_dep(a, s)?, None),
                    [a, b] if matches!(b, Arg::Name(x, _, _) if s.is_dep(x)) => {
                        (self.arg_dep(a, s)?, self.arg_dep(b, s)?, None)
                    }
                    [a, b] => (self.arg_dep(a, s)?, self.arg_dep(a, s)?, Some(self.arg_block(b, s)?)),
                    [a, b, c] => (self.arg_dep(a, s)?, self.arg_dep(b, s)?, Some(self.arg_block(c, s)?)),
                    _ => return Err(Self::arity(t, name, "1 to 3", n)),
                };
                let blocks: Vec<String> = match blocks {
                    Some(b) => vec![b],
                    None => s.blocks.iter().map(|b| b.name.clone()).collect(),
                };
                Ok(blocks.iter().fold(Expr::zero(), |acc, b| &acc + &Expr::grad_dot(&l, &r, b)))
            }
            "powe" | "powo" => {
                let [a, e] = args.as_slice() else { return Err(Self::arity(t, name, "2", n)) };
                let j = self.arg_jet(a, s)?;
                let e = self.arg_const(e, s, "exponent")?;
                Ok(if name == "powe" { Expr::powe(j, e) } else { Expr::powo(j, e) })
            }
            "norm2" => {
                let [b] = args.as_slice() else { return Err(Self::arity(t, name, "1", n)) };
                Ok(Expr::block_norm(&self.arg_block(b, s)?).pow_u32(2))
            }
            "lap" => {
                let [u, b, k] = args.as_slice() else { return Err(Self::arity(t, name, "3", n)) };
                let power = self.arg_const(k, s, "power")?;
                let atom = Atom::LapPow { dep: self.arg_dep(u, s)?, block: self.arg_block(b, s)?, power };
                Ok(Expr::atom(atom))
            }
            "cdot" => {
                let [c, u, g] = args.as_slice() else { return Err(Self::arity(t, name, "3", n)) };
                let atom = Atom::CoordDot {
                    coord: self.arg_block(c, s)?,
                    dep: self.arg_dep(u, s)?,
                    grad: self.arg_block(g, s)?,
                };
                Ok(Expr::atom(atom))
            }
            "diff" => {
                if n < 2 {
                    return Err(Self::arity(t, name, "at least 2", n));
                }
                let f = match &args[0] {
                    Arg::Value(e, l, c) => match e.single_term() {
                        Some((p, k)) if k.is_one() => match p.factors().collect::<Vec<_>>().as_slice() {
                            [(Atom::Func(f), x)] if x.is_one() => f.clone(),
                            _ => return Err(DslError::parse(*l, *c, "expected a function call")),
                        },
                        _ => return Err(DslError::parse(*l, *c, "expected a function call")),
                    },
                    Arg::Name(_, l, c) => return Err(DslError::parse(*l, *c, "expected a function call")),
                };
                let mut f = f;
                for a in &args[1..] {
                    let d = self.arg_dep(a, s)?;
                    if !f.args.contains(&d) {
                        let (l, c) = a.pos();
                        return Err(DslError::parse(l, c, "not an argument of the function"));
                    }
                    f = f.differentiate(&d);
                }
                Ok(Expr::atom(Atom::Func(f)))
            }
            _ => {
                if s.is_taken(name) {
                    return self.err(t, &format!("{name} is not a function"));
                }
                if n == 0 {
                    return Err(Self::arity(t, name, "at least 1", 0));
                }
                let deps = args.iter().map(|a| self.arg_dep(a, s)).collect::<Result<Vec<_>, _>>()?;
                Ok(Expr::atom(Atom::Func(FnSym::new(name, deps))))
            }
        }
    }

    // ---- statements ----

    pub fn model(&mut self) -> Result<ModelSpec, DslError> {
        let mut scope = Scope::default();
        let mut name = None;
        let mut params = Vec::new();
        let mut assumptions = Vec::new();
        let mut lagrangian = None;
        let mut weights = WeightAssignment::default();
        let mut targets = Vec::new();
        let mut system = Vec::new();
        loop {
            self.skip_nl();
            let t = self.next();
            let kw = match &t.tok {
                Tok::Eof => break,
                Tok::Name(k) if KEYWORDS.contains(&k.as_str()) => k.clone(),
                _ => return self.err(&t, "expected a statement keyword"),
            };
            match kw.as_str() {
                "model" => {
                    let s = self.next();
                    let Tok::Str(n) = s.tok else { return self.err(&s, "expected a quoted model name") };
                    if name.replace(n).is_some() {
                        return self.err(&t, "duplicate model statement");
                    }
                }
                "parameter" => {
                    let (n, nt) = self.fresh_name(&scope)?;
                    let assumption = match self.peek().tok {
                        Tok::Sym('>') => {
                            self.next();
                            Some(Assumption { strict: true, bound: self.bound()? })
                        }
                        Tok::Ge => {
                            self.next();
                            Some(Assumption { strict: false, bound: self.bound()? })
                        }
                        _ => None,
                    };
                    let _ = nt;
                    scope.params.insert(n.clone());
                    params.push(Param { name: n, assumption });
                }
                "assume" => {
                    let at = self.peek().clone();
                    let lhs = self.expr(&scope)?;
                    let lhs = self.constant_of(&lhs, (at.line, at.col), "assumption")?;
                    let op = self.next();
                    let strict = match op.tok {
                        Tok::Sym('>') => true,
                        Tok::Ge => false,
                        _ => return self.err(&op, "expected '>' or '>='"),
                    };
                    let at = self.peek().clone();
                    let rhs = self.expr(&scope)?;
                    let rhs = self.constant_of(&rhs, (at.line, at.col), "assumption")?;
                    assumptions.push(Inequality { expr: &lhs - &rhs, strict });
                }
                "independent" => {
                    let (n, _) = self.fresh_name(&scope)?;
                    self.expect_sym('[')?;
                    let st = self.next();
                    let size = match &st.tok {
                        Tok::Number(k) if k.is_integer() && *k > BigRational::from_integer(BigInt::from(0)) => {
                            let k: u32 = k
                                .to_integer()
                                .try_into()
                                .map_err(|_| DslError::parse(st.line, st.col, "block size too large"))?;
                            Size::Concrete(k)
                        }
                        Tok::Name(p) if scope.params.contains(p) => Size::Symbolic(p.clone()),
                        Tok::Name(p) => {
                            return Err(DslError::UnknownSymbol { line: st.line, col: st.col, name: p.clone() })
                        }
                        _ => return self.err(&st, "expected a positive integer or parameter"),
                    };
                    self.expect_sym(']')?;
                    scope.blocks.push(Block { name: n.clone(), size });
                    let mut w = Weight::Unknown;
                    if matches!(&self.peek().tok, Tok::Name(k) if k == "weight") {
                        self.next();
                        w = self.weight(&scope)?;
                    }
                    weights.blocks.insert(n, w);
                }
                "dependent" => loop {
                    let (n, _) = self.fresh_name(&scope)?;
                    scope.deps.push(n.clone());
                    weights.deps.insert(n, Weight::Unknown);
                    if self.is_sym(',') {
                        self.next();
                    } else {
                        break;
                    }
                },
                "lagrangian" => {
                    self.expect_sym(':')?;
                    if lagrangian.replace(self.expr(&scope)?).is_some() {
                        return self.err(&t, "duplicate lagrangian");
                    }
                }
                "dilation" => {
                    self.expect_sym(':')?;
                    loop {
                        let (n, nt) = self.name()?;
                        self.expect_arrow()?;
                        let w = self.weight(&scope)?;
                        if scope.block(&n).is_some() {
                            weights.blocks.insert(n, w);
                        } else if scope.is_dep(&n) {
                            weights.deps.insert(n, w);
                        } else {
                            return Err(DslError::UnknownSymbol { line: nt.line, col: nt.col, name: n });
                        }
                        if self.is_sym(',') {
                            self.next();
                        } else {
                            break;
                        }
                    }
                }
                "critical" => loop {
                    let (n, nt) = self.name()?;
                    if !scope.params.contains(&n) {
                        return Err(DslError::UnknownSymbol { line: nt.line, col: nt.col, name: n });
                    }
                    let mut offset = 0i64;
                    if self.is_sym('+') || self.is_sym('-') {
                        let sign = if self.next().tok == Tok::Sym('-') { -1 } else { 1 };
                        let k = self.next();
                        match &k.tok {
                            Tok::Number(v) if v.is_integer() => {
                                offset = sign
                                    * i64::try_from(v.to_integer())
                                        .map_err(|_| DslError::parse(k.line, k.col, "offset too large"))?;
                            }
                            _ => return self.err(&k, "expected an integer offset"),
                        }
                    }
                    targets.push(ExponentTarget::shifted(&n, offset));
                    if self.is_sym(',') {
                        self.next();
                    } else {
                        break;
                    }
                },
                "equation" => {
                    let (n, nt) = self.name()?;
                    if !scope.is_dep(&n) {
                        return Err(DslError::UnknownSymbol { line: nt.line, col: nt.col, name: n });
                    }
                    self.expect_sym(':')?;
                    system.push((n, self.expr(&scope)?));
                }
                _ => unreachable!(),
            }
            self.end_statement()?;
        }
        let eof = self.toks[self.pos].clone();
        let name = name.ok_or_else(|| DslError::parse(eof.line, eof.col, "missing model statement"))?;
        let lagrangian = lagrangian.ok_or_else(|| DslError::parse(eof.line, eof.col, "missing lagrangian"))?;
        Ok(ModelSpec {
            name,
            params,
            assumptions,
            blocks: scope.blocks,
            dependents: scope.deps,
            lagrangian,
            weights,
            targets,
            system,
        })
    }

    fn fresh_name(&mut self, scope: &Scope) -> Result<(String, Token), DslError> {
        let (n, t) = self.name()?;
        if scope.is_taken(&n) || KEYWORDS.contains(&n.as_str()) {
            return self.err(&t, &format!("name {n} already in use"));
        }
        Ok((n, t))
    }

    fn expect_arrow(&mut self) -> Result<(), DslError> {
        let t = self.next();
        if t.tok == Tok::Arrow {
            Ok(())
        } else {
            self.err(&t, "expected '->'")
        }
    }

    fn weight(&mut self, scope: &Scope) -> Result<Weight, DslError> {
        if self.is_sym('?') {
            self.next();
            return Ok(Weight::Unknown);
        }
        let t = self.peek().clone();
        let e = self.expr(scope)?;
        Ok(Weight::Known(self.constant_of(&e, (t.line, t.col), "weight")?))
    }

    fn bound(&mut self) -> Result<BigRational, DslError> {
        let neg = if self.is_sym('-') {
            self.next();
            true
        } else {
            false
        };
        let t = self.next();
        let Tok::Number(mut v) = t.tok.clone() else { return self.err(&t, "expected a number") };
        if self.is_sym('/') {
            self.next();
            let d = self.next();
            match d.tok {
                Tok::Number(dv) if dv != BigRational::from_integer(BigInt::from(0)) => v /= dv,
                _ => return self.err(&d, "expected a nonzero denominator"),
            }
        }
        Ok(if neg { -v } else { v })
    }
}
