use std::fmt;

use super::ratfunc::RatFunc;

/// A coordinate `x_i` of an independent-variable block (1-based index).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub block: String,
    pub index: u32,
}

impl Var {
    pub fn new(block: &str, index: u32) -> Self {
        Var { block: block.to_string(), index }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.block, self.index)
    }
}

/// Jet coordinate `u_{i1...il}`; the derivative list is kept sorted so mixed
/// partials commute.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Jet {
    pub dep: String,
    idx: Vec<Var>,
}

impl Jet {
    pub fn new(dep: &str, mut idx: Vec<Var>) -> Self {
        idx.sort();
        Jet { dep: dep.to_string(), idx }
    }

    pub fn base(dep: &str) -> Self {
        Jet { dep: dep.to_string(), idx: Vec::new() }
    }

    pub fn idx(&self) -> &[Var] {
        &self.idx
    }

    pub fn order(&self) -> usize {
        self.idx.len()
    }

    /// The jet one order higher in direction `v`.
    pub fn extend(&self, v: &Var) -> Jet {
        let mut idx = self.idx.clone();
        idx.push(v.clone());
        Jet::new(&self.dep, idx)
    }

    /// Split off the largest index: `self = parent.extend(last)`.
    pub fn split_last(&self) -> Option<(Jet, Var)> {
        let mut idx = self.idx.clone();
        let last = idx.pop()?;
        Some((Jet { dep: self.dep.clone(), idx }, last))
    }

    /// Number of distinct orderings of the derivative list.
    pub fn multiplicity(&self) -> u64 {
        let mut m: u64 = (1..=self.idx.len() as u64).product();
        let mut i = 0;
        while i < self.idx.len() {
            let mut j = i;
            while j < self.idx.len() && self.idx[j] == self.idx[i] {
                j += 1;
            }
            let run: u64 = (1..=(j - i) as u64).product();
            m /= run;
            i = j;
        }
        m
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.idx.is_empty() {
            write!(f, "{}", self.dep)
        } else {
            let parts: Vec<String> = self.idx.iter().map(|v| v.to_string()).collect();
            write!(f, "{}_{{{}}}", self.dep, parts.join(","))
        }
    }
}

/// Arbitrary function symbol `F(u, v, ...)` with formal partials.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FnSym {
    pub name: String,
    pub args: Vec<String>,
    partials: Vec<String>,
}

impl FnSym {
    pub fn new(name: &str, args: Vec<String>) -> Self {
        FnSym { name: name.to_string(), args, partials: Vec::new() }
    }

    pub fn with_partials(name: &str, args: Vec<String>, mut partials: Vec<String>) -> Self {
        partials.sort();
        FnSym { name: name.to_string(), args, partials }
    }

    pub fn partials(&self) -> &[String] {
        &self.partials
    }

    pub fn differentiate(&self, dep: &str) -> FnSym {
        let mut partials = self.partials.clone();
        partials.push(dep.to_string());
        FnSym::with_partials(&self.name, self.args.clone(), partials)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Indep(Var),
    Jet(Jet),
    /// `|jet|`; `PowEven(u, s)` is `Abs(u)^s` and `PowOdd(u, t)` is `Abs(u)^(t-1) * u`.
    Abs(Jet),
    /// `|x|` over a block.
    BlockNorm(String),
    /// `Σ_i ∂left/∂x_i ∂right/∂x_i` over a block; `left <= right`.
    GradDot {
        left: String,
        right: String,
        block: String,
    },
    /// `Σ_i c_i ∂dep/∂g_i` pairing coordinates of block `coord` with the
    /// gradient over an equally sized block `grad`.
    CoordDot {
        coord: String,
        dep: String,
        grad: String,
    },
    /// `Δ^power dep` over a block.
    LapPow {
        dep: String,
        block: String,
        power: RatFunc,
    },
    Func(FnSym),
}

impl Atom {
    pub fn grad_dot(a: &str, b: &str, block: &str) -> Atom {
        let (l, r) = if a <= b { (a, b) } else { (b, a) };
        Atom::GradDot { left: l.to_string(), right: r.to_string(), block: block.to_string() }
    }

    pub fn jet(dep: &str, idx: Vec<Var>) -> Atom {
        Atom::Jet(Jet::new(dep, idx))
    }

    pub fn indep(block: &str, index: u32) -> Atom {
        Atom::Indep(Var::new(block, index))
    }

    /// Atoms that carry no dependence on the unknown functions.
    pub fn is_coordinate_only(&self) -> bool {
        matches!(self, Atom::Indep(_) | Atom::BlockNorm(_))
    }

    /// Dependents the atom refers to.
    pub fn dependents(&self) -> Vec<&str> {
        match self {
            Atom::Indep(_) | Atom::BlockNorm(_) => vec![],
            Atom::Jet(j) | Atom::Abs(j) => vec![j.dep.as_str()],
            Atom::GradDot { left, right, .. } => vec![left.as_str(), right.as_str()],
            Atom::CoordDot { dep, .. } | Atom::LapPow { dep, .. } => vec![dep.as_str()],
            Atom::Func(f) => f.args.iter().map(String::as_str).collect(),
        }
    }
}
