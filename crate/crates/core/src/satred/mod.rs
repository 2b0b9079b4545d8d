//! CNF formulas with per-clause literal-count bounds, their preprocessing rule engines, and the
//! reduction to class-restricted path problems in SMDs.

mod gadgets;
mod lift;
mod reduce;
mod rules;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::smd::{Smd, Vertex, VertexPath};

pub use gadgets::{b_gadget, w_gadget, Gadget, WGadget};
pub use lift::{lift, LiftMode};
pub use reduce::{
    assignment_to_path, path_to_assignment, reduce_ab3, GadgetKind, Reduction, ReductionCertificate, VariableGadget,
    SUPPORTED_BOUNDS,
};
pub use rules::{preprocess_small_bounds, preprocess_small_bounds_verbatim, preprocess_two_three, Preprocessed, Substitution, Term};

/// Literal in DIMACS convention: `v` is `X_v`, `-v` its negation; `v >= 1`.
pub type Lit = i32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    pub var_count: usize,
    pub clauses: Vec<Vec<Lit>>,
}

impl CnfFormula {
    pub fn new(var_count: usize, clauses: Vec<Vec<Lit>>) -> Result<Self> {
        for (i, c) in clauses.iter().enumerate() {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > var_count {
                    return Err(Error::Parse { line: i + 1, msg: format!("literal {l} out of range 1..={var_count}") });
                }
            }
        }
        Ok(CnfFormula { var_count, clauses })
    }

    /// Number of literals of `clause` made true by `sigma`.
    pub fn count_true(clause: &[Lit], sigma: &Assignment) -> usize {
        clause.iter().filter(|&&l| sigma.lit(l)).count()
    }

    pub fn is_ab_satisfied(&self, sigma: &Assignment, a: usize, b: usize) -> bool {
        self.clauses.iter().all(|c| {
            let k = Self::count_true(c, sigma);
            a <= k && k <= b
        })
    }

    /// Index of the first clause whose true-literal count is outside `[a,b]`.
    pub fn first_violation(&self, sigma: &Assignment, a: usize, b: usize) -> Option<usize> {
        self.clauses.iter().position(|c| {
            let k = Self::count_true(c, sigma);
            k < a || k > b
        })
    }

    /// Positive and negative occurrence counts of variable `v`.
    pub fn occurrences(&self, v: usize) -> (usize, usize) {
        let mut pos = 0;
        let mut neg = 0;
        for &l in self.clauses.iter().flatten() {
            if l.unsigned_abs() as usize == v {
                if l > 0 {
                    pos += 1;
                } else {
                    neg += 1;
                }
            }
        }
        (pos, neg)
    }

    /// Variables that occur in some clause, ascending.
    pub fn used_variables(&self) -> Vec<usize> {
        let mut used = vec![false; self.var_count + 1];
        for &l in self.clauses.iter().flatten() {
            used[l.unsigned_abs() as usize] = true;
        }
        (1..=self.var_count).filter(|&v| used[v]).collect()
    }
}

/// Total truth assignment; `values[i]` is the value of `X_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assignment {
    pub values: Vec<bool>,
}

impl Assignment {
    pub fn all_false(var_count: usize) -> Self {
        Assignment { values: vec![false; var_count] }
    }

    /// Bit `i-1` of `bits` is the value of `X_i`.
    pub fn from_bits(var_count: usize, bits: u64) -> Self {
        Assignment { values: (0..var_count).map(|i| bits >> i & 1 == 1).collect() }
    }

    pub fn var(&self, v: usize) -> bool {
        self.values[v - 1]
    }

    pub fn set(&mut self, v: usize, value: bool) {
        self.values[v - 1] = value;
    }

    pub fn lit(&self, l: Lit) -> bool {
        let v = self.var(l.unsigned_abs() as usize);
        if l > 0 {
            v
        } else {
            !v
        }
    }
}

/// An instance of the class-restricted path problem: an `(s,t)`-path meeting every class in at
/// least `a` and at most `b` vertices, where every class has exactly `alpha` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RcpInstance {
    pub d: Smd,
    pub s: Vertex,
    pub t: Vertex,
    pub a: usize,
    pub b: usize,
    pub alpha: usize,
}

impl RcpInstance {
    pub fn new(d: Smd, s: Vertex, t: Vertex, a: usize, b: usize) -> Result<Self> {
        d.check_vertex(s)?;
        d.check_vertex(t)?;
        let alpha = d.alpha();
        if d.classes().iter().any(|c| c.len() != alpha) {
            return Err(Error::NotAnSmd("class sizes are not uniform".into()));
        }
        if a > b {
            return Err(Error::BadBounds { a, b, reason: "a exceeds b".into() });
        }
        if b > alpha {
            return Err(Error::BadBounds { a, b, reason: format!("b exceeds the class size {alpha}") });
        }
        if s == t {
            return Err(Error::PreconditionFailed("s and t must differ".into()));
        }
        Ok(RcpInstance { d, s, t, a, b, alpha })
    }

    /// Checks that `p` is an `(s,t)`-path obeying the class bounds.
    pub fn check_path(&self, p: &VertexPath) -> Result<()> {
        p.check_in(self.d.graph())?;
        if p.first() != self.s || p.last() != self.t {
            return Err(Error::NotAPath("wrong endpoints".into()));
        }
        for (c, &k) in self.d.class_counts(p.vertices()).iter().enumerate() {
            if k < self.a || k > self.b {
                return Err(Error::NotAPath(format!("class {c} holds {k} path vertices, outside [{}, {}]", self.a, self.b)));
            }
        }
        Ok(())
    }
}
