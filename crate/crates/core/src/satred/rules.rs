//! Rule engines that rewrite a formula until every clause consists of pairwise different
//! literals, preserving whether it has an assignment with between `a` and `b` true literals per
//! clause.

use serde::{Deserialize, Serialize};

use super::{Assignment, CnfFormula, Lit};
use crate::error::{Error, Result};

/// A clause element during rewriting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Lit(Lit),
    Const(bool),
}

impl Term {
    pub fn neg(self) -> Term {
        match self {
            Term::Lit(l) => Term::Lit(-l),
            Term::Const(c) => Term::Const(!c),
        }
    }

    fn eval(self, sigma: &Assignment) -> bool {
        match self {
            Term::Lit(l) => sigma.lit(l),
            Term::Const(c) => c,
        }
    }

    fn var(self) -> Option<usize> {
        match self {
            Term::Lit(l) => Some(l.unsigned_abs() as usize),
            Term::Const(_) => None,
        }
    }
}

/// `X_var` was replaced by `value` everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substitution {
    pub var: usize,
    pub value: Term,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preprocessed {
    Unsatisfiable {
        /// Names of the rules applied, in order; the last one detected the contradiction.
        fired: Vec<String>,
    },
    Reduced {
        formula: CnfFormula,
        substitutions: Vec<Substitution>,
        /// Variable introduced for the constant 1, if any.
        fresh: Option<usize>,
        fired: Vec<String>,
    },
}

impl Preprocessed {
    pub fn is_unsatisfiable(&self) -> bool {
        matches!(self, Preprocessed::Unsatisfiable { .. })
    }

    pub fn fired(&self) -> &[String] {
        match self {
            Preprocessed::Unsatisfiable { fired } | Preprocessed::Reduced { fired, .. } => fired,
        }
    }

    /// Extends an assignment of the reduced formula to the original `var_count` variables by
    /// replaying the substitutions backwards. Variables fixed by nothing default to false.
    pub fn extend(&self, sigma: &Assignment, var_count: usize) -> Assignment {
        let Preprocessed::Reduced { substitutions, fresh, .. } = self else {
            return Assignment::all_false(var_count);
        };
        let mut out = Assignment::all_false(var_count.max(sigma.values.len()));
        for (i, &v) in sigma.values.iter().enumerate() {
            out.values[i] = v;
        }
        if let Some(z) = fresh {
            out.set(*z, true);
        }
        for s in substitutions.iter().rev() {
            let v = s.value.eval(&out);
            out.set(s.var, v);
        }
        out.values.truncate(var_count);
        out
    }
}

struct Unsat;

struct Engine {
    clauses: Vec<Vec<Term>>,
    a: usize,
    b: usize,
    subs: Vec<Substitution>,
    fired: Vec<String>,
    var_count: usize,
    /// Replace the table cells that lose solutions by equivalent clause sets.
    exact: bool,
}

enum Outcome {
    /// The clause is replaced by the given terms.
    Replace(Vec<Term>),
    Remove,
    /// Substitutions are applied and the clause is then settled by evaluation.
    Substitute(Vec<(Term, Term)>),
    Unsatisfiable,
    /// The clause becomes `X | Y | U` and `X | Y | ~U` for a fresh `U`, forbidding `X = Y = 1`
    /// when at most two literals may be true.
    NandFresh(Term, Term),
}

type Rule = (&'static str, fn(&[Term], usize, usize) -> Option<Outcome>);

impl Engine {
    fn new(phi: &CnfFormula, a: usize, b: usize) -> Self {
        let clauses = phi.clauses.iter().map(|c| c.iter().map(|&l| Term::Lit(l)).collect()).collect();
        Engine { clauses, a, b, subs: Vec::new(), fired: Vec::new(), var_count: phi.var_count, exact: true }
    }

    /// Corrects the two table cells whose substitution fixes one of several admissible choices:
    /// `A|A|B` with `(a,b) = (0,2)` and `1|X|Y` with `b = 2, a < 2` both only forbid that two
    /// literals are true together.
    fn correct(&self, name: &str, c: &[Term], out: Outcome) -> Outcome {
        if !self.exact || self.b != 2 {
            return out;
        }
        match name {
            "A|A|B" if self.a == 0 => {
                let (x, z) = if c[0] == c[1] {
                    (c[0], c[2])
                } else if c[0] == c[2] {
                    (c[0], c[1])
                } else {
                    (c[1], c[0])
                };
                Outcome::NandFresh(x, z)
            }
            "1|X|Y" if self.a < 2 => {
                let rest: Vec<Term> = match c.iter().position(|&t| t == ONE) {
                    Some(i) => c.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &t)| t).collect(),
                    None => return out,
                };
                if !rest.iter().all(|&t| is_lit(t)) {
                    return out;
                }
                if self.a == 1 {
                    Outcome::Replace(vec![rest[0].neg(), rest[1].neg()])
                } else {
                    Outcome::NandFresh(rest[0], rest[1])
                }
            }
            _ => out,
        }
    }

    fn count_ok(&self, k: usize) -> bool {
        self.a <= k && k <= self.b
    }

    /// Applies `from/to`: replaces literal `from` by `to` and its negation by the negation of `to`.
    fn substitute(&mut self, from: Term, to: Term) -> std::result::Result<(), Unsat> {
        let (from, to) = match (from, to) {
            (Term::Const(x), Term::Const(y)) => return if x == y { Ok(()) } else { Err(Unsat) },
            (Term::Const(_), Term::Lit(_)) => (to, from),
            _ => (from, to),
        };
        let Term::Lit(l) = from else { unreachable!() };
        if to == Term::Lit(l) {
            return Ok(());
        }
        if to == Term::Lit(-l) {
            return Err(Unsat);
        }
        let var = l.unsigned_abs() as usize;
        let value = if l > 0 { to } else { to.neg() };
        for c in self.clauses.iter_mut() {
            for t in c.iter_mut() {
                if let Term::Lit(m) = *t {
                    if m == var as Lit {
                        *t = value;
                    } else if m == -(var as Lit) {
                        *t = value.neg();
                    }
                }
            }
        }
        self.subs.push(Substitution { var, value });
        Ok(())
    }

    /// Settles a clause after substitution: removed when every assignment of its remaining
    /// variables keeps the count in range, contradiction when none does.
    fn settle(&mut self, clause: Vec<Term>) -> std::result::Result<(), Unsat> {
        let mut vars: Vec<usize> = clause.iter().filter_map(|t| t.var()).collect();
        vars.sort_unstable();
        vars.dedup();
        let width = vars.iter().copied().max().unwrap_or(0);
        let mut good = 0;
        let total = 1u32 << vars.len();
        for bits in 0..total {
            let mut sigma = Assignment::all_false(width);
            for (i, &v) in vars.iter().enumerate() {
                sigma.set(v, bits >> i & 1 == 1);
            }
            let k = clause.iter().filter(|t| t.eval(&sigma)).count();
            if self.count_ok(k) {
                good += 1;
            }
        }
        if good == 0 {
            Err(Unsat)
        } else if good == total {
            Ok(())
        } else {
            self.clauses.push(clause);
            Ok(())
        }
    }

    /// Removes clauses without literals, or reports a contradiction.
    fn evaluate_constants(&mut self) -> std::result::Result<(), Unsat> {
        let mut i = 0;
        while i < self.clauses.len() {
            if self.clauses[i].iter().all(|t| matches!(t, Term::Const(_))) {
                let k = self.clauses[i].iter().filter(|&&t| t == Term::Const(true)).count();
                if !self.count_ok(k) {
                    self.fired.push("constants".into());
                    return Err(Unsat);
                }
                self.clauses.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(())
    }

    fn run(&mut self, rules: &[Rule]) -> std::result::Result<(), Unsat> {
        loop {
            self.evaluate_constants()?;
            let mut hit = None;
            'search: for (name, rule) in rules {
                for (ci, c) in self.clauses.iter().enumerate() {
                    if let Some(out) = rule(c, self.a, self.b) {
                        hit = Some((ci, *name, out));
                        break 'search;
                    }
                }
            }
            let Some((ci, name, out)) = hit else {
                return Ok(());
            };
            self.fired.push(name.to_string());
            let out = self.correct(name, &self.clauses[ci], out);
            match out {
                Outcome::NandFresh(x, y) => {
                    self.var_count += 1;
                    let u = Term::Lit(self.var_count as Lit);
                    self.clauses[ci] = vec![x, y, u];
                    self.clauses.push(vec![x, y, u.neg()]);
                }
                Outcome::Replace(c) => self.clauses[ci] = c,
                Outcome::Remove => {
                    self.clauses.remove(ci);
                }
                Outcome::Unsatisfiable => return Err(Unsat),
                Outcome::Substitute(ops) => {
                    let clause = self.clauses.remove(ci);
                    self.clauses.push(clause);
                    for (from, to) in ops {
                        let from = resolve(&self.subs, from);
                        let to = resolve(&self.subs, to);
                        self.substitute(from, to)?;
                    }
                    let clause = self.clauses.pop().expect("clause was pushed");
                    self.settle(clause)?;
                }
            }
        }
    }
}

/// Rewrites a term through substitutions made earlier in the same rule application.
fn resolve(subs: &[Substitution], t: Term) -> Term {
    let mut t = t;
    for s in subs {
        if let Term::Lit(l) = t {
            if l.unsigned_abs() as usize == s.var {
                t = if l > 0 { s.value } else { s.value.neg() };
            }
        }
    }
    t
}

fn is_lit(t: Term) -> bool {
    matches!(t, Term::Lit(_))
}

fn same_var(x: Term, y: Term) -> bool {
    x.var().is_some() && x.var() == y.var()
}

/// Tries every ordering `(i,j,k)` of a 3-clause.
fn perm3(c: &[Term], f: impl Fn(Term, Term, Term) -> Option<Outcome>) -> Option<Outcome> {
    if c.len() != 3 {
        return None;
    }
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0), (1, 0, 2), (2, 0, 1), (2, 1, 0)] {
        if let Some(o) = f(c[i], c[j], c[k]) {
            return Some(o);
        }
    }
    None
}

fn perm2(c: &[Term], f: impl Fn(Term, Term) -> Option<Outcome>) -> Option<Outcome> {
    if c.len() != 2 {
        return None;
    }
    f(c[0], c[1]).or_else(|| f(c[1], c[0]))
}

const ZERO: Term = Term::Const(false);
const ONE: Term = Term::Const(true);

fn small_bound_rules() -> Vec<Rule> {
    vec![
        ("A|A|A", |c, a, _| {
            perm3(c, |x, y, z| {
                (is_lit(x) && x == y && y == z)
                    .then(|| if a == 0 { Outcome::Substitute(vec![(x, ZERO)]) } else { Outcome::Unsatisfiable })
            })
        }),
        ("A|A|B", |c, a, b| {
            perm3(c, |x, y, z| {
                (is_lit(x) && x == y && is_lit(z) && !same_var(x, z)).then(|| match (b, a) {
                    (1, 0) => Outcome::Substitute(vec![(x, ZERO)]),
                    (1, _) => Outcome::Substitute(vec![(x, ZERO), (z, ONE)]),
                    (_, 0 | 1) => Outcome::Substitute(vec![(x, z.neg())]),
                    _ => Outcome::Substitute(vec![(x, ONE), (z, ZERO)]),
                })
            })
        }),
        ("A|~A|X", |c, _, _| {
            perm3(c, |x, y, z| (is_lit(x) && y == x.neg()).then(|| Outcome::Replace(vec![ONE, z])))
        }),
        ("0|X|Y", |c, _, _| perm3(c, |x, y, z| (x == ZERO).then(|| Outcome::Replace(vec![y, z])))),
        ("1|A|A", |c, _, _| {
            perm3(c, |x, y, z| (x == ONE && is_lit(y) && y == z).then(|| Outcome::Substitute(vec![(y, ZERO)])))
        }),
        ("1|X|Y", |c, _, b| {
            perm3(c, |x, y, z| {
                (x == ONE).then(|| {
                    if b == 1 {
                        Outcome::Substitute(vec![(y, ZERO), (z, ZERO)])
                    } else {
                        Outcome::Substitute(vec![(y, z.neg())])
                    }
                })
            })
        }),
        ("A|A", |c, a, b| {
            perm2(c, |x, y| {
                (is_lit(x) && x == y).then(|| match (b, a) {
                    (1, _) => Outcome::Substitute(vec![(x, ZERO)]),
                    (_, 0) => Outcome::Remove,
                    _ => Outcome::Substitute(vec![(x, ONE)]),
                })
            })
        }),
        ("A|~A", |c, _, _| perm2(c, |x, y| (is_lit(x) && y == x.neg()).then(|| Outcome::Replace(vec![ONE])))),
        ("0|X", |c, _, _| perm2(c, |x, y| (x == ZERO).then(|| Outcome::Replace(vec![y])))),
        ("1|X", |c, a, b| {
            perm2(c, |x, y| {
                (x == ONE).then(|| match (b, a) {
                    (1, _) => Outcome::Substitute(vec![(y, ZERO)]),
                    (_, 0 | 1) => Outcome::Remove,
                    _ => Outcome::Substitute(vec![(y, ONE)]),
                })
            })
        }),
        ("X", |c, a, _| {
            (c.len() == 1 && is_lit(c[0])).then(|| match a {
                0 => Outcome::Remove,
                1 => Outcome::Substitute(vec![(c[0], ONE)]),
                _ => Outcome::Unsatisfiable,
            })
        }),
    ]
}

fn two_three_rules() -> Vec<Rule> {
    vec![
        ("A|A|X", |c, _, _| perm3(c, |x, y, _| (is_lit(x) && x == y).then(|| Outcome::Substitute(vec![(x, ONE)])))),
        ("A|~A|X", |c, _, _| {
            perm3(c, |x, y, z| (is_lit(x) && y == x.neg()).then(|| Outcome::Substitute(vec![(z, ONE)])))
        }),
        ("0|X|Y", |c, _, _| {
            perm3(c, |x, y, z| (x == ZERO).then(|| Outcome::Substitute(vec![(y, ONE), (z, ONE)])))
        }),
        ("1|1|X", |c, _, _| perm3(c, |x, y, _| (x == ONE && y == ONE).then_some(Outcome::Remove))),
    ]
}

fn finish(engine: Engine, fresh: Option<usize>) -> Preprocessed {
    let var_count = engine.var_count;
    let clauses = engine
        .clauses
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|t| match t {
                    Term::Lit(l) => l,
                    Term::Const(_) => unreachable!("constants are eliminated before output"),
                })
                .collect()
        })
        .collect();
    Preprocessed::Reduced {
        formula: CnfFormula { var_count, clauses },
        substitutions: engine.subs,
        fresh,
        fired: engine.fired,
    }
}

fn check_sizes(phi: &CnfFormula) -> Result<()> {
    match phi.clauses.iter().position(|c| c.len() > 3) {
        Some(i) => Err(Error::PreconditionFailed(format!("clause {} has more than three literals", i + 1))),
        None => Ok(()),
    }
}

/// Rewrites `phi` for bounds `0 <= a <= b <= 2`, `b >= 1`. The output has clauses of two or
/// three pairwise different literals and is `(a,b)`-satisfiable exactly when `phi` is. Where a
/// table substitution would discard solutions, the clause is instead replaced by clauses over a
/// fresh variable (see [`preprocess_small_bounds_verbatim`] for the plain table).
pub fn preprocess_small_bounds(phi: &CnfFormula, a: usize, b: usize) -> Result<Preprocessed> {
    small_bounds(phi, a, b, true)
}

/// The rule table applied as printed. For `b = 2` the rows `A|A|B` (`a = 0`) and `1|X|Y`
/// (`a < 2`) fix one admissible choice and may turn a satisfiable formula unsatisfiable.
pub fn preprocess_small_bounds_verbatim(phi: &CnfFormula, a: usize, b: usize) -> Result<Preprocessed> {
    small_bounds(phi, a, b, false)
}

fn small_bounds(phi: &CnfFormula, a: usize, b: usize, exact: bool) -> Result<Preprocessed> {
    if a > b || b > 2 || b == 0 {
        return Err(Error::BadBounds { a, b, reason: "requires 0 <= a <= b <= 2 and b >= 1".into() });
    }
    check_sizes(phi)?;
    let mut engine = Engine::new(phi, a, b);
    engine.exact = exact;
    match engine.run(&small_bound_rules()) {
        Err(Unsat) => Ok(Preprocessed::Unsatisfiable { fired: engine.fired }),
        Ok(()) => Ok(finish(engine, None)),
    }
}

/// Rewrites `phi` for bounds `(2,3)` into clauses of exactly three pairwise different literals.
/// Short clauses are filled up with the constant 0. A remaining constant 1 becomes a fresh
/// variable `Z = X_{n+1}`.
pub fn preprocess_two_three(phi: &CnfFormula) -> Result<Preprocessed> {
    check_sizes(phi)?;
    let mut engine = Engine::new(phi, 2, 3);
    for c in engine.clauses.iter_mut() {
        while c.len() < 3 {
            c.push(ZERO);
        }
    }
    if engine.run(&two_three_rules()).is_err() {
        return Ok(Preprocessed::Unsatisfiable { fired: engine.fired });
    }
    let needs_z = engine.clauses.iter().flatten().any(|&t| t == ONE);
    let fresh = needs_z.then_some(phi.var_count + 1);
    if let Some(z) = fresh {
        for t in engine.clauses.iter_mut().flatten() {
            if *t == ONE {
                *t = Term::Lit(z as Lit);
            }
        }
    }
    engine.var_count += usize::from(needs_z);
    Ok(finish(engine, fresh))
}
