//! Reduction from bounded-count 3-SAT to class-restricted `(s,t)`-paths in SMDs whose classes
//! all have three vertices.

use serde::{Deserialize, Serialize};

use super::gadgets::{b_gadget, w_gadget};
use super::rules::{preprocess_small_bounds, preprocess_two_three, Preprocessed};
use super::{Assignment, CnfFormula, RcpInstance};
use crate::error::{Error, Result};
use crate::smd::{Digraph, Smd, Vertex, VertexPath};

/// Bound pairs `(a,b)` accepted by [`reduce_ab3`].
pub const SUPPORTED_BOUNDS: [(usize, usize); 7] = [(0, 1), (0, 2), (1, 1), (1, 2), (2, 2), (1, 3), (2, 3)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GadgetKind {
    /// Two-route gadgets, used when `b <= 2`.
    B,
    /// Tournament template with clique blow-ups, used when `b = 3`.
    W,
}

/// Vertices of the gadget for one variable. `var` is `None` for the placeholder gadget used
/// when the formula has no variables left.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableGadget {
    pub var: Option<usize>,
    pub s: Vertex,
    pub t: Vertex,
    pub a: Option<Vertex>,
    pub b: Option<Vertex>,
    /// True-route vertices: `y_0..y_p` for B gadgets, the `T` clique for W gadgets.
    pub y: Vec<Vertex>,
    /// False-route vertices: `z_1..z_{q+1}` for B gadgets, the `F` clique for W gadgets.
    pub z: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionCertificate {
    pub kind: GadgetKind,
    pub a: usize,
    pub b: usize,
    /// The preprocessed formula whose clauses map to classes.
    pub formula: CnfFormula,
    pub original_var_count: usize,
    pub preprocessing: Option<Preprocessed>,
    /// `literal_vertex[i][k]` is the vertex of the `k`-th literal of clause `i`.
    pub literal_vertex: Vec<Vec<Vertex>>,
    pub gadgets: Vec<VariableGadget>,
    /// `w_1..w_{2n+1}` when `b = 2` for B gadgets.
    pub prefix: Option<Vec<Vertex>>,
    pub padded: Vec<Vertex>,
    pub s: Vertex,
    pub t: Vertex,
}

impl ReductionCertificate {
    /// Extends an assignment of the preprocessed formula to the original variables.
    pub fn to_original(&self, sigma: &Assignment) -> Assignment {
        match &self.preprocessing {
            Some(p) => p.extend(sigma, self.original_var_count),
            None => {
                let mut out = Assignment::all_false(self.original_var_count);
                for (i, &v) in sigma.values.iter().enumerate().take(self.original_var_count) {
                    out.values[i] = v;
                }
                out
            }
        }
    }

    /// Applies `f` to every vertex id.
    pub fn map_vertices(&self, f: impl Fn(Vertex) -> Vertex) -> ReductionCertificate {
        let mut c = self.clone();
        for v in c.literal_vertex.iter_mut().flatten() {
            *v = f(*v);
        }
        for g in c.gadgets.iter_mut() {
            g.s = f(g.s);
            g.t = f(g.t);
            g.a = g.a.map(&f);
            g.b = g.b.map(&f);
            for v in g.y.iter_mut().chain(g.z.iter_mut()) {
                *v = f(*v);
            }
        }
        if let Some(p) = c.prefix.as_mut() {
            for v in p.iter_mut() {
                *v = f(*v);
            }
        }
        for v in c.padded.iter_mut() {
            *v = f(*v);
        }
        c.s = f(c.s);
        c.t = f(c.t);
        c
    }
}

#[derive(Debug, Clone)]
pub enum Reduction {
    Instance { inst: RcpInstance, cert: ReductionCertificate },
    /// Preprocessing proved the formula has no satisfying assignment.
    FixedNoInstance(RcpInstance),
    /// Preprocessing left no variables and the gadget chain cannot meet every class twice.
    FixedYesInstance(RcpInstance),
}

impl Reduction {
    pub fn instance(&self) -> &RcpInstance {
        match self {
            Reduction::Instance { inst, .. } | Reduction::FixedNoInstance(inst) | Reduction::FixedYesInstance(inst) => inst,
        }
    }

    pub fn certificate(&self) -> Option<&ReductionCertificate> {
        match self {
            Reduction::Instance { cert, .. } => Some(cert),
            Reduction::FixedNoInstance(_) | Reduction::FixedYesInstance(_) => None,
        }
    }
}

/// Three vertices in one class and no arcs: no `(s,t)`-path of any kind.
fn fixed_no_instance(a: usize, b: usize) -> Result<Reduction> {
    let d = Smd::build(3, &[])?;
    Ok(Reduction::FixedNoInstance(RcpInstance::new(d, 0, 1, a, b)?))
}

/// Classes `{0,2,4}` and `{1,3,5}` with every arc from a lower to a higher id of the other class.
/// Paths from 0 to 5 exist with one, two or three vertices in each class.
fn fixed_yes_instance(a: usize, b: usize) -> Result<Reduction> {
    let arcs: Vec<(Vertex, Vertex)> = (0..6).flat_map(|u| (u + 1..6).filter(move |v| (v - u) % 2 == 1).map(move |v| (u, v))).collect();
    let d = Smd::build(6, &arcs)?;
    Ok(Reduction::FixedYesInstance(RcpInstance::new(d, 0, 5, a, b)?))
}

/// Builds the SMD for `graph` under `classes`, deleting arcs inside classes.
fn assemble(mut graph: Digraph, classes: &[Vec<Vertex>]) -> Result<Smd> {
    for c in classes {
        for &u in c {
            for &v in c {
                if u != v {
                    graph.remove_arc(u, v);
                }
            }
        }
    }
    Smd::from_parts(graph, classes.to_vec())
}

/// Occurrence vertex lookup: the `j`-th positive (negative) occurrence of a variable, in clause
/// order, maps to `y[j]` (`z[j-1]`) for B gadgets and `y[j-1]` (`z[j-1]`) for W gadgets.
fn literal_vertices(psi: &CnfFormula, gadgets: &[VariableGadget], kind: GadgetKind) -> Vec<Vec<Vertex>> {
    let mut seen_pos = vec![0usize; psi.var_count + 1];
    let mut seen_neg = vec![0usize; psi.var_count + 1];
    let gadget_of = |v: usize| gadgets.iter().find(|g| g.var == Some(v)).expect("every used variable has a gadget");
    psi.clauses
        .iter()
        .map(|c| {
            c.iter()
                .map(|&l| {
                    let v = l.unsigned_abs() as usize;
                    let g = gadget_of(v);
                    if l > 0 {
                        seen_pos[v] += 1;
                        match kind {
                            GadgetKind::B => g.y[seen_pos[v]],
                            GadgetKind::W => g.y[seen_pos[v] - 1],
                        }
                    } else {
                        seen_neg[v] += 1;
                        g.z[seen_neg[v] - 1]
                    }
                })
                .collect()
        })
        .collect()
}

/// Gadget variables: the used variables, or a single placeholder when none is used.
fn gadget_vars(psi: &CnfFormula) -> Vec<Option<usize>> {
    let used = psi.used_variables();
    if used.is_empty() {
        vec![None]
    } else {
        used.into_iter().map(Some).collect()
    }
}

fn occurrences(psi: &CnfFormula, var: Option<usize>) -> (usize, usize) {
    var.map_or((0, 0), |v| psi.occurrences(v))
}

fn build_b(
    psi: CnfFormula,
    a: usize,
    b: usize,
    original_var_count: usize,
    pre: Preprocessed,
) -> Result<Reduction> {
    let vars = gadget_vars(&psi);
    let n = vars.len();
    let mut next = 0;
    // the forced chain puts one w in the class of y_0 and the last z, so with b = 2 at most one of them fits
    let prefix: Option<Vec<Vertex>> = (b == 2).then(|| {
        let w: Vec<Vertex> = (0..2 * n + 1).collect();
        next = w.len();
        w
    });
    let mut gadgets = Vec::with_capacity(n);
    let mut s = next;
    next += 1;
    for &var in &vars {
        let (p, q) = occurrences(&psi, var);
        let y: Vec<Vertex> = (next..next + p + 1).collect();
        next += p + 1;
        let z: Vec<Vertex> = (next..next + q + 1).collect();
        next += q + 1;
        let t = next;
        next += 1;
        gadgets.push(VariableGadget { var, s, t, a: None, b: None, y, z });
        s = t;
    }
    let total = next;
    let mut graph = Digraph::new(total);
    let mut lo = vec![usize::MAX; total];
    let mut hi = vec![0usize; total];
    for (gi, g) in gadgets.iter().enumerate() {
        let local = b_gadget(g.y.len() - 1, g.z.len() - 1);
        let mut map = vec![g.s];
        map.extend(&g.y);
        map.extend(&g.z);
        map.push(g.t);
        for (u, v) in local.graph.arcs() {
            graph.add_arc(map[u], map[v]);
        }
        for &v in &map {
            lo[v] = lo[v].min(gi);
            hi[v] = hi[v].max(gi);
        }
    }
    let in_gadget = |v: Vertex| lo[v] != usize::MAX;
    for u in (0..total).filter(|&u| in_gadget(u)) {
        for v in (0..total).filter(|&v| in_gadget(v)) {
            if hi[v] < lo[u] {
                graph.add_arc(u, v);
            }
        }
    }
    if let Some(w) = &prefix {
        let m = w.len();
        let s1 = gadgets[0].s;
        for i in 0..m {
            if i + 1 < m {
                graph.add_arc(w[i], w[i + 1]);
            }
            for j in i + 2..m {
                graph.add_arc(w[j], w[i]);
            }
            for u in (0..total).filter(|&u| in_gadget(u)) {
                if !(i == m - 1 && u == s1) {
                    graph.add_arc(u, w[i]);
                }
            }
        }
        graph.add_arc(w[m - 1], s1);
    }
    let literal_vertex = literal_vertices(&psi, &gadgets, GadgetKind::B);
    let mut classes: Vec<Vec<Vertex>> = literal_vertex.clone();
    for (i, g) in gadgets.iter().enumerate() {
        let mut c = vec![g.y[0], *g.z.last().expect("z route is nonempty")];
        let mut c2 = vec![g.s];
        if let Some(w) = &prefix {
            c.push(w[i]);
            c2.push(w[n + i]);
        }
        classes.push(c);
        classes.push(c2);
    }
    let mut last = vec![gadgets[n - 1].t];
    if let Some(w) = &prefix {
        last.push(w[2 * n]);
    }
    classes.push(last);
    let d = assemble(graph, &classes)?;
    let (d, padded) = d.pad_to_alpha(3)?;
    let s = prefix.as_ref().map_or(gadgets[0].s, |w| w[0]);
    let t = gadgets[n - 1].t;
    let inst = RcpInstance::new(d, s, t, a, b)?;
    let cert = ReductionCertificate {
        kind: GadgetKind::B,
        a,
        b,
        formula: psi,
        original_var_count,
        preprocessing: Some(pre),
        literal_vertex,
        gadgets,
        prefix,
        padded: padded.into_iter().collect(),
        s,
        t,
    };
    Ok(Reduction::Instance { inst, cert })
}

fn build_w(
    psi: CnfFormula,
    a: usize,
    b: usize,
    original_var_count: usize,
    pre: Option<Preprocessed>,
) -> Result<Reduction> {
    let vars = gadget_vars(&psi);
    let mut next = 0;
    let mut gadgets = Vec::with_capacity(vars.len());
    let mut locals = Vec::with_capacity(vars.len());
    for &var in &vars {
        let (p, q) = occurrences(&psi, var);
        let local = w_gadget(p, q);
        let base = next;
        next += local.graph.order();
        gadgets.push(VariableGadget {
            var,
            s: base + local.s,
            t: base + local.t,
            a: Some(base + local.a),
            b: Some(base + local.b),
            y: local.y.iter().map(|&v| base + v).collect(),
            z: local.z.iter().map(|&v| base + v).collect(),
        });
        locals.push((base, local));
    }
    let total = next;
    let mut graph = Digraph::new(total);
    let mut owner = vec![0usize; total];
    for (gi, (base, local)) in locals.iter().enumerate() {
        for (u, v) in local.graph.arcs() {
            graph.add_arc(base + u, base + v);
        }
        for v in 0..local.graph.order() {
            owner[base + v] = gi;
        }
    }
    for u in 0..total {
        for v in 0..total {
            if owner[u] > owner[v] {
                let forward_link = owner[u] == owner[v] + 1 && u == gadgets[owner[u]].s && v == gadgets[owner[v]].t;
                if forward_link {
                    graph.add_arc(v, u);
                } else {
                    graph.add_arc(u, v);
                }
            }
        }
    }
    let literal_vertex = literal_vertices(&psi, &gadgets, GadgetKind::W);
    let mut classes: Vec<Vec<Vertex>> = literal_vertex.clone();
    for g in &gadgets {
        classes.push(vec![g.s, g.t]);
        classes.push(vec![g.a.expect("W gadget has a"), g.b.expect("W gadget has b")]);
    }
    let d = assemble(graph, &classes)?;
    let (d, padded) = d.pad_to_alpha(3)?;
    let s = gadgets[0].s;
    let t = gadgets[gadgets.len() - 1].t;
    let inst = RcpInstance::new(d, s, t, a, b)?;
    let cert = ReductionCertificate {
        kind: GadgetKind::W,
        a,
        b,
        formula: psi,
        original_var_count,
        preprocessing: pre,
        literal_vertex,
        gadgets,
        prefix: None,
        padded: padded.into_iter().collect(),
        s,
        t,
    };
    Ok(Reduction::Instance { inst, cert })
}

/// Maps `phi` to an instance with all classes of size three that has a class-bounded
/// `(s,t)`-path exactly when `phi` has an assignment with between `a` and `b` true literals in
/// every clause.
pub fn reduce_ab3(phi: &CnfFormula, a: usize, b: usize) -> Result<Reduction> {
    if !SUPPORTED_BOUNDS.contains(&(a, b)) {
        return Err(Error::UnsupportedBounds { a, b });
    }
    if phi.clauses.iter().any(|c| c.len() > 3) {
        return Err(Error::PreconditionFailed("clauses must have at most three literals".into()));
    }
    if b <= 2 {
        let pre = preprocess_small_bounds(phi, a, b)?;
        let psi = match &pre {
            Preprocessed::Unsatisfiable { .. } => return fixed_no_instance(a, b),
            Preprocessed::Reduced { formula, .. } => formula.clone(),
        };
        build_b(psi, a, b, phi.var_count, pre)
    } else if a == 2 {
        let pre = preprocess_two_three(phi)?;
        let psi = match &pre {
            Preprocessed::Unsatisfiable { .. } => return fixed_no_instance(a, b),
            Preprocessed::Reduced { formula, .. } => formula.clone(),
        };
        if psi.used_variables().is_empty() {
            return fixed_yes_instance(a, b);
        }
        build_w(psi, a, b, phi.var_count, Some(pre))
    } else {
        if phi.clauses.iter().any(|c| c.is_empty()) {
            return fixed_no_instance(a, b);
        }
        build_w(phi.clone(), a, b, phi.var_count, None)
    }
}

/// Reads the truth assignment of the preprocessed formula off a witness path.
pub fn path_to_assignment(inst: &RcpInstance, cert: &ReductionCertificate, p: &VertexPath) -> Result<Assignment> {
    inst.check_path(p).map_err(|e| Error::NotAWitness(e.to_string()))?;
    let on_path = |v: Vertex| p.contains(v);
    let mut sigma = Assignment::all_false(cert.formula.var_count);
    for g in &cert.gadgets {
        let Some(var) = g.var else { continue };
        let value = match cert.kind {
            GadgetKind::B => on_path(g.y[0]),
            GadgetKind::W => g.y.iter().any(|&v| on_path(v)),
        };
        sigma.set(var, value);
    }
    Ok(sigma)
}

/// Assembles a witness path from an assignment of the preprocessed formula.
pub fn assignment_to_path(inst: &RcpInstance, cert: &ReductionCertificate, sigma: &Assignment) -> Result<VertexPath> {
    if sigma.values.len() < cert.formula.var_count {
        return Err(Error::PreconditionFailed("assignment is shorter than the formula".into()));
    }
    if let Some(i) = cert.formula.first_violation(sigma, cert.a, cert.b) {
        return Err(Error::NotSatisfying(i + 1));
    }
    let mut path: Vec<Vertex> = cert.prefix.clone().unwrap_or_default();
    path.push(cert.gadgets[0].s);
    for g in &cert.gadgets {
        let value = g.var.map_or(true, |v| sigma.var(v));
        match cert.kind {
            GadgetKind::B => {
                path.extend(if value { &g.y } else { &g.z });
                path.push(g.t);
            }
            GadgetKind::W => {
                let (ga, gb) = (g.a.expect("W gadget has a"), g.b.expect("W gadget has b"));
                if path.last() != Some(&g.s) {
                    path.push(g.s);
                }
                // an empty side is swapped for the other one; with b = 3 extra true literals are harmless
                let value = if value { !g.y.is_empty() || g.z.is_empty() } else { g.z.is_empty() && !g.y.is_empty() };
                let clique = if value { &g.y } else { &g.z };
                let mut reps: Vec<Vertex> = Vec::new();
                for &v in clique {
                    if !reps.iter().any(|&r| inst.d.same_class(r, v)) {
                        reps.push(v);
                    }
                }
                if reps.is_empty() {
                    // a and b share a class, so an empty clique is skipped via a -> t
                    path.push(ga);
                } else if value {
                    path.push(ga);
                    path.extend(reps);
                    path.push(gb);
                } else {
                    path.push(gb);
                    path.extend(reps);
                    path.push(ga);
                }
                path.push(g.t);
            }
        }
    }
    let p = VertexPath::new(path)?;
    inst.check_path(&p).map_err(|e| Error::NotAWitness(format!("assembled path fails: {e}")))?;
    Ok(p)
}
