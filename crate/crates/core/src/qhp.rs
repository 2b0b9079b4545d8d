//! Quasi-Hamiltonian path constructions, existence tests, sufficient-condition checkers and the
//! Hamiltonian path test for independence number at most two.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::connectivity::{
    components_masked, is_k_strong, is_k_strong_without, is_strong, is_strong_masked, is_unilateral_graph,
    is_unilateral_with_steps, linear_decomposition, max_disjoint_paths, reach_masked, two_separators,
    unilateral_masked, LinearDecomposition,
};
use crate::error::{Error, Result};
use crate::pathops::{class_representatives, covering_cycle, quasi_merge};
use crate::smd::{Digraph, Smd, Vertex, VertexPath, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockingCondition {
    /// `D - x` is not strong and `y` splits it badly.
    CondI,
    /// `D - y` is not strong and `x` splits it badly.
    CondII,
}

/// Outcome of the `[x,y]`-path existence test for colourful strong SMDs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakQhpVerdict {
    pub exists: bool,
    pub blocking_condition: Option<BlockingCondition>,
    /// Decomposition of `D - x` (or `D - y`) in original vertex ids when a condition blocks.
    pub witness_decomposition: Option<LinearDecomposition>,
}

/// Which sufficient condition for an `(x,y)`-path meeting every class was checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SufficientCondition {
    /// Removing a third vertex `z` leaves a graph that is not 2-strong.
    SeparatedTriple,
    /// Every 2-separator of `x` and `y` is trivial.
    TrivialSeparators,
    /// Three internally disjoint `(x,y)`-paths of length at least two.
    ThreePaths,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hypothesis {
    TwoStrong,
    XNotOnTwoCycle,
    YNotOnTwoCycle,
    MinusXTwoStrong,
    MinusYTwoStrong,
    MinusXyzNotTwoStrong,
    MinusXyzAtLeastFourClasses,
    OrderAtLeastFivePlusFiveAlpha,
    AlphaAtMostTwo,
    NoArcXToY,
    SeparatorsTrivial,
    ThreeDisjointPaths,
}

impl Hypothesis {
    pub fn name(self) -> &'static str {
        match self {
            Hypothesis::TwoStrong => "d is 2-strong",
            Hypothesis::XNotOnTwoCycle => "x is not on a 2-cycle",
            Hypothesis::YNotOnTwoCycle => "y is not on a 2-cycle",
            Hypothesis::MinusXTwoStrong => "d - x is 2-strong",
            Hypothesis::MinusYTwoStrong => "d - y is 2-strong",
            Hypothesis::MinusXyzNotTwoStrong => "d - {x,y,z} is not 2-strong",
            Hypothesis::MinusXyzAtLeastFourClasses => "d - {x,y,z} has at least 4 classes",
            Hypothesis::OrderAtLeastFivePlusFiveAlpha => "|V| >= 5 + 5 alpha",
            Hypothesis::AlphaAtMostTwo => "alpha <= 2",
            Hypothesis::NoArcXToY => "no arc x -> y",
            Hypothesis::SeparatorsTrivial => "all 2-separators of x and y are trivial",
            Hypothesis::ThreeDisjointPaths => "three internally disjoint (x,y)-paths of length >= 2",
        }
    }
}

/// Result of a sufficient-condition check. A failed check says nothing about the path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub theorem: SufficientCondition,
    pub satisfied: bool,
    pub failed_clauses: Vec<Hypothesis>,
}

impl HypothesisReport {
    fn new(theorem: SufficientCondition, checks: Vec<(Hypothesis, bool)>) -> Self {
        let failed_clauses: Vec<Hypothesis> = checks.into_iter().filter(|&(_, ok)| !ok).map(|(h, _)| h).collect();
        HypothesisReport { theorem, satisfied: failed_clauses.is_empty(), failed_clauses }
    }
}

fn on_two_cycle(d: &Smd, v: Vertex) -> bool {
    let g = d.graph();
    g.out_neighbors(v).any(|u| g.has_arc(u, v))
}

/// Cycle of the strong SMD `d[part]` through `v` and `extra`, in original ids, rotated so that it
/// starts at `v`.
fn cycle_from(d: &Smd, part: &[Vertex], v: Vertex, extra: &VertexSet) -> Result<Vec<Vertex>> {
    let sub = d.induced(&part.iter().copied().collect())?;
    let local = |u: Vertex| sub.local(u).expect("vertex of the part");
    let x: VertexSet = std::iter::once(v).chain(extra.iter().copied()).map(local).collect();
    let cyc = sub.lift_path(&covering_cycle(&sub.smd, &x)?).into_vec();
    let at = cyc.iter().position(|&u| u == v).expect("cycle passes through v");
    Ok(cyc[at..].iter().chain(cyc[..at].iter()).copied().collect())
}

/// An `(x,y)`-path meeting every class of a connected non-strong SMD, where `x`'s part precedes
/// `y`'s part in the linear decomposition; `None` when the parts from `x`'s to `y`'s miss a
/// class.
pub fn qhp_non_strong(d: &Smd, x: Vertex, y: Vertex) -> Result<Option<VertexPath>> {
    d.check_vertex(x)?;
    d.check_vertex(y)?;
    if is_strong(d) {
        return Err(Error::IsStrong);
    }
    let dec = linear_decomposition(d)?;
    let idx = dec.index_map(d.order());
    let (i, j) = (idx[x], idx[y]);
    if i >= j {
        return Err(Error::WrongOrder);
    }
    let span = dec.span(i, j);
    if !d.covers_all_classes(&span) {
        return Ok(None);
    }
    let (cx, cy) = (d.class_of(x), d.class_of(y));
    let mut middle_rep: Vec<Option<Vertex>> = vec![None; d.chi()];
    for part in &dec.parts[i + 1..j] {
        for &v in &part.vertices {
            middle_rep[d.class_of(v)].get_or_insert(v);
        }
    }
    let mut taken = vec![false; d.chi()];
    taken[cx] = true;
    taken[cy] = true;
    let mut end_reps = |part: usize| -> VertexSet {
        let mut reps = VertexSet::new();
        for &v in &dec.parts[part].vertices {
            let c = d.class_of(v);
            if !taken[c] && middle_rep[c].is_none() {
                taken[c] = true;
                reps.insert(v);
            }
        }
        reps
    };
    let li = end_reps(i);
    let lj = end_reps(j);

    let head: Vec<Vertex> = if li.is_empty() {
        vec![x]
    } else {
        let cyc = cycle_from(d, &dec.parts[i].vertices, x, &li)?;
        let last = cyc.iter().rposition(|v| li.contains(v)).expect("cycle meets the representatives");
        cyc[..=last].to_vec()
    };
    let tail: Vec<Vertex> = if lj.is_empty() {
        vec![y]
    } else {
        let cyc = cycle_from(d, &dec.parts[j].vertices, y, &lj)?;
        // rotate so that y comes last
        let rot: Vec<Vertex> = cyc[1..].iter().copied().chain(std::iter::once(y)).collect();
        let first = rot.iter().position(|v| lj.contains(v)).expect("cycle meets the representatives");
        rot[first..].to_vec()
    };
    let mut seq = head;
    let (a, b) = (seq[seq.len() - 1], tail[0]);
    if d.same_class(a, b) {
        let m = middle_rep.iter().flatten().copied().find(|&m| !d.same_class(m, a));
        match m {
            Some(m) => seq.push(m),
            None => return Ok(None),
        }
    }
    seq.extend(tail);
    let mut path = VertexPath::new(seq)?;
    path.check_in(d.graph())?;

    for (c, rep) in middle_rep.iter().enumerate() {
        let Some(r) = *rep else { continue };
        if path.vertices().iter().any(|&v| d.class_of(v) == c) {
            continue;
        }
        let mut keep = class_representatives(d, path.vertices());
        keep.insert(r);
        let star = VertexPath::new(vec![x, r, y])?;
        path = quasi_merge(d, &path, &star, &keep)?;
    }
    debug_assert!(d.is_qhp(&path, x, y));
    Ok(Some(path))
}

/// An `(x,y)`-path meeting every class when `D`, `D - x` and `D - y` are strong but
/// `D - {x,y}` is not.
pub fn qhp_not_2strong(d: &Smd, x: Vertex, y: Vertex) -> Result<VertexPath> {
    d.check_vertex(x)?;
    d.check_vertex(y)?;
    if x == y {
        return Err(Error::PreconditionFailed("x and y must differ".into()));
    }
    let n = d.order();
    let g = d.graph();
    let alive_without = |removed: &[Vertex]| -> Vec<bool> { (0..n).map(|v| !removed.contains(&v)).collect() };
    if !is_strong(d) {
        return Err(Error::PreconditionFailed("d is not strong".into()));
    }
    if !is_strong_masked(g, &alive_without(&[x])) || !is_strong_masked(g, &alive_without(&[y])) {
        return Err(Error::PreconditionFailed("d - x or d - y is not strong".into()));
    }
    if n == 2 {
        return VertexPath::new(vec![x, y]);
    }
    if is_strong_masked(g, &alive_without(&[x, y])) {
        return Err(Error::PreconditionFailed("d - {x,y} is strong".into()));
    }
    let rest = d.without(&[x, y])?;
    let fail = || Error::PreconditionFailed("no construction found".into());
    if rest.smd.chi() == 1 {
        let a = rest.original.iter().copied().find(|&a| g.has_arc(x, a) && g.has_arc(a, y)).ok_or_else(fail)?;
        return VertexPath::new(vec![x, a, y]);
    }
    let dec = linear_decomposition(&rest.smd)?;
    let first = &dec.parts[0].vertices;
    let last = &dec.parts[dec.len() - 1].vertices;
    let a = first.iter().copied().find(|&a| g.has_arc(x, rest.original[a])).ok_or_else(fail)?;
    let b = last.iter().copied().find(|&b| g.has_arc(rest.original[b], y)).ok_or_else(fail)?;
    let inner = qhp_non_strong(&rest.smd, a, b)?.ok_or_else(fail)?;
    let mut seq = vec![x];
    seq.extend(rest.lift_path(&inner).into_vec());
    seq.push(y);
    let p = VertexPath::new(seq)?;
    p.check_in(g)?;
    Ok(p)
}

/// Classes of `d` other than `skip` that meet `vertices`, given as a per-class flag.
fn covers_classes_except(d: &Smd, vertices: &[Vertex], skip: usize) -> bool {
    let counts = d.class_counts(vertices);
    counts.iter().enumerate().all(|(c, &k)| c == skip || k > 0)
}

/// Checks whether `D - v` blocks every `[x,y]`-path: it is not strong and neither the parts up to
/// `other`'s part nor the parts from it cover every class of `D - H(v)`.
fn blocking_split(d: &Smd, v: Vertex, other: Vertex) -> Result<Option<LinearDecomposition>> {
    let rest = d.without(&[v])?;
    if is_strong(&rest.smd) {
        return Ok(None);
    }
    let dec = linear_decomposition(&rest.smd)?;
    let j = dec.part_of(rest.local(other).expect("other vertex survives")).expect("every vertex has a part");
    let lift = |vs: Vec<Vertex>| -> Vec<Vertex> { vs.into_iter().map(|u| rest.original[u]).collect() };
    let prefix = lift(dec.span(0, j));
    let suffix = lift(dec.span(j, dec.len() - 1));
    let skip = d.class_of(v);
    if covers_classes_except(d, &prefix, skip) || covers_classes_except(d, &suffix, skip) {
        return Ok(None);
    }
    Ok(Some(dec.map_vertices(|u| rest.original[u])))
}

/// Decides whether a strong SMD with at least five classes outside `{x,y}` has a path between
/// `x` and `y`, in either direction, meeting every class.
pub fn weak_qhp_exists(d: &Smd, x: Vertex, y: Vertex) -> Result<WeakQhpVerdict> {
    d.check_vertex(x)?;
    d.check_vertex(y)?;
    if x == y {
        return Err(Error::PreconditionFailed("x and y must differ".into()));
    }
    if !is_strong(d) {
        return Err(Error::NotStrong);
    }
    let chi = d.chi_without(&[x, y]);
    if chi < 5 {
        return Err(Error::TooFewClasses(chi));
    }
    for (cond, v, other) in [(BlockingCondition::CondI, x, y), (BlockingCondition::CondII, y, x)] {
        if let Some(dec) = blocking_split(d, v, other)? {
            return Ok(WeakQhpVerdict { exists: false, blocking_condition: Some(cond), witness_decomposition: Some(dec) });
        }
    }
    Ok(WeakQhpVerdict { exists: true, blocking_condition: None, witness_decomposition: None })
}

fn check_distinct(d: &Smd, vs: &[Vertex]) -> Result<()> {
    for (i, &v) in vs.iter().enumerate() {
        d.check_vertex(v)?;
        if vs[..i].contains(&v) {
            return Err(Error::PreconditionFailed("vertices must be distinct".into()));
        }
    }
    Ok(())
}

/// Hypotheses for an `(x,y)`-path meeting every class when removing `x`, `y` and a third vertex
/// `z` leaves a colourful graph that is not 2-strong.
pub fn check_separated_triple(d: &Smd, x: Vertex, y: Vertex, z: Vertex) -> Result<HypothesisReport> {
    check_distinct(d, &[x, y, z])?;
    Ok(HypothesisReport::new(
        SufficientCondition::SeparatedTriple,
        vec![
            (Hypothesis::TwoStrong, is_k_strong(d, 2)),
            (Hypothesis::XNotOnTwoCycle, !on_two_cycle(d, x)),
            (Hypothesis::YNotOnTwoCycle, !on_two_cycle(d, y)),
            (Hypothesis::MinusXTwoStrong, is_k_strong_without(d, &[x], 2)),
            (Hypothesis::MinusYTwoStrong, is_k_strong_without(d, &[y], 2)),
            (Hypothesis::MinusXyzNotTwoStrong, !is_k_strong_without(d, &[x, y, z], 2)),
            (Hypothesis::MinusXyzAtLeastFourClasses, d.chi_without(&[x, y, z]) >= 4),
        ],
    ))
}

/// Hypotheses for an `(x,y)`-path meeting every class when every 2-separator of `x` and `y` is
/// trivial. The dominance `y => x` is read as the absence of the arc `x -> y`.
pub fn check_trivial_separators(d: &Smd, x: Vertex, y: Vertex) -> Result<HypothesisReport> {
    check_distinct(d, &[x, y])?;
    let alpha = d.alpha();
    let trivial = two_separators(d, x, y)?.iter().all(|s| s.trivial);
    Ok(HypothesisReport::new(
        SufficientCondition::TrivialSeparators,
        vec![
            (Hypothesis::TwoStrong, is_k_strong(d, 2)),
            (Hypothesis::OrderAtLeastFivePlusFiveAlpha, d.order() >= 5 + 5 * alpha),
            (Hypothesis::AlphaAtMostTwo, alpha <= 2),
            (Hypothesis::XNotOnTwoCycle, !on_two_cycle(d, x)),
            (Hypothesis::YNotOnTwoCycle, !on_two_cycle(d, y)),
            (Hypothesis::NoArcXToY, !d.has_arc(x, y)),
            (Hypothesis::MinusXTwoStrong, is_k_strong_without(d, &[x], 2)),
            (Hypothesis::MinusYTwoStrong, is_k_strong_without(d, &[y], 2)),
            (Hypothesis::SeparatorsTrivial, trivial),
        ],
    ))
}

/// Hypotheses for an `(x,y)`-path meeting every class given three internally disjoint
/// `(x,y)`-paths of length at least two.
pub fn check_three_paths(d: &Smd, x: Vertex, y: Vertex) -> Result<HypothesisReport> {
    check_distinct(d, &[x, y])?;
    Ok(HypothesisReport::new(
        SufficientCondition::ThreePaths,
        vec![
            (Hypothesis::TwoStrong, is_k_strong(d, 2)),
            (Hypothesis::ThreeDisjointPaths, max_disjoint_paths(d, x, y, 2)? >= 3),
        ],
    ))
}

fn check_alpha_two(d: &Smd) -> Result<()> {
    if d.alpha() > 2 {
        return Err(Error::AlphaTooLarge(d.alpha()));
    }
    Ok(())
}

/// Hamiltonian path test for SMDs with independence number at most two, which reduces to
/// unilateral connectivity. Also returns the number of adjacency probes, quadratic in `n`.
pub fn hamiltonian_alpha2_exists_counted(d: &Smd) -> Result<(bool, u64)> {
    check_alpha_two(d)?;
    Ok(is_unilateral_with_steps(d.graph()))
}

pub fn hamiltonian_alpha2_exists(d: &Smd) -> Result<bool> {
    hamiltonian_alpha2_exists_counted(d).map(|(ok, _)| ok)
}

/// A Hamiltonian path of an SMD with independence number at most two, or `None` when none
/// exists. Depth-first search that only keeps prefixes whose remaining vertices, together with
/// the current end, are unilateral and reachable from that end.
pub fn hamiltonian_alpha2_path(d: &Smd) -> Result<Option<VertexPath>> {
    check_alpha_two(d)?;
    let n = d.order();
    if n == 0 {
        return Ok(None);
    }
    Ok(hamiltonian_path_graph(d.graph()).map(|p| VertexPath::new(p).expect("distinct vertices")))
}

/// Hamiltonian path search on a plain digraph; exact, but only fast when unilateral
/// connectivity of the remaining vertices characterises the viable prefixes.
fn hamiltonian_path_graph(g: &Digraph) -> Option<Vec<Vertex>> {
    let n = g.order();
    if n == 0 || !is_unilateral_graph(g) {
        return None;
    }
    let mut steps = 0;
    let mut starts = components_masked(g, &vec![true; n], &mut steps).swap_remove(0);
    starts.sort_unstable();
    let mut search = HpSearch { g, alive: vec![true; n], path: Vec::with_capacity(n), failed: HashSet::new() };
    for s in starts {
        search.path.push(s);
        if search.extend() {
            return Some(search.path);
        }
        search.path.pop();
    }
    None
}

struct HpSearch<'a> {
    g: &'a Digraph,
    /// Vertices not yet on the path, plus the current end.
    alive: Vec<bool>,
    path: Vec<Vertex>,
    failed: HashSet<(Vec<bool>, Vertex)>,
}

impl HpSearch<'_> {
    fn extend(&mut self) -> bool {
        let n = self.g.order();
        let end = *self.path.last().expect("path is never empty");
        if self.path.len() == n {
            return true;
        }
        let key = (self.alive.clone(), end);
        if self.failed.contains(&key) {
            return false;
        }
        let reach = reach_masked(self.g, &self.alive, &[end], false);
        let mut steps = 0;
        let viable = (0..n).all(|v| !self.alive[v] || reach[v]) && unilateral_masked(self.g, &self.alive, &mut steps);
        if viable {
            self.alive[end] = false;
            let next: Vec<Vertex> = (0..n).filter(|&v| self.alive[v] && self.g.has_arc(end, v)).collect();
            for v in next {
                self.path.push(v);
                if self.extend() {
                    return true;
                }
                self.path.pop();
            }
            self.alive[end] = true;
        }
        self.failed.insert(key);
        false
    }
}

/// Removes one arc from every 2-cycle of a unilateral digraph so that it stays unilateral. The
/// vertices are ordered so that each one reaches all later vertices without using earlier ones;
/// of every 2-cycle the arc pointing backwards in that order is removed. A Hamiltonian path is
/// used as the ordering when one exists, which always works; otherwise the ordering is built
/// greedily, and if that choice breaks unilateral connectivity every choice is tried (up to 16
/// 2-cycles). Some unilateral digraphs admit no valid choice; these give `PreconditionFailed`.
pub fn strip_2cycles_unilateral(g: &Digraph) -> Result<(Digraph, Vec<(Vertex, Vertex)>)> {
    let n = g.order();
    let mut steps = 0;
    if !unilateral_masked(g, &vec![true; n], &mut steps) {
        return Err(Error::NotUnilateral);
    }
    let order = match hamiltonian_path_graph(g) {
        Some(p) => p,
        None => harary_order(g)?,
    };
    let mut rank = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let mut out = g.clone();
    let mut removed = Vec::new();
    for (u, v) in g.two_cycles() {
        let (late, early) = if rank[u] > rank[v] { (u, v) } else { (v, u) };
        out.remove_arc(late, early);
        removed.push((late, early));
    }
    removed.sort_unstable();
    if is_unilateral_graph(&out) {
        return Ok((out, removed));
    }
    strip_by_search(g).ok_or_else(|| {
        Error::PreconditionFailed("no choice of one arc per 2-cycle keeps the digraph unilateral".into())
    })
}

/// Tries every choice of one arc per 2-cycle, for at most `STRIP_SEARCH_LIMIT` 2-cycles.
fn strip_by_search(g: &Digraph) -> Option<(Digraph, Vec<(Vertex, Vertex)>)> {
    let cycles = g.two_cycles();
    if cycles.len() > STRIP_SEARCH_LIMIT {
        return None;
    }
    (0u32..1 << cycles.len()).find_map(|bits| {
        let mut out = g.clone();
        let mut removed: Vec<(Vertex, Vertex)> = cycles
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| if bits >> i & 1 == 1 { (u, v) } else { (v, u) })
            .collect();
        for &(u, v) in &removed {
            out.remove_arc(u, v);
        }
        removed.sort_unstable();
        is_unilateral_graph(&out).then_some((out, removed))
    })
}

const STRIP_SEARCH_LIMIT: usize = 16;

/// Ordering in which every vertex reaches all later ones after deleting the earlier ones: pick a
/// vertex of the first strong component whose removal keeps the rest unilateral.
fn harary_order(g: &Digraph) -> Result<Vec<Vertex>> {
    let n = g.order();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let mut steps = 0;
    for _ in 0..n {
        let first = components_masked(g, &alive, &mut steps).swap_remove(0);
        let pick = first.iter().copied().find(|&v| {
            alive[v] = false;
            let ok = unilateral_masked(g, &alive, &mut steps);
            alive[v] = true;
            ok
        });
        let v = pick.ok_or(Error::NotUnilateral)?;
        alive[v] = false;
        order.push(v);
    }
    Ok(order)
}

/// Convenience wrapper taking an SMD.
pub fn strip_2cycles_smd(d: &Smd) -> Result<(Digraph, Vec<(Vertex, Vertex)>)> {
    strip_2cycles_unilateral(d.graph())
}
