//! Path constructions: merging two paths, covering cycles, single-vertex extension, and path
//! recovery after adding a 2-cycle on a separator.

use std::collections::HashMap;

use crate::connectivity::{is_k_strong, is_strong, reach_masked, shortest_path_masked};
use crate::error::{Error, Result};
use crate::smd::{Digraph, Smd, Vertex, VertexPath, VertexSet};

/// First vertex of each class along `vertices`.
pub fn class_representatives(d: &Smd, vertices: &[Vertex]) -> VertexSet {
    let mut seen = vec![false; d.chi()];
    let mut reps = VertexSet::new();
    for &v in vertices {
        let c = d.class_of(v);
        if !seen[c] {
            seen[c] = true;
            reps.insert(v);
        }
    }
    reps
}

fn check_distinct_classes(d: &Smd, x: &VertexSet) -> Result<()> {
    let mut owner: HashMap<usize, Vertex> = HashMap::with_capacity(x.len());
    for &v in x {
        d.check_vertex(v)?;
        if let Some(&u) = owner.get(&d.class_of(v)) {
            return Err(Error::ColorClash(u, v));
        }
        owner.insert(d.class_of(v), v);
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    P,
    Q,
}

/// Merges the interiors `a` and `b` of one segment between shared vertices `start` and `end`
/// (or the free path ends when `None`), appending the chosen vertices to `out`.
fn merge_segment(
    g: &Digraph,
    a: &[Vertex],
    b: &[Vertex],
    in_x: &dyn Fn(Vertex) -> bool,
    end: Option<Vertex>,
    out: &mut Vec<Vertex>,
    steps: &mut u64,
) -> Result<()> {
    let xa: Vec<usize> = (0..a.len()).filter(|&i| in_x(a[i])).collect();
    let xb: Vec<usize> = (0..b.len()).filter(|&i| in_x(b[i])).collect();
    *steps += (a.len() + b.len()) as u64;
    let chain = |s: Side| if s == Side::P { a } else { b };
    let mut cur: Option<(Side, usize)> = None;
    let (mut i, mut j) = (0, 0);
    loop {
        let next = match (xa.get(i), xb.get(j)) {
            (None, None) => break,
            (Some(&pa), None) => (Side::P, pa),
            (None, Some(&qb)) => (Side::Q, qb),
            (Some(&pa), Some(&qb)) => {
                *steps += 1;
                if g.has_arc(a[pa], b[qb]) {
                    (Side::P, pa)
                } else {
                    (Side::Q, qb)
                }
            }
        };
        let (side, pos) = next;
        match cur {
            None => out.extend_from_slice(&chain(side)[..=pos]),
            Some((s, prev)) if s == side => out.extend_from_slice(&chain(side)[prev + 1..=pos]),
            Some((s, prev)) => {
                let from = chain(s)[prev];
                let to = chain(side)[pos];
                if !g.has_arc(from, to) {
                    return Err(Error::NotAPath(format!("merge needs missing arc {from}->{to}")));
                }
                out.push(to);
            }
        }
        *steps += 1;
        cur = Some((side, pos));
        if side == Side::P {
            i += 1;
        } else {
            j += 1;
        }
    }
    match cur {
        None => out.extend_from_slice(a),
        Some((s, prev)) => out.extend_from_slice(&chain(s)[prev + 1..]),
    }
    if let Some(e) = end {
        out.push(e);
    }
    Ok(())
}

/// Merges an `(s1,t1)`-path `p` and an `(s2,t2)`-path `q` whose union is acyclic into one path
/// from `s1` or `s2` to `t1` or `t2` that contains every vertex of `x`. Members of `x` must lie
/// in pairwise different classes. Also returns the number of elementary steps taken, which is
/// linear in `|V(p) ∪ V(q)|`.
pub fn quasi_merge_counted(d: &Smd, p: &VertexPath, q: &VertexPath, x: &VertexSet) -> Result<(VertexPath, u64)> {
    let g = d.graph();
    p.check_in(g)?;
    q.check_in(g)?;
    check_distinct_classes(d, x)?;
    let mut steps = 0u64;
    let pos_p: HashMap<Vertex, usize> = p.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let pos_q: HashMap<Vertex, usize> = q.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect();
    steps += (p.len() + q.len()) as u64;
    for &v in x {
        if !pos_p.contains_key(&v) && !pos_q.contains_key(&v) {
            return Err(Error::PreconditionFailed(format!("vertex {v} of x lies on neither path")));
        }
    }
    let shared_p: Vec<Vertex> = p.vertices().iter().copied().filter(|v| pos_q.contains_key(v)).collect();
    let shared_q: Vec<Vertex> = q.vertices().iter().copied().filter(|v| pos_p.contains_key(v)).collect();
    steps += (p.len() + q.len()) as u64;
    if shared_p != shared_q {
        return Err(Error::UnionCyclic);
    }
    if p == q {
        return Ok((p.clone(), steps));
    }
    let in_x = |v: Vertex| x.contains(&v);
    let (pv, qv) = (p.vertices(), q.vertices());
    let mut out = Vec::with_capacity(p.len() + q.len());
    if shared_p.is_empty() {
        merge_segment(g, pv, qv, &in_x, None, &mut out, &mut steps)?;
    } else {
        let c0 = shared_p[0];
        merge_segment(g, &pv[..pos_p[&c0]], &qv[..pos_q[&c0]], &in_x, Some(c0), &mut out, &mut steps)?;
        for w in shared_p.windows(2) {
            let (c, e) = (w[0], w[1]);
            let a = &pv[pos_p[&c] + 1..pos_p[&e]];
            let b = &qv[pos_q[&c] + 1..pos_q[&e]];
            merge_segment(g, a, b, &in_x, Some(e), &mut out, &mut steps)?;
        }
        let cr = shared_p[shared_p.len() - 1];
        merge_segment(g, &pv[pos_p[&cr] + 1..], &qv[pos_q[&cr] + 1..], &in_x, None, &mut out, &mut steps)?;
    }
    let r = VertexPath::new(out)?;
    r.check_in(g)?;
    Ok((r, steps))
}

pub fn quasi_merge(d: &Smd, p: &VertexPath, q: &VertexPath, x: &VertexSet) -> Result<VertexPath> {
    quasi_merge_counted(d, p, q, x).map(|(r, _)| r)
}

/// Directed cycle through every vertex of `x` (pairwise different classes) in a strong SMD.
/// Returned as the vertex sequence; the closing arc runs from the last vertex to the first.
pub fn covering_cycle(d: &Smd, x: &VertexSet) -> Result<VertexPath> {
    if d.order() < 2 || !is_strong(d) {
        return Err(Error::NotStrong);
    }
    check_distinct_classes(d, x)?;
    let g = d.graph();
    let n = d.order();
    let all = vec![true; n];
    let root = x.iter().next().copied().unwrap_or(0);
    let mut is_root = vec![false; n];
    is_root[root] = true;
    let outs: Vec<Vertex> = g.out_neighbors(root).collect();
    let back = shortest_path_masked(g, &all, &outs, &is_root).ok_or(Error::NotStrong)?;
    let mut cycle: Vec<Vertex> = std::iter::once(root).chain(back[..back.len() - 1].iter().copied()).collect();
    for &v in x {
        if !cycle.contains(&v) {
            cycle = absorb(d, cycle, v)?;
        }
    }
    let c = VertexPath::new(cycle)?;
    c.check_in(g)?;
    if !g.has_arc(c.last(), c.first()) {
        return Err(Error::NotAPath("cycle does not close".into()));
    }
    Ok(c)
}

/// Inserts `v` into the cycle, dropping only vertices of `v`'s class.
fn absorb(d: &Smd, cycle: Vec<Vertex>, v: Vertex) -> Result<Vec<Vertex>> {
    let g = d.graph();
    let n = d.order();
    let len = cycle.len();
    let adjacent: Vec<usize> = (0..len).filter(|&k| !d.same_class(cycle[k], v)).collect();
    if adjacent.is_empty() {
        return Err(Error::NotAPath("cycle lies inside one class".into()));
    }
    let has_in = adjacent.iter().any(|&k| g.has_arc(cycle[k], v));
    let has_out = adjacent.iter().any(|&k| g.has_arc(v, cycle[k]));
    // positions from `from` to `to` going forward, inclusive
    let rotate = |from: usize, to: usize| -> Vec<Vertex> {
        let mut out = Vec::new();
        let mut k = from;
        loop {
            out.push(cycle[k]);
            if k == to {
                break;
            }
            k = (k + 1) % len;
        }
        out
    };
    if has_in && has_out {
        let m = adjacent.len();
        for idx in 0..m {
            let ci = adjacent[idx];
            let cj = adjacent[(idx + 1) % m];
            if g.has_arc(cycle[ci], v) && g.has_arc(v, cycle[cj]) {
                if ci == cj {
                    return Ok(vec![cycle[ci], v]);
                }
                let mut out = rotate(cj, ci);
                out.push(v);
                return Ok(out);
            }
        }
        unreachable!("an in-neighbour is followed by an out-neighbour");
    }
    let mut on_cycle = vec![false; n];
    for &c in &cycle {
        on_cycle[c] = true;
    }
    let all = vec![true; n];
    if has_in {
        // every adjacent cycle vertex points to v: find a way back from v
        let q = shortest_path_masked(g, &all, &[v], &on_cycle).ok_or(Error::NotStrong)?;
        let cj = cycle.iter().position(|&c| c == q[q.len() - 1]).expect("path ends on the cycle");
        let ci = (1..=len).map(|s| (cj + len - s) % len).find(|&k| !d.same_class(cycle[k], v)).expect("adjacent vertex");
        let mut out = if ci == cj { vec![cycle[cj]] } else { rotate(cj, ci) };
        out.extend_from_slice(&q[..q.len() - 1]);
        Ok(out)
    } else {
        // v points to every adjacent cycle vertex: find a way from the cycle to v
        let mut target = vec![false; n];
        target[v] = true;
        let q = shortest_path_masked(g, &all, &cycle, &target).ok_or(Error::NotStrong)?;
        let ci = cycle.iter().position(|&c| c == q[0]).expect("path starts on the cycle");
        let cj = (1..=len).map(|s| (ci + s) % len).find(|&k| !d.same_class(cycle[k], v)).expect("adjacent vertex");
        let mut out = if ci == cj { vec![cycle[ci]] } else { rotate(cj, ci) };
        out.extend_from_slice(&q[1..]);
        Ok(out)
    }
}

/// Extends an `(x,y)`-path `p` of `D - z` meeting every class of `D - z` to an `(x,y)`-path of
/// `D` meeting every class, where `D` is 2-strong. One of the following must hold: `z` shares its
/// class with another vertex; some path vertex `v_i` has `v_i -> z -> v_j` for a later `v_j`;
/// `x -> z` or `z -> y`.
pub fn shortcut_extend(d: &Smd, p: &VertexPath, z: Vertex) -> Result<VertexPath> {
    d.check_vertex(z)?;
    if !is_k_strong(d, 2) {
        return Err(Error::Not2Strong);
    }
    let g = d.graph();
    p.check_in(g)?;
    if p.contains(z) {
        return Err(Error::PreconditionFailed("the path already contains z".into()));
    }
    let class_z = d.class_of(z);
    let zsize = d.classes()[class_z].len();
    let counts = d.class_counts(p.vertices());
    if counts.iter().enumerate().any(|(c, &k)| k == 0 && !(c == class_z && zsize == 1)) {
        return Err(Error::PreconditionFailed("the path misses a class of D - z".into()));
    }
    if zsize > 1 {
        return Ok(p.clone());
    }
    let v = p.vertices();
    let (x, y) = (p.first(), p.last());
    let mut reps = class_representatives(d, v);
    reps.insert(z);
    let first_in = v.iter().position(|&u| g.has_arc(u, z));
    let last_out = v.iter().rposition(|&u| g.has_arc(z, u));
    if let (Some(i), Some(j)) = (first_in, last_out) {
        if i < j {
            let mut r: Vec<Vertex> = v[..=i].to_vec();
            r.push(z);
            r.extend_from_slice(&v[j..]);
            return quasi_merge(d, p, &VertexPath::new(r)?, &reps);
        }
    }
    let n = d.order();
    if g.has_arc(z, y) {
        let mut alive = vec![true; n];
        alive[y] = false;
        let mut target = vec![false; n];
        target[z] = true;
        let sources: Vec<Vertex> = v.iter().copied().filter(|&u| u != y).collect();
        let q = shortest_path_masked(g, &alive, &sources, &target).ok_or(Error::Not2Strong)?;
        let i = v.iter().position(|&u| u == q[0]).expect("path starts on p");
        let mut r: Vec<Vertex> = v[..i].to_vec();
        r.extend_from_slice(&q);
        r.push(y);
        return quasi_merge(d, p, &VertexPath::new(r)?, &reps);
    }
    if g.has_arc(x, z) {
        let mut alive = vec![true; n];
        alive[x] = false;
        let mut target = vec![false; n];
        for &u in v {
            target[u] = u != x;
        }
        let q = shortest_path_masked(g, &alive, &[z], &target).ok_or(Error::Not2Strong)?;
        let j = v.iter().position(|&u| u == q[q.len() - 1]).expect("path ends on p");
        let mut r = vec![x];
        r.extend_from_slice(&q);
        r.extend_from_slice(&v[j + 1..]);
        return quasi_merge(d, p, &VertexPath::new(r)?, &reps);
    }
    Err(Error::PreconditionFailed(
        "none holds: (a) z has a classmate, (b) v_i -> z -> v_j with i < j, (c) x -> z or z -> y".into(),
    ))
}

/// `D` plus both arcs between `u` and `v`. Joining two vertices of a class with three or more
/// members cannot give an SMD and is refused.
pub fn augment_2sep(d: &Smd, u: Vertex, v: Vertex) -> Result<Digraph> {
    d.check_vertex(u)?;
    d.check_vertex(v)?;
    if u == v {
        return Err(Error::PreconditionFailed("u and v must differ".into()));
    }
    if d.same_class(u, v) {
        let size = d.classes()[d.class_of(u)].len();
        if size >= 3 {
            return Err(Error::WouldBreakSmd(size));
        }
    }
    let mut g = d.graph().clone();
    g.add_arc(u, v);
    g.add_arc(v, u);
    Ok(g)
}

/// Shortest path from `sources` to a vertex of `targets` whose internal vertices all satisfy
/// `internal`.
fn connector(g: &Digraph, sources: &[Vertex], internal: &[bool], targets: &[bool]) -> Option<Vec<Vertex>> {
    let n = g.order();
    let mut pred = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    for &s in sources {
        seen[s] = true;
        queue.push_back(s);
    }
    while let Some(w) = queue.pop_front() {
        for o in g.out_neighbors(w) {
            if targets[o] {
                let mut path = vec![o, w];
                let mut cur = w;
                while pred[cur] != usize::MAX {
                    cur = pred[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            if internal[o] && !seen[o] {
                seen[o] = true;
                pred[o] = w;
                queue.push_back(o);
            }
        }
    }
    None
}

/// Turns an `(x,y)`-path `p_aug` of `augment_2sep(d,u,v)` that meets every class of `d` into an
/// `(x,y)`-path of `d` meeting every class, using shortest connectors around the separator and
/// a merge. Requires `{u,v}` to separate `x` from `y` and two internally disjoint `(x,y)`-paths.
pub fn recover_qhp(
    d: &Smd,
    d_aug: &Digraph,
    p_aug: &VertexPath,
    u: Vertex,
    v: Vertex,
    x: Vertex,
    y: Vertex,
) -> Result<VertexPath> {
    let g = d.graph();
    let pre = |m: &str| Error::PreconditionFailed(m.to_string());
    p_aug.check_in(d_aug).map_err(|_| pre("p_aug is not a path of the augmented digraph"))?;
    if p_aug.first() != x || p_aug.last() != y || !d.covers_all_classes(p_aug.vertices()) {
        return Err(pre("p_aug is not an (x,y)-path meeting every class"));
    }
    let new_arcs: Vec<(Vertex, Vertex)> = p_aug.arcs().filter(|&(a, b)| !g.has_arc(a, b)).collect();
    let (v, u) = match new_arcs.as_slice() {
        [] => return Ok(p_aug.clone()),
        [(a, b)] if (*a, *b) == (v, u) || (*a, *b) == (u, v) => (*a, *b),
        _ => return Err(pre("p_aug uses arcs outside d and the separator 2-cycle")),
    };
    // p_aug uses the added arc v -> u
    let pv = p_aug.vertices();
    let iv = pv.iter().position(|&w| w == v).expect("v on path");
    let iu = iv + 1;
    let n = d.order();
    let mut alive = vec![true; n];
    alive[u] = false;
    alive[v] = false;
    // reachable from x and reaching y in D - {u,v}; disjoint because {u,v} separates them
    let in_vx = reach_masked(g, &alive, &[x], false);
    let in_vy = reach_masked(g, &alive, &[y], true);
    let mut to_u = vec![false; n];
    to_u[u] = true;
    let p1 = connector(g, &pv[..=iv], &in_vx, &to_u).ok_or_else(|| pre("no connector into u"))?;
    let mut tail = vec![false; n];
    for &w in &pv[iu..] {
        tail[w] = true;
    }
    let p2 = connector(g, &[v], &in_vy, &tail).ok_or_else(|| pre("no connector out of v"))?;
    let w1 = p1[0];
    let w2 = p2[p2.len() - 1];
    let i1 = pv.iter().position(|&w| w == w1).expect("w1 on path");
    let i2 = pv.iter().position(|&w| w == w2).expect("w2 on path");
    let mut q1: Vec<Vertex> = pv[..i1].to_vec();
    q1.extend_from_slice(&p1);
    q1.extend_from_slice(&pv[iu + 1..]);
    let mut q2: Vec<Vertex> = pv[..iv].to_vec();
    q2.extend_from_slice(&p2);
    q2.extend_from_slice(&pv[i2 + 1..]);
    let reps = class_representatives(d, pv);
    let r = quasi_merge(d, &VertexPath::new(q1)?, &VertexPath::new(q2)?, &reps)?;
    if !d.is_qhp(&r, x, y) {
        return Err(Error::NotAPath("recovered path misses a class".into()));
    }
    Ok(r)
}
