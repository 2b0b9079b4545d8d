//! Strong components, linear decomposition, k-strong connectivity, unilateral connectivity,
//! small separators and disjoint-path counting.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::smd::{Digraph, Smd, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PartKind {
    StrongComponent,
    MonochromaticBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub vertices: Vec<Vertex>,
    pub kind: PartKind,
}

/// Ordered partition `R_1, ..., R_k` with no arc from a later part to an earlier one. Every part
/// is a strong component or a set of vertices from a single class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearDecomposition {
    pub parts: Vec<Part>,
}

impl LinearDecomposition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Index of the part containing `v`.
    pub fn part_of(&self, v: Vertex) -> Option<usize> {
        self.parts.iter().position(|p| p.vertices.contains(&v))
    }

    /// Part index for every vertex of an `n`-vertex host.
    pub fn index_map(&self, n: usize) -> Vec<usize> {
        let mut idx = vec![usize::MAX; n];
        for (i, p) in self.parts.iter().enumerate() {
            for &v in &p.vertices {
                idx[v] = i;
            }
        }
        idx
    }

    /// Union of parts `lo..=hi`.
    pub fn span(&self, lo: usize, hi: usize) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self.parts[lo..=hi].iter().flat_map(|p| p.vertices.iter().copied()).collect();
        out.sort_unstable();
        out
    }

    pub fn map_vertices(&self, f: impl Fn(Vertex) -> Vertex) -> LinearDecomposition {
        LinearDecomposition {
            parts: self
                .parts
                .iter()
                .map(|p| {
                    let mut vertices: Vec<Vertex> = p.vertices.iter().map(|&v| f(v)).collect();
                    vertices.sort_unstable();
                    Part { vertices, kind: p.kind }
                })
                .collect(),
        }
    }
}

/// A vertex set of size at most two whose removal destroys every `(x,y)`-path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separator {
    pub members: Vec<Vertex>,
    pub trivial: bool,
}

/// Strong components of the digraph restricted to `alive`, in acyclic order. Ties between
/// incomparable components go to the one holding the smallest vertex. `steps` counts adjacency
/// probes.
pub fn components_masked(g: &Digraph, alive: &[bool], steps: &mut u64) -> Vec<Vec<Vertex>> {
    let n = g.order();
    let comps = tarjan(g, alive, steps);
    let k = comps.len();
    let mut comp_of = vec![usize::MAX; n];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let mut dag = vec![false; k * k];
    let mut indeg = vec![0usize; k];
    for u in (0..n).filter(|&u| alive[u]) {
        for v in (0..n).filter(|&v| alive[v]) {
            *steps += 1;
            let (cu, cv) = (comp_of[u], comp_of[v]);
            if cu != cv && g.has_arc(u, v) && !dag[cu * k + cv] {
                dag[cu * k + cv] = true;
                indeg[cv] += 1;
            }
        }
    }
    let mut heap: BinaryHeap<Reverse<(Vertex, usize)>> =
        (0..k).filter(|&c| indeg[c] == 0).map(|c| Reverse((comps[c][0], c))).collect();
    let mut order = Vec::with_capacity(k);
    while let Some(Reverse((_, c))) = heap.pop() {
        order.push(c);
        for d in 0..k {
            *steps += 1;
            if dag[c * k + d] {
                indeg[d] -= 1;
                if indeg[d] == 0 {
                    heap.push(Reverse((comps[d][0], d)));
                }
            }
        }
    }
    let mut comps = comps;
    order.into_iter().map(|c| std::mem::take(&mut comps[c])).collect()
}

fn tarjan(g: &Digraph, alive: &[bool], steps: &mut u64) -> Vec<Vec<Vertex>> {
    const UNSEEN: usize = usize::MAX;
    let n = g.order();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<Vertex> = Vec::new();
    let mut frames: Vec<(Vertex, Vertex)> = Vec::new();
    let mut next_index = 0;
    let mut comps = Vec::new();
    for root in 0..n {
        if !alive[root] || index[root] != UNSEEN {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, 0));
        while let Some(&mut (v, ref mut w)) = frames.last_mut() {
            let mut child = None;
            while *w < n {
                let u = *w;
                *w += 1;
                *steps += 1;
                if !alive[u] || !g.has_arc(v, u) {
                    continue;
                }
                if index[u] == UNSEEN {
                    child = Some(u);
                    break;
                } else if on_stack[u] {
                    low[v] = low[v].min(index[u]);
                }
            }
            if let Some(u) = child {
                index[u] = next_index;
                low[u] = next_index;
                next_index += 1;
                stack.push(u);
                on_stack[u] = true;
                frames.push((u, 0));
                continue;
            }
            frames.pop();
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let u = stack.pop().expect("tarjan stack underflow");
                    on_stack[u] = false;
                    comp.push(u);
                    if u == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
            if let Some(&(p, _)) = frames.last() {
                low[p] = low[p].min(low[v]);
            }
        }
    }
    comps
}

/// Strong components of `d` in acyclic order.
pub fn strong_components(d: &Smd) -> Vec<Vec<Vertex>> {
    let mut steps = 0;
    components_masked(d.graph(), &vec![true; d.order()], &mut steps)
}

pub fn is_strong_graph(g: &Digraph) -> bool {
    is_strong_masked(g, &vec![true; g.order()])
}

/// True when the alive part has at least one vertex and is strongly connected.
pub fn is_strong_masked(g: &Digraph, alive: &[bool]) -> bool {
    let Some(root) = alive.iter().position(|&a| a) else {
        return false;
    };
    let fwd = reach_masked(g, alive, &[root], false);
    let bwd = reach_masked(g, alive, &[root], true);
    (0..g.order()).all(|v| !alive[v] || (fwd[v] && bwd[v]))
}

pub fn is_strong(d: &Smd) -> bool {
    is_strong_graph(d.graph())
}

/// Vertices reachable from `sources` inside `alive` (following arcs backwards when `reverse`).
pub fn reach_masked(g: &Digraph, alive: &[bool], sources: &[Vertex], reverse: bool) -> Vec<bool> {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &s in sources {
        if alive[s] && !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            if alive[v] && !seen[v] && if reverse { g.has_arc(v, u) } else { g.has_arc(u, v) } {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Shortest path from any source to any target through alive vertices, by BFS. Sources and
/// targets must themselves be alive. Ties resolve towards smaller vertex ids.
pub fn shortest_path_masked(
    g: &Digraph,
    alive: &[bool],
    sources: &[Vertex],
    targets: &[bool],
) -> Option<Vec<Vertex>> {
    let n = g.order();
    let mut pred = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    let mut srcs: Vec<Vertex> = sources.iter().copied().filter(|&s| alive[s]).collect();
    srcs.sort_unstable();
    for s in srcs {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        if targets[u] {
            let mut path = vec![u];
            let mut cur = u;
            while pred[cur] != usize::MAX {
                cur = pred[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for v in 0..n {
            if alive[v] && !seen[v] && g.has_arc(u, v) {
                seen[v] = true;
                pred[v] = u;
                queue.push_back(v);
            }
        }
    }
    None
}

/// Linear decomposition of a connected SMD.
pub fn linear_decomposition(d: &Smd) -> Result<LinearDecomposition> {
    if d.order() == 0 {
        return Err(Error::EmptySet);
    }
    if d.order() >= 2 && d.chi() == 1 {
        return Err(Error::Disconnected);
    }
    let comps = strong_components(d);
    let mut parts: Vec<Part> = Vec::new();
    for comp in comps {
        if comp.len() == 1 {
            if let Some(last) = parts.last_mut() {
                let v = comp[0];
                if last.vertices.len() == 1 || last.kind == PartKind::MonochromaticBlock {
                    let u = last.vertices[0];
                    if d.same_class(u, v) {
                        last.vertices.push(v);
                        last.vertices.sort_unstable();
                        last.kind = PartKind::MonochromaticBlock;
                        continue;
                    }
                }
            }
        }
        parts.push(Part { vertices: comp, kind: PartKind::StrongComponent });
    }
    Ok(LinearDecomposition { parts })
}

/// Strong connectivity after removing any set of at most `k-1` vertices, with at least `k+1`
/// vertices overall.
pub fn is_k_strong_graph(g: &Digraph, k: usize) -> bool {
    let n = g.order();
    if k == 0 || n < k + 1 {
        return false;
    }
    let mut alive = vec![true; n];
    fn rec(g: &Digraph, alive: &mut [bool], start: usize, left: usize) -> bool {
        if !is_strong_masked(g, alive) {
            return false;
        }
        if left == 0 {
            return true;
        }
        for v in start..g.order() {
            alive[v] = false;
            let ok = rec(g, alive, v + 1, left - 1);
            alive[v] = true;
            if !ok {
                return false;
            }
        }
        true
    }
    rec(g, &mut alive, 0, k - 1)
}

pub fn is_k_strong(d: &Smd, k: usize) -> bool {
    is_k_strong_graph(d.graph(), k)
}

/// `D - removed` is k-strong.
pub fn is_k_strong_without(d: &Smd, removed: &[Vertex], k: usize) -> bool {
    let keep: Vec<Vertex> = (0..d.order()).filter(|v| !removed.contains(v)).collect();
    let mut g = Digraph::new(keep.len());
    for (i, &a) in keep.iter().enumerate() {
        for (j, &b) in keep.iter().enumerate() {
            if i != j && d.has_arc(a, b) {
                g.add_arc(i, j);
            }
        }
    }
    is_k_strong_graph(&g, k)
}

/// Unilateral connectivity test with the number of adjacency probes performed.
pub fn is_unilateral_with_steps(g: &Digraph) -> (bool, u64) {
    let mut steps = 0;
    let alive = vec![true; g.order()];
    let ok = unilateral_masked(g, &alive, &mut steps);
    (ok, steps)
}

/// The condensation of the alive part is a directed path.
pub fn unilateral_masked(g: &Digraph, alive: &[bool], steps: &mut u64) -> bool {
    let comps = components_masked(g, alive, steps);
    for w in comps.windows(2) {
        let mut linked = false;
        'scan: for &u in &w[0] {
            for &v in &w[1] {
                *steps += 1;
                if g.has_arc(u, v) {
                    linked = true;
                    break 'scan;
                }
            }
        }
        if !linked {
            return false;
        }
    }
    true
}

pub fn is_unilateral_graph(g: &Digraph) -> bool {
    is_unilateral_with_steps(g).0
}

pub fn is_unilateral(d: &Smd) -> bool {
    is_unilateral_graph(d.graph())
}

/// Every vertex set `S` of size at most two avoiding `x` and `y` such that `D - S` has no
/// `(x,y)`-path. Non-minimal sets are included.
pub fn two_separators(d: &Smd, x: Vertex, y: Vertex) -> Result<Vec<Separator>> {
    d.check_vertex(x)?;
    d.check_vertex(y)?;
    if x == y {
        return Err(Error::PreconditionFailed("x and y must differ".into()));
    }
    let g = d.graph();
    let n = d.order();
    let others: Vec<Vertex> = (0..n).filter(|&v| v != x && v != y).collect();
    let mut candidates: Vec<Vec<Vertex>> = vec![vec![]];
    for (i, &a) in others.iter().enumerate() {
        candidates.push(vec![a]);
        for &b in &others[i + 1..] {
            candidates.push(vec![a, b]);
        }
    }
    candidates.sort();
    let out_x: Vec<Vertex> = g.out_neighbors(x).collect();
    let in_y: Vec<Vertex> = g.in_neighbors(y).collect();
    let mut alive = vec![true; n];
    let mut seps = Vec::new();
    for s in candidates {
        for &v in &s {
            alive[v] = false;
        }
        let reach = reach_masked(g, &alive, &[x], false);
        for &v in &s {
            alive[v] = true;
        }
        if !reach[y] {
            let trivial = out_x.iter().all(|v| s.contains(v)) || in_y.iter().all(|v| s.contains(v));
            seps.push(Separator { members: s, trivial });
        }
    }
    Ok(seps)
}

struct FlowNet {
    head: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<i64>,
    next: Vec<usize>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet { head: vec![usize::MAX; nodes], to: Vec::new(), cap: Vec::new(), next: Vec::new() }
    }

    fn add(&mut self, u: usize, v: usize, c: i64) {
        for (a, b, cc) in [(u, v, c), (v, u, 0)] {
            self.to.push(b);
            self.cap.push(cc);
            self.next.push(self.head[a]);
            self.head[a] = self.to.len() - 1;
        }
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let nodes = self.head.len();
        let mut flow = 0;
        loop {
            let mut pred_edge = vec![usize::MAX; nodes];
            let mut seen = vec![false; nodes];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let mut e = self.head[u];
                while e != usize::MAX {
                    let v = self.to[e];
                    if self.cap[e] > 0 && !seen[v] {
                        seen[v] = true;
                        pred_edge[v] = e;
                        queue.push_back(v);
                    }
                    e = self.next[e];
                }
            }
            if !seen[t] {
                return flow;
            }
            let mut v = t;
            while v != s {
                let e = pred_edge[v];
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                v = self.to[e ^ 1];
            }
            flow += 1;
        }
    }
}

/// Maximum number of internally disjoint `(x,y)`-paths of length at least `min_len`
/// (`min_len` 1 or 2), by unit vertex capacities and augmenting paths.
pub fn max_disjoint_paths_graph(g: &Digraph, x: Vertex, y: Vertex, min_len: usize) -> Result<usize> {
    let n = g.order();
    for v in [x, y] {
        if v >= n {
            return Err(Error::UnknownVertex(v));
        }
    }
    if x == y {
        return Err(Error::PreconditionFailed("x and y must differ".into()));
    }
    if !(1..=2).contains(&min_len) {
        return Err(Error::PreconditionFailed("min_len must be 1 or 2".into()));
    }
    let big = n as i64 + 1;
    let mut net = FlowNet::new(2 * n);
    for v in 0..n {
        let c = if v == x || v == y { big } else { 1 };
        net.add(2 * v, 2 * v + 1, c);
    }
    for u in 0..n {
        for v in g.out_neighbors(u) {
            if u == x && v == y && min_len == 2 {
                continue;
            }
            net.add(2 * u + 1, 2 * v, 1);
        }
    }
    Ok(net.max_flow(2 * x + 1, 2 * y) as usize)
}

pub fn max_disjoint_paths(d: &Smd, x: Vertex, y: Vertex, min_len: usize) -> Result<usize> {
    max_disjoint_paths_graph(d.graph(), x, y, min_len)
}
