//! Brute-force reference implementations shared by the integration tests. Everything here is
//! written from the definitions and deliberately avoids the library's own search code.

#![allow(dead_code)]

pub mod rule_rows;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smdpath::gen::{gen_smd, Connectivity, GenSpec};
use smdpath::satred::{Assignment, CnfFormula};
use smdpath::{Digraph, Smd, Vertex, VertexPath, VertexSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Class sizes summing to `n` with every class of size at most `alpha_max`.
pub fn class_sizes(rng: &mut ChaCha8Rng, n: usize, alpha_max: usize) -> Vec<usize> {
    let mut left = n;
    let mut out = Vec::new();
    while left > 0 {
        let s = rng.gen_range(1..=alpha_max.min(left));
        out.push(s);
        left -= s;
    }
    out
}

/// Random SMD of order `n` with classes of size at most `alpha_max`, or `None` if the
/// connectivity target was not met within the rejection budget.
pub fn random_smd(seed: u64, n: usize, alpha_max: usize, two_cycle_prob: f64, target: Connectivity) -> Option<Smd> {
    let mut r = rng(seed ^ 0x5eed);
    let sizes = class_sizes(&mut r, n, alpha_max);
    gen_smd(&GenSpec::new(seed, sizes).two_cycle_prob(two_cycle_prob).connectivity(target).max_rejects(200)).ok()
}

/// `reach[u][v]`: a directed path from `u` to `v` exists (every vertex reaches itself).
pub fn reachability(g: &Digraph) -> Vec<Vec<bool>> {
    let n = g.order();
    let mut reach = vec![vec![false; n]; n];
    for (u, row) in reach.iter_mut().enumerate() {
        let mut stack = vec![u];
        row[u] = true;
        while let Some(w) = stack.pop() {
            for v in 0..n {
                if g.has_arc(w, v) && !row[v] {
                    row[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    reach
}

/// Strong connectivity of `g` with `removed` deleted.
pub fn strong_without(g: &Digraph, removed: &[Vertex]) -> bool {
    let n = g.order();
    let keep: Vec<Vertex> = (0..n).filter(|v| !removed.contains(v)).collect();
    if keep.is_empty() {
        return false;
    }
    let mut h = Digraph::new(keep.len());
    for (i, &u) in keep.iter().enumerate() {
        for (j, &v) in keep.iter().enumerate() {
            if g.has_arc(u, v) {
                h.add_arc(i, j);
            }
        }
    }
    reachability(&h).iter().all(|row| row.iter().all(|&b| b))
}

pub fn is_strong(g: &Digraph) -> bool {
    strong_without(g, &[])
}

/// `k`-strong from the definition: at least `k+1` vertices, strong after deleting any set of
/// fewer than `k` vertices.
pub fn is_k_strong(g: &Digraph, k: usize) -> bool {
    let n = g.order();
    if n < k + 1 {
        return false;
    }
    subsets_up_to(n, k.saturating_sub(1)).iter().all(|s| strong_without(g, s))
}

/// Every subset of `0..n` with at most `k` elements.
pub fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<Vertex>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&l: &Vertex| l + 1);
            for v in start..n {
                let mut t: Vec<Vertex> = s.clone();
                t.push(v);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn is_unilateral(g: &Digraph) -> bool {
    let r = reachability(g);
    let n = g.order();
    (0..n).all(|u| (0..n).all(|v| r[u][v] || r[v][u]))
}

/// Checks that `p` is a sequence of distinct vertices joined by arcs of `g`.
pub fn is_path(g: &Digraph, p: &[Vertex]) -> bool {
    let mut seen = vec![false; g.order()];
    for &v in p {
        if v >= g.order() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    !p.is_empty() && p.windows(2).all(|w| g.has_arc(w[0], w[1]))
}

/// Per-class vertex counts of `vertices`.
pub fn counts(d: &Smd, vertices: &[Vertex]) -> Vec<usize> {
    let mut c = vec![0; d.chi()];
    for &v in vertices {
        c[d.class_of(v)] += 1;
    }
    c
}

/// Subset dynamic programme over vertex sets: `on[mask]` has bit `v` set when some path from
/// `s` uses exactly the vertices of `mask` and ends at `v`. Returns the table.
fn path_table(g: &Digraph, s: Vertex) -> Vec<u32> {
    let n = g.order();
    assert!(n <= 20, "path table limited to 20 vertices");
    let mut on = vec![0u32; 1 << n];
    on[1 << s] = 1 << s;
    for mask in 1usize..1 << n {
        let ends = on[mask];
        if ends == 0 {
            continue;
        }
        for v in 0..n {
            if ends >> v & 1 == 0 {
                continue;
            }
            for w in 0..n {
                if mask >> w & 1 == 0 && g.has_arc(v, w) {
                    on[mask | 1 << w] |= 1 << w;
                }
            }
        }
    }
    on
}

/// Some `(s,t)`-path of `g` has between `lo` and `hi` vertices in every class of `class_of`.
pub fn bounded_path_exists_in(g: &Digraph, class_of: &[usize], s: Vertex, t: Vertex, lo: usize, hi: usize) -> bool {
    if s == t {
        return false;
    }
    let chi = class_of.iter().max().map_or(0, |&m| m + 1);
    let on = path_table(g, s);
    (0..on.len()).any(|mask| {
        if on[mask] >> t & 1 == 0 {
            return false;
        }
        let mut c = vec![0; chi];
        for (v, &k) in class_of.iter().enumerate() {
            if mask >> v & 1 == 1 {
                c[k] += 1;
            }
        }
        c.iter().all(|&k| lo <= k && k <= hi)
    })
}

/// Some `(s,t)`-path has per-class counts within `[lo, hi]`.
pub fn bounded_path_exists(d: &Smd, s: Vertex, t: Vertex, lo: usize, hi: usize) -> bool {
    bounded_path_exists_in(d.graph(), d.class_map(), s, t, lo, hi)
}

/// An `(x,y)`-path meeting every class exists.
pub fn qhp_exists(d: &Smd, x: Vertex, y: Vertex) -> bool {
    bounded_path_exists(d, x, y, 1, usize::MAX)
}

/// A Hamiltonian path exists.
pub fn hp_exists(g: &Digraph) -> bool {
    let n = g.order();
    if n <= 1 {
        return true;
    }
    let full = (1usize << n) - 1;
    (0..n).any(|s| path_table(g, s)[full] != 0)
}

/// All assignments over `phi.var_count` variables, tried exhaustively.
pub fn ab_sat_exists(phi: &CnfFormula, a: usize, b: usize) -> bool {
    let n = phi.var_count;
    (0u64..1 << n).any(|bits| {
        phi.clauses.iter().all(|c| {
            let k = c.iter().filter(|&&l| (bits >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0)).count();
            a <= k && k <= b
        })
    })
}

pub fn assignment_ok(phi: &CnfFormula, sigma: &Assignment, a: usize, b: usize) -> bool {
    phi.clauses.iter().all(|c| {
        let k = c.iter().filter(|&&l| sigma.var(l.unsigned_abs() as usize) == (l > 0)).count();
        a <= k && k <= b
    })
}

/// Smallest vertex set avoiding `x` and `y` whose removal, together with the arc `x -> y`, leaves
/// no `(x,y)`-path. By exhaustive search over subsets, so only for small graphs.
pub fn min_vertex_cut(g: &Digraph, x: Vertex, y: Vertex) -> usize {
    let n = g.order();
    let others: Vec<Vertex> = (0..n).filter(|&v| v != x && v != y).collect();
    for k in 0..=others.len() {
        for s in subsets_up_to(others.len(), k).into_iter().filter(|s| s.len() == k) {
            let removed: Vec<Vertex> = s.iter().map(|&i| others[i]).collect();
            let mut h = g.clone();
            h.remove_arc(x, y);
            for &r in &removed {
                for v in 0..n {
                    h.remove_arc(r, v);
                    h.remove_arc(v, r);
                }
            }
            if !reachability(&h)[x][y] {
                return k;
            }
        }
    }
    others.len()
}

/// Set partitions of `0..n` into blocks of size at most `max_block`.
pub fn partitions(n: usize, max_block: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn go(v: usize, n: usize, max_block: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if v == n {
            out.push(blocks.clone());
            return;
        }
        for i in 0..blocks.len() {
            if blocks[i].len() < max_block {
                blocks[i].push(v);
                go(v + 1, n, max_block, blocks, out);
                blocks[i].pop();
            }
        }
        blocks.push(vec![v]);
        go(v + 1, n, max_block, blocks, out);
        blocks.pop();
    }
    go(0, n, max_block, &mut blocks, &mut out);
    out
}

/// Calls `f` on every SMD with vertex set `0..n` and classes of size at most `alpha_max`: every
/// partition, and for every cross-class pair one of the three orientations.
pub fn for_each_smd(n: usize, alpha_max: usize, mut f: impl FnMut(&Smd)) {
    for classes in partitions(n, alpha_max) {
        let mut class_of = vec![0; n];
        for (i, c) in classes.iter().enumerate() {
            for &v in c {
                class_of[v] = i;
            }
        }
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| class_of[u] != class_of[v]).collect();
        let total = 3usize.pow(pairs.len() as u32);
        for code in 0..total {
            let mut g = Digraph::new(n);
            let mut c = code;
            for &(u, v) in &pairs {
                match c % 3 {
                    0 => g.add_arc(u, v),
                    1 => g.add_arc(v, u),
                    _ => {
                        g.add_arc(u, v);
                        g.add_arc(v, u);
                    }
                }
                c /= 3;
            }
            f(&Smd::from_parts(g, classes.clone()).expect("valid by construction"));
        }
    }
}

/// Two paths whose union is acyclic, in an SMD whose arcs mostly follow a random vertex ranking,
/// together with a set of path vertices from pairwise distinct classes.
pub fn acyclic_pair(seed: u64) -> (Smd, VertexPath, VertexPath, VertexSet) {
    let mut r = rng(seed);
    let n = r.gen_range(2..=14);
    let sizes = class_sizes(&mut r, n, 3);
    let mut class_of = Vec::new();
    for (c, &k) in sizes.iter().enumerate() {
        class_of.extend(std::iter::repeat(c).take(k));
    }
    class_of.shuffle(&mut r);
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(&mut r);
    let mut rank = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let mut g = Digraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if class_of[u] != class_of[v] && rank[u] < rank[v] {
                g.add_arc(u, v);
                if r.gen_bool(0.15) {
                    g.add_arc(v, u);
                }
            }
        }
    }
    let mut classes = vec![Vec::new(); sizes.len()];
    for v in 0..n {
        classes[class_of[v]].push(v);
    }
    let d = Smd::from_parts(g, classes).expect("valid by construction");
    let walk = |r: &mut ChaCha8Rng| {
        let mut p: Vec<Vertex> = Vec::new();
        for &v in &order {
            if p.last().map_or(true, |&l| class_of[l] != class_of[v]) && r.gen_bool(0.5) {
                p.push(v);
            }
        }
        if p.is_empty() {
            p.push(order[r.gen_range(0..n)]);
        }
        VertexPath::new(p).expect("distinct vertices")
    };
    let p = walk(&mut r);
    let q = walk(&mut r);
    let mut union: Vec<Vertex> = p.vertices().iter().chain(q.vertices()).copied().collect();
    union.sort_unstable();
    union.dedup();
    union.shuffle(&mut r);
    let mut used = vec![false; sizes.len()];
    let mut x = VertexSet::new();
    for v in union {
        if !used[class_of[v]] && r.gen_bool(0.6) {
            used[class_of[v]] = true;
            x.insert(v);
        }
    }
    (d, p, q, x)
}
