//! Exhaustive reference solvers. Every answer is re-validated before it is returned.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::satred::{Assignment, CnfFormula, RcpInstance};
use crate::smd::{Digraph, Smd, Vertex, VertexPath};

pub use crate::connectivity::max_disjoint_paths;

/// Size caps for the exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Vertex cap for the constrained path searches (`rcp`, `qhp`).
    pub rcp: usize,
    /// Vertex cap for the Hamiltonian path subset DP.
    pub hp: usize,
    /// Variable cap for assignment enumeration.
    pub sat: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { rcp: 14, hp: 20, sat: 24 }
    }
}

/// Hard ceiling imposed by the 128-bit vertex masks of the path search.
pub const MASK_CAPACITY: usize = 128;

impl Limits {
    pub fn with_all(n: usize) -> Self {
        Limits { rcp: n.min(MASK_CAPACITY), hp: n.min(24), sat: n.min(30) }
    }

    fn check(size: usize, limit: usize) -> Result<()> {
        if size > limit {
            Err(Error::TooLarge { size, limit })
        } else {
            Ok(())
        }
    }

    /// Some `(s,t)`-path whose vertex count in every class lies in `[a,b]`.
    pub fn rcp(&self, inst: &RcpInstance) -> Result<Option<VertexPath>> {
        let d = &inst.d;
        Self::check(d.order(), self.rcp.min(MASK_CAPACITY))?;
        let k = d.chi();
        let found = constrained_path(d.graph(), d.class_map(), inst.s, inst.t, &vec![inst.a; k], &vec![inst.b; k]);
        match found {
            None => Ok(None),
            Some(p) => {
                let p = VertexPath::new(p)?;
                inst.check_path(&p).map_err(|e| Error::NotAWitness(format!("oracle self-check: {e}")))?;
                Ok(Some(p))
            }
        }
    }

    /// Some `(x,y)`-path meeting every color class.
    pub fn qhp(&self, d: &Smd, x: Vertex, y: Vertex) -> Result<Option<VertexPath>> {
        d.check_vertex(x)?;
        d.check_vertex(y)?;
        if x == y {
            return Err(Error::PreconditionFailed("x and y must differ".into()));
        }
        Self::check(d.order(), self.rcp.min(MASK_CAPACITY))?;
        let lo = vec![1; d.chi()];
        let hi: Vec<usize> = d.classes().iter().map(Vec::len).collect();
        match constrained_path(d.graph(), d.class_map(), x, y, &lo, &hi) {
            None => Ok(None),
            Some(p) => {
                let p = VertexPath::new(p)?;
                if !d.is_qhp(&p, x, y) {
                    return Err(Error::NotAWitness("oracle self-check failed".into()));
                }
                Ok(Some(p))
            }
        }
    }

    /// Some quasi-Hamiltonian path between `x` and `y` in either direction.
    pub fn qhp_either(&self, d: &Smd, x: Vertex, y: Vertex) -> Result<Option<VertexPath>> {
        match self.qhp(d, x, y)? {
            Some(p) => Ok(Some(p)),
            None => self.qhp(d, y, x),
        }
    }

    /// Lexicographically least Hamiltonian path.
    pub fn hp(&self, d: &Smd) -> Result<Option<VertexPath>> {
        self.hp_graph(d.graph(), None)
    }

    /// Lexicographically least Hamiltonian path, optionally with both endpoints prescribed.
    pub fn hp_graph(&self, g: &Digraph, ends: Option<(Vertex, Vertex)>) -> Result<Option<VertexPath>> {
        let n = g.order();
        Self::check(n, self.hp.min(30))?;
        if n == 0 {
            return Ok(None);
        }
        if let Some((s, t)) = ends {
            for v in [s, t] {
                if v >= n {
                    return Err(Error::UnknownVertex(v));
                }
            }
        }
        let found = hamiltonian_dp(g, ends);
        match found {
            None => Ok(None),
            Some(p) => {
                let p = VertexPath::new(p)?;
                if p.len() != n || !p.is_path_in(g) {
                    return Err(Error::NotAWitness("oracle self-check failed".into()));
                }
                Ok(Some(p))
            }
        }
    }

    /// Least assignment (variables read as bits, `X_1` lowest) that satisfies between `a` and
    /// `b` literals of every clause.
    pub fn ab_sat(&self, phi: &CnfFormula, a: usize, b: usize) -> Result<Option<Assignment>> {
        if a > b {
            return Err(Error::BadBounds { a, b, reason: "a exceeds b".into() });
        }
        Self::check(phi.var_count, self.sat.min(40))?;
        for bits in 0u64..(1u64 << phi.var_count) {
            let sigma = Assignment::from_bits(phi.var_count, bits);
            if phi.is_ab_satisfied(&sigma, a, b) {
                return Ok(Some(sigma));
            }
        }
        Ok(None)
    }
}

pub fn rcp_oracle(inst: &RcpInstance) -> Result<Option<VertexPath>> {
    Limits::default().rcp(inst)
}

pub fn qhp_oracle(d: &Smd, x: Vertex, y: Vertex) -> Result<Option<VertexPath>> {
    Limits::default().qhp(d, x, y)
}

pub fn hp_oracle(d: &Smd) -> Result<Option<VertexPath>> {
    Limits::default().hp(d)
}

pub fn ab_sat_oracle(phi: &CnfFormula, a: usize, b: usize) -> Result<Option<Assignment>> {
    Limits::default().ab_sat(phi, a, b)
}

/// Lexicographically least simple `(s,t)`-path whose per-class vertex counts lie between `lo`
/// and `hi`. Backtracking with a failure memo on (visited set, current vertex) and pruning by
/// reachability of `t` and of enough vertices in each under-filled class. At most 128 vertices.
pub fn constrained_path(
    g: &Digraph,
    class_of: &[usize],
    s: Vertex,
    t: Vertex,
    lo: &[usize],
    hi: &[usize],
) -> Option<Vec<Vertex>> {
    let n = g.order();
    assert!(n <= MASK_CAPACITY, "constrained_path supports at most {MASK_CAPACITY} vertices");
    if s == t {
        return None;
    }
    let k = lo.len();
    let mut class_mask = vec![0u128; k];
    for v in 0..n {
        class_mask[class_of[v]] |= 1 << v;
    }
    let out_mask: Vec<u128> = (0..n).map(|u| g.out_neighbors(u).fold(0u128, |m, v| m | (1 << v))).collect();
    let mut search = Search {
        out_mask,
        class_of,
        class_mask,
        lo,
        hi,
        t,
        counts: vec![0; k],
        visited: 0,
        path: Vec::new(),
        memo: HashSet::new(),
    };
    if hi[class_of[s]] == 0 {
        return None;
    }
    search.push(s);
    if search.dfs(s) {
        Some(search.path)
    } else {
        None
    }
}

struct Search<'a> {
    out_mask: Vec<u128>,
    class_of: &'a [usize],
    class_mask: Vec<u128>,
    lo: &'a [usize],
    hi: &'a [usize],
    t: Vertex,
    counts: Vec<usize>,
    visited: u128,
    path: Vec<Vertex>,
    memo: HashSet<(u128, Vertex)>,
}

impl Search<'_> {
    fn push(&mut self, v: Vertex) {
        self.visited |= 1 << v;
        self.counts[self.class_of[v]] += 1;
        self.path.push(v);
    }

    fn pop(&mut self) {
        let v = self.path.pop().expect("pop on empty path");
        self.visited &= !(1 << v);
        self.counts[self.class_of[v]] -= 1;
    }

    /// Vertices reachable from `cur` through unvisited vertices, never passing through `t`.
    fn reach(&self, cur: Vertex) -> u128 {
        let tbit = 1u128 << self.t;
        let mut seen = 0u128;
        let mut frontier = self.out_mask[cur] & !self.visited;
        while frontier != 0 {
            seen |= frontier;
            let mut next = 0u128;
            let mut f = frontier & !tbit;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.out_mask[v];
            }
            frontier = next & !self.visited & !seen;
        }
        seen
    }

    fn feasible(&self, cur: Vertex) -> bool {
        let r = self.reach(cur);
        if r & (1 << self.t) == 0 {
            return false;
        }
        self.lo.iter().enumerate().all(|(c, &need)| {
            self.counts[c] >= need || self.counts[c] + (r & self.class_mask[c]).count_ones() as usize >= need
        })
    }

    fn dfs(&mut self, cur: Vertex) -> bool {
        if cur == self.t {
            return self.counts.iter().zip(self.lo).all(|(c, l)| c >= l);
        }
        if self.memo.contains(&(self.visited, cur)) {
            return false;
        }
        if self.feasible(cur) {
            let mut cand = self.out_mask[cur] & !self.visited;
            while cand != 0 {
                let w = cand.trailing_zeros() as usize;
                cand &= cand - 1;
                let c = self.class_of[w];
                if self.counts[c] + 1 > self.hi[c] {
                    continue;
                }
                self.push(w);
                if self.dfs(w) {
                    return true;
                }
                self.pop();
            }
        }
        self.memo.insert((self.visited, cur));
        false
    }
}

/// Subset DP: `table[mask]` holds the vertices that start a path covering exactly `mask`
/// (ending at the prescribed end, if any). Reconstruction picks the smallest feasible vertex at
/// every step, which yields the lexicographically least path.
fn hamiltonian_dp(g: &Digraph, ends: Option<(Vertex, Vertex)>) -> Option<Vec<Vertex>> {
    let n = g.order();
    let out: Vec<u32> = (0..n).map(|u| g.out_neighbors(u).fold(0u32, |m, v| m | (1 << v))).collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut table = vec![0u32; 1usize << n];
    for v in 0..n {
        if ends.map_or(true, |(_, t)| t == v) {
            table[1 << v] = 1 << v;
        }
    }
    for mask in 1..=full {
        if mask.count_ones() < 2 {
            continue;
        }
        let mut starts = 0u32;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros();
            m &= m - 1;
            let rest = mask & !(1 << v);
            if table[rest as usize] & out[v as usize] != 0 {
                starts |= 1 << v;
            }
        }
        table[mask as usize] = starts;
    }
    let mut allowed = table[full as usize];
    if let Some((s, _)) = ends {
        allowed &= 1 << s;
    }
    if allowed == 0 {
        return None;
    }
    let mut cur = allowed.trailing_zeros() as usize;
    let mut path = vec![cur];
    let mut mask = full & !(1 << cur);
    while mask != 0 {
        let next = table[mask as usize] & out[cur];
        cur = next.trailing_zeros() as usize;
        path.push(cur);
        mask &= !(1 << cur);
    }
    Some(path)
}
