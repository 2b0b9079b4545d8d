//! Digraphs with dense adjacency and the semicomplete multipartite digraph (SMD) model.
//!
//! Vertices are `0..n` inside the library. The text formats in [`crate::cli`] are 1-based.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type VertexSet = BTreeSet<Vertex>;

/// Simple digraph stored as a dense adjacency matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    adj: Vec<bool>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph { n, adj: vec![false; n * n] }
    }

    /// Builds a digraph from an arc list. Duplicate arcs are ignored.
    pub fn from_arcs(n: usize, arcs: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Digraph::new(n);
        for &(u, v) in arcs {
            if u >= n {
                return Err(Error::UnknownVertex(u));
            }
            if v >= n {
                return Err(Error::UnknownVertex(v));
            }
            if u == v {
                return Err(Error::NotAnSmd(format!("self-loop at vertex {u}")));
            }
            g.add_arc(u, v);
        }
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u * self.n + v]
    }

    #[inline]
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    pub fn add_arc(&mut self, u: Vertex, v: Vertex) {
        debug_assert!(u != v);
        self.adj[u * self.n + v] = true;
    }

    pub fn remove_arc(&mut self, u: Vertex, v: Vertex) {
        self.adj[u * self.n + v] = false;
    }

    /// Appends an isolated vertex and returns its id.
    pub fn add_vertex(&mut self) -> Vertex {
        let n = self.n + 1;
        let mut adj = vec![false; n * n];
        for u in 0..self.n {
            adj[u * n..u * n + self.n].copy_from_slice(&self.adj[u * self.n..(u + 1) * self.n]);
        }
        self.n = n;
        self.adj = adj;
        n - 1
    }

    pub fn out_neighbors(&self, u: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let row = &self.adj[u * self.n..(u + 1) * self.n];
        row.iter().enumerate().filter(|(_, &a)| a).map(|(v, _)| v)
    }

    pub fn in_neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n).filter(move |&u| self.has_arc(u, v))
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            out.extend(self.out_neighbors(u).map(|v| (u, v)));
        }
        out
    }

    pub fn arc_count(&self) -> usize {
        self.adj.iter().filter(|&&a| a).count()
    }

    pub fn reversed(&self) -> Digraph {
        let mut g = Digraph::new(self.n);
        for u in 0..self.n {
            for v in self.out_neighbors(u) {
                g.add_arc(v, u);
            }
        }
        g
    }

    /// Pairs `{u,v}` with both arcs present, reported as `(u,v)` with `u < v`.
    pub fn two_cycles(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_arc(u, v) && self.has_arc(v, u) {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph").field("n", &self.n).field("arcs", &self.arcs()).finish()
    }
}

/// Nonempty sequence of distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexPath(Vec<Vertex>);

impl VertexPath {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::NotAPath("empty vertex sequence".into()));
        }
        let mut seen = BTreeSet::new();
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(Error::NotAPath(format!("vertex {v} repeats")));
            }
        }
        Ok(VertexPath(vertices))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn first(&self) -> Vertex {
        self.0[0]
    }

    pub fn last(&self) -> Vertex {
        self.0[self.0.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }

    /// Checks that every consecutive pair is an arc of `g`.
    pub fn check_in(&self, g: &Digraph) -> Result<()> {
        for &v in &self.0 {
            if v >= g.order() {
                return Err(Error::UnknownVertex(v));
            }
        }
        for (u, v) in self.arcs() {
            if !g.has_arc(u, v) {
                return Err(Error::NotAPath(format!("missing arc {u}->{v}")));
            }
        }
        Ok(())
    }

    pub fn is_path_in(&self, g: &Digraph) -> bool {
        self.check_in(g).is_ok()
    }
}

impl fmt::Display for VertexPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A semicomplete multipartite digraph: vertices in different color classes are joined by
/// at least one arc, vertices in the same class by none.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Smd {
    graph: Digraph,
    class_of: Vec<usize>,
    classes: Vec<Vec<Vertex>>,
}

/// An induced sub-SMD together with the original id of every relabeled vertex.
#[derive(Clone, Debug)]
pub struct Induced {
    pub smd: Smd,
    pub original: Vec<Vertex>,
}

impl Induced {
    pub fn lift_path(&self, p: &VertexPath) -> VertexPath {
        VertexPath(p.vertices().iter().map(|&v| self.original[v]).collect())
    }

    pub fn local(&self, v: Vertex) -> Option<Vertex> {
        self.original.binary_search(&v).ok()
    }
}

impl Smd {
    /// Infers the color classes from non-adjacency and validates the result.
    pub fn build(n: usize, arcs: &[(Vertex, Vertex)]) -> Result<Self> {
        Self::from_digraph(Digraph::from_arcs(n, arcs)?)
    }

    pub fn from_digraph(graph: Digraph) -> Result<Self> {
        let n = graph.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<Vertex>> = Vec::new();
        for v in 0..n {
            if class_of[v] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = vec![v];
            class_of[v] = id;
            for w in v + 1..n {
                if !graph.adjacent(v, w) {
                    if class_of[w] != usize::MAX {
                        return Err(Error::NotAnSmd(format!(
                            "non-adjacency is not transitive: {v} and {w}"
                        )));
                    }
                    class_of[w] = id;
                    members.push(w);
                }
            }
            classes.push(members);
        }
        let smd = Smd { graph, class_of, classes };
        smd.validate()?;
        Ok(smd)
    }

    /// Builds an SMD from a digraph and an explicit partition; arcs inside a class are rejected.
    pub fn from_parts(graph: Digraph, classes: Vec<Vec<Vertex>>) -> Result<Self> {
        let n = graph.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<Vertex>> = classes.into_iter().filter(|c| !c.is_empty()).collect();
        for c in classes.iter_mut() {
            c.sort_unstable();
        }
        classes.sort_by_key(|c| c[0]);
        for (i, c) in classes.iter().enumerate() {
            for &v in c {
                if v >= n {
                    return Err(Error::UnknownVertex(v));
                }
                if class_of[v] != usize::MAX {
                    return Err(Error::NotAnSmd(format!("vertex {v} is in two classes")));
                }
                class_of[v] = i;
            }
        }
        let smd = Smd { graph, class_of, classes };
        smd.validate()?;
        Ok(smd)
    }

    /// Checks the partition and adjacency invariants.
    pub fn validate(&self) -> Result<()> {
        let n = self.graph.order();
        if self.class_of.len() != n {
            return Err(Error::NotAnSmd("class map has wrong length".into()));
        }
        let mut seen = vec![false; n];
        for (i, c) in self.classes.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::NotAnSmd(format!("class {i} is empty")));
            }
            for &v in c {
                if v >= n || seen[v] || self.class_of[v] != i {
                    return Err(Error::NotAnSmd(format!("class {i} is not a valid block")));
                }
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::NotAnSmd(format!("vertex {v} has no class")));
        }
        for u in 0..n {
            if self.graph.has_arc(u, u) {
                return Err(Error::NotAnSmd(format!("self-loop at {u}")));
            }
            for v in u + 1..n {
                let same = self.class_of[u] == self.class_of[v];
                let adj = self.graph.adjacent(u, v);
                if same && adj {
                    return Err(Error::NotAnSmd(format!("arc inside a class between {u} and {v}")));
                }
                if !same && !adj {
                    return Err(Error::NotAnSmd(format!("{u} and {v} are in different classes but not adjacent")));
                }
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        self.graph.has_arc(u, v)
    }

    pub fn classes(&self) -> &[Vec<Vertex>] {
        &self.classes
    }

    pub fn class_of(&self, v: Vertex) -> usize {
        self.class_of[v]
    }

    pub fn class_map(&self) -> &[usize] {
        &self.class_of
    }

    pub fn same_class(&self, u: Vertex, v: Vertex) -> bool {
        self.class_of[u] == self.class_of[v]
    }

    /// Independence number: the largest class size.
    pub fn alpha(&self) -> usize {
        self.classes.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of nonempty color classes.
    pub fn chi(&self) -> usize {
        self.classes.len()
    }

    /// Number of classes that still have a vertex outside `removed`.
    pub fn chi_without(&self, removed: &[Vertex]) -> usize {
        self.classes
            .iter()
            .filter(|c| c.iter().any(|v| !removed.contains(v)))
            .count()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.order() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// Union of all classes meeting `u`.
    pub fn hull(&self, u: &VertexSet) -> Result<VertexSet> {
        let mut out = VertexSet::new();
        for &v in u {
            self.check_vertex(v)?;
            out.extend(self.classes[self.class_of[v]].iter().copied());
        }
        Ok(out)
    }

    /// Induced subgraph on `u`, relabeled to `0..|u|` in increasing original order.
    pub fn induced(&self, u: &VertexSet) -> Result<Induced> {
        if u.is_empty() {
            return Err(Error::EmptySet);
        }
        for &v in u {
            self.check_vertex(v)?;
        }
        let original: Vec<Vertex> = u.iter().copied().collect();
        let k = original.len();
        let mut graph = Digraph::new(k);
        for (i, &a) in original.iter().enumerate() {
            for (j, &b) in original.iter().enumerate() {
                if i != j && self.graph.has_arc(a, b) {
                    graph.add_arc(i, j);
                }
            }
        }
        let mut classes: Vec<Vec<Vertex>> = Vec::new();
        let mut slot = vec![usize::MAX; self.classes.len()];
        let mut class_of = vec![0; k];
        for (i, &a) in original.iter().enumerate() {
            let c = self.class_of[a];
            if slot[c] == usize::MAX {
                slot[c] = classes.len();
                classes.push(Vec::new());
            }
            classes[slot[c]].push(i);
            class_of[i] = slot[c];
        }
        Ok(Induced { smd: Smd { graph, class_of, classes }, original })
    }

    /// Induced subgraph on all vertices except `removed`.
    pub fn without(&self, removed: &[Vertex]) -> Result<Induced> {
        let keep: VertexSet = (0..self.order()).filter(|v| !removed.contains(v)).collect();
        self.induced(&keep)
    }

    /// Pads every class to exactly `alpha` vertices. Each new vertex dominates every vertex
    /// outside its class present at the time it is added, so it is unreachable from the rest.
    pub fn pad_to_alpha(&self, alpha: usize) -> Result<(Smd, VertexSet)> {
        let max = self.alpha();
        if alpha < max {
            return Err(Error::AlphaTooSmall { alpha, max });
        }
        let mut graph = self.graph.clone();
        let mut class_of = self.class_of.clone();
        let mut classes = self.classes.clone();
        let mut padded = VertexSet::new();
        for c in 0..classes.len() {
            while classes[c].len() < alpha {
                let v = graph.add_vertex();
                for u in 0..v {
                    if class_of[u] != c {
                        graph.add_arc(v, u);
                    }
                }
                class_of.push(c);
                classes[c].push(v);
                padded.insert(v);
            }
        }
        Ok((Smd { graph, class_of, classes }, padded))
    }

    pub fn reverse(&self) -> Smd {
        Smd { graph: self.graph.reversed(), class_of: self.class_of.clone(), classes: self.classes.clone() }
    }

    /// Number of path vertices in each class.
    pub fn class_counts(&self, vertices: &[Vertex]) -> Vec<usize> {
        let mut counts = vec![0; self.classes.len()];
        for &v in vertices {
            counts[self.class_of[v]] += 1;
        }
        counts
    }

    pub fn covers_all_classes(&self, vertices: &[Vertex]) -> bool {
        self.class_counts(vertices).iter().all(|&c| c > 0)
    }

    /// True when `p` is an `(x,y)`-path of this SMD meeting every class.
    pub fn is_qhp(&self, p: &VertexPath, x: Vertex, y: Vertex) -> bool {
        p.first() == x && p.last() == y && p.is_path_in(&self.graph) && self.covers_all_classes(p.vertices())
    }
}
