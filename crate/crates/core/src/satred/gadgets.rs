//! Variable gadgets: each one offers two mutually exclusive routes between its terminals.

use crate::smd::{Digraph, Vertex};

/// Two-route gadget on `s, y_0..y_{n1}, z_1..z_{n2+1}, t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub graph: Digraph,
    pub s: Vertex,
    pub t: Vertex,
    /// `y_0, ..., y_{n1}`.
    pub y: Vec<Vertex>,
    /// `z_1, ..., z_{n2+1}`.
    pub z: Vec<Vertex>,
}

/// Builds the two-route gadget. The routes `s y_0 .. y_{n1} t` and `s z_1 .. z_{n2+1} t` are
/// paths on which every vertex dominates all earlier vertices except its predecessor, and every
/// `y` dominates every `z`. Vertex ids: `s = 0`, then the `y`s, then the `z`s, then `t`.
pub fn b_gadget(n1: usize, n2: usize) -> Gadget {
    let s = 0;
    let y: Vec<Vertex> = (1..=n1 + 1).collect();
    let z: Vec<Vertex> = (n1 + 2..=n1 + n2 + 2).collect();
    let t = n1 + n2 + 3;
    let mut graph = Digraph::new(n1 + n2 + 4);
    for route in [&y, &z] {
        let seq: Vec<Vertex> = std::iter::once(s).chain(route.iter().copied()).chain(std::iter::once(t)).collect();
        for k in 1..seq.len() {
            graph.add_arc(seq[k - 1], seq[k]);
            for &earlier in &seq[..k - 1] {
                graph.add_arc(seq[k], earlier);
            }
        }
    }
    for &u in &y {
        for &v in &z {
            graph.add_arc(u, v);
        }
    }
    Gadget { graph, s, t, y, z }
}

/// Six-vertex tournament template `s, a, b, t, T, F` with `T` and `F` blown up into cliques.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WGadget {
    pub graph: Digraph,
    pub s: Vertex,
    pub a: Vertex,
    pub b: Vertex,
    pub t: Vertex,
    /// The clique replacing `T`.
    pub y: Vec<Vertex>,
    /// The clique replacing `F`.
    pub z: Vec<Vertex>,
}

/// Template arcs over `s=0, a=1, b=2, t=3, T=4, F=5`.
pub const W_TEMPLATE: [(usize, usize); 15] = [
    (0, 1),
    (0, 2),
    (1, 2),
    (1, 3),
    (2, 3),
    (3, 0),
    (2, 5),
    (3, 5),
    (5, 0),
    (5, 1),
    (1, 4),
    (5, 4),
    (3, 4),
    (4, 0),
    (4, 2),
];

/// Builds the template with `T` replaced by a complete digraph on `n1` vertices and `F` by one on
/// `n2` vertices. Vertex ids: `s, a, b, t = 0..4`, then the `T` clique, then the `F` clique.
pub fn w_gadget(n1: usize, n2: usize) -> WGadget {
    let y: Vec<Vertex> = (4..4 + n1).collect();
    let z: Vec<Vertex> = (4 + n1..4 + n1 + n2).collect();
    let blow = |v: usize| -> Vec<Vertex> {
        match v {
            4 => y.clone(),
            5 => z.clone(),
            _ => vec![v],
        }
    };
    let mut graph = Digraph::new(4 + n1 + n2);
    for &(u, v) in &W_TEMPLATE {
        for &p in &blow(u) {
            for &q in &blow(v) {
                graph.add_arc(p, q);
            }
        }
    }
    for clique in [&y, &z] {
        for &p in clique.iter() {
            for &q in clique.iter() {
                if p != q {
                    graph.add_arc(p, q);
                }
            }
        }
    }
    WGadget { graph, s: 0, a: 1, b: 2, t: 3, y, z }
}
