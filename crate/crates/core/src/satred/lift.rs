//! Answer-preserving transformations that raise the class size by one.

use serde::{Deserialize, Serialize};

use super::RcpInstance;
use crate::error::{Error, Result};
use crate::smd::{Smd, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LiftMode {
    /// `(a,b,α) -> (a,b,α+1)` by unreachable padding.
    Pad,
    /// `(a,b,α) -> (a+1,b+1,α+1)` by a forced prefix through one new vertex per class.
    Prefix,
    /// `(0,α-1,α) -> (0,α,α+1)` by the forced prefix.
    Zero,
    /// `(1,α,α) -> (1,α+1,α+1)` by unreachable padding.
    One,
}

impl LiftMode {
    pub fn name(self) -> &'static str {
        match self {
            LiftMode::Pad => "pad",
            LiftMode::Prefix => "prefix",
            LiftMode::Zero => "zero",
            LiftMode::One => "one",
        }
    }
}

/// Adds one vertex per class, forming the chain `u_1 -> ... -> u_c -> s` that every path from
/// `u_1` must follow. Non-consecutive chain vertices point backwards and every other vertex
/// dominates the chain, except for the final arc into `s`. Returns the new SMD and `u_1`.
fn forced_prefix(d: &Smd, s: Vertex) -> Result<(Smd, Vertex)> {
    let c = d.chi();
    if c < 2 {
        return Err(Error::TooFewClasses(c));
    }
    let n = d.order();
    let mut order: Vec<usize> = (0..c).collect();
    let sc = d.class_of(s);
    order.retain(|&k| k != sc);
    order.insert(0, sc);
    let mut graph = d.graph().clone();
    let u: Vec<Vertex> = (0..c).map(|_| graph.add_vertex()).collect();
    for i in 0..c {
        if i + 1 < c {
            graph.add_arc(u[i], u[i + 1]);
        }
        for j in i + 2..c {
            graph.add_arc(u[j], u[i]);
        }
        for v in 0..n {
            if d.class_of(v) == order[i] {
                continue;
            }
            if i == c - 1 && v == s {
                graph.add_arc(u[i], v);
            } else {
                graph.add_arc(v, u[i]);
            }
        }
    }
    let mut classes: Vec<Vec<Vertex>> = d.classes().to_vec();
    for (i, &k) in order.iter().enumerate() {
        classes[k].push(u[i]);
    }
    Ok((Smd::from_parts(graph, classes)?, u[0]))
}

/// Transforms `inst` according to `mode`; the new instance has a valid path exactly when the
/// old one does. Original vertices keep their ids.
pub fn lift(inst: &RcpInstance, mode: LiftMode) -> Result<RcpInstance> {
    let (a, b, alpha) = (inst.a, inst.b, inst.alpha);
    let mismatch = |required: String| Error::ModeBoundsMismatch { mode: mode.name(), required, a, b, alpha };
    match mode {
        LiftMode::Pad => {
            let (d, _) = inst.d.pad_to_alpha(alpha + 1)?;
            RcpInstance::new(d, inst.s, inst.t, a, b)
        }
        LiftMode::One => {
            if (a, b) != (1, alpha) {
                return Err(mismatch(format!("(1,{alpha})")));
            }
            let (d, _) = inst.d.pad_to_alpha(alpha + 1)?;
            RcpInstance::new(d, inst.s, inst.t, 1, alpha + 1)
        }
        LiftMode::Prefix => {
            let (d, s) = forced_prefix(&inst.d, inst.s)?;
            RcpInstance::new(d, s, inst.t, a + 1, b + 1)
        }
        LiftMode::Zero => {
            if alpha == 0 || (a, b) != (0, alpha - 1) {
                return Err(mismatch(format!("(0,{})", alpha.saturating_sub(1))));
            }
            let (d, s) = forced_prefix(&inst.d, inst.s)?;
            RcpInstance::new(d, s, inst.t, 0, alpha)
        }
    }
}
