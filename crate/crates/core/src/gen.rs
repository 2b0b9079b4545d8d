//! Seeded instance generators. All randomness comes from ChaCha8 seeded with a 64-bit value, so
//! instances are reproducible across runs and platforms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::connectivity::{is_k_strong, is_strong, is_unilateral};
use crate::error::{Error, Result};
use crate::satred::CnfFormula;
use crate::smd::{Digraph, Smd, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Connectivity {
    Any,
    Strong,
    TwoStrong,
    Unilateral,
}

impl Connectivity {
    fn holds(self, d: &Smd) -> bool {
        match self {
            Connectivity::Any => true,
            Connectivity::Strong => is_strong(d),
            Connectivity::TwoStrong => is_k_strong(d, 2),
            Connectivity::Unilateral => is_unilateral(d),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub seed: u64,
    pub class_sizes: Vec<usize>,
    pub two_cycle_prob: f64,
    pub connectivity: Connectivity,
    pub max_rejects: usize,
}

impl GenSpec {
    pub fn new(seed: u64, class_sizes: Vec<usize>) -> Self {
        GenSpec { seed, class_sizes, two_cycle_prob: 0.0, connectivity: Connectivity::Any, max_rejects: 1000 }
    }

    pub fn two_cycle_prob(mut self, p: f64) -> Self {
        self.two_cycle_prob = p;
        self
    }

    pub fn connectivity(mut self, c: Connectivity) -> Self {
        self.connectivity = c;
        self
    }

    pub fn max_rejects(mut self, k: usize) -> Self {
        self.max_rejects = k;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.class_sizes.is_empty() || self.class_sizes.contains(&0) {
            return Err(Error::PreconditionFailed("class sizes must be nonempty and positive".into()));
        }
        if !(0.0..=1.0).contains(&self.two_cycle_prob) {
            return Err(Error::PreconditionFailed("2-cycle probability must lie in [0,1]".into()));
        }
        Ok(())
    }
}

/// Random SMD with the given class sizes. Vertex ids are assigned to classes in shuffled order.
/// Every cross-class pair gets both arcs with probability `two_cycle_prob` and otherwise one arc
/// in a uniformly random direction. Draws are repeated until the connectivity target holds.
pub fn gen_smd(spec: &GenSpec) -> Result<Smd> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n: usize = spec.class_sizes.iter().sum();
    let mut ids: Vec<Vertex> = (0..n).collect();
    ids.shuffle(&mut rng);
    let mut classes: Vec<Vec<Vertex>> = Vec::with_capacity(spec.class_sizes.len());
    let mut class_of = vec![0; n];
    let mut at = 0;
    for (c, &size) in spec.class_sizes.iter().enumerate() {
        let mut members = ids[at..at + size].to_vec();
        members.sort_unstable();
        for &v in &members {
            class_of[v] = c;
        }
        classes.push(members);
        at += size;
    }
    for _ in 0..=spec.max_rejects {
        let mut g = Digraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if class_of[u] == class_of[v] {
                    continue;
                }
                if rng.gen_bool(spec.two_cycle_prob) {
                    g.add_arc(u, v);
                    g.add_arc(v, u);
                } else if rng.gen_bool(0.5) {
                    g.add_arc(u, v);
                } else {
                    g.add_arc(v, u);
                }
            }
        }
        let d = Smd::from_parts(g, classes.clone())?;
        if spec.connectivity.holds(&d) {
            return Ok(d);
        }
    }
    Err(Error::RejectionExhausted(spec.max_rejects))
}

/// Random 3-CNF: every literal is drawn uniformly from the `2 * vars` signed variables, with
/// replacement, so clauses may repeat literals.
pub fn gen_cnf(seed: u64, vars: usize, clauses: usize) -> Result<CnfFormula> {
    if vars == 0 {
        return Err(Error::PreconditionFailed("at least one variable is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(clauses);
    for _ in 0..clauses {
        let clause: Vec<i32> = (0..3)
            .map(|_| {
                let v = rng.gen_range(1..=vars) as i32;
                if rng.gen_bool(0.5) {
                    v
                } else {
                    -v
                }
            })
            .collect();
        out.push(clause);
    }
    CnfFormula::new(vars, out)
}
