//! Acceptance run: every criterion prints one PASS/FAIL line. Pass criterion numbers as
//! arguments to run a subset, e.g. `cargo test --test acceptance -- 3 7`.

mod common;

use std::fmt::Display;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::rule_rows;
use common::{ab_sat_exists, bounded_path_exists, qhp_exists, random_smd};
use rand::seq::SliceRandom;
use rand::Rng;
use smdpath::connectivity::{is_strong, linear_decomposition, max_disjoint_paths, two_separators};
use smdpath::gen::{gen_cnf, gen_smd, Connectivity, GenSpec};
use smdpath::oracle::{ab_sat_oracle, constrained_path, Limits};
use smdpath::pathops::{augment_2sep, quasi_merge_counted, recover_qhp};
use smdpath::qhp::{
    check_separated_triple, check_trivial_separators, hamiltonian_alpha2_exists, hamiltonian_alpha2_exists_counted,
    hamiltonian_alpha2_path, qhp_non_strong, qhp_not_2strong, strip_2cycles_smd, weak_qhp_exists,
};
use smdpath::satred::{lift, path_to_assignment, reduce_ab3, CnfFormula, LiftMode, RcpInstance, SUPPORTED_BOUNDS};
use smdpath::{Digraph, Error, Smd, VertexPath};

type Outcome = Result<String, String>;

fn ok<T>(r: smdpath::Result<T>, what: impl Display) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const CRITERIA: [(&str, fn() -> Outcome); 12] = [
    ("reduction preserves (a,b)-satisfiability", reduction_matches_sat),
    ("lifts preserve path existence", lifts_preserve_answers),
    ("preprocessing rules match their tables", rule_tables),
    ("non-strong QHP agrees with exhaustive search", non_strong_qhp),
    ("QHP when D - {x,y} is not strong", not_two_strong_qhp),
    ("weak QHP decision is exact", weak_qhp_exact),
    ("sufficient conditions imply a QHP", sufficient_conditions),
    ("two of any three vertices are joined by a QHP", two_of_three),
    ("separator augmentation preserves QHP existence", separator_augmentation),
    ("Hamiltonian paths for independence number two", hamiltonian_alpha_two),
    ("2-cycle removal keeps unilateral connectivity", strip_two_cycles),
    ("quasi-merge is valid and linear", quasi_merge_linear),
];

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        return;
    }
    let picked: Vec<usize> = args.iter().filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, run)) in CRITERIA.iter().enumerate() {
        let num = i + 1;
        if !picked.is_empty() && !picked.contains(&num) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {num:2} {name} ({detail}) [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {num:2} {name}: {why} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

/// Clauses over three distinct variables, large enough to contain unsatisfiable instances.
fn distinct_formula(seed: u64) -> Result<CnfFormula, String> {
    let mut r = common::rng(seed);
    let vars = r.gen_range(3..=5);
    let vs: Vec<i32> = (1..=vars as i32).collect();
    let mut clauses = Vec::new();
    for _ in 0..r.gen_range(2..=6) {
        let picked: Vec<i32> = vs.choose_multiple(&mut r, 3).copied().collect();
        clauses.push(picked.into_iter().map(|v| if r.gen_bool(0.5) { v } else { -v }).collect());
    }
    ok(CnfFormula::new(vars, clauses), "formula")
}

fn reduction_case(phi: &CnfFormula, a: usize, b: usize) -> Result<bool, String> {
    let sat = ok(ab_sat_oracle(phi, a, b), "sat oracle")?.is_some();
    ensure(sat == ab_sat_exists(phi, a, b), || format!("sat oracle disagrees on {phi:?} ({a},{b})"))?;
    let red = ok(reduce_ab3(phi, a, b), "reduce")?;
    let inst = red.instance();
    ensure(inst.alpha == 3 && (inst.a, inst.b) == (a, b), || format!("wrong instance shape for ({a},{b})"))?;
    let path = ok(Limits::with_all(128).rcp(inst), "rcp oracle")?;
    ensure(path.is_some() == sat, || {
        format!("({a},{b}) {:?}: satisfiable={sat} but path found={}", phi.clauses, path.is_some())
    })?;
    if let (Some(p), Some(cert)) = (&path, red.certificate()) {
        let sigma = ok(path_to_assignment(inst, cert, p), "decode")?;
        let original = cert.to_original(&sigma);
        ensure(phi.is_ab_satisfied(&original, a, b), || format!("({a},{b}) witness decodes to a bad assignment for {phi:?}"))?;
    }
    Ok(sat)
}

fn reduction_matches_sat() -> Outcome {
    let (mut yes, mut total) = (0, 0);
    for &(a, b) in SUPPORTED_BOUNDS.iter() {
        for i in 0..100u64 {
            let seed = ((a * 10 + b) as u64) << 16 | i;
            let mut r = common::rng(seed);
            let (vars, clauses) = (r.gen_range(1..=3), r.gen_range(0..=3));
            let phi = ok(gen_cnf(seed, vars, clauses), "gen_cnf")?;
            yes += usize::from(reduction_case(&phi, a, b)?);
            total += 1;
        }
        for i in 0..40u64 {
            let phi = distinct_formula(((a * 10 + b) as u64) << 20 | i)?;
            yes += usize::from(reduction_case(&phi, a, b)?);
            total += 1;
        }
    }
    Ok(format!("{total} formulas, {yes} satisfiable"))
}

fn lift_case(mode: LiftMode, seed: u64) -> Result<RcpInstance, String> {
    let mut r = common::rng(seed);
    let alpha = match mode {
        LiftMode::Zero => r.gen_range(2..=3),
        _ => r.gen_range(1..=3),
    };
    // the lifted instance gains one vertex per class and must stay within the exhaustive DP
    let max_classes = (16 / (alpha + 1)).min(10 / alpha);
    let classes = r.gen_range(2..=max_classes);
    let (a, b) = match mode {
        LiftMode::Zero => (0, alpha - 1),
        LiftMode::One => (1, alpha),
        _ => {
            let b = r.gen_range(0..=alpha);
            (r.gen_range(0..=b), b)
        }
    };
    let d = ok(gen_smd(&GenSpec::new(seed, vec![alpha; classes]).two_cycle_prob(0.3)), "gen_smd")?;
    let n = d.order();
    let s = r.gen_range(0..n);
    let t = (s + r.gen_range(1..n)) % n;
    ok(RcpInstance::new(d, s, t, a, b), "instance")
}

fn lifts_preserve_answers() -> Outcome {
    let limits = Limits::with_all(24);
    let mut summary = Vec::new();
    for mode in [LiftMode::Pad, LiftMode::Prefix, LiftMode::Zero, LiftMode::One] {
        let mut yes = 0;
        for i in 0..50u64 {
            let inst = lift_case(mode, 7_000 + i * 13 + mode as u64)?;
            let lifted = ok(lift(&inst, mode), "lift")?;
            let want = bounded_path_exists(&inst.d, inst.s, inst.t, inst.a, inst.b);
            let base = ok(limits.rcp(&inst), "rcp")?.is_some();
            let up = ok(limits.rcp(&lifted), "rcp lifted")?.is_some();
            let up_brute = bounded_path_exists(&lifted.d, lifted.s, lifted.t, lifted.a, lifted.b);
            ensure(base == want && up == want && up_brute == want, || {
                format!("{} seed {i}: brute {want}, oracle {base}, lifted {up}/{up_brute}", mode.name())
            })?;
            let shape = match mode {
                LiftMode::Pad => (inst.a, inst.b, inst.alpha + 1),
                LiftMode::Prefix => (inst.a + 1, inst.b + 1, inst.alpha + 1),
                LiftMode::Zero => (0, inst.alpha, inst.alpha + 1),
                LiftMode::One => (1, inst.alpha + 1, inst.alpha + 1),
            };
            ensure((lifted.a, lifted.b, lifted.alpha) == shape, || format!("{} produced wrong bounds", mode.name()))?;
            yes += usize::from(want);
        }
        summary.push(format!("{} {yes}/50 yes", mode.name()));
    }
    Ok(summary.join(", "))
}

fn rule_tables() -> Outcome {
    for case in rule_rows::CASES {
        rule_rows::check(case).map_err(|e| format!("row {}: {e}", case.row))?;
    }
    Ok(format!("{} rows", rule_rows::CASES.len()))
}

fn non_strong_qhp() -> Outcome {
    let (mut instances, mut pairs, mut yes) = (0, 0, 0);
    let mut seed = 0u64;
    while instances < 300 {
        seed += 1;
        let n = 2 + (seed % 8) as usize;
        let d = random_smd(seed, n, 3, 0.15, Connectivity::Any).ok_or("generator failed")?;
        if d.chi() < 2 || is_strong(&d) {
            continue;
        }
        instances += 1;
        let ld = ok(linear_decomposition(&d), "decomposition")?;
        let index = ld.index_map(n);
        for x in 0..n {
            for y in 0..n {
                if index[x] == index[y] {
                    continue;
                }
                let got = qhp_non_strong(&d, x, y);
                let want = qhp_exists(&d, x, y);
                if index[x] > index[y] {
                    ensure(got == Err(Error::WrongOrder) && !want, || format!("seed {seed}: ({x},{y}) out of order"))?;
                    continue;
                }
                let got = ok(got, format!("seed {seed} ({x},{y})"))?;
                ensure(got.is_some() == want, || format!("seed {seed} ({x},{y}): got {got:?}, exhaustive {want}"))?;
                if let Some(p) = got {
                    ensure(d.is_qhp(&p, x, y), || format!("seed {seed}: invalid path {p:?}"))?;
                }
                pairs += 1;
                yes += usize::from(want);
            }
        }
    }
    Ok(format!("{instances} digraphs, {pairs} ordered pairs, {yes} with a path"))
}

fn not_two_strong_qhp() -> Outcome {
    let mut found = 0;
    let mut seed = 0u64;
    while found < 100 {
        seed += 1;
        ensure(seed < 100_000, || format!("only {found} instances met the preconditions"))?;
        let n = 3 + (seed % 7) as usize;
        let Some(d) = random_smd(seed, n, 3, 0.1, Connectivity::Strong) else { continue };
        let g = d.graph();
        let mut r = common::rng(seed);
        let x = r.gen_range(0..n);
        let y = (x + r.gen_range(1..n)) % n;
        if !common::strong_without(g, &[x]) || !common::strong_without(g, &[y]) || common::strong_without(g, &[x, y]) {
            continue;
        }
        let p = ok(qhp_not_2strong(&d, x, y), format!("seed {seed} ({x},{y})"))?;
        ensure(d.is_qhp(&p, x, y) && qhp_exists(&d, x, y), || format!("seed {seed}: bad path {p:?}"))?;
        found += 1;
    }
    Ok(format!("{found} instances from {seed} draws"))
}

/// Layers that mostly point forward, closed into a strong digraph through vertex 0, which is
/// then often a cut vertex.
fn layered(seed: u64) -> Option<Smd> {
    let mut r = common::rng(seed);
    let n = r.gen_range(9..=12);
    let layers = r.gen_range(2..=4);
    let layer: Vec<usize> = (0..n).map(|v| if v == 0 { 0 } else { r.gen_range(0..layers) }).collect();
    let sizes = common::class_sizes(&mut r, n, 2);
    let mut class_of: Vec<usize> = sizes.iter().enumerate().flat_map(|(c, &k)| std::iter::repeat(c).take(k)).collect();
    class_of.shuffle(&mut r);
    let mut g = Digraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if class_of[u] == class_of[v] {
                continue;
            }
            let forward = if u == 0 {
                // 0 enters the first layer and leaves from the last
                match layer[v] {
                    0 => true,
                    l if l == layers - 1 => false,
                    _ => r.gen_bool(0.5),
                }
            } else if layer[u] == layer[v] {
                r.gen_bool(0.5)
            } else {
                (layer[u] < layer[v]) == r.gen_bool(0.95)
            };
            if forward {
                g.add_arc(u, v);
            } else {
                g.add_arc(v, u);
            }
        }
    }
    let mut classes = vec![Vec::new(); sizes.len()];
    for v in 0..n {
        classes[class_of[v]].push(v);
    }
    let d = Smd::from_parts(g, classes).ok()?;
    is_strong(&d).then_some(d)
}

fn weak_qhp_exact() -> Outcome {
    let (mut done, mut yes, mut layered_count) = (0, 0, 0);
    let mut seed = 0u64;
    while done < 200 {
        seed += 1;
        ensure(seed < 100_000, || format!("only {done} instances sampled"))?;
        let from_layers = seed % 2 == 0;
        let d = if from_layers {
            layered(seed)
        } else {
            random_smd(seed, 9 + (seed % 4) as usize, 3, 0.05, Connectivity::Strong)
        };
        let Some(d) = d else { continue };
        let n = d.order();
        let mut r = common::rng(seed);
        let x = if from_layers { 0 } else { r.gen_range(0..n) };
        let y = (x + r.gen_range(1..n)) % n;
        if d.chi_without(&[x, y]) < 5 {
            continue;
        }
        let verdict = ok(weak_qhp_exists(&d, x, y), format!("seed {seed}"))?;
        let want = qhp_exists(&d, x, y) || qhp_exists(&d, y, x);
        ensure(verdict.exists == want, || format!("seed {seed} ({x},{y}): verdict {verdict:?}, exhaustive {want}"))?;
        ensure(verdict.exists == verdict.blocking_condition.is_none(), || format!("seed {seed}: inconsistent verdict"))?;
        done += 1;
        yes += usize::from(want);
        layered_count += usize::from(from_layers);
    }
    Ok(format!("{done} instances ({layered_count} layered), {yes} with a path, {} blocked", done - yes))
}

/// `A => B`, and four more vertices each mostly entered from `B` and mostly leaving to `A`, so
/// that removing three of them leaves the fourth as a cut vertex.
fn separated_family(seed: u64) -> Result<(Smd, [usize; 3]), String> {
    let mut r = common::rng(seed);
    let ka = r.gen_range(3..=5);
    let kb = r.gen_range(3..=5);
    let n = ka + kb + 4;
    let side = |v: usize| if v < ka { 0 } else if v < ka + kb { 1 } else { 2 };
    let mut g = Digraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let (fwd, back) = match (side(u), side(v)) {
                (0, 1) => (true, false),
                (0, 2) => (false, true).pick(r.gen_bool(0.8)),
                (1, 2) => (true, false).pick(r.gen_bool(0.8)),
                _ => (true, false).pick(r.gen_bool(0.5)),
            };
            if fwd {
                g.add_arc(u, v);
            }
            if back {
                g.add_arc(v, u);
            }
        }
    }
    let d = ok(Smd::from_digraph(g), "family digraph")?;
    let mut extra: Vec<usize> = (ka + kb..n).collect();
    extra.shuffle(&mut r);
    Ok((d, [extra[0], extra[1], extra[2]]))
}

trait Pick {
    fn pick(self, keep: bool) -> Self;
}

impl Pick for (bool, bool) {
    fn pick(self, keep: bool) -> Self {
        if keep {
            self
        } else {
            (self.1, self.0)
        }
    }
}

fn qhp_confirmed(d: &Smd, x: usize, y: usize, what: &str) -> Result<(), String> {
    let p = ok(Limits::with_all(14).qhp(d, x, y), what)?;
    let valid = p.as_ref().is_some_and(|p| d.is_qhp(p, x, y));
    ensure(valid && qhp_exists(d, x, y), || format!("{what}: hypotheses hold but no QHP ({x},{y}) in {:?}", d.graph().arcs()))
}

fn sufficient_conditions() -> Outcome {
    let mut trivial = 0;
    let mut seed = 0u64;
    while trivial < 50 {
        seed += 1;
        ensure(seed < 20_000, || format!("only {trivial} trivial-separator instances"))?;
        let n = 10 + (seed % 5) as usize;
        let Ok(d) = gen_smd(&GenSpec::new(seed, vec![1; n]).connectivity(Connectivity::TwoStrong)) else { continue };
        let mut r = common::rng(seed);
        let x = r.gen_range(0..n);
        let y = (x + r.gen_range(1..n)) % n;
        if ok(check_trivial_separators(&d, x, y), "check")?.satisfied {
            qhp_confirmed(&d, x, y, &format!("trivial separators seed {seed}"))?;
            trivial += 1;
        }
    }
    let (mut sampled, mut family) = (0, 0);
    for seed in 1..=2_000u64 {
        let n = 10 + (seed % 5) as usize;
        let Some(d) = random_smd(seed, n, 2, 0.05, Connectivity::TwoStrong) else { continue };
        let mut r = common::rng(seed);
        let mut vs: Vec<usize> = (0..n).collect();
        vs.shuffle(&mut r);
        let (x, y, z) = (vs[0], vs[1], vs[2]);
        if ok(check_separated_triple(&d, x, y, z), "check")?.satisfied {
            qhp_confirmed(&d, x, y, &format!("separated triple seed {seed}"))?;
            sampled += 1;
        }
    }
    let mut seed = 0u64;
    while sampled + family < 50 || family < 25 {
        seed += 1;
        ensure(seed < 20_000, || format!("only {family} separated-triple family instances"))?;
        let (d, [x, y, z]) = separated_family(seed)?;
        if ok(check_separated_triple(&d, x, y, z), "check")?.satisfied {
            qhp_confirmed(&d, x, y, &format!("separated family seed {seed}"))?;
            family += 1;
        }
    }
    Ok(format!("trivial separators {trivial}, separated triple {sampled} sampled + {family} from the family"))
}

fn two_of_three() -> Outcome {
    let (mut digraphs, mut seed) = (0, 0u64);
    while digraphs < 200 {
        seed += 1;
        let n = 3 + (seed % 7) as usize;
        let Some(d) = random_smd(seed, n, 3, 0.1, Connectivity::Strong) else { continue };
        let mut r = common::rng(seed);
        for _ in 0..5 {
            let mut vs: Vec<usize> = (0..n).collect();
            vs.shuffle(&mut r);
            let t = [vs[0], vs[1], vs[2]];
            let pairs = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)];
            let hit = pairs.iter().any(|&(i, j)| qhp_exists(&d, t[i], t[j]));
            ensure(hit, || format!("seed {seed}: no QHP among {t:?} in {:?}", d.graph().arcs()))?;
            let lib = pairs.iter().any(|&(i, j)| Limits::default().qhp(&d, t[i], t[j]).ok().flatten().is_some());
            ensure(lib, || format!("seed {seed}: library oracle finds no QHP among {t:?}"))?;
        }
        digraphs += 1;
    }
    Ok(format!("{digraphs} digraphs, {} triples", digraphs * 5))
}

/// Every `(s,t)`-path of `g`, passed to `f` until it returns false.
fn each_path(g: &Digraph, s: usize, t: usize, f: &mut impl FnMut(&[usize]) -> bool) {
    fn go(g: &Digraph, t: usize, path: &mut Vec<usize>, on: &mut [bool], f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        let cur = *path.last().expect("nonempty");
        if cur == t {
            return f(path);
        }
        for v in g.out_neighbors(cur).collect::<Vec<_>>() {
            if !on[v] {
                on[v] = true;
                path.push(v);
                let more = go(g, t, path, on, f);
                path.pop();
                on[v] = false;
                if !more {
                    return false;
                }
            }
        }
        true
    }
    let mut on = vec![false; g.order()];
    on[s] = true;
    go(g, t, &mut vec![s], &mut on, f);
}

fn separator_augmentation() -> Outcome {
    let (mut done, mut yes, mut recovered) = (0, 0, 0);
    let mut seed = 0u64;
    while done < 100 {
        seed += 1;
        ensure(seed < 100_000, || format!("only {done} instances sampled"))?;
        let n = 4 + (seed % 5) as usize;
        let Some(d) = random_smd(seed, n, 2, 0.1, Connectivity::Any) else { continue };
        let mut r = common::rng(seed);
        let x = r.gen_range(0..n);
        let y = (x + r.gen_range(1..n)) % n;
        if ok(max_disjoint_paths(&d, x, y, 1), "disjoint paths")? < 2 {
            continue;
        }
        let seps: Vec<Vec<usize>> =
            ok(two_separators(&d, x, y), "separators")?.into_iter().map(|s| s.members).filter(|m| m.len() == 2).collect();
        if seps.is_empty() {
            continue;
        }
        let sep = &seps[r.gen_range(0..seps.len())];
        let (u, v) = (sep[0], sep[1]);
        let aug = ok(augment_2sep(&d, u, v), "augment")?;
        let want = qhp_exists(&d, x, y);
        let k = d.chi();
        let got = common::bounded_path_exists_in(&aug, d.class_map(), x, y, 1, usize::MAX);
        ensure(got == want, || format!("seed {seed} ({x},{y}) sep {sep:?}: d has QHP {want}, augmented {got}"))?;
        let lib = constrained_path(&aug, d.class_map(), x, y, &vec![1; k], &vec![usize::MAX; k]);
        ensure(lib.is_some() == want, || format!("seed {seed}: constrained path search disagrees"))?;
        let mut failure = None;
        each_path(&aug, x, y, &mut |p| {
            if !d.covers_all_classes(p) {
                return true;
            }
            let p_aug = VertexPath::new(p.to_vec()).expect("simple path");
            let uses_new = p_aug.arcs().any(|(a, b)| !d.has_arc(a, b));
            match recover_qhp(&d, &aug, &p_aug, u, v, x, y) {
                Ok(q) if d.is_qhp(&q, x, y) => {
                    recovered += usize::from(uses_new);
                    true
                }
                other => {
                    failure = Some(format!("seed {seed} sep ({u},{v}): {p:?} recovered as {other:?}"));
                    false
                }
            }
        });
        if let Some(f) = failure {
            return Err(f);
        }
        done += 1;
        yes += usize::from(want);
    }
    Ok(format!("{done} instances, {yes} with a QHP, {recovered} witnesses through an added arc recovered"))
}

fn hamiltonian_case(d: &Smd) -> Result<bool, String> {
    let exists = ok(hamiltonian_alpha2_exists(d), "decision")?;
    let want = common::hp_exists(d.graph());
    ensure(exists == want, || format!("decision {exists}, exhaustive {want} for {:?}", d.graph().arcs()))?;
    match ok(hamiltonian_alpha2_path(d), "path")? {
        Some(p) => ensure(exists && p.len() == d.order() && p.is_path_in(d.graph()), || format!("bad path {p:?}"))?,
        None => ensure(!exists, || "no path returned".into())?,
    }
    Ok(exists)
}

fn hamiltonian_alpha_two() -> Outcome {
    let (mut small, mut failure) = (0, None);
    for n in 1..=5 {
        common::for_each_smd(n, 2, |d| {
            if failure.is_none() {
                failure = hamiltonian_case(d).err();
                small += 1;
            }
        });
    }
    if let Some(f) = failure {
        return Err(f);
    }
    let mut yes = 0;
    for seed in 0..500u64 {
        let n = 1 + (seed % 9) as usize;
        let d = random_smd(seed, n, 2, 0.2, Connectivity::Any).ok_or("generator failed")?;
        yes += usize::from(hamiltonian_case(&d).map_err(|e| format!("seed {seed}: {e}"))?);
    }
    let (mut ratios, mut largest) = (Vec::new(), 0.0);
    for n in [500usize, 1000, 2000] {
        let d = ok(gen_smd(&GenSpec::new(n as u64, vec![2; n / 2]).two_cycle_prob(0.3)), "gen")?;
        let start = Instant::now();
        let (_, steps) = ok(hamiltonian_alpha2_exists_counted(&d), "decision")?;
        let secs = start.elapsed().as_secs_f64();
        ensure(n < 2000 || secs < 1.0, || format!("n = 2000 took {secs:.2}s"))?;
        largest = secs;
        ratios.push(steps as f64 / (n * n) as f64);
    }
    let (lo, hi) = ratios.iter().fold((f64::MAX, 0f64), |(lo, hi), &q| (lo.min(q), hi.max(q)));
    ensure(hi <= 8.0 && hi <= 2.0 * lo, || format!("probe counts per n^2 not bounded: {ratios:?}"))?;
    Ok(format!("{small} exhaustive, 500 sampled ({yes} Hamiltonian), probes/n^2 {ratios:.2?}, n = 2000 in {largest:.3}s"))
}

fn strip_two_cycles() -> Outcome {
    let (mut done, mut removed_total) = (0, 0);
    let mut seed = 0u64;
    while done < 500 {
        seed += 1;
        ensure(seed < 100_000, || format!("only {done} unilateral digraphs sampled"))?;
        let n = 2 + (seed % 13) as usize;
        let Some(d) = random_smd(seed, n, 2, 0.4, Connectivity::Unilateral) else { continue };
        let (g, removed) = ok(strip_2cycles_smd(&d), format!("seed {seed}"))?;
        let cycles = d.graph().two_cycles();
        ensure(common::is_unilateral(&g), || format!("seed {seed}: result not unilateral"))?;
        ensure(g.two_cycles().is_empty(), || format!("seed {seed}: 2-cycles remain"))?;
        ensure(removed.len() == cycles.len() && g.arc_count() + removed.len() == d.graph().arc_count(), || {
            format!("seed {seed}: removed {} arcs for {} 2-cycles", removed.len(), cycles.len())
        })?;
        ensure(removed.iter().all(|&(a, b)| d.has_arc(a, b) && d.has_arc(b, a) && !g.has_arc(a, b) && g.has_arc(b, a)), || {
            format!("seed {seed}: removed arcs are not one per 2-cycle")
        })?;
        done += 1;
        removed_total += removed.len();
    }
    Ok(format!("{done} digraphs, {removed_total} 2-cycles broken"))
}

fn quasi_merge_linear() -> Outcome {
    const C: f64 = 8.0;
    let mut worst = 0f64;
    for seed in 0..1000u64 {
        let (d, p, q, x) = common::acyclic_pair(seed);
        let (m, steps) = ok(quasi_merge_counted(&d, &p, &q, &x), format!("seed {seed}"))?;
        ensure(common::is_path(d.graph(), m.vertices()), || format!("seed {seed}: not a path"))?;
        ensure(m.first() == p.first() || m.first() == q.first(), || format!("seed {seed}: wrong start"))?;
        ensure(m.last() == p.last() || m.last() == q.last(), || format!("seed {seed}: wrong end"))?;
        ensure(x.iter().all(|&v| m.contains(v)), || format!("seed {seed}: lost a vertex of X"))?;
        let mut union: Vec<usize> = p.vertices().iter().chain(q.vertices()).copied().collect();
        union.sort_unstable();
        union.dedup();
        let ratio = steps as f64 / union.len() as f64;
        worst = worst.max(ratio);
        ensure(ratio <= C, || format!("seed {seed}: {steps} steps for {} vertices", union.len()))?;
    }
    Ok(format!("1000 merges, at most {worst:.2} steps per vertex of the union"))
}
