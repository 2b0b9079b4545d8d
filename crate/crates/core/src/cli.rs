//! File formats and the `smdpath` command line.
//!
//! `.smd` files list 1-based vertices:
//!
//! ```text
//! smd <n>
//! classes <c>
//! class <v> <v> ...
//! arcs <m>
//! <u> <v>
//! ```
//!
//! Lines starting with `#` are comments. CNF input is DIMACS.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::connectivity::{linear_decomposition, shortest_path_masked, PartKind};
use crate::error::{Error, Result};
use crate::gen::{gen_cnf, gen_smd, Connectivity, GenSpec};
use crate::oracle::Limits;
use crate::qhp::{hamiltonian_alpha2_exists, hamiltonian_alpha2_path, qhp_non_strong, qhp_not_2strong};
use crate::satred::{lift, path_to_assignment, reduce_ab3, CnfFormula, LiftMode, RcpInstance, Reduction, ReductionCertificate};
use crate::smd::{Digraph, Smd, Vertex, VertexPath};

/// Meaningful lines with their 1-based line numbers, comments and blanks removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r').trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_num(line: usize, tok: &str) -> Result<usize> {
    tok.parse().map_err(|_| parse_err(line, format!("expected a non-negative integer, found `{tok}`")))
}

fn parse_vertex(line: usize, tok: &str, n: usize) -> Result<Vertex> {
    let v = parse_num(line, tok)?;
    if v == 0 || v > n {
        return Err(parse_err(line, format!("vertex {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

/// Expects `<keyword> <count>` on the next line.
fn header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, keyword: &str, last: usize) -> Result<(usize, usize)> {
    let (no, l) = lines.next().ok_or_else(|| parse_err(last + 1, format!("missing `{keyword}` header")))?;
    let mut toks = l.split_whitespace();
    if toks.next() != Some(keyword) {
        return Err(parse_err(no, format!("expected `{keyword} <count>`")));
    }
    let count = parse_num(no, toks.next().ok_or_else(|| parse_err(no, "missing count"))?)?;
    if toks.next().is_some() {
        return Err(parse_err(no, "trailing tokens"));
    }
    Ok((no, count))
}

pub fn parse_smd(text: &str) -> Result<Smd> {
    let mut lines = content_lines(text);
    let (mut last, n) = header(&mut lines, "smd", 0)?;
    let (no, c) = header(&mut lines, "classes", last)?;
    last = no;
    let mut classes = Vec::with_capacity(c);
    for _ in 0..c {
        let (no, l) = lines.next().ok_or_else(|| parse_err(last + 1, "missing `class` line"))?;
        last = no;
        let mut toks = l.split_whitespace();
        if toks.next() != Some("class") {
            return Err(parse_err(no, "expected `class <v> ...`"));
        }
        let members = toks.map(|t| parse_vertex(no, t, n)).collect::<Result<Vec<_>>>()?;
        classes.push(members);
    }
    let (no, m) = header(&mut lines, "arcs", last)?;
    last = no;
    let mut graph = Digraph::new(n);
    for _ in 0..m {
        let (no, l) = lines.next().ok_or_else(|| parse_err(last + 1, "missing arc line"))?;
        last = no;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(parse_err(no, "expected `<u> <v>`"));
        }
        let (u, v) = (parse_vertex(no, toks[0], n)?, parse_vertex(no, toks[1], n)?);
        if u == v {
            return Err(parse_err(no, "self-loop"));
        }
        graph.add_arc(u, v);
    }
    if let Some((no, _)) = lines.next() {
        return Err(parse_err(no, "unexpected content after the arc list"));
    }
    Smd::from_parts(graph, classes)
}

pub fn write_smd(d: &Smd) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "smd {}", d.order());
    let mut classes: Vec<Vec<Vertex>> = d.classes().to_vec();
    for c in classes.iter_mut() {
        c.sort_unstable();
    }
    classes.sort();
    let _ = writeln!(out, "classes {}", classes.len());
    for c in &classes {
        let ids: Vec<String> = c.iter().map(|v| (v + 1).to_string()).collect();
        let _ = writeln!(out, "class {}", ids.join(" "));
    }
    let arcs = d.graph().arcs();
    let _ = writeln!(out, "arcs {}", arcs.len());
    for (u, v) in arcs {
        let _ = writeln!(out, "{} {}", u + 1, v + 1);
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let l = raw.trim_end_matches('\r').trim();
        if l.is_empty() || l.starts_with('c') || l.starts_with('%') {
            continue;
        }
        last = no;
        if l.starts_with('p') {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if header.is_some() || toks.len() != 4 || toks[1] != "cnf" {
                return Err(parse_err(no, "expected a single `p cnf <vars> <clauses>` header"));
            }
            header = Some((parse_num(no, toks[2])?, parse_num(no, toks[3])?));
            continue;
        }
        let (vars, _) = header.ok_or_else(|| parse_err(no, "clause before the `p cnf` header"))?;
        for tok in l.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| parse_err(no, format!("bad literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > vars {
                return Err(parse_err(no, format!("literal {lit} exceeds variable count {vars}")));
            } else {
                current.push(lit);
            }
        }
    }
    let (vars, m) = header.ok_or_else(|| parse_err(last + 1, "missing `p cnf` header"))?;
    if !current.is_empty() {
        return Err(parse_err(last, "last clause is not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(parse_err(last, format!("header announces {m} clauses, found {}", clauses.len())));
    }
    CnfFormula::new(vars, clauses)
}

pub fn write_dimacs(phi: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", phi.var_count, phi.clauses.len());
    for c in &phi.clauses {
        for l in c {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

#[derive(Parser, Debug)]
#[command(name = "smdpath", version, about = "Paths in semicomplete multipartite digraphs")]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Largest instance handed to the exhaustive solvers.
    #[arg(long, global = true, value_name = "N")]
    oracle_limit: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a file describes a valid SMD.
    Validate { file: PathBuf },
    /// Print the linear decomposition.
    Decompose { file: PathBuf },
    /// Polynomial solvers with exhaustive fallback.
    #[command(subcommand)]
    Solve(SolveCmd),
    /// Reduce a CNF formula to a class-restricted path instance.
    Reduce(ReduceArgs),
    /// Exhaustive reference solvers.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Seeded instance generators.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Read an assignment off a witness path of a reduced instance.
    Decode(DecodeArgs),
    /// Run randomized self-checks.
    Check {
        /// Number of random instances per check.
        #[arg(long, default_value_t = 50)]
        seeds: u64,
    },
}

#[derive(Args, Debug)]
struct Ends {
    file: PathBuf,
    /// 1-based start vertex.
    #[arg(long = "from", value_name = "S")]
    from: usize,
    /// 1-based end vertex.
    #[arg(long = "to", value_name = "T")]
    to: usize,
}

#[derive(Args, Debug)]
struct Bounds {
    /// Lower bound per class or clause.
    #[arg(short = 'a')]
    a: usize,
    /// Upper bound per class or clause.
    #[arg(short = 'b')]
    b: usize,
}

#[derive(Subcommand, Debug)]
enum SolveCmd {
    /// Path from S to T meeting every class.
    Qhp(Ends),
    /// Hamiltonian path when every class has at most two vertices.
    Hp2 { file: PathBuf },
    /// Path from S to T with between A and B vertices of every class.
    Rcp {
        #[command(flatten)]
        ends: Ends,
        #[command(flatten)]
        bounds: Bounds,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCmd {
    /// Path from S to T with between A and B vertices of every class.
    Rcp {
        #[command(flatten)]
        ends: Ends,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Path from S to T meeting every class.
    Qhp(Ends),
    /// Hamiltonian path.
    Hp { file: PathBuf },
    /// Assignment with between A and B true literals in every clause.
    Sat {
        cnf: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum LiftArg {
    Pad,
    Prefix,
    Zero,
    One,
}

impl From<LiftArg> for LiftMode {
    fn from(l: LiftArg) -> Self {
        match l {
            LiftArg::Pad => LiftMode::Pad,
            LiftArg::Prefix => LiftMode::Prefix,
            LiftArg::Zero => LiftMode::Zero,
            LiftArg::One => LiftMode::One,
        }
    }
}

#[derive(Args, Debug)]
struct ReduceArgs {
    cnf: PathBuf,
    #[command(flatten)]
    bounds: Bounds,
    /// Applied in order after the base reduction.
    #[arg(long = "lift", value_enum)]
    lifts: Vec<LiftArg>,
    /// Where to write the reduced SMD.
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
    /// Where to write the JSON certificate needed by `decode`.
    #[arg(long = "cert")]
    cert: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ConnArg {
    Any,
    Strong,
    TwoStrong,
    Unilateral,
}

#[derive(Subcommand, Debug)]
enum GenCmd {
    /// Random SMD in the text format.
    Smd {
        #[arg(long)]
        seed: u64,
        /// Comma-separated class sizes, e.g. `2,2,1`.
        #[arg(long, value_delimiter = ',', required = true)]
        classes: Vec<usize>,
        #[arg(long, default_value_t = 0.0)]
        two_cycle_prob: f64,
        #[arg(long, value_enum, default_value_t = ConnArg::Any)]
        connectivity: ConnArg,
        #[arg(long, default_value_t = 1000)]
        max_rejects: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Random 3-CNF formula in DIMACS format.
    Cnf {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        clauses: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct DecodeArgs {
    file: PathBuf,
    /// Certificate written by `reduce --cert`.
    #[arg(long = "cert")]
    cert: PathBuf,
    /// Comma-separated 1-based witness path.
    #[arg(long = "path", value_delimiter = ',', required = true)]
    path: Vec<usize>,
}

/// What a command produced: exit code, JSON body and the `--pretty` rendering.
struct Outcome {
    code: i32,
    json: Value,
    text: String,
}

impl Outcome {
    fn new(code: i32, json: Value, text: impl Into<String>) -> Self {
        Outcome { code, json, text: text.into() }
    }
}

/// Failure with its exit code: 2 for usage problems, 3 for invalid input.
struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BadBounds { .. } | Error::UnsupportedBounds { .. } | Error::ModeBoundsMismatch { .. } => 2,
            Error::TooLarge { .. } => 2,
            _ => 3,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

type CmdResult = std::result::Result<Outcome, Failure>;

fn read(path: &PathBuf) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &PathBuf, text: &str) -> std::result::Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn load_smd(path: &PathBuf) -> std::result::Result<Smd, Failure> {
    Ok(parse_smd(&read(path)?)?)
}

fn vertex_arg(d: &Smd, v: usize) -> std::result::Result<Vertex, Failure> {
    if v == 0 || v > d.order() {
        return Err(Failure { code: 3, msg: format!("vertex {v} out of range 1..={}", d.order()) });
    }
    Ok(v - 1)
}

fn one_based(p: &VertexPath) -> Vec<usize> {
    p.vertices().iter().map(|v| v + 1).collect()
}

fn joined(vs: &[usize]) -> String {
    vs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Yes/no answer with an optional path, re-validated by `check` before printing.
fn decision(p: Option<VertexPath>, method: &str, check: impl Fn(&VertexPath) -> bool) -> CmdResult {
    match p {
        Some(p) => {
            if !check(&p) {
                return Err(Failure { code: 3, msg: format!("internal error: {method} produced an invalid path") });
            }
            let ids = one_based(&p);
            let text = format!("yes ({method}): {}", joined(&ids));
            Ok(Outcome::new(0, json!({"schema": 1, "exists": true, "path": ids, "method": method}), text))
        }
        None => Ok(Outcome::new(1, json!({"schema": 1, "exists": false, "method": method}), format!("no ({method})"))),
    }
}

fn limits(cli_limit: Option<usize>) -> Limits {
    cli_limit.map_or_else(Limits::default, Limits::with_all)
}

fn cmd_validate(file: &PathBuf) -> CmdResult {
    let d = load_smd(file)?;
    let json = json!({"schema": 1, "valid": true, "order": d.order(), "classes": d.chi(), "alpha": d.alpha(), "arcs": d.graph().arc_count()});
    let text = format!("valid SMD: {} vertices, {} classes, alpha {}", d.order(), d.chi(), d.alpha());
    Ok(Outcome::new(0, json, text))
}

fn cmd_decompose(file: &PathBuf) -> CmdResult {
    let d = load_smd(file)?;
    let dec = linear_decomposition(&d)?;
    let mut text = String::new();
    let parts: Vec<Value> = dec
        .parts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let ids: Vec<usize> = p.vertices.iter().map(|v| v + 1).collect();
            let kind = match p.kind {
                PartKind::StrongComponent => "strong",
                PartKind::MonochromaticBlock => "monochromatic",
            };
            let _ = writeln!(text, "R{}: {} ({kind})", i + 1, joined(&ids));
            json!({"vertices": ids, "kind": kind})
        })
        .collect();
    Ok(Outcome::new(0, json!({"schema": 1, "parts": parts}), text.trim_end()))
}

fn cmd_solve_qhp(ends: &Ends, lim: Limits) -> CmdResult {
    let d = load_smd(&ends.file)?;
    let (x, y) = (vertex_arg(&d, ends.from)?, vertex_arg(&d, ends.to)?);
    if x == y {
        return Err(usage("--from and --to must differ"));
    }
    let check = |p: &VertexPath| d.is_qhp(p, x, y);
    let strong = crate::connectivity::is_strong(&d);
    if !strong {
        let dec = match linear_decomposition(&d) {
            Ok(dec) => dec,
            Err(Error::Disconnected) => return decision(None, "disconnected", check),
            Err(e) => return Err(e.into()),
        };
        let idx = dec.index_map(d.order());
        if idx[x] < idx[y] {
            return decision(qhp_non_strong(&d, x, y)?, "linear-decomposition", check);
        }
        if idx[x] > idx[y] {
            return decision(None, "linear-decomposition", check);
        }
    } else {
        match qhp_not_2strong(&d, x, y) {
            Ok(p) => return decision(Some(p), "strong-not-2-strong", check),
            Err(Error::PreconditionFailed(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    match lim.qhp(&d, x, y) {
        Ok(p) => decision(p, "exhaustive", check),
        Err(Error::TooLarge { size, limit }) => Err(usage(format!(
            "no polynomial construction applies and the instance ({size} vertices) exceeds the exhaustive limit {limit}; \
             the general problem is NP-complete (raise --oracle-limit to search anyway)"
        ))),
        Err(e) => Err(e.into()),
    }
}

fn cmd_solve_hp2(file: &PathBuf) -> CmdResult {
    let d = load_smd(file)?;
    let exists = hamiltonian_alpha2_exists(&d)?;
    let p = if exists { hamiltonian_alpha2_path(&d)? } else { None };
    if exists && p.is_none() {
        return Err(Failure { code: 3, msg: "internal error: no path found for a unilateral instance".into() });
    }
    let n = d.order();
    decision(p, "unilateral", |p| p.len() == n && p.is_path_in(d.graph()))
}

fn rcp_instance(ends: &Ends, bounds: &Bounds) -> std::result::Result<RcpInstance, Failure> {
    if bounds.a > bounds.b {
        return Err(usage(format!("-a {} exceeds -b {}", bounds.a, bounds.b)));
    }
    let d = load_smd(&ends.file)?;
    let (s, t) = (vertex_arg(&d, ends.from)?, vertex_arg(&d, ends.to)?);
    Ok(RcpInstance::new(d, s, t, bounds.a, bounds.b)?)
}

fn cmd_solve_rcp(ends: &Ends, bounds: &Bounds, lim: Limits) -> CmdResult {
    let inst = rcp_instance(ends, bounds)?;
    let check = |p: &VertexPath| inst.check_path(p).is_ok();
    if inst.s == inst.t {
        return Err(usage("--from and --to must differ"));
    }
    if inst.a == 0 && inst.b == inst.alpha {
        let n = inst.d.order();
        let mut target = vec![false; n];
        target[inst.t] = true;
        let p = shortest_path_masked(inst.d.graph(), &vec![true; n], &[inst.s], &target).map(VertexPath::new).transpose()?;
        return decision(p, "reachability", check);
    }
    match lim.rcp(&inst) {
        Ok(p) => decision(p, "exhaustive", check),
        Err(Error::TooLarge { size, limit }) => Err(usage(format!(
            "instance has {size} vertices, above the exhaustive limit {limit}; ({},{},{})-RCP is NP-complete for class size \
             at least 3 unless (a,b) is (0,alpha) or (alpha,alpha), so no polynomial solver is available",
            inst.a, inst.b, inst.alpha
        ))),
        Err(e) => Err(e.into()),
    }
}

fn certificate_json(red: &Reduction, inst: &RcpInstance, lifts: &[LiftMode]) -> Value {
    let cert = red.certificate().map(|c| c.map_vertices(|v| v + 1));
    json!({
        "schema": 1,
        "s": inst.s + 1,
        "t": inst.t + 1,
        "a": inst.a,
        "b": inst.b,
        "alpha": inst.alpha,
        "lifts": lifts.iter().map(|m| m.name()).collect::<Vec<_>>(),
        "certificate": cert,
    })
}

fn cmd_reduce(args: &ReduceArgs) -> CmdResult {
    let phi = parse_dimacs(&read(&args.cnf)?)?;
    let red = reduce_ab3(&phi, args.bounds.a, args.bounds.b)?;
    let modes: Vec<LiftMode> = args.lifts.iter().map(|&l| l.into()).collect();
    let mut inst = red.instance().clone();
    for &m in &modes {
        inst = lift(&inst, m)?;
    }
    write_file(&args.output, &write_smd(&inst.d))?;
    if let Some(path) = &args.cert {
        let body = serde_json::to_string_pretty(&certificate_json(&red, &inst, &modes)).expect("certificate serializes");
        write_file(path, &body)?;
    }
    let fixed = matches!(red, Reduction::FixedNoInstance(_));
    let fixed_yes = matches!(red, Reduction::FixedYesInstance(_));
    let json = json!({
        "schema": 1,
        "order": inst.d.order(),
        "alpha": inst.alpha,
        "a": inst.a,
        "b": inst.b,
        "s": inst.s + 1,
        "t": inst.t + 1,
        "fixed_no_instance": fixed,
        "fixed_yes_instance": fixed_yes,
    });
    let text = format!(
        "wrote {} vertices (alpha {}, bounds [{},{}], s={}, t={}){}",
        inst.d.order(),
        inst.alpha,
        inst.a,
        inst.b,
        inst.s + 1,
        inst.t + 1,
        if fixed {
            ", preprocessing proved unsatisfiability"
        } else if fixed_yes {
            ", preprocessing proved satisfiability"
        } else {
            ""
        }
    );
    Ok(Outcome::new(0, json, text))
}

fn cmd_decode(args: &DecodeArgs) -> CmdResult {
    let d = load_smd(&args.file)?;
    let body: Value = serde_json::from_str(&read(&args.cert)?).map_err(|e| Failure { code: 3, msg: format!("bad certificate: {e}") })?;
    let field = |k: &str| -> std::result::Result<usize, Failure> {
        body.get(k).and_then(Value::as_u64).map(|v| v as usize).ok_or_else(|| Failure { code: 3, msg: format!("certificate lacks `{k}`") })
    };
    let (s, t, a, b) = (field("s")?, field("t")?, field("a")?, field("b")?);
    let cert: Option<ReductionCertificate> = serde_json::from_value(body.get("certificate").cloned().unwrap_or(Value::Null))
        .map_err(|e| Failure { code: 3, msg: format!("bad certificate: {e}") })?;
    let Some(cert) = cert.map(|c| c.map_vertices(|v| v - 1)) else {
        return Err(Failure { code: 3, msg: "the reduction produced a fixed no-instance; nothing to decode".into() });
    };
    let inst = RcpInstance::new(d, vertex_arg_n(s, usize::MAX)?, vertex_arg_n(t, usize::MAX)?, a, b)?;
    let ids = args.path.iter().map(|&v| vertex_arg(&inst.d, v)).collect::<std::result::Result<Vec<_>, _>>()?;
    let p = VertexPath::new(ids)?;
    let sigma = path_to_assignment(&inst, &cert, &p)?;
    let original = cert.to_original(&sigma);
    let text = format!("assignment: {}", bits(&original.values));
    Ok(Outcome::new(0, json!({"schema": 1, "assignment": sigma.values, "original": original.values}), text))
}

fn vertex_arg_n(v: usize, n: usize) -> std::result::Result<Vertex, Failure> {
    if v == 0 || v > n {
        return Err(Failure { code: 3, msg: format!("vertex {v} out of range") });
    }
    Ok(v - 1)
}

fn bits(values: &[bool]) -> String {
    values.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn cmd_oracle(cmd: &OracleCmd, lim: Limits) -> CmdResult {
    match cmd {
        OracleCmd::Rcp { ends, bounds } => {
            let inst = rcp_instance(ends, bounds)?;
            decision(lim.rcp(&inst)?, "exhaustive", |p| inst.check_path(p).is_ok())
        }
        OracleCmd::Qhp(ends) => {
            let d = load_smd(&ends.file)?;
            let (x, y) = (vertex_arg(&d, ends.from)?, vertex_arg(&d, ends.to)?);
            decision(lim.qhp(&d, x, y)?, "exhaustive", |p| d.is_qhp(p, x, y))
        }
        OracleCmd::Hp { file } => {
            let d = load_smd(file)?;
            let n = d.order();
            decision(lim.hp(&d)?, "exhaustive", |p| p.len() == n && p.is_path_in(d.graph()))
        }
        OracleCmd::Sat { cnf, bounds } => {
            if bounds.a > bounds.b {
                return Err(usage(format!("-a {} exceeds -b {}", bounds.a, bounds.b)));
            }
            let phi = parse_dimacs(&read(cnf)?)?;
            match lim.ab_sat(&phi, bounds.a, bounds.b)? {
                Some(sigma) => {
                    let text = format!("yes: {}", bits(&sigma.values));
                    Ok(Outcome::new(0, json!({"schema": 1, "exists": true, "assignment": sigma.values}), text))
                }
                None => Ok(Outcome::new(1, json!({"schema": 1, "exists": false}), "no")),
            }
        }
    }
}

fn cmd_gen(cmd: &GenCmd) -> CmdResult {
    let (text, output) = match cmd {
        GenCmd::Smd { seed, classes, two_cycle_prob, connectivity, max_rejects, output } => {
            let conn = match connectivity {
                ConnArg::Any => Connectivity::Any,
                ConnArg::Strong => Connectivity::Strong,
                ConnArg::TwoStrong => Connectivity::TwoStrong,
                ConnArg::Unilateral => Connectivity::Unilateral,
            };
            let spec = GenSpec::new(*seed, classes.clone())
                .two_cycle_prob(*two_cycle_prob)
                .connectivity(conn)
                .max_rejects(*max_rejects);
            let d = gen_smd(&spec).map_err(|e| match e {
                Error::PreconditionFailed(m) => usage(m),
                e => e.into(),
            })?;
            (write_smd(&d), output)
        }
        GenCmd::Cnf { seed, vars, clauses, output } => {
            let phi = gen_cnf(*seed, *vars, *clauses).map_err(|e| usage(e.to_string()))?;
            (write_dimacs(&phi), output)
        }
    };
    match output {
        Some(path) => {
            write_file(path, &text)?;
            Ok(Outcome::new(0, json!({"schema": 1, "written": path.display().to_string()}), format!("wrote {}", path.display())))
        }
        None => Ok(Outcome { code: 0, json: Value::String(text.clone()), text }),
    }
}

/// One randomized self-check: number of instances examined and mismatches found.
struct Suite {
    name: &'static str,
    checked: usize,
    failures: usize,
}

fn random_classes(seed: u64, n: usize, max_class: usize) -> Vec<usize> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = rng.gen_range(1..=max_class.min(left));
        sizes.push(s);
        left -= s;
    }
    sizes
}

fn check_suites(seeds: u64) -> Vec<Suite> {
    let oracle = Limits::default();
    let mut non_strong = Suite { name: "qhp on non-strong digraphs agrees with exhaustive search", checked: 0, failures: 0 };
    let mut hp2 = Suite { name: "hamiltonian path for alpha <= 2 agrees with exhaustive search", checked: 0, failures: 0 };
    let mut reduce = Suite { name: "reduction preserves (a,b)-satisfiability", checked: 0, failures: 0 };
    for seed in 0..seeds {
        let n = 3 + (seed % 6) as usize;
        let spec = GenSpec::new(seed, random_classes(seed, n, 3)).two_cycle_prob(0.2);
        if let Ok(d) = gen_smd(&spec) {
            if !crate::connectivity::is_strong(&d) {
                if let Ok(dec) = linear_decomposition(&d) {
                    let idx = dec.index_map(d.order());
                    for x in 0..d.order() {
                        for y in 0..d.order() {
                            if idx[x] < idx[y] {
                                non_strong.checked += 1;
                                let ours = qhp_non_strong(&d, x, y).ok().flatten();
                                let exact = oracle.qhp(&d, x, y).ok().flatten();
                                let ok = match &ours {
                                    Some(p) => d.is_qhp(p, x, y) && exact.is_some(),
                                    None => exact.is_none(),
                                };
                                non_strong.failures += usize::from(!ok);
                            }
                        }
                    }
                }
            }
        }
        let spec2 = GenSpec::new(seed, random_classes(seed ^ 0x5eed, n, 2)).two_cycle_prob(0.3);
        if let Ok(d) = gen_smd(&spec2) {
            hp2.checked += 1;
            let exists = hamiltonian_alpha2_exists(&d).unwrap_or(false);
            let path = hamiltonian_alpha2_path(&d).ok().flatten();
            let exact = oracle.hp(&d).ok().flatten();
            let ok = exists == exact.is_some()
                && path.as_ref().map_or(!exists, |p| p.len() == d.order() && p.is_path_in(d.graph()));
            hp2.failures += usize::from(!ok);
        }
        if let Ok(phi) = gen_cnf(seed, 2, 1 + (seed % 2) as usize) {
            let big = Limits::with_all(64);
            for (a, b) in crate::satred::SUPPORTED_BOUNDS {
                let Ok(red) = reduce_ab3(&phi, a, b) else { continue };
                reduce.checked += 1;
                let sat = big.ab_sat(&phi, a, b).ok().flatten().is_some();
                let path = big.rcp(red.instance()).ok().flatten().is_some();
                reduce.failures += usize::from(sat != path);
            }
        }
    }
    vec![non_strong, hp2, reduce]
}

fn cmd_check(seeds: u64) -> CmdResult {
    let suites = check_suites(seeds);
    let mut text = String::new();
    let mut rows = Vec::new();
    for s in &suites {
        let status = if s.failures == 0 { "pass" } else { "FAIL" };
        let _ = writeln!(text, "{status}: {} ({} checked, {} failures)", s.name, s.checked, s.failures);
        rows.push(json!({"suite": s.name, "checked": s.checked, "failures": s.failures}));
    }
    let ok = suites.iter().all(|s| s.failures == 0);
    Ok(Outcome::new(if ok { 0 } else { 1 }, json!({"schema": 1, "passed": ok, "suites": rows}), text.trim_end()))
}

/// Runs the command line given by `args` (including the program name), writing results to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    let lim = limits(cli.oracle_limit);
    let result = match &cli.command {
        Command::Validate { file } => cmd_validate(file),
        Command::Decompose { file } => cmd_decompose(file),
        Command::Solve(SolveCmd::Qhp(ends)) => cmd_solve_qhp(ends, lim),
        Command::Solve(SolveCmd::Hp2 { file }) => cmd_solve_hp2(file),
        Command::Solve(SolveCmd::Rcp { ends, bounds }) => cmd_solve_rcp(ends, bounds, lim),
        Command::Reduce(args) => cmd_reduce(args),
        Command::Oracle(cmd) => cmd_oracle(cmd, lim),
        Command::Gen(cmd) => cmd_gen(cmd),
        Command::Decode(args) => cmd_decode(args),
        Command::Check { seeds } => cmd_check(*seeds),
    };
    match result {
        Ok(o) => {
            let body = match (&o.json, cli.pretty) {
                (Value::String(raw), _) => raw.clone(),
                (_, true) => format!("{}\n", o.text),
                (json, false) => format!("{json}\n"),
            };
            let _ = write!(out, "{body}");
            o.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
