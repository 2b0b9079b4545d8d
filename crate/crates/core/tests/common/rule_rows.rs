//! One case per row and bound cell of the two preprocessing rule tables. Each case runs a small
//! formula through the table as printed and compares the rules fired, the substitutions made and
//! the remaining clauses.

use smdpath::satred::{
    preprocess_small_bounds, preprocess_small_bounds_verbatim, preprocess_two_three, CnfFormula, Lit, Preprocessed,
    Substitution, Term,
};

#[derive(Debug, Clone, Copy)]
pub enum Table {
    /// Bounds `0 <= a <= b <= 2`, rules applied as printed.
    Small(usize, usize),
    /// Bounds `(0,2)` / `(1,2)` with the corrected cells.
    SmallExact(usize, usize),
    TwoThree,
}

#[derive(Debug, Clone, Copy)]
pub enum Expect {
    Unsat,
    Reduced { subs: &'static [&'static str], clauses: &'static [&'static [Lit]] },
}

#[derive(Debug, Clone, Copy)]
pub struct RowCase {
    pub row: &'static str,
    pub table: Table,
    pub var_count: usize,
    pub input: &'static [&'static [Lit]],
    pub fired: &'static [&'static str],
    pub expect: Expect,
}

const fn case(
    row: &'static str,
    table: Table,
    var_count: usize,
    input: &'static [&'static [Lit]],
    fired: &'static [&'static str],
    expect: Expect,
) -> RowCase {
    RowCase { row, table, var_count, input, fired, expect }
}

const fn reduced(subs: &'static [&'static str], clauses: &'static [&'static [Lit]]) -> Expect {
    Expect::Reduced { subs, clauses }
}

use Table::{Small, SmallExact, TwoThree};

pub const CASES: &[RowCase] = &[
    case("A|A|A a=0", Small(0, 2), 1, &[&[1, 1, 1]], &["A|A|A"], reduced(&["1/0"], &[])),
    case("A|A|A a>0", Small(1, 2), 1, &[&[1, 1, 1]], &["A|A|A"], Expect::Unsat),
    case("A|A|B b=1 a=0", Small(0, 1), 2, &[&[1, 1, 2]], &["A|A|B"], reduced(&["1/0"], &[])),
    case("A|A|B b=1 a=1", Small(1, 1), 2, &[&[1, 1, 2]], &["A|A|B"], reduced(&["1/0", "2/1"], &[])),
    case("A|A|B b=2 a=0", Small(0, 2), 2, &[&[1, 1, 2]], &["A|A|B"], reduced(&["1/~2"], &[])),
    case("A|A|B b=2 a=1", Small(1, 2), 2, &[&[1, 1, 2]], &["A|A|B"], reduced(&["1/~2"], &[])),
    case("A|A|B b=2 a=2", Small(2, 2), 2, &[&[1, 1, 2]], &["A|A|B"], reduced(&["1/1", "2/0"], &[])),
    case("A|~A|X", Small(0, 1), 2, &[&[1, -1, 2]], &["A|~A|X", "1|X"], reduced(&["2/0"], &[])),
    case("0|X|Y", Small(0, 1), 3, &[&[1, 1, 1], &[1, 2, 3]], &["A|A|A", "0|X|Y"], reduced(&["1/0"], &[&[2, 3]])),
    case(
        "1|A|A",
        Small(1, 1),
        3,
        &[&[1, 1, 2], &[2, 3, 3]],
        &["A|A|B", "1|A|A"],
        reduced(&["1/0", "2/1", "3/0"], &[]),
    ),
    case(
        "1|X|Y b=1",
        Small(1, 1),
        4,
        &[&[1, 1, 2], &[2, 3, 4]],
        &["A|A|B", "1|X|Y"],
        reduced(&["1/0", "2/1", "3/0", "4/0"], &[]),
    ),
    case("1|X|Y b=2 a=1", Small(1, 2), 3, &[&[1], &[1, 2, 3]], &["X", "1|X|Y"], reduced(&["1/1", "2/~3"], &[])),
    case(
        "1|X|Y b=2 a=2",
        Small(2, 2),
        4,
        &[&[1, 1, 2], &[1, 3, 4]],
        &["A|A|B", "1|X|Y"],
        reduced(&["1/1", "2/0", "3/~4"], &[]),
    ),
    case("A|A b=1", Small(0, 1), 1, &[&[1, 1]], &["A|A"], reduced(&["1/0"], &[])),
    case("A|A b=2 a=0", Small(0, 2), 1, &[&[1, 1]], &["A|A"], reduced(&[], &[])),
    case("A|A b=2 a>0", Small(1, 2), 1, &[&[1, 1]], &["A|A"], reduced(&["1/1"], &[])),
    case("A|~A", Small(0, 1), 1, &[&[1, -1]], &["A|~A"], reduced(&[], &[])),
    case("A|~A a=2", Small(2, 2), 1, &[&[1, -1]], &["A|~A", "constants"], Expect::Unsat),
    case("0|X", Small(0, 1), 2, &[&[1, 1, 1], &[1, 2]], &["A|A|A", "0|X", "X"], reduced(&["1/0"], &[])),
    case("1|X b=1", Small(1, 1), 2, &[&[1], &[1, 2]], &["X", "1|X"], reduced(&["1/1", "2/0"], &[])),
    case("1|X b=2 a<2", Small(1, 2), 2, &[&[1], &[1, 2]], &["X", "1|X"], reduced(&["1/1"], &[])),
    case(
        "1|X b=2 a=2",
        Small(2, 2),
        3,
        &[&[1, 1, 2], &[1, 3]],
        &["A|A|B", "1|X"],
        reduced(&["1/1", "2/0", "3/1"], &[]),
    ),
    case("X a=0", Small(0, 1), 1, &[&[1]], &["X"], reduced(&[], &[])),
    case("X a=1", Small(1, 2), 1, &[&[1]], &["X"], reduced(&["1/1"], &[])),
    case("X a=2", Small(2, 2), 1, &[&[1]], &["X"], Expect::Unsat),
    case("A|A|B corrected a=0", SmallExact(0, 2), 2, &[&[1, 1, 2]], &["A|A|B"], reduced(&[], &[&[1, 2, 3], &[1, 2, -3]])),
    case("1|X|Y corrected a=1", SmallExact(1, 2), 3, &[&[1], &[1, 2, 3]], &["X", "1|X|Y"], reduced(&["1/1"], &[&[-2, -3]])),
    case("A|A|X", TwoThree, 2, &[&[1, 1, 2]], &["A|A|X"], reduced(&["1/1"], &[])),
    case("A|~A|X", TwoThree, 2, &[&[1, -1, 2]], &["A|~A|X"], reduced(&["2/1"], &[])),
    case("0|X|Y", TwoThree, 2, &[&[1, 2]], &["0|X|Y"], reduced(&["1/1", "2/1"], &[])),
    case("1|1|X", TwoThree, 3, &[&[1, 1, 2], &[1, 1, 3]], &["A|A|X", "1|1|X"], reduced(&["1/1"], &[])),
    case("constant 1 becomes Z", TwoThree, 4, &[&[1, 1, 2], &[1, 3, 4]], &["A|A|X"], reduced(&["1/1"], &[&[5, 3, 4]])),
];

fn show(s: &Substitution) -> String {
    let value = match s.value {
        Term::Const(false) => "0".to_string(),
        Term::Const(true) => "1".to_string(),
        Term::Lit(l) if l < 0 => format!("~{}", -l),
        Term::Lit(l) => l.to_string(),
    };
    format!("{}/{}", s.var, value)
}

/// Runs one case and explains the first difference.
pub fn check(c: &RowCase) -> Result<(), String> {
    let phi = CnfFormula::new(c.var_count, c.input.iter().map(|cl| cl.to_vec()).collect()).map_err(|e| e.to_string())?;
    let out = match c.table {
        Small(a, b) => preprocess_small_bounds_verbatim(&phi, a, b),
        SmallExact(a, b) => preprocess_small_bounds(&phi, a, b),
        TwoThree => preprocess_two_three(&phi),
    }
    .map_err(|e| e.to_string())?;
    if out.fired() != c.fired {
        return Err(format!("fired {:?}, expected {:?}", out.fired(), c.fired));
    }
    match (&out, c.expect) {
        (Preprocessed::Unsatisfiable { .. }, Expect::Unsat) => Ok(()),
        (Preprocessed::Reduced { formula, substitutions, .. }, Expect::Reduced { subs, clauses }) => {
            let got: Vec<String> = substitutions.iter().map(show).collect();
            if got != subs {
                return Err(format!("substitutions {got:?}, expected {subs:?}"));
            }
            let want: Vec<Vec<Lit>> = clauses.iter().map(|cl| cl.to_vec()).collect();
            if formula.clauses != want {
                return Err(format!("clauses {:?}, expected {want:?}", formula.clauses));
            }
            Ok(())
        }
        _ => Err(format!("outcome {out:?} does not match {:?}", c.expect)),
    }
}
