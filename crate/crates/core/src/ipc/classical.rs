use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::Formula;
use crate::program::{Op, Program};

pub const DEFAULT_ATOM_LIMIT: usize = 20;

/// A Boolean assignment, keyed by atom name.
pub type Assignment = BTreeMap<String, bool>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClassicalError {
    #[error("formula has {atoms} atoms; the truth-table limit is {limit}")]
    TooManyAtoms { atoms: usize, limit: usize },
}

/// Positions within a 64-bit word whose index has bit `i` clear.
const LOW: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// Truth vector of `f` over all assignments to its atoms; bit `a` is the
/// value under the assignment where atom `i` is true iff bit `i` of `a` is set.
fn truth_table(f: &Formula, limit: usize) -> Result<(Vec<String>, Vec<u64>, usize), ClassicalError> {
    let prog = Program::compile(&[f], &[]);
    let k = prog.atoms.len();
    if k > limit {
        return Err(ClassicalError::TooManyAtoms { atoms: k, limit });
    }
    let rows = 1usize << k;
    let words = rows.div_ceil(64);
    let tail = if rows >= 64 { u64::MAX } else { (1u64 << rows) - 1 };

    let mut slots: Vec<Vec<u64>> = Vec::with_capacity(prog.ops.len());
    for op in &prog.ops {
        let v: Vec<u64> = match *op {
            Op::Atom(i) => (0..words)
                .map(|w| {
                    if i < 6 {
                        !LOW[i]
                    } else if (w >> (i - 6)) & 1 == 1 {
                        u64::MAX
                    } else {
                        0
                    }
                })
                .collect(),
            Op::Bot => vec![0; words],
            Op::Top => vec![u64::MAX; words],
            Op::Neg(a) => slots[a].iter().map(|x| !x).collect(),
            Op::And(a, b) => zip(&slots[a], &slots[b], |x, y| x & y),
            Op::Or(a, b) => zip(&slots[a], &slots[b], |x, y| x | y),
            Op::Imp(a, b) => zip(&slots[a], &slots[b], |x, y| !x | y),
        };
        slots.push(v);
    }
    let mut root = slots.swap_remove(prog.roots[0]);
    if let Some(last) = root.last_mut() {
        *last &= tail;
    }
    Ok((prog.atoms, root, rows))
}

fn zip(a: &[u64], b: &[u64], f: impl Fn(u64, u64) -> u64) -> Vec<u64> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

pub fn classically_valid(f: &Formula) -> Result<bool, ClassicalError> {
    Ok(classical_countermodel(f)?.is_none())
}

/// First falsifying assignment in counting order (all-false first, the
/// first atom as the least significant bit), if any.
pub fn classical_countermodel(f: &Formula) -> Result<Option<Assignment>, ClassicalError> {
    classical_countermodel_with_limit(f, DEFAULT_ATOM_LIMIT)
}

pub fn classical_countermodel_with_limit(
    f: &Formula,
    limit: usize,
) -> Result<Option<Assignment>, ClassicalError> {
    let (atoms, table, rows) = truth_table(f, limit)?;
    for (w, word) in table.iter().enumerate() {
        let valid_bits = if (w + 1) * 64 <= rows { u64::MAX } else { (1u64 << (rows - w * 64)) - 1 };
        let falsified = !word & valid_bits;
        if falsified != 0 {
            let row = w * 64 + falsified.trailing_zeros() as usize;
            let assignment = atoms
                .iter()
                .enumerate()
                .map(|(i, a)| (a.clone(), (row >> i) & 1 == 1))
                .collect();
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}

/// Evaluate under one assignment; atoms missing from it count as false.
pub fn classical_eval(f: &Formula, assignment: &Assignment) -> bool {
    match f {
        Formula::Atom(a) => assignment.get(a).copied().unwrap_or(false),
        Formula::Bot => false,
        Formula::Top => true,
        Formula::Neg(a) => !classical_eval(a, assignment),
        Formula::And(a, b) => classical_eval(a, assignment) && classical_eval(b, assignment),
        Formula::Or(a, b) => classical_eval(a, assignment) || classical_eval(b, assignment),
        Formula::Imp(a, b) => !classical_eval(a, assignment) || classical_eval(b, assignment),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn assign(pairs: &[(&str, bool)]) -> Assignment {
        pairs.iter().map(|(a, v)| (a.to_string(), *v)).collect()
    }

    #[test]
    fn validity_examples() {
        assert!(classically_valid(&f("p | ~p")).unwrap());
        assert!(classically_valid(&f("~(p & ~p)")).unwrap());
        assert!(!classically_valid(&f("~p")).unwrap());
        assert!(classically_valid(&f("((p -> q) -> p) -> p")).unwrap());
        assert!(classically_valid(&f("T")).unwrap());
        assert!(!classically_valid(&f("F")).unwrap());
    }

    #[test]
    fn countermodel_examples() {
        assert_eq!(classical_countermodel(&f("~p")).unwrap(), Some(assign(&[("p", true)])));
        assert_eq!(classical_countermodel(&f("p | ~p")).unwrap(), None);
        assert_eq!(
            classical_countermodel(&f("~(p & q)")).unwrap(),
            Some(assign(&[("p", true), ("q", true)]))
        );
    }

    #[test]
    fn wide_formulas_cross_word_boundaries() {
        // 8 atoms: 256 rows over 4 words; the only falsifying row is all-true
        let names: Vec<String> = (0..8).map(|i| format!("a{i}")).collect();
        let conj = crate::formula::big_and(names.iter().map(|n| Formula::atom(n.clone())));
        let g = Formula::neg(conj);
        let cm = classical_countermodel(&g).unwrap().unwrap();
        assert!(cm.values().all(|&v| v));
        assert!(!classical_eval(&g, &cm));
    }

    #[test]
    fn atom_limit() {
        let g = f("a & b & c");
        assert_eq!(
            classical_countermodel_with_limit(&g, 2),
            Err(ClassicalError::TooManyAtoms { atoms: 3, limit: 2 })
        );
    }
}
