//! Formulas flattened into a shared DAG of operations, evaluated bottom-up
//! over bitsets. Both the classical truth-table sweep and the Kripke
//! truth-set evaluator run on this representation.

use std::collections::HashMap;

use crate::formula::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Op {
    Atom(usize),
    Bot,
    Top,
    Neg(usize),
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Program {
    pub ops: Vec<Op>,
    pub atoms: Vec<String>,
    pub roots: Vec<usize>,
}

impl Program {
    /// Compile several formulas into one DAG. Atom slots follow `atoms`
    /// first, then any further atoms in first-occurrence order.
    pub fn compile(formulas: &[&Formula], atoms: &[String]) -> Program {
        let mut builder = Builder {
            ops: Vec::new(),
            index: HashMap::new(),
            atoms: atoms.to_vec(),
            atom_index: atoms.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect(),
        };
        let roots = formulas.iter().map(|f| builder.add(f)).collect();
        Program {
            ops: builder.ops,
            atoms: builder.atoms,
            roots,
        }
    }
}

struct Builder {
    ops: Vec<Op>,
    index: HashMap<Op, usize>,
    atoms: Vec<String>,
    atom_index: HashMap<String, usize>,
}

impl Builder {
    fn intern(&mut self, op: Op) -> usize {
        if let Some(&slot) = self.index.get(&op) {
            return slot;
        }
        let slot = self.ops.len();
        self.ops.push(op);
        self.index.insert(op, slot);
        slot
    }

    fn add(&mut self, f: &Formula) -> usize {
        let op = match f {
            Formula::Atom(name) => {
                let next = self.atoms.len();
                let idx = *self.atom_index.entry(name.clone()).or_insert(next);
                if idx == next {
                    self.atoms.push(name.clone());
                }
                Op::Atom(idx)
            }
            Formula::Bot => Op::Bot,
            Formula::Top => Op::Top,
            Formula::Neg(a) => Op::Neg(self.add(a)),
            Formula::And(a, b) => {
                let (a, b) = (self.add(a), self.add(b));
                Op::And(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.add(a), self.add(b));
                Op::Or(a, b)
            }
            Formula::Imp(a, b) => {
                let (a, b) = (self.add(a), self.add(b));
                Op::Imp(a, b)
            }
        };
        self.intern(op)
    }
}
