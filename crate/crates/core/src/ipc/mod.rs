//! Decision procedures for intuitionistic and classical propositional logic.
//!
//! [`ipc_provable`] runs a contraction-free sequent calculus (G4ip). Every
//! rule premise is smaller than its conclusion in the multiset ordering, so
//! search terminates without loop checking. Left implications are split by
//! the shape of their antecedent; the only non-invertible steps are right
//! disjunction and the nested-implication rule `(C -> D) -> B`, which are
//! tried last and in a fixed order.
//!
//! [`classically_valid`] and [`classical_countermodel`] sweep all Boolean
//! assignments, 64 at a time.

mod classical;

use std::collections::HashMap;

use thiserror::Error;

use crate::formula::Formula;

pub use classical::{
    classical_countermodel, classical_countermodel_with_limit, classical_eval, classically_valid,
    Assignment, ClassicalError,
    DEFAULT_ATOM_LIMIT,
};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IpcError {
    /// The search gave up; the answer is unknown, not negative.
    #[error("proof search exceeded its budget of {budget} sequent expansions")]
    BudgetExceeded { budget: u64 },
}

pub fn ipc_provable(f: &Formula) -> Result<bool, IpcError> {
    Prover::new(DEFAULT_BUDGET).prove_formula(f)
}

pub fn ipc_provable_with_budget(f: &Formula, budget: u64) -> Result<bool, IpcError> {
    Prover::new(budget).prove_formula(f)
}

type Id = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Node {
    Atom(u32),
    Bot,
    Top,
    And(Id, Id),
    Or(Id, Id),
    Imp(Id, Id),
}

/// A single query's prover state: hash-consed formula nodes and a memo of
/// sequents already decided. Not shared between queries.
struct Prover {
    nodes: Vec<Node>,
    interned: HashMap<Node, Id>,
    atom_ids: HashMap<String, u32>,
    memo: HashMap<(Vec<Id>, Id), bool>,
    steps: u64,
    budget: u64,
}

impl Prover {
    fn new(budget: u64) -> Self {
        Prover {
            nodes: Vec::new(),
            interned: HashMap::new(),
            atom_ids: HashMap::new(),
            memo: HashMap::new(),
            steps: 0,
            budget,
        }
    }

    fn intern(&mut self, node: Node) -> Id {
        if let Some(&id) = self.interned.get(&node) {
            return id;
        }
        let id = self.nodes.len() as Id;
        self.nodes.push(node);
        self.interned.insert(node, id);
        id
    }

    fn lower(&mut self, f: &Formula) -> Id {
        let node = match f {
            Formula::Atom(name) => {
                let next = self.atom_ids.len() as u32;
                Node::Atom(*self.atom_ids.entry(name.clone()).or_insert(next))
            }
            Formula::Bot => Node::Bot,
            Formula::Top => Node::Top,
            Formula::Neg(a) => {
                let a = self.lower(a);
                let bot = self.intern(Node::Bot);
                Node::Imp(a, bot)
            }
            Formula::And(a, b) => Node::And(self.lower(a), self.lower(b)),
            Formula::Or(a, b) => Node::Or(self.lower(a), self.lower(b)),
            Formula::Imp(a, b) => Node::Imp(self.lower(a), self.lower(b)),
        };
        self.intern(node)
    }

    fn prove_formula(&mut self, f: &Formula) -> Result<bool, IpcError> {
        let goal = self.lower(f);
        self.prove(Vec::new(), goal)
    }

    fn tick(&mut self) -> Result<(), IpcError> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(IpcError::BudgetExceeded {
                budget: self.budget,
            });
        }
        Ok(())
    }

    fn prove(&mut self, mut ctx: Vec<Id>, goal: Id) -> Result<bool, IpcError> {
        self.tick()?;
        if !self.saturate(&mut ctx) {
            return Ok(true);
        }

        match self.nodes[goal as usize] {
            Node::Top => return Ok(true),
            Node::And(a, b) => {
                return Ok(self.prove(ctx.clone(), a)? && self.prove(ctx, b)?);
            }
            Node::Imp(a, b) => {
                insert_sorted(&mut ctx, a);
                return self.prove(ctx, b);
            }
            _ => {}
        }
        if ctx.binary_search(&goal).is_ok() {
            return Ok(true);
        }

        // left disjunction is invertible: split on the first one
        if let Some(pos) = ctx
            .iter()
            .position(|&id| matches!(self.nodes[id as usize], Node::Or(..)))
        {
            let Node::Or(a, b) = self.nodes[ctx[pos] as usize] else {
                unreachable!()
            };
            let mut rest = ctx;
            rest.remove(pos);
            let mut left = rest.clone();
            insert_sorted(&mut left, a);
            if !self.prove(left, goal)? {
                return Ok(false);
            }
            insert_sorted(&mut rest, b);
            return self.prove(rest, goal);
        }

        let key = (ctx, goal);
        if let Some(&known) = self.memo.get(&key) {
            return Ok(known);
        }
        let (ctx, goal) = key;
        let result = self.prove_noninvertible(&ctx, goal)?;
        self.memo.insert((ctx, goal), result);
        Ok(result)
    }

    fn prove_noninvertible(&mut self, ctx: &[Id], goal: Id) -> Result<bool, IpcError> {
        if let Node::Or(a, b) = self.nodes[goal as usize] {
            if self.prove(ctx.to_vec(), a)? || self.prove(ctx.to_vec(), b)? {
                return Ok(true);
            }
        }
        // (C -> D) -> B, Γ ⊢ G  from  D -> B, Γ ⊢ C -> D  and  B, Γ ⊢ G
        for (pos, &id) in ctx.iter().enumerate() {
            let Node::Imp(ante, b) = self.nodes[id as usize] else {
                continue;
            };
            let Node::Imp(_, d) = self.nodes[ante as usize] else {
                continue;
            };
            let mut rest = ctx.to_vec();
            rest.remove(pos);
            let db = self.intern(Node::Imp(d, b));
            let mut first = rest.clone();
            insert_sorted(&mut first, db);
            if !self.prove(first, ante)? {
                continue;
            }
            insert_sorted(&mut rest, b);
            if self.prove(rest, goal)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Apply the invertible, non-branching left rules until none fires.
    /// Returns `false` if the context became inconsistent (contains `F`).
    fn saturate(&mut self, ctx: &mut Vec<Id>) -> bool {
        loop {
            let mut changed = false;
            let mut i = 0;
            while i < ctx.len() {
                let id = ctx[i];
                let replacement: Option<Vec<Id>> = match self.nodes[id as usize] {
                    Node::Bot => return false,
                    Node::Top => Some(vec![]),
                    Node::And(a, b) => Some(vec![a, b]),
                    Node::Imp(ante, b) => match self.nodes[ante as usize] {
                        Node::Top => Some(vec![b]),
                        Node::Bot => Some(vec![]),
                        Node::Atom(_) if ctx.binary_search(&ante).is_ok() => Some(vec![b]),
                        Node::And(c, d) => {
                            let inner = self.intern(Node::Imp(d, b));
                            Some(vec![self.intern(Node::Imp(c, inner))])
                        }
                        Node::Or(c, d) => {
                            let left = self.intern(Node::Imp(c, b));
                            let right = self.intern(Node::Imp(d, b));
                            Some(vec![left, right])
                        }
                        _ => None,
                    },
                    _ => None,
                };
                match replacement {
                    Some(new) => {
                        ctx.remove(i);
                        for n in new {
                            insert_sorted(ctx, n);
                        }
                        changed = true;
                        i = 0;
                    }
                    None => i += 1,
                }
            }
            if !changed {
                return true;
            }
        }
    }
}

fn insert_sorted(ctx: &mut Vec<Id>, id: Id) {
    if let Err(pos) = ctx.binary_search(&id) {
        ctx.insert(pos, id);
    }
}
