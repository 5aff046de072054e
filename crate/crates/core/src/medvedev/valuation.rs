use std::collections::BTreeMap;

use super::bits;
use super::{Frame, FrameError, UpSet, World};
use crate::formula::Formula;
use crate::program::{Op, Program};

/// Atom name to sorted list of worlds, each world a sorted list of
/// 1-based generators. This is the `valuation` object of the witness JSON.
pub type ValuationMap = BTreeMap<String, Vec<Vec<usize>>>;

/// Assignment of up-sets of one frame to atoms.
///
/// In strict mode (the default) evaluating a formula with an atom outside
/// the domain is an error; in lenient mode such atoms are false everywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    frame: Frame,
    map: BTreeMap<String, UpSet>,
    strict: bool,
}

impl Valuation {
    pub fn new(frame: Frame) -> Valuation {
        Valuation {
            frame,
            map: BTreeMap::new(),
            strict: true,
        }
    }

    pub fn lenient(mut self) -> Valuation {
        self.strict = false;
        self
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn insert(&mut self, atom: impl Into<String>, set: UpSet) -> Result<(), FrameError> {
        let atom = atom.into();
        if set.n() != self.frame.n() {
            return Err(FrameError::FrameMismatch {
                expected: self.frame.n(),
                found: set.n(),
            });
        }
        if !set.is_upward_closed() {
            return Err(FrameError::NotUpwardClosed { atom });
        }
        self.map.insert(atom, set);
        Ok(())
    }

    /// Insert an arbitrary world set without the closure check. Only for
    /// building negative controls for [`persistence_check`].
    pub fn insert_unchecked(
        &mut self,
        atom: impl Into<String>,
        worlds: impl IntoIterator<Item = World>,
    ) -> Result<(), FrameError> {
        let mut set = vec![0u64; self.frame.words()];
        for w in worlds {
            self.frame.check(w)?;
            bits::insert(&mut set, w.mask());
        }
        self.map
            .insert(atom.into(), UpSet::from_bits_unchecked(self.frame.n(), set));
        Ok(())
    }

    pub fn with(mut self, atom: impl Into<String>, set: UpSet) -> Result<Valuation, FrameError> {
        self.insert(atom, set)?;
        Ok(self)
    }

    pub fn get(&self, atom: &str) -> Option<&UpSet> {
        self.map.get(atom)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &String> {
        self.map.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &UpSet)> {
        self.map.iter()
    }

    /// Worlds forcing `f`.
    pub fn truth_set(&self, f: &Formula) -> Result<UpSet, FrameError> {
        let prog = Program::compile(&[f], &[]);
        let sets = self.atom_sets(&prog)?;
        let refs: Vec<&[u64]> = sets.iter().map(|s| s.as_slice()).collect();
        let mut eval = TruthEvaluator::new(&prog, self.frame);
        eval.run(&refs);
        Ok(UpSet::from_bits_unchecked(
            self.frame.n(),
            eval.root(0).to_vec(),
        ))
    }

    pub fn forces(&self, w: World, f: &Formula) -> Result<bool, FrameError> {
        self.frame.check(w)?;
        Ok(self.truth_set(f)?.contains(w))
    }

    /// `f` holds at every world.
    pub fn validates(&self, f: &Formula) -> Result<bool, FrameError> {
        Ok(self.truth_set(f)?.len() == self.frame.world_count())
    }

    fn atom_sets(&self, prog: &Program) -> Result<Vec<Vec<u64>>, FrameError> {
        prog.atoms
            .iter()
            .map(|a| match self.map.get(a) {
                Some(set) => Ok(set.bits().to_vec()),
                None if !self.strict => Ok(vec![0; self.frame.words()]),
                None => Err(FrameError::UnknownAtom(a.clone())),
            })
            .collect()
    }

    pub fn to_map(&self) -> ValuationMap {
        self.map
            .iter()
            .map(|(atom, set)| {
                (
                    atom.clone(),
                    set.worlds().map(|w| w.generators()).collect(),
                )
            })
            .collect()
    }

    pub fn from_map(frame: Frame, map: &ValuationMap) -> Result<Valuation, FrameError> {
        let mut val = Valuation::new(frame);
        for (atom, worlds) in map {
            let ws = worlds
                .iter()
                .map(|gens| frame.world(gens))
                .collect::<Result<Vec<_>, _>>()?;
            let set = UpSet::from_worlds(&frame, ws).map_err(|e| match e {
                FrameError::NotUpwardClosed { .. } => FrameError::NotUpwardClosed {
                    atom: atom.clone(),
                },
                other => other,
            })?;
            val.insert(atom.clone(), set)?;
        }
        Ok(val)
    }
}

/// True iff the truth set of `f` is upward closed, i.e. forcing persists
/// along the order. Always holds when every atom is an up-set.
pub fn persistence_check(val: &Valuation, f: &Formula) -> Result<bool, FrameError> {
    let frame = val.frame();
    let truth = val.truth_set(f)?;
    Ok(frame
        .worlds()
        .filter(|&w| truth.contains(w))
        .all(|w| frame.above(w).all(|v| truth.contains(v))))
}

/// Bottom-up truth-set evaluation of a compiled program with a reusable
/// scratch buffer; one slot of `words` words per DAG node.
pub(crate) struct TruthEvaluator<'a> {
    prog: &'a Program,
    n: u32,
    words: usize,
    full: Vec<u64>,
    buf: Vec<u64>,
}

impl<'a> TruthEvaluator<'a> {
    pub fn new(prog: &'a Program, frame: Frame) -> Self {
        let words = frame.words();
        TruthEvaluator {
            prog,
            n: frame.n(),
            words,
            full: bits::full(frame.n()),
            buf: vec![0; words * prog.ops.len()],
        }
    }

    pub fn run(&mut self, atom_sets: &[&[u64]]) {
        let words = self.words;
        for (slot, op) in self.prog.ops.iter().enumerate() {
            let (done, rest) = self.buf.split_at_mut(slot * words);
            let out = &mut rest[..words];
            let get = |i: usize| &done[i * words..(i + 1) * words];
            match *op {
                Op::Atom(a) => out.copy_from_slice(atom_sets[a]),
                Op::Bot => out.fill(0),
                Op::Top => out.copy_from_slice(&self.full),
                Op::And(a, b) => {
                    for ((o, x), y) in out.iter_mut().zip(get(a)).zip(get(b)) {
                        *o = x & y;
                    }
                }
                Op::Or(a, b) => {
                    for ((o, x), y) in out.iter_mut().zip(get(a)).zip(get(b)) {
                        *o = x | y;
                    }
                }
                // w ⊩ a -> b iff no world above w forces a but not b
                Op::Imp(a, b) => {
                    for ((o, x), y) in out.iter_mut().zip(get(a)).zip(get(b)) {
                        *o = x & !y;
                    }
                    bits::down_close(out, self.n);
                    for (o, f) in out.iter_mut().zip(&self.full) {
                        *o = !*o & f;
                    }
                }
                Op::Neg(a) => {
                    out.copy_from_slice(get(a));
                    bits::down_close(out, self.n);
                    for (o, f) in out.iter_mut().zip(&self.full) {
                        *o = !*o & f;
                    }
                }
            }
        }
    }

    pub fn root(&self, r: usize) -> &[u64] {
        let slot = self.prog.roots[r];
        &self.buf[slot * self.words..(slot + 1) * self.words]
    }

    pub fn full(&self) -> &[u64] {
        &self.full
    }
}
