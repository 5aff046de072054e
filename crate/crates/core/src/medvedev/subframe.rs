use std::collections::BTreeMap;

use super::{Frame, FrameError, RefutationWitness, UpSet, Valuation, World};
use crate::formula::Formula;

/// The isomorphism between `↑⋀I` in `M_n` and `M_|I|`: the `k`-th smallest
/// generator of `I` becomes generator `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reindex {
    source: Frame,
    target: Frame,
    /// `gens[k]` is the 0-based source generator for target generator `k`.
    gens: Vec<u32>,
}

impl Reindex {
    pub fn source(&self) -> Frame {
        self.source
    }

    pub fn target(&self) -> Frame {
        self.target
    }

    /// Old 1-based generator to new 1-based generator.
    pub fn mapping(&self) -> BTreeMap<usize, usize> {
        self.gens
            .iter()
            .enumerate()
            .map(|(new, &old)| (old as usize + 1, new + 1))
            .collect()
    }

    /// Image of a source world lying in the generated subframe.
    pub fn to_sub(&self, w: World) -> Option<World> {
        let mut mask = 0u32;
        let mut seen = 0u32;
        for (new, &old) in self.gens.iter().enumerate() {
            if w.mask() >> old & 1 == 1 {
                mask |= 1 << new;
                seen |= 1 << old;
            }
        }
        if seen != w.mask() {
            return None;
        }
        World::from_mask(mask).ok()
    }

    pub fn from_sub(&self, w: World) -> World {
        let mask = self
            .gens
            .iter()
            .enumerate()
            .filter(|(new, _)| w.mask() >> new & 1 == 1)
            .fold(0u32, |acc, (_, &old)| acc | 1 << old);
        World::from_mask(mask).expect("non-empty world maps to non-empty world")
    }

    /// Restrict a valuation on the source frame to the generated subframe.
    pub fn restrict(&self, val: &Valuation) -> Result<Valuation, FrameError> {
        let mut out = Valuation::new(self.target);
        for (atom, set) in val.iter() {
            let worlds = set.worlds().filter_map(|w| self.to_sub(w));
            out.insert(atom.clone(), UpSet::from_worlds(&self.target, worlds)?)?;
        }
        Ok(out)
    }
}

/// `↑w` as a frame of its own, plus the reindexing isomorphism.
pub fn generated_subframe(frame: &Frame, w: World) -> Result<(Frame, Reindex), FrameError> {
    frame.check(w)?;
    let gens: Vec<u32> = (0..frame.n()).filter(|i| w.mask() >> i & 1 == 1).collect();
    let target = Frame::new(gens.len() as u32)?;
    Ok((
        target,
        Reindex {
            source: *frame,
            target,
            gens,
        },
    ))
}

/// `M_m` (or `M_n`) placed on a block of consecutive generators of
/// `M_{m+n}`; its image is the generated subframe above the block's meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Embedding {
    source: Frame,
    target: Frame,
    offset: u32,
}

impl Embedding {
    pub fn source(&self) -> Frame {
        self.source
    }

    pub fn target(&self) -> Frame {
        self.target
    }

    pub fn map(&self, w: World) -> World {
        World::from_mask(w.mask() << self.offset).expect("shift keeps the world non-empty")
    }

    pub fn image(&self) -> Vec<World> {
        self.source.worlds().map(|w| self.map(w)).collect()
    }

    pub fn transport(&self, set: &UpSet) -> Result<UpSet, FrameError> {
        UpSet::from_worlds(&self.target, set.worlds().map(|w| self.map(w)))
    }
}

/// Embed `M_m` on generators `1..m` and `M_n` on `m+1..m+n` of `M_{m+n}`.
pub fn disjoint_embed(m: u32, n: u32) -> Result<(Embedding, Embedding), FrameError> {
    let left = Frame::new(m)?;
    let right = Frame::new(n)?;
    let target = Frame::new(m + n)?;
    Ok((
        Embedding {
            source: left,
            target,
            offset: 0,
        },
        Embedding {
            source: right,
            target,
            offset: m,
        },
    ))
}

/// Glue refutations of `φ` on `M_m` and `ψ` on `M_n` into a refutation of
/// `φ | ψ` on `M_{m+n}`. Atoms are false outside the two embedded blocks;
/// the refuting world is the meet of the two transported worlds.
pub fn dp_countermodel(
    left: &RefutationWitness,
    right: &RefutationWitness,
) -> Result<RefutationWitness, FrameError> {
    let (emb_l, emb_r) = disjoint_embed(left.n(), right.n())?;
    let target = emb_l.target();
    let mut val = Valuation::new(target);
    let atoms: std::collections::BTreeSet<&String> =
        left.valuation().atoms().chain(right.valuation().atoms()).collect();
    for atom in atoms {
        let mut worlds = Vec::new();
        if let Some(set) = left.valuation().get(atom) {
            worlds.extend(emb_l.transport(set)?.worlds());
        }
        if let Some(set) = right.valuation().get(atom) {
            worlds.extend(emb_r.transport(set)?.worlds());
        }
        val.insert(atom.clone(), UpSet::closure_of(&target, worlds)?)?;
    }
    let world = emb_l.map(left.world()).meet(emb_r.map(right.world()));
    let formula = Formula::or(left.formula().clone(), right.formula().clone());
    RefutationWitness::new(val, world, formula).map_err(|e| match e {
        FrameError::NotRefuted { formula } => {
            FrameError::SelfCheck(format!("combined valuation forces `{formula}`"))
        }
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn subframe_of_m4() {
        let m4 = Frame::new(4).unwrap();
        let (sub, re) = generated_subframe(&m4, m4.world(&[2, 3]).unwrap()).unwrap();
        assert_eq!(sub.n(), 2);
        assert_eq!(re.mapping(), BTreeMap::from([(2, 1), (3, 2)]));

        let (sub, re) = generated_subframe(&m4, m4.bottom()).unwrap();
        assert_eq!(sub.n(), 4);
        assert!(re.mapping().iter().all(|(a, b)| a == b));

        let m3 = Frame::new(3).unwrap();
        let (sub, _) = generated_subframe(&m3, m3.world(&[1]).unwrap()).unwrap();
        assert_eq!(sub.n(), 1);
    }

    #[test]
    fn reindex_round_trip_and_outside_worlds() {
        let m4 = Frame::new(4).unwrap();
        let (_, re) = generated_subframe(&m4, m4.world(&[1, 3, 4]).unwrap()).unwrap();
        let w = m4.world(&[3, 4]).unwrap();
        let sub = re.to_sub(w).unwrap();
        assert_eq!(sub.generators(), vec![2, 3]);
        assert_eq!(re.from_sub(sub), w);
        assert_eq!(re.to_sub(m4.world(&[2]).unwrap()), None);
    }

    #[test]
    fn embeddings() {
        let (l, r) = disjoint_embed(1, 1).unwrap();
        assert_eq!(l.image().iter().map(|w| w.generators()).collect::<Vec<_>>(), vec![vec![1]]);
        assert_eq!(r.image().iter().map(|w| w.generators()).collect::<Vec<_>>(), vec![vec![2]]);

        let (l, r) = disjoint_embed(2, 1).unwrap();
        let img: Vec<Vec<usize>> = l.image().iter().map(|w| w.generators()).collect();
        assert_eq!(img, vec![vec![1], vec![2], vec![1, 2]]);
        let bottom = l.target().bottom();
        assert!(!l.image().contains(&bottom));
        assert!(!r.image().contains(&bottom));
        assert!(l.image().iter().all(|w| !r.image().contains(w)));
    }

    fn m1_witness(formula: &str, p_true: bool) -> RefutationWitness {
        let m1 = Frame::new(1).unwrap();
        let set = if p_true { UpSet::full(&m1) } else { UpSet::empty(&m1) };
        let v = Valuation::new(m1).with("p", set).unwrap();
        RefutationWitness::new(v, m1.bottom(), parse(formula).unwrap()).unwrap()
    }

    #[test]
    fn dp_glues_weak_excluded_middle() {
        let left = m1_witness("~p", true);
        let right = m1_witness("~~p", false);
        let combined = dp_countermodel(&left, &right).unwrap();
        assert_eq!(combined.n(), 2);
        assert_eq!(combined.world().generators(), vec![1, 2]);
        assert_eq!(combined.formula(), &parse("~p | ~~p").unwrap());
        assert_eq!(combined.valuation().to_map()["p"], vec![vec![1]]);
    }

    #[test]
    fn dp_with_distinct_atoms() {
        let m1 = Frame::new(1).unwrap();
        let vp = Valuation::new(m1).with("p", UpSet::empty(&m1)).unwrap();
        let vq = Valuation::new(m1).with("q", UpSet::empty(&m1)).unwrap();
        let wp = RefutationWitness::new(vp, m1.bottom(), parse("p").unwrap()).unwrap();
        let wq = RefutationWitness::new(vq, m1.bottom(), parse("q").unwrap()).unwrap();
        let combined = dp_countermodel(&wp, &wq).unwrap();
        for w in combined.frame().worlds() {
            assert!(!combined.valuation().forces(w, combined.formula()).unwrap());
        }
    }
}
