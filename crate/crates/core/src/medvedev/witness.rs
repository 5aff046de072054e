use serde::{Deserialize, Serialize};

use super::{Frame, FrameError, Valuation, ValuationMap, World};
use crate::formula::{parse, Formula};

/// A pointed valuation on `M_n` at which `formula` is not forced.
/// Construction checks the refutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefutationWitness {
    valuation: Valuation,
    world: World,
    formula: Formula,
}

impl RefutationWitness {
    pub fn new(valuation: Valuation, world: World, formula: Formula) -> Result<Self, FrameError> {
        if valuation.forces(world, &formula)? {
            return Err(FrameError::NotRefuted {
                formula: formula.to_string(),
            });
        }
        Ok(RefutationWitness {
            valuation,
            world,
            formula,
        })
    }

    pub fn n(&self) -> u32 {
        self.valuation.frame().n()
    }

    pub fn frame(&self) -> Frame {
        self.valuation.frame()
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    pub fn world(&self) -> World {
        self.world
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn to_json(&self) -> WitnessJson {
        WitnessJson {
            n: self.n(),
            valuation: self.valuation.to_map(),
            world: self.world.generators(),
            formula: self.formula.to_string(),
        }
    }

    /// Rebuild from JSON, re-checking that the world refutes the formula.
    pub fn from_json(json: &WitnessJson) -> Result<Self, WitnessParseError> {
        let frame = Frame::new(json.n)?;
        let valuation = Valuation::from_map(frame, &json.valuation)?;
        let world = frame.world(&json.world)?;
        let formula = parse(&json.formula)?;
        Ok(RefutationWitness::new(valuation, world, formula)?)
    }
}

/// `{"n", "valuation", "world", "formula"}`: worlds are sorted generator lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub n: u32,
    pub valuation: ValuationMap,
    pub world: Vec<usize>,
    pub formula: String,
}

#[derive(Debug, thiserror::Error)]
pub enum WitnessParseError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Parse(#[from] crate::formula::ParseError),
}
