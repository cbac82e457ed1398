//! (1,1)-tangle diagrams and the state sum `⟨K⟩_N`.

pub mod contract;
pub mod diagram;
pub mod enumerate;
pub mod skeleton;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ComplexValue;

pub use contract::{state_sum, state_sum_with, ContractionOptions, Strategy};
pub use diagram::{figure_eight_diagram, trefoil_diagram, Direction, Event, Op, TangleDiagram};
pub use enumerate::{brute_force_sum, pruned_sum, PrunedSum, DEFAULT_BRUTE_FORCE_BUDGET};
pub use skeleton::{
    check_angle_conditions, derive_regions, AngleConditions, AngleSlot, Corner, Labeling, Region, RegionData,
    Skeleton,
};

/// One evaluation of the invariant, as emitted by the command-line tool.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantRecord {
    #[serde(rename = "N")]
    pub n: usize,
    pub value: ComplexValue,
    pub modulus: f64,
    pub log_modulus: f64,
}

impl InvariantRecord {
    pub fn new(n: usize, value: Complex64) -> Self {
        let modulus = value.norm();
        InvariantRecord {
            n,
            value: value.into(),
            modulus,
            log_modulus: modulus.ln(),
        }
    }
}
