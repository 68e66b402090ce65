//! Example calculators: standard models, nine-point constants, the homology
//! of the Levi-flat level sets and orbit density on `U(1)`.

mod homology;
mod leviflat;
mod ninepoint;

pub use homology::{h1_mapping_torus, h1_of_monodromy, smith_normal_form, HomologyH1, IntMatrix, MappingTorusClass, Snf};
pub use leviflat::{hr_gluing_check, orbit_density, HrReport, LeviFlatSample, OrbitDensity};
pub use ninepoint::{nine_point_t, solve_ninth_point, NinePointConfig, NinePointReport, TORSION_SEARCH};

use serde::{Deserialize, Serialize};

use crate::diophantine::UnitCircleConstant;
use crate::error::{Error, Result};
use crate::normalform::{CycleGluingData, NodeGluingData};
use crate::series::{Complex, TruncatedSeries2};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StandardModel {
    Node(NodeGluingData),
    Cycle(CycleGluingData),
}

/// `G = 1` on every edge; for a cycle the constants are `(1, ..., 1, t)`.
pub fn standard_model(t: UnitCircleConstant, n_components: usize, order: usize) -> Result<StandardModel> {
    match n_components {
        0 => Err(Error::Invalid("a model needs at least one component".into())),
        1 => Ok(StandardModel::Node(NodeGluingData::new(t, TruncatedSeries2::one(order))?)),
        n => {
            let mut ts = vec![UnitCircleConstant::new(Complex::new(1.0, 0.0))?; n];
            ts[n - 1] = t;
            Ok(StandardModel::Cycle(CycleGluingData::new(
                ts,
                vec![TruncatedSeries2::one(order); n],
            )?))
        }
    }
}
