use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::encode::{AngleSpec, Monomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Normalize,
    Majorant,
    Diophantine,
    Ninepoints,
    Homology,
    Density,
    Twoform,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Normalize => "normalize",
            Command::Majorant => "majorant",
            Command::Diophantine => "diophantine",
            Command::Ninepoints => "ninepoints",
            Command::Homology => "homology",
            Command::Density => "density",
            Command::Twoform => "twoform",
        }
    }
}

/// Full job file for `cyclenf run`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    pub input: Value,
    #[serde(default)]
    pub order: Option<usize>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase", deny_unknown_fields)]
pub enum NormalizeInput {
    Node {
        t: AngleSpec,
        #[serde(rename = "G")]
        g: Vec<Monomial>,
    },
    Cycle {
        t_edge: Vec<AngleSpec>,
        #[serde(rename = "G_edge")]
        g_edge: Vec<Vec<Monomial>>,
    },
    Standard {
        t: AngleSpec,
        n_components: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MajorantInput {
    pub angle: AngleSpec,
    /// Skips calibration when given.
    #[serde(rename = "K", default)]
    pub k: Option<f64>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Random unit-sup right-hand sides checked for domination.
    #[serde(default)]
    pub instances: Option<usize>,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiophantineInput {
    pub angle: AngleSpec,
    #[serde(rename = "A")]
    pub a: f64,
    pub alpha: f64,
    pub n_max: u64,
    /// Partial quotients used for a bounded-type certificate.
    #[serde(default)]
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum NinePointsInput {
    Product {
        n_components: usize,
        params: Vec<[f64; 2]>,
        degree_split: Vec<usize>,
    },
    Complete {
        target: [f64; 2],
        eight: Vec<[f64; 2]>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomologyInput {
    #[serde(default)]
    pub n: Option<i64>,
    #[serde(default)]
    pub monodromy: Option<[[i64; 2]; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityInput {
    pub t: AngleSpec,
    pub eps: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoFormInput {
    pub t: AngleSpec,
    #[serde(rename = "G")]
    pub g: Vec<Monomial>,
}
