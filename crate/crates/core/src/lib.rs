//! Order-by-order normal forms for neighborhoods of cycles of rational curves
//! with a unitary, Diophantine normal bundle constant.
//!
//! The crate is organized bottom-up: [`series`] is the numeric kernel,
//! [`diophantine`] handles the rotation number, [`cocycle`] solves the
//! additive Cousin problems order by order, [`majorant`] certifies
//! convergence under an empirical constant, [`normalform`] runs the
//! linearization pipeline and [`geometry`] holds the example calculators.

pub mod cocycle;
pub mod diophantine;
pub mod error;
pub mod geometry;
pub mod majorant;
pub mod normalform;
pub mod series;

pub use error::{Error, Result};
pub use geometry::{standard_model, StandardModel};
pub use normalform::{
    normalize_chain, normalize_cycle, normalize_node, two_form_factor, verify_conjugacy, verify_cycle,
    CycleGluingData, NodeGluingData, NormalFormResult,
};
pub use series::{
    compose_chart, sup_bound, Annulus, ChartMap, Complex, FiberEnd, LaurentPolynomial,
    LaurentSeries2, Series, TruncatedSeries1, TruncatedSeries2,
};
