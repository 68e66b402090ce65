//! Order-by-order solver for the additive Cousin problem on a node chart
//! `U0 = {(x, y)}` glued to curve charts `U1 = {(z, w)}`.
//!
//! At order `m` the unknowns are `a0_m(x, y) = p_m(x) + q_m(y) + r_m` and a
//! Laurent polynomial `a1_m(z)`, subject to
//! `t_+^{-m} a0_m - a1_m = b_{+,m} - h^+_m` on the `x`-side overlap and
//! `t_-^{-m} a0_m - a1_m = b_{-,m} - h^-_m` on the `y`-side overlap.
//! Only the zero Laurent mode involves a division, by `t_+^{-m} - t_-^{-m}`.

mod calibrate;
mod cycle;
mod node;

pub use calibrate::{calibrate_k, order_ratio, Calibration, CALIBRATION_SEED};
pub use cycle::{solve_cousin_cycle, CycleCocycleSolution, CycleOrder, EdgeTerms};
pub use node::{correction_terms, reduce_to_vanishing, solve_cousin, solve_order};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{Annulus, Complex, LaurentPolynomial, TruncatedSeries1, TruncatedSeries2};

/// Radii of the overlaps and the constants `R`, `M` of the estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainGeometry {
    pub eps: f64,
    pub delta: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "M")]
    pub m: f64,
    /// Every lower bound that went into `R`, by name.
    pub r_candidates: Vec<(String, f64)>,
}

pub const DEFAULT_EPS: f64 = 0.2;

impl DomainGeometry {
    /// `R = 1.1 * max(1/delta, 1/eps, 1/(eps * 5 eps/3))`, `M = 1 + 1e-6`.
    pub fn new(eps: f64, delta: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 0.5) || !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::Invalid(format!(
                "need 0 < eps < 1/2 and delta > 0, got eps={eps}, delta={delta}"
            )));
        }
        let r_candidates = vec![
            ("1/delta".to_string(), 1.0 / delta),
            ("1/eps".to_string(), 1.0 / eps),
            ("1/(eps*disk)".to_string(), 1.0 / (eps * 5.0 * eps / 3.0)),
        ];
        let r = 1.1 * r_candidates.iter().map(|c| c.1).fold(0.0, f64::max);
        Ok(Self {
            eps,
            delta,
            r,
            m: 1.0 + 1e-6,
            r_candidates,
        })
    }

    /// Raises `M` so that `sup b_nu <= M R^nu` holds with a 10% margin.
    /// `sups[nu - 1]` is the sup bound of order `nu`.
    pub fn with_input_sups(mut self, sups: &[f64]) -> Self {
        let worst = sups
            .iter()
            .enumerate()
            .map(|(i, s)| s / self.r.powi(i as i32 + 1))
            .fold(0.0, f64::max);
        self.m = (1.1 * worst).max(1.0 + 1e-6);
        self
    }

    /// `(eps, 2 eps)`, where the `x`-side right-hand sides live.
    pub fn plus_annulus(&self) -> Annulus {
        Annulus {
            inner: self.eps,
            outer: 2.0 * self.eps,
        }
    }

    /// `(1/(2 eps), 1/eps)`, where the `y`-side right-hand sides live.
    pub fn minus_annulus(&self) -> Annulus {
        Annulus {
            inner: 0.5 / self.eps,
            outer: 1.0 / self.eps,
        }
    }

    /// `(4 eps/3, 3/(4 eps))`, the shrunken curve chart used for sup bounds of `a1`.
    pub fn middle_annulus(&self) -> Annulus {
        Annulus {
            inner: 4.0 * self.eps / 3.0,
            outer: 0.75 / self.eps,
        }
    }

    /// Disk radius `5 eps / 3` for sup bounds of `p` and `q`.
    pub fn disk_radius(&self) -> f64 {
        5.0 * self.eps / 3.0
    }

    /// Hull `(eps, 1/eps)` on which `a1` is defined.
    pub fn curve_annulus(&self) -> Annulus {
        Annulus {
            inner: self.eps,
            outer: 1.0 / self.eps,
        }
    }
}

impl Default for DomainGeometry {
    fn default() -> Self {
        Self::new(DEFAULT_EPS, DEFAULT_EPS).expect("default geometry")
    }
}

/// `b_{+,nu}` and `b_{-,nu}` for `nu = 1..=N`, stored at index `nu - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocycleRhs {
    bplus: Vec<LaurentPolynomial>,
    bminus: Vec<LaurentPolynomial>,
}

impl CocycleRhs {
    pub fn new(bplus: Vec<LaurentPolynomial>, bminus: Vec<LaurentPolynomial>) -> Result<Self> {
        if bplus.len() != bminus.len() {
            return Err(Error::Invalid(format!(
                "{} plus orders vs {} minus orders",
                bplus.len(),
                bminus.len()
            )));
        }
        Ok(Self { bplus, bminus })
    }

    pub fn zero(order: usize, geometry: &DomainGeometry) -> Self {
        Self {
            bplus: vec![LaurentPolynomial::zero(order, geometry.plus_annulus()); order],
            bminus: vec![LaurentPolynomial::zero(order, geometry.minus_annulus()); order],
        }
    }

    pub fn order(&self) -> usize {
        self.bplus.len()
    }

    /// `b_{+,nu}`, `nu >= 1`.
    pub fn bplus(&self, nu: usize) -> &LaurentPolynomial {
        &self.bplus[nu - 1]
    }

    pub fn bminus(&self, nu: usize) -> &LaurentPolynomial {
        &self.bminus[nu - 1]
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self {
            bplus: self.bplus.iter().map(|b| b.scale(c)).collect(),
            bminus: self.bminus.iter().map(|b| b.scale(c)).collect(),
        }
    }

    /// `max(sup b_+, sup b_-)` per order.
    pub fn sups(&self) -> Vec<f64> {
        self.bplus
            .iter()
            .zip(&self.bminus)
            .map(|(p, m)| p.sup_bound().max(m.sup_bound()))
            .collect()
    }
}

/// Per-order output `(p, q, r, a1)` with the divisor used and sup bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderSolution {
    pub p: TruncatedSeries1,
    pub q: TruncatedSeries1,
    pub r: Complex,
    pub a1: LaurentPolynomial,
    pub divisor: f64,
}

impl OrderSolution {
    /// `sup a1` on the middle annulus.
    pub fn sup_a1(&self, geometry: &DomainGeometry) -> f64 {
        self.a1.sup_bound_on(&geometry.middle_annulus())
    }

    /// `sup |p| + sup |q| + |r|` on the bidisk of radius `5 eps / 3`.
    pub fn sup_a0(&self, geometry: &DomainGeometry) -> f64 {
        let rad = geometry.disk_radius();
        self.p.sup_bound(rad) + self.q.sup_bound(rad) + self.r.norm()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderDiagnostics {
    pub order: usize,
    pub divisor: f64,
    pub sup_a1: f64,
    pub sup_a0: f64,
    /// Radii the sups were taken on: the middle annulus and the disk radius.
    pub radii: (f64, f64, f64),
}

/// Orders `1..=N` of the node-case solution, stored at index `nu - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocycleSolution {
    pub orders: Vec<OrderSolution>,
    pub diagnostics: Vec<OrderDiagnostics>,
}

impl CocycleSolution {
    pub fn order(&self) -> usize {
        self.orders.len()
    }

    pub fn get(&self, nu: usize) -> &OrderSolution {
        &self.orders[nu - 1]
    }
}

/// The order-0 function `p(x) + q(y) + r` removed by [`reduce_to_vanishing`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extension {
    pub p: TruncatedSeries1,
    pub q: TruncatedSeries1,
    pub r: Complex,
}

/// `(p(x) + q(y) + r) (x y)^nu` as a series in `(x, y)`, boxed to `order`.
pub fn node_term(
    p: &TruncatedSeries1,
    q: &TruncatedSeries1,
    r: Complex,
    nu: usize,
    order: usize,
) -> TruncatedSeries2 {
    let mut s = TruncatedSeries2::zero(order);
    s.add_to(nu, nu, r);
    for (k, c) in p.coeffs().iter().enumerate().skip(1) {
        s.add_to(nu + k, nu, *c);
    }
    for (k, c) in q.coeffs().iter().enumerate().skip(1) {
        s.add_to(nu, nu + k, *c);
    }
    s
}

/// `F0 = G0 + sum_nu a0_nu(x, y) (x y)^nu` as a series in `(x, y)`.
pub fn assemble_f0(extension: &Extension, solution: &CocycleSolution, order: usize) -> TruncatedSeries2 {
    let mut f = node_term(&extension.p, &extension.q, extension.r, 0, order);
    for (i, o) in solution.orders.iter().enumerate() {
        f = &f + &node_term(&o.p, &o.q, o.r, i + 1, order);
    }
    f
}
