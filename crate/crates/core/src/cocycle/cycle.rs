//! Cycle of `n` components. Edge `i` is a node chart whose `x`-side sits on
//! component `i + 1` (mod `n`) and whose `y`-side sits on component `i`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::node::correction_terms;
use super::{CocycleRhs, DomainGeometry};
use crate::diophantine::{divisor_of, TOL_RESONANCE};
use crate::error::{Error, Result};
use crate::series::{Annulus, Complex, LaurentPolynomial, TruncatedSeries1};

const ONE: Complex = Complex::new(1.0, 0.0);

/// `p(x) + q(y) + r` on one edge at one order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeTerms {
    pub p: TruncatedSeries1,
    pub q: TruncatedSeries1,
    pub r: Complex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleOrder {
    pub edges: Vec<EdgeTerms>,
    /// `a_{c}` on each component's curve chart.
    pub components: Vec<LaurentPolynomial>,
    /// `|1 - prod_i (t_{-,i} / t_{+,i})^m|`.
    pub divisor: f64,
}

/// Orders `1..=N`, stored at index `m - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleCocycleSolution {
    pub n_components: usize,
    pub orders: Vec<CycleOrder>,
}

impl CycleCocycleSolution {
    pub fn get(&self, m: usize) -> &CycleOrder {
        &self.orders[m - 1]
    }
}

/// Solves the coupled system around the cycle. `rhs[i]` and `t[i] = (t_+, t_-)`
/// belong to edge `i`. Nonzero modes are read off edge by edge; the zero
/// modes form one `2n x 2n` system per order, solved by LU.
pub fn solve_cousin_cycle(
    rhs: &[CocycleRhs],
    t: &[(Complex, Complex)],
    geometry: &DomainGeometry,
) -> Result<CycleCocycleSolution> {
    let n = rhs.len();
    if n < 2 || t.len() != n {
        return Err(Error::Invalid(format!(
            "a cycle needs at least 2 edges with matching constants, got {n} and {}",
            t.len()
        )));
    }
    let order = rhs[0].order();
    if rhs.iter().any(|r| r.order() != order) {
        return Err(Error::Invalid("edges carry different orders".into()));
    }
    let ratio: Complex = t.iter().map(|(tp, tm)| tm / tp).product();
    let hull = geometry.curve_annulus();
    let mut orders: Vec<CycleOrder> = Vec::with_capacity(order);
    for m in 1..=order {
        let divisor = divisor_of(ratio, m as u64);
        if !(divisor >= TOL_RESONANCE) {
            return Err(Error::Torsion { n: m, divisor });
        }
        let mut eff_plus = Vec::with_capacity(n);
        let mut eff_minus = Vec::with_capacity(n);
        for i in 0..n {
            let (hp, hm) = correction_terms(
                m,
                orders.iter().map(|o| (&o.edges[i].p, &o.edges[i].q)),
                t[i].0,
                t[i].1,
                geometry,
            )?;
            eff_plus.push(rhs[i].bplus(m).sub(&hp)?);
            eff_minus.push(rhs[i].bminus(m).sub(&hm)?);
        }
        orders.push(solve_cycle_order(m, &eff_plus, &eff_minus, t, hull, divisor)?);
    }
    Ok(CycleCocycleSolution {
        n_components: n,
        orders,
    })
}

fn solve_cycle_order(
    m: usize,
    bplus: &[LaurentPolynomial],
    bminus: &[LaurentPolynomial],
    t: &[(Complex, Complex)],
    hull: Annulus,
    divisor: f64,
) -> Result<CycleOrder> {
    let n = bplus.len();
    let l = bplus
        .iter()
        .chain(bminus)
        .map(|b| b.bandwidth())
        .max()
        .unwrap_or(0);
    let mut comps = vec![LaurentPolynomial::zero(l, hull); n];
    for c in 0..n {
        let prev = (c + n - 1) % n;
        for k in 1..=l as i64 {
            comps[c].set(k, -bminus[c].coeff(k))?;
            comps[c].set(-k, -bplus[prev].coeff(-k))?;
        }
    }
    let mut edges = Vec::with_capacity(n);
    for i in 0..n {
        let next = (i + 1) % n;
        let tp_m = t[i].0.powi(m as i32);
        let tm_m = t[i].1.powi(m as i32);
        let mut p = TruncatedSeries1::zero(l);
        let mut q = TruncatedSeries1::zero(l);
        for k in 1..=l as i64 {
            p.set(k as usize, tp_m * (bplus[i].coeff(k) + comps[next].coeff(k)));
            q.set(k as usize, tm_m * (bminus[i].coeff(-k) + comps[i].coeff(-k)));
        }
        edges.push(EdgeTerms {
            p,
            q,
            r: Complex::new(0.0, 0.0),
        });
    }
    // Unknowns r_0..r_{n-1}, a_0..a_{n-1}; rows: x-side then y-side of each edge.
    let mut mat = DMatrix::<Complex>::zeros(2 * n, 2 * n);
    let mut rhs = DVector::<Complex>::zeros(2 * n);
    for i in 0..n {
        let next = (i + 1) % n;
        mat[(2 * i, i)] = ONE / t[i].0.powi(m as i32);
        mat[(2 * i, n + next)] = -ONE;
        rhs[2 * i] = bplus[i].coeff(0);
        mat[(2 * i + 1, i)] = ONE / t[i].1.powi(m as i32);
        mat[(2 * i + 1, n + i)] = -ONE;
        rhs[2 * i + 1] = bminus[i].coeff(0);
    }
    let sol = mat
        .lu()
        .solve(&rhs)
        .ok_or(Error::Torsion { n: m, divisor })?;
    for i in 0..n {
        edges[i].r = sol[i];
        comps[i].set(0, sol[n + i])?;
    }
    Ok(CycleOrder {
        edges,
        components: comps,
        divisor,
    })
}
