//! Linearization of gluing data to the standard model.
//!
//! Each component of the cycle is a neighborhood of the zero section of
//! `O(-2)` over `P^1`, with fiber charts `(S, xi0)` at `S = 0`, `(T, xi_inf)` at
//! `T = 0` and the curve chart `(z, w) = (S, S xi0) = (1/T, T xi_inf)`. Edge `i`
//! glues the `S`-end of component `i + 1` (mod `n`) to the `T`-end of
//! component `i` by `T = t xi0 / G(S, xi0)`, `xi_inf = G(S, xi0) S`.
//!
//! A normalization is a unit `H_c = exp(2 pi i h_c)` per component with
//! `H_i^- o F_i = H_{i+1}^+ G_i`; in the coordinates `S/H, xi0 H, T H, xi_inf/H`
//! every edge is standard. Since `h^- o F_G` is linear in `h`, the equation is
//! solved by defect correction against the standard-model Cousin solver; the
//! defect loses at least one degree per pass.

mod chain;
mod cycle;
mod node;
mod verify;

pub use chain::{normalize_chain, ChainResult};
pub use cycle::{normalize_cycle, verify_cycle, CycleNormalForm};
pub use node::{normalize_node, two_form_factor};
pub use verify::{verify_conjugacy, ResidualBreakdown};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cocycle::{
    assemble_f0, node_term, reduce_to_vanishing, solve_cousin, solve_cousin_cycle, CocycleRhs,
    DomainGeometry, Extension,
};
use crate::diophantine::{divisor_of, UnitCircleConstant, TOL_RESONANCE};
use crate::error::{Error, Result};
use crate::series::{
    fiber_zero_to_laurent, laurent_to_fiber_chart, Complex, FiberEnd, LaurentPolynomial,
    LaurentSeries2, TruncatedSeries2, TOL_UNIT,
};

const ONE: Complex = Complex::new(1.0, 0.0);
const ZERO: Complex = Complex::new(0.0, 0.0);

/// One rational curve with a node: the single edge glues the component to itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeGluingData {
    pub t: UnitCircleConstant,
    #[serde(rename = "G")]
    pub g: TruncatedSeries2,
}

impl NodeGluingData {
    pub fn new(t: UnitCircleConstant, g: TruncatedSeries2) -> Result<Self> {
        check_unit(&g)?;
        Ok(Self { t, g })
    }

    pub fn order(&self) -> usize {
        self.g.order()
    }
}

/// `n >= 2` components; edge `i` carries `t_edge[i]` and `G_edge[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleGluingData {
    pub t_edge: Vec<UnitCircleConstant>,
    #[serde(rename = "G_edge")]
    pub g_edge: Vec<TruncatedSeries2>,
}

impl CycleGluingData {
    pub fn new(t_edge: Vec<UnitCircleConstant>, g_edge: Vec<TruncatedSeries2>) -> Result<Self> {
        if t_edge.len() < 2 || t_edge.len() != g_edge.len() {
            return Err(Error::Invalid(format!(
                "a cycle needs n >= 2 edges with one constant each, got {} and {}",
                t_edge.len(),
                g_edge.len()
            )));
        }
        let order = g_edge[0].order();
        if g_edge.iter().any(|g| g.order() != order) {
            return Err(Error::Invalid("edge series have different orders".into()));
        }
        for g in &g_edge {
            check_unit(g)?;
        }
        Ok(Self { t_edge, g_edge })
    }

    pub fn n(&self) -> usize {
        self.t_edge.len()
    }

    pub fn order(&self) -> usize {
        self.g_edge[0].order()
    }

    /// `prod t_edge` in edge order.
    pub fn product_t(&self) -> Complex {
        self.t_edge.iter().map(|t| t.t()).product()
    }

    fn edges(&self) -> Edges {
        Edges {
            t: self.t_edge.iter().map(|t| t.t()).collect(),
            g: self.g_edge.clone(),
        }
    }
}

fn check_unit(g: &TruncatedSeries2) -> Result<()> {
    let c = g.constant_term();
    if c.norm() <= TOL_UNIT {
        return Err(Error::NotAUnit { modulus: c.norm() });
    }
    if !g.is_finite() {
        return Err(Error::NonFinite {
            location: "gluing function".into(),
        });
    }
    Ok(())
}

/// `S' = a_c S`, `w' = c w` (so `xi0' = c xi0 / a_c`). Edge `i` becomes
/// `G'_i(S', xi0') = c (a_i / a_{i+1}) G_i(S'/a_{i+1}, a_{i+1} xi0'/c)`; the
/// constants `t` are unchanged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaling {
    pub fiber: Complex,
    pub base: Vec<Complex>,
    /// How the fiber scale was chosen.
    pub branch: String,
}

impl Scaling {
    pub fn identity(n: usize) -> Self {
        Self {
            fiber: ONE,
            base: vec![ONE; n],
            branch: "identity".into(),
        }
    }

    pub(crate) fn apply(&self, edges: &Edges) -> Edges {
        let n = edges.n();
        let g = (0..n)
            .map(|i| {
                let (ai, an) = (self.base[i], self.base[(i + 1) % n]);
                let mut gi = edges.g[i]
                    .scale_variables(ONE / an, an / self.fiber)
                    .scale(self.fiber * ai / an);
                // The scales were chosen to make this exactly 1.
                if (gi.constant_term() - ONE).norm() < 1e-12 {
                    gi.set(0, 0, ONE);
                }
                gi
            })
            .collect();
        Edges {
            t: edges.t.clone(),
            g,
        }
    }
}

/// Edge constants and gluing functions in the internal indexing.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Edges {
    pub t: Vec<Complex>,
    pub g: Vec<TruncatedSeries2>,
}

impl Edges {
    pub fn n(&self) -> usize {
        self.t.len()
    }

    pub fn order(&self) -> usize {
        self.g[0].order()
    }

    /// `(T, xi_inf) = (t xi0 / G, G S)` as series in `(S, xi0)`.
    pub fn maps(&self) -> Result<Vec<(TruncatedSeries2, TruncatedSeries2)>> {
        let n = self.order();
        let s = TruncatedSeries2::monomial(n, 1, 0, ONE);
        let xi = TruncatedSeries2::monomial(n, 0, 1, ONE);
        self.g
            .iter()
            .zip(&self.t)
            .map(|(g, t)| Ok(((&xi * &g.invert_unit()?).scale(*t), g * &s)))
            .collect()
    }
}

/// `h` on one component in all three charts, plus everything derived from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentChange {
    /// `h` in `(S, xi0)`.
    pub h_plus: TruncatedSeries2,
    /// `h` in `(z, w)`.
    pub h_middle: LaurentSeries2,
    /// `h` in `(T, xi_inf)`.
    pub h_minus: TruncatedSeries2,
    /// `H = exp(2 pi i h)` in `(S, xi0)` and `(T, xi_inf)`.
    pub big_h_plus: TruncatedSeries2,
    pub big_h_minus: TruncatedSeries2,
    /// `S / H`, `xi0 H` in `(S, xi0)`; `T H`, `xi_inf / H` in `(T, xi_inf)`.
    pub s_hat: TruncatedSeries2,
    pub xi0_hat: TruncatedSeries2,
    pub t_hat: TruncatedSeries2,
    pub xi_inf_hat: TruncatedSeries2,
}

impl ComponentChange {
    pub(crate) fn build(
        h_plus: TruncatedSeries2,
        h_middle: LaurentSeries2,
        h_minus: TruncatedSeries2,
    ) -> Result<Self> {
        let n = h_plus.order();
        let two_pi_i = Complex::new(0.0, 2.0 * PI);
        let big_h_plus = h_plus.scale(two_pi_i).exp()?;
        let big_h_minus = h_minus.scale(two_pi_i).exp()?;
        let first = TruncatedSeries2::monomial(n, 1, 0, ONE);
        let second = TruncatedSeries2::monomial(n, 0, 1, ONE);
        Ok(Self {
            s_hat: &first * &big_h_plus.invert_unit()?,
            xi0_hat: &second * &big_h_plus,
            t_hat: &first * &big_h_minus,
            xi_inf_hat: &second * &big_h_minus.invert_unit()?,
            h_plus,
            h_middle,
            h_minus,
            big_h_plus,
            big_h_minus,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Small divisor used at each order `1..=N`.
    pub divisors: Vec<f64>,
    /// Defect-correction passes run.
    pub iterations: usize,
    /// Max coefficient of the defect before each pass.
    pub defects: Vec<f64>,
    /// Largest `h` coefficient per component.
    pub h_max: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalFormResult {
    pub components: Vec<ComponentChange>,
    pub scaling: Scaling,
    /// [`verify_conjugacy`] of the result against its own input.
    pub residual: f64,
    pub diagnostics: Diagnostics,
}

/// `h_i^- o F_i - h_{i+1}^+` for the listed edges.
pub(crate) fn operator(
    maps: &[(TruncatedSeries2, TruncatedSeries2)],
    plus: &[TruncatedSeries2],
    minus: &[TruncatedSeries2],
    edges: impl Iterator<Item = usize>,
) -> Result<Vec<TruncatedSeries2>> {
    let n = plus.len();
    edges
        .map(|i| {
            let pulled = minus[i].compose(&maps[i].0, &maps[i].1)?;
            Ok(&pulled - &plus[(i + 1) % n])
        })
        .collect()
}

/// `log G / (2 pi i)` per edge; every constant term must be 1.
pub(crate) fn log_over_two_pi_i(edges: &Edges) -> Result<Vec<TruncatedSeries2>> {
    let inv = Complex::new(0.0, -1.0 / (2.0 * PI));
    edges.g.iter().map(|g| Ok(g.log()?.scale(inv))).collect()
}

/// One standard-model solve: `x = S, y = t xi0` on the `S`-end and
/// `x = xi_inf, y = T` on the `T`-end, so `t_+ = 1/t` and `t_- = 1`.
struct Increment {
    plus: Vec<TruncatedSeries2>,
    middle: Vec<LaurentSeries2>,
    minus: Vec<TruncatedSeries2>,
    divisors: Vec<f64>,
}

fn standard_solve(t: &[Complex], rho: &[TruncatedSeries2], geometry: &DomainGeometry) -> Result<Increment> {
    let n = t.len();
    let order = rho[0].order();
    let mut rhs: Vec<CocycleRhs> = Vec::with_capacity(n);
    let mut ext: Vec<Extension> = Vec::with_capacity(n);
    for i in 0..n {
        let fplus = fiber_zero_to_laurent(&rho[i], order, geometry.plus_annulus())?;
        let fminus = LaurentSeries2::zero(order, order, geometry.minus_annulus());
        let (r, e) = reduce_to_vanishing(&fplus, &fminus, ONE / t[i], ONE)?;
        rhs.push(r);
        ext.push(e);
    }
    let mut f0: Vec<TruncatedSeries2> = Vec::with_capacity(n);
    let mut a: Vec<Vec<LaurentPolynomial>> = Vec::with_capacity(n);
    let divisors;
    if n == 1 {
        let sol = solve_cousin(&rhs[0], geometry, ONE / t[0], ONE)?;
        f0.push(assemble_f0(&ext[0], &sol, order));
        a.push(sol.orders.iter().map(|o| o.a1.clone()).collect());
        divisors = sol.orders.iter().map(|o| o.divisor).collect();
    } else {
        let ts: Vec<(Complex, Complex)> = t.iter().map(|t| (ONE / t, ONE)).collect();
        let sol = solve_cousin_cycle(&rhs, &ts, geometry)?;
        for (i, e) in ext.iter().enumerate() {
            let mut f = node_term(&e.p, &e.q, e.r, 0, order);
            for (m, o) in sol.orders.iter().enumerate() {
                let et = &o.edges[i];
                f = &f + &node_term(&et.p, &et.q, et.r, m + 1, order);
            }
            f0.push(f);
        }
        for c in 0..n {
            a.push(sol.orders.iter().map(|o| o.components[c].clone()).collect());
        }
        divisors = sol.orders.iter().map(|o| o.divisor).collect();
    }
    let annulus = geometry.curve_annulus();
    let mut plus = Vec::with_capacity(n);
    let mut middle = Vec::with_capacity(n);
    let mut minus = Vec::with_capacity(n);
    for c in 0..n {
        let prev = (c + n - 1) % n;
        plus.push(&f0[prev].scale_variables(ONE, t[prev]) - &rho[prev]);
        minus.push(f0[c].swap_variables());
        let mut slices = vec![LaurentPolynomial::zero(order, annulus)];
        slices.extend(a[c].iter().cloned());
        middle.push(LaurentSeries2::from_slices(order, annulus, slices)?);
    }
    Ok(Increment {
        plus,
        middle,
        minus,
        divisors,
    })
}

/// Accumulated `h` in three charts per component.
pub(crate) struct Accumulated {
    pub plus: Vec<TruncatedSeries2>,
    pub middle: Vec<LaurentSeries2>,
    pub minus: Vec<TruncatedSeries2>,
    pub diagnostics: Diagnostics,
}

/// Defect correction for `h_i^- o F_i - h_{i+1}^+ = g_i` on every edge.
pub(crate) fn linearize(edges: &Edges, geometry: &DomainGeometry) -> Result<Accumulated> {
    let n = edges.n();
    let order = edges.order();
    torsion_guard(edges.t.iter().product(), order)?;
    let g = log_over_two_pi_i(edges)?;
    let maps = edges.maps()?;
    let annulus = geometry.curve_annulus();
    let mut acc = Accumulated {
        plus: vec![TruncatedSeries2::zero(order); n],
        middle: vec![LaurentSeries2::zero(order, order, annulus); n],
        minus: vec![TruncatedSeries2::zero(order); n],
        diagnostics: Diagnostics {
            divisors: Vec::new(),
            iterations: 0,
            defects: Vec::new(),
            h_max: Vec::new(),
        },
    };
    let gmax = g.iter().map(|x| x.max_abs()).fold(0.0, f64::max);
    for _ in 0..(2 * order + 2) {
        let lh = operator(&maps, &acc.plus, &acc.minus, 0..n)?;
        let rho: Vec<TruncatedSeries2> = g.iter().zip(&lh).map(|(a, b)| a - b).collect();
        let defect = rho.iter().map(|r| r.max_abs()).fold(0.0, f64::max);
        acc.diagnostics.defects.push(defect);
        if defect <= 1e-15 * (1.0 + gmax) {
            break;
        }
        let inc = standard_solve(&edges.t, &rho, geometry)?;
        if acc.diagnostics.divisors.is_empty() {
            acc.diagnostics.divisors = inc.divisors.clone();
        }
        for c in 0..n {
            acc.plus[c] = &acc.plus[c] + &inc.plus[c];
            acc.minus[c] = &acc.minus[c] + &inc.minus[c];
            acc.middle[c] = acc.middle[c].add(&inc.middle[c])?;
        }
        acc.diagnostics.iterations += 1;
    }
    acc.diagnostics.h_max = acc.plus.iter().map(|h| h.max_abs()).collect();
    Ok(acc)
}

/// `|1 - t^m| >= TOL_RESONANCE` for `m = 1..=order`.
pub(crate) fn torsion_guard(t: Complex, order: usize) -> Result<()> {
    for m in 1..=order {
        let divisor = divisor_of(t, m as u64);
        if !(divisor >= TOL_RESONANCE) {
            return Err(Error::Torsion { n: m, divisor });
        }
    }
    Ok(())
}

impl Accumulated {
    pub(crate) fn into_components(self) -> Result<(Vec<ComponentChange>, Diagnostics)> {
        let comps = self
            .plus
            .into_iter()
            .zip(self.middle)
            .zip(self.minus)
            .map(|((p, m), q)| ComponentChange::build(p, m, q))
            .collect::<Result<Vec<_>>>()?;
        Ok((comps, self.diagnostics))
    }
}

/// `h` in both fiber charts from global coefficients `c_{m,k}` (slice `m`, mode `k`).
pub(crate) fn fiber_charts(global: &LaurentSeries2, order: usize) -> Result<(TruncatedSeries2, TruncatedSeries2)> {
    Ok((
        laurent_to_fiber_chart(global, FiberEnd::Zero, order)?,
        laurent_to_fiber_chart(global, FiberEnd::Infinity, order)?,
    ))
}

pub(crate) fn zero_complex() -> Complex {
    ZERO
}
