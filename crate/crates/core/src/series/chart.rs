//! Re-expansion of two-variable series into Laurent charts `(z, w)`.
//!
//! | map | substitution | image of the monomial `x^i y^j` |
//! |---|---|---|
//! | `NodePlus { t_plus }` | `x = z`, `y = w / (t_plus z)` | `t_plus^{-j} z^{i-j} w^j` |
//! | `NodeMinus { t_minus }` | `y = 1/z`, `x = z w / t_minus` | `t_minus^{-i} z^{i-j} w^i` |
//! | `FiberZero` | `S = z`, `xi0 = w / z` | `z^{i-j} w^j` |
//! | `FiberInfinity` | `T = 1/z`, `xi_inf = z w` | `z^{j-i} w^j` |

use serde::{Deserialize, Serialize};

use super::bivariate::{powers, TruncatedSeries2};
use super::laurent::{Annulus, LaurentSeries2};
use super::{Complex, ONE, ZERO};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ChartMap {
    NodePlus { t_plus: Complex },
    NodeMinus { t_minus: Complex },
    FiberZero,
    FiberInfinity,
}

/// Which end of a component a fiber chart sits at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiberEnd {
    /// `(S, xi0)` near `S = 0`.
    Zero,
    /// `(T, xi_inf)` near `T = 0`.
    Infinity,
}

impl ChartMap {
    /// `(w-order, z-exponent, factor)` of the image of `x^i y^j`; `inv_pows`
    /// holds the powers of `1/t` for the node maps.
    fn image(&self, i: usize, j: usize, inv_pows: &[Complex]) -> (usize, i64, Complex) {
        let d = i as i64 - j as i64;
        match self {
            ChartMap::NodePlus { .. } => (j, d, inv_pows[j]),
            ChartMap::NodeMinus { .. } => (i, d, inv_pows[i]),
            ChartMap::FiberZero => (j, d, ONE),
            ChartMap::FiberInfinity => (j, -d, ONE),
        }
    }
}

/// Monomial-exact re-expansion of `f` through `map`. Output slices run over
/// the w-orders `0..=f.order()`; a mode beyond `l_max` is a `BandwidthOverflow`.
pub fn compose_chart(
    f: &TruncatedSeries2,
    map: ChartMap,
    l_max: usize,
    annulus: Annulus,
) -> Result<LaurentSeries2> {
    let n = f.order();
    let inv = match map {
        ChartMap::NodePlus { t_plus } => powers(ONE / t_plus, n),
        ChartMap::NodeMinus { t_minus } => powers(ONE / t_minus, n),
        _ => Vec::new(),
    };
    let mut out = LaurentSeries2::zero(n, l_max, annulus);
    for (i, j, c) in f.nonzero() {
        let (nu, k, factor) = map.image(i, j, &inv);
        out.add_to(nu, k, c * factor)?;
    }
    Ok(out)
}

/// Shorthand for [`compose_chart`] with [`ChartMap::FiberZero`].
pub fn fiber_zero_to_laurent(
    f: &TruncatedSeries2,
    l_max: usize,
    annulus: Annulus,
) -> Result<LaurentSeries2> {
    compose_chart(f, ChartMap::FiberZero, l_max, annulus)
}

/// Inverse of the fiber charts: slice `m`, mode `k` becomes `S^{m+k} xi0^m`
/// (`FiberEnd::Zero`) or `T^{m-k} xi_inf^m` (`FiberEnd::Infinity`). Monomials
/// outside the box of `order` are dropped; a negative exponent is an error.
pub fn laurent_to_fiber_chart(
    f: &LaurentSeries2,
    end: FiberEnd,
    order: usize,
) -> Result<TruncatedSeries2> {
    let mut out = TruncatedSeries2::zero(order);
    for (m, slice) in f.slices().iter().enumerate() {
        for (k, c) in slice.modes() {
            if c == ZERO {
                continue;
            }
            let a = match end {
                FiberEnd::Zero => m as i64 + k,
                FiberEnd::Infinity => m as i64 - k,
            };
            if a < 0 {
                return Err(Error::NotExtendable {
                    reason: format!("mode {k} of slice {m} is singular at the fiber end"),
                });
            }
            out.add_to(a as usize, m, c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    fn ann() -> Annulus {
        Annulus::new(0.5, 2.0).unwrap()
    }

    #[test]
    fn node_plus_examples() {
        let tp = Complex::from_polar(1.0, 0.7);
        let q = TruncatedSeries2::monomial(3, 0, 1, c(1.0));
        let out = compose_chart(&q, ChartMap::NodePlus { t_plus: tp }, 3, ann()).unwrap();
        assert!((out.coeff(1, -1) - ONE / tp).norm() < 1e-15);
        assert_eq!(out.slice(1).modes().filter(|(_, c)| *c != ZERO).count(), 1);

        let p = TruncatedSeries2::monomial(3, 1, 0, c(1.0));
        let out = compose_chart(&p, ChartMap::NodePlus { t_plus: tp }, 3, ann()).unwrap();
        assert_eq!(out.coeff(0, 1), c(1.0));
    }

    #[test]
    fn node_minus_example() {
        let tm = Complex::from_polar(1.0, -0.3);
        let p = TruncatedSeries2::monomial(3, 1, 0, c(1.0));
        let out = compose_chart(&p, ChartMap::NodeMinus { t_minus: tm }, 3, ann()).unwrap();
        assert!((out.coeff(1, 1) - ONE / tm).norm() < 1e-15);
        assert_eq!(out.coeff(0, 1), ZERO);
    }

    #[test]
    fn node_maps_match_pointwise_substitution() {
        let f = TruncatedSeries2::from_monomials(
            3,
            [(1, 2, c(0.5)), (3, 0, c(-1.0)), (2, 2, Complex::new(0.0, 2.0))],
        )
        .unwrap();
        let tp = Complex::from_polar(1.0, 1.1);
        let tm = Complex::from_polar(1.0, 0.4);
        let (z, w) = (Complex::new(0.8, 0.3), Complex::new(0.01, -0.02));
        let plus = compose_chart(&f, ChartMap::NodePlus { t_plus: tp }, 3, ann()).unwrap();
        let minus = compose_chart(&f, ChartMap::NodeMinus { t_minus: tm }, 3, ann()).unwrap();
        let sum = |s: &LaurentSeries2| -> Complex {
            s.slices()
                .iter()
                .enumerate()
                .map(|(nu, p)| p.eval(z) * w.powi(nu as i32))
                .sum()
        };
        assert!((sum(&plus) - f.eval(z, w / (tp * z))).norm() < 1e-13);
        assert!((sum(&minus) - f.eval(z * w / tm, ONE / z)).norm() < 1e-13);
    }

    #[test]
    fn fiber_round_trip() {
        let f = TruncatedSeries2::from_monomials(4, [(0, 2, c(1.0)), (4, 1, c(2.0)), (1, 1, c(3.0))])
            .unwrap();
        let l = fiber_zero_to_laurent(&f, 4, ann()).unwrap();
        assert_eq!(l.coeff(2, -2), c(1.0));
        assert_eq!(laurent_to_fiber_chart(&l, FiberEnd::Zero, 4).unwrap(), f);
        let l = compose_chart(&f, ChartMap::FiberInfinity, 4, ann()).unwrap();
        assert_eq!(laurent_to_fiber_chart(&l, FiberEnd::Infinity, 4).unwrap(), f);
    }

    #[test]
    fn bandwidth_overflow() {
        let f = TruncatedSeries2::monomial(3, 3, 0, c(1.0));
        assert!(matches!(
            compose_chart(&f, ChartMap::FiberZero, 2, ann()),
            Err(Error::BandwidthOverflow { .. })
        ));
    }

    #[test]
    fn linear_and_graded() {
        let f = TruncatedSeries2::from_monomials(2, [(1, 2, c(1.0)), (2, 0, c(0.5))]).unwrap();
        let g = TruncatedSeries2::from_monomials(2, [(0, 1, c(-2.0)), (2, 2, c(1.5))]).unwrap();
        let map = ChartMap::NodePlus { t_plus: Complex::from_polar(1.0, 2.0) };
        let sum = compose_chart(&(&f + &g.scale(c(3.0))), map, 2, ann()).unwrap();
        let parts = compose_chart(&f, map, 2, ann())
            .unwrap()
            .add(&compose_chart(&g, map, 2, ann()).unwrap().scale(c(3.0)))
            .unwrap();
        assert!(sum.max_abs_diff(&parts) < 1e-15);
    }
}
