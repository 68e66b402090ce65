//! The majorant equation
//! `sum_{nu>=2} |1 - t^{nu-1}| B_nu X^nu = K R M B(X)^2 / (1 - R B(X))`, `B_1 = 1`,
//! solved coefficientwise, and the comparison of solver output against it.
//!
//! `K` comes from [`crate::cocycle::calibrate_k`], so every verdict here is
//! "dominated under empirical K", not a convergence proof.

use serde::{Deserialize, Serialize};

use crate::cocycle::{CocycleSolution, DomainGeometry};
use crate::diophantine::{small_divisor, TOL_RESONANCE};
use crate::error::{Error, Result};

pub const VERDICT_LABEL: &str = "dominated under empirical K";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    /// `min B_nu^{-1/nu}` over the window; `+inf` for an all-zero tail.
    pub radius: f64,
    pub infinite: bool,
    /// Inclusive range of `nu` the minimum ran over.
    pub window: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorantSeries {
    /// `B_1..B_N` at indices `0..N`.
    pub b: Vec<f64>,
    /// `A_n = B_{n+1}`, `n = 1..N-1`, at indices `0..N-1`.
    pub a: Vec<f64>,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub theta: f64,
    pub radius: RadiusEstimate,
}

impl MajorantSeries {
    pub fn order(&self) -> usize {
        self.b.len()
    }

    /// `B_nu`, `nu >= 1`.
    pub fn b_at(&self, nu: usize) -> f64 {
        self.b[nu - 1]
    }

    /// `A_nu = B_{nu+1}`.
    pub fn a_at(&self, nu: usize) -> f64 {
        self.a[nu - 1]
    }
}

/// Recursion `S = B^2 + R B S` for `S = B^2/(1 - R B)`, then
/// `B_nu = K R M S_nu / |1 - t^{nu-1}|`; `S_nu` only involves `B_1..B_{nu-1}`.
pub fn solve_majorant(k: f64, r: f64, m: f64, theta: f64, order: usize) -> Result<MajorantSeries> {
    if !(k >= 0.0 && r > 0.0 && m > 0.0) || !(k.is_finite() && r.is_finite() && m.is_finite()) {
        return Err(Error::Invalid(format!(
            "need K >= 0 and R, M > 0, got K={k}, R={r}, M={m}"
        )));
    }
    if order == 0 {
        return Err(Error::Invalid("majorant order must be at least 1".into()));
    }
    // index = power of X
    let mut b = vec![0.0; order + 1];
    let mut s = vec![0.0; order + 1];
    b[1] = 1.0;
    for nu in 2..=order {
        let sq: f64 = (1..nu).map(|i| b[i] * b[nu - i]).sum();
        let bs: f64 = (1..nu).map(|i| b[i] * s[nu - i]).sum();
        s[nu] = sq + r * bs;
        let d = small_divisor(theta, (nu - 1) as u64);
        if !(d >= TOL_RESONANCE) {
            return Err(Error::Torsion {
                n: nu - 1,
                divisor: d,
            });
        }
        b[nu] = k * r * m * s[nu] / d;
    }
    let b: Vec<f64> = b[1..].to_vec();
    let a = b[1..].to_vec();
    let radius = radius_estimate(&b);
    Ok(MajorantSeries {
        b,
        a,
        k,
        r,
        m,
        theta,
        radius,
    })
}

/// Cauchy-Hadamard estimate over the last quarter of `b` (`b[i] = B_{i+1}`).
pub fn radius_estimate(b: &[f64]) -> RadiusEstimate {
    let n = b.len();
    let width = (n / 4).max(1);
    let start = n + 1 - width;
    let radius = (start..=n)
        .filter(|&nu| b[nu - 1] > 0.0)
        .map(|nu| b[nu - 1].powf(-1.0 / nu as f64))
        .fold(f64::INFINITY, f64::min);
    RadiusEstimate {
        radius,
        infinite: radius.is_infinite(),
        window: (start, n),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderComparison {
    pub order: usize,
    pub sup_a1: f64,
    pub sup_a0: f64,
    #[serde(rename = "A")]
    pub a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationReport {
    pub dominated: bool,
    /// First order where `sup a1 > A` or `sup a0 > 3A`, with the failing part.
    pub first_violation: Option<(usize, String)>,
    pub orders: Vec<OrderComparison>,
    pub label: String,
}

/// Compares `sup a1_nu <= A_nu` and `sup (p + q + r) <= 3 A_nu` for every
/// order both sides cover.
pub fn check_domination(
    solution: &CocycleSolution,
    majorant: &MajorantSeries,
    geometry: &DomainGeometry,
) -> DominationReport {
    let top = solution.order().min(majorant.a.len());
    let mut first_violation = None;
    let mut orders = Vec::with_capacity(top);
    for nu in 1..=top {
        let o = solution.get(nu);
        let cmp = OrderComparison {
            order: nu,
            sup_a1: o.sup_a1(geometry),
            sup_a0: o.sup_a0(geometry),
            a: majorant.a_at(nu),
        };
        if first_violation.is_none() {
            if cmp.sup_a1 > cmp.a {
                first_violation = Some((nu, "a1".to_string()));
            } else if cmp.sup_a0 > 3.0 * cmp.a {
                first_violation = Some((nu, "a0".to_string()));
            }
        }
        orders.push(cmp);
    }
    DominationReport {
        dominated: first_violation.is_none(),
        first_violation,
        orders,
        label: VERDICT_LABEL.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{solve_cousin, CocycleRhs};
    use crate::diophantine::DiophantineAngle;
    use crate::series::{Complex, LaurentPolynomial};
    use proptest::prelude::*;

    fn golden() -> f64 {
        DiophantineAngle::golden().theta()
    }

    #[test]
    fn low_coefficients_by_hand() {
        let (k, r, m) = (1.7, 3.0, 1.2);
        let t = golden();
        let s = solve_majorant(k, r, m, t, 6).unwrap();
        let b2 = k * r * m / small_divisor(t, 1);
        let b3 = k * r * m * (2.0 * b2 + r) / small_divisor(t, 2);
        assert_eq!(s.b_at(1), 1.0);
        assert!((s.b_at(2) - b2).abs() <= 1e-12 * b2);
        assert!((s.b_at(3) - b3).abs() <= 1e-12 * b3);
        assert_eq!(s.a_at(1), s.b_at(2));
    }

    #[test]
    fn zero_k() {
        let s = solve_majorant(0.0, 2.0, 2.0, golden(), 20).unwrap();
        assert!(s.b[1..].iter().all(|&x| x == 0.0));
        assert!(s.radius.infinite);
    }

    #[test]
    fn geometric_radius() {
        let rho: f64 = 0.37;
        let b: Vec<f64> = (1..=64).map(|nu| rho.powi(-nu)).collect();
        let est = radius_estimate(&b);
        assert!((est.radius - rho).abs() < 0.01 * rho);
        assert_eq!(est.window, (49, 64));
    }

    #[test]
    fn golden_estimate_stabilizes() {
        let s = solve_majorant(1.0, 1.0, 1.0, golden(), 64).unwrap();
        let r56 = radius_estimate(&s.b[..56]).radius;
        let r64 = s.radius.radius;
        assert!(r64 > 0.0 && r64.is_finite());
        assert!((r56 - r64).abs() <= 0.05 * r64, "{r56} vs {r64}");
    }

    #[test]
    fn delta_contract() {
        let s = solve_majorant(1.0, 1.0, 1.0, golden(), 64).unwrap();
        let delta = 0.5 * s.radius.radius;
        let terms: Vec<f64> = s.a.iter().enumerate().map(|(i, a)| a * delta.powi(i as i32 + 1)).collect();
        let tail: f64 = terms[48..].iter().sum();
        assert!(tail < 1e-9, "tail {tail}");
    }

    #[test]
    fn prefix_is_stable() {
        let a = solve_majorant(2.0, 5.0, 1.5, golden(), 12).unwrap();
        let b = solve_majorant(2.0, 5.0, 1.5, golden(), 24).unwrap();
        assert_eq!(a.b[..], b.b[..12]);
    }

    #[test]
    fn torsion_guard() {
        assert!(matches!(
            solve_majorant(1.0, 1.0, 1.0, 0.25, 8),
            Err(Error::Torsion { n: 4, .. })
        ));
    }

    #[test]
    fn domination_edge_cases() {
        let g = DomainGeometry::default();
        let t = DiophantineAngle::golden().t();
        let one = Complex::new(1.0, 0.0);
        let zero = solve_cousin(&CocycleRhs::zero(4, &g), &g, one / t, one).unwrap();
        let maj = solve_majorant(1.0, g.r, g.m, golden(), 5).unwrap();
        assert!(check_domination(&zero, &maj, &g).dominated);

        let bp = vec![LaurentPolynomial::from_modes(4, g.plus_annulus(), [(0, one)]).unwrap(); 4];
        let bm = vec![LaurentPolynomial::zero(4, g.minus_annulus()); 4];
        let sol = solve_cousin(&CocycleRhs::new(bp, bm).unwrap(), &g, one / t, one).unwrap();
        let none = solve_majorant(0.0, g.r, g.m, golden(), 5).unwrap();
        let rep = check_domination(&sol, &none, &g);
        assert_eq!(rep.first_violation.map(|v| v.0), Some(1));
    }

    proptest! {
        #[test]
        fn monotone_in_constants(k in 0.1f64..3.0, r in 1.0f64..5.0, m in 1.0f64..3.0, dk in 0.0f64..1.0, dr in 0.0f64..1.0, dm in 0.0f64..1.0) {
            let lo = solve_majorant(k, r, m, golden(), 16).unwrap();
            let hi = solve_majorant(k + dk, r + dr, m + dm, golden(), 16).unwrap();
            for (x, y) in lo.b.iter().zip(&hi.b) {
                prop_assert!(x <= y);
            }
        }
    }
}
