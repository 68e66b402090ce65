use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::diophantine::UnitCircleConstant;
use crate::error::{Error, Result};
use crate::series::Complex;

/// Points `(eta, lambda)` of `C* x U(1)` for the level set `|S xi0| = r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeviFlatSample {
    pub r: f64,
    pub t: UnitCircleConstant,
    pub n: i64,
    pub points: Vec<(Complex, Complex)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HrReport {
    pub samples: usize,
    /// Sheet `nu` whose overlap with `nu + 1` holds each sample.
    pub sheets: Vec<i64>,
    /// Relative defect of `T = xi0'`, `xi_inf = S'` between sheets `nu`, `nu + 1`.
    pub max_transition_defect: f64,
    /// `max ||S xi0| - r|` over both sheets.
    pub max_level_defect: f64,
}

/// `(S, xi0)` on sheet `nu`: `(r^nu lambda^nu eta, 1 / (r^{nu-1} lambda^{nu-1} eta))`.
fn sheet(r: f64, nu: i64, eta: Complex, lambda: Complex) -> (Complex, Complex) {
    let base = |k: i64| Complex::from_polar(r.powi(k as i32), 0.0) * lambda.powi(k as i32);
    (base(nu) * eta, Complex::new(1.0, 0.0) / (base(nu - 1) * eta))
}

/// Sheet `nu` lives on `2 r^{-nu+1} < |eta| < 2 r^{-nu-1}`, so sheets `nu` and
/// `nu + 1` overlap on `2 r^{-nu} < |eta| < 2 r^{-nu-1}`.
fn overlap_sheet(r: f64, eta: Complex) -> Option<i64> {
    let x = (eta.norm() / 2.0).ln() / -r.ln();
    let nu = x.floor();
    (x.is_finite() && x > nu).then_some(nu as i64)
}

pub fn hr_gluing_check(sample: &LeviFlatSample) -> Result<HrReport> {
    let r = sample.r;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Invalid(format!("r = {r} must lie in (0, 1)")));
    }
    let mut out = HrReport {
        samples: sample.points.len(),
        sheets: Vec::with_capacity(sample.points.len()),
        max_transition_defect: 0.0,
        max_level_defect: 0.0,
    };
    for (i, &(eta, lambda)) in sample.points.iter().enumerate() {
        if (lambda.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid(format!("sample {i}: |lambda| = {} is not 1", lambda.norm())));
        }
        let nu = overlap_sheet(r, eta)
            .ok_or_else(|| Error::Invalid(format!("sample {i}: |eta| = {} is outside every overlap band", eta.norm())))?;
        let (s0, x0) = sheet(r, nu, eta, lambda);
        let (s1, x1) = sheet(r, nu + 1, eta, lambda);
        // fiber change on sheet nu, then the sheet transition
        let t_nu = Complex::new(1.0, 0.0) / s0;
        let xi_inf_nu = s0 * s0 * x0;
        let rel = |a: Complex, b: Complex| (a - b).norm() / b.norm().max(1.0);
        out.max_transition_defect = out.max_transition_defect.max(rel(t_nu, x1)).max(rel(xi_inf_nu, s1));
        for (s, x) in [(s0, x0), (s1, x1)] {
            out.max_level_defect = out.max_level_defect.max(((s * x).norm() - r).abs());
        }
        out.sheets.push(nu);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitDensity {
    /// Smallest `k` such that `{t^j : j < k}` is an `eps`-net, if reached.
    pub k: Option<usize>,
    pub iterations: usize,
    /// Largest angular gap (in turns) when the iteration stopped.
    pub max_gap: f64,
}

/// Chord covering radius of points with largest angular gap `g` turns is
/// `2 sin(pi g / 2)`.
fn covers(gap: f64, eps: f64) -> bool {
    2.0 * (std::f64::consts::PI * gap / 2.0).sin() <= eps
}

/// Iterates `lambda -> t lambda` from 1 and tracks the gaps between the angles.
pub fn orbit_density(t: Complex, eps: f64, max_iter: usize) -> Result<OrbitDensity> {
    if (t.norm() - 1.0).abs() > 1e-12 || !(eps > 0.0) {
        return Err(Error::Invalid("need |t| = 1 and eps > 0".into()));
    }
    // angles in turns, keyed by bit pattern (order-preserving for non-negative floats)
    let mut angles: BTreeSet<u64> = BTreeSet::new();
    let mut gaps: BTreeMap<u64, usize> = BTreeMap::new();
    let add_gap = |gaps: &mut BTreeMap<u64, usize>, g: f64| *gaps.entry(g.to_bits()).or_insert(0) += 1;
    let drop_gap = |gaps: &mut BTreeMap<u64, usize>, g: f64| {
        let key = g.to_bits();
        if let Some(c) = gaps.get_mut(&key) {
            *c -= 1;
            if *c == 0 {
                gaps.remove(&key);
            }
        }
    };
    let mut lambda = Complex::new(1.0, 0.0);
    angles.insert(0.0f64.to_bits());
    add_gap(&mut gaps, 1.0);
    let max_gap = |gaps: &BTreeMap<u64, usize>| gaps.keys().next_back().map_or(1.0, |&k| f64::from_bits(k));
    for k in 1..=max_iter {
        if covers(max_gap(&gaps), eps) {
            return Ok(OrbitDensity {
                k: Some(k),
                iterations: k,
                max_gap: max_gap(&gaps),
            });
        }
        lambda *= t;
        lambda /= lambda.norm();
        // `+ 0.0` folds -0.0 into 0.0 so the bit order matches the numeric order
        let mut a = crate::diophantine::theta_of(lambda) + 0.0;
        if a >= 1.0 {
            a = 0.0;
        }
        if !angles.insert(a.to_bits()) {
            continue;
        }
        let prev = angles.range(..a.to_bits()).next_back().map(|&b| f64::from_bits(b));
        let next = angles.range(a.to_bits() + 1..).next().map(|&b| f64::from_bits(b));
        let lo = prev.unwrap_or_else(|| f64::from_bits(*angles.iter().next_back().unwrap()) - 1.0);
        let hi = next.unwrap_or_else(|| f64::from_bits(*angles.iter().next().unwrap()) + 1.0);
        drop_gap(&mut gaps, hi - lo);
        add_gap(&mut gaps, a - lo);
        add_gap(&mut gaps, hi - a);
    }
    Ok(OrbitDensity {
        k: None,
        iterations: max_iter,
        max_gap: max_gap(&gaps),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::DiophantineAngle;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{PI, TAU};

    fn golden() -> Complex {
        DiophantineAngle::golden().t()
    }

    /// Sort every prefix from scratch.
    fn brute_force(theta: f64, eps: f64, max_iter: usize) -> Option<usize> {
        (1..=max_iter).find(|&k| {
            let mut a: Vec<f64> = (0..k).map(|j| (j as f64 * theta).rem_euclid(1.0)).collect();
            a.sort_by(f64::total_cmp);
            let mut gap = 1.0 - a[a.len() - 1] + a[0];
            for w in a.windows(2) {
                gap = f64::max(gap, w[1] - w[0]);
            }
            2.0 * (PI * gap / 2.0).sin() <= eps
        })
    }

    #[test]
    fn torsion_never_covers() {
        let d = orbit_density(Complex::new(0.0, 1.0), 0.1, 500).unwrap();
        assert_eq!(d.k, None);
        assert_eq!(d.iterations, 500);
        assert!((d.max_gap - 0.25).abs() < 1e-12);
    }

    #[test]
    fn one_point_is_a_two_net() {
        assert_eq!(orbit_density(golden(), 2.0, 10).unwrap().k, Some(1));
        assert_eq!(orbit_density(golden(), 5.0, 10).unwrap().k, Some(1));
    }

    #[test]
    fn golden_matches_brute_force() {
        let theta = DiophantineAngle::golden().theta();
        let d = orbit_density(golden(), 0.01, 5000).unwrap();
        assert_eq!(d.k, brute_force(theta, 0.01, 5000));
        assert_eq!(d.k, Some(PINNED_GOLDEN_K));
    }

    const PINNED_GOLDEN_K: usize = 377;

    #[test]
    fn level_set_and_transition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r: f64 = 0.3;
        let points: Vec<(Complex, Complex)> = (0..1000)
            .map(|_| {
                let nu = rng.gen_range(-4i32..4) as f64;
                let lo = (2.0 * r.powf(-nu)).ln();
                let hi = (2.0 * r.powf(-nu - 1.0)).ln();
                let m = rng.gen_range(lo..hi).exp();
                (Complex::from_polar(m, rng.gen_range(0.0..TAU)), Complex::from_polar(1.0, rng.gen_range(0.0..TAU)))
            })
            .collect();
        let s = LeviFlatSample {
            r,
            t: UnitCircleConstant::from_angle(DiophantineAngle::golden()),
            n: 3,
            points,
        };
        let rep = hr_gluing_check(&s).unwrap();
        assert!(rep.max_transition_defect <= 1e-10, "{}", rep.max_transition_defect);
        assert!(rep.max_level_defect <= 1e-12, "{}", rep.max_level_defect);
    }

    #[test]
    fn empty_sample() {
        let s = LeviFlatSample {
            r: 0.5,
            t: UnitCircleConstant::from_angle(DiophantineAngle::golden()),
            n: 1,
            points: vec![],
        };
        let rep = hr_gluing_check(&s).unwrap();
        assert_eq!(rep.samples, 0);
        assert_eq!(rep.max_transition_defect, 0.0);
    }

    proptest! {
        #[test]
        fn antitone_in_eps(e1 in 0.02f64..1.0, e2 in 0.02f64..1.0) {
            let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            let a = orbit_density(golden(), lo, 4000).unwrap().k.unwrap();
            let b = orbit_density(golden(), hi, 4000).unwrap().k.unwrap();
            prop_assert!(b <= a);
        }
    }
}
