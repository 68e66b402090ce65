use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::node::{node_divisor, solve_order};
use super::DomainGeometry;
use crate::error::{Error, Result};
use crate::series::{Annulus, Complex, LaurentPolynomial};

pub const CALIBRATION_SEED: u64 = 0x5eed_c0c1;

/// Empirical stand-in for the constant of the one-order estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    /// Twice the worst observed ratio.
    #[serde(rename = "K")]
    pub k: f64,
    pub worst_ratio: f64,
    pub worst_order: usize,
    pub trials: usize,
    pub seed: u64,
    pub label: String,
}

/// `max(sup a1, sup a0) * |divisor| / max(sup b_+, sup b_-)` for one order,
/// with `a1` measured on the middle annulus and `a0` on the `5 eps/3` bidisk.
pub fn order_ratio(
    geometry: &DomainGeometry,
    n: usize,
    bplus: &LaurentPolynomial,
    bminus: &LaurentPolynomial,
    t_plus: Complex,
    t_minus: Complex,
) -> Result<f64> {
    let sol = solve_order(n, bplus, bminus, t_plus, t_minus)?;
    let input = bplus.sup_bound().max(bminus.sup_bound());
    if input == 0.0 {
        return Ok(0.0);
    }
    let out = sol.sup_a1(geometry).max(sol.sup_a0(geometry));
    Ok(out * node_divisor(n, t_plus, t_minus) / input)
}

fn random_unit(rng: &mut ChaCha8Rng, l: usize, annulus: Annulus) -> LaurentPolynomial {
    let modes: Vec<(i64, Complex)> = (-(l as i64)..=l as i64)
        .map(|k| {
            let c = Complex::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
            (k, c / annulus.monomial_sup(k))
        })
        .collect();
    let p = LaurentPolynomial::from_modes(l, annulus, modes).expect("finite modes");
    let s = p.sup_bound();
    p.scale(Complex::new(1.0 / s, 0.0))
}

/// `2 * max` of [`order_ratio`] over `trials` random right-hand sides of unit
/// sup bound and every order `n <= order`.
pub fn calibrate_k(
    geometry: &DomainGeometry,
    t_plus: Complex,
    t_minus: Complex,
    trials: usize,
    order: usize,
    seed: u64,
) -> Result<Calibration> {
    if trials == 0 || order == 0 {
        return Err(Error::Invalid("calibration needs trials >= 1 and order >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_ratio = 0.0;
    let mut worst_order = 1;
    for _ in 0..trials {
        for n in 1..=order {
            let bp = random_unit(&mut rng, order, geometry.plus_annulus());
            let bm = random_unit(&mut rng, order, geometry.minus_annulus());
            let ratio = order_ratio(geometry, n, &bp, &bm, t_plus, t_minus)?;
            if ratio > worst_ratio {
                worst_ratio = ratio;
                worst_order = n;
            }
        }
    }
    Ok(Calibration {
        k: 2.0 * worst_ratio,
        worst_ratio,
        worst_order,
        trials,
        seed,
        label: "empirical-K".into(),
    })
}
