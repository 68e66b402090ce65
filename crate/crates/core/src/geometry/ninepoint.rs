use serde::{Deserialize, Serialize};

use crate::diophantine::{small_divisor, theta_of, DiophantineAngle, TOL_RESONANCE};
use crate::error::{Error, Result};
use crate::series::Complex;

/// Denominators searched when flagging a rational angle.
pub const TORSION_SEARCH: u64 = 1000;

/// Nine normalized points `i^{-1}(p_nu)` split over the components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NinePointConfig {
    pub n_components: usize,
    pub params: Vec<Complex>,
    pub degree_split: Vec<usize>,
}

impl NinePointConfig {
    pub fn new(n_components: usize, params: Vec<Complex>, degree_split: Vec<usize>) -> Result<Self> {
        let c = Self {
            n_components,
            params,
            degree_split,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.params.len() != 9 {
            return Err(Error::Invalid(format!("need 9 points, got {}", self.params.len())));
        }
        if let Some(i) = self.params.iter().position(|p| !(p.norm() > 0.0) || !p.is_finite()) {
            return Err(Error::Invalid(format!("point {i} is zero or not finite")));
        }
        let ok = matches!(
            (self.n_components, self.degree_split.as_slice()),
            (1, [9]) | (2, [3, 6]) | (2, [6, 3]) | (3, [3, 3, 3])
        );
        if !ok {
            return Err(Error::Invalid(format!(
                "degree split {:?} does not fit {} components",
                self.degree_split, self.n_components
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NinePointReport {
    pub t: Complex,
    /// The other normalization choice swaps `0` and `infinity`.
    pub t_inverse: Complex,
    pub modulus: f64,
    pub on_unit_circle: bool,
    /// `arg(t) / 2 pi` when `|t| = 1`.
    pub theta: Option<f64>,
    /// Smallest `q <= TORSION_SEARCH` with `|1 - t^q| < TOL_RESONANCE`.
    pub torsion_order: Option<u64>,
    pub cf_prefix: Vec<u64>,
}

/// `t = prod params`.
pub fn nine_point_t(config: &NinePointConfig) -> Result<NinePointReport> {
    config.validate()?;
    let t: Complex = config.params.iter().product();
    Ok(report(t))
}

fn report(t: Complex) -> NinePointReport {
    let modulus = t.norm();
    let on_unit_circle = (modulus - 1.0).abs() <= 1e-12;
    let theta = on_unit_circle.then(|| theta_of(t));
    let torsion_order = theta.and_then(|th| (1..=TORSION_SEARCH).find(|&q| small_divisor(th, q) < TOL_RESONANCE));
    let cf_prefix = match (theta, torsion_order) {
        (Some(th), None) => DiophantineAngle::from_theta(th)
            .map(|a| a.cf().iter().take(12).copied().collect())
            .unwrap_or_default(),
        _ => Vec::new(),
    };
    NinePointReport {
        t,
        t_inverse: Complex::new(1.0, 0.0) / t,
        modulus,
        on_unit_circle,
        theta,
        torsion_order,
        cf_prefix,
    }
}

/// The ninth point completing eight to the product `target`.
pub fn solve_ninth_point(target: Complex, eight: &[Complex]) -> Result<Complex> {
    if eight.len() != 8 {
        return Err(Error::Invalid(format!("need 8 points, got {}", eight.len())));
    }
    if !(target.norm() > 0.0) || eight.iter().any(|p| !(p.norm() > 0.0)) {
        return Err(Error::Invalid("target and points must be nonzero".into()));
    }
    Ok(target / eight.iter().product::<Complex>())
}
