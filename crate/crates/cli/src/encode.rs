//! JSON encodings: series as `[a, b, re, im]`, Laurent modes as `[k, re, im]`,
//! complex scalars as `[re, im]`.

use cyclenf_core::diophantine::{theta_of, DiophantineAngle, UnitCircleConstant};
use cyclenf_core::series::{Complex, LaurentPolynomial, LaurentSeries2, TruncatedSeries2};
use serde::{Deserialize, Serialize};

pub type Monomial = (usize, usize, f64, f64);
pub type Mode = (i64, f64, f64);

pub fn complex(z: Complex) -> [f64; 2] {
    [z.re, z.im]
}

pub fn from_pair(p: [f64; 2]) -> Complex {
    Complex::new(p[0], p[1])
}

/// Highest exponent appearing in the monomials.
pub fn degree(monos: &[Monomial]) -> usize {
    monos.iter().map(|&(a, b, _, _)| a.max(b)).max().unwrap_or(0)
}

pub fn series_from(monos: &[Monomial], order: usize) -> Result<TruncatedSeries2, String> {
    if let Some(&(a, b, _, _)) = monos.iter().find(|&&(a, b, _, _)| a > order || b > order) {
        return Err(format!("monomial ({a}, {b}) lies outside the order-{order} box"));
    }
    TruncatedSeries2::from_monomials(order, monos.iter().map(|&(a, b, re, im)| (a, b, Complex::new(re, im))))
        .map_err(|e| e.to_string())
}

/// Nonzero monomials in `(a, b)` order.
pub fn series_to(s: &TruncatedSeries2) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = s.nonzero().map(|(a, b, c)| (a, b, c.re, c.im)).collect();
    out.sort_by_key(|m| (m.0, m.1));
    out
}

pub fn laurent_to(p: &LaurentPolynomial) -> Vec<Mode> {
    p.modes().filter(|(_, c)| c.norm() != 0.0).map(|(k, c)| (k, c.re, c.im)).collect()
}

/// One `[k, re, im]` list per slice.
pub fn laurent2_to(f: &LaurentSeries2) -> Vec<Vec<Mode>> {
    f.slices().iter().map(laurent_to).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaSpec {
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfSpec {
    pub cf: Vec<u64>,
    #[serde(default)]
    pub periodic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitSpec {
    pub t: [f64; 2],
}

/// `{"theta": x}`, `{"cf": [...], "periodic": bool}` or `{"t": [re, im]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleSpec {
    Theta(ThetaSpec),
    Cf(CfSpec),
    Unit(UnitSpec),
}

impl AngleSpec {
    pub fn note(&self) -> &'static str {
        match self {
            AngleSpec::Theta(_) => "angle given as theta; continued fraction expanded numerically",
            AngleSpec::Cf(_) => "angle given as continued fraction",
            AngleSpec::Unit(_) => "constant given as a complex number",
        }
    }

    pub fn angle(&self) -> cyclenf_core::Result<DiophantineAngle> {
        match self {
            AngleSpec::Theta(t) => DiophantineAngle::from_theta(t.theta),
            AngleSpec::Cf(c) => DiophantineAngle::from_cf(&c.cf, c.periodic),
            AngleSpec::Unit(u) => {
                let c = UnitCircleConstant::new(from_pair(u.t))?;
                DiophantineAngle::from_theta(theta_of(c.t()))
            }
        }
    }

    pub fn constant(&self) -> cyclenf_core::Result<UnitCircleConstant> {
        match self {
            AngleSpec::Unit(u) => UnitCircleConstant::new(from_pair(u.t)),
            _ => Ok(UnitCircleConstant::from_angle(self.angle()?)),
        }
    }
}
