use serde::{Deserialize, Serialize};

use super::{check_finite, Complex, ZERO};
use crate::error::{Error, Result};

/// Open annulus `inner < |z| < outer`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    pub inner: f64,
    pub outer: f64,
}

impl Annulus {
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if inner.is_finite() && outer.is_finite() && inner > 0.0 && inner < outer {
            Ok(Self { inner, outer })
        } else {
            Err(Error::InvalidAnnulus { inner, outer })
        }
    }

    pub fn intersect(&self, other: &Annulus) -> Result<Annulus> {
        let inner = self.inner.max(other.inner);
        let outer = self.outer.min(other.outer);
        if inner < outer {
            Ok(Annulus { inner, outer })
        } else {
            Err(Error::AnnulusMismatch(
                self.inner,
                self.outer,
                other.inner,
                other.outer,
            ))
        }
    }

    /// `max(inner^k, outer^k)`, the sup of `|z^k|` on the closed annulus.
    pub fn monomial_sup(&self, k: i64) -> f64 {
        let k = k as i32;
        self.inner.powi(k).max(self.outer.powi(k))
    }
}

/// Finite Laurent expansion `sum_{k=-L}^{L} c_k z^k` attached to an annulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentPolynomial {
    bandwidth: usize,
    coeffs: Vec<Complex>,
    annulus: Annulus,
}

impl LaurentPolynomial {
    pub fn zero(bandwidth: usize, annulus: Annulus) -> Self {
        Self {
            bandwidth,
            coeffs: vec![ZERO; 2 * bandwidth + 1],
            annulus,
        }
    }

    /// Builds from `(k, c)` records; repeated modes accumulate.
    pub fn from_modes<I>(bandwidth: usize, annulus: Annulus, modes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Complex)>,
    {
        let mut p = Self::zero(bandwidth, annulus);
        for (k, c) in modes {
            check_finite(c, || format!("Laurent mode {k}"))?;
            p.add_to(k, c)?;
        }
        Ok(p)
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn annulus(&self) -> Annulus {
        self.annulus
    }

    fn slot(&self, k: i64) -> Option<usize> {
        let l = self.bandwidth as i64;
        (-l..=l).contains(&k).then(|| (k + l) as usize)
    }

    pub fn coeff(&self, k: i64) -> Complex {
        self.slot(k).map_or(ZERO, |i| self.coeffs[i])
    }

    pub fn set(&mut self, k: i64, c: Complex) -> Result<()> {
        match self.slot(k) {
            Some(i) => {
                self.coeffs[i] = c;
                Ok(())
            }
            None if c == ZERO => Ok(()),
            None => Err(Error::BandwidthOverflow {
                needed: k.unsigned_abs() as usize,
                limit: self.bandwidth,
            }),
        }
    }

    pub fn add_to(&mut self, k: i64, c: Complex) -> Result<()> {
        let cur = self.coeff(k);
        self.set(k, cur + c)
    }

    /// `(k, c_k)` for every stored mode, ascending in `k`.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex)> + '_ {
        let l = self.bandwidth as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (i as i64 - l, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    pub fn with_annulus(mut self, annulus: Annulus) -> Self {
        self.annulus = annulus;
        self
    }

    /// Changes the bandwidth; shrinking fails if a dropped mode is nonzero.
    pub fn with_bandwidth(&self, bandwidth: usize) -> Result<Self> {
        let mut p = Self::zero(bandwidth, self.annulus);
        for (k, c) in self.modes() {
            p.set(k, c)?;
        }
        Ok(p)
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self {
            bandwidth: self.bandwidth,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            annulus: self.annulus,
        }
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self> {
        let annulus = self.annulus.intersect(&other.annulus)?;
        let mut p = Self::zero(self.bandwidth.max(other.bandwidth), annulus);
        for (k, c) in self.modes() {
            p.add_to(k, c)?;
        }
        for (k, c) in other.modes() {
            p.add_to(k, c * sign)?;
        }
        Ok(p)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1.0)
    }

    /// Product; the bandwidth is the sum of the operands' bandwidths.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let annulus = self.annulus.intersect(&other.annulus)?;
        let mut p = Self::zero(self.bandwidth + other.bandwidth, annulus);
        for (i, a) in self.modes() {
            if a == ZERO {
                continue;
            }
            for (j, b) in other.modes() {
                p.add_to(i + j, a * b)?;
            }
        }
        Ok(p)
    }

    pub fn eval(&self, z: Complex) -> Complex {
        self.modes().map(|(k, c)| c * z.powi(k as i32)).sum()
    }

    /// `sum_k |c_k| max(inner^k, outer^k)`.
    pub fn sup_bound(&self) -> f64 {
        self.sup_bound_on(&self.annulus)
    }

    pub fn sup_bound_on(&self, annulus: &Annulus) -> f64 {
        self.modes()
            .filter(|(_, c)| *c != ZERO)
            .map(|(k, c)| c.norm() * annulus.monomial_sup(k))
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let l = self.bandwidth.max(other.bandwidth) as i64;
        (-l..=l)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }
}

/// Series `sum_nu f_nu(z) w^nu` whose slices are Laurent polynomials sharing
/// one annulus and a bandwidth cap `l_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentSeries2 {
    l_max: usize,
    annulus: Annulus,
    slices: Vec<LaurentPolynomial>,
}

impl LaurentSeries2 {
    pub fn zero(order: usize, l_max: usize, annulus: Annulus) -> Self {
        Self {
            l_max,
            annulus,
            slices: vec![LaurentPolynomial::zero(l_max, annulus); order + 1],
        }
    }

    pub fn from_slices(l_max: usize, annulus: Annulus, slices: Vec<LaurentPolynomial>) -> Result<Self> {
        if slices.is_empty() {
            return Err(Error::Invalid("a Laurent series needs at least one slice".into()));
        }
        let slices = slices
            .iter()
            .map(|s| s.with_bandwidth(l_max).map(|s| s.with_annulus(annulus)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            l_max,
            annulus,
            slices,
        })
    }

    pub fn order(&self) -> usize {
        self.slices.len() - 1
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn annulus(&self) -> Annulus {
        self.annulus
    }

    pub fn slice(&self, nu: usize) -> &LaurentPolynomial {
        &self.slices[nu]
    }

    pub fn slices(&self) -> &[LaurentPolynomial] {
        &self.slices
    }

    pub fn coeff(&self, nu: usize, k: i64) -> Complex {
        self.slices.get(nu).map_or(ZERO, |s| s.coeff(k))
    }

    /// Sets a coefficient; slices above the order are dropped.
    pub fn set(&mut self, nu: usize, k: i64, c: Complex) -> Result<()> {
        match self.slices.get_mut(nu) {
            Some(s) => s.set(k, c),
            None => Ok(()),
        }
    }

    pub fn add_to(&mut self, nu: usize, k: i64, c: Complex) -> Result<()> {
        match self.slices.get_mut(nu) {
            Some(s) => s.add_to(k, c),
            None => Ok(()),
        }
    }

    pub fn set_slice(&mut self, nu: usize, slice: &LaurentPolynomial) -> Result<()> {
        if nu <= self.order() {
            self.slices[nu] = slice.with_bandwidth(self.l_max)?.with_annulus(self.annulus);
        }
        Ok(())
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self {
            l_max: self.l_max,
            annulus: self.annulus,
            slices: self.slices.iter().map(|s| s.scale(c)).collect(),
        }
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self> {
        let annulus = self.annulus.intersect(&other.annulus)?;
        let order = self.order().min(other.order());
        let l_max = self.l_max.max(other.l_max);
        let mut out = Self::zero(order, l_max, annulus);
        for nu in 0..=order {
            for (k, c) in self.slices[nu].modes() {
                out.add_to(nu, k, c)?;
            }
            for (k, c) in other.slices[nu].modes() {
                out.add_to(nu, k, c * sign)?;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1.0)
    }

    /// Product truncated in `w` to the common order; fails if a product mode
    /// leaves the bandwidth cap.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let annulus = self.annulus.intersect(&other.annulus)?;
        let order = self.order().min(other.order());
        let l_max = self.l_max.max(other.l_max);
        let mut out = Self::zero(order, l_max, annulus);
        for i in 0..=order {
            for j in 0..=(order - i) {
                let prod = self.slices[i].mul(&other.slices[j])?;
                for (k, c) in prod.modes() {
                    out.add_to(i + j, k, c)?;
                }
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.slices.iter().map(|s| s.max_abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let order = self.order().max(other.order());
        (0..=order)
            .map(|nu| match (self.slices.get(nu), other.slices.get(nu)) {
                (Some(a), Some(b)) => a.max_abs_diff(b),
                (Some(a), None) | (None, Some(a)) => a.max_abs(),
                (None, None) => 0.0,
            })
            .fold(0.0, f64::max)
    }
}
