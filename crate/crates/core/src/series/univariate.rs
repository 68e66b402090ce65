use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::{check_finite, Complex, ZERO};
use crate::error::Result;

/// Power series in one variable, truncated at degree `order` (inclusive).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSeries1 {
    coeffs: Vec<Complex>,
}

impl TruncatedSeries1 {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![ZERO; order + 1],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Complex>) -> Result<Self> {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        for (k, c) in coeffs.iter().enumerate() {
            check_finite(*c, || format!("degree {k}"))?;
        }
        Ok(Self { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Complex {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Sets the coefficient of degree `k`; degrees above the order are dropped.
    pub fn set(&mut self, k: usize, c: Complex) {
        if let Some(slot) = self.coeffs.get_mut(k) {
            *slot = c;
        }
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn eval(&self, x: Complex) -> Complex {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * x + c)
    }

    /// `sum_k |c_k| r^k`, an upper bound for the supremum on the disk of radius `r`.
    pub fn sup_bound(&self, radius: f64) -> f64 {
        let mut pow = 1.0;
        let mut total = 0.0;
        for c in &self.coeffs {
            total += c.norm() * pow;
            pow *= radius;
        }
        total
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Add for &TruncatedSeries1 {
    type Output = TruncatedSeries1;
    fn add(self, rhs: Self) -> TruncatedSeries1 {
        let n = self.order().min(rhs.order());
        TruncatedSeries1 {
            coeffs: (0..=n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect(),
        }
    }
}

impl Sub for &TruncatedSeries1 {
    type Output = TruncatedSeries1;
    fn sub(self, rhs: Self) -> TruncatedSeries1 {
        let n = self.order().min(rhs.order());
        TruncatedSeries1 {
            coeffs: (0..=n).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect(),
        }
    }
}

impl Mul for &TruncatedSeries1 {
    type Output = TruncatedSeries1;
    fn mul(self, rhs: Self) -> TruncatedSeries1 {
        let n = self.order().min(rhs.order());
        let mut out = vec![ZERO; n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            for (j, b) in rhs.coeffs.iter().take(n + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries1 { coeffs: out }
    }
}

impl Neg for &TruncatedSeries1 {
    type Output = TruncatedSeries1;
    fn neg(self) -> TruncatedSeries1 {
        self.scale(Complex::new(-1.0, 0.0))
    }
}
