use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::{check_finite, Complex, BRANCH_RADIUS, ONE, TOL_UNIT, ZERO};
use crate::error::{Error, Result};

/// Power series in two variables truncated to the bidegree box
/// `a <= order, b <= order`. Coefficients are stored densely, row-major in `a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSeries2 {
    order: usize,
    coeffs: Vec<Complex>,
}

impl TruncatedSeries2 {
    pub fn zero(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![ZERO; (order + 1) * (order + 1)],
        }
    }

    pub fn constant(order: usize, c: Complex) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, ONE)
    }

    pub fn monomial(order: usize, a: usize, b: usize, c: Complex) -> Self {
        let mut s = Self::zero(order);
        s.set(a, b, c);
        s
    }

    /// Builds a series from `(a, b, coefficient)` records. Repeated exponents
    /// accumulate; exponents outside the box are dropped.
    pub fn from_monomials<I>(order: usize, monomials: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Complex)>,
    {
        let mut s = Self::zero(order);
        for (a, b, c) in monomials {
            check_finite(c, || format!("monomial ({a}, {b})"))?;
            if a <= order && b <= order {
                let i = s.idx(a, b);
                s.coeffs[i] += c;
            }
        }
        Ok(s)
    }

    #[inline]
    fn idx(&self, a: usize, b: usize) -> usize {
        a * (self.order + 1) + b
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, a: usize, b: usize) -> Complex {
        if a <= self.order && b <= self.order {
            self.coeffs[self.idx(a, b)]
        } else {
            ZERO
        }
    }

    pub fn set(&mut self, a: usize, b: usize, c: Complex) {
        if a <= self.order && b <= self.order {
            let i = self.idx(a, b);
            self.coeffs[i] = c;
        }
    }

    pub fn add_to(&mut self, a: usize, b: usize, c: Complex) {
        if a <= self.order && b <= self.order {
            let i = self.idx(a, b);
            self.coeffs[i] += c;
        }
    }

    pub fn constant_term(&self) -> Complex {
        self.coeffs[0]
    }

    /// All `(a, b, coefficient)` entries of the box, row-major.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex)> + '_ {
        let n = self.order + 1;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (i / n, i % n, *c))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, Complex)> + '_ {
        self.iter().filter(|(_, _, c)| *c != ZERO)
    }

    /// Re-boxes to `order`, dropping or zero-padding as needed.
    pub fn with_order(&self, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (a, b, c) in self.iter() {
            s.set(a, b, c);
        }
        s
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Coefficientwise `c_ab * first^a * second^b`, i.e. the substitution of
    /// scaled variables.
    pub fn scale_variables(&self, first: Complex, second: Complex) -> Self {
        let n = self.order;
        let pa: Vec<Complex> = powers(first, n);
        let pb: Vec<Complex> = powers(second, n);
        let mut s = self.clone();
        for a in 0..=n {
            for b in 0..=n {
                let i = s.idx(a, b);
                s.coeffs[i] *= pa[a] * pb[b];
            }
        }
        s
    }

    /// Exchanges the roles of the two variables.
    pub fn swap_variables(&self) -> Self {
        let mut s = Self::zero(self.order);
        for (a, b, c) in self.iter() {
            s.set(b, a, c);
        }
        s
    }

    pub fn eval(&self, first: Complex, second: Complex) -> Complex {
        let n = self.order;
        let mut acc = ZERO;
        for a in (0..=n).rev() {
            let mut row = ZERO;
            for b in (0..=n).rev() {
                row = row * second + self.coeffs[self.idx(a, b)];
            }
            acc = acc * first + row;
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Maximum coefficient distance over the common box.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.order.min(other.order);
        let mut m: f64 = 0.0;
        for a in 0..=n {
            for b in 0..=n {
                m = m.max((self.coeff(a, b) - other.coeff(a, b)).norm());
            }
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Partial derivative in the first variable (top row becomes zero).
    pub fn diff_first(&self) -> Self {
        let mut s = Self::zero(self.order);
        for (a, b, c) in self.iter() {
            if a > 0 {
                s.set(a - 1, b, c * a as f64);
            }
        }
        s
    }

    /// Partial derivative in the second variable.
    pub fn diff_second(&self) -> Self {
        let mut s = Self::zero(self.order);
        for (a, b, c) in self.iter() {
            if b > 0 {
                s.set(a, b - 1, c * b as f64);
            }
        }
        s
    }

    /// Multiplicative inverse of a unit series.
    pub fn invert_unit(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0.norm() <= TOL_UNIT {
            return Err(Error::NotAUnit { modulus: c0.norm() });
        }
        let n = self.order;
        let inv0 = ONE / c0;
        let mut out = Self::zero(n);
        out.coeffs[0] = inv0;
        for a in 0..=n {
            for b in 0..=n {
                if a == 0 && b == 0 {
                    continue;
                }
                let mut acc = ZERO;
                for i in 0..=a {
                    for j in 0..=b {
                        if i == 0 && j == 0 {
                            continue;
                        }
                        acc += self.coeffs[self.idx(i, j)] * out.coeffs[out.idx(a - i, b - j)];
                    }
                }
                let k = out.idx(a, b);
                out.coeffs[k] = -acc * inv0;
            }
        }
        Ok(out)
    }

    /// Principal logarithm. The constant term must lie in the ball of radius
    /// [`BRANCH_RADIUS`] around 1; the result's constant term is `ln c00`, so
    /// `log` of a series with `c00 = 1` vanishes at the origin.
    pub fn log(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if (c0 - ONE).norm() >= BRANCH_RADIUS {
            return Err(Error::BranchError {
                re: c0.re,
                im: c0.im,
            });
        }
        let n = self.order;
        let u = self.scale(ONE / c0);
        let mut out = Self::zero(n);
        out.coeffs[0] = c0.ln();
        // Euler operator D = x d/dx + y d/dy: D u = u * D(log u).
        for a in 0..=n {
            for b in 0..=n {
                let d = a + b;
                if d == 0 {
                    continue;
                }
                let mut acc = u.coeffs[u.idx(a, b)] * d as f64;
                for i in 0..=a {
                    for j in 0..=b {
                        if (i == 0 && j == 0) || (i == a && j == b) {
                            continue;
                        }
                        acc -= out.coeffs[out.idx(i, j)]
                            * ((i + j) as f64)
                            * u.coeffs[u.idx(a - i, b - j)];
                    }
                }
                let k = out.idx(a, b);
                out.coeffs[k] = acc / d as f64;
            }
        }
        Ok(out)
    }

    pub fn exp(&self) -> Result<Self> {
        if !self.is_finite() {
            return Err(Error::NonFinite {
                location: "exp argument".into(),
            });
        }
        let n = self.order;
        let mut out = Self::zero(n);
        out.coeffs[0] = ONE;
        // D E = E * D(arg), solved in lexicographic order.
        for a in 0..=n {
            for b in 0..=n {
                let d = a + b;
                if d == 0 {
                    continue;
                }
                let mut acc = ZERO;
                for i in 0..=a {
                    for j in 0..=b {
                        if i == 0 && j == 0 {
                            continue;
                        }
                        acc += self.coeffs[self.idx(i, j)]
                            * ((i + j) as f64)
                            * out.coeffs[out.idx(a - i, b - j)];
                    }
                }
                let k = out.idx(a, b);
                out.coeffs[k] = acc / d as f64;
            }
        }
        Ok(out.scale(self.coeffs[0].exp()))
    }

    /// `self(first, second)` with both substituted series vanishing at the
    /// origin. The result is boxed to the smallest of the three orders.
    pub fn compose(&self, first: &Self, second: &Self) -> Result<Self> {
        if first.coeffs[0] != ZERO || second.coeffs[0] != ZERO {
            return Err(Error::CompositionConstant);
        }
        let n = self.order.min(first.order).min(second.order);
        let first = first.with_order(n);
        let second = second.with_order(n);
        let mut pw = Vec::with_capacity(n + 1);
        pw.push(Self::one(n));
        for b in 1..=n {
            let next = &pw[b - 1] * &second;
            pw.push(next);
        }
        let inner = |a: usize| {
            let mut s = Self::zero(n);
            for (b, p) in pw.iter().enumerate() {
                let c = self.coeff(a, b);
                if c != ZERO {
                    for (k, v) in p.coeffs.iter().enumerate() {
                        s.coeffs[k] += c * v;
                    }
                }
            }
            s
        };
        let mut acc = inner(n);
        for a in (0..n).rev() {
            acc = &(&acc * &first) + &inner(a);
        }
        Ok(acc)
    }
}

pub(crate) fn powers(x: Complex, n: usize) -> Vec<Complex> {
    let mut v = Vec::with_capacity(n + 1);
    let mut p = ONE;
    for _ in 0..=n {
        v.push(p);
        p *= x;
    }
    v
}

fn zip_with(
    l: &TruncatedSeries2,
    r: &TruncatedSeries2,
    f: impl Fn(Complex, Complex) -> Complex,
) -> TruncatedSeries2 {
    let n = l.order.min(r.order);
    let mut s = TruncatedSeries2::zero(n);
    for a in 0..=n {
        for b in 0..=n {
            let k = s.idx(a, b);
            s.coeffs[k] = f(l.coeffs[l.idx(a, b)], r.coeffs[r.idx(a, b)]);
        }
    }
    s
}

impl Add for &TruncatedSeries2 {
    type Output = TruncatedSeries2;
    fn add(self, rhs: Self) -> TruncatedSeries2 {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &TruncatedSeries2 {
    type Output = TruncatedSeries2;
    fn sub(self, rhs: Self) -> TruncatedSeries2 {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Mul for &TruncatedSeries2 {
    type Output = TruncatedSeries2;
    fn mul(self, rhs: Self) -> TruncatedSeries2 {
        let n = self.order.min(rhs.order);
        let mut out = TruncatedSeries2::zero(n);
        for a1 in 0..=n {
            for b1 in 0..=n {
                let x = self.coeffs[self.idx(a1, b1)];
                if x == ZERO {
                    continue;
                }
                for a2 in 0..=(n - a1) {
                    let row_out = (a1 + a2) * (n + 1) + b1;
                    let row_in = a2 * (rhs.order + 1);
                    for b2 in 0..=(n - b1) {
                        out.coeffs[row_out + b2] += x * rhs.coeffs[row_in + b2];
                    }
                }
            }
        }
        out
    }
}

impl Neg for &TruncatedSeries2 {
    type Output = TruncatedSeries2;
    fn neg(self) -> TruncatedSeries2 {
        self.scale(-ONE)
    }
}
