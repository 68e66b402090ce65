//! Truncated power series and Laurent polynomials over double-precision
//! complex numbers.
//!
//! Every product in this module is a plain convolution accumulated in
//! ascending exponent order (row-major for bivariate series), so results are
//! bitwise reproducible for identical inputs.

mod bivariate;
mod chart;
mod laurent;
mod univariate;

pub use bivariate::TruncatedSeries2;
pub use chart::{compose_chart, fiber_zero_to_laurent, laurent_to_fiber_chart, ChartMap, FiberEnd};
pub use laurent::{Annulus, LaurentPolynomial, LaurentSeries2};
pub use univariate::TruncatedSeries1;

use crate::error::{Error, Result};

/// Coefficient field of every expansion.
pub type Complex = num_complex::Complex64;

/// Smallest admissible modulus of a constant term for [`TruncatedSeries2::invert_unit`].
pub const TOL_UNIT: f64 = 1e-8;

/// Radius of the ball around 1 where the principal logarithm is taken.
pub const BRANCH_RADIUS: f64 = 0.5;

pub(crate) const ZERO: Complex = Complex::new(0.0, 0.0);
pub(crate) const ONE: Complex = Complex::new(1.0, 0.0);

pub(crate) fn check_finite(c: Complex, location: impl FnOnce() -> String) -> Result<()> {
    if c.re.is_finite() && c.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite {
            location: location(),
        })
    }
}

/// Dynamically typed series, for callers that only know the kind at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum Series {
    Univariate(TruncatedSeries1),
    Bivariate(TruncatedSeries2),
    Laurent(LaurentPolynomial),
    LaurentBivariate(LaurentSeries2),
}

impl Series {
    pub fn kind(&self) -> &'static str {
        match self {
            Series::Univariate(_) => "TruncatedSeries1",
            Series::Bivariate(_) => "TruncatedSeries2",
            Series::Laurent(_) => "LaurentPolynomial",
            Series::LaurentBivariate(_) => "LaurentSeries2",
        }
    }

    fn mismatch(&self, other: &Series) -> Error {
        Error::KindMismatch {
            left: self.kind(),
            right: other.kind(),
        }
    }

    pub fn try_add(&self, other: &Series) -> Result<Series> {
        Ok(match (self, other) {
            (Series::Univariate(a), Series::Univariate(b)) => Series::Univariate(a + b),
            (Series::Bivariate(a), Series::Bivariate(b)) => Series::Bivariate(a + b),
            (Series::Laurent(a), Series::Laurent(b)) => Series::Laurent(a.add(b)?),
            (Series::LaurentBivariate(a), Series::LaurentBivariate(b)) => {
                Series::LaurentBivariate(a.add(b)?)
            }
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn try_sub(&self, other: &Series) -> Result<Series> {
        Ok(match (self, other) {
            (Series::Univariate(a), Series::Univariate(b)) => Series::Univariate(a - b),
            (Series::Bivariate(a), Series::Bivariate(b)) => Series::Bivariate(a - b),
            (Series::Laurent(a), Series::Laurent(b)) => Series::Laurent(a.sub(b)?),
            (Series::LaurentBivariate(a), Series::LaurentBivariate(b)) => {
                Series::LaurentBivariate(a.sub(b)?)
            }
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn try_mul(&self, other: &Series) -> Result<Series> {
        Ok(match (self, other) {
            (Series::Univariate(a), Series::Univariate(b)) => Series::Univariate(a * b),
            (Series::Bivariate(a), Series::Bivariate(b)) => Series::Bivariate(a * b),
            (Series::Laurent(a), Series::Laurent(b)) => Series::Laurent(a.mul(b)?),
            (Series::LaurentBivariate(a), Series::LaurentBivariate(b)) => {
                Series::LaurentBivariate(a.mul(b)?)
            }
            _ => return Err(self.mismatch(other)),
        })
    }

    pub fn scale(&self, c: Complex) -> Series {
        match self {
            Series::Univariate(a) => Series::Univariate(a.scale(c)),
            Series::Bivariate(a) => Series::Bivariate(a.scale(c)),
            Series::Laurent(a) => Series::Laurent(a.scale(c)),
            Series::LaurentBivariate(a) => Series::LaurentBivariate(a.scale(c)),
        }
    }
}

/// Upper bound for the supremum of `f` on its annulus:
/// `sum_k |c_k| * max(inner^k, outer^k)`.
pub fn sup_bound(f: &LaurentPolynomial) -> f64 {
    f.sup_bound()
}
