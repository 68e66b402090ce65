//! Rotation numbers, small divisors and Diophantine certificates.
//!
//! Every guarantee here is finite: a certificate is "validated up to
//! `n_max`", never proved for all `n`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Complex;

/// Small divisors below this are treated as torsion.
pub const TOL_RESONANCE: f64 = 1e-10;

/// Largest partial quotient [`certificate_from_cf`] accepts as bounded.
pub const MAX_BOUNDED_QUOTIENT: u64 = 1000;

/// Cap on brute-force validation in [`certificate_from_cf`].
pub const MAX_VALIDATION: u64 = 1_000_000;

/// `|n theta - m| >= A n^{-alpha}`, validated for `n <= n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(rename = "A")]
    pub a: f64,
    pub alpha: f64,
    pub n_max: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiophantineAngle {
    theta: f64,
    cf: Vec<u64>,
    certificate: Option<Certificate>,
}

impl DiophantineAngle {
    /// Expands `theta` in (0, 1) until a convergent agrees to `1e-15`.
    pub fn from_theta(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::Invalid(format!("theta {theta} is not in (0, 1)")));
        }
        let mut cf = Vec::new();
        let mut x = theta;
        for _ in 0..64 {
            let inv = 1.0 / x;
            let a = inv.floor();
            if !a.is_finite() || a > 1e15 {
                break;
            }
            cf.push(a as u64);
            let (p, q) = convergent(&cf);
            if (p / q - theta).abs() <= 1e-15 {
                break;
            }
            x = inv - a;
            if x <= 0.0 {
                break;
            }
        }
        Ok(Self {
            theta,
            cf,
            certificate: None,
        })
    }

    /// `theta = [0; a1, a2, ...]`. A periodic pattern is repeated until the
    /// denominators pass `1e8`, enough to pin `theta` to double precision.
    pub fn from_cf(cf: &[u64], periodic: bool) -> Result<Self> {
        if cf.is_empty() || cf.iter().any(|&a| a == 0) {
            return Err(Error::Invalid("partial quotients must be positive".into()));
        }
        let mut full = cf.to_vec();
        if periodic {
            while convergent(&full).1 < 1e8 {
                full.extend_from_slice(cf);
            }
        }
        let theta = full.iter().rev().fold(0.0, |x, &a| 1.0 / (a as f64 + x));
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::Invalid(format!("cf {cf:?} does not give theta in (0, 1)")));
        }
        Ok(Self {
            theta,
            cf: full,
            certificate: None,
        })
    }

    /// The golden mean `(sqrt 5 - 1) / 2 = [0; 1, 1, 1, ...]`.
    pub fn golden() -> Self {
        Self::from_cf(&[1], true).expect("golden mean")
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn cf(&self) -> &[u64] {
        &self.cf
    }

    pub fn certificate(&self) -> Option<Certificate> {
        self.certificate
    }

    /// Attaches a certificate after validating it up to `n_max`.
    pub fn with_certificate(mut self, a: f64, alpha: f64, n_max: u64) -> Result<Self> {
        let report = check_certificate(self.theta, a, alpha, n_max);
        if !report.ok {
            return Err(Error::Invalid(format!(
                "certificate (A={a}, alpha={alpha}) fails at n={}",
                report.worst_n
            )));
        }
        self.certificate = Some(Certificate { a, alpha, n_max });
        Ok(self)
    }

    /// Convergents `p_k / q_k` of the stored prefix.
    pub fn convergents(&self) -> Vec<(f64, f64)> {
        (1..=self.cf.len()).map(|k| convergent(&self.cf[..k])).collect()
    }

    pub fn t(&self) -> Complex {
        Complex::from_polar(1.0, 2.0 * PI * self.theta)
    }

    pub fn small_divisor(&self, n: u64) -> f64 {
        small_divisor(self.theta, n)
    }
}

/// `(p_k, q_k)` of `[0; a_1, ..., a_k]` by the standard recurrence, seeded
/// with `p_{-1}/q_{-1} = 1/0` and `p_0/q_0 = 0/1`.
fn convergent(cf: &[u64]) -> (f64, f64) {
    let (mut p0, mut q0, mut p1, mut q1) = (1.0, 0.0, 0.0, 1.0);
    for &a in cf {
        let a = a as f64;
        let (p, q) = (a * p1 + p0, a * q1 + q0);
        p0 = p1;
        q0 = q1;
        p1 = p;
        q1 = q;
    }
    (p1, q1)
}

/// A complex number on the unit circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitCircleConstant {
    t: Complex,
    theta: Option<DiophantineAngle>,
}

impl UnitCircleConstant {
    pub fn new(t: Complex) -> Result<Self> {
        if (t.norm() - 1.0).abs() > 1e-12 || !t.re.is_finite() || !t.im.is_finite() {
            return Err(Error::Invalid(format!("|t| = {} is not 1", t.norm())));
        }
        Ok(Self { t, theta: None })
    }

    pub fn from_angle(theta: DiophantineAngle) -> Self {
        Self {
            t: theta.t(),
            theta: Some(theta),
        }
    }

    pub fn t(&self) -> Complex {
        self.t
    }

    pub fn angle(&self) -> Option<&DiophantineAngle> {
        self.theta.as_ref()
    }

    /// `arg(t) / 2 pi` reduced to `[0, 1)`.
    pub fn theta(&self) -> f64 {
        self.theta
            .as_ref()
            .map_or_else(|| theta_of(self.t), |a| a.theta())
    }

    pub fn small_divisor(&self, n: u64) -> f64 {
        small_divisor(self.theta(), n)
    }
}

/// `arg(t) / 2 pi` in `[0, 1)`.
pub fn theta_of(t: Complex) -> f64 {
    let th = t.arg() / (2.0 * PI);
    if th < 0.0 {
        th + 1.0
    } else {
        th
    }
}

/// Distance of `n theta` to the nearest integer, with the rounding error of
/// the product folded back in.
pub fn dist_to_integer(theta: f64, n: u64) -> f64 {
    let nf = n as f64;
    let p = nf * theta;
    let err = nf.mul_add(theta, -p);
    ((p - p.round()) + err).abs()
}

/// `|1 - e^{2 pi i n theta}| = 2 sin(pi dist(n theta, Z))`.
pub fn small_divisor(theta: f64, n: u64) -> f64 {
    2.0 * (PI * dist_to_integer(theta, n)).sin()
}

/// `|1 - t^n|` for a unit `t`, through the reduced angle.
pub fn divisor_of(t: Complex, n: u64) -> f64 {
    if (t.norm() - 1.0).abs() <= 1e-12 {
        small_divisor(theta_of(t), n)
    } else {
        (Complex::new(1.0, 0.0) - t.powi(n as i32)).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub ok: bool,
    /// Minimizer of `n^alpha dist(n theta, Z)` (the first one on ties).
    pub worst_n: u64,
    pub worst_margin: f64,
    pub n_max: u64,
    /// `A <= 0`: the inequality holds vacuously.
    pub degenerate: bool,
}

/// Brute-force check of `dist(n theta, Z) >= A n^{-alpha}` for `n <= n_max`.
pub fn check_certificate(theta: f64, a: f64, alpha: f64, n_max: u64) -> CertificateReport {
    let mut worst_n = 1;
    let mut worst_margin = f64::INFINITY;
    for n in 1..=n_max.max(1) {
        let margin = (n as f64).powf(alpha) * dist_to_integer(theta, n);
        if margin < worst_margin {
            worst_margin = margin;
            worst_n = n;
        }
    }
    CertificateReport {
        ok: worst_margin >= a,
        worst_n,
        worst_margin,
        n_max: n_max.max(1),
        degenerate: a <= 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CfCertificate {
    pub certificate: Certificate,
    pub bound: u64,
    pub report: CertificateReport,
}

/// Bounded-type certificate: with every partial quotient among the first
/// `depth` at most `B`, `A = 1/(B+2)` and `alpha = 1`, then validated by
/// brute force up to the last convergent denominator (capped at
/// [`MAX_VALIDATION`]).
pub fn certificate_from_cf(angle: &DiophantineAngle, depth: usize) -> Result<CfCertificate> {
    let cf = angle.cf();
    if depth == 0 || cf.len() < depth {
        return Err(Error::Invalid(format!(
            "need {depth} partial quotients, have {}",
            cf.len()
        )));
    }
    let prefix = &cf[..depth];
    if let Some((index, &value)) = prefix
        .iter()
        .enumerate()
        .find(|(_, &a)| a > MAX_BOUNDED_QUOTIENT)
    {
        return Err(Error::UnboundedQuotients { index, value });
    }
    let bound = *prefix.iter().max().expect("nonempty");
    let a = 1.0 / (bound as f64 + 2.0);
    let q = convergent(prefix).1;
    let n_max = (q as u64).min(MAX_VALIDATION);
    let report = check_certificate(angle.theta(), a, 1.0, n_max);
    if !report.ok {
        return Err(Error::Invalid(format!(
            "bounded-type certificate fails at n={}",
            report.worst_n
        )));
    }
    Ok(CfCertificate {
        certificate: Certificate {
            a,
            alpha: 1.0,
            n_max,
        },
        bound,
        report,
    })
}
