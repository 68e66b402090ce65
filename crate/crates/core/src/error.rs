use thiserror::Error;

/// Errors raised by the series kernel, the solvers and the calculators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series kinds do not match: {left} vs {right}")]
    KindMismatch {
        left: &'static str,
        right: &'static str,
    },
    #[error("non-finite coefficient at {location}")]
    NonFinite { location: String },
    #[error("constant term {modulus:e} is below the unit tolerance")]
    NotAUnit { modulus: f64 },
    #[error("constant term {re}+{im}i is outside the branch ball around 1")]
    BranchError { re: f64, im: f64 },
    #[error("Laurent bandwidth {needed} exceeds the limit {limit}")]
    BandwidthOverflow { needed: usize, limit: usize },
    #[error("annuli ({0}, {1}) and ({2}, {3}) do not intersect")]
    AnnulusMismatch(f64, f64, f64, f64),
    #[error("invalid annulus ({inner}, {outer})")]
    InvalidAnnulus { inner: f64, outer: f64 },
    #[error("substituted series must vanish at the origin")]
    CompositionConstant,
    #[error("resonance at order {n}: small divisor {divisor:e} below tolerance")]
    Torsion { n: usize, divisor: f64 },
    #[error("order-0 data does not extend across the node: {reason}")]
    NotExtendable { reason: String },
    #[error("partial quotient {value} at position {index} exceeds the bounded-type limit")]
    UnboundedQuotients { index: usize, value: u64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
