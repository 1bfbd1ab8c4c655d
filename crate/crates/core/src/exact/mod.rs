//! Exact arithmetic substrate: integer matrices, `Z[ω]` modulo `Φ_p`,
//! quadratic integers of `Q(√(εp))`, cyclotomic resultants and integer
//! factorisation.

mod cyclotomic;
mod factor;
mod intmat;
mod quadratic;
mod resultant;

use thiserror::Error;

pub use cyclotomic::{cyc_add, cyc_det, cyc_mul, cyc_neg, CyclotomicInt};
pub use factor::{factorize, is_probable_prime, Factorization};
pub use intmat::bareiss_det;
pub use quadratic::{gauss_sum, quad_add, quad_embed, quad_mul, quad_norm, QuadField, QuadInt};
pub use resultant::{cyclo_resultant, resultant};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("operands live in Z[ω_{left}] and Z[ω_{right}]")]
    PrimeMismatch { left: usize, right: usize },
    #[error("exponent {j} is divisible by p = {p}")]
    BadIndex { j: usize, p: usize },
    #[error("group is not of shape n = (p-1)/2")]
    WrongShape,
    #[error("element is not fixed by the squares; it is not in Q(√(εp))")]
    NotInSubfield,
    #[error("parameters out of range: {0}")]
    OutOfRange(String),
    #[error("cannot factor zero")]
    Zero,
    #[error("{0} is not an odd prime")]
    NotPrime(usize),
}
