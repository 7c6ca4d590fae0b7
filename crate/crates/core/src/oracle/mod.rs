//! Independent ramification oracles for specialized extensions, and the
//! comparison of their output against predicted inertia.

mod newton;
mod verify;

pub use newton::{integral_model, tame_splitting_type, Confidence, RamReport, Segment};
pub use verify::{
    check_point, observe, verify_recipe, Comparison, Expected, MatchStatus, Observed, VerificationRow,
    VerificationTable,
};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{is_prime, vp_int, Int, PolyQ, Rat};
use crate::cover::CoverError;
use crate::prescriber::PrescriberError;

/// Largest defining-polynomial degree the oracles accept.
pub const ORACLE_MAX_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is a square, so the field is Q")]
    Square(String),
    #[error("zero has no square-root field")]
    Zero,
    #[error("degree {0} is beyond the oracle limit of {ORACLE_MAX_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("recipe was built for cover {recipe}, not {cover}")]
    CoverMismatch { recipe: String, cover: String },
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Prescriber(#[from] PrescriberError),
}

fn is_square_int(n: &Int) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Whether `d` is a square in Q.
pub fn is_rational_square(d: &Rat) -> bool {
    !d.is_negative() && is_square_int(d.numer()) && is_square_int(d.denom())
}

/// Whether p ramifies in `Q(sqrt(d))`, for odd p: the valuation of `d` is odd.
pub fn quadratic_ramifies(d: &Rat, p: u64) -> Result<bool, OracleError> {
    if p == 2 || !is_prime(p) {
        return Err(OracleError::NotOddPrime(p));
    }
    if d.is_zero() {
        return Err(OracleError::Zero);
    }
    if is_rational_square(d) {
        return Err(OracleError::Square(crate::arith::format_rat(d)));
    }
    let v = vp_int(d.numer(), p).unwrap_or(0) + vp_int(d.denom(), p).unwrap_or(0);
    Ok(v % 2 == 1)
}

/// Legendre symbol of the p-unit part of `d` (odd p, `d` nonzero with even
/// valuation): whether p splits in `Q(sqrt(d))`.
pub fn quadratic_splits(d: &Rat, p: u64) -> bool {
    let pp = Int::from(p);
    let strip = |n: &Int| {
        let mut n = n.clone();
        while (&n % &pp).is_zero() {
            n /= &pp;
        }
        n
    };
    let unit = strip(d.numer()) * strip(d.denom());
    let r = unit.mod_floor(&pp);
    let exp = (&pp - Int::one()) / Int::from(2);
    r.modpow(&exp, &pp).is_one()
}

/// Factor-degree pattern mod p of the integral model of `f`, when it is
/// squarefree mod p (so p is unramified and the pattern is the Frobenius
/// cycle type).
pub fn frobenius_class(f: &PolyQ, p: u64) -> Result<Option<Vec<usize>>, OracleError> {
    if !is_prime(p) {
        return Err(OracleError::NotPrime(p));
    }
    let g = integral_model(f, p);
    let red = g.reduce_mod_p(p).expect("integral model");
    if !red.is_squarefree() {
        return Ok(None);
    }
    let mut t: Vec<usize> = crate::arith::factor_mod_p(&red, 0)
        .iter()
        .map(|(h, _)| h.degree())
        .collect();
    t.sort_unstable();
    Ok(Some(t))
}
