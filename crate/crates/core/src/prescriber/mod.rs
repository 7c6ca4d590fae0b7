//! Specialization points with prescribed inertia.
//!
//! `lift_to_valuation` produces local points with an exact valuation,
//! `build_recipe` glues them (together with Frobenius residues) into an
//! arithmetic progression of specialization points, and `predict_inertia`
//! gives the inertia class expected at a prime for a given point.

mod certify;
mod lift;
mod predict;
mod recipe;

pub use certify::{certify_group, Certification};
pub use lift::lift_to_valuation;
pub use predict::{
    predict_inertia, ramification_witness, InertiaPrediction, Prediction, Verdict, Witness,
};
pub use recipe::{
    build_recipe, FrobeniusEntry, FrobeniusPrediction, LocalCondition, PrescriptionRequest,
    RamifiedEntry, Recipe,
};

use thiserror::Error;

use crate::arith::ArithError;
use crate::cover::{BadReason, CoverError};
use crate::places::PlacesError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrescriberError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{poly} is not p-integral at p = {p}")]
    NotIntegral { poly: String, p: u64 },
    #[error("{p} is not a prime divisor of {poly}")]
    NotDivisor { poly: String, p: u64 },
    #[error("every root of {poly} mod {p} is repeated, so {p} is a bad prime")]
    DerivativeNotUnit { poly: String, p: u64 },
    #[error("target valuation must be positive")]
    ZeroExponent,
    #[error("prime {0} appears more than once in the request")]
    DuplicatePrime(u64),
    #[error("orbit index {0} out of range")]
    OrbitOutOfRange(usize),
    #[error("{p} is a bad prime: {}", reasons.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("; "))]
    BadPrime { p: u64, reasons: Vec<BadReason> },
    #[error("{p} does not unitize the branch point of orbit {orbit}")]
    NotUnitized { p: u64, orbit: usize },
    #[error("the branch point of orbit {orbit} is not rationalized by {p}")]
    NotRationalized { p: u64, orbit: usize },
    #[error("no residue mod {p} (searched {searched}) gives Frobenius class {class}: {reason}")]
    FrobeniusUnreachable {
        p: u64,
        class: String,
        searched: u64,
        reason: String,
    },
    #[error("local conditions clash: {0}")]
    CrtClash(String),
    #[error("{0} is a branch point")]
    BranchPoint(String),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Places(#[from] PlacesError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
