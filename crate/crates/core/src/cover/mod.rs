//! Cover data: the Galois group, branch orbits with inertia classes, an
//! optional defining polynomial, and the good/bad prime classifier.

pub mod datasets;
pub mod file;
mod group;
mod perm;

pub use group::{
    AbstractClass, AbstractGroup, ConjClass, Group, PermGroup, Tristate, G_COMPLETE_LIMIT,
    MAX_GROUP_ORDER,
};
pub use perm::{cycle_type_label, parse_cycle_type, Perm};

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{discriminant, format_rat, PolyQ, Rat};
use crate::places::{reduce_roots, AlgPoint, PlacesError, Provenance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("invalid cover: {0}")]
    Invalid(String),
    #[error("group has more than {0} elements")]
    GroupTooLarge(usize),
    #[error("unknown conjugacy class {0:?}")]
    UnknownClass(String),
    #[error("class label {0:?} matches several classes; add the a/b/... suffix")]
    AmbiguousClass(String),
    #[error("cover has no defining polynomial")]
    NoDefiningPolynomial,
    #[error("P({t0}, X) is not separable; {t0} is (possibly) a branch point")]
    NotSeparable { t0: String },
    #[error(transparent)]
    Places(#[from] PlacesError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchOrbit {
    pub point: AlgPoint,
    pub class: usize,
}

/// `P(T, X) = sum_i c_i(T) X^i`, stored as the list of `c_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariatePoly {
    pub coeffs_in_x: Vec<PolyQ>,
}

impl BivariatePoly {
    pub fn new(mut coeffs_in_x: Vec<PolyQ>) -> Self {
        while coeffs_in_x.last().is_some_and(|c| c.is_zero()) {
            coeffs_in_x.pop();
        }
        BivariatePoly { coeffs_in_x }
    }

    pub fn degree_x(&self) -> usize {
        self.coeffs_in_x.len().saturating_sub(1)
    }

    pub fn is_monic_in_x(&self) -> bool {
        self.coeffs_in_x
            .last()
            .is_some_and(|c| c.degree() == 0 && c.is_monic())
    }

    /// `P(t0, X)`.
    pub fn specialize(&self, t0: &Rat) -> PolyQ {
        PolyQ::new(self.coeffs_in_x.iter().map(|c| c.eval(t0)).collect())
    }

    /// Entry `[i][j]` is the coefficient of `X^i T^j`.
    pub fn table(&self) -> Vec<Vec<Rat>> {
        self.coeffs_in_x.iter().map(|c| c.coeffs().to_vec()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct CoverData {
    pub name: String,
    pub group: Group,
    pub orbits: Vec<BranchOrbit>,
    pub defining_poly: Option<BivariatePoly>,
    pub vertical_ram_primes: Vec<u64>,
    pub centerless: bool,
    caveats: Vec<String>,
}

impl CoverData {
    pub fn new(
        name: impl Into<String>,
        group: Group,
        orbits: Vec<BranchOrbit>,
        defining_poly: Option<BivariatePoly>,
        mut vertical_ram_primes: Vec<u64>,
        centerless: bool,
    ) -> Result<Self, CoverError> {
        let name = name.into();
        if orbits.is_empty() {
            return Err(CoverError::Invalid("at least one branch orbit is required".into()));
        }
        for (i, o) in orbits.iter().enumerate() {
            if o.class >= group.class_count() {
                return Err(CoverError::Invalid(format!("orbit {i}: class index out of range")));
            }
            if group.class_order(o.class) < 2 {
                return Err(CoverError::Invalid(format!(
                    "orbit {i}: inertia class {} is trivial",
                    group.class_label(o.class)
                )));
            }
            for (j, other) in orbits.iter().enumerate().take(i) {
                if other.point == o.point {
                    return Err(CoverError::Invalid(format!("orbits {j} and {i} coincide")));
                }
            }
        }
        if let Some(poly) = &defining_poly {
            if !poly.is_monic_in_x() {
                return Err(CoverError::Invalid("defining polynomial must be monic in X".into()));
            }
            if let Some(n) = group.degree() {
                if poly.degree_x() != n {
                    return Err(CoverError::Invalid(format!(
                        "defining polynomial has X-degree {} but the group acts on {n} points",
                        poly.degree_x()
                    )));
                }
            }
        }
        vertical_ram_primes.sort_unstable();
        vertical_ram_primes.dedup();
        let mut caveats = Vec::new();
        for (i, o) in orbits.iter().enumerate() {
            if o.point.provenance() == Provenance::UserAsserted {
                caveats.push(format!(
                    "orbit {i}: irreducibility of {} is user-asserted",
                    o.point.minpoly()
                ));
            }
        }
        if !centerless {
            caveats.push(
                "vertical ramification is not computed; only the declared primes are treated as vertically ramified"
                    .into(),
            );
        }
        Ok(CoverData {
            name,
            group,
            orbits,
            defining_poly,
            vertical_ram_primes,
            centerless,
            caveats,
        })
    }

    pub fn caveats(&self) -> &[String] {
        &self.caveats
    }

    pub fn class_label(&self, orbit: usize) -> &str {
        self.group.class_label(self.orbits[orbit].class)
    }

    /// Total number of geometric branch points.
    pub fn branch_point_count(&self) -> usize {
        self.orbits.iter().map(|o| o.point.degree()).sum()
    }

    /// `m_t` (product of all finite orbit minimal polynomials).
    pub fn branch_product(&self) -> PolyQ {
        self.orbits
            .iter()
            .fold(PolyQ::one(), |acc, o| &acc * &o.point.minpoly())
    }

    /// `m_{1/t}` (product of all reversed minimal polynomials).
    pub fn reversed_branch_product(&self) -> PolyQ {
        self.orbits
            .iter()
            .fold(PolyQ::one(), |acc, o| &acc * &o.point.reversed_minpoly())
    }

    /// Whether `t0` is one of the branch points.
    pub fn is_branch_point(&self, t0: &crate::places::PointP1) -> bool {
        self.orbits.iter().any(|o| o.point.contains(t0))
    }
}

// ---- Good and bad primes ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum BadReason {
    DividesGroupOrder,
    /// Two distinct branch points (possibly conjugates within one orbit) meet.
    BranchPointsMeet { orbits: (usize, usize) },
    VerticalRamification,
    /// Neither `m_t` nor `m_{1/t}` is p-integral for this orbit, so ramification
    /// of the field of definition is not covered by the meeting test.
    FieldRamificationUndecided { orbit: usize },
}

impl std::fmt::Display for BadReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BadReason::DividesGroupOrder => f.write_str("divides |G|"),
            BadReason::BranchPointsMeet { orbits: (i, j) } if i == j => {
                write!(f, "conjugate branch points of orbit {i} meet")
            }
            BadReason::BranchPointsMeet { orbits: (i, j) } => {
                write!(f, "branch points of orbits {i} and {j} meet")
            }
            BadReason::VerticalRamification => f.write_str("vertical ramification"),
            BadReason::FieldRamificationUndecided { orbit } => write!(
                f,
                "ramification in the field of orbit {orbit} undecided, conservatively bad"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reasons", rename_all = "snake_case")]
pub enum PrimeStatus {
    Good,
    Bad(Vec<BadReason>),
}

impl PrimeStatus {
    pub fn is_good(&self) -> bool {
        matches!(self, PrimeStatus::Good)
    }
}

/// Good/bad classification of a prime.
///
/// Meeting of branch points is decided by reducing every conjugate into
/// P^1 over the algebraic closure of F_p: the roots of nonnegative valuation
/// through the primitive integral model of each minimal polynomial, the others
/// sent to infinity. Two branch points meet exactly when their reductions
/// coincide.
pub fn classify_prime(cover: &CoverData, p: u64) -> PrimeStatus {
    let mut reasons = Vec::new();
    if (cover.group.order() % p).is_zero() {
        reasons.push(BadReason::DividesGroupOrder);
    }
    let reductions: Vec<_> = cover
        .orbits
        .iter()
        .map(|o| reduce_roots(p, &o.point))
        .collect();
    for i in 0..reductions.len() {
        if reductions[i].has_collision() {
            reasons.push(BadReason::BranchPointsMeet { orbits: (i, i) });
        }
        for j in i + 1..reductions.len() {
            if reductions[i].shares_point_with(&reductions[j]) {
                reasons.push(BadReason::BranchPointsMeet { orbits: (i, j) });
            }
        }
    }
    if !cover.centerless && cover.vertical_ram_primes.contains(&p) {
        reasons.push(BadReason::VerticalRamification);
    }
    for (i, o) in cover.orbits.iter().enumerate() {
        if o.point.is_rational() {
            continue;
        }
        if !o.point.minpoly().is_p_integral(p) && !o.point.reversed_minpoly().is_p_integral(p) {
            reasons.push(BadReason::FieldRamificationUndecided { orbit: i });
        }
    }
    if reasons.is_empty() {
        PrimeStatus::Good
    } else {
        PrimeStatus::Bad(reasons)
    }
}

/// `P(t0, X)`, rejecting inseparable specializations.
pub fn specialize_defining_poly(cover: &CoverData, t0: &Rat) -> Result<PolyQ, CoverError> {
    let poly = cover
        .defining_poly
        .as_ref()
        .ok_or(CoverError::NoDefiningPolynomial)?;
    let f = poly.specialize(t0);
    if f.degree() == 0 || discriminant(&f).is_zero() {
        return Err(CoverError::NotSeparable { t0: format_rat(t0) });
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::datasets;
    use super::*;
    use crate::arith::{primes_up_to, rat};

    #[test]
    fn trinomial_bad_primes() {
        let c = datasets::trinomial(3, 1, 2, 1).unwrap();
        assert!(classify_prime(&c, 5).is_good());
        assert_eq!(
            classify_prime(&c, 3),
            PrimeStatus::Bad(vec![
                BadReason::DividesGroupOrder,
                BadReason::BranchPointsMeet { orbits: (1, 2) }
            ])
        );
        let bad: Vec<u64> = primes_up_to(200)
            .into_iter()
            .filter(|&p| !classify_prime(&c, p).is_good())
            .collect();
        assert_eq!(bad, vec![2, 3]);
    }

    #[test]
    fn conjugate_branch_points_meet_at_two() {
        let c = datasets::quadratic("t2p1", &[PolyQ::from_ints(&[1, 0, 1])]).unwrap();
        let PrimeStatus::Bad(reasons) = classify_prime(&c, 2) else {
            panic!("2 must be bad")
        };
        assert!(reasons.contains(&BadReason::BranchPointsMeet { orbits: (0, 0) }));
        assert!(classify_prime(&c, 5).is_good());
    }

    #[test]
    fn monster_good_primes() {
        let c = datasets::monster();
        let good: Vec<u64> = primes_up_to(200)
            .into_iter()
            .filter(|&p| classify_prime(&c, p).is_good())
            .collect();
        let expected: Vec<u64> = primes_up_to(200)
            .into_iter()
            .filter(|&p| p >= 73 || [37, 43, 53, 61, 67].contains(&p))
            .collect();
        assert_eq!(good, expected);
    }

    #[test]
    fn specialization() {
        let c = datasets::trinomial(3, 1, 2, 1).unwrap();
        assert_eq!(
            specialize_defining_poly(&c, &rat(38, 1)).unwrap(),
            PolyQ::from_ints(&[1444, -38, 0, 1])
        );
        assert!(matches!(
            specialize_defining_poly(&c, &rat(4, 27)),
            Err(CoverError::NotSeparable { .. })
        ));
        let m = datasets::mestre_a5().unwrap();
        assert_eq!(
            specialize_defining_poly(&m, &rat(0, 1)).unwrap(),
            PolyQ::from_ints(&[0, -1, 0, 0, 0, 1])
        );
    }

    #[test]
    fn vertical_ramification_is_ignored_when_centerless() {
        let mut c = datasets::trinomial(3, 1, 2, 1).unwrap();
        c.vertical_ram_primes = vec![7];
        assert!(classify_prime(&c, 7).is_good());
        c.centerless = false;
        assert!(!classify_prime(&c, 7).is_good());
    }

    #[test]
    fn validation() {
        let g = Group::Perm(PermGroup::symmetric(3).unwrap());
        let id = g.find_class("[1^3]").unwrap();
        let trivial = BranchOrbit {
            point: AlgPoint::zero(),
            class: id,
        };
        assert!(CoverData::new("x", g.clone(), vec![trivial], None, vec![], true).is_err());
        assert!(CoverData::new("x", g, vec![], None, vec![], true).is_err());
    }
}
