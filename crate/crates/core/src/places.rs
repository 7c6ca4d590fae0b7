//! Local notions at a rational prime p: meeting, intersection multiplicity,
//! unitization, rationalization and prime divisors.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{
    format_rat, is_p_integral, parse_rat, primes_up_to, rat_mod, vp, ArithError, Int, PolyFp,
    PolyQ, Rat, Valuation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlacesError {
    #[error("minimal polynomial must have degree at least 1")]
    ConstantMinpoly,
    #[error("minimal polynomial {0} is reducible over Q")]
    Reducible(String),
    #[error("constant coefficient of {poly} is not a {p}-adic unit")]
    ConstantNotUnit { poly: String, p: u64 },
    #[error("{t0} is a root of the minimal polynomial; intersection multiplicity is infinite")]
    RootOfMinpoly { t0: String },
    #[error("meeting undecidable at {p}: minimal polynomial {poly} is not {p}-integral")]
    MeetingUndecidable { poly: String, p: u64 },
    #[error("{poly} is not monic with {p}-integral coefficients")]
    NotMonicIntegral { poly: String, p: u64 },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

// ---- Points ----

/// A point of P^1(Q).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PointP1 {
    Finite(Rat),
    Infinity,
}

impl PointP1 {
    pub fn finite(x: Rat) -> Self {
        PointP1::Finite(x)
    }

    pub fn valuation(&self, p: u64) -> Valuation {
        match self {
            PointP1::Finite(x) => vp(x, p),
            PointP1::Infinity => Valuation::NegInf,
        }
    }

    /// `1/t` with `1/0 = inf` and `1/inf = 0`.
    pub fn inverse(&self) -> Self {
        match self {
            PointP1::Infinity => PointP1::Finite(Rat::zero()),
            PointP1::Finite(x) if x.is_zero() => PointP1::Infinity,
            PointP1::Finite(x) => PointP1::Finite(x.recip()),
        }
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            PointP1::Finite(x) => Some(x),
            PointP1::Infinity => None,
        }
    }
}

impl fmt::Display for PointP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointP1::Finite(x) => f.write_str(&format_rat(x)),
            PointP1::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for PointP1 {
    type Err = ArithError;
    fn from_str(s: &str) -> Result<Self, ArithError> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(PointP1::Infinity),
            other => Ok(PointP1::Finite(parse_rat(other)?)),
        }
    }
}

impl Serialize for PointP1 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PointP1 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Irreducibility proven by degree patterns (or trivially, degree 1).
    Verified,
    /// Degree-pattern sieving was inconclusive; irreducibility is taken on trust.
    UserAsserted,
}

/// An algebraic point of P^1 given by its monic minimal polynomial over Q,
/// or the point at infinity (minimal polynomial 1 by convention).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AlgPoint {
    Finite { minpoly: PolyQ, provenance: Provenance },
    Infinity,
}

const SIEVE_PRIMES: usize = 25;

impl AlgPoint {
    /// Normalizes to monic and checks irreducibility by mod-p degree patterns.
    pub fn from_minpoly(poly: PolyQ) -> Result<Self, PlacesError> {
        if poly.is_zero() || poly.degree() == 0 {
            return Err(PlacesError::ConstantMinpoly);
        }
        let poly = poly.monic();
        let provenance = irreducibility(&poly)?;
        Ok(AlgPoint::Finite {
            minpoly: poly,
            provenance,
        })
    }

    /// Trusts the caller on irreducibility (still normalized to monic).
    pub fn asserted(poly: PolyQ) -> Result<Self, PlacesError> {
        if poly.is_zero() || poly.degree() == 0 {
            return Err(PlacesError::ConstantMinpoly);
        }
        Ok(AlgPoint::Finite {
            minpoly: poly.monic(),
            provenance: Provenance::UserAsserted,
        })
    }

    pub fn rational(x: Rat) -> Self {
        AlgPoint::Finite {
            minpoly: PolyQ::linear_root(&x),
            provenance: Provenance::Verified,
        }
    }

    pub fn zero() -> Self {
        Self::rational(Rat::zero())
    }

    pub fn from_point(t: &PointP1) -> Self {
        match t {
            PointP1::Finite(x) => Self::rational(x.clone()),
            PointP1::Infinity => AlgPoint::Infinity,
        }
    }

    /// `m_t`; the constant 1 for infinity.
    pub fn minpoly(&self) -> PolyQ {
        match self {
            AlgPoint::Finite { minpoly, .. } => minpoly.clone(),
            AlgPoint::Infinity => PolyQ::one(),
        }
    }

    /// `m_{1/t}`: `(1/a0) T^n m_t(1/T)`, with `m_{1/0} = 1` and `m_{1/inf} = T`.
    pub fn reversed_minpoly(&self) -> PolyQ {
        self.reverse().minpoly()
    }

    pub fn reverse(&self) -> AlgPoint {
        match self {
            AlgPoint::Infinity => AlgPoint::zero(),
            _ if self.is_zero() => AlgPoint::Infinity,
            AlgPoint::Finite {
                minpoly,
                provenance,
            } => AlgPoint::Finite {
                minpoly: minpoly.reverse().monic(),
                provenance: *provenance,
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, AlgPoint::Finite { minpoly, .. }
            if minpoly.degree() == 1 && minpoly.coeff(0).is_zero())
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, AlgPoint::Infinity)
    }

    pub fn is_zero_or_infinity(&self) -> bool {
        self.is_zero() || self.is_infinity()
    }

    /// Number of conjugates; infinity counts as one point.
    pub fn degree(&self) -> usize {
        match self {
            AlgPoint::Finite { minpoly, .. } => minpoly.degree(),
            AlgPoint::Infinity => 1,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn rational_value(&self) -> Option<PointP1> {
        match self {
            AlgPoint::Infinity => Some(PointP1::Infinity),
            AlgPoint::Finite { minpoly, .. } if minpoly.degree() == 1 => {
                Some(PointP1::Finite(-minpoly.coeff(0)))
            }
            _ => None,
        }
    }

    pub fn provenance(&self) -> Provenance {
        match self {
            AlgPoint::Finite { provenance, .. } => *provenance,
            AlgPoint::Infinity => Provenance::Verified,
        }
    }

    /// True when `t` is one of the conjugates of this point.
    pub fn contains(&self, t: &PointP1) -> bool {
        match (self, t) {
            (AlgPoint::Infinity, PointP1::Infinity) => true,
            (AlgPoint::Finite { minpoly, .. }, PointP1::Finite(x)) => minpoly.eval(x).is_zero(),
            _ => false,
        }
    }
}

impl fmt::Display for AlgPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rational_value() {
            Some(t) => write!(f, "{t}"),
            None => write!(f, "root of {}", self.minpoly()),
        }
    }
}

fn irreducibility(poly: &PolyQ) -> Result<Provenance, PlacesError> {
    let n = poly.degree();
    if n == 1 {
        return Ok(Provenance::Verified);
    }
    if !poly.is_squarefree() {
        return Err(PlacesError::Reducible(poly.to_string()));
    }
    if n <= 12 && !poly.rational_roots().is_empty() {
        return Err(PlacesError::Reducible(poly.to_string()));
    }
    let prim = PolyQ::from_int_vec(poly.primitive_part());
    let mut possible: Vec<bool> = (0..=n).map(|d| d > 0 && d < n).collect();
    let mut used = 0;
    for p in primes_up_to(2000) {
        if used == SIEVE_PRIMES {
            break;
        }
        let Some(red) = prim.reduce_mod_p(p) else {
            continue;
        };
        if red.degree() != n || !red.is_squarefree() {
            continue;
        }
        used += 1;
        let pattern = red.degree_pattern();
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for d in pattern {
            for s in (d..=n).rev() {
                if sums[s - d] {
                    sums[s] = true;
                }
            }
        }
        for d in 0..=n {
            possible[d] &= sums[d];
        }
        if !possible.iter().any(|&b| b) {
            return Ok(Provenance::Verified);
        }
    }
    Ok(Provenance::UserAsserted)
}

// ---- Local predicates ----

pub fn reverse_minpoly(t1: &AlgPoint) -> AlgPoint {
    t1.reverse()
}

/// True iff `m_t` is p-integral with unit constant coefficient (so `t` and
/// `1/t` are both integral). Never true for 0 or infinity.
pub fn unitizes(p: u64, t1: &AlgPoint) -> bool {
    if t1.is_zero_or_infinity() {
        return false;
    }
    let m = t1.minpoly();
    m.is_p_integral(p) && vp(&m.coeff(0), p) == Valuation::Finite(0)
}

/// True iff both `t` and `1/t` are integral at p. Holds for 0 and infinity.
pub fn integral_at(p: u64, t1: &AlgPoint) -> bool {
    t1.is_zero_or_infinity() || unitizes(p, t1)
}

fn check_constant_unit(p: u64, t1: &AlgPoint) -> Result<(), PlacesError> {
    if t1.is_zero() {
        return Ok(());
    }
    let m = t1.minpoly();
    if vp(&m.coeff(0), p) != Valuation::Finite(0) {
        return Err(PlacesError::ConstantNotUnit {
            poly: m.to_string(),
            p,
        });
    }
    Ok(())
}

/// `I_p(t0, t1)`: `v_p(m_{t1}(t0))` when `v_p(t0) >= 0`, and
/// `v_p(m_{1/t1}(1/t0))` when `v_p(t0) <= 0`. At `v_p(t0) = 0` both branches
/// are computed and must agree.
pub fn intersection_multiplicity(
    p: u64,
    t0: &PointP1,
    t1: &AlgPoint,
) -> Result<Valuation, PlacesError> {
    check_constant_unit(p, t1)?;
    if t1.contains(t0) {
        return Err(PlacesError::RootOfMinpoly {
            t0: t0.to_string(),
        });
    }
    let v0 = t0.valuation(p);
    let direct = match t0 {
        PointP1::Finite(x) if v0.is_nonnegative() => Some(vp(&t1.minpoly().eval(x), p)),
        _ => None,
    };
    let reversed = match t0.inverse() {
        PointP1::Finite(y) if v0 <= Valuation::Finite(0) => {
            Some(vp(&t1.reversed_minpoly().eval(&y), p))
        }
        _ => None,
    };
    match (direct, reversed) {
        (Some(a), Some(b)) => {
            assert_eq!(a, b, "intersection multiplicity branches disagree");
            Ok(a)
        }
        (Some(a), None) | (None, Some(a)) => Ok(a),
        (None, None) => unreachable!("every point has v >= 0 or v <= 0"),
    }
}

/// Meeting through the criterion `I_p(t0, t1) > 0`, valid when `m_{t1}` is
/// p-integral.
pub fn meets(p: u64, t0: &PointP1, t1: &AlgPoint) -> Result<bool, PlacesError> {
    let m = t1.minpoly();
    if !m.is_p_integral(p) {
        return Err(PlacesError::MeetingUndecidable {
            poly: m.to_string(),
            p,
        });
    }
    Ok(intersection_multiplicity(p, t0, t1)?.is_positive())
}

/// Whether some rational `t0` has `v_p(f(t0)) > 0`, for monic p-integral `f`.
pub fn is_prime_divisor(p: u64, f: &PolyQ) -> Result<bool, PlacesError> {
    if !f.is_monic() || !f.is_p_integral(p) {
        return Err(PlacesError::NotMonicIntegral {
            poly: f.to_string(),
            p,
        });
    }
    let red = f.reduce_mod_p(p).expect("p-integral");
    Ok(red.has_root())
}

/// Whether `m_{t1}` has a root mod p; rational points are always rationalized.
pub fn rationalized_by(p: u64, t1: &AlgPoint) -> Result<bool, PlacesError> {
    if t1.is_rational() {
        return Ok(true);
    }
    is_prime_divisor(p, &t1.minpoly())
}

// ---- Reduction into P^1(F_p-bar) ----

/// A point of P^1(F_p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Residue {
    Finite(u64),
    Infinity,
}

pub fn reduce_point(p: u64, t0: &PointP1) -> Residue {
    match t0 {
        PointP1::Finite(x) => match rat_mod(x, &Int::from(p)) {
            Some(r) => Residue::Finite(r.try_into().expect("below p")),
            None => Residue::Infinity,
        },
        PointP1::Infinity => Residue::Infinity,
    }
}

/// The multiset of reductions of the roots of a polynomial: the finite ones
/// as a monic polynomial over F_p, the ones at infinity by count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootReduction {
    pub finite: PolyFp,
    pub at_infinity: usize,
}

impl RootReduction {
    /// Whether two of the roots reduce to the same point.
    pub fn has_collision(&self) -> bool {
        self.at_infinity >= 2 || !self.finite.is_squarefree() && self.finite.degree() > 0
    }

    pub fn shares_point_with(&self, other: &RootReduction) -> bool {
        (self.at_infinity > 0 && other.at_infinity > 0)
            || self.finite.gcd(&other.finite).degree() > 0
    }

    pub fn contains(&self, r: Residue) -> bool {
        match r {
            Residue::Infinity => self.at_infinity > 0,
            Residue::Finite(a) => self.finite.degree() > 0 && self.finite.eval(a) == 0,
        }
    }
}

/// Reduction of the conjugates of `t1` into P^1 over the algebraic closure of
/// F_p. Roots of nonnegative valuation reduce through the primitive integral
/// model; the degree drop of that model counts the roots of negative valuation.
pub fn reduce_roots(p: u64, t1: &AlgPoint) -> RootReduction {
    match t1 {
        AlgPoint::Infinity => RootReduction {
            finite: PolyFp::one(p),
            at_infinity: 1,
        },
        AlgPoint::Finite { minpoly, .. } => {
            let prim = PolyQ::from_int_vec(minpoly.primitive_part());
            let red = prim.reduce_mod_p(p).expect("primitive model is integral");
            RootReduction {
                at_infinity: minpoly.degree() - red.degree(),
                finite: red.monic(),
            }
        }
    }
}

/// Exact meeting test: some conjugate of `t1` has the same image as `t0` in
/// P^1 of the residue field. Needs no integrality hypothesis.
pub fn meets_by_reduction(p: u64, t0: &PointP1, t1: &AlgPoint) -> bool {
    reduce_roots(p, t1).contains(reduce_point(p, t0))
}

/// Whether `x` is a p-adic unit.
pub fn is_unit(x: &Rat, p: u64) -> bool {
    !x.is_zero() && is_p_integral(x, p) && is_p_integral(&x.recip(), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    fn i_orbit() -> AlgPoint {
        AlgPoint::from_minpoly(PolyQ::from_ints(&[1, 0, 1])).unwrap()
    }

    fn fin(n: i64, d: i64) -> PointP1 {
        PointP1::Finite(rat(n, d))
    }

    #[test]
    fn reversal() {
        assert_eq!(i_orbit().reversed_minpoly(), PolyQ::from_ints(&[1, 0, 1]));
        let t = AlgPoint::rational(rat(4, 27));
        assert_eq!(t.reversed_minpoly(), PolyQ::linear_root(&rat(27, 4)));
        assert_eq!(AlgPoint::Infinity.reversed_minpoly(), PolyQ::x());
        assert_eq!(AlgPoint::zero().reversed_minpoly(), PolyQ::one());
        assert_eq!(t.reverse().reverse(), t);
    }

    #[test]
    fn unitization() {
        assert!(unitizes(5, &i_orbit()));
        assert!(unitizes(7, &AlgPoint::rational(rat(4, 27))));
        assert!(!unitizes(3, &AlgPoint::rational(rat(4, 27))));
        assert!(!unitizes(5, &AlgPoint::zero()));
        assert!(!unitizes(5, &AlgPoint::Infinity));
        assert!(integral_at(5, &AlgPoint::Infinity));
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(
            intersection_multiplicity(5, &fin(2, 1), &i_orbit()).unwrap(),
            Valuation::Finite(1)
        );
        assert_eq!(
            intersection_multiplicity(5, &fin(1, 5), &AlgPoint::Infinity).unwrap(),
            Valuation::Finite(1)
        );
        assert_eq!(
            intersection_multiplicity(13, &fin(2202, 1), &i_orbit()).unwrap(),
            Valuation::Finite(1)
        );
        assert_eq!(
            intersection_multiplicity(5, &PointP1::Infinity, &AlgPoint::zero()).unwrap(),
            Valuation::Finite(0)
        );
        assert_eq!(
            intersection_multiplicity(5, &fin(0, 1), &AlgPoint::zero()),
            Err(PlacesError::RootOfMinpoly { t0: "0".into() })
        );
        assert!(matches!(
            intersection_multiplicity(3, &fin(1, 1), &AlgPoint::rational(rat(4, 27))),
            Err(PlacesError::ConstantNotUnit { p: 3, .. })
        ));
    }

    #[test]
    fn meeting_examples() {
        assert!(meets(5, &fin(2, 1), &i_orbit()).unwrap());
        assert!(!meets(7, &fin(3, 1), &i_orbit()).unwrap());
        assert!(meets(3, &fin(1, 1), &AlgPoint::rational(rat(1, 3))).is_err());
    }

    #[test]
    fn prime_divisor_examples() {
        assert!(is_prime_divisor(5, &PolyQ::from_ints(&[1, 0, 1])).unwrap());
        assert!(!is_prime_divisor(7, &PolyQ::from_ints(&[1, 0, 1])).unwrap());
        let f = &PolyQ::linear_root(&rat(4, 27)) * &PolyQ::linear_root(&rat(27, 4));
        assert!(is_prime_divisor(7, &f).unwrap());
        assert!(is_prime_divisor(7, &PolyQ::from_ints(&[1, 0, 2])).is_err());
    }

    #[test]
    fn rationalization() {
        assert!(rationalized_by(5, &i_orbit()).unwrap());
        assert!(!rationalized_by(7, &i_orbit()).unwrap());
        assert!(rationalized_by(11, &AlgPoint::rational(rat(4, 27))).unwrap());
    }

    #[test]
    fn irreducibility_sieve() {
        let quartic = PolyQ::new(vec![rat(1, 84375), rat_int(0), rat_int(0), rat_int(0), rat_int(1)]);
        assert_eq!(
            AlgPoint::from_minpoly(quartic).unwrap().provenance(),
            Provenance::Verified
        );
        // T^4 + 1 splits mod every prime, so sieving cannot prove it irreducible
        let cyclo = PolyQ::from_ints(&[1, 0, 0, 0, 1]);
        assert_eq!(
            AlgPoint::from_minpoly(cyclo).unwrap().provenance(),
            Provenance::UserAsserted
        );
        let reducible = PolyQ::from_ints(&[-1, 0, 1]);
        assert!(AlgPoint::from_minpoly(reducible).is_err());
        let quad_times_quad = PolyQ::from_ints(&[1, 0, 1]) * PolyQ::from_ints(&[-2, 0, 1]);
        assert!(matches!(
            AlgPoint::from_minpoly(quad_times_quad).unwrap().provenance(),
            Provenance::UserAsserted
        ));
    }

    #[test]
    fn reduction_counts_roots_at_infinity() {
        // T^2 + T/9 + 1 at p = 3 has one root of valuation -2 and one of valuation 2
        let t = AlgPoint::asserted(PolyQ::new(vec![rat_int(1), rat(1, 9), rat_int(1)])).unwrap();
        let red = reduce_roots(3, &t);
        assert_eq!(red.at_infinity, 1);
        assert_eq!(red.finite.degree(), 1);
        assert!(red.contains(Residue::Finite(0)));
        assert!(!red.has_collision());
        assert!(meets_by_reduction(3, &fin(3, 1), &t));
        assert!(meets_by_reduction(3, &fin(1, 3), &t));
        assert!(!meets_by_reduction(3, &fin(1, 1), &t));
        // i and -i collide mod 2
        assert!(reduce_roots(2, &i_orbit()).has_collision());
        assert!(!reduce_roots(3, &i_orbit()).has_collision());
    }
}
