//! Exact arithmetic substrate: rationals, p-adic valuations, CRT, and
//! univariate polynomials over Q and F_p.
//!
//! Everything here is exact. There is no floating point anywhere in the crate.

mod poly_fp;
mod poly_q;
mod resultant;

pub use poly_fp::{factor_mod_p, PolyFp};
pub use poly_q::PolyQ;
pub use resultant::{discriminant, resultant};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Int = BigInt;
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{value} is not {p}-integral")]
    NotPIntegral { value: String, p: u64 },
    #[error("moduli are not coprime: prime {0} appears more than once")]
    NonCoprimeModuli(u64),
    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

/// A p-adic valuation extended by the two conventional infinities
/// (`v(0) = +inf`, `v(inf) = -inf`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    NegInf,
    Finite(i64),
    PosInf,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_positive(self) -> bool {
        self > Valuation::Finite(0)
    }

    pub fn is_nonnegative(self) -> bool {
        self >= Valuation::Finite(0)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::NegInf => f.write_str("-inf"),
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::PosInf => f.write_str("+inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

/// Exponent of `p` in a nonzero integer; `None` for zero.
pub fn vp_int(n: &Int, p: u64) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p = Int::from(p);
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(k);
        }
        n = q;
        k += 1;
    }
}

/// Exact p-adic valuation of a rational number.
pub fn vp(x: &Rat, p: u64) -> Valuation {
    match vp_int(x.numer(), p) {
        None => Valuation::PosInf,
        Some(a) => {
            let b = vp_int(x.denom(), p).unwrap_or(0);
            Valuation::Finite(a as i64 - b as i64)
        }
    }
}

pub fn is_p_integral(x: &Rat, p: u64) -> bool {
    !(x.denom() % Int::from(p)).is_zero()
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: impl Into<Int>) -> Rat {
    Rat::from_integer(n.into())
}

/// Parses `"n"`, `"-n"` or `"n/d"`.
pub fn parse_rat(s: &str) -> Result<Rat, ArithError> {
    let s = s.trim();
    let bad = || ArithError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = Int::from_str(n.trim()).map_err(|_| bad())?;
            let d = Int::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(Int::from_str(s).map_err(|_| bad())?)),
    }
}

pub fn format_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde adapter storing a rational as the string `"n/d"`.
pub mod rat_serde {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter storing an arbitrary-precision integer as a decimal string.
pub mod int_serde {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Int, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        let s = String::deserialize(d)?;
        Int::from_str(s.trim()).map_err(serde::de::Error::custom)
    }
}

/// Modular inverse of `a` modulo `m` (m > 1), if it exists.
pub fn mod_inverse(a: &Int, m: &Int) -> Option<Int> {
    let a = a.mod_floor(m);
    let ext = a.extended_gcd(m);
    if !ext.gcd.is_one() {
        return None;
    }
    Some(ext.x.mod_floor(m))
}

/// Reduces a rational with denominator prime to `m` into `[0, m)`.
pub fn rat_mod(x: &Rat, m: &Int) -> Option<Int> {
    let inv = mod_inverse(x.denom(), m)?;
    Some((x.numer() * inv).mod_floor(m))
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &b)| b.then_some(k as u64))
        .collect()
}

/// Primes dividing `n` found by trial division up to `bound`; the cofactor
/// left over (1 when fully factored) is returned alongside.
pub fn small_prime_divisors(n: &Int, bound: u64) -> (Vec<u64>, Int) {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return (out, n);
    }
    for q in primes_up_to(bound) {
        let qi = Int::from(q);
        if (&n % &qi).is_zero() {
            out.push(q);
            while (&n % &qi).is_zero() {
                n /= &qi;
            }
        }
        if n.is_one() {
            break;
        }
    }
    (out, n)
}

/// `p^e`, used as a CRT modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u64,
    pub e: u32,
}

impl PrimePower {
    pub fn new(p: u64, e: u32) -> Self {
        PrimePower { p, e }
    }

    pub fn value(&self) -> Int {
        num_traits::pow(Int::from(self.p), self.e as usize)
    }
}

/// Chinese remaindering over prime-power moduli. Each residue may be any
/// `p`-integral rational; the result is the unique integer in `[0, M)` with
/// `v_p(theta - r) >= e` for every input `(r, p^e)`.
pub fn crt(residues: &[(Rat, PrimePower)]) -> Result<Int, ArithError> {
    let mut seen = Vec::with_capacity(residues.len());
    let mut acc = Int::zero();
    let mut modulus = Int::one();
    for (r, pp) in residues {
        if seen.contains(&pp.p) {
            return Err(ArithError::NonCoprimeModuli(pp.p));
        }
        seen.push(pp.p);
        if !is_p_integral(r, pp.p) {
            return Err(ArithError::NotPIntegral {
                value: format_rat(r),
                p: pp.p,
            });
        }
        let m = pp.value();
        let target = rat_mod(r, &m).expect("p-integral residue is invertible mod p^e");
        // acc + modulus * k == target (mod m)
        let inv = mod_inverse(&modulus, &m).expect("distinct primes");
        let k = ((&target - &acc) * inv).mod_floor(&m);
        acc += &modulus * k;
        modulus *= &m;
        acc = acc.mod_floor(&modulus);
    }
    Ok(acc)
}

/// Greatest common divisor on machine integers.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub(crate) fn int_to_u64(x: &Int) -> Option<u64> {
    x.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(vp(&rat_int(50), 5), Valuation::Finite(2));
        assert_eq!(vp(&rat(4, 27), 7), Valuation::Finite(0));
        assert_eq!(vp(&rat(4, 27), 3), Valuation::Finite(-3));
        assert_eq!(vp(&rat_int(0), 13), Valuation::PosInf);
    }

    #[test]
    fn valuation_order() {
        assert!(Valuation::NegInf < Valuation::Finite(-100));
        assert!(Valuation::Finite(100) < Valuation::PosInf);
        assert!(Valuation::PosInf.is_positive());
        assert!(!Valuation::Finite(0).is_positive());
    }

    #[test]
    fn crt_examples() {
        let two_mods = [
            (rat_int(2), PrimePower::new(5, 2)),
            (rat_int(5), PrimePower::new(13, 2)),
        ];
        assert_eq!(crt(&two_mods).unwrap(), Int::from(2202));
        assert_eq!(
            crt(&[(rat_int(0), PrimePower::new(7, 1))]).unwrap(),
            Int::zero()
        );
        let common = [
            (rat_int(1), PrimePower::new(2, 2)),
            (rat_int(1), PrimePower::new(3, 2)),
        ];
        assert_eq!(crt(&common).unwrap(), Int::one());
    }

    #[test]
    fn crt_rational_residue() {
        // 1/2 mod 9 is 5
        let t = crt(&[(rat(1, 2), PrimePower::new(3, 2))]).unwrap();
        assert_eq!(t, Int::from(5));
    }

    #[test]
    fn crt_errors() {
        let dup = [
            (rat_int(1), PrimePower::new(5, 1)),
            (rat_int(2), PrimePower::new(5, 2)),
        ];
        assert_eq!(crt(&dup), Err(ArithError::NonCoprimeModuli(5)));
        let bad = [(rat(1, 5), PrimePower::new(5, 1))];
        assert!(matches!(crt(&bad), Err(ArithError::NotPIntegral { p: 5, .. })));
    }

    #[test]
    fn primality() {
        let sieve = primes_up_to(2000);
        for n in 0..2000u64 {
            assert_eq!(is_prime(n), sieve.contains(&n), "n = {n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("4/27").unwrap(), rat(4, 27));
        assert_eq!(parse_rat(" -6/4 ").unwrap(), rat(-3, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(format_rat(&rat(-3, 2)), "-3/2");
        assert_eq!(format_rat(&rat(8, 4)), "2");
    }

    #[test]
    fn small_divisors() {
        let (ps, rest) = small_prime_divisors(&Int::from(2 * 2 * 3 * 101 * 7919), 200);
        assert_eq!(ps, vec![2, 3, 101]);
        assert_eq!(rest, Int::from(7919));
    }
}
