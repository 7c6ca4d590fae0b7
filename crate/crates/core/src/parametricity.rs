//! Sufficient conditions for a cover not to be G-parametric, by comparing
//! its branch point arithmetic and inertia with a second cover of the same
//! group.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{is_prime, primes_up_to, small_prime_divisors, Int, PolyQ, Rat};
use crate::cover::{classify_prime, CoverData, Group};
use crate::places::{integral_at, is_prime_divisor, rationalized_by, AlgPoint};
use crate::prescriber::{build_recipe, PrescriptionRequest, RamifiedEntry, Recipe};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParametricityError {
    #[error("the covers have different groups ({0})")]
    GroupMismatch(String),
    #[error("power maps of the abstract group {0} are unknown")]
    PowerMapsUnknown(String),
    #[error("{0} is not a symmetric group of degree at least 3")]
    NotSymmetric(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Hypothesis {
    #[serde(rename = "BPH")]
    BranchPoint,
    #[serde(rename = "IH")]
    Inertia,
}

/// Witness primes for the branch point hypothesis as congruence classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Congruences {
    pub modulus: u64,
    pub residues: Vec<u64>,
}

impl Congruences {
    pub fn contains(&self, p: u64) -> bool {
        self.residues.contains(&(p % self.modulus))
    }
}

impl std::fmt::Display for Congruences {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.residues.is_empty() {
            return write!(f, "none");
        }
        let r: Vec<String> = self.residues.iter().map(|r| r.to_string()).collect();
        write!(f, "p ≡ {} mod {}", r.join(", "), self.modulus)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParametricityVerdict {
    pub hypothesis: Hypothesis,
    pub holds: bool,
    /// False when the verdict rests on a finite prime window.
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness_classes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_congruences: Option<Congruences>,
    /// Primes in the window dividing the first branch product but not the second.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness_primes: Vec<u64>,
    /// Witness primes that are good and unitizing for both covers.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub admissible_primes: Vec<u64>,
    /// Primes left out of the window comparison: bad, non-integral branch data
    /// or dividing the congruence modulus.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flagged_primes: Vec<u64>,
    pub consequence: String,
    pub notes: Vec<String>,
}

fn same_group(c1: &CoverData, c2: &CoverData) -> Result<(), ParametricityError> {
    let ok = match (&c1.group, &c2.group) {
        (Group::Perm(a), Group::Perm(b)) => {
            a.degree() == b.degree()
                && a.order() == b.order()
                && a.classes().iter().map(|c| &c.label).eq(b.classes().iter().map(|c| &c.label))
        }
        (Group::Abstract(a), Group::Abstract(b)) => a.name == b.name && a.order == b.order,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(ParametricityError::GroupMismatch(format!(
            "{} and {}",
            c1.name, c2.name
        )))
    }
}

/// Labels of every `C^a`, `C` an inertia class of the cover, `1 <= a <= ord(C)`.
pub fn power_closure(c: &CoverData) -> Result<BTreeSet<String>, ParametricityError> {
    let mut out = BTreeSet::new();
    for o in &c.orbits {
        for a in 1..=c.group.class_order(o.class) {
            let k = c
                .group
                .class_power(o.class, a)
                .ok_or_else(|| ParametricityError::PowerMapsUnknown(c.name.clone()))?;
            out.insert(c.group.class_label(k).to_string());
        }
    }
    Ok(out)
}

fn consequence(c1: &CoverData, c2: &CoverData, holds: bool, geometric: bool) -> String {
    if !holds {
        return "no conclusion".into();
    }
    let mut s = format!(
        "{} is not G-parametric: infinitely many linearly disjoint specializations of {} with group G are not specializations of {}",
        c2.name, c1.name, c2.name
    );
    if geometric {
        s.push_str(", over every number field");
    }
    s
}

/// Whether some inertia class of `c1` is not a power of an inertia class of `c2`.
pub fn check_inertia_hypothesis(
    c1: &CoverData,
    c2: &CoverData,
) -> Result<ParametricityVerdict, ParametricityError> {
    same_group(c1, c2)?;
    let closure = power_closure(c2)?;
    let mut witnesses: Vec<String> = Vec::new();
    for i in 0..c1.orbits.len() {
        let label = c1.class_label(i).to_string();
        if !closure.contains(&label) && !witnesses.contains(&label) {
            witnesses.push(label);
        }
    }
    let holds = !witnesses.is_empty();
    Ok(ParametricityVerdict {
        hypothesis: Hypothesis::Inertia,
        holds,
        exact: true,
        window: None,
        witness_classes: witnesses,
        witness_congruences: None,
        witness_primes: vec![],
        admissible_primes: vec![],
        flagged_primes: vec![],
        consequence: consequence(c1, c2, holds, true),
        notes: vec![format!(
            "power closure of {}: {}",
            c2.name,
            closure.into_iter().collect::<Vec<_>>().join(", ")
        )],
    })
}

/// Primes satisfying the admissibility conditions on both covers for an
/// orbit `l` of `c1`: good for both, `c1` unitizes `t_l`, `c2` unitizes
/// every branch point.
fn admissible(c1: &CoverData, l: usize, c2: &CoverData, p: u64) -> bool {
    classify_prime(c1, p).is_good()
        && classify_prime(c2, p).is_good()
        && integral_at(p, &c1.orbits[l].point)
        && c2.orbits.iter().all(|o| integral_at(p, &o.point))
}

/// A recipe on `c1` ramified at an admissible prime `p <= window` with
/// inertia in a class outside the power closure of `c2`.
pub fn inertia_witness_recipe(
    c1: &CoverData,
    c2: &CoverData,
    window: u64,
) -> Result<Option<Recipe>, ParametricityError> {
    let verdict = check_inertia_hypothesis(c1, c2)?;
    for p in primes_up_to(window) {
        for l in 0..c1.orbits.len() {
            if !verdict.witness_classes.iter().any(|w| w == c1.class_label(l)) {
                continue;
            }
            if !admissible(c1, l, c2, p) || !rationalized_by(p, &c1.orbits[l].point).unwrap_or(false)
            {
                continue;
            }
            let req = PrescriptionRequest {
                ramified: vec![RamifiedEntry { p, orbit: l, a: 1 }],
                frobenius: vec![],
            };
            if let Ok(r) = build_recipe(c1, &req, p, 0) {
                return Ok(Some(r));
            }
        }
    }
    Ok(None)
}

/// Orbits of `c` whose minimal polynomial (or that of the inverse) has a root
/// mod p; `None` when neither is p-integral for some orbit.
pub fn divisor_orbits(c: &CoverData, p: u64) -> Option<Vec<usize>> {
    let mut out = Vec::new();
    for (i, o) in c.orbits.iter().enumerate() {
        if o.point.is_rational() {
            out.push(i);
            continue;
        }
        let m = o.point.minpoly();
        let m_inv = o.point.reversed_minpoly();
        let hit = if m.is_p_integral(p) {
            is_prime_divisor(p, &m).ok()?
        } else if m_inv.is_p_integral(p) {
            is_prime_divisor(p, &m_inv).ok()?
        } else {
            return None;
        };
        if hit {
            out.push(i);
        }
    }
    Some(out)
}

/// `b^2 - 4c` of a monic quadratic, as an integer with the same square class.
fn quadratic_disc(m: &PolyQ) -> Int {
    let d = m.coeff(1) * m.coeff(1) - Rat::from_integer(4.into()) * m.coeff(0);
    d.numer() * d.denom()
}

/// Squarefree part when the integer factors over small primes.
fn squarefree_part(n: &Int) -> Int {
    let (primes, rest) = small_prime_divisors(n, 100_000);
    if !rest.abs().is_one() {
        return n.clone();
    }
    let mut out = if n.is_negative() { -Int::one() } else { Int::one() };
    for q in primes {
        if crate::arith::vp_int(n, q).unwrap_or(0) % 2 == 1 {
            out *= Int::from(q);
        }
    }
    out
}

fn legendre(d: &Int, p: u64) -> i32 {
    let pp = Int::from(p);
    let r = d.mod_floor(&pp);
    if r.is_zero() {
        return 0;
    }
    if p == 2 {
        return 1;
    }
    if r.modpow(&((&pp - 1u32) / 2u32), &pp).is_one() {
        1
    } else {
        -1
    }
}

/// Branch data of a cover with all orbits of degree at most 2: whether some
/// branch point is rational, and the discriminants of the quadratic orbits.
struct QuadraticLocus {
    rational: bool,
    discs: Vec<Int>,
}

fn quadratic_locus(c: &CoverData) -> Option<QuadraticLocus> {
    let mut rational = false;
    let mut discs = Vec::new();
    for o in &c.orbits {
        match o.point.degree() {
            1 => rational = true,
            2 => discs.push(squarefree_part(&quadratic_disc(&o.point.minpoly()))),
            _ => return None,
        }
    }
    Some(QuadraticLocus { rational, discs })
}

impl QuadraticLocus {
    /// Whether p divides the branch product, for p coprime to every discriminant.
    fn divides(&self, p: u64) -> bool {
        self.rational || self.discs.iter().any(|d| legendre(d, p) == 1)
    }
}

/// The set of residues mod `modulus` (coprime to it) of primes with a property
/// that only depends on the residue; evaluated at the least prime in each class.
fn residue_classes(modulus: u64, property: impl Fn(u64) -> bool) -> Vec<u64> {
    let mut out = Vec::new();
    for r in 1..modulus.max(2) {
        if r.gcd(&modulus) != 1 {
            continue;
        }
        let mut p = if r < 3 { r + modulus } else { r };
        while !is_prime(p) || p < 3 {
            p += modulus;
        }
        if property(p) {
            out.push(r);
        }
    }
    out
}

/// The smallest modulus dividing `modulus` on which the class set is a union
/// of full fibres.
fn minimize(c: Congruences) -> Congruences {
    let n = c.modulus;
    let mut divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    divisors.sort_unstable();
    for d in divisors {
        let coprime = |r: u64| r.gcd(&n) == 1;
        let constant_on_fibres = (0..n).filter(|&r| coprime(r)).all(|r| {
            let inside = c.residues.contains(&r);
            (0..n)
                .filter(|&s| coprime(s) && s % d == r % d)
                .all(|s| c.residues.contains(&s) == inside)
        });
        if constant_on_fibres {
            let mut residues: Vec<u64> = c.residues.iter().map(|r| r % d).collect();
            residues.sort_unstable();
            residues.dedup();
            return Congruences {
                modulus: d,
                residues,
            };
        }
    }
    c
}

/// Whether infinitely many primes divide the branch product of `c1` but not
/// that of `c2`. Exact (through quadratic characters and Dirichlet's theorem)
/// when every branch orbit of both covers has degree at most 2; otherwise
/// decided from the primes up to `window`.
pub fn check_branch_point_hypothesis(
    c1: &CoverData,
    c2: &CoverData,
    window: u64,
) -> ParametricityVerdict {
    let mut notes = Vec::new();
    for c in [c1, c2] {
        if !c.orbits.iter().any(|o| o.point.is_infinity()) {
            notes.push(format!(
                "infinity is not a branch point of {}: m_t and m_t * m_(1/t) have the same prime divisors up to finitely many",
                c.name
            ));
        }
    }

    let mut flagged = BTreeSet::new();
    let mut witness_primes = Vec::new();
    let mut admissible_primes = Vec::new();
    for p in primes_up_to(window) {
        let (Some(d1), Some(d2)) = (divisor_orbits(c1, p), divisor_orbits(c2, p)) else {
            flagged.insert(p);
            continue;
        };
        if !classify_prime(c1, p).is_good() || !classify_prime(c2, p).is_good() {
            flagged.insert(p);
        }
        if !d1.is_empty() && d2.is_empty() {
            witness_primes.push(p);
            if d1.iter().any(|&l| admissible(c1, l, c2, p)) {
                admissible_primes.push(p);
            }
        }
    }

    let exact = match (quadratic_locus(c1), quadratic_locus(c2)) {
        (Some(q1), Some(q2)) => {
            let modulus = q1
                .discs
                .iter()
                .chain(&q2.discs)
                .map(|d| (Int::from(4) * d.abs()).to_u64().expect("small discriminant"))
                .fold(1u64, |acc, m| acc.lcm(&m));
            let residues = residue_classes(modulus, |p| q1.divides(p) && !q2.divides(p));
            for p in primes_up_to(window) {
                if modulus % p == 0 {
                    flagged.insert(p);
                }
            }
            Some(minimize(Congruences { modulus, residues }))
        }
        _ => None,
    };

    let flagged_primes: Vec<u64> = flagged.into_iter().collect();
    match exact {
        Some(cong) => {
            let holds = !cong.residues.is_empty();
            if holds {
                notes.push(format!("witness primes: {cong}, infinitely many by Dirichlet"));
                if admissible_primes.is_empty() {
                    notes.push("holds, but no admissible witness in window".into());
                }
            }
            ParametricityVerdict {
                hypothesis: Hypothesis::BranchPoint,
                holds,
                exact: true,
                window: Some(window),
                witness_classes: vec![],
                witness_congruences: Some(cong),
                witness_primes,
                admissible_primes,
                flagged_primes,
                consequence: consequence(c1, c2, holds, false),
                notes,
            }
        }
        None => {
            let holds = !witness_primes.is_empty();
            notes.push(format!(
                "empirical: {} witness primes, {} admissible, up to {window}",
                witness_primes.len(),
                admissible_primes.len()
            ));
            let mut cons = consequence(c1, c2, holds, false);
            if holds {
                cons = format!("evidence only, not a proof: {cons}");
            }
            ParametricityVerdict {
                hypothesis: Hypothesis::BranchPoint,
                holds,
                exact: false,
                window: Some(window),
                witness_classes: vec![],
                witness_congruences: None,
                witness_primes,
                admissible_primes,
                flagged_primes,
                consequence: cons,
                notes,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorollaryVerdict {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub detail: String,
}

/// Exactly four geometric branch points, none of them rational (infinity
/// counts as rational). Then any cover of the same group with a rational
/// branch point satisfies the branch point hypothesis against this one.
pub fn check_four_branch_corollary(c: &CoverData) -> CorollaryVerdict {
    let count = c.branch_point_count();
    let rational: Vec<String> = c
        .orbits
        .iter()
        .filter(|o| o.point.degree() == 1)
        .map(|o| match &o.point {
            AlgPoint::Infinity => "inf".to_string(),
            p => p.to_string(),
        })
        .collect();
    let holds = count == 4 && rational.is_empty();
    let detail = if count != 4 {
        format!("{count} branch points")
    } else if !rational.is_empty() {
        format!("rational branch points: {}", rational.join(", "))
    } else {
        format!("{} is not G-parametric", c.name)
    };
    CorollaryVerdict {
        holds,
        witness: None,
        detail,
    }
}

/// For a cover of S_n: some class `[n^1]` or `[m^1 (n-m)^1]` with
/// `gcd(m, n) = 1` is not an inertia class.
pub fn check_h2(c: &CoverData) -> Result<CorollaryVerdict, ParametricityError> {
    let n = match c.group.as_perm() {
        Some(g) if g.degree() >= 3 && Int::from(g.order()) == factorial(g.degree()) => g.degree(),
        _ => return Err(ParametricityError::NotSymmetric(c.name.clone())),
    };
    let present: BTreeSet<&str> = (0..c.orbits.len()).map(|i| c.class_label(i)).collect();
    let mut candidates = vec![format!("[{n}^1]")];
    for m in 1..n {
        if m.gcd(&n) == 1 {
            let (a, b) = (m.min(n - m), m.max(n - m));
            candidates.push(if a == b {
                format!("[{a}^2]")
            } else {
                format!("[{a}^1 {b}^1]")
            });
        }
    }
    let missing = candidates.into_iter().find(|l| !present.contains(l.as_str()));
    Ok(CorollaryVerdict {
        holds: missing.is_some(),
        detail: match &missing {
            Some(l) => format!("{l} is not an inertia class of {}", c.name),
            None => "every class [n^1] and [m^1 (n-m)^1] occurs".into(),
        },
        witness: missing,
    })
}

fn factorial(n: usize) -> Int {
    (1..=n).fold(Int::one(), |acc, k| acc * Int::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::datasets;

    #[test]
    fn inertia_hypothesis_s5() {
        let c1 = datasets::trinomial(5, 2, 2, 1).unwrap();
        let c2 = datasets::trinomial(5, 1, 4, 3).unwrap();
        let closure = power_closure(&c2).unwrap();
        let want: BTreeSet<String> = ["[1^1 2^2]", "[1^1 4^1]", "[1^3 2^1]", "[1^5]", "[5^1]"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(closure, want);
        let v = check_inertia_hypothesis(&c1, &c2).unwrap();
        assert!(v.holds && v.exact);
        assert_eq!(v.witness_classes, vec!["[2^1 3^1]"]);
        let back = check_inertia_hypothesis(&c2, &c1).unwrap();
        assert_eq!(back.witness_classes, vec!["[1^1 4^1]"]);
        assert!(!check_inertia_hypothesis(&c1, &c1).unwrap().holds);
    }

    #[test]
    fn inertia_hypothesis_s3() {
        let t = datasets::trinomial(3, 1, 2, 1).unwrap();
        let g = datasets::s3_generic().unwrap();
        // both have [3^1] and transpositions: no witness either way
        assert!(!check_inertia_hypothesis(&t, &g).unwrap().holds);
        assert!(check_inertia_hypothesis(&t, &datasets::quad_t()).is_err());
    }

    #[test]
    fn witness_recipe_for_s5() {
        let c1 = datasets::trinomial(5, 2, 2, 1).unwrap();
        let c2 = datasets::trinomial(5, 1, 4, 3).unwrap();
        let r = inertia_witness_recipe(&c1, &c2, 100).unwrap().unwrap();
        assert_eq!(r.predictions[0].class_label, "[2^1 3^1]");
        assert_eq!(r.request.ramified[0].p, 7);
    }

    #[test]
    fn branch_point_hypothesis_exact() {
        let c1 = datasets::quad_t();
        let c2 = datasets::quad_t2p1_t2m2();
        let v = check_branch_point_hypothesis(&c1, &c2, 500);
        assert!(v.holds && v.exact);
        let cong = v.witness_congruences.clone().unwrap();
        assert_eq!((cong.modulus, cong.residues.clone()), (8, vec![3]));
        for p in primes_up_to(500) {
            if v.flagged_primes.contains(&p) {
                continue;
            }
            assert_eq!(v.witness_primes.contains(&p), cong.contains(p), "p = {p}");
        }
        let same = check_branch_point_hypothesis(&c2, &c2, 200);
        assert!(!same.holds && same.exact);
        let reverse = check_branch_point_hypothesis(&c2, &c1, 200);
        assert!(!reverse.holds);
    }

    #[test]
    fn branch_point_hypothesis_empirical() {
        let c1 = datasets::trinomial(3, 1, 2, 1).unwrap();
        let c2 = datasets::mestre_a5().unwrap();
        let v = check_branch_point_hypothesis(&c1, &c2, 1000);
        assert!(!v.exact);
        assert!(v.holds);
        // golden: primes <= 1000 where x^4 = -1/84375 has no root mod p
        assert_eq!(v.witness_primes.len(), 105);
        assert_eq!(&v.witness_primes[..4], &[7, 11, 13, 29]);
        assert_eq!(v.witness_primes.last(), Some(&997));
        assert!(v.admissible_primes.len() >= 100, "{:?}", v.admissible_primes);
        for &p in &v.witness_primes {
            let m = c2.orbits[0].point.minpoly();
            assert!(!is_prime_divisor(p, &m).unwrap());
        }
    }

    #[test]
    fn four_branch_points() {
        assert!(check_four_branch_corollary(&datasets::quad_t2p1_t2m2()).holds);
        assert!(!check_four_branch_corollary(&datasets::quad_t2p1()).holds);
        assert!(!check_four_branch_corollary(&datasets::trinomial(3, 1, 2, 1).unwrap()).holds);
        assert!(check_four_branch_corollary(&datasets::mestre_a5().unwrap()).holds);
    }

    #[test]
    fn h2() {
        let c = datasets::trinomial(5, 1, 4, 3).unwrap();
        let v = check_h2(&c).unwrap();
        assert_eq!(v.witness.as_deref(), Some("[2^1 3^1]"));
        let t = datasets::trinomial(3, 1, 2, 1).unwrap();
        assert!(!check_h2(&t).unwrap().holds);
        assert!(check_h2(&datasets::quad_t()).is_err());
        assert!(check_h2(&datasets::mestre_a5().unwrap()).is_err());
    }
}
