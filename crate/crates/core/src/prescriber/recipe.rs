use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::predict::{InertiaPrediction, Verdict};
use super::{lift_to_valuation, PrescriberError};
use crate::arith::{
    crt, factor_mod_p, format_rat, is_prime, ArithError, Int, PrimePower, Rat,
};
use crate::cover::{
    classify_prime, cycle_type_label, specialize_defining_poly, CoverData, PrimeStatus,
};
use crate::places::{integral_at, rationalized_by, AlgPoint, PointP1};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamifiedEntry {
    pub p: u64,
    pub orbit: usize,
    pub a: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusEntry {
    pub p: u64,
    pub class: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrescriptionRequest {
    #[serde(default)]
    pub ramified: Vec<RamifiedEntry>,
    #[serde(default)]
    pub frobenius: Vec<FrobeniusEntry>,
}

impl PrescriptionRequest {
    pub fn primes(&self) -> Vec<u64> {
        self.ramified
            .iter()
            .map(|e| e.p)
            .chain(self.frobenius.iter().map(|e| e.p))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalKind {
    /// `v_p(theta - target) >= precision` for a finite branch point.
    Finite,
    /// `v_p(t0 - target) >= 1 - a` with `target = p^-a`, for infinity: this
    /// pins `v_p(t0) = -a` along the whole progression.
    Infinity,
    /// `theta ≡ target mod p`, a residue with the requested Frobenius.
    Frobenius,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalCondition {
    pub p: u64,
    pub kind: LocalKind,
    #[serde(with = "crate::arith::rat_serde")]
    pub target: Rat,
    pub precision: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusPrediction {
    pub p: u64,
    pub class_label: String,
    pub cycle_type: Vec<usize>,
    pub residue: u64,
    /// Other classes share the cycle type, so only the cycle type is pinned.
    pub ambiguous: bool,
}

/// An arithmetic progression `theta + u*M` of specialization points with the
/// requested local behaviour, for every integer `u` except the finitely many
/// giving branch points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recipe {
    pub cover: String,
    pub request: PrescriptionRequest,
    #[serde(with = "crate::arith::rat_serde")]
    pub theta: Rat,
    #[serde(with = "crate::arith::int_serde")]
    pub modulus: Int,
    /// Primes at which `u` must be integral.
    pub u_constraints: Vec<u64>,
    pub locals: Vec<LocalCondition>,
    pub predictions: Vec<InertiaPrediction>,
    pub frobenius: Vec<FrobeniusPrediction>,
    pub excluded_points: Vec<String>,
    pub notes: Vec<String>,
    pub seed: u64,
}

impl Recipe {
    pub fn point(&self, u: &Int) -> Rat {
        &self.theta + Rat::from_integer(u * &self.modulus)
    }

    /// The first `count` points for `u = 0, 1, 2, ...`, skipping branch points
    /// and points where the defining polynomial degenerates.
    pub fn points(&self, cover: &CoverData, count: usize) -> Vec<(Int, Rat)> {
        let mut out = Vec::with_capacity(count);
        let mut u = Int::zero();
        while out.len() < count {
            let t0 = self.point(&u);
            let admissible = !cover.is_branch_point(&PointP1::Finite(t0.clone()))
                && (cover.defining_poly.is_none() || specialize_defining_poly(cover, &t0).is_ok());
            if admissible {
                out.push((u.clone(), t0));
            }
            u += 1;
        }
        out
    }
}

fn validate(cover: &CoverData, req: &PrescriptionRequest) -> Result<(), PrescriberError> {
    let primes = req.primes();
    for (k, &p) in primes.iter().enumerate() {
        if !is_prime(p) {
            return Err(PrescriberError::NotPrime(p));
        }
        if primes[..k].contains(&p) {
            return Err(PrescriberError::DuplicatePrime(p));
        }
        if let PrimeStatus::Bad(reasons) = classify_prime(cover, p) {
            return Err(PrescriberError::BadPrime { p, reasons });
        }
    }
    for e in &req.ramified {
        let orbit = cover
            .orbits
            .get(e.orbit)
            .ok_or(PrescriberError::OrbitOutOfRange(e.orbit))?;
        if e.a == 0 {
            return Err(PrescriberError::ZeroExponent);
        }
        if !integral_at(e.p, &orbit.point) {
            return Err(PrescriberError::NotUnitized {
                p: e.p,
                orbit: e.orbit,
            });
        }
        if !rationalized_by(e.p, &orbit.point)? {
            return Err(PrescriberError::NotRationalized {
                p: e.p,
                orbit: e.orbit,
            });
        }
    }
    Ok(())
}

fn unreachable(p: u64, class: &str, searched: u64, reason: impl Into<String>) -> PrescriberError {
    PrescriberError::FrobeniusUnreachable {
        p,
        class: class.to_string(),
        searched,
        reason: reason.into(),
    }
}

/// Residue `rho` mod p at which the defining polynomial is squarefree mod p
/// with factor-degree pattern equal to the cycle type of `class`.
fn frobenius_residue(
    cover: &CoverData,
    entry: &FrobeniusEntry,
    search_bound: u64,
    seed: u64,
) -> Result<FrobeniusPrediction, PrescriberError> {
    let p = entry.p;
    let group = cover
        .group
        .as_perm()
        .ok_or_else(|| unreachable(p, &entry.class, 0, "the group has no permutation representation"))?;
    let poly = cover
        .defining_poly
        .as_ref()
        .ok_or_else(|| unreachable(p, &entry.class, 0, "the cover has no defining polynomial"))?;
    if !poly.coeffs_in_x.iter().all(|c| c.is_p_integral(p)) {
        return Err(unreachable(
            p,
            &entry.class,
            0,
            "the defining polynomial is not p-integral",
        ));
    }
    let class = group.find_class(&entry.class)?;
    let target = group.classes()[class].cycle_type.clone();
    let limit = p.min(search_bound.max(1));
    let mut residues: Vec<u64> = (0..p).collect();
    if seed != 0 {
        residues.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    for &rho in residues.iter().take(limit as usize) {
        let f = poly.specialize(&Rat::from_integer(rho.into()));
        let red = f.reduce_mod_p(p).expect("p-integral");
        if red.degree() != f.degree() || !red.is_squarefree() {
            continue;
        }
        let mut pattern: Vec<usize> = factor_mod_p(&red, seed)
            .iter()
            .map(|(g, _)| g.degree())
            .collect();
        pattern.sort_unstable();
        if pattern == target {
            return Ok(FrobeniusPrediction {
                p,
                class_label: group.classes()[class].label.clone(),
                cycle_type: target.clone(),
                residue: rho,
                ambiguous: group.classes_with_cycle_type(&target).len() > 1,
            });
        }
    }
    Err(unreachable(
        p,
        &entry.class,
        limit,
        format!("no squarefree specialization with factor degrees {}", cycle_type_label(&target)),
    ))
}

fn pow(p: u64, e: u32) -> Int {
    num_traits::pow(Int::from(p), e as usize)
}

/// Assembles a recipe: exact-valuation local points for the ramified entries
/// (finite branch points through `lift_to_valuation`, infinity through the
/// target `p^-a`), Frobenius residues by search, and one CRT over all of them.
///
/// With infinity entries the point is `theta = n / D`, `D = ∏ p^a` over those
/// entries, and `n` solves `n ≡ D p^-a mod p^(2a+1)` at each of them (so that
/// `v_p(theta - p^-a) >= a + 1`), `n ≡ D theta_j mod p^(a+1)` at finite entries
/// and `n ≡ D rho mod p` at Frobenius entries.
pub fn build_recipe(
    cover: &CoverData,
    req: &PrescriptionRequest,
    search_bound: u64,
    seed: u64,
) -> Result<Recipe, PrescriberError> {
    validate(cover, req)?;
    let denom: Int = req
        .ramified
        .iter()
        .filter(|e| cover.orbits[e.orbit].point.is_infinity())
        .fold(Int::one(), |acc, e| acc * pow(e.p, e.a));
    let d_rat = Rat::from_integer(denom.clone());

    let mut locals = Vec::new();
    let mut residues: Vec<(Rat, PrimePower)> = Vec::new();
    let mut modulus = Int::one();
    let mut predictions = Vec::new();
    for e in &req.ramified {
        let point = &cover.orbits[e.orbit].point;
        match point {
            AlgPoint::Infinity => {
                let target = Rat::new(Int::one(), pow(e.p, e.a));
                residues.push((&d_rat * &target, PrimePower::new(e.p, 2 * e.a + 1)));
                locals.push(LocalCondition {
                    p: e.p,
                    kind: LocalKind::Infinity,
                    target,
                    precision: 1 - e.a as i64,
                });
            }
            _ => {
                let theta_j = lift_to_valuation(&point.minpoly(), e.p, e.a)?;
                residues.push((&d_rat * &theta_j, PrimePower::new(e.p, e.a + 1)));
                modulus *= pow(e.p, e.a + 1);
                locals.push(LocalCondition {
                    p: e.p,
                    kind: LocalKind::Finite,
                    target: theta_j,
                    precision: e.a as i64 + 1,
                });
            }
        }
        predictions.push(InertiaPrediction::for_power(cover, e.p, e.orbit, e.a as u64));
    }

    let mut frobenius = Vec::new();
    let mut notes = Vec::new();
    let bound = {
        let r = Int::from(cover.branch_point_count());
        let g = cover.group.order();
        &r * &r * &g * &g
    };
    for e in &req.frobenius {
        let fp = frobenius_residue(cover, e, search_bound, seed)?;
        let rho = Rat::from_integer(fp.residue.into());
        residues.push((&d_rat * &rho, PrimePower::new(e.p, 1)));
        modulus *= Int::from(e.p);
        locals.push(LocalCondition {
            p: e.p,
            kind: LocalKind::Frobenius,
            target: rho,
            precision: 1,
        });
        let met = if Int::from(e.p) >= bound { "meets" } else { "is below" };
        notes.push(format!(
            "Frobenius at {}: residue {} found by search; {} {met} r^2|G|^2 = {bound}",
            e.p, fp.residue, e.p
        ));
        if fp.ambiguous {
            notes.push(format!(
                "Frobenius at {}: other classes share cycle type {}, only the cycle type is guaranteed",
                e.p,
                cycle_type_label(&fp.cycle_type)
            ));
        }
        predictions.push(InertiaPrediction::unramified(cover, e.p));
        frobenius.push(fp);
    }

    let n = crt(&residues).map_err(|err| match err {
        ArithError::NonCoprimeModuli(p) => {
            PrescriberError::CrtClash(format!("two conditions at the prime {p}"))
        }
        other => PrescriberError::Arith(other),
    })?;
    let theta = Rat::new(n, denom);

    for (pred, e) in predictions.iter().zip(&req.ramified) {
        if pred.verdict == Verdict::Unramified {
            notes.push(format!(
                "{}: a = {} is a multiple of the order of {}, so {} is unramified",
                e.p,
                e.a,
                cover.class_label(e.orbit),
                e.p
            ));
        }
    }

    let mut excluded_points: Vec<String> = cover
        .orbits
        .iter()
        .filter_map(|o| match o.point.rational_value()? {
            PointP1::Finite(x) => Some(format_rat(&x)),
            PointP1::Infinity => None,
        })
        .collect();
    if cover.orbits.iter().any(|o| !o.point.is_rational()) {
        excluded_points.push("non-rational branch points (never of the form theta + u*M)".into());
    }

    Ok(Recipe {
        cover: cover.name.clone(),
        request: req.clone(),
        theta,
        modulus,
        u_constraints: req.primes(),
        locals,
        predictions,
        frobenius,
        excluded_points,
        notes,
        seed,
    })
}

impl LocalCondition {
    /// Whether `t0` satisfies this condition.
    pub fn holds_at(&self, t0: &Rat) -> bool {
        let diff = t0 - &self.target;
        match crate::arith::vp(&diff, self.p).finite() {
            Some(v) => v >= self.precision,
            None => diff.is_zero(),
        }
    }
}
