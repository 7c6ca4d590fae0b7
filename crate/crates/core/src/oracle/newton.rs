//! First-order Newton polygons: the p-adic splitting type of a monic
//! polynomial when every repeated factor mod p is regular.

use num_integer::Integer;
use serde::Serialize;

use crate::arith::{factor_mod_p, vp, Int, PolyFp, PolyQ, Rat, Valuation};
use crate::prescriber::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Segment {
    pub e: u64,
    pub f: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Confidence {
    Exact,
    Inconclusive,
}

/// Ramification data of a monic polynomial at p. When `confidence` is
/// inconclusive the other fields hold only what was determined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamReport {
    pub p: u64,
    pub segments: Vec<Segment>,
    /// Each segment contributes `f` cycles of length `e`.
    pub inertia_cycle_type: Vec<usize>,
    pub e_total: u64,
    pub verdict: Verdict,
    pub confidence: Confidence,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl RamReport {
    fn new(p: u64, mut segments: Vec<Segment>, reason: Option<String>) -> Self {
        segments.sort_unstable();
        let mut cycle_type = Vec::new();
        for s in &segments {
            cycle_type.extend(std::iter::repeat_n(s.e as usize, s.f as usize));
        }
        cycle_type.sort_unstable();
        let e_total = segments.iter().fold(1u64, |acc, s| acc.lcm(&s.e));
        RamReport {
            p,
            segments,
            inertia_cycle_type: cycle_type,
            e_total,
            verdict: if e_total > 1 {
                Verdict::Ramified
            } else {
                Verdict::Unramified
            },
            confidence: if reason.is_none() {
                Confidence::Exact
            } else {
                Confidence::Inconclusive
            },
            reason,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.confidence == Confidence::Exact
    }

    /// For an unramified report, the residue degrees: the Frobenius cycle type.
    pub fn frobenius_cycle_type(&self) -> Option<Vec<usize>> {
        if !self.is_exact() || self.e_total != 1 {
            return None;
        }
        let mut t: Vec<usize> = self.segments.iter().map(|s| s.f as usize).collect();
        t.sort_unstable();
        Some(t)
    }
}

fn p_pow(p: u64, e: i64) -> Rat {
    let base = Rat::from_integer(Int::from(p));
    num_traits::pow::pow(base, e as usize)
}

/// A monic p-integral polynomial generating the same field:
/// `lambda^n f(Y / lambda)` with `lambda = p^k`, `k` minimal.
pub fn integral_model(f: &PolyQ, p: u64) -> PolyQ {
    let n = f.degree() as i64;
    let mut k = 0i64;
    for (i, c) in f.coeffs().iter().enumerate() {
        if let Valuation::Finite(v) = vp(c, p) {
            let gap = n - i as i64;
            if v < 0 && gap > 0 {
                k = k.max((-v + gap - 1) / gap);
            }
        }
    }
    if k == 0 {
        return f.clone();
    }
    let lambda = p_pow(p, k);
    f.scale_var(&lambda.recip())
        .scale(&num_traits::pow::pow(lambda, n as usize))
}

fn phi_adic(f: &PolyQ, phi: &PolyQ, count: usize) -> Vec<PolyQ> {
    let mut out = Vec::with_capacity(count);
    let mut rest = f.clone();
    for _ in 0..count {
        let (q, r) = rest.div_rem(phi);
        out.push(r);
        rest = q;
    }
    out
}

/// Vertices of the lower convex hull of points sorted by abscissa.
fn lower_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b unless it lies strictly below the segment a -> pt
            let cross = (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull
}

enum PhiOutcome {
    Regular(Vec<Segment>),
    Irregular(String),
}

/// Segments above one repeated factor `phi` (multiplicity `k`) of f mod p.
fn analyze_phi(f: &PolyQ, phi_bar: &PolyFp, k: usize, p: u64) -> PhiOutcome {
    let deg_phi = phi_bar.degree();
    let base = PolyQ::new(
        phi_bar
            .coeffs()
            .iter()
            .map(|&c| Rat::from_integer(c.into()))
            .collect(),
    );
    let mut last_reason = String::new();
    for shift in 0..4u64 {
        let phi = &base + &PolyQ::constant(Rat::from_integer((shift * p).into()));
        let coeffs = phi_adic(f, &phi, k + 1);
        if coeffs[0].is_zero() {
            last_reason = "phi divides f".into();
            continue;
        }
        let w: Vec<i64> = coeffs
            .iter()
            .map(|a| {
                a.content_valuation(p)
                    .finite()
                    .unwrap_or(i64::MAX / 4)
            })
            .collect();
        debug_assert_eq!(w[k], 0);
        let pts: Vec<(i64, i64)> = w
            .iter()
            .enumerate()
            .filter(|(_, &v)| v < i64::MAX / 4)
            .map(|(j, &v)| (j as i64, v))
            .collect();
        let hull = lower_hull(&pts);
        let mut segments = Vec::new();
        let mut regular = true;
        for side in hull.windows(2) {
            let ((j1, w1), (j2, w2)) = (side[0], side[1]);
            let (len, height) = (j2 - j1, w1 - w2);
            let g = len.gcd(&height);
            let (e, h) = (len / g, height / g);
            let ell = g as usize;
            // residual polynomial coefficients in F_p[X]/(phi_bar)
            let mut residual: Vec<PolyFp> = Vec::with_capacity(ell + 1);
            for s in 0..=ell as i64 {
                let j = (j1 + s * e) as usize;
                let scaled = coeffs[j].scale(&p_pow(p, w1 - s * h).recip());
                let red = scaled.reduce_mod_p(p).expect("on or above the side");
                residual.push(red.rem(phi_bar));
            }
            match residual_factor_degrees(&residual, deg_phi, p) {
                Ok(degs) => {
                    for d in degs {
                        segments.push(Segment {
                            e: e as u64,
                            f: d as u64,
                        });
                    }
                }
                Err(reason) => {
                    last_reason = reason;
                    regular = false;
                    break;
                }
            }
        }
        if regular {
            return PhiOutcome::Regular(segments);
        }
    }
    PhiOutcome::Irregular(format!(
        "factor {phi_bar} needs more than a first-order polygon: {last_reason}"
    ))
}

/// Residue degrees (over F_p) of the factors of a residual polynomial with
/// coefficients in F_(p^deg_phi), or an error when it is not squarefree or
/// cannot be factored with prime-field arithmetic.
fn residual_factor_degrees(
    coeffs: &[PolyFp],
    deg_phi: usize,
    p: u64,
) -> Result<Vec<usize>, String> {
    let ell = coeffs.len() - 1;
    if ell == 1 {
        return Ok(vec![deg_phi]);
    }
    if coeffs.iter().any(|c| c.degree() > 0) {
        return Err("residual polynomial over a proper extension of F_p".into());
    }
    let r = PolyFp::new(p, coeffs.iter().map(|c| c.coeff(0)).collect());
    if !r.is_squarefree() {
        return Err("residual polynomial is not squarefree".into());
    }
    let mut out = Vec::new();
    for (g, _) in factor_mod_p(&r, 0) {
        let d = g.degree();
        let split = d.gcd(&deg_phi);
        for _ in 0..split {
            out.push(d.lcm(&deg_phi));
        }
    }
    Ok(out)
}

/// p-adic splitting type of a monic polynomial through first-order Newton
/// polygons. Inconclusive when some repeated factor mod p is irregular or when
/// a ramification index is divisible by p.
pub fn tame_splitting_type(f: &PolyQ, p: u64) -> RamReport {
    assert!(f.is_monic() && f.degree() > 0, "monic nonconstant polynomial required");
    let g = integral_model(f, p);
    let red = g.reduce_mod_p(p).expect("integral model");
    let mut segments = Vec::new();
    let mut reason = None;
    for (phi_bar, k) in factor_mod_p(&red, 0) {
        if k == 1 {
            segments.push(Segment {
                e: 1,
                f: phi_bar.degree() as u64,
            });
            continue;
        }
        match analyze_phi(&g, &phi_bar, k as usize, p) {
            PhiOutcome::Regular(s) => segments.extend(s),
            PhiOutcome::Irregular(why) => {
                reason = Some(why);
                break;
            }
        }
    }
    if reason.is_none() {
        if let Some(s) = segments.iter().find(|s| s.e % p == 0) {
            reason = Some(format!("wild ramification (e = {} divisible by {p})", s.e));
        }
    }
    let report = RamReport::new(p, segments, reason);
    if report.is_exact() {
        let total: u64 = report.segments.iter().map(|s| s.e * s.f).sum();
        assert_eq!(total, f.degree() as u64, "sum of e*f must equal the degree");
    }
    report
}
