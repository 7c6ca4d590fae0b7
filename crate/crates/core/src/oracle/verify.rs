use serde::Serialize;

use super::{
    is_rational_square, quadratic_ramifies, quadratic_splits, tame_splitting_type, OracleError,
    ORACLE_MAX_DEGREE,
};
use crate::arith::{discriminant, format_rat, Int, Rat};
use crate::cover::{cycle_type_label, specialize_defining_poly, CoverData};
use crate::places::PointP1;
use crate::prescriber::{predict_inertia, InertiaPrediction, Prediction, Recipe, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub verdict: Verdict,
    pub e: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle_type: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frobenius: Option<String>,
}

impl Expected {
    fn from_prediction(p: &InertiaPrediction) -> Self {
        Expected {
            verdict: p.verdict,
            e: p.e,
            cycle_type: p.cycle_type_label(),
            frobenius: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Observed {
    Exact {
        method: &'static str,
        verdict: Verdict,
        e: u64,
        cycle_type: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        frobenius: Option<String>,
    },
    Inconclusive {
        reason: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchStatus {
    Match,
    Mismatch,
    Inconclusive,
}

/// Ramification at p of the specialization at `t0`, computed from the
/// specialized defining polynomial alone.
pub fn observe(cover: &CoverData, t0: &Rat, p: u64) -> Result<Observed, OracleError> {
    let f = specialize_defining_poly(cover, t0)?;
    let n = f.degree();
    if n > ORACLE_MAX_DEGREE {
        return Err(OracleError::DegreeTooLarge(n));
    }
    if n == 2 && p != 2 {
        let d = discriminant(&f);
        let (verdict, e, ct, frob) = if is_rational_square(&d) {
            (Verdict::Unramified, 1, vec![1, 1], Some(vec![1, 1]))
        } else if quadratic_ramifies(&d, p)? {
            (Verdict::Ramified, 2, vec![2], None)
        } else if quadratic_splits(&d, p) {
            (Verdict::Unramified, 1, vec![1, 1], Some(vec![1, 1]))
        } else {
            (Verdict::Unramified, 1, vec![1, 1], Some(vec![2]))
        };
        return Ok(Observed::Exact {
            method: "quadratic",
            verdict,
            e,
            cycle_type: cycle_type_label(&ct),
            frobenius: frob.map(|t| cycle_type_label(&t)),
        });
    }
    let r = tame_splitting_type(&f, p);
    if !r.is_exact() {
        return Ok(Observed::Inconclusive {
            reason: r.reason.unwrap_or_default(),
        });
    }
    Ok(Observed::Exact {
        method: "newton_polygon",
        verdict: r.verdict,
        e: r.e_total,
        cycle_type: cycle_type_label(&r.inertia_cycle_type),
        frobenius: r.frobenius_cycle_type().map(|t| cycle_type_label(&t)),
    })
}

fn compare(expected: &Expected, observed: &Observed) -> MatchStatus {
    match observed {
        Observed::Inconclusive { .. } => MatchStatus::Inconclusive,
        Observed::Exact {
            verdict,
            e,
            cycle_type,
            frobenius,
            ..
        } => {
            let ok = expected.verdict == *verdict
                && expected.e == *e
                && expected.cycle_type.as_ref().is_none_or(|t| t == cycle_type)
                && expected
                    .frobenius
                    .as_ref()
                    .is_none_or(|t| frobenius.as_ref() == Some(t));
            if ok {
                MatchStatus::Match
            } else {
                MatchStatus::Mismatch
            }
        }
    }
}

/// Predicted against observed inertia at one point and prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub t0: String,
    pub p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted: Option<Expected>,
    pub observed: Observed,
    pub status: MatchStatus,
}

/// Runs the predictor and the oracle at `(t0, p)`. Undecidable predictions
/// count as inconclusive.
pub fn check_point(cover: &CoverData, t0: &Rat, p: u64) -> Result<Comparison, OracleError> {
    let prediction = predict_inertia(cover, p, &PointP1::Finite(t0.clone()))?;
    let observed = observe(cover, t0, p)?;
    let (predicted, status) = match &prediction {
        Prediction::Inertia(i) | Prediction::NoMeeting(i) => {
            let exp = Expected::from_prediction(i);
            let status = compare(&exp, &observed);
            (Some(exp), status)
        }
        Prediction::Undecidable { .. } => (None, MatchStatus::Inconclusive),
    };
    Ok(Comparison {
        t0: format_rat(t0),
        p,
        predicted,
        observed,
        status,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationRow {
    pub u: String,
    pub t0: String,
    pub p: u64,
    pub predicted: Expected,
    pub observed: Observed,
    pub status: MatchStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationTable {
    pub cover: String,
    pub theta: String,
    pub modulus: String,
    pub rows: Vec<VerificationRow>,
    pub matched: usize,
    pub mismatched: usize,
    pub inconclusive: usize,
}

impl VerificationTable {
    pub fn all_match(&self) -> bool {
        self.mismatched == 0 && self.inconclusive == 0
    }
}

/// Checks every prediction of a recipe with the oracles at its first
/// `samples` points.
pub fn verify_recipe(
    cover: &CoverData,
    recipe: &Recipe,
    samples: usize,
) -> Result<VerificationTable, OracleError> {
    if recipe.cover != cover.name {
        return Err(OracleError::CoverMismatch {
            recipe: recipe.cover.clone(),
            cover: cover.name.clone(),
        });
    }
    let mut rows = Vec::new();
    for (u, t0) in recipe.points(cover, samples) {
        for pred in &recipe.predictions {
            let mut expected = Expected::from_prediction(pred);
            if let Some(fp) = recipe.frobenius.iter().find(|f| f.p == pred.p) {
                expected.frobenius = Some(cycle_type_label(&fp.cycle_type));
            }
            let observed = observe(cover, &t0, pred.p)?;
            let status = compare(&expected, &observed);
            rows.push(VerificationRow {
                u: u.to_string(),
                t0: format_rat(&t0),
                p: pred.p,
                predicted: expected,
                observed,
                status,
            });
        }
    }
    let count = |s: MatchStatus| rows.iter().filter(|r| r.status == s).count();
    Ok(VerificationTable {
        cover: cover.name.clone(),
        theta: format_rat(&recipe.theta),
        modulus: Int::to_string(&recipe.modulus),
        matched: count(MatchStatus::Match),
        mismatched: count(MatchStatus::Mismatch),
        inconclusive: count(MatchStatus::Inconclusive),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::cover::datasets;
    use crate::prescriber::{build_recipe, FrobeniusEntry, PrescriptionRequest, RamifiedEntry};

    fn request(ram: &[(u64, usize, u32)]) -> PrescriptionRequest {
        PrescriptionRequest {
            ramified: ram
                .iter()
                .map(|&(p, orbit, a)| RamifiedEntry { p, orbit, a })
                .collect(),
            frobenius: vec![],
        }
    }

    #[test]
    fn gaussian_recipe_verifies() {
        let c = datasets::quad_t2p1();
        let r = build_recipe(&c, &request(&[(5, 0, 1), (13, 0, 1)]), 100, 0).unwrap();
        let t = verify_recipe(&c, &r, 25).unwrap();
        assert_eq!((t.matched, t.rows.len()), (50, 50));
    }

    #[test]
    fn trinomial_recipes_verify() {
        let c = datasets::trinomial(3, 1, 2, 1).unwrap();
        let r = build_recipe(&c, &request(&[(7, 2, 1)]), 100, 0).unwrap();
        let t = verify_recipe(&c, &r, 25).unwrap();
        assert!(t.all_match(), "{t:?}");
        assert!(t.rows.iter().all(|row| matches!(&row.observed,
            Observed::Exact { cycle_type, e: 2, .. } if cycle_type == "[1^1 2^1]")));
        let r = build_recipe(&c, &request(&[(5, 1, 3)]), 100, 0).unwrap();
        let t = verify_recipe(&c, &r, 25).unwrap();
        assert!(t.all_match(), "{t:?}");
        assert!(t.rows.iter().all(|row| row.predicted.verdict == Verdict::Unramified));
    }

    #[test]
    fn frobenius_rows() {
        let c = datasets::trinomial(3, 1, 2, 1).unwrap();
        let mut req = request(&[(7, 2, 1)]);
        req.frobenius.push(FrobeniusEntry {
            p: 11,
            class: "[3^1]".into(),
        });
        let r = build_recipe(&c, &req, 100, 0).unwrap();
        let t = verify_recipe(&c, &r, 10).unwrap();
        assert!(t.all_match(), "{t:?}");
        assert_eq!(t.rows.len(), 20);
    }

    #[test]
    fn single_point_checks() {
        let c = datasets::trinomial(3, 1, 2, 1).unwrap();
        let cmp = check_point(&c, &rat(1, 5), 5).unwrap();
        assert_eq!(cmp.status, MatchStatus::Match);
        let cmp = check_point(&c, &rat(38, 1), 7).unwrap();
        assert_eq!(cmp.status, MatchStatus::Match);
        let cmp = check_point(&c, &rat(38, 1), 3).unwrap();
        assert_eq!(cmp.status, MatchStatus::Inconclusive);
    }

    #[test]
    fn mismatched_cover_is_rejected() {
        let c = datasets::quad_t2p1();
        let r = build_recipe(&c, &request(&[(5, 0, 1)]), 100, 0).unwrap();
        assert!(verify_recipe(&datasets::quad_t(), &r, 5).is_err());
    }
}
