use serde::{Deserialize, Serialize};

use super::{lift_to_valuation, PrescriberError};
use crate::arith::{is_prime, PolyQ, Rat, Valuation};
use crate::cover::{classify_prime, cycle_type_label, CoverData, PrimeStatus};
use crate::places::{integral_at, intersection_multiplicity, meets_by_reduction, AlgPoint, PointP1};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Ramified,
    Unramified,
}

/// Expected inertia at `p`: the class of `g^a` for `g` in the inertia class
/// of the met orbit, with ramification index `order / gcd(order, a)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InertiaPrediction {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<u64>,
    pub class_label: String,
    /// Cycle type of the inertia generator in the permutation representation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_type: Option<Vec<usize>>,
    pub e: u64,
    pub verdict: Verdict,
}

impl InertiaPrediction {
    /// Prediction for `I_p(t0, t_orbit) = a`.
    pub fn for_power(cover: &CoverData, p: u64, orbit: usize, a: u64) -> Self {
        let class = cover.orbits[orbit].class;
        let e = cover.group.power_order(class, a);
        let (class_label, cycle_type) = match cover.group.class_power(class, a) {
            Some(c) => (
                cover.group.class_label(c).to_string(),
                cover
                    .group
                    .as_perm()
                    .map(|g| g.classes()[c].cycle_type.clone()),
            ),
            None => (format!("{}^{a}", cover.group.class_label(class)), None),
        };
        InertiaPrediction {
            p,
            orbit: Some(orbit),
            multiplicity: Some(a),
            class_label,
            cycle_type,
            e,
            verdict: if e > 1 { Verdict::Ramified } else { Verdict::Unramified },
        }
    }

    /// Prediction for a prime where no branch point is met.
    pub fn unramified(cover: &CoverData, p: u64) -> Self {
        let identity = cover
            .group
            .class_power(cover.orbits[0].class, cover.group.class_order(cover.orbits[0].class));
        InertiaPrediction {
            p,
            orbit: None,
            multiplicity: None,
            class_label: identity
                .map(|c| cover.group.class_label(c).to_string())
                .unwrap_or_else(|| "1".into()),
            cycle_type: cover.group.degree().map(|n| vec![1; n]),
            e: 1,
            verdict: Verdict::Unramified,
        }
    }

    pub fn cycle_type_label(&self) -> Option<String> {
        self.cycle_type.as_deref().map(cycle_type_label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Prediction {
    Inertia(InertiaPrediction),
    /// No branch point meets `t0`, so `p` is unramified.
    NoMeeting(InertiaPrediction),
    Undecidable { reason: String },
}

impl Prediction {
    /// The inertia prediction, if decided.
    pub fn inertia(&self) -> Option<&InertiaPrediction> {
        match self {
            Prediction::Inertia(i) | Prediction::NoMeeting(i) => Some(i),
            Prediction::Undecidable { .. } => None,
        }
    }
}

fn bad_reason_text(status: &PrimeStatus) -> String {
    match status {
        PrimeStatus::Good => String::new(),
        PrimeStatus::Bad(reasons) => reasons
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join("; "),
    }
}

/// Inertia at `p` of the specialization at `t0`.
pub fn predict_inertia(
    cover: &CoverData,
    p: u64,
    t0: &PointP1,
) -> Result<Prediction, PrescriberError> {
    if !is_prime(p) {
        return Err(PrescriberError::NotPrime(p));
    }
    if cover.is_branch_point(t0) {
        return Err(PrescriberError::BranchPoint(t0.to_string()));
    }
    let status = classify_prime(cover, p);
    if !status.is_good() {
        return Ok(Prediction::Undecidable {
            reason: format!("{p} is a bad prime: {}", bad_reason_text(&status)),
        });
    }
    let met: Vec<usize> = (0..cover.orbits.len())
        .filter(|&i| meets_by_reduction(p, t0, &cover.orbits[i].point))
        .collect();
    let j = match met[..] {
        [] => return Ok(Prediction::NoMeeting(InertiaPrediction::unramified(cover, p))),
        [j] => j,
        _ => panic!("orbits {met:?} meet {t0} simultaneously at the good prime {p}"),
    };
    let point = &cover.orbits[j].point;
    if !integral_at(p, point) {
        return Ok(Prediction::Undecidable {
            reason: format!("{p} does not unitize the branch point of orbit {j}"),
        });
    }
    let a = match intersection_multiplicity(p, t0, point)? {
        Valuation::Finite(a) if a > 0 => a as u64,
        v => panic!("orbit {j} meets {t0} at {p} but the intersection multiplicity is {v}"),
    };
    Ok(Prediction::Inertia(InertiaPrediction::for_power(cover, p, j, a)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A point whose specialization ramifies at the prime.
    Ramifies {
        #[serde(serialize_with = "crate::arith::rat_serde::serialize")]
        t0: Rat,
        prediction: InertiaPrediction,
    },
    /// The prime is not a prime divisor of `m_t * m_{1/t}`, so no
    /// specialization ramifies there.
    NeverRamifies,
    Undecidable { reason: String },
}

/// A specialization point ramified at `p`, or a proof that none exists.
pub fn ramification_witness(cover: &CoverData, p: u64) -> Result<Witness, PrescriberError> {
    if !is_prime(p) {
        return Err(PrescriberError::NotPrime(p));
    }
    let status = classify_prime(cover, p);
    if !status.is_good() {
        return Ok(Witness::Undecidable {
            reason: format!("{p} is a bad prime: {}", bad_reason_text(&status)),
        });
    }
    if let Some(j) = (0..cover.orbits.len()).find(|&j| !integral_at(p, &cover.orbits[j].point)) {
        return Ok(Witness::Undecidable {
            reason: format!("{p} does not unitize the branch point of orbit {j}"),
        });
    }
    for (j, orbit) in cover.orbits.iter().enumerate() {
        let t0 = match &orbit.point {
            AlgPoint::Infinity => lift_to_valuation(&PolyQ::x(), p, 1)?.recip(),
            point => {
                let m = point.minpoly();
                if !m.reduce_mod_p(p).expect("unitized").has_root() {
                    continue;
                }
                lift_to_valuation(&m, p, 1)?
            }
        };
        let prediction = match predict_inertia(cover, p, &PointP1::Finite(t0.clone()))? {
            Prediction::Inertia(i) => i,
            other => panic!("witness {t0} for orbit {j} at {p} gave {other:?}"),
        };
        debug_assert_eq!(prediction.orbit, Some(j));
        debug_assert_eq!(prediction.verdict, Verdict::Ramified);
        return Ok(Witness::Ramifies { t0, prediction });
    }
    Ok(Witness::NeverRamifies)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::cover::datasets;

    fn fin(n: i64, d: i64) -> PointP1 {
        PointP1::Finite(rat(n, d))
    }

    #[test]
    fn gaussian_cover() {
        let c = datasets::quad_t2p1();
        for t in 0..20 {
            assert!(matches!(
                predict_inertia(&c, 7, &fin(t, 1)).unwrap(),
                Prediction::NoMeeting(_)
            ));
        }
        let Prediction::Inertia(i) = predict_inertia(&c, 5, &fin(7, 1)).unwrap() else {
            panic!()
        };
        assert_eq!((i.multiplicity, i.e, i.verdict), (Some(2), 1, Verdict::Unramified));
        assert_eq!(i.class_label, "[1^2]");
        let Prediction::Inertia(i) = predict_inertia(&c, 5, &fin(2, 1)).unwrap() else {
            panic!()
        };
        assert_eq!((i.e, i.verdict), (2, Verdict::Ramified));
        assert!(matches!(
            predict_inertia(&c, 2, &fin(1, 1)).unwrap(),
            Prediction::Undecidable { .. }
        ));
    }

    #[test]
    fn trinomial_at_infinity() {
        let c = datasets::trinomial(3, 1, 2, 1).unwrap();
        let Prediction::Inertia(i) = predict_inertia(&c, 5, &fin(1, 5)).unwrap() else {
            panic!()
        };
        assert_eq!(i.orbit, Some(1));
        assert_eq!((i.class_label.as_str(), i.e), ("[3^1]", 3));
        assert_eq!(i.cycle_type_label().unwrap(), "[3^1]");
        let Prediction::Inertia(i) = predict_inertia(&c, 7, &fin(38, 1)).unwrap() else {
            panic!()
        };
        assert_eq!((i.class_label.as_str(), i.e), ("[1^1 2^1]", 2));
        assert!(predict_inertia(&c, 5, &fin(4, 27)).is_err());
    }

    #[test]
    fn witnesses() {
        let c = datasets::quad_t2p1();
        assert_eq!(ramification_witness(&c, 7).unwrap(), Witness::NeverRamifies);
        let Witness::Ramifies { t0, .. } = ramification_witness(&c, 5).unwrap() else {
            panic!()
        };
        assert_eq!(t0, rat(2, 1));
        let Witness::Ramifies { t0, .. } = ramification_witness(&c, 13).unwrap() else {
            panic!()
        };
        assert_eq!(t0, rat(5, 1));
        assert!(matches!(
            ramification_witness(&c, 2).unwrap(),
            Witness::Undecidable { .. }
        ));
        let t = datasets::trinomial(3, 1, 2, 1).unwrap();
        let Witness::Ramifies { t0, prediction } = ramification_witness(&t, 5).unwrap() else {
            panic!()
        };
        assert_eq!(t0, rat(5, 1));
        assert_eq!(prediction.class_label, "[1^1 2^1]");
    }
}
