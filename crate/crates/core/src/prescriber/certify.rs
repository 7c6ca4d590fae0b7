use std::collections::BTreeSet;

use serde::Serialize;

use super::PrescriberError;
use crate::arith::{factor_mod_p, primes_up_to, Rat};
use crate::cover::{
    classify_prime, cycle_type_label, specialize_defining_poly, CoverData, CoverError, Tristate,
};
use crate::places::PointP1;

/// Cap on the number of class assignments tried for ambiguous cycle types.
const MAX_ASSIGNMENTS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrobeniusSample {
    pub q: u64,
    pub cycle_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Certification {
    /// The specialization has the full group.
    Certified {
        samples: Vec<FrobeniusSample>,
        cycle_types: Vec<String>,
    },
    Inconclusive {
        reason: String,
        samples: Vec<FrobeniusSample>,
    },
}

impl Certification {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::Certified { .. })
    }
}

/// Subset sums of a partition.
fn subset_sums(parts: &[usize], n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &k in parts {
        for s in (k..=n).rev() {
            if reach[s - k] {
                reach[s] = true;
            }
        }
    }
    reach
}

/// Whether the factor patterns rule out every nontrivial factorization over Q:
/// a factor of degree `d` forces `d` to be a subset sum of every pattern.
fn forces_irreducible(patterns: &BTreeSet<Vec<usize>>, n: usize) -> bool {
    let mut common = vec![true; n + 1];
    for pat in patterns {
        for (c, r) in common.iter_mut().zip(subset_sums(pat, n)) {
            *c &= r;
        }
    }
    (1..n).all(|d| !common[d])
}

fn assignments(choices: &[Vec<usize>]) -> Option<Vec<Vec<usize>>> {
    let total = choices
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))?;
    if total > MAX_ASSIGNMENTS {
        return None;
    }
    let mut out = vec![Vec::new()];
    for c in choices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                c.iter().map(move |&i| {
                    let mut v = prefix.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    Some(out)
}

/// Frobenius sampling certificate that the specialization at `t0` has the full
/// group: cycle types at good unramified primes up to `prime_budget` must
/// force irreducibility and lie in classes that no proper subgroup meets all
/// of, whichever class each ambiguous cycle type stands for.
pub fn certify_group(
    cover: &CoverData,
    t0: &Rat,
    prime_budget: u64,
) -> Result<Certification, PrescriberError> {
    if cover.is_branch_point(&PointP1::Finite(t0.clone())) {
        return Err(PrescriberError::BranchPoint(crate::arith::format_rat(t0)));
    }
    let f = specialize_defining_poly(cover, t0)?;
    let Some(group) = cover.group.as_perm() else {
        return Err(CoverError::NoDefiningPolynomial.into());
    };
    let n = f.degree();
    let mut samples = Vec::new();
    let mut patterns = BTreeSet::new();
    for q in primes_up_to(prime_budget) {
        if !f.is_p_integral(q) || !classify_prime(cover, q).is_good() {
            continue;
        }
        let red = f.reduce_mod_p(q).expect("q-integral");
        if !red.is_squarefree() {
            continue;
        }
        let mut pat: Vec<usize> = factor_mod_p(&red, 0).iter().map(|(g, _)| g.degree()).collect();
        pat.sort_unstable();
        samples.push(FrobeniusSample {
            q,
            cycle_type: cycle_type_label(&pat),
        });
        patterns.insert(pat);
    }
    let inconclusive = |reason: String, samples: Vec<FrobeniusSample>| {
        Ok(Certification::Inconclusive { reason, samples })
    };
    if patterns.is_empty() {
        return inconclusive("no unramified good prime in the budget".into(), samples);
    }
    if !group.is_transitive() {
        return inconclusive("the group is not transitive".into(), samples);
    }
    if !forces_irreducible(&patterns, n) {
        return inconclusive(
            "the sampled cycle types do not force irreducibility".into(),
            samples,
        );
    }
    let mut choices = Vec::new();
    for pat in &patterns {
        let classes = group.classes_with_cycle_type(pat);
        if classes.is_empty() {
            return inconclusive(
                format!("cycle type {} does not occur in the group", cycle_type_label(pat)),
                samples,
            );
        }
        choices.push(classes);
    }
    let Some(all) = assignments(&choices) else {
        return inconclusive("too many class assignments for ambiguous cycle types".into(), samples);
    };
    for set in all {
        match group.is_g_complete(&set) {
            Tristate::True => {}
            Tristate::False => {
                return inconclusive(
                    "the witnessed classes are all met by a proper subgroup".into(),
                    samples,
                )
            }
            Tristate::Unknown => {
                return inconclusive("the group is too large to decide g-completeness".into(), samples)
            }
        }
    }
    Ok(Certification::Certified {
        samples,
        cycle_types: patterns.iter().map(|p| cycle_type_label(p)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::cover::datasets;

    #[test]
    fn trinomial_point_is_certified() {
        let c = datasets::trinomial(3, 1, 2, 1).unwrap();
        let cert = certify_group(&c, &rat(38, 1), 200).unwrap();
        let Certification::Certified { cycle_types, .. } = cert else {
            panic!("{cert:?}")
        };
        assert!(cycle_types.contains(&"[3^1]".to_string()));
        assert!(cycle_types.contains(&"[1^1 2^1]".to_string()));
    }

    #[test]
    fn quadratic_point_is_certified() {
        let c = datasets::quad_t2p1();
        assert!(certify_group(&c, &rat(2, 1), 50).unwrap().is_certified());
    }

    #[test]
    fn proper_subgroups_are_never_certified() {
        let c = datasets::trinomial(3, 1, 2, 1).unwrap();
        // disc = t^3 (4 - 27t) is a square at t = 1/7: cyclic cubic
        assert!(!certify_group(&c, &rat(1, 7), 500).unwrap().is_certified());
        let q = datasets::quad_t2p1();
        // t^2 + 1 is a square at 0 and 3/4
        assert!(!certify_group(&q, &rat(0, 1), 500).unwrap().is_certified());
        assert!(!certify_group(&q, &rat(3, 4), 500).unwrap().is_certified());
    }

    #[test]
    fn irreducibility_from_patterns() {
        let pats: BTreeSet<Vec<usize>> = [vec![1, 2]].into_iter().collect();
        assert!(!forces_irreducible(&pats, 3));
        let pats: BTreeSet<Vec<usize>> = [vec![1, 3], vec![2, 2]].into_iter().collect();
        assert!(forces_irreducible(&pats, 4));
    }

    #[test]
    fn errors() {
        let c = datasets::trinomial(3, 1, 2, 1).unwrap();
        assert!(certify_group(&c, &rat(4, 27), 100).is_err());
        assert!(certify_group(&datasets::monster(), &rat(5, 1), 100).is_err());
    }
}
