//! Bundled covers.

use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed};

use super::{BivariatePoly, BranchOrbit, CoverData, CoverError, Group, PermGroup, Perm};
use super::{AbstractClass, AbstractGroup};
use crate::arith::{rat, small_prime_divisors, vp_int, Int, PolyQ, Rat};
use crate::places::AlgPoint;

fn monomial(coeff: i64, deg: usize) -> PolyQ {
    let mut c = vec![Rat::from_integer(0.into()); deg + 1];
    c[deg] = Rat::from_integer(coeff.into());
    PolyQ::new(c)
}

fn class_of_type(g: &Group, t: &[usize]) -> Result<usize, CoverError> {
    g.find_class(&super::cycle_type_label(t))
}

/// Splitting field of `X^n - T^r X^m + T^q` with `gcd(m, n) = 1` and
/// `q(n - m) - rn = 1`: group S_n, branch points 0, infinity and
/// `m^m (n - m)^(n - m) / n^n` with inertia an (m, n-m) double cycle, an
/// n-cycle and a transposition.
pub fn trinomial(n: usize, m: usize, q: usize, r: usize) -> Result<CoverData, CoverError> {
    if n < 3 || m == 0 || m >= n || m.gcd(&n) != 1 {
        return Err(CoverError::Invalid(format!(
            "trinomial needs n >= 3, 1 <= m < n, gcd(m, n) = 1 (got n={n}, m={m})"
        )));
    }
    if (q * (n - m)) as i64 - (r * n) as i64 != 1 {
        return Err(CoverError::Invalid(format!(
            "trinomial needs q(n - m) - rn = 1 (got q={q}, r={r})"
        )));
    }
    let group = Group::Perm(PermGroup::symmetric(n)?);
    let mut at_zero = vec![m, n - m];
    at_zero.sort_unstable();
    let mut transposition = vec![1; n - 2];
    transposition.push(2);
    let b = Rat::new(
        num_traits::pow(Int::from(m), m) * num_traits::pow(Int::from(n - m), n - m),
        num_traits::pow(Int::from(n), n),
    );
    let orbits = vec![
        BranchOrbit {
            point: AlgPoint::zero(),
            class: class_of_type(&group, &at_zero)?,
        },
        BranchOrbit {
            point: AlgPoint::Infinity,
            class: class_of_type(&group, &[n])?,
        },
        BranchOrbit {
            point: AlgPoint::rational(b),
            class: class_of_type(&group, &transposition)?,
        },
    ];
    let mut coeffs = vec![PolyQ::zero(); n + 1];
    coeffs[n] = PolyQ::one();
    coeffs[m] = monomial(-1, r);
    coeffs[0] = &coeffs[0] + &monomial(1, q);
    CoverData::new(
        format!("trinomial_{n}_{m}_{q}_{r}"),
        group,
        orbits,
        Some(BivariatePoly::new(coeffs)),
        vec![],
        true,
    )
}

/// Monster cover with branch points 0, 1, infinity and classes 2A, 3B, 29A.
/// Only the group order and class orders are modelled.
pub fn monster() -> CoverData {
    let order = Int::from_str("808017424794512875886459904961710757005754368000000000")
        .expect("literal");
    let class = |label: &str, element_order| AbstractClass {
        label: label.to_string(),
        element_order,
    };
    let group = Group::Abstract(AbstractGroup {
        name: "M".into(),
        order,
        classes: vec![
            class("1A", 1),
            class("2A", 2),
            class("3B", 3),
            class("29A", 29),
        ],
    });
    let orbits = vec![
        BranchOrbit {
            point: AlgPoint::zero(),
            class: 1,
        },
        BranchOrbit {
            point: AlgPoint::rational(Rat::one()),
            class: 2,
        },
        BranchOrbit {
            point: AlgPoint::Infinity,
            class: 3,
        },
    ];
    CoverData::new("monster", group, orbits, None, vec![], true).expect("valid dataset")
}

/// A5 cover from `(X^5 - X) - T(25X^4 - 9)`, branched over the roots of
/// `1 + 3^3 5^5 T^4` with 3-cycle inertia.
pub fn mestre_a5() -> Result<CoverData, CoverError> {
    let gens = vec![
        Perm::parse_cycles(5, "(1 2 3)").expect("valid"),
        Perm::parse_cycles(5, "(1 2 3 4 5)").expect("valid"),
    ];
    let group = Group::Perm(PermGroup::new(5, gens)?);
    let quartic = PolyQ::new(vec![
        Rat::one(),
        rat(0, 1),
        rat(0, 1),
        rat(0, 1),
        rat(84375, 1),
    ]);
    let orbits = vec![BranchOrbit {
        point: AlgPoint::from_minpoly(quartic)?,
        class: class_of_type(&group, &[1, 1, 3])?,
    }];
    let coeffs = vec![
        PolyQ::from_ints(&[0, 9]),
        PolyQ::from_ints(&[-1]),
        PolyQ::zero(),
        PolyQ::zero(),
        PolyQ::from_ints(&[0, -25]),
        PolyQ::one(),
    ];
    CoverData::new(
        "mestre_a5",
        group,
        orbits,
        Some(BivariatePoly::new(coeffs)),
        vec![],
        true,
    )
}

/// `Q(T)(sqrt(P(T)))` for `P` the product of the given irreducible factors.
/// Branch points are the roots of `P`, plus infinity when `deg P` is odd.
/// Primes at which the content of `P` has odd valuation are declared
/// vertically ramified.
pub fn quadratic(name: &str, factors: &[PolyQ]) -> Result<CoverData, CoverError> {
    let z2 = PermGroup::new(2, vec![Perm::parse_cycles(2, "(1 2)").expect("valid")])?;
    let group = Group::Perm(z2);
    let class = group.find_class("[2^1]")?;
    let mut orbits = Vec::new();
    let mut p = PolyQ::one();
    for f in factors {
        orbits.push(BranchOrbit {
            point: AlgPoint::from_minpoly(f.clone())?,
            class,
        });
        p = &p * f;
    }
    if p.degree() % 2 == 1 {
        orbits.push(BranchOrbit {
            point: AlgPoint::Infinity,
            class,
        });
    }
    let prim = PolyQ::from_int_vec(p.primitive_part());
    let content = p.lc() / prim.lc();
    let mut vertical = Vec::new();
    for part in [content.numer(), content.denom()] {
        let (primes, rest) = small_prime_divisors(part, 10_000);
        assert!(rest.abs().is_one(), "content too large to factor");
        for q in primes {
            if vp_int(part, q).unwrap_or(0) % 2 == 1 {
                vertical.push(q);
            }
        }
    }
    let coeffs = vec![-&p, PolyQ::zero(), PolyQ::one()];
    CoverData::new(
        format!("quad_{name}"),
        group,
        orbits,
        Some(BivariatePoly::new(coeffs)),
        vertical,
        false,
    )
}

/// `X^3 + TX + T`: S3, branch points 0 (3-cycle), -27/4 and infinity
/// (transpositions).
pub fn s3_generic() -> Result<CoverData, CoverError> {
    let group = Group::Perm(PermGroup::symmetric(3)?);
    let orbits = vec![
        BranchOrbit {
            point: AlgPoint::zero(),
            class: class_of_type(&group, &[3])?,
        },
        BranchOrbit {
            point: AlgPoint::rational(rat(-27, 4)),
            class: class_of_type(&group, &[1, 2])?,
        },
        BranchOrbit {
            point: AlgPoint::Infinity,
            class: class_of_type(&group, &[1, 2])?,
        },
    ];
    let coeffs = vec![
        PolyQ::from_ints(&[0, 1]),
        PolyQ::from_ints(&[0, 1]),
        PolyQ::zero(),
        PolyQ::one(),
    ];
    CoverData::new(
        "s3_generic",
        group,
        orbits,
        Some(BivariatePoly::new(coeffs)),
        vec![],
        true,
    )
}

pub fn quad_t2p1() -> CoverData {
    quadratic("t2p1", &[PolyQ::from_ints(&[1, 0, 1])]).expect("valid dataset")
}

pub fn quad_t() -> CoverData {
    quadratic("t", &[PolyQ::from_ints(&[0, 1])]).expect("valid dataset")
}

pub fn quad_t2p1_t2m2() -> CoverData {
    quadratic(
        "t2p1_t2m2",
        &[PolyQ::from_ints(&[1, 0, 1]), PolyQ::from_ints(&[-2, 0, 1])],
    )
    .expect("valid dataset")
}

pub fn quad_t_4m27t() -> CoverData {
    quadratic(
        "t_4m27t",
        &[PolyQ::from_ints(&[0, 1]), PolyQ::from_ints(&[4, -27])],
    )
    .expect("valid dataset")
}

/// Quadratic covers used for predictor/oracle agreement runs.
pub fn quadratic_corpus() -> Vec<CoverData> {
    vec![quad_t2p1(), quad_t(), quad_t2p1_t2m2(), quad_t_4m27t()]
}

/// Cubic covers used for predictor/oracle agreement runs.
pub fn cubic_corpus() -> Vec<CoverData> {
    vec![
        trinomial(3, 1, 2, 1).expect("valid dataset"),
        s3_generic().expect("valid dataset"),
    ]
}

/// Every bundled cover, keyed by the file stem used under `data/covers`.
pub fn all() -> Vec<CoverData> {
    let mut out = quadratic_corpus();
    out.extend(cubic_corpus());
    out.push(trinomial(5, 2, 2, 1).expect("valid dataset"));
    out.push(trinomial(5, 1, 4, 3).expect("valid dataset"));
    out.push(mestre_a5().expect("valid dataset"));
    out.push(monster());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{discriminant, rat_int};
    use crate::cover::classify_prime;

    #[test]
    fn trinomial_branch_point() {
        let c = trinomial(3, 1, 2, 1).unwrap();
        assert_eq!(
            c.orbits[2].point.rational_value().unwrap(),
            crate::places::PointP1::Finite(rat(4, 27))
        );
        assert_eq!(c.class_label(0), "[1^1 2^1]");
        assert_eq!(c.class_label(1), "[3^1]");
        assert!(trinomial(4, 2, 1, 1).is_err());
        assert!(trinomial(3, 1, 1, 1).is_err());
    }

    #[test]
    fn trinomial_discriminant_vanishes_at_branch_points() {
        // disc of X^3 - tX + t^2 is t^3 (4 - 27 t)
        let c = trinomial(3, 1, 2, 1).unwrap();
        let poly = c.defining_poly.as_ref().unwrap();
        for t in [rat(2, 1), rat(-5, 3), rat(38, 1)] {
            let d = discriminant(&poly.specialize(&t));
            assert_eq!(d, &t * &t * &t * (rat_int(4) - rat_int(27) * &t));
        }
    }

    #[test]
    fn quadratic_vertical_primes() {
        let c = quadratic("x", &[PolyQ::from_ints(&[0, 12])]).unwrap();
        assert_eq!(c.vertical_ram_primes, vec![3]);
        assert!(!classify_prime(&c, 3).is_good());
        assert!(quad_t_4m27t().vertical_ram_primes.is_empty());
        assert_eq!(quad_t().orbits.len(), 2);
        assert_eq!(quad_t2p1_t2m2().branch_point_count(), 4);
    }

    #[test]
    fn s3_generic_discriminant() {
        // disc of X^3 + tX + t is -t^2 (4t + 27)
        let c = s3_generic().unwrap();
        let poly = c.defining_poly.as_ref().unwrap();
        let t = rat(5, 7);
        let d = discriminant(&poly.specialize(&t));
        assert_eq!(d, -(&t * &t) * (rat_int(4) * &t + rat_int(27)));
    }

    #[test]
    fn all_datasets_build() {
        assert_eq!(all().len(), 10);
    }
}
