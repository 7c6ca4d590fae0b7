//! JSON cover description files.
//!
//! ```json
//! {
//!   "name": "quad_t2p1",
//!   "group": {"degree": 2, "generators": [[[1, 2]]]},
//!   "orbits": [{"minpoly": [1, 0, 1], "class": "[2^1]"}],
//!   "defining_poly": [[-1, 0, -1], [], [1]],
//!   "vertical_ram_primes": [],
//!   "centerless": false
//! }
//! ```
//!
//! Minimal polynomials are ascending coefficient lists (integers or `"n/d"`
//! strings) or one of the tokens `"0"` and `"inf"`. `defining_poly[i][j]` is the
//! coefficient of `X^i T^j`. Groups are either permutation groups given by
//! generators in 1-based cycle notation, or `{"abstract": {...}}` with an order
//! and a list of named classes.

use std::path::Path;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{
    AbstractClass, AbstractGroup, BivariatePoly, BranchOrbit, CoverData, CoverError, Group,
    PermGroup, Perm,
};
use crate::arith::{format_rat, parse_rat, Int, PolyQ, Rat};
use crate::places::{AlgPoint, Provenance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

impl Coeff {
    fn to_rat(&self) -> Result<Rat, CoverError> {
        match self {
            Coeff::Int(n) => Ok(Rat::from_integer((*n).into())),
            Coeff::Text(s) => parse_rat(s).map_err(|e| CoverError::Invalid(e.to_string())),
        }
    }

    fn from_rat(x: &Rat) -> Self {
        match x.is_integer().then(|| x.numer().to_i64()).flatten() {
            Some(n) => Coeff::Int(n),
            None => Coeff::Text(format_rat(x)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MinpolySpec {
    Token(String),
    Coeffs(Vec<Coeff>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSpec {
    pub minpoly: MinpolySpec,
    pub class: String,
    /// Skip the irreducibility sieve and mark the point user-asserted.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub assert_irreducible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractClassSpec {
    pub label: String,
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractSpec {
    pub name: String,
    pub order: String,
    pub classes: Vec<AbstractClassSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Perm {
        degree: usize,
        generators: Vec<Vec<Vec<u32>>>,
    },
    Abstract {
        #[serde(rename = "abstract")]
        spec: AbstractSpec,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverFile {
    pub name: String,
    pub group: GroupSpec,
    pub orbits: Vec<OrbitSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defining_poly: Option<Vec<Vec<Coeff>>>,
    #[serde(default)]
    pub vertical_ram_primes: Vec<u64>,
    #[serde(default)]
    pub centerless: bool,
}

fn poly_from(coeffs: &[Coeff]) -> Result<PolyQ, CoverError> {
    Ok(PolyQ::new(
        coeffs.iter().map(Coeff::to_rat).collect::<Result<_, _>>()?,
    ))
}

fn coeffs_of(p: &PolyQ) -> Vec<Coeff> {
    p.coeffs().iter().map(Coeff::from_rat).collect()
}

impl CoverFile {
    pub fn to_cover(&self) -> Result<CoverData, CoverError> {
        let group = match &self.group {
            GroupSpec::Perm { degree, generators } => {
                let gens = generators
                    .iter()
                    .map(|cycles| {
                        Perm::from_cycles(*degree, cycles).ok_or_else(|| {
                            CoverError::Invalid(format!("bad generator {cycles:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Group::Perm(PermGroup::new(*degree, gens)?)
            }
            GroupSpec::Abstract { spec } => Group::Abstract(AbstractGroup {
                name: spec.name.clone(),
                order: Int::from_str(spec.order.trim())
                    .map_err(|_| CoverError::Invalid(format!("bad group order {}", spec.order)))?,
                classes: spec
                    .classes
                    .iter()
                    .map(|c| AbstractClass {
                        label: c.label.clone(),
                        element_order: c.order,
                    })
                    .collect(),
            }),
        };
        let mut orbits = Vec::with_capacity(self.orbits.len());
        for o in &self.orbits {
            let point = match &o.minpoly {
                MinpolySpec::Token(t) if t == "inf" => AlgPoint::Infinity,
                MinpolySpec::Token(t) if t == "0" => AlgPoint::zero(),
                MinpolySpec::Token(t) => {
                    return Err(CoverError::Invalid(format!("unknown point token {t:?}")))
                }
                MinpolySpec::Coeffs(c) if o.assert_irreducible => AlgPoint::asserted(poly_from(c)?)?,
                MinpolySpec::Coeffs(c) => AlgPoint::from_minpoly(poly_from(c)?)?,
            };
            orbits.push(BranchOrbit {
                point,
                class: group.find_class(&o.class)?,
            });
        }
        let defining_poly = match &self.defining_poly {
            Some(rows) => Some(BivariatePoly::new(
                rows.iter().map(|r| poly_from(r)).collect::<Result<_, _>>()?,
            )),
            None => None,
        };
        CoverData::new(
            self.name.clone(),
            group,
            orbits,
            defining_poly,
            self.vertical_ram_primes.clone(),
            self.centerless,
        )
    }

    pub fn from_cover(cover: &CoverData) -> Self {
        let group = match &cover.group {
            Group::Perm(g) => GroupSpec::Perm {
                degree: g.degree(),
                generators: g
                    .generators()
                    .iter()
                    .map(|p| {
                        p.cycles()
                            .into_iter()
                            .filter(|c| c.len() > 1)
                            .map(|c| c.into_iter().map(|i| i as u32 + 1).collect())
                            .collect()
                    })
                    .collect(),
            },
            Group::Abstract(a) => GroupSpec::Abstract {
                spec: AbstractSpec {
                    name: a.name.clone(),
                    order: a.order.to_string(),
                    classes: a
                        .classes
                        .iter()
                        .map(|c| AbstractClassSpec {
                            label: c.label.clone(),
                            order: c.element_order,
                        })
                        .collect(),
                },
            },
        };
        let orbits = cover
            .orbits
            .iter()
            .map(|o| OrbitSpec {
                minpoly: if o.point.is_infinity() {
                    MinpolySpec::Token("inf".into())
                } else if o.point.is_zero() {
                    MinpolySpec::Token("0".into())
                } else {
                    MinpolySpec::Coeffs(coeffs_of(&o.point.minpoly()))
                },
                class: cover.group.class_label(o.class).to_string(),
                assert_irreducible: o.point.provenance() == Provenance::UserAsserted,
            })
            .collect();
        CoverFile {
            name: cover.name.clone(),
            group,
            orbits,
            defining_poly: cover
                .defining_poly
                .as_ref()
                .map(|p| p.coeffs_in_x.iter().map(coeffs_of).collect()),
            vertical_ram_primes: cover.vertical_ram_primes.clone(),
            centerless: cover.centerless,
        }
    }
}

pub fn parse_cover(text: &str) -> Result<CoverData, CoverError> {
    let file: CoverFile =
        serde_json::from_str(text).map_err(|e| CoverError::Invalid(e.to_string()))?;
    file.to_cover()
}

pub fn load_cover(path: &Path) -> Result<CoverData, CoverError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CoverError::Invalid(format!("{}: {e}", path.display())))?;
    parse_cover(&text)
}

pub fn cover_to_json(cover: &CoverData) -> String {
    serde_json::to_string_pretty(&CoverFile::from_cover(cover)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::datasets;

    #[test]
    fn round_trip_all_datasets() {
        for c in datasets::all() {
            let text = cover_to_json(&c);
            let back = parse_cover(&text).unwrap();
            assert_eq!(back.name, c.name);
            assert_eq!(back.orbits, c.orbits);
            assert_eq!(back.defining_poly, c.defining_poly);
            assert_eq!(back.vertical_ram_primes, c.vertical_ram_primes);
            assert_eq!(back.group.order(), c.group.order());
        }
    }

    #[test]
    fn parses_documented_example() {
        let text = r#"{
          "name": "quad_t2p1",
          "group": {"degree": 2, "generators": [[[1, 2]]]},
          "orbits": [{"minpoly": [1, 0, 1], "class": "[2^1]"}],
          "defining_poly": [[-1, 0, -1], [], [1]],
          "vertical_ram_primes": [],
          "centerless": false
        }"#;
        let c = parse_cover(text).unwrap();
        assert_eq!(c.orbits.len(), 1);
        assert_eq!(c.defining_poly, datasets::quad_t2p1().defining_poly);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_cover("{").is_err());
        let bad_class = r#"{"name": "x", "group": {"degree": 3, "generators": [[[1, 2]], [[1, 2, 3]]]},
            "orbits": [{"minpoly": "0", "class": "[2^2]"}]}"#;
        assert!(matches!(parse_cover(bad_class), Err(CoverError::UnknownClass(_))));
        let bad_token = r#"{"name": "x", "group": {"degree": 2, "generators": [[[1, 2]]]},
            "orbits": [{"minpoly": "oo", "class": "[2^1]"}]}"#;
        assert!(parse_cover(bad_token).is_err());
        let reducible = r#"{"name": "x", "group": {"degree": 2, "generators": [[[1, 2]]]},
            "orbits": [{"minpoly": [-1, 0, 1], "class": "[2^1]"}]}"#;
        assert!(matches!(parse_cover(reducible), Err(CoverError::Places(_))));
    }
}
