//! JSON formats for fans, weights, divisors, matroids and polytopes.
//!
//! Rationals are written as strings `"p/q"` (or `"p"` when `q = 1`) in lowest
//! terms; integers are also accepted on input. Weight keys are comma-joined
//! ascending ray indices, with `""` for the origin.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, RatVector, Rational};
use crate::fan::{Cone, MarkedFan};
use crate::minkowski::{Divisor, MinkowskiWeight, TropicalFan};

#[derive(Deserialize)]
#[serde(untagged)]
enum RawRational {
    Text(String),
    Int(i64),
}

impl RawRational {
    fn parse(self) -> Result<Rational> {
        match self {
            RawRational::Text(s) => parse_rational(&s),
            RawRational::Int(n) => Ok(Rational::from_integer(n.into())),
        }
    }
}

/// Serde adapter for a single rational.
pub mod rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        RawRational::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a vector of rationals.
pub mod rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format_rational(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<RatVector, D::Error> {
        Vec::<RawRational>::deserialize(d)?
            .into_iter()
            .map(|r| r.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

pub fn cone_key(cone: &[usize]) -> String {
    cone.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

pub fn parse_cone_key(key: &str) -> Result<Cone> {
    if key.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut cone = key
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad cone key {key:?}")))
        })
        .collect::<Result<Cone>>()?;
    cone.sort_unstable();
    Ok(cone)
}

/// On-disk fan, optionally carrying a weight on its maximal cones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanJson {
    pub ambient_dim: usize,
    #[serde(with = "rays_format")]
    pub rays: Vec<RatVector>,
    pub maximal_cones: Vec<Cone>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, String>>,
}

mod rays_format {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize)]
    struct Row<'a>(#[serde(with = "super::rational_vec")] &'a [Rational]);

    #[derive(Deserialize)]
    struct OwnedRow(#[serde(with = "super::rational_vec")] RatVector);

    pub fn serialize<S: Serializer>(rows: &[RatVector], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(rows.iter().map(|r| Row(r)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<RatVector>, D::Error> {
        Ok(Vec::<OwnedRow>::deserialize(d)?.into_iter().map(|r| r.0).collect())
    }
}

impl FanJson {
    pub fn from_fan(fan: &MarkedFan, weight: Option<&MinkowskiWeight>) -> Self {
        FanJson {
            ambient_dim: fan.ambient_dim(),
            rays: fan.rays().to_vec(),
            maximal_cones: fan.maximal_cones().to_vec(),
            weights: weight.map(|w| {
                w.values()
                    .iter()
                    .map(|(c, v)| (cone_key(c), format_rational(v)))
                    .collect()
            }),
        }
    }

    pub fn from_tropical(tf: &TropicalFan) -> Self {
        Self::from_fan(tf.fan(), Some(tf.weight()))
    }

    /// Builds the fan (structural checks only) and the weight, if present.
    pub fn to_fan(&self) -> Result<(MarkedFan, Option<MinkowskiWeight>)> {
        let fan = MarkedFan::new(self.ambient_dim, self.rays.clone(), self.maximal_cones.clone())?;
        let weight = match &self.weights {
            None => None,
            Some(map) => {
                let values = map
                    .iter()
                    .map(|(k, v)| Ok((parse_cone_key(k)?, parse_rational(v)?)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                Some(MinkowskiWeight::new(fan.dim(), values))
            }
        };
        Ok((fan, weight))
    }

    /// Tropical fan; a missing weight defaults to one on every maximal cone.
    pub fn to_tropical(&self) -> Result<TropicalFan> {
        let (fan, weight) = self.to_fan()?;
        let weight = weight.unwrap_or_else(|| MinkowskiWeight::uniform(&fan, fan.dim(), Rational::from_integer(1.into())));
        TropicalFan::new(fan, weight)
    }
}

pub fn parse_fan(text: &str) -> Result<FanJson> {
    Ok(serde_json::from_str(text)?)
}

pub fn fan_to_string(fan: &MarkedFan, weight: Option<&MinkowskiWeight>) -> String {
    serde_json::to_string_pretty(&FanJson::from_fan(fan, weight)).expect("fan serializes")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidJson {
    pub n: usize,
    pub bases: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DivisorsInput {
    Wrapped { divisors: Vec<Divisor> },
    List(Vec<Divisor>),
    Single(Divisor),
}

/// Accepts `{"divisors": [...]}`, a bare array of divisors, or one divisor.
pub fn parse_divisors(text: &str) -> Result<Vec<Divisor>> {
    let input: DivisorsInput = serde_json::from_str(text)?;
    Ok(match input {
        DivisorsInput::Wrapped { divisors } | DivisorsInput::List(divisors) => divisors,
        DivisorsInput::Single(d) => vec![d],
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RhsInput {
    Many(Vec<Vec<RawRational>>),
    One(Vec<RawRational>),
}

/// Polytopes sharing a complete normal fan, each given by one right-hand side
/// per ray: `P = {x : ⟨u_ρ, x⟩ ≤ a_ρ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeInput {
    pub fan: FanJson,
    pub rhs: Vec<RatVector>,
}

pub fn parse_polytopes(text: &str) -> Result<PolytopeInput> {
    #[derive(Deserialize)]
    struct Raw {
        fan: FanJson,
        rhs: RhsInput,
    }
    let raw: Raw = serde_json::from_str(text)?;
    let lists = match raw.rhs {
        RhsInput::Many(v) => v,
        RhsInput::One(v) => vec![v],
    };
    let rhs = lists
        .into_iter()
        .map(|l| l.into_iter().map(RawRational::parse).collect())
        .collect::<Result<_>>()?;
    Ok(PolytopeInput { fan: raw.fan, rhs })
}
