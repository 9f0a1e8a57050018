//! JSON encodings shared by the CLI and library users.
//!
//! Reals are written with 17 significant digits so that every `f64`
//! survives a write/read cycle bit for bit.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::order::{ConeOrder, OrderInterval};
use crate::polygon::ConvexPolygon;
use crate::regions::RegionPolytope;

/// An `f64` serialized with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Real(pub f64);

impl Real {
    pub fn vec(v: &[f64]) -> Vec<Real> {
        v.iter().copied().map(Real).collect()
    }

    pub fn unvec(v: &[Real]) -> Vec<f64> {
        v.iter().map(|r| r.0).collect()
    }
}

/// Decimal text of `v` with 17 significant digits (`null` if not finite).
pub fn format_real(v: f64) -> String {
    if !v.is_finite() {
        return "null".to_string();
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let sci = format!("{v:.16e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("exponent digits");
    if (-5..=16).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, v)
    } else {
        sci
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(format_real(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Real(f64::deserialize(d)?))
    }
}

/// Serialized form of a [`RegionPolytope`].
///
/// `vertices` are counterclockwise from the lexicographically smallest one
/// for planar regions, and the box corners otherwise. Boxes also carry their
/// cone-coordinate bounds and the generator rows of their order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub alpha: Real,
    pub vertices: Vec<Vec<Real>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<Vec<Real>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<Vec<Real>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<Real>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

impl RegionJson {
    pub fn from_region(region: &RegionPolytope, alpha: f64) -> Self {
        let mut out = RegionJson {
            kind: region.kind().to_string(),
            family: None,
            alpha: Real(alpha),
            vertices: Vec::new(),
            lower: None,
            upper: None,
            generators: None,
            dim: None,
        };
        match region {
            RegionPolytope::Empty { dim } | RegionPolytope::FullSpace { dim } => out.dim = Some(*dim),
            RegionPolytope::Polygon(p) => {
                out.vertices = p.vertices().iter().map(|v| Real::vec(v)).collect();
            }
            RegionPolytope::Box(b) => {
                out.vertices = if b.dim() == 2 {
                    region.vertices().iter().map(|v| Real::vec(v)).collect()
                } else {
                    b.corners().unwrap_or_default().iter().map(|c| Real::vec(c)).collect()
                };
                out.lower = Some(Real::vec(b.lower()));
                out.upper = Some(Real::vec(b.upper()));
                out.generators = Some(b.order().generator_rows().iter().map(|r| Real::vec(r)).collect());
            }
        }
        out
    }

    pub fn to_region(&self) -> Result<RegionPolytope> {
        let bad = |what: &str| Error::Parameter(format!("malformed region JSON: {what}"));
        match self.kind.as_str() {
            "empty" => Ok(RegionPolytope::Empty { dim: self.dim.unwrap_or(2) }),
            "full" => Ok(RegionPolytope::FullSpace { dim: self.dim.unwrap_or(2) }),
            "polygon" => {
                let pts = self
                    .vertices
                    .iter()
                    .map(|v| match v.as_slice() {
                        [x, y] => Ok([x.0, y.0]),
                        _ => Err(bad("polygon vertex is not a pair")),
                    })
                    .collect::<Result<Vec<[f64; 2]>>>()?;
                if pts.is_empty() {
                    return Err(bad("polygon without vertices"));
                }
                Ok(RegionPolytope::Polygon(ConvexPolygon::hull(&pts)))
            }
            "box" => {
                let lower = self.lower.as_deref().ok_or_else(|| bad("box without lower"))?;
                let upper = self.upper.as_deref().ok_or_else(|| bad("box without upper"))?;
                let rows: Vec<Vec<f64>> = self
                    .generators
                    .as_ref()
                    .ok_or_else(|| bad("box without generators"))?
                    .iter()
                    .map(|r| Real::unvec(r))
                    .collect();
                let order = ConeOrder::from_generators(&rows)?;
                Ok(RegionPolytope::Box(OrderInterval::new(order, Real::unvec(lower), Real::unvec(upper))?))
            }
            other => Err(bad(&format!("unknown kind {other:?}"))),
        }
    }
}

/// Pretty JSON text with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for v in [1.0 / 3.0, -2.5, 1e-300, 6.02e23, 0.1 + 0.2, 1.0, 123456.789, -0.0, 5e-324] {
            let s = format_real(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{s}");
            let json = serde_json::to_string(&Real(v)).unwrap();
            let r: Real = serde_json::from_str(&json).unwrap();
            assert_eq!(r.0.to_bits(), v.to_bits());
        }
        assert_eq!(format_real(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(format_real(2.0), "2.0000000000000000");
        assert_eq!(format_real(f64::NAN), "null");
    }

    #[test]
    fn region_round_trip() {
        let tri = RegionPolytope::Polygon(ConvexPolygon::hull(&[[0.0, 1.0], [-1.0, 0.0], [1.0, 0.0]]));
        let j = RegionJson::from_region(&tri, 1.0 / 3.0);
        let text = to_json_string(&j);
        assert!(text.contains("\"kind\": \"polygon\""));
        let back: RegionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_region().unwrap(), tri);

        let order = ConeOrder::rotation(0.3).unwrap();
        let b = RegionPolytope::Box(OrderInterval::new(order, vec![-1.0, 0.0], vec![1.0, 2.0]).unwrap());
        let text = to_json_string(&RegionJson::from_region(&b, 0.5));
        let back: RegionJson = serde_json::from_str(&text).unwrap();
        let r = back.to_region().unwrap();
        for p in [[0.0, 0.5], [0.9, 1.9], [3.0, 3.0], [-1.2, 0.1]] {
            assert_eq!(r.contains(&p, 0.0), b.contains(&p, 0.0));
        }

        let e = RegionJson::from_region(&RegionPolytope::Empty { dim: 2 }, 0.9);
        let text = serde_json::to_string(&e).unwrap();
        assert!(text.starts_with("{\"kind\":\"empty\""));
        assert!(serde_json::from_str::<RegionJson>(&text).unwrap().to_region().unwrap().is_empty());
    }
}
