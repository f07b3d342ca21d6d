//! The JSON cloud format and the small flag grammars consumed by the CLI.
//!
//! A cloud file names the parameters, a CP-side model with its anchor, and
//! an optional Y side given as a distance table whose row 0 is the
//! basepoint ∗. Parsing either yields a validated [`WedgeCloud`] or a
//! field-level diagnostic; it must never panic, whatever the input.

use crate::metric::{
    BkParams, FiniteMetric, LpExponent, MetricError, PointedFiniteMetric, WedgeCloud,
};
use crate::models::{
    hellinger_metric, ray_metric, HellingerPoint, ModelError, RayPoint, SyntheticYSpace,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on points per side; this is a desk-scale tool.
pub const MAX_SIDE_POINTS: usize = 512;

#[derive(Debug, Error)]
pub enum CloudSpecError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("{field}: {source}")]
    Metric {
        field: String,
        #[source]
        source: MetricError,
    },
    #[error("{field}: {source}")]
    Model {
        field: String,
        #[source]
        source: ModelError,
    },
}

fn field_err(field: &str, message: impl Into<String>) -> CloudSpecError {
    CloudSpecError::Field {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub lambda: f64,
    pub alpha: f64,
    pub p: LpExponent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CSideModelKind {
    Scalar,
    Hellinger,
    Ray,
    Explicit,
}

/// Scalar/ray points are numbers; Hellinger points are coordinate vectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CPoints {
    Scalars(Vec<f64>),
    Vectors(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct CSideSpec {
    pub model: CSideModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<CPoints>,
    /// Full distance table, for the explicit model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distances: Option<Vec<Vec<f64>>>,
    pub anchor: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct YSideSpec {
    /// Distance table including the basepoint ∗ as row and column 0.
    pub distances: Vec<Vec<f64>>,
    /// When false the table holds raw values and λ·d^α is applied on
    /// ingestion. Post-snowflake tables are the default.
    #[serde(default = "default_true")]
    pub snowflaked: bool,
    /// Optional cb-norms per non-basepoint point, used for the radius
    /// bound check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cb_norms: Option<Vec<f64>>,
    /// Labels per non-basepoint point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct CloudSpec {
    pub params: ParamsSpec,
    pub c_side: CSideSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_side: Option<YSideSpec>,
    #[serde(default)]
    pub include_anchor_as_vertex: bool,
}

/// The CP-side geometry retained from parsing, for ambient-oracle
/// selection.
#[derive(Debug, Clone, PartialEq)]
pub enum CModel {
    /// Only the table is known; witnesses come from finite candidate sets.
    Explicit,
    /// Scalar or ray points with their parameters c ≥ 0.
    RayLike(Vec<f64>),
    /// Orthant points with their coordinate vectors.
    Hellinger(Vec<Vec<f64>>),
}

/// A parsed and validated cloud, with non-fatal warnings.
#[derive(Debug, Clone)]
pub struct BuiltCloud {
    pub cloud: WedgeCloud,
    pub c_model: CModel,
    pub warnings: Vec<String>,
}

impl CloudSpec {
    pub fn from_json(data: &str) -> Result<Self, CloudSpecError> {
        Ok(serde_json::from_str(data)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cloud specs always serialize")
    }

    /// Validate and build the wedge cloud.
    pub fn build(&self) -> Result<BuiltCloud, CloudSpecError> {
        let params = BkParams::new(self.params.lambda, self.params.alpha, self.params.p).map_err(
            |source| CloudSpecError::Metric {
                field: "params".into(),
                source,
            },
        )?;

        let (c_metric, c_model) = self.build_c_side()?;
        if self.c_side.anchor >= c_metric.len() {
            return Err(field_err(
                "cSide.anchor",
                format!(
                    "anchor {} out of range for {} points",
                    self.c_side.anchor,
                    c_metric.len()
                ),
            ));
        }
        let c_side = PointedFiniteMetric::new(c_metric, self.c_side.anchor).map_err(|source| {
            CloudSpecError::Metric {
                field: "cSide".into(),
                source,
            }
        })?;

        let mut warnings = Vec::new();
        let y_side = match &self.y_side {
            None => PointedFiniteMetric::new(FiniteMetric::singleton(Some("*".into())), 0)
                .expect("singleton basepoint"),
            Some(spec) => self.build_y_side(spec, &params, &mut warnings)?,
        };

        let cloud = WedgeCloud::new(c_side, y_side, params, self.include_anchor_as_vertex)
            .map_err(|source| CloudSpecError::Metric {
                field: "cloud".into(),
                source,
            })?;
        Ok(BuiltCloud {
            cloud,
            c_model,
            warnings,
        })
    }

    fn build_c_side(&self) -> Result<(FiniteMetric, CModel), CloudSpecError> {
        let spec = &self.c_side;
        let check_len = |n: usize| -> Result<(), CloudSpecError> {
            if n == 0 {
                return Err(field_err("cSide.points", "at least one point is required"));
            }
            if n > MAX_SIDE_POINTS {
                return Err(field_err(
                    "cSide.points",
                    format!("{n} points exceed the cap of {MAX_SIDE_POINTS}"),
                ));
            }
            Ok(())
        };
        match spec.model {
            CSideModelKind::Scalar | CSideModelKind::Ray => {
                let Some(CPoints::Scalars(cs)) = &spec.points else {
                    return Err(field_err(
                        "cSide.points",
                        "scalar and ray models need a list of numbers",
                    ));
                };
                check_len(cs.len())?;
                let points: Vec<RayPoint> = cs
                    .iter()
                    .map(|&c| RayPoint::new(c))
                    .collect::<Result<_, _>>()
                    .map_err(|source| CloudSpecError::Model {
                        field: "cSide.points".into(),
                        source,
                    })?;
                let metric = ray_metric(&points, spec.labels.clone()).map_err(|source| {
                    CloudSpecError::Model {
                        field: "cSide".into(),
                        source,
                    }
                })?;
                Ok((metric, CModel::RayLike(cs.clone())))
            }
            CSideModelKind::Hellinger => {
                let Some(CPoints::Vectors(vs)) = &spec.points else {
                    return Err(field_err(
                        "cSide.points",
                        "the hellinger model needs a list of coordinate vectors",
                    ));
                };
                check_len(vs.len())?;
                let points: Vec<HellingerPoint> = vs
                    .iter()
                    .map(|v| HellingerPoint::new(v.clone()))
                    .collect::<Result<_, _>>()
                    .map_err(|source| CloudSpecError::Model {
                        field: "cSide.points".into(),
                        source,
                    })?;
                let metric = hellinger_metric(&points, spec.labels.clone()).map_err(|source| {
                    CloudSpecError::Model {
                        field: "cSide".into(),
                        source,
                    }
                })?;
                Ok((metric, CModel::Hellinger(vs.clone())))
            }
            CSideModelKind::Explicit => {
                let Some(table) = &spec.distances else {
                    return Err(field_err(
                        "cSide.distances",
                        "the explicit model needs a distance table",
                    ));
                };
                check_len(table.len())?;
                let metric =
                    FiniteMetric::new(table.clone(), spec.labels.clone()).map_err(|source| {
                        CloudSpecError::Metric {
                            field: "cSide.distances".into(),
                            source,
                        }
                    })?;
                Ok((metric, CModel::Explicit))
            }
        }
    }

    fn build_y_side(
        &self,
        spec: &YSideSpec,
        params: &BkParams,
        warnings: &mut Vec<String>,
    ) -> Result<PointedFiniteMetric, CloudSpecError> {
        let n = spec.distances.len();
        if n == 0 {
            return Err(field_err(
                "ySide.distances",
                "the table must at least contain the basepoint row",
            ));
        }
        if n > MAX_SIDE_POINTS {
            return Err(field_err(
                "ySide.distances",
                format!("{n} points exceed the cap of {MAX_SIDE_POINTS}"),
            ));
        }
        let mut labels = vec!["*".to_string()];
        match &spec.labels {
            Some(user) if user.len() != n - 1 => {
                return Err(field_err(
                    "ySide.labels",
                    format!("expected {} labels, got {}", n - 1, user.len()),
                ));
            }
            Some(user) => labels.extend(user.iter().cloned()),
            None => labels.extend((1..n).map(|j| format!("y{j}"))),
        }
        let raw = FiniteMetric::new(spec.distances.clone(), Some(labels)).map_err(|source| {
            CloudSpecError::Metric {
                field: "ySide.distances".into(),
                source,
            }
        })?;
        let metric = if spec.snowflaked {
            raw
        } else {
            raw.snowflake(params.lambda, params.alpha)
                .map_err(|source| CloudSpecError::Metric {
                    field: "ySide.distances".into(),
                    source,
                })?
        };
        let pointed = PointedFiniteMetric::new(metric, 0).map_err(|source| {
            CloudSpecError::Metric {
                field: "ySide".into(),
                source,
            }
        })?;
        if let Some(norms) = &spec.cb_norms {
            if norms.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(field_err(
                    "ySide.cbNorms",
                    "cb-norms must be finite and nonnegative",
                ));
            }
            let space = SyntheticYSpace {
                pointed: pointed.clone(),
                cb_norms: Some(norms.clone()),
            };
            if let Err(e) = space.validate(params) {
                warnings.push(format!("ySide.cbNorms: {e}"));
            }
        }
        Ok(pointed)
    }

    /// The canonical explicit form of a cloud: full tables, post-snowflake
    /// Y side. Rebuilding from it reproduces the distance tables
    /// bit for bit.
    pub fn canonical(cloud: &WedgeCloud) -> CloudSpec {
        let c = &cloud.c_side().metric;
        let y = &cloud.y_side().metric;
        let y_side = if y.len() > 1 {
            // reorder so that the basepoint is row 0
            let base = cloud.y_side().basepoint;
            let order: Vec<usize> = std::iter::once(base)
                .chain((0..y.len()).filter(|&j| j != base))
                .collect();
            let table: Vec<Vec<f64>> = order
                .iter()
                .map(|&i| order.iter().map(|&j| y.get(i, j)).collect())
                .collect();
            let labels: Option<Vec<String>> = y
                .labels()
                .map(|ls| order[1..].iter().map(|&j| ls[j].clone()).collect());
            Some(YSideSpec {
                distances: table,
                snowflaked: true,
                cb_norms: None,
                labels,
            })
        } else {
            None
        };
        CloudSpec {
            params: ParamsSpec {
                lambda: cloud.params().lambda,
                alpha: cloud.params().alpha,
                p: cloud.params().p,
            },
            c_side: CSideSpec {
                model: CSideModelKind::Explicit,
                points: None,
                distances: Some(c.rows()),
                anchor: cloud.anchor(),
                labels: c.labels().map(<[String]>::to_vec),
            },
            y_side,
            include_anchor_as_vertex: cloud.include_basepoint(),
        }
    }
}

/// Parse a comma-separated scale grid such as `0.4,0.6,1.0`. Scales must
/// be finite and nonnegative; the result is sorted and deduplicated.
pub fn parse_scale_grid(text: &str) -> Result<Vec<f64>, CloudSpecError> {
    let mut grid = Vec::new();
    for (k, part) in text.split(',').enumerate() {
        let token = part.trim();
        if token.is_empty() {
            return Err(field_err("t-grid", format!("empty entry at position {k}")));
        }
        let value: f64 = token
            .parse()
            .map_err(|_| field_err("t-grid", format!("not a number: {token:?}")))?;
        if !value.is_finite() || value < 0.0 {
            return Err(field_err(
                "t-grid",
                format!("scales must be finite and nonnegative, got {value}"),
            ));
        }
        grid.push(value);
    }
    if grid.is_empty() {
        return Err(field_err("t-grid", "no scales given"));
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    const K22_JSON: &str = r#"{
        "params": {"lambda": 1.0, "alpha": 1.0, "p": "inf"},
        "cSide": {"model": "ray", "points": [0, 1, 4], "anchor": 1,
                  "labels": ["x0", "x1", "x4"]},
        "ySide": {"distances": [[0.0, 0.95, 0.95], [0.95, 0.0, 1.9], [0.95, 1.9, 0.0]],
                  "labels": ["y+", "y-"]},
        "includeAnchorAsVertex": false
    }"#;

    #[test]
    fn parse_and_build_k22() {
        let spec = CloudSpec::from_json(K22_JSON).unwrap();
        let built = spec.build().unwrap();
        assert!(built.warnings.is_empty());
        let table = built.cloud.full_distance_table().unwrap();
        assert_eq!(table.len(), 4);
        assert_eq!(table.get(0, 1), 2.0);
        assert!(matches!(built.c_model, CModel::RayLike(_)));
    }

    #[test]
    fn triangle_violation_is_reported_with_field() {
        let bad = r#"{
            "params": {"lambda": 1.0, "alpha": 1.0, "p": 2},
            "cSide": {"model": "explicit", "anchor": 0,
                      "distances": [[0.0, 1.0, 9.0], [1.0, 0.0, 1.0], [9.0, 1.0, 0.0]]}
        }"#;
        let err = CloudSpec::from_json(bad).unwrap().build().unwrap_err();
        let text = err.to_string();
        assert!(text.contains("cSide.distances"), "{text}");
        assert!(text.contains("triangle"), "{text}");
    }

    #[test]
    fn cb_norm_violation_is_a_warning() {
        let spec_text = r#"{
            "params": {"lambda": 1.0, "alpha": 1.0, "p": "inf"},
            "cSide": {"model": "scalar", "points": [0, 1], "anchor": 0},
            "ySide": {"distances": [[0.0, 0.9], [0.9, 0.0]], "cbNorms": [0.25]}
        }"#;
        let built = CloudSpec::from_json(spec_text).unwrap().build().unwrap();
        assert_eq!(built.warnings.len(), 1);
        assert!(built.warnings[0].contains("cbNorms"));
    }

    #[test]
    fn pre_snowflake_tables_are_transformed() {
        let spec_text = r#"{
            "params": {"lambda": 2.0, "alpha": 0.5, "p": 1},
            "cSide": {"model": "scalar", "points": [1], "anchor": 0},
            "ySide": {"distances": [[0.0, 4.0], [4.0, 0.0]], "snowflaked": false}
        }"#;
        let built = CloudSpec::from_json(spec_text).unwrap().build().unwrap();
        // λ·4^α = 2·2 = 4
        assert_eq!(built.cloud.r_y(1), 4.0);
    }

    #[test]
    fn canonical_roundtrip_is_bit_exact() {
        let spec = CloudSpec::from_json(K22_JSON).unwrap();
        let built = spec.build().unwrap();
        let canonical = CloudSpec::canonical(&built.cloud);
        let rebuilt = CloudSpec::from_json(&canonical.to_json())
            .unwrap()
            .build()
            .unwrap();
        let a = built.cloud.full_distance_table().unwrap();
        let b = rebuilt.cloud.full_distance_table().unwrap();
        assert_eq!(a.len(), b.len());
        for i in 0..a.len() {
            for j in 0..a.len() {
                assert!(a.get(i, j).to_bits() == b.get(i, j).to_bits());
            }
        }
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(
            parse_scale_grid("1.0, 0.4,0.6,1.0").unwrap(),
            vec![0.4, 0.6, 1.0]
        );
        assert!(parse_scale_grid("").is_err());
        assert!(parse_scale_grid("0.4,,1").is_err());
        assert!(parse_scale_grid("NaN").is_err());
        assert!(parse_scale_grid("-1").is_err());
    }

    #[test]
    fn malformed_json_never_panics() {
        for bad in ["", "{", "[1,2,3]", "{\"params\": 3}", "null"] {
            assert!(CloudSpec::from_json(bad).is_err());
        }
    }
}
