//! Built-in clouds with documented defaults, one per demonstration
//! scenario. Parameters left free by the underlying constructions
//! (radii, Y separation, bipartite sizes, sequence length) are arguments
//! with defaults chosen to satisfy each scenario's hypotheses strictly.

use crate::cloudspec::{
    CPoints, CSideModelKind, CSideSpec, CloudSpec, CloudSpecError, ParamsSpec, YSideSpec,
};
use crate::metric::LpExponent;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unknown scenario {0:?}")]
    Unknown(String),
    #[error("scenario parameter out of range: {0}")]
    BadParameter(String),
    #[error(transparent)]
    CloudSpec(#[from] CloudSpecError),
}

/// What `run` produces for a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunKind {
    /// Complexes and Betti profiles over a scale grid.
    Complexes,
    /// The anchor-separation report (metric-level, no complexes by default).
    AnchorReport,
    /// The two-sided Bures/cb-norm comparison grid.
    KswReport,
}

/// The built-in scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioId {
    CpRay,
    CpHellingerDim2,
    K22,
    Kmn,
    MixedLoop,
    CpCechIntrinsicVsAmbient,
    AnchorSeparation,
    KswScalar,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 8] = [
        ScenarioId::CpRay,
        ScenarioId::CpHellingerDim2,
        ScenarioId::K22,
        ScenarioId::Kmn,
        ScenarioId::MixedLoop,
        ScenarioId::CpCechIntrinsicVsAmbient,
        ScenarioId::AnchorSeparation,
        ScenarioId::KswScalar,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioId::CpRay => "cp-ray",
            ScenarioId::CpHellingerDim2 => "cp-hellinger-dim2",
            ScenarioId::K22 => "k22",
            ScenarioId::Kmn => "kmn",
            ScenarioId::MixedLoop => "mixed-loop",
            ScenarioId::CpCechIntrinsicVsAmbient => "cp-cech-intrinsic-vs-ambient",
            ScenarioId::AnchorSeparation => "anchor-separation",
            ScenarioId::KswScalar => "ksw-scalar",
        }
    }

    pub fn parse(name: &str) -> Result<Self, ScenarioError> {
        Self::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| ScenarioError::Unknown(name.to_string()))
    }

    pub fn description(&self) -> &'static str {
        match self {
            ScenarioId::CpRay => {
                "three points on the depolarizing ray; Rips stages discrete → path → full simplex"
            }
            ScenarioId::CpHellingerDim2 => {
                "three CP functionals on C^2 under the Hellinger distance; no loops at any scale"
            }
            ScenarioId::K22 => {
                "two far CP points and two far Y points whose cross edges form a 4-cycle"
            }
            ScenarioId::Kmn => {
                "m CP and n Y points with no within-side edges; Rips is the K_{m,n} graph"
            }
            ScenarioId::MixedLoop => {
                "the k22 cloud swept over scales: loop present exactly while cross edges beat within-side edges"
            }
            ScenarioId::CpCechIntrinsicVsAmbient => {
                "cp-ray revisited with Čech complexes; ambient witnesses reveal an intermediate path stage"
            }
            ScenarioId::AnchorSeparation => {
                "scalar cloud with a shrinking non-CP sequence; anchor change shifts the metric by at most the Bures gap"
            }
            ScenarioId::KswScalar => {
                "two-sided comparison between Bures values and cb-norm data on the scalar and ray models"
            }
        }
    }

    /// What a `run` of this scenario produces by default.
    pub fn run_kind(&self) -> RunKind {
        match self {
            ScenarioId::AnchorSeparation => RunKind::AnchorReport,
            ScenarioId::KswScalar => RunKind::KswReport,
            _ => RunKind::Complexes,
        }
    }

    /// Default scale grid for sweeps.
    pub fn default_grid(&self) -> Vec<f64> {
        match self {
            ScenarioId::CpRay => vec![0.5, 0.99, 1.0, 1.5, 1.99, 2.0, 3.0],
            ScenarioId::CpHellingerDim2 => vec![0.5, 1.0, 1.2, std::f64::consts::SQRT_2, 1.5],
            ScenarioId::K22 => vec![1.5],
            ScenarioId::Kmn => vec![1.0],
            ScenarioId::MixedLoop => vec![0.5, 0.9, 1.0, 1.5, 1.89, 1.9, 2.0, 3.0],
            ScenarioId::CpCechIntrinsicVsAmbient => vec![0.4, 0.5, 0.6, 0.99, 1.0],
            ScenarioId::AnchorSeparation | ScenarioId::KswScalar => vec![1.0],
        }
    }
}

/// Free parameters of the scenario family, with the documented defaults.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScenarioParams {
    /// Radius of y⁺ (default 0.95).
    pub r_plus: f64,
    /// Radius of y⁻ (default 0.95).
    pub r_minus: f64,
    /// Y-side separation between y⁺ and y⁻ (default 1.9).
    pub y_sep: f64,
    /// CP-side size of the bipartite scenario (default 2).
    pub m: usize,
    /// Y-side size of the bipartite scenario (default 2).
    pub n: usize,
    /// Length of the shrinking sequence (default 256).
    pub n_max: u32,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        ScenarioParams {
            r_plus: 0.95,
            r_minus: 0.95,
            y_sep: 1.9,
            m: 2,
            n: 2,
            n_max: 256,
        }
    }
}

fn max_glue_params() -> ParamsSpec {
    ParamsSpec {
        lambda: 1.0,
        alpha: 1.0,
        p: LpExponent::Infinity,
    }
}

fn ray_c_side() -> CSideSpec {
    CSideSpec {
        model: CSideModelKind::Ray,
        points: Some(CPoints::Scalars(vec![0.0, 1.0, 4.0])),
        distances: None,
        anchor: 1,
        labels: Some(vec!["x0".into(), "x1".into(), "x4".into()]),
    }
}

/// Star table: one hub at the given distance from every leaf, leaves
/// pairwise at twice that distance. Row 0 is the hub.
fn star_table(leaves: usize, hub_dist: f64) -> Vec<Vec<f64>> {
    let n = leaves + 1;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        0.0
                    } else if i == 0 || j == 0 {
                        hub_dist
                    } else {
                        2.0 * hub_dist
                    }
                })
                .collect()
        })
        .collect()
}

/// The cloud spec of a scenario. `ksw-scalar` and `anchor-separation`
/// also produce report output beyond their clouds; see
/// [`ScenarioId::run_kind`].
pub fn scenario_spec(id: ScenarioId, params: &ScenarioParams) -> Result<CloudSpec, ScenarioError> {
    validate_params(id, params)?;
    let spec = match id {
        ScenarioId::CpRay | ScenarioId::CpCechIntrinsicVsAmbient => CloudSpec {
            params: max_glue_params(),
            c_side: ray_c_side(),
            y_side: None,
            include_anchor_as_vertex: true,
        },
        ScenarioId::CpHellingerDim2 => CloudSpec {
            params: max_glue_params(),
            c_side: CSideSpec {
                model: CSideModelKind::Hellinger,
                points: Some(CPoints::Vectors(vec![
                    vec![1.0, 0.0],
                    vec![0.0, 1.0],
                    vec![1.0, 1.0],
                ])),
                distances: None,
                anchor: 2,
                labels: Some(vec!["z1".into(), "z2".into(), "z3".into()]),
            },
            y_side: None,
            include_anchor_as_vertex: true,
        },
        ScenarioId::K22 | ScenarioId::MixedLoop => CloudSpec {
            params: max_glue_params(),
            c_side: ray_c_side(),
            y_side: Some(YSideSpec {
                distances: vec![
                    vec![0.0, params.r_plus, params.r_minus],
                    vec![params.r_plus, 0.0, params.y_sep],
                    vec![params.r_minus, params.y_sep, 0.0],
                ],
                snowflaked: true,
                cb_norms: Some(vec![1.0, 1.0]),
                labels: Some(vec!["y+".into(), "y-".into()]),
            }),
            include_anchor_as_vertex: false,
        },
        ScenarioId::Kmn => CloudSpec {
            params: max_glue_params(),
            c_side: CSideSpec {
                model: CSideModelKind::Explicit,
                points: None,
                distances: Some(star_table(params.m, 1.0)),
                anchor: 0,
                labels: Some(
                    std::iter::once("θ".to_string())
                        .chain((1..=params.m).map(|i| format!("x{i}")))
                        .collect(),
                ),
            },
            y_side: Some(YSideSpec {
                distances: star_table(params.n, 1.0),
                snowflaked: true,
                cb_norms: None,
                labels: Some((1..=params.n).map(|j| format!("y{j}")).collect()),
            }),
            include_anchor_as_vertex: false,
        },
        ScenarioId::AnchorSeparation => {
            // shrinking radii r_k = k^{-1/2} on a line through ∗
            let n = params.n_max as usize;
            let radii: Vec<f64> = (1..=n).map(|k| 1.0 / (k as f64).sqrt()).collect();
            let mut table = vec![vec![0.0; n + 1]; n + 1];
            for i in 0..=n {
                for j in 0..=n {
                    if i == j {
                        continue;
                    }
                    let ri = if i == 0 { 0.0 } else { radii[i - 1] };
                    let rj = if j == 0 { 0.0 } else { radii[j - 1] };
                    table[i][j] = (ri - rj).abs();
                }
            }
            CloudSpec {
                params: max_glue_params(),
                c_side: CSideSpec {
                    model: CSideModelKind::Scalar,
                    points: Some(CPoints::Scalars(vec![1.0, 4.0])),
                    distances: None,
                    anchor: 0,
                    labels: Some(vec!["θ1".into(), "θ2".into()]),
                },
                y_side: Some(YSideSpec {
                    distances: table,
                    snowflaked: true,
                    cb_norms: Some((1..=n).map(|k| 1.0 / k as f64).collect()),
                    labels: Some((1..=n).map(|k| format!("ψ{k}")).collect()),
                }),
                include_anchor_as_vertex: false,
            }
        }
        ScenarioId::KswScalar => CloudSpec {
            params: max_glue_params(),
            c_side: CSideSpec {
                model: CSideModelKind::Scalar,
                points: Some(CPoints::Scalars(vec![0.0, 1.0, 4.0])),
                distances: None,
                anchor: 1,
                labels: Some(vec!["φ0".into(), "φ1".into(), "φ4".into()]),
            },
            y_side: Some(YSideSpec {
                distances: vec![vec![0.0, 1.0], vec![1.0, 0.0]],
                snowflaked: true,
                cb_norms: Some(vec![1.0]),
                labels: Some(vec!["ψ1".into()]),
            }),
            include_anchor_as_vertex: false,
        },
    };
    Ok(spec)
}

fn validate_params(id: ScenarioId, p: &ScenarioParams) -> Result<(), ScenarioError> {
    match id {
        ScenarioId::K22 | ScenarioId::MixedLoop => {
            for (name, v) in [("r_plus", p.r_plus), ("r_minus", p.r_minus)] {
                if !v.is_finite() || v <= 0.0 || v > 1.0 {
                    return Err(ScenarioError::BadParameter(format!(
                        "{name} must lie in (0, λ] = (0, 1], got {v}"
                    )));
                }
            }
            if !p.y_sep.is_finite()
                || p.y_sep <= (p.r_plus - p.r_minus).abs()
                || p.y_sep > p.r_plus + p.r_minus
            {
                return Err(ScenarioError::BadParameter(format!(
                    "y_sep must lie in (|r+ − r−|, r+ + r−], got {}",
                    p.y_sep
                )));
            }
        }
        ScenarioId::Kmn => {
            if p.m == 0 || p.n == 0 || p.m > 16 || p.n > 16 {
                return Err(ScenarioError::BadParameter(format!(
                    "m and n must lie in 1..=16, got m={} n={}",
                    p.m, p.n
                )));
            }
        }
        ScenarioId::AnchorSeparation
            if (p.n_max == 0 || p.n_max > 4096) => {
                return Err(ScenarioError::BadParameter(format!(
                    "n_max must lie in 1..=4096, got {}",
                    p.n_max
                )));
            }
        _ => {}
    }
    Ok(())
}
