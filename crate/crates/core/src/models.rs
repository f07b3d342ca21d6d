//! Exact finite-dimensional CP-side geometries and validated synthetic
//! non-CP components.
//!
//! Three concrete CP models are exposed: scalar maps λ ↦ cλ with the Bures
//! distance |√c₁ − √c₂|, the depolarizing ray with the same square-root
//! coordinate, and CP functionals on ℂⁿ with the Hellinger distance. The
//! non-CP side is always synthetic: a user-supplied post-snowflake metric
//! validated against the cb-norm radius bound when norms are given.

use crate::metric::{
    lp_combine, BkParams, FiniteMetric, MetricError, PointedFiniteMetric, METRIC_EPS,
};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("coordinate {index} is negative: {value}")]
    NegativeCoordinate { index: usize, value: f64 },
    #[error("negative input: {0}")]
    NegativeInput(f64),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("cb-norm list has length {got}, expected {expected}")]
    CbNormCount { got: usize, expected: usize },
    #[error(
        "radius bound violated for point {index}: r = {radius} exceeds λ·‖φ‖_cb^(α/2) = {bound}"
    )]
    RadiusBound {
        index: usize,
        radius: f64,
        bound: f64,
    },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// A CP functional on ℂⁿ, identified with a point of the nonnegative
/// orthant.
#[derive(Debug, Clone, PartialEq)]
pub struct HellingerPoint {
    coords: Vec<f64>,
}

impl HellingerPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self, ModelError> {
        for (index, &value) in coords.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(ModelError::NegativeCoordinate { index, value });
            }
        }
        Ok(HellingerPoint { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Coordinatewise square root, the isometric coordinate in which the
    /// Hellinger distance becomes Euclidean.
    pub fn sqrt_coords(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.sqrt()).collect()
    }
}

/// A point c·Θ on the depolarizing ray; the coordinate c ↦ √c is an
/// isometry onto [0, ∞).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayPoint {
    pub c: f64,
}

impl RayPoint {
    pub fn new(c: f64) -> Result<Self, ModelError> {
        if !c.is_finite() || c < 0.0 {
            return Err(ModelError::NegativeInput(c));
        }
        Ok(RayPoint { c })
    }

    pub fn sqrt_coord(&self) -> f64 {
        self.c.sqrt()
    }
}

/// Multiplication by a complex scalar, the one-dimensional completely
/// bounded model. CP detection is exact on the stored representation:
/// the CP/non-CP split is a hard combinatorial tag, not an epsilon test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarCb {
    pub re: f64,
    pub im: f64,
}

impl ScalarCb {
    pub fn new(re: f64, im: f64) -> Self {
        ScalarCb { re, im }
    }

    pub fn cb_norm(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn is_cp(&self) -> bool {
        self.im == 0.0 && self.re >= 0.0
    }
}

/// Bures distance between the scalar CP maps λ ↦ c₁λ and λ ↦ c₂λ.
pub fn bures_scalar(c1: f64, c2: f64) -> Result<f64, ModelError> {
    if !c1.is_finite() || c1 < 0.0 {
        return Err(ModelError::NegativeInput(c1));
    }
    if !c2.is_finite() || c2 < 0.0 {
        return Err(ModelError::NegativeInput(c2));
    }
    Ok((c1.sqrt() - c2.sqrt()).abs())
}

/// Bures distance between c·Θ and d·Θ on the depolarizing ray.
///
/// Same closed form as [`bures_scalar`]; kept distinct because the two
/// models have different provenance and the ray is dimension-free.
pub fn bures_ray(c: f64, d: f64) -> Result<f64, ModelError> {
    bures_scalar(c, d)
}

/// Hellinger distance: Euclidean norm of the coordinatewise square-root
/// difference.
pub fn hellinger(z: &HellingerPoint, w: &HellingerPoint) -> Result<f64, ModelError> {
    if z.dim() != w.dim() {
        return Err(ModelError::DimensionMismatch {
            left: z.dim(),
            right: w.dim(),
        });
    }
    let sum: f64 = z
        .coords
        .iter()
        .zip(&w.coords)
        .map(|(a, b)| {
            let d = a.sqrt() - b.sqrt();
            d * d
        })
        .sum();
    Ok(sum.sqrt())
}

/// Check the two-sided comparison between a Bures value and cb-norm data:
/// cbDiff/(√cbA + √cbB) ≤ β ≤ √cbDiff, to additive tolerance 1e-12.
/// The lower bound is skipped when both norms vanish.
pub fn ksw_check(beta_val: f64, cb_diff: f64, cb_a: f64, cb_b: f64) -> bool {
    if beta_val < 0.0 || cb_diff < 0.0 || cb_a < 0.0 || cb_b < 0.0 {
        return false;
    }
    let upper_ok = beta_val <= cb_diff.sqrt() + METRIC_EPS;
    let denom = cb_a.sqrt() + cb_b.sqrt();
    let lower_ok = if denom == 0.0 {
        true
    } else {
        cb_diff / denom <= beta_val + METRIC_EPS
    };
    lower_ok && upper_ok
}

/// The Hellinger metric on a finite sample of orthant points, validated.
pub fn hellinger_metric(
    points: &[HellingerPoint],
    labels: Option<Vec<String>>,
) -> Result<FiniteMetric, ModelError> {
    let mut table = vec![vec![0.0; points.len()]; points.len()];
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d = hellinger(&points[i], &points[j])?;
            table[i][j] = d;
            table[j][i] = d;
        }
    }
    Ok(FiniteMetric::new(table, labels)?)
}

/// The Bures metric on a finite sample of ray points, validated.
pub fn ray_metric(
    points: &[RayPoint],
    labels: Option<Vec<String>>,
) -> Result<FiniteMetric, ModelError> {
    let mut table = vec![vec![0.0; points.len()]; points.len()];
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d = bures_ray(points[i].c, points[j].c)?;
            table[i][j] = d;
            table[j][i] = d;
        }
    }
    Ok(FiniteMetric::new(table, labels)?)
}

/// A synthetic non-CP component: a pointed post-snowflake metric plus
/// optional per-point cb-norms used to validate the radius bound
/// r_Y(y) ≤ λ·‖y‖_cb^(α/2).
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticYSpace {
    pub pointed: PointedFiniteMetric,
    pub cb_norms: Option<Vec<f64>>,
}

impl SyntheticYSpace {
    /// Validate against parameters; rejects any radius exceeding the
    /// cb-norm bound when norms are supplied. `cb_norms[k]` refers to the
    /// k-th non-basepoint point in index order.
    pub fn validate(&self, params: &BkParams) -> Result<(), ModelError> {
        let Some(norms) = &self.cb_norms else {
            return Ok(());
        };
        let non_base: Vec<usize> = (0..self.pointed.len())
            .filter(|&j| j != self.pointed.basepoint)
            .collect();
        if norms.len() != non_base.len() {
            return Err(ModelError::CbNormCount {
                got: norms.len(),
                expected: non_base.len(),
            });
        }
        for (k, &j) in non_base.iter().enumerate() {
            let radius = self.pointed.radius(j);
            let bound = params.lambda * norms[k].powf(params.alpha / 2.0);
            if radius > bound + METRIC_EPS {
                return Err(ModelError::RadiusBound {
                    index: j,
                    radius,
                    bound,
                });
            }
        }
        Ok(())
    }
}

/// Maximal synthetic radius permitted by the cb-norm bound, λ·‖φ‖_cb^(α/2).
pub fn max_synthetic_radius(cb_norm: f64, params: &BkParams) -> f64 {
    params.lambda * cb_norm.powf(params.alpha / 2.0)
}

/// One step of the shrinking-sequence scenario.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CounterexampleRow {
    /// Sequence index n.
    pub n: u32,
    /// cb-norm of ψ_n = (i/n): 1/n.
    pub cb_norm: f64,
    /// Synthetic radius r_Y(ψ_n) = λ·(n^{-1/2})^α.
    pub radius: f64,
    /// d_θ(θ, ψ_n): tends to 0 as n grows.
    pub dist_anchor_to_psi: f64,
    /// d_θ(φ, ψ_n) for the reference CP map φ with β(φ, θ) = 1.
    pub dist_phi_to_psi: f64,
    /// cb-distance ‖(φ + i/n) − φ‖_cb = 1/n of the cb-approaching sequence.
    pub cb_dist_to_phi: f64,
    /// Wedge distance d_θ(φ, φ + i/n): stays ≥ β(φ, θ).
    pub bk_dist_to_phi: f64,
    /// d_{θ'}(θ, ψ_n) − d_θ(θ, ψ_n) for the second anchor θ' = φ:
    /// tends to β(θ, θ').
    pub anchor_gap: f64,
}

/// Report of the scalar-model demonstration that cb-convergence and
/// wedge-convergence disagree and that the anchor map is isometric in the
/// uniform sense.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScalarCounterexampleReport {
    pub anchor_c: f64,
    /// Reference CP scalar φ chosen at Bures distance exactly 1 from the
    /// anchor.
    pub phi_c: f64,
    pub beta_anchor_phi: f64,
    pub rows: Vec<CounterexampleRow>,
    /// d_θ(θ, ψ_n) is nonincreasing and ends ≤ λ·n_max^{-α/2}.
    pub anchor_distance_vanishes: bool,
    /// min_n d_θ(φ, ψ_n) ≥ β(φ, θ).
    pub phi_distance_bounded_below: bool,
    /// cb distance tends to 0 while the wedge distance stays ≥ β(φ, θ).
    pub topology_gap: bool,
    /// The anchor gap approaches β(θ, θ') from below.
    pub anchor_gap_limit: f64,
}

/// Build the shrinking scalar sequence ψ_n = (i/n) with the maximal
/// synthetic radii permitted by the cb-norm bound and evaluate the three
/// qualitative claims it witnesses.
pub fn scalar_counterexample_scenario(
    anchor_c: f64,
    n_max: u32,
    params: &BkParams,
) -> Result<ScalarCounterexampleReport, ModelError> {
    if !anchor_c.is_finite() || anchor_c < 0.0 {
        return Err(ModelError::NegativeInput(anchor_c));
    }
    let n_max = n_max.max(1);
    // φ at Bures distance exactly 1 from the anchor: √φ = √θ + 1.
    let phi_c = (anchor_c.sqrt() + 1.0).powi(2);
    let beta = bures_scalar(anchor_c, phi_c)?;
    let p = params.p;

    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let cb_norm = 1.0 / f64::from(n);
        let radius = max_synthetic_radius(cb_norm, params);
        let psi_near_phi = ScalarCb::new(phi_c, cb_norm);
        let near_radius = max_synthetic_radius(psi_near_phi.cb_norm(), params);
        rows.push(CounterexampleRow {
            n,
            cb_norm,
            radius,
            dist_anchor_to_psi: lp_combine(0.0, radius, p),
            dist_phi_to_psi: lp_combine(beta, radius, p),
            cb_dist_to_phi: cb_norm,
            bk_dist_to_phi: lp_combine(beta, near_radius, p),
            anchor_gap: lp_combine(beta, radius, p) - radius,
        });
    }

    let anchor_distance_vanishes = rows
        .windows(2)
        .all(|w| w[1].dist_anchor_to_psi <= w[0].dist_anchor_to_psi + METRIC_EPS)
        && rows.last().is_none_or(|r| {
            r.dist_anchor_to_psi
                <= params.lambda * f64::from(n_max).powf(-params.alpha / 2.0) + METRIC_EPS
        });
    let phi_distance_bounded_below = rows
        .iter()
        .all(|r| r.dist_phi_to_psi >= beta - METRIC_EPS);
    let topology_gap = rows.last().is_some_and(|last| {
        last.cb_dist_to_phi < 0.05 && rows.iter().all(|r| r.bk_dist_to_phi >= beta - METRIC_EPS)
    });
    let anchor_gap_limit = rows.last().map_or(0.0, |r| r.anchor_gap);

    Ok(ScalarCounterexampleReport {
        anchor_c,
        phi_c,
        beta_anchor_phi: beta,
        rows,
        anchor_distance_vanishes,
        phi_distance_bounded_below,
        topology_gap,
        anchor_gap_limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bures_scalar_values() {
        assert_eq!(bures_scalar(0.0, 1.0).unwrap(), 1.0);
        assert_eq!(bures_scalar(3.0, 3.0).unwrap(), 0.0);
        assert_eq!(bures_scalar(0.0, 4.0).unwrap(), 2.0);
        assert!(bures_scalar(-1.0, 0.0).is_err());
    }

    #[test]
    fn bures_ray_values() {
        assert_eq!(bures_ray(1.0, 4.0).unwrap(), 1.0);
        assert_eq!(bures_ray(0.0, 0.0).unwrap(), 0.0);
        assert!((bures_ray(2.0, 8.0).unwrap() - 2f64.sqrt()).abs() <= METRIC_EPS);
    }

    #[test]
    fn hellinger_values() {
        let z1 = HellingerPoint::new(vec![1.0, 0.0]).unwrap();
        let z2 = HellingerPoint::new(vec![0.0, 1.0]).unwrap();
        let z3 = HellingerPoint::new(vec![1.0, 1.0]).unwrap();
        assert!((hellinger(&z1, &z2).unwrap() - 2f64.sqrt()).abs() <= METRIC_EPS);
        assert!((hellinger(&z1, &z3).unwrap() - 1.0).abs() <= METRIC_EPS);
        assert_eq!(hellinger(&z3, &z3).unwrap(), 0.0);
        let short = HellingerPoint::new(vec![1.0]).unwrap();
        assert!(hellinger(&z1, &short).is_err());
    }

    #[test]
    fn hellinger_dimension_one_is_bures_scalar() {
        for &(c, d) in &[(0.0, 1.0), (2.0, 8.0), (0.3, 0.3), (5.0, 0.1)] {
            let h = hellinger(
                &HellingerPoint::new(vec![c]).unwrap(),
                &HellingerPoint::new(vec![d]).unwrap(),
            )
            .unwrap();
            assert!((h - bures_scalar(c, d).unwrap()).abs() <= METRIC_EPS);
        }
    }

    #[test]
    fn ksw_scalar_model_equality() {
        // On the scalar model the lower bound holds with equality:
        // |c-d|/(√c+√d) = |√c-√d|.
        for i in 0..20 {
            for j in 0..20 {
                let c = i as f64 * 0.25;
                let d = j as f64 * 0.25;
                let beta = bures_scalar(c, d).unwrap();
                assert!(ksw_check(beta, (c - d).abs(), c, d), "c={c} d={d}");
                let denom = c.sqrt() + d.sqrt();
                if denom > 0.0 {
                    assert!(((c - d).abs() / denom - beta).abs() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn ksw_degenerate_and_ray_case() {
        assert!(ksw_check(0.0, 0.0, 0.0, 0.0));
        // ray points at c = 1 and c = 4: 3/(1+2) = 1 ≤ 1 ≤ √3
        assert!(ksw_check(1.0, 3.0, 1.0, 4.0));
        // a value above the upper bound must fail
        assert!(!ksw_check(2.0, 3.0, 1.0, 4.0));
    }

    #[test]
    fn synthetic_space_rejects_oversized_radius() {
        let params = BkParams::max_glue();
        let metric = FiniteMetric::new(vec![vec![0.0, 0.8], vec![0.8, 0.0]], None).unwrap();
        let pointed = PointedFiniteMetric::new(metric, 0).unwrap();
        let space = SyntheticYSpace {
            pointed: pointed.clone(),
            cb_norms: Some(vec![1.0]),
        };
        assert!(space.validate(&params).is_ok());
        let too_small_norm = SyntheticYSpace {
            pointed,
            cb_norms: Some(vec![0.25]),
        };
        // bound = λ·0.25^{1/2} = 0.5 < 0.8
        assert!(matches!(
            too_small_norm.validate(&params),
            Err(ModelError::RadiusBound { .. })
        ));
    }

    #[test]
    fn counterexample_scenario_values() {
        let params = BkParams::max_glue();
        let report = scalar_counterexample_scenario(1.0, 100, &params).unwrap();
        assert_eq!(report.phi_c, 4.0);
        assert_eq!(report.beta_anchor_phi, 1.0);
        let last = report.rows.last().unwrap();
        // d_θ(φ, ψ_100) = max(1, 0.1) = 1 while the cb distance is 0.01.
        assert!((last.dist_phi_to_psi - 1.0).abs() <= METRIC_EPS);
        assert!((last.cb_dist_to_phi - 0.01).abs() <= METRIC_EPS);
        assert!((last.dist_anchor_to_psi - 0.1).abs() <= METRIC_EPS);
        assert!(report.anchor_distance_vanishes);
        assert!(report.phi_distance_bounded_below);
        assert!(report.topology_gap);
        // gap = max(1, 0.1) - 0.1 = 0.9 approaching β = 1 from below
        assert!((report.anchor_gap_limit - 0.9).abs() <= METRIC_EPS);
    }

    #[test]
    fn scalar_cb_tags() {
        assert!(ScalarCb::new(2.0, 0.0).is_cp());
        assert!(!ScalarCb::new(-1.0, 0.0).is_cp());
        assert!(!ScalarCb::new(0.0, 1e-300).is_cp());
        assert_eq!(ScalarCb::new(3.0, 4.0).cb_norm(), 5.0);
    }
}
