//! Pointed finite metric spaces, the ℓp combination rule, the ℓp-wedge
//! gluing, and the four-case distance formula for mixed clouds.
//!
//! A [`WedgeCloud`] holds two pointed finite metric spaces — a CP side whose
//! basepoint is the anchor θ, and a Y side whose basepoint ∗ stands for the
//! collapsed non-CP sector — and derives every cross distance from the two
//! radial functions via the ℓp norm on ℝ². Building the merged distance
//! table re-validates every metric axiom, so the gluing construction is
//! checked on every input rather than assumed.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Additive tolerance for metric-axiom checks and closed-ball threshold
/// comparisons (`d <= t + METRIC_EPS`).
pub const METRIC_EPS: f64 = 1e-12;

/// Errors from metric validation and wedge-cloud construction.
#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("distance table is not square: row {row} has length {len}, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("entry ({i},{j}) is not a finite nonnegative number: {value}")]
    NotFinite { i: usize, j: usize, value: f64 },
    #[error("diagonal entry ({i},{i}) must be 0, found {value}")]
    DiagonalNonzero { i: usize, value: f64 },
    #[error("table is asymmetric at ({i},{j}): {dij} vs {dji}")]
    Asymmetric { i: usize, j: usize, dij: f64, dji: f64 },
    #[error("separation fails at ({i},{j}): distance {value} is not positive")]
    NotSeparated { i: usize, j: usize, value: f64 },
    #[error("triangle inequality fails for ({i},{j},{k}): d({i},{k}) = {lhs} > {rhs} = d({i},{j}) + d({j},{k})")]
    Triangle {
        i: usize,
        j: usize,
        k: usize,
        lhs: f64,
        rhs: f64,
    },
    #[error("label count {labels} does not match point count {n}")]
    LabelMismatch { labels: usize, n: usize },
    #[error("basepoint index {basepoint} out of range for {n} points")]
    BasepointOutOfRange { basepoint: usize, n: usize },
    #[error("lp exponent must satisfy p >= 1, got {0}")]
    BadExponent(f64),
    #[error("scale lambda must be a positive finite number, got {0}")]
    BadLambda(f64),
    #[error("snowflake exponent alpha must lie in (0, 1], got {0}")]
    BadAlpha(f64),
    #[error("clouds are not comparable: {0}")]
    MismatchedClouds(String),
    #[error("uniform anchor distance {distance} exceeds the Lipschitz bound {bound}")]
    AnchorBoundViolated { distance: f64, bound: f64 },
    #[error("attachment audit failed: lower {lower}, upper {upper}, cap {cap}")]
    AttachmentViolated { lower: f64, upper: f64, cap: f64 },
}

/// The exponent of the ℓp combination rule; `Infinity` is a distinct
/// symbolic case, never approximated by a large finite p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LpExponent {
    Finite(f64),
    Infinity,
}

impl LpExponent {
    /// A finite exponent, validated against p >= 1.
    pub fn finite(p: f64) -> Result<Self, MetricError> {
        if !p.is_finite() || p < 1.0 {
            return Err(MetricError::BadExponent(p));
        }
        Ok(LpExponent::Finite(p))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, LpExponent::Infinity)
    }
}

impl std::fmt::Display for LpExponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LpExponent::Finite(p) => write!(f, "{p}"),
            LpExponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for LpExponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            LpExponent::Finite(p) => s.serialize_f64(*p),
            LpExponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for LpExponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(p) => LpExponent::finite(p).map_err(serde::de::Error::custom),
            Raw::Text(s) if s == "inf" => Ok(LpExponent::Infinity),
            Raw::Text(s) => Err(serde::de::Error::custom(format!(
                "p must be a number >= 1 or the string \"inf\", got {s:?}"
            ))),
        }
    }
}

/// Combine two nonnegative coordinates with the ℓp norm on ℝ².
///
/// Monotone nondecreasing in each argument; always within
/// `[max(a, b), a + b]`.
pub fn lp_combine(a: f64, b: f64, p: LpExponent) -> f64 {
    debug_assert!(a >= 0.0 && b >= 0.0);
    match p {
        LpExponent::Infinity => a.max(b),
        LpExponent::Finite(_) if a == 0.0 => b,
        LpExponent::Finite(_) if b == 0.0 => a,
        LpExponent::Finite(1.0) => a + b,
        LpExponent::Finite(2.0) => a.hypot(b),
        LpExponent::Finite(p) => (a.powf(p) + b.powf(p)).powf(1.0 / p),
    }
}

/// Parameters of a wedge metric: scale λ > 0, snowflake exponent
/// α ∈ (0, 1], and the ℓp combination exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BkParams {
    pub lambda: f64,
    pub alpha: f64,
    pub p: LpExponent,
}

impl BkParams {
    pub fn new(lambda: f64, alpha: f64, p: LpExponent) -> Result<Self, MetricError> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(MetricError::BadLambda(lambda));
        }
        if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
            return Err(MetricError::BadAlpha(alpha));
        }
        Ok(BkParams { lambda, alpha, p })
    }

    /// Max-glue parameters with λ = α = 1.
    pub fn max_glue() -> Self {
        BkParams {
            lambda: 1.0,
            alpha: 1.0,
            p: LpExponent::Infinity,
        }
    }
}

/// A finite point set with a validated distance table.
///
/// Construction checks symmetry, zero diagonal, separation, and the
/// triangle inequality (to additive tolerance [`METRIC_EPS`]), so a value
/// of this type is always a genuine finite metric space.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetric {
    n: usize,
    dist: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl FiniteMetric {
    pub fn new(table: Vec<Vec<f64>>, labels: Option<Vec<String>>) -> Result<Self, MetricError> {
        let n = table.len();
        let mut dist = Vec::with_capacity(n * n);
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(MetricError::NotSquare {
                    row,
                    len: r.len(),
                    n,
                });
            }
            dist.extend_from_slice(r);
        }
        let m = FiniteMetric { n, dist, labels };
        m.validate()?;
        Ok(m)
    }

    /// Build an n-point metric from a distance function, then validate.
    pub fn from_fn(
        n: usize,
        labels: Option<Vec<String>>,
        mut d: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self, MetricError> {
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = d(i, j);
                dist[i * n + j] = v;
                dist[j * n + i] = v;
            }
        }
        let m = FiniteMetric { n, dist, labels };
        m.validate()?;
        Ok(m)
    }

    /// The one-point space.
    pub fn singleton(label: Option<String>) -> Self {
        FiniteMetric {
            n: 1,
            dist: vec![0.0],
            labels: label.map(|l| vec![l]),
        }
    }

    fn validate(&self) -> Result<(), MetricError> {
        let n = self.n;
        if let Some(labels) = &self.labels {
            if labels.len() != n {
                return Err(MetricError::LabelMismatch {
                    labels: labels.len(),
                    n,
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let v = self.get(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(MetricError::NotFinite { i, j, value: v });
                }
            }
        }
        for i in 0..n {
            let v = self.get(i, i);
            if v != 0.0 {
                return Err(MetricError::DiagonalNonzero { i, value: v });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let dij = self.get(i, j);
                let dji = self.get(j, i);
                if (dij - dji).abs() > METRIC_EPS {
                    return Err(MetricError::Asymmetric { i, j, dij, dji });
                }
                if dij <= 0.0 {
                    return Err(MetricError::NotSeparated { i, j, value: dij });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if j == i {
                    continue;
                }
                let dij = self.get(i, j);
                for k in 0..n {
                    let lhs = self.get(i, k);
                    let rhs = dij + self.get(j, k);
                    if lhs > rhs + METRIC_EPS {
                        return Err(MetricError::Triangle { i, j, k, lhs, rhs });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[i].as_str())
    }

    /// Rows of the table, for emission.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.dist[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    /// Largest pairwise distance (0 for spaces with fewer than two points).
    pub fn diameter(&self) -> f64 {
        self.dist.iter().cloned().fold(0.0, f64::max)
    }

    /// Entrywise λ·d^α. Defined for λ > 0 and α ∈ (0, 1], where the map
    /// t ↦ t^α is subadditive, so the result is revalidated as a metric.
    pub fn snowflake(&self, lambda: f64, alpha: f64) -> Result<FiniteMetric, MetricError> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(MetricError::BadLambda(lambda));
        }
        if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
            return Err(MetricError::BadAlpha(alpha));
        }
        let dist: Vec<f64> = self
            .dist
            .iter()
            .map(|&d| {
                if alpha == 1.0 {
                    lambda * d
                } else {
                    lambda * d.powf(alpha)
                }
            })
            .collect();
        let m = FiniteMetric {
            n: self.n,
            dist,
            labels: self.labels.clone(),
        };
        m.validate()?;
        Ok(m)
    }

    /// Entrywise positive rescale (a trivial snowflake with α = 1).
    pub fn scale(&self, factor: f64) -> Result<FiniteMetric, MetricError> {
        self.snowflake(factor, 1.0)
    }
}

/// Entrywise λ·d^α as a free function.
pub fn snowflake(d: &FiniteMetric, lambda: f64, alpha: f64) -> Result<FiniteMetric, MetricError> {
    d.snowflake(lambda, alpha)
}

/// A finite metric space with a distinguished basepoint.
#[derive(Debug, Clone, PartialEq)]
pub struct PointedFiniteMetric {
    pub metric: FiniteMetric,
    pub basepoint: usize,
}

impl PointedFiniteMetric {
    pub fn new(metric: FiniteMetric, basepoint: usize) -> Result<Self, MetricError> {
        if basepoint >= metric.len() {
            return Err(MetricError::BasepointOutOfRange {
                basepoint,
                n: metric.len(),
            });
        }
        Ok(PointedFiniteMetric { metric, basepoint })
    }

    /// Distance of point `i` to the basepoint (the radial function).
    pub fn radius(&self, i: usize) -> f64 {
        self.metric.get(i, self.basepoint)
    }

    pub fn len(&self) -> usize {
        self.metric.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metric.is_empty()
    }
}

/// Which component of the wedge a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    C,
    Y,
}

/// A point of the wedge, addressed by side and side-local index.
///
/// Each side's basepoint denotes the same glued point; [`WedgeCloud::same_point`]
/// and [`WedgeCloud::wedge_distance`] treat them as identified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WedgePoint {
    pub side: Side,
    pub index: usize,
}

impl WedgePoint {
    pub fn c(index: usize) -> Self {
        WedgePoint {
            side: Side::C,
            index,
        }
    }

    pub fn y(index: usize) -> Self {
        WedgePoint {
            side: Side::Y,
            index,
        }
    }
}

/// A mixed cloud of CP-side and Y-side points glued at anchor/basepoint.
///
/// The Y-side table is stored post-snowflake: its entries already equal
/// λ·δ^α, so they are the operative distances. `include_basepoint` decides
/// whether the glued point counts as a cloud vertex for complex
/// construction; either way it exists as a point of the wedge.
#[derive(Debug, Clone, PartialEq)]
pub struct WedgeCloud {
    c_side: PointedFiniteMetric,
    y_side: PointedFiniteMetric,
    params: BkParams,
    include_basepoint: bool,
}

impl WedgeCloud {
    pub fn new(
        c_side: PointedFiniteMetric,
        y_side: PointedFiniteMetric,
        params: BkParams,
        include_basepoint: bool,
    ) -> Result<Self, MetricError> {
        // FiniteMetric separation already forces every non-basepoint radius
        // positive on both sides; nothing further to check here.
        Ok(WedgeCloud {
            c_side,
            y_side,
            params,
            include_basepoint,
        })
    }

    /// A cloud with no Y points besides the basepoint ∗.
    pub fn pure_c(
        c_side: PointedFiniteMetric,
        params: BkParams,
        include_basepoint: bool,
    ) -> Result<Self, MetricError> {
        let y = PointedFiniteMetric::new(FiniteMetric::singleton(Some("*".into())), 0)?;
        WedgeCloud::new(c_side, y, params, include_basepoint)
    }

    pub fn c_side(&self) -> &PointedFiniteMetric {
        &self.c_side
    }

    pub fn y_side(&self) -> &PointedFiniteMetric {
        &self.y_side
    }

    pub fn params(&self) -> &BkParams {
        &self.params
    }

    pub fn include_basepoint(&self) -> bool {
        self.include_basepoint
    }

    pub fn anchor(&self) -> usize {
        self.c_side.basepoint
    }

    /// Distance to the anchor on the C side.
    pub fn r_c(&self, i: usize) -> f64 {
        self.c_side.radius(i)
    }

    /// Distance to ∗ on the Y side.
    pub fn r_y(&self, j: usize) -> f64 {
        self.y_side.radius(j)
    }

    /// Whether two wedge points denote the same glued point.
    pub fn same_point(&self, a: WedgePoint, b: WedgePoint) -> bool {
        let canon = |p: WedgePoint| {
            if p.side == Side::Y && p.index == self.y_side.basepoint {
                WedgePoint::c(self.c_side.basepoint)
            } else {
                p
            }
        };
        canon(a) == canon(b)
    }

    /// The four-case wedge distance: component distance on a side, ℓp
    /// combination of the two radial values across sides.
    pub fn wedge_distance(&self, a: WedgePoint, b: WedgePoint) -> f64 {
        match (a.side, b.side) {
            (Side::C, Side::C) => self.c_side.metric.get(a.index, b.index),
            (Side::Y, Side::Y) => self.y_side.metric.get(a.index, b.index),
            (Side::C, Side::Y) => lp_combine(self.r_c(a.index), self.r_y(b.index), self.params.p),
            (Side::Y, Side::C) => lp_combine(self.r_c(b.index), self.r_y(a.index), self.params.p),
        }
    }

    /// Cloud vertices in canonical order: the C side in input order (with
    /// the anchor kept in place only when `include_basepoint` is set),
    /// then the Y side in input order without ∗.
    pub fn vertices(&self) -> Vec<WedgePoint> {
        let mut out = Vec::new();
        for i in 0..self.c_side.len() {
            if i == self.c_side.basepoint && !self.include_basepoint {
                continue;
            }
            out.push(WedgePoint::c(i));
        }
        for j in 0..self.y_side.len() {
            if j == self.y_side.basepoint {
                continue;
            }
            out.push(WedgePoint::y(j));
        }
        out
    }

    /// Display label for a wedge point.
    pub fn point_label(&self, p: WedgePoint) -> String {
        let side = match p.side {
            Side::C => &self.c_side,
            Side::Y => &self.y_side,
        };
        match side.metric.label(p.index) {
            Some(l) => l.to_string(),
            None => match p.side {
                Side::C => format!("c{}", p.index),
                Side::Y => format!("y{}", p.index),
            },
        }
    }

    /// The complete distance table over the cloud vertices, with the two
    /// basepoints merged into one glued point. Validation of the result is
    /// the executable form of the wedge-metric claim: it must always pass
    /// for valid component metrics.
    pub fn full_distance_table(&self) -> Result<FiniteMetric, MetricError> {
        let verts = self.vertices();
        let labels = verts.iter().map(|&v| self.point_label(v)).collect();
        FiniteMetric::from_fn(verts.len(), Some(labels), |i, j| {
            self.wedge_distance(verts[i], verts[j])
        })
    }

    /// All points of the underlying wedge (both sides, ∗ identified with
    /// the anchor), independent of `include_basepoint`.
    pub fn all_points(&self) -> Vec<WedgePoint> {
        let mut out: Vec<WedgePoint> = (0..self.c_side.len()).map(WedgePoint::c).collect();
        out.extend(
            (0..self.y_side.len())
                .filter(|&j| j != self.y_side.basepoint)
                .map(WedgePoint::y),
        );
        out
    }

    /// The same cloud re-equipped with a different exponent and scale.
    /// The stored Y-side distances are rescaled by the ratio of scales.
    pub fn with_params(&self, p: LpExponent, lambda: f64) -> Result<WedgeCloud, MetricError> {
        let params = BkParams::new(lambda, self.params.alpha, p)?;
        let y_metric = self.y_side.metric.scale(lambda / self.params.lambda)?;
        Ok(WedgeCloud {
            c_side: self.c_side.clone(),
            y_side: PointedFiniteMetric::new(y_metric, self.y_side.basepoint)?,
            params,
            include_basepoint: self.include_basepoint,
        })
    }

    /// The same cloud with a different anchor vertex on the C side.
    pub fn with_anchor(&self, anchor: usize) -> Result<WedgeCloud, MetricError> {
        Ok(WedgeCloud {
            c_side: PointedFiniteMetric::new(self.c_side.metric.clone(), anchor)?,
            y_side: self.y_side.clone(),
            params: self.params,
            include_basepoint: self.include_basepoint,
        })
    }
}

fn require_comparable(a: &WedgeCloud, b: &WedgeCloud) -> Result<(), MetricError> {
    if a.c_side.metric != b.c_side.metric {
        return Err(MetricError::MismatchedClouds(
            "C-side metrics differ".into(),
        ));
    }
    if a.y_side != b.y_side {
        return Err(MetricError::MismatchedClouds(
            "Y-side components differ".into(),
        ));
    }
    if a.params != b.params {
        return Err(MetricError::MismatchedClouds("parameters differ".into()));
    }
    Ok(())
}

/// Uniform distance between the wedge metrics of two clouds that differ
/// only in the anchor vertex, taken over all pairs of underlying points.
/// Guaranteed not to exceed the Bures distance between the two anchors;
/// a violation is reported as an error rather than returned.
pub fn anchor_uniform_distance(a: &WedgeCloud, b: &WedgeCloud) -> Result<f64, MetricError> {
    let (distortion, bound) = gh_distortion_bound(a, b)?;
    let _ = bound;
    Ok(distortion)
}

/// Distortion of the diagonal correspondence between the two wedge metrics,
/// together with the bound β(θ₁, θ₂) it must satisfy. The Gromov–Hausdorff
/// distance of the two clouds is at most half the returned bound.
pub fn gh_distortion_bound(a: &WedgeCloud, b: &WedgeCloud) -> Result<(f64, f64), MetricError> {
    require_comparable(a, b)?;
    let bound = a.c_side.metric.get(a.anchor(), b.anchor());
    let points = a.all_points();
    let mut distortion = 0.0f64;
    for (idx, &x) in points.iter().enumerate() {
        for &y in &points[idx..] {
            let da = a.wedge_distance(x, y);
            let db = b.wedge_distance(x, y);
            distortion = distortion.max((da - db).abs());
        }
    }
    if distortion > bound + METRIC_EPS {
        return Err(MetricError::AnchorBoundViolated {
            distance: distortion,
            bound,
        });
    }
    Ok((distortion, bound))
}

/// Two-dimensional ℓp/ℓq norm-equivalence constant, 2^|1/p − 1/q|.
pub fn norm_equivalence_constant(p: LpExponent, q: LpExponent) -> f64 {
    let inv = |e: LpExponent| match e {
        LpExponent::Finite(v) => 1.0 / v,
        LpExponent::Infinity => 0.0,
    };
    2.0f64.powf((inv(p) - inv(q)).abs())
}

/// Check the bi-Lipschitz comparison between the (p, λa) and (q, λb)
/// wedge metrics of one cloud on every pair of points:
/// C⁻¹·min(1, λb/λa)·d₁ ≤ d₂ ≤ C·max(1, λb/λa)·d₁ with C = 2^|1/p − 1/q|.
pub fn bilipschitz_check(
    cloud: &WedgeCloud,
    p: LpExponent,
    q: LpExponent,
    lambda_a: f64,
    lambda_b: f64,
) -> Result<bool, MetricError> {
    let da = cloud.with_params(p, lambda_a)?;
    let db = cloud.with_params(q, lambda_b)?;
    let c = norm_equivalence_constant(p, q);
    let ratio = lambda_b / lambda_a;
    let lo = ratio.min(1.0) / c;
    let hi = ratio.max(1.0) * c;
    let points = cloud.all_points();
    for (idx, &x) in points.iter().enumerate() {
        for &y in &points[idx + 1..] {
            let d1 = da.wedge_distance(x, y);
            let d2 = db.wedge_distance(x, y);
            if d2 + METRIC_EPS < lo * d1 || d2 > hi * d1 + METRIC_EPS {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inf() -> LpExponent {
        LpExponent::Infinity
    }

    fn p(v: f64) -> LpExponent {
        LpExponent::finite(v).unwrap()
    }

    #[test]
    fn lp_combine_pythagorean() {
        assert_eq!(lp_combine(3.0, 4.0, p(2.0)), 5.0);
    }

    #[test]
    fn lp_combine_max_case() {
        assert_eq!(lp_combine(1.0, 0.7, inf()), 1.0);
    }

    #[test]
    fn lp_combine_exact_unit() {
        // 0.6^2 + 0.8^2 = 1 exactly
        assert!((lp_combine(0.6, 0.8, p(2.0)) - 1.0).abs() <= METRIC_EPS);
    }

    #[test]
    fn lp_combine_bounds() {
        for &(a, b) in &[(0.3, 1.7), (0.0, 2.0), (1.0, 1.0)] {
            for &e in &[p(1.0), p(1.5), p(2.0), p(7.0), inf()] {
                let v = lp_combine(a, b, e);
                assert!(v >= a.max(b) - METRIC_EPS);
                assert!(v <= a + b + METRIC_EPS);
            }
        }
    }

    #[test]
    fn snowflake_single_entry() {
        let m = FiniteMetric::new(vec![vec![0.0, 4.0], vec![4.0, 0.0]], None).unwrap();
        let s = m.snowflake(1.0, 0.5).unwrap();
        assert_eq!(s.get(0, 1), 2.0);
    }

    #[test]
    fn snowflake_identity() {
        let m = FiniteMetric::new(
            vec![
                vec![0.0, 1.0, 2.0],
                vec![1.0, 0.0, 1.0],
                vec![2.0, 1.0, 0.0],
            ],
            None,
        )
        .unwrap();
        assert_eq!(m.snowflake(1.0, 1.0).unwrap(), m);
    }

    #[test]
    fn snowflake_three_point() {
        let m = FiniteMetric::new(
            vec![
                vec![0.0, 1.0, 2.0],
                vec![1.0, 0.0, 1.0],
                vec![2.0, 1.0, 0.0],
            ],
            None,
        )
        .unwrap();
        let s = m.snowflake(2.0, 0.5).unwrap();
        assert!((s.get(0, 1) - 2.0).abs() <= METRIC_EPS);
        assert!((s.get(1, 2) - 2.0).abs() <= METRIC_EPS);
        assert!((s.get(0, 2) - 2.0 * 2f64.sqrt()).abs() <= METRIC_EPS);
    }

    #[test]
    fn triangle_violation_names_triple() {
        let err = FiniteMetric::new(
            vec![
                vec![0.0, 1.0, 5.0],
                vec![1.0, 0.0, 1.0],
                vec![5.0, 1.0, 0.0],
            ],
            None,
        )
        .unwrap_err();
        match err {
            MetricError::Triangle { lhs, .. } => assert_eq!(lhs, 5.0),
            other => panic!("expected triangle violation, got {other:?}"),
        }
    }

    fn go2_cloud(r_plus: f64, r_minus: f64, d: f64, include: bool) -> WedgeCloud {
        // C side: ray points 0, 1, 4 (Bures distances 1, 1, 2), anchor x1.
        let c = FiniteMetric::new(
            vec![
                vec![0.0, 1.0, 2.0],
                vec![1.0, 0.0, 1.0],
                vec![2.0, 1.0, 0.0],
            ],
            Some(vec!["x0".into(), "x1".into(), "x4".into()]),
        )
        .unwrap();
        let y = FiniteMetric::new(
            vec![
                vec![0.0, r_plus, r_minus],
                vec![r_plus, 0.0, d],
                vec![r_minus, d, 0.0],
            ],
            Some(vec!["*".into(), "y+".into(), "y-".into()]),
        )
        .unwrap();
        WedgeCloud::new(
            PointedFiniteMetric::new(c, 1).unwrap(),
            PointedFiniteMetric::new(y, 0).unwrap(),
            BkParams::max_glue(),
            include,
        )
        .unwrap()
    }

    #[test]
    fn wedge_distance_on_ray_cloud() {
        let cloud = go2_cloud(0.95, 0.95, 1.9, false);
        assert_eq!(
            cloud.wedge_distance(WedgePoint::c(0), WedgePoint::c(2)),
            2.0
        );
        // cross pair with r_C(x0) = 1 and r_Y = 0.9 under max glue
        assert_eq!(
            cloud.wedge_distance(WedgePoint::c(0), WedgePoint::y(1)),
            1.0
        );
        // the two basepoints are the same glued point
        assert_eq!(
            cloud.wedge_distance(WedgePoint::c(1), WedgePoint::y(0)),
            0.0
        );
        assert!(cloud.same_point(WedgePoint::c(1), WedgePoint::y(0)));
    }

    #[test]
    fn full_table_matches_mixed_cloud() {
        let cloud = go2_cloud(0.95, 0.95, 1.9, false);
        let table = cloud.full_distance_table().unwrap();
        let expected = [
            [0.0, 2.0, 1.0, 1.0],
            [2.0, 0.0, 1.0, 1.0],
            [1.0, 1.0, 0.0, 1.9],
            [1.0, 1.0, 1.9, 0.0],
        ];
        assert_eq!(table.len(), 4);
        for (i, row) in expected.iter().enumerate() {
            for (j, want) in row.iter().enumerate() {
                assert_eq!(table.get(i, j), *want, "entry ({i},{j})");
            }
        }
        assert_eq!(table.labels().unwrap(), ["x0", "x4", "y+", "y-"]);
    }

    #[test]
    fn wedge_of_singletons_is_a_point() {
        let c = PointedFiniteMetric::new(FiniteMetric::singleton(None), 0).unwrap();
        let y = PointedFiniteMetric::new(FiniteMetric::singleton(None), 0).unwrap();
        let cloud = WedgeCloud::new(c, y, BkParams::max_glue(), true).unwrap();
        let table = cloud.full_distance_table().unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table.get(0, 0), 0.0);
    }

    #[test]
    fn identical_anchors_have_zero_uniform_distance() {
        let cloud = go2_cloud(0.95, 0.95, 1.9, false);
        let d = anchor_uniform_distance(&cloud, &cloud).unwrap();
        assert_eq!(d, 0.0);
        let (dist, bound) = gh_distortion_bound(&cloud, &cloud).unwrap();
        assert_eq!((dist, bound), (0.0, 0.0));
    }

    #[test]
    fn anchor_shift_respects_lipschitz_bound() {
        let cloud = go2_cloud(0.95, 0.95, 1.9, false);
        let moved = cloud.with_anchor(0).unwrap();
        let (dist, bound) = gh_distortion_bound(&cloud, &moved).unwrap();
        assert_eq!(bound, 1.0);
        assert!(dist <= bound + METRIC_EPS);
    }

    #[test]
    fn bilipschitz_trivial_and_degenerate() {
        let cloud = go2_cloud(0.95, 0.95, 1.9, false);
        assert!(bilipschitz_check(&cloud, inf(), inf(), 1.0, 1.0).unwrap());
        assert!(bilipschitz_check(&cloud, p(1.0), inf(), 1.0, 1.0).unwrap());
        assert!(bilipschitz_check(&cloud, p(2.0), inf(), 1.0, 3.0).unwrap());
    }

    #[test]
    fn exponent_validation() {
        assert!(LpExponent::finite(0.5).is_err());
        assert!(LpExponent::finite(f64::NAN).is_err());
        assert!(LpExponent::finite(1.0).is_ok());
    }
}
