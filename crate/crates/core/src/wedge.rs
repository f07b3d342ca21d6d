//! Mixed Rips and Čech complexes on wedge clouds, built from radial data,
//! with brute-force equivalence audits.
//!
//! Mixed Rips simplices are governed by the two radial maxima: σ∪τ is a
//! simplex at scale t iff σ and τ are simplices of their side complexes and
//! ‖(max r_C, max r_Y)‖_p ≤ t. Mixed Čech simplices reduce to a
//! ball-intersection query inside one component against a sublevel ball
//! around the glued basepoint. The decomposition audit replays both
//! constructions against brute force on the merged distance table.

use crate::complex::{cech_intrinsic, rips, ComplexError, Simplex, SimplicialComplex};
use crate::metric::{
    lp_combine, FiniteMetric, LpExponent, MetricError, PointedFiniteMetric, Side, WedgeCloud,
    WedgePoint, METRIC_EPS,
};
use crate::witness::{
    BallIntersectionQuery, BallOracle, FiniteWitnessOracle, OracleError, OrthantOracle, RayOracle,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WedgeError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("empty {0}-side simplex in a mixed criterion")]
    EmptySide(&'static str),
    #[error("Y side has no points besides the basepoint")]
    EmptyYSide,
    #[error("scale grid is empty")]
    EmptyGrid,
    #[error("decomposition mismatch at t = {t}: simplex {simplex:?} {detail}")]
    Mismatch {
        t: f64,
        simplex: Vec<usize>,
        detail: String,
    },
    #[error("sandwich violation at t = {t}: {detail}")]
    SandwichViolation { t: f64, detail: String },
    #[error("cross-edge mismatch at t = {t} between vertices {x} and {y}")]
    CrossEdgeMismatch { t: f64, x: usize, y: usize },
    #[error("attachment audit failed: lower {lower}, upper {upper}, cap {cap}")]
    AttachmentViolated { lower: f64, upper: f64, cap: f64 },
}

/// Radial data of a cloud: distances to the anchor on the C side and to
/// the basepoint on the Y side, indexed side-locally.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub r_c: Vec<f64>,
    pub r_y: Vec<f64>,
}

impl RadialProfile {
    pub fn of(cloud: &WedgeCloud) -> Self {
        RadialProfile {
            r_c: (0..cloud.c_side().len()).map(|i| cloud.r_c(i)).collect(),
            r_y: (0..cloud.y_side().len()).map(|j| cloud.r_y(j)).collect(),
        }
    }
}

/// Which side produced the Čech witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessSide {
    C,
    Y,
    None,
}

/// Decision record for one mixed simplex query.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedSimplexCertificate {
    /// C-side vertices, side-local indices.
    pub sigma: Vec<usize>,
    /// Y-side vertices, side-local indices.
    pub tau: Vec<usize>,
    /// max r_C over sigma.
    pub a: f64,
    /// max r_Y over tau.
    pub b: f64,
    pub verdict: bool,
    pub witness_side: WitnessSide,
}

fn radial_max(values: &[f64], indices: &[usize]) -> f64 {
    indices
        .iter()
        .map(|&i| values[i])
        .fold(f64::NEG_INFINITY, f64::max)
}

fn is_side_rips_simplex(metric: &FiniteMetric, indices: &[usize], t: f64) -> bool {
    indices.iter().enumerate().all(|(k, &i)| {
        indices[k + 1..]
            .iter()
            .all(|&j| metric.get(i, j) <= t + METRIC_EPS)
    })
}

/// The mixed Rips criterion: σ∪τ spans a simplex at scale t iff σ is a
/// Rips simplex of the C side, τ of the Y side, and ‖(A, B)‖_p ≤ t for the
/// radial maxima A, B.
pub fn mixed_rips_criterion(
    cloud: &WedgeCloud,
    sigma: &[usize],
    tau: &[usize],
    t: f64,
) -> Result<MixedSimplexCertificate, WedgeError> {
    if sigma.is_empty() {
        return Err(WedgeError::EmptySide("C"));
    }
    if tau.is_empty() {
        return Err(WedgeError::EmptySide("Y"));
    }
    let profile = RadialProfile::of(cloud);
    let a = radial_max(&profile.r_c, sigma);
    let b = radial_max(&profile.r_y, tau);
    let verdict = is_side_rips_simplex(&cloud.c_side().metric, sigma, t)
        && is_side_rips_simplex(&cloud.y_side().metric, tau, t)
        && lp_combine(a, b, cloud.params().p) <= t + METRIC_EPS;
    Ok(MixedSimplexCertificate {
        sigma: sigma.to_vec(),
        tau: tau.to_vec(),
        a,
        b,
        verdict,
        witness_side: WitnessSide::None,
    })
}

/// Vertex bookkeeping shared by the wedge constructions: global cloud ids
/// with their side, side-local index, and radial value.
#[derive(Debug, Clone)]
pub struct WedgeVertexMap {
    pub points: Vec<WedgePoint>,
    pub radial: Vec<f64>,
    pub c_globals: Vec<usize>,
    pub y_globals: Vec<usize>,
}

impl WedgeVertexMap {
    pub fn of(cloud: &WedgeCloud) -> Self {
        let points = cloud.vertices();
        let mut radial = Vec::with_capacity(points.len());
        let mut c_globals = Vec::new();
        let mut y_globals = Vec::new();
        for (g, p) in points.iter().enumerate() {
            match p.side {
                Side::C => {
                    radial.push(cloud.r_c(p.index));
                    c_globals.push(g);
                }
                Side::Y => {
                    radial.push(cloud.r_y(p.index));
                    y_globals.push(g);
                }
            }
        }
        WedgeVertexMap {
            points,
            radial,
            c_globals,
            y_globals,
        }
    }
}

/// Rips complex of the distances among a subset of cloud vertices,
/// expressed in global vertex ids.
fn side_rips(
    cloud: &WedgeCloud,
    map: &WedgeVertexMap,
    globals: &[usize],
    t: f64,
    max_dim: usize,
) -> Result<Vec<Vec<usize>>, WedgeError> {
    if globals.is_empty() {
        return Ok(Vec::new());
    }
    let metric = FiniteMetric::from_fn(globals.len(), None, |i, j| {
        cloud.wedge_distance(map.points[globals[i]], map.points[globals[j]])
    })?;
    let complex = rips(&metric, t, max_dim)?;
    Ok(complex
        .iter_all()
        .map(|s| s.vertices().iter().map(|&l| globals[l]).collect())
        .collect())
}

/// The Rips complex of a wedge cloud assembled from its decomposition:
/// the two side complexes plus the mixed simplices passing
/// [`mixed_rips_criterion`]. Equal, simplex for simplex, to brute-force
/// Rips on the merged distance table.
pub fn rips_wedge(
    cloud: &WedgeCloud,
    t: f64,
    max_dim: usize,
) -> Result<SimplicialComplex, WedgeError> {
    let map = WedgeVertexMap::of(cloud);
    let mut complex = SimplicialComplex::empty(max_dim);

    let c_simplices = side_rips(cloud, &map, &map.c_globals, t, max_dim)?;
    let y_simplices = side_rips(cloud, &map, &map.y_globals, t, max_dim)?;
    for s in c_simplices.iter().chain(y_simplices.iter()) {
        complex.insert_with_faces(Simplex::from_sorted(s.clone()));
    }

    // Join term: radial data alone decides the cross pairs, so pairs of
    // side simplices are pruned by the maxima (A, B).
    let p = cloud.params().p;
    let mut c_with_max: Vec<(&Vec<usize>, f64)> = c_simplices
        .iter()
        .map(|s| (s, radial_max(&map.radial, s)))
        .collect();
    let mut y_with_max: Vec<(&Vec<usize>, f64)> = y_simplices
        .iter()
        .map(|s| (s, radial_max(&map.radial, s)))
        .collect();
    c_with_max.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap());
    y_with_max.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap());

    for &(sigma, a) in &c_with_max {
        if sigma.len() > max_dim {
            continue;
        }
        for &(tau, b) in &y_with_max {
            if sigma.len() + tau.len() > max_dim + 1 {
                continue;
            }
            if lp_combine(a, b, p) > t + METRIC_EPS {
                break; // y_with_max sorted by B; larger B only grows the norm
            }
            let mut joined = sigma.clone();
            joined.extend_from_slice(tau);
            joined.sort_unstable();
            complex.insert_with_faces(Simplex::from_sorted(joined));
        }
    }
    Ok(complex)
}

// ---------------------------------------------------------------------------
// Ambient Čech on the wedge
// ---------------------------------------------------------------------------

/// One side's ambient witness domain: a ball oracle, the domain point of
/// every side vertex, and the domain point of the glued basepoint.
#[derive(Debug, Clone)]
pub struct SideOracle<O: BallOracle> {
    oracle: O,
    points: Vec<O::Point>,
    base: O::Point,
}

impl<O: BallOracle> SideOracle<O> {
    pub fn new(oracle: O, points: Vec<O::Point>, base: O::Point) -> Self {
        SideOracle {
            oracle,
            points,
            base,
        }
    }

    /// Feasibility of radius-t balls around side-local centers, optionally
    /// intersected with a ball of the given radius around the basepoint.
    fn feasible(
        &self,
        locals: &[usize],
        t: f64,
        base_radius: Option<f64>,
    ) -> Result<bool, OracleError> {
        let mut centers: Vec<O::Point> = locals.iter().map(|&i| self.points[i].clone()).collect();
        let mut radii = vec![t; centers.len()];
        if let Some(r) = base_radius {
            centers.push(self.base.clone());
            radii.push(r);
        }
        let query = BallIntersectionQuery::new(centers, radii)?;
        Ok(self.oracle.intersect(&query)?.feasible)
    }
}

impl SideOracle<FiniteWitnessOracle> {
    /// Default witness domain: the side's own vertices including the
    /// basepoint.
    pub fn finite(side: &PointedFiniteMetric) -> Result<Self, OracleError> {
        let oracle = FiniteWitnessOracle::over_all_vertices(side.metric.clone())?;
        Ok(SideOracle::new(
            oracle,
            (0..side.len()).collect(),
            side.basepoint,
        ))
    }
}

impl SideOracle<RayOracle> {
    /// Ambient ray domain: side points given by their ray parameters c,
    /// embedded at √c.
    pub fn ray(cs: &[f64], basepoint: usize) -> Self {
        let points: Vec<f64> = cs.iter().map(|c| c.sqrt()).collect();
        let base = points[basepoint];
        SideOracle::new(RayOracle, points, base)
    }
}

impl SideOracle<OrthantOracle> {
    /// Ambient orthant domain: side points given by orthant coordinates,
    /// embedded coordinatewise at the square root.
    pub fn orthant(coords: &[Vec<f64>], basepoint: usize, tol: f64) -> Self {
        let points: Vec<Vec<f64>> = coords
            .iter()
            .map(|c| c.iter().map(|x| x.sqrt()).collect())
            .collect();
        let base = points[basepoint].clone();
        SideOracle::new(OrthantOracle { tol }, points, base)
    }
}

/// Radius of the basepoint sublevel ball in the mixed Čech criterion:
/// t for p = ∞, (t^p − other^p)^(1/p) for finite p, clamped to 0 near the
/// boundary per the closed-ball convention. `None` when the other side's
/// radial maximum already exceeds t.
fn sublevel_radius(t: f64, other_max: f64, p: LpExponent) -> Option<f64> {
    if other_max > t + METRIC_EPS {
        return None;
    }
    match p {
        LpExponent::Infinity => Some(t),
        LpExponent::Finite(p) => {
            let gap = t.powf(p) - other_max.powf(p);
            Some(if gap <= 0.0 { 0.0 } else { gap.powf(1.0 / p) })
        }
    }
}

/// The mixed Čech criterion: σ∪τ is a simplex iff one side holds a witness
/// within t of its own centers and within the sublevel radius of the glued
/// basepoint imposed by the other side's radial maximum.
pub fn cech_mixed_criterion<OC: BallOracle, OY: BallOracle>(
    cloud: &WedgeCloud,
    sigma: &[usize],
    tau: &[usize],
    t: f64,
    c_oracle: &SideOracle<OC>,
    y_oracle: &SideOracle<OY>,
) -> Result<MixedSimplexCertificate, WedgeError> {
    if sigma.is_empty() {
        return Err(WedgeError::EmptySide("C"));
    }
    if tau.is_empty() {
        return Err(WedgeError::EmptySide("Y"));
    }
    let profile = RadialProfile::of(cloud);
    let a = radial_max(&profile.r_c, sigma);
    let b = radial_max(&profile.r_y, tau);
    let p = cloud.params().p;

    let mut witness_side = WitnessSide::None;
    if let Some(s) = sublevel_radius(t, b, p) {
        if c_oracle.feasible(sigma, t, Some(s))? {
            witness_side = WitnessSide::C;
        }
    }
    if witness_side == WitnessSide::None {
        if let Some(s) = sublevel_radius(t, a, p) {
            if y_oracle.feasible(tau, t, Some(s))? {
                witness_side = WitnessSide::Y;
            }
        }
    }
    Ok(MixedSimplexCertificate {
        sigma: sigma.to_vec(),
        tau: tau.to_vec(),
        a,
        b,
        verdict: witness_side != WitnessSide::None,
        witness_side,
    })
}

/// Subset-closed enumeration of pure-side ambient Čech simplices, in
/// global ids, returned with side-local index lists.
fn side_cech<O: BallOracle>(
    map: &WedgeVertexMap,
    globals: &[usize],
    oracle: &SideOracle<O>,
    t: f64,
    max_dim: usize,
) -> Result<Vec<Vec<usize>>, WedgeError> {
    let mut accepted: Vec<Vec<usize>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = Vec::new();
    for (l, _) in globals.iter().enumerate() {
        if oracle.feasible(&[map.points[globals[l]].index], t, None)? {
            accepted.push(vec![l]);
            frontier.push(vec![l]);
        }
    }
    for _dim in 1..=max_dim {
        let mut next = Vec::new();
        for simplex in &frontier {
            let last = *simplex.last().unwrap();
            for l in (last + 1)..globals.len() {
                let mut bigger = simplex.clone();
                bigger.push(l);
                let locals: Vec<usize> = bigger
                    .iter()
                    .map(|&k| map.points[globals[k]].index)
                    .collect();
                if oracle.feasible(&locals, t, None)? {
                    next.push(bigger);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        accepted.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(accepted
        .into_iter()
        .map(|s| s.into_iter().map(|l| globals[l]).collect())
        .collect())
}

/// The ambient Čech complex of a wedge cloud: pure-side simplices by
/// per-side ambient Čech (the glued basepoint always belongs to the
/// witness domains), mixed simplices by [`cech_mixed_criterion`].
pub fn cech_wedge_ambient<OC: BallOracle, OY: BallOracle>(
    cloud: &WedgeCloud,
    t: f64,
    max_dim: usize,
    c_oracle: &SideOracle<OC>,
    y_oracle: &SideOracle<OY>,
) -> Result<SimplicialComplex, WedgeError> {
    let map = WedgeVertexMap::of(cloud);
    let mut complex = SimplicialComplex::empty(max_dim);

    let c_simplices = side_cech(&map, &map.c_globals, c_oracle, t, max_dim)?;
    let y_simplices = side_cech(&map, &map.y_globals, y_oracle, t, max_dim)?;
    for s in c_simplices.iter().chain(y_simplices.iter()) {
        complex.insert_with_faces(Simplex::from_sorted(s.clone()));
    }

    // Memoize the per-side queries on (side-local centers, sublevel
    // radius); the radius takes one value per radial maximum of the other
    // side, so collisions are frequent.
    let mut memo: std::collections::HashMap<(Vec<usize>, WitnessSide, u64), bool> =
        std::collections::HashMap::new();
    let p = cloud.params().p;

    for sigma in &c_simplices {
        if sigma.len() > max_dim {
            continue;
        }
        let sigma_locals: Vec<usize> = sigma.iter().map(|&g| map.points[g].index).collect();
        let a = radial_max(&map.radial, sigma);
        for tau in &y_simplices {
            if sigma.len() + tau.len() > max_dim + 1 {
                continue;
            }
            let tau_locals: Vec<usize> = tau.iter().map(|&g| map.points[g].index).collect();
            let b = radial_max(&map.radial, tau);
            let mut verdict = false;
            if let Some(s) = sublevel_radius(t, b, p) {
                let key = (sigma_locals.clone(), WitnessSide::C, s.to_bits());
                verdict = match memo.get(&key) {
                    Some(&v) => v,
                    None => {
                        let v = c_oracle.feasible(&sigma_locals, t, Some(s))?;
                        memo.insert(key, v);
                        v
                    }
                };
            }
            if !verdict {
                if let Some(s) = sublevel_radius(t, a, p) {
                    let key = (tau_locals.clone(), WitnessSide::Y, s.to_bits());
                    verdict = match memo.get(&key) {
                        Some(&v) => v,
                        None => {
                            let v = y_oracle.feasible(&tau_locals, t, Some(s))?;
                            memo.insert(key, v);
                            v
                        }
                    };
                }
            }
            if verdict {
                let mut joined = sigma.clone();
                joined.extend_from_slice(tau);
                joined.sort_unstable();
                complex.insert_with_faces(Simplex::from_sorted(joined));
            }
        }
    }
    Ok(complex)
}

/// [`cech_wedge_ambient`] with the default finite witness domains: each
/// side's own vertices together with the glued basepoint.
pub fn cech_wedge_default(
    cloud: &WedgeCloud,
    t: f64,
    max_dim: usize,
) -> Result<SimplicialComplex, WedgeError> {
    let c_oracle = SideOracle::finite(cloud.c_side())?;
    let y_oracle = SideOracle::finite(cloud.y_side())?;
    cech_wedge_ambient(cloud, t, max_dim, &c_oracle, &y_oracle)
}

// ---------------------------------------------------------------------------
// Audits
// ---------------------------------------------------------------------------

/// Counts recorded per scale by the decomposition audit.
#[derive(Debug, Clone)]
pub struct ScaleAudit {
    pub t: f64,
    pub simplices: usize,
    pub cross_edges: usize,
}

#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub scales: Vec<ScaleAudit>,
}

/// For every scale: the decomposition path must equal brute-force Rips on
/// the merged table simplex for simplex, the Rips/Čech sandwich must hold
/// (intrinsic and default ambient), and the cross-edge set must match the
/// radial rule. Any mismatch is a hard error naming the offending simplex.
pub fn decomposition_audit(
    cloud: &WedgeCloud,
    t_grid: &[f64],
    max_dim: usize,
) -> Result<DecompositionReport, WedgeError> {
    if t_grid.is_empty() {
        return Err(WedgeError::EmptyGrid);
    }
    let table = cloud.full_distance_table()?;
    let map = WedgeVertexMap::of(cloud);
    let mut scales = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let assembled = rips_wedge(cloud, t, max_dim)?;
        let brute = rips(&table, t, max_dim)?;
        for s in assembled.iter_all() {
            if !brute.contains(s) {
                return Err(WedgeError::Mismatch {
                    t,
                    simplex: s.vertices().to_vec(),
                    detail: "assembled by the decomposition but absent from brute force".into(),
                });
            }
        }
        for s in brute.iter_all() {
            if !assembled.contains(s) {
                return Err(WedgeError::Mismatch {
                    t,
                    simplex: s.vertices().to_vec(),
                    detail: "present in brute force but missed by the decomposition".into(),
                });
            }
        }

        let cech = cech_intrinsic(&table, t, max_dim)?;
        let doubled = rips(&table, 2.0 * t, max_dim)?;
        if !assembled.is_subcomplex_of(&cech) {
            return Err(WedgeError::SandwichViolation {
                t,
                detail: "VR_t is not contained in the intrinsic Čech complex".into(),
            });
        }
        if !cech.is_subcomplex_of(&doubled) {
            return Err(WedgeError::SandwichViolation {
                t,
                detail: "intrinsic Čech complex is not contained in VR_2t".into(),
            });
        }
        let ambient = cech_wedge_default(cloud, t, max_dim)?;
        if !assembled.is_subcomplex_of(&ambient) {
            return Err(WedgeError::SandwichViolation {
                t,
                detail: "VR_t is not contained in the ambient wedge Čech complex".into(),
            });
        }
        if !ambient.is_subcomplex_of(&rips_wedge(cloud, 2.0 * t, max_dim)?) {
            return Err(WedgeError::SandwichViolation {
                t,
                detail: "ambient wedge Čech complex is not contained in VR_2t".into(),
            });
        }

        let mut cross_edges = 0;
        for &x in &map.c_globals {
            for &y in &map.y_globals {
                let by_radial =
                    lp_combine(map.radial[x], map.radial[y], cloud.params().p) <= t + METRIC_EPS;
                let in_complex =
                    assembled.contains(&Simplex::from_sorted(vec![x.min(y), x.max(y)]));
                if by_radial != in_complex {
                    return Err(WedgeError::CrossEdgeMismatch { t, x, y });
                }
                if in_complex {
                    cross_edges += 1;
                }
            }
        }
        scales.push(ScaleAudit {
            t,
            simplices: assembled.total(),
            cross_edges,
        });
    }
    Ok(DecompositionReport { scales })
}

/// Bounds produced by the attachment audit for one CP vertex.
#[derive(Debug, Clone, Copy)]
pub struct AttachmentAudit {
    /// r_C(x): the guaranteed lower bound on the distance to the non-CP
    /// sector.
    pub lower: f64,
    /// Minimum wedge distance from x to the Y-side vertices.
    pub upper: f64,
    /// ‖(r_C(x), min r_Y)‖_p: the upper bound the minimum must respect.
    pub cap: f64,
}

/// Distance from a CP vertex to the non-CP sector: bounded below by
/// r_C(x) and above by the ℓp combination with the smallest Y radius.
pub fn attachment_audit(cloud: &WedgeCloud, c_index: usize) -> Result<AttachmentAudit, WedgeError> {
    let y = cloud.y_side();
    let y_points: Vec<usize> = (0..y.len()).filter(|&j| j != y.basepoint).collect();
    if y_points.is_empty() {
        return Err(WedgeError::EmptyYSide);
    }
    let lower = cloud.r_c(c_index);
    let upper = y_points
        .iter()
        .map(|&j| cloud.wedge_distance(WedgePoint::c(c_index), WedgePoint::y(j)))
        .fold(f64::INFINITY, f64::min);
    let min_ry = y_points
        .iter()
        .map(|&j| cloud.r_y(j))
        .fold(f64::INFINITY, f64::min);
    let cap = lp_combine(lower, min_ry, cloud.params().p);
    if lower > upper + METRIC_EPS || upper > cap + METRIC_EPS {
        return Err(WedgeError::AttachmentViolated { lower, upper, cap });
    }
    Ok(AttachmentAudit { lower, upper, cap })
}
