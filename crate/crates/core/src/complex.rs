//! Vietoris–Rips flag complexes and Čech complexes (intrinsic and ambient)
//! on finite metrics.
//!
//! All constructions use closed balls: a distance qualifies at scale t when
//! `d <= t + METRIC_EPS`. Complexes are capped at a construction dimension
//! and at 2^14 simplices per dimension; larger inputs are rejected rather
//! than silently truncated.

use crate::metric::{FiniteMetric, METRIC_EPS};
use crate::witness::{BallIntersectionQuery, BallOracle, OracleError};
use std::collections::BTreeSet;
use thiserror::Error;

/// Hard cap on simplices per dimension (desk-scale tool).
pub const MAX_SIMPLICES_PER_DIM: usize = 1 << 14;

/// Default construction dimension: one less than the vertex count,
/// capped at 7.
pub fn default_max_dim(vertex_count: usize) -> usize {
    vertex_count.saturating_sub(1).min(7)
}

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("empty or unsorted vertex list for a simplex: {0:?}")]
    BadSimplex(Vec<usize>),
    #[error("complex exceeds {MAX_SIMPLICES_PER_DIM} simplices in dimension {dim}")]
    TooLarge { dim: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A simplex: strictly increasing, nonempty vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(mut vertices: Vec<usize>) -> Result<Self, ComplexError> {
        if vertices.is_empty() {
            return Err(ComplexError::BadSimplex(vertices));
        }
        vertices.sort_unstable();
        vertices.dedup();
        Ok(Simplex(vertices))
    }

    pub fn vertex(v: usize) -> Self {
        Simplex(vec![v])
    }

    /// From an already sorted, duplicate-free list.
    pub fn from_sorted(vertices: Vec<usize>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(!vertices.is_empty());
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// The codimension-one faces (empty for vertices).
    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|skip| {
                Simplex(
                    self.0
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != skip)
                        .map(|(_, &v)| v)
                        .collect(),
                )
            })
            .collect()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Union with another simplex.
    pub fn join(&self, other: &Simplex) -> Simplex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }
}

/// A dimension-graded, face-closed set of simplices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SimplicialComplex {
    by_dim: Vec<BTreeSet<Simplex>>,
    max_dim: usize,
}

impl SimplicialComplex {
    pub fn empty(max_dim: usize) -> Self {
        SimplicialComplex {
            by_dim: Vec::new(),
            max_dim,
        }
    }

    /// The complex with the given vertices and nothing else.
    pub fn from_vertices(vertices: impl IntoIterator<Item = usize>, max_dim: usize) -> Self {
        let mut c = SimplicialComplex::empty(max_dim);
        for v in vertices {
            c.insert_simplex(Simplex::vertex(v));
        }
        c
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Highest dimension that actually carries simplices.
    pub fn top_dim(&self) -> Option<usize> {
        (0..self.by_dim.len()).rev().find(|&d| !self.by_dim[d].is_empty())
    }

    fn insert_simplex(&mut self, s: Simplex) {
        let d = s.dim();
        while self.by_dim.len() <= d {
            self.by_dim.push(BTreeSet::new());
        }
        self.by_dim[d].insert(s);
    }

    /// Insert a simplex together with all of its faces.
    pub fn insert_with_faces(&mut self, s: Simplex) {
        if !self.contains(&s) {
            for f in s.facets() {
                self.insert_with_faces(f);
            }
            self.insert_simplex(s);
        }
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.by_dim.get(s.dim()).is_some_and(|set| set.contains(s))
    }

    pub fn simplices(&self, dim: usize) -> impl Iterator<Item = &Simplex> {
        self.by_dim.get(dim).into_iter().flatten()
    }

    pub fn iter_all(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn count(&self, dim: usize) -> usize {
        self.by_dim.get(dim).map_or(0, BTreeSet::len)
    }

    /// Simplex counts per dimension, up to the top occupied dimension.
    pub fn counts(&self) -> Vec<usize> {
        (0..=self.top_dim().map_or(0, |d| d))
            .map(|d| self.count(d))
            .collect()
    }

    pub fn total(&self) -> usize {
        self.by_dim.iter().map(BTreeSet::len).sum()
    }

    pub fn vertex_ids(&self) -> Vec<usize> {
        self.simplices(0).map(|s| s.vertices()[0]).collect()
    }

    /// χ = Σ (−1)^k · (number of k-simplices).
    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, set)| {
                let n = set.len() as i64;
                if d % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    /// Every face of every stored simplex is stored.
    pub fn is_face_closed(&self) -> bool {
        self.iter_all()
            .all(|s| s.facets().iter().all(|f| self.contains(f)))
    }

    /// Every simplex of `self` is a simplex of `other`.
    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.iter_all().all(|s| other.contains(s))
    }

    /// A simplex is present iff all its edges are (up to the shared cap).
    pub fn is_flag(&self) -> bool {
        let verts = self.vertex_ids();
        let edge = |a: usize, b: usize| {
            self.contains(&Simplex::from_sorted(vec![a.min(b), a.max(b)]))
        };
        // present simplices must have all edges
        for s in self.iter_all() {
            let vs = s.vertices();
            for i in 0..vs.len() {
                for j in (i + 1)..vs.len() {
                    if !edge(vs[i], vs[j]) {
                        return false;
                    }
                }
            }
        }
        // cliques must be present: grow cliques the same way rips does
        let mut current: Vec<Vec<usize>> = verts.iter().map(|&v| vec![v]).collect();
        for dim in 1..=self.max_dim {
            let mut next = Vec::new();
            for clique in &current {
                let last = *clique.last().unwrap();
                for &v in verts.iter().filter(|&&v| v > last) {
                    if clique.iter().all(|&u| edge(u, v)) {
                        let mut bigger = clique.clone();
                        bigger.push(v);
                        if !self.contains(&Simplex::from_sorted(bigger.clone())) {
                            return false;
                        }
                        next.push(bigger);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            let _ = dim;
            current = next;
        }
        true
    }

    /// The maximal simplices (not a face of any other stored simplex).
    pub fn maximal_simplices(&self) -> Vec<&Simplex> {
        let mut out = Vec::new();
        for s in self.iter_all() {
            let mut is_maximal = true;
            if let Some(top) = self.top_dim() {
                'outer: for d in (s.dim() + 1)..=top {
                    for bigger in self.simplices(d) {
                        if s.vertices().iter().all(|&v| bigger.contains_vertex(v)) {
                            is_maximal = false;
                            break 'outer;
                        }
                    }
                }
            }
            if is_maximal {
                out.push(s);
            }
        }
        out
    }

    /// The full simplex on the vertex set, within the dimension cap.
    pub fn is_full_simplex(&self) -> bool {
        let verts = self.vertex_ids();
        if verts.is_empty() {
            return false;
        }
        let top = (verts.len() - 1).min(self.max_dim);
        self.contains_all_subsets_up_to(&verts, top)
    }

    fn contains_all_subsets_up_to(&self, verts: &[usize], top: usize) -> bool {
        // subsets by bitmask; vertex sets here are small by construction
        if verts.len() > 20 {
            return false;
        }
        for mask in 1u32..(1 << verts.len()) {
            let size = mask.count_ones() as usize;
            if size == 0 || size > top + 1 {
                continue;
            }
            let subset: Vec<usize> = (0..verts.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| verts[i])
                .collect();
            if !self.contains(&Simplex::from_sorted(subset)) {
                return false;
            }
        }
        true
    }

    /// A cone apex: a vertex contained in every maximal simplex.
    pub fn cone_apex(&self) -> Option<usize> {
        let maximal = self.maximal_simplices();
        if maximal.is_empty() {
            return None;
        }
        self.vertex_ids()
            .into_iter()
            .find(|&a| maximal.iter().all(|m| m.contains_vertex(a)))
    }
}

fn check_cap(complex: &SimplicialComplex) -> Result<(), ComplexError> {
    for dim in 0..=complex.top_dim().unwrap_or(0) {
        if complex.count(dim) > MAX_SIMPLICES_PER_DIM {
            return Err(ComplexError::TooLarge { dim });
        }
    }
    Ok(())
}

/// The Vietoris–Rips complex at scale t: the flag complex of the graph
/// `{d(i,j) <= t}`, built by clique expansion up to `max_dim`.
pub fn rips(metric: &FiniteMetric, t: f64, max_dim: usize) -> Result<SimplicialComplex, ComplexError> {
    let n = metric.len();
    let adjacent = |i: usize, j: usize| metric.get(i, j) <= t + METRIC_EPS;
    let mut complex = SimplicialComplex::from_vertices(0..n, max_dim);
    let mut frontier: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    for dim in 1..=max_dim {
        let mut next = Vec::new();
        for simplex in &frontier {
            let last = *simplex.last().unwrap();
            for v in (last + 1)..n {
                if simplex.iter().all(|&u| adjacent(u, v)) {
                    let mut bigger = simplex.clone();
                    bigger.push(v);
                    next.push(bigger);
                }
            }
        }
        if next.len() > MAX_SIMPLICES_PER_DIM {
            return Err(ComplexError::TooLarge { dim });
        }
        if next.is_empty() {
            break;
        }
        for s in &next {
            complex.insert_simplex(Simplex::from_sorted(s.clone()));
        }
        frontier = next;
    }
    check_cap(&complex)?;
    Ok(complex)
}

/// Generic subset-closed construction: extend each accepted simplex by a
/// larger vertex and keep it when `accept` holds. Correct for any
/// subset-monotone acceptance predicate.
fn monotone_complex(
    n: usize,
    max_dim: usize,
    mut accept: impl FnMut(&[usize]) -> Result<bool, ComplexError>,
) -> Result<SimplicialComplex, ComplexError> {
    let mut complex = SimplicialComplex::empty(max_dim);
    let mut frontier: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if accept(&[v])? {
            complex.insert_simplex(Simplex::vertex(v));
            frontier.push(vec![v]);
        }
    }
    for dim in 1..=max_dim {
        let mut next = Vec::new();
        for simplex in &frontier {
            let last = *simplex.last().unwrap();
            for v in (last + 1)..n {
                let mut bigger = simplex.clone();
                bigger.push(v);
                if accept(&bigger)? {
                    next.push(bigger);
                }
            }
        }
        if next.len() > MAX_SIMPLICES_PER_DIM {
            return Err(ComplexError::TooLarge { dim });
        }
        if next.is_empty() {
            break;
        }
        for s in &next {
            complex.insert_simplex(Simplex::from_sorted(s.clone()));
        }
        frontier = next;
    }
    Ok(complex)
}

/// The intrinsic Čech complex: σ is a simplex iff some vertex of the
/// finite space itself lies within t of every member of σ.
pub fn cech_intrinsic(
    metric: &FiniteMetric,
    t: f64,
    max_dim: usize,
) -> Result<SimplicialComplex, ComplexError> {
    let n = metric.len();
    monotone_complex(n, max_dim, |simplex| {
        Ok((0..n).any(|w| simplex.iter().all(|&s| metric.get(w, s) <= t + METRIC_EPS)))
    })
}

/// The ambient Čech complex of a cloud inside an oracle's witness domain:
/// σ is a simplex iff the oracle reports a common point of the radius-t
/// balls around σ. Face closure follows from monotonicity of feasibility
/// under removing centers.
pub fn cech_ambient<O: BallOracle>(
    points: &[O::Point],
    oracle: &O,
    t: f64,
    max_dim: usize,
) -> Result<SimplicialComplex, ComplexError> {
    monotone_complex(points.len(), max_dim, |simplex| {
        let centers: Vec<O::Point> = simplex.iter().map(|&i| points[i].clone()).collect();
        let radii = vec![t; centers.len()];
        let query = BallIntersectionQuery::new(centers, radii)?;
        Ok(oracle.intersect(&query)?.feasible)
    })
}

/// VRₜ ⊆ Čₜ ⊆ VR₂ₜ for the intrinsic Čech complex of a finite metric.
pub fn sandwich_check(metric: &FiniteMetric, t: f64, max_dim: usize) -> Result<bool, ComplexError> {
    let vr_t = rips(metric, t, max_dim)?;
    let cech = cech_intrinsic(metric, t, max_dim)?;
    let vr_2t = rips(metric, 2.0 * t, max_dim)?;
    Ok(vr_t.is_subcomplex_of(&cech) && cech.is_subcomplex_of(&vr_2t))
}

/// VRₜ ⊆ Č^amb_ₜ ⊆ VR₂ₜ for a cloud in an ambient witness domain whose
/// restriction to the cloud is `metric`.
pub fn sandwich_check_ambient<O: BallOracle>(
    metric: &FiniteMetric,
    points: &[O::Point],
    oracle: &O,
    t: f64,
    max_dim: usize,
) -> Result<bool, ComplexError> {
    let vr_t = rips(metric, t, max_dim)?;
    let cech = cech_ambient(points, oracle, t, max_dim)?;
    let vr_2t = rips(metric, 2.0 * t, max_dim)?;
    Ok(vr_t.is_subcomplex_of(&cech) && cech.is_subcomplex_of(&vr_2t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::RayOracle;

    fn ray_metric() -> FiniteMetric {
        FiniteMetric::new(
            vec![
                vec![0.0, 1.0, 2.0],
                vec![1.0, 0.0, 1.0],
                vec![2.0, 1.0, 0.0],
            ],
            Some(vec!["x0".into(), "x1".into(), "x4".into()]),
        )
        .unwrap()
    }

    fn edge(a: usize, b: usize) -> Simplex {
        Simplex::new(vec![a, b]).unwrap()
    }

    #[test]
    fn rips_ray_path_stage() {
        let complex = rips(&ray_metric(), 1.5, 2).unwrap();
        assert_eq!(complex.count(0), 3);
        assert!(complex.contains(&edge(0, 1)));
        assert!(complex.contains(&edge(1, 2)));
        assert!(!complex.contains(&edge(0, 2)));
        assert_eq!(complex.count(2), 0);
    }

    #[test]
    fn rips_ray_full_simplex_stage() {
        let complex = rips(&ray_metric(), 2.0, 2).unwrap();
        assert_eq!(complex.count(1), 3);
        assert_eq!(complex.count(2), 1);
        assert!(complex.is_full_simplex());
    }

    #[test]
    fn rips_zero_scale_is_discrete() {
        let complex = rips(&ray_metric(), 0.0, 2).unwrap();
        assert_eq!(complex.counts(), vec![3]);
    }

    #[test]
    fn cech_intrinsic_jumps_straight_to_simplex() {
        let m = ray_metric();
        let discrete = cech_intrinsic(&m, 0.9, 2).unwrap();
        assert_eq!(discrete.counts(), vec![3]);
        let simplex = cech_intrinsic(&m, 1.0, 2).unwrap();
        assert_eq!(simplex.counts(), vec![3, 3, 1]);
        let single = cech_intrinsic(&FiniteMetric::singleton(None), 7.0, 3).unwrap();
        assert_eq!(single.counts(), vec![1]);
    }

    #[test]
    fn cech_ambient_ray_has_path_stage() {
        // sqrt coordinates 0, 1, 2 of the ray points
        let points = [0.0, 1.0, 2.0];
        let path = cech_ambient(&points, &RayOracle, 0.6, 2).unwrap();
        assert!(path.contains(&edge(0, 1)));
        assert!(path.contains(&edge(1, 2)));
        assert!(!path.contains(&edge(0, 2)));
        assert_eq!(path.count(2), 0);

        let full = cech_ambient(&points, &RayOracle, 1.0, 2).unwrap();
        assert_eq!(full.counts(), vec![3, 3, 1]);

        let lone = cech_ambient(&[0.7], &RayOracle, 0.0, 2).unwrap();
        assert_eq!(lone.counts(), vec![1]);
    }

    #[test]
    fn sandwich_on_ray_cloud() {
        for &t in &[0.25, 0.5, 1.0, 1.5, 2.0] {
            assert!(sandwich_check(&ray_metric(), t, 2).unwrap());
            assert!(
                sandwich_check_ambient(&ray_metric(), &[0.0, 1.0, 2.0], &RayOracle, t, 2).unwrap()
            );
        }
        assert!(sandwich_check(&FiniteMetric::singleton(None), 0.3, 2).unwrap());
    }

    #[test]
    fn face_closure_and_flagness() {
        let complex = rips(&ray_metric(), 2.0, 2).unwrap();
        assert!(complex.is_face_closed());
        assert!(complex.is_flag());
    }

    #[test]
    fn monotone_in_scale() {
        let m = ray_metric();
        let smaller = rips(&m, 1.0, 2).unwrap();
        let larger = rips(&m, 1.7, 2).unwrap();
        assert!(smaller.is_subcomplex_of(&larger));
        let c_small = cech_intrinsic(&m, 0.7, 2).unwrap();
        let c_large = cech_intrinsic(&m, 1.2, 2).unwrap();
        assert!(c_small.is_subcomplex_of(&c_large));
    }

    #[test]
    fn cone_apex_detection() {
        let mut complex = SimplicialComplex::empty(2);
        complex.insert_with_faces(Simplex::new(vec![0, 1, 2]).unwrap());
        complex.insert_with_faces(Simplex::new(vec![0, 3]).unwrap());
        assert_eq!(complex.cone_apex(), Some(0));
        assert!(!complex.is_full_simplex());
    }
}
