//! Property tests for the structural invariants: metric axioms of the
//! glued table, the decomposition identity, filtration monotonicity, the
//! flag property, Čech containments, and the mixed-simplex certificate
//! checked against membership by exhaustive enumeration.

use bk_core::complex::{cech_intrinsic, rips, Simplex};
use bk_core::homology::betti;
use bk_core::metric::{
    lp_combine, BkParams, FiniteMetric, LpExponent, PointedFiniteMetric, Side, WedgeCloud,
    METRIC_EPS,
};
use bk_core::wedge::{
    cech_wedge_default, mixed_rips_criterion, rips_wedge, WedgeVertexMap,
};
use proptest::prelude::*;

fn euclid3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn point() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(0.0..2.0f64)
}

fn points(max: usize) -> impl Strategy<Value = Vec<[f64; 3]>> {
    prop::collection::vec(point(), 1..=max).prop_filter("points must be separated", |pts| {
        pts.iter().enumerate().all(|(i, a)| {
            pts[i + 1..]
                .iter()
                .all(|b| euclid3(a, b) > 1e-6)
        })
    })
}

fn exponent() -> impl Strategy<Value = LpExponent> {
    prop_oneof![
        Just(LpExponent::Infinity),
        (1.0..4.0f64).prop_map(|p| LpExponent::finite(p).unwrap()),
    ]
}

prop_compose! {
    fn cloud()(
        c_pts in points(4),
        y_pts in points(5),
        p in exponent(),
        anchor_seed in any::<u8>(),
        include in any::<bool>(),
    ) -> WedgeCloud {
        let c_metric = FiniteMetric::from_fn(c_pts.len(), None, |i, j| euclid3(&c_pts[i], &c_pts[j])).unwrap();
        let y_metric = FiniteMetric::from_fn(y_pts.len(), None, |i, j| euclid3(&y_pts[i], &y_pts[j])).unwrap();
        let anchor = anchor_seed as usize % c_pts.len();
        WedgeCloud::new(
            PointedFiniteMetric::new(c_metric, anchor).unwrap(),
            PointedFiniteMetric::new(y_metric, 0).unwrap(),
            BkParams::new(1.0, 1.0, p).unwrap(),
            include,
        )
        .unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// The glued table always satisfies every metric axiom.
    #[test]
    fn glued_table_is_a_metric(cloud in cloud()) {
        prop_assert!(cloud.full_distance_table().is_ok());
    }

    /// Within-side distances survive the gluing unchanged, and every cross
    /// distance brackets between the radial maximum and the radial sum.
    #[test]
    fn cross_distances_bracket(cloud in cloud()) {
        let map = WedgeVertexMap::of(&cloud);
        for (g, pt) in map.points.iter().enumerate() {
            for (h, qt) in map.points.iter().enumerate().skip(g + 1) {
                let d = cloud.wedge_distance(*pt, *qt);
                if pt.side != qt.side {
                    let (rc, ry) = (map.radial[g], map.radial[h]);
                    prop_assert!(d >= rc.max(ry) - METRIC_EPS);
                    prop_assert!(d <= rc + ry + METRIC_EPS);
                }
            }
        }
    }

    /// The decomposition path equals brute force on the merged table.
    #[test]
    fn decomposition_equals_brute_force(cloud in cloud(), t in 0.0..4.0f64) {
        let table = cloud.full_distance_table().unwrap();
        let assembled = rips_wedge(&cloud, t, 4).unwrap();
        let brute = rips(&table, t, 4).unwrap();
        prop_assert_eq!(assembled, brute);
    }

    /// Filtration property: smaller scales give subcomplexes.
    #[test]
    fn monotone_in_scale(cloud in cloud(), t in 0.0..3.0f64, dt in 0.0..1.0f64) {
        let small = rips_wedge(&cloud, t, 3).unwrap();
        let large = rips_wedge(&cloud, t + dt, 3).unwrap();
        prop_assert!(small.is_subcomplex_of(&large));
        let c_small = cech_wedge_default(&cloud, t, 3).unwrap();
        let c_large = cech_wedge_default(&cloud, t + dt, 3).unwrap();
        prop_assert!(c_small.is_subcomplex_of(&c_large));
    }

    /// Rips complexes are flag complexes and face-closed.
    #[test]
    fn rips_is_flag(cloud in cloud(), t in 0.0..3.0f64) {
        let complex = rips_wedge(&cloud, t, 4).unwrap();
        prop_assert!(complex.is_face_closed());
        prop_assert!(complex.is_flag());
    }

    /// Sandwich and the intrinsic-inside-ambient containment.
    #[test]
    fn cech_containments(cloud in cloud(), t in 0.0..3.0f64) {
        let table = cloud.full_distance_table().unwrap();
        let vr_t = rips_wedge(&cloud, t, 3).unwrap();
        let intrinsic = cech_intrinsic(&table, t, 3).unwrap();
        let ambient = cech_wedge_default(&cloud, t, 3).unwrap();
        let vr_2t = rips_wedge(&cloud, 2.0 * t, 3).unwrap();
        prop_assert!(vr_t.is_subcomplex_of(&intrinsic));
        prop_assert!(intrinsic.is_subcomplex_of(&vr_2t));
        prop_assert!(vr_t.is_subcomplex_of(&ambient));
        prop_assert!(ambient.is_subcomplex_of(&vr_2t));
        // ambient Čech is face-closed even though it is not a flag complex
        prop_assert!(ambient.is_face_closed());
        // witnesses restricted to the cloud can only lose simplices
        prop_assert!(intrinsic.is_subcomplex_of(&ambient));
    }

    /// Euler characteristic consistency comes with every Betti vector.
    #[test]
    fn betti_euler_consistency(cloud in cloud(), t in 0.0..3.0f64) {
        let complex = rips_wedge(&cloud, t, 4).unwrap();
        let b = betti(&complex).unwrap();
        let from_betti: i64 = b
            .betti
            .iter()
            .enumerate()
            .map(|(k, &v)| if k % 2 == 0 { v as i64 } else { -(v as i64) })
            .sum();
        prop_assert_eq!(complex.euler_characteristic(), from_betti);
    }

    /// lp_combine is monotone in each argument and subadditive in pairs.
    #[test]
    fn lp_combine_properties(
        a1 in 0.0..5.0f64, b1 in 0.0..5.0f64,
        a2 in 0.0..5.0f64, b2 in 0.0..5.0f64,
        p in exponent(),
    ) {
        let v = lp_combine(a1, b1, p);
        prop_assert!(v >= a1.max(b1) - METRIC_EPS);
        prop_assert!(v <= a1 + b1 + METRIC_EPS);
        prop_assert!(lp_combine(a1 + a2, b1, p) >= v - METRIC_EPS);
        prop_assert!(lp_combine(a1, b1 + b2, p) >= v - METRIC_EPS);
        // Minkowski for pairs
        let sum = lp_combine(a1 + a2, b1 + b2, p);
        prop_assert!(sum <= v + lp_combine(a2, b2, p) + METRIC_EPS);
    }

    /// The mixed-simplex certificate agrees with membership, both
    /// directions, by exhaustive enumeration on small clouds.
    #[test]
    fn mixed_certificate_matches_membership(cloud in cloud(), t in 0.0..3.0f64) {
        let map = WedgeVertexMap::of(&cloud);
        let complex = rips_wedge(&cloud, t, 7).unwrap();
        let c_globals = &map.c_globals;
        let y_globals = &map.y_globals;
        for c_mask in 1u32..(1 << c_globals.len()) {
            let sigma_g: Vec<usize> = (0..c_globals.len())
                .filter(|&i| c_mask >> i & 1 == 1)
                .map(|i| c_globals[i])
                .collect();
            let sigma_local: Vec<usize> =
                sigma_g.iter().map(|&g| map.points[g].index).collect();
            for y_mask in 1u32..(1 << y_globals.len()) {
                let tau_g: Vec<usize> = (0..y_globals.len())
                    .filter(|&j| y_mask >> j & 1 == 1)
                    .map(|j| y_globals[j])
                    .collect();
                let tau_local: Vec<usize> =
                    tau_g.iter().map(|&g| map.points[g].index).collect();
                let cert = mixed_rips_criterion(&cloud, &sigma_local, &tau_local, t).unwrap();
                let mut joined = sigma_g.clone();
                joined.extend_from_slice(&tau_g);
                joined.sort_unstable();
                let member = complex.contains(&Simplex::new(joined).unwrap());
                prop_assert_eq!(cert.verdict, member);
            }
        }
    }

    /// Changing the anchor moves every distance by at most the anchor gap.
    #[test]
    fn anchor_shift_is_uniformly_bounded(cloud in cloud(), new_anchor_seed in any::<u8>()) {
        let n = cloud.c_side().len();
        let moved = cloud.with_anchor(new_anchor_seed as usize % n).unwrap();
        // errors internally if the bound fails
        prop_assert!(bk_core::metric::gh_distortion_bound(&cloud, &moved).is_ok());
    }

    /// Snowflaked metrics stay metrics.
    #[test]
    fn snowflake_preserves_axioms(
        pts in points(6),
        lambda in 0.1..3.0f64,
        alpha in 0.05..1.0f64,
    ) {
        let metric =
            FiniteMetric::from_fn(pts.len(), None, |i, j| euclid3(&pts[i], &pts[j])).unwrap();
        prop_assert!(metric.snowflake(lambda, alpha).is_ok());
    }

    /// Any two (p, λ) wedge metrics on one cloud are bi-Lipschitz
    /// comparable with the two-dimensional norm-equivalence constant.
    #[test]
    fn bilipschitz_comparison(
        cloud in cloud(),
        q in exponent(),
        lambda_a in 0.25..4.0f64,
        lambda_b in 0.25..4.0f64,
    ) {
        let p = cloud.params().p;
        prop_assert!(
            bk_core::metric::bilipschitz_check(&cloud, p, q, lambda_a, lambda_b).unwrap()
        );
    }

    /// Basepoint sufficiency: once every radial value is within t, every
    /// mixed pair of side simplices is certified through the glued
    /// basepoint.
    #[test]
    fn basepoint_sufficiency(cloud in cloud()) {
        let map = WedgeVertexMap::of(&cloud);
        prop_assume!(!map.y_globals.is_empty() && !map.c_globals.is_empty());
        let t = map.radial.iter().cloned().fold(0.0, f64::max) + 0.01;
        let c_oracle = bk_core::wedge::SideOracle::finite(cloud.c_side()).unwrap();
        let y_oracle = bk_core::wedge::SideOracle::finite(cloud.y_side()).unwrap();
        // single-vertex sides suffice: larger simplices only share the witness
        for &cg in &map.c_globals {
            for &yg in &map.y_globals {
                let cert = bk_core::wedge::cech_mixed_criterion(
                    &cloud,
                    &[map.points[cg].index],
                    &[map.points[yg].index],
                    t,
                    &c_oracle,
                    &y_oracle,
                )
                .unwrap();
                prop_assert!(cert.verdict);
            }
        }
    }

    /// Hellinger distances on any finite orthant sample form a metric.
    #[test]
    fn hellinger_samples_are_metrics(
        coords in prop::collection::vec(prop::collection::vec(0.0..4.0f64, 3), 2..6),
    ) {
        let points: Vec<bk_core::models::HellingerPoint> = coords
            .iter()
            .map(|c| bk_core::models::HellingerPoint::new(c.clone()).unwrap())
            .collect();
        let distinct = points.iter().enumerate().all(|(i, a)| {
            points[i + 1..]
                .iter()
                .all(|b| bk_core::models::hellinger(a, b).unwrap() > 1e-9)
        });
        prop_assume!(distinct);
        prop_assert!(bk_core::models::hellinger_metric(&points, None).is_ok());
    }

    /// Planted-witness queries are feasible: centers at distances dᵢ from
    /// a known orthant point, radii dᵢ + slack.
    #[test]
    fn orthant_accepts_planted_witnesses(
        witness in prop::collection::vec(0.0..3.0f64, 2..5),
        offsets in prop::collection::vec(prop::collection::vec(-1.0..1.0f64, 4), 1..6),
        slack in 0.01..0.5f64,
    ) {
        let dim = witness.len();
        let centers: Vec<Vec<f64>> = offsets
            .iter()
            .map(|o| {
                witness
                    .iter()
                    .zip(o)
                    .map(|(w, d)| (w + d).max(0.0))
                    .collect()
            })
            .collect();
        let radii: Vec<f64> = centers
            .iter()
            .map(|c| {
                let d: f64 = c
                    .iter()
                    .zip(&witness)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                d + slack
            })
            .collect();
        let _ = dim;
        let query = bk_core::witness::BallIntersectionQuery::new(centers, radii).unwrap();
        let sol = bk_core::witness::orthant_ball_intersection(&query, 1e-9).unwrap();
        prop_assert!(sol.feasible);
        prop_assert!(sol.margin <= -slack + 1e-7);
    }

    /// A pair of balls separated by a gap keeps the whole query infeasible
    /// with margin at least half the gap.
    #[test]
    fn orthant_rejects_separated_pairs(
        base in prop::collection::vec(0.0..2.0f64, 2..4),
        direction_seed in 0usize..3,
        r1 in 0.0..1.0f64,
        r2 in 0.0..1.0f64,
        gap in 0.05..1.0f64,
        extra in prop::collection::vec(prop::collection::vec(0.0..3.0f64, 3), 0..3),
    ) {
        let dim = base.len();
        let axis = direction_seed % dim;
        let mut far = base.clone();
        far[axis] += r1 + r2 + gap;
        let mut centers = vec![base.clone(), far];
        let mut radii = vec![r1, r2];
        for e in &extra {
            centers.push(e[..dim].to_vec());
            radii.push(3.0); // huge balls cannot restore feasibility of the pair
        }
        let query = bk_core::witness::BallIntersectionQuery::new(centers, radii).unwrap();
        let sol = bk_core::witness::orthant_ball_intersection(&query, 1e-9).unwrap();
        prop_assert!(!sol.feasible);
        prop_assert!(sol.margin >= gap / 2.0 - 1e-7);
    }

    /// Interval Helly property on the ray: an ambient Čech simplex exists
    /// iff the center diameter is at most 2t, cross-checked against the
    /// interval oracle.
    #[test]
    fn ray_cech_is_diameter_thresholded(
        mut coords in prop::collection::vec(0.0..4.0f64, 2..6),
        t in 0.0..3.0f64,
    ) {
        coords.sort_by(|a, b| a.partial_cmp(b).unwrap());
        coords.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        prop_assume!(coords.len() >= 2);
        let complex =
            bk_core::complex::cech_ambient(&coords, &bk_core::witness::RayOracle, t, coords.len())
                .unwrap();
        for mask in 1u32..(1 << coords.len()) {
            let subset: Vec<usize> = (0..coords.len()).filter(|&i| mask >> i & 1 == 1).collect();
            if subset.len() < 2 {
                continue;
            }
            let diam = coords[*subset.last().unwrap()] - coords[subset[0]];
            let member = complex.contains(&Simplex::new(subset).unwrap());
            prop_assert_eq!(member, diam <= 2.0 * t + 2.0 * METRIC_EPS);
        }
    }
}

/// One non-random regression: the mixed enumeration above must actually
/// exercise both sides of the certificate on a known cloud.
#[test]
fn certificate_enumeration_sees_both_verdicts() {
    let c = FiniteMetric::new(
        vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ],
        None,
    )
    .unwrap();
    let y = FiniteMetric::new(
        vec![
            vec![0.0, 0.95, 0.95],
            vec![0.95, 0.0, 1.9],
            vec![0.95, 1.9, 0.0],
        ],
        None,
    )
    .unwrap();
    let cloud = WedgeCloud::new(
        PointedFiniteMetric::new(c, 1).unwrap(),
        PointedFiniteMetric::new(y, 0).unwrap(),
        BkParams::max_glue(),
        false,
    )
    .unwrap();
    let map = WedgeVertexMap::of(&cloud);
    assert_eq!(map.points.iter().filter(|p| p.side == Side::C).count(), 2);
    let yes = mixed_rips_criterion(&cloud, &[0], &[1], 1.5).unwrap();
    assert!(yes.verdict);
    let no = mixed_rips_criterion(&cloud, &[0, 2], &[1], 1.5).unwrap();
    assert!(!no.verdict);
}
