//! Glue between parsed clouds and complex construction: picks the ambient
//! witness oracle that matches the declared CP-side model and drives
//! Betti sweeps and audits over scale grids.

use crate::cloudspec::{BuiltCloud, CModel};
use crate::complex::{cech_intrinsic, SimplicialComplex};
use crate::homology::{betti_sweep, BettiProfile, BuildPath, ComplexKind, HomologyError};
use crate::wedge::{
    attachment_audit, cech_wedge_ambient, cech_wedge_default, decomposition_audit, rips_wedge,
    AttachmentAudit, DecompositionReport, SideOracle, WedgeError,
};

/// Build one complex of the requested kind at scale t.
///
/// Ambient Čech complexes use the witness domain that matches the CP-side
/// model: the full ray for ray and scalar models, the nonnegative orthant
/// for Hellinger models (with the given solver tolerance), and the finite
/// vertex set plus the glued basepoint otherwise. The Y-side domain is
/// always its finite vertex set with the basepoint.
pub fn build_complex(
    built: &BuiltCloud,
    kind: ComplexKind,
    t: f64,
    max_dim: usize,
    solver_tol: f64,
) -> Result<SimplicialComplex, WedgeError> {
    let cloud = &built.cloud;
    match kind {
        ComplexKind::Rips => rips_wedge(cloud, t, max_dim),
        ComplexKind::CechIntrinsic => {
            let table = cloud.full_distance_table()?;
            Ok(cech_intrinsic(&table, t, max_dim)?)
        }
        ComplexKind::CechAmbient => match &built.c_model {
            CModel::RayLike(cs) => {
                let c_oracle = SideOracle::ray(cs, cloud.anchor());
                let y_oracle = SideOracle::finite(cloud.y_side())?;
                cech_wedge_ambient(cloud, t, max_dim, &c_oracle, &y_oracle)
            }
            CModel::Hellinger(coords) => {
                let c_oracle = SideOracle::orthant(coords, cloud.anchor(), solver_tol);
                let y_oracle = SideOracle::finite(cloud.y_side())?;
                cech_wedge_ambient(cloud, t, max_dim, &c_oracle, &y_oracle)
            }
            CModel::Explicit => cech_wedge_default(cloud, t, max_dim),
        },
    }
}

/// Betti profile of one complex kind over a scale grid.
pub fn sweep(
    built: &BuiltCloud,
    kind: ComplexKind,
    grid: &[f64],
    max_dim: usize,
    solver_tol: f64,
) -> Result<BettiProfile, HomologyError> {
    let path = match kind {
        ComplexKind::CechIntrinsic => BuildPath::Direct,
        _ => BuildPath::WedgeDecomposition,
    };
    betti_sweep(grid, kind, path, |t| {
        build_complex(built, kind, t, max_dim, solver_tol)
    })
}

/// [`sweep`], also returning the complexes themselves in grid order.
pub fn sweep_with_complexes(
    built: &BuiltCloud,
    kind: ComplexKind,
    grid: &[f64],
    max_dim: usize,
    solver_tol: f64,
) -> Result<(BettiProfile, Vec<(f64, SimplicialComplex)>), HomologyError> {
    let path = match kind {
        ComplexKind::CechIntrinsic => BuildPath::Direct,
        _ => BuildPath::WedgeDecomposition,
    };
    let mut stored: Vec<(f64, SimplicialComplex)> = Vec::new();
    let profile = betti_sweep(grid, kind, path, |t| {
        let complex = build_complex(built, kind, t, max_dim, solver_tol)?;
        stored.push((t, complex.clone()));
        Ok::<_, WedgeError>(complex)
    })?;
    Ok((profile, stored))
}

/// The audit bundle run by `--audit`: the decomposition/sandwich/cross-edge
/// audit over the grid plus the attachment bracket of every CP vertex.
#[derive(Debug)]
pub struct AuditBundle {
    pub decomposition: DecompositionReport,
    pub attachment: Vec<(usize, AttachmentAudit)>,
}

pub fn run_audits(
    built: &BuiltCloud,
    grid: &[f64],
    max_dim: usize,
) -> Result<AuditBundle, WedgeError> {
    let cloud = &built.cloud;
    let decomposition = decomposition_audit(cloud, grid, max_dim)?;
    let mut attachment = Vec::new();
    let has_y = cloud.y_side().len() > 1;
    if has_y {
        for i in 0..cloud.c_side().len() {
            attachment.push((i, attachment_audit(cloud, i)?));
        }
    }
    Ok(AuditBundle {
        decomposition,
        attachment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{scenario_spec, ScenarioId, ScenarioParams};

    #[test]
    fn ambient_oracle_follows_the_model() {
        let built = scenario_spec(ScenarioId::CpRay, &ScenarioParams::default())
            .unwrap()
            .build()
            .unwrap();
        // ray model: ambient path stage exists at t = 0.6
        let ambient = build_complex(&built, ComplexKind::CechAmbient, 0.6, 2, 1e-9).unwrap();
        assert_eq!(ambient.count(1), 2);
        // intrinsic: still discrete at 0.6
        let intrinsic = build_complex(&built, ComplexKind::CechIntrinsic, 0.6, 2, 1e-9).unwrap();
        assert_eq!(intrinsic.count(1), 0);
    }

    #[test]
    fn hellinger_model_uses_the_orthant() {
        let built = scenario_spec(ScenarioId::CpHellingerDim2, &ScenarioParams::default())
            .unwrap()
            .build()
            .unwrap();
        // centers (1,0),(0,1) meet at sqrt-coordinate distance √2/2 below t
        let ambient = build_complex(&built, ComplexKind::CechAmbient, 0.75, 2, 1e-9).unwrap();
        assert!(ambient.count(1) >= 1);
        let intrinsic = build_complex(&built, ComplexKind::CechIntrinsic, 0.75, 2, 1e-9).unwrap();
        assert_eq!(intrinsic.count(1), 0);
    }

    #[test]
    fn audits_run_on_mixed_clouds() {
        let built = scenario_spec(ScenarioId::K22, &ScenarioParams::default())
            .unwrap()
            .build()
            .unwrap();
        let bundle = run_audits(&built, &[0.5, 1.5], 3).unwrap();
        assert_eq!(bundle.decomposition.scales.len(), 2);
        assert_eq!(bundle.attachment.len(), 3);
    }
}
