//! Machine-readable run reports: JSON with the canonical cloud spec (so a
//! report can be fed back to `run`/`validate`), the full distance table,
//! radial data, per-scale simplex lists and Betti vectors, and the audit
//! results when requested.

use bk_core::cloudspec::{BuiltCloud, CloudSpec};
use bk_core::complex::SimplicialComplex;
use bk_core::homology::{BettiEntry, BettiProfile, ComplexKind};
use bk_core::metric::Side;
use bk_core::models::ScalarCounterexampleReport;
use bk_core::pipeline::AuditBundle;
use bk_core::verify::KswReport;
use bk_core::wedge::WedgeVertexMap;
use serde::Serialize;

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VertexOut {
    pub id: usize,
    pub side: Side,
    pub label: String,
    pub radial: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComplexOut {
    pub t: f64,
    pub kind: ComplexKind,
    /// Simplices grouped by dimension, each a sorted vertex-id list.
    pub simplices: Vec<Vec<Vec<usize>>>,
    pub simplex_counts: Vec<usize>,
    pub betti: Vec<usize>,
    pub euler: i64,
    pub contractible: bk_core::homology::ContractibleCert,
    pub changed: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RadialOut {
    pub r_c: Vec<f64>,
    pub r_y: Vec<f64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScaleAuditOut {
    pub t: f64,
    pub simplices: usize,
    pub cross_edges: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AttachmentOut {
    pub c_vertex: usize,
    pub lower: f64,
    pub upper: f64,
    pub cap: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AuditOut {
    /// Every scale passed the decomposition, sandwich, and cross-edge
    /// assertions (failures abort the run instead).
    pub decomposition_verified: bool,
    pub scales: Vec<ScaleAuditOut>,
    pub attachment: Vec<AttachmentOut>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    /// Canonical spec; feeding this object (or the whole report) back to
    /// `run --file` reproduces the distance table bit for bit.
    pub cloud: CloudSpec,
    pub vertices: Vec<VertexOut>,
    pub distance_table: Vec<Vec<f64>>,
    pub radial_profile: RadialOut,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub complexes: Vec<ComplexOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audits: Option<AuditOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anchor_report: Option<ScalarCounterexampleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ksw_report: Option<KswReport>,
}

impl Report {
    pub fn new(scenario: Option<String>, built: &BuiltCloud) -> Result<Report, String> {
        let cloud = &built.cloud;
        let table = cloud.full_distance_table().map_err(|e| e.to_string())?;
        let map = WedgeVertexMap::of(cloud);
        let vertices = map
            .points
            .iter()
            .enumerate()
            .map(|(id, &p)| VertexOut {
                id,
                side: p.side,
                label: cloud.point_label(p),
                radial: map.radial[id],
            })
            .collect();
        Ok(Report {
            scenario,
            warnings: built.warnings.clone(),
            cloud: CloudSpec::canonical(cloud),
            vertices,
            distance_table: table.rows(),
            radial_profile: RadialOut {
                r_c: (0..cloud.c_side().len()).map(|i| cloud.r_c(i)).collect(),
                r_y: (0..cloud.y_side().len()).map(|j| cloud.r_y(j)).collect(),
            },
            complexes: Vec::new(),
            audits: None,
            anchor_report: None,
            ksw_report: None,
        })
    }

    pub fn push_profile(&mut self, profile: &BettiProfile, complexes: &[(f64, SimplicialComplex)]) {
        for (entry, (t, complex)) in profile.entries.iter().zip(complexes) {
            debug_assert_eq!(entry.t, *t);
            self.complexes.push(complex_out(entry, profile.kind, complex));
        }
    }

    pub fn set_audits(&mut self, bundle: &AuditBundle) {
        self.audits = Some(AuditOut {
            decomposition_verified: true,
            scales: bundle
                .decomposition
                .scales
                .iter()
                .map(|s| ScaleAuditOut {
                    t: s.t,
                    simplices: s.simplices,
                    cross_edges: s.cross_edges,
                })
                .collect(),
            attachment: bundle
                .attachment
                .iter()
                .map(|(i, a)| AttachmentOut {
                    c_vertex: *i,
                    lower: a.lower,
                    upper: a.upper,
                    cap: a.cap,
                })
                .collect(),
        });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// Betti curve rows: `t,beta0,beta1,...` padded to a common width.
    pub fn betti_csv(&self) -> String {
        let width = self
            .complexes
            .iter()
            .map(|c| c.betti.len())
            .max()
            .unwrap_or(0);
        let mut out = String::from("t");
        for k in 0..width {
            out.push_str(&format!(",beta{k}"));
        }
        out.push('\n');
        for c in &self.complexes {
            out.push_str(&format!("{}", c.t));
            for k in 0..width {
                out.push_str(&format!(",{}", c.betti.get(k).copied().unwrap_or(0)));
            }
            out.push('\n');
        }
        out
    }

    /// Distance table rows with a label header.
    pub fn table_csv(&self) -> String {
        let mut out = String::from("label");
        for v in &self.vertices {
            out.push_str(&format!(",{}", v.label));
        }
        out.push('\n');
        for (v, row) in self.vertices.iter().zip(&self.distance_table) {
            out.push_str(&v.label);
            for d in row {
                out.push_str(&format!(",{d}"));
            }
            out.push('\n');
        }
        out
    }
}

fn complex_out(entry: &BettiEntry, kind: ComplexKind, complex: &SimplicialComplex) -> ComplexOut {
    let top = complex.top_dim().map_or(0, |d| d);
    let simplices = (0..=top)
        .map(|d| {
            complex
                .simplices(d)
                .map(|s| s.vertices().to_vec())
                .collect()
        })
        .collect();
    ComplexOut {
        t: entry.t,
        kind,
        simplices,
        simplex_counts: entry.vector.simplex_counts.clone(),
        betti: entry.vector.betti.clone(),
        euler: entry.vector.euler,
        contractible: entry.vector.contractible,
        changed: entry.changed,
    }
}
