//! Simplicial homology over GF(2): boundary matrices, Betti numbers,
//! Euler characteristic, and Betti curves over scale grids.
//!
//! Betti numbers come from dense bit-matrix Gaussian elimination,
//! βₖ = dim ker ∂ₖ − rank ∂ₖ₊₁, and every computation is cross-checked:
//! ∂∂ = 0, β₀ against union-find on the 1-skeleton, the graph formula
//! β₁ = E − V + β₀ for 1-dimensional complexes, and the Euler identity
//! Σ(−1)ᵏ·#k-simplices = Σ(−1)ᵏβₖ. Coefficients are GF(2) only; for
//! graphs and full simplices these ranks agree with the integral ones.

use crate::complex::{Simplex, SimplicialComplex, MAX_SIMPLICES_PER_DIM};
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error("boundary dimension {k} out of range (top dimension {top})")]
    DimensionOutOfRange { k: usize, top: usize },
    #[error("complex too large for dense elimination: {count} simplices in dimension {dim} (cap {MAX_SIMPLICES_PER_DIM})")]
    TooLarge { dim: usize, count: usize },
    #[error("complex is not face-closed at {simplex:?}")]
    NotFaceClosed { simplex: Vec<usize> },
    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
    #[error("scale grid is empty")]
    EmptyGrid,
    #[error(transparent)]
    Complex(#[from] crate::complex::ComplexError),
    #[error(transparent)]
    Wedge(#[from] crate::wedge::WedgeError),
}

/// Dense GF(2) matrix, one bit per entry, rows packed into u64 blocks.
#[derive(Debug, Clone)]
struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    fn zero(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    fn set(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] |= 1 << (c % 64);
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    fn xor_rows(&mut self, target: usize, source: usize) {
        let (t, s) = (target * self.words, source * self.words);
        for k in 0..self.words {
            let v = self.data[s + k];
            self.data[t + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.words {
            self.data.swap(a * self.words + k, b * self.words + k);
        }
    }

    /// Rank by row elimination.
    fn rank(&mut self) -> usize {
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            self.swap_rows(pivot, rank);
            for r in 0..self.rows {
                if r != rank && self.get(r, col) {
                    self.xor_rows(r, rank);
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

/// The GF(2) boundary map ∂ₖ from k-simplices to (k−1)-simplices.
#[derive(Debug, Clone)]
pub struct BoundaryMatrix {
    pub rows: Vec<Simplex>,
    pub cols: Vec<Simplex>,
    matrix: BitMatrix,
}

impl BoundaryMatrix {
    pub fn entry(&self, row: usize, col: usize) -> bool {
        self.matrix.get(row, col)
    }

    pub fn rank(&self) -> usize {
        self.matrix.clone().rank()
    }
}

fn sorted_simplices(complex: &SimplicialComplex, dim: usize) -> Vec<Simplex> {
    complex.simplices(dim).cloned().collect()
}

/// Build ∂ₖ; each column carries exactly k+1 bits, the facets of its
/// k-simplex, all of which must be present in the complex.
pub fn boundary(complex: &SimplicialComplex, k: usize) -> Result<BoundaryMatrix, HomologyError> {
    let top = complex.top_dim().unwrap_or(0);
    if k == 0 || k > complex.max_dim() {
        return Err(HomologyError::DimensionOutOfRange { k, top });
    }
    let rows = sorted_simplices(complex, k - 1);
    let cols = sorted_simplices(complex, k);
    for (dim, list) in [(k - 1, &rows), (k, &cols)] {
        if list.len() > MAX_SIMPLICES_PER_DIM {
            return Err(HomologyError::TooLarge {
                dim,
                count: list.len(),
            });
        }
    }
    let index: HashMap<&Simplex, usize> = rows.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut matrix = BitMatrix::zero(rows.len(), cols.len());
    for (c, simplex) in cols.iter().enumerate() {
        for face in simplex.facets() {
            let Some(&r) = index.get(&face) else {
                return Err(HomologyError::NotFaceClosed {
                    simplex: simplex.vertices().to_vec(),
                });
            };
            matrix.set(r, c);
        }
    }
    Ok(BoundaryMatrix { rows, cols, matrix })
}

/// Verify ∂ₖ₋₁ ∘ ∂ₖ = 0 entrywise over GF(2).
pub fn boundary_squares_to_zero(
    lower: &BoundaryMatrix,
    upper: &BoundaryMatrix,
) -> bool {
    // composition column by column: the boundary of each upper column must
    // cancel out
    for c in 0..upper.cols.len() {
        let mut acc = vec![0u64; lower.rows.len().div_ceil(64).max(1)];
        for mid in 0..upper.rows.len() {
            if upper.matrix.get(mid, c) {
                for r in 0..lower.rows.len() {
                    if lower.matrix.get(r, mid) {
                        acc[r / 64] ^= 1 << (r % 64);
                    }
                }
            }
        }
        if acc.iter().any(|&w| w != 0) {
            return false;
        }
    }
    true
}

fn connected_components(complex: &SimplicialComplex) -> usize {
    let vertices = complex.vertex_ids();
    if vertices.is_empty() {
        return 0;
    }
    let index: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for edge in complex.simplices(1) {
        let a = find(&mut parent, index[&edge.vertices()[0]]);
        let b = find(&mut parent, index[&edge.vertices()[1]]);
        if a != b {
            parent[a] = b;
        }
    }
    (0..vertices.len())
        .filter(|&i| find(&mut parent, i) == i)
        .count()
}

/// Certificate that a complex is contractible for combinatorial reasons.
/// Betti numbers alone never set this flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ContractibleCert {
    /// The full simplex on its vertex set (within the dimension cap).
    FullSimplex,
    /// A cone: some vertex lies in every maximal simplex.
    Cone { apex: usize },
    /// No certificate.
    None,
}

/// Betti numbers of one complex, with the cross-checked bookkeeping.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BettiVector {
    pub betti: Vec<usize>,
    pub simplex_counts: Vec<usize>,
    pub euler: i64,
    pub contractible: ContractibleCert,
}

impl BettiVector {
    pub fn b(&self, k: usize) -> usize {
        self.betti.get(k).copied().unwrap_or(0)
    }
}

/// Betti numbers over GF(2) by Gaussian elimination:
/// βₖ = (#k-simplices − rank ∂ₖ) − rank ∂ₖ₊₁.
pub fn betti(complex: &SimplicialComplex) -> Result<BettiVector, HomologyError> {
    let counts = if complex.total() == 0 {
        Vec::new()
    } else {
        complex.counts()
    };
    let top = counts.len().saturating_sub(1);
    let mut ranks = vec![0usize; counts.len() + 1]; // rank ∂ₖ, k = 0 .. top+1
    let mut boundaries: Vec<Option<BoundaryMatrix>> = vec![None; counts.len() + 1];
    for k in 1..=top {
        let b = boundary(complex, k)?;
        ranks[k] = b.rank();
        boundaries[k] = Some(b);
    }
    for k in 2..=top {
        if let (Some(lower), Some(upper)) = (&boundaries[k - 1], &boundaries[k]) {
            if !boundary_squares_to_zero(lower, upper) {
                return Err(HomologyError::CrossCheck(format!(
                    "∂_{} ∘ ∂_{} is nonzero",
                    k - 1,
                    k
                )));
            }
        }
    }

    let mut betti = Vec::with_capacity(counts.len());
    for (k, &n_k) in counts.iter().enumerate() {
        let rank_k = ranks[k];
        let rank_k1 = if k < top { ranks[k + 1] } else { 0 };
        betti.push(n_k - rank_k - rank_k1);
    }

    // β₀ must match the number of connected components of the 1-skeleton.
    let components = connected_components(complex);
    if betti.first().copied().unwrap_or(0) != components {
        return Err(HomologyError::CrossCheck(format!(
            "β₀ = {} but union-find counts {} components",
            betti.first().copied().unwrap_or(0),
            components
        )));
    }
    // For graphs, β₁ must match E − V + β₀.
    if top <= 1 && !counts.is_empty() {
        let v = counts[0] as i64;
        let e = counts.get(1).copied().unwrap_or(0) as i64;
        let expected = e - v + components as i64;
        let got = betti.get(1).copied().unwrap_or(0) as i64;
        if got != expected {
            return Err(HomologyError::CrossCheck(format!(
                "graph formula gives β₁ = {expected}, elimination gives {got}"
            )));
        }
    }
    // Euler characteristic both ways.
    let euler = complex.euler_characteristic();
    let euler_from_betti: i64 = betti
        .iter()
        .enumerate()
        .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum();
    if euler != euler_from_betti {
        return Err(HomologyError::CrossCheck(format!(
            "χ from counts is {euler}, from Betti numbers {euler_from_betti}"
        )));
    }

    let contractible = if complex.is_full_simplex() {
        ContractibleCert::FullSimplex
    } else if let Some(apex) = complex.cone_apex() {
        ContractibleCert::Cone { apex }
    } else {
        ContractibleCert::None
    };

    Ok(BettiVector {
        betti,
        simplex_counts: counts,
        euler,
        contractible,
    })
}

/// How the complexes of a sweep were produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BuildPath {
    /// Brute force on a merged distance table.
    Direct,
    /// Assembled from the wedge decomposition.
    WedgeDecomposition,
}

/// Which filtration a sweep follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComplexKind {
    Rips,
    CechIntrinsic,
    CechAmbient,
}

impl std::fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ComplexKind::Rips => write!(f, "rips"),
            ComplexKind::CechIntrinsic => write!(f, "cech-intrinsic"),
            ComplexKind::CechAmbient => write!(f, "cech-ambient"),
        }
    }
}

/// Betti numbers at one scale.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BettiEntry {
    pub t: f64,
    #[serde(flatten)]
    pub vector: BettiVector,
    /// Set when the Betti vector differs from the previous grid scale.
    pub changed: bool,
}

/// Betti numbers per dimension per scale, with provenance.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BettiProfile {
    pub kind: ComplexKind,
    pub path: BuildPath,
    pub entries: Vec<BettiEntry>,
}

/// Betti vectors agree up to trailing zeros.
pub fn same_betti(a: &[usize], b: &[usize]) -> bool {
    let len = a.len().max(b.len());
    (0..len).all(|k| a.get(k).copied().unwrap_or(0) == b.get(k).copied().unwrap_or(0))
}

/// Sweep a scale grid with an arbitrary complex builder. The grid is
/// sorted and deduplicated; entries flag the scales where the Betti
/// vector changes.
pub fn betti_sweep<E>(
    grid: &[f64],
    kind: ComplexKind,
    path: BuildPath,
    mut build: impl FnMut(f64) -> Result<SimplicialComplex, E>,
) -> Result<BettiProfile, HomologyError>
where
    HomologyError: From<E>,
{
    if grid.is_empty() {
        return Err(HomologyError::EmptyGrid);
    }
    let mut scales: Vec<f64> = grid.to_vec();
    scales.sort_by(|a, b| a.partial_cmp(b).unwrap());
    scales.dedup();
    let mut entries: Vec<BettiEntry> = Vec::with_capacity(scales.len());
    for t in scales {
        let complex = build(t)?;
        let vector = betti(&complex)?;
        let changed = entries
            .last()
            .is_none_or(|prev| !same_betti(&prev.vector.betti, &vector.betti));
        entries.push(BettiEntry { t, vector, changed });
    }
    Ok(BettiProfile {
        kind,
        path,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::rips;
    use crate::metric::FiniteMetric;

    fn full_triangle() -> SimplicialComplex {
        let mut c = SimplicialComplex::empty(2);
        c.insert_with_faces(Simplex::new(vec![0, 1, 2]).unwrap());
        c
    }

    fn four_cycle() -> SimplicialComplex {
        let mut c = SimplicialComplex::empty(2);
        for (a, b) in [(0, 1), (1, 2), (2, 3), (0, 3)] {
            c.insert_with_faces(Simplex::new(vec![a, b]).unwrap());
        }
        c
    }

    fn complete_bipartite(m: usize, n: usize) -> SimplicialComplex {
        let mut c = SimplicialComplex::empty(2);
        for a in 0..m {
            for b in 0..n {
                c.insert_with_faces(Simplex::new(vec![a, m + b]).unwrap());
            }
        }
        c
    }

    #[test]
    fn triangle_boundary_rank() {
        let complex = full_triangle();
        let d1 = boundary(&complex, 1).unwrap();
        assert_eq!(d1.rows.len(), 3);
        assert_eq!(d1.cols.len(), 3);
        assert_eq!(d1.rank(), 2);
        let d2 = boundary(&complex, 2).unwrap();
        assert!(boundary_squares_to_zero(&d1, &d2));
        assert!(boundary(&complex, 0).is_err());
    }

    #[test]
    fn four_cycle_rank_and_betti() {
        let complex = four_cycle();
        let d1 = boundary(&complex, 1).unwrap();
        assert_eq!(d1.rank(), 3);
        let b = betti(&complex).unwrap();
        assert_eq!(b.betti, vec![1, 1]);
        assert_eq!(b.euler, 0);
        assert_eq!(b.contractible, ContractibleCert::None);
    }

    #[test]
    fn complete_bipartite_betti() {
        let b22 = betti(&complete_bipartite(2, 2)).unwrap();
        assert_eq!(b22.betti, vec![1, 1]);
        let b34 = betti(&complete_bipartite(3, 4)).unwrap();
        assert_eq!(b34.betti, vec![1, 6]);
    }

    #[test]
    fn full_simplex_is_acyclic() {
        let mut c = SimplicialComplex::empty(3);
        c.insert_with_faces(Simplex::new(vec![0, 1, 2, 3]).unwrap());
        let b = betti(&c).unwrap();
        assert_eq!(b.betti, vec![1, 0, 0, 0]);
        assert_eq!(b.contractible, ContractibleCert::FullSimplex);
    }

    #[test]
    fn sweep_flags_changes() {
        let metric = FiniteMetric::new(
            vec![
                vec![0.0, 1.0, 2.0],
                vec![1.0, 0.0, 1.0],
                vec![2.0, 1.0, 0.0],
            ],
            None,
        )
        .unwrap();
        let profile = betti_sweep(
            &[0.5, 1.0, 2.0],
            ComplexKind::Rips,
            BuildPath::Direct,
            |t| rips(&metric, t, 2),
        )
        .unwrap();
        assert_eq!(profile.entries[0].vector.betti, vec![3]);
        assert_eq!(profile.entries[1].vector.betti, vec![1, 0]);
        assert_eq!(profile.entries[2].vector.betti, vec![1, 0, 0]);
        assert!(profile.entries[1].changed);
        assert!(!profile.entries[2].changed);
        let empty: Result<_, HomologyError> = betti_sweep(
            &[],
            ComplexKind::Rips,
            BuildPath::Direct,
            |t| rips(&metric, t, 2),
        );
        assert!(matches!(empty, Err(HomologyError::EmptyGrid)));
    }

    #[test]
    fn empty_complex() {
        let c = SimplicialComplex::empty(2);
        let b = betti(&c).unwrap();
        assert!(b.betti.is_empty());
        assert_eq!(b.euler, 0);
    }
}
