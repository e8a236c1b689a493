//! Dense Hermitian eigendecomposition, level-spacing r-statistics against
//! the GOE surmise, and eigenstate entanglement scans.

use crate::hamiltonian::{OperatorError, OperatorMatrix};
use crate::hilbert::SectorSpec;
use crate::scars::ScarTower;
use crate::Complex;
use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("need at least 3 levels after degeneracy filtering, got {0}")]
    TooFewLevels(usize),
    #[error("input vector is not normalized (|‖v‖ - 1| = {0:.3e})")]
    NotNormalized(f64),
    #[error("spectrum carries no eigenvectors")]
    MissingVectors,
    #[error("value {0} outside the domain [0, 1]")]
    OutOfRange(f64),
    #[error("invalid cut size {cut} for chain length {length}")]
    InvalidCut { cut: usize, length: usize },
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("eigensolver failure: {0}")]
    Solver(String),
}

/// Eigenvectors in the sector basis, matching the matrix realness.
pub enum EigVectors {
    Real(Array2<f64>),
    Complex(Array2<Complex>),
}

impl EigVectors {
    pub fn column(&self, i: usize) -> Vec<Complex> {
        match self {
            EigVectors::Real(m) => m.column(i).iter().map(|&x| Complex::new(x, 0.0)).collect(),
            EigVectors::Complex(m) => m.column(i).to_vec(),
        }
    }

    pub fn ncols(&self) -> usize {
        match self {
            EigVectors::Real(m) => m.ncols(),
            EigVectors::Complex(m) => m.ncols(),
        }
    }
}

/// Full spectrum of one sector block.
pub struct SpectrumResult {
    pub sector: SectorSpec,
    pub energies: Vec<f64>,
    pub vectors: Option<EigVectors>,
    /// Largest verified eigenpair residual `‖Hv - Ev‖ / ‖H‖`, when checked.
    pub residual: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct DiagonalizeOptions {
    /// Densification cap for sparse blocks.
    pub dense_cap: usize,
    /// Verify residuals/orthonormality exhaustively up to this dimension,
    /// on a sample of columns above it.
    pub verify_dim: usize,
}

impl Default for DiagonalizeOptions {
    fn default() -> Self {
        Self {
            dense_cap: 25_000,
            verify_dim: 1024,
        }
    }
}

/// Dense eigendecomposition of a Hermitian operator block.
pub fn diagonalize(
    op: &OperatorMatrix,
    want_vectors: bool,
) -> Result<SpectrumResult, SpectralError> {
    diagonalize_with(op, want_vectors, &DiagonalizeOptions::default())
}

pub fn diagonalize_with(
    op: &OperatorMatrix,
    want_vectors: bool,
    opts: &DiagonalizeOptions,
) -> Result<SpectrumResult, SpectralError> {
    let dim = op.dim();
    if dim > opts.dense_cap {
        return Err(OperatorError::SizeCap {
            dim,
            cap: opts.dense_cap,
        }
        .into());
    }
    if dim == 0 {
        return Ok(SpectrumResult {
            sector: op.basis.spec.clone(),
            energies: Vec::new(),
            vectors: None,
            residual: None,
        });
    }
    let (energies, vectors) = if op.storage.is_real() {
        let m = op.storage.to_dense_real().expect("real storage");
        let (e, v) = m
            .eigh(UPLO::Lower)
            .map_err(|e| SpectralError::Solver(e.to_string()))?;
        (e, EigVectors::Real(v))
    } else {
        let m = op.storage.to_dense_complex();
        let (e, v) = m
            .eigh(UPLO::Lower)
            .map_err(|e| SpectralError::Solver(e.to_string()))?;
        (e, EigVectors::Complex(v))
    };
    let energies: Vec<f64> = energies.to_vec();
    let residual = Some(verify_eigenpairs(op, &energies, &vectors, opts.verify_dim));
    Ok(SpectrumResult {
        sector: op.basis.spec.clone(),
        energies,
        vectors: want_vectors.then_some(vectors),
        residual,
    })
}

/// Residual and orthonormality check; exhaustive for small blocks, sampled
/// for large ones. Returns the largest relative residual seen.
fn verify_eigenpairs(
    op: &OperatorMatrix,
    energies: &[f64],
    vectors: &EigVectors,
    verify_dim: usize,
) -> f64 {
    let dim = energies.len();
    let scale = energies.iter().fold(1.0f64, |a, &e| a.max(e.abs()));
    let cols: Vec<usize> = if dim <= verify_dim {
        (0..dim).collect()
    } else {
        (0..16).map(|i| i * (dim - 1) / 15).collect()
    };
    let mut worst = 0.0f64;
    for &c in &cols {
        let v = vectors.column(c);
        let hv = op.storage.apply(&v);
        let mut res = 0.0f64;
        for (a, b) in hv.iter().zip(&v) {
            res += (a - b * energies[c]).norm_sqr();
        }
        worst = worst.max(res.sqrt() / scale);
    }
    for (pos, &c) in cols.iter().enumerate() {
        let vc = vectors.column(c);
        for &d in &cols[pos..] {
            let vd = vectors.column(d);
            let dot: Complex = vc.iter().zip(&vd).map(|(a, b)| a.conj() * b).sum();
            let target = if c == d { 1.0 } else { 0.0 };
            worst = worst.max((dot - Complex::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Level-spacing ratio statistics.
pub struct RStats {
    pub r_values: Vec<f64>,
    pub mean_r: f64,
    /// Left bin edges of 25 uniform bins on [0, 1], plus the right edge.
    pub bin_edges: Vec<f64>,
    pub densities: Vec<f64>,
}

pub const R_HISTOGRAM_BINS: usize = 25;

/// Degeneracy tolerance `1e-10 × spectral width`.
pub fn default_degeneracy_tol(energies: &[f64]) -> f64 {
    match (energies.first(), energies.last()) {
        (Some(lo), Some(hi)) => 1e-10 * (hi - lo).abs().max(f64::MIN_POSITIVE),
        _ => 0.0,
    }
}

/// `r_n = min(ΔE_n, ΔE_{n+1}) / max(ΔE_n, ΔE_{n+1})` on the sorted spectrum,
/// with exact degeneracies (gap < `degeneracy_tol`) collapsed first.
pub fn r_statistics(energies: &[f64], degeneracy_tol: f64) -> Result<RStats, SpectralError> {
    let r_values = r_values_of(energies, degeneracy_tol)?;
    Ok(stats_from_r_values(r_values))
}

/// Raw r-values only; handy when pooling sectors before histogramming.
pub fn r_values_of(energies: &[f64], degeneracy_tol: f64) -> Result<Vec<f64>, SpectralError> {
    let mut sorted = energies.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut levels: Vec<f64> = Vec::with_capacity(sorted.len());
    for e in sorted {
        match levels.last() {
            Some(&last) if e - last < degeneracy_tol => {}
            _ => levels.push(e),
        }
    }
    if levels.len() < 3 {
        return Err(SpectralError::TooFewLevels(levels.len()));
    }
    let gaps: Vec<f64> = levels.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(gaps
        .windows(2)
        .map(|g| g[0].min(g[1]) / g[0].max(g[1]))
        .collect())
}

pub fn stats_from_r_values(r_values: Vec<f64>) -> RStats {
    let mean_r = r_values.iter().sum::<f64>() / r_values.len() as f64;
    let nb = R_HISTOGRAM_BINS;
    let mut counts = vec![0usize; nb];
    for &r in &r_values {
        let b = ((r * nb as f64) as usize).min(nb - 1);
        counts[b] += 1;
    }
    let total = r_values.len() as f64;
    let width = 1.0 / nb as f64;
    let densities = counts.iter().map(|&c| c as f64 / total / width).collect();
    let bin_edges = (0..=nb).map(|i| i as f64 * width).collect();
    RStats {
        r_values,
        mean_r,
        bin_edges,
        densities,
    }
}

/// Folded GOE surmise density `P(r) = (27/4)(r + r²)/(1 + r + r²)^{5/2}`.
pub fn goe_surmise(r: f64) -> Result<f64, SpectralError> {
    if !(0.0..=1.0).contains(&r) {
        return Err(SpectralError::OutOfRange(r));
    }
    let q = 1.0 + r + r * r;
    Ok(6.75 * (r + r * r) / q.powf(2.5))
}

/// L¹ distance between a histogram density and the bin-averaged surmise.
pub fn l1_distance_to_goe(stats: &RStats) -> f64 {
    let nb = stats.densities.len();
    let width = 1.0 / nb as f64;
    let mut total = 0.0;
    for (b, &d) in stats.densities.iter().enumerate() {
        let (a, c) = (b as f64 * width, (b + 1) as f64 * width);
        let mid = 0.5 * (a + c);
        // Simpson's rule per bin
        let avg =
            (goe_surmise(a).unwrap() + 4.0 * goe_surmise(mid).unwrap() + goe_surmise(c).unwrap())
                / 6.0;
        total += (d - avg).abs() * width;
    }
    total
}

/// Von Neumann entropy of the reduced state on sites `1..cut` of a
/// normalized full-space vector (natural log).
pub fn bipartite_entropy(v: &[Complex], length: usize, cut: usize) -> Result<f64, SpectralError> {
    if cut == 0 || cut >= length {
        return Err(SpectralError::InvalidCut { cut, length });
    }
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(SpectralError::NotNormalized((norm - 1.0).abs()));
    }
    Ok(schmidt_entropy(v, length, cut))
}

/// Entropy from the Schmidt spectrum of the `3^cut × 3^{L-cut}` reshape;
/// callers guarantee normalization.
pub(crate) fn schmidt_entropy(v: &[Complex], length: usize, cut: usize) -> f64 {
    let da = 3usize.pow(cut as u32);
    let db = 3usize.pow((length - cut) as u32);
    // site 0 is the least significant digit: index = a + da·b
    let small_a = da <= db;
    let rows = if small_a { da } else { db };
    let mut rho = Array2::<Complex>::zeros((rows, rows));
    if small_a {
        for b in 0..db {
            let block = &v[da * b..da * (b + 1)];
            for (i, vi) in block.iter().enumerate() {
                if vi.norm_sqr() == 0.0 {
                    continue;
                }
                for (j, vj) in block.iter().enumerate() {
                    rho[[i, j]] += vi * vj.conj();
                }
            }
        }
    } else {
        for a in 0..da {
            for i in 0..db {
                let vi = v[a + da * i];
                if vi.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..db {
                    rho[[i, j]] += vi * v[a + da * j].conj();
                }
            }
        }
    }
    let eig: Array1<f64> = rho
        .eigh(UPLO::Lower)
        .expect("reduced density matrix diagonalization")
        .0;
    entropy_from_probabilities(eig.iter().copied())
}

pub(crate) fn entropy_from_probabilities(ps: impl Iterator<Item = f64>) -> f64 {
    let mut s = 0.0;
    for p in ps {
        if p > 1e-14 {
            s -= p * p.ln();
        }
    }
    s
}

/// Mean half-chain entropy of a random pure state: `(L/2)·ln 3 - 1/2`.
pub fn page_value(length: usize) -> f64 {
    (length as f64 / 2.0) * 3.0f64.ln() - 0.5
}

/// One point of an eigenstate entanglement scan.
pub struct EeScanPoint {
    pub energy: f64,
    pub entropy: f64,
    /// Largest squared overlap with a scar-tower state, when supplied.
    pub scar_overlap: Option<f64>,
}

/// Half-chain entanglement of every eigenstate in a sector spectrum.
///
/// Eigenvectors are lifted to the full Hilbert space before the Schmidt cut;
/// when a [`ScarTower`] is supplied, each point records its largest squared
/// overlap with a tower state.
pub fn ee_scan(
    spectrum: &SpectrumResult,
    basis: &crate::hilbert::SectorBasis,
    cut: usize,
    tower: Option<&ScarTower>,
) -> Result<Vec<EeScanPoint>, SpectralError> {
    let vectors = spectrum
        .vectors
        .as_ref()
        .ok_or(SpectralError::MissingVectors)?;
    let length = basis.length();
    if cut == 0 || cut >= length {
        return Err(SpectralError::InvalidCut { cut, length });
    }
    let mut points = Vec::with_capacity(spectrum.energies.len());
    for (i, &energy) in spectrum.energies.iter().enumerate() {
        let sector_vec = vectors.column(i);
        let full = basis.lift(&sector_vec);
        let entropy = schmidt_entropy(&full, length, cut);
        let scar_overlap = tower.map(|t| {
            (0..t.len())
                .map(|n| {
                    let dot: Complex = t
                        .state_entries(n)
                        .iter()
                        .map(|&(idx, a)| full[idx].conj() * a)
                        .sum();
                    dot.norm_sqr()
                })
                .fold(0.0, f64::max)
        });
        points.push(EeScanPoint {
            energy,
            entropy,
            scar_overlap,
        });
    }
    Ok(points)
}
