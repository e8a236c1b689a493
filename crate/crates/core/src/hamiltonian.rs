//! Assembly of the spin-1 XY Hamiltonian, its perturbation variants, the
//! twisted-boundary XY chain and the twisted su(2) generators.
//!
//! Operators are described by their action on encoded configurations and
//! assembled into a sector basis column by column: applying a term to the
//! orbit representative and folding the images back through the basis lookup
//! gives `H[i,j] = √|O_j| Σ_d (H|rep_j⟩)[d] ⟨v_i|d⟩`.

use crate::hilbert::{magnetization_of, SectorBasis, Sign, SpinCode};
use crate::matrix::{CsrMatrix, MatrixStorage};
use crate::Complex;
use ndarray::Array2;
use std::io::Write;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("operator dimension {op} does not match vector length {vec}")]
    DimensionMismatch { op: usize, vec: usize },
    #[error("basis length {basis} does not match spec length {spec}")]
    LengthMismatch { basis: usize, spec: usize },
    #[error("invalid operator spec: {0}")]
    Spec(String),
    #[error("dense form of dimension {dim} exceeds the cap {cap}")]
    SizeCap { dim: usize, cap: usize },
}

/// Which perturbation multiplies ε in the Hamiltonian.
///
/// All four leave `|ψ_x⟩` a zero-energy eigenstate while breaking the
/// twisted su(2) structure of the bare XY chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Perturbation {
    /// No perturbation (bare XY chain plus Zeeman term).
    None,
    /// `Σ_i (S^+_i)²(S^-_{i+1})² + h.c.` — hops a bimagnon pair across a bond.
    #[default]
    PairExchange,
    /// `i Σ_i [(S^+_i)²(S^-_{i+1})² - h.c.]` — the current-like partner of
    /// the pair exchange.
    PairCurrent,
    /// `Σ_i [(S^z_i)² S^z_{i+1} - S^z_i (S^z_{i+1})²]`.
    ZImbalance,
    /// `Σ_i [(S^z_i)²(S^z_{i+1})² - S^z_i S^z_{i+1}]`.
    ZCorrelation,
}

/// Boundary condition of [`HamiltonianSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Periodic,
    /// Magnetization-dependent phase on the wrap bond; only meaningful for
    /// the bare XY chain (see [`build_twisted_xy`]).
    Twisted(Sign),
}

/// Parameters of `H = J H_XY + ε V + h Σ_i S^z_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    pub length: usize,
    pub coupling: f64,
    pub epsilon: f64,
    pub field: f64,
    pub perturbation: Perturbation,
    pub boundary: Boundary,
}

impl HamiltonianSpec {
    /// The standard parameter point `(J, ε) = (1, 0.2)` at a given field.
    pub fn standard(length: usize, field: f64) -> Self {
        Self {
            length,
            coupling: 1.0,
            epsilon: 0.2,
            field,
            perturbation: Perturbation::PairExchange,
            boundary: Boundary::Periodic,
        }
    }

    /// Bare XY chain (ε = 0, h = 0).
    pub fn bare_xy(length: usize) -> Self {
        Self {
            length,
            coupling: 1.0,
            epsilon: 0.0,
            field: 0.0,
            perturbation: Perturbation::None,
            boundary: Boundary::Periodic,
        }
    }
}

/// An operator described by its action on encoded configurations.
pub trait CodeOperator {
    fn length(&self) -> usize;
    /// True when every matrix element is real.
    fn is_real(&self) -> bool;
    /// Visit the images of `|code⟩` with their amplitudes.
    fn for_each_image(&self, code: SpinCode, f: &mut dyn FnMut(SpinCode, Complex));
}

fn digit(code: SpinCode, site: usize) -> u64 {
    (code / 3u64.pow(site as u32)) % 3
}

fn with_digit(code: SpinCode, site: usize, d: u64) -> SpinCode {
    let p = 3u64.pow(site as u32);
    let old = (code / p) % 3;
    (code as i64 + (d as i64 - old as i64) * p as i64) as SpinCode
}

fn with_digits(code: SpinCode, site_a: usize, da: u64, site_b: usize, db: u64) -> SpinCode {
    with_digit(with_digit(code, site_a, da), site_b, db)
}

struct ChainTerms {
    spec: HamiltonianSpec,
}

impl CodeOperator for ChainTerms {
    fn length(&self) -> usize {
        self.spec.length
    }

    fn is_real(&self) -> bool {
        self.spec.perturbation != Perturbation::PairCurrent || self.spec.epsilon == 0.0
    }

    fn for_each_image(&self, code: SpinCode, f: &mut dyn FnMut(SpinCode, Complex)) {
        let l = self.spec.length;
        let j = self.spec.coupling;
        let eps = self.spec.epsilon;
        let mut diagonal = self.spec.field * magnetization_of(code, l) as f64;
        for i in 0..l {
            let inext = (i + 1) % l;
            let di = digit(code, i);
            let dj = digit(code, inext);
            // XY hop: matrix element J for every allowed S^+S^- move
            if j != 0.0 {
                if di < 2 && dj > 0 {
                    f(with_digits(code, i, di + 1, inext, dj - 1), Complex::new(j, 0.0));
                }
                if di > 0 && dj < 2 {
                    f(with_digits(code, i, di - 1, inext, dj + 1), Complex::new(j, 0.0));
                }
            }
            if eps != 0.0 {
                match self.spec.perturbation {
                    Perturbation::None => {}
                    Perturbation::PairExchange => {
                        // (S^+)²(S^-)² carries 2·2 = 4
                        if di == 0 && dj == 2 {
                            f(with_digits(code, i, 2, inext, 0), Complex::new(4.0 * eps, 0.0));
                        }
                        if di == 2 && dj == 0 {
                            f(with_digits(code, i, 0, inext, 2), Complex::new(4.0 * eps, 0.0));
                        }
                    }
                    Perturbation::PairCurrent => {
                        if di == 0 && dj == 2 {
                            f(with_digits(code, i, 2, inext, 0), Complex::new(0.0, 4.0 * eps));
                        }
                        if di == 2 && dj == 0 {
                            f(with_digits(code, i, 0, inext, 2), Complex::new(0.0, -4.0 * eps));
                        }
                    }
                    Perturbation::ZImbalance => {
                        let (mi, mj) = (di as f64 - 1.0, dj as f64 - 1.0);
                        diagonal += eps * (mi * mi * mj - mi * mj * mj);
                    }
                    Perturbation::ZCorrelation => {
                        let (mi, mj) = (di as f64 - 1.0, dj as f64 - 1.0);
                        diagonal += eps * (mi * mi * mj * mj - mi * mj);
                    }
                }
            }
        }
        if diagonal != 0.0 {
            f(code, Complex::new(diagonal, 0.0));
        }
    }
}

struct TwistedXyTerms {
    length: usize,
    couplings: Vec<f64>,
    phase_sign: Sign,
}

impl TwistedXyTerms {
    fn wrap_phase(&self, m: i64) -> Complex {
        // e^{s·iπM/2} attached to S_L^+ S_1^-
        let arg = self.phase_sign.value() * std::f64::consts::FRAC_PI_2 * m as f64;
        Complex::from_polar(1.0, arg)
    }
}

impl CodeOperator for TwistedXyTerms {
    fn length(&self) -> usize {
        self.length
    }

    fn is_real(&self) -> bool {
        false
    }

    fn for_each_image(&self, code: SpinCode, f: &mut dyn FnMut(SpinCode, Complex)) {
        let l = self.length;
        for i in 0..l - 1 {
            let j = self.couplings[i];
            if j == 0.0 {
                continue;
            }
            let di = digit(code, i);
            let dj = digit(code, i + 1);
            if di < 2 && dj > 0 {
                f(with_digits(code, i, di + 1, i + 1, dj - 1), Complex::new(j, 0.0));
            }
            if di > 0 && dj < 2 {
                f(with_digits(code, i, di - 1, i + 1, dj + 1), Complex::new(j, 0.0));
            }
        }
        // wrap bond with the magnetization-dependent phase; the hop conserves
        // M, so evaluating the phase on the source configuration is exact
        let jw = self.couplings[l - 1];
        if jw == 0.0 {
            return;
        }
        let m = magnetization_of(code, l);
        let phase = self.wrap_phase(m);
        let dl = digit(code, l - 1);
        let d0 = digit(code, 0);
        if dl < 2 && d0 > 0 {
            f(with_digits(code, l - 1, dl + 1, 0, d0 - 1), phase * jw);
        }
        if dl > 0 && d0 < 2 {
            f(with_digits(code, l - 1, dl - 1, 0, d0 + 1), phase.conj() * jw);
        }
    }
}

struct TwistedRaiseTerms {
    length: usize,
}

impl CodeOperator for TwistedRaiseTerms {
    fn length(&self) -> usize {
        self.length
    }

    fn is_real(&self) -> bool {
        true
    }

    fn for_each_image(&self, code: SpinCode, f: &mut dyn FnMut(SpinCode, Complex)) {
        // s^+_T = Σ_i (1/2)(S^+_i)² U_i with the string U_i = Π_{l<i}(1 - 2(S^z_l)²)
        let mut string = 1.0f64;
        for i in 0..self.length {
            let d = digit(code, i);
            if d == 0 {
                // (1/2)(S^+)²|-1⟩ = |+1⟩
                f(with_digit(code, i, 2), Complex::new(string, 0.0));
            }
            string *= if d == 1 { 1.0 } else { -1.0 };
        }
    }
}

/// Hermitian operator expressed in a sector basis.
pub struct OperatorMatrix {
    pub basis: Arc<SectorBasis>,
    pub storage: MatrixStorage,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.storage.dim()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex]) -> Result<Vec<Complex>, OperatorError> {
        if v.len() != self.dim() {
            return Err(OperatorError::DimensionMismatch {
                op: self.dim(),
                vec: v.len(),
            });
        }
        Ok(self.storage.apply(v))
    }

    /// `⟨v|H|v⟩ / ⟨v|v⟩`.
    pub fn expectation(&self, v: &[Complex]) -> Result<f64, OperatorError> {
        let hv = self.apply(v)?;
        let num: Complex = v.iter().zip(&hv).map(|(a, b)| a.conj() * b).sum();
        let den: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        Ok(num.re / den)
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.storage.hermiticity_error()
    }

    /// Text export, one `row col re im` line per stored entry.
    pub fn write_triplets(&self, w: &mut impl Write) -> std::io::Result<()> {
        let mut err = None;
        self.storage.for_each_entry(|r, c, v| {
            if err.is_none() {
                if let Err(e) = writeln!(w, "{} {} {:.17e} {:.17e}", r, c, v.re, v.im) {
                    err = Some(e);
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// Assembly controls; blocks above `dense_threshold` go to sparse storage.
#[derive(Debug, Clone)]
pub struct AssemblyOptions {
    pub dense_threshold: usize,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        Self {
            dense_threshold: 2000,
        }
    }
}

fn assemble(
    basis: &Arc<SectorBasis>,
    op: &dyn CodeOperator,
    opts: &AssemblyOptions,
) -> OperatorMatrix {
    let dim = basis.dim();
    let real = op.is_real() && basis.phases_are_real();
    let dense = dim <= opts.dense_threshold;

    // column j from the representative alone:
    // H[i,j] = sqrt(|O_j|) Σ_d w_d conj(amp_i[d]) with w = H|rep_j⟩
    let mut columns: Vec<Vec<(u32, Complex)>> = vec![Vec::new(); dim];
    for j in 0..dim {
        let rep = basis.representative(j);
        let scale = (basis.orbit_size(j) as f64).sqrt();
        let col = &mut columns[j];
        op.for_each_image(rep, &mut |image, amp| {
            if let Some((i, a)) = basis.amplitude_of(image) {
                col.push((i as u32, amp * a.conj() * scale));
            }
        });
    }

    let storage = if dense {
        if real {
            let mut m = Array2::<f64>::zeros((dim, dim));
            for (j, col) in columns.iter().enumerate() {
                for &(i, v) in col {
                    m[[i as usize, j]] += v.re;
                }
            }
            MatrixStorage::DenseReal(m)
        } else {
            let mut m = Array2::<Complex>::zeros((dim, dim));
            for (j, col) in columns.iter().enumerate() {
                for &(i, v) in col {
                    m[[i as usize, j]] += v;
                }
            }
            MatrixStorage::DenseComplex(m)
        }
    } else {
        // transpose columns into rows; Hermiticity makes row i the conjugate
        // of column i, but we assemble directly to keep roundoff symmetric
        let mut rows: Vec<Vec<(u32, Complex)>> = vec![Vec::new(); dim];
        for (j, col) in columns.into_iter().enumerate() {
            for (i, v) in col {
                rows[i as usize].push((j as u32, v));
            }
        }
        if real {
            let rows = rows
                .into_iter()
                .map(|r| r.into_iter().map(|(c, v)| (c, v.re)).collect())
                .collect();
            MatrixStorage::SparseReal(CsrMatrix::from_rows(dim, rows))
        } else {
            MatrixStorage::SparseComplex(CsrMatrix::from_rows(dim, rows))
        }
    };

    OperatorMatrix {
        basis: Arc::clone(basis),
        storage,
    }
}

/// Build `H = J H_XY + ε V + h Σ_i S^z_i` in the given basis.
pub fn build_hamiltonian(
    spec: &HamiltonianSpec,
    basis: &Arc<SectorBasis>,
) -> Result<OperatorMatrix, OperatorError> {
    build_hamiltonian_with(spec, basis, &AssemblyOptions::default())
}

pub fn build_hamiltonian_with(
    spec: &HamiltonianSpec,
    basis: &Arc<SectorBasis>,
    opts: &AssemblyOptions,
) -> Result<OperatorMatrix, OperatorError> {
    if basis.length() != spec.length {
        return Err(OperatorError::LengthMismatch {
            basis: basis.length(),
            spec: spec.length,
        });
    }
    if matches!(spec.boundary, Boundary::Twisted(_)) {
        if spec.epsilon != 0.0 {
            return Err(OperatorError::Spec(
                "twisted boundary is defined for the bare XY chain only (ε must be 0)".into(),
            ));
        }
        let couplings = vec![spec.coupling; spec.length];
        let sign = match spec.boundary {
            Boundary::Twisted(s) => s,
            Boundary::Periodic => unreachable!(),
        };
        return build_twisted_xy_full(spec.length, &couplings, sign, basis);
    }
    Ok(assemble(basis, &ChainTerms { spec: spec.clone() }, opts))
}

/// Twisted XY chain: open bonds `J_{i,i+1}` plus a wrap bond whose hop
/// carries the phase `e^{±iπM/2}`.
///
/// The phase depends on the magnetization, so the basis must resolve M.
pub fn build_twisted_xy(
    length: usize,
    couplings: &[f64],
    phase_sign: Sign,
    basis: &Arc<SectorBasis>,
) -> Result<OperatorMatrix, OperatorError> {
    if basis.spec.magnetization.is_none() {
        return Err(OperatorError::Spec(
            "twisted XY chain requires a fixed-magnetization basis".into(),
        ));
    }
    build_twisted_xy_full(length, couplings, phase_sign, basis)
}

/// Twisted XY chain on an arbitrary basis, with the wrap phase evaluated as
/// the diagonal operator `e^{±iπM/2}`.
///
/// This is the operator form needed to verify commutation with the twisted
/// su(2) generators, which move between magnetization sectors.
pub fn build_twisted_xy_full(
    length: usize,
    couplings: &[f64],
    phase_sign: Sign,
    basis: &Arc<SectorBasis>,
) -> Result<OperatorMatrix, OperatorError> {
    if basis.length() != length {
        return Err(OperatorError::LengthMismatch {
            basis: basis.length(),
            spec: length,
        });
    }
    if couplings.len() != length {
        return Err(OperatorError::Spec(format!(
            "expected {length} bond couplings, got {}",
            couplings.len()
        )));
    }
    let op = TwistedXyTerms {
        length,
        couplings: couplings.to_vec(),
        phase_sign,
    };
    Ok(assemble(basis, &op, &AssemblyOptions::default()))
}

/// Global twisted su(2) generators `(s^+_T, s^z_T)` in the given basis.
///
/// `s^+_T = Σ_i (S^+_i)²/2 · Π_{l<i}(1 - 2(S^z_l)²)` and `s^z_T = M/2`.
pub fn build_twisted_su2_generators(
    length: usize,
    basis: &Arc<SectorBasis>,
) -> Result<(OperatorMatrix, OperatorMatrix), OperatorError> {
    if basis.length() != length {
        return Err(OperatorError::LengthMismatch {
            basis: basis.length(),
            spec: length,
        });
    }
    let raise = assemble(
        basis,
        &TwistedRaiseTerms { length },
        &AssemblyOptions::default(),
    );
    // s^z_T is diagonal in any magnetization-adapted basis
    let dim = basis.dim();
    let mut m = Array2::<f64>::zeros((dim, dim));
    for i in 0..dim {
        m[[i, i]] = magnetization_of(basis.representative(i), length) as f64 / 2.0;
    }
    let sz = OperatorMatrix {
        basis: Arc::clone(basis),
        storage: MatrixStorage::DenseReal(m),
    };
    Ok((raise, sz))
}

/// `⟨v|A·B|w⟩`-style helper: the commutator `[A, B]` applied to `v`.
pub fn commutator_apply(
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    v: &[Complex],
) -> Result<Vec<Complex>, OperatorError> {
    let ab = a.apply(&b.apply(v)?)?;
    let ba = b.apply(&a.apply(v)?)?;
    Ok(ab.iter().zip(&ba).map(|(x, y)| x - y).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{build_full_basis, build_sector_basis, SectorSpec, SpinConfig};

    fn idx(levels: &[i8]) -> usize {
        SpinConfig::new(levels.to_vec()).unwrap().code() as usize
    }

    #[test]
    fn l2_matrix_elements() {
        // PBC doubles the single bond at L=2: the S^xS^x+S^yS^y element
        // |−1,1⟩ → |0,0⟩ is 1 per bond
        let basis = build_full_basis(2).unwrap();
        let spec = HamiltonianSpec {
            epsilon: 0.0,
            ..HamiltonianSpec::standard(2, 0.0)
        };
        let h = build_hamiltonian(&spec, &basis).unwrap();
        let m = h.storage.to_dense_real().unwrap();
        assert!((m[[idx(&[0, 0]), idx(&[-1, 1])]] - 2.0).abs() < 1e-14);
        assert!(m[[idx(&[1, -1]), idx(&[-1, 1])]].abs() < 1e-14);
        assert!(h.hermiticity_error() < 1e-12);
    }

    #[test]
    fn polarized_state_is_zeeman_eigenstate() {
        let basis = build_full_basis(4).unwrap();
        let spec = HamiltonianSpec::standard(4, 0.7);
        let h = build_hamiltonian(&spec, &basis).unwrap();
        let mut v = vec![Complex::new(0.0, 0.0); basis.dim()];
        v[idx(&[1, 1, 1, 1])] = Complex::new(1.0, 0.0);
        let hv = h.apply(&v).unwrap();
        for (i, z) in hv.iter().enumerate() {
            let expect = if i == idx(&[1, 1, 1, 1]) { 0.7 * 4.0 } else { 0.0 };
            assert!((z - Complex::new(expect, 0.0)).norm() < 1e-13, "site {i}");
        }
    }

    #[test]
    fn pair_exchange_element() {
        let basis = build_full_basis(4).unwrap();
        let h = build_hamiltonian(&HamiltonianSpec::standard(4, 0.0), &basis).unwrap();
        let m = h.storage.to_dense_real().unwrap();
        // ⟨-1,1,m,m'| εV |1,-1,m,m'⟩ = 0.8 at ε = 0.2, minus the J-hop part
        // which does not connect these configurations
        assert!((m[[idx(&[-1, 1, 0, 0]), idx(&[1, -1, 0, 0])]] - 0.8).abs() < 1e-14);
        assert!((m[[idx(&[-1, 1, 1, -1]), idx(&[1, -1, 1, -1])]] - 0.8).abs() < 1e-14);
    }

    #[test]
    fn sector_assembly_matches_full_restriction() {
        // [H, Σ S^z] = 0: assembling in a fixed-M basis loses no elements
        let l = 4;
        let full = build_full_basis(l).unwrap();
        let spec = HamiltonianSpec::standard(l, 0.3);
        let hf = build_hamiltonian(&spec, &full).unwrap();
        let mf = hf.storage.to_dense_real().unwrap();
        for m in [-2i64, 0, 3] {
            let basis = build_sector_basis(&SectorSpec::with_magnetization(l, m)).unwrap();
            let hs = build_hamiltonian(&spec, &basis).unwrap();
            let ms = hs.storage.to_dense_real().unwrap();
            for i in 0..basis.dim() {
                for j in 0..basis.dim() {
                    let (ri, rj) = (
                        basis.representative(i) as usize,
                        basis.representative(j) as usize,
                    );
                    assert!((ms[[i, j]] - mf[[ri, rj]]).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn pair_current_is_hermitian_complex() {
        let basis = build_full_basis(4).unwrap();
        let spec = HamiltonianSpec {
            perturbation: Perturbation::PairCurrent,
            ..HamiltonianSpec::standard(4, 0.0)
        };
        let h = build_hamiltonian(&spec, &basis).unwrap();
        assert!(!h.storage.is_real());
        assert!(h.hermiticity_error() < 1e-12);
    }

    #[test]
    fn diagonal_perturbations_are_diagonal() {
        let basis = build_full_basis(2).unwrap();
        for pert in [Perturbation::ZImbalance, Perturbation::ZCorrelation] {
            let spec = HamiltonianSpec {
                coupling: 0.0,
                perturbation: pert,
                ..HamiltonianSpec::standard(2, 0.0)
            };
            let h = build_hamiltonian(&spec, &basis).unwrap();
            let m = h.storage.to_dense_real().unwrap();
            for i in 0..9 {
                for j in 0..9 {
                    if i != j {
                        assert_eq!(m[[i, j]], 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn twisted_wrap_reduces_to_plain_bond_at_m0() {
        // e^{iπ·0/2} = 1: the twisted chain equals the open chain plus an
        // ordinary wrap bond inside M = 0
        let l = 4;
        let basis = build_sector_basis(&SectorSpec::with_magnetization(l, 0)).unwrap();
        let tw = build_twisted_xy(l, &[1.0; 4], Sign::Minus, &basis).unwrap();
        let xy = build_hamiltonian(&HamiltonianSpec::bare_xy(l), &basis).unwrap();
        let a = tw.storage.to_dense_complex();
        let b = xy.storage.to_dense_real().unwrap();
        for i in 0..basis.dim() {
            for j in 0..basis.dim() {
                assert!((a[[i, j]] - Complex::new(b[[i, j]], 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn twisted_requires_fixed_m() {
        let basis = build_full_basis(4).unwrap();
        assert!(build_twisted_xy(4, &[1.0; 4], Sign::Minus, &basis).is_err());
    }

    #[test]
    fn twisted_boundary_rejects_perturbation() {
        let basis = build_full_basis(4).unwrap();
        let spec = HamiltonianSpec {
            boundary: Boundary::Twisted(Sign::Minus),
            ..HamiltonianSpec::standard(4, 0.0)
        };
        assert!(build_hamiltonian(&spec, &basis).is_err());
    }

    #[test]
    fn su2_commutators_l4() {
        let l = 4;
        let basis = build_full_basis(l).unwrap();
        let (sp, sz) = build_twisted_su2_generators(l, &basis).unwrap();
        let spd = sp.storage.to_dense_complex();
        let szd = sz.storage.to_dense_complex();
        let smd = spd.t().mapv(|z| z.conj());
        // [s^+, s^-] = 2 s^z and [s^z, s^+] = s^+
        let c1 = spd.dot(&smd) - smd.dot(&spd) - szd.mapv(|z| z * 2.0);
        let c2 = szd.dot(&spd) - spd.dot(&szd) - &spd;
        assert!(c1.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
        assert!(c2.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);

        // H'_XY commutes with s^+_T for either phase sign, H_XY does not
        for sign in [Sign::Plus, Sign::Minus] {
            let hp = build_twisted_xy_full(l, &[1.0; 4], sign, &basis).unwrap();
            let hpd = hp.storage.to_dense_complex();
            let c = hpd.dot(&spd) - spd.dot(&hpd);
            assert!(
                c.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12,
                "sign {sign:?}"
            );
        }
        let hxy = build_hamiltonian(&HamiltonianSpec::bare_xy(l), &basis).unwrap();
        let hd = hxy.storage.to_dense_complex();
        let c = hd.dot(&spd) - spd.dot(&hd);
        assert!(c.iter().map(|z| z.norm()).fold(0.0, f64::max) > 0.1);
    }

    #[test]
    fn triplet_export_round_trips() {
        let basis = build_full_basis(2).unwrap();
        let h = build_hamiltonian(&HamiltonianSpec::standard(2, 0.5), &basis).unwrap();
        let mut buf = Vec::new();
        h.write_triplets(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let dense = h.storage.to_dense_real().unwrap();
        let mut recovered = ndarray::Array2::<f64>::zeros((9, 9));
        for line in text.lines() {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let (r, c): (usize, usize) = (parts[0].parse().unwrap(), parts[1].parse().unwrap());
            recovered[[r, c]] = parts[2].parse().unwrap();
            assert_eq!(parts[3].parse::<f64>().unwrap(), 0.0);
        }
        assert!(dense
            .iter()
            .zip(recovered.iter())
            .all(|(a, b)| (a - b).abs() < 1e-16));
    }
}
