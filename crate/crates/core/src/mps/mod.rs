//! The exact bond-dimension-2 matrix product state `|ψ_x⟩`.
//!
//! Amplitudes are trace contractions over a two-site unit cell,
//! `⟨m_1…m_L|ψ_x⟩ = Tr(A_{m_1} B_{m_2} ⋯ A_{m_{L-1}} B_{m_L})` with
//!
//! ```text
//! A_{±1} = (1 ∓ σ^z)/(2√2),   A_0 = σ^x/√2,   B_m = σ^z A_m.
//! ```
//!
//! Every tensor entry is an integer multiple of `1/√2`; the submodules work
//! with the integer parts (`√2·A_m`) so that transfer-level quantities stay
//! exact rationals.

pub mod entanglement;
pub mod transfer;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MpsError {
    #[error("chain length {0} must be even and at least 2")]
    OddLength(usize),
    #[error("statevector export capped at L = {cap}, requested L = {length}")]
    StatevectorCap { length: usize, cap: usize },
    #[error("cut {cut} outside 1..{max}")]
    InvalidCut { cut: usize, max: usize },
}

/// Physical levels in tensor order.
pub const LEVELS: [i8; 3] = [-1, 0, 1];

/// Largest chain exported as a dense statevector.
pub const STATEVECTOR_CAP: usize = 12;

/// `√2 · A_m` — integer-valued tensor cores.
pub fn tensor_a_scaled(m: i8) -> [[i64; 2]; 2] {
    match m {
        -1 => [[1, 0], [0, 0]],
        0 => [[0, 1], [1, 0]],
        1 => [[0, 0], [0, 1]],
        _ => panic!("invalid level {m}"),
    }
}

/// `√2 · B_m = σ^z (√2 A_m)`.
pub fn tensor_b_scaled(m: i8) -> [[i64; 2]; 2] {
    let a = tensor_a_scaled(m);
    [[a[0][0], a[0][1]], [-a[1][0], -a[1][1]]]
}

/// `A_m` as floats.
pub fn tensor_a(m: i8) -> [[f64; 2]; 2] {
    let s = tensor_a_scaled(m);
    let r = 0.5f64.sqrt();
    [
        [s[0][0] as f64 * r, s[0][1] as f64 * r],
        [s[1][0] as f64 * r, s[1][1] as f64 * r],
    ]
}

/// `B_m` as floats.
pub fn tensor_b(m: i8) -> [[f64; 2]; 2] {
    let s = tensor_b_scaled(m);
    let r = 0.5f64.sqrt();
    [
        [s[0][0] as f64 * r, s[0][1] as f64 * r],
        [s[1][0] as f64 * r, s[1][1] as f64 * r],
    ]
}

/// The boundary matrix `M = 1/2^{1/4}·I` of the Bell-pair factorization.
pub fn factor_m() -> [[f64; 2]; 2] {
    let c = 0.5f64.powf(0.25);
    [[c, 0.0], [0.0, c]]
}

/// The boundary matrix `J = 1/2^{1/4}·σ^z`.
pub fn factor_j() -> [[f64; 2]; 2] {
    let c = 0.5f64.powf(0.25);
    [[c, 0.0], [0.0, -c]]
}

/// The pair-to-site map reshaped to a 2-3-2 tensor, `P^m`.
pub fn factor_p(m: i8) -> [[f64; 2]; 2] {
    match m {
        -1 => [[1.0, 0.0], [0.0, 0.0]],
        0 => [[0.0, 1.0], [1.0, 0.0]],
        1 => [[0.0, 0.0], [0.0, 1.0]],
        _ => panic!("invalid level {m}"),
    }
}

fn mat2_mul(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `M·P^m·M`: reproduces `A_m` exactly.
pub fn tensor_a_factored(m: i8) -> [[f64; 2]; 2] {
    mat2_mul(mat2_mul(factor_m(), factor_p(m)), factor_m())
}

/// `M·P^m·J`.
///
/// Equals `B_m` for m = ±1 but `-B_0` for m = 0: right-multiplication by
/// `σ^z` flips the sign of the off-diagonal core relative to the
/// left-multiplied definition. The two gauges give the same transfer
/// matrices and states that differ by a local phase on even sites.
pub fn tensor_b_factored(m: i8) -> [[f64; 2]; 2] {
    mat2_mul(mat2_mul(factor_m(), factor_p(m)), factor_j())
}

/// Handle for the chain-length-dependent analytics of `|ψ_x⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mps {
    length: usize,
}

impl Mps {
    pub fn new(length: usize) -> Result<Self, MpsError> {
        if length < 2 || length % 2 != 0 {
            return Err(MpsError::OddLength(length));
        }
        Ok(Self { length })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Dense statevector of the trace contraction; amplitudes are real and
    /// the squared norm is `1 + 2(-1/4)^{L/2}`, not 1.
    pub fn to_statevector(&self) -> Result<Vec<f64>, MpsError> {
        if self.length > STATEVECTOR_CAP {
            return Err(MpsError::StatevectorCap {
                length: self.length,
                cap: STATEVECTOR_CAP,
            });
        }
        let dim = 3usize.pow(self.length as u32);
        let mut out = vec![0.0f64; dim];
        // scaled integer cores contribute 2^{-L/2} overall
        let scale = 0.5f64.powi(self.length as i32 / 2);
        let mut stack_code = 0usize;
        fill(
            &mut out,
            self.length,
            0,
            &mut stack_code,
            [[1, 0], [0, 1]],
            scale,
        );
        return Ok(out);

        fn fill(
            out: &mut [f64],
            length: usize,
            site: usize,
            code: &mut usize,
            product: [[i64; 2]; 2],
            scale: f64,
        ) {
            if site == length {
                out[*code] = (product[0][0] + product[1][1]) as f64 * scale;
                return;
            }
            let stride = 3usize.pow(site as u32);
            for (digit, &m) in LEVELS.iter().enumerate() {
                let core = if site % 2 == 0 {
                    tensor_a_scaled(m)
                } else {
                    tensor_b_scaled(m)
                };
                let mut next = [[0i64; 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        next[i][j] = product[i][0] * core[0][j] + product[i][1] * core[1][j];
                    }
                }
                *code += digit * stride;
                fill(out, length, site + 1, code, next, scale);
                *code -= digit * stride;
            }
        }
    }

    /// Statevector as complex amplitudes.
    pub fn to_statevector_complex(&self) -> Result<Vec<crate::Complex>, MpsError> {
        Ok(self
            .to_statevector()?
            .into_iter()
            .map(|x| crate::Complex::new(x, 0.0))
            .collect())
    }

    /// Squared norm of the exported statevector, `1 + 2(-1/4)^{L/2}`.
    pub fn norm_squared(&self) -> f64 {
        use crate::scalar::Scalar;
        transfer::norm_squared::<crate::Exact>(self.length).to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::SpinConfig;

    fn close(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> bool {
        (0..2).all(|i| (0..2).all(|j| (a[i][j] - b[i][j]).abs() < 1e-15))
    }

    #[test]
    fn tensor_definitions() {
        let r = 0.5f64.sqrt();
        // A_0 = σ^x/√2 and B_0 = σ^z σ^x/√2 = iσ^y/√2
        assert!(close(tensor_a(0), [[0.0, r], [r, 0.0]]));
        assert!(close(tensor_b(0), [[0.0, r], [-r, 0.0]]));
        assert!(close(tensor_a(1), [[0.0, 0.0], [0.0, r]]));
        assert!(close(tensor_b(1), [[0.0, 0.0], [0.0, -r]]));
        assert!(close(tensor_a(-1), tensor_b(-1)));
    }

    #[test]
    fn factored_construction() {
        for m in LEVELS {
            assert!(close(tensor_a_factored(m), tensor_a(m)), "A_{m}");
        }
        // M·P·J matches B on the diagonal cores and flips the sign of the
        // off-diagonal one (gauge difference on even sites)
        assert!(close(tensor_b_factored(1), tensor_b(1)));
        assert!(close(tensor_b_factored(-1), tensor_b(-1)));
        let mut neg = tensor_b(0);
        neg.iter_mut().flatten().for_each(|x| *x = -*x);
        assert!(close(tensor_b_factored(0), neg));
    }

    #[test]
    fn l2_amplitudes_match_hand_traces() {
        let v = Mps::new(2).unwrap().to_statevector().unwrap();
        let amp = |levels: &[i8]| v[SpinConfig::new(levels.to_vec()).unwrap().code() as usize];
        // Tr(A_0 B_0) = Tr(σ^x σ^z σ^x)/2 = 0, Tr(A_1 B_{-1}) = 0
        assert_eq!(amp(&[0, 0]), 0.0);
        assert_eq!(amp(&[1, -1]), 0.0);
        // the full 9-entry table: only |1,1⟩ and |-1,-1⟩ survive
        assert!((amp(&[1, 1]) + 0.5).abs() < 1e-15);
        assert!((amp(&[-1, -1]) - 0.5).abs() < 1e-15);
        for levels in [[1i8, 0], [0, 1], [-1, 0], [0, -1], [1, -1], [-1, 1]] {
            assert_eq!(amp(&levels), 0.0);
        }
    }

    #[test]
    fn statevector_norm_matches_closed_form() {
        for l in [2usize, 4, 6, 8, 10] {
            let mps = Mps::new(l).unwrap();
            let v = mps.to_statevector().unwrap();
            let n2: f64 = v.iter().map(|x| x * x).sum();
            let expect = 1.0 + 2.0 * (-0.25f64).powi(l as i32 / 2);
            assert!((n2 - expect).abs() < 1e-12, "L={l}");
            assert!((mps.norm_squared() - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_odd_length_and_caps() {
        assert!(Mps::new(5).is_err());
        assert!(Mps::new(0).is_err());
        assert!(Mps::new(14).unwrap().to_statevector().is_err());
    }

    #[test]
    fn magnetization_support_is_binomial() {
        // |ψ_x⟩ spreads over all even-M sectors with weights
        // c'_n² (× the middle-state anomaly), n = (M+L)/2
        let l = 8usize;
        let v = Mps::new(l).unwrap().to_statevector().unwrap();
        let n2: f64 = v.iter().map(|x| x * x).sum();
        let mut weights = vec![0.0f64; 2 * l + 1];
        for (code, amp) in v.iter().enumerate() {
            let m = crate::hilbert::magnetization_of(code as u64, l);
            weights[(m + l as i64) as usize] += amp * amp / n2;
        }
        let binom = |n: u64, k: u64| -> f64 {
            let mut acc = 1.0f64;
            for i in 0..k {
                acc = acc * (n - i) as f64 / (i + 1) as f64;
            }
            acc
        };
        for m in -(l as i64)..=(l as i64) {
            let w = weights[(m + l as i64) as usize];
            if (m + l as i64) % 2 == 1 {
                assert_eq!(w, 0.0);
                continue;
            }
            let n = ((m + l as i64) / 2) as u64;
            let c = binom(l as u64, l as u64 / 2);
            let anomaly = if n == l as u64 / 2 {
                (c + 2.0 * (-1.0f64).powi(l as i32 / 2)) / c
            } else {
                1.0
            };
            let expect = binom(l as u64, n) / 2.0f64.powi(l as i32) * anomaly / n2;
            assert!((w - expect).abs() < 1e-12, "M={m}: {w} vs {expect}");
        }
    }
}
