//! Spin-1 product bases and symmetry-adapted sector bases.
//!
//! Configurations of the chain are encoded as base-3 integers with site 0
//! as the least significant digit and digit `d = m + 1` for the local level
//! `m ∈ {-1, 0, +1}`. Sector bases are built by projecting orbit
//! representatives onto a one-dimensional character of the resolved
//! symmetry group (translations, reflection, spin inversion), following the
//! minimal-code representative convention.

use crate::Complex;
use std::sync::Arc;
use thiserror::Error;

/// Base-3 encoded spin configuration.
pub type SpinCode = u64;

/// Default cap on the chain length for full-Hilbert-space work.
pub const DEFAULT_LENGTH_CAP: usize = 14;

#[derive(Debug, Error)]
pub enum BasisError {
    #[error("chain length {0} must be even and at least 2")]
    OddLength(usize),
    #[error("chain length {length} exceeds the cap {cap} for statevector work")]
    LengthCap { length: usize, cap: usize },
    #[error("inconsistent sector spec: {0}")]
    InconsistentSpec(String),
}

/// A ±1 symmetry eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn half_turns(self) -> u64 {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
}

/// One spin-1 configuration of the chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinConfig {
    levels: Vec<i8>,
}

impl SpinConfig {
    pub fn new(levels: Vec<i8>) -> Result<Self, BasisError> {
        let l = levels.len();
        if l < 2 || l % 2 != 0 {
            return Err(BasisError::OddLength(l));
        }
        if levels.iter().any(|m| !(-1..=1).contains(m)) {
            return Err(BasisError::InconsistentSpec(
                "local levels must lie in {-1,0,1}".into(),
            ));
        }
        Ok(Self { levels })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[i8] {
        &self.levels
    }

    pub fn code(&self) -> SpinCode {
        self.levels
            .iter()
            .rev()
            .fold(0u64, |acc, &m| acc * 3 + (m + 1) as u64)
    }

    pub fn from_code(code: SpinCode, length: usize) -> Self {
        let mut levels = Vec::with_capacity(length);
        let mut c = code;
        for _ in 0..length {
            levels.push((c % 3) as i8 - 1);
            c /= 3;
        }
        Self { levels }
    }

    /// Total magnetization `Σ_i m_i`.
    pub fn magnetization(&self) -> i64 {
        self.levels.iter().map(|&m| m as i64).sum()
    }
}

/// Magnetization of an encoded configuration.
pub fn magnetization_of(code: SpinCode, length: usize) -> i64 {
    let mut c = code;
    let mut m = 0i64;
    for _ in 0..length {
        m += (c % 3) as i64 - 1;
        c /= 3;
    }
    m
}

/// Cyclic shift by one site: `T|m_1, …, m_L⟩ = |m_L, m_1, …, m_{L-1}⟩`.
pub fn translate(code: SpinCode, length: usize) -> SpinCode {
    let top = 3u64.pow(length as u32 - 1);
    (code % top) * 3 + code / top
}

/// Site reversal `i → L + 1 - i`.
pub fn reflect(code: SpinCode, length: usize) -> SpinCode {
    let mut out = 0u64;
    let mut c = code;
    for _ in 0..length {
        out = out * 3 + c % 3;
        c /= 3;
    }
    out
}

/// Spin inversion `m_i → -m_i` on every site.
pub fn invert(code: SpinCode, length: usize) -> SpinCode {
    3u64.pow(length as u32) - 1 - code
}

/// Which symmetry sector a basis resolves.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorSpec {
    /// Chain length L (even).
    pub length: usize,
    /// Total magnetization, or `None` for unresolved.
    pub magnetization: Option<i64>,
    /// Momentum index k in `0..L`, or `None` for unresolved.
    pub momentum: Option<usize>,
    /// Reflection eigenvalue; resolvable only at k = 0 or k = L/2.
    pub reflection: Option<Sign>,
    /// Spin-inversion eigenvalue; resolvable only at M = 0.
    pub inversion: Option<Sign>,
}

impl SectorSpec {
    /// Fully unresolved basis of the whole Hilbert space.
    pub fn full(length: usize) -> Self {
        Self {
            length,
            magnetization: None,
            momentum: None,
            reflection: None,
            inversion: None,
        }
    }

    /// Magnetization-only sector.
    pub fn with_magnetization(length: usize, m: i64) -> Self {
        Self {
            magnetization: Some(m),
            ..Self::full(length)
        }
    }

    pub fn validate(&self) -> Result<(), BasisError> {
        let l = self.length;
        if l < 2 || l % 2 != 0 {
            return Err(BasisError::OddLength(l));
        }
        if let Some(m) = self.magnetization {
            if m.unsigned_abs() as usize > l {
                return Err(BasisError::InconsistentSpec(format!(
                    "magnetization {m} out of range for L={l}"
                )));
            }
        }
        if let Some(k) = self.momentum {
            if k >= l {
                return Err(BasisError::InconsistentSpec(format!(
                    "momentum index {k} out of range for L={l}"
                )));
            }
            if self.reflection.is_some() && k != 0 && k != l / 2 {
                return Err(BasisError::InconsistentSpec(format!(
                    "reflection cannot be resolved at momentum k={k}; only k=0 or k=L/2"
                )));
            }
        }
        if self.inversion.is_some() && self.magnetization != Some(0) {
            return Err(BasisError::InconsistentSpec(
                "spin inversion flips M and is resolvable only at M = 0".into(),
            ));
        }
        Ok(())
    }
}

/// A group element `T^a R^b Z^c` together with its character data.
#[derive(Debug, Clone, Copy)]
struct GroupElement {
    shifts: usize,
    reflect: bool,
    invert: bool,
    /// Character as `exp(iπ t / L)` with `t` stored mod 2L.
    phase_half_turns: u64,
}

/// The resolved symmetry group of a sector, with its 1-d character.
#[derive(Debug, Clone)]
struct SymmetryGroup {
    length: usize,
    elements: Vec<GroupElement>,
}

impl SymmetryGroup {
    fn new(spec: &SectorSpec) -> Self {
        let l = spec.length as u64;
        let shifts: Vec<usize> = match spec.momentum {
            Some(_) => (0..spec.length).collect(),
            None => vec![0],
        };
        let k = spec.momentum.unwrap_or(0) as u64;
        let mut elements = Vec::new();
        for &a in &shifts {
            for refl in [false, true] {
                if refl && spec.reflection.is_none() {
                    continue;
                }
                for inv in [false, true] {
                    if inv && spec.inversion.is_none() {
                        continue;
                    }
                    // χ(T^a R^b Z^c) = ω^a σ_R^b σ_Z^c with ω = e^{2πik/L}
                    let mut t = (2 * k * a as u64) % (2 * l);
                    if refl {
                        t = (t + l * spec.reflection.unwrap().half_turns()) % (2 * l);
                    }
                    if inv {
                        t = (t + l * spec.inversion.unwrap().half_turns()) % (2 * l);
                    }
                    elements.push(GroupElement {
                        shifts: a,
                        reflect: refl,
                        invert: inv,
                        phase_half_turns: t,
                    });
                }
            }
        }
        Self {
            length: spec.length,
            elements,
        }
    }

    fn apply(&self, g: &GroupElement, code: SpinCode) -> SpinCode {
        let mut c = code;
        if g.invert {
            c = invert(c, self.length);
        }
        if g.reflect {
            c = reflect(c, self.length);
        }
        for _ in 0..g.shifts {
            c = translate(c, self.length);
        }
        c
    }

    fn phase(&self, g: &GroupElement) -> Complex {
        let l = self.length as u64;
        let t = g.phase_half_turns;
        if t == 0 {
            Complex::new(1.0, 0.0)
        } else if t == l {
            Complex::new(-1.0, 0.0)
        } else {
            let arg = std::f64::consts::PI * t as f64 / l as f64;
            Complex::new(arg.cos(), arg.sin())
        }
    }
}

/// Symmetry-adapted orthonormal basis of one sector.
///
/// Each basis vector is the character projection of an orbit representative:
/// `|v_i⟩ = |O_i|^{-1/2} Σ_{d ∈ O_i} χ(g_d)^* |d⟩`. The per-configuration
/// phases are tabulated so that lift/project and matrix assembly are single
/// lookups.
pub struct SectorBasis {
    pub spec: SectorSpec,
    reps: Vec<SpinCode>,
    orbit_sizes: Vec<u32>,
    /// All configurations that appear in some basis vector, sorted by code.
    configs: Vec<SpinCode>,
    /// Basis-vector index owning each configuration.
    owner: Vec<u32>,
    /// `χ(g_d)^*` for each configuration.
    phase: Vec<Complex>,
    group: SymmetryGroup,
    real_phases: bool,
}

impl SectorBasis {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn length(&self) -> usize {
        self.spec.length
    }

    pub fn full_dim(&self) -> usize {
        3usize.pow(self.spec.length as u32)
    }

    pub fn representative(&self, i: usize) -> SpinCode {
        self.reps[i]
    }

    pub fn orbit_size(&self, i: usize) -> usize {
        self.orbit_sizes[i] as usize
    }

    /// True when every stored phase is ±1, so operators with real
    /// coefficients assemble into real symmetric matrices.
    pub fn phases_are_real(&self) -> bool {
        self.real_phases
    }

    /// Locate a configuration: `(owner index, amplitude in that vector)`.
    pub fn amplitude_of(&self, code: SpinCode) -> Option<(usize, Complex)> {
        let i = self.configs.binary_search(&code).ok()?;
        let owner = self.owner[i] as usize;
        let amp = self.phase[i] / (self.orbit_sizes[owner] as f64).sqrt();
        Some((owner, amp))
    }

    /// Expand a sector vector into the full `3^L` Hilbert space.
    pub fn lift(&self, v: &[Complex]) -> Vec<Complex> {
        assert_eq!(v.len(), self.dim(), "sector dimension mismatch");
        let mut out = vec![Complex::new(0.0, 0.0); self.full_dim()];
        for (idx, (&code, &own)) in self.configs.iter().zip(&self.owner).enumerate() {
            let own = own as usize;
            out[code as usize] = v[own] * self.phase[idx] / (self.orbit_sizes[own] as f64).sqrt();
        }
        out
    }

    /// Project a full-space vector onto the sector basis.
    pub fn project(&self, full: &[Complex]) -> Vec<Complex> {
        assert_eq!(full.len(), self.full_dim(), "full dimension mismatch");
        let mut out = vec![Complex::new(0.0, 0.0); self.dim()];
        for (idx, (&code, &own)) in self.configs.iter().zip(&self.owner).enumerate() {
            let own = own as usize;
            out[own] +=
                self.phase[idx].conj() * full[code as usize] / (self.orbit_sizes[own] as f64).sqrt();
        }
        out
    }

    /// Visit every configuration of the orbit of representative `i` with its
    /// amplitude in the basis vector.
    pub fn for_each_in_orbit(&self, i: usize, mut f: impl FnMut(SpinCode, Complex)) {
        let rep = self.reps[i];
        let norm = 1.0 / (self.orbit_sizes[i] as f64).sqrt();
        let mut seen = Vec::with_capacity(self.group.elements.len());
        for g in &self.group.elements {
            let d = self.group.apply(g, rep);
            if seen.contains(&d) {
                continue;
            }
            seen.push(d);
            f(d, self.group.phase(g).conj() * norm);
        }
    }
}

/// Build the unresolved full product basis (dimension `3^L`).
pub fn build_full_basis(length: usize) -> Result<Arc<SectorBasis>, BasisError> {
    build_full_basis_capped(length, DEFAULT_LENGTH_CAP)
}

/// Same as [`build_full_basis`] with an explicit length cap.
pub fn build_full_basis_capped(
    length: usize,
    cap: usize,
) -> Result<Arc<SectorBasis>, BasisError> {
    if length > cap {
        return Err(BasisError::LengthCap { length, cap });
    }
    build_sector_basis(&SectorSpec::full(length))
}

/// Build the symmetry-adapted basis of a sector.
///
/// Representatives are the minimal base-3 codes of their orbits; orbits whose
/// character projection vanishes (a nontrivial character on the stabilizer)
/// are dropped. Empty sectors yield `dim = 0`.
pub fn build_sector_basis(spec: &SectorSpec) -> Result<Arc<SectorBasis>, BasisError> {
    spec.validate()?;
    let l = spec.length;
    let full = 3usize.pow(l as u32);
    let group = SymmetryGroup::new(spec);
    let two_l = 2 * l as u64;

    let mut visited = vec![false; full];
    let mut reps = Vec::new();
    let mut orbit_sizes: Vec<u32> = Vec::new();
    let mut entries: Vec<(SpinCode, u32, Complex)> = Vec::new();

    let mut orbit: Vec<(SpinCode, u64)> = Vec::with_capacity(group.elements.len());
    for code in 0..full as u64 {
        if visited[code as usize] {
            continue;
        }
        if let Some(m) = spec.magnetization {
            if magnetization_of(code, l) != m {
                visited[code as usize] = true;
                continue;
            }
        }
        // gather the orbit with character exponents; `code` is minimal since
        // smaller members would already have been visited
        orbit.clear();
        let mut survives = true;
        for g in &group.elements {
            let d = group.apply(g, code);
            visited[d as usize] = true;
            if d == code && g.phase_half_turns % two_l != 0 {
                // χ must be trivial on the stabilizer
                survives = false;
            }
            orbit.push((d, g.phase_half_turns));
        }
        if !survives {
            continue;
        }
        orbit.sort_unstable();
        orbit.dedup_by_key(|e| e.0);
        let idx = reps.len() as u32;
        reps.push(code);
        orbit_sizes.push(orbit.len() as u32);
        for &(d, t) in &orbit {
            // amplitude phase χ(g)^* = e^{-iπt/L}
            let ph = if t == 0 {
                Complex::new(1.0, 0.0)
            } else if t == l as u64 {
                Complex::new(-1.0, 0.0)
            } else {
                let arg = -std::f64::consts::PI * t as f64 / l as f64;
                Complex::new(arg.cos(), arg.sin())
            };
            entries.push((d, idx, ph));
        }
    }

    entries.sort_unstable_by_key(|e| e.0);
    let real_phases = entries.iter().all(|e| e.2.im == 0.0);
    let (configs, (owner, phase)): (Vec<_>, (Vec<_>, Vec<_>)) = entries
        .into_iter()
        .map(|(c, o, p)| (c, (o, p)))
        .unzip();

    Ok(Arc::new(SectorBasis {
        spec: spec.clone(),
        reps,
        orbit_sizes,
        configs,
        owner,
        phase,
        group,
        real_phases,
    }))
}
