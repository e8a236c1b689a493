//! Transfer-matrix analytics of `|ψ_x⟩`, generic over the scalar type.
//!
//! The two-site transfer matrix `T = T_A T_B` has eigenvalues
//! `{1, -1/4, -1/4, 0}`; every quantity here is a trace of a product of
//! 4×4 matrices whose entries are dyadic rationals, so the whole module
//! runs exactly over [`crate::Exact`] as well as over `f64`.
//!
//! Conventions: bond-index pairs are flattened row-major with the ket index
//! first, `(s, t) → 2s + t`; a dressed factor for an operator `O` on one
//! site is `Σ_{m,n} ⟨n|O|m⟩ X_m ⊗ X_n` with `X = A` on odd sites and `B`
//! on even sites (sites are 1-indexed).

use super::{tensor_a_scaled, tensor_b_scaled, MpsError, LEVELS};
use crate::scalar::Scalar;

/// Maximum chain length for exact contractions: keeps `i128` rational
/// arithmetic far from overflow.
pub const CONTRACTION_CAP: usize = 100;

/// 4×4 matrix over the scalar `S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4<S>(pub [[S; 4]; 4]);

impl<S: Scalar> Mat4<S> {
    pub fn zero() -> Self {
        Mat4([[S::zero(); 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = S::one();
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == S::zero() {
                    continue;
                }
                for j in 0..4 {
                    out.0[i][j] = out.0[i][j] + a * other.0[k][j];
                }
            }
        }
        out
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut out = Self::identity();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn trace(&self) -> S {
        self.0[0][0] + self.0[1][1] + self.0[2][2] + self.0[3][3]
    }

    pub fn apply4(&self, v: [S; 4]) -> [S; 4] {
        let mut out = [S::zero(); 4];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, &x) in v.iter().enumerate() {
                *o = *o + self.0[i][j] * x;
            }
        }
        out
    }

    pub fn to_f64(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = self.0[i][j].to_f64();
            }
        }
        out
    }
}

fn level_index(m: i8) -> usize {
    (m + 1) as usize
}

fn core(site: usize, m: i8) -> [[i64; 2]; 2] {
    // sites are 1-indexed: A on odd, B on even
    if site % 2 == 1 {
        tensor_a_scaled(m)
    } else {
        tensor_b_scaled(m)
    }
}

/// Single and two-site transfer matrices.
pub struct TransferObjects<S> {
    pub t_a: Mat4<S>,
    pub t_b: Mat4<S>,
    /// `T = T_A T_B`.
    pub t: Mat4<S>,
    /// `T_B T_A`; equals `t` entrywise.
    pub t_ba: Mat4<S>,
}

/// Eigenvalues of `T`, exactly `{1, -1/4, -1/4, 0}`.
pub fn transfer_eigenvalues<S: Scalar>() -> [S; 4] {
    [
        S::one(),
        S::from_ratio(-1, 4),
        S::from_ratio(-1, 4),
        S::zero(),
    ]
}

/// Unnormalized eigenvectors of `T` paired with [`transfer_eigenvalues`];
/// the dominant one is `(1,0,0,1)` (the identity matrix as a vector).
pub fn transfer_eigenvectors<S: Scalar>() -> [[S; 4]; 4] {
    let (o, z) = (S::one(), S::zero());
    [[o, z, z, o], [z, o, z, z], [z, z, o, z], [o, z, z, -o]]
}

/// Normalized dominant left/right eigenvector `(1,0,0,1)/√2`.
pub fn dominant_vector() -> [f64; 4] {
    let r = 0.5f64.sqrt();
    [r, 0.0, 0.0, r]
}

/// Dressed single-site factor for a coefficient matrix `C[n][m] = ⟨n|O|m⟩`.
pub fn dress_site<S: Scalar>(coeff: &[[S; 3]; 3], site: usize) -> Mat4<S> {
    let mut out = Mat4::zero();
    for m in LEVELS {
        let xm = core(site, m);
        for n in LEVELS {
            let c = coeff[level_index(n)][level_index(m)];
            if c == S::zero() {
                continue;
            }
            let xn = core(site, n);
            for s in 0..2 {
                for t in 0..2 {
                    for sp in 0..2 {
                        for tp in 0..2 {
                            let w = S::from_int(xm[s][sp] * xn[t][tp]) * S::from_ratio(1, 2);
                            out.0[2 * s + t][2 * sp + tp] =
                                out.0[2 * s + t][2 * sp + tp] + c * w;
                        }
                    }
                }
            }
        }
    }
    out
}

fn identity_coeff<S: Scalar>() -> [[S; 3]; 3] {
    let mut c = [[S::zero(); 3]; 3];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = S::one();
    }
    c
}

/// Plain (undressed) transfer factor of one site.
pub fn site_transfer<S: Scalar>(site: usize) -> Mat4<S> {
    dress_site(&identity_coeff::<S>(), site)
}

pub fn transfer_objects<S: Scalar>() -> TransferObjects<S> {
    let t_a = site_transfer::<S>(1);
    let t_b = site_transfer::<S>(2);
    let t = t_a.mul(&t_b);
    let t_ba = t_b.mul(&t_a);
    TransferObjects { t_a, t_b, t, t_ba }
}

/// Squared norm `⟨ψ_x|ψ_x⟩ = Tr(T^{L/2}) = 1 + 2(-1/4)^{L/2}`.
pub fn norm_squared<S: Scalar>(length: usize) -> S {
    assert!(length % 2 == 0 && length >= 2 && length <= CONTRACTION_CAP);
    transfer_objects::<S>().t.pow(length / 2).trace()
}

// ---------------------------------------------------------------------------
// dressed multi-site blocks and cyclic placement
// ---------------------------------------------------------------------------

/// Matrix of an operator on `width` adjacent sites, dimension `3^width`.
#[derive(Clone)]
pub struct LocalOp<S> {
    pub width: usize,
    pub elements: Vec<S>,
}

impl<S: Scalar> LocalOp<S> {
    pub fn zero(width: usize) -> Self {
        let d = 3usize.pow(width as u32);
        Self {
            width,
            elements: vec![S::zero(); d * d],
        }
    }

    pub fn dim(&self) -> usize {
        3usize.pow(self.width as u32)
    }

    pub fn get(&self, out: usize, inp: usize) -> S {
        self.elements[out * self.dim() + inp]
    }

    pub fn set(&mut self, out: usize, inp: usize, v: S) {
        let d = self.dim();
        self.elements[out * d + inp] = v;
    }

    pub fn add_assign(&mut self, other: &Self, factor: S) {
        for (a, &b) in self.elements.iter_mut().zip(&other.elements) {
            *a = *a + factor * b;
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.width, other.width);
        let d = self.dim();
        let mut out = Self::zero(self.width);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a == S::zero() {
                    continue;
                }
                for j in 0..d {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `self ⊗ 1` on `width + extra` sites.
    pub fn pad_right(&self, extra: usize) -> Self {
        let mut out = Self::zero(self.width + extra);
        let dpad = 3usize.pow(extra as u32);
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let v = self.get(i, j);
                if v == S::zero() {
                    continue;
                }
                for p in 0..dpad {
                    out.set(i * dpad + p, j * dpad + p, v);
                }
            }
        }
        out
    }

    /// `1 ⊗ self` on `extra + width` sites.
    pub fn pad_left(&self, extra: usize) -> Self {
        let mut out = Self::zero(self.width + extra);
        let dpad = 3usize.pow(extra as u32);
        let d = self.dim();
        for p in 0..dpad {
            for i in 0..d {
                for j in 0..d {
                    let v = self.get(i, j);
                    if v != S::zero() {
                        out.set(p * d + i, p * d + j, v);
                    }
                }
            }
        }
        out
    }
}

// first physical index of a multi-site block is the most significant digit
fn levels_of(index: usize, width: usize) -> Vec<i8> {
    let mut out = vec![0i8; width];
    let mut rem = index;
    for w in (0..width).rev() {
        out[w] = (rem % 3) as i8 - 1;
        rem /= 3;
    }
    out
}

/// Dressed block of `width` sites starting at 1-indexed site `start`.
pub fn dress_block<S: Scalar>(op: &LocalOp<S>, start: usize) -> Mat4<S> {
    let width = op.width;
    let d = op.dim();
    let half = S::from_ratio(1, 1 << width);
    let mut out = Mat4::zero();
    for inp in 0..d {
        let ms = levels_of(inp, width);
        let mut ket = [[1i64, 0], [0, 1]];
        for (w, &m) in ms.iter().enumerate() {
            ket = mul2(ket, core(start + w, m));
        }
        for outp in 0..d {
            let c = op.get(outp, inp);
            if c == S::zero() {
                continue;
            }
            let ns = levels_of(outp, width);
            let mut bra = [[1i64, 0], [0, 1]];
            for (w, &n) in ns.iter().enumerate() {
                bra = mul2(bra, core(start + w, n));
            }
            for s in 0..2 {
                for t in 0..2 {
                    for sp in 0..2 {
                        for tp in 0..2 {
                            let w = S::from_int(ket[s][sp] * bra[t][tp]) * half;
                            out.0[2 * s + t][2 * sp + tp] =
                                out.0[2 * s + t][2 * sp + tp] + c * w;
                        }
                    }
                }
            }
        }
    }
    out
}

fn mul2(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut out = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Cyclic trace of the chain with dressed blocks at given (1-indexed,
/// possibly wrapping) start sites; plain transfer factors elsewhere.
pub fn placed_trace<S: Scalar>(length: usize, blocks: &[(usize, usize, Mat4<S>)]) -> S {
    assert!(length % 2 == 0 && length >= 2 && length <= CONTRACTION_CAP);
    // walk starts at the first block so no block wraps the seam
    let rotate = blocks.first().map(|b| b.0 - 1).unwrap_or(0);
    let mut covered_by: Vec<Option<usize>> = vec![None; length + 1];
    for (bi, &(start, width, _)) in blocks.iter().enumerate() {
        for w in 0..width {
            let site = (start - 1 + w) % length + 1;
            assert!(covered_by[site].is_none(), "overlapping blocks");
            covered_by[site] = Some(bi);
        }
    }
    let mut product = Mat4::<S>::identity();
    let mut offset = 0usize;
    while offset < length {
        let site = (rotate + offset) % length + 1;
        match covered_by[site] {
            Some(bi) if blocks[bi].0 == site => {
                product = product.mul(&blocks[bi].2);
                offset += blocks[bi].1;
            }
            Some(_) => unreachable!("walk landed inside a block"),
            None => {
                product = product.mul(&site_transfer::<S>(site));
                offset += 1;
            }
        }
    }
    product.trace()
}

// ---------------------------------------------------------------------------
// local operators
// ---------------------------------------------------------------------------

fn op2_from<S: Scalar>(entries: &[(i8, i8, i8, i8, S)]) -> LocalOp<S> {
    let mut op = LocalOp::zero(2);
    for &(n1, n2, m1, m2, v) in entries {
        let o = 3 * level_index(n1) + level_index(n2);
        let i = 3 * level_index(m1) + level_index(m2);
        let cur = op.get(o, i);
        op.set(o, i, cur + v);
    }
    op
}

/// The XY bond term `S^x S^x + S^y S^y`; every allowed hop has element 1.
pub fn xy_bond<S: Scalar>() -> LocalOp<S> {
    let one = S::one;
    op2_from(&[
        // S^+_1 S^-_2 / 2 + h.c.
        (0, -1, -1, 0, one()),
        (-1, 0, 0, -1, one()),
        (1, -1, 0, 0, one()),
        (0, 0, 1, -1, one()),
        (1, 0, 0, 1, one()),
        (0, 1, 1, 0, one()),
        (0, 0, -1, 1, one()),
        (-1, 1, 0, 0, one()),
    ])
}

/// The bimagnon pair-exchange bond term `(S^+)²(S^-)² + h.c.`, element 4.
pub fn pair_exchange_bond<S: Scalar>() -> LocalOp<S> {
    op2_from(&[
        (1, -1, -1, 1, S::from_int(4)),
        (-1, 1, 1, -1, S::from_int(4)),
    ])
}

/// `S^z ⊗ 1` on a bond.
pub fn sz_first_bond<S: Scalar>() -> LocalOp<S> {
    let mut op = LocalOp::zero(2);
    for m1 in LEVELS {
        for m2 in LEVELS {
            let i = 3 * level_index(m1) + level_index(m2);
            op.set(i, i, S::from_int(m1 as i64));
        }
    }
    op
}

/// Full local term `W = J·(S^xS^x + S^yS^y) + ε·V_bond + h·S^z⊗1`; the
/// Hamiltonian of the chain is `Σ_i W_{i,i+1}`.
pub fn bond_term<S: Scalar>(coupling: S, epsilon: S, field: S) -> LocalOp<S> {
    let mut op = LocalOp::zero(2);
    op.add_assign(&xy_bond::<S>(), coupling);
    op.add_assign(&pair_exchange_bond::<S>(), epsilon);
    op.add_assign(&sz_first_bond::<S>(), field);
    op
}

/// `⟨ψ_x|H|ψ_x⟩` as an unnormalized trace — identically zero.
pub fn expect_energy<S: Scalar>(length: usize, coupling: S, epsilon: S, field: S) -> S {
    let w = bond_term(coupling, epsilon, field);
    let mut total = S::zero();
    for start in [1usize, 2] {
        let block = dress_block(&w, start);
        total = total + placed_trace(length, &[(start, 2, block)]);
    }
    // both parities appear L/2 times
    total * S::from_ratio(length as i64 / 2, 1)
}

/// The five placement classes of `Σ_{j} ⟨W_i W_j⟩` for a fixed first bond.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H2Classes<S> {
    /// Both terms on the same bond.
    pub diagonal: S,
    /// Second term one bond to the right.
    pub overlap_right: S,
    /// Second term one bond to the left.
    pub overlap_left: S,
    /// Separated, same starting parity.
    pub same_parity: S,
    /// Separated, opposite starting parity.
    pub cross_parity: S,
}

impl<S: Scalar> H2Classes<S> {
    pub fn row_sum(&self) -> S {
        self.diagonal + self.overlap_right + self.overlap_left + self.same_parity
            + self.cross_parity
    }
}

/// Second-moment report: classes for both first-bond parities plus totals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H2Report<S> {
    pub odd_start: H2Classes<S>,
    pub even_start: H2Classes<S>,
    /// `Σ_{ij} ⟨W_i W_j⟩` as an unnormalized trace.
    pub total: S,
    /// Total divided by the squared norm.
    pub normalized: S,
}

/// Assemble `⟨H²⟩` from its placement classes. Needs `L ≥ 6` so that the
/// class decomposition is free of double counting.
pub fn expect_h_squared<S: Scalar>(
    length: usize,
    coupling: S,
    epsilon: S,
    field: S,
) -> Result<H2Report<S>, MpsError> {
    if length < 6 || length % 2 != 0 {
        return Err(MpsError::OddLength(length));
    }
    let w = bond_term(coupling, epsilon, field);
    let odd_start = h2_row(length, &w, 1);
    let even_start = h2_row(length, &w, 2);
    let half = S::from_ratio(length as i64 / 2, 1);
    let total = (odd_start.row_sum() + even_start.row_sum()) * half;
    let normalized = total / norm_squared::<S>(length);
    Ok(H2Report {
        odd_start,
        even_start,
        total,
        normalized,
    })
}

fn h2_row<S: Scalar>(length: usize, w: &LocalOp<S>, first: usize) -> H2Classes<S> {
    let half_cells = length / 2;
    let w_sq = w.matmul(w);
    let diagonal = placed_trace(length, &[(first, 2, dress_block(&w_sq, first))]);

    // overlap to the right: W on (p, p+1) then W on (p+1, p+2)
    let right_op = w.pad_right(1).matmul(&w.pad_left(1));
    let overlap_right = placed_trace(length, &[(first, 3, dress_block(&right_op, first))]);

    // overlap to the left: W on (p, p+1) then W on (p-1, p)
    let left_op = w.pad_left(1).matmul(&w.pad_right(1));
    let left_start = if first == 1 { length } else { first - 1 };
    let overlap_left = placed_trace(length, &[(left_start, 3, dress_block(&left_op, left_start))]);

    let mut same_parity = S::zero();
    let mut cross_parity = S::zero();
    let wb_first = dress_block(w, first);
    for cell in 1..half_cells {
        // same parity: second bond starts first + 2·cell
        let s2 = (first - 1 + 2 * cell) % length + 1;
        let wb_second = dress_block(w, s2);
        same_parity =
            same_parity + placed_trace(length, &[(first, 2, wb_first), (s2, 2, wb_second)]);
        // opposite parity: second bond starts first + 2·cell + 1, skipping
        // the two overlapping placements
        let s3 = (first + 2 * cell) % length + 1;
        let gap_after = (s3 + length - first) % length;
        if gap_after >= 2 && gap_after <= length - 3 {
            let wb_third = dress_block(w, s3);
            cross_parity =
                cross_parity + placed_trace(length, &[(first, 2, wb_first), (s3, 2, wb_third)]);
        }
    }
    H2Classes {
        diagonal,
        overlap_right,
        overlap_left,
        same_parity,
        cross_parity,
    }
}

/// Closed forms of the five classes for the bare XY term (`J = 1`):
/// `t1 = 1 + (-1)^{L/2} 2^{2-L}`, `t2 = t5 = -1/2 - 3(-1)^{L/2} 2^{1-L}`,
/// `t3 = (L-2)(-1)^{L/2} 2^{2-L}`, `t4 = (L-4)(-1)^{L/2-1} 2^{2-L}`.
pub fn xy_class_closed_forms<S: Scalar>(length: usize) -> H2Classes<S> {
    let l = length as i64;
    let sgn = if (length / 2) % 2 == 0 { 1 } else { -1 };
    let p22l = S::from_ratio(sgn * 4, 1 << l); // (-1)^{L/2} 2^{2-L}
    let p21l = S::from_ratio(sgn * 2, 1 << l); // (-1)^{L/2} 2^{1-L}
    let overlap = S::from_ratio(-1, 2) - S::from_int(3) * p21l;
    H2Classes {
        diagonal: S::one() + p22l,
        overlap_right: overlap,
        overlap_left: overlap,
        same_parity: S::from_int(l - 2) * p22l,
        cross_parity: -S::from_int(l - 4) * p22l,
    }
}

// ---------------------------------------------------------------------------
// observables and correlation functions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteParity {
    Odd,
    Even,
}

impl SiteParity {
    pub fn of_site(site: usize) -> Self {
        if site % 2 == 1 {
            SiteParity::Odd
        } else {
            SiteParity::Even
        }
    }

    fn first_site(self) -> usize {
        match self {
            SiteParity::Odd => 1,
            SiteParity::Even => 2,
        }
    }
}

/// Integer coefficient matrices: `√2·S^x = K`, `√2·S^y = i·K'`, `S^z`.
fn adjacency<S: Scalar>() -> [[S; 3]; 3] {
    let mut c = [[S::zero(); 3]; 3];
    c[0][1] = S::one();
    c[1][0] = S::one();
    c[1][2] = S::one();
    c[2][1] = S::one();
    c
}

fn adjacency_signed<S: Scalar>() -> [[S; 3]; 3] {
    // K'[n][m]: +1 on lowering (n = m-1), -1 on raising
    let mut c = [[S::zero(); 3]; 3];
    c[0][1] = S::one();
    c[1][2] = S::one();
    c[1][0] = -S::one();
    c[2][1] = -S::one();
    c
}

fn sz_coeff<S: Scalar>() -> [[S; 3]; 3] {
    let mut c = [[S::zero(); 3]; 3];
    for (i, &m) in LEVELS.iter().enumerate() {
        c[i][i] = S::from_int(m as i64);
    }
    c
}

fn coeff_square<S: Scalar>(c: &[[S; 3]; 3]) -> [[S; 3]; 3] {
    let mut out = [[S::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] = out[i][j] + c[i][k] * c[k][j];
            }
        }
    }
    out
}

fn axis_data<S: Scalar>(axis: Axis) -> ([[S; 3]; 3], S) {
    // (integer coefficient matrix, prefactor for a pair of insertions)
    match axis {
        Axis::X => (adjacency::<S>(), S::from_ratio(1, 2)),
        Axis::Y => (adjacency_signed::<S>(), S::from_ratio(-1, 2)),
        Axis::Z => (sz_coeff::<S>(), S::one()),
    }
}

/// Two-point function both ways: dressed contraction and printed closed
/// form, as unnormalized traces. The expectations `⟨S^a_i⟩` vanish, so
/// these equal the connected correlators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation<S> {
    pub contraction: S,
    pub closed_form: S,
}

impl<S: Scalar> Correlation<S> {
    /// Value normalized by `⟨ψ_x|ψ_x⟩`, comparable to statevector averages.
    pub fn normalized(&self, length: usize) -> S {
        self.contraction / norm_squared::<S>(length)
    }
}

/// `⟨S^a_i S^a_{i+r}⟩` for a site `i` of the given parity, `0 ≤ r < L`.
pub fn correlation<S: Scalar>(
    length: usize,
    axis: Axis,
    parity: SiteParity,
    separation: usize,
) -> Result<Correlation<S>, MpsError> {
    if length % 2 != 0 || length < 2 || length > CONTRACTION_CAP {
        return Err(MpsError::OddLength(length));
    }
    if separation >= length {
        return Err(MpsError::InvalidCut {
            cut: separation,
            max: length - 1,
        });
    }
    let (coeff, prefactor) = axis_data::<S>(axis);
    let i = parity.first_site();
    let contraction = if separation == 0 {
        let sq = coeff_square(&coeff);
        placed_trace(length, &[(i, 1, dress_site(&sq, i))]) * prefactor
    } else {
        let j = (i - 1 + separation) % length + 1;
        placed_trace(
            length,
            &[(i, 1, dress_site(&coeff, i)), (j, 1, dress_site(&coeff, j))],
        ) * prefactor
    };
    Ok(Correlation {
        contraction,
        closed_form: correlation_closed_form::<S>(length, axis, parity, separation),
    })
}

/// Printed closed forms of the two-point functions (unnormalized traces).
///
/// For odd separations the x and y labels depend on the sublattice; the
/// case table is fixed by the oracle statevector in the Eq.-(3) tensor
/// gauge (the factored gauge swaps x ↔ y there).
pub fn correlation_closed_form<S: Scalar>(
    length: usize,
    axis: Axis,
    parity: SiteParity,
    separation: usize,
) -> S {
    let l = length as i64;
    let r = separation as i64;
    let sgn_l = if (length / 2) % 2 == 0 { 1i64 } else { -1 };
    match axis {
        Axis::Z => {
            if separation == 0 {
                S::from_ratio(1, 2)
            } else if separation == 1 || separation == length - 1 {
                S::from_ratio(1, 4)
            } else {
                S::zero()
            }
        }
        Axis::X | Axis::Y => {
            if separation == 0 {
                // 3/4 + (-1)^{L/2} 2^{1-L}
                return S::from_ratio(3, 4) + S::from_ratio(sgn_l * 2, 1 << l);
            }
            // g(r) = 2^{-r} + (-1)^{L/2} 2^{-(L-r)}
            let g = S::from_ratio(1, 1 << r) + S::from_ratio(sgn_l, 1 << (l - r));
            if separation % 2 == 0 {
                let s = if (separation / 2) % 2 == 0 { 1 } else { -1 };
                S::from_int(s) * g
            } else {
                let zeta = match (axis, parity) {
                    (Axis::X, SiteParity::Odd) | (Axis::Y, SiteParity::Even) => 1i64,
                    _ => -1,
                };
                let s = if ((separation - 1) / 2) % 2 == 0 { 1 } else { -1 };
                S::from_int(-zeta * s) * g
            }
        }
    }
}

/// Single-site expectation as a dressed trace; zero for every axis. For
/// x and y the value is the rational part of the trace (the `1/√2` scale
/// of the coefficient matrix only multiplies zero).
pub fn site_expectation<S: Scalar>(length: usize, axis: Axis, parity: SiteParity) -> S {
    let (coeff, _) = axis_data::<S>(axis);
    let i = parity.first_site();
    placed_trace(length, &[(i, 1, dress_site(&coeff, i))])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Exact;

    fn exact(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    #[test]
    fn transfer_matrices_match_printed_tables() {
        let t = transfer_objects::<Exact>();
        let half = exact(1, 2);
        let quarter = exact(-1, 4);
        // T_A rows as printed
        let ta = [
            [half, Exact::from_int(0), Exact::from_int(0), half],
            [Exact::from_int(0), Exact::from_int(0), half, Exact::from_int(0)],
            [Exact::from_int(0), half, Exact::from_int(0), Exact::from_int(0)],
            [half, Exact::from_int(0), Exact::from_int(0), half],
        ];
        assert_eq!(t.t_a.0, ta);
        // T_B has the sign-flipped off-diagonal entries
        assert_eq!(t.t_b.0[1][2], -half);
        assert_eq!(t.t_b.0[2][1], -half);
        assert_eq!(t.t_b.0[0][0], half);
        // T = T_A T_B = T_B T_A
        assert_eq!(t.t.0[0][0], half);
        assert_eq!(t.t.0[1][1], quarter);
        assert_eq!(t.t.0[2][2], quarter);
        assert_eq!(t.t.0[0][3], half);
        assert_eq!(t.t.0[3][0], half);
        assert_eq!(t.t, t.t_ba);
    }

    #[test]
    fn transfer_eigensystem_is_exact() {
        let t = transfer_objects::<Exact>().t;
        let vals = transfer_eigenvalues::<Exact>();
        let vecs = transfer_eigenvectors::<Exact>();
        for (lambda, v) in vals.iter().zip(&vecs) {
            let tv = t.apply4(*v);
            for (a, b) in tv.iter().zip(v) {
                assert_eq!(*a, *lambda * *b);
            }
        }
        let d = dominant_vector();
        assert!((d[0] - 0.5f64.sqrt()).abs() < 1e-16 && d[1] == 0.0 && d[2] == 0.0);
    }

    #[test]
    fn norm_closed_form() {
        for l in [2usize, 4, 6, 8, 20, 50] {
            let sgn = if (l / 2) % 2 == 0 { 1 } else { -1 };
            let expect = Exact::from_int(1) + exact(2 * sgn, 1i64 << l);
            assert_eq!(norm_squared::<Exact>(l), expect, "L={l}");
        }
    }

    #[test]
    fn energy_vanishes_identically() {
        for l in [4usize, 6, 8, 12] {
            let e = expect_energy::<Exact>(l, Exact::from_int(1), exact(1, 5), exact(27, 10));
            assert_eq!(e, Exact::from_int(0), "L={l}");
        }
    }

    #[test]
    fn h2_classes_match_printed_forms() {
        for l in [6usize, 8, 10, 12] {
            let rep =
                expect_h_squared::<Exact>(l, Exact::from_int(1), Exact::from_int(0), Exact::from_int(0))
                    .unwrap();
            let closed = xy_class_closed_forms::<Exact>(l);
            assert_eq!(rep.odd_start, closed, "L={l}");
            assert_eq!(rep.even_start, closed, "L={l} even start");
            assert_eq!(rep.total, Exact::from_int(0), "L={l}");
        }
        // spot values at L=8: diagonal 1.015625, overlap -0.5234375
        let rep = expect_h_squared::<f64>(8, 1.0, 0.0, 0.0).unwrap();
        assert!((rep.odd_start.diagonal - 1.015625).abs() < 1e-15);
        assert!((rep.odd_start.overlap_right + 0.5234375).abs() < 1e-15);
    }

    #[test]
    fn h2_vanishes_with_perturbation() {
        for l in [6usize, 8, 10, 12] {
            let rep = expect_h_squared::<Exact>(l, Exact::from_int(1), exact(1, 5), Exact::from_int(0))
                .unwrap();
            assert_eq!(rep.total, Exact::from_int(0), "L={l}");
        }
    }

    #[test]
    fn h2_with_field_counts_magnetization_variance() {
        // H₀|ψ_x⟩ = 0, so ⟨H²⟩ = h²⟨(Σ S^z)²⟩ = h²·L as an unnormalized trace
        for l in [6usize, 8, 10] {
            let h = exact(7, 10);
            let rep = expect_h_squared::<Exact>(l, Exact::from_int(1), exact(1, 5), h).unwrap();
            assert_eq!(rep.total, h * h * Exact::from_int(l as i64), "L={l}");
        }
    }

    #[test]
    fn correlations_match_closed_forms_exactly() {
        for l in [6usize, 8, 10, 14] {
            for axis in [Axis::X, Axis::Y, Axis::Z] {
                for parity in [SiteParity::Odd, SiteParity::Even] {
                    for r in 0..l {
                        let c = correlation::<Exact>(l, axis, parity, r).unwrap();
                        assert_eq!(
                            c.contraction, c.closed_form,
                            "L={l} axis={axis:?} parity={parity:?} r={r}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn correlation_examples() {
        // z-axis: r=1 → 1/4, r=0 → 1/2, r=2 → 0
        let z = |r| correlation::<Exact>(8, Axis::Z, SiteParity::Odd, r).unwrap().contraction;
        assert_eq!(z(1), exact(1, 4));
        assert_eq!(z(0), exact(1, 2));
        assert_eq!(z(2), Exact::from_int(0));
        // x-axis, odd site, r=0 at L=8: 3/4 + 2^{1-8}
        let c = correlation::<Exact>(8, Axis::X, SiteParity::Odd, 0).unwrap();
        assert_eq!(c.contraction, exact(3, 4) + exact(2, 256));
        // x-axis, odd site, r=2 at L=50: -(2^{-2} + (-1)^{25}·2^{-48})
        let c = correlation::<f64>(50, Axis::X, SiteParity::Odd, 2).unwrap();
        let expect = -(0.25 - 0.5f64.powi(48));
        assert!((c.contraction - expect).abs() < 1e-18);
        assert!((c.contraction + 0.25).abs() < 1e-13);
    }

    #[test]
    fn exponential_clustering_bound() {
        // |⟨S^x_i S^x_{i+r}⟩| ≤ 2^{-r} + 2^{-(L-r)}
        let l = 20usize;
        for r in 1..l {
            let c = correlation::<f64>(l, Axis::X, SiteParity::Odd, r).unwrap();
            let bound = 0.5f64.powi(r as i32) + 0.5f64.powi((l - r) as i32);
            assert!(c.contraction.abs() <= bound + 1e-15, "r={r}");
        }
    }

    #[test]
    fn single_site_expectations_vanish() {
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            for parity in [SiteParity::Odd, SiteParity::Even] {
                assert_eq!(
                    site_expectation::<Exact>(10, axis, parity),
                    Exact::from_int(0)
                );
            }
        }
    }

    #[test]
    fn sum_rule_spin_length() {
        // Σ_a ⟨(S^a)²⟩ = s(s+1)·N² = 2·(1 + (-1)^{L/2} 2^{1-L}) as a trace
        for l in [6usize, 8] {
            let mut total = Exact::from_int(0);
            for axis in [Axis::X, Axis::Y, Axis::Z] {
                total = total
                    + correlation::<Exact>(l, axis, SiteParity::Odd, 0)
                        .unwrap()
                        .contraction;
            }
            assert_eq!(total, Exact::from_int(2) * norm_squared::<Exact>(l));
        }
    }
}
