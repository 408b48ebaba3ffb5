//! Finite-dimensional C*-algebras `B = ⊕_k M_{n_k}`, faithful functionals,
//! the GNS construction and the modular data derived from it.
//!
//! A context canonicalizes the density `Q` to be diagonal with nonincreasing
//! entries in every block (the diagonalizing unitary is retained so inputs
//! can be mapped between frames). In the canonical frame the GNS basis is
//! `f_{k,i,j} = e^{(k)}_{ij} / sqrt(Q_jj)`, ordered by block and then
//! lexicographically in `(i, j)`; the multiplication tensor, its adjoint,
//! the unit vector `Λ(1)` and the per-block values `Tr(Q_k^{-1})` are all
//! precomputed against that ordering.

use std::hash::{Hash, Hasher};

use num_complex::Complex64;

use crate::error::Error;
use crate::linalg::{self, cr, CMat, CVec};
use crate::Result;

/// Shape of `B = ⊕_k M_{n_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockAlgebra {
    block_dims: Vec<usize>,
}

impl BlockAlgebra {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() || block_dims.contains(&0) {
            return Err(Error::BadShape(
                "block dimensions must be a nonempty list of positive integers".into(),
            ));
        }
        Ok(BlockAlgebra { block_dims })
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    /// `dim L²(B) = Σ n_k²`.
    pub fn dim(&self) -> usize {
        self.block_dims.iter().map(|&n| n * n).sum()
    }

    /// Dimension of the defining representation `⊕_k C^{n_k}`.
    pub fn defining_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            blocks: self
                .block_dims
                .iter()
                .map(|&n| linalg::zeros(n, n))
                .collect(),
        }
    }

    pub fn one(&self) -> AlgebraElement {
        AlgebraElement {
            blocks: self.block_dims.iter().map(|&n| linalg::identity(n)).collect(),
        }
    }

    /// `e^{(k)}_{ij}` as an element of `B`.
    pub fn matrix_unit(&self, block: usize, i: usize, j: usize) -> AlgebraElement {
        let mut el = self.zero();
        el.blocks[block][(i, j)] = cr(1.0);
        el
    }

    /// Matrix units in block/lexicographic order; a linear basis of `B`.
    pub fn matrix_units(&self) -> Vec<AlgebraElement> {
        let mut out = Vec::with_capacity(self.dim());
        for (k, &n) in self.block_dims.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    out.push(self.matrix_unit(k, i, j));
                }
            }
        }
        out
    }

    pub fn check_shape(&self, a: &AlgebraElement) -> Result<()> {
        if a.blocks.len() != self.block_dims.len()
            || a.blocks
                .iter()
                .zip(&self.block_dims)
                .any(|(b, &n)| b.nrows() != n || b.ncols() != n)
        {
            return Err(Error::BadShape("element does not match block layout".into()));
        }
        Ok(())
    }
}

/// Element of `B` as a list of per-block complex matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub blocks: Vec<CMat>,
}

impl AlgebraElement {
    pub fn adjoint(&self) -> AlgebraElement {
        AlgebraElement {
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, z: Complex64) -> AlgebraElement {
        AlgebraElement {
            blocks: self.blocks.iter().map(|b| b.map(|x| x * z)).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.blocks.iter().map(|b| b.trace()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| linalg::frobenius(b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Blockwise inverse; valid for invertible elements only.
    pub fn try_inverse(&self) -> Option<AlgebraElement> {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            blocks.push(b.clone().try_inverse()?);
        }
        Some(AlgebraElement { blocks })
    }
}

/// Positive faithful functional `ψ(a) = Tr(Qa)`, optionally normalized to a
/// state. The non-normalized case matters: the classical picture uses the
/// counting measure `ψ(δ_v) = 1`, which has `Tr(Q) = |V|`.
#[derive(Debug, Clone)]
pub struct FaithfulFunctional {
    pub q: AlgebraElement,
    pub normalized: bool,
}

impl FaithfulFunctional {
    pub fn apply(&self, a: &AlgebraElement) -> Complex64 {
        self.q
            .blocks
            .iter()
            .zip(&a.blocks)
            .map(|(q, b)| (q * b).trace())
            .sum()
    }
}

/// Index of a GNS basis vector `f_{k,i,j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisIndex {
    pub block: usize,
    pub i: usize,
    pub j: usize,
}

/// Antilinear operator `v ↦ K · conj(v)`.
#[derive(Debug, Clone)]
pub struct AntilinearOp {
    pub k: CMat,
}

impl AntilinearOp {
    pub fn apply(&self, v: &CVec) -> CVec {
        &self.k * v.map(|z| z.conj())
    }

    /// The composition of two antilinear operators is linear: `S·conj(T)`.
    pub fn compose(&self, other: &AntilinearOp) -> CMat {
        &self.k * other.k.map(|z| z.conj())
    }
}

/// Modular data in the canonical frame: `∇^z` is diagonal with entry
/// `(Q_ii/Q_jj)^z` on `f_{k,i,j}`, and `J` conjugates coordinates while
/// swapping `(i,j) ↦ (j,i)`.
#[derive(Debug, Clone)]
pub struct ModularData {
    nabla_log: Vec<f64>,
    swap: CMat,
}

impl ModularData {
    pub fn nabla_pow(&self, z: Complex64) -> CMat {
        let diag = CVec::from_iterator(
            self.nabla_log.len(),
            self.nabla_log.iter().map(|&l| (z * l).exp()),
        );
        CMat::from_diagonal(&diag)
    }

    pub fn conjugation(&self) -> AntilinearOp {
        AntilinearOp { k: self.swap.clone() }
    }
}

/// `(B, ψ)` canonicalized so that `Q` is diagonal, together with the GNS
/// basis and the precomputed multiplication data.
#[derive(Debug, Clone)]
pub struct GnsContext {
    algebra: BlockAlgebra,
    functional: FaithfulFunctional,
    frame_unitary: AlgebraElement,
    /// Diagonal of the canonical `Q`, per block, nonincreasing.
    q_diag: Vec<Vec<f64>>,
    m: CMat,
    mstar: CMat,
    eta: CVec,
    delta_sq: Vec<f64>,
    tol: f64,
    id: u64,
}

/// Builds a [`GnsContext`] from a block layout and a density `Q`, given in
/// any frame. Fails if `Q` is not positive definite per block, or if the
/// `normalized` flag is set but `Tr(Q) ≠ 1`.
pub fn make_context(
    block_dims: Vec<usize>,
    q: AlgebraElement,
    normalized: bool,
) -> Result<GnsContext> {
    make_context_with_tol(block_dims, q, normalized, crate::DEFAULT_TOL)
}

pub fn make_context_with_tol(
    block_dims: Vec<usize>,
    q: AlgebraElement,
    normalized: bool,
    tol: f64,
) -> Result<GnsContext> {
    let algebra = BlockAlgebra::new(block_dims)?;
    algebra.check_shape(&q)?;

    let mut q_diag: Vec<Vec<f64>> = Vec::with_capacity(algebra.num_blocks());
    let mut frame_blocks: Vec<CMat> = Vec::with_capacity(algebra.num_blocks());
    for qb in &q.blocks {
        if !linalg::is_hermitian(qb, tol) {
            return Err(Error::NotPositive("Q block is not Hermitian".into()));
        }
        let (vals, vecs) = linalg::herm_eig(qb);
        if vals.iter().any(|&v| v <= tol) {
            return Err(Error::NotPositive(format!(
                "eigenvalue {:.3e} is not above tolerance",
                vals.iter().cloned().fold(f64::INFINITY, f64::min)
            )));
        }
        // Canonical order: nonincreasing. herm_eig returns ascending.
        let n = vals.len();
        let mut u = linalg::zeros(n, n);
        let mut d = Vec::with_capacity(n);
        for col in 0..n {
            let src = n - 1 - col;
            u.set_column(col, &vecs.column(src));
            d.push(vals[src]);
        }
        q_diag.push(d);
        frame_blocks.push(u);
    }

    let total: f64 = q_diag.iter().flatten().sum();
    if normalized && (total - 1.0).abs() > tol.max(1e-12) * 10.0 {
        return Err(Error::NotNormalized(total));
    }

    let dim = algebra.dim();
    let offsets = block_offsets(algebra.block_dims());

    // Multiplication tensor: f_{k,i,j} f_{k,j,j'} = f_{k,i,j'} / sqrt(d_j).
    let mut m = linalg::zeros(dim, dim * dim);
    for (k, &n) in algebra.block_dims().iter().enumerate() {
        let off = offsets[k];
        for i in 0..n {
            for j in 0..n {
                for j2 in 0..n {
                    let row = off + i * n + j2;
                    let left = off + i * n + j;
                    let right = off + j * n + j2;
                    m[(row, left * dim + right)] = cr(1.0 / q_diag[k][j].sqrt());
                }
            }
        }
    }
    let mstar = m.adjoint();

    let mut eta = CVec::zeros(dim);
    for (k, &n) in algebra.block_dims().iter().enumerate() {
        for i in 0..n {
            eta[offsets[k] + i * n + i] = cr(q_diag[k][i].sqrt());
        }
    }

    let delta_sq: Vec<f64> = q_diag
        .iter()
        .map(|d| d.iter().map(|&v| 1.0 / v).sum())
        .collect();

    let canonical_q = AlgebraElement {
        blocks: q_diag
            .iter()
            .map(|d| {
                CMat::from_diagonal(&CVec::from_iterator(d.len(), d.iter().map(|&v| cr(v))))
            })
            .collect(),
    };

    let mut ctx = GnsContext {
        algebra,
        functional: FaithfulFunctional { q: canonical_q, normalized },
        frame_unitary: AlgebraElement { blocks: frame_blocks },
        q_diag,
        m,
        mstar,
        eta,
        delta_sq,
        tol,
        id: 0,
    };
    ctx.id = ctx.fingerprint();
    Ok(ctx)
}

fn block_offsets(dims: &[usize]) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(dims.len());
    let mut acc = 0;
    for &n in dims {
        offsets.push(acc);
        acc += n * n;
    }
    offsets
}

impl GnsContext {
    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn functional(&self) -> &FaithfulFunctional {
        &self.functional
    }

    pub fn frame_unitary(&self) -> &AlgebraElement {
        &self.frame_unitary
    }

    /// Dimension of `L²(B)`.
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn set_tol(&mut self, tol: f64) {
        self.tol = tol;
    }

    pub fn multiplication(&self) -> &CMat {
        &self.m
    }

    pub fn multiplication_adjoint(&self) -> &CMat {
        &self.mstar
    }

    /// `Λ(1)` in GNS coordinates.
    pub fn eta(&self) -> &CVec {
        &self.eta
    }

    /// Per-block values `Tr(Q_k^{-1})`.
    pub fn delta_sq(&self) -> &[f64] {
        &self.delta_sq
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    fn fingerprint(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.algebra.block_dims().hash(&mut h);
        self.functional.normalized.hash(&mut h);
        for d in self.q_diag.iter().flatten() {
            d.to_bits().hash(&mut h);
        }
        h.finish()
    }

    pub fn basis_indices(&self) -> Vec<BasisIndex> {
        let mut out = Vec::with_capacity(self.dim());
        for (k, &n) in self.algebra.block_dims().iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    out.push(BasisIndex { block: k, i, j });
                }
            }
        }
        out
    }

    pub fn flat_index(&self, idx: BasisIndex) -> usize {
        let offsets = block_offsets(self.algebra.block_dims());
        let n = self.algebra.block_dims()[idx.block];
        offsets[idx.block] + idx.i * n + idx.j
    }

    /// Canonical-frame `Q` diagonal entry at row `i` of block `k`.
    pub fn q_entry(&self, block: usize, i: usize) -> f64 {
        self.q_diag[block][i]
    }

    /// GNS basis element `f_{k,i,j} = e_{ij} / sqrt(Q_jj)`.
    pub fn gns_basis_element(&self, idx: BasisIndex) -> AlgebraElement {
        self.algebra
            .matrix_unit(idx.block, idx.i, idx.j)
            .scale(cr(1.0 / self.q_diag[idx.block][idx.j].sqrt()))
    }

    /// Coordinates of `Λ(a)` in the orthonormal GNS basis:
    /// `c_{k,i,j} = a_{ij} sqrt(Q_jj)`.
    pub fn lambda_coords(&self, a: &AlgebraElement) -> CVec {
        let mut v = CVec::zeros(self.dim());
        let offsets = block_offsets(self.algebra.block_dims());
        for (k, &n) in self.algebra.block_dims().iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    v[offsets[k] + i * n + j] = a.blocks[k][(i, j)] * cr(self.q_diag[k][j].sqrt());
                }
            }
        }
        v
    }

    pub fn element_from_coords(&self, v: &CVec) -> AlgebraElement {
        let mut a = self.algebra.zero();
        let offsets = block_offsets(self.algebra.block_dims());
        for (k, &n) in self.algebra.block_dims().iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    a.blocks[k][(i, j)] =
                        v[offsets[k] + i * n + j] / cr(self.q_diag[k][j].sqrt());
                }
            }
        }
        a
    }

    /// `(Λ(a)|Λ(b)) = ψ(a* b)`.
    pub fn gns_inner(&self, a: &AlgebraElement, b: &AlgebraElement) -> Complex64 {
        self.functional.apply(&a.adjoint().mul(b))
    }

    /// Maps a user-frame element into the canonical frame: `a ↦ U* a U`.
    pub fn to_canonical_frame(&self, a: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            blocks: a
                .blocks
                .iter()
                .zip(&self.frame_unitary.blocks)
                .map(|(b, u)| u.adjoint() * b * u)
                .collect(),
        }
    }

    pub fn from_canonical_frame(&self, a: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            blocks: a
                .blocks
                .iter()
                .zip(&self.frame_unitary.blocks)
                .map(|(b, u)| u * b * u.adjoint())
                .collect(),
        }
    }

    /// `σ_z(a) = Q^{iz} a Q^{-iz}`, canonical frame, principal branch of the
    /// logarithm on the positive diagonal entries.
    pub fn sigma(&self, a: &AlgebraElement, z: Complex64) -> Result<AlgebraElement> {
        self.algebra.check_shape(a)?;
        let iz = Complex64::i() * z;
        let mut out = self.algebra.zero();
        for (k, &n) in self.algebra.block_dims().iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    let phase = (iz * (self.q_diag[k][i].ln() - self.q_diag[k][j].ln())).exp();
                    out.blocks[k][(i, j)] = a.blocks[k][(i, j)] * phase;
                }
            }
        }
        Ok(out)
    }

    /// `Q^t` as an element (real power of the diagonal density).
    pub fn q_power(&self, t: f64) -> AlgebraElement {
        AlgebraElement {
            blocks: self
                .q_diag
                .iter()
                .map(|d| {
                    CMat::from_diagonal(&CVec::from_iterator(
                        d.len(),
                        d.iter().map(|&v| cr(v.powf(t))),
                    ))
                })
                .collect(),
        }
    }

    /// Modular operator powers `∇^z` and the modular conjugation `J`.
    pub fn modular_data(&self) -> ModularData {
        let dim = self.dim();
        let mut nabla_log = vec![0.0; dim];
        let mut swap = linalg::zeros(dim, dim);
        let offsets = block_offsets(self.algebra.block_dims());
        for (k, &n) in self.algebra.block_dims().iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    let row = offsets[k] + i * n + j;
                    nabla_log[row] = self.q_diag[k][i].ln() - self.q_diag[k][j].ln();
                    swap[(row, offsets[k] + j * n + i)] = cr(1.0);
                }
            }
        }
        ModularData { nabla_log, swap }
    }

    /// `mm*` as a matrix; blockwise `Tr(Q_k^{-1})` times the identity.
    pub fn mmstar(&self) -> CMat {
        &self.m * &self.mstar
    }

    /// Whether `ψ` is a δ-form: all per-block values `Tr(Q_k^{-1})` agree.
    pub fn is_delta_form(&self) -> (bool, Vec<f64>) {
        let per_block = self.delta_sq.clone();
        let first = per_block[0];
        let scale = first.abs().max(1.0);
        let flag = per_block
            .iter()
            .all(|&v| (v - first).abs() <= self.tol * scale);
        (flag, per_block)
    }

    /// True when every block has size 1 and `Q = 1` (counting measure).
    pub fn is_classical_counting(&self) -> bool {
        self.algebra.block_dims().iter().all(|&n| n == 1)
            && self
                .q_diag
                .iter()
                .all(|d| (d[0] - 1.0).abs() <= self.tol * 10.0)
    }
}

/// Context for the counting measure on `n` classical points.
pub fn classical_context(n: usize) -> Result<GnsContext> {
    let alg = BlockAlgebra::new(vec![1; n])?;
    make_context(vec![1; n], alg.one(), false)
}
