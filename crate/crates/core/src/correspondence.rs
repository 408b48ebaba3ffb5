//! The three-picture dictionary for quantum graphs: the `Ψ`/`Ψ'` bijections
//! between operators on `L²(B)` and elements of `B ⊗ B^op`, projections
//! versus operator bimodules over the commutant, reflexivity vectors,
//! tracial reduction, bimodule generation and the `M₂` classification.
//!
//! `B ⊗ B^op` elements are stored through their faithful action on
//! `H ⊗ H̄`: the simple tensor `a ⊗ b` acts as `kron(π(a), π(b)ᵀ)`, so under
//! row-major vectorization it sends `vec(X)` to `vec(π(a) X π(b))`. The
//! conjugate space uses the entrywise-conjugated coordinate basis, which
//! makes the `θ_{ξ,η} ↦ η ⊗ ξ̄` identification exactly `vec`.

use num_complex::Complex64;

use crate::adjacency::{self, AdjacencyOp};
use crate::algebra::{AlgebraElement, BasisIndex, GnsContext};
use crate::error::Error;
use crate::linalg::{self, cr, kron, spectral_norm, CMat, CVec};
use crate::Result;

/// Faithful representation `π(a) = ⊕_k (a_k ⊗ 1_{m_k})` of a block algebra,
/// determined by a multiplicity per block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub block_dims: Vec<usize>,
    pub multiplicities: Vec<usize>,
}

impl Representation {
    pub fn new(block_dims: Vec<usize>, multiplicities: Vec<usize>) -> Result<Self> {
        if multiplicities.len() != block_dims.len() || multiplicities.contains(&0) {
            return Err(Error::BadShape(
                "one positive multiplicity per block is required".into(),
            ));
        }
        Ok(Representation { block_dims, multiplicities })
    }

    /// GNS representation of `B` on `L²(B)`: multiplicities `m_k = n_k`.
    pub fn gns(ctx: &GnsContext) -> Representation {
        let dims = ctx.algebra().block_dims().to_vec();
        Representation { multiplicities: dims.clone(), block_dims: dims }
    }

    /// Defining representation, multiplicity one per block.
    pub fn defining(block_dims: &[usize]) -> Representation {
        Representation {
            block_dims: block_dims.to_vec(),
            multiplicities: vec![1; block_dims.len()],
        }
    }

    /// `M_d` acting on `C^d`.
    pub fn full_matrix(d: usize) -> Representation {
        Representation { block_dims: vec![d], multiplicities: vec![1] }
    }

    pub fn h_dim(&self) -> usize {
        self.block_dims
            .iter()
            .zip(&self.multiplicities)
            .map(|(&n, &m)| n * m)
            .sum()
    }

    fn block_starts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.block_dims.len());
        let mut acc = 0;
        for (&n, &m) in self.block_dims.iter().zip(&self.multiplicities) {
            out.push(acc);
            acc += n * m;
        }
        out
    }

    /// `π(a)` as a matrix on `C^{h_dim}`.
    pub fn pi(&self, a: &AlgebraElement) -> CMat {
        let h = self.h_dim();
        let mut out = linalg::zeros(h, h);
        let starts = self.block_starts();
        for (k, (&_n, &m)) in self.block_dims.iter().zip(&self.multiplicities).enumerate() {
            let blk = kron(&a.blocks[k], &linalg::identity(m));
            let s = starts[k];
            for i in 0..blk.nrows() {
                for j in 0..blk.ncols() {
                    out[(s + i, s + j)] = blk[(i, j)];
                }
            }
        }
        out
    }

    /// Basis of the commutant `π(B)' = ⊕_k (1_{n_k} ⊗ M_{m_k})`.
    pub fn commutant_basis(&self) -> Vec<CMat> {
        let h = self.h_dim();
        let starts = self.block_starts();
        let mut out = Vec::new();
        for (k, (&n, &m)) in self.block_dims.iter().zip(&self.multiplicities).enumerate() {
            for a in 0..m {
                for b in 0..m {
                    let mut unit = linalg::zeros(m, m);
                    unit[(a, b)] = cr(1.0);
                    let blk = kron(&linalg::identity(n), &unit);
                    let mut big = linalg::zeros(h, h);
                    let s = starts[k];
                    for i in 0..blk.nrows() {
                        for j in 0..blk.ncols() {
                            big[(s + i, s + j)] = blk[(i, j)];
                        }
                    }
                    out.push(big);
                }
            }
        }
        out
    }

    pub fn commutant_dim(&self) -> usize {
        self.multiplicities.iter().map(|&m| m * m).sum()
    }
}

/// Element of `B ⊗ B^op` stored by its faithful action on `H ⊗ H̄` for a
/// chosen representation of `B` on `H`.
#[derive(Debug, Clone)]
pub struct OppTensor {
    pub op: CMat,
    pub rep: Representation,
    ctx_id: u64,
}

impl OppTensor {
    /// Wraps a matrix after verifying it lies in the span of
    /// `{π(a) ⊗ π(b)ᵀ}` (projection onto that span leaves it fixed).
    pub fn from_matrix(ctx: &GnsContext, rep: Representation, op: CMat) -> Result<Self> {
        let hh = rep.h_dim() * rep.h_dim();
        if op.nrows() != hh || op.ncols() != hh {
            return Err(Error::BadShape(format!("operator must be {hh}x{hh}")));
        }
        let t = OppTensor { op, rep, ctx_id: ctx.id() };
        let (_, residual) = opp_decompose(ctx, &t.rep, &t.op);
        let scale = spectral_norm(&t.op).max(1.0);
        if residual > ctx.tol() * (hh as f64) * scale {
            return Err(Error::NotInOperatorSpan(residual));
        }
        Ok(t)
    }

    /// Wraps a matrix that is known by construction to lie in `B ⊗ B^op`.
    pub fn from_matrix_unchecked(ctx: &GnsContext, rep: Representation, op: CMat) -> Self {
        OppTensor { op, rep, ctx_id: ctx.id() }
    }

    pub fn ctx_id(&self) -> u64 {
        self.ctx_id
    }

    pub fn check_ctx(&self, ctx: &GnsContext) -> Result<()> {
        if self.ctx_id != ctx.id() {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn adjoint(&self) -> OppTensor {
        OppTensor {
            op: self.op.adjoint(),
            rep: self.rep.clone(),
            ctx_id: self.ctx_id,
        }
    }

    /// Tensor swap `σ(a ⊗ b) = b ⊗ a`, realised as `SWAP · opᵀ · SWAP`.
    pub fn swap(&self) -> OppTensor {
        let s = linalg::swap_matrix(self.rep.h_dim());
        OppTensor {
            op: &s * self.op.transpose() * &s,
            rep: self.rep.clone(),
            ctx_id: self.ctx_id,
        }
    }

    /// `(σ_{z} ⊗ σ_{w})(e)` for complex `z, w` via the diagonal implementers
    /// `π(Q^{iz})`.
    pub fn mod_twist(&self, ctx: &GnsContext, z: Complex64, w: Complex64) -> OppTensor {
        let lz = pi_q_power_iz(ctx, &self.rep, z);
        let lmz = pi_q_power_iz(ctx, &self.rep, -z);
        let lw = pi_q_power_iz(ctx, &self.rep, w);
        let lmw = pi_q_power_iz(ctx, &self.rep, -w);
        let op = kron(&lz, &lmw) * &self.op * kron(&lmz, &lw);
        OppTensor { op, rep: self.rep.clone(), ctx_id: self.ctx_id }
    }

    /// Multiplication in `B ⊗ B^op` (the representation is multiplicative).
    pub fn multiply(&self, other: &OppTensor) -> Result<OppTensor> {
        if self.rep != other.rep || self.ctx_id != other.ctx_id {
            return Err(Error::SpaceMismatch);
        }
        Ok(OppTensor {
            op: &self.op * &other.op,
            rep: self.rep.clone(),
            ctx_id: self.ctx_id,
        })
    }

    /// The multiplication map `m: B ⊗ B^op → B`, `a ⊗ b ↦ ab`, read off as
    /// an operator on `H` via `m(e) = unvec(e · vec(1))`.
    pub fn multiply_down(&self) -> CMat {
        let h = self.rep.h_dim();
        let one_hat = linalg::vec_of(&linalg::identity(h));
        let v = &self.op * one_hat;
        linalg::unvec(&v, h, h)
    }

    /// Residual of `e² - e` and `e - e*` combined; small iff `e` is an
    /// orthogonal projection.
    pub fn projection_residual(&self) -> f64 {
        let idem = spectral_norm(&(&self.op * &self.op - &self.op));
        let sa = spectral_norm(&(&self.op - self.op.adjoint()));
        idem.max(sa)
    }

    /// Re-expresses the same abstract element of `B ⊗ B^op` on another
    /// faithful representation.
    pub fn transport(&self, ctx: &GnsContext, rep: &Representation) -> Result<OppTensor> {
        self.check_ctx(ctx)?;
        let (coeffs, _) = opp_decompose(ctx, &self.rep, &self.op);
        let op = opp_from_coeffs(ctx, rep, &coeffs);
        Ok(OppTensor { op, rep: rep.clone(), ctx_id: self.ctx_id })
    }
}

/// `π(Q^{iz})` on the representation space, diagonal in the canonical frame.
fn pi_q_power_iz(ctx: &GnsContext, rep: &Representation, z: Complex64) -> CMat {
    let h = rep.h_dim();
    let mut diag = CVec::zeros(h);
    let mut pos = 0usize;
    for (k, (&n, &m)) in rep.block_dims.iter().zip(&rep.multiplicities).enumerate() {
        for i in 0..n {
            let v = (Complex64::i() * z * ctx.q_entry(k, i).ln()).exp();
            for _ in 0..m {
                diag[pos] = v;
                pos += 1;
            }
        }
    }
    CMat::from_diagonal(&diag)
}

/// `Q ⊗ Q^{-1}` acting on `H ⊗ H̄` (i.e. `kron(π(Q), π(Q^{-1})ᵀ)`).
pub fn q_tensor_qinv(ctx: &GnsContext, rep: &Representation) -> CMat {
    // Q^{iz} with z = -i gives Q itself.
    let q = pi_q_power_iz(ctx, rep, Complex64::new(0.0, -1.0));
    let qinv = pi_q_power_iz(ctx, rep, Complex64::new(0.0, 1.0));
    kron(&q, &qinv.transpose())
}

/// Builds `Σ c_{γδ} π(f_γ) ⊗ π(f_δ)ᵀ` from a coefficient matrix over the
/// GNS product basis.
pub fn opp_from_coeffs(ctx: &GnsContext, rep: &Representation, coeffs: &CMat) -> CMat {
    let hh = rep.h_dim() * rep.h_dim();
    let mut out = linalg::zeros(hh, hh);
    let indices = ctx.basis_indices();
    let pis: Vec<CMat> = indices
        .iter()
        .map(|&idx| rep.pi(&ctx.gns_basis_element(idx)))
        .collect();
    for (g, pg) in pis.iter().enumerate() {
        for (d, pd) in pis.iter().enumerate() {
            let cgd = coeffs[(g, d)];
            if cgd.norm() < 1e-300 {
                continue;
            }
            out += kron(pg, &pd.transpose()).map(|x| x * cgd);
        }
    }
    out
}

/// Expands an operator on `H ⊗ H̄` over the basis `π(f_γ) ⊗ π(f_δ)ᵀ` of
/// `B ⊗ B^op`; the basis is orthogonal in the Hilbert-Schmidt inner product
/// with known norms, so coefficients are scaled inner products. Returns the
/// coefficients and the out-of-span residual.
pub fn opp_decompose(ctx: &GnsContext, rep: &Representation, op: &CMat) -> (CMat, f64) {
    let dim = ctx.dim();
    let indices = ctx.basis_indices();
    let pis: Vec<CMat> = indices
        .iter()
        .map(|&idx| rep.pi(&ctx.gns_basis_element(idx)))
        .collect();
    // ||π(f_γ)||²_HS = m_k / d_j
    let gram: Vec<f64> = indices
        .iter()
        .map(|&idx| rep.multiplicities[idx.block] as f64 / ctx.q_entry(idx.block, idx.j))
        .collect();
    let mut coeffs = linalg::zeros(dim, dim);
    for g in 0..dim {
        for d in 0..dim {
            let basis_op = kron(&pis[g], &pis[d].transpose());
            let ip: Complex64 = basis_op
                .iter()
                .zip(op.iter())
                .map(|(b, o)| b.conj() * o)
                .sum();
            coeffs[(g, d)] = ip / cr(gram[g] * gram[d]);
        }
    }
    let rebuilt = opp_from_coeffs(ctx, rep, &coeffs);
    let residual = spectral_norm(&(op - rebuilt));
    (coeffs, residual)
}

/// `Ψ_{t,s}` / `Ψ'_{t,s}` applied to an adjacency operator, producing the
/// representing operator on the GNS representation.
///
/// `Ψ_{t,s}: θ_{Λ(a),Λ(b)} ↦ σ_{it}(a)* ⊗ σ_{is}(b)` and
/// `Ψ'_{t,s}: θ_{Λ(a),Λ(b)} ↦ σ_{it}(b) ⊗ σ_{is}(a)*`.
pub fn psi_map(ctx: &GnsContext, a: &AdjacencyOp, t: f64, s: f64, primed: bool) -> Result<OppTensor> {
    a.check_ctx(ctx)?;
    let rep = Representation::gns(ctx);
    let indices = ctx.basis_indices();
    let dim = ctx.dim();
    // weight(γ, t): σ_{it}(f_γ) = (d_i/d_j)^{-t} f_γ
    let ratio = |idx: BasisIndex| ctx.q_entry(idx.block, idx.i) / ctx.q_entry(idx.block, idx.j);
    let tilde = |idx: BasisIndex| BasisIndex { block: idx.block, i: idx.j, j: idx.i };
    let mut coeffs = linalg::zeros(dim, dim);
    for (alpha_flat, &alpha) in indices.iter().enumerate() {
        for (beta_flat, &beta) in indices.iter().enumerate() {
            let a_entry = a.matrix[(alpha_flat, beta_flat)];
            if a_entry.norm() < 1e-300 {
                continue;
            }
            if !primed {
                // A_{αβ} σ_{it}(f_β)* ⊗ σ_{is}(f_α)
                //   = A_{αβ} (r_β)^{-t} sqrt(r_β) (r_α)^{-s} · f_{β̃} ⊗ f_α
                let w = ratio(beta).powf(-t) * ratio(beta).sqrt() * ratio(alpha).powf(-s);
                let g = ctx.flat_index(tilde(beta));
                coeffs[(g, alpha_flat)] += a_entry * cr(w);
            } else {
                // A_{αβ} σ_{it}(f_α) ⊗ σ_{is}(f_β)*
                let w = ratio(alpha).powf(-t) * ratio(beta).powf(-s) * ratio(beta).sqrt();
                let d = ctx.flat_index(tilde(beta));
                coeffs[(alpha_flat, d)] += a_entry * cr(w);
            }
        }
    }
    let op = opp_from_coeffs(ctx, &rep, &coeffs);
    Ok(OppTensor { op, rep, ctx_id: ctx.id() })
}

/// Inverse of [`psi_map`]; exact on the nose since both maps are linear
/// bijections.
pub fn psi_inv(ctx: &GnsContext, e: &OppTensor, t: f64, s: f64, primed: bool) -> Result<AdjacencyOp> {
    e.check_ctx(ctx)?;
    let gns = Representation::gns(ctx);
    let e_gns = if e.rep == gns {
        e.clone()
    } else {
        e.transport(ctx, &gns)?
    };
    let (coeffs, _) = opp_decompose(ctx, &gns, &e_gns.op);
    let indices = ctx.basis_indices();
    let dim = ctx.dim();
    let ratio = |idx: BasisIndex| ctx.q_entry(idx.block, idx.i) / ctx.q_entry(idx.block, idx.j);
    let tilde = |idx: BasisIndex| BasisIndex { block: idx.block, i: idx.j, j: idx.i };
    let mut matrix = linalg::zeros(dim, dim);
    for (alpha_flat, &alpha) in indices.iter().enumerate() {
        for (beta_flat, &beta) in indices.iter().enumerate() {
            if !primed {
                let w = ratio(beta).powf(-t) * ratio(beta).sqrt() * ratio(alpha).powf(-s);
                let g = ctx.flat_index(tilde(beta));
                matrix[(alpha_flat, beta_flat)] = coeffs[(g, alpha_flat)] / cr(w);
            } else {
                let w = ratio(alpha).powf(-t) * ratio(beta).powf(-s) * ratio(beta).sqrt();
                let d = ctx.flat_index(tilde(beta));
                matrix[(alpha_flat, beta_flat)] = coeffs[(alpha_flat, d)] / cr(w);
            }
        }
    }
    AdjacencyOp::new(ctx, matrix)
}

/// Subspace of `B(H)` as an HS-orthonormal spanning list of matrices.
#[derive(Debug, Clone)]
pub struct Bimodule {
    pub rep: Representation,
    pub basis: Vec<CMat>,
}

impl Bimodule {
    /// Orthonormalizes a spanning list (largest-residual-first pivoting).
    pub fn from_span(rep: Representation, span: &[CMat], tol: f64) -> Bimodule {
        let vectors: Vec<CVec> = span.iter().map(linalg::vec_of).collect();
        let basis = linalg::orthonormalize(&vectors, tol)
            .into_iter()
            .map(|v| linalg::unvec(&v, rep.h_dim(), rep.h_dim()))
            .collect();
        Bimodule { rep, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn basis_vecs(&self) -> Vec<CVec> {
        self.basis.iter().map(linalg::vec_of).collect()
    }

    /// HS-projection residual of `x` against this subspace.
    pub fn residual(&self, x: &CMat) -> f64 {
        linalg::span_residual(&self.basis_vecs(), &linalg::vec_of(x))
    }

    pub fn contains(&self, x: &CMat, tol: f64) -> bool {
        let scale = linalg::frobenius(x).max(1.0);
        self.residual(x) <= tol * (self.rep.h_dim() as f64) * scale
    }

    /// `‖P_S − P_T‖` between the vectorized subspaces.
    pub fn distance(&self, other: &Bimodule) -> f64 {
        linalg::subspace_distance(&self.basis_vecs(), &other.basis_vecs())
    }

    /// Orthogonal complement inside `B(H)` (Hilbert-Schmidt).
    pub fn orthogonal_complement(&self, tol: f64) -> Bimodule {
        let h = self.rep.h_dim();
        let p = linalg::projector_onto(&self.basis_vecs());
        let compl = linalg::identity(h * h) - p;
        let cols: Vec<CVec> = (0..h * h)
            .map(|j| CVec::from_column_slice(compl.column(j).as_slice()))
            .collect();
        let basis = linalg::orthonormalize(&cols, tol.max(1e-10))
            .into_iter()
            .map(|v| linalg::unvec(&v, h, h))
            .collect();
        Bimodule { rep: self.rep.clone(), basis }
    }
}

/// The bare operator-bimodule property `B' S B' ⊆ S`, with no reference to
/// a functional; usable for bimodules over any algebra.
pub fn is_operator_bimodule(s: &Bimodule, tol: f64) -> bool {
    let comm = s.rep.commutant_basis();
    for x in &comm {
        for y in &comm {
            for b in &s.basis {
                if !s.contains(&(x * b * y), tol) {
                    return false;
                }
            }
        }
    }
    true
}

/// Per-flag report from [`bimodule_check`].
#[derive(Debug, Clone)]
pub struct BimoduleReport {
    pub bimodule: bool,
    pub selfadjoint: bool,
    pub unital: bool,
    pub contains_qinvhalf: bool,
    pub q_invariant: bool,
}

/// Checks the operator-bimodule property over `B'` together with the
/// quantum-graph refinements: self-adjointness, `1 ∈ S`, `Q^{-1/2} ∈ S` and
/// `Q S Q^{-1} = S`. Each flag is decided by projecting test elements onto
/// `span(S)` and thresholding the residual.
pub fn bimodule_check(ctx: &GnsContext, s: &Bimodule) -> BimoduleReport {
    assert_eq!(
        ctx.algebra().block_dims(),
        &s.rep.block_dims[..],
        "bimodule_check needs a context over the bimodule's algebra"
    );
    let tol = ctx.tol();
    let bimodule = is_operator_bimodule(s, tol);
    let selfadjoint = s.basis.iter().all(|b| s.contains(&b.adjoint(), tol));
    let unital = s.contains(&linalg::identity(s.rep.h_dim()), tol);
    let qinvhalf = s.rep.pi(&ctx.q_power(-0.5));
    let contains_qinvhalf = s.contains(&qinvhalf, tol);
    let q = s.rep.pi(&ctx.q_power(1.0));
    let qinv = s.rep.pi(&ctx.q_power(-1.0));
    let q_invariant = s.basis.iter().all(|b| s.contains(&(&q * b * &qinv), tol));
    BimoduleReport { bimodule, selfadjoint, unital, contains_qinvhalf, q_invariant }
}

/// Image of a projection `e ∈ B ⊗ B^op` under `vec⁻¹`, as a bimodule.
pub fn projection_to_bimodule(ctx: &GnsContext, e: &OppTensor) -> Result<Bimodule> {
    e.check_ctx(ctx)?;
    let res = e.projection_residual();
    let h = e.rep.h_dim();
    if res > ctx.tol() * (h * h) as f64 {
        return Err(Error::NotProjection(res));
    }
    let (vals, vecs) = linalg::herm_eig(&e.op);
    let mut basis = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        if v > 0.5 {
            let col = CVec::from_column_slice(vecs.column(i).as_slice());
            basis.push(linalg::unvec(&col, h, h));
        }
    }
    Ok(Bimodule { rep: e.rep.clone(), basis })
}

/// Orthogonal projection onto `vec(S)`, verified to lie in `B ⊗ B^op`.
pub fn bimodule_to_projection(ctx: &GnsContext, s: &Bimodule) -> Result<OppTensor> {
    let p = linalg::projector_onto(&s.basis.iter().map(linalg::vec_of).collect::<Vec<_>>());
    let (_, residual) = opp_decompose(ctx, &s.rep, &p);
    if residual > ctx.tol() * ((s.rep.h_dim() * s.rep.h_dim()) as f64) {
        return Err(Error::NotBimodule(format!(
            "projection onto vec(S) leaves B ⊗ B^op (residual {residual:.3e})"
        )));
    }
    Ok(OppTensor { op: p, rep: s.rep.clone(), ctx_id: ctx.id() })
}

/// The projection of the empty quantum graph: minimal projection fixing
/// `u₀`, with image `(B' ⊗ B'^op)(u₀)`.
pub fn empty_graph_projection(ctx: &GnsContext, rep: &Representation) -> CMat {
    let e = psi_map(ctx, &adjacency::empty_adjacency(ctx), 0.5, 0.0, true).unwrap();
    if *rep == Representation::gns(ctx) {
        e.op
    } else {
        e.transport(ctx, rep).unwrap().op
    }
}

/// Converts a quantum graph adjacency operator into its operator bimodule
/// on the requested representation; fails with the offending axioms if `A`
/// is not self-adjoint with axioms 1 and 2.
pub fn adjacency_to_bimodule(
    ctx: &GnsContext,
    a: &AdjacencyOp,
    rep: &Representation,
) -> Result<Bimodule> {
    let report = adjacency::axiom_report(ctx, a)?;
    if !report.is_quantum_graph() {
        return Err(Error::AxiomsFail(report.failed_core_axioms()));
    }
    let e = psi_map(ctx, a, 0.5, 0.0, true)?;
    // Postconditions of the correspondence theorems: e is a projection,
    // invariant under the swap, commuting with Q ⊗ Q^{-1}.
    let scale = (ctx.dim() * ctx.dim()) as f64;
    debug_assert!(e.projection_residual() <= ctx.tol().max(1e-12) * scale * 10.0);
    let e_target = if *rep == e.rep { e } else { e.transport(ctx, rep)? };
    let swap_res = spectral_norm(&(&e_target.swap().op - &e_target.op));
    if swap_res > ctx.tol() * scale {
        return Err(Error::NotProjection(swap_res));
    }
    let t = q_tensor_qinv(ctx, rep);
    let comm_res = spectral_norm(&(&t * &e_target.op - &e_target.op * &t));
    if comm_res > ctx.tol() * scale * spectral_norm(&t) {
        return Err(Error::NotProjection(comm_res));
    }
    projection_to_bimodule(ctx, &e_target)
}

/// Inverse of [`adjacency_to_bimodule`].
pub fn bimodule_to_adjacency(ctx: &GnsContext, s: &Bimodule) -> Result<AdjacencyOp> {
    let e = bimodule_to_projection(ctx, s)?;
    psi_inv(ctx, &e, 0.5, 0.0, true)
}

/// The reflexivity witnesses `u₀ = (1 ⊗ (Q^{-1/2})ᵀ) 1̂` and
/// `u₁ = (Q^{-1/2} ⊗ 1) 1̂`.
pub fn reflexivity_vectors(ctx: &GnsContext, rep: &Representation) -> (CVec, CVec) {
    let h = rep.h_dim();
    let one_hat = linalg::vec_of(&linalg::identity(h));
    let qinvhalf = rep.pi(&ctx.q_power(-0.5));
    let u0 = kron(&linalg::identity(h), &qinvhalf.transpose()) * &one_hat;
    let u1 = kron(&qinvhalf, &linalg::identity(h)) * &one_hat;
    (u0, u1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopMode {
    AllLoops,
    NoLoops,
}

/// Loop conditions through the reflexivity vectors: all loops iff
/// `e(u₀) = u₀`, no loops iff `e(u₀) = 0`; the `u₀` and `u₁` verdicts must
/// agree, otherwise the projection is broken and an error is raised.
pub fn loop_check(ctx: &GnsContext, e: &OppTensor, mode: LoopMode) -> Result<bool> {
    e.check_ctx(ctx)?;
    let (u0, u1) = reflexivity_vectors(ctx, &e.rep);
    let tol = ctx.tol() * (e.rep.h_dim() as f64);
    let verdict = |u: &CVec| -> bool {
        let image = &e.op * u;
        let scale = u.norm().max(1.0);
        match mode {
            LoopMode::AllLoops => (image - u).norm() <= tol * scale,
            LoopMode::NoLoops => image.norm() <= tol * scale,
        }
    };
    let v0 = verdict(&u0);
    let v1 = verdict(&u1);
    if v0 != v1 {
        return Err(Error::InconsistentVerdict);
    }
    Ok(v0)
}

/// Tracial reduction `S₀ = q^{1/2} S` with `q = π(Q)` as the positive
/// implementer of the modular group on the representation space.
pub fn tracial_reduce(ctx: &GnsContext, s: &Bimodule) -> Result<Bimodule> {
    let report = bimodule_check(ctx, s);
    if !report.bimodule {
        return Err(Error::NotBimodule("tracial reduction needs a bimodule".into()));
    }
    let qhalf = s.rep.pi(&ctx.q_power(0.5));
    let span: Vec<CMat> = s.basis.iter().map(|b| &qhalf * b).collect();
    Ok(Bimodule::from_span(s.rep.clone(), &span, ctx.tol()))
}

/// Inverse of [`tracial_reduce`]: `S = q^{-1/2} S₀`.
pub fn tracial_expand(ctx: &GnsContext, s0: &Bimodule) -> Result<Bimodule> {
    let report = bimodule_check(ctx, s0);
    if !report.bimodule {
        return Err(Error::NotBimodule("tracial expansion needs a bimodule".into()));
    }
    let qinvhalf = s0.rep.pi(&ctx.q_power(-0.5));
    let span: Vec<CMat> = s0.basis.iter().map(|b| &qinvhalf * b).collect();
    Ok(Bimodule::from_span(s0.rep.clone(), &span, ctx.tol()))
}

/// `B'`-operator bimodule generated by a list of seeds:
/// `span{x s y : x, y ∈ commutant basis, s ∈ seeds}`.
pub fn generate_bimodule(rep: &Representation, seeds: &[CMat], tol: f64) -> Bimodule {
    let comm = rep.commutant_basis();
    let mut span = Vec::with_capacity(comm.len() * comm.len() * seeds.len());
    for x in &comm {
        for s in seeds {
            for y in &comm {
                span.push(x * s * y);
            }
        }
    }
    Bimodule::from_span(rep.clone(), &span, tol)
}

/// Complement of a quantum graph at the bimodule level:
/// `S_c = S^⊥ + B' Q^{-1/2} B'`.
pub fn bimodule_complement(ctx: &GnsContext, s: &Bimodule) -> Bimodule {
    let perp = s.orthogonal_complement(ctx.tol());
    let smin = generate_bimodule(&s.rep, &[s.rep.pi(&ctx.q_power(-0.5))], ctx.tol());
    let mut span = perp.basis;
    span.extend(smin.basis);
    Bimodule::from_span(s.rep.clone(), &span, ctx.tol())
}

/// Result of the `M₂` classification.
#[derive(Debug)]
pub struct M2Classification {
    pub context: GnsContext,
    pub rep: Representation,
    pub graphs: Vec<Bimodule>,
    /// Set for `q = 1`: the tracial family is a continuum and only the
    /// eigenspace-lattice representatives are emitted.
    pub tracial_continuum: bool,
}

/// Enumerates the quantum graphs over `M₂` with the Powers density `Q_q`,
/// i.e. the self-adjoint unital subspaces spanned by eigenvectors of
/// conjugation by `Q_q` that contain `Q_q^{-1/2}`. For `q ≠ 1` these are
/// exactly four subspaces of dimensions 1, 2, 3, 4.
pub fn classify_m2(q: f64) -> Result<M2Classification> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::BadQ(q));
    }
    let tracial = (q - 1.0).abs() < 1e-12;
    let alg = crate::algebra::BlockAlgebra::new(vec![2])?;
    let mut qel = alg.zero();
    qel.blocks[0][(0, 0)] = cr(1.0 / (1.0 + q * q));
    qel.blocks[0][(1, 1)] = cr(q * q / (1.0 + q * q));
    let ctx = crate::algebra::make_context(vec![2], qel, true)?;
    let rep = Representation::full_matrix(2);

    // Generators adapted to the eigenspaces of conjugation by Q_q: the
    // (2-dimensional) fixed diagonal space split along Q^{-1/2} and its
    // orthogonal complement, plus the two off-diagonal eigenlines.
    let qinvhalf = CMat::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(1.0 / q)]);
    let diag_perp = CMat::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-q)]);
    let e12 = CMat::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(0.0), cr(0.0)]);
    let e21 = CMat::from_row_slice(2, 2, &[cr(0.0), cr(0.0), cr(1.0), cr(0.0)]);
    let gens = [qinvhalf, diag_perp, e12, e21];

    let mut graphs: Vec<Bimodule> = Vec::new();
    for mask in 1u32..16 {
        let chosen: Vec<CMat> = (0..4)
            .filter(|bit| mask & (1 << bit) != 0)
            .map(|bit| gens[bit].clone())
            .collect();
        let s = Bimodule::from_span(rep.clone(), &chosen, ctx.tol());
        let report = bimodule_check(&ctx, &s);
        if !(report.bimodule && report.selfadjoint && report.q_invariant && report.contains_qinvhalf)
        {
            continue;
        }
        if graphs.iter().all(|g| g.distance(&s) > 1e-6) {
            graphs.push(s);
        }
    }
    graphs.sort_by_key(|g| g.dim());
    Ok(M2Classification { context: ctx, rep, graphs, tracial_continuum: tracial })
}
