//! Classical automorphisms of `(B, ψ)` and of quantum graphs, plus
//! verification of quantum-symmetry corepresentation certificates over
//! concrete finite-dimensional algebras.
//!
//! Universal quantum automorphism algebras are not finitely representable,
//! so quantum symmetries are handled purely as certificates: a concrete
//! block algebra `A` and a unitary `v ∈ M_n(A)` whose coaction relations
//! are checked blockwise.

use crate::adjacency::{AdjacencyOp, ClassicalGraph};
use crate::algebra::{AlgebraElement, BlockAlgebra, GnsContext};
use crate::correspondence::{self};
use crate::error::Error;
use crate::linalg::{self, cr, kron, spectral_norm, CMat};
use crate::Result;

/// Candidate automorphism of `B = ⊕_k M_{n_k}`: a permutation of
/// equal-dimension blocks together with per-block unitaries, acting as
/// `θ(x)_{p(k)} = u_k x_k u_k*`.
#[derive(Debug, Clone)]
pub struct AutoCandidate {
    pub block_permutation: Vec<usize>,
    pub unitaries: Vec<CMat>,
}

impl AutoCandidate {
    pub fn new(
        alg: &BlockAlgebra,
        block_permutation: Vec<usize>,
        unitaries: Vec<CMat>,
        tol: f64,
    ) -> Result<Self> {
        let dims = alg.block_dims();
        let nblocks = dims.len();
        let mut seen = vec![false; nblocks];
        if block_permutation.len() != nblocks || unitaries.len() != nblocks {
            return Err(Error::BadShape("one target and one unitary per block".into()));
        }
        for (k, &p) in block_permutation.iter().enumerate() {
            if p >= nblocks || seen[p] {
                return Err(Error::BadShape("block map is not a permutation".into()));
            }
            seen[p] = true;
            if dims[p] != dims[k] {
                return Err(Error::BadShape(format!(
                    "block {k} (dim {}) cannot map to block {p} (dim {})",
                    dims[k], dims[p]
                )));
            }
            let u = &unitaries[k];
            if u.nrows() != dims[k] || u.ncols() != dims[k] {
                return Err(Error::BadShape("unitary has wrong size".into()));
            }
            let defect = spectral_norm(&(u.adjoint() * u - linalg::identity(dims[k])));
            if defect > tol * dims[k] as f64 * 10.0 {
                return Err(Error::BadShape(format!(
                    "block {k} implementer is not unitary (defect {defect:.3e})"
                )));
            }
        }
        Ok(AutoCandidate { block_permutation, unitaries })
    }

    pub fn identity(alg: &BlockAlgebra) -> AutoCandidate {
        AutoCandidate {
            block_permutation: (0..alg.num_blocks()).collect(),
            unitaries: alg.block_dims().iter().map(|&n| linalg::identity(n)).collect(),
        }
    }

    pub fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut blocks: Vec<CMat> = a.blocks.iter().map(|b| linalg::zeros(b.nrows(), b.ncols())).collect();
        for (k, &p) in self.block_permutation.iter().enumerate() {
            blocks[p] = &self.unitaries[k] * &a.blocks[k] * self.unitaries[k].adjoint();
        }
        AlgebraElement { blocks }
    }

    /// `θ₁ ∘ θ₂`.
    pub fn compose(&self, other: &AutoCandidate) -> AutoCandidate {
        let n = self.block_permutation.len();
        let mut perm = vec![0usize; n];
        let mut unitaries = Vec::with_capacity(n);
        for k in 0..n {
            let mid = other.block_permutation[k];
            perm[k] = self.block_permutation[mid];
            unitaries.push(&self.unitaries[mid] * &other.unitaries[k]);
        }
        AutoCandidate { block_permutation: perm, unitaries }
    }

    pub fn inverse(&self) -> AutoCandidate {
        let n = self.block_permutation.len();
        let mut perm = vec![0usize; n];
        let mut unitaries = vec![CMat::zeros(0, 0); n];
        for (k, &p) in self.block_permutation.iter().enumerate() {
            perm[p] = k;
            unitaries[p] = self.unitaries[k].adjoint();
        }
        AutoCandidate { block_permutation: perm, unitaries }
    }
}

/// `θ ∈ Aut(B, ψ)` iff `θ(Q) = Q`; commutation with the modular group is
/// asserted alongside as a consistency check.
pub fn is_state_automorphism(ctx: &GnsContext, th: &AutoCandidate) -> bool {
    let q = ctx.q_power(1.0);
    let moved = th.apply(&q);
    let tol = ctx.tol() * (ctx.dim() as f64);
    if moved.sub(&q).norm() > tol * q.norm().max(1.0) {
        return false;
    }
    // θ ∘ σ_t = σ_t ∘ θ on sample points, probed with a generic element
    // (a fixed dense matrix per block, not a function of Q).
    let mut probe = ctx.algebra().zero();
    for (k, block) in probe.blocks.iter_mut().enumerate() {
        let n = block.nrows();
        for u in 0..n {
            for v in 0..n {
                block[(u, v)] = crate::linalg::c(
                    1.0 + (k + 2 * u + 3 * v) as f64,
                    (u as f64) - (v as f64),
                );
            }
        }
    }
    for t in [0.3, 1.0] {
        let z = cr(t);
        let lhs = th.apply(&ctx.sigma(&probe, z).unwrap());
        let rhs = ctx.sigma(&th.apply(&probe), z).unwrap();
        if lhs.sub(&rhs).norm() > tol * 10.0 * probe.norm().max(1.0) {
            return false;
        }
    }
    true
}

/// The unitary `θ̂` on `L²(B)` with `θ̂ Λ(b) = Λ(θ(b))`.
pub fn theta_hat(ctx: &GnsContext, th: &AutoCandidate) -> Result<CMat> {
    if !is_state_automorphism(ctx, th) {
        return Err(Error::NotStatePreserving);
    }
    let dim = ctx.dim();
    let mut out = linalg::zeros(dim, dim);
    for (flat, &idx) in ctx.basis_indices().iter().enumerate() {
        let image = th.apply(&ctx.gns_basis_element(idx));
        out.set_column(flat, &ctx.lambda_coords(&image));
    }
    Ok(out)
}

/// Automorphism of a quantum graph: `A` and `θ̂` commute. The equivalent
/// criterion `(θ⊗θ)(e) = e` is evaluated alongside and the two verdicts
/// must agree.
pub fn is_graph_automorphism(ctx: &GnsContext, th: &AutoCandidate, a: &AdjacencyOp) -> Result<bool> {
    a.check_ctx(ctx)?;
    let hat = theta_hat(ctx, th)?;
    let tol = ctx.tol() * (ctx.dim() as f64);
    let scale = spectral_norm(&a.matrix).max(1.0);
    let commute = spectral_norm(&(&a.matrix * &hat - &hat * &a.matrix)) <= tol * scale;

    // fixed-point criterion on e = Ψ'_{1/2,0}(A)
    let e = correspondence::psi_map(ctx, a, 0.5, 0.0, true)?;
    let rep = e.rep.clone();
    let (coeffs, _) = correspondence::opp_decompose(ctx, &rep, &e.op);
    let indices = ctx.basis_indices();
    let mut moved = linalg::zeros(e.op.nrows(), e.op.ncols());
    let pis: Vec<CMat> = indices
        .iter()
        .map(|&idx| rep.pi(&th.apply(&ctx.gns_basis_element(idx))))
        .collect();
    for g in 0..indices.len() {
        for d in 0..indices.len() {
            let cgd = coeffs[(g, d)];
            if cgd.norm() < 1e-300 {
                continue;
            }
            moved += kron(&pis[g], &pis[d].transpose()).map(|x| x * cgd);
        }
    }
    let fixed = spectral_norm(&(&moved - &e.op)) <= tol * spectral_norm(&e.op).max(1.0);
    if commute != fixed {
        return Err(Error::VerdictMismatch);
    }
    Ok(commute)
}

/// Corepresentation certificate: a concrete block algebra and an `n × n`
/// matrix of its elements, `n = dim L²(B)`.
#[derive(Debug, Clone)]
pub struct CorepCertificate {
    pub symmetry_algebra: BlockAlgebra,
    pub v: Vec<Vec<AlgebraElement>>,
}

/// Outcome of [`corep_check`]: each relation with its worst blockwise
/// residual.
#[derive(Debug, Clone)]
pub struct CorepReport {
    pub unitary: bool,
    pub multiplicative: bool,
    pub unital: bool,
    pub psi_invariant: bool,
    pub x_identities: bool,
    pub commutes_with_adjacency: Option<bool>,
    pub residuals: Vec<(String, f64)>,
}

impl CorepReport {
    pub fn all_coaction_relations(&self) -> bool {
        self.unitary && self.multiplicative && self.unital && self.psi_invariant && self.x_identities
    }
}

/// Flattens `v` on symmetry-algebra block `l` into the matrix
/// `V[(i,a),(j,b)] = v_ij[l][a,b]` acting on `C^n ⊗ C^{c_l}`.
fn flatten_block(cert: &CorepCertificate, l: usize, n: usize) -> CMat {
    let c = cert.symmetry_algebra.block_dims()[l];
    let mut big = linalg::zeros(n * c, n * c);
    for i in 0..n {
        for j in 0..n {
            let blk = &cert.v[i][j].blocks[l];
            for a in 0..c {
                for b in 0..c {
                    big[(i * c + a, j * c + b)] = blk[(a, b)];
                }
            }
        }
    }
    big
}

/// The scalar matrix `X_ij = (Λ(f_i)|Λ(f_j*)) = ψ(f_i* f_j*)`.
pub fn x_matrix(ctx: &GnsContext) -> CMat {
    let indices = ctx.basis_indices();
    let n = indices.len();
    CMat::from_fn(n, n, |i, j| {
        let fi = ctx.gns_basis_element(indices[i]);
        let fj = ctx.gns_basis_element(indices[j]);
        ctx.gns_inner(&fi, &fj.adjoint())
    })
}

/// Verifies the corepresentation relations of a certificate against
/// `(B, ψ)` and optionally an adjacency operator:
/// unitarity, `m ∈ hom(v ⊠ v, v)`, `η ∈ hom(1, v)`, `ηη* ∈ hom(v, v)`,
/// the `X`-matrix identities, and commutation `(A⊗1)v = v(A⊗1)`.
pub fn corep_check(
    ctx: &GnsContext,
    cert: &CorepCertificate,
    adjacency: Option<&AdjacencyOp>,
) -> Result<CorepReport> {
    let n = ctx.dim();
    if cert.v.len() != n || cert.v.iter().any(|row| row.len() != n) {
        return Err(Error::BadShape(format!("certificate matrix must be {n} x {n}")));
    }
    for row in &cert.v {
        for el in row {
            cert.symmetry_algebra.check_shape(el)?;
        }
    }
    if let Some(a) = adjacency {
        a.check_ctx(ctx)?;
    }

    let tol = ctx.tol() * (n as f64) * 10.0;
    let mut residuals: Vec<(String, f64)> = Vec::new();
    let mut worst = |name: &str, value: f64| {
        match residuals.iter_mut().find(|(k, _)| k == name) {
            Some(entry) => entry.1 = entry.1.max(value),
            None => residuals.push((name.to_string(), value)),
        }
    };

    let m = ctx.multiplication();
    let eta = CMat::from_column_slice(n, 1, ctx.eta().as_slice());
    let x = x_matrix(ctx);
    let x_conj = x.map(|z| z.conj());
    // X X̄ = 1 is an identity of (B, ψ) itself.
    let xres = spectral_norm(&(&x * &x_conj - linalg::identity(n)));
    worst("x_times_xbar", xres);

    let amat = adjacency.map(|a| &a.matrix);

    for l in 0..cert.symmetry_algebra.num_blocks() {
        let c = cert.symmetry_algebra.block_dims()[l];
        let v = flatten_block(cert, l, n);
        let idc = linalg::identity(n * c);
        worst("unitary", spectral_norm(&(v.adjoint() * &v - &idc)));
        worst("unitary", spectral_norm(&(&v * v.adjoint() - &idc)));

        // v ⊠ v = v₁₃ v₂₃ on C^n ⊗ C^n ⊗ C^c
        let mut v13 = linalg::zeros(n * n * c, n * n * c);
        let mut v23 = linalg::zeros(n * n * c, n * n * c);
        for i in 0..n {
            for j in 0..n {
                let blk = &cert.v[i][j].blocks[l];
                let mut unit = linalg::zeros(n, n);
                unit[(i, j)] = cr(1.0);
                v13 += kron(&kron(&unit, &linalg::identity(n)), blk);
                v23 += kron(&kron(&linalg::identity(n), &unit), blk);
            }
        }
        let boxed = &v13 * &v23;
        let m_ext = kron(m, &linalg::identity(c));
        worst("multiplicative", spectral_norm(&(&m_ext * boxed - &v * &m_ext)));

        let eta_ext = kron(&eta, &linalg::identity(c));
        worst("unital", spectral_norm(&(&v * &eta_ext - &eta_ext)));

        let proj = kron(&(&eta * eta.adjoint()), &linalg::identity(c));
        worst("psi_invariant", spectral_norm(&(&proj * &v - &v * &proj)));

        // v = (X ⊗ 1) v̄ (X̄ ⊗ 1), with v̄ the entrywise adjoint.
        let mut vbar = linalg::zeros(n * c, n * c);
        for i in 0..n {
            for j in 0..n {
                let blk = cert.v[i][j].blocks[l].adjoint();
                for a in 0..c {
                    for b in 0..c {
                        vbar[(i * c + a, j * c + b)] = blk[(a, b)];
                    }
                }
            }
        }
        let x_ext = kron(&x, &linalg::identity(c));
        let xbar_ext = kron(&x_conj, &linalg::identity(c));
        worst("x_conjugate", spectral_norm(&(&v - x_ext * vbar * xbar_ext)));

        if let Some(am) = amat {
            let a_ext = kron(am, &linalg::identity(c));
            worst(
                "commutes_with_adjacency",
                spectral_norm(&(&a_ext * &v - &v * &a_ext)),
            );
        }
    }

    let get = |name: &str| -> f64 {
        residuals
            .iter()
            .find(|(k, _)| k == name)
            .map(|&(_, v)| v)
            .unwrap_or(0.0)
    };
    Ok(CorepReport {
        unitary: get("unitary") <= tol,
        multiplicative: get("multiplicative") <= tol,
        unital: get("unital") <= tol,
        psi_invariant: get("psi_invariant") <= tol,
        x_identities: get("x_times_xbar") <= tol && get("x_conjugate") <= tol,
        commutes_with_adjacency: amat.map(|_| get("commutes_with_adjacency") <= tol),
        residuals,
    })
}

/// Brute-force automorphism group of a classical graph (all vertex
/// permutations filtered by edge preservation). Limited to 8 vertices.
pub fn graph_automorphisms(graph: &ClassicalGraph) -> Result<Vec<Vec<usize>>> {
    let n = graph.vertices;
    if n > 8 {
        return Err(Error::TooLarge(format!("{n} vertices; brute force is capped at 8")));
    }
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        // σ × σ is injective, so mapping E into E already forces equality.
        if graph
            .edges
            .iter()
            .all(|&(u, v)| graph.edges.contains(&(perm[u], perm[v])))
        {
            out.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(out)
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Packages `Aut(graph)` as a commutative certificate: `A = C(Aut)` and
/// `v_ij(σ) = δ_{i, σ(j)}`. Passes [`corep_check`] by construction.
pub fn classical_certificate(graph: &ClassicalGraph) -> Result<CorepCertificate> {
    let auts = graph_automorphisms(graph)?;
    let n = graph.vertices;
    let order = auts.len();
    let alg = BlockAlgebra::new(vec![1; order])?;
    let mut v = vec![vec![alg.zero(); n]; n];
    for (g, sigma) in auts.iter().enumerate() {
        for j in 0..n {
            v[sigma[j]][j].blocks[g][(0, 0)] = cr(1.0);
        }
    }
    Ok(CorepCertificate { symmetry_algebra: alg, v })
}

/// The trivial certificate: `A = C`, `v = 1`.
pub fn trivial_certificate(ctx: &GnsContext) -> CorepCertificate {
    let alg = BlockAlgebra::new(vec![1]).unwrap();
    let n = ctx.dim();
    let mut v = vec![vec![alg.zero(); n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = alg.one();
    }
    CorepCertificate { symmetry_algebra: alg, v }
}
