//! Random instance generators: elements, densities, contexts, quantum
//! graphs and channels. Used by the test suites and by consumers that want
//! reproducible randomized checks; every generator takes an explicit RNG.

use num_complex::Complex64;
use rand::Rng;

use crate::adjacency::AdjacencyOp;
use crate::algebra::{
    make_context, AlgebraElement, BlockAlgebra, FaithfulFunctional, GnsContext,
};
use crate::channels::KrausMap;
use crate::correspondence::{self, OppTensor, Representation};
use crate::linalg::{self, c, cr, CMat, CVec};

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| random_complex(rng))
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| random_complex(rng))
}

pub fn random_element<R: Rng>(rng: &mut R, alg: &BlockAlgebra) -> AlgebraElement {
    AlgebraElement {
        blocks: alg
            .block_dims()
            .iter()
            .map(|&n| random_matrix(rng, n, n))
            .collect(),
    }
}

pub fn random_hermitian_element<R: Rng>(rng: &mut R, alg: &BlockAlgebra) -> AlgebraElement {
    let a = random_element(rng, alg);
    a.add(&a.adjoint()).scale(cr(0.5))
}

/// Random faithful density, positive definite per block; normalized to a
/// state when `normalized` is set.
pub fn random_density<R: Rng>(
    rng: &mut R,
    alg: &BlockAlgebra,
    normalized: bool,
) -> FaithfulFunctional {
    let g = random_element(rng, alg);
    let mut q = g.mul(&g.adjoint()).add(&alg.one().scale(cr(0.2)));
    if normalized {
        let total = q.trace().re;
        q = q.scale(cr(1.0 / total));
    }
    FaithfulFunctional { q, normalized }
}

pub fn random_context<R: Rng>(rng: &mut R, block_dims: &[usize], normalized: bool) -> GnsContext {
    let alg = BlockAlgebra::new(block_dims.to_vec()).unwrap();
    let q = random_density(rng, &alg, normalized);
    make_context(block_dims.to_vec(), q.q, normalized).unwrap()
}

/// Random projection `e ∈ B ⊗ B^op` satisfying the quantum-graph symmetries:
/// `e = e* = e²`, `σ(e) = e` and `[e, Q ⊗ Q^{-1}] = 0`. Built by projecting
/// a random self-adjoint element of `B ⊗ B^op` onto the commutant of
/// `Q ⊗ Q^{-1}` (a pinching, which stays in the algebra), symmetrizing under
/// the tensor swap, and spectrally truncating at a gap in the spectrum.
/// With `with_loops` the image is enlarged by the empty graph's subspace so
/// that the reflexivity axiom holds as well.
pub fn random_graph_projection<R: Rng>(
    rng: &mut R,
    ctx: &GnsContext,
    with_loops: bool,
) -> OppTensor {
    let rep = Representation::gns(ctx);
    let dim = ctx.dim();
    let coeffs = random_matrix(rng, dim, dim);
    let mut x = correspondence::opp_from_coeffs(ctx, &rep, &coeffs);
    x = (&x + x.adjoint()).unscale(2.0);
    // Pinch onto the commutant of T = Q ⊗ Q^{-1} (diagonal in this frame):
    // zero every entry joining different diagonal values of T.
    let t = correspondence::q_tensor_qinv(ctx, &rep);
    let tdiag: Vec<f64> = (0..t.nrows()).map(|i| t[(i, i)].re).collect();
    let n = x.nrows();
    for r in 0..n {
        for cidx in 0..n {
            if (tdiag[r] - tdiag[cidx]).abs() > 1e-9 * (1.0 + tdiag[r].abs()) {
                x[(r, cidx)] = cr(0.0);
            }
        }
    }
    // Symmetrize under the tensor swap.
    let hh = rep.h_dim();
    let swap = linalg::swap_matrix(hh);
    let x_swapped = &swap * x.transpose() * &swap;
    x = (&x + x_swapped).unscale(2.0);

    // Spectral truncation at the widest gap near the middle of the spectrum.
    let (vals, vecs) = linalg::herm_eig(&x);
    let mut cut_idx = vals.len() / 2;
    let mut best_gap = -1.0;
    let lo = vals.len() / 4;
    let hi = (3 * vals.len() / 4).max(lo + 1).min(vals.len() - 1);
    for i in lo..hi {
        let gap = vals[i + 1] - vals[i];
        if gap > best_gap {
            best_gap = gap;
            cut_idx = i + 1;
        }
    }
    let selected: Vec<CVec> = (cut_idx..vals.len())
        .map(|i| CVec::from_column_slice(vecs.column(i).as_slice()))
        .collect();
    let mut proj = linalg::projector_onto(&selected);

    if with_loops {
        // Join with the empty graph projection so that u0 lands inside the
        // image; the lattice join of two projections in B ⊗ B^op stays in
        // the algebra.
        let e_min = correspondence::empty_graph_projection(ctx, &rep);
        let mut cols: Vec<CVec> = selected;
        for i in 0..e_min.ncols() {
            cols.push(CVec::from_column_slice(e_min.column(i).as_slice()));
        }
        let basis = linalg::orthonormalize(&cols, 1e-10);
        proj = linalg::projector_onto(&basis);
    }

    OppTensor::from_matrix_unchecked(ctx, rep, proj)
}

/// Random quantum graph adjacency operator (self-adjoint, axioms 1 and 2;
/// also axiom 3 when `with_loops`).
pub fn random_quantum_graph<R: Rng>(
    rng: &mut R,
    ctx: &GnsContext,
    with_loops: bool,
) -> AdjacencyOp {
    let e = random_graph_projection(rng, ctx, with_loops);
    correspondence::psi_inv(ctx, &e, 0.5, 0.0, true).unwrap()
}

/// Random unital Kraus map `M_{d2} → M_{d1}` with `num_ops` Kraus operators.
pub fn random_ucp_kraus<R: Rng>(rng: &mut R, d1: usize, d2: usize, num_ops: usize) -> KrausMap {
    loop {
        let ops: Vec<CMat> = (0..num_ops).map(|_| random_matrix(rng, d2, d1)).collect();
        // Normalize: with S = Σ E*E, replace E ← E S^{-1/2}.
        let mut s = linalg::zeros(d1, d1);
        for e in &ops {
            s += e.adjoint() * e;
        }
        let (vals, vecs) = linalg::herm_eig(&s);
        if vals.iter().any(|&v| v < 1e-6) {
            continue;
        }
        let inv_sqrt = &vecs
            * CMat::from_diagonal(&CVec::from_iterator(
                vals.len(),
                vals.iter().map(|&v| cr(1.0 / v.sqrt())),
            ))
            * vecs.adjoint();
        let kraus: Vec<CMat> = ops.iter().map(|e| e * &inv_sqrt).collect();
        let source = Representation::full_matrix(d2);
        let target = Representation::full_matrix(d1);
        match KrausMap::new(source, target, kraus, crate::DEFAULT_TOL) {
            Ok(k) => return k,
            Err(_) => continue,
        }
    }
}

/// Random mixed-unitary channel on `M_d`: Kraus operators `sqrt(p_k) U_k`.
/// Both unital and trace preserving.
pub fn random_mixed_unitary<R: Rng>(rng: &mut R, d: usize, num_ops: usize) -> KrausMap {
    let mut weights: Vec<f64> = (0..num_ops).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    let kraus: Vec<CMat> = weights
        .iter()
        .map(|&w| random_unitary(rng, d).map(|z| z * cr(w.sqrt())))
        .collect();
    KrausMap::new(
        Representation::full_matrix(d),
        Representation::full_matrix(d),
        kraus,
        crate::DEFAULT_TOL,
    )
    .unwrap()
}

/// Haar-ish random unitary from Gram-Schmidt applied to a Ginibre matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let g = random_matrix(rng, n, n);
    let mut basis: Vec<CVec> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = CVec::from_column_slice(g.column(j).as_slice());
        for b in &basis {
            let coef = b.dotc(&v);
            v -= b * coef;
        }
        basis.push(v.normalize());
    }
    let mut u = linalg::zeros(n, n);
    for (j, b) in basis.iter().enumerate() {
        u.set_column(j, b);
    }
    u
}
