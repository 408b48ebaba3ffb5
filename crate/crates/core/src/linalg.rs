//! Dense complex linear algebra helpers used throughout the crate.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Vectorization is row-major:
//! `vec(X)[i*cols + j] = X[(i, j)]`, which realises the GNS map for `Tr` on
//! `B(H)` under the convention `θ_{ξ,η} ↦ η ⊗ ξ̄`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMat {
    CMat::zeros(rows, cols)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn frobenius(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn is_hermitian(a: &CMat, tol: f64) -> bool {
    frobenius(&(a - a.adjoint())) <= tol * (1.0 + frobenius(a))
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching orthonormal eigenvector columns.
///
/// Cyclic Jacobi with two-sided unitary rotations. Chosen over QR-based
/// routines because it stays accurate on matrices with large degenerate
/// clusters, which the quantum-graph projections produce routinely.
pub fn herm_eig(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "herm_eig needs a square matrix");
    // Work on the exactly Hermitian part so tiny asymmetries cannot leak in.
    let mut h = (a + a.adjoint()).scale(0.5);
    let mut v = identity(n);
    let scale = frobenius(&h).max(1e-300);

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += h[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = h[(p, q)];
                let gn = g.norm();
                if gn <= 1e-18 * scale {
                    continue;
                }
                let app = h[(p, p)].re;
                let aqq = h[(q, q)].re;
                let phase = g / gn;
                // Factor the phase out (D = diag(1, conj(phase)) turns the
                // pivot block into the real [[app, |g|], [|g|, aqq]]), then
                // rotate by R = [[c, -s], [s, c]] with the smaller angle:
                // the annihilation condition is t² - 2τt - 1 = 0.
                let tau = (aqq - app) / (2.0 * gn);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U = D·R, written entrywise: U[p,p], U[p,q], U[q,p], U[q,q].
                let ubar = phase.conj();
                let (up_p, up_q) = (cr(c), cr(-s));
                let (uq_p, uq_q) = (ubar * cr(s), ubar * cr(c));
                // A ← U† A U; update columns then rows.
                for r in 0..n {
                    let hp = h[(r, p)];
                    let hq = h[(r, q)];
                    h[(r, p)] = hp * up_p + hq * uq_p;
                    h[(r, q)] = hp * up_q + hq * uq_q;
                }
                for ccol in 0..n {
                    let hp = h[(p, ccol)];
                    let hq = h[(q, ccol)];
                    h[(p, ccol)] = up_p.conj() * hp + uq_p.conj() * hq;
                    h[(q, ccol)] = up_q.conj() * hp + uq_q.conj() * hq;
                }
                for r in 0..n {
                    let vp = v[(r, p)];
                    let vq = v[(r, q)];
                    v[(r, p)] = vp * up_p + vq * uq_p;
                    v[(r, q)] = vp * up_q + vq * uq_q;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| h[(p, p)].re.partial_cmp(&h[(q, q)].re).unwrap());
    let vals: Vec<f64> = order.iter().map(|&p| h[(p, p)].re).collect();
    let mut vecs = zeros(n, n);
    for (col, &p) in order.iter().enumerate() {
        vecs.set_column(col, &v.column(p));
    }
    (vals, vecs)
}

/// Operator (spectral) norm, computed as the square root of the largest
/// eigenvalue of `a† a`.
pub fn spectral_norm(a: &CMat) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    let gram = a.adjoint() * a;
    let (vals, _) = herm_eig(&gram);
    vals.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Row-major vectorization.
pub fn vec_of(m: &CMat) -> CVec {
    let (r, cl) = m.shape();
    CVec::from_fn(r * cl, |idx, _| m[(idx / cl, idx % cl)])
}

pub fn unvec(v: &CVec, rows: usize, cols: usize) -> CMat {
    assert_eq!(v.len(), rows * cols, "unvec length mismatch");
    CMat::from_fn(rows, cols, |i, j| v[i * cols + j])
}

/// Tensor-flip unitary on `C^n ⊗ C^n`.
pub fn swap_matrix(n: usize) -> CMat {
    let mut s = zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            s[(i * n + j, j * n + i)] = cr(1.0);
        }
    }
    s
}

fn inner(a: &CVec, b: &CVec) -> Complex64 {
    a.dotc(b)
}

/// Modified Gram–Schmidt with largest-residual-first pivoting. Vectors whose
/// residual drops below `tol * scale` are dropped, so the result is an
/// orthonormal basis of the span. The pivot rule is fixed to keep bimodule
/// bases reproducible across runs.
pub fn orthonormalize(vectors: &[CVec], tol: f64) -> Vec<CVec> {
    let scale = vectors
        .iter()
        .map(|v| v.norm())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let mut residuals: Vec<CVec> = vectors.to_vec();
    let mut basis: Vec<CVec> = Vec::new();
    loop {
        let mut best = 0usize;
        let mut best_norm = -1.0f64;
        for (idx, v) in residuals.iter().enumerate() {
            let n = v.norm();
            if n > best_norm {
                best_norm = n;
                best = idx;
            }
        }
        if best_norm <= tol * scale {
            break;
        }
        let picked = residuals.swap_remove(best).normalize();
        for v in residuals.iter_mut() {
            let coef = inner(&picked, v);
            *v -= picked.scale(1.0) * coef;
        }
        basis.push(picked);
        if residuals.is_empty() {
            break;
        }
    }
    basis
}

/// Orthogonal projection matrix onto the span of an orthonormal family.
pub fn projector_onto(basis: &[CVec]) -> CMat {
    let n = basis.first().map(|v| v.len()).unwrap_or(0);
    let mut p = zeros(n, n);
    for v in basis {
        p += v * v.adjoint();
    }
    p
}

/// Residual of `x` against the span of an orthonormal family.
pub fn span_residual(basis: &[CVec], x: &CVec) -> f64 {
    let mut r = x.clone();
    for v in basis {
        let coef = inner(v, x);
        r -= v * coef;
    }
    r.norm()
}

/// Spectral distance between two subspaces given by orthonormal bases,
/// `‖P_A − P_B‖`.
pub fn subspace_distance(a: &[CVec], b: &[CVec]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let n = a
        .first()
        .or_else(|| b.first())
        .map(|v| v.len())
        .unwrap_or(0);
    let pa = if a.is_empty() {
        zeros(n, n)
    } else {
        projector_onto(a)
    };
    let pb = if b.is_empty() {
        zeros(n, n)
    } else {
        projector_onto(b)
    };
    spectral_norm(&(pa - pb))
}
