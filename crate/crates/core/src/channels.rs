//! Quantum channels as UCP maps in Kraus form: Stinespring dilations,
//! confusability graphs, pullbacks and pushforwards of quantum relations,
//! CP adjoints under trace restrictions, and CP-morphism checks.
//!
//! A [`KrausMap`] encodes `θ: C → B`, `θ(c) = Σ_k E_k* c E_k`, with `C`
//! represented on `H₂` (the source), `B` on `H₁` (the target), and Kraus
//! operators `E_k: H₁ → H₂`. Unitality `Σ E_k* E_k = 1` is enforced, as is
//! the range condition `θ(C) ⊆ π(B)`.

use crate::algebra::FaithfulFunctional;
use crate::correspondence::{is_operator_bimodule, Bimodule, Representation};
use crate::error::Error;
use crate::linalg::{self, cr, spectral_norm, CMat, CVec};
use crate::Result;

#[derive(Debug, Clone)]
pub struct KrausMap {
    /// Representation of the source algebra `C` on `H₂`.
    pub source: Representation,
    /// Representation of the target algebra `B` on `H₁`.
    pub target: Representation,
    /// Kraus operators `E_k: H₁ → H₂`.
    pub kraus: Vec<CMat>,
}

impl KrausMap {
    pub fn new(
        source: Representation,
        target: Representation,
        kraus: Vec<CMat>,
        tol: f64,
    ) -> Result<Self> {
        let h1 = target.h_dim();
        let h2 = source.h_dim();
        if kraus.is_empty() || kraus.iter().any(|e| e.nrows() != h2 || e.ncols() != h1) {
            return Err(Error::BadShape(format!(
                "kraus operators must be {h2} x {h1}"
            )));
        }
        let map = KrausMap { source, target, kraus };
        let unit_res = map.unitality_residual();
        if unit_res > tol * h1 as f64 {
            return Err(Error::NotUnital(unit_res));
        }
        let range_res = map.range_residual(tol);
        if range_res > tol * (h1 * h1) as f64 {
            return Err(Error::RangeViolation(range_res));
        }
        Ok(map)
    }

    pub fn unitality_residual(&self) -> f64 {
        let h1 = self.target.h_dim();
        let mut sum = linalg::zeros(h1, h1);
        for e in &self.kraus {
            sum += e.adjoint() * e;
        }
        spectral_norm(&(sum - linalg::identity(h1)))
    }

    /// Largest residual of `θ(c)` against `span π(B)` over the matrix-unit
    /// basis of `C`.
    pub fn range_residual(&self, tol: f64) -> f64 {
        let target_alg = crate::algebra::BlockAlgebra::new(self.target.block_dims.clone())
            .expect("valid target dims");
        let units = target_alg.matrix_units();
        let span: Vec<CVec> = units
            .iter()
            .map(|u| linalg::vec_of(&self.target.pi(u)))
            .collect();
        let basis = linalg::orthonormalize(&span, tol.max(1e-12));
        let source_alg = crate::algebra::BlockAlgebra::new(self.source.block_dims.clone())
            .expect("valid source dims");
        let mut worst = 0.0f64;
        for u in source_alg.matrix_units() {
            let image = self.apply(&self.source.pi(&u));
            let res = linalg::span_residual(&basis, &linalg::vec_of(&image));
            worst = worst.max(res);
        }
        worst
    }

    /// `θ(x) = Σ_k E_k* x E_k` for `x ∈ B(H₂)`.
    pub fn apply(&self, x: &CMat) -> CMat {
        let h1 = self.target.h_dim();
        let mut out = linalg::zeros(h1, h1);
        for e in &self.kraus {
            out += e.adjoint() * x * e;
        }
        out
    }

    pub fn environment_dim(&self) -> usize {
        self.kraus.len()
    }
}

/// Stinespring dilation data: an isometry `V: H₁ → H₂ ⊗ C^r` with
/// `θ(c) = V*(π_C(c) ⊗ 1_r)V`.
#[derive(Debug, Clone)]
pub struct Dilation {
    pub v: CMat,
    pub r: usize,
}

/// Builds the stacked-Kraus dilation `V(ξ) = Σ_k E_k(ξ) ⊗ e_k`.
pub fn stinespring(theta: &KrausMap, tol: f64) -> Result<Dilation> {
    let h1 = theta.target.h_dim();
    let h2 = theta.source.h_dim();
    let r = theta.kraus.len();
    let mut v = linalg::zeros(h2 * r, h1);
    for (k, e) in theta.kraus.iter().enumerate() {
        for row in 0..h2 {
            for col in 0..h1 {
                // basis order (x, k) ↦ x * r + k on H₂ ⊗ C^r
                v[(row * r + k, col)] = e[(row, col)];
            }
        }
    }
    let iso_res = spectral_norm(&(v.adjoint() * &v - linalg::identity(h1)));
    if iso_res > tol * h1 as f64 {
        return Err(Error::NotUnital(iso_res));
    }
    Ok(Dilation { v, r })
}

impl Dilation {
    /// `V*(c ⊗ 1_r)V`.
    pub fn compress(&self, c: &CMat) -> CMat {
        let big = linalg::kron(c, &linalg::identity(self.r));
        self.v.adjoint() * big * &self.v
    }
}

/// Confusability graph of a unital channel:
/// `S = V*(π(C)' )V = span{E_k* x E_l : x ∈ commutant basis of C}`.
pub fn confusability(theta: &KrausMap, tol: f64) -> Result<Bimodule> {
    let unit_res = theta.unitality_residual();
    if unit_res > tol * theta.target.h_dim() as f64 {
        return Err(Error::NotUnital(unit_res));
    }
    let comm = theta.source.commutant_basis();
    let mut span = Vec::new();
    for x in &comm {
        for ek in &theta.kraus {
            for el in &theta.kraus {
                span.push(ek.adjoint() * x * el);
            }
        }
    }
    Ok(Bimodule::from_span(theta.target.clone(), &span, tol))
}

/// Pullback of a quantum relation `S₂ ⊆ B(H₂)` along `θ`:
/// `span{E_i* x E_j : x ∈ basis(S₂)}`. No bimodule closure is needed; the
/// span is already an operator bimodule over the target commutant, which is
/// asserted as a postcondition.
pub fn pullback(theta: &KrausMap, s2: &Bimodule, tol: f64) -> Result<Bimodule> {
    if s2.rep != theta.source {
        return Err(Error::SpaceMismatch);
    }
    let unit_res = theta.unitality_residual();
    if unit_res > tol * theta.target.h_dim() as f64 {
        return Err(Error::NotUnital(unit_res));
    }
    let mut span = Vec::new();
    for x in &s2.basis {
        for ei in &theta.kraus {
            for ej in &theta.kraus {
                span.push(ei.adjoint() * x * ej);
            }
        }
    }
    let out = Bimodule::from_span(theta.target.clone(), &span, tol);
    if !is_operator_bimodule(&out, tol) {
        return Err(Error::NotBimodule("pullback span failed the bimodule check".into()));
    }
    Ok(out)
}

/// Pushforward of a quantum relation `S₁ ⊆ B(H₁)` along `θ`:
/// `span{E_i x E_j* : x ∈ basis(S₁)}`.
pub fn pushforward(theta: &KrausMap, s1: &Bimodule, tol: f64) -> Result<Bimodule> {
    if s1.rep != theta.target {
        return Err(Error::SpaceMismatch);
    }
    let unit_res = theta.unitality_residual();
    if unit_res > tol * theta.target.h_dim() as f64 {
        return Err(Error::NotUnital(unit_res));
    }
    let mut span = Vec::new();
    for x in &s1.basis {
        for ei in &theta.kraus {
            for ej in &theta.kraus {
                span.push(ei * x * ej.adjoint());
            }
        }
    }
    let out = Bimodule::from_span(theta.source.clone(), &span, tol);
    if !is_operator_bimodule(&out, tol) {
        return Err(Error::NotBimodule("pushforward span failed the bimodule check".into()));
    }
    Ok(out)
}

fn is_trace_restriction(rep: &Representation, psi: &FaithfulFunctional, tol: f64) -> bool {
    // Tr restricted to π(B) has density Q_k = m_k 1_{n_k}.
    psi.q
        .blocks
        .iter()
        .zip(rep.block_dims.iter().zip(&rep.multiplicities))
        .all(|(qb, (&n, &m))| {
            linalg::frobenius(&(qb - linalg::identity(n).map(|z| z * cr(m as f64))))
                <= tol * (n as f64).max(1.0) * 10.0
        })
}

/// CP adjoint `θ̂` with respect to the restrictions of the ambient traces:
/// `ψ₁(a θ(b)) = ψ₂(θ̂(a) b)`. The Kraus form is `{E_k*}`. Both functionals
/// must be the restrictions of `Tr` to their algebras.
pub fn cp_adjoint(
    theta: &KrausMap,
    psi_target: &FaithfulFunctional,
    psi_source: &FaithfulFunctional,
    tol: f64,
) -> Result<KrausMap> {
    if !is_trace_restriction(&theta.target, psi_target, tol)
        || !is_trace_restriction(&theta.source, psi_source, tol)
    {
        return Err(Error::NotTraceRestriction);
    }
    let kraus: Vec<CMat> = theta.kraus.iter().map(|e| e.adjoint()).collect();
    // θ̂ is CP with the stated Kraus form but need not be unital; wrap
    // without the unitality check.
    Ok(KrausMap {
        source: theta.target.clone(),
        target: theta.source.clone(),
        kraus,
    })
}

/// Whether `θ` is a CP morphism `S₁ → S₂`: the pushforward of `S₁` is
/// contained in `S₂`.
pub fn is_cp_morphism(theta: &KrausMap, s1: &Bimodule, s2: &Bimodule, tol: f64) -> Result<bool> {
    let pushed = pushforward(theta, s1, tol)?;
    Ok(pushed.basis.iter().all(|x| s2.contains(x, tol)))
}

/// Classical channel `p(y|x)` as a UCP map `C(Y) → C(X)` in Kraus form,
/// with operators `E_x = |v_x><δ_x|`, `v_x[y] = sqrt(p(y|x))`.
pub fn classical_channel(p: &[Vec<f64>]) -> Result<KrausMap> {
    let nx = p.len();
    if nx == 0 {
        return Err(Error::NotStochastic("empty table".into()));
    }
    let ny = p[0].len();
    if ny == 0 || p.iter().any(|row| row.len() != ny) {
        return Err(Error::NotStochastic("ragged table".into()));
    }
    for (x, row) in p.iter().enumerate() {
        if row.iter().any(|&v| v < -1e-12) {
            return Err(Error::NotStochastic(format!("negative entry in row {x}")));
        }
        let total: f64 = row.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::NotStochastic(format!(
                "row {x} sums to {total}, expected 1"
            )));
        }
    }
    let source = Representation::defining(&vec![1; ny]);
    let target = Representation::defining(&vec![1; nx]);
    let mut kraus = Vec::with_capacity(nx);
    for x in 0..nx {
        let mut e = linalg::zeros(ny, nx);
        for y in 0..ny {
            e[(y, x)] = cr(p[x][y].max(0.0).sqrt());
        }
        kraus.push(e);
    }
    KrausMap::new(source, target, kraus, crate::DEFAULT_TOL)
}
