//! Versioned JSON document schemas for every object the library exchanges.
//!
//! Complex numbers are two-element arrays `[re, im]`; matrices are
//! row-major lists of rows. Numbers round-trip bit-stably through
//! serde_json (shortest-representation printing). Contexts are serialized
//! in the canonical frame, i.e. with the diagonalized density.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::adjacency::{AdjacencyOp, ClassicalGraph};
use crate::algebra::{make_context_with_tol, AlgebraElement, BlockAlgebra, GnsContext};
use crate::channels::KrausMap;
use crate::correspondence::{Bimodule, OppTensor, Representation};
use crate::error::Error;
use crate::linalg::{CMat, CVec};
use crate::symmetry::{AutoCandidate, CorepCertificate};
use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &CMat) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<CMat> {
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Document("ragged matrix".into()));
    }
    Ok(CMat::from_fn(nrows, ncols, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

pub fn vector_to_json(v: &CVec) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ContextDoc {
    pub block_dims: Vec<usize>,
    #[serde(rename = "Q")]
    pub q: Vec<JsonMatrix>,
    pub normalized: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ElementDoc {
    pub blocks: Vec<JsonMatrix>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AdjacencyDoc {
    pub ctx: ContextDoc,
    pub matrix: JsonMatrix,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RepDoc {
    pub block_dims: Vec<usize>,
    pub multiplicities: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OppTensorDoc {
    pub ctx: ContextDoc,
    pub rep: RepDoc,
    pub op: JsonMatrix,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BimoduleDoc {
    pub ctx: ContextDoc,
    pub rep: RepDoc,
    pub basis: Vec<JsonMatrix>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct KrausDoc {
    pub source: RepDoc,
    pub target: RepDoc,
    pub kraus: Vec<JsonMatrix>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub symmetry_algebra: Vec<usize>,
    /// `v[i][j]` is an element of the symmetry algebra: one matrix per block.
    pub v: Vec<Vec<Vec<JsonMatrix>>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AutomorphismDoc {
    pub block_permutation: Vec<usize>,
    pub unitaries: Vec<JsonMatrix>,
}

#[derive(Debug, Serialize, Deserialize, Clone)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub residual: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ReportDoc {
    pub subject: String,
    pub checks: Vec<CheckLine>,
    pub summary: String,
}

impl ReportDoc {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Body {
    Context(ContextDoc),
    Element(ElementDoc),
    Adjacency(AdjacencyDoc),
    Opptensor(OppTensorDoc),
    Bimodule(BimoduleDoc),
    Kraus(KrausDoc),
    Graph(GraphDoc),
    Certificate(CertificateDoc),
    Automorphism(AutomorphismDoc),
    Report(ReportDoc),
}

impl Body {
    pub fn kind(&self) -> &'static str {
        match self {
            Body::Context(_) => "context",
            Body::Element(_) => "element",
            Body::Adjacency(_) => "adjacency",
            Body::Opptensor(_) => "opptensor",
            Body::Bimodule(_) => "bimodule",
            Body::Kraus(_) => "kraus",
            Body::Graph(_) => "graph",
            Body::Certificate(_) => "certificate",
            Body::Automorphism(_) => "automorphism",
            Body::Report(_) => "report",
        }
    }
}

/// Envelope for every document: a kind tag, the schema version and the
/// payload. Unknown schema versions are rejected on load.
#[derive(Debug, Serialize, Deserialize)]
pub struct Document {
    pub schema_version: u32,
    #[serde(flatten)]
    pub body: Body,
}

impl Document {
    pub fn new(body: Body) -> Document {
        Document { schema_version: SCHEMA_VERSION, body }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Document> {
        let doc: Document = serde_json::from_str(text)
            .map_err(|e| Error::Document(format!("parse failure: {e}")))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::Document(format!(
                "unknown schema_version {} (expected {})",
                doc.schema_version, SCHEMA_VERSION
            )));
        }
        Ok(doc)
    }
}

// ---- encoders ----

pub fn context_doc(ctx: &GnsContext) -> ContextDoc {
    ContextDoc {
        block_dims: ctx.algebra().block_dims().to_vec(),
        q: ctx.functional().q.blocks.iter().map(matrix_to_json).collect(),
        normalized: ctx.functional().normalized,
    }
}

pub fn element_doc(a: &AlgebraElement) -> ElementDoc {
    ElementDoc { blocks: a.blocks.iter().map(matrix_to_json).collect() }
}

pub fn adjacency_doc(ctx: &GnsContext, a: &AdjacencyOp) -> AdjacencyDoc {
    AdjacencyDoc { ctx: context_doc(ctx), matrix: matrix_to_json(&a.matrix) }
}

pub fn rep_doc(rep: &Representation) -> RepDoc {
    RepDoc {
        block_dims: rep.block_dims.clone(),
        multiplicities: rep.multiplicities.clone(),
    }
}

pub fn opptensor_doc(ctx: &GnsContext, e: &OppTensor) -> OppTensorDoc {
    OppTensorDoc {
        ctx: context_doc(ctx),
        rep: rep_doc(&e.rep),
        op: matrix_to_json(&e.op),
    }
}

pub fn bimodule_doc(ctx: &GnsContext, s: &Bimodule) -> BimoduleDoc {
    BimoduleDoc {
        ctx: context_doc(ctx),
        rep: rep_doc(&s.rep),
        basis: s.basis.iter().map(matrix_to_json).collect(),
    }
}

pub fn kraus_doc(k: &KrausMap) -> KrausDoc {
    KrausDoc {
        source: rep_doc(&k.source),
        target: rep_doc(&k.target),
        kraus: k.kraus.iter().map(matrix_to_json).collect(),
    }
}

pub fn graph_doc(g: &ClassicalGraph) -> GraphDoc {
    GraphDoc {
        vertices: g.vertices,
        edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
    }
}

pub fn certificate_doc(cert: &CorepCertificate) -> CertificateDoc {
    CertificateDoc {
        symmetry_algebra: cert.symmetry_algebra.block_dims().to_vec(),
        v: cert
            .v
            .iter()
            .map(|row| {
                row.iter()
                    .map(|el| el.blocks.iter().map(matrix_to_json).collect())
                    .collect()
            })
            .collect(),
    }
}

pub fn automorphism_doc(th: &AutoCandidate) -> AutomorphismDoc {
    AutomorphismDoc {
        block_permutation: th.block_permutation.clone(),
        unitaries: th.unitaries.iter().map(matrix_to_json).collect(),
    }
}

// ---- decoders ----

pub fn context_from_doc(doc: &ContextDoc, tol: f64) -> Result<GnsContext> {
    let blocks = doc
        .q
        .iter()
        .map(matrix_from_json)
        .collect::<Result<Vec<_>>>()?;
    let q = AlgebraElement { blocks };
    make_context_with_tol(doc.block_dims.clone(), q, doc.normalized, tol)
}

pub fn element_from_doc(alg: &BlockAlgebra, doc: &ElementDoc) -> Result<AlgebraElement> {
    let blocks = doc
        .blocks
        .iter()
        .map(matrix_from_json)
        .collect::<Result<Vec<_>>>()?;
    let el = AlgebraElement { blocks };
    alg.check_shape(&el)?;
    Ok(el)
}

pub fn adjacency_from_doc(doc: &AdjacencyDoc, tol: f64) -> Result<(GnsContext, AdjacencyOp)> {
    let ctx = context_from_doc(&doc.ctx, tol)?;
    let a = AdjacencyOp::new(&ctx, matrix_from_json(&doc.matrix)?)?;
    Ok((ctx, a))
}

pub fn rep_from_doc(doc: &RepDoc) -> Result<Representation> {
    Representation::new(doc.block_dims.clone(), doc.multiplicities.clone())
}

pub fn opptensor_from_doc(doc: &OppTensorDoc, tol: f64) -> Result<(GnsContext, OppTensor)> {
    let ctx = context_from_doc(&doc.ctx, tol)?;
    let rep = rep_from_doc(&doc.rep)?;
    if rep.block_dims != ctx.algebra().block_dims() {
        return Err(Error::Document("rep does not match the context".into()));
    }
    let e = OppTensor::from_matrix(&ctx, rep, matrix_from_json(&doc.op)?)?;
    Ok((ctx, e))
}

pub fn bimodule_from_doc(doc: &BimoduleDoc, tol: f64) -> Result<(GnsContext, Bimodule)> {
    let ctx = context_from_doc(&doc.ctx, tol)?;
    let rep = rep_from_doc(&doc.rep)?;
    if rep.block_dims != ctx.algebra().block_dims() {
        return Err(Error::Document("rep does not match the context".into()));
    }
    let h = rep.h_dim();
    let mut span = Vec::with_capacity(doc.basis.len());
    for m in &doc.basis {
        let mat = matrix_from_json(m)?;
        if mat.nrows() != h || mat.ncols() != h {
            return Err(Error::Document(format!("basis matrices must be {h}x{h}")));
        }
        span.push(mat);
    }
    Ok((ctx.clone(), Bimodule::from_span(rep, &span, tol)))
}

pub fn kraus_from_doc(doc: &KrausDoc, tol: f64) -> Result<KrausMap> {
    let source = rep_from_doc(&doc.source)?;
    let target = rep_from_doc(&doc.target)?;
    let kraus = doc
        .kraus
        .iter()
        .map(matrix_from_json)
        .collect::<Result<Vec<_>>>()?;
    KrausMap::new(source, target, kraus, tol)
}

pub fn graph_from_doc(doc: &GraphDoc) -> Result<ClassicalGraph> {
    ClassicalGraph::new(doc.vertices, doc.edges.iter().map(|&[u, v]| (u, v)))
}

pub fn certificate_from_doc(doc: &CertificateDoc) -> Result<CorepCertificate> {
    let alg = BlockAlgebra::new(doc.symmetry_algebra.clone())?;
    let mut v = Vec::with_capacity(doc.v.len());
    for row in &doc.v {
        let mut out_row = Vec::with_capacity(row.len());
        for el in row {
            let blocks = el
                .iter()
                .map(matrix_from_json)
                .collect::<Result<Vec<_>>>()?;
            let el = AlgebraElement { blocks };
            alg.check_shape(&el)?;
            out_row.push(el);
        }
        v.push(out_row);
    }
    Ok(CorepCertificate { symmetry_algebra: alg, v })
}

pub fn automorphism_from_doc(
    alg: &BlockAlgebra,
    doc: &AutomorphismDoc,
    tol: f64,
) -> Result<AutoCandidate> {
    let unitaries = doc
        .unitaries
        .iter()
        .map(matrix_from_json)
        .collect::<Result<Vec<_>>>()?;
    AutoCandidate::new(alg, doc.block_permutation.clone(), unitaries, tol)
}
