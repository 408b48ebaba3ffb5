//! `qgraph`: command-line surface over the quantum-graph toolkit.
//!
//! Every verb reads and writes JSON documents (see docs/FORMATS.md). Exit
//! codes: 0 when all checked properties pass, 1 when a checked property
//! fails, 2 on input errors, which are reported as a single JSON line on
//! stderr.

use std::io::Read as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qgraph::adjacency::{self, ComplementMode};
use qgraph::algebra::{make_context_with_tol, AlgebraElement, BlockAlgebra, GnsContext};
use qgraph::channels;
use qgraph::choi;
use qgraph::correspondence::{self, Representation};
use qgraph::io::{self, Body, CheckLine, Document, ReportDoc};
use qgraph::linalg::cr;
use qgraph::symmetry;

#[derive(Parser)]
#[command(name = "qgraph", version, about = "quantum graphs over finite-dimensional C*-algebras")]
struct Cli {
    /// Global tolerance override for all equality/positivity checks.
    #[arg(long, global = true, default_value_t = qgraph::DEFAULT_TOL)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build GNS contexts.
    Context {
        #[command(subcommand)]
        cmd: ContextCmd,
    },
    /// Verify and construct adjacency operators.
    Adjacency {
        #[command(subcommand)]
        cmd: AdjacencyCmd,
    },
    /// Convert between the three pictures of a quantum graph.
    Convert {
        #[command(subcommand)]
        cmd: ConvertCmd,
    },
    /// Tracial reduction of operator bimodules.
    Tracial {
        #[command(subcommand)]
        cmd: TracialCmd,
    },
    /// Choi correspondence for linear maps.
    Choi {
        #[command(subcommand)]
        cmd: ChoiCmd,
    },
    /// Quantum channels in Kraus form.
    Channel {
        #[command(subcommand)]
        cmd: ChannelCmd,
    },
    /// Classification of small quantum graphs.
    Classify {
        #[command(subcommand)]
        cmd: ClassifyCmd,
    },
    /// Classical automorphism checks.
    Aut {
        #[command(subcommand)]
        cmd: AutCmd,
    },
    /// Corepresentation certificates.
    Corep {
        #[command(subcommand)]
        cmd: CorepCmd,
    },
    /// Classical graph import/export.
    Classical {
        #[command(subcommand)]
        cmd: ClassicalCmd,
    },
}

#[derive(Subcommand)]
enum ContextCmd {
    /// Create a context from block dimensions and a density.
    New {
        /// Comma-separated block dimensions, e.g. "2,1".
        #[arg(long)]
        dims: String,
        /// Element document holding Q (defaults to the tracial density).
        #[arg(long)]
        q: Option<String>,
        /// Use the Powers density diag(1, q²)/(1+q²) on a single M₂ block.
        #[arg(long)]
        powers: Option<f64>,
        /// Declare the functional normalized (a state).
        #[arg(long, default_value_t = false)]
        normalized: bool,
    },
}

#[derive(Subcommand)]
enum AdjacencyCmd {
    /// Run the full axiom report; exit 1 if self-adjointness or axioms 1-3 fail.
    Check { file: Option<String> },
    /// The complete quantum graph of a context.
    Complete { context: Option<String> },
    /// The empty quantum graph of a context.
    Empty { context: Option<String> },
    /// Loop/complement calculus.
    Complement {
        file: Option<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::Complement)]
        mode: ModeArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Deloop,
    AddLoops,
    Co,
    Complement,
    Ncomplement,
}

impl From<ModeArg> for ComplementMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Deloop => ComplementMode::Deloop,
            ModeArg::AddLoops => ComplementMode::AddLoops,
            ModeArg::Co => ComplementMode::Co,
            ModeArg::Complement => ComplementMode::Complement,
            ModeArg::Ncomplement => ComplementMode::Ncomplement,
        }
    }
}

#[derive(Subcommand)]
enum ConvertCmd {
    /// adjacency → projection in B⊗B^op (Ψ'_{1/2,0}).
    A2e { file: Option<String> },
    /// projection → operator bimodule.
    E2s { file: Option<String> },
    /// operator bimodule → projection.
    S2e { file: Option<String> },
    /// projection → adjacency (Ψ'^{-1}_{1/2,0}).
    E2a { file: Option<String> },
    /// adjacency → operator bimodule (on the GNS representation).
    A2s { file: Option<String> },
}

#[derive(Subcommand)]
enum TracialCmd {
    Reduce { file: Option<String> },
    Expand { file: Option<String> },
}

#[derive(Subcommand)]
enum ChoiCmd {
    /// Choi operator of a linear map document.
    Map { file: Option<String> },
    /// Complete-positivity verdict; exit 1 if not CP.
    CpCheck { file: Option<String> },
    /// Super-operator equivalence report for maps B → B.
    SuperReport { file: Option<String> },
}

#[derive(Subcommand)]
enum ChannelCmd {
    Confusability { file: Option<String> },
    Pullback {
        kraus: String,
        bimodule: String,
    },
    Pushforward {
        kraus: String,
        bimodule: String,
    },
    /// CP adjoint with respect to the ambient trace restrictions.
    Adjoint { file: Option<String> },
    /// Exit 1 unless the pushforward of S1 is contained in S2.
    MorphismCheck {
        kraus: String,
        s1: String,
        s2: String,
    },
    /// Stochastic table {"p": [[...]]} → Kraus document.
    FromClassical { file: Option<String> },
}

#[derive(Subcommand)]
enum ClassifyCmd {
    /// Quantum graphs over M₂ with the Powers density.
    M2 {
        #[arg(long)]
        q: f64,
    },
}

#[derive(Subcommand)]
enum AutCmd {
    /// Is the candidate a state-preserving automorphism?
    Check {
        context: String,
        automorphism: String,
    },
    /// Is the candidate an automorphism of the given quantum graph?
    GraphCheck {
        adjacency: String,
        automorphism: String,
    },
}

#[derive(Subcommand)]
enum CorepCmd {
    /// Verify certificate relations, optionally against an adjacency doc.
    Check {
        context: String,
        certificate: String,
        #[arg(long)]
        adjacency: Option<String>,
    },
    /// Package Aut(graph) of a classical graph as a certificate.
    FromGraph { file: Option<String> },
}

#[derive(Subcommand)]
enum ClassicalCmd {
    /// graph document → adjacency operator over the counting measure.
    Import { file: Option<String> },
    /// adjacency operator → graph document.
    Export { file: Option<String> },
}

fn read_input(path: &Option<String>) -> Result<String, String> {
    match path.as_deref() {
        None | Some("-") => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| format!("stdin: {e}"))?;
            Ok(buf)
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{p}: {e}")),
    }
}

fn read_path(path: &str) -> Result<String, String> {
    read_input(&Some(path.to_string()))
}

fn load(text: &str) -> Result<Document, String> {
    Document::from_json(text).map_err(|e| e.to_string())
}

fn emit(doc: &Document) {
    println!("{}", doc.to_json());
}

struct Failure {
    code: u8,
    kind: String,
    detail: String,
}

impl Failure {
    fn input(detail: impl Into<String>) -> Failure {
        Failure { code: 2, kind: "input_error".into(), detail: detail.into() }
    }

    fn check(detail: impl Into<String>) -> Failure {
        Failure { code: 1, kind: "check_failed".into(), detail: detail.into() }
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::input(s)
    }
}

impl From<qgraph::Error> for Failure {
    fn from(e: qgraph::Error) -> Self {
        Failure::input(e.to_string())
    }
}

fn want_adjacency(doc: Document, tol: f64) -> Result<(GnsContext, adjacency::AdjacencyOp), Failure> {
    match doc.body {
        Body::Adjacency(d) => {
            let (mut ctx, a) = io::adjacency_from_doc(&d, tol)?;
            ctx.set_tol(tol);
            Ok((ctx, a))
        }
        other => Err(Failure::input(format!(
            "expected an adjacency document, found {}",
            other.kind()
        ))),
    }
}

fn want_context(doc: Document, tol: f64) -> Result<GnsContext, Failure> {
    match doc.body {
        Body::Context(d) => {
            let mut ctx = io::context_from_doc(&d, tol)?;
            ctx.set_tol(tol);
            Ok(ctx)
        }
        other => Err(Failure::input(format!(
            "expected a context document, found {}",
            other.kind()
        ))),
    }
}

fn want_opptensor(
    doc: Document,
    tol: f64,
) -> Result<(GnsContext, correspondence::OppTensor), Failure> {
    match doc.body {
        Body::Opptensor(d) => {
            let (mut ctx, e) = io::opptensor_from_doc(&d, tol)?;
            ctx.set_tol(tol);
            Ok((ctx, e))
        }
        other => Err(Failure::input(format!(
            "expected an opptensor document, found {}",
            other.kind()
        ))),
    }
}

fn want_bimodule(doc: Document, tol: f64) -> Result<(GnsContext, correspondence::Bimodule), Failure> {
    match doc.body {
        Body::Bimodule(d) => {
            let (mut ctx, s) = io::bimodule_from_doc(&d, tol)?;
            ctx.set_tol(tol);
            Ok((ctx, s))
        }
        other => Err(Failure::input(format!(
            "expected a bimodule document, found {}",
            other.kind()
        ))),
    }
}

fn want_kraus(doc: Document, tol: f64) -> Result<channels::KrausMap, Failure> {
    match doc.body {
        Body::Kraus(d) => Ok(io::kraus_from_doc(&d, tol)?),
        other => Err(Failure::input(format!(
            "expected a kraus document, found {}",
            other.kind()
        ))),
    }
}

fn want_graph(doc: Document) -> Result<adjacency::ClassicalGraph, Failure> {
    match doc.body {
        Body::Graph(d) => Ok(io::graph_from_doc(&d)?),
        other => Err(Failure::input(format!(
            "expected a graph document, found {}",
            other.kind()
        ))),
    }
}

fn report_exit(report: &ReportDoc) -> Result<(), Failure> {
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::check(format!("{}: a checked property failed", report.subject)))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let tol = cli.tol;
    match cli.command {
        Command::Context { cmd: ContextCmd::New { dims, q, powers, normalized } } => {
            let dims: Vec<usize> = dims
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            let alg = BlockAlgebra::new(dims.clone())?;
            let q_el: AlgebraElement = if let Some(qv) = powers {
                if dims != vec![2] {
                    return Err(Failure::input("--powers requires --dims 2"));
                }
                let mut el = alg.zero();
                el.blocks[0][(0, 0)] = cr(1.0 / (1.0 + qv * qv));
                el.blocks[0][(1, 1)] = cr(qv * qv / (1.0 + qv * qv));
                el
            } else if let Some(path) = q {
                let doc = load(&read_path(&path)?)?;
                match doc.body {
                    Body::Element(d) => io::element_from_doc(&alg, &d)?,
                    other => {
                        return Err(Failure::input(format!(
                            "expected an element document for Q, found {}",
                            other.kind()
                        )))
                    }
                }
            } else {
                alg.one()
            };
            let ctx = make_context_with_tol(dims, q_el, normalized, tol)?;
            emit(&Document::new(Body::Context(io::context_doc(&ctx))));
            Ok(())
        }

        Command::Adjacency { cmd } => match cmd {
            AdjacencyCmd::Check { file } => {
                let (ctx, a) = want_adjacency(load(&read_input(&file)?)?, tol)?;
                let rpt = adjacency::axiom_report(&ctx, &a)?;
                let mut checks = vec![
                    CheckLine {
                        name: "selfadjoint".into(),
                        pass: rpt.selfadjoint,
                        residual: Some(rpt.selfadjoint_residual),
                    },
                    CheckLine {
                        name: "real".into(),
                        pass: rpt.real,
                        residual: Some(rpt.real_residual),
                    },
                ];
                for k in 1..=7u8 {
                    checks.push(CheckLine {
                        name: format!("axiom{k}"),
                        pass: rpt.axiom(k),
                        residual: Some(rpt.residual(k)),
                    });
                }
                let report = ReportDoc {
                    subject: "adjacency axioms".into(),
                    summary: format!(
                        "selfadjoint={} axioms(1..7)={:?}",
                        rpt.selfadjoint, rpt.ax
                    ),
                    checks,
                };
                emit(&Document::new(Body::Report(report)));
                // exit gate: the quantum-graph core (self-adjoint, 1, 2, 3)
                if rpt.is_quantum_graph() && rpt.axiom(3) {
                    Ok(())
                } else {
                    Err(Failure::check("adjacency operator is not a reflexive quantum graph"))
                }
            }
            AdjacencyCmd::Complete { context } => {
                let ctx = want_context(load(&read_input(&context)?)?, tol)?;
                let a = adjacency::complete_adjacency(&ctx);
                emit(&Document::new(Body::Adjacency(io::adjacency_doc(&ctx, &a))));
                Ok(())
            }
            AdjacencyCmd::Empty { context } => {
                let ctx = want_context(load(&read_input(&context)?)?, tol)?;
                let a = adjacency::empty_adjacency(&ctx);
                emit(&Document::new(Body::Adjacency(io::adjacency_doc(&ctx, &a))));
                Ok(())
            }
            AdjacencyCmd::Complement { file, mode } => {
                let (ctx, a) = want_adjacency(load(&read_input(&file)?)?, tol)?;
                let out = adjacency::complement(&ctx, &a, mode.into())?;
                emit(&Document::new(Body::Adjacency(io::adjacency_doc(&ctx, &out))));
                Ok(())
            }
        },

        Command::Convert { cmd } => match cmd {
            ConvertCmd::A2e { file } => {
                let (ctx, a) = want_adjacency(load(&read_input(&file)?)?, tol)?;
                let e = correspondence::psi_map(&ctx, &a, 0.5, 0.0, true)?;
                emit(&Document::new(Body::Opptensor(io::opptensor_doc(&ctx, &e))));
                Ok(())
            }
            ConvertCmd::E2s { file } => {
                let (ctx, e) = want_opptensor(load(&read_input(&file)?)?, tol)?;
                let s = correspondence::projection_to_bimodule(&ctx, &e)?;
                emit(&Document::new(Body::Bimodule(io::bimodule_doc(&ctx, &s))));
                Ok(())
            }
            ConvertCmd::S2e { file } => {
                let (ctx, s) = want_bimodule(load(&read_input(&file)?)?, tol)?;
                let e = correspondence::bimodule_to_projection(&ctx, &s)?;
                emit(&Document::new(Body::Opptensor(io::opptensor_doc(&ctx, &e))));
                Ok(())
            }
            ConvertCmd::E2a { file } => {
                let (ctx, e) = want_opptensor(load(&read_input(&file)?)?, tol)?;
                let a = correspondence::psi_inv(&ctx, &e, 0.5, 0.0, true)?;
                emit(&Document::new(Body::Adjacency(io::adjacency_doc(&ctx, &a))));
                Ok(())
            }
            ConvertCmd::A2s { file } => {
                let (ctx, a) = want_adjacency(load(&read_input(&file)?)?, tol)?;
                let rep = Representation::gns(&ctx);
                let s = correspondence::adjacency_to_bimodule(&ctx, &a, &rep)?;
                emit(&Document::new(Body::Bimodule(io::bimodule_doc(&ctx, &s))));
                Ok(())
            }
        },

        Command::Tracial { cmd } => match cmd {
            TracialCmd::Reduce { file } => {
                let (ctx, s) = want_bimodule(load(&read_input(&file)?)?, tol)?;
                let s0 = correspondence::tracial_reduce(&ctx, &s)?;
                emit(&Document::new(Body::Bimodule(io::bimodule_doc(&ctx, &s0))));
                Ok(())
            }
            TracialCmd::Expand { file } => {
                let (ctx, s0) = want_bimodule(load(&read_input(&file)?)?, tol)?;
                let s = correspondence::tracial_expand(&ctx, &s0)?;
                emit(&Document::new(Body::Bimodule(io::bimodule_doc(&ctx, &s))));
                Ok(())
            }
        },

        Command::Choi { cmd } => match cmd {
            ChoiCmd::Map { file } => {
                let f = linear_map_from_doc(&read_input(&file)?, tol)?;
                let e = choi::choi(&f);
                // Serialized as an opptensor over the defining reps of
                // C ⊗ B^op; the ctx slot carries B.
                let doc = io::OppTensorDoc {
                    ctx: io::context_doc(&f.source),
                    rep: io::rep_doc(&e.target_rep),
                    op: io::matrix_to_json(&e.op),
                };
                emit(&Document::new(Body::Opptensor(doc)));
                Ok(())
            }
            ChoiCmd::CpCheck { file } => {
                let f = linear_map_from_doc(&read_input(&file)?, tol)?;
                let verdict = choi::is_cp(&f);
                let (min_eig, herm) = choi::choi(&f).min_eigenvalue();
                let report = ReportDoc {
                    subject: "complete positivity".into(),
                    summary: format!("cp={verdict}"),
                    checks: vec![
                        CheckLine { name: "hermitian_choi".into(), pass: herm <= tol * 100.0, residual: Some(herm) },
                        CheckLine { name: "positive_choi".into(), pass: verdict, residual: Some((-min_eig).max(0.0)) },
                    ],
                };
                let outcome = report_exit(&report);
                emit(&Document::new(Body::Report(report)));
                outcome
            }
            ChoiCmd::SuperReport { file } => {
                let f = linear_map_from_doc(&read_input(&file)?, tol)?;
                let ctx = f.source.clone();
                let rpt = choi::super_operator_report(&ctx, &f)?;
                let report = ReportDoc {
                    subject: "super-operator equivalences".into(),
                    summary: format!(
                        "cp={} schur_idempotent={} real={} selfadjoint={} ax1={} ax2={}",
                        rpt.cp, rpt.schur_idempotent, rpt.real, rpt.selfadjoint, rpt.axiom1, rpt.axiom2
                    ),
                    checks: vec![
                        CheckLine { name: "equiv_cp_idem_vs_real_ax1".into(), pass: rpt.equiv_cp_idem_vs_real_ax1, residual: None },
                        CheckLine { name: "equiv_cp_ax12_vs_sa_ax12".into(), pass: rpt.equiv_cp_ax12_vs_sa_ax12, residual: None },
                    ],
                };
                emit(&Document::new(Body::Report(report)));
                Ok(())
            }
        },

        Command::Channel { cmd } => match cmd {
            ChannelCmd::Confusability { file } => {
                let k = want_kraus(load(&read_input(&file)?)?, tol)?;
                let s = channels::confusability(&k, tol)?;
                let ctx = trace_context_for(&k.target, tol)?;
                emit(&Document::new(Body::Bimodule(io::bimodule_doc(&ctx, &s))));
                Ok(())
            }
            ChannelCmd::Pullback { kraus, bimodule } => {
                let k = want_kraus(load(&read_path(&kraus)?)?, tol)?;
                let (_, s2) = want_bimodule(load(&read_path(&bimodule)?)?, tol)?;
                let out = channels::pullback(&k, &s2, tol)?;
                let ctx = trace_context_for(&k.target, tol)?;
                emit(&Document::new(Body::Bimodule(io::bimodule_doc(&ctx, &out))));
                Ok(())
            }
            ChannelCmd::Pushforward { kraus, bimodule } => {
                let k = want_kraus(load(&read_path(&kraus)?)?, tol)?;
                let (_, s1) = want_bimodule(load(&read_path(&bimodule)?)?, tol)?;
                let out = channels::pushforward(&k, &s1, tol)?;
                let ctx = trace_context_for(&k.source, tol)?;
                emit(&Document::new(Body::Bimodule(io::bimodule_doc(&ctx, &out))));
                Ok(())
            }
            ChannelCmd::Adjoint { file } => {
                let k = want_kraus(load(&read_input(&file)?)?, tol)?;
                let psi1 = trace_functional_for(&k.target);
                let psi2 = trace_functional_for(&k.source);
                let hat = channels::cp_adjoint(&k, &psi1, &psi2, tol)?;
                emit(&Document::new(Body::Kraus(io::kraus_doc(&hat))));
                Ok(())
            }
            ChannelCmd::MorphismCheck { kraus, s1, s2 } => {
                let k = want_kraus(load(&read_path(&kraus)?)?, tol)?;
                let (_, b1) = want_bimodule(load(&read_path(&s1)?)?, tol)?;
                let (_, b2) = want_bimodule(load(&read_path(&s2)?)?, tol)?;
                let verdict = channels::is_cp_morphism(&k, &b1, &b2, tol)?;
                let report = ReportDoc {
                    subject: "cp morphism".into(),
                    summary: format!("pushforward_contained={verdict}"),
                    checks: vec![CheckLine { name: "pushforward_contained".into(), pass: verdict, residual: None }],
                };
                emit(&Document::new(Body::Report(report)));
                if verdict { Ok(()) } else { Err(Failure::check("not a CP morphism")) }
            }
            ChannelCmd::FromClassical { file } => {
                let text = read_input(&file)?;
                let value: serde_json::Value =
                    serde_json::from_str(&text).map_err(|e| e.to_string())?;
                let rows = value
                    .get("p")
                    .and_then(|p| p.as_array())
                    .ok_or_else(|| Failure::input("expected {\"p\": [[...]]}"))?;
                let table: Vec<Vec<f64>> = rows
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .map(|r| r.iter().filter_map(|v| v.as_f64()).collect::<Vec<f64>>())
                            .ok_or_else(|| Failure::input("ragged stochastic table"))
                    })
                    .collect::<Result<_, _>>()?;
                let k = channels::classical_channel(&table)?;
                emit(&Document::new(Body::Kraus(io::kraus_doc(&k))));
                Ok(())
            }
        },

        Command::Classify { cmd: ClassifyCmd::M2 { q } } => {
            let cls = correspondence::classify_m2(q)?;
            for g in &cls.graphs {
                emit(&Document::new(Body::Bimodule(io::bimodule_doc(&cls.context, g))));
            }
            let dims: Vec<String> = cls.graphs.iter().map(|g| g.dim().to_string()).collect();
            let report = ReportDoc {
                subject: format!("classify m2 q={q}"),
                summary: format!(
                    "dims {}{}",
                    dims.join(","),
                    if cls.tracial_continuum {
                        "; tracial case is a continuum, lattice representatives only"
                    } else {
                        ""
                    }
                ),
                checks: vec![CheckLine {
                    name: "four_graphs".into(),
                    pass: cls.graphs.len() == 4,
                    residual: None,
                }],
            };
            emit(&Document::new(Body::Report(report)));
            Ok(())
        }

        Command::Aut { cmd } => match cmd {
            AutCmd::Check { context, automorphism } => {
                let ctx = want_context(load(&read_path(&context)?)?, tol)?;
                let th = automorphism_from(&ctx, &read_path(&automorphism)?, tol)?;
                let verdict = symmetry::is_state_automorphism(&ctx, &th);
                let report = ReportDoc {
                    subject: "state automorphism".into(),
                    summary: format!("preserves_state={verdict}"),
                    checks: vec![CheckLine { name: "theta_fixes_q".into(), pass: verdict, residual: None }],
                };
                emit(&Document::new(Body::Report(report)));
                if verdict { Ok(()) } else { Err(Failure::check("candidate does not preserve the state")) }
            }
            AutCmd::GraphCheck { adjacency, automorphism } => {
                let (ctx, a) = want_adjacency(load(&read_path(&adjacency)?)?, tol)?;
                let th = automorphism_from(&ctx, &read_path(&automorphism)?, tol)?;
                let verdict = symmetry::is_graph_automorphism(&ctx, &th, &a)?;
                let report = ReportDoc {
                    subject: "graph automorphism".into(),
                    summary: format!("commutes_with_adjacency={verdict}"),
                    checks: vec![CheckLine { name: "commutes".into(), pass: verdict, residual: None }],
                };
                emit(&Document::new(Body::Report(report)));
                if verdict { Ok(()) } else { Err(Failure::check("not a graph automorphism")) }
            }
        },

        Command::Corep { cmd } => match cmd {
            CorepCmd::Check { context, certificate, adjacency } => {
                let ctx = want_context(load(&read_path(&context)?)?, tol)?;
                let cert = match load(&read_path(&certificate)?)?.body {
                    Body::Certificate(d) => io::certificate_from_doc(&d)?,
                    other => {
                        return Err(Failure::input(format!(
                            "expected a certificate document, found {}",
                            other.kind()
                        )))
                    }
                };
                let a = match adjacency {
                    Some(path) => Some(want_adjacency(load(&read_path(&path)?)?, tol)?.1),
                    None => None,
                };
                let rpt = symmetry::corep_check(&ctx, &cert, a.as_ref())?;
                let mut checks: Vec<CheckLine> = rpt
                    .residuals
                    .iter()
                    .map(|(name, res)| CheckLine {
                        name: name.clone(),
                        pass: *res <= tol * (ctx.dim() as f64) * 10.0,
                        residual: Some(*res),
                    })
                    .collect();
                checks.push(CheckLine {
                    name: "coaction_relations".into(),
                    pass: rpt.all_coaction_relations(),
                    residual: None,
                });
                let report = ReportDoc {
                    subject: "corepresentation certificate".into(),
                    summary: format!(
                        "unitary={} multiplicative={} unital={} psi_invariant={} x_identities={} commutes={:?}",
                        rpt.unitary, rpt.multiplicative, rpt.unital, rpt.psi_invariant,
                        rpt.x_identities, rpt.commutes_with_adjacency
                    ),
                    checks,
                };
                emit(&Document::new(Body::Report(report)));
                let ok = rpt.all_coaction_relations()
                    && rpt.commutes_with_adjacency.unwrap_or(true);
                if ok { Ok(()) } else { Err(Failure::check("certificate relations failed")) }
            }
            CorepCmd::FromGraph { file } => {
                let g = want_graph(load(&read_input(&file)?)?)?;
                let cert = symmetry::classical_certificate(&g)?;
                emit(&Document::new(Body::Certificate(io::certificate_doc(&cert))));
                Ok(())
            }
        },

        Command::Classical { cmd } => match cmd {
            ClassicalCmd::Import { file } => {
                let g = want_graph(load(&read_input(&file)?)?)?;
                let (mut ctx, a) = adjacency::from_classical(&g)?;
                ctx.set_tol(tol);
                emit(&Document::new(Body::Adjacency(io::adjacency_doc(&ctx, &a))));
                Ok(())
            }
            ClassicalCmd::Export { file } => {
                let (ctx, a) = want_adjacency(load(&read_input(&file)?)?, tol)?;
                let g = adjacency::to_classical(&ctx, &a)?;
                emit(&Document::new(Body::Graph(io::graph_doc(&g))));
                Ok(())
            }
        },
    }
}

/// Linear maps are exchanged as an element-style document:
/// {"source": context, "target": block_dims, "action": matrix}.
fn linear_map_from_doc(text: &str, tol: f64) -> Result<choi::LinearMap, Failure> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let source: io::ContextDoc =
        serde_json::from_value(value.get("source").cloned().ok_or_else(|| Failure::input("missing source"))?)
            .map_err(|e| e.to_string())?;
    let target_dims: Vec<usize> =
        serde_json::from_value(value.get("target").cloned().ok_or_else(|| Failure::input("missing target"))?)
            .map_err(|e| e.to_string())?;
    let action: io::JsonMatrix =
        serde_json::from_value(value.get("action").cloned().ok_or_else(|| Failure::input("missing action"))?)
            .map_err(|e| e.to_string())?;
    let mut ctx = io::context_from_doc(&source, tol)?;
    ctx.set_tol(tol);
    let target = BlockAlgebra::new(target_dims)?;
    Ok(choi::LinearMap::new(ctx, target, io::matrix_from_json(&action)?)?)
}

fn automorphism_from(
    ctx: &GnsContext,
    text: &str,
    tol: f64,
) -> Result<symmetry::AutoCandidate, Failure> {
    match load(text)?.body {
        Body::Automorphism(d) => Ok(io::automorphism_from_doc(ctx.algebra(), &d, tol)?),
        other => Err(Failure::input(format!(
            "expected an automorphism document, found {}",
            other.kind()
        ))),
    }
}

fn trace_context_for(rep: &Representation, tol: f64) -> Result<GnsContext, Failure> {
    let alg = BlockAlgebra::new(rep.block_dims.clone())?;
    let mut q = alg.one();
    for (k, &m) in rep.multiplicities.iter().enumerate() {
        q.blocks[k] = q.blocks[k].map(|z| z * cr(m as f64));
    }
    Ok(make_context_with_tol(rep.block_dims.clone(), q, false, tol)?)
}

fn trace_functional_for(rep: &Representation) -> qgraph::algebra::FaithfulFunctional {
    let alg = BlockAlgebra::new(rep.block_dims.clone()).expect("valid dims");
    let mut q = alg.one();
    for (k, &m) in rep.multiplicities.iter().enumerate() {
        q.blocks[k] = q.blocks[k].map(|z| z * cr(m as f64));
    }
    qgraph::algebra::FaithfulFunctional { q, normalized: false }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!(
                "{}",
                serde_json::json!({ "error": f.kind, "detail": f.detail })
            );
            ExitCode::from(f.code)
        }
    }
}
