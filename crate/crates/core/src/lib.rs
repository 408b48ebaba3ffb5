//! Quantum graphs over finite-dimensional C*-algebras with faithful functionals.
//!
//! A quantum graph over `(B, ψ)` can be presented in three equivalent pictures:
//!
//! * a *quantum adjacency operator* `A` on the GNS space `L²(B)`,
//! * a *projection* `e` in `B ⊗ B^op` invariant under the modular group,
//! * an *operator bimodule* `S ⊆ B(H)` over the commutant `B'`.
//!
//! This crate constructs the GNS and modular data for block C*-algebras,
//! verifies the adjacency axioms, converts losslessly between the three
//! pictures, and implements the surrounding calculus: Schur products,
//! complements, the Choi correspondence for CP maps, quantum channels with
//! their confusability graphs and pullbacks/pushforwards, and symmetry
//! checks (classical automorphisms and corepresentation certificates).
//!
//! Everything is finite-dimensional and numeric (`f64` complex matrices with
//! a single global tolerance, default [`DEFAULT_TOL`]).
//!
//! ```
//! use qgraph::adjacency::{axiom_report, complete_adjacency};
//! use qgraph::algebra::{make_context, BlockAlgebra};
//! use qgraph::correspondence::{adjacency_to_bimodule, Representation};
//! use qgraph::linalg::cr;
//!
//! // M₂ with the normalized trace
//! let alg = BlockAlgebra::new(vec![2])?;
//! let ctx = make_context(vec![2], alg.one().scale(cr(0.5)), true)?;
//!
//! // the complete quantum graph satisfies the axioms and its operator
//! // bimodule is all of B(H)
//! let a = complete_adjacency(&ctx);
//! let report = axiom_report(&ctx, &a)?;
//! assert!(report.is_quantum_graph() && report.axiom(3));
//!
//! let rep = Representation::gns(&ctx);
//! let s = adjacency_to_bimodule(&ctx, &a, &rep)?;
//! assert_eq!(s.dim(), rep.h_dim() * rep.h_dim());
//! # Ok::<(), qgraph::Error>(())
//! ```

pub mod adjacency;
pub mod algebra;
pub mod channels;
pub mod choi;
pub mod correspondence;
pub mod error;
pub mod io;
pub mod linalg;
pub mod sample;
pub mod symmetry;

pub use adjacency::{AdjacencyOp, AxiomReport, ClassicalGraph, ComplementMode};
pub use algebra::{
    AlgebraElement, AntilinearOp, BlockAlgebra, FaithfulFunctional, GnsContext, ModularData,
};
pub use channels::{Dilation, KrausMap};
pub use choi::{ChoiOperator, LinearMap, SuperOpReport};
pub use correspondence::{Bimodule, BimoduleReport, LoopMode, OppTensor, Representation};
pub use error::Error;
pub use symmetry::{AutoCandidate, CorepCertificate, CorepReport};

/// Global default tolerance for equality and positivity checks.
pub const DEFAULT_TOL: f64 = 1e-9;

pub type Result<T> = std::result::Result<T, Error>;
