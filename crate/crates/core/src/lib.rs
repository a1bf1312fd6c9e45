//! Spectral toolkit for two-dimensional Dirac operators with Lorentz-scalar
//! δ-shell couplings supported on a planar star-graph.
//!
//! The heavy lifting happens on the one-dimensional side: the angular
//! reduction of the Dirac operator is a spin-orbit operator on the circle
//! with matrix point interactions at the edge angles. Its eigenvalues are
//! zeros of a scalar secular function built from a 2×2 transfer-matrix
//! product, and the number of eigenvalues in (-1/2, 1/2) (with multiplicity,
//! halved) gives the deficiency indices of the planar operator.
//!
//! Modules:
//! - [`graph`]: validated star-graph configuration and per-edge constants,
//! - [`transfer`]: transfer matrices, monodromy, secular function, and a
//!   full 2N×2N determinant oracle,
//! - [`solver`]: eigenvalue search with multiplicity classification,
//!   deficiency indices, parameter sweeps,
//! - [`unitary`]: the 2N×2N vertex unitary of the momentum picture and the
//!   arc-based spectral condition for symmetric graphs,
//! - [`closedform`]: explicit two- and three-edge secular equations and
//!   root formulas, used as independent oracles,
//! - [`bessel`]: modified Bessel function of the second kind K_ν,
//! - [`extensions`]: angular eigenfunctions, defect elements, and von
//!   Neumann extension data.

pub mod bessel;
pub mod closedform;
pub mod extensions;
pub mod graph;
pub mod linalg;
pub mod solver;
pub mod transfer;
pub mod unitary;

mod roots;

pub use graph::{
    convention_map_broken_line, derive_edge_constants, graph_from_json, EdgeConstants, GraphError,
    StarGraph,
};
pub use linalg::{CMat, Mat2, C64};
pub use solver::{
    deficiency_indices, find_eigenvalues, sweep, DeficiencyReport, EigenRecord, SolverError,
    SolverOptions, Spectrum, SweepRow, SweepTable,
};
pub use transfer::{
    edge_transfer, monodromy, secular_det_oracle, wrap_transfer, Monodromy, TransferError,
    TransferMatrix,
};
pub use unitary::{
    build_vertex_unitary, eigenphases, electrostatic_vertex_n2, spectrum_via_arc,
    EigenphaseRecord, UnitaryError, VertexUnitary,
};
