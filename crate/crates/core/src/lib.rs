//! Plane-wave scattering on a discrete one-dimensional lattice.
//!
//! The free Hamiltonian is the tridiagonal hopping matrix with `-1` off the
//! diagonal. A finite interaction window `W`, possibly non-Hermitian, scatters
//! an incoming wave `e^{i m phi}` into a reflected part `R e^{-i m phi}` and a
//! transmitted part `T e^{i m phi}`.
//!
//! The crate provides
//!
//! - lattice types, interaction windows and the PT operator ([`lattice`], [`window`]),
//! - the PT-symmetric pair family and the ultralocal block ([`model`]),
//! - two independent numerical solvers ([`solver`]) and exact formulas for
//!   small models ([`closed_form`]),
//! - parameter sweeps and cross-checks ([`analysis`]) and the command-line
//!   front end used by the `scatter` binary ([`cli`]).
//!
//! ```
//! use lattice_scatter::{build_pt_delta_pair, solve_matching, PhiAngle};
//!
//! let win = build_pt_delta_pair(2, 0.4).unwrap();
//! let rep = solve_matching(&win, PhiAngle::new(1.1).unwrap()).unwrap();
//! assert!(rep.amplitudes.defect().abs() < 1e-12);
//! ```

pub mod amplitudes;
pub mod analysis;
pub mod cli;
pub mod closed_form;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod model;
pub mod solver;
pub mod verify;
pub mod window;

pub use amplitudes::{ScatteringAmplitudes, WaveFunctionWindow};
pub use closed_form::{
    cf_m1, cf_m2, cf_m3, cf_ultralocal, cf_ultralocal_at, cf_ultralocal_prob_sum, closed_form,
    ClosedFormParams,
};
pub use error::{Error, Result};
pub use lattice::{energy_from_phi, LatticeConvention, PhiAngle};
pub use linalg::{solve_complex_linear, ComplexMatrix};
pub use model::{build_pt_delta_pair, build_ultralocal, ModelFamily};
pub use solver::{
    residual, solve, solve_matching, solve_transfer_matrix, MatchingSystem, SolveReport, SolverKind,
};
pub use window::{is_pt_symmetric, pt_violation, InteractionWindow, PtOperator, PtViolation};
