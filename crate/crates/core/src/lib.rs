//! Complete population transfer in four-mode nearest-neighbor systems.
//!
//! The Hamiltonian with couplings `(v12, v23, v34, v14)` factors in the Bell
//! basis into two independent SU(2) rotations with rates `vL` and `vR`.
//! Population moves fully from mode 1 to mode 3 exactly when `xi3 = 0` and
//! both rotations finish odd numbers of quarter turns together, which puts
//! the coupling ratios on a primitive Pythagorean triple.
//!
//! Every closed form here is checked against the brute-force propagator in
//! [`oracle`].

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod hamiltonian;
pub mod hopf;
pub mod matrix;
pub mod optimizer;
pub mod oracle;
pub mod triples;

pub use dynamics::{
    amplitudes_closed_form, frequencies, population_series, propagate_factored, su2_rotation, transfer_time,
    two_level_amplitudes, FrequencyPair, StateAmplitudes, TimeSeries, TransferSolution, TwoLevelParams,
};
pub use error::{Error, Result};
pub use hamiltonian::{bell_transform, build_hamiltonian, decompose, CouplingSet, Su2Generator};
pub use hopf::{cone_residual, hopf_map, ladder_from_hopf, HopfCoordinates};
pub use matrix::{Mat2, Mat4};
pub use optimizer::{design_search, infidelity, nelder_mead, DesignProblem, DesignResult, NelderMeadOptions};
pub use oracle::{jacobi_eigs, oracle_max_transfer, oracle_propagate, EigenSystem4};
pub use triples::{
    couplings_from_pair, detect_transfer_condition, enumerate_primitive, euclid_triple, OddPair, PythTriple,
    TransferMatch,
};
