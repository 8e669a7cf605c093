//! Numerical simulator for the laser-driven nonlinear motional dynamics of a
//! trapped atom in a truncated Fock space.
//!
//! A Raman pair detuned to a beat resonance drives the atom's vibration
//! through excitation-dependent coupling operators. Their diagonal values
//! oscillate with the motional amplitude and change sign on circles in phase
//! space, so the drive partitions the phase plane into zones with opposite
//! action: coherent states split at zone boundaries, squeeze against them in
//! amplitude, or pick up Kerr-type shearing on the carrier.
//!
//! The crate builds the truncated operators ([`couplings`],
//! [`hamiltonian`]), propagates exactly through Hermitian eigendecomposition
//! ([`evolution`]), analyzes states through Husimi Q grids and number
//! statistics ([`phasespace`]), and reproduces the reference scenarios as
//! deterministic data files ([`scenario`]).
//!
//! With the default `parallel` feature, Q-grid sampling distributes across
//! the rayon thread pool; disabling it leaves a pure sequential build.

pub mod couplings;
pub mod error;
pub mod evolution;
pub mod fock;
pub mod hamiltonian;
pub mod phasespace;
pub mod scenario;

/// Complex double-precision scalar used throughout.
pub type C64 = num_complex::Complex64;

pub use couplings::{
    f_operator, f_scalar, g_operator, zone_boundaries, CouplingSpec, ZoneBoundaries,
};
pub use error::{Error, Result};
pub use evolution::{evolve, nonlinear_displacement, propagator, TimeUnit, Trajectory};
pub use fock::{
    annihilation_matrix, coherent_state, fidelity, fock_state, inner_product, recommended_cutoff,
    OperatorMatrix, StateVector,
};
pub use hamiltonian::{h_one_mode, h_resonant, two_photon_rabi, ResonanceSpec};
pub use phasespace::{
    find_q_maxima, number_stats, number_stats_for_mode, q_function, q_function_seq,
    two_mode_charge, NumberStats, QGrid, QPeak, QWindow,
};
pub use scenario::{
    parse_config, preset_text, run_scenario, serialize_config, Outputs, RunSummary, Scenario,
    SimulationConfig, PRESET_NAMES,
};
