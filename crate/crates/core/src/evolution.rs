//! Exact unitary propagation by Hermitian eigendecomposition.
//!
//! All Hamiltonians here are time independent in the interaction picture, so
//! U(t) = V e^{−iλt} V† from one eigendecomposition is exact up to
//! linear-algebra error; no time stepping is involved.

use nalgebra::{DMatrix, DVector};

use crate::couplings::f_diag;
use crate::error::{Error, Result};
use crate::fock::{OperatorMatrix, StateVector};
use crate::C64;

/// Convention in which trajectory times are expressed.
///
/// The `OmegaT` and `EtaOmegaT` conventions count drive cycles:
/// one unit corresponds to 2π of accumulated phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeUnit {
    /// Raw interaction-picture time (ℏ = 1, radians of phase).
    Raw,
    /// |Ω|t in drive cycles.
    OmegaT,
    /// η|Ω|t in drive cycles.
    EtaOmegaT,
}

impl TimeUnit {
    pub fn as_str(&self) -> &'static str {
        match self {
            TimeUnit::Raw => "t",
            TimeUnit::OmegaT => "omega_t",
            TimeUnit::EtaOmegaT => "eta_omega_t",
        }
    }
}

impl std::fmt::Display for TimeUnit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// States sampled along one unitary evolution.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub time_unit: TimeUnit,
    /// |1 − ‖ψ‖²| measured before any renormalization, one entry per time.
    pub norm_defects: Vec<f64>,
}

impl Trajectory {
    pub fn max_norm_defect(&self) -> f64 {
        self.norm_defects.iter().copied().fold(0.0, f64::max)
    }

    /// Express the sampled times in another convention: times scale by
    /// `factor`, the states are untouched.
    pub fn relabel(mut self, unit: TimeUnit, factor: f64) -> Self {
        for t in &mut self.times {
            *t *= factor;
        }
        self.time_unit = unit;
        self
    }
}

struct EigenSystem {
    values: DVector<f64>,
    vectors: DMatrix<C64>,
}

fn decompose(h: &OperatorMatrix) -> Result<EigenSystem> {
    if !h.is_hermitian() {
        return Err(Error::NonHermitian);
    }
    let se = h.entries().clone().symmetric_eigen();
    if se.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical(
            "eigendecomposition produced non-finite values".into(),
        ));
    }
    Ok(EigenSystem {
        values: se.eigenvalues,
        vectors: se.eigenvectors,
    })
}

impl EigenSystem {
    fn propagator_matrix(&self, t: f64) -> DMatrix<C64> {
        let n = self.values.len();
        let phases =
            DVector::from_iterator(n, self.values.iter().map(|&l| C64::new(0.0, -l * t).exp()));
        let mut scaled = self.vectors.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= phases[j];
        }
        scaled * self.vectors.adjoint()
    }

    fn evolve_coefficients(&self, psi0: &DVector<C64>) -> DVector<C64> {
        self.vectors.adjoint() * psi0
    }

    fn state_at(&self, coeff: &DVector<C64>, t: f64) -> DVector<C64> {
        let phased = DVector::from_iterator(
            coeff.len(),
            coeff
                .iter()
                .zip(self.values.iter())
                .map(|(c, &l)| c * C64::new(0.0, -l * t).exp()),
        );
        &self.vectors * phased
    }
}

/// U(t) = exp(−iHt) for a Hermitian-flagged H; the result carries the
/// unitary flag.
pub fn propagator(h: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    let eig = decompose(h)?;
    Ok(OperatorMatrix::unitary(eig.propagator_matrix(t)))
}

/// Nonlinearly modified coherent displacement
/// U = exp[−(ηΩ*t/2) â† f̂₁(n̂; η) + (ηΩt/2) f̂₁(n̂; η) â].
///
/// The anti-Hermitian generator G is exponentiated through the Hermitian
/// eigendecomposition of iG.
pub fn nonlinear_displacement(
    eta: f64,
    omega: C64,
    t: f64,
    cutoff: usize,
) -> Result<OperatorMatrix> {
    if !eta.is_finite() || eta < 0.0 {
        return Err(Error::InvalidInput(
            "Lamb-Dicke parameter must be finite and >= 0".into(),
        ));
    }
    if cutoff < 2 {
        return Err(Error::InvalidInput("cutoff must be at least 2".into()));
    }
    // f1 a is bidiagonal: <n| f1 a |n+1> = sqrt(n+1) f1(n)
    let mut m = DMatrix::<C64>::zeros(cutoff, cutoff);
    let front = omega * C64::new(eta * t / 2.0, 0.0);
    for n in 0..cutoff - 1 {
        m[(n, n + 1)] = front * C64::new(((n + 1) as f64).sqrt() * f_diag(1, n, eta), 0.0);
    }
    // G = m - m^dag; exponentiate via the Hermitian iG
    let i_gen = (&m - m.adjoint()).map(|z| z * C64::new(0.0, 1.0));
    let h = OperatorMatrix::hermitian(i_gen);
    propagator(&h, 1.0)
}

/// Evolve a state under a Hermitian-flagged Hamiltonian, sampling the given
/// strictly increasing times.
///
/// One eigendecomposition is reused for every sample. Output states are
/// renormalized only when the norm drift exceeds 1e−12; the measured drift
/// is recorded in the trajectory either way.
pub fn evolve(psi0: &StateVector, h: &OperatorMatrix, times: &[f64]) -> Result<Trajectory> {
    if h.dim() != psi0.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: psi0.dim(),
        });
    }
    if times.is_empty() {
        return Err(Error::InvalidInput("time list must not be empty".into()));
    }
    if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "times must be finite and strictly increasing".into(),
        ));
    }
    let eig = decompose(h)?;
    let coeff = eig.evolve_coefficients(psi0.amplitudes());
    let mut states = Vec::with_capacity(times.len());
    let mut norm_defects = Vec::with_capacity(times.len());
    for &t in times {
        let v = eig.state_at(&coeff, t);
        let defect = (1.0 - v.norm_squared()).abs();
        if !defect.is_finite() {
            return Err(Error::Numerical(
                "evolution produced a non-finite state".into(),
            ));
        }
        norm_defects.push(defect);
        let v = if defect > 1e-12 {
            let norm = v.norm();
            v / C64::new(norm, 0.0)
        } else {
            v
        };
        states.push(StateVector::from_dvector_raw(v, psi0.mode_dims().to_vec()));
    }
    Ok(Trajectory {
        times: times.to_vec(),
        states,
        time_unit: TimeUnit::Raw,
        norm_defects,
    })
}
