//! Interaction-picture Hamiltonians of the resonantly driven motion.
//!
//! ℏ = 1 throughout; matrix entries carry inverse-time units. The beat
//! detuning Δ = s₁ν₁ + s₂ν₂ selects which sideband operators survive the
//! vibrational rotating-wave approximation.

use nalgebra::DMatrix;

use crate::couplings::g_matrix;
use crate::error::{Error, Result};
use crate::fock::OperatorMatrix;
use crate::C64;

/// Beat resonance and per-mode drive parameters.
///
/// A zero Lamb–Dicke parameter disables a mode: it drops out of the tensor
/// product and instead constrains which terms of the resonance sum survive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceSpec {
    pub s1: i64,
    pub s2: i64,
    pub etas: [f64; 3],
    pub omega: C64,
    pub cutoffs: [usize; 3],
}

impl ResonanceSpec {
    pub fn validate(&self) -> Result<()> {
        for &eta in &self.etas {
            if !eta.is_finite() || eta < 0.0 {
                return Err(Error::InvalidInput(
                    "Lamb-Dicke parameters must be finite and >= 0".into(),
                ));
            }
        }
        if self.enabled_modes().is_empty() {
            return Err(Error::InvalidInput(
                "at least one Lamb-Dicke parameter must be positive".into(),
            ));
        }
        for &m in &self.enabled_modes() {
            if self.cutoffs[m] < 1 {
                return Err(Error::InvalidInput("cutoffs must be at least 1".into()));
            }
        }
        Ok(())
    }

    /// Indices of modes with η > 0, in mode order.
    pub fn enabled_modes(&self) -> Vec<usize> {
        (0..3).filter(|&i| self.etas[i] > 0.0).collect()
    }

    /// Hilbert-space dimension of the enabled-mode tensor product.
    pub fn dim(&self) -> usize {
        self.enabled_modes()
            .iter()
            .map(|&m| self.cutoffs[m])
            .product()
    }

    fn order_of(&self, mode: usize, n: i64) -> i64 {
        match mode {
            0 => n.saturating_sub(self.s1),
            1 => n.saturating_sub(self.s2),
            _ => n,
        }
    }
}

/// Effective two-photon Rabi frequency of the off-resonant Raman pair:
/// Ω = Ω₁ Ω₂* / (2 detuning).
pub fn two_photon_rabi(omega1: C64, omega2: C64, detuning: f64) -> Result<C64> {
    if detuning == 0.0 || !detuning.is_finite() {
        return Err(Error::ZeroDetuning);
    }
    Ok(omega1 * omega2.conj() / C64::new(2.0 * detuning, 0.0))
}

/// One-mode sideband Hamiltonian H = (Ω/2) f̂_k(n̂; η)(iηâ)^k + H.c.
///
/// For k = 0 this collapses to the diagonal Re(Ω) f̂₀.
pub fn h_one_mode(k: usize, eta: f64, omega: C64, cutoff: usize) -> Result<OperatorMatrix> {
    if !eta.is_finite() || eta < 0.0 {
        return Err(Error::InvalidInput(
            "Lamb-Dicke parameter must be finite and >= 0".into(),
        ));
    }
    if cutoff < 1 {
        return Err(Error::InvalidInput("cutoff must be at least 1".into()));
    }
    // f_k (i eta a)^k is the order -k sideband operator
    let g = g_matrix(-(k as i64), eta, cutoff);
    let half = omega * C64::new(0.5, 0.0);
    let t = g.map(|z| half * z);
    Ok(OperatorMatrix::hermitian(&t + t.adjoint()))
}

/// Resonant multimode Hamiltonian
/// H = (Ω/2) Σ_n ĝ_{n−s₁}(1) ⊗ ĝ_{n−s₂}(2) ⊗ ĝ_n(3) + H.c.
///
/// The sum runs over every integer n whose factors are all representable:
/// enabled modes need |order| < cutoff, disabled modes force their order to
/// zero. If nothing survives, the result is the zero matrix with a warning.
pub fn h_resonant(spec: &ResonanceSpec) -> Result<OperatorMatrix> {
    spec.validate()?;
    let enabled = spec.enabled_modes();
    let dim = spec.dim();

    // Constraints from disabled modes pin n; enabled modes bound it.
    let mut pinned: Option<i64> = None;
    let mut conflict = false;
    for mode in 0..3 {
        if spec.etas[mode] > 0.0 {
            continue;
        }
        // order_of(mode, n) == 0 at exactly one n
        let n_forced = match mode {
            0 => spec.s1,
            1 => spec.s2,
            _ => 0,
        };
        match pinned {
            None => pinned = Some(n_forced),
            Some(p) if p != n_forced => conflict = true,
            _ => {}
        }
    }

    let mut lo = i64::MIN;
    let mut hi = i64::MAX;
    for &m in &enabled {
        let c = spec.cutoffs[m] as i64;
        // |order_of(m, n)| <= c - 1
        let shift = match m {
            0 => spec.s1,
            1 => spec.s2,
            _ => 0,
        };
        lo = lo.max(shift.saturating_sub(c - 1));
        hi = hi.min(shift.saturating_add(c - 1));
    }
    if let Some(p) = pinned {
        lo = lo.max(p);
        hi = hi.min(p);
    }

    let mut sum = DMatrix::<C64>::zeros(dim, dim);
    let mut any_term = false;
    if !conflict {
        for n in lo..=hi {
            let mut term: Option<DMatrix<C64>> = None;
            for &m in &enabled {
                let g = g_matrix(spec.order_of(m, n), spec.etas[m], spec.cutoffs[m]);
                term = Some(match term {
                    None => g,
                    Some(t) => t.kronecker(&g),
                });
            }
            if let Some(t) = term {
                any_term = true;
                sum += t;
            }
        }
    }
    if !any_term {
        log::warn!(
            "h_resonant: no representable term for s=({}, {}); returning the zero matrix",
            spec.s1,
            spec.s2
        );
        return Ok(OperatorMatrix::hermitian(DMatrix::zeros(dim, dim)));
    }
    let half = spec.omega * C64::new(0.5, 0.0);
    let t = sum.map(|z| half * z);
    Ok(OperatorMatrix::hermitian(&t + t.adjoint()))
}
