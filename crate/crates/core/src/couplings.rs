//! Excitation-dependent coupling operators of the Raman drive.
//!
//! The drive couples to the motion through diagonal operator functions
//! f̂_k(n̂; η) and sideband operators ĝ_k = (iηâ†)^k f̂_k (k ≥ 0) or
//! f̂_|k| (iηâ)^|k| (k < 0). The diagonal values oscillate with the
//! excitation and change sign on circles in phase space, partitioning it
//! into zones with opposite drive action; `zone_boundaries` locates those
//! sign changes by an integer scan.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fock::OperatorMatrix;
use crate::C64;

/// Physical parameters of one Raman drive resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSpec {
    /// Sideband order; negative selects the lowering-ladder variant of ĝ.
    pub k: i64,
    /// Lamb–Dicke parameter along the driven axis.
    pub eta: f64,
    /// Complex two-photon Rabi frequency Ω = |Ω|e^{iφ}.
    pub omega: C64,
}

impl CouplingSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.eta.is_finite() || self.eta < 0.0 {
            return Err(Error::InvalidInput(
                "Lamb-Dicke parameter must be finite and >= 0".into(),
            ));
        }
        if !self.omega.re.is_finite() || !self.omega.im.is_finite() {
            return Err(Error::InvalidInput("Rabi frequency must be finite".into()));
        }
        Ok(())
    }

    /// Sideband operator ĝ_k of this drive in a truncated space.
    pub fn coupling_operator(&self, cutoff: usize) -> Result<OperatorMatrix> {
        self.validate()?;
        g_operator(self.k, self.eta, cutoff)
    }
}

/// Sign-change circles of a diagonal coupling.
///
/// `radii[j]` = √(n*_j) with n*_j the linearly interpolated crossing inside
/// the integer bracket `brackets[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZoneBoundaries {
    pub k: usize,
    pub eta: f64,
    pub radii: Vec<f64>,
    pub brackets: Vec<(usize, usize)>,
}

impl ZoneBoundaries {
    /// Interpolated crossing levels n* = radius².
    pub fn crossings(&self) -> Vec<f64> {
        self.radii.iter().map(|r| r * r).collect()
    }

    /// Boundary radius nearest to |α|.
    pub fn nearest_radius(&self, amplitude: f64) -> Option<f64> {
        self.radii
            .iter()
            .copied()
            .min_by(|a, b| (a - amplitude).abs().total_cmp(&(b - amplitude).abs()))
    }

    /// Smallest boundary radius strictly above |α| (outward reach of the
    /// k ≥ 1 displacement flow).
    pub fn next_radius_above(&self, amplitude: f64) -> Option<f64> {
        self.radii
            .iter()
            .copied()
            .find(|&r| r > amplitude * (1.0 + 1e-12) + 1e-12)
    }
}

/// Diagonal value ⟨n|f̂_k|n⟩ with input validation.
pub fn f_scalar(k: usize, n: usize, eta: f64) -> Result<f64> {
    if !eta.is_finite() || eta < 0.0 {
        return Err(Error::InvalidInput(
            "Lamb-Dicke parameter must be finite and >= 0".into(),
        ));
    }
    Ok(f_diag(k, n, eta))
}

// e^{-eta^2/2} sum_{l=0..n} (-1)^l eta^{2l}/(l!(l+k)!) n!/(n-l)!.
// Terms follow t_{l+1} = t_l (-eta^2)(n-l)/((l+1)(l+k+1)) with the 1/k! kept
// outside the sum so the recurrence stays O(1) per term for any n.
pub(crate) fn f_diag(k: usize, n: usize, eta: f64) -> f64 {
    let x = eta * eta;
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    for l in 0..n {
        term *= -x * ((n - l) as f64) / (((l + 1) * (l + k + 1)) as f64);
        sum += term;
    }
    let k_factorial: f64 = (1..=k).map(|j| j as f64).product();
    (-x / 2.0).exp() * sum / k_factorial
}

// <n+k| g_k |n> for k >= 0. The ladder prefactor eta^k sqrt((n+k)!/n!)/k!
// is accumulated in log space so extreme orders underflow cleanly instead of
// meeting inf * 0.
pub(crate) fn g_element(k: usize, n: usize, eta: f64) -> C64 {
    let x = eta * eta;
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    for l in 0..n {
        term *= -x * ((n - l) as f64) / (((l + 1) * (l + k + 1)) as f64);
        sum += term;
    }
    let mut ln_pref = -x / 2.0;
    for j in 1..=k {
        ln_pref += eta.ln() + 0.5 * ((n + j) as f64).ln() - (j as f64).ln();
    }
    i_pow(k) * C64::new(ln_pref.exp() * sum, 0.0)
}

fn i_pow(k: usize) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// Diagonal Hermitian operator f̂_k(n̂; η).
pub fn f_operator(k: usize, eta: f64, cutoff: usize) -> Result<OperatorMatrix> {
    if cutoff < 1 {
        return Err(Error::InvalidInput("cutoff must be at least 1".into()));
    }
    f_scalar(k, 0, eta)?;
    let mut m = DMatrix::zeros(cutoff, cutoff);
    for n in 0..cutoff {
        m[(n, n)] = C64::new(f_diag(k, n, eta), 0.0);
    }
    Ok(OperatorMatrix::hermitian(m))
}

/// Sideband operator ĝ_k(â†, â; η) for signed order k.
///
/// Orders with |k| ≥ cutoff have no representable matrix element; the result
/// degenerates to the zero matrix with a warning.
pub fn g_operator(k: i64, eta: f64, cutoff: usize) -> Result<OperatorMatrix> {
    if cutoff < 1 {
        return Err(Error::InvalidInput("cutoff must be at least 1".into()));
    }
    f_scalar(0, 0, eta)?;
    let ka = k.unsigned_abs() as usize;
    if ka >= cutoff {
        log::warn!("g_operator: order |{k}| >= cutoff {cutoff}, returning the zero matrix");
        return Ok(OperatorMatrix::from_matrix(DMatrix::zeros(cutoff, cutoff)));
    }
    Ok(OperatorMatrix::from_matrix(g_matrix(k, eta, cutoff)))
}

pub(crate) fn g_matrix(k: i64, eta: f64, cutoff: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(cutoff, cutoff);
    let ka = k.unsigned_abs() as usize;
    if ka >= cutoff {
        return m;
    }
    if k >= 0 {
        // (i eta a^dag)^k f_k: k-th subdiagonal
        for n in 0..cutoff - ka {
            m[(n + ka, n)] = g_element(ka, n, eta);
        }
    } else {
        // f_|k| (i eta a)^|k|: k-th superdiagonal, f evaluated after lowering
        for n in 0..cutoff - ka {
            m[(n, n + ka)] = g_element(ka, n, eta);
        }
    }
    m
}

/// Scan the diagonal coupling for sign changes up to level `n_max`.
///
/// Each sign change between consecutive integers is bracketed and the
/// crossing located by linear interpolation; an empty list is a valid result.
pub fn zone_boundaries(k: usize, eta: f64, n_max: usize) -> Result<ZoneBoundaries> {
    if !eta.is_finite() || eta <= 0.0 {
        return Err(Error::InvalidInput(
            "zone scan needs a positive Lamb-Dicke parameter".into(),
        ));
    }
    if n_max < 1 {
        return Err(Error::InvalidInput("n_max must be at least 1".into()));
    }
    let mut radii = Vec::new();
    let mut brackets = Vec::new();
    let mut prev = f_diag(k, 0, eta);
    for n in 1..=n_max {
        let cur = f_diag(k, n, eta);
        if prev != 0.0 && cur != 0.0 && prev.signum() != cur.signum() {
            let frac = prev / (prev - cur);
            let n_star = (n - 1) as f64 + frac;
            radii.push(n_star.sqrt());
            brackets.push((n - 1, n));
        }
        prev = cur;
    }
    Ok(ZoneBoundaries {
        k,
        eta,
        radii,
        brackets,
    })
}
