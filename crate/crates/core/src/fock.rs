//! Truncated-Fock-space states and operators.
//!
//! States are complex amplitude vectors over the number basis |0⟩..|N−1⟩ of
//! one or more vibrational modes; multimode states flatten row-major with
//! mode 1 slowest. Operators are dense complex square matrices carrying
//! Hermiticity/unitarity flags set by their constructors.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::C64;

/// Hermiticity tolerance guaranteed by flagged constructors.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Unitarity tolerance guaranteed by flagged constructors.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Pure motional state in a truncated number basis.
///
/// Amplitudes are normalized on construction; `mode_dims` lists the per-mode
/// cutoff dimensions, and the flat index runs row-major with mode 1 slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<C64>,
    mode_dims: Vec<usize>,
}

impl StateVector {
    /// Build a normalized state from raw amplitudes.
    pub fn new(amplitudes: Vec<C64>, mode_dims: Vec<usize>) -> Result<Self> {
        let len: usize = mode_dims.iter().product();
        if mode_dims.is_empty() || mode_dims.contains(&0) {
            return Err(Error::InvalidInput(
                "mode dimensions must be nonempty and positive".into(),
            ));
        }
        if amplitudes.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: amplitudes.len(),
            });
        }
        let v = DVector::from_vec(amplitudes);
        Self::from_dvector(v, mode_dims)
    }

    pub(crate) fn from_dvector(v: DVector<C64>, mode_dims: Vec<usize>) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidInput(
                "state amplitudes are zero or not finite".into(),
            ));
        }
        Ok(Self {
            amplitudes: v / C64::new(norm, 0.0),
            mode_dims,
        })
    }

    // Trusted constructor for vectors already normalized by the caller.
    pub(crate) fn from_dvector_raw(amplitudes: DVector<C64>, mode_dims: Vec<usize>) -> Self {
        Self {
            amplitudes,
            mode_dims,
        }
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn mode_dims(&self) -> &[usize] {
        &self.mode_dims
    }

    pub fn mode_count(&self) -> usize {
        self.mode_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// |1 − ‖ψ‖²|.
    pub fn norm_defect(&self) -> f64 {
        (1.0 - self.norm_squared()).abs()
    }

    /// Kronecker product; mode dimension lists concatenate.
    pub fn tensor(&self, other: &Self) -> Self {
        let v = self.amplitudes.kronecker(&other.amplitudes);
        let mut dims = self.mode_dims.clone();
        dims.extend_from_slice(&other.mode_dims);
        Self {
            amplitudes: v,
            mode_dims: dims,
        }
    }

    /// Occupation probability of the flat basis index.
    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }
}

/// ⟨a|b⟩ = Σ conj(a_i) b_i; requires identical mode dimensions.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<C64> {
    if a.mode_dims != b.mode_dims {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok((a.amplitudes.adjoint() * &b.amplitudes)[(0, 0)])
}

/// |⟨a|b⟩|².
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    inner_product(a, b).map(|z| z.norm_sqr())
}

/// Dense complex operator with Hermiticity/unitarity metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<C64>,
    hermitian: bool,
    unitary: bool,
}

impl OperatorMatrix {
    /// Wrap a square matrix with no property flags.
    pub fn from_matrix(entries: DMatrix<C64>) -> Self {
        assert_eq!(entries.nrows(), entries.ncols(), "operator must be square");
        Self {
            entries,
            hermitian: false,
            unitary: false,
        }
    }

    /// Wrap a matrix known Hermitian by construction; the defect is verified.
    pub fn hermitian(entries: DMatrix<C64>) -> Self {
        let mut op = Self::from_matrix(entries);
        let defect = op.hermiticity_defect();
        assert!(
            defect <= HERMITICITY_TOL,
            "matrix is not Hermitian (defect {defect:e})"
        );
        op.hermitian = true;
        op
    }

    /// Wrap a matrix known unitary by construction; the defect is verified.
    pub fn unitary(entries: DMatrix<C64>) -> Self {
        let mut op = Self::from_matrix(entries);
        let defect = op.unitarity_defect();
        assert!(
            defect <= UNITARITY_TOL,
            "matrix is not unitary (defect {defect:e})"
        );
        op.unitary = true;
        op
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: DMatrix::identity(dim, dim),
            hermitian: true,
            unitary: true,
        }
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    /// max |M − M†|.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.entries[(i, j)] - self.entries[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// max |M†M − I|.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.entries.adjoint() * &self.entries;
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
                worst = worst.max((prod[(i, j)] - expect).norm());
            }
        }
        worst
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
            hermitian: self.hermitian,
            unitary: self.unitary,
        }
    }

    /// Kronecker product; Hermiticity and unitarity survive it.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            entries: self.entries.kronecker(&other.entries),
            hermitian: self.hermitian && other.hermitian,
            unitary: self.unitary && other.unitary,
        }
    }

    /// Apply to a state; the result keeps the state's mode layout.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if self.dim() != psi.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        let v = &self.entries * psi.amplitudes();
        StateVector::from_dvector(v, psi.mode_dims().to_vec())
    }

    /// max |A − B| over entries.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Basis ket |n⟩ in a truncated space of the given dimension.
pub fn fock_state(n: usize, cutoff: usize) -> Result<StateVector> {
    if n >= cutoff {
        return Err(Error::IndexOutOfRange {
            index: n,
            dim: cutoff,
        });
    }
    let mut v = DVector::zeros(cutoff);
    v[n] = C64::new(1.0, 0.0);
    Ok(StateVector {
        amplitudes: v,
        mode_dims: vec![cutoff],
    })
}

/// Recommended truncation for a coherent amplitude: |α|² + 8|α| + 20 keeps
/// the discarded tail below 1e−8 for all scenarios of interest.
pub fn recommended_cutoff(alpha: C64) -> usize {
    let a = alpha.norm();
    (a * a + 8.0 * a + 20.0).ceil() as usize
}

/// Coherent state |α⟩ truncated at `cutoff` levels.
///
/// Amplitudes follow c_{n+1} = c_n α/√(n+1) from c_0 = e^{−|α|²/2} and are
/// renormalized afterwards; a tail mass above 1e−8 logs a truncation warning.
pub fn coherent_state(alpha: C64, cutoff: usize) -> Result<StateVector> {
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::InvalidInput(
            "coherent amplitude must be finite".into(),
        ));
    }
    if cutoff < 1 {
        return Err(Error::InvalidInput("cutoff must be at least 1".into()));
    }
    let mut v = DVector::zeros(cutoff);
    let mut c_n = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..cutoff {
        v[n] = c_n;
        c_n *= alpha / C64::new(((n + 1) as f64).sqrt(), 0.0);
    }
    let kept = v.norm_squared();
    if kept == 0.0 {
        return Err(Error::InvalidInput(
            "coherent amplitude too large to represent at this cutoff".into(),
        ));
    }
    let tail = 1.0 - kept;
    if tail >= 1e-8 {
        log::warn!(
            "coherent state truncated: tail mass {tail:.3e} at cutoff {cutoff} \
             (recommended cutoff {})",
            recommended_cutoff(alpha)
        );
    }
    StateVector::from_dvector(v, vec![cutoff])
}

/// Annihilation operator: ⟨n−1|â|n⟩ = √n.
pub fn annihilation_matrix(cutoff: usize) -> OperatorMatrix {
    assert!(cutoff >= 1, "cutoff must be at least 1");
    let mut m = DMatrix::zeros(cutoff, cutoff);
    for n in 1..cutoff {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    OperatorMatrix::from_matrix(m)
}
