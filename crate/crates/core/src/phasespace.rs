//! Husimi Q sampling, number statistics and Q-peak detection.
//!
//! Grid evaluation is embarrassingly parallel over points; with the
//! `parallel` feature (default) rows are distributed across the rayon pool,
//! and `q_function_seq` keeps the single-threaded path available. Both
//! produce bitwise-identical grids.

use std::f64::consts::PI;

use nalgebra::DVector;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::StateVector;
use crate::C64;

/// Rectangular phase-space window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QWindow {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl QWindow {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Self {
            re_min,
            re_max,
            im_min,
            im_max,
        }
    }

    /// Square window centered on the origin.
    pub fn square(half_width: f64) -> Self {
        Self::new(-half_width, half_width, -half_width, half_width)
    }

    /// Square window centered on `center`.
    pub fn around(center: C64, half_width: f64) -> Self {
        Self::new(
            center.re - half_width,
            center.re + half_width,
            center.im - half_width,
            center.im + half_width,
        )
    }

    fn validate(&self) -> Result<()> {
        let vals = [self.re_min, self.re_max, self.im_min, self.im_max];
        if vals.iter().any(|v| !v.is_finite())
            || self.re_max < self.re_min
            || self.im_max < self.im_min
        {
            return Err(Error::InvalidInput(
                "phase-space window is empty or not finite".into(),
            ));
        }
        Ok(())
    }
}

/// Sampled Husimi Q function Q(α) = |⟨α|ψ⟩|²/π on a regular grid.
///
/// Values are stored row-major: the real axis index is slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct QGrid {
    pub window: QWindow,
    pub step: f64,
    pub n_re: usize,
    pub n_im: usize,
    values: Vec<f64>,
}

impl QGrid {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i_re: usize, i_im: usize) -> f64 {
        self.values[i_re * self.n_im + i_im]
    }

    pub fn alpha_at(&self, i_re: usize, i_im: usize) -> C64 {
        C64::new(
            self.window.re_min + i_re as f64 * self.step,
            self.window.im_min + i_im as f64 * self.step,
        )
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// step² Σ Q; approaches 1 when the window covers the state.
    pub fn total_mass(&self) -> f64 {
        self.step * self.step * self.values.iter().sum::<f64>()
    }
}

/// A strict local maximum of the sampled Q function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QPeak {
    pub alpha: C64,
    pub q: f64,
}

impl QPeak {
    pub fn radius(&self) -> f64 {
        self.alpha.norm()
    }
}

/// Number statistics of a state: ⟨n̂⟩, ⟨Δn̂²⟩ and their Fano-type ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumberStats {
    pub mean_n: f64,
    pub var_n: f64,
    /// ⟨Δn̂²⟩/⟨n̂⟩; absent when ⟨n̂⟩ = 0.
    pub ratio: Option<f64>,
    pub norm_defect: f64,
}

// <alpha|psi> via the multiplicative overlap recurrence; no factorial tables.
fn coherent_overlap(amplitudes: &DVector<C64>, alpha: C64) -> C64 {
    let mut term = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    let mut acc = C64::new(0.0, 0.0);
    for (n, z) in amplitudes.iter().enumerate() {
        acc += term * z;
        term *= alpha.conj() / C64::new(((n + 1) as f64).sqrt(), 0.0);
    }
    acc
}

fn grid_shape(window: &QWindow, step: f64) -> (usize, usize) {
    let count = |lo: f64, hi: f64| ((hi - lo) / step + 1e-9).floor() as usize + 1;
    (
        count(window.re_min, window.re_max),
        count(window.im_min, window.im_max),
    )
}

fn q_row(psi: &DVector<C64>, window: &QWindow, step: f64, i_re: usize, n_im: usize) -> Vec<f64> {
    let re = window.re_min + i_re as f64 * step;
    (0..n_im)
        .map(|j| {
            let alpha = C64::new(re, window.im_min + j as f64 * step);
            coherent_overlap(psi, alpha).norm_sqr() / PI
        })
        .collect()
}

fn check_q_inputs(psi: &StateVector, window: &QWindow, step: f64) -> Result<()> {
    if psi.mode_count() != 1 {
        return Err(Error::InvalidInput(
            "Q function needs a single-mode state; prepare a one-mode scenario \
             (mode reduction is not supported)"
                .into(),
        ));
    }
    window.validate()?;
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::InvalidInput("grid step must be positive".into()));
    }
    Ok(())
}

/// Sample the Husimi Q function over a window, parallelizing across grid
/// rows when the `parallel` feature is enabled.
pub fn q_function(psi: &StateVector, window: QWindow, step: f64) -> Result<QGrid> {
    check_q_inputs(psi, &window, step)?;
    let (n_re, n_im) = grid_shape(&window, step);
    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<f64>> = (0..n_re)
        .into_par_iter()
        .map(|i| q_row(psi.amplitudes(), &window, step, i, n_im))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<f64>> = (0..n_re)
        .map(|i| q_row(psi.amplitudes(), &window, step, i, n_im))
        .collect();
    Ok(QGrid {
        window,
        step,
        n_re,
        n_im,
        values: rows.concat(),
    })
}

/// Single-threaded Q sampling; same grid as [`q_function`], bit for bit.
pub fn q_function_seq(psi: &StateVector, window: QWindow, step: f64) -> Result<QGrid> {
    check_q_inputs(psi, &window, step)?;
    let (n_re, n_im) = grid_shape(&window, step);
    let rows: Vec<Vec<f64>> = (0..n_re)
        .map(|i| q_row(psi.amplitudes(), &window, step, i, n_im))
        .collect();
    Ok(QGrid {
        window,
        step,
        n_re,
        n_im,
        values: rows.concat(),
    })
}

/// Strict local maxima of a sampled grid over 8-neighborhoods.
///
/// Peaks below `floor` are dropped, the rest are sorted by height and any
/// peak closer than 2·step to a taller one is merged into it.
pub fn find_q_maxima(grid: &QGrid, floor: f64) -> Vec<QPeak> {
    let (n_re, n_im) = (grid.n_re, grid.n_im);
    let mut peaks = Vec::new();
    for i in 0..n_re {
        for j in 0..n_im {
            let v = grid.value(i, j);
            if v < floor {
                continue;
            }
            let mut is_max = true;
            'neighbors: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if ii < 0 || jj < 0 || ii >= n_re as i64 || jj >= n_im as i64 {
                        continue;
                    }
                    if grid.value(ii as usize, jj as usize) >= v {
                        is_max = false;
                        break 'neighbors;
                    }
                }
            }
            if is_max {
                peaks.push(QPeak {
                    alpha: grid.alpha_at(i, j),
                    q: v,
                });
            }
        }
    }
    peaks.sort_by(|a, b| b.q.total_cmp(&a.q));
    let merge_radius = 2.0 * grid.step;
    let mut merged: Vec<QPeak> = Vec::new();
    for p in peaks {
        if merged
            .iter()
            .all(|q| (p.alpha - q.alpha).norm() >= merge_radius)
        {
            merged.push(p);
        }
    }
    merged
}

/// Moments of the total number operator, summed over all modes.
pub fn number_stats(psi: &StateVector) -> NumberStats {
    stats_with_weight(psi, |ns| ns.iter().map(|&n| n as f64).sum())
}

/// Moments of one mode's number operator.
pub fn number_stats_for_mode(psi: &StateVector, mode: usize) -> Result<NumberStats> {
    if mode >= psi.mode_count() {
        return Err(Error::ModeMismatch {
            expected: mode + 1,
            found: psi.mode_count(),
        });
    }
    Ok(stats_with_weight(psi, |ns| ns[mode] as f64))
}

/// ⟨n̂₁ + 2n̂₂⟩ of a two-mode state; conserved by the (2, −1) resonance.
pub fn two_mode_charge(psi: &StateVector) -> Result<f64> {
    if psi.mode_count() != 2 {
        return Err(Error::ModeMismatch {
            expected: 2,
            found: psi.mode_count(),
        });
    }
    let m = stats_with_weight(psi, |ns| ns[0] as f64 + 2.0 * ns[1] as f64);
    Ok(m.mean_n)
}

fn stats_with_weight(psi: &StateVector, weight: impl Fn(&[usize]) -> f64) -> NumberStats {
    let dims = psi.mode_dims();
    let mut occupation = vec![0usize; dims.len()];
    let mut mean = 0.0;
    let mut second = 0.0;
    for (flat, z) in psi.amplitudes().iter().enumerate() {
        // decode the row-major flat index, mode 1 slowest
        let mut rest = flat;
        for (i, &d) in dims.iter().enumerate().rev() {
            occupation[i] = rest % d;
            rest /= d;
        }
        let w = weight(&occupation);
        let p = z.norm_sqr();
        mean += w * p;
        second += w * w * p;
    }
    let var = (second - mean * mean).max(0.0);
    NumberStats {
        mean_n: mean,
        var_n: var,
        ratio: if mean > 0.0 { Some(var / mean) } else { None },
        norm_defect: psi.norm_defect(),
    }
}
