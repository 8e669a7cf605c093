//! Shared oracle constructions for the integration suites.
//!
//! Everything here is deliberately independent of the library's coupling
//! recurrences: the displacement oracle is a brute-force matrix exponential
//! of the padded generator, and the squeezed-vacuum reference comes from the
//! textbook even-Fock series.

#![allow(dead_code)]

use motional::{StateVector, C64};
use nalgebra::{DMatrix, DVector};

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// First zeros of the Bessel functions J0 and J1, for the asymptotic
/// boundary estimates n* ~ (z / 2 eta)^2.
pub const J0_ZEROS: [f64; 2] = [2.404_825_557_695_772_4, 5.520_078_110_286_311];
pub const J1_ZEROS: [f64; 3] = [
    3.831_705_970_207_512_5,
    7.015_586_669_815_619,
    10.173_468_135_062_722,
];

/// Scaling-and-squaring Taylor matrix exponential.
pub fn expm_taylor(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    let norm1: f64 = (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = c(1.0 / 2f64.powi(squarings as i32));
    let a_scaled = a.map(|z| z * scale);
    let mut result = DMatrix::<C64>::identity(n, n);
    let mut term = DMatrix::<C64>::identity(n, n);
    for order in 1..200u32 {
        term = (&term * &a_scaled).map(|z| z / c(order as f64));
        let largest: f64 = term.iter().map(|z| z.norm()).fold(0.0, f64::max);
        result += &term;
        if largest < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// exp(i eta (a + a^dag)) computed numerically at dimension `dim`.
pub fn displacement_exponential(eta: f64, dim: usize) -> DMatrix<C64> {
    let mut ladder = DMatrix::<C64>::zeros(dim, dim);
    for n in 1..dim {
        ladder[(n - 1, n)] = c((n as f64).sqrt());
    }
    let generator = (&ladder + ladder.adjoint()).map(|z| z * C64::new(0.0, eta));
    expm_taylor(&generator)
}

/// Squeezed vacuum S(xi)|0> from its even-Fock amplitude series,
/// xi = r e^{i theta}:
/// c_{2m} = (-e^{i theta} tanh r)^m sqrt((2m)!)/(2^m m!) / sqrt(cosh r).
pub fn squeezed_vacuum(xi: C64, cutoff: usize) -> StateVector {
    let r = xi.norm();
    let phase_base = -C64::from_polar(1.0, xi.arg());
    let tanh_r = r.tanh();
    let mut v = DVector::<C64>::zeros(cutoff);
    let mut coef = 1.0f64; // sqrt((2m)!)/(2^m m!)
    for m in 0..cutoff.div_ceil(2) {
        if 2 * m >= cutoff {
            break;
        }
        v[2 * m] = phase_base.powu(m as u32) * c(tanh_r.powi(m as i32) * coef);
        coef *= ((2 * m + 1) as f64 * (2 * m + 2) as f64).sqrt() / (2.0 * (m + 1) as f64);
    }
    let amps: Vec<C64> = v.iter().copied().collect();
    StateVector::new(amps, vec![cutoff]).expect("squeezed series is normalizable")
}

pub fn mean_occupation(psi: &StateVector) -> f64 {
    psi.amplitudes()
        .iter()
        .enumerate()
        .map(|(n, z)| n as f64 * z.norm_sqr())
        .sum()
}

pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
