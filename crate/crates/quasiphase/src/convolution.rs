//! FFT convolution and Gaussian deconvolution of sampled phase-space functions.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::analytic::{KernelKind, KernelSpec};
use crate::error::{invalid, Error, Result};
use crate::grid::{Grid2D, GridAxes, Sample};

/// Zero-padded work array `ny × nx` (imaginary axis outer).
struct Padded {
    nx: usize,
    ny: usize,
    data: Vec<C64>,
}

impl Padded {
    fn embed<T: Sample>(grid: &Grid2D<T>) -> Self {
        let axes = grid.axes();
        let (nx, ny) = (2 * axes.re.count(), 2 * axes.im.count());
        let mut data = vec![C64::new(0.0, 0.0); nx * ny];
        for (j, row) in grid.values().chunks(axes.re.count()).enumerate() {
            for (i, &v) in row.iter().enumerate() {
                data[j * nx + i] = v.to_complex();
            }
        }
        Self { nx, ny, data }
    }

    /// Signed frequency index of bin `p` out of `n`.
    fn signed(p: usize, n: usize) -> f64 {
        if p < n.div_ceil(2) {
            p as f64
        } else {
            p as f64 - n as f64
        }
    }

    fn transform(&mut self, direction: FftDirection) {
        let mut planner = FftPlanner::new();
        let row_fft = planner.plan_fft(self.nx, direction);
        let col_fft = planner.plan_fft(self.ny, direction);
        self.data
            .par_chunks_mut(self.nx)
            .for_each(|row| row_fft.process(row));
        let (nx, ny) = (self.nx, self.ny);
        let mut cols: Vec<Vec<C64>> = (0..nx)
            .into_par_iter()
            .map(|i| (0..ny).map(|j| self.data[j * nx + i]).collect())
            .collect();
        cols.par_iter_mut().for_each(|col| process(&*col_fft, col));
        for (i, col) in cols.iter().enumerate() {
            for (j, &v) in col.iter().enumerate() {
                self.data[j * nx + i] = v;
            }
        }
        if direction == FftDirection::Inverse {
            let scale = 1.0 / (nx * ny) as f64;
            self.data.iter_mut().for_each(|v| *v *= scale);
        }
    }

    fn extract<T: Sample>(&self, axes: GridAxes) -> Grid2D<T> {
        let (cx, cy) = (axes.re.count(), axes.im.count());
        let values = (0..cy)
            .flat_map(|j| (0..cx).map(move |i| (i, j)))
            .map(|(i, j)| T::from_complex(self.data[j * self.nx + i]))
            .collect();
        Grid2D::from_values(axes, values).expect("extracted grid has input shape")
    }
}

fn process(fft: &dyn Fft<f64>, buffer: &mut [C64]) {
    fft.process(buffer);
}

/// `(f ∗ K)(α) = ∫ f(α') K(α − α') d²α'` on the input axes.
///
/// The kernel is sampled at the grid offsets and the product is formed in
/// Fourier space with both axes zero-padded to twice their length, so the
/// result carries no wraparound.
pub fn convolve<T: Sample>(f: &Grid2D<T>, kernel: &KernelSpec) -> Result<Grid2D<T>> {
    check_values(f)?;
    let axes = *f.axes();
    let (hx, hy) = (axes.re.spacing(), axes.im.spacing());
    let mut signal = Padded::embed(f);
    let (nx, ny) = (signal.nx, signal.ny);
    let mut kern = Padded {
        nx,
        ny,
        data: (0..nx * ny)
            .into_par_iter()
            .map(|k| {
                let dx = Padded::signed(k % nx, nx) * hx;
                let dy = Padded::signed(k / nx, ny) * hy;
                C64::new(kernel.value(dx, dy) * hx * hy, 0.0)
            })
            .collect(),
    };
    signal.transform(FftDirection::Forward);
    kern.transform(FftDirection::Forward);
    signal
        .data
        .iter_mut()
        .zip(&kern.data)
        .for_each(|(s, k)| *s *= k);
    signal.transform(FftDirection::Inverse);
    Ok(signal.extract(axes))
}

/// Regularized inverse of [`convolve`] for Gaussian kernels.
///
/// Fourier modes whose kernel transform does not exceed `cutoff_eps` are set
/// to zero; `cutoff_eps = 1` therefore suppresses everything. The sinc²
/// kernel is rejected because its transform vanishes outside a square.
pub fn deconvolve<T: Sample>(
    f: &Grid2D<T>,
    kernel: &KernelSpec,
    cutoff_eps: f64,
) -> Result<Grid2D<T>> {
    if let KernelKind::Sinc2 { .. } = kernel.kind() {
        return Err(Error::UnsupportedKernel(
            "sinc² transform has compact support and cannot be inverted",
        ));
    }
    if !(cutoff_eps > 0.0 && cutoff_eps <= 1.0) {
        return Err(invalid(
            "cutoff_eps",
            format!("must lie in (0, 1], got {cutoff_eps}"),
        ));
    }
    check_values(f)?;
    let axes = *f.axes();
    let mut signal = Padded::embed(f);
    let (nx, ny) = (signal.nx, signal.ny);
    let dkx = 2.0 * PI / (nx as f64 * axes.re.spacing());
    let dky = 2.0 * PI / (ny as f64 * axes.im.spacing());
    signal.transform(FftDirection::Forward);
    signal.data.par_iter_mut().enumerate().for_each(|(k, v)| {
        let kx = Padded::signed(k % nx, nx) * dkx;
        let ky = Padded::signed(k / nx, ny) * dky;
        let t = kernel.transform(kx, ky);
        *v = if t > cutoff_eps {
            *v / t
        } else {
            C64::new(0.0, 0.0)
        };
    });
    signal.transform(FftDirection::Inverse);
    Ok(signal.extract(axes))
}

fn check_values<T: Sample>(f: &Grid2D<T>) -> Result<()> {
    if f.values().iter().all(|v| {
        let c = v.to_complex();
        c.re.is_finite() && c.im.is_finite()
    }) {
        Ok(())
    } else {
        Err(Error::NonFinite("grid values"))
    }
}
