//! Rectangular sampling of the complex phase-space plane.

use std::ops::{Add, Mul};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};

/// Uniform axis with `count ≥ 2` nodes from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    min: f64,
    max: f64,
    count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        check_finite("axis bounds", &[min, max])?;
        if count < 2 {
            return Err(crate::error::invalid(
                "count",
                format!("axis needs at least 2 nodes, got {count}"),
            ));
        }
        if min >= max {
            return Err(crate::error::invalid(
                "axis",
                format!("inverted bounds {min} ≥ {max}"),
            ));
        }
        Ok(Self { min, max, count })
    }

    /// `[−radius, radius]` with `count` nodes.
    pub fn symmetric(radius: f64, count: usize) -> Result<Self> {
        Self::new(-radius, radius, count)
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.max
        } else {
            self.min + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.node(i))
    }

    /// Recovers an axis from sampled node positions, rejecting non-uniform spacing.
    pub fn from_nodes(nodes: &[f64]) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(crate::error::invalid(
                "count",
                "axis needs at least 2 nodes",
            ));
        }
        let axis = Self::new(nodes[0], nodes[nodes.len() - 1], nodes.len())?;
        let tol = 1e-9 * axis.spacing();
        if nodes
            .iter()
            .enumerate()
            .any(|(i, &x)| (x - axis.node(i)).abs() > tol)
        {
            return Err(Error::NonUniformGrid);
        }
        Ok(axis)
    }

    /// Trapezoid weight of node `i` in units of the spacing.
    fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.count {
            0.5
        } else {
            1.0
        }
    }
}

/// Pair of axes describing a phase-space grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxes {
    pub re: Axis,
    pub im: Axis,
}

impl GridAxes {
    pub fn new(re: Axis, im: Axis) -> Self {
        Self { re, im }
    }

    /// Square grid `[−radius, radius]²` with `count` nodes per axis.
    pub fn square(radius: f64, count: usize) -> Result<Self> {
        let axis = Axis::symmetric(radius, count)?;
        Ok(Self { re: axis, im: axis })
    }

    pub fn len(&self) -> usize {
        self.re.count * self.im.count
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Area element `Δre · Δim`.
    pub fn cell_area(&self) -> f64 {
        self.re.spacing() * self.im.spacing()
    }

    /// Phase-space point at column `i` (real axis) and row `j` (imaginary axis).
    pub fn point(&self, i: usize, j: usize) -> C64 {
        C64::new(self.re.node(i), self.im.node(j))
    }
}

/// Values a grid can hold.
pub trait Sample:
    Copy
    + Send
    + Sync
    + Default
    + PartialEq
    + Add<Output = Self>
    + Mul<f64, Output = Self>
    + std::fmt::Debug
{
    fn to_complex(self) -> C64;
    fn from_complex(value: C64) -> Self;
}

impl Sample for f64 {
    fn to_complex(self) -> C64 {
        C64::new(self, 0.0)
    }
    fn from_complex(value: C64) -> Self {
        value.re
    }
}

impl Sample for C64 {
    fn to_complex(self) -> C64 {
        self
    }
    fn from_complex(value: C64) -> Self {
        value
    }
}

/// Sampled function on a [`GridAxes`], stored row-major with the imaginary
/// axis outer: `values[j * re.count + i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D<T> {
    axes: GridAxes,
    values: Vec<T>,
}

impl<T: Sample> Grid2D<T> {
    pub fn from_values(axes: GridAxes, values: Vec<T>) -> Result<Self> {
        if values.len() != axes.len() {
            return Err(Error::ShapeMismatch {
                left: vec![axes.im.count, axes.re.count],
                right: vec![values.len()],
            });
        }
        Ok(Self { axes, values })
    }

    /// Samples `f` at every node; rows are evaluated in parallel.
    pub fn from_fn(axes: GridAxes, f: impl Fn(C64) -> T + Sync) -> Self {
        let values = (0..axes.im.count)
            .into_par_iter()
            .flat_map_iter(|j| {
                let f = &f;
                (0..axes.re.count).map(move |i| f(axes.point(i, j)))
            })
            .collect();
        Self { axes, values }
    }

    /// Fallible variant of [`Grid2D::from_fn`]; the first error in row-major order wins.
    pub fn try_from_fn(axes: GridAxes, f: impl Fn(C64) -> Result<T> + Sync) -> Result<Self> {
        let rows: Vec<Result<Vec<T>>> = (0..axes.im.count)
            .into_par_iter()
            .map(|j| (0..axes.re.count).map(|i| f(axes.point(i, j))).collect())
            .collect();
        let mut values = Vec::with_capacity(axes.len());
        for row in rows {
            values.extend(row?);
        }
        Ok(Self { axes, values })
    }

    /// Grid from explicit node lists; spacing must be uniform.
    pub fn from_samples(re_nodes: &[f64], im_nodes: &[f64], values: Vec<T>) -> Result<Self> {
        let axes = GridAxes::new(Axis::from_nodes(re_nodes)?, Axis::from_nodes(im_nodes)?);
        Self::from_values(axes, values)
    }

    pub fn axes(&self) -> &GridAxes {
        &self.axes
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Value at real-axis column `i`, imaginary-axis row `j`.
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[j * self.axes.re.count + i]
    }

    pub fn map<U: Sample>(&self, f: impl Fn(T) -> U) -> Grid2D<U> {
        Grid2D {
            axes: self.axes,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Iterates `(point, value)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (C64, T)> + '_ {
        let n = self.axes.re.count;
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.axes.point(k % n, k / n), v))
    }
}

impl Grid2D<f64> {
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest absolute difference to another grid on the same axes.
    pub fn max_abs_diff(&self, other: &Grid2D<f64>) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `∫ f d²α` by the composite trapezoid rule (cells of area `Δre·Δim`
/// centred on the nodes, clipped at the grid edge).
///
/// Rows are reduced in parallel and their partial sums added in row order.
pub fn integrate<T: Sample>(grid: &Grid2D<T>) -> T {
    let axes = grid.axes;
    let n = axes.re.count;
    let rows: Vec<T> = grid
        .values
        .par_chunks(n)
        .enumerate()
        .map(|(j, row)| {
            let wj = axes.im.weight(j);
            row.iter().enumerate().fold(T::default(), |acc, (i, &v)| {
                acc + v * (axes.re.weight(i) * wj)
            })
        })
        .collect();
    rows.into_iter().fold(T::default(), |acc, r| acc + r) * axes.cell_area()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{thermal_p, KernelSpec};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn axis_validation() {
        assert!(Axis::new(0.0, 1.0, 1).is_err());
        assert!(Axis::new(3.0, -3.0, 10).is_err());
        assert!(Axis::new(0.0, f64::NAN, 4).is_err());
        let a = Axis::new(0.0, 1.0, 2).unwrap();
        assert_eq!(a.spacing(), 1.0);
        assert_eq!(a.nodes().collect::<Vec<_>>(), vec![0.0, 1.0]);
    }

    #[test]
    fn uniformity_check_on_samples() {
        assert!(Axis::from_nodes(&[0.0, 0.5, 1.0]).is_ok());
        assert!(matches!(
            Axis::from_nodes(&[0.0, 0.2, 1.0]),
            Err(Error::NonUniformGrid)
        ));
    }

    #[test]
    fn constant_on_unit_square() {
        let axes = GridAxes::new(
            Axis::new(0.0, 1.0, 2).unwrap(),
            Axis::new(0.0, 1.0, 2).unwrap(),
        );
        let g = Grid2D::from_fn(axes, |_| 1.0);
        assert_abs_diff_eq!(integrate(&g), 1.0, epsilon = 1e-15);
        let axes = GridAxes::new(
            Axis::new(0.0, 1.0, 17).unwrap(),
            Axis::new(0.0, 1.0, 5).unwrap(),
        );
        assert_abs_diff_eq!(
            integrate(&Grid2D::from_fn(axes, |_| 1.0)),
            1.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn thermal_mass() {
        let axes = GridAxes::square(6.0, 256).unwrap();
        let g = Grid2D::from_fn(axes, |a| thermal_p(1.0, a).unwrap());
        assert_abs_diff_eq!(integrate(&g), 1.0, epsilon = 1e-6);
    }

    /// `(1/π) ∫_{−a}^{a} sin²u/u² du`, the sinc² mass of one axis inside `|x| ≤ a/w`.
    fn sinc2_axis_mass(a: f64) -> f64 {
        let rule = gauss_quad::GaussLegendre::new(32).unwrap();
        let panels = (a / 0.5).ceil() as usize;
        let step = a / panels as f64;
        let f = |u: f64| if u == 0.0 { 1.0 } else { (u.sin() / u).powi(2) };
        let half: f64 = (0..panels)
            .map(|p| rule.integrate(p as f64 * step, (p + 1) as f64 * step, f))
            .sum();
        2.0 * half / PI
    }

    #[test]
    fn sinc2_kernel_mass_on_wide_grid() {
        let (w, radius) = (3.0, 40.0);
        let k = KernelSpec::sinc2(w).unwrap();
        let axes = GridAxes::square(radius, 1601).unwrap();
        let g = Grid2D::from_fn(axes, |a| k.value(a.re, a.im));
        let mass = integrate(&g);
        let inside = sinc2_axis_mass(w * radius).powi(2);
        assert_abs_diff_eq!(mass, inside, epsilon = 1e-6);
        // slow 1/x² tails: the square misses about 2/(π w R) of the mass
        assert_abs_diff_eq!(1.0 - mass, 2.0 / (PI * w * radius), epsilon = 1e-4);
    }

    #[test]
    fn storage_order_is_imaginary_outer() {
        let axes = GridAxes::new(
            Axis::new(0.0, 2.0, 3).unwrap(),
            Axis::new(-1.0, 1.0, 2).unwrap(),
        );
        let g = Grid2D::from_fn(axes, |a| a);
        assert_eq!(g.values()[1], C64::new(1.0, -1.0));
        assert_eq!(g.values()[3], C64::new(0.0, 1.0));
        assert_eq!(g.get(2, 1), C64::new(2.0, 1.0));
    }
}
