//! Uniform symmetric grids and sampled profiles.

use std::io::{self, Write};

use crate::error::{Error, Result};

/// Uniform grid on `[-extent, extent]` with `n` points.
///
/// A one-point grid holds only `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    extent: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(extent: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("grid needs at least one point"));
        }
        if n == 1 {
            return Ok(Grid1D { extent: 0.0, n });
        }
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(Error::invalid(format!("grid extent must be positive and finite, got {extent}")));
        }
        Ok(Grid1D { extent, n })
    }

    /// Grid with spacing at most `h`, always with an odd number of points so `x = 0` is a node.
    pub fn with_spacing(extent: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::invalid(format!("grid spacing must be positive, got {h}")));
        }
        let half = (extent / h).ceil().max(1.0) as usize;
        Self::new(extent, 2 * half + 1)
    }

    pub fn single_point() -> Self {
        Grid1D { extent: 0.0, n: 1 }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn spacing(&self) -> f64 {
        if self.n == 1 {
            0.0
        } else {
            2.0 * self.extent / (self.n - 1) as f64
        }
    }

    pub fn point(&self, i: usize) -> f64 {
        if self.n == 1 {
            return 0.0;
        }
        // mirror the upper half so x_i = -x_{n-1-i} holds bit for bit
        let h = self.spacing();
        let j = self.n - 1 - i;
        if i <= j {
            -self.extent + i as f64 * h
        } else {
            self.extent - j as f64 * h
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    /// Index of the grid point closest to zero.
    pub fn center_index(&self) -> usize {
        (self.n - 1) / 2
    }
}

/// Density values on a grid plus a pointwise error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSamples {
    pub grid: Grid1D,
    pub values: Vec<f64>,
    pub tolerance: f64,
}

/// Outcome of the profile invariant suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantReport {
    pub symmetry_error: f64,
    pub min_value: f64,
    /// Largest rise when walking outward from the peak.
    pub unimodality_violation: f64,
    /// `|trapezoid mass + tail mass - 1|`, when a tail mass was supplied.
    pub mass_error: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantTolerances {
    pub symmetry: f64,
    pub positivity: f64,
    pub unimodality: f64,
    pub mass: f64,
}

impl Default for InvariantTolerances {
    fn default() -> Self {
        InvariantTolerances { symmetry: 1e-12, positivity: 1e-10, unimodality: 1e-10, mass: 1e-4 }
    }
}

impl InvariantReport {
    pub fn violations(&self, tol: &InvariantTolerances) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.symmetry_error <= tol.symmetry) {
            out.push(format!("asymmetry {:e} exceeds {:e}", self.symmetry_error, tol.symmetry));
        }
        if !(self.min_value >= -tol.positivity) {
            out.push(format!("negative value {:e}", self.min_value));
        }
        if !(self.unimodality_violation <= tol.unimodality) {
            out.push(format!("not unimodal (rise of {:e} away from the peak)", self.unimodality_violation));
        }
        if let Some(m) = self.mass_error {
            if !(m <= tol.mass) {
                out.push(format!("mass off by {m:e}"));
            }
        }
        out
    }
}

impl ProfileSamples {
    pub fn new(grid: Grid1D, values: Vec<f64>, tolerance: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!("{} values for a grid of {} points", values.len(), grid.len())));
        }
        Ok(ProfileSamples { grid, values, tolerance })
    }

    /// Value at the grid point nearest `x = 0`.
    pub fn center_value(&self) -> f64 {
        self.values[self.grid.center_index()]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Trapezoidal integral over the grid.
    pub fn trapezoid(&self) -> f64 {
        let n = self.values.len();
        if n < 2 {
            return 0.0;
        }
        let inner: f64 = self.values[1..n - 1].iter().sum();
        self.grid.spacing() * (inner + 0.5 * (self.values[0] + self.values[n - 1]))
    }

    pub fn sup_distance(&self, other: &ProfileSamples) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Largest absolute value at the two grid ends.
    pub fn boundary_value(&self) -> f64 {
        self.values[0].abs().max(self.values[self.values.len() - 1].abs())
    }

    /// Average mirrored pairs so the samples are exactly even.
    pub fn symmetrize(&mut self) {
        let n = self.values.len();
        for i in 0..n / 2 {
            let avg = 0.5 * (self.values[i] + self.values[n - 1 - i]);
            self.values[i] = avg;
            self.values[n - 1 - i] = avg;
        }
    }

    /// Run the invariant suite. `tail_mass` is the exact mass outside the grid, if known.
    pub fn invariants(&self, tail_mass: Option<f64>) -> InvariantReport {
        let v = &self.values;
        let n = v.len();
        let symmetry_error = (0..n / 2).map(|i| (v[i] - v[n - 1 - i]).abs()).fold(0.0, f64::max);
        let min_value = v.iter().copied().fold(f64::INFINITY, f64::min);
        let peak =
            v.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, &x)| if x > acc.1 { (i, x) } else { acc }).0;
        let mut rise: f64 = 0.0;
        for i in peak + 1..n {
            rise = rise.max(v[i] - v[i - 1]);
        }
        for i in (0..peak).rev() {
            rise = rise.max(v[i] - v[i + 1]);
        }
        let mass_error = tail_mass.map(|t| (self.trapezoid() + t - 1.0).abs());
        InvariantReport { symmetry_error, min_value, unimodality_violation: rise, mass_error }
    }

    /// Write `x,value` rows, preceded by `# comment` lines.
    pub fn write_csv<W: Write>(&self, mut w: W, comments: &[String]) -> io::Result<()> {
        for c in comments {
            writeln!(w, "# {c}")?;
        }
        writeln!(w, "x,value")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{:.16e},{:.16e}", self.grid.point(i), v)?;
        }
        Ok(())
    }
}
