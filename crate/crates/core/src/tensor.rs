use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use serde::{Deserialize, Serialize};

/// Which coordinate chart a tensor's components refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    Cartesian,
    /// Components in the (η, θ, ψ) coordinate basis.
    Toroidal,
}

/// Threshold used by [`SymTensor3::is_positive_definite`].
pub const POSITIVE_DEFINITE_THRESHOLD: f64 = 1e-12;

/// A symmetric 3×3 tensor sampled at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymTensor3 {
    m: Matrix3<f64>,
    chart: Chart,
}

impl SymTensor3 {
    /// Builds from the six independent components `[xx, xy, xz, yy, yz, zz]`.
    pub fn from_components(c: [f64; 6], chart: Chart) -> Self {
        let [xx, xy, xz, yy, yz, zz] = c;
        Self {
            m: Matrix3::new(xx, xy, xz, xy, yy, yz, xz, yz, zz),
            chart,
        }
    }

    /// Builds from a full matrix, keeping its symmetric part.
    pub fn from_matrix(m: Matrix3<f64>, chart: Chart) -> Self {
        Self {
            m: (m + m.transpose()) * 0.5,
            chart,
        }
    }

    pub fn components(&self) -> [f64; 6] {
        let m = &self.m;
        [m[(0, 0)], m[(0, 1)], m[(0, 2)], m[(1, 1)], m[(1, 2)], m[(2, 2)]]
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    pub fn determinant(&self) -> f64 {
        self.m.determinant()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let ev = SymmetricEigen::new(self.m).eigenvalues;
        let mut v = [ev[0], ev[1], ev[2]];
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn is_positive_definite(&self) -> bool {
        self.eigenvalues()[0] > POSITIVE_DEFINITE_THRESHOLD
    }

    /// Quadratic form `v·T·v`.
    pub fn quadratic(&self, v: &Vector3<f64>) -> f64 {
        v.dot(&(self.m * v))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            m: self.m * s,
            chart: self.chart,
        }
    }

    /// Largest absolute component difference, regardless of chart tag.
    pub fn max_abs_diff(&self, other: &SymTensor3) -> f64 {
        (self.m - other.m).abs().max()
    }
}
