//! The complex group ring ℂG and its embedding into group ring matrices.

use std::ops::{Add, Sub};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// An element `Σ α_i g_i` of ℂG; `coeffs[i]` is the coefficient of `g_i`.
#[derive(Debug, Clone)]
pub struct GroupRingElement {
    group: Arc<FiniteGroup>,
    coeffs: Vec<Complex64>,
}

/// An `n × n` matrix carrying the group ring pattern: entry `(i, j)` is the
/// coefficient of `g_i⁻¹ g_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct RgMatrix(DMatrix<Complex64>);

impl RgMatrix {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }
}

fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl GroupRingElement {
    pub fn new(group: Arc<FiniteGroup>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::dimension(group.order(), coeffs.len()));
        }
        Ok(Self { group, coeffs })
    }

    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        Self {
            group,
            coeffs: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn one(group: Arc<FiniteGroup>) -> Self {
        Self::basis(group, 0)
    }

    /// The group element `g_i` itself.
    pub fn basis(group: Arc<FiniteGroup>, i: usize) -> Self {
        let mut e = Self::zero(group);
        e.coeffs[i] = Complex64::new(1.0, 0.0);
        e
    }

    /// Coefficients with real and imaginary parts uniform in `[-1, 1)`.
    pub fn random<R: Rng + ?Sized>(group: Arc<FiniteGroup>, rng: &mut R) -> Self {
        let coeffs = (0..group.order())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Self { group, coeffs }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Complex64 {
        self.coeffs[i]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient-wise distance; `None` for different groups.
    pub fn distance(&self, other: &Self) -> Option<f64> {
        same_group(&self.group, &other.group).then(|| {
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max)
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        Ok(Self {
            group: self.group.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn sigma(&self) -> RgMatrix {
        sigma(self)
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;

    /// Panics on a group mismatch; use [`GroupRingElement::checked_add`] otherwise.
    fn add(self, rhs: Self) -> GroupRingElement {
        self.checked_add(rhs).expect("group mismatch")
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;

    fn sub(self, rhs: Self) -> GroupRingElement {
        self.checked_sub(rhs).expect("group mismatch")
    }
}

/// The group ring matrix `σ(w)` with entries `α_{g_i⁻¹ g_j}`.
pub fn sigma(w: &GroupRingElement) -> RgMatrix {
    let g = &w.group;
    let n = g.order();
    RgMatrix(DMatrix::from_fn(n, n, |i, j| w.coeffs[g.mul(g.inverse(i), j)]))
}

/// Product in ℂG by direct convolution over the multiplication table.
pub fn ring_multiply(w: &GroupRingElement, v: &GroupRingElement) -> Result<GroupRingElement> {
    if !same_group(&w.group, &v.group) {
        return Err(Error::GroupMismatch);
    }
    let g = &w.group;
    let mut out = GroupRingElement::zero(g.clone());
    for (i, &a) in w.coeffs.iter().enumerate() {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, &b) in v.coeffs.iter().enumerate() {
            out.coeffs[g.mul(i, j)] += a * b;
        }
    }
    Ok(out)
}

/// `w*`: coefficient of `g` becomes the conjugate of the coefficient of `g⁻¹`.
pub fn involution(w: &GroupRingElement) -> GroupRingElement {
    let g = &w.group;
    GroupRingElement {
        group: g.clone(),
        coeffs: (0..g.order()).map(|i| w.coeffs[g.inverse(i)].conj()).collect(),
    }
}

/// Default pattern tolerance: `1e-9 · n · max|entry|`.
pub fn default_pattern_tol(n: usize, a: &DMatrix<Complex64>) -> f64 {
    let max = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
    1e-9 * n as f64 * max.max(f64::MIN_POSITIVE)
}

/// Recovers `w` from `A` when `A` follows the group ring pattern within `tol`
/// (default [`default_pattern_tol`]); `None` when the pattern is broken.
pub fn is_rg_matrix(
    group: &Arc<FiniteGroup>,
    a: &DMatrix<Complex64>,
    tol: Option<f64>,
) -> Result<Option<GroupRingElement>> {
    let n = group.order();
    if a.shape() != (n, n) {
        return Err(Error::dimension(format!("{n}x{n}"), format!("{}x{}", a.nrows(), a.ncols())));
    }
    let tol = tol.unwrap_or_else(|| default_pattern_tol(n, a));
    let first_row: Vec<Complex64> = a.row(0).iter().copied().collect();
    for i in 0..n {
        let inv = group.inverse(i);
        for j in 0..n {
            if (a[(i, j)] - first_row[group.mul(inv, j)]).norm() > tol {
                return Ok(None);
            }
        }
    }
    Ok(Some(GroupRingElement {
        group: group.clone(),
        coeffs: first_row,
    }))
}
