//! Block-diagonal complex matrix *-algebras `⊕ Mₙᵢ(ℂ)`.
//!
//! An [`Element`] is a tuple of square complex matrices, one per block of its
//! [`AlgebraShape`]. All operations act blockwise. The operator norm is the
//! largest spectral norm over the blocks, which is the C*-norm of the direct sum.

pub(crate) mod calculus;
mod json;
mod sampler;
mod tolerance;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use calculus::FourUnitaries;
pub use sampler::SeededSampler;
pub use tolerance::ToleranceConfig;

pub type C64 = Complex64;
pub type CMat = DMatrix<Complex64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Block dimensions `[n₁, …, n_k]` of `⊕ Mₙᵢ(ℂ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct AlgebraShape {
    block_dims: Vec<usize>,
}

impl AlgebraShape {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::structural(
                "algebra shape must have at least one block",
            ));
        }
        if let Some(pos) = block_dims.iter().position(|&n| n == 0) {
            return Err(Error::structural(format!("block {pos} has dimension 0")));
        }
        Ok(AlgebraShape { block_dims })
    }

    /// `k` blocks of size `n`, i.e. `Mₙ(ℂᵏ)`.
    pub fn uniform(n: usize, k: usize) -> Result<Self> {
        Self::new(vec![n; k])
    }

    pub fn dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn block_count(&self) -> usize {
        self.block_dims.len()
    }

    pub fn dim(&self, block: usize) -> usize {
        self.block_dims[block]
    }

    /// Complex dimension `Σ nᵢ²`.
    pub fn total_dimension(&self) -> usize {
        self.block_dims.iter().map(|n| n * n).sum()
    }

    pub fn is_commutative(&self) -> bool {
        self.block_dims.iter().all(|&n| n == 1)
    }

    /// Smallest block size; indices below it address every block.
    pub fn min_dim(&self) -> usize {
        *self.block_dims.iter().min().expect("nonempty shape")
    }
}

impl TryFrom<Vec<usize>> for AlgebraShape {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        AlgebraShape::new(dims)
    }
}

impl From<AlgebraShape> for Vec<usize> {
    fn from(shape: AlgebraShape) -> Self {
        shape.block_dims
    }
}

impl fmt::Display for AlgebraShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.block_dims.iter().map(|n| n.to_string()).collect();
        write!(f, "[{}]", dims.join(","))
    }
}

/// An element of `⊕ Mₙᵢ(ℂ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    shape: AlgebraShape,
    blocks: Vec<CMat>,
}

impl Element {
    pub fn new(shape: AlgebraShape, blocks: Vec<CMat>) -> Result<Self> {
        if blocks.len() != shape.block_count() {
            return Err(Error::structural(format!(
                "expected {} blocks for shape {shape}, got {}",
                shape.block_count(),
                blocks.len()
            )));
        }
        for (b, (m, &n)) in blocks.iter().zip(shape.dims()).enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::structural(format!(
                    "block {b} is {}x{}, shape {shape} requires {n}x{n}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::structural(format!(
                    "block {b} has a non-finite entry"
                )));
            }
        }
        Ok(Element { shape, blocks })
    }

    /// Builds blocks with `f(block, n)`; the closure must return `n×n` matrices.
    pub fn from_fn(shape: &AlgebraShape, mut f: impl FnMut(usize, usize) -> CMat) -> Self {
        let blocks = shape
            .dims()
            .iter()
            .enumerate()
            .map(|(b, &n)| {
                let m = f(b, n);
                assert_eq!(
                    (m.nrows(), m.ncols()),
                    (n, n),
                    "block {b} has the wrong size"
                );
                m
            })
            .collect();
        Element {
            shape: shape.clone(),
            blocks,
        }
    }

    pub fn zero(shape: &AlgebraShape) -> Self {
        Self::from_fn(shape, |_, n| CMat::zeros(n, n))
    }

    pub fn identity(shape: &AlgebraShape) -> Self {
        Self::from_fn(shape, |_, n| CMat::identity(n, n))
    }

    pub fn scalar(shape: &AlgebraShape, z: C64) -> Self {
        Self::from_fn(shape, |_, n| CMat::identity(n, n) * z)
    }

    /// Central element `⊕ γ_b · 1_{n_b}`, i.e. `γ ∈ ℂᵏ` embedded diagonally.
    pub fn central(shape: &AlgebraShape, values: &[C64]) -> Result<Self> {
        if values.len() != shape.block_count() {
            return Err(Error::structural(format!(
                "need {} central values, got {}",
                shape.block_count(),
                values.len()
            )));
        }
        Ok(Self::from_fn(shape, |b, n| {
            CMat::identity(n, n) * values[b]
        }))
    }

    /// The central projection onto block `b`.
    pub fn block_unit(shape: &AlgebraShape, block: usize) -> Self {
        Self::from_fn(shape, |b, n| {
            if b == block {
                CMat::identity(n, n)
            } else {
                CMat::zeros(n, n)
            }
        })
    }

    /// `m` placed in block `block`, zero elsewhere.
    pub fn embed_block(shape: &AlgebraShape, block: usize, m: CMat) -> Result<Self> {
        if block >= shape.block_count() {
            return Err(Error::structural(format!(
                "block index {block} out of range"
            )));
        }
        let mut blocks: Vec<CMat> = shape.dims().iter().map(|&n| CMat::zeros(n, n)).collect();
        blocks[block] = m;
        Element::new(shape.clone(), blocks)
    }

    /// Matrix unit `e_ij` in every block.
    pub fn matrix_unit(shape: &AlgebraShape, i: usize, j: usize) -> Result<Self> {
        let n = shape.min_dim();
        if i >= n || j >= n {
            return Err(Error::domain(format!(
                "matrix unit e_{i}{j} needs every block to have size > {}",
                i.max(j)
            )));
        }
        Ok(Self::from_fn(shape, |_, n| {
            let mut m = CMat::zeros(n, n);
            m[(i, j)] = ONE;
            m
        }))
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, b: usize) -> &CMat {
        &self.blocks[b]
    }

    pub fn into_blocks(self) -> Vec<CMat> {
        self.blocks
    }

    pub(crate) fn map_blocks(&self, f: impl FnMut(&CMat) -> CMat) -> Element {
        Element {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    fn zip_blocks(&self, other: &Element, mut f: impl FnMut(&CMat, &CMat) -> CMat) -> Element {
        assert_eq!(
            self.shape, other.shape,
            "shape mismatch: {} vs {}",
            self.shape, other.shape
        );
        Element {
            shape: self.shape.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub(crate) fn check_same_shape(&self, other: &Element) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::structural(format!(
                "shape mismatch: {} vs {}",
                self.shape, other.shape
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.check_same_shape(other)?;
        Ok(self * other)
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.check_same_shape(other)?;
        Ok(self + other)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.check_same_shape(other)?;
        Ok(self - other)
    }

    pub fn scale(&self, z: C64) -> Element {
        self.map_blocks(|m| m * z)
    }

    pub fn scale_real(&self, x: f64) -> Element {
        self.scale(C64::new(x, 0.0))
    }

    pub fn adjoint(&self) -> Element {
        self.map_blocks(|m| m.adjoint())
    }

    /// Entrywise complex conjugate (not an algebra operation on its own).
    pub fn conjugate_entries(&self) -> Element {
        self.map_blocks(|m| m.map(|z| z.conj()))
    }

    pub fn transpose(&self) -> Element {
        self.map_blocks(|m| m.transpose())
    }

    /// Multiplication by a central element `γ ∈ ℂᵏ`.
    pub fn scale_blocks(&self, values: &[C64]) -> Element {
        assert_eq!(values.len(), self.shape.block_count());
        Element {
            shape: self.shape.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(values)
                .map(|(m, &z)| m * z)
                .collect(),
        }
    }

    /// `(a + a*)/2`.
    pub fn real_part(&self) -> Element {
        (self + &self.adjoint()).scale_real(0.5)
    }

    /// `(a − a*)/2i`.
    pub fn imag_part(&self) -> Element {
        (self - &self.adjoint()).scale(C64::new(0.0, -0.5))
    }

    /// Operator norm: the largest singular value over all blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(spectral_norm).fold(0.0, f64::max)
    }

    /// `‖self − other‖`.
    pub fn dist(&self, other: &Element) -> f64 {
        (self - other).norm()
    }

    /// Sum of squared moduli of all entries, square-rooted.
    pub fn frobenius_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|m| m.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_selfadjoint(&self, tol: &ToleranceConfig) -> bool {
        self.dist(&self.adjoint()) <= tol.eq_tol
    }

    pub fn is_projection(&self, tol: &ToleranceConfig) -> bool {
        self.is_selfadjoint(tol) && self.dist(&(self * self)) <= tol.eq_tol
    }

    pub fn is_unitary(&self, tol: &ToleranceConfig) -> bool {
        let one = Element::identity(&self.shape);
        let adj = self.adjoint();
        (self * &adj).dist(&one) <= tol.eq_tol && (&adj * self).dist(&one) <= tol.eq_tol
    }

    /// Self-adjoint unitary.
    pub fn is_symmetry(&self, tol: &ToleranceConfig) -> bool {
        self.is_selfadjoint(tol) && self.is_unitary(tol)
    }

    pub fn is_normal(&self, tol: &ToleranceConfig) -> bool {
        let adj = self.adjoint();
        (self * &adj).dist(&(&adj * self)) <= tol.eq_tol
    }

    pub fn block_det(&self) -> Vec<C64> {
        self.blocks
            .iter()
            .map(|m| m.clone().determinant())
            .collect()
    }

    pub fn block_trace(&self) -> Vec<C64> {
        self.blocks.iter().map(|m| m.trace()).collect()
    }

    /// `(p + p*)/2`, used to suppress drift after constructing projections.
    pub(crate) fn hermitize(&self) -> Element {
        self.map_blocks(|m| (m + m.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn commutator_norm(&self, other: &Element) -> f64 {
        (self * other).dist(&(other * self))
    }
}

pub(crate) fn spectral_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

impl<'a> Mul<&'a Element> for &'a Element {
    type Output = Element;

    /// Blockwise product. Panics on shape mismatch; use [`Element::mul`] for a checked version.
    fn mul(self, rhs: &'a Element) -> Element {
        self.zip_blocks(rhs, |a, b| a * b)
    }
}

impl<'a> Add<&'a Element> for &'a Element {
    type Output = Element;

    fn add(self, rhs: &'a Element) -> Element {
        self.zip_blocks(rhs, |a, b| a + b)
    }
}

impl<'a> Sub<&'a Element> for &'a Element {
    type Output = Element;

    fn sub(self, rhs: &'a Element) -> Element {
        self.zip_blocks(rhs, |a, b| a - b)
    }
}

impl Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        self.map_blocks(|m| -m)
    }
}

/// Product of a sequence of elements, left to right. Empty products are the identity.
pub fn product<'a>(shape: &AlgebraShape, items: impl IntoIterator<Item = &'a Element>) -> Element {
    items
        .into_iter()
        .fold(Element::identity(shape), |acc, x| &acc * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(rows: [[C64; 2]; 2]) -> CMat {
        CMat::from_fn(2, 2, |i, j| rows[i][j])
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn shape_rejects_empty_and_zero_blocks() {
        assert!(AlgebraShape::new(vec![]).is_err());
        assert!(AlgebraShape::new(vec![2, 0]).is_err());
        assert_eq!(
            AlgebraShape::new(vec![2, 3, 1]).unwrap().total_dimension(),
            14
        );
    }

    #[test]
    fn element_rejects_mismatched_blocks() {
        let shape = AlgebraShape::new(vec![2]).unwrap();
        assert!(matches!(
            Element::new(shape.clone(), vec![CMat::zeros(3, 3)]),
            Err(Error::Structural(_))
        ));
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = c(f64::NAN, 0.0);
        assert!(Element::new(shape, vec![m]).is_err());
    }

    #[test]
    fn checked_ops_report_shape_mismatch() {
        let a = Element::identity(&AlgebraShape::new(vec![2]).unwrap());
        let b = Element::identity(&AlgebraShape::new(vec![3]).unwrap());
        assert!(matches!(a.mul(&b), Err(Error::Structural(_))));
        assert!(a.add(&b).is_err());
        assert!(a.sub(&b).is_err());
    }

    #[test]
    fn unit_law_and_involution() {
        let shape = AlgebraShape::new(vec![2, 1]).unwrap();
        let mut s = SeededSampler::new(3);
        let a = s.random_element(&shape);
        assert_eq!(a.adjoint().adjoint(), a);
        assert!(Element::identity(&shape).mul(&a).unwrap().dist(&a) < 1e-15);
    }

    #[test]
    fn predicates_on_small_examples() {
        let tol = ToleranceConfig::default();
        let shape = AlgebraShape::new(vec![2]).unwrap();
        assert!(Element::zero(&shape).is_projection(&tol));
        let p = Element::new(shape.clone(), vec![m2([[ONE, ZERO], [ZERO, ZERO]])]).unwrap();
        assert!(p.is_projection(&tol));
        let u = Element::new(shape.clone(), vec![m2([[I, ZERO], [ZERO, -I]])]).unwrap();
        assert!(u.is_unitary(&tol));
        assert!(!u.is_symmetry(&tol));
        assert!(!u.is_projection(&tol));
    }

    #[test]
    fn determinants_and_traces() {
        let tol = 1e-14;
        let s3 = AlgebraShape::new(vec![3]).unwrap();
        let one = Element::identity(&s3);
        assert!((one.block_det()[0] - ONE).norm() < tol);
        assert!((one.block_trace()[0] - c(3.0, 0.0)).norm() < tol);

        let s2 = AlgebraShape::new(vec![2]).unwrap();
        let swap = Element::new(s2.clone(), vec![m2([[ZERO, ONE], [ONE, ZERO]])]).unwrap();
        assert!((swap.block_det()[0] + ONE).norm() < tol);

        let zeta = C64::from_polar(1.0, 0.7);
        let d = Element::new(s2, vec![m2([[zeta, ZERO], [ZERO, zeta.conj()]])]).unwrap();
        assert!((d.block_det()[0] - ONE).norm() < tol);
    }

    #[test]
    fn norm_is_max_block_spectral_norm() {
        let shape = AlgebraShape::new(vec![1, 2]).unwrap();
        let a = Element::central(&shape, &[c(3.0, 0.0), c(0.0, -5.0)]).unwrap();
        assert!((a.norm() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn real_and_imaginary_parts_recombine() {
        let shape = AlgebraShape::new(vec![3]).unwrap();
        let mut s = SeededSampler::new(8);
        let a = s.random_element(&shape);
        let back = &a.real_part() + &a.imag_part().scale(I);
        assert!(back.dist(&a) < 1e-13);
    }
}
