//! Square roots, support projections, adjugates and the four-unitary decomposition.

use nalgebra::{DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{AlgebraShape, CMat, Element, ToleranceConfig, C64, I, ONE, ZERO};
use crate::error::{Error, Result};

/// Eigen-decomposition of a Hermitian block, eigenvalues ascending.
pub(crate) fn hermitian_eigen(m: &CMat) -> (DVector<f64>, CMat) {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let vectors = CMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// `V · diag(f(λ)) · V*` for a Hermitian block.
pub(crate) fn hermitian_apply(
    values: &DVector<f64>,
    vectors: &CMat,
    f: impl Fn(f64) -> f64,
) -> CMat {
    let n = values.len();
    let d = CMat::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(f(values[i]), 0.0)
        } else {
            ZERO
        }
    });
    vectors * d * vectors.adjoint()
}

/// Moore–Penrose inverse of a block with singular values below `rank_tol` treated as zero.
pub(crate) fn pseudo_inverse(m: &CMat, rank_tol: f64) -> CMat {
    let n = m.nrows();
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V*");
    let k = svd.singular_values.len();
    let mut out = CMat::zeros(m.ncols(), n);
    for s in 0..k {
        let sigma = svd.singular_values[s];
        if sigma > rank_tol {
            let v = v_t.row(s).adjoint();
            let uc = u.column(s);
            out += (v * uc.adjoint()) * C64::new(1.0 / sigma, 0.0);
        }
    }
    out
}

/// Orthonormal basis of the column space, dropping singular values ≤ `rank_tol`.
pub(crate) fn orthonormal_range(m: &CMat, rank_tol: f64) -> CMat {
    let n = m.nrows();
    if m.ncols() == 0 {
        return CMat::zeros(n, 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > rank_tol)
        .collect();
    CMat::from_fn(n, keep.len(), |i, j| u[(i, keep[j])])
}

/// Nearest unitary in operator norm (the unitary factor of the polar decomposition).
pub(crate) fn nearest_unitary(m: &CMat) -> CMat {
    let svd = m.clone().svd(true, true);
    svd.u.expect("requested U") * svd.v_t.expect("requested V*")
}

impl Element {
    /// Blockwise adjugate of 2×2 blocks: `[[a,b],[c,d]] ↦ [[d,−b],[−c,a]]`.
    pub fn adjugate2(&self) -> Result<Element> {
        if let Some(b) = self.shape().dims().iter().position(|&n| n != 2) {
            return Err(Error::structural(format!(
                "adjugate2 needs 2x2 blocks, block {b} has size {}",
                self.shape().dim(b)
            )));
        }
        Ok(self.map_blocks(|m| {
            CMat::from_row_slice(2, 2, &[m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]])
        }))
    }

    /// The positive square root of a positive semidefinite element.
    ///
    /// Eigenvalues in `[−eq_tol, 0)` are clamped to zero; anything more negative
    /// is a domain error.
    pub fn positive_sqrt(&self, tol: &ToleranceConfig) -> Result<Element> {
        if !self.is_selfadjoint(tol) {
            return Err(Error::domain("positive_sqrt: element is not self-adjoint"));
        }
        let mut blocks = Vec::with_capacity(self.shape().block_count());
        for (b, m) in self.blocks().iter().enumerate() {
            let (values, vectors) = hermitian_eigen(m);
            if let Some(min) = values.iter().copied().reduce(f64::min) {
                if min < -tol.eq_tol {
                    return Err(Error::domain(format!(
                        "positive_sqrt: block {b} has eigenvalue {min:e} < 0"
                    )));
                }
            }
            blocks.push(hermitian_apply(&values, &vectors, |x| {
                if x <= tol.eq_tol {
                    0.0
                } else {
                    x.sqrt()
                }
            }));
        }
        Ok(Element::new(self.shape().clone(), blocks)?.hermitize())
    }

    /// The symmetry `u` of a commutative algebra with `b = u·√(b²)`:
    /// `−1` on atoms where `b ≤ 0`, `+1` elsewhere.
    pub fn sign_symmetry(&self, tol: &ToleranceConfig) -> Result<Element> {
        if !self.shape().is_commutative() {
            return Err(Error::structural(format!(
                "sign_symmetry needs a commutative shape, got {}",
                self.shape()
            )));
        }
        if !self.is_selfadjoint(tol) {
            return Err(Error::domain("sign_symmetry: element is not self-adjoint"));
        }
        let signs: Vec<C64> = self
            .blocks()
            .iter()
            .map(|m| if m[(0, 0)].re <= 0.0 { -ONE } else { ONE })
            .collect();
        Element::central(self.shape(), &signs)
    }

    /// Right annihilating projection: the projection onto `ker(a)` in each block.
    pub fn rann(&self, tol: &ToleranceConfig) -> Element {
        self.map_blocks(|m| {
            let n = m.nrows();
            let svd = m.clone().svd(false, true);
            let v_t = svd.v_t.expect("requested V*");
            let mut k = CMat::zeros(n, n);
            for s in 0..svd.singular_values.len() {
                if svd.singular_values[s] <= tol.rank_tol {
                    let v = v_t.row(s).adjoint();
                    k += &v * v.adjoint();
                }
            }
            k
        })
        .hermitize()
    }

    /// Right supporting projection `RP(a) = 1 − RAnn(a)`.
    pub fn rp(&self, tol: &ToleranceConfig) -> Element {
        &Element::identity(self.shape()) - &self.rann(tol)
    }

    /// Writes `a` as `scale·(¼u₁ + ¼u₂ + (i/4)u₃ + (i/4)u₄)` with unitary `uₖ`.
    pub fn four_unitaries(&self, tol: &ToleranceConfig) -> Result<FourUnitaries> {
        let re = self.real_part();
        let im = self.imag_part();
        let mut m = re.norm().max(im.norm());
        if m == 0.0 {
            m = 1.0;
        }
        let (u1, u2) = re.scale_real(1.0 / m).selfadjoint_unitary_pair(tol)?;
        let (u3, u4) = im.scale_real(1.0 / m).selfadjoint_unitary_pair(tol)?;
        Ok(FourUnitaries {
            scale: 2.0 * m,
            unitaries: [u1, u2, u3, u4],
        })
    }

    /// For self-adjoint `a` with `‖a‖ ≤ 1`: the commuting unitaries `a ± i√(1 − a²)`.
    pub fn selfadjoint_unitary_pair(&self, tol: &ToleranceConfig) -> Result<(Element, Element)> {
        if !self.is_selfadjoint(tol) {
            return Err(Error::domain("unitary pair needs a self-adjoint element"));
        }
        if self.norm() > 1.0 + tol.eq_tol {
            return Err(Error::domain(format!(
                "unitary pair needs norm ≤ 1, got {}",
                self.norm()
            )));
        }
        let one = Element::identity(self.shape());
        let defect = (&one - &(self * self)).positive_sqrt(tol)?.scale(I);
        Ok((self + &defect, self - &defect))
    }
}

/// Output of [`Element::four_unitaries`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FourUnitaries {
    pub scale: f64,
    pub unitaries: [Element; 4],
}

impl FourUnitaries {
    pub fn reconstruct(&self) -> Element {
        let shape: &AlgebraShape = self.unitaries[0].shape();
        let coeffs = [
            C64::new(0.25, 0.0),
            C64::new(0.25, 0.0),
            C64::new(0.0, 0.25),
            C64::new(0.0, 0.25),
        ];
        self.unitaries
            .iter()
            .zip(coeffs)
            .fold(Element::zero(shape), |acc, (u, c)| &acc + &u.scale(c))
            .scale_real(self.scale)
    }
}
