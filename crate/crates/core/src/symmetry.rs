//! Symmetries `1 − 2p`, the group they generate, and explicit factorizations
//! of unitaries into products of symmetries.

use serde::{Deserialize, Serialize};

use crate::algebra::calculus::nearest_unitary;
use crate::algebra::{product, AlgebraShape, CMat, Element, ToleranceConfig, C64, I, ONE, ZERO};
use crate::error::{Error, Result};
use crate::lattice::require_projection;

/// `1 − 2p`.
pub fn symmetry_of(p: &Element, tol: &ToleranceConfig) -> Result<Element> {
    require_projection(p, tol, "symmetry_of argument")?;
    Ok(&Element::identity(p.shape()) - &p.scale_real(2.0))
}

/// `(1 − s)/2`, inverse of [`symmetry_of`].
pub fn projection_of_symmetry(s: &Element, tol: &ToleranceConfig) -> Result<Element> {
    if !s.is_symmetry(tol) {
        return Err(Error::domain("argument is not a self-adjoint unitary"));
    }
    Ok((&Element::identity(s.shape()) - s).scale_real(0.5))
}

/// Membership in the group generated by symmetries: every block determinant squares to 1.
pub fn sym_member(u: &Element, tol: &ToleranceConfig) -> Result<bool> {
    if !u.is_unitary(tol) {
        return Err(Error::domain("sym_member argument is not unitary"));
    }
    Ok(u.block_det()
        .iter()
        .all(|d| (d * d - ONE).norm() <= tol.verify_tol))
}

/// Parameter of the projection family `p_φ`; `Infinity` stands for the limit `diag(0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phi {
    Finite(f64),
    Infinity,
}

impl Phi {
    /// `+∞` maps to [`Phi::Infinity`]; negative or NaN values are rejected.
    pub fn new(value: f64) -> Result<Phi> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::domain(format!("φ must be nonnegative, got {value}")));
        }
        Ok(if value.is_infinite() {
            Phi::Infinity
        } else {
            Phi::Finite(value)
        })
    }

    /// The `φ` whose rotation `v_φ` has trace `2α`, i.e. `√((1−α)/(1+α))`.
    fn for_cosine(alpha: f64) -> Phi {
        if alpha <= -1.0 {
            Phi::Infinity
        } else {
            Phi::Finite(((1.0 - alpha) / (1.0 + alpha)).max(0.0).sqrt())
        }
    }
}

fn shape2() -> AlgebraShape {
    AlgebraShape::new(vec![2]).expect("nonempty shape")
}

fn real2(a: f64, b: f64, c: f64, d: f64) -> CMat {
    CMat::from_row_slice(2, 2, &[a.into(), b.into(), c.into(), d.into()])
}

/// `(1+φ²)⁻¹ [[1, φ], [φ, φ²]]` in terms of the cosine `α = (1−φ²)/(1+φ²)`.
fn p_phi_block(phi: Phi) -> Result<CMat> {
    let alpha = match phi {
        Phi::Infinity => -1.0,
        Phi::Finite(x) if x.is_nan() || x < 0.0 => {
            return Err(Error::domain(format!("φ must be nonnegative, got {x}")))
        }
        Phi::Finite(x) if x.is_infinite() => -1.0,
        Phi::Finite(x) => (1.0 - x * x) / (1.0 + x * x),
    };
    Ok(p_cos_block(alpha))
}

fn p_cos_block(alpha: f64) -> CMat {
    let s = (1.0 - alpha * alpha).max(0.0).sqrt();
    real2((1.0 + alpha) / 2.0, s / 2.0, s / 2.0, (1.0 - alpha) / 2.0)
}

fn sym_block(p: &CMat) -> CMat {
    CMat::identity(p.nrows(), p.ncols()) - p * C64::new(2.0, 0.0)
}

/// The projection `p_φ` in `M₂(ℂ)`.
pub fn p_phi(phi: Phi) -> Result<Element> {
    Element::new(shape2(), vec![p_phi_block(phi)?])
}

/// The rotation `v_φ = (1 − 2p_φ)(1 − 2p₀)`.
pub fn v_phi(phi: Phi) -> Result<Element> {
    let v = sym_block(&p_phi_block(phi)?) * sym_block(&p_phi_block(Phi::Finite(0.0))?);
    Element::new(shape2(), vec![v])
}

/// Block-level form of [`factor_two_symmetries_2x2`].
fn two_symmetries_block(zeta: C64) -> (CMat, CMat) {
    let alpha = zeta.re.clamp(-1.0, 1.0);
    let p = p_cos_block(alpha);
    let q = p_cos_block(1.0);
    // Columns are the eigenvectors (1, ∓i)/√2 of a rotation by angle θ ∈ [0, π].
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (first, second) = if zeta.im >= 0.0 { (-I, I) } else { (I, -I) };
    let w = CMat::from_row_slice(
        2,
        2,
        &[C64::new(h, 0.0), C64::new(h, 0.0), first * h, second * h],
    );
    let wa = w.adjoint();
    (&wa * p * &w, &wa * q * &w)
}

/// Projections `p, q` with `(1 − 2p)(1 − 2q) = diag(ζ, ζ̄)`.
pub fn factor_two_symmetries_2x2(zeta: C64, tol: &ToleranceConfig) -> Result<(Element, Element)> {
    if (zeta.norm() - 1.0).abs() > tol.eq_tol {
        return Err(Error::domain(format!("|ζ| = {} is not 1", zeta.norm())));
    }
    let (p, q) = two_symmetries_block(zeta);
    let s = shape2();
    Ok((
        Element::new(s.clone(), vec![p])?.hermitize(),
        Element::new(s, vec![q])?.hermitize(),
    ))
}

/// The cosine parameter of the first projection produced for `ζ`.
pub fn phi_for(zeta: C64) -> Phi {
    Phi::for_cosine(zeta.re.clamp(-1.0, 1.0))
}

/// A unitary written as `∏ₖ (1 − 2 factors[k])`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryFactorization {
    pub input: Element,
    pub factors: Vec<Element>,
    pub residual: f64,
}

impl SymmetryFactorization {
    fn new(input: Element, factors: Vec<Element>) -> Self {
        let mut out = SymmetryFactorization {
            input,
            factors,
            residual: 0.0,
        };
        out.residual = out.product().dist(&out.input);
        out
    }

    pub fn symmetries(&self) -> Vec<Element> {
        let one = Element::identity(self.input.shape());
        self.factors
            .iter()
            .map(|p| &one - &p.scale_real(2.0))
            .collect()
    }

    pub fn product(&self) -> Element {
        product(self.input.shape(), &self.symmetries())
    }
}

fn polar_corrected(u: &Element, tol: &ToleranceConfig) -> Result<Element> {
    let one = Element::identity(u.shape());
    let drift = (u * &u.adjoint())
        .dist(&one)
        .max((&u.adjoint() * u).dist(&one));
    if drift > tol.verify_tol {
        return Err(Error::domain(format!(
            "input is not unitary (‖uu* − 1‖ = {drift:.3e})"
        )));
    }
    Ok(u.map_blocks(nearest_unitary))
}

/// Factor list for one block of determinant 1, each factor an `n×n` projection.
fn det1_block_factors(u: &CMat, tol: &ToleranceConfig) -> Result<Vec<CMat>> {
    let n = u.nrows();
    if n < 2 {
        return Ok(Vec::new());
    }
    let (q, t) = u.clone().schur().unpack();
    let off_diagonal = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .map(|(i, j)| t[(i, j)].norm())
        .fold(0.0, f64::max);
    if off_diagonal > tol.verify_tol.sqrt() {
        return Err(Error::Numeric(format!(
            "Schur form of a unitary is not diagonal (off-diagonal {off_diagonal:.3e})"
        )));
    }
    let qa = q.adjoint();
    let mut factors = Vec::new();
    let mut running = ONE;
    for i in 0..n - 1 {
        let z = t[(i, i)];
        running *= z / z.norm();
        running /= running.norm();
        if (running - ONE).norm() <= tol.rank_tol {
            continue;
        }
        let (a, b) = two_symmetries_block(running);
        for small in [a, b] {
            let mut big = CMat::zeros(n, n);
            big.view_mut((i, i), (2, 2)).copy_from(&small);
            let conj = &q * big * &qa;
            factors.push((&conj + conj.adjoint()) * C64::new(0.5, 0.0));
        }
    }
    Ok(factors)
}

/// Stack per-block factor lists into elements, padding short lists with zero.
fn assemble(shape: &AlgebraShape, per_block: Vec<Vec<CMat>>) -> Vec<Element> {
    let count = per_block.iter().map(Vec::len).max().unwrap_or(0);
    (0..count)
        .map(|k| {
            Element::from_fn(shape, |b, n| {
                per_block[b]
                    .get(k)
                    .cloned()
                    .unwrap_or_else(|| CMat::zeros(n, n))
            })
        })
        .collect()
}

fn finish(
    input: &Element,
    factors: Vec<Element>,
    tol: &ToleranceConfig,
) -> Result<SymmetryFactorization> {
    let out = SymmetryFactorization::new(input.clone(), factors);
    if out.residual > tol.verify_tol {
        return Err(Error::Numeric(format!(
            "factorization residual {:.3e} exceeds verify_tol",
            out.residual
        )));
    }
    Ok(out)
}

/// Factor a unitary with every block determinant 1 into at most `2(n−1)`
/// symmetries per block of size `n`.
pub fn factor_det1(u: &Element, tol: &ToleranceConfig) -> Result<SymmetryFactorization> {
    let v = polar_corrected(u, tol)?;
    if let Some((b, d)) = u
        .block_det()
        .into_iter()
        .enumerate()
        .find(|(_, d)| (d - ONE).norm() > tol.verify_tol)
    {
        return Err(Error::domain(format!(
            "block {b} has determinant {d}, not 1"
        )));
    }
    let per_block = v
        .blocks()
        .iter()
        .map(|m| det1_block_factors(m, tol))
        .collect::<Result<Vec<_>>>()?;
    finish(u, assemble(u.shape(), per_block), tol)
}

/// Factor a unitary whose block determinants square to 1; blocks with
/// determinant −1 take one extra factor `e₁₁` at the end.
pub fn factor_det_pm1(u: &Element, tol: &ToleranceConfig) -> Result<SymmetryFactorization> {
    let v = polar_corrected(u, tol)?;
    let dets = u.block_det();
    if let Some((b, d)) = dets
        .iter()
        .enumerate()
        .find(|(_, d)| (*d * *d - ONE).norm() > tol.verify_tol)
    {
        return Err(Error::domain(format!(
            "block {b} has determinant {d}, whose square is not 1"
        )));
    }
    let flip: Vec<bool> = dets.iter().map(|d| d.re < 0.0).collect();
    if !flip.iter().any(|&f| f) {
        return factor_det1(u, tol);
    }
    let r = Element::from_fn(u.shape(), |b, n| {
        CMat::from_fn(n, n, |i, j| {
            if flip[b] && i == 0 && j == 0 {
                ONE
            } else {
                ZERO
            }
        })
    });
    let one = Element::identity(u.shape());
    let w = &v * &(&one - &r.scale_real(2.0));
    let per_block = w
        .blocks()
        .iter()
        .map(|m| det1_block_factors(m, tol))
        .collect::<Result<Vec<_>>>()?;
    let mut factors = assemble(u.shape(), per_block);
    factors.push(r);
    finish(u, factors, tol)
}

/// The action `p ↦ upu*` of the unitary group on projections.
pub fn conjugate(u: &Element, p: &Element, tol: &ToleranceConfig) -> Result<Element> {
    u.check_same_shape(p)?;
    if !u.is_unitary(tol) {
        return Err(Error::domain("conjugating element is not unitary"));
    }
    require_projection(p, tol, "conjugated element")?;
    Ok((&(u * p) * &u.adjoint()).hermitize())
}

/// `s_p s_q` in a commutative algebra, checked against `s_{p Δ q}`.
pub fn boolean_symmetry_product(
    p: &Element,
    q: &Element,
    tol: &ToleranceConfig,
) -> Result<Element> {
    if !p.shape().is_commutative() {
        return Err(Error::structural(format!(
            "shape {} is not commutative",
            p.shape()
        )));
    }
    p.check_same_shape(q)?;
    let s = &symmetry_of(p, tol)? * &symmetry_of(q, tol)?;
    let delta = &(p + q) - &(p * q).scale_real(2.0);
    let expected = symmetry_of(&delta, tol)?;
    let gap = s.dist(&expected);
    if gap > tol.eq_tol {
        return Err(Error::Numeric(format!(
            "s_p s_q differs from s_(p Δ q) by {gap:.3e}"
        )));
    }
    Ok(s)
}
