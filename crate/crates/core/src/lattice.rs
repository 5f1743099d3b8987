//! The projection lattice `Proj(A)` as subspace arithmetic.
//!
//! Joins are computed by orthonormalizing the concatenated range bases; meets
//! come from joins by De Morgan. The order is `p ≤ q ⇔ pq = p`.

use serde::{Deserialize, Serialize};

use crate::algebra::calculus::{hermitian_eigen, orthonormal_range};
use crate::algebra::{AlgebraShape, CMat, Element, ToleranceConfig, C64, ONE};
use crate::error::{Error, Result};

pub(crate) fn require_projection(p: &Element, tol: &ToleranceConfig, what: &str) -> Result<()> {
    if !p.is_projection(tol) {
        return Err(Error::domain(format!("{what} is not a projection")));
    }
    Ok(())
}

/// Orthonormal basis (as columns) of the range of a projection block.
pub(crate) fn range_basis(p: &CMat) -> CMat {
    let (values, vectors) = hermitian_eigen(p);
    let cols: Vec<usize> = (0..values.len()).filter(|&k| values[k] > 0.5).collect();
    CMat::from_fn(p.nrows(), cols.len(), |i, j| vectors[(i, cols[j])])
}

/// Rank of each block of a projection.
pub fn ranks(p: &Element) -> Vec<usize> {
    p.blocks().iter().map(|m| range_basis(m).ncols()).collect()
}

/// `1 − p`.
pub fn ortho(p: &Element, tol: &ToleranceConfig) -> Result<Element> {
    require_projection(p, tol, "ortho argument")?;
    Ok(&Element::identity(p.shape()) - p)
}

/// `p ≤ q` iff `‖pq − p‖ ≤ verify_tol`.
pub fn leq(p: &Element, q: &Element, tol: &ToleranceConfig) -> Result<bool> {
    p.check_same_shape(q)?;
    require_projection(p, tol, "left argument")?;
    require_projection(q, tol, "right argument")?;
    Ok((p * q).dist(p) <= tol.verify_tol)
}

fn join_unchecked(p: &Element, q: &Element, tol: &ToleranceConfig) -> Element {
    let blocks = p
        .blocks()
        .iter()
        .zip(q.blocks())
        .map(|(a, b)| {
            let (ba, bb) = (range_basis(a), range_basis(b));
            let n = a.nrows();
            let stacked = CMat::from_fn(n, ba.ncols() + bb.ncols(), |i, j| {
                if j < ba.ncols() {
                    ba[(i, j)]
                } else {
                    bb[(i, j - ba.ncols())]
                }
            });
            let basis = orthonormal_range(&stacked, tol.rank_tol);
            &basis * basis.adjoint()
        })
        .collect();
    Element::new(p.shape().clone(), blocks)
        .expect("join preserves the block layout")
        .hermitize()
}

/// Projection onto `range(p) + range(q)`.
pub fn join(p: &Element, q: &Element, tol: &ToleranceConfig) -> Result<Element> {
    p.check_same_shape(q)?;
    require_projection(p, tol, "left argument")?;
    require_projection(q, tol, "right argument")?;
    Ok(join_unchecked(p, q, tol))
}

/// `(p⊥ ∨ q⊥)⊥`.
pub fn meet(p: &Element, q: &Element, tol: &ToleranceConfig) -> Result<Element> {
    let one = Element::identity(p.shape());
    let j = join(&ortho(p, tol)?, &ortho(q, tol)?, tol)?;
    Ok(&one - &j)
}

/// Iterated join; the empty supremum is 0.
pub fn sup(shape: &AlgebraShape, items: &[Element], tol: &ToleranceConfig) -> Result<Element> {
    items
        .iter()
        .try_fold(Element::zero(shape), |acc, p| join(&acc, p, tol))
}

/// Supremum of pairwise orthogonal projections, which is their sum.
pub fn orthogonal_sup(
    shape: &AlgebraShape,
    items: &[Element],
    tol: &ToleranceConfig,
) -> Result<Element> {
    for (k, p) in items.iter().enumerate() {
        if p.shape() != shape {
            return Err(Error::structural(format!(
                "item {k} has shape {}",
                p.shape()
            )));
        }
        require_projection(p, tol, &format!("item {k}"))?;
    }
    for a in 0..items.len() {
        for b in a + 1..items.len() {
            let overlap = (&items[a] * &items[b]).norm();
            if overlap > tol.verify_tol {
                return Err(Error::domain(format!(
                    "items {a} and {b} are not orthogonal (‖pq‖ = {overlap:e})"
                )));
            }
        }
    }
    let sum = items
        .iter()
        .fold(Element::zero(shape), |acc, p| &acc + p)
        .hermitize();
    if !sum.is_projection(tol) {
        return Err(Error::Numeric("orthogonal sum is not idempotent".into()));
    }
    Ok(sum)
}

/// `‖(p ∨ (p⊥ ∧ q)) − q‖` for `p ≤ q`.
pub fn orthomodular_residual(p: &Element, q: &Element, tol: &ToleranceConfig) -> Result<f64> {
    if !leq(p, q, tol)? {
        return Err(Error::domain("orthomodular_residual needs p ≤ q"));
    }
    let inner = meet(&ortho(p, tol)?, q, tol)?;
    Ok(join(p, &inner, tol)?.dist(q))
}

/// `(p ∨ q) ∧ (p ∨ q⊥) ∧ (p⊥ ∨ q) ∧ (p⊥ ∨ q⊥)`.
pub fn commutator(p: &Element, q: &Element, tol: &ToleranceConfig) -> Result<Element> {
    p.check_same_shape(q)?;
    let (pp, qp) = (ortho(p, tol)?, ortho(q, tol)?);
    let a = join(p, q, tol)?;
    let b = join(p, &qp, tol)?;
    let c = join(&pp, q, tol)?;
    let d = join(&pp, &qp, tol)?;
    meet(&meet(&a, &b, tol)?, &meet(&c, &d, tol)?, tol)
}

/// Pairwise orthogonal `p′, q′, r` with `p = p′ ∨ r`, `q = q′ ∨ r`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommeasWitness {
    pub p_prime: Element,
    pub q_prime: Element,
    pub r: Element,
    pub residual: f64,
}

/// All five commeasurability criteria for a pair of projections.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommeasReport {
    /// (i) `pq = qp`.
    pub commute: bool,
    pub commute_residual: f64,
    /// (ii) only attempted when (i) holds.
    pub witness: Option<CommeasWitness>,
    /// (iii) `‖(p ∧ (p ∧ q)⊥)·q‖`.
    pub residual_iii: f64,
    /// (iv) `‖(q ∧ (p ∧ q)⊥)·p‖`.
    pub residual_iv: f64,
    /// (v) norm of the commutator projection.
    pub commutator_norm: f64,
    /// Whether (i), (iii), (iv) and (v) give the same answer.
    pub criteria_agree: bool,
    pub verdict: bool,
}

pub fn commeasurable(p: &Element, q: &Element, tol: &ToleranceConfig) -> Result<CommeasReport> {
    p.check_same_shape(q)?;
    require_projection(p, tol, "left argument")?;
    require_projection(q, tol, "right argument")?;
    let one = Element::identity(p.shape());

    let commute_residual = p.commutator_norm(q);
    let commute = commute_residual <= tol.verify_tol;

    let pq = meet(p, q, tol)?;
    let pq_perp = &one - &pq;
    let residual_iii = (&meet(p, &pq_perp, tol)? * q).norm();
    let residual_iv = (&meet(q, &pq_perp, tol)? * p).norm();
    let commutator_norm = commutator(p, q, tol)?.norm();

    let witness = if commute {
        let p_prime = (p - &pq).hermitize();
        let q_prime = (q - &pq).hermitize();
        let r = pq;
        let residual = [
            (&p_prime * &q_prime).norm(),
            (&p_prime * &r).norm(),
            (&q_prime * &r).norm(),
            join_unchecked(&p_prime, &r, tol).dist(p),
            join_unchecked(&q_prime, &r, tol).dist(q),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        Some(CommeasWitness {
            p_prime,
            q_prime,
            r,
            residual,
        })
    } else {
        None
    };

    let ok_ii = witness
        .as_ref()
        .is_some_and(|w| w.residual <= tol.verify_tol);
    let ok_iii = residual_iii <= tol.verify_tol;
    let ok_iv = residual_iv <= tol.verify_tol;
    let ok_v = commutator_norm <= tol.verify_tol;
    let criteria_agree = commute == ok_iii && ok_iii == ok_iv && ok_iv == ok_v;
    Ok(CommeasReport {
        commute,
        commute_residual,
        witness,
        residual_iii,
        residual_iv,
        commutator_norm,
        criteria_agree,
        verdict: commute && ok_ii && ok_iii && ok_iv && ok_v,
    })
}

/// The `n×n` vector projection `p_ij(α)`: the projection onto the span of the
/// vector with `1` in slot `i` and `ᾱ` in slot `j`.
pub fn vector_projection_block(n: usize, i: usize, j: usize, alpha: C64) -> Result<CMat> {
    if i == j || i >= n || j >= n {
        return Err(Error::domain(format!(
            "vector projection needs distinct indices below {n}, got ({i},{j})"
        )));
    }
    let norm = 1.0 + alpha.norm_sqr();
    let mut m = CMat::zeros(n, n);
    m[(i, i)] = C64::new(1.0 / norm, 0.0);
    m[(i, j)] = alpha / norm;
    m[(j, i)] = alpha.conj() / norm;
    m[(j, j)] = C64::new(alpha.norm_sqr() / norm, 0.0);
    Ok(m)
}

/// `p_ij(α)` with one coefficient per block (`α ∈ ℂᵏ`).
pub fn vector_projection(
    shape: &AlgebraShape,
    i: usize,
    j: usize,
    alphas: &[C64],
) -> Result<Element> {
    if alphas.len() != shape.block_count() {
        return Err(Error::structural(format!(
            "need {} coefficients, got {}",
            shape.block_count(),
            alphas.len()
        )));
    }
    let blocks = shape
        .dims()
        .iter()
        .zip(alphas)
        .map(|(&n, &a)| vector_projection_block(n, i, j, a))
        .collect::<Result<Vec<_>>>()?;
    Element::new(shape.clone(), blocks)
}

/// Splits a projection into orthogonal rank-one projections, one per
/// orthonormal range vector. Each vector is scaled so its first nonzero entry is 1.
pub fn decompose_into_vector_projections(
    p: &Element,
    tol: &ToleranceConfig,
) -> Result<Vec<Element>> {
    require_projection(p, tol, "argument")?;
    let mut out = Vec::new();
    for (b, m) in p.blocks().iter().enumerate() {
        let basis = range_basis(m);
        for k in 0..basis.ncols() {
            let v = canonical_vector(basis.column(k).iter().copied().collect(), tol);
            let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            let n = m.nrows();
            let block = CMat::from_fn(n, n, |i, j| v[i] * v[j].conj() / norm2);
            out.push(Element::embed_block(p.shape(), b, block)?.hermitize());
        }
    }
    Ok(out)
}

fn canonical_vector(v: Vec<C64>, tol: &ToleranceConfig) -> Vec<C64> {
    let lead = v
        .iter()
        .copied()
        .find(|z| z.norm() > tol.eq_tol)
        .unwrap_or(ONE);
    v.into_iter().map(|z| z / lead).collect()
}

/// Whether conjugation by `1 − 2p` swaps `e_ii` and `e_jj` and fixes every other `e_kk`.
pub fn is_ij_swapper(p: &Element, i: usize, j: usize, tol: &ToleranceConfig) -> Result<bool> {
    require_projection(p, tol, "argument")?;
    let n = p.shape().min_dim();
    if i == j || i >= n || j >= n {
        return Err(Error::domain(format!(
            "invalid index pair ({i},{j}) for blocks of size ≥ {n}"
        )));
    }
    let shape = p.shape();
    let s = &Element::identity(shape) - &p.scale_real(2.0);
    let conj = |k: usize| -> Result<Element> {
        let e = Element::matrix_unit(shape, k, k)?;
        Ok(&(&s * &e) * &s)
    };
    if conj(i)?.dist(&Element::matrix_unit(shape, j, j)?) > tol.verify_tol {
        return Ok(false);
    }
    for k in (0..n).filter(|&k| k != i && k != j) {
        if conj(k)?.dist(&Element::matrix_unit(shape, k, k)?) > tol.verify_tol {
            return Ok(false);
        }
    }
    // blocks larger than the common size have extra diagonal units
    for (b, &nb) in shape.dims().iter().enumerate() {
        for k in n..nb {
            let mut e = CMat::zeros(nb, nb);
            e[(k, k)] = ONE;
            let sb = s.block(b);
            if (sb * &e * sb - &e).norm() > tol.verify_tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
