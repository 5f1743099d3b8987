//! Sampled morphism checks, the Jordan identities and the M₂ counterexample.

use serde::{Deserialize, Serialize};

use super::{c, evaluator_error, random_sym, MorphismCandidate, Scope};
use crate::algebra::{
    AlgebraShape, CMat, Element, SeededSampler, ToleranceConfig, C64, I, ONE, ZERO,
};
use crate::error::{Error, Result};
use crate::symmetry::sym_member;

/// `a ∘ b = ½(ab + ba)`.
pub fn jordan_product(a: &Element, b: &Element) -> Element {
    (&(a * b) + &(b * a)).scale_real(0.5)
}

/// The expansion of `s_p q s_p` in Jordan products, and how well it matches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JordanExpansion {
    /// `q − c(p∘q) + 4((p+q−1)²∘p)`.
    pub expansion: Element,
    /// `(1−2p) q (1−2p)`.
    pub conjugate: Element,
    pub residual: f64,
    /// `‖(p+q−1)²∘p − pqp‖`.
    pub chain_residual: f64,
}

/// `q − 4(p∘q) + 4((p+q−1)²∘p)` compared with `s_p q s_p`.
pub fn jordan_expand(p: &Element, q: &Element, tol: &ToleranceConfig) -> Result<JordanExpansion> {
    jordan_expand_with_coefficient(p, q, 4.0, tol)
}

/// As [`jordan_expand`] with coefficient `coef` on the `p∘q` term.
pub fn jordan_expand_with_coefficient(
    p: &Element,
    q: &Element,
    coef: f64,
    tol: &ToleranceConfig,
) -> Result<JordanExpansion> {
    p.check_same_shape(q)?;
    crate::lattice::require_projection(p, tol, "p")?;
    crate::lattice::require_projection(q, tol, "q")?;
    let one = Element::identity(p.shape());
    let r = &(p + q) - &one;
    let chain = jordan_product(&(&r * &r), p);
    let expansion = &(q - &jordan_product(p, q).scale_real(coef)) + &chain.scale_real(4.0);
    let s = &one - &p.scale_real(2.0);
    let conjugate = &(&s * q) * &s;
    Ok(JordanExpansion {
        residual: expansion.dist(&conjugate),
        chain_residual: chain.dist(&(&(p * q) * p)),
        expansion,
        conjugate,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DyeReport {
    pub samples: usize,
    /// Largest `‖f(s_p q s_p) − s_{f(p)} f(q) s_{f(p)}‖`.
    pub max_residual: f64,
}

/// Sampled Dye condition over random projection pairs.
pub fn dye_condition_check(
    f: &MorphismCandidate,
    samples: usize,
    sampler: &mut SeededSampler,
    tol: &ToleranceConfig,
) -> Result<DyeReport> {
    let dom = f.domain();
    let one_dom = Element::identity(dom);
    let one_cod = Element::identity(f.codomain());
    let mut max_residual: f64 = 0.0;
    for k in 0..samples {
        let p = sampler.random_projection_any_rank(dom);
        let q = sampler.random_projection_any_rank(dom);
        let s = &one_dom - &p.scale_real(2.0);
        let moved = (&(&s * &q) * &s).hermitize();
        let lhs = f.evaluate(&moved).map_err(|e| evaluator_error(k, e))?;
        let fp = f.evaluate(&p).map_err(|e| evaluator_error(k, e))?;
        let fq = f.evaluate(&q).map_err(|e| evaluator_error(k, e))?;
        let sf = &one_cod - &fp.scale_real(2.0);
        max_residual = max_residual.max(lhs.dist(&(&(&sf * &fq) * &sf)));
    }
    let _ = tol;
    Ok(DyeReport {
        samples,
        max_residual,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivarianceReport {
    pub samples: usize,
    /// Largest `‖1 − 2f(p) − g(1 − 2p)‖`.
    pub symmetry_compatibility: f64,
    /// Largest `‖g(u) f(p) g(u)* − f(upu*)‖`.
    pub action: f64,
    pub max_residual: f64,
}

/// Equivariance of a lattice map `f` and a group map `g` over sampled
/// projections `p` and elements `u ∈ Sym(A)`.
pub fn equivariance_check(
    f: &MorphismCandidate,
    g: &MorphismCandidate,
    samples: usize,
    sampler: &mut SeededSampler,
) -> Result<EquivarianceReport> {
    if f.domain() != g.domain() || f.codomain() != g.codomain() {
        return Err(Error::structural(
            "lattice and group maps have different shapes",
        ));
    }
    let dom = f.domain();
    let one_dom = Element::identity(dom);
    let one_cod = Element::identity(f.codomain());
    let (mut compat, mut action): (f64, f64) = (0.0, 0.0);
    for k in 0..samples {
        let p = sampler.random_projection_any_rank(dom);
        let u = random_sym(dom, sampler);
        let fp = f.evaluate(&p).map_err(|e| evaluator_error(k, e))?;
        let gs = g
            .evaluate(&(&one_dom - &p.scale_real(2.0)))
            .map_err(|e| evaluator_error(k, e))?;
        compat = compat.max((&one_cod - &fp.scale_real(2.0)).dist(&gs));
        let gu = g.evaluate(&u).map_err(|e| evaluator_error(k, e))?;
        let moved = (&(&u * &p) * &u.adjoint()).hermitize();
        let f_moved = f.evaluate(&moved).map_err(|e| evaluator_error(k, e))?;
        action = action.max((&(&gu * &fp) * &gu.adjoint()).dist(&f_moved));
    }
    Ok(EquivarianceReport {
        samples,
        symmetry_compatibility: compat,
        action,
        max_residual: compat.max(action),
    })
}

fn m2() -> AlgebraShape {
    AlgebraShape::new(vec![2]).expect("nonempty shape")
}

fn counterexample_lattice_map(x: &Element, tol: &ToleranceConfig) -> Result<Element> {
    let one = Element::identity(x.shape());
    if x.norm() <= tol.eq_tol {
        Ok(Element::zero(x.shape()))
    } else if x.dist(&one) <= tol.eq_tol {
        Ok(one)
    } else {
        Ok(&one - x)
    }
}

fn counterexample_group_map(x: &Element) -> Element {
    let d = x.block_det();
    x.scale(d[0])
}

/// `f(p) = p⊥` on proper projections, `f(0) = 0`, `f(1) = 1`.
fn counterexample_f(tol: &ToleranceConfig) -> MorphismCandidate {
    let tol = *tol;
    MorphismCandidate::new("counterexample_m2.f", m2(), m2(), Scope::Active, move |x| {
        if !x.is_projection(&tol) {
            return Err(Error::domain(
                "the lattice map is defined on projections only",
            ));
        }
        counterexample_lattice_map(x, &tol)
    })
}

/// `g(u) = det(u)·u` on `Sym(M₂)`.
fn counterexample_g(tol: &ToleranceConfig) -> MorphismCandidate {
    let tol = *tol;
    MorphismCandidate::new("counterexample_m2.g", m2(), m2(), Scope::Active, move |x| {
        if !x.is_unitary(&tol) || !sym_member(x, &tol)? {
            return Err(Error::domain("the group map is defined on Sym(M2) only"));
        }
        Ok(counterexample_group_map(x))
    })
}

/// One evaluator acting as `f` on projections and `g` on `Sym(M₂)`; the two
/// agree on the only common element `1`.
pub(crate) fn counterexample_combined(tol: &ToleranceConfig) -> MorphismCandidate {
    let tol = *tol;
    MorphismCandidate::new("counterexample_m2", m2(), m2(), Scope::Active, move |x| {
        if x.is_projection(&tol) {
            counterexample_lattice_map(x, &tol)
        } else if x.is_unitary(&tol) && sym_member(x, &tol)? {
            Ok(counterexample_group_map(x))
        } else {
            Err(Error::domain(
                "input is neither a projection nor in Sym(M2)",
            ))
        }
    })
}

/// `g(u)` against `ζf(p) + ζ̄f(p⊥)` for `u = ζp + ζ̄p⊥`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearExtensionProbe {
    pub zeta: [f64; 2],
    pub g_of_u: Element,
    pub linear_combination: Element,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub equivariance: EquivarianceReport,
    pub f_zero_residual: f64,
    pub f_one_residual: f64,
    /// Equivariance at `u = e₁₂ + e₂₁`, `p = e₁₁`.
    pub spot_check_residual: f64,
    pub probe: LinearExtensionProbe,
    pub passes_equivariance: bool,
    pub fails_linear_extension: bool,
    pub verdict: bool,
}

/// The lattice map `p ↦ p⊥` and group map `u ↦ det(u)u` on `M₂(ℂ)`: equivariant,
/// yet no linear map restricts to both.
pub fn counterexample_m2(
    samples: usize,
    sampler: &mut SeededSampler,
    tol: &ToleranceConfig,
) -> Result<(MorphismCandidate, MorphismCandidate, CounterexampleReport)> {
    counterexample_m2_with_phase(I, samples, sampler, tol)
}

/// As [`counterexample_m2`], probing linear extension at the unimodular phase `zeta`.
pub fn counterexample_m2_with_phase(
    zeta: C64,
    samples: usize,
    sampler: &mut SeededSampler,
    tol: &ToleranceConfig,
) -> Result<(MorphismCandidate, MorphismCandidate, CounterexampleReport)> {
    if (zeta.norm() - 1.0).abs() > tol.eq_tol {
        return Err(Error::domain(format!(
            "probe phase must be unimodular, got |zeta| = {}",
            zeta.norm()
        )));
    }
    let f = counterexample_f(tol);
    let g = counterexample_g(tol);
    let s = m2();
    let equivariance = equivariance_check(&f, &g, samples, sampler)?;
    let zero = Element::zero(&s);
    let one = Element::identity(&s);
    let f_zero_residual = f.evaluate(&zero)?.dist(&zero);
    let f_one_residual = f.evaluate(&one)?.dist(&one);
    let p = Element::matrix_unit(&s, 0, 0)?;
    let swap = Element::new(
        s.clone(),
        vec![CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])],
    )?;
    let gu = g.evaluate(&swap)?;
    let spot_check_residual =
        (&(&gu * &f.evaluate(&p)?) * &gu.adjoint()).dist(&f.evaluate(&(&(&swap * &p) * &swap))?);
    let pc = &one - &p;
    let u = &p.scale(zeta) + &pc.scale(zeta.conj());
    let g_of_u = g.evaluate(&u)?;
    let linear_combination = &f.evaluate(&p)?.scale(zeta) + &f.evaluate(&pc)?.scale(zeta.conj());
    let margin = g_of_u.dist(&linear_combination);
    let passes_equivariance = equivariance
        .max_residual
        .max(spot_check_residual)
        .max(f_zero_residual)
        .max(f_one_residual)
        <= tol.verify_tol;
    let fails_linear_extension = margin >= 0.5;
    let report = CounterexampleReport {
        equivariance,
        f_zero_residual,
        f_one_residual,
        spot_check_residual,
        probe: LinearExtensionProbe {
            zeta: [zeta.re, zeta.im],
            g_of_u,
            linear_combination,
            margin,
        },
        passes_equivariance,
        fails_linear_extension,
        verdict: passes_equivariance && fails_linear_extension,
    };
    Ok((f, g, report))
}

/// A Jordan *-homomorphism obtained from a *-ring homomorphism.
#[derive(Clone, Debug)]
pub struct JordanLift {
    pub candidate: MorphismCandidate,
    /// `½(1 − i f(i))`, where `f` is complex-linear.
    pub q_plus: Element,
    /// `½(1 + i f(i))`, where `f` is conjugate-linear.
    pub q_minus: Element,
    /// Largest sampled failure of `f` to be additive, multiplicative or involutive.
    pub residual_ring: f64,
    /// Largest `‖g(a) − f(a)‖` over sampled self-adjoint `a`.
    pub residual_selfadjoint: f64,
    /// Largest `‖g(a²) − g(a)²‖` over sampled normal `a`.
    pub residual_squares: f64,
}

fn ring_residual(f: &MorphismCandidate, a: &Element, b: &Element) -> Result<f64> {
    let (fa, fb) = (f.evaluate(a)?, f.evaluate(b)?);
    let add = f.evaluate(&(a + b))?.dist(&(&fa + &fb));
    let mul = f.evaluate(&(a * b))?.dist(&(&fa * &fb));
    let inv = f.evaluate(&a.adjoint())?.dist(&fa.adjoint());
    Ok(add.max(mul).max(inv))
}

/// `g(a) = f₊(a) + f₋(a)*` with `f±(a) = ½(f(a) ∓ i f(ia))`.
pub fn jordan_from_star_ring(
    f: &MorphismCandidate,
    samples: usize,
    sampler: &mut SeededSampler,
    tol: &ToleranceConfig,
) -> Result<JordanLift> {
    if f.scope() != Scope::All {
        return Err(Error::domain(
            "the Jordan lift evaluates f on arbitrary elements",
        ));
    }
    let dom = f.domain().clone();
    let mut residual_ring: f64 = 0.0;
    for k in 0..samples {
        let a = sampler.random_element(&dom);
        let b = sampler.random_element(&dom);
        residual_ring =
            residual_ring.max(ring_residual(f, &a, &b).map_err(|e| evaluator_error(k, e))?);
    }
    if residual_ring > tol.verify_tol {
        return Err(Error::domain(format!(
            "not a *-ring homomorphism on samples (residual {residual_ring:.3e})"
        )));
    }
    let one_cod = Element::identity(f.codomain());
    let fi = f.evaluate(&Element::scalar(&dom, I))?;
    let q_plus = (&one_cod - &fi.scale(I)).scale_real(0.5);
    let q_minus = (&one_cod + &fi.scale(I)).scale_real(0.5);
    let inner = f.clone();
    let candidate = MorphismCandidate::new(
        format!("jordan({})", f.name()),
        dom.clone(),
        f.codomain().clone(),
        Scope::All,
        move |a| {
            let fa = inner.evaluate(a)?;
            let fia = inner.evaluate(&a.scale(I)).map(|y| y.scale(I))?;
            let plus = (&fa - &fia).scale_real(0.5);
            let minus = (&fa + &fia).scale_real(0.5);
            Ok(&plus + &minus.adjoint())
        },
    );
    let (mut residual_selfadjoint, mut residual_squares): (f64, f64) = (0.0, 0.0);
    for k in 0..samples {
        let h = sampler.random_selfadjoint(&dom);
        let gh = candidate.evaluate(&h).map_err(|e| evaluator_error(k, e))?;
        residual_selfadjoint = residual_selfadjoint.max(gh.dist(&f.evaluate(&h)?));
        let a = sampler.random_normal(&dom);
        let ga = candidate.evaluate(&a).map_err(|e| evaluator_error(k, e))?;
        residual_squares = residual_squares.max(candidate.evaluate(&(&a * &a))?.dist(&(&ga * &ga)));
    }
    Ok(JordanLift {
        candidate,
        q_plus,
        q_minus,
        residual_ring,
        residual_selfadjoint,
        residual_squares,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub samples: usize,
    /// Largest `‖f(a+b) − f(a) − f(b)‖` over self-adjoint pairs.
    pub additivity: f64,
    /// Largest `‖f(uv) − f(u)f(v)‖` over unitary pairs.
    pub group_homomorphism: f64,
    /// Largest gap between `g(a)` and `f` applied to the four unitaries of `a`, recombined.
    pub four_unitary: f64,
    pub multiplicativity: f64,
    pub unit: f64,
}

/// The total map `g(a) = f(a₁) + i f(a₂)` where `a = a₁ + i a₂` with self-adjoint parts.
pub fn extend_additive_selfadjoint(
    f: &MorphismCandidate,
    samples: usize,
    sampler: &mut SeededSampler,
    tol: &ToleranceConfig,
) -> Result<(MorphismCandidate, ExtensionReport)> {
    let dom = f.domain().clone();
    let (mut additivity, mut group_homomorphism): (f64, f64) = (0.0, 0.0);
    for k in 0..samples {
        let a = sampler.random_selfadjoint(&dom);
        let b = sampler.random_selfadjoint(&dom);
        let sum = f.evaluate(&(&a + &b)).map_err(|e| evaluator_error(k, e))?;
        additivity = additivity.max(sum.dist(&(&f.evaluate(&a)? + &f.evaluate(&b)?)));
        let u = sampler.random_unitary(&dom);
        let v = sampler.random_unitary(&dom);
        let uv = f.evaluate(&(&u * &v)).map_err(|e| evaluator_error(k, e))?;
        group_homomorphism =
            group_homomorphism.max(uv.dist(&(&f.evaluate(&u)? * &f.evaluate(&v)?)));
    }
    if additivity > tol.verify_tol {
        return Err(Error::domain(format!(
            "f is not additive on self-adjoint pairs (residual {additivity:.3e})"
        )));
    }
    let inner = f.clone();
    let g = MorphismCandidate::new(
        format!("extend({})", f.name()),
        dom.clone(),
        f.codomain().clone(),
        Scope::All,
        move |a| Ok(&inner.evaluate(&a.real_part())? + &inner.evaluate(&a.imag_part())?.scale(I)),
    );
    let coeffs = [c(0.25, 0.0), c(0.25, 0.0), c(0.0, 0.25), c(0.0, 0.25)];
    let (mut four_unitary, mut multiplicativity): (f64, f64) = (0.0, 0.0);
    for k in 0..samples {
        let a = sampler.random_element(&dom);
        let b = sampler.random_element(&dom);
        let ga = g.evaluate(&a).map_err(|e| evaluator_error(k, e))?;
        let parts = a.four_unitaries(tol)?;
        let mut recombined = Element::zero(f.codomain());
        for (u, coef) in parts.unitaries.iter().zip(coeffs) {
            recombined = &recombined + &f.evaluate(u)?.scale(coef * C64::new(parts.scale, 0.0));
        }
        four_unitary = four_unitary.max(ga.dist(&recombined));
        multiplicativity =
            multiplicativity.max(g.evaluate(&(&a * &b))?.dist(&(&ga * &g.evaluate(&b)?)));
    }
    let unit = g
        .evaluate(&Element::identity(&dom))?
        .dist(&Element::identity(f.codomain()));
    Ok((
        g,
        ExtensionReport {
            samples,
            additivity,
            group_homomorphism,
            four_unitary,
            multiplicativity,
            unit,
        },
    ))
}
