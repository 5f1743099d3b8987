//! Reconstruction of a linear *-homomorphism from its values on projections
//! and symmetries: matrix units, the coordinate map, the I₂ pipeline and the
//! assembled map with its verification.

use serde::{Deserialize, Serialize};

use super::{c, evaluator_error, random_sym, MorphismCandidate};
use crate::algebra::calculus::pseudo_inverse;
use crate::algebra::{
    AlgebraShape, CMat, Element, SeededSampler, ToleranceConfig, C64, I, ONE, ZERO,
};
use crate::error::{Error, Result};
use crate::lattice::vector_projection_block;
use crate::symmetry::sym_member;

/// Images `e′ᵢⱼ` of the matrix units of one domain block.
#[derive(Clone, Debug)]
pub struct MatrixUnits {
    pub block: usize,
    /// `units[i][j] = e′ᵢⱼ`, elements of the codomain.
    pub units: Vec<Vec<Element>>,
    /// Diagonal of `W` with `e′ᵢⱼ = W eᵢⱼ W*`, when `f` fixes every `eᵢᵢ` of this block.
    pub gauge: Option<Vec<C64>>,
}

impl MatrixUnits {
    pub fn size(&self) -> usize {
        self.units.len()
    }

    /// `Σₘ e′ₘ₁ c e′₁ₘ`: a corner element spread over the whole image of the block.
    fn lift(&self, corner: &Element) -> Element {
        let mut out = Element::zero(corner.shape());
        for m in 0..self.size() {
            out = &out + &(&(&self.units[m][0] * corner) * &self.units[0][m]);
        }
        out
    }

    /// `e′₁ₖ y e′ₗ₁`, the `(k, l)` coordinate of `y` in the corner `e′₁₁`.
    fn corner(&self, y: &Element, k: usize, l: usize) -> Element {
        &(&self.units[0][k] * y) * &self.units[l][0]
    }
}

fn evaluate_at(f: &MorphismCandidate, x: &Element, step: &str) -> Result<Element> {
    f.evaluate(x)
        .map_err(|e| Error::reconstruction(step, e.to_string()))
}

fn block_matrix_unit(shape: &AlgebraShape, block: usize, i: usize, j: usize) -> Element {
    let n = shape.dim(block);
    let m = CMat::from_fn(n, n, |r, s| if r == i && s == j { ONE } else { ZERO });
    Element::embed_block(shape, block, m).expect("block index in range")
}

/// The swap of the first two basis vectors in `block`, identity elsewhere.
fn block_swap(shape: &AlgebraShape, block: usize) -> Element {
    Element::from_fn(shape, |b, n| {
        CMat::from_fn(n, n, |r, s| {
            let swapped = b == block && r < 2 && s < 2;
            match (swapped, r == s) {
                (true, _) if r != s => ONE,
                (true, _) => ZERO,
                (false, true) => ONE,
                (false, false) => ZERO,
            }
        })
    })
}

/// `e′ᵢᵢ = f(eᵢᵢ)`; off-diagonal units from `f(e₁₁)f(swap)` for size 2 and
/// from `2 e′₁₁ f(p₁ⱼ(1)) e′ⱼⱼ` for larger blocks. The unit relations are verified.
pub fn gauge_matrix_units(
    f: &MorphismCandidate,
    block: usize,
    tol: &ToleranceConfig,
) -> Result<MatrixUnits> {
    let dom = f.domain();
    if block >= dom.block_count() {
        return Err(Error::structural(format!(
            "block {block} out of range for {dom}"
        )));
    }
    let n = dom.dim(block);
    let cod = f.codomain().clone();
    let mut units = vec![vec![Element::zero(&cod); n]; n];
    if n == 1 {
        units[0][0] = evaluate_at(f, &Element::block_unit(dom, block), "units: f(z)")?;
    } else {
        for (i, row) in units.iter_mut().enumerate() {
            row[i] = evaluate_at(f, &block_matrix_unit(dom, block, i, i), "units: f(e_ii)")?;
        }
        for j in 1..n {
            let e1j = if n == 2 {
                let fu = evaluate_at(f, &block_swap(dom, block), "units: f(swap)")?;
                &units[0][0] * &fu
            } else {
                let p = Element::embed_block(dom, block, vector_projection_block(n, 0, j, ONE)?)?;
                let fp = evaluate_at(f, &p, "units: f(p_1j(1))")?;
                (&(&units[0][0] * &fp) * &units[j][j]).scale_real(2.0)
            };
            units[j][0] = e1j.adjoint();
            units[0][j] = e1j;
        }
        for i in 1..n {
            for j in 1..n {
                if i != j {
                    units[i][j] = &units[i][0] * &units[0][j];
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let lhs = &units[i][j] * &units[k][l];
                    let residual = if j == k {
                        lhs.dist(&units[i][l])
                    } else {
                        lhs.norm()
                    };
                    if residual > tol.verify_tol {
                        return Err(Error::reconstruction(
                            "matrix units",
                            format!(
                                "e'_{}{} e'_{}{} off by {residual:.3e} in block {block}",
                                i + 1,
                                j + 1,
                                k + 1,
                                l + 1
                            ),
                        ));
                    }
                }
            }
        }
    }
    let fixes_diagonal = &cod == dom
        && (0..n).all(|i| {
            let target = if n == 1 {
                Element::block_unit(dom, block)
            } else {
                block_matrix_unit(dom, block, i, i)
            };
            units[i][i].dist(&target) <= tol.verify_tol
        });
    let gauge = fixes_diagonal.then(|| {
        (0..n)
            .map(|j| {
                if j == 0 {
                    return ONE;
                }
                let entry = units[0][j].block(block)[(0, j)];
                if entry.norm() <= tol.rank_tol {
                    ONE
                } else {
                    entry.conj() / entry.norm()
                }
            })
            .collect()
    });
    Ok(MatrixUnits {
        block,
        units,
        gauge,
    })
}

/// The coordinate map `ℂ → e′₁₁ B e′₁₁` of one block, with sampled homomorphism residuals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordinateMap {
    pub block: usize,
    pub phi_one: Element,
    pub phi_i: Element,
    /// `φ(i)` could not be evaluated and was taken to be `i·φ(1)`.
    pub assumed_linear: bool,
    pub samples: usize,
    pub residual_additivity: f64,
    pub residual_multiplicativity: f64,
    pub residual_involution: f64,
    pub residual_unit: f64,
    /// Largest `‖φ(α) − (Re α·φ(1) + Im α·φ(i))‖`.
    pub residual_coordinate: f64,
}

impl CoordinateMap {
    pub fn max_residual(&self) -> f64 {
        [
            self.residual_additivity,
            self.residual_multiplicativity,
            self.residual_involution,
            self.residual_unit,
            self.residual_coordinate,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    fn linear(&self, alpha: C64) -> Element {
        &self.phi_one.scale_real(alpha.re) + &self.phi_i.scale_real(alpha.im)
    }
}

/// `φ(α) = (y₁₁)⁻¹·y₁₂` for `y = f(p₁₂(α))` read in the corner, or `f(α z)` on a size-1 block.
fn phi_at(
    f: &MorphismCandidate,
    units: &MatrixUnits,
    alpha: C64,
    tol: &ToleranceConfig,
) -> Result<Element> {
    let dom = f.domain();
    let b = units.block;
    let n = dom.dim(b);
    if n == 1 {
        return evaluate_at(
            f,
            &Element::block_unit(dom, b).scale(alpha),
            "coordinate: f(alpha z)",
        );
    }
    let p = Element::embed_block(dom, b, vector_projection_block(n, 0, 1, alpha)?)?;
    let y = evaluate_at(f, &p, "coordinate: f(p_12(alpha))")?;
    let y11 = units.corner(&y, 0, 0);
    let y12 = units.corner(&y, 0, 1);
    let inv = y11.map_blocks(|m| pseudo_inverse(m, tol.rank_tol));
    if (&inv * &y11).dist(&units.units[0][0]) > tol.verify_tol {
        return Err(Error::reconstruction(
            "coordinate",
            format!("corner entry (1,1) is singular in block {b}"),
        ));
    }
    Ok(&inv * &y12)
}

/// Read the coordinate map off `f` and check it is a *-ring homomorphism on samples.
pub fn extract_coordinate_map(
    f: &MorphismCandidate,
    units: &MatrixUnits,
    samples: usize,
    sampler: &mut SeededSampler,
    tol: &ToleranceConfig,
) -> Result<CoordinateMap> {
    let n = f.domain().dim(units.block);
    let can_probe = n >= 2 || f.scope().covers_normals();
    let phi = |alpha: C64| -> Result<Element> {
        if can_probe {
            phi_at(f, units, alpha, tol)
        } else {
            Ok(units.units[0][0].scale(alpha))
        }
    };
    let phi_one = phi(ONE)?;
    let phi_i = phi(I)?;
    let mut map = CoordinateMap {
        block: units.block,
        residual_unit: phi_one.dist(&units.units[0][0]),
        phi_one,
        phi_i,
        assumed_linear: !can_probe,
        samples,
        residual_additivity: 0.0,
        residual_multiplicativity: 0.0,
        residual_involution: 0.0,
        residual_coordinate: 0.0,
    };
    for k in 0..samples {
        let a = sampler.random_complex();
        let b = sampler.random_complex();
        let wrap = |e: Error| evaluator_error(k, e);
        let (pa, pb) = (phi(a).map_err(wrap)?, phi(b).map_err(wrap)?);
        map.residual_additivity = map
            .residual_additivity
            .max(phi(a + b).map_err(wrap)?.dist(&(&pa + &pb)));
        map.residual_multiplicativity = map
            .residual_multiplicativity
            .max(phi(a * b).map_err(wrap)?.dist(&(&pa * &pb)));
        map.residual_involution = map
            .residual_involution
            .max(phi(a.conj()).map_err(wrap)?.dist(&pa.adjoint()));
        map.residual_coordinate = map.residual_coordinate.max(pa.dist(&map.linear(a)));
    }
    Ok(map)
}

/// The assembled real-linear map `g(x) = Σ_b Σᵢⱼ (Re xᵢⱼ + Im xᵢⱼ·Φ_b) e′ᵢⱼ`.
#[derive(Clone, Debug)]
pub struct ReconstructedMap {
    domain: AlgebraShape,
    codomain: AlgebraShape,
    real_units: Vec<Vec<Vec<Element>>>,
    imag_units: Vec<Vec<Vec<Element>>>,
}

impl ReconstructedMap {
    fn assemble(f: &MorphismCandidate, units: &[MatrixUnits], maps: &[CoordinateMap]) -> Self {
        let mut real_units = Vec::new();
        let mut imag_units = Vec::new();
        for (u, m) in units.iter().zip(maps) {
            let phase = u.lift(&m.phi_i);
            imag_units.push(
                u.units
                    .iter()
                    .map(|row| row.iter().map(|e| &phase * e).collect())
                    .collect(),
            );
            real_units.push(u.units.clone());
        }
        ReconstructedMap {
            domain: f.domain().clone(),
            codomain: f.codomain().clone(),
            real_units,
            imag_units,
        }
    }

    pub fn domain(&self) -> &AlgebraShape {
        &self.domain
    }

    pub fn codomain(&self) -> &AlgebraShape {
        &self.codomain
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.shape() != &self.domain {
            return Err(Error::structural(format!(
                "expected shape {}, got {}",
                self.domain,
                x.shape()
            )));
        }
        let mut out = Element::zero(&self.codomain);
        for (b, m) in x.blocks().iter().enumerate() {
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    let z = m[(i, j)];
                    if z != ZERO {
                        out = &out + &self.real_units[b][i][j].scale_real(z.re);
                        out = &out + &self.imag_units[b][i][j].scale_real(z.im);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Real matrix of the map: columns follow the domain basis `eᵢⱼ, i·eᵢⱼ` block
    /// by block, rows the real and imaginary parts of codomain entries.
    pub fn real_matrix(&self) -> Vec<Vec<f64>> {
        let mut columns = Vec::new();
        for (b, &n) in self.domain.dims().iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    for image in [&self.real_units[b][i][j], &self.imag_units[b][i][j]] {
                        let col: Vec<f64> = image
                            .blocks()
                            .iter()
                            .flat_map(|m| {
                                let (r, s) = m.shape();
                                (0..r).flat_map(move |p| {
                                    (0..s).flat_map(move |q| [m[(p, q)].re, m[(p, q)].im])
                                })
                            })
                            .collect();
                        columns.push(col);
                    }
                }
            }
        }
        let rows = columns.first().map_or(0, Vec::len);
        (0..rows)
            .map(|r| columns.iter().map(|col| col[r]).collect())
            .collect()
    }
}

/// Outcome of one domain block's branch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockBranch {
    pub block: usize,
    pub size: usize,
    /// `atoms`, `type_i2` or `coordinate`.
    pub method: String,
    pub ok: bool,
    pub coordinate: Option<CoordinateMap>,
    pub diagnostics: Vec<String>,
}

/// Residuals of the I₂ factorization route on sampled projections.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeI2Report {
    pub samples: usize,
    /// Largest `‖F₁F₂F₃F₄ − (1 − 2q′)‖` in the domain.
    pub factorization_residual: f64,
    /// Largest `‖f(F₁)f(F₂)f(F₃)f(F₄) − (1 − 2f(q′))‖`.
    pub factorwise_residual: f64,
    /// Largest `‖f(q) − f(q′) − f(det(q)·z)‖`.
    pub split_residual: f64,
    /// Largest `‖g(q) − f(q)‖`.
    pub g_residual: f64,
    pub factors_in_sym: bool,
    /// Largest `|det(Fₖ)² − 1|`.
    pub det_square_defect: f64,
}

impl TypeI2Report {
    fn max_residual(&self) -> f64 {
        [
            self.factorization_residual,
            self.factorwise_residual,
            self.split_residual,
            self.g_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// The four symmetries whose product is `1 − 2q′` for a 2×2 projection block
/// `q′` of rank at most one.
fn four_symmetries(q: &CMat, tol: &ToleranceConfig) -> Result<[CMat; 4]> {
    let tau = q[(0, 0)].re + q[(1, 1)].re;
    let tau_perp = 1.0 - tau;
    let alpha = q[(0, 0)].re - q[(1, 1)].re;
    let off = q[(0, 1)];
    let beta = 2.0 * off.norm();
    let zeta = if off.norm() <= tol.rank_tol {
        ONE
    } else {
        off / off.norm()
    };
    let xi = (-I * zeta).sqrt();
    if (I * xi * xi - zeta).norm() > tol.verify_tol {
        return Err(Error::reconstruction(
            "type_i2: phase lift",
            "i xi^2 does not recover zeta",
        ));
    }
    let diag = |a: C64, b: C64| CMat::from_row_slice(2, 2, &[a, ZERO, ZERO, b]);
    let d = c(tau_perp + alpha, 0.0);
    let ib = c(0.0, beta);
    Ok([
        diag(c(tau - tau_perp, 0.0), ONE),
        diag(-xi, xi.conj()),
        CMat::from_row_slice(2, 2, &[d, ib, ib, d]),
        diag(xi.conj(), xi),
    ])
}

fn type_i2_check(
    f: &MorphismCandidate,
    g: &ReconstructedMap,
    samples: usize,
    sampler: &mut SeededSampler,
    tol: &ToleranceConfig,
) -> Result<TypeI2Report> {
    let dom = f.domain();
    let pairs: Vec<usize> = (0..dom.block_count())
        .filter(|&b| dom.dim(b) == 2)
        .collect();
    let one_dom = Element::identity(dom);
    let one_cod = Element::identity(f.codomain());
    let m2 = AlgebraShape::new(vec![2])?;
    let mut report = TypeI2Report {
        samples,
        factorization_residual: 0.0,
        factorwise_residual: 0.0,
        split_residual: 0.0,
        g_residual: 0.0,
        factors_in_sym: true,
        det_square_defect: 0.0,
    };
    if pairs.is_empty() {
        return Ok(report);
    }
    for k in 0..samples {
        let wrap = |e: Error| evaluator_error(k, e);
        let b = pairs[sampler.random_index(pairs.len())];
        let local = match sampler.random_index(6) {
            0 => Element::zero(&m2),
            1 => Element::identity(&m2),
            _ => sampler.random_projection(&m2, &[1])?,
        };
        let qb = local.block(0).clone();
        let adj = Element::new(m2.clone(), vec![qb.clone()])?.adjugate2()?;
        let det = (adj.block(0) * &qb)[(0, 0)];
        let det = if det.norm() <= 0.5 { 0.0 } else { 1.0 };
        let reduced = &qb - CMat::identity(2, 2).scale(det);
        let q = Element::embed_block(dom, b, qb)?;
        let q_reduced = Element::embed_block(dom, b, reduced.clone())?;
        let central = Element::block_unit(dom, b).scale_real(det);
        let factors = four_symmetries(&reduced, tol)?
            .into_iter()
            .map(|m| {
                let mut blocks = one_dom.clone().into_blocks();
                blocks[b] = m;
                Element::new(dom.clone(), blocks)
            })
            .collect::<Result<Vec<_>>>()?;
        for fk in &factors {
            report.factors_in_sym &= sym_member(fk, tol)?;
            let d = fk.block(b).determinant();
            report.det_square_defect = report.det_square_defect.max((d * d - ONE).norm());
        }
        let s_reduced = &one_dom - &q_reduced.scale_real(2.0);
        let product = factors
            .iter()
            .fold(Element::identity(dom), |acc, x| &acc * x);
        report.factorization_residual = report.factorization_residual.max(product.dist(&s_reduced));
        let mut images = Element::identity(f.codomain());
        for fk in &factors {
            images = &images * &f.evaluate(fk).map_err(wrap)?;
        }
        let f_reduced = f.evaluate(&q_reduced).map_err(wrap)?;
        let target = &one_cod - &f_reduced.scale_real(2.0);
        report.factorwise_residual = report.factorwise_residual.max(images.dist(&target));
        let fq = f.evaluate(&q).map_err(wrap)?;
        let f_central = f.evaluate(&central).map_err(wrap)?;
        report.split_residual = report
            .split_residual
            .max(fq.dist(&(&f_reduced + &f_central)));
        report.g_residual = report.g_residual.max(g.apply(&q)?.dist(&fq));
    }
    Ok(report)
}

/// Everything [`reconstruct`] learned about a candidate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub domain: AlgebraShape,
    pub codomain: AlgebraShape,
    /// Diagonal unitary `W` with `e′ᵢⱼ = W eᵢⱼ W*`, present when `f` fixes every `eᵢᵢ`.
    pub gauge: Option<Element>,
    pub linear_map: Option<Vec<Vec<f64>>>,
    pub branches: Vec<BlockBranch>,
    pub type_i2: Option<TypeI2Report>,
    pub residual_on_projections: Option<f64>,
    /// Against sampled normal elements, or sampled symmetries when `f` only sees the active lattice.
    pub residual_on_normals: Option<f64>,
    pub residual_multiplicativity: Option<f64>,
    pub residual_involution: Option<f64>,
    /// Largest `‖g(ix) − i g(x)‖`.
    pub residual_linearity: Option<f64>,
    pub diagnostics: Vec<String>,
    pub verdict: bool,
    #[serde(skip)]
    pub map: Option<ReconstructedMap>,
}

struct Residuals {
    projections: f64,
    normals: f64,
    multiplicativity: f64,
    involution: f64,
    linearity: f64,
}

fn verify(
    f: &MorphismCandidate,
    g: &ReconstructedMap,
    samples: usize,
    sampler: &mut SeededSampler,
) -> Result<Residuals> {
    let dom = f.domain();
    let mut r = Residuals {
        projections: 0.0,
        normals: 0.0,
        multiplicativity: 0.0,
        involution: 0.0,
        linearity: 0.0,
    };
    let mut fixed = vec![Element::zero(dom), Element::identity(dom)];
    fixed.extend((0..dom.block_count()).map(|b| Element::block_unit(dom, b)));
    for (k, p) in fixed.iter().enumerate() {
        r.projections = r.projections.max(
            g.apply(p)?
                .dist(&f.evaluate(p).map_err(|e| evaluator_error(k, e))?),
        );
    }
    for k in 0..samples {
        let wrap = |e: Error| evaluator_error(k, e);
        let p = sampler.random_projection_any_rank(dom);
        r.projections = r
            .projections
            .max(g.apply(&p)?.dist(&f.evaluate(&p).map_err(wrap)?));
        let x = if f.scope().covers_normals() {
            sampler.random_normal(dom)
        } else {
            random_sym(dom, sampler)
        };
        r.normals = r
            .normals
            .max(g.apply(&x)?.dist(&f.evaluate(&x).map_err(wrap)?));
        let a = sampler.random_element(dom);
        let b = sampler.random_element(dom);
        let ga = g.apply(&a)?;
        r.multiplicativity = r
            .multiplicativity
            .max(g.apply(&(&a * &b))?.dist(&(&ga * &g.apply(&b)?)));
        r.involution = r.involution.max(g.apply(&a.adjoint())?.dist(&ga.adjoint()));
        r.linearity = r.linearity.max(g.apply(&a.scale(I))?.dist(&ga.scale(I)));
    }
    Ok(r)
}

/// Rebuild `g` blockwise from `f`, then check it against `f` and the *-homomorphism laws.
pub fn reconstruct(
    f: &MorphismCandidate,
    samples: usize,
    sampler: &mut SeededSampler,
    tol: &ToleranceConfig,
) -> ReconstructionReport {
    let dom = f.domain().clone();
    let mut report = ReconstructionReport {
        domain: dom.clone(),
        codomain: f.codomain().clone(),
        gauge: None,
        linear_map: None,
        branches: Vec::new(),
        type_i2: None,
        residual_on_projections: None,
        residual_on_normals: None,
        residual_multiplicativity: None,
        residual_involution: None,
        residual_linearity: None,
        diagnostics: Vec::new(),
        verdict: false,
        map: None,
    };
    let mut all_units = Vec::new();
    let mut all_maps = Vec::new();
    for b in 0..dom.block_count() {
        let n = dom.dim(b);
        let method = match n {
            1 => "atoms",
            2 => "type_i2",
            _ => "coordinate",
        };
        let mut branch = BlockBranch {
            block: b,
            size: n,
            method: method.into(),
            ok: false,
            coordinate: None,
            diagnostics: vec![],
        };
        let outcome = gauge_matrix_units(f, b, tol).and_then(|units| {
            let map = extract_coordinate_map(f, &units, samples.min(50), sampler, tol)?;
            Ok((units, map))
        });
        match outcome {
            Ok((units, map)) => {
                if map.assumed_linear {
                    branch
                        .diagnostics
                        .push("phi(i) not observable on this block; taken as i*phi(1)".into());
                }
                branch.ok = map.max_residual() <= tol.verify_tol;
                if !branch.ok {
                    branch.diagnostics.push(format!(
                        "coordinate map is not a *-ring homomorphism on samples (residual {:.3e})",
                        map.max_residual()
                    ));
                }
                branch.coordinate = Some(map.clone());
                all_units.push(units);
                all_maps.push(map);
            }
            Err(e) => branch.diagnostics.push(e.to_string()),
        }
        report.branches.push(branch);
    }
    if all_units.len() != dom.block_count() {
        report
            .diagnostics
            .push("a block branch failed; no map assembled".into());
        return report;
    }
    if all_units.iter().all(|u| u.gauge.is_some()) {
        let diag: Vec<Vec<C64>> = all_units
            .iter()
            .map(|u| u.gauge.clone().unwrap_or_default())
            .collect();
        report.gauge = Some(Element::from_fn(&dom, |b, n| {
            CMat::from_fn(n, n, |i, j| if i == j { diag[b][i] } else { ZERO })
        }));
    }
    let g = ReconstructedMap::assemble(f, &all_units, &all_maps);
    report.linear_map = Some(g.real_matrix());
    let mut ok = report.branches.iter().all(|b| b.ok);
    if dom.dims().contains(&2) {
        match type_i2_check(f, &g, samples.min(100), sampler, tol) {
            Ok(i2) => {
                ok &= i2.factors_in_sym && i2.max_residual() <= tol.verify_tol;
                report.type_i2 = Some(i2);
            }
            Err(e) => {
                ok = false;
                report.diagnostics.push(format!("type_i2: {e}"));
            }
        }
    }
    match verify(f, &g, samples, sampler) {
        Ok(r) => {
            let checks = [
                ("projections", r.projections),
                ("normals", r.normals),
                ("multiplicativity", r.multiplicativity),
                ("involution", r.involution),
                ("linearity", r.linearity),
            ];
            for (name, value) in checks {
                if value > tol.verify_tol {
                    ok = false;
                    report
                        .diagnostics
                        .push(format!("{name} residual {value:.3e} exceeds tolerance"));
                }
            }
            report.residual_on_projections = Some(r.projections);
            report.residual_on_normals = Some(r.normals);
            report.residual_multiplicativity = Some(r.multiplicativity);
            report.residual_involution = Some(r.involution);
            report.residual_linearity = Some(r.linearity);
        }
        Err(e) => {
            ok = false;
            report.diagnostics.push(format!("verification: {e}"));
        }
    }
    report.verdict = ok;
    report.map = Some(g);
    report
}

/// [`reconstruct`] restricted to algebras whose blocks all have size 2.
pub fn reconstruct_type_i2(
    f: &MorphismCandidate,
    samples: usize,
    sampler: &mut SeededSampler,
    tol: &ToleranceConfig,
) -> Result<ReconstructionReport> {
    if f.domain().dims().iter().any(|&n| n != 2) {
        return Err(Error::structural(format!(
            "type I2 needs every block of size 2, got {}",
            f.domain()
        )));
    }
    Ok(reconstruct(f, samples, sampler, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(d: &[usize]) -> AlgebraShape {
        AlgebraShape::new(d.to_vec()).unwrap()
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn max_error(
        report: &ReconstructionReport,
        h: &MorphismCandidate,
        smp: &mut SeededSampler,
    ) -> f64 {
        let g = report.map.as_ref().unwrap();
        (0..100)
            .map(|_| {
                let x = smp.random_element(h.domain());
                g.apply(&x).unwrap().dist(&h.evaluate(&x).unwrap())
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn identity_units_and_gauge() {
        let t = tol();
        let s = shape(&[3, 2, 1]);
        let id = MorphismCandidate::identity(&s);
        for b in 0..3 {
            let u = gauge_matrix_units(&id, b, &t).unwrap();
            let n = s.dim(b);
            for i in 0..n {
                for j in 0..n {
                    let e = if n == 1 {
                        Element::block_unit(&s, b)
                    } else {
                        block_matrix_unit(&s, b, i, j)
                    };
                    assert!(u.units[i][j].dist(&e) < 1e-14);
                }
            }
            assert!(u.gauge.unwrap().iter().all(|w| (w - ONE).norm() < 1e-14));
        }
        let mut smp = SeededSampler::new(3);
        let report = reconstruct(&id, 40, &mut smp, &t);
        assert!(report.verdict, "{:?}", report.diagnostics);
        assert!(report.gauge.unwrap().dist(&Element::identity(&s)) < 1e-14);
    }

    #[test]
    fn gauge_recovers_diagonal_conjugator() {
        let t = tol();
        let s = shape(&[3]);
        let d = [c(0.6, 0.8), I, c(-1.0, 0.0)];
        let u = Element::new(
            s.clone(),
            vec![CMat::from_diagonal(&nalgebra::DVector::from_row_slice(&d))],
        )
        .unwrap();
        let f = MorphismCandidate::conjugation(u, &t).unwrap();
        let units = gauge_matrix_units(&f, 0, &t).unwrap();
        let w = units.gauge.unwrap();
        for j in 0..3 {
            assert!((w[j] - d[j] * d[0].conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn random_conjugation_units_satisfy_relations() {
        let t = tol();
        let s = shape(&[4]);
        let mut smp = SeededSampler::new(4);
        let f = MorphismCandidate::conjugation(smp.random_unitary(&s), &t).unwrap();
        let units = gauge_matrix_units(&f, 0, &t).unwrap();
        assert!(units.gauge.is_none());
        let map = extract_coordinate_map(&f, &units, 30, &mut smp, &t).unwrap();
        assert!(map.max_residual() < 1e-9);
    }

    #[test]
    fn coordinate_map_of_conjugation_is_conjugation() {
        let t = tol();
        let s = shape(&[3]);
        let mut smp = SeededSampler::new(5);
        let f = MorphismCandidate::entrywise_conjugate(&s);
        let units = gauge_matrix_units(&f, 0, &t).unwrap();
        let map = extract_coordinate_map(&f, &units, 30, &mut smp, &t).unwrap();
        assert!(map.max_residual() < 1e-9);
        assert!(map.phi_one.dist(&units.units[0][0]) < 1e-14);
        assert!(map.phi_i.dist(&units.units[0][0].scale(-I)) < 1e-12);
        let report = reconstruct(&f, 30, &mut smp, &t);
        assert!(!report.verdict);
        assert!(report.residual_on_projections.unwrap() < 1e-12);
        assert!(report.residual_linearity.unwrap() > 1.0);
    }

    #[test]
    fn round_trip_on_isomorphisms() {
        let t = tol();
        let mut smp = SeededSampler::new(6);
        for dims in [vec![2], vec![2, 2], vec![3], vec![2, 3, 1]] {
            let s = shape(&dims);
            let mut perm: Vec<usize> = (0..dims.len()).collect();
            if dims == [2, 2] {
                perm = vec![1, 0];
            }
            let mats = perm
                .iter()
                .map(|&src| {
                    smp.random_unitary(&shape(&[dims[src]]))
                        .into_blocks()
                        .remove(0)
                })
                .collect();
            let h = MorphismCandidate::block_permutation(&s, perm, mats, &t).unwrap();
            for restricted in [h.restrict_to_normals(&t), h.clone()] {
                let report = reconstruct(&restricted, 60, &mut smp, &t);
                assert!(report.verdict, "{dims:?}: {:?}", report.diagnostics);
                assert!(max_error(&report, &h, &mut smp) <= t.verify_tol);
                if dims.contains(&2) {
                    let i2 = report.type_i2.as_ref().unwrap();
                    assert!(i2.factors_in_sym && i2.det_square_defect < 1e-12);
                }
            }
        }
    }

    #[test]
    fn four_symmetry_product() {
        let t = tol();
        let m2 = shape(&[2]);
        let mut smp = SeededSampler::new(7);
        for _ in 0..50 {
            let q = smp
                .random_projection(&m2, &[1])
                .unwrap()
                .into_blocks()
                .remove(0);
            let f = four_symmetries(&q, &t).unwrap();
            let prod = &f[0] * &f[1] * &f[2] * &f[3];
            let target = CMat::identity(2, 2) - q.scale(2.0);
            assert!((prod - target).norm() < 1e-12);
            let dets: Vec<C64> = f.iter().map(|m| m.determinant()).collect();
            assert!((dets[0] - ONE).norm() < 1e-12 && (dets[1] + ONE).norm() < 1e-12);
            assert!((dets[2] - ONE).norm() < 1e-12 && (dets[3] - ONE).norm() < 1e-12);
        }
        let zero = four_symmetries(&CMat::zeros(2, 2), &t).unwrap();
        assert!((zero[0].determinant() + ONE).norm() < 1e-15);
    }

    #[test]
    fn counterexample_has_no_linear_reconstruction() {
        let t = tol();
        let mut smp = SeededSampler::new(0);
        let f = super::super::checks::counterexample_combined(&t);
        let report = reconstruct(&f, 50, &mut smp, &t);
        assert!(!report.verdict);
        assert!(report.residual_on_projections.unwrap() < 1e-12);
        assert!(report.residual_linearity.unwrap() > 1.0);
        assert!(reconstruct_type_i2(
            &MorphismCandidate::identity(&shape(&[2, 3])),
            5,
            &mut smp,
            &t
        )
        .is_err());
    }
}
