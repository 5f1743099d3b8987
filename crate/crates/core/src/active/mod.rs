//! Active lattices `(Proj(A), Sym(A), conjugation)` and the maps between them:
//! black-box morphism candidates, the equivariance and Dye checks, the Jordan
//! machinery, and reconstruction of algebra maps from lattice-and-group data.

mod checks;
mod reconstruct;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraShape, CMat, Element, SeededSampler, ToleranceConfig, C64, ONE, ZERO};
use crate::error::{Error, Result};
use crate::symmetry::{conjugate, sym_member};

pub use checks::{
    counterexample_m2, counterexample_m2_with_phase, dye_condition_check, equivariance_check,
    extend_additive_selfadjoint, jordan_expand, jordan_expand_with_coefficient,
    jordan_from_star_ring, jordan_product, CounterexampleReport, DyeReport, EquivarianceReport,
    ExtensionReport, JordanExpansion, JordanLift, LinearExtensionProbe,
};
pub use reconstruct::{
    extract_coordinate_map, gauge_matrix_units, reconstruct, reconstruct_type_i2, BlockBranch,
    CoordinateMap, MatrixUnits, ReconstructedMap, ReconstructionReport, TypeI2Report,
};

/// Which inputs an evaluator accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// Normal elements only.
    Normals,
    /// Every element.
    All,
    /// Projections and elements of `Sym(A)` only.
    Active,
}

impl Scope {
    pub fn covers_normals(self) -> bool {
        matches!(self, Scope::Normals | Scope::All)
    }
}

type Evaluator = Arc<dyn Fn(&Element) -> Result<Element> + Send + Sync>;

/// A map between algebras known only through evaluation.
#[derive(Clone)]
pub struct MorphismCandidate {
    name: String,
    domain: AlgebraShape,
    codomain: AlgebraShape,
    scope: Scope,
    eval: Evaluator,
}

impl fmt::Debug for MorphismCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MorphismCandidate")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("codomain", &self.codomain)
            .field("scope", &self.scope)
            .finish_non_exhaustive()
    }
}

impl MorphismCandidate {
    pub fn new(
        name: impl Into<String>,
        domain: AlgebraShape,
        codomain: AlgebraShape,
        scope: Scope,
        eval: impl Fn(&Element) -> Result<Element> + Send + Sync + 'static,
    ) -> Self {
        MorphismCandidate {
            name: name.into(),
            domain,
            codomain,
            scope,
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &AlgebraShape {
        &self.domain
    }

    pub fn codomain(&self) -> &AlgebraShape {
        &self.codomain
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    /// Evaluate, checking the input and output shapes.
    pub fn evaluate(&self, x: &Element) -> Result<Element> {
        if x.shape() != &self.domain {
            return Err(Error::structural(format!(
                "{} expects shape {}, got {}",
                self.name,
                self.domain,
                x.shape()
            )));
        }
        let y = (self.eval)(x)?;
        if y.shape() != &self.codomain {
            return Err(Error::structural(format!(
                "{} returned shape {}, declared {}",
                self.name,
                y.shape(),
                self.codomain
            )));
        }
        Ok(y)
    }

    pub fn identity(shape: &AlgebraShape) -> Self {
        MorphismCandidate::new("identity", shape.clone(), shape.clone(), Scope::All, |x| {
            Ok(x.clone())
        })
    }

    /// `x ↦ u x u*`.
    pub fn conjugation(u: Element, tol: &ToleranceConfig) -> Result<Self> {
        if !u.is_unitary(tol) {
            return Err(Error::domain("conjugating element is not unitary"));
        }
        let shape = u.shape().clone();
        let ua = u.adjoint();
        Ok(MorphismCandidate::new(
            "conj",
            shape.clone(),
            shape,
            Scope::All,
            move |x| Ok(&(&u * x) * &ua),
        ))
    }

    /// Output block `j` is `U_j x_{perm[j]} U_j*`.
    pub fn block_permutation(
        shape: &AlgebraShape,
        perm: Vec<usize>,
        unitaries: Vec<CMat>,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let k = shape.block_count();
        if perm.len() != k || unitaries.len() != k {
            return Err(Error::structural(format!(
                "block permutation needs {k} indices and {k} unitaries, got {} and {}",
                perm.len(),
                unitaries.len()
            )));
        }
        let mut seen = vec![false; k];
        for (j, &src) in perm.iter().enumerate() {
            if src >= k || seen[src] {
                return Err(Error::structural(format!(
                    "{perm:?} is not a permutation of 0..{k}"
                )));
            }
            seen[src] = true;
            if shape.dim(src) != shape.dim(j) {
                return Err(Error::structural(format!(
                    "block {src} (size {}) cannot move to block {j} (size {})",
                    shape.dim(src),
                    shape.dim(j)
                )));
            }
            let n = shape.dim(j);
            let u = &unitaries[j];
            if u.nrows() != n || u.ncols() != n {
                return Err(Error::structural(format!(
                    "unitary for block {j} is not {n}x{n}"
                )));
            }
            if (u * u.adjoint() - CMat::identity(n, n)).norm() > tol.eq_tol * (n as f64).max(1.0) {
                return Err(Error::domain(format!(
                    "matrix for block {j} is not unitary"
                )));
            }
        }
        let target = shape.clone();
        Ok(MorphismCandidate::new(
            "block_perm",
            shape.clone(),
            shape.clone(),
            Scope::All,
            move |x| {
                let blocks = perm
                    .iter()
                    .zip(&unitaries)
                    .map(|(&src, u)| u * x.block(src) * u.adjoint())
                    .collect();
                Element::new(target.clone(), blocks)
            },
        ))
    }

    /// `x ↦ x̄`, a conjugate-linear *-automorphism.
    pub fn entrywise_conjugate(shape: &AlgebraShape) -> Self {
        MorphismCandidate::new(
            "entrywise_conjugate",
            shape.clone(),
            shape.clone(),
            Scope::All,
            |x| Ok(x.conjugate_entries()),
        )
    }

    /// Keeps the diagonal of every block: unital and positive, not multiplicative.
    pub fn diagonal_part(shape: &AlgebraShape) -> Self {
        MorphismCandidate::new(
            "diagonal_part",
            shape.clone(),
            shape.clone(),
            Scope::All,
            |x| Ok(x.map_blocks(|m| CMat::from_diagonal(&m.diagonal()))),
        )
    }

    /// The same map, refusing inputs that are not normal.
    pub fn restrict_to_normals(&self, tol: &ToleranceConfig) -> Self {
        let inner = self.clone();
        let tol = *tol;
        MorphismCandidate::new(
            format!("{}|normals", self.name),
            self.domain.clone(),
            self.codomain.clone(),
            Scope::Normals,
            move |x| {
                if !x.is_normal(&tol) {
                    return Err(Error::domain("input is not normal"));
                }
                inner.evaluate(x)
            },
        )
    }
}

/// Serializable description of a [`MorphismCandidate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MorphismSpec {
    Identity,
    Conj {
        unitary: Element,
    },
    BlockPerm {
        perm: Vec<usize>,
        unitaries: Vec<Element>,
    },
    CounterexampleM2,
    EntrywiseConjugate,
    DiagonalPart,
}

impl MorphismSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Decode(e.to_string()))
    }

    /// Build the candidate on `shape`, rejecting specs written for another shape.
    pub fn build(&self, shape: &AlgebraShape, tol: &ToleranceConfig) -> Result<MorphismCandidate> {
        match self {
            MorphismSpec::Identity => Ok(MorphismCandidate::identity(shape)),
            MorphismSpec::EntrywiseConjugate => Ok(MorphismCandidate::entrywise_conjugate(shape)),
            MorphismSpec::DiagonalPart => Ok(MorphismCandidate::diagonal_part(shape)),
            MorphismSpec::Conj { unitary } => {
                if unitary.shape() != shape {
                    return Err(Error::structural(format!(
                        "unitary has shape {}, algebra is {shape}",
                        unitary.shape()
                    )));
                }
                MorphismCandidate::conjugation(unitary.clone(), tol)
            }
            MorphismSpec::BlockPerm { perm, unitaries } => {
                let mats = unitaries
                    .iter()
                    .map(|u| match u.blocks() {
                        [m] => Ok(m.clone()),
                        _ => Err(Error::structural(
                            "each block unitary must be a single-block element",
                        )),
                    })
                    .collect::<Result<Vec<_>>>()?;
                MorphismCandidate::block_permutation(shape, perm.clone(), mats, tol)
            }
            MorphismSpec::CounterexampleM2 => {
                let m2 = AlgebraShape::new(vec![2])?;
                if shape != &m2 {
                    return Err(Error::structural(format!(
                        "the counterexample lives on [2], not {shape}"
                    )));
                }
                Ok(checks::counterexample_combined(tol))
            }
        }
    }
}

/// `ActiveProj(A)` for a finite-dimensional `A`: membership tests and the action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActiveLatticeView {
    pub shape: AlgebraShape,
}

pub fn active_proj(shape: &AlgebraShape) -> ActiveLatticeView {
    ActiveLatticeView {
        shape: shape.clone(),
    }
}

/// Residuals of the view's own axioms on samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViewReport {
    pub samples: usize,
    pub symmetries_in_group: bool,
    pub unit_action: f64,
    pub composition: f64,
    pub ortho: f64,
    pub join: f64,
}

impl ActiveLatticeView {
    pub fn is_projection(&self, x: &Element, tol: &ToleranceConfig) -> bool {
        x.shape() == &self.shape && x.is_projection(tol)
    }

    /// Unitary with every block determinant squaring to 1.
    pub fn in_group(&self, x: &Element, tol: &ToleranceConfig) -> bool {
        x.shape() == &self.shape && x.is_unitary(tol) && sym_member(x, tol).unwrap_or(false)
    }

    pub fn act(&self, u: &Element, p: &Element, tol: &ToleranceConfig) -> Result<Element> {
        if !self.in_group(u, tol) {
            return Err(Error::domain("acting element is not in Sym(A)"));
        }
        conjugate(u, p, tol)
    }

    pub fn check(
        &self,
        samples: usize,
        sampler: &mut SeededSampler,
        tol: &ToleranceConfig,
    ) -> Result<ViewReport> {
        use crate::lattice::{join, ortho};
        let one = Element::identity(&self.shape);
        let mut report = ViewReport {
            samples,
            symmetries_in_group: true,
            unit_action: 0.0,
            composition: 0.0,
            ortho: 0.0,
            join: 0.0,
        };
        for _ in 0..samples {
            let p = sampler.random_projection_any_rank(&self.shape);
            let q = sampler.random_projection_any_rank(&self.shape);
            let s = &one - &p.scale_real(2.0);
            report.symmetries_in_group &= self.in_group(&s, tol);
            let u = random_sym(&self.shape, sampler);
            let v = random_sym(&self.shape, sampler);
            report.unit_action = report.unit_action.max(self.act(&one, &p, tol)?.dist(&p));
            let nested = self.act(&u, &self.act(&v, &p, tol)?, tol)?;
            report.composition =
                report
                    .composition
                    .max(nested.dist(&self.act(&(&u * &v), &p, tol)?));
            let up = self.act(&u, &p, tol)?;
            report.ortho = report
                .ortho
                .max(self.act(&u, &ortho(&p, tol)?, tol)?.dist(&ortho(&up, tol)?));
            let uq = self.act(&u, &q, tol)?;
            report.join = report.join.max(
                self.act(&u, &join(&p, &q, tol)?, tol)?
                    .dist(&join(&up, &uq, tol)?),
            );
        }
        Ok(report)
    }
}

/// A random element of `Sym(A)`: a determinant-one unitary, with the first
/// basis vector reflected in a random subset of blocks.
pub fn random_sym(shape: &AlgebraShape, sampler: &mut SeededSampler) -> Element {
    let u = sampler.random_det1_unitary(shape);
    let flips: Vec<bool> = (0..shape.block_count())
        .map(|_| sampler.random_index(2) == 1)
        .collect();
    let r = Element::from_fn(shape, |b, n| {
        CMat::from_fn(n, n, |i, j| match (i == j, flips[b] && i == 0) {
            (true, true) => -ONE,
            (true, false) => ONE,
            _ => ZERO,
        })
    });
    &u * &r
}

pub(crate) fn evaluator_error(sample: usize, source: Error) -> Error {
    Error::Evaluator {
        sample,
        source: Box::new(source),
    }
}

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(d: &[usize]) -> AlgebraShape {
        AlgebraShape::new(d.to_vec()).unwrap()
    }

    #[test]
    fn group_test_examples() {
        let t = ToleranceConfig::default();
        let comm = active_proj(&shape(&[1, 1, 1]));
        let pm = Element::central(&comm.shape, &[ONE, -ONE, ONE]).unwrap();
        assert!(comm.in_group(&pm, &t));
        let phase = Element::central(&comm.shape, &[ONE, c(0.0, 1.0), ONE]).unwrap();
        assert!(!comm.in_group(&phase, &t));
        let m2 = active_proj(&shape(&[2]));
        let swap = Element::new(
            shape(&[2]),
            vec![CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])],
        )
        .unwrap();
        assert!(m2.in_group(&swap, &t));
        let d = Element::new(
            shape(&[2]),
            vec![CMat::from_row_slice(2, 2, &[c(0.0, 1.0), ZERO, ZERO, ONE])],
        )
        .unwrap();
        assert!(!m2.in_group(&d, &t));
    }

    #[test]
    fn view_axioms_hold_on_samples() {
        let t = ToleranceConfig::default();
        let view = active_proj(&shape(&[2, 3]));
        let r = view.check(30, &mut SeededSampler::new(1), &t).unwrap();
        assert!(r.symmetries_in_group);
        assert!(r.unit_action < 1e-12 && r.composition < 1e-10 && r.ortho < 1e-12 && r.join < 1e-8);
    }

    #[test]
    fn random_sym_is_in_group() {
        let t = ToleranceConfig::default();
        let s = shape(&[1, 2, 3]);
        let mut smp = SeededSampler::new(4);
        for _ in 0..20 {
            assert!(active_proj(&s).in_group(&random_sym(&s, &mut smp), &t));
        }
    }

    #[test]
    fn candidates_check_shapes() {
        let t = ToleranceConfig::default();
        let s = shape(&[2, 2, 1]);
        let mut smp = SeededSampler::new(2);
        let u = smp.random_unitary(&shape(&[2]));
        let perm = MorphismCandidate::block_permutation(
            &s,
            vec![1, 0, 2],
            vec![
                u.block(0).clone(),
                CMat::identity(2, 2),
                CMat::identity(1, 1),
            ],
            &t,
        )
        .unwrap();
        let x = smp.random_element(&s);
        let y = perm.evaluate(&x).unwrap();
        assert!((y.block(1) - x.block(0)).norm() < 1e-14);
        assert!(perm.evaluate(&smp.random_element(&shape(&[2]))).is_err());
        assert!(MorphismCandidate::block_permutation(
            &s,
            vec![2, 1, 0],
            vec![CMat::identity(2, 2); 3],
            &t
        )
        .is_err());
        let spec = MorphismSpec::from_json(r#"{"kind":"identity"}"#).unwrap();
        assert_eq!(spec.build(&s, &t).unwrap().evaluate(&x).unwrap(), x);
        assert!(MorphismSpec::from_json(r#"{"kind":"warp"}"#).is_err());
        assert!(MorphismSpec::CounterexampleM2.build(&s, &t).is_err());
        let normals = MorphismCandidate::identity(&s).restrict_to_normals(&t);
        assert!(normals.evaluate(&x).is_err());
        assert!(normals.evaluate(&x.real_part()).is_ok());
    }
}
