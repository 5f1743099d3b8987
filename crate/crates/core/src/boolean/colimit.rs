//! The colimit algebra `F(B)` of a finite piecewise Boolean algebra and its
//! projections.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::pcba::FinitePcba;
use super::structure::Block;
use super::{exact_to_string, Exact};
use crate::error::{Error, Result};

/// An element of `F(B)` in normal form: a partition of unity by elements of
/// `B` with a distinct exact value on each part. The parts generate the least
/// Boolean subalgebra the element lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FBElement {
    parts: Vec<(usize, Exact)>,
}

impl FBElement {
    /// `(element of B, value)` pairs sorted by element index.
    pub fn parts(&self) -> &[(usize, Exact)] {
        &self.parts
    }

    /// The elements of `B` generating the support subalgebra.
    pub fn support(&self) -> Vec<usize> {
        self.parts.iter().map(|(e, _)| *e).collect()
    }

    /// Values in `{0, 1}`.
    pub fn is_projection(&self) -> bool {
        self.parts.iter().all(|(_, v)| v.is_zero() || v.is_one())
    }
}

/// Handle for computing in `F(B)`.
#[derive(Clone, Copy, Debug)]
pub struct Colimit<'a> {
    base: &'a FinitePcba,
}

/// Construct the handle for `F(B)`.
pub fn colimit_f(b: &FinitePcba) -> Colimit<'_> {
    Colimit { base: b }
}

impl<'a> Colimit<'a> {
    pub fn base(&self) -> &'a FinitePcba {
        self.base
    }

    fn canonical(&self, block: &Block, parts: impl IntoIterator<Item = (u64, Exact)>) -> FBElement {
        let mut by_value: Vec<(Exact, u64)> = Vec::new();
        for (bits, value) in parts {
            if bits == 0 {
                continue;
            }
            match by_value.iter_mut().find(|(v, _)| *v == value) {
                Some((_, acc)) => *acc |= bits,
                None => by_value.push((value, bits)),
            }
        }
        let mut parts: Vec<(usize, Exact)> = by_value
            .into_iter()
            .map(|(v, bits)| (block.by_mask[&bits], v))
            .collect();
        parts.sort_by_key(|(e, _)| *e);
        FBElement { parts }
    }

    /// `z · 1`.
    pub fn scalar(&self, z: Exact) -> FBElement {
        let block = &self.base.block_structures()[0];
        self.canonical(block, [(block.full(), z)])
    }

    /// The element taking value `vᵢ` on `eᵢ`, for pairwise orthogonal,
    /// commeasurable `eᵢ` whose join is `1`.
    pub fn from_parts(&self, parts: &[(usize, Exact)]) -> Result<FBElement> {
        let support: Vec<usize> = parts.iter().map(|(e, _)| *e).collect();
        if let Some(&e) = support.iter().find(|&&e| e >= self.base.size()) {
            return Err(Error::domain(format!("element index {e} is out of range")));
        }
        let block = self
            .base
            .block_containing(&support)
            .ok_or_else(|| Error::domain("parts are not pairwise commeasurable"))?;
        let mut covered = 0u64;
        for &e in &support {
            let bits = block.mask[&e];
            if covered & bits != 0 {
                return Err(Error::domain(format!(
                    "part {} overlaps another part",
                    self.base.name(e)
                )));
            }
            covered |= bits;
        }
        if covered != block.full() {
            return Err(Error::domain("parts do not cover 1"));
        }
        Ok(self.canonical(block, parts.iter().map(|(e, v)| (block.mask[e], v.clone()))))
    }

    /// Commeasurable iff the supports jointly are pairwise commeasurable in `B`.
    pub fn commeasurable(&self, a: &FBElement, b: &FBElement) -> bool {
        let mut support = a.support();
        support.extend(b.support());
        self.base.pairwise_commeasurable(&support)
    }

    fn combine(
        &self,
        a: &FBElement,
        b: &FBElement,
        op: impl Fn(&Exact, &Exact) -> Exact,
    ) -> Result<FBElement> {
        let mut support = a.support();
        support.extend(b.support());
        let block = self
            .base
            .block_containing(&support)
            .ok_or_else(|| Error::domain("operands are not commeasurable"))?;
        if block.atoms.is_empty() {
            return Ok(FBElement { parts: Vec::new() });
        }
        let mut parts = Vec::new();
        for (ea, va) in &a.parts {
            for (eb, vb) in &b.parts {
                parts.push((block.mask[ea] & block.mask[eb], op(va, vb)));
            }
        }
        Ok(self.canonical(block, parts))
    }

    pub fn add(&self, a: &FBElement, b: &FBElement) -> Result<FBElement> {
        self.combine(a, b, |x, y| x + y)
    }

    pub fn mul(&self, a: &FBElement, b: &FBElement) -> Result<FBElement> {
        self.combine(a, b, |x, y| x * y)
    }

    pub fn scale(&self, z: &Exact, a: &FBElement) -> FBElement {
        self.map_values(a, |v| z * v)
    }

    pub fn adjoint(&self, a: &FBElement) -> FBElement {
        self.map_values(a, |v| v.conj())
    }

    fn map_values(&self, a: &FBElement, f: impl Fn(&Exact) -> Exact) -> FBElement {
        let block = self
            .base
            .block_containing(&a.support())
            .expect("a normal form lives in some block");
        self.canonical(block, a.parts.iter().map(|(e, v)| (block.mask[e], f(v))))
    }

    /// All projections of `F(B)`, ordered by the element of `B` they correspond to.
    pub fn projections(&self) -> Vec<FBElement> {
        let mut found: BTreeMap<usize, FBElement> = BTreeMap::new();
        for block in self.base.block_structures() {
            let full = block.full();
            for bits in 0..=full {
                let p = self.canonical(block, [(bits, Exact::one()), (full ^ bits, Exact::zero())]);
                found.entry(block.by_mask[&bits]).or_insert(p);
            }
        }
        found.into_values().collect()
    }

    /// The element of `B` on which a projection takes the value 1.
    pub fn eta(&self, rho: &FBElement) -> Option<usize> {
        if !rho.is_projection() {
            return None;
        }
        Some(
            rho.parts
                .iter()
                .find(|(_, v)| v.is_one())
                .map(|(e, _)| *e)
                .unwrap_or(self.base.bottom()),
        )
    }

    /// The indicator of `b` in the subalgebra `{0, b, b', 1}`.
    pub fn eta_inverse(&self, b: usize) -> FBElement {
        let block = self
            .base
            .block_containing(&[b])
            .expect("every element lies in a block");
        let bits = block.mask[&b];
        self.canonical(
            block,
            [(bits, Exact::one()), (block.full() ^ bits, Exact::zero())],
        )
    }
}

/// Outcome of rebuilding `B` from the projections of `F(B)`.
#[derive(Clone, Debug)]
pub struct ProjOfF {
    pub projections: Vec<FBElement>,
    pub pcba: FinitePcba,
    /// `forward[k]` is the element of `B` matched with projection `k`.
    pub forward: Vec<usize>,
    /// `backward[b]` is the projection matched with `b`.
    pub backward: Vec<usize>,
    pub isomorphic: bool,
}

/// Collect the projections of `F(B)` into a piecewise Boolean algebra and
/// test the bijection `ρ ↦ η(ρ)` against `B`.
pub fn proj_of_f(b: &FinitePcba) -> Result<ProjOfF> {
    let f = colimit_f(b);
    let projections = f.projections();
    let n = projections.len();
    let index_of = |rho: &FBElement| projections.iter().position(|p| p == rho);
    let one = f.scalar(Exact::one());
    let minus_one = -Exact::one();
    let mut commeas = Vec::new();
    let mut leq = Vec::new();
    let mut complement = Vec::with_capacity(n);
    for (i, p) in projections.iter().enumerate() {
        let c = f.add(&one, &f.scale(&minus_one, p))?;
        complement.push(
            index_of(&c)
                .ok_or_else(|| Error::Numeric("1 − p is not a listed projection".into()))?,
        );
        for (j, q) in projections.iter().enumerate() {
            if f.commeasurable(p, q) {
                commeas.push((i, j));
                if f.mul(p, q)? == *p {
                    leq.push((i, j));
                }
            }
        }
    }
    let names = projections
        .iter()
        .map(|p| {
            format!(
                "[{}]",
                b.name(f.eta(p).expect("listed elements are projections"))
            )
        })
        .collect();
    let pcba = FinitePcba::with_cap(names, &commeas, complement, &leq, n.max(b.size()))?;
    let forward: Vec<usize> = projections
        .iter()
        .map(|p| f.eta(p).expect("projection"))
        .collect();
    let backward: Vec<usize> = (0..b.size())
        .map(|x| index_of(&f.eta_inverse(x)).unwrap_or(usize::MAX))
        .collect();
    let bijective = n == b.size()
        && (0..n).all(|k| backward.get(forward[k]) == Some(&k))
        && (0..b.size()).all(|x| forward.get(backward[x]) == Some(&x));
    let isomorphic = bijective
        && (0..n).all(|i| {
            forward[pcba.complement(i)] == b.complement(forward[i])
                && (0..n).all(|j| {
                    pcba.commeasurable(i, j) == b.commeasurable(forward[i], forward[j])
                        && pcba.leq(i, j) == b.leq(forward[i], forward[j])
                })
        });
    Ok(ProjOfF {
        projections,
        pcba,
        forward,
        backward,
        isomorphic,
    })
}

/// Summary of `F(B)`: its maximal commutative pieces and projections.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColimitReport {
    pub elements: usize,
    pub pieces: Vec<Piece>,
    pub projections: Vec<String>,
    pub scalars_commeasurable_with_all: bool,
    pub canonical_form_idempotent: bool,
    /// `F(B)` is a single commutative algebra `ℂⁿ`.
    pub commutative: bool,
}

/// One maximal commutative subalgebra `ℂ^atoms` of `F(B)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub atoms: Vec<String>,
    pub dimension: usize,
}

pub fn colimit_report(b: &FinitePcba) -> Result<ColimitReport> {
    let f = colimit_f(b);
    let projections = f.projections();
    let scalar = f.scalar(Exact::new(
        BigRational::from_integer(2.into()),
        BigRational::from_integer((-3).into()),
    ));
    let idempotent = projections.iter().all(|p| {
        f.from_parts(p.parts()).map(|q| q == *p).unwrap_or(false)
            && f.mul(p, p).map(|q| q == *p).unwrap_or(false)
    });
    let pieces: Vec<Piece> = b
        .block_atoms()
        .into_iter()
        .map(|atoms| Piece {
            dimension: atoms.len(),
            atoms: atoms.iter().map(|&a| b.name(a).to_string()).collect(),
        })
        .collect();
    Ok(ColimitReport {
        elements: b.size(),
        commutative: pieces.len() == 1,
        pieces,
        projections: projections
            .iter()
            .map(|p| {
                p.parts()
                    .iter()
                    .map(|(e, v)| format!("{}:{}", b.name(*e), exact_to_string(v)))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect(),
        scalars_commeasurable_with_all: projections.iter().all(|p| f.commeasurable(&scalar, p)),
        canonical_form_idempotent: idempotent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::{boolean_algebra, mo_lattice, oml_commeas};

    fn q(n: i64) -> Exact {
        Exact::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    #[test]
    fn boolean_base_is_single_piece() {
        let b = oml_commeas(&boolean_algebra(3).to_oml().unwrap()).unwrap();
        let report = colimit_report(&b).unwrap();
        assert!(report.commutative);
        assert_eq!(report.pieces[0].dimension, 3);
        assert_eq!(report.projections.len(), 8);
    }

    #[test]
    fn mo2_is_two_planes_glued_along_scalars() {
        let b = oml_commeas(&mo_lattice(2)).unwrap();
        let f = colimit_f(&b);
        let report = colimit_report(&b).unwrap();
        assert!(!report.commutative);
        assert_eq!(
            report
                .pieces
                .iter()
                .map(|p| p.dimension)
                .collect::<Vec<_>>(),
            vec![2, 2]
        );
        assert!(report.scalars_commeasurable_with_all && report.canonical_form_idempotent);
        let (a, ac, bb) = (
            b.index_of("a").unwrap(),
            b.index_of("a'").unwrap(),
            b.index_of("b").unwrap(),
        );
        let x = f.from_parts(&[(a, q(3)), (ac, q(-1))]).unwrap();
        let y = f.eta_inverse(bb);
        assert!(!f.commeasurable(&x, &y));
        assert!(f.add(&x, &y).is_err());
        let s = f.scalar(q(5));
        assert_eq!(
            f.add(&x, &s).unwrap(),
            f.from_parts(&[(a, q(8)), (ac, q(4))]).unwrap()
        );
        // equal values collapse to the scalar
        assert_eq!(
            f.from_parts(&[(a, q(2)), (ac, q(2))]).unwrap(),
            f.scalar(q(2))
        );
        assert!(f.from_parts(&[(a, q(1))]).is_err());
        assert!(f.from_parts(&[(a, q(1)), (bb, q(0))]).is_err());
    }

    #[test]
    fn equivalence_on_small_family() {
        for n in 0..=5 {
            let b = oml_commeas(&boolean_algebra(n).to_oml().unwrap()).unwrap();
            let r = proj_of_f(&b).unwrap();
            assert!(r.isomorphic, "2^{n}");
            assert_eq!(r.projections.len(), 1 << n);
        }
        for (k, count) in [(1, 4), (2, 6), (3, 8), (4, 10)] {
            let b = oml_commeas(&mo_lattice(k)).unwrap();
            let r = proj_of_f(&b).unwrap();
            assert!(r.isomorphic, "MO{k}");
            assert_eq!(r.projections.len(), count);
        }
        let r = proj_of_f(&crate::boolean::non_transitive_example()).unwrap();
        assert!(r.isomorphic);
    }
}
