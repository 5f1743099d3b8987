//! Exact finite combinatorics: Boolean algebras and their Stone spectra,
//! orthomodular lattices, piecewise Boolean algebras and the colimit algebra
//! `F(B)`. All arithmetic is over exact complex rationals.

mod colimit;
mod morphism;
mod oml;
mod pcba;
mod structure;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use colimit::{
    colimit_f, colimit_report, proj_of_f, Colimit, ColimitReport, FBElement, Piece, ProjOfF,
};
pub use morphism::{morphism_sup_check, SupCheckReport, SupViolation};
pub use oml::{mo_lattice, FiniteOml};
pub use pcba::{non_transitive_example, oml_commeas, pcba_to_oml, FinitePcba};

use crate::error::Result;

/// Exact complex rational.
pub type Exact = Complex<BigRational>;

/// Carrier size above which exhaustive constructions refuse to run unless a
/// larger cap is passed explicitly.
pub const DEFAULT_CARRIER_CAP: usize = 64;

pub(crate) fn exact_to_string(z: &Exact) -> String {
    if z.im.is_zero() {
        z.re.to_string()
    } else if z.re.is_zero() {
        format!("{}i", z.im)
    } else if z.im < BigRational::zero() {
        format!("{}-{}i", z.re, -z.im.clone())
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// The powerset algebra on `atom_count` atoms; elements are bit sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteBooleanAlgebra {
    atom_count: usize,
}

/// `2ⁿ`.
///
/// # Panics
/// If `n ≥ 64`.
pub fn boolean_algebra(n: usize) -> FiniteBooleanAlgebra {
    FiniteBooleanAlgebra::new(n)
}

impl FiniteBooleanAlgebra {
    /// # Panics
    /// If `atom_count ≥ 64`.
    pub fn new(atom_count: usize) -> Self {
        assert!(atom_count < 64, "at most 63 atoms are supported");
        FiniteBooleanAlgebra { atom_count }
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn size(&self) -> u64 {
        1u64 << self.atom_count
    }

    pub fn top(&self) -> u64 {
        self.size() - 1
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.size()
    }

    pub fn complement(&self, x: u64) -> u64 {
        self.top() ^ x
    }

    pub fn join(&self, x: u64, y: u64) -> u64 {
        x | y
    }

    pub fn meet(&self, x: u64, y: u64) -> u64 {
        x & y
    }

    pub fn leq(&self, x: u64, y: u64) -> bool {
        x & !y == 0
    }

    /// `{}` for the empty set, `{0,2}` for atoms 0 and 2.
    pub fn element_name(&self, x: u64) -> String {
        let atoms: Vec<String> = (0..self.atom_count)
            .filter(|k| x >> k & 1 == 1)
            .map(|k| k.to_string())
            .collect();
        format!("{{{}}}", atoms.join(","))
    }

    /// The same algebra as an orthomodular lattice, elements in bit-set order.
    pub fn to_oml(&self) -> Result<FiniteOml> {
        self.to_oml_with_cap(DEFAULT_CARRIER_CAP)
    }

    pub fn to_oml_with_cap(&self, cap: usize) -> Result<FiniteOml> {
        if self.size() > cap as u64 {
            return Err(crate::error::Error::domain(format!(
                "2^{} exceeds the carrier cap of {cap}",
                self.atom_count
            )));
        }
        let names = self.elements().map(|x| self.element_name(x)).collect();
        let leq: Vec<(usize, usize)> = self
            .elements()
            .flat_map(|x| self.elements().map(move |y| (x, y)))
            .filter(|&(x, y)| x != y && self.leq(x, y))
            .map(|(x, y)| (x as usize, y as usize))
            .collect();
        let ortho = self
            .elements()
            .map(|x| self.complement(x) as usize)
            .collect();
        FiniteOml::with_cap(names, &leq, ortho, cap)
    }
}

/// The point of the Stone spectrum sending `b` to whether `atom ≤ b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Character {
    pub atom: usize,
}

impl Character {
    pub fn eval(&self, b: u64) -> bool {
        b >> self.atom & 1 == 1
    }
}

/// One character per atom.
pub fn stone_spectrum(b: &FiniteBooleanAlgebra) -> Vec<Character> {
    (0..b.atom_count).map(|atom| Character { atom }).collect()
}

/// `ℂ^atoms` with its projections found by exact computation.
#[derive(Clone, Debug, PartialEq)]
pub struct FuncAlgebra {
    pub dimension: usize,
    /// Each projection as its vector of values on the characters.
    pub projections: Vec<Vec<Exact>>,
}

/// Continuous functions on the Stone spectrum.
pub fn func_algebra(b: &FiniteBooleanAlgebra) -> FuncAlgebra {
    let dimension = b.atom_count;
    let zero_one = [Exact::zero(), Exact::one()];
    let projections = (0..1u64 << dimension)
        .map(|bits| {
            (0..dimension)
                .map(|k| zero_one[(bits >> k & 1) as usize].clone())
                .collect::<Vec<_>>()
        })
        .filter(|f| f.iter().all(|v| v * v == *v && v.conj() == *v))
        .collect();
    FuncAlgebra {
        dimension,
        projections,
    }
}

impl FuncAlgebra {
    /// Whether the projections, ordered by `f ≤ g ⇔ fg = f` with complement `1 − f`,
    /// form a lattice isomorphic to `b` under `f ↦ {atoms where f = 1}`.
    pub fn projections_match(&self, b: &FiniteBooleanAlgebra) -> bool {
        if self.dimension != b.atom_count || self.projections.len() as u64 != b.size() {
            return false;
        }
        let to_set = |f: &Vec<Exact>| {
            f.iter()
                .enumerate()
                .filter(|(_, v)| v.is_one())
                .fold(0u64, |acc, (k, _)| acc | 1 << k)
        };
        let sets: Vec<u64> = self.projections.iter().map(to_set).collect();
        let mut sorted = sets.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() as u64 != b.size() {
            return false;
        }
        let below = |f: &Vec<Exact>, g: &Vec<Exact>| f.iter().zip(g).all(|(x, y)| x * y == *x);
        let complement = |f: &Vec<Exact>| f.iter().map(|v| Exact::one() - v).collect::<Vec<_>>();
        self.projections.iter().zip(&sets).all(|(f, &sf)| {
            to_set(&complement(f)) == b.complement(sf)
                && self
                    .projections
                    .iter()
                    .zip(&sets)
                    .all(|(g, &sg)| below(f, g) == b.leq(sf, sg))
        })
    }
}

/// Stone data of a Boolean algebra and the round-trip verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoneReport {
    pub atoms: usize,
    pub elements: u64,
    pub characters: usize,
    pub function_algebra_dimension: usize,
    pub projections: usize,
    pub isomorphic: bool,
}

pub fn stone_report(b: &FiniteBooleanAlgebra) -> StoneReport {
    let func = func_algebra(b);
    StoneReport {
        atoms: b.atom_count,
        elements: b.size(),
        characters: stone_spectrum(b).len(),
        function_algebra_dimension: func.dimension,
        projections: func.projections.len(),
        isomorphic: func.projections_match(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stone_examples() {
        assert_eq!(stone_spectrum(&boolean_algebra(2)).len(), 2);
        assert_eq!(stone_spectrum(&boolean_algebra(1)).len(), 1);
        let b5 = boolean_algebra(5);
        assert_eq!(b5.size(), 32);
        assert_eq!(stone_spectrum(&b5).len(), 5);
        let chi = stone_spectrum(&b5)[3];
        assert!(chi.eval(0b01000) && !chi.eval(0b10111));
    }

    #[test]
    fn func_algebra_examples() {
        let f3 = func_algebra(&boolean_algebra(3));
        assert_eq!((f3.dimension, f3.projections.len()), (3, 8));
        let f1 = func_algebra(&boolean_algebra(1));
        assert_eq!((f1.dimension, f1.projections.len()), (1, 2));
        for n in 0..=6 {
            let b = boolean_algebra(n);
            assert!(stone_report(&b).isomorphic, "2^{n}");
        }
        assert!(!func_algebra(&boolean_algebra(2)).projections_match(&boolean_algebra(3)));
    }

    #[test]
    fn zero_atoms_is_one_element() {
        let b = boolean_algebra(0);
        assert_eq!(b.size(), 1);
        let p = b.to_oml().unwrap();
        assert_eq!(p.size(), 1);
        assert_eq!(p.bottom(), p.top());
    }

    #[test]
    fn boolean_lattices_are_recognized() {
        for n in 0..=4 {
            let p = boolean_algebra(n).to_oml().unwrap();
            assert!(p.is_distributive());
            let (b, by_mask) = p.as_boolean().unwrap();
            assert_eq!(b.atom_count(), n);
            assert_eq!(by_mask.len(), 1 << n);
        }
        assert!(boolean_algebra(7).to_oml().is_err());
        assert_eq!(boolean_algebra(7).to_oml_with_cap(128).unwrap().size(), 128);
    }

    #[test]
    fn exact_formatting() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(
            exact_to_string(&Exact::new(half.clone(), BigRational::zero())),
            "1/2"
        );
        assert_eq!(
            exact_to_string(&Exact::new(BigRational::zero(), half.clone())),
            "1/2i"
        );
        assert_eq!(
            exact_to_string(&Exact::new(half.clone(), -half)),
            "1/2-1/2i"
        );
    }
}
