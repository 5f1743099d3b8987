use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{AlgebraShape, CMat, Element, C64};
use crate::error::{Error, Result};

/// Reproducible source of random algebra elements.
///
/// Every draw consumes one counter value and uses a fresh ChaCha8 stream keyed
/// by `(seed, counter)`, so a sampler restored to the same pair replays the same
/// samples regardless of what was drawn before.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeededSampler {
    seed: u64,
    counter: u64,
}

impl SeededSampler {
    pub fn new(seed: u64) -> Self {
        SeededSampler { seed, counter: 0 }
    }

    pub fn with_counter(seed: u64, counter: u64) -> Self {
        SeededSampler { seed, counter }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// An independent sampler for a sub-task, derived from the current state.
    pub fn fork(&mut self) -> SeededSampler {
        let mut rng = self.next_rng();
        SeededSampler::new(rng.random())
    }

    fn next_rng(&mut self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.counter);
        self.counter = self.counter.wrapping_add(1);
        rng
    }

    pub fn random_real(&mut self, lo: f64, hi: f64) -> f64 {
        self.next_rng().random_range(lo..hi)
    }

    pub fn random_index(&mut self, upper: usize) -> usize {
        self.next_rng().random_range(0..upper)
    }

    /// Standard complex Gaussian.
    pub fn random_complex(&mut self) -> C64 {
        let mut rng = self.next_rng();
        gaussian(&mut rng)
    }

    pub fn random_unimodular(&mut self) -> C64 {
        let theta = self.random_real(-std::f64::consts::PI, std::f64::consts::PI);
        C64::from_polar(1.0, theta)
    }

    pub fn random_element(&mut self, shape: &AlgebraShape) -> Element {
        let mut rng = self.next_rng();
        Element::from_fn(shape, |_, n| gaussian_matrix(&mut rng, n))
    }

    pub fn random_selfadjoint(&mut self, shape: &AlgebraShape) -> Element {
        self.random_element(shape).real_part()
    }

    /// `u·diag(λ)·u*` with Haar `u` and complex Gaussian eigenvalues.
    pub fn random_normal(&mut self, shape: &AlgebraShape) -> Element {
        let u = self.random_unitary(shape);
        let mut rng = self.next_rng();
        let d = Element::from_fn(shape, |_, n| {
            CMat::from_fn(n, n, |i, j| {
                if i == j {
                    gaussian(&mut rng)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        });
        &(&u * &d) * &u.adjoint()
    }

    /// Haar-distributed unitary in each block: QR of a complex Gaussian matrix
    /// with the phases of `R`'s diagonal moved into `Q`.
    pub fn random_unitary(&mut self, shape: &AlgebraShape) -> Element {
        let mut rng = self.next_rng();
        Element::from_fn(shape, |_, n| haar_unitary(&mut rng, n))
    }

    /// Haar unitary rescaled to determinant 1 in every block.
    pub fn random_det1_unitary(&mut self, shape: &AlgebraShape) -> Element {
        self.random_unitary(shape).map_blocks(|u| {
            let n = u.nrows() as f64;
            let det = u.clone().determinant();
            let correction = C64::from_polar(1.0, -det.arg() / n);
            u * correction
        })
    }

    /// `u·diag(1,…,1,0,…,0)·u*` with `ranks[b]` ones in block `b`.
    pub fn random_projection(&mut self, shape: &AlgebraShape, ranks: &[usize]) -> Result<Element> {
        if ranks.len() != shape.block_count() {
            return Err(Error::domain(format!(
                "need one rank per block ({}), got {}",
                shape.block_count(),
                ranks.len()
            )));
        }
        if let Some(b) = (0..ranks.len()).find(|&b| ranks[b] > shape.dim(b)) {
            return Err(Error::domain(format!(
                "rank {} exceeds block {b} dimension {}",
                ranks[b],
                shape.dim(b)
            )));
        }
        let u = self.random_unitary(shape);
        let diag = Element::from_fn(shape, |b, n| {
            CMat::from_fn(n, n, |i, j| {
                if i == j && i < ranks[b] {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        });
        Ok((&(&u * &diag) * &u.adjoint()).hermitize())
    }

    /// Random projection whose rank in each block is uniform on `0..=n`.
    pub fn random_projection_any_rank(&mut self, shape: &AlgebraShape) -> Element {
        let ranks: Vec<usize> = shape
            .dims()
            .iter()
            .map(|&n| self.random_index(n + 1))
            .collect();
        self.random_projection(shape, &ranks)
            .expect("ranks drawn within block dimensions")
    }

    /// Random projection with rank in `1..n` in every block of size ≥ 2.
    pub fn random_proper_projection(&mut self, shape: &AlgebraShape) -> Element {
        let ranks: Vec<usize> = shape
            .dims()
            .iter()
            .map(|&n| {
                if n >= 2 {
                    1 + self.random_index(n - 1)
                } else {
                    self.random_index(2)
                }
            })
            .collect();
        self.random_projection(shape, &ranks)
            .expect("ranks drawn within block dimensions")
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = gaussian(rng);
        }
    }
    m
}

fn haar_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let qr = gaussian_matrix(rng, n).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ToleranceConfig;

    fn shape(d: &[usize]) -> AlgebraShape {
        AlgebraShape::new(d.to_vec()).unwrap()
    }

    #[test]
    fn same_seed_same_stream() {
        let s = shape(&[2, 3]);
        let mut a = SeededSampler::new(42);
        let mut b = SeededSampler::new(42);
        assert_eq!(a.random_unitary(&s), b.random_unitary(&s));
        assert_eq!(a.random_element(&s), b.random_element(&s));
        let mut c = SeededSampler::with_counter(42, 1);
        let mut d = SeededSampler::new(42);
        d.random_real(0.0, 1.0);
        assert_eq!(c.random_element(&s), d.random_element(&s));
    }

    #[test]
    fn unitaries_and_projections_pass_predicates() {
        let tol = ToleranceConfig::default();
        let s = shape(&[1, 2, 4]);
        let mut smp = SeededSampler::new(7);
        for _ in 0..20 {
            assert!(smp.random_unitary(&s).is_unitary(&tol));
            let p = smp.random_projection(&s, &[1, 1, 3]).unwrap();
            assert!(p.is_projection(&tol));
            let tr = p.block_trace();
            assert!((tr[0].re - 1.0).abs() < 1e-12);
            assert!((tr[1].re - 1.0).abs() < 1e-12);
            assert!((tr[2].re - 3.0).abs() < 1e-12);
            assert!(smp.random_normal(&s).is_normal(&tol));
            let u = smp.random_det1_unitary(&s);
            assert!(u
                .block_det()
                .iter()
                .all(|d| (d - C64::new(1.0, 0.0)).norm() < 1e-12));
        }
    }

    #[test]
    fn rank_out_of_range_is_domain_error() {
        let mut smp = SeededSampler::new(0);
        assert!(matches!(
            smp.random_projection(&shape(&[2]), &[3]),
            Err(Error::Domain(_))
        ));
        assert!(smp.random_projection(&shape(&[2]), &[1, 1]).is_err());
    }

    #[test]
    fn haar_phases_are_spread() {
        // The first diagonal entry of a Haar unitary has a uniformly distributed phase;
        // a sampler that forgot the phase correction would bias it.
        let s = shape(&[2]);
        let mut smp = SeededSampler::new(11);
        let mut mean = C64::new(0.0, 0.0);
        let count = 2000;
        for _ in 0..count {
            mean += smp.random_unitary(&s).block(0)[(0, 0)];
        }
        mean /= count as f64;
        assert!(mean.norm() < 0.05, "mean {mean}");
    }
}
