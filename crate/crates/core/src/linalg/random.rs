use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::{vec_norm, ComplexMatrix};
use crate::error::{argument, Result};

/// Seeded, reproducible random source.
///
/// Backed by a counter-based stream cipher so that child generators derived
/// from `(seed, index)` are independent of how many values the parent drew.
#[derive(Clone, Debug)]
pub struct Rng {
    seed: u64,
    inner: ChaCha8Rng,
    spare_gaussian: Option<f64>,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
            spare_gaussian: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Seed of the `index`-th child stream.
    pub fn child_seed(seed: u64, index: u64) -> u64 {
        // splitmix64 finalizer over (seed, index)
        let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn child(&self, index: u64) -> Self {
        Self::new(Self::child_seed(self.seed, index))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_range(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.inner.next_u64() % (hi - lo + 1) as u64) as usize
    }

    /// Standard normal sample (Box–Muller).
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare_gaussian.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        self.spare_gaussian = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Circularly symmetric complex normal with unit variance.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(self.gaussian() * s, self.gaussian() * s)
    }

    pub fn ginibre(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_gaussian())
    }

    pub fn random_hermitian(&mut self, n: usize) -> ComplexMatrix {
        self.ginibre(n, n).hermitian_part()
    }

    /// Haar-random unit vector.
    pub fn random_pure(&mut self, dim: usize) -> Vec<Complex64> {
        loop {
            let mut v: Vec<Complex64> = (0..dim).map(|_| self.complex_gaussian()).collect();
            let n = vec_norm(&v);
            if n > 1e-12 {
                v.iter_mut().for_each(|z| *z /= n);
                return v;
            }
        }
    }

    /// Random full-rank density matrix `G G^dagger / Tr` with square Ginibre `G`.
    pub fn random_state_matrix(&mut self, dim: usize) -> ComplexMatrix {
        self.random_state_matrix_rank(dim, dim)
    }

    /// Random density matrix of rank at most `rank` (Ginibre `dim x rank`).
    pub fn random_state_matrix_rank(&mut self, dim: usize, rank: usize) -> ComplexMatrix {
        let g = self.ginibre(dim, rank.max(1));
        let rho = g.matmul_adjoint(&g);
        let tr = rho.trace().re;
        rho.scale(1.0 / tr).hermitian_part()
    }

    /// Random isometry `din -> dout` from the QR factor of a Gaussian matrix.
    pub fn random_isometry(&mut self, din: usize, dout: usize) -> Result<ComplexMatrix> {
        if dout < din {
            return argument(format!("isometry needs dout >= din, got {din} -> {dout}"));
        }
        loop {
            let g = self.ginibre(dout, din);
            if let Some(q) = orthonormalize_columns(&g) {
                return Ok(q);
            }
        }
    }

    /// Probability vector drawn uniformly from the simplex.
    pub fn random_probabilities(&mut self, m: usize) -> Vec<f64> {
        let w: Vec<f64> = (0..m).map(|_| -(1.0 - self.uniform()).ln()).collect();
        let s: f64 = w.iter().sum();
        w.iter().map(|x| x / s).collect()
    }
}

/// Q factor of a thin QR decomposition by twice-iterated modified Gram–Schmidt;
/// `None` when the columns are numerically dependent.
pub fn orthonormalize_columns(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let mut cols: Vec<Vec<Complex64>> = (0..m.cols()).map(|j| m.column(j)).collect();
    for j in 0..cols.len() {
        for _ in 0..2 {
            for k in 0..j {
                let proj: Complex64 = cols[k]
                    .iter()
                    .zip(&cols[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let (head, tail) = cols.split_at_mut(j);
                tail[0]
                    .iter_mut()
                    .zip(&head[k])
                    .for_each(|(y, x)| *y -= proj * x);
            }
        }
        let n = vec_norm(&cols[j]);
        if n < 1e-10 {
            return None;
        }
        cols[j].iter_mut().for_each(|z| *z /= n);
    }
    ComplexMatrix::from_columns(&cols).ok()
}
