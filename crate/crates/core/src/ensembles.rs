//! Finite ensembles, the Holevo quantity and the qc-state embedding.

use num_complex::Complex64;

use crate::entropic::entropy;
use crate::error::{argument, Result};
use crate::linalg::{trace_norm, ComplexMatrix, Rng, SubsystemShape};
use crate::state::DensityMatrix;

/// Label of the classical register in [`Ensemble::qc_state`].
pub const CLASSICAL_LABEL: &str = "X";

const PROBABILITY_TOL: f64 = 1e-10;

/// Finite list of `(p_i, ρ_i)` on one shape. Zero-probability items are kept.
#[derive(Clone, Debug)]
pub struct Ensemble {
    probabilities: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Ensemble {
    pub fn new(items: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        if items.is_empty() {
            return argument("ensemble needs at least one item");
        }
        let shape = items[0].1.shape().clone();
        if items.iter().any(|(_, s)| *s.shape() != shape) {
            return argument("ensemble states must share one shape");
        }
        if items
            .iter()
            .any(|(p, _)| !(*p >= -PROBABILITY_TOL) || !p.is_finite())
        {
            return argument("ensemble probabilities must be non-negative");
        }
        let total: f64 = items.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return argument(format!("ensemble probabilities sum to {total}"));
        }
        let (probabilities, states) = items.into_iter().map(|(p, s)| (p.max(0.0), s)).unzip();
        Ok(Self {
            probabilities,
            states,
        })
    }

    /// Uniform mixture of computational basis states `|0>, ..., |d-1>`.
    pub fn uniform_basis(shape: SubsystemShape) -> Self {
        let d = shape.total_dim();
        let items = (0..d)
            .map(|k| {
                (
                    1.0 / d as f64,
                    DensityMatrix::basis(shape.clone(), k).expect("index in range"),
                )
            })
            .collect();
        Self::new(items).expect("uniform basis ensemble is valid")
    }

    /// Random ensemble of `m` states, a mixture of pure and mixed ones.
    pub fn random(shape: SubsystemShape, m: usize, rng: &mut Rng) -> Self {
        let p = rng.random_probabilities(m);
        let d = shape.total_dim();
        let items = p
            .into_iter()
            .map(|pi| {
                let rank = rng.int_range(1, d);
                (
                    pi,
                    DensityMatrix::random_with_rank(shape.clone(), rank, rng),
                )
            })
            .collect();
        Self::new(items).expect("random ensemble is valid")
    }

    /// Random ensemble of `m` pure states.
    pub fn random_pure(shape: SubsystemShape, m: usize, rng: &mut Rng) -> Self {
        let p = rng.random_probabilities(m);
        let items = p
            .into_iter()
            .map(|pi| (pi, DensityMatrix::random_pure(shape.clone(), rng)))
            .collect();
        Self::new(items).expect("random ensemble is valid")
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn shape(&self) -> &SubsystemShape {
        self.states[0].shape()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.probabilities.iter().copied().zip(&self.states)
    }

    /// Applies `f` to every state, keeping the probabilities.
    pub fn map_states(&self, f: impl Fn(&DensityMatrix) -> Result<DensityMatrix>) -> Result<Self> {
        let states = self.states.iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(self.probabilities.iter().copied().zip(states).collect())
    }

    /// Appends zero-probability copies of the last state up to length `m`.
    pub fn padded(&self, m: usize) -> Self {
        let mut out = self.clone();
        while out.len() < m {
            out.probabilities.push(0.0);
            out.states.push(self.states[self.len() - 1].clone());
        }
        out
    }

    /// `ρ̄ = Σ p_i ρ_i`.
    pub fn average_state(&self) -> DensityMatrix {
        let n = self.states[0].dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for (p, s) in self.iter() {
            m += &s.matrix().scale(p);
        }
        DensityMatrix::from_trusted(m, self.shape().clone())
    }

    /// `χ = H(ρ̄) - Σ p_i H(ρ_i)`.
    pub fn holevo_quantity(&self) -> f64 {
        let avg = entropy(&self.average_state());
        avg - self
            .iter()
            .map(|(p, s)| if p > 0.0 { p * entropy(s) } else { 0.0 })
            .sum::<f64>()
    }

    /// `ω̂ = Σ p_i ρ_i ⊗ |i><i|` with the classical register labelled
    /// [`CLASSICAL_LABEL`] appended after the ensemble's own factors.
    pub fn qc_state(&self) -> Result<DensityMatrix> {
        self.qc_state_labelled(CLASSICAL_LABEL)
    }

    pub fn qc_state_labelled(&self, register: &str) -> Result<DensityMatrix> {
        let m = self.len();
        let reg = SubsystemShape::single(register, m)?;
        let shape = self.shape().join(&reg)?;
        let n = self.states[0].dim();
        let mut out = ComplexMatrix::zeros(n * m, n * m);
        for (i, (p, s)) in self.iter().enumerate() {
            let mut proj = ComplexMatrix::zeros(m, m);
            proj[(i, i)] = Complex64::new(1.0, 0.0);
            out += &s.matrix().scale(p).kron(&proj)?;
        }
        Ok(DensityMatrix::from_trusted(out, shape))
    }
}

/// `ε = ½ Σ ‖p_i ρ_i - q_i σ_i‖₁`, the shorter ensemble padded with
/// zero-probability items.
pub fn ensemble_distance(e: &Ensemble, f: &Ensemble) -> Result<f64> {
    if e.shape() != f.shape() {
        return argument(format!(
            "ensembles on different spaces: {} vs {}",
            e.shape(),
            f.shape()
        ));
    }
    let m = e.len().max(f.len());
    let (e, f) = (e.padded(m), f.padded(m));
    let total: f64 = e
        .iter()
        .zip(f.iter())
        .map(|((p, r), (q, s))| trace_norm(&(&r.matrix().scale(p) - &s.matrix().scale(q))))
        .sum();
    Ok(0.5 * total)
}
