use num_complex::Complex64;

use crate::error::{argument, contract, Result};
use crate::linalg::{
    hermitian_eig, partial_trace, permute, tensor, trace_norm, vec_norm, ComplexMatrix, Rng,
    SubsystemShape,
};

/// Tolerance on Hermiticity, negativity and trace deviation of a state.
pub const STATE_TOL: f64 = 1e-10;

/// Positive unit-trace Hermitian operator on a labelled tensor-product space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    shape: SubsystemShape,
}

impl DensityMatrix {
    /// Validates and wraps `matrix`. The stored matrix is the exact Hermitian part.
    pub fn new(matrix: ComplexMatrix, shape: SubsystemShape) -> Result<Self> {
        let n = shape.total_dim();
        if matrix.rows() != n || matrix.cols() != n {
            return argument(format!(
                "{}x{} matrix does not match shape {shape}",
                matrix.rows(),
                matrix.cols()
            ));
        }
        let defect = matrix.hermiticity_defect();
        if defect > STATE_TOL {
            return contract(format!("state is not Hermitian (defect {defect:.3e})"));
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > STATE_TOL {
            return contract(format!("state trace is {trace}, expected 1"));
        }
        let matrix = matrix.hermitian_part();
        let min = hermitian_eig(&matrix)?.min();
        if min < -STATE_TOL {
            return contract(format!("state has negative eigenvalue {min:.3e}"));
        }
        Ok(Self { matrix, shape })
    }

    /// Wraps an operator known to be a state by construction (outputs of
    /// channels, marginals, mixtures). Only the shape is checked.
    pub(crate) fn from_trusted(matrix: ComplexMatrix, shape: SubsystemShape) -> Self {
        debug_assert_eq!(matrix.rows(), shape.total_dim());
        Self {
            matrix: matrix.hermitian_part(),
            shape,
        }
    }

    pub fn from_pure(psi: &[Complex64], shape: SubsystemShape) -> Result<Self> {
        let n = vec_norm(psi);
        if (n - 1.0).abs() > 1e-10 {
            return contract(format!("state vector has norm {n}"));
        }
        Self::new(ComplexMatrix::outer(psi, psi), shape)
    }

    pub fn maximally_mixed(shape: SubsystemShape) -> Self {
        let n = shape.total_dim();
        Self::from_trusted(ComplexMatrix::identity(n).scale(1.0 / n as f64), shape)
    }

    /// Computational basis projector `|k><k|`.
    pub fn basis(shape: SubsystemShape, k: usize) -> Result<Self> {
        let n = shape.total_dim();
        if k >= n {
            return argument(format!("basis index {k} out of range for dimension {n}"));
        }
        let mut m = ComplexMatrix::zeros(n, n);
        m[(k, k)] = Complex64::new(1.0, 0.0);
        Ok(Self::from_trusted(m, shape))
    }

    /// Random full-rank state (Ginibre ensemble).
    pub fn random(shape: SubsystemShape, rng: &mut Rng) -> Self {
        let m = rng.random_state_matrix(shape.total_dim());
        Self::from_trusted(m, shape)
    }

    /// Random state of rank at most `rank`.
    pub fn random_with_rank(shape: SubsystemShape, rank: usize, rng: &mut Rng) -> Self {
        let m = rng.random_state_matrix_rank(shape.total_dim(), rank);
        Self::from_trusted(m, shape)
    }

    pub fn random_pure(shape: SubsystemShape, rng: &mut Rng) -> Self {
        let v = rng.random_pure(shape.total_dim());
        Self::from_trusted(ComplexMatrix::outer(&v, &v), shape)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn shape(&self) -> &SubsystemShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Reduced state on `keep` (in this state's factor order).
    pub fn marginal<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        let m = partial_trace(&self.matrix, &self.shape, keep)?;
        Ok(Self::from_trusted(m, self.shape.restrict(keep)?))
    }

    /// `self ⊗ other` on the joined shape.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let shape = self.shape.join(&other.shape)?;
        Ok(Self::from_trusted(
            tensor(&self.matrix, &other.matrix)?,
            shape,
        ))
    }

    /// Same state with tensor factors reordered.
    pub fn permuted<S: AsRef<str>>(&self, order: &[S]) -> Result<Self> {
        let (m, shape) = permute(&self.matrix, &self.shape, order)?;
        Ok(Self::from_trusted(m, shape))
    }

    /// Same operator with a new factorization of equal total dimension.
    pub fn reshaped(&self, shape: SubsystemShape) -> Result<Self> {
        if shape.total_dim() != self.dim() {
            return argument(format!("cannot reshape {} into {shape}", self.shape));
        }
        Ok(Self::from_trusted(self.matrix.clone(), shape))
    }

    /// Convex combination `λ self + (1-λ) other`.
    pub fn mix(&self, lambda: f64, other: &Self) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return argument(format!("mixing weight {lambda} outside [0, 1]"));
        }
        self.same_shape(other)?;
        let m = &self.matrix.scale(lambda) + &other.matrix.scale(1.0 - lambda);
        Ok(Self::from_trusted(m, self.shape.clone()))
    }

    /// `½‖self - other‖₁`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        self.same_shape(other)?;
        Ok(0.5 * trace_norm(&(&self.matrix - &other.matrix)))
    }

    pub(crate) fn same_shape(&self, other: &Self) -> Result<()> {
        if self.shape != other.shape {
            return argument(format!("shape mismatch: {} vs {}", self.shape, other.shape));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_operators() {
        let shape = SubsystemShape::single("A", 2).unwrap();
        assert!(DensityMatrix::new(ComplexMatrix::identity(2), shape.clone()).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::from_diag(&[1.5, -0.5]), shape.clone()).is_err());
        assert!(
            DensityMatrix::new(ComplexMatrix::identity(3).scale(1.0 / 3.0), shape.clone()).is_err()
        );
        assert!(DensityMatrix::new(ComplexMatrix::from_diag(&[0.75, 0.25]), shape).is_ok());
    }

    #[test]
    fn random_states_validate() {
        let mut rng = Rng::new(9);
        let shape = SubsystemShape::new(&[("A", 2), ("B", 3)]).unwrap();
        for _ in 0..10 {
            let rho = DensityMatrix::random(shape.clone(), &mut rng);
            DensityMatrix::new(rho.matrix().clone(), shape.clone()).unwrap();
        }
    }

    #[test]
    fn trace_distance_is_bounded() {
        let mut rng = Rng::new(10);
        let shape = SubsystemShape::single("A", 3).unwrap();
        for _ in 0..100 {
            let a = DensityMatrix::random_pure(shape.clone(), &mut rng);
            let b = DensityMatrix::random_with_rank(shape.clone(), 2, &mut rng);
            let t = a.trace_distance(&b).unwrap();
            assert!((0.0..=1.0 + 1e-12).contains(&t));
        }
    }
}
