//! Hermitian spectral decomposition by cyclic complex Jacobi rotations, and
//! the norms and spectral functions built on it.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{argument, contract, Result};

/// Largest tolerated entry of `|m - m^dagger|` for inputs declared Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Default relative rank tolerance for [`support_dim`].
pub const RANK_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-13;

/// Eigen-decomposition `m = U diag(values) U^dagger` with eigenvalues sorted
/// in descending order.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    /// Unitary whose columns are the eigenvectors.
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// `U diag(f(λ)) U^dagger`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let u = &self.vectors;
        let fl: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in fl.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let a = u[(i, k)] * w;
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * u[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Fails with a contract error when `m` deviates from Hermiticity by more
/// than [`HERMITIAN_TOL`] in any entry.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    if !m.is_square() {
        return argument(format!(
            "eigendecomposition of non-square {}x{} matrix",
            m.rows(),
            m.cols()
        ));
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return contract(format!("matrix is not Hermitian (defect {defect:.3e})"));
    }
    Ok(jacobi(m.hermitian_part()))
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(mut a: ComplexMatrix) -> HermitianEig {
    let n = a.rows();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    if n > 1 && scale > 0.0 {
        let threshold = OFF_DIAGONAL_TOL * scale;
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_mass(&a) < threshold {
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    HermitianEig { values, vectors }
}

/// Annihilates `a[p][q]` with the unitary `G = diag-phase · real rotation`
/// acting on coordinates (p, q): `a <- G^dagger a G`, `v <- v G`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let n = a.rows();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / r; // e^{i phi}
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    if m.is_square() && m.is_hermitian(HERMITIAN_TOL) {
        return jacobi(m.hermitian_part())
            .values
            .iter()
            .map(|l| l.abs())
            .sum();
    }
    singular_values(m).iter().sum()
}

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    let gram = if m.rows() < m.cols() {
        m.matmul_adjoint(m)
    } else {
        m.adjoint_matmul(m)
    };
    jacobi(gram.hermitian_part()).max().max(0.0).sqrt()
}

/// Singular values in descending order (length `min(rows, cols)`).
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let gram = if m.rows() < m.cols() {
        m.matmul_adjoint(m)
    } else {
        m.adjoint_matmul(m)
    };
    jacobi(gram.hermitian_part())
        .values
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .collect()
}

/// Unitary factor `W` of the polar decomposition `m = W |m|` of a square matrix,
/// i.e. the unitary maximizing `Re Tr(W^dagger m)`.
pub fn polar_unitary(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return argument("polar decomposition needs a square matrix");
    }
    let n = m.rows();
    // m = P Σ Q^dagger with Q from eig(m^dagger m); P columns m q_k / σ_k.
    let eig = jacobi(m.adjoint_matmul(m).hermitian_part());
    let top = eig.max().max(0.0).sqrt();
    let mut p_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut q_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for k in 0..n {
        let sigma = eig.values[k].max(0.0).sqrt();
        let qk = eig.vector(k);
        if sigma > 1e-10 * top.max(1e-300) {
            let mut pk = m.mul_vec(&qk);
            pk.iter_mut().for_each(|z| *z /= sigma);
            p_cols.push(pk);
            q_cols.push(qk);
        } else {
            q_cols.push(qk);
        }
    }
    orthonormal_completion(&mut p_cols, n);
    let p = ComplexMatrix::from_columns(&p_cols)?;
    let q = ComplexMatrix::from_columns(&q_cols)?;
    Ok(p.matmul_adjoint(&q))
}

/// Re-orthonormalizes the given vectors and extends them to a basis of `C^n`.
pub(crate) fn orthonormal_completion(cols: &mut Vec<Vec<Complex64>>, n: usize) {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let candidates: Vec<Vec<Complex64>> = cols
        .drain(..)
        .chain((0..n).map(|i| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[i] = Complex64::new(1.0, 0.0);
            e
        }))
        .collect();
    for mut c in candidates {
        if basis.len() == n {
            break;
        }
        for _ in 0..2 {
            for b in &basis {
                let proj: Complex64 = b.iter().zip(&c).map(|(x, y)| x.conj() * y).sum();
                c.iter_mut().zip(b).for_each(|(y, x)| *y -= proj * x);
            }
        }
        let norm = super::matrix::vec_norm(&c);
        if norm > 1e-8 {
            c.iter_mut().for_each(|z| *z /= norm);
            basis.push(c);
        }
    }
    *cols = basis;
}

/// Positive part `[m]_+` of a Hermitian matrix (negative eigenvalues clipped).
pub fn positive_part(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(hermitian_eig(m)?.map_spectrum(|l| l.max(0.0)))
}

/// Negative part `[m]_-` so that `m = [m]_+ - [m]_-`.
pub fn negative_part(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(hermitian_eig(m)?.map_spectrum(|l| (-l).max(0.0)))
}

/// Rank of the sum of PSD operators: eigenvalues above `tol · λ_max` are counted.
pub fn support_dim(operators: &[&ComplexMatrix], tol: f64) -> Result<usize> {
    let first = match operators.first() {
        Some(m) => *m,
        None => return argument("support_dim needs at least one operator"),
    };
    let mut sum = ComplexMatrix::zeros(first.rows(), first.cols());
    for m in operators {
        if (m.rows(), m.cols()) != (first.rows(), first.cols()) {
            return argument("support_dim operators must share one size");
        }
        sum += m;
    }
    let eig = hermitian_eig(&sum)?;
    let top = eig.max();
    if top <= 0.0 {
        return Ok(0);
    }
    Ok(eig.values.iter().filter(|&&l| l > tol * top).count())
}

/// Orthogonal projector onto the span of eigenvectors with eigenvalue above
/// `tol · λ_max`.
pub fn support_projector(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    let cut = tol * eig.max().max(0.0);
    Ok(eig.map_spectrum(|l| if l > cut && l > 0.0 { 1.0 } else { 0.0 }))
}
