//! Entropy-family functionals, all in bits.

use crate::error::{argument, Result};
use crate::linalg::{hermitian_eig, support_projector, trace_norm, ComplexMatrix, RANK_TOL};
use crate::state::DensityMatrix;

/// Eigenvalues at or below this absolute threshold contribute nothing to `-λ log λ`.
pub const EIGENVALUE_CLIP: f64 = 1e-12;

/// Threshold on `‖(I-Π_σ) ρ (I-Π_σ)‖₁` above which `supp ρ ⊄ supp σ`.
pub const SUPPORT_TOL: f64 = 1e-9;

fn eta(l: f64) -> f64 {
    if l > EIGENVALUE_CLIP {
        -l * l.log2()
    } else {
        0.0
    }
}

/// Von Neumann entropy of a positive operator from its spectrum.
pub(crate) fn operator_entropy(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eig(m)?.values.iter().map(|&l| eta(l)).sum())
}

/// `H(ρ) = -Tr ρ log₂ ρ`.
pub fn entropy(rho: &DensityMatrix) -> f64 {
    // DensityMatrix guarantees a Hermitian matrix, so decomposition cannot fail.
    operator_entropy(rho.matrix()).unwrap_or(f64::NAN)
}

/// `H(ρ‖σ)`, `+∞` when the support of ρ is not inside the support of σ.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    rho.same_shape(sigma)?;
    let n = rho.dim();
    let proj = support_projector(sigma.matrix(), RANK_TOL)?;
    let complement = &ComplexMatrix::identity(n) - &proj;
    if trace_norm(&complement.sandwich(rho.matrix())) >= SUPPORT_TOL {
        return Ok(f64::INFINITY);
    }
    let sig = hermitian_eig(sigma.matrix())?;
    let cut = RANK_TOL * sig.max();
    let log_sigma = sig.map_spectrum(|l| if l > cut && l > 0.0 { l.log2() } else { 0.0 });
    let cross = rho.matrix().inner(&log_sigma).re;
    Ok(-entropy(rho) - cross)
}

fn check_disjoint(parts: &[&[&str]]) -> Result<()> {
    let mut seen: Vec<&str> = Vec::new();
    for part in parts {
        for l in *part {
            if seen.contains(l) {
                return argument(format!("subsystem {l} appears in more than one part"));
            }
            seen.push(l);
        }
    }
    Ok(())
}

fn marginal_entropy(omega: &DensityMatrix, parts: &[&[&str]]) -> Result<f64> {
    let labels: Vec<&str> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    if labels.is_empty() {
        return Ok(0.0);
    }
    if labels.len() == omega.shape().len() {
        // every label present: the full state
        omega.shape().positions(&labels)?;
        return Ok(entropy(omega));
    }
    Ok(entropy(&omega.marginal(&labels)?))
}

/// `I(A:B) = H(A) + H(B) - H(AB)`; subsystems outside `A ∪ B` are traced out.
pub fn mutual_information(omega: &DensityMatrix, a: &[&str], b: &[&str]) -> Result<f64> {
    cmi(omega, a, b, &[])
}

/// `I(A:B|C) = H(AC) + H(BC) - H(ABC) - H(C)`; an empty `C` gives `I(A:B)`.
pub fn cmi(omega: &DensityMatrix, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return argument("conditional mutual information needs non-empty A and B");
    }
    check_disjoint(&[a, b, c])?;
    let h_ac = marginal_entropy(omega, &[a, c])?;
    let h_bc = marginal_entropy(omega, &[b, c])?;
    let h_abc = marginal_entropy(omega, &[a, b, c])?;
    let h_c = marginal_entropy(omega, &[c])?;
    Ok(h_ac + h_bc - h_abc - h_c)
}

/// Entropy of a marginal on the given labels.
pub fn marginal_entropy_of(omega: &DensityMatrix, labels: &[&str]) -> Result<f64> {
    marginal_entropy(omega, &[labels])
}

/// Binary entropy `h₂(t) = -t log t - (1-t) log(1-t)`.
pub fn h2(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return argument(format!("h2 argument {t} outside [0, 1]"));
    }
    Ok(xlog(t) + xlog(1.0 - t))
}

fn xlog(t: f64) -> f64 {
    if t > 0.0 {
        -t * t.log2()
    } else {
        0.0
    }
}

/// `g(ε) = (1+ε) h₂(ε/(1+ε)) = (1+ε) log(1+ε) - ε log ε`.
pub fn g(eps: f64) -> Result<f64> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return argument(format!("g argument {eps} must be finite and non-negative"));
    }
    Ok((1.0 + eps) * (1.0 + eps).log2() + xlog(eps))
}
