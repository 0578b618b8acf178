use std::fmt;

use super::matrix::{ComplexMatrix, AMBIENT_DIM_CAP};
use crate::error::{argument, Error, Result};

/// Ordered tensor factorization of a Hilbert space into named subsystems.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubsystemShape {
    labels: Vec<String>,
    dims: Vec<usize>,
}

impl SubsystemShape {
    pub fn new<S: AsRef<str>>(factors: &[(S, usize)]) -> Result<Self> {
        let mut labels = Vec::with_capacity(factors.len());
        let mut dims = Vec::with_capacity(factors.len());
        for (label, dim) in factors {
            let label = label.as_ref();
            if label.is_empty() {
                return argument("subsystem labels must be non-empty");
            }
            if *dim == 0 {
                return argument(format!("subsystem {label} has dimension 0"));
            }
            if labels.iter().any(|l: &String| l == label) {
                return argument(format!("duplicate subsystem label {label}"));
            }
            labels.push(label.to_string());
            dims.push(*dim);
        }
        let shape = Self { labels, dims };
        let total = shape.checked_total()?;
        if total > AMBIENT_DIM_CAP {
            return Err(Error::Size {
                dim: total,
                cap: AMBIENT_DIM_CAP,
            });
        }
        Ok(shape)
    }

    /// Single unnamed-style factor.
    pub fn single(label: &str, dim: usize) -> Result<Self> {
        Self::new(&[(label, dim)])
    }

    fn checked_total(&self) -> Result<usize> {
        self.dims.iter().try_fold(1usize, |acc, &d| {
            acc.checked_mul(d).ok_or(Error::Size {
                dim: usize::MAX,
                cap: AMBIENT_DIM_CAP,
            })
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Argument(format!("unknown subsystem label {label} in {self}")))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.dims[self.position(label)?])
    }

    /// Product of the dimensions of the given labels.
    pub fn dim_of_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<usize> {
        labels
            .iter()
            .try_fold(1, |acc, l| Ok(acc * self.dim_of(l.as_ref())?))
    }

    /// Shape restricted to `keep`, preserving this shape's order.
    pub fn restrict<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        let positions = self.positions(keep)?;
        let mut factors: Vec<(&str, usize)> = Vec::new();
        for (i, (l, d)) in self.labels.iter().zip(&self.dims).enumerate() {
            if positions.contains(&i) {
                factors.push((l.as_str(), *d));
            }
        }
        Self::new(&factors)
    }

    /// Tensor product shape `self ⊗ other`; labels must be disjoint.
    pub fn join(&self, other: &Self) -> Result<Self> {
        let factors: Vec<(&str, usize)> = self
            .labels
            .iter()
            .zip(&self.dims)
            .chain(other.labels.iter().zip(&other.dims))
            .map(|(l, d)| (l.as_str(), *d))
            .collect();
        Self::new(&factors)
    }

    /// Same shape with one factor replaced (relabelled and/or resized).
    pub fn replace(&self, label: &str, new_label: &str, new_dim: usize) -> Result<Self> {
        let pos = self.position(label)?;
        let factors: Vec<(&str, usize)> = self
            .labels
            .iter()
            .zip(&self.dims)
            .enumerate()
            .map(|(i, (l, d))| {
                if i == pos {
                    (new_label, new_dim)
                } else {
                    (l.as_str(), *d)
                }
            })
            .collect();
        Self::new(&factors)
    }

    pub(crate) fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            let p = self.position(l.as_ref())?;
            if out.contains(&p) {
                return argument(format!("label {} listed twice", l.as_ref()));
            }
            out.push(p);
        }
        Ok(out)
    }

    /// Mixed-radix digits of a flat index.
    fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            out[k] = index % self.dims[k];
            index /= self.dims[k];
        }
        out
    }
}

impl fmt::Display for SubsystemShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .labels
            .iter()
            .zip(&self.dims)
            .map(|(l, d)| format!("{l}={d}"))
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for SubsystemShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn check_consistent(m: &ComplexMatrix, shape: &SubsystemShape) -> Result<()> {
    let n = shape.total_dim();
    if m.rows() != n || m.cols() != n {
        return argument(format!(
            "{}x{} matrix does not match shape {shape} (dimension {n})",
            m.rows(),
            m.cols()
        ));
    }
    Ok(())
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.kron(b)
}

/// Partial trace keeping the subsystems in `keep` (result ordered as in `shape`).
pub fn partial_trace<S: AsRef<str>>(
    m: &ComplexMatrix,
    shape: &SubsystemShape,
    keep: &[S],
) -> Result<ComplexMatrix> {
    check_consistent(m, shape)?;
    let keep_pos = shape.positions(keep)?;
    let kept: Vec<usize> = (0..shape.len()).filter(|i| keep_pos.contains(i)).collect();
    let traced: Vec<usize> = (0..shape.len()).filter(|i| !keep_pos.contains(i)).collect();
    let dims = shape.dims();
    let kept_dim: usize = kept.iter().map(|&i| dims[i]).product();
    let traced_dim: usize = traced.iter().map(|&i| dims[i]).product();
    let n = shape.total_dim();

    // flat index -> (kept index, traced index), and the inverse table
    let mut split = Vec::with_capacity(n);
    let mut compose = vec![0usize; kept_dim * traced_dim];
    for idx in 0..n {
        let digits = shape.digits(idx);
        let k = kept.iter().fold(0, |acc, &i| acc * dims[i] + digits[i]);
        let t = traced.iter().fold(0, |acc, &i| acc * dims[i] + digits[i]);
        split.push((k, t));
        compose[k * traced_dim + t] = idx;
    }

    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    for (r, &(kr, t)) in split.iter().enumerate() {
        for kc in 0..kept_dim {
            let c = compose[kc * traced_dim + t];
            out[(kr, kc)] += m[(r, c)];
        }
    }
    Ok(out)
}

/// Reorders tensor factors so that the result lives on `order` (a permutation
/// of the shape's labels).
pub fn permute<S: AsRef<str>>(
    m: &ComplexMatrix,
    shape: &SubsystemShape,
    order: &[S],
) -> Result<(ComplexMatrix, SubsystemShape)> {
    check_consistent(m, shape)?;
    let pos = shape.positions(order)?;
    if pos.len() != shape.len() {
        return argument(format!("permutation must list every label of {shape}"));
    }
    let factors: Vec<(&str, usize)> = pos
        .iter()
        .map(|&p| (shape.labels()[p].as_str(), shape.dims()[p]))
        .collect();
    let new_shape = SubsystemShape::new(&factors)?;
    let n = shape.total_dim();
    let dims = shape.dims();
    // old flat index -> new flat index
    let map: Vec<usize> = (0..n)
        .map(|idx| {
            let digits = shape.digits(idx);
            pos.iter().fold(0, |acc, &p| acc * dims[p] + digits[p])
        })
        .collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            out[(map[r], map[c])] = m[(r, c)];
        }
    }
    Ok((out, new_shape))
}

/// Embeds an operator acting on `label` into the full space: `I ⊗ op ⊗ I`,
/// where `op` maps the factor's space (dimension `dim_of(label)`) into a space
/// of dimension `op.rows()`.
pub fn embed_operator(
    op: &ComplexMatrix,
    shape: &SubsystemShape,
    label: &str,
) -> Result<ComplexMatrix> {
    let pos = shape.position(label)?;
    if op.cols() != shape.dims()[pos] {
        return argument(format!(
            "operator with {} columns cannot act on {label} of dimension {}",
            op.cols(),
            shape.dims()[pos]
        ));
    }
    let left: usize = shape.dims()[..pos].iter().product();
    let right: usize = shape.dims()[pos + 1..].iter().product();
    ComplexMatrix::identity(left)
        .kron(op)?
        .kron(&ComplexMatrix::identity(right))
}
