//! Quantum channels held simultaneously as minimal Kraus list, Stinespring
//! isometry and Choi matrix.
//!
//! Conventions:
//! - Choi matrix `J = Σ_ij Φ(|i><j|) ⊗ |i><j|` on `B ⊗ A` (output factor
//!   first), so that `Tr_B J = I_A` is trace preservation.
//! - Stinespring isometry `V = Σ_k K_k ⊗ |k>_E` maps `A` into `B ⊗ E`, with row
//!   index `b · d_E + e`.

mod file;

pub use file::{
    parse_channel_file, read_channel_file, to_channel_file, ChannelFile, FILE_COMPLETENESS_TOL,
};

use num_complex::Complex64;

use crate::error::{argument, contract, Result};
use crate::linalg::{
    embed_operator, hermitian_eig, operator_norm, orthonormalize_columns, ComplexMatrix, Rng,
    SubsystemShape, RANK_TOL,
};
use crate::state::DensityMatrix;

/// Maximum tolerated `|Σ K†K - I|` entry for a channel.
pub const KRAUS_TOL: f64 = 1e-9;

/// Completely positive trace-preserving map `A -> B`.
#[derive(Clone, Debug)]
pub struct Channel {
    din: usize,
    dout: usize,
    kraus: Vec<ComplexMatrix>,
    stinespring: ComplexMatrix,
    choi: ComplexMatrix,
}

fn completeness_residual(kraus: &[ComplexMatrix], din: usize) -> f64 {
    let mut sum = ComplexMatrix::zeros(din, din);
    for k in kraus {
        sum += &k.adjoint_matmul(k);
    }
    sum.max_abs_diff(&ComplexMatrix::identity(din))
}

fn choi_from_kraus(kraus: &[ComplexMatrix], din: usize, dout: usize) -> ComplexMatrix {
    let n = din * dout;
    let mut j = ComplexMatrix::zeros(n, n);
    for k in kraus {
        // vec(K)[b·din + a] = K[b, a]
        let v: Vec<Complex64> = k.data().to_vec();
        for r in 0..n {
            if v[r] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..n {
                j[(r, c)] += v[r] * v[c].conj();
            }
        }
    }
    j.hermitian_part()
}

fn minimal_kraus(choi: &ComplexMatrix, din: usize, dout: usize) -> Result<Vec<ComplexMatrix>> {
    let eig = hermitian_eig(choi)?;
    let cut = RANK_TOL * eig.max();
    let mut out = Vec::new();
    for (k, &l) in eig.values.iter().enumerate() {
        if l <= cut {
            break;
        }
        let v = eig.vector(k);
        let s = l.sqrt();
        out.push(ComplexMatrix::from_fn(dout, din, |b, a| v[b * din + a] * s));
    }
    Ok(out)
}

fn stinespring_from_kraus(kraus: &[ComplexMatrix], din: usize, dout: usize) -> ComplexMatrix {
    let denv = kraus.len();
    ComplexMatrix::from_fn(dout * denv, din, |row, a| {
        kraus[row % denv][(row / denv, a)]
    })
}

impl Channel {
    /// Builds a channel from a Kraus list with `Σ K†K = I` within [`KRAUS_TOL`].
    /// The stored Kraus list is the minimal one extracted from the Choi matrix.
    pub fn from_kraus(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let (din, dout) = Self::kraus_dims(&kraus)?;
        let residual = completeness_residual(&kraus, din);
        if residual > KRAUS_TOL {
            return contract(format!(
                "Kraus operators are not trace preserving (residual {residual:.3e})"
            ));
        }
        Self::from_valid_kraus(&kraus, din, dout)
    }

    /// Accepts Kraus sets with completeness residual up to `tol` and restores
    /// exact trace preservation by `K_i -> K_i S^{-1/2}`, `S = Σ K†K`.
    pub fn from_kraus_normalized(kraus: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let (din, dout) = Self::kraus_dims(&kraus)?;
        let residual = completeness_residual(&kraus, din);
        if residual > tol {
            return contract(format!(
                "Kraus operators are not trace preserving (residual {residual:.3e})"
            ));
        }
        let mut s = ComplexMatrix::zeros(din, din);
        for k in &kraus {
            s += &k.adjoint_matmul(k);
        }
        let inv_sqrt = hermitian_eig(&s.hermitian_part())?.map_spectrum(|l| 1.0 / l.sqrt());
        let fixed: Vec<ComplexMatrix> = kraus.iter().map(|k| k.matmul(&inv_sqrt)).collect();
        Self::from_valid_kraus(&fixed, din, dout)
    }

    fn kraus_dims(kraus: &[ComplexMatrix]) -> Result<(usize, usize)> {
        let first = match kraus.first() {
            Some(k) => k,
            None => return argument("a channel needs at least one Kraus operator"),
        };
        let (dout, din) = (first.rows(), first.cols());
        if din == 0 || dout == 0 {
            return argument("Kraus operators must be non-empty");
        }
        if kraus.iter().any(|k| k.rows() != dout || k.cols() != din) {
            return argument("Kraus operators must share one shape");
        }
        Ok((din, dout))
    }

    fn from_valid_kraus(kraus: &[ComplexMatrix], din: usize, dout: usize) -> Result<Self> {
        let choi = choi_from_kraus(kraus, din, dout);
        let kraus = minimal_kraus(&choi, din, dout)?;
        let stinespring = stinespring_from_kraus(&kraus, din, dout);
        Ok(Self {
            din,
            dout,
            kraus,
            stinespring,
            choi,
        })
    }

    /// Channel with Stinespring isometry `v: A -> B ⊗ E` (rows `b · d_E + e`).
    pub fn from_isometry(v: &ComplexMatrix, dout: usize) -> Result<Self> {
        if dout == 0 || !v.rows().is_multiple_of(dout) {
            return argument(format!(
                "isometry with {} rows cannot map into B of dimension {dout}",
                v.rows()
            ));
        }
        let din = v.cols();
        let defect = v
            .adjoint_matmul(v)
            .max_abs_diff(&ComplexMatrix::identity(din));
        if defect > KRAUS_TOL {
            return contract(format!("not an isometry (defect {defect:.3e})"));
        }
        let denv = v.rows() / dout;
        let kraus = (0..denv)
            .map(|k| ComplexMatrix::from_fn(dout, din, |b, a| v[(b * denv + k, a)]))
            .collect();
        Self::from_kraus(kraus)
    }

    pub fn identity(d: usize) -> Self {
        Self::from_kraus(vec![ComplexMatrix::identity(d)]).expect("identity is a channel")
    }

    pub fn unitary(u: &ComplexMatrix) -> Result<Self> {
        Self::from_kraus(vec![u.clone()])
    }

    /// `ρ ↦ Tr(ρ) σ`.
    pub fn constant(din: usize, sigma: &ComplexMatrix) -> Result<Self> {
        let eig = hermitian_eig(sigma)?;
        let dout = sigma.rows();
        let mut kraus = Vec::new();
        for (k, &l) in eig.values.iter().enumerate() {
            if l <= 0.0 {
                continue;
            }
            let v = eig.vector(k);
            for a in 0..din {
                kraus.push(ComplexMatrix::from_fn(dout, din, |b, c| {
                    if c == a {
                        v[b] * l.sqrt()
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                }));
            }
        }
        Self::from_kraus(kraus)
    }

    /// `ρ ↦ Tr(ρ) I/d`.
    pub fn completely_depolarizing(d: usize) -> Self {
        Self::constant(d, &ComplexMatrix::identity(d).scale(1.0 / d as f64)).expect("valid channel")
    }

    /// Erasure channel `ρ ↦ (1-p)ρ ⊕ p Tr(ρ) |e><e|` from dimension `d` to `d+1`.
    pub fn erasure(d: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return argument(format!("erasure probability {p} outside [0, 1]"));
        }
        if d == 0 {
            return argument("erasure channel needs d >= 1");
        }
        let mut kraus = vec![ComplexMatrix::from_fn(d + 1, d, |b, a| {
            if a == b {
                Complex64::new((1.0 - p).sqrt(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })];
        for i in 0..d {
            let mut k = ComplexMatrix::zeros(d + 1, d);
            k[(d, i)] = Complex64::new(p.sqrt(), 0.0);
            kraus.push(k);
        }
        Self::from_kraus(kraus)
    }

    /// Random channel with `kraus_count` Kraus operators, from a random isometry.
    pub fn random(din: usize, dout: usize, kraus_count: usize, rng: &mut Rng) -> Result<Self> {
        if dout * kraus_count < din {
            return argument(format!(
                "{kraus_count} Kraus operators of size {dout}x{din} cannot be trace preserving"
            ));
        }
        let v = rng.random_isometry(din, dout * kraus_count)?;
        Self::from_isometry(&v, dout)
    }

    /// Nearby channel: the Stinespring isometry (environment padded to
    /// `kraus_count`) is perturbed by a Gaussian of scale `t` and re-orthonormalized.
    pub fn perturbed(&self, t: f64, kraus_count: usize, rng: &mut Rng) -> Result<Self> {
        let denv = kraus_count.max(self.denv());
        let base = pad_environment(&self.stinespring, self.dout, self.denv(), denv);
        loop {
            let noise = rng.ginibre(base.rows(), base.cols()).scale(t);
            if let Some(v) = orthonormalize_columns(&(&base + &noise)) {
                return Self::from_isometry(&v, self.dout);
            }
        }
    }

    pub fn din(&self) -> usize {
        self.din
    }

    pub fn dout(&self) -> usize {
        self.dout
    }

    /// Environment dimension (minimal Kraus rank).
    pub fn denv(&self) -> usize {
        self.kraus.len()
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn stinespring(&self) -> &ComplexMatrix {
        &self.stinespring
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    /// `Σ K X K†` for any operator `X` on the input.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dout, self.dout);
        for k in &self.kraus {
            out += &k.sandwich(x);
        }
        out
    }

    /// Heisenberg-picture map `Y ↦ Σ K† Y K`.
    pub fn adjoint_apply(&self, y: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.din, self.din);
        for k in &self.kraus {
            out += &k.adjoint_matmul(&y.matmul(k));
        }
        out
    }

    /// Output state; a single-factor input keeps its label, otherwise the
    /// output is labelled `B`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.din {
            return argument(format!(
                "channel input dimension {} but state has dimension {}",
                self.din,
                rho.dim()
            ));
        }
        let label = match rho.shape().labels() {
            [only] => only.clone(),
            _ => "B".to_string(),
        };
        let shape = SubsystemShape::single(&label, self.dout)?;
        Ok(DensityMatrix::from_trusted(
            self.apply_matrix(rho.matrix()),
            shape,
        ))
    }

    /// `(Φ ⊗ id)(ρ)` acting on factor `target`, which keeps its label.
    pub fn apply_on(&self, rho: &DensityMatrix, target: &str) -> Result<DensityMatrix> {
        self.apply_on_as(rho, target, target)
    }

    /// `(Φ ⊗ id)(ρ)` acting on factor `target`; the output factor is renamed `output_label`.
    pub fn apply_on_as(
        &self,
        rho: &DensityMatrix,
        target: &str,
        output_label: &str,
    ) -> Result<DensityMatrix> {
        let shape = rho.shape();
        let d = shape.dim_of(target)?;
        if d != self.din {
            return argument(format!(
                "channel input dimension {} but {target} has dimension {d}",
                self.din
            ));
        }
        let out_shape = shape.replace(target, output_label, self.dout)?;
        let n = out_shape.total_dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for k in &self.kraus {
            let full = embed_operator(k, shape, target)?;
            out += &full.sandwich(rho.matrix());
        }
        Ok(DensityMatrix::from_trusted(out, out_shape))
    }

    /// Complementary channel `ρ ↦ Tr_B V ρ V†` into the environment.
    pub fn complementary(&self) -> Self {
        let denv = self.denv();
        let kraus: Vec<ComplexMatrix> = (0..self.dout)
            .map(|b| ComplexMatrix::from_fn(denv, self.din, |k, a| self.kraus[k][(b, a)]))
            .collect();
        Self::from_kraus(kraus).expect("complementary of a channel is a channel")
    }

    /// Same channel up to `tol` in every Choi entry.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.din == other.din
            && self.dout == other.dout
            && self.choi.max_abs_diff(&other.choi) <= tol
    }
}

/// Zero-pads the environment of a Stinespring isometry from `denv` to `new_denv`.
pub fn pad_environment(
    v: &ComplexMatrix,
    dout: usize,
    denv: usize,
    new_denv: usize,
) -> ComplexMatrix {
    assert!(new_denv >= denv);
    let mut out = ComplexMatrix::zeros(dout * new_denv, v.cols());
    for b in 0..dout {
        for e in 0..denv {
            for a in 0..v.cols() {
                out[(b * new_denv + e, a)] = v[(b * denv + e, a)];
            }
        }
    }
    out
}

/// Stinespring isometries of two channels into one common `B ⊗ E`.
#[derive(Clone, Debug)]
pub struct ChannelPairRep {
    pub vphi: ComplexMatrix,
    pub vpsi: ComplexMatrix,
    pub dout: usize,
    pub denv: usize,
}

impl ChannelPairRep {
    /// `‖V_Φ - V_Ψ‖` for this particular pair of representations.
    pub fn distance(&self) -> f64 {
        operator_norm(&(&self.vphi - &self.vpsi))
    }

    /// Complementary channels `Tr_B V ρ V†` of both isometries, with the
    /// environment of this representation as their output.
    pub fn complementary_pair(&self) -> Result<(Channel, Channel)> {
        let swap = |v: &ComplexMatrix| {
            ComplexMatrix::from_fn(v.rows(), v.cols(), |row, a| {
                let (e, b) = (row / self.dout, row % self.dout);
                v[(b * self.denv + e, a)]
            })
        };
        Ok((
            Channel::from_isometry(&swap(&self.vphi), self.denv)?,
            Channel::from_isometry(&swap(&self.vpsi), self.denv)?,
        ))
    }
}

/// Common Stinespring representation with environments zero-padded to the
/// larger minimal Kraus rank.
pub fn pair_common_rep(phi: &Channel, psi: &Channel) -> Result<ChannelPairRep> {
    if phi.din != psi.din || phi.dout != psi.dout {
        return argument(format!(
            "channels map {}->{} and {}->{}",
            phi.din, phi.dout, psi.din, psi.dout
        ));
    }
    let denv = phi.denv().max(psi.denv());
    Ok(ChannelPairRep {
        vphi: pad_environment(&phi.stinespring, phi.dout, phi.denv(), denv),
        vpsi: pad_environment(&psi.stinespring, psi.dout, psi.denv(), denv),
        dout: phi.dout,
        denv,
    })
}

/// Explicit erasure isometry `|φ> ↦ √(1-p) |φ>⊗|e> ⊕ √p |e>⊗|φ>` into
/// `B ⊗ E` with `B = E = A ⊕ span{|e>}` (`|e>` is the last basis vector).
pub fn erasure_stinespring(d: usize, p: f64) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return argument(format!("erasure probability {p} outside [0, 1]"));
    }
    let e = d + 1;
    let mut v = ComplexMatrix::zeros(e * e, d);
    for a in 0..d {
        v[(a * e + d, a)] = Complex64::new((1.0 - p).sqrt(), 0.0);
        v[(d * e + a, a)] = Complex64::new(p.sqrt(), 0.0);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropic::entropy;
    use crate::linalg::partial_trace;

    fn qubit_shape() -> SubsystemShape {
        SubsystemShape::single("A", 2).unwrap()
    }

    fn trace_out_env(v: &ComplexMatrix, rho: &ComplexMatrix, dout: usize) -> ComplexMatrix {
        let denv = v.rows() / dout;
        let shape = SubsystemShape::new(&[("B", dout), ("E", denv)]).unwrap();
        partial_trace(&v.sandwich(rho), &shape, &["B"]).unwrap()
    }

    #[test]
    fn identity_channel_representations() {
        let id = Channel::identity(2);
        assert_eq!(id.denv(), 1);
        let v = id.stinespring();
        // |φ> ↦ |φ> ⊗ |0>, up to a global phase of the single Kraus operator
        let phase = v[(0, 0)];
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        assert!(v.max_abs_diff(&ComplexMatrix::identity(2).scale_complex(phase)) < 1e-12);
        let mut rng = Rng::new(1);
        let rho = DensityMatrix::random(qubit_shape(), &mut rng);
        assert!(id.apply(&rho).unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn unitary_channel_has_one_kraus() {
        let mut rng = Rng::new(2);
        let u = rng.random_isometry(3, 3).unwrap();
        let ch = Channel::unitary(&u).unwrap();
        assert_eq!(ch.denv(), 1);
        let rho = rng.random_state_matrix(3);
        assert!(ch.apply_matrix(&rho).max_abs_diff(&u.sandwich(&rho)) < 1e-12);
    }

    #[test]
    fn rejects_non_trace_preserving() {
        let k = ComplexMatrix::identity(2).scale(0.9);
        assert!(matches!(
            Channel::from_kraus(vec![k.clone()]),
            Err(crate::Error::Contract(_))
        ));
        let k2 = ComplexMatrix::identity(2).scale((1.0f64 - 0.81).sqrt() * (1.0 + 1e-8));
        assert!(Channel::from_kraus(vec![k.clone(), k2.clone()]).is_err());
        let fixed = Channel::from_kraus_normalized(vec![k, k2], 1e-6).unwrap();
        let sum: ComplexMatrix = fixed
            .kraus()
            .iter()
            .fold(ComplexMatrix::zeros(2, 2), |acc, k| {
                &acc + &k.adjoint_matmul(k)
            });
        assert!(sum.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn random_channel_round_trips_through_choi() {
        let mut rng = Rng::new(3);
        let v = rng.random_isometry(2, 3 * 2).unwrap();
        let ch = Channel::from_isometry(&v, 3).unwrap();
        // Choi oracle from the raw isometry slices
        let slices: Vec<ComplexMatrix> = (0..2)
            .map(|k| ComplexMatrix::from_fn(3, 2, |b, a| v[(b * 2 + k, a)]))
            .collect();
        assert!(choi_from_kraus(&slices, 2, 3).max_abs_diff(ch.choi()) < 1e-12);
        let rebuilt = Channel::from_kraus(ch.kraus().to_vec()).unwrap();
        assert!(rebuilt.choi().max_abs_diff(ch.choi()) < 1e-12);
        let tr_b = partial_trace(
            ch.choi(),
            &SubsystemShape::new(&[("B", 3), ("A", 2)]).unwrap(),
            &["A"],
        )
        .unwrap();
        assert!(tr_b.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn stinespring_reproduces_kraus_action() {
        let mut rng = Rng::new(4);
        let ch = Channel::random(3, 2, 3, &mut rng).unwrap();
        let rho = rng.random_state_matrix(3);
        let via_v = trace_out_env(ch.stinespring(), &rho, 2);
        assert!(via_v.max_abs_diff(&ch.apply_matrix(&rho)) < 1e-12);
    }

    #[test]
    fn complementary_examples() {
        let id = Channel::identity(2);
        let comp = id.complementary();
        assert_eq!(comp.dout(), 1);
        let mut rng = Rng::new(5);
        let rho = rng.random_state_matrix(2);
        assert!((comp.apply_matrix(&rho)[(0, 0)].re - 1.0).abs() < 1e-12);

        // isometric channel: complementary is constant
        let v = rng.random_isometry(2, 3).unwrap();
        let iso = Channel::from_kraus(vec![v]).unwrap();
        let c = iso.complementary();
        let s1 = rng.random_state_matrix(2);
        let s2 = rng.random_state_matrix(2);
        assert!(c.apply_matrix(&s1).max_abs_diff(&c.apply_matrix(&s2)) < 1e-12);

        // pure inputs: equal output entropies on both sides
        let ch = Channel::random(2, 3, 2, &mut rng).unwrap();
        let comp = ch.complementary();
        for _ in 0..5 {
            let psi = DensityMatrix::random_pure(qubit_shape(), &mut rng);
            let hb = entropy(&ch.apply(&psi).unwrap());
            let he = entropy(&comp.apply(&psi).unwrap());
            assert!((hb - he).abs() < 1e-9);
        }
        // double complement acts isometrically equivalently
        let cc = comp.complementary();
        assert_eq!(cc.din(), ch.din());
        for _ in 0..5 {
            let psi = DensityMatrix::random(qubit_shape(), &mut rng);
            let mut a = crate::linalg::hermitian_eig(ch.apply(&psi).unwrap().matrix())
                .unwrap()
                .values;
            let mut b = crate::linalg::hermitian_eig(cc.apply(&psi).unwrap().matrix())
                .unwrap()
                .values;
            a.retain(|&l| l > 1e-12);
            b.retain(|&l| l > 1e-12);
            assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn apply_on_matches_kraus_sum_oracle() {
        let mut rng = Rng::new(6);
        let shape = SubsystemShape::new(&[("A", 2), ("B", 2), ("C", 2)]).unwrap();
        let rho = DensityMatrix::random(shape.clone(), &mut rng);
        let ch = Channel::random(2, 2, 2, &mut rng).unwrap();
        let out = ch.apply_on(&rho, "B").unwrap();
        let mut oracle = ComplexMatrix::zeros(8, 8);
        for k in ch.kraus() {
            let full = ComplexMatrix::identity(2)
                .kron(k)
                .unwrap()
                .kron(&ComplexMatrix::identity(2))
                .unwrap();
            oracle += &full.sandwich(rho.matrix());
        }
        assert!(out.matrix().max_abs_diff(&oracle) < 1e-12);

        // identity channel leaves the state alone; product inputs factorize
        let id = Channel::identity(2);
        assert!(
            id.apply_on(&rho, "C")
                .unwrap()
                .matrix()
                .max_abs_diff(rho.matrix())
                < 1e-12
        );
        let a = DensityMatrix::random(SubsystemShape::single("A", 2).unwrap(), &mut rng);
        let b = DensityMatrix::random(SubsystemShape::single("D", 3).unwrap(), &mut rng);
        let ch3 = Channel::random(2, 3, 2, &mut rng).unwrap();
        let out = ch3.apply_on_as(&a.tensor(&b).unwrap(), "A", "B").unwrap();
        let expected = ch3.apply(&a).unwrap().matrix().kron(b.matrix()).unwrap();
        assert!(out.matrix().max_abs_diff(&expected) < 1e-12);
        assert_eq!(out.shape().labels()[0], "B");
        assert!(ch3.apply_on(&rho, "A").is_ok());
        assert!(ch3.apply_on(&a.tensor(&b).unwrap(), "D").is_err());
    }

    #[test]
    fn erasure_channel_examples() {
        let mut rng = Rng::new(7);
        let rho = rng.random_state_matrix(2);
        let e0 = Channel::erasure(2, 0.0).unwrap();
        assert_eq!(e0.denv(), 1);
        assert!(e0.apply_matrix(&rho).max_abs_diff(&rho.embed(3, 3, 0, 0)) < 1e-12);
        let e1 = Channel::erasure(2, 1.0).unwrap();
        assert!(
            e1.apply_matrix(&rho)
                .max_abs_diff(&ComplexMatrix::from_diag(&[0.0, 0.0, 1.0]))
                < 1e-12
        );
        let half = Channel::erasure(2, 0.5).unwrap();
        let out = half.apply_matrix(&ComplexMatrix::identity(2).scale(0.5));
        assert!(out.max_abs_diff(&ComplexMatrix::from_diag(&[0.25, 0.25, 0.5])) < 1e-12);
        assert!(Channel::erasure(2, 1.2).is_err());
    }

    #[test]
    fn erasure_isometry_reproduces_channel() {
        let mut rng = Rng::new(8);
        for &(d, p) in &[(2, 0.3), (3, 0.5), (4, 0.9)] {
            let v = erasure_stinespring(d, p).unwrap();
            assert!(
                v.adjoint_matmul(&v)
                    .max_abs_diff(&ComplexMatrix::identity(d))
                    < 1e-12
            );
            let rho = rng.random_state_matrix(d);
            let ch = Channel::erasure(d, p).unwrap();
            assert!(trace_out_env(&v, &rho, d + 1).max_abs_diff(&ch.apply_matrix(&rho)) < 1e-12);
        }
    }

    #[test]
    fn erasure_isometry_distance_closed_form() {
        for &d in &[2, 3] {
            for &x in &[0.0, 0.05, 0.1, 0.2] {
                let a = erasure_stinespring(d, 0.5 - x).unwrap();
                let b = erasure_stinespring(d, 0.5).unwrap();
                let numeric = operator_norm(&(&a - &b));
                let closed = (2.0 - (1.0 - 2.0 * x).sqrt() - (1.0 + 2.0 * x).sqrt()).sqrt();
                assert!((numeric - closed).abs() < 1e-9);
            }
        }
        let a = erasure_stinespring(2, 0.4).unwrap();
        let b = erasure_stinespring(2, 0.5).unwrap();
        // x = 0.1, evaluated independently at 30 digits
        assert!((operator_norm(&(&a - &b)) - 0.100_636_444_639_861_43).abs() < 1e-12);
    }

    #[test]
    fn common_rep_examples() {
        let mut rng = Rng::new(9);
        let phi = Channel::random(2, 2, 2, &mut rng).unwrap();
        let rep = pair_common_rep(&phi, &phi).unwrap();
        assert_eq!(rep.distance(), 0.0);

        let psi = Channel::random(2, 2, 4, &mut rng).unwrap();
        let rep = pair_common_rep(&phi, &psi).unwrap();
        assert_eq!(rep.denv, 4);
        for (v, ch) in [(&rep.vphi, &phi), (&rep.vpsi, &psi)] {
            assert!(
                v.adjoint_matmul(v)
                    .max_abs_diff(&ComplexMatrix::identity(2))
                    < 1e-10
            );
            let rebuilt = Channel::from_isometry(v, 2).unwrap();
            assert!(rebuilt.choi().max_abs_diff(ch.choi()) < 1e-9);
        }
        let other = Channel::random(3, 2, 2, &mut rng).unwrap();
        assert!(pair_common_rep(&phi, &other).is_err());

        // erasure pair: common minimal environment has dimension d + 1
        let e1 = Channel::erasure(2, 0.4).unwrap();
        let e2 = Channel::erasure(2, 0.5).unwrap();
        let rep = pair_common_rep(&e1, &e2).unwrap();
        assert_eq!(rep.denv, 3);
    }

    #[test]
    fn lemma_isometry_output_bound() {
        let mut rng = Rng::new(10);
        for _ in 0..200 {
            let u = rng.random_isometry(2, 4).unwrap();
            let v = rng.random_isometry(2, 4).unwrap();
            let rho = rng.random_state_matrix(2);
            let lhs = crate::linalg::trace_norm(&(&u.sandwich(&rho) - &v.sandwich(&rho)));
            assert!(lhs <= 2.0 * operator_norm(&(&u - &v)) + 1e-9);
        }
    }
}
