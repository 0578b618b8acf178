//! One-shot information quantities of channels and the closed-form capacities
//! of the erasure family.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::channels::Channel;
use crate::ensembles::Ensemble;
use crate::entropic::{entropy, mutual_information, operator_entropy};
use crate::error::{argument, Error, Result};
use crate::linalg::{hermitian_eig, vec_norm, ComplexMatrix, Rng, SubsystemShape, RANK_TOL};
use crate::state::DensityMatrix;

/// Capacity-type quantities reported by this module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapacityKind {
    /// Holevo capacity `C̄`.
    HolevoCap,
    /// Classical capacity `C`.
    Classical,
    /// Quantum capacity `Q`.
    Quantum,
    /// Private Holevo capacity `C̄_p`.
    PrivateOneshot,
    /// Private capacity `C_p`.
    Private,
    /// Entanglement-assisted classical capacity `C_ea`.
    EntanglementAssisted,
}

impl CapacityKind {
    /// The five kinds covered by the input-dimension capacity bounds.
    pub const BOUNDED: [CapacityKind; 5] = [
        CapacityKind::HolevoCap,
        CapacityKind::Classical,
        CapacityKind::Quantum,
        CapacityKind::PrivateOneshot,
        CapacityKind::Private,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CapacityKind::HolevoCap => "holevo-cap",
            CapacityKind::Classical => "classical",
            CapacityKind::Quantum => "quantum",
            CapacityKind::PrivateOneshot => "private-oneshot",
            CapacityKind::Private => "private",
            CapacityKind::EntanglementAssisted => "entanglement-assisted",
        }
    }
}

impl fmt::Display for CapacityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CapacityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Self::EntanglementAssisted]
            .into_iter()
            .chain(Self::BOUNDED)
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Argument(format!("unknown capacity kind {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    ClosedForm,
    ConcaveCertified,
    HeuristicLowerBound,
}

impl Exactness {
    pub fn as_str(self) -> &'static str {
        match self {
            Exactness::ClosedForm => "closed-form",
            Exactness::ConcaveCertified => "concave-certified",
            Exactness::HeuristicLowerBound => "heuristic-lower-bound",
        }
    }
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacityValue {
    pub kind: CapacityKind,
    /// Bits.
    pub value: f64,
    pub exactness: Exactness,
}

const INPUT_LABEL: &str = "A";
const REFERENCE_LABEL: &str = "R";

fn as_input(ch: &Channel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != ch.din() {
        return argument(format!(
            "channel input dimension {} but state has dimension {}",
            ch.din(),
            rho.dim()
        ));
    }
    rho.reshaped(SubsystemShape::single(INPUT_LABEL, ch.din())?)
}

fn purify_from(rho: &DensityMatrix, vectors: &[(f64, Vec<Complex64>)]) -> Result<DensityMatrix> {
    let d = rho.dim();
    let r = vectors.len();
    let mut psi = vec![Complex64::new(0.0, 0.0); d * r];
    for (i, (w, v)) in vectors.iter().enumerate() {
        for a in 0..d {
            psi[a * r + i] = v[a] * *w;
        }
    }
    let norm = vec_norm(&psi);
    psi.iter_mut().for_each(|z| *z /= norm);
    let shape = SubsystemShape::new(&[(INPUT_LABEL, d), (REFERENCE_LABEL, r)])?;
    DensityMatrix::from_pure(&psi, shape)
}

/// Spectral purification `Σ √λ_i |e_i>_A |i>_R` with `dim R = rank ρ`; the
/// factors are labelled `A` and `R`.
pub fn purification(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let eig = hermitian_eig(rho.matrix())?;
    let cut = RANK_TOL * eig.max();
    let vectors: Vec<(f64, Vec<Complex64>)> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > cut)
        .map(|(k, &l)| (l.sqrt(), eig.vector(k)))
        .collect();
    purify_from(rho, &vectors)
}

/// Canonical purification `(√ρ ⊗ I)|Ω>` with `dim R = dim A`.
pub fn canonical_purification(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let root = hermitian_eig(rho.matrix())?.map_spectrum(|l| l.max(0.0).sqrt());
    let vectors: Vec<(f64, Vec<Complex64>)> =
        (0..rho.dim()).map(|i| (1.0, root.column(i))).collect();
    purify_from(rho, &vectors)
}

/// `I(Φ, ρ) = I(B:R)` at `Φ ⊗ id_R` applied to a purification of `ρ`.
pub fn mutual_info_of_channel(ch: &Channel, rho: &DensityMatrix) -> Result<f64> {
    let pure = purification(&as_input(ch, rho)?)?;
    let out = ch.apply_on(&pure, INPUT_LABEL)?;
    mutual_information(&out, &[INPUT_LABEL], &[REFERENCE_LABEL])
}

/// `I_c(Φ, ρ) = H(Φ(ρ)) - H(Φ̂(ρ))`.
pub fn coherent_info(ch: &Channel, rho: &DensityMatrix) -> Result<f64> {
    let rho = as_input(ch, rho)?;
    Ok(entropy(&ch.apply(&rho)?) - entropy(&ch.complementary().apply(&rho)?))
}

/// `I(B:R) - H(ρ)` at the purified output; equal to [`coherent_info`].
pub fn coherent_info_via_purification(ch: &Channel, rho: &DensityMatrix) -> Result<f64> {
    Ok(mutual_info_of_channel(ch, rho)? - entropy(rho))
}

/// `χ_Φ(e) - χ_Φ̂(e)`; may be negative.
pub fn private_oneshot_objective(ch: &Channel, e: &Ensemble) -> Result<f64> {
    let comp = ch.complementary();
    let direct = e.map_states(|s| ch.apply(s))?.holevo_quantity();
    let leaked = e.map_states(|s| comp.apply(s))?.holevo_quantity();
    Ok(direct - leaked)
}

/// `log₂` of a positive operator with the logarithm taken on its support.
fn log2_on_support(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(&m.hermitian_part())?;
    let cut = RANK_TOL * eig.max();
    Ok(eig.map_spectrum(|l| if l > cut && l > 0.0 { l.log2() } else { 0.0 }))
}

const EA_MAX_ITERATIONS: usize = 2_000;

/// Mirror-ascent state for `ρ ↦ I(Φ, ρ) = H(ρ) + H(Φ(ρ)) - H(Φ̂(ρ))`.
struct EaObjective<'a> {
    ch: &'a Channel,
    comp: Channel,
}

impl EaObjective<'_> {
    fn value(&self, rho: &ComplexMatrix) -> Result<f64> {
        let h = |m: &ComplexMatrix| operator_entropy(&m.hermitian_part());
        Ok(h(rho)? + h(&self.ch.apply_matrix(rho))? - h(&self.comp.apply_matrix(rho))?)
    }

    /// Gradient in bits, up to a multiple of the identity.
    fn gradient(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let own = log2_on_support(rho)?;
        let out = self
            .ch
            .adjoint_apply(&log2_on_support(&self.ch.apply_matrix(rho))?);
        let env = self
            .comp
            .adjoint_apply(&log2_on_support(&self.comp.apply_matrix(rho))?);
        Ok((&(&env - &own) - &out).hermitian_part())
    }
}

/// `C_ea(Φ) = max_ρ I(Φ, ρ)` by matrix-exponentiated (mirror) ascent with
/// backtracking. The Frank–Wolfe gap `λ_max(G) - Tr ρG` bounds the
/// suboptimality of a concave objective; it certifies the value when ≤ `tol`.
pub fn ea_capacity(ch: &Channel, tol: f64) -> Result<CapacityValue> {
    if !(tol > 0.0) {
        return argument(format!("tolerance {tol} must be positive"));
    }
    let obj = EaObjective {
        ch,
        comp: ch.complementary(),
    };
    let d = ch.din();
    let mut rho = ComplexMatrix::identity(d).scale(1.0 / d as f64);
    let mut value = obj.value(&rho)?;
    let mut eta = 1.0f64;
    let mut certified = false;
    for _ in 0..EA_MAX_ITERATIONS {
        let g = obj.gradient(&rho)?;
        let gap = hermitian_eig(&g)?.max() - rho.inner(&g).re;
        if gap <= tol {
            certified = true;
            break;
        }
        let log_rho = hermitian_eig(&rho)?.map_spectrum(|l| l.max(1e-300).ln());
        let mut accepted = false;
        while eta > 1e-14 {
            let exponent = &log_rho + &g.scale(eta);
            let eig = hermitian_eig(&exponent.hermitian_part())?;
            let top = eig.max();
            let unnormalized = eig.map_spectrum(|l| (l - top).exp());
            let candidate = unnormalized
                .scale(1.0 / unnormalized.trace().re)
                .hermitian_part();
            let v = obj.value(&candidate)?;
            if v >= value {
                rho = candidate;
                value = v;
                eta = (eta * 2.0).min(1e6);
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok(CapacityValue {
        kind: CapacityKind::EntanglementAssisted,
        value: value.max(0.0),
        exactness: if certified {
            Exactness::ConcaveCertified
        } else {
            Exactness::HeuristicLowerBound
        },
    })
}

const HOLEVO_OUTER_ITERATIONS: usize = 60;
const BLAHUT_ARIMOTO_STEPS: usize = 10;

/// Pure-state ensemble search state for [`holevo_cap_heuristic`].
struct HolevoSearch<'a> {
    ch: &'a Channel,
    probabilities: Vec<f64>,
    vectors: Vec<Vec<Complex64>>,
}

impl HolevoSearch<'_> {
    fn outputs(&self) -> Vec<ComplexMatrix> {
        self.vectors
            .iter()
            .map(|v| self.ch.apply_matrix(&ComplexMatrix::outer(v, v)))
            .collect()
    }

    fn chi(probabilities: &[f64], outputs: &[ComplexMatrix]) -> Result<f64> {
        let n = outputs[0].rows();
        let mut avg = ComplexMatrix::zeros(n, n);
        for (p, o) in probabilities.iter().zip(outputs) {
            avg += &o.scale(*p);
        }
        let h = |m: &ComplexMatrix| operator_entropy(&m.hermitian_part());
        let mut chi = h(&avg)?;
        for (p, o) in probabilities.iter().zip(outputs) {
            if *p > 0.0 {
                chi -= p * h(o)?;
            }
        }
        Ok(chi)
    }

    fn value(&self) -> Result<f64> {
        Self::chi(&self.probabilities, &self.outputs())
    }

    /// Blahut–Arimoto steps on the probabilities with the states fixed.
    fn update_probabilities(&mut self) -> Result<()> {
        let outputs = self.outputs();
        let logs = outputs
            .iter()
            .map(log2_on_support)
            .collect::<Result<Vec<_>>>()?;
        for _ in 0..BLAHUT_ARIMOTO_STEPS {
            let n = outputs[0].rows();
            let mut avg = ComplexMatrix::zeros(n, n);
            for (p, o) in self.probabilities.iter().zip(&outputs) {
                avg += &o.scale(*p);
            }
            let log_avg = log2_on_support(&avg)?;
            let weights: Vec<f64> = outputs
                .iter()
                .zip(&logs)
                .zip(&self.probabilities)
                .map(|((o, l), p)| {
                    let divergence = o.inner(&(l - &log_avg)).re;
                    p * divergence.exp2()
                })
                .collect();
            let total: f64 = weights.iter().sum();
            if !(total > 0.0) {
                break;
            }
            self.probabilities = weights.iter().map(|w| w / total).collect();
        }
        Ok(())
    }

    /// One damped ascent step per state vector, kept only when χ increases.
    fn update_states(&mut self, current: f64) -> Result<f64> {
        let mut value = current;
        for i in 0..self.vectors.len() {
            if self.probabilities[i] <= 1e-12 {
                continue;
            }
            let outputs = self.outputs();
            let n = outputs[0].rows();
            let mut avg = ComplexMatrix::zeros(n, n);
            for (p, o) in self.probabilities.iter().zip(&outputs) {
                avg += &o.scale(*p);
            }
            let g = self
                .ch
                .adjoint_apply(&(&log2_on_support(&outputs[i])? - &log2_on_support(&avg)?))
                .hermitian_part();
            let gv = g.mul_vec(&self.vectors[i]);
            let original = self.vectors[i].clone();
            let mut eta = 0.5;
            while eta > 1e-6 {
                let mut v: Vec<Complex64> =
                    original.iter().zip(&gv).map(|(a, b)| a + b * eta).collect();
                let norm = vec_norm(&v);
                v.iter_mut().for_each(|z| *z /= norm);
                self.vectors[i] = v;
                let candidate = self.value()?;
                if candidate > value {
                    value = candidate;
                    break;
                }
                self.vectors[i] = original.clone();
                eta *= 0.5;
            }
        }
        Ok(value)
    }
}

/// Multi-start lower bound on the Holevo capacity over ensembles of at most
/// `m_max` pure states. Restart 0 is the uniform computational basis.
pub fn holevo_cap_heuristic(
    ch: &Channel,
    restarts: usize,
    m_max: usize,
    seed: u64,
) -> Result<CapacityValue> {
    let d = ch.din();
    if m_max < d * d {
        return argument(format!("m_max = {m_max} must be at least din² = {}", d * d));
    }
    let mut rng = Rng::new(seed);
    let mut best = 0.0f64;
    for r in 0..restarts.max(1) {
        let (probabilities, vectors) = if r == 0 {
            let basis = (0..d)
                .map(|k| {
                    (0..d)
                        .map(|j| Complex64::new(if j == k { 1.0 } else { 0.0 }, 0.0))
                        .collect()
                })
                .collect();
            (vec![1.0 / d as f64; d], basis)
        } else {
            let m = rng.int_range(d, m_max);
            (
                rng.random_probabilities(m),
                (0..m).map(|_| rng.random_pure(d)).collect(),
            )
        };
        let mut search = HolevoSearch {
            ch,
            probabilities,
            vectors,
        };
        let mut value = search.value()?;
        best = best.max(value);
        for _ in 0..HOLEVO_OUTER_ITERATIONS {
            search.update_probabilities()?;
            let after_p = search.value()?;
            let after_s = search.update_states(after_p)?;
            let improved = after_s - value;
            value = after_s;
            best = best.max(value);
            if improved.abs() < 1e-12 {
                break;
            }
        }
    }
    Ok(CapacityValue {
        kind: CapacityKind::HolevoCap,
        value: best.max(0.0),
        exactness: Exactness::HeuristicLowerBound,
    })
}

/// Closed-form capacities of the erasure channel `Φ_p` on a `d`-dimensional
/// input: `C = C̄ = (1-p) log₂ d` and `Q = C_p = C̄_p = max{(1-2p) log₂ d, 0}`.
pub fn erasure_capacities(d: usize, p: f64) -> Result<Vec<CapacityValue>> {
    if d < 2 {
        return argument(format!("erasure capacities need d >= 2, got {d}"));
    }
    erasure_capacities_log2(f64::from(d as u32).log2(), p)
}

/// [`erasure_capacities`] parameterized by `log₂ d`, so that dimensions far
/// beyond anything representable as a matrix can be evaluated.
pub fn erasure_capacities_log2(log2_d: f64, p: f64) -> Result<Vec<CapacityValue>> {
    if !(0.0..=1.0).contains(&p) {
        return argument(format!("erasure probability {p} outside [0, 1]"));
    }
    if !(log2_d >= 1.0) || !log2_d.is_finite() {
        return argument(format!("log2 d = {log2_d} must be finite and at least 1"));
    }
    let classical = (1.0 - p) * log2_d;
    let quantum = ((1.0 - 2.0 * p) * log2_d).max(0.0);
    Ok(CapacityKind::BOUNDED
        .into_iter()
        .map(|kind| CapacityValue {
            kind,
            value: match kind {
                CapacityKind::HolevoCap | CapacityKind::Classical => classical,
                _ => quantum,
            },
            exactness: Exactness::ClosedForm,
        })
        .collect())
}

/// Value of one kind from [`erasure_capacities_log2`].
pub fn erasure_capacity(log2_d: f64, p: f64, kind: CapacityKind) -> Result<f64> {
    erasure_capacities_log2(log2_d, p)?
        .into_iter()
        .find(|c| c.kind == kind)
        .map(|c| c.value)
        .ok_or_else(|| Error::Argument(format!("no erasure closed form for {kind}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qubit() -> SubsystemShape {
        SubsystemShape::single("A", 2).unwrap()
    }

    #[test]
    fn channel_mutual_information_examples() {
        let mut rng = Rng::new(1);
        let mixed = DensityMatrix::maximally_mixed(qubit());
        assert!(
            (mutual_info_of_channel(&Channel::identity(2), &mixed).unwrap() - 2.0).abs() < 1e-10
        );
        let constant = Channel::constant(2, &rng.random_state_matrix(3)).unwrap();
        let rho = DensityMatrix::random(qubit(), &mut rng);
        assert!(mutual_info_of_channel(&constant, &rho).unwrap().abs() < 1e-10);

        let ch = Channel::random(2, 3, 2, &mut rng).unwrap();
        let direct = {
            let pure = canonical_purification(&rho).unwrap();
            let out = ch.apply_on(&pure, "A").unwrap();
            crate::entropic::cmi(&out, &["A"], &["R"], &[]).unwrap()
        };
        let mi = mutual_info_of_channel(&ch, &rho).unwrap();
        assert!((mi - direct).abs() < 1e-9);
        assert!(mi <= 2.0 * entropy(&rho) + 1e-9);
    }

    #[test]
    fn purifications_agree() {
        let mut rng = Rng::new(2);
        let shape = SubsystemShape::single("A", 3).unwrap();
        for rank in 1..=3 {
            let rho = DensityMatrix::random_with_rank(shape.clone(), rank, &mut rng);
            let p = purification(&rho).unwrap();
            assert_eq!(p.shape().dim_of("R").unwrap(), rank);
            assert!(
                p.marginal(&["A"])
                    .unwrap()
                    .matrix()
                    .max_abs_diff(rho.matrix())
                    < 1e-10
            );
            let q = canonical_purification(&rho).unwrap();
            assert!(
                q.marginal(&["A"])
                    .unwrap()
                    .matrix()
                    .max_abs_diff(rho.matrix())
                    < 1e-10
            );
            let ch = Channel::random(3, 2, 3, &mut rng).unwrap();
            let via_p = {
                let out = ch.apply_on(&p, "A").unwrap();
                mutual_information(&out, &["A"], &["R"]).unwrap()
            };
            let via_q = {
                let out = ch.apply_on(&q, "A").unwrap();
                mutual_information(&out, &["A"], &["R"]).unwrap()
            };
            assert!((via_p - via_q).abs() < 1e-9);
        }
    }

    #[test]
    fn coherent_information_examples() {
        let mut rng = Rng::new(3);
        let v = rng.random_isometry(2, 3).unwrap();
        let iso = Channel::from_kraus(vec![v]).unwrap();
        let rho = DensityMatrix::random(qubit(), &mut rng);
        assert!((coherent_info(&iso, &rho).unwrap() - entropy(&rho)).abs() < 1e-9);

        let constant = Channel::completely_depolarizing(2);
        let a = coherent_info(&constant, &rho).unwrap();
        let b = coherent_info_via_purification(&constant, &rho).unwrap();
        assert!((a - b).abs() < 1e-9);
        assert!(a <= 0.0 + 1e-12);

        let half = Channel::erasure(2, 0.5).unwrap();
        let mixed = DensityMatrix::maximally_mixed(qubit());
        assert!(coherent_info(&half, &mixed).unwrap().abs() < 1e-10);

        for _ in 0..10 {
            let ch = Channel::random(2, 2, 3, &mut rng).unwrap();
            let r = DensityMatrix::random(qubit(), &mut rng);
            let a = coherent_info(&ch, &r).unwrap();
            let b = coherent_info_via_purification(&ch, &r).unwrap();
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn ea_capacity_examples() {
        let id = ea_capacity(&Channel::identity(2), 1e-9).unwrap();
        assert!((id.value - 2.0).abs() < 1e-9);
        assert_eq!(id.exactness, Exactness::ConcaveCertified);
        let mut rng = Rng::new(4);
        let constant = Channel::constant(2, &rng.random_state_matrix(2)).unwrap();
        assert!(ea_capacity(&constant, 1e-9).unwrap().value.abs() < 1e-9);

        // random channel: the certified value dominates every sampled input
        let ch = Channel::random(2, 2, 2, &mut rng).unwrap();
        let cap = ea_capacity(&ch, 1e-8).unwrap();
        assert_eq!(cap.exactness, Exactness::ConcaveCertified);
        for _ in 0..50 {
            let rho = DensityMatrix::random(qubit(), &mut rng);
            assert!(mutual_info_of_channel(&ch, &rho).unwrap() <= cap.value + 1e-8);
        }
        assert!(ea_capacity(&ch, 0.0).is_err());
    }

    #[test]
    fn private_objective_examples() {
        let mut rng = Rng::new(5);
        let v = rng.random_isometry(2, 4).unwrap();
        let iso = Channel::from_kraus(vec![v]).unwrap();
        let basis = Ensemble::uniform_basis(qubit());
        assert!((private_oneshot_objective(&iso, &basis).unwrap() - 1.0).abs() < 1e-9);

        let s = DensityMatrix::random(qubit(), &mut rng);
        let same = Ensemble::new(vec![(0.4, s.clone()), (0.6, s)]).unwrap();
        let ch = Channel::random(2, 2, 2, &mut rng).unwrap();
        assert!(private_oneshot_objective(&ch, &same).unwrap().abs() < 1e-10);

        for &p in &[0.1, 0.3, 0.5] {
            let e = Channel::erasure(2, p).unwrap();
            let v = private_oneshot_objective(&e, &basis).unwrap();
            assert!((v - (1.0 - 2.0 * p)).abs() < 1e-9);
        }
    }

    #[test]
    fn holevo_heuristic_examples() {
        let id = holevo_cap_heuristic(&Channel::identity(3), 4, 9, 1).unwrap();
        assert!((id.value - 3f64.log2()).abs() < 1e-9);
        assert_eq!(id.exactness, Exactness::HeuristicLowerBound);

        let mut rng = Rng::new(6);
        let constant = Channel::constant(2, &rng.random_state_matrix(2)).unwrap();
        assert!(
            holevo_cap_heuristic(&constant, 3, 4, 2)
                .unwrap()
                .value
                .abs()
                < 1e-9
        );

        let ch = Channel::random(2, 2, 2, &mut rng).unwrap();
        let v = holevo_cap_heuristic(&ch, 4, 4, 3).unwrap().value;
        assert!(v <= 1.0 + 1e-9);
        assert!(holevo_cap_heuristic(&ch, 4, 3, 3).is_err());
    }

    #[test]
    fn erasure_holevo_heuristic_within_window() {
        for &(d, p) in &[(2, 0.3), (3, 0.6)] {
            let ch = Channel::erasure(d, p).unwrap();
            let v = holevo_cap_heuristic(&ch, 8, d * d, 7).unwrap().value;
            let exact = (1.0 - p) * (d as f64).log2();
            assert!(
                v <= exact + 1e-9 && v >= exact - 0.02,
                "d={d} p={p}: {v} vs {exact}"
            );
        }
    }

    #[test]
    fn erasure_closed_forms() {
        let caps = erasure_capacities(4, 0.25).unwrap();
        let get = |k| caps.iter().find(|c| c.kind == k).unwrap().value;
        assert!((get(CapacityKind::Classical) - 1.5).abs() < 1e-12);
        assert!((get(CapacityKind::HolevoCap) - 1.5).abs() < 1e-12);
        assert!((get(CapacityKind::Quantum) - 1.0).abs() < 1e-12);
        assert!((get(CapacityKind::Private) - 1.0).abs() < 1e-12);
        assert!(caps.iter().all(|c| c.exactness == Exactness::ClosedForm));

        let zero = erasure_capacities(3, 0.0).unwrap();
        assert!(zero.iter().all(|c| (c.value - 3f64.log2()).abs() < 1e-12));
        assert!(erasure_capacities(3, 1.0)
            .unwrap()
            .iter()
            .all(|c| c.value == 0.0));
        assert_eq!(
            erasure_capacity(2.0, 0.6, CapacityKind::Quantum).unwrap(),
            0.0
        );
        assert_eq!(
            erasure_capacity(2.0, 0.5, CapacityKind::Quantum).unwrap(),
            0.0
        );
        assert!(erasure_capacities(1, 0.1).is_err());
        assert!(erasure_capacities(2, 1.1).is_err());
        assert_eq!(
            "private-oneshot".parse::<CapacityKind>().unwrap(),
            CapacityKind::PrivateOneshot
        );
        assert!("bogus".parse::<CapacityKind>().is_err());
    }
}
