//! Instance checkers: each computes both sides of one bound on concrete
//! states and channels.

use std::fmt;
use std::str::FromStr;

use super::{
    prop5_bound_id, rhs_prop1, rhs_prop2, rhs_prop3, rhs_prop4, rhs_prop5, BoundReport,
    EpsProvenance,
};
use crate::capacities::{erasure_capacity, CapacityKind};
use crate::channels::Channel;
use crate::distances::{bures_upper, erasure_bures_upper};
use crate::ensembles::{ensemble_distance, Ensemble, CLASSICAL_LABEL};
use crate::entropic::{cmi, g, h2, marginal_entropy_of, mutual_information};
use crate::error::{argument, contract, Error, Result};
use crate::linalg::{support_dim, trace_norm, ComplexMatrix, RANK_TOL};
use crate::state::DensityMatrix;

/// Off-block trace-norm mass tolerated by the qc structure check.
const QC_BLOCK_TOL: f64 = 1e-9;
/// Entry-wise tolerance of the same-channel and same-outputs checks.
const SAME_TOL: f64 = 1e-9;

/// A channel distance `β` consumed as part of ε, with its provenance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelDistance {
    pub value: f64,
    pub provenance: EpsProvenance,
}

impl ChannelDistance {
    pub fn zero() -> Self {
        Self {
            value: 0.0,
            provenance: EpsProvenance::Exact,
        }
    }

    /// Upper endpoint of the isometry-alignment enclosure, or an exact zero
    /// for numerically equal channels.
    pub fn bures_upper(phi: &Channel, psi: &Channel) -> Result<Self> {
        if phi.approx_eq(psi, 1e-12) {
            return Ok(Self::zero());
        }
        Ok(Self {
            value: bures_upper(phi, psi)?,
            provenance: EpsProvenance::IntervalUpper,
        })
    }

    pub fn analytic(value: f64) -> Self {
        Self {
            value,
            provenance: EpsProvenance::Analytic,
        }
    }
}

/// Where the channel distance of the erasure checks comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EpsSource {
    /// Numerical upper endpoint for every pair.
    IntervalUpper,
    /// Closed form when the pair is `{½ ∓ x, ½}`, numerical otherwise.
    #[default]
    Analytic,
}

impl EpsSource {
    pub fn as_str(self) -> &'static str {
        match self {
            EpsSource::IntervalUpper => "interval-upper",
            EpsSource::Analytic => "analytic",
        }
    }
}

impl fmt::Display for EpsSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EpsSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interval-upper" => Ok(Self::IntervalUpper),
            "analytic" => Ok(Self::Analytic),
            _ => argument(format!("unknown eps source {s:?}")),
        }
    }
}

fn combine(exact_part: f64, beta: ChannelDistance) -> (f64, EpsProvenance) {
    (exact_part + beta.value, beta.provenance)
}

fn require_distinct_cover(rho: &DensityMatrix, groups: &[&[&str]]) -> Result<()> {
    let all: Vec<&str> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    rho.shape().positions(&all)?;
    if all.len() != rho.shape().len() {
        return argument(format!(
            "labels {all:?} do not cover the factors of {}",
            rho.shape()
        ));
    }
    Ok(())
}

/// Whether `rho` is block diagonal in the computational basis of `classical`,
/// i.e. `Σ_i p_i τ_i ⊗ |i><i|`.
fn is_qc(rho: &DensityMatrix, quantum: &[&str], classical: &[&str]) -> Result<bool> {
    let order: Vec<&str> = quantum.iter().chain(classical).copied().collect();
    let permuted = rho.permuted(&order)?;
    let m = permuted.matrix();
    let block = rho.shape().dim_of_set(classical)?;
    let off = ComplexMatrix::from_fn(m.rows(), m.cols(), |r, c| {
        if r % block == c % block {
            num_complex::Complex64::new(0.0, 0.0)
        } else {
            m[(r, c)]
        }
    });
    Ok(trace_norm(&off) <= QC_BLOCK_TOL)
}

/// Conditional mutual information `|I(A:B|C)_ρ - I(A:B|C)_σ|` for
/// extensions on `ABCE`, with `d` the joint support dimension of the `AE`
/// marginals. `qc` asserts (and verifies) that both extensions are
/// block diagonal over the computational basis of `BC`; `concave` is a
/// caller assertion that the difference is concave along the segment.
#[allow(clippy::too_many_arguments)]
pub fn check_prop1(
    rho_ext: &DensityMatrix,
    sigma_ext: &DensityMatrix,
    a: &[&str],
    b: &[&str],
    c: &[&str],
    e: &[&str],
    qc: bool,
    concave: bool,
) -> Result<BoundReport> {
    rho_ext.same_shape(sigma_ext)?;
    require_distinct_cover(rho_ext, &[a, b, c, e])?;
    if a.is_empty() || b.is_empty() {
        return argument("systems A and B must be non-empty");
    }
    let ae: Vec<&str> = a.iter().chain(e).copied().collect();
    let bc: Vec<&str> = b.iter().chain(c).copied().collect();
    if qc {
        for (name, s) in [("rho", rho_ext), ("sigma", sigma_ext)] {
            if !is_qc(s, &ae, &bc)? {
                return contract(format!(
                    "{name} is not a qc-state over the computational basis of {bc:?}"
                ));
            }
        }
    }
    let (rho_ae, sigma_ae) = (rho_ext.marginal(&ae)?, sigma_ext.marginal(&ae)?);
    let d = support_dim(&[rho_ae.matrix(), sigma_ae.matrix()], RANK_TOL)?.max(1);
    let eps = rho_ext.trace_distance(sigma_ext)?;
    let lhs = (cmi(rho_ext, a, b, c)? - cmi(sigma_ext, a, b, c)?).abs();
    let rhs = rhs_prop1(d as f64, eps, qc, concave)?;
    let id = match (qc, concave) {
        (false, false) => "prop1",
        (true, false) => "prop1-qc",
        (false, true) => "prop1-concave",
        (true, true) => "prop1-qc-concave",
    };
    Ok(BoundReport::new(
        id,
        d as f64,
        rho_ae.dim(),
        eps,
        EpsProvenance::Exact,
        lhs,
        rhs,
    ))
}

/// Variant flags of the output Holevo quantity bound; both are verified.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Prop2Flags {
    pub same_channel: bool,
    pub same_outputs: bool,
}

/// Output Holevo quantities `|χ_Φ(e) - χ_Ψ(f)|` with
/// `ε = ensemble_distance(e, f) + β`.
pub fn check_prop2(
    phi: &Channel,
    psi: &Channel,
    e: &Ensemble,
    f: &Ensemble,
    beta: ChannelDistance,
    flags: Prop2Flags,
) -> Result<BoundReport> {
    if (phi.din(), phi.dout()) != (psi.din(), psi.dout()) {
        return argument("channels must share input and output dimensions");
    }
    if e.shape() != f.shape() {
        return argument(format!(
            "ensembles on different spaces: {} vs {}",
            e.shape(),
            f.shape()
        ));
    }
    if flags.same_channel && !phi.approx_eq(psi, SAME_TOL) {
        return contract("same_channel asserted for different channels");
    }
    let out_e = e.map_states(|s| phi.apply(s))?;
    let out_f = f.map_states(|s| psi.apply(s))?;
    if flags.same_outputs {
        let m = e.len().max(f.len());
        let (pe, pf) = (out_e.padded(m), out_f.padded(m));
        let differ = pe
            .states()
            .iter()
            .zip(pf.states())
            .any(|(x, y)| x.matrix().max_abs_diff(y.matrix()) > SAME_TOL);
        if differ {
            return contract("same_outputs asserted but Φ(ρ_i) ≠ Ψ(σ_i)");
        }
    }
    let beta = if flags.same_channel {
        ChannelDistance::zero()
    } else {
        beta
    };
    let (eps, provenance) = combine(ensemble_distance(e, f)?, beta);
    let supports: Vec<&ComplexMatrix> = e
        .states()
        .iter()
        .chain(f.states())
        .map(|s| s.matrix())
        .collect();
    let d_a = support_dim(&supports, RANK_TOL)?.max(1) as f64;
    let lhs = (out_e.holevo_quantity() - out_f.holevo_quantity()).abs();
    let rhs = rhs_prop2(d_a, eps, flags.same_channel, flags.same_outputs)?;
    let id = match (flags.same_channel, flags.same_outputs) {
        (false, false) => "prop2",
        (true, false) => "prop2-same-channel",
        (false, true) => "prop2-same-outputs",
        (true, true) => "prop2-same-channel-same-outputs",
    };
    Ok(BoundReport::new(
        id,
        d_a,
        phi.din(),
        eps,
        provenance,
        lhs,
        rhs,
    ))
}

/// Output conditional mutual information `|I(B:D|C)` at `(Φ ⊗ id)(ρ)` minus
/// the same at `(Ψ ⊗ id)(σ)|`; the channel acts on factor `a`, whose output
/// keeps the label. `c` may be empty.
#[allow(clippy::too_many_arguments)]
pub fn check_prop3(
    phi: &Channel,
    psi: &Channel,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    a: &str,
    c: &[&str],
    d: &[&str],
    beta: ChannelDistance,
    same_channel: bool,
) -> Result<BoundReport> {
    rho.same_shape(sigma)?;
    if same_channel && !phi.approx_eq(psi, SAME_TOL) {
        return contract("same_channel asserted for different channels");
    }
    let (rho_a, sigma_a) = (rho.marginal(&[a])?, sigma.marginal(&[a])?);
    let d_a = support_dim(&[rho_a.matrix(), sigma_a.matrix()], RANK_TOL)?.max(1) as f64;
    let beta = if same_channel {
        ChannelDistance::zero()
    } else {
        beta
    };
    let (eps, provenance) = combine(rho.trace_distance(sigma)?, beta);
    let out_rho = phi.apply_on(rho, a)?;
    let out_sigma = psi.apply_on(sigma, a)?;
    let lhs = (cmi(&out_rho, &[a], d, c)? - cmi(&out_sigma, &[a], d, c)?).abs();
    let rhs = rhs_prop3(d_a, eps, same_channel)?;
    let id = if same_channel {
        "prop3-same-channel"
    } else {
        "prop3"
    };
    Ok(BoundReport::new(
        id,
        d_a,
        phi.din(),
        eps,
        provenance,
        lhs,
        rhs,
    ))
}

/// Tensor powers on one input: `|I(Bⁿ:D|C)` under `Φ^⊗n` minus the same under
/// `Ψ^⊗n|`, channels applied to each factor of `a` (which keep their labels).
/// `dA` is the geometric mean of the ranks of the `A_k` marginals.
pub fn check_prop4(
    phi: &Channel,
    psi: &Channel,
    rho: &DensityMatrix,
    a: &[&str],
    c: &[&str],
    d: &[&str],
    beta: ChannelDistance,
) -> Result<BoundReport> {
    if a.is_empty() {
        return argument("tensor power needs at least one input factor");
    }
    if (phi.din(), phi.dout()) != (psi.din(), psi.dout()) {
        return argument("channels must share input and output dimensions");
    }
    let mut log_ranks = 0.0;
    let mut full = true;
    for k in a {
        let marginal = rho.marginal(&[*k])?;
        let r = support_dim(&[marginal.matrix()], RANK_TOL)?.max(1);
        full &= r == marginal.dim();
        log_ranks += (r as f64).ln();
    }
    let n = a.len();
    let d_a = if full {
        phi.din() as f64
    } else {
        (log_ranks / n as f64).exp()
    };
    let (mut out_phi, mut out_psi) = (rho.clone(), rho.clone());
    for k in a {
        out_phi = phi.apply_on(&out_phi, k)?;
        out_psi = psi.apply_on(&out_psi, k)?;
    }
    let lhs = (cmi(&out_phi, a, d, c)? - cmi(&out_psi, a, d, c)?).abs();
    let rhs = rhs_prop4(n, d_a, beta.value)?;
    Ok(BoundReport::new(
        "prop4",
        d_a,
        phi.din(),
        beta.value,
        beta.provenance,
        lhs,
        rhs,
    ))
}

/// The five capacity bounds on the erasure pair `(Φ_p, Φ_q)` with closed-form
/// left-hand sides.
pub fn check_prop5_erasure(
    d: usize,
    p: f64,
    q: f64,
    source: EpsSource,
) -> Result<Vec<BoundReport>> {
    if d < 2 {
        return argument(format!("erasure checks need d >= 2, got {d}"));
    }
    for t in [p, q] {
        if !(0.0..=1.0).contains(&t) {
            return argument(format!("erasure probability {t} outside [0, 1]"));
        }
    }
    let beta = if p == q {
        ChannelDistance::zero()
    } else if source == EpsSource::Analytic && (p == 0.5 || q == 0.5) {
        // ‖V_p - V_½‖ is symmetric in p about ½.
        let other = if p == 0.5 { q } else { p };
        ChannelDistance::analytic(erasure_bures_upper(d, (other - 0.5).abs())?)
    } else {
        ChannelDistance::bures_upper(&Channel::erasure(d, p)?, &Channel::erasure(d, q)?)?
    };
    let log2_d = (d as f64).log2();
    CapacityKind::BOUNDED
        .into_iter()
        .map(|kind| {
            let lhs =
                (erasure_capacity(log2_d, p, kind)? - erasure_capacity(log2_d, q, kind)?).abs();
            let rhs = rhs_prop5(kind, d as f64, beta.value)?;
            Ok(BoundReport::new(
                prop5_bound_id(kind),
                d as f64,
                d,
                beta.value,
                beta.provenance,
                lhs,
                rhs,
            ))
        })
        .collect()
}

/// `I(A:B) ≤ 2 min{H_A, H_B}` and, for non-empty `c`,
/// `I(A:B|C) ≤ 2 min{H_A, H_B, H_AC, H_BC}`.
pub fn check_auxiliary(
    omega: &DensityMatrix,
    a: &[&str],
    b: &[&str],
    c: &[&str],
) -> Result<Vec<BoundReport>> {
    let h = |labels: &[&str]| marginal_entropy_of(omega, labels);
    let (ha, hb) = (h(a)?, h(b)?);
    let d_a = omega.shape().dim_of_set(a)? as f64;
    let mut out = vec![BoundReport::new(
        "mi-ub",
        d_a,
        omega.dim(),
        0.0,
        EpsProvenance::Exact,
        mutual_information(omega, a, b)?,
        2.0 * ha.min(hb),
    )];
    if !c.is_empty() {
        let ac: Vec<&str> = a.iter().chain(c).copied().collect();
        let bc: Vec<&str> = b.iter().chain(c).copied().collect();
        let bound = [ha, hb, h(&ac)?, h(&bc)?]
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        out.push(BoundReport::new(
            "cmi-ub",
            d_a,
            omega.dim(),
            0.0,
            EpsProvenance::Exact,
            cmi(omega, a, b, c)?,
            2.0 * bound,
        ));
    }
    Ok(out)
}

/// `I(A:X) ≤ min{H_A, H_X}` on the qc-state of an ensemble.
pub fn check_qc_mutual_information(e: &Ensemble) -> Result<BoundReport> {
    let omega = e.qc_state()?;
    let quantum: Vec<&str> = e.shape().labels().iter().map(String::as_str).collect();
    let x = [CLASSICAL_LABEL];
    let ha = marginal_entropy_of(&omega, &quantum)?;
    let hx = marginal_entropy_of(&omega, &x)?;
    let lhs = mutual_information(&omega, &quantum, &x)?;
    Ok(BoundReport::new(
        "mi-ub-qc",
        e.shape().total_dim() as f64,
        omega.dim(),
        0.0,
        EpsProvenance::Exact,
        lhs,
        ha.min(hx),
    ))
}

/// `|λ I_ρ + (1-λ) I_σ - I_{λρ+(1-λ)σ}| ≤ h₂(λ)` for `I = I(A:B|C)`; the
/// report's ε column carries λ.
pub fn check_almost_convexity(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    lambda: f64,
    a: &[&str],
    b: &[&str],
    c: &[&str],
) -> Result<BoundReport> {
    let mix = rho.mix(lambda, sigma)?;
    let lhs = (lambda * cmi(rho, a, b, c)? + (1.0 - lambda) * cmi(sigma, a, b, c)?
        - cmi(&mix, a, b, c)?)
    .abs();
    Ok(BoundReport::new(
        "f-c-b",
        rho.shape().dim_of_set(a)? as f64,
        rho.dim(),
        lambda,
        EpsProvenance::Exact,
        lhs,
        h2(lambda)?,
    ))
}

/// `|χ(e) - χ(f)| ≤ ε log₂ min{dim, m} + 2g(ε)` with ε the ensemble distance
/// and `m` the common (padded) length.
pub fn check_ensemble_continuity(e: &Ensemble, f: &Ensemble) -> Result<BoundReport> {
    let eps = ensemble_distance(e, f)?;
    let dim = e.shape().total_dim();
    let m = e.len().max(f.len());
    let k = dim.min(m) as f64;
    let lhs = (e.holevo_quantity() - f.holevo_quantity()).abs();
    let rhs = eps * k.log2() + 2.0 * g(eps)?;
    Ok(BoundReport::new(
        "chi-cb+",
        k,
        dim,
        eps,
        EpsProvenance::Exact,
        lhs,
        rhs,
    ))
}
