//! Seeded falsification campaigns: random instance generators for every
//! bound, run trial-parallel and merged in trial order.

use std::collections::BTreeMap;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::checks::{
    check_almost_convexity, check_auxiliary, check_ensemble_continuity, check_prop1, check_prop2,
    check_prop3, check_prop4, check_prop5_erasure, check_qc_mutual_information, ChannelDistance,
    EpsSource, Prop2Flags,
};
use super::{rhs_prop5_log2, BoundReport};
use crate::capacities::CapacityKind;
use crate::channels::Channel;
use crate::distances::erasure_bures_upper;
use crate::ensembles::Ensemble;
use crate::error::{argument, Error, Result};
use crate::linalg::{Rng, SubsystemShape};
use crate::state::DensityMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CampaignKind {
    Prop1,
    Prop2,
    Prop3,
    Prop4,
    Prop5,
    Auxiliary,
}

impl FromStr for CampaignKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "prop1" => Self::Prop1,
            "prop2" => Self::Prop2,
            "prop3" => Self::Prop3,
            "prop4" => Self::Prop4,
            "prop5" => Self::Prop5,
            "aux" => Self::Auxiliary,
            _ => return argument(format!("unknown bound {s:?}")),
        })
    }
}

#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub trials: usize,
    pub seed: u64,
    /// Subsystem dimensions by label (`A`, `B`, `C`, `D`, `E`); missing
    /// labels get per-bound defaults, some of them drawn per trial.
    pub dims: BTreeMap<String, usize>,
    /// Tensor power for the n-copy bound.
    pub n: usize,
    pub same_channel: bool,
    pub same_state: bool,
    pub qc: bool,
    pub eps_source: EpsSource,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            seed: 0,
            dims: BTreeMap::new(),
            n: 2,
            same_channel: false,
            same_state: false,
            qc: false,
            eps_source: EpsSource::Analytic,
        }
    }
}

impl CampaignConfig {
    fn dim(&self, label: &str, rng: &mut Rng, lo: usize, hi: usize) -> usize {
        self.dims
            .get(label)
            .copied()
            .unwrap_or_else(|| rng.int_range(lo, hi))
    }
}

/// Runs `trials` independent instances; trial `t` uses the child seed
/// `Rng::child_seed(seed, t)`, so any single trial can be replayed.
pub fn run_campaign(kind: CampaignKind, cfg: &CampaignConfig) -> Result<Vec<BoundReport>> {
    if let Some((label, _)) = cfg.dims.iter().find(|(_, &d)| d == 0) {
        return argument(format!("dimension of {label} must be positive"));
    }
    if kind == CampaignKind::Prop4 && cfg.n == 0 {
        return argument("tensor power n must be at least 1");
    }
    let per_trial: Vec<Vec<BoundReport>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let seed = Rng::child_seed(cfg.seed, t as u64);
            let mut rng = Rng::new(seed);
            let reports = trial(kind, cfg, &mut rng)?;
            Ok(reports.into_iter().map(|r| r.with_trial(t, seed)).collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

fn trial(kind: CampaignKind, cfg: &CampaignConfig, rng: &mut Rng) -> Result<Vec<BoundReport>> {
    match kind {
        CampaignKind::Prop1 => prop1_trial(cfg, rng).map(|r| vec![r]),
        CampaignKind::Prop2 => prop2_trial(cfg, rng).map(|r| vec![r]),
        CampaignKind::Prop3 => prop3_trial(cfg, rng).map(|r| vec![r]),
        CampaignKind::Prop4 => prop4_trial(cfg, rng).map(|r| vec![r]),
        CampaignKind::Prop5 => prop5_trial(cfg, rng),
        CampaignKind::Auxiliary => aux_trial(cfg, rng),
    }
}

/// Mixing weights toward an independent state; 1 gives an unrelated pair.
const CLOSENESS: [f64; 5] = [1e-3, 1e-2, 0.1, 0.5, 1.0];

fn closeness(rng: &mut Rng) -> f64 {
    CLOSENESS[rng.int_range(0, CLOSENESS.len() - 1)]
}

fn random_state(shape: SubsystemShape, rng: &mut Rng) -> DensityMatrix {
    let rank = rng.int_range(1, shape.total_dim());
    DensityMatrix::random_with_rank(shape, rank, rng)
}

fn nearby_state(rho: &DensityMatrix, rng: &mut Rng) -> Result<DensityMatrix> {
    let t = closeness(rng);
    let other = random_state(rho.shape().clone(), rng);
    other.mix(t, rho)
}

fn nearby_ensemble(e: &Ensemble, rng: &mut Rng) -> Result<Ensemble> {
    let t = closeness(rng);
    let q = rng.random_probabilities(e.len());
    let items = e
        .iter()
        .zip(q)
        .map(|((p, s), qi)| {
            let other = random_state(s.shape().clone(), rng);
            Ok(((1.0 - t) * p + t * qi, other.mix(t, s)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ensemble::new(items)
}

/// Isometry channel `C^r -> C^d`, used to confine supports to a subspace.
fn embedding(r: usize, d: usize, rng: &mut Rng) -> Result<Channel> {
    Channel::from_kraus(vec![rng.random_isometry(r, d)?])
}

/// With probability ½, pushes factor `label` of `rho` through an embedding
/// of a smaller space, so its marginal has deficient support.
fn maybe_confine(
    shape: &SubsystemShape,
    label: &str,
    rng: &mut Rng,
) -> Result<(SubsystemShape, Option<Channel>)> {
    let d = shape.dim_of(label)?;
    if d < 2 || rng.uniform() < 0.5 {
        return Ok((shape.clone(), None));
    }
    let r = rng.int_range(1, d - 1);
    Ok((shape.replace(label, label, r)?, Some(embedding(r, d, rng)?)))
}

fn channel_pair(
    cfg: &CampaignConfig,
    din: usize,
    dout: usize,
    rng: &mut Rng,
) -> Result<(Channel, Channel)> {
    let min_kraus = din.div_ceil(dout);
    let kraus = rng.int_range(min_kraus, min_kraus + 2);
    let phi = Channel::random(din, dout, kraus, rng)?;
    if cfg.same_channel {
        return Ok((phi.clone(), phi));
    }
    let psi = match rng.int_range(0, 4) {
        0 => Channel::random(din, dout, kraus, rng)?,
        level => phi.perturbed([1e-3, 1e-2, 0.1, 0.3][level - 1], kraus, rng)?,
    };
    Ok((phi, psi))
}

fn prop1_trial(cfg: &CampaignConfig, rng: &mut Rng) -> Result<BoundReport> {
    let dims: Vec<(&str, usize)> = ["A", "B", "C", "E"]
        .into_iter()
        .map(|l| (l, cfg.dims.get(l).copied().unwrap_or(2)))
        .collect();
    let (rho, sigma) = if cfg.qc {
        let ae = SubsystemShape::new(&[dims[0], dims[3]])?;
        let letters = dims[1].1 * dims[2].1;
        let target = SubsystemShape::new(&[dims[0], dims[3], dims[1], dims[2]])?;
        let e = Ensemble::random(ae, letters, rng);
        let f = if cfg.same_state {
            e.clone()
        } else {
            nearby_ensemble(&e, rng)?
        };
        (
            e.qc_state_labelled("R")?.reshaped(target.clone())?,
            f.qc_state_labelled("R")?.reshaped(target)?,
        )
    } else {
        let rho = random_state(SubsystemShape::new(&dims)?, rng);
        let sigma = if cfg.same_state {
            rho.clone()
        } else {
            nearby_state(&rho, rng)?
        };
        (rho, sigma)
    };
    check_prop1(&rho, &sigma, &["A"], &["B"], &["C"], &["E"], cfg.qc, false)
}

fn prop2_trial(cfg: &CampaignConfig, rng: &mut Rng) -> Result<BoundReport> {
    let din = cfg.dim("A", rng, 2, 3);
    let dout = cfg.dim("B", rng, 2, 3);
    let (phi, psi) = channel_pair(cfg, din, dout, rng)?;
    let shape = SubsystemShape::single("A", din)?;
    let (inner, confine) = maybe_confine(&shape, "A", rng)?;
    let m = rng.int_range(1, 4);
    let mut e = Ensemble::random(inner, m, rng);
    if let Some(w) = &confine {
        e = e.map_states(|s| w.apply(s))?;
    }
    let f = if cfg.same_state {
        e.clone()
    } else {
        let f = nearby_ensemble(&e, rng)?;
        match &confine {
            // keep f inside the same subspace by mixing only within it
            Some(_) => Ensemble::new(
                e.iter()
                    .zip(f.probabilities())
                    .zip(rng.random_probabilities(e.len()))
                    .map(|(((_, s), q), r)| (0.5 * (q + r), s.clone()))
                    .collect(),
            )?,
            None => f,
        }
    };
    let beta = ChannelDistance::bures_upper(&phi, &psi)?;
    let flags = Prop2Flags {
        same_channel: cfg.same_channel,
        same_outputs: false,
    };
    check_prop2(&phi, &psi, &e, &f, beta, flags)
}

fn prop3_state(
    cfg: &CampaignConfig,
    din: usize,
    rng: &mut Rng,
) -> Result<(DensityMatrix, DensityMatrix, bool)> {
    let dc = cfg.dims.get("C").copied().unwrap_or(2);
    let dd = cfg.dims.get("D").copied().unwrap_or(2);
    let mut factors = vec![("A", din)];
    if dc > 1 {
        factors.push(("C", dc));
    }
    factors.push(("D", dd));
    let shape = SubsystemShape::new(&factors)?;
    let (inner, confine) = maybe_confine(&shape, "A", rng)?;
    let rho = random_state(inner, rng);
    let sigma = if cfg.same_state {
        rho.clone()
    } else {
        nearby_state(&rho, rng)?
    };
    match confine {
        Some(w) => Ok((w.apply_on(&rho, "A")?, w.apply_on(&sigma, "A")?, dc > 1)),
        None => Ok((rho, sigma, dc > 1)),
    }
}

fn prop3_trial(cfg: &CampaignConfig, rng: &mut Rng) -> Result<BoundReport> {
    let din = cfg.dims.get("A").copied().unwrap_or(2);
    let dout = cfg.dim("B", rng, 2, 3);
    let (phi, psi) = channel_pair(cfg, din, dout, rng)?;
    let (rho, sigma, has_c) = prop3_state(cfg, din, rng)?;
    let beta = ChannelDistance::bures_upper(&phi, &psi)?;
    let c: &[&str] = if has_c { &["C"] } else { &[] };
    check_prop3(
        &phi,
        &psi,
        &rho,
        &sigma,
        "A",
        c,
        &["D"],
        beta,
        cfg.same_channel,
    )
}

fn prop4_trial(cfg: &CampaignConfig, rng: &mut Rng) -> Result<BoundReport> {
    let n = cfg.n;
    let din = cfg.dims.get("A").copied().unwrap_or(2);
    let dout = cfg.dims.get("B").copied().unwrap_or(2);
    let dc = cfg.dims.get("C").copied().unwrap_or(2);
    let dd = cfg.dims.get("D").copied().unwrap_or(2);
    let (phi, psi) = channel_pair(cfg, din, dout, rng)?;
    let labels: Vec<String> = (1..=n).map(|k| format!("A{k}")).collect();
    let mut factors: Vec<(&str, usize)> = labels.iter().map(|l| (l.as_str(), din)).collect();
    if dc > 1 {
        factors.push(("C", dc));
    }
    factors.push(("D", dd));
    let mut shape = SubsystemShape::new(&factors)?;
    let mut embeddings = Vec::new();
    for l in &labels {
        let (s, w) = maybe_confine(&shape, l, rng)?;
        shape = s;
        embeddings.push(w);
    }
    let mut rho = random_state(shape, rng);
    for (l, w) in labels.iter().zip(&embeddings) {
        if let Some(w) = w {
            rho = w.apply_on(&rho, l)?;
        }
    }
    let a: Vec<&str> = labels.iter().map(String::as_str).collect();
    let c: &[&str] = if dc > 1 { &["C"] } else { &[] };
    let beta = ChannelDistance::bures_upper(&phi, &psi)?;
    check_prop4(&phi, &psi, &rho, &a, c, &["D"], beta)
}

fn prop5_trial(cfg: &CampaignConfig, rng: &mut Rng) -> Result<Vec<BoundReport>> {
    let d = cfg.dim("A", rng, 2, 4);
    let (p, q) = if rng.uniform() < 0.5 {
        (0.5 - 0.5 * rng.uniform(), 0.5)
    } else {
        (rng.uniform(), rng.uniform())
    };
    let (p, q) = if cfg.same_channel { (p, p) } else { (p, q) };
    check_prop5_erasure(d, p, q, cfg.eps_source)
}

fn aux_trial(cfg: &CampaignConfig, rng: &mut Rng) -> Result<Vec<BoundReport>> {
    let da = cfg.dims.get("A").copied().unwrap_or(2);
    let db = cfg.dims.get("B").copied().unwrap_or(2);
    let dc = cfg.dims.get("C").copied().unwrap_or(2);
    let shape = SubsystemShape::new(&[("A", da), ("B", db), ("C", dc)])?;
    let omega = random_state(shape.clone(), rng);
    let mut out = check_auxiliary(&omega, &["A"], &["B"], &["C"])?;

    let a_shape = SubsystemShape::single("A", da)?;
    let m = rng.int_range(1, 4);
    let e = Ensemble::random(a_shape, m, rng);
    out.push(check_qc_mutual_information(&e)?);

    let sigma = random_state(shape, rng);
    let lambda = rng.uniform();
    out.push(check_almost_convexity(
        &omega,
        &sigma,
        lambda,
        &["A"],
        &["B"],
        &["C"],
    )?);

    let f = if cfg.same_state {
        e.clone()
    } else {
        nearby_ensemble(&e, rng)?
    };
    out.push(check_ensemble_continuity(&e, &f)?);
    Ok(out)
}

/// One row of the erasure tightness table, evaluated from closed forms only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TightnessRow {
    pub x: f64,
    pub log2_d: f64,
    pub beta_upper: f64,
    /// `Q(Φ_{½-x}) - Q(Φ_½) = 2x log₂ d`.
    pub lhs_q: f64,
    pub rhs_qc: f64,
    pub ratio: f64,
}

pub fn tightness_row(x: f64, log2_d: f64) -> Result<TightnessRow> {
    if !(log2_d >= 1.0) || !log2_d.is_finite() {
        return argument(format!("log2 d = {log2_d} must be finite and at least 1"));
    }
    let beta_upper = erasure_bures_upper(2, x)?;
    let lhs_q = 2.0 * x * log2_d;
    let rhs_qc = rhs_prop5_log2(CapacityKind::Quantum, log2_d, beta_upper)?;
    let ratio = if x == 0.0 { 1.0 } else { lhs_q / rhs_qc };
    Ok(TightnessRow {
        x,
        log2_d,
        beta_upper,
        lhs_q,
        rhs_qc,
        ratio,
    })
}

/// `2x log₂ d / rhs` of the quantum-capacity bound at the erasure pair
/// `(Φ_{½-x}, Φ_½)`; 1 at `x = 0` by continuity of the limit.
pub fn tightness_ratio(x: f64, log2_d: f64) -> Result<f64> {
    tightness_row(x, log2_d).map(|r| r.ratio)
}
