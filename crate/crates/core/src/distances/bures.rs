//! Bures distance `β(Φ, Ψ) = inf ‖V_Φ - V_Ψ‖` over common Stinespring
//! representations.
//!
//! With both isometries fixed into one `B ⊗ E`, the remaining freedom is a
//! unitary `U` on `E`, and for an input state `ρ`
//! `Tr ρ D†D = 2 - 2 Re Tr(U T_ρ)` where `D = V_Φ - (I ⊗ U) V_Ψ` and
//! `T_ρ = Tr_B(V_Ψ ρ V_Φ†)`. The best `U` for a fixed `ρ` is a polar factor;
//! refinement alternates that step with moving `ρ` toward the worst input.

use super::diamond::{diamond_norm_with, DiamondOptions};
use super::{DistanceInterval, Method};
use crate::channels::{pair_common_rep, Channel, ChannelPairRep};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, operator_norm, partial_trace, polar_unitary, ComplexMatrix, Rng, SubsystemShape,
};

#[derive(Clone, Debug)]
pub struct BuresOptions {
    /// Random starting inputs for the alignment refinement.
    pub restarts: usize,
    pub refine_steps: usize,
    pub seed: u64,
    /// Target width of the diamond interval used for the sandwich endpoints.
    pub diamond_tol: f64,
}

impl Default for BuresOptions {
    fn default() -> Self {
        Self {
            restarts: 16,
            refine_steps: 100,
            seed: 0,
            diamond_tol: 1e-7,
        }
    }
}

/// Enclosure of `β(Φ, Ψ)`: lower endpoint `½ · diamond.lower`, upper endpoint
/// the smaller of `√diamond.upper` and the best aligned isometry distance.
pub fn bures_distance(phi: &Channel, psi: &Channel) -> Result<DistanceInterval> {
    bures_distance_with(phi, psi, &BuresOptions::default())
}

pub fn bures_distance_with(
    phi: &Channel,
    psi: &Channel,
    opts: &BuresOptions,
) -> Result<DistanceInterval> {
    let rep = pair_common_rep(phi, psi)?;
    let diamond_opts = DiamondOptions {
        tol: opts.diamond_tol,
        seed: opts.seed,
        ..DiamondOptions::default()
    };
    let diamond = match diamond_norm_with(phi, psi, &diamond_opts) {
        Ok(iv) => iv,
        Err(Error::NotConverged { best, .. }) => best,
        Err(e) => return Err(e),
    };
    let (aligned, _) = Alignment::new(&rep).best(opts)?;
    let via_diamond = diamond.upper.max(0.0).sqrt();
    let (upper, upper_method) = if via_diamond < aligned {
        (via_diamond, Method::SqrtDiamond)
    } else {
        (aligned, Method::IsometryAlignment)
    };
    Ok(DistanceInterval {
        lower: 0.5 * diamond.lower,
        upper,
        lower_method: Method::HalfDiamond,
        upper_method,
    })
}

/// Upper bound on `β(Φ, Ψ)` from isometry alignment alone (no SDP).
pub fn bures_upper(phi: &Channel, psi: &Channel) -> Result<f64> {
    bures_upper_with(phi, psi, &BuresOptions::default())
}

pub fn bures_upper_with(phi: &Channel, psi: &Channel, opts: &BuresOptions) -> Result<f64> {
    Ok(Alignment::new(&pair_common_rep(phi, psi)?).best(opts)?.0)
}

/// Common representation `(V_Φ, (I ⊗ U) V_Ψ)` with the best environment
/// unitary found; its operator-norm distance is [`bures_upper_with`].
pub fn aligned_pair_rep(
    phi: &Channel,
    psi: &Channel,
    opts: &BuresOptions,
) -> Result<ChannelPairRep> {
    let rep = pair_common_rep(phi, psi)?;
    let (_, u) = Alignment::new(&rep).best(opts)?;
    let lifted = ComplexMatrix::identity(rep.dout).kron(&u)?;
    Ok(ChannelPairRep {
        vpsi: lifted.matmul(&rep.vpsi),
        ..rep
    })
}

struct Alignment<'a> {
    rep: &'a ChannelPairRep,
    shape: SubsystemShape,
    din: usize,
}

impl<'a> Alignment<'a> {
    fn new(rep: &'a ChannelPairRep) -> Self {
        let shape = SubsystemShape::new(&[("B", rep.dout), ("E", rep.denv)])
            .expect("channel dimensions are capped");
        Self {
            rep,
            shape,
            din: rep.vphi.cols(),
        }
    }

    fn difference(&self, u: &ComplexMatrix) -> ComplexMatrix {
        let lifted = ComplexMatrix::identity(self.rep.dout)
            .kron(u)
            .expect("shape matches");
        &self.rep.vphi - &lifted.matmul(&self.rep.vpsi)
    }

    fn objective(&self, u: &ComplexMatrix) -> f64 {
        operator_norm(&self.difference(u))
    }

    /// Unitary maximizing `Re Tr(U T_ρ)`.
    fn best_unitary(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let cross = self.rep.vpsi.matmul(&rho.matmul_adjoint(&self.rep.vphi));
        let t = partial_trace(&cross, &self.shape, &["E"])?;
        Ok(polar_unitary(&t)?.adjoint())
    }

    /// Frank–Wolfe style refinement on the input state; returns the best
    /// unitary visited and its operator-norm distance.
    fn refine(&self, mut rho: ComplexMatrix, steps: usize) -> Result<(f64, ComplexMatrix)> {
        let mut best = (f64::INFINITY, ComplexMatrix::identity(self.rep.denv));
        for k in 0..steps {
            let u = self.best_unitary(&rho)?;
            let d = self.difference(&u);
            let gram = d.adjoint_matmul(&d).hermitian_part();
            let eig = hermitian_eig(&gram)?;
            let value = eig.max().max(0.0).sqrt();
            if value < best.0 {
                best = (value, u);
            }
            let w = eig.vector(0);
            let gamma = 1.0 / (k as f64 + 2.0);
            rho = &rho.scale(1.0 - gamma) + &ComplexMatrix::outer(&w, &w).scale(gamma);
        }
        Ok(best)
    }

    fn best(&self, opts: &BuresOptions) -> Result<(f64, ComplexMatrix)> {
        let id_e = ComplexMatrix::identity(self.rep.denv);
        let mut best = (self.objective(&id_e), id_e);
        if best.0 == 0.0 {
            return Ok(best);
        }
        let mut consider = |candidate: (f64, ComplexMatrix)| {
            if candidate.0 < best.0 {
                best = candidate;
            }
        };
        // Frobenius-optimal alignment: ρ = I (unnormalized) in T_ρ.
        let frobenius = self.best_unitary(&ComplexMatrix::identity(self.din))?;
        consider((self.objective(&frobenius), frobenius));
        let steps = opts.refine_steps.max(1);
        consider(self.refine(
            ComplexMatrix::identity(self.din).scale(1.0 / self.din as f64),
            steps,
        )?);
        let mut rng = Rng::new(opts.seed);
        for _ in 0..opts.restarts {
            let rho = rng.random_state_matrix(self.din);
            consider(self.refine(rho, steps)?);
        }
        Ok(best)
    }
}
