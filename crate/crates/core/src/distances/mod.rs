//! Channel distances as certified intervals: the diamond norm of a channel
//! difference and the Bures distance between Stinespring isometries.

mod bures;
mod diamond;

pub use bures::{
    aligned_pair_rep, bures_distance, bures_distance_with, bures_upper, bures_upper_with,
    BuresOptions,
};
pub use diamond::{
    diamond_norm, diamond_norm_with, DiamondOptions, CERTIFIED_DIM_CAP, DIAMOND_ITERATION_CAP,
};

use serde::Serialize;

use crate::error::{argument, Result};

/// How an interval endpoint was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Trace norm of the difference on an explicit pure probe input.
    PureProbe,
    /// Feasible point of the dual SDP whose gap to the probe bound is certified.
    SdpCertified,
    /// Feasible point of the dual SDP without a gap certificate.
    SdpFeasible,
    /// Half of a diamond-norm lower endpoint.
    HalfDiamond,
    /// Square root of a diamond-norm upper endpoint.
    SqrtDiamond,
    /// Operator norm of an explicit pair of common Stinespring isometries.
    IsometryAlignment,
    /// Closed-form expression.
    Analytic,
    /// Exact value.
    Exact,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::PureProbe => "pure-probe",
            Method::SdpCertified => "sdp-certified",
            Method::SdpFeasible => "sdp-feasible",
            Method::HalfDiamond => "half-diamond",
            Method::SqrtDiamond => "sqrt-diamond",
            Method::IsometryAlignment => "isometry-alignment",
            Method::Analytic => "analytic",
            Method::Exact => "exact",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Enclosure `lower ≤ value ≤ upper` of a channel distance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceInterval {
    pub lower: f64,
    pub upper: f64,
    pub lower_method: Method,
    pub upper_method: Method,
}

impl DistanceInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64, slack: f64) -> bool {
        self.lower - slack <= value && value <= self.upper + slack
    }

    pub fn overlaps(&self, other: &Self, slack: f64) -> bool {
        self.lower <= other.upper + slack && other.lower <= self.upper + slack
    }
}

/// Tolerance of the sandwich relation checks between diamond and Bures intervals.
pub const SANDWICH_SLACK: f64 = 1e-9;

/// `½·diamond.lower ≤ bures.upper` and `bures.lower ≤ √diamond.upper`, both
/// within [`SANDWICH_SLACK`].
pub fn sandwich_holds(diamond: &DistanceInterval, bures: &DistanceInterval) -> bool {
    0.5 * diamond.lower <= bures.upper + SANDWICH_SLACK
        && bures.lower <= diamond.upper.max(0.0).sqrt() + SANDWICH_SLACK
}

/// Bures distance bound `√(2 - √(1-2x) - √(1+2x))` for the erasure pair
/// `(Φ_{½-x}, Φ_½)` on a `d`-dimensional input; independent of `d`.
pub fn erasure_bures_upper(d: usize, x: f64) -> Result<f64> {
    if d == 0 {
        return argument("erasure input dimension must be at least 1");
    }
    if !(0.0..=0.5).contains(&x) {
        return argument(format!("erasure offset {x} outside [0, 1/2]"));
    }
    // 2 - √(1-u) - √(1+u) with u = 2x, rationalized so that small x keeps
    // full relative precision:
    // = 2u² / ((√(1+u) + √(1-u)) (1 + √(1-u)) (1 + √(1+u))).
    let u = 2.0 * x;
    let (m, p) = ((1.0 - u).sqrt(), (1.0 + u).sqrt());
    Ok((2.0 * u * u / ((p + m) * (1.0 + m) * (1.0 + p))).sqrt())
}
