//! Continuity bounds: right-hand sides, per-instance checkers and seeded
//! falsification campaigns.

mod campaign;
mod checks;

pub use campaign::{
    run_campaign, tightness_ratio, tightness_row, CampaignConfig, CampaignKind, TightnessRow,
};
pub use checks::{
    check_almost_convexity, check_auxiliary, check_ensemble_continuity, check_prop1, check_prop2,
    check_prop3, check_prop4, check_prop5_erasure, check_qc_mutual_information, ChannelDistance,
    EpsSource, Prop2Flags,
};

use std::fmt;

use serde::Serialize;

use crate::capacities::CapacityKind;
use crate::entropic::g;
use crate::error::{argument, Error, Result};

/// Default slack, in bits, before a negative margin counts as a violation.
pub const VIOLATION_SLACK: f64 = 1e-7;

/// How the continuity parameter ε of a report was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EpsProvenance {
    /// Computed directly (trace or ensemble distance, or a zero channel distance).
    Exact,
    /// Includes the upper endpoint of a channel-distance enclosure.
    IntervalUpper,
    /// Includes a closed-form channel-distance bound.
    Analytic,
}

impl EpsProvenance {
    pub fn as_str(self) -> &'static str {
        match self {
            EpsProvenance::Exact => "exact",
            EpsProvenance::IntervalUpper => "interval-upper",
            EpsProvenance::Analytic => "analytic",
        }
    }
}

impl fmt::Display for EpsProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One evaluated instance `lhs ≤ rhs` of a bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound: String,
    pub trial: usize,
    pub seed: u64,
    /// Dimension entering the logarithm of the right-hand side; may be a
    /// geometric mean and therefore fractional.
    pub d_a: f64,
    /// Ambient dimension of the system the bound is stated on.
    pub d: usize,
    pub eps: f64,
    pub eps_provenance: EpsProvenance,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub margin: f64,
    pub violated: bool,
    pub slack: f64,
}

impl BoundReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        bound: impl Into<String>,
        d_a: f64,
        d: usize,
        eps: f64,
        eps_provenance: EpsProvenance,
        lhs: f64,
        rhs: f64,
    ) -> Self {
        let margin = rhs - lhs;
        Self {
            bound: bound.into(),
            trial: 0,
            seed: 0,
            d_a,
            d,
            eps,
            eps_provenance,
            lhs,
            rhs,
            margin,
            violated: margin < -VIOLATION_SLACK || !margin.is_finite(),
            slack: VIOLATION_SLACK,
        }
    }

    pub fn with_trial(mut self, trial: usize, seed: u64) -> Self {
        self.trial = trial;
        self.seed = seed;
        self
    }

    pub fn with_slack(mut self, slack: f64) -> Self {
        self.slack = slack;
        self.violated = self.margin < -slack || !self.margin.is_finite();
        self
    }

    /// Column names matching [`BoundReport::record`].
    pub const HEADER: [&'static str; 11] = [
        "bound",
        "trial",
        "seed",
        "dA",
        "d",
        "eps",
        "eps_provenance",
        "lhs_bits",
        "rhs_bits",
        "margin_bits",
        "violated",
    ];

    /// Fields as text, floats with 12 significant digits.
    pub fn record(&self) -> Vec<String> {
        vec![
            self.bound.clone(),
            self.trial.to_string(),
            self.seed.to_string(),
            format_sig(self.d_a),
            self.d.to_string(),
            format_sig(self.eps),
            self.eps_provenance.to_string(),
            format_sig(self.lhs),
            format_sig(self.rhs),
            format_sig(self.margin),
            self.violated.to_string(),
        ]
    }
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros dropped,
/// scientific notation outside `1e-5 ≤ |v| < 1e12`.
pub fn format_sig(v: f64) -> String {
    const DIGITS: usize = 12;
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let sci = format!("{:.*e}", DIGITS - 1, v);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..DIGITS as i32).contains(&exp) {
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, v))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

/// Bound identifiers of the five capacity kinds, e.g. `prop5-quantum`.
pub fn prop5_bound_id(kind: CapacityKind) -> String {
    format!("prop5-{}", kind.as_str())
}

fn log2_dim(d: f64) -> Result<f64> {
    if !(d >= 1.0) || !d.is_finite() {
        return argument(format!("dimension {d} must be finite and at least 1"));
    }
    Ok(d.log2())
}

/// Conditional mutual information of states: `(qc ? 1 : 2)·ε·log₂ d + (concave ? 1 : 2)·g(ε)`.
pub fn rhs_prop1(d: f64, eps: f64, qc: bool, concave: bool) -> Result<f64> {
    rhs_prop1_log2(log2_dim(d)?, eps, qc, concave)
}

pub fn rhs_prop1_log2(log2_d: f64, eps: f64, qc: bool, concave: bool) -> Result<f64> {
    let a = if qc { 1.0 } else { 2.0 };
    let b = if concave { 1.0 } else { 2.0 };
    Ok(a * eps * log2_d + b * g(eps)?)
}

/// Output Holevo quantities: `ε·log₂ dA + (same_channel ? 0 : ε) + (same_outputs ? 1 : 2)·g(ε)`.
pub fn rhs_prop2(d_a: f64, eps: f64, same_channel: bool, same_outputs: bool) -> Result<f64> {
    let channel = if same_channel { 0.0 } else { eps };
    let b = if same_outputs { 1.0 } else { 2.0 };
    Ok(eps * log2_dim(d_a)? + channel + b * g(eps)?)
}

/// Output conditional mutual information: `2ε·log₂ dA + (same_channel ? 0 : 2ε) + 2g(ε)`.
pub fn rhs_prop3(d_a: f64, eps: f64, same_channel: bool) -> Result<f64> {
    let channel = if same_channel { 0.0 } else { 2.0 * eps };
    Ok(2.0 * eps * log2_dim(d_a)? + channel + 2.0 * g(eps)?)
}

/// n-fold tensor power: `2n(ε·log₂(2 dA) + g(ε))` with `dA` the geometric
/// mean of the per-factor input support dimensions.
pub fn rhs_prop4(n: usize, d_a_geo: f64, eps: f64) -> Result<f64> {
    if n == 0 {
        return argument("tensor power n must be at least 1");
    }
    let log2_2d = 1.0 + log2_dim(d_a_geo)?;
    Ok(2.0 * n as f64 * (eps * log2_2d + g(eps)?))
}

/// Capacity differences in terms of the Bures distance `ε`:
/// `C̄`: `ε log dA + ε + 2g`; `C`, `Q`, `C̄_p`: `2ε log dA + 2ε + 2g`;
/// `C_p`: `4ε log dA + 4ε + 4g`.
pub fn rhs_prop5(kind: CapacityKind, d_a: f64, eps: f64) -> Result<f64> {
    rhs_prop5_log2(kind, log2_dim(d_a)?, eps)
}

pub fn rhs_prop5_log2(kind: CapacityKind, log2_d_a: f64, eps: f64) -> Result<f64> {
    let (a, b) = match kind {
        CapacityKind::HolevoCap => (1.0, 2.0),
        CapacityKind::Classical | CapacityKind::Quantum | CapacityKind::PrivateOneshot => {
            (2.0, 2.0)
        }
        CapacityKind::Private => (4.0, 4.0),
        CapacityKind::EntanglementAssisted => {
            return Err(Error::Argument(
                "no Bures-distance bound for the entanglement-assisted capacity".into(),
            ))
        }
    };
    Ok(a * eps * log2_d_a + a * eps + b * g(eps)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhs_examples() {
        // qc with d = 4, ε = ½ and no concavity: 1·½·2 + 2g(½)
        let v = rhs_prop1(4.0, 0.5, true, false).unwrap();
        assert!((v - 3.754_887_502_163_468_5).abs() < 1e-13);
        let q = rhs_prop5(CapacityKind::Quantum, 2.0, 0.1).unwrap();
        assert!((q - 1.366_893_371_227_329_3).abs() < 1e-13);
        assert_eq!(rhs_prop2(3.0, 0.0, false, false).unwrap(), 0.0);
        assert_eq!(rhs_prop3(1.0, 0.0, true).unwrap(), 0.0);
        assert!(rhs_prop1(0.5, 0.1, false, false).is_err());
        assert!(rhs_prop3(2.0, -0.1, false).is_err());
        assert!(rhs_prop5(CapacityKind::EntanglementAssisted, 2.0, 0.1).is_err());
        assert!(rhs_prop4(0, 2.0, 0.1).is_err());
    }

    #[test]
    fn rhs_flag_ordering() {
        let (d, e) = (3.0, 0.2);
        let base = rhs_prop1(d, e, false, false).unwrap();
        assert!(rhs_prop1(d, e, true, false).unwrap() < base);
        assert!(rhs_prop1(d, e, false, true).unwrap() < base);
        assert!(rhs_prop2(d, e, true, false).unwrap() < rhs_prop2(d, e, false, false).unwrap());
        assert!(rhs_prop2(d, e, false, true).unwrap() < rhs_prop2(d, e, false, false).unwrap());
        let p = rhs_prop5(CapacityKind::Private, d, e).unwrap();
        let c = rhs_prop5(CapacityKind::Classical, d, e).unwrap();
        assert!((p - 2.0 * c).abs() < 1e-12);
        // one copy of the tensor-power bound with dA = 2: 2(ε·2 + g)
        let t = rhs_prop4(1, 2.0, e).unwrap();
        assert!((t - 2.0 * (2.0 * e + g(e).unwrap())).abs() < 1e-12);
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(1.5), "1.5");
        assert_eq!(format_sig(2.0), "2");
        assert_eq!(format_sig(-0.125), "-0.125");
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig(123456.789), "123456.789");
        assert_eq!(format_sig(1.0e-7), "1e-7");
        assert_eq!(format_sig(-2.5e-9), "-2.5e-9");
        assert_eq!(format_sig(1.0e15), "1e15");
        assert_eq!(format_sig(0.000123), "0.000123");
    }

    #[test]
    fn report_margin_and_flag() {
        let r = BoundReport::new("prop1", 2.0, 4, 0.1, EpsProvenance::Exact, 1.0, 1.0 - 5e-8);
        assert!(!r.violated);
        let r = r.with_slack(1e-9);
        assert!(r.violated);
        let r = BoundReport::new("prop1", 2.0, 4, 0.1, EpsProvenance::Exact, 1.0, f64::NAN);
        assert!(r.violated);
        assert_eq!(r.record().len(), BoundReport::HEADER.len());
    }
}
