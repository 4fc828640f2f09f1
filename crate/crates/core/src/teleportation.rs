//! Closed-form output variances for teleportation out of an accelerated
//! frame, and the inertial all-optical protocol built from the operator
//! algebra.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{ensure_non_negative, Result};
use crate::mode_algebra::{beam_splitter, two_mode_squeeze, ModeLabel, OperatorExpr};
use crate::spectral::{spectral_integrals, squeeze_param, SpectralIntegrals, WavepacketSpec};

/// Amplifier squeezing standing in for the unbounded-gain limit. `tanh` is
/// exactly 1 in `f64` from here on, and the attenuated amplifier still
/// composes to unit coefficients within rounding.
pub const INFINITE_GAIN_R: f64 = 40.0;

/// Two-mode squeezing of the classical-channel amplifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gain {
    Finite(f64),
    Infinite,
}

impl Gain {
    pub fn squeezing(self) -> f64 {
        match self {
            Gain::Finite(r) => r,
            Gain::Infinite => INFINITE_GAIN_R,
        }
    }

    /// Matching beam-splitter transmissivity `cosh(r)^-2`.
    pub fn transmissivity(self) -> f64 {
        let c = self.squeezing().cosh();
        1.0 / (c * c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    pub a: f64,
    pub wp: WavepacketSpec,
    /// Single-mode squeezing of the signal; zero selects the displaced scenario.
    pub r_s: f64,
    pub phi: f64,
    pub gain: Gain,
}

impl ScenarioParams {
    pub fn displaced(a: f64, wp: WavepacketSpec) -> Self {
        ScenarioParams {
            a,
            wp,
            r_s: 0.0,
            phi: 0.0,
            gain: Gain::Infinite,
        }
    }

    pub fn squeezed(a: f64, wp: WavepacketSpec, r_s: f64, phi: f64) -> Self {
        ScenarioParams {
            a,
            wp,
            r_s,
            phi,
            gain: Gain::Infinite,
        }
    }

    /// Closed-form report; only the unbounded-gain limit has one.
    pub fn report(&self) -> Result<VarianceReport> {
        if let Gain::Finite(r) = self.gain {
            return Err(crate::Error::InvalidParameter {
                name: "gain",
                value: r,
                reason: "closed forms exist only in the unbounded-gain limit",
            });
        }
        if self.r_s == 0.0 {
            displaced_variance(self.a, &self.wp)
        } else {
            squeezed_variance(self.a, &self.wp, self.r_s, self.phi)
        }
    }
}

/// Homodyne quadrature variance split into its noise channels.
///
/// `total == thermal_noise + qnl_or_decoherence` holds exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceReport {
    pub total: f64,
    pub thermal_noise: f64,
    pub qnl_or_decoherence: f64,
    /// `(dX(0))^2 (dX(pi/2))^2`; one for a pure Gaussian state.
    pub purity_product: f64,
}

impl VarianceReport {
    pub fn new(thermal_noise: f64, qnl_or_decoherence: f64, purity_product: f64) -> Self {
        VarianceReport {
            total: thermal_noise + qnl_or_decoherence,
            thermal_noise,
            qnl_or_decoherence,
            purity_product,
        }
    }
}

/// Displaced Rindler vacuum: `2 I_cs (I_c + I_s) + 1`, isotropic in phase.
pub fn displaced_variance(a: f64, wp: &WavepacketSpec) -> Result<VarianceReport> {
    let s = spectral_integrals(wp, a)?;
    Ok(displaced_report(&s))
}

pub fn displaced_report(s: &SpectralIntegrals) -> VarianceReport {
    let thermal = s.thermal_noise();
    let total = thermal + 1.0;
    VarianceReport::new(thermal, 1.0, total * total)
}

/// Narrow-band limit `(1 + e^{-4 r0}) + 1` with `r0` at the carrier.
pub fn narrowband_variance(omega0: f64, a: f64) -> Result<f64> {
    let r0 = squeeze_param(omega0, a)?;
    Ok(1.0 + (-4.0 * r0).exp() + 1.0)
}

/// Excess variance of the squeezed signal seen by the inertial detector.
pub fn delta_decoherence(r_s: f64, i_c: f64, phi: f64) -> f64 {
    let k = 4.0 * i_c * (i_c - 1.0);
    let (ch, sh) = (r_s.cosh(), r_s.sinh());
    let ch2 = (2.0 * r_s).cosh();
    let m = 2.0 * i_c - 1.0;
    ch2 + k * (ch2 - 2.0 * ch + 1.0) + 2.0 * sh * (m * m * ch - k) * (2.0 * phi).cos()
}

/// `(Delta(0), Delta(pi/2))` in their factored exponential forms.
pub fn delta_extremes(r_s: f64, i_c: f64) -> (f64, f64) {
    let k = 4.0 * i_c * (i_c - 1.0);
    let up = r_s.exp_m1();
    let down = (-r_s).exp_m1();
    (
        (2.0 * r_s).exp() + k * up * up,
        (-2.0 * r_s).exp() + k * down * down,
    )
}

/// Squeezed Rindler vacuum: `2 I_cs (I_c + I_s) + Delta(phi)`.
pub fn squeezed_variance(
    a: f64,
    wp: &WavepacketSpec,
    r_s: f64,
    phi: f64,
) -> Result<VarianceReport> {
    ensure_non_negative("r_s", r_s)?;
    let s = spectral_integrals(wp, a)?;
    Ok(squeezed_report(&s, r_s, phi))
}

pub fn squeezed_report(s: &SpectralIntegrals, r_s: f64, phi: f64) -> VarianceReport {
    let thermal = s.thermal_noise();
    let x0 = thermal + delta_decoherence(r_s, s.i_c, 0.0);
    let x90 = thermal + delta_decoherence(r_s, s.i_c, FRAC_PI_2);
    VarianceReport::new(thermal, delta_decoherence(r_s, s.i_c, phi), x0 * x90)
}

/// Weight `∫ g (cosh r - sinh r)` of the right-moving noise left on the
/// conformal receiver's output; vanishes as `a -> ∞`.
pub fn conformal_residual(a: f64, wp: &WavepacketSpec) -> Result<f64> {
    Ok(spectral_integrals(wp, a)?.phi_cs)
}

/// Auxiliary labels of the inertial protocol.
pub mod inertial {
    use crate::mode_algebra::ModeLabel;

    pub const A_IN: ModeLabel = ModeLabel::aux(0);
    /// Resource half held by the sender.
    pub const A_I: ModeLabel = ModeLabel::aux(1);
    /// Resource half held by the receiver.
    pub const A_J: ModeLabel = ModeLabel::aux(2);
    pub const V1: ModeLabel = ModeLabel::aux(3);
    pub const V2: ModeLabel = ModeLabel::aux(4);
}

/// Output of amplifier-then-attenuator acting on `a_in` with the resource
/// modes left symbolic: `a_in + tanh r a_i^dag - sqrt(1 - cosh^-2 r) a_j`.
pub fn inertial_channel_output(gain: Gain) -> Result<OperatorExpr> {
    let r = gain.squeezing();
    ensure_non_negative("r", r)?;
    let a_in = OperatorExpr::mode(inertial::A_IN);
    let a_i = OperatorExpr::mode(inertial::A_I);
    let a_j = OperatorExpr::mode(inertial::A_J);
    let (amplified, _) = two_mode_squeeze(&a_in, &a_i, r, 0.0)?;
    let (out, _) = beam_splitter(&amplified, &a_j, gain.transmissivity())?;
    Ok(out.simplified())
}

/// Inertial teleportation output with the resource prepared from vacua
/// `v1, v2` by two-mode squeezing `r_omega`.
pub fn inertial_teleport_output(r: f64, r_omega: f64) -> Result<OperatorExpr> {
    ensure_non_negative("r", r)?;
    ensure_non_negative("r_omega", r_omega)?;
    inertial_output(Gain::Finite(r), r_omega)
}

pub fn inertial_output(gain: Gain, r_omega: f64) -> Result<OperatorExpr> {
    let channel = inertial_channel_output(gain)?;
    let (a_i, a_j) = two_mode_squeeze(
        &OperatorExpr::mode(inertial::V1),
        &OperatorExpr::mode(inertial::V2),
        r_omega,
        0.0,
    )?;
    let images = BTreeMap::from([(inertial::A_I, a_i), (inertial::A_J, a_j)]);
    Ok(channel.substitute(&images).simplified())
}

/// Labels other than the input that carry noise into the output.
pub fn noise_labels(expr: &OperatorExpr) -> Vec<ModeLabel> {
    expr.labels()
        .into_iter()
        .filter(|l| *l != inertial::A_IN)
        .collect()
}
