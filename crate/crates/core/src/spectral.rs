//! Rindler wavepackets, the Unruh squeezing factor and the frequency
//! integrals the closed-form variances are built from.

use std::f64::consts::PI;

use crate::error::{ensure_positive, Error, Result};
use crate::quadrature::{composite_nodes, AdaptiveGaussLegendre, RULE_ORDER};

/// Half-width of the truncation window in units of `sigma`.
pub const TRUNCATION_SIGMAS: f64 = 8.0;

/// Hard lower frequency cutoff as a fraction of the carrier.
pub const OMEGA_MIN_FRACTION: f64 = 1e-12;

/// Removed norm above which a wavepacket is flagged as broad-band.
pub const TRUNCATION_WARNING_MASS: f64 = 1e-6;

/// Every spectral integral must carry an estimated relative error below this.
pub const SPECTRAL_REL_TOL: f64 = 1e-8;

/// Smallest grid accepted by [`make_wavepacket`].
pub const MIN_RESOLUTION: usize = 16;

const INITIAL_PANELS: usize = 16;

/// Two-mode squeezing between Unruh and Rindler operators at one frequency,
/// `r = artanh(exp(-pi * omega / a))`.
///
/// Hyperbolic functions of `r` are evaluated from `tanh r` and `1 - tanh r`
/// so they stay accurate both for `omega / a >> 1` (where `r` underflows) and
/// for `omega / a -> 0` (where `cosh^2 r ~ a / (2 pi omega)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnruhFactors {
    tanh: f64,
    one_minus_tanh: f64,
}

impl UnruhFactors {
    pub fn new(omega: f64, a: f64) -> Result<Self> {
        ensure_positive("omega", omega)?;
        ensure_positive("a", a)?;
        Ok(Self::new_unchecked(omega, a))
    }

    pub(crate) fn new_unchecked(omega: f64, a: f64) -> Self {
        let y = PI * omega / a;
        UnruhFactors {
            tanh: (-y).exp(),
            one_minus_tanh: -(-y).exp_m1(),
        }
    }

    /// Factors for a bare squeezing amplitude, used where no frequency is
    /// attached (the inertial resource).
    pub fn from_squeezing(r: f64) -> Self {
        let t = r.tanh();
        // 1 - tanh r = 2 / (exp(2r) + 1)
        UnruhFactors {
            tanh: t,
            one_minus_tanh: 2.0 / ((2.0 * r).exp() + 1.0),
        }
    }

    pub fn r(&self) -> f64 {
        0.5 * (2.0 * self.tanh / self.one_minus_tanh).ln_1p()
    }

    pub fn tanh(&self) -> f64 {
        self.tanh
    }

    pub fn cosh_sq(&self) -> f64 {
        1.0 / (self.one_minus_tanh * (1.0 + self.tanh))
    }

    pub fn sinh_sq(&self) -> f64 {
        self.tanh * self.tanh * self.cosh_sq()
    }

    pub fn cosh(&self) -> f64 {
        self.cosh_sq().sqrt()
    }

    pub fn sinh(&self) -> f64 {
        self.tanh * self.cosh()
    }

    /// `cosh r - sinh r = exp(-r)`.
    pub fn cosh_minus_sinh(&self) -> f64 {
        (self.one_minus_tanh / (1.0 + self.tanh)).sqrt()
    }
}

/// `artanh(exp(-pi * omega / a))`.
pub fn squeeze_param(omega: f64, a: f64) -> Result<f64> {
    Ok(UnruhFactors::new(omega, a)?.r())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureNode {
    pub frequency: f64,
    pub weight: f64,
}

/// Gaussian frequency profile of a Rindler wavepacket mode.
///
/// `g(omega)^2` is a normal density of standard deviation `sigma` centred on
/// `omega0`, truncated to the window and renormalized so that the integral of
/// `g^2` over the window is one.
#[derive(Debug, Clone, PartialEq)]
pub struct WavepacketSpec {
    omega0: f64,
    sigma: f64,
    lower: f64,
    upper: f64,
    amplitude: f64,
    truncated_mass: f64,
    grid: Vec<QuadratureNode>,
}

impl WavepacketSpec {
    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Truncated support `(lower, upper)`.
    pub fn window(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    pub fn grid(&self) -> &[QuadratureNode] {
        &self.grid
    }

    /// Fraction of the untruncated norm removed by the window.
    pub fn truncated_mass(&self) -> f64 {
        self.truncated_mass
    }

    /// Set when the low-frequency cutoff removes a non-negligible part of the
    /// Gaussian (broad-band, low-carrier regime).
    pub fn truncation_warning(&self) -> bool {
        self.truncated_mass > TRUNCATION_WARNING_MASS
    }

    /// `g(omega)`; zero outside the window.
    pub fn profile(&self, omega: f64) -> f64 {
        if omega < self.lower || omega > self.upper {
            return 0.0;
        }
        let d = omega - self.omega0;
        self.amplitude * (-d * d / (4.0 * self.sigma * self.sigma)).exp()
    }

    /// `sum_k w_k g(omega_k)^2 f(omega_k)` over the stored grid.
    pub fn grid_average<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.grid
            .iter()
            .map(|n| {
                let g = self.profile(n.frequency);
                n.weight * g * g * f(n.frequency)
            })
            .sum()
    }

    pub fn grid_norm(&self) -> f64 {
        self.grid_average(|_| 1.0)
    }
}

/// Builds a normalized Gaussian wavepacket with a composite Gauss–Legendre
/// grid of at least `resolution` nodes on the truncated window.
pub fn make_wavepacket(omega0: f64, sigma: f64, resolution: usize) -> Result<WavepacketSpec> {
    ensure_positive("omega0", omega0)?;
    ensure_positive("sigma", sigma)?;
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidParameter {
            name: "resolution",
            value: resolution as f64,
            reason: "at least 16 grid nodes are required",
        });
    }
    let lower = (omega0 - TRUNCATION_SIGMAS * sigma).max(OMEGA_MIN_FRACTION * omega0);
    let upper = omega0 + TRUNCATION_SIGMAS * sigma;

    let density = |w: f64| {
        let d = w - omega0;
        (-d * d / (2.0 * sigma * sigma)).exp()
    };
    let q = AdaptiveGaussLegendre::default();
    let kept = q.integrate("wavepacket norm", density, lower, upper, INITIAL_PANELS)?;
    let full = sigma * (2.0 * PI).sqrt();
    let truncated_mass = (1.0 - kept.value / full).max(0.0);

    let panels = resolution.div_ceil(RULE_ORDER);
    let grid = composite_nodes(lower, upper, panels)
        .into_iter()
        .map(|(frequency, weight)| QuadratureNode { frequency, weight })
        .collect();

    Ok(WavepacketSpec {
        omega0,
        sigma,
        lower,
        upper,
        amplitude: kept.value.sqrt().recip(),
        truncated_mass,
        grid,
    })
}

/// Frequency integrals of a wavepacket at proper acceleration `a`.
///
/// The primed integrals that appear when the same wavepacket is integrated
/// over a second frequency variable are identical because `g` is real, so
/// only one set is stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralIntegrals {
    pub acceleration: f64,
    /// `∫ g^2 cosh^2 r`
    pub i_c: f64,
    /// `∫ g^2 sinh^2 r`
    pub i_s: f64,
    /// `∫ g^2 (cosh r - sinh r)^2`
    pub i_cs: f64,
    /// `∫ g (cosh r - sinh r)`
    pub phi_cs: f64,
    /// Largest estimated relative quadrature error among the four.
    pub max_rel_error: f64,
}

impl SpectralIntegrals {
    /// Wavepacket occupation entering the local-oscillator normalization.
    pub fn i_c_plus_i_s(&self) -> f64 {
        self.i_c + self.i_s
    }

    /// Thermal-noise contribution `2 I_cs (I_c + I_s)`.
    pub fn thermal_noise(&self) -> f64 {
        2.0 * self.i_cs * self.i_c_plus_i_s()
    }
}

pub fn spectral_integrals(wp: &WavepacketSpec, a: f64) -> Result<SpectralIntegrals> {
    ensure_positive("a", a)?;
    let q = AdaptiveGaussLegendre::default();
    let (lo, hi) = wp.window();
    let g2 = |w: f64| {
        let g = wp.profile(w);
        g * g
    };
    let uf = |w: f64| UnruhFactors::new_unchecked(w, a);

    let i_c = q.integrate("I_c", |w| g2(w) * uf(w).cosh_sq(), lo, hi, INITIAL_PANELS)?;
    let i_s = q.integrate("I_s", |w| g2(w) * uf(w).sinh_sq(), lo, hi, INITIAL_PANELS)?;
    let i_cs = q.integrate(
        "I_cs",
        |w| {
            let e = uf(w).cosh_minus_sinh();
            g2(w) * e * e
        },
        lo,
        hi,
        INITIAL_PANELS,
    )?;
    let phi_cs = q.integrate(
        "phi_cs",
        |w| wp.profile(w) * uf(w).cosh_minus_sinh(),
        lo,
        hi,
        INITIAL_PANELS,
    )?;

    let estimates = [
        ("I_c", i_c),
        ("I_s", i_s),
        ("I_cs", i_cs),
        ("phi_cs", phi_cs),
    ];
    let mut max_rel_error: f64 = 0.0;
    for (name, est) in estimates {
        // I_s legitimately vanishes for omega0 / a >> 1.
        let rel = if est.value.abs() > f64::MIN_POSITIVE {
            est.relative_error()
        } else {
            0.0
        };
        if rel > SPECTRAL_REL_TOL {
            return Err(Error::Convergence {
                integral: name,
                estimate: rel,
                panels: est.panels,
            });
        }
        max_rel_error = max_rel_error.max(rel);
    }

    Ok(SpectralIntegrals {
        acceleration: a,
        i_c: i_c.value,
        i_s: i_s.value,
        i_cs: i_cs.value,
        phi_cs: phi_cs.value,
        max_rel_error,
    })
}
