//! Truncated Fock-space brute force of the inertial protocol.
//!
//! Three modes (`a_in`, `v1`, `v2`) carry the whole circuit once the
//! resource is written in terms of its vacua. Each gate is applied to the
//! state vector as the exponential of its truncated generator, by Taylor
//! series over sub-steps; the truncated generator is anti-Hermitian, so the
//! evolution stays unitary on the truncated space.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;

use crate::error::{ensure_non_negative, Error, Result};
use crate::mode_algebra::{
    displace, quadrature, quadrature_variance, wick_expectation, OperatorExpr,
};
use crate::teleportation::{inertial, inertial_teleport_output};

/// Agreement required between the truncated and Heisenberg predictions.
pub const FOCK_TOLERANCE: f64 = 1e-3;

/// Photon cutoff per mode the acceptance budget prescribes.
pub const REFERENCE_CUTOFF: usize = 12;

/// Cutoff at which `r, r_omega <= 1` meet [`FOCK_TOLERANCE`].
pub const DEFAULT_CUTOFF: usize = 40;

pub const MAX_CUTOFF: usize = 80;

/// Coherent amplitude of the teleported input.
pub const INPUT_AMPLITUDE: Complex64 = Complex64::new(0.4, 0.2);

const MODES: usize = 3;
const STEP_NORM: f64 = 1.0;
const TAYLOR_EPS: f64 = 1e-17;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureMoments {
    pub phi: f64,
    pub mean: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockReport {
    pub r: f64,
    pub r_omega: f64,
    pub cutoff: usize,
    pub predicted: Vec<QuadratureMoments>,
    pub simulated: Vec<QuadratureMoments>,
    pub max_deviation: f64,
}

/// Product-state vector over `MODES` modes with `cutoff + 1` levels each.
struct FockState {
    dim: usize,
    amps: Vec<Complex64>,
}

#[derive(Clone, Copy)]
enum Ladder {
    Raise,
    Lower,
}

/// `k L(m1) L(m2)`.
type BilinearTerm = (f64, (usize, Ladder), (usize, Ladder));

impl FockState {
    fn coherent_on_vacuum(cutoff: usize, alpha: Complex64) -> Self {
        let dim = cutoff + 1;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim.pow(MODES as u32)];
        let mut c = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
        for n in 0..dim {
            amps[n * dim * dim] = c;
            c *= alpha / ((n + 1) as f64).sqrt();
        }
        FockState { dim, amps }
    }

    fn stride(&self, mode: usize) -> usize {
        self.dim.pow((MODES - 1 - mode) as u32)
    }

    fn level(&self, index: usize, mode: usize) -> usize {
        (index / self.stride(mode)) % self.dim
    }

    /// `out += k * L1(m1) L2(m2) psi` for bilinear ladder terms on distinct modes.
    fn apply_bilinear(
        &self,
        psi: &[Complex64],
        out: &mut [Complex64],
        k: f64,
        (m1, l1): (usize, Ladder),
        (m2, l2): (usize, Ladder),
    ) {
        let (s1, s2) = (self.stride(m1), self.stride(m2));
        let top = self.dim - 1;
        for (idx, amp) in psi.iter().enumerate() {
            if *amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (n1, n2) = (self.level(idx, m1), self.level(idx, m2));
            let step = |n: usize, l: Ladder| match l {
                Ladder::Raise if n < top => Some((((n + 1) as f64).sqrt(), true)),
                Ladder::Lower if n > 0 => Some(((n as f64).sqrt(), false)),
                _ => None,
            };
            let (Some((f1, up1)), Some((f2, up2))) = (step(n1, l1), step(n2, l2)) else {
                continue;
            };
            let mut target = idx;
            target = if up1 { target + s1 } else { target - s1 };
            target = if up2 { target + s2 } else { target - s2 };
            out[target] += amp * (k * f1 * f2);
        }
    }

    /// `psi <- exp(sum_t k_t L L) psi` for an anti-Hermitian bilinear generator.
    fn evolve(&mut self, terms: &[BilinearTerm]) {
        let bound: f64 = terms.iter().map(|t| t.0.abs()).sum::<f64>() * self.dim as f64;
        let steps = (bound / STEP_NORM).ceil().max(1.0) as usize;
        let scale = 1.0 / steps as f64;
        let mut term = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        let mut next = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for _ in 0..steps {
            term.copy_from_slice(&self.amps);
            for order in 1..200 {
                next.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
                for &(k, a, b) in terms {
                    self.apply_bilinear(&term, &mut next, k * scale / order as f64, a, b);
                }
                std::mem::swap(&mut term, &mut next);
                let mut size = 0.0;
                for (s, t) in self.amps.iter_mut().zip(&term) {
                    *s += t;
                    size += t.norm_sqr();
                }
                if size.sqrt() < TAYLOR_EPS {
                    break;
                }
            }
        }
    }

    fn two_mode_squeeze(&mut self, m1: usize, m2: usize, r: f64) {
        // r (a^dag b^dag - a b)
        self.evolve(&[
            (r, (m1, Ladder::Raise), (m2, Ladder::Raise)),
            (-r, (m1, Ladder::Lower), (m2, Ladder::Lower)),
        ]);
    }

    fn beam_splitter(&mut self, m1: usize, m2: usize, eta: f64) {
        // theta (a b^dag - a^dag b), cos theta = sqrt(eta)
        let theta = eta.sqrt().acos();
        self.evolve(&[
            (theta, (m1, Ladder::Lower), (m2, Ladder::Raise)),
            (-theta, (m1, Ladder::Raise), (m2, Ladder::Lower)),
        ]);
    }

    /// `(<a>, <a^2>, <a^dag a>)` of one mode.
    fn moments(&self, mode: usize) -> (Complex64, Complex64, f64) {
        let s = self.stride(mode);
        let (mut a, mut a2, mut n) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0);
        for (idx, amp) in self.amps.iter().enumerate() {
            let k = self.level(idx, mode);
            n += k as f64 * amp.norm_sqr();
            if k >= 1 {
                a += self.amps[idx - s].conj() * amp * (k as f64).sqrt();
            }
            if k >= 2 {
                a2 += self.amps[idx - 2 * s].conj() * amp * ((k * (k - 1)) as f64).sqrt();
            }
        }
        (a, a2, n)
    }
}

const PHASES: [f64; 3] = [0.0, FRAC_PI_4, FRAC_PI_2];

/// Quadrature moments of the output mode, truncated simulation against the
/// Heisenberg prediction, without enforcing a tolerance.
pub fn fock_compare(r: f64, r_omega: f64, cutoff: usize) -> Result<FockReport> {
    ensure_non_negative("r", r)?;
    ensure_non_negative("r_omega", r_omega)?;
    if !(1..=MAX_CUTOFF).contains(&cutoff) {
        return Err(Error::InvalidParameter {
            name: "cutoff",
            value: cutoff as f64,
            reason: "photon cutoff must lie in 1..=80",
        });
    }

    let out = inertial_teleport_output(r, r_omega)?;
    let shifted = displace(&OperatorExpr::mode(inertial::A_IN), INPUT_AMPLITUDE);
    let out = out.substitute(&BTreeMap::from([(inertial::A_IN, shifted)]));
    let predicted = PHASES
        .iter()
        .map(|&phi| {
            Ok(QuadratureMoments {
                phi,
                mean: wick_expectation(&[quadrature(&out, phi)])?.re,
                variance: quadrature_variance(&out, phi)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    // modes: 0 = a_in, 1 = v1 (sender half), 2 = v2 (receiver half)
    let mut state = FockState::coherent_on_vacuum(cutoff, INPUT_AMPLITUDE);
    state.two_mode_squeeze(1, 2, r_omega);
    state.two_mode_squeeze(0, 1, r);
    state.beam_splitter(0, 2, 1.0 / r.cosh().powi(2));
    let (a, a2, n) = state.moments(0);
    let simulated: Vec<QuadratureMoments> = PHASES
        .iter()
        .map(|&phi| {
            let e = Complex64::from_polar(1.0, -phi);
            let mean = 2.0 * (e * a).re;
            let second = 2.0 * (e * e * a2).re + 2.0 * n + 1.0;
            QuadratureMoments {
                phi,
                mean,
                variance: second - mean * mean,
            }
        })
        .collect();

    let max_deviation = predicted
        .iter()
        .zip(&simulated)
        .map(|(p, s)| (p.mean - s.mean).abs().max((p.variance - s.variance).abs()))
        .fold(0.0, f64::max);
    Ok(FockReport {
        r,
        r_omega,
        cutoff,
        predicted,
        simulated,
        max_deviation,
    })
}

/// As [`fock_compare`], failing when the deviation exceeds [`FOCK_TOLERANCE`].
pub fn fock_check_inertial(r: f64, r_omega: f64, cutoff: usize) -> Result<FockReport> {
    let report = fock_compare(r, r_omega, cutoff)?;
    if report.max_deviation > FOCK_TOLERANCE {
        return Err(Error::Truncation {
            cutoff,
            deviation: report.max_deviation,
            tolerance: FOCK_TOLERANCE,
        });
    }
    Ok(report)
}
