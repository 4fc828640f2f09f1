//! Discretized Bogoliubov/Wick oracle.
//!
//! The wavepacket is sampled on a uniform midpoint grid, the circuit is
//! composed from the `mode_algebra` primitives on abstract wavepacket modes
//! and then spread over the bins, and every expectation value is obtained by
//! explicit Wick contraction on the Unruh vacuum. No closed-form spectral
//! integral enters the variance path.

pub mod fock;

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::mode_algebra::{
    beam_splitter, displace_lo, rindler_to_unruh_with, single_mode_squeeze, two_mode_squeeze,
    wick_expectation, Chirality, ModeLabel, OperatorExpr, Sector,
};
use crate::spectral::{UnruhFactors, WavepacketSpec};
use crate::teleportation::{Gain, VarianceReport};

pub const DEFAULT_BINS: usize = 256;
pub const MIN_BINS: usize = 64;

/// Relative change allowed between `N` and `2N` bins.
pub const REFINEMENT_TOLERANCE: f64 = 5e-3;

/// Oracle/closed-form disagreement below which refinement is judged as noise.
pub const REFINEMENT_FLOOR: f64 = 1e-8;

/// Wavepacket-level labels the circuit is composed on before spreading over bins.
pub mod wavepacket {
    use crate::mode_algebra::ModeLabel;

    /// Left-moving signal mode in region IV.
    pub const IV: ModeLabel = ModeLabel::aux(0);
    /// Right-moving resource mode in region III.
    pub const III: ModeLabel = ModeLabel::aux(1);
    /// Right-moving resource mode in region I.
    pub const I: ModeLabel = ModeLabel::aux(2);

    pub(crate) fn sector(label: ModeLabel) -> crate::mode_algebra::Sector {
        use crate::mode_algebra::Sector;
        match label.bin {
            0 => Sector::RindlerIV,
            1 => Sector::RindlerIII,
            _ => Sector::RindlerI,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    /// Local oscillator on the vacuum, no teleportation unitaries.
    LocalOscillatorOnly,
    Displaced,
    Squeezed {
        r_s: f64,
    },
}

impl Scenario {
    pub fn squeezing(self) -> f64 {
        match self {
            Scenario::Squeezed { r_s } => r_s,
            _ => 0.0,
        }
    }
}

/// Uniform midpoint sampling of a wavepacket.
#[derive(Debug, Clone, PartialEq)]
pub struct BinGrid {
    frequencies: Vec<f64>,
    projection: Vec<f64>,
    width: f64,
}

impl BinGrid {
    pub fn new(wp: &WavepacketSpec, bins: usize) -> Result<Self> {
        if bins < MIN_BINS {
            return Err(Error::GridMismatch(format!(
                "{bins} bins cannot resolve the wavepacket; at least {MIN_BINS} are required"
            )));
        }
        let (lo, hi) = wp.window();
        let width = (hi - lo) / bins as f64;
        let frequencies: Vec<f64> = (0..bins).map(|i| lo + (i as f64 + 0.5) * width).collect();
        let mut projection: Vec<f64> = frequencies
            .iter()
            .map(|&w| wp.profile(w) * width.sqrt())
            .collect();
        let norm = projection.iter().map(|g| g * g).sum::<f64>().sqrt();
        projection.iter_mut().for_each(|g| *g /= norm);
        Ok(BinGrid {
            frequencies,
            projection,
            width,
        })
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    /// Unit-norm wavepacket projection `G_i = g(omega_i) sqrt(d omega)`.
    pub fn projection(&self) -> &[f64] {
        &self.projection
    }

    pub fn width(&self) -> f64 {
        self.width
    }
}

/// Discrete analogues of the spectral integrals, `sum_i G_i^2 f(r_i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteSums {
    pub i_c: f64,
    pub i_s: f64,
    pub i_cs: f64,
}

/// The teleportation circuit resolved into frequency bins.
///
/// Output Unruh operators are `c'_i = c_i + G_i cosh r_i Delta` and
/// `d'_i = d_i - G_i sinh r_i Delta^dag`, where `Delta` is the change of the
/// region-IV wavepacket in the Unruh basis. It is stored once.
#[derive(Debug, Clone)]
pub struct DiscretizedCircuit {
    acceleration: f64,
    scenario: Scenario,
    gain: Gain,
    phi: f64,
    grid: BinGrid,
    factors: Vec<UnruhFactors>,
    wavepacket_output: OperatorExpr,
    delta_rindler: OperatorExpr,
    delta: OperatorExpr,
}

pub fn build_displaced_circuit(
    a: f64,
    wp: &WavepacketSpec,
    bins: usize,
) -> Result<DiscretizedCircuit> {
    build_circuit(a, wp, bins, Scenario::Displaced, Gain::Infinite)
}

pub fn build_squeezed_circuit(
    a: f64,
    wp: &WavepacketSpec,
    bins: usize,
    r_s: f64,
) -> Result<DiscretizedCircuit> {
    build_circuit(a, wp, bins, Scenario::Squeezed { r_s }, Gain::Infinite)
}

/// Heisenberg image of the region-IV wavepacket mode.
///
/// The signal is squeezed before the local oscillator is applied, so the
/// oscillator amplitude itself is never squeezed.
pub fn wavepacket_circuit(scenario: Scenario, gain: Gain) -> Result<OperatorExpr> {
    let b = OperatorExpr::mode(wavepacket::IV);
    let signal = match scenario {
        Scenario::LocalOscillatorOnly => return Ok(displace_lo(&b)),
        Scenario::Displaced => displace_lo(&b),
        Scenario::Squeezed { r_s } => {
            ensure_non_negative("r_s", r_s)?;
            displace_lo(&single_mode_squeeze(&b, r_s))
        }
    };
    let r = gain.squeezing();
    ensure_non_negative("r", r)?;
    let (amplified, _) = two_mode_squeeze(&signal, &OperatorExpr::mode(wavepacket::III), r, 0.0)?;
    let (out, _) = beam_splitter(
        &amplified,
        &OperatorExpr::mode(wavepacket::I),
        gain.transmissivity(),
    )?;
    Ok(out.simplified())
}

pub fn build_circuit(
    a: f64,
    wp: &WavepacketSpec,
    bins: usize,
    scenario: Scenario,
    gain: Gain,
) -> Result<DiscretizedCircuit> {
    ensure_positive("a", a)?;
    let grid = BinGrid::new(wp, bins)?;
    let factors: Vec<UnruhFactors> = grid
        .frequencies()
        .iter()
        .map(|&w| UnruhFactors::new(w, a))
        .collect::<Result<_>>()?;

    let wavepacket_output = wavepacket_circuit(scenario, gain)?;
    let change = (wavepacket_output.clone() - OperatorExpr::mode(wavepacket::IV)).simplified();

    let mut delta_rindler = OperatorExpr::scalar(change.displacement());
    delta_rindler.add_lo(change.lo());
    for (t, k) in change.terms() {
        let sector = wavepacket::sector(t.label);
        for (j, g) in grid.projection().iter().enumerate() {
            delta_rindler.add_term(ModeLabel::rindler(sector, j as u32), t.dagger, k * g);
        }
    }
    let delta = rindler_to_unruh_with(&delta_rindler, |bin| Ok(factors[bin as usize]))?;

    Ok(DiscretizedCircuit {
        acceleration: a,
        scenario,
        gain,
        phi: 0.0,
        grid,
        factors,
        wavepacket_output,
        delta_rindler,
        delta,
    })
}

impl DiscretizedCircuit {
    /// Sets the homodyne phase `phi` of the local oscillator `|alpha| e^{i phi}`.
    pub fn with_phase(mut self, phi: f64) -> Self {
        self.phi = phi;
        self
    }

    pub fn acceleration(&self) -> f64 {
        self.acceleration
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn gain(&self) -> Gain {
        self.gain
    }

    pub fn phase(&self) -> f64 {
        self.phi
    }

    pub fn grid(&self) -> &BinGrid {
        &self.grid
    }

    pub fn n_bins(&self) -> usize {
        self.grid.len()
    }

    pub fn factors(&self) -> &[UnruhFactors] {
        &self.factors
    }

    /// Output region-IV wavepacket in wavepacket labels.
    pub fn wavepacket_output(&self) -> &OperatorExpr {
        &self.wavepacket_output
    }

    /// Change of the region-IV wavepacket in the Unruh basis.
    pub fn delta(&self) -> &OperatorExpr {
        &self.delta
    }

    pub fn discrete_sums(&self) -> DiscreteSums {
        let mut s = DiscreteSums {
            i_c: 0.0,
            i_s: 0.0,
            i_cs: 0.0,
        };
        for (g, u) in self.grid.projection().iter().zip(&self.factors) {
            let g2 = g * g;
            let e = u.cosh_minus_sinh();
            s.i_c += g2 * u.cosh_sq();
            s.i_s += g2 * u.sinh_sq();
            s.i_cs += g2 * e * e;
        }
        s
    }

    fn check_bin(&self, bin: usize) -> Result<u32> {
        if bin < self.n_bins() {
            Ok(bin as u32)
        } else {
            Err(Error::GridMismatch(format!(
                "bin {bin} outside a grid of {} bins",
                self.n_bins()
            )))
        }
    }

    fn kappa_c(&self, i: usize) -> f64 {
        self.grid.projection()[i] * self.factors[i].cosh()
    }

    fn kappa_d(&self, i: usize) -> f64 {
        -self.grid.projection()[i] * self.factors[i].sinh()
    }

    /// Output single-frequency region-IV operator `b_i + G_i Delta`.
    pub fn output_rindler(&self, bin: usize) -> Result<OperatorExpr> {
        let i = self.check_bin(bin)?;
        let mut out = OperatorExpr::mode(ModeLabel::rindler(Sector::RindlerIV, i));
        out.add_scaled(&self.delta_rindler, real(self.grid.projection()[bin]));
        Ok(out)
    }

    /// `c'_i`, local-oscillator channel included.
    pub fn output_c(&self, bin: usize) -> Result<OperatorExpr> {
        let i = self.check_bin(bin)?;
        let mut out = OperatorExpr::mode(ModeLabel::unruh_c(Chirality::Left, i));
        out.add_scaled(&self.delta, real(self.kappa_c(bin)));
        Ok(out)
    }

    /// `d'_i`, local-oscillator channel included.
    pub fn output_d(&self, bin: usize) -> Result<OperatorExpr> {
        let i = self.check_bin(bin)?;
        let mut out = OperatorExpr::mode(ModeLabel::unruh_d(Chirality::Left, i));
        out.add_scaled(&self.delta.adjoint(), real(self.kappa_d(bin)));
        Ok(out)
    }

    /// Largest violation of the canonical commutators among output modes:
    /// every bin against itself, its neighbour and its mirror bin.
    pub fn commutator_audit(&self) -> Result<f64> {
        let n = self.n_bins();
        let outputs: Vec<(OperatorExpr, OperatorExpr)> = (0..n)
            .map(|i| {
                Ok((
                    self.output_c(i)?.fluctuation(),
                    self.output_d(i)?.fluctuation(),
                ))
            })
            .collect::<Result<_>>()?;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in [i, (i + 1) % n, n - 1 - i] {
                let (ci, di) = &outputs[i];
                let (cj, dj) = &outputs[j];
                let d = if i == j { 1.0 } else { 0.0 };
                worst = worst
                    .max((ci.commutator(&cj.adjoint()) - d).norm())
                    .max((di.commutator(&dj.adjoint()) - d).norm())
                    .max(ci.commutator(cj).norm())
                    .max(ci.commutator(dj).norm())
                    .max(ci.commutator(&dj.adjoint()).norm());
            }
        }
        Ok(worst)
    }

    /// Linear-in-`|alpha|` part `F` of the Minkowski photon number, and the
    /// leading-order no-signal count per `|alpha|^2`.
    fn homodyne_fluctuation(&self, phi: f64) -> Result<(OperatorExpr, f64)> {
        let lo = self.delta.lo();
        let e = Complex64::from_polar(1.0, phi);
        let ell = lo.alpha * e + lo.alpha_conj * e.conj();
        let fluct = self.delta.resolve_lo(Complex64::new(0.0, 0.0));

        let mut f = OperatorExpr::zero();
        let (mut u, mut v) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let mut n0 = 0.0;
        for i in 0..self.n_bins() {
            let (kc, kd) = (self.kappa_c(i), self.kappa_d(i));
            let a_i = ell * kc;
            let b_i = ell.conj() * kd;
            n0 += a_i.norm_sqr() + b_i.norm_sqr();
            let c = ModeLabel::unruh_c(Chirality::Left, i as u32);
            let d = ModeLabel::unruh_d(Chirality::Left, i as u32);
            f.add_term(c, false, a_i.conj());
            f.add_term(c, true, a_i);
            f.add_term(d, false, b_i.conj());
            f.add_term(d, true, b_i);
            u += a_i.conj() * kc + b_i * kd;
            v += a_i * kc + b_i.conj() * kd;
        }
        f.add_scaled(&fluct, u);
        f.add_scaled(&fluct.adjoint(), v);
        if n0 <= 0.0 {
            return Err(Error::GridMismatch(
                "local oscillator does not reach the detected modes".into(),
            ));
        }
        Ok((f, n0))
    }

    /// `(left-mover, right-mover)` contributions to the normalized
    /// photon-number variance at homodyne phase `phi`.
    pub fn homodyne_variance(&self, phi: f64) -> Result<(f64, f64)> {
        let (f, n0) = self.homodyne_fluctuation(phi)?;
        let left = variance(&f.restricted(|l| l.chirality == Chirality::Left))?;
        let right = variance(&f.restricted(|l| l.chirality == Chirality::Right))?;
        Ok((left / n0, right / n0))
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn variance(x: &OperatorExpr) -> Result<f64> {
    let m = wick_expectation(std::slice::from_ref(x))?;
    Ok((wick_expectation(&[x.clone(), x.clone()])? - m * m).re)
}

/// Normalized photon-number variance of the strong-oscillator self-homodyne
/// detector at the circuit's phase, split into the right-moving (thermal)
/// and left-moving (noise limit or decoherence) channels.
pub fn photon_number_variance_lo(circ: &DiscretizedCircuit) -> Result<VarianceReport> {
    let (left, right) = circ.homodyne_variance(circ.phase())?;
    let (l0, r0) = circ.homodyne_variance(0.0)?;
    let (l90, r90) = circ.homodyne_variance(FRAC_PI_2)?;
    Ok(VarianceReport::new(right, left, (l0 + r0) * (l90 + r90)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refinement {
    pub coarse_bins: usize,
    pub fine_bins: usize,
    pub coarse: VarianceReport,
    pub fine: VarianceReport,
}

impl Refinement {
    pub fn relative_change(&self) -> f64 {
        (self.fine.total - self.coarse.total).abs() / self.fine.total.abs()
    }
}

/// Oracle variance at `bins` and `2 bins`; fails when the refinement moves
/// the total by more than `tolerance` (relative).
pub fn refined_variance(
    a: f64,
    wp: &WavepacketSpec,
    scenario: Scenario,
    bins: usize,
    phi: f64,
    tolerance: f64,
) -> Result<Refinement> {
    let eval = |n| -> Result<VarianceReport> {
        let circ = build_circuit(a, wp, n, scenario, Gain::Infinite)?.with_phase(phi);
        photon_number_variance_lo(&circ)
    };
    let out = Refinement {
        coarse_bins: bins,
        fine_bins: 2 * bins,
        coarse: eval(bins)?,
        fine: eval(2 * bins)?,
    };
    let change = out.relative_change();
    if change > tolerance {
        return Err(Error::NotConverged {
            coarse: bins,
            fine: 2 * bins,
            change,
            tolerance,
        });
    }
    Ok(out)
}

/// One contraction identity evaluated both ways.
#[derive(Debug, Clone, PartialEq)]
pub struct AppendixEntry {
    pub name: &'static str,
    pub numeric: Complex64,
    pub closed_form: Complex64,
    /// Magnitude below which the comparison is made absolute: the line's
    /// `G cosh/sinh` prefactor times `1e-3`.
    pub scale: f64,
}

impl AppendixEntry {
    pub fn deviation(&self) -> f64 {
        (self.numeric - self.closed_form).norm() / self.closed_form.norm().max(self.scale)
    }
}

/// Contraction coefficients built from discrete sums.
#[derive(Debug, Clone, Copy)]
struct Coefficients {
    psi_cc: f64,
    phi_cc: f64,
    phi_bar_cc: f64,
    psi_dd: f64,
    phi_dd: f64,
    phi_bar_dd: f64,
    gamma_cd: f64,
}

impl Coefficients {
    fn new(s: &DiscreteSums, r_s: f64) -> Self {
        let (ch, sh) = (r_s.cosh(), r_s.sinh());
        let m = ch - 1.0;
        let j = s.i_c + s.i_s;
        Coefficients {
            psi_cc: sh * (m * j + 1.0),
            phi_cc: m * m * s.i_s + sh * sh * s.i_c + s.i_cs,
            phi_bar_cc: 2.0 * m + m * m * s.i_c + sh * sh * s.i_s + s.i_cs,
            psi_dd: sh * (m * j - 1.0),
            phi_dd: m * m * s.i_c + sh * sh * s.i_s + s.i_cs,
            phi_bar_dd: -2.0 * m + m * m * s.i_s + sh * sh * s.i_c + s.i_cs,
            gamma_cd: m * sh * j,
        }
    }
}

/// Every pairwise contraction of the fluctuation parts `c''`, `d''` at bins
/// `(omega, gamma)`, and the four quartic photon-number correlators at the
/// circuit phase, numerically and in closed form.
pub fn appendix_expectations(
    circ: &DiscretizedCircuit,
    omega_bin: usize,
    gamma_bin: usize,
) -> Result<Vec<AppendixEntry>> {
    let r_s = match circ.scenario() {
        Scenario::Displaced => 0.0,
        Scenario::Squeezed { r_s } => r_s,
        Scenario::LocalOscillatorOnly => {
            return Err(Error::InvalidParameter {
                name: "scenario",
                value: f64::NAN,
                reason: "contraction identities need a teleportation circuit",
            })
        }
    };
    let squeezed = matches!(circ.scenario(), Scenario::Squeezed { .. });
    let k = Coefficients::new(&circ.discrete_sums(), r_s);
    let m = r_s.cosh() - 1.0;

    let (w, y) = (omega_bin, gamma_bin);
    let full = [
        circ.output_c(w)?,
        circ.output_d(w)?,
        circ.output_c(y)?,
        circ.output_d(y)?,
    ];
    let zero = Complex64::new(0.0, 0.0);
    let [cw, dw, cy, dy] = full.clone().map(|e| e.resolve_lo(zero));
    let pair = |x: &OperatorExpr, z: &OperatorExpr| wick_expectation(&[x.clone(), z.clone()]);

    let g = circ.grid().projection();
    let u = circ.factors();
    let (gw, gy) = (g[w], g[y]);
    let (chw, shw, chy, shy) = (u[w].cosh(), u[w].sinh(), u[y].cosh(), u[y].sinh());
    let delta = if w == y { 1.0 } else { 0.0 };
    let gg = gw * gy;

    let mut out = Vec::new();
    let mut push = |name, numeric: Complex64, cf: f64, prefactor: f64| {
        out.push(AppendixEntry {
            name,
            numeric,
            closed_form: real(cf),
            scale: 1e-3 * prefactor.abs(),
        })
    };

    let cc = gg * chw * chy;
    let ss = gg * shw * shy;
    let cs = gg * chw * shy;
    let sc = gg * shw * chy;
    let (cwd, dwd, cyd, dyd) = (cw.adjoint(), dw.adjoint(), cy.adjoint(), dy.adjoint());

    if squeezed {
        push("<c'' c''>", pair(&cw, &cy)?, cc * k.psi_cc, cc);
        push("<c''† c''†>", pair(&cwd, &cyd)?, cc * k.psi_cc, cc);
        push(
            "<c'' c''†>",
            pair(&cw, &cyd)?,
            delta + cc * k.phi_bar_cc,
            cc,
        );
        push("<c''† c''>", pair(&cwd, &cy)?, cc * k.phi_cc, cc);
        push("<d'' d''>", pair(&dw, &dy)?, ss * k.psi_dd, ss);
        push("<d''† d''†>", pair(&dwd, &dyd)?, ss * k.psi_dd, ss);
        push(
            "<d'' d''†>",
            pair(&dw, &dyd)?,
            delta + ss * k.phi_bar_dd,
            ss,
        );
        push("<d''† d''>", pair(&dwd, &dy)?, ss * k.phi_dd, ss);
        push("<c'' d''>", pair(&cw, &dy)?, -cs * (k.phi_bar_cc - m), cs);
        push(
            "<c''† d''†>",
            pair(&cwd, &dyd)?,
            -cs * (k.phi_bar_dd + m),
            cs,
        );
        push("<d'' c''>", pair(&dw, &cy)?, -sc * (k.phi_bar_dd + m), sc);
        push(
            "<d''† c''†>",
            pair(&dwd, &cyd)?,
            -sc * (k.phi_bar_cc - m),
            sc,
        );
        push("<c'' d''†>", pair(&cw, &dyd)?, -cs * k.gamma_cd, cs);
        push("<c''† d''>", pair(&cwd, &dy)?, -cs * k.gamma_cd, cs);
        push("<d'' c''†>", pair(&dw, &cyd)?, -sc * k.gamma_cd, sc);
        push("<d''† c''>", pair(&dwd, &cy)?, -sc * k.gamma_cd, sc);
    } else {
        let i_cs = k.phi_cc;
        push("<c'' c''†>", pair(&cw, &cyd)?, delta + cc * i_cs, cc);
        push("<c''† c''>", pair(&cwd, &cy)?, cc * i_cs, cc);
        push("<d'' d''†>", pair(&dw, &dyd)?, delta + ss * i_cs, ss);
        push("<d''† d''>", pair(&dwd, &dy)?, ss * i_cs, ss);
        push("<c'' d''>", pair(&cw, &dy)?, -cs * i_cs, cs);
        push("<c''† d''†>", pair(&cwd, &dyd)?, -cs * i_cs, cs);
        push("<d'' c''>", pair(&dw, &cy)?, -sc * i_cs, sc);
        push("<d''† c''†>", pair(&dwd, &cyd)?, -sc * i_cs, sc);
    }

    // Order-|alpha|^2 part of cov(N_x(omega), N_y(gamma)) at |alpha| = 1.
    let c2 = 2.0 * (2.0 * circ.phase()).cos();
    let quartic = |x: &OperatorExpr, z: &OperatorExpr| -> Result<Complex64> {
        let at = |alpha: Complex64| -> Result<Complex64> {
            let (x, z) = (x.resolve_lo(alpha), z.resolve_lo(alpha));
            let (xd, zd) = (x.adjoint(), z.adjoint());
            let e4 = wick_expectation(&[xd.clone(), x.clone(), zd.clone(), z.clone()])?;
            Ok(e4 - wick_expectation(&[xd, x])? * wick_expectation(&[zd, z])?)
        };
        Ok(at(Complex64::from_polar(1.0, circ.phase()))? - at(zero)?)
    };
    let [cw_f, dw_f, cy_f, dy_f] = &full;
    push(
        "<c'† c' c'† c'>",
        quartic(cw_f, cy_f)?,
        cc * (delta + cc * (2.0 * k.phi_bar_cc + c2 * k.psi_cc)),
        cc * cc,
    );
    push(
        "<d'† d' d'† d'>",
        quartic(dw_f, dy_f)?,
        ss * (delta + ss * (2.0 * k.phi_bar_dd + c2 * k.psi_dd)),
        ss * ss,
    );
    let cross = k.phi_bar_cc + k.phi_bar_dd + c2 * k.gamma_cd;
    push(
        "<c'† c' d'† d'>",
        quartic(cw_f, dy_f)?,
        cs * cs * cross,
        cs * cs,
    );
    push(
        "<d'† d' c'† c'>",
        quartic(dw_f, cy_f)?,
        sc * sc * cross,
        sc * sc,
    );
    Ok(out)
}

/// `count` seeded bin pairs; the first few are diagonal so the Kronecker
/// terms are always exercised.
pub fn sample_bin_pairs(bins: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diagonal = (count / 10).max(1).min(count);
    let mut pairs: Vec<(usize, usize)> = sample(&mut rng, bins, diagonal.min(bins))
        .into_iter()
        .map(|i| (i, i))
        .collect();
    while pairs.len() < count {
        pairs.push((rng.gen_range(0..bins), rng.gen_range(0..bins)));
    }
    pairs
}
