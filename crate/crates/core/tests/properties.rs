use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use proptest::prelude::*;

use rindler_teleport::mode_algebra::{
    beam_splitter, displace, rindler_to_unruh, single_mode_squeeze, two_mode_squeeze,
    unruh_to_rindler, wick_expectation, ModeLabel, OperatorExpr, Sector,
};
use rindler_teleport::spectral::{make_wavepacket, spectral_integrals};
use rindler_teleport::teleportation::{
    delta_decoherence, delta_extremes, displaced_report, narrowband_variance, squeezed_report,
};

const MODES: u32 = 4;

#[derive(Debug, Clone)]
enum Gate {
    Tms(u32, u32, f64, f64),
    Bs(u32, u32, f64),
    Squeeze(u32, f64),
    Displace(u32, f64, f64),
}

fn gate() -> impl Strategy<Value = Gate> {
    let pair = (0..MODES, 1..MODES).prop_map(|(i, k)| (i, (i + k) % MODES));
    prop_oneof![
        (pair.clone(), 0.0..1.5f64, -3.0..3.0f64).prop_map(|((i, j), r, p)| Gate::Tms(i, j, r, p)),
        (pair, 0.0..=1.0f64).prop_map(|((i, j), eta)| Gate::Bs(i, j, eta)),
        (0..MODES, 0.0..1.5f64).prop_map(|(i, r)| Gate::Squeeze(i, r)),
        (0..MODES, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(i, x, y)| Gate::Displace(i, x, y)),
    ]
}

fn run_circuit(gates: &[Gate]) -> Vec<OperatorExpr> {
    let mut modes: Vec<OperatorExpr> = (0..MODES)
        .map(|k| OperatorExpr::mode(ModeLabel::aux(k)))
        .collect();
    for g in gates {
        match *g {
            Gate::Tms(i, j, r, p) => {
                let (a, b) =
                    two_mode_squeeze(&modes[i as usize], &modes[j as usize], r, p).unwrap();
                modes[i as usize] = a;
                modes[j as usize] = b;
            }
            Gate::Bs(i, j, eta) => {
                let (a, b) = beam_splitter(&modes[i as usize], &modes[j as usize], eta).unwrap();
                modes[i as usize] = a;
                modes[j as usize] = b;
            }
            Gate::Squeeze(i, r) => modes[i as usize] = single_mode_squeeze(&modes[i as usize], r),
            Gate::Displace(i, x, y) => {
                modes[i as usize] = displace(&modes[i as usize], Complex64::new(x, y))
            }
        }
    }
    modes
}

fn linear_expr() -> impl Strategy<Value = OperatorExpr> {
    proptest::collection::vec((0..3u32, any::<bool>(), -1.0..1.0f64, -1.0..1.0f64), 1..6).prop_map(
        |terms| {
            let mut e = OperatorExpr::zero();
            for (m, dag, re, im) in terms {
                e.add_term(ModeLabel::aux(m), dag, Complex64::new(re, im));
            }
            e
        },
    )
}

fn rel_close(x: f64, y: f64, rel: f64) -> bool {
    (x - y).abs() <= rel * y.abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn commutators_preserved_by_unitaries(gates in proptest::collection::vec(gate(), 1..12)) {
        let out = run_circuit(&gates);
        for (i, a) in out.iter().enumerate() {
            for (j, b) in out.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((a.commutator(&b.adjoint()) - want).norm() < 1e-10);
                prop_assert!(a.commutator(b).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn wick_quartic_is_sum_of_pairings(
        a in linear_expr(), b in linear_expr(), c in linear_expr(), d in linear_expr(),
    ) {
        let pair = |x: &OperatorExpr, y: &OperatorExpr| wick_expectation(&[x.clone(), y.clone()]).unwrap();
        let quartic = wick_expectation(&[a.clone(), b.clone(), c.clone(), d.clone()]).unwrap();
        let pairings = pair(&a, &b) * pair(&c, &d) + pair(&a, &c) * pair(&b, &d) + pair(&a, &d) * pair(&b, &c);
        prop_assert!((quartic - pairings).norm() < 1e-12);
    }

    #[test]
    fn unruh_rindler_round_trip(a in 0.05..20.0f64, bin in 0..8u32, s in 0..4usize) {
        let grid: Vec<f64> = (0..8).map(|k| 0.25 + 0.25 * k as f64).collect();
        let sector = [Sector::RindlerI, Sector::RindlerII, Sector::RindlerIII, Sector::RindlerIV][s];
        let b = OperatorExpr::mode(ModeLabel::rindler(sector, bin));
        let back = unruh_to_rindler(&rindler_to_unruh(&b, a, &grid).unwrap(), a, &grid).unwrap();
        prop_assert!((back.coefficient(ModeLabel::rindler(sector, bin), false) - 1.0).norm() < 1e-12);
        prop_assert!((back.max_abs_coefficient() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unit_gap_between_i_c_and_i_s(omega0 in 0.2..4.0f64, frac in 0.005..0.3f64, a in 0.05..50.0f64) {
        let wp = make_wavepacket(omega0, frac * omega0, 256).unwrap();
        let s = spectral_integrals(&wp, a).unwrap();
        prop_assert!((s.i_c - s.i_s - 1.0).abs() < 1e-8);
        // quadrature rounding on quantities that sit at their bounds
        let eps = 1e-12;
        prop_assert!(s.i_c >= 1.0 - eps && s.i_s >= -eps && s.i_cs > 0.0 && s.i_cs <= 1.0 + eps);
    }

    #[test]
    fn integrals_monotone_in_acceleration(omega0 in 0.2..4.0f64, frac in 0.005..0.3f64, ratio in 0.125..50.0f64, k in 1.05..4.0f64) {
        // omega0 / a <= 8 keeps 1 - I_cs above double-precision resolution
        let a = ratio * omega0;
        let wp = make_wavepacket(omega0, frac * omega0, 256).unwrap();
        let lo = spectral_integrals(&wp, a).unwrap();
        let hi = spectral_integrals(&wp, k * a).unwrap();
        prop_assert!(hi.i_cs < lo.i_cs);
        prop_assert!(hi.i_c > lo.i_c);
        prop_assert!(narrowband_variance(omega0, k * a).unwrap() < narrowband_variance(omega0, a).unwrap());
    }

    #[test]
    fn squeezing_off_reduces_to_displaced(omega0 in 0.2..4.0f64, a in 0.05..50.0f64, phi in -3.2..3.2f64) {
        let wp = make_wavepacket(omega0, 0.01 * omega0, 256).unwrap();
        let s = spectral_integrals(&wp, a).unwrap();
        let sq = squeezed_report(&s, 0.0, phi);
        let d = displaced_report(&s);
        prop_assert!((sq.total - d.total).abs() < 1e-12);
        prop_assert!((sq.thermal_noise - d.thermal_noise).abs() < 1e-12);
    }

    #[test]
    fn decoherence_extremes_agree_with_general_phase(r_s in 0.0..2.0f64, i_c in 1.0..10.0f64) {
        let (d0, d90) = delta_extremes(r_s, i_c);
        prop_assert!(rel_close(delta_decoherence(r_s, i_c, 0.0), d0, 1e-12));
        prop_assert!(rel_close(delta_decoherence(r_s, i_c, FRAC_PI_2), d90, 1e-12));
    }

    #[test]
    fn purity_product_exceeds_one(omega0 in 0.2..4.0f64, a in 0.05..50.0f64, r_s in 0.0..2.0f64, phi in -3.2..3.2f64) {
        let wp = make_wavepacket(omega0, 0.01 * omega0, 256).unwrap();
        let s = spectral_integrals(&wp, a).unwrap();
        prop_assert!(displaced_report(&s).purity_product > 1.0);
        prop_assert!(squeezed_report(&s, r_s, phi).purity_product > 1.0);
    }
}
