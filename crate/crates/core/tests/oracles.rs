//! Reference values computed once with 30-digit adaptive quadrature in an
//! independent implementation and frozen here.

use rindler_teleport::spectral::{make_wavepacket, spectral_integrals, squeeze_param};
use rindler_teleport::teleportation::{
    delta_extremes, displaced_variance, narrowband_variance, squeezed_variance,
};

struct Reference {
    omega0: f64,
    sigma: f64,
    a: f64,
    i_c: f64,
    i_s: f64,
    i_cs: f64,
    phi_cs: f64,
    displaced: f64,
    squeezed_phi0: f64,
    squeezed_phi90: f64,
}

/// Squeezed entries use `r_s = 0.5`.
const REFERENCES: [Reference; 3] = [
    Reference {
        omega0: 1.0,
        sigma: 0.01,
        a: 1.0,
        i_c: 1.001874654184436,
        i_s: 0.001874654184436232,
        i_cs: 0.9171163877112007,
        phi_cs: 0.21441880223397028,
        displaced: 2.8411098797177528,
        squeezed_phi0: 4.562553336568322,
        squeezed_phi90: 2.2101524189750608,
    },
    Reference {
        omega0: 1.0,
        sigma: 0.1,
        a: 1.0,
        i_c: 1.0022826785220935,
        i_s: 0.002282678522093544,
        i_cs: 0.9135128048890594,
        phi_cs: 0.67518806253134,
        displaced: 2.8353666340156294,
        squeezed_phi0: 4.557499797018467,
        squeezed_phi90: 2.2046629019868065,
    },
    Reference {
        omega0: 2.0,
        sigma: 0.5,
        a: 3.0,
        i_c: 1.0320075999659215,
        i_s: 0.032007599965921445,
        i_cs: 0.7601719129859164,
        phi_cs: 1.350556959877978,
        displaced: 2.6176689399565625,
        squeezed_phi0: 4.391555567214361,
        squeezed_phi90: 2.0060042434365406,
    },
];

const REL: f64 = 1e-8;

fn close(x: f64, want: f64, rel: f64) -> bool {
    (x - want).abs() <= rel * want.abs().max(1e-300)
}

#[test]
fn spectral_integrals_match_reference_quadrature() {
    for r in &REFERENCES {
        let wp = make_wavepacket(r.omega0, r.sigma, 256).unwrap();
        let s = spectral_integrals(&wp, r.a).unwrap();
        for (name, got, want) in [
            ("I_c", s.i_c, r.i_c),
            ("I_s", s.i_s, r.i_s),
            ("I_cs", s.i_cs, r.i_cs),
            ("phi_cs", s.phi_cs, r.phi_cs),
        ] {
            assert!(
                close(got, want, REL),
                "{name} at {:?}: {got} vs {want}",
                (r.omega0, r.sigma, r.a)
            );
        }
    }
}

#[test]
fn variances_match_reference_quadrature() {
    for r in &REFERENCES {
        let wp = make_wavepacket(r.omega0, r.sigma, 256).unwrap();
        let d = displaced_variance(r.a, &wp).unwrap().total;
        assert!(close(d, r.displaced, REL), "{d} vs {}", r.displaced);
        let s0 = squeezed_variance(r.a, &wp, 0.5, 0.0).unwrap().total;
        let s90 = squeezed_variance(r.a, &wp, 0.5, std::f64::consts::FRAC_PI_2)
            .unwrap()
            .total;
        assert!(
            close(s0, r.squeezed_phi0, REL),
            "{s0} vs {}",
            r.squeezed_phi0
        );
        assert!(
            close(s90, r.squeezed_phi90, REL),
            "{s90} vs {}",
            r.squeezed_phi90
        );
    }
}

#[test]
fn unruh_parameter_at_unit_ratio() {
    // artanh(exp(-pi))
    let r = squeeze_param(1.0, 1.0).unwrap();
    assert!(close(r, 0.04324084828357018, 1e-14), "{r}");
}

#[test]
fn narrowband_reference_values() {
    // 2 + exp(-4 r0), r0 = artanh(exp(-pi))
    assert!(close(
        narrowband_variance(1.0, 1.0).unwrap(),
        2.8411684068199365,
        1e-13
    ));
    // exp(-2 r0), the midpoint estimate of I_cs for a narrow packet
    let midpoint = (-2.0 * squeeze_param(1.0, 1.0).unwrap()).exp();
    assert!(close(midpoint, 0.917152, 1e-6), "{midpoint}");
}

#[test]
fn decoherence_extremes_at_unit_i_c() {
    // I_c = 1 leaves only the squeezed-vacuum variances e^{+-2 r_s}.
    let (d0, d90) = delta_extremes(0.5, 1.0);
    assert!(close(d0, 1f64.exp(), 1e-14));
    assert!(close(d90, (-1f64).exp(), 1e-14));
}
