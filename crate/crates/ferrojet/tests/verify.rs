use ferrojet::coefficients::tau1;
use ferrojet::magnetisation::{t_energy, MagnetisationLaw};
use ferrojet::specfun::composite_quadrature;
use ferrojet::verify::*;

fn laws() -> Vec<MagnetisationLaw> {
    vec![
        MagnetisationLaw::Linear,
        MagnetisationLaw::langevin(1.0).unwrap(),
        MagnetisationLaw::langevin(5.0).unwrap(),
    ]
}

fn assert_all_pass(checks: &[Check]) {
    for c in checks {
        assert!(c.pass, "{} numeric {:e} reference {:e} error {:e}", c.name, c.numeric, c.reference, c.error);
    }
}

#[test]
fn region1_suite() {
    for beta0 in [0.5, 1.0, 2.5] {
        let b = basis_region1(beta0).unwrap();
        assert_all_pass(&basis_suite(&b).unwrap());
    }
}

#[test]
fn region2_suite() {
    let b = basis_region2();
    let checks = basis_suite(&b).unwrap();
    assert_all_pass(&checks);
    let e16 = checks.iter().find(|c| c.name == "II Omega(e1,e6)").unwrap();
    assert!((e16.numeric - 1.0 / 384.0).abs() < 1e-12);
}

#[test]
fn region3_suite() {
    for s in [0.5, 1.0, 2.0] {
        let b = basis_region3(s).unwrap();
        assert_all_pass(&basis_suite(&b).unwrap());
    }
}

#[test]
fn region1_pairing_at_half() {
    let b = basis_region1(0.5).unwrap();
    let v = symplectic_product(b.get("e2").unwrap(), b.get("e3").unwrap());
    assert!((v - 1.0 / 16.0).abs() < 1e-14);
}

#[test]
fn region3_tau1_by_quadrature() {
    let t = taylor_coefficient_check(CoefficientTag::IIITau1 { s: 1.0 }, &MagnetisationLaw::Linear).unwrap();
    assert!((t.numeric - tau1(1.0)).abs() < 1e-9);
}

#[test]
fn reverser_flips_omega() {
    let b = basis_region2();
    let e5 = b.get("e5").unwrap();
    assert_eq!(e5.reversed().omega, 1.0 / 192.0);
    let trivial = SpatialState::new(0.3, 0.0, RadialFunction::zero(), RadialFunction::constant(0.1));
    let r = trivial.reversed();
    assert_eq!(r.eta, trivial.eta);
    assert_eq!(r.zeta.value(0.4), trivial.zeta.value(0.4));
}

#[test]
fn quadratic_term_vanishes_on_c4() {
    let b = basis_region1(0.5).unwrap();
    let f2 = b.get_normalised("f2").unwrap();
    let q = ferrojet::specfun::taylor_coefficient(
        |t| hamiltonian(&f2.scaled(t), 0.5, 2.5, &MagnetisationLaw::Linear).unwrap(),
        2,
        1e-3,
    )
    .unwrap();
    assert!(q.abs() < 1e-8, "{q:e}");
}

#[test]
fn taylor_checks_across_laws() {
    for law in laws() {
        for beta0 in [0.5, 1.0] {
            for tag in [CoefficientTag::IC1 { beta0 }, CoefficientTag::IC1_1 { beta0 }] {
                let t = taylor_coefficient_check(tag, &law).unwrap();
                assert!(t.relative_error < 1e-5, "{tag:?} {law:?}: {t:?}");
            }
        }
        for tag in [CoefficientTag::IIC1, CoefficientTag::IIC1_01] {
            let t = taylor_coefficient_check(tag, &law).unwrap();
            assert!(t.relative_error < 1e-5, "{tag:?} {law:?}: {t:?}");
        }
        let t = taylor_coefficient_check(CoefficientTag::IIC1_10, &law).unwrap();
        assert!(t.numeric.abs() < 1e-8, "{t:?}");
        for s in [0.5, 1.0, 2.0] {
            for tag in [CoefficientTag::IIIC2_1 { s }, CoefficientTag::IIITau1 { s }] {
                let t = taylor_coefficient_check(tag, &law).unwrap();
                assert!(t.relative_error < 1e-5, "{tag:?} {law:?}: {t:?}");
            }
        }
    }
}

#[test]
fn region1_c1_linear_value() {
    let t = taylor_coefficient_check(CoefficientTag::IC1 { beta0: 0.5 }, &MagnetisationLaw::Linear).unwrap();
    assert!((t.numeric + 14.0 / 3.0).abs() < 1e-5, "{t:?}");
    assert!(t.relative_error < 1e-6);
}

/// Straightforward evaluation with composite quadrature and the uncancelled β terms.
fn hamiltonian_oracle(eta: f64, omega: f64, phi_r: impl Fn(f64) -> f64, zeta: impl Fn(f64) -> f64, beta: f64, alpha: f64) -> f64 {
    let e1 = 1.0 + eta;
    let moment = composite_quadrature(|r| r * r * phi_r(r) * (zeta(r) - 1.0), 0.0, 1.0, 16);
    let w = (omega + moment / e1) / e1;
    let bulk = composite_quadrature(
        |r| {
            let xi = zeta(r) - 1.0;
            let q = xi / (e1 * e1) + 1.0;
            0.5 * q * q * e1 * e1 * r - 0.5 * r * phi_r(r) * phi_r(r)
        },
        0.0,
        1.0,
        16,
    );
    bulk + alpha * t_energy(&MagnetisationLaw::Linear, eta).unwrap() - e1 * (beta * beta - w * w).sqrt()
        + 0.5 * beta * e1 * e1
}

#[test]
fn hamiltonian_matches_oracle() {
    let phi = RadialFunction::polynomial(&[(0.2, 2), (-0.1, 4), (0.7, 0)]);
    let zeta = RadialFunction::bessel_i0(0.05, 1.5).plus(&RadialFunction::constant(-0.02));
    let state = SpatialState::new(0.07, 0.13, phi, zeta.clone());
    let h = hamiltonian(&state, 0.8, 2.6, &MagnetisationLaw::Linear).unwrap();
    let want = hamiltonian_oracle(
        0.07,
        0.13,
        |r| 0.4 * r - 0.4 * r * r * r,
        |r| zeta.value(r),
        0.8,
        2.6,
    );
    assert!((h - want).abs() < 1e-10, "{h} vs {want}");
}
