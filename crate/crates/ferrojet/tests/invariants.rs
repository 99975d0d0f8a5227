use ferrojet::coefficients::region1;
use ferrojet::magnetisation::MagnetisationLaw;
use ferrojet::profiles::{eta_region1, Convention, Nonlinearity};
use ferrojet::reduced::*;
use ferrojet::specfun::{bessel_i, bessel_j};
use ferrojet::spectrum::{curve_c2, ParameterPoint};
use ferrojet::verify::{apply_k, symplectic_product, RadialFunction, SpatialState};
use proptest::prelude::*;

fn radial() -> impl Strategy<Value = RadialFunction> {
    (prop::collection::vec(-2.0..2.0f64, 4), 0.1..3.0f64, -1.0..1.0f64).prop_map(|(c, s, k)| {
        // Even powers only: smooth on the axis.
        RadialFunction::polynomial(&[(c[0], 0), (c[1], 2), (c[2], 4), (c[3], 6)])
            .plus(&RadialFunction::bessel_i0(k, s))
    })
}

fn state() -> impl Strategy<Value = SpatialState> {
    (-2.0..2.0f64, -2.0..2.0f64, radial(), radial()).prop_map(|(e, w, p, z)| SpatialState::new(e, w, p, z))
}

fn same_state(a: &SpatialState, b: &SpatialState) -> Result<(), TestCaseError> {
    prop_assert!((a.eta - b.eta).abs() < 1e-10);
    prop_assert!((a.omega - b.omega).abs() < 1e-10);
    for r in [0.0, 0.25, 0.5, 0.75, 1.0] {
        prop_assert!((a.phi.value(r) - b.phi.value(r)).abs() < 1e-10, "phi at {}", r);
        prop_assert!((a.zeta.value(r) - b.zeta.value(r)).abs() < 1e-10, "zeta at {}", r);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bessel_recurrences(x in 0.01..20.0f64) {
        let j: Vec<f64> = (0..4).map(|n| bessel_j(n, x).unwrap()).collect();
        prop_assert!((j[0] + j[2] - 2.0 / x * j[1]).abs() < 1e-12 * (1.0 + 2.0 / x));
        prop_assert!((j[1] + j[3] - 4.0 / x * j[2]).abs() < 1e-12 * (1.0 + 4.0 / x));
        let i: Vec<f64> = (0..4).map(|n| bessel_i(n, x).unwrap()).collect();
        let scale = i[0] * (1.0 + 4.0 / x);
        prop_assert!((i[0] - i[2] - 2.0 / x * i[1]).abs() < 1e-13 * scale);
        prop_assert!((i[1] - i[3] - 4.0 / x * i[2]).abs() < 1e-13 * scale);
    }

    #[test]
    fn omega_is_antisymmetric(u in state(), v in state()) {
        let uv = symplectic_product(&u, &v);
        let vu = symplectic_product(&v, &u);
        prop_assert!((uv + vu).abs() < 1e-12 * (1.0 + uv.abs()));
        prop_assert!(symplectic_product(&u, &u).abs() < 1e-12);
    }

    #[test]
    fn reverser_anticommutes_with_k(u in state(), beta0 in 0.05..4.0f64, gamma0 in 0.5..4.0f64) {
        let ks = apply_k(&u.reversed(), beta0, gamma0).unwrap();
        let sk = apply_k(&u, beta0, gamma0).unwrap().reversed();
        same_state(&ks, &sk.scaled(-1.0))?;
    }

    #[test]
    fn convention_ratio_is_fixed(mu in 0.001..0.2f64, beta0 in 0.3..3.0f64) {
        let c = region1(beta0, &MagnetisationLaw::Linear).unwrap();
        let orbit = planar_homoclinic(c.c_check, 0.0, Branch::Negative).unwrap();
        let a = eta_region1(&orbit, mu, beta0, Nonlinearity::Quadratic, Convention::BasisConsistent).unwrap();
        let b = eta_region1(&orbit, mu, beta0, Nonlinearity::Quadratic, Convention::PaperLiteral).unwrap();
        let want = 0.5 * (beta0 - 0.25).sqrt();
        prop_assert!((b.amplitude() / a.amplitude() - want).abs() < 1e-12 * want);
        prop_assert_eq!(&a.z, &b.z);
    }

    #[test]
    fn alpha_gamma_beta_relation(beta0 in 0.01..10.0f64, gamma0 in 0.01..10.0f64, s in 0.05..4.0f64) {
        let p = ParameterPoint::new(beta0, gamma0);
        prop_assert!((p.alpha0 - p.beta0 - p.gamma0).abs() < 1e-12 * p.alpha0);
        let c = curve_c2(s);
        prop_assert!((c.alpha0 - c.beta0 - c.gamma0).abs() < 1e-12 * c.alpha0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn planar_orbit_independent_of_offset(a in -2.0..2.0f64, b in 0.1..2.0f64, e1 in 1e-9..1e-7f64, e2 in 1e-9..1e-7f64) {
        let run = |eps0| planar_homoclinic_with(a, b, Branch::Positive, PlanarOptions { eps0, ..PlanarOptions::default() }).unwrap();
        let (o1, o2) = (run(e1), run(e2));
        prop_assert!((o1.amplitude() - o2.amplitude()).abs() < 1e-9);
        for z in [-3.0, -1.0, 0.5, 2.0] {
            let (u1, u2) = (o1.sample(z).unwrap(), o2.sample(z).unwrap());
            prop_assert!((u1 - u2).abs() < 1e-6, "z = {}: {} vs {}", z, u1, u2);
        }
    }

    #[test]
    fn cubic_branches_are_mirror_images(b in 0.1..4.0f64) {
        let up = planar_homoclinic(0.0, b, Branch::Positive).unwrap();
        let down = planar_homoclinic(0.0, b, Branch::Negative).unwrap();
        prop_assert_eq!(&up.grid, &down.grid);
        for (p, q) in up.u.iter().zip(&down.u) {
            prop_assert!((p + q).abs() < 1e-12);
        }
    }
}
