use ferrojet::reduced::*;

fn sup_error_against(orbit: &HomoclinicOrbit, exact: impl Fn(f64) -> f64) -> f64 {
    orbit
        .grid
        .iter()
        .zip(&orbit.u)
        .map(|(&z, &u)| (u - exact(z)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn planar_shooting_matches_closed_forms() {
    let o = planar_homoclinic(1.0, 0.0, Branch::Positive).unwrap();
    let err = sup_error_against(&o, |z| 1.5 / (0.5 * z).cosh().powi(2));
    assert!(err < 1e-8, "quadratic sup error {err:e}");
    assert!(o.energy_drift < 1e-10);
    assert_eq!(o.symmetry_error(), 0.0);

    for branch in [Branch::Positive, Branch::Negative] {
        let o = planar_homoclinic(0.0, 1.0, branch).unwrap();
        let sg = if branch == Branch::Positive { 1.0 } else { -1.0 };
        let err = sup_error_against(&o, |z| sg * 2f64.sqrt() / z.cosh());
        assert!(err < 1e-8, "cubic sup error {err:e}");
    }
}

#[test]
fn planar_crest_is_the_turning_point() {
    for (a, b) in [(0.7, 0.3), (-1.2, 0.5), (0.4, -0.05)] {
        for branch in [Branch::Positive, Branch::Negative] {
            let Ok(q) = turning_point(a, b, branch) else { continue };
            let o = planar_homoclinic(a, b, branch).unwrap();
            assert!((o.amplitude() - q).abs() < 1e-9, "a={a} b={b} {branch:?}");
        }
    }
}

#[test]
fn planar_rejects_missing_branch() {
    assert!(matches!(
        planar_homoclinic(1.0, 0.0, Branch::Negative),
        Err(ReducedError::NoTurningPoint { .. })
    ));
}

#[test]
fn seed_reconverges_in_few_newton_steps() {
    for m in [2, 3] {
        let (delta, seed) = kawahara_exact_seed(m).unwrap();
        let (a, b) = if m == 2 { (1.0, 0.0) } else { (0.0, 1.0) };
        let opts = KawaharaOptions::default();
        let h = opts.half_length / opts.nodes as f64;
        let u0: Vec<f64> = (0..=opts.nodes).map(|j| seed.sample(j as f64 * h).unwrap()).collect();
        let offset = seed.grid.len() / 2;
        let stride = (seed.grid.len() - 1) / 2 / opts.nodes;
        let v0: Vec<f64> = (0..=opts.nodes).map(|j| seed.derivatives[1][offset + j * stride]).collect();
        let sol = kawahara_refine(delta, a, b, &u0, &v0, &opts).unwrap();
        assert!(sol.newton_trace.len() <= 3, "m={m}: {} steps", sol.newton_trace.len());
        assert!(sol.orbit.residual_norm < 1e-10);
        let err = sup_error_against(&sol.orbit, |z| seed.sample(z).unwrap());
        assert!(err < 1e-6, "m={m}: discretisation error {err:e}");
    }
}

#[test]
fn continuation_reaches_zero_delta() {
    let sol = kawahara_solve(0.0, 1.0, 0.0, &KawaharaOptions::default()).unwrap();
    let o = &sol.orbit;
    assert!(o.residual_norm < 1e-10);
    assert!(o.symmetry_error() < 1e-12);
    assert!(o.endpoint_decay() < 1e-6);
    // Reference amplitude frozen from the first verified run (L = 30, 3000 nodes).
    assert!((o.amplitude() - 1.4543674600).abs() < 1e-8, "amplitude {}", o.amplitude());
    let tr = scalar_to_system_region2(o, 0.0).unwrap();
    assert!(tr.residual_norm < 1e-5, "4D residual {:e}", tr.residual_norm);
    assert!(o.energy_drift < 1e-6, "energy drift {:e}", o.energy_drift);
}

#[test]
fn negative_delta_solution_exists() {
    let sol = kawahara_solve(-0.05, 1.0, 0.0, &KawaharaOptions::default()).unwrap();
    assert!(sol.orbit.residual_norm < 1e-10);
    assert!(sol.orbit.endpoint_decay() < 1e-6);
}

#[test]
fn grid_refinement_is_stable() {
    let coarse = kawahara_homoclinic(0.0, 1.0, 0.0, 30.0, 3000).unwrap();
    let fine = kawahara_homoclinic(0.0, 1.0, 0.0, 30.0, 6000).unwrap();
    assert!((coarse.amplitude() - fine.amplitude()).abs() < 1e-6);
}

#[test]
fn scaling_handles_sign_of_quadratic_term() {
    let up = kawahara_homoclinic(0.1, 2.0, 0.0, 30.0, 3000).unwrap();
    let down = kawahara_homoclinic(0.1, -2.0, 0.0, 30.0, 3000).unwrap();
    assert!((up.amplitude() + down.amplitude()).abs() < 1e-12);
    assert!(down.amplitude() < 0.0);
}

#[test]
fn cubic_branch_sign() {
    let opts = KawaharaOptions { branch: Branch::Negative, ..KawaharaOptions::default() };
    let sol = kawahara_solve(0.1, 0.0, 4.0, &opts).unwrap();
    assert!(sol.orbit.amplitude() < 0.0);
    assert!(kawahara_solve(0.1, 0.0, -1.0, &opts).is_err());
}

#[test]
fn mixed_nonlinearity_continues_in_ratio() {
    let sol = kawahara_solve(0.1, 1.0, 0.3, &KawaharaOptions::default()).unwrap();
    assert!(sol.orbit.residual_norm < 1e-10);
}
