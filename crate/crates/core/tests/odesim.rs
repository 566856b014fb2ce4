use bihv_core::odesim::{
    constant_solutions, integrate, linear_state, odetau_residuals, r_theta_reconstruct, residuals, rk4_endpoint,
    ClosedFormFamily, Member, OdeError, PkEvaluator, SystemSpec,
};
use bihv_core::poly::int;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

#[test]
fn families_satisfy_the_system_and_match_rk4() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (k, c_range, t0) in [(0, (0.0, 1.0), 1.0), (-1, (-1.0, 1.0), 0.0), (1, (-0.3, 0.3), 0.0)] {
        for _ in 0..5 {
            let n1 = 2 + (rand::Rng::random_range(&mut rng, 0..3u32));
            let f = ClosedFormFamily::sample(k, n1, c_range, &mut rng).unwrap();
            for j in 0..=50 {
                let t = t0 + j as f64 / 50.0;
                assert!(f.ode_residual(t).unwrap() < 1e-8, "K={k}");
            }
            let traj = integrate(&f.spec(), &f.state(t0).unwrap(), t0, t0 + 1.0, 1e-10).unwrap();
            for (t, y) in traj.times.iter().zip(&traj.states) {
                assert!(max_diff(y, &f.state(*t).unwrap()) < 1e-6);
            }
        }
    }
}

#[test]
fn chain_vanishes_along_a_family() {
    let f = ClosedFormFamily::new(0, vec![Member::regular(1.0, 0.5), Member::regular(-1.0, 0.5), Member::regular(0.0, 0.2)])
        .unwrap();
    let traj = integrate(&f.spec(), &f.state(1.0).unwrap(), 1.0, 2.0, 1e-10).unwrap();
    let r = residuals(&traj, 3).unwrap();
    assert!(r.max_p_all() < 1e-6, "{}", r.max_p_all());
    assert!(r.max_odetau() < 1e-6);
    assert!(r.max_odetau_field() < 1e-9);
}

#[test]
fn off_variety_start_is_visible() {
    let spec = SystemSpec::full(2, 0.0).unwrap();
    let traj = integrate(&spec, &[1.0, 0.5, 0.2, -0.3], 0.0, 0.1, 1e-10).unwrap();
    let r = residuals(&traj, 0).unwrap();
    assert!(r.p[0][0].abs() > 1e-3);
}

#[test]
fn fd_and_field_residuals_agree_on_smooth_trajectories() {
    let spec = SystemSpec::full(2, 1.0).unwrap();
    let traj = integrate(&spec, &[0.3, 0.1, 0.2, -0.3], 0.0, 0.5, 1e-11).unwrap();
    let r = odetau_residuals(&traj);
    for (fd, field) in r.odetau.iter().zip(&r.odetau_field) {
        if let Some(fd) = fd {
            assert!((fd - field).abs() < 1e-4, "{fd} vs {field}");
        }
    }
}

#[test]
fn rk4_order_is_four() {
    let spec = SystemSpec::full(2, 1.0).unwrap();
    let y0 = [0.3, 0.1, 0.2, -0.3];
    let reference = rk4_endpoint(&spec, &y0, 0.0, 1.0, 4096).unwrap();
    let e1 = max_diff(&rk4_endpoint(&spec, &y0, 0.0, 1.0, 64).unwrap(), &reference);
    let e2 = max_diff(&rk4_endpoint(&spec, &y0, 0.0, 1.0, 128).unwrap(), &reference);
    let order = (e1 / e2).log2();
    assert!((3.5..=4.5).contains(&order), "{order}");
}

#[test]
fn linear_mode_tracks_the_full_system() {
    let lambda = [0.4, -0.2, 0.7];
    let (phi, psi) = (0.3, -0.1);
    let mu: Vec<f64> = lambda.iter().map(|l| phi * l + psi).collect();
    let full = SystemSpec::full(3, -1.0).unwrap();
    let lin = SystemSpec::linear(3, -1.0).unwrap();
    let mut y0 = lambda.to_vec();
    y0.extend(&mu);
    let a = integrate(&full, &y0, 0.0, 1.0, 1e-11).unwrap();
    let b = integrate(&lin, &linear_state(&lambda, phi, psi), 0.0, 1.0, 1e-11).unwrap();
    assert_eq!(a.step, b.step);
    assert!(max_diff(&a.tau(), &b.tau()) < 1e-6);
    // the two field residuals are the same function of the state
    let (ra, rb) = (odetau_residuals(&a), odetau_residuals(&b));
    assert!(max_diff(&ra.odetau_field, &rb.odetau_field) < 1e-6);
}

#[test]
fn equal_pairs_stay_equal() {
    let spec = SystemSpec::full(3, 1.0).unwrap();
    let traj = integrate(&spec, &[0.2, 0.2, -0.5, 0.1, 0.1, 0.4], 0.0, 1.0, 1e-10).unwrap();
    for y in &traj.states {
        assert!((y[0] - y[1]).abs() < 1e-9 && (y[3] - y[4]).abs() < 1e-9);
    }
}

#[test]
fn polar_reconstruction() {
    let f = ClosedFormFamily::new(0, vec![Member::regular(1.0, 0.3), Member::regular(-1.0, 0.3)]).unwrap();
    let traj = integrate(&f.spec(), &f.state(1.0).unwrap(), 1.0, 2.0, 1e-10).unwrap();
    let rep = r_theta_reconstruct(&traj).unwrap();
    assert!(rep.max_error < 1e-6 && rep.flagged.is_empty());

    let single = ClosedFormFamily::new(0, vec![Member::regular(0.0, 0.0)]).unwrap();
    let traj = integrate(&single.spec(), &single.state(1.0).unwrap(), 1.0, 2.0, 1e-10).unwrap();
    let rep = r_theta_reconstruct(&traj).unwrap();
    assert!(rep.theta[0].iter().all(|th| (th - rep.theta[0][0]).abs() < 1e-14));
    assert!(rep.max_error < 1e-6);

    let zero = integrate(&SystemSpec::full(1, 0.0).unwrap(), &[0.0, 0.0], 0.0, 1.0, 1e-10).unwrap();
    assert!(matches!(r_theta_reconstruct(&zero), Err(OdeError::Precondition(_))));
}

#[test]
fn constant_solution_is_stationary_numerically() {
    let sols = constant_solutions(3, &int(1));
    let spec = SystemSpec::full(3, 1.0).unwrap();
    for s in &sols.nonminimal {
        let y0 = s.to_f64();
        let traj = integrate(&spec, &y0, 0.0, 1.0, 1e-10).unwrap();
        assert!(traj.states.iter().all(|y| y == &y0));
        let r = residuals(&traj, 3).unwrap();
        assert!(r.max_p_all() < 1e-12 && r.max_odetau() == 0.0);
    }
}

#[test]
fn chain_sizes_for_small_n1() {
    for n1 in 1..=4 {
        assert_eq!(PkEvaluator::new(n1, 3).unwrap().k_max(), 3);
    }
}
