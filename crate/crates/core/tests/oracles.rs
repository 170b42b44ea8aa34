use std::sync::Arc;

use ctdt_core::certify::{self, LtiWeights};
use ctdt_core::mpc::{self, GradientMap};
use ctdt_core::simulate::{estimate_constants, EstimateOptions};
use ctdt_core::{BoxSet, LtiSystem, MpcProblem};
use nalgebra::{dmatrix, DMatrix};

fn within(est: f64, exact: f64, rel: f64) -> bool {
    (est - exact).abs() <= rel * exact.abs().max(1e-12)
}

#[test]
fn lti_estimates_match_induced_constants() {
    let lti = LtiSystem::new(
        dmatrix![-1.0, 0.4; -0.3, -2.0],
        dmatrix![1.0, 0.0; 0.5, 0.2],
        dmatrix![0.3, -0.2; 0.1, 0.6],
        dmatrix![0.2, 0.1; 0.0, 0.3],
    )
    .unwrap();
    let sys = lti.to_ctdt(2, 0.1).unwrap();
    let exact = certify::lti_constants(&lti, &LtiWeights::default()).unwrap();
    let opts = EstimateOptions {
        samples: 100_000,
        seed: 7,
        reduced_model: true,
        ..EstimateOptions::default()
    };
    let est = estimate_constants(&sys, &BoxSet::symmetric(&[1.0, 1.0]).unwrap(), &BoxSet::symmetric(&[1.0, 1.0]).unwrap(), &opts)
        .unwrap()
        .constants;
    let pairs = [
        ("Lip_x f", est.lip_x_f, exact.lip_x_f),
        ("Lip_z f", est.lip_z_f, exact.lip_z_f),
        ("osLip_x f", est.oslip_x_f, exact.oslip_x_f),
        ("Lip_x G", est.lip_x_g, exact.lip_x_g),
        ("Lip_z G", est.lip_z_g, exact.lip_z_g),
        ("RM rate", est.rm_rate.unwrap(), exact.rm_rate.unwrap()),
    ];
    for (name, e, x) in pairs {
        assert!(within(e, x, 0.05), "{name}: estimate {e} vs exact {x}");
        // Difference quotients never exceed the true constant.
        assert!(e <= x + 1e-8, "{name}: estimate {e} above exact {x}");
    }
}

#[test]
fn mpc_gradient_map_estimate_matches_eigenvalue_oracle() {
    let prob = MpcProblem::double_integrator(0.2, 5).unwrap();
    let cost = Arc::new(mpc::condense(&prob).unwrap());
    let map = GradientMap::with_default_step(cost.clone());
    let sys = map.to_ctdt(&prob, 1, 0.02).unwrap();
    let eta = cost.default_step();
    let h = cost.quadratic_hessian();
    let oracle = h.symmetric_eigenvalues().iter().map(|l| (1.0 - eta * l).abs()).fold(0.0, f64::max);

    let opts = EstimateOptions {
        samples: 100_000,
        seed: 3,
        ..EstimateOptions::default()
    };
    let est = estimate_constants(
        &sys,
        &BoxSet::symmetric(&[10.0, 3.0]).unwrap(),
        &BoxSet::symmetric(&[1.0; 5]).unwrap(),
        &opts,
    )
    .unwrap();
    assert!(within(est.constants.lip_z_g, oracle, 0.01), "{} vs {oracle}", est.constants.lip_z_g);
    assert!(within(map.lipschitz_z().unwrap(), oracle, 1e-10));
}

#[test]
fn zero_field_estimates_vanish() {
    let lti = LtiSystem::new(DMatrix::zeros(1, 1), DMatrix::zeros(1, 1), DMatrix::zeros(1, 1), DMatrix::zeros(1, 1)).unwrap();
    let sys = lti.to_ctdt(1, 0.1).unwrap();
    let unit = BoxSet::symmetric(&[1.0]).unwrap();
    let est = estimate_constants(&sys, &unit, &unit, &EstimateOptions::default()).unwrap().constants;
    assert_eq!(
        [est.lip_x_f, est.lip_z_f, est.oslip_x_f, est.lip_x_g, est.lip_z_g],
        [0.0; 5]
    );
}

#[test]
fn scalar_example_transition_matrix() {
    let lti = LtiSystem::scalar(1.0, 1.0, -3.0, 0.0);
    let t: f64 = 1.0;
    let (l, rate) = certify::lti_dtc_matrix(&lti, 1, t).unwrap();
    let e = t.exp();
    let expected = dmatrix![e, e - 1.0; -3.0 * e, -3.0 * (e - 1.0)];
    assert!((&l - &expected).amax() < 1e-12, "{l}");
    // Rank one: the nonzero eigenvalue is the trace, 3 − 2e.
    assert!(((1.0 + (3.0 - 2.0 * e).abs()) / 2.0 - rate).abs() < 1e-9);
    assert!(rate > 1.0);
}

#[test]
fn stabilised_double_integrator_transition_is_schur() {
    let prob = MpcProblem::double_integrator(0.2, 5).unwrap();
    let k = mpc::unconstrained_gain(&prob).unwrap().k_first;
    let lti = LtiSystem::new(prob.a.clone(), prob.b.clone(), -k, DMatrix::zeros(1, 1)).unwrap();
    let (_, rate) = certify::lti_dtc_matrix(&lti, 1, 0.02).unwrap();
    assert!(rate < 1.0);
}
