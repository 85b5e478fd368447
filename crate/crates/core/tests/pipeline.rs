mod common;

use zjtangent::kinematics::{make_state, DeformationState};
use zjtangent::materials::{spatial_tangent, MaterialModel, Model};
use zjtangent::path::MotionPath;
use zjtangent::tangents::{hzj_sigma_from_tau, kirchhoff_tangent, TangentSet};
use zjtangent::tensor::{to_mandel, Tensor2};
use zjtangent::uniaxial::{grid, monotonicity_scan, stiffness_bridge, stresses_1d, ScalarLaw};
use zjtangent::verify::{
    det_scan, stability_sweep, symmetry_report, tsts_check, GridSpec, StandardPath, SweepReport, DEFAULT_SEED,
};

/// The 1D laws are the 3D laws restricted to `F = diag(λ, 1, 1)` with
/// `μ = ½, λ_L = 0`, read off the (11) components.
#[test]
fn one_d_matches_three_d_pipeline() {
    for (law, model) in [
        (ScalarLaw::hencky(), Model::hencky(0.5, 0.0)),
        (ScalarLaw::svk(), Model::Svk { mu: 0.5, lambda: 0.0 }),
        (ScalarLaw::new("hencky-fd", |l: f64| 0.5 * l.ln().powi(2)), Model::hencky(0.5, 0.0)),
    ] {
        for lam in grid(0.2, 5.0, 0.1).unwrap() {
            let state = make_state(&Tensor2::diag(lam, 1.0, 1.0)).unwrap();
            let st = model.stresses(&state).unwrap();
            let s1 = stresses_1d(&law, lam).unwrap();
            let b1 = stiffness_bridge(&law, lam).unwrap();
            let h_tau = kirchhoff_tangent(&model, &state).unwrap();
            let h = hzj_sigma_from_tau(&h_tau, &st.sigma, state.j).unwrap();
            let tol = 1e-8 * (1.0 + s1.tau.abs());
            assert!((st.sigma.0[0][0] - s1.sigma).abs() < tol, "{} σ at {lam}", law.label);
            assert!((st.tau.0[0][0] - s1.tau).abs() < tol, "{} τ at {lam}", law.label);
            assert!((st.s1.0[0][0] - s1.biot).abs() < tol, "{} S1 at {lam}", law.label);
            assert!((st.s2.0[0][0] - s1.s2).abs() < tol, "{} S2 at {lam}", law.label);
            assert!(
                (h_tau.0[0][0][0][0] - b1.h_tau).abs() < 1e-8 * (1.0 + b1.h_tau.abs()),
                "{} H_tau at {lam}",
                law.label
            );
            assert!((h.0[0][0][0][0] - b1.h).abs() < 1e-8 * (1.0 + b1.h.abs()), "{} H at {lam}", law.label);
        }
    }
}

#[test]
fn symmetry_report_examples() {
    let m = Model::hencky(1.0, 1.0);
    for s in common::random_states(5, 5) {
        let h_tau = kirchhoff_tangent(&m, &s).unwrap();
        let r = symmetry_report(&h_tau, 1e-9);
        assert!(r.passed && r.get("major") < 1e-9);
        let sigma = m.stresses(&s).unwrap().sigma;
        let r = symmetry_report(&hzj_sigma_from_tau(&h_tau, &sigma, s.j).unwrap(), 1e-9);
        assert!(!r.passed);
        assert_eq!(r.failures, vec!["major symmetry violated beyond 1e-9".to_string()]);
    }
    let svk = Model::Svk { mu: 1.0, lambda: 2.0 };
    let s = &common::random_states(6, 1)[0];
    let c = spatial_tangent(s, &svk.material_tangent(s).unwrap());
    assert!(symmetry_report(&c, 1e-12).passed);
}

#[test]
fn tangent_set_at_identity_is_isotropic() {
    let set = TangentSet::build(&Model::hencky(1.0, 1.0), &DeformationState::identity(), 1e-9).unwrap();
    let m = to_mandel(&set.h_zj_tau_absolute).unwrap();
    for a in 0..6 {
        for b in 0..6 {
            let expect = if a == b { 2.0 } else { 0.0 } + if a < 3 && b < 3 { 1.0 } else { 0.0 };
            assert!((m.0[a][b] - expect).abs() < 1e-12);
        }
    }
    let json = serde_json::to_value(&set).unwrap();
    assert_eq!(json["h_zj_tau_direct"]["convention"], "mandel-sqrt2-112233122331");
}

#[test]
fn full_sweep_report_round_trips() {
    let r = stability_sweep(&Model::hencky(1.0, 1.0), GridSpec::default(), &StandardPath::ALL).unwrap();
    assert_eq!(r.evaluations, 6 * 991);
    assert!(r.all_stable);
    assert!(r.paths.iter().all(|p| p.records.iter().all(|x| x.min_eigenvalue.unwrap().is_finite())));
    let text = serde_json::to_string(&r).unwrap();
    let back: SweepReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    assert_eq!(r.to_csv().lines().count(), 1 + 6 * 991);
}

#[test]
fn destabilised_law_first_unstable_near_reference() {
    let spec = GridSpec { min: 0.1, max: 10.0, step: 0.01 };
    let r = stability_sweep(&Model::hencky(1.0, -1.0), spec, &StandardPath::ALL).unwrap();
    let first = r.paths.iter().find(|p| p.path == StandardPath::UniaxialTension).unwrap().first_unstable_lambda;
    assert!((first.unwrap() - 1.0).abs() <= 0.01);
}

#[test]
fn incompressible_sweep_is_stable_on_traceless_subspace() {
    let spec = GridSpec { min: 0.1, max: 10.0, step: 0.05 };
    let r = stability_sweep(&Model::HenckyIncompressible { mu: 1.0 }, spec, &StandardPath::ALL).unwrap();
    assert!(r.all_stable, "{}", r.summary_line());
    assert_eq!(r.subspace, "traceless");
}

#[test]
fn hencky_scan_reproduces_cauchy_peak() {
    let scan = monotonicity_scan(&ScalarLaw::hencky(), 0.1, 10.0, 0.01).unwrap();
    let peak = scan.argmax_sigma().unwrap();
    assert!((peak - std::f64::consts::E).abs() <= 0.01);
    assert!(scan.points.iter().all(|p| (p.tau - p.lambda.ln()).abs() < 1e-14));
}

#[test]
fn det_scan_at_stress_free_state_matches_mandel_c() {
    let m = Model::hencky(1.0, 1.0);
    let r = det_scan(&m, &MotionPath::uniaxial(1.0, 1.5), &[0.0]).unwrap();
    // det of the isotropic Mandel matrix: (2μ)⁵ (2μ + 3λ)
    assert!((r.get("min_det") - 32.0 * 5.0).abs() < 1e-9);
}

#[test]
fn tsts_hydrostatic_state_is_unaffected_by_symmetrisation() {
    let m = Model::hencky(1.0, 1.0);
    let state = make_state(&Tensor2::diag(1.3, 1.3, 1.3)).unwrap();
    let sigma = m.stresses(&state).unwrap().sigma;
    let h = hzj_sigma_from_tau(&kirchhoff_tangent(&m, &state).unwrap(), &sigma, state.j).unwrap();
    let mm = to_mandel(&h).unwrap();
    assert!(mm.skew_norm() < 1e-12);
    let r = tsts_check(&m, &state, 100, DEFAULT_SEED).unwrap();
    assert!(r.passed);
}
