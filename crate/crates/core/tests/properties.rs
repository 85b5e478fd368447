mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zjtangent::kinematics::{dlog_frechet, make_state, sym_exp};
use zjtangent::materials::{spatial_tangent, MaterialModel, Model};
use zjtangent::rates::{rate_value, RateInput, RateKind};
use zjtangent::sample;
use zjtangent::tangents::{hzj_sigma_absolute, hzj_tau_absolute, kirchhoff_tangent, rel_frobenius, TangentSet};
use zjtangent::tensor::{
    apply4, from_mandel, mandel_vec, outer, sym_downup, symmetry_flags, tensor_from_mandel_vec, to_mandel, Tensor2,
};

fn tensor2() -> impl Strategy<Value = Tensor2> {
    prop::array::uniform3(prop::array::uniform3(-1.0..1.0f64)).prop_map(Tensor2)
}

fn sym_tensor2() -> impl Strategy<Value = Tensor2> {
    tensor2().prop_map(|t| t.sym())
}

fn skew_tensor2() -> impl Strategy<Value = Tensor2> {
    tensor2().prop_map(|t| t.skew())
}

/// Deformation gradient with `det F ∈ [0.3, 3]`, drawn through a seed so
/// shrinking stays within the admissible set.
fn state() -> impl Strategy<Value = zjtangent::kinematics::DeformationState> {
    any::<u64>().prop_map(|seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        make_state(&sample::deformation_gradient(&mut rng, 0.3, 3.0)).unwrap()
    })
}

fn stable_lame() -> impl Strategy<Value = (f64, f64)> {
    (0.1..5.0f64, 0.0..1.0f64).prop_map(|(mu, t)| {
        // λ ranges over (-2μ/3, 5μ) so that 2μ + 3λ > 0
        let lambda = -2.0 * mu / 3.0 * 0.999 + t * (5.0 * mu + 2.0 * mu / 3.0);
        (mu, lambda)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn special_product_identities(p in tensor2(), q in tensor2(), r in tensor2(), s in tensor2(), z in tensor2(), y in tensor2()) {
        for (name, res) in common::algebra_residuals(&p, &q, &r, &s, &z, &y) {
            prop_assert!(res <= 1e-13, "{}: {:e}", name, res);
        }
    }

    #[test]
    fn mandel_preserves_inner_products(p in sym_tensor2(), q in sym_tensor2(), z in sym_tensor2()) {
        let t = sym_downup(&p, &q) + outer(&p, &q).minor_symmetrised();
        let m = to_mandel(&t).unwrap();
        prop_assert!((m.quad_form(&mandel_vec(&z)) - apply4(&t, &z).inner(&z)).abs() <= 1e-13);
        prop_assert!(from_mandel(&m).rel_diff(&t) <= 1e-15);
        let back = tensor_from_mandel_vec(&mandel_vec(&z));
        prop_assert!(back.rel_diff(&z) <= 4.0 * f64::EPSILON);
        let v = mandel_vec(&z);
        prop_assert!((v.iter().map(|x| x * x).sum::<f64>() - z.inner(&z)).abs() <= 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn objective_rates_are_frame_indifferent(
        sigma in sym_tensor2(), sigma_dot in sym_tensor2(), l in tensor2(),
        omega in skew_tensor2(), seed in any::<u64>(), polar in skew_tensor2(),
    ) {
        // superposed rigid motion with Q(t) = Q, Q̇ = Ω Q at the instant considered
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = sample::rotation(&mut rng);
        let qdot = omega * q;
        let qt = q.transpose();
        let sigma_s = q * sigma * qt;
        let sigma_dot_s = qdot * sigma * qt + q * sigma_dot * qt + q * sigma * qdot.transpose();
        let l_s = q * l * qt + qdot * qt;
        let input = RateInput::new(sigma, sigma_dot, l).with_spin(polar);
        let input_s = RateInput::new(sigma_s, sigma_dot_s, l_s).with_spin(q * polar * qt + qdot * qt);
        for kind in RateKind::ALL {
            let lhs = rate_value(kind, &input_s).unwrap();
            let rhs = q * rate_value(kind, &input).unwrap() * qt;
            prop_assert!(lhs.rel_diff(&rhs) <= 1e-13, "{}", kind);
        }
    }

    #[test]
    fn kirchhoff_tangent_has_all_symmetries(s in state(), (mu, lambda) in stable_lame()) {
        let m = Model::hencky(mu, lambda);
        let h = kirchhoff_tangent(&m, &s).unwrap();
        let f = symmetry_flags(&h, 1e-9);
        prop_assert!(f.all(), "{:?}", f.residuals);
    }

    #[test]
    fn three_constructions_agree(s in state(), (mu, lambda) in stable_lame()) {
        let set = TangentSet::build(&Model::hencky(mu, lambda), &s, 1e-9).unwrap();
        prop_assert!(set.residuals.tau_absolute_vs_lagrangian <= 1e-11);
        prop_assert!(set.residuals.tau_absolute_vs_direct.unwrap() <= 1e-6);
        prop_assert!(set.residuals.sigma_absolute_vs_from_tau <= 1e-6);
        prop_assert!(set.residuals.bridge <= 1e-12);
    }

    #[test]
    fn sigma_tangent_asymmetry_is_the_sigma_outer_defect(s in state()) {
        let m = Model::hencky(1.0, 1.0);
        let st = m.stresses(&s).unwrap();
        let c = spatial_tangent(&s, &m.material_tangent(&s).unwrap());
        let h = hzj_sigma_absolute(&c, &st.sigma).unwrap();
        let i = Tensor2::IDENTITY;
        let expect = 0.5 * (outer(&st.sigma, &i) - outer(&i, &st.sigma)).norm();
        let flags = symmetry_flags(&h, 1e-9);
        prop_assert!((flags.absolute.major - expect).abs() <= 1e-12 * (1.0 + expect));
    }

    #[test]
    fn bridge_holds_for_svk(s in state(), (mu, lambda) in stable_lame()) {
        let m = Model::Svk { mu, lambda };
        let st = m.stresses(&s).unwrap();
        let c = spatial_tangent(&s, &m.material_tangent(&s).unwrap());
        let h_tau = hzj_tau_absolute(&c, &st.tau, s.j).unwrap();
        let h = hzj_sigma_absolute(&c, &st.sigma).unwrap();
        prop_assert!(rel_frobenius(&h_tau, &((h + outer(&st.sigma, &Tensor2::IDENTITY)) * s.j)) <= 1e-12);
    }

    #[test]
    fn dlog_trace_identity(seed in any::<u64>(), d in sym_tensor2()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = sample::spd(&mut rng, 3.0);
        let lhs = dlog_frechet(&b, &(b * d + d * b)).unwrap().trace();
        prop_assert!((lhs - 2.0 * d.trace()).abs() <= 1e-11);
    }

    #[test]
    fn hill_quotient_bounded_below_in_stable_range(x1 in sym_tensor2(), x2 in sym_tensor2(), (mu, lambda) in stable_lame()) {
        // τ is linear in log V for Hencky, so the quotient lies in [min(2μ, 2μ+3λ), max(2μ, 2μ+3λ)]
        let m = Model::hencky(mu, lambda);
        let (s1, s2) = (make_state(&sym_exp(&(x1 * 1.5)).unwrap()).unwrap(), make_state(&sym_exp(&(x2 * 1.5)).unwrap()).unwrap());
        let dx = s1.log_v - s2.log_v;
        prop_assume!(dx.norm() > 1e-6);
        let q = (m.kirchhoff(&s1).unwrap() - m.kirchhoff(&s2).unwrap()).inner(&dx) / dx.inner(&dx);
        let lo = f64::min(2.0 * mu, 2.0 * mu + 3.0 * lambda);
        prop_assert!(q >= lo - 1e-9 * (1.0 + q.abs()));
    }

    #[test]
    fn zj_rate_of_tau_matches_tangent_contraction(s in state(), d in sym_tensor2(), w in skew_tensor2()) {
        // F(t) = exp(tD) Q(t) F₀ with Q̇(0) = W has L(0) = D + W
        let m = Model::hencky(1.0, 1.0);
        let l = d + w;
        let h = 1e-4;
        let tau_at = |t: f64| {
            let f = sym_exp(&(d * t)).unwrap() * zjtangent::path::rotation_about([w.0[2][1], w.0[0][2], w.0[1][0]], t * (w.norm() / 2f64.sqrt())) * s.f;
            m.kirchhoff(&make_state(&f).unwrap()).unwrap()
        };
        prop_assume!(w.norm() > 1e-3);
        let tau0 = m.kirchhoff(&s).unwrap();
        let tau_dot = (tau_at(h) - tau_at(-h)) / (2.0 * h);
        let zj = rate_value(RateKind::ZarembaJaumann, &RateInput::new(tau0, tau_dot, l)).unwrap();
        let pred = apply4(&kirchhoff_tangent(&m, &s).unwrap(), &d);
        prop_assert!((zj - pred).norm() <= 1e-6 * (1.0 + pred.norm()), "{:e}", (zj - pred).norm());
    }
}
