//! Property tests over randomly drawn states and parameters.

use num_complex::Complex64;
use painleve3::classical::{classify, Classification};
use painleve3::corners::{self, branch_init, CornerLabel};
use painleve3::identities::momentum_sum_check;
use painleve3::system::{
    eom_rhs, hamiltonian, scalar_params, CanonicalState, ParameterPoint,
};
use painleve3::weyl::{apply_generator, generator_params, Generator};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// complex scalar in a box, bounded away from nothing
fn boxed(lo: f64, hi: f64) -> impl Strategy<Value = Complex64> {
    (lo..hi, lo..hi).prop_map(|(re, im)| c(re, im))
}

/// generic state: t away from 0, p away from {0, 1}, q away from 0
fn generic_state() -> impl Strategy<Value = CanonicalState> {
    (boxed(-2.0, 2.0), boxed(-2.0, 2.0), boxed(-2.0, 2.0))
        .prop_map(|(t, q, p)| {
            let t = t + c(3.0, 0.0); // Re t ∈ [1, 5]
            CanonicalState::new(t, q, p)
        })
        .prop_filter("q away from 0", |s| s.q.norm() > 0.05)
        .prop_filter("p away from 0 and 1", |s| {
            s.p.norm() > 0.05 && (s.p - c(1.0, 0.0)).norm() > 0.05
        })
}

fn generic_params() -> impl Strategy<Value = ParameterPoint> {
    (boxed(-1.5, 1.5), boxed(-1.5, 1.5)).prop_map(|(v1, v2)| ParameterPoint::new(v1, v2))
}

proptest! {
    #[test]
    fn generator_involutions(s in generic_state(), v in generic_params()) {
        for g in [Generator::S0, Generator::S1, Generator::S2] {
            let once = apply_generator(g, v, s).unwrap();
            // the image can land on another generator's singular locus;
            // that aborts rather than wraps, which is fine here
            let twice = apply_generator(g, once.params_out, once.state_out).unwrap();
            prop_assert!((twice.state_out.q - s.q).norm() < 1e-9 * (1.0 + s.q.norm()));
            prop_assert!((twice.state_out.p - s.p).norm() < 1e-9 * (1.0 + s.p.norm()));
            prop_assert!((twice.state_out.t - s.t).norm() < 1e-12);
        }
    }

    #[test]
    fn scalar_params_pins_gamma_delta(v in generic_params()) {
        let sp = scalar_params(v);
        prop_assert_eq!(sp.gamma, c(4.0, 0.0));
        prop_assert_eq!(sp.delta, c(-4.0, 0.0));
        prop_assert_eq!(sp.alpha, -4.0 * v.v2);
        prop_assert_eq!(sp.beta, 4.0 * (v.v1 + 1.0));
    }

    #[test]
    fn eom_is_hamiltonian_flow(s in generic_state(), v in generic_params()) {
        let (qd, pd) = eom_rhs(s, v).unwrap();
        let eps = 1e-6;
        let dh_dp = (hamiltonian(CanonicalState::new(s.t, s.q, s.p + c(eps, 0.0)), v).unwrap()
            - hamiltonian(CanonicalState::new(s.t, s.q, s.p - c(eps, 0.0)), v).unwrap())
            / (2.0 * eps);
        let dh_dq = (hamiltonian(CanonicalState::new(s.t, s.q + c(eps, 0.0), s.p), v).unwrap()
            - hamiltonian(CanonicalState::new(s.t, s.q - c(eps, 0.0), s.p), v).unwrap())
            / (2.0 * eps);
        let scale = 1.0 + qd.norm() + pd.norm();
        prop_assert!((qd - dh_dp).norm() < 1e-7 * scale);
        prop_assert!((pd + dh_dq).norm() < 1e-7 * scale);
    }

    #[test]
    fn momentum_sum_any_branch_signs(s in generic_state(), flip_p in any::<bool>(), flip_pm1 in any::<bool>()) {
        let mut bs = branch_init(s);
        if flip_p {
            bs.sqrt_p = -bs.sqrt_p;
        }
        if flip_pm1 {
            bs.sqrt_pm1 = -bs.sqrt_pm1;
        }
        let r = momentum_sum_check(&bs).unwrap();
        let scale = 1.0 + s.p.norm() + s.q.norm() * s.t.norm();
        prop_assert!(r.norm() < 1e-10 * scale, "residual {} at {:?}", r.norm(), s);
    }

    #[test]
    fn w_roundtrip(s in generic_state()) {
        let bs = branch_init(s);
        let image = corners::to_corner(CornerLabel::W, &bs, ParameterPoint::origin()).unwrap();
        let back = corners::from_w(image).unwrap();
        let scale = 1.0 + s.q.norm() + s.p.norm();
        prop_assert!((back.t - s.t).norm() < 1e-10 * scale);
        prop_assert!((back.q - s.q).norm() < 1e-10 * scale);
        prop_assert!((back.p - s.p).norm() < 1e-10 * scale);
    }

    #[test]
    fn q_only_matches_canonical_w(s in generic_state()) {
        // q' from the flow at (0,0); matched branches reproduce Q
        let v = ParameterPoint::origin();
        let bs = branch_init(s);
        let (qd, _) = eom_rhs(s, v).unwrap();
        let (t_cap, q_cap) = corners::q_only_w(s.t, s.q, qd, (bs.sqrt_p, bs.sqrt_pm1)).unwrap();
        let image = corners::to_corner(CornerLabel::W, &bs, v).unwrap();
        prop_assert_eq!(t_cap, image.t);
        let scale = 1.0 + image.q.norm();
        prop_assert!((q_cap - image.q).norm() < 1e-9 * scale);
    }

    #[test]
    fn hamiltonian_sum_structural(s in generic_state()) {
        let bs = branch_init(s);
        let h = hamiltonian(s, ParameterPoint::origin()).unwrap();
        let r = painleve3::identities::closed_form_sum_residual(&bs, h);
        let scale = 1.0 + (s.t * h).norm();
        prop_assert!(r.norm() < 1e-13 * scale);
    }

    #[test]
    fn classify_invariant_under_reflections(n1 in -6i32..6, d1 in 1i32..4, n2 in -6i32..6, d2 in 1i32..4) {
        let v1 = n1 as f64 / d1 as f64;
        let v2 = n2 as f64 / d2 as f64;
        let base = classify(ParameterPoint::real(v1, v2)).unwrap();
        let check = |v: ParameterPoint| -> Classification { classify(v).unwrap() };
        for g in [Generator::S0, Generator::S1, Generator::S2] {
            let image = generator_params(g, ParameterPoint::real(v1, v2));
            prop_assert_eq!(base, check(image));
        }
    }

    #[test]
    fn branch_flip_permutes_corners(s in generic_state()) {
        let bs = branch_init(s);
        let v = ParameterPoint::origin();
        let w = corners::to_corner(CornerLabel::W, &bs, v).unwrap();
        let e = corners::to_corner(CornerLabel::E, &bs, v).unwrap();
        let s_img = corners::to_corner(CornerLabel::S, &bs, v).unwrap();
        let n = corners::to_corner(CornerLabel::N, &bs, v).unwrap();
        let flipped = bs.flip();
        let wf = corners::to_corner(CornerLabel::W, &flipped, v).unwrap();
        let sf = corners::to_corner(CornerLabel::S, &flipped, v).unwrap();
        // momenta swap W↔E and S↔N under a double flip
        prop_assert!((wf.p - e.p).norm() < 1e-12 * (1.0 + e.p.norm()));
        prop_assert!((sf.p - n.p).norm() < 1e-12 * (1.0 + n.p.norm()));
        // and the W-image momentum set is preserved as a whole
        let orig_sum = w.p + s_img.p + e.p + n.p;
        let ef = corners::to_corner(CornerLabel::E, &flipped, v).unwrap();
        let nf = corners::to_corner(CornerLabel::N, &flipped, v).unwrap();
        let flip_sum = wf.p + sf.p + ef.p + nf.p;
        prop_assert!((orig_sum - flip_sum).norm() < 1e-11 * (1.0 + orig_sum.norm()));
    }
}
