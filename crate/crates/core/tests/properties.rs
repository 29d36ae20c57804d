mod common;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dclink::analysis::{equivalence_residual, ripple_amplitude, steady_state};
use dclink::converter::{duty_from_control, control_from_duty, ConverterParams};
use dclink::design::{canonical_outer, design_inner, inductor_plant, shaped_plant, InnerDesign};
use dclink::lti::{discretize_tustin, eig, FrequencyGrid, StateSpace, TransferFunction, RIPPLE_OMEGA};
use dclink::network::{transfer_functions_of_network, ConverterSpec, Mode, NetworkConfig, SimResult};
use dclink::scenario::ScenarioFile;

fn tone(n: usize, ts: f64, amp: f64, f: f64, dc: f64, phase: f64) -> Vec<f64> {
    (0..n).map(|i| dc + amp * (2.0 * PI * f * ts * i as f64 + phase).sin()).collect()
}

fn coeffs(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0f64, len)
}

/// Stable monic denominator built from real poles in the left half-plane.
fn stable_den(order: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1..50.0f64, order).prop_map(|poles| {
        let mut d = vec![1.0];
        for p in poles {
            let mut next = vec![0.0; d.len() + 1];
            for (i, c) in d.iter().enumerate() {
                next[i] += c;
                next[i + 1] += c * p;
            }
            d = next;
        }
        d
    })
}

fn network(ls: &[f64], kv_scale: Option<(usize, f64)>) -> NetworkConfig {
    NetworkConfig {
        converters: ls
            .iter()
            .enumerate()
            .map(|(k, &l)| {
                let mut s = ConverterSpec::nominal(ConverterParams::buck(l, 480.0).unwrap(), InnerDesign::case_study());
                if let Some((j, f)) = kv_scale {
                    if j == k {
                        s.kv_scale = f;
                    }
                }
                s
            })
            .collect(),
        bus_c: 500e-6,
        outer: canonical_outer(),
        mode: Mode::Centralized,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ripple_amplitude_is_linear_and_ignores_dc(
        amp in 0.01..10.0f64,
        scale in 0.1..10.0f64,
        dc in -100.0..100.0f64,
        phase in 0.0..(2.0 * PI),
    ) {
        let ts = 2e-5;
        let n = 30000;
        let base = ripple_amplitude(&tone(n, ts, amp, 120.0, 0.0, phase), ts, 120.0).unwrap();
        let scaled = ripple_amplitude(&tone(n, ts, amp * scale, 120.0, 0.0, phase), ts, 120.0).unwrap();
        let shifted = ripple_amplitude(&tone(n, ts, amp, 120.0, dc, phase), ts, 120.0).unwrap();
        prop_assert!((base - amp).abs() < 1e-9 * amp.max(1.0));
        prop_assert!((scaled - scale * base).abs() < 1e-9 * scaled.max(1.0));
        prop_assert!((shifted - base).abs() < 1e-9 * (1.0 + dc.abs()));
    }

    #[test]
    fn steady_state_ratios_are_normalized(means in prop::collection::vec(0.1..50.0f64, 1..6)) {
        let n = 200;
        let m = means.len();
        let sim = SimResult {
            ts: 1e-3,
            t: (0..n).map(|i| i as f64 * 1e-3).collect(),
            vdc: vec![240.0; n],
            iload: vec![means.iter().sum(); n],
            il: means.iter().map(|&x| vec![x; n]).collect(),
            duty: vec![vec![0.5; n]; m],
            u_tilde: vec![vec![0.0; n]; m],
            e1: vec![0.0; n],
            e2: vec![vec![0.0; n]; m],
            saturation: vec![],
        };
        let rep = steady_state(&sim, (0.05, 0.2)).unwrap();
        let sum: f64 = rep.ratios.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 4.0 * f64::EPSILON * m as f64);
        prop_assert_eq!(rep.get("Vdc").unwrap().peak_to_peak, 0.0);
    }

    #[test]
    fn tf_algebra_matches_pointwise_arithmetic(
        n1 in coeffs(1..=3), d1 in stable_den(2..=3),
        n2 in coeffs(1..=3), d2 in stable_den(1..=3),
        w in 0.01..1e3f64,
    ) {
        let g = TransferFunction::from_coeffs(&n1, &d1).unwrap();
        let h = TransferFunction::from_coeffs(&n2, &d2).unwrap();
        let s = Complex64::new(0.0, w);
        let poly = |c: &[f64]| c.iter().fold(Complex64::new(0.0, 0.0), |acc, &x| acc * s + x);
        let (gv, hv) = (poly(&n1) / poly(&d1), poly(&n2) / poly(&d2));
        let close = |a: Complex64, b: Complex64| (a - b).norm() <= 1e-9 * (1.0 + b.norm());
        prop_assert!(close(g.eval(s), gv));
        prop_assert!(close(g.series(&h).eval(s), gv * hv));
        prop_assert!(close(g.parallel(&h).eval(s), gv + hv));
        let fb = g.feedback().unwrap().eval(s);
        if (1.0 + gv).norm() > 1e-6 {
            prop_assert!(close(fb, gv / (1.0 + gv)));
        }
    }

    #[test]
    fn state_space_realization_preserves_response(num in coeffs(1..=4), den in stable_den(3..=4), w in 0.01..1e3f64) {
        let g = TransferFunction::from_coeffs(&num, &den).unwrap();
        let ss = StateSpace::from_tf(&g).unwrap();
        let a = g.freq_response(w).unwrap();
        let b = ss.freq_response(w).unwrap()[(0, 0)];
        prop_assert!((a - b).norm() <= 1e-8 * (1.0 + a.norm()));
        let back = ss.to_tf().unwrap();
        prop_assert!((back.freq_response(w).unwrap() - a).norm() <= 1e-8 * (1.0 + a.norm()));
    }

    #[test]
    fn tustin_keeps_dc_gain(num in coeffs(1..=3), den in stable_den(2..=3), ts in 1e-5..1e-2f64) {
        let g = TransferFunction::from_coeffs(&num, &den).unwrap();
        let d = discretize_tustin(&StateSpace::from_tf(&g).unwrap(), ts).unwrap();
        let k0 = g.dc_gain().unwrap();
        prop_assert!((d.dc_gain().unwrap()[(0, 0)] - k0).abs() <= 1e-8 * (1.0 + k0.abs()));
    }

    #[test]
    fn inner_design_identity(
        l in 1e-4..1e-2f64,
        zeta2 in 0.1..6.0f64,
        ratio in 0.01..0.99f64,
        speed in 1.01..50.0f64,
    ) {
        let d = InnerDesign::new(zeta2 * ratio, zeta2, RIPPLE_OMEGA * speed).unwrap();
        let kc = design_inner(l, &d).unwrap();
        let closed = kc.series(&inductor_plant(l).unwrap()).feedback().unwrap();
        prop_assert!(closed.coeff_distance(&shaped_plant(&d).unwrap()) <= 1e-9);
        let notch = shaped_plant(&d).unwrap().freq_response(RIPPLE_OMEGA).unwrap().norm();
        let expected = ratio * d.omega_tilde / (RIPPLE_OMEGA.powi(2) + d.omega_tilde.powi(2)).sqrt();
        prop_assert!((notch - expected).abs() < 1e-9);
    }

    #[test]
    fn symmetric_networks_are_equivalent(ls in prop::collection::vec(0.3e-3..5e-3f64, 2..=5)) {
        let grid = FrequencyGrid::logspace(1e-1, 1e5, 120).unwrap();
        let single = transfer_functions_of_network(&network(&ls[..1], None)).unwrap();
        let multi = transfer_functions_of_network(&network(&ls, None)).unwrap();
        prop_assert!(equivalence_residual(&single, &multi, &grid).unwrap() < 1e-8);
    }

    #[test]
    fn perturbed_kv_breaks_equivalence(
        ls in prop::collection::vec(0.3e-3..5e-3f64, 2..=5),
        pick in 0usize..5,
        delta in prop_oneof![0.01..0.2f64, -0.2..-0.01f64],
    ) {
        let grid = FrequencyGrid::logspace(1e-1, 1e5, 120).unwrap();
        let k = pick % ls.len();
        let single = transfer_functions_of_network(&network(&ls[..1], None)).unwrap();
        let multi = transfer_functions_of_network(&network(&ls, Some((k, 1.0 + delta)))).unwrap();
        prop_assert!(equivalence_residual(&single, &multi, &grid).unwrap() > 0.0);
    }

    #[test]
    fn duty_round_trip(vg in 50.0..600.0f64, frac in 0.05..0.95f64, v in 10.0..400.0f64) {
        let p = ConverterParams::buck(1e-3, vg).unwrap();
        let u = control_from_duty(&p, frac, v);
        let d = duty_from_control(&p, u, v).unwrap();
        prop_assert!(!d.saturated);
        prop_assert!((d.d - frac).abs() < 1e-12);
        let over = duty_from_control(&p, u + 2.0 * vg, v).unwrap();
        prop_assert!(over.saturated && over.d == 1.0);
    }
}

#[test]
fn eigenvalues_of_random_hamiltonians_converge() {
    // Trace and sum of eigenvalues must agree for a few hundred dense
    // matrices of the kind the norm bisection produces.
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..300 {
        let n = 1 + i % 8;
        let sys = common::random_stable(&mut rng, n, 1 + i % 3, 1 + (i / 3) % 3);
        let g = 0.5 + (i % 7) as f64;
        let bb = &sys.b * sys.b.transpose() / (g * g);
        let cc = sys.c.transpose() * &sys.c;
        let mut h = DMatrix::zeros(2 * n, 2 * n);
        h.view_mut((0, 0), (n, n)).copy_from(&sys.a);
        h.view_mut((0, n), (n, n)).copy_from(&bb);
        h.view_mut((n, 0), (n, n)).copy_from(&(-cc));
        h.view_mut((n, n), (n, n)).copy_from(&(-sys.a.transpose()));
        let ev = eig::eigenvalues(&h).unwrap();
        let sum: Complex64 = ev.iter().sum();
        assert!((sum.re - h.trace()).abs() < 1e-9 * (1.0 + h.norm()), "case {i}");
        assert!(sum.im.abs() < 1e-9 * (1.0 + h.norm()));
    }
}

#[test]
fn scenario_files_round_trip_and_reject_unknown_keys() {
    for name in common::SHIPPED {
        let text = std::fs::read_to_string(common::scenario(name)).unwrap();
        let file = ScenarioFile::parse(&text).unwrap();
        assert_eq!(ScenarioFile::parse(&file.to_toml()).unwrap(), file);
        let bad = text.replacen("[network]", "[network]\nbus_cap = 1.0", 1);
        match ScenarioFile::parse(&bad) {
            Err(dclink::Error::Config { path, msg }) => {
                assert!(path.starts_with("line "), "{path}");
                assert!(msg.contains("bus_cap"), "{msg}");
            }
            other => panic!("unknown key accepted: {other:?}"),
        }
    }
}
