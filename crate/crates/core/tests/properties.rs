use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use tlbm_core::catalog::CATALOG;
use tlbm_core::equilibrium::{evaluate_feq, expand, moment_accuracy, verify_moments, ExpansionSpec};
use tlbm_core::model::{
    build_polynomial, closed_form_q5, solve_model, tensor_product_model, Q5Branch, RatioTuple, VelocityModel,
};
use tlbm_core::moments::{discrete_moment, gaussian_moment, mb_moment};
use tlbm_core::riemann::{solve_riemann, GasState, Wave, GAMMA_1D};

fn catalog_models() -> Vec<VelocityModel> {
    CATALOG.iter().map(|e| e.derive().unwrap()).collect()
}

fn q5(speed: u64) -> Vec<VelocityModel> {
    solve_model(&RatioTuple::new(5, vec![1, speed]).unwrap()).unwrap()
}

/// Composite Simpson over ±14 standard deviations.
fn quadrature_moment(m: u32, rho: f64, u: f64, theta: f64) -> f64 {
    let half = 14.0 * theta.sqrt();
    let n = 6000;
    let h = 2.0 * half / n as f64;
    let f = |v: f64| v.powi(m as i32) * rho * (-(v - u).powi(2) / theta).exp() / (std::f64::consts::PI * theta).sqrt();
    let mut sum = f(u - half) + f(u + half);
    for i in 1..n {
        let v = u - half + i as f64 * h;
        sum += if i % 2 == 1 { 4.0 } else { 2.0 } * f(v);
    }
    sum * h / 3.0
}

#[test]
fn catalog_quadrature_is_exact() {
    for m in catalog_models() {
        let q = m.q() as u32;
        for n in 0..=q + 2 {
            let xi = discrete_moment(&m, n);
            if n % 2 == 1 {
                assert_eq!(xi, 0.0, "q={q} odd n={n}");
            } else if n <= q + 1 {
                let g = gaussian_moment(n).to_f64();
                assert!((xi - g).abs() <= 1e-9 * g, "q={q} n={n}: {xi} vs {g}");
            }
        }
    }
}

#[test]
fn ghost_branch_tends_to_three_velocities() {
    let r = BigRational::new(1.into(), 100.into());
    let [_, plus] = closed_form_q5(r.to_f64().unwrap()).unwrap();
    assert_eq!(plus.branch, Q5Branch::Plus);
    assert!((plus.v2 - 1.5f64.sqrt()).abs() < 1e-3);
    assert!(plus.weights[2].abs() < 1e-3);
    let solved = q5(100);
    let ghost = solved.iter().max_by(|a, b| a.v2().total_cmp(&b.v2())).unwrap();
    assert!((ghost.v2() - plus.v2).abs() < 1e-9);
    assert!(ghost.detect_ghosts(1e-3)[2]);
}

#[test]
fn no_five_velocity_model_at_half() {
    assert!(closed_form_q5(0.5).is_err());
    assert!(q5(2).is_empty());
}

#[test]
fn degree_bounds_hold() {
    for n in 1..=6 {
        assert!(expand(&ExpansionSpec::taylor(n)).unwrap().v_degree() <= 2 * n);
    }
    for n in 1..=10 {
        assert!(expand(&ExpansionSpec::hermite(n)).unwrap().v_degree() <= n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_matches_solver(speed in 3u64..40) {
        let solved = q5(speed);
        let closed = closed_form_q5(1.0 / speed as f64).unwrap();
        prop_assert_eq!(solved.len(), 2);
        for (s, c) in solved.iter().zip(&closed) {
            prop_assert!((s.v2() - c.v2).abs() < 1e-9, "{} vs {}", s.v2(), c.v2);
            for (a, b) in s.normalized_weights().iter().zip(&c.weights) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }
    }

    /// Every sign change of the model polynomial on a fine log grid brackets
    /// a returned base speed, and every returned speed is a root.
    #[test]
    fn grid_scan_finds_no_extra_roots(mut speeds in proptest::collection::btree_set(1u64..9, 1..4)) {
        speeds.insert(1);
        let speeds: Vec<u64> = speeds.into_iter().collect();
        let ratios = RatioTuple::new(2 * speeds.len() + 1, speeds).unwrap();
        let poly = build_polynomial(&ratios).unwrap();
        let found: Vec<f64> = solve_model(&ratios).unwrap().iter().map(|m| m.v2().powi(2)).collect();
        let p = |s: f64| poly.polynomial().eval_f64(s);
        let grid: Vec<f64> = (0..=4000).map(|i| 10f64.powf(-4.0 + 6.0 * i as f64 / 4000.0)).collect();
        for w in grid.windows(2) {
            if p(w[0]).signum() * p(w[1]).signum() < 0.0 {
                prop_assert!(found.iter().any(|&s| s >= w[0] * (1.0 - 1e-12) && s <= w[1] * (1.0 + 1e-12)),
                    "sign change in [{}, {}] not reported", w[0], w[1]);
            }
        }
        for &s in &found {
            prop_assert!(p(s * (1.0 - 1e-9)).signum() != p(s * (1.0 + 1e-9)).signum() || p(s).abs() < 1e-6);
        }
    }

    #[test]
    fn mb_moment_matches_quadrature(m in 0u32..9, rho in 0.1f64..5.0, u in -0.5f64..0.5, theta in 0.5f64..2.0) {
        let exact = mb_moment(m, rho, u, theta).unwrap();
        let numeric = quadrature_moment(m, rho, u, theta);
        prop_assert!((exact - numeric).abs() <= 1e-9 * numeric.abs().max(rho), "{exact} vs {numeric}");
    }

    #[test]
    fn tensor_moments_factorize(a in 0u32..7, b in 0u32..7) {
        let model = CATALOG[1].derive().unwrap();
        let plane = tensor_product_model(&model, 2).unwrap();
        prop_assert_eq!(plane.len(), 25);
        let want = discrete_moment(&model, a) * discrete_moment(&model, b);
        prop_assert!((plane.moment(&[a, b]) - want).abs() <= 1e-12 * want.abs().max(1.0));
    }

    #[test]
    fn equilibrium_moments_are_exact(
        idx in 0usize..5,
        u in -0.2f64..0.2,
        theta in 0.8f64..1.2,
        rho in 0.5f64..4.0,
    ) {
        let cases = [("q5", "HE3"), ("q5", "TE2"), ("q7", "TE3"), ("q11", "TE4"), ("q21", "TE5")];
        let (id, spec) = cases[idx];
        let model = tlbm_core::catalog::lookup(id).unwrap().derive().unwrap();
        let spec: ExpansionSpec = spec.parse().unwrap();
        let poly = expand(&spec).unwrap();
        prop_assert!(moment_accuracy(model.q(), &spec) >= 2);
        let report = verify_moments(&model, &poly, &[(rho, u, theta)], 1e-10).unwrap();
        prop_assert!(report.pass, "{} {}: {}", id, spec, report.max_error);
        let f = evaluate_feq(&model, &poly, rho, u, theta).unwrap();
        let mass: f64 = f.iter().sum();
        let momentum: f64 = f.iter().zip(model.velocities()).map(|(f, v)| f * v).sum();
        prop_assert!((mass - rho).abs() < 1e-12 * rho);
        prop_assert!((momentum - rho * u).abs() < 1e-12 * rho);
    }

    #[test]
    fn reversing_velocity_mirrors_populations(u in -0.3f64..0.3, theta in 0.7f64..1.3, n in 1u32..6) {
        let model = CATALOG[1].derive().unwrap();
        let poly = expand(&ExpansionSpec::hermite(n)).unwrap();
        let f = evaluate_feq(&model, &poly, 1.0, u, theta).unwrap();
        let g = evaluate_feq(&model, &poly, 1.0, -u, theta).unwrap();
        prop_assert_eq!(f[0], g[0]);
        for k in (1..f.len()).step_by(2) {
            prop_assert_eq!(f[k], g[k + 1]);
            prop_assert_eq!(f[k + 1], g[k]);
        }
    }

    #[test]
    fn riemann_mirror_symmetry(rl in 0.2f64..12.0, rr in 0.2f64..12.0, ul in -0.5f64..0.5, ur in -0.5f64..0.5,
                               tl in 0.3f64..2.0, tr in 0.3f64..2.0) {
        let left = GasState::new(rl, ul, tl);
        let right = GasState::new(rr, ur, tr);
        let Ok(a) = solve_riemann(left, right, GAMMA_1D) else { return Ok(()) };
        let b = solve_riemann(GasState::new(rr, -ur, tr), GasState::new(rl, -ul, tl), GAMMA_1D).unwrap();
        prop_assert!((a.p_star - b.p_star).abs() < 1e-10 * a.p_star);
        prop_assert!((a.u_star + b.u_star).abs() < 1e-10);
        prop_assert!((a.rho_star_left - b.rho_star_right).abs() < 1e-9 * a.rho_star_left);
        for xi in [-2.0, -0.7, -0.1, 0.0, 0.3, 1.1, 2.5] {
            let s = a.sample(xi);
            let m = b.sample(-xi);
            if xi != a.u_star {
                prop_assert!((s.rho - m.rho).abs() < 1e-8 * s.rho, "xi {xi}: {} vs {}", s.rho, m.rho);
                prop_assert!((s.u + m.u).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn riemann_scales_with_density_and_temperature(rl in 0.5f64..12.0, rr in 0.5f64..12.0, k in 0.2f64..5.0, t in 0.3f64..3.0) {
        let base = solve_riemann(GasState::new(rl, 0.0, 1.0), GasState::new(rr, 0.0, 1.0), GAMMA_1D).unwrap();
        let dense = solve_riemann(GasState::new(k * rl, 0.0, 1.0), GasState::new(k * rr, 0.0, 1.0), GAMMA_1D).unwrap();
        prop_assert!((dense.p_star - k * base.p_star).abs() < 1e-9 * dense.p_star);
        prop_assert!((dense.u_star - base.u_star).abs() < 1e-9);
        let hot = solve_riemann(GasState::new(rl, 0.0, t), GasState::new(rr, 0.0, t), GAMMA_1D).unwrap();
        prop_assert!((hot.u_star - t.sqrt() * base.u_star).abs() < 1e-9);
        prop_assert!((hot.p_star - t * base.p_star).abs() < 1e-9 * hot.p_star);
    }

    #[test]
    fn riemann_waves_satisfy_jump_and_invariant_relations(rl in 1.05f64..15.0) {
        let sol = solve_riemann(GasState::new(rl, 0.0, 1.0), GasState::new(1.0, 0.0, 1.0), GAMMA_1D).unwrap();
        let res = sol.shock_residuals(false).expect("right-moving shock");
        for r in res {
            prop_assert!(r.abs() < 1e-10, "{res:?}");
        }
        let Wave::Rarefaction { head, tail } = sol.left_wave else { panic!("expected a left fan") };
        let invariant = |s: GasState| s.u + 2.0 * s.sound_speed(GAMMA_1D) / (GAMMA_1D - 1.0);
        let entropy = |s: GasState| s.pressure() / s.rho.powf(GAMMA_1D);
        let reference = (invariant(sol.left), entropy(sol.left));
        for i in 0..=20 {
            let s = sol.sample(head + (tail - head) * i as f64 / 20.0);
            prop_assert!((invariant(s) - reference.0).abs() < 1e-10);
            prop_assert!((entropy(s) - reference.1).abs() < 1e-10 * reference.1);
        }
        for (edge, outside) in [(head, sol.left), (tail, sol.left_star())] {
            let inside = sol.sample(edge);
            prop_assert!((inside.rho - outside.rho).abs() < 1e-10 * outside.rho);
            prop_assert!((inside.u - outside.u).abs() < 1e-10);
        }
    }
}
