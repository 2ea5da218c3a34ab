use proptest::prelude::*;

use oscishell::entropy::radial_second_moment;
use oscishell::hermite1d::phi_eval;
use oscishell::oracle::mc_entropy;
use oscishell::paths::{make_path, PathKind};
use oscishell::polyalgebra::gaussian_norm;
use oscishell::quad::integrate_adaptive;
use oscishell::shell::{build_affine_poly, ShellState};

fn state_strategy() -> impl Strategy<Value = ShellState> {
    (0usize..=6, 0.3f64..3.0)
        .prop_flat_map(|(n, alpha)| (Just(n), Just(alpha), prop::collection::vec(-1.0f64..1.0, n + 1)))
        .prop_filter_map("zero vector", |(n, alpha, c)| {
            ShellState::normalized(n, c, alpha).ok().map(|(s, _)| s)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn affine_poly_is_normalized(state in state_strategy()) {
        let norm = gaussian_norm(&build_affine_poly(&state), state.alpha()).unwrap();
        prop_assert!((norm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn virial(state in state_strategy()) {
        let m = radial_second_moment(&state).unwrap();
        prop_assert!((m - (state.shell() + 1) as f64).abs() < 1e-9);
    }

    #[test]
    fn parity_of_shell(state in state_strategy(), x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let p = build_affine_poly(&state);
        let sign = if state.shell() % 2 == 0 { 1.0 } else { -1.0 };
        let (a, b) = (p.eval(x, y), p.eval(-x, -y));
        prop_assert!((a - sign * b).abs() <= 1e-10 * (1.0 + a.abs()));
    }

    #[test]
    fn path_states_are_normalized(t in 0.0f64..=1.0, n in 1usize..=6) {
        for kind in PathKind::ALL {
            let c = make_path(kind, n).unwrap().coeffs(t).unwrap();
            let s: f64 = c.iter().map(|v| v * v).sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn hermite_functions_are_orthonormal() {
    for alpha in [0.5, 1.0, 2.5] {
        for m in 0..=6 {
            for n in 0..=6 {
                let v = integrate_adaptive(
                    &|x| phi_eval(m, x, alpha).unwrap() * phi_eval(n, x, alpha).unwrap(),
                    -15.0,
                    15.0,
                    1e-13,
                );
                let want = if m == n { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-10, "m={m} n={n} alpha={alpha}: {v}");
            }
        }
    }
}

#[test]
fn monte_carlo_ignores_thread_count() {
    let (state, _) = ShellState::normalized(3, vec![0.3, -0.2, 0.8, 0.4], 1.2).unwrap();
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let wide = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = serial.install(|| mc_entropy(&state, 300_000, 7).unwrap());
    let b = wide.install(|| mc_entropy(&state, 300_000, 7).unwrap());
    assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    assert_eq!(a.standard_error.to_bits(), b.standard_error.to_bits());
}
