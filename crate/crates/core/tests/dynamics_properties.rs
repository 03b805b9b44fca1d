mod common;

use common::*;
use crnkit_core::dynamics::{image_residual, EquilibriumOptions, IntegratorOptions, MassAction};
use crnkit_core::feasibility::{detailed_balance_rates, ThermoParams};
use crnkit_core::network::parse_network;
use proptest::prelude::*;

fn positive(len: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.2f64..3.0, len)
}

fn system_with_state(max_n: usize, max_r: usize) -> impl Strategy<Value = (NetSpec, Vec<f64>, Vec<f64>)> {
    network(max_n, max_r).prop_flat_map(|spec| {
        let n = spec.n;
        let r = spec.matrices().internal_reactions();
        (Just(spec), positive(n), positive(r))
    })
}

fn central_difference(sys: &MassAction, x: &[f64], kappa: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut j = vec![0.0; n * n];
    for c in 0..n {
        let h = 1e-6 * x[c];
        let mut up = x.to_vec();
        let mut down = x.to_vec();
        up[c] += h;
        down[c] -= h;
        let fu = sys.f_kappa(&up, kappa).unwrap();
        let fd = sys.f_kappa(&down, kappa).unwrap();
        for s in 0..n {
            j[s * n + c] = (fu[s] - fd[s]) / (2.0 * h);
        }
    }
    j
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn jacobian_matches_central_differences((spec, x, kappa) in system_with_state(4, 4)) {
        let sys = MassAction::new(&spec.matrices());
        let j = sys.jacobian(&x, &kappa).unwrap();
        let fd = central_difference(&sys, &x, &kappa);
        let diff: Vec<f64> = j.iter().zip(&fd).map(|(a, b)| a - b).collect();
        prop_assert!(max_abs(&diff) <= 1e-5 * max_abs(&j).max(1.0), "{j:?} vs {fd:?}");
    }

    #[test]
    fn vector_field_lies_in_stoichiometric_subspace((spec, x, kappa) in system_with_state(5, 5)) {
        let sys = MassAction::new(&spec.matrices());
        let f = sys.f_kappa(&x, &kappa).unwrap();
        prop_assert!(image_residual(sys.image_basis(), &f) <= 1e-12);
    }

    #[test]
    fn scaled_kernel_sides_are_reported((spec, x, kappa) in system_with_state(4, 4)) {
        let sys = MassAction::new(&spec.matrices());
        let rep = sys.orthogonality_check(&x, &kappa, 1e-9).unwrap();
        prop_assert!(rep.flux_violation >= 0.0 && rep.flux_violation <= 1.0 + 1e-12);
        prop_assert!(rep.monomial_violation >= 0.0 && rep.monomial_violation <= 1.0 + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn conservation_laws_hold_along_trajectories((spec, x, kappa) in system_with_state(4, 3)) {
        let sys = MassAction::new(&spec.matrices());
        let opts = IntegratorOptions { max_steps: 200_000, ..IntegratorOptions::default() };
        // Irreversible drains may hit the boundary in finite time; that is
        // reported as an error and the invariant is checked up to there.
        let Ok(traj) = sys.integrate(&x, &kappa, 10.0, &opts) else { return Ok(()); };
        for w in sys.conservation_laws() {
            let dot = |v: &[f64]| w.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
            // Roundoff grows with the state, so drift is measured against
            // the largest magnitude of the invariant's terms seen so far.
            let terms = |v: &[f64]| w.iter().zip(v).map(|(a, b)| (a * b).abs()).sum::<f64>();
            let c0 = dot(&x);
            let mut scale = terms(&x);
            for s in &traj.states {
                scale = scale.max(terms(s));
                prop_assert!((dot(s) - c0).abs() <= 1e-7 * scale);
            }
        }
    }

    #[test]
    fn detailed_balance_gives_one_zero_affinity_equilibrium(
        spec in reversible_network(3, 3),
        g0 in proptest::collection::vec(-2000.0f64..2000.0, 3),
        x0 in positive(3),
    ) {
        let net = spec.build();
        let mats = net.expand_directed().build_matrices();
        let sys = MassAction::new(&mats);
        let params = ThermoParams::new(298.15, g0[..spec.n].to_vec()).unwrap();
        let kf = vec![1.0; net.reactions().len()];
        let rates = detailed_balance_rates(&params, &net, &kf).unwrap();
        let kappa = rates.directed();
        let x0 = &x0[..spec.n];
        let opts = EquilibriumOptions { relax_time: 50.0, ..EquilibriumOptions::default() };
        let set = sys.multistart_uniqueness(x0, &kappa, 8, 11, &opts).unwrap();
        prop_assert_eq!(set.clusters.len(), 1, "{:?}", set);
        let dg = sys.state_gibbs(&set.clusters[0].state, &params).unwrap();
        prop_assert!(max_abs(&dg) <= 1e-8, "{dg:?}");
    }
}

#[test]
fn reversible_pair_conserves_pairs_of_species() {
    let net = parse_network("R1: A + B <-> C + D ; kf=1 kb=0.5").unwrap();
    let sys = MassAction::new(&net.expand_directed().build_matrices());
    let x0 = [1.0, 2.0, 0.5, 0.25];
    let traj = sys.integrate(&x0, &[1.0, 0.5], 100.0, &IntegratorOptions::default()).unwrap();
    for s in &traj.states {
        assert!(((s[0] - s[1]) - (x0[0] - x0[1])).abs() <= 1e-7);
        assert!(((s[0] + s[2]) - (x0[0] + x0[2])).abs() <= 1e-7);
    }
    let (_, last) = traj.last();
    assert!(max_abs(&sys.f_kappa(last, &[1.0, 0.5]).unwrap()) < 1e-8);
}

#[test]
fn equilibrium_start_gives_stationary_trajectory() {
    let net = parse_network("R1: A <-> B ; kf=2 kb=1").unwrap();
    let sys = MassAction::new(&net.expand_directed().build_matrices());
    let traj = sys.integrate(&[1.0, 2.0], &[2.0, 1.0], 10.0, &IntegratorOptions::default()).unwrap();
    for s in &traj.states {
        assert_eq!(s, &vec![1.0, 2.0]);
    }
}
