//! Independent checks of the builder, the solver and the metrics. The
//! oracles below are written out by hand and never go through the
//! forward-matrix construction or the linear solve.

use mapsim_core::dynamics::{equilibrium, simulate, step};
use mapsim_core::metrics::{self, total_work};
use mapsim_core::topology::{build_architecture, ArchKind, ArchitectureSpec, FlowParams, FlowSystem};

const CONFIGS: [(f64, f64); 2] = [(0.8, 0.1), (0.1, 0.8)];

fn system(kind: ArchKind, n: usize, s: f64, f: f64) -> FlowSystem {
    build_architecture(ArchitectureSpec::new(kind, n).unwrap(), FlowParams::new(s, f)).unwrap()
}

/// SDO master equation for five agents, term by term.
fn sdo_by_hand(s: f64, f: f64, b: f64, x: &[f64; 5]) -> [f64; 5] {
    [
        s * x[0] + b,
        s * x[1] + f * x[0],
        s * x[2] + f * x[1],
        s * x[3] + f * x[2],
        s * x[4] + f * x[3],
    ]
}

/// PNC master equation for five agents with every right-hand term taken
/// at the previous step.
fn pnc_by_hand(s: f64, f: f64, b: f64, x: &[f64; 5]) -> [f64; 5] {
    [
        s * x[0] + 0.5 * f * x[1] + 0.5 * f * x[4] + 0.2 * b,
        s * x[1] + 0.5 * f * x[0] + 0.5 * f * x[2] + 0.2 * b,
        s * x[2] + 0.5 * f * x[1] + 0.5 * f * x[3] + 0.2 * b,
        s * x[3] + 0.5 * f * x[2] + 0.5 * f * x[4] + 0.2 * b,
        s * x[4] + 0.5 * f * x[0] + 0.5 * f * x[3] + 0.2 * b,
    ]
}

#[test]
fn step_matches_written_out_master_equations() {
    let probes = [
        [0.0; 5],
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [0.3, 1.7, 2.2, 0.05, 4.0],
    ];
    for (s, f) in CONFIGS {
        let sdo = system(ArchKind::Sdo, 5, s, f);
        let pnc = system(ArchKind::Pnc, 5, s, f);
        for x in &probes {
            let got = step(&sdo, x).unwrap();
            let want = sdo_by_hand(s, f, 1.0, x);
            for i in 0..5 {
                assert!((got[i] - want[i]).abs() < 1e-15, "SDO {s},{f} {x:?}");
            }
            let got = step(&pnc, x).unwrap();
            let want = pnc_by_hand(s, f, 1.0, x);
            for i in 0..5 {
                assert!((got[i] - want[i]).abs() < 1e-15, "PNC {s},{f} {x:?}");
            }
        }
    }
}

#[test]
fn sdo_equilibrium_closed_form() {
    // x_1 = b / (f + e); x_{k+1} = f / (f + e) * x_k.
    let (s, f) = (0.1, 0.8);
    let e = 1.0 - s - f;
    let eq = equilibrium(&system(ArchKind::Sdo, 5, s, f)).unwrap();
    let mut x = 1.0 / (f + e);
    for got in &eq.x_eq {
        assert!((got - x).abs() < 1e-12, "{got} vs {x}");
        x *= f / (f + e);
    }
    let frozen = [1.1111, 0.9877, 0.8779, 0.7804, 0.6937];
    for (got, want) in eq.x_eq.iter().zip(frozen) {
        assert!((got - want).abs() < 1e-4);
    }
}

#[test]
fn equilibrium_agrees_with_long_run_simulation() {
    for (s, f) in CONFIGS {
        for kind in ArchKind::ALL {
            let sys = system(kind, 5, s, f);
            let eq = equilibrium(&sys).unwrap();
            assert!(eq.residual <= 1e-9 * eq.max_state(), "{kind}");
            let long = simulate(&sys, 10_000);
            for (a, b) in long.last().unwrap().iter().zip(&eq.x_eq) {
                assert!((a - b).abs() <= 1e-8 * b.abs(), "{kind} ({s},{f}): {a} vs {b}");
            }
            // Uniform designs close the gap exactly as (s + f)^(T + 1).
            for (horizon, tol) in [(200, 1e-9), (250, 1e-10)] {
                let short = simulate(&sys, horizon);
                for (a, b) in short.last().unwrap().iter().zip(&eq.x_eq) {
                    assert!((a - b).abs() < tol * eq.max_state(), "{kind} T={horizon}");
                }
            }
        }
    }
}

#[test]
fn sdo_work_closed_form_across_agent_counts() {
    for n in 2..=8 {
        for (s, f) in CONFIGS {
            let e = 1.0 - s - f;
            let rho: f64 = f / (f + e);
            let closed = 1.0 - rho.powi(n as i32);
            let sys = system(ArchKind::Sdo, n, s, f);
            // Brute force: long simulation, then e * sum(x) / b.
            let last = simulate(&sys, 10_000);
            let brute = e * last.last().unwrap().iter().sum::<f64>();
            assert!((brute - closed).abs() < 1e-9, "N={n}: {brute} vs {closed}");
            let solved = total_work(&equilibrium(&sys).unwrap().x_eq, &sys);
            assert!((solved - closed).abs() < 1e-12);
        }
    }
}

#[test]
fn parallel_scalar_fixed_point() {
    // Each P agent obeys x = s x + b / N independently.
    for (s, f) in CONFIGS {
        let eq = equilibrium(&system(ArchKind::P, 5, s, f)).unwrap();
        for x in eq.x_eq {
            assert!((x - 0.2 / (1.0 - s)).abs() < 1e-14);
        }
    }
}

#[test]
fn parallel_transition_time_from_geometric_closed_form() {
    // x(t) / x_eq = 1 - s^(t+1) for every P agent.
    for (s, f) in CONFIGS {
        let oracle = (0..).find(|&t| 1.0 - s.powi(t + 1) >= 0.8).unwrap() as usize;
        let sys = system(ArchKind::P, 5, s, f);
        let eq = equilibrium(&sys).unwrap();
        let tau = metrics::transition_time(&simulate(&sys, 200), &eq.x_eq, 0.8).unwrap();
        assert_eq!(tau, oracle, "s={s}");
    }
}
