use optlab_core::optim::{run, OptimizerState, RecordMode, Runner, StepSchedule};
use optlab_core::oracles::lasso_limit_cycle;
use optlab_core::problems::L1Toy;
use optlab_core::{DenseVector, NormKind, SeededRng};
use proptest::prelude::*;

fn random_instance(rng: &mut SeededRng) -> (DenseVector, f64, f64) {
    let p = 1 + (rng.next_u64() % 50) as usize;
    let beta0 = rng.uniform_vector(p, -1.0, 1.0).unwrap();
    // αλ₁ log-uniform on [1e-4, 1]
    let product = 10f64.powf(rng.uniform(-4.0, 0.0).unwrap());
    let lambda1 = 10f64.powf(rng.uniform(-2.0, 2.0).unwrap());
    (beta0, product / lambda1, lambda1)
}

#[test]
fn oracle_matches_simulated_tail() {
    let mut rng = SeededRng::new(2024);
    for case in 0..120 {
        let (beta0, alpha, lambda1) = random_instance(&mut rng);
        let cycle = lasso_limit_cycle(&beta0, alpha, lambda1).unwrap();
        let iters = cycle.settle_iter + 201;
        let traj = run(
            &L1Toy::new(lambda1, beta0.dim()).unwrap(),
            OptimizerState::Vanilla,
            StepSchedule::constant(alpha).unwrap(),
            &beta0,
            iters,
            RecordMode::Full,
        )
        .unwrap();
        for r in traj.tail(2) {
            let predicted = cycle.predict(r.iter).unwrap();
            let got = r.iterate.as_ref().unwrap();
            let err = got.sub(&predicted).unwrap().norm(NormKind::Linf);
            assert!(err <= 1e-12, "case {case} iter {}: {err}", r.iter);
        }
        let c = alpha * lambda1;
        for k in 0..beta0.dim() {
            assert!(cycle.high[k].abs() > 0.0 && cycle.high[k].abs() < c);
            assert!(((cycle.high[k] - cycle.low[k]).abs() - c).abs() <= 1e-12 * c.max(1.0));
        }
    }
}

#[test]
fn cycle_point_is_the_remainder_of_the_start() {
    // γ = |β₀| − n·αλ₁ with n the number of whole steps that fit
    let mut rng = SeededRng::new(77);
    for _ in 0..200 {
        let x = rng.uniform(-1.0, 1.0).unwrap();
        let c = 10f64.powf(rng.uniform(-3.0, -0.5).unwrap());
        let cycle = lasso_limit_cycle(&DenseVector::new(vec![x]), c, 1.0).unwrap();
        let n = (x.abs() / c).floor();
        let gamma = x.abs() - n * c;
        assert!((cycle.high[0].abs() - gamma).abs() < 1e-9, "{x} {c}");
        assert_eq!(cycle.coord_settle[0] as f64, n);
    }
}

fn persistence_instance(seed: u64) -> (DenseVector, f64) {
    let mut rng = SeededRng::new(seed);
    let beta0 = rng.uniform_vector(4, -1.0, 1.0).unwrap();
    (beta0, 10f64.powf(rng.uniform(-3.0, -1.0).unwrap()))
}

/// Starting points drawn from a continuous law never land exactly on 0.
#[test]
fn vanilla_never_hits_zero() {
    let problem = L1Toy::new(1.0, 4).unwrap();
    for seed in 0..1000u64 {
        let (beta0, alpha) = persistence_instance(seed);
        let mut zero_at = None;
        Runner::new(OptimizerState::Vanilla, StepSchedule::constant(alpha).unwrap(), 10_000)
            .record(RecordMode::NormsOnly)
            .run_observed(&problem, &beta0, |t, b| {
                if zero_at.is_none() && b.iter().any(|&x| x == 0.0) {
                    zero_at = Some(t);
                }
            })
            .unwrap();
        assert_eq!(zero_at, None, "seed {seed}");
    }
}

// RMSProp's step shrinks towards α, which squeezes the near-zero phase of
// each oscillating coordinate towards 0 until it falls below the spacing of
// doubles around α. Exact zeros then do occur, but only from that phase,
// and the coordinate stays there.
#[test]
fn rmsprop_zeros_come_only_from_the_collapsed_phase() {
    let problem = L1Toy::new(1.0, 4).unwrap();
    let mut hits = 0;
    for seed in 0..1000u64 {
        let (beta0, alpha) = persistence_instance(seed);
        let mut hist: Vec<DenseVector> = Vec::new();
        Runner::new(OptimizerState::rmsprop(0.99, 1e-8).unwrap(), StepSchedule::constant(alpha).unwrap(), 10_000)
            .record(RecordMode::NormsOnly)
            .run_observed(&problem, &beta0, |t, b| {
                for k in 0..4 {
                    if t >= 1 && hist[t - 1][k] == 0.0 {
                        assert_eq!(b[k], 0.0, "seed {seed}: left zero at {t}");
                    } else if b[k] == 0.0 {
                        hits += 1;
                        assert!(t >= 1000, "seed {seed}: early zero at {t}");
                        assert!(hist[t - 2][k].abs() <= 1e-6 * alpha, "seed {seed} t {t}");
                    }
                }
                hist.push(b.clone());
            })
            .unwrap();
    }
    assert!(hits > 0);
}

#[test]
fn tail_l1_norm_below_band() {
    let mut rng = SeededRng::new(5150);
    for case in 0..100 {
        let (beta0, alpha, lambda1) = random_instance(&mut rng);
        let p = beta0.dim() as f64;
        let iters = (beta0.norm(NormKind::Linf) / (alpha * lambda1)).ceil() as usize + 200;
        let traj = run(
            &L1Toy::new(lambda1, beta0.dim()).unwrap(),
            OptimizerState::Vanilla,
            StepSchedule::constant(alpha).unwrap(),
            &beta0,
            iters,
            RecordMode::NormsOnly,
        )
        .unwrap();
        for r in traj.tail(100) {
            assert!(r.norms.l1 > 0.0 && r.norms.l1 < p * alpha * lambda1, "case {case}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cycle_invariants(xs in prop::collection::vec(-5.0f64..5.0, 1..12), log_c in -4.0f64..0.0) {
        let c = 10f64.powf(log_c);
        let beta0 = DenseVector::new(xs.clone());
        match lasso_limit_cycle(&beta0, c, 1.0) {
            Ok(cycle) => {
                for k in 0..xs.len() {
                    prop_assert!(cycle.high[k].abs() > 0.0 && cycle.high[k].abs() < c);
                    prop_assert!(cycle.high[k].signum() == xs[k].signum());
                    prop_assert!(cycle.low[k].signum() == -xs[k].signum());
                    prop_assert!(((cycle.high[k] - cycle.low[k]).abs() - c).abs() <= 1e-12);
                }
            }
            Err(e) => {
                let degenerate = matches!(e, optlab_core::Error::DegenerateInitialization { .. });
                prop_assert!(degenerate);
            }
        }
    }

    #[test]
    fn reducing_the_step_keeps_the_cycle_inside_the_new_band(
        xs in prop::collection::vec(-1.0f64..1.0, 1..6),
    ) {
        let beta0 = DenseVector::new(xs);
        let first = lasso_limit_cycle(&beta0, 0.01, 1.0);
        prop_assume!(first.is_ok());
        let second = lasso_limit_cycle(&first.unwrap().high, 0.001, 1.0);
        prop_assume!(second.is_ok());
        let second = second.unwrap();
        prop_assert!(second.band_width() <= 0.001 + 1e-15);
    }
}
