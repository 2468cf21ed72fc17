use naimark_core::bounds::{
    strengthened_pair_bound, strengthened_single_bound, uncorrected_single_bound, BoundMethod,
};
use naimark_core::ensemble::{run_ensemble, to_csv_string, EnsembleConfig};
use naimark_core::measurement::{random_rank1_povm, Pvm, Rank1Povm};
use naimark_core::optimize::OptimizerConfig;
use naimark_core::verify::{verify_bound, Instance};

fn quick(seed: u64) -> OptimizerConfig {
    OptimizerConfig {
        restarts: 6,
        seed,
        ..OptimizerConfig::default()
    }
}

#[test]
fn trine_bounds_order() {
    let t = Rank1Povm::trine();
    let cfg = quick(1);
    let corrected = strengthened_single_bound(&t, &cfg).unwrap();
    let uncorrected = uncorrected_single_bound(&t, &cfg).unwrap();
    let half_log3 = 0.5 * 3f64.log2();
    assert!((corrected.value_bits - half_log3).abs() < 1e-6);
    assert!((uncorrected.value_bits - half_log3 / 2.0).abs() < 1e-6);
    // θ = 2π/3 or its mirror 4π/3
    let theta = corrected.witness.unwrap().theta_params[0];
    assert!((theta.cos() + 0.5).abs() < 1e-4, "theta = {theta}");
}

#[test]
fn every_method_is_sound_on_random_instances() {
    let cfg = quick(3);
    for seed in 0..4 {
        let m = random_rank1_povm(2, 3, 100 + seed).unwrap();
        let n = random_rank1_povm(2, 4, 200 + seed).unwrap();
        for method in BoundMethod::ALL {
            let instance = match method {
                BoundMethod::MixedPvm => continue,
                _ if method.is_pair() => Instance::Pair(&m, &n),
                _ => Instance::Single(&m),
            };
            let (_, cert) = verify_bound(method, instance, &cfg, 1.0).unwrap();
            assert!(!cert.violated, "{method:?} seed {seed}: margin {}", cert.margin);
        }
    }
    let (a, b) = (Pvm::pauli_z(), Pvm::pauli_y());
    let (_, cert) = verify_bound(BoundMethod::MixedPvm, Instance::Mixed(&a, &b), &cfg, 1.0).unwrap();
    assert!(cert.margin.abs() < 1e-6);
}

#[test]
fn strengthening_never_loses_to_identity() {
    let cfg = quick(5);
    for seed in 0..4 {
        let m = random_rank1_povm(3, 5, seed).unwrap();
        let n = random_rank1_povm(3, 3, seed + 50).unwrap();
        let r = strengthened_pair_bound(&m, &n, &cfg).unwrap();
        assert!(r.value_bits >= r.baseline_bits - 1e-9);
    }
}

#[test]
fn small_ensemble_is_clean_and_reproducible() {
    let cfg = EnsembleConfig {
        trials: 6,
        seed: 11,
        optimizer: quick(11),
        ..EnsembleConfig::default()
    };
    let a = run_ensemble(&cfg).unwrap();
    let b = run_ensemble(&cfg).unwrap();
    assert_eq!(a.summary.violations, 0);
    assert_eq!(a.summary.baseline_dominance_failures, 0);
    assert_eq!(to_csv_string(&a.rows), to_csv_string(&b.rows));
    assert!(a.rows.iter().all(|r| (2..=3).contains(&r.d) && r.k_m >= r.d && r.k_m <= 2 * r.d));
}

#[test]
fn witness_reproduces_the_reported_value() {
    use naimark_core::naimark::{dilate, overlap_matrix, pad_povm, AncillaUnitary};
    let cfg = quick(8);
    let m = random_rank1_povm(3, 5, 41).unwrap();
    let n = random_rank1_povm(3, 6, 42).unwrap();
    let r = strengthened_pair_bound(&m, &n, &cfg).unwrap();
    let w = r.witness.unwrap();
    let (em, en) = (dilate(&pad_povm(&m, 6).unwrap()).unwrap(), dilate(&n).unwrap());
    let u = AncillaUnitary::from_params(em.ancilla_dim(), &w.theta_params).unwrap();
    let o = overlap_matrix(&em, &en, &u).unwrap();
    let c = o.entries().iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!((r.value_bits + 2.0 * c.log2()).abs() < 1e-10);
    assert!(r.value_bits > r.baseline_bits);
}
