// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

mod common;

use common::{random_circuit, random_diagonal, random_model};
use lcem::pec::RunningStats;
use lcem::rng::stream;
use lcem::{analyze_pec, ideal_expectation, run_pec, Error, PecConfig, PauliString};

#[test]
fn both_estimators_are_unbiased_under_heavy_noise() {
    let mut rng = stream(31, 0);
    for case in 0..5 {
        let n = 5;
        let c = random_circuit(&mut rng, n, 4);
        let m = random_model(&mut rng, n, 4, 4, 0.05);
        let o = random_diagonal(&mut rng, n);
        let config = PecConfig {
            shots: 50_000,
            batches: 5,
            seed: case,
            ..PecConfig::default()
        };
        let r = run_pec(&c, &m, &o, &config).unwrap();
        let ideal = ideal_expectation(&c, &o).unwrap();
        assert_eq!(r.ideal, ideal);
        assert!((r.mean_standard - ideal).abs() <= 5.0 * r.standard_error_standard().max(1e-12));
        assert!((r.mean_local - ideal).abs() <= 5.0 * r.standard_error_local().max(1e-12));
        assert!(r.var_local_exact <= r.var_standard_exact + 1e-12);
    }
}

#[test]
fn results_do_not_depend_on_the_thread_count() {
    let mut rng = stream(32, 0);
    let c = random_circuit(&mut rng, 6, 5);
    let m = random_model(&mut rng, 6, 5, 6, 0.02);
    let o = random_diagonal(&mut rng, 6);
    let config = PecConfig {
        shots: 20_000,
        batches: 4,
        seed: 9,
        ..PecConfig::default()
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_pec(&c, &m, &o, &config).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(3));
}

#[test]
fn batch_means_average_to_the_overall_mean() {
    let mut rng = stream(33, 0);
    let c = random_circuit(&mut rng, 4, 3);
    let m = random_model(&mut rng, 4, 3, 5, 0.05);
    let o = random_diagonal(&mut rng, 4);
    let config = PecConfig {
        shots: 10_000,
        batches: 10,
        seed: 1,
        ..PecConfig::default()
    };
    let r = run_pec(&c, &m, &o, &config).unwrap();
    assert_eq!(r.batch_means.len(), 10);
    let avg = r.batch_means.iter().map(|b| b.standard).sum::<f64>() / 10.0;
    assert!((avg - r.mean_standard).abs() < 1e-12);
    let avg = r.batch_means.iter().map(|b| b.local).sum::<f64>() / 10.0;
    assert!((avg - r.mean_local).abs() < 1e-12);
}

#[test]
fn overheads_scale_with_the_inverse_square_precision() {
    let mut rng = stream(34, 0);
    let c = random_circuit(&mut rng, 5, 3);
    let m = random_model(&mut rng, 5, 3, 5, 0.01);
    let o = random_diagonal(&mut rng, 5);
    let a = analyze_pec(&c, &m, &o, 0.01).unwrap();
    let b = analyze_pec(&c, &m, &o, 0.02).unwrap();
    assert!((a.overhead_standard / b.overhead_standard - 4.0).abs() < 1e-9);
    assert!(analyze_pec(&c, &m, &o, 0.0).is_err());
}

#[test]
fn running_stats_merge_matches_a_single_pass() {
    let mut rng = stream(35, 0);
    let xs: Vec<f64> = (0..1000).map(|_| rand::Rng::gen_range(&mut rng, -3.0..3.0)).collect();
    let mut all = RunningStats::default();
    xs.iter().for_each(|&x| all.push(x));
    let (mut left, mut right) = (RunningStats::default(), RunningStats::default());
    xs[..377].iter().for_each(|&x| left.push(x));
    xs[377..].iter().for_each(|&x| right.push(x));
    let merged = left.merge(&right);
    assert_eq!(merged.count, all.count);
    assert!((merged.mean - all.mean).abs() < 1e-12);
    assert!((merged.variance() - all.variance()).abs() < 1e-12);
}

#[test]
fn invalid_runs_are_rejected() {
    let c = lcem::LayeredCircuit::identity(2, 1);
    let m = lcem::NoiseModel::noiseless(2, 1);
    let z: PauliString = "ZI".parse().unwrap();
    let x: PauliString = "XI".parse().unwrap();
    let zero = PecConfig {
        shots: 0,
        ..PecConfig::default()
    };
    assert_eq!(run_pec(&c, &m, &z, &zero), Err(Error::ZeroShots));
    assert!(run_pec(&c, &m, &x, &PecConfig::default()).is_err());
    let r = run_pec(
        &c,
        &m,
        &z,
        &PecConfig {
            shots: 100,
            batches: 1,
            ..PecConfig::default()
        },
    )
    .unwrap();
    assert_eq!((r.mean_standard, r.var_standard_exact), (1.0, 0.0));
}
