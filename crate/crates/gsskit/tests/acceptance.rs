//! End-to-end acceptance checks, one test per shipping criterion. Each test
//! prints a single `acceptance N (...): PASS` line (visible with
//! `cargo test --test acceptance -- --nocapture`) and fails loudly otherwise.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use gsskit::coeffs::{
    count_half_partitions_total, lambda_exponent, CoefficientSet, Profile, SolverConfig,
    TranslatedSet,
};
use gsskit::experiments::{
    moment_check, phase_scan, spread_experiment, work_scaling, MomentSpec, PhaseSpec, ScalingAlgo,
    ScalingSpec, SpreadSpec,
};
use gsskit::instance::{imbalance, GssInstance};
use gsskit::mitm::solve_mitm;
use gsskit::oracle::{brute_force_solve, DEFAULT_STATE_BUDGET};
use gsskit::repsolver::{solve_auto, AutoOutcome, DpTable};

const BUDGET: u64 = 1 << 30;

fn report(id: u32, name: &str, ok: bool) {
    println!("acceptance {id} ({name}): {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "acceptance {id} ({name}) failed");
}

fn m_round(set: &CoefficientSet, exponent: f64) -> BigUint {
    BigUint::from((set.size() as f64).powf(exponent).round() as u64)
}

#[test]
fn a1_exponent_table() {
    let bands = [
        (2u32, 0.374, 0.375),
        (3, 0.386, 0.387),
        (4, 0.399, 0.400),
        (5, 0.418, 0.419),
        (7, 0.440, 0.441),
    ];
    let mut ok = true;
    for (z, lo, hi) in bands {
        let v = lambda_exponent(z).unwrap().value;
        if !(lo..=hi).contains(&v) {
            eprintln!("Lambda({z}) = {v}, outside [{lo}, {hi}]");
            ok = false;
        }
    }
    report(1, "exponent table", ok);
}

#[test]
fn a2_oracle_equivalence() {
    let sets = [
        CoefficientSet::signed(1),
        CoefficientSet::with_zero(1),
        CoefficientSet::signed(2),
        CoefficientSet::with_zero(2),
    ];
    let mut mismatches = 0usize;
    for (si, set) in sets.iter().enumerate() {
        // the enumeration oracle refuses 5^n past its state budget at n >= 11
        let n_cap = if set.size() == 5 { 10usize } else { 12 };
        for trial in 0..200usize {
            let seed = 0xA2_0000 + (si * 1000 + trial) as u64;
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let n = rng.gen_range(6..=n_cap);
            let m = if trial % 2 == 0 {
                BigUint::from((2f64).powf(n as f64 / 2.0).round() as u64)
            } else {
                BigUint::from(set.size() as u64).pow(n as u32)
            };
            let inst = if trial % 4 < 2 {
                // planted: definitely solvable
                GssInstance::generate_planted(n, m, set.clone(), seed).unwrap().0
            } else {
                // fixed-target: solvable only by chance
                let bound = (set.d() as i128)
                    * (n as i128)
                    * m.to_i128().unwrap();
                let tau = BigInt::from(rng.gen_range(-bound..=bound) / 4);
                GssInstance::generate_random(n, m, tau, set.clone(), seed).unwrap()
            };
            let brute = brute_force_solve(&inst, DEFAULT_STATE_BUDGET).unwrap();
            let mitm = solve_mitm(&inst, BUDGET).unwrap();
            if let Some(sol) = &brute {
                assert!(inst.verify(sol).unwrap());
            }
            if let Some(sol) = &mitm.solution {
                assert!(inst.verify(sol).unwrap());
            }
            if brute.is_some() != mitm.solution.is_some() {
                eprintln!("mismatch at set {si} trial {trial}");
                mismatches += 1;
            }
        }
    }
    report(2, "oracle equivalence", mismatches == 0);
}

#[test]
fn a3_rep_recall() {
    let n = 14usize;
    let mut ok = true;
    for set in [CoefficientSet::with_zero(1), CoefficientSet::signed(2)] {
        let m = m_round(&set, 0.95 * n as f64);
        let mut hits = 0usize;
        for seed in 0..100u64 {
            let (inst, _) =
                GssInstance::generate_planted(n, m.clone(), set.clone(), 0xA3_000 + seed).unwrap();
            let cfg = SolverConfig { rng_seed: seed, ..SolverConfig::for_n(n) };
            match solve_auto(&inst, &cfg).unwrap() {
                AutoOutcome::Solved { solution, .. } => {
                    // soundness is zero-tolerance
                    assert!(inst.verify(&solution).unwrap(), "non-verifying output");
                    hits += 1;
                }
                AutoOutcome::NotFound { .. } | AutoOutcome::TooLarge => {}
            }
        }
        if hits < 90 {
            eprintln!("recall {hits}/100 for |C| = {}", set.size());
            ok = false;
        }
    }
    report(3, "representation-solver recall", ok);
}

#[test]
fn a4_phase_transition() {
    let spec = PhaseSpec {
        set: CoefficientSet::with_zero(1),
        n: 18,
        alphas: vec![0.5, 1.2],
        trials: 200,
        tau: BigInt::zero(),
        seed: 0xA4,
        budget_bytes: BUDGET,
    };
    let rows = phase_scan(&spec).unwrap();
    let ok = !rows[0].skipped
        && !rows[1].skipped
        && rows[0].rate >= 0.95
        && rows[1].rate <= 0.05;
    if !ok {
        eprintln!("rates: {} at 0.5, {} at 1.2", rows[0].rate, rows[1].rate);
    }
    report(4, "phase transition", ok);
}

#[test]
fn a5_first_moment() {
    let spec = MomentSpec {
        set: CoefficientSet::signed(2),
        n: 14,
        m: BigUint::from(1u32) << 12,
        tau: BigInt::from(1),
        samples: 500,
        seed: 0xA5,
        budget_bytes: BUDGET,
    };
    let r = moment_check(&spec).unwrap();
    let ok = (0.75..=1.25).contains(&r.ratio);
    if !ok {
        eprintln!("mean {} vs predicted {} (ratio {})", r.empirical_mean, r.predicted_mean, r.ratio);
    }
    report(5, "first moment", ok);
}

#[test]
fn a6_dp_sampler() {
    let set = CoefficientSet::with_zero(1);
    let dset = TranslatedSet::new(&set, 1).unwrap();
    let elements = dset.elements();
    let mut classes_tested = 0usize;
    let mut classes_passed = 0usize;
    for n in [6usize, 8] {
        let shapes: Vec<Vec<(i64, usize)>> = vec![
            vec![(-1, n / 2), (-2, n / 2), (0, 0)],
            vec![(-1, 2), (-2, n - 2), (0, 0)],
        ];
        for p in [7u64, 11, 13] {
            for (shape_idx, shape) in shapes.iter().enumerate() {
                let seed = 0xA6_00 + (n * 100 + p as usize * 10 + shape_idx) as u64;
                let mut rng = ChaCha12Rng::seed_from_u64(seed);
                let x: Vec<BigUint> =
                    (0..n).map(|_| BigUint::from(rng.gen_range(1u64..10_000))).collect();
                let counts = shape.iter().copied().collect();
                let sigma = Profile::new(&elements, &counts).unwrap();
                let (table, _) = DpTable::build(&x, &dset, p, &sigma, BUDGET).unwrap();

                // exact mass conservation: per-residue class sizes against
                // direct enumeration of D^n, and their sum against b(sigma)
                let allowed: Vec<Vec<u32>> = table
                    .nonzero_elements()
                    .iter()
                    .map(|&w| {
                        gsskit::coeffs::half_sizes(sigma.count(w))
                            .into_iter()
                            .map(|t| t as u32)
                            .collect()
                    })
                    .collect();
                let k = elements.len();
                let mut expect = vec![0u128; p as usize];
                for mask in 0..k.pow(n as u32) {
                    let mut v = mask;
                    let mut sum: i128 = 0;
                    let mut cnt = vec![0u32; table.nonzero_elements().len()];
                    for idx in 0..n {
                        let w = elements[v % k];
                        v /= k;
                        sum += w as i128 * x[idx].to_i128().unwrap();
                        if w != 0 {
                            let e =
                                table.nonzero_elements().iter().position(|&u| u == w).unwrap();
                            cnt[e] += 1;
                        }
                    }
                    if cnt.iter().zip(&allowed).all(|(c, a)| a.contains(c)) {
                        expect[sum.rem_euclid(p as i128) as usize] += 1;
                    }
                }
                let mut total = 0u128;
                for r in 0..p {
                    assert_eq!(table.class_size(r), expect[r as usize], "n={n} p={p} r={r}");
                    total += table.class_size(r);
                }
                assert_eq!(
                    BigUint::from(total),
                    count_half_partitions_total(&sigma, n),
                    "n={n} p={p} shape {shape_idx}"
                );

                // chi-square uniformity of the sampler per residue class
                for r in 0..p {
                    let size = table.class_size(r);
                    if !(2..=2000).contains(&size) {
                        continue;
                    }
                    let draws = 10_000usize;
                    let mut freq: HashMap<Vec<(i64, u128)>, u64> = HashMap::new();
                    for _ in 0..draws {
                        let hp = table.sample(r, &mut rng).unwrap();
                        *freq.entry(hp.key()).or_insert(0) += 1;
                    }
                    let expect_per = draws as f64 / size as f64;
                    let mut chi2 = (size as f64 - freq.len() as f64) * expect_per;
                    for &obs in freq.values() {
                        let d = obs as f64 - expect_per;
                        chi2 += d * d / expect_per;
                    }
                    let threshold =
                        ChiSquared::new(size as f64 - 1.0).unwrap().inverse_cdf(0.99);
                    classes_tested += 1;
                    if chi2 <= threshold {
                        classes_passed += 1;
                    }
                }
            }
        }
    }
    let ok = classes_tested > 0
        && classes_passed as f64 >= 0.95 * classes_tested as f64;
    if !ok {
        eprintln!("{classes_passed}/{classes_tested} residue classes uniform");
    }
    report(6, "dp sampler", ok);
}

#[test]
fn a7_signature_spread() {
    let set = CoefficientSet::with_zero(1);
    let n = 12usize;
    let spec = SpreadSpec {
        m: m_round(&set, 0.9 * n as f64),
        set,
        n,
        trials: 100,
        seed: 0xA7,
        a_budget: 1 << 24,
    };
    let rows = spread_experiment(&spec).unwrap();
    let good = rows.iter().filter(|r| r.fraction >= 0.5).count();
    let ok = good >= 90;
    if !ok {
        eprintln!("{good}/100 trials with distinct-signature fraction >= 0.5");
    }
    report(7, "signature spread", ok);
}

#[test]
fn a8_work_scaling() {
    let set = CoefficientSet::with_zero(1);
    let spec = ScalingSpec {
        set: set.clone(),
        ns: vec![10, 12, 14, 16],
        trials: 5,
        alpha: 0.95,
        seed: 0xA8,
        budget_bytes: BUDGET,
    };
    let log2_size = (set.size() as f64).log2();
    let mitm_report = work_scaling(&spec, ScalingAlgo::Mitm).unwrap();
    let mitm_ok = (mitm_report.slope - 0.5 * log2_size).abs() <= 0.05;
    if !mitm_ok {
        eprintln!("mitm slope {} vs expected {}", mitm_report.slope, 0.5 * log2_size);
    }
    let rep_report = work_scaling(&spec, ScalingAlgo::Rep).unwrap();
    let bound = (lambda_exponent(set.size() as u32).unwrap().value + 0.08) * log2_size;
    let rep_ok = rep_report.slope <= bound;
    if !rep_ok {
        eprintln!("rep slope {} above bound {bound}", rep_report.slope);
    }
    report(8, "work scaling", mitm_ok && rep_ok);
}

#[test]
fn a9_number_balancing() {
    let set = CoefficientSet::with_zero(1);
    let n = 16usize;
    let delta = (3f64).powi(-8);
    let mut good = 0usize;
    for trial in 0..50u64 {
        let mut rng = ChaCha12Rng::seed_from_u64(0xA9_00 + trial);
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let (inst, meta) = GssInstance::from_number_balancing(&y, delta, set.clone()).unwrap();
        let cfg = SolverConfig { rng_seed: trial, ..SolverConfig::for_n(n) };
        if let AutoOutcome::Solved { solution, .. } = solve_auto(&inst, &cfg).unwrap() {
            assert!(inst.verify(&solution).unwrap());
            // exact rational check |c.y| < delta * n
            if imbalance(&y, &solution.c).abs() < meta.imbalance_bound {
                good += 1;
            }
        }
    }
    let ok = good >= 45;
    if !ok {
        eprintln!("{good}/50 trials balanced below the bound");
    }
    report(9, "number balancing", ok);
}
