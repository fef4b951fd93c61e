//! Monte-Carlo experiments over random instances: first-moment solution-count
//! predictions, the solvable/unsolvable phase transition in M, signature
//! spread of planted solutions, and work scaling of the solvers.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::coeffs::{choose_translation, CoefficientSet, Profile, SolverConfig};
use crate::instance::{GssInstance, InstanceError};
use crate::mitm::{self, MitmError};
use crate::repsolver::{self, InputPartition, RepError};

#[derive(Debug, Error)]
pub enum ExpError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Mitm(#[from] MitmError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// Variance correction kappa(M) = 1/3 - 1/(2M) + 1/(6M^2), so that
/// Var(x)/M^2 = kappa - 1/12... precisely E[x^2]/M^2 for x uniform on
/// [0, M-1] is kappa(M) - (something); kappa is the constant appearing in the
/// density prediction below.
pub fn kappa(m: f64) -> f64 {
    assert!(m >= 1.0);
    1.0 / 3.0 - 1.0 / (2.0 * m) + 1.0 / (6.0 * m * m)
}

/// Predicted expected number of solutions for a random instance:
/// rho_n = |C|^{n+1/2} / (M * sqrt(2*pi*n*kappa(M)*sum_{c in C} c^2)).
pub fn rho_n(set: &CoefficientSet, n: usize, m: &BigUint) -> f64 {
    let s = set.size() as f64;
    let m_f = m.to_f64().unwrap_or(f64::MAX);
    let sum_sq: f64 = set.elements().iter().map(|&c| (c * c) as f64).sum();
    let log2_rho = (n as f64 + 0.5) * s.log2()
        - m_f.log2()
        - 0.5 * (2.0 * std::f64::consts::PI * n as f64 * kappa(m_f) * sum_sq).log2();
    log2_rho.exp2()
}

/// Characteristic function of uniform x on [0, M-1]:
/// f(theta) = (1/M) (sin((M - 1/2) theta) / (2 sin(theta/2)) + 1/2), with
/// f -> 1 at theta = 0 (and any multiple of 2*pi).
pub fn f_theta(theta: f64, m: u64) -> f64 {
    let m_f = m as f64;
    let half = (theta / 2.0).sin();
    if half.abs() < 1e-14 {
        return 1.0;
    }
    (((m_f - 0.5) * theta).sin() / (2.0 * half) + 0.5) / m_f
}

fn m_from_exponent(set: &CoefficientSet, exponent: f64) -> Result<BigUint, ExpError> {
    let log2_m = exponent * (set.size() as f64).log2();
    if log2_m >= 62.0 {
        return Err(ExpError::Domain(format!(
            "M = |C|^{exponent:.3} needs {log2_m:.0} bits; raise it into the instance file path instead"
        )));
    }
    let m = log2_m.exp2().round() as u64;
    if m < 1 {
        return Err(ExpError::Domain("M rounds to zero".into()));
    }
    Ok(BigUint::from(m))
}

fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let var: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = cov / var;
    (slope, my - slope * mx)
}

fn wilson(successes: usize, trials: usize) -> (f64, f64) {
    let z = 1.96f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let den = 1.0 + z * z / n;
    let center = (p + z * z / (2.0 * n)) / den;
    let half = z * ((p * (1.0 - p) + z * z / (4.0 * n)) / n).sqrt() / den;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Phase-transition scan: for each alpha, M = round(|C|^{alpha*n}) and the
/// fraction of random instances (fresh x per trial, fixed tau) that have a
/// solution, decided exactly by meet-in-the-middle.
#[derive(Debug, Clone)]
pub struct PhaseSpec {
    pub set: CoefficientSet,
    pub n: usize,
    pub alphas: Vec<f64>,
    pub trials: usize,
    pub tau: BigInt,
    pub seed: u64,
    pub budget_bytes: u64,
}

#[derive(Debug, Clone)]
pub struct PhaseRow {
    pub alpha: f64,
    pub m: BigUint,
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    /// Checker refused (memory budget); the row carries no probability.
    pub skipped: bool,
}

pub fn phase_scan(spec: &PhaseSpec) -> Result<Vec<PhaseRow>, ExpError> {
    if spec.trials == 0 {
        return Err(ExpError::Domain("trials must be >= 1".into()));
    }
    let mut rows = Vec::with_capacity(spec.alphas.len());
    for (row_idx, &alpha) in spec.alphas.iter().enumerate() {
        let m = m_from_exponent(&spec.set, alpha * spec.n as f64)?;
        let row_seed = spec.seed.wrapping_add(1_000_003u64.wrapping_mul(row_idx as u64));
        let mut successes = 0usize;
        let mut skipped = false;
        for t in 0..spec.trials {
            let inst = GssInstance::generate_random(
                spec.n,
                m.clone(),
                spec.tau.clone(),
                spec.set.clone(),
                row_seed.wrapping_add(t as u64),
            )?;
            match mitm::solve_mitm(&inst, spec.budget_bytes) {
                Ok(r) if r.solution.is_some() => successes += 1,
                Ok(_) => {}
                Err(MitmError::BudgetExceeded { .. }) => {
                    skipped = true;
                    break;
                }
                Err(e) => return Err(e.into()),
            }
        }
        let rate = if skipped { f64::NAN } else { successes as f64 / spec.trials as f64 };
        let (ci_low, ci_high) =
            if skipped { (f64::NAN, f64::NAN) } else { wilson(successes, spec.trials) };
        rows.push(PhaseRow {
            alpha,
            m,
            trials: spec.trials,
            successes,
            rate,
            ci_low,
            ci_high,
            seed: row_seed,
            skipped,
        });
    }
    Ok(rows)
}

pub fn phase_csv(rows: &[PhaseRow]) -> String {
    let mut s =
        String::from("schema,v1\nalpha,m,trials,successes,rate,ci_low,ci_high,seed,skipped\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.alpha, r.m, r.trials, r.successes, r.rate, r.ci_low, r.ci_high, r.seed, r.skipped
        ));
    }
    s
}

/// First-moment check: empirical mean of the exact solution count over random
/// instances against the rho_n prediction. Requires a set without the parity
/// obstruction of C(1) (whose counts concentrate on one parity class).
#[derive(Debug, Clone)]
pub struct MomentSpec {
    pub set: CoefficientSet,
    pub n: usize,
    pub m: BigUint,
    pub tau: BigInt,
    pub samples: usize,
    pub seed: u64,
    pub budget_bytes: u64,
}

#[derive(Debug, Clone)]
pub struct MomentReport {
    pub predicted_mean: f64,
    pub empirical_mean: f64,
    /// empirical / predicted
    pub ratio: f64,
    pub empirical_var: f64,
    pub samples: usize,
}

pub fn moment_check(spec: &MomentSpec) -> Result<MomentReport, ExpError> {
    if spec.samples == 0 {
        return Err(ExpError::Domain("samples must be >= 1".into()));
    }
    if spec.set.d() == 1 && !spec.set.includes_zero() {
        return Err(ExpError::Domain(
            "moment check is unsupported for C(1): counts are parity-locked".into(),
        ));
    }
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for k in 0..spec.samples {
        let inst = GssInstance::generate_random(
            spec.n,
            spec.m.clone(),
            spec.tau.clone(),
            spec.set.clone(),
            spec.seed.wrapping_add(k as u64),
        )?;
        let count = mitm::count_solutions_mitm(&inst, spec.budget_bytes)?
            .to_f64()
            .unwrap_or(f64::MAX);
        sum += count;
        sum_sq += count * count;
    }
    let n = spec.samples as f64;
    let empirical_mean = sum / n;
    let predicted_mean = rho_n(&spec.set, spec.n, &spec.m);
    Ok(MomentReport {
        predicted_mean,
        empirical_mean,
        ratio: empirical_mean / predicted_mean,
        empirical_var: (sum_sq / n - empirical_mean * empirical_mean).max(0.0),
        samples: spec.samples,
    })
}

/// Signature spread of planted solutions: per trial, the planted input
/// partition's fraction of distinct half-partition signatures distinct/a.
#[derive(Debug, Clone)]
pub struct SpreadSpec {
    pub set: CoefficientSet,
    pub n: usize,
    pub m: BigUint,
    pub trials: usize,
    pub seed: u64,
    /// Refusal bound on a (number of signatures enumerated per trial).
    pub a_budget: u64,
}

#[derive(Debug, Clone)]
pub struct SpreadRow {
    pub trial: usize,
    pub seed: u64,
    pub distinct: u64,
    pub a: BigUint,
    pub fraction: f64,
}

pub fn spread_experiment(spec: &SpreadSpec) -> Result<Vec<SpreadRow>, ExpError> {
    if spec.trials == 0 {
        return Err(ExpError::Domain("trials must be >= 1".into()));
    }
    let mut rows = Vec::with_capacity(spec.trials);
    for t in 0..spec.trials {
        let seed = spec.seed.wrapping_add(t as u64);
        let (inst, sol) =
            GssInstance::generate_planted(spec.n, spec.m.clone(), spec.set.clone(), seed)?;
        let pi = Profile::of_vector(&spec.set.elements(), &sol.c)
            .map_err(|e| ExpError::Domain(e.to_string()))?;
        let z = choose_translation(&pi);
        let part = InputPartition::from_solution(&sol.c, z);
        let (distinct, a) = repsolver::signature_spread(inst.x(), &part, spec.a_budget)?;
        let fraction = distinct as f64 / a.to_f64().unwrap_or(f64::MAX);
        rows.push(SpreadRow { trial: t, seed, distinct, a, fraction });
    }
    Ok(rows)
}

pub fn spread_csv(rows: &[SpreadRow]) -> String {
    let mut s = String::from("schema,v1\ntrial,seed,distinct,a,fraction\n");
    for r in rows {
        s.push_str(&format!("{},{},{},{},{}\n", r.trial, r.seed, r.distinct, r.a, r.fraction));
    }
    s
}

/// Work-scaling experiment: mean log2(work) of a solver on planted instances
/// across a grid of n, with M = round(|C|^{alpha*n}), and the least-squares
/// slope of that line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingAlgo {
    Mitm,
    /// Representation solver run on the planted profile.
    Rep,
}

#[derive(Debug, Clone)]
pub struct ScalingSpec {
    pub set: CoefficientSet,
    pub ns: Vec<usize>,
    pub trials: usize,
    /// M exponent: M = round(|C|^{alpha*n}).
    pub alpha: f64,
    pub seed: u64,
    pub budget_bytes: u64,
}

#[derive(Debug, Clone)]
pub struct ScalingPoint {
    pub n: usize,
    pub mean_log2_work: f64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct ScalingReport {
    pub algo: ScalingAlgo,
    pub points: Vec<ScalingPoint>,
    pub slope: f64,
    pub intercept: f64,
}

pub fn work_scaling(spec: &ScalingSpec, algo: ScalingAlgo) -> Result<ScalingReport, ExpError> {
    if spec.ns.len() < 2 {
        return Err(ExpError::Domain(
            "work scaling needs at least two values of n to fit a slope".into(),
        ));
    }
    if spec.trials == 0 {
        return Err(ExpError::Domain("trials must be >= 1".into()));
    }
    let mut points = Vec::with_capacity(spec.ns.len());
    for (row_idx, &n) in spec.ns.iter().enumerate() {
        let m = m_from_exponent(&spec.set, spec.alpha * n as f64)?;
        let row_seed = spec.seed.wrapping_add(1_000_003u64.wrapping_mul(row_idx as u64));
        let mut acc = 0.0f64;
        for t in 0..spec.trials {
            let seed = row_seed.wrapping_add(t as u64);
            let (inst, sol) =
                GssInstance::generate_planted(n, m.clone(), spec.set.clone(), seed)?;
            let work = match algo {
                ScalingAlgo::Mitm => mitm::solve_mitm(&inst, spec.budget_bytes)?.work.total(),
                ScalingAlgo::Rep => {
                    let pi = Profile::of_vector(&spec.set.elements(), &sol.c)
                        .map_err(|e| ExpError::Domain(e.to_string()))?;
                    let cfg = SolverConfig {
                        rng_seed: seed,
                        budget_bytes: spec.budget_bytes,
                        ..SolverConfig::for_n(n)
                    };
                    repsolver::solve_profile(&inst, &pi, &cfg)?.work.total()
                }
            };
            acc += (work.max(1) as f64).log2();
        }
        points.push(ScalingPoint { n, mean_log2_work: acc / spec.trials as f64, seed: row_seed });
    }
    let fitted: Vec<(f64, f64)> =
        points.iter().map(|p| (p.n as f64, p.mean_log2_work)).collect();
    let (slope, intercept) = least_squares(&fitted);
    Ok(ScalingReport { algo, points, slope, intercept })
}

pub fn scaling_csv(report: &ScalingReport) -> String {
    let algo = match report.algo {
        ScalingAlgo::Mitm => "mitm",
        ScalingAlgo::Rep => "rep",
    };
    let mut s = String::from("schema,v1\nalgo,n,mean_log2_work,seed\n");
    for p in &report.points {
        s.push_str(&format!("{},{},{},{}\n", algo, p.n, p.mean_log2_work, p.seed));
    }
    s
}
