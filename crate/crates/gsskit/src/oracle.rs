//! Ground-truth brute force: exhaustive solving, exact solution counting, and
//! achievable-target sets. Lexicographic enumeration with incremental
//! dot-product updates; refuses (never truncates) past the state budget.

use std::collections::BTreeSet;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::coeffs::CoefficientSet;
use crate::instance::{GssInstance, Solution};
use crate::work::WorkStats;

/// Default enumeration budget 3^16 states.
pub const DEFAULT_STATE_BUDGET: u64 = 43_046_721;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("budget exceeded: |C|^n = {states} states over budget {budget}")]
    BudgetExceeded { states: String, budget: u64 },
}

/// {c.x : c in C^len(x)}, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AchievableSet {
    pub values: BTreeSet<BigInt>,
}

fn state_count(set_size: usize, n: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(set_size as u64)?;
    }
    Some(acc)
}

fn check_budget(set_size: usize, n: usize, budget: u64) -> Result<(), OracleError> {
    match state_count(set_size, n) {
        Some(s) if s <= budget => Ok(()),
        Some(s) => Err(OracleError::BudgetExceeded { states: s.to_string(), budget }),
        None => Err(OracleError::BudgetExceeded {
            states: format!("{set_size}^{n}"),
            budget,
        }),
    }
}

/// Odometer scan over C^n in lexicographic order (c[0] most significant),
/// maintaining prefix dot products incrementally. The visitor gets the digit
/// vector and the full sum; returning true stops the scan.
fn scan<T, F>(contrib: &[Vec<T>], zero: T, mut visit: F) -> u64
where
    T: Clone + for<'a> Add<&'a T, Output = T>,
    F: FnMut(&[usize], &T) -> bool,
{
    let n = contrib.len();
    let k = contrib[0].len();
    let mut digits = vec![0usize; n];
    // sums[i] = dot product of the prefix of length i
    let mut sums: Vec<T> = Vec::with_capacity(n + 1);
    sums.push(zero);
    for i in 0..n {
        let next = sums[i].clone() + &contrib[i][0];
        sums.push(next);
    }
    let mut visited = 0u64;
    loop {
        visited += 1;
        if visit(&digits, &sums[n]) {
            return visited;
        }
        // advance odometer, rightmost digit fastest
        let mut i = n;
        loop {
            if i == 0 {
                return visited;
            }
            i -= 1;
            if digits[i] + 1 < k {
                digits[i] += 1;
                break;
            }
            digits[i] = 0;
        }
        for j in i..n {
            sums[j + 1] = sums[j].clone() + &contrib[j][digits[j]];
        }
    }
}

/// Contribution table over i128 when every partial sum provably fits, else
/// None and the caller takes the big-integer path.
fn contrib_i128(elements: &[i64], x: &[BigUint]) -> Option<Vec<Vec<i128>>> {
    let d_max = elements.iter().map(|e| e.unsigned_abs()).max().unwrap();
    let sum_x: BigUint = x.iter().sum();
    let bound = sum_x * BigUint::from(d_max);
    if bound.bits() > 120 {
        return None;
    }
    Some(
        x.iter()
            .map(|xi| {
                let v = xi.to_i128().unwrap();
                elements.iter().map(|&e| e as i128 * v).collect()
            })
            .collect(),
    )
}

fn contrib_big(elements: &[i64], x: &[BigUint]) -> Vec<Vec<BigInt>> {
    x.iter()
        .map(|xi| {
            let v = BigInt::from(xi.clone());
            elements.iter().map(|&e| BigInt::from(e) * &v).collect()
        })
        .collect()
}

/// First verifying solution in lexicographic coefficient order, or None.
/// Respects the all-zero exclusion when 0 is in C and tau = 0.
pub fn brute_force_solve(
    inst: &GssInstance,
    budget: u64,
) -> Result<Option<Solution>, OracleError> {
    Ok(brute_force_solve_counted(inst, budget)?.0)
}

pub fn brute_force_solve_counted(
    inst: &GssInstance,
    budget: u64,
) -> Result<(Option<Solution>, WorkStats), OracleError> {
    let elements = inst.coeffs().elements();
    check_budget(elements.len(), inst.n(), budget)?;
    let exclude_zero = inst.coeffs().contains(0) && inst.tau().is_zero();
    let zero_digit = elements.iter().position(|&e| e == 0);

    let mut found: Option<Vec<usize>> = None;
    let visited;
    let hit = |digits: &[usize], matches: bool, found: &mut Option<Vec<usize>>| -> bool {
        if !matches {
            return false;
        }
        if exclude_zero && Some(digits) == zero_digit.map(|z| vec![z; digits.len()]).as_deref() {
            return false;
        }
        *found = Some(digits.to_vec());
        true
    };

    if let Some(contrib) = contrib_i128(&elements, inst.x()) {
        let tau = match inst.tau().to_i128() {
            Some(t) => t,
            // target outside any achievable magnitude
            None => return Ok((None, WorkStats::default())),
        };
        visited = scan(&contrib, 0i128, |d, s| hit(d, *s == tau, &mut found));
    } else {
        let contrib = contrib_big(&elements, inst.x());
        let tau = inst.tau().clone();
        visited = scan(&contrib, BigInt::zero(), |d, s| hit(d, *s == tau, &mut found));
    }
    let sol = found.map(|digits| Solution { c: digits.iter().map(|&j| elements[j]).collect() });
    let stats = WorkStats { partials_enumerated: visited, ..WorkStats::default() };
    Ok((sol, stats))
}

/// Exact |{c in C^n : c.x = tau}|, with no all-zero exclusion.
pub fn count_solutions(inst: &GssInstance, budget: u64) -> Result<BigUint, OracleError> {
    let elements = inst.coeffs().elements();
    check_budget(elements.len(), inst.n(), budget)?;
    let mut count = 0u64;
    if let Some(contrib) = contrib_i128(&elements, inst.x()) {
        if let Some(tau) = inst.tau().to_i128() {
            scan(&contrib, 0i128, |_, s| {
                if *s == tau {
                    count += 1;
                }
                false
            });
        }
    } else {
        let contrib = contrib_big(&elements, inst.x());
        let tau = inst.tau().clone();
        scan(&contrib, BigInt::zero(), |_, s| {
            if *s == tau {
                count += 1;
            }
            false
        });
    }
    Ok(BigUint::from(count))
}

/// Exact achievable-target set S(x) = {c.x : c in C^len(x)}, built by prefix
/// extension: S(x_[l+1]) = union over c of S(x_[l]) + c*x_l.
pub fn achievable_set(
    x: &[BigUint],
    coeffs: &CoefficientSet,
    budget: u64,
) -> Result<AchievableSet, OracleError> {
    let elements = coeffs.elements();
    check_budget(elements.len(), x.len(), budget)?;
    let mut values: BTreeSet<BigInt> = BTreeSet::new();
    values.insert(BigInt::zero());
    for xi in x {
        let xi = BigInt::from(xi.clone());
        let mut next = BTreeSet::new();
        for s in &values {
            for &e in &elements {
                next.insert(s + BigInt::from(e) * &xi);
            }
        }
        values = next;
    }
    Ok(AchievableSet { values })
}
