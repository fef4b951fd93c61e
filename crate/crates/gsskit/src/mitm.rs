//! Meet-in-the-middle solver: O*(|C|^{n/2}) time and space. Also provides the
//! sorted-list pair scan reused by the representation solver, an exact
//! solution counter, and the parity-adjusted variant for C(1).

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use thiserror::Error;

use crate::instance::{GssInstance, Solution};
use crate::work::WorkStats;

#[derive(Debug, Error)]
pub enum MitmError {
    #[error("memory budget exceeded: {needed} bytes needed, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("precondition violated: {0} not sorted by key")]
    Unsorted(&'static str),
    #[error("parity solver requires canonical C(1), got a different set")]
    NotC1,
}

/// Result of a pair scan over two sorted lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairScan {
    /// Indices into the two lists of an accepted pair.
    Found { i: usize, j: usize, pairs_examined: u64 },
    /// All key matches examined, none accepted.
    Exhausted { pairs_examined: u64 },
    /// Pair budget exceeded before the scan finished.
    AbortedOverBudget { pairs_examined: u64 },
}

impl PairScan {
    pub fn pairs_examined(&self) -> u64 {
        match *self {
            PairScan::Found { pairs_examined, .. }
            | PairScan::Exhausted { pairs_examined }
            | PairScan::AbortedOverBudget { pairs_examined } => pairs_examined,
        }
    }
}

/// Two-pointer scan for key(u) + key(v) = target over sorted lists. Every
/// cross pair within matching duplicate blocks is offered to `accept`, so
/// callers can do completeness-dependent filtering (disjointness checks).
/// `max_pairs` bounds the number of examined pairs (pseudosolution budget).
pub fn find_pair_in_sorted_lists<V>(
    l1: &[(BigInt, V)],
    l2: &[(BigInt, V)],
    target: &BigInt,
    max_pairs: Option<u64>,
    mut accept: impl FnMut(&V, &V) -> bool,
) -> Result<PairScan, MitmError> {
    for (name, l) in [("L1", l1), ("L2", l2)] {
        if l.windows(2).any(|w| w[0].0 > w[1].0) {
            return Err(MitmError::Unsorted(name));
        }
    }
    let mut pairs = 0u64;
    let mut i = 0usize;
    let mut j = l2.len();
    while i < l1.len() && j > 0 {
        let sum = &l1[i].0 + &l2[j - 1].0;
        match sum.cmp(target) {
            std::cmp::Ordering::Greater => j -= 1,
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Equal => {
                let i_end = l1[i..].iter().take_while(|e| e.0 == l1[i].0).count() + i;
                let j_start = j - l2[..j].iter().rev().take_while(|e| e.0 == l2[j - 1].0).count();
                for a in i..i_end {
                    for b in j_start..j {
                        pairs += 1;
                        if accept(&l1[a].1, &l2[b].1) {
                            return Ok(PairScan::Found { i: a, j: b, pairs_examined: pairs });
                        }
                        if let Some(cap) = max_pairs {
                            if pairs >= cap {
                                return Ok(PairScan::AbortedOverBudget { pairs_examined: pairs });
                            }
                        }
                    }
                }
                i = i_end;
                j = j_start;
            }
        }
    }
    Ok(PairScan::Exhausted { pairs_examined: pairs })
}

#[derive(Debug, Clone)]
pub struct MitmResult {
    pub solution: Option<Solution>,
    pub work: WorkStats,
}

/// Enumerates C^len(idx) over the given index range as (sum, code) pairs;
/// code is the mixed-radix digit string (position 0 least significant).
fn enumerate_half(inst: &GssInstance, range: std::ops::Range<usize>, elements: &[i64]) -> Vec<(BigInt, u128)> {
    let k = elements.len();
    let idx: Vec<usize> = range.collect();
    let mut out = Vec::with_capacity(k.pow(idx.len() as u32));
    let contrib: Vec<Vec<BigInt>> = idx
        .iter()
        .map(|&i| {
            let xi = BigInt::from(inst.x()[i].clone());
            elements.iter().map(|&e| BigInt::from(e) * &xi).collect()
        })
        .collect();
    let mut digits = vec![0usize; idx.len()];
    let mut sums: Vec<BigInt> = Vec::with_capacity(idx.len() + 1);
    sums.push(BigInt::zero());
    for i in 0..idx.len() {
        let next = &sums[i] + &contrib[i][0];
        sums.push(next);
    }
    let code_of = |digits: &[usize]| -> u128 {
        let mut code = 0u128;
        for &d in digits.iter().rev() {
            code = code * k as u128 + d as u128;
        }
        code
    };
    loop {
        out.push((sums[idx.len()].clone(), code_of(&digits)));
        let mut i = idx.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if digits[i] + 1 < k {
                digits[i] += 1;
                break;
            }
            digits[i] = 0;
        }
        for j in i..idx.len() {
            sums[j + 1] = &sums[j] + &contrib[j][digits[j]];
        }
    }
}

fn decode(code: u128, len: usize, elements: &[i64]) -> Vec<i64> {
    let k = elements.len() as u128;
    let mut c = Vec::with_capacity(len);
    let mut v = code;
    for _ in 0..len {
        c.push(elements[(v % k) as usize]);
        v /= k;
    }
    c
}

fn check_memory(set_size: usize, half: usize, budget_bytes: u64) -> Result<(), MitmError> {
    // ~64 bytes per list entry (BigInt + code)
    let mut entries: u128 = 1;
    for _ in 0..half {
        entries = entries.saturating_mul(set_size as u128);
    }
    let needed = entries.saturating_mul(64);
    if needed > budget_bytes as u128 {
        return Err(MitmError::BudgetExceeded { needed, budget: budget_bytes });
    }
    Ok(())
}

/// Splits the indices in half, enumerates both partial-sum lists, sorts them,
/// and scans for c1.x1 + c2.x2 = tau. The all-zero exclusion (0 in C,
/// tau = 0) is enforced by rejecting the zero/zero pairing.
pub fn solve_mitm(inst: &GssInstance, budget_bytes: u64) -> Result<MitmResult, MitmError> {
    solve_mitm_target(inst, inst.tau().clone(), budget_bytes)
}

fn solve_mitm_target(
    inst: &GssInstance,
    target: BigInt,
    budget_bytes: u64,
) -> Result<MitmResult, MitmError> {
    let elements = inst.coeffs().elements();
    let n = inst.n();
    let h = n / 2;
    check_memory(elements.len(), n - h, budget_bytes)?;

    let mut l1 = enumerate_half(inst, 0..h, &elements);
    let mut l2 = enumerate_half(inst, h..n, &elements);
    let mut work = WorkStats {
        partials_enumerated: l1.len() as u64 + l2.len() as u64,
        ..WorkStats::default()
    };
    l1.sort_by(|a, b| a.0.cmp(&b.0));
    l2.sort_by(|a, b| a.0.cmp(&b.0));

    // exclusion applies against the instance's own tau, not an adjusted one
    let exclude = inst.coeffs().contains(0) && inst.tau().is_zero() && target == *inst.tau();
    let zero_digit = elements.iter().position(|&e| e == 0).map(|z| z as u128);
    let zero_code = |len: usize| -> Option<u128> {
        let z = zero_digit?;
        let k = elements.len() as u128;
        let mut code = 0u128;
        for _ in 0..len {
            code = code * k + z;
        }
        Some(code)
    };
    let zc1 = zero_code(h);
    let zc2 = zero_code(n - h);

    let scan = find_pair_in_sorted_lists(&l1, &l2, &target, None, |&c1, &c2| {
        !(exclude && Some(c1) == zc1 && Some(c2) == zc2)
    })?;
    work.pairs_examined = scan.pairs_examined();
    let solution = if let PairScan::Found { i, j, .. } = scan {
        let mut c = decode(l1[i].1, h, &elements);
        c.extend(decode(l2[j].1, n - h, &elements));
        let sol = Solution { c };
        assert_eq!(crate::instance::dot(&sol.c, inst.x()), target, "mitm solution must verify");
        Some(sol)
    } else {
        None
    };
    Ok(MitmResult { solution, work })
}

/// For canonical C(1): c.x always has the parity of sum(x), so the only
/// reachable element of {tau, tau+1} is the one matching that parity; solves
/// for that adjusted target.
pub fn solve_mitm_parity(inst: &GssInstance, budget_bytes: u64) -> Result<MitmResult, MitmError> {
    let c = inst.coeffs();
    if c.d() != 1 || c.includes_zero() || !c.is_canonical() {
        return Err(MitmError::NotC1);
    }
    let sum_parity = inst.sum_x() % 2;
    let target = if (inst.tau() % 2 - &sum_parity) % 2 == BigInt::zero() {
        inst.tau().clone()
    } else {
        inst.tau() + 1
    };
    solve_mitm_target(inst, target, budget_bytes)
}

/// Exact |{c in C^n : c.x = tau}| via half-sum lists (no all-zero exclusion,
/// matching the oracle counter). Cross-checked against oracle::count_solutions
/// in tests; exists because the enumeration oracle cannot count 4^14 states
/// inside the experiment runtime budgets.
pub fn count_solutions_mitm(inst: &GssInstance, budget_bytes: u64) -> Result<BigUint, MitmError> {
    let elements = inst.coeffs().elements();
    let n = inst.n();
    let h = n / 2;
    check_memory(elements.len(), n - h, budget_bytes)?;
    let mut l1: Vec<BigInt> = enumerate_half(inst, 0..h, &elements).into_iter().map(|e| e.0).collect();
    let mut l2: Vec<BigInt> = enumerate_half(inst, h..n, &elements).into_iter().map(|e| e.0).collect();
    l1.sort();
    l2.sort();
    let mut count = BigUint::zero();
    let mut i = 0usize;
    let mut j = l2.len();
    while i < l1.len() && j > 0 {
        let sum = &l1[i] + &l2[j - 1];
        match sum.cmp(inst.tau()) {
            std::cmp::Ordering::Greater => j -= 1,
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Equal => {
                let i_run = l1[i..].iter().take_while(|v| **v == l1[i]).count();
                let j_run = l2[..j].iter().rev().take_while(|v| **v == l2[j - 1]).count();
                count += BigUint::from(i_run) * BigUint::from(j_run);
                i += i_run;
                j -= j_run;
            }
        }
    }
    Ok(count)
}
